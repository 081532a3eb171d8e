//! Recursive-descent parsers for free-group words and graph-group element
//! expressions, with positioned errors.
//!
//! Word grammar:      word := "e" | factor ("*" factor)*
//!                    factor := ("x" INT | "[" word "," word "]") ("^" SINT)?
//! Element grammar:   element := "e" | term ("*" term)*
//!                    term := ("x" INT | "c" INT "," INT) ("^" SINT)?

use profinite_core::mekler::{MeklerContext, MeklerElement, MeklerError};
use profinite_core::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at position {position}: expected {expected}")]
pub struct SyntaxError {
    pub position: usize,
    pub expected: &'static str,
}

struct Scanner<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner { text: text.as_bytes(), pos: 0 }
    }

    fn skip_spaces(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_spaces();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8, expected: &'static str) -> Result<(), SyntaxError> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(SyntaxError { position: self.pos, expected })
        }
    }

    fn integer(&mut self, expected: &'static str) -> Result<i64, SyntaxError> {
        self.skip_spaces();
        let start = self.pos;
        let negative = self.eat(b'-');
        let digits_start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(SyntaxError { position: start, expected });
        }
        let s = core::str::from_utf8(&self.text[digits_start..self.pos]).unwrap();
        let value: i64 = s.parse().map_err(|_| SyntaxError { position: start, expected })?;
        Ok(if negative { -value } else { value })
    }

    fn exponent(&mut self) -> Result<i64, SyntaxError> {
        if self.eat(b'^') {
            self.integer("an integer exponent")
        } else {
            Ok(1)
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses a freely reduced word.
pub fn parse_word(text: &str) -> Result<Word, SyntaxError> {
    let mut scanner = Scanner::new(text);
    let word = parse_word_body(&mut scanner)?;
    if !scanner.at_end() {
        return Err(SyntaxError { position: scanner.pos, expected: "'*' or end of input" });
    }
    Ok(word)
}

fn parse_word_body(scanner: &mut Scanner) -> Result<Word, SyntaxError> {
    if scanner.eat(b'e') {
        return Ok(Word::identity());
    }
    let mut word = parse_word_factor(scanner)?;
    while scanner.eat(b'*') {
        let next = parse_word_factor(scanner)?;
        word = word.concat(&next);
    }
    Ok(word)
}

fn parse_word_factor(scanner: &mut Scanner) -> Result<Word, SyntaxError> {
    let base = if scanner.eat(b'x') {
        let index = scanner.integer("a generator index")?;
        if index < 0 {
            return Err(SyntaxError { position: scanner.pos, expected: "a nonnegative index" });
        }
        Word::generator(index as usize)
    } else if scanner.eat(b'[') {
        let left = parse_word_body(scanner)?;
        scanner.expect(b',', "','")?;
        let right = parse_word_body(scanner)?;
        scanner.expect(b']', "']'")?;
        Word::commutator(&left, &right)
    } else {
        return Err(SyntaxError {
            position: scanner.pos,
            expected: "'x<index>', '[word,word]' or 'e'",
        });
    };
    let exp = scanner.exponent()?;
    Ok(repeat_word(&base, exp))
}

fn repeat_word(base: &Word, exp: i64) -> Word {
    let unit = if exp < 0 { base.inverse() } else { base.clone() };
    let mut out = Word::identity();
    for _ in 0..exp.unsigned_abs() {
        out = out.concat(&unit);
    }
    out
}

/// Errors from element parsing: syntax or context violations.
#[derive(Debug, thiserror::Error)]
pub enum ElementParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Context(#[from] MeklerError),
}

/// Parses a graph-group element in the given context, reducing to normal
/// form. Central generators on edges are rejected.
pub fn parse_element(
    text: &str,
    ctx: &MeklerContext,
) -> Result<MeklerElement, ElementParseError> {
    let mut scanner = Scanner::new(text);
    let mut acc = ctx.zero();
    if scanner.eat(b'e') {
        if !scanner.at_end() {
            return Err(SyntaxError { position: scanner.pos, expected: "end of input" }.into());
        }
        return Ok(acc);
    }
    loop {
        let term = parse_element_term(&mut scanner, ctx)?;
        acc = ctx.multiply(&acc, &term)?;
        if !scanner.eat(b'*') {
            break;
        }
    }
    if !scanner.at_end() {
        return Err(SyntaxError { position: scanner.pos, expected: "'*' or end of input" }.into());
    }
    Ok(acc)
}

fn parse_element_term(
    scanner: &mut Scanner,
    ctx: &MeklerContext,
) -> Result<MeklerElement, ElementParseError> {
    if scanner.eat(b'x') {
        let index = scanner.integer("a vertex index")?;
        if index < 0 || index as usize >= ctx.vertex_count() {
            return Err(MeklerError::IndexOutOfRange(index.unsigned_abs() as usize).into());
        }
        let exp = scanner.exponent()?;
        Ok(ctx.power(&ctx.generator(index as usize)?, exp)?)
    } else if scanner.eat(b'c') {
        let r = scanner.integer("a vertex index")?;
        scanner.expect(b',', "','")?;
        let s = scanner.integer("a vertex index")?;
        if r < 0 || s < 0 {
            return Err(SyntaxError {
                position: scanner.pos,
                expected: "nonnegative indices",
            }
            .into());
        }
        let exp = scanner.exponent()?;
        Ok(ctx.power(&ctx.central_generator(r as usize, s as usize)?, exp)?)
    } else {
        Err(SyntaxError { position: scanner.pos, expected: "'x<i>' or 'c<r>,<s>'" }.into())
    }
}

/// Renders an element in the grammar: central part first, then the vertex
/// part along ascending indices; `e` for the identity.
pub fn render_element(ctx: &MeklerContext, element: &MeklerElement) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (idx, &(r, s)) in ctx.non_edges().iter().enumerate() {
        match element.beta()[idx] {
            0 => {}
            1 => terms.push(format!("c{r},{s}")),
            b => terms.push(format!("c{r},{s}^{b}")),
        }
    }
    for (i, &a) in element.alpha().iter().enumerate() {
        match a {
            0 => {}
            1 => terms.push(format!("x{i}")),
            a => terms.push(format!("x{i}^{a}")),
        }
    }
    if terms.is_empty() {
        "e".to_string()
    } else {
        terms.join("*")
    }
}
