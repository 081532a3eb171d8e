//! Line-oriented file formats: groups, lattice elements, filters, graphs
//! and coset-tree dumps. Parsing is strict up to trailing whitespace;
//! writers are deterministic down to the byte.

use profinite_core::filter::FilterChain;
use profinite_core::lattice::LatticeElement;
use profinite_core::mekler::Graph;
use profinite_core::FiniteGroup;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, message: message.into() }
}

/// A strict line cursor; lines are trimmed of trailing whitespace only.
struct Lines<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { lines: text.lines().map(|l| l.trim_end()).collect(), next: 0 }
    }

    fn take(&mut self, what: &str) -> Result<&'a str, FormatError> {
        let line = self.lines.get(self.next).copied();
        self.next += 1;
        line.ok_or_else(|| err(self.next, format!("unexpected end of file, expected {what}")))
    }

    fn line_number(&self) -> usize {
        self.next
    }

    fn at_end(&self) -> bool {
        self.next >= self.lines.len()
    }

    fn expect_end(&mut self) -> Result<(), FormatError> {
        // Trailing blank lines are tolerated.
        while let Some(line) = self.lines.get(self.next) {
            if !line.is_empty() {
                return Err(err(self.next + 1, "trailing content"));
            }
            self.next += 1;
        }
        Ok(())
    }
}

fn parse_numbers(line: &str, line_no: usize) -> Result<Vec<usize>, FormatError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| err(line_no, format!("expected a number, found {tok:?}")))
        })
        .collect()
}

pub fn write_group(g: &FiniteGroup) -> String {
    let mut out = String::new();
    writeln!(out, "group {}", g.order()).unwrap();
    writeln!(out, "identity {}", g.identity()).unwrap();
    for a in 0..g.order() {
        for b in 0..g.order() {
            if b > 0 {
                out.push(' ');
            }
            write!(out, "{}", g.mul(a, b)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn read_group(text: &str) -> Result<FiniteGroup, FormatError> {
    let mut lines = Lines::new(text);
    let g = read_group_block(&mut lines)?;
    lines.expect_end()?;
    Ok(g)
}

fn read_group_block(lines: &mut Lines) -> Result<FiniteGroup, FormatError> {
    let header = lines.take("'group <order>'")?;
    let order: usize = header
        .strip_prefix("group ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err(lines.line_number(), "expected 'group <order>'"))?;
    let identity_line = lines.take("'identity <index>'")?;
    let identity: usize = identity_line
        .strip_prefix("identity ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err(lines.line_number(), "expected 'identity <index>'"))?;
    let mut table = Vec::with_capacity(order * order);
    for _ in 0..order {
        let row_line = lines.take("a table row")?;
        let row = parse_numbers(row_line, lines.line_number())?;
        if row.len() != order {
            return Err(err(
                lines.line_number(),
                format!("row has {} entries, expected {order}", row.len()),
            ));
        }
        for v in row {
            if v >= order {
                return Err(err(lines.line_number(), format!("entry {v} out of range")));
            }
            table.push(v as u16);
        }
    }
    FiniteGroup::from_table(order, identity, table)
        .map_err(|e| err(lines.line_number(), e.to_string()))
}

pub fn write_lattice_element(l: &LatticeElement) -> String {
    let mut out = String::new();
    writeln!(out, "epi support={}", l.support()).unwrap();
    out.push_str(&write_group(l.target()));
    out.push_str("images");
    for &i in l.images() {
        write!(out, " {i}").unwrap();
    }
    out.push('\n');
    out
}

pub fn read_lattice_element(text: &str) -> Result<LatticeElement, FormatError> {
    let mut lines = Lines::new(text);
    let l = read_lattice_element_block(&mut lines)?;
    lines.expect_end()?;
    Ok(l)
}

fn read_lattice_element_block(lines: &mut Lines) -> Result<LatticeElement, FormatError> {
    let header = lines.take("'epi support=<m>'")?;
    let support: usize = header
        .strip_prefix("epi support=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err(lines.line_number(), "expected 'epi support=<m>'"))?;
    let target = read_group_block(lines)?;
    let images_line = lines.take("'images ...'")?;
    let rest = images_line
        .strip_prefix("images")
        .ok_or_else(|| err(lines.line_number(), "expected 'images ...'"))?;
    let images = parse_numbers(rest, lines.line_number())?;
    if images.len() != support {
        return Err(err(
            lines.line_number(),
            format!("{} images given for support {support}", images.len()),
        ));
    }
    LatticeElement::new(target, images).map_err(|e| err(lines.line_number(), e.to_string()))
}

pub fn write_filter(chain: &FilterChain) -> String {
    let developed = chain.developed();
    let mut out = String::new();
    writeln!(out, "filter depth={}", developed.len()).unwrap();
    for (i, element) in developed.iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        out.push_str(&write_lattice_element(element));
    }
    out
}

pub fn read_filter(text: &str) -> Result<FilterChain, FormatError> {
    let mut lines = Lines::new(text);
    let header = lines.take("'filter depth=<d>'")?;
    let depth: usize = header
        .strip_prefix("filter depth=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err(lines.line_number(), "expected 'filter depth=<d>'"))?;
    let mut elements = Vec::with_capacity(depth);
    for i in 0..depth {
        if i > 0 {
            let sep = lines.take("'---'")?;
            if sep != "---" {
                return Err(err(lines.line_number(), "expected '---' between elements"));
            }
        }
        elements.push(read_lattice_element_block(&mut lines)?);
    }
    lines.expect_end()?;
    FilterChain::from_elements(elements).map_err(|e| err(0, e.to_string()))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "graph {}", g.vertex_count()).unwrap();
    for (r, s) in g.edges() {
        writeln!(out, "edge {r} {s}").unwrap();
    }
    out
}

pub fn read_graph(text: &str) -> Result<Graph, FormatError> {
    let mut lines = Lines::new(text);
    let header = lines.take("'graph <n>'")?;
    let n: usize = header
        .strip_prefix("graph ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err(lines.line_number(), "expected 'graph <n>'"))?;
    let mut edges = Vec::new();
    let mut previous: Option<(usize, usize)> = None;
    while !lines.at_end() {
        let line = lines.take("'edge <r> <s>'")?;
        if line.is_empty() {
            continue;
        }
        let rest = line
            .strip_prefix("edge ")
            .ok_or_else(|| err(lines.line_number(), "expected 'edge <r> <s>'"))?;
        let nums = parse_numbers(rest, lines.line_number())?;
        let [r, s] = nums[..] else {
            return Err(err(lines.line_number(), "edge needs exactly two endpoints"));
        };
        if r >= s {
            return Err(err(lines.line_number(), "edges must satisfy r < s"));
        }
        if let Some(prev) = previous {
            if (r, s) <= prev {
                return Err(err(
                    lines.line_number(),
                    "edges must be in strictly increasing lexicographic order",
                ));
            }
        }
        previous = Some((r, s));
        edges.push((r, s));
    }
    Graph::new(n, edges).map_err(|e| err(0, e.to_string()))
}

pub fn write_tree_dump(tree: &profinite_core::cantor::CosetTree) -> String {
    let mut out = String::new();
    writeln!(out, "tree depth={}", tree.depth()).unwrap();
    for n in 0..tree.depth() {
        writeln!(out, "level {n} k={}", tree.branching()[n]).unwrap();
        for (i, word) in tree.representatives(n).iter().enumerate() {
            writeln!(out, "rep {i} {word}").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use profinite_core::filter::cyclic_power_chain;

    #[test]
    fn group_round_trip() {
        let g = FiniteGroup::symmetric3();
        let text = write_group(&g);
        let back = read_group(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn group_rejects_garbage() {
        assert!(read_group("group 2\nidentity 0\n0 1\n1 1\n").is_err());
        assert!(read_group("group x\n").is_err());
        assert!(read_group("group 2\nidentity 0\n0 1\n").is_err());
    }

    #[test]
    fn trailing_whitespace_tolerated() {
        let g = FiniteGroup::cyclic(2);
        let text = write_group(&g).replace('\n', "  \n");
        assert_eq!(read_group(&text).unwrap(), g);
    }

    #[test]
    fn lattice_element_round_trip() {
        let l = LatticeElement::new(FiniteGroup::cyclic(4), vec![1, 2]).unwrap();
        let text = write_lattice_element(&l);
        assert_eq!(read_lattice_element(&text).unwrap(), l);
    }

    #[test]
    fn filter_round_trip() {
        let mut chain = cyclic_power_chain(2);
        chain.develop(3).unwrap();
        let text = write_filter(&chain);
        let back = read_filter(&text).unwrap();
        assert_eq!(back.developed(), chain.developed());
    }

    #[test]
    fn graph_round_trip_and_order_check() {
        let g = Graph::petersen();
        let text = write_graph(&g);
        assert_eq!(read_graph(&text).unwrap(), g);
        assert!(read_graph("graph 3\nedge 1 0\n").is_err());
        assert!(read_graph("graph 3\nedge 0 2\nedge 0 1\n").is_err());
    }
}
