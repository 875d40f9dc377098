//! The line-oriented `.crn` network format.
//!
//! ```text
//! # comment
//! species: X1 X2
//! 0 -> X1 + X2 @ 2
//! 2*X2 -> X1 + 3*X2 @ 1
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::rate::Rate;
use super::system::{Reaction, ReactionSystem};
use super::vector::ComplexVector;
use crate::error::{Error, ParseError, Result};

pub fn parse_network(text: &str) -> Result<ReactionSystem, ParseError> {
    let mut species: Option<(Vec<String>, HashMap<String, usize>)> = None;
    let mut reactions: Vec<(usize, Reaction)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((names, index)) = &species else {
            let rest = line
                .strip_prefix("species:")
                .ok_or_else(|| ParseError::new(line_no, "expected `species:` header before reactions"))?;
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return Err(ParseError::new(line_no, "species list is empty"));
            }
            let mut index = HashMap::new();
            for (i, name) in names.iter().enumerate() {
                if !is_identifier(name) {
                    return Err(ParseError::new(line_no, format!("invalid species name `{name}`")));
                }
                if index.insert(name.clone(), i).is_some() {
                    return Err(ParseError::new(line_no, format!("species `{name}` listed twice")));
                }
            }
            species = Some((names, index));
            continue;
        };

        let (lhs, rate) = line
            .split_once('@')
            .ok_or_else(|| ParseError::new(line_no, "expected `<complex> -> <complex> @ <rate>`"))?;
        let (src, dst) = lhs
            .split_once("->")
            .ok_or_else(|| ParseError::new(line_no, "missing `->`"))?;
        let source = parse_complex(src, index, names.len()).map_err(|m| ParseError::new(line_no, m))?;
        let target = parse_complex(dst, index, names.len()).map_err(|m| ParseError::new(line_no, m))?;
        let rate: Rate = rate.trim().parse().map_err(|e| ParseError::new(line_no, format!("{e}")))?;
        if !rate.is_positive() {
            return Err(ParseError::new(line_no, format!("rate must be positive, got {rate}")));
        }
        if source == target {
            return Err(ParseError::new(line_no, "source equals target"));
        }
        if let Some((first, _)) = reactions.iter().find(|(_, r)| r.source() == &source && r.target() == &target) {
            return Err(ParseError::new(line_no, format!("duplicate reaction (first defined on line {first})")));
        }
        let reaction = Reaction::new(source, target, rate).map_err(|e| ParseError::new(line_no, e.to_string()))?;
        reactions.push((line_no, reaction));
    }

    let (names, _) = species.ok_or_else(|| ParseError::new(0, "missing `species:` header"))?;
    ReactionSystem::new(names, reactions.into_iter().map(|(_, r)| r).collect())
        .map_err(|e| ParseError::new(0, e.to_string()))
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_complex(text: &str, index: &HashMap<String, usize>, dim: usize) -> Result<ComplexVector, String> {
    let text = text.trim();
    let mut coeffs = vec![0u64; dim];
    if text == "0" {
        return Ok(ComplexVector::new(coeffs));
    }
    if text.is_empty() {
        return Err("empty complex (write `0` for the empty complex)".into());
    }
    for term in text.split('+') {
        let term = term.trim();
        let (count, name) = match term.split_once('*') {
            Some((c, n)) => {
                let c = c.trim().parse::<u64>().map_err(|_| format!("invalid coefficient in `{term}`"))?;
                (c, n.trim())
            }
            None => (1, term),
        };
        let &i = index.get(name).ok_or_else(|| format!("unknown species `{name}`"))?;
        coeffs[i] += count;
    }
    Ok(ComplexVector::new(coeffs))
}

pub fn format_complex(c: &ComplexVector, species: &[String]) -> String {
    let terms: Vec<String> = c
        .coeffs()
        .iter()
        .zip(species)
        .filter(|(&n, _)| n > 0)
        .map(|(&n, name)| if n == 1 { name.clone() } else { format!("{n}*{name}") })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

pub fn format_reaction(r: &Reaction, species: &[String]) -> String {
    format!(
        "{} -> {} @ {}",
        format_complex(r.source(), species),
        format_complex(r.target(), species),
        r.rate()
    )
}

/// Serializes a system; reactions appear in lexicographic source order.
pub fn write_network(sys: &ReactionSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "species: {}", sys.species().join(" "));
    for r in sys.reactions() {
        let _ = writeln!(out, "{}", format_reaction(r, sys.species()));
    }
    out
}

pub fn read_network_file(path: impl AsRef<Path>) -> Result<ReactionSystem> {
    let text = std::fs::read_to_string(path)?;
    parse_network(&text).map_err(Error::from)
}

pub fn write_network_file(path: impl AsRef<Path>, sys: &ReactionSystem) -> Result<()> {
    std::fs::write(path, write_network(sys))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MAIN: &str = "\
# three reactions along z = (1,1)
species: X1 X2

0 -> X1 + X2 @ 2
2*X2 -> X1 + 3*X2 @ 1   # second
X1 + X2 -> 2*X1 + 2*X2 @ 1
";

    #[test]
    fn parses_and_writes() {
        let sys = parse_network(MAIN).unwrap();
        assert_eq!(sys.len(), 3);
        assert_eq!(sys.order(), 2);
        let text = write_network(&sys);
        assert_eq!(
            text,
            "species: X1 X2\n0 -> X1 + X2 @ 2\n2*X2 -> X1 + 3*X2 @ 1\nX1 + X2 -> 2*X1 + 2*X2 @ 1\n"
        );
        assert_eq!(parse_network(&text).unwrap(), sys);
    }

    #[test]
    fn rational_rates_are_kept_exact() {
        let sys = parse_network("species: A\n0 -> 4*A @ 1/4\nA -> 0 @ 1").unwrap();
        assert!(sys.reactions().iter().all(|r| r.rate().is_exact()));
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            ("species: A\nB -> 0 @ 1", 2, "unknown species"),
            ("species: A\nA -> 0 @ 0", 2, "positive"),
            ("species: A\nA -> 0 @ -1", 2, "positive"),
            ("species: A\nA -> 0 @ 1\nA -> 0 @ 2", 3, "duplicate"),
            ("species: A\nA -> A @ 1", 2, "source equals target"),
            ("A -> 0 @ 1", 1, "species"),
            ("species: A\nA -> 0", 2, "expected"),
            ("species: A\n -> A @ 1", 2, "empty complex"),
        ];
        for (text, line, needle) in cases {
            let err = parse_network(text).unwrap_err();
            assert_eq!(err.line, line, "{text}");
            assert!(err.message.contains(needle), "{text}: {}", err.message);
        }
    }
}
