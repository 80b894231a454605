//! Line-oriented group catalog files.
//!
//! ```text
//! # binary tetrahedral group on the nonzero vectors of (Z/3)^2
//! group SL23 degree 8
//! 4 5 6 7 8 1 2 3
//! 2 1 4 3 6 5 8 7
//! end
//! ```
//!
//! Each generator line lists the images of points `1..=d`.

use std::collections::HashSet;
use std::io::BufRead;

use super::{FiniteGroup, GroupError, DEFAULT_ORDER_CAP};

struct Pending {
    name: String,
    degree: usize,
    header_line: usize,
    generators: Vec<Vec<usize>>,
}

fn parse_error(line: usize, message: impl Into<String>) -> GroupError {
    GroupError::ParseError { line, message: message.into() }
}

pub fn parse_catalog<R: BufRead>(reader: R) -> Result<Vec<FiniteGroup>, GroupError> {
    let mut groups = Vec::new();
    let mut names = HashSet::new();
    let mut pending: Option<Pending> = None;
    let mut last_line = 0;

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = line.map_err(|e| parse_error(lineno, e.to_string()))?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match (&mut pending, tokens.as_slice()) {
            (None, ["group", name, "degree", d]) => {
                let degree: usize = d.parse().map_err(|_| parse_error(lineno, format!("bad degree `{d}`")))?;
                if degree == 0 {
                    return Err(parse_error(lineno, "degree must be positive"));
                }
                if !names.insert(name.to_string()) {
                    return Err(parse_error(lineno, format!("duplicate group name `{name}`")));
                }
                pending = Some(Pending { name: name.to_string(), degree, header_line: lineno, generators: Vec::new() });
            }
            (None, _) => {
                return Err(parse_error(lineno, "expected `group <name> degree <d>`"));
            }
            (Some(_), ["end"]) => {
                let p = pending.take().expect("matched Some");
                let group = FiniteGroup::from_permutations(p.name, p.degree, &p.generators, DEFAULT_ORDER_CAP)
                    .map_err(|e| match e {
                        GroupError::InvalidPermutation(msg) => parse_error(p.header_line, msg),
                        other => other,
                    })?;
                groups.push(group);
            }
            (Some(p), _) => {
                let mut images = Vec::with_capacity(p.degree);
                for tok in &tokens {
                    let v: usize = tok.parse().map_err(|_| parse_error(lineno, format!("bad point `{tok}`")))?;
                    if v == 0 || v > p.degree {
                        return Err(parse_error(lineno, format!("point {v} outside 1..={}", p.degree)));
                    }
                    images.push(v - 1);
                }
                if images.len() != p.degree {
                    return Err(parse_error(lineno, format!("expected {} images, found {}", p.degree, images.len())));
                }
                let distinct: HashSet<_> = images.iter().collect();
                if distinct.len() != p.degree {
                    return Err(parse_error(lineno, "generator is not a permutation"));
                }
                p.generators.push(images);
            }
        }
    }
    if let Some(p) = pending {
        return Err(parse_error(last_line.max(p.header_line), format!("group `{}` is missing `end`", p.name)));
    }
    Ok(groups)
}
