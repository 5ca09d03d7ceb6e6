//! Fibration description files.
//!
//! ```text
//! # comment
//! [lattice]
//! U' + D16
//! [classes]
//! f0 = e - a1 - 2a2 - a15 - a16      # combination of known names
//! x  = (1, 0, 0, -1, ...)            # coordinate tuple
//! [fibration]
//! e = u1
//! components = f0, a1, a2
//! sections = u2
//! ```
//!
//! Basis labels of the lattice are always available as names.

use num_bigint::BigInt;
use thiserror::Error;

use k3lat::lattice::expr::{parse_lattice, ParseError};
use k3lat::lattice::{Lattice, LatticeClass};

#[derive(Debug, Error)]
pub enum DescribeError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing [{0}] section")]
    Missing(&'static str),
    #[error("lattice: {0}")]
    Lattice(#[from] ParseError),
}

#[derive(Debug)]
pub struct Description {
    pub lattice: Lattice,
    pub classes: Vec<(String, LatticeClass)>,
    pub fiber: String,
    pub components: Vec<String>,
    pub sections: Vec<String>,
}

impl Description {
    pub fn class(&self, name: &str) -> Option<&LatticeClass> {
        self.classes.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

#[derive(PartialEq)]
enum Section {
    None,
    Lattice,
    Classes,
    Fibration,
}

pub fn parse(text: &str) -> Result<Description, DescribeError> {
    let mut section = Section::None;
    let mut lattice_src = String::new();
    let mut class_lines = Vec::new();
    let mut fiber = None;
    let mut components = Vec::new();
    let mut sections = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = match name.trim() {
                "lattice" => Section::Lattice,
                "classes" => Section::Classes,
                "fibration" => Section::Fibration,
                other => return Err(syntax(line_no, format!("unknown section [{other}]"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(syntax(line_no, "content before the first section".into())),
            Section::Lattice => {
                lattice_src.push_str(line);
                lattice_src.push(' ');
            }
            Section::Classes => {
                let (name, value) = split_assignment(line, line_no)?;
                class_lines.push((line_no, name, value));
            }
            Section::Fibration => {
                let (key, value) = split_assignment(line, line_no)?;
                match key.as_str() {
                    "e" => fiber = Some(value.trim().to_string()),
                    "components" => components = name_list(&value),
                    "sections" => sections = name_list(&value),
                    other => return Err(syntax(line_no, format!("unknown key `{other}`"))),
                }
            }
        }
    }

    if lattice_src.trim().is_empty() {
        return Err(DescribeError::Missing("lattice"));
    }
    let lattice = parse_lattice(&lattice_src)?;
    let fiber = fiber.ok_or(DescribeError::Missing("fibration"))?;

    let n = lattice.rank();
    let mut classes: Vec<(String, LatticeClass)> =
        lattice.labels().iter().enumerate().map(|(i, l)| (l.clone(), LatticeClass::unit(n, i))).collect();
    for (line_no, name, value) in class_lines {
        let class = if value.trim_start().starts_with('(') {
            parse_tuple(&value, n).map_err(|m| syntax(line_no, m))?
        } else {
            parse_combination(&value, &classes, n).map_err(|m| syntax(line_no, m))?
        };
        if let Some(slot) = classes.iter_mut().find(|(k, _)| *k == name) {
            slot.1 = class;
        } else {
            classes.push((name, class));
        }
    }
    Ok(Description { lattice, classes, fiber, components, sections })
}

fn syntax(line: usize, msg: String) -> DescribeError {
    DescribeError::Syntax { line, msg }
}

fn split_assignment(line: &str, line_no: usize) -> Result<(String, String), DescribeError> {
    let (k, v) = line.split_once('=').ok_or_else(|| syntax(line_no, "expected `name = value`".into()))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(syntax(line_no, "empty name".into()));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

fn name_list(value: &str) -> Vec<String> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

fn parse_tuple(value: &str, rank: usize) -> Result<LatticeClass, String> {
    let inner = value
        .trim()
        .strip_prefix('(')
        .and_then(|v| v.strip_suffix(')'))
        .ok_or_else(|| "unterminated tuple".to_string())?;
    let coords = inner
        .split(',')
        .map(|s| s.trim().parse::<BigInt>().map_err(|_| format!("bad integer `{}`", s.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != rank {
        return Err(format!("tuple has {} entries, lattice has rank {rank}", coords.len()));
    }
    Ok(LatticeClass::new(coords))
}

/// `[+-] [int] name` terms, e.g. `e - f1 - 2f2`.
fn parse_combination(value: &str, known: &[(String, LatticeClass)], rank: usize) -> Result<LatticeClass, String> {
    let chars: Vec<char> = value.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err("empty value".into());
    }
    let mut pos = 0;
    let mut out = LatticeClass::zero(rank);
    while pos < chars.len() {
        let mut sign = BigInt::from(1);
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        } else if pos > 0 {
            return Err(format!("expected `+` or `-` at `{}`", chars[pos]));
        }
        let start = pos;
        while pos < chars.len() && chars[pos].is_ascii_digit() {
            pos += 1;
        }
        let coeff: BigInt = if pos > start {
            chars[start..pos].iter().collect::<String>().parse().expect("digits")
        } else {
            BigInt::from(1)
        };
        if pos < chars.len() && chars[pos] == '*' {
            pos += 1;
        }
        let name_start = pos;
        while pos < chars.len() && !matches!(chars[pos], '+' | '-') {
            pos += 1;
        }
        let name: String = chars[name_start..pos].iter().collect();
        if name.is_empty() {
            return Err("missing class name".into());
        }
        let class = known
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| format!("unknown class `{name}`"))?;
        out = &out + &(&(sign * coeff) * class);
    }
    Ok(out)
}
