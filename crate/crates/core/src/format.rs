//! Plain-text file formats.
//!
//! Cayley table: first line `n`, then `n` lines of `n` space-separated
//! element indices.
//!
//! Cochain: first line `degree modulus`, second line the group order `n`,
//! then `n^degree` values in lexicographic argument order (first argument
//! most significant). Values may be split across lines freely; the writer
//! puts `n` values per line.
//!
//! In both formats `#` starts a comment that runs to the end of the line and
//! blank lines are ignored.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{
  cochain::{Cochain, CochainError},
  group::{FiniteGroup, GroupError},
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
  #[error("line {line}: {message}")]
  Syntax { line: usize, message: String },
  #[error("unexpected end of input: {0}")]
  Truncated(String),
  #[error("cochain is for a group of order {file}, but the group has order {group}")]
  OrderMismatch { file: usize, group: usize },
  #[error(transparent)]
  Group(#[from] GroupError),
  #[error(transparent)]
  Cochain(#[from] CochainError),
}

/// Whitespace-separated tokens with their 1-based line numbers.
fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
  text.lines().enumerate().flat_map(|(i, line)| {
    let content = line.split('#').next().unwrap_or("");
    content.split_whitespace().map(move |t| (i + 1, t))
  })
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
  text.lines().enumerate().filter_map(|(i, line)| {
    let toks: Vec<&str> = line.split('#').next().unwrap_or("").split_whitespace().collect();
    (!toks.is_empty()).then_some((i + 1, toks))
  })
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, FormatError> {
  tok.parse().map_err(|_| FormatError::Syntax { line, message: format!("expected {what}, found `{tok}`") })
}

/// Parses a Cayley table without validating the group axioms.
pub fn parse_table(text: &str) -> Result<Vec<Vec<usize>>, FormatError> {
  let mut lines = data_lines(text);
  let (line, header) = lines.next().ok_or_else(|| FormatError::Truncated("missing order line".into()))?;
  if header.len() != 1 {
    return Err(FormatError::Syntax { line, message: "first line must hold only the order n".into() });
  }
  let n: usize = parse_num(line, header[0], "group order")?;
  let mut rows = Vec::with_capacity(n);
  for (line, toks) in lines {
    if rows.len() == n {
      return Err(FormatError::Syntax { line, message: format!("more than {n} table rows") });
    }
    if toks.len() != n {
      return Err(FormatError::Syntax { line, message: format!("expected {n} entries, found {}", toks.len()) });
    }
    let row = toks.iter().map(|t| parse_num(line, t, "element index")).collect::<Result<Vec<usize>, _>>()?;
    rows.push(row);
  }
  if rows.len() != n {
    return Err(FormatError::Truncated(format!("expected {n} table rows, found {}", rows.len())));
  }
  Ok(rows)
}

/// Parses and validates a group.
pub fn parse_group(text: &str, name: &str) -> Result<FiniteGroup, FormatError> {
  Ok(FiniteGroup::from_cayley_table(&parse_table(text)?, name)?)
}

pub fn write_group(group: &FiniteGroup) -> String {
  let mut out = format!("# {}\n{}\n", group.name(), group.order());
  for row in group.table() {
    let cells: Vec<String> = row.iter().map(usize::to_string).collect();
    out.push_str(&cells.join(" "));
    out.push('\n');
  }
  out
}

/// A cochain as stored on disk, before it is attached to a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainFile {
  pub degree:  usize,
  pub modulus: u64,
  pub order:   usize,
  pub values:  Vec<u64>,
}

impl CochainFile {
  pub fn parse(text: &str) -> Result<Self, FormatError> {
    let mut toks = tokens(text);
    let mut next = |what: &str| toks.next().ok_or_else(|| FormatError::Truncated(format!("missing {what}")));
    let (line, t) = next("degree")?;
    let degree: usize = parse_num(line, t, "degree")?;
    let (line, t) = next("modulus")?;
    let modulus: u64 = parse_num(line, t, "modulus")?;
    let (line, t) = next("group order")?;
    let order: usize = parse_num(line, t, "group order")?;
    let count = u32::try_from(degree)
      .ok()
      .and_then(|d| order.checked_pow(d))
      .ok_or_else(|| FormatError::Syntax { line, message: "cochain too large".into() })?;
    let mut values = Vec::with_capacity(count.min(1 << 20));
    for (line, t) in toks {
      if values.len() == count {
        return Err(FormatError::Syntax { line, message: format!("more than {count} values") });
      }
      values.push(parse_num(line, t, "value")?);
    }
    if values.len() != count {
      return Err(FormatError::Truncated(format!("expected {count} values, found {}", values.len())));
    }
    Ok(Self { degree, modulus, order, values })
  }

  pub fn from_cochain(c: &Cochain) -> Self {
    Self { degree: c.degree(), modulus: c.modulus(), order: c.group().order(), values: c.values().to_vec() }
  }

  pub fn into_cochain(self, group: &Arc<FiniteGroup>) -> Result<Cochain, FormatError> {
    if self.order != group.order() {
      return Err(FormatError::OrderMismatch { file: self.order, group: group.order() });
    }
    Ok(Cochain::new(group.clone(), self.degree, self.modulus, self.values)?)
  }

  pub fn write(&self) -> String {
    let mut out = format!("{} {}\n{}\n", self.degree, self.modulus, self.order);
    let width = if self.degree == 0 { 1 } else { self.order.max(1) };
    for chunk in self.values.chunks(width) {
      let cells: Vec<String> = chunk.iter().map(u64::to_string).collect();
      out.push_str(&cells.join(" "));
      out.push('\n');
    }
    out
  }
}

pub fn parse_cochain(text: &str, group: &Arc<FiniteGroup>) -> Result<Cochain, FormatError> {
  CochainFile::parse(text)?.into_cochain(group)
}

pub fn write_cochain(c: &Cochain) -> String { CochainFile::from_cochain(c).write() }

#[cfg(test)]
mod tests {
  use proptest::prelude::*;

  use super::*;

  #[test]
  fn group_round_trip() {
    for g in [FiniteGroup::quaternion8(), FiniteGroup::symmetric(3).unwrap(), FiniteGroup::trivial()] {
      let back = parse_group(&write_group(&g), g.name()).unwrap();
      assert_eq!(back.table(), g.table());
    }
  }

  #[test]
  fn group_with_comments() {
    let text = "# Z2\n2  # order\n\n0 1\n1 0 # last row\n";
    assert_eq!(parse_group(text, "Z2").unwrap().table(), vec![vec![0, 1], vec![1, 0]]);
  }

  #[test]
  fn group_diagnostics() {
    assert!(matches!(parse_table("2\n0 1\n"), Err(FormatError::Truncated(_))));
    assert_eq!(
      parse_table("2\n0 1\n1 x\n"),
      Err(FormatError::Syntax { line: 3, message: "expected element index, found `x`".into() })
    );
    assert!(matches!(parse_table("2\n0 1 1\n1 0\n"), Err(FormatError::Syntax { line: 2, .. })));
    assert!(matches!(
      parse_group("2\n0 0\n0 0\n", "bad"),
      Err(FormatError::Group(GroupError::NoIdentity))
    ));
  }

  #[test]
  fn cochain_diagnostics() {
    let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
    assert!(matches!(parse_cochain("1 2\n3\n0 0 0\n", &g), Err(FormatError::OrderMismatch { file: 3, group: 2 })));
    assert!(matches!(parse_cochain("2 2\n2\n0 0 0\n", &g), Err(FormatError::Truncated(_))));
    assert!(matches!(parse_cochain("1 2\n2\n0 0 0\n", &g), Err(FormatError::Syntax { line: 3, .. })));
    assert!(matches!(
      parse_cochain("1 0\n2\n0 0\n", &g),
      Err(FormatError::Cochain(CochainError::BadModulus(0)))
    ));
  }

  #[test]
  fn degree_zero() {
    let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
    let c = parse_cochain("0 5\n3\n4\n", &g).unwrap();
    assert_eq!(c.values(), &[4]);
    assert_eq!(write_cochain(&c), "0 5\n3\n4\n");
  }

  proptest! {
    #[test]
    fn cochain_text_round_trip(
      degree in 0usize..4,
      modulus in 1u64..50,
      seed in proptest::collection::vec(0u64..1000, 64),
    ) {
      let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
      let values: Vec<u64> = (0..4usize.pow(degree as u32)).map(|i| seed[i % 64] % modulus).collect();
      let c = Cochain::new(g.clone(), degree, modulus, values).unwrap();
      prop_assert_eq!(parse_cochain(&write_cochain(&c), &g).unwrap(), c);
    }
  }
}
