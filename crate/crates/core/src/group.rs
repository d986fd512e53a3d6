//! Finite groups stored as validated Cayley tables.
//!
//! Elements are the dense indices `0..order` and the identity is always
//! index `0`. Every constructor funnels through [`FiniteGroup::from_cayley_table`],
//! so a `FiniteGroup` value always satisfies closure, associativity, identity
//! and inverse axioms.

use std::fmt;

use thiserror::Error;

/// Errors raised while validating or constructing a group.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
  #[error("table is empty")]
  Empty,
  #[error("table is not square: row {row} has {len} entries, expected {expected}")]
  NotSquare { row: usize, len: usize, expected: usize },
  #[error("entry table[{row}][{col}] = {value} is out of range for order {order}")]
  OutOfRange { row: usize, col: usize, value: usize, order: usize },
  #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
  NotAssociative { a: usize, b: usize, c: usize },
  #[error("no two-sided identity element")]
  NoIdentity,
  #[error("element {element} has no two-sided inverse")]
  MissingInverse { element: usize },
  #[error("argument {what} = {value} out of range ({allowed})")]
  ArgumentOutOfRange { what: &'static str, value: usize, allowed: &'static str },
}

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
  name:    String,
  order:   usize,
  table:   Vec<usize>,
  inverse: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.debug_struct("FiniteGroup").field("name", &self.name).field("order", &self.order).finish()
  }
}

impl FiniteGroup {
  /// Validates a Cayley table and builds a group from it.
  ///
  /// Checks run in the order closure, associativity, identity, inverses; the
  /// first failure is reported together with its witness. If the identity is
  /// not at index 0 it is swapped with element 0 so that the returned group
  /// has its identity at index 0.
  pub fn from_cayley_table(
    table: &[Vec<usize>],
    name: impl Into<String>,
  ) -> Result<Self, GroupError> {
    let n = table.len();
    if n == 0 {
      return Err(GroupError::Empty);
    }
    for (row, r) in table.iter().enumerate() {
      if r.len() != n {
        return Err(GroupError::NotSquare { row, len: r.len(), expected: n });
      }
      for (col, &value) in r.iter().enumerate() {
        if value >= n {
          return Err(GroupError::OutOfRange { row, col, value, order: n });
        }
      }
    }
    let flat: Vec<usize> = table.iter().flatten().copied().collect();
    let mul = |a: usize, b: usize| flat[a * n + b];

    for a in 0..n {
      for b in 0..n {
        let ab = mul(a, b);
        for c in 0..n {
          if mul(ab, c) != mul(a, mul(b, c)) {
            return Err(GroupError::NotAssociative { a, b, c });
          }
        }
      }
    }

    let identity = (0..n)
      .find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
      .ok_or(GroupError::NoIdentity)?;

    // Swap labels identity <-> 0.
    let relabel = |x: usize| {
      if x == identity {
        0
      } else if x == 0 {
        identity
      } else {
        x
      }
    };
    let mut relabeled = vec![0; n * n];
    for a in 0..n {
      for b in 0..n {
        relabeled[relabel(a) * n + relabel(b)] = relabel(mul(a, b));
      }
    }

    let mut inverse = vec![0; n];
    for a in 0..n {
      inverse[a] = (0..n)
        .find(|&b| relabeled[a * n + b] == 0 && relabeled[b * n + a] == 0)
        .ok_or(GroupError::MissingInverse { element: relabel(a) })?;
    }

    Ok(Self { name: name.into(), order: n, table: relabeled, inverse })
  }

  /// The cyclic group `Z_n` with `a * b = (a + b) mod n`.
  pub fn cyclic(n: usize) -> Result<Self, GroupError> {
    if n == 0 {
      return Err(GroupError::ArgumentOutOfRange { what: "n", value: n, allowed: "n >= 1" });
    }
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    Self::from_cayley_table(&table, format!("Z{n}"))
  }

  /// The trivial group of order 1.
  pub fn trivial() -> Self { Self::cyclic(1).expect("order 1 is valid").with_name("1") }

  /// Direct product `G x K` on pairs `(g, k)` indexed `g * |K| + k`.
  pub fn direct_product(g: &FiniteGroup, k: &FiniteGroup) -> Self {
    let (ng, nk) = (g.order, k.order);
    let n = ng * nk;
    let table: Vec<Vec<usize>> = (0..n)
      .map(|x| {
        let (g1, k1) = (x / nk, x % nk);
        (0..n)
          .map(|y| {
            let (g2, k2) = (y / nk, y % nk);
            g.mul(g1, g2) * nk + k.mul(k1, k2)
          })
          .collect()
      })
      .collect();
    Self::from_cayley_table(&table, format!("{}x{}", g.name, k.name))
      .expect("direct product of groups is a group")
  }

  /// Dihedral group of order `2n`, elements `r^i s^f` indexed `f * n + i`.
  pub fn dihedral(n: usize) -> Result<Self, GroupError> {
    if n < 2 {
      return Err(GroupError::ArgumentOutOfRange { what: "n", value: n, allowed: "n >= 2" });
    }
    let order = 2 * n;
    let table: Vec<Vec<usize>> = (0..order)
      .map(|x| {
        let (f1, i1) = (x / n, x % n);
        (0..order)
          .map(|y| {
            let (f2, i2) = (y / n, y % n);
            // r^i1 s^f1 r^i2 s^f2 = r^(i1 +- i2) s^(f1+f2)
            let i = if f1 == 0 { (i1 + i2) % n } else { (i1 + n - i2) % n };
            ((f1 + f2) % 2) * n + i
          })
          .collect()
      })
      .collect();
    Self::from_cayley_table(&table, format!("D{n}"))
  }

  /// The quaternion group `{±1, ±i, ±j, ±k}`, indexed `sign * 4 + unit`
  /// with units ordered `1, i, j, k`.
  pub fn quaternion8() -> Self {
    // unit products: (sign, unit) of u*v for u, v in {1, i, j, k}
    const UNIT: [[(usize, usize); 4]; 4] = [
      [(0, 0), (0, 1), (0, 2), (0, 3)],
      [(0, 1), (1, 0), (0, 3), (1, 2)],
      [(0, 2), (1, 3), (1, 0), (0, 1)],
      [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let table: Vec<Vec<usize>> = (0..8)
      .map(|x| {
        (0..8)
          .map(|y| {
            let (s, u) = UNIT[x % 4][y % 4];
            ((x / 4 + y / 4 + s) % 2) * 4 + u
          })
          .collect()
      })
      .collect();
    Self::from_cayley_table(&table, "Q8").expect("Q8 table is a group")
  }

  /// Symmetric group on `k <= 4` points; permutations in lexicographic
  /// order, composition `(s t)(x) = s(t(x))`.
  pub fn symmetric(k: usize) -> Result<Self, GroupError> {
    if !(1..=4).contains(&k) {
      return Err(GroupError::ArgumentOutOfRange { what: "k", value: k, allowed: "1 <= k <= 4" });
    }
    let perms = permutations(k);
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
    let table: Vec<Vec<usize>> = perms
      .iter()
      .map(|s| {
        perms
          .iter()
          .map(|t| {
            let st: Vec<usize> = t.iter().map(|&x| s[x]).collect();
            index(&st)
          })
          .collect()
      })
      .collect();
    Self::from_cayley_table(&table, format!("S{k}"))
  }

  pub fn with_name(mut self, name: impl Into<String>) -> Self {
    self.name = name.into();
    self
  }

  pub fn name(&self) -> &str { &self.name }

  pub fn order(&self) -> usize { self.order }

  /// Always 0.
  pub const fn identity(&self) -> usize { 0 }

  #[inline]
  pub fn mul(&self, a: usize, b: usize) -> usize { self.table[a * self.order + b] }

  #[inline]
  pub fn inv(&self, a: usize) -> usize { self.inverse[a] }

  pub fn inverses(&self) -> &[usize] { &self.inverse }

  /// The table as rows.
  pub fn table(&self) -> Vec<Vec<usize>> {
    self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
  }

  pub fn is_abelian(&self) -> bool {
    (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
  }

  /// Smallest `k >= 1` with `a^k = e`.
  pub fn element_order(&self, a: usize) -> usize {
    let mut k = 1;
    let mut x = a;
    while x != 0 {
      x = self.mul(x, a);
      k += 1;
    }
    k
  }

  /// True when `map` is a bijection `self -> other` with
  /// `map(a * b) = map(a) * map(b)` for all `a, b`.
  pub fn relabeled_equals(&self, other: &FiniteGroup, map: &[usize]) -> bool {
    if self.order != other.order || map.len() != self.order {
      return false;
    }
    let mut seen = vec![false; self.order];
    for &x in map {
      if x >= self.order || std::mem::replace(&mut seen[x], true) {
        return false;
      }
    }
    (0..self.order).all(|a| {
      (0..self.order).all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b]))
    })
  }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
  fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    if prefix.len() == used.len() {
      out.push(prefix.clone());
      return;
    }
    for x in 0..used.len() {
      if !used[x] {
        used[x] = true;
        prefix.push(x);
        go(prefix, used, out);
        prefix.pop();
        used[x] = false;
      }
    }
  }
  let mut out = Vec::new();
  go(&mut Vec::new(), &mut vec![false; k], &mut out);
  out
}
