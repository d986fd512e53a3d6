//! Smith normal form over `Z_m`.
//!
//! An integer matrix is reduced modulo `m` and diagonalized by invertible row
//! and column operations: `U * A * V = D` with `D = diag(d_0, ..., d_{r-1}, 0, ...)`,
//! each `d_i` a proper divisor of `m` and `d_0 | d_1 | ... | d_{r-1}`.
//! Working over `Z_m` is the same as running the integer algorithm on the
//! lifted system with every entry reduced mod `m` after each step, which
//! keeps all entries below `m` and avoids coefficient growth.
//!
//! The transforms `U`, `U^-1`, `V`, `V^-1` are only accumulated on request.

use std::fmt;

/// Dense row-major matrix with entries in `[0, m)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModMatrix {
  rows:    usize,
  cols:    usize,
  modulus: u64,
  data:    Vec<u64>,
}

impl fmt::Debug for ModMatrix {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "ModMatrix {}x{} mod {}", self.rows, self.cols, self.modulus)?;
    for r in 0..self.rows {
      writeln!(f, "  {:?}", self.row(r))?;
    }
    Ok(())
  }
}

impl ModMatrix {
  pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
    assert!(modulus >= 1, "modulus must be positive");
    Self { rows, cols, modulus, data: vec![0; rows * cols] }
  }

  pub fn identity(n: usize, modulus: u64) -> Self {
    let mut m = Self::zeros(n, n, modulus);
    for i in 0..n {
      m.set(i, i, 1);
    }
    m
  }

  /// Reduces signed integer entries mod `modulus`.
  pub fn from_rows(rows: &[Vec<i64>], modulus: u64) -> Self {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let mut m = Self::zeros(r, c, modulus);
    for (i, row) in rows.iter().enumerate() {
      assert_eq!(row.len(), c, "ragged rows");
      for (j, &v) in row.iter().enumerate() {
        m.set_signed(i, j, v);
      }
    }
    m
  }

  pub fn rows(&self) -> usize { self.rows }

  pub fn cols(&self) -> usize { self.cols }

  pub fn modulus(&self) -> u64 { self.modulus }

  #[inline]
  pub fn get(&self, r: usize, c: usize) -> u64 { self.data[r * self.cols + c] }

  #[inline]
  pub fn set(&mut self, r: usize, c: usize, v: u64) { self.data[r * self.cols + c] = v % self.modulus; }

  pub fn set_signed(&mut self, r: usize, c: usize, v: i64) {
    self.data[r * self.cols + c] = v.rem_euclid(self.modulus as i64) as u64;
  }

  /// Adds a signed amount to an entry.
  pub fn add_signed(&mut self, r: usize, c: usize, v: i64) {
    let m = self.modulus as i64;
    let cur = self.get(r, c) as i64;
    self.data[r * self.cols + c] = (cur + v.rem_euclid(m)).rem_euclid(m) as u64;
  }

  pub fn row(&self, r: usize) -> &[u64] { &self.data[r * self.cols..(r + 1) * self.cols] }

  pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
    assert_eq!(self.cols, other.rows);
    assert_eq!(self.modulus, other.modulus);
    let m = self.modulus;
    let mut out = ModMatrix::zeros(self.rows, other.cols, m);
    for i in 0..self.rows {
      for k in 0..self.cols {
        let a = self.get(i, k);
        if a == 0 {
          continue;
        }
        for j in 0..other.cols {
          let idx = i * out.cols + j;
          out.data[idx] = (out.data[idx] + a * other.get(k, j)) % m;
        }
      }
    }
    out
  }

  pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
    assert_eq!(self.cols, v.len());
    let m = self.modulus;
    (0..self.rows)
      .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| (acc + a * (b % m)) % m))
      .collect()
  }

  pub fn column(&self, c: usize) -> Vec<u64> { (0..self.rows).map(|r| self.get(r, c)).collect() }

  pub fn is_identity(&self) -> bool {
    self.rows == self.cols
      && (0..self.rows)
        .all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j) % self.modulus))
  }

  // line_i <- a*line_i + b*line_j ; line_j <- c*line_i + d*line_j  (rows)
  fn combine_rows(&mut self, i: usize, j: usize, [a, b, c, d]: [u64; 4]) {
    let m = self.modulus;
    for k in 0..self.cols {
      let (x, y) = (self.get(i, k), self.get(j, k));
      self.data[i * self.cols + k] = (a * x + b * y) % m;
      self.data[j * self.cols + k] = (c * x + d * y) % m;
    }
  }

  fn combine_cols(&mut self, i: usize, j: usize, [a, b, c, d]: [u64; 4]) {
    let m = self.modulus;
    for k in 0..self.rows {
      let (x, y) = (self.get(k, i), self.get(k, j));
      self.data[k * self.cols + i] = (a * x + b * y) % m;
      self.data[k * self.cols + j] = (c * x + d * y) % m;
    }
  }

  fn scale_row(&mut self, i: usize, u: u64) {
    let m = self.modulus;
    for k in 0..self.cols {
      let idx = i * self.cols + k;
      self.data[idx] = self.data[idx] * u % m;
    }
  }

  fn scale_col(&mut self, i: usize, u: u64) {
    let m = self.modulus;
    for k in 0..self.rows {
      let idx = k * self.cols + i;
      self.data[idx] = self.data[idx] * u % m;
    }
  }
}

/// Which transforms to accumulate.
#[derive(Debug, Clone, Copy, Default)]
pub struct Track {
  pub left:          bool,
  pub left_inverse:  bool,
  pub right:         bool,
  pub right_inverse: bool,
}

impl Track {
  pub const ALL: Track = Track { left: true, left_inverse: true, right: true, right_inverse: true };
  pub const NONE: Track = Track { left: false, left_inverse: false, right: false, right_inverse: false };
}

/// Result of [`smith_normal_form`].
#[derive(Debug, Clone)]
pub struct SmithForm {
  /// Nonzero diagonal entries `d_0 | d_1 | ...`, each a divisor of `m` below `m`.
  pub diagonal:      Vec<u64>,
  pub rows:          usize,
  pub cols:          usize,
  pub modulus:       u64,
  pub left:          Option<ModMatrix>,
  pub left_inverse:  Option<ModMatrix>,
  pub right:         Option<ModMatrix>,
  pub right_inverse: Option<ModMatrix>,
}

impl SmithForm {
  pub fn rank(&self) -> usize { self.diagonal.len() }

  /// The diagonal matrix `D`.
  pub fn diagonal_matrix(&self) -> ModMatrix {
    let mut d = ModMatrix::zeros(self.rows, self.cols, self.modulus);
    for (i, &v) in self.diagonal.iter().enumerate() {
      d.set(i, i, v);
    }
    d
  }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
  while b != 0 {
    (a, b) = (b, a % b);
  }
  a
}

/// Returns `(g, s, t)` with `g = gcd(a, b) = s*a + t*b`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
  let (mut r0, mut r1) = (a, b);
  let (mut s0, mut s1) = (1i64, 0i64);
  let (mut t0, mut t1) = (0i64, 1i64);
  while r1 != 0 {
    let q = r0.div_euclid(r1);
    (r0, r1) = (r1, r0 - q * r1);
    (s0, s1) = (s1, s0 - q * s1);
    (t0, t1) = (t1, t0 - q * t1);
  }
  if r0 < 0 {
    (-r0, -s0, -t0)
  } else {
    (r0, s0, t0)
  }
}

/// Multiplicative inverse of a unit mod `m`.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
  if m == 1 {
    return Some(0);
  }
  let (g, s, _) = ext_gcd(a as i64, m as i64);
  (g == 1).then(|| s.rem_euclid(m as i64) as u64)
}

/// A unit `u` with `a * u = gcd(a, m) (mod m)`.
fn normalizing_unit(a: u64, m: u64) -> u64 {
  let g = gcd(a, m);
  let (a1, m1) = (a / g, m / g);
  let base = inverse_mod(a1 % m1, m1).unwrap_or(0);
  // lift base mod m1 to a unit mod m
  (0..g)
    .map(|k| (base + k * m1) % m)
    .find(|&u| gcd(u, m) == 1)
    .expect("a unit lift always exists")
}

struct Reducer<'a> {
  a:     &'a mut ModMatrix,
  u:     Option<ModMatrix>,
  u_inv: Option<ModMatrix>,
  v:     Option<ModMatrix>,
  v_inv: Option<ModMatrix>,
}

impl Reducer<'_> {
  fn m(&self) -> u64 { self.a.modulus }

  /// 2x2 inverse of `[[a, b], [c, d]]`.
  fn invert(&self, [a, b, c, d]: [u64; 4]) -> [u64; 4] {
    let m = self.m();
    let det = (a * d % m + m - b * c % m) % m;
    let di = inverse_mod(det, m).expect("row/column operations are invertible");
    [d * di % m, (m - b) % m * di % m, (m - c) % m * di % m, a * di % m]
  }

  fn rows(&mut self, i: usize, j: usize, op: [u64; 4]) {
    self.a.combine_rows(i, j, op);
    if let Some(u) = &mut self.u {
      u.combine_rows(i, j, op);
    }
    let [p, q, r, s] = self.invert(op);
    if let Some(u_inv) = &mut self.u_inv {
      // U^-1 <- U^-1 * E^-1
      u_inv.combine_cols(i, j, [p, r, q, s]);
    }
  }

  fn cols(&mut self, i: usize, j: usize, op: [u64; 4]) {
    self.a.combine_cols(i, j, op);
    if let Some(v) = &mut self.v {
      v.combine_cols(i, j, op);
    }
    let [p, q, r, s] = self.invert(op);
    if let Some(v_inv) = &mut self.v_inv {
      // V^-1 <- T^-1 * V^-1, where the column op is A <- A * T
      v_inv.combine_rows(i, j, [p, r, q, s]);
    }
  }

  fn scale_row(&mut self, i: usize, unit: u64) {
    self.a.scale_row(i, unit);
    if let Some(u) = &mut self.u {
      u.scale_row(i, unit);
    }
    if let Some(ui) = &mut self.u_inv {
      let inv = inverse_mod(unit, ui.modulus).expect("unit");
      ui.scale_col(i, inv);
    }
  }

  fn swap_rows(&mut self, i: usize, j: usize) {
    if i != j {
      let m = self.m();
      self.rows(i, j, [0, 1, 1, 0].map(|x| x % m));
    }
  }

  fn swap_cols(&mut self, i: usize, j: usize) {
    if i != j {
      let m = self.m();
      self.cols(i, j, [0, 1, 1, 0].map(|x| x % m));
    }
  }

  /// Clears column `t` below the pivot and row `t` right of it.
  /// Returns true if anything other than exact-multiple subtraction happened.
  fn clear_pivot_line(&mut self, t: usize) -> bool {
    let m = self.m();
    let mut changed = false;
    let mut p = self.normalize_pivot(t);
    for i in t + 1..self.a.rows {
      let b = self.a.get(i, t);
      if b == 0 {
        continue;
      }
      if b.is_multiple_of(p) {
        let q = b / p;
        self.rows(t, i, [1, 0, (m - q) % m, 1]);
      } else {
        let (g, s, tt) = ext_gcd(p as i64, b as i64);
        let g_u = g as u64;
        let mi = m as i64;
        let op = [
          s.rem_euclid(mi) as u64,
          tt.rem_euclid(mi) as u64,
          (-(b as i64 / g)).rem_euclid(mi) as u64,
          (p / g_u) % m,
        ];
        self.rows(t, i, op);
        p = self.normalize_pivot(t);
        changed = true;
      }
    }
    for j in t + 1..self.a.cols {
      let b = self.a.get(t, j);
      if b == 0 {
        continue;
      }
      if b.is_multiple_of(p) {
        let q = b / p;
        // col_j <- col_j - q col_t
        self.cols(t, j, [1, 0, (m - q) % m, 1]);
      } else {
        let (g, s, tt) = ext_gcd(p as i64, b as i64);
        let mi = m as i64;
        let op = [
          s.rem_euclid(mi) as u64,
          tt.rem_euclid(mi) as u64,
          (-(b as i64 / g)).rem_euclid(mi) as u64,
          (p / g as u64) % m,
        ];
        self.cols(t, j, op);
        p = self.normalize_pivot(t);
        changed = true;
      }
    }
    changed
  }

  /// Scales row `t` so the pivot equals `gcd(pivot, m)`; returns it.
  fn normalize_pivot(&mut self, t: usize) -> u64 {
    let m = self.m();
    let p = self.a.get(t, t);
    debug_assert_ne!(p, 0);
    let g = gcd(p, m);
    if p != g {
      let unit = normalizing_unit(p, m);
      self.scale_row(t, unit);
    }
    debug_assert_eq!(self.a.get(t, t), g);
    g
  }
}

/// Computes the Smith normal form of `a` over `Z_m`, accumulating the
/// requested transforms. `a` is consumed; on return it holds `D`.
pub fn smith_normal_form(mut a: ModMatrix, track: Track) -> SmithForm {
  let (rows, cols, m) = (a.rows, a.cols, a.modulus);
  let mut r = Reducer {
    u:     track.left.then(|| ModMatrix::identity(rows, m)),
    u_inv: track.left_inverse.then(|| ModMatrix::identity(rows, m)),
    v:     track.right.then(|| ModMatrix::identity(cols, m)),
    v_inv: track.right_inverse.then(|| ModMatrix::identity(cols, m)),
    a:     &mut a,
  };

  let mut diagonal = Vec::new();
  for t in 0..rows.min(cols) {
    // pivot: nonzero entry generating the largest ideal
    let mut best: Option<(u64, usize, usize)> = None;
    'search: for j in t..cols {
      for i in t..rows {
        let v = r.a.get(i, j);
        if v != 0 {
          let g = gcd(v, m);
          if best.is_none_or(|(bg, _, _)| g < bg) {
            best = Some((g, i, j));
            if g == 1 {
              break 'search;
            }
          }
        }
      }
    }
    let Some((_, pi, pj)) = best else { break };
    r.swap_rows(t, pi);
    r.swap_cols(t, pj);

    loop {
      while r.clear_pivot_line(t) {}
      // row and column t are clear; enforce divisibility of the rest
      let p = r.a.get(t, t);
      let offender =
        (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !r.a.get(i, j).is_multiple_of(p)));
      match offender {
        Some(i) => {
          // row_t += row_i
          r.rows(t, i, [1, 1, 0, 1]);
        },
        None => break,
      }
    }
    diagonal.push(r.a.get(t, t));
  }

  SmithForm {
    diagonal,
    rows,
    cols,
    modulus: m,
    left: r.u,
    left_inverse: r.u_inv,
    right: r.v,
    right_inverse: r.v_inv,
  }
}

#[cfg(test)]
mod tests {
  use proptest::prelude::*;

  use super::*;

  /// Integer invariant factors from determinantal divisors: d_k is the gcd of
  /// all k x k minors and s_k = d_k / d_{k-1}. Independent of the elimination
  /// code above.
  fn integer_invariant_factors(a: &[Vec<i64>]) -> Vec<i64> {
    let rows = a.len();
    let cols = a[0].len();
    fn det(m: &[Vec<i64>]) -> i64 {
      let n = m.len();
      if n == 1 {
        return m[0][0];
      }
      (0..n)
        .map(|j| {
          let minor: Vec<Vec<i64>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
          let sign = if j % 2 == 0 { 1 } else { -1 };
          sign * m[0][j] * det(&minor)
        })
        .sum()
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
      if k == 0 {
        return vec![vec![]];
      }
      if n < k {
        return vec![];
      }
      let mut out = subsets(n - 1, k);
      for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
      }
      out
    }
    let mut divisors = vec![1i64];
    for k in 1..=rows.min(cols) {
      let mut g = 0u64;
      for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
          let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
          g = gcd(g, det(&minor).unsigned_abs());
        }
      }
      if g == 0 {
        break;
      }
      divisors.push(g as i64);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
  }

  fn check_transforms(a: &ModMatrix, f: &SmithForm) {
    let u = f.left.as_ref().unwrap();
    let v = f.right.as_ref().unwrap();
    assert_eq!(u.mul(a).mul(v), f.diagonal_matrix());
    assert!(u.mul(f.left_inverse.as_ref().unwrap()).is_identity());
    assert!(v.mul(f.right_inverse.as_ref().unwrap()).is_identity());
  }

  #[test]
  fn small_example() {
    // integer SNF diag(2, 6, 12)
    let rows = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
    assert_eq!(integer_invariant_factors(&rows), vec![2, 6, 12]);
    let a = ModMatrix::from_rows(&rows, 24);
    let f = smith_normal_form(a.clone(), Track::ALL);
    assert_eq!(f.diagonal, vec![2, 6, 12]);
    check_transforms(&a, &f);
    // mod 4: gcd(2,4)=2, gcd(6,4)=2, gcd(12,4)=4 -> zero
    let f = smith_normal_form(ModMatrix::from_rows(&rows, 4), Track::NONE);
    assert_eq!(f.diagonal, vec![2, 2]);
  }

  #[test]
  fn modulus_one_is_trivial() {
    let f = smith_normal_form(ModMatrix::from_rows(&[vec![3, 1], vec![1, 1]], 1), Track::ALL);
    assert!(f.diagonal.is_empty());
  }

  #[test]
  fn empty_and_zero() {
    let f = smith_normal_form(ModMatrix::zeros(3, 2, 6), Track::ALL);
    assert_eq!(f.rank(), 0);
    let f = smith_normal_form(ModMatrix::zeros(0, 4, 6), Track::ALL);
    assert_eq!(f.rank(), 0);
  }

  #[test]
  fn unit_helpers() {
    assert_eq!(inverse_mod(5, 12), Some(5));
    assert_eq!(inverse_mod(4, 12), None);
    for m in 1..40u64 {
      for a in 1..m {
        let u = normalizing_unit(a, m);
        assert_eq!(gcd(u, m), 1);
        assert_eq!(a * u % m, gcd(a, m) % m);
      }
    }
  }

  proptest! {
    #[test]
    fn matches_determinantal_divisors(
      m in 1u64..30,
      rows in 1usize..4,
      cols in 1usize..4,
      seed in proptest::collection::vec(-9i64..10, 9),
    ) {
      let a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 3 + j]).collect()).collect();
      let expected: Vec<u64> = integer_invariant_factors(&a)
        .into_iter()
        .map(|s| gcd(s.unsigned_abs(), m))
        .filter(|&g| g != m)
        .collect();
      let mat = ModMatrix::from_rows(&a, m);
      let f = smith_normal_form(mat.clone(), Track::ALL);
      prop_assert_eq!(&f.diagonal, &expected);
      for w in f.diagonal.windows(2) {
        prop_assert_eq!(w[1] % w[0], 0);
      }
      check_transforms(&mat, &f);
    }
  }
}
