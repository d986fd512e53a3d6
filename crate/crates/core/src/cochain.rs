//! Cochains `G^d -> Z_m` with trivial action and the bar-resolution
//! coboundary operator.
//!
//! Values are stored densely, indexed lexicographically by the argument tuple
//! with the first argument most significant: `(g1, ..., gd)` lives at
//! `((g1 * n + g2) * n + ...) + gd`.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::group::FiniteGroup;

/// Default bound on the number of stored entries of any cochain.
pub const DEFAULT_SIZE_LIMIT: usize = 10_000_000;

/// Moduli are restricted so that sums of two residues never overflow.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
  #[error("modulus must be in 1..={MAX_MODULUS}, got {0}")]
  BadModulus(u64),
  #[error("expected {expected} values, got {got}")]
  LengthMismatch { expected: usize, got: usize },
  #[error("cochain of degree {degree} on a group of order {order} exceeds the size limit of {limit} entries")]
  SizeLimitExceeded { order: usize, degree: usize, limit: usize },
  #[error("expected a cochain of degree {expected}, got degree {got}")]
  DegreeMismatch { expected: usize, got: usize },
  #[error("cochains live on different groups")]
  GroupMismatch,
  #[error("moduli differ: {left} vs {right}")]
  ModulusMismatch { left: u64, right: u64 },
  #[error("not a cocycle: coboundary is nonzero at {witness:?}")]
  NotACocycle { witness: Vec<usize> },
  #[error("2-cochain is not normalized")]
  NotNormalized,
}

/// A `Z_m`-valued function on `G^degree`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
  group:   Arc<FiniteGroup>,
  degree:  usize,
  modulus: u64,
  values:  Vec<u64>,
}

impl std::fmt::Debug for Cochain {
  fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
    f.debug_struct("Cochain")
      .field("group", &self.group.name())
      .field("degree", &self.degree)
      .field("modulus", &self.modulus)
      .field("values", &self.values)
      .finish()
  }
}

fn check_modulus(modulus: u64) -> Result<(), CochainError> {
  if modulus == 0 || modulus > MAX_MODULUS {
    return Err(CochainError::BadModulus(modulus));
  }
  Ok(())
}

/// Number of entries of a degree-`degree` cochain, if it fits in `limit`.
pub fn cochain_len(order: usize, degree: usize, limit: usize) -> Result<usize, CochainError> {
  let exceeded = CochainError::SizeLimitExceeded { order, degree, limit };
  let mut len: usize = 1;
  for _ in 0..degree {
    len = len.checked_mul(order).ok_or_else(|| exceeded.clone())?;
  }
  if len > limit {
    return Err(exceeded);
  }
  Ok(len)
}

impl Cochain {
  /// Builds a cochain from raw values, reducing them mod `modulus`.
  pub fn new(
    group: Arc<FiniteGroup>,
    degree: usize,
    modulus: u64,
    values: Vec<u64>,
  ) -> Result<Self, CochainError> {
    check_modulus(modulus)?;
    let expected = cochain_len(group.order(), degree, DEFAULT_SIZE_LIMIT)?;
    if values.len() != expected {
      return Err(CochainError::LengthMismatch { expected, got: values.len() });
    }
    let values = values.into_iter().map(|v| v % modulus).collect();
    Ok(Self { group, degree, modulus, values })
  }

  pub fn zero(group: Arc<FiniteGroup>, degree: usize, modulus: u64) -> Result<Self, CochainError> {
    check_modulus(modulus)?;
    let len = cochain_len(group.order(), degree, DEFAULT_SIZE_LIMIT)?;
    Ok(Self { group, degree, modulus, values: vec![0; len] })
  }

  /// Builds a cochain by evaluating `f` on every argument tuple; the result
  /// is reduced mod `modulus` (negative values wrap).
  pub fn from_fn(
    group: Arc<FiniteGroup>,
    degree: usize,
    modulus: u64,
    mut f: impl FnMut(&[usize]) -> i64,
  ) -> Result<Self, CochainError> {
    let mut c = Self::zero(group, degree, modulus)?;
    let n = c.group.order();
    let mut args = vec![0; degree];
    for idx in 0..c.values.len() {
      decode(idx, n, &mut args);
      c.values[idx] = f(&args).rem_euclid(modulus as i64) as u64;
    }
    Ok(c)
  }

  /// Uniformly random cochain.
  pub fn random<R: Rng + ?Sized>(
    group: Arc<FiniteGroup>,
    degree: usize,
    modulus: u64,
    rng: &mut R,
  ) -> Result<Self, CochainError> {
    let mut c = Self::zero(group, degree, modulus)?;
    c.values.iter_mut().for_each(|v| *v = rng.gen_range(0..modulus));
    Ok(c)
  }

  pub fn group(&self) -> &Arc<FiniteGroup> { &self.group }

  pub fn degree(&self) -> usize { self.degree }

  pub fn modulus(&self) -> u64 { self.modulus }

  pub fn values(&self) -> &[u64] { &self.values }

  pub fn into_values(self) -> Vec<u64> { self.values }

  /// Value at an argument tuple.
  pub fn get(&self, args: &[usize]) -> u64 {
    debug_assert_eq!(args.len(), self.degree);
    self.values[encode(args, self.group.order())]
  }

  /// Shorthand for degree-2 lookups.
  #[inline]
  pub fn at2(&self, a: usize, b: usize) -> u64 { self.values[a * self.group.order() + b] }

  pub fn is_zero(&self) -> bool { self.values.iter().all(|&v| v == 0) }

  fn check_compatible(&self, other: &Cochain) -> Result<(), CochainError> {
    if !Arc::ptr_eq(&self.group, &other.group) && *self.group != *other.group {
      return Err(CochainError::GroupMismatch);
    }
    if self.modulus != other.modulus {
      return Err(CochainError::ModulusMismatch { left: self.modulus, right: other.modulus });
    }
    if self.degree != other.degree {
      return Err(CochainError::DegreeMismatch { expected: self.degree, got: other.degree });
    }
    Ok(())
  }

  pub fn add(&self, other: &Cochain) -> Result<Cochain, CochainError> {
    self.check_compatible(other)?;
    let m = self.modulus;
    let values = self.values.iter().zip(&other.values).map(|(a, b)| (a + b) % m).collect();
    Ok(Cochain { values, ..self.clone() })
  }

  pub fn sub(&self, other: &Cochain) -> Result<Cochain, CochainError> { self.add(&other.neg()) }

  pub fn neg(&self) -> Cochain {
    let m = self.modulus;
    Cochain { values: self.values.iter().map(|&v| (m - v) % m).collect(), ..self.clone() }
  }

  pub fn scale(&self, k: u64) -> Cochain {
    let m = self.modulus;
    let k = k % m;
    Cochain { values: self.values.iter().map(|&v| v * k % m).collect(), ..self.clone() }
  }

  /// Index of the face `(g1, .., g_i g_{i+1}, .., g_{d+1})`, merging
  /// positions `i` and `i + 1` (0-based).
  fn merged_face(&self, args: &[usize], i: usize) -> usize {
    let n = self.group.order();
    let mut idx = 0;
    let mut k = 0;
    while k < args.len() {
      let g = if k == i {
        k += 1;
        self.group.mul(args[i], args[i + 1])
      } else {
        args[k]
      };
      idx = idx * n + g;
      k += 1;
    }
    idx
  }

  /// `(dc)(g1, ..., g_{d+1})` at a single tuple of length `degree + 1`.
  pub fn coboundary_at(&self, args: &[usize]) -> u64 {
    let d = self.degree;
    debug_assert_eq!(args.len(), d + 1);
    let m = self.modulus;
    let n = self.group.order();
    // leading face: drop g1
    let mut acc = self.values[encode(&args[1..], n)];
    for i in 0..d {
      let v = self.values[self.merged_face(args, i)];
      // sign (-1)^(i+1)
      acc = (if i % 2 == 0 { acc + m - v } else { acc + v }) % m;
    }
    let last = self.values[encode(&args[..d], n)];
    acc = if d.is_multiple_of(2) { acc + m - last } else { acc + last };
    acc % m
  }

  /// The bar-resolution differential
  /// `(dc)(g1..g_{d+1}) = c(g2..g_{d+1}) + sum_i (-1)^i c(.., g_i g_{i+1}, ..) + (-1)^{d+1} c(g1..g_d)`.
  pub fn coboundary(&self) -> Result<Cochain, CochainError> {
    self.coboundary_with_limit(DEFAULT_SIZE_LIMIT)
  }

  pub fn coboundary_with_limit(&self, limit: usize) -> Result<Cochain, CochainError> {
    let n = self.group.order();
    let len = cochain_len(n, self.degree + 1, limit)?;
    let mut args = vec![0; self.degree + 1];
    let values = (0..len)
      .map(|idx| {
        decode(idx, n, &mut args);
        self.coboundary_at(&args)
      })
      .collect();
    Ok(Cochain { group: self.group.clone(), degree: self.degree + 1, modulus: self.modulus, values })
  }

  /// The differential without the leading face term:
  /// `sum_{i=1..d} (-1)^{i+1} c(.., g_i g_{i+1}, ..) + (-1)^d c(g1..g_d)`.
  ///
  /// In degree 1 this is `x(ab) - x(a)`, in degree 2
  /// `c(ab,c) - c(a,bc) + c(a,b)`. It also squares to zero, but its degree-2
  /// kernel is not the associativity condition for factor systems.
  pub fn coboundary_truncated(&self) -> Result<Cochain, CochainError> {
    let n = self.group.order();
    let d = self.degree;
    let m = self.modulus;
    let len = cochain_len(n, d + 1, DEFAULT_SIZE_LIMIT)?;
    let mut args = vec![0; d + 1];
    let values = (0..len)
      .map(|idx| {
        decode(idx, n, &mut args);
        let mut acc = 0;
        for i in 0..d {
          let v = self.values[self.merged_face(&args, i)];
          acc = (if i % 2 == 0 { acc + v } else { acc + m - v }) % m;
        }
        let last = self.values[encode(&args[..d], n)];
        (if d.is_multiple_of(2) { acc + last } else { acc + m - last }) % m
      })
      .collect();
    Ok(Cochain { group: self.group.clone(), degree: d + 1, modulus: m, values })
  }

  /// `d(dc)`, which is always zero.
  pub fn delta_squared(&self) -> Result<Cochain, CochainError> {
    cochain_len(self.group.order(), self.degree + 2, DEFAULT_SIZE_LIMIT)?;
    self.coboundary()?.coboundary()
  }

  /// First argument tuple where the coboundary is nonzero, if any.
  ///
  /// Evaluated lazily, so it works without materializing `dc`.
  pub fn cocycle_witness(&self) -> Option<Vec<usize>> {
    let n = self.group.order();
    let len = n.checked_pow(self.degree as u32 + 1)?;
    let mut args = vec![0; self.degree + 1];
    (0..len).find_map(|idx| {
      decode(idx, n, &mut args);
      (self.coboundary_at(&args) != 0).then(|| args.clone())
    })
  }

  pub fn is_cocycle(&self) -> bool { self.cocycle_witness().is_none() }

  pub(crate) fn require_cocycle(&self) -> Result<(), CochainError> {
    match self.cocycle_witness() {
      None => Ok(()),
      Some(witness) => Err(CochainError::NotACocycle { witness }),
    }
  }

  pub(crate) fn require_degree(&self, expected: usize) -> Result<(), CochainError> {
    if self.degree != expected {
      return Err(CochainError::DegreeMismatch { expected, got: self.degree });
    }
    Ok(())
  }

  /// `c(e, b) = c(a, e) = 0` for all `a, b`.
  pub fn is_normalized(&self) -> bool {
    self.degree == 2 && (0..self.group.order()).all(|a| self.at2(0, a) == 0 && self.at2(a, 0) == 0)
  }

  /// Returns `(c + dx, x)` with `c + dx` normalized, where `x` is the
  /// constant 1-cochain `-c(e, e)`.
  ///
  /// For a 2-cocycle `c(e, b) = c(e, e) = c(a, e)`, and the coboundary of a
  /// constant `k` is the constant `k`, so a single shift suffices.
  pub fn normalize(&self) -> Result<(Cochain, Cochain), CochainError> {
    self.require_degree(2)?;
    self.require_cocycle()?;
    let m = self.modulus;
    let shift = (m - self.at2(0, 0)) % m;
    let x = Cochain {
      group:   self.group.clone(),
      degree:  1,
      modulus: m,
      values:  vec![shift; self.group.order()],
    };
    let normalized = self.add(&x.coboundary()?)?;
    debug_assert!(normalized.is_normalized());
    Ok((normalized, x))
  }
}

/// Lexicographic index of a tuple, first argument most significant.
pub fn encode(args: &[usize], n: usize) -> usize { args.iter().fold(0, |acc, &g| acc * n + g) }

/// Inverse of [`encode`]; fills `args` in place.
pub fn decode(mut idx: usize, n: usize, args: &mut [usize]) {
  for slot in args.iter_mut().rev() {
    *slot = idx % n;
    idx /= n;
  }
}

#[cfg(test)]
mod tests {
  use rand::{rngs::StdRng, SeedableRng};

  use super::*;

  fn group(g: FiniteGroup) -> Arc<FiniteGroup> { Arc::new(g) }

  #[test]
  fn degree_one_matches_delta_formula() {
    let g = group(FiniteGroup::symmetric(3).unwrap());
    let mut rng = StdRng::seed_from_u64(1);
    let x = Cochain::random(g.clone(), 1, 6, &mut rng).unwrap();
    let dx = x.coboundary().unwrap();
    for a in 0..6 {
      for b in 0..6 {
        let direct = (x.get(&[a]) + x.get(&[b]) + 6 - x.get(&[g.mul(a, b)])) % 6;
        assert_eq!(dx.at2(a, b), direct);
      }
    }
  }

  #[test]
  fn z2_homomorphism_has_zero_coboundary() {
    let g = group(FiniteGroup::cyclic(2).unwrap());
    let x = Cochain::new(g, 1, 2, vec![0, 1]).unwrap();
    assert_eq!(x.coboundary().unwrap().values(), &[0, 0, 0, 0]);
  }

  #[test]
  fn zero_maps_to_zero() {
    let g = group(FiniteGroup::quaternion8());
    for d in 0..3 {
      let z = Cochain::zero(g.clone(), d, 4).unwrap();
      let dz = z.coboundary().unwrap();
      assert_eq!(dz.degree(), d + 1);
      assert!(dz.is_zero());
      assert!(z.delta_squared().unwrap().is_zero());
    }
  }

  #[test]
  fn degree_zero_coboundary_vanishes() {
    // trivial action: (dc)(g) = c - c
    let g = group(FiniteGroup::cyclic(5).unwrap());
    let c = Cochain::new(g, 0, 7, vec![3]).unwrap();
    assert!(c.coboundary().unwrap().is_zero());
  }

  #[test]
  fn delta_squared_random() {
    let mut rng = StdRng::seed_from_u64(7);
    let s3 = group(FiniteGroup::symmetric(3).unwrap());
    let x = Cochain::random(s3, 1, 6, &mut rng).unwrap();
    let dd = x.delta_squared().unwrap();
    assert_eq!(dd.values().len(), 216);
    assert!(dd.is_zero());
    let z4 = group(FiniteGroup::cyclic(4).unwrap());
    let c = Cochain::random(z4, 2, 4, &mut rng).unwrap();
    let dd = c.delta_squared().unwrap();
    assert_eq!(dd.values().len(), 256);
    assert!(dd.is_zero());
  }

  #[test]
  fn truncated_operator_matches_displayed_formulas() {
    let mut rng = StdRng::seed_from_u64(3);
    let g = group(FiniteGroup::dihedral(3).unwrap());
    let x = Cochain::random(g.clone(), 1, 5, &mut rng).unwrap();
    let t = x.coboundary_truncated().unwrap();
    for a in 0..6 {
      for b in 0..6 {
        assert_eq!(t.at2(a, b), (x.get(&[g.mul(a, b)]) + 5 - x.get(&[a])) % 5);
      }
    }
    let xi = Cochain::random(g.clone(), 2, 5, &mut rng).unwrap();
    let t = xi.coboundary_truncated().unwrap();
    for (a, b, c) in [(1, 2, 3), (4, 5, 0), (5, 5, 5)] {
      let want = (xi.at2(g.mul(a, b), c) + 5 - xi.at2(a, g.mul(b, c)) + xi.at2(a, b)) % 5;
      assert_eq!(t.get(&[a, b, c]), want);
    }
    // squares to zero as well
    assert!(x.coboundary_truncated().unwrap().coboundary_truncated().unwrap().is_zero());
    assert!(t.coboundary_truncated().unwrap().is_zero());
  }

  #[test]
  fn cocycle_condition_is_associativity_identity() {
    let mut rng = StdRng::seed_from_u64(11);
    let g = group(FiniteGroup::cyclic(3).unwrap());
    // rejection-sample a non-cocycle
    let c = loop {
      let c = Cochain::random(g.clone(), 2, 3, &mut rng).unwrap();
      if !c.is_cocycle() {
        break c;
      }
    };
    let w = c.cocycle_witness().unwrap();
    let (a, b, cc) = (w[0], w[1], w[2]);
    let lhs = (c.at2(a, b) + c.at2(g.mul(a, b), cc)) % 3;
    let rhs = (c.at2(b, cc) + c.at2(a, g.mul(b, cc))) % 3;
    assert_ne!(lhs, rhs);
  }

  #[test]
  fn cocycle_unit_values_constant() {
    let mut rng = StdRng::seed_from_u64(5);
    let g = group(FiniteGroup::quaternion8());
    for _ in 0..20 {
      let x = Cochain::random(g.clone(), 1, 4, &mut rng).unwrap();
      let xi = x.coboundary().unwrap();
      let k = xi.at2(0, 0);
      assert!((0..8).all(|a| xi.at2(0, a) == k && xi.at2(a, 0) == k));
    }
  }

  #[test]
  fn normalize_round_trip() {
    let g = group(FiniteGroup::cyclic(2).unwrap());
    let mut rng = StdRng::seed_from_u64(2);
    // a normalized cocycle: coboundary of x with x(e) = 0
    let y = Cochain::new(g.clone(), 1, 4, vec![0, rng.gen_range(0..4)]).unwrap();
    let xi = y.coboundary().unwrap();
    assert!(xi.is_normalized());
    let (same, x) = xi.normalize().unwrap();
    assert_eq!(same, xi);
    assert!(x.is_zero());

    let k = 3;
    let shifted = xi.add(&Cochain::new(g, 1, 4, vec![k, k]).unwrap().coboundary().unwrap()).unwrap();
    assert_eq!(shifted.at2(0, 0), k);
    let (back, x) = shifted.normalize().unwrap();
    assert_eq!(back, xi);
    assert_eq!(x.values(), &[1, 1]);
  }

  #[test]
  fn normalize_rejects_non_cocycle() {
    let g = group(FiniteGroup::cyclic(2).unwrap());
    let c = Cochain::new(g, 2, 2, vec![0, 1, 0, 0]).unwrap();
    assert!(matches!(c.normalize(), Err(CochainError::NotACocycle { .. })));
  }

  #[test]
  fn size_limit() {
    let g = group(FiniteGroup::symmetric(4).unwrap());
    let c = Cochain::zero(g, 2, 2).unwrap();
    assert!(matches!(c.coboundary_with_limit(1000), Err(CochainError::SizeLimitExceeded { .. })));
  }

  #[test]
  fn construction_errors() {
    let g = group(FiniteGroup::cyclic(2).unwrap());
    assert_eq!(Cochain::zero(g.clone(), 1, 0), Err(CochainError::BadModulus(0)));
    assert_eq!(
      Cochain::new(g.clone(), 1, 2, vec![0]),
      Err(CochainError::LengthMismatch { expected: 2, got: 1 })
    );
    let a = Cochain::zero(g.clone(), 1, 2).unwrap();
    let b = Cochain::zero(g, 1, 3).unwrap();
    assert!(matches!(a.add(&b), Err(CochainError::ModulusMismatch { .. })));
  }

  #[test]
  fn encode_decode() {
    let mut args = [0; 3];
    decode(encode(&[2, 0, 1], 3), 3, &mut args);
    assert_eq!(args, [2, 0, 1]);
    assert_eq!(encode(&[1, 0], 4), 4);
  }
}
