//! Coboundary solving, cocycle equivalence and `H^2(G, Z_m)` via Smith
//! normal form of the coboundary matrices.
//!
//! The matrix of `d: C^1 -> C^2` has one row per pair `(a, b)` and one
//! column per element `g`, holding the multiplicity of `x(g)` in
//! `x(a) + x(b) - x(ab)`. The matrix of `d: C^2 -> C^3` is assembled the same
//! way from the four faces of `(a, b, c)`. Rows and columns follow the
//! lexicographic cochain ordering.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{
  cochain::{encode, Cochain, CochainError, DEFAULT_SIZE_LIMIT},
  group::FiniteGroup,
  smith::{smith_normal_form, ModMatrix, Track},
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
  #[error(transparent)]
  Cochain(#[from] CochainError),
  #[error("group {0} is not abelian")]
  NotAbelian(String),
}

/// Why `d x = xi` has no solution: in Smith coordinates, row `row` of the
/// transformed right-hand side holds `residue`, which is not a multiple of
/// the diagonal entry `divisor` (`divisor == 0` for rows past the rank).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
  pub row:     usize,
  pub residue: u64,
  pub divisor: u64,
}

/// Outcome of a coboundary test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trivialization {
  /// A 1-cochain `x` with `d x = xi`.
  Coboundary(Cochain),
  Obstructed(Obstruction),
}

impl Trivialization {
  pub fn certificate(&self) -> Option<&Cochain> {
    match self {
      Trivialization::Coboundary(x) => Some(x),
      Trivialization::Obstructed(_) => None,
    }
  }

  pub fn is_coboundary(&self) -> bool { matches!(self, Trivialization::Coboundary(_)) }
}

fn check_matrix_size(rows: usize, cols: usize, order: usize, degree: usize) -> Result<(), CochainError> {
  match rows.checked_mul(cols) {
    Some(s) if s <= DEFAULT_SIZE_LIMIT => Ok(()),
    _ => Err(CochainError::SizeLimitExceeded { order, degree, limit: DEFAULT_SIZE_LIMIT }),
  }
}

/// Matrix of `d: C^1 -> C^2` mod `m`.
pub fn coboundary_matrix_1(group: &FiniteGroup, modulus: u64) -> Result<ModMatrix, CochainError> {
  let n = group.order();
  check_matrix_size(n * n, n, n, 2)?;
  let mut d = ModMatrix::zeros(n * n, n, modulus);
  for a in 0..n {
    for b in 0..n {
      let row = a * n + b;
      d.add_signed(row, a, 1);
      d.add_signed(row, b, 1);
      d.add_signed(row, group.mul(a, b), -1);
    }
  }
  Ok(d)
}

/// Matrix of `d: C^2 -> C^3` mod `m`.
pub fn coboundary_matrix_2(group: &FiniteGroup, modulus: u64) -> Result<ModMatrix, CochainError> {
  let n = group.order();
  let rows = n.checked_pow(3).ok_or(CochainError::SizeLimitExceeded { order: n, degree: 3, limit: DEFAULT_SIZE_LIMIT })?;
  check_matrix_size(rows, n * n, n, 3)?;
  let mut d = ModMatrix::zeros(rows, n * n, modulus);
  for a in 0..n {
    for b in 0..n {
      let ab = group.mul(a, b);
      for c in 0..n {
        let row = encode(&[a, b, c], n);
        let bc = group.mul(b, c);
        d.add_signed(row, b * n + c, 1);
        d.add_signed(row, ab * n + c, -1);
        d.add_signed(row, a * n + bc, 1);
        d.add_signed(row, a * n + b, -1);
      }
    }
  }
  Ok(d)
}

/// Solves `d x = xi` over `Z_m`.
///
/// When `xi` is normalized every solution has `x(e) = xi(e, e) = 0`.
pub fn is_coboundary(xi: &Cochain) -> Result<Trivialization, CohomologyError> {
  xi.require_degree(2)?;
  xi.require_cocycle()?;
  solve_coboundary(xi)
}

fn solve_coboundary(xi: &Cochain) -> Result<Trivialization, CohomologyError> {
  let group = xi.group();
  let m = xi.modulus();
  let n = group.order();
  let d1 = coboundary_matrix_1(group, m)?;
  let snf = smith_normal_form(d1, Track { left: true, right: true, ..Track::NONE });
  let u = snf.left.as_ref().expect("tracked");
  let v = snf.right.as_ref().expect("tracked");

  let rhs = u.mul_vec(xi.values());
  let mut y = vec![0u64; n];
  for (row, &residue) in rhs.iter().enumerate() {
    match snf.diagonal.get(row) {
      Some(&d) if residue % d == 0 => y[row] = residue / d,
      Some(&d) => return Ok(Trivialization::Obstructed(Obstruction { row, residue, divisor: d })),
      None if residue != 0 => {
        return Ok(Trivialization::Obstructed(Obstruction { row, residue, divisor: 0 }))
      },
      None => {},
    }
  }
  let x = Cochain::new(group.clone(), 1, m, v.mul_vec(&y))?;
  debug_assert_eq!(x.coboundary()?, *xi);
  Ok(Trivialization::Coboundary(x))
}

/// Certificate `x` with `xi_prime = xi + d x`, if one exists.
pub fn are_equivalent(xi: &Cochain, xi_prime: &Cochain) -> Result<Trivialization, CohomologyError> {
  xi.require_degree(2)?;
  xi_prime.require_degree(2)?;
  let diff = xi_prime.sub(xi)?;
  xi.require_cocycle()?;
  xi_prime.require_cocycle()?;
  solve_coboundary(&diff)
}

/// `beta(a, b) = xi(a, b) - xi(b, a)` for a cocycle on an abelian group.
///
/// The result is a degree-2 cochain holding the table. It is bi-additive,
/// alternating, and depends only on the cohomology class of `xi`.
pub fn alternating_pairing(xi: &Cochain) -> Result<Cochain, CohomologyError> {
  xi.require_degree(2)?;
  let group = xi.group();
  if !group.is_abelian() {
    return Err(CohomologyError::NotAbelian(group.name().to_owned()));
  }
  xi.require_cocycle()?;
  let m = xi.modulus() as i64;
  Ok(Cochain::from_fn(group.clone(), 2, xi.modulus(), |ab| {
    xi.at2(ab[0], ab[1]) as i64 - xi.at2(ab[1], ab[0]) as i64 + m
  })?)
}

/// `H^2(G, Z_m)` as a sum of cyclic groups with explicit generators.
#[derive(Debug, Clone)]
pub struct CohomologyResult {
  pub group:             Arc<FiniteGroup>,
  pub modulus:           u64,
  /// `d_1 | d_2 | ...`, each `> 1` and dividing `m`.
  pub invariant_factors: Vec<u64>,
  /// One normalized cocycle per invariant factor, generating that summand.
  pub representatives:   Vec<Cochain>,
  /// Number of cyclic summands of `Z^2` in its Smith decomposition.
  pub z2_rank:           usize,
  /// Number of cyclic summands of `B^2` (rank of `d` on `C^1` over `Z_m`).
  pub b2_rank:           usize,
}

impl CohomologyResult {
  /// `|H^2|`, saturating at `u128::MAX`.
  pub fn order(&self) -> u128 {
    self.invariant_factors.iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
  }

  /// A uniformly chosen class plus a random normalized coboundary.
  pub fn random_cocycle<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Cochain, CochainError> {
    let n = self.group.order();
    let m = self.modulus;
    let mut xi = Cochain::zero(self.group.clone(), 2, m)?;
    for (rep, &d) in self.representatives.iter().zip(&self.invariant_factors) {
      xi = xi.add(&rep.scale(rng.gen_range(0..d)))?;
    }
    let mut x: Vec<u64> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    x[0] = 0;
    xi.add(&Cochain::new(self.group.clone(), 1, m, x)?.coboundary()?)
  }
}

/// Computes `H^2(G, Z_m) = Z^2 / B^2`.
pub fn second_cohomology(group: &Arc<FiniteGroup>, modulus: u64) -> Result<CohomologyResult, CohomologyError> {
  let n = group.order();
  let m = modulus;
  Cochain::zero(group.clone(), 2, m)?;
  let nn = n * n;

  // Z^2 = ker d2. With U d2 V = D, xi = V y is a cocycle iff d_i y_i = 0.
  let d2 = coboundary_matrix_2(group, m)?;
  let snf2 = smith_normal_form(d2, Track { right: true, right_inverse: true, ..Track::NONE });
  let v = snf2.right.as_ref().expect("tracked");
  let v_inv = snf2.right_inverse.as_ref().expect("tracked");

  // Generators of Z^2: (column index in y-coordinates, order, step m/order).
  let mut z_gens: Vec<(usize, u64)> = Vec::new();
  for i in 0..nn {
    let order = snf2.diagonal.get(i).copied().unwrap_or(m);
    if order > 1 {
      z_gens.push((i, order));
    }
  }
  let k = z_gens.len();

  // B^2 generators d(e_g), in Z^2 generator coordinates.
  let d1 = coboundary_matrix_1(group, m)?;
  let snf1 = smith_normal_form(d1.clone(), Track::NONE);
  let mut relations = ModMatrix::zeros(k, k + n, m);
  for (j, &(_, order)) in z_gens.iter().enumerate() {
    relations.set(j, j, order % m);
  }
  for g in 0..n {
    let y = v_inv.mul_vec(&d1.column(g));
    for (j, &(i, order)) in z_gens.iter().enumerate() {
      let step = m / order;
      debug_assert_eq!(y[i] % step, 0, "coboundaries are cocycles");
      relations.set(j, k + g, y[i] / step);
    }
  }

  // H^2 = Z_m^k / im(relations).
  let snf_h = smith_normal_form(relations, Track { left: true, left_inverse: true, ..Track::NONE });
  let u_inv = snf_h.left_inverse.as_ref().expect("tracked");
  let mut invariant_factors = Vec::new();
  let mut representatives = Vec::new();
  for row in 0..k {
    let factor = snf_h.diagonal.get(row).copied().unwrap_or(m);
    if factor <= 1 {
      continue;
    }
    // generator U^-1 e_row in Z^2 coordinates, pulled back through V
    let mut y = vec![0u64; nn];
    for (j, &(i, order)) in z_gens.iter().enumerate() {
      y[i] = u_inv.get(j, row) * (m / order) % m;
    }
    let rep = Cochain::new(group.clone(), 2, m, v.mul_vec(&y))?;
    debug_assert!(rep.is_cocycle());
    let (rep, _) = rep.normalize()?;
    invariant_factors.push(factor);
    representatives.push(rep);
  }

  Ok(CohomologyResult {
    group: group.clone(),
    modulus: m,
    invariant_factors,
    representatives,
    z2_rank: k,
    b2_rank: snf1.rank(),
  })
}

#[cfg(test)]
mod tests {
  use rand::{rngs::StdRng, SeedableRng};

  use super::*;
  use crate::smith::gcd;

  fn klein() -> Arc<FiniteGroup> {
    let z2 = FiniteGroup::cyclic(2).unwrap();
    Arc::new(FiniteGroup::direct_product(&z2, &z2))
  }

  /// xi((j1,k1),(j2,k2)) = -k1 j2 mod N on Z_N x Z_N.
  fn heisenberg_cocycle(n: usize) -> Cochain {
    let zn = FiniteGroup::cyclic(n).unwrap();
    let g = Arc::new(FiniteGroup::direct_product(&zn, &zn));
    Cochain::from_fn(g, 2, n as u64, |ab| {
      let (k1, j2) = (ab[0] % n, ab[1] / n);
      -((k1 * j2) as i64)
    })
    .unwrap()
  }

  fn brute_force_coboundary(xi: &Cochain) -> Option<Vec<u64>> {
    let n = xi.group().order();
    let m = xi.modulus();
    let total = m.pow(n as u32);
    (0..total).find_map(|mut code| {
      let x: Vec<u64> = (0..n)
        .map(|_| {
          let v = code % m;
          code /= m;
          v
        })
        .collect();
      let c = Cochain::new(xi.group().clone(), 1, m, x.clone()).unwrap();
      (c.coboundary().unwrap() == *xi).then_some(x)
    })
  }

  #[test]
  fn coboundary_certificates() {
    let mut rng = StdRng::seed_from_u64(0);
    for g in [FiniteGroup::symmetric(3).unwrap(), FiniteGroup::quaternion8(), FiniteGroup::cyclic(6).unwrap()] {
      let g = Arc::new(g);
      for m in [2, 3, 4, 6] {
        let y = Cochain::random(g.clone(), 1, m, &mut rng).unwrap();
        let xi = y.coboundary().unwrap();
        let x = is_coboundary(&xi).unwrap();
        assert_eq!(x.certificate().unwrap().coboundary().unwrap(), xi);
      }
    }
  }

  #[test]
  fn klein_heisenberg_class_is_obstructed() {
    let xi = heisenberg_cocycle(2);
    assert!(xi.is_cocycle());
    assert_eq!(brute_force_coboundary(&xi), None);
    assert!(matches!(is_coboundary(&xi).unwrap(), Trivialization::Obstructed(_)));
    let zero = Cochain::zero(xi.group().clone(), 2, 2).unwrap();
    assert!(!are_equivalent(&xi, &zero).unwrap().is_coboundary());
  }

  #[test]
  fn coprime_modulus_always_trivial() {
    // Z2 with m = 3: enumerate every cocycle and check both routes agree.
    let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
    for code in 0..81u64 {
      let vals: Vec<u64> = (0..4).map(|i| code / 3u64.pow(i) % 3).collect();
      let xi = Cochain::new(g.clone(), 2, 3, vals).unwrap();
      if !xi.is_cocycle() {
        continue;
      }
      assert!(brute_force_coboundary(&xi).is_some());
      let t = is_coboundary(&xi).unwrap();
      assert_eq!(t.certificate().unwrap().coboundary().unwrap(), xi);
    }
  }

  #[test]
  fn rejects_non_cocycle() {
    let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let c = Cochain::new(g, 2, 2, vec![0, 1, 0, 0]).unwrap();
    assert!(matches!(
      is_coboundary(&c),
      Err(CohomologyError::Cochain(CochainError::NotACocycle { .. }))
    ));
  }

  #[test]
  fn equivalence_relation() {
    let mut rng = StdRng::seed_from_u64(9);
    let g = klein();
    let h2 = second_cohomology(&g, 4).unwrap();
    for _ in 0..10 {
      let a = h2.random_cocycle(&mut rng).unwrap();
      let b = h2.random_cocycle(&mut rng).unwrap();
      let c = h2.random_cocycle(&mut rng).unwrap();
      let refl = are_equivalent(&a, &a).unwrap();
      assert!(refl.certificate().unwrap().is_zero());
      let ab = are_equivalent(&a, &b).unwrap();
      let ba = are_equivalent(&b, &a).unwrap();
      assert_eq!(ab.is_coboundary(), ba.is_coboundary());
      if let (Some(x), Some(y)) = (ab.certificate(), ba.certificate()) {
        // -x is a certificate for the reverse direction
        assert_eq!(b.add(&x.neg().coboundary().unwrap()).unwrap(), a);
        assert_eq!(b.add(&y.coboundary().unwrap()).unwrap(), a);
      }
      let bc = are_equivalent(&b, &c).unwrap();
      let ac = are_equivalent(&a, &c).unwrap();
      if let (Some(x), Some(y)) = (ab.certificate(), bc.certificate()) {
        let sum = x.add(y).unwrap();
        assert_eq!(a.add(&sum.coboundary().unwrap()).unwrap(), c);
        assert!(ac.is_coboundary());
      }
      let shifted = a.add(&Cochain::random(g.clone(), 1, 4, &mut rng).unwrap().coboundary().unwrap()).unwrap();
      assert!(are_equivalent(&a, &shifted).unwrap().is_coboundary());
    }
  }

  #[test]
  fn equivalence_modulus_mismatch() {
    let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let a = Cochain::zero(g.clone(), 2, 2).unwrap();
    let b = Cochain::zero(g, 2, 4).unwrap();
    assert!(matches!(
      are_equivalent(&a, &b),
      Err(CohomologyError::Cochain(CochainError::ModulusMismatch { .. }))
    ));
  }

  #[test]
  fn cyclic_groups() {
    for n in 1..=6 {
      let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
      for m in 1..=6u64 {
        let h = second_cohomology(&g, m).unwrap();
        let d = gcd(n as u64, m);
        let expected: Vec<u64> = if d > 1 { vec![d] } else { vec![] };
        assert_eq!(h.invariant_factors, expected, "Z{n} m={m}");
      }
    }
  }

  #[test]
  fn trivial_group() {
    let g = Arc::new(FiniteGroup::trivial());
    for m in 1..5 {
      assert!(second_cohomology(&g, m).unwrap().invariant_factors.is_empty());
    }
  }

  #[test]
  fn representatives_are_nontrivial_cocycles() {
    for (g, m) in [
      (klein(), 2),
      (Arc::new(FiniteGroup::dihedral(4).unwrap()), 2),
      (Arc::new(FiniteGroup::quaternion8()), 4),
      (Arc::new(FiniteGroup::symmetric(3).unwrap()), 6),
    ] {
      let h = second_cohomology(&g, m).unwrap();
      for w in h.invariant_factors.windows(2) {
        assert_eq!(w[1] % w[0], 0);
      }
      for (rep, &d) in h.representatives.iter().zip(&h.invariant_factors) {
        assert_eq!(m % d, 0);
        assert!(rep.is_cocycle());
        assert!(rep.is_normalized());
        assert!(!is_coboundary(rep).unwrap().is_coboundary());
        // d * rep is trivial, and no smaller multiple is
        assert!(is_coboundary(&rep.scale(d)).unwrap().is_coboundary());
        for k in 1..d {
          assert!(!is_coboundary(&rep.scale(k)).unwrap().is_coboundary());
        }
      }
    }
  }

  #[test]
  fn pairing_properties() {
    let xi = heisenberg_cocycle(3);
    let beta = alternating_pairing(&xi).unwrap();
    let (a, b) = (3, 1); // (1,0) and (0,1)
    assert_eq!(beta.at2(a, b), 1);
    let g = xi.group().clone();
    let mut rng = StdRng::seed_from_u64(4);
    let x = Cochain::random(g.clone(), 1, 3, &mut rng).unwrap();
    assert!(alternating_pairing(&x.coboundary().unwrap()).unwrap().is_zero());
    let shifted = xi.add(&x.coboundary().unwrap()).unwrap();
    assert_eq!(alternating_pairing(&shifted).unwrap(), beta);
    for p in 0..9 {
      assert_eq!(beta.at2(p, p), 0);
      for q in 0..9 {
        for r in 0..9 {
          assert_eq!(beta.at2(g.mul(p, q), r), (beta.at2(p, r) + beta.at2(q, r)) % 3);
        }
      }
    }
  }

  #[test]
  fn pairing_rejects_nonabelian() {
    let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let xi = Cochain::zero(g, 2, 2).unwrap();
    assert!(matches!(alternating_pairing(&xi), Err(CohomologyError::NotAbelian(_))));
  }

  #[test]
  fn size_limit_reported() {
    let z = FiniteGroup::cyclic(30).unwrap();
    let g = Arc::new(FiniteGroup::direct_product(&z, &FiniteGroup::cyclic(2).unwrap()));
    assert!(matches!(
      second_cohomology(&g, 2),
      Err(CohomologyError::Cochain(CochainError::SizeLimitExceeded { .. }))
    ));
  }
}
