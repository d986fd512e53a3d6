//! Projective unitary representations realized as dense complex matrices.
//!
//! A [`UnitaryRep`] assigns a unitary `U_a` to every group element with
//! `U_e = I`. When `U_a U_b = w(a, b) U_{ab}` for scalars `w`, the phases are
//! read back as a `Z_m` factor system `w = exp(2 pi i xi / m)` by
//! [`extract_factor_system`]. All comparisons use the max-entry norm.

use std::{f64::consts::TAU, fmt, ops::Mul, sync::Arc};

use num_complex::Complex64;
use thiserror::Error;

use crate::{
  cochain::{Cochain, CochainError},
  extension::CentralExtension,
  group::FiniteGroup,
};

/// Default tolerance for unitarity and matrix equality.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Largest distance, in radians, between an extracted phase and the
/// `2 pi / m` grid.
pub const SNAP_TOLERANCE: f64 = 1e-6 * TAU;

/// Largest supported matrix dimension.
pub const MAX_DIMENSION: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjRepError {
  #[error("expected {expected} matrices, got {got}")]
  WrongCount { expected: usize, got: usize },
  #[error("matrix for element {element} is not {dim}x{dim}")]
  DimensionMismatch { element: usize, dim: usize },
  #[error("clock and shift need N >= 1")]
  ZeroOrder,
  #[error("dimension {0} exceeds the supported maximum of {MAX_DIMENSION}")]
  DimensionTooLarge(usize),
  #[error("U_{element} is not unitary (deviation {deviation:e})")]
  NotUnitary { element: usize, deviation: f64 },
  #[error("U_e differs from the identity by {deviation:e}")]
  IdentityNotIdentity { deviation: f64 },
  #[error("U_{a} U_{b} is not a unimodular multiple of U_ab (deviation {deviation:e})")]
  NotProjective { a: usize, b: usize, deviation: f64 },
  #[error("phase of ({a}, {b}) is {distance:e} rad away from the Z_{modulus} grid")]
  SnapToleranceExceeded { a: usize, b: usize, modulus: u64, distance: f64 },
  #[error("rephasing cochain must vanish at the identity, got {0}")]
  NonzeroPhaseAtIdentity(u64),
  #[error("representation's factor system differs from the extension cocycle at ({0}, {1})")]
  CocycleMismatch(usize, usize),
  #[error("representation and cochain live on different groups")]
  GroupMismatch,
  #[error(transparent)]
  Cochain(#[from] CochainError),
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
  dim:  usize,
  data: Vec<Complex64>,
}

impl fmt::Debug for CMatrix {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "CMatrix {}x{}", self.dim, self.dim)?;
    for r in 0..self.dim {
      let row: Vec<String> = (0..self.dim).map(|c| format!("{:.3}", self[(r, c)])).collect();
      writeln!(f, "  [{}]", row.join(", "))?;
    }
    Ok(())
  }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
  type Output = Complex64;

  fn index(&self, (r, c): (usize, usize)) -> &Complex64 { &self.data[r * self.dim + c] }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
  fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 { &mut self.data[r * self.dim + c] }
}

impl CMatrix {
  pub fn zeros(dim: usize) -> Self { Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] } }

  pub fn identity(dim: usize) -> Self {
    let mut m = Self::zeros(dim);
    for i in 0..dim {
      m[(i, i)] = Complex64::new(1.0, 0.0);
    }
    m
  }

  pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
    let dim = rows.len();
    assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
    Self { dim, data: rows.into_iter().flatten().collect() }
  }

  pub fn dim(&self) -> usize { self.dim }

  pub fn adjoint(&self) -> Self {
    let mut out = Self::zeros(self.dim);
    for r in 0..self.dim {
      for c in 0..self.dim {
        out[(c, r)] = self[(r, c)].conj();
      }
    }
    out
  }

  pub fn scale(&self, s: Complex64) -> Self {
    Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
  }

  pub fn pow(&self, k: usize) -> Self { (0..k).fold(Self::identity(self.dim), |acc, _| &acc * self) }

  /// Max-entry distance.
  pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
    assert_eq!(self.dim, other.dim);
    self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
  }

  pub fn trace(&self) -> Complex64 { (0..self.dim).map(|i| self[(i, i)]).sum() }

  /// `max |U^dagger U - I|`.
  pub fn unitarity_defect(&self) -> f64 { (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim)) }
}

impl Mul for &CMatrix {
  type Output = CMatrix;

  fn mul(self, rhs: &CMatrix) -> CMatrix {
    assert_eq!(self.dim, rhs.dim);
    let n = self.dim;
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
      for k in 0..n {
        let a = self.data[i * n + k];
        if a == Complex64::new(0.0, 0.0) {
          continue;
        }
        for j in 0..n {
          out.data[i * n + j] += a * rhs.data[k * n + j];
        }
      }
    }
    out
  }
}

/// `exp(2 pi i k / m)`.
pub fn root_of_unity(k: u64, m: u64) -> Complex64 { Complex64::from_polar(1.0, TAU * (k % m) as f64 / m as f64) }

/// `diag(1, w, ..., w^{N-1})` with `w = exp(2 pi i / N)`.
pub fn clock(n: usize) -> CMatrix {
  let mut c = CMatrix::zeros(n);
  for j in 0..n {
    c[(j, j)] = root_of_unity(j as u64, n as u64);
  }
  c
}

/// Cyclic shift `e_j -> e_{(j+1) mod N}`: entry `(j+1 mod N, j)` is 1.
pub fn shift(n: usize) -> CMatrix {
  let mut s = CMatrix::zeros(n);
  for j in 0..n {
    s[((j + 1) % n, j)] = Complex64::new(1.0, 0.0);
  }
  s
}

/// A unitary matrix for every group element.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
  group:     Arc<FiniteGroup>,
  matrices:  Vec<CMatrix>,
  tolerance: f64,
}

impl UnitaryRep {
  /// Validates dimensions, unitarity and `U_e = I`.
  pub fn new(group: Arc<FiniteGroup>, matrices: Vec<CMatrix>, tolerance: f64) -> Result<Self, ProjRepError> {
    if matrices.len() != group.order() {
      return Err(ProjRepError::WrongCount { expected: group.order(), got: matrices.len() });
    }
    let dim = matrices[0].dim();
    if dim > MAX_DIMENSION {
      return Err(ProjRepError::DimensionTooLarge(dim));
    }
    for (element, u) in matrices.iter().enumerate() {
      if u.dim() != dim {
        return Err(ProjRepError::DimensionMismatch { element, dim });
      }
      let deviation = u.unitarity_defect();
      if deviation > tolerance {
        return Err(ProjRepError::NotUnitary { element, deviation });
      }
    }
    let deviation = matrices[0].max_abs_diff(&CMatrix::identity(dim));
    if deviation > tolerance {
      return Err(ProjRepError::IdentityNotIdentity { deviation });
    }
    Ok(Self { group, matrices, tolerance })
  }

  pub fn group(&self) -> &Arc<FiniteGroup> { &self.group }

  pub fn dim(&self) -> usize { self.matrices[0].dim() }

  pub fn tolerance(&self) -> f64 { self.tolerance }

  pub fn matrix(&self, a: usize) -> &CMatrix { &self.matrices[a] }

  pub fn matrices(&self) -> &[CMatrix] { &self.matrices }

  /// `max_{a,b} |U_a U_b - U_{ab}|`; below tolerance for a genuine
  /// representation.
  pub fn homomorphism_defect(&self) -> f64 {
    let g = &self.group;
    let n = g.order();
    (0..n)
      .flat_map(|a| (0..n).map(move |b| (a, b)))
      .map(|(a, b)| (&self.matrices[a] * &self.matrices[b]).max_abs_diff(&self.matrices[g.mul(a, b)]))
      .fold(0.0, f64::max)
  }

  /// `U_a U_b U_a^dagger U_b^dagger`.
  pub fn group_commutator(&self, a: usize, b: usize) -> CMatrix {
    let (ua, ub) = (&self.matrices[a], &self.matrices[b]);
    &(&(ua * ub) * &ua.adjoint()) * &ub.adjoint()
  }
}

/// The `Z_m` exponent of a representation's phases.
#[derive(Debug, Clone)]
pub struct FactorSystem {
  pub cocycle:         Cochain,
  /// Largest distance (radians) between a measured phase and the grid.
  pub residual:        f64,
  /// `max |U_a U_b - exp(2 pi i xi(a,b)/m) U_{ab}|` after snapping.
  pub matrix_residual: f64,
}

impl FactorSystem {
  pub fn modulus(&self) -> u64 { self.cocycle.modulus() }
}

/// Reads `xi` off `U_a U_b = exp(2 pi i xi(a, b) / m) U_{ab}`.
pub fn extract_factor_system(rep: &UnitaryRep, modulus: u64) -> Result<FactorSystem, ProjRepError> {
  let g = rep.group();
  let n = g.order();
  let dim = rep.dim() as f64;
  let tol = rep.tolerance();
  let mut values = vec![0u64; n * n];
  let mut residual: f64 = 0.0;
  let mut matrix_residual: f64 = 0.0;
  for a in 0..n {
    for b in 0..n {
      let ab = g.mul(a, b);
      let prod = rep.matrix(a) * rep.matrix(b);
      let ratio = &prod * &rep.matrix(ab).adjoint();
      let scalar = ratio.trace() / dim;
      let deviation = ratio.max_abs_diff(&CMatrix::identity(rep.dim()).scale(scalar));
      let deviation = deviation.max((scalar.norm() - 1.0).abs());
      if deviation > tol {
        return Err(ProjRepError::NotProjective { a, b, deviation });
      }
      let turns = scalar.arg() / TAU * modulus as f64;
      let nearest = turns.round();
      let distance = (turns - nearest).abs() * TAU / modulus as f64;
      if distance > SNAP_TOLERANCE {
        return Err(ProjRepError::SnapToleranceExceeded { a, b, modulus, distance });
      }
      let k = (nearest as i64).rem_euclid(modulus as i64) as u64;
      values[a * n + b] = k;
      residual = residual.max(distance);
      let predicted = rep.matrix(ab).scale(root_of_unity(k, modulus));
      matrix_residual = matrix_residual.max(prod.max_abs_diff(&predicted));
    }
  }
  let cocycle = Cochain::new(g.clone(), 2, modulus, values)?;
  cocycle.require_cocycle()?;
  Ok(FactorSystem { cocycle, residual, matrix_residual })
}

/// `U'_a = exp(2 pi i x(a) / m) U_a`.
pub fn rephase(rep: &UnitaryRep, x: &Cochain) -> Result<UnitaryRep, ProjRepError> {
  x.require_degree(1)?;
  if **x.group() != **rep.group() {
    return Err(ProjRepError::GroupMismatch);
  }
  let at_identity = x.get(&[0]);
  if at_identity != 0 {
    return Err(ProjRepError::NonzeroPhaseAtIdentity(at_identity));
  }
  let m = x.modulus();
  let matrices =
    rep.matrices.iter().enumerate().map(|(a, u)| u.scale(root_of_unity(x.get(&[a]), m))).collect();
  UnitaryRep::new(rep.group.clone(), matrices, rep.tolerance)
}

/// `U_{(j,k)} = clock^j shift^k` on `Z_N x Z_N`, element `(j, k)` at index
/// `j * N + k`.
pub fn schwinger_rep(n: usize) -> Result<UnitaryRep, ProjRepError> {
  if n == 0 {
    return Err(ProjRepError::ZeroOrder);
  }
  if n > MAX_DIMENSION {
    return Err(ProjRepError::DimensionTooLarge(n));
  }
  let zn = FiniteGroup::cyclic(n).expect("n >= 1");
  let group = Arc::new(FiniteGroup::direct_product(&zn, &zn));
  let (c, s) = (clock(n), shift(n));
  let matrices = (0..n * n).map(|idx| &c.pow(idx / n) * &s.pow(idx % n)).collect();
  UnitaryRep::new(group, matrices, DEFAULT_TOLERANCE)
}

/// Twisted left-regular representation `U_a e_b = exp(2 pi i xi(a,b)/m) e_{ab}`.
pub fn twisted_regular_rep(xi: &Cochain) -> Result<UnitaryRep, ProjRepError> {
  xi.require_degree(2)?;
  xi.require_cocycle()?;
  if !xi.is_normalized() {
    return Err(CochainError::NotNormalized.into());
  }
  let g = xi.group();
  let n = g.order();
  if n > MAX_DIMENSION {
    return Err(ProjRepError::DimensionTooLarge(n));
  }
  let matrices = (0..n)
    .map(|a| {
      let mut u = CMatrix::zeros(n);
      for b in 0..n {
        u[(g.mul(a, b), b)] = root_of_unity(xi.at2(a, b), xi.modulus());
      }
      u
    })
    .collect();
  UnitaryRep::new(g.clone(), matrices, DEFAULT_TOLERANCE)
}

/// `V_{(theta, a)} = exp(2 pi i theta / m) U_a`, a genuine representation of
/// the extension whose cocycle is the factor system of `rep`.
pub fn lift_to_extension(rep: &UnitaryRep, ext: &CentralExtension) -> Result<UnitaryRep, ProjRepError> {
  if **rep.group() != **ext.base() {
    return Err(ProjRepError::GroupMismatch);
  }
  let fs = extract_factor_system(rep, ext.modulus())?;
  let n = ext.base().order();
  if let Some(idx) = (0..n * n).find(|&i| fs.cocycle.values()[i] != ext.cocycle().values()[i]) {
    return Err(ProjRepError::CocycleMismatch(idx / n, idx % n));
  }
  let m = ext.modulus();
  let matrices = (0..ext.total().order())
    .map(|h| {
      let (theta, a) = ext.split(h);
      rep.matrix(a).scale(root_of_unity(theta, m))
    })
    .collect();
  UnitaryRep::new(ext.total().clone(), matrices, rep.tolerance())
}
