//! Central extensions `1 -> Z_m -> H -> G -> 1` built from a normalized
//! 2-cocycle.
//!
//! Elements of `H` are pairs `(theta, a)` with `theta` in `Z_m`, indexed
//! theta-major as `theta * |G| + a`, and multiply as
//! `(t1, a)(t2, b) = (t1 + t2 + xi(a, b), ab)`.

use std::sync::Arc;

use thiserror::Error;

use crate::{
  cochain::{Cochain, CochainError},
  group::{FiniteGroup, GroupError},
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
  #[error(transparent)]
  Cochain(#[from] CochainError),
  #[error("cocycle is not normalized; normalize it first")]
  NotNormalized,
  #[error("extension table is not a group: {0}")]
  Group(#[from] GroupError),
  #[error("extensions have different base groups or moduli")]
  BaseMismatch,
  #[error("second cocycle is not the first plus the coboundary of x (first mismatch at {0:?})")]
  CocyclesNotRelatedByX((usize, usize)),
}

/// The group `H` together with its projection to `G` and section `a -> (0, a)`.
#[derive(Debug, Clone)]
pub struct CentralExtension {
  base:    Arc<FiniteGroup>,
  modulus: u64,
  cocycle: Cochain,
  total:   Arc<FiniteGroup>,
}

/// Raw multiplication table of `Z_m x_xi G` without any checks.
pub fn extension_table(cocycle: &Cochain) -> Vec<Vec<usize>> {
  let g = cocycle.group();
  let n = g.order();
  let m = cocycle.modulus() as usize;
  let order = n * m;
  (0..order)
    .map(|h1| {
      let (t1, a) = (h1 / n, h1 % n);
      (0..order)
        .map(|h2| {
          let (t2, b) = (h2 / n, h2 % n);
          let t = (t1 + t2 + cocycle.at2(a, b) as usize) % m;
          t * n + g.mul(a, b)
        })
        .collect()
    })
    .collect()
}

impl CentralExtension {
  /// Builds `H` for a normalized 2-cocycle.
  pub fn build(cocycle: &Cochain) -> Result<Self, ExtensionError> {
    cocycle.require_degree(2)?;
    cocycle.require_cocycle()?;
    if !cocycle.is_normalized() {
      return Err(ExtensionError::NotNormalized);
    }
    Self::build_unchecked(cocycle)
  }

  /// Skips the cocycle checks and lets the Cayley-table validator judge
  /// the table. A normalized non-cocycle fails with
  /// [`GroupError::NotAssociative`].
  pub fn build_unchecked(cocycle: &Cochain) -> Result<Self, ExtensionError> {
    cocycle.require_degree(2)?;
    let base = cocycle.group().clone();
    let name = format!("{}.{}", cocycle.modulus(), base.name());
    let table = extension_table(cocycle);
    let total = FiniteGroup::from_cayley_table(&table, name)?;
    Ok(Self { base, modulus: cocycle.modulus(), cocycle: cocycle.clone(), total: Arc::new(total) })
  }

  pub fn base(&self) -> &Arc<FiniteGroup> { &self.base }

  pub fn modulus(&self) -> u64 { self.modulus }

  pub fn cocycle(&self) -> &Cochain { &self.cocycle }

  pub fn total(&self) -> &Arc<FiniteGroup> { &self.total }

  /// Index of `(theta, a)`.
  pub fn element(&self, theta: u64, a: usize) -> usize {
    (theta % self.modulus) as usize * self.base.order() + a
  }

  /// `(theta, a)` of an index.
  pub fn split(&self, h: usize) -> (u64, usize) {
    let n = self.base.order();
    ((h / n) as u64, h % n)
  }

  pub fn projection(&self, h: usize) -> usize { h % self.base.order() }

  pub fn section(&self, a: usize) -> usize { a }

  /// The central subgroup `{(theta, e)}`.
  pub fn central_subgroup(&self) -> Vec<usize> {
    (0..self.modulus).map(|t| self.element(t, 0)).collect()
  }

  /// Checks that every `(theta, e)` commutes with all of `H`.
  pub fn central_subgroup_is_central(&self) -> bool {
    let h = &self.total;
    self.central_subgroup().into_iter().all(|c| (0..h.order()).all(|x| h.mul(c, x) == h.mul(x, c)))
  }

  /// The group `H / C`, relabeled through the section so that coset
  /// `(*, a) C` gets label `a`.
  pub fn quotient_by_center_subgroup(&self) -> FiniteGroup {
    let h = &self.total;
    let center = self.central_subgroup();
    // label each element by the section element in its coset
    let coset_label = |x: usize| -> usize {
      center
        .iter()
        .map(|&c| h.mul(x, c))
        .find(|&y| self.split(y).0 == 0)
        .expect("every coset meets the section")
    };
    let n = self.base.order();
    let table: Vec<Vec<usize>> = (0..n)
      .map(|a| (0..n).map(|b| coset_label(h.mul(self.section(a), self.section(b)))).collect())
      .collect();
    FiniteGroup::from_cayley_table(&table, format!("{}/C", h.name()))
      .expect("quotient of a group by a normal subgroup is a group")
  }

  /// The map `(alpha, a) -> (alpha - x(a), a)` from `self` to `other`, where
  /// `other.cocycle = self.cocycle + dx`.
  pub fn isomorphism_to(&self, other: &CentralExtension, x: &Cochain) -> Result<Vec<usize>, ExtensionError> {
    if self.modulus != other.modulus || *self.base != *other.base {
      return Err(ExtensionError::BaseMismatch);
    }
    x.require_degree(1)?;
    if x.modulus() != self.modulus {
      return Err(CochainError::ModulusMismatch { left: self.modulus, right: x.modulus() }.into());
    }
    let shifted = self.cocycle.add(&x.coboundary()?)?;
    let n = self.base.order();
    if let Some(idx) = (0..n * n).find(|&i| shifted.values()[i] != other.cocycle.values()[i]) {
      return Err(ExtensionError::CocyclesNotRelatedByX((idx / n, idx % n)));
    }
    let m = self.modulus;
    Ok(
      (0..self.total.order())
        .map(|h| {
          let (alpha, a) = self.split(h);
          other.element((alpha + m - x.get(&[a])) % m, a)
        })
        .collect(),
    )
  }
}

/// Builds the extension, normalizing the cocycle first if needed.
/// Returns the extension and the 1-cochain used to normalize.
pub fn build_normalized(cocycle: &Cochain) -> Result<(CentralExtension, Cochain), ExtensionError> {
  let (normalized, shift) = cocycle.normalize()?;
  Ok((CentralExtension::build(&normalized)?, shift))
}
