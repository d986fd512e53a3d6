//! The verification corpus: nine checks over the small test groups, each
//! with a fixed seed and a wall-clock budget.
//!
//! The brute-force class counting used here enumerates cochains directly and
//! never touches the Smith-form solver it is compared against.

use std::{
  collections::HashSet,
  sync::Arc,
  time::{Duration, Instant},
};

use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::{
  cochain::Cochain,
  cohomology::{alternating_pairing, is_coboundary, second_cohomology, Trivialization},
  extension::{CentralExtension, ExtensionError},
  group::{FiniteGroup, GroupError},
  projrep::{extract_factor_system, lift_to_extension, rephase, schwinger_rep, twisted_regular_rep, UnitaryRep},
  smith::gcd,
};

/// Matrix tolerance used by the numerical checks.
pub const MATRIX_TOLERANCE: f64 = 1e-10;

/// The eight groups every check runs over.
pub fn corpus() -> Vec<Arc<FiniteGroup>> {
  let z2 = FiniteGroup::cyclic(2).expect("valid");
  let z3 = FiniteGroup::cyclic(3).expect("valid");
  vec![
    z2.clone(),
    z3.clone(),
    FiniteGroup::cyclic(4).expect("valid"),
    FiniteGroup::direct_product(&z2, &z2),
    FiniteGroup::direct_product(&z3, &z3),
    FiniteGroup::symmetric(3).expect("valid"),
    FiniteGroup::dihedral(4).expect("valid"),
    FiniteGroup::quaternion8(),
  ]
  .into_iter()
  .map(Arc::new)
  .collect()
}

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
  pub id:      u8,
  pub title:   &'static str,
  pub passed:  bool,
  pub detail:  String,
  pub elapsed: Duration,
  pub budget:  Duration,
}

impl CriterionOutcome {
  pub fn within_budget(&self) -> bool { self.elapsed <= self.budget }

  pub fn summary_line(&self) -> String {
    format!(
      "[{}] {}. {} ({:.2?} / budget {:.0?}): {}",
      if self.passed && self.within_budget() { "PASS" } else { "FAIL" },
      self.id,
      self.title,
      self.elapsed,
      self.budget,
      self.detail
    )
  }
}

type Check = fn(&mut StdRng) -> Result<String, String>;

const CRITERIA: [(u8, &str, u64, Check); 9] = [
  (1, "coboundary squares to zero", 10, delta_squared_vanishes),
  (2, "cocycle iff associative extension", 10, cocycle_iff_associative),
  (3, "brute-force class counts", 60, brute_force_class_counts),
  (4, "H2(Z_n, Z_m) has order gcd(n, m)", 30, cyclic_cohomology),
  (5, "Schwinger classes are nontrivial", 5, schwinger_nontrivial),
  (6, "trivialization soundness and completeness", 10, trivialization),
  (7, "extension isomorphism for equivalent cocycles", 30, extension_isomorphism),
  (8, "lift to the extension is a homomorphism", 10, lift_is_homomorphism),
  (9, "quotient by the central subgroup recovers G", 5, quotient_recovery),
];

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: u8, seed: u64) -> Option<CriterionOutcome> {
  let &(id, title, budget, check) = CRITERIA.iter().find(|c| c.0 == id)?;
  let mut rng = StdRng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(u64::from(id)));
  let start = Instant::now();
  let result = check(&mut rng);
  let elapsed = start.elapsed();
  let (passed, detail) = match result {
    Ok(d) => (true, d),
    Err(d) => (false, d),
  };
  Some(CriterionOutcome { id, title, passed, detail, elapsed, budget: Duration::from_secs(budget) })
}

pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
  CRITERIA.iter().filter_map(|c| run_criterion(c.0, seed)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
  if cond {
    Ok(())
  } else {
    Err(msg())
  }
}

fn err<E: std::fmt::Display>(e: E) -> String { e.to_string() }

fn random_normalized_1cochain(g: &Arc<FiniteGroup>, m: u64, rng: &mut StdRng) -> Cochain {
  let mut x: Vec<u64> = (0..g.order()).map(|_| rng.gen_range(0..m)).collect();
  x[0] = 0;
  Cochain::new(g.clone(), 1, m, x).expect("valid shape")
}

fn delta_squared_vanishes(rng: &mut StdRng) -> Result<String, String> {
  let mut count = 0;
  for g in corpus() {
    for m in [2, 3, 4, 6] {
      for degree in 0..=2 {
        for _ in 0..100 {
          let c = Cochain::random(g.clone(), degree, m, rng).map_err(err)?;
          let dd = c.delta_squared().map_err(err)?;
          ensure(dd.is_zero(), || format!("nonzero d(dc) on {} m={m} degree {degree}", g.name()))?;
          count += 1;
        }
      }
    }
  }
  Ok(format!("{count} random cochains"))
}

fn cocycle_iff_associative(rng: &mut StdRng) -> Result<String, String> {
  let groups = corpus();
  for _ in 0..50 {
    let g = &groups[rng.gen_range(0..groups.len())];
    let m = rng.gen_range(2..=4);
    let xi = second_cohomology(g, m).map_err(err)?.random_cocycle(rng).map_err(err)?;
    let ext = CentralExtension::build(&xi).map_err(err)?;
    ensure(ext.total().order() == g.order() * m as usize, || "wrong extension order".into())?;
  }
  // Z2 has no normalized non-cocycles; sample from the rest
  let candidates: Vec<_> = groups.iter().filter(|g| g.order() >= 3).collect();
  let mut rejected = 0;
  while rejected < 50 {
    let g = candidates[rng.gen_range(0..candidates.len())];
    let m = rng.gen_range(2..=4);
    let n = g.order();
    let c = Cochain::from_fn(g.clone(), 2, m, |ab| {
      if ab[0] == 0 || ab[1] == 0 {
        0
      } else {
        rng.gen_range(0..m as i64)
      }
    })
    .map_err(err)?;
    if c.is_cocycle() {
      continue;
    }
    match CentralExtension::build_unchecked(&c) {
      Err(ExtensionError::Group(GroupError::NotAssociative { .. })) => rejected += 1,
      other => return Err(format!("non-cocycle on {} (n={n}) gave {other:?}", g.name())),
    }
  }
  Ok("50 cocycles accepted, 50 non-cocycles rejected".into())
}

/// Counts `|H^2(G, Z_m)|` by enumerating every 2-cochain and bucketing the
/// cocycles by coboundary equivalence. Returns `None` above `budget` cases.
pub fn brute_force_h2_order(g: &Arc<FiniteGroup>, m: u64, budget: u64) -> Option<u64> {
  let n = g.order();
  let cases = m.checked_pow(u32::try_from(n * n).ok()?)?;
  if cases > budget {
    return None;
  }
  let coboundaries: Vec<Vec<u64>> = {
    let mut set = HashSet::new();
    for code in 0..m.pow(n as u32) {
      let x = digits(code, m, n);
      let dx: Vec<u64> = (0..n * n)
        .map(|i| {
          let (a, b) = (i / n, i % n);
          (x[a] + x[b] + m - x[g.mul(a, b)]) % m
        })
        .collect();
      set.insert(dx);
    }
    set.into_iter().collect()
  };
  let mut classes = HashSet::new();
  for code in 0..cases {
    let xi = digits(code, m, n * n);
    if !satisfies_cocycle_identity(g, &xi, m) {
      continue;
    }
    let canonical = coboundaries
      .iter()
      .map(|b| xi.iter().zip(b).map(|(x, y)| (x + y) % m).collect::<Vec<u64>>())
      .min()
      .expect("zero is a coboundary");
    classes.insert(canonical);
  }
  Some(classes.len() as u64)
}

/// `|H^2|` as `|normalized cocycles| / |normalized coboundaries|`, by
/// enumerating only normalized 2-cochains.
pub fn brute_force_h2_order_normalized(g: &Arc<FiniteGroup>, m: u64, budget: u64) -> Option<u64> {
  let n = g.order();
  let free = (n - 1) * (n - 1);
  let cases = m.checked_pow(u32::try_from(free).ok()?)?;
  if cases > budget {
    return None;
  }
  let mut coboundaries = HashSet::new();
  for code in 0..m.pow(n as u32 - 1) {
    let mut x = vec![0];
    x.extend(digits(code, m, n - 1));
    let dx: Vec<u64> =
      (0..n * n).map(|i| (x[i / n] + x[i % n] + m - x[g.mul(i / n, i % n)]) % m).collect();
    coboundaries.insert(dx);
  }
  let mut cocycles = 0u64;
  let mut xi = vec![0u64; n * n];
  for code in 0..cases {
    let d = digits(code, m, free);
    for a in 1..n {
      for b in 1..n {
        xi[a * n + b] = d[(a - 1) * (n - 1) + (b - 1)];
      }
    }
    if satisfies_cocycle_identity(g, &xi, m) {
      cocycles += 1;
    }
  }
  Some(cocycles / coboundaries.len() as u64)
}

fn digits(mut code: u64, base: u64, len: usize) -> Vec<u64> {
  (0..len)
    .map(|_| {
      let d = code % base;
      code /= base;
      d
    })
    .collect()
}

/// `xi(a,b) + xi(ab,c) = xi(b,c) + xi(a,bc)` for all triples.
fn satisfies_cocycle_identity(g: &FiniteGroup, xi: &[u64], m: u64) -> bool {
  let n = g.order();
  (0..n).all(|a| {
    (0..n).all(|b| {
      let ab = g.mul(a, b);
      (0..n).all(|c| {
        let bc = g.mul(b, c);
        (xi[a * n + b] + xi[ab * n + c]) % m == (xi[b * n + c] + xi[a * n + bc]) % m
      })
    })
  })
}

fn brute_force_class_counts(_: &mut StdRng) -> Result<String, String> {
  let z2 = Arc::new(FiniteGroup::cyclic(2).expect("valid"));
  let z3 = Arc::new(FiniteGroup::cyclic(3).expect("valid"));
  let klein = Arc::new(FiniteGroup::direct_product(&z2, &z2));
  let mut report = Vec::new();
  for (g, m) in [(z2.clone(), 2), (z2, 3), (z3, 3), (klein, 2)] {
    let oracle = brute_force_h2_order(&g, m, 1 << 16).ok_or("case over budget")?;
    let computed = second_cohomology(&g, m).map_err(err)?.order();
    ensure(u128::from(oracle) == computed, || {
      format!("{} m={m}: brute force {oracle} classes, Smith form {computed}", g.name())
    })?;
    report.push(format!("{} m={m}: {oracle}", g.name()));
  }
  Ok(report.join(", "))
}

fn cyclic_cohomology(_: &mut StdRng) -> Result<String, String> {
  let mut cross_checked = 0;
  for n in 1..=6 {
    let g = Arc::new(FiniteGroup::cyclic(n).expect("valid"));
    for m in 1..=6u64 {
      let h = second_cohomology(&g, m).map_err(err)?;
      let expected = gcd(n as u64, m);
      ensure(h.order() == u128::from(expected), || format!("Z{n} m={m}: |H2| = {}", h.order()))?;
      if let Some(oracle) = brute_force_h2_order_normalized(&g, m, 300_000) {
        ensure(oracle == expected, || format!("Z{n} m={m}: oracle {oracle}"))?;
        cross_checked += 1;
      }
    }
  }
  Ok(format!("36 cases, {cross_checked} cross-checked by enumeration"))
}

fn schwinger_nontrivial(_: &mut StdRng) -> Result<String, String> {
  let mut worst: f64 = 0.0;
  for n in [2usize, 3, 5] {
    let rep = schwinger_rep(n).map_err(err)?;
    let fs = extract_factor_system(&rep, n as u64).map_err(err)?;
    ensure(fs.cocycle.is_cocycle(), || format!("N={n}: not a cocycle"))?;
    ensure(!is_coboundary(&fs.cocycle).map_err(err)?.is_coboundary(), || format!("N={n}: trivial class"))?;
    let beta = alternating_pairing(&fs.cocycle).map_err(err)?;
    // (1,0) is index n, (0,1) is index 1
    let b = beta.at2(n, 1);
    ensure(gcd(b, n as u64) == 1, || format!("N={n}: pairing {b} is not a unit"))?;
    ensure(fs.residual < MATRIX_TOLERANCE && fs.matrix_residual < MATRIX_TOLERANCE, || {
      format!("N={n}: residuals {:e} / {:e}", fs.residual, fs.matrix_residual)
    })?;
    worst = worst.max(fs.matrix_residual).max(fs.residual);
  }
  Ok(format!("N = 2, 3, 5 obstructed; worst residual {worst:.1e}"))
}

fn check_trivialization(
  rep: &UnitaryRep,
  m: u64,
  rng: &mut StdRng,
  stats: &mut [usize; 3],
) -> Result<(), String> {
  let xi = extract_factor_system(rep, m).map_err(err)?.cocycle;
  let g = rep.group().clone();
  match is_coboundary(&xi).map_err(err)? {
    Trivialization::Coboundary(x) => {
      let genuine = rephase(rep, &x.neg()).map_err(err)?;
      let fs = extract_factor_system(&genuine, m).map_err(err)?;
      ensure(fs.cocycle.is_zero(), || format!("{} m={m}: rephasing left a phase", g.name()))?;
      ensure(genuine.homomorphism_defect() < MATRIX_TOLERANCE, || "rephased rep not genuine".into())?;
      stats[0] += 1;
    },
    Trivialization::Obstructed(_) => {
      if g.is_abelian() {
        let beta = alternating_pairing(&xi).map_err(err)?;
        if !beta.is_zero() {
          for _ in 0..20 {
            let x = random_normalized_1cochain(&g, m, rng);
            let moved = extract_factor_system(&rephase(rep, &x).map_err(err)?, m).map_err(err)?.cocycle;
            ensure(!moved.is_zero(), || "obstructed rep rephased to genuine".into())?;
            ensure(alternating_pairing(&moved).map_err(err)? == beta, || "pairing not invariant".into())?;
          }
          stats[1] += 1;
        }
      }
      // exhaustive search over all rephasings where feasible
      let n = g.order();
      if m.checked_pow(n as u32 - 1).is_some_and(|c| c <= 4096) {
        for code in 0..m.pow(n as u32 - 1) {
          let mut x = vec![0];
          x.extend(digits(code, m, n - 1));
          let x = Cochain::new(g.clone(), 1, m, x).map_err(err)?;
          ensure(!xi.add(&x.coboundary().map_err(err)?).map_err(err)?.is_zero(), || {
            format!("{} m={m}: obstructed class has a trivializing x", g.name())
          })?;
        }
        stats[2] += 1;
      }
    },
  }
  Ok(())
}

fn trivialization(rng: &mut StdRng) -> Result<String, String> {
  let mut stats = [0usize; 3];
  for g in corpus() {
    for m in [2, 3, 4] {
      let h2 = second_cohomology(&g, m).map_err(err)?;
      for _ in 0..4 {
        let xi = h2.random_cocycle(rng).map_err(err)?;
        let rep = twisted_regular_rep(&xi).map_err(err)?;
        check_trivialization(&rep, m, rng, &mut stats)?;
      }
      for rep_xi in &h2.representatives {
        let rep = twisted_regular_rep(rep_xi).map_err(err)?;
        check_trivialization(&rep, m, rng, &mut stats)?;
      }
    }
  }
  for n in [2, 3, 5] {
    check_trivialization(&schwinger_rep(n).map_err(err)?, n as u64, rng, &mut stats)?;
  }
  ensure(stats[0] > 0 && stats[1] > 0, || format!("a branch was never exercised: {stats:?}"))?;
  Ok(format!(
    "{} trivialized, {} blocked by a nonzero pairing, {} obstructions confirmed exhaustively",
    stats[0], stats[1], stats[2]
  ))
}

fn extension_isomorphism(rng: &mut StdRng) -> Result<String, String> {
  let mut checked = 0;
  for g in corpus() {
    for i in 0..20 {
      let m = 2 + (i % 3) as u64;
      let xi = second_cohomology(&g, m).map_err(err)?.random_cocycle(rng).map_err(err)?;
      let x = random_normalized_1cochain(&g, m, rng);
      let e1 = CentralExtension::build(&xi).map_err(err)?;
      let e2 = CentralExtension::build(&xi.add(&x.coboundary().map_err(err)?).map_err(err)?).map_err(err)?;
      let phi = e1.isomorphism_to(&e2, &x).map_err(err)?;
      ensure(e1.total().relabeled_equals(e2.total(), &phi), || {
        format!("{} m={m}: map is not an isomorphism", g.name())
      })?;
      checked += 1;
    }
  }
  Ok(format!("{checked} explicit isomorphisms verified on all pairs"))
}

fn lift_is_homomorphism(_: &mut StdRng) -> Result<String, String> {
  let mut reps = vec![schwinger_rep(2).map_err(err)?, schwinger_rep(3).map_err(err)?];
  let d4 = Arc::new(FiniteGroup::dihedral(4).expect("valid"));
  let q8 = Arc::new(FiniteGroup::quaternion8());
  for (g, m) in [(d4, 2), (q8, 4)] {
    let h2 = second_cohomology(&g, m).map_err(err)?;
    let xi = h2.representatives.first().ok_or("expected a nontrivial class")?;
    reps.push(twisted_regular_rep(xi).map_err(err)?);
  }
  let moduli = [2, 3, 2, 4];
  let mut worst: f64 = 0.0;
  for (rep, m) in reps.iter().zip(moduli) {
    let xi = extract_factor_system(rep, m).map_err(err)?.cocycle;
    let ext = CentralExtension::build(&xi).map_err(err)?;
    let lifted = lift_to_extension(rep, &ext).map_err(err)?;
    let defect = lifted.homomorphism_defect();
    ensure(defect < MATRIX_TOLERANCE, || format!("{}: defect {defect:e}", rep.group().name()))?;
    worst = worst.max(defect);
  }
  Ok(format!("4 lifts, worst defect {worst:.1e}"))
}

fn quotient_recovery(rng: &mut StdRng) -> Result<String, String> {
  let mut count = 0;
  let mut check = |xi: &Cochain| -> Result<(), String> {
    let ext = CentralExtension::build(xi).map_err(err)?;
    ensure(ext.central_subgroup_is_central(), || "C is not central".into())?;
    ensure(ext.quotient_by_center_subgroup().table() == ext.base().table(), || {
      format!("{}: H/C differs from G", ext.base().name())
    })?;
    count += 1;
    Ok(())
  };
  for g in corpus() {
    for m in [2, 3, 4] {
      let h2 = second_cohomology(&g, m).map_err(err)?;
      check(&Cochain::zero(g.clone(), 2, m).map_err(err)?)?;
      for rep in &h2.representatives {
        check(rep)?;
      }
      for _ in 0..2 {
        check(&h2.random_cocycle(rng).map_err(err)?)?;
      }
    }
  }
  let schwinger3 = extract_factor_system(&schwinger_rep(3).map_err(err)?, 3).map_err(err)?.cocycle;
  check(&schwinger3)?;
  Ok(format!("{count} extensions"))
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn oracles_agree_with_each_other() {
    let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let klein = Arc::new(FiniteGroup::direct_product(&z2, &z2));
    for (g, m) in [(z2, 2), (klein, 2)] {
      assert_eq!(brute_force_h2_order(&g, m, 1 << 16), brute_force_h2_order_normalized(&g, m, 1 << 16));
    }
  }

  #[test]
  fn klein_has_eight_classes_mod_two() {
    let z2 = FiniteGroup::cyclic(2).unwrap();
    let klein = Arc::new(FiniteGroup::direct_product(&z2, &z2));
    assert_eq!(brute_force_h2_order(&klein, 2, 1 << 16), Some(8));
  }

  #[test]
  fn budget_respected() {
    let g = Arc::new(FiniteGroup::quaternion8());
    assert_eq!(brute_force_h2_order(&g, 2, 1 << 16), None);
  }

  #[test]
  fn unknown_criterion() {
    assert!(run_criterion(0, 0).is_none());
    assert!(run_criterion(10, 0).is_none());
  }
}
