use std::sync::Arc;

use cocycle::{
  alternating_pairing, are_equivalent, extract_factor_system, is_coboundary, rephase, second_cohomology,
  selftest::{brute_force_h2_order, brute_force_h2_order_normalized, corpus},
  twisted_regular_rep, CentralExtension, Cochain, ExtensionError, FiniteGroup,
};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn corpus_group() -> impl Strategy<Value = Arc<FiniteGroup>> {
  (0..8usize).prop_map(|i| corpus()[i].clone())
}

fn modulus() -> impl Strategy<Value = u64> { prop::sample::select(vec![2u64, 3, 4, 6]) }

proptest! {
  #![proptest_config(ProptestConfig::with_cases(48))]

  #[test]
  fn coboundary_is_linear(g in corpus_group(), m in modulus(), degree in 0usize..3, seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let a = Cochain::random(g.clone(), degree, m, &mut rng).unwrap();
    let b = Cochain::random(g, degree, m, &mut rng).unwrap();
    let lhs = a.add(&b).unwrap().coboundary().unwrap();
    let rhs = a.coboundary().unwrap().add(&b.coboundary().unwrap()).unwrap();
    prop_assert_eq!(lhs, rhs);
  }

  #[test]
  fn delta_squared_is_zero(g in corpus_group(), m in modulus(), degree in 0usize..3, seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let c = Cochain::random(g, degree, m, &mut rng).unwrap();
    prop_assert!(c.delta_squared().unwrap().is_zero());
  }

  #[test]
  fn certificates_are_sound(g in corpus_group(), m in modulus(), seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let h2 = second_cohomology(&g, m).unwrap();
    let xi = h2.random_cocycle(&mut rng).unwrap();
    if let Some(x) = is_coboundary(&xi).unwrap().certificate() {
      prop_assert_eq!(&x.coboundary().unwrap(), &xi);
      prop_assert_eq!(x.get(&[0]), 0);
    }
  }

  #[test]
  fn nonzero_pairing_blocks_trivialization(g in corpus_group(), m in modulus(), seed: u64) {
    prop_assume!(g.is_abelian());
    let mut rng = StdRng::seed_from_u64(seed);
    let xi = second_cohomology(&g, m).unwrap().random_cocycle(&mut rng).unwrap();
    if !alternating_pairing(&xi).unwrap().is_zero() {
      prop_assert!(!is_coboundary(&xi).unwrap().is_coboundary());
    }
  }

  #[test]
  fn rephasing_shifts_by_coboundary(g in corpus_group(), m in modulus(), seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let xi = second_cohomology(&g, m).unwrap().random_cocycle(&mut rng).unwrap();
    let rep = twisted_regular_rep(&xi).unwrap();
    prop_assert_eq!(&extract_factor_system(&rep, m).unwrap().cocycle, &xi);
    let mut x: Vec<u64> = (0..g.order()).map(|_| rng.gen_range(0..m)).collect();
    x[0] = 0;
    let x = Cochain::new(g.clone(), 1, m, x).unwrap();
    let moved = extract_factor_system(&rephase(&rep, &x).unwrap(), m).unwrap().cocycle;
    prop_assert_eq!(moved, xi.add(&x.coboundary().unwrap()).unwrap());
  }

  #[test]
  fn build_succeeds_iff_normalized_cocycle(g in corpus_group(), m in 2u64..5, seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let c = Cochain::random(g, 2, m, &mut rng).unwrap();
    let built = CentralExtension::build(&c);
    prop_assert_eq!(built.is_ok(), c.is_cocycle() && c.is_normalized());
    if let Ok(e) = built {
      prop_assert_eq!(e.total().order() as u64, m * c.group().order() as u64);
    } else if c.is_normalized() {
      let unchecked = CentralExtension::build_unchecked(&c);
      prop_assert!(
        matches!(unchecked, Err(ExtensionError::Group(cocycle::GroupError::NotAssociative { .. }))),
        "unchecked build of a normalized non-cocycle should fail associativity"
      );
    }
  }
}

#[test]
fn invariant_factors_divide_modulus() {
  for g in corpus() {
    for m in [1, 2, 3, 4, 6, 8, 12] {
      let h = second_cohomology(&g, m).unwrap();
      assert_eq!(h.invariant_factors.len(), h.representatives.len());
      for w in h.invariant_factors.windows(2) {
        assert_eq!(w[1] % w[0], 0);
      }
      for &d in &h.invariant_factors {
        assert!(d > 1 && m % d == 0, "{} m={m}: {:?}", g.name(), h.invariant_factors);
      }
    }
  }
}

#[test]
fn class_counts_match_enumeration_for_small_groups() {
  let z2 = FiniteGroup::cyclic(2).unwrap();
  let groups = [
    FiniteGroup::trivial(),
    z2.clone(),
    FiniteGroup::cyclic(3).unwrap(),
    FiniteGroup::cyclic(4).unwrap(),
    FiniteGroup::direct_product(&z2, &z2),
  ];
  for g in groups.map(Arc::new) {
    for m in 1..=3u64 {
      let oracle = brute_force_h2_order(&g, m, 1 << 16)
        .or_else(|| brute_force_h2_order_normalized(&g, m, 1 << 20))
        .expect("all cases fit one of the oracles");
      let computed = second_cohomology(&g, m).unwrap().order();
      assert_eq!(u128::from(oracle), computed, "{} m={m}", g.name());
    }
  }
}

#[test]
fn equivalence_is_transitive_via_summed_certificates() {
  let mut rng = StdRng::seed_from_u64(17);
  for g in corpus() {
    let h2 = second_cohomology(&g, 4).unwrap();
    let a = h2.random_cocycle(&mut rng).unwrap();
    let mut shift = |c: &Cochain| {
      let mut x: Vec<u64> = (0..g.order()).map(|_| rng.gen_range(0..4)).collect();
      x[0] = 0;
      c.add(&Cochain::new(g.clone(), 1, 4, x).unwrap().coboundary().unwrap()).unwrap()
    };
    let b = shift(&a);
    let c = shift(&b);
    let x = are_equivalent(&a, &b).unwrap().certificate().unwrap().clone();
    let y = are_equivalent(&b, &c).unwrap().certificate().unwrap().clone();
    assert_eq!(a.add(&x.add(&y).unwrap().coboundary().unwrap()).unwrap(), c);
  }
}
