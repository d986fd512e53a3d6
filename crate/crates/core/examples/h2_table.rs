//! Prints H^2(G, Z_m) for the built-in test groups.

use cocycle::{second_cohomology, selftest::corpus};

fn main() {
  for g in corpus() {
    for m in [2, 3, 4, 6] {
      let h = second_cohomology(&g, m).unwrap();
      println!("{:>6} m={m}: {:?}", g.name(), h.invariant_factors);
    }
  }
}
