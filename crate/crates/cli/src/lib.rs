//! The `cocycle` command-line tool.
//!
//! Exit status is 0 on success, 1 when the answer to the mathematical question
//! is negative (not a coboundary, not equivalent, a failed verification), and
//! 2 on malformed input or usage errors.

mod groupspec;

use std::{
  ffi::OsString,
  fmt::Write as _,
  fs,
  path::{Path, PathBuf},
  sync::Arc,
};

use clap::{Args, Parser, Subcommand};
use cocycle::{
  alternating_pairing, are_equivalent,
  extension::build_normalized,
  extract_factor_system,
  format::{write_cochain, write_group, CochainFile},
  is_coboundary, lift_to_extension,
  projrep::DEFAULT_TOLERANCE,
  rephase, schwinger_rep, second_cohomology, selftest, twisted_regular_rep, CentralExtension, Cochain,
  FiniteGroup, Obstruction, Trivialization, UnitaryRep,
};
pub use groupspec::parse_group_spec;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "cocycle", version, about = "Factor systems, second cohomology and central extensions of finite groups")]
struct Cli {
  /// Print a JSON object instead of the text summary.
  #[arg(long, global = true)]
  json: bool,
  /// Seed for all random choices.
  #[arg(long, global = true, default_value_t = 0)]
  seed: u64,
  #[command(subcommand)]
  command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
  /// Compute H^2(G, Z_m) with one generating cocycle per cyclic summand.
  H2 {
    #[arg(long)]
    group:   String,
    #[arg(long)]
    modulus: u64,
  },
  /// Decide whether a 2-cocycle is a coboundary; exit 1 if it is not.
  Trivialize {
    #[command(flatten)]
    input: CocycleArgs,
    /// Write the certificate x (d x = xi) in the cochain text format.
    #[arg(long, value_name = "PATH")]
    out:   Option<PathBuf>,
  },
  /// Decide whether two 2-cocycles differ by a coboundary; exit 1 if not.
  Equivalent {
    #[command(flatten)]
    input:    CocycleArgs,
    #[arg(long, value_name = "@FILE")]
    cochain2: String,
    /// Write the certificate x (xi2 = xi + d x) in the cochain text format.
    #[arg(long, value_name = "PATH")]
    out:      Option<PathBuf>,
  },
  /// Build the central extension of G by Z_m defined by a 2-cocycle.
  Extend {
    #[command(flatten)]
    input:      CocycleArgs,
    /// Write the Cayley table of the extension.
    #[arg(long, value_name = "PATH")]
    emit_table: Option<PathBuf>,
  },
  /// Factor system of the clock and shift representation of Z_N x Z_N.
  Schwinger {
    #[arg(long)]
    n:   usize,
    /// Write the factor system in the cochain text format.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
  },
  /// Build the twisted regular representation of a 2-cocycle and read its
  /// factor system back.
  Regular {
    #[command(flatten)]
    input: CocycleArgs,
    #[arg(long, value_name = "PATH")]
    out:   Option<PathBuf>,
  },
  /// Lift a projective representation to a genuine representation of the
  /// central extension; exit 1 if the lift is not a homomorphism.
  Lift {
    #[command(flatten)]
    source: RepSource,
  },
  /// Multiply U_a by exp(2 pi i x(a) / m) and report the new factor system.
  Rephase {
    #[command(flatten)]
    source: RepSource,
    /// Degree-1 cochain x with x(e) = 0.
    #[arg(long, value_name = "@FILE")]
    phase:  String,
    /// Use -x instead of x.
    #[arg(long)]
    negate: bool,
    #[arg(long, value_name = "PATH")]
    out:    Option<PathBuf>,
  },
  /// Run the acceptance criteria and print a pass/fail table.
  Selftest,
}

#[derive(Debug, Args)]
struct CocycleArgs {
  #[arg(long)]
  group:   String,
  /// Checked against the modulus recorded in the cochain file.
  #[arg(long)]
  modulus: Option<u64>,
  #[arg(long, value_name = "@FILE")]
  cochain: String,
}

/// Either the clock and shift representation (`--n`) or the twisted regular
/// representation of a cocycle (`--group` and `--cochain`).
#[derive(Debug, Args)]
struct RepSource {
  #[arg(long, conflicts_with_all = ["group", "cochain", "modulus"], required_unless_present = "cochain")]
  n:       Option<usize>,
  #[arg(long, requires = "cochain")]
  group:   Option<String>,
  #[arg(long)]
  modulus: Option<u64>,
  #[arg(long, value_name = "@FILE", requires = "group")]
  cochain: Option<String>,
}

struct Report {
  positive: bool,
  text:     String,
  json:     Value,
}

type Outcome = Result<Report, String>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
  I: IntoIterator<Item = T>,
  T: Into<OsString> + Clone,
{
  let cli = match Cli::try_parse_from(args) {
    Ok(cli) => cli,
    Err(e) => {
      let rendered = e.render().to_string();
      return if e.use_stderr() {
        let _ = write!(err, "{rendered}");
        2
      } else {
        let _ = write!(out, "{rendered}");
        0
      };
    }
  };
  match dispatch(&cli) {
    Ok(report) => {
      let written = if cli.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("json values serialize"))
      } else {
        write!(out, "{}", report.text)
      };
      if written.is_err() {
        return 2;
      }
      if report.positive {
        0
      } else {
        1
      }
    }
    Err(msg) => {
      let _ = writeln!(err, "error: {msg}");
      2
    }
  }
}

fn dispatch(cli: &Cli) -> Outcome {
  match &cli.command {
    Command::H2 { group, modulus } => h2(group, *modulus),
    Command::Trivialize { input, out } => trivialize(input, out.as_deref()),
    Command::Equivalent { input, cochain2, out } => equivalent(input, cochain2, out.as_deref()),
    Command::Extend { input, emit_table } => extend(input, emit_table.as_deref()),
    Command::Schwinger { n, out } => schwinger(*n, out.as_deref()),
    Command::Regular { input, out } => regular(input, out.as_deref()),
    Command::Lift { source } => lift(source),
    Command::Rephase { source, phase, negate, out } => rephase_cmd(source, phase, *negate, out.as_deref()),
    Command::Selftest => run_selftest(cli.seed),
  }
}

fn s<E: std::fmt::Display>(e: E) -> String { e.to_string() }

fn load_group(spec: &str) -> Result<Arc<FiniteGroup>, String> { parse_group_spec(spec).map(Arc::new) }

fn load_cochain(
  group: &Arc<FiniteGroup>,
  arg: &str,
  degree: usize,
  modulus: Option<u64>,
) -> Result<Cochain, String> {
  let path = arg.strip_prefix('@').unwrap_or(arg);
  let file = CochainFile::parse(&groupspec::read_file(arg)?).map_err(|e| format!("{path}: {e}"))?;
  if file.degree != degree {
    return Err(format!("{path}: expected a degree-{degree} cochain, found degree {}", file.degree));
  }
  if let Some(m) = modulus {
    if m != file.modulus {
      return Err(format!("--modulus {m} disagrees with modulus {} in {path}", file.modulus));
    }
  }
  file.into_cochain(group).map_err(|e| format!("{path}: {e}"))
}

fn load_cocycle(input: &CocycleArgs) -> Result<Cochain, String> {
  let group = load_group(&input.group)?;
  load_cochain(&group, &input.cochain, 2, input.modulus)
}

fn save(path: Option<&Path>, text: &str) -> Result<(), String> {
  match path {
    Some(p) => fs::write(p, text).map_err(|e| format!("cannot write `{}`: {e}", p.display())),
    None => Ok(()),
  }
}

fn cochain_json(c: &Cochain) -> Value { serde_json::to_value(CochainFile::from_cochain(c)).expect("plain data") }

fn yes_no(b: bool) -> &'static str {
  if b {
    "yes"
  } else {
    "no"
  }
}

fn describe_factors(factors: &[u64]) -> String {
  if factors.is_empty() {
    "0".into()
  } else {
    factors.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join(" + ")
  }
}

fn h2(group: &str, modulus: u64) -> Outcome {
  let g = load_group(group)?;
  let h = second_cohomology(&g, modulus).map_err(s)?;
  let order = u64::try_from(h.order()).map(Value::from).unwrap_or_else(|_| Value::from(h.order().to_string()));
  let mut text = format!(
    "H^2({}, Z_{modulus}) = {}\norder: {}\n",
    g.name(),
    describe_factors(&h.invariant_factors),
    h.order()
  );
  for (rep, d) in h.representatives.iter().zip(&h.invariant_factors) {
    let _ = write!(text, "generator of Z{d}:\n{}", write_cochain(rep));
  }
  let json = json!({
    "group": g.name(),
    "group_order": g.order(),
    "modulus": modulus,
    "invariant_factors": h.invariant_factors,
    "order": order,
    "z2_rank": h.z2_rank,
    "b2_rank": h.b2_rank,
    "representatives": h.representatives.iter().map(cochain_json).collect::<Vec<_>>(),
  });
  Ok(Report { positive: true, text, json })
}

fn obstruction_text(o: &Obstruction) -> String {
  if o.divisor == 0 {
    format!("Smith coordinate {} beyond the rank holds {} instead of 0", o.row, o.residue)
  } else {
    format!("Smith coordinate {} holds {}, not a multiple of {}", o.row, o.residue, o.divisor)
  }
}

/// First pair with a nonzero alternating pairing, for abelian groups.
fn pairing_witness(xi: &Cochain) -> Result<Option<(usize, usize, u64)>, String> {
  if !xi.group().is_abelian() {
    return Ok(None);
  }
  let beta = alternating_pairing(xi).map_err(s)?;
  let n = xi.group().order();
  Ok(beta.values().iter().position(|&v| v != 0).map(|i| (i / n, i % n, beta.values()[i])))
}

fn certificate_report(t: &Trivialization, xi: &Cochain, out: Option<&Path>, yes: &str) -> Outcome {
  match t {
    Trivialization::Coboundary(x) => {
      save(out, &write_cochain(x))?;
      let text = format!("{yes}\n{}", write_cochain(x));
      let json = json!({ "coboundary": true, "certificate": cochain_json(x), "obstruction": null });
      Ok(Report { positive: true, text, json })
    }
    Trivialization::Obstructed(o) => {
      let mut text = format!("obstruction: class is nontrivial\n{}\n", obstruction_text(o));
      let witness = pairing_witness(xi)?;
      if let Some((a, b, k)) = witness {
        let _ = writeln!(text, "alternating pairing at ({a}, {b}) is {k}, not 0");
      }
      let json = json!({
        "coboundary": false,
        "certificate": null,
        "obstruction": o,
        "pairing_witness": witness.map(|(a, b, k)| json!({ "a": a, "b": b, "value": k })),
      });
      Ok(Report { positive: false, text, json })
    }
  }
}

fn trivialize(input: &CocycleArgs, out: Option<&Path>) -> Outcome {
  let xi = load_cocycle(input)?;
  let t = is_coboundary(&xi).map_err(s)?;
  certificate_report(&t, &xi, out, "coboundary: yes\ncertificate x with d x = xi:")
}

fn equivalent(input: &CocycleArgs, cochain2: &str, out: Option<&Path>) -> Outcome {
  let xi = load_cocycle(input)?;
  let xi2 = load_cochain(xi.group(), cochain2, 2, input.modulus)?;
  let t = are_equivalent(&xi, &xi2).map_err(s)?;
  let diff = xi2.sub(&xi).map_err(s)?;
  let mut report = certificate_report(&t, &diff, out, "equivalent: yes\ncertificate x with xi2 = xi + d x:")?;
  report.json["equivalent"] = Value::Bool(report.positive);
  Ok(report)
}

fn extend(input: &CocycleArgs, emit_table: Option<&Path>) -> Outcome {
  let xi = load_cocycle(input)?;
  let (ext, shift) = build_normalized(&xi).map_err(s)?;
  let total = ext.total();
  let central = ext.central_subgroup_is_central();
  let quotient = ext.quotient_by_center_subgroup().table() == ext.base().table();
  save(emit_table, &write_group(total))?;
  let mut text = format!(
    "extension of {} by Z_{}: order {}\nabelian: {}\ncentral subgroup is central: {}\nquotient recovers {}: {}\n",
    ext.base().name(),
    ext.modulus(),
    total.order(),
    yes_no(total.is_abelian()),
    yes_no(central),
    ext.base().name(),
    yes_no(quotient)
  );
  if !shift.is_zero() {
    let _ = write!(text, "cocycle normalized by adding d of:\n{}", write_cochain(&shift));
  }
  if let Some(p) = emit_table {
    let _ = writeln!(text, "table written to {}", p.display());
  }
  let json = json!({
    "base": ext.base().name(),
    "modulus": ext.modulus(),
    "order": total.order(),
    "abelian": total.is_abelian(),
    "central": central,
    "quotient_recovers_base": quotient,
    "normalization": cochain_json(&shift),
    "cocycle": cochain_json(ext.cocycle()),
    "table": total.table(),
  });
  Ok(Report { positive: central && quotient, text, json })
}

fn schwinger(n: usize, out: Option<&Path>) -> Outcome {
  let rep = schwinger_rep(n).map_err(s)?;
  let fs = extract_factor_system(&rep, n as u64).map_err(s)?;
  let xi = &fs.cocycle;
  let coboundary = is_coboundary(xi).map_err(s)?.is_coboundary();
  // (1,0) sits at index n, (0,1) at index 1; both are the identity when n = 1.
  let (a, b) = ((1 % n) * n, 1 % n);
  let pairing = alternating_pairing(xi).map_err(s)?.at2(a, b);
  save(out, &write_cochain(xi))?;
  let ok = fs.matrix_residual <= DEFAULT_TOLERANCE;
  let text = format!(
    "{}cocycle: {}\ncoboundary: {}\npairing at ((1,0), (0,1)): {pairing}\nphase residual: {:.3e}\nmatrix residual: {:.3e}\n",
    write_cochain(xi),
    yes_no(xi.is_cocycle()),
    yes_no(coboundary),
    fs.residual,
    fs.matrix_residual
  );
  let json = json!({
    "n": n,
    "cocycle": cochain_json(xi),
    "is_cocycle": xi.is_cocycle(),
    "is_coboundary": coboundary,
    "pairing": pairing,
    "residual": fs.residual,
    "matrix_residual": fs.matrix_residual,
  });
  Ok(Report { positive: ok, text, json })
}

/// Normalizes `xi` and returns its twisted regular representation together
/// with the normalized cocycle and the normalizing 1-cochain.
fn regular_rep(xi: &Cochain) -> Result<(UnitaryRep, Cochain, Cochain), String> {
  let (normalized, shift) = xi.normalize().map_err(s)?;
  let rep = twisted_regular_rep(&normalized).map_err(s)?;
  Ok((rep, normalized, shift))
}

fn regular(input: &CocycleArgs, out: Option<&Path>) -> Outcome {
  let xi = load_cocycle(input)?;
  let (rep, normalized, shift) = regular_rep(&xi)?;
  let fs = extract_factor_system(&rep, xi.modulus()).map_err(s)?;
  let matches = fs.cocycle == normalized;
  save(out, &write_cochain(&fs.cocycle))?;
  let mut text = format!("twisted regular representation of dimension {}\nfactor system:\n", rep.dim());
  let _ = write!(
    text,
    "{}matches input: {}\nphase residual: {:.3e}\nmatrix residual: {:.3e}\n",
    write_cochain(&fs.cocycle),
    yes_no(matches),
    fs.residual,
    fs.matrix_residual
  );
  if !shift.is_zero() {
    let _ = write!(text, "input normalized by adding d of:\n{}", write_cochain(&shift));
  }
  let json = json!({
    "dimension": rep.dim(),
    "cocycle": cochain_json(&fs.cocycle),
    "normalization": cochain_json(&shift),
    "matches": matches,
    "residual": fs.residual,
    "matrix_residual": fs.matrix_residual,
  });
  Ok(Report { positive: matches, text, json })
}

/// The representation named by `source` and its (normalized) factor system.
fn load_rep(source: &RepSource) -> Result<(UnitaryRep, Cochain), String> {
  match (&source.n, &source.group, &source.cochain) {
    (Some(n), _, _) => {
      let rep = schwinger_rep(*n).map_err(s)?;
      let xi = extract_factor_system(&rep, *n as u64).map_err(s)?.cocycle;
      Ok((rep, xi))
    }
    (None, Some(group), Some(cochain)) => {
      let g = load_group(group)?;
      let xi = load_cochain(&g, cochain, 2, source.modulus)?;
      let (rep, normalized, _) = regular_rep(&xi)?;
      Ok((rep, normalized))
    }
    _ => Err("give either --n or both --group and --cochain".into()),
  }
}

fn lift(source: &RepSource) -> Outcome {
  let (rep, xi) = load_rep(source)?;
  let ext = CentralExtension::build(&xi).map_err(s)?;
  let lifted = lift_to_extension(&rep, &ext).map_err(s)?;
  let defect = lifted.homomorphism_defect();
  let genuine = defect <= DEFAULT_TOLERANCE;
  let text = format!(
    "lifted a {}-dimensional representation of {} to the extension of order {}\nhomomorphism defect: {defect:.3e}\ngenuine: {}\n",
    rep.dim(),
    rep.group().name(),
    ext.total().order(),
    yes_no(genuine)
  );
  let json = json!({
    "dimension": rep.dim(),
    "base_order": rep.group().order(),
    "extension_order": ext.total().order(),
    "cocycle": cochain_json(&xi),
    "residual": defect,
    "tolerance": DEFAULT_TOLERANCE,
    "genuine": genuine,
  });
  Ok(Report { positive: genuine, text, json })
}

fn rephase_cmd(source: &RepSource, phase: &str, negate: bool, out: Option<&Path>) -> Outcome {
  let (rep, xi) = load_rep(source)?;
  let mut x = load_cochain(rep.group(), phase, 1, Some(xi.modulus()))?;
  if negate {
    x = x.neg();
  }
  let moved = rephase(&rep, &x).map_err(s)?;
  let fs = extract_factor_system(&moved, xi.modulus()).map_err(s)?;
  let expected = xi.add(&x.coboundary().map_err(s)?).map_err(s)?;
  let matches = fs.cocycle == expected;
  let genuine = fs.cocycle.is_zero();
  save(out, &write_cochain(&fs.cocycle))?;
  let text = format!(
    "factor system after rephasing:\n{}equals xi + d x: {}\ngenuine representation: {}\nphase residual: {:.3e}\nmatrix residual: {:.3e}\n",
    write_cochain(&fs.cocycle),
    yes_no(matches),
    yes_no(genuine),
    fs.residual,
    fs.matrix_residual
  );
  let json = json!({
    "cocycle": cochain_json(&fs.cocycle),
    "phase": cochain_json(&x),
    "expected_matches": matches,
    "genuine": genuine,
    "residual": fs.residual,
    "matrix_residual": fs.matrix_residual,
  });
  Ok(Report { positive: matches, text, json })
}

fn run_selftest(seed: u64) -> Outcome {
  let outcomes = selftest::run_all(seed);
  let passed = outcomes.iter().filter(|o| o.passed && o.within_budget()).count();
  let mut text = String::new();
  for o in &outcomes {
    let _ = writeln!(text, "{}", o.summary_line());
  }
  let _ = writeln!(text, "{passed}/{} criteria passed (seed {seed})", outcomes.len());
  let criteria: Vec<Value> = outcomes
    .iter()
    .map(|o| {
      json!({
        "id": o.id,
        "title": o.title,
        "passed": o.passed,
        "within_budget": o.within_budget(),
        "elapsed_ms": o.elapsed.as_secs_f64() * 1e3,
        "budget_ms": o.budget.as_millis() as u64,
        "detail": o.detail,
      })
    })
    .collect();
  let all = passed == outcomes.len();
  let json = json!({ "seed": seed, "passed": all, "criteria": criteria });
  Ok(Report { positive: all, text, json })
}
