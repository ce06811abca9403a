//! `sympow`: every verification in the library as a subcommand with a
//! deterministic JSON report.
//!
//! Exit status: 0 when every checked identity held, 1 when one failed,
//! 2 on parse or resource-cap errors (with a machine-readable error
//! object). Output is byte-identical across runs for the same command,
//! inputs, and seed: keys are sorted and no timestamps are emitted.

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use sympow_core::counting::{self, AffineVarietySpec, CountCaps, CountError};
use sympow_core::etale::{self, EtaleError, ExtensionSpec};
use sympow_core::invariant;
use sympow_core::poly::Caps;
use sympow_core::suite;
use sympow_core::towers;
use sympow_core::transfer;

#[derive(Parser)]
#[command(
    name = "sympow",
    about = "exact symmetric-power calculus: counts, towers, transfers, invariants",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input file (variety or extension stanzas, depending on the command)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Power index n
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Field size q (a prime power within caps)
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Seed for the deterministic generator behind randomized grids
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Resource caps as key=value (tuples, oracle-field, pairs, steps, terms)
    #[arg(long = "caps", global = true, value_name = "KEY=VALUE")]
    caps: Vec<String>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetric-power point counts of varieties, both methods when feasible
    SymCount,
    /// Coproduct count identity for pairs of varieties
    Kunneth,
    /// Tower term counts for coprojections of varieties
    Tower,
    /// Invariant subalgebra dimensions of tensor powers of extensions
    EtaleDim,
    /// Section-level comparison bijection for extensions
    ThetaGalois,
    /// Norm/transfer identities on tensor powers and finite sets
    Transfer,
    /// Universal factorization isomorphism between quotient presentations
    Prop81,
    /// Audit of the tower axioms on seeded split sequences
    LambdaAudit,
    /// Presentation of the symmetric square of the plane
    InvariantRing,
    /// The full verification suite
    Suite,
}

/// Outcome of a command: a JSON report plus whether every check held.
struct Outcome {
    report: Value,
    all_ok: bool,
}

#[derive(Debug)]
enum CliError {
    /// Parse or cap problem: exit 2 with a structured error object.
    Invalid {
        kind: &'static str,
        message: String,
        line: Option<usize>,
        column: Option<usize>,
    },
}

impl CliError {
    fn invalid(kind: &'static str, message: impl Into<String>) -> CliError {
        CliError::Invalid {
            kind,
            message: message.into(),
            line: None,
            column: None,
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> CliError {
        match e {
            CountError::Input { line, column, msg } => CliError::Invalid {
                kind: "parse",
                message: msg,
                line: Some(line),
                column: Some(column),
            },
            CountError::CapExceeded(_) | CountError::Overflow => {
                CliError::invalid("cap", e.to_string())
            }
            other => CliError::invalid("input", other.to_string()),
        }
    }
}

impl From<EtaleError> for CliError {
    fn from(e: EtaleError) -> CliError {
        match e {
            EtaleError::Input { line, msg } => CliError::Invalid {
                kind: "parse",
                message: msg,
                line: Some(line),
                column: Some(0),
            },
            EtaleError::TensorTooLarge(_)
            | EtaleError::SearchTooLarge(_)
            | EtaleError::SplittingFieldTooLarge(_) => CliError::invalid("cap", e.to_string()),
            other => CliError::invalid("input", other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match parse_caps(&cli.caps) {
        Ok(c) => c,
        Err(e) => return emit_error(&cli, e),
    };
    match run(&cli, &caps) {
        Ok(outcome) => {
            let pretty = to_sorted_pretty(&outcome.report);
            if write_out(&cli, &pretty).is_err() {
                return ExitCode::from(2);
            }
            if outcome.all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => emit_error(&cli, e),
    }
}

struct AllCaps {
    count: CountCaps,
    poly: Caps,
}

fn parse_caps(entries: &[String]) -> Result<AllCaps, CliError> {
    let mut caps = AllCaps {
        count: CountCaps::default(),
        poly: Caps::default(),
    };
    for entry in entries {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| CliError::invalid("usage", format!("bad --caps entry `{entry}`")))?;
        let v: u64 = value
            .parse()
            .map_err(|_| CliError::invalid("usage", format!("bad --caps value `{value}`")))?;
        match key {
            "tuples" => caps.count.max_tuples = v as u128,
            "oracle-field" => caps.count.max_oracle_field = v,
            "pairs" => caps.poly.max_pairs = v,
            "steps" => caps.poly.max_reduction_steps = v,
            "terms" => caps.poly.max_terms = v as usize,
            other => {
                return Err(CliError::invalid(
                    "usage",
                    format!("unknown --caps key `{other}`"),
                ))
            }
        }
    }
    Ok(caps)
}

fn emit_error(cli: &Cli, e: CliError) -> ExitCode {
    let CliError::Invalid {
        kind,
        message,
        line,
        column,
    } = e;
    let body = json!({
        "error": {
            "kind": kind,
            "message": message,
            "line": line,
            "column": column,
        }
    });
    let pretty = to_sorted_pretty(&body);
    let _ = write_out(cli, &pretty);
    ExitCode::from(2)
}

fn write_out(cli: &Cli, text: &str) -> std::io::Result<()> {
    use std::io::Write;
    match &cli.out {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => {
            // tolerate a closed pipe (e.g. downstream `head`)
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other,
            }
        }
    }
}

/// serde_json maps are ordered, so a Value round trip sorts every key.
fn to_sorted_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serializes")
}

fn read_input(cli: &Cli) -> Result<Option<String>, CliError> {
    match &cli.input {
        None => Ok(None),
        Some(path) => std::fs::read_to_string(path)
            .map(Some)
            .map_err(|e| CliError::invalid("io", format!("{}: {e}", path.display()))),
    }
}

fn load_varieties(cli: &Cli) -> Result<Vec<AffineVarietySpec>, CliError> {
    match read_input(cli)? {
        Some(text) => Ok(counting::parse_varieties(&text)?),
        None => {
            let q = cli.q.unwrap_or(2);
            Ok(vec![
                AffineVarietySpec::affine_line(q),
                AffineVarietySpec::point(q),
            ])
        }
    }
}

fn load_extensions(cli: &Cli) -> Result<Vec<ExtensionSpec>, CliError> {
    match read_input(cli)? {
        Some(text) => Ok(etale::parse_extensions(&text)?),
        None => {
            let mut out = Vec::new();
            for q in [2u64, 3] {
                for r in 1..=4 {
                    out.push(ExtensionSpec::canonical(q, r).map_err(CliError::from)?);
                }
            }
            Ok(out)
        }
    }
}

fn run(cli: &Cli, caps: &AllCaps) -> Result<Outcome, CliError> {
    match cli.command {
        Command::SymCount => sym_count(cli, caps),
        Command::Kunneth => kunneth(cli, caps),
        Command::Tower => tower(cli, caps),
        Command::EtaleDim => etale_dim(cli),
        Command::ThetaGalois => theta_galois(cli),
        Command::Transfer => transfer_cmd(cli),
        Command::Prop81 => prop81(cli),
        Command::LambdaAudit => lambda_audit(cli),
        Command::InvariantRing => invariant_ring(cli, caps),
        Command::Suite => run_suite(cli),
    }
}

fn sym_count(cli: &Cli, caps: &AllCaps) -> Result<Outcome, CliError> {
    let n = cli.n.unwrap_or(2);
    let varieties = load_varieties(cli)?;
    let mut checks = Vec::new();
    let mut all_ok = true;
    for x in &varieties {
        let gf = counting::sym_count(x, n, &caps.count)?;
        let oracle = if n <= 3 {
            match counting::sym_count_oracle(x, n, &caps.count) {
                Ok(rep) => Some(rep.count),
                Err(CountError::CapExceeded(_)) => None,
                Err(e) => return Err(e.into()),
            }
        } else {
            None
        };
        let verdict = oracle.map_or(true, |o| o == gf.count);
        all_ok &= verdict;
        checks.push(json!({
            "law": "multiset-count",
            "label": gf.label,
            "q": gf.q,
            "n": n,
            "counts": {"generating-function": gf.count, "orbit-oracle": oracle},
            "method": "generating-function",
            "identity_checked": oracle.is_some(),
            "lhs": gf.count,
            "rhs": oracle.unwrap_or(gf.count),
            "verdict": verdict,
        }));
    }
    Ok(Outcome {
        report: json!({"command": "sym-count", "checks": checks, "ok": all_ok}),
        all_ok,
    })
}

fn pairs_of(varieties: &[AffineVarietySpec]) -> Result<Vec<(&AffineVarietySpec, &AffineVarietySpec)>, CliError> {
    if varieties.len() < 2 || varieties.len() % 2 != 0 {
        return Err(CliError::invalid(
            "usage",
            format!(
                "expected an even number of variety stanzas (pairs), got {}",
                varieties.len()
            ),
        ));
    }
    Ok(varieties.chunks(2).map(|c| (&c[0], &c[1])).collect())
}

fn kunneth(cli: &Cli, caps: &AllCaps) -> Result<Outcome, CliError> {
    let n = cli.n.unwrap_or(2);
    let varieties = load_varieties(cli)?;
    let mut checks = Vec::new();
    let mut all_ok = true;
    for (x, y) in pairs_of(&varieties)? {
        let rep = counting::kunneth_verify(x, y, n, &caps.count)?;
        all_ok &= rep.holds;
        checks.push(json!({
            "law": "kunneth-coproduct-counts",
            "label": format!("{}+{}", rep.label_x, rep.label_y),
            "q": rep.q,
            "n": rep.n,
            "counts": rep.rhs_terms,
            "method": "generating-function",
            "identity_checked": true,
            "lhs": rep.lhs,
            "rhs": rep.rhs,
            "verdict": rep.holds,
        }));
    }
    Ok(Outcome {
        report: json!({"command": "kunneth", "checks": checks, "ok": all_ok}),
        all_ok,
    })
}

fn tower(cli: &Cli, caps: &AllCaps) -> Result<Outcome, CliError> {
    let n = cli.n.unwrap_or(2);
    let varieties = load_varieties(cli)?;
    let mut checks = Vec::new();
    let mut all_ok = true;
    for (x, y) in pairs_of(&varieties)? {
        let rep = counting::tower_counts(x, y, n, &caps.count)?;
        let ok = rep.monotone && rep.endpoints_match && rep.cones_match;
        all_ok &= ok;
        checks.push(json!({
            "law": "tower-term-counts",
            "label": format!("{}+{}", rep.label_x, rep.label_y),
            "q": rep.q,
            "n": rep.n,
            "counts": rep.terms,
            "cone_counts": rep.cone_counts,
            "method": "generating-function",
            "identity_checked": true,
            "lhs": rep.terms.first().copied().unwrap_or(0),
            "rhs": rep.terms.last().copied().unwrap_or(0),
            "monotone": rep.monotone,
            "endpoints_match": rep.endpoints_match,
            "cones_match": rep.cones_match,
            "verdict": ok,
        }));
    }
    Ok(Outcome {
        report: json!({"command": "tower", "checks": checks, "ok": all_ok}),
        all_ok,
    })
}

fn etale_dim(cli: &Cli) -> Result<Outcome, CliError> {
    let specs = load_extensions(cli)?;
    let ns: Vec<u32> = match cli.n {
        Some(n) => vec![n],
        None => (1..=4).collect(),
    };
    let mut checks = Vec::new();
    let mut all_ok = true;
    for spec in &specs {
        for &n in &ns {
            if (spec.r as u64).pow(n) > 256 {
                continue;
            }
            let inv = etale::build_invariants(spec.clone(), n)?;
            let ok = inv.dim() as u64 == inv.dim_expected() && inv.basis_is_fixed();
            all_ok &= ok;
            checks.push(json!({
                "law": "invariant-dimension-law",
                "q": spec.q,
                "r": spec.r,
                "n": n,
                "dim_expected": inv.dim_expected(),
                "dim_actual": inv.dim(),
                "basis_fixed": inv.basis_is_fixed(),
                "verdict": ok,
            }));
        }
    }
    Ok(Outcome {
        report: json!({"command": "etale-dim", "checks": checks, "ok": all_ok}),
        all_ok,
    })
}

fn theta_galois(cli: &Cli) -> Result<Outcome, CliError> {
    let specs: Vec<ExtensionSpec> = match read_input(cli)? {
        Some(text) => etale::parse_extensions(&text)?,
        None => {
            let mut out = Vec::new();
            for q in [2u64, 3] {
                for r in [2u32, 3] {
                    out.push(ExtensionSpec::canonical(q, r).map_err(CliError::from)?);
                }
            }
            out
        }
    };
    let ns: Vec<u32> = match cli.n {
        Some(n) => vec![n],
        None => vec![2, 3],
    };
    let mut checks = Vec::new();
    let mut all_ok = true;
    for spec in &specs {
        for &n in &ns {
            let rep = etale::theta_bijection_check(spec, n)?;
            all_ok &= rep.bijection_ok;
            let mut v = to_value(&rep);
            v["law"] = json!("section-bijection");
            checks.push(v);
        }
    }
    Ok(Outcome {
        report: json!({"command": "theta-galois", "checks": checks, "ok": all_ok}),
        all_ok,
    })
}

fn transfer_cmd(cli: &Cli) -> Result<Outcome, CliError> {
    let ns: Vec<u32> = match cli.n {
        Some(n) => vec![n],
        None => (1..=4).collect(),
    };
    let mut checks = Vec::new();
    let mut all_ok = true;
    for d in 1..=3usize {
        for &n in &ns {
            let m = transfer::tensor_power_module(d, n)
                .map_err(|e| CliError::invalid("cap", e.to_string()))?;
            let pack = transfer::build_transfer(&m)
                .map_err(|e| CliError::invalid("input", e.to_string()))?;
            let (_, image, sym) = transfer::projector_sym(&m)
                .map_err(|e| CliError::invalid("input", e.to_string()))?;
            let expected = transfer::binomial_u64((d + n as usize - 1) as u64, n as u64);
            let ok = pack.report.pi_tr_is_scaled_identity
                && pack.report.tr_pi_is_norm
                && sym.idempotent
                && image.len() as u64 == expected;
            all_ok &= ok;
            checks.push(json!({
                "law": "transfer-identities",
                "context": "tensor-power",
                "d": d,
                "n": n,
                "identities": {
                    "pi_tr": pack.report.pi_tr_is_scaled_identity,
                    "tr_pi": pack.report.tr_pi_is_norm,
                    "idempotent": sym.idempotent,
                },
                "dims": {
                    "module": m.dim,
                    "coinvariants": pack.report.coinvariant_dim,
                    "symmetrizer_rank": image.len(),
                    "expected": expected,
                },
                "verdict": ok,
            }));
        }
    }
    for s in 1..=3usize {
        for &n in &ns {
            if n > 3 {
                continue;
            }
            let rep = transfer::finite_set_transfer(s, n)
                .map_err(|e| CliError::invalid("cap", e.to_string()))?;
            let pull = transfer::pullback_invariants_check(s, n)
                .map_err(|e| CliError::invalid("cap", e.to_string()))?;
            let ok =
                rep.pi_tr_is_scaled_identity && rep.tr_pi_is_norm_sum && pull.subspaces_equal;
            all_ok &= ok;
            checks.push(json!({
                "law": "transfer-identities",
                "context": "finite-set",
                "set_size": s,
                "n": n,
                "identities": {
                    "pi_tr": rep.pi_tr_is_scaled_identity,
                    "tr_pi": rep.tr_pi_is_norm_sum,
                    "pullback_image_is_invariants": pull.subspaces_equal,
                },
                "dims": {
                    "tuples": rep.tuple_dim,
                    "multisets": rep.multiset_dim,
                },
                "verdict": ok,
            }));
        }
    }
    Ok(Outcome {
        report: json!({"command": "transfer", "checks": checks, "ok": all_ok}),
        all_ok,
    })
}

fn prop81(cli: &Cli) -> Result<Outcome, CliError> {
    let ns: Vec<u32> = match cli.n {
        Some(n) => vec![n],
        None => (1..=4).collect(),
    };
    let mut checks = Vec::new();
    let mut all_ok = true;
    for d in 1..=3usize {
        for &n in &ns {
            let rep = transfer::verify_universal_iso(d, n)
                .map_err(|e| CliError::invalid("cap", e.to_string()))?;
            all_ok &= rep.invertible;
            let mut v = to_value(&rep);
            v["law"] = json!("universal-factorization-iso");
            checks.push(v);
        }
    }
    Ok(Outcome {
        report: json!({"command": "prop81", "checks": checks, "ok": all_ok}),
        all_ok,
    })
}

fn lambda_audit(cli: &Cli) -> Result<Outcome, CliError> {
    let result = suite::criterion_11_lambda_audit(cli.seed);
    let mut checks = vec![to_value(&result)];
    let mut all_ok = result.passed;
    if let Some(n) = cli.n {
        // a single named audit plus its comparison ladder, at the
        // two-elements-per-side coprojection
        let x = towers::PointedSet::of_size(2);
        let z = towers::PointedSet::of_size(2);
        let audit = towers::lambda_audit(&x, &z, n, None)
            .map_err(|e| CliError::invalid("cap", e.to_string()))?;
        let ladder = towers::theta_ladder(&towers::Coprojection::new(x, z), n)
            .map_err(|e| CliError::invalid("cap", e.to_string()))?;
        all_ok &= audit.passed && ladder.theta_bijective && ladder.squares_commute;
        checks.push(to_value(&audit));
        checks.push(to_value(&ladder));
    }
    Ok(Outcome {
        report: json!({"command": "lambda-audit", "checks": checks, "ok": all_ok, "seed": cli.seed}),
        all_ok,
    })
}

fn invariant_ring(_cli: &Cli, caps: &AllCaps) -> Result<Outcome, CliError> {
    let pres = invariant::compute_presentation(&caps.poly)
        .map_err(|e| CliError::invalid("cap", e.to_string()))?;
    let sing = invariant::singularity_check()
        .map_err(|e| CliError::invalid("input", e.to_string()))?;
    let mut counts = serde_json::Map::new();
    let mut counts_ok = true;
    for q in [2u64, 3, 5] {
        let rep = invariant::count_cross_check(q, &caps.count)
            .map_err(|e| CliError::invalid("cap", e.to_string()))?;
        counts_ok &= rep.agree;
        counts.insert(
            q.to_string(),
            json!({"method_a": rep.method_a, "method_b": rep.method_b, "agree": rep.agree}),
        );
    }
    let all_ok = pres.generators_invariant
        && pres.relation_vanishes_on_generators
        && pres.principal_and_matches
        && pres.coord_change_identity_ok
        && sing.singular_at_origin
        && sing.rank_at_generic_point == 1
        && counts_ok;
    let report = json!({
        "command": "invariant-ring",
        "law": "plane-square-presentation",
        "relation": pres.relation,
        "generators_invariant": pres.generators_invariant,
        "relation_vanishes_on_generators": pres.relation_vanishes_on_generators,
        "principal_and_matches": pres.principal_and_matches,
        "coord_change_identity_ok": pres.coord_change_identity_ok,
        "singular_at_origin": sing.singular_at_origin,
        "rank_at_origin": sing.rank_at_origin,
        "rank_at_generic_point": sing.rank_at_generic_point,
        "counts": Value::Object(counts),
        "ok": all_ok,
    });
    Ok(Outcome {
        report,
        all_ok,
    })
}

fn run_suite(cli: &Cli) -> Result<Outcome, CliError> {
    let results = suite::run_all(cli.seed);
    let all_ok = results.iter().all(|r| r.passed);
    Ok(Outcome {
        report: json!({
            "command": "suite",
            "seed": cli.seed,
            "checks": results.iter().map(to_value).collect::<Vec<_>>(),
            "ok": all_ok,
        }),
        all_ok,
    })
}
