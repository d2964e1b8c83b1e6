//! Command-line front end: runs the p-adic pipelines at a chosen character
//! and prime, emits deterministic JSON reports, and maps outcomes to exit
//! codes (0 pass, 1 identity failure, 2 precondition error, 3 insufficient
//! precision).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use num_bigint::BigInt;

use wt1::acceptance::{self, tolerances, BuiltPoint, PointSpec};
use wt1::chars::CharEmbedding;
use wt1::error::Error;
use wt1::lfunc;
use wt1::linv::{self, PUnitData};
use wt1::overconv;
use wt1::qexp::{self, EisKind};
use wt1::report::CheckSet;

mod config;
mod render;

use config::RunConfig;
use render::{padic_entry, series_entry};

#[derive(Parser)]
#[command(name = "wt1", version, about = "p-adic L-values, L-invariants, Eisenstein/cuspidal families, overconvergent forms and Hecke-algebra models at an irregular weight-one point")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Flat key=value config file (flags take precedence over it).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Character: "kronecker:D" or "mod:N:g1=e1,g2=e2,order=m[,embed=j]".
    #[arg(long = "char", global = true)]
    char_spec: Option<String>,

    /// The working prime p (odd, coprime to the conductor).
    #[arg(long, global = true)]
    p: Option<u64>,

    /// Significant p-adic digits.
    #[arg(long, global = true)]
    prec: Option<u32>,

    /// Truncation order of series in X.
    #[arg(long, global = true)]
    mx: Option<usize>,

    /// Jet order in s.
    #[arg(long, global = true)]
    jet: Option<usize>,

    /// Length of q-expansion tables.
    #[arg(long, global = true)]
    nmax: Option<usize>,

    /// JSON file with p-unit data (for non-quadratic characters).
    #[arg(long, global = true)]
    units: Option<PathBuf>,

    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// The jet of L_p(phi omega_p, s) at s = 0.
    Lp,
    /// The Iwasawa power series zeta_phi(X) mod X^Mx.
    ZetaSeries,
    /// The L-invariant L(phi) (automatic for quadratic characters).
    Linv {
        /// Inline p-unit polynomial "c0,c1,...,ck" (constant first).
        #[arg(long)]
        unit_poly: Option<String>,
        /// Valuation of the distinguished root of --unit-poly.
        #[arg(long)]
        unit_val: Option<u64>,
    },
    /// Classical q-expansions.
    Qexp {
        #[command(subcommand)]
        what: QexpCmd,
    },
    /// Lambda-adic families through the irregular point.
    Family {
        #[command(subcommand)]
        what: FamilyCmd,
    },
    /// The overconvergent eigenspace basis and its identity checks.
    Overconvergent {
        /// Which identity groups to run ("all", "eigenspace",
        /// "decomposition", "dual").
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Finite-precision local Hecke-algebra models.
    HeckeStructure,
    /// Identity verification suites.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum QexpCmd {
    /// Weight-k Eisenstein series.
    Eisenstein {
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// "1,phi" or "phi,1".
        #[arg(long, default_value = "1,phi")]
        kind: String,
    },
    /// The p-stabilization f of the weight-one Eisenstein series.
    Stabilized,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// One of the two Eisenstein families.
    Eisenstein {
        /// "1,phi" or "phi,1".
        #[arg(long, default_value = "1,phi")]
        kind: String,
    },
    /// The cuspidal family mod X^2.
    Cuspidal,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// The derivative formula at the trivial zero, both pipelines.
    Gross,
    /// The trace linear relation mod X^2 at all primes up to the bound.
    Relation {
        #[arg(long, default_value_t = tolerances::RELATION_PRIME_BOUND)]
        lmax: u64,
    },
    /// The simple zero of the Iwasawa series.
    FerreroGreenberg,
    /// The complete criterion suite at this point.
    All,
}

enum Outcome {
    Pass,
    IdentityFailure,
    InsufficientPrecision,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, outcome)) => {
            let rendered = serde_json::to_string_pretty(&value).expect("serializable report");
            println!("{}", rendered);
            if let Some(path) = &cli.opts.out {
                if let Err(e) = std::fs::write(path, rendered + "\n") {
                    eprintln!("error: cannot write {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            match outcome {
                Outcome::Pass => ExitCode::SUCCESS,
                Outcome::IdentityFailure => ExitCode::from(1),
                Outcome::InsufficientPrecision => ExitCode::from(3),
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            match e {
                Error::InsufficientPrecision(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> wt1::Result<(Value, Outcome)> {
    let cfg = RunConfig::resolve(&cli.opts)?;
    match &cli.cmd {
        Command::Lp => cmd_lp(&cfg),
        Command::ZetaSeries => cmd_zeta(&cfg),
        Command::Linv {
            unit_poly,
            unit_val,
        } => cmd_linv(&cfg, unit_poly.as_deref(), *unit_val),
        Command::Qexp { what } => cmd_qexp(&cfg, what),
        Command::Family { what } => cmd_family(&cfg, what),
        Command::Overconvergent { check } => cmd_overconvergent(&cfg, check),
        Command::HeckeStructure => cmd_hecke(&cfg),
        Command::Verify { what } => cmd_verify(&cfg, what),
    }
}

fn base_report(cfg: &RunConfig, command: &str) -> Value {
    json!({
        "schema": "wt1-report/1",
        "command": command,
        "config": cfg.as_json(),
    })
}

fn embedding(cfg: &RunConfig) -> wt1::Result<CharEmbedding> {
    CharEmbedding::new(&cfg.chi, cfg.p, cfg.prec, cfg.embed_index)
}

fn parse_kind(s: &str) -> wt1::Result<EisKind> {
    match s {
        "1,phi" => Ok(EisKind::OneChi),
        "phi,1" => Ok(EisKind::ChiOne),
        other => Err(Error::InvalidInput(format!(
            "unknown kind \"{}\": expected \"1,phi\" or \"phi,1\"",
            other
        ))),
    }
}

fn cmd_lp(cfg: &RunConfig) -> wt1::Result<(Value, Outcome)> {
    let emb = embedding(cfg)?;
    let jet = lfunc::lp_jet(&emb, cfg.jet)?;
    let mut report = base_report(cfg, "lp");
    report["jet_order"] = json!(cfg.jet);
    report["coefficients"] = Value::Array(jet.jet.coeffs().iter().map(padic_entry).collect());
    report["value_at_zero"] = padic_entry(jet.value());
    report["derivative_at_zero"] = padic_entry(jet.derivative());
    Ok((report, Outcome::Pass))
}

fn cmd_zeta(cfg: &RunConfig) -> wt1::Result<(Value, Outcome)> {
    let emb = embedding(cfg)?;
    let zeta = lfunc::zeta_series(&emb, cfg.mx)?;
    let mut report = base_report(cfg, "zeta-series");
    report["mx"] = json!(cfg.mx);
    report["coefficients"] = Value::Array(zeta.series.coeffs().iter().map(padic_entry).collect());
    Ok((report, Outcome::Pass))
}

fn parse_inline_unit(poly: &str, val: u64) -> wt1::Result<PUnitData> {
    let coeffs = poly
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map(BigInt::from)
                .map_err(|_| Error::InvalidInput(format!("bad coefficient \"{}\"", t)))
        })
        .collect::<wt1::Result<Vec<_>>>()?;
    Ok(PUnitData {
        label: "phi".into(),
        coeffs,
        valuation: val,
        sigma: None,
    })
}

fn cmd_linv(
    cfg: &RunConfig,
    unit_poly: Option<&str>,
    unit_val: Option<u64>,
) -> wt1::Result<(Value, Outcome)> {
    let emb = embedding(cfg)?;
    let mut report = base_report(cfg, "linv");

    let inline = match (unit_poly, unit_val) {
        (Some(p), Some(v)) => Some(parse_inline_unit(p, v)?),
        (Some(_), None) | (None, Some(_)) => {
            return Err(Error::InvalidInput(
                "--unit-poly and --unit-val must be given together".into(),
            ))
        }
        (None, None) => None,
    };

    let l = if let Some(u) = &inline {
        let l = linv::l_invariant_from_unit(&emb, u)?;
        let roots =
            linv::padic_roots_of_valuation(&u.coeffs, u.valuation, cfg.p, cfg.prec)?;
        report["chosen_root"] = padic_entry(&roots[0]);
        l
    } else if cfg.chi.is_quadratic() {
        let d = cfg.chi.discriminant().unwrap();
        let data = linv::split_prime_power_generator(d, cfg.p)?;
        let poly = data.minimal_polynomial(cfg.p);
        report["class_number"] = json!(data.class_number);
        report["generator"] = json!({
            "x": data.x.to_string(),
            "y": data.y.to_string(),
            "exponent": data.exponent,
        });
        report["minimal_polynomial"] =
            Value::Array(poly.iter().map(|c| json!(c.to_string())).collect());
        let roots = linv::padic_roots_of_valuation(&poly, data.exponent, cfg.p, cfg.prec)?;
        report["chosen_root"] = padic_entry(&roots[0]);
        linv::l_invariant(&emb, None)?
    } else {
        let units = cfg.load_units()?;
        let u = units
            .iter()
            .find(|u| u.label == "phi")
            .ok_or_else(|| Error::Precondition("missing unit data labeled \"phi\"".into()))?;
        let l = linv::l_invariant_from_unit(&emb, u)?;
        let roots =
            linv::padic_roots_of_valuation(&u.coeffs, u.valuation, cfg.p, cfg.prec)?;
        report["chosen_root"] = padic_entry(&roots[0]);
        l
    };
    report["l_invariant"] = padic_entry(&l);
    Ok((report, Outcome::Pass))
}

fn qexp_json(coeffs: &[Value], a0: Value) -> Value {
    json!({ "a0": a0, "coefficients": coeffs })
}

fn cmd_qexp(cfg: &RunConfig, what: &QexpCmd) -> wt1::Result<(Value, Outcome)> {
    let emb = embedding(cfg)?;
    let mut report = base_report(cfg, "qexp");
    match what {
        QexpCmd::Eisenstein { k, kind } => {
            let kind = parse_kind(kind)?;
            report["weight"] = json!(k);
            if cfg.chi.is_quadratic() {
                let e = qexp::eisenstein_rational(&cfg.chi, *k, kind, cfg.nmax)?;
                let coeffs: Vec<Value> = (1..=cfg.nmax)
                    .map(|n| json!(e.coeff(n).unwrap().to_string()))
                    .collect();
                report["expansion"] = qexp_json(&coeffs, json!(e.a0().to_string()));
            } else {
                let e = qexp::eisenstein_padic(&emb, *k, kind, cfg.nmax)?;
                let coeffs: Vec<Value> =
                    (1..=cfg.nmax).map(|n| padic_entry(e.coeff(n).unwrap())).collect();
                report["expansion"] = qexp_json(&coeffs, padic_entry(e.a0()));
            }
        }
        QexpCmd::Stabilized => {
            let f = qexp::irregular_stabilization(&emb, cfg.nmax)?;
            let coeffs: Vec<Value> =
                (1..=cfg.nmax).map(|n| padic_entry(f.coeff(n).unwrap())).collect();
            report["expansion"] = qexp_json(&coeffs, padic_entry(f.a0()));
        }
    }
    Ok((report, Outcome::Pass))
}

fn build_point_from_cfg(cfg: &RunConfig) -> wt1::Result<BuiltPoint> {
    let spec = PointSpec {
        chi: cfg.chi.clone(),
        p: cfg.p,
        prec: cfg.prec,
        embed_index: cfg.embed_index,
        units: cfg.load_units()?,
    };
    acceptance::build_point(&spec)
}

fn cmd_family(cfg: &RunConfig, what: &FamilyCmd) -> wt1::Result<(Value, Outcome)> {
    let mut report = base_report(cfg, "family");
    match what {
        FamilyCmd::Eisenstein { kind } => {
            let emb = embedding(cfg)?;
            let kind = parse_kind(kind)?;
            let fam = qexp::lambda_eisenstein(&emb, kind, cfg.nmax, cfg.mx)?;
            let coeffs: Vec<Value> = (1..=cfg.nmax)
                .map(|n| series_entry(fam.coeff(n).unwrap()))
                .collect();
            report["expansion"] = qexp_json(&coeffs, series_entry(fam.a0()));
        }
        FamilyCmd::Cuspidal => {
            let bp = build_point_from_cfg(cfg)?;
            let fam = qexp::cuspidal_family(&bp.emb, &bp.guards, cfg.nmax)?;
            let coeffs: Vec<Value> = (1..=cfg.nmax)
                .map(|n| series_entry(fam.coeff(n).unwrap()))
                .collect();
            report["expansion"] = qexp_json(&coeffs, series_entry(fam.a0()));
            report["l_invariant"] = padic_entry(&bp.guards.l_phi);
        }
    }
    Ok((report, Outcome::Pass))
}

fn checks_outcome(sets: &[&CheckSet]) -> Outcome {
    if sets.iter().any(|s| !s.all_pass()) {
        Outcome::IdentityFailure
    } else if sets.iter().any(|s| s.any_insufficient()) {
        Outcome::InsufficientPrecision
    } else {
        Outcome::Pass
    }
}

fn cmd_overconvergent(cfg: &RunConfig, check: &str) -> wt1::Result<(Value, Outcome)> {
    let bp = build_point_from_cfg(cfg)?;
    let basis = overconv::build_basis(&bp.emb, &bp.guards, cfg.nmax)?;
    let mut report = base_report(cfg, "overconvergent");
    let preview = cfg.nmax.min(30);
    for (tag, form) in [
        ("f", &basis.f),
        ("fd_phi_1", &basis.dag_chi_one),
        ("fd_1_phi", &basis.dag_one_chi),
    ] {
        let coeffs: Vec<Value> =
            (1..=preview).map(|n| padic_entry(form.coeff(n).unwrap())).collect();
        report[tag] = qexp_json(&coeffs, padic_entry(form.a0()));
    }

    let threshold = tolerances::IDENTITY_DIGITS;
    let mut sets = Vec::new();
    if check == "all" || check == "eigenspace" {
        sets.push(overconv::eigenspace_checks(&bp.emb, &basis, tolerances::UP_RANGE, threshold)?);
    }
    if check == "all" || check == "decomposition" {
        sets.push(overconv::classical_decomposition(&bp.emb, &basis, threshold)?);
        sets.push(overconv::cuspidal_line_check(&bp.emb, &basis, threshold)?);
    }
    if check == "all" || check == "dual" {
        sets.push(overconv::dual_construction_check(&bp.emb, &basis, threshold)?);
    }
    if sets.is_empty() {
        return Err(Error::InvalidInput(format!(
            "unknown check group \"{}\"",
            check
        )));
    }
    for s in &sets {
        eprintln!("{}", render::checkset_summary(s));
    }
    report["checks"] = serde_json::to_value(&sets).expect("serializable checks");
    let outcome = checks_outcome(&sets.iter().collect::<Vec<_>>());
    Ok((report, outcome))
}

fn cmd_hecke(cfg: &RunConfig) -> wt1::Result<(Value, Outcome)> {
    let bp = build_point_from_cfg(cfg)?;
    let mut report = base_report(cfg, "hecke-structure");
    let mut fibers = Vec::new();
    for mx in tolerances::STRUCTURE_MX_LO..=cfg.mx.max(tolerances::STRUCTURE_MX_LO) {
        let t = wt1::hecke_ring::build_t(cfg.p, cfg.prec, mx)?;
        let tp = wt1::hecke_ring::build_t_prime(&bp.guards, cfg.p, cfg.prec, mx)?;
        let to = wt1::hecke_ring::build_t_ord(cfg.p, cfg.prec, mx)?;
        fibers.push(json!({
            "mx": mx,
            "T": serde_json::to_value(t.fiber_and_socle()?).unwrap(),
            "T_prime": serde_json::to_value(tp.fiber_and_socle()?).unwrap(),
            "T_ord": serde_json::to_value(to.fiber_and_socle()?).unwrap(),
            "dimensions": { "T": t.dimension(), "T_prime": tp.dimension(), "T_ord": to.dimension() },
        }));
    }
    report["models"] = Value::Array(fibers);

    let zeta = lfunc::zeta_series(&bp.emb, cfg.mx.max(2))?;
    let model = wt1::hecke_ring::build_t_ord(cfg.p, cfg.prec, cfg.mx.max(2))?;
    let cong = wt1::hecke_ring::congruence_module(&model, &zeta, tolerances::IDENTITY_DIGITS)?;
    report["congruence_module"] = json!({
        "ideal_is_x": cong.ideal_is_x,
        "length": cong.length,
        "unit_at_zero": padic_entry(&cong.unit_at_zero),
        "checks": serde_json::to_value(&cong.checks).unwrap(),
    });
    let outcome = checks_outcome(&[&cong.checks]);
    Ok((report, outcome))
}

fn cmd_verify(cfg: &RunConfig, what: &VerifyCmd) -> wt1::Result<(Value, Outcome)> {
    let bp = build_point_from_cfg(cfg)?;
    let mut report = base_report(cfg, "verify");
    match what {
        VerifyCmd::Gross => {
            let rep = acceptance::criterion_gross(&bp)?;
            eprintln!("{}", rep.summary_line());
            let gross = overconv::gross_check(&bp.emb, &bp.guards, cfg.jet)?;
            report["lhs"] = padic_entry(&gross.lhs);
            report["rhs"] = padic_entry(&gross.rhs);
            let outcome = criterion_outcome(&[&rep]);
            report["criteria"] = criteria_json(&[rep]);
            Ok((report, outcome))
        }
        VerifyCmd::Relation { lmax } => {
            let f1 = qexp::lambda_eisenstein(&bp.emb, EisKind::OneChi, *lmax as usize, 2)?;
            let f2 = qexp::lambda_eisenstein(&bp.emb, EisKind::ChiOne, *lmax as usize, 2)?;
            let cusp = qexp::cuspidal_family(&bp.emb, &bp.guards, *lmax as usize)?;
            let rel = qexp::verify_linear_relation(
                &bp.emb,
                &bp.guards,
                &f1,
                &f2,
                &cusp,
                *lmax,
                tolerances::IDENTITY_DIGITS,
            )?;
            eprintln!("{}", render::checkset_summary(&rel.checks));
            let outcome = checks_outcome(&[&rel.checks]);
            report["checks"] = serde_json::to_value(&rel.checks).unwrap();
            Ok((report, outcome))
        }
        VerifyCmd::FerreroGreenberg => {
            let rep = acceptance::criterion_ferrero_greenberg(&bp, cfg.mx)?;
            eprintln!("{}", rep.summary_line());
            let outcome = criterion_outcome(&[&rep]);
            report["criteria"] = criteria_json(&[rep]);
            Ok((report, outcome))
        }
        VerifyCmd::All => {
            let criteria = acceptance::run_point_suite(&bp, cfg.mx)?;
            let stability = acceptance::criterion_stability(&PointSpec {
                chi: cfg.chi.clone(),
                p: cfg.p,
                prec: cfg.prec,
                embed_index: cfg.embed_index,
                units: cfg.load_units()?,
            })?;
            let mut all = criteria;
            all.push(stability);
            for c in &all {
                eprintln!("{}", c.summary_line());
            }
            let outcome = criterion_outcome(&all.iter().collect::<Vec<_>>());
            report["criteria"] = criteria_json(&all);
            Ok((report, outcome))
        }
    }
}

fn criterion_outcome(reps: &[&acceptance::CriterionReport]) -> Outcome {
    if reps.iter().any(|r| !r.pass && !r.insufficient_precision) {
        Outcome::IdentityFailure
    } else if reps.iter().any(|r| !r.pass) {
        Outcome::InsufficientPrecision
    } else {
        Outcome::Pass
    }
}

fn criteria_json(reps: &[acceptance::CriterionReport]) -> Value {
    serde_json::to_value(reps).expect("serializable criteria")
}
