//! The verification suite: every headline identity as a numbered criterion
//! with a pinned digit threshold, runnable at any supported point and, for
//! the canonical test points, exposed to the `acceptance` test target and
//! the `verify all` CLI command.

use num_bigint::BigInt;

use crate::chars::{CharEmbedding, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lfunc;
use crate::linv::{self, GuardedLInvariants, PUnitData};
use crate::overconv;
use crate::padic::{Agreement, Padic};
use crate::qexp::{self, EisKind};
use crate::report::{CheckSet, IdentityCheck};
use crate::series::binomial_power;
use crate::Rat;

/// Thresholds and ranges for the verification suite. Digit counts are
/// p-adic: "n digits" means agreement modulo p^n.
pub mod tolerances {
    /// Default working precision in significant p-adic digits.
    pub const DEFAULT_PRECISION: u32 = 30;
    /// Worst-case digits a full pipeline may lose relative to the working
    /// precision (division by F, Bernoulli denominators, series tails).
    pub const GUARD: i64 = 5;
    /// The derivative formula at the trivial zero: both pipelines agree to
    /// precision minus guard.
    pub const GROSS_DIGITS: i64 = 25;
    /// L_p(phi omega_p, 0) vanishes to precision minus guard.
    pub const TRIVIAL_ZERO_DIGITS: i64 = 25;
    /// zeta_phi(0) vanishes to this many digits and the valuation of
    /// zeta_phi'(0) is certified strictly below it.
    pub const SIMPLE_ZERO_DIGITS: i64 = 25;
    /// Interpolation, family, eigenspace and structural identities.
    pub const IDENTITY_DIGITS: i64 = 20;
    /// Randomized property suites.
    pub const PROPERTY_DIGITS: i64 = 20;
    /// Primes checked in the trace linear relation.
    pub const RELATION_PRIME_BOUND: u64 = 200;
    /// Coefficient range of the eigenspace decomposition checks.
    pub const DECOMPOSITION_RANGE: usize = 1000;
    /// Coefficient range of the U_p identities.
    pub const UP_RANGE: usize = 200;
    /// Truncation orders at which the local-ring models are built.
    pub const STRUCTURE_MX_LO: usize = 3;
    pub const STRUCTURE_MX_HI: usize = 8;
    /// Precision of the stability re-run.
    pub const STABILITY_PRECISION: u32 = 40;
}

/// The canonical verification points (discriminant, prime).
pub const CANONICAL_POINTS: [(i64, u64); 3] = [(-4, 5), (-3, 7), (-3, 13)];

/// A fully specified verification point.
#[derive(Clone)]
pub struct PointSpec {
    pub chi: DirichletCharacter,
    pub p: u64,
    pub prec: u32,
    pub embed_index: u64,
    pub units: Vec<PUnitData>,
}

impl PointSpec {
    pub fn quadratic(d: i64, p: u64, prec: u32) -> Result<Self> {
        Ok(PointSpec {
            chi: DirichletCharacter::kronecker(d)?,
            p,
            prec,
            embed_index: 1,
            units: Vec::new(),
        })
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        let mut s = self.clone();
        s.prec = prec;
        s
    }

    pub fn label(&self) -> String {
        match self.chi.discriminant() {
            Some(d) => format!("(kronecker:{}, p={})", d, self.p),
            None => format!("(mod:{}, p={})", self.chi.modulus(), self.p),
        }
    }
}

/// Everything the criteria need at one point.
pub struct BuiltPoint {
    pub spec: PointSpec,
    pub emb: CharEmbedding,
    pub guards: GuardedLInvariants,
}

pub fn build_point(spec: &PointSpec) -> Result<BuiltPoint> {
    let emb = CharEmbedding::new(&spec.chi, spec.p, spec.prec, spec.embed_index)?;
    if !spec.chi.is_odd() {
        return Err(Error::Precondition("the working character must be odd".into()));
    }
    if !emb.is_irregular() {
        return Err(Error::Precondition(format!(
            "chi({}) != 1 for {}: this point is regular; the verification suite requires chi(p) = 1",
            spec.p,
            spec.label()
        )));
    }
    let (l_phi, l_inv) = linv::l_invariant_pair(&emb, &spec.units)?;
    let guards = linv::nonvanishing_guard(&l_phi, &l_inv)?;
    Ok(BuiltPoint {
        spec: spec.clone(),
        emb,
        guards,
    })
}

/// One numbered criterion with its verdict.
#[derive(Debug, serde::Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub sets: Vec<CheckSet>,
    pub pass: bool,
    pub insufficient_precision: bool,
}

impl CriterionReport {
    fn from_sets(id: u32, title: impl Into<String>, sets: Vec<CheckSet>) -> Self {
        let pass = sets.iter().all(|s| s.all_pass());
        let insufficient = sets.iter().any(|s| s.any_insufficient());
        CriterionReport {
            id,
            title: title.into(),
            sets,
            pass,
            insufficient_precision: insufficient,
        }
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.pass {
            "PASS"
        } else if self.insufficient_precision {
            "INSUFFICIENT PRECISION"
        } else {
            "FAIL"
        };
        let min = self
            .sets
            .iter()
            .filter_map(|s| s.min_agreement())
            .min()
            .map(|d| format!(", min agreement {} digits", d))
            .unwrap_or_default();
        format!("criterion {:2} [{}]: {}{}", self.id, self.title, verdict, min)
    }
}

/// 1. The derivative formula L_p'(phi omega_p, 0) = -L(phi) L(phi, 0),
/// both sides from independent pipelines.
pub fn criterion_gross(bp: &BuiltPoint) -> Result<CriterionReport> {
    let rep = overconv::gross_check(&bp.emb, &bp.guards, 3)?;
    let mut set = CheckSet::new(bp.spec.label());
    set.push(IdentityCheck::from_agreement(
        "L_p'(0) = -L(phi) L(phi,0)",
        rep.agreement,
        tolerances::GROSS_DIGITS,
    ));
    Ok(CriterionReport::from_sets(
        1,
        "derivative formula at the trivial zero",
        vec![set],
    ))
}

/// 2. The trivial zero: L_p(phi omega_p, 0) vanishes.
pub fn criterion_trivial_zero(bp: &BuiltPoint) -> Result<CriterionReport> {
    let jet = lfunc::lp_jet(&bp.emb, 3)?;
    let zero = Padic::zero_exact(bp.spec.p, bp.spec.prec);
    let mut set = CheckSet::new(bp.spec.label());
    set.push(IdentityCheck::from_agreement(
        "L_p(phi omega_p, 0) = 0",
        jet.value().agreement(&zero),
        tolerances::TRIVIAL_ZERO_DIGITS,
    ));
    Ok(CriterionReport::from_sets(2, "trivial zero at s = 0", vec![set]))
}

/// 3. The simple zero of zeta_phi: constant term vanishes, linear term
/// certified nonzero with valuation strictly below the threshold.
pub fn criterion_ferrero_greenberg(bp: &BuiltPoint, mx: usize) -> Result<CriterionReport> {
    let rep = lfunc::ferrero_greenberg_check(&bp.emb, mx)?;
    let mut set = CheckSet::new(bp.spec.label());
    set.push(IdentityCheck::from_agreement(
        "zeta_phi(0) = 0",
        Agreement::ZeroTo(rep.zero_to),
        tolerances::SIMPLE_ZERO_DIGITS,
    ));
    let lead_val = rep.leading_coeff.valuation();
    set.push(IdentityCheck::boolean(
        format!(
            "zeta_phi'(0) certified nonzero, valuation {:?} < {}",
            lead_val,
            tolerances::SIMPLE_ZERO_DIGITS
        ),
        rep.leading_coeff.is_certainly_nonzero()
            && lead_val.map_or(false, |v| v < tolerances::SIMPLE_ZERO_DIGITS),
    ));
    set.push(IdentityCheck::boolean("ord_X = 1", rep.ord_x == 1));
    Ok(CriterionReport::from_sets(
        3,
        "simple zero of the Iwasawa series",
        vec![set],
    ))
}

/// 4. Interpolation oracle: the analytic value at s = 1-k matches the
/// Euler-factor-times-Bernoulli formula at three nodes.
pub fn criterion_interpolation(bp: &BuiltPoint) -> Result<CriterionReport> {
    let p = bp.spec.p;
    let mut set = CheckSet::new(bp.spec.label());
    for m in 1..=3u64 {
        let k = 1 + m * (p - 1);
        let analytic = lfunc::lp_value_at_one_minus_k(&bp.emb, k)?;
        let euler = Rat::from(BigInt::from(1) - BigInt::from(p).pow(k as u32 - 1));
        let target = if bp.spec.chi.is_quadratic() {
            let l = crate::chars::l_value_nonpositive_rat(&bp.spec.chi, k)?;
            let t = euler * l;
            Padic::from_ratio(t.numer(), t.denom(), p, bp.spec.prec)?
        } else {
            let l = crate::chars::l_value_nonpositive_padic(&bp.emb, k)?;
            Padic::from_ratio(euler.numer(), euler.denom(), p, bp.spec.prec)? * l
        };
        set.push(IdentityCheck::from_agreement(
            format!("L_p(1-{}) = (1 - p^{})(−B/k)", k, k - 1),
            analytic.agreement(&target),
            tolerances::IDENTITY_DIGITS,
        ));
    }
    Ok(CriterionReport::from_sets(4, "interpolation oracle", vec![set]))
}

/// 5. The trace linear relation mod X^2 at every prime up to the bound.
pub fn criterion_linear_relation(bp: &BuiltPoint) -> Result<CriterionReport> {
    let n_max = tolerances::RELATION_PRIME_BOUND as usize;
    let f1 = qexp::lambda_eisenstein(&bp.emb, EisKind::OneChi, n_max, 2)?;
    let f2 = qexp::lambda_eisenstein(&bp.emb, EisKind::ChiOne, n_max, 2)?;
    let cusp = qexp::cuspidal_family(&bp.emb, &bp.guards, n_max)?;
    let rep = qexp::verify_linear_relation(
        &bp.emb,
        &bp.guards,
        &f1,
        &f2,
        &cusp,
        tolerances::RELATION_PRIME_BOUND,
        tolerances::IDENTITY_DIGITS,
    )?;
    Ok(CriterionReport::from_sets(
        5,
        "trace linear relation mod X^2",
        vec![rep.checks],
    ))
}

/// 6. The generalized-eigenspace identities and the decomposition of the
/// classical Eisenstein series, constant terms included.
pub fn criterion_theorem_d(bp: &BuiltPoint) -> Result<CriterionReport> {
    let p = bp.spec.p as usize;
    let n_max = tolerances::DECOMPOSITION_RANGE.max(tolerances::UP_RANGE * p * p);
    let basis = overconv::build_basis(&bp.emb, &bp.guards, n_max)?;
    let eig = overconv::eigenspace_checks(
        &bp.emb,
        &basis,
        tolerances::UP_RANGE,
        tolerances::IDENTITY_DIGITS,
    )?;
    // the decomposition is checked on n <= 1000 regardless of the larger
    // table needed by the U_p range
    let basis_dec = overconv::build_basis(&bp.emb, &bp.guards, tolerances::DECOMPOSITION_RANGE)?;
    let dec = overconv::classical_decomposition(&bp.emb, &basis_dec, tolerances::IDENTITY_DIGITS)?;
    let line = overconv::cuspidal_line_check(&bp.emb, &basis_dec, tolerances::IDENTITY_DIGITS)?;
    Ok(CriterionReport::from_sets(
        6,
        "generalized eigenspace identities",
        vec![eig, dec, line],
    ))
}

/// 7. Dual construction oracle: closed formulas vs scaled X-derivatives of
/// (Eisenstein family - cuspidal family), coefficientwise to n = 1000.
pub fn criterion_dual_construction(bp: &BuiltPoint) -> Result<CriterionReport> {
    let basis = overconv::build_basis(&bp.emb, &bp.guards, tolerances::DECOMPOSITION_RANGE)?;
    let set = overconv::dual_construction_check(&bp.emb, &basis, tolerances::IDENTITY_DIGITS)?;
    Ok(CriterionReport::from_sets(7, "dual construction oracle", vec![set]))
}

/// 8. Structure models: fiber dimension 3 for the full algebra, socle
/// dimensions (2, 1, 1), stability over the truncation range, the cubic for
/// Y, and the congruence module.
pub fn criterion_structure(bp: &BuiltPoint) -> Result<CriterionReport> {
    let (p, prec) = (bp.spec.p, bp.spec.prec);
    let mut dims = CheckSet::new(format!("{} fiber/socle", bp.spec.label()));
    for mx in tolerances::STRUCTURE_MX_LO..=tolerances::STRUCTURE_MX_HI {
        let t = crate::hecke_ring::build_t(p, prec, mx)?.fiber_and_socle()?;
        dims.push(IdentityCheck::boolean(
            format!("T at Mx={}: fiber 3, socle 2, not Gorenstein", mx),
            t.fiber_dim == 3 && t.socle_dim == 2 && !t.gorenstein,
        ));
        let tp = crate::hecke_ring::build_t_prime(&bp.guards, p, prec, mx)?.fiber_and_socle()?;
        dims.push(IdentityCheck::boolean(
            format!("T' at Mx={}: fiber 3, socle 1, Gorenstein", mx),
            tp.fiber_dim == 3 && tp.socle_dim == 1 && tp.gorenstein,
        ));
        let to = crate::hecke_ring::build_t_ord(p, prec, mx)?.fiber_and_socle()?;
        dims.push(IdentityCheck::boolean(
            format!("T_ord at Mx={}: fiber 2, socle 1, Gorenstein", mx),
            to.fiber_dim == 2 && to.socle_dim == 1 && to.gorenstein,
        ));
    }

    // Y satisfies its cubic exactly in the model
    let mx = 5usize;
    let mut cubic = CheckSet::new("cubic relation for Y");
    let y = crate::hecke_ring::y_element(&bp.guards, p, prec, mx);
    let x = crate::hecke_ring::ProductElement::diagonal_x(p, prec, 3, mx);
    let prod = y
        .mul(&y.add(&x.scale(&bp.guards.l_phi)))
        .mul(&y.sub(&x.scale(&bp.guards.l_phi_inv)));
    let mut worst = Agreement::Exact;
    for i in 0..3 {
        for k in 0..mx {
            let ag = prod
                .comp(i)
                .coeff(k)
                .agreement(&Padic::zero_exact(p, prec));
            worst = match (worst, ag) {
                (Agreement::Exact, a) => a,
                (w, Agreement::Exact) => w,
                (Agreement::ZeroTo(u), Agreement::ZeroTo(v)) => Agreement::ZeroTo(u.min(v)),
                (Agreement::NonzeroAt(u), _) | (_, Agreement::NonzeroAt(u)) => {
                    Agreement::NonzeroAt(u)
                }
            };
        }
    }
    cubic.push(IdentityCheck::from_agreement(
        "Y (Y + L X)(Y - L' X) = 0",
        worst,
        tolerances::IDENTITY_DIGITS,
    ));

    // congruence module against the Iwasawa series
    let zeta = lfunc::zeta_series(&bp.emb, tolerances::STRUCTURE_MX_HI)?;
    let model = crate::hecke_ring::build_t_ord(p, prec, tolerances::STRUCTURE_MX_HI)?;
    let cong = crate::hecke_ring::congruence_module(&model, &zeta, tolerances::IDENTITY_DIGITS)?;
    let mut cong_set = cong.checks;
    cong_set.push(IdentityCheck::boolean(
        "length Lambda/J_eis = length Lambda/(zeta) = 1",
        cong.ideal_is_x && cong.length == 1,
    ));

    Ok(CriterionReport::from_sets(
        8,
        "local-ring structure models",
        vec![dims, cubic, cong_set],
    ))
}

/// 9. Randomized property suites (seeded, hence reproducible).
pub fn criterion_properties(bp: &BuiltPoint) -> Result<CriterionReport> {
    use rand::{Rng, SeedableRng};
    let p = bp.spec.p;
    let prec = bp.spec.prec;
    let t = tolerances::PROPERTY_DIGITS;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x77A11CE5);

    let mut log_set = CheckSet::new("Iwasawa log multiplicativity, 1000 random pairs");
    let mut worst = Agreement::Exact;
    let mut failures = 0usize;
    for _ in 0..1000 {
        // random elements of Q_p^x: unit part times a power of p
        let mut draw = || -> Padic {
            let u: i64 = rng.gen_range(1..1_000_000);
            let u = if u % p as i64 == 0 { u + 1 } else { u };
            let v: i64 = rng.gen_range(-2..3);
            let unit = Padic::from_i64(u, p, prec);
            let pe = Padic::from_i64(p as i64, p, prec);
            match v {
                v if v >= 0 => unit * pe.pow_u64(v as u64),
                v => unit.div(&pe.pow_u64((-v) as u64)).unwrap(),
            }
        };
        let x = draw();
        let y = draw();
        let lhs = (x.clone() * y.clone()).iwasawa_log()?;
        let rhs = x.iwasawa_log()? + y.iwasawa_log()?;
        let ag = lhs.agreement(&rhs);
        if !ag.at_least(t) {
            failures += 1;
        }
        worst = min_agreement(worst, ag);
    }
    log_set.push(IdentityCheck::from_agreement(
        format!("log(xy) = log(x) + log(y), {} failures", failures),
        worst,
        t,
    ));

    let mut teich_set = CheckSet::new("Teichmuller defining properties");
    let mut worst_pow = Agreement::Exact;
    let mut cong_ok = true;
    for _ in 0..300 {
        let a: i64 = rng.gen_range(1..1_000_000);
        let a = if a % p as i64 == 0 { a + 1 } else { a };
        let x = Padic::from_i64(a, p, prec);
        let w = x.teichmuller()?;
        worst_pow = min_agreement(
            worst_pow,
            w.pow_u64(p - 1).agreement(&Padic::one(p, prec)),
        );
        cong_ok &= w.agrees_mod(&x, 1);
    }
    teich_set.push(IdentityCheck::from_agreement(
        "omega(u)^(p-1) = 1",
        worst_pow,
        t,
    ));
    teich_set.push(IdentityCheck::boolean("omega(u) = u mod p", cong_ok));

    let mut binom_set = CheckSet::new("binomial power homomorphism");
    let mut worst = Agreement::Exact;
    for _ in 0..60 {
        let a = Padic::from_i64(rng.gen_range(-500..500), p, prec);
        let b = Padic::from_i64(rng.gen_range(-500..500), p, prec);
        let lhs = binomial_power(&(a.clone() + b.clone()), 5);
        let rhs = binomial_power(&a, 5) * binomial_power(&b, 5);
        worst = min_agreement(worst, lhs.agreement(&rhs));
    }
    binom_set.push(IdentityCheck::from_agreement(
        "(1+X)^(a+b) = (1+X)^a (1+X)^b mod X^5",
        worst,
        t,
    ));

    let mut hecke_set = CheckSet::new("Hecke commutation and multiplicativity");
    let e1 = qexp::eisenstein_padic(&bp.emb, 1, EisKind::OneChi, 450)?;
    let n_mod = bp.spec.chi.modulus();
    let good: Vec<u64> = qexp::primes_up_to(20)
        .into_iter()
        .filter(|&l| l != p && n_mod % l != 0)
        .take(3)
        .collect();
    let mut worst = Agreement::Exact;
    for i in 0..good.len() {
        for j in i + 1..good.len() {
            let (l1, l2) = (good[i], good[j]);
            let a = qexp::hecke_t(
                &qexp::hecke_t(&e1, l1, &bp.emb.eval(l1 as i64))?,
                l2,
                &bp.emb.eval(l2 as i64),
            )?;
            let b = qexp::hecke_t(
                &qexp::hecke_t(&e1, l2, &bp.emb.eval(l2 as i64))?,
                l1,
                &bp.emb.eval(l1 as i64),
            )?;
            for n in 0..=a.n_max().min(b.n_max()) {
                worst = min_agreement(worst, a.coeff(n)?.agreement(b.coeff(n)?));
            }
        }
    }
    hecke_set.push(IdentityCheck::from_agreement(
        "T_l T_l' = T_l' T_l",
        worst,
        t,
    ));

    let f = qexp::irregular_stabilization(&bp.emb, 1000)?;
    let mut worst = Agreement::Exact;
    let mut tested = 0;
    while tested < 300 {
        let m: usize = rng.gen_range(2..32);
        let n: usize = rng.gen_range(2..32);
        if num_integer::gcd(m, n) != 1 || m * n > 1000 {
            continue;
        }
        let lhs = f.coeff(m * n)?.clone();
        let rhs = f.coeff(m)?.clone() * f.coeff(n)?.clone();
        worst = min_agreement(worst, lhs.agreement(&rhs));
        tested += 1;
    }
    hecke_set.push(IdentityCheck::from_agreement(
        "a_mn(f) = a_m(f) a_n(f) for (m,n) = 1, 300 random pairs",
        worst,
        t,
    ));

    Ok(CriterionReport::from_sets(
        9,
        "property suites",
        vec![log_set, teich_set, binom_set, hecke_set],
    ))
}

fn min_agreement(a: Agreement, b: Agreement) -> Agreement {
    match (a, b) {
        (Agreement::Exact, x) | (x, Agreement::Exact) => x,
        (Agreement::NonzeroAt(u), Agreement::NonzeroAt(v)) => Agreement::NonzeroAt(u.min(v)),
        (Agreement::NonzeroAt(u), Agreement::ZeroTo(v))
        | (Agreement::ZeroTo(v), Agreement::NonzeroAt(u)) => {
            if u <= v {
                Agreement::NonzeroAt(u)
            } else {
                Agreement::ZeroTo(v)
            }
        }
        (Agreement::ZeroTo(u), Agreement::ZeroTo(v)) => Agreement::ZeroTo(u.min(v)),
    }
}

/// Scalar fingerprints of the full pipeline at one precision, used by the
/// stability criterion.
fn stability_outputs(bp: &BuiltPoint) -> Result<Vec<(String, Padic)>> {
    let mut out = Vec::new();
    let jet = lfunc::lp_jet(&bp.emb, 3)?;
    out.push(("L_p(0)".to_string(), jet.value().clone()));
    out.push(("L_p'(0)".to_string(), jet.derivative().clone()));
    let zeta = lfunc::zeta_series(&bp.emb, 6)?;
    for k in 0..6 {
        out.push((format!("zeta[{}]", k), zeta.series.coeff(k).clone()));
    }
    out.push(("L(phi)".to_string(), bp.guards.l_phi.clone()));
    let gross = overconv::gross_check(&bp.emb, &bp.guards, 3)?;
    out.push(("gross lhs".to_string(), gross.lhs));
    out.push(("gross rhs".to_string(), gross.rhs));
    for m in 1..=2u64 {
        let k = 1 + m * (bp.spec.p - 1);
        out.push((
            format!("L_p(1-{})", k),
            lfunc::lp_value_at_one_minus_k(&bp.emb, k)?,
        ));
    }
    let n_max = 1000usize;
    let basis = overconv::build_basis(&bp.emb, &bp.guards, n_max)?;
    for n in [2usize, 3, bp.spec.p as usize, 97, 499, 1000] {
        out.push((
            format!("a_{}(fd(1,phi))", n),
            basis.dag_one_chi.coeff(n)?.clone(),
        ));
        out.push((
            format!("a_{}(fd(phi,1))", n),
            basis.dag_chi_one.coeff(n)?.clone(),
        ));
    }
    let cusp = qexp::cuspidal_family(&bp.emb, &bp.guards, 200)?;
    for l in [2usize, 3, 11, 197] {
        if l as u64 == bp.spec.p || bp.spec.chi.modulus() % l as u64 == 0 {
            continue;
        }
        out.push((
            format!("a_{}'(F)", l),
            cusp.coeff(l)?.coeff(1).clone(),
        ));
    }
    let model = crate::hecke_ring::build_t_ord(bp.spec.p, bp.spec.prec, 5)?;
    let zeta5 = lfunc::zeta_series(&bp.emb, 5)?;
    let cong = crate::hecke_ring::congruence_module(&model, &zeta5, tolerances::IDENTITY_DIGITS)?;
    out.push(("congruence u(0)".to_string(), cong.unit_at_zero));
    Ok(out)
}

/// 10. Precision stability: the pipeline outputs at the default and raised
/// precisions agree on all shared digits (and the structural verdicts
/// coincide).
pub fn criterion_stability(spec: &PointSpec) -> Result<CriterionReport> {
    let lo = build_point(spec)?;
    let hi = build_point(&spec.with_precision(tolerances::STABILITY_PRECISION))?;
    let a = stability_outputs(&lo)?;
    let b = stability_outputs(&hi)?;
    let mut set = CheckSet::new(format!(
        "{} at precision {} vs {}",
        spec.label(),
        spec.prec,
        tolerances::STABILITY_PRECISION
    ));
    for ((name_a, va), (name_b, vb)) in a.iter().zip(b.iter()) {
        assert_eq!(name_a, name_b);
        let shared = va
            .abs_precision()
            .unwrap_or(i64::MAX)
            .min(vb.abs_precision().unwrap_or(i64::MAX));
        set.push(IdentityCheck::from_agreement(
            format!("{} (shared {} digits)", name_a, shared),
            va.agreement(vb),
            shared,
        ));
    }
    // structural verdicts must be identical
    for (mx, bp) in [(3usize, &lo), (3, &hi)] {
        let t = crate::hecke_ring::build_t(bp.spec.p, bp.spec.prec, mx)?.fiber_and_socle()?;
        set.push(IdentityCheck::boolean(
            format!("socle(T) = 2 at precision {}", bp.spec.prec),
            t.socle_dim == 2,
        ));
    }
    Ok(CriterionReport::from_sets(10, "precision stability", vec![set]))
}

/// Run criteria 1-9 at one point (10 needs a rebuild and is separate).
pub fn run_point_suite(bp: &BuiltPoint, mx: usize) -> Result<Vec<CriterionReport>> {
    Ok(vec![
        criterion_gross(bp)?,
        criterion_trivial_zero(bp)?,
        criterion_ferrero_greenberg(bp, mx)?,
        criterion_interpolation(bp)?,
        criterion_linear_relation(bp)?,
        criterion_theorem_d(bp)?,
        criterion_dual_construction(bp)?,
        criterion_structure(bp)?,
        criterion_properties(bp)?,
    ])
}
