//! The explicit weight-one overconvergent forms spanning the generalized
//! eigenspace at the irregular Eisenstein point, their Hecke structure, the
//! decomposition of the classical Eisenstein series in that basis, and the
//! derivative formula L_p'(phi omega_p, 0) = -L(phi) L(phi, 0) checked
//! against two independent pipelines.
//!
//! The closed coefficient formulas are
//!
//!   a_n(fd_(phi,1)) = sum_(d|n, p∤d) phi(d) (ord_p(n) L(phi)    - log_p(d^2/n)),
//!   a_n(fd_(1,phi)) = sum_(d|n, p∤d) phi(d) (ord_p(n) L(phi^-1) + log_p(d^2/n)),
//!
//! with a_0(fd_(phi,1)) = 0 and a_0(fd_(1,phi)) = (L(phi)+L(phi^-1))
//! L(phi,0)/2; log_p is the Iwasawa branch, so log_p(d^2/n) = 2 log_p(d) -
//! log_p(n) ignores p-parts, matching the ord_p bookkeeping. The same forms
//! are re-derived as scaled X-derivatives of (Eisenstein family - cuspidal
//! family); the two constructions agreeing coefficientwise is this module's
//! internal oracle.

use crate::chars::CharEmbedding;
use crate::error::{Error, Result};
use crate::linv::GuardedLInvariants;
use crate::padic::{Agreement, IwasawaLogTable, Padic};
use crate::qexp::{
    cuspidal_family, eisenstein_padic, hecke_t, hecke_u, irregular_stabilization,
    lambda_eisenstein, EisKind, QExpansion,
};
use crate::report::{CheckSet, IdentityCheck};

/// Which of the two non-classical forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DaggerKind {
    /// fd_(phi,1): vanishing constant term, a_p = L(phi).
    ChiOne,
    /// fd_(1,phi): constant term (L(phi)+L(phi^-1)) L(phi,0)/2, a_p = L(phi^-1).
    OneChi,
}

/// The closed-formula construction of the overconvergent form.
pub fn f_dagger(
    emb: &CharEmbedding,
    kind: DaggerKind,
    n_max: usize,
    guards: &GuardedLInvariants,
    l_value_at_zero: &Padic,
) -> Result<QExpansion<Padic>> {
    let p = emb.prime();
    let prec = emb.precision();
    let logs = IwasawaLogTable::new(p, prec, n_max.max(2))?;
    let (l_coef, log_sign) = match kind {
        DaggerKind::ChiOne => (guards.l_phi.clone(), -1i64),
        DaggerKind::OneChi => (guards.l_phi_inv.clone(), 1i64),
    };
    let mut a = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut ord = 0i64;
        let mut m = n;
        while m % p as usize == 0 {
            m /= p as usize;
            ord += 1;
        }
        let ord_term = if ord == 0 {
            Padic::zero_exact(p, prec)
        } else {
            l_coef.clone() * Padic::from_i64(ord, p, prec)
        };
        let mut acc = Padic::zero_exact(p, prec);
        for d in 1..=n {
            if n % d != 0 || d % p as usize == 0 {
                continue;
            }
            let chi_d = emb.eval(d as i64);
            if chi_d.is_zero_at_precision() {
                continue;
            }
            // log_p(d^2/n) = 2 log_p(d) - log_p(n)
            let log_part = logs.log(d).clone() + logs.log(d).clone() - logs.log(n).clone();
            let log_signed = if log_sign < 0 { -log_part } else { log_part };
            acc = acc + chi_d * (ord_term.clone() + log_signed);
        }
        a.push(acc);
    }
    let a0 = match kind {
        DaggerKind::ChiOne => Padic::zero_exact(p, prec),
        DaggerKind::OneChi => (guards.sum.clone() * l_value_at_zero.clone()).div_int(2),
    };
    let label = match kind {
        DaggerKind::ChiOne => "fd(phi,1)",
        DaggerKind::OneChi => "fd(1,phi)",
    };
    Ok(QExpansion::new(label, 1, a0, a, false))
}

/// The classical L-value L(phi, 0) in Z_p: exact Bernoulli arithmetic for
/// quadratic characters, the embedded Bernoulli sum otherwise.
pub fn l_value_at_zero(emb: &CharEmbedding) -> Result<Padic> {
    if emb.character().is_quadratic() {
        let exact = crate::chars::l_value_nonpositive_rat(emb.character(), 1)?;
        return Padic::from_ratio(exact.numer(), exact.denom(), emb.prime(), emb.precision());
    }
    crate::chars::l_value_nonpositive_padic(emb, 1)
}

/// The three q-expansions spanning the generalized eigenspace, plus the
/// constants entering the identities.
pub struct EigenspaceBasis {
    pub f: QExpansion<Padic>,
    pub dag_chi_one: QExpansion<Padic>,
    pub dag_one_chi: QExpansion<Padic>,
    pub guards: GuardedLInvariants,
    pub l_value: Padic,
}

pub fn build_basis(
    emb: &CharEmbedding,
    guards: &GuardedLInvariants,
    n_max: usize,
) -> Result<EigenspaceBasis> {
    let l_value = l_value_at_zero(emb)?;
    Ok(EigenspaceBasis {
        f: irregular_stabilization(emb, n_max)?,
        dag_chi_one: f_dagger(emb, DaggerKind::ChiOne, n_max, guards, &l_value)?,
        dag_one_chi: f_dagger(emb, DaggerKind::OneChi, n_max, guards, &l_value)?,
        guards: guards.clone(),
        l_value,
    })
}

fn compare_range(
    set: &mut CheckSet,
    name: &str,
    lhs: &QExpansion<Padic>,
    rhs: &QExpansion<Padic>,
    up_to: usize,
    threshold: i64,
) -> Result<()> {
    let mut worst: Option<Agreement> = None;
    for n in 0..=up_to {
        let ag = lhs.coeff(n)?.agreement(rhs.coeff(n)?);
        worst = Some(match worst {
            None => ag,
            Some(w) => weaker(w, ag),
        });
    }
    set.push(IdentityCheck::from_agreement(
        format!("{} (n <= {})", name, up_to),
        worst.unwrap_or(Agreement::Exact),
        threshold,
    ));
    Ok(())
}

fn weaker(a: Agreement, b: Agreement) -> Agreement {
    // order by reported digits; a certified-nonzero difference dominates a
    // zero flag at the same level
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

/// The Hecke identities pinning the generalized eigenspace:
///   (a) (U_p - 1) fd_(phi,1) = L(phi) f and (U_p - 1) fd_(1,phi) = L(phi^-1) f,
///   (b) (U_p - 1)^2 kills both,
///   (c) (T_l - a_l(f)) fd = a_l(fd) f for primes l <= 50 coprime to Np,
///   (d) the twisted-derivation rule on coprime products and prime powers.
pub fn eigenspace_checks(
    emb: &CharEmbedding,
    basis: &EigenspaceBasis,
    up_max: usize,
    threshold: i64,
) -> Result<CheckSet> {
    let p = emb.prime();
    let n_mod = emb.character().modulus();
    let mut set = CheckSet::new("generalized eigenspace identities");
    let n_max = basis.f.n_max();
    let up_range = (n_max / p as usize).min(up_max);

    for (dag, l_coef, tag) in [
        (&basis.dag_chi_one, &basis.guards.l_phi, "fd(phi,1)"),
        (&basis.dag_one_chi, &basis.guards.l_phi_inv, "fd(1,phi)"),
    ] {
        let u = hecke_u(dag, p)?;
        let u_minus = u.sub(dag);
        let scaled_f = basis.f.scale(l_coef);
        compare_range(
            &mut set,
            &format!("(U_p - 1) {} = L * f", tag),
            &u_minus,
            &scaled_f,
            up_range,
            threshold,
        )?;

        let uu = hecke_u(&u_minus, p)?;
        let uu_minus = uu.sub(&u_minus);
        let zero = basis.f.scale(&Padic::zero_exact(p, emb.precision()));
        compare_range(
            &mut set,
            &format!("(U_p - 1)^2 {} = 0", tag),
            &uu_minus,
            &zero,
            (n_max / (p * p) as usize).min(up_max),
            threshold,
        )?;

        // (c): T_l eigen-defect is a multiple of f, with scalar a_l(fd)
        for ell in crate::qexp::primes_up_to(50) {
            if ell == p || n_mod % ell == 0 || (ell as usize) > n_max / 2 {
                continue;
            }
            let t = hecke_t(dag, ell, &emb.eval(ell as i64))?;
            let defect = t.sub(&dag.scale(basis.f.coeff(ell as usize)?));
            let scalar = dag.coeff(ell as usize)?.clone();
            compare_range(
                &mut set,
                &format!("(T_{} - a_{}(f)) {} = a_{}(fd) f", ell, ell, tag, ell),
                &defect,
                &basis.f.scale(&scalar),
                (n_max / ell as usize).min(up_max),
                threshold,
            )?;
        }

        // (d): derivation identity on coprime pairs and the prime-power
        // recursion
        let mut worst = Agreement::Exact;
        for m in 2..=40usize.min(n_max) {
            for n in 2..=(n_max / m).min(40) {
                if num_integer::gcd(m, n) != 1 {
                    continue;
                }
                let lhs = dag.coeff(m * n)?.clone();
                let rhs = basis.f.coeff(m)?.clone() * dag.coeff(n)?.clone()
                    + basis.f.coeff(n)?.clone() * dag.coeff(m)?.clone();
                worst = weaker(worst, lhs.agreement(&rhs));
            }
        }
        set.push(IdentityCheck::from_agreement(
            format!("derivation rule a_mn({}) on coprime pairs", tag),
            worst,
            threshold,
        ));

        let mut worst = Agreement::Exact;
        for ell in crate::qexp::primes_up_to(20) {
            if ell == p || n_mod % ell == 0 {
                continue;
            }
            let l = ell as usize;
            let mut r = 2usize;
            while l.pow(r as u32) <= n_max {
                let lr = l.pow(r as u32);
                let lhs = dag.coeff(lr)?.clone();
                let rhs = basis.f.coeff(l)?.clone() * dag.coeff(lr / l)?.clone()
                    + basis.f.coeff(lr / l)?.clone() * dag.coeff(l)?.clone()
                    - emb.eval(ell as i64) * dag.coeff(lr / l / l)?.clone();
                worst = weaker(worst, lhs.agreement(&rhs));
                r += 1;
            }
        }
        set.push(IdentityCheck::from_agreement(
            format!("prime-power recursion for {}", tag),
            worst,
            threshold,
        ));
    }
    Ok(set)
}

/// Decomposition of the classical Eisenstein series in the eigenspace basis:
/// E_1(1,phi) = f + (fd_(1,phi) + fd_(phi,1)) / (L(phi) + L(phi^-1)),
/// coefficientwise including the constant terms.
pub fn classical_decomposition(
    emb: &CharEmbedding,
    basis: &EigenspaceBasis,
    threshold: i64,
) -> Result<CheckSet> {
    let n_max = basis.f.n_max();
    let e1 = eisenstein_padic(emb, 1, EisKind::OneChi, n_max)?;
    let sum_inv = basis.guards.sum.invert()?;
    let combo = basis
        .f
        .add(&basis.dag_one_chi.add(&basis.dag_chi_one).scale(&sum_inv));
    let mut set = CheckSet::new("classical form in the eigenspace basis");
    compare_range(
        &mut set,
        "E_1(1,phi) = f + (fd(1,phi) + fd(phi,1)) / (L + L')",
        &e1,
        &combo,
        n_max,
        threshold,
    )?;
    Ok(set)
}

/// The dual-construction oracle: the closed formulas must agree with
/// fd = (L + L') log_p(1+p) / L(*) * d/dX (Eisenstein family - cuspidal
/// family) at X = 0, coefficientwise including constant terms.
pub fn dual_construction_check(
    emb: &CharEmbedding,
    basis: &EigenspaceBasis,
    threshold: i64,
) -> Result<CheckSet> {
    let p = emb.prime();
    let prec = emb.precision();
    let n_max = basis.f.n_max();
    let log_1p = Padic::from_i64(1 + p as i64, p, prec).iwasawa_log()?;
    let cusp = cuspidal_family(emb, &basis.guards, n_max)?;

    let mut set = CheckSet::new("closed formulas vs family derivatives");
    for (kind, dag, l_div, fam_kind) in [
        (
            "fd(1,phi)",
            &basis.dag_one_chi,
            &basis.guards.l_phi,
            EisKind::OneChi,
        ),
        (
            "fd(phi,1)",
            &basis.dag_chi_one,
            &basis.guards.l_phi_inv,
            EisKind::ChiOne,
        ),
    ] {
        let fam = lambda_eisenstein(emb, fam_kind, n_max, 2)?;
        let scale = (basis.guards.sum.clone() * log_1p.clone()).div(l_div)?;
        let mut worst = Agreement::Exact;
        for n in 0..=n_max {
            let d_fam = fam.coeff(n)?.coeff(1).clone();
            let d_cusp = cusp.coeff(n)?.coeff(1).clone();
            let derived = scale.clone() * (d_fam - d_cusp);
            worst = weaker(worst, dag.coeff(n)?.agreement(&derived));
        }
        set.push(IdentityCheck::from_agreement(
            format!("{} from X-derivatives (n <= {})", kind, n_max),
            worst,
            threshold,
        ));
    }
    Ok(set)
}

/// Operational form of the one-dimensionality of the cuspidal eigenspace:
/// inside span{f, fd(phi,1), fd(1,phi)}, anything killed by (U_p - 1) with
/// vanishing constant term is a multiple of f.
pub fn cuspidal_line_check(
    emb: &CharEmbedding,
    basis: &EigenspaceBasis,
    threshold: i64,
) -> Result<CheckSet> {
    let p = emb.prime() as usize;
    let mut set = CheckSet::new("cuspidal generalized eigenspace is a line");
    // c1 f + c2 fd(phi,1) + c3 fd(1,phi): a_0 = 0 forces c3 = 0 (the
    // constant term of fd(1,phi) is certified nonzero), then (U_p - 1)
    // applied at n = 1 forces c2 L(phi) = 0.
    set.push(IdentityCheck::boolean(
        "a_0(fd(1,phi)) certified nonzero",
        basis.dag_one_chi.a0().is_certainly_nonzero(),
    ));
    set.push(IdentityCheck::boolean(
        "L(phi) certified nonzero",
        basis.guards.l_phi.is_certainly_nonzero(),
    ));
    // full-range verification that the surviving vector f is cuspidal and
    // U_p-invariant
    let uf = hecke_u(&basis.f, emb.prime())?;
    let mut worst = Agreement::Exact;
    for n in 1..=basis.f.n_max() / p {
        worst = weaker(worst, uf.coeff(n)?.agreement(basis.f.coeff(n)?));
    }
    set.push(IdentityCheck::from_agreement(
        "(U_p - 1) f = 0 on the valid range",
        worst,
        threshold,
    ));
    set.push(IdentityCheck::boolean(
        "a_0(f) = 0",
        basis.f.a0().is_zero_at_precision(),
    ));
    Ok(set)
}

/// The derivative formula at the trivial zero, with both sides computed by
/// independent pipelines.
#[derive(Clone, Debug)]
pub struct GrossReport {
    pub lhs: Padic,
    pub rhs: Padic,
    pub agreement: Agreement,
}

/// lhs = L_p'(phi omega_p, 0) from the analytic jet; rhs = -L(phi) L(phi,0)
/// from the p-unit and exact Bernoulli pipelines.
pub fn gross_check(
    emb: &CharEmbedding,
    guards: &GuardedLInvariants,
    jet_order: usize,
) -> Result<GrossReport> {
    if !emb.is_irregular() {
        return Err(Error::Precondition(format!(
            "chi({}) != 1: this point is regular; the trivial-zero identities require chi(p) = 1",
            emb.prime()
        )));
    }
    let jet = crate::lfunc::lp_jet(emb, jet_order.max(2))?;
    let lhs = jet.derivative().clone();
    let rhs = -(guards.l_phi.clone() * l_value_at_zero(emb)?);
    let agreement = lhs.agreement(&rhs);
    Ok(GrossReport { lhs, rhs, agreement })
}
