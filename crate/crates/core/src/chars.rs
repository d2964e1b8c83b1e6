//! Dirichlet characters, their p-adic embeddings, generalized Bernoulli
//! numbers, and classical L-values at non-positive integers.
//!
//! Two representations are supported: quadratic characters given by a
//! negative fundamental discriminant (evaluated through the Kronecker
//! symbol), and characters tabulated by exponents on a generating set of
//! (Z/N)^*. Character values are embedded into Z_p through Teichmuller
//! powers, which restricts supported orders to divisors of p - 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bernoulli::{bernoulli_numbers, bernoulli_polynomial};
use crate::error::{Error, Result};
use crate::padic::Padic;
use crate::Rat;

/// Kronecker symbol (a|b), extended to all integers.
pub fn kronecker_symbol(a: i64, b: i64) -> i64 {
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut a = a;
    let mut b = b;
    let mut v = 0u32;
    while b % 2 == 0 {
        b /= 2;
        v += 1;
    }
    let mut k = if v % 2 == 0 {
        1
    } else {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0,
        }
    };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if b == 1 {
            return k;
        }
        a = a.rem_euclid(b);
        if a == 0 {
            return 0;
        }
        let mut v2 = 0u32;
        while a % 2 == 0 {
            a /= 2;
            v2 += 1;
        }
        if v2 % 2 == 1 && matches!(b.rem_euclid(8), 3 | 5) {
            k = -k;
        }
        if a.rem_euclid(4) == 3 && b.rem_euclid(4) == 3 {
            k = -k;
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// True for a fundamental discriminant (of a quadratic field).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    fn squarefree(n: u64) -> bool {
        let mut n = n;
        let mut f = 2u64;
        while f * f <= n {
            if n % (f * f) == 0 {
                return false;
            }
            while n % f == 0 {
                n /= f;
            }
            f += 1;
        }
        true
    }
    if d == 0 || d == 1 {
        return false;
    }
    if d.rem_euclid(4) == 1 {
        squarefree(d.unsigned_abs())
    } else if d % 4 == 0 {
        let m = d / 4;
        matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
    } else {
        false
    }
}

#[derive(Clone, Debug)]
enum CharKind {
    /// chi_d(a) = (d|a), d a negative fundamental discriminant.
    Kronecker { d: i64 },
    /// Exponent e(a) in Z/m for each unit a, built from values on generators.
    Tabulated { exps: Vec<Option<u64>> },
}

/// A Dirichlet character mod N with values in the m-th roots of unity.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    conductor: u64,
    odd: bool,
    kind: CharKind,
}

impl DirichletCharacter {
    /// The quadratic character attached to a negative fundamental
    /// discriminant; it is odd, primitive of conductor |d|.
    pub fn kronecker(d: i64) -> Result<Self> {
        if d >= 0 || !is_fundamental_discriminant(d) {
            return Err(Error::InvalidInput(format!(
                "{} is not a negative fundamental discriminant",
                d
            )));
        }
        Ok(DirichletCharacter {
            modulus: d.unsigned_abs(),
            order: 2,
            conductor: d.unsigned_abs(),
            odd: true,
            kind: CharKind::Kronecker { d },
        })
    }

    /// Build from exponents on generators: chi(g_i) = zeta_m^(e_i). The
    /// given elements must generate (Z/N)^* and the prescription must be
    /// consistent (checked by closing the table).
    pub fn tabulated(modulus: u64, gens: &[(u64, u64)], order: u64) -> Result<Self> {
        if modulus < 2 || order == 0 {
            return Err(Error::InvalidInput("need modulus >= 2 and order >= 1".into()));
        }
        let n = modulus as usize;
        let mut exps: Vec<Option<u64>> = vec![None; n];
        exps[1 % n] = Some(0);
        for &(g, _) in gens {
            if gcd(g % modulus, modulus) != 1 {
                return Err(Error::InvalidInput(format!(
                    "generator {} is not a unit mod {}",
                    g, modulus
                )));
            }
        }
        // close the table under multiplication by the generators
        let mut frontier = vec![1u64 % modulus];
        while let Some(a) = frontier.pop() {
            let ea = exps[a as usize].unwrap();
            for &(g, e) in gens {
                let b = (a * (g % modulus)) % modulus;
                let eb = (ea + e) % order;
                match exps[b as usize] {
                    None => {
                        exps[b as usize] = Some(eb);
                        frontier.push(b);
                    }
                    Some(prev) => {
                        if prev != eb {
                            return Err(Error::InvalidInput(
                                "inconsistent character prescription on generators".into(),
                            ));
                        }
                    }
                }
            }
        }
        for a in 0..modulus {
            if gcd(a, modulus) == 1 && exps[a as usize].is_none() {
                return Err(Error::InvalidInput(format!(
                    "given elements do not generate (Z/{})^*: {} unreached",
                    modulus, a
                )));
            }
        }
        let odd = match exps[(modulus - 1) as usize] {
            Some(e) => 2 * e == order,
            None => false,
        };
        let mut chi = DirichletCharacter {
            modulus,
            order,
            conductor: modulus,
            odd,
            kind: CharKind::Tabulated { exps },
        };
        chi.conductor = chi.compute_conductor();
        Ok(chi)
    }

    fn compute_conductor(&self) -> u64 {
        'outer: for f in divisors(self.modulus) {
            // trivial on everything congruent to 1 mod f?
            let mut a = 1 + f;
            while a < self.modulus + 1 {
                let r = a % self.modulus;
                if gcd(r, self.modulus) == 1 && self.exponent(r as i64) != Some(0) {
                    continue 'outer;
                }
                a += f;
            }
            return f;
        }
        self.modulus
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn is_trivial(&self) -> bool {
        self.conductor == 1
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self.kind, CharKind::Kronecker { .. })
    }

    pub fn discriminant(&self) -> Option<i64> {
        match self.kind {
            CharKind::Kronecker { d } => Some(d),
            _ => None,
        }
    }

    /// Exponent e(a) with chi(a) = zeta_m^(e(a)); None when gcd(a, N) > 1.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        let r = a.rem_euclid(self.modulus as i64) as u64;
        if gcd(r, self.modulus) != 1 {
            return None;
        }
        match &self.kind {
            CharKind::Kronecker { d } => match kronecker_symbol(*d, a) {
                1 => Some(0),
                -1 => Some(1),
                _ => None,
            },
            CharKind::Tabulated { exps } => exps[r as usize],
        }
    }

    /// chi(a) as an exact integer, for quadratic characters only.
    pub fn eval_quadratic(&self, a: i64) -> Result<i64> {
        match self.kind {
            CharKind::Kronecker { d } => Ok(kronecker_symbol(d, a)),
            _ => Err(Error::Precondition(
                "exact integer values exist only for quadratic characters".into(),
            )),
        }
    }

    /// The inverse character (complex conjugate).
    pub fn inverse(&self) -> DirichletCharacter {
        match &self.kind {
            CharKind::Kronecker { .. } => self.clone(),
            CharKind::Tabulated { exps } => {
                let inv = exps
                    .iter()
                    .map(|e| e.map(|e| if e == 0 { 0 } else { self.order - e }))
                    .collect();
                DirichletCharacter {
                    kind: CharKind::Tabulated { exps: inv },
                    ..self.clone()
                }
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
    d.sort_unstable();
    d
}

/// Smallest primitive root modulo an odd prime p.
pub fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut f = 2;
    while f * f <= m {
        if m % f == 0 {
            factors.push(f);
            while m % f == 0 {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    'next: for g in 2..p {
        for q in &factors {
            if pow_mod(g, (p - 1) / q, p) == 1 {
                continue 'next;
            }
        }
        return g;
    }
    unreachable!("no primitive root found");
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut bb = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// A character together with a fixed embedding of its values into Z_p.
///
/// The m-th root of unity zeta_m maps to omega_p(g)^(j (p-1)/m) for the
/// smallest primitive root g mod p and the chosen embedding index j (coprime
/// to m, default 1); which abstract root goes to which Teichmuller power is a
/// convention the caller may override.
#[derive(Clone, Debug)]
pub struct CharEmbedding {
    chi: DirichletCharacter,
    p: u64,
    prec: u32,
    /// zeta^e for e in 0..m.
    root_powers: Vec<Padic>,
}

impl CharEmbedding {
    pub fn new(chi: &DirichletCharacter, p: u64, prec: u32, embed_index: u64) -> Result<Self> {
        if p < 3 || chi.modulus % p == 0 {
            return Err(Error::Precondition(format!(
                "need an odd prime p with p coprime to the modulus; got p = {}, N = {}",
                p, chi.modulus
            )));
        }
        if (p - 1) % chi.order != 0 {
            return Err(Error::Precondition(format!(
                "no embedding: order {} does not divide p - 1 = {}",
                chi.order,
                p - 1
            )));
        }
        if gcd(embed_index, chi.order) != 1 {
            return Err(Error::InvalidInput(format!(
                "embedding index {} is not coprime to the order {}",
                embed_index, chi.order
            )));
        }
        let g = primitive_root(p);
        let omega = Padic::from_i64(g as i64, p, prec).teichmuller()?;
        let zeta = omega.pow_u64((p - 1) / chi.order * embed_index);
        let mut root_powers = Vec::with_capacity(chi.order as usize);
        let mut acc = Padic::one(p, prec);
        for _ in 0..chi.order {
            root_powers.push(acc.clone());
            acc = acc * zeta.clone();
        }
        Ok(CharEmbedding {
            chi: chi.clone(),
            p,
            prec,
            root_powers,
        })
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.chi
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// The embedded value chi(a), zero (exactly) when gcd(a, N) > 1.
    pub fn eval(&self, a: i64) -> Padic {
        match self.chi.exponent(a) {
            None => Padic::zero_exact(self.p, self.prec),
            Some(e) => self.root_powers[e as usize].clone(),
        }
    }

    /// Whether chi(p) = 1, the irregularity condition at p (exact test on
    /// the root-of-unity exponent, not a precision-limited one).
    pub fn is_irregular(&self) -> bool {
        self.chi.exponent(self.p as i64) == Some(0)
    }

    pub fn inverse(&self) -> CharEmbedding {
        let mut rp = self.root_powers.clone();
        rp[1..].reverse();
        CharEmbedding {
            chi: self.chi.inverse(),
            p: self.p,
            prec: self.prec,
            root_powers: rp,
        }
    }

    /// Value of the primitive character inducing chi at a residue mod the
    /// conductor (picks a lift coprime to the modulus).
    pub fn eval_primitive(&self, a: i64) -> Padic {
        let f = self.chi.conductor as i64;
        let n = self.chi.modulus;
        if gcd(a.rem_euclid(f) as u64, f as u64) != 1 {
            return Padic::zero_exact(self.p, self.prec);
        }
        let mut lift = a.rem_euclid(f);
        while gcd(lift.rem_euclid(n as i64) as u64, n) != 1 {
            lift += f;
        }
        self.eval(lift)
    }
}

/// Generalized Bernoulli number B_(k,chi) = f^(k-1) sum_a chi(a) B_k(a/f),
/// exact rational version (quadratic characters).
pub fn generalized_bernoulli_rat(chi: &DirichletCharacter, k: u64) -> Result<Rat> {
    if k == 0 {
        return Err(Error::Precondition("need k >= 1".into()));
    }
    let d = chi
        .discriminant()
        .ok_or_else(|| Error::Precondition("exact route needs a quadratic character".into()))?;
    let f = chi.conductor();
    let numbers = bernoulli_numbers(k);
    let mut acc = BigRational::zero();
    for a in 1..=f {
        let c = kronecker_symbol(d, a as i64);
        if c == 0 {
            continue;
        }
        let x = BigRational::new(BigInt::from(a), BigInt::from(f));
        let term = bernoulli_polynomial(k, &x, &numbers);
        acc += BigRational::from(BigInt::from(c)) * term;
    }
    let scale = BigRational::from(BigInt::from(f)).pow(k as i32 - 1);
    Ok(scale * acc)
}

/// Generalized Bernoulli number through the p-adic embedding (any supported
/// character); for quadratic characters this must agree with the exact route.
pub fn generalized_bernoulli_padic(emb: &CharEmbedding, k: u64) -> Result<Padic> {
    if k == 0 {
        return Err(Error::Precondition("need k >= 1".into()));
    }
    let f = emb.character().conductor();
    let p = emb.prime();
    let prec = emb.precision();
    let numbers = bernoulli_numbers(k);
    let mut acc = Padic::zero_exact(p, prec);
    for a in 1..=f {
        let chi_a = emb.eval_primitive(a as i64);
        if chi_a.is_zero_at_precision() {
            continue;
        }
        let x = BigRational::new(BigInt::from(a), BigInt::from(f));
        let b = bernoulli_polynomial(k, &x, &numbers);
        let b_p = Padic::from_ratio(b.numer(), b.denom(), p, prec)?;
        acc = acc + chi_a * b_p;
    }
    let scale = Padic::from_bigint(&BigInt::from(f), p, prec).pow_u64(k - 1);
    Ok(acc * scale)
}

/// L(chi, 1-k) = -B_(k,chi)/k, exact rational version.
pub fn l_value_nonpositive_rat(chi: &DirichletCharacter, k: u64) -> Result<Rat> {
    if chi.is_trivial() {
        return Err(Error::Precondition(
            "L(chi, 1-k) at the trivial character is excluded".into(),
        ));
    }
    Ok(-generalized_bernoulli_rat(chi, k)? / BigRational::from(BigInt::from(k)))
}

/// L(chi, 1-k) = -B_(k,chi)/k through the p-adic embedding.
pub fn l_value_nonpositive_padic(emb: &CharEmbedding, k: u64) -> Result<Padic> {
    if emb.character().is_trivial() {
        return Err(Error::Precondition(
            "L(chi, 1-k) at the trivial character is excluded".into(),
        ));
    }
    Ok(-generalized_bernoulli_padic(emb, k)?.div_int(k as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    /// The odd sextic character of conductor 21 (quadratic at 3, cubic at 7).
    pub(crate) fn sextic_mod_21() -> DirichletCharacter {
        DirichletCharacter::tabulated(21, &[(8, 3), (10, 2)], 6).unwrap()
    }

    #[test]
    fn kronecker_values_mod_four() {
        let chi = DirichletCharacter::kronecker(-4).unwrap();
        assert_eq!(chi.eval_quadratic(3).unwrap(), -1);
        assert_eq!(chi.eval_quadratic(6).unwrap(), 0);
        assert_eq!(chi.eval_quadratic(5).unwrap(), 1);
        assert!(chi.is_odd());
        assert_eq!(chi.conductor(), 4);
    }

    #[test]
    fn kronecker_rejects_non_fundamental() {
        assert!(DirichletCharacter::kronecker(-12).is_err());
        assert!(DirichletCharacter::kronecker(-9).is_err());
        assert!(DirichletCharacter::kronecker(5).is_err());
        assert!(DirichletCharacter::kronecker(-23).is_ok());
    }

    #[test]
    fn kronecker_multiplicative_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in [-4i64, -3, -23] {
            let chi = DirichletCharacter::kronecker(d).unwrap();
            for _ in 0..1000 {
                let a: i64 = rng.gen_range(1..10_000);
                let b: i64 = rng.gen_range(1..10_000);
                assert_eq!(
                    chi.eval_quadratic(a * b).unwrap(),
                    chi.eval_quadratic(a).unwrap() * chi.eval_quadratic(b).unwrap()
                );
            }
        }
    }

    #[test]
    fn sextic_character_structure() {
        let chi = sextic_mod_21();
        assert!(chi.is_odd());
        assert_eq!(chi.order(), 6);
        assert_eq!(chi.conductor(), 21);
        // chi(2) has exponent 1: a primitive sixth root of unity
        assert_eq!(chi.exponent(2), Some(1));
        assert_eq!(chi.exponent(13), Some(0), "13 = 8 * 10^3 * 10^3 ... chi(13)");
        assert_eq!(chi.exponent(3), None);
        assert_eq!(chi.exponent(7), None);
    }

    #[test]
    fn sextic_inverse_is_conjugate() {
        let chi = sextic_mod_21();
        let inv = chi.inverse();
        for a in 1..21 {
            match (chi.exponent(a), inv.exponent(a)) {
                (Some(e1), Some(e2)) => assert_eq!((e1 + e2) % 6, 0),
                (None, None) => {}
                other => panic!("mismatch at {}: {:?}", a, other),
            }
        }
    }

    #[test]
    fn tabulated_rejects_inconsistent_or_partial_data() {
        // exponent 1 on an order-2 element is inconsistent for order 6
        assert!(DirichletCharacter::tabulated(21, &[(8, 1), (10, 2)], 6).is_err());
        // single generator does not generate (Z/21)^*
        assert!(DirichletCharacter::tabulated(21, &[(10, 1)], 6).is_err());
    }

    #[test]
    fn embedded_sextic_value_is_sixth_root_of_unity() {
        // the setting with p = 13 (6 divides 12); oracle: Teichmuller powers
        let chi = sextic_mod_21();
        let emb = CharEmbedding::new(&chi, 13, 20, 1).unwrap();
        let v = emb.eval(2);
        let one = Padic::one(13, 20);
        assert!(v.pow_u64(6).agrees_mod(&one, 20));
        assert!(!v.pow_u64(3).agrees_mod(&one, 2));
        assert!(!v.pow_u64(2).agrees_mod(&one, 2));
        assert!(emb.is_irregular(), "chi(13) must equal 1");
    }

    #[test]
    fn embedding_requires_order_dividing_p_minus_one() {
        let chi = sextic_mod_21();
        assert!(CharEmbedding::new(&chi, 5, 20, 1).is_err());
        assert!(CharEmbedding::new(&chi, 11, 20, 1).is_err());
    }

    #[test]
    fn embedded_quadratic_agrees_with_kronecker() {
        let chi = DirichletCharacter::kronecker(-4).unwrap();
        let emb = CharEmbedding::new(&chi, 5, 16, 1).unwrap();
        for a in 0..40i64 {
            let sym = chi.eval_quadratic(a).unwrap();
            let lift = Padic::from_i64(sym, 5, 16);
            assert!(emb.eval(a).agrees_mod(&lift, 16), "a = {}", a);
        }
    }

    #[test]
    fn embedded_values_multiplicative() {
        use rand::{Rng, SeedableRng};
        let chi = sextic_mod_21();
        let emb = CharEmbedding::new(&chi, 13, 16, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a: i64 = rng.gen_range(1..5_000);
            let b: i64 = rng.gen_range(1..5_000);
            let lhs = emb.eval(a * b);
            let rhs = emb.eval(a) * emb.eval(b);
            if lhs.is_zero_at_precision() {
                assert!(rhs.is_zero_at_precision());
            } else {
                assert!(lhs.agrees_mod(&rhs, 16));
            }
        }
    }

    #[test]
    fn bernoulli_b1_for_quadratic_characters() {
        // oracle: B_(1,chi) = (1/f) sum chi(a) a  (the sum of chi(a) vanishes)
        for (d, expect) in [(-4i64, rat(-1, 2)), (-3, rat(-1, 3))] {
            let chi = DirichletCharacter::kronecker(d).unwrap();
            let b = generalized_bernoulli_rat(&chi, 1).unwrap();
            assert_eq!(b, expect);
            let f = chi.conductor() as i64;
            let direct: Rat = (1..=f)
                .map(|a| rat(chi.eval_quadratic(a).unwrap() * a, f))
                .sum();
            assert_eq!(b, direct);
        }
    }

    #[test]
    fn bernoulli_vanishes_for_odd_character_even_k() {
        for d in [-4i64, -3, -23] {
            let chi = DirichletCharacter::kronecker(d).unwrap();
            for k in [2u64, 4, 6] {
                assert!(generalized_bernoulli_rat(&chi, k).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn bernoulli_exact_and_padic_routes_agree() {
        for (d, p) in [(-4i64, 5u64), (-3, 7), (-3, 13)] {
            let chi = DirichletCharacter::kronecker(d).unwrap();
            let emb = CharEmbedding::new(&chi, p, 18, 1).unwrap();
            for k in [1u64, 3, 5, 9] {
                let exact = generalized_bernoulli_rat(&chi, k).unwrap();
                let embedded = Padic::from_ratio(exact.numer(), exact.denom(), p, 18).unwrap();
                let padic = generalized_bernoulli_padic(&emb, k).unwrap();
                if embedded.is_zero_at_precision() {
                    assert!(padic.is_zero_at_precision());
                } else {
                    assert!(padic.agrees_mod(&embedded, 16), "d={} p={} k={}", d, p, k);
                }
            }
        }
    }

    #[test]
    fn classical_l_values_at_zero() {
        let chi4 = DirichletCharacter::kronecker(-4).unwrap();
        assert_eq!(l_value_nonpositive_rat(&chi4, 1).unwrap(), rat(1, 2));
        let chi3 = DirichletCharacter::kronecker(-3).unwrap();
        assert_eq!(l_value_nonpositive_rat(&chi3, 1).unwrap(), rat(1, 3));
        // odd character, even k: the L-value vanishes
        assert!(l_value_nonpositive_rat(&chi3, 2).unwrap().is_zero());
    }
}
