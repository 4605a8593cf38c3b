//! p-adic valuations, products of (1−ζ^k) factors, and the rational
//! exclusion sets used by the cross-ratio classifiers.
//!
//! The central object is the ratio
//!   f(k₁,k₂,k₃,k₄) = (1−ζ^{k₁})(1−ζ^{k₂}) / ((1−ζ^{k₃})(1−ζ^{k₄}))
//! over Q(ζ_m) with k₁+k₂ = k₃+k₄, which is always real, and the sweep that
//! finds every quadruple making it rational.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclo::{CycloRat, RealCycloRat};
use crate::error::{QtError, QtResult};

pub fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Exponent of the prime p in the nonzero rational q.
pub fn vp_rational(q: &BigRational, p: u64) -> QtResult<i64> {
    if !is_prime_u64(p) {
        return Err(QtError::NotPrime(p));
    }
    if q.is_zero() {
        return Err(QtError::InfiniteValuation("v_p(0)".into()));
    }
    let p = BigInt::from(p);
    let count = |mut x: BigInt| -> i64 {
        let mut c = 0;
        x = x.abs();
        while (&x % &p).is_zero() {
            x /= &p;
            c += 1;
        }
        c
    };
    Ok(count(q.numer().clone()) - count(q.denom().clone()))
}

/// Valuation of 1 − ζ_m^s at the unique place of Q(ζ) over p, normalized so
/// that v_p(p) = 1. Depends only on the reduced order r = m / gcd(m, s):
/// zero unless r is a power of p, in which case it is 1/(p^{t−1}(p−1)) for
/// r = p^t.
pub fn vp_one_minus_zeta(m: u32, s: u32, p: u64) -> QtResult<BigRational> {
    if !is_prime_u64(p) {
        return Err(QtError::NotPrime(p));
    }
    if m == 0 {
        return Err(QtError::BadArgument("modulus must be positive".into()));
    }
    if s % m == 0 {
        return Err(QtError::InfiniteValuation(format!("1 − ζ_{}^{} is zero", m, s)));
    }
    let r = m / m.gcd(&s);
    // Is r a power of p?
    let mut t = 0u32;
    let mut rest = r as u64;
    while rest % p == 0 {
        rest /= p;
        t += 1;
    }
    if rest != 1 || t == 0 {
        return Ok(BigRational::zero());
    }
    let den = BigInt::from(p).pow(t - 1) * BigInt::from(p - 1);
    Ok(BigRational::new(BigInt::one(), den))
}

/// A quadruple of exponents (k₁, k₂, k₃, k₄) modulo m with the balance
/// condition k₁+k₂ = k₃+k₄ that makes the associated ratio real.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FourIndex {
    pub m: u32,
    pub k: [u32; 4],
}

impl FourIndex {
    pub fn new(m: u32, k: [u32; 4]) -> QtResult<Self> {
        if k.iter().any(|&ki| ki == 0 || ki >= m) {
            return Err(QtError::BadArgument(format!(
                "exponents {:?} must lie strictly between 0 and {}",
                k, m
            )));
        }
        if k[0] + k[1] != k[2] + k[3] {
            return Err(QtError::BadArgument(format!(
                "exponents {:?} are not balanced: {} + {} != {} + {}",
                k, k[0], k[1], k[2], k[3]
            )));
        }
        Ok(FourIndex { m, k })
    }

    /// The normalized ordering k₃ < k₁ ≤ k₂ < k₄ that picks one
    /// representative per orbit and forces the ratio above 1.
    pub fn is_normalized(&self) -> bool {
        let [k1, k2, k3, k4] = self.k;
        k3 < k1 && k1 <= k2 && k2 < k4
    }

    /// The quadruple with numerator and denominator exchanged.
    pub fn swapped(&self) -> FourIndex {
        let [k1, k2, k3, k4] = self.k;
        FourIndex { m: self.m, k: [k3, k4, k1, k2] }
    }
}

/// Evaluate the real ratio attached to a balanced quadruple.
pub fn eval_f(d: &FourIndex) -> QtResult<RealCycloRat> {
    let m = d.m;
    let one = CycloRat::one(m)?;
    let term = |k: u32| -> QtResult<CycloRat> { Ok(&one - &CycloRat::zeta_pow(m, k as i64)?) };
    let num = &term(d.k[0])? * &term(d.k[1])?;
    let den = &term(d.k[2])? * &term(d.k[3])?;
    let f = &num * &den.try_inv().expect("1 − ζ^k with k ≢ 0 is never zero");
    Ok(RealCycloRat::try_from_cyclo(&f)
        .expect("balanced exponent sums make the ratio invariant under conjugation"))
}

/// A quadruple whose ratio turned out rational, together with the value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepHit {
    pub index: FourIndex,
    pub value: BigRational,
}

/// Exhaustive scan of all normalized quadruples for 4 ≤ m ≤ m_max, returning
/// exactly those with rational ratio. One denominator inverse is hoisted per
/// (k₃, k₄) pair; the k₁ loop then costs a single multiplication each.
pub fn enumerate_rational_f(m_max: u32) -> QtResult<Vec<SweepHit>> {
    let mut hits = Vec::new();
    for m in 4..=m_max {
        let one = CycloRat::one(m)?;
        let mut one_minus: Vec<CycloRat> = Vec::with_capacity(m as usize);
        one_minus.push(CycloRat::zero(m)?); // index 0 unused
        for k in 1..m {
            one_minus.push(&one - &CycloRat::zeta_pow(m, k as i64)?);
        }
        for k3 in 1..m {
            for k4 in (k3 + 1)..m {
                let sum = k3 + k4;
                let k1_lo = (k3 + 1).max(sum.saturating_sub(m - 1));
                let k1_hi = sum / 2;
                if k1_lo > k1_hi {
                    continue;
                }
                let inv34 = (&one_minus[k3 as usize] * &one_minus[k4 as usize])
                    .try_inv()
                    .expect("denominator factors are nonzero");
                for k1 in k1_lo..=k1_hi {
                    let k2 = sum - k1;
                    let f = &(&one_minus[k1 as usize] * &one_minus[k2 as usize]) * &inv34;
                    if f.is_rational() {
                        hits.push(SweepHit {
                            index: FourIndex { m, k: [k1, k2, k3, k4] },
                            value: f.to_rational().unwrap(),
                        });
                    }
                }
            }
        }
    }
    Ok(hits)
}

fn big_rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The eleven sporadic rational solutions at modulus 12, in normalized
/// exponent order, each with its ratio value. Solutions at other moduli that
/// are not covered by the two structural families are rescalings of these.
pub fn base_solution_table() -> &'static [([u32; 4], BigRational)] {
    static TABLE: OnceLock<Vec<([u32; 4], BigRational)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        vec![
            ([6, 6, 4, 8], big_rat(4, 3)),
            ([6, 6, 2, 10], big_rat(4, 1)),
            ([4, 8, 3, 9], big_rat(3, 2)),
            ([4, 8, 2, 10], big_rat(3, 1)),
            ([4, 4, 2, 6], big_rat(3, 2)),
            ([8, 8, 6, 10], big_rat(3, 2)),
            ([4, 4, 1, 7], big_rat(3, 1)),
            ([8, 8, 5, 11], big_rat(3, 1)),
            ([3, 9, 2, 10], big_rat(2, 1)),
            ([3, 3, 1, 5], big_rat(2, 1)),
            ([9, 9, 7, 11], big_rat(2, 1)),
        ]
    })
}

/// Index into `base_solution_table` when the hit is a rescaling of a
/// sporadic solution: 12·k == m·k_base componentwise with matching value.
pub fn base_class_of(hit: &SweepHit) -> Option<usize> {
    base_solution_table().iter().position(|(kb, q)| {
        hit.value == *q
            && hit
                .index
                .k
                .iter()
                .zip(kb)
                .all(|(&ki, &kbi)| 12 * ki == hit.index.m * kbi)
    })
}

/// The two structural one-parameter families, both with ratio exactly 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyPattern {
    /// (2k, s, k, k+s) at modulus 2s with 1 ≤ k ≤ s/2.
    FirstDoubled,
    /// (s, 2k, k, k+s) at modulus 2s with s/2 ≤ k < s.
    SecondDoubled,
}

/// Matches a hit against the structural families (either orientation).
pub fn family_pattern(hit: &SweepHit) -> Option<FamilyPattern> {
    let m = hit.index.m;
    if m % 2 != 0 || hit.value != big_rat(2, 1) {
        return None;
    }
    let s = m / 2;
    let [k1, k2, k3, k4] = hit.index.k;
    if k2 == s && k1 == 2 * k3 && k4 == k3 + s && k3 >= 1 && 2 * k3 <= s {
        return Some(FamilyPattern::FirstDoubled);
    }
    if k1 == s && k2 == 2 * k3 && k4 == k3 + s && 2 * k3 >= s && k3 < s {
        return Some(FamilyPattern::SecondDoubled);
    }
    None
}

/// {4/3, 3/2, 2, 3, 4}: every value the sweep can produce.
pub fn n1_set() -> &'static [BigRational] {
    static SET: OnceLock<Vec<BigRational>> = OnceLock::new();
    SET.get_or_init(|| {
        vec![big_rat(4, 3), big_rat(3, 2), big_rat(2, 1), big_rat(3, 1), big_rat(4, 1)]
    })
}

pub fn n1_member(q: &BigRational) -> bool {
    n1_set().contains(q)
}

/// The quadratic-order exclusion set: {−1, 1} ∪ squares of the five ratio
/// values ∪ N ∪ 1/N, where N collects ±a/b for a in a fixed list of nine
/// numerators and every smaller coprime b.
fn n2_set() -> &'static std::collections::BTreeSet<BigRational> {
    static SET: OnceLock<std::collections::BTreeSet<BigRational>> = OnceLock::new();
    SET.get_or_init(|| {
        let mut set = std::collections::BTreeSet::new();
        set.insert(big_rat(1, 1));
        set.insert(big_rat(-1, 1));
        for q in n1_set() {
            set.insert(q * q);
        }
        let mut n_values = Vec::new();
        for a in [2u32, 3, 4, 5, 6, 8, 9, 12, 16] {
            for b in 1..a {
                if a.gcd(&b) == 1 {
                    n_values.push(big_rat(a as i64, b as i64));
                }
            }
        }
        for v in n_values {
            set.insert(-&v);
            set.insert(v.recip());
            set.insert(-v.recip());
            set.insert(v);
        }
        set
    })
}

pub fn n2_member(q: &BigRational) -> bool {
    n2_set().contains(q)
}

/// Count the distinct prime factors of n, which must be positive.
/// Trial division removes everything up to 10⁶; what remains below 10¹²
/// is necessarily a single prime. Larger unfactored remainders abort —
/// the inputs here are norms of modest height.
fn distinct_prime_count(n: &BigInt) -> u32 {
    assert!(n.is_positive());
    let mut n = n.clone();
    let mut count = 0u32;
    let mut p = 2u64;
    while p <= 1_000_000 {
        let pb = BigInt::from(p);
        if (&n % &pb).is_zero() {
            count += 1;
            while (&n % &pb).is_zero() {
                n /= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
        if n.is_one() {
            return count;
        }
    }
    if n.is_one() {
        count
    } else if n < BigInt::from(10u64.pow(12)) {
        // no factor ≤ 10⁶ and below 10¹²: must be prime
        count + 1
    } else {
        panic!("factoring {} exceeds the supported range", n);
    }
}

/// Membership in ±({1} ∪ {q^{±1} : q > 1 rational, numerator with at most
/// two distinct prime factors}).
pub fn two_prime_criterion(q: &BigRational) -> QtResult<bool> {
    if q.is_zero() {
        return Err(QtError::BadArgument("zero has no sign decomposition".into()));
    }
    let a = q.abs();
    if a.is_one() {
        return Ok(true);
    }
    let big_side = if a > BigRational::one() { a } else { a.recip() };
    Ok(distinct_prime_count(big_side.numer()) <= 2)
}

/// Which exclusion argument, if any, certifies a cross ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CrossRatioClass {
    DeterminedByN1,
    DeterminedByN2,
    DeterminedByTwoPrime,
    Inconclusive,
}

/// Full record of the classification of one cross-ratio value.
#[derive(Clone, Debug)]
pub struct CrossRatioVerdict {
    pub order: u32,
    /// The value itself when it is rational (always, for orders 3, 4, 6).
    pub value_rational: Option<BigRational>,
    /// Norm of the value down to Q.
    pub norm: BigRational,
    /// Whether the five-value test applies at this order, and its outcome.
    pub n1_applicable: bool,
    pub n1_member: Option<bool>,
    /// Whether the quadratic-order set test applies, and its outcome.
    pub n2_applicable: bool,
    pub n2_member: Option<bool>,
    /// Outcome of the two-prime numerator test on the norm (always applies).
    pub two_prime_member: bool,
    pub class: CrossRatioClass,
}

/// Decide which exclusion set rules out the cross ratio x of four direction
/// slopes at the given order. Orders 3, 4, 6 use the rational five-value
/// test on x itself; orders 5, 8, 10, 12 use the quadratic exclusion set on
/// the norm; every order falls back to the two-prime test on the norm.
pub fn classify_cross_ratio(x: &RealCycloRat, n: u32) -> QtResult<CrossRatioVerdict> {
    if x.order() != n {
        return Err(QtError::OrderMismatch { expected: n, found: x.order() });
    }
    let n1_applicable = matches!(n, 3 | 4 | 6);
    let n2_applicable = matches!(n, 5 | 8 | 10 | 12);
    let value_rational = x.to_rational();
    if n1_applicable && value_rational.is_none() {
        return Err(QtError::BadArgument(format!(
            "cross ratios at order {} are rational, but got {:?}",
            n, x
        )));
    }
    let norm = x.field_norm();
    let n1 = value_rational.as_ref().filter(|_| n1_applicable).map(n1_member);
    let n2 = n2_applicable.then(|| n2_member(&norm));
    let two_prime = two_prime_criterion(&norm)?;

    let class = if n1 == Some(false) {
        CrossRatioClass::DeterminedByN1
    } else if n2 == Some(false) {
        CrossRatioClass::DeterminedByN2
    } else if !two_prime {
        CrossRatioClass::DeterminedByTwoPrime
    } else {
        CrossRatioClass::Inconclusive
    };
    Ok(CrossRatioVerdict {
        order: n,
        value_rational,
        norm,
        n1_applicable,
        n1_member: n1,
        n2_applicable,
        n2_member: n2,
        two_prime_member: two_prime,
        class,
    })
}
