//! Rigorous signs of real and imaginary parts of cyclotomic numbers.
//!
//! Convexity tests and angle ordering need the sign of expressions like
//! Im σ₁(z) for exact field elements z. Floating point cannot certify a sign
//! near zero, so this module evaluates Σ c_k·sin(2πk/n) (and the cosine
//! analogue) in fixed-point interval arithmetic: 768 fractional bits, a
//! 200-digit enclosure of π, and a Taylor tail bound. Exact zeros are
//! recognized algebraically first (z = z̄ or z = −z̄), so a surviving query
//! is provably nonzero and the interval eventually excludes zero; if the
//! budget is ever insufficient the query panics rather than guessing.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
#[cfg(test)]
use num_traits::ToPrimitive;

use crate::cyclo::CycloRat;

/// Fractional bits of the fixed-point representation.
const SHIFT: u32 = 768;
/// Taylor terms for sin/cos at arguments below 2.2 radians; the tail is then
/// far below one ulp of the representation.
const TAYLOR_TERMS: usize = 100;

/// First 200 decimals of π; the true value lies in [I, I+1]·10⁻²⁰⁰ where I is
/// this integer. A test re-derives the enclosure from Machin's formula.
const PI_DIGITS: &str = "3\
14159265358979323846264338327950288419716939937510\
58209749445923078164062862089986280348253421170679\
82148086513282306647093844609550582231725359408128\
48111745028410270193852110555964462294895493038196";

/// A closed interval [lo, hi]·2^{−SHIFT} known to contain the value.
#[derive(Clone, Debug)]
struct Iv {
    lo: BigInt,
    hi: BigInt,
}

fn floor_shift(x: BigInt) -> BigInt {
    x.div_floor(&(BigInt::one() << SHIFT))
}

fn ceil_shift(x: BigInt) -> BigInt {
    x.div_ceil(&(BigInt::one() << SHIFT))
}

impl Iv {
    fn from_int(v: i64) -> Iv {
        let s = BigInt::from(v) << SHIFT;
        Iv { lo: s.clone(), hi: s }
    }

    fn zero() -> Iv {
        Iv { lo: BigInt::zero(), hi: BigInt::zero() }
    }

    fn add(&self, other: &Iv) -> Iv {
        Iv { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    fn sub(&self, other: &Iv) -> Iv {
        Iv { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    fn mul(&self, other: &Iv) -> Iv {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Iv { lo: floor_shift(lo), hi: ceil_shift(hi) }
    }

    /// Multiply by an exact integer.
    fn scale_int(&self, k: &BigInt) -> Iv {
        if k.is_negative() {
            Iv { lo: &self.hi * k, hi: &self.lo * k }
        } else {
            Iv { lo: &self.lo * k, hi: &self.hi * k }
        }
    }

    /// Divide by an exact positive integer.
    fn div_uint(&self, d: &BigInt) -> Iv {
        assert!(d.is_positive());
        Iv { lo: self.lo.div_floor(d), hi: self.hi.div_ceil(d) }
    }

    /// Widen symmetrically by `pad` ulps.
    fn pad(&self, pad: &BigInt) -> Iv {
        Iv { lo: &self.lo - pad, hi: &self.hi + pad }
    }

    fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    #[cfg(test)]
    fn to_f64(&self) -> f64 {
        let mid: BigInt = (&self.lo + &self.hi) / 2;
        let num = mid.to_f64().unwrap_or(f64::NAN);
        num / 2f64.powi(SHIFT as i32)
    }
}

fn pi_interval() -> Iv {
    let digits: BigInt = PI_DIGITS.parse().expect("π digit table is numeric");
    let den = BigInt::from(10u32).pow(200);
    // π ∈ [digits, digits+1] / 10^200.
    let lo = (&digits << SHIFT).div_floor(&den);
    let hi = ((&digits + 1u32) << SHIFT).div_ceil(&den);
    Iv { lo, hi }
}

/// sin and cos over an interval argument |θ| ≤ 2.2, by Taylor series with an
/// explicit tail pad.
fn sin_cos_taylor(theta: &Iv) -> (Iv, Iv) {
    // θ^2 as an interval.
    let theta2 = theta.mul(theta);
    let mut sin = theta.clone();
    let mut cos = Iv::from_int(1);
    // sin: term_j = (−1)^j θ^{2j+1}/(2j+1)!; cos: (−1)^j θ^{2j}/(2j)!.
    let mut sin_term = theta.clone();
    let mut cos_term = Iv::from_int(1);
    for j in 1..TAYLOR_TERMS {
        let d_cos = BigInt::from((2 * j - 1) * (2 * j));
        cos_term = cos_term.mul(&theta2).div_uint(&d_cos);
        let d_sin = BigInt::from((2 * j) * (2 * j + 1));
        sin_term = sin_term.mul(&theta2).div_uint(&d_sin);
        if j % 2 == 1 {
            cos = cos.sub(&cos_term);
            sin = sin.sub(&sin_term);
        } else {
            cos = cos.add(&cos_term);
            sin = sin.add(&sin_term);
        }
    }
    // Tail bound: |θ| ≤ 2.2 < 3, so the dropped tail is below
    // 3^{2T}/ (2T)! · (geometric slack 2), itself far under one ulp at
    // T = 100; pad by a couple of ulps to stay safe.
    let pad = BigInt::from(4);
    (sin.pad(&pad), cos.pad(&pad))
}

/// Cached enclosures of (cos 2πk/n, sin 2πk/n) for k = 0..n.
fn trig_table(n: u32) -> &'static [(Iv, Iv)] {
    static CACHE: OnceLock<Mutex<HashMap<u32, &'static [(Iv, Iv)]>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(t) = guard.get(&n) {
        return t;
    }
    // θ₁ = 2π/n once by series, then angle addition; interval widths grow
    // only linearly in k this way.
    let two_pi = pi_interval().scale_int(&BigInt::from(2));
    let theta1 = two_pi.div_uint(&BigInt::from(n));
    let (s1, c1) = sin_cos_taylor(&theta1);
    let mut table: Vec<(Iv, Iv)> = Vec::with_capacity(n as usize);
    table.push((Iv::from_int(1), Iv::zero()));
    for k in 1..n as usize {
        let (ck, sk) = &table[k - 1];
        let c = ck.mul(&c1).sub(&sk.mul(&s1));
        let s = sk.mul(&c1).add(&ck.mul(&s1));
        table.push((c, s));
    }
    let leaked: &'static [(Iv, Iv)] = Box::leak(table.into_boxed_slice());
    guard.insert(n, leaked);
    leaked
}

/// Clear denominators: returns the integer vector L·coeffs.
fn integerize(coeffs: &[BigRational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in coeffs {
        l = l.lcm(c.denom());
    }
    coeffs
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Part {
    Re,
    Im,
}

fn sum_sign(z: &CycloRat, part: Part) -> i32 {
    // Algebraic zero test first: Re σ₁(z) = 0 iff z + z̄ = 0, and
    // Im σ₁(z) = 0 iff z = z̄, because σ₁ embeds the field injectively.
    let conj = z.conj();
    let witness = match part {
        Part::Re => &conj + z,
        Part::Im => z - &conj,
    };
    if witness.is_zero() {
        return 0;
    }
    let n = z.order();
    let table = trig_table(n);
    let ints = integerize(z.coeffs());
    let mut acc = Iv::zero();
    for (k, c) in ints.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let iv = match part {
            Part::Re => &table[k].0,
            Part::Im => &table[k].1,
        };
        acc = acc.add(&iv.scale_int(c));
    }
    match acc.sign() {
        Some(s) => s,
        None => {
            // Provably impossible for realistic inputs: the value is a
            // nonzero algebraic integer (after clearing denominators), so
            // its magnitude is at least 1 / max|σ|^{φ−1}, which dwarfs the
            // interval width unless coefficients are astronomically large.
            let magnitude: BigInt = ints.iter().map(|c| c.abs()).sum();
            panic!(
                "sign determination ran out of precision: order {}, coefficient magnitude {}, interval [{}, {}] ulps",
                n, magnitude, acc.lo, acc.hi
            );
        }
    }
}

/// Sign of Re σ₁(z) as −1, 0, or 1; exact.
pub fn sign_re(z: &CycloRat) -> i32 {
    sum_sign(z, Part::Re)
}

/// Sign of Im σ₁(z) as −1, 0, or 1; exact.
pub fn sign_im(z: &CycloRat) -> i32 {
    sum_sign(z, Part::Im)
}

/// Sign of the planar cross product σ₁(a) × σ₁(b) = Im(conj(a)·b); exact.
/// Zero exactly when a and b are parallel (or one is zero).
pub fn cross_sign(a: &CycloRat, b: &CycloRat) -> i32 {
    sign_im(&(&a.conj() * b))
}

/// Sign of the planar dot product σ₁(a)·σ₁(b) = Re(conj(a)·b); exact.
pub fn dot_sign(a: &CycloRat, b: &CycloRat) -> i32 {
    sign_re(&(&a.conj() * b))
}
