//! Exact arithmetic in Q(ζ_n) and its maximal real subfield Q(ζ_n + ζ_n⁻¹).
//!
//! Elements carry arbitrary-precision rational coefficients over the power
//! basis 1, ζ, ..., ζ^{φ(n)−1}; every operation reduces modulo the n-th
//! cyclotomic polynomial, so representations are canonical and equality is
//! literal coefficient equality. Floating point appears only in the
//! `embed_*` methods, which exist for ordering, rendering and diagnostics —
//! never for decisions that tests pin exactly.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QtError, QtResult};
use crate::util;

/// Default cap on supported orders; override with QUASITOMO_MAX_ORDER.
pub const DEFAULT_MAX_ORDER: u32 = 60;

pub fn max_order() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("QUASITOMO_MAX_ORDER")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_MAX_ORDER)
    })
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Integer coefficients of the n-th cyclotomic polynomial, constant term
/// first, computed by dividing x^n − 1 by the polynomials of all proper
/// divisors. Memoized: the recursion revisits small orders constantly.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let result = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        let mut p = vec![BigInt::zero(); n as usize + 1];
        p[0] = BigInt::from(-1);
        p[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                p = int_poly_div_exact(&p, &cyclotomic_poly(d));
            }
        }
        p
    };
    let arc = Arc::new(result);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

/// Exact division of integer polynomials with a monic divisor.
fn int_poly_div_exact(dividend: &[BigInt], divisor: &[BigInt]) -> Vec<BigInt> {
    let dd = dividend.len() - 1;
    let dv = divisor.len() - 1;
    assert!(divisor[dv].is_one(), "divisor must be monic");
    assert!(dd >= dv, "dividend degree too small for exact division");
    let mut rem = dividend.to_vec();
    let mut quot = vec![BigInt::zero(); dd - dv + 1];
    for k in (0..=dd - dv).rev() {
        let c = rem[k + dv].clone();
        if !c.is_zero() {
            quot[k] = c.clone();
            for j in 0..=dv {
                let t = &c * &divisor[j];
                rem[k + j] -= t;
            }
        }
    }
    assert!(
        rem.iter().all(|c| c.is_zero()),
        "polynomial division left a remainder; cyclotomic factorization is broken"
    );
    quot
}

/// Shared per-order tables: the minimal polynomial, reductions of ζ powers,
/// Galois data, and the change of basis into the real-subfield presentation.
pub struct OrderData {
    pub n: u32,
    pub phi: usize,
    /// Monic integer minimal polynomial of ζ_n, constant term first.
    pub minimal_poly: Vec<BigInt>,
    /// ζ^k in power-basis coordinates, k = 0..=max(n−1, 2φ−2).
    pow_reduced: Vec<Vec<BigRational>>,
    /// Units of Z/nZ in increasing order; the Galois group indices.
    pub galois_units: Vec<u32>,
    /// One exponent from each conjugate pair {a, n−a}; identity (1) first.
    pub sigma_reps: Vec<u32>,
    /// Columns: coordinates of r^j (j < φ/2), then r^j ζ, where r = ζ + ζ̄.
    real_basis: util::RatMatrix,
    /// Inverse of `real_basis`; maps power coordinates to (α, β) pairs.
    real_basis_inv: util::RatMatrix,
}

impl fmt::Debug for OrderData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderData(n={}, phi={})", self.n, self.phi)
    }
}

fn mul_reduce(pow_reduced: &[Vec<BigRational>], phi: usize, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                prod[i + j] += ca * cb;
            }
        }
    }
    let mut out = vec![BigRational::zero(); phi];
    for (k, c) in prod.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if k < phi {
            out[k] += c;
        } else {
            for (i, r) in pow_reduced[k].iter().enumerate() {
                if !r.is_zero() {
                    out[i] += &c * r;
                }
            }
        }
    }
    out
}

impl OrderData {
    fn build(n: u32) -> Arc<OrderData> {
        let min_poly = cyclotomic_poly(n);
        let phi = min_poly.len() - 1;
        assert!(phi % 2 == 0, "orders below 3 have no complex embeddings");

        let max_k = (n as usize - 1).max(2 * phi - 2);
        let mut pow_reduced: Vec<Vec<BigRational>> = Vec::with_capacity(max_k + 1);
        let mut e0 = vec![BigRational::zero(); phi];
        e0[0] = BigRational::one();
        pow_reduced.push(e0);
        for _ in 1..=max_k {
            let prev = pow_reduced.last().unwrap();
            let mut next = vec![BigRational::zero(); phi + 1];
            for (i, c) in prev.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            let lead = next.pop().unwrap();
            if !lead.is_zero() {
                // x^φ = −(lower terms of the minimal polynomial)
                for (i, m) in min_poly.iter().take(phi).enumerate() {
                    let m = BigRational::from_integer(m.clone());
                    next[i] -= &lead * m;
                }
            }
            pow_reduced.push(next);
        }

        let galois_units: Vec<u32> = (1..n).filter(|a| a.gcd(&n) == 1).collect();
        let mut sigma_reps: Vec<u32> = galois_units
            .iter()
            .map(|&a| a.min(n - a))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        sigma_reps.sort_unstable();
        assert_eq!(sigma_reps.len(), phi / 2, "conjugate pairs must halve the Galois group");
        assert_eq!(sigma_reps[0], 1, "identity embedding must come first");

        // Real-subfield basis: powers of r = ζ + ζ^{n−1}, then the same
        // powers times ζ. Every element splits uniquely as α + βζ with α, β
        // in the real subfield.
        let zeta = pow_reduced[1].clone();
        let mut r = pow_reduced[1].clone();
        for (i, c) in pow_reduced[n as usize - 1].iter().enumerate() {
            r[i] += c;
        }
        let mut r_pows: Vec<Vec<BigRational>> = vec![pow_reduced[0].clone()];
        for _ in 1..phi / 2 {
            let next = mul_reduce(&pow_reduced, phi, r_pows.last().unwrap(), &r);
            r_pows.push(next);
        }
        let mut columns: Vec<Vec<BigRational>> = r_pows.clone();
        for rp in &r_pows {
            columns.push(mul_reduce(&pow_reduced, phi, rp, &zeta));
        }
        let real_basis: util::RatMatrix = (0..phi)
            .map(|row| (0..phi).map(|col| columns[col][row].clone()).collect())
            .collect();
        let real_basis_inv = util::rat_inverse(&real_basis)
            .expect("the real-subfield presentation is always a basis");

        Arc::new(OrderData {
            n,
            phi,
            minimal_poly: min_poly.as_ref().clone(),
            pow_reduced,
            galois_units,
            sigma_reps,
            real_basis,
            real_basis_inv,
        })
    }

    pub fn get(n: u32) -> QtResult<Arc<OrderData>> {
        let cap = max_order();
        if n < 3 || n > cap {
            return Err(QtError::UnsupportedOrder(n, cap));
        }
        static REGISTRY: OnceLock<Mutex<HashMap<u32, Arc<OrderData>>>> = OnceLock::new();
        let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = reg.lock().unwrap();
        Ok(guard.entry(n).or_insert_with(|| OrderData::build(n)).clone())
    }

    /// Coordinates of ζ^k for any integer k (taken mod n).
    pub fn zeta_power_coords(&self, k: i64) -> &[BigRational] {
        let k = k.rem_euclid(self.n as i64) as usize;
        &self.pow_reduced[k]
    }
}

/// An element of Q(ζ_n) with canonical power-basis coordinates.
#[derive(Clone)]
pub struct CycloRat {
    data: Arc<OrderData>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for CycloRat {
    fn eq(&self, other: &Self) -> bool {
        self.data.n == other.data.n && self.coeffs == other.coeffs
    }
}
impl Eq for CycloRat {}

impl std::hash::Hash for CycloRat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.data.n.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycloRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloRat(n={}; {})", self.data.n, self)
    }
}

impl fmt::Display for CycloRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{}", k)?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl CycloRat {
    pub fn zero(n: u32) -> QtResult<Self> {
        let data = OrderData::get(n)?;
        let coeffs = vec![BigRational::zero(); data.phi];
        Ok(CycloRat { data, coeffs })
    }

    pub fn one(n: u32) -> QtResult<Self> {
        Self::from_rational(n, BigRational::one())
    }

    pub fn zeta(n: u32) -> QtResult<Self> {
        Self::zeta_pow(n, 1)
    }

    /// ζ_n^k for any integer exponent.
    pub fn zeta_pow(n: u32, k: i64) -> QtResult<Self> {
        let data = OrderData::get(n)?;
        let coeffs = data.zeta_power_coords(k).to_vec();
        Ok(CycloRat { data, coeffs })
    }

    pub fn from_rational(n: u32, q: BigRational) -> QtResult<Self> {
        let data = OrderData::get(n)?;
        let mut coeffs = vec![BigRational::zero(); data.phi];
        coeffs[0] = q;
        Ok(CycloRat { data, coeffs })
    }

    pub fn from_integer(n: u32, v: i64) -> QtResult<Self> {
        Self::from_rational(n, rat(v))
    }

    /// Element Σ coeffs[k]·ζ^k; the slice may be any length up to n and is
    /// reduced into the power basis.
    pub fn from_zeta_coeffs(n: u32, coeffs: &[BigRational]) -> QtResult<Self> {
        let data = OrderData::get(n)?;
        if coeffs.len() > n as usize {
            return Err(QtError::BadArgument(format!(
                "{} coefficients given, but exponents only range over 0..{}",
                coeffs.len(),
                n
            )));
        }
        let mut out = vec![BigRational::zero(); data.phi];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, r) in data.zeta_power_coords(k as i64).iter().enumerate() {
                if !r.is_zero() {
                    out[i] += c * r;
                }
            }
        }
        Ok(CycloRat { data, coeffs: out })
    }

    pub fn from_integer_coeffs(n: u32, coeffs: &[i64]) -> QtResult<Self> {
        let v: Vec<BigRational> = coeffs.iter().map(|&c| rat(c)).collect();
        Self::from_zeta_coeffs(n, &v)
    }

    pub fn order(&self) -> u32 {
        self.data.n
    }

    pub fn phi(&self) -> usize {
        self.data.phi
    }

    pub fn order_data(&self) -> &Arc<OrderData> {
        &self.data
    }

    /// Canonical power-basis coordinates (length φ(n)).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// All coordinates are integers, i.e. the element lies in Z[ζ_n].
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    fn assert_same_order(&self, other: &Self) {
        assert_eq!(
            self.data.n, other.data.n,
            "elements of different cyclotomic orders cannot be combined; lift first"
        );
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * q).collect();
        CycloRat { data: self.data.clone(), coeffs }
    }

    /// Galois action ζ ↦ ζ^a; errors unless gcd(a, n) = 1.
    pub fn galois(&self, a: u32) -> QtResult<Self> {
        let n = self.data.n;
        if a.gcd(&n) != 1 {
            return Err(QtError::BadArgument(format!(
                "exponent {} is not a unit modulo {}",
                a, n
            )));
        }
        let mut out = vec![BigRational::zero(); self.data.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let target = ((a as u64 * k as u64) % n as u64) as i64;
            for (i, r) in self.data.zeta_power_coords(target).iter().enumerate() {
                if !r.is_zero() {
                    out[i] += c * r;
                }
            }
        }
        Ok(CycloRat { data: self.data.clone(), coeffs: out })
    }

    /// Complex conjugation ζ ↦ ζ^{n−1}.
    pub fn conj(&self) -> Self {
        self.galois(self.data.n - 1)
            .expect("n−1 is always a unit modulo n")
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// N_{Q(ζ)/Q}: the product over the full Galois orbit; always rational.
    pub fn rational_norm(&self) -> BigRational {
        let mut acc = self.clone();
        for &a in &self.data.galois_units {
            if a != 1 {
                acc = &acc * &self.galois(a).unwrap();
            }
        }
        acc.to_rational()
            .expect("a full Galois-orbit product must be rational")
    }

    /// Multiplicative inverse; None for zero. Computed as the product of the
    /// nontrivial conjugates divided by the rational norm.
    pub fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut num = CycloRat::one(self.data.n).unwrap();
        for &a in &self.data.galois_units {
            if a != 1 {
                num = &num * &self.galois(a).unwrap();
            }
        }
        let norm = (self * &num)
            .to_rational()
            .expect("norm computation must land in Q");
        assert!(!norm.is_zero(), "nonzero element has nonzero norm");
        Some(num.scale(&norm.recip()))
    }

    pub fn inv(&self) -> Self {
        self.try_inv().expect("attempted to invert zero")
    }

    /// z · conj(z); real and nonnegative in every embedding.
    pub fn abs_square(&self) -> Self {
        self * &self.conj()
    }

    /// Split z = α + βζ with α, β in the real subfield; returns the
    /// coordinate vectors of α and β over the powers of ζ + ζ̄.
    pub fn real_decompose(&self) -> (Vec<BigRational>, Vec<BigRational>) {
        let y = util::rat_mat_vec(&self.data.real_basis_inv, &self.coeffs);
        let half = self.data.phi / 2;
        (y[..half].to_vec(), y[half..].to_vec())
    }

    /// Inverse of `real_decompose`.
    pub fn from_real_pair(n: u32, alpha: &[BigRational], beta: &[BigRational]) -> QtResult<Self> {
        let data = OrderData::get(n)?;
        let half = data.phi / 2;
        if alpha.len() != half || beta.len() != half {
            return Err(QtError::BadArgument(format!(
                "real pair needs {} + {} coordinates",
                half, half
            )));
        }
        let mut y = alpha.to_vec();
        y.extend_from_slice(beta);
        let coeffs = util::rat_mat_vec(&data.real_basis, &y);
        Ok(CycloRat { data, coeffs })
    }

    /// The φ(n)/2 coordinates of an element over the combined real basis:
    /// first the α block, then the β block.
    pub fn real_basis_coords(&self) -> Vec<BigRational> {
        util::rat_mat_vec(&self.data.real_basis_inv, &self.coeffs)
    }

    /// σ_j as a double-precision complex number, 1-indexed over the
    /// conjugate-pair representatives (σ_1 = identity).
    pub fn embed(&self, j: usize) -> (f64, f64) {
        assert!(
            j >= 1 && j <= self.data.phi / 2,
            "embedding index {} out of range 1..={}",
            j,
            self.data.phi / 2
        );
        let a = self.data.sigma_reps[j - 1];
        let n = self.data.n as u64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().expect("coefficient out of f64 range");
            let ang = 2.0 * std::f64::consts::PI * ((a as u64 * k as u64) % n) as f64 / n as f64;
            re += c * ang.cos();
            im += c * ang.sin();
        }
        (re, im)
    }

    pub fn embeddings(&self) -> Vec<(f64, f64)> {
        (1..=self.data.phi / 2).map(|j| self.embed(j)).collect()
    }

    /// Reinterpret in Q(ζ_m) for n | m via ζ_n = ζ_m^{m/n}.
    pub fn lift(&self, m: u32) -> QtResult<Self> {
        let n = self.data.n;
        if m % n != 0 {
            return Err(QtError::BadArgument(format!(
                "cannot lift from order {} to non-multiple {}",
                n, m
            )));
        }
        if m == n {
            return Ok(self.clone());
        }
        let data = OrderData::get(m)?;
        let step = (m / n) as i64;
        let mut out = vec![BigRational::zero(); data.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, r) in data.zeta_power_coords(k as i64 * step).iter().enumerate() {
                if !r.is_zero() {
                    out[i] += c * r;
                }
            }
        }
        Ok(CycloRat { data, coeffs: out })
    }

    /// Express this element in the subfield Q(ζ_n) if it lies there
    /// (n must divide the current order). Verified by lifting back.
    pub fn descend(&self, n: u32) -> Option<Self> {
        let m = self.data.n;
        if m % n != 0 {
            return None;
        }
        if m == n {
            return Some(self.clone());
        }
        let sub = OrderData::get(n).ok()?;
        // Columns: coordinates in K_m of each power-basis element of K_n.
        let cols: Vec<CycloRat> = (0..sub.phi)
            .map(|k| {
                CycloRat {
                    data: sub.clone(),
                    coeffs: sub.zeta_power_coords(k as i64).to_vec(),
                }
                .lift(m)
                .unwrap()
            })
            .collect();
        let a: util::RatMatrix = (0..self.data.phi)
            .map(|row| cols.iter().map(|c| c.coeffs[row].clone()).collect())
            .collect();
        let x = util::rat_solve_tall(&a, &self.coeffs)?;
        let candidate = CycloRat { data: sub, coeffs: x };
        if candidate.lift(m).unwrap() == *self {
            Some(candidate)
        } else {
            None
        }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait for &CycloRat {
            type Output = CycloRat;
            fn $method(self, rhs: &CycloRat) -> CycloRat {
                self.assert_same_order(rhs);
                let coeffs = self
                    .coeffs
                    .iter()
                    .zip(&rhs.coeffs)
                    .map(|(a, b)| a $op b)
                    .collect();
                CycloRat { data: self.data.clone(), coeffs }
            }
        }
        impl std::ops::$trait for CycloRat {
            type Output = CycloRat;
            fn $method(self, rhs: CycloRat) -> CycloRat {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&CycloRat> for CycloRat {
            type Output = CycloRat;
            fn $method(self, rhs: &CycloRat) -> CycloRat {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<CycloRat> for &CycloRat {
            type Output = CycloRat;
            fn $method(self, rhs: CycloRat) -> CycloRat {
                self.$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);

impl std::ops::Mul for &CycloRat {
    type Output = CycloRat;
    fn mul(self, rhs: &CycloRat) -> CycloRat {
        self.assert_same_order(rhs);
        let coeffs = mul_reduce(&self.data.pow_reduced, self.data.phi, &self.coeffs, &rhs.coeffs);
        CycloRat { data: self.data.clone(), coeffs }
    }
}

impl std::ops::Mul for CycloRat {
    type Output = CycloRat;
    fn mul(self, rhs: CycloRat) -> CycloRat {
        &self * &rhs
    }
}

impl std::ops::Mul<&CycloRat> for CycloRat {
    type Output = CycloRat;
    fn mul(self, rhs: &CycloRat) -> CycloRat {
        &self * rhs
    }
}

impl std::ops::Mul<CycloRat> for &CycloRat {
    type Output = CycloRat;
    fn mul(self, rhs: CycloRat) -> CycloRat {
        self * &rhs
    }
}

impl std::ops::Neg for &CycloRat {
    type Output = CycloRat;
    fn neg(self) -> CycloRat {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        CycloRat { data: self.data.clone(), coeffs }
    }
}

impl std::ops::Neg for CycloRat {
    type Output = CycloRat;
    fn neg(self) -> CycloRat {
        -&self
    }
}

/// An element of the real subfield Q(ζ_n + ζ_n⁻¹), carried together with its
/// coordinates over the powers of ζ + ζ̄.
#[derive(Clone, PartialEq, Eq)]
pub struct RealCycloRat {
    elem: CycloRat,
    coords: Vec<BigRational>,
}

impl fmt::Debug for RealCycloRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealCycloRat(n={}; {})", self.elem.order(), self.elem)
    }
}

impl RealCycloRat {
    /// Accepts exactly the elements fixed by complex conjugation.
    pub fn try_from_cyclo(z: &CycloRat) -> Option<Self> {
        let (alpha, beta) = z.real_decompose();
        if beta.iter().all(|c| c.is_zero()) {
            Some(RealCycloRat { elem: z.clone(), coords: alpha })
        } else {
            None
        }
    }

    pub fn from_rational(n: u32, q: BigRational) -> QtResult<Self> {
        let elem = CycloRat::from_rational(n, q)?;
        Ok(Self::try_from_cyclo(&elem).unwrap())
    }

    /// Build Σ coords[j]·(ζ+ζ̄)^j.
    pub fn from_coords(n: u32, coords: &[BigRational]) -> QtResult<Self> {
        let zeros = vec![BigRational::zero(); coords.len()];
        let elem = CycloRat::from_real_pair(n, coords, &zeros)?;
        Ok(RealCycloRat { elem, coords: coords.to_vec() })
    }

    pub fn order(&self) -> u32 {
        self.elem.order()
    }

    pub fn as_cyclo(&self) -> &CycloRat {
        &self.elem
    }

    /// Coordinates over 1, (ζ+ζ̄), (ζ+ζ̄)², ...
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_rational(&self) -> bool {
        self.elem.is_rational()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.elem.to_rational()
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    /// Norm down to Q: the product of the φ(n)/2 real-subfield conjugates,
    /// realized by applying one Galois map per conjugate pair.
    pub fn field_norm(&self) -> BigRational {
        let data = self.elem.order_data().clone();
        let mut acc = CycloRat::one(data.n).unwrap();
        for &a in &data.sigma_reps {
            acc = &acc * &self.elem.galois(a).unwrap();
        }
        acc.to_rational()
            .expect("norm of a real-subfield element must be rational")
    }

    /// The real values σ_j(x), j = 1..=φ/2.
    pub fn embeddings_real(&self) -> Vec<f64> {
        self.elem
            .embeddings()
            .into_iter()
            .map(|(re, im)| {
                debug_assert!(im.abs() < 1e-6, "real-subfield element embedded off-axis");
                re
            })
            .collect()
    }

    pub fn try_inv(&self) -> Option<Self> {
        let inv = self.elem.try_inv()?;
        Some(Self::try_from_cyclo(&inv).expect("inverse of a real element is real"))
    }
}

macro_rules! impl_real_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &RealCycloRat {
            type Output = RealCycloRat;
            fn $method(self, rhs: &RealCycloRat) -> RealCycloRat {
                let elem = std::ops::$trait::$method(&self.elem, &rhs.elem);
                RealCycloRat::try_from_cyclo(&elem)
                    .expect("real subfield is closed under arithmetic")
            }
        }
    };
}

impl_real_binop!(Add, add);
impl_real_binop!(Sub, sub);
impl_real_binop!(Mul, mul);

/// Product of the φ(n)/2 conjugates of a real-subfield element over Q.
pub fn field_norm_real(x: &RealCycloRat) -> BigRational {
    x.field_norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        rat(n)
    }

    #[test]
    fn cyclotomic_polynomials_match_known_tables() {
        let pairs: [(u32, &[i64]); 6] = [
            (3, &[1, 1, 1]),
            (4, &[1, 0, 1]),
            (5, &[1, 1, 1, 1, 1]),
            (8, &[1, 0, 0, 0, 1]),
            (10, &[1, -1, 1, -1, 1]),
            (12, &[1, 0, -1, 0, 1]),
        ];
        for (n, want) in pairs {
            let got = cyclotomic_poly(n);
            let want: Vec<BigInt> = want.iter().map(|&c| BigInt::from(c)).collect();
            assert_eq!(*got, want, "wrong minimal polynomial for order {}", n);
        }
    }

    #[test]
    fn zeta_powers_wrap_around() {
        let z = CycloRat::zeta(8).unwrap();
        let mut acc = CycloRat::one(8).unwrap();
        for _ in 0..8 {
            acc = &acc * &z;
        }
        assert_eq!(acc, CycloRat::one(8).unwrap(), "ζ_8^8 must equal 1");
        let z4 = CycloRat::zeta_pow(8, 4).unwrap();
        assert_eq!(z4, CycloRat::from_integer(8, -1).unwrap(), "ζ_8^4 must equal −1");
    }

    #[test]
    fn inverse_round_trips() {
        let z = CycloRat::from_integer_coeffs(12, &[3, -1, 0, 2]).unwrap();
        let inv = z.try_inv().expect("nonzero element");
        assert_eq!(&z * &inv, CycloRat::one(12).unwrap());
        assert!(CycloRat::zero(7).unwrap().try_inv().is_none());
    }

    #[test]
    fn galois_is_a_ring_map_and_involution_for_conjugation() {
        let a = CycloRat::from_integer_coeffs(5, &[1, 2, 0, -1]).unwrap();
        let b = CycloRat::from_integer_coeffs(5, &[0, 1, 1, 3]).unwrap();
        let g = |z: &CycloRat| z.galois(2).unwrap();
        assert_eq!(g(&(&a * &b)), &g(&a) * &g(&b));
        assert_eq!(g(&(&a + &b)), &g(&a) + &g(&b));
        assert_eq!(a.conj().conj(), a, "conjugation must be an involution");
    }

    #[test]
    fn real_decompose_round_trips_and_detects_reality() {
        let z = CycloRat::from_integer_coeffs(8, &[1, 2, 3, 4]).unwrap();
        let (alpha, beta) = z.real_decompose();
        let back = CycloRat::from_real_pair(8, &alpha, &beta).unwrap();
        assert_eq!(back, z);

        // ζ + ζ̄ is real; ζ is not.
        let r = &CycloRat::zeta(8).unwrap() + &CycloRat::zeta_pow(8, -1).unwrap();
        assert!(r.is_real());
        assert!(RealCycloRat::try_from_cyclo(&r).is_some());
        assert!(RealCycloRat::try_from_cyclo(&CycloRat::zeta(8).unwrap()).is_none());
    }

    #[test]
    fn norm_of_silver_mean_unit() {
        // 1 + √2 = 1 + ζ_8 + ζ_8^{−1} has norm −1 over Q in the real subfield.
        let one = CycloRat::one(8).unwrap();
        let sqrt2 = &CycloRat::zeta(8).unwrap() + &CycloRat::zeta_pow(8, -1).unwrap();
        let x = RealCycloRat::try_from_cyclo(&(&one + &sqrt2)).unwrap();
        assert_eq!(x.field_norm(), q(-1));
    }

    #[test]
    fn norm_of_pinned_real_quadratic_example() {
        // 2 + (1/2)√3 in the order-12 real subfield has conjugate 2 − (1/2)√3,
        // so the norm is 4 − 3/4 = 13/4.
        let sqrt3 = &CycloRat::zeta(12).unwrap() + &CycloRat::zeta_pow(12, -1).unwrap();
        let x = &CycloRat::from_integer(12, 2).unwrap() + &sqrt3.scale(&BigRational::new(1.into(), 2.into()));
        let x = RealCycloRat::try_from_cyclo(&x).unwrap();
        assert_eq!(x.field_norm(), BigRational::new(13.into(), 4.into()));
    }

    #[test]
    fn rational_norm_is_power_for_rationals() {
        let x = CycloRat::from_rational(5, q(3)).unwrap();
        assert_eq!(x.rational_norm(), q(81), "rational c has norm c^φ(n)");
    }

    #[test]
    fn embeddings_multiply() {
        let a = CycloRat::from_integer_coeffs(12, &[1, 0, -2, 1]).unwrap();
        let b = CycloRat::from_integer_coeffs(12, &[0, 3, 1, 0]).unwrap();
        let prod = &a * &b;
        for j in 1..=2 {
            let (ar, ai) = a.embed(j);
            let (br, bi) = b.embed(j);
            let (pr, pi) = prod.embed(j);
            assert!((pr - (ar * br - ai * bi)).abs() < 1e-9);
            assert!((pi - (ar * bi + ai * br)).abs() < 1e-9);
        }
    }

    #[test]
    fn lift_then_descend_is_identity() {
        let z = CycloRat::from_integer_coeffs(4, &[2, -3]).unwrap();
        let lifted = z.lift(12).unwrap();
        assert_eq!(lifted.descend(4).unwrap(), z);
        // ζ_12 itself is not in Q(i).
        assert!(CycloRat::zeta(12).unwrap().descend(4).is_none());
    }

    #[test]
    fn unsupported_orders_are_rejected() {
        assert!(matches!(CycloRat::zeta(2), Err(QtError::UnsupportedOrder(2, _))));
        assert!(matches!(CycloRat::zeta(1000), Err(QtError::UnsupportedOrder(1000, _))));
    }
}
