//! Discrete parallel X-rays taken along lattice directions: exact line
//! bookkeeping, grids of candidate points, the unimodular-pair confinement
//! test, and construction of switching pairs (distinct sets with identical
//! X-rays).

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::cyclo::{CycloRat, RealCycloRat};
use crate::error::{QtError, QtResult};
use crate::exact::{cross_sign, sign_im, sign_re};
use crate::model_set::FinitePointSet;
use crate::util::vec_gcd;

/// A direction of sight, stored as a canonical integral representative:
/// denominators cleared, coefficients divided by their gcd, sign chosen so
/// the planar angle lies in [0, π). Two directions compare equal exactly
/// when they are parallel — which canonical coefficients alone cannot
/// decide, since parallel elements may differ by an irrational real unit.
#[derive(Clone, Debug)]
pub struct Direction {
    order: u32,
    rep: CycloRat,
}

impl Direction {
    pub fn new(z: &CycloRat) -> QtResult<Self> {
        if z.is_zero() {
            return Err(QtError::BadArgument("the zero element has no direction".into()));
        }
        let mut denom_lcm = BigInt::one();
        for c in z.coeffs() {
            denom_lcm = num_integer::Integer::lcm(&denom_lcm, c.denom());
        }
        let mut w = z.scale(&BigRational::from(denom_lcm));
        let numers: Vec<BigInt> = w.coeffs().iter().map(|c| c.numer().clone()).collect();
        let g = vec_gcd(&numers);
        if !g.is_one() {
            w = w.scale(&BigRational::new(BigInt::one(), g));
        }
        // sign: strictly below the real axis, or on it pointing left → flip
        let im = sign_im(&w);
        if im < 0 || (im == 0 && sign_re(&w) < 0) {
            w = -&w;
        }
        Ok(Direction { order: z.order(), rep: w })
    }

    /// Direction of the k-th power of ζ.
    pub fn zeta_power(n: u32, k: i64) -> QtResult<Self> {
        Direction::new(&CycloRat::zeta_pow(n, k)?)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The canonical integral representative.
    pub fn rep(&self) -> &CycloRat {
        &self.rep
    }

    /// Planar angle in [0, π); floating point, for ordering only.
    pub fn angle(&self) -> f64 {
        let (x, y) = self.rep.embed(1);
        let a = y.atan2(x);
        if a < 0.0 {
            a + std::f64::consts::PI
        } else {
            a
        }
    }

    pub fn is_parallel_to(&self, other: &Direction) -> bool {
        assert_eq!(self.order, other.order, "directions live in different orders");
        cross_sign(&self.rep, &other.rep) == 0
    }
}

impl PartialEq for Direction {
    fn eq(&self, other: &Self) -> bool {
        self.is_parallel_to(other)
    }
}

impl Eq for Direction {}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "u[{:?}]", self.rep.coeffs())
    }
}

/// Exact label of a line in a fixed direction: for a point z and direction
/// representative o this is zō − z̄o, which is invariant along the line and
/// distinguishes parallel lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineKey(CycloRat);

impl LineKey {
    pub fn value(&self) -> &CycloRat {
        &self.0
    }
}

impl PartialOrd for LineKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LineKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.coeffs().cmp(other.0.coeffs())
    }
}

/// Label of the line through z in direction u.
pub fn line_key(z: &CycloRat, u: &Direction) -> QtResult<LineKey> {
    if z.order() != u.order() {
        return Err(QtError::OrderMismatch { expected: u.order(), found: z.order() });
    }
    let w = z * &u.rep().conj();
    let key = &w - &w.conj();
    debug_assert!((&key + &key.conj()).is_zero(), "line keys are purely imaginary");
    Ok(LineKey(key))
}

/// Histogram of a finite set along one direction: how many points fall on
/// each line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XRaySnapshot {
    pub direction: Direction,
    pub buckets: BTreeMap<LineKey, usize>,
}

impl XRaySnapshot {
    /// Number of points measured.
    pub fn total(&self) -> usize {
        self.buckets.values().sum()
    }

    /// The lines that carry at least one point, multiplicities discarded.
    pub fn support(&self) -> Vec<&LineKey> {
        self.buckets.keys().collect()
    }
}

/// Measure the realized points (translation included) of F along u.
pub fn xray(f: &FinitePointSet, u: &Direction) -> QtResult<XRaySnapshot> {
    if f.order() != u.order() {
        return Err(QtError::OrderMismatch { expected: u.order(), found: f.order() });
    }
    let mut buckets = BTreeMap::new();
    for z in f.realized() {
        *buckets.entry(line_key(&z, u)?).or_insert(0) += 1;
    }
    Ok(XRaySnapshot { direction: u.clone(), buckets })
}

/// All points lying on a support line of every direction: candidates come
/// from intersecting the support lines of the first two directions, then
/// each remaining direction filters by line membership. The result contains
/// the realized set itself and is sorted by coefficients.
pub fn grid(f: &FinitePointSet, dirs: &[Direction]) -> QtResult<Vec<CycloRat>> {
    if dirs.len() < 2 {
        return Err(QtError::BadArgument("a grid needs at least two directions".into()));
    }
    for d in dirs {
        if d.order() != f.order() {
            return Err(QtError::OrderMismatch { expected: f.order(), found: d.order() });
        }
    }
    for i in 0..dirs.len() {
        for j in 0..i {
            if dirs[i].is_parallel_to(&dirs[j]) {
                return Err(QtError::ParallelDirections(format!(
                    "{} and {}",
                    dirs[j], dirs[i]
                )));
            }
        }
    }
    let supports: Vec<Vec<LineKey>> = dirs
        .iter()
        .map(|u| Ok(xray(f, u)?.buckets.into_keys().collect()))
        .collect::<QtResult<_>>()?;

    let o1 = dirs[0].rep();
    let o2 = dirs[1].rep();
    // z with zō₁ − z̄o₁ = κ₁ and zō₂ − z̄o₂ = κ₂:
    // z = (κ₁o₂ − κ₂o₁) / (ō₁o₂ − ō₂o₁)
    let det = &(&o1.conj() * o2) - &(&o2.conj() * o1);
    let det_inv = det.try_inv().expect("non-parallel directions have nonzero determinant");

    let pairs: Vec<(&LineKey, &LineKey)> = supports[0]
        .iter()
        .flat_map(|k1| supports[1].iter().map(move |k2| (k1, k2)))
        .collect();
    let mismatch: Mutex<Option<QtError>> = Mutex::new(None);
    let mut points: Vec<CycloRat> = pairs
        .par_iter()
        .filter_map(|(k1, k2)| {
            let z = &(&(k1.value() * o2) - &(k2.value() * o1)) * &det_inv;
            for (u, support) in dirs.iter().zip(&supports).skip(2) {
                match line_key(&z, u) {
                    Ok(key) => {
                        if support.binary_search(&key).is_err() {
                            return None;
                        }
                    }
                    Err(e) => {
                        *mismatch.lock().unwrap() = Some(e);
                        return None;
                    }
                }
            }
            Some(z)
        })
        .collect();
    if let Some(e) = mismatch.into_inner().unwrap() {
        return Err(e);
    }
    points.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    points.dedup();
    Ok(points)
}

/// Whether the pair (o, o′) has unit determinant in the real subfield when
/// both are split as α + βζ: if so, every grid built on these two
/// directions stays inside the translated lattice.
pub fn is_unimodular_pair(o: &CycloRat, o_prime: &CycloRat) -> QtResult<bool> {
    if o.order() != o_prime.order() {
        return Err(QtError::OrderMismatch { expected: o.order(), found: o_prime.order() });
    }
    let n = o.order();
    let (a1, b1) = o.real_decompose();
    let (a2, b2) = o_prime.real_decompose();
    let elem = |coords: Vec<BigRational>| RealCycloRat::from_coords(n, &coords);
    let (a1, b1) = (elem(a1)?, elem(b1)?);
    let (a2, b2) = (elem(a2)?, elem(b2)?);
    let det = &(&a1 * &b2) - &(&b1 * &a2);
    if det.as_cyclo().is_zero() {
        return Err(QtError::ParallelDirections(format!("{:?} and {:?}", o, o_prime)));
    }
    Ok(det.field_norm().abs().is_one())
}

fn coeff_box(points: &[CycloRat]) -> (Vec<BigRational>, Vec<BigRational>) {
    let phi = points[0].coeffs().len();
    let mut lo = points[0].coeffs().to_vec();
    let mut hi = lo.clone();
    for p in points {
        for (i, c) in p.coeffs().iter().enumerate().take(phi) {
            if c < &lo[i] {
                lo[i] = c.clone();
            }
            if c > &hi[i] {
                hi[i] = c.clone();
            }
        }
    }
    (lo, hi)
}

fn boxes_separated(a: &[CycloRat], b: &[CycloRat]) -> bool {
    let (alo, ahi) = coeff_box(a);
    let (blo, bhi) = coeff_box(b);
    (0..alo.len()).any(|i| ahi[i] < blo[i] || bhi[i] < alo[i])
}

/// Two disjoint sets of size 2^{k−1} with identical X-rays in all k given
/// directions. Each new direction doubles both sets by a translated swap;
/// the translation is an integer multiple of the direction representative,
/// doubled until the coefficient boxes of old and translated parts separate.
pub fn switching_pair(
    dirs: &[Direction],
    n: u32,
) -> QtResult<(FinitePointSet, FinitePointSet)> {
    if dirs.is_empty() {
        return Err(QtError::BadArgument("need at least one direction".into()));
    }
    for d in dirs {
        if d.order() != n {
            return Err(QtError::OrderMismatch { expected: n, found: d.order() });
        }
    }
    for i in 0..dirs.len() {
        for j in 0..i {
            if dirs[i].is_parallel_to(&dirs[j]) {
                return Err(QtError::ParallelDirections(format!(
                    "{} and {}",
                    dirs[j], dirs[i]
                )));
            }
        }
    }
    let mut f: Vec<CycloRat> = vec![CycloRat::zero(n)?];
    let mut fp: Vec<CycloRat> = vec![dirs[0].rep().clone()];
    for u in &dirs[1..] {
        let mut mult = BigRational::one();
        loop {
            let o = u.rep().scale(&mult);
            let old: Vec<CycloRat> = f.iter().chain(fp.iter()).cloned().collect();
            let moved: Vec<CycloRat> = old.iter().map(|z| z + &o).collect();
            if boxes_separated(&old, &moved) {
                let new_f: Vec<CycloRat> =
                    f.iter().cloned().chain(fp.iter().map(|z| z + &o)).collect();
                let new_fp: Vec<CycloRat> =
                    fp.iter().cloned().chain(f.iter().map(|z| z + &o)).collect();
                f = new_f;
                fp = new_fp;
                break;
            }
            mult *= BigRational::from(BigInt::from(2));
        }
    }
    let zero = CycloRat::zero(n)?;
    Ok((
        FinitePointSet::new(n, zero.clone(), f)?,
        FinitePointSet::new(n, zero, fp)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_point(n: u32, coeffs: &[i64]) -> CycloRat {
        CycloRat::from_integer_coeffs(n, coeffs).unwrap()
    }

    fn set_of(n: u32, pts: &[&[i64]]) -> FinitePointSet {
        let points = pts.iter().map(|c| int_point(n, c)).collect();
        FinitePointSet::new(n, CycloRat::zero(n).unwrap(), points).unwrap()
    }

    #[test]
    fn canonical_representative() {
        // −2 − 2ζ reduces to 1 + ζ (gcd 2, flipped into the upper half plane)
        let d = Direction::new(&int_point(8, &[-2, -2, 0, 0])).unwrap();
        assert_eq!(d.rep(), &int_point(8, &[1, 1, 0, 0]));
        // a negative real direction flips to positive
        let d = Direction::new(&int_point(8, &[-3, 0, 0, 0])).unwrap();
        assert_eq!(d.rep(), &int_point(8, &[1, 0, 0, 0]));
        assert!(Direction::new(&CycloRat::zero(8).unwrap()).is_err());
    }

    #[test]
    fn parallel_equality_beats_canonical_coefficients() {
        // 1 and −ζ² − ζ³ (= the golden ratio) are parallel in order 5 yet
        // have different canonical coefficients
        let one = Direction::new(&CycloRat::one(5).unwrap()).unwrap();
        let tau = Direction::new(&int_point(5, &[0, 0, -1, -1])).unwrap();
        assert_ne!(one.rep(), tau.rep());
        assert_eq!(one, tau, "parallelism is the equality");
        let zeta = Direction::zeta_power(5, 1).unwrap();
        assert_ne!(one, zeta);
    }

    #[test]
    fn line_keys_label_lines() {
        let u1 = Direction::new(&CycloRat::one(8).unwrap()).unwrap();
        let zero = CycloRat::zero(8).unwrap();
        let one = CycloRat::one(8).unwrap();
        let zeta = CycloRat::zeta(8).unwrap();
        assert_eq!(line_key(&zero, &u1).unwrap(), line_key(&one, &u1).unwrap());
        let k = line_key(&zeta, &u1).unwrap();
        assert!(!k.value().is_zero());
        let expected = &zeta - &CycloRat::zeta_pow(8, 7).unwrap();
        assert_eq!(k.value(), &expected, "key of ζ against the real axis is ζ − ζ⁷");

        let uz = Direction::zeta_power(4, 1).unwrap();
        let a = CycloRat::one(4).unwrap();
        let b = &a + &CycloRat::zeta(4).unwrap();
        assert_eq!(line_key(&a, &uz).unwrap(), line_key(&b, &uz).unwrap(), "vertical line x=1");
    }

    #[test]
    fn xray_counts() {
        let f = set_of(8, &[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let u1 = Direction::new(&CycloRat::one(8).unwrap()).unwrap();
        let snap = xray(&f, &u1).unwrap();
        assert_eq!(snap.total(), 3);
        let mut counts: Vec<usize> = snap.buckets.values().copied().collect();
        counts.sort_unstable();
        assert_eq!(counts, vec![1, 2], "0 and 1 share the horizontal line");
        assert_eq!(snap.support().len(), 2);

        let empty = set_of(8, &[]);
        assert_eq!(xray(&empty, &u1).unwrap().total(), 0);
    }

    #[test]
    fn grid_completes_the_rectangle() {
        let f = set_of(4, &[&[0, 0], &[1, 1]]);
        let u1 = Direction::new(&CycloRat::one(4).unwrap()).unwrap();
        let uz = Direction::zeta_power(4, 1).unwrap();
        let g = grid(&f, &[u1.clone(), uz.clone()]).unwrap();
        let expect: Vec<CycloRat> =
            [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|c| int_point(4, &c[..])).collect();
        let mut expect = expect;
        expect.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
        assert_eq!(g, expect);

        let single = set_of(4, &[&[0, 0]]);
        assert_eq!(grid(&single, &[u1.clone(), uz.clone()]).unwrap().len(), 1);

        let full = set_of(4, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let g2 = grid(&full, &[u1, uz]).unwrap();
        assert_eq!(g2, expect, "a complete rectangle is its own grid");
    }

    #[test]
    fn grid_contains_the_set() {
        let f = set_of(8, &[&[0, 0, 0, 0], &[1, 2, 0, 0], &[-1, 0, 3, 0], &[2, 2, 2, 2]]);
        let u1 = Direction::new(&CycloRat::one(8).unwrap()).unwrap();
        let uz = Direction::zeta_power(8, 1).unwrap();
        let u3 = Direction::new(&int_point(8, &[1, 1, 0, 0])).unwrap();
        let g = grid(&f, &[u1, uz, u3]).unwrap();
        for z in f.realized() {
            assert!(g.contains(&z), "grid must contain {:?}", z);
        }
    }

    #[test]
    fn unimodular_pairs() {
        let one = CycloRat::one(8).unwrap();
        let zeta = CycloRat::zeta(8).unwrap();
        assert!(is_unimodular_pair(&one, &zeta).unwrap());
        // (ζ+ζ⁻¹)ζ = √2·ζ has determinant √2 against 1, norm −2
        let sqrt2_zeta = &(&zeta + &CycloRat::zeta_pow(8, -1).unwrap()) * &zeta;
        assert!(!is_unimodular_pair(&one, &sqrt2_zeta).unwrap());
        let one_plus_zeta = &one + &zeta;
        assert!(is_unimodular_pair(&one_plus_zeta, &zeta).unwrap());
        // parallel pair: 1 and the golden ratio in order 5
        let tau = int_point(5, &[0, 0, -1, -1]);
        let err = is_unimodular_pair(&CycloRat::one(5).unwrap(), &(-&tau)).unwrap_err();
        assert!(matches!(err, QtError::ParallelDirections(_)));
    }

    #[test]
    fn switching_pairs_have_equal_xrays() {
        for k in 1..=4usize {
            let n = 8;
            let dirs: Vec<Direction> = [
                [1i64, 0, 0, 0],
                [0, 1, 0, 0],
                [1, 1, 0, 0],
                [1, -1, 0, 0],
            ][..k]
                .iter()
                .map(|c| Direction::new(&int_point(n, c)).unwrap())
                .collect();
            let (f, fp) = switching_pair(&dirs, n).unwrap();
            assert_eq!(f.len(), 1 << (k - 1), "k={}", k);
            assert_eq!(fp.len(), 1 << (k - 1));
            for p in f.points() {
                assert!(!fp.points().contains(p), "sets must be disjoint");
            }
            for u in &dirs {
                assert_eq!(xray(&f, u).unwrap(), xray(&fp, u).unwrap(), "k={} u={}", k, u);
            }
        }
    }

    #[test]
    fn switching_k1_square() {
        let u1 = Direction::new(&CycloRat::one(4).unwrap()).unwrap();
        let (f, fp) = switching_pair(&[u1.clone()], 4).unwrap();
        assert_eq!(f.points(), &[CycloRat::zero(4).unwrap()]);
        assert_eq!(fp.points(), &[CycloRat::one(4).unwrap()]);
        assert_eq!(xray(&f, &u1).unwrap(), xray(&fp, &u1).unwrap());
    }

    #[test]
    fn centroids_share_a_line_in_each_direction() {
        let n = 12;
        let dirs: Vec<Direction> = [[1i64, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0]]
            .iter()
            .map(|c| Direction::new(&int_point(n, c)).unwrap())
            .collect();
        let (f, fp) = switching_pair(&dirs, n).unwrap();
        let m = BigRational::new(BigInt::one(), BigInt::from(f.len() as i64));
        let centroid = |s: &FinitePointSet| {
            s.points()
                .iter()
                .fold(CycloRat::zero(n).unwrap(), |acc, p| &acc + p)
                .scale(&m)
        };
        let (c, cp) = (centroid(&f), centroid(&fp));
        // matching X-rays in several non-parallel directions pin the
        // centroid completely
        assert_eq!(c, cp, "three directions force equal centroids");
        for u in &dirs {
            assert_eq!(
                line_key(&c, u).unwrap(),
                line_key(&cp, u).unwrap(),
                "centroids lie on one line along {}",
                u
            );
        }

        // with one direction the centroids differ but share the line
        let (f1, fp1) = switching_pair(&dirs[..1], n).unwrap();
        let m1 = BigRational::one();
        let c1 = f1.points().iter().fold(CycloRat::zero(n).unwrap(), |a, p| &a + p).scale(&m1);
        let cp1 = fp1.points().iter().fold(CycloRat::zero(n).unwrap(), |a, p| &a + p).scale(&m1);
        assert_ne!(c1, cp1);
        assert_eq!(line_key(&c1, &dirs[0]).unwrap(), line_key(&cp1, &dirs[0]).unwrap());
    }
}
