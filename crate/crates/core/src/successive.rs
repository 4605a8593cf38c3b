//! Choosing a second X-ray direction after seeing the first X-ray.
//!
//! Multiplying the plane by the conjugate of the first direction's
//! representative turns its X-ray lines into horizontal lattice lines, whose
//! second coordinate block is pinned per line. A steep direction −1 + qζ with
//! q beyond four times the radius of those blocks then meets every candidate
//! line at most once, so the second X-ray resolves everything.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::cyclo::{CycloRat, OrderData};
use crate::error::{QtError, QtResult};
use crate::model_set::{FinitePointSet, ModelSetSpec};
use crate::util::f64_inverse;
use crate::xray::{grid, line_key, xray, Direction, LineKey};

/// The chosen second direction together with the data that justified it.
#[derive(Clone, Debug)]
pub struct SecondDirectionResult {
    /// The slope parameter ε₀ = 1/q, exact.
    pub epsilon: BigRational,
    /// Radius of the candidate lines' second coordinate block, measured in
    /// the coefficient metric (0 when every line passes through a real point).
    pub r: f64,
    /// The second direction u′.
    pub direction: Direction,
    /// The auxiliary element o′ = −1 + qζ with u′ parallel to o′·o.
    pub auxiliary: CycloRat,
    pub note: Option<String>,
}

fn check_translation_free(f: &FinitePointSet) -> QtResult<()> {
    if !f.translation().is_zero() {
        return Err(QtError::BadArgument(
            "second-direction search expects an untranslated set: subtract the translation first"
                .into(),
        ));
    }
    Ok(())
}

/// Second coordinate blocks (one per X-ray line) of the points mapped by
/// multiplication with the conjugate representative, deduplicated.
fn line_blocks(f: &FinitePointSet, u: &Direction) -> QtResult<Vec<Vec<BigRational>>> {
    let obar = u.rep().conj();
    let mut blocks: Vec<Vec<BigRational>> = Vec::new();
    for p in f.points() {
        let (_, beta) = (p * &obar).real_decompose();
        if !blocks.contains(&beta) {
            blocks.push(beta);
        }
    }
    Ok(blocks)
}

fn result_for_q(
    n: u32,
    q: i64,
    r: f64,
    u: &Direction,
    note: Option<String>,
) -> QtResult<SecondDirectionResult> {
    let epsilon = BigRational::new(BigInt::one(), BigInt::from(q));
    let auxiliary =
        &CycloRat::zeta(n)?.scale(&BigRational::from_integer(q.into())) - &CycloRat::one(n)?;
    let direction = Direction::new(&(&auxiliary * u.rep()))?;
    Ok(SecondDirectionResult { epsilon, r, direction, auxiliary, note })
}

/// Choose a direction u′ such that, after the X-ray along u has been seen,
/// the candidate grid meets every u′-line in at most one point. The returned
/// ε₀ = 1/q satisfies 0 < ε₀ ≤ min(1/2, 1/(4r)).
pub fn second_direction(f: &FinitePointSet, u: &Direction) -> QtResult<SecondDirectionResult> {
    let n = f.order();
    if u.order() != n {
        return Err(QtError::OrderMismatch { expected: n, found: u.order() });
    }
    check_translation_free(f)?;
    if f.points().is_empty() {
        return result_for_q(n, 2, 0.0, u, Some("empty set: any direction works".into()));
    }
    let mut max_ssq = BigRational::zero();
    for beta in line_blocks(f, u)? {
        let ssq: BigRational = beta.iter().map(|c| c * c).sum();
        if ssq > max_ssq {
            max_ssq = ssq;
        }
    }
    let r = max_ssq.to_f64().unwrap_or(f64::MAX).sqrt();
    let mut q = ((4.0 * 1.01 * r).ceil() as i64).max(2);
    // exact guarantee q ≥ 4r, i.e. q² ≥ 16·r²
    let sixteen = BigRational::from_integer(16.into());
    while BigRational::from_integer(BigInt::from(q * q)) < &sixteen * &max_ssq {
        q += 1;
    }
    result_for_q(n, q, r, u, None)
}

/// The finite candidate set the second-direction contract is tested on: all
/// lattice points on the X-ray support lines of F along u whose first
/// coordinate block stays inside the coefficient bounding box of F's image.
pub fn candidate_grid(f: &FinitePointSet, u: &Direction) -> QtResult<Vec<CycloRat>> {
    let n = f.order();
    if u.order() != n {
        return Err(QtError::OrderMismatch { expected: n, found: u.order() });
    }
    check_translation_free(f)?;
    if f.points().is_empty() {
        return Ok(Vec::new());
    }
    let obar = u.rep().conj();
    let inv_obar = obar.try_inv().expect("direction representatives are nonzero");
    let half = (OrderData::get(n)?.phi) / 2;
    let mut lo = vec![BigInt::zero(); half];
    let mut hi = vec![BigInt::zero(); half];
    let mut first = true;
    for p in f.points() {
        let (alpha, _) = (p * &obar).real_decompose();
        for (i, c) in alpha.iter().enumerate() {
            assert!(c.is_integer(), "lattice points have integer coefficient blocks");
            let v = c.to_integer();
            if first || v < lo[i] {
                lo[i] = v.clone();
            }
            if first || v > hi[i] {
                hi[i] = v;
            }
        }
        first = false;
    }
    let mut out = Vec::new();
    for beta in line_blocks(f, u)? {
        let mut alpha: Vec<BigInt> = lo.clone();
        loop {
            let coords: Vec<BigRational> =
                alpha.iter().map(|a| BigRational::from_integer(a.clone())).collect();
            let w = CycloRat::from_real_pair(n, &coords, &beta)?;
            let z = &w * &inv_obar;
            if z.is_integral() {
                out.push(z);
            }
            // odometer over the box
            let mut i = 0;
            loop {
                if i == half {
                    break;
                }
                alpha[i] += 1;
                if alpha[i] <= hi[i] {
                    break;
                }
                alpha[i] = lo[i].clone();
                i += 1;
            }
            if i == half {
                break;
            }
        }
    }
    Ok(out)
}

/// Largest number of the given points lying on a common line parallel to u.
pub fn max_points_per_line(points: &[CycloRat], u: &Direction) -> QtResult<usize> {
    let mut counts: BTreeMap<LineKey, usize> = BTreeMap::new();
    for z in points {
        *counts.entry(line_key(z, u)?).or_insert(0) += 1;
    }
    Ok(counts.values().copied().max().unwrap_or(0))
}

/// Exhaustively confirm that F is the only subset of its two-direction
/// candidate grid with the given pair of X-rays. Returns None when the grid
/// exceeds `cap` points, Some(true) when F is unique, Some(false) otherwise.
pub fn unique_with_two_xrays(
    f: &FinitePointSet,
    u1: &Direction,
    u2: &Direction,
    cap: usize,
) -> QtResult<Option<bool>> {
    check_translation_free(f)?;
    // competing sets live in the lattice, so non-integral line intersections
    // can never belong to one
    let mut g = grid(f, &[u1.clone(), u2.clone()])?;
    g.retain(|z| z.is_integral());
    if g.len() > cap {
        return Ok(None);
    }
    let target1 = xray(f, u1)?;
    let target2 = xray(f, u2)?;
    // group the grid by first-direction line
    let mut lines: BTreeMap<LineKey, Vec<CycloRat>> = BTreeMap::new();
    for z in &g {
        lines.entry(line_key(z, u1)?).or_default().push(z.clone());
    }
    let mut line_list: Vec<(usize, Vec<(CycloRat, LineKey)>)> = Vec::new();
    for (key, members) in &lines {
        let need = target1.buckets.get(key).copied().unwrap_or(0);
        if need > members.len() {
            return Ok(Some(false));
        }
        let tagged = members
            .iter()
            .map(|z| Ok((z.clone(), line_key(z, u2)?)))
            .collect::<QtResult<Vec<_>>>()?;
        line_list.push((need, tagged));
    }
    let mut budget: BTreeMap<LineKey, usize> = target2.buckets.clone();
    let mut solutions = 0usize;
    fn pick(
        line_list: &[(usize, Vec<(CycloRat, LineKey)>)],
        depth: usize,
        budget: &mut BTreeMap<LineKey, usize>,
        solutions: &mut usize,
    ) {
        if *solutions >= 2 {
            return;
        }
        if depth == line_list.len() {
            if budget.values().all(|&c| c == 0) {
                *solutions += 1;
            }
            return;
        }
        let (need, members) = &line_list[depth];
        // choose `need` members of this line, tracking the second-direction budget
        fn choose(
            members: &[(CycloRat, LineKey)],
            start: usize,
            left: usize,
            line_list: &[(usize, Vec<(CycloRat, LineKey)>)],
            depth: usize,
            budget: &mut BTreeMap<LineKey, usize>,
            solutions: &mut usize,
        ) {
            if left == 0 {
                pick(line_list, depth + 1, budget, solutions);
                return;
            }
            if members.len() - start < left {
                return;
            }
            for i in start..members.len() {
                let key = &members[i].1;
                let available = budget.get(key).copied().unwrap_or(0);
                if available == 0 {
                    continue;
                }
                *budget.get_mut(key).unwrap() -= 1;
                choose(members, i + 1, left - 1, line_list, depth, budget, solutions);
                *budget.get_mut(key).unwrap() += 1;
                if *solutions >= 2 {
                    return;
                }
            }
        }
        choose(members, 0, *need, line_list, depth, budget, solutions);
    }
    pick(&line_list, 0, &mut budget, &mut solutions);
    debug_assert!(solutions >= 1, "the original set always matches its own X-rays");
    Ok(Some(solutions == 1))
}

/// A second direction that works uniformly for every subset of the model set
/// with diameter below `diameter`: the block radius is bounded a priori from
/// the physical diameter and the window extents instead of a concrete set.
pub fn bounded_second_direction(
    spec: &ModelSetSpec,
    diameter: f64,
    u: &Direction,
) -> QtResult<SecondDirectionResult> {
    spec.validate()?;
    let n = spec.order;
    if u.order() != n {
        return Err(QtError::OrderMismatch { expected: n, found: u.order() });
    }
    if !(diameter > 0.0) {
        return Err(QtError::BadArgument("the diameter bound must be positive".into()));
    }
    let data = OrderData::get(n)?;
    let phi = data.phi;
    let half = phi / 2;
    let o = u.rep();

    // per conjugate plane, a bound on |σ_j((z−z′)·ō)| over pairs in scope
    let mut plane_bound = vec![0.0f64; half];
    let (re, im) = o.embed(1);
    plane_bound[0] = diameter * re.hypot(im);
    for j in 1..half {
        let (re, im) = o.embed(j + 1);
        // the window covers the internal difference set up to a factor of two
        let poly = &spec.window[j - 1];
        let circum = poly
            .iter()
            .map(|&(x, y)| x.hypot(y))
            .fold(0.0f64, f64::max);
        let shift = spec.window_shift[j - 1];
        let w = circum + shift.0.hypot(shift.1);
        plane_bound[j] = 2.0 * w * re.hypot(im);
    }
    let v_norm = plane_bound.iter().map(|b| b * b).sum::<f64>().sqrt();

    // coefficient coordinates of the second block are read off through the
    // inverse of the basis embedding matrix; its lower rows give the bound
    let mut basis: Vec<CycloRat> = Vec::with_capacity(phi);
    let c = &CycloRat::zeta(n)? + &CycloRat::zeta_pow(n, -1)?;
    let mut pow = CycloRat::one(n)?;
    for _ in 0..half {
        basis.push(pow.clone());
        pow = &pow * &c;
    }
    let zeta = CycloRat::zeta(n)?;
    for j in 0..half {
        let b = &basis[j] * &zeta;
        basis.push(b);
    }
    let mut a = vec![vec![0.0f64; phi]; phi];
    for (col, b) in basis.iter().enumerate() {
        for j in 0..half {
            let (re, im) = b.embed(j + 1);
            a[2 * j][col] = re;
            a[2 * j + 1][col] = im;
        }
    }
    let inv = f64_inverse(&a)
        .ok_or_else(|| QtError::BadArgument("basis embedding matrix is singular".into()))?;
    let fro: f64 = inv[half..phi]
        .iter()
        .flat_map(|row| row.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();

    let r = 0.5 * fro * v_norm;
    let q = ((4.0 * 1.01 * r).ceil() as i64).max(2);
    result_for_q(n, q, r, u, Some("uniform over all subsets below the diameter bound".into()))
}
