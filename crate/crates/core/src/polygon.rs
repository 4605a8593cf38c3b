//! Convex polygons with exact cyclotomic vertices: affinely regular
//! polygon tests, cross ratios of direction slopes, U-polygons (polygons
//! whose vertex set pairs up along every given direction), the switching
//! sets they induce, and determination certificates for convex sets.

use num_rational::BigRational;

use crate::cyclo::{CycloRat, RealCycloRat};
use crate::error::{QtError, QtResult};
use crate::exact::cross_sign;
use crate::model_set::FinitePointSet;
use crate::valuation::{classify_cross_ratio, CrossRatioClass, CrossRatioVerdict};
use crate::xray::{line_key, xray, Direction};

/// A strictly convex polygon with exact vertices, cyclically ordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonInPlane {
    order: u32,
    vertices: Vec<CycloRat>,
    /// +1 for counterclockwise vertex order, −1 for clockwise.
    orientation: i32,
}

impl PolygonInPlane {
    pub fn new(order: u32, vertices: Vec<CycloRat>) -> QtResult<Self> {
        if vertices.len() < 3 {
            return Err(QtError::BadArgument("a polygon needs at least 3 vertices".into()));
        }
        for v in &vertices {
            if v.order() != order {
                return Err(QtError::OrderMismatch { expected: order, found: v.order() });
            }
        }
        let m = vertices.len();
        let mut orientation = 0i32;
        for i in 0..m {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % m];
            let c = &vertices[(i + 2) % m];
            let s = cross_sign(&(b - a), &(c - b));
            if s == 0 {
                return Err(QtError::BadArgument(format!(
                    "vertices {}, {}, {} are collinear or repeated: not strictly convex",
                    i,
                    (i + 1) % m,
                    (i + 2) % m
                )));
            }
            if orientation == 0 {
                orientation = s;
            } else if orientation != s {
                return Err(QtError::BadArgument(
                    "vertex sequence changes turning direction: not convex".into(),
                ));
            }
        }
        Ok(PolygonInPlane { order, vertices, orientation })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn vertices(&self) -> &[CycloRat] {
        &self.vertices
    }

    /// Exact test for membership in the closed polygonal region.
    pub fn contains(&self, z: &CycloRat) -> QtResult<bool> {
        if z.order() != self.order {
            return Err(QtError::OrderMismatch { expected: self.order, found: z.order() });
        }
        let m = self.vertices.len();
        for i in 0..m {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % m];
            if self.orientation * cross_sign(&(b - a), &(z - a)) < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Sort directions by their planar angle in [0, π), using only exact sign
/// computations: a precedes b exactly when the rotation from a to b stays
/// inside the upper half turn.
pub fn sort_directions_by_angle(dirs: &mut [Direction]) {
    dirs.sort_by(|a, b| match cross_sign(a.rep(), b.rep()) {
        s if s > 0 => std::cmp::Ordering::Less,
        s if s < 0 => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal,
    });
}

/// Exact cross ratio of the four direction slopes, which lives in the real
/// subfield. The directions must be pairwise non-parallel and already
/// sorted by increasing angle (see `sort_directions_by_angle`).
pub fn cross_ratio(dirs: &[Direction]) -> QtResult<RealCycloRat> {
    if dirs.len() != 4 {
        return Err(QtError::BadArgument(format!(
            "cross ratios take exactly 4 directions, got {}",
            dirs.len()
        )));
    }
    let n = dirs[0].order();
    for d in dirs {
        if d.order() != n {
            return Err(QtError::OrderMismatch { expected: n, found: d.order() });
        }
    }
    for i in 0..4 {
        for j in 0..i {
            match cross_sign(dirs[j].rep(), dirs[i].rep()) {
                0 => {
                    return Err(QtError::ParallelDirections(format!(
                        "{} and {}",
                        dirs[j], dirs[i]
                    )))
                }
                s if s < 0 => {
                    return Err(QtError::BadArgument(
                        "directions must be sorted by increasing angle".into(),
                    ))
                }
                _ => {}
            }
        }
    }
    // 2i·Im(z̄ᵢzⱼ) as an exact element; the 2i factors cancel in the ratio
    let det = |i: usize, j: usize| {
        let w = &dirs[i].rep().conj() * dirs[j].rep();
        &w - &w.conj()
    };
    let num = &det(0, 2) * &det(1, 3);
    let den = &det(1, 2) * &det(0, 3);
    let value = &num * &den.try_inv().expect("non-parallel directions give nonzero determinants");
    Ok(RealCycloRat::try_from_cyclo(&value)
        .expect("a cross ratio of slopes always lies in the real subfield"))
}

/// Whether the lattice of the given order contains an affinely regular
/// m-gon: true exactly for m ∈ {3,4,6}, m dividing n, or m = 2d with d an
/// odd divisor of n.
pub fn affinely_regular_exists(m: u32, n: u32) -> QtResult<bool> {
    if m < 3 || n < 3 {
        return Err(QtError::BadArgument("both the polygon and the order need size ≥ 3".into()));
    }
    if matches!(m, 3 | 4 | 6) || n % m == 0 {
        return Ok(true);
    }
    Ok(m % 2 == 0 && (m / 2) % 2 == 1 && n % (m / 2) == 0)
}

/// An affinely regular m-gon with vertices in the lattice of order n.
pub fn affine_regular_witness(m: u32, n: u32) -> QtResult<PolygonInPlane> {
    if !affinely_regular_exists(m, n)? {
        return Err(QtError::NotFound(format!(
            "no affinely regular {}-gon exists in order {}",
            m, n
        )));
    }
    let verts: Vec<CycloRat> = if n % m == 0 {
        // the regular m-gon of m-th roots of unity
        (0..m).map(|j| CycloRat::zeta_pow(n, (j * (n / m)) as i64)).collect::<QtResult<_>>()?
    } else if m % 2 == 0 && (m / 2) % 2 == 1 && n % (m / 2) == 0 {
        // m = 2d, d odd: the primitive 2d-th root is −ζ_d^{(d+1)/2}
        let d = m / 2;
        let step = (d + 1) / 2 * (n / d);
        (0..m)
            .map(|j| {
                let z = CycloRat::zeta_pow(n, (j * step) as i64)?;
                Ok(if j % 2 == 1 { -&z } else { z })
            })
            .collect::<QtResult<_>>()?
    } else {
        // m ∈ {3, 4, 6}: linear image of the regular m-gon under 1 ↦ 1,
        // primitive m-th root ↦ ζ_n; exact integer coordinates per power
        let pairs: &[(i64, i64)] = match m {
            3 => &[(1, 0), (0, 1), (-1, -1)],
            4 => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
            6 => &[(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)],
            _ => unreachable!("non-special m handled above"),
        };
        let zeta = CycloRat::zeta(n)?;
        pairs
            .iter()
            .map(|&(a, b)| {
                Ok(&CycloRat::from_rational(n, BigRational::from_integer(a.into()))?
                    + &zeta.scale(&BigRational::from_integer(b.into())))
            })
            .collect::<QtResult<_>>()?
    };
    for v in &verts {
        assert!(v.is_integral(), "witness vertices must be lattice points");
    }
    PolygonInPlane::new(n, verts)
}

/// True when every line through a vertex in any of the given directions
/// meets a second vertex — the polygon's vertices then pair up and the set
/// cannot be pinned down by X-rays along these directions.
pub fn is_u_polygon(p: &PolygonInPlane, dirs: &[Direction]) -> QtResult<bool> {
    for u in dirs {
        if u.order() != p.order() {
            return Err(QtError::OrderMismatch { expected: p.order(), found: u.order() });
        }
        let keys: Vec<_> =
            p.vertices().iter().map(|v| line_key(v, u)).collect::<QtResult<_>>()?;
        for (i, k) in keys.iter().enumerate() {
            if !keys.iter().enumerate().any(|(j, k2)| j != i && k2 == k) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Build a polygon that pairs up along each of the given nonzero elements
/// (at most three, pairwise non-parallel). For one or two elements a
/// parallelogram does it; three need the hexagon with side lengths given by
/// the three pairwise determinants.
pub fn build_u_polygon(elements: &[CycloRat]) -> QtResult<PolygonInPlane> {
    if elements.is_empty() || elements.len() > 3 {
        return Err(QtError::BadArgument(format!(
            "constructive witnesses exist for 1..=3 directions, got {}",
            elements.len()
        )));
    }
    let n = elements[0].order();
    let mut dirs: Vec<Direction> = Vec::new();
    for e in elements {
        if e.order() != n {
            return Err(QtError::OrderMismatch { expected: n, found: e.order() });
        }
        let d = Direction::new(e)?;
        if dirs.contains(&d) {
            return Err(QtError::ParallelDirections(format!("{:?}", e)));
        }
        dirs.push(d);
    }
    sort_directions_by_angle(&mut dirs);

    let zero = CycloRat::zero(n)?;
    let verts: Vec<CycloRat> = match dirs.len() {
        1 => {
            // parallelogram spanned by the representative and a rotated copy
            let o = dirs[0].rep().clone();
            let w = &o * &CycloRat::zeta(n)?;
            vec![zero.clone(), o.clone(), &o + &w, w]
        }
        2 => {
            let o1 = dirs[0].rep().clone();
            let o2 = dirs[1].rep().clone();
            vec![zero.clone(), o1.clone(), &o1 + &o2, o2]
        }
        3 => {
            // split each oᵢ as αᵢ + βᵢζ with real αᵢ, βᵢ; the determinants
            // h = α₂β₃−α₃β₂, k = α₁β₃−α₃β₁, l = α₁β₂−α₂β₁ are positive in
            // angle order and make every vertex line hit a partner vertex
            let split = |d: &Direction| -> QtResult<(CycloRat, CycloRat)> {
                let (a, b) = d.rep().real_decompose();
                let half = a.len();
                let zeros = vec![BigRational::from_integer(0.into()); half];
                Ok((
                    CycloRat::from_real_pair(n, &a, &zeros)?,
                    CycloRat::from_real_pair(n, &b, &zeros)?,
                ))
            };
            let (a1, b1) = split(&dirs[0])?;
            let (a2, b2) = split(&dirs[1])?;
            let (a3, b3) = split(&dirs[2])?;
            let h = &(&a2 * &b3) - &(&a3 * &b2);
            let k = &(&a1 * &b3) - &(&a3 * &b1);
            let l = &(&a1 * &b2) - &(&a2 * &b1);
            let s1 = &h * dirs[0].rep();
            let s2 = &k * dirs[1].rep();
            let s3 = &l * dirs[2].rep();
            let v1 = s1.clone();
            let v2 = &s1 + &s2;
            let v3 = &v2 + &s3;
            let v4 = &v3 - &s1;
            let v5 = &v3 - &v2;
            vec![zero.clone(), v1, v2, v3, v4, v5]
        }
        _ => unreachable!(),
    };
    let p = PolygonInPlane::new(n, verts).map_err(|e| {
        QtError::BadArgument(format!("hexagon construction degenerated: {}", e))
    })?;
    debug_assert!(is_u_polygon(&p, &dirs)?, "construction must pair up along every direction");
    Ok(p)
}

/// Split a U-polygon's vertices into the two alternating classes and attach
/// the surrounding lattice points: the two results are different convex
/// subsets of Λ with identical X-rays along every direction of U.
pub fn u_polygon_switch_sets(
    p: &PolygonInPlane,
    dirs: &[Direction],
    lambda: &FinitePointSet,
) -> QtResult<(FinitePointSet, FinitePointSet)> {
    if lambda.order() != p.order() {
        return Err(QtError::OrderMismatch { expected: p.order(), found: lambda.order() });
    }
    if !is_u_polygon(p, dirs)? {
        return Err(QtError::BadArgument(
            "the polygon does not pair up along the given directions".into(),
        ));
    }
    if p.vertices().len() % 2 != 0 {
        return Err(QtError::BadArgument(
            "alternating vertex classes need an even vertex count".into(),
        ));
    }
    let realized = lambda.realized();
    for v in p.vertices() {
        if !realized.contains(v) {
            return Err(QtError::BadArgument(format!(
                "polygon vertex {:?} is not a point of the ambient set",
                v
            )));
        }
    }
    let t = lambda.translation().clone();
    let even: Vec<CycloRat> = p.vertices().iter().step_by(2).cloned().collect();
    let odd: Vec<CycloRat> = p.vertices().iter().skip(1).step_by(2).cloned().collect();
    let mut core: Vec<CycloRat> = Vec::new();
    for z in &realized {
        if p.contains(z)? && !p.vertices().contains(z) {
            core.push(z.clone());
        }
    }
    let to_set = |extra: &[CycloRat]| -> QtResult<FinitePointSet> {
        let pts: Vec<CycloRat> =
            core.iter().chain(extra.iter()).map(|z| z - &t).collect();
        FinitePointSet::new(lambda.order(), t.clone(), pts)
    };
    let f1 = to_set(&even)?;
    let f2 = to_set(&odd)?;
    // the two sets must be indistinguishable by X-rays along U; each
    // excluded vertex is an extreme point of the polygon, so the convex
    // hulls intersect the ambient set in exactly these point sets
    for u in dirs {
        assert_eq!(
            xray(&f1, u)?,
            xray(&f2, u)?,
            "alternating vertex classes must balance along {}",
            u
        );
    }
    Ok((f1, f2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Verdict {
    Determined,
    NotDetermined,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CertificateReason {
    /// Up to three directions never determine convex sets.
    CardinalityLE3,
    /// An explicit polygon pairs up along every direction.
    UPolygonWitness,
    /// A four-subset's rational cross ratio avoids the five admissible values.
    N1Excluded,
    /// A four-subset's cross-ratio norm avoids the quadratic exclusion set.
    N2Excluded,
    /// A four-subset's cross-ratio norm fails the two-prime numerator test.
    TwoPrimeExcluded,
    /// Seven or more directions with every cross ratio rational.
    Card7InU4Q,
    /// Every test came back inside its exclusion set; no verdict possible.
    CrossRatioInExclusionSet,
}

/// Outcome of the convex-determination analysis for a direction set.
#[derive(Clone, Debug)]
pub struct DeterminationCertificate {
    pub directions: Vec<Direction>,
    pub verdict: Verdict,
    pub reason: CertificateReason,
    pub witness: Option<PolygonInPlane>,
    /// The cross-ratio classification that produced a Determined verdict.
    pub classification: Option<CrossRatioVerdict>,
}

/// The two direction families with hand-built U-polygon witnesses beyond
/// three directions: a six-direction family available in orders 3, 4, 5, 8
/// (dodecagon witness) and a four-direction family in order 12 (octagon
/// witness).
fn known_u_polygon_family(dirs: &[Direction], n: u32) -> QtResult<Option<PolygonInPlane>> {
    let ip = |coeffs: &[i64]| CycloRat::from_integer_coeffs(n, coeffs);
    let pad = |a: i64, b: i64| -> Vec<i64> {
        let phi = crate::cyclo::OrderData::get(n).map(|d| d.phi as usize).unwrap_or(2);
        let mut v = vec![0i64; phi.max(2)];
        v[0] = a;
        v[1] = b;
        v
    };
    let family: Option<(Vec<(i64, i64)>, Vec<(i64, i64)>)> = if matches!(n, 3 | 4 | 5 | 8) {
        Some((
            vec![(1, 0), (2, 1), (1, 1), (1, 2), (0, 1), (-1, 1)],
            vec![(3, 1), (3, 2), (2, 3), (1, 3), (-1, 2), (-2, 1)],
        ))
    } else if n == 12 {
        Some((
            vec![(1, -1), (1, 0), (1, 1), (0, 1)],
            vec![(1, 0), (0, 1), (-1, 1), (-2, 0), (-2, -1), (-1, -2), (0, -2), (1, -1)],
        ))
    } else {
        None
    };
    let Some((family_dirs, witness_halves)) = family else {
        return Ok(None);
    };
    if dirs.len() != family_dirs.len() {
        return Ok(None);
    }
    let mut family_dirs_built = Vec::new();
    for (a, b) in &family_dirs {
        family_dirs_built.push(Direction::new(&ip(&pad(*a, *b))?)?);
    }
    let all_present = family_dirs_built.iter().all(|fd| dirs.contains(fd))
        && dirs.iter().all(|d| family_dirs_built.contains(d));
    if !all_present {
        return Ok(None);
    }
    let verts: Vec<CycloRat> = if n == 12 {
        witness_halves
            .iter()
            .map(|&(a, b)| ip(&pad(a, b)))
            .collect::<QtResult<_>>()?
    } else {
        let halves: Vec<CycloRat> = witness_halves
            .iter()
            .map(|&(a, b)| ip(&pad(a, b)))
            .collect::<QtResult<_>>()?;
        halves.iter().cloned().chain(halves.iter().map(|v| -v)).collect()
    };
    let p = PolygonInPlane::new(n, verts)?;
    debug_assert!(is_u_polygon(&p, dirs)?);
    Ok(Some(p))
}

fn four_subsets(len: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..len {
        for b in (a + 1)..len {
            for c in (b + 1)..len {
                for d in (c + 1)..len {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Decide, as far as the theory allows, whether X-rays along the given
/// directions pin down every convex lattice set. Determinations come from
/// cross-ratio exclusions or from seven rational-cross-ratio directions;
/// non-determinations require an explicit polygon witness.
pub fn certify_convex_determination(
    dirs: &[Direction],
    n: u32,
) -> QtResult<DeterminationCertificate> {
    for d in dirs {
        if d.order() != n {
            return Err(QtError::OrderMismatch { expected: n, found: d.order() });
        }
    }
    for i in 0..dirs.len() {
        for j in 0..i {
            if dirs[i] == dirs[j] {
                return Err(QtError::ParallelDirections(format!(
                    "{} and {}",
                    dirs[j], dirs[i]
                )));
            }
        }
    }
    let mut sorted = dirs.to_vec();
    sort_directions_by_angle(&mut sorted);

    if sorted.len() <= 3 {
        let reps: Vec<CycloRat> = sorted.iter().map(|d| d.rep().clone()).collect();
        let witness = build_u_polygon(&reps)?;
        return Ok(DeterminationCertificate {
            directions: sorted,
            verdict: Verdict::NotDetermined,
            reason: CertificateReason::CardinalityLE3,
            witness: Some(witness),
            classification: None,
        });
    }

    if let Some(witness) = known_u_polygon_family(&sorted, n)? {
        return Ok(DeterminationCertificate {
            directions: sorted,
            verdict: Verdict::NotDetermined,
            reason: CertificateReason::UPolygonWitness,
            witness: Some(witness),
            classification: None,
        });
    }

    let mut all_rational = true;
    for idx in four_subsets(sorted.len()) {
        let sub: Vec<Direction> = idx.iter().map(|&i| sorted[i].clone()).collect();
        let x = cross_ratio(&sub)?;
        if x.to_rational().is_none() {
            all_rational = false;
        }
        let verdict = classify_cross_ratio(&x, n)?;
        let reason = match verdict.class {
            CrossRatioClass::DeterminedByN1 => Some(CertificateReason::N1Excluded),
            CrossRatioClass::DeterminedByN2 => Some(CertificateReason::N2Excluded),
            CrossRatioClass::DeterminedByTwoPrime => Some(CertificateReason::TwoPrimeExcluded),
            CrossRatioClass::Inconclusive => None,
        };
        if let Some(reason) = reason {
            return Ok(DeterminationCertificate {
                directions: sorted,
                verdict: Verdict::Determined,
                reason,
                witness: None,
                classification: Some(verdict),
            });
        }
    }

    if sorted.len() >= 7 && all_rational {
        return Ok(DeterminationCertificate {
            directions: sorted,
            verdict: Verdict::Determined,
            reason: CertificateReason::Card7InU4Q,
            witness: None,
            classification: None,
        });
    }

    Ok(DeterminationCertificate {
        directions: sorted,
        verdict: Verdict::Inconclusive,
        reason: CertificateReason::CrossRatioInExclusionSet,
        witness: None,
        classification: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ip(n: u32, coeffs: &[i64]) -> CycloRat {
        CycloRat::from_integer_coeffs(n, coeffs).unwrap()
    }

    fn dir(n: u32, coeffs: &[i64]) -> Direction {
        Direction::new(&ip(n, coeffs)).unwrap()
    }

    fn brat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn polygon_validation() {
        let square = PolygonInPlane::new(
            4,
            vec![ip(4, &[0, 0]), ip(4, &[1, 0]), ip(4, &[1, 1]), ip(4, &[0, 1])],
        )
        .unwrap();
        assert!(square.contains(&ip(4, &[0, 0])).unwrap(), "vertices belong to the region");
        let half = CycloRat::from_rational(4, brat(1, 2)).unwrap();
        assert!(square.contains(&half).unwrap());
        assert!(!square.contains(&ip(4, &[2, 0])).unwrap());

        let collinear = PolygonInPlane::new(4, vec![ip(4, &[0, 0]), ip(4, &[1, 0]), ip(4, &[2, 0])]);
        assert!(collinear.is_err());
        // clockwise order is accepted
        let cw = PolygonInPlane::new(
            4,
            vec![ip(4, &[0, 0]), ip(4, &[0, 1]), ip(4, &[1, 1]), ip(4, &[1, 0])],
        )
        .unwrap();
        assert!(cw.contains(&half).unwrap());
    }

    #[test]
    fn angle_sorting_is_exact() {
        let mut dirs = vec![dir(8, &[0, 1, 0, 0]), dir(8, &[1, 0, 0, 0]), dir(8, &[1, 1, 0, 0])];
        sort_directions_by_angle(&mut dirs);
        assert_eq!(dirs[0].rep(), &ip(8, &[1, 0, 0, 0]));
        assert_eq!(dirs[1].rep(), &ip(8, &[1, 1, 0, 0]));
        assert_eq!(dirs[2].rep(), &ip(8, &[0, 1, 0, 0]));
    }

    #[test]
    fn cross_ratio_rational_case() {
        // order 4: {1, 2+ζ, ζ, −1+2ζ} sorted by angle gives 5/4
        let dirs = vec![dir(4, &[1, 0]), dir(4, &[2, 1]), dir(4, &[0, 1]), dir(4, &[-1, 2])];
        let x = cross_ratio(&dirs).unwrap();
        assert_eq!(x.to_rational(), Some(brat(5, 4)));

        // unsorted input is rejected
        let bad = vec![dirs[1].clone(), dirs[0].clone(), dirs[2].clone(), dirs[3].clone()];
        assert!(cross_ratio(&bad).is_err());
    }

    #[test]
    fn cross_ratio_order_12_quadratic_value() {
        // {1, 2+ζ, ζ, (2+√3)−ζ}: the last is 2+ζ⁻¹; value 2 + √3/2, norm 13/4
        let one = CycloRat::one(12).unwrap();
        let zeta = CycloRat::zeta(12).unwrap();
        let two = &one + &one;
        let last = &two + &CycloRat::zeta_pow(12, -1).unwrap();
        let mut dirs = vec![
            Direction::new(&one).unwrap(),
            Direction::new(&(&two + &zeta)).unwrap(),
            Direction::new(&zeta).unwrap(),
            Direction::new(&last).unwrap(),
        ];
        sort_directions_by_angle(&mut dirs);
        let x = cross_ratio(&dirs).unwrap();
        let sqrt3 = &zeta + &CycloRat::zeta_pow(12, -1).unwrap();
        let expected = &two + &sqrt3.scale(&brat(1, 2));
        assert_eq!(x.as_cyclo(), &expected);
        assert_eq!(x.field_norm(), brat(13, 4));
    }

    #[test]
    fn affinely_regular_table() {
        assert!(!affinely_regular_exists(5, 8).unwrap());
        assert!(affinely_regular_exists(8, 8).unwrap());
        for n in [3u32, 4, 5, 8, 12, 30] {
            assert!(affinely_regular_exists(6, n).unwrap(), "hexagons embed everywhere");
        }
        assert!(affinely_regular_exists(10, 5).unwrap(), "10 = 2·5 with 5 odd");
        assert!(!affinely_regular_exists(8, 12).unwrap());
        assert!(affinely_regular_exists(12, 12).unwrap());
    }

    #[test]
    fn affine_witnesses_are_lattice_polygons() {
        // triangle in the square lattice: 1, ζ, −1−ζ
        let t = affine_regular_witness(3, 4).unwrap();
        assert_eq!(t.vertices(), &[ip(4, &[1, 0]), ip(4, &[0, 1]), ip(4, &[-1, -1])]);

        // regular octagon for m = n = 8
        let oct = affine_regular_witness(8, 8).unwrap();
        assert_eq!(oct.vertices().len(), 8);
        assert_eq!(oct.vertices()[1], CycloRat::zeta(8).unwrap());

        // hexagon in order 8 via the linear map
        let hexa = affine_regular_witness(6, 8).unwrap();
        assert_eq!(hexa.vertices()[2], ip(8, &[-1, 1, 0, 0]));

        // decagon in order 5: alternating signs of fifth-root powers
        let dec = affine_regular_witness(10, 5).unwrap();
        assert_eq!(dec.vertices().len(), 10);
        let expected = -&CycloRat::zeta_pow(5, 3).unwrap();
        assert_eq!(dec.vertices()[1], expected, "ζ₁₀ = −ζ₅³");

        assert!(affine_regular_witness(5, 8).is_err());
    }

    #[test]
    fn hexagon_construction_matches_hand_computation() {
        let o = vec![ip(4, &[1, 1]), ip(4, &[0, 1]), ip(4, &[-1, 1])];
        let p = build_u_polygon(&o).unwrap();
        let expected: Vec<CycloRat> = [
            [0i64, 0],
            [1, 1],
            [1, 3],
            [0, 4],
            [-1, 3],
            [-1, 1],
        ]
        .iter()
        .map(|c| ip(4, &c[..]))
        .collect();
        assert_eq!(p.vertices(), &expected[..]);
        let dirs: Vec<Direction> = o.iter().map(|e| Direction::new(e).unwrap()).collect();
        assert!(is_u_polygon(&p, &dirs).unwrap());
    }

    #[test]
    fn hexagon_construction_in_order_8() {
        let o = vec![ip(8, &[1, 0, 0, 0]), ip(8, &[1, 1, 0, 0]), ip(8, &[0, 1, 0, 0])];
        let p = build_u_polygon(&o).unwrap();
        let dirs: Vec<Direction> = o.iter().map(|e| Direction::new(e).unwrap()).collect();
        assert!(is_u_polygon(&p, &dirs).unwrap());
    }

    #[test]
    fn parallelogram_witnesses_for_small_direction_sets() {
        let p1 = build_u_polygon(&[ip(8, &[1, 0, 0, 0])]).unwrap();
        assert!(is_u_polygon(&p1, &[dir(8, &[1, 0, 0, 0])]).unwrap());
        let p2 = build_u_polygon(&[ip(8, &[1, 0, 0, 0]), ip(8, &[0, 1, 0, 0])]).unwrap();
        assert!(
            is_u_polygon(&p2, &[dir(8, &[1, 0, 0, 0]), dir(8, &[0, 1, 0, 0])]).unwrap()
        );
    }

    #[test]
    fn triangles_are_never_u_polygons() {
        let t = PolygonInPlane::new(4, vec![ip(4, &[0, 0]), ip(4, &[1, 0]), ip(4, &[0, 1])])
            .unwrap();
        assert!(!is_u_polygon(&t, &[dir(4, &[1, 0])]).unwrap());
    }

    #[test]
    fn example_dodecagon_is_a_u_polygon_in_order_8() {
        let n = 8;
        let halves: Vec<CycloRat> = [
            [3i64, 1],
            [3, 2],
            [2, 3],
            [1, 3],
            [-1, 2],
            [-2, 1],
        ]
        .iter()
        .map(|c| ip(n, &[c[0], c[1], 0, 0]))
        .collect();
        let verts: Vec<CycloRat> =
            halves.iter().cloned().chain(halves.iter().map(|v| -v)).collect();
        let p = PolygonInPlane::new(n, verts).unwrap();
        let dirs: Vec<Direction> = [[1i64, 0], [2, 1], [1, 1], [1, 2], [0, 1], [-1, 1]]
            .iter()
            .map(|c| dir(n, &[c[0], c[1], 0, 0]))
            .collect();
        assert!(is_u_polygon(&p, &dirs).unwrap());
    }

    #[test]
    fn example_octagon_is_a_u_polygon_in_order_12() {
        let n = 12;
        let verts: Vec<CycloRat> = [
            [1i64, 0],
            [0, 1],
            [-1, 1],
            [-2, 0],
            [-2, -1],
            [-1, -2],
            [0, -2],
            [1, -1],
        ]
        .iter()
        .map(|c| ip(n, &[c[0], c[1], 0, 0]))
        .collect();
        let p = PolygonInPlane::new(n, verts).unwrap();
        let dirs: Vec<Direction> = [[1i64, -1], [1, 0], [1, 1], [0, 1]]
            .iter()
            .map(|c| dir(n, &[c[0], c[1], 0, 0]))
            .collect();
        assert!(is_u_polygon(&p, &dirs).unwrap());
    }

    #[test]
    fn unit_square_switch_sets() {
        let n = 4;
        let square = PolygonInPlane::new(
            n,
            vec![ip(n, &[0, 0]), ip(n, &[1, 0]), ip(n, &[1, 1]), ip(n, &[0, 1])],
        )
        .unwrap();
        let dirs = vec![dir(n, &[1, 0]), dir(n, &[0, 1])];
        let lambda = crate::model_set::generate(
            &crate::model_set::ModelSetSpec::preset("square").unwrap(),
            (0.5, 0.5),
            2.0,
        )
        .unwrap();
        let (f1, f2) = u_polygon_switch_sets(&square, &dirs, &lambda).unwrap();
        assert_eq!(f1.len(), 2);
        assert_eq!(f2.len(), 2);
        assert!(f1.points().contains(&ip(n, &[0, 0])));
        assert!(f1.points().contains(&ip(n, &[1, 1])));
        assert!(f2.points().contains(&ip(n, &[1, 0])));
        assert!(f2.points().contains(&ip(n, &[0, 1])));
    }

    #[test]
    fn certificates_for_small_sets() {
        let n = 8;
        let dirs = vec![dir(n, &[1, 0, 0, 0]), dir(n, &[0, 1, 0, 0]), dir(n, &[1, 1, 0, 0])];
        let cert = certify_convex_determination(&dirs, n).unwrap();
        assert_eq!(cert.verdict, Verdict::NotDetermined);
        assert_eq!(cert.reason, CertificateReason::CardinalityLE3);
        let witness = cert.witness.unwrap();
        assert!(is_u_polygon(&witness, &dirs).unwrap());
    }

    #[test]
    fn certificate_for_the_six_direction_family() {
        let n = 8;
        let dirs: Vec<Direction> = [[1i64, 0], [2, 1], [1, 1], [1, 2], [0, 1], [-1, 1]]
            .iter()
            .map(|c| dir(n, &[c[0], c[1], 0, 0]))
            .collect();
        let cert = certify_convex_determination(&dirs, n).unwrap();
        assert_eq!(cert.verdict, Verdict::NotDetermined);
        assert_eq!(cert.reason, CertificateReason::UPolygonWitness);
        let witness = cert.witness.unwrap();
        assert!(is_u_polygon(&witness, &dirs).unwrap());
    }

    #[test]
    fn certificate_determined_by_norm_exclusion() {
        // the four slopes with cross-ratio norm 18/7 in order 8
        let n = 8;
        let dirs = vec![
            dir(n, &[1, 1, 0, 0]),
            dir(n, &[0, 1, 1, -1]),
            dir(n, &[-1, 0, 0, 1]),
            dir(n, &[-1, -1, 1, 0]),
        ];
        let cert = certify_convex_determination(&dirs, n).unwrap();
        assert_eq!(cert.verdict, Verdict::Determined);
        assert_eq!(cert.reason, CertificateReason::N2Excluded);
        let detail = cert.classification.unwrap();
        assert_eq!(detail.norm, brat(18, 7));
    }

    #[test]
    fn certificate_inconclusive_for_lattice_axes_quadruple() {
        // order 4, cross ratio 4/3 ∈ N₁ and 4/3 passes the two-prime test
        let n = 4;
        let dirs =
            vec![dir(n, &[1, 0]), dir(n, &[1, 1]), dir(n, &[1, 2]), dir(n, &[0, 1])];
        let cert = certify_convex_determination(&dirs, n).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert_eq!(cert.reason, CertificateReason::CrossRatioInExclusionSet);
    }

    #[test]
    fn certificate_seven_rational_directions() {
        let n = 4;
        let dirs = vec![
            dir(n, &[1, 0]),
            dir(n, &[3, 1]),
            dir(n, &[2, 1]),
            dir(n, &[1, 1]),
            dir(n, &[1, 2]),
            dir(n, &[1, 3]),
            dir(n, &[0, 1]),
        ];
        let cert = certify_convex_determination(&dirs, n).unwrap();
        assert_eq!(cert.verdict, Verdict::Determined);
        // either a subset excludes first or the seven-direction cardinality
        // rule fires; both are sound. Pin the actual behavior:
        assert!(matches!(
            cert.reason,
            CertificateReason::Card7InU4Q
                | CertificateReason::N1Excluded
                | CertificateReason::TwoPrimeExcluded
        ));
    }
}
