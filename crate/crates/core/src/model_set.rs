//! Cut-and-project point sets: star maps into internal space, polygonal
//! acceptance windows, disk-restricted generation, search for contracting
//! algebraic units, and homothety embeddings of finite sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::cyclo::{CycloRat, OrderData, RealCycloRat};
use crate::error::{QtError, QtResult};
use crate::util::f64_inverse;

/// A planar convex polygon, vertices in positive (counterclockwise) order.
pub type WindowPolygon = Vec<(f64, f64)>;

/// Full description of a cut-and-project set: which Galois automorphisms
/// form the internal-space star map, the acceptance window in each internal
/// plane, an exact translation, and a small window shift that keeps lattice
/// images off the window boundary.
#[derive(Clone, Debug)]
pub struct ModelSetSpec {
    pub order: u32,
    /// Exponent of ζ ↦ ζ^a for each internal plane (empty for orders 3, 4, 6).
    pub star_exponents: Vec<u32>,
    /// One acceptance polygon per internal plane.
    pub window: Vec<WindowPolygon>,
    /// Exact translation of the whole point set.
    pub translation: CycloRat,
    /// Shift applied to each window polygon (genericity control).
    pub window_shift: Vec<(f64, f64)>,
    /// Rotational symmetry order of the framework, lcm(order, 2).
    pub symmetry_order: u32,
    /// Half-width of the boundary band that triggers the non-generic error.
    pub boundary_guard: f64,
    /// When set, boundary-band points are admitted instead of rejected.
    pub closed_window: bool,
    /// Preset name when built from one, recorded for reproducibility.
    pub preset_name: Option<String>,
}

/// Tri-state outcome of testing an internal point against the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowStatus {
    Inside,
    Outside,
    BoundaryBand,
}

fn regular_polygon(sides: u32, circumradius: f64, angle_offset: f64) -> WindowPolygon {
    (0..sides)
        .map(|k| {
            let a = angle_offset + 2.0 * std::f64::consts::PI * k as f64 / sides as f64;
            (circumradius * a.cos(), circumradius * a.sin())
        })
        .collect()
}

/// Signed distance from p to the polygon boundary, positive inside.
/// Requires a convex, positively oriented polygon.
fn signed_inset(poly: &[(f64, f64)], p: (f64, f64)) -> f64 {
    let mut min = f64::INFINITY;
    let m = poly.len();
    for i in 0..m {
        let a = poly[i];
        let b = poly[(i + 1) % m];
        let (ex, ey) = (b.0 - a.0, b.1 - a.1);
        let len = (ex * ex + ey * ey).sqrt();
        let d = (ex * (p.1 - a.1) - ey * (p.0 - a.0)) / len;
        if d < min {
            min = d;
        }
    }
    min
}

fn polygon_is_convex(poly: &[(f64, f64)]) -> bool {
    let m = poly.len();
    if m < 3 {
        return false;
    }
    for i in 0..m {
        let a = poly[i];
        let b = poly[(i + 1) % m];
        let c = poly[(i + 2) % m];
        let cross = (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0);
        if cross <= 0.0 {
            return false;
        }
    }
    true
}

impl ModelSetSpec {
    pub fn new(
        order: u32,
        star_exponents: Vec<u32>,
        window: Vec<WindowPolygon>,
        translation: CycloRat,
        window_shift: Vec<(f64, f64)>,
    ) -> QtResult<Self> {
        let spec = ModelSetSpec {
            order,
            star_exponents,
            window,
            translation,
            window_shift,
            symmetry_order: order.lcm(&2),
            boundary_guard: 1e-9,
            closed_window: false,
            preset_name: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The five bundled configurations: "square" (order 4), "triangle"
    /// (order 3), "ab" (order 8, octagonal window), "ttt" (order 5,
    /// decagonal window), "shield" (order 12, dodecagonal window).
    pub fn preset(name: &str) -> QtResult<Self> {
        let pi = std::f64::consts::PI;
        let mut spec = match name {
            "square" => Self::new(4, vec![], vec![], CycloRat::zero(4)?, vec![])?,
            "triangle" => Self::new(3, vec![], vec![], CycloRat::zero(3)?, vec![])?,
            "ab" => {
                // regular octagon with unit edge, one vertex direction π/8
                let r = 0.5 / (pi / 8.0).sin();
                Self::new(
                    8,
                    vec![3],
                    vec![regular_polygon(8, r, pi / 8.0)],
                    CycloRat::zero(8)?,
                    vec![(0.0, 0.0)],
                )?
            }
            "ttt" => {
                // regular decagon with edge τ/√(τ+2); boundary hits lattice
                // star images at zero shift, so the default shift is a tiny
                // irrational-ish offset.
                let tau = (1.0 + 5f64.sqrt()) / 2.0;
                let r = tau * tau / (tau + 2.0).sqrt();
                Self::new(
                    5,
                    vec![2],
                    vec![regular_polygon(10, r, pi / 10.0)],
                    CycloRat::zero(5)?,
                    vec![(1e-3 / pi, 1e-3 / std::f64::consts::E)],
                )?
            }
            "shield" => {
                let r = 0.5 / (pi / 12.0).sin();
                Self::new(
                    12,
                    vec![5],
                    vec![regular_polygon(12, r, pi / 12.0)],
                    CycloRat::zero(12)?,
                    vec![(1e-3 / pi, 1e-3 / std::f64::consts::E)],
                )?
            }
            other => {
                return Err(QtError::BadArgument(format!(
                    "unknown preset '{}' (expected square, triangle, ab, ttt, shield)",
                    other
                )))
            }
        };
        spec.preset_name = Some(name.to_string());
        Ok(spec)
    }

    pub fn validate(&self) -> QtResult<()> {
        let data = OrderData::get(self.order)?;
        let planes = (data.phi / 2) as usize;
        if self.translation.order() != self.order {
            return Err(QtError::OrderMismatch {
                expected: self.order,
                found: self.translation.order(),
            });
        }
        if self.star_exponents.len() != planes - 1
            || self.window.len() != planes - 1
            || self.window_shift.len() != planes - 1
        {
            return Err(QtError::BadArgument(format!(
                "order {} needs {} internal plane(s); got {} exponents, {} windows, {} shifts",
                self.order,
                planes - 1,
                self.star_exponents.len(),
                self.window.len(),
                self.window_shift.len()
            )));
        }
        // The chosen automorphisms, together with identity and conjugation,
        // must cover every unit residue exactly once up to conjugate pairs.
        let mut covered: Vec<u32> = vec![1];
        for &e in &self.star_exponents {
            let e = e % self.order;
            if e.gcd(&self.order) != 1 {
                return Err(QtError::BadArgument(format!(
                    "star exponent {} is not coprime to {}",
                    e, self.order
                )));
            }
            if e == 1 || e == self.order - 1 {
                return Err(QtError::BadArgument(
                    "star exponents may not be the identity or conjugation".into(),
                ));
            }
            covered.push(e.min(self.order - e));
        }
        covered.sort_unstable();
        covered.dedup();
        if covered.len() != planes {
            return Err(QtError::BadArgument(
                "star exponents must exhaust the automorphisms up to conjugate pairs".into(),
            ));
        }
        for poly in &self.window {
            if !polygon_is_convex(poly) {
                return Err(QtError::BadArgument(
                    "window polygons must be convex and positively oriented".into(),
                ));
            }
        }
        Ok(())
    }

    /// Internal-space image of z: one planar point per chosen automorphism.
    pub fn star_map(&self, z: &CycloRat) -> QtResult<Vec<(f64, f64)>> {
        if z.order() != self.order {
            return Err(QtError::OrderMismatch { expected: self.order, found: z.order() });
        }
        self.star_exponents.iter().map(|&e| Ok(z.galois(e)?.embed(1))).collect()
    }

    /// Test an internal point against the shifted window with the guard
    /// band: Inside needs every component at depth ≥ guard, Outside needs
    /// one component at depth ≤ −guard.
    pub fn window_contains(&self, pt: &[(f64, f64)]) -> WindowStatus {
        assert_eq!(pt.len(), self.window.len(), "internal point has wrong number of planes");
        let mut worst = f64::INFINITY;
        for (j, poly) in self.window.iter().enumerate() {
            let shifted = (pt[j].0 - self.window_shift[j].0, pt[j].1 - self.window_shift[j].1);
            let d = signed_inset(poly, shifted);
            if d < worst {
                worst = d;
            }
        }
        if worst >= self.boundary_guard {
            WindowStatus::Inside
        } else if worst <= -self.boundary_guard {
            WindowStatus::Outside
        } else {
            WindowStatus::BoundaryBand
        }
    }

    /// Depth of the internal point inside the shifted window (−∞ side ok),
    /// +∞ when there is no window.
    fn window_margin(&self, pt: &[(f64, f64)]) -> f64 {
        let mut worst = f64::INFINITY;
        for (j, poly) in self.window.iter().enumerate() {
            let shifted = (pt[j].0 - self.window_shift[j].0, pt[j].1 - self.window_shift[j].1);
            worst = worst.min(signed_inset(poly, shifted));
        }
        worst
    }
}

/// A finite set of lattice points together with an exact translation; the
/// realized point set is translation + points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePointSet {
    order: u32,
    translation: CycloRat,
    points: Vec<CycloRat>,
}

impl FinitePointSet {
    /// Points must have integer coefficients; they are deduplicated and
    /// stored in lexicographic coefficient order.
    pub fn new(order: u32, translation: CycloRat, points: Vec<CycloRat>) -> QtResult<Self> {
        if translation.order() != order {
            return Err(QtError::OrderMismatch { expected: order, found: translation.order() });
        }
        let mut points = points;
        for p in &points {
            if p.order() != order {
                return Err(QtError::OrderMismatch { expected: order, found: p.order() });
            }
            if !p.is_integral() {
                return Err(QtError::BadArgument(format!(
                    "point {:?} does not have integer coefficients",
                    p
                )));
            }
        }
        points.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
        points.dedup();
        Ok(FinitePointSet { order, translation, points })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn translation(&self) -> &CycloRat {
        &self.translation
    }

    /// The lattice parts, in lexicographic coefficient order.
    pub fn points(&self) -> &[CycloRat] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// translation + point for every stored point.
    pub fn realized(&self) -> Vec<CycloRat> {
        self.points.iter().map(|p| &self.translation + p).collect()
    }
}

/// Column-wise planar embeddings of the power basis under the physical map
/// and each star automorphism; rows pair up as (Re, Im) per plane.
fn embedding_matrix(spec: &ModelSetSpec) -> QtResult<Vec<Vec<f64>>> {
    let data = OrderData::get(spec.order)?;
    let phi = data.phi as usize;
    let mut exps = vec![1u32];
    exps.extend_from_slice(&spec.star_exponents);
    let mut m = vec![vec![0.0; phi]; phi];
    for (j, &e) in exps.iter().enumerate() {
        for i in 0..phi {
            let theta = 2.0 * std::f64::consts::PI * ((e as u64 * i as u64) % spec.order as u64)
                as f64
                / spec.order as f64;
            m[2 * j][i] = theta.cos();
            m[2 * j + 1][i] = theta.sin();
        }
    }
    Ok(m)
}

struct BoxSearch<'a> {
    spec: &'a ModelSetSpec,
    phi: usize,
    planes: usize,
    /// columns[i] = embedding of ζ^i across all planes, (Re, Im) pairs
    columns: Vec<Vec<f64>>,
    bounds: Vec<i64>,
    /// per depth and plane: largest possible movement of the partial sum
    /// contributed by the still-unassigned coefficients
    slack: Vec<Vec<f64>>,
    /// physical-disk center relative to the lattice (center − σ₁(t))
    disk_center: (f64, f64),
    radius: f64,
    /// rough covering disks for the shifted windows
    window_centers: Vec<(f64, f64)>,
    window_radii: Vec<f64>,
}

impl<'a> BoxSearch<'a> {
    fn build(spec: &'a ModelSetSpec, center: (f64, f64), radius: f64) -> QtResult<Self> {
        let data = OrderData::get(spec.order)?;
        let phi = data.phi as usize;
        let planes = phi / 2;
        let m = embedding_matrix(spec)?;
        let inv = f64_inverse(&m).ok_or_else(|| {
            QtError::BadArgument("embedding matrix is singular (invalid star exponents)".into())
        })?;

        let (tx, ty) = spec.translation.embed(1);
        let disk_center = (center.0 - tx, center.1 - ty);

        // per-row reach of the admissible region in embedding space
        let mut reach = vec![0.0f64; phi];
        let disk_norm = (disk_center.0.powi(2) + disk_center.1.powi(2)).sqrt() + radius;
        reach[0] = disk_norm;
        reach[1] = disk_norm;
        let mut window_centers = Vec::new();
        let mut window_radii = Vec::new();
        for (j, poly) in spec.window.iter().enumerate() {
            let shift = spec.window_shift[j];
            let cx = poly.iter().map(|v| v.0).sum::<f64>() / poly.len() as f64 + shift.0;
            let cy = poly.iter().map(|v| v.1).sum::<f64>() / poly.len() as f64 + shift.1;
            let rr = poly
                .iter()
                .map(|v| {
                    let dx = v.0 + shift.0 - cx;
                    let dy = v.1 + shift.1 - cy;
                    (dx * dx + dy * dy).sqrt()
                })
                .fold(0.0, f64::max)
                + 1e-6;
            let far = (cx * cx + cy * cy).sqrt() + rr;
            reach[2 * (j + 1)] = far;
            reach[2 * (j + 1) + 1] = far;
            window_centers.push((cx, cy));
            window_radii.push(rr);
        }

        let mut bounds = vec![0i64; phi];
        for i in 0..phi {
            let b: f64 = (0..phi).map(|r| inv[i][r].abs() * reach[r]).sum();
            bounds[i] = b.floor() as i64 + 1;
        }

        let columns: Vec<Vec<f64>> = (0..phi).map(|i| m.iter().map(|row| row[i]).collect()).collect();
        // slack[d][p]: assigning coefficients d.. can still move plane p by
        // at most this much
        let mut slack = vec![vec![0.0; planes]; phi + 1];
        for d in (0..phi).rev() {
            for p in 0..planes {
                let amp =
                    (columns[d][2 * p].powi(2) + columns[d][2 * p + 1].powi(2)).sqrt();
                slack[d][p] = slack[d + 1][p] + bounds[d] as f64 * amp;
            }
        }

        Ok(BoxSearch {
            spec,
            phi,
            planes,
            columns,
            bounds,
            slack,
            disk_center,
            radius,
            window_centers,
            window_radii,
        })
    }

    /// Depth-first enumeration below a fixed leading coefficient.
    fn descend(
        &self,
        depth: usize,
        partial: &mut Vec<f64>,
        coeffs: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) -> QtResult<()> {
        if depth == self.phi {
            let dx = partial[0] - self.disk_center.0;
            let dy = partial[1] - self.disk_center.1;
            if (dx * dx + dy * dy).sqrt() > self.radius {
                return Ok(());
            }
            let internal: Vec<(f64, f64)> =
                (1..self.planes).map(|p| (partial[2 * p], partial[2 * p + 1])).collect();
            match self.spec.window_contains(&internal) {
                WindowStatus::Inside => out.push(coeffs.clone()),
                WindowStatus::Outside => {}
                WindowStatus::BoundaryBand => {
                    if self.spec.closed_window {
                        out.push(coeffs.clone());
                    } else {
                        return Err(QtError::NonGenericConfiguration(format!(
                            "star image of coefficients {:?} lies within {} of the window \
                             boundary; shift the window",
                            coeffs, self.spec.boundary_guard
                        )));
                    }
                }
            }
            return Ok(());
        }
        // prune by disk and window covering circles
        let dx = partial[0] - self.disk_center.0;
        let dy = partial[1] - self.disk_center.1;
        if (dx * dx + dy * dy).sqrt() > self.radius + self.slack[depth][0] + 1e-9 {
            return Ok(());
        }
        for p in 1..self.planes {
            let dx = partial[2 * p] - self.window_centers[p - 1].0;
            let dy = partial[2 * p + 1] - self.window_centers[p - 1].1;
            if (dx * dx + dy * dy).sqrt()
                > self.window_radii[p - 1] + self.slack[depth][p] + 1e-9
            {
                return Ok(());
            }
        }
        let b = self.bounds[depth];
        for c in -b..=b {
            for r in 0..self.phi {
                partial[r] += c as f64 * self.columns[depth][r];
            }
            coeffs.push(c);
            self.descend(depth + 1, partial, coeffs, out)?;
            coeffs.pop();
            for r in 0..self.phi {
                partial[r] -= c as f64 * self.columns[depth][r];
            }
        }
        Ok(())
    }
}

/// All lattice points whose translated position lies in the closed disk and
/// whose star image is strictly inside the shifted window. Any candidate in
/// the boundary band aborts with the non-generic error unless the spec opts
/// into closed windows.
pub fn generate(spec: &ModelSetSpec, center: (f64, f64), radius: f64) -> QtResult<FinitePointSet> {
    if radius <= 0.0 {
        return Err(QtError::BadArgument("radius must be positive".into()));
    }
    spec.validate()?;
    let search = BoxSearch::build(spec, center, radius)?;
    let b0 = search.bounds[0];
    let chunks: Vec<QtResult<Vec<Vec<i64>>>> = (-b0..b0 + 1)
        .into_par_iter()
        .map(|c0| {
            let mut partial: Vec<f64> =
                (0..search.phi).map(|r| c0 as f64 * search.columns[0][r]).collect();
            let mut coeffs = vec![c0];
            let mut out = Vec::new();
            search.descend(1, &mut partial, &mut coeffs, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut all: Vec<Vec<i64>> = Vec::new();
    for chunk in chunks {
        all.extend(chunk?);
    }
    all.sort();
    let points = all
        .iter()
        .map(|c| CycloRat::from_integer_coeffs(spec.order, c))
        .collect::<QtResult<Vec<_>>>()?;
    FinitePointSet::new(spec.order, spec.translation.clone(), points)
}

/// Search the real subfield for an algebraic integer λ > 1 whose other
/// conjugates all have modulus below 1 − 1e−9, using integer coordinates up
/// to coeff_bound in the (ζ+ζ̄)-power basis. Among the qualifying candidates
/// the one with the smallest largest conjugate modulus (then smallest λ)
/// wins.
pub fn pv_search(n: u32, coeff_bound: i64) -> QtResult<RealCycloRat> {
    if coeff_bound < 1 {
        return Err(QtError::BadArgument("coefficient bound must be at least 1".into()));
    }
    let data = OrderData::get(n)?;
    let half = (data.phi / 2) as usize;
    let mut best: Option<(f64, f64, RealCycloRat)> = None;
    let mut coords = vec![-coeff_bound; half];
    loop {
        let rat_coords: Vec<BigRational> =
            coords.iter().map(|&c| BigRational::from(BigInt::from(c))).collect();
        let cand = RealCycloRat::from_coords(n, &rat_coords)?;
        let emb = cand.embeddings_real();
        let lead = emb[0];
        let max_rest = emb[1..].iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        let distinct =
            (0..emb.len()).all(|i| (0..i).all(|j| (emb[i] - emb[j]).abs() > 1e-9));
        if lead > 1.0 && max_rest < 1.0 - 1e-9 && distinct {
            let better = match &best {
                None => true,
                Some((bm, bl, _)) => {
                    max_rest < *bm - 1e-15 || (max_rest <= *bm + 1e-15 && lead < *bl)
                }
            };
            if better {
                best = Some((max_rest, lead, cand));
            }
        }
        if !next_vector(&mut coords, -coeff_bound, coeff_bound) {
            return best.map(|(_, _, c)| c).ok_or_else(|| {
                QtError::NotFound(format!(
                    "no contracting unit of order {} with coefficients up to {}",
                    n, coeff_bound
                ))
            });
        }
    }
}

/// Result of scaling a finite rational set into a model set.
#[derive(Clone, Debug)]
pub struct HomothetyEmbedding {
    /// Total real scale factor l·λ^k.
    pub scale: RealCycloRat,
    /// Translation part of the affine map (integral whenever the spec's
    /// translation is).
    pub offset: CycloRat,
    pub image: FinitePointSet,
    /// Power of the contracting unit used (0 when there is no window).
    pub pv_power: u32,
}

const MAX_PV_POWER: u32 = 200;
const OFFSET_MARGIN: f64 = 1e-6;

/// Find a homothety z ↦ s·z + v carrying every point of F into the model
/// set: clear denominators, then contract the internal images with a unit
/// power until everything fits strictly inside the window around a
/// well-centered lattice point.
pub fn embed_homothety(f: &[CycloRat], spec: &ModelSetSpec) -> QtResult<HomothetyEmbedding> {
    if f.is_empty() {
        return Err(QtError::BadArgument("cannot embed an empty set".into()));
    }
    spec.validate()?;
    let n = spec.order;
    for z in f {
        if z.order() != n {
            return Err(QtError::OrderMismatch { expected: n, found: z.order() });
        }
    }
    let t = &spec.translation;
    let rel: Vec<CycloRat> = f.iter().map(|z| z - t).collect();
    let mut l = BigInt::one();
    for z in &rel {
        for c in z.coeffs() {
            l = l.lcm(c.denom());
        }
    }
    let l_rat = BigRational::from(l);
    let scaled: Vec<CycloRat> = rel.iter().map(|z| z.scale(&l_rat)).collect();

    if spec.window.is_empty() {
        // full lattice: clearing denominators is already enough
        let image = FinitePointSet::new(n, t.clone(), scaled)?;
        let offset = t - &t.scale(&l_rat);
        return Ok(HomothetyEmbedding {
            scale: RealCycloRat::from_rational(n, l_rat)?,
            offset,
            image,
            pv_power: 0,
        });
    }

    let lambda = pv_search(n, 1).or_else(|_| pv_search(n, 2))?;
    let z0 = find_interior_lattice_point(spec)?;
    let z0_star = spec.star_map(&z0)?;
    debug_assert!(spec.window_margin(&z0_star) >= OFFSET_MARGIN);

    let mut power_elem = CycloRat::one(n)?;
    for k in 0..=MAX_PV_POWER {
        let points: Vec<CycloRat> =
            scaled.iter().map(|z| &(z * &power_elem) + &z0).collect();
        let all_inside = points
            .iter()
            .map(|p| Ok(spec.window_contains(&spec.star_map(p)?) == WindowStatus::Inside))
            .collect::<QtResult<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        if all_inside {
            let image = FinitePointSet::new(n, t.clone(), points)?;
            // re-verify membership point by point
            for p in image.points() {
                assert!(p.is_integral(), "homothety image left the lattice");
                assert_eq!(
                    spec.window_contains(&spec.star_map(p)?),
                    WindowStatus::Inside,
                    "homothety image failed the window re-check"
                );
            }
            let mut scale = RealCycloRat::from_rational(n, l_rat.clone())?;
            for _ in 0..k {
                scale = &scale * &lambda;
            }
            // realized image of f is s·(f − t) + z₀ + t, so the map is
            // z ↦ s·z + v with v = t + z₀ − s·t
            let offset = &(t + &z0) - &(t * scale.as_cyclo());
            return Ok(HomothetyEmbedding { scale, offset, image, pv_power: k });
        }
        power_elem = &power_elem * lambda.as_cyclo();
    }
    Err(QtError::NotFound(format!(
        "no unit power up to {} contracts the set into the window",
        MAX_PV_POWER
    )))
}

/// Advance a coefficient vector through [lo, hi]^len in lexicographic
/// order; false once the box is exhausted.
fn next_vector(coeffs: &mut [i64], lo: i64, hi: i64) -> bool {
    for c in coeffs.iter_mut() {
        if *c < hi {
            *c += 1;
            return true;
        }
        *c = lo;
    }
    false
}

/// Deterministic search for a lattice point whose star image sits strictly
/// inside the shifted window: scan coefficient boxes of growing size in
/// lexicographic order and take the first point with a comfortable margin.
fn find_interior_lattice_point(spec: &ModelSetSpec) -> QtResult<CycloRat> {
    let data = OrderData::get(spec.order)?;
    let phi = data.phi as usize;
    for ring in 0i64..=16 {
        let mut coeffs = vec![-ring; phi];
        loop {
            // only the shell that is new at this ring size
            if coeffs.iter().any(|c| c.abs() == ring) || ring == 0 {
                let z = CycloRat::from_integer_coeffs(spec.order, &coeffs)?;
                let star = spec.star_map(&z)?;
                if spec.window_margin(&star) >= OFFSET_MARGIN {
                    return Ok(z);
                }
            }
            if !next_vector(&mut coeffs, -ring, ring) {
                break;
            }
        }
    }
    Err(QtError::NotFound(
        "no lattice point with a star image comfortably inside the window".into(),
    ))
}

/// Arithmetic mean of the star images of the stored lattice points.
pub fn weyl_mean(points: &FinitePointSet, spec: &ModelSetSpec) -> QtResult<Vec<(f64, f64)>> {
    if points.is_empty() {
        return Err(QtError::BadArgument("mean of an empty set".into()));
    }
    if spec.window.is_empty() {
        return Err(QtError::BadArgument("order has no internal space".into()));
    }
    if points.order() != spec.order {
        return Err(QtError::OrderMismatch { expected: spec.order, found: points.order() });
    }
    let planes = spec.window.len();
    let mut acc = vec![(0.0, 0.0); planes];
    for p in points.points() {
        let star = spec.star_map(p)?;
        for j in 0..planes {
            acc[j].0 += star[j].0;
            acc[j].1 += star[j].1;
        }
    }
    let m = points.len() as f64;
    Ok(acc.into_iter().map(|(x, y)| (x / m, y / m)).collect())
}
