//! Randomized invariants: algebraic laws of the exact arithmetic, geometric
//! contracts of the X-ray machinery, and the behavioural guarantees the rest
//! of the crate leans on.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use quasitomo_core::model_set::{FinitePointSet, ModelSetSpec};
use quasitomo_core::polygon::{
    affinely_regular_exists, build_u_polygon, cross_ratio, is_u_polygon,
    sort_directions_by_angle,
};
use quasitomo_core::successive::{candidate_grid, max_points_per_line, second_direction};
use quasitomo_core::valuation::{eval_f, vp_rational, FourIndex};
use quasitomo_core::xray::{grid, is_unimodular_pair, switching_pair, xray, Direction};
use quasitomo_core::{CycloRat, OrderData, RealCycloRat};

fn phi(n: u32) -> usize {
    OrderData::get(n).unwrap().phi
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Field elements with small integer coordinates in the power basis.
fn int_element(n: u32) -> impl Strategy<Value = CycloRat> {
    prop::collection::vec(-3i64..=3, phi(n))
        .prop_map(move |c| CycloRat::from_integer_coeffs(n, &c).unwrap())
}

/// Field elements with small rational coordinates.
fn rat_element(n: u32) -> impl Strategy<Value = CycloRat> {
    prop::collection::vec((-6i64..=6, 1i64..=4), phi(n)).prop_map(move |pairs| {
        let coeffs: Vec<BigRational> = pairs.iter().map(|&(p, q)| rat(p, q)).collect();
        CycloRat::from_zeta_coeffs(n, &coeffs).unwrap()
    })
}

fn nonzero(n: u32) -> impl Strategy<Value = CycloRat> {
    int_element(n).prop_filter("nonzero", |z| !z.is_zero())
}

/// Elements of the real subfield with small rational coordinates.
fn real_element(n: u32) -> impl Strategy<Value = RealCycloRat> {
    prop::collection::vec((-5i64..=5, 1i64..=3), phi(n) / 2).prop_map(move |pairs| {
        let coords: Vec<BigRational> = pairs.iter().map(|&(p, q)| rat(p, q)).collect();
        RealCycloRat::from_coords(n, &coords).unwrap()
    })
}

fn any_order() -> impl Strategy<Value = u32> {
    prop_oneof![Just(4u32), Just(5u32), Just(8u32), Just(12u32)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn addition_and_multiplication_laws(
        (n, a, b, c) in any_order().prop_flat_map(|n| {
            (Just(n), rat_element(n), rat_element(n), rat_element(n))
        })
    ) {
        let _ = n;
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn inverses_multiply_to_one(
        (n, a) in any_order().prop_flat_map(|n| {
            (Just(n), rat_element(n).prop_filter("nonzero", |z| !z.is_zero()))
        })
    ) {
        let inv = a.try_inv().expect("nonzero field elements are invertible");
        prop_assert_eq!(&a * &inv, CycloRat::one(n).unwrap());
    }

    #[test]
    fn galois_maps_preserve_the_ring_structure(
        (n, a, b, j) in any_order().prop_flat_map(|n| {
            (Just(n), rat_element(n), rat_element(n), 0usize..4)
        })
    ) {
        let units: Vec<u32> = (1..n).filter(|a| num_integer::gcd(*a, n) == 1).collect();
        let s = units[j % units.len()];
        prop_assert_eq!((&a + &b).galois(s).unwrap(), &a.galois(s).unwrap() + &b.galois(s).unwrap());
        prop_assert_eq!((&a * &b).galois(s).unwrap(), &a.galois(s).unwrap() * &b.galois(s).unwrap());
    }

    #[test]
    fn real_imaginary_split_round_trips(
        (n, a) in any_order().prop_flat_map(|n| (Just(n), rat_element(n)))
    ) {
        let (alpha, beta) = a.real_decompose();
        prop_assert_eq!(CycloRat::from_real_pair(n, &alpha, &beta).unwrap(), a);
    }

    #[test]
    fn field_norm_is_multiplicative(
        (x, y) in prop_oneof![Just(8u32), Just(12u32)].prop_flat_map(|n| {
            (real_element(n), real_element(n))
        })
    ) {
        prop_assert_eq!((&x * &y).field_norm(), x.field_norm() * y.field_norm());
    }

    #[test]
    fn embeddings_are_multiplicative(
        (n, a, b) in any_order().prop_flat_map(|n| (Just(n), int_element(n), int_element(n)))
    ) {
        let _ = n;
        let prod = &a * &b;
        for ((pa, pb), pp) in a.embeddings().iter().zip(b.embeddings()).zip(prod.embeddings()) {
            let re = pa.0 * pb.0 - pa.1 * pb.1;
            let im = pa.0 * pb.1 + pa.1 * pb.0;
            prop_assert!((re - pp.0).abs() < 1e-9, "re {} vs {}", re, pp.0);
            prop_assert!((im - pp.1).abs() < 1e-9, "im {} vs {}", im, pp.1);
        }
    }

    #[test]
    fn rational_valuations_are_additive(
        (pn, pd, qn, qd, p) in (-400i64..=400, 1i64..=60, -400i64..=400, 1i64..=60,
                                prop_oneof![Just(2u64), Just(3u64), Just(5u64)])
    ) {
        prop_assume!(pn != 0 && qn != 0);
        let x = rat(pn, pd);
        let y = rat(qn, qd);
        let sum = vp_rational(&x, p).unwrap() + vp_rational(&y, p).unwrap();
        prop_assert_eq!(vp_rational(&(x * y), p).unwrap(), sum);
    }

    #[test]
    fn normalized_sine_ratios_exceed_one_and_swap_to_reciprocals(
        (m, k1, k2, t) in (4u32..=20).prop_flat_map(|m| {
            (Just(m), 2..m - 1, 2..m - 1, 1u32..=4)
        })
    ) {
        prop_assume!(k1 <= k2);
        prop_assume!(t < k1 && k2 + t < m);
        let d = FourIndex::new(m, [k1, k2, k1 - t, k2 + t]).unwrap();
        prop_assert!(d.is_normalized());
        let f = eval_f(&d).unwrap();
        prop_assert!(f.embeddings_real()[0] > 1.0, "normalized ratios sit above 1");
        let g = eval_f(&d.swapped()).unwrap();
        let product = &f * &g;
        prop_assert_eq!(product.as_cyclo(), &CycloRat::one(m).unwrap());
    }
}

/// Four pairwise non-parallel directions of the given order.
fn direction_quadruple(n: u32) -> impl Strategy<Value = Vec<Direction>> {
    prop::collection::vec(nonzero(n), 4)
        .prop_filter_map("pairwise non-parallel", |elems| {
            let dirs: Vec<Direction> =
                elems.iter().map(|z| Direction::new(z).unwrap()).collect();
            for i in 0..4 {
                for j in 0..i {
                    if dirs[i].is_parallel_to(&dirs[j]) {
                        return None;
                    }
                }
            }
            Some(dirs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// An invertible map z ↦ A·z + B·conj(z) with coefficients in the field
    /// permutes direction pencils. Re-sorting by angle rotates the starting
    /// cut, which can only replace the cross ratio λ by λ/(λ−1).
    #[test]
    fn cross_ratios_transform_within_their_pair(
        (n, mut dirs, a, b) in prop_oneof![Just(4u32), Just(8u32)].prop_flat_map(|n| {
            (Just(n), direction_quadruple(n), int_element(n), int_element(n))
        })
    ) {
        prop_assume!(a.abs_square() != b.abs_square());
        sort_directions_by_angle(&mut dirs);
        let lam = cross_ratio(&dirs).unwrap();

        let mut mapped: Vec<Direction> = dirs
            .iter()
            .map(|d| {
                let image = &(&a * d.rep()) + &(&b * &d.rep().conj());
                Direction::new(&image).unwrap()
            })
            .collect();
        sort_directions_by_angle(&mut mapped);
        let mu = cross_ratio(&mapped).unwrap();

        let lam_c = lam.as_cyclo();
        let shifted = lam_c - &CycloRat::one(n).unwrap();
        let partner = lam_c * &shifted.try_inv().expect("cross ratios are never 1");
        prop_assert!(
            mu.as_cyclo() == lam_c || mu.as_cyclo() == &partner,
            "cross ratio {:?} became {:?}",
            lam_c.coeffs(),
            mu.as_cyclo().coeffs()
        );
    }

    #[test]
    fn crystallographic_orders_only_produce_rational_cross_ratios(
        (n, mut dirs) in prop_oneof![Just(3u32), Just(4u32), Just(6u32)]
            .prop_flat_map(|n| (Just(n), direction_quadruple(n)))
    ) {
        let _ = n;
        sort_directions_by_angle(&mut dirs);
        let value = cross_ratio(&dirs).unwrap();
        prop_assert!(value.to_rational().is_some());
    }

    #[test]
    fn built_witnesses_always_pass_the_line_pairing_check(
        (n, elems) in any_order().prop_flat_map(|n| {
            (Just(n), prop::collection::vec(nonzero(n), 1..=3))
        })
    ) {
        let _ = n;
        // keep one representative per parallel class; the builder rejects repeats
        let mut dirs: Vec<Direction> = Vec::new();
        let mut reps: Vec<CycloRat> = Vec::new();
        for e in &elems {
            let d = Direction::new(e).unwrap();
            if !dirs.contains(&d) {
                dirs.push(d);
                reps.push(e.clone());
            }
        }
        let polygon = build_u_polygon(&reps).unwrap();
        prop_assert!(is_u_polygon(&polygon, &dirs).unwrap());
        let expected = if dirs.len() == 1 { 4 } else { 2 * dirs.len() };
        prop_assert_eq!(polygon.vertices().len(), expected);
    }
}

fn point_list(n: u32, max_len: usize) -> impl Strategy<Value = Vec<CycloRat>> {
    prop::collection::vec(int_element(n), 1..=max_len).prop_map(|pts| {
        let mut out: Vec<CycloRat> = Vec::new();
        for p in pts {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    })
}

fn lattice_set(n: u32, points: Vec<CycloRat>) -> FinitePointSet {
    FinitePointSet::new(n, CycloRat::zero(n).unwrap(), points).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_point_appears_in_its_own_grid(
        (n, pts) in prop_oneof![Just(4u32), Just(8u32), Just(12u32)]
            .prop_flat_map(|n| (Just(n), point_list(n, 6)))
    ) {
        let f = lattice_set(n, pts.clone());
        let dirs = vec![
            Direction::new(&CycloRat::one(n).unwrap()).unwrap(),
            Direction::new(&CycloRat::zeta(n).unwrap()).unwrap(),
        ];
        let g = grid(&f, &dirs).unwrap();
        for p in &pts {
            prop_assert!(g.contains(p), "point missing from its grid");
        }
    }

    #[test]
    fn unimodular_direction_pairs_keep_grids_in_the_lattice(
        (n, o, op, pts) in prop_oneof![Just(4u32), Just(8u32)].prop_flat_map(|n| {
            (Just(n), nonzero(n), nonzero(n), point_list(n, 5))
        })
    ) {
        prop_assume!(!Direction::new(&o).unwrap().is_parallel_to(&Direction::new(&op).unwrap()));
        prop_assume!(is_unimodular_pair(&o, &op).unwrap());
        let f = lattice_set(n, pts);
        let dirs = vec![Direction::new(&o).unwrap(), Direction::new(&op).unwrap()];
        for z in grid(&f, &dirs).unwrap() {
            prop_assert!(z.is_integral(), "grid escaped the lattice: {:?}", z.coeffs());
        }
    }
}

fn octagonal_direction_pool() -> Vec<Direction> {
    let reps = [[1i64, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [1, -1, 0, 0], [0, 0, 1, 0]];
    reps.iter()
        .map(|c| Direction::new(&CycloRat::from_integer_coeffs(8, c).unwrap()).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn switching_pairs_are_disjoint_with_equal_shadows(
        (idx, s, t) in (
            prop::sample::subsequence(vec![0usize, 1, 2, 3, 4], 1..=4),
            nonzero(8),
            int_element(8),
        )
    ) {
        let pool = octagonal_direction_pool();
        let dirs: Vec<Direction> = idx.iter().map(|&i| pool[i].clone()).collect();
        let (f1, f2) = switching_pair(&dirs, 8).unwrap();

        prop_assert_eq!(f1.len(), 1usize << (dirs.len() - 1));
        prop_assert_eq!(f2.len(), f1.len());
        for p in f1.points() {
            prop_assert!(!f2.points().contains(p), "summands must be disjoint");
        }
        for u in &dirs {
            prop_assert_eq!(&xray(&f1, u).unwrap().buckets, &xray(&f2, u).unwrap().buckets);
        }

        // the grid only sees the union of lines, which both summands share
        if dirs.len() >= 2 {
            let g1 = grid(&f1, &dirs).unwrap();
            let g2 = grid(&f2, &dirs).unwrap();
            prop_assert_eq!(g1.len(), g2.len());
            for z in &g1 {
                prop_assert!(g2.contains(z));
            }
        }

        // equal shadows survive any invertible homothety z ↦ s·z + t of the
        // plane, with the directions carried along
        let map = |f: &FinitePointSet| {
            let pts: Vec<CycloRat> =
                f.realized().iter().map(|z| &(&s * z) + &t).collect();
            FinitePointSet::new(8, CycloRat::zero(8).unwrap(), pts).unwrap()
        };
        let m1 = map(&f1);
        let m2 = map(&f2);
        for u in &dirs {
            let mu = Direction::new(&(&s * u.rep())).unwrap();
            prop_assert_eq!(&xray(&m1, &mu).unwrap().buckets, &xray(&m2, &mu).unwrap().buckets);
        }
    }

    #[test]
    fn star_maps_are_additive(
        (name, a, b) in (
            prop_oneof![Just("ab"), Just("ttt"), Just("shield")],
            (-10i64..=10, -10i64..=10, -10i64..=10, -10i64..=10),
            (-10i64..=10, -10i64..=10, -10i64..=10, -10i64..=10),
        )
    ) {
        let spec = ModelSetSpec::preset(name).unwrap();
        let d = phi(spec.order);
        let build = |c: (i64, i64, i64, i64)| {
            let v = [c.0, c.1, c.2, c.3];
            CycloRat::from_integer_coeffs(spec.order, &v[..d]).unwrap()
        };
        let x = build(a);
        let y = build(b);
        let sx = spec.star_map(&x).unwrap();
        let sy = spec.star_map(&y).unwrap();
        let sxy = spec.star_map(&(&x + &y)).unwrap();
        for ((p, q), r) in sx.iter().zip(&sy).zip(&sxy) {
            prop_assert!((p.0 + q.0 - r.0).abs() < 1e-9);
            prop_assert!((p.1 + q.1 - r.1).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn second_direction_contract_on_random_lattice_sets(
        (n, pts) in prop_oneof![Just(4u32), Just(8u32)]
            .prop_flat_map(|n| (Just(n), point_list(n, 5)))
    ) {
        let f = lattice_set(n, pts.clone());
        let u = Direction::new(&CycloRat::one(n).unwrap()).unwrap();
        let result = second_direction(&f, &u).unwrap();
        prop_assert!(result.epsilon <= rat(1, 2));

        let g = candidate_grid(&f, &u).unwrap();
        for p in &pts {
            prop_assert!(g.contains(p), "the grid must cover the input set");
        }
        prop_assert_eq!(max_points_per_line(&g, &result.direction).unwrap(), 1);
    }
}

#[test]
fn odd_orders_and_their_doubles_admit_the_same_regular_polygons() {
    for n in [3u32, 5, 7, 9, 15] {
        for m in 3..=30 {
            assert_eq!(
                affinely_regular_exists(m, n).unwrap(),
                affinely_regular_exists(m, 2 * n).unwrap(),
                "m = {}, n = {}",
                m,
                n
            );
        }
    }
}
