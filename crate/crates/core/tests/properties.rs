use num_bigint::BigInt;
use proptest::prelude::*;

use markoff_core::conic::{slice_orbit_partition, SliceSubgroup};
use markoff_core::engine::{components, enumerate_points, with_workers};
use markoff_core::field::is_prime;
use markoff_core::obstruction::obstruction_class;
use markoff_core::surface::{equivalents, eval_delta_mod};
use markoff_core::symbolic::{delta_polynomial, parse, MultiPoly};
use markoff_core::{
    apply_move, canonical_params, cluster_lift, degeneracy_class, eval_delta, generators, Axis,
    FieldPrime, Fp2Elem, GroupSelector, Move, ParamQuad, ParamTransform, ParamsMod, SurfacePoint,
};

const PRIMES: [u64; 12] = [5, 7, 11, 13, 17, 23, 31, 101, 1009, 7919, 65537, 2147483647];

fn field() -> impl Strategy<Value = FieldPrime> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| FieldPrime::new(p).unwrap())
}

fn small_params() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-6i64..=6)
}

/// A random point on the surface, found by scanning from a random (x, y).
fn point_on(q: &ParamsMod, x0: u64, y0: u64) -> Option<SurfacePoint> {
    let k = q.field;
    let p = k.p() as u64;
    for dx in 0..p {
        for dy in 0..p.min(4) {
            let x = k.from_u64((x0 + dx) % p);
            let y = k.from_u64((y0 + dy) % p);
            let s = k.add(k.mul(x, y), q.abc[2]);
            let c = k.sub(
                k.add(k.square(x), k.square(y)),
                k.add(k.add(k.mul(q.abc[0], x), k.mul(q.abc[1], y)), q.d),
            );
            if let Some(z) = k.roots_sum_product(s, c).first() {
                return SurfacePoint::new([x, y, *z], q).ok();
            }
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn legendre_is_multiplicative(k in field(), a in any::<u64>(), b in any::<u64>()) {
        let (a, b) = (k.from_u64(a), k.from_u64(b));
        prop_assert_eq!(k.legendre(k.mul(a, b)), k.legendre(a) * k.legendre(b));
        prop_assert_eq!(k.legendre(a), k.legendre_reciprocity(a));
    }

    #[test]
    fn sqrt_squares_back(k in field(), a in any::<u64>()) {
        let a = k.from_u64(a);
        match k.sqrt(a) {
            Some(r) => prop_assert_eq!(k.square(r), a),
            None => prop_assert_eq!(k.legendre(a), -1),
        }
    }

    #[test]
    fn norm_is_multiplicative(k in field(), v in prop::array::uniform4(any::<u64>())) {
        let x = Fp2Elem { a: k.from_u64(v[0]), b: k.from_u64(v[1]) };
        let y = Fp2Elem { a: k.from_u64(v[2]), b: k.from_u64(v[3]) };
        prop_assert_eq!(k.norm(k.mul2(x, y)), k.mul(k.norm(x), k.norm(y)));
        if !x.is_zero() {
            let one = Fp2Elem::from_base(k.elem(1));
            prop_assert_eq!(k.mul2(x, k.inv2(x)), one);
        }
    }

    #[test]
    fn inverse_and_order(k in field(), a in 1u64..1_000_000) {
        let a = k.from_u64(a);
        prop_assume!(!a.is_zero());
        prop_assert_eq!(k.mul(a, k.inv(a)), k.elem(1));
        let n = k.order(a).unwrap();
        prop_assert_eq!(k.pow(a, n), k.elem(1));
        prop_assert_eq!((k.p() as u64 - 1) % n, 0);
    }

    #[test]
    fn moves_are_involutions_on_surface(
        k in field(), v in small_params(), x0 in any::<u64>(), y0 in any::<u64>()
    ) {
        let q = ParamsMod::new(k, v);
        if let Some(pt) = point_on(&q, x0, y0) {
            for m in Move::ALL {
                if m.is_available(&q) {
                    let img = apply_move(m, pt, &q).unwrap();
                    prop_assert_eq!(apply_move(m, img, &q).unwrap(), pt);
                }
            }
        }
    }

    #[test]
    fn transforms_carry_points_and_commute(
        k in field(), v in small_params(), x0 in any::<u64>(), y0 in any::<u64>(),
        t in 0usize..24
    ) {
        let q = ParamsMod::new(k, v);
        let t: ParamTransform = ParamTransform::all().nth(t).unwrap();
        let tq = t.map_mod(&q);
        if let Some(pt) = point_on(&q, x0, y0) {
            let img = t.map_point(pt, &k);
            prop_assert!(markoff_core::on_surface(img.coords(), &tq));
            for i in Axis::ALL {
                let lhs = t.map_point(apply_move(Move::vieta(Axis::ALL[t.perm[i.index()]]), pt, &q).unwrap(), &k);
                let rhs = apply_move(Move::vieta(i), img, &tq).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn canonical_form_is_class_invariant(v in small_params(), t in 0usize..24) {
        let q = ParamQuad::from_i64(v);
        let t = ParamTransform::all().nth(t).unwrap();
        let tq = t.map_int(&q);
        prop_assert_eq!(canonical_params(&q).0, canonical_params(&tq).0);
        prop_assert_eq!(degeneracy_class(&q).is_degenerate(), degeneracy_class(&tq).is_degenerate());
        prop_assert_eq!(eval_delta(&q), eval_delta(&tq));
        prop_assert_eq!(equivalents(&q).len(), 24);
    }

    #[test]
    fn delta_vanishes_on_cluster_lift(a in prop::array::uniform3(-1000i64..1000)) {
        let q = cluster_lift(&BigInt::from(a[0]), &BigInt::from(a[1]), &BigInt::from(a[2]));
        prop_assert_eq!(eval_delta(&q), BigInt::from(0));
    }

    #[test]
    fn delta_poly_agrees_mod_p(k in field(), v in small_params()) {
        let d = delta_polynomial(markoff_core::delta::DELTA_TABLE).unwrap();
        let q = ParamsMod::new(k, v);
        let vals = [q.abc[0], q.abc[1], q.abc[2], q.d];
        prop_assert_eq!(d.eval_mod(&vals, &k), eval_delta_mod(&q));
        let exact = d.eval(&v.map(BigInt::from));
        prop_assert_eq!(k.from_bigint(&exact), eval_delta_mod(&q));
    }
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::array::uniform3(0u32..4), -9i64..=9), 0..6).prop_map(|ts| {
        MultiPoly::from_terms(
            &["x", "y", "z"],
            ts.into_iter().map(|(e, c)| (e.to_vec(), BigInt::from(c))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_division_recovers_factor(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).divide_exact(&b), Some(a));
    }

    #[test]
    fn subst_then_eval(a in poly(), s in poly(), v in prop::array::uniform3(-20i64..20)) {
        let vals = v.map(BigInt::from);
        let composed = a.subst("y", &s).unwrap();
        let mut inner = vals.clone();
        inner[1] = s.eval(&vals);
        prop_assert_eq!(composed.eval(&vals), a.eval(&inner));
    }

    #[test]
    fn resultant_antisymmetry(a in poly(), b in poly()) {
        let x = a.index_of("x").unwrap();
        let (Some(m), Some(n)) = (a.degree_in(x), b.degree_in(x)) else { return Ok(()) };
        prop_assume!(m > 0 && n > 0);
        let r1 = a.resultant(&b, "x").unwrap();
        let r2 = b.resultant(&a, "x").unwrap();
        let expected = if (m * n) % 2 == 1 { r2.neg() } else { r2 };
        prop_assert_eq!(r1, expected);
    }

    #[test]
    fn display_round_trips(a in poly()) {
        prop_assert_eq!(parse(&a.to_string(), &["x", "y", "z"]).unwrap(), a);
    }
}

#[test]
fn components_are_unions_of_slice_blocks() {
    for (p, v) in [
        (13u64, [1, 2, 3, 5]),
        (11, [2, 2, 0, 3]),
        (17, [0, -1, -1, 0]),
    ] {
        let q = ParamsMod::new(FieldPrime::new(p).unwrap(), v);
        let idx = enumerate_points(&q).unwrap();
        let lab = components(&idx, GroupSelector::Gamma);
        for axis in Axis::ALL {
            for s in 0..p {
                let value = q.field.from_u64(s);
                for block in slice_orbit_partition(axis, value, &q, SliceSubgroup::TwoVieta) {
                    let labels: std::collections::BTreeSet<u32> = block
                        .iter()
                        .map(|pt| lab.labels[idx.id_of(pt.coords()).unwrap() as usize])
                        .collect();
                    assert_eq!(labels.len(), 1, "p={p} {v:?} axis {axis:?} value {s}");
                }
            }
        }
    }
}

#[test]
fn labeling_identical_across_worker_counts() {
    for (p, v) in [
        (211u64, [0, 0, 0, 0]),
        (199, [2, 2, 2, 7]),
        (97, [3, -1, 4, 1]),
    ] {
        let q = ParamsMod::new(FieldPrime::new(p).unwrap(), v);
        let idx = enumerate_points(&q).unwrap();
        for sel in [
            GroupSelector::Gamma,
            GroupSelector::GammaTimesH,
            GroupSelector::GammaPrime,
        ] {
            let runs: Vec<Vec<u32>> = [1, 2, 8]
                .iter()
                .map(|&w| with_workers(w, || components(&idx, sel).labels))
                .collect();
            assert_eq!(runs[0], runs[1]);
            assert_eq!(runs[0], runs[2]);
        }
    }
}

#[test]
fn obstruction_class_invariant_under_vieta_exhaustive() {
    let battery = [
        [2, 2, 0, 3],
        [2, 2, 2, 7],
        [0, 0, 1, 6],
        [4, 4, -2, -4],
        [-4, -2, -2, -5],
    ];
    for v in battery {
        for p in (7..=61u64).filter(|&p| is_prime(p)) {
            let q = ParamsMod::new(FieldPrime::new(p).unwrap(), v);
            let idx = enumerate_points(&q).unwrap();
            for pt in idx.points() {
                let Ok(c) = obstruction_class(pt, &q) else {
                    continue;
                };
                assert!(c.s1 * c.s2 >= 0, "{v:?} p={p} {pt:?}");
                if let Some(s) = c.sign_triple.filter(|s| s.iter().all(|&e| e != 0)) {
                    assert_eq!(s.iter().filter(|&&e| e == -1).count() % 2, 0);
                }
                for m in generators(&q, GroupSelector::Gamma) {
                    let img = apply_move(m, pt, &q).unwrap();
                    if let Ok(ci) = obstruction_class(img, &q) {
                        assert_eq!(c.two_class, ci.two_class, "{v:?} p={p} {pt:?} {m:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn quartic_discriminant_matches_table_polynomial() {
    let d1 = markoff_core::symbolic::quartic(1)
        .discriminant("x")
        .unwrap()
        .with_vars(&["A", "B", "C", "D"])
        .unwrap();
    let table = delta_polynomial(markoff_core::delta::DELTA_TABLE).unwrap();
    assert_eq!(d1, table);
    assert!(markoff_core::delta::checksum_ok());
}

#[test]
fn census_sizes_sum_and_large_tags() {
    use markoff_core::engine::run_census;
    for (p, v) in [
        (31u64, [1, 2, 3, 5]),
        (29, [2, 2, 2, 7]),
        (23, [0, 0, 0, 3]),
        (7, [0, 0, 0, 4]),
    ] {
        let q = ParamsMod::new(FieldPrime::new(p).unwrap(), v);
        for sel in [GroupSelector::Gamma, GroupSelector::GammaPrime] {
            let c = run_census(&q, sel, 100).unwrap();
            assert_eq!(
                c.components.iter().map(|x| x.size).sum::<u64>(),
                c.total_points
            );
            for comp in &c.components {
                assert_eq!(comp.tag.is_large(), comp.size > c.effective_threshold);
            }
            let n_giant = c
                .components
                .iter()
                .filter(|x| x.tag == markoff_core::engine::ComponentTag::Giant)
                .count();
            assert!(n_giant <= 1);
        }
    }
}
