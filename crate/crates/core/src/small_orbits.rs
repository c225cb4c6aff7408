//! Predicted finite orbits (Types I–IV) and double fixed points.

use serde::Serialize;

use crate::conic::slice_points;
use crate::field::FpElem;
use crate::surface::{
    equivalents_mod, eval_f, on_surface, Axis, Move, ParamTransform, ParamsMod, SurfacePoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OrbitKind {
    TypeI,
    TypeII,
    TypeIII,
    TypeIV,
    ExceptionalEmpirical,
}

impl OrbitKind {
    pub fn expected_size(self) -> Option<usize> {
        match self {
            OrbitKind::TypeI => Some(1),
            OrbitKind::TypeII => Some(2),
            OrbitKind::TypeIII => Some(3),
            OrbitKind::TypeIV => Some(4),
            OrbitKind::ExceptionalEmpirical => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallOrbit {
    pub kind: OrbitKind,
    /// Sorted, without repeats.
    pub points: Vec<SurfacePoint>,
    /// Transform carrying the template parameters back to the input parameters.
    pub provenance: Option<ParamTransform>,
}

/// Whether a point set is closed under V1, V2 and V3.
pub fn is_gamma_closed(points: &[SurfacePoint], params: &ParamsMod) -> bool {
    points.iter().all(|p| {
        [Move::V1, Move::V2, Move::V3].iter().all(|m| {
            let img = SurfacePoint::trusted(m.apply_raw(p.coords(), params));
            points.contains(&img)
        })
    })
}

fn is_type1(c: [FpElem; 3], params: &ParamsMod) -> bool {
    let k = &params.field;
    let [x, y, z] = c;
    let two = k.elem(2);
    let [a, b, cc] = params.abc;
    a == k.sub(k.mul(two, x), k.mul(y, z))
        && b == k.sub(k.mul(two, y), k.mul(x, z))
        && cc == k.sub(k.mul(two, z), k.mul(x, y))
        && params.d
            == k.sub(
                k.mul(two, k.mul(x, k.mul(y, z))),
                k.add(k.add(k.square(x), k.square(y)), k.square(z)),
            )
}

/// Points fixed by all three Vieta involutions.
pub fn type1_points(params: &ParamsMod) -> Vec<SurfacePoint> {
    let k = &params.field;
    let [_, b, c] = params.abc;
    let mut out = Vec::new();
    for x in 0..k.p() {
        let x = k.elem(x as i64);
        // 2y − xz = B and −xy + 2z = C.
        let det = k.sub(k.elem(4), k.square(x));
        if det.is_zero() {
            for y in 0..k.p() {
                let y = k.elem(y as i64);
                let z = k.div(k.sub(k.mul(k.elem(2), y), b), x);
                if is_type1([x, y, z], params) {
                    out.push(SurfacePoint::trusted([x, y, z]));
                }
            }
        } else {
            let y = k.div(k.add(k.mul(k.elem(2), b), k.mul(x, c)), det);
            let z = k.div(k.add(k.mul(k.elem(2), c), k.mul(x, b)), det);
            if is_type1([x, y, z], params) {
                out.push(SurfacePoint::trusted([x, y, z]));
            }
        }
    }
    debug_assert!(out.iter().all(|p| on_surface(p.coords(), params)));
    out
}

fn make_orbit(
    kind: OrbitKind,
    template: &[[FpElem; 3]],
    t: ParamTransform,
    params: &ParamsMod,
) -> Option<SmallOrbit> {
    let back = t.inverse();
    let mut points: Vec<SurfacePoint> = template
        .iter()
        .map(|&c| SurfacePoint::trusted(back.map_coords(c, &params.field)))
        .collect();
    points.sort();
    points.dedup();
    // Coincident points mod p collapse the orbit into a smaller type.
    if Some(points.len()) != kind.expected_size() {
        return None;
    }
    assert!(
        points.iter().all(|p| on_surface(p.coords(), params)),
        "{kind:?} template point off the surface"
    );
    assert!(
        is_gamma_closed(&points, params),
        "{kind:?} template orbit not closed"
    );
    Some(SmallOrbit {
        kind,
        points,
        provenance: Some(back),
    })
}

/// Type II–IV orbits obtained from templates among the equivalent parameters.
pub fn typed_orbits(params: &ParamsMod) -> Vec<SmallOrbit> {
    let k = &params.field;
    let mut out: Vec<SmallOrbit> = Vec::new();
    let zero = FpElem::ZERO;
    let minus_one = k.elem(-1);
    for (q, t) in equivalents_mod(params) {
        let [a, b, c] = q.abc;
        let mut found = Vec::new();
        if b.is_zero() && c.is_zero() {
            let disc = k.add(k.square(a), k.mul(k.elem(4), q.d));
            if k.legendre(disc) == 1 {
                let roots = k.roots_sum_product(a, k.neg(q.d));
                let tpl: Vec<_> = roots.iter().map(|&r| [r, zero, zero]).collect();
                found.push(make_orbit(OrbitKind::TypeII, &tpl, t, params));
            }
        }
        if a == k.elem(-2) && b == c && q.d == minus_one {
            let tpl = [
                [minus_one, zero, zero],
                [minus_one, b, zero],
                [minus_one, zero, b],
            ];
            found.push(make_orbit(OrbitKind::TypeIII, &tpl, t, params));
        }
        if a == b && b == c && q.d == k.add(k.elem(4), k.mul(k.elem(3), a)) {
            let m = k.add(a, k.elem(2));
            let tpl = [
                [minus_one, minus_one, minus_one],
                [m, minus_one, minus_one],
                [minus_one, m, minus_one],
                [minus_one, minus_one, m],
            ];
            found.push(make_orbit(OrbitKind::TypeIV, &tpl, t, params));
        }
        for orbit in found.into_iter().flatten() {
            if !out.iter().any(|o| o.points == orbit.points) {
                out.push(orbit);
            }
        }
    }
    out.sort_by(|a, b| (a.kind, &a.points).cmp(&(b.kind, &b.points)));
    out
}

/// The computable part of E(p): Type I singletons and the templated orbits.
pub fn expected_small_orbits(params: &ParamsMod) -> Vec<SmallOrbit> {
    let mut out: Vec<SmallOrbit> = type1_points(params)
        .into_iter()
        .map(|p| SmallOrbit {
            kind: OrbitKind::TypeI,
            points: vec![p],
            provenance: None,
        })
        .collect();
    for orbit in typed_orbits(params) {
        if !out.iter().any(|o| o.points == orbit.points) {
            out.push(orbit);
        }
    }
    out
}

/// Points fixed by both V_i and V_j (i < j), from the roots of f on the third axis.
///
/// There are at most four off the slices at ±2. On those slices the two conditions
/// become linear and dependent when the parameters are degenerate mod p, and a whole
/// line of fixed points can appear.
pub fn double_fixed_points(params: &ParamsMod, pair: (Axis, Axis)) -> Vec<SurfacePoint> {
    let k = &params.field;
    let fixed_axis = Axis::ALL
        .into_iter()
        .find(|&a| a != pair.0 && a != pair.1)
        .expect("pair of distinct axes");
    let vi = Move::vieta(pair.0);
    let vj = Move::vieta(pair.1);
    let (j, l) = fixed_axis.others();
    let (b, c) = (params.abc[j], params.abc[l]);
    let mut out = Vec::new();
    for s in 0..k.p() {
        let s = k.elem(s as i64);
        let den = k.sub(k.square(s), k.elem(4));
        if den.is_zero() {
            for p in slice_points(fixed_axis, s, params) {
                let c0 = p.coords();
                if vi.apply_raw(c0, params) == c0 && vj.apply_raw(c0, params) == c0 {
                    out.push(p);
                }
            }
        } else if eval_f(fixed_axis, s, params).is_zero() {
            let u = k.div(k.neg(k.add(k.mul(k.elem(2), b), k.mul(c, s))), den);
            let w = k.div(k.neg(k.add(k.mul(k.elem(2), c), k.mul(b, s))), den);
            let mut coords = [FpElem::ZERO; 3];
            coords[fixed_axis.index()] = s;
            coords[j] = u;
            coords[l] = w;
            if on_surface(coords, params) {
                out.push(SurfacePoint::trusted(coords));
            }
        }
    }
    out.sort();
    out
}
