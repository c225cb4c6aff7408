//! Conic slices C_i(c): classification, Dehn twists, orbit partitions and connectivity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fp2Elem, FpElem, RootInfo, RootKind};
use crate::surface::{
    eval_f, eval_kappa, generators, on_surface, Axis, GroupSelector, Move, ParamsMod, SurfacePoint,
};
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SliceClass {
    Hyperbolic,
    Elliptic,
    ParabolicGeneric,
    ParabolicSpecial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SliceSubgroup {
    TwistOnly,
    TwoVieta,
    /// The two Vieta involutions plus the (negated) transposition of the free pair, when available.
    TwoVietaWithSwap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub axis: usize,
    pub value: u32,
    pub class: SliceClass,
    pub root: RootInfo,
    pub kappa: Option<u32>,
    pub f_value: u32,
    pub size: usize,
    pub predicted_size: usize,
    pub predicted_transitive_pair: Option<bool>,
}

/// Coefficients (a_i, a_j, a_k) of the fixed axis and the two free coordinates j < k.
fn slice_coeffs(axis: Axis, params: &ParamsMod) -> (FpElem, FpElem, FpElem) {
    let (j, k) = axis.others();
    (params.abc[axis.index()], params.abc[j], params.abc[k])
}

fn parabolic_sign(value: FpElem, params: &ParamsMod) -> Option<i8> {
    let k = &params.field;
    if value == k.elem(2) {
        Some(1)
    } else if value == k.elem(-2) {
        Some(-1)
    } else {
        None
    }
}

pub fn slice_class(axis: Axis, value: FpElem, params: &ParamsMod) -> SliceClass {
    let k = &params.field;
    match parabolic_sign(value, params) {
        Some(eps) => {
            let (_, b, c) = slice_coeffs(axis, params);
            let special = if eps > 0 { k.add(b, c) } else { k.sub(b, c) };
            if special.is_zero() {
                SliceClass::ParabolicSpecial
            } else {
                SliceClass::ParabolicGeneric
            }
        }
        None => match k.char_root(value).kind {
            RootKind::Hyperbolic(_) => SliceClass::Hyperbolic,
            RootKind::Elliptic(_) => SliceClass::Elliptic,
            RootKind::Parabolic(_) => unreachable!("±2 handled above"),
        },
    }
}

/// Slice size predicted by the hyperbola/ellipse/parabola counts.
pub fn predicted_slice_size(axis: Axis, value: FpElem, params: &ParamsMod) -> usize {
    let k = &params.field;
    let p = k.p() as usize;
    match slice_class(axis, value, params) {
        SliceClass::Hyperbolic => {
            if eval_f(axis, value, params).is_zero() {
                2 * p - 1
            } else {
                p - 1
            }
        }
        SliceClass::Elliptic => {
            if eval_f(axis, value, params).is_zero() {
                1
            } else {
                p + 1
            }
        }
        SliceClass::ParabolicGeneric => p,
        SliceClass::ParabolicSpecial => {
            let eps = parabolic_sign(value, params).unwrap();
            let (a, _, c) = slice_coeffs(axis, params);
            let eight_a = k.mul(k.elem(8 * eps as i64), a);
            let disc = k.sub(
                k.add(k.add(eight_a, k.square(c)), k.mul(k.elem(4), params.d)),
                k.elem(16),
            );
            p * (1 + k.legendre(disc)) as usize
        }
    }
}

/// Assembles a full triple from the fixed value and the free pair.
fn assemble(axis: Axis, value: FpElem, u: FpElem, w: FpElem) -> [FpElem; 3] {
    match axis {
        Axis::X => [value, u, w],
        Axis::Y => [u, value, w],
        Axis::Z => [u, w, value],
    }
}

fn free_pair(axis: Axis, c: [FpElem; 3]) -> (FpElem, FpElem) {
    let (j, k) = axis.others();
    (c[j], c[k])
}

/// All points of the slice, in lexicographic order.
pub fn slice_points(axis: Axis, value: FpElem, params: &ParamsMod) -> Vec<SurfacePoint> {
    let k = &params.field;
    let (a, b, c) = slice_coeffs(axis, params);
    let s = value;
    let base = k.sub(k.sub(k.square(s), k.mul(a, s)), params.d);
    let mut out = Vec::new();
    for u in 0..k.p() {
        let u = k.elem(u as i64);
        // w² − (c + s·u)·w + (u² − b·u + s² − a·s − D) = 0
        let sum = k.add(c, k.mul(s, u));
        let prod = k.add(k.sub(k.square(u), k.mul(b, u)), base);
        for w in k.roots_sum_product(sum, prod) {
            out.push(SurfacePoint::trusted(assemble(axis, value, u, w)));
        }
    }
    out
}

fn check_on_slice(axis: Axis, value: FpElem, p: SurfacePoint, params: &ParamsMod) -> Result<()> {
    if p.coord(axis) != value || !on_surface(p.coords(), params) {
        return Err(Error::OffSlice);
    }
    Ok(())
}

/// The Dehn twist D_i = V_k ∘ V_j for free coordinates j < k.
pub fn dehn_apply(
    axis: Axis,
    value: FpElem,
    p: SurfacePoint,
    params: &ParamsMod,
) -> Result<SurfacePoint> {
    check_on_slice(axis, value, p, params)?;
    let (j, k) = axis.others();
    let c = Move::vieta(Axis::ALL[j]).apply_raw(p.coords(), params);
    let c = Move::vieta(Axis::ALL[k]).apply_raw(c, params);
    Ok(SurfacePoint::trusted(c))
}

/// Order of the twist as a map of the slice.
pub fn twist_order(value: FpElem, params: &ParamsMod) -> u64 {
    let info = params.field.char_root(value);
    match info.kind {
        RootKind::Parabolic(_) => info.order,
        _ => info.order / num_integer::gcd(info.order, 2),
    }
}

/// Center of the twist's affine action on a non-parabolic slice.
fn center(axis: Axis, value: FpElem, params: &ParamsMod) -> (FpElem, FpElem) {
    let k = &params.field;
    let (_, b, c) = slice_coeffs(axis, params);
    let s = value;
    let den = k.sub(k.square(s), k.elem(4));
    let y0 = k.div(k.neg(k.add(k.mul(k.elem(2), b), k.mul(c, s))), den);
    let z0 = k.div(k.neg(k.add(k.mul(k.elem(2), c), k.mul(b, s))), den);
    (y0, z0)
}

fn root_in_fp2(info: &RootInfo) -> Option<Fp2Elem> {
    match info.kind {
        RootKind::Hyperbolic(chi) => Some(Fp2Elem::from_base(chi)),
        RootKind::Elliptic(chi) => Some(chi),
        RootKind::Parabolic(_) => None,
    }
}

/// Eigen-coordinates (ξ, η) of a slice point; `None` on parabolic slices.
///
/// (u, w) = (u0, w0) + ξ(1, χ) + η(1, χ⁻¹), so the twist acts by ξ ↦ χ²ξ, η ↦ χ⁻²η.
/// On elliptic slices η is the conjugate of ξ.
pub fn diagonal_coords(
    axis: Axis,
    p: SurfacePoint,
    params: &ParamsMod,
) -> Option<(Fp2Elem, Fp2Elem)> {
    let k = &params.field;
    let value = p.coord(axis);
    let info = k.char_root(value);
    let chi = root_in_fp2(&info)?;
    let chi_inv = k.inv2(chi);
    let (u0, w0) = center(axis, value, params);
    let (u, w) = free_pair(axis, p.coords());
    let du = Fp2Elem::from_base(k.sub(u, u0));
    let dw = Fp2Elem::from_base(k.sub(w, w0));
    let gap_inv = k.inv2(k.sub2(chi, chi_inv));
    let xi = k.mul2(k.sub2(dw, k.mul2(chi_inv, du)), gap_inv);
    let eta = match info.kind {
        RootKind::Elliptic(_) => k.conj(xi),
        _ => k.mul2(k.sub2(k.mul2(chi, du), dw), gap_inv),
    };
    Some((xi, eta))
}

/// t-th iterate of the twist in closed form (negative t allowed).
pub fn dehn_power(
    axis: Axis,
    value: FpElem,
    t: i64,
    p: SurfacePoint,
    params: &ParamsMod,
) -> Result<SurfacePoint> {
    check_on_slice(axis, value, p, params)?;
    let k = &params.field;
    let info = k.char_root(value);
    let (u, w) = free_pair(axis, p.coords());
    let (u, w) = match info.kind {
        RootKind::Parabolic(eps) => {
            let (_, b, c) = slice_coeffs(axis, params);
            let e = k.elem(eps as i64);
            let two = k.elem(2);
            // N = L − I = [[−2, 2ε], [−2ε, 2]] is nilpotent, so
            // v_t = v + t(Nv + o) + C(t,2)·No with offset o = (b, 2εb + c).
            let nv = (
                k.add(k.mul(k.neg(two), u), k.mul(k.mul(two, e), w)),
                k.add(k.mul(k.neg(k.mul(two, e)), u), k.mul(two, w)),
            );
            let off = (b, k.add(k.mul(k.mul(two, e), b), c));
            let scale = k.mul(two, k.add(b, k.mul(e, c)));
            let no = (scale, k.mul(scale, e));
            let tt = k.elem(t);
            let binom = k.half(k.mul(tt, k.sub(tt, FpElem::ONE)));
            (
                k.add(k.add(u, k.mul(tt, k.add(nv.0, off.0))), k.mul(binom, no.0)),
                k.add(k.add(w, k.mul(tt, k.add(nv.1, off.1))), k.mul(binom, no.1)),
            )
        }
        _ => {
            let chi = root_in_fp2(&info).unwrap();
            let (xi, eta) = diagonal_coords(axis, p, params).unwrap();
            let e = (2 * t as i128).rem_euclid(info.order as i128) as u64;
            let scale = k.pow2(chi, e);
            let scale_inv = k.inv2(scale);
            let xi_t = k.mul2(scale, xi);
            let eta_t = k.mul2(scale_inv, eta);
            let chi_inv = k.inv2(chi);
            let (u0, w0) = center(axis, value, params);
            let du = k.add2(xi_t, eta_t);
            let dw = k.add2(k.mul2(chi, xi_t), k.mul2(chi_inv, eta_t));
            debug_assert!(du.is_base() && dw.is_base());
            (k.add(u0, du.a), k.add(w0, dw.a))
        }
    };
    let image = assemble(axis, value, u, w);
    debug_assert!(on_surface(image, params));
    Ok(SurfacePoint::trusted(image))
}

fn slice_moves(axis: Axis, params: &ParamsMod, subgroup: SliceSubgroup) -> Vec<Move> {
    let (j, k) = axis.others();
    let mut moves = vec![Move::vieta(Axis::ALL[j]), Move::vieta(Axis::ALL[k])];
    if subgroup == SliceSubgroup::TwoVietaWithSwap {
        moves.extend(
            generators(params, GroupSelector::GammaPrime)
                .into_iter()
                .filter(|m| {
                    matches!(
                        m,
                        Move::TauXY
                            | Move::TauXZ
                            | Move::TauYZ
                            | Move::NegTauXY
                            | Move::NegTauXZ
                            | Move::NegTauYZ
                    ) && m.pair() == Some((j, k))
                }),
        );
    }
    moves
}

/// Connected components of a slice under the chosen moves, by direct traversal.
pub fn slice_orbit_partition(
    axis: Axis,
    value: FpElem,
    params: &ParamsMod,
    subgroup: SliceSubgroup,
) -> Vec<Vec<SurfacePoint>> {
    let pts = slice_points(axis, value, params);
    let index = |q: SurfacePoint| pts.binary_search(&q).expect("image stays on slice");
    let mut uf = UnionFind::new(pts.len());
    let moves = slice_moves(axis, params, subgroup);
    for (i, &q) in pts.iter().enumerate() {
        if subgroup == SliceSubgroup::TwistOnly {
            let img = dehn_apply(axis, value, q, params).expect("point on slice");
            uf.union(i as u32, index(img) as u32);
        } else {
            for m in &moves {
                let img = SurfacePoint::trusted(m.apply_raw(q.coords(), params));
                uf.union(i as u32, index(img) as u32);
            }
        }
    }
    let mut blocks: Vec<Vec<SurfacePoint>> = Vec::new();
    let mut slot = vec![usize::MAX; pts.len()];
    for (i, &q) in pts.iter().enumerate() {
        let r = uf.find(i as u32) as usize;
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(q);
    }
    blocks
}

/// Whether the two Vieta involutions act transitively on a maximal-order slice.
pub fn transitivity_predicted(axis: Axis, value: FpElem, params: &ParamsMod) -> Option<bool> {
    let k = &params.field;
    let kappa = eval_kappa(axis, value, params).ok()?;
    if kappa.is_zero() || !k.char_root(value).is_maximal(k) {
        return None;
    }
    Some(k.legendre(eval_f(axis, value, params)) == -1)
}

pub fn slice_report(axis: Axis, value: FpElem, params: &ParamsMod) -> SliceReport {
    let k = &params.field;
    SliceReport {
        axis: axis.number(),
        value: value.value(),
        class: slice_class(axis, value, params),
        root: k.char_root(value),
        kappa: eval_kappa(axis, value, params).ok().map(|v| v.value()),
        f_value: eval_f(axis, value, params).value(),
        size: slice_points(axis, value, params).len(),
        predicted_size: predicted_slice_size(axis, value, params),
        predicted_transitive_pair: transitivity_predicted(axis, value, params),
    }
}

/// Maximum of the coordinate orders.
pub fn point_order(p: SurfacePoint, params: &ParamsMod) -> u64 {
    let k = &params.field;
    p.coords()
        .iter()
        .map(|&c| k.coordinate_order(c))
        .max()
        .unwrap()
}

/// Whether the slice through `p` fixing `axis` is connected under the slice moves of `sel`.
///
/// Under `GammaPrime` the transposition of the free pair counts as a slice move
/// when it is a generator. Exact for every slice: the criterion "maximal order and
/// legendre(f_i) = −1" is widened to the twist-orbit count it stands for.
pub fn is_connecting(p: SurfacePoint, axis: Axis, params: &ParamsMod, sel: GroupSelector) -> bool {
    let k = &params.field;
    let value = p.coord(axis);
    let n = k.p() as u64;
    match slice_class(axis, value, params) {
        SliceClass::ParabolicGeneric => true,
        SliceClass::ParabolicSpecial => predicted_slice_size(axis, value, params) == 2 * n as usize,
        class => {
            let f = eval_f(axis, value, params);
            if f.is_zero() {
                // The elliptic slice is the single double fixed point.
                return class == SliceClass::Elliptic;
            }
            let full = if class == SliceClass::Hyperbolic {
                n - 1
            } else {
                n + 1
            };
            // A Vieta block is at most two orbits of the rotation generating the
            // slice group: the twist (ξ ↦ χ²ξ), or with a swap σ the map σ∘V_j,
            // which acts by ξ ↦ χξ (transposition) or ξ ↦ −χξ (negated transposition).
            let rotation = match swap_move(axis, params, sel) {
                None => twist_order(value, params),
                Some(m) => {
                    let sign = if is_negated_swap(m) { -1 } else { 1 };
                    scaled_root_order(value, sign, params)
                }
            };
            rotation == full || (2 * rotation == full && k.legendre(f) == -1)
        }
    }
}

fn is_negated_swap(m: Move) -> bool {
    matches!(m, Move::NegTauXY | Move::NegTauXZ | Move::NegTauYZ)
}

/// The generator of `sel` exchanging the two free coordinates, if any.
fn swap_move(axis: Axis, params: &ParamsMod, sel: GroupSelector) -> Option<Move> {
    if sel != GroupSelector::GammaPrime {
        return None;
    }
    slice_moves(axis, params, SliceSubgroup::TwoVietaWithSwap)
        .get(2)
        .copied()
}

/// Order of ±χ for the characteristic root χ of a non-parabolic value.
fn scaled_root_order(value: FpElem, sign: i64, params: &ParamsMod) -> u64 {
    let k = &params.field;
    let s = k.elem(sign);
    match k.char_root(value).kind {
        RootKind::Hyperbolic(chi) => k.order(k.mul(s, chi)).expect("root is nonzero"),
        RootKind::Elliptic(chi) => k.order2(k.scale2(s, chi)).expect("root is nonzero"),
        RootKind::Parabolic(_) => k.p() as u64,
    }
}

pub fn in_cage(p: SurfacePoint, params: &ParamsMod, sel: GroupSelector) -> bool {
    Axis::ALL
        .iter()
        .any(|&axis| is_connecting(p, axis, params, sel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldPrime;

    fn pm(p: u64, v: [i64; 4]) -> ParamsMod {
        ParamsMod::new(FieldPrime::new(p).unwrap(), v)
    }

    #[test]
    fn slice_sizes_match_brute_force() {
        for v in [
            [0, -1, -1, 0],
            [2, 2, 0, 3],
            [1, 2, 3, 5],
            [0, 0, 0, 0],
            [3, 3, -3, 1],
        ] {
            for p in [5u64, 7, 11, 13] {
                let q = pm(p, v);
                let k = q.field;
                for axis in Axis::ALL {
                    for s in 0..p as i64 {
                        let s = k.elem(s);
                        let pts = slice_points(axis, s, &q);
                        let mut brute = Vec::new();
                        for u in 0..p as i64 {
                            for w in 0..p as i64 {
                                let c = assemble(axis, s, k.elem(u), k.elem(w));
                                if on_surface(c, &q) {
                                    brute.push(SurfacePoint::trusted(c));
                                }
                            }
                        }
                        brute.sort();
                        assert_eq!(pts, brute);
                        assert_eq!(pts.len(), predicted_slice_size(axis, s, &q), "{v:?} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn parabolic_slice_of_figure_two_params() {
        let q = pm(7, [0, -1, -1, 0]);
        let k = q.field;
        // x = 2 with B + C = −2 ≠ 0: a generic parabola.
        assert_eq!(
            slice_class(Axis::X, k.elem(2), &q),
            SliceClass::ParabolicGeneric
        );
        assert_eq!(slice_points(Axis::X, k.elem(2), &q).len(), 7);
        // x = −2 with B = C: −8A + C² + 4D − 16 = −15 ≡ 6, a nonresidue mod 7.
        assert_eq!(
            slice_class(Axis::X, k.elem(-2), &q),
            SliceClass::ParabolicSpecial
        );
        assert_eq!(slice_points(Axis::X, k.elem(-2), &q).len(), 0);
    }

    #[test]
    fn dehn_power_matches_iteration() {
        for v in [[3, -7, 11, 5], [0, 0, 0, 0], [2, 2, 0, 3], [5, 5, 1, 2]] {
            let q = pm(101, v);
            let k = q.field;
            for axis in Axis::ALL {
                for s in [0i64, 1, 2, 3, 7, 50, 99, 100] {
                    let s = k.elem(s);
                    for &p0 in slice_points(axis, s, &q).iter().step_by(17) {
                        let mut cur = p0;
                        for t in 0..=50 {
                            assert_eq!(dehn_power(axis, s, t, p0, &q).unwrap(), cur);
                            cur = dehn_apply(axis, s, cur, &q).unwrap();
                        }
                        let ord = twist_order(s, &q) as i64;
                        assert_eq!(dehn_power(axis, s, ord, p0, &q).unwrap(), p0);
                        let a = dehn_power(axis, s, -13, p0, &q).unwrap();
                        assert_eq!(dehn_power(axis, s, 13, a, &q).unwrap(), p0);
                        let b = dehn_power(axis, s, 9, dehn_power(axis, s, 4, p0, &q).unwrap(), &q);
                        assert_eq!(b.unwrap(), dehn_power(axis, s, 13, p0, &q).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn dehn_rejects_off_slice() {
        let q = pm(101, [0, 0, 0, 0]);
        let k = q.field;
        let p = SurfacePoint::from_i64([3, 3, 3], &q).unwrap();
        assert_eq!(dehn_apply(Axis::X, k.elem(4), p, &q), Err(Error::OffSlice));
        assert_eq!(
            dehn_power(Axis::Y, k.elem(4), 2, p, &q),
            Err(Error::OffSlice)
        );
    }

    #[test]
    fn xi_eta_product_is_kappa() {
        for v in [[3, -7, 11, 5], [0, 0, 0, 0], [1, 2, 3, 5]] {
            for p in [31u64, 101] {
                let q = pm(p, v);
                let k = q.field;
                for axis in Axis::ALL {
                    for s in 0..p as i64 {
                        let s = k.elem(s);
                        let Ok(kappa) = eval_kappa(axis, s, &q) else {
                            continue;
                        };
                        for pt in slice_points(axis, s, &q) {
                            let (xi, eta) = diagonal_coords(axis, pt, &q).unwrap();
                            assert_eq!(k.mul2(xi, eta), Fp2Elem::from_base(kappa));
                            let fixed = Move::vieta(Axis::ALL[axis.others().0])
                                .apply_raw(pt.coords(), &q)
                                == pt.coords()
                                && Move::vieta(Axis::ALL[axis.others().1])
                                    .apply_raw(pt.coords(), &q)
                                    == pt.coords();
                            assert_eq!(fixed, xi.is_zero() && eta.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn twist_orbit_of_xi_has_order_of_chi_squared() {
        let q = pm(101, [1, 2, 3, 5]);
        let k = q.field;
        for s in 0..101 {
            let s = k.elem(s);
            if slice_class(Axis::X, s, &q) != SliceClass::Hyperbolic {
                continue;
            }
            let n = twist_order(s, &q) as usize;
            for block in slice_orbit_partition(Axis::X, s, &q, SliceSubgroup::TwistOnly) {
                let (xi, eta) = diagonal_coords(Axis::X, block[0], &q).unwrap();
                if xi.is_zero() && eta.is_zero() {
                    assert_eq!(block.len(), 1);
                } else {
                    assert_eq!(block.len(), n);
                }
            }
        }
    }

    #[test]
    fn markoff_criterion_is_ellipticity() {
        let q = pm(101, [0, 0, 0, 0]);
        let k = q.field;
        for s in 0..101 {
            let s = k.elem(s);
            if let Some(pred) = transitivity_predicted(Axis::X, s, &q) {
                assert_eq!(pred, slice_class(Axis::X, s, &q) == SliceClass::Elliptic);
            }
        }
        // κ = 0 at x = 0 for Markoff.
        assert_eq!(transitivity_predicted(Axis::X, k.elem(0), &q), None);
        assert_eq!(transitivity_predicted(Axis::X, k.elem(2), &q), None);
    }

    #[test]
    fn vieta_blocks_are_paths_or_even_cycles() {
        for v in [[3, -7, 11, 5], [2, 2, 0, 3], [0, 0, 0, 0]] {
            let q = pm(61, v);
            let k = q.field;
            for axis in Axis::ALL {
                let (j, l) = axis.others();
                for s in 0..61 {
                    let s = k.elem(s);
                    for block in slice_orbit_partition(axis, s, &q, SliceSubgroup::TwoVieta) {
                        let fixed: usize = block
                            .iter()
                            .map(|pt| {
                                [j, l]
                                    .iter()
                                    .filter(|&&i| {
                                        Move::vieta(Axis::ALL[i]).apply_raw(pt.coords(), &q)
                                            == pt.coords()
                                    })
                                    .count()
                            })
                            .sum();
                        assert!(fixed == 0 || fixed == 2);
                        if fixed == 0 {
                            assert_eq!(block.len() % 2, 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn point_order_examples() {
        let q = pm(101, [1, 2, 3, 5]);
        let k = q.field;
        let pts = slice_points(Axis::X, k.elem(2), &q);
        for pt in pts {
            assert!(point_order(pt, &q) >= 101);
            assert!(is_connecting(pt, Axis::X, &q, GroupSelector::Gamma));
        }
    }
}
