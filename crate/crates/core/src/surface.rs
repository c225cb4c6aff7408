//! The surface X²+Y²+Z² = XYZ+AX+BY+CZ+D, its automorphisms and parameter equivalence.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::delta;
use crate::error::{Error, Result};
use crate::field::{FieldPrime, FpElem};

/// Coordinate axis; axis i fixes the i-th coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Axis from its 1-based number.
    pub fn from_number(n: usize) -> Result<Axis> {
        match n {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            3 => Ok(Axis::Z),
            _ => Err(Error::BadAxis(n)),
        }
    }

    pub fn number(self) -> usize {
        self.index() + 1
    }

    /// The two free coordinates of the slice, in increasing order.
    pub fn others(self) -> (usize, usize) {
        match self {
            Axis::X => (1, 2),
            Axis::Y => (0, 2),
            Axis::Z => (0, 1),
        }
    }
}

/// Integer parameters (A, B, C, D).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamQuad {
    pub abc: [BigInt; 3],
    pub d: BigInt,
}

impl ParamQuad {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        ParamQuad { abc: [a, b, c], d }
    }

    pub fn from_i64(v: [i64; 4]) -> Self {
        ParamQuad::new(v[0].into(), v[1].into(), v[2].into(), v[3].into())
    }

    pub fn to_vec(&self) -> [BigInt; 4] {
        [
            self.abc[0].clone(),
            self.abc[1].clone(),
            self.abc[2].clone(),
            self.d.clone(),
        ]
    }

    pub fn reduce(&self, field: FieldPrime) -> ParamsMod {
        ParamsMod {
            abc: [
                field.from_bigint(&self.abc[0]),
                field.from_bigint(&self.abc[1]),
                field.from_bigint(&self.abc[2]),
            ],
            d: field.from_bigint(&self.d),
            field,
        }
    }
}

impl std::fmt::Display for ParamQuad {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.abc[0], self.abc[1], self.abc[2], self.d
        )
    }
}

/// Parameters reduced mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamsMod {
    pub abc: [FpElem; 3],
    pub d: FpElem,
    pub field: FieldPrime,
}

impl ParamsMod {
    pub fn new(field: FieldPrime, v: [i64; 4]) -> Self {
        ParamsMod {
            abc: [field.elem(v[0]), field.elem(v[1]), field.elem(v[2])],
            d: field.elem(v[3]),
            field,
        }
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    fn lex_key(&self) -> [u32; 3] {
        [
            self.abc[0].value(),
            self.abc[1].value(),
            self.abc[2].value(),
        ]
    }
}

/// Value of x²+y²+z²−xyz−Ax−By−Cz−D.
pub fn surface_value(c: [FpElem; 3], params: &ParamsMod) -> FpElem {
    let k = &params.field;
    let [x, y, z] = c;
    let sq = k.add(k.add(k.square(x), k.square(y)), k.square(z));
    let lin = k.add(
        k.add(k.mul(params.abc[0], x), k.mul(params.abc[1], y)),
        k.mul(params.abc[2], z),
    );
    let xyz = k.mul(k.mul(x, y), z);
    k.sub(k.sub(k.sub(sq, xyz), lin), params.d)
}

pub fn on_surface(c: [FpElem; 3], params: &ParamsMod) -> bool {
    surface_value(c, params).is_zero()
}

/// A point of S(F_p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SurfacePoint([FpElem; 3]);

impl SurfacePoint {
    pub fn new(c: [FpElem; 3], params: &ParamsMod) -> Result<Self> {
        if on_surface(c, params) {
            Ok(SurfacePoint(c))
        } else {
            Err(Error::OffSurface)
        }
    }

    pub fn from_i64(c: [i64; 3], params: &ParamsMod) -> Result<Self> {
        let k = &params.field;
        SurfacePoint::new([k.elem(c[0]), k.elem(c[1]), k.elem(c[2])], params)
    }

    /// Wraps coordinates already known to satisfy the equation.
    pub(crate) fn trusted(c: [FpElem; 3]) -> Self {
        SurfacePoint(c)
    }

    pub fn coords(self) -> [FpElem; 3] {
        self.0
    }

    pub fn values(self) -> [u32; 3] {
        [self.0[0].value(), self.0[1].value(), self.0[2].value()]
    }

    pub fn coord(self, axis: Axis) -> FpElem {
        self.0[axis.index()]
    }
}

impl std::fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    V1,
    V2,
    V3,
    NegXY,
    NegXZ,
    NegYZ,
    TauXY,
    TauXZ,
    TauYZ,
    NegTauXY,
    NegTauXZ,
    NegTauYZ,
}

impl Move {
    pub const ALL: [Move; 12] = [
        Move::V1,
        Move::V2,
        Move::V3,
        Move::NegXY,
        Move::NegXZ,
        Move::NegYZ,
        Move::TauXY,
        Move::TauXZ,
        Move::TauYZ,
        Move::NegTauXY,
        Move::NegTauXZ,
        Move::NegTauYZ,
    ];

    pub fn vieta(axis: Axis) -> Move {
        [Move::V1, Move::V2, Move::V3][axis.index()]
    }

    /// Coordinate pair touched by a sign flip or transposition.
    pub fn pair(self) -> Option<(usize, usize)> {
        match self {
            Move::NegXY | Move::TauXY | Move::NegTauXY => Some((0, 1)),
            Move::NegXZ | Move::TauXZ | Move::NegTauXZ => Some((0, 2)),
            Move::NegYZ | Move::TauYZ | Move::NegTauYZ => Some((1, 2)),
            _ => None,
        }
    }

    /// Whether the move is an automorphism of the surface for these parameters.
    pub fn is_available(self, params: &ParamsMod) -> bool {
        let a = params.abc;
        let k = &params.field;
        match self {
            Move::V1 | Move::V2 | Move::V3 => true,
            Move::NegXY | Move::NegXZ | Move::NegYZ => {
                let (i, j) = self.pair().unwrap();
                a[i].is_zero() && a[j].is_zero()
            }
            Move::TauXY | Move::TauXZ | Move::TauYZ => {
                let (i, j) = self.pair().unwrap();
                a[i] == a[j]
            }
            Move::NegTauXY | Move::NegTauXZ | Move::NegTauYZ => {
                let (i, j) = self.pair().unwrap();
                a[i] == k.neg(a[j])
            }
        }
    }

    /// Image of a coordinate triple, without availability checks.
    pub fn apply_raw(self, c: [FpElem; 3], params: &ParamsMod) -> [FpElem; 3] {
        let k = &params.field;
        let [x, y, z] = c;
        let a = params.abc;
        match self {
            Move::V1 => [k.sub(k.add(a[0], k.mul(y, z)), x), y, z],
            Move::V2 => [x, k.sub(k.add(a[1], k.mul(x, z)), y), z],
            Move::V3 => [x, y, k.sub(k.add(a[2], k.mul(x, y)), z)],
            Move::NegXY => [k.neg(x), k.neg(y), z],
            Move::NegXZ => [k.neg(x), y, k.neg(z)],
            Move::NegYZ => [x, k.neg(y), k.neg(z)],
            Move::TauXY => [y, x, z],
            Move::TauXZ => [z, y, x],
            Move::TauYZ => [x, z, y],
            Move::NegTauXY => [k.neg(y), k.neg(x), z],
            Move::NegTauXZ => [k.neg(z), y, k.neg(x)],
            Move::NegTauYZ => [x, k.neg(z), k.neg(y)],
        }
    }
}

pub fn apply_move(m: Move, p: SurfacePoint, params: &ParamsMod) -> Result<SurfacePoint> {
    if !m.is_available(params) {
        return Err(Error::UnavailableMove(m));
    }
    let image = m.apply_raw(p.coords(), params);
    debug_assert!(on_surface(image, params));
    Ok(SurfacePoint(image))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSelector {
    Gamma,
    GammaTimesH,
    GammaPrime,
}

impl GroupSelector {
    pub fn name(self) -> &'static str {
        match self {
            GroupSelector::Gamma => "gamma",
            GroupSelector::GammaTimesH => "gamma-h",
            GroupSelector::GammaPrime => "gamma-prime",
        }
    }
}

/// Generator list of the selected group.
pub fn generators(params: &ParamsMod, sel: GroupSelector) -> Vec<Move> {
    let mut out = vec![Move::V1, Move::V2, Move::V3];
    if sel == GroupSelector::Gamma {
        return out;
    }
    let negs = [Move::NegXY, Move::NegXZ, Move::NegYZ];
    out.extend(negs.iter().copied().filter(|m| m.is_available(params)));
    if sel == GroupSelector::GammaPrime {
        for (tau, negtau) in [
            (Move::TauXY, Move::NegTauXY),
            (Move::TauXZ, Move::NegTauXZ),
            (Move::TauYZ, Move::NegTauYZ),
        ] {
            let (i, j) = tau.pair().unwrap();
            if tau.is_available(params) {
                out.push(tau);
            }
            // With both coefficients zero the negated transposition is the
            // composition of two generators already present; its edge is omitted.
            let both_zero = params.abc[i].is_zero() && params.abc[j].is_zero();
            if negtau.is_available(params) && !both_zero {
                out.push(negtau);
            }
        }
    }
    out
}

/// Permutation of coordinates with an even sign pattern.
///
/// Maps a point P to P' with P'_i = s_i·P[π(i)], and parameters the same way on (A,B,C).
/// It sends S_params onto S_{T(params)} and satisfies T∘V_{π(i)} = V_i∘T.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamTransform {
    pub perm: [usize; 3],
    pub signs: [i8; 3],
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

const SIGNS: [[i8; 3]; 4] = [[1, 1, 1], [-1, -1, 1], [-1, 1, -1], [1, -1, -1]];

impl ParamTransform {
    pub const IDENTITY: ParamTransform = ParamTransform {
        perm: [0, 1, 2],
        signs: [1, 1, 1],
    };

    pub fn all() -> impl Iterator<Item = ParamTransform> {
        PERMS.iter().flat_map(|&perm| {
            SIGNS
                .iter()
                .map(move |&signs| ParamTransform { perm, signs })
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn inverse(&self) -> ParamTransform {
        let mut perm = [0; 3];
        let mut signs = [1; 3];
        for i in 0..3 {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        ParamTransform { perm, signs }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &ParamTransform) -> ParamTransform {
        let mut perm = [0; 3];
        let mut signs = [1; 3];
        for i in 0..3 {
            perm[i] = other.perm[self.perm[i]];
            signs[i] = self.signs[i] * other.signs[self.perm[i]];
        }
        ParamTransform { perm, signs }
    }

    pub fn map_int(&self, q: &ParamQuad) -> ParamQuad {
        let f = |i: usize| {
            let v = q.abc[self.perm[i]].clone();
            if self.signs[i] < 0 {
                -v
            } else {
                v
            }
        };
        ParamQuad {
            abc: [f(0), f(1), f(2)],
            d: q.d.clone(),
        }
    }

    pub fn map_mod(&self, q: &ParamsMod) -> ParamsMod {
        ParamsMod {
            abc: self.map_coords(q.abc, &q.field),
            d: q.d,
            field: q.field,
        }
    }

    pub fn map_coords(&self, c: [FpElem; 3], field: &FieldPrime) -> [FpElem; 3] {
        let f = |i: usize| {
            let v = c[self.perm[i]];
            if self.signs[i] < 0 {
                field.neg(v)
            } else {
                v
            }
        };
        [f(0), f(1), f(2)]
    }

    /// Transports a point of S_params to S_{T(params)}.
    pub fn map_point(&self, p: SurfacePoint, field: &FieldPrime) -> SurfacePoint {
        SurfacePoint(self.map_coords(p.coords(), field))
    }
}

/// The 24 equivalent quadruples with the transforms realizing them.
pub fn equivalents(params: &ParamQuad) -> Vec<(ParamQuad, ParamTransform)> {
    ParamTransform::all()
        .map(|t| (t.map_int(params), t))
        .collect()
}

pub fn equivalents_mod(params: &ParamsMod) -> Vec<(ParamsMod, ParamTransform)> {
    ParamTransform::all()
        .map(|t| (t.map_mod(params), t))
        .collect()
}

fn cmp_int(a: &ParamQuad, b: &ParamQuad) -> Ordering {
    a.abc.cmp(&b.abc)
}

/// Lexicographically least equivalent quadruple (first transform on ties).
pub fn canonical_params(params: &ParamQuad) -> (ParamQuad, ParamTransform) {
    equivalents(params)
        .into_iter()
        .reduce(|best, cand| {
            if cmp_int(&cand.0, &best.0) == Ordering::Less {
                cand
            } else {
                best
            }
        })
        .expect("24 equivalents")
}

pub fn canonical_params_mod(params: &ParamsMod) -> (ParamsMod, ParamTransform) {
    equivalents_mod(params)
        .into_iter()
        .reduce(|best, cand| {
            if cand.0.lex_key() < best.0.lex_key() {
                cand
            } else {
                best
            }
        })
        .expect("24 equivalents")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy<Q> {
    Nondegenerate,
    Degenerate {
        witness: (Q, ParamTransform),
        equal_triple: bool,
    },
}

impl<Q> Degeneracy<Q> {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Degeneracy::Degenerate { .. })
    }

    pub fn is_equal_triple(&self) -> bool {
        matches!(
            self,
            Degeneracy::Degenerate {
                equal_triple: true,
                ..
            }
        )
    }
}

fn is_degenerate_form_int(q: &ParamQuad) -> bool {
    let [a, b, c] = &q.abc;
    a == b && BigInt::from(4) * &q.d + a * a == BigInt::from(8) * c + 16
}

pub(crate) fn is_degenerate_form_mod(q: &ParamsMod) -> bool {
    let k = &q.field;
    let [a, b, c] = q.abc;
    a == b && k.add(k.mul(k.elem(4), q.d), k.square(a)) == k.add(k.mul(k.elem(8), c), k.elem(16))
}

pub fn degeneracy_class(params: &ParamQuad) -> Degeneracy<ParamQuad> {
    let witness = equivalents(params)
        .into_iter()
        .filter(|(q, _)| is_degenerate_form_int(q))
        .reduce(|best, cand| {
            if cmp_int(&cand.0, &best.0) == Ordering::Less {
                cand
            } else {
                best
            }
        });
    match witness {
        None => Degeneracy::Nondegenerate,
        Some(witness) => {
            let [a, b, c] = &params.abc;
            let equal_triple = a.abs() == b.abs() && b.abs() == c.abs();
            Degeneracy::Degenerate {
                witness,
                equal_triple,
            }
        }
    }
}

pub fn degeneracy_class_mod(params: &ParamsMod) -> Degeneracy<ParamsMod> {
    let witness = equivalents_mod(params)
        .into_iter()
        .filter(|(q, _)| is_degenerate_form_mod(q))
        .reduce(|best, cand| {
            if cand.0.lex_key() < best.0.lex_key() {
                cand
            } else {
                best
            }
        });
    match witness {
        None => Degeneracy::Nondegenerate,
        Some(witness) => Degeneracy::Degenerate {
            witness,
            equal_triple: is_equal_triple_mod(params),
        },
    }
}

pub fn is_equal_triple_mod(params: &ParamsMod) -> bool {
    let k = &params.field;
    let [a, b, c] = params.abc;
    k.square(a) == k.square(b) && k.square(b) == k.square(c)
}

/// The quartic f_i evaluated at t.
pub fn eval_f(axis: Axis, t: FpElem, params: &ParamsMod) -> FpElem {
    let k = &params.field;
    let (j, l) = axis.others();
    let a = params.abc[axis.index()];
    let (b, c) = (params.abc[j], params.abc[l]);
    let t2 = k.square(t);
    let t3 = k.mul(t2, t);
    let t4 = k.square(t2);
    let four = k.elem(4);
    let mut acc = t4;
    acc = k.sub(acc, k.mul(a, t3));
    acc = k.sub(acc, k.mul(k.add(params.d, four), t2));
    acc = k.add(acc, k.mul(k.add(k.mul(four, a), k.mul(b, c)), t));
    k.add(
        acc,
        k.add(k.mul(four, params.d), k.add(k.square(b), k.square(c))),
    )
}

/// κ_i(t) = f_i(t)/(t²−4)².
pub fn eval_kappa(axis: Axis, t: FpElem, params: &ParamsMod) -> Result<FpElem> {
    let k = &params.field;
    let den = k.sub(k.square(t), k.elem(4));
    if den.is_zero() {
        return Err(Error::ParabolicValue);
    }
    Ok(k.div(eval_f(axis, t, params), k.square(den)))
}

/// Parameters attached to cluster coordinates (a₁, a₂, a₃).
pub fn cluster_lift(a1: &BigInt, a2: &BigInt, a3: &BigInt) -> ParamQuad {
    let two = BigInt::from(2);
    ParamQuad::new(
        -(&two * a1) - a2 * a3,
        -(&two * a2) - a1 * a3,
        -(&two * a3) - a1 * a2,
        -(&two * a1 * a2 * a3) - a1 * a1 - a2 * a2 - a3 * a3,
    )
}

/// Δ(A,B,C,D) evaluated exactly from the shipped coefficient table.
pub fn eval_delta(params: &ParamQuad) -> BigInt {
    let vals = params.to_vec();
    let mut total = BigInt::zero();
    for term in delta::terms() {
        let mut t = BigInt::from(term.coeff);
        for (v, &e) in vals.iter().zip(term.exps.iter()) {
            t *= num_traits::pow(v.clone(), e as usize);
        }
        total += t;
    }
    total
}

pub fn eval_delta_mod(params: &ParamsMod) -> FpElem {
    let k = &params.field;
    let vals = [params.abc[0], params.abc[1], params.abc[2], params.d];
    let mut total = FpElem::ZERO;
    for term in delta::terms() {
        let mut t = k.elem(term.coeff);
        for (&v, &e) in vals.iter().zip(term.exps.iter()) {
            t = k.mul(t, k.pow(v, e as u64));
        }
        total = k.add(total, t);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    fn pm(p: u64, v: [i64; 4]) -> ParamsMod {
        ParamsMod::new(field(p), v)
    }

    fn pt(params: &ParamsMod, c: [i64; 3]) -> SurfacePoint {
        SurfacePoint::from_i64(c, params).unwrap()
    }

    #[test]
    fn on_surface_examples() {
        let q = pm(101, [0, 0, 0, 0]);
        let k = q.field;
        assert!(on_surface([k.elem(0); 3], &q));
        assert!(!on_surface([k.elem(0); 3], &pm(101, [0, 0, 0, 1])));
        assert!(on_surface([k.elem(3); 3], &q));
        let q = pm(101, [2, 2, 0, 3]);
        assert!(on_surface([k.elem(1), k.elem(0), k.elem(2)], &q));
    }

    #[test]
    fn apply_move_examples() {
        let q = pm(101, [0, 0, 0, 0]);
        let p = pt(&q, [3, 3, 3]);
        assert_eq!(apply_move(Move::V1, p, &q).unwrap(), pt(&q, [6, 3, 3]));
        let q = pm(101, [2, 2, 0, 3]);
        let p = pt(&q, [1, 0, 2]);
        assert_eq!(apply_move(Move::V3, p, &q).unwrap(), pt(&q, [1, 0, -2]));
        assert_eq!(
            apply_move(Move::NegYZ, p, &q),
            Err(Error::UnavailableMove(Move::NegYZ))
        );
        let q = pm(101, [7, 0, 0, 5]);
        let k = q.field;
        let c = (0..101)
            .flat_map(|y| (0..101).map(move |z| (y, z)))
            .map(|(y, z)| [k.elem(1), k.elem(y), k.elem(z)])
            .find(|c| on_surface(*c, &q))
            .unwrap();
        let p = SurfacePoint::new(c, &q).unwrap();
        let img = apply_move(Move::NegYZ, p, &q).unwrap();
        assert_eq!(img.coords(), [c[0], k.neg(c[1]), k.neg(c[2])]);
    }

    #[test]
    fn generator_examples() {
        let q = pm(101, [0, 0, 0, 7]);
        let g = generators(&q, GroupSelector::GammaPrime);
        assert_eq!(
            g,
            vec![
                Move::V1,
                Move::V2,
                Move::V3,
                Move::NegXY,
                Move::NegXZ,
                Move::NegYZ,
                Move::TauXY,
                Move::TauXZ,
                Move::TauYZ
            ]
        );
        let q = pm(101, [2, 2, 0, 3]);
        assert_eq!(
            generators(&q, GroupSelector::GammaPrime),
            vec![Move::V1, Move::V2, Move::V3, Move::TauXY]
        );
        assert_eq!(
            generators(&q, GroupSelector::Gamma),
            vec![Move::V1, Move::V2, Move::V3]
        );
        let q = pm(101, [3, -3, 5, 1]);
        assert_eq!(
            generators(&q, GroupSelector::GammaPrime),
            vec![Move::V1, Move::V2, Move::V3, Move::NegTauXY]
        );
    }

    #[test]
    fn generator_sets_are_nested() {
        for v in [
            [0, 0, 0, 1],
            [0, 0, 3, 1],
            [2, 2, 2, 7],
            [1, -1, 0, 0],
            [1, 2, 3, 4],
        ] {
            let q = pm(13, v);
            let g = generators(&q, GroupSelector::Gamma);
            let gh = generators(&q, GroupSelector::GammaTimesH);
            let gp = generators(&q, GroupSelector::GammaPrime);
            assert!(g.iter().all(|m| gh.contains(m)));
            assert!(gh.iter().all(|m| gp.contains(m)));
        }
    }

    #[test]
    fn moves_are_involutions_exhaustive() {
        for p in [5u64, 7, 11, 13] {
            for v in [
                [0, 0, 0, 0],
                [0, 0, 0, 3],
                [1, 1, 1, 7],
                [2, -2, 0, 3],
                [1, 2, 3, 5],
            ] {
                let q = pm(p, v);
                let k = q.field;
                for x in 0..p as i64 {
                    for y in 0..p as i64 {
                        for z in 0..p as i64 {
                            let c = [k.elem(x), k.elem(y), k.elem(z)];
                            if !on_surface(c, &q) {
                                continue;
                            }
                            for m in Move::ALL.iter().filter(|m| m.is_available(&q)) {
                                let img = m.apply_raw(c, &q);
                                assert!(on_surface(img, &q), "{m:?} leaves surface");
                                assert_eq!(m.apply_raw(img, &q), c);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn equivalents_examples() {
        let q = ParamQuad::from_i64([0, 0, 0, 4]);
        let e = equivalents(&q);
        assert_eq!(e.len(), 24);
        assert!(e.iter().all(|(r, _)| *r == q));

        let e = equivalents(&ParamQuad::from_i64([1, 2, 3, 5]));
        let set: std::collections::HashSet<_> = e.iter().map(|(r, _)| r.clone()).collect();
        assert_eq!(set.len(), 24);
        assert!(set.contains(&ParamQuad::from_i64([2, 1, 3, 5])));
        assert!(set.contains(&ParamQuad::from_i64([-1, -2, 3, 5])));

        let e = equivalents(&ParamQuad::from_i64([2, 2, 0, 3]));
        assert!(e
            .iter()
            .any(|(r, _)| *r == ParamQuad::from_i64([0, 2, 2, 3])));
    }

    #[test]
    fn transform_inverse_and_compose() {
        let k = field(31);
        let c = [k.elem(3), k.elem(5), k.elem(11)];
        for t in ParamTransform::all() {
            let inv = t.inverse();
            assert_eq!(inv.map_coords(t.map_coords(c, &k), &k), c);
            assert!(t.compose(&inv).is_identity());
            for u in ParamTransform::all() {
                assert_eq!(
                    t.compose(&u).map_coords(c, &k),
                    t.map_coords(u.map_coords(c, &k), &k)
                );
            }
        }
    }

    #[test]
    fn transforms_commute_with_vieta() {
        for p in [5u64, 7, 13, 31] {
            let q = pm(p, [1, 2, 3, 5]);
            let k = q.field;
            for (q2, t) in equivalents_mod(&q) {
                for x in 0..p as i64 {
                    for y in 0..p as i64 {
                        for z in 0..p as i64 {
                            let c = [k.elem(x), k.elem(y), k.elem(z)];
                            if !on_surface(c, &q) {
                                continue;
                            }
                            let tc = t.map_coords(c, &k);
                            assert!(on_surface(tc, &q2));
                            for i in Axis::ALL {
                                let src = Axis::ALL[t.perm[i.index()]];
                                let lhs = t.map_coords(Move::vieta(src).apply_raw(c, &q), &k);
                                let rhs = Move::vieta(i).apply_raw(tc, &q2);
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_examples() {
        let q = ParamQuad::from_i64([0, 0, 0, 4]);
        assert_eq!(canonical_params(&q).0, q);
        let q = ParamQuad::from_i64([2, 1, 3, 5]);
        let (c, t) = canonical_params(&q);
        let sorted = equivalents(&q)
            .into_iter()
            .map(|(r, _)| r.abc)
            .min()
            .unwrap();
        assert_eq!(c.abc, sorted);
        assert_eq!(t.map_int(&q), c);
        assert_eq!(canonical_params(&c).0, c);
    }

    #[test]
    fn degeneracy_examples() {
        let d = degeneracy_class(&ParamQuad::from_i64([0, 0, 0, 4]));
        assert!(d.is_equal_triple());
        assert_eq!(
            degeneracy_class(&ParamQuad::from_i64([0, 0, 0, 0])),
            Degeneracy::Nondegenerate
        );
        let d = degeneracy_class(&ParamQuad::from_i64([2, 2, 0, 3]));
        match d {
            Degeneracy::Degenerate {
                witness,
                equal_triple,
            } => {
                assert!(!equal_triple);
                assert_eq!(witness.0, ParamQuad::from_i64([-2, -2, 0, 3]));
                assert_eq!(
                    witness.1.map_int(&ParamQuad::from_i64([2, 2, 0, 3])),
                    witness.0
                );
            }
            _ => panic!("expected degenerate"),
        }
        assert!(degeneracy_class(&ParamQuad::from_i64([2, 2, 2, 7])).is_equal_triple());
    }

    #[test]
    fn degeneracy_mod_p() {
        // Via the equivalent (0,0,2,3): 4·3 = 12 ≡ 32 = 8·2 + 16 only mod 5.
        let q = pm(5, [2, 0, 0, 3]);
        assert!(degeneracy_class_mod(&q).is_degenerate());
        assert!(!degeneracy_class_mod(&pm(7, [2, 0, 0, 3])).is_degenerate());
        assert!(!degeneracy_class(&ParamQuad::from_i64([2, 0, 0, 3])).is_degenerate());
    }

    #[test]
    fn f_and_kappa() {
        let q = pm(101, [0, 0, 0, 0]);
        let k = q.field;
        assert_eq!(eval_f(Axis::X, k.elem(3), &q), k.elem(45));
        assert_eq!(
            eval_kappa(Axis::X, k.elem(2), &q),
            Err(Error::ParabolicValue)
        );
        assert_eq!(
            eval_kappa(Axis::Y, k.elem(-2), &q),
            Err(Error::ParabolicValue)
        );
        let q = pm(101, [3, -7, 11, 5]);
        for axis in Axis::ALL {
            for t in 0..101 {
                let t = k.elem(t);
                let f = eval_f(axis, t, &q);
                match eval_kappa(axis, t, &q) {
                    Ok(kap) => {
                        let den = k.square(k.sub(k.square(t), k.elem(4)));
                        assert_eq!(k.mul(kap, den), f);
                        assert_eq!(k.legendre(kap), k.legendre(f));
                    }
                    Err(_) => assert_eq!(k.square(t), k.elem(4)),
                }
            }
        }
    }

    #[test]
    fn f_at_two_is_square() {
        let q = pm(101, [3, -7, 11, 5]);
        let k = q.field;
        let [a, b, c] = q.abc;
        assert_eq!(eval_f(Axis::X, k.elem(2), &q), k.square(k.add(b, c)));
        assert_eq!(eval_f(Axis::Y, k.elem(2), &q), k.square(k.add(a, c)));
        assert_eq!(eval_f(Axis::Z, k.elem(-2), &q), k.square(k.sub(a, b)));
    }

    #[test]
    fn delta_examples() {
        for kk in 0..=10i64 {
            let v = eval_delta(&ParamQuad::from_i64([0, 0, 0, kk]));
            assert_eq!(v, BigInt::from(64 * kk * (kk - 4).pow(4)));
        }
        assert_eq!(
            eval_delta(&ParamQuad::from_i64([0, 0, 0, 1])),
            BigInt::from(5184)
        );
        assert!(eval_delta(&ParamQuad::from_i64([2, 2, 0, 3])).is_zero());
        assert!(eval_delta(&ParamQuad::from_i64([2, 2, 2, 7])).is_zero());
        let q = ParamQuad::from_i64([3, -7, 11, 5]);
        let k = field(101);
        assert_eq!(eval_delta_mod(&q.reduce(k)), k.from_bigint(&eval_delta(&q)));
    }

    #[test]
    fn cluster_lift_examples() {
        let b = |v: i64| BigInt::from(v);
        assert_eq!(
            cluster_lift(&b(0), &b(0), &b(0)),
            ParamQuad::from_i64([0, 0, 0, 0])
        );
        let q = cluster_lift(&b(1), &b(1), &b(1));
        assert_eq!(q, ParamQuad::from_i64([-3, -3, -3, -5]));
        assert!(eval_delta(&q).is_zero());
    }

    #[test]
    fn cluster_lift_degeneracy_exhaustive() {
        let b = |v: i64| BigInt::from(v);
        for a1 in -6..=6i64 {
            for a2 in -6..=6i64 {
                for a3 in -6..=6i64 {
                    let q = cluster_lift(&b(a1), &b(a2), &b(a3));
                    let expected = [a1, a2, a3].iter().any(|a| a * a == 4);
                    assert_eq!(
                        degeneracy_class(&q).is_degenerate(),
                        expected,
                        "{a1},{a2},{a3}"
                    );
                }
            }
        }
    }
}
