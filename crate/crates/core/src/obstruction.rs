//! Quadratic-residue invariants that separate Γ-orbits on degenerate surfaces.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::engine::{effective_threshold, ComponentLabeling, PointIndex};
use crate::error::{Error, Result};
use crate::surface::{
    degeneracy_class_mod, equivalents_mod, generators, is_degenerate_form_mod, is_equal_triple_mod,
    Degeneracy, GroupSelector, ParamTransform, ParamsMod, SurfacePoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TwoClass {
    S1,
    S2,
}

pub type SignTriple = [i8; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionClass {
    pub two_class: TwoClass,
    pub s1: i8,
    pub s2: i8,
    pub sign_triple: Option<SignTriple>,
}

/// Transform to the normal form A′ = B′, 4D + A′² = 8C′ + 16.
pub fn normal_form(params: &ParamsMod) -> Result<(ParamTransform, ParamsMod)> {
    match degeneracy_class_mod(params) {
        Degeneracy::Nondegenerate => Err(Error::NotDegenerate),
        Degeneracy::Degenerate {
            witness: (q, t), ..
        } => Ok((t, q)),
    }
}

/// Transform to a degenerate normal form with A′ = B′ = C′.
pub fn equal_normal_form(params: &ParamsMod) -> Result<(ParamTransform, ParamsMod)> {
    if !degeneracy_class_mod(params).is_degenerate() {
        return Err(Error::NotDegenerate);
    }
    if !is_equal_triple_mod(params) {
        return Err(Error::NotEqualTriple);
    }
    equivalents_mod(params)
        .into_iter()
        .find(|(q, _)| q.abc[0] == q.abc[1] && q.abc[1] == q.abc[2] && is_degenerate_form_mod(q))
        .map(|(q, t)| (t, q))
        .ok_or(Error::NotDegenerate)
}

/// Two-class invariant of a point already in normal form.
fn two_class_in_form(c: [crate::field::FpElem; 3], q: &ParamsMod) -> Result<(TwoClass, i8, i8)> {
    let k = &q.field;
    let [x, y, z] = c;
    let two = k.elem(2);
    let s1 = k.legendre(k.add(z, two));
    let s2 = k.legendre(k.add(
        k.add(k.mul(x, y), k.mul(two, k.add(x, y))),
        k.add(k.sub(q.abc[2], q.abc[0]), k.elem(4)),
    ));
    let s = if s1 != 0 { s1 } else { s2 };
    let class = match s {
        1 => TwoClass::S1,
        -1 => TwoClass::S2,
        _ => return Err(Error::BothZero),
    };
    Ok((class, s1, s2))
}

fn sign_triple_in_form(c: [crate::field::FpElem; 3], q: &ParamsMod) -> SignTriple {
    let k = &q.field;
    c.map(|v| k.legendre(k.add(v, k.elem(2))))
}

pub fn obstruction_class(p: SurfacePoint, params: &ParamsMod) -> Result<ObstructionClass> {
    let (t, q) = normal_form(params)?;
    let c = t.map_coords(p.coords(), &params.field);
    let (two_class, s1, s2) = two_class_in_form(c, &q)?;
    let sign_triple = if is_equal_triple_mod(params) {
        Some(triple_class(p, params)?)
    } else {
        None
    };
    Ok(ObstructionClass {
        two_class,
        s1,
        s2,
        sign_triple,
    })
}

/// (legendre(x+2), legendre(y+2), legendre(z+2)) in the all-equal normal form.
pub fn triple_class(p: SurfacePoint, params: &ParamsMod) -> Result<SignTriple> {
    let (t, q) = equal_normal_form(params)?;
    Ok(sign_triple_in_form(
        t.map_coords(p.coords(), &params.field),
        &q,
    ))
}

/// Whether two sign triples agree wherever both are nonzero.
fn compatible(a: SignTriple, b: SignTriple) -> bool {
    (0..3).all(|i| a[i] == 0 || b[i] == 0 || a[i] == b[i])
}

fn pattern_name(s: SignTriple) -> String {
    s.iter()
        .map(|&v| match v {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    pub points: u64,
    pub components: usize,
    pub large_components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub p: u32,
    pub equal_triple: bool,
    pub normal_form: [u32; 4],
    /// Points where both invariants vanish (Type I fixed points).
    pub both_zero_points: u64,
    pub crossing_edges: u64,
    pub mixed_sign_points: u64,
    pub invariance_holds: bool,
    pub class_counts: BTreeMap<String, ClassSummary>,
    /// Sign patterns with all entries nonzero, with point counts.
    pub sign_patterns: Option<BTreeMap<String, u64>>,
    pub large_gamma_components: usize,
    pub gamma_prime_merge: Option<bool>,
}

/// Cross-tabulates obstruction classes against Γ-components (and Γ′ when given).
pub fn partition_report(
    index: &PointIndex,
    gamma: &ComponentLabeling,
    gamma_prime: Option<&ComponentLabeling>,
    threshold: u64,
) -> Result<PartitionReport> {
    let params = *index.params();
    let k = params.field;
    let (t, q) = normal_form(&params)?;
    let equal = is_equal_triple_mod(&params);
    let eq_form = if equal {
        Some(equal_normal_form(&params)?)
    } else {
        None
    };
    let t_eff = effective_threshold(threshold, index.p());
    let moves = generators(&params, GroupSelector::Gamma);

    let n = index.len();
    let mut two: Vec<Option<TwoClass>> = Vec::with_capacity(n);
    let mut triples: Vec<SignTriple> = Vec::with_capacity(n);
    let mut mixed = 0;
    for id in 0..n as u32 {
        let c = index.point(id).coords();
        match two_class_in_form(t.map_coords(c, &k), &q) {
            Ok((cl, s1, s2)) => {
                if s1 * s2 < 0 {
                    mixed += 1;
                }
                two.push(Some(cl));
            }
            Err(_) => two.push(None),
        }
        if let Some((te, qe)) = &eq_form {
            triples.push(sign_triple_in_form(te.map_coords(c, &k), qe));
        }
    }

    let mut crossing = 0;
    for id in 0..n as u32 {
        let c = index.point(id).coords();
        for m in &moves {
            let j = index.id_of(m.apply_raw(c, &params)).expect("on surface") as usize;
            let a = two[id as usize];
            let b = two[j];
            let two_crosses = a.is_some() && b.is_some() && a != b;
            if two_crosses || (equal && !compatible(triples[id as usize], triples[j])) {
                crossing += 1;
            }
        }
    }

    let sizes: HashMap<u32, u64> = gamma.component_sizes().into_iter().collect();
    let mut comp_class: HashMap<u32, BTreeSet<TwoClass>> = HashMap::new();
    let mut comp_pattern: HashMap<u32, BTreeSet<SignTriple>> = HashMap::new();
    let mut counts: BTreeMap<String, (u64, BTreeSet<u32>)> = BTreeMap::new();
    let mut both_zero = 0;
    for id in 0..n {
        let l = gamma.labels[id];
        match two[id] {
            Some(cl) => {
                comp_class.entry(l).or_default().insert(cl);
                let e = counts.entry(format!("{cl:?}")).or_default();
                e.0 += 1;
                e.1.insert(l);
            }
            None => both_zero += 1,
        }
        if equal {
            let s = triples[id];
            let e = counts.entry(pattern_name(s)).or_default();
            e.0 += 1;
            e.1.insert(l);
            if s.iter().all(|&v| v != 0) {
                comp_pattern.entry(l).or_default().insert(s);
            }
        }
    }
    let components_pure =
        comp_class.values().all(|s| s.len() == 1) && comp_pattern.values().all(|s| s.len() == 1);
    let class_counts = counts
        .into_iter()
        .map(|(name, (points, comps))| {
            let large = comps.iter().filter(|c| sizes[c] > t_eff).count();
            (
                name,
                ClassSummary {
                    points,
                    components: comps.len(),
                    large_components: large,
                },
            )
        })
        .collect();
    let sign_patterns = if equal {
        let mut m: BTreeMap<String, u64> = BTreeMap::new();
        for s in triples.iter().filter(|s| s.iter().all(|&v| v != 0)) {
            *m.entry(pattern_name(*s)).or_default() += 1;
        }
        Some(m)
    } else {
        None
    };

    let gamma_prime_merge = match (equal, gamma_prime) {
        (true, Some(prime)) => {
            let mut per: HashMap<u32, BTreeSet<SignTriple>> = HashMap::new();
            for (&s, &l) in triples.iter().zip(&prime.labels) {
                if s.iter().all(|&v| v != 0) {
                    per.entry(l).or_default().insert(s);
                }
            }
            let plus = [1, 1, 1];
            let separate = per.values().all(|s| !s.contains(&plus) || s.len() == 1);
            let merged = per.values().any(|s| {
                [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
                    .iter()
                    .all(|m| s.contains(m))
            });
            Some(separate && merged)
        }
        _ => None,
    };

    Ok(PartitionReport {
        p: index.p(),
        equal_triple: equal,
        normal_form: [
            q.abc[0].value(),
            q.abc[1].value(),
            q.abc[2].value(),
            q.d.value(),
        ],
        both_zero_points: both_zero,
        crossing_edges: crossing,
        mixed_sign_points: mixed,
        invariance_holds: crossing == 0 && components_pure,
        class_counts,
        sign_patterns,
        large_gamma_components: sizes.values().filter(|&&s| s > t_eff).count(),
        gamma_prime_merge,
    })
}
