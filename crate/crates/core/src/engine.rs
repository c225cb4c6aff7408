//! Exhaustive enumeration of S(F_p) and connected components under a generator set.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FpElem;
use crate::small_orbits::{expected_small_orbits, OrbitKind};
use crate::surface::{generators, GroupSelector, Move, ParamQuad, ParamsMod, SurfacePoint};
use crate::union_find::UnionFind;

/// Largest prime whose p² point ids fit the 32-bit id space.
pub const MAX_ENUMERATION_PRIME: u64 = 46337;

/// Default size above which a component counts as large.
pub const DEFAULT_THRESHOLD: u64 = 100;

/// Fixed chunk count for the x-range; results do not depend on it.
const CHUNKS: usize = 64;

/// Runs `f` inside a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}

/// Dense ids for the points of S(F_p), in lexicographic order of (x, y, z).
#[derive(Clone, Debug)]
pub struct PointIndex {
    params: ParamsMod,
    /// `cell_start[x·p + y]` is the first id in cell (x, y); length p² + 1.
    cell_start: Vec<u32>,
    zs: Vec<u32>,
    /// Sum of 1 + legendre(disc) over cells, kept as an independent count.
    cell_count_sum: u64,
}

impl PointIndex {
    pub fn params(&self) -> &ParamsMod {
        &self.params
    }

    pub fn p(&self) -> u32 {
        self.params.p()
    }

    pub fn len(&self) -> usize {
        self.zs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zs.is_empty()
    }

    pub fn cell_count_sum(&self) -> u64 {
        self.cell_count_sum
    }

    fn cell(&self, x: u32, y: u32) -> std::ops::Range<usize> {
        let c = x as usize * self.p() as usize + y as usize;
        self.cell_start[c] as usize..self.cell_start[c + 1] as usize
    }

    pub fn id_of(&self, c: [FpElem; 3]) -> Option<u32> {
        let r = self.cell(c[0].value(), c[1].value());
        let z = c[2].value();
        self.zs[r.clone()]
            .iter()
            .position(|&v| v == z)
            .map(|i| (r.start + i) as u32)
    }

    pub fn point(&self, id: u32) -> SurfacePoint {
        let cell = self.cell_start.partition_point(|&s| s <= id) - 1;
        let p = self.p() as usize;
        let k = &self.params.field;
        SurfacePoint::trusted([
            k.from_u64((cell / p) as u64),
            k.from_u64((cell % p) as u64),
            k.from_u64(self.zs[id as usize] as u64),
        ])
    }

    /// Id range of the points with first coordinate in `xs`.
    fn id_range(&self, xs: std::ops::Range<u32>) -> std::ops::Range<u32> {
        let p = self.p() as usize;
        self.cell_start[xs.start as usize * p]..self.cell_start[xs.end as usize * p]
    }

    /// Calls `f(id, point)` for every id in the x-range, in id order.
    fn for_each_in(&self, xs: std::ops::Range<u32>, mut f: impl FnMut(u32, [FpElem; 3])) {
        let k = &self.params.field;
        for x in xs {
            for y in 0..self.p() {
                for id in self.cell(x, y) {
                    let c = [
                        k.from_u64(x as u64),
                        k.from_u64(y as u64),
                        k.from_u64(self.zs[id] as u64),
                    ];
                    f(id as u32, c);
                }
            }
        }
    }

    pub fn points(&self) -> Vec<SurfacePoint> {
        let mut out = Vec::with_capacity(self.len());
        self.for_each_in(0..self.p(), |_, c| out.push(SurfacePoint::trusted(c)));
        out
    }
}

fn chunk_ranges(p: u32) -> Vec<std::ops::Range<u32>> {
    let n = CHUNKS.min(p as usize) as u32;
    (0..n).map(|i| (i * p / n)..((i + 1) * p / n)).collect()
}

/// Enumerates every point by solving the quadratic in z over each (x, y) cell.
pub fn enumerate_points(params: &ParamsMod) -> Result<PointIndex> {
    let k = params.field;
    let p = k.p();
    if p as u64 > MAX_ENUMERATION_PRIME {
        return Err(Error::EnumerationCap(p as u64, MAX_ENUMERATION_PRIME));
    }
    let mut sqrt = vec![u32::MAX; p as usize];
    for r in 0..=(p - 1) / 2 {
        sqrt[(r as u64 * r as u64 % p as u64) as usize] = r;
    }
    let [a, b, c] = params.abc;
    let rows: Vec<(Vec<u8>, Vec<u32>, u64)> = (0..p)
        .into_par_iter()
        .map(|x| {
            let x = k.from_u64(x as u64);
            let mut counts = Vec::with_capacity(p as usize);
            let mut zs = Vec::new();
            let mut legendre_sum = 0u64;
            for y in 0..p {
                let y = k.from_u64(y as u64);
                // z² − (xy + C)z + (x² + y² − Ax − By − D) = 0
                let sum = k.add(k.mul(x, y), c);
                let prod = k.sub(
                    k.add(k.square(x), k.square(y)),
                    k.add(k.add(k.mul(a, x), k.mul(b, y)), params.d),
                );
                let disc = k.sub(k.square(sum), k.mul(k.elem(4), prod));
                legendre_sum += (1 + k.legendre(disc)) as u64;
                let r = sqrt[disc.value() as usize];
                if r == u32::MAX {
                    counts.push(0);
                } else if r == 0 {
                    counts.push(1);
                    zs.push(k.half(sum).value());
                } else {
                    let r = k.from_u64(r as u64);
                    let lo = k.half(k.add(sum, r)).value();
                    let hi = k.half(k.sub(sum, r)).value();
                    counts.push(2);
                    zs.push(lo.min(hi));
                    zs.push(lo.max(hi));
                }
            }
            (counts, zs, legendre_sum)
        })
        .collect();
    let mut cell_start = Vec::with_capacity(p as usize * p as usize + 1);
    let mut zs = Vec::new();
    let mut acc = 0u32;
    let mut cell_count_sum = 0;
    for (counts, row_zs, s) in rows {
        for n in counts {
            cell_start.push(acc);
            acc += n as u32;
        }
        zs.extend(row_zs);
        cell_count_sum += s;
    }
    cell_start.push(acc);
    Ok(PointIndex {
        params: *params,
        cell_start,
        zs,
        cell_count_sum,
    })
}

/// Component labels: for every id, the least id of its component.
#[derive(Clone, Debug)]
pub struct ComponentLabeling {
    pub selector: GroupSelector,
    pub labels: Vec<u32>,
}

impl ComponentLabeling {
    /// (representative id, size) for every component, in representative order.
    pub fn component_sizes(&self) -> Vec<(u32, u64)> {
        let mut sizes = vec![0u64; self.labels.len()];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0)
            .map(|(i, &s)| (i as u32, s))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.labels
            .iter()
            .enumerate()
            .filter(|(i, &l)| *i as u32 == l)
            .count()
    }
}

/// First id of a chunk, its local root per point, and the edges leaving it.
type ChunkLabels = (u32, Vec<u32>, Vec<(u32, u32)>);

/// Labels the connected components of the graph whose edges are the generator moves.
///
/// Each chunk of the x-range is unioned locally in parallel; edges leaving a chunk
/// are applied afterwards in chunk order. Labels are least ids, so the result does
/// not depend on the number of workers.
pub fn components(index: &PointIndex, selector: GroupSelector) -> ComponentLabeling {
    let params = index.params;
    let moves: Vec<Move> = generators(&params, selector);
    let chunks = chunk_ranges(index.p());
    let locals: Vec<ChunkLabels> = chunks
        .par_iter()
        .map(|xs| {
            let ids = index.id_range(xs.clone());
            let mut uf = UnionFind::new((ids.end - ids.start) as usize);
            let mut cross = Vec::new();
            index.for_each_in(xs.clone(), |id, c| {
                for m in &moves {
                    let img = m.apply_raw(c, &params);
                    let j = index.id_of(img).expect("moves preserve the surface");
                    if ids.contains(&j) {
                        uf.union(id - ids.start, j - ids.start);
                    } else if id < j {
                        cross.push((id, j));
                    }
                }
            });
            let roots = (0..uf.len() as u32)
                .map(|i| uf.find(i) + ids.start)
                .collect();
            (ids.start, roots, cross)
        })
        .collect();
    let mut uf = UnionFind::new(index.len());
    for (start, roots, _) in &locals {
        for (i, &r) in roots.iter().enumerate() {
            let id = *start + i as u32;
            if r != id {
                uf.union(id, r);
            }
        }
    }
    for (_, _, cross) in &locals {
        for &(a, b) in cross {
            uf.union(a, b);
        }
    }
    ComponentLabeling {
        selector,
        labels: uf.min_labels(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ComponentTag {
    Giant,
    TypeI,
    TypeII,
    TypeIII,
    TypeIV,
    ExceptionalEmpirical,
    AnomalousMid,
}

impl ComponentTag {
    pub fn name(self) -> &'static str {
        match self {
            ComponentTag::Giant => "giant",
            ComponentTag::TypeI => "type-i",
            ComponentTag::TypeII => "type-ii",
            ComponentTag::TypeIII => "type-iii",
            ComponentTag::TypeIV => "type-iv",
            ComponentTag::ExceptionalEmpirical => "exceptional-empirical",
            ComponentTag::AnomalousMid => "anomalous-mid",
        }
    }

    fn from_kind(kind: OrbitKind) -> Self {
        match kind {
            OrbitKind::TypeI => ComponentTag::TypeI,
            OrbitKind::TypeII => ComponentTag::TypeII,
            OrbitKind::TypeIII => ComponentTag::TypeIII,
            OrbitKind::TypeIV => ComponentTag::TypeIV,
            OrbitKind::ExceptionalEmpirical => ComponentTag::ExceptionalEmpirical,
        }
    }

    pub fn is_large(self) -> bool {
        matches!(self, ComponentTag::Giant | ComponentTag::AnomalousMid)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub rep: SurfacePoint,
    pub rep_id: u32,
    pub size: u64,
    pub tag: ComponentTag,
    /// Full point list for small components.
    pub points: Option<Vec<SurfacePoint>>,
}

#[derive(Clone, Debug)]
pub struct OrbitCensus {
    pub params: ParamsMod,
    pub selector: GroupSelector,
    pub threshold: u64,
    pub effective_threshold: u64,
    pub total_points: u64,
    /// Sorted by size descending, then representative ascending.
    pub components: Vec<Component>,
}

impl OrbitCensus {
    pub fn large(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.tag.is_large())
    }

    pub fn n_large(&self) -> usize {
        self.large().count()
    }

    /// Points outside the small components (the empirical S*).
    pub fn sstar_size(&self) -> u64 {
        self.large().map(|c| c.size).sum()
    }
}

/// The large-orbit threshold actually applied: min(T, ⌊p²/8⌋).
///
/// At small primes whole surfaces have fewer than T points; the cap keeps
/// "large" meaningful there.
pub fn effective_threshold(threshold: u64, p: u32) -> u64 {
    threshold.min(p as u64 * p as u64 / 8)
}

pub fn census(index: &PointIndex, labeling: &ComponentLabeling, threshold: u64) -> OrbitCensus {
    let params = index.params;
    let t_eff = effective_threshold(threshold, index.p());
    let sizes = labeling.component_sizes();

    let mut expected: HashMap<u32, OrbitKind> = HashMap::new();
    for orbit in expected_small_orbits(&params) {
        for p in orbit.points {
            let id = index.id_of(p.coords()).expect("orbit point on surface");
            expected.entry(id).or_insert(orbit.kind);
        }
    }
    let small: HashMap<u32, u64> = sizes.iter().copied().filter(|&(_, s)| s <= t_eff).collect();
    let mut members: HashMap<u32, Vec<u32>> = HashMap::new();
    for (id, &l) in labeling.labels.iter().enumerate() {
        if small.contains_key(&l) {
            members.entry(l).or_default().push(id as u32);
        }
    }
    let giant_rep = sizes
        .iter()
        .filter(|&&(_, s)| s > t_eff)
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|&(r, _)| r);

    let mut components: Vec<Component> = sizes
        .iter()
        .map(|&(rep_id, size)| {
            let rep = index.point(rep_id);
            if size > t_eff {
                let tag = if Some(rep_id) == giant_rep {
                    ComponentTag::Giant
                } else {
                    ComponentTag::AnomalousMid
                };
                return Component {
                    rep,
                    rep_id,
                    size,
                    tag,
                    points: None,
                };
            }
            let ids = &members[&rep_id];
            let tag = if ids.iter().all(|id| expected.contains_key(id)) {
                ComponentTag::from_kind(expected[&rep_id])
            } else {
                ComponentTag::ExceptionalEmpirical
            };
            Component {
                rep,
                rep_id,
                size,
                tag,
                points: Some(ids.iter().map(|&i| index.point(i)).collect()),
            }
        })
        .collect();
    components.sort_by(|a, b| b.size.cmp(&a.size).then(a.rep_id.cmp(&b.rep_id)));
    OrbitCensus {
        params,
        selector: labeling.selector,
        threshold,
        effective_threshold: t_eff,
        total_points: index.len() as u64,
        components,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ShapeVerdict {
    MainTheoremShape,
    MultiGiant(usize),
    Other(String),
}

impl std::fmt::Display for ShapeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShapeVerdict::MainTheoremShape => write!(f, "main-theorem-shape"),
            ShapeVerdict::MultiGiant(n) => write!(f, "multi-giant({n})"),
            ShapeVerdict::Other(d) => write!(f, "other({d})"),
        }
    }
}

/// One giant plus small orbits that are predicted or flagged exceptional.
pub fn shape_verdict(census: &OrbitCensus) -> ShapeVerdict {
    let n = census.n_large();
    match n {
        1 => ShapeVerdict::MainTheoremShape,
        0 => ShapeVerdict::Other(format!(
            "no component larger than {}",
            census.effective_threshold
        )),
        n => ShapeVerdict::MultiGiant(n),
    }
}

/// Full pipeline: enumerate, label and tally.
pub fn run_census(
    params: &ParamsMod,
    selector: GroupSelector,
    threshold: u64,
) -> Result<OrbitCensus> {
    let index = enumerate_points(params)?;
    let labeling = components(&index, selector);
    Ok(census(&index, &labeling, threshold))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaPrimeComparison {
    pub sstar_size: u64,
    pub gamma_transitive_on_sstar: bool,
    pub gamma_prime_transitive_on_sstar: bool,
    pub gamma_components: usize,
    pub gamma_prime_components: usize,
}

impl GammaPrimeComparison {
    /// Γ′ transitive on S* forces Γ transitive on S*.
    pub fn implication_holds(&self) -> bool {
        !self.gamma_prime_transitive_on_sstar || self.gamma_transitive_on_sstar
    }
}

/// Compares transitivity on S* (the union of large Γ-components) under Γ and Γ′.
pub fn gamma_prime_comparison(index: &PointIndex, threshold: u64) -> GammaPrimeComparison {
    let gamma = components(index, GroupSelector::Gamma);
    let prime = components(index, GroupSelector::GammaPrime);
    gamma_prime_comparison_from(index, &gamma, &prime, threshold)
}

pub fn gamma_prime_comparison_from(
    index: &PointIndex,
    gamma: &ComponentLabeling,
    prime: &ComponentLabeling,
    threshold: u64,
) -> GammaPrimeComparison {
    let t_eff = effective_threshold(threshold, index.p());
    let sizes: HashMap<u32, u64> = gamma.component_sizes().into_iter().collect();
    let large: Vec<u32> = {
        let mut v: Vec<u32> = sizes
            .iter()
            .filter(|(_, &s)| s > t_eff)
            .map(|(&r, _)| r)
            .collect();
        v.sort();
        v
    };
    let mut prime_label: Option<u32> = None;
    let mut prime_transitive = !large.is_empty();
    for (id, &l) in gamma.labels.iter().enumerate() {
        if sizes[&l] <= t_eff {
            continue;
        }
        let pl = prime.labels[id];
        match prime_label {
            None => prime_label = Some(pl),
            Some(x) if x != pl => {
                prime_transitive = false;
                break;
            }
            _ => {}
        }
    }
    GammaPrimeComparison {
        sstar_size: large.iter().map(|r| sizes[r]).sum(),
        gamma_transitive_on_sstar: large.len() == 1,
        gamma_prime_transitive_on_sstar: prime_transitive,
        gamma_components: gamma.count(),
        gamma_prime_components: prime.count(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinOrderCheck {
    pub min_order: Option<u64>,
    pub bound: f64,
    pub min_component_size: Option<u64>,
    pub pass: bool,
}

/// Base of the logarithm in the order bound: 20 + 2|A| + 2|B| + 2|C| + |D|.
pub fn order_bound(params: &ParamQuad, p: u32) -> f64 {
    use num_traits::{Signed, ToPrimitive};
    let base = params
        .abc
        .iter()
        .map(|a| 2.0 * a.abs().to_f64().unwrap_or(f64::MAX))
        .sum::<f64>()
        + params.d.abs().to_f64().unwrap_or(f64::MAX)
        + 20.0;
    ((p as f64).ln() / base.ln()).cbrt()
}

/// Checks the order lower bound on S* (the large Γ-components of the census).
pub fn min_order_check(
    index: &PointIndex,
    labeling: &ComponentLabeling,
    census: &OrbitCensus,
    params: &ParamQuad,
) -> MinOrderCheck {
    let k = index.params.field;
    let order: Vec<u64> = (0..k.p())
        .into_par_iter()
        .map(|x| k.coordinate_order(k.from_u64(x as u64)))
        .collect();
    let large_reps: Vec<u32> = census.large().map(|c| c.rep_id).collect();
    let min_order = (0..index.len() as u32)
        .into_par_iter()
        .filter(|&id| large_reps.contains(&labeling.labels[id as usize]))
        .map(|id| {
            let c = index.point(id).values();
            c.iter().map(|&v| order[v as usize]).max().unwrap()
        })
        .min();
    let bound = order_bound(params, k.p());
    let min_component_size = census.large().map(|c| c.size).min();
    let pass = min_order.is_none_or(|m| m as f64 >= bound)
        && min_component_size.is_none_or(|s| s as f64 >= bound / 2.0);
    MinOrderCheck {
        min_order,
        bound,
        min_component_size,
        pass,
    }
}
