//! Subcommand implementations. Each writes its document to `out` or to files and returns a status.

use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use markoff_core::conic::{slice_orbit_partition, slice_report, SliceReport, SliceSubgroup};
use markoff_core::delta::sha256_hex;
use markoff_core::engine::{
    census, components, enumerate_points, min_order_check, shape_verdict, with_workers,
    OrbitCensus, ShapeVerdict, MAX_ENUMERATION_PRIME,
};
use markoff_core::obstruction::{partition_report, PartitionReport};
use markoff_core::report::{census_document, int_value, params_value, to_json_bytes};
use markoff_core::surface::{canonical_params_mod, eval_delta_mod, is_equal_triple_mod};
use markoff_core::symbolic::identity_suite;
use markoff_core::{
    canonical_params, degeneracy_class, degeneracy_class_mod, eval_delta, generators, Axis,
    Degeneracy, FieldPrime, GroupSelector, Move, ParamQuad, ParamTransform, ParamsMod,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::args::{CensusArgs, ClassifyArgs, Command, ConicArgs, ObstructionArgs, SweepArgs};
use crate::output::{
    default_workers, parse_params, parse_range, sweep_primes, write_atomic, ReportRecord,
    RunManifest,
};
use crate::Status;

pub fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<Status> {
    match cmd {
        Command::Classify(a) => classify(&a, out),
        Command::Census(a) => census_cmd(&a, out),
        Command::Sweep(a) => sweep(&a, out),
        Command::Conic(a) => conic(&a, out),
        Command::Obstruction(a) => obstruction(&a, out),
        Command::VerifyIdentities => verify_identities(out),
    }
}

fn field(p: u64) -> Result<FieldPrime> {
    FieldPrime::new(p).with_context(|| format!("invalid prime {p}"))
}

fn enumeration_field(p: u64) -> Result<FieldPrime> {
    if p > MAX_ENUMERATION_PRIME {
        bail!("prime {p} exceeds the enumeration cap of {MAX_ENUMERATION_PRIME}");
    }
    field(p)
}

fn mod_values(q: &ParamsMod) -> [u32; 4] {
    [
        q.abc[0].value(),
        q.abc[1].value(),
        q.abc[2].value(),
        q.d.value(),
    ]
}

#[derive(Serialize)]
struct Equivalent<P: Serialize> {
    params: P,
    transform: ParamTransform,
}

#[derive(Serialize)]
struct IntegralClass {
    class: &'static str,
    equal_triple: bool,
    witness: Option<Equivalent<Vec<Value>>>,
    canonical: Equivalent<Vec<Value>>,
}

#[derive(Serialize)]
struct ModClass {
    p: u32,
    reduced: [u32; 4],
    delta: u32,
    class: &'static str,
    equal_triple: bool,
    witness: Option<Equivalent<[u32; 4]>>,
    canonical: Equivalent<[u32; 4]>,
    gamma_prime_moves: Vec<Move>,
}

#[derive(Serialize)]
struct ClassifyDocument {
    params: Vec<Value>,
    delta: Value,
    integral: IntegralClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    mod_p: Option<ModClass>,
}

fn class_name<Q>(d: &Degeneracy<Q>) -> &'static str {
    if d.is_degenerate() {
        "degenerate"
    } else {
        "nondegenerate"
    }
}

fn classify(a: &ClassifyArgs, out: &mut dyn Write) -> Result<Status> {
    let q = parse_params(&a.params.params)?;
    let deg = degeneracy_class(&q);
    let (canon, canon_t) = canonical_params(&q);
    let integral = IntegralClass {
        class: class_name(&deg),
        equal_triple: deg.is_equal_triple(),
        witness: match &deg {
            Degeneracy::Degenerate { witness, .. } => Some(Equivalent {
                params: params_value(&witness.0),
                transform: witness.1,
            }),
            Degeneracy::Nondegenerate => None,
        },
        canonical: Equivalent {
            params: params_value(&canon),
            transform: canon_t,
        },
    };
    let mod_p = match a.prime {
        None => None,
        Some(p) => {
            let k = field(p)?;
            let pm = q.reduce(k);
            let deg = degeneracy_class_mod(&pm);
            let (canon, canon_t) = canonical_params_mod(&pm);
            Some(ModClass {
                p: k.p(),
                reduced: mod_values(&pm),
                delta: eval_delta_mod(&pm).value(),
                class: class_name(&deg),
                equal_triple: is_equal_triple_mod(&pm) && deg.is_degenerate(),
                witness: match &deg {
                    Degeneracy::Degenerate { witness, .. } => Some(Equivalent {
                        params: mod_values(&witness.0),
                        transform: witness.1,
                    }),
                    Degeneracy::Nondegenerate => None,
                },
                canonical: Equivalent {
                    params: mod_values(&canon),
                    transform: canon_t,
                },
                gamma_prime_moves: generators(&pm, GroupSelector::GammaPrime)
                    .into_iter()
                    .filter(|m| !matches!(m, Move::V1 | Move::V2 | Move::V3))
                    .collect(),
            })
        }
    };
    let doc = ClassifyDocument {
        params: params_value(&q),
        delta: int_value(&eval_delta(&q)),
        integral,
        mod_p,
    };
    out.write_all(&to_json_bytes(&doc))?;
    Ok(Status::Ok)
}

/// Whether the census has the expected large-orbit shape: one giant when nondegenerate
/// mod p, at least two large components when degenerate.
fn shape_ok(pm: &ParamsMod, c: &OrbitCensus) -> bool {
    if degeneracy_class_mod(pm).is_degenerate() {
        c.n_large() >= 2
    } else {
        shape_verdict(c) == ShapeVerdict::MainTheoremShape
    }
}

fn census_cmd(a: &CensusArgs, out: &mut dyn Write) -> Result<Status> {
    let q = parse_params(&a.params.params)?;
    let pm = q.reduce(enumeration_field(a.prime)?);
    let workers = a.workers.unwrap_or_else(default_workers);
    let selector: GroupSelector = a.group.into();
    let c = with_workers(workers, || -> Result<OrbitCensus> {
        let index = enumerate_points(&pm)?;
        let labeling = components(&index, selector);
        Ok(census(&index, &labeling, a.threshold))
    })?;
    let bytes = to_json_bytes(&census_document(&q, &c));
    match &a.out {
        Some(path) => write_atomic(path, &bytes)?,
        None => out.write_all(&bytes)?,
    }
    if shape_ok(&pm, &c) {
        Ok(Status::Ok)
    } else {
        eprintln!(
            "verdict: unexpected orbit shape at p = {} ({})",
            a.prime,
            shape_verdict(&c)
        );
        Ok(Status::Verdict)
    }
}

struct PrimeResult {
    prime: u64,
    file: String,
    digest: String,
    wall: f64,
    row: String,
    shape_ok: bool,
}

fn sweep_one(a: &SweepArgs, q: &ParamQuad, prime: u64) -> Result<PrimeResult> {
    let start = Instant::now();
    let pm = q.reduce(field(prime)?);
    let selector: GroupSelector = a.group.into();
    let index = enumerate_points(&pm)?;
    let labeling = components(&index, selector);
    let c = census(&index, &labeling, a.threshold);
    let order = min_order_check(&index, &labeling, &c, q);
    let classes = if degeneracy_class_mod(&pm).is_degenerate() {
        let own;
        let gamma = if selector == GroupSelector::Gamma {
            &labeling
        } else {
            own = components(&index, GroupSelector::Gamma);
            &own
        };
        let r = partition_report(&index, gamma, None, a.threshold)?;
        Some(obstruction_class_count(&r))
    } else {
        None
    };
    let doc = to_json_bytes(&census_document(q, &c));
    let file = format!("census-{prime}.json");
    write_atomic(&a.out.join(&file), &doc)?;
    let row = format!(
        "{},{},{},{},{},{},{:.6},{}",
        prime,
        c.total_points,
        c.components.len(),
        c.n_large(),
        shape_verdict(&c),
        order.min_order.map_or("-".to_string(), |m| m.to_string()),
        order.bound,
        classes.map_or("-".to_string(), |n| n.to_string()),
    );
    Ok(PrimeResult {
        prime,
        digest: sha256_hex(std::str::from_utf8(&doc)?),
        file,
        wall: start.elapsed().as_secs_f64(),
        row,
        shape_ok: shape_ok(&pm, &c),
    })
}

/// Sign patterns that occur in the equal-triple case, otherwise the nonempty S1/S2 classes.
fn obstruction_class_count(r: &PartitionReport) -> usize {
    match &r.sign_patterns {
        Some(m) => m.values().filter(|&&n| n > 0).count(),
        None => ["S1", "S2"]
            .iter()
            .filter(|k| r.class_counts.get(**k).is_some_and(|s| s.points > 0))
            .count(),
    }
}

pub const SWEEP_CSV_HEADER: &str =
    "prime,total_points,n_components,n_giant,shape_verdict,min_order,bound,obstruction_classes";

fn sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<Status> {
    let q = parse_params(&a.params.params)?;
    let (lo, hi) = parse_range(&a.primes)?;
    if hi > MAX_ENUMERATION_PRIME {
        bail!("upper bound {hi} exceeds the enumeration cap of {MAX_ENUMERATION_PRIME}");
    }
    let primes = sweep_primes(lo, hi);
    if primes.is_empty() {
        bail!("no primes p >= 5 in {lo}..{hi}");
    }
    let workers = a.workers.unwrap_or_else(default_workers);
    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let results = with_workers(workers, || {
        primes
            .par_iter()
            .map(|&p| sweep_one(a, &q, p))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut csv = String::from(SWEEP_CSV_HEADER);
    csv.push('\n');
    for r in &results {
        csv.push_str(&r.row);
        csv.push('\n');
    }
    write_atomic(&a.out.join("summary.csv"), csv.as_bytes())?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        params: params_value(&q),
        primes: primes.clone(),
        group: GroupSelector::from(a.group).name(),
        threshold: a.threshold,
        workers,
        reports: results
            .iter()
            .map(|r| ReportRecord {
                prime: r.prime,
                file: r.file.clone(),
                sha256: r.digest.clone(),
                wall_seconds: r.wall,
            })
            .collect(),
        summary_sha256: sha256_hex(&csv),
    };
    write_atomic(&a.out.join("manifest.json"), &to_json_bytes(&manifest))?;
    out.write_all(csv.as_bytes())?;

    let failed: Vec<u64> = results
        .iter()
        .filter(|r| !r.shape_ok)
        .map(|r| r.prime)
        .collect();
    if failed.is_empty() {
        Ok(Status::Ok)
    } else {
        eprintln!("verdict: unexpected orbit shape at primes {failed:?}");
        Ok(Status::Verdict)
    }
}

#[derive(Serialize)]
struct Prediction {
    predicted_transitive: Option<bool>,
    actual_transitive: bool,
}

#[derive(Serialize)]
struct ConicDocument {
    params: Vec<Value>,
    p: u32,
    #[serde(flatten)]
    report: SliceReport,
    twist_blocks: Vec<usize>,
    two_vieta_blocks: Vec<usize>,
    prediction: Prediction,
}

fn block_sizes(blocks: Vec<Vec<markoff_core::SurfacePoint>>) -> Vec<usize> {
    let mut sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

fn conic(a: &ConicArgs, out: &mut dyn Write) -> Result<Status> {
    let q = parse_params(&a.params.params)?;
    let k = field(a.prime)?;
    let pm = q.reduce(k);
    let axis = Axis::from_number(a.axis as usize)?;
    let value = k.elem(a.value);
    let report = slice_report(axis, value, &pm);
    let twist = block_sizes(slice_orbit_partition(
        axis,
        value,
        &pm,
        SliceSubgroup::TwistOnly,
    ));
    let pair = block_sizes(slice_orbit_partition(
        axis,
        value,
        &pm,
        SliceSubgroup::TwoVieta,
    ));
    let actual = pair.len() == 1;
    let ok = report.size == report.predicted_size
        && report.predicted_transitive_pair.is_none_or(|t| t == actual);
    let doc = ConicDocument {
        params: params_value(&q),
        p: k.p(),
        prediction: Prediction {
            predicted_transitive: report.predicted_transitive_pair,
            actual_transitive: actual,
        },
        report,
        twist_blocks: twist,
        two_vieta_blocks: pair,
    };
    out.write_all(&to_json_bytes(&doc))?;
    if ok {
        Ok(Status::Ok)
    } else {
        eprintln!("verdict: slice size or transitivity differs from the prediction");
        Ok(Status::Verdict)
    }
}

#[derive(Serialize)]
struct ObstructionDocument {
    params: Vec<Value>,
    #[serde(flatten)]
    report: PartitionReport,
}

fn obstruction(a: &ObstructionArgs, out: &mut dyn Write) -> Result<Status> {
    let q = parse_params(&a.params.params)?;
    let pm = q.reduce(enumeration_field(a.prime)?);
    if !degeneracy_class_mod(&pm).is_degenerate() {
        bail!("parameters are not degenerate mod {}", a.prime);
    }
    let workers = a.workers.unwrap_or_else(default_workers);
    let report = with_workers(workers, || -> Result<PartitionReport> {
        let index = enumerate_points(&pm)?;
        let gamma = components(&index, GroupSelector::Gamma);
        let prime = components(&index, GroupSelector::GammaPrime);
        Ok(partition_report(&index, &gamma, Some(&prime), a.threshold)?)
    })?;
    let ok = report.invariance_holds;
    let doc = ObstructionDocument {
        params: params_value(&q),
        report,
    };
    out.write_all(&to_json_bytes(&doc))?;
    if ok {
        Ok(Status::Ok)
    } else {
        eprintln!("verdict: a Γ-edge crosses obstruction classes");
        Ok(Status::Verdict)
    }
}

fn verify_identities(out: &mut dyn Write) -> Result<Status> {
    let report = identity_suite();
    out.write_all(&to_json_bytes(&report))?;
    if report.all_pass() {
        Ok(Status::Ok)
    } else {
        let failed: Vec<u8> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.id)
            .collect();
        eprintln!("verdict: identity checks {failed:?} failed");
        Ok(Status::Verdict)
    }
}
