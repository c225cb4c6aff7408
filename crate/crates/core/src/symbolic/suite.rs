//! Exact verification of the polynomial identities behind the theory.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::{parse, MultiPoly};
use crate::delta::{parse_table, DELTA_TABLE};

const PARAMS: [&str; 4] = ["A", "B", "C", "D"];
const RING: [&str; 7] = ["x", "y", "z", "A", "B", "C", "D"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, id: u8) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// The quartic f_i in the ring [x, y, z, A, B, C, D]; axis is 1, 2 or 3.
pub fn quartic(axis: usize) -> MultiPoly {
    let (t, a, b, c) = match axis {
        1 => ("x", "A", "B", "C"),
        2 => ("y", "B", "A", "C"),
        _ => ("z", "C", "A", "B"),
    };
    let s =
        format!("{t}^4 - {a}*{t}^3 - (D+4)*{t}^2 + (4*{a} + {b}*{c})*{t} + (4*D + {b}^2 + {c}^2)");
    parse(&s, &RING).expect("quartic parses")
}

/// Δ in the ring [A, B, C, D] from a coefficient table.
pub fn delta_polynomial(table: &str) -> Result<MultiPoly, String> {
    let terms = parse_table(table)?;
    Ok(MultiPoly::from_terms(
        &PARAMS,
        terms
            .iter()
            .map(|t| (t.exps.to_vec(), BigInt::from(t.coeff))),
    ))
}

fn outcome(id: u8, name: &'static str, pass: bool, detail: impl Into<String>) -> IdentityCheck {
    IdentityCheck {
        id,
        name,
        pass,
        detail: detail.into(),
    }
}

fn discriminants() -> [MultiPoly; 3] {
    let vars = ["x", "y", "z"];
    let d: Vec<MultiPoly> = (1..=3usize)
        .into_par_iter()
        .map(|i| {
            quartic(i)
                .discriminant(vars[i - 1])
                .expect("positive degree")
                .with_vars(&PARAMS)
                .expect("discriminant free of x, y, z")
        })
        .collect();
    [d[0].clone(), d[1].clone(), d[2].clone()]
}

fn check_universality(d: &[MultiPoly; 3]) -> IdentityCheck {
    let pass = d[0] == d[1] && d[0] == d[2];
    outcome(
        1,
        "discriminants of f1, f2, f3 coincide",
        pass,
        format!("{} terms", d[0].len()),
    )
}

fn check_golden(d1: &MultiPoly, golden: &str) -> IdentityCheck {
    let name = "discriminant of f1 equals the shipped table";
    match delta_polynomial(golden) {
        Err(e) => outcome(2, name, false, format!("table unreadable: {e}")),
        Ok(g) => {
            let diff = d1.sub(&g);
            let detail = if diff.is_zero() {
                format!("{} terms match", g.len())
            } else {
                format!("{} terms differ", diff.len())
            };
            outcome(2, name, diff.is_zero(), detail)
        }
    }
}

fn check_cluster_vanishing(delta: &MultiPoly) -> IdentityCheck {
    let s = ["a1", "a2", "a3"];
    let images = [
        "-2*a1 - a2*a3",
        "-2*a2 - a1*a3",
        "-2*a3 - a1*a2",
        "-2*a1*a2*a3 - a1^2 - a2^2 - a3^2",
    ]
    .map(|e| parse(e, &s).expect("image parses"));
    let composed = delta.compose(&images);
    outcome(
        3,
        "delta vanishes on the image of the cluster lift",
        composed.is_zero(),
        "containment in the kernel only; generation of the kernel is not checked",
    )
}

fn check_divisibility(delta: &MultiPoly) -> IdentityCheck {
    let s = ["A", "C", "D"];
    let images = ["A", "A", "C", "D"].map(|e| parse(e, &s).expect("image parses"));
    let restricted = delta.compose(&images);
    let factor = parse("A^2 - 8*C + 4*D - 16", &s).expect("factor parses");
    let q = restricted.divide_exact(&factor);
    outcome(
        4,
        "A^2 - 8C + 4D - 16 divides delta(A, A, C, D)",
        q.is_some(),
        match q {
            Some(q) => format!("quotient has {} terms", q.len()),
            None => "division leaves a remainder".to_string(),
        },
    )
}

const OBSTRUCTION_RING: [&str; 5] = ["x", "y", "z", "A", "C"];

fn check_congruence() -> IdentityCheck {
    let v = OBSTRUCTION_RING;
    let f = parse("(A*x - 2*x^2 - 2*x*z + 2*C - 4*x - 4*z)^2", &v).unwrap();
    let g = parse(
        "(x*y + 2*x + 2*y + C - A + 4)*(x^2*z + 2*x*z - x*y + A*x + 2*x - 2*y + C + A + 4)",
        &v,
    )
    .unwrap();
    let h = parse(
        "4*x*y*z + 4*A*x + 4*A*y + 4*C*z - A^2 + 8*C + 16 - 4*x^2 - 4*y^2 - 4*z^2",
        &v,
    )
    .unwrap();
    let four = MultiPoly::constant(&v, 4);
    let lhs = four.mul(&g).sub(&f);
    let expr = lhs.sub(&parse("x^2 + 4*x + 4", &v).unwrap().mul(&h));
    let rem = lhs.pseudo_remainder(&h, "z").expect("z in ring");
    outcome(
        5,
        "4g - f is a multiple of the degenerate surface",
        expr.is_zero() && rem.is_zero(),
        format!(
            "explicit combination {}, remainder in z {}",
            if expr.is_zero() { "zero" } else { "nonzero" },
            if rem.is_zero() { "zero" } else { "nonzero" }
        ),
    )
}

fn check_squares() -> IdentityCheck {
    let v = OBSTRUCTION_RING;
    let surface = parse(
        "4*x^2 + 4*y^2 + 4*z^2 - 4*x*y*z - 4*A*x - 4*A*y - 4*C*z + A^2 - 8*C - 16",
        &v,
    )
    .unwrap();
    let z_other = parse("C + x*y - z", &v).unwrap();
    let pair = parse(
        "4*(z + 2)*(w + 2) - (2*x + 2*y - A)^2",
        &["x", "y", "z", "A", "C", "w"],
    )
    .unwrap();
    let mut images: Vec<MultiPoly> = v.iter().map(|n| MultiPoly::var(&v, n).unwrap()).collect();
    images.push(z_other);
    let pair = pair.compose(&images);
    let r1 = pair.pseudo_remainder(&surface, "z").unwrap();

    let equal = surface
        .subst("C", &MultiPoly::var(&v, "A").unwrap())
        .unwrap();
    let triple = parse(
        "4*(x + 2)*(y + 2)*(z + 2) - (2*x + 2*y + 2*z + 4 - A)^2",
        &v,
    )
    .unwrap();
    let r2 = triple.pseudo_remainder(&equal, "z").unwrap();
    outcome(
        6,
        "square identities hold on degenerate surfaces",
        r1.is_zero() && r2.is_zero(),
        format!(
            "pair remainder {}, triple remainder {}",
            if r1.is_zero() { "zero" } else { "nonzero" },
            if r2.is_zero() { "zero" } else { "nonzero" }
        ),
    )
}

/// Runs all six checks against the shipped coefficient table.
pub fn identity_suite() -> IdentityReport {
    identity_suite_with_golden(DELTA_TABLE)
}

/// Runs all six checks with `golden` in place of the shipped table.
pub fn identity_suite_with_golden(golden: &str) -> IdentityReport {
    let d = discriminants();
    let delta = d[0].clone();
    let jobs: Vec<Box<dyn Fn() -> IdentityCheck + Sync + Send + '_>> = vec![
        Box::new(|| check_universality(&d)),
        Box::new(|| check_golden(&d[0], golden)),
        Box::new(|| check_cluster_vanishing(&delta)),
        Box::new(|| check_divisibility(&delta)),
        Box::new(check_congruence),
        Box::new(check_squares),
    ];
    IdentityReport {
        checks: jobs.par_iter().map(|j| j()).collect(),
    }
}
