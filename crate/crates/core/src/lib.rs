//! Orbit structure of the surfaces X²+Y²+Z² = XYZ+AX+BY+CZ+D over prime fields.

pub mod conic;
pub mod delta;
pub mod engine;
pub mod error;
pub mod field;
pub mod obstruction;
pub mod report;
pub mod small_orbits;
pub mod surface;
pub mod symbolic;
pub mod union_find;

pub use error::{Error, Result};
pub use field::{FieldPrime, Fp2Elem, FpElem, RootInfo, RootKind};
pub use surface::{
    apply_move, canonical_params, cluster_lift, degeneracy_class, degeneracy_class_mod,
    equivalents, eval_delta, eval_f, eval_kappa, generators, on_surface, Axis, Degeneracy,
    GroupSelector, Move, ParamQuad, ParamTransform, ParamsMod, SurfacePoint,
};
