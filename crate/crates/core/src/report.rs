//! Stable JSON documents for census results.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use crate::engine::{shape_verdict, OrbitCensus};
use crate::surface::ParamQuad;

/// JSON number when it fits in i64, decimal string otherwise.
pub fn int_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(v.to_string()),
    }
}

pub fn params_value(q: &ParamQuad) -> Vec<Value> {
    q.to_vec().iter().map(int_value).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentEntry {
    pub rep: [u32; 3],
    pub size: u64,
    pub tag: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[u32; 3]>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusDocument {
    pub params: Vec<Value>,
    pub p: u32,
    pub group: &'static str,
    pub threshold: u64,
    pub effective_threshold: u64,
    pub total_points: u64,
    pub components: Vec<ComponentEntry>,
    pub verdict: String,
}

/// Small components carry their full point list only when no prediction explains them.
pub fn census_document(params: &ParamQuad, census: &OrbitCensus) -> CensusDocument {
    CensusDocument {
        params: params_value(params),
        p: census.params.p(),
        group: census.selector.name(),
        threshold: census.threshold,
        effective_threshold: census.effective_threshold,
        total_points: census.total_points,
        components: census
            .components
            .iter()
            .map(|c| ComponentEntry {
                rep: c.rep.values(),
                size: c.size,
                tag: c.tag.name(),
                points: match c.tag {
                    crate::engine::ComponentTag::ExceptionalEmpirical => c
                        .points
                        .as_ref()
                        .map(|ps| ps.iter().map(|p| p.values()).collect()),
                    _ => None,
                },
            })
            .collect(),
        verdict: shape_verdict(census).to_string(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_bytes<T: Serialize>(doc: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("serializable document");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_census;
    use crate::field::FieldPrime;
    use crate::surface::GroupSelector;

    #[test]
    fn census_keys_and_order() {
        let q = ParamQuad::from_i64([0, 0, 0, 0]);
        let k = FieldPrime::new(7).unwrap();
        let c = run_census(&q.reduce(k), GroupSelector::Gamma, 100).unwrap();
        let v: Value = serde_json::from_slice(&to_json_bytes(&census_document(&q, &c))).unwrap();
        for key in [
            "params",
            "p",
            "group",
            "threshold",
            "total_points",
            "components",
            "verdict",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let comps = v["components"].as_array().unwrap();
        assert!(comps
            .iter()
            .any(|c| c["rep"] == serde_json::json!([0, 0, 0]) && c["size"] == 1));
        let sizes: Vec<u64> = comps.iter().map(|c| c["size"].as_u64().unwrap()).collect();
        assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn large_params_serialize_as_strings() {
        let big = BigInt::from(1u64 << 62) * BigInt::from(8);
        let q = ParamQuad::new(big.clone(), 0.into(), 0.into(), 1.into());
        assert_eq!(params_value(&q)[0], Value::String(big.to_string()));
    }
}
