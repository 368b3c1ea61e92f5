//! Three operations of `prelie-core` for the browser. Each returns a JSON string;
//! errors come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use prelie_core::homology::{row_homology, HomologyOptions};
use prelie_core::rational::fmt_q;
use prelie_core::smodule::{self, Generator};
use prelie_core::symfunc::schur_decompose;
use prelie_core::trees::{for_each_tree, Label};

/// Largest n the page offers; larger inputs stall the tab.
pub const WEB_TREE_CAP: usize = 7;
pub const WEB_HOMOLOGY_CAP: usize = 5;

fn wrap(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// `{"n", "count", "trees"}`; the list is included for `n <= 4`.
#[wasm_bindgen]
pub fn trees(n: usize) -> String {
    wrap((|| {
        if n == 0 || n > WEB_TREE_CAP {
            return Err(format!("n must be between 1 and {WEB_TREE_CAP}"));
        }
        let labels: Vec<Label> = (1..=n as u32).map(|l| l as Label).collect();
        let mut count = 0u64;
        let mut listed = Vec::new();
        for_each_tree(&labels, |t| {
            count += 1;
            if n <= 4 {
                listed.push(t.to_string());
            }
        })
        .map_err(|e| e.to_string())?;
        Ok(json!({ "n": n, "count": count, "trees": listed }))
    })())
}

/// Degree-`degree` part of `zw`, `zx` or `zwhat`, in power sums and in Schur functions.
#[wasm_bindgen]
pub fn character(which: &str, degree: usize) -> String {
    wrap((|| {
        let g: Generator = which
            .parse()
            .map_err(|e: prelie_core::Error| e.to_string())?;
        let f = match g {
            Generator::Zw => smodule::zw(degree),
            Generator::Zx => smodule::zx_formula(degree),
            Generator::Zwhat => smodule::zwhat(degree),
            Generator::ZlambdaW => return Err("zlambdaw is not offered here".into()),
        }
        .map_err(|e| e.to_string())?
        .component(degree);
        let schur: Vec<Value> = schur_decompose(&f, degree)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|(mu, m)| json!({ "partition": mu.to_string(), "multiplicity": fmt_q(m) }))
            .collect();
        Ok(json!({ "which": which, "degree": degree, "p": f.to_string(), "schur": schur }))
    })())
}

/// Every row of the homology table for `n`.
#[wasm_bindgen]
pub fn homology(n: usize) -> String {
    wrap((|| {
        if n == 0 || n > WEB_HOMOLOGY_CAP {
            return Err(format!("n must be between 1 and {WEB_HOMOLOGY_CAP}"));
        }
        let opts = HomologyOptions::default();
        let rows = (0..=n)
            .map(|p| {
                row_homology(n, p, &opts).map(|r| {
                    json!({ "p": p, "dims_by_q": r.dims_by_q, "concentrated_at": r.concentrated_at() })
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        Ok(json!({ "n": n, "rows": rows }))
    })())
}
