//! The verification suite: every acceptance check, run at a profile's size limits,
//! collected into one JSON report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::homology::{
    self, column_homology_k, differential_identity_failures, equivariant_euler_bottom,
    homology_table, predicted_row_dimension, total_acyclicity, Caps, HomologyOptions, RankMethod,
};
use crate::linalg::{rank_fraction_free, rank_multimodular};
use crate::lincomb::LinComb;
use crate::par::par_map;
use crate::rational::{fmt_q, is_nonneg_integer, q, Q};
use crate::report::{CheckReport, Status};
use crate::series;
use crate::smodule::{self, zw, zwhat, zx_formula};
use crate::symfunc::{character_values, schur_decompose, Partition, SymF};
use crate::trees::{
    bracket, bracket_lin, for_each_tree, forest_act_pl, forest_act_total, forest_act_total_lin,
    forest_concat, graft, graft_lin, graft_terms, Forest, ForestLinComb, Label, RootedTree,
    TreeLinComb,
};

pub const SUITE_VERSION: &str = "1";
pub const AXIOM_CASES: usize = 500;
pub const AXIOM_MAX_LABELS: usize = 7;
const SEED: u64 = 0x5eed_7ee5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    /// `(max_n, max_degree)`.
    pub fn limits(self) -> (usize, usize) {
        match self {
            Profile::Quick => (4, 5),
            Profile::Full => (6, 7),
        }
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::Parse(format!(
                "unknown profile {s:?}, expected quick or full"
            ))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Quick => "quick",
            Profile::Full => "full",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub profile: Profile,
    pub max_n: Option<usize>,
    pub max_degree: Option<usize>,
    /// Lifts the profile limits; the hard caps of each module still apply.
    pub unsafe_max: bool,
    pub timings: bool,
    /// Flips one coefficient of `Z_X` before the main theorem check. Negative control.
    pub tamper: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            profile: Profile::Quick,
            max_n: None,
            max_degree: None,
            unsafe_max: false,
            timings: false,
            tamper: false,
        }
    }
}

impl VerifyOptions {
    pub fn profile(profile: Profile) -> Self {
        Self {
            profile,
            ..Self::default()
        }
    }

    /// `(max_n, max_degree)` after checking the requested values against the profile.
    pub fn resolve(&self) -> Result<(usize, usize)> {
        let (cap_n, cap_d) = self.profile.limits();
        let n = self.max_n.unwrap_or(cap_n);
        let d = self.max_degree.unwrap_or(cap_d);
        if !self.unsafe_max {
            if n > cap_n {
                return Err(Error::CapExceeded {
                    what: "verify max_n",
                    value: n,
                    cap: cap_n,
                });
            }
            if d > cap_d {
                return Err(Error::CapExceeded {
                    what: "verify max_degree",
                    value: d,
                    cap: cap_d,
                });
            }
        }
        Ok((n, d))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub parameters: Value,
    pub status: Status,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite_version: String,
    pub profile: Profile,
    pub max_n: usize,
    pub max_degree: usize,
    pub status: Status,
    /// Name of the first failing check in report order.
    pub first_failure: Option<String>,
    pub checks: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Outcome {
    ok: bool,
    details: Value,
}

impl Outcome {
    fn from_reports(reports: Vec<CheckReport>) -> Self {
        Self {
            ok: reports.iter().all(CheckReport::passed),
            details: json!({ "reports": reports }),
        }
    }
}

type CheckFn = Box<dyn Fn() -> Result<Outcome> + Send + Sync>;

struct Check {
    name: &'static str,
    parameters: Value,
    run: CheckFn,
}

/// The check names in report order.
pub const CHECK_NAMES: [&str; 10] = [
    "a01_tree_counts",
    "a02_algebraic_axioms",
    "a03_homology",
    "a04_character_formulas",
    "a05_main_theorem",
    "a06_reflection_module",
    "a07_zlambdaw_formula",
    "a08_series_identities",
    "a09_schur_positivity",
    "a10_linear_algebra",
];

fn checks(n: usize, d: usize, opts: &VerifyOptions) -> Vec<Check> {
    let tree_n = (n + 2).min(8);
    let hom_opts = HomologyOptions {
        method: RankMethod::Modular,
        caps: if opts.unsafe_max {
            Caps::unlimited()
        } else {
            Caps::default()
        },
    };
    let tamper = opts.tamper;
    let mut out: Vec<Check> = vec![
        Check {
            name: CHECK_NAMES[0],
            parameters: json!({ "max_n": tree_n }),
            run: Box::new(move || tree_counts(tree_n)),
        },
        Check {
            name: CHECK_NAMES[1],
            parameters: json!({ "cases": AXIOM_CASES, "max_labels": AXIOM_MAX_LABELS, "seed": SEED }),
            run: Box::new(|| algebraic_axioms(AXIOM_CASES, AXIOM_MAX_LABELS, SEED)),
        },
        Check {
            name: CHECK_NAMES[2],
            parameters: json!({
                "max_n": n,
                "total_max_n": n.min(hom_opts.caps.total),
            }),
            run: Box::new(move || homology_check(n, &hom_opts)),
        },
        Check {
            name: CHECK_NAMES[3],
            parameters: json!({ "max_degree": d, "euler_max_n": n }),
            run: Box::new(move || character_formulas(d, n)),
        },
        Check {
            name: CHECK_NAMES[4],
            parameters: json!({ "max_degree": d, "tampered": tamper }),
            run: Box::new(move || main_theorem(d, tamper)),
        },
        Check {
            name: CHECK_NAMES[5],
            parameters: json!({ "max_degree": d }),
            run: Box::new(move || {
                Ok(Outcome::from_reports(vec![
                    smodule::theorem_reflection_check(d)?,
                ]))
            }),
        },
        Check {
            name: CHECK_NAMES[6],
            parameters: json!({ "max_degree": d.min(6) }),
            run: Box::new(move || {
                Ok(Outcome::from_reports(vec![smodule::zlambda_w_check(
                    d.min(6),
                )?]))
            }),
        },
        Check {
            name: CHECK_NAMES[7],
            parameters: json!({ "lambert": 15, "bicomplex": 10, "freeness": 15, "cayley_max_n": 12 }),
            run: Box::new(series_identities),
        },
        Check {
            name: CHECK_NAMES[8],
            parameters: json!({ "max_degree": d }),
            run: Box::new(move || schur_positivity(d)),
        },
        Check {
            name: CHECK_NAMES[9],
            parameters: json!({ "square_max_n": n.min(5), "rank_max_n": n.min(4) }),
            run: Box::new(move || linear_algebra(n.min(5), n.min(4))),
        },
    ];
    out.sort_by_key(|c| c.name);
    out
}

/// Runs the whole suite. Checks may run concurrently; the report order is fixed.
pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let (n, d) = opts.resolve()?;
    let timings = opts.timings;
    let records = par_map(checks(n, d, opts), |c| {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed().as_millis() as u64;
        let (status, details) = match outcome {
            Ok(o) => (if o.ok { Status::Ok } else { Status::Fail }, o.details),
            Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
        };
        CheckRecord {
            name: c.name.to_string(),
            parameters: c.parameters,
            status,
            details,
            elapsed_ms: timings.then_some(elapsed),
        }
    });
    let first_failure = records
        .iter()
        .find(|r| r.status == Status::Fail)
        .map(|r| r.name.clone());
    Ok(VerifyReport {
        suite_version: SUITE_VERSION.to_string(),
        profile: opts.profile,
        max_n: n,
        max_degree: d,
        status: if first_failure.is_some() {
            Status::Fail
        } else {
            Status::Ok
        },
        first_failure,
        checks: records,
    })
}

fn tree_counts(max_n: usize) -> Result<Outcome> {
    let mut counts = Vec::new();
    let mut ok = true;
    for n in 1..=max_n {
        let labels: Vec<Label> = (1..=n as u32).map(|l| l as Label).collect();
        let mut count = 0u64;
        for_each_tree(&labels, |_| count += 1)?;
        let expected = (n as u64).pow(n as u32 - 1);
        ok &= count == expected;
        counts.push(json!({ "n": n, "count": count, "expected": expected }));
    }
    Ok(Outcome {
        ok,
        details: json!({ "counts": counts }),
    })
}

/// A uniformly shaped random tree: each label after the first hangs below an earlier one.
pub fn random_tree(labels: &[Label], rng: &mut impl Rng) -> Result<RootedTree> {
    let mut order = labels.to_vec();
    order.shuffle(rng);
    let pairs: Vec<(Label, Option<Label>)> = (0..order.len())
        .map(|i| {
            let parent = (i > 0).then(|| order[rng.gen_range(0..i)]);
            (order[i], parent)
        })
        .collect();
    RootedTree::from_parent_pairs(&pairs)
}

/// Splits `1..=total` at random into `k` nonempty blocks, plus one possibly empty block.
fn random_blocks(total: usize, k: usize, rng: &mut impl Rng) -> Vec<Vec<Label>> {
    let mut labels: Vec<Label> = (1..=total as u32).map(|l| l as Label).collect();
    labels.shuffle(rng);
    let mut blocks: Vec<Vec<Label>> = labels[..k].iter().map(|&l| vec![l]).collect();
    blocks.push(Vec::new());
    for &l in &labels[k..] {
        let i = rng.gen_range(0..=k);
        blocks[i].push(l);
    }
    blocks
}

fn random_forest(labels: &[Label], rng: &mut impl Rng) -> Result<Forest> {
    let mut trees = Vec::new();
    let mut rest = labels.to_vec();
    rest.shuffle(rng);
    while !rest.is_empty() {
        let take = rng.gen_range(1..=rest.len());
        let block: Vec<Label> = rest.drain(..take).collect();
        trees.push(random_tree(&block, rng)?);
    }
    Forest::new(trees)
}

fn single(t: &RootedTree) -> TreeLinComb {
    LinComb::single(t.clone())
}

/// `(x↷y)↷z - x↷(y↷z) - (x↷z)↷y + x↷(z↷y)`.
pub fn pre_lie_associator_defect(
    x: &RootedTree,
    y: &RootedTree,
    z: &RootedTree,
) -> Result<TreeLinComb> {
    let (x, y, z) = (single(x), single(y), single(z));
    let a = &graft_lin(&graft_lin(&x, &y)?, &z)? - &graft_lin(&x, &graft_lin(&y, &z)?)?;
    let b = &graft_lin(&graft_lin(&x, &z)?, &y)? - &graft_lin(&x, &graft_lin(&z, &y)?)?;
    Ok(&a - &b)
}

pub fn jacobi_defect(x: &RootedTree, y: &RootedTree, z: &RootedTree) -> Result<TreeLinComb> {
    let a = bracket_lin(&bracket(x, y)?, &single(z))?;
    let b = bracket_lin(&bracket(y, z)?, &single(x))?;
    let c = bracket_lin(&bracket(z, x)?, &single(y))?;
    Ok(&(&a + &b) + &c)
}

/// `F ◁ t` against concatenation plus grafting `t` into each component separately.
pub fn decomposition_defect(f: &Forest, t: &RootedTree) -> Result<ForestLinComb> {
    let mut expect = ForestLinComb::zero();
    expect.add_term(forest_concat(f, t)?, q(1));
    for i in 0..f.len() {
        for g in graft_terms(&f.trees()[i], t)? {
            let mut trees = f.trees().to_vec();
            trees[i] = g;
            expect.add_term(Forest::new(trees)?, q(1));
        }
    }
    Ok(&forest_act_total(f, t)? - &expect)
}

/// `(F ◁ s) ◁ t - (F ◁ t) ◁ s - F ◁ [s, t]`.
pub fn module_law_defect(f: &Forest, s: &RootedTree, t: &RootedTree) -> Result<ForestLinComb> {
    let fs = forest_act_total(f, s)?;
    let ft = forest_act_total(f, t)?;
    let lhs = &forest_act_total_lin(&fs, &single(t))? - &forest_act_total_lin(&ft, &single(s))?;
    let rhs = forest_act_total_lin(&LinComb::single(f.clone()), &bracket(s, t)?)?;
    Ok(&lhs - &rhs)
}

fn algebraic_axioms(cases: usize, max_labels: usize, seed: u64) -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures: Vec<Value> = Vec::new();
    let mut counts = [0usize; 4];
    for _ in 0..cases {
        let total = rng.gen_range(3..=max_labels);
        let b = random_blocks(total, 3, &mut rng);
        let x = random_tree(&[b[0].clone(), b[3].clone()].concat(), &mut rng)?;
        let y = random_tree(&b[1], &mut rng)?;
        let z = random_tree(&b[2], &mut rng)?;
        let mut record = |name: &str, zero: bool, what: String| {
            if !zero && failures.len() < 5 {
                failures.push(json!({ "axiom": name, "instance": what }));
            }
        };
        record(
            "pre_lie",
            pre_lie_associator_defect(&x, &y, &z)?.is_zero(),
            format!("{x}; {y}; {z}"),
        );
        record(
            "jacobi",
            jacobi_defect(&x, &y, &z)?.is_zero(),
            format!("{x}; {y}; {z}"),
        );
        counts[0] += 1;
        counts[1] += 1;

        // the forest may be empty; s and t are nonempty
        let total = rng.gen_range(2..=max_labels);
        let b = random_blocks(total, 2, &mut rng);
        let f = random_forest(&b[2], &mut rng)?;
        let s = random_tree(&b[0], &mut rng)?;
        let t = random_tree(&b[1], &mut rng)?;
        record(
            "decomposition",
            decomposition_defect(&f, &s)?.is_zero(),
            format!("{f}; {s}"),
        );
        record(
            "module_law",
            module_law_defect(&f, &s, &t)?.is_zero(),
            format!("{f}; {s}; {t}"),
        );
        counts[2] += 1;
        counts[3] += 1;
    }
    // a sanity anchor that the products are not identically zero
    let one = RootedTree::vertex(1)?;
    let two = RootedTree::vertex(2)?;
    let nontrivial =
        !graft(&one, &two)?.is_zero() && !forest_act_pl(&Forest::new(vec![one])?, &two)?.is_zero();
    Ok(Outcome {
        ok: failures.is_empty() && nontrivial,
        details: json!({
            "instances": {
                "pre_lie": counts[0],
                "jacobi": counts[1],
                "decomposition": counts[2],
                "module_law": counts[3],
            },
            "failures": failures,
        }),
    })
}

fn homology_check(max_n: usize, opts: &HomologyOptions) -> Result<Outcome> {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 2..=max_n {
        let table = homology_table(n, opts)?;
        for row in &table.rows {
            let expect_q = if row.p == 0 { 1 } else { 0 };
            let expect_dim = predicted_row_dimension(n, row.p);
            let got_dim = row.dims_by_q.get(expect_q).copied().unwrap_or(0);
            let concentrated = if expect_dim.is_zero() {
                row.dims_by_q.iter().all(|&h| h == 0)
            } else {
                row.concentrated_at() == Some(expect_q)
            };
            let good = concentrated && Q::from(num_bigint::BigInt::from(got_dim)) == expect_dim;
            ok &= good;
            rows.push(json!({
                "n": n,
                "p": row.p,
                "dims_by_q": row.dims_by_q,
                "expected": { "q": expect_q, "dim": fmt_q(&expect_dim) },
                "status": if good { "ok" } else { "fail" },
            }));
        }
    }
    let mut acyclic = Vec::new();
    for n in 1..=max_n.min(opts.caps.total) {
        let r = total_acyclicity(n, opts)?;
        ok &= r.acyclic;
        acyclic.push(json!({ "complex": "total", "n": n, "acyclic": r.acyclic }));
    }
    for n in 1..=max_n {
        let r = column_homology_k(n, opts)?;
        ok &= r.acyclic;
        acyclic.push(json!({ "complex": "column_k", "n": n, "acyclic": r.acyclic }));
    }
    Ok(Outcome {
        ok,
        details: json!({ "rows": rows, "acyclicity": acyclic }),
    })
}

fn character_formulas(max_degree: usize, euler_n: usize) -> Result<Outcome> {
    let cross = smodule::zx_cross_check(max_degree)?;
    let zx = zx_formula(euler_n.max(1))?;
    let mut ok = cross.passed();
    let mut euler = Vec::new();
    for n in 1..=euler_n {
        let e = equivariant_euler_bottom(n)?;
        let formula = character_values(&zx.component(n), n);
        let mismatch = formula
            .values
            .iter()
            .find(|(l, v)| e.character.value(l) != **v)
            .map(|(l, v)| json!({ "class": l.to_string(), "formula": fmt_q(v), "euler": fmt_q(&e.character.value(l)) }));
        ok &= mismatch.is_none();
        euler.push(json!({ "n": n, "normalized_sign": e.flipped, "mismatch": mismatch }));
    }
    Ok(Outcome {
        ok,
        details: json!({ "reports": [cross], "euler": euler }),
    })
}

/// `Z_X` with the coefficient of `p[2,1]` raised by one.
pub fn tampered_zx(n: usize) -> Result<SymF> {
    let mut zx = zx_formula(n)?;
    if n >= 3 {
        zx.add_term(Partition::new(vec![2, 1])?, q(1));
    }
    Ok(zx)
}

fn main_theorem(d: usize, tamper: bool) -> Result<Outcome> {
    let report = if tamper {
        smodule::main_theorem_check_with(d, &tampered_zx(d)?)?
    } else {
        smodule::main_theorem_check(d)?
    };
    Ok(Outcome::from_reports(vec![report]))
}

fn series_identities() -> Result<Outcome> {
    let reports = vec![
        series::lambert_check(15)?,
        series::bicomplex_series_identity(10)?,
        series::freeness_series_check(15)?,
        series::euler_characteristic_series(10)?,
    ];
    let cayley: Vec<usize> = (2..=12)
        .filter(|&n| !series::cayley_identity_check(n).unwrap_or(false))
        .collect();
    Ok(Outcome {
        ok: reports.iter().all(CheckReport::passed) && cayley.is_empty(),
        details: json!({ "reports": reports, "cayley_failures": cayley }),
    })
}

fn schur_positivity(d: usize) -> Result<Outcome> {
    let mut ok = true;
    let mut bad = Vec::new();
    for (name, f) in [("zw", zw(d)?), ("zx", zx_formula(d)?), ("zwhat", zwhat(d)?)] {
        for n in 1..=d {
            for (mu, m) in schur_decompose(&f.component(n), n)? {
                if !is_nonneg_integer(&m) {
                    ok = false;
                    bad.push(json!({ "series": name, "partition": mu.to_string(), "multiplicity": fmt_q(&m) }));
                }
            }
        }
    }
    Ok(Outcome {
        ok,
        details: json!({ "series": ["zw", "zx", "zwhat"], "non_positive": bad }),
    })
}

fn linear_algebra(square_n: usize, rank_n: usize) -> Result<Outcome> {
    let mut ok = true;
    let mut identities = Vec::new();
    for n in 1..=square_n {
        let failures = differential_identity_failures(n)?;
        ok &= failures.is_empty();
        identities.push(json!({
            "n": n,
            "failures": failures
                .iter()
                .map(|(g, what)| json!({ "p": g.p, "q": g.q, "identity": what }))
                .collect::<Vec<_>>(),
        }));
    }
    let mut ranks = Vec::new();
    for n in 1..=rank_n {
        let mats = homology::all_matrices(n)?;
        let mut disagreements = Vec::new();
        for (g, which, m) in &mats {
            let exact = rank_fraction_free(m);
            let modular = rank_multimodular(m);
            if !modular.primes_agree() || modular.lower_bound() != exact {
                disagreements.push(json!({ "p": g.p, "q": g.q, "which": which, "exact": exact }));
            }
        }
        ok &= disagreements.is_empty();
        ranks.push(json!({ "n": n, "matrices": mats.len(), "disagreements": disagreements }));
    }
    Ok(Outcome {
        ok,
        details: json!({ "differential_identities": identities, "rank_agreement": ranks }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_profile_passes() {
        let r = run_verify(&VerifyOptions::profile(Profile::Quick)).unwrap();
        assert!(r.passed(), "{}", serde_json::to_string_pretty(&r).unwrap());
        let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, CHECK_NAMES);
        assert!(r.checks.iter().all(|c| c.elapsed_ms.is_none()));
    }

    #[test]
    fn tamper_is_caught() {
        let opts = VerifyOptions {
            max_n: Some(2),
            max_degree: Some(4),
            tamper: true,
            ..VerifyOptions::default()
        };
        let r = run_verify(&opts).unwrap();
        assert_eq!(r.first_failure.as_deref(), Some("a05_main_theorem"));
        let d = &r.check("a05_main_theorem").unwrap().details["reports"][0]["first_discrepancy"];
        assert_eq!(d["degree"], 3);
    }

    #[test]
    fn limits() {
        let opts = VerifyOptions {
            max_n: Some(5),
            ..VerifyOptions::default()
        };
        assert!(opts.resolve().is_err());
        assert_eq!(
            VerifyOptions::profile(Profile::Full).resolve().unwrap(),
            (6, 7)
        );
        assert!("fast".parse::<Profile>().is_err());
    }

    #[test]
    fn broken_axioms_are_detected() {
        // a left-grafting "product" is not pre-Lie; the defect must see it
        let x = RootedTree::vertex(1).unwrap();
        let y = RootedTree::vertex(2).unwrap();
        let z = RootedTree::vertex(3).unwrap();
        assert!(pre_lie_associator_defect(&x, &y, &z).unwrap().is_zero());
        let (a, b) = (single(&x), single(&y));
        let assoc = &graft_lin(&graft_lin(&a, &b).unwrap(), &single(&z)).unwrap()
            - &graft_lin(&a, &graft_lin(&b, &single(&z)).unwrap()).unwrap();
        assert!(!assoc.is_zero());
    }

    #[test]
    fn random_trees_are_valid() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..50 {
            let t = random_tree(&[3, 5, 7, 2], &mut rng).unwrap();
            assert_eq!(t.len(), 4);
            let f = random_forest(&[1, 4, 6], &mut rng).unwrap();
            assert_eq!(f.label_set().len(), 3);
        }
    }
}
