//! Cycle indices of the S-modules around pre-Lie trees, and the identities
//! relating them.
//!
//! Names: `W` is the module of labeled rooted trees, `X` the homology of the
//! bottom row of the bicomplex, `Ŵ` the extended `S_{n+1}` action on `W(n)`,
//! `Λ∘W` the exterior algebra on `W` with the parameter `t` counting factors.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{pow_i, q, qbig, qfrac, Q};
use crate::report::{CheckReport, DiscrepancyJson, Status};
use crate::symfunc::{
    first_discrepancy, p1_partial_operator, plethysm, sf_exp, Partition, SymF, SymFT,
};
use crate::trees::{count_fixed_trees, Perm};

pub const ZW_CAP: usize = 8;
pub const BURNSIDE_CAP: usize = 7;
pub const LIE_CAP: usize = 10;
pub const FORMULA_CAP: usize = 8;
pub const MAIN_THEOREM_CAP: usize = 7;

fn check_cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        return Err(Error::CapExceeded { what, value, cap });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FunctionalEquation,
    ClosedFormula,
    Burnside,
    PlethysticInversion,
}

/// A named cycle index together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleIndexTable {
    pub name: String,
    pub value: SymF,
    pub provenance: Provenance,
}

impl CycleIndexTable {
    pub fn truncation_degree(&self) -> usize {
        self.value.degree()
    }

    /// Tables of the same name must agree wherever both are defined.
    pub fn cross_validate(&self, other: &CycleIndexTable) -> Option<crate::symfunc::Discrepancy> {
        first_discrepancy(&self.value, &other.value)
    }
}

/// `exp(Σ_k p_k / k)`.
pub fn zs(n: usize) -> SymF {
    let arg = SymF::from_terms(
        (1..=n as u32).map(|k| (Partition::new(vec![k]).unwrap(), qfrac(1, k as i64))),
        n,
    );
    sf_exp(&arg, n).expect("argument has no constant term")
}

/// `Σ_n p_1^n`.
pub fn zt(n: usize) -> SymF {
    SymF::from_terms(
        (0..=n).map(|d| (Partition::new(vec![1; d]).unwrap(), Q::one())),
        n,
    )
}

/// `exp(-Σ_k t^k p_k / k)`: the coefficient of `p_λ` is `(-1)^{ℓ(λ)} t^{|λ|} / z_λ`.
pub fn zlambda(n: usize) -> SymFT {
    let mut out = SymFT::zero(n);
    for l in Partition::all_up_to(n) {
        let sign = if l.len() % 2 == 0 { 1 } else { -1 };
        let c = Q::new(BigInt::from(sign), l.z());
        out.add_term(l.size(), l, c);
    }
    out
}

/// Fixed point of `Z = p_1 · (Z_S ∘ Z)`, one degree gained per round.
pub fn zw(n: usize) -> Result<SymF> {
    check_cap("zW degree", n, ZW_CAP)?;
    Ok(zw_unchecked(n))
}

pub(crate) fn zw_unchecked(n: usize) -> SymF {
    let p1 = SymF::p(&[1], n);
    let s = zs(n);
    let mut z = p1.clone();
    for _ in 1..n {
        z = p1.mul(&plethysm(&s, &z, n).expect("z has no constant term"), n);
    }
    z
}

/// Degree-`d` component `Σ_λ fix(σ_λ) p_λ / z_λ`, counting fixed trees directly.
pub fn zw_burnside(n: usize) -> Result<SymF> {
    check_cap("Burnside degree", n, BURNSIDE_CAP)?;
    let mut out = SymF::zero(n);
    for d in 1..=n {
        for l in Partition::all_of(d) {
            let fixed = count_fixed_trees(&Perm::of_cycle_type(l.parts()), d)?;
            out.add_term(l.clone(), Q::new(BigInt::from(fixed), l.z()));
        }
    }
    Ok(out)
}

fn mobius(n: u32) -> i64 {
    let (mut m, mut out, mut p) = (n, 1, 2);
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            out = -out;
        }
        p += 1;
    }
    if m > 1 {
        out = -out;
    }
    out
}

/// Degree-`d` component `(1/d) Σ_{e | d} μ(e) p_e^{d/e}`.
pub fn zlie(n: usize) -> Result<SymF> {
    check_cap("Lie degree", n, LIE_CAP)?;
    let mut out = SymF::zero(n);
    for d in 1..=n as u32 {
        for e in (1..=d).filter(|e| d % e == 0) {
            let mu = mobius(e);
            if mu != 0 {
                let parts = vec![e; (d / e) as usize];
                out.add_term(Partition::new(parts).unwrap(), qfrac(mu, d as i64));
            }
        }
    }
    Ok(out)
}

/// Polynomials in `t`, lowest degree first.
type TPoly = Vec<Q>;

fn tpoly_mul(a: &TPoly, b: &TPoly) -> TPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn tpoly_pow(a: &TPoly, e: u32) -> TPoly {
    (0..e).fold(vec![Q::one()], |acc, _| tpoly_mul(&acc, a))
}

fn tpoly_sub(a: &TPoly, b: &TPoly) -> TPoly {
    let mut out = a.clone();
    out.resize(a.len().max(b.len()), Q::zero());
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// `c - t^k`.
fn minus_t_power(c: u32, k: usize) -> TPoly {
    let mut out = vec![Q::zero(); k + 1];
    out[0] = q(c as i64);
    out[k] -= Q::one();
    out
}

/// `Π_{k ≥ 2, m_k ≥ 1} ((f_k - t^k)^{m_k} - k m_k (f_k - t^k)^{m_k - 1})`.
///
/// Factors with `m_k = 0` equal 1; their second term carries the factor `m_k = 0`
/// and is dropped rather than evaluated.
fn higher_factors_t(l: &Partition) -> TPoly {
    let mut out = vec![Q::one()];
    for (k, m) in l.multiplicities() {
        if k < 2 {
            continue;
        }
        let base = minus_t_power(l.fixed_points_of_power(k), k as usize);
        let first = tpoly_pow(&base, m);
        let second: TPoly = tpoly_pow(&base, m - 1)
            .iter()
            .map(|c| c * q((k * m) as i64))
            .collect();
        out = tpoly_mul(&out, &tpoly_sub(&first, &second));
    }
    out
}

/// The same product at `t = 1`, as an exact rational.
fn higher_factors_at_one(l: &Partition) -> Result<Q> {
    let mut out = Q::one();
    for (k, m) in l.multiplicities() {
        if k < 2 {
            continue;
        }
        let base = q(l.fixed_points_of_power(k) as i64 - 1);
        let first = pow_i(&base, m as i64);
        let second = pow_i(&base, m as i64 - 1);
        match (first, second) {
            (Some(a), Some(b)) => out *= a - q((k * m) as i64) * b,
            _ => return Err(Error::ZeroToNegativePower(l.parts().to_vec())),
        }
    }
    Ok(out)
}

/// The closed formula for `Z_{Λ∘W}` as a polynomial in `t` per `p_λ`:
/// `1 + (-t) Σ_λ (m_1 - t)^{m_1 - 1} Π_{k≥2}(...) p_λ / z_λ`.
///
/// When `m_1 = 0` the prefactor `(-t)(-t)^{-1}` is 1.
pub fn zlambda_w(n: usize) -> Result<SymFT> {
    check_cap("Z_{Λ∘W} degree", n, FORMULA_CAP)?;
    let mut out = SymFT::zero(n);
    out.add_term(0, Partition::empty(), Q::one());
    for l in Partition::all_up_to(n)
        .into_iter()
        .filter(|l| !l.is_empty())
    {
        let m1 = l.multiplicity(1);
        let lead = if m1 == 0 {
            vec![Q::one()]
        } else {
            let neg_t = vec![Q::zero(), -Q::one()];
            tpoly_mul(&neg_t, &tpoly_pow(&minus_t_power(m1, 1), m1 - 1))
        };
        let z = qbig(l.z());
        for (j, c) in tpoly_mul(&lead, &higher_factors_t(&l))
            .into_iter()
            .enumerate()
        {
            out.add_term(j, l.clone(), c / &z);
        }
    }
    Ok(out)
}

/// `Σ_λ (m_1 - 1)^{m_1 - 1 - shift} Π_{k≥2}(...) p_λ / z_λ` over nonempty `λ`.
fn closed_formula_at_one(n: usize, shift: i64, skip_m1_one: bool) -> Result<SymF> {
    let mut out = SymF::zero(n);
    for l in Partition::all_up_to(n)
        .into_iter()
        .filter(|l| !l.is_empty())
    {
        let m1 = l.multiplicity(1) as i64;
        if skip_m1_one && m1 == 1 {
            continue;
        }
        let lead = pow_i(&q(m1 - 1), m1 - 1 - shift)
            .ok_or_else(|| Error::ZeroToNegativePower(l.parts().to_vec()))?;
        let c = lead * higher_factors_at_one(&l)? / qbig(l.z());
        out.add_term(l, c);
    }
    Ok(out)
}

/// Closed formula for `Z_X`.
pub fn zx_formula(n: usize) -> Result<SymF> {
    check_cap("Z_X degree", n, FORMULA_CAP)?;
    closed_formula_at_one(n, 0, false)
}

/// The `Z` with `Z_Lie ∘ Z = Z_W`, by the iteration `Z ← Z_W - (Z_Lie - p_1) ∘ Z`.
pub fn zx_from_inversion(n: usize) -> Result<SymF> {
    check_cap("Z_X degree", n, FORMULA_CAP)?;
    let w = zw_unchecked(n);
    let higher = zlie(n)?.sub(&SymF::p(&[1], n));
    let mut z = w.clone();
    for _ in 1..n {
        z = w.sub(&plethysm(&higher, &z, n)?);
    }
    Ok(z)
}

/// Closed formula for `Z_Ŵ`; partitions with `m_1 = 1` are excluded.
pub fn zwhat(n: usize) -> Result<SymF> {
    check_cap("Z_Ŵ degree", n, FORMULA_CAP)?;
    closed_formula_at_one(n, 1, true)
}

/// The summand of the `Z_X` formula at a single partition.
pub fn zx_summand(l: &Partition) -> Result<Q> {
    let m1 = l.multiplicity(1) as i64;
    let lead =
        pow_i(&q(m1 - 1), m1 - 1).ok_or_else(|| Error::ZeroToNegativePower(l.parts().to_vec()))?;
    Ok(lead * higher_factors_at_one(l)? / qbig(l.z()))
}

/// `Z_X - p_1 = (p_1 ∂_{p_1} - Id) Z_Ŵ` up to degree `n`, preceded by the check that
/// every `Z_X` summand with `m_1 = 1` and `|λ| ≥ 2` vanishes.
pub fn theorem_reflection_check(n: usize) -> Result<CheckReport> {
    check_cap("reflection check degree", n, FORMULA_CAP)?;
    for l in Partition::all_up_to(n) {
        if l.size() >= 2 && l.multiplicity(1) == 1 {
            let s = zx_summand(&l)?;
            if !s.is_zero() {
                return Ok(CheckReport {
                    check: "reflection".into(),
                    max_degree: n,
                    status: Status::Fail,
                    first_discrepancy: Some(DiscrepancyJson {
                        degree: l.size(),
                        partition: l.parts().to_vec(),
                        lhs: crate::rational::fmt_q(&s),
                        rhs: "0".into(),
                    }),
                });
            }
        }
    }
    let lhs = zx_formula(n)?.sub(&SymF::p(&[1], n));
    let rhs = p1_partial_operator(&zwhat(n)?);
    Ok(CheckReport::from_discrepancy(
        "reflection",
        n,
        first_discrepancy(&lhs, &rhs),
    ))
}

/// `Z_Lie ∘ Z_X = Z_W` up to degree `n`.
pub fn main_theorem_check(n: usize) -> Result<CheckReport> {
    main_theorem_check_with(n, &zx_formula(n.min(FORMULA_CAP))?)
}

/// As [`main_theorem_check`] with a caller-supplied `Z_X`.
pub fn main_theorem_check_with(n: usize, zx: &SymF) -> Result<CheckReport> {
    check_cap("main theorem degree", n, MAIN_THEOREM_CAP)?;
    let lhs = plethysm(&zlie(n)?, zx, n)?;
    Ok(CheckReport::from_discrepancy(
        "main_theorem",
        n,
        first_discrepancy(&lhs, &zw(n)?),
    ))
}

/// `zX_formula = zX_from_inversion` up to degree `n`.
pub fn zx_cross_check(n: usize) -> Result<CheckReport> {
    Ok(CheckReport::from_discrepancy(
        "zx_formula_vs_inversion",
        n,
        first_discrepancy(&zx_formula(n)?, &zx_from_inversion(n)?),
    ))
}

/// The closed formula for `Z_{Λ∘W}` against the plethysm `Z_Λ ∘ Z_W`.
pub fn zlambda_w_check(n: usize) -> Result<CheckReport> {
    let formula = zlambda_w(n)?;
    let direct = zlambda(n).plethysm(&zw(n)?, n)?;
    let top = formula.max_t_power().max(direct.max_t_power());
    let d = (0..=top)
        .find_map(|j| first_discrepancy(&formula.t_coefficient(j), &direct.t_coefficient(j)));
    Ok(CheckReport::from_discrepancy(
        "zlambdaw_formula_vs_plethysm",
        n,
        d,
    ))
}

/// `Z_W` by the functional equation against the Burnside count.
pub fn zw_cross_check(n: usize) -> Result<CheckReport> {
    Ok(CheckReport::from_discrepancy(
        "zw_fixed_point_vs_burnside",
        n,
        first_discrepancy(&zw(n)?, &zw_burnside(n)?),
    ))
}

/// `Z_S ∘ Z_Lie = Z_T` up to degree `n`.
pub fn pbw_check(n: usize) -> Result<CheckReport> {
    let lhs = plethysm(&zs(n), &zlie(n)?, n)?;
    Ok(CheckReport::from_discrepancy(
        "pbw",
        n,
        first_discrepancy(&lhs, &zt(n)),
    ))
}

/// Which cycle index a caller is asking for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Zw,
    Zx,
    Zwhat,
    ZlambdaW,
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zw" => Ok(Self::Zw),
            "zx" => Ok(Self::Zx),
            "zwhat" => Ok(Self::Zwhat),
            "zlambdaw" => Ok(Self::ZlambdaW),
            _ => Err(Error::Parse(format!("unknown generator `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::{character_values, schur_decompose};

    fn sf(s: &str, n: usize) -> SymF {
        SymF::parse_with_degree(s, n).unwrap()
    }

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn dim(f: &SymF, d: usize) -> Q {
        character_values(&f.component(d), d).dimension()
    }

    #[test]
    fn standard_modules() {
        assert_eq!(zs(2).component(2), sf("1/2*p[1,1] + 1/2*p[2]", 2));
        assert_eq!(zt(3).component(3), sf("p[1,1,1]", 3));
        let l2 = zlambda(2).eval_t(&q(1));
        assert_eq!(l2.coeff(&part(&[2])), qfrac(-1, 2));
        assert_eq!(
            zlambda(2).coeff_poly(&part(&[1, 1])),
            vec![q(0), q(0), qfrac(1, 2)]
        );
    }

    #[test]
    fn mobius_values() {
        let expect = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expect.iter().enumerate() {
            assert_eq!(mobius(i as u32 + 1), m, "mu({})", i + 1);
        }
    }

    #[test]
    fn zw_low_degrees() {
        let w = zw(3).unwrap();
        assert_eq!(w.component(1), sf("p[1]", 3));
        assert_eq!(w.component(2), sf("p[1,1]", 3));
        assert_eq!(w.component(3), sf("3/2*p[1,1,1] + 1/2*p[2,1]", 3));
        for d in 1..=6 {
            assert_eq!(dim(&zw(6).unwrap(), d), q((d as i64).pow(d as u32 - 1)));
        }
        assert!(zw(9).is_err());
    }

    #[test]
    fn zw_matches_burnside() {
        assert!(zw_cross_check(6).unwrap().passed());
    }

    #[test]
    fn zw_is_plethystic_inverse() {
        // p1 exp(-Σ p_k/k) ∘ Z_W = p1
        let n = 6;
        let neg: SymF = zs(n).map_coeffs(|l, c| if l.len() % 2 == 0 { c.clone() } else { -c });
        let f = SymF::p(&[1], n).mul(&neg, n);
        assert_eq!(
            crate::symfunc::plethystic_inverse(&f, n).unwrap(),
            zw(n).unwrap()
        );
    }

    #[test]
    fn lie_low_degrees_and_pbw() {
        let l = zlie(3).unwrap();
        assert_eq!(l.component(2), sf("1/2*p[1,1] - 1/2*p[2]", 3));
        assert_eq!(l.component(3), sf("1/3*p[1,1,1] - 1/3*p[3]", 3));
        assert!(pbw_check(8).unwrap().passed());
        for d in 1..=8 {
            assert_eq!(
                dim(&zlie(8).unwrap(), d),
                qbig(crate::rational::factorial(d as u64 - 1))
            );
        }
    }

    #[test]
    fn zx_examples() {
        let x = zx_formula(3).unwrap();
        assert_eq!(x.component(1), sf("p[1]", 3));
        assert_eq!(x.component(2), sf("1/2*p[1,1] + 1/2*p[2]", 3));
        assert_eq!(x.component(3), sf("2/3*p[1,1,1] + 1/3*p[3]", 3));
        assert!(zx_cross_check(6).unwrap().passed());
        let x = zx_formula(6).unwrap();
        for d in 1..=6 {
            assert_eq!(
                dim(&x, d),
                q((d as i64 - 1).pow(d as u32 - 1)),
                "dim X({d})"
            );
        }
    }

    #[test]
    fn zwhat_examples() {
        let w = zwhat(7).unwrap();
        assert_eq!(w.component(2), sf("1/2*p[1,1] - 1/2*p[2]", 7));
        for l in Partition::all_up_to(7) {
            if l.multiplicity(1) == 1 {
                assert!(w.coeff(&l).is_zero());
            }
        }
        for d in 2..=7 {
            assert_eq!(
                dim(&w, d),
                q((d as i64 - 1).pow(d as u32 - 2)),
                "dim Ŵ({d})"
            );
        }
    }

    #[test]
    fn reflection_theorem() {
        let r = theorem_reflection_check(2).unwrap();
        assert!(r.passed());
        assert_eq!(higher_factors_at_one(&part(&[2, 1])).unwrap(), q(0));
        assert!(theorem_reflection_check(6).unwrap().passed());
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(
            j,
            r#"{"check":"reflection","max_degree":2,"status":"ok","first_discrepancy":null}"#
        );
    }

    #[test]
    fn main_theorem_low_degrees() {
        assert!(main_theorem_check(5).unwrap().passed());
        let mut tampered = zx_formula(4).unwrap();
        tampered.add_term(part(&[2, 1]), q(1));
        let r = main_theorem_check_with(4, &tampered).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.first_discrepancy.unwrap().partition, vec![2, 1]);
    }

    #[test]
    fn zlambda_w_formula_matches_plethysm() {
        let f = zlambda_w(4).unwrap();
        assert_eq!(f.coeff_poly(&part(&[1])), vec![q(0), q(-1)]);
        assert!(zlambda_w_check(5).unwrap().passed());
        // t = 1 without the constant term is -Z_X
        let at_one = f.eval_t(&q(1)).sub(&SymF::one(4));
        assert_eq!(at_one.scaled(&q(-1)), zx_formula(4).unwrap());
    }

    #[test]
    fn schur_positivity_low_degrees() {
        for f in [zw(5).unwrap(), zx_formula(5).unwrap(), zwhat(5).unwrap()] {
            for d in 1..=5 {
                for (_, m) in schur_decompose(&f.component(d), d).unwrap() {
                    assert!(crate::rational::is_nonneg_integer(&m));
                }
            }
        }
    }

    #[test]
    fn generator_names() {
        assert_eq!("zx".parse::<Generator>().unwrap(), Generator::Zx);
        assert!("zy".parse::<Generator>().is_err());
    }
}
