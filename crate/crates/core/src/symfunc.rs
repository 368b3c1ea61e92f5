//! Symmetric functions in the power-sum basis, truncated at a fixed degree.
//!
//! A [`SymF`] is a finite rational combination of `p_λ` together with the degree `N`
//! up to which it is known. Every binary operation truncates to the smaller of the
//! two degrees, so a chain of plethysms never claims more precision than its inputs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lincomb::parse_terms;
use crate::rational::{factorial, fmt_q, parse_q, q, qbig, Q};

/// Largest degree for which Schur expansions are computed.
pub const MAX_SCHUR_DEGREE: usize = 8;

/// An integer partition, parts weakly decreasing.
///
/// Ordered by size first and then lexicographically on the parts, which is the
/// order terms are printed in.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Parse("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of parts equal to `k`.
    pub fn multiplicity(&self, k: u32) -> u32 {
        self.0.iter().filter(|&&p| p == k).count() as u32
    }

    /// Order of the centralizer of a permutation of this cycle type,
    /// `Π_k k^{m_k} m_k!`.
    pub fn z(&self) -> BigInt {
        let mut out = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let k = self.0[i];
            let m = self.multiplicity(k);
            out *= num_traits::pow(BigInt::from(k), m as usize) * factorial(m as u64);
            i += m as usize;
        }
        out
    }

    /// Fixed points of `σ^k` for `σ` of this cycle type: `Σ_{d | k} d·m_d`.
    pub fn fixed_points_of_power(&self, k: u32) -> u32 {
        (1..=k)
            .filter(|d| k.is_multiple_of(*d))
            .map(|d| d * self.multiplicity(d))
            .sum()
    }

    /// Multiset union, the index of `p_λ · p_μ`.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Every part multiplied by `k`, the index of `p_k ∘ p_λ`.
    pub fn scaled(&self, k: u32) -> Partition {
        Partition(self.0.iter().map(|&p| p * k).collect())
    }

    /// Distinct part sizes with their multiplicities.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((k, m)) if *k == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Partitions of `n`, largest first in reverse lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for k in (1..=max.min(n)).rev() {
                prefix.push(k);
                rec(n - k, k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n as u32, n as u32, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions of size `0..=n`.
    pub fn all_up_to(n: usize) -> Vec<Partition> {
        (0..=n).flat_map(Partition::all_of).collect()
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `[2,1]`, `(2,1)` or `2,1`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .trim_start_matches(['[', '('])
            .trim_end_matches([']', ')']);
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// A symmetric function `Σ c_λ p_λ` known up to degree `degree`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymF {
    terms: BTreeMap<Partition, Q>,
    degree: usize,
}

impl SymF {
    pub fn zero(degree: usize) -> Self {
        Self {
            terms: BTreeMap::new(),
            degree,
        }
    }

    pub fn one(degree: usize) -> Self {
        Self::monomial(Partition::empty(), Q::one(), degree)
    }

    /// `c · p_λ`, dropped if `|λ|` exceeds the degree.
    pub fn monomial(lambda: Partition, c: Q, degree: usize) -> Self {
        let mut out = Self::zero(degree);
        out.add_term(lambda, c);
        out
    }

    /// `p_λ` for the given parts.
    pub fn p(parts: &[u32], degree: usize) -> Self {
        Self::monomial(
            Partition::new(parts.to_vec()).expect("positive parts"),
            Q::one(),
            degree,
        )
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Partition, Q)>, degree: usize) -> Self {
        let mut out = Self::zero(degree);
        for (l, c) in terms {
            out.add_term(l, c);
        }
        out
    }

    pub fn add_term(&mut self, lambda: Partition, c: Q) {
        if c.is_zero() || lambda.size() > self.degree {
            return;
        }
        let entry = self.terms.entry(lambda).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, lambda: &Partition) -> Q {
        self.terms.get(lambda).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Partition::empty())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncate(&self, degree: usize) -> SymF {
        SymF::from_terms(
            self.terms
                .iter()
                .filter(|(l, _)| l.size() <= degree)
                .map(|(l, c)| (l.clone(), c.clone())),
            degree.min(self.degree),
        )
    }

    /// The homogeneous component of degree `d`.
    pub fn component(&self, d: usize) -> SymF {
        SymF::from_terms(
            self.terms
                .iter()
                .filter(|(l, _)| l.size() == d)
                .map(|(l, c)| (l.clone(), c.clone())),
            self.degree,
        )
    }

    pub fn scaled(&self, s: &Q) -> SymF {
        SymF::from_terms(
            self.terms.iter().map(|(l, c)| (l.clone(), c * s)),
            self.degree,
        )
    }

    pub fn add(&self, other: &SymF) -> SymF {
        let mut out = self.truncate(self.degree.min(other.degree));
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SymF) -> SymF {
        self.add(&other.scaled(&-Q::one()))
    }

    /// Product truncated at `min(self.degree, other.degree, n)`.
    pub fn mul(&self, other: &SymF, n: usize) -> SymF {
        let degree = n.min(self.degree).min(other.degree);
        let mut acc: BTreeMap<Partition, Q> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.size() + b.size() > degree {
                    continue;
                }
                *acc.entry(a.union(b)).or_insert_with(Q::zero) += ca * cb;
            }
        }
        SymF::from_terms(acc, degree)
    }

    /// `p_k ∘ self`: every `p_j` becomes `p_{jk}`.
    pub fn adams(&self, k: u32, n: usize) -> SymF {
        let degree = n.min(self.degree * k as usize);
        SymF::from_terms(
            self.terms.iter().map(|(l, c)| (l.scaled(k), c.clone())),
            degree,
        )
    }

    /// Coefficientwise equality up to the common degree.
    pub fn agrees_with(&self, other: &SymF) -> bool {
        first_discrepancy(self, other).is_none()
    }

    /// `Σ_λ c_λ(1ⁿ)` style maps: applies `f(λ)` as a multiplier to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Partition, &Q) -> Q) -> SymF {
        SymF::from_terms(
            self.terms.iter().map(|(l, c)| (l.clone(), f(l, c))),
            self.degree,
        )
    }

    pub fn to_json(&self) -> SymFJson {
        SymFJson {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(l, c)| TermJson {
                    partition: l.0.clone(),
                    coeff: fmt_q(c),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SymFJson) -> Result<SymF> {
        let mut out = SymF::zero(j.degree);
        for t in &j.terms {
            out.add_term(Partition::new(t.partition.clone())?, parse_q(&t.coeff)?);
        }
        Ok(out)
    }

    /// Parses the text form with an explicit truncation degree.
    pub fn parse_with_degree(s: &str, degree: usize) -> Result<SymF> {
        let mut out = SymF::zero(degree);
        for (c, key) in parse_terms(s)? {
            let lambda = if key == "1" {
                Partition::empty()
            } else {
                let inner = key
                    .strip_prefix("p[")
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("expected p[...], got `{key}`")))?;
                inner.parse()?
            };
            out.add_term(lambda, c);
        }
        Ok(out)
    }
}

impl fmt::Display for SymF {
    /// `a/b*p[λ1,λ2] + ...`; the constant term is printed as a bare rational.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (l, c) in &self.terms {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            match (l.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{}", fmt_q(&mag))?,
                (false, true) => write!(f, "p{l}")?,
                (false, false) => write!(f, "{}*p{l}", fmt_q(&mag))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for SymF {
    type Err = Error;

    /// Parses the text form; the degree is the largest degree present.
    fn from_str(s: &str) -> Result<Self> {
        let wide = SymF::parse_with_degree(s, usize::MAX)?;
        let degree = wide.terms.keys().map(Partition::size).max().unwrap_or(0);
        Ok(SymF {
            terms: wide.terms,
            degree,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub partition: Vec<u32>,
    pub coeff: String,
}

/// `{"degree":N, "terms":[{"partition":[...],"coeff":"a/b"}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymFJson {
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

/// Location of the first coefficient where two symmetric functions differ,
/// scanning partitions in increasing order up to the common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub partition: Partition,
    pub lhs: Q,
    pub rhs: Q,
}

pub fn first_discrepancy(a: &SymF, b: &SymF) -> Option<Discrepancy> {
    let degree = a.degree.min(b.degree);
    let mut keys: Vec<&Partition> = a
        .terms
        .keys()
        .chain(b.terms.keys())
        .filter(|l| l.size() <= degree)
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().find_map(|l| {
        let (x, y) = (a.coeff(l), b.coeff(l));
        (x != y).then(|| Discrepancy {
            partition: l.clone(),
            lhs: x,
            rhs: y,
        })
    })
}

pub fn sf_mul(f: &SymF, g: &SymF, n: usize) -> SymF {
    f.mul(g, n)
}

/// `F ∘ G` truncated at `min(N, F.degree, G.degree)`.
///
/// Each `p_μ` of `F` becomes `Π_i p_{μ_i} ∘ G`, and `p_k ∘ G` substitutes `p_{jk}` for
/// every `p_j` in `G`.
pub fn plethysm(f: &SymF, g: &SymF, n: usize) -> Result<SymF> {
    if !g.constant_term().is_zero() {
        return Err(Error::PlethysmConstantTerm);
    }
    let degree = n.min(f.degree).min(g.degree);
    let adams: Vec<SymF> = (0..=degree as u32)
        .map(|k| {
            if k == 0 {
                SymF::zero(degree)
            } else {
                g.adams(k, degree)
            }
        })
        .collect();
    let mut out = SymF::zero(degree);
    for (mu, c) in &f.terms {
        if mu.size() > degree {
            continue;
        }
        let mut prod = SymF::one(degree);
        for &part in mu.parts() {
            prod = prod.mul(&adams[part as usize], degree);
            if prod.is_zero() {
                break;
            }
        }
        for (l, d) in prod.terms {
            out.add_term(l, c * d);
        }
    }
    Ok(out)
}

/// The `G` with `F ∘ G = p_1` up to degree `N`, for `F = p_1 + (degree ≥ 2)`.
///
/// Iterates `G ← p_1 - (F - p_1) ∘ G`; the degree-`d` part of the right side only
/// involves components of `G` of degree below `d`, so `N` rounds suffice.
pub fn plethystic_inverse(f: &SymF, n: usize) -> Result<SymF> {
    let degree = n.min(f.degree);
    let p1 = SymF::p(&[1], degree);
    if degree == 0 {
        return Ok(SymF::zero(0));
    }
    if !f.constant_term().is_zero() || f.component(1).truncate(degree) != p1 {
        return Err(Error::NotPlethysticallyInvertible);
    }
    let higher = f.truncate(degree).sub(&p1);
    let mut g = p1.clone();
    for _ in 1..degree {
        g = p1.sub(&plethysm(&higher, &g, degree)?);
    }
    Ok(g)
}

/// `(p_1 ∂/∂p_1 - Id)`: multiplies the coefficient of `p_λ` by `m_1(λ) - 1`.
pub fn p1_partial_operator(f: &SymF) -> SymF {
    f.map_coeffs(|l, c| c * q(l.multiplicity(1) as i64 - 1))
}

pub fn sf_exp(f: &SymF, n: usize) -> Result<SymF> {
    if !f.constant_term().is_zero() {
        return Err(Error::ExpConstantTerm);
    }
    let degree = n.min(f.degree);
    let mut out = SymF::one(degree);
    let mut power = SymF::one(degree);
    for k in 1..=degree {
        power = power
            .mul(f, degree)
            .scaled(&Q::new(BigInt::one(), BigInt::from(k)));
        out = out.add(&power);
    }
    Ok(out)
}

pub fn sf_log(f: &SymF, n: usize) -> Result<SymF> {
    if !f.constant_term().is_one() {
        return Err(Error::LogConstantTerm);
    }
    let degree = n.min(f.degree);
    let g = f.truncate(degree).sub(&SymF::one(degree));
    let mut out = SymF::zero(degree);
    let mut power = SymF::one(degree);
    for k in 1..=degree {
        power = power.mul(&g, degree);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = out.add(&power.scaled(&Q::new(BigInt::from(sign), BigInt::from(k))));
    }
    Ok(out)
}

/// A class function on `S_n`, keyed by cycle type.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassFunction {
    pub n: usize,
    pub values: BTreeMap<Partition, Q>,
}

impl ClassFunction {
    pub fn value(&self, lambda: &Partition) -> Q {
        self.values.get(lambda).cloned().unwrap_or_else(Q::zero)
    }

    /// Value at the identity.
    pub fn dimension(&self) -> Q {
        self.value(&Partition(vec![1; self.n]))
    }

    /// Frobenius characteristic `Σ_λ χ(λ) p_λ / z_λ`.
    pub fn to_symf(&self, degree: usize) -> SymF {
        SymF::from_terms(
            self.values
                .iter()
                .map(|(l, v)| (l.clone(), v / qbig(l.z()))),
            degree,
        )
    }

    /// `Σ_λ χ(λ)² / z_λ`, the squared norm.
    pub fn norm_squared(&self) -> Q {
        self.values
            .iter()
            .map(|(l, v)| v * v / qbig(l.z()))
            .fold(Q::zero(), |a, b| a + b)
    }
}

/// `χ(λ) = z_λ · [p_λ] F` for every `λ ⊢ n`.
pub fn character_values(f: &SymF, n: usize) -> ClassFunction {
    ClassFunction {
        n,
        values: Partition::all_of(n)
            .into_iter()
            .map(|l| {
                let v = f.coeff(&l) * qbig(l.z());
                (l, v)
            })
            .collect(),
    }
}

/// Irreducible characters `χ^μ(λ)` by the Murnaghan–Nakayama rule, memoized.
#[derive(Default, Debug)]
pub struct CharacterTable {
    memo: HashMap<(Partition, Partition), i64>,
}

impl CharacterTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ^μ` evaluated at a permutation of cycle type `λ`.
    pub fn chi(&mut self, mu: &Partition, lambda: &Partition) -> i64 {
        if mu.size() != lambda.size() {
            return 0;
        }
        if lambda.is_empty() {
            return 1;
        }
        let key = (mu.clone(), lambda.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let r = lambda.0[0];
        let rest = Partition(lambda.0[1..].to_vec());
        let value = remove_rim_hooks(mu, r)
            .into_iter()
            .map(|(nu, height)| {
                let sign = if height % 2 == 0 { 1 } else { -1 };
                sign * self.chi(&nu, &rest)
            })
            .sum();
        self.memo.insert(key, value);
        value
    }
}

/// All partitions obtained from `mu` by removing a rim hook of length `r`, with the
/// hook's height (rows spanned minus one). Works on the beta-set `μ_i + ℓ - i`, where
/// removing a hook moves one bead from `β` to the free position `β - r`.
fn remove_rim_hooks(mu: &Partition, r: u32) -> Vec<(Partition, u32)> {
    let len = mu.len() as i64;
    let beta: Vec<i64> =
        mu.0.iter()
            .enumerate()
            .map(|(i, &p)| p as i64 + len - 1 - i as i64)
            .collect();
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        let target = b - r as i64;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&g| g > target && g < b).count() as u32;
        let mut nb = beta.clone();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<u32> = nb
            .iter()
            .enumerate()
            .map(|(j, &g)| (g - (len - 1 - j as i64)) as u32)
            .filter(|&p| p > 0)
            .collect();
        out.push((Partition(parts), height));
    }
    out
}

/// Multiplicities `⟨F, s_μ⟩ = Σ_λ χ^μ(λ) [p_λ]F` over `μ ⊢ n`.
pub fn schur_decompose(f: &SymF, n: usize) -> Result<BTreeMap<Partition, Q>> {
    if n > MAX_SCHUR_DEGREE {
        return Err(Error::CapExceeded {
            what: "Schur degree",
            value: n,
            cap: MAX_SCHUR_DEGREE,
        });
    }
    let mut table = CharacterTable::new();
    let classes = Partition::all_of(n);
    Ok(classes
        .iter()
        .map(|mu| {
            let m = classes
                .iter()
                .map(|l| f.coeff(l) * q(table.chi(mu, l)))
                .fold(Q::zero(), |a, b| a + b);
            (mu.clone(), m)
        })
        .collect())
}

/// A symmetric function whose coefficients are polynomials in a parameter `t`,
/// stored as `Σ_j t^j F_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymFT {
    by_power: Vec<SymF>,
    degree: usize,
}

impl SymFT {
    pub fn zero(degree: usize) -> Self {
        Self {
            by_power: Vec::new(),
            degree,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Adds `c · t^j · p_λ`.
    pub fn add_term(&mut self, j: usize, lambda: Partition, c: Q) {
        while self.by_power.len() <= j {
            self.by_power.push(SymF::zero(self.degree));
        }
        self.by_power[j].add_term(lambda, c);
        while self.by_power.last().is_some_and(SymF::is_zero) {
            self.by_power.pop();
        }
    }

    /// Coefficient of `t^j`.
    pub fn t_coefficient(&self, j: usize) -> SymF {
        self.by_power
            .get(j)
            .cloned()
            .unwrap_or_else(|| SymF::zero(self.degree))
    }

    pub fn max_t_power(&self) -> usize {
        self.by_power.len().saturating_sub(1)
    }

    /// Polynomial in `t` multiplying `p_λ`, lowest power first.
    pub fn coeff_poly(&self, lambda: &Partition) -> Vec<Q> {
        let mut out: Vec<Q> = self.by_power.iter().map(|f| f.coeff(lambda)).collect();
        while out.last().is_some_and(Q::is_zero) {
            out.pop();
        }
        out
    }

    pub fn partitions(&self) -> Vec<Partition> {
        let mut out: Vec<Partition> = self
            .by_power
            .iter()
            .flat_map(|f| f.iter().map(|(l, _)| l.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn eval_t(&self, t: &Q) -> SymF {
        let mut out = SymF::zero(self.degree);
        let mut tp = Q::one();
        for f in &self.by_power {
            out = out.add(&f.scaled(&tp));
            tp *= t;
        }
        out
    }

    /// `F ∘ G` where only the outer argument carries `t`.
    pub fn plethysm(&self, g: &SymF, n: usize) -> Result<SymFT> {
        let degree = n.min(self.degree).min(g.degree);
        let mut out = SymFT::zero(degree);
        for (j, f) in self.by_power.iter().enumerate() {
            for (l, c) in plethysm(f, g, degree)?.iter() {
                out.add_term(j, l.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn agrees_with(&self, other: &SymFT) -> bool {
        let top = self.by_power.len().max(other.by_power.len());
        (0..top).all(|j| self.t_coefficient(j).agrees_with(&other.t_coefficient(j)))
    }
}

impl fmt::Display for SymFT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in self.partitions() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let poly: Vec<String> = self
                .coeff_poly(&l)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| match j {
                    0 => fmt_q(c),
                    1 => format!("{}*t", fmt_q(c)),
                    _ => format!("{}*t^{j}", fmt_q(c)),
                })
                .collect();
            if l.is_empty() {
                write!(f, "({})", poly.join(" + "))?;
            } else {
                write!(f, "({})*p{l}", poly.join(" + "))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
