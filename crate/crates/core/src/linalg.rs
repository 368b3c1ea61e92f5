//! Exact rank of sparse rational matrices.
//!
//! Two paths share one sparse elimination loop:
//! * fraction-free (Bareiss) over `Z` after clearing denominators row by row;
//! * modulo word-size primes, where the rank over `Q` is at least the rank mod `p`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// Primes for the modular path: `2^61 - 1`, `10^9 + 7`, `998244353`.
pub const PRIMES: [u64; 3] = [(1 << 61) - 1, 1_000_000_007, 998_244_353];

/// A sparse matrix with rows stored as column-sorted `(col, value)` lists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatQ {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<(usize, Q)>>,
}

impl SparseMatQ {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, Q::one()))).unwrap()
    }

    /// Duplicate positions are summed; zero results are dropped.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Q)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (r, c, v) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r},{c}) outside {n_rows}x{n_cols}"
                )));
            }
            *acc.entry((r, c)).or_insert_with(Q::zero) += v;
        }
        let mut out = Self::zero(n_rows, n_cols);
        for ((r, c), v) in acc {
            if !v.is_zero() {
                out.rows[r].push((c, v));
            }
        }
        Ok(out)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &[(usize, Q)] {
        &self.rows[r]
    }

    /// `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> SparseMatQ {
        let mut rows = vec![Vec::new(); self.n_cols];
        for (r, c, v) in self.entries() {
            rows[c].push((r, v.clone()));
        }
        SparseMatQ {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
        }
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatQ) -> Result<SparseMatQ> {
        if self.n_cols != other.n_rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut out = SparseMatQ::zero(self.n_rows, other.n_cols);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &other.rows[*k] {
                    *acc.entry(*c).or_insert_with(Q::zero) += a * b;
                }
            }
            out.rows[r] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        Ok(out)
    }

    pub fn add(&self, other: &SparseMatQ) -> Result<SparseMatQ> {
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} plus {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        SparseMatQ::from_triplets(
            self.n_rows,
            self.n_cols,
            self.entries()
                .chain(other.entries())
                .map(|(r, c, v)| (r, c, v.clone())),
        )
    }

    /// Rows and columns reordered: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatQ {
        SparseMatQ::from_triplets(
            self.n_rows,
            self.n_cols,
            self.entries()
                .map(|(r, c, v)| (row_perm[r], col_perm[c], v.clone())),
        )
        .expect("permutations stay in range")
    }

    /// Header `rows cols nnz`, then one `r c a/b` line per entry sorted by `(r, c)`.
    pub fn dump(&self) -> String {
        self.to_string()
    }

    pub fn parse_dump(s: &str) -> Result<SparseMatQ> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let bad = |what: &str| Error::Parse(format!("matrix dump: {what}"));
        let header: Vec<usize> = lines
            .next()
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| bad("bad header")))
            .collect::<Result<_>>()?;
        let [rows, cols, nnz] = header[..] else {
            return Err(bad("header needs three fields"));
        };
        let mut entries = Vec::with_capacity(nnz);
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let [r, c, v] = f[..] else {
                return Err(bad("entry needs three fields"));
            };
            let r = r.parse().map_err(|_| bad("bad row"))?;
            let c = c.parse().map_err(|_| bad("bad col"))?;
            entries.push((r, c, parse_q(v)?));
        }
        if entries.len() != nnz {
            return Err(bad("entry count does not match header"));
        }
        SparseMatQ::from_triplets(rows, cols, entries)
    }

    /// Each row scaled to integers by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        self.rows
            .iter()
            .map(|row| {
                let l = row
                    .iter()
                    .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
                row.iter()
                    .map(|(c, v)| (*c, v.numer() * (&l / v.denom())))
                    .collect()
            })
            .collect()
    }

    /// Rows reduced mod `p`, or `None` if `p` divides a denominator.
    fn mod_p_rows(&self, p: u64) -> Option<Vec<Vec<(usize, u64)>>> {
        let pb = BigInt::from(p);
        let reduce = |x: &BigInt| x.mod_floor(&pb).to_u64().expect("reduced below p");
        self.rows
            .iter()
            .map(|row| {
                let mut out = Vec::with_capacity(row.len());
                for (c, v) in row {
                    let d = reduce(v.denom());
                    if d == 0 {
                        return None;
                    }
                    let x = mul_mod(reduce(v.numer()), inv_mod(d, p), p);
                    if x != 0 {
                        out.push((*c, x));
                    }
                }
                Some(out)
            })
            .collect()
    }
}

impl fmt::Display for SparseMatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.n_rows, self.n_cols, self.nnz())?;
        for (r, c, v) in self.entries() {
            writeln!(f, "{r} {c} {}", fmt_q(v))?;
        }
        Ok(())
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut out = 1;
    while e > 0 {
        if e & 1 == 1 {
            out = mul_mod(out, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

type Row<T> = Vec<(usize, T)>;

/// One elimination strategy: how a pivot row is prepared and how it clears a column
/// from another row.
trait Eliminate<T> {
    fn take_pivot(&mut self, r: usize, row: &mut Row<T>, pc: usize);
    fn reduce(&mut self, r: usize, target: &mut Row<T>, pivot: &Row<T>, pc: usize);
}

/// Sparse elimination returning the number of pivots.
///
/// Pivot choice: the column with fewest nonzeros, ties to the lowest index, then the
/// row with fewest nonzeros in that column, ties to the lowest row.
fn sparse_rank<T, E: Eliminate<T>>(rows: Vec<Row<T>>, n_cols: usize, elim: &mut E) -> usize {
    let mut rows: Vec<Option<Row<T>>> = rows.into_iter().map(Some).collect();
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); n_cols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row.as_ref().unwrap() {
            col_rows[*c].insert(r);
        }
    }
    let mut queue: BTreeSet<(usize, usize)> = col_rows
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_empty())
        .map(|(c, s)| (s.len(), c))
        .collect();

    fn detach<T>(
        r: usize,
        row: &Row<T>,
        col_rows: &mut [HashSet<usize>],
        queue: &mut BTreeSet<(usize, usize)>,
    ) {
        for (c, _) in row {
            queue.remove(&(col_rows[*c].len(), *c));
            col_rows[*c].remove(&r);
            if !col_rows[*c].is_empty() {
                queue.insert((col_rows[*c].len(), *c));
            }
        }
    }

    fn attach<T>(
        r: usize,
        row: &Row<T>,
        col_rows: &mut [HashSet<usize>],
        queue: &mut BTreeSet<(usize, usize)>,
    ) {
        for (c, _) in row {
            queue.remove(&(col_rows[*c].len(), *c));
            col_rows[*c].insert(r);
            queue.insert((col_rows[*c].len(), *c));
        }
    }

    let mut rank = 0;
    while let Some(&(_, pc)) = queue.iter().next() {
        let pr = *col_rows[pc]
            .iter()
            .min_by_key(|&&r| (rows[r].as_ref().unwrap().len(), r))
            .unwrap();
        let mut pivot = rows[pr].take().unwrap();
        detach(pr, &pivot, &mut col_rows, &mut queue);
        elim.take_pivot(pr, &mut pivot, pc);
        let mut targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        targets.sort_unstable();
        for r in targets {
            let mut row = rows[r].take().unwrap();
            detach(r, &row, &mut col_rows, &mut queue);
            elim.reduce(r, &mut row, &pivot, pc);
            attach(r, &row, &mut col_rows, &mut queue);
            rows[r] = Some(row);
        }
        rank += 1;
    }
    rank
}

fn entry<T>(row: &Row<T>, c: usize) -> &T {
    &row[row
        .binary_search_by_key(&c, |(k, _)| *k)
        .expect("pivot column present")]
    .1
}

/// Merges two sorted sparse rows entrywise through `f`, dropping zeros.
fn combine<T, Z>(
    x: &Row<T>,
    y: &Row<T>,
    mut f: impl FnMut(Option<&T>, Option<&T>) -> T,
    is_zero: Z,
) -> Row<T>
where
    Z: Fn(&T) -> bool,
{
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (c, v) = match (x.get(i), y.get(j)) {
            (Some((cx, vx)), Some((cy, vy))) if cx == cy => {
                i += 1;
                j += 1;
                (*cx, f(Some(vx), Some(vy)))
            }
            (Some((cx, vx)), Some((cy, _))) if cx < cy => {
                i += 1;
                (*cx, f(Some(vx), None))
            }
            (Some((cx, vx)), None) => {
                i += 1;
                (*cx, f(Some(vx), None))
            }
            (_, Some((cy, vy))) => {
                j += 1;
                (*cy, f(None, Some(vy)))
            }
            (None, None) => unreachable!(),
        };
        if !is_zero(&v) {
            out.push((c, v));
        }
    }
    out
}

/// Bareiss elimination with lazily applied row scalings.
///
/// In dense Bareiss every remaining row is updated at step `k` by
/// `a ← (p_k a - a_c · pivot) / p_{k-1}`; a row with `a_c = 0` is only rescaled by
/// `p_k / p_{k-1}`. Rows remember the step at which they were last brought up to
/// date and catch up by `p_{k-1} / p_s` when next touched, so every stored entry is
/// a minor of the input and divisions are exact.
struct Bareiss {
    stamps: Vec<usize>,
    pivots: Vec<BigInt>,
}

impl Bareiss {
    /// Brings `row` to its value after step `k - 1`, where `k` is the current step.
    fn catch_up(&self, r: usize, row: &mut Row<BigInt>) {
        let s = self.stamps[r];
        let k = self.pivots.len() - 1;
        if s + 1 < k {
            let (num, den) = (&self.pivots[k - 1], &self.pivots[s]);
            for (_, v) in row.iter_mut() {
                *v = &*v * num / den;
            }
        }
    }
}

impl Eliminate<BigInt> for Bareiss {
    fn take_pivot(&mut self, r: usize, row: &mut Row<BigInt>, pc: usize) {
        // pivots[k] is pushed after catching up against pivots[k - 1]
        self.pivots.push(BigInt::zero());
        self.catch_up(r, row);
        let k = self.pivots.len() - 1;
        self.pivots[k] = entry(row, pc).clone();
        self.stamps[r] = k;
    }

    fn reduce(&mut self, r: usize, target: &mut Row<BigInt>, pivot: &Row<BigInt>, pc: usize) {
        self.catch_up(r, target);
        let k = self.pivots.len() - 1;
        let (p, prev) = (&self.pivots[k], &self.pivots[k - 1]);
        let a = entry(target, pc).clone();
        let zero = BigInt::zero();
        *target = combine(
            target,
            pivot,
            |t, v| (p * t.unwrap_or(&zero) - &a * v.unwrap_or(&zero)) / prev,
            BigInt::is_zero,
        );
        self.stamps[r] = k;
    }
}

/// Exact rank over `Q` by fraction-free elimination over `Z`.
pub fn rank_fraction_free(m: &SparseMatQ) -> usize {
    let mut elim = Bareiss {
        stamps: vec![0; m.n_rows],
        pivots: vec![BigInt::one()],
    };
    sparse_rank(m.integer_rows(), m.n_cols, &mut elim)
}

struct ModP(u64);

impl Eliminate<u64> for ModP {
    fn take_pivot(&mut self, _: usize, _: &mut Row<u64>, _: usize) {}

    fn reduce(&mut self, _: usize, target: &mut Row<u64>, pivot: &Row<u64>, pc: usize) {
        let p = self.0;
        let s = mul_mod(*entry(target, pc), inv_mod(*entry(pivot, pc), p), p);
        let neg = (p - s) % p;
        *target = combine(
            target,
            pivot,
            |t, v| (t.copied().unwrap_or(0) + mul_mod(neg, v.copied().unwrap_or(0), p)) % p,
            |x| *x == 0,
        );
    }
}

/// Rank modulo the prime `p`; `None` if `p` divides some denominator.
pub fn rank_mod_p(m: &SparseMatQ, p: u64) -> Option<usize> {
    let rows = m.mod_p_rows(p)?;
    Some(sparse_rank(rows, m.n_cols, &mut ModP(p)))
}

/// Ranks modulo each of [`PRIMES`] that does not divide a denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularRank {
    pub per_prime: Vec<(u64, usize)>,
}

impl ModularRank {
    /// The largest modular rank, a lower bound for the rank over `Q`.
    pub fn lower_bound(&self) -> usize {
        self.per_prime.iter().map(|&(_, r)| r).max().unwrap_or(0)
    }

    /// Whether at least two primes were usable and all agree.
    pub fn primes_agree(&self) -> bool {
        self.per_prime.len() >= 2
            && self
                .per_prime
                .iter()
                .all(|&(_, r)| r == self.per_prime[0].1)
    }
}

pub fn rank_multimodular(m: &SparseMatQ) -> ModularRank {
    ModularRank {
        per_prime: PRIMES
            .iter()
            .filter_map(|&p| rank_mod_p(m, p).map(|r| (p, r)))
            .collect(),
    }
}

/// The reference exact rank.
pub fn rank(m: &SparseMatQ) -> usize {
    rank_fraction_free(m)
}

pub fn kernel_dim(m: &SparseMatQ) -> usize {
    m.n_cols - rank(m)
}

pub fn image_dim(m: &SparseMatQ) -> usize {
    rank(m)
}

/// Whether `a · b` is the zero matrix.
pub fn compose_check(a: &SparseMatQ, b: &SparseMatQ) -> Result<bool> {
    Ok(a.mul(b)?.is_zero())
}
