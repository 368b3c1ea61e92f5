//! Finite rational linear combinations over an ordered basis.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// A formal sum `Σ c_k · k` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K) -> Self {
        let mut out = Self::zero();
        out.add_term(key, Q::one());
        out
    }

    pub fn add_term(&mut self, key: K, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, scale: &Q) {
        if scale.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn coeff(&self, key: &K) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn scaled(&self, scale: &Q) -> Self {
        let mut out = Self::zero();
        out.add_assign_scaled(self, scale);
        out
    }

    /// Applies `f` to every basis element and sums the resulting combinations.
    pub fn try_flat_map<L, F>(&self, mut f: F) -> Result<LinComb<L>>
    where
        L: Ord + Clone,
        F: FnMut(&K) -> Result<LinComb<L>>,
    {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_assign_scaled(&f(k)?, c);
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Q)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + Clone> std::ops::Add for &LinComb<K> {
    type Output = LinComb<K>;
    fn add(self, rhs: Self) -> LinComb<K> {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &Q::one());
        out
    }
}

impl<K: Ord + Clone> std::ops::Sub for &LinComb<K> {
    type Output = LinComb<K>;
    fn sub(self, rhs: Self) -> LinComb<K> {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-Q::one());
        out
    }
}

impl<K: Ord + Clone> std::ops::Neg for &LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> LinComb<K> {
        self.scaled(&-Q::one())
    }
}

/// Writes `c1*k1 + c2*k2 - c3*k3`, omitting unit coefficients.
pub(crate) fn write_terms<'a, K: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a K, &'a Q)>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        let (sign, mag) = if c.is_negative() {
            ("-", -c)
        } else {
            ("+", c.clone())
        };
        match (first, sign) {
            (true, "-") => write!(f, "-")?,
            (true, _) => {}
            (false, s) => write!(f, " {s} ")?,
        }
        first = false;
        if mag.is_one() {
            write!(f, "{k}")?;
        } else {
            write!(f, "{}*{k}", fmt_q(&mag))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<K: Ord + fmt::Display> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter())
    }
}

/// Splits `a*X + b*Y - Z` into signed `(coefficient, key text)` pairs.
///
/// Signs are only recognised at bracket depth zero, so keys may contain brackets
/// and commas but not bare `+`/`-`.
pub(crate) fn parse_terms(s: &str) -> Result<Vec<(Q, String)>> {
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut chunks: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut negative = false;
    for ch in s.chars() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            '+' | '-' if depth == 0 => {
                if cur.trim().is_empty() {
                    negative ^= ch == '-';
                } else {
                    chunks.push((negative, std::mem::take(&mut cur)));
                    negative = ch == '-';
                }
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in `{s}`")));
    }
    chunks.push((negative, cur));

    chunks
        .into_iter()
        .map(|(neg, text)| {
            let text = text.trim();
            if text.is_empty() {
                return Err(Error::Parse(format!("empty term in `{s}`")));
            }
            let (coeff, key) = match text.split_once('*') {
                Some((c, k)) => (parse_q(c)?, k.trim().to_string()),
                None => (Q::one(), text.to_string()),
            };
            Ok((if neg { -coeff } else { coeff }, key))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qfrac};

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut a: LinComb<u32> = LinComb::zero();
        a.add_term(1, q(2));
        a.add_term(1, q(-2));
        a.add_term(2, q(0));
        assert!(a.is_zero());
        assert_eq!(a.to_string(), "0");
    }

    #[test]
    fn display_signs() {
        let a: LinComb<u32> = [(1, q(1)), (2, qfrac(-1, 2)), (3, q(-1))]
            .into_iter()
            .collect();
        assert_eq!(a.to_string(), "1 - 1/2*2 - 3");
        let b: LinComb<u32> = [(5, q(-3))].into_iter().collect();
        assert_eq!(b.to_string(), "-3*5");
    }

    #[test]
    fn parse_splits_at_top_level() {
        let t = parse_terms("1/2*p[1,1] - 1/2*p[2] + p[3]").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[1], (qfrac(-1, 2), "p[2]".to_string()));
        let t = parse_terms("-1(2,3) + 2*3(1)").unwrap();
        assert_eq!(t[0], (q(-1), "1(2,3)".to_string()));
        assert_eq!(t[1], (q(2), "3(1)".to_string()));
        assert!(parse_terms("0").unwrap().is_empty());
    }
}
