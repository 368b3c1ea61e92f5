//! Labeled rooted trees, the grafting product and the forest actions.
//!
//! A tree is stored in canonical form: the preorder listing of its vertices where the
//! children of every vertex are visited by increasing minimum label of their subtree.
//! Two trees are equal iff their canonical listings are equal, so the derived
//! `Eq`/`Ord`/`Hash` impls are the right ones for keyed collections.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lincomb::{parse_terms, LinComb};

pub type Label = u8;

/// Largest label count accepted by [`enumerate_trees`].
pub const MAX_ENUM_LABELS: usize = 9;

/// A finite set of labels as a 256-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct LabelSet([u64; 4]);

impl LabelSet {
    pub fn insert(&mut self, l: Label) -> bool {
        let (w, b) = ((l >> 6) as usize, l & 63);
        let fresh = self.0[w] & (1 << b) == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, l: Label) -> bool {
        self.0[(l >> 6) as usize] & (1 << (l & 63)) != 0
    }

    pub fn is_disjoint(&self, other: &LabelSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..=255u8).filter(|&l| self.contains(l)).collect()
    }

    pub fn overlap(&self, other: &LabelSet) -> Vec<Label> {
        (0..=255u8)
            .filter(|&l| self.contains(l) && other.contains(l))
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
struct Node {
    label: Label,
    depth: u8,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RootedTree {
    nodes: Box<[Node]>,
}

pub type TreeLinComb = LinComb<RootedTree>;
pub type ForestLinComb = LinComb<Forest>;

impl RootedTree {
    pub fn vertex(label: Label) -> Result<Self> {
        if label == 0 {
            return Err(Error::ZeroLabel);
        }
        Ok(Self {
            nodes: Box::new([Node { label, depth: 0 }]),
        })
    }

    /// Tree with the given root whose subtrees below the root are `children`.
    pub fn from_root_and_children(root: Label, children: Vec<RootedTree>) -> Result<Self> {
        let mut pairs = vec![(root, None)];
        for c in &children {
            let offset = pairs.len();
            pairs.extend(c.parent_pairs());
            pairs[offset].1 = Some(root);
        }
        Self::from_parent_pairs(&pairs)
    }

    /// Builds a tree from `(vertex, parent)` pairs; exactly one vertex has no parent.
    pub fn from_parent_pairs(pairs: &[(Label, Option<Label>)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyLabelSet);
        }
        let mut seen = LabelSet::default();
        for &(l, _) in pairs {
            if l == 0 {
                return Err(Error::ZeroLabel);
            }
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l));
            }
        }
        let roots = pairs.iter().filter(|(_, p)| p.is_none()).count();
        if roots != 1 {
            return Err(Error::Parse(format!("expected one root, found {roots}")));
        }
        if let Some(&(_, Some(p))) = pairs
            .iter()
            .find(|(_, p)| p.is_some_and(|p| !seen.contains(p)))
        {
            return Err(Error::Parse(format!("parent {p} is not a vertex")));
        }
        let tree = canonical_from_pairs(pairs);
        if tree.nodes.len() != pairs.len() {
            return Err(Error::Parse("parent relation contains a cycle".into()));
        }
        Ok(tree)
    }

    pub fn root(&self) -> Label {
        self.nodes[0].label
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.nodes.iter().map(|n| n.label)
    }

    pub fn label_set(&self) -> LabelSet {
        let mut s = LabelSet::default();
        for l in self.labels() {
            s.insert(l);
        }
        s
    }

    pub fn min_label(&self) -> Label {
        self.labels().min().expect("trees are nonempty")
    }

    /// `(vertex, parent)` pairs in canonical preorder; the root comes first.
    pub fn parent_pairs(&self) -> Vec<(Label, Option<Label>)> {
        let mut stack: Vec<Label> = Vec::with_capacity(self.nodes.len());
        self.nodes
            .iter()
            .map(|n| {
                stack.truncate(n.depth as usize);
                let parent = stack.last().copied();
                stack.push(n.label);
                (n.label, parent)
            })
            .collect()
    }

    /// Subtrees hanging from the root, in canonical order.
    pub fn children(&self) -> Vec<RootedTree> {
        let mut out = Vec::new();
        let mut i = 1;
        while i < self.nodes.len() {
            let mut j = i + 1;
            while j < self.nodes.len() && self.nodes[j].depth > 1 {
                j += 1;
            }
            out.push(RootedTree {
                nodes: self.nodes[i..j]
                    .iter()
                    .map(|n| Node {
                        label: n.label,
                        depth: n.depth - 1,
                    })
                    .collect(),
            });
            i = j;
        }
        out
    }

    /// Relabels every vertex through `f`, which must be injective on the labels.
    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> RootedTree {
        let pairs: Vec<_> = self
            .parent_pairs()
            .into_iter()
            .map(|(l, p)| (f(l), p.map(&f)))
            .collect();
        canonical_from_pairs(&pairs)
    }

    fn write_from(
        &self,
        i: usize,
        f: &mut fmt::Formatter<'_>,
    ) -> std::result::Result<usize, fmt::Error> {
        let depth = self.nodes[i].depth;
        write!(f, "{}", self.nodes[i].label)?;
        let mut j = i + 1;
        if j < self.nodes.len() && self.nodes[j].depth == depth + 1 {
            write!(f, "(")?;
            let mut first = true;
            while j < self.nodes.len() && self.nodes[j].depth == depth + 1 {
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                j = self.write_from(j, f)?;
            }
            write!(f, ")")?;
        }
        Ok(j)
    }
}

/// Canonical tree from `(vertex, parent)` pairs that are already known to be valid.
/// Vertices unreachable from the root are silently dropped.
fn canonical_from_pairs(pairs: &[(Label, Option<Label>)]) -> RootedTree {
    let m = pairs.len();
    let mut index_of = [u8::MAX; 256];
    for (i, &(l, _)) in pairs.iter().enumerate() {
        index_of[l as usize] = i as u8;
    }
    let parent: Vec<Option<usize>> = pairs
        .iter()
        .map(|&(_, p)| p.map(|p| index_of[p as usize] as usize))
        .collect();
    let root = parent.iter().position(Option::is_none).unwrap_or(0);

    // minimum label of each subtree, by pushing every label up its ancestor chain
    let mut submin: Vec<Label> = pairs.iter().map(|&(l, _)| l).collect();
    for v in 0..m {
        let l = pairs[v].0;
        let mut u = parent[v];
        let mut steps = 0;
        while let Some(w) = u {
            if submin[w] > l {
                submin[w] = l;
            }
            u = parent[w];
            steps += 1;
            if steps > m {
                break;
            }
        }
    }

    let mut edges: Vec<(usize, Label, usize)> = (0..m)
        .filter_map(|v| parent[v].map(|p| (p, submin[v], v)))
        .collect();
    edges.sort_unstable();
    let mut start = vec![0usize; m + 1];
    for &(p, _, _) in &edges {
        start[p + 1] += 1;
    }
    for i in 0..m {
        start[i + 1] += start[i];
    }

    let mut nodes = Vec::with_capacity(m);
    let mut stack = vec![(root, 0u8)];
    while let Some((v, d)) = stack.pop() {
        if nodes.len() >= m {
            break;
        }
        nodes.push(Node {
            label: pairs[v].0,
            depth: d,
        });
        for &(_, _, c) in edges[start[v]..start[v + 1]].iter().rev() {
            stack.push((c, d + 1));
        }
    }
    RootedTree {
        nodes: nodes.into_boxed_slice(),
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_from(0, f).map(|_| ())
    }
}

struct TreeParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn label(&mut self) -> Result<Label> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected a label at offset {start}")))
    }

    fn pairs(
        &mut self,
        parent: Option<Label>,
        out: &mut Vec<(Label, Option<Label>)>,
    ) -> Result<()> {
        let l = self.label()?;
        out.push((l, parent));
        if self.eat(b'(') {
            loop {
                self.pairs(Some(l), out)?;
                if self.eat(b')') {
                    break;
                }
                if !self.eat(b',') {
                    return Err(Error::Parse(format!(
                        "expected `,` or `)` at offset {}",
                        self.pos
                    )));
                }
            }
        }
        Ok(())
    }
}

impl FromStr for RootedTree {
    type Err = Error;

    /// Parses `root(child,child,...)`; children may be given in any order.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = TreeParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let mut pairs = Vec::new();
        p.pairs(None, &mut pairs)?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        RootedTree::from_parent_pairs(&pairs)
    }
}

/// A multiset of trees on pairwise disjoint label sets, sorted by minimum label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Forest {
    trees: Vec<RootedTree>,
}

impl Forest {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut trees: Vec<RootedTree>) -> Result<Self> {
        let mut seen = LabelSet::default();
        for t in &trees {
            let s = t.label_set();
            if !seen.is_disjoint(&s) {
                return Err(Error::LabelOverlap(seen.overlap(&s)));
            }
            seen = seen.union(&s);
        }
        trees.sort_by_key(RootedTree::min_label);
        Ok(Self { trees })
    }

    /// Caller guarantees disjointness.
    pub(crate) fn from_disjoint(mut trees: Vec<RootedTree>) -> Self {
        trees.sort_by_key(RootedTree::min_label);
        Self { trees }
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn label_set(&self) -> LabelSet {
        self.trees
            .iter()
            .fold(LabelSet::default(), |acc, t| acc.union(&t.label_set()))
    }

    /// Disjoint union, the product of the symmetric algebra.
    pub fn union(&self, other: &Forest) -> Result<Forest> {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        Forest::new(trees)
    }

    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> Forest {
        Forest::from_disjoint(self.trees.iter().map(|t| t.relabel(&f)).collect())
    }

    /// Every forest obtained by grafting `t` onto one vertex of one component.
    pub(crate) fn act_pl_terms_unchecked(&self, t: &RootedTree) -> Vec<Forest> {
        let mut out = Vec::new();
        for (i, ti) in self.trees.iter().enumerate() {
            for g in graft_terms_unchecked(ti, t) {
                let mut trees = self.trees.clone();
                trees[i] = g;
                out.push(Forest::from_disjoint(trees));
            }
        }
        out
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for Forest {
    type Err = Error;

    /// Parses `{T;T;...}`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("forest must be braced: `{s}`")))?;
        if inner.trim().is_empty() {
            return Ok(Forest::empty());
        }
        let trees = inner
            .split(';')
            .map(str::parse)
            .collect::<Result<Vec<RootedTree>>>()?;
        Forest::new(trees)
    }
}

pub fn parse_tree_lincomb(s: &str) -> Result<TreeLinComb> {
    parse_terms(s)?
        .into_iter()
        .map(|(c, k)| Ok((k.parse()?, c)))
        .collect()
}

pub fn parse_forest_lincomb(s: &str) -> Result<ForestLinComb> {
    parse_terms(s)?
        .into_iter()
        .map(|(c, k)| Ok((k.parse()?, c)))
        .collect()
}

fn check_disjoint(a: &LabelSet, b: &LabelSet) -> Result<()> {
    if a.is_disjoint(b) {
        Ok(())
    } else {
        Err(Error::LabelOverlap(a.overlap(b)))
    }
}

/// Enumerates every rooted tree on `labels` through Prüfer sequences: each labeled
/// free tree paired with each choice of root.
pub fn for_each_tree(labels: &[Label], mut visit: impl FnMut(RootedTree)) -> Result<()> {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if sorted.is_empty() {
        return Err(Error::EmptyLabelSet);
    }
    if sorted[0] == 0 {
        return Err(Error::ZeroLabel);
    }
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateLabel(w[0]));
    }
    let n = sorted.len();
    if n > MAX_ENUM_LABELS {
        return Err(Error::CapExceeded {
            what: "label count",
            value: n,
            cap: MAX_ENUM_LABELS,
        });
    }
    if n == 1 {
        visit(RootedTree::vertex(sorted[0])?);
        return Ok(());
    }

    let mut seq = vec![0usize; n - 2];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pairs: Vec<(Label, Option<Label>)> = Vec::with_capacity(n);
    loop {
        for a in adj.iter_mut() {
            a.clear();
        }
        for (u, v) in prufer_edges(&seq, n) {
            adj[u].push(v);
            adj[v].push(u);
        }
        for root in 0..n {
            pairs.clear();
            pairs.push((sorted[root], None));
            let mut i = 0;
            while i < pairs.len() {
                let (l, p) = pairs[i];
                let u = sorted.binary_search(&l).expect("label present");
                for &v in &adj[u] {
                    if Some(sorted[v]) != p {
                        pairs.push((sorted[v], Some(l)));
                    }
                }
                i += 1;
            }
            visit(canonical_from_pairs(&pairs));
        }
        // next sequence in base n
        let mut k = 0;
        while k < seq.len() {
            seq[k] += 1;
            if seq[k] < n {
                break;
            }
            seq[k] = 0;
            k += 1;
        }
        if k == seq.len() {
            break;
        }
    }
    Ok(())
}

fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&j| degree[j] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&j| degree[j] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// All `n^(n-1)` rooted trees on the given labels.
pub fn enumerate_trees(labels: &[Label]) -> Result<Vec<RootedTree>> {
    let mut out = Vec::new();
    for_each_tree(labels, |t| out.push(t))?;
    Ok(out)
}

/// Trees on `{1..n}`.
pub fn trees_on(n: usize) -> Result<Vec<RootedTree>> {
    let labels: Vec<Label> = (1..=n as u32).map(|l| l as Label).collect();
    enumerate_trees(&labels)
}

pub(crate) fn graft_terms_unchecked(s: &RootedTree, t: &RootedTree) -> Vec<RootedTree> {
    let mut pairs = s.parent_pairs();
    let base = pairs.len();
    pairs.extend(t.parent_pairs());
    s.labels()
        .map(|v| {
            pairs[base].1 = Some(v);
            canonical_from_pairs(&pairs)
        })
        .collect()
}

/// The trees of `s ↷ t`: `t`'s root attached below each vertex of `s` in turn.
pub fn graft_terms(s: &RootedTree, t: &RootedTree) -> Result<Vec<RootedTree>> {
    check_disjoint(&s.label_set(), &t.label_set())?;
    Ok(graft_terms_unchecked(s, t))
}

/// Pre-Lie product `s ↷ t`.
pub fn graft(s: &RootedTree, t: &RootedTree) -> Result<TreeLinComb> {
    Ok(graft_terms(s, t)?
        .into_iter()
        .map(|g| (g, crate::rational::q(1)))
        .collect())
}

pub fn graft_lin(a: &TreeLinComb, b: &TreeLinComb) -> Result<TreeLinComb> {
    a.try_flat_map(|s| b.try_flat_map(|t| graft(s, t)))
}

/// Lie bracket `[s, t] = s ↷ t - t ↷ s`.
pub fn bracket(s: &RootedTree, t: &RootedTree) -> Result<TreeLinComb> {
    Ok(&graft(s, t)? - &graft(t, s)?)
}

pub fn bracket_lin(a: &TreeLinComb, b: &TreeLinComb) -> Result<TreeLinComb> {
    Ok(&graft_lin(a, b)? - &graft_lin(b, a)?)
}

/// `F ↶ t`: graft `t` onto each component in turn (derivation extension of `↷`).
pub fn forest_act_pl(f: &Forest, t: &RootedTree) -> Result<ForestLinComb> {
    check_disjoint(&f.label_set(), &t.label_set())?;
    Ok(f.act_pl_terms_unchecked(t)
        .into_iter()
        .map(|g| (g, crate::rational::q(1)))
        .collect())
}

/// `F · t`: append `t` as a new component.
pub fn forest_concat(f: &Forest, t: &RootedTree) -> Result<Forest> {
    check_disjoint(&f.label_set(), &t.label_set())?;
    let mut trees = f.trees.clone();
    trees.push(t.clone());
    Ok(Forest::from_disjoint(trees))
}

/// `F ◁ t = F · t + F ↶ t`.
pub fn forest_act_total(f: &Forest, t: &RootedTree) -> Result<ForestLinComb> {
    let mut out = forest_act_pl(f, t)?;
    out.add_term(forest_concat(f, t)?, crate::rational::q(1));
    Ok(out)
}

pub fn forest_act_pl_lin(f: &ForestLinComb, t: &TreeLinComb) -> Result<ForestLinComb> {
    f.try_flat_map(|g| t.try_flat_map(|s| forest_act_pl(g, s)))
}

pub fn forest_act_total_lin(f: &ForestLinComb, t: &TreeLinComb) -> Result<ForestLinComb> {
    f.try_flat_map(|g| t.try_flat_map(|s| forest_act_total(g, s)))
}

/// A permutation of `{1..n}`; `images[i]` is the image of `i + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm {
    images: Vec<Label>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n).map(|i| i as Label).collect(),
        }
    }

    pub fn from_images(images: Vec<Label>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            let x = x as usize;
            if x == 0 || x > n || seen[x] {
                return Err(Error::NotABijection(n));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Product of disjoint cycles on `{1..n}`.
    pub fn from_cycles(n: usize, cycles: &[&[Label]]) -> Result<Self> {
        let mut images: Vec<Label> = (1..=n).map(|i| i as Label).collect();
        for cyc in cycles {
            for (i, &a) in cyc.iter().enumerate() {
                let b = cyc[(i + 1) % cyc.len()];
                if a == 0 || a as usize > n {
                    return Err(Error::NotABijection(n));
                }
                images[a as usize - 1] = b;
            }
        }
        Self::from_images(images)
    }

    /// The permutation whose cycles are consecutive runs of the given lengths.
    pub fn of_cycle_type(parts: &[u32]) -> Self {
        let n: u32 = parts.iter().sum();
        let mut images: Vec<Label> = vec![0; n as usize];
        let mut start = 1u32;
        for &k in parts {
            for i in 0..k {
                images[(start + i - 1) as usize] = (start + (i + 1) % k) as Label;
            }
            start += k;
        }
        Self { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, l: Label) -> Result<Label> {
        match l as usize {
            x if x >= 1 && x <= self.images.len() => Ok(self.images[x - 1]),
            _ => Err(Error::LabelOutOfDomain {
                label: l,
                degree: self.degree(),
            }),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch(format!(
                "composing permutations of degree {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(Perm {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize - 1])
                .collect(),
        })
    }

    /// Cycle lengths, weakly decreasing.
    pub fn cycle_type(&self) -> Vec<u32> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.images[j] as usize - 1;
                len += 1;
            }
            if len > 0 {
                out.push(len);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn images(&self) -> &[Label] {
        &self.images
    }
}

pub fn apply_perm(sigma: &Perm, t: &RootedTree) -> Result<RootedTree> {
    for l in t.labels() {
        sigma.apply(l)?;
    }
    Ok(t.relabel(|l| sigma.images[l as usize - 1]))
}

/// Number of trees on `{1..n}` fixed by `sigma`; `sigma` may act on a prefix
/// `{1..m}`, `m <= n`, and is extended by the identity.
pub fn count_fixed_trees(sigma: &Perm, n: usize) -> Result<u64> {
    if sigma.degree() > n {
        return Err(Error::DimensionMismatch(format!(
            "permutation of degree {} acting on {n} labels",
            sigma.degree()
        )));
    }
    let mut images: Vec<Label> = sigma.images.clone();
    images.extend((sigma.degree() + 1..=n).map(|l| l as Label));
    let labels: Vec<Label> = (1..=n).map(|l| l as Label).collect();
    let mut count = 0;
    for_each_tree(&labels, |t| {
        if t.relabel(|l| images[l as usize - 1]) == t {
            count += 1;
        }
    })?;
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn t(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    fn lc(s: &str) -> TreeLinComb {
        parse_tree_lincomb(s).unwrap()
    }

    fn flc(s: &str) -> ForestLinComb {
        parse_forest_lincomb(s).unwrap()
    }

    #[test]
    fn canonical_children_order() {
        assert_eq!(t("1(3,2)"), t("1(2,3)"));
        assert_eq!(t("1(3,2)").to_string(), "1(2,3)");
        assert_eq!(t("5(4(1),2)").to_string(), "5(4(1),2)");
        assert_eq!(t("5(2,4(1))").to_string(), "5(4(1),2)");
        assert_eq!(t("3(1(2))").children(), vec![t("1(2)")]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!("1(2,2)".parse::<RootedTree>().is_err());
        assert!("1(2".parse::<RootedTree>().is_err());
        assert!("0".parse::<RootedTree>().is_err());
        assert!("{1;1(2)}".parse::<Forest>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trees(&[1]).unwrap(), vec![t("1")]);
        assert_eq!(trees_on(3).unwrap().len(), 9);
        assert_eq!(trees_on(4).unwrap().len(), 64);
        assert_eq!(enumerate_trees(&[]), Err(Error::EmptyLabelSet));
        assert!(trees_on(10).is_err());
    }

    // Oracle: every map from non-roots to vertices whose iteration reaches the root.
    fn brute_force_trees(n: usize) -> std::collections::BTreeSet<RootedTree> {
        let mut out = std::collections::BTreeSet::new();
        for root in 1..=n {
            let others: Vec<usize> = (1..=n).filter(|&v| v != root).collect();
            let total = n.pow(others.len() as u32);
            for code in 0..total {
                let mut c = code;
                let mut parent = vec![0usize; n + 1];
                for &v in &others {
                    parent[v] = c % n + 1;
                    c /= n;
                }
                let reaches = others.iter().all(|&v| {
                    let mut u = v;
                    for _ in 0..n {
                        if u == root {
                            return true;
                        }
                        u = parent[u];
                    }
                    u == root
                });
                if reaches {
                    let mut pairs = vec![(root as Label, None)];
                    pairs.extend(
                        others
                            .iter()
                            .map(|&v| (v as Label, Some(parent[v] as Label))),
                    );
                    out.insert(RootedTree::from_parent_pairs(&pairs).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=5 {
            let listed = trees_on(n).unwrap();
            let set: std::collections::BTreeSet<_> = listed.iter().cloned().collect();
            assert_eq!(set.len(), listed.len(), "duplicates at n={n}");
            assert_eq!(set, brute_force_trees(n), "n={n}");
        }
    }

    #[test]
    fn enumeration_on_arbitrary_labels() {
        let ts = enumerate_trees(&[7, 3, 9]).unwrap();
        assert_eq!(ts.len(), 9);
        assert!(ts.iter().all(|x| x.label_set().labels() == vec![3, 7, 9]));
    }

    #[test]
    fn graft_examples() {
        assert_eq!(graft(&t("1"), &t("2")).unwrap(), lc("1(2)"));
        assert_eq!(graft(&t("1(2)"), &t("3")).unwrap(), lc("1(2,3) + 1(2(3))"));
        assert_eq!(graft(&t("3"), &t("1(2)")).unwrap(), lc("3(1(2))"));
        assert!(matches!(
            graft(&t("1(2)"), &t("2")),
            Err(Error::LabelOverlap(_))
        ));
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(&t("1"), &t("2")).unwrap(), lc("1(2) - 2(1)"));
        assert!(bracket(&t("1(2)"), &t("1(2)")).is_err());
        assert_eq!(
            bracket(&t("1(2)"), &t("3")).unwrap(),
            lc("1(2,3) + 1(2(3)) - 3(1(2))")
        );
    }

    #[test]
    fn forest_action_examples() {
        let e = Forest::empty();
        assert!(forest_act_pl(&e, &t("1")).unwrap().is_zero());
        let f1: Forest = "{1}".parse().unwrap();
        assert_eq!(forest_act_pl(&f1, &t("2")).unwrap(), flc("{1(2)}"));
        let f12: Forest = "{1;2}".parse().unwrap();
        assert_eq!(
            forest_act_pl(&f12, &t("3")).unwrap(),
            flc("{1(3);2} + {1;2(3)}")
        );

        assert_eq!(forest_concat(&e, &t("1")).unwrap(), f1);
        assert_eq!(forest_concat(&f1, &t("2")).unwrap(), f12);
        assert_eq!(
            forest_concat(&"{1(2)}".parse().unwrap(), &t("3(4)"))
                .unwrap()
                .to_string(),
            "{1(2);3(4)}"
        );
        assert!(forest_concat(&f1, &t("1")).is_err());

        assert_eq!(forest_act_total(&e, &t("1")).unwrap(), flc("{1}"));
        assert_eq!(
            forest_act_total(&f1, &t("2")).unwrap(),
            flc("{1;2} + {1(2)}")
        );
        assert_eq!(
            forest_act_total(&f12, &t("3")).unwrap(),
            flc("{1;2;3} + {1(3);2} + {1;2(3)}")
        );
    }

    #[test]
    fn permutation_examples() {
        let id = Perm::identity(3);
        assert_eq!(apply_perm(&id, &t("1(2,3)")).unwrap(), t("1(2,3)"));
        let s12 = Perm::from_cycles(2, &[&[1, 2]]).unwrap();
        assert_eq!(apply_perm(&s12, &t("1(2)")).unwrap(), t("2(1)"));
        let s23 = Perm::from_cycles(3, &[&[2, 3]]).unwrap();
        assert_eq!(apply_perm(&s23, &t("1(2,3)")).unwrap(), t("1(2,3)"));
        assert!(apply_perm(&s12, &t("1(3)")).is_err());
        assert!(Perm::from_images(vec![1, 1, 3]).is_err());
        assert_eq!(Perm::of_cycle_type(&[3, 2, 1]).cycle_type(), vec![3, 2, 1]);
    }

    #[test]
    fn fixed_tree_counts() {
        assert_eq!(count_fixed_trees(&Perm::identity(3), 3).unwrap(), 9);
        let c3 = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        assert_eq!(count_fixed_trees(&c3, 3).unwrap(), 0);
        // only the tree rooted at the fixed point with both others as leaves
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            let tr = Perm::from_cycles(3, &[&[a, b]]).unwrap();
            assert_eq!(count_fixed_trees(&tr, 3).unwrap(), 1);
        }
        let tr = Perm::from_cycles(2, &[&[1, 2]]).unwrap();
        assert_eq!(count_fixed_trees(&tr, 2).unwrap(), 0);
    }

    #[test]
    fn graft_term_count_is_vertex_count() {
        let s = t("4(1,2(3))");
        let g = graft(&s, &t("5(6)")).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.iter().all(|(_, c)| *c == q(1)));
    }
}
