//! Counting labelings of `G(T; n)` with descent set exactly `S`, and the
//! descent polynomial `d(T; n)`.
//!
//! Five independent routes are provided: brute-force enumeration, the
//! recursion at a descent vertex, the recursion at an ascent vertex, the
//! signed sum over subsets of `S`, and the `n -> n + 1` recursion that tracks
//! where the largest label sits. Memoization is keyed on the canonical form of
//! the tree, since `d(T; n)` does not depend on sibling order.

use std::fmt;
use std::str::FromStr;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinat::{binomial, factorial, falling_factorial_coeffs};
use crate::error::{Error, Result};
use crate::poly::ExactPolynomial;
use crate::tree::{Mark, MarkedTree, Vertex};

pub const DEFAULT_BRUTE_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    Brute,
    Cut,
    AscentCut,
    Explicit,
    Shift,
    /// Descent-vertex recursion for values; interpolated from it for
    /// polynomials.
    Auto,
}

impl Algo {
    pub const ALL: [Algo; 6] = [
        Algo::Brute,
        Algo::Cut,
        Algo::AscentCut,
        Algo::Explicit,
        Algo::Shift,
        Algo::Auto,
    ];

    fn name(self) -> &'static str {
        match self {
            Algo::Brute => "brute",
            Algo::Cut => "cut",
            Algo::AscentCut => "ascent_cut",
            Algo::Explicit => "explicit",
            Algo::Shift => "shift",
            Algo::Auto => "auto",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s || (s == "ascent-cut" && *a == Algo::AscentCut))
            .ok_or_else(|| Error::Precondition(format!("unknown algorithm {s:?}")))
    }
}

/// Memo table from `(route, canonical key, n)` to `d(T; n)`.
///
/// Safe to share between threads; concurrent inserts of the same key store
/// equal values.
#[derive(Debug)]
pub struct MemoCache {
    map: DashMap<(Algo, String, usize), BigInt>,
    enabled: bool,
}

impl Default for MemoCache {
    fn default() -> Self {
        Self::new()
    }
}

impl MemoCache {
    pub fn new() -> Self {
        MemoCache {
            map: DashMap::new(),
            enabled: true,
        }
    }

    /// A cache that never stores anything; every lookup recomputes.
    pub fn disabled() -> Self {
        MemoCache {
            map: DashMap::new(),
            enabled: false,
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn get_or_compute(
        &self,
        algo: Algo,
        t: &MarkedTree,
        n: usize,
        compute: impl FnOnce() -> BigInt,
    ) -> BigInt {
        if !self.enabled {
            return compute();
        }
        let key = (algo, t.canonical_key(), n);
        if let Some(v) = self.map.get(&key) {
            return v.clone();
        }
        // no guard is held while recursing
        let value = compute();
        self.map.entry(key).or_insert(value).clone()
    }
}

fn check_n(t: &MarkedTree, n: usize) -> Result<()> {
    if n < t.size() {
        Err(Error::SizeTooSmall {
            n: n as i64,
            min: t.size(),
        })
    } else {
        Ok(())
    }
}

/// Calls `visit` with every labeling of `g` (as a label-per-vertex slice)
/// whose descent set is exactly the marked set of `g`.
///
/// Labels are placed parent before child and a partial labeling is abandoned
/// as soon as one vertex disagrees with its mark.
pub(crate) fn for_each_labeling(g: &MarkedTree, mut visit: impl FnMut(&[usize])) {
    let order = g.preorder();
    let n = g.size();
    assert!(n < 64, "labeling enumeration is limited to 63 vertices");
    let mut labels = vec![0usize; n];
    // the root has no parent, so it can never be a descent
    if g.is_descent(g.root()) {
        return;
    }

    fn place(
        g: &MarkedTree,
        order: &[Vertex],
        depth: usize,
        used: u64,
        labels: &mut [usize],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if depth == order.len() {
            visit(labels);
            return;
        }
        let v = order[depth];
        let n = order.len();
        let (lo, hi) = match g.parent(v) {
            None => (1, n),
            Some(p) if g.is_descent(v) => (labels[p] + 1, n),
            Some(p) => (1, labels[p] - 1),
        };
        for label in lo..=hi {
            if used >> label & 1 == 1 {
                continue;
            }
            labels[v] = label;
            place(g, order, depth + 1, used | 1 << label, labels, visit);
        }
        labels[v] = 0;
    }

    place(g, &order, 0, 0, &mut labels, &mut visit);
}

/// `|D(T; n)|` by enumerating labelings of `G(T; n)`. Refuses `n > cap`.
pub fn count_brute(t: &MarkedTree, n: usize, cap: usize) -> Result<BigInt> {
    check_n(t, n)?;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "brute-force n",
            value: n as u128,
            cap: cap as u128,
        });
    }
    let g = t.extend(n)?;
    let mut count = 0u64;
    for_each_labeling(&g, |_| count += 1);
    Ok(count.into())
}

/// Vertex the descent recursion pivots on: a maximal descent of greatest
/// depth, smallest index on ties.
fn cut_pivot(t: &MarkedTree) -> Option<Vertex> {
    let depth = t.depths();
    t.maximal_descents()
        .into_iter()
        .max_by_key(|&v| (depth[v], std::cmp::Reverse(v)))
}

/// `d(T; n)` via `d(T;n) = C(n,h_v) d(T↑v restricted to T_v; h_v) d(T∖T_v; n-h_v) - d(T↑v; n)`.
pub fn count_cut(t: &MarkedTree, n: usize, cache: &MemoCache) -> Result<BigInt> {
    check_n(t, n)?;
    Ok(cut(t, n, cache))
}

fn cut(t: &MarkedTree, n: usize, cache: &MemoCache) -> BigInt {
    if !t.has_descents() {
        return t.natlab();
    }
    cache.get_or_compute(Algo::Cut, t, n, || {
        let v = cut_pivot(t).expect("a tree with descents has a maximal one");
        let h = t.hook_lengths().0[v];
        let up = t.toggle(v, Mark::Ascent).expect("pivot is a vertex");
        let (sub, _) = up.split(v).expect("pivot is a vertex");
        let (_, rest) = t.split(v).expect("pivot is a vertex");
        let rest_count = rest.map_or_else(BigInt::one, |r| cut(&r, n - h, cache));
        binomial(n as i64, h) * cut(&sub, h, cache) * rest_count - cut(&up, n, cache)
    })
}

/// `d(T; n)` via the recursion at a non-root ascent vertex `v`:
/// `d(T;n) = C(n,h_v) d(T_v; h_v) d(T∖T_v; n-h_v) - d(T↓v; n)`.
///
/// Trees without descents return the hook-length count; trees whose only
/// ascent is the root fall back to [`count_cut`].
pub fn count_ascent_cut(t: &MarkedTree, n: usize, cache: &MemoCache) -> Result<BigInt> {
    check_n(t, n)?;
    Ok(ascent_cut(t, n, cache))
}

fn ascent_cut(t: &MarkedTree, n: usize, cache: &MemoCache) -> BigInt {
    if !t.has_descents() {
        return t.natlab();
    }
    let depth = t.depths();
    let pivot = t
        .vertices()
        .filter(|&v| v != t.root() && !t.is_descent(v))
        .max_by_key(|&v| (depth[v], std::cmp::Reverse(v)));
    let Some(v) = pivot else {
        return cut(t, n, cache);
    };
    cache.get_or_compute(Algo::AscentCut, t, n, || {
        let h = t.hook_lengths().0[v];
        let (sub, rest) = t.split(v).expect("pivot is a vertex");
        let rest = rest.expect("pivot is not the root");
        let down = t.toggle(v, Mark::Descent).expect("pivot is a vertex");
        binomial(n as i64, h) * ascent_cut(&sub, h, cache) * ascent_cut(&rest, n - h, cache)
            - ascent_cut(&down, n, cache)
    })
}

/// The descent polynomial as a signed sum over subsets `N` of the descent
/// set.
///
/// Cutting the parent edges of `N` inside `G(T; n)` leaves the cut-off
/// subtrees (total size `m`) and a root component made of the chain plus the
/// remaining `t = s - m` vertices of `T`. Counting natural labelings of every
/// piece, the chain hooks telescope and each term becomes
/// `t! / (hooks of the root part) * n(n-1)...(n-m+1) / (hooks of the cut pieces)`.
pub fn poly_explicit(t: &MarkedTree) -> ExactPolynomial {
    let s = t.size();
    let descents = t.descents();
    assert!(descents.len() < 32, "subset expansion limited to 31 descents");
    let order = t.preorder();
    let root = t.root();
    let mut by_chain_len = vec![BigRational::zero(); s + 1];

    for mask in 0u64..1 << descents.len() {
        let mut cut = vec![false; s];
        for (i, &v) in descents.iter().enumerate() {
            cut[v] = mask >> i & 1 == 1;
        }
        let mut comp_size = vec![1usize; s];
        for &v in order.iter().rev() {
            if let Some(p) = t.parent(v) {
                if !cut[v] {
                    comp_size[p] += comp_size[v];
                }
            }
        }
        // hook product of each component, indexed by its top vertex
        let mut top = vec![root; s];
        let mut hook_product = vec![BigInt::one(); s];
        for &v in &order {
            top[v] = match t.parent(v) {
                Some(p) if !cut[v] => top[p],
                _ => v,
            };
            hook_product[top[v]] *= comp_size[v];
        }
        let kept = if cut[root] { 0 } else { comp_size[root] };
        let mut denom = BigInt::one();
        for v in t.vertices().filter(|&v| top[v] == v) {
            denom *= &hook_product[v];
        }
        let sign = if (descents.len() - mask.count_ones() as usize) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        by_chain_len[s - kept] += BigRational::new(sign * factorial(kept), denom);
    }

    by_chain_len
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(ExactPolynomial::zero(), |acc, (m, c)| {
            let falling = ExactPolynomial::from_ints(falling_factorial_coeffs(m));
            &acc + &falling.scale(&c)
        })
}

/// Trees reached by putting the largest label on the root of `T` and
/// contracting it into the chain vertex above: that vertex becomes an ascent
/// root and the former children take every mark assignment, in bitmask order.
fn root_contract_configs(t: &MarkedTree) -> Vec<MarkedTree> {
    let root = t.root();
    let kids = t.children(root);
    let base = t.toggle(root, Mark::Ascent).expect("root is a vertex");
    (0..1usize << kids.len())
        .map(|config| {
            kids.iter().enumerate().fold(base.clone(), |acc, (i, &c)| {
                let mark = if config >> i & 1 == 1 {
                    Mark::Descent
                } else {
                    Mark::Ascent
                };
                acc.toggle(c, mark).expect("child is a vertex")
            })
        })
        .collect()
}

/// Trees `T'` (or `None` for the empty tree) with
/// `d(T; n+1) = d(T; n) + Σ d(T'; n)`.
pub fn shift_terms(t: &MarkedTree) -> Vec<Option<MarkedTree>> {
    let mut out = Vec::new();
    for v in t.descents() {
        let leaf = t.is_leaf(v);
        let plain_children = t.children(v).iter().all(|&c| !t.is_descent(c));
        if leaf && v == t.root() {
            out.push(None);
        } else if leaf {
            out.extend(t.contract_configs(v).expect("non-root").into_iter().map(Some));
        } else if plain_children && v == t.root() {
            out.extend(root_contract_configs(t).into_iter().map(Some));
        } else if plain_children {
            out.extend(t.contract_configs(v).expect("non-root").into_iter().map(Some));
        }
    }
    out
}

/// `d(T; n)` by stepping `d(T; m+1) = d(T; m) + Σ d(T'; m)` up from the base
/// value `d(T; s)`, which comes from [`count_cut`].
pub fn count_shift(t: &MarkedTree, n: usize, cache: &MemoCache) -> Result<BigInt> {
    check_n(t, n)?;
    Ok(shift(t, n, cache))
}

fn shift(t: &MarkedTree, n: usize, cache: &MemoCache) -> BigInt {
    if n == t.size() {
        return cut(t, n, cache);
    }
    cache.get_or_compute(Algo::Shift, t, n, || {
        let m = n - 1;
        shift_terms(t)
            .iter()
            .map(|term| term.as_ref().map_or_else(BigInt::one, |tp| shift(tp, m, cache)))
            .fold(shift(t, m, cache), |acc, x| acc + x)
    })
}

/// `(C(n, s) - 1) · natlab(T)`, valid when the root is the only descent.
pub fn poly_root_only(t: &MarkedTree) -> Result<ExactPolynomial> {
    if t.descents() != [t.root()] {
        return Err(Error::Precondition(format!(
            "{t}: the root must be the only descent"
        )));
    }
    let choose = ExactPolynomial::binomial_in_n(0, t.size());
    let shifted = &choose - &ExactPolynomial::constant(BigInt::one());
    Ok(shifted.scale(&BigRational::from_integer(t.natlab())))
}

/// Bundles a memo cache and the brute-force cap.
#[derive(Debug)]
pub struct Engine {
    pub cache: MemoCache,
    pub brute_cap: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            cache: MemoCache::new(),
            brute_cap: DEFAULT_BRUTE_CAP,
        }
    }
}

impl Engine {
    pub fn with_brute_cap(brute_cap: usize) -> Self {
        Engine {
            brute_cap,
            ..Engine::default()
        }
    }

    /// `d(T; n)` by the chosen route.
    pub fn count(&self, t: &MarkedTree, n: usize, algo: Algo) -> Result<BigInt> {
        match algo {
            Algo::Brute => count_brute(t, n, self.brute_cap),
            Algo::Cut | Algo::Auto => count_cut(t, n, &self.cache),
            Algo::AscentCut => count_ascent_cut(t, n, &self.cache),
            Algo::Shift => count_shift(t, n, &self.cache),
            Algo::Explicit => {
                check_n(t, n)?;
                Ok(poly_explicit(t).eval_int(n as i64).to_integer())
            }
        }
    }

    /// The descent polynomial. Value-based routes interpolate through
    /// `n = s..=s+h`.
    pub fn polynomial(&self, t: &MarkedTree, algo: Algo) -> Result<ExactPolynomial> {
        if algo == Algo::Explicit {
            return Ok(poly_explicit(t));
        }
        let s = t.size();
        let samples = (s..=s + t.degree())
            .map(|n| Ok((n as i64, self.count(t, n, algo)?)))
            .collect::<Result<Vec<_>>>()?;
        ExactPolynomial::interpolate(&samples)
    }
}

/// The descent polynomial with a fresh engine.
pub fn descent_polynomial(t: &MarkedTree, algo: Algo) -> Result<ExactPolynomial> {
    Engine::default().polynomial(t, algo)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = "a[a[a,a],d[d,a]]";
    const SEXTIC: &str = "d[d[d[a,a]],a]";

    fn t(s: &str) -> MarkedTree {
        s.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn brute_examples() {
        for n in 1..=6 {
            assert_eq!(count_brute(&t("a"), n, 10).unwrap(), BigInt::one());
        }
        assert_eq!(count_brute(&t("a[d]"), 5, 10).unwrap(), BigInt::from(4));
        assert_eq!(count_brute(&t("d"), 1, 10).unwrap(), BigInt::zero());
        assert!(matches!(count_brute(&t("a[d]"), 1, 10), Err(Error::SizeTooSmall { .. })));
        assert!(matches!(count_brute(&t("a[d]"), 11, 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn brute_against_plain_permutation_filter() {
        // every permutation of G("a[d,a]"; 5), filtered by descent set
        let tree = t("a[d,a]");
        let g = tree.extend(5).unwrap();
        let mut perm: Vec<usize> = (1..=5).collect();
        let mut count = 0;
        loop {
            let w = crate::tree::Labeling::new(perm.clone()).unwrap();
            if g.descent_set_of(&w).unwrap() == tree.descents() {
                count += 1;
            }
            // next lexicographic permutation
            let Some(i) = (0..4).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
            let j = (i + 1..5).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        assert_eq!(count_brute(&tree, 5, 10).unwrap(), BigInt::from(count));
    }

    #[test]
    fn cut_matches_brute_small() {
        let cache = MemoCache::new();
        for s in ["d[d,d]", "a[d,d]", "d[a,a]", "a[d[a],a]", CUBIC, SEXTIC] {
            let tree = t(s);
            for n in tree.size()..=tree.size() + 2 {
                assert_eq!(
                    count_cut(&tree, n, &cache).unwrap(),
                    count_brute(&tree, n, 10).unwrap(),
                    "{s} at {n}"
                );
            }
        }
        // all-descent 3-vertex tree: 2·C(n-1, 3), so 2 at n = 4
        assert_eq!(count_cut(&t("d[d,d]"), 4, &cache).unwrap(), BigInt::from(2));
        assert_eq!(count_cut(&t("a[d,d]"), 4, &cache).unwrap(), BigInt::from(6));
    }

    #[test]
    fn cut_base_case_is_natlab() {
        let tree = t("a[a[a,a],a]");
        for n in 5..9 {
            assert_eq!(count_cut(&tree, n, &MemoCache::new()).unwrap(), tree.natlab());
        }
    }

    #[test]
    fn ascent_cut_examples() {
        let cache = MemoCache::new();
        let tree = t("a[a,d]");
        assert_eq!(
            count_ascent_cut(&tree, 4, &cache).unwrap(),
            count_brute(&tree, 4, 10).unwrap()
        );
        assert_eq!(count_ascent_cut(&t("a"), 7, &cache).unwrap(), BigInt::one());
        for s in [CUBIC, SEXTIC, "d[a[d],a]"] {
            let tree = t(s);
            let n = tree.size() + 1;
            assert_eq!(
                count_ascent_cut(&tree, n, &cache).unwrap(),
                count_cut(&tree, n, &cache).unwrap()
            );
        }
    }

    #[test]
    fn explicit_examples() {
        assert_eq!(poly_explicit(&t("d")), ExactPolynomial::from_ints([-1, 1]));
        let tree = t("a[a,a[a]]");
        assert_eq!(poly_explicit(&tree), ExactPolynomial::constant(tree.natlab()));
        let cubic = ExactPolynomial::new(vec![rat(80, 1), rat(-58, 3), rat(-1, 1), rat(1, 3)]);
        assert_eq!(poly_explicit(&t(CUBIC)), cubic);
    }

    #[test]
    fn shift_examples() {
        let cache = MemoCache::new();
        for n in 2..8 {
            assert_eq!(
                count_shift(&t("a[d]"), n, &cache).unwrap(),
                BigInt::from(n as i64 - 1)
            );
        }
        let tree = t("d[a,a]");
        assert_eq!(shift_terms(&tree).len(), 4);
        for n in 3..7 {
            assert_eq!(
                count_shift(&tree, n, &cache).unwrap(),
                count_cut(&tree, n, &cache).unwrap()
            );
        }
        // single descent vertex: the empty tree contributes 1 each step
        assert_eq!(shift_terms(&t("d")), vec![None]);
        assert_eq!(count_shift(&t("d"), 5, &cache).unwrap(), BigInt::from(4));
    }

    #[test]
    fn shift_matches_brute() {
        let cache = MemoCache::new();
        for s in [SEXTIC, "d[a[a],d]", "a[d[a,a],d]", "d[d[a],a[d]]"] {
            let tree = t(s);
            for n in tree.size()..=tree.size() + 3 {
                assert_eq!(
                    count_shift(&tree, n, &cache).unwrap(),
                    count_brute(&tree, n, 10).unwrap(),
                    "{s} at {n}"
                );
            }
        }
    }

    #[test]
    fn sextic_polynomial() {
        let expected = ExactPolynomial::new(vec![
            rat(-10, 1),
            rat(-1, 2),
            rat(103, 36),
            rat(-49, 12),
            rat(19, 9),
            rat(-5, 12),
            rat(1, 36),
        ]);
        for algo in [Algo::Cut, Algo::AscentCut, Algo::Explicit, Algo::Shift, Algo::Auto] {
            assert_eq!(descent_polynomial(&t(SEXTIC), algo).unwrap(), expected, "{algo}");
        }
    }

    #[test]
    fn all_ascent_polynomial_is_constant() {
        let tree = t("a[a[a],a]");
        let p = descent_polynomial(&tree, Algo::Auto).unwrap();
        assert_eq!(p, ExactPolynomial::constant(tree.natlab()));
    }

    #[test]
    fn root_only_closed_form() {
        let tree = t("d[a,a]");
        let p = poly_root_only(&tree).unwrap();
        assert_eq!(p.eval_int(4), rat(6, 1));
        assert_eq!(count_brute(&tree, 4, 10).unwrap(), BigInt::from(6));
        assert_eq!(poly_root_only(&t("d")).unwrap(), ExactPolynomial::from_ints([-1, 1]));
        assert!(poly_root_only(&tree).unwrap().eval_int(3).is_zero());
        assert!(matches!(poly_root_only(&t("d[d]")), Err(Error::Precondition(_))));
    }

    #[test]
    fn cache_coherent() {
        let cached = MemoCache::new();
        let fresh = MemoCache::disabled();
        let tree = t(SEXTIC);
        for n in 6..9 {
            let a = count_cut(&tree, n, &cached).unwrap();
            let b = count_cut(&tree, n, &cached).unwrap();
            let c = count_cut(&tree, n, &fresh).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, c);
        }
        assert!(!cached.is_empty());
        assert!(fresh.is_empty());
    }

    #[test]
    fn algo_names() {
        for a in Algo::ALL {
            assert_eq!(a.to_string().parse::<Algo>().unwrap(), a);
        }
        assert_eq!("ascent-cut".parse::<Algo>().unwrap(), Algo::AscentCut);
    }
}
