//! The poset attached to a marked tree, its linear extensions and height
//! polynomials.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansions::{classify, QualifyingClass};
use crate::poly::{Basis, BasisExpansion};
use crate::tree::MarkedTree;

pub const DEFAULT_EXTENSION_CAP: u128 = 10_000_000;

/// Largest poset handled; downsets are kept as `u64` masks.
pub const MAX_POSET_SIZE: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Poset {
    size: usize,
    /// Cover relations as `(lower, upper)`.
    covers: Vec<(usize, usize)>,
    #[serde(skip)]
    below: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightPolynomial {
    pub element: usize,
    #[serde(with = "big_strings")]
    pub counts: Vec<BigUint>,
}

impl HeightPolynomial {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

mod big_strings {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| x.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `P_T`: element `i` is vertex `i`; a descent child sits above its parent,
/// an ascent child below.
pub fn build_poset(t: &MarkedTree) -> Poset {
    let covers = t
        .vertices()
        .filter_map(|v| {
            let p = t.parent(v)?;
            Some(if t.is_descent(v) { (p, v) } else { (v, p) })
        })
        .collect();
    // tree edges are acyclic and irredundant
    Poset::from_covers(t.size(), covers).expect("tree posets are valid")
}

impl Poset {
    /// Builds a poset from cover pairs, rejecting cycles and redundant pairs.
    pub fn from_covers(size: usize, covers: Vec<(usize, usize)>) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyInput);
        }
        if size > MAX_POSET_SIZE {
            return Err(Error::CapExceeded {
                what: "poset size",
                value: size as u128,
                cap: MAX_POSET_SIZE as u128,
            });
        }
        let mut below = vec![0u64; size];
        for &(lo, hi) in &covers {
            for v in [lo, hi] {
                if v >= size {
                    return Err(Error::BadVertex { vertex: v, size });
                }
            }
            if lo == hi {
                return Err(Error::InvalidTree(format!("self cover at {lo}")));
            }
            below[hi] |= 1 << lo;
        }
        let p = Poset {
            size,
            covers,
            below,
        };
        let strict = p.strict_below()?;
        for &(lo, hi) in &p.covers {
            let via_other = p.below[hi] & !(1u64 << lo);
            let reach = (0..size)
                .filter(|&m| via_other >> m & 1 == 1)
                .fold(0u64, |acc, m| acc | strict[m]);
            if reach >> lo & 1 == 1 {
                return Err(Error::InvalidTree(format!("redundant cover ({lo}, {hi})")));
            }
        }
        Ok(p)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Strict down-closures; fails on a cycle.
    fn strict_below(&self) -> Result<Vec<u64>> {
        let mut order = Vec::with_capacity(self.size);
        let mut placed = 0u64;
        while order.len() < self.size {
            let next = (0..self.size)
                .find(|&v| placed >> v & 1 == 0 && self.below[v] & !placed == 0)
                .ok_or_else(|| Error::InvalidTree("cover relation has a cycle".into()))?;
            placed |= 1 << next;
            order.push(next);
        }
        let mut closure = vec![0u64; self.size];
        for &v in &order {
            let mut c = self.below[v];
            for m in 0..self.size {
                if self.below[v] >> m & 1 == 1 {
                    c |= closure[m];
                }
            }
            closure[v] = c;
        }
        Ok(closure)
    }

    pub fn less_than(&self, a: usize, b: usize) -> bool {
        self.strict_below().map(|c| c[b] >> a & 1 == 1).unwrap_or(false)
    }

    fn full(&self) -> u64 {
        if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        }
    }

    fn addable(&self, ideal: u64) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&v| ideal >> v & 1 == 0 && self.below[v] & !ideal == 0)
    }

    /// Number of ways to reach each downset from the empty one.
    fn forward(&self) -> HashMap<u64, BigUint> {
        let mut layer: HashMap<u64, BigUint> = HashMap::from([(0, BigUint::one())]);
        let mut all = layer.clone();
        for _ in 0..self.size {
            let mut next: HashMap<u64, BigUint> = HashMap::new();
            for (&ideal, ways) in &layer {
                for v in self.addable(ideal) {
                    *next.entry(ideal | 1 << v).or_default() += ways;
                }
            }
            all.extend(next.iter().map(|(k, w)| (*k, w.clone())));
            layer = next;
        }
        all
    }

    /// Number of ways to complete each downset to the whole poset.
    fn backward(&self, ideals: impl Iterator<Item = u64>) -> HashMap<u64, BigUint> {
        let mut ideals: Vec<u64> = ideals.collect();
        ideals.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
        let mut done: HashMap<u64, BigUint> = HashMap::with_capacity(ideals.len());
        for ideal in ideals {
            let ways = if ideal == self.full() {
                BigUint::one()
            } else {
                self.addable(ideal).map(|v| done[&(ideal | 1 << v)].clone()).sum()
            };
            done.insert(ideal, ways);
        }
        done
    }

    fn check_cap(count: &BigUint, cap: u128) -> Result<()> {
        match count.to_u128() {
            Some(c) if c <= cap => Ok(()),
            other => Err(Error::CapExceeded {
                what: "linear extensions",
                value: other.unwrap_or(u128::MAX),
                cap,
            }),
        }
    }

    pub fn linear_extension_count(&self, cap: u128) -> Result<BigUint> {
        let count = self.forward().remove(&self.full()).unwrap_or_default();
        Self::check_cap(&count, cap)?;
        Ok(count)
    }

    /// Every linear extension as its bottom-to-top element sequence.
    pub fn linear_extensions(&self, cap: u128) -> Result<LinearExtensions<'_>> {
        self.linear_extension_count(cap)?;
        Ok(LinearExtensions {
            poset: self,
            stack: vec![(0, 0)],
            prefix: Vec::with_capacity(self.size),
        })
    }

    /// `h_k` = number of linear extensions placing `v` at position `k + 1`.
    pub fn height_polynomial(&self, v: usize, cap: u128) -> Result<HeightPolynomial> {
        if v >= self.size {
            return Err(Error::BadVertex {
                vertex: v,
                size: self.size,
            });
        }
        let fwd = self.forward();
        let total = fwd.get(&self.full()).cloned().unwrap_or_default();
        Self::check_cap(&total, cap)?;
        let bwd = self.backward(fwd.keys().copied());
        let mut counts = vec![BigUint::zero(); self.size];
        for (&ideal, ways) in &fwd {
            if ideal >> v & 1 == 0 && self.below[v] & !ideal == 0 {
                counts[ideal.count_ones() as usize] += ways * &bwd[&(ideal | 1 << v)];
            }
        }
        Ok(HeightPolynomial { element: v, counts })
    }
}

/// Depth-first walk over linear extensions; see [`Poset::linear_extensions`].
pub struct LinearExtensions<'a> {
    poset: &'a Poset,
    /// `(ideal, next candidate)` per depth.
    stack: Vec<(u64, usize)>,
    prefix: Vec<usize>,
}

impl Iterator for LinearExtensions<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let p = self.poset;
        while let Some(&mut (ideal, ref mut cursor)) = self.stack.last_mut() {
            if ideal == p.full() {
                let out = self.prefix.clone();
                self.stack.pop();
                self.prefix.pop();
                return Some(out);
            }
            let found = (*cursor..p.size)
                .find(|&v| ideal >> v & 1 == 0 && p.below[v] & !ideal == 0);
            match found {
                Some(v) => {
                    *cursor = v + 1;
                    self.prefix.push(v);
                    self.stack.push((ideal | 1 << v, 0));
                }
                None => {
                    self.stack.pop();
                    self.prefix.pop();
                }
            }
        }
        None
    }
}

/// ā-expansion from the height polynomial of the root element:
/// `ā_{-1} = 0` and `ā_k = h_{h-1-k}`.
pub fn abar_via_heights(t: &MarkedTree, cap: u128) -> Result<BasisExpansion> {
    if classify(t).class != QualifyingClass::AscentRootAllDescentChildren {
        return Err(Error::NotQualifying(t.to_string()));
    }
    let h = t.degree();
    let heights = build_poset(t).height_polynomial(t.root(), cap)?;
    let mut coeffs = vec![BigInt::zero()];
    coeffs.extend((0..h).map(|k| BigInt::from(heights.counts[h - 1 - k].clone())));
    Ok(BasisExpansion {
        basis: Basis::ABar,
        coeffs,
        degree_param: h,
    })
}
