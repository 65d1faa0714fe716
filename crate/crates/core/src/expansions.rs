//! Binomial-basis expansions of descent polynomials and the combinatorial
//! description of the a-coefficients for the two qualifying tree classes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::descent::{for_each_labeling, Engine};
use crate::error::{Error, Result};
use crate::poly::{to_basis, Basis, BasisExpansion, ExactPolynomial};
use crate::tree::MarkedTree;

/// Largest degree the a-coefficient oracle will enumerate.
pub const ORACLE_MAX_DEGREE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QualifyingClass {
    /// Root is an ascent with at least one child, and every child is a descent.
    AscentRootAllDescentChildren,
    /// Root is a descent.
    DescentRoot,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: QualifyingClass,
    /// Degree parameter of the expansions: `s - 1` for the first class, `s`
    /// for the second.
    pub anchor: usize,
}

impl Classification {
    pub fn qualifies(&self) -> bool {
        self.class != QualifyingClass::Other
    }
}

pub fn classify(t: &MarkedTree) -> Classification {
    let root = t.root();
    let kids = t.children(root);
    let class = if t.is_descent(root) {
        QualifyingClass::DescentRoot
    } else if !kids.is_empty() && kids.iter().all(|&c| t.is_descent(c)) {
        QualifyingClass::AscentRootAllDescentChildren
    } else {
        QualifyingClass::Other
    };
    Classification {
        class,
        anchor: t.degree(),
    }
}

/// Expands the descent polynomial of `t` in `basis`, anchored at its degree.
pub fn expand(t: &MarkedTree, basis: Basis, engine: &Engine) -> Result<BasisExpansion> {
    let p = engine.polynomial(t, crate::Algo::Auto)?;
    to_basis(&p, basis, t.degree())
}

/// The tree on which the a-coefficient description is stated: `t` itself for
/// the first class, `t` under a new ascent root for the second.
fn oracle_tree(t: &MarkedTree) -> Result<MarkedTree> {
    match classify(t).class {
        QualifyingClass::AscentRootAllDescentChildren => Ok(t.clone()),
        QualifyingClass::DescentRoot => Ok(t.add_ascent_root()),
        QualifyingClass::Other => Err(Error::NotQualifying(t.to_string())),
    }
}

/// `a_k` by counting labelings `w` of `G(T'; 2h)` with descent set `S` whose
/// labels on the non-root vertices of `T'` meet `[h+1, 2h]` in exactly
/// `[h+1, h+k]`.
pub fn a_coeff_oracle(t: &MarkedTree, k: usize) -> Result<BigInt> {
    let lifted = oracle_tree(t)?;
    let h = lifted.degree();
    if h > ORACLE_MAX_DEGREE {
        return Err(Error::CapExceeded {
            what: "oracle degree",
            value: h as u128,
            cap: ORACLE_MAX_DEGREE as u128,
        });
    }
    if k > h {
        return Ok(BigInt::zero());
    }
    let g = lifted.extend(2 * h)?;
    let inner: Vec<usize> = lifted
        .vertices()
        .filter(|&v| v != lifted.root())
        .collect();
    let mut count = 0u64;
    for_each_labeling(&g, |labels| {
        let upper: Vec<usize> = inner
            .iter()
            .map(|&v| labels[v])
            .filter(|&l| l > h)
            .collect();
        if upper.len() == k && upper.iter().all(|&l| l <= h + k) {
            count += 1;
        }
    });
    Ok(count.into())
}

/// `a(x) = Σ a_k x^k` from an A-expansion.
pub fn a_generating(e: &BasisExpansion) -> ExactPolynomial {
    ExactPolynomial::from_ints(e.coeffs.iter().cloned())
}

/// `ā(x) = Σ_{k>=0} ā_k x^k` from an ABAR-expansion; `ā_{-1}` is left out.
pub fn abar_generating(e: &BasisExpansion) -> ExactPolynomial {
    ExactPolynomial::from_ints(e.coeffs.iter().skip(1).cloned())
}

/// Checks `a(x) = x · ā(x + 1)` for the two expansions of `d(T; n)`.
/// Trees without descents (degree 0) pass vacuously.
pub fn check_shift_identity(t: &MarkedTree, engine: &Engine) -> Result<bool> {
    if t.degree() == 0 {
        return Ok(true);
    }
    let a = a_generating(&expand(t, Basis::A, engine)?);
    let abar = abar_generating(&expand(t, Basis::ABar, engine)?);
    let rhs = &ExactPolynomial::x() * &abar.shift(1);
    Ok(a == rhs)
}

/// True when the c-basis coefficients are all integers.
pub fn c_integrality(t: &MarkedTree, engine: &Engine) -> Result<bool> {
    match expand(t, Basis::C(1), engine) {
        Ok(_) => Ok(true),
        Err(Error::NonInteger { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Rational-valued check that an expansion reproduces `p` at the sample
/// points `0..=h+1`; used by reports as a cheap sanity test.
pub fn expansion_matches(e: &BasisExpansion, p: &ExactPolynomial) -> bool {
    (0..=e.degree_param as i64 + 1).all(|n| {
        let value: BigInt = e
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * e.basis.element_at(e.degree_param, j, n))
            .sum();
        BigRational::from_integer(value) == p.eval_int(n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::seq_predicates;

    const NEG_A0: &str = "a[d[d,a],d[a,a],a[a[d],a]]";
    const NON_ALT: &str = "d[a[d,d],d[d,d]]";

    fn t(s: &str) -> MarkedTree {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&t("a[d,d]")).class,
            QualifyingClass::AscentRootAllDescentChildren
        );
        assert_eq!(classify(&t("a[d,d]")).anchor, 2);
        assert_eq!(classify(&t("d[a,a]")).class, QualifyingClass::DescentRoot);
        assert_eq!(classify(&t("d[a,a]")).anchor, 3);
        assert_eq!(classify(&t(NEG_A0)).class, QualifyingClass::Other);
        assert_eq!(classify(&t("a")).class, QualifyingClass::Other);
    }

    #[test]
    fn negative_a_coefficients() {
        let engine = Engine::default();
        let tree = t(NEG_A0);
        let e = expand(&tree, Basis::A, &engine).unwrap();
        assert_eq!(
            e.coeffs,
            ints(&[-3150, 3150, -3150, 3150, 12160, 10120, 3800, 560])
        );
        assert!(!seq_predicates(&e.coeffs).nonnegative);
        let p = engine.polynomial(&tree, crate::Algo::Cut).unwrap();
        let nk = expand(&tree, Basis::NK, &engine).unwrap();
        assert_eq!(crate::poly::from_basis(&nk), p);
    }

    #[test]
    fn c_coefficients_not_alternating() {
        let engine = Engine::default();
        let tree = t(NON_ALT);
        let e = expand(&tree, Basis::C(1), &engine).unwrap();
        assert_eq!(e.coeffs, ints(&[360, -280, 200, -120, 44, 20, -60, 60]));
        assert!(!seq_predicates(&e.coeffs).alternating);
        assert!(c_integrality(&tree, &engine).unwrap());
    }

    #[test]
    fn small_expansions() {
        let engine = Engine::default();
        let tree = t("a[d,d]");
        assert_eq!(expand(&tree, Basis::A, &engine).unwrap().coeffs, ints(&[0, 2, 2]));
        assert_eq!(expand(&tree, Basis::ABar, &engine).unwrap().coeffs, ints(&[0, 0, 2]));
        assert_eq!(expand(&tree, Basis::C(1), &engine).unwrap().coeffs, ints(&[6, -4, 2]));
        let p = engine.polynomial(&tree, crate::Algo::Auto).unwrap();
        assert_eq!(p, ExactPolynomial::from_ints([2, -3, 1]));
        assert!(expansion_matches(&expand(&tree, Basis::NK, &engine).unwrap(), &p));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(a_coeff_oracle(&t("a[d,d]"), 0).unwrap(), BigInt::zero());
        assert_eq!(a_coeff_oracle(&t("a[d,d]"), 1).unwrap(), BigInt::from(2));
        assert_eq!(a_coeff_oracle(&t("a[d,d]"), 2).unwrap(), BigInt::from(2));
        assert_eq!(a_coeff_oracle(&t("a[d]"), 1).unwrap(), BigInt::from(1));
        assert!(matches!(a_coeff_oracle(&t("a[a]"), 1), Err(Error::NotQualifying(_))));
        assert!(matches!(
            a_coeff_oracle(&t("a[d,d,d,d,d,d]"), 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn oracle_matches_expansion_for_descent_root() {
        let engine = Engine::default();
        for s in ["d", "d[a]", "d[a,a]", "d[d[a]]", "d[a[d]]"] {
            let tree = t(s);
            let e = expand(&tree, Basis::A, &engine).unwrap();
            for (k, c) in e.coeffs.iter().enumerate() {
                assert_eq!(&a_coeff_oracle(&tree, k).unwrap(), c, "{s} k={k}");
            }
        }
    }

    #[test]
    fn shift_identity() {
        let engine = Engine::default();
        assert!(check_shift_identity(&t("a[d,d]"), &engine).unwrap());
        assert!(check_shift_identity(&t("d[a[d],a]"), &engine).unwrap());
        assert!(check_shift_identity(&t("a[a,a]"), &engine).unwrap());
    }

    #[test]
    fn c_integrality_all_descent() {
        let engine = Engine::default();
        let tree = t("d[d,d]");
        assert!(c_integrality(&tree, &engine).unwrap());
        // 2·C(n-1, 3); solved by hand at n = -1, 0, 1, 2
        let e = expand(&tree, Basis::C(1), &engine).unwrap();
        assert_eq!(e.coeffs, ints(&[-8, 6, -4, 2]));
    }
}
