//! Integer and complex roots of descent polynomials, and the root facts that
//! can be predicted from the shape of the tree alone.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::descent::{poly_root_only, Algo, Engine};
use crate::error::{Error, Result};
use crate::poly::ExactPolynomial;
use crate::tree::MarkedTree;

pub const DEFAULT_TOL: f64 = 1e-9;
/// Slack allowed on the modulus bound for numerically computed roots.
pub const BOUND_SLACK: f64 = 1e-6;
const MAX_ITERATIONS: usize = 500;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerRoot {
    pub value: i64,
    pub multiplicity: usize,
}

fn eval_int_coeffs(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, k| acc * x + k)
}

/// Divides `c` (ascending) by `(x - r)`; the remainder must be zero.
fn deflate(c: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); c.len() - 1];
    let mut carry = BigInt::zero();
    for i in (1..c.len()).rev() {
        carry = &c[i] + carry * r;
        out[i - 1] = carry.clone();
    }
    out
}

/// Upper bound on the modulus of every root (Fujiwara).
fn root_modulus_bound(c: &[f64]) -> f64 {
    let d = c.len() - 1;
    let lead = c[d].abs();
    let mut best: f64 = 0.0;
    for i in 1..=d {
        let mut r = (c[d - i].abs() / lead).powf(1.0 / i as f64);
        if i == d {
            r = (c[0].abs() / (2.0 * lead)).powf(1.0 / d as f64);
        }
        best = best.max(r);
    }
    2.0 * best
}

fn to_floats(c: &[BigInt]) -> Vec<f64> {
    c.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect()
}

/// All integer roots with multiplicity, sorted ascending.
pub fn integer_roots(p: &ExactPolynomial) -> Result<Vec<IntegerRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = p.primitive_integer();
    let mut roots = Vec::new();
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    if zeros > 0 {
        roots.push(IntegerRoot {
            value: 0,
            multiplicity: zeros,
        });
        c.drain(..zeros);
    }
    if c.len() > 1 {
        let bound = root_modulus_bound(&to_floats(&c)).ceil() as i64 + 1;
        let constant = c[0].abs();
        let limit = constant.to_i64().map_or(bound, |k| k.min(bound));
        for m in 1..=limit {
            if !constant.is_multiple_of(&BigInt::from(m)) {
                continue;
            }
            for r in [-m, m] {
                let rb = BigInt::from(r);
                let mut mult = 0;
                while c.len() > 1 && eval_int_coeffs(&c, &rb).is_zero() {
                    c = deflate(&c, &rb);
                    mult += 1;
                }
                if mult > 0 {
                    roots.push(IntegerRoot {
                        value: r,
                        multiplicity: mult,
                    });
                }
            }
        }
    }
    roots.sort_by_key(|r| r.value);
    debug_assert!(roots
        .iter()
        .all(|r| p.eval_int(r.value).is_zero()));
    Ok(roots)
}

/// Integer roots listed once each, ascending.
pub fn integer_root_values(p: &ExactPolynomial) -> Result<Vec<i64>> {
    Ok(integer_roots(p)?.into_iter().map(|r| r.value).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexRoots {
    #[serde(with = "complex_pairs")]
    pub roots: Vec<Complex64>,
    /// Largest `|p(z)| / Σ|c_k||z|^k` over the roots.
    pub max_residual: f64,
    pub converged: bool,
}

mod complex_pairs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<(f64, f64)>::deserialize(d)?;
        Ok(pairs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
    }
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &k in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + k;
    }
    (p, dp)
}

fn relative_residual(c: &[f64], z: Complex64) -> f64 {
    let scale: f64 = c
        .iter()
        .enumerate()
        .map(|(k, a)| a.abs() * z.norm().powi(k as i32))
        .sum();
    if scale == 0.0 {
        0.0
    } else {
        horner(c, z).0.norm() / scale
    }
}

/// All complex roots with multiplicity by Aberth iteration, then a Newton
/// polish. `converged` is false if some residual still exceeds `tol`.
pub fn complex_roots(p: &ExactPolynomial, tol: f64) -> Result<ComplexRoots> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    if degree == 0 {
        return Err(Error::Precondition("polynomial has degree 0".into()));
    }
    let c = to_floats(&p.primitive_integer());
    let radius = root_modulus_bound(&c).max(1.0);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / degree as f64))
        .collect();
    for _ in 0..MAX_ITERATIONS {
        let mut moved: f64 = 0.0;
        for i in 0..degree {
            let (pv, dpv) = horner(&c, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dpv;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zi in &mut z {
        for _ in 0..3 {
            let (pv, dpv) = horner(&c, *zi);
            let step = pv / dpv;
            if !step.is_finite() || relative_residual(&c, *zi - step) > relative_residual(&c, *zi) {
                break;
            }
            *zi -= step;
        }
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let max_residual = z
        .iter()
        .map(|&zi| relative_residual(&c, zi))
        .fold(0.0, f64::max);
    Ok(ComplexRoots {
        roots: z,
        max_residual,
        converged: max_residual <= tol,
    })
}

/// Facts about `d(T; n)` that follow from the shape and marks of `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootPredictions {
    pub size: usize,
    pub degree: usize,
    #[serde(with = "big_string")]
    pub d_at_zero: BigInt,
    pub s_is_root: bool,
    pub s_minus_1_is_root: bool,
    /// `s-1, ..., s-k` for `k` descent children of the root.
    pub guaranteed_roots: Vec<i64>,
    pub one_is_root: bool,
    /// Present when the root is the only descent.
    pub root_only: Option<RootOnlyFacts>,
    /// `1..=s` when every vertex is a descent.
    pub all_descent_roots: Option<Vec<i64>>,
    /// `Some(h)` when every root is predicted to satisfy `|z| <= h`.
    pub complex_bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootOnlyFacts {
    pub minus_one_is_root: bool,
    pub polynomial: ExactPolynomial,
}

mod big_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub fn predicted_root_facts(t: &MarkedTree) -> RootPredictions {
    let s = t.size();
    let root = t.root();
    let kids = t.children(root);
    let descent_kids = kids.iter().filter(|&&c| t.is_descent(c)).count();
    let sign = if t.descent_count() % 2 == 0 { 1 } else { -1 };
    let root_only = poly_root_only(t).ok().map(|polynomial| RootOnlyFacts {
        minus_one_is_root: s % 2 == 0,
        polynomial,
    });
    let all_descent = t.descent_count() == s;
    let bound_applies = t.is_descent(root) || kids.iter().all(|&c| t.is_descent(c));
    RootPredictions {
        size: s,
        degree: t.degree(),
        d_at_zero: t.natlab() * sign,
        s_is_root: t.is_descent(root),
        s_minus_1_is_root: descent_kids > 0,
        guaranteed_roots: (1..=descent_kids).map(|m| s as i64 - m as i64).collect(),
        one_is_root: t.leaves().iter().all(|&v| t.is_descent(v)),
        root_only,
        all_descent_roots: all_descent.then(|| (1..=s as i64).collect()),
        complex_bound: bound_applies.then(|| t.degree()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub fact: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub tree: String,
    pub polynomial: ExactPolynomial,
    pub integer_roots: Vec<IntegerRoot>,
    pub complex_roots: Option<ComplexRoots>,
    pub predictions: RootPredictions,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl RootReport {
    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }
}

fn vanishes(p: &ExactPolynomial, n: i64) -> bool {
    p.eval_int(n).is_zero()
}

fn biconditional(fact: &str, p: &ExactPolynomial, n: i64, predicted: bool) -> Verdict {
    let actual = vanishes(p, n);
    Verdict {
        fact: fact.to_string(),
        pass: actual == predicted,
        detail: format!("d({n}) = {}, predicted root: {predicted}", p.eval_int(n)),
    }
}

/// Computes `d(T; n)` and checks every applicable prediction against it.
pub fn verify_roots(t: &MarkedTree, engine: &Engine) -> Result<RootReport> {
    let p = engine.polynomial(t, Algo::Auto)?;
    Ok(verify_roots_of(t, p))
}

/// As [`verify_roots`], for an already computed polynomial.
pub fn verify_roots_of(t: &MarkedTree, p: ExactPolynomial) -> RootReport {
    let pred = predicted_root_facts(t);
    let s = pred.size as i64;
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();

    let at_zero = p.eval_int(0);
    verdicts.push(Verdict {
        fact: "value_at_zero".into(),
        pass: at_zero == BigRational::from_integer(pred.d_at_zero.clone()),
        detail: format!("d(0) = {at_zero}, predicted {}", pred.d_at_zero),
    });
    verdicts.push(biconditional("s_root_iff_root_descent", &p, s, pred.s_is_root));
    verdicts.push(biconditional(
        "s_minus_1_root_iff_descent_child",
        &p,
        s - 1,
        pred.s_minus_1_is_root,
    ));
    if !pred.guaranteed_roots.is_empty() {
        let missing: Vec<i64> = pred
            .guaranteed_roots
            .iter()
            .copied()
            .filter(|&r| !vanishes(&p, r))
            .collect();
        verdicts.push(Verdict {
            fact: "descent_children_roots".into(),
            pass: missing.is_empty(),
            detail: format!("expected roots {:?}, missing {missing:?}", pred.guaranteed_roots),
        });
    }
    verdicts.push(biconditional("one_root_iff_leaves_descent", &p, 1, pred.one_is_root));

    let integer = if p.is_zero() {
        Vec::new()
    } else {
        integer_roots(&p).expect("nonzero")
    };
    let too_big: Vec<i64> = integer.iter().map(|r| r.value).filter(|&r| r > s).collect();
    verdicts.push(Verdict {
        fact: "integer_roots_at_most_s".into(),
        pass: too_big.is_empty(),
        detail: format!("roots above {s}: {too_big:?}"),
    });
    let kids = pred.guaranteed_roots.len();
    for m in 1..=s {
        if m as usize > kids && vanishes(&p, s - m) {
            notes.push(format!(
                "s-{m} is a root with {kids} descent children at the root"
            ));
            break;
        }
    }

    if let Some(ro) = &pred.root_only {
        verdicts.push(Verdict {
            fact: "root_only_closed_form".into(),
            pass: p == ro.polynomial,
            detail: format!("expected {}", ro.polynomial),
        });
        verdicts.push(biconditional("minus_one_root_iff_s_even", &p, -1, ro.minus_one_is_root));
    }
    if let Some(expected) = &pred.all_descent_roots {
        let simple = integer.iter().all(|r| r.multiplicity == 1);
        let values: Vec<i64> = integer.iter().map(|r| r.value).collect();
        verdicts.push(Verdict {
            fact: "all_descent_roots".into(),
            pass: simple && &values == expected && p.degree() == Some(expected.len()),
            detail: format!("integer roots {values:?}"),
        });
    }

    let complex = if p.degree().unwrap_or(0) >= 1 {
        complex_roots(&p, DEFAULT_TOL).ok()
    } else {
        None
    };
    if let Some(cr) = &complex {
        let max_modulus = cr.roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let h = pred.degree as f64;
        match pred.complex_bound {
            Some(_) => verdicts.push(Verdict {
                fact: "complex_modulus_bound".into(),
                pass: max_modulus <= h + BOUND_SLACK,
                detail: format!("max |z| = {max_modulus:.9}, h = {}", pred.degree),
            }),
            None if max_modulus > h + BOUND_SLACK => notes.push(format!(
                "modulus bound not applicable; max |z| = {max_modulus:.6} exceeds h = {}",
                pred.degree
            )),
            None => {}
        }
        if !cr.converged {
            notes.push(format!(
                "complex roots did not converge, residual {:e}",
                cr.max_residual
            ));
        }
    }

    RootReport {
        tree: t.to_string(),
        polynomial: p,
        integer_roots: integer,
        complex_roots: complex,
        predictions: pred,
        verdicts,
        notes,
    }
}
