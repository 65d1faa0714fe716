//! Exact univariate polynomials over the rationals and binomial-basis
//! expansions of integer-valued polynomials.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{binomial, factorial};
use crate::error::{Error, Result};

/// Polynomial in `n` with exact rational coefficients, `coeffs[k]` being the
/// coefficient of `n^k`. Trailing zeros are trimmed, so the zero polynomial
/// has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactPolynomial {
    coeffs: Vec<BigRational>,
}

impl ExactPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigRational>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The monomial `n`.
    pub fn x() -> Self {
        Self::from_ints([0, 1])
    }

    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ExactPolynomial { coeffs }
    }

    pub fn from_ints<I>(coeffs: impl IntoIterator<Item = I>) -> Self
    where
        BigInt: From<I>,
    {
        Self::new(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&BigRational::from_integer(x.into()))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `p(n + shift)`.
    pub fn shift(&self, shift: i64) -> Self {
        let step = Self::from_ints([shift, 1]);
        let mut out = Self::zero();
        for c in self.coeffs.iter().rev() {
            out = &(&out * &step) + &Self::constant(c.clone());
        }
        out
    }

    /// Product `(n + offset)(n + offset - 1) ... (n + offset - k + 1) / k!`,
    /// i.e. `C(n + offset, k)` as a polynomial in `n`.
    pub fn binomial_in_n(offset: i64, k: usize) -> Self {
        let mut out = Self::constant(BigInt::one());
        for i in 0..k {
            out = &out * &Self::from_ints([offset - i as i64, 1]);
        }
        out.scale(&BigRational::new(BigInt::one(), factorial(k)))
    }

    /// The unique polynomial of degree below `samples.len()` through every
    /// sample, by Newton divided differences.
    pub fn interpolate(samples: &[(i64, BigInt)]) -> Result<Self> {
        let mut seen = HashSet::new();
        for &(x, _) in samples {
            if !seen.insert(x) {
                return Err(Error::DuplicateSample(x));
            }
        }
        let xs: Vec<BigRational> = samples
            .iter()
            .map(|(x, _)| BigRational::from_integer((*x).into()))
            .collect();
        let mut diffs: Vec<BigRational> = samples
            .iter()
            .map(|(_, y)| BigRational::from_integer(y.clone()))
            .collect();
        let m = samples.len();
        for level in 1..m {
            for i in (level..m).rev() {
                diffs[i] = (&diffs[i] - &diffs[i - 1]) / (&xs[i] - &xs[i - level]);
            }
        }
        // Horner over the Newton basis
        let mut out = Self::zero();
        for i in (0..m).rev() {
            let factor = Self::new(vec![-xs[i].clone(), BigRational::one()]);
            out = &(&out * &factor) + &Self::constant(diffs[i].clone());
        }
        Ok(out)
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// Primitive integer polynomial with the same roots and a positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        use num_integer::Integer;
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() {
            for c in &mut ints {
                *c /= &g;
            }
        }
        if ints.last().is_some_and(Signed::is_negative) {
            for c in &mut ints {
                *c = -&*c;
            }
        }
        ints
    }

    /// Coefficients as `[numerator, denominator]` decimal string pairs,
    /// ascending powers.
    pub fn to_pairs(&self) -> Vec<[String; 2]> {
        self.coeffs
            .iter()
            .map(|c| [c.numer().to_string(), c.denom().to_string()])
            .collect()
    }

    pub fn from_pairs(pairs: &[[String; 2]]) -> Result<Self> {
        let parse = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|e| Error::Precondition(format!("bad integer {s:?}: {e}")))
        };
        let coeffs = pairs
            .iter()
            .map(|[n, d]| {
                let d = parse(d)?;
                if d.is_zero() {
                    return Err(Error::Precondition("zero denominator".into()));
                }
                Ok(BigRational::new(parse(n)?, d))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_pairs()).expect("string pairs serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let pairs: Vec<[String; 2]> = serde_json::from_str(text)?;
        Self::from_pairs(&pairs)
    }
}

impl Serialize for ExactPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[String; 2]>::deserialize(d)?;
        Self::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

impl Add for &ExactPolynomial {
    type Output = ExactPolynomial;

    fn add(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        ExactPolynomial::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }
}

impl Neg for &ExactPolynomial {
    type Output = ExactPolynomial;

    fn neg(self) -> ExactPolynomial {
        ExactPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &ExactPolynomial {
    type Output = ExactPolynomial;

    fn sub(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &ExactPolynomial {
    type Output = ExactPolynomial;

    fn mul(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ExactPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ExactPolynomial::new(out)
    }
}

/// Renders descending powers as `1/3·n^3 − n^2 − 58/3·n + 80`.
impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "−" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("−")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            let unit = abs.is_one() && k > 0;
            if !unit {
                if abs.is_integer() {
                    write!(f, "{}", abs.numer())?;
                } else {
                    write!(f, "{}/{}", abs.numer(), abs.denom())?;
                }
                if k > 0 {
                    f.write_str("·")?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str("n")?,
                _ => write!(f, "n^{k}")?,
            }
        }
        Ok(())
    }
}

/// Binomial bases for polynomials of degree at most an anchor `h`. Each has
/// `h + 1` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `C(n-h, k)` for `k = 0..=h`.
    A,
    /// `C(n-h-1, 0)` followed by `C(n-h+k, k+1)` for `k = 0..h`.
    ABar,
    /// `C(n + offset, k)` for `k = 0..=h`; offset 1 is the usual c-basis.
    C(i64),
    /// `C(n-k, k)` for `k = 0..=h`.
    NK,
}

impl Basis {
    /// Value of the `index`-th element of the basis anchored at `anchor`.
    pub fn element_at(self, anchor: usize, index: usize, n: i64) -> BigInt {
        let h = anchor as i64;
        match self {
            Basis::A => binomial(n - h, index),
            Basis::ABar if index == 0 => BigInt::one(),
            Basis::ABar => binomial(n - h + index as i64 - 1, index),
            Basis::C(offset) => binomial(n + offset, index),
            Basis::NK => binomial(n - index as i64, index),
        }
    }

    /// The `index`-th element as a polynomial in `n`.
    pub fn element_poly(self, anchor: usize, index: usize) -> ExactPolynomial {
        let h = anchor as i64;
        match self {
            Basis::A => ExactPolynomial::binomial_in_n(-h, index),
            Basis::ABar if index == 0 => ExactPolynomial::constant(BigInt::one()),
            Basis::ABar => ExactPolynomial::binomial_in_n(index as i64 - 1 - h, index),
            Basis::C(offset) => ExactPolynomial::binomial_in_n(offset, index),
            Basis::NK => ExactPolynomial::binomial_in_n(-(index as i64), index),
        }
    }

    /// Evaluation points used for conversion.
    fn sample_points(self, anchor: usize) -> Vec<i64> {
        let h = anchor as i64;
        match self {
            Basis::A | Basis::ABar | Basis::NK => (h..=2 * h).collect(),
            // makes the system triangular: C(j, k) for j = 0..=h
            Basis::C(offset) => (-offset..=h - offset).collect(),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::A => f.write_str("a"),
            Basis::ABar => f.write_str("abar"),
            Basis::C(1) => f.write_str("c"),
            Basis::C(offset) => write!(f, "c:{offset}"),
            Basis::NK => f.write_str("nk"),
        }
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Basis::A),
            "abar" => Ok(Basis::ABar),
            "c" => Ok(Basis::C(1)),
            "nk" => Ok(Basis::NK),
            _ => s
                .strip_prefix("c:")
                .and_then(|o| o.parse().ok())
                .map(Basis::C)
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "unknown basis {s:?} (expected a, abar, c, c:<offset> or nk)"
                    ))
                }),
        }
    }
}

impl Serialize for Basis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Basis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer coefficients of a polynomial in one binomial basis.
///
/// For [`Basis::ABar`] the vector is `[ā_{-1}, ā_0, …, ā_{h-1}]`; for the
/// others `coeffs[k]` multiplies the `k`-th element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisExpansion {
    pub basis: Basis,
    #[serde(with = "bigint_strings")]
    pub coeffs: Vec<BigInt>,
    pub degree_param: usize,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|b| b.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Expands `p` in `basis` anchored at `anchor` by evaluating at `anchor + 1`
/// points and solving the resulting linear system exactly.
pub fn to_basis(p: &ExactPolynomial, basis: Basis, anchor: usize) -> Result<BasisExpansion> {
    let degree = p.degree().unwrap_or(0);
    if degree > anchor {
        return Err(Error::DegreeTooLarge { degree, anchor });
    }
    let points = basis.sample_points(anchor);
    let size = anchor + 1;
    let mut rows: Vec<Vec<BigRational>> = points
        .iter()
        .map(|&x| {
            let mut row: Vec<BigRational> = (0..size)
                .map(|j| BigRational::from_integer(basis.element_at(anchor, j, x)))
                .collect();
            row.push(p.eval_int(x));
            row
        })
        .collect();
    let solution = solve(&mut rows);
    let coeffs = solution
        .into_iter()
        .enumerate()
        .map(|(index, c)| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::NonInteger {
                    index,
                    value: c.to_string(),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BasisExpansion {
        basis,
        coeffs,
        degree_param: anchor,
    })
}

/// Gauss-Jordan elimination on an augmented square system with a unique
/// solution.
fn solve(rows: &mut [Vec<BigRational>]) -> Vec<BigRational> {
    let size = rows.len();
    for col in 0..size {
        let pivot = (col..size)
            .find(|&r| !rows[r][col].is_zero())
            .expect("basis evaluation matrix is nonsingular");
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
    }
    rows.iter().map(|r| r[size].clone()).collect()
}

/// Sums the basis polynomials weighted by the expansion's coefficients.
pub fn from_basis(e: &BasisExpansion) -> ExactPolynomial {
    e.coeffs
        .iter()
        .enumerate()
        .fold(ExactPolynomial::zero(), |acc, (j, c)| {
            let term = e
                .basis
                .element_poly(e.degree_param, j)
                .scale(&BigRational::from_integer(c.clone()));
            &acc + &term
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqPredicates {
    pub nonnegative: bool,
    /// Weakly increasing.
    pub increasing: bool,
    pub log_concave: bool,
    pub alternating: bool,
}

/// Sign and shape tests on a coefficient sequence.
///
/// Log-concavity requires `c_k^2 >= c_{k-1} c_{k+1}` for every interior `k`
/// and no zero strictly between two nonzero entries. Alternation compares
/// consecutive nonzero entries only.
pub fn seq_predicates(coeffs: &[BigInt]) -> SeqPredicates {
    let nonnegative = coeffs.iter().all(|c| !c.is_negative());
    let increasing = coeffs.windows(2).all(|w| w[0] <= w[1]);
    let squares = coeffs
        .windows(3)
        .all(|w| &w[1] * &w[1] >= &w[0] * &w[2]);
    let nonzero: Vec<usize> = (0..coeffs.len()).filter(|&i| !coeffs[i].is_zero()).collect();
    let no_internal_zeros = match (nonzero.first(), nonzero.last()) {
        (Some(&lo), Some(&hi)) => hi - lo + 1 == nonzero.len(),
        _ => true,
    };
    let alternating = nonzero
        .windows(2)
        .all(|w| coeffs[w[0]].signum() != coeffs[w[1]].signum());
    SeqPredicates {
        nonnegative,
        increasing,
        log_concave: squares && no_internal_zeros,
        alternating,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// (n-1)(n-2)
    fn quad() -> ExactPolynomial {
        ExactPolynomial::from_ints([2, -3, 1])
    }

    #[test]
    fn interpolate_trivial() {
        let p = ExactPolynomial::interpolate(&[(0, 1.into()), (1, 1.into())]).unwrap();
        assert_eq!(p, ExactPolynomial::constant(BigInt::one()));
        let sq: Vec<_> = (0..3).map(|k| (k, BigInt::from(k * k))).collect();
        assert_eq!(
            ExactPolynomial::interpolate(&sq).unwrap(),
            ExactPolynomial::from_ints([0, 0, 1])
        );
        assert!(matches!(
            ExactPolynomial::interpolate(&[(2, 1.into()), (2, 3.into())]),
            Err(Error::DuplicateSample(2))
        ));
        assert!(ExactPolynomial::interpolate(&[]).unwrap().is_zero());
    }

    #[test]
    fn interpolate_cubic_with_fractions() {
        // (1/3)n^3 - n^2 - (58/3)n + 80 sampled at 7..=10
        let p = ExactPolynomial::new(vec![rat(80, 1), rat(-58, 3), rat(-1, 1), rat(1, 3)]);
        let samples: Vec<_> = (7..=10).map(|x| (x, p.eval_int(x).to_integer())).collect();
        assert_eq!(samples[0].1, BigInt::from(10));
        assert_eq!(ExactPolynomial::interpolate(&samples).unwrap(), p);
    }

    #[test]
    fn eval_constant_term_and_shift() {
        let p = quad();
        assert_eq!(p.eval_int(0), rat(2, 1));
        assert_eq!(p.eval(&rat(1, 2)), rat(3, 4));
        assert_eq!(p.shift(1), ExactPolynomial::from_ints([0, -1, 1]));
    }

    #[test]
    fn render() {
        let p = ExactPolynomial::new(vec![rat(80, 1), rat(-58, 3), rat(-1, 1), rat(1, 3)]);
        assert_eq!(p.to_string(), "1/3·n^3 − n^2 − 58/3·n + 80");
        assert_eq!(ExactPolynomial::zero().to_string(), "0");
        assert_eq!(ExactPolynomial::from_ints([-1, 1]).to_string(), "n − 1");
        assert_eq!(ExactPolynomial::from_ints([0, -2]).to_string(), "−2·n");
    }

    #[test]
    fn json_round_trip() {
        let p = ExactPolynomial::new(vec![rat(80, 1), rat(-58, 3), rat(-1, 1), rat(1, 3)]);
        let json = p.to_json();
        assert_eq!(json, r#"[["80","1"],["-58","3"],["-1","1"],["1","3"]]"#);
        assert_eq!(ExactPolynomial::from_json(&json).unwrap(), p);
    }

    #[test]
    fn a_basis_of_quadratic() {
        // hand solve: d(2)=0 -> a0=0; d(3)=2 -> a1=2; d(4)=6 -> a2=2
        let e = to_basis(&quad(), Basis::A, 2).unwrap();
        assert_eq!(e.coeffs, ints(&[0, 2, 2]));
    }

    #[test]
    fn abar_basis_of_quadratic() {
        // at n=2 only the constant element is nonzero -> 0; n=3: ā0 + ā1 = 2;
        // n=4: 2ā0 + 3ā1 = 6
        let e = to_basis(&quad(), Basis::ABar, 2).unwrap();
        assert_eq!(e.coeffs, ints(&[0, 0, 2]));
    }

    #[test]
    fn c_basis_of_quadratic() {
        // n=-1: c0 = 6; n=0: c0 + c1 = 2; n=1: c0 + 2c1 + c2 = 0
        let e = to_basis(&quad(), Basis::C(1), 2).unwrap();
        assert_eq!(e.coeffs, ints(&[6, -4, 2]));
    }

    #[test]
    fn from_basis_examples() {
        let e = BasisExpansion {
            basis: Basis::A,
            coeffs: ints(&[0, 1]),
            degree_param: 1,
        };
        assert_eq!(from_basis(&e), ExactPolynomial::from_ints([-1, 1]));
    }

    #[test]
    fn degree_too_large_and_non_integer() {
        assert!(matches!(
            to_basis(&quad(), Basis::A, 1),
            Err(Error::DegreeTooLarge { degree: 2, anchor: 1 })
        ));
        let half = ExactPolynomial::new(vec![rat(1, 2)]);
        assert!(matches!(
            to_basis(&half, Basis::C(1), 0),
            Err(Error::NonInteger { index: 0, .. })
        ));
    }

    #[test]
    fn basis_names() {
        for b in [Basis::A, Basis::ABar, Basis::C(1), Basis::C(-1), Basis::NK] {
            assert_eq!(b.to_string().parse::<Basis>().unwrap(), b);
        }
        assert_eq!(Basis::C(-1).to_string(), "c:-1");
        assert!("q".parse::<Basis>().is_err());
    }

    #[test]
    fn element_value_matches_polynomial() {
        for basis in [Basis::A, Basis::ABar, Basis::C(1), Basis::C(-1), Basis::NK] {
            for j in 0..=5 {
                let p = basis.element_poly(5, j);
                for n in -4..12 {
                    assert_eq!(
                        p.eval_int(n),
                        BigRational::from_integer(basis.element_at(5, j, n)),
                        "{basis} element {j} at {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn predicates() {
        let p = seq_predicates(&ints(&[2, 2]));
        assert!(p.nonnegative && p.log_concave && p.increasing);
        let p = seq_predicates(&ints(&[560, 3800, 10120, 12160, 3150, -3150, -3150, -3150]));
        assert!(!p.nonnegative);
        let p = seq_predicates(&ints(&[60, -60, 20, 44, -120, 200, -280, 360]));
        assert!(!p.alternating);
        assert!(seq_predicates(&ints(&[1, -2, 3, 0, -1])).alternating);
        assert!(!seq_predicates(&ints(&[1, 0, 1])).log_concave);
        assert!(seq_predicates(&ints(&[0, 0, 1, 2, 1])).log_concave);
        assert!(!seq_predicates(&ints(&[1, 3, 1, 3])).log_concave);
        assert!(seq_predicates(&ints(&[7])).log_concave);
        assert!(seq_predicates(&[]).log_concave);
    }
}
