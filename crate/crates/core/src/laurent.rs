//! Laurent polynomials in `n` variables with arbitrary-precision integer
//! coefficients.
//!
//! Cluster variables are stored as Laurent polynomials in the initial
//! cluster `x1..xn`. The term map is kept canonical at all times: no zero
//! coefficients are ever stored, so structural equality is ring equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exponent vector of a Laurent monomial; negative entries are allowed.
pub type Exponents = Vec<i32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("no Laurent polynomial quotient exists")]
    NonExactDivision,
    #[error("variable count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], BigInt::one())
    }

    /// The variable `x_{index+1}` (zero-based index).
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index {index} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn monomial(exponents: Exponents, coeff: BigInt) -> Self {
        let nvars = exponents.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponents, coeff);
        }
        LaurentPolynomial { nvars, terms }
    }

    /// Builds a polynomial from possibly repeated or zero terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigInt)>,
    {
        let mut out = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector has wrong length");
            out.add_term(e, c);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[i32]) -> Option<&BigInt> {
        self.terms.get(exponents)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// True when every coefficient is strictly positive.
    pub fn has_positive_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(
            self.nvars, other.nvars,
            "Laurent polynomials over different variable counts"
        );
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPolynomial { nvars: self.nvars, terms }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Componentwise minimum of the exponent vectors (the largest monomial
    /// dividing every term in the polynomial ring sense).
    fn min_exponents(&self) -> Exponents {
        let mut min = vec![i32::MAX; self.nvars];
        for e in self.terms.keys() {
            for (m, x) in min.iter_mut().zip(e) {
                *m = (*m).min(*x);
            }
        }
        min
    }

    /// Exact quotient `self / divisor` in the Laurent ring.
    ///
    /// The largest monomial factor is cleared from both sides, which turns
    /// the problem into exact division of ordinary polynomials neither of
    /// which is divisible by a variable; that quotient is then found by
    /// long division under graded-lexicographic order.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, LaurentError> {
        if self.nvars != divisor.nvars {
            return Err(LaurentError::ArityMismatch(self.nvars, divisor.nvars));
        }
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        if divisor.is_monomial() {
            let (de, dc) = divisor.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return Err(LaurentError::NonExactDivision);
                }
                terms.insert(e.iter().zip(de).map(|(a, b)| a - b).collect(), q);
            }
            return Ok(LaurentPolynomial { nvars: self.nvars, terms });
        }

        let a_shift = self.min_exponents();
        let b_shift = divisor.min_exponents();
        let neg = |v: &[i32]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let a0 = self.shift(&neg(&a_shift));
        let b0 = divisor.shift(&neg(&b_shift));

        let mut rem: BTreeMap<Grlex, BigInt> =
            a0.terms.into_iter().map(|(e, c)| (Grlex(e), c)).collect();
        let divisor_terms: Vec<(Exponents, BigInt)> = b0.terms.into_iter().collect();
        let (lead_e, lead_c) = divisor_terms
            .iter()
            .max_by(|x, y| grlex_cmp(&x.0, &y.0))
            .cloned()
            .unwrap();

        let mut quotient = Self::zero(self.nvars);
        while let Some((Grlex(re), rc)) = rem.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
            if re.iter().zip(&lead_e).any(|(r, l)| r < l) {
                return Err(LaurentError::NonExactDivision);
            }
            let (qc, r) = rc.div_rem(&lead_c);
            if !r.is_zero() {
                return Err(LaurentError::NonExactDivision);
            }
            let qe: Exponents = re.iter().zip(&lead_e).map(|(r, l)| r - l).collect();
            for (de, dc) in &divisor_terms {
                let e: Exponents = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                let delta = -(dc * &qc);
                let key = Grlex(e);
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quotient.add_term(qe, qc);
        }

        let offset: Exponents = a_shift.iter().zip(&b_shift).map(|(a, b)| a - b).collect();
        Ok(quotient.shift(&offset))
    }

    /// Canonical text form: terms in lexicographic exponent order, each as
    /// `coeff@e1,e2,...`, separated by `;`. Injective on polynomials with a
    /// fixed variable count.
    pub fn canonical_string(&self) -> String {
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            s.push_str(&c.to_string());
            s.push('@');
            for (j, x) in e.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(&x.to_string());
            }
        }
        s
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (j, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{}", j + 1)),
                    _ => factors.push(format!("x{}^{}", j + 1, k)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Grlex(Exponents);

fn grlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&x| x as i64).sum();
    let db: i64 = b.iter().map(|&x| x as i64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Ord for Grlex {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Grlex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.check_arity(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.check_arity(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    // exponents add when monomials multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.check_arity(rhs);
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// One term as it appears in JSON: `{"c": <coefficient>, "e": [exponents]}`.
/// Coefficients that fit in an `i64` are plain JSON numbers, larger ones are
/// decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: CoeffJson,
    pub e: Exponents,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Small(i64),
    Big(String),
}

impl LaurentPolynomial {
    pub fn to_term_list(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let c = match i64::try_from(c) {
                    Ok(v) => CoeffJson::Small(v),
                    Err(_) => CoeffJson::Big(c.to_string()),
                };
                TermJson { c, e: e.clone() }
            })
            .collect()
    }

    pub fn from_term_list(nvars: usize, terms: &[TermJson]) -> Result<Self, String> {
        let mut out = Self::zero(nvars);
        for t in terms {
            if t.e.len() != nvars {
                return Err(format!(
                    "term exponent vector has length {}, expected {nvars}",
                    t.e.len()
                ));
            }
            let c = match &t.c {
                CoeffJson::Small(v) => BigInt::from(*v),
                CoeffJson::Big(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| format!("bad coefficient {s:?}: {e}"))?,
            };
            out.add_term(t.e.clone(), c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> LaurentPolynomial {
        LaurentPolynomial::var(n, i)
    }

    fn mono(e: &[i32], c: i64) -> LaurentPolynomial {
        LaurentPolynomial::monomial(e.to_vec(), BigInt::from(c))
    }

    #[test]
    fn multiply_by_inverse_monomial() {
        // (x1 + x2) * x1^-1 = 1 + x1^-1 x2
        let a = &x(2, 0) + &x(2, 1);
        let prod = &a * &mono(&[-1, 0], 1);
        let expected = &mono(&[0, 0], 1) + &mono(&[-1, 1], 1);
        assert_eq!(prod, expected);
    }

    #[test]
    fn additive_inverse_is_empty() {
        let a = &(&x(3, 0) + &mono(&[1, -2, 0], 5)) + &mono(&[0, 0, 0], -3);
        let z = &a + &(-&a);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
        assert_eq!(&a - &a, LaurentPolynomial::zero(3));
    }

    #[test]
    fn distributes() {
        let one = LaurentPolynomial::one(3);
        let lhs = &(&one + &x(3, 1)) * &(&x(3, 0) + &x(3, 2));
        let expected = LaurentPolynomial::from_terms(
            3,
            vec![
                (vec![1, 0, 0], BigInt::from(1)),
                (vec![0, 0, 1], BigInt::from(1)),
                (vec![1, 1, 0], BigInt::from(1)),
                (vec![0, 1, 1], BigInt::from(1)),
            ],
        );
        assert_eq!(lhs, expected);
    }

    #[test]
    fn exact_division_by_variable() {
        let a = &mono(&[1, 1], 1) + &mono(&[0, 2], 1);
        assert_eq!(a.exact_div(&x(2, 1)).unwrap(), &x(2, 0) + &x(2, 1));
    }

    #[test]
    fn monomial_divisor_always_divides() {
        let a = &x(2, 0) + &x(2, 1);
        let q = a.exact_div(&x(2, 0)).unwrap();
        assert_eq!(q, &mono(&[0, 0], 1) + &mono(&[-1, 1], 1));
    }

    #[test]
    fn non_exact_division_is_reported() {
        let one = LaurentPolynomial::one(2);
        let a = &one + &x(2, 0);
        let b = &one + &x(2, 1);
        assert_eq!(a.exact_div(&b), Err(LaurentError::NonExactDivision));
        assert_eq!(a.exact_div(&LaurentPolynomial::zero(2)), Err(LaurentError::DivisionByZero));
        // integer content must divide too
        let two_x = mono(&[1, 0], 2);
        assert_eq!(x(2, 0).exact_div(&two_x), Err(LaurentError::NonExactDivision));
    }

    #[test]
    fn division_with_laurent_divisor() {
        // divisor and quotient both carry negative exponents
        let b = &mono(&[-1, 1, 0], 1) + &mono(&[-1, 0, 0], 1);
        let q = &(&mono(&[0, -2, 1], 3) + &mono(&[2, 0, 0], -1)) + &LaurentPolynomial::one(3);
        let a = &q * &b;
        assert_eq!(a.exact_div(&b).unwrap(), q);
    }

    #[test]
    fn canonical_string_is_ordered() {
        let a = &mono(&[0, 1], 2) + &mono(&[-1, 0], -1);
        assert_eq!(a.canonical_string(), "-1@-1,0;2@0,1");
        assert_eq!(LaurentPolynomial::zero(2).canonical_string(), "");
    }

    #[test]
    fn display_is_readable() {
        let a = &(&mono(&[-1, 0], 1) + &mono(&[-1, 1], 1)) + &mono(&[0, 0], -2);
        assert_eq!(a.to_string(), "x1^-1 + x1^-1*x2 - 2");
    }

    #[test]
    fn term_list_round_trip_with_big_coefficient() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let a = &LaurentPolynomial::monomial(vec![1, -1], big) + &mono(&[0, 0], 7);
        let list = a.to_term_list();
        let json = serde_json::to_string(&list).unwrap();
        assert!(json.contains("\"123456789012345678901234567890\""));
        let back: Vec<TermJson> = serde_json::from_str(&json).unwrap();
        assert_eq!(LaurentPolynomial::from_term_list(2, &back).unwrap(), a);
    }

    #[test]
    fn power_matches_repeated_product() {
        let a = &x(2, 0) + &mono(&[0, -1], 2);
        assert_eq!(a.pow(3), &(&a * &a) * &a);
        assert_eq!(a.pow(0), LaurentPolynomial::one(2));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly() -> impl Strategy<Value = LaurentPolynomial> {
            prop::collection::vec((prop::collection::vec(-3i32..=3, 2), -5i64..=5), 0..5).prop_map(|terms| {
                LaurentPolynomial::from_terms(2, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))))
            })
        }

        proptest! {
            #[test]
            fn ring_axioms(a in poly(), b in poly(), c in poly()) {
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert!((&a - &a).is_zero());
                prop_assert_eq!(&a * &LaurentPolynomial::one(2), a.clone());
            }

            #[test]
            fn product_divides_exactly(a in poly(), b in poly()) {
                prop_assume!(!b.is_zero());
                prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
            }
        }
    }
}
