//! Sparse multivariate Laurent polynomials over arbitrary-precision rationals.
//!
//! A `LaurentPoly` of rank `k` is a finite sum of terms `c * u^e` with
//! `c` a nonzero `BigRational` and `e` an exponent vector in `Z^k`. Rank 0 is
//! allowed and degenerates to a plain rational constant. Terms are kept in a
//! `BTreeMap` so iteration order (lexicographic on exponent vectors) is
//! deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Exponent vector in `Z^k`.
pub type Exponents = Vec<i64>;

/// Sparse Laurent polynomial in `k` torus variables with rational coefficients.
///
/// Invariants: no zero coefficients are stored, and every exponent vector has
/// length `rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, BigRational::one())
    }

    pub fn constant(rank: usize, c: BigRational) -> Self {
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(vec![0; rank], c);
        }
        p
    }

    /// The monomial `c * u^e`.
    pub fn monomial(rank: usize, exponents: Exponents, c: BigRational) -> Self {
        assert_eq!(exponents.len(), rank, "exponent vector length != rank");
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    /// The single variable `u_j`.
    pub fn var(rank: usize, j: usize) -> Self {
        assert!(j < rank, "variable index out of range");
        let mut e = vec![0; rank];
        e[j] = 1;
        Self::monomial(rank, e, BigRational::one())
    }

    pub fn from_terms<I>(rank: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigRational)>,
    {
        let mut p = Self::zero(rank);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        let zero: Exponents = vec![0; self.rank];
        self.terms.len() == 1
            && self.terms.get(&zero).map(|c| c.is_one()).unwrap_or(false)
    }

    /// True iff the polynomial is a single term `c * u^e` (a unit of the ring).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[i64]) -> BigRational {
        self.terms.get(exponents).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of `u^0`, the constant term.
    pub fn constant_coefficient(&self) -> BigRational {
        self.coefficient(&vec![0; self.rank])
    }

    pub fn add_term(&mut self, exponents: Exponents, c: BigRational) {
        assert_eq!(exponents.len(), self.rank, "exponent vector length != rank");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.rank != other.rank {
            Err(AlgebraError::RankMismatch {
                left: self.rank,
                right: other.rank,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiply by the monomial `u^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        assert_eq!(shift.len(), self.rank);
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.rank);
        for _ in 0..n {
            out = out.checked_mul(self).expect("rank preserved");
        }
        out
    }

    /// Substitute `u_j -> 1/u_j` for every variable.
    pub fn invert_variables(&self) -> Self {
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum of all exponent vectors (the monomial content).
    /// Returns `None` for the zero polynomial.
    pub fn min_exponents(&self) -> Option<Exponents> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            acc.iter().zip(e).map(|(a, b)| (*a).min(*b)).collect()
        }))
    }

    /// Lexicographically largest term; `None` for zero.
    fn lex_lead(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Exact division. Returns `Some(q)` with `self = q * divisor` when the
    /// quotient exists in the Laurent ring, `None` otherwise.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if self.rank != divisor.rank || divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.rank));
        }
        // Shift both operands into N^k; ordinary single-divisor long division
        // under lex order then terminates because the lead strictly decreases.
        let a_shift = self.min_exponents().expect("nonzero");
        let b_shift = divisor.min_exponents().expect("nonzero");
        let a = self.shift(&a_shift.iter().map(|x| -x).collect::<Vec<_>>());
        let b = divisor.shift(&b_shift.iter().map(|x| -x).collect::<Vec<_>>());

        let (dlead_e, dlead_c) = b.lex_lead().expect("nonzero divisor");
        let dlead_e = dlead_e.clone();
        let dlead_c = dlead_c.clone();

        let mut rem = a;
        let mut quo = Self::zero(self.rank);
        while !rem.is_zero() {
            let (rlead_e, rlead_c) = rem.lex_lead().expect("nonzero remainder");
            let mut t = Vec::with_capacity(self.rank);
            for (re, de) in rlead_e.iter().zip(&dlead_e) {
                let d = re - de;
                if d < 0 {
                    return None;
                }
                t.push(d);
            }
            let c = rlead_c / &dlead_c;
            let mono = Self::monomial(self.rank, t, c);
            rem = rem
                .checked_add(&mono.checked_mul(&b).expect("rank").neg())
                .expect("rank");
            quo = quo.checked_add(&mono).expect("rank");
        }
        // Undo the content shifts: self/divisor = q * u^(a_shift - b_shift).
        let corr: Exponents = a_shift.iter().zip(&b_shift).map(|(a, b)| a - b).collect();
        Some(quo.shift(&corr))
    }

    /// True when `divisor` divides `self` exactly.
    pub fn divisible_by(&self, divisor: &Self) -> bool {
        self.div_exact(divisor).is_some()
    }

    /// Exact evaluation at a rational point (all coordinates nonzero unless
    /// every exponent touching a zero coordinate is nonnegative).
    pub fn eval_rational(&self, point: &[BigRational]) -> Result<BigRational, AlgebraError> {
        assert_eq!(point.len(), self.rank);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                term *= rational_pow(x, k)?;
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Floating-point evaluation at a complex point.
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = Complex64::new(rational_to_f64(c), 0.0);
            for (x, &k) in point.iter().zip(e) {
                term *= x.powi(k as i32);
            }
            acc += term;
        }
        acc
    }

    // --- univariate helpers (rank 1) ---

    /// Dense ascending coefficient vector after shifting the lowest exponent
    /// to zero. Returns `(low_exponent, coefficients)`.
    fn to_dense_univariate(&self) -> (i64, Vec<BigRational>) {
        assert_eq!(self.rank, 1);
        if self.is_zero() {
            return (0, vec![]);
        }
        let lo = self.terms.keys().next().unwrap()[0];
        let hi = self.terms.keys().next_back().unwrap()[0];
        let mut dense = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            dense[(e[0] - lo) as usize] = c.clone();
        }
        (lo, dense)
    }

    fn from_dense_univariate(lo: i64, dense: &[BigRational]) -> Self {
        let mut p = Self::zero(1);
        for (i, c) in dense.iter().enumerate() {
            if !c.is_zero() {
                p.add_term(vec![lo + i as i64], c.clone());
            }
        }
        p
    }

    /// Monic GCD of two rank-1 Laurent polynomials, computed on the ordinary
    /// polynomial parts (monomial content is a unit and is ignored).
    pub fn gcd_univariate(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.rank != 1 || other.rank != 1 {
            return Err(AlgebraError::UnivariateOnly);
        }
        if self.is_zero() {
            return Ok(normalize_monic(other));
        }
        if other.is_zero() {
            return Ok(normalize_monic(self));
        }
        let (_, mut a) = self.to_dense_univariate();
        let (_, mut b) = other.to_dense_univariate();
        while !dense_is_zero(&b) {
            let r = dense_rem(&a, &b);
            a = b;
            b = r;
        }
        dense_trim(&mut a);
        let lead = a.last().cloned().unwrap_or_else(BigRational::one);
        for c in &mut a {
            *c = &*c / &lead;
        }
        Ok(Self::from_dense_univariate(0, &a))
    }
}

fn normalize_monic(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return p.clone();
    }
    let (lo, dense) = p.to_dense_univariate();
    let lead = dense.last().cloned().unwrap();
    let scaled: Vec<BigRational> = dense.iter().map(|c| c / &lead).collect();
    let _ = lo;
    LaurentPoly::from_dense_univariate(0, &scaled)
}

fn dense_is_zero(v: &[BigRational]) -> bool {
    v.iter().all(|c| c.is_zero())
}

fn dense_trim(v: &mut Vec<BigRational>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Remainder of dense univariate division.
fn dense_rem(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut r: Vec<BigRational> = num.to_vec();
    dense_trim(&mut r);
    let mut d: Vec<BigRational> = den.to_vec();
    dense_trim(&mut d);
    let dlead = d.last().expect("nonzero divisor").clone();
    let ddeg = d.len() - 1;
    while r.len() > ddeg && !dense_is_zero(&r) {
        let rdeg = r.len() - 1;
        let c = r.last().unwrap() / &dlead;
        let shift = rdeg - ddeg;
        for (i, dc) in d.iter().enumerate() {
            let idx = i + shift;
            let v = &r[idx] - &(dc * &c);
            r[idx] = v;
        }
        dense_trim(&mut r);
    }
    r
}

/// `x^k` for a rational base and signed exponent.
pub(crate) fn rational_pow(x: &BigRational, k: i64) -> Result<BigRational, AlgebraError> {
    if k == 0 {
        return Ok(BigRational::one());
    }
    if x.is_zero() {
        if k > 0 {
            return Ok(BigRational::zero());
        }
        return Err(AlgebraError::ZeroToNegativePower);
    }
    let mut base = if k > 0 { x.clone() } else { x.recip() };
    let mut n = k.unsigned_abs();
    let mut acc = BigRational::one();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    Ok(acc)
}

pub(crate) fn rational_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of leading digits for out-of-range values.
        let n = c.numer().to_f64().unwrap_or(if c.numer().is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
        let d = c.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("rank mismatch in +")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(&rhs.neg()).expect("rank mismatch in -")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("rank mismatch in *")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        (&self).neg()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
                first = false;
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mono = format_monomial(self.rank, e);
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", mag, mono)?;
            }
        }
        Ok(())
    }
}

fn format_monomial(rank: usize, e: &[i64]) -> String {
    let mut parts = Vec::new();
    for (j, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let name = if rank == 1 {
            "u".to_string()
        } else {
            format!("u{}", j + 1)
        };
        if k == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{}^{}", name, k));
        }
    }
    parts.join("*")
}
