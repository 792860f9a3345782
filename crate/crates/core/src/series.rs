//! Truncated polynomial algebra in formal Chern-root symbols.
//!
//! Roots have formal degree two and are nilpotent by truncation: every
//! monomial of total degree above the truncation order is discarded.
//! Coefficients are [`LaurentRational`] functions of the torus variables, so
//! the same ring carries both the genus expansions and the equivariant
//! normal-bundle factors.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::algebra::LaurentRational;

/// What a formal root tracks; ids are unique within one fixed component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootKind {
    Tangent,
    Normal,
    Auxiliary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootSymbol {
    pub id: u32,
    pub kind: RootKind,
}

/// Multidegree over the root universe: `degrees[i]` is the power of root `i`.
pub type RootMonomial = Vec<u8>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation order mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("root universe mismatch: {left} vs {right} roots")]
    UniverseMismatch { left: usize, right: usize },
    #[error("constant term is not invertible")]
    NonInvertibleConstant,
    #[error("exponent must have zero constant term")]
    NonZeroConstantInExponent,
    #[error("square root requires constant term one")]
    ConstantTermNotOne,
}

/// Polynomial in the root symbols, truncated above total degree `order`,
/// with `LaurentRational` coefficients of a fixed torus rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    rank: usize,
    order: usize,
    nroots: usize,
    terms: BTreeMap<RootMonomial, LaurentRational>,
}

impl TruncatedSeries {
    pub fn zero(rank: usize, order: usize, nroots: usize) -> Self {
        TruncatedSeries {
            rank,
            order,
            nroots,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, order: usize, nroots: usize, c: LaurentRational) -> Self {
        let mut s = Self::zero(rank, order, nroots);
        s.add_term(vec![0; nroots], c);
        s
    }

    pub fn one(rank: usize, order: usize, nroots: usize) -> Self {
        Self::constant(rank, order, nroots, LaurentRational::one(rank))
    }

    /// The degree-one series for root `i`.
    pub fn root(rank: usize, order: usize, nroots: usize, i: usize) -> Self {
        assert!(i < nroots, "root index out of range");
        let mut s = Self::zero(rank, order, nroots);
        let mut m = vec![0u8; nroots];
        m[i] = 1;
        s.add_term(m, LaurentRational::one(rank));
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nroots(&self) -> usize {
        self.nroots
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RootMonomial, &LaurentRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u8]) -> LaurentRational {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| LaurentRational::zero(self.rank))
    }

    pub fn constant_coefficient(&self) -> LaurentRational {
        self.coefficient(&vec![0; self.nroots])
    }

    fn add_term(&mut self, m: RootMonomial, c: LaurentRational) {
        debug_assert_eq!(m.len(), self.nroots);
        if c.is_zero() || total_degree(&m) > self.order {
            return;
        }
        match self.terms.entry(m) {
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

    fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order != other.order {
            return Err(SeriesError::TruncationMismatch {
                left: self.order,
                right: other.order,
            });
        }
        if self.nroots != other.nroots {
            return Err(SeriesError::UniverseMismatch {
                left: self.nroots,
                right: other.nroots,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.rank, self.order, self.nroots);
        for (ma, ca) in &self.terms {
            let da = total_degree(ma);
            for (mb, cb) in &other.terms {
                if da + total_degree(mb) > self.order {
                    continue;
                }
                let m: RootMonomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("incompatible series")
    }

    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("incompatible series")
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            rank: self.rank,
            order: self.order,
            nroots: self.nroots,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &LaurentRational) -> Self {
        let mut out = Self::zero(self.rank, self.order, self.nroots);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        self.scale(&LaurentRational::constant(self.rank, c.clone()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.rank, self.order, self.nroots);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// The series with all terms of total degree above `order` dropped.
    pub fn truncate_to(&self, order: usize) -> Self {
        let mut out = Self::zero(self.rank, order, self.nroots);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// The part of positive root degree (the nilpotent part).
    fn positive_part(&self) -> Self {
        let mut out = Self::zero(self.rank, self.order, self.nroots);
        for (m, c) in &self.terms {
            if total_degree(m) > 0 {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Multiplicative inverse up to truncation. Requires an invertible
    /// constant term; the nilpotent part is handled by a finite Neumann sum.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_coefficient();
        if c0.is_zero() {
            return Err(SeriesError::NonInvertibleConstant);
        }
        let c0_inv = c0.recip().expect("nonzero");
        // self = c0 (1 + n) with n nilpotent: inverse = c0^-1 sum (-n)^i.
        let n = self.positive_part().scale(&c0_inv);
        let mut acc = Self::one(self.rank, self.order, self.nroots);
        let mut pow = Self::one(self.rank, self.order, self.nroots);
        for _ in 0..self.order {
            pow = pow.mul(&n).neg();
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Ok(acc.scale(&c0_inv))
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_coefficient().is_zero() {
            return Err(SeriesError::NonZeroConstantInExponent);
        }
        let mut acc = Self::one(self.rank, self.order, self.nroots);
        let mut pow = Self::one(self.rank, self.order, self.nroots);
        let mut factorial = BigRational::one();
        for i in 1..=self.order {
            pow = pow.mul(self);
            if pow.is_zero() {
                break;
            }
            factorial *= BigRational::from_integer(i.into());
            acc = acc.add(&pow.scale_rational(&factorial.recip()));
        }
        Ok(acc)
    }

    /// Square root of a series with constant term one, via the binomial
    /// series in the nilpotent part.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        if !self.constant_coefficient().is_one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let n = self.positive_part();
        let mut acc = Self::one(self.rank, self.order, self.nroots);
        let mut pow = Self::one(self.rank, self.order, self.nroots);
        let mut coeff = BigRational::one();
        for i in 1..=self.order {
            pow = pow.mul(&n);
            if pow.is_zero() {
                break;
            }
            // binomial(1/2, i) built incrementally.
            let step = BigRational::new((3 - 2 * i as i64).into(), (2 * i as i64).into());
            coeff *= step;
            acc = acc.add(&pow.scale_rational(&coeff));
        }
        Ok(acc)
    }
}

pub fn total_degree(m: &[u8]) -> usize {
    m.iter().map(|&d| d as usize).sum()
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = format_root_monomial(m);
            if mono.is_empty() {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})*{}", c, mono)?;
            }
        }
        Ok(())
    }
}

pub(crate) fn format_root_monomial(m: &[u8]) -> String {
    let mut parts = Vec::new();
    for (i, &d) in m.iter().enumerate() {
        if d == 0 {
            continue;
        }
        if d == 1 {
            parts.push(format!("x{}", i));
        } else {
            parts.push(format!("x{}^{}", i, d));
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn konst(n: i64, d: i64) -> LaurentRational {
        LaurentRational::constant(1, rat(n, d))
    }

    fn one_plus_root(order: usize, nroots: usize, i: usize) -> TruncatedSeries {
        TruncatedSeries::one(1, order, nroots).add(&TruncatedSeries::root(1, order, nroots, i))
    }

    #[test]
    fn mul_truncates_square() {
        // (1 + x)(1 - x) at order 1 = 1
        let a = one_plus_root(1, 1, 0);
        let b = TruncatedSeries::one(1, 1, 1).add(&TruncatedSeries::root(1, 1, 1, 0).neg());
        assert_eq!(a.mul(&b), TruncatedSeries::one(1, 1, 1));
    }

    #[test]
    fn mul_two_roots() {
        // (1 + x)(1 + y) at order 2 = 1 + x + y + xy
        let a = one_plus_root(2, 2, 0);
        let b = one_plus_root(2, 2, 1);
        let p = a.mul(&b);
        assert_eq!(p.coefficient(&[0, 0]), konst(1, 1));
        assert_eq!(p.coefficient(&[1, 0]), konst(1, 1));
        assert_eq!(p.coefficient(&[0, 1]), konst(1, 1));
        assert_eq!(p.coefficient(&[1, 1]), konst(1, 1));
        assert_eq!(p.iter().count(), 4);
    }

    #[test]
    fn inverse_of_one() {
        let one = TruncatedSeries::one(1, 3, 1);
        assert_eq!(one.inverse().unwrap(), one);
    }

    #[test]
    fn inverse_geometric() {
        // (1 - x)^-1 at order 2 = 1 + x + x^2
        let a = TruncatedSeries::one(1, 2, 1).add(&TruncatedSeries::root(1, 2, 1, 0).neg());
        let inv = a.inverse().unwrap();
        assert_eq!(inv.coefficient(&[0]), konst(1, 1));
        assert_eq!(inv.coefficient(&[1]), konst(1, 1));
        assert_eq!(inv.coefficient(&[2]), konst(1, 1));
        assert_eq!(a.mul(&inv), TruncatedSeries::one(1, 2, 1));
    }

    #[test]
    fn inverse_with_rational_function_constant() {
        // ((u^-1 - u) + x (u^-1 + u)/2)^-1 at order 1
        //   = (u^-1 - u)^-1 (1 - x (u^-1 + u)/(2 (u^-1 - u)))
        use crate::algebra::LaurentPoly;
        let d = LaurentRational::from_poly(LaurentPoly::from_terms(
            1,
            [(vec![-1], rat(1, 1)), (vec![1], rat(-1, 1))],
        ));
        let s = LaurentRational::from_poly(LaurentPoly::from_terms(
            1,
            [(vec![-1], rat(1, 2)), (vec![1], rat(1, 2))],
        ));
        let a = TruncatedSeries::constant(1, 1, 1, d.clone())
            .add(&TruncatedSeries::root(1, 1, 1, 0).scale(&s));
        let inv = a.inverse().unwrap();
        let d_inv = d.recip().unwrap();
        assert_eq!(inv.coefficient(&[0]), d_inv);
        let expect_lin = -&(&(&s * &d_inv) * &d_inv);
        assert_eq!(inv.coefficient(&[1]), expect_lin);
        assert_eq!(a.mul(&inv), TruncatedSeries::one(1, 1, 1));
    }

    #[test]
    fn exp_of_zero() {
        let z = TruncatedSeries::zero(1, 4, 1);
        assert_eq!(z.exp().unwrap(), TruncatedSeries::one(1, 4, 1));
    }

    #[test]
    fn exp_half_root() {
        // exp(x/2) at order 2 = 1 + x/2 + x^2/8
        let x_half = TruncatedSeries::root(1, 2, 1, 0).scale(&konst(1, 2));
        let e = x_half.exp().unwrap();
        assert_eq!(e.coefficient(&[0]), konst(1, 1));
        assert_eq!(e.coefficient(&[1]), konst(1, 2));
        assert_eq!(e.coefficient(&[2]), konst(1, 8));
    }

    #[test]
    fn exp_rejects_constant_part() {
        let s = TruncatedSeries::one(1, 2, 1);
        assert!(matches!(s.exp(), Err(SeriesError::NonZeroConstantInExponent)));
    }

    #[test]
    fn sqrt_binomial() {
        // sqrt(1 + x) at order 2 = 1 + x/2 - x^2/8
        let s = one_plus_root(2, 1, 0);
        let r = s.sqrt().unwrap();
        assert_eq!(r.coefficient(&[0]), konst(1, 1));
        assert_eq!(r.coefficient(&[1]), konst(1, 2));
        assert_eq!(r.coefficient(&[2]), konst(-1, 8));
        assert_eq!(r.mul(&r), s);
    }

    #[test]
    fn exp_is_homomorphic_on_sum() {
        let a = TruncatedSeries::root(1, 3, 2, 0).scale(&konst(2, 3));
        let b = TruncatedSeries::root(1, 3, 2, 1).scale(&konst(-1, 2));
        let lhs = a.add(&b).exp().unwrap();
        let rhs = a.exp().unwrap().mul(&b.exp().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_is_consistent_across_orders() {
        // Computing at order m+1 then truncating to m = computing at order m.
        let mk = |order: usize| {
            let a = TruncatedSeries::one(1, order, 2)
                .add(&TruncatedSeries::root(1, order, 2, 0))
                .add(&TruncatedSeries::root(1, order, 2, 1).scale(&konst(1, 3)));
            a.inverse().unwrap()
        };
        let at3 = mk(3);
        let at2 = mk(2);
        assert_eq!(at3.truncate_to(2), at2);
    }

    #[test]
    fn mismatched_truncation_rejected() {
        let a = TruncatedSeries::one(1, 2, 1);
        let b = TruncatedSeries::one(1, 3, 1);
        assert!(matches!(
            a.checked_mul(&b),
            Err(SeriesError::TruncationMismatch { .. })
        ));
    }
}
