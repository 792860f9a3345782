//! Rational functions in the torus variables: quotients of Laurent polynomials.
//!
//! Rank-1 fractions are kept fully reduced (coprime numerator/denominator via
//! the univariate GCD). Higher ranks only get monomial-content normalization
//! plus opportunistic cancellation of shared binomial factors; full
//! multivariate GCD is out of scope because every denominator produced by the
//! characteristic factors is a product of binomials `1 - c*u^v`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::{Exponents, LaurentPoly};
use super::AlgebraError;

/// A reduced quotient `num / den` of Laurent polynomials of equal rank.
///
/// The denominator is normalized to have nonnegative exponents, a nonzero
/// term at its lexicographically least exponent, and that coefficient equal
/// to one; the compensating unit is absorbed into the numerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentRational {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Witness that a fraction is not a Laurent polynomial: the denominator
/// factors that survive reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotPolynomial {
    pub surviving_denominator: LaurentPoly,
}

impl fmt::Display for NotPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a Laurent polynomial; denominator {}", self.surviving_denominator)
    }
}

impl LaurentRational {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, AlgebraError> {
        if num.rank() != den.rank() {
            return Err(AlgebraError::RankMismatch {
                left: num.rank(),
                right: den.rank(),
            });
        }
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let mut f = LaurentRational { num, den };
        f.reduce_in_place();
        Ok(f)
    }

    pub fn zero(rank: usize) -> Self {
        LaurentRational {
            num: LaurentPoly::zero(rank),
            den: LaurentPoly::one(rank),
        }
    }

    pub fn one(rank: usize) -> Self {
        LaurentRational {
            num: LaurentPoly::one(rank),
            den: LaurentPoly::one(rank),
        }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let rank = p.rank();
        LaurentRational {
            num: p,
            den: LaurentPoly::one(rank),
        }
    }

    pub fn constant(rank: usize, c: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(rank, c))
    }

    /// The monomial `u^e` as a fraction.
    pub fn monomial(rank: usize, e: Exponents) -> Self {
        Self::from_poly(LaurentPoly::monomial(rank, e, BigRational::one()))
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Reduce to the normal form described on the type. Idempotent.
    pub fn reduce(&self) -> Self {
        let mut f = self.clone();
        f.reduce_in_place();
        f
    }

    fn reduce_in_place(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentPoly::one(self.rank());
            return;
        }
        if self.rank() == 1 {
            let g = self
                .num
                .gcd_univariate(&self.den)
                .expect("rank-1 gcd always defined");
            if !g.is_one() && !g.is_zero() {
                self.num = self.num.div_exact(&g).expect("gcd divides numerator");
                self.den = self.den.div_exact(&g).expect("gcd divides denominator");
            }
        } else {
            self.cancel_common_binomials();
        }
        // If the denominator divides the numerator outright the fraction is a
        // polynomial; this also covers monomial denominators.
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = LaurentPoly::one(self.rank());
            return;
        }
        self.normalize_content();
    }

    /// Move the denominator's monomial content and leading unit into the
    /// numerator so the denominator has nonnegative exponents and its least
    /// term has coefficient one.
    fn normalize_content(&mut self) {
        let min = self.den.min_exponents().expect("nonzero denominator");
        if min.iter().any(|&m| m != 0) {
            let neg: Vec<i64> = min.iter().map(|m| -m).collect();
            self.den = self.den.shift(&neg);
            self.num = self.num.shift(&neg);
        }
        let lead = self
            .den
            .iter()
            .next()
            .map(|(_, c)| c.clone())
            .expect("nonzero denominator");
        if !lead.is_one() {
            let inv = lead.recip();
            self.den = self.den.scale(&inv);
            self.num = self.num.scale(&inv);
        }
    }

    /// Cancel binomial factors `1 + c*u^v` common to numerator and
    /// denominator. Candidates are read off the denominator's support
    /// relative to its least term; cancellation repeats until no candidate
    /// divides both sides.
    fn cancel_common_binomials(&mut self) {
        loop {
            let mut progress = false;
            let lead = match self.den.iter().next() {
                Some((e, c)) => (e.clone(), c.clone()),
                None => return,
            };
            let candidates: Vec<LaurentPoly> = self
                .den
                .iter()
                .skip(1)
                .map(|(e, c)| {
                    let v: Exponents = e.iter().zip(&lead.0).map(|(a, b)| a - b).collect();
                    LaurentPoly::from_terms(
                        self.num.rank(),
                        [
                            (vec![0; self.num.rank()], BigRational::one()),
                            (v, c / &lead.1),
                        ],
                    )
                })
                .collect();
            for b in candidates {
                if b.nterms() != 2 {
                    continue;
                }
                if let (Some(nq), Some(dq)) = (self.num.div_exact(&b), self.den.div_exact(&b)) {
                    self.num = nq;
                    self.den = dq;
                    progress = true;
                    break;
                }
            }
            if !progress {
                return;
            }
        }
    }

    /// Extract the Laurent polynomial this fraction represents, or report the
    /// surviving denominator when there is a genuine pole.
    pub fn try_polynomialize(&self) -> Result<LaurentPoly, NotPolynomial> {
        let f = self.reduce();
        if f.den.is_one() {
            Ok(f.num)
        } else if let Some(q) = f.num.div_exact(&f.den) {
            Ok(q)
        } else {
            Err(NotPolynomial {
                surviving_denominator: f.den,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        let num = &self.num.checked_mul(&other.den)?.checked_add(&other.num.checked_mul(&self.den)?)?;
        let den = self.den.checked_mul(&other.den)?;
        LaurentRational::new(num.clone(), den)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        LaurentRational::new(
            self.num.checked_mul(&other.num)?,
            self.den.checked_mul(&other.den)?,
        )
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.num.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        LaurentRational::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        LaurentRational {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .reduce()
    }

    /// Substitute `u_j -> 1/u_j`.
    pub fn invert_variables(&self) -> Self {
        LaurentRational::new(self.num.invert_variables(), self.den.invert_variables())
            .expect("denominator stays nonzero")
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> Result<BigRational, AlgebraError> {
        let d = self.den.eval_rational(point)?;
        if d.is_zero() {
            return Err(AlgebraError::PoleAtEvaluationPoint);
        }
        Ok(self.num.eval_rational(point)? / d)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.num.eval_complex(point) / self.den.eval_complex(point)
    }
}

impl Add for &LaurentRational {
    type Output = LaurentRational;
    fn add(self, rhs: &LaurentRational) -> LaurentRational {
        self.checked_add(rhs).expect("rank mismatch in +")
    }
}

impl Sub for &LaurentRational {
    type Output = LaurentRational;
    fn sub(self, rhs: &LaurentRational) -> LaurentRational {
        self.checked_add(&rhs.neg()).expect("rank mismatch in -")
    }
}

impl Mul for &LaurentRational {
    type Output = LaurentRational;
    fn mul(self, rhs: &LaurentRational) -> LaurentRational {
        self.checked_mul(rhs).expect("rank mismatch in *")
    }
}

impl Div for &LaurentRational {
    type Output = LaurentRational;
    fn div(self, rhs: &LaurentRational) -> LaurentRational {
        self.checked_mul(&rhs.recip().expect("division by zero"))
            .expect("rank mismatch in /")
    }
}

impl Neg for &LaurentRational {
    type Output = LaurentRational;
    fn neg(self) -> LaurentRational {
        LaurentRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for LaurentRational {
    type Output = LaurentRational;
    fn neg(self) -> LaurentRational {
        (&self).neg()
    }
}

impl fmt::Display for LaurentRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
