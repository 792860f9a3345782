//! Characteristic factors entering the localized index integrand.
//!
//! Everything is Chern-root formal. The torus variables satisfy
//! `u_j = exp(-i X_j / 2)`, so a weight vector `n` contributes the monomial
//! `u^n` for the half-character `z^{1/2}` and `u^{2n}` for the full character
//! `z = exp(-i n.X)`. Working in `u` keeps all exponents integral.
//!
//! Per complex line with weight `n` and Chern root `x`:
//!
//! * spinor (Dirac) factor:   `1 / (u^-n e^{x/2} - u^n e^{-x/2})`
//! * signature factor:        `(u^-n e^{x/2} + u^n e^{-x/2}) / (u^-n e^{x/2} - u^n e^{-x/2})`
//!
//! Tangent genera are the usual multiplicative series: the A-hat factor
//! `(x/2)/sinh(x/2)`, the L factor `x/tanh(x)`, and the Euler form (product
//! of the tangent roots).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Exponents, LaurentRational};
use crate::series::TruncatedSeries;

/// Torus weight: the integer character vector of a line bundle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&n| n == 0)
    }

    pub fn negate(&self) -> Weight {
        Weight(self.0.iter().map(|n| -n).collect())
    }

    /// Exponent vector of `u^{s*n}`.
    pub fn scaled_exponents(&self, s: i64) -> Exponents {
        self.0.iter().map(|n| s * n).collect()
    }
}

/// Which tangent genus multiplies the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenusKind {
    AHat,
    LGenus,
    EulerForm,
}

/// Which per-line factor the normal bundle contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalKind {
    Dirac,
    Signature,
    None,
}

/// Operator selection: the tag fixes the tangent genus and normal factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Dirac,
    Signature,
    Euler,
    Custom { genus: GenusKind, normal: NormalKind },
}

impl OperatorKind {
    pub fn genus(&self) -> GenusKind {
        match self {
            OperatorKind::Dirac => GenusKind::AHat,
            OperatorKind::Signature => GenusKind::LGenus,
            OperatorKind::Euler => GenusKind::EulerForm,
            OperatorKind::Custom { genus, .. } => *genus,
        }
    }

    pub fn normal(&self) -> NormalKind {
        match self {
            OperatorKind::Dirac => NormalKind::Dirac,
            OperatorKind::Signature => NormalKind::Signature,
            OperatorKind::Euler => NormalKind::None,
            OperatorKind::Custom { normal, .. } => *normal,
        }
    }
}

impl std::fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OperatorKind::Dirac => f.write_str("dirac"),
            OperatorKind::Signature => f.write_str("signature"),
            OperatorKind::Euler => f.write_str("euler"),
            OperatorKind::Custom { genus, normal } => {
                write!(f, "custom({:?}, {:?})", genus, normal)
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacteristicError {
    #[error("normal line weight is zero")]
    ZeroWeight,
    #[error("weight has rank {found}, expected {expected}")]
    WeightRankMismatch { expected: usize, found: usize },
}

/// Shared shape parameters for building series over one component.
#[derive(Debug, Clone, Copy)]
pub struct SeriesContext {
    /// Torus rank of the coefficient ring.
    pub rank: usize,
    /// Truncation order (half the component dimension by default).
    pub order: usize,
    /// Size of the root universe.
    pub nroots: usize,
}

impl SeriesContext {
    pub fn one(&self) -> TruncatedSeries {
        TruncatedSeries::one(self.rank, self.order, self.nroots)
    }

    fn root(&self, i: usize) -> TruncatedSeries {
        TruncatedSeries::root(self.rank, self.order, self.nroots, i)
    }

    fn monomial(&self, e: Exponents) -> TruncatedSeries {
        TruncatedSeries::constant(
            self.rank,
            self.order,
            self.nroots,
            LaurentRational::monomial(self.rank, e),
        )
    }

    /// `exp(c * x_i)` as a truncated series; `i = None` gives 1.
    fn exp_root(&self, i: Option<usize>, c: (i64, i64)) -> TruncatedSeries {
        match i {
            None => self.one(),
            Some(i) => {
                let scaled = self.root(i).scale(&LaurentRational::constant(
                    self.rank,
                    num_rational::BigRational::new(c.0.into(), c.1.into()),
                ));
                scaled.exp().expect("root has no constant term")
            }
        }
    }
}

/// One term of the expansion of `y/sinh(y)` in `y = x/2`, i.e. the reciprocal
/// of `sum_{n>=0} y^{2n}/(2n+1)!`.
fn ahat_root_factor(ctx: &SeriesContext, i: usize) -> TruncatedSeries {
    // sinh(x/2)/(x/2) = sum ( (x/2)^2 )^n / (2n+1)!
    let y2 = ctx
        .root(i)
        .scale(&LaurentRational::constant(
            ctx.rank,
            num_rational::BigRational::new(1.into(), 2.into()),
        ))
        .pow(2);
    let mut denom = ctx.one();
    let mut pow = ctx.one();
    let mut fact = num_rational::BigRational::from_integer(1.into());
    let mut n = 1i64;
    loop {
        pow = pow.mul(&y2);
        if pow.is_zero() {
            break;
        }
        // (2n+1)! built incrementally from (2n-1)!.
        fact *= num_rational::BigRational::from_integer(((2 * n) * (2 * n + 1)).into());
        denom = denom.add(&pow.scale_rational(&fact.recip()));
        n += 1;
    }
    denom.inverse().expect("constant term one")
}

/// One term of the expansion of `x/tanh(x) = x cosh(x)/sinh(x)`.
fn l_root_factor(ctx: &SeriesContext, i: usize) -> TruncatedSeries {
    let x2 = ctx.root(i).pow(2);
    let mut sinh_over_x = ctx.one();
    let mut cosh = ctx.one();
    let mut pow = ctx.one();
    let mut fact_odd = num_rational::BigRational::from_integer(1.into());
    let mut fact_even = num_rational::BigRational::from_integer(1.into());
    let mut n = 1i64;
    loop {
        pow = pow.mul(&x2);
        if pow.is_zero() {
            break;
        }
        fact_even *= num_rational::BigRational::from_integer(((2 * n - 1) * (2 * n)).into());
        fact_odd *= num_rational::BigRational::from_integer(((2 * n) * (2 * n + 1)).into());
        cosh = cosh.add(&pow.scale_rational(&fact_even.recip()));
        sinh_over_x = sinh_over_x.add(&pow.scale_rational(&fact_odd.recip()));
        n += 1;
    }
    cosh.mul(&sinh_over_x.inverse().expect("constant term one"))
}

/// A-hat genus of the listed roots: product of `(x/2)/sinh(x/2)` factors.
pub fn ahat_genus(ctx: &SeriesContext, roots: &[usize]) -> TruncatedSeries {
    roots
        .iter()
        .fold(ctx.one(), |acc, &i| acc.mul(&ahat_root_factor(ctx, i)))
}

/// L-genus of the listed roots: product of `x/tanh(x)` factors, normalized so
/// the signature equals the integral of the genus.
pub fn l_genus(ctx: &SeriesContext, roots: &[usize]) -> TruncatedSeries {
    roots
        .iter()
        .fold(ctx.one(), |acc, &i| acc.mul(&l_root_factor(ctx, i)))
}

/// Euler form: product of the tangent roots (top Chern class); 1 for a
/// zero-dimensional component.
pub fn euler_form(ctx: &SeriesContext, roots: &[usize]) -> TruncatedSeries {
    roots.iter().fold(ctx.one(), |acc, &i| acc.mul(&ctx.root(i)))
}

fn check_weight(ctx: &SeriesContext, w: &Weight) -> Result<(), CharacteristicError> {
    if w.rank() != ctx.rank {
        return Err(CharacteristicError::WeightRankMismatch {
            expected: ctx.rank,
            found: w.rank(),
        });
    }
    if w.is_zero() {
        return Err(CharacteristicError::ZeroWeight);
    }
    Ok(())
}

/// Denominator series `u^-n e^{x/2} - u^n e^{-x/2}` shared by both normal
/// factors.
fn spinor_difference(
    ctx: &SeriesContext,
    w: &Weight,
    root: Option<usize>,
) -> TruncatedSeries {
    let pos = ctx
        .monomial(w.scaled_exponents(-1))
        .mul(&ctx.exp_root(root, (1, 2)));
    let neg = ctx
        .monomial(w.scaled_exponents(1))
        .mul(&ctx.exp_root(root, (-1, 2)));
    pos.add(&neg.neg())
}

fn spinor_sum(ctx: &SeriesContext, w: &Weight, root: Option<usize>) -> TruncatedSeries {
    let pos = ctx
        .monomial(w.scaled_exponents(-1))
        .mul(&ctx.exp_root(root, (1, 2)));
    let neg = ctx
        .monomial(w.scaled_exponents(1))
        .mul(&ctx.exp_root(root, (-1, 2)));
    pos.add(&neg)
}

/// Dirac normal factor for one weighted line:
/// `(u^-n e^{x/2} - u^n e^{-x/2})^{-1}`.
pub fn dirac_factor(
    ctx: &SeriesContext,
    w: &Weight,
    root: Option<usize>,
) -> Result<TruncatedSeries, CharacteristicError> {
    check_weight(ctx, w)?;
    Ok(spinor_difference(ctx, w, root)
        .inverse()
        .expect("nonzero weight gives invertible constant term"))
}

/// Signature normal factor for one weighted line:
/// `(u^-n e^{x/2} + u^n e^{-x/2}) / (u^-n e^{x/2} - u^n e^{-x/2})`.
pub fn signature_factor(
    ctx: &SeriesContext,
    w: &Weight,
    root: Option<usize>,
) -> Result<TruncatedSeries, CharacteristicError> {
    check_weight(ctx, w)?;
    let den_inv = spinor_difference(ctx, w, root)
        .inverse()
        .expect("nonzero weight gives invertible constant term");
    Ok(spinor_sum(ctx, w, root).mul(&den_inv))
}

/// One summand of an equivariant Chern character: a line with weight `w`,
/// parity sign, and optional Chern root.
#[derive(Debug, Clone)]
pub struct CharacterLine {
    pub weight: Weight,
    pub parity: i8,
    pub root: Option<usize>,
}

/// Equivariant Chern character of a graded sum of line bundles:
/// `sum parity * u^{2w} * e^{x}`. The empty sum is 0; a trivial line
/// contributes 1.
pub fn chern_character(
    ctx: &SeriesContext,
    lines: &[CharacterLine],
) -> Result<TruncatedSeries, CharacteristicError> {
    let mut acc = TruncatedSeries::zero(ctx.rank, ctx.order, ctx.nroots);
    for line in lines {
        if line.weight.rank() != ctx.rank {
            return Err(CharacteristicError::WeightRankMismatch {
                expected: ctx.rank,
                found: line.weight.rank(),
            });
        }
        let mono = ctx.monomial(line.weight.scaled_exponents(2));
        let term = mono.mul(&ctx.exp_root(line.root, (1, 1)));
        let signed = if line.parity < 0 { term.neg() } else { term };
        acc = acc.add(&signed);
    }
    Ok(acc)
}
