//! The almost-periodic average in two engines.
//!
//! Exact: sum the component contributions over a common denominator, certify
//! that every singularity cancels by exact division, and read off the
//! constant Fourier coefficient. Numeric: average over the torus shifted to
//! the chamber's contour radii `|u_j| = e^{q_j/2}` with equispaced nodes,
//! which is spectrally accurate for functions holomorphic in an annulus.
//! Individual contributions may depend on the chamber; the total does not.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{rational_to_f64, LaurentPoly, LaurentRational};
use crate::characteristic::{
    chern_character, dirac_factor, signature_factor, CharacterLine, NormalKind, OperatorKind,
    SeriesContext, Weight,
};
use crate::localization::{contributions, Contribution, Dataset, FixedComponent, LocalizationError};
use crate::report::{ComponentReport, ExactOutcome, IndexReport, NumericOutcome};
use crate::series::RootMonomial;

/// Contour shift: `q_j` is the imaginary part of the deformation in the
/// `j`-th coordinate, giving the radius `e^{q_j/2}` for `u_j`. Valid for a
/// dataset when `q . n != 0` for every normal weight `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chamber {
    values: Vec<BigRational>,
}

impl Chamber {
    pub fn new(values: Vec<BigRational>) -> Self {
        Chamber { values }
    }

    pub fn from_f64(values: &[f64]) -> Self {
        Chamber {
            values: values
                .iter()
                .map(|&v| BigRational::from_f64(v).expect("finite chamber coordinate"))
                .collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        Chamber {
            values: vec![BigRational::zero(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn scale(&self, factor: i64) -> Chamber {
        Chamber {
            values: self
                .values
                .iter()
                .map(|q| q * BigRational::from_integer(factor.into()))
                .collect(),
        }
    }

    /// Contour radii `e^{q_j/2}`.
    pub fn radii(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|q| (rational_to_f64(q) / 2.0).exp())
            .collect()
    }

    pub fn coordinate_strings(&self) -> Vec<String> {
        self.values.iter().map(|q| q.to_string()).collect()
    }

    /// `q . n` as an exact rational.
    fn dot(&self, w: &Weight) -> BigRational {
        self.values
            .iter()
            .zip(&w.0)
            .map(|(q, &n)| q * BigRational::from_integer(n.into()))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// A chamber coordinate orthogonal to some normal weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberViolation {
    pub component: String,
    pub weight: Weight,
}

/// Check `q . n != 0` against every normal weight of the dataset.
pub fn chamber_validate(chamber: &Chamber, dataset: &Dataset) -> Vec<ChamberViolation> {
    let mut out = Vec::new();
    for (component, weight) in dataset.normal_weights() {
        if chamber.rank() != weight.rank() || chamber.dot(weight).is_zero() {
            out.push(ChamberViolation {
                component: component.to_string(),
                weight: weight.clone(),
            });
        }
    }
    out
}

/// Deterministic default chamber: `q_j = (2j+1)/7`, nudged by `1/101` steps
/// until it avoids every weight hyperplane.
pub fn default_chamber(dataset: &Dataset) -> Chamber {
    let mut values: Vec<BigRational> = (0..dataset.rank)
        .map(|j| BigRational::new((2 * j as i64 + 1).into(), 7.into()))
        .collect();
    let step = BigRational::new(1.into(), 101.into());
    loop {
        let candidate = Chamber {
            values: values.clone(),
        };
        if chamber_validate(&candidate, dataset).is_empty() {
            return candidate;
        }
        for v in &mut values {
            *v += &step;
        }
    }
}

#[derive(Debug, Error)]
pub enum AveragingError {
    #[error("contributions have mixed ranks")]
    MixedRanks,
    #[error(
        "chamber lies on a weight hyperplane: {}",
        .0.iter()
            .map(|v| format!("{} (weight {:?})", v.component, v.weight.0))
            .collect::<Vec<_>>()
            .join(", ")
    )]
    ChamberViolation(Vec<ChamberViolation>),
    #[error("node count must be a power of two in [64, 1048576], got {0}")]
    BadNodeCount(usize),
    #[error("dataset is invalid: {0}")]
    InvalidDataset(String),
    #[error(transparent)]
    Localization(#[from] LocalizationError),
}

/// Successful exact average: the summed contributions as a Laurent
/// polynomial plus its constant coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactAverage {
    pub value: BigRational,
    pub certificate: LaurentPoly,
}

/// Failed cancellation: the denominator factors that survive reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularityNotCancelled {
    pub surviving_factors: LaurentPoly,
}

/// Exact average of a family of contributions: sum, certify that the result
/// is a Laurent polynomial, and extract the exponent-zero coefficient.
pub fn average_exact(
    values: &[LaurentRational],
) -> Result<Result<ExactAverage, SingularityNotCancelled>, AveragingError> {
    if values.is_empty() {
        return Ok(Ok(ExactAverage {
            value: BigRational::zero(),
            certificate: LaurentPoly::zero(0),
        }));
    }
    let rank = values[0].rank();
    if values.iter().any(|v| v.rank() != rank) {
        return Err(AveragingError::MixedRanks);
    }
    let mut total = LaurentRational::zero(rank);
    for v in values {
        total = &total + v;
    }
    match total.try_polynomialize() {
        Ok(poly) => Ok(Ok(ExactAverage {
            value: poly.constant_coefficient(),
            certificate: poly,
        })),
        Err(not_poly) => Ok(Err(SingularityNotCancelled {
            surviving_factors: not_poly.surviving_denominator,
        })),
    }
}

/// Execution strategy for the node loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}


/// Quadrature output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub perturbed_nodes: usize,
}

pub fn valid_node_count(n: usize) -> bool {
    (64..=1 << 20).contains(&n) && n.is_power_of_two()
}

/// Default per-axis node count, scaled down with rank to keep the grid flat.
pub fn default_nodes(rank: usize) -> usize {
    match rank {
        0 | 1 => 4096,
        2 => 256,
        _ => 64,
    }
}

fn check_nodes(nodes: usize) -> Result<(), AveragingError> {
    if valid_node_count(nodes) {
        Ok(())
    } else {
        Err(AveragingError::BadNodeCount(nodes))
    }
}

/// Sum in a fixed pairwise tree so the float result does not depend on the
/// evaluation order chosen by the runtime.
fn tree_sum(values: &mut [Complex64]) -> Complex64 {
    let mut len = values.len();
    if len == 0 {
        return Complex64::new(0.0, 0.0);
    }
    while len > 1 {
        let half = len.div_ceil(2);
        for i in 0..len / 2 {
            values[i] = values[2 * i] + values[2 * i + 1];
        }
        if len % 2 == 1 {
            values[half - 1] = values[len - 1];
        }
        len = half;
    }
    values[0]
}

/// Mean of `f` over the product of shifted circles with `nodes` equispaced
/// points per axis, summed chunkwise in a deterministic tree.
fn torus_mean<F>(f: &F, rank: usize, radii: &[f64], nodes: usize, mode: ExecMode) -> (Complex64, usize)
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let total: usize = nodes.pow(rank as u32);
    if rank == 0 {
        return (f(&[]), 0);
    }
    let unit: Vec<Complex64> = (0..nodes)
        .map(|t| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / nodes as f64))
        .collect();
    let half_step = std::f64::consts::PI / (7.0 * nodes as f64);

    let eval_node = |flat: usize| -> (Complex64, usize) {
        let mut point = Vec::with_capacity(rank);
        let mut rest = flat;
        for r in radii.iter().take(rank) {
            let t = rest % nodes;
            rest /= nodes;
            point.push(unit[t] * *r);
        }
        let v = f(&point);
        if v.is_finite() {
            (v, 0)
        } else {
            // Pole on a node: nudge every angle by a fraction of the step.
            let nudge = Complex64::from_polar(1.0, half_step);
            let moved: Vec<Complex64> = point.iter().map(|u| u * nudge).collect();
            (f(&moved), 1)
        }
    };

    const CHUNK: usize = 2048;
    let chunk_count = total.div_ceil(CHUNK);
    let eval_chunk = |chunk_idx: usize| -> (Complex64, usize) {
        let lo = chunk_idx * CHUNK;
        let hi = (lo + CHUNK).min(total);
        let mut vals: Vec<Complex64> = Vec::with_capacity(hi - lo);
        let mut perturbed = 0;
        for flat in lo..hi {
            let (v, p) = eval_node(flat);
            vals.push(v);
            perturbed += p;
        }
        (tree_sum(&mut vals), perturbed)
    };

    let chunks: Vec<(Complex64, usize)> = match mode {
        ExecMode::Sequential => (0..chunk_count).map(eval_chunk).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            (0..chunk_count).into_par_iter().map(eval_chunk).collect()
        }
    };
    let mut sums: Vec<Complex64> = chunks.iter().map(|(s, _)| *s).collect();
    let perturbed = chunks.iter().map(|(_, p)| p).sum();
    (tree_sum(&mut sums) / total as f64, perturbed)
}

/// Average an arbitrary evaluable function of the torus coordinates: the
/// constant Fourier coefficient on the chamber's contour, with the error
/// estimated by comparing against half the node count.
pub fn average_numeric_fn<F>(
    f: &F,
    rank: usize,
    chamber: &Chamber,
    nodes: usize,
    mode: ExecMode,
) -> Result<QuadratureResult, AveragingError>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    check_nodes(nodes)?;
    let radii = chamber.radii();
    let (fine, perturbed) = torus_mean(f, rank, &radii, nodes, mode);
    let (coarse, _) = torus_mean(f, rank, &radii, nodes / 2, mode);
    Ok(QuadratureResult {
        value: fine.re,
        error_estimate: (fine - coarse).norm() + fine.im.abs() + 1e-15,
        perturbed_nodes: perturbed,
    })
}

/// Fast path for rational functions: fold the radius into each term once and
/// walk the angle table per node.
pub fn average_numeric_rational(
    f: &LaurentRational,
    chamber: &Chamber,
    nodes: usize,
    mode: ExecMode,
) -> Result<QuadratureResult, AveragingError> {
    struct Prepared {
        terms: Vec<(f64, Vec<i64>)>,
    }
    impl Prepared {
        fn new(p: &LaurentPoly, radii: &[f64]) -> Self {
            Prepared {
                terms: p
                    .iter()
                    .map(|(e, c)| {
                        let mut scaled = rational_to_f64(c);
                        for (r, &k) in radii.iter().zip(e) {
                            scaled *= r.powi(k as i32);
                        }
                        (scaled, e.clone())
                    })
                    .collect(),
            }
        }
        /// Evaluate at the unit-modulus point given per axis.
        fn eval(&self, units: &[Complex64]) -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, e) in &self.terms {
                let mut term = Complex64::new(*c, 0.0);
                for (u, &k) in units.iter().zip(e) {
                    term *= u.powi(k as i32);
                }
                acc += term;
            }
            acc
        }
    }

    check_nodes(nodes)?;
    let rank = f.rank();
    let radii = chamber.radii();
    let num = Prepared::new(f.numerator(), &radii);
    let den = Prepared::new(f.denominator(), &radii);
    let g = move |units: &[Complex64]| num.eval(units) / den.eval(units);
    // Unit radii here: the prepared terms already carry the radius.
    let unit_chamber = Chamber::zero(rank);
    average_numeric_fn(&g, rank, &unit_chamber, nodes, mode)
}

/// Slow cross-check: the average as a large-box limit, sampling the
/// contributions along real coordinates in `[-extent, extent]^rank` on the
/// chamber's contour.
pub fn ball_average(
    values: &[LaurentRational],
    rank: usize,
    chamber: &Chamber,
    extent: f64,
    samples_per_axis: usize,
) -> f64 {
    if rank == 0 {
        let total: f64 = values
            .iter()
            .map(|v| v.eval_complex(&[]).re)
            .sum();
        return total;
    }
    let radii = chamber.radii();
    let mut acc = 0.0;
    let mut count = 0usize;
    let mut point = vec![Complex64::new(0.0, 0.0); rank];
    let mut idx = vec![0usize; rank];
    loop {
        for j in 0..rank {
            // Midpoint sampling keeps nodes off the poles at x = 0 mod 2 pi.
            let x = -extent + (idx[j] as f64 + 0.5) * (2.0 * extent / samples_per_axis as f64);
            point[j] = Complex64::from_polar(radii[j], -x / 2.0);
        }
        let mut v = 0.0;
        for f in values {
            v += f.eval_complex(&point).re;
        }
        if v.is_finite() {
            acc += v;
            count += 1;
        }
        // advance the grid index
        let mut j = 0;
        loop {
            if j == rank {
                let mean = acc / count.max(1) as f64;
                return mean;
            }
            idx[j] += 1;
            if idx[j] < samples_per_axis {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Chamber-averaged normal/auxiliary factor of one component, coefficient by
/// coefficient: the tangent genus is excluded. Finite for every valid
/// chamber even when the unshifted average diverges.
pub fn renormalized_class(
    component: &FixedComponent,
    operator: OperatorKind,
    rank: usize,
    chamber: &Chamber,
    nodes: usize,
    mode: ExecMode,
) -> Result<Vec<(RootMonomial, QuadratureResult)>, AveragingError> {
    let ctx = SeriesContext {
        rank,
        order: component.default_order(),
        nroots: component.roots().len(),
    };
    let wrap = |source| {
        AveragingError::Localization(LocalizationError::Characteristic {
            component: component.name.clone(),
            source,
        })
    };
    let mut series = ctx.one();
    match operator.normal() {
        NormalKind::Dirac => {
            for line in component.normal_lines() {
                series = series.mul(&dirac_factor(&ctx, &line.weight, line.root).map_err(wrap)?);
            }
        }
        NormalKind::Signature => {
            for line in component.normal_lines() {
                series =
                    series.mul(&signature_factor(&ctx, &line.weight, line.root).map_err(wrap)?);
            }
        }
        NormalKind::None => {}
    }
    if !component.aux_lines().is_empty() {
        let lines: Vec<CharacterLine> = component
            .aux_lines()
            .iter()
            .map(|l| CharacterLine {
                weight: l.weight.clone(),
                parity: l.parity,
                root: l.root,
            })
            .collect();
        series = series.mul(&chern_character(&ctx, &lines).map_err(wrap)?);
    }
    let mut out = Vec::new();
    for (monomial, coeff) in series.iter() {
        let avg = average_numeric_rational(coeff, chamber, nodes, mode)?;
        out.push((monomial.clone(), avg));
    }
    Ok(out)
}

/// Which engines to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Exact,
    Numeric,
    Both,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Engine::Exact => f.write_str("exact"),
            Engine::Numeric => f.write_str("numeric"),
            Engine::Both => f.write_str("both"),
        }
    }
}

/// Options for [`compute_index`]; `Default` picks the deterministic chamber,
/// rank-scaled node count, and dimension-derived truncation.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub chamber: Option<Chamber>,
    pub nodes: Option<usize>,
    pub truncation: Option<usize>,
    pub mode: Option<ExecMode>,
}

/// Assemble, integrate, and average a dataset.
///
/// Contributions are computed exactly per component and sorted by component
/// name before any reduction, so results are reproducible run to run. The
/// numeric engine requires a valid chamber; the exact engine ignores the
/// chamber entirely.
pub fn compute_index(
    dataset: &Dataset,
    engine: Engine,
    options: &RunOptions,
) -> Result<IndexReport, AveragingError> {
    let fatal: Vec<String> = dataset
        .validate()
        .into_iter()
        .filter(|d| d.fatal)
        .map(|d| match d.component {
            Some(c) => format!("{}: {}", c, d.message),
            None => d.message,
        })
        .collect();
    if !fatal.is_empty() {
        return Err(AveragingError::InvalidDataset(fatal.join("; ")));
    }

    let chamber = options
        .chamber
        .clone()
        .unwrap_or_else(|| default_chamber(dataset));
    let nodes = options.nodes.unwrap_or_else(|| default_nodes(dataset.rank));
    let mode = options.mode.unwrap_or_default();
    let run_numeric = matches!(engine, Engine::Numeric | Engine::Both);
    let run_exact = matches!(engine, Engine::Exact | Engine::Both);

    if run_numeric {
        check_nodes(nodes)?;
        let violations = chamber_validate(&chamber, dataset);
        if !violations.is_empty() {
            return Err(AveragingError::ChamberViolation(violations));
        }
    }

    let mut contribs: Vec<Contribution> = contributions(dataset, options.truncation)?;
    contribs.sort_by(|a, b| a.name.cmp(&b.name));

    let exact = if run_exact {
        let values: Vec<LaurentRational> = contribs.iter().map(|c| c.value.clone()).collect();
        Some(match average_exact(&values)? {
            Ok(avg) => ExactOutcome::Value {
                index: avg.value.to_string(),
                certificate: avg.certificate.to_string(),
            },
            Err(fail) => ExactOutcome::SingularityNotCancelled {
                surviving_factors: fail.surviving_factors.to_string(),
            },
        })
    } else {
        None
    };

    let mut component_reports = Vec::with_capacity(contribs.len());
    let mut numeric = None;
    if run_numeric {
        let per_component: Result<Vec<QuadratureResult>, AveragingError> = {
            let run = |c: &Contribution| average_numeric_rational(&c.value, &chamber, nodes, mode);
            contribs.iter().map(run).collect()
        };
        let per_component = per_component?;
        let mut total = 0.0;
        let mut err = 0.0;
        let mut perturbed = 0;
        for (c, q) in contribs.iter().zip(&per_component) {
            component_reports.push(ComponentReport {
                name: c.name.clone(),
                exact: c.value.to_string(),
                numeric: Some(q.value),
            });
            total += q.value;
            err += q.error_estimate;
            perturbed += q.perturbed_nodes;
        }
        numeric = Some(NumericOutcome {
            index: total,
            error_estimate: err,
            perturbed_nodes: perturbed,
        });
    } else {
        for c in &contribs {
            component_reports.push(ComponentReport {
                name: c.name.clone(),
                exact: c.value.to_string(),
                numeric: None,
            });
        }
    }

    Ok(IndexReport {
        operator: dataset.operator.to_string(),
        engine: engine.to_string(),
        rank: dataset.rank,
        chamber: chamber.coordinate_strings(),
        nodes,
        exact,
        numeric,
        components: component_reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::builtin_dataset;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn poly(terms: &[(i64, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(1, terms.iter().map(|&(e, n, d)| (vec![e], rat(n, d))))
    }

    fn sign_factor_pair() -> (LaurentRational, LaurentRational) {
        // (u^-1 + u)/(u^-1 - u) and its weight-reflected negative.
        let north = LaurentRational::new(
            poly(&[(-1, 1, 1), (1, 1, 1)]),
            poly(&[(-1, 1, 1), (1, -1, 1)]),
        )
        .unwrap();
        let south = -&north;
        (north, south)
    }

    #[test]
    fn exact_average_of_cancelling_pair() {
        let d1 = LaurentRational::new(LaurentPoly::one(1), poly(&[(-1, 1, 1), (1, -1, 1)])).unwrap();
        let d2 = -&d1;
        let avg = average_exact(&[d1, d2]).unwrap().unwrap();
        assert_eq!(avg.value, rat(0, 1));
        assert!(avg.certificate.is_zero());
    }

    #[test]
    fn exact_average_reads_constant_coefficient() {
        let f = LaurentRational::from_poly(poly(&[(0, 3, 1), (1, 2, 1), (-1, -2, 1)]));
        let avg = average_exact(&[f]).unwrap().unwrap();
        assert_eq!(avg.value, rat(3, 1));
    }

    #[test]
    fn exact_average_detects_surviving_pole() {
        // -((u^-1+u)/(u^-1-u))^2 alone: surviving denominator (1-u^2)^2.
        let g = LaurentRational::new(
            poly(&[(-1, 1, 1), (1, 1, 1)]),
            poly(&[(-1, 1, 1), (1, -1, 1)]),
        )
        .unwrap();
        let single = -&(&g * &g);
        let fail = average_exact(&[single]).unwrap().unwrap_err();
        let expect = poly(&[(0, 1, 1), (2, -1, 1)]).pow(2);
        assert_eq!(fail.surviving_factors, expect);
    }

    #[test]
    fn exact_average_is_linear_in_the_family() {
        let (north, south) = sign_factor_pair();
        let merged = average_exact(&[&north + &south]).unwrap().unwrap();
        let split = average_exact(&[north, south]).unwrap().unwrap();
        assert_eq!(merged.value, split.value);
    }

    #[test]
    fn quadrature_constant_term_inside_and_outside() {
        // (1 + u^2)/(1 - u^2): constant term 1 inside the unit circle,
        // -1 outside.
        let f = LaurentRational::new(poly(&[(0, 1, 1), (2, 1, 1)]), poly(&[(0, 1, 1), (2, -1, 1)]))
            .unwrap();
        let inside = average_numeric_rational(
            &f,
            &Chamber::new(vec![rat(-3, 10)]),
            512,
            ExecMode::Sequential,
        )
        .unwrap();
        assert!((inside.value - 1.0).abs() < 1e-12, "got {}", inside.value);
        let outside = average_numeric_rational(
            &f,
            &Chamber::new(vec![rat(3, 10)]),
            512,
            ExecMode::Sequential,
        )
        .unwrap();
        assert!((outside.value + 1.0).abs() < 1e-12, "got {}", outside.value);
    }

    #[test]
    fn quadrature_closure_and_rational_agree() {
        let f = LaurentRational::new(poly(&[(0, 1, 1), (2, 1, 1)]), poly(&[(0, 1, 1), (2, -1, 1)]))
            .unwrap();
        let chamber = Chamber::new(vec![rat(-1, 2)]);
        let a = average_numeric_rational(&f, &chamber, 256, ExecMode::Sequential).unwrap();
        let g = |u: &[Complex64]| f.eval_complex(u);
        let b = average_numeric_fn(&g, 1, &chamber, 256, ExecMode::Sequential).unwrap();
        assert!((a.value - b.value).abs() < 1e-13);
    }

    #[test]
    fn quadrature_of_cancelling_sum_is_zero() {
        let (north, south) = sign_factor_pair();
        let total = &north + &south;
        let q = average_numeric_rational(
            &total,
            &Chamber::new(vec![rat(2, 5)]),
            4096,
            ExecMode::Sequential,
        )
        .unwrap();
        assert!(q.value.abs() < 1e-12);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let (north, _) = sign_factor_pair();
        let chamber = Chamber::new(vec![rat(-2, 5)]);
        let seq = average_numeric_rational(&north, &chamber, 2048, ExecMode::Sequential).unwrap();
        let par = average_numeric_rational(&north, &chamber, 2048, ExecMode::Parallel).unwrap();
        assert_eq!(seq.value.to_bits(), par.value.to_bits());
    }

    #[test]
    fn node_count_is_validated() {
        let f = LaurentRational::one(1);
        assert!(matches!(
            average_numeric_rational(&f, &Chamber::zero(1), 100, ExecMode::Sequential),
            Err(AveragingError::BadNodeCount(100))
        ));
    }

    #[test]
    fn chamber_validation_cases() {
        let d = builtin_dataset("s2-rotation").unwrap();
        assert!(chamber_validate(&Chamber::new(vec![rat(3, 10)]), &d).is_empty());
        let violations = chamber_validate(&Chamber::zero(1), &d);
        assert_eq!(violations.len(), 2);

        // rank 2: weight (1,-1) is orthogonal to (1,1).
        let d2 = builtin_dataset("cp2-t2").unwrap();
        let q = Chamber::new(vec![rat(1, 1), rat(1, 1)]);
        let v = chamber_validate(&q, &d2);
        assert!(v.iter().any(|x| x.weight == Weight(vec![-1, 1]) || x.weight == Weight(vec![1, -1])));
    }

    #[test]
    fn default_chamber_avoids_hyperplanes() {
        for name in crate::localization::builtin_names() {
            let d = builtin_dataset(name).unwrap();
            let q = default_chamber(&d);
            assert!(chamber_validate(&q, &d).is_empty(), "{}", name);
        }
    }

    #[test]
    fn ball_average_matches_constant_coefficient() {
        let (north, south) = sign_factor_pair();
        let chamber = Chamber::zero(1);
        let avg = ball_average(
            &[north, south],
            1,
            &chamber,
            200.0 * 2.0 * std::f64::consts::PI,
            25600,
        );
        assert!(avg.abs() < 1e-2, "got {}", avg);
    }

    #[test]
    fn ball_average_single_factor_inside() {
        let (north, _) = sign_factor_pair();
        let chamber = Chamber::new(vec![rat(-3, 10)]);
        let avg = ball_average(
            &[north],
            1,
            &chamber,
            200.0 * 2.0 * std::f64::consts::PI,
            25600,
        );
        assert!((avg - 1.0).abs() < 1e-2, "got {}", avg);
    }

    #[test]
    fn renormalized_class_trivial_component() {
        use crate::localization::{ComponentSpec, FixedComponent};
        use std::collections::BTreeMap;
        let c = FixedComponent::from_spec(ComponentSpec {
            name: "pt".into(),
            dim: 0,
            tangent_roots: 0,
            normal_lines: vec![],
            aux_lines: vec![(Weight(vec![0]), 1, false)],
            sign: 1,
            intersection: BTreeMap::new(),
        });
        let out = renormalized_class(
            &c,
            OperatorKind::Dirac,
            1,
            &Chamber::new(vec![rat(3, 10)]),
            256,
            ExecMode::Sequential,
        )
        .unwrap();
        assert_eq!(out.len(), 1);
        assert!((out[0].1.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn renormalized_class_is_finite_on_divergent_point() {
        let d = builtin_dataset("example9-n11").unwrap();
        let out = renormalized_class(
            &d.components[0],
            d.operator,
            d.rank,
            &Chamber::new(vec![rat(3, 10)]),
            1024,
            ExecMode::Sequential,
        )
        .unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].1.value.is_finite());
    }

    #[test]
    fn renormalized_class_sphere_sum_vanishes_chamber_independently() {
        // Sum over both poles of the A-hat pairing with the averaged class:
        // at a point A-hat = 1, so the pairing is the degree-0 coefficient.
        let d = builtin_dataset("s2-rotation").unwrap();
        for q in [rat(3, 10), rat(-2, 5), rat(9, 10)] {
            let chamber = Chamber::new(vec![q]);
            let mut total = 0.0;
            for c in &d.components {
                let rows = renormalized_class(
                    c,
                    d.operator,
                    d.rank,
                    &chamber,
                    1024,
                    ExecMode::Sequential,
                )
                .unwrap();
                total += c.sign as f64 * rows[0].1.value;
            }
            assert!(total.abs() < 1e-10, "total {} at chamber {:?}", total, chamber);
        }
    }

    #[test]
    fn contributions_match_factor_parity_under_variable_inversion() {
        // Substituting u -> 1/u flips each normal factor's sign; the built-in
        // contributions (rootless normal lines) are odd or even accordingly.
        for name in crate::localization::builtin_names() {
            let d = builtin_dataset(name).unwrap();
            let contribs = contributions(&d, None).unwrap();
            for (c, contrib) in d.components.iter().zip(&contribs) {
                if c.normal_lines().iter().any(|l| l.root.is_some()) {
                    continue;
                }
                let normal_count = match d.operator {
                    OperatorKind::Euler => 0,
                    _ => c.normal_lines().len(),
                };
                let flipped = contrib.value.invert_variables();
                let expect = if normal_count % 2 == 0 {
                    contrib.value.clone()
                } else {
                    -&contrib.value
                };
                assert_eq!(flipped, expect, "{} / {}", name, c.name);
            }
        }
    }

    #[test]
    fn exact_average_rejects_mixed_ranks() {
        let a = LaurentRational::one(1);
        let b = LaurentRational::one(2);
        assert!(matches!(
            average_exact(&[a, b]),
            Err(AveragingError::MixedRanks)
        ));
    }

    #[test]
    fn compute_index_rejects_zero_chamber_for_numeric() {
        let d = builtin_dataset("example9-n11").unwrap();
        let opts = RunOptions {
            chamber: Some(Chamber::zero(1)),
            ..Default::default()
        };
        let err = compute_index(&d, Engine::Numeric, &opts).unwrap_err();
        assert!(matches!(err, AveragingError::ChamberViolation(_)));
    }

    #[test]
    fn both_engines_agree_within_the_reported_estimate() {
        for name in ["s2-rotation", "cp2-s1", "cp1xcp1-diag", "k3"] {
            let d = builtin_dataset(name).unwrap();
            let report = compute_index(&d, Engine::Both, &RunOptions::default()).unwrap();
            let exact: f64 = match report.exact.as_ref().unwrap() {
                ExactOutcome::Value { index, .. } => {
                    crate::algebra::to_f64(&index.parse::<BigRational>().unwrap())
                }
                other => panic!("{}: unexpected {:?}", name, other),
            };
            let numeric = report.numeric.as_ref().unwrap();
            assert!(
                (numeric.index - exact).abs() <= numeric.error_estimate,
                "{}: |{} - {}| > {}",
                name,
                numeric.index,
                exact,
                numeric.error_estimate
            );
        }
    }

    #[test]
    fn compute_index_empty_dataset_is_zero() {
        let d = Dataset {
            rank: 1,
            operator: OperatorKind::Dirac,
            components: vec![],
        };
        let report = compute_index(&d, Engine::Both, &RunOptions::default()).unwrap();
        match report.exact.unwrap() {
            ExactOutcome::Value { index, .. } => assert_eq!(index, "0"),
            other => panic!("unexpected outcome {:?}", other),
        }
        assert_eq!(report.numeric.unwrap().index, 0.0);
    }
}
