//! Regression checks shared by the CLI `selftest` command and the
//! acceptance test suite. Each check pins its tolerances in code and returns
//! a short success summary or a failure description naming the broken
//! invariant.

use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{LaurentPoly, LaurentRational};
use crate::averaging::{
    average_exact, ball_average, chamber_validate, compute_index, Chamber, Engine, RunOptions,
};
use crate::characteristic::{
    dirac_factor, l_genus, signature_factor, OperatorKind, SeriesContext, Weight,
};
use crate::localization::{builtin_dataset, builtin_names, contributions, Contribution, Dataset};
use crate::report::ExactOutcome;

type CheckResult = Result<String, String>;

pub struct Check {
    pub name: &'static str,
    pub detail: &'static str,
    pub run: fn() -> CheckResult,
}

/// All acceptance checks, in order.
pub fn all_checks() -> Vec<Check> {
    vec![
        Check {
            name: "euler-specialization",
            detail: "Euler runs count fixed points exactly: cp2-t2 -> 3, s2-rotation -> 2, cp1xcp1-t2 -> 4",
            run: check_euler_specialization,
        },
        Check {
            name: "dirac-vanishing",
            detail: "spinor index is exactly 0 for rank >= 1 untwisted data; rank 0 returns the A-hat number",
            run: check_dirac_vanishing,
        },
        Check {
            name: "signature-specialization",
            detail: "numeric signature at 4096 nodes: cp2-s1 -> 1, cp1xcp1-diag -> 0, within 1e-9",
            run: check_signature_specialization,
        },
        Check {
            name: "per-term-divergence",
            detail: "example9-n11 exact run reports an uncancelled (u^-1 - u)^2 pole; zero chamber is rejected",
            run: check_per_term_divergence,
        },
        Check {
            name: "chamber-invariance",
            detail: "totals agree across 5 random chambers within 1e-9; per-component values move by > 1e-3",
            run: check_chamber_invariance,
        },
        Check {
            name: "exact-numeric-cross",
            detail: "wherever the exact engine succeeds, quadrature at 4096 nodes agrees within 1e-9",
            run: check_exact_numeric_cross,
        },
        Check {
            name: "lambda-scaling",
            detail: "per-term magnitudes under chamber scaling: spinor terms shrink to < 1e-3, signature terms reach the oriented L-genus limits within 1e-6",
            run: check_lambda_scaling,
        },
        Check {
            name: "algebra-invariants",
            detail: "200 randomized cases each: ring axioms, reduction idempotence, series identities, factor parity",
            run: check_algebra_invariants,
        },
        Check {
            name: "ball-average",
            detail: "direct box averaging at extent 200*2pi matches the constant coefficient within 1e-2",
            run: check_ball_average,
        },
    ]
}

/// Run checks whose name contains `filter` (all when `None`). Returns
/// (passed, failed, log lines).
pub fn run_filtered(filter: Option<&str>) -> (usize, usize, Vec<String>) {
    let mut passed = 0;
    let mut failed = 0;
    let mut lines = Vec::new();
    for check in all_checks() {
        if let Some(f) = filter {
            if !check.name.contains(f) {
                continue;
            }
        }
        match (check.run)() {
            Ok(msg) => {
                passed += 1;
                lines.push(format!("PASS {}: {}", check.name, msg));
            }
            Err(msg) => {
                failed += 1;
                lines.push(format!("FAIL {}: {}", check.name, msg));
            }
        }
    }
    (passed, failed, lines)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn exact_value(dataset: &Dataset, engine_label: &str) -> Result<BigRational, String> {
    let report = compute_index(dataset, Engine::Exact, &RunOptions::default())
        .map_err(|e| format!("{}: {}", engine_label, e))?;
    match report.exact {
        Some(ExactOutcome::Value { index, .. }) => index
            .parse::<BigRational>()
            .map_err(|e| format!("{}: bad rational {:?}: {}", engine_label, index, e)),
        Some(ExactOutcome::SingularityNotCancelled { surviving_factors }) => Err(format!(
            "{}: singularity not cancelled, surviving {}",
            engine_label, surviving_factors
        )),
        None => Err(format!("{}: exact engine did not run", engine_label)),
    }
}

fn expect_exact(name: &str, operator: Option<OperatorKind>, want: i64) -> Result<(), String> {
    let mut d = builtin_dataset(name).ok_or_else(|| format!("unknown builtin {}", name))?;
    if let Some(op) = operator {
        d = d.with_operator(op);
    }
    let got = exact_value(&d, name)?;
    if got != rat(want, 1) {
        return Err(format!("{}: expected exactly {}, got {}", name, want, got));
    }
    Ok(())
}

// Criterion 1: Euler runs count fixed points exactly, and products multiply.
fn check_euler_specialization() -> CheckResult {
    expect_exact("cp2-t2", Some(OperatorKind::Euler), 3)?;
    expect_exact("s2-rotation", Some(OperatorKind::Euler), 2)?;
    expect_exact("cp1xcp1-t2", Some(OperatorKind::Euler), 4)?;
    Ok("cp2-t2 = 3, s2-rotation = 2, cp1xcp1-t2 = 4 (exact)".into())
}

/// Builtins that model spin manifolds with a trivial auxiliary bundle, so
/// the untwisted spinor index is defined and must vanish for rank >= 1.
const SPIN_BUILTINS: &[&str] = &[
    "s2-rotation",
    "s4-rotation",
    "s6-rotation",
    "cp1xcp1-t2",
    "cp1xcp1-diag",
    "example9-augmented",
];

// Criterion 2: spinor vanishing for rank >= 1; rank 0 reduces to the
// A-hat number carried by the intersection functional.
fn check_dirac_vanishing() -> CheckResult {
    for name in SPIN_BUILTINS {
        expect_exact(name, Some(OperatorKind::Dirac), 0)?;
    }
    expect_exact("k3", None, 2)?;
    Ok(format!(
        "{} rank >= 1 datasets vanish exactly; k3 (rank 0) gives 2",
        SPIN_BUILTINS.len()
    ))
}

fn numeric_total(
    dataset: &Dataset,
    chamber: Option<Chamber>,
    nodes: usize,
) -> Result<f64, String> {
    let opts = RunOptions {
        chamber,
        nodes: Some(nodes),
        ..Default::default()
    };
    let report =
        compute_index(dataset, Engine::Numeric, &opts).map_err(|e| format!("numeric: {}", e))?;
    Ok(report.numeric.expect("numeric engine ran").index)
}

// Criterion 3: signature specializations through the numeric engine.
fn check_signature_specialization() -> CheckResult {
    let cp2 = builtin_dataset("cp2-s1").unwrap();
    let total = numeric_total(&cp2, None, 4096)?;
    if (total - 1.0).abs() > 1e-9 {
        return Err(format!("cp2-s1 signature: expected 1 within 1e-9, got {}", total));
    }
    let prod = builtin_dataset("cp1xcp1-diag").unwrap();
    let total2 = numeric_total(&prod, None, 4096)?;
    if total2.abs() > 1e-9 {
        return Err(format!(
            "cp1xcp1-diag signature: expected 0 within 1e-9, got {}",
            total2
        ));
    }
    Ok(format!(
        "cp2-s1 = {:.2e}-close to 1, cp1xcp1-diag = {:.2e} (N = 4096)",
        (total - 1.0).abs(),
        total2.abs()
    ))
}

// Criterion 4: a single fixed point with weights (1,1) diverges: the exact
// engine must refuse with a certificate divisible by (u^-1 - u)^2, and the
// zero chamber must be rejected for the numeric engine.
fn check_per_term_divergence() -> CheckResult {
    let d = builtin_dataset("example9-n11").unwrap();
    let report = compute_index(&d, Engine::Exact, &RunOptions::default())
        .map_err(|e| format!("exact run: {}", e))?;
    let factors = match report.exact {
        Some(ExactOutcome::SingularityNotCancelled { surviving_factors }) => surviving_factors,
        other => return Err(format!("expected SingularityNotCancelled, got {:?}", other)),
    };
    // (u^-1 - u)^2 normalizes to (1 - u^2)^2; divisibility is up to units.
    let survivor = {
        let contribs = contributions(&d, None).map_err(|e| e.to_string())?;
        let mut total = LaurentRational::zero(1);
        for c in &contribs {
            total = &total + &c.value;
        }
        total.try_polynomialize().unwrap_err().surviving_denominator
    };
    let pole = LaurentPoly::from_terms(1, [(vec![-1], rat(1, 1)), (vec![1], rat(-1, 1))]).pow(2);
    if !survivor.divisible_by(&pole) {
        return Err(format!(
            "certificate {} is not divisible by (u^-1 - u)^2",
            survivor
        ));
    }
    if factors != survivor.to_string() {
        return Err("report certificate does not match the surviving denominator".into());
    }
    let violations = chamber_validate(&Chamber::zero(1), &d);
    if violations.is_empty() {
        return Err("zero chamber was not rejected".into());
    }
    Ok(format!(
        "surviving denominator {} divisible by (u^-1 - u)^2; zero chamber rejected",
        factors
    ))
}

/// Deterministic random chambers for a dataset, alternating the sign of the
/// leading coordinate so rank-1 data sees both contour sides.
fn random_chambers(rng: &mut ChaCha8Rng, dataset: &Dataset, count: usize) -> Vec<Chamber> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let values: Vec<f64> = (0..dataset.rank)
            .map(|j| {
                let magnitude = 0.1 + 1.9 * rng.gen::<f64>();
                let sign = if (out.len() + j) % 2 == 0 { 1.0 } else { -1.0 };
                sign * magnitude
            })
            .collect();
        let chamber = Chamber::from_f64(&values);
        if chamber_validate(&chamber, dataset).is_empty() {
            out.push(chamber);
        }
    }
    out
}

fn per_component_numeric(
    dataset: &Dataset,
    chamber: &Chamber,
    nodes: usize,
) -> Result<Vec<(String, f64)>, String> {
    let opts = RunOptions {
        chamber: Some(chamber.clone()),
        nodes: Some(nodes),
        ..Default::default()
    };
    let report =
        compute_index(dataset, Engine::Numeric, &opts).map_err(|e| format!("numeric: {}", e))?;
    Ok(report
        .components
        .into_iter()
        .map(|c| (c.name, c.numeric.expect("numeric ran")))
        .collect())
}

// Criterion 5: the total is chamber-invariant while individual components
// are not.
fn check_chamber_invariance() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cab1e);
    let mut max_spread_total = 0.0f64;
    for name in builtin_names() {
        let d = builtin_dataset(name).unwrap();
        if d.rank == 0 {
            continue;
        }
        let nodes = if d.rank == 1 { 4096 } else { 256 };
        let chambers = random_chambers(&mut rng, &d, 5);
        let mut totals = Vec::new();
        for chamber in &chambers {
            totals.push(numeric_total(&d, Some(chamber.clone()), nodes)?);
        }
        let spread = totals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - totals.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread > 1e-9 {
            return Err(format!(
                "{}: totals move by {} across chambers {:?}",
                name, spread, totals
            ));
        }
        max_spread_total = max_spread_total.max(spread);
    }

    // Per-component chamber dependence on the augmented configuration.
    let aug = builtin_dataset("example9-augmented").unwrap();
    let chambers = random_chambers(&mut rng, &aug, 5);
    let mut component_spread = 0.0f64;
    let mut per_chamber: Vec<Vec<(String, f64)>> = Vec::new();
    for chamber in &chambers {
        per_chamber.push(per_component_numeric(&aug, chamber, 4096)?);
    }
    for i in 0..per_chamber[0].len() {
        let vals: Vec<f64> = per_chamber.iter().map(|pc| pc[i].1).collect();
        let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - vals.iter().cloned().fold(f64::INFINITY, f64::min);
        component_spread = component_spread.max(spread);
    }
    if component_spread <= 1e-3 {
        return Err(format!(
            "example9-augmented: no per-component value moved by more than 1e-3 (max spread {})",
            component_spread
        ));
    }
    Ok(format!(
        "totals stable to {:.1e}; example9-augmented per-component spread {:.2}",
        max_spread_total, component_spread
    ))
}

/// (dataset, operator override) runs whose exact average succeeds.
fn exact_success_runs() -> Vec<(&'static str, Option<OperatorKind>)> {
    let mut runs: Vec<(&'static str, Option<OperatorKind>)> = vec![
        ("s2-rotation", None),
        ("s4-rotation", None),
        ("s6-rotation", None),
        ("cp2-t2", None),
        ("cp2-s1", None),
        ("cp1xcp1-t2", None),
        ("cp1xcp1-diag", None),
        ("example9-augmented", None),
        ("k3", None),
    ];
    for name in SPIN_BUILTINS {
        runs.push((name, Some(OperatorKind::Dirac)));
    }
    runs
}

// Criterion 6: exact and numeric engines agree wherever exact succeeds.
fn check_exact_numeric_cross() -> CheckResult {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (name, op) in exact_success_runs() {
        let mut d = builtin_dataset(name).unwrap();
        if let Some(op) = op {
            d = d.with_operator(op);
        }
        let exact = exact_value(&d, name)?;
        let exact_f = crate::algebra::to_f64(&exact);
        let numeric = numeric_total(&d, None, 4096)?;
        let diff = (numeric - exact_f).abs();
        if diff > 1e-9 {
            return Err(format!(
                "{} ({:?}): |numeric - exact| = {} > 1e-9",
                name, op, diff
            ));
        }
        worst = worst.max(diff);
        count += 1;
    }
    Ok(format!("{} runs agree within {:.1e} (N = 4096)", count, worst))
}

/// Predicted large-chamber limit of one signature contribution: the
/// orientation sign times the product over normal lines of -sgn(q . n),
/// times the L-genus integral of the component.
fn signature_limit(dataset: &Dataset, chamber: &Chamber) -> Vec<f64> {
    dataset
        .components
        .iter()
        .map(|c| {
            let mut sign = c.sign as f64;
            for line in c.normal_lines() {
                let dot: f64 = chamber
                    .values()
                    .iter()
                    .zip(&line.weight.0)
                    .map(|(q, &n)| crate::algebra::to_f64(q) * n as f64)
                    .sum();
                sign *= -dot.signum();
            }
            let ctx = SeriesContext {
                rank: dataset.rank,
                order: c.default_order(),
                nroots: c.roots().len(),
            };
            let l = l_genus(&ctx, c.tangent_roots());
            let contribution = crate::localization::integrate_component(&l, c)
                .expect("L-genus integral")
                .value;
            let l_number = contribution
                .try_polynomialize()
                .expect("tangent-only series has constant coefficients")
                .constant_coefficient();
            sign * crate::algebra::to_f64(&l_number)
        })
        .collect()
}

// Criterion 7: chamber scaling. Spinor per-term magnitudes shrink with the
// scale; signature per-term values reach the oriented L-genus limits.
fn check_lambda_scaling() -> CheckResult {
    let base = Chamber::new(vec![rat(3, 10)]);

    let dirac = builtin_dataset("s4-rotation").unwrap();
    let mut magnitudes = Vec::new();
    for lambda in [1i64, 2, 4, 8] {
        let chamber = base.scale(lambda);
        let per = per_component_numeric(&dirac, &chamber, 4096)?;
        let max_mag = per.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
        magnitudes.push(max_mag);
    }
    for pair in magnitudes.windows(2) {
        if pair[1] > pair[0] + 1e-9 {
            return Err(format!(
                "spinor per-term magnitudes increased under scaling: {:?}",
                magnitudes
            ));
        }
    }
    if magnitudes[3] >= 1e-3 {
        return Err(format!(
            "spinor per-term magnitude at scale 8 is {} >= 1e-3",
            magnitudes[3]
        ));
    }

    let sig = builtin_dataset("cp2-s1").unwrap();
    let chamber16 = base.scale(16);
    let per = per_component_numeric(&sig, &chamber16, 4096)?;
    let limits = signature_limit(&sig, &chamber16);
    let mut worst = 0.0f64;
    for ((name, value), limit) in per.iter().zip(&limits) {
        let diff = (value - limit).abs();
        if diff > 1e-6 {
            return Err(format!(
                "{}: per-term value {} differs from L-genus limit {} by {}",
                name, value, limit, diff
            ));
        }
        worst = worst.max(diff);
    }
    Ok(format!(
        "spinor magnitudes {:?} non-increasing; signature terms within {:.1e} of limits",
        magnitudes, worst
    ))
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let n = rng.gen_range(-9i64..=9);
    let d = rng.gen_range(1i64..=9);
    rat(n, d)
}

fn random_poly(rng: &mut ChaCha8Rng, rank: usize, max_terms: usize) -> LaurentPoly {
    let nterms = rng.gen_range(0..=max_terms);
    let mut p = LaurentPoly::zero(rank);
    for _ in 0..nterms {
        let e: Vec<i64> = (0..rank).map(|_| rng.gen_range(-4i64..=4)).collect();
        p.add_term(e, random_rational(rng));
    }
    p
}

fn random_nonzero_poly(rng: &mut ChaCha8Rng, rank: usize, max_terms: usize) -> LaurentPoly {
    loop {
        let p = random_poly(rng, rank, max_terms);
        if !p.is_zero() {
            return p;
        }
    }
}

// Criterion 8: randomized exact algebra suites, 200 cases each.
fn check_algebra_invariants() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa1_5eed);
    let cases = 200;

    // Ring axioms.
    for i in 0..cases {
        let rank = 1 + (i % 2);
        let a = random_poly(&mut rng, rank, 5);
        let b = random_poly(&mut rng, rank, 5);
        let c = random_poly(&mut rng, rank, 5);
        let assoc_l = &(&a + &b) + &c;
        let assoc_r = &a + &(&b + &c);
        if assoc_l != assoc_r {
            return Err(format!("additive associativity failed on case {}", i));
        }
        let dist_l = &a * &(&b + &c);
        let dist_r = &(&a * &b) + &(&a * &c);
        if dist_l != dist_r {
            return Err(format!("distributivity failed on case {}", i));
        }
        if &a * &b != &b * &a {
            return Err(format!("commutativity failed on case {}", i));
        }
    }

    // Reduction: idempotent and value-preserving away from the poles.
    let eval_points = [rat(2, 1), rat(-2, 1), rat(3, 2), rat(-5, 3), rat(7, 4), rat(-9, 5)];
    for i in 0..cases {
        let num = random_poly(&mut rng, 1, 5);
        let den = random_nonzero_poly(&mut rng, 1, 4);
        let f = LaurentRational::new(num, den).expect("nonzero denominator");
        let g = f.reduce();
        if g != g.reduce() {
            return Err(format!("reduce not idempotent on case {}", i));
        }
        for pt in &eval_points {
            let point = [pt.clone()];
            match (f.eval_rational(&point), g.eval_rational(&point)) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        return Err(format!("reduce changed the value on case {}", i));
                    }
                }
                // A pole of the unreduced form may disappear after reduction.
                (Err(_), _) => {}
                (Ok(_), Err(_)) => {
                    return Err(format!("reduce introduced a pole on case {}", i));
                }
            }
        }
        // Coprimality: a second independent pass finds a unit gcd.
        let gcd = g
            .numerator()
            .gcd_univariate(g.denominator())
            .expect("rank 1");
        if !(gcd.is_one() || gcd.is_monomial() && gcd.nterms() == 1) {
            return Err(format!("numerator and denominator share {} on case {}", gcd, i));
        }
    }

    // Series identities.
    use crate::series::TruncatedSeries;
    for i in 0..cases {
        let order = 1 + (i % 3);
        let nroots = 1 + (i % 2);
        let mut positive = TruncatedSeries::zero(1, order, nroots);
        for r in 0..nroots {
            let c = LaurentRational::constant(1, random_rational(&mut rng));
            positive = positive.add(&TruncatedSeries::root(1, order, nroots, r).scale(&c));
        }
        let mut series = positive.add(&TruncatedSeries::one(1, order, nroots));

        let inv = series.inverse().map_err(|e| format!("inverse: {}", e))?;
        if series.mul(&inv) != TruncatedSeries::one(1, order, nroots) {
            return Err(format!("series inverse failed on case {}", i));
        }

        let e_pos = positive.exp().map_err(|e| format!("exp: {}", e))?;
        let e_neg = positive.neg().exp().map_err(|e| format!("exp: {}", e))?;
        if e_pos.mul(&e_neg) != TruncatedSeries::one(1, order, nroots) {
            return Err(format!("exp(a) exp(-a) != 1 on case {}", i));
        }

        series = positive.add(&TruncatedSeries::one(1, order, nroots));
        let root = series.sqrt().map_err(|e| format!("sqrt: {}", e))?;
        if root.mul(&root) != series {
            return Err(format!("sqrt(a)^2 != a on case {}", i));
        }
    }

    // Parity of the normal factors in the weight.
    for i in 0..cases {
        let rank = 1 + (i % 2);
        let w = loop {
            let cand: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3i64..=3)).collect();
            if cand.iter().any(|&x| x != 0) {
                break Weight(cand);
            }
        };
        let ctx = SeriesContext {
            rank,
            order: 0,
            nroots: 0,
        };
        let d_plus = dirac_factor(&ctx, &w, None).expect("nonzero weight");
        let d_minus = dirac_factor(&ctx, &w.negate(), None).expect("nonzero weight");
        if d_minus.constant_coefficient() != -&d_plus.constant_coefficient() {
            return Err(format!("spinor factor not odd in the weight on case {}", i));
        }
        let s_plus = signature_factor(&ctx, &w, None).expect("nonzero weight");
        let s_minus = signature_factor(&ctx, &w.negate(), None).expect("nonzero weight");
        if s_minus.constant_coefficient() != -&s_plus.constant_coefficient() {
            return Err(format!(
                "signature factor not odd in the weight on case {}",
                i
            ));
        }
    }

    Ok(format!("{} randomized cases per suite, all exact", cases))
}

// Criterion 9: the box-limit definition of the average agrees with the
// constant-coefficient evaluation on the two-pole signature sum.
fn check_ball_average() -> CheckResult {
    let d = builtin_dataset("s2-rotation")
        .unwrap()
        .with_operator(OperatorKind::Signature);
    let contribs: Vec<Contribution> =
        contributions(&d, None).map_err(|e| e.to_string())?;
    let values: Vec<LaurentRational> = contribs.iter().map(|c| c.value.clone()).collect();

    let expected = match average_exact(&values).map_err(|e| e.to_string())? {
        Ok(avg) => crate::algebra::to_f64(&avg.value),
        Err(f) => return Err(format!("unexpected surviving factors {}", f.surviving_factors)),
    };

    let extent = 200.0 * 2.0 * std::f64::consts::PI;
    let got = ball_average(&values, 1, &Chamber::zero(1), extent, 102_400);
    let diff = (got - expected).abs();
    if diff > 1e-2 {
        return Err(format!(
            "box average {} vs constant coefficient {} differ by {}",
            got, expected, diff
        ));
    }
    Ok(format!(
        "box average {:.3e} matches constant coefficient {} within 1e-2",
        got, expected
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::averaging::default_chamber;

    #[test]
    fn filter_selects_by_substring() {
        let (passed, failed, lines) = run_filtered(Some("euler"));
        assert_eq!(passed + failed, 1);
        assert!(lines[0].contains("euler-specialization"));
    }

    #[test]
    fn deliberate_sign_flip_is_caught() {
        // Breaking one orientation sign must break the spinor cancellation.
        let mut d = builtin_dataset("s2-rotation").unwrap();
        let mut flipped = d.components[1].clone();
        flipped.sign = -flipped.sign;
        d.components[1] = flipped;
        let report = compute_index(&d, Engine::Exact, &RunOptions::default()).unwrap();
        assert!(report.has_uncancelled_singularity());
    }

    #[test]
    fn exact_runs_listed_actually_succeed() {
        for (name, op) in exact_success_runs() {
            let mut d = builtin_dataset(name).unwrap();
            if let Some(op) = op {
                d = d.with_operator(op);
            }
            assert!(exact_value(&d, name).is_ok(), "{} {:?}", name, op);
        }
    }

    #[test]
    fn signature_limits_sum_to_the_index() {
        let d = builtin_dataset("cp2-s1").unwrap();
        let chamber = default_chamber(&d);
        let limits = signature_limit(&d, &chamber);
        let total: f64 = limits.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
