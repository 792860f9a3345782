//! Fixed-point data model and per-component assembly of the localized
//! integrand.
//!
//! A [`FixedComponent`] records one connected component of the deepest
//! stratum: its tangent Chern roots, the weighted normal lines, an optional
//! graded auxiliary bundle, an orientation sign, and the intersection
//! functional that stands in for integration over the component. A
//! [`Dataset`] bundles the torus rank, an operator choice, and the component
//! list.
//!
//! Intersection numbers are inputs, not derived from geometry; desk-scale
//! data uses zero-dimensional components or spaces whose top-degree pairings
//! are classical.

mod builtin;
mod schema;

pub use builtin::{builtin_dataset, builtin_names};
pub use schema::SchemaError;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::algebra::LaurentRational;
use crate::characteristic::{
    ahat_genus, chern_character, dirac_factor, euler_form, l_genus, signature_factor,
    CharacterLine, CharacteristicError, GenusKind, NormalKind, OperatorKind, SeriesContext,
    Weight,
};
use crate::series::{total_degree, RootKind, RootMonomial, RootSymbol, TruncatedSeries};

/// One weighted complex line of the normal bundle. `root` is the index of its
/// Chern root in the component's root universe, when the line carries one.
#[derive(Debug, Clone)]
pub struct NormalLine {
    pub weight: Weight,
    pub root: Option<usize>,
}

/// One line summand of the auxiliary bundle with its grading sign.
#[derive(Debug, Clone)]
pub struct AuxLine {
    pub weight: Weight,
    pub parity: i8,
    pub root: Option<usize>,
}

/// One connected component of the deepest stratum.
///
/// The root universe is laid out tangent roots first, then normal roots in
/// line order, then auxiliary roots; `roots()` exposes the symbols. The
/// intersection functional maps monomials of total degree `dim/2` to exact
/// rationals; for `dim = 0` it is the scalar 1 on the empty monomial.
#[derive(Debug, Clone)]
pub struct FixedComponent {
    pub name: String,
    pub dim: usize,
    pub sign: i8,
    tangent: Vec<usize>,
    normal: Vec<NormalLine>,
    aux: Vec<AuxLine>,
    intersection: BTreeMap<RootMonomial, BigRational>,
    roots: Vec<RootSymbol>,
}

/// Builder inputs for a component; weights line up with the dataset rank.
pub struct ComponentSpec {
    pub name: String,
    pub dim: usize,
    pub tangent_roots: usize,
    /// (weight, carries a Chern root)
    pub normal_lines: Vec<(Weight, bool)>,
    /// (weight, parity, carries a Chern root)
    pub aux_lines: Vec<(Weight, i8, bool)>,
    pub sign: i8,
    /// Keyed by root monomial over the component's universe.
    pub intersection: BTreeMap<RootMonomial, BigRational>,
}

impl FixedComponent {
    pub fn from_spec(spec: ComponentSpec) -> Self {
        let mut roots = Vec::new();
        let mut next_id = 0u32;
        let mut tangent = Vec::with_capacity(spec.tangent_roots);
        for _ in 0..spec.tangent_roots {
            tangent.push(roots.len());
            roots.push(RootSymbol {
                id: next_id,
                kind: RootKind::Tangent,
            });
            next_id += 1;
        }
        let mut normal = Vec::with_capacity(spec.normal_lines.len());
        for (weight, has_root) in spec.normal_lines {
            let root = if has_root {
                let idx = roots.len();
                roots.push(RootSymbol {
                    id: next_id,
                    kind: RootKind::Normal,
                });
                next_id += 1;
                Some(idx)
            } else {
                None
            };
            normal.push(NormalLine { weight, root });
        }
        let mut aux = Vec::with_capacity(spec.aux_lines.len());
        for (weight, parity, has_root) in spec.aux_lines {
            let root = if has_root {
                let idx = roots.len();
                roots.push(RootSymbol {
                    id: next_id,
                    kind: RootKind::Auxiliary,
                });
                next_id += 1;
                Some(idx)
            } else {
                None
            };
            aux.push(AuxLine {
                weight,
                parity,
                root,
            });
        }
        FixedComponent {
            name: spec.name,
            dim: spec.dim,
            sign: spec.sign,
            tangent,
            normal,
            aux,
            intersection: spec.intersection,
            roots,
        }
    }

    pub fn roots(&self) -> &[RootSymbol] {
        &self.roots
    }

    pub fn tangent_roots(&self) -> &[usize] {
        &self.tangent
    }

    pub fn normal_lines(&self) -> &[NormalLine] {
        &self.normal
    }

    pub fn aux_lines(&self) -> &[AuxLine] {
        &self.aux
    }

    pub fn intersection(&self) -> &BTreeMap<RootMonomial, BigRational> {
        &self.intersection
    }

    /// Default truncation order: half the component dimension.
    pub fn default_order(&self) -> usize {
        self.dim / 2
    }

    /// Display name ("t0", "n1", "a0", ...) of root index `i`, used by the
    /// dataset file format.
    pub fn root_name(&self, i: usize) -> String {
        let sym = self.roots[i];
        let prefix = match sym.kind {
            RootKind::Tangent => "t",
            RootKind::Normal => "n",
            RootKind::Auxiliary => "a",
        };
        let ordinal = self
            .roots
            .iter()
            .take(i)
            .filter(|r| r.kind == sym.kind)
            .count();
        format!("{}{}", prefix, ordinal)
    }

    /// Root index for a display name, if present.
    pub fn root_index(&self, name: &str) -> Option<usize> {
        (0..self.roots.len()).find(|&i| self.root_name(i) == name)
    }
}

/// The contribution of one component: the exact image of its assembled
/// integrand under the intersection functional.
#[derive(Debug, Clone, PartialEq)]
pub struct Contribution {
    pub name: String,
    pub value: LaurentRational,
}

/// Full input to the index engines.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub rank: usize,
    pub operator: OperatorKind,
    pub components: Vec<FixedComponent>,
}

#[derive(Debug, Error)]
pub enum LocalizationError {
    #[error("component {component}: {source}")]
    Characteristic {
        component: String,
        source: CharacteristicError,
    },
    #[error("component {component}: no intersection number for monomial {monomial}")]
    MissingIntersectionNumber { component: String, monomial: String },
    #[error("component {component}: odd dimension {dim}")]
    OddDimension { component: String, dim: usize },
    #[error("dataset schema: {0}")]
    Schema(#[from] SchemaError),
}

/// Everything the validator can flag. `fatal` diagnostics abort the engines;
/// the rest are warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub component: Option<String>,
    pub message: String,
    pub fatal: bool,
}

impl Dataset {
    pub fn with_operator(&self, operator: OperatorKind) -> Dataset {
        Dataset {
            rank: self.rank,
            operator,
            components: self.components.clone(),
        }
    }

    /// Structural checks: weight ranks and nonvanishing, dimension parity,
    /// intersection functional coverage, auxiliary character sanity.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for c in &self.components {
            if c.dim % 2 != 0 {
                out.push(Diagnostic {
                    component: Some(c.name.clone()),
                    message: format!("dimension {} is odd", c.dim),
                    fatal: true,
                });
            }
            for (q, line) in c.normal.iter().enumerate() {
                if line.weight.rank() != self.rank {
                    out.push(Diagnostic {
                        component: Some(c.name.clone()),
                        message: format!(
                            "normal line {} has weight rank {}, dataset rank {}",
                            q,
                            line.weight.rank(),
                            self.rank
                        ),
                        fatal: true,
                    });
                } else if line.weight.is_zero() {
                    out.push(Diagnostic {
                        component: Some(c.name.clone()),
                        message: format!(
                            "normal line {} has zero weight: it lies in n^perp for every chamber",
                            q
                        ),
                        fatal: true,
                    });
                }
            }
            for (q, line) in c.aux.iter().enumerate() {
                if line.weight.rank() != self.rank {
                    out.push(Diagnostic {
                        component: Some(c.name.clone()),
                        message: format!(
                            "aux line {} has weight rank {}, dataset rank {}",
                            q,
                            line.weight.rank(),
                            self.rank
                        ),
                        fatal: true,
                    });
                }
                if line.parity != 1 && line.parity != -1 {
                    out.push(Diagnostic {
                        component: Some(c.name.clone()),
                        message: format!("aux line {} parity must be +1 or -1", q),
                        fatal: true,
                    });
                }
            }
            if c.dim > 0 && c.intersection.is_empty() {
                out.push(Diagnostic {
                    component: Some(c.name.clone()),
                    message: format!(
                        "dimension {} component has an empty intersection functional",
                        c.dim
                    ),
                    fatal: true,
                });
            }
            if c.dim > 0 && 2 * c.tangent.len() != c.dim {
                out.push(Diagnostic {
                    component: Some(c.name.clone()),
                    message: format!(
                        "{} tangent roots for dimension {}; Euler-type integrands will vanish",
                        c.tangent.len(),
                        c.dim
                    ),
                    fatal: false,
                });
            }
            if !c.aux.is_empty() {
                let plus = c.aux.iter().filter(|l| l.parity > 0).count();
                let minus = c.aux.len() - plus;
                if plus == minus
                    && c.aux
                        .iter()
                        .filter(|l| l.parity > 0)
                        .map(|l| &l.weight)
                        .eq(c.aux.iter().filter(|l| l.parity < 0).map(|l| &l.weight))
                {
                    out.push(Diagnostic {
                        component: Some(c.name.clone()),
                        message: "auxiliary character vanishes identically".to_string(),
                        fatal: false,
                    });
                }
            }
        }
        out
    }

    pub fn has_fatal(&self) -> bool {
        self.validate().iter().any(|d| d.fatal)
    }

    /// All distinct normal weights, for chamber validation.
    pub fn normal_weights(&self) -> Vec<(&str, &Weight)> {
        let mut out = Vec::new();
        for c in &self.components {
            for line in &c.normal {
                out.push((c.name.as_str(), &line.weight));
            }
        }
        out
    }

    /// Parse the JSON dataset format.
    pub fn from_json(text: &str) -> Result<Dataset, LocalizationError> {
        Ok(schema::parse_dataset(text)?)
    }

    /// Emit the JSON dataset format.
    pub fn to_json(&self) -> String {
        schema::dataset_to_json(self)
    }
}

/// Assemble the localized integrand of one component:
/// `sign * (tangent genus) * (normal factors) * (auxiliary character)`.
///
/// Euler-type operators use no normal factor. An empty auxiliary bundle means
/// the untwisted operator (character 1); a nonempty list is summed as
/// `sum parity * u^{2w} e^{x}`.
pub fn assemble_integrand(
    component: &FixedComponent,
    operator: OperatorKind,
    rank: usize,
    order_override: Option<usize>,
) -> Result<TruncatedSeries, LocalizationError> {
    if !component.dim.is_multiple_of(2) {
        return Err(LocalizationError::OddDimension {
            component: component.name.clone(),
            dim: component.dim,
        });
    }
    let order = order_override
        .unwrap_or(0)
        .max(component.default_order());
    let ctx = SeriesContext {
        rank,
        order,
        nroots: component.roots.len(),
    };
    let wrap = |source: CharacteristicError| LocalizationError::Characteristic {
        component: component.name.clone(),
        source,
    };

    let mut acc = match operator.genus() {
        GenusKind::AHat => ahat_genus(&ctx, &component.tangent),
        GenusKind::LGenus => l_genus(&ctx, &component.tangent),
        GenusKind::EulerForm => euler_form(&ctx, &component.tangent),
    };

    match operator.normal() {
        NormalKind::Dirac => {
            for line in &component.normal {
                acc = acc.mul(&dirac_factor(&ctx, &line.weight, line.root).map_err(wrap)?);
            }
        }
        NormalKind::Signature => {
            for line in &component.normal {
                acc = acc.mul(&signature_factor(&ctx, &line.weight, line.root).map_err(wrap)?);
            }
        }
        NormalKind::None => {}
    }

    if !component.aux.is_empty() {
        let lines: Vec<CharacterLine> = component
            .aux
            .iter()
            .map(|l| CharacterLine {
                weight: l.weight.clone(),
                parity: l.parity,
                root: l.root,
            })
            .collect();
        acc = acc.mul(&chern_character(&ctx, &lines).map_err(wrap)?);
    }

    if component.sign < 0 {
        acc = acc.neg();
    }
    Ok(acc)
}

/// Integrate an assembled integrand over the component: apply the
/// intersection functional to the coefficients of top degree `dim/2`.
pub fn integrate_component(
    series: &TruncatedSeries,
    component: &FixedComponent,
) -> Result<Contribution, LocalizationError> {
    let top = component.dim / 2;
    let rank = series.rank();
    let mut value = LaurentRational::zero(rank);
    for (monomial, coeff) in series.iter() {
        if total_degree(monomial) != top {
            continue;
        }
        let pairing = if top == 0 {
            BigRational::one()
        } else {
            component
                .intersection
                .get(monomial)
                .cloned()
                .ok_or_else(|| LocalizationError::MissingIntersectionNumber {
                    component: component.name.clone(),
                    monomial: crate::series::format_root_monomial(monomial),
                })?
        };
        value = &value + &coeff.scale(&pairing);
    }
    Ok(Contribution {
        name: component.name.clone(),
        value,
    })
}

/// Assemble and integrate every component, in input order, choosing the
/// execution strategy explicitly. `parallel` is honored only when the
/// `parallel` feature is compiled in.
pub fn contributions_with_mode(
    dataset: &Dataset,
    order_override: Option<usize>,
    parallel: bool,
) -> Result<Vec<Contribution>, LocalizationError> {
    let compute = |c: &FixedComponent| -> Result<Contribution, LocalizationError> {
        let s = assemble_integrand(c, dataset.operator, dataset.rank, order_override)?;
        integrate_component(&s, c)
    };
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return dataset.components.par_iter().map(compute).collect();
    }
    let _ = parallel;
    dataset.components.iter().map(compute).collect()
}

/// Assemble and integrate every component, in input order.
pub fn contributions(
    dataset: &Dataset,
    order_override: Option<usize>,
) -> Result<Vec<Contribution>, LocalizationError> {
    contributions_with_mode(dataset, order_override, cfg!(feature = "parallel"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LaurentPoly;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn point(name: &str, weights: &[i64], sign: i8) -> ComponentSpec {
        ComponentSpec {
            name: name.to_string(),
            dim: 0,
            tangent_roots: 0,
            normal_lines: weights.iter().map(|&w| (Weight(vec![w]), false)).collect(),
            aux_lines: vec![],
            sign,
            intersection: BTreeMap::new(),
        }
    }

    #[test]
    fn dirac_point_contribution() {
        // One normal line of weight 1 at a point: 1/(u^-1 - u).
        let c = FixedComponent::from_spec(point("p", &[1], 1));
        let s = assemble_integrand(&c, OperatorKind::Dirac, 1, None).unwrap();
        let contrib = integrate_component(&s, &c).unwrap();
        let expect = LaurentRational::new(
            LaurentPoly::one(1),
            LaurentPoly::from_terms(1, [(vec![-1], rat(1, 1)), (vec![1], rat(-1, 1))]),
        )
        .unwrap();
        assert_eq!(contrib.value, expect);
    }

    #[test]
    fn euler_point_is_one() {
        let c = FixedComponent::from_spec(point("p", &[1, 2], 1));
        let s = assemble_integrand(&c, OperatorKind::Euler, 1, None).unwrap();
        let contrib = integrate_component(&s, &c).unwrap();
        assert!(contrib.value.is_one());
    }

    #[test]
    fn signature_point_weights_one_one() {
        // Two unit weights with negative orientation sign:
        // -((u^-1 + u)/(u^-1 - u))^2.
        let c = FixedComponent::from_spec(point("p", &[1, 1], -1));
        let s = assemble_integrand(&c, OperatorKind::Signature, 1, None).unwrap();
        let contrib = integrate_component(&s, &c).unwrap();
        let g = LaurentRational::new(
            LaurentPoly::from_terms(1, [(vec![-1], rat(1, 1)), (vec![1], rat(1, 1))]),
            LaurentPoly::from_terms(1, [(vec![-1], rat(1, 1)), (vec![1], rat(-1, 1))]),
        )
        .unwrap();
        let expect = -&(&g * &g);
        assert_eq!(contrib.value, expect);
    }

    #[test]
    fn integrate_picks_top_degree() {
        // dim 2, series a + b x with x -> 1 integrates to b.
        let spec = ComponentSpec {
            name: "cp1".into(),
            dim: 2,
            tangent_roots: 1,
            normal_lines: vec![],
            aux_lines: vec![],
            sign: 1,
            intersection: BTreeMap::from([(vec![1], rat(1, 1))]),
        };
        let c = FixedComponent::from_spec(spec);
        let a = LaurentRational::constant(1, rat(5, 1));
        let b = LaurentRational::constant(1, rat(7, 1));
        let s = TruncatedSeries::constant(1, 1, 1, a)
            .add(&TruncatedSeries::root(1, 1, 1, 0).scale(&b.clone()));
        let contrib = integrate_component(&s, &c).unwrap();
        assert_eq!(contrib.value, b);
    }

    #[test]
    fn integrate_is_linear() {
        let spec = ComponentSpec {
            name: "z".into(),
            dim: 2,
            tangent_roots: 1,
            normal_lines: vec![],
            aux_lines: vec![],
            sign: 1,
            intersection: BTreeMap::from([(vec![1], rat(3, 1))]),
        };
        let c = FixedComponent::from_spec(spec);
        let s1 = TruncatedSeries::root(1, 1, 1, 0)
            .scale(&LaurentRational::constant(1, rat(2, 1)));
        let s2 = TruncatedSeries::root(1, 1, 1, 0)
            .scale(&LaurentRational::constant(1, rat(-1, 2)));
        let lhs = integrate_component(&s1.add(&s2), &c).unwrap().value;
        let rhs = &integrate_component(&s1, &c).unwrap().value
            + &integrate_component(&s2, &c).unwrap().value;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_sphere_from_tangent_root() {
        // CP^1 with tangent root x and functional x -> 2 integrates e to 2.
        let spec = ComponentSpec {
            name: "cp1".into(),
            dim: 2,
            tangent_roots: 1,
            normal_lines: vec![],
            aux_lines: vec![],
            sign: 1,
            intersection: BTreeMap::from([(vec![1], rat(2, 1))]),
        };
        let c = FixedComponent::from_spec(spec);
        let s = assemble_integrand(&c, OperatorKind::Euler, 1, None).unwrap();
        let v = integrate_component(&s, &c).unwrap().value;
        assert_eq!(v, LaurentRational::constant(1, rat(2, 1)));
    }

    #[test]
    fn missing_intersection_number_is_reported() {
        let spec = ComponentSpec {
            name: "z".into(),
            dim: 2,
            tangent_roots: 1,
            normal_lines: vec![],
            aux_lines: vec![],
            sign: 1,
            intersection: BTreeMap::new(),
        };
        let c = FixedComponent::from_spec(spec);
        let s = TruncatedSeries::root(1, 1, 1, 0);
        assert!(matches!(
            integrate_component(&s, &c),
            Err(LocalizationError::MissingIntersectionNumber { .. })
        ));
    }

    #[test]
    fn validate_flags_zero_weight_and_gaps() {
        let bad = Dataset {
            rank: 1,
            operator: OperatorKind::Dirac,
            components: vec![FixedComponent::from_spec(point("p", &[0], 1))],
        };
        let diags = bad.validate();
        assert!(diags.iter().any(|d| d.fatal && d.message.contains("zero weight")));

        let gap = Dataset {
            rank: 1,
            operator: OperatorKind::Dirac,
            components: vec![FixedComponent::from_spec(ComponentSpec {
                name: "z".into(),
                dim: 2,
                tangent_roots: 1,
                normal_lines: vec![],
                aux_lines: vec![],
                sign: 1,
                intersection: BTreeMap::new(),
            })],
        };
        assert!(gap.validate().iter().any(|d| d.fatal));
    }

    #[test]
    fn valid_builtin_has_no_diagnostics() {
        let d = builtin_dataset("s2-rotation").unwrap();
        assert!(d.validate().is_empty());
    }

    #[test]
    fn root_names_follow_kind_order() {
        let spec = ComponentSpec {
            name: "z".into(),
            dim: 4,
            tangent_roots: 2,
            normal_lines: vec![(Weight(vec![1]), true), (Weight(vec![2]), false)],
            aux_lines: vec![(Weight(vec![0]), 1, true)],
            sign: 1,
            intersection: BTreeMap::new(),
        };
        let c = FixedComponent::from_spec(spec);
        assert_eq!(c.root_name(0), "t0");
        assert_eq!(c.root_name(1), "t1");
        assert_eq!(c.root_name(2), "n0");
        assert_eq!(c.root_name(3), "a0");
        assert_eq!(c.root_index("n0"), Some(2));
        assert_eq!(c.root_index("n1"), None);
    }
}
