//! Built-in fixed-point datasets: rotation spheres, projective spaces with
//! linear torus actions, products, and the divergence/chamber demonstration
//! configurations. These double as oracles for the regression suite.

use std::collections::BTreeMap;

use num_rational::BigRational;

use super::{ComponentSpec, Dataset, FixedComponent};
use crate::characteristic::{OperatorKind, Weight};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn point(name: &str, weights: Vec<Vec<i64>>, sign: i8) -> ComponentSpec {
    ComponentSpec {
        name: name.to_string(),
        dim: 0,
        tangent_roots: 0,
        normal_lines: weights.into_iter().map(|w| (Weight(w), false)).collect(),
        aux_lines: vec![],
        sign,
        intersection: BTreeMap::new(),
    }
}

fn build(rank: usize, operator: OperatorKind, specs: Vec<ComponentSpec>) -> Dataset {
    Dataset {
        rank,
        operator,
        components: specs.into_iter().map(FixedComponent::from_spec).collect(),
    }
}

/// Rotation of the even sphere `S^{2m}` about an axis: two isolated fixed
/// points whose normal weights are all 1 (resp. all -1), with orientation
/// signs chosen so the spinor contributions cancel.
fn sphere_rotation(m: usize) -> Dataset {
    let north: Vec<Vec<i64>> = (0..m).map(|_| vec![1]).collect();
    let south: Vec<Vec<i64>> = (0..m).map(|_| vec![-1]).collect();
    let south_sign = if m.is_multiple_of(2) { -1 } else { 1 };
    build(
        1,
        OperatorKind::Dirac,
        vec![
            point("north", north, 1),
            point("south", south, south_sign),
        ],
    )
}

/// The projective plane with the standard 2-torus action: three fixed points
/// whose weights are differences of the action exponents.
fn cp2_torus() -> Dataset {
    build(
        2,
        OperatorKind::Euler,
        vec![
            point("p0", vec![vec![1, 0], vec![0, 1]], 1),
            point("p1", vec![vec![-1, 0], vec![-1, 1]], 1),
            point("p2", vec![vec![0, -1], vec![1, -1]], 1),
        ],
    )
}

/// Restriction of the `cp2-t2` action to the circle `(1, 2)` inside the
/// torus; runs the signature operator, whose total equals 1.
fn cp2_circle() -> Dataset {
    let project = |w: &[i64]| vec![w[0] + 2 * w[1]];
    let t2 = cp2_torus();
    let specs = t2
        .components
        .iter()
        .map(|c| {
            ComponentSpec {
                name: c.name.clone(),
                dim: 0,
                tangent_roots: 0,
                normal_lines: c
                    .normal_lines()
                    .iter()
                    .map(|l| (Weight(project(&l.weight.0)), false))
                    .collect(),
                aux_lines: vec![],
                sign: c.sign,
                intersection: BTreeMap::new(),
            }
        })
        .collect();
    build(1, OperatorKind::Signature, specs)
}

/// Product of two rotation spheres with the product torus action: four fixed
/// points, one weight per factor.
fn cp1_cp1_torus() -> Dataset {
    let mut specs = Vec::new();
    for (i, si) in [1i64, -1].iter().enumerate() {
        for (j, sj) in [1i64, -1].iter().enumerate() {
            specs.push(point(
                &format!("p{}{}", i, j),
                vec![vec![*si, 0], vec![0, *sj]],
                1,
            ));
        }
    }
    build(2, OperatorKind::Euler, specs)
}

/// The same product under the diagonal circle: weights `(±1, ±1)` collapse
/// to scalar pairs; the signature contributions cancel to 0.
fn cp1_cp1_diagonal() -> Dataset {
    let mut specs = Vec::new();
    for (i, si) in [1i64, -1].iter().enumerate() {
        for (j, sj) in [1i64, -1].iter().enumerate() {
            specs.push(point(&format!("p{}{}", i, j), vec![vec![*si], vec![*sj]], 1));
        }
    }
    build(1, OperatorKind::Signature, specs)
}

/// A single fixed point with normal weights (1, 1): its lone signature
/// contribution has an uncancelled pole on the unit circle, so the exact
/// average must refuse and the zero chamber is invalid.
fn isolated_double_weight() -> Dataset {
    build(
        1,
        OperatorKind::Signature,
        vec![point("z1", vec![vec![1], vec![1]], -1)],
    )
}

/// The divergent point of `example9-n11` together with a mirror point and a
/// pair of single-line points. The total cancels exactly in every chamber
/// while individual contributions depend on the chamber side.
fn isolated_double_weight_augmented() -> Dataset {
    build(
        1,
        OperatorKind::Signature,
        vec![
            point("z1", vec![vec![1], vec![1]], -1),
            point("z1-mirror", vec![vec![1], vec![1]], 1),
            point("north", vec![vec![1]], 1),
            point("south", vec![vec![-1]], 1),
        ],
    )
}

/// Rank-zero data: one four-dimensional component with two tangent roots and
/// the intersection numbers of a K3 surface, so the spinor index is the
/// A-hat number 2.
fn k3_surface() -> Dataset {
    let spec = ComponentSpec {
        name: "k3".to_string(),
        dim: 4,
        tangent_roots: 2,
        normal_lines: vec![],
        aux_lines: vec![],
        sign: 1,
        // x0^2 and x1^2 pair to -24 each (p1 = -48), x0 x1 to 0.
        intersection: BTreeMap::from([
            (vec![2, 0], rat(-24, 1)),
            (vec![0, 2], rat(-24, 1)),
            (vec![1, 1], rat(0, 1)),
        ]),
    };
    build(0, OperatorKind::Dirac, vec![spec])
}

const NAMES: &[&str] = &[
    "s2-rotation",
    "s4-rotation",
    "s6-rotation",
    "cp2-t2",
    "cp2-s1",
    "cp1xcp1-t2",
    "cp1xcp1-diag",
    "example9-n11",
    "example9-augmented",
    "k3",
];

/// Names accepted by [`builtin_dataset`].
pub fn builtin_names() -> &'static [&'static str] {
    NAMES
}

pub fn builtin_dataset(name: &str) -> Option<Dataset> {
    match name {
        "s2-rotation" => Some(sphere_rotation(1)),
        "s4-rotation" => Some(sphere_rotation(2)),
        "s6-rotation" => Some(sphere_rotation(3)),
        "cp2-t2" => Some(cp2_torus()),
        "cp2-s1" => Some(cp2_circle()),
        "cp1xcp1-t2" => Some(cp1_cp1_torus()),
        "cp1xcp1-diag" => Some(cp1_cp1_diagonal()),
        "example9-n11" => Some(isolated_double_weight()),
        "example9-augmented" => Some(isolated_double_weight_augmented()),
        "k3" => Some(k3_surface()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_validates_clean() {
        for name in builtin_names() {
            let d = builtin_dataset(name).unwrap();
            let fatal: Vec<_> = d.validate().into_iter().filter(|x| x.fatal).collect();
            assert!(fatal.is_empty(), "{}: {:?}", name, fatal);
        }
    }

    #[test]
    fn s2_rotation_shape() {
        let d = builtin_dataset("s2-rotation").unwrap();
        assert_eq!(d.rank, 1);
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.components[0].normal_lines()[0].weight, Weight(vec![1]));
        assert_eq!(d.components[1].normal_lines()[0].weight, Weight(vec![-1]));
        assert_eq!(d.components[0].sign, 1);
        assert_eq!(d.components[1].sign, 1);
    }

    #[test]
    fn cp2_t2_weight_pairs() {
        let d = builtin_dataset("cp2-t2").unwrap();
        let weights: Vec<Vec<Vec<i64>>> = d
            .components
            .iter()
            .map(|c| c.normal_lines().iter().map(|l| l.weight.0.clone()).collect())
            .collect();
        assert_eq!(
            weights,
            vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![-1, 0], vec![-1, 1]],
                vec![vec![0, -1], vec![1, -1]],
            ]
        );
    }

    #[test]
    fn example9_single_point() {
        let d = builtin_dataset("example9-n11").unwrap();
        assert_eq!(d.components.len(), 1);
        let c = &d.components[0];
        assert_eq!(c.dim, 0);
        assert_eq!(c.normal_lines().len(), 2);
        assert!(c.normal_lines().iter().all(|l| l.weight == Weight(vec![1])));
    }

    #[test]
    fn unknown_name_is_none() {
        assert!(builtin_dataset("nope").is_none());
    }
}
