//! Homology of principal circle bundles over tori in degrees 0, 1, 2.
//!
//! The homology of the total space splits against the base: degree-d classes
//! are spanned by lifts of base cycles annihilating the Euler class together
//! with fiber-direction images of degree-(d−1) base cycles. A fiber-direction
//! combination vanishes exactly when its base cycle pairs to zero with the
//! kernel of the wedge map e∧ one degree down, which is the vanishing rule
//! the relation subspace encodes.

use num::Zero;

use crate::error::{EngineError, Result};
use crate::forms::{
    annihilator, annihilator_of_vectors, tuple_basis, wedge_map_matrix, Cycle, Form,
};
use crate::label::{Label, Level};
use crate::ratmat::{Rational, Subspace};
use crate::space::LabeledSpace;

/// A principal circle bundle over Tⁿ, named by its level.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleBundle {
    n: usize,
    euler: Form,
    level: Level,
}

impl CircleBundle {
    pub fn new(n: usize, euler: Form, level: Level) -> Result<Self> {
        if euler.degree() != 2 || euler.n() != n {
            return Err(EngineError::InconsistentScenario {
                detail: format!(
                    "Euler class must be a degree-2 form on T{n}, got degree {} on T{}",
                    euler.degree(),
                    euler.n()
                ),
            });
        }
        if !euler.has_integer_coefficients() {
            return Err(EngineError::InconsistentScenario {
                detail: format!(
                    "Euler class {} has non-integer coefficients",
                    euler.render()
                ),
            });
        }
        Ok(CircleBundle { n, euler, level })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn euler(&self) -> &Form {
        &self.euler
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    /// Naming scheme for the generators this bundle produces; the sphere
    /// bundles over fixed tori reuse the computation with Z-style names.
    pub(crate) fn label_for_lift(&self, cycle: &Cycle) -> Label {
        match cycle.as_single_tuple() {
            Some(t) => Label::LevelTorus {
                indices: t,
                level: self.level.clone(),
            },
            None => Label::CombinationLift {
                cycle: cycle.clone(),
                level: self.level.clone(),
            },
        }
    }

    pub(crate) fn label_for_fiber(&self, index: Option<usize>) -> Label {
        Label::FiberClass {
            index,
            level: self.level.clone(),
        }
    }
}

/// Degree-d homology of the total space with named generators, d ≤ 2.
pub fn bundle_homology(bundle: &CircleBundle, degree: usize) -> Result<LabeledSpace> {
    bundle_homology_with_names(bundle, degree, &|c| bundle.label_for_lift(c), &|i| {
        bundle.label_for_fiber(i)
    })
}

/// The same computation with caller-chosen names for lifts and fiber classes.
pub(crate) fn bundle_homology_with_names(
    bundle: &CircleBundle,
    degree: usize,
    lift_name: &dyn Fn(&Cycle) -> Label,
    fiber_name: &dyn Fn(Option<usize>) -> Label,
) -> Result<LabeledSpace> {
    if degree > 2 {
        return Err(EngineError::UnsupportedDegree { degree });
    }
    let n = bundle.n;
    let e = &bundle.euler;

    // Lift part: base cycles of this degree annihilating im(e∧: Λ^{d-2}→Λ^d).
    // In degrees 0 and 1 that wedge map is from a negative degree, so the
    // whole degree-d homology of the base lifts.
    let lift_space = if degree == 2 {
        annihilator(std::slice::from_ref(e), n, 2)
    } else {
        Subspace::full(tuple_basis(n, degree).len())
    };
    let lift_cycles: Vec<Cycle> = lift_space
        .basis()
        .iter()
        .map(|v| Cycle::from_coefficients(n, degree, v))
        .collect();

    // Fiber part: one class per degree-(d−1) tuple; in degree 0 there is none.
    let fiber_tuples: Vec<Option<usize>> = match degree {
        0 => Vec::new(),
        1 => vec![None],
        2 => (1..=n).map(Some).collect(),
        _ => unreachable!(),
    };

    let mut labels: Vec<Label> = lift_cycles.iter().map(lift_name).collect();
    labels.extend(fiber_tuples.iter().map(|&i| fiber_name(i)));

    // Vanishing rule: Σ aᵢ·fiberᵢ = 0 iff Σ aᵢ·Lᵢ annihilates ker(e∧) one
    // degree down.
    let relations = if degree == 0 {
        Subspace::zero(labels.len())
    } else {
        let ker = wedge_map_matrix(e, degree - 1).kernel_basis();
        let ker_vectors: Vec<Vec<Rational>> = ker.basis().to_vec();
        let ann = annihilator_of_vectors(&ker_vectors, n, degree - 1);
        let offset = lift_cycles.len();
        let rows: Vec<Vec<Rational>> = ann
            .basis()
            .iter()
            .map(|v| {
                let mut row = vec![Rational::zero(); labels.len()];
                for (k, x) in v.iter().enumerate() {
                    row[offset + k] = x.clone();
                }
                row
            })
            .collect();
        Subspace::from_rows(labels.len(), rows)
    };

    Ok(LabeledSpace::new(degree, labels, relations))
}

/// Index pairs (i, j) whose base torus L_ij admits a lift into the total
/// space, i.e. pairs the Euler class to zero.
pub fn liftable_tori(bundle: &CircleBundle) -> Vec<(usize, usize)> {
    let n = bundle.n;
    tuple_basis(n, 2)
        .into_iter()
        .filter(|t| {
            bundle
                .euler
                .pair(&Cycle::basis(n, t))
                .map(|p| p.is_zero())
                .unwrap_or(false)
        })
        .map(|t| (t[0], t[1]))
        .collect()
}

/// The degree-2 class of the fiber torus over L_i, as a vector in the labeled
/// degree-2 space; the zero vector when the vanishing rule kills it.
pub fn fiber_class_image(bundle: &CircleBundle, i: usize) -> Result<Vec<Rational>> {
    if i < 1 || i > bundle.n {
        return Err(EngineError::Unsupported {
            detail: format!("fiber index {i} out of range 1..{}", bundle.n),
        });
    }
    let h2 = bundle_homology(bundle, 2)?;
    let label = bundle.label_for_fiber(Some(i));
    let v = h2.unit(&label)?;
    if h2.is_zero_class(&v)? {
        Ok(vec![Rational::zero(); h2.num_labels()])
    } else {
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::binomial;

    fn bundle(euler: Form) -> CircleBundle {
        CircleBundle::new(4, euler, Level::integer(0)).unwrap()
    }

    fn displays(s: &LabeledSpace) -> Vec<String> {
        s.labels().iter().map(|l| l.display()).collect()
    }

    #[test]
    fn trivial_bundle_degree_one() {
        let p = bundle(Form::zero(4, 2));
        let h1 = bundle_homology(&p, 1).unwrap();
        assert_eq!(h1.rank(), 5);
        assert_eq!(displays(&h1), vec!["L1^0", "L2^0", "L3^0", "L4^0", "Lf^0"]);
    }

    #[test]
    fn trivial_bundle_degree_two() {
        let p = bundle(Form::zero(4, 2));
        let h2 = bundle_homology(&p, 2).unwrap();
        assert_eq!(h2.rank(), 10);
    }

    #[test]
    fn minus_s42_degree_two() {
        let p = bundle(Form::basis(4, &[4, 2]).neg());
        let h2 = bundle_homology(&p, 2).unwrap();
        assert_eq!(h2.rank(), 7);
        assert_eq!(
            displays(&h2),
            vec!["L12^0", "L13^0", "L14^0", "L23^0", "L34^0", "L1f^0", "L2f^0", "L3f^0", "L4f^0"]
        );
        // L1f and L3f die, L2f and L4f survive
        let dead1 = h2.unit(&p.label_for_fiber(Some(1))).unwrap();
        let dead3 = h2.unit(&p.label_for_fiber(Some(3))).unwrap();
        let live2 = h2.unit(&p.label_for_fiber(Some(2))).unwrap();
        assert!(h2.is_zero_class(&dead1).unwrap());
        assert!(h2.is_zero_class(&dead3).unwrap());
        assert!(!h2.is_zero_class(&live2).unwrap());
    }

    #[test]
    fn mixed_euler_degree_two() {
        let e = Form::basis(4, &[3, 1]).add(&Form::basis(4, &[4, 2])).neg();
        let p = bundle(e);
        let h2 = bundle_homology(&p, 2).unwrap();
        assert_eq!(h2.rank(), 5);
        let names = displays(&h2);
        assert!(names.contains(&"(L13-L24)^0".to_string()));
        for i in 1..=4 {
            let v = h2.unit(&p.label_for_fiber(Some(i))).unwrap();
            assert!(h2.is_zero_class(&v).unwrap(), "L{i}f should vanish");
        }
    }

    #[test]
    fn fiber_loop_vanishes_iff_nontrivial_euler() {
        let p0 = bundle(Form::zero(4, 2));
        let h1 = bundle_homology(&p0, 1).unwrap();
        let v = h1.unit(&p0.label_for_fiber(None)).unwrap();
        assert!(!h1.is_zero_class(&v).unwrap());

        let p1 = bundle(Form::basis(4, &[4, 2]).neg());
        let h1 = bundle_homology(&p1, 1).unwrap();
        let v = h1.unit(&p1.label_for_fiber(None)).unwrap();
        assert!(h1.is_zero_class(&v).unwrap());
        assert_eq!(h1.rank(), 4);
    }

    #[test]
    fn liftable_pairs() {
        let p0 = bundle(Form::zero(4, 2));
        assert_eq!(liftable_tori(&p0).len(), 6);
        let p1 = bundle(Form::basis(4, &[4, 2]).neg());
        let lift = liftable_tori(&p1);
        assert_eq!(lift.len(), 5);
        assert!(!lift.contains(&(2, 4)));
        let e = Form::basis(4, &[3, 1]).add(&Form::basis(4, &[4, 2])).neg();
        let p2 = bundle(e);
        let lift = liftable_tori(&p2);
        assert_eq!(lift.len(), 4);
        assert!(!lift.contains(&(1, 3)));
        assert!(!lift.contains(&(2, 4)));
    }

    #[test]
    fn fiber_class_image_examples() {
        let p = bundle(Form::basis(4, &[4, 2]).neg());
        let v2 = fiber_class_image(&p, 2).unwrap();
        assert!(v2.iter().any(|x| !x.is_zero()));
        let v1 = fiber_class_image(&p, 1).unwrap();
        assert!(v1.iter().all(|x| x.is_zero()));
        let e = Form::basis(4, &[3, 1]).add(&Form::basis(4, &[4, 2])).neg();
        let p2 = bundle(e);
        for i in 1..=4 {
            assert!(fiber_class_image(&p2, i)
                .unwrap()
                .iter()
                .all(|x| x.is_zero()));
        }
    }

    #[test]
    fn rank_identity_from_exactness() {
        // rank H₂(P) = dim coker(e∧: Λ⁰→Λ²) + dim ker(e∧: Λ¹→Λ³)
        for pattern in 0..(1 << 6) {
            let mut e = Form::zero(4, 2);
            for (bit, t) in tuple_basis(4, 2).iter().enumerate() {
                let sign = if pattern & (1 << bit) != 0 { 1 } else { -1 };
                e = e.add(&Form::zero(4, 2).with_term(t, crate::ratmat::rat(sign)));
            }
            let p = bundle(e.clone());
            let h2 = bundle_homology(&p, 2).unwrap();
            let coker = binomial(4, 2) - wedge_map_matrix(&e, 0).rank();
            let ker = wedge_map_matrix(&e, 1).kernel_basis().dim();
            assert_eq!(h2.rank(), coker + ker, "pattern {pattern:b}");
            // every nonzero integral Euler class kills exactly the fiber loop
            let h1 = bundle_homology(&p, 1).unwrap();
            assert_eq!(h1.rank(), 4, "H1 rank for pattern {pattern:b}");
        }
    }

    #[test]
    fn trivial_euler_matches_kuenneth() {
        let p = bundle(Form::zero(4, 2));
        for d in 0..=2usize {
            let h = bundle_homology(&p, d).unwrap();
            let expected = binomial(4, d) + if d > 0 { binomial(4, d - 1) } else { 0 };
            assert_eq!(h.rank(), expected);
        }
    }

    #[test]
    fn lifted_torus_cokernel_has_five_representatives() {
        // the image of e∧: every degree-2 class modulo <s42> leaves five
        // representative tori
        let e = Form::basis(4, &[4, 2]).neg();
        let (reps, _) = wedge_map_matrix(&e, 0).cokernel();
        assert_eq!(reps.dim(), 5);
    }

    #[test]
    fn degree_three_unsupported() {
        let p = bundle(Form::zero(4, 2));
        assert!(matches!(
            bundle_homology(&p, 3),
            Err(EngineError::UnsupportedDegree { degree: 3 })
        ));
    }
}
