//! Elementary cobordisms across one critical level.
//!
//! The preimage of an interval containing exactly one critical value is
//! modeled two ways: attach from below (the lower level set glued to the disc
//! bundles along the inner sphere bundle) and attach from above. Both
//! Mayer–Vietoris problems are solved and the two generator presentations are
//! reconciled into one ledger, with the lower-level presentation kept as the
//! canonical basis.

use num::{One, Zero};

use crate::error::{EngineError, Result};
use crate::forms::{tuple_basis, Cycle};
use crate::gysin::{bundle_homology, bundle_homology_with_names, CircleBundle};
use crate::label::{Combo, Label, Level, Side};
use crate::mv::{solve_mv, DeclaredLift, ExactnessAudit, LedgerEntry, MvProblem, MvSolution};
use crate::ratmat::{to_i64, Rational, RationalMatrix};
use crate::space::{LabeledMap, LabeledSpace};

/// The normal data of one critical torus: its level, the base torus it
/// projects to, and the Chern numbers of the two normal line bundles.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedTorusDatum {
    pub lambda: Level,
    pub image: (usize, usize),
    pub c1_minus: i64,
    pub c1_plus: i64,
}

/// Chern numbers of the normal bundles below and above a critical torus.
///
/// The sphere bundle of the downward normal bundle is the pullback of the
/// lower level set, but the circle action rotates it with weight −1, so its
/// Chern number is the negative of the Euler pairing; the upward side keeps
/// weight +1. The two always come out opposite, which is checked here.
pub fn normal_chern(
    below: &CircleBundle,
    above: &CircleBundle,
    image: (usize, usize),
) -> Result<(i64, i64)> {
    let n = below.n();
    let torus = Cycle::basis(n, &[image.0, image.1]);
    let pair_minus = below.euler().pair(&torus)?;
    let pair_plus = above.euler().pair(&torus)?;
    let c1_minus = -to_i64(&pair_minus).ok_or_else(|| EngineError::InconsistentScenario {
        detail: "non-integer Chern pairing below".into(),
    })?;
    let c1_plus = to_i64(&pair_plus).ok_or_else(|| EngineError::InconsistentScenario {
        detail: "non-integer Chern pairing above".into(),
    })?;
    if c1_minus != -c1_plus {
        return Err(EngineError::InconsistentScenario {
            detail: format!(
                "normal bundle Chern numbers are not opposite at L{}{}: ({c1_minus}, {c1_plus})",
                image.0, image.1
            ),
        });
    }
    Ok((c1_minus, c1_plus))
}

/// Homology of the fixed torus at a critical level.
pub fn fixed_torus_space(datum: &FixedTorusDatum, degree: usize) -> Result<LabeledSpace> {
    let (i, j) = datum.image;
    let labels = match degree {
        0 => vec![Label::FixedTorus {
            indices: vec![],
            lambda: datum.lambda.clone(),
        }],
        1 => vec![
            Label::FixedTorus {
                indices: vec![i],
                lambda: datum.lambda.clone(),
            },
            Label::FixedTorus {
                indices: vec![j],
                lambda: datum.lambda.clone(),
            },
        ],
        2 => vec![Label::FixedTorus {
            indices: vec![i, j],
            lambda: datum.lambda.clone(),
        }],
        d => return Err(EngineError::UnsupportedDegree { degree: d }),
    };
    Ok(LabeledSpace::free(degree, labels))
}

/// Homology of the radius-ε sphere bundle of a normal bundle over the fixed
/// torus: the circle bundle over T² with Euler number c1 of that side,
/// renamed into section and fiber classes over the image indices.
pub fn sphere_bundle_homology(
    image: (usize, usize),
    lambda: &Level,
    c1: i64,
    degree: usize,
    side: Side,
) -> Result<LabeledSpace> {
    let (gi, gj) = image;
    let euler =
        crate::forms::Form::zero(2, 2).with_term(&[1, 2], Rational::from_integer(c1.into()));
    let bundle = CircleBundle::new(2, euler, lambda.clone())?;
    let global = move |local: usize| if local == 1 { gi } else { gj };
    let lambda_s = lambda.clone();
    let lambda_f = lambda.clone();
    bundle_homology_with_names(
        &bundle,
        degree,
        &move |cycle: &Cycle| {
            let tuple = cycle
                .as_single_tuple()
                .expect("sphere bundle lifts are single tori");
            Label::SphereSection {
                indices: tuple.iter().map(|&t| global(t)).collect(),
                lambda: lambda_s.clone(),
                side,
            }
        },
        &move |index: Option<usize>| Label::SphereFiber {
            index: index.map(global),
            lambda: lambda_f.clone(),
            side,
        },
    )
}

/// Which attachment a boundary lift belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attach {
    /// glue the lower level set to the disc bundles along S(ν⁻)
    Lower,
    /// glue the disc bundles to the upper level set along S(ν⁺)
    Upper,
}

/// A caller-declared boundary lift for one attachment of a cobordism.
#[derive(Clone, Debug)]
pub struct CobordismLift {
    pub attach: Attach,
    pub label: Label,
    pub boundary: Combo,
}

/// Derives the geometric boundary lifts an elementary crossing needs: when
/// the sphere-bundle fiber on one side survives while the adjacent level set
/// kills its fiber class, the torus over the pair that exists only on the far
/// side bounds that fiber.
pub fn derive_lifts(
    below: &CircleBundle,
    above: &CircleBundle,
    datum: &FixedTorusDatum,
) -> Result<Vec<CobordismLift>> {
    let n = below.n();
    let mut lifts = Vec::new();
    let unique_pair = |exists_at: &CircleBundle, dies_at: &CircleBundle| -> Result<Vec<usize>> {
        let pairs: Vec<Vec<usize>> = tuple_basis(n, 2)
            .into_iter()
            .filter(|t| {
                let c = Cycle::basis(n, t);
                let alive = exists_at
                    .euler()
                    .pair(&c)
                    .map(|p| p.is_zero())
                    .unwrap_or(false);
                let dead = dies_at
                    .euler()
                    .pair(&c)
                    .map(|p| !p.is_zero())
                    .unwrap_or(false);
                alive && dead
            })
            .collect();
        if pairs.len() != 1 {
            return Err(EngineError::InconsistentScenario {
                detail: format!(
                    "expected exactly one torus lost across level {}, found {}",
                    datum.lambda.render(),
                    pairs.len()
                ),
            });
        }
        Ok(pairs.into_iter().next().unwrap())
    };
    if datum.c1_plus == 0 && !above.euler().is_zero() {
        let pair = unique_pair(below, above)?;
        lifts.push(CobordismLift {
            attach: Attach::Upper,
            label: Label::LevelTorus {
                indices: pair,
                level: below.level().clone(),
            },
            boundary: Combo::single(Label::SphereFiber {
                index: None,
                lambda: datum.lambda.clone(),
                side: Side::Plus,
            }),
        });
    }
    if datum.c1_minus == 0 && !below.euler().is_zero() {
        let pair = unique_pair(above, below)?;
        lifts.push(CobordismLift {
            attach: Attach::Lower,
            label: Label::LevelTorus {
                indices: pair,
                level: above.level().clone(),
            },
            boundary: Combo::single(Label::SphereFiber {
                index: None,
                lambda: datum.lambda.clone(),
                side: Side::Minus,
            }),
        });
    }
    Ok(lifts)
}

/// An elementary cobordism with both attachments solved and reconciled.
#[derive(Clone, Debug)]
pub struct ElementaryCobordism {
    pub interval: (Level, Level),
    pub datum: FixedTorusDatum,
    pub below: CircleBundle,
    pub above: CircleBundle,
    /// canonical basis presentation per degree 0..=2
    pub h: [LabeledSpace; 3],
    /// degree-d map from lower-level label coordinates into the basis
    pub incl_below: [RationalMatrix; 3],
    /// degree-d map from upper-level label coordinates into the basis
    pub incl_above: [RationalMatrix; 3],
    /// degree-d map from fixed-torus label coordinates into the basis
    pub z_map: [RationalMatrix; 3],
    pub ledger: Vec<LedgerEntry>,
    pub audits: Vec<ExactnessAudit>,
}

/// Builds the maps out of a sphere-bundle space into the adjacent level set.
fn sphere_to_level(
    sphere: &LabeledSpace,
    level_space: &LabeledSpace,
    bundle: &CircleBundle,
) -> Result<LabeledMap> {
    let n = bundle.n();
    let ann = crate::forms::annihilator(std::slice::from_ref(bundle.euler()), n, 2);
    LabeledMap::from_images(sphere, level_space, |label| match label {
        Label::SphereSection { indices, .. } => {
            if indices.is_empty() {
                return Ok(Combo::single(Label::LevelTorus {
                    indices: vec![],
                    level: bundle.level().clone(),
                }));
            }
            if indices.len() == 1 {
                return Ok(Combo::single(Label::LevelTorus {
                    indices: indices.clone(),
                    level: bundle.level().clone(),
                }));
            }
            // section torus: express the base torus in the chosen lifts
            let cycle = Cycle::basis(n, indices);
            let coords = ann.coordinates_of(&cycle.coefficients()).ok_or_else(|| {
                EngineError::InconsistentModel {
                    detail: format!(
                        "section torus over L{} has no lift at level {}",
                        indices.iter().map(|i| i.to_string()).collect::<String>(),
                        bundle.level().render()
                    ),
                }
            })?;
            let mut combo = Combo::zero();
            for (k, c) in coords.iter().enumerate() {
                let basis_cycle = Cycle::from_coefficients(n, 2, &ann.basis()[k]);
                combo.push(bundle.label_for_lift(&basis_cycle), c.clone());
            }
            Ok(combo)
        }
        Label::SphereFiber { index, .. } => Ok(Combo::single(Label::FiberClass {
            index: *index,
            level: bundle.level().clone(),
        })),
        other => Err(EngineError::Unsupported {
            detail: format!("unexpected sphere-bundle label {}", other.display()),
        }),
    })
}

/// Maps out of a sphere-bundle space into the fixed torus: sections project
/// onto the corresponding tori, fiber-direction classes die.
fn sphere_to_torus(
    sphere: &LabeledSpace,
    torus: &LabeledSpace,
    datum: &FixedTorusDatum,
) -> Result<LabeledMap> {
    LabeledMap::from_images(sphere, torus, |label| match label {
        Label::SphereSection { indices, .. } => Ok(Combo::single(Label::FixedTorus {
            indices: indices.clone(),
            lambda: datum.lambda.clone(),
        })),
        Label::SphereFiber { .. } => Ok(Combo::zero()),
        other => Err(EngineError::Unsupported {
            detail: format!("unexpected sphere-bundle label {}", other.display()),
        }),
    })
}

/// The projection of a labeled space to degree-d homology of the base torus,
/// column per label.
pub fn base_projection_matrix(space: &LabeledSpace, n: usize) -> RationalMatrix {
    let degree = space.degree();
    let dim = tuple_basis(n, degree).len();
    let mut m = RationalMatrix::zero(dim, space.num_labels());
    for (j, label) in space.labels().iter().enumerate() {
        let cycle = label.base_projection(n, degree);
        for (i, c) in cycle.coefficients().into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    m
}

struct AttachSolutions {
    solutions: [MvSolution; 3],
}

fn solve_attach(
    stage: &str,
    attach: Attach,
    level_bundle: &CircleBundle,
    datum: &FixedTorusDatum,
    lifts: &[CobordismLift],
) -> Result<AttachSolutions> {
    let side = match attach {
        Attach::Lower => Side::Minus,
        Attach::Upper => Side::Plus,
    };
    let c1 = match side {
        Side::Minus => datum.c1_minus,
        Side::Plus => datum.c1_plus,
    };
    let mut solutions = Vec::new();
    for degree in 0..=2usize {
        let sphere = sphere_bundle_homology(datum.image, &datum.lambda, c1, degree, side)?;
        let level = bundle_homology(level_bundle, degree)?;
        let torus = fixed_torus_space(datum, degree)?;
        let to_level = sphere_to_level(&sphere, &level, level_bundle)?;
        let to_torus = sphere_to_torus(&sphere, &torus, datum)?;
        // attach from below keeps the level set on the A side; from above the
        // disc-bundle (fixed torus) side is A
        let (left, right, into_left, into_right) = match attach {
            Attach::Lower => (
                level.clone(),
                torus.clone(),
                to_level.clone(),
                to_torus.clone(),
            ),
            Attach::Upper => (
                torus.clone(),
                level.clone(),
                to_torus.clone(),
                to_level.clone(),
            ),
        };
        let (low_inter, low_left, low_right, low_into_left, low_into_right) = if degree == 0 {
            let empty = LabeledSpace::empty(0);
            (
                empty.clone(),
                empty.clone(),
                empty.clone(),
                LabeledMap::zero(&empty, &empty),
                LabeledMap::zero(&empty, &empty),
            )
        } else {
            let d = degree - 1;
            let sphere_low = sphere_bundle_homology(datum.image, &datum.lambda, c1, d, side)?;
            let level_low = bundle_homology(level_bundle, d)?;
            let torus_low = fixed_torus_space(datum, d)?;
            let to_level_low = sphere_to_level(&sphere_low, &level_low, level_bundle)?;
            let to_torus_low = sphere_to_torus(&sphere_low, &torus_low, datum)?;
            match attach {
                Attach::Lower => (sphere_low, level_low, torus_low, to_level_low, to_torus_low),
                Attach::Upper => (sphere_low, torus_low, level_low, to_torus_low, to_level_low),
            }
        };
        let declared: Vec<DeclaredLift> = lifts
            .iter()
            .filter(|l| l.attach == attach && degree == 2)
            .map(|l| DeclaredLift {
                label: l.label.clone(),
                boundary: l.boundary.clone(),
            })
            .collect();
        let problem = MvProblem {
            stage: format!(
                "{stage}/{}",
                match attach {
                    Attach::Lower => "attach-below",
                    Attach::Upper => "attach-above",
                }
            ),
            degree,
            intersection: sphere,
            left,
            right,
            into_left,
            into_right,
            intersection_low: low_inter,
            left_low: low_left,
            right_low: low_right,
            into_left_low: low_into_left,
            into_right_low: low_into_right,
            lifts: declared,
        };
        solutions.push(solve_mv(&problem)?);
    }
    let solutions: [MvSolution; 3] =
        solutions.try_into().map_err(|_| EngineError::Unsupported {
            detail: "degree count".into(),
        })?;
    Ok(AttachSolutions { solutions })
}

/// Change of basis from the attach-above presentation into the attach-below
/// presentation, pinned by shared labels, fixed-torus classes, fiber
/// naturality, and matching of base projections.
fn reconcile(
    stage: &str,
    degree: usize,
    lower: &MvSolution,
    upper: &MvSolution,
    below: &CircleBundle,
    torus_space: &LabeledSpace,
    level_below: &LabeledSpace,
) -> Result<(RationalMatrix, Vec<LedgerEntry>)> {
    let n = below.n();
    if lower.homology.rank() != upper.homology.rank() {
        return Err(EngineError::InconsistentModel {
            detail: format!(
                "{stage}: attachments disagree on rank in degree {degree}: {} vs {}",
                lower.homology.rank(),
                upper.homology.rank()
            ),
        });
    }
    let size = lower.homology.rank();
    let proj_lower = base_projection_matrix(&lower.homology, n);
    let proj_upper = base_projection_matrix(&upper.homology, n);
    let fiber_modulus: Vec<Label> = lower
        .homology
        .labels()
        .iter()
        .filter(|l| matches!(l, Label::FiberClass { .. }))
        .cloned()
        .collect();

    let mut columns: Vec<Vec<Rational>> = Vec::new();
    let mut cross_entries: Vec<LedgerEntry> = Vec::new();
    for (col, g) in upper.homology.labels().iter().enumerate() {
        let (image, record_modulus): (Vec<Rational>, bool) = if let Some(i) =
            lower.homology.index_of(g)
        {
            let mut v = vec![Rational::zero(); size];
            v[i] = Rational::one();
            (v, false)
        } else if matches!(g, Label::FixedTorus { .. }) {
            let unit = torus_space.unit(g)?;
            (lower.project_right.mul_vec(&unit), false)
        } else if let Label::FiberClass { index, .. } = g {
            let partner = Label::FiberClass {
                index: *index,
                level: below.level().clone(),
            };
            let unit = level_below.unit(&partner)?;
            let v = lower.project_left.mul_vec(&unit);
            if v.iter().all(|x| x.is_zero()) {
                return Err(EngineError::InconsistentModel {
                    detail: format!(
                        "{stage}: fiber class {} has no surviving lower partner",
                        g.display()
                    ),
                });
            }
            (v, true)
        } else {
            // match the base projection; free coordinates stay zero, so
            // fiber components are dropped and the identification is
            // canonical only modulo the surviving fiber classes
            let target = proj_upper.col(col);
            let v = proj_lower
                .solve(&target)
                .ok_or_else(|| EngineError::InconsistentModel {
                    detail: format!(
                        "{stage}: generator {} projects outside the lower presentation",
                        g.display()
                    ),
                })?;
            (v, !fiber_modulus.is_empty())
        };
        let lhs = lower.homology.combo_of(&image);
        let rhs = Combo::single(g.clone());
        if lhs != rhs {
            cross_entries.push(LedgerEntry {
                stage: stage.to_string(),
                source: Combo::zero(),
                lhs,
                rhs,
                modulus: if record_modulus {
                    fiber_modulus.clone()
                } else {
                    Vec::new()
                },
                retired: false,
            });
        }
        columns.push(image);
    }

    let mut phi = RationalMatrix::zero(size, size);
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            phi.set(i, j, x.clone());
        }
    }
    if phi.rank() != size {
        return Err(EngineError::InconsistentModel {
            detail: format!("{stage}: presentations are not isomorphic in degree {degree}"),
        });
    }
    // projection audit: the two presentations must project identically
    if proj_lower.mul(&phi) != proj_upper {
        return Err(EngineError::InconsistentModel {
            detail: format!("{stage}: base projections disagree in degree {degree}"),
        });
    }
    // fixed-torus classes must be matched by the change of basis
    // upper attachment has the torus on its A side, lower on its A' side
    let z_upper = phi.mul(&upper.project_left);
    if z_upper != lower.project_right {
        return Err(EngineError::InconsistentModel {
            detail: format!("{stage}: fixed-torus classes disagree in degree {degree}"),
        });
    }
    Ok((phi, cross_entries))
}

/// Builds the elementary cobordism over [below.level, above.level] crossing
/// the given critical torus, with caller-declared boundary lifts.
pub fn elementary_cobordism(
    below: &CircleBundle,
    above: &CircleBundle,
    datum: &FixedTorusDatum,
    lifts: &[CobordismLift],
) -> Result<ElementaryCobordism> {
    if below.n() != above.n() {
        return Err(EngineError::InconsistentScenario {
            detail: "level sets live over different base tori".into(),
        });
    }
    let (c1m, c1p) = normal_chern(below, above, datum.image)?;
    if c1m != datum.c1_minus || c1p != datum.c1_plus {
        return Err(EngineError::InconsistentScenario {
            detail: format!(
                "declared Chern numbers ({}, {}) do not match computed ({c1m}, {c1p})",
                datum.c1_minus, datum.c1_plus
            ),
        });
    }
    let stage = format!("cob[{},{}]", below.level().render(), above.level().render());
    let lower = solve_attach(&stage, Attach::Lower, below, datum, lifts)?;
    let upper = solve_attach(&stage, Attach::Upper, above, datum, lifts)?;

    let mut h = Vec::new();
    let mut incl_below = Vec::new();
    let mut incl_above = Vec::new();
    let mut z_map = Vec::new();
    let mut ledger = Vec::new();
    let mut audits = Vec::new();
    for degree in 0..=2usize {
        let lo = &lower.solutions[degree];
        let up = &upper.solutions[degree];
        let torus = fixed_torus_space(datum, degree)?;
        let level_b = bundle_homology(below, degree)?;
        let (phi, cross) = reconcile(&stage, degree, lo, up, below, &torus, &level_b)?;
        h.push(lo.homology.clone());
        incl_below.push(lo.project_left.clone());
        incl_above.push(phi.mul(&up.project_right));
        z_map.push(lo.project_right.clone());
        ledger.extend(lo.ledger.iter().cloned());
        ledger.extend(up.ledger.iter().cloned());
        ledger.extend(cross);
        audits.push(lo.audit.clone());
        audits.push(up.audit.clone());
    }

    let cob = ElementaryCobordism {
        interval: (below.level().clone(), above.level().clone()),
        datum: datum.clone(),
        below: below.clone(),
        above: above.clone(),
        h: h.try_into().map_err(|_| EngineError::Unsupported {
            detail: "degree count".into(),
        })?,
        incl_below: incl_below
            .try_into()
            .map_err(|_| EngineError::Unsupported {
                detail: "degree count".into(),
            })?,
        incl_above: incl_above
            .try_into()
            .map_err(|_| EngineError::Unsupported {
                detail: "degree count".into(),
            })?,
        z_map: z_map.try_into().map_err(|_| EngineError::Unsupported {
            detail: "degree count".into(),
        })?,
        ledger,
        audits,
    };

    // the composite H₁(level) → H₁(cobordism) → H₁(base) must send L_i ↦ L_i
    let n = below.n();
    let proj1 = base_projection_matrix(&cob.h[1], n);
    for (bundle, incl) in [(below, &cob.incl_below[1]), (above, &cob.incl_above[1])] {
        let level = bundle_homology(bundle, 1)?;
        let composite = proj1.mul(&incl.clone());
        let direct = base_projection_matrix(&level, n);
        if composite != direct {
            return Err(EngineError::InconsistentModel {
                detail: format!("{stage}: H1 projection is not the identity on level circles"),
            });
        }
    }
    Ok(cob)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Form;
    use crate::ratmat::rat;

    fn lvl(num: i64, den: i64) -> Level {
        Level::new(num, den)
    }

    fn mcduff_bundles() -> [CircleBundle; 5] {
        let zero = Form::zero(4, 2);
        let e15 = Form::basis(4, &[4, 2]).neg();
        let e35 = Form::basis(4, &[3, 1]).add(&Form::basis(4, &[4, 2])).neg();
        let e55 = Form::basis(4, &[3, 1]).neg();
        [
            CircleBundle::new(4, zero.clone(), lvl(0, 1)).unwrap(),
            CircleBundle::new(4, e15, lvl(3, 2)).unwrap(),
            CircleBundle::new(4, e35, lvl(7, 2)).unwrap(),
            CircleBundle::new(4, e55, lvl(11, 2)).unwrap(),
            CircleBundle::new(4, zero, lvl(7, 1)).unwrap(),
        ]
    }

    #[test]
    fn chern_numbers_per_level() {
        let [b0, b15, b35, b55, b7] = mcduff_bundles();
        assert_eq!(normal_chern(&b0, &b15, (1, 3)).unwrap(), (0, 0));
        let (m2, p2) = normal_chern(&b15, &b35, (2, 4)).unwrap();
        assert_eq!((m2.abs(), p2.abs()), (1, 1));
        assert_eq!(m2, -p2);
        let (m5, p5) = normal_chern(&b35, &b55, (1, 3)).unwrap();
        assert_eq!((m5.abs(), p5.abs()), (1, 1));
        assert_eq!(m5, -p5);
        assert_eq!(normal_chern(&b55, &b7, (2, 4)).unwrap(), (0, 0));
    }

    #[test]
    fn chern_antisymmetry_violation_is_an_error() {
        let [b0, _, b35, _, _] = mcduff_bundles();
        // crossing from e=0 to e=-s31-s42 over L13 pairs nonzero on both sides
        assert!(normal_chern(&b0, &b35, (1, 3)).is_err());
    }

    #[test]
    fn mirrored_crossing_has_unit_chern() {
        // the i ↦ 5−i mirror of the second crossing: recompute directly
        let [_, _, b35, b55, _] = mcduff_bundles();
        let (m, p) = normal_chern(&b35, &b55, (1, 3)).unwrap();
        assert_eq!(m.abs(), 1);
        assert_eq!(p, -m);
    }

    #[test]
    fn sphere_bundle_ranks() {
        let l1 = Level::integer(1);
        let h1 = sphere_bundle_homology((1, 3), &l1, 0, 1, Side::Minus).unwrap();
        assert_eq!(h1.rank(), 3);
        let names: Vec<String> = h1.labels().iter().map(|l| l.display()).collect();
        assert_eq!(names, vec!["Z1^1-", "Z3^1-", "Zf^1-"]);

        let l2 = Level::integer(2);
        let h1c = sphere_bundle_homology((2, 4), &l2, 1, 1, Side::Plus).unwrap();
        assert_eq!(h1c.rank(), 2);

        let h2 = sphere_bundle_homology((2, 4), &l2, 1, 2, Side::Plus).unwrap();
        assert_eq!(h2.rank(), 2);
        let names: Vec<String> = h2.labels().iter().map(|l| l.display()).collect();
        assert_eq!(names, vec!["Z2f^2+", "Z4f^2+"]);

        let h2t = sphere_bundle_homology((1, 3), &l1, 0, 2, Side::Minus).unwrap();
        assert_eq!(h2t.rank(), 3);

        let h0 = sphere_bundle_homology((1, 3), &l1, 0, 0, Side::Minus).unwrap();
        assert_eq!(h0.rank(), 1);
    }

    fn build(idx: usize) -> ElementaryCobordism {
        let [b0, b15, b35, b55, b7] = mcduff_bundles();
        let data = [
            (b0.clone(), b15.clone(), (1usize, 3usize), Level::integer(1)),
            (b15, b35.clone(), (2, 4), Level::integer(2)),
            (b35, b55.clone(), (1, 3), Level::integer(5)),
            (b55, b7, (2, 4), Level::integer(6)),
        ];
        let (below, above, image, lambda) = data[idx].clone();
        let (c1m, c1p) = normal_chern(&below, &above, image).unwrap();
        let datum = FixedTorusDatum {
            lambda,
            image,
            c1_minus: c1m,
            c1_plus: c1p,
        };
        let lifts = derive_lifts(&below, &above, &datum).unwrap();
        elementary_cobordism(&below, &above, &datum, &lifts).unwrap()
    }

    #[test]
    fn first_cobordism_ranks_and_ledger() {
        let cob = build(0);
        assert_eq!(cob.h[1].rank(), 4);
        assert_eq!(cob.h[2].rank(), 8);
        assert_eq!(cob.h[0].rank(), 1);
        // ledger reproduces L13^0 = Z13^1 = L13^1.5
        let closure = crate::mv::relation_closure(&cob.ledger).unwrap();
        let l13_0 = Label::LevelTorus {
            indices: vec![1, 3],
            level: Level::integer(0),
        };
        let z13_1 = Label::FixedTorus {
            indices: vec![1, 3],
            lambda: Level::integer(1),
        };
        let l13_15 = Label::LevelTorus {
            indices: vec![1, 3],
            level: lvl(3, 2),
        };
        assert!(closure.identified(&l13_0, &z13_1, 1));
        assert!(closure.identified(&l13_0, &l13_15, 1));
        // fiber classes of the lower level map to zero in degree 1
        let lf = Label::FiberClass {
            index: None,
            level: Level::integer(0),
        };
        let level0 = bundle_homology(&cob.below, 1).unwrap();
        let v = cob.incl_below[1].mul_vec(&level0.unit(&lf).unwrap());
        assert!(v.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn second_cobordism_ranks_and_relation() {
        let cob = build(1);
        assert_eq!(cob.h[1].rank(), 4);
        assert_eq!(cob.h[2].rank(), 6);
        let names: Vec<String> = cob.h[2].labels().iter().map(|l| l.display()).collect();
        assert!(names.contains(&"Z24^2".to_string()));
        // ledger carries L13^1.5 - Z24^2 = (L13-L24)^3.5 as an affine relation
        let closure = crate::mv::relation_closure(&cob.ledger).unwrap();
        let expected: Vec<String> = closure.affine.iter().map(|c| c.render()).collect();
        assert!(
            expected.iter().any(|s| s.contains("(L13-L24)^3.5")),
            "affine relations: {expected:?}"
        );
    }

    #[test]
    fn mirrored_cobordisms_have_mirrored_ranks() {
        let c3 = build(2);
        assert_eq!(c3.h[1].rank(), 4);
        assert_eq!(c3.h[2].rank(), 6);
        let c4 = build(3);
        assert_eq!(c4.h[1].rank(), 4);
        assert_eq!(c4.h[2].rank(), 8);
        // the fourth cobordism owns the lift torus at level 7
        let names: Vec<String> = c4.h[2].labels().iter().map(|l| l.display()).collect();
        assert!(names.contains(&"L13^7".to_string()), "{names:?}");
    }

    #[test]
    fn derive_lifts_positions() {
        let [b0, b15, b35, b55, b7] = mcduff_bundles();
        let datum1 = FixedTorusDatum {
            lambda: Level::integer(1),
            image: (1, 3),
            c1_minus: 0,
            c1_plus: 0,
        };
        let lifts = derive_lifts(&b0, &b15, &datum1).unwrap();
        assert_eq!(lifts.len(), 1);
        assert_eq!(lifts[0].attach, Attach::Upper);
        assert_eq!(lifts[0].label.display(), "L24^0");

        let datum2 = FixedTorusDatum {
            lambda: Level::integer(2),
            image: (2, 4),
            c1_minus: 1,
            c1_plus: -1,
        };
        assert!(derive_lifts(&b15, &b35, &datum2).unwrap().is_empty());

        let datum6 = FixedTorusDatum {
            lambda: Level::integer(6),
            image: (2, 4),
            c1_minus: 0,
            c1_plus: 0,
        };
        let lifts = derive_lifts(&b55, &b7, &datum6).unwrap();
        assert_eq!(lifts.len(), 1);
        assert_eq!(lifts[0].attach, Attach::Lower);
        assert_eq!(lifts[0].label.display(), "L13^7");
        let _ = b35;
    }

    #[test]
    fn fixed_torus_not_in_level_inclusion_image() {
        // the image of H2(level 1.5) inside the second cobordism omits Z24^2
        let cob = build(1);
        let image = cob.incl_below[2].image_basis();
        let z24 = Label::FixedTorus {
            indices: vec![2, 4],
            lambda: Level::integer(2),
        };
        let v = cob.h[2].unit(&z24).unwrap();
        assert!(!image.member(&v).unwrap());
        // but sums of image vectors stay inside
        let level = bundle_homology(&cob.below, 2).unwrap();
        let a = cob.incl_below[2].mul_vec(
            &level
                .unit(&Label::LevelTorus {
                    indices: vec![1, 2],
                    level: lvl(3, 2),
                })
                .unwrap(),
        );
        let b = cob.incl_below[2].mul_vec(
            &level
                .unit(&Label::LevelTorus {
                    indices: vec![1, 4],
                    level: lvl(3, 2),
                })
                .unwrap(),
        );
        let sum: Vec<_> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        assert!(image.member(&sum).unwrap());
    }

    #[test]
    fn missing_lift_is_detected() {
        let [b0, b15, ..] = mcduff_bundles();
        let datum = FixedTorusDatum {
            lambda: Level::integer(1),
            image: (1, 3),
            c1_minus: 0,
            c1_plus: 0,
        };
        let err = elementary_cobordism(&b0, &b15, &datum, &[]);
        assert!(matches!(
            err,
            Err(EngineError::UnderdeterminedBoundary { .. })
        ));
    }

    #[test]
    fn projection_audit_runs() {
        let cob = build(0);
        let n = 4;
        let proj = base_projection_matrix(&cob.h[2], n);
        // lifted tori project onto their base classes
        let level0 = bundle_homology(&cob.below, 2).unwrap();
        let l12 = Label::LevelTorus {
            indices: vec![1, 2],
            level: Level::integer(0),
        };
        let v = cob.incl_below[2].mul_vec(&level0.unit(&l12).unwrap());
        let projected = proj.mul_vec(&v);
        let expected = Cycle::basis(4, &[1, 2]).coefficients();
        assert_eq!(projected, expected);
        assert_eq!(projected.iter().filter(|x| !x.is_zero()).count(), 1);
        let one = projected.iter().find(|x| !x.is_zero()).unwrap();
        assert_eq!(one, &rat(1));
    }
}
