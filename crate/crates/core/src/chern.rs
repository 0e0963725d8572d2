//! Pairings of the first Chern class of the glued manifold against each
//! surviving degree-2 generator.
//!
//! Every generator kind has exactly one evaluation rule:
//!
//! * classes resident in a regular level set pair to zero, because the
//!   tangent bundle restricted to a level set splits into the flow line, the
//!   vertical line trivialized by the action field, and the pullback of the
//!   (trivial) base tangent bundle;
//! * fixed tori contribute c₁(TZ) + c₁(ν⁻) + c₁(ν⁺) = 0 + c + (−c);
//! * gradient tori are clutched by the gluing action on the complexified
//!   tangent factors, and each eigenline contributes the winding number of
//!   its clutching loop;
//! * invariant spheres are evaluated by the fixed-point weight difference of
//!   their two ends.

use num::Zero;

use crate::cobordism::FixedTorusDatum;
use crate::error::{EngineError, Result};
use crate::label::{Label, Level};
use crate::ratmat::{ratio, to_i64, Rational};

/// The evaluation rule applied to one generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum C1Rule {
    LevelSplitting,
    FixedTorusSum,
    ClutchingWinding,
    InvariantSphereWeights,
}

impl C1Rule {
    pub fn name(&self) -> &'static str {
        match self {
            C1Rule::LevelSplitting => "level-splitting",
            C1Rule::FixedTorusSum => "fixed-torus-sum",
            C1Rule::ClutchingWinding => "clutching-winding",
            C1Rule::InvariantSphereWeights => "invariant-sphere-weights",
        }
    }
}

/// A signed permutation of the three complex tangent factors along a
/// gradient torus: entry (i, j) = s means z_j ↦ s·z_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    pub matrix: [[i64; 3]; 3],
}

impl SignedPermutation {
    pub fn identity() -> Self {
        SignedPermutation {
            matrix: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        }
    }

    pub fn apply(&self, v: &[i64; 3]) -> [i64; 3] {
        let mut out = [0i64; 3];
        for (i, row) in self.matrix.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    fn is_signed_permutation(&self) -> bool {
        self.matrix.iter().all(|row| {
            row.iter().filter(|x| x.abs() == 1).count() == 1 && row.iter().all(|x| x.abs() <= 1)
        }) && (0..3).all(|c| self.matrix.iter().filter(|row| row[c].abs() == 1).count() == 1)
    }
}

/// One eigenline of the gluing action with its eigenvalue and an optional
/// injected clutching twist (zero for honest gluings; nonzero values exist
/// for negative controls).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenline {
    pub vector: [i64; 3],
    pub eigenvalue: i64,
    pub twist: i64,
}

/// Clutching data of the tangent bundle along a gradient torus.
#[derive(Clone, Debug, PartialEq)]
pub struct ClutchingSpec {
    pub action: SignedPermutation,
    pub interval_length: Level,
    pub eigenlines: Vec<Eigenline>,
}

impl ClutchingSpec {
    /// Derives the spec from the gluing permutation of base coordinates.
    ///
    /// Coordinates pair into complex planes (1,2), (3,4), …, plus the
    /// (fiber, flow) plane; the gluing must permute these planes coherently.
    pub fn from_gluing(perm: &[usize], interval_length: Level) -> Result<Self> {
        let n = perm.len();
        if !n.is_multiple_of(2) {
            return Err(EngineError::Unsupported {
                detail: "odd base dimension has no complex plane pairing".into(),
            });
        }
        let planes = n / 2;
        if planes + 1 > 3 {
            return Err(EngineError::Unsupported {
                detail: "clutching data is built for three complex factors".into(),
            });
        }
        let mut matrix = [[0i64; 3]; 3];
        // the (fiber, flow) plane is always fixed by an equivariant gluing
        matrix[2][2] = 1;
        for k in 0..planes {
            let a = perm[2 * k];
            let b = perm[2 * k + 1];
            // images of coordinates 2k+1, 2k+2
            let target = a.div_ceil(2);
            if target == 0 || target > planes || b.div_ceil(2) != target {
                return Err(EngineError::Unsupported {
                    detail: format!(
                        "gluing splits the complex plane ({}, {})",
                        2 * k + 1,
                        2 * k + 2
                    ),
                });
            }
            if a % 2 != 1 || b != a + 1 {
                return Err(EngineError::Unsupported {
                    detail: format!(
                        "gluing reverses the orientation of a complex plane: ({a}, {b})"
                    ),
                });
            }
            matrix[target - 1][k] = 1;
        }
        let action = SignedPermutation { matrix };
        if !action.is_signed_permutation() {
            return Err(EngineError::Unsupported {
                detail: "gluing does not induce a signed permutation of tangent factors".into(),
            });
        }
        let eigenlines = eigenlines_of(&action)?;
        Ok(ClutchingSpec {
            action,
            interval_length,
            eigenlines,
        })
    }

    /// Injects a clutching twist into one subbundle (a negative control:
    /// a nonzero twist is exactly a failure of the vanishing-c₁ property).
    pub fn with_twist(mut self, subbundle: usize, twist: i64) -> Self {
        self.eigenlines[subbundle].twist = twist;
        self
    }
}

/// Eigenlines of an involutive signed permutation, eigenvalues ±1.
fn eigenlines_of(action: &SignedPermutation) -> Result<Vec<Eigenline>> {
    // involution check
    let mut comp = [[0i64; 3]; 3];
    for (i, row) in comp.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..3)
                .map(|k| action.matrix[i][k] * action.matrix[k][j])
                .sum();
        }
    }
    if comp != SignedPermutation::identity().matrix {
        return Err(EngineError::Unsupported {
            detail: "gluing action on tangent factors is not an involution".into(),
        });
    }
    let mut lines = Vec::new();
    let mut seen = [false; 3];
    for j in 0..3 {
        if seen[j] {
            continue;
        }
        let unit = {
            let mut v = [0i64; 3];
            v[j] = 1;
            v
        };
        let image = action.apply(&unit);
        let target = image.iter().position(|x| x.abs() == 1).unwrap();
        let sign = image[target];
        if target == j {
            lines.push(Eigenline {
                vector: unit,
                eigenvalue: sign,
                twist: 0,
            });
            seen[j] = true;
        } else {
            // transposed pair: diagonal and antidiagonal eigenlines
            let mut plus = [0i64; 3];
            plus[j] = 1;
            plus[target] = sign;
            let mut minus = [0i64; 3];
            minus[j] = 1;
            minus[target] = -sign;
            lines.push(Eigenline {
                vector: plus,
                eigenvalue: 1,
                twist: 0,
            });
            lines.push(Eigenline {
                vector: minus,
                eigenvalue: -1,
                twist: 0,
            });
            seen[j] = true;
            seen[target] = true;
        }
    }
    Ok(lines)
}

/// Winding number of a loop sampled by its angle in turns. Differences are
/// wrapped to (−1/2, 1/2], so samples must be denser than half turns.
pub fn winding_from_turn_samples(samples: &[Rational]) -> Result<i64> {
    if samples.len() < 2 {
        return Err(EngineError::Unsupported {
            detail: "winding needs at least two samples".into(),
        });
    }
    let half = ratio(1, 2);
    let one = ratio(1, 1);
    let mut total = Rational::zero();
    for w in samples.windows(2) {
        let mut d = w[1].clone() - w[0].clone();
        while d > half {
            d -= one.clone();
        }
        while d <= -half.clone() {
            d += one.clone();
        }
        total += d;
    }
    to_i64(&total).ok_or_else(|| EngineError::Unsupported {
        detail: format!("loop does not close: winding sum {total}"),
    })
}

/// Winding number of the clutching loop of one eigen-subbundle. Constant
/// clutchings by ±1 trivialize (−1 is absorbed by a half-rotation section
/// over the moment interval), so only an injected twist contributes; the
/// twist is counted by the sampled winding counter rather than trusted
/// symbolically.
pub fn clutching_winding(spec: &ClutchingSpec, subbundle: usize) -> Result<i64> {
    let line = spec
        .eigenlines
        .get(subbundle)
        .ok_or_else(|| EngineError::WrongRule {
            generator: format!("subbundle {subbundle}"),
            detail: "no such eigenline".into(),
        })?;
    let image = spec.action.apply(&line.vector);
    let expected: Vec<i64> = line.vector.iter().map(|x| x * line.eigenvalue).collect();
    if image.to_vec() != expected || line.eigenvalue.abs() != 1 {
        return Err(EngineError::WrongRule {
            generator: format!("subbundle {subbundle}"),
            detail: "not an eigenline of the gluing action with eigenvalue ±1".into(),
        });
    }
    if line.twist == 0 {
        return Ok(0);
    }
    // sample the twisted loop t ↦ exp(2πi · twist · t)
    let steps = 8 * line.twist.unsigned_abs() as i64;
    let samples: Vec<Rational> = (0..=steps).map(|k| ratio(line.twist * k, steps)).collect();
    winding_from_turn_samples(&samples)
}

/// ⟨c₁(TW), Q⟩ for a class resident in a regular level set.
pub fn pair_c1_level_class(label: &Label, regular_samples: &[Level]) -> Result<i64> {
    let level = match label {
        Label::LevelTorus { level, .. } => level,
        Label::CombinationLift { level, .. } => level,
        Label::FiberClass { level, .. } => level,
        other => {
            return Err(EngineError::WrongRule {
                generator: other.display(),
                detail: "not a level-resident class".into(),
            })
        }
    };
    if !regular_samples.contains(level) {
        return Err(EngineError::WrongRule {
            generator: label.display(),
            detail: format!("level {} is not a regular sample", level.render()),
        });
    }
    Ok(0)
}

/// ⟨c₁(TW), Z⟩ for a fixed torus: c₁(TZ) + c₁(ν⁻) + c₁(ν⁺).
pub fn pair_c1_fixed_torus(datum: &FixedTorusDatum) -> Result<i64> {
    if datum.c1_minus != -datum.c1_plus {
        return Err(EngineError::InconsistentScenario {
            detail: format!(
                "normal Chern numbers at level {} are not opposite",
                datum.lambda.render()
            ),
        });
    }
    Ok(datum.c1_minus + datum.c1_plus)
}

/// ⟨c₁(TW), T²⟩ for a gradient torus: sum of the eigenline windings.
pub fn pair_c1_gradient_torus(spec: &ClutchingSpec) -> Result<i64> {
    let mut total = 0;
    for k in 0..spec.eigenlines.len() {
        total += clutching_winding(spec, k)?;
    }
    Ok(total)
}

/// ⟨c₁(TW), S⟩ for an invariant sphere with semifree rotation: the weight
/// difference of its two fixed ends divided by the sphere weight.
pub fn pair_c1_invariant_sphere(
    bottom_weights: &[i64; 6],
    top_weights: &[i64; 6],
    sphere_weight: i64,
) -> Result<i64> {
    if sphere_weight.abs() != 1 {
        return Err(EngineError::Unsupported {
            detail: format!("non-semifree sphere weight {sphere_weight}"),
        });
    }
    for w in bottom_weights.iter().chain(top_weights) {
        if w.abs() > 1 {
            return Err(EngineError::Unsupported {
                detail: format!("non-semifree tangent weight {w}"),
            });
        }
    }
    let top: i64 = top_weights.iter().sum();
    let bottom: i64 = bottom_weights.iter().sum();
    Ok((top - bottom) / sphere_weight)
}

/// Tangent weights at a torus fixed end of an invariant sphere: the torus
/// directions are fixed, the two normal lines rotate with weights ∓1.
pub fn semifree_end_weights() -> [i64; 6] {
    [0, 0, -1, 1, 0, 0]
}
