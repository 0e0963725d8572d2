//! Scenario schema: the full description of a glued circle-manifold, a
//! line-oriented text format for it, and the built-in scenarios.
//!
//! # File format
//!
//! One directive per line; `#` starts a comment. Levels are exact decimal or
//! `p/q` literals (float syntax is rejected), forms use the `s` grammar
//! (`-s31-s42`), labels the grammar of [`crate::label::parse_label`].
//!
//! ```text
//! name mcduff
//! base_dim 4
//! interval 0 1 0            # lo hi euler-form
//! interval 1 2 -s42
//! critical 1 13             # lambda image-indices
//! sample 0 1.5 3.5 5.5 7    # one regular value per interval
//! glue 3 4 1 2              # images of the base coordinates
//! lift T1+3 2 L1^0+L3^0-L1^3.5-L3^3.5
//! lift gamma 1 -pt^0+pt^3.5
//! ```

use num::{One, Zero};

use crate::error::{EngineError, Result};
use crate::forms::{parse_form, tuple_basis, Cycle, Form};
use crate::label::{parse_combo, Combo, Label, Level};
use crate::ratmat::rat;

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSpec {
    pub lo: Level,
    pub hi: Level,
    pub euler: Form,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSpec {
    pub lambda: Level,
    pub image: (usize, usize),
}

/// A declared boundary lift for the final gluing stage: a new generator in
/// the given degree whose boundary is a combination of classes of the two
/// cut level sets.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftSpec {
    pub label: Label,
    pub degree: usize,
    pub boundary: Combo,
}

/// Full description of a glued circle-manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub base_dim: usize,
    pub intervals: Vec<IntervalSpec>,
    pub criticals: Vec<CriticalSpec>,
    pub samples: Vec<Level>,
    pub gluing: Vec<usize>,
    pub lifts: Vec<LiftSpec>,
}

impl Scenario {
    pub fn range(&self) -> (Level, Level) {
        (
            self.intervals
                .first()
                .map(|i| i.lo.clone())
                .unwrap_or(Level::integer(0)),
            self.intervals
                .last()
                .map(|i| i.hi.clone())
                .unwrap_or(Level::integer(0)),
        )
    }

    pub fn euler_at(&self, sample: &Level) -> Option<&Form> {
        self.intervals
            .iter()
            .zip(&self.samples)
            .find(|(_, s)| *s == sample)
            .map(|(i, _)| &i.euler)
    }

    pub fn critical_at(&self, boundary: &Level) -> Option<&CriticalSpec> {
        self.criticals.iter().find(|c| &c.lambda == boundary)
    }

    /// Structural validation; every pipeline run starts here.
    pub fn validate(&self) -> Result<()> {
        let fail = |detail: String| Err(EngineError::InconsistentScenario { detail });
        if self.intervals.is_empty() {
            return fail("no regular intervals".into());
        }
        if self.samples.len() != self.intervals.len() {
            return fail(format!(
                "{} sample values for {} intervals",
                self.samples.len(),
                self.intervals.len()
            ));
        }
        if self.intervals.len() < 2 {
            return fail("need at least two intervals to cut the manifold".into());
        }
        let n = self.base_dim;
        for w in self.intervals.windows(2) {
            if w[0].hi != w[1].lo {
                return fail(format!(
                    "intervals [{},{}] and [{},{}] are not contiguous",
                    w[0].lo.render(),
                    w[0].hi.render(),
                    w[1].lo.render(),
                    w[1].hi.render()
                ));
            }
        }
        if self.samples.first() != self.intervals.first().map(|i| &i.lo)
            || self.samples.last() != self.intervals.last().map(|i| &i.hi)
        {
            return fail("first and last samples must sit on the glued boundary levels".into());
        }
        for (interval, sample) in self.intervals.iter().zip(&self.samples) {
            if sample < &interval.lo || sample > &interval.hi {
                return fail(format!(
                    "sample {} outside its interval [{},{}]",
                    sample.render(),
                    interval.lo.render(),
                    interval.hi.render()
                ));
            }
            if interval.euler.n() != n || interval.euler.degree() != 2 {
                return fail("Euler class has wrong shape".into());
            }
            if !interval.euler.has_integer_coefficients() {
                return fail(format!(
                    "Euler class {} is not integral",
                    interval.euler.render()
                ));
            }
        }
        // each interior boundary either carries exactly one critical level
        // (then the Euler classes jump by a unit dual torus class) or none
        // (then they agree)
        for w in self.intervals.windows(2) {
            let boundary = &w[0].hi;
            match self.critical_at(boundary) {
                None => {
                    if w[0].euler != w[1].euler {
                        return fail(format!(
                            "Euler class changes across the non-critical boundary {}",
                            boundary.render()
                        ));
                    }
                }
                Some(critical) => {
                    let (i, j) = critical.image;
                    if i >= j || i < 1 || j > n {
                        return fail(format!(
                            "bad image torus indices ({i},{j}) at level {}",
                            boundary.render()
                        ));
                    }
                    let delta = w[1].euler.add(&w[0].euler.neg());
                    let terms: Vec<_> = delta.terms().collect();
                    if terms.len() != 1 {
                        return fail(format!(
                            "Euler class jump across {} is not a single torus class: {}",
                            boundary.render(),
                            delta.render()
                        ));
                    }
                    let (tuple, coeff) = terms[0];
                    if !(coeff.is_one() || (-coeff.clone()).is_one()) {
                        return fail(format!(
                            "Euler class jump across {} is not unimodular",
                            boundary.render()
                        ));
                    }
                    let image_cycle = Cycle::basis(n, &[i, j]);
                    if !delta.pair(&image_cycle)?.is_zero() {
                        return fail(format!(
                            "Euler class jump across {} pairs nontrivially with its image torus",
                            boundary.render()
                        ));
                    }
                    if n == 4 {
                        let complement: Vec<usize> =
                            (1..=4).filter(|k| *k != i && *k != j).collect();
                        if tuple != &complement {
                            return fail(format!(
                                "Euler class jump across {} is not dual to the image torus",
                                boundary.render()
                            ));
                        }
                    }
                }
            }
        }
        for critical in &self.criticals {
            if !self
                .intervals
                .windows(2)
                .any(|w| w[0].hi == critical.lambda)
            {
                return fail(format!(
                    "critical level {} is not an interior interval boundary",
                    critical.lambda.render()
                ));
            }
        }
        if self.gluing.len() != n {
            return fail(format!(
                "gluing permutes {} coordinates, base dimension is {n}",
                self.gluing.len()
            ));
        }
        let mut seen = vec![false; n];
        for &img in &self.gluing {
            if img < 1 || img > n || seen[img - 1] {
                return fail("gluing is not a permutation".into());
            }
            seen[img - 1] = true;
        }
        for (k, &img) in self.gluing.iter().enumerate() {
            if self.gluing[img - 1] != k + 1 {
                return fail("gluing is not an involution".into());
            }
        }
        for lift in &self.lifts {
            if lift.degree == 0 || lift.degree > 2 {
                return fail(format!(
                    "lift {} declared in unsupported degree {}",
                    lift.label.display(),
                    lift.degree
                ));
            }
        }
        Ok(())
    }

    /// The sample value splitting the manifold into two halves.
    pub fn mid_sample(&self) -> Level {
        self.samples[self.samples.len() / 2].clone()
    }

    /// True when the scenario is fixed by reversing the moment interval and
    /// mirroring the base coordinates (i ↦ n+1−i). Reversal flips the
    /// co-orientation of level sets, so the mirrored Euler class is negated.
    pub fn is_mirror_symmetric(&self) -> bool {
        let n = self.base_dim;
        let (lo, hi) = self.range();
        let total = lo.to_rational() + hi.to_rational();
        let mirror_level =
            |l: &Level| Level::from_rational(&(total.clone() - l.to_rational())).unwrap();
        let mirror_form = |f: &Form| f.map_indices(|i| n + 1 - i).neg();
        let mirrored_intervals: Vec<IntervalSpec> = self
            .intervals
            .iter()
            .rev()
            .map(|iv| IntervalSpec {
                lo: mirror_level(&iv.hi),
                hi: mirror_level(&iv.lo),
                euler: mirror_form(&iv.euler),
            })
            .collect();
        if mirrored_intervals != self.intervals {
            return false;
        }
        let mirrored_samples: Vec<Level> = self.samples.iter().rev().map(mirror_level).collect();
        if mirrored_samples != self.samples {
            return false;
        }
        let mut mirrored_criticals: Vec<CriticalSpec> = self
            .criticals
            .iter()
            .map(|c| {
                let (i, j) = c.image;
                let (mi, mj) = (n + 1 - j, n + 1 - i);
                CriticalSpec {
                    lambda: mirror_level(&c.lambda),
                    image: (mi.min(mj), mi.max(mj)),
                }
            })
            .collect();
        mirrored_criticals.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        let mut sorted: Vec<CriticalSpec> = self.criticals.clone();
        sorted.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        mirrored_criticals == sorted
    }

    // -- text format ---------------------------------------------------

    pub fn parse(text: &str) -> Result<Scenario> {
        let mut name = String::from("scenario");
        let mut base_dim: Option<usize> = None;
        let mut intervals = Vec::new();
        let mut criticals = Vec::new();
        let mut samples = Vec::new();
        let mut gluing = Vec::new();
        let mut lifts = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap();
            let rest: Vec<&str> = parts.collect();
            let here = |detail: String| EngineError::Parse {
                detail: format!("line {}: {detail}", lineno + 1),
            };
            match key {
                "name" => {
                    name = rest.join(" ");
                }
                "base_dim" => {
                    base_dim = Some(
                        rest.first()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| here("bad base_dim".into()))?,
                    );
                }
                "interval" => {
                    if rest.len() != 3 {
                        return Err(here("interval wants `lo hi euler`".into()));
                    }
                    let n = base_dim.ok_or_else(|| here("base_dim must come first".into()))?;
                    intervals.push(IntervalSpec {
                        lo: Level::parse(rest[0])?,
                        hi: Level::parse(rest[1])?,
                        euler: parse_form(rest[2], n, 2)?,
                    });
                }
                "critical" => {
                    if rest.len() != 2 {
                        return Err(here("critical wants `lambda indices`".into()));
                    }
                    let digits: Vec<usize> = rest[1]
                        .chars()
                        .map(|c| c.to_digit(10).map(|d| d as usize))
                        .collect::<Option<_>>()
                        .ok_or_else(|| here("bad image indices".into()))?;
                    if digits.len() != 2 {
                        return Err(here("image torus wants two indices".into()));
                    }
                    criticals.push(CriticalSpec {
                        lambda: Level::parse(rest[0])?,
                        image: (digits[0].min(digits[1]), digits[0].max(digits[1])),
                    });
                }
                "sample" => {
                    for s in rest {
                        samples.push(Level::parse(s)?);
                    }
                }
                "glue" => {
                    gluing = rest
                        .iter()
                        .map(|s| s.parse::<usize>().ok())
                        .collect::<Option<_>>()
                        .ok_or_else(|| here("bad gluing permutation".into()))?;
                }
                "lift" => {
                    if rest.len() != 3 {
                        return Err(here("lift wants `name degree boundary`".into()));
                    }
                    lifts.push(LiftSpec {
                        label: crate::label::parse_label(rest[0])?,
                        degree: rest[1]
                            .parse()
                            .map_err(|_| here("bad lift degree".into()))?,
                        boundary: parse_combo(rest[2])?,
                    });
                }
                other => {
                    return Err(here(format!("unknown directive `{other}`")));
                }
            }
        }
        let scenario = Scenario {
            name,
            base_dim: base_dim.ok_or_else(|| EngineError::Parse {
                detail: "missing base_dim".into(),
            })?,
            intervals,
            criticals,
            samples,
            gluing,
            lifts,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name {}\n", self.name));
        out.push_str(&format!("base_dim {}\n", self.base_dim));
        for iv in &self.intervals {
            out.push_str(&format!(
                "interval {} {} {}\n",
                iv.lo.render(),
                iv.hi.render(),
                iv.euler.render()
            ));
        }
        for c in &self.criticals {
            out.push_str(&format!(
                "critical {} {}{}\n",
                c.lambda.render(),
                c.image.0,
                c.image.1
            ));
        }
        let samples: Vec<String> = self.samples.iter().map(|s| s.render()).collect();
        out.push_str(&format!("sample {}\n", samples.join(" ")));
        let glue: Vec<String> = self.gluing.iter().map(|g| g.to_string()).collect();
        out.push_str(&format!("glue {}\n", glue.join(" ")));
        for lift in &self.lifts {
            out.push_str(&format!(
                "lift {} {} {}\n",
                lift.label.display(),
                lift.degree,
                lift.boundary.render()
            ));
        }
        out
    }

    // -- built-in scenarios ----------------------------------------------

    /// The glued manifold with critical levels 1, 2, 5, 6 over T⁴ and the
    /// coordinate-swapping boundary involution.
    pub fn mcduff() -> Scenario {
        let n = 4;
        let zero = Form::zero(n, 2);
        let e15 = Form::basis(n, &[4, 2]).neg();
        let e35 = Form::basis(n, &[3, 1]).add(&Form::basis(n, &[4, 2])).neg();
        let e55 = Form::basis(n, &[3, 1]).neg();
        let lv = |num: i64, den: i64| Level::new(num, den);
        let circle = |i: usize, level: Level| Label::LevelTorus {
            indices: vec![i],
            level,
        };
        let mut t13 = Combo::single(circle(1, lv(0, 1)));
        t13.push(circle(3, lv(0, 1)), rat(1));
        t13.push(circle(1, lv(7, 2)), rat(-1));
        t13.push(circle(3, lv(7, 2)), rat(-1));
        let mut t24 = Combo::single(circle(2, lv(0, 1)));
        t24.push(circle(4, lv(0, 1)), rat(1));
        t24.push(circle(2, lv(7, 2)), rat(-1));
        t24.push(circle(4, lv(7, 2)), rat(-1));
        let g61 = Combo::single(Label::FiberClass {
            index: None,
            level: lv(0, 1),
        });
        let mut gamma = Combo::single(Label::LevelTorus {
            indices: vec![],
            level: lv(0, 1),
        })
        .negate();
        gamma.push(
            Label::LevelTorus {
                indices: vec![],
                level: lv(7, 2),
            },
            rat(1),
        );
        Scenario {
            name: "mcduff".into(),
            base_dim: n,
            intervals: vec![
                IntervalSpec {
                    lo: lv(0, 1),
                    hi: lv(1, 1),
                    euler: zero.clone(),
                },
                IntervalSpec {
                    lo: lv(1, 1),
                    hi: lv(2, 1),
                    euler: e15,
                },
                IntervalSpec {
                    lo: lv(2, 1),
                    hi: lv(5, 1),
                    euler: e35,
                },
                IntervalSpec {
                    lo: lv(5, 1),
                    hi: lv(6, 1),
                    euler: e55,
                },
                IntervalSpec {
                    lo: lv(6, 1),
                    hi: lv(7, 1),
                    euler: zero,
                },
            ],
            criticals: vec![
                CriticalSpec {
                    lambda: lv(1, 1),
                    image: (1, 3),
                },
                CriticalSpec {
                    lambda: lv(2, 1),
                    image: (2, 4),
                },
                CriticalSpec {
                    lambda: lv(5, 1),
                    image: (1, 3),
                },
                CriticalSpec {
                    lambda: lv(6, 1),
                    image: (2, 4),
                },
            ],
            samples: vec![lv(0, 1), lv(3, 2), lv(7, 2), lv(11, 2), lv(7, 1)],
            gluing: vec![3, 4, 1, 2],
            lifts: vec![
                LiftSpec {
                    label: Label::GradientTorus {
                        indices: vec![1, 3],
                    },
                    degree: 2,
                    boundary: t13,
                },
                LiftSpec {
                    label: Label::GradientTorus {
                        indices: vec![2, 4],
                    },
                    degree: 2,
                    boundary: t24,
                },
                LiftSpec {
                    label: Label::InvariantSphere {
                        from: lv(6, 1),
                        to: lv(1, 1),
                    },
                    degree: 2,
                    boundary: g61,
                },
                LiftSpec {
                    label: Label::Loop {
                        name: "gamma".into(),
                    },
                    degree: 1,
                    boundary: gamma,
                },
            ],
        }
    }

    /// The product T⁵ × S¹ (no critical levels, trivial bundles, identity
    /// gluing): a known-answer control whose Betti numbers are binomial.
    pub fn trivial_product() -> Scenario {
        let n = 4;
        let zero = Form::zero(n, 2);
        let lv = |num: i64, den: i64| Level::new(num, den);
        let mid = lv(7, 2);
        let mut lifts: Vec<LiftSpec> = Vec::new();
        // product tori: each level circle swept around the moment circle
        for i in 1..=n {
            let mut boundary = Combo::single(Label::LevelTorus {
                indices: vec![i],
                level: mid.clone(),
            });
            boundary.push(
                Label::LevelTorus {
                    indices: vec![i],
                    level: lv(0, 1),
                },
                rat(-1),
            );
            lifts.push(LiftSpec {
                label: Label::GradientTorus { indices: vec![i] },
                degree: 2,
                boundary,
            });
        }
        let mut fiber_boundary = Combo::single(Label::FiberClass {
            index: None,
            level: mid.clone(),
        });
        fiber_boundary.push(
            Label::FiberClass {
                index: None,
                level: lv(0, 1),
            },
            rat(-1),
        );
        lifts.push(LiftSpec {
            label: Label::GradientTorus { indices: vec![5] },
            degree: 2,
            boundary: fiber_boundary,
        });
        let mut gamma = Combo::single(Label::LevelTorus {
            indices: vec![],
            level: lv(0, 1),
        })
        .negate();
        gamma.push(
            Label::LevelTorus {
                indices: vec![],
                level: mid.clone(),
            },
            rat(1),
        );
        lifts.push(LiftSpec {
            label: Label::Loop {
                name: "gamma".into(),
            },
            degree: 1,
            boundary: gamma,
        });
        Scenario {
            name: "t5xs1".into(),
            base_dim: n,
            intervals: vec![
                IntervalSpec {
                    lo: lv(0, 1),
                    hi: lv(2, 1),
                    euler: zero.clone(),
                },
                IntervalSpec {
                    lo: lv(2, 1),
                    hi: lv(5, 1),
                    euler: zero.clone(),
                },
                IntervalSpec {
                    lo: lv(5, 1),
                    hi: lv(7, 1),
                    euler: zero,
                },
            ],
            criticals: vec![],
            samples: vec![lv(0, 1), mid.clone(), lv(7, 1)],
            gluing: vec![1, 2, 3, 4],
            lifts,
        }
    }
}

/// Dimension of degree-k homology of Tⁿ; the product-control oracle.
pub fn torus_betti(n: usize, k: usize) -> usize {
    tuple_basis(n, k).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mcduff_validates() {
        Scenario::mcduff().validate().unwrap();
    }

    #[test]
    fn mcduff_is_mirror_symmetric() {
        assert!(Scenario::mcduff().is_mirror_symmetric());
    }

    #[test]
    fn trivial_product_validates_and_is_symmetric() {
        Scenario::trivial_product().validate().unwrap();
        assert!(Scenario::trivial_product().is_mirror_symmetric());
    }

    #[test]
    fn text_round_trip() {
        let s = Scenario::mcduff();
        let text = s.to_text();
        let parsed = Scenario::parse(&text).unwrap();
        assert_eq!(s, parsed);
    }

    #[test]
    fn validation_rejects_bad_jumps() {
        let mut s = Scenario::mcduff();
        // break the jump across level 2
        s.intervals[2].euler = Form::basis(4, &[1, 2]);
        assert!(s.validate().is_err());
    }

    #[test]
    fn validation_rejects_non_involution() {
        let mut s = Scenario::mcduff();
        s.gluing = vec![2, 3, 4, 1];
        assert!(s.validate().is_err());
    }

    #[test]
    fn sample_count_must_match() {
        let mut s = Scenario::mcduff();
        s.samples.pop();
        assert!(s.validate().is_err());
    }

    #[test]
    fn float_literals_rejected() {
        assert!(Level::parse("1.5e3").is_err());
        assert!(Level::parse("nan").is_err());
    }

    #[test]
    fn mid_sample_of_mcduff() {
        assert_eq!(Scenario::mcduff().mid_sample(), Level::new(7, 2));
    }

    #[test]
    fn shipped_scenario_files_match_builders() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
        let mcduff = std::fs::read_to_string(dir.join("mcduff.txt")).unwrap();
        assert_eq!(Scenario::parse(&mcduff).unwrap(), Scenario::mcduff());
        let trivial = std::fs::read_to_string(dir.join("t5xs1.txt")).unwrap();
        assert_eq!(
            Scenario::parse(&trivial).unwrap(),
            Scenario::trivial_product()
        );
    }
}
