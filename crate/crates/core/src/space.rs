//! Homology groups presented by named generators and linear relations.

use num::{One, Zero};

use crate::error::{EngineError, Result};
use crate::label::{Combo, Label};
use crate::ratmat::{cokernel_of, Rational, RationalMatrix, Subspace};

/// A homology group in one degree: an ordered list of named generators plus
/// a subspace of linear relations among them. rank = #labels − dim(relations).
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledSpace {
    degree: usize,
    labels: Vec<Label>,
    relations: Subspace,
}

impl LabeledSpace {
    pub fn new(degree: usize, labels: Vec<Label>, relations: Subspace) -> Self {
        assert_eq!(relations.ambient_dim(), labels.len());
        LabeledSpace {
            degree,
            labels,
            relations,
        }
    }

    /// A space with the given generators and no relations (a basis).
    pub fn free(degree: usize, labels: Vec<Label>) -> Self {
        let n = labels.len();
        LabeledSpace::new(degree, labels, Subspace::zero(n))
    }

    pub fn empty(degree: usize) -> Self {
        LabeledSpace::free(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn rank(&self) -> usize {
        self.labels.len() - self.relations.dim()
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Unit coordinate vector of a label.
    pub fn unit(&self, label: &Label) -> Result<Vec<Rational>> {
        let i = self
            .index_of(label)
            .ok_or_else(|| EngineError::Unsupported {
                detail: format!("label {} not in space", label.display()),
            })?;
        let mut v = vec![Rational::zero(); self.labels.len()];
        v[i] = Rational::one();
        Ok(v)
    }

    /// Coordinate vector of a formal combination of labels.
    pub fn vector_of(&self, combo: &Combo) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.labels.len()];
        for (label, coeff) in &combo.0 {
            let i = self
                .index_of(label)
                .ok_or_else(|| EngineError::Unsupported {
                    detail: format!("label {} not in space", label.display()),
                })?;
            v[i] += coeff;
        }
        Ok(v)
    }

    pub fn combo_of(&self, v: &[Rational]) -> Combo {
        let mut c = Combo::zero();
        for (i, coeff) in v.iter().enumerate() {
            c.push(self.labels[i].clone(), coeff.clone());
        }
        c
    }

    /// True when the two label vectors present the same homology class.
    pub fn same_class(&self, a: &[Rational], b: &[Rational]) -> Result<bool> {
        let diff: Vec<Rational> = a
            .iter()
            .zip(b)
            .map(|(x, y)| x.clone() - y.clone())
            .collect();
        self.relations.member(&diff)
    }

    pub fn is_zero_class(&self, v: &[Rational]) -> Result<bool> {
        self.relations.member(v)
    }

    /// Fixes representative coordinates for the quotient by the relations.
    pub fn quotient(&self) -> QuotientMap {
        let (reps, project) = cokernel_of(&self.relations);
        let rep_indices: Vec<usize> = reps
            .basis()
            .iter()
            .map(|b| {
                b.iter()
                    .position(|x| x.is_one())
                    .expect("rep is a unit vector")
            })
            .collect();
        let mut lift = RationalMatrix::zero(self.labels.len(), rep_indices.len());
        for (k, &i) in rep_indices.iter().enumerate() {
            lift.set(i, k, Rational::one());
        }
        QuotientMap {
            project,
            lift,
            rep_labels: rep_indices
                .iter()
                .map(|&i| self.labels[i].clone())
                .collect(),
        }
    }

    /// Direct sum (disjoint union of spaces), keeping label order.
    pub fn direct_sum(&self, other: &LabeledSpace) -> LabeledSpace {
        assert_eq!(self.degree, other.degree);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let total = labels.len();
        let mut rows = Vec::new();
        for b in self.relations.basis() {
            let mut v = b.clone();
            v.resize(total, Rational::zero());
            rows.push(v);
        }
        for b in other.relations.basis() {
            let mut v = vec![Rational::zero(); self.labels.len()];
            v.extend(b.iter().cloned());
            rows.push(v);
        }
        LabeledSpace::new(self.degree, labels, Subspace::from_rows(total, rows))
    }
}

/// Representative coordinates for the quotient of a labeled space by its
/// relations. `project · lift = I`; `project` kills the relations.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    /// labels → rank coordinates
    pub project: RationalMatrix,
    /// rank coordinates → labels (columns are representative unit vectors)
    pub lift: RationalMatrix,
    /// the label each representative coordinate corresponds to
    pub rep_labels: Vec<Label>,
}

/// A linear map between labeled spaces, stored in label coordinates
/// (columns indexed by source labels, rows by target labels).
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledMap {
    pub matrix: RationalMatrix,
}

impl LabeledMap {
    pub fn zero(source: &LabeledSpace, target: &LabeledSpace) -> Self {
        LabeledMap {
            matrix: RationalMatrix::zero(target.num_labels(), source.num_labels()),
        }
    }

    /// Builds a map column by column from label images.
    pub fn from_images(
        source: &LabeledSpace,
        target: &LabeledSpace,
        image: impl Fn(&Label) -> Result<Combo>,
    ) -> Result<Self> {
        let mut m = RationalMatrix::zero(target.num_labels(), source.num_labels());
        for (j, label) in source.labels().iter().enumerate() {
            let v = target.vector_of(&image(label)?)?;
            for (i, x) in v.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(LabeledMap { matrix: m })
    }

    /// Checks the map descends to the quotients: relations map to relations.
    pub fn check_well_defined(
        &self,
        source: &LabeledSpace,
        target: &LabeledSpace,
        context: &str,
    ) -> Result<()> {
        for b in source.relations().basis() {
            let img = self.matrix.mul_vec(b);
            if !target.relations().member(&img)? {
                return Err(EngineError::MapNotWellDefined {
                    context: format!("{context}: relation {}", source.combo_of(b).render()),
                });
            }
        }
        Ok(())
    }

    /// The induced matrix on quotient coordinates.
    pub fn on_quotients(&self, source_q: &QuotientMap, target_q: &QuotientMap) -> RationalMatrix {
        target_q.project.mul(&self.matrix).mul(&source_q.lift)
    }
}
