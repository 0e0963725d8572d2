//! Generic Mayer–Vietoris solver in one degree with generator tracking.
//!
//! Given the homology of two pieces and their intersection in degrees n and
//! n−1, the solver presents H_n(Y) as the cokernel of (i*, j*) in degree n
//! plus one boundary generator per declared lift spanning ker(i*, j*) in
//! degree n−1. Boundary lifts are caller-declared, never synthesized: the
//! solver only verifies that their boundary values span the kernel.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::error::{EngineError, Result};
use crate::label::{Combo, Label};
use crate::ratmat::{cokernel_of, Rational, RationalMatrix, Subspace};
use crate::space::{LabeledMap, LabeledSpace, QuotientMap};

/// A boundary-lift declaration: a new generator of H_n(Y) together with its
/// boundary value in H_{n−1}(A∩A′), written over the intersection labels.
#[derive(Clone, Debug)]
pub struct DeclaredLift {
    pub label: Label,
    pub boundary: Combo,
}

/// One Mayer–Vietoris problem in degree `degree`.
#[derive(Clone, Debug)]
pub struct MvProblem {
    pub stage: String,
    pub degree: usize,
    pub intersection: LabeledSpace,
    pub left: LabeledSpace,
    pub right: LabeledSpace,
    pub into_left: LabeledMap,
    pub into_right: LabeledMap,
    /// degree n−1 data, used to decide whether the boundary map vanishes
    pub intersection_low: LabeledSpace,
    pub left_low: LabeledSpace,
    pub right_low: LabeledSpace,
    pub into_left_low: LabeledMap,
    pub into_right_low: LabeledMap,
    pub lifts: Vec<DeclaredLift>,
}

/// An equality recorded by a solve: `lhs` (a combination of A-labels) and
/// `rhs` (of A′-labels) present the same class of H_n(Y), both being images
/// of `source` in the intersection. `modulus` lists fiber-direction labels
/// the identification is only canonical up to; `retired` marks relations
/// whose participants die at a later pipeline stage.
#[derive(Clone, Debug, PartialEq)]
pub struct LedgerEntry {
    pub stage: String,
    pub source: Combo,
    pub lhs: Combo,
    pub rhs: Combo,
    pub modulus: Vec<Label>,
    pub retired: bool,
}

impl LedgerEntry {
    pub fn render(&self) -> String {
        let mut s = format!("{} = {}", self.lhs.render(), self.rhs.render());
        if !self.modulus.is_empty() {
            let mods: Vec<String> = self.modulus.iter().map(|l| l.display()).collect();
            s.push_str(&format!(" [mod {}]", mods.join(", ")));
        }
        if self.retired {
            s.push_str(" [retired]");
        }
        s
    }
}

/// Result of one Mayer–Vietoris solve.
#[derive(Clone, Debug)]
pub struct MvSolution {
    /// H_n(Y): cokernel representatives first, boundary lifts last; the
    /// labels form a basis (no relations).
    pub homology: LabeledSpace,
    pub ledger: Vec<LedgerEntry>,
    pub boundary_generators: Vec<(Label, Combo)>,
    /// induced map H_n(A) → H_n(Y), in label coordinates of A
    pub project_left: RationalMatrix,
    /// induced map H_n(A′) → H_n(Y)
    pub project_right: RationalMatrix,
    pub audit: ExactnessAudit,
}

/// The rank bookkeeping of one solve, asserted in tests and by `--check`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessAudit {
    pub stage: String,
    pub degree: usize,
    pub rank_pair_map: usize,
    pub kernel_low_dim: usize,
    pub left_rank: usize,
    pub right_rank: usize,
    pub homology_rank: usize,
}

impl ExactnessAudit {
    pub fn holds(&self) -> bool {
        self.homology_rank
            == self.left_rank + self.right_rank - self.rank_pair_map + self.kernel_low_dim
    }
}

pub fn solve_mv(p: &MvProblem) -> Result<MvSolution> {
    p.into_left
        .check_well_defined(&p.intersection, &p.left, &format!("{} (i*)", p.stage))?;
    p.into_right
        .check_well_defined(&p.intersection, &p.right, &format!("{} (j*)", p.stage))?;
    p.into_left_low.check_well_defined(
        &p.intersection_low,
        &p.left_low,
        &format!("{} (i*, low)", p.stage),
    )?;
    p.into_right_low.check_well_defined(
        &p.intersection_low,
        &p.right_low,
        &format!("{} (j*, low)", p.stage),
    )?;

    let inter_q = p.intersection.quotient();
    let left_q = p.left.quotient();
    let right_q = p.right.quotient();
    let inter_low_q = p.intersection_low.quotient();
    let left_low_q = p.left_low.quotient();
    let right_low_q = p.right_low.quotient();

    let bar_left = p.into_left.on_quotients(&inter_q, &left_q);
    let bar_right = p.into_right.on_quotients(&inter_q, &right_q);
    let bar_left_low = p.into_left_low.on_quotients(&inter_low_q, &left_low_q);
    let bar_right_low = p.into_right_low.on_quotients(&inter_low_q, &right_low_q);

    let rank_a = left_q.rep_labels.len();
    let rank_b = right_q.rep_labels.len();

    // kernel of (i*, j*) one degree down, on quotient coordinates
    let low_stack = bar_left_low.vstack(&bar_right_low);
    let kernel_low = low_stack.kernel_basis();

    // verify declared boundary values form a basis of that kernel
    let mut lift_vectors: Vec<Vec<Rational>> = Vec::new();
    for lift in &p.lifts {
        let v = p.intersection_low.vector_of(&lift.boundary)?;
        let vq = inter_low_q.project.mul_vec(&v);
        if !kernel_low.member(&vq)? {
            return Err(EngineError::LiftNotInKernel {
                detail: format!(
                    "{}: ∂({}) = {} is not in ker(i*,j*)",
                    p.stage,
                    lift.label.display(),
                    lift.boundary.render()
                ),
            });
        }
        lift_vectors.push(vq);
    }
    let lift_rank = if lift_vectors.is_empty() {
        0
    } else {
        RationalMatrix::from_rows(lift_vectors.clone()).rank()
    };
    if lift_rank != kernel_low.dim() || p.lifts.len() != kernel_low.dim() {
        return Err(EngineError::UnderdeterminedBoundary {
            degree: p.degree,
            detail: format!(
                "{}: kernel has dimension {}, {} declared lifts of joint rank {}",
                p.stage,
                kernel_low.dim(),
                p.lifts.len(),
                lift_rank
            ),
        });
    }

    // subspace of H_n(A)⊕H_n(A′) to kill: columns (i(x), −j(x)); coordinates
    // are permuted A′-first so that echelon pivots eliminate A′ labels and
    // cokernel representatives prefer A-side names.
    let inter_rank = inter_q.rep_labels.len();
    let mut killed_rows: Vec<Vec<Rational>> = Vec::new();
    for m in 0..inter_rank {
        let mut unit = vec![Rational::zero(); inter_rank];
        unit[m] = Rational::one();
        let li = bar_left.mul_vec(&unit);
        let ri = bar_right.mul_vec(&unit);
        let mut row: Vec<Rational> = ri.iter().map(|x| -x.clone()).collect();
        row.extend(li);
        killed_rows.push(row);
    }
    let killed = Subspace::from_rows(rank_a + rank_b, killed_rows);
    let rank_pair_map = killed.dim();
    let (reps, proj_permuted) = cokernel_of(&killed);

    // translate permuted coordinates ([A′ | A]) back to labels
    let coord_label = |permuted: usize| -> Label {
        if permuted < rank_b {
            right_q.rep_labels[permuted].clone()
        } else {
            left_q.rep_labels[permuted - rank_b].clone()
        }
    };
    // present A-side representatives first
    let mut rep_coords: Vec<usize> = reps
        .basis()
        .iter()
        .map(|b| b.iter().position(|x| x.is_one()).expect("unit rep"))
        .collect();
    rep_coords.sort_by_key(|&c| if c >= rank_b { (0, c - rank_b) } else { (1, c) });
    let rep_order: BTreeMap<usize, usize> = reps
        .basis()
        .iter()
        .enumerate()
        .map(|(row, b)| {
            let coord = b.iter().position(|x| x.is_one()).unwrap();
            (coord, row)
        })
        .collect();

    let coker_dim = rep_coords.len();
    let total = coker_dim + p.lifts.len();
    let mut labels: Vec<Label> = rep_coords.iter().map(|&c| coord_label(c)).collect();
    labels.extend(p.lifts.iter().map(|l| l.label.clone()));

    // reordered projection: row k of the final map is the rep_order row of
    // the raw cokernel projection for the k-th presented representative
    let proj_rows: Vec<Vec<Rational>> = rep_coords
        .iter()
        .map(|c| proj_permuted.row(rep_order[c]))
        .collect();
    let proj = if proj_rows.is_empty() {
        RationalMatrix::zero(0, rank_a + rank_b)
    } else {
        RationalMatrix::from_rows(proj_rows)
    };

    // induced maps from the pieces, in their label coordinates
    let embed = |is_left: bool, q: &QuotientMap, n_labels: usize| -> RationalMatrix {
        let mut m = RationalMatrix::zero(total, n_labels);
        for (j, col) in (0..n_labels).enumerate() {
            let mut v = vec![Rational::zero(); n_labels];
            v[col] = Rational::one();
            let vq = q.project.mul_vec(&v);
            let mut permuted = vec![Rational::zero(); rank_a + rank_b];
            if is_left {
                for (k, x) in vq.into_iter().enumerate() {
                    permuted[rank_b + k] = x;
                }
            } else {
                for (k, x) in vq.into_iter().enumerate() {
                    permuted[k] = x;
                }
            }
            let img = proj.mul_vec(&permuted);
            for (i, x) in img.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    };
    let project_left = embed(true, &left_q, p.left.num_labels());
    let project_right = embed(false, &right_q, p.right.num_labels());

    // ledger: one entry per intersection representative with nonzero image
    let mut ledger = Vec::new();
    for m in 0..inter_rank {
        let mut unit = vec![Rational::zero(); inter_rank];
        unit[m] = Rational::one();
        let lhs_labels = left_q.lift.mul_vec(&bar_left.mul_vec(&unit));
        let rhs_labels = right_q.lift.mul_vec(&bar_right.mul_vec(&unit));
        let lhs = p.left.combo_of(&lhs_labels);
        let rhs = p.right.combo_of(&rhs_labels);
        if lhs.is_zero() && rhs.is_zero() {
            continue;
        }
        ledger.push(LedgerEntry {
            stage: p.stage.clone(),
            source: Combo::single(inter_q.rep_labels[m].clone()),
            lhs,
            rhs,
            modulus: Vec::new(),
            retired: false,
        });
    }

    let homology = LabeledSpace::free(p.degree, labels);
    let audit = ExactnessAudit {
        stage: p.stage.clone(),
        degree: p.degree,
        rank_pair_map,
        kernel_low_dim: kernel_low.dim(),
        left_rank: rank_a,
        right_rank: rank_b,
        homology_rank: homology.rank(),
    };
    debug_assert!(audit.holds());

    Ok(MvSolution {
        homology,
        ledger,
        boundary_generators: p
            .lifts
            .iter()
            .map(|l| (l.label.clone(), l.boundary.clone()))
            .collect(),
        project_left,
        project_right,
        audit,
    })
}

// ---------------------------------------------------------------------------
// relation closure
// ---------------------------------------------------------------------------

/// A class of generators identified up to sign; `members` carry the sign
/// relative to the canonical representative.
#[derive(Clone, Debug, PartialEq)]
pub struct EqClass {
    pub rep: Label,
    pub members: Vec<(Label, i64)>,
}

/// Ledger closure: sign-tracking union-find classes, vanishing generators,
/// and the multi-term relations that survive as affine relations.
#[derive(Clone, Debug)]
pub struct RelationClosure {
    pub classes: Vec<EqClass>,
    /// canonical representatives whose class is zero
    pub zero_classes: Vec<Label>,
    pub affine: Vec<Combo>,
}

impl RelationClosure {
    /// Looks up the canonical (representative, sign) of a label.
    pub fn canonical(&self, label: &Label) -> (Label, i64) {
        for class in &self.classes {
            for (member, sign) in &class.members {
                if member == label {
                    return (class.rep.clone(), *sign);
                }
            }
        }
        (label.clone(), 1)
    }

    /// True when the two labels are identified with the given relative sign.
    pub fn identified(&self, a: &Label, b: &Label, sign: i64) -> bool {
        let (ra, sa) = self.canonical(a);
        let (rb, sb) = self.canonical(b);
        ra == rb && sa * sb == sign
    }
}

struct SignedUnionFind {
    parent: Vec<usize>,
    sign: Vec<i64>, // sign relative to parent
}

impl SignedUnionFind {
    fn new() -> Self {
        SignedUnionFind {
            parent: Vec::new(),
            sign: Vec::new(),
        }
    }

    fn add(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.sign.push(1);
        id
    }

    /// Returns (root, sign of x relative to root).
    fn find(&mut self, x: usize) -> (usize, i64) {
        if self.parent[x] == x {
            return (x, 1);
        }
        let (root, parent_sign) = self.find(self.parent[x]);
        let total = self.sign[x] * parent_sign;
        self.parent[x] = root;
        self.sign[x] = total;
        (root, total)
    }

    /// Enforces x = rel * y. Errors on a sign conflict.
    fn union(&mut self, x: usize, y: usize, rel: i64) -> std::result::Result<(), ()> {
        let (rx, sx) = self.find(x);
        let (ry, sy) = self.find(y);
        if rx == ry {
            return if sx == rel * sy { Ok(()) } else { Err(()) };
        }
        // x = sx·rx, y = sy·ry, want x = rel·y ⇒ rx = sx·rel·sy · ry
        self.parent[rx] = ry;
        self.sign[rx] = sx * rel * sy;
        Ok(())
    }
}

/// Union-find closure of the single-label equalities in a ledger; multi-term
/// entries survive as affine relations (normalized through the classes), and
/// single-label remainders become vanishing records. An equality forcing
/// x = −x is a contradiction.
pub fn relation_closure(entries: &[LedgerEntry]) -> Result<RelationClosure> {
    relation_closure_with_basis(entries, &[])
}

/// Like [`relation_closure`], but any nonzero relation supported entirely on
/// the given surviving basis generators is a contradiction (they are
/// independent by construction).
pub fn relation_closure_with_basis(
    entries: &[LedgerEntry],
    surviving: &[Label],
) -> Result<RelationClosure> {
    let mut ids: BTreeMap<Label, usize> = BTreeMap::new();
    let mut labels: Vec<Label> = Vec::new();
    let mut uf = SignedUnionFind::new();
    let mut affine_raw: Vec<Combo> = Vec::new();

    let id_of = |label: &Label,
                 ids: &mut BTreeMap<Label, usize>,
                 labels: &mut Vec<Label>,
                 uf: &mut SignedUnionFind| {
        *ids.entry(label.clone()).or_insert_with(|| {
            labels.push(label.clone());
            uf.add()
        })
    };

    for entry in entries {
        match (entry.lhs.as_signed_single(), entry.rhs.as_signed_single()) {
            (Some((la, sa)), Some((lb, sb))) => {
                let ia = id_of(&la, &mut ids, &mut labels, &mut uf);
                let ib = id_of(&lb, &mut ids, &mut labels, &mut uf);
                // sa·la = sb·lb  ⇒  la = (sa·sb)·lb
                if uf.union(ia, ib, sa * sb).is_err() {
                    return Err(EngineError::Contradiction {
                        detail: format!(
                            "{} = {} conflicts with earlier identifications",
                            entry.lhs.render(),
                            entry.rhs.render()
                        ),
                    });
                }
            }
            _ => {
                // lhs − rhs = 0 as an affine relation
                let mut combo = entry.lhs.clone();
                for (l, c) in &entry.rhs.0 {
                    combo.push(l.clone(), -c.clone());
                }
                if !combo.is_zero() {
                    affine_raw.push(combo);
                }
            }
        }
    }

    // assemble classes
    let mut by_root: BTreeMap<usize, Vec<(Label, i64)>> = BTreeMap::new();
    for (label, &id) in &ids {
        let (root, sign) = uf.find(id);
        by_root.entry(root).or_default().push((label.clone(), sign));
    }
    let mut classes = Vec::new();
    for (_, mut members) in by_root {
        members.sort_by(|a, b| a.0.cmp(&b.0));
        // normalize so the representative has sign +1
        let rep = members[0].0.clone();
        let rep_sign = members[0].1;
        let members: Vec<(Label, i64)> = members
            .into_iter()
            .map(|(l, s)| (l, s * rep_sign))
            .collect();
        classes.push(EqClass { rep, members });
    }
    let closure_so_far = RelationClosure {
        classes,
        zero_classes: Vec::new(),
        affine: Vec::new(),
    };

    // normalize affine relations through the classes
    let mut affine = Vec::new();
    let mut zero_classes: Vec<Label> = Vec::new();
    for combo in affine_raw {
        let mut normalized = Combo::zero();
        for (label, coeff) in &combo.0 {
            let (rep, sign) = closure_so_far.canonical(label);
            normalized.push(rep, coeff * Rational::from_integer(sign.into()));
        }
        if normalized.is_zero() {
            continue;
        }
        if !surviving.is_empty()
            && normalized.0.iter().all(|(l, _)| {
                surviving
                    .iter()
                    .any(|s| closure_so_far.canonical(s).0 == *l)
            })
        {
            return Err(EngineError::Contradiction {
                detail: format!(
                    "relation {} reduces to {} = 0 among surviving generators",
                    combo.render(),
                    normalized.render()
                ),
            });
        }
        if normalized.0.len() == 1 {
            let label = normalized.0[0].0.clone();
            if !zero_classes.contains(&label) {
                zero_classes.push(label);
            }
            continue;
        }
        // canonical sign: make the leading coefficient positive
        let mut sorted = normalized.0.clone();
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        let flip = sorted
            .first()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        let normalized = if flip {
            normalized.negate()
        } else {
            normalized
        };
        if !affine.contains(&normalized) {
            affine.push(normalized);
        }
    }
    zero_classes.sort();

    Ok(RelationClosure {
        classes: closure_so_far.classes,
        zero_classes,
        affine,
    })
}
