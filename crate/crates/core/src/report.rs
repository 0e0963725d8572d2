//! Report assembly and rendering, human-readable and line-oriented machine
//! formats.

use num::Zero;

use crate::mv::{ExactnessAudit, LedgerEntry, RelationClosure};
use crate::ratmat::fmt_rational;
use crate::space::LabeledSpace;

/// Generators and relations of one stage, per degree.
#[derive(Clone, Debug)]
pub struct StageTable {
    pub name: String,
    pub ranks: [usize; 3],
    pub generators: [Vec<String>; 3],
    pub relations: [Vec<String>; 3],
}

impl StageTable {
    pub fn from_spaces(name: String, spaces: &[LabeledSpace; 3]) -> Self {
        let mut ranks = [0; 3];
        let mut generators: [Vec<String>; 3] = Default::default();
        let mut relations: [Vec<String>; 3] = Default::default();
        for d in 0..=2usize {
            ranks[d] = spaces[d].rank();
            generators[d] = spaces[d].labels().iter().map(|l| l.display()).collect();
            relations[d] = spaces[d]
                .relations()
                .basis()
                .iter()
                .map(|v| spaces[d].combo_of(v).render())
                .collect();
        }
        StageTable {
            name,
            ranks,
            generators,
            relations,
        }
    }
}

/// One row of the Chern table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C1Row {
    pub generator: String,
    pub rule: String,
    pub value: i64,
}

/// The full output of a run.
#[derive(Clone, Debug)]
pub struct Report {
    pub scenario_name: String,
    pub betti: [usize; 7],
    pub chi: i64,
    pub kaehler_obstructed: bool,
    pub stages: Vec<StageTable>,
    pub ledger: Vec<LedgerEntry>,
    pub closure: RelationClosure,
    pub c1_rows: Vec<C1Row>,
    pub audits: Vec<ExactnessAudit>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn render_text(&self, emit_ledger: bool) -> String {
        let mut out = String::new();
        out.push_str(&format!("scenario: {}\n", self.scenario_name));
        out.push_str("\nBetti numbers\n");
        for (k, b) in self.betti.iter().enumerate() {
            out.push_str(&format!("  b{k} = {b}\n"));
        }
        out.push_str(&format!("  chi  = {}\n", self.chi));
        out.push_str(&format!(
            "  Kaehler structure: {}\n",
            if self.kaehler_obstructed {
                "obstructed (odd b1)"
            } else {
                "no conclusion from b1"
            }
        ));
        out.push_str("\nStages\n");
        for stage in &self.stages {
            out.push_str(&format!(
                "  {}: ranks (H0,H1,H2) = ({},{},{})\n",
                stage.name, stage.ranks[0], stage.ranks[1], stage.ranks[2]
            ));
            for d in (1..=2usize).rev() {
                if stage.generators[d].is_empty() {
                    continue;
                }
                out.push_str(&format!(
                    "    H{d} = <{}>\n",
                    stage.generators[d].join(", ")
                ));
                for rel in &stage.relations[d] {
                    out.push_str(&format!("      with {rel} = 0\n"));
                }
            }
        }
        out.push_str("\nChern pairings\n");
        for row in &self.c1_rows {
            out.push_str(&format!(
                "  <c1(TW), {}> = {}   [{}]\n",
                row.generator, row.value, row.rule
            ));
        }
        if self.c1_rows.iter().all(|r| r.value == 0) && !self.c1_rows.is_empty() {
            out.push_str("  all pairings vanish\n");
        }
        out.push_str("\nIdentified generator classes\n");
        for class in &self.closure.classes {
            if class.members.len() < 2 {
                continue;
            }
            let members: Vec<String> = class
                .members
                .iter()
                .map(|(l, s)| {
                    if *s >= 0 {
                        l.display()
                    } else {
                        format!("-{}", l.display())
                    }
                })
                .collect();
            out.push_str(&format!("  {{ {} }}\n", members.join(" = ")));
        }
        if !self.closure.zero_classes.is_empty() {
            let zeros: Vec<String> = self
                .closure
                .zero_classes
                .iter()
                .map(|l| l.display())
                .collect();
            out.push_str(&format!("  vanishing: {}\n", zeros.join(", ")));
        }
        for affine in &self.closure.affine {
            out.push_str(&format!("  affine: {} = 0\n", affine.render()));
        }
        if emit_ledger {
            out.push_str("\nLedger\n");
            for entry in &self.ledger {
                out.push_str(&format!("  [{}] {}\n", entry.stage, entry.render()));
            }
        }
        out.push_str("\nNotes\n");
        for note in &self.notes {
            out.push_str(&format!("  - {note}\n"));
        }
        out
    }

    /// Line-oriented records: `BETTI k v`, `GEN stage name`,
    /// `REL stage lhs rhs [mod labels...]`, `C1 name rule value`.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for (k, b) in self.betti.iter().enumerate() {
            out.push_str(&format!("BETTI {k} {b}\n"));
        }
        out.push_str(&format!("CHI {}\n", self.chi));
        out.push_str(&format!(
            "KAEHLER {}\n",
            if self.kaehler_obstructed {
                "obstructed"
            } else {
                "unknown"
            }
        ));
        for stage in &self.stages {
            for d in 0..=2usize {
                for g in &stage.generators[d] {
                    out.push_str(&format!("GEN {} {}\n", stage.name, g));
                }
                for rel in &stage.relations[d] {
                    out.push_str(&format!("REL {} {} 0\n", stage.name, rel));
                }
            }
        }
        for entry in &self.ledger {
            let lhs = entry.lhs.render();
            let rhs = entry.rhs.render();
            out.push_str(&format!("REL {} {} {}", entry.stage, lhs, rhs));
            if !entry.modulus.is_empty() {
                out.push_str(" mod");
                for m in &entry.modulus {
                    out.push_str(&format!(" {}", m.display()));
                }
            }
            if entry.retired {
                out.push_str(" retired");
            }
            out.push('\n');
        }
        for row in &self.c1_rows {
            out.push_str(&format!(
                "C1 {} {} {}\n",
                row.generator, row.rule, row.value
            ));
        }
        out
    }

    /// Audit lines for `--check`.
    pub fn render_audits(&self) -> String {
        let mut out = String::new();
        for audit in &self.audits {
            out.push_str(&format!(
                "AUDIT {} deg{} rank(i,j)={} ker_low={} ranks=({},{})->H={} {}\n",
                audit.stage,
                audit.degree,
                audit.rank_pair_map,
                audit.kernel_low_dim,
                audit.left_rank,
                audit.right_rank,
                audit.homology_rank,
                if audit.holds() { "ok" } else { "FAIL" }
            ));
        }
        out
    }
}

/// Renders a labeled space on one line, for the CLI `gysin` subcommand.
pub fn render_space(space: &LabeledSpace) -> String {
    let mut out = format!(
        "H{} rank {}: <{}>",
        space.degree(),
        space.rank(),
        space
            .labels()
            .iter()
            .map(|l| l.display())
            .collect::<Vec<_>>()
            .join(", ")
    );
    for v in space.relations().basis() {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*{}", fmt_rational(c), space.labels()[i].display()))
            .collect();
        out.push_str(&format!("; {} = 0", terms.join(" + ")));
    }
    out
}
