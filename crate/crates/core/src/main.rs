use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lescalc::cobordism::{derive_lifts, elementary_cobordism, normal_chern, FixedTorusDatum};
use lescalc::forms::parse_form;
use lescalc::gysin::{bundle_homology, liftable_tori, CircleBundle};
use lescalc::label::Level;
use lescalc::mv::relation_closure;
use lescalc::pipeline::{build_report, run};
use lescalc::report::render_space;
use lescalc::scenario::Scenario;

#[derive(Parser)]
#[command(
    name = "lescalc",
    about = "Exact homology of glued circle-bundle manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct ReportArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Include the full relation ledger in text output
    #[arg(long)]
    emit_ledger: bool,
    /// Print the exactness audit of every solved sequence
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of one principal circle bundle over a torus
    Gysin {
        /// Base torus dimension
        #[arg(long, default_value = "4")]
        base_dim: usize,
        /// Euler class, e.g. "-s42" or "0"
        #[arg(long, allow_hyphen_values = true)]
        euler: String,
        /// Degree to compute (0, 1 or 2); all three when omitted
        #[arg(long)]
        degree: Option<usize>,
        /// Level tag used in generator names
        #[arg(long, default_value = "0")]
        level: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// One elementary cobordism across a critical level
    Cobordism {
        /// Lower regular value
        #[arg(long)]
        from: String,
        /// Upper regular value
        #[arg(long)]
        to: String,
        /// Critical value in between
        #[arg(long)]
        lambda: String,
        /// Indices of the image torus of the critical set, e.g. "13"
        #[arg(long)]
        image: String,
        /// Euler class below the critical level
        #[arg(long, allow_hyphen_values = true)]
        euler_below: String,
        /// Euler class above the critical level
        #[arg(long, allow_hyphen_values = true)]
        euler_above: String,
        #[arg(long, default_value = "4")]
        base_dim: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Full staged run of a scenario file
    Run {
        /// Scenario file path
        scenario: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Full staged run of the built-in glued-manifold scenario
    Mcduff {
        #[command(flatten)]
        report: ReportArgs,
        /// Print the scenario file instead of running it
        #[arg(long)]
        print_scenario: bool,
    },
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gysin {
            base_dim,
            euler,
            degree,
            level,
            format,
        } => {
            let euler = parse_form(&euler, base_dim, 2).context("bad Euler class")?;
            let level = Level::parse(&level).context("bad level")?;
            let bundle = CircleBundle::new(base_dim, euler, level)?;
            let degrees: Vec<usize> = match degree {
                Some(d) => vec![d],
                None => vec![0, 1, 2],
            };
            for d in degrees {
                let space = bundle_homology(&bundle, d)?;
                match format {
                    Format::Text => println!("{}", render_space(&space)),
                    Format::Machine => {
                        println!("RANK {d} {}", space.rank());
                        for label in space.labels() {
                            println!("GEN {d} {}", label.display());
                        }
                        for v in space.relations().basis() {
                            println!("REL {d} {} 0", space.combo_of(v).render());
                        }
                    }
                }
            }
            if format == Format::Text {
                let pairs: Vec<String> = liftable_tori(&bundle)
                    .into_iter()
                    .map(|(i, j)| format!("L{i}{j}"))
                    .collect();
                println!("liftable tori: {}", pairs.join(", "));
            }
            Ok(())
        }
        Command::Cobordism {
            from,
            to,
            lambda,
            image,
            euler_below,
            euler_above,
            base_dim,
            format,
        } => {
            let from = Level::parse(&from)?;
            let to = Level::parse(&to)?;
            let lambda = Level::parse(&lambda)?;
            let digits: Vec<usize> = image
                .chars()
                .filter_map(|c| c.to_digit(10).map(|d| d as usize))
                .collect();
            if digits.len() != 2 {
                bail!("--image wants two digits, e.g. 13");
            }
            let image = (digits[0].min(digits[1]), digits[0].max(digits[1]));
            let below = CircleBundle::new(base_dim, parse_form(&euler_below, base_dim, 2)?, from)?;
            let above = CircleBundle::new(base_dim, parse_form(&euler_above, base_dim, 2)?, to)?;
            let (c1_minus, c1_plus) = normal_chern(&below, &above, image)?;
            let datum = FixedTorusDatum {
                lambda,
                image,
                c1_minus,
                c1_plus,
            };
            let lifts = derive_lifts(&below, &above, &datum)?;
            let cob = elementary_cobordism(&below, &above, &datum, &lifts)?;
            match format {
                Format::Text => {
                    println!(
                        "cobordism [{}, {}], critical level {} over L{}{}",
                        cob.interval.0.render(),
                        cob.interval.1.render(),
                        datum.lambda.render(),
                        image.0,
                        image.1
                    );
                    println!("normal Chern numbers: ({c1_minus}, {c1_plus})");
                    for d in (0..=2usize).rev() {
                        println!("{}", render_space(&cob.h[d]));
                    }
                    println!("ledger:");
                    for entry in &cob.ledger {
                        println!("  [{}] {}", entry.stage, entry.render());
                    }
                    let closure = relation_closure(&cob.ledger)?;
                    for class in closure.classes.iter().filter(|c| c.members.len() > 1) {
                        let names: Vec<String> =
                            class.members.iter().map(|(l, _)| l.display()).collect();
                        println!("  class: {}", names.join(" = "));
                    }
                }
                Format::Machine => {
                    for d in 0..=2usize {
                        println!("RANK {d} {}", cob.h[d].rank());
                        for label in cob.h[d].labels() {
                            println!("GEN {d} {}", label.display());
                        }
                    }
                    for entry in &cob.ledger {
                        println!(
                            "REL {} {} {}",
                            entry.stage,
                            entry.lhs.render(),
                            entry.rhs.render()
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Run { scenario, report } => {
            let text = std::fs::read_to_string(&scenario)
                .with_context(|| format!("reading {}", scenario.display()))?;
            let scenario = Scenario::parse(&text)?;
            emit(&scenario, &report)
        }
        Command::Mcduff {
            report,
            print_scenario,
        } => {
            let scenario = Scenario::mcduff();
            if print_scenario {
                print!("{}", scenario.to_text());
                return Ok(());
            }
            emit(&scenario, &report)
        }
    }
}

fn emit(scenario: &Scenario, args: &ReportArgs) -> anyhow::Result<()> {
    let result = run(scenario)?;
    let report = build_report(&result)?;
    match args.format {
        Format::Text => print!("{}", report.render_text(args.emit_ledger)),
        Format::Machine => print!("{}", report.render_machine()),
    }
    if args.check {
        print!("{}", report.render_audits());
        if report.audits.iter().any(|a| !a.holds()) {
            bail!("an exactness audit failed");
        }
        println!("CHECK ok ({} audits)", report.audits.len());
    }
    Ok(())
}
