//! End-to-end failure paths: bad declarations must surface as typed errors
//! naming the stage, never as wrong numbers.

use lescalc::error::EngineError;
use lescalc::label::{parse_combo, Label, Level};
use lescalc::pipeline::run;
use lescalc::scenario::Scenario;

fn root_cause(err: &EngineError) -> &EngineError {
    match err {
        EngineError::Stage { source, .. } => root_cause(source),
        other => other,
    }
}

#[test]
fn wrong_boundary_value_is_rejected() {
    let mut scenario = Scenario::mcduff();
    // gamma's boundary with the wrong relative sign is not a kernel vector
    let gamma = scenario
        .lifts
        .iter_mut()
        .find(|l| l.label == Label::Loop { name: "gamma".into() })
        .unwrap();
    gamma.boundary = parse_combo("-pt^0-pt^3.5").unwrap();
    let err = run(&scenario).unwrap_err();
    assert!(
        matches!(root_cause(&err), EngineError::LiftNotInKernel { .. }),
        "got {err}"
    );
}

#[test]
fn missing_lift_is_underdetermined() {
    let mut scenario = Scenario::mcduff();
    scenario.lifts.retain(|l| {
        l.label
            != Label::InvariantSphere {
                from: Level::integer(6),
                to: Level::integer(1),
            }
    });
    let err = run(&scenario).unwrap_err();
    assert!(
        matches!(
            root_cause(&err),
            EngineError::UnderdeterminedBoundary { degree: 2, .. }
        ),
        "got {err}"
    );
}

#[test]
fn wrong_critical_image_fails_validation() {
    let mut scenario = Scenario::mcduff();
    scenario.criticals[0].image = (1, 2);
    let err = run(&scenario).unwrap_err();
    assert!(
        matches!(root_cause(&err), EngineError::InconsistentScenario { .. }),
        "got {err}"
    );
}

#[test]
fn extra_lift_is_rejected() {
    let mut scenario = Scenario::mcduff();
    scenario.lifts.push(lescalc::scenario::LiftSpec {
        label: Label::Loop {
            name: "ghost".into(),
        },
        degree: 1,
        boundary: parse_combo("-pt^0+pt^3.5").unwrap(),
    });
    let err = run(&scenario).unwrap_err();
    assert!(
        matches!(
            root_cause(&err),
            EngineError::UnderdeterminedBoundary { degree: 1, .. }
        ),
        "got {err}"
    );
}

#[test]
fn stage_names_surface_in_errors() {
    let mut scenario = Scenario::mcduff();
    scenario.lifts.clear();
    let err = run(&scenario).unwrap_err();
    let text = err.to_string();
    assert!(text.contains("W"), "stage name missing from: {text}");
}

#[test]
fn asymmetric_scenario_skips_the_mirror_check_but_still_runs() {
    // shift one sample: the scenario loses mirror symmetry but stays valid
    let mut scenario = Scenario::mcduff();
    scenario.samples[1] = Level::new(5, 4);
    assert!(!scenario.is_mirror_symmetric());
    let result = run(&scenario).unwrap();
    assert!(!result.symmetry_checked);
    assert_eq!(result.betti, [1, 3, 8, 12, 8, 3, 1]);
}
