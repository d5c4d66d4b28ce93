use super::{load_scenario, Scenario, ScenarioDoc, ScenarioError};

/// Named scenarios shipped with the library, with their documents.
pub const BUILTINS: &[(&str, &str)] = &[
    ("atlas_55", include_str!("../../scenarios/atlas_55.json")),
    ("fig7_rotation", include_str!("../../scenarios/fig7_rotation.json")),
    ("five_cubed", include_str!("../../scenarios/five_cubed.json")),
    ("fig11_4deg5", include_str!("../../scenarios/fig11_4deg5.json")),
    ("triangle_delta", include_str!("../../scenarios/triangle_delta.json")),
    ("five_cubed_plus", include_str!("../../scenarios/five_cubed_plus.json")),
    ("five_55556", include_str!("../../scenarios/five_55556.json")),
    ("dumbbell", include_str!("../../scenarios/dumbbell.json")),
    ("c2c3", include_str!("../../scenarios/c2c3.json")),
    ("perp_angle", include_str!("../../scenarios/perp_angle.json")),
    ("angle", include_str!("../../scenarios/angle.json")),
];

pub fn builtin_doc(name: &str) -> Result<ScenarioDoc, ScenarioError> {
    let (_, text) = BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| ScenarioError::UnknownBuiltin(name.to_string()))?;
    serde_json::from_str(text).map_err(|e| ScenarioError::Document(format!("{name}: {e}")))
}

pub fn builtin(name: &str) -> Result<Scenario, ScenarioError> {
    load_scenario(&builtin_doc(name)?)
}
