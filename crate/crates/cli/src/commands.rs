use lipcert::estimator::{
    ball_lipschitz_constant, certificate_sequence, classify_global_lipschitz, radial_growth_profile,
    tune_parameters, EstimatorParams, LipschitzCertificate, RadialProfile, Verdict,
};
use lipcert::geometry::{Ball, CoverKind, Vector};
use lipcert::verification::certificate_soundness_suite;
use lipcert::zoo::{catalog, modulus_formula, FunctionSpec, Modulus};
use lipcert::Objective;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{CliError, CliResult};

/// λ given explicitly, or derived from α as λ(α) = (1 − δ)α/(α + 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum LambdaChoice {
    Fixed(f64),
    FromDelta(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallInputs {
    pub function: FunctionSpec,
    pub ball: Ball,
    pub alpha: f64,
    pub lambda: LambdaChoice,
    pub cover: CoverKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuneInputs {
    pub function: FunctionSpec,
    pub ball: Ball,
    pub alphas: Vec<f64>,
    pub delta: f64,
    pub cover: CoverKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusInputs {
    pub function: FunctionSpec,
    pub radii: Vec<f64>,
    pub directions: usize,
    pub seed: u64,
    pub growth_threshold: f64,
    pub plateau_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyInputs {
    pub profile: RadialProfile,
    pub growth_threshold: f64,
    pub plateau_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyInputs {
    pub function: FunctionSpec,
    pub certificate: LipschitzCertificate,
    pub pairs: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertseqInputs {
    pub function: FunctionSpec,
    pub center: Vector,
    pub alpha: f64,
    pub delta: f64,
    pub radii: Vec<f64>,
    /// ℓ used for the reference bound; `None` omits the bound.
    pub reference_modulus: Option<f64>,
}

/// Fully resolved inputs of one run. Serialized into the report so the run can be repeated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "inputs", rename_all = "kebab-case")]
pub enum CommandInputs {
    Ball(BallInputs),
    Tune(TuneInputs),
    Modulus(ModulusInputs),
    Classify(ClassifyInputs),
    Verify(VerifyInputs),
    Certseq(CertseqInputs),
    Zoo {},
}

impl CommandInputs {
    pub fn name(&self) -> &'static str {
        match self {
            CommandInputs::Ball(_) => "ball",
            CommandInputs::Tune(_) => "tune",
            CommandInputs::Modulus(_) => "modulus",
            CommandInputs::Classify(_) => "classify",
            CommandInputs::Verify(_) => "verify",
            CommandInputs::Certseq(_) => "certseq",
            CommandInputs::Zoo {} => "zoo",
        }
    }

    pub fn to_value(&self) -> Value {
        let mut tagged = serde_json::to_value(self).expect("inputs serialize");
        tagged.get_mut("inputs").map(Value::take).unwrap_or_else(|| json!({}))
    }

    pub fn from_parts(command: &str, inputs: &Value) -> CliResult<CommandInputs> {
        let tagged = json!({ "command": command, "inputs": inputs });
        serde_json::from_value(tagged)
            .map_err(|e| CliError::Validation(format!("invalid inputs for `{command}`: {e}")))
    }
}

/// Result of executing a command: the report outputs plus whether a
/// soundness check failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub outputs: Value,
    pub violation: bool,
    pub profile: Option<RadialProfile>,
    pub sequence: Option<lipcert::estimator::CertificateSequence>,
}

impl Execution {
    fn plain(outputs: Value) -> Self {
        Execution { outputs, violation: false, profile: None, sequence: None }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("outputs serialize")
}

pub fn execute(inputs: &CommandInputs) -> CliResult<Execution> {
    match inputs {
        CommandInputs::Ball(i) => {
            let params = match i.lambda {
                LambdaChoice::Fixed(lambda) => EstimatorParams::new(lambda, i.alpha)?,
                LambdaChoice::FromDelta(delta) => EstimatorParams::for_alpha(i.alpha, delta)?,
            };
            let cert = ball_lipschitz_constant(&i.function, &i.ball, &params, i.cover)?;
            Ok(Execution::plain(json!({ "certificate": to_value(&cert) })))
        }
        CommandInputs::Tune(i) => {
            let result = tune_parameters(&i.function, &i.ball, &i.alphas, i.delta, i.cover)?;
            Ok(Execution::plain(to_value(&result)))
        }
        CommandInputs::Modulus(i) => {
            let hints = i.function.direction_hints();
            let profile = radial_growth_profile(&i.function, &i.radii, i.directions, &hints, i.seed)?;
            let verdict = classify_global_lipschitz(&profile, i.growth_threshold, i.plateau_tol)?;
            let analytic = i.function.analytic_global_modulus();
            let relative_error = match (&verdict, analytic) {
                (Verdict::GloballyLipschitz { modulus_estimate }, Some(Modulus::Finite(ell))) => {
                    Some(if ell > 0.0 { (modulus_estimate - ell).abs() / ell } else { modulus_estimate.abs() })
                }
                _ => None,
            };
            let outputs = json!({
                "profile": to_value(&profile),
                "verdict": to_value(&verdict),
                "analytic_modulus": to_value(&analytic),
                "relative_error": relative_error,
            });
            Ok(Execution { outputs, violation: false, profile: Some(profile), sequence: None })
        }
        CommandInputs::Classify(i) => {
            let verdict = classify_global_lipschitz(&i.profile, i.growth_threshold, i.plateau_tol)?;
            Ok(Execution {
                outputs: json!({ "verdict": to_value(&verdict) }),
                violation: false,
                profile: Some(i.profile.clone()),
                sequence: None,
            })
        }
        CommandInputs::Verify(i) => {
            i.certificate.ball.center().ensure_dim(i.function.dim())?;
            let hints = i.function.direction_hints();
            let outcome = certificate_soundness_suite(&i.function, &i.certificate, i.pairs, &hints, i.seed)?;
            Ok(Execution {
                outputs: json!({ "soundness": to_value(&outcome) }),
                violation: !outcome.passed(),
                profile: None,
                sequence: None,
            })
        }
        CommandInputs::Certseq(i) => {
            let seq = certificate_sequence(&i.function, &i.center, i.alpha, i.delta, &i.radii, i.reference_modulus)?;
            Ok(Execution { outputs: to_value(&seq), violation: false, profile: None, sequence: Some(seq) })
        }
        CommandInputs::Zoo {} => {
            let functions: Vec<Value> = catalog()
                .iter()
                .map(|spec| {
                    json!({
                        "name": spec.name(),
                        "kind": spec.kind().tag(),
                        "convex": spec.is_convex(),
                        "modulus_formula": modulus_formula(spec.kind()),
                        "example": spec.to_value(),
                        "analytic": to_value(&spec.analytic_info()),
                    })
                })
                .collect();
            Ok(Execution::plain(json!({ "functions": functions })))
        }
    }
}
