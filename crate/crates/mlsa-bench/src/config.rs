//! Experiment configuration: TOML parsing and validation into a fully
//! planned replication matrix.

use crate::BenchError;
use mlsa_core::{
    heuristic_parameters, plan_iterations_admlsa, plan_iterations_mlsa, plan_iterations_single,
    plan_levels_adaptive, plan_levels_mlsa, BiasLadder, Confidence, Framework, InitRule,
    LevelPlan, NestedLossModel, OptionModel, RefinementConfig, SaturationSchedule, SchemeConfig,
    SingleScheme, StepSchedule, SwapModel, SwapParams,
};
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// The two loss models the harness can drive.
#[derive(Debug, Clone)]
pub enum ModelSpec {
    /// European option on Brownian motion.
    Option(OptionModel),
    /// Black-Scholes interest rate swap.
    Swap(SwapModel),
}

impl ModelSpec {
    /// Closed-form VaR of the configured model.
    pub fn analytical_var(&self, alpha: f64) -> Option<f64> {
        match self {
            ModelSpec::Option(m) => m.analytical_var(alpha),
            ModelSpec::Swap(m) => m.analytical_var(alpha),
        }
    }
}

/// Estimator family selected by the scheme name string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// Unbiased SA on exact loss draws.
    Sa,
    /// Nested SA.
    Nsa,
    /// Adaptive nested SA.
    AdNsa,
    /// Multilevel SA.
    Mlsa,
    /// Adaptive multilevel SA.
    AdMlsa,
}

impl SchemeKind {
    fn from_name(name: &str) -> Result<Self, BenchError> {
        match name {
            "sa" => Ok(SchemeKind::Sa),
            "nsa" => Ok(SchemeKind::Nsa),
            "adnsa" => Ok(SchemeKind::AdNsa),
            "mlsa" => Ok(SchemeKind::Mlsa),
            "admlsa" => Ok(SchemeKind::AdMlsa),
            other => Err(BenchError::Invalid(format!(
                "unknown scheme '{other}' (expected sa, nsa, adnsa, mlsa or admlsa)"
            ))),
        }
    }
}

/// Iteration layout of one (scheme, accuracy) cell.
#[derive(Debug, Clone)]
pub enum RunShape {
    /// Single-level recursion (SA, NSA, adNSA).
    Single {
        /// Level the innovations are sampled at.
        level: u32,
        /// Iteration count.
        iterations: u64,
    },
    /// Multilevel recursion (MLSA, adMLSA).
    Multi(LevelPlan),
}

/// One fully planned (scheme, accuracy) cell.
#[derive(Debug, Clone)]
pub struct CellPlan {
    /// Prescribed accuracy ε.
    pub epsilon: f64,
    /// Core scheme configuration for this cell.
    pub config: SchemeConfig,
    /// Planned iteration layout.
    pub shape: RunShape,
}

/// A scheme with one planned cell per accuracy.
#[derive(Debug, Clone)]
pub struct SchemePlan {
    /// Unique display label (σ-variants get a `sigma-` prefix by default).
    pub label: String,
    /// Estimator family.
    pub kind: SchemeKind,
    /// Cells, aligned with the plan's accuracy grid.
    pub cells: Vec<CellPlan>,
}

/// A validated experiment: model, accuracy grid, schemes, replications.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    /// Experiment name, used for default output locations.
    pub name: String,
    /// Loss model shared by all schemes.
    pub model: ModelSpec,
    /// VaR confidence level α.
    pub alpha: f64,
    /// Master seed; every cell derives an independent stream from it.
    pub seed: u64,
    /// Replications per cell.
    pub replications: u32,
    /// Strictly decreasing accuracy grid.
    pub accuracies: Vec<f64>,
    /// Planned schemes.
    pub schemes: Vec<SchemePlan>,
    /// Output directory for rows/summaries/plots.
    pub output_dir: PathBuf,
}

// ---------------------------------------------------------------------------
// Raw TOML mirror
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Accuracy {
    Number(f64),
    Fraction(String),
}

impl Accuracy {
    fn resolve(&self) -> Result<f64, BenchError> {
        match self {
            Accuracy::Number(x) => Ok(*x),
            Accuracy::Fraction(s) => {
                let (num, den) = s
                    .split_once('/')
                    .ok_or_else(|| BenchError::Invalid(format!("bad fraction '{s}'")))?;
                let num: f64 = num
                    .trim()
                    .parse()
                    .map_err(|_| BenchError::Invalid(format!("bad fraction '{s}'")))?;
                let den: f64 = den
                    .trim()
                    .parse()
                    .map_err(|_| BenchError::Invalid(format!("bad fraction '{s}'")))?;
                if den == 0.0 {
                    return Err(BenchError::Invalid(format!("bad fraction '{s}'")));
                }
                Ok(num / den)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema: Option<u32>,
    name: String,
    model: String,
    alpha: f64,
    seed: u64,
    replications: Option<u32>,
    output_dir: Option<String>,
    accuracies: Vec<Accuracy>,
    model_params: RawModelParams,
    #[serde(rename = "scheme", default)]
    schemes: Vec<RawScheme>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawModelParams {
    option: Option<RawOption>,
    swap: Option<RawSwap>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOption {
    tau: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSwap {
    s0: f64,
    r_bar: f64,
    kappa_bar: f64,
    sigma_bar: f64,
    maturity: f64,
    coupon_interval: f64,
    tau_days: f64,
    nominal: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScheme {
    name: String,
    label: Option<String>,
    scale_c: f64,
    init: Option<f64>,
    init_uniform: Option<[f64; 2]>,
    step: Option<RawStep>,
    m: Option<u32>,
    rows: Option<Vec<RawRow>>,
    refinement: Option<RawRefinement>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    a: f64,
    b: Option<f64>,
    beta: Option<f64>,
}

impl RawStep {
    fn build(&self) -> Result<StepSchedule, BenchError> {
        Ok(StepSchedule::new(self.a, self.b.unwrap_or(0.0), self.beta.unwrap_or(1.0))?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    epsilon: Accuracy,
    k: Option<u32>,
    step: Option<RawStep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRefinement {
    mode: Option<String>,
    c_a: Option<f64>,
    c_p: Option<f64>,
    r: Option<f64>,
    theta: Option<f64>,
    framework: String,
    p_star: Option<f64>,
    delta: Option<f64>,
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Loads and validates an experiment config from a TOML file.
pub fn load_plan(path: &Path) -> Result<ExperimentPlan, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })?;
    plan_from_str(&text).map_err(|e| match e {
        BenchError::Parse { source, .. } => {
            BenchError::Parse { path: path.display().to_string(), source }
        }
        other => other,
    })
}

/// Parses and validates an experiment config from TOML text.
pub fn plan_from_str(text: &str) -> Result<ExperimentPlan, BenchError> {
    let raw: RawConfig = toml::from_str(text).map_err(|source| BenchError::Parse {
        path: "<inline>".into(),
        source: Box::new(source),
    })?;
    validate(raw)
}

fn validate(raw: RawConfig) -> Result<ExperimentPlan, BenchError> {
    if raw.schema.unwrap_or(1) != 1 {
        return Err(BenchError::Invalid("unsupported schema version".into()));
    }
    if !(raw.alpha > 0.0 && raw.alpha < 1.0) {
        return Err(BenchError::Invalid("alpha must lie in (0, 1)".into()));
    }
    let replications = raw.replications.unwrap_or(200);
    if replications == 0 {
        return Err(BenchError::Invalid("replications must be at least 1".into()));
    }

    let accuracies: Vec<f64> =
        raw.accuracies.iter().map(|a| a.resolve()).collect::<Result<_, _>>()?;
    if accuracies.is_empty() {
        return Err(BenchError::Invalid("accuracy grid is empty".into()));
    }
    if accuracies.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
        return Err(BenchError::Invalid("accuracies must lie in (0, 1)".into()));
    }
    if accuracies.windows(2).any(|w| w[1] >= w[0]) {
        return Err(BenchError::Invalid("accuracy grid must be strictly decreasing".into()));
    }

    let model = match raw.model.as_str() {
        "option" => {
            let p = raw
                .model_params
                .option
                .as_ref()
                .ok_or_else(|| BenchError::Invalid("missing [model_params.option]".into()))?;
            ModelSpec::Option(OptionModel::new(p.tau)?)
        }
        "swap" => {
            let p = raw
                .model_params
                .swap
                .as_ref()
                .ok_or_else(|| BenchError::Invalid("missing [model_params.swap]".into()))?;
            ModelSpec::Swap(SwapModel::new(SwapParams {
                s0: p.s0,
                r_bar: p.r_bar,
                kappa_bar: p.kappa_bar,
                sigma_bar: p.sigma_bar,
                maturity: p.maturity,
                coupon_interval: p.coupon_interval,
                tau_days: p.tau_days,
                nominal: p.nominal,
            })?)
        }
        other => {
            return Err(BenchError::Invalid(format!(
                "unknown model '{other}' (expected option or swap)"
            )))
        }
    };

    if raw.schemes.is_empty() {
        return Err(BenchError::Invalid("scheme list is empty".into()));
    }
    let mut schemes = Vec::with_capacity(raw.schemes.len());
    for raw_scheme in &raw.schemes {
        schemes.push(validate_scheme(raw_scheme, raw.alpha, &accuracies)?);
    }
    let mut labels: Vec<&str> = schemes.iter().map(|s| s.label.as_str()).collect();
    labels.sort_unstable();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(BenchError::Invalid("scheme labels must be unique".into()));
    }

    let output_dir =
        PathBuf::from(raw.output_dir.clone().unwrap_or_else(|| format!("out/{}", raw.name)));
    Ok(ExperimentPlan {
        name: raw.name,
        model,
        alpha: raw.alpha,
        seed: raw.seed,
        replications,
        accuracies,
        schemes,
        output_dir,
    })
}

struct RefinementSpec {
    mode: Option<Confidence>,
    framework: Framework,
    theta: f64,
    r: f64,
}

fn validate_refinement(raw: &RawRefinement) -> Result<RefinementSpec, BenchError> {
    let framework = match raw.framework.as_str() {
        "lp" => {
            let p_star = raw
                .p_star
                .ok_or_else(|| BenchError::Invalid("lp framework needs p_star".into()))?;
            let delta = raw
                .delta
                .ok_or_else(|| BenchError::Invalid("lp framework needs delta".into()))?;
            Framework::LpMoment { p_star, saturation: SaturationSchedule::new(1.0, delta)? }
        }
        "gaussian" => Framework::GaussianConcentration,
        "lipschitz" => Framework::LipschitzConditionalCdf,
        other => {
            return Err(BenchError::Invalid(format!(
                "unknown framework '{other}' (expected lp, gaussian or lipschitz)"
            )))
        }
    };

    let (theta, r) = match (raw.theta, raw.r) {
        (Some(theta), Some(r)) => (theta, r),
        (Some(theta), None) => (theta, 1.0 + 1.0 / theta),
        (None, given_r) => {
            let (theta, heuristic_r) = heuristic_parameters(&framework)?;
            (theta, given_r.unwrap_or(heuristic_r))
        }
    };

    let mode = match raw.mode.as_deref() {
        None => None,
        Some("constant") => Some(Confidence::Constant {
            c_a: raw
                .c_a
                .ok_or_else(|| BenchError::Invalid("constant refinement mode needs c_a".into()))?,
        }),
        Some("sigma") => Some(Confidence::SigmaScaled {
            c_p: raw
                .c_p
                .ok_or_else(|| BenchError::Invalid("sigma refinement mode needs c_p".into()))?,
        }),
        Some(other) => {
            return Err(BenchError::Invalid(format!(
                "unknown refinement mode '{other}' (expected constant or sigma)"
            )))
        }
    };

    Ok(RefinementSpec { mode, framework, theta, r })
}

fn validate_scheme(
    raw: &RawScheme,
    alpha: f64,
    accuracies: &[f64],
) -> Result<SchemePlan, BenchError> {
    let kind = SchemeKind::from_name(&raw.name)?;
    let refinement = raw.refinement.as_ref().map(validate_refinement).transpose()?;

    let is_sigma = refinement
        .as_ref()
        .is_some_and(|r| matches!(r.mode, Some(Confidence::SigmaScaled { .. })));
    let label = raw.label.clone().unwrap_or_else(|| {
        if is_sigma {
            format!("sigma-{}", raw.name)
        } else {
            raw.name.clone()
        }
    });

    let needs_refinement_mode = matches!(kind, SchemeKind::AdNsa | SchemeKind::AdMlsa);
    if needs_refinement_mode && refinement.as_ref().and_then(|r| r.mode.as_ref()).is_none() {
        return Err(BenchError::Invalid(format!(
            "scheme '{label}' needs [scheme.refinement] with a mode"
        )));
    }
    let needs_framework = matches!(kind, SchemeKind::AdNsa | SchemeKind::Mlsa | SchemeKind::AdMlsa);
    if needs_framework && refinement.is_none() {
        return Err(BenchError::Invalid(format!(
            "scheme '{label}' needs [scheme.refinement] naming a framework (planners use it)"
        )));
    }

    let init = match (raw.init, raw.init_uniform) {
        (Some(_), Some(_)) => {
            return Err(BenchError::Invalid(format!(
                "scheme '{label}': give either init or init_uniform, not both"
            )))
        }
        (Some(c), None) => InitRule::Constant(c),
        (None, Some([lo, hi])) => InitRule::Uniform { lo, hi },
        (None, None) => InitRule::Constant(0.0),
    };

    let m = raw.m.unwrap_or(2);
    let rows = raw.rows.as_deref().unwrap_or(&[]);
    let needs_rows = matches!(kind, SchemeKind::AdNsa | SchemeKind::Mlsa | SchemeKind::AdMlsa);
    if needs_rows && rows.is_empty() {
        return Err(BenchError::Invalid(format!(
            "scheme '{label}' needs per-accuracy rows (epsilon, k, ...)"
        )));
    }

    let mut cells = Vec::with_capacity(accuracies.len());
    for &epsilon in accuracies {
        let row = find_row(rows, epsilon)?;
        if needs_rows && row.is_none() {
            return Err(BenchError::Invalid(format!(
                "scheme '{label}' has no row for accuracy {epsilon}"
            )));
        }

        let step = match row.and_then(|r| r.step).or(raw.step) {
            Some(s) => s.build()?,
            None => {
                return Err(BenchError::Invalid(format!(
                    "scheme '{label}' has no step schedule for accuracy {epsilon}"
                )))
            }
        };

        let ladder = match kind {
            SchemeKind::Sa => BiasLadder::new(1, 2)?,
            SchemeKind::Nsa => {
                // NSA pins the bias directly to the accuracy: h = 1/⌈1/ε⌉.
                let k = match row.and_then(|r| r.k) {
                    Some(k) => k,
                    None => (1.0 / epsilon - 1e-9).ceil() as u32,
                };
                BiasLadder::new(k, m)?
            }
            _ => {
                let k = row.and_then(|r| r.k).ok_or_else(|| {
                    BenchError::Invalid(format!(
                        "scheme '{label}' row for accuracy {epsilon} needs k (h0 = 1/k)"
                    ))
                })?;
                BiasLadder::new(k, m)?
            }
        };

        let mut config = SchemeConfig::new(alpha, step, ladder, raw.scale_c)?.with_init(init);
        if let Some(spec) = &refinement {
            if let Some(mode) = &spec.mode {
                config = config.with_refinement(RefinementConfig::new(
                    mode.clone(),
                    spec.r,
                    spec.theta,
                    spec.framework,
                    step,
                )?);
            }
        }

        let shape = match kind {
            SchemeKind::Sa => RunShape::Single {
                level: 0,
                iterations: plan_iterations_single(SingleScheme::Nsa, &config, epsilon, None),
            },
            SchemeKind::Nsa => RunShape::Single {
                level: 0,
                iterations: plan_iterations_single(SingleScheme::Nsa, &config, epsilon, None),
            },
            SchemeKind::AdNsa => {
                let spec = refinement.as_ref().expect("checked above");
                RunShape::Single {
                    level: plan_levels_adaptive(ladder, epsilon, spec.theta)?,
                    iterations: plan_iterations_single(
                        SingleScheme::AdNsa,
                        &config,
                        epsilon,
                        Some(&spec.framework),
                    ),
                }
            }
            SchemeKind::Mlsa => {
                let spec = refinement.as_ref().expect("checked above");
                let levels = plan_levels_mlsa(ladder, epsilon)?;
                RunShape::Multi(plan_iterations_mlsa(&config, epsilon, levels, &spec.framework))
            }
            SchemeKind::AdMlsa => {
                let spec = refinement.as_ref().expect("checked above");
                let levels = plan_levels_adaptive(ladder, epsilon, spec.theta)?;
                RunShape::Multi(plan_iterations_admlsa(
                    &config,
                    epsilon,
                    levels,
                    &spec.framework,
                    spec.theta,
                ))
            }
        };

        cells.push(CellPlan { epsilon, config, shape });
    }

    Ok(SchemePlan { label, kind, cells })
}

fn find_row<'a>(rows: &'a [RawRow], epsilon: f64) -> Result<Option<&'a RawRow>, BenchError> {
    let mut found = None;
    for row in rows {
        let e = row.epsilon.resolve()?;
        if (e - epsilon).abs() <= 1e-12 * epsilon.max(1.0) {
            if found.is_some() {
                return Err(BenchError::Invalid(format!("duplicate row for accuracy {epsilon}")));
            }
            found = Some(row);
        }
    }
    Ok(found)
}
