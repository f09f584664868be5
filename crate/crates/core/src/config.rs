//! Experiment configuration, read from TOML.
//!
//! Models and surfaces are declared once in named tables and referenced from
//! `[[suite]]` entries. Unknown keys are rejected, and references that do not
//! resolve are reported with the line of the offending key.

use crate::ambient::WarpedModel;
use crate::integral::RigidityTarget;
use crate::property::{AtlasCheck, Cone, PropertyCheck};
use crate::surface::{ProfileCurve, RevolutionSurface};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::Path;
use toml::Spanned;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub message: String,
    pub line: Option<usize>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config error at line {l}: {}", self.message),
            None => write!(f, "config error: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    /// Output directory; the CLI may override it.
    #[serde(default = "default_output")]
    pub output: String,
    /// Quadrature nodes for suites that do not set their own.
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default)]
    pub models: BTreeMap<String, ModelSpec>,
    #[serde(default)]
    pub surfaces: BTreeMap<String, SurfaceSpec>,
    #[serde(default, rename = "suite")]
    pub suites: Vec<Spanned<Suite>>,
}

fn default_output() -> String {
    "warpcurv-out".into()
}

fn default_nodes() -> usize {
    crate::quadrature::DEFAULT_NODES
}

fn default_r_cap() -> f64 {
    4.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Euclidean {
        n: usize,
    },
    Sphere {
        n: usize,
    },
    Hyperbolic {
        n: usize,
    },
    Schwarzschild {
        n: usize,
        mass: f64,
        #[serde(default)]
        kappa: f64,
        #[serde(default)]
        charge: f64,
        #[serde(default = "default_r_cap")]
        r_cap: f64,
    },
}

impl ModelSpec {
    pub fn build(&self, name: &str) -> crate::Result<WarpedModel> {
        let m = match *self {
            Self::Euclidean { n } => WarpedModel::euclidean(n)?,
            Self::Sphere { n } => WarpedModel::sphere(n)?,
            Self::Hyperbolic { n } => WarpedModel::hyperbolic(n)?,
            Self::Schwarzschild { n, mass, kappa, charge, r_cap } => {
                WarpedModel::schwarzschild(n, mass, kappa, charge, r_cap)?
            }
        };
        Ok(m.with_name(name))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub model: Spanned<String>,
    pub curve: ProfileCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegralCheck {
    MinkowskiSpaceform,
    MinkowskiWarped,
    MinkowskiWeighted,
    HeintzeKarcher,
    LkMinkowski,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepPlanKind {
    NewtonMaclaurin,
    /// Newton-Maclaurin together with the quotient and combination families.
    Garding,
    Hyperbolic,
    XFamily,
    Spherical,
    Permutation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    GaussBonnet,
    NewtonTensor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerEntry {
    pub cone: Cone,
    pub n: usize,
    #[serde(default)]
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Suite {
    /// Every `check` on every surface, for every `k` in `ks`.
    Integral {
        name: String,
        surfaces: Vec<String>,
        checks: Vec<IntegralCheck>,
        #[serde(default = "default_ks")]
        ks: Vec<usize>,
        tolerance: Option<f64>,
        nodes: Option<usize>,
    },
    Rigidity {
        name: String,
        surfaces: Vec<String>,
        targets: Vec<RigidityTarget>,
        tolerance: Option<f64>,
        nodes: Option<usize>,
    },
    /// `osc(eps) / osc(eps/2)` on `r0 + eps cos(mode θ)`.
    Scaling {
        name: String,
        model: String,
        r0: f64,
        eps: f64,
        mode: u32,
        targets: Vec<RigidityTarget>,
        nodes: Option<usize>,
    },
    Convergence {
        name: String,
        surface: String,
        check: IntegralCheck,
        #[serde(default = "default_k")]
        k: usize,
        nodes: Vec<usize>,
    },
    /// Either a standard `plan` or an explicit `sampler` with `checks`.
    Sweep {
        name: String,
        plan: Option<SweepPlanKind>,
        sampler: Option<SamplerEntry>,
        #[serde(default)]
        checks: Vec<PropertyCheck>,
        count: u64,
        seed: Option<u64>,
    },
    Atlas {
        name: String,
        checks: Vec<AtlasCheck>,
        /// `[n, k]` pairs.
        cases: Vec<[usize; 2]>,
    },
    Oracle {
        name: String,
        oracle: OracleKind,
        /// Dimensions of the second fundamental form (`n − 1`).
        dims: Vec<usize>,
        ks: Vec<usize>,
        count: u64,
        seed: Option<u64>,
    },
    Permutation {
        name: String,
        /// `[n, k]` pairs.
        cases: Vec<[usize; 2]>,
        count: u64,
        seed: Option<u64>,
    },
}

fn default_ks() -> Vec<usize> {
    vec![1]
}

fn default_k() -> usize {
    1
}

impl Suite {
    pub fn name(&self) -> &str {
        match self {
            Self::Integral { name, .. }
            | Self::Rigidity { name, .. }
            | Self::Scaling { name, .. }
            | Self::Convergence { name, .. }
            | Self::Sweep { name, .. }
            | Self::Atlas { name, .. }
            | Self::Oracle { name, .. }
            | Self::Permutation { name, .. } => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Integral { .. } => "integral",
            Self::Rigidity { .. } => "rigidity",
            Self::Scaling { .. } => "scaling",
            Self::Convergence { .. } => "convergence",
            Self::Sweep { .. } => "sweep",
            Self::Atlas { .. } => "atlas",
            Self::Oracle { .. } => "oracle",
            Self::Permutation { .. } => "permutation",
        }
    }
}

/// A parsed configuration whose references all resolve.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub config: ExperimentConfig,
    pub models: BTreeMap<String, WarpedModel>,
    pub surfaces: BTreeMap<String, RevolutionSurface>,
}

struct LineIndex<'a>(&'a str);

impl LineIndex<'_> {
    fn line(&self, span: Range<usize>) -> Option<usize> {
        let end = span.start.min(self.0.len());
        Some(self.0[..end].matches('\n').count() + 1)
    }

    /// Line of the first `needle` between the start of `span` and the next
    /// table header, else the line where `span` starts.
    fn line_within(&self, span: Range<usize>, needle: &str) -> Option<usize> {
        let start = span.start.min(self.0.len());
        let body = (start + 1).min(self.0.len());
        let end = self.0[body..].find("\n[").map_or(self.0.len(), |i| body + i);
        match self.0[start..end].find(needle) {
            Some(off) => self.line(start + off..end),
            None => self.line(span),
        }
    }
}

pub fn load(path: &Path) -> Result<ResolvedConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        message: format!("cannot read {}: {e}", path.display()),
        line: None,
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<ResolvedConfig, ConfigError> {
    let lines = LineIndex(text);
    let config: ExperimentConfig = toml::from_str(text).map_err(|e| ConfigError {
        message: e.message().to_string(),
        line: e.span().and_then(|s| lines.line(s)),
    })?;
    resolve(config, &lines)
}

fn err<T>(message: String, line: Option<usize>) -> Result<T, ConfigError> {
    Err(ConfigError { message, line })
}

fn resolve(config: ExperimentConfig, lines: &LineIndex) -> Result<ResolvedConfig, ConfigError> {
    if config.nodes == 0 {
        return err("`nodes` must be positive".into(), None);
    }
    let mut models = BTreeMap::new();
    for (name, spec) in &config.models {
        let m = spec.build(name).or_else(|e| err(format!("model `{name}`: {e}"), None))?;
        models.insert(name.clone(), m);
    }
    let model_ref = |r: &Spanned<String>| -> Result<WarpedModel, ConfigError> {
        match models.get(r.get_ref()) {
            Some(m) => Ok(m.clone()),
            None => err(format!("unknown model `{}`", r.get_ref()), lines.line(r.span())),
        }
    };
    let mut surfaces = BTreeMap::new();
    for (name, spec) in &config.surfaces {
        let model = model_ref(&spec.model)?;
        let s = RevolutionSurface::new(model, spec.curve.clone())
            .or_else(|e| err(format!("surface `{name}`: {e}"), lines.line(spec.model.span())))?;
        surfaces.insert(name.clone(), s);
    }
    let mut names = std::collections::BTreeSet::new();
    for spanned in &config.suites {
        let suite = spanned.get_ref();
        let span = spanned.span();
        let ctx = |m: String| format!("suite `{}`: {m}", suite.name());
        let at = |needle: &str| lines.line_within(span.clone(), needle);
        if !names.insert(suite.name().to_string()) {
            return err(format!("duplicate suite name `{}`", suite.name()), at("name"));
        }
        if suite.name().is_empty() || suite.name().contains(['/', '\\']) {
            return err(format!("suite name `{}` is not a valid file stem", suite.name()), at("name"));
        }
        let surface_ref = |name: &String| -> Result<(), ConfigError> {
            if surfaces.contains_key(name) {
                Ok(())
            } else {
                err(ctx(format!("unknown surface `{name}`")), at(&format!("\"{name}\"")))
            }
        };
        match suite {
            Suite::Integral { surfaces: refs, tolerance: t, nodes, .. }
            | Suite::Rigidity { surfaces: refs, tolerance: t, nodes, .. } => {
                refs.iter().try_for_each(surface_ref)?;
                if let Some(t) = t {
                    if !(t.is_finite() && *t > 0.0) {
                        return err(ctx(format!("tolerance must be positive, got {t}")), at("tolerance"));
                    }
                }
                if *nodes == Some(0) {
                    return err(ctx("`nodes` must be positive".into()), at("nodes"));
                }
            }
            Suite::Scaling { model, eps, nodes, .. } => {
                if !models.contains_key(model) {
                    return err(ctx(format!("unknown model `{model}`")), at(&format!("\"{model}\"")));
                }
                if !(eps.is_finite() && *eps != 0.0) || *nodes == Some(0) {
                    return err(ctx("need eps != 0 and positive nodes".into()), at("eps"));
                }
            }
            Suite::Convergence { surface, nodes, .. } => {
                surface_ref(surface)?;
                if nodes.is_empty() || nodes.contains(&0) {
                    return err(ctx("`nodes` must be a nonempty list of positive counts".into()), at("nodes"));
                }
            }
            Suite::Sweep { plan, sampler, checks, count, .. } => {
                if *count == 0 {
                    return err(ctx("`count` must be at least 1".into()), at("count"));
                }
                match (plan, sampler) {
                    (Some(_), None) if checks.is_empty() => {}
                    (None, Some(s)) if !checks.is_empty() => {
                        let spec = crate::property::SamplerSpec {
                            cone: s.cone,
                            n: s.n,
                            count: *count,
                            seed: 0,
                            scale: s.scale.unwrap_or(1.0),
                        };
                        spec.validate().or_else(|e| err(ctx(e.to_string()), at("sampler")))?;
                        for c in checks {
                            c.admissible(s.cone, spec.len()).or_else(|e| err(ctx(e.to_string()), at("checks")))?;
                        }
                    }
                    _ => {
                        return err(ctx("set either `plan`, or `sampler` together with `checks`".into()), lines.line(span))
                    }
                }
            }
            Suite::Oracle { count, .. } | Suite::Permutation { count, .. } if *count == 0 => {
                return err(ctx("`count` must be at least 1".into()), at("count"));
            }
            Suite::Atlas { .. } | Suite::Oracle { .. } | Suite::Permutation { .. } => {}
        }
    }
    Ok(ResolvedConfig { config, models, surfaces })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
seed = 3

[models.h4]
kind = "hyperbolic"
n = 4

[surfaces.bump]
model = "h4"
curve = { kind = "graph", r0 = 1.0, modes = [{ mode = 3, eps = 0.01 }] }
"#;

    #[test]
    fn parses_models_surfaces_and_suites() {
        let text = format!(
            "{BASE}\n[[suite]]\nkind = \"integral\"\nname = \"mink\"\nsurfaces = [\"bump\"]\nchecks = [\"minkowski-spaceform\"]\nks = [1, 2]\n"
        );
        let r = parse(&text).unwrap();
        assert_eq!(r.models["h4"].name(), "h4");
        assert_eq!(r.config.suites.len(), 1);
        assert_eq!(r.config.nodes, crate::quadrature::DEFAULT_NODES);
    }

    #[test]
    fn unknown_model_names_the_line() {
        let text = BASE.replace("model = \"h4\"", "model = \"h5\"");
        let e = parse(&text).unwrap_err();
        assert!(e.message.contains("unknown model `h5`"), "{e}");
        assert_eq!(e.line, Some(9));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = BASE.replace("n = 4", "n = 4\nradius = 2");
        let e = parse(&text).unwrap_err();
        assert!(e.message.contains("radius"), "{e}");
        assert!(e.line.is_some());
    }

    #[test]
    fn nonpositive_tolerance_is_rejected() {
        let text = format!(
            "{BASE}\n[[suite]]\nkind = \"rigidity\"\nname = \"r\"\nsurfaces = [\"bump\"]\ntargets = [{{ kind = \"weighted-mean\", k = 1 }}]\ntolerance = -1.0\n"
        );
        let e = parse(&text).unwrap_err();
        assert!(e.message.contains("tolerance"), "{e}");
        assert_eq!(e.line, Some(17));
    }

    #[test]
    fn sweep_needs_plan_or_sampler() {
        let text = "[[suite]]\nkind = \"sweep\"\nname = \"s\"\ncount = 10\n";
        assert!(parse(text).is_err());
        let ok = "[[suite]]\nkind = \"sweep\"\nname = \"s\"\ncount = 10\nplan = \"hyperbolic\"\n";
        assert!(parse(ok).is_ok());
        let bad = "[[suite]]\nkind = \"sweep\"\nname = \"s\"\ncount = 10\nsampler = { cone = { kind = \"horoconvex\" }, n = 4 }\nchecks = [{ check = \"refined-newton-maclaurin\", k = 2 }]\n";
        assert!(parse(bad).unwrap_err().message.contains("not admissible"));
    }
}
