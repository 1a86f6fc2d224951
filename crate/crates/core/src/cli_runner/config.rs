use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::band_spectra::Axis;
use crate::error::{invalid, Result};
use crate::quench_sim::{Direction, QuenchSchedule, DEFAULT_OMEGA0, DEFAULT_STEPS, PRESET_RAMP_TIME};
use crate::qudit_models::Coord;
use crate::sweep::Format;
use crate::topo_invariants::{Method, QuadratureGrid, Rule};

/// Parses `0.3`, `pi`, `-pi/2`, `3pi/4`, `3*pi/8` or `2 pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let bad = || invalid(format!("cannot parse angle {text:?}"));
    let Some((coef, rest)) = s.split_once("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let d = match rest {
        "" => 1.0,
        r => r.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    if d == 0.0 {
        return Err(bad());
    }
    Ok(c * PI / d)
}

/// An angle given as a number or a symbolic multiple of pi; the text form
/// is kept so configuration files round-trip unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    Value(f64),
    Text(String),
}

impl AngleSpec {
    pub fn value(&self) -> Result<f64> {
        match self {
            AngleSpec::Value(x) => Ok(*x),
            AngleSpec::Text(s) => parse_angle(s),
        }
    }
}

impl From<f64> for AngleSpec {
    fn from(x: f64) -> Self {
        AngleSpec::Value(x)
    }
}

/// Offsets as an explicit list or an inclusive `"start:stop:step"` range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    List(Vec<f64>),
    Range(String),
}

impl LambdaSpec {
    /// Range values are `start + i step`, rounded to 12 decimals.
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            LambdaSpec::List(v) => Ok(v.clone()),
            LambdaSpec::Range(s) => parse_range(s),
        }
    }
}

pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || invalid(format!("range {s:?} is not start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
    let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    if !(step > 0.0) || b < a {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).map(|x| if x == 0.0 { 0.0 } else { x }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Bands,
    Metric,
    Curvature,
    Charge,
    Sweep,
    Quench,
    Weyl,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Bands => "bands",
            CommandKind::Metric => "metric",
            CommandKind::Curvature => "curvature",
            CommandKind::Charge => "charge",
            CommandKind::Sweep => "sweep",
            CommandKind::Quench => "quench",
            CommandKind::Weyl => "weyl",
        }
    }
}

/// Named quench presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `T = 9 ns`, `omega0 = 2 pi x 5 MHz`.
    #[value(name = "paper-2020")]
    #[serde(rename = "paper-2020")]
    Paper2020,
    Sudden,
}

fn default_method() -> Method {
    Method::Analytic
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<LambdaSpec>,
    #[serde(default = "default_method")]
    pub method: Method,
    /// Use the anti-monopole family (`q_x -> -q_x`).
    pub anti_monopole: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { lambda: 0.0, lambdas: None, method: Method::Analytic, anti_monopole: false }
    }
}

/// Grid settings. Maps use `n_theta1 x n_theta2` points including the
/// endpoints; charges use them as interval counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n_theta1: usize,
    pub n_theta2: usize,
    pub n_phi: usize,
    pub rule: Rule,
    pub phi: AngleSpec,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = QuadratureGrid::default();
        Self { n_theta1: g.n_theta1, n_theta2: g.n_theta2, n_phi: g.n_phi, rule: g.rule, phi: AngleSpec::Value(0.0) }
    }
}

impl GridConfig {
    pub fn quadrature(&self) -> Result<QuadratureGrid> {
        QuadratureGrid::new(self.n_theta1, self.n_theta2, self.n_phi, self.rule)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuenchConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_q: Option<AngleSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    /// Seconds; overrides the preset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ramp_time: Option<f64>,
    pub n_steps: usize,
    pub omega0: f64,
    /// One axis, or two for a joint quench.
    pub direction: Vec<Coord>,
    /// Start point `(theta1, theta2, phi)` of the `quench` command.
    pub point: [AngleSpec; 3],
}

impl Default for QuenchConfig {
    fn default() -> Self {
        Self {
            delta_q: None,
            preset: None,
            ramp_time: None,
            n_steps: DEFAULT_STEPS,
            omega0: DEFAULT_OMEGA0,
            direction: vec![Coord::Theta1],
            point: [AngleSpec::Text("pi/3".into()), AngleSpec::Text("pi/4".into()), AngleSpec::Value(0.0)],
        }
    }
}

impl QuenchConfig {
    pub fn direction(&self) -> Result<Direction> {
        match self.direction.as_slice() {
            [a] => Ok(Direction::Axis(*a)),
            [a, b] => Direction::pair(*a, *b),
            _ => Err(invalid("quench direction needs one or two axes")),
        }
    }

    pub fn ramp_time(&self) -> f64 {
        match (self.ramp_time, self.preset) {
            (Some(t), _) => t,
            (None, Some(Preset::Paper2020)) => PRESET_RAMP_TIME,
            _ => 0.0,
        }
    }

    pub fn schedule(&self) -> Result<QuenchSchedule> {
        let dq = self.delta_q.as_ref().ok_or_else(|| invalid("the quench method needs delta_q"))?.value()?;
        QuenchSchedule {
            direction: self.direction()?,
            delta_q: dq,
            ramp_time: self.ramp_time(),
            n_steps: self.n_steps,
            omega0: self.omega0,
        }
        .validated()
    }

    pub fn start(&self) -> Result<[f64; 3]> {
        Ok([self.point[0].value()?, self.point[1].value()?, self.point[2].value()?])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BandsConfig {
    pub axis: Axis,
    pub samples: usize,
    pub fixed: [f64; 4],
}

impl Default for BandsConfig {
    fn default() -> Self {
        Self { axis: Axis::Kx, samples: 201, fixed: [0.0; 4] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { path: None, format: Format::Csv }
    }
}

/// Everything needed to reproduce one table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    /// Seed for randomized self-checks; the numerical recipes are deterministic.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub quench: QuenchConfig,
    #[serde(default)]
    pub bands: BandsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            seed: 0,
            model: ModelConfig::default(),
            grid: GridConfig::default(),
            quench: QuenchConfig::default(),
            bands: BandsConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| invalid(format!("bad config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Offsets to sweep: `lambdas` when given, else the single `lambda`.
    pub fn lambdas(&self) -> Result<Vec<f64>> {
        match &self.model.lambdas {
            Some(spec) => spec.values(),
            None => Ok(vec![self.model.lambda]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_8;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/8").unwrap(), FRAC_PI_8);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("PI").unwrap(), PI);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("pie").is_err());
    }

    #[test]
    fn ranges() {
        let v = parse_range("-2:2:0.1").unwrap();
        assert_eq!(v.len(), 41);
        assert_eq!(v[0], -2.0);
        assert_eq!(v[20], 0.0);
        assert_eq!(v[13], -0.7);
        assert_eq!(v[40], 2.0);
        assert!(parse_range("2:-2:0.1").is_err());
        assert!(parse_range("0:1").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let mut c = RunConfig::new(CommandKind::Sweep);
        c.model.method = Method::Quench;
        c.model.lambdas = Some(LambdaSpec::Range("-2:2:0.1".into()));
        c.quench.delta_q = Some(AngleSpec::Text("pi/8".into()));
        c.quench.preset = Some(Preset::Paper2020);
        c.grid.n_theta1 = 240;
        c.output.path = Some("out/fig.csv".into());
        let back = RunConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_toml(), c.to_toml());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("command = \"charge\"\nlamda = 1.0\n").is_err());
        assert!(RunConfig::from_toml("command = \"charge\"\n[model]\nlamda = 1.0\n").is_err());
        assert!(RunConfig::from_toml("command = \"charge\"\n[model]\nlambda = 1.0\n").is_ok());
    }

    #[test]
    fn schedule_from_preset() {
        let mut q = QuenchConfig { delta_q: Some("pi/16".to_string()).map(AngleSpec::Text), ..Default::default() };
        assert_eq!(q.schedule().unwrap().ramp_time, 0.0);
        q.preset = Some(Preset::Paper2020);
        assert_eq!(q.schedule().unwrap().ramp_time, 9e-9);
        q.direction = vec![Coord::Phi, Coord::Phi];
        assert!(q.schedule().is_err());
    }
}
