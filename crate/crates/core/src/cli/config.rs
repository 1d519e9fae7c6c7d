//! Plain-text `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. `schema_version = 1` is
//! required, unknown or repeated keys are rejected. Command-line flags are
//! applied on top of the file.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;

use crate::equidist::{OracleConfig, VolumeOptions, DEFAULT_FOLD_CORNER_BOUND};
use crate::registry::RegistryBudget;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
pub const OUT_DIR_ENV: &str = "SHIMURA_LAB_OUT_DIR";

pub const FORM: &str = "diag(1,1,-1)";
pub const FIELD: &str = "Q(i)";

#[derive(Clone, Debug, PartialEq)]
pub enum CurveSelection {
    All,
    /// Curves with a hyperbolic stabilizer element.
    Hyperbolic,
    Ids(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseSelection {
    One,
    Two,
    Both,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub form: String,
    pub field: String,
    pub generators: Option<PathBuf>,
    pub registry: Option<PathBuf>,
    pub height: u32,
    pub word_bound: u32,
    pub entry_bound: u32,
    pub max_stabilizer_gens: usize,
    pub seed: u64,
    pub n: usize,
    /// None means the height schedule 4 + ln(1 + height).
    pub radius: Option<f64>,
    pub precision: u32,
    pub out: PathBuf,
    pub curves: CurveSelection,
    pub fold_corner_bound: u32,
    pub fold_word_bound: usize,
    pub volume_radius: f64,
    pub volume_samples: usize,
    pub oracle_nodes: usize,
    pub oracle_replicates: usize,
    pub oracle_radius: f64,
    pub oracle_seed: u64,
    pub oracle_max_error: f64,
    pub trials: usize,
    pub case: CaseSelection,
    pub order: usize,
    pub forms: usize,
    pub model: Option<PathBuf>,
    pub periods: Option<PathBuf>,
    /// Tolerance of the high-precision φ_ω check in `verify`.
    pub tolerance: f64,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        let budget = RegistryBudget::default();
        let oracle = OracleConfig::default();
        RunConfig {
            form: FORM.into(),
            field: FIELD.into(),
            generators: None,
            registry: None,
            height: budget.height,
            word_bound: budget.word_bound,
            entry_bound: budget.entry_bound,
            max_stabilizer_gens: budget.max_stabilizer_gens,
            seed: 1,
            n: 10_000,
            radius: None,
            precision: budget.precision_digits,
            out: PathBuf::from("out"),
            curves: CurveSelection::Hyperbolic,
            fold_corner_bound: DEFAULT_FOLD_CORNER_BOUND,
            fold_word_bound: 64,
            volume_radius: 5.0,
            volume_samples: VolumeOptions::default().samples,
            oracle_nodes: oracle.nodes_per_replicate,
            oracle_replicates: oracle.replicates,
            oracle_radius: oracle.radius,
            oracle_seed: oracle.seed,
            oracle_max_error: 1e-3,
            trials: 100,
            case: CaseSelection::Both,
            order: 32,
            forms: 100,
            model: None,
            periods: None,
            tolerance: 1e-30,
            workers: None,
        }
    }
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("{key}: cannot parse {v:?}"))
}

fn positive<T: FromStr + PartialOrd + Default>(key: &str, v: &str) -> Result<T, String> {
    let x: T = num(key, v)?;
    if x <= T::default() {
        return Err(format!("{key} must be positive"));
    }
    Ok(x)
}

impl RunConfig {
    pub fn budget(&self) -> RegistryBudget {
        RegistryBudget {
            height: self.height,
            word_bound: self.word_bound,
            entry_bound: self.entry_bound,
            max_stabilizer_gens: self.max_stabilizer_gens,
            precision_digits: self.precision,
        }
    }

    pub fn oracle(&self) -> OracleConfig {
        OracleConfig {
            nodes_per_replicate: self.oracle_nodes,
            replicates: self.oracle_replicates,
            radius: self.oracle_radius,
            seed: self.oracle_seed,
        }
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        let path = |v: &str| Some(PathBuf::from(v));
        match key {
            "schema_version" => {
                let s: u32 = num(key, v)?;
                if s != CONFIG_SCHEMA_VERSION {
                    return Err(format!("unsupported schema_version {s}"));
                }
            }
            "form" => {
                if v.replace(' ', "") != FORM {
                    return Err(format!("only form {FORM} is supported, got {v:?}"));
                }
            }
            "field" => {
                if v != FIELD {
                    return Err(format!("only field {FIELD} is supported, got {v:?}"));
                }
            }
            "generators" => self.generators = path(v),
            "registry" => self.registry = path(v),
            "height" => self.height = num(key, v)?,
            "word_bound" => self.word_bound = num(key, v)?,
            "entry_bound" => self.entry_bound = positive(key, v)?,
            "max_stabilizer_gens" => self.max_stabilizer_gens = positive(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "n" => self.n = positive(key, v)?,
            "radius" => self.radius = if v == "auto" { None } else { Some(positive(key, v)?) },
            "precision" => self.precision = positive(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "curves" => {
                self.curves = match v {
                    "all" => CurveSelection::All,
                    "hyperbolic" => CurveSelection::Hyperbolic,
                    ids => CurveSelection::Ids(ids.split(',').map(|s| s.trim().to_string()).collect()),
                }
            }
            "fold_corner_bound" => self.fold_corner_bound = positive(key, v)?,
            "fold_word_bound" => self.fold_word_bound = num(key, v)?,
            "volume_radius" => self.volume_radius = positive(key, v)?,
            "volume_samples" => self.volume_samples = positive(key, v)?,
            "oracle_nodes" => self.oracle_nodes = positive(key, v)?,
            "oracle_replicates" => self.oracle_replicates = positive(key, v)?,
            "oracle_radius" => self.oracle_radius = positive(key, v)?,
            "oracle_seed" => self.oracle_seed = num(key, v)?,
            "oracle_max_error" => self.oracle_max_error = positive(key, v)?,
            "trials" => self.trials = positive(key, v)?,
            "case" => {
                self.case = match v {
                    "one" => CaseSelection::One,
                    "two" => CaseSelection::Two,
                    "both" => CaseSelection::Both,
                    _ => return Err(format!("case must be one, two or both, got {v:?}")),
                }
            }
            "order" => self.order = positive(key, v)?,
            "forms" => self.forms = positive(key, v)?,
            "model" => self.model = path(v),
            "periods" => self.periods = path(v),
            "tolerance" => self.tolerance = positive(key, v)?,
            "workers" => self.workers = Some(positive(key, v)?),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<RunConfig, String> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeSet::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", k + 1))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(format!("line {}: repeated key {key:?}", k + 1));
            }
            cfg.set(key, value).map_err(|e| format!("line {}: {e}", k + 1))?;
        }
        if !seen.contains("schema_version") {
            return Err("missing schema_version".into());
        }
        Ok(cfg)
    }

    /// Renders every key, so that `parse(render())` reproduces the config.
    pub fn render(&self) -> String {
        let opt = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let mut lines = vec![
            format!("schema_version = {CONFIG_SCHEMA_VERSION}"),
            format!("form = {}", self.form),
            format!("field = {}", self.field),
            format!("height = {}", self.height),
            format!("word_bound = {}", self.word_bound),
            format!("entry_bound = {}", self.entry_bound),
            format!("max_stabilizer_gens = {}", self.max_stabilizer_gens),
            format!("seed = {}", self.seed),
            format!("n = {}", self.n),
            format!("radius = {}", self.radius.map_or("auto".to_string(), |r| r.to_string())),
            format!("precision = {}", self.precision),
            format!("out = {}", self.out.display()),
            format!(
                "curves = {}",
                match &self.curves {
                    CurveSelection::All => "all".to_string(),
                    CurveSelection::Hyperbolic => "hyperbolic".to_string(),
                    CurveSelection::Ids(ids) => ids.join(","),
                }
            ),
            format!("fold_corner_bound = {}", self.fold_corner_bound),
            format!("fold_word_bound = {}", self.fold_word_bound),
            format!("volume_radius = {}", self.volume_radius),
            format!("volume_samples = {}", self.volume_samples),
            format!("oracle_nodes = {}", self.oracle_nodes),
            format!("oracle_replicates = {}", self.oracle_replicates),
            format!("oracle_radius = {}", self.oracle_radius),
            format!("oracle_seed = {}", self.oracle_seed),
            format!("oracle_max_error = {:e}", self.oracle_max_error),
            format!("trials = {}", self.trials),
            format!(
                "case = {}",
                match self.case {
                    CaseSelection::One => "one",
                    CaseSelection::Two => "two",
                    CaseSelection::Both => "both",
                }
            ),
            format!("order = {}", self.order),
            format!("forms = {}", self.forms),
            format!("tolerance = {:e}", self.tolerance),
        ];
        for (key, v) in [
            ("generators", opt(&self.generators)),
            ("registry", opt(&self.registry)),
            ("model", opt(&self.model)),
            ("periods", opt(&self.periods)),
            ("workers", self.workers.map(|w| w.to_string())),
        ] {
            if let Some(v) = v {
                lines.push(format!("{key} = {v}"));
            }
        }
        lines.join("\n") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_roundtrip() {
        let text = "schema_version = 1\n# comment\nheight = 1\nradius = 4.5  # trailing\ncurves = c0001,c0003\n";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.height, 1);
        assert_eq!(cfg.radius, Some(4.5));
        assert_eq!(cfg.curves, CurveSelection::Ids(vec!["c0001".into(), "c0003".into()]));
        assert_eq!(RunConfig::parse(&cfg.render()).unwrap(), cfg);
        let mut with_paths = cfg.clone();
        with_paths.model = Some("m.json".into());
        with_paths.workers = Some(3);
        assert_eq!(RunConfig::parse(&with_paths.render()).unwrap(), with_paths);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "height = 1\n",
            "schema_version = 2\n",
            "schema_version = 1\ncolour = red\n",
            "schema_version = 1\nheight = 1\nheight = 2\n",
            "schema_version = 1\nheight\n",
            "schema_version = 1\nn = 0\n",
            "schema_version = 1\nfield = Q(sqrt(-3))\n",
        ] {
            assert!(RunConfig::parse(bad).is_err(), "{bad:?}");
        }
        assert!(RunConfig::parse("schema_version = 1\nform = diag(1, 1, -1)\n").is_ok());
    }
}
