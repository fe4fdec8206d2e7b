//! Study configuration: `key = value` config files, flag overrides and the
//! resolved settings for convergence and cost runs.
//!
//! The file format is line oriented: one `key = value` pair per line, `#`
//! starts a comment, blank lines are ignored, later assignments win. Flags
//! override file values; anything left unset falls back to the bundled
//! ten-mass benchmark (H = 0.25 halved six times, m = 20 on [0, 40]).

use crate::error::{Error, Result};
use crate::problems::MassSpringChain;
use crate::rk::ButcherTableau;
use std::path::PathBuf;

/// Norm used to reduce a block's error vector to a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorNorm {
    Euclidean,
    Max,
    /// Absolute error of one component of the block state.
    Component(usize),
}

impl ErrorNorm {
    pub fn parse(text: &str) -> Option<ErrorNorm> {
        match text {
            "euclid" | "euclidean" => Some(ErrorNorm::Euclidean),
            "max" => Some(ErrorNorm::Max),
            _ => text
                .strip_prefix("component:")
                .and_then(|idx| idx.parse().ok())
                .map(ErrorNorm::Component),
        }
    }

    /// Reduce an error vector.
    pub fn reduce(&self, err: &[f64]) -> f64 {
        match self {
            ErrorNorm::Euclidean => err.iter().map(|e| e * e).sum::<f64>().sqrt(),
            ErrorNorm::Max => err.iter().fold(0.0, |acc, e| acc.max(e.abs())),
            ErrorNorm::Component(i) => err[*i].abs(),
        }
    }
}

impl std::fmt::Display for ErrorNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ErrorNorm::Euclidean => write!(f, "euclid"),
            ErrorNorm::Max => write!(f, "max"),
            ErrorNorm::Component(i) => write!(f, "component:{i}"),
        }
    }
}

/// Which scheme(s) a study runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Multirate,
    Singlerate,
    Both,
}

impl RunMode {
    pub fn parse(text: &str) -> Option<RunMode> {
        match text {
            "multirate" => Some(RunMode::Multirate),
            "singlerate" => Some(RunMode::Singlerate),
            "both" => Some(RunMode::Both),
            _ => None,
        }
    }

    pub fn includes_multirate(&self) -> bool {
        matches!(self, RunMode::Multirate | RunMode::Both)
    }

    pub fn includes_singlerate(&self) -> bool {
        matches!(self, RunMode::Singlerate | RunMode::Both)
    }
}

/// Fully resolved study settings.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub chain: MassSpringChain,
    pub scheme: String,
    /// Macro step sizes, descending.
    pub h_macro_list: Vec<f64>,
    pub mrfactor: usize,
    pub t_end: f64,
    pub norm: ErrorNorm,
    pub mode: RunMode,
    pub out_dir: PathBuf,
}

impl StudyConfig {
    pub fn tableau(&self) -> Result<ButcherTableau> {
        ButcherTableau::from_name(&self.scheme).ok_or_else(|| Error::Config {
            key: "scheme".into(),
            reason: format!("unknown scheme '{}'", self.scheme),
        })
    }

    /// Largest macro step of the sweep.
    pub fn h_max(&self) -> f64 {
        self.h_macro_list[0]
    }
}

/// Flag-level overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub mrfactor: Option<usize>,
    pub h_max: Option<f64>,
    pub halvings: Option<usize>,
    pub t_end: Option<f64>,
    pub norm: Option<ErrorNorm>,
    pub mode: Option<RunMode>,
    pub out_dir: Option<PathBuf>,
}

fn config_err(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        reason: reason.into(),
    }
}

#[derive(Debug)]
struct RawSettings {
    n: usize,
    m1: f64,
    m2: f64,
    k1: f64,
    k2: f64,
    x1: f64,
    v1: f64,
    xrest: f64,
    vrest: f64,
    scheme: String,
    mrfactor: usize,
    h_max: f64,
    halvings: usize,
    h_list: Option<Vec<f64>>,
    t_end: f64,
    norm: ErrorNorm,
    mode: RunMode,
    out_dir: PathBuf,
}

impl Default for RawSettings {
    fn default() -> Self {
        RawSettings {
            n: 10,
            m1: 1.0,
            m2: 20.0,
            k1: 20.0,
            k2: 1.0,
            x1: -0.005,
            v1: 0.0,
            xrest: 0.1,
            vrest: 0.0,
            scheme: "rk4".into(),
            mrfactor: 20,
            h_max: 0.25,
            halvings: 6,
            h_list: None,
            t_end: 40.0,
            norm: ErrorNorm::Euclidean,
            mode: RunMode::Multirate,
            out_dir: PathBuf::from("."),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| config_err(key, format!("invalid number '{value}'")))
}

/// Parse config file text and apply flag overrides; empty text plus no
/// overrides yields the benchmark defaults.
pub fn parse_config(text: &str, overrides: &Overrides) -> Result<StudyConfig> {
    let mut raw = RawSettings::default();

    for (line_no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(config_err(
                &format!("line {}", line_no + 1),
                format!("expected 'key = value', got '{line}'"),
            ));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "n" => raw.n = parse_num(key, value)?,
            "m1" => raw.m1 = parse_num(key, value)?,
            "m2" => raw.m2 = parse_num(key, value)?,
            "k1" => raw.k1 = parse_num(key, value)?,
            "k2" => raw.k2 = parse_num(key, value)?,
            "x1" => raw.x1 = parse_num(key, value)?,
            "v1" => raw.v1 = parse_num(key, value)?,
            "xrest" => raw.xrest = parse_num(key, value)?,
            "vrest" => raw.vrest = parse_num(key, value)?,
            "scheme" => raw.scheme = value.to_string(),
            "mrfactor" => raw.mrfactor = parse_num(key, value)?,
            "Hmax" => raw.h_max = parse_num(key, value)?,
            "halvings" => raw.halvings = parse_num(key, value)?,
            "Hs" => {
                let mut list = Vec::new();
                for part in value.split(',') {
                    list.push(parse_num::<f64>(key, part.trim())?);
                }
                raw.h_list = Some(list);
            }
            "tend" => raw.t_end = parse_num(key, value)?,
            "norm" => {
                raw.norm = ErrorNorm::parse(value)
                    .ok_or_else(|| config_err(key, format!("unknown norm '{value}'")))?
            }
            "mode" => {
                raw.mode = RunMode::parse(value)
                    .ok_or_else(|| config_err(key, format!("unknown mode '{value}'")))?
            }
            "out" => raw.out_dir = PathBuf::from(value),
            _ => return Err(config_err(key, "unknown key")),
        }
    }

    if let Some(n) = overrides.n {
        raw.n = n;
    }
    if let Some(v) = overrides.m1 {
        raw.m1 = v;
    }
    if let Some(v) = overrides.m2 {
        raw.m2 = v;
    }
    if let Some(v) = overrides.k1 {
        raw.k1 = v;
    }
    if let Some(v) = overrides.k2 {
        raw.k2 = v;
    }
    if let Some(v) = overrides.mrfactor {
        raw.mrfactor = v;
    }
    if let Some(v) = overrides.h_max {
        raw.h_max = v;
        raw.h_list = None;
    }
    if let Some(v) = overrides.halvings {
        raw.halvings = v;
        raw.h_list = None;
    }
    if let Some(v) = overrides.t_end {
        raw.t_end = v;
    }
    if let Some(v) = overrides.norm {
        raw.norm = v;
    }
    if let Some(v) = overrides.mode {
        raw.mode = v;
    }
    if let Some(v) = &overrides.out_dir {
        raw.out_dir = v.clone();
    }

    resolve(raw)
}

fn resolve(raw: RawSettings) -> Result<StudyConfig> {
    if raw.n < 2 {
        return Err(config_err(
            "n",
            format!("need at least 2 masses, got {}", raw.n),
        ));
    }
    for (key, v) in [
        ("m1", raw.m1),
        ("m2", raw.m2),
        ("k1", raw.k1),
        ("k2", raw.k2),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(config_err(
                key,
                format!("must be positive and finite, got {v}"),
            ));
        }
    }
    if raw.mrfactor == 0 {
        return Err(config_err("mrfactor", "must be at least 1"));
    }
    if !(raw.t_end > 0.0 && raw.t_end.is_finite()) {
        return Err(config_err(
            "tend",
            format!("must be positive and finite, got {}", raw.t_end),
        ));
    }

    let (h_key, h_list) = match raw.h_list {
        Some(list) => {
            if list.is_empty() {
                return Err(config_err("Hs", "empty step list"));
            }
            let mut sorted = list;
            sorted.sort_by(|a, b| b.total_cmp(a));
            ("Hs", sorted)
        }
        None => {
            if raw.halvings > 60 {
                return Err(config_err(
                    "halvings",
                    "more than 60 halvings is not meaningful",
                ));
            }
            let list = (0..=raw.halvings)
                .map(|k| raw.h_max / (1u64 << k) as f64)
                .collect();
            ("Hmax", list)
        }
    };
    for &h in &h_list {
        if !(h > 0.0 && h.is_finite()) {
            return Err(config_err(
                h_key,
                format!("macro step must be positive, got {h}"),
            ));
        }
        let steps = raw.t_end / h;
        if (steps - steps.round()).abs() > 1e-9 * steps.abs().max(1.0) || steps.round() < 0.5 {
            return Err(config_err(
                h_key,
                format!(
                    "H = {h} does not divide [0, {}] into whole macro steps (got {steps})",
                    raw.t_end
                ),
            ));
        }
    }

    if ButcherTableau::from_name(&raw.scheme).is_none() {
        return Err(config_err(
            "scheme",
            format!("unknown scheme '{}'", raw.scheme),
        ));
    }

    if let ErrorNorm::Component(idx) = raw.norm {
        // The index must address both block states; the fast block is the
        // narrower one with 2 components.
        let limit = 2.min(2 * (raw.n - 1));
        if idx >= limit {
            return Err(config_err(
                "norm",
                format!("component index {idx} out of range (every block has at least {limit} components)"),
            ));
        }
    }

    let mut x0 = vec![raw.xrest; raw.n];
    x0[0] = raw.x1;
    let mut v0 = vec![raw.vrest; raw.n];
    v0[0] = raw.v1;
    let chain = MassSpringChain::new(raw.n, raw.m1, raw.m2, raw.k1, raw.k2, x0, v0)
        .map_err(|e| config_err("chain", e.to_string()))?;

    Ok(StudyConfig {
        chain,
        scheme: raw.scheme,
        h_macro_list: h_list,
        mrfactor: raw.mrfactor,
        t_end: raw.t_end,
        norm: raw.norm,
        mode: raw.mode,
        out_dir: raw.out_dir,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_yields_benchmark_defaults() {
        let cfg = parse_config("", &Overrides::default()).unwrap();
        assert_eq!(cfg.chain.n, 10);
        assert_eq!(cfg.chain.m1, 1.0);
        assert_eq!(cfg.chain.m2, 20.0);
        assert_eq!(cfg.chain.k1, 20.0);
        assert_eq!(cfg.chain.k2, 1.0);
        assert_eq!(cfg.chain.x0[0], -0.005);
        assert!(cfg.chain.x0[1..].iter().all(|&x| x == 0.1));
        assert!(cfg.chain.v0.iter().all(|&v| v == 0.0));
        assert_eq!(cfg.mrfactor, 20);
        assert_eq!(cfg.t_end, 40.0);
        assert_eq!(cfg.scheme, "rk4");
        assert_eq!(cfg.norm, ErrorNorm::Euclidean);
        assert_eq!(cfg.h_macro_list.len(), 7);
        assert_eq!(cfg.h_max(), 0.25);
        assert_eq!(cfg.h_macro_list[6], 0.00390625);
    }

    #[test]
    fn degenerate_multirate_factor_is_accepted() {
        let overrides = Overrides {
            mrfactor: Some(1),
            ..Default::default()
        };
        let cfg = parse_config("", &overrides).unwrap();
        assert_eq!(cfg.mrfactor, 1);
    }

    #[test]
    fn non_dividing_macro_step_is_rejected_naming_the_key() {
        let overrides = Overrides {
            h_max: Some(0.3),
            ..Default::default()
        };
        match parse_config("", &overrides) {
            Err(Error::Config { key, reason }) => {
                assert_eq!(key, "Hmax");
                assert!(reason.contains("0.3"), "{reason}");
            }
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn file_values_are_parsed_and_flags_win() {
        let text = "\
# benchmark tweaks
n = 4
k1 = 10.0   # stiff spring
tend = 8
mode = both
norm = max
out = results
";
        let overrides = Overrides {
            k1: Some(12.0),
            ..Default::default()
        };
        let cfg = parse_config(text, &overrides).unwrap();
        assert_eq!(cfg.chain.n, 4);
        assert_eq!(cfg.chain.k1, 12.0);
        assert_eq!(cfg.t_end, 8.0);
        assert_eq!(cfg.mode, RunMode::Both);
        assert_eq!(cfg.norm, ErrorNorm::Max);
        assert_eq!(cfg.out_dir, PathBuf::from("results"));
    }

    #[test]
    fn unknown_key_is_rejected() {
        match parse_config("frobnicate = 1\n", &Overrides::default()) {
            Err(Error::Config { key, reason }) => {
                assert_eq!(key, "frobnicate");
                assert_eq!(reason, "unknown key");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unparsable_number_names_the_key() {
        match parse_config("m2 = heavy\n", &Overrides::default()) {
            Err(Error::Config { key, reason }) => {
                assert_eq!(key, "m2");
                assert!(reason.contains("heavy"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn explicit_step_list_is_sorted_descending() {
        let cfg = parse_config("Hs = 0.1, 0.4, 0.2\ntend = 4\n", &Overrides::default()).unwrap();
        assert_eq!(cfg.h_macro_list, vec![0.4, 0.2, 0.1]);
    }

    #[test]
    fn component_norm_index_is_bounds_checked() {
        let cfg = parse_config("norm = component:1\n", &Overrides::default()).unwrap();
        assert_eq!(cfg.norm, ErrorNorm::Component(1));
        assert!(parse_config("norm = component:2\n", &Overrides::default()).is_err());
    }

    #[test]
    fn unknown_scheme_is_rejected() {
        assert!(matches!(
            parse_config("scheme = dopri5\n", &Overrides::default()),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn norm_reduction() {
        assert_eq!(ErrorNorm::Euclidean.reduce(&[3.0, 4.0]), 5.0);
        assert_eq!(ErrorNorm::Max.reduce(&[3.0, -4.0]), 4.0);
        assert_eq!(ErrorNorm::Component(1).reduce(&[3.0, -4.0]), 4.0);
    }
}
