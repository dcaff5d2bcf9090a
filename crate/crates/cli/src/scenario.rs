//! Scenario files: sectioned `key = value` text.
//!
//! ```text
//! [scenario]
//! name = generic_cusp
//! dim = 2
//! s0 = x0^2*y0/2
//! products = caustic, maxwell
//!
//! [time]
//! t = 1, 3/2
//!
//! [expect]
//! maxwell.b_exponent = 2
//! ```
//!
//! Lines starting with `#` are comments. Unknown sections and keys are
//! rejected with their line number.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use causticlab::polyalg::{parse_rational, to_f64, Polynomial, Rational};
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Product {
    Caustic,
    Levels,
    Maxwell,
    Premaxwell,
    Hotcool,
    Perestroika,
    Doublepoints,
    Zeta,
    Eta,
    Stats,
}

impl Product {
    pub const ALL: [Product; 10] = [
        Product::Caustic,
        Product::Levels,
        Product::Maxwell,
        Product::Premaxwell,
        Product::Hotcool,
        Product::Perestroika,
        Product::Doublepoints,
        Product::Zeta,
        Product::Eta,
        Product::Stats,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Product::Caustic => "caustic",
            Product::Levels => "levels",
            Product::Maxwell => "maxwell",
            Product::Premaxwell => "premaxwell",
            Product::Hotcool => "hotcool",
            Product::Perestroika => "perestroika",
            Product::Doublepoints => "doublepoints",
            Product::Zeta => "zeta",
            Product::Eta => "eta",
            Product::Stats => "stats",
        }
    }

    /// Products evaluated at each time of the grid.
    pub fn needs_times(self) -> bool {
        matches!(
            self,
            Product::Caustic | Product::Levels | Product::Maxwell | Product::Premaxwell | Product::Hotcool | Product::Doublepoints
        )
    }
}

impl FromStr for Product {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Product::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown product `{s}`"))
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A time of the grid, kept with its text for file names and keys.
#[derive(Clone, Debug, PartialEq)]
pub struct TimePoint {
    pub text: String,
    pub value: Rational,
}

impl TimePoint {
    pub fn as_f64(&self) -> f64 {
        to_f64(&self.value)
    }

    /// File-name suffix: `1/2` becomes `1_2`.
    pub fn slug(&self) -> String {
        self.text.replace(['/', '.'], "_").replace('-', "m")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZetaMode {
    Orthogonal,
    Ddim,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaOptions {
    pub mode: ZetaMode,
    pub a: f64,
    pub eps: f64,
    pub c: f64,
    pub h: f64,
    pub horizon: f64,
    pub window: Vec<(f64, f64)>,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        ZetaOptions {
            mode: ZetaMode::Orthogonal,
            a: 1.0,
            eps: 0.5,
            c: 0.0,
            h: 1e-3,
            horizon: 100.0,
            window: vec![(-5.0, 5.0), (-5.0, 5.0)],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StatsOptions {
    pub paths: usize,
    pub horizons: Vec<f64>,
    pub delta: f64,
    pub permutation_seed: u64,
    /// Times at which the ensemble mean of `ζ + c` is reported.
    pub mean_times: Vec<f64>,
}

impl Default for StatsOptions {
    fn default() -> Self {
        StatsOptions { paths: 1000, horizons: vec![10.0, 50.0, 100.0], delta: 0.1, permutation_seed: 0, mean_times: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expectation {
    pub key: String,
    pub values: Vec<f64>,
    pub tolerance: f64,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub dim: usize,
    pub s0_text: String,
    pub s0: Polynomial,
    pub direction: Vec<f64>,
    pub epsilon: f64,
    pub seed: u64,
    pub products: Vec<Product>,
    pub times: Vec<TimePoint>,
    pub symbolic: bool,
    pub out: Option<PathBuf>,
    pub lambda_range: (f64, f64),
    pub samples: usize,
    pub window: Option<[(f64, f64); 2]>,
    pub pre_window: [(f64, f64); 2],
    pub levels: Vec<(String, Rational)>,
    pub hotcool_range: (f64, f64),
    pub hotcool_samples: usize,
    pub perestroika_range: (f64, f64),
    pub dp_a: (f64, f64),
    pub dp_eta: (f64, f64),
    pub dp_min_width: f64,
    pub zeta: ZetaOptions,
    pub stats: StatsOptions,
    pub eta_h: f64,
    pub eta_horizon: f64,
    pub default_tolerance: f64,
    pub expect: Option<Vec<Expectation>>,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("scenario", &["name", "dim", "s0", "direction", "epsilon", "seed", "products"]),
    ("time", &["t", "symbolic"]),
    ("output", &["dir"]),
    ("caustic", &["lambda_range", "samples", "window", "pre_window"]),
    ("levels", &["c"]),
    ("hotcool", &["lambda_range", "samples"]),
    ("perestroika", &["t_range"]),
    ("doublepoints", &["a_range", "eta_range", "min_width"]),
    ("zeta", &["mode", "a", "eps", "c", "h", "horizon", "window"]),
    ("stats", &["paths", "horizons", "delta", "permutation_seed", "mean_times"]),
    ("eta", &["h", "horizon"]),
    ("tolerances", &["default"]),
];

fn err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

fn list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn num(v: &str, line: usize) -> Result<f64, CliError> {
    let x: f64 = v.trim().parse().map_err(|_| err(line, format!("`{v}` is not a number")))?;
    if !x.is_finite() {
        return Err(err(line, format!("`{v}` is not finite")));
    }
    Ok(x)
}

fn nums(v: &str, line: usize) -> Result<Vec<f64>, CliError> {
    list(v).into_iter().map(|s| num(s, line)).collect()
}

fn range(v: &str, line: usize) -> Result<(f64, f64), CliError> {
    match nums(v, line)?.as_slice() {
        [lo, hi] if lo < hi => Ok((*lo, *hi)),
        _ => Err(err(line, format!("`{v}` is not an increasing pair `lo, hi`"))),
    }
}

fn integer<T: FromStr>(v: &str, line: usize) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| err(line, format!("`{v}` is not a non-negative integer")))
}

fn rational(v: &str, line: usize) -> Result<Rational, CliError> {
    parse_rational(v.trim()).map_err(|e| err(line, format!("`{v}`: {e}")))
}

fn boolean(v: &str, line: usize) -> Result<bool, CliError> {
    match v.trim() {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        other => Err(err(line, format!("`{other}` is not true or false"))),
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let mut sc = Scenario::default();
        let mut seen = BTreeSet::new();
        let mut section = String::new();
        let mut expect: Option<Vec<Expectation>> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| err(line, "unterminated section header"))?.trim();
                if name != "expect" && !SECTIONS.iter().any(|(s, _)| *s == name) {
                    return Err(err(line, format!("unknown section [{name}]")));
                }
                if name == "expect" {
                    expect.get_or_insert_with(Vec::new);
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| err(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if section.is_empty() {
                return Err(err(line, format!("key `{key}` outside any section")));
            }
            if section == "expect" {
                expect.get_or_insert_with(Vec::new).push(parse_expectation(key, value, line)?);
                continue;
            }
            let known = SECTIONS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k).unwrap_or(&[]);
            if !known.contains(&key) {
                return Err(err(line, format!("unknown key `{key}` in [{section}]")));
            }
            if !seen.insert(format!("{section}.{key}")) {
                return Err(err(line, format!("duplicate key `{key}` in [{section}]")));
            }
            match (section.as_str(), key) {
                ("scenario", "name") => sc.name = value.to_string(),
                ("scenario", "dim") => sc.dim = integer(value, line)?,
                ("scenario", "s0") => {
                    sc.s0 = value.parse().map_err(|e| err(line, format!("s0: {e}")))?;
                    sc.s0_text = value.to_string();
                }
                ("scenario", "direction") => sc.direction = nums(value, line)?,
                ("scenario", "epsilon") => sc.epsilon = num(value, line)?,
                ("scenario", "seed") => sc.seed = integer(value, line)?,
                ("scenario", "products") => {
                    let mut ps = list(value)
                        .into_iter()
                        .map(|p| p.parse::<Product>().map_err(|e| err(line, e)))
                        .collect::<Result<Vec<_>, _>>()?;
                    ps.sort();
                    ps.dedup();
                    sc.products = ps;
                }
                ("time", "t") => {
                    sc.times = list(value)
                        .into_iter()
                        .map(|s| Ok(TimePoint { text: s.to_string(), value: rational(s, line)? }))
                        .collect::<Result<_, CliError>>()?;
                    if let Some(bad) = sc.times.iter().find(|t| t.as_f64() <= 0.0) {
                        return Err(err(line, format!("time `{}` must be positive", bad.text)));
                    }
                }
                ("time", "symbolic") => sc.symbolic = boolean(value, line)?,
                ("output", "dir") => sc.out = Some(PathBuf::from(value)),
                ("caustic", "lambda_range") => sc.lambda_range = range(value, line)?,
                ("caustic", "samples") => sc.samples = integer(value, line)?,
                ("caustic", "window") => {
                    let v = nums(value, line)?;
                    if v.len() != 4 || v[0] >= v[1] || v[2] >= v[3] {
                        return Err(err(line, "window is `xlo, xhi, ylo, yhi`"));
                    }
                    sc.window = Some([(v[0], v[1]), (v[2], v[3])]);
                }
                ("caustic", "pre_window") => {
                    let v = nums(value, line)?;
                    if v.len() != 4 || v[0] >= v[1] || v[2] >= v[3] {
                        return Err(err(line, "pre_window is `x0lo, x0hi, y0lo, y0hi`"));
                    }
                    sc.pre_window = [(v[0], v[1]), (v[2], v[3])];
                }
                ("levels", "c") => {
                    sc.levels = list(value)
                        .into_iter()
                        .map(|s| Ok((s.to_string(), rational(s, line)?)))
                        .collect::<Result<_, CliError>>()?;
                }
                ("hotcool", "lambda_range") => sc.hotcool_range = range(value, line)?,
                ("hotcool", "samples") => sc.hotcool_samples = integer(value, line)?,
                ("perestroika", "t_range") => sc.perestroika_range = range(value, line)?,
                ("doublepoints", "a_range") => sc.dp_a = range(value, line)?,
                ("doublepoints", "eta_range") => sc.dp_eta = range(value, line)?,
                ("doublepoints", "min_width") => sc.dp_min_width = num(value, line)?,
                ("zeta", "mode") => {
                    sc.zeta.mode = match value {
                        "orthogonal" => ZetaMode::Orthogonal,
                        "ddim" => ZetaMode::Ddim,
                        other => return Err(err(line, format!("zeta mode `{other}` is not orthogonal or ddim"))),
                    }
                }
                ("zeta", "a") => sc.zeta.a = num(value, line)?,
                ("zeta", "eps") => sc.zeta.eps = num(value, line)?,
                ("zeta", "c") => sc.zeta.c = num(value, line)?,
                ("zeta", "h") => sc.zeta.h = num(value, line)?,
                ("zeta", "horizon") => sc.zeta.horizon = num(value, line)?,
                ("zeta", "window") => {
                    let v = nums(value, line)?;
                    if v.len() % 2 != 0 || v.is_empty() || v.chunks(2).any(|p| p[0] >= p[1]) {
                        return Err(err(line, "window is a list of increasing pairs"));
                    }
                    sc.zeta.window = v.chunks(2).map(|p| (p[0], p[1])).collect();
                }
                ("stats", "paths") => sc.stats.paths = integer(value, line)?,
                ("stats", "horizons") => sc.stats.horizons = nums(value, line)?,
                ("stats", "delta") => sc.stats.delta = num(value, line)?,
                ("stats", "permutation_seed") => sc.stats.permutation_seed = integer(value, line)?,
                ("stats", "mean_times") => sc.stats.mean_times = nums(value, line)?,
                ("eta", "h") => sc.eta_h = num(value, line)?,
                ("eta", "horizon") => sc.eta_horizon = num(value, line)?,
                ("tolerances", "default") => sc.default_tolerance = num(value, line)?,
                _ => unreachable!("key table and match agree"),
            }
        }
        if sc.s0_text.is_empty() {
            return Err(err(text.lines().count().max(1), "[scenario] needs `s0`"));
        }
        if sc.name.is_empty() {
            sc.name = "scenario".into();
        }
        if sc.direction.is_empty() {
            sc.direction = vec![0.0; sc.dim];
        }
        sc.expect = expect;
        Ok(sc)
    }
}

/// `key = v1, v2 [+- tol]`.
fn parse_expectation(key: &str, value: &str, line: usize) -> Result<Expectation, CliError> {
    let (vals, tol) = match value.split_once("+-").or_else(|| value.split_once('±')) {
        Some((v, t)) => (v, Some(num(t, line)?)),
        None => (value, None),
    };
    let values = nums(vals, line)?;
    if values.is_empty() {
        return Err(err(line, format!("expectation `{key}` has no value")));
    }
    Ok(Expectation { key: key.to_string(), values, tolerance: tol.unwrap_or(f64::NAN), line })
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            name: String::new(),
            dim: 2,
            s0_text: String::new(),
            s0: Polynomial::zero(),
            direction: Vec::new(),
            epsilon: 0.0,
            seed: 0,
            products: Vec::new(),
            times: Vec::new(),
            symbolic: false,
            out: None,
            lambda_range: (-2.0, 2.0),
            samples: 400,
            window: None,
            pre_window: [(-2.0, 2.0), (-2.0, 2.0)],
            levels: Vec::new(),
            hotcool_range: (-1.0, 1.0),
            hotcool_samples: 41,
            perestroika_range: (0.01, 10.0),
            dp_a: (-5.0, 5.0),
            dp_eta: (1e-6, 5.0),
            dp_min_width: 1e-3,
            zeta: ZetaOptions::default(),
            stats: StatsOptions::default(),
            eta_h: 1e-3,
            eta_horizon: 10.0,
            default_tolerance: 1e-9,
            expect: None,
        }
    }
}
