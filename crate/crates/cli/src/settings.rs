//! Option resolution: flags, then the config file, then built-in defaults.
//! Every option travels as text so both sources share one parser.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use unruhchan_core::unruh::{squeezing_parameter, DEFAULT_CUTOFF_CAP, DEFAULT_TOL, Q_R_MIN};
use unruhchan_core::{Cutoff, Measure, Rail, Receiver, UnruhWeights};

use crate::args::SharedArgs;
use crate::error::CliError;

pub const CAP_ENV: &str = "UNRUHCHAN_NMAX_CAP";

/// Keys accepted in a config file; they match the long flag names.
const CONFIG_KEYS: &[&str] = &[
    "rail", "channel", "r", "a", "omega", "c", "qr", "alpha2", "nmax", "tol", "jobs", "out",
    "format", "measure", "receiver",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Classical,
    Quantum,
    Both,
}

impl Channel {
    pub fn classical(self) -> bool {
        self != Channel::Quantum
    }

    pub fn quantum(self) -> bool {
        self != Channel::Classical
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        self != Format::Svg
    }

    pub fn svg(self) -> bool {
        self != Format::Csv
    }
}

/// Flat `key = value` file; `#` starts a comment.
pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(CliError::Usage(format!(
                "{}:{}: unknown key `{key}`",
                path.display(),
                lineno + 1
            )));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

/// Command-specific fallbacks for options left unset by flags and config.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub r: &'static str,
    pub qr: &'static str,
    pub alpha2: &'static str,
    pub channel: &'static str,
    pub format: &'static str,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub rail: Rail,
    pub channel: Channel,
    pub rs: Vec<f64>,
    pub qrs: Vec<f64>,
    pub alpha2s: Vec<f64>,
    pub cutoff: Cutoff,
    pub tol: f64,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub measure: Measure,
    pub receiver: Receiver,
    /// Which options were given explicitly, by flag or config.
    pub explicit: Explicit,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Explicit {
    pub r: bool,
    pub nmax: bool,
}

struct Sources<'a> {
    flags: BTreeMap<&'static str, String>,
    config: &'a BTreeMap<String, String>,
}

impl Sources<'_> {
    fn get(&self, key: &str) -> Option<&str> {
        self.flags
            .get(key)
            .map(String::as_str)
            .or_else(|| self.config.get(key).map(String::as_str))
    }
}

impl Settings {
    pub fn resolve(args: &SharedArgs, defaults: Defaults) -> Result<Self, CliError> {
        let config = match &args.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let mut flags = BTreeMap::new();
        let mut put = |k: &'static str, v: &Option<String>| {
            if let Some(v) = v {
                flags.insert(k, v.clone());
            }
        };
        put("rail", &args.rail);
        put("channel", &args.channel);
        put("r", &args.r);
        put("a", &args.a);
        put("omega", &args.omega);
        put("c", &args.c);
        put("qr", &args.qr);
        put("alpha2", &args.alpha2);
        put("nmax", &args.nmax);
        put("tol", &args.tol);
        put("jobs", &args.jobs);
        put("out", &args.out);
        put("format", &args.format);
        put("measure", &args.measure);
        put("receiver", &args.receiver);
        let src = Sources {
            flags,
            config: &config,
        };

        let rs = match (src.get("r"), src.get("a")) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "give either --r or --a/--omega/--c, not both".into(),
                ))
            }
            (None, Some(a)) => {
                let a = parse_f64("a", a)?;
                let omega = parse_f64("omega", src.get("omega").unwrap_or("1"))?;
                let c = parse_f64("c", src.get("c").unwrap_or("1"))?;
                vec![squeezing_parameter(a, omega, c)?]
            }
            (r, None) => parse_range(r.unwrap_or(defaults.r))?,
        };

        let qrs = parse_list("qr", src.get("qr").unwrap_or(defaults.qr))?;
        for &q in &qrs {
            UnruhWeights::new(q)?;
        }
        let alpha2s = parse_list("alpha2", src.get("alpha2").unwrap_or(defaults.alpha2))?;
        for &a in &alpha2s {
            if !(0.0..=1.0).contains(&a) {
                return Err(CliError::Usage(format!(
                    "alpha2 must lie in [0, 1], got {a}"
                )));
            }
        }

        let tol = parse_f64("tol", src.get("tol").unwrap_or(&DEFAULT_TOL.to_string()))?;
        if !(tol > 0.0) {
            return Err(CliError::Usage(format!("tol must be positive, got {tol}")));
        }
        let jobs = match src.get("jobs") {
            None => None,
            Some(j) => match j.parse::<usize>() {
                Ok(n) if n > 0 => Some(n),
                _ => {
                    return Err(CliError::Usage(format!(
                        "--jobs expects a positive integer, got `{j}`"
                    )))
                }
            },
        };

        Ok(Settings {
            rail: parse_with("rail", src.get("rail").unwrap_or("single"))?,
            channel: parse_channel(src.get("channel").unwrap_or(defaults.channel))?,
            rs,
            qrs,
            alpha2s,
            cutoff: parse_cutoff(src.get("nmax").unwrap_or("auto"))?,
            tol,
            jobs,
            out: src.get("out").map(PathBuf::from),
            format: parse_format(src.get("format").unwrap_or(defaults.format))?,
            measure: parse_with("measure", src.get("measure").unwrap_or("holevo"))?,
            receiver: parse_with("receiver", src.get("receiver").unwrap_or("R"))?,
            explicit: Explicit {
                r: src.get("r").is_some() || src.get("a").is_some(),
                nmax: src.get("nmax").is_some(),
            },
        })
    }
}

fn parse_with<T>(what: &str, s: &str) -> Result<T, CliError>
where
    T: std::str::FromStr<Err = unruhchan_core::Error>,
{
    s.parse::<T>()
        .map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn parse_f64(what: &str, s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Usage(format!("--{what} expects a number, got `{s}`")))
}

/// Accepts `1/sqrt2` for the symmetric weight, which cannot be typed exactly.
fn parse_list(what: &str, s: &str) -> Result<Vec<f64>, CliError> {
    let values = s
        .split(',')
        .map(|tok| match tok.trim() {
            "1/sqrt2" | "sym" => Ok(Q_R_MIN),
            t => parse_f64(what, t),
        })
        .collect::<Result<Vec<f64>, CliError>>()?;
    if values.is_empty() {
        return Err(CliError::Usage(format!("--{what} list is empty")));
    }
    Ok(values)
}

/// `start:stop:step` (stop included when it lies on the grid) or a single value.
pub fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![parse_f64("r", v)?]),
        [start, stop, step] => {
            let (start, stop, step) = (
                parse_f64("r", start)?,
                parse_f64("r", stop)?,
                parse_f64("r", step)?,
            );
            if !(step > 0.0) || stop < start {
                return Err(CliError::Usage(format!(
                    "--r range `{s}` needs step > 0 and stop >= start"
                )));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|k| start + k as f64 * step).collect())
        }
        _ => Err(CliError::Usage(format!(
            "--r expects start:stop:step or a value, got `{s}`"
        ))),
    }
}

fn parse_channel(s: &str) -> Result<Channel, CliError> {
    match s {
        "classical" => Ok(Channel::Classical),
        "quantum" => Ok(Channel::Quantum),
        "both" => Ok(Channel::Both),
        _ => Err(CliError::Usage(format!(
            "--channel expects classical, quantum or both, got `{s}`"
        ))),
    }
}

fn parse_format(s: &str) -> Result<Format, CliError> {
    match s {
        "csv" => Ok(Format::Csv),
        "svg" => Ok(Format::Svg),
        "both" => Ok(Format::Both),
        _ => Err(CliError::Usage(format!(
            "--format expects csv, svg or both, got `{s}`"
        ))),
    }
}

/// Ceiling for the automatic cutoff, from the environment when set.
pub fn cutoff_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(CAP_ENV) {
        Err(_) => Ok(None),
        Ok(v) => v.trim().parse::<usize>().map(Some).map_err(|_| {
            CliError::Usage(format!("{CAP_ENV} must be a positive integer, got `{v}`"))
        }),
    }
}

fn parse_cutoff(s: &str) -> Result<Cutoff, CliError> {
    if s == "auto" {
        return Ok(Cutoff::Auto {
            cap: cutoff_cap()?.unwrap_or(DEFAULT_CUTOFF_CAP),
        });
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(Cutoff::Fixed(n)),
        _ => Err(CliError::Usage(format!(
            "--nmax expects `auto` or an integer >= 2, got `{s}`"
        ))),
    }
}
