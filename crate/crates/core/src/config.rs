//! Flat `key = value` experiment configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Keys:
//!
//! | key | meaning |
//! |-----|---------|
//! | `mode` | `walk`, `cat`, `decohere`, `oracle-check` or `alpha-table` |
//! | `l1`, `l2` | kick strength and rotation fraction |
//! | `phi` | radians, or a multiple of π written `4.5pi` |
//! | `n` | pulse-pair count, or a comma-separated list |
//! | `xi` | per-pulse dephasing exponent, or a list (default 0) |
//! | `alpha0_re`, `alpha0_im` | initial amplitude (default 0) |
//! | `derive` | `true` to compute `l1, l2, phi, xi` from the physical rates |
//! | `omega`, `g`, `omega1`, `omega2`, `gamma` | physical rates in rad/s, used with `derive` |
//! | `grid` | `xmin,xmax,pmin,pmax,nx,np` |
//! | `outputs` | subset of `alpha-table,pdist,wigner,diagnostics` |
//! | `output_dir` | directory for emitted files |
//! | `format` | `csv` or `json` |
//! | `outcome` | cat herald, `excited` (default) or `ground` |
//! | `n_max` | alpha-table range |
//! | `oracle_eta`, `oracle_cutoff`, `oracle_form`, `oracle_orientation` | Fock oracle settings |
//! | `seed` | accepted and ignored; every pipeline is deterministic |

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{HamiltonianForm, OracleConfig, Orientation, DEFAULT_CUTOFF};
use crate::observables::PhaseSpaceGrid;
use crate::protocol::{derive_protocol, PhysicalParams, ProtocolParams, QubitOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Walk,
    Cat,
    Decohere,
    OracleCheck,
    AlphaTable,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Walk => "walk",
            Mode::Cat => "cat",
            Mode::Decohere => "decohere",
            Mode::OracleCheck => "oracle-check",
            Mode::AlphaTable => "alpha-table",
        }
    }

    fn default_outputs(self) -> Vec<Artifact> {
        match self {
            Mode::Walk | Mode::Cat => vec![Artifact::Pdist, Artifact::Diagnostics],
            Mode::Decohere => vec![Artifact::Wigner, Artifact::Diagnostics],
            Mode::OracleCheck => vec![Artifact::Diagnostics],
            Mode::AlphaTable => vec![Artifact::AlphaTable],
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "walk" => Ok(Mode::Walk),
            "cat" => Ok(Mode::Cat),
            "decohere" => Ok(Mode::Decohere),
            "oracle-check" => Ok(Mode::OracleCheck),
            "alpha-table" => Ok(Mode::AlphaTable),
            _ => Err(Error::Config(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Artifact {
    AlphaTable,
    Pdist,
    Wigner,
    Diagnostics,
}

impl Artifact {
    pub fn name(self) -> &'static str {
        match self {
            Artifact::AlphaTable => "alpha-table",
            Artifact::Pdist => "pdist",
            Artifact::Wigner => "wigner",
            Artifact::Diagnostics => "diagnostics",
        }
    }
}

impl FromStr for Artifact {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha-table" => Ok(Artifact::AlphaTable),
            "pdist" => Ok(Artifact::Pdist),
            "wigner" => Ok(Artifact::Wigner),
            "diagnostics" => Ok(Artifact::Diagnostics),
            _ => Err(Error::Config(format!("unknown output {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

/// Parse an angle in radians; a trailing `pi` multiplies by π (`4.5pi`, `-pi`).
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::Config(format!("bad angle {s:?}"));
    match t.strip_suffix("pi").or_else(|| t.strip_suffix("π")) {
        Some(head) => {
            let head = head.trim().trim_end_matches('*').trim();
            let k = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                h => h.parse::<f64>().map_err(|_| bad())?,
            };
            Ok(k * PI)
        }
        None => t.parse::<f64>().map_err(|_| bad()),
    }
}

fn parse_float(key: &str, v: &str) -> Result<f64> {
    v.trim().parse::<f64>().map_err(|_| Error::Config(format!("{key}: expected a number, got {v:?}")))
}

fn parse_list<T>(key: &str, v: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let out: Vec<T> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(f).collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::Config(format!("{key}: empty list")));
    }
    Ok(out)
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got {v:?}"))),
    }
}

const KEYS: &[&str] = &[
    "mode", "l1", "l2", "phi", "n", "xi", "alpha0_re", "alpha0_im", "derive", "omega", "g", "omega1", "omega2",
    "gamma", "grid", "outputs", "output_dir", "format", "outcome", "n_max", "oracle_eta", "oracle_cutoff",
    "oracle_form", "oracle_orientation", "seed",
];

/// Raw key-value pairs in file order, duplicates rejected.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            raw.insert(k.trim(), v.trim()).map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn insert(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key {key:?}")));
        }
        if self.entries.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Error::Config(format!("duplicate key {key:?}")));
        }
        Ok(())
    }

    /// Set `key`, replacing any earlier value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        self.entries.remove(key);
        self.insert(key, value)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    /// `n` and `xi` of the first case; sweeps come from `ns` and `xis`.
    pub protocol: ProtocolParams,
    pub physical: Option<PhysicalParams>,
    pub ns: Vec<usize>,
    pub xis: Vec<f64>,
    pub grid: PhaseSpaceGrid,
    pub outputs: Vec<Artifact>,
    pub output_dir: PathBuf,
    pub format: Format,
    pub outcome: QubitOutcome,
    pub n_max: usize,
    pub oracle: OracleConfig,
    /// Normalized key-value echo of the input.
    pub echo: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let get = |k: &str| raw.get(k);
        let mode: Mode = get("mode").ok_or_else(|| Error::Config("missing key \"mode\"".into()))?.parse()?;
        let float = |k: &str| get(k).map(|v| parse_float(k, v)).transpose();

        let derive = get("derive").map(|v| parse_bool("derive", v)).transpose()?.unwrap_or(false);
        let physical_keys = ["omega", "g", "omega1", "omega2", "gamma"];
        let knob_keys = ["l1", "l2", "phi"];

        let ns: Vec<usize> = match get("n") {
            Some(v) => parse_list("n", v, |s| {
                s.parse::<usize>().map_err(|_| Error::Config(format!("n: expected a non-negative integer, got {s:?}")))
            })?,
            None if mode == Mode::AlphaTable => vec![0],
            None => return Err(Error::Config(format!("mode {mode} needs key \"n\""))),
        };
        let alpha0 = C64::new(float("alpha0_re")?.unwrap_or(0.0), float("alpha0_im")?.unwrap_or(0.0));

        let (protocol, physical, xis) = if derive {
            if let Some(k) = knob_keys.iter().chain(["xi"].iter()).find(|k| get(k).is_some()) {
                return Err(Error::Config(format!("key {k:?} contradicts derive = true")));
            }
            let need = |k: &str| float(k)?.ok_or_else(|| Error::Config(format!("derive = true needs key {k:?}")));
            let p = PhysicalParams {
                omega: need("omega")?,
                g: need("g")?,
                omega1: need("omega1")?,
                omega2: need("omega2")?,
                gamma: float("gamma")?.unwrap_or(0.0),
            };
            let pp = derive_protocol(&p, ns[0], alpha0)?;
            (pp, Some(p), vec![pp.xi])
        } else {
            if let Some(k) = physical_keys.iter().find(|k| get(k).is_some()) {
                return Err(Error::Config(format!("key {k:?} needs derive = true")));
            }
            let need = |k: &str| float(k)?.ok_or_else(|| Error::Config(format!("mode {mode} needs key {k:?}")));
            let l1 = need("l1")?;
            let l2 = need("l2")?;
            let phi = match get("phi") {
                Some(v) => parse_angle(v)?,
                None if mode == Mode::AlphaTable => 0.0,
                None => return Err(Error::Config(format!("mode {mode} needs key \"phi\""))),
            };
            let xis = match get("xi") {
                Some(v) => parse_list("xi", v, |s| {
                    if s == "inf" {
                        Ok(f64::INFINITY)
                    } else {
                        parse_float("xi", s)
                    }
                })?,
                None => vec![0.0],
            };
            let pp = ProtocolParams::new(l1, l2, phi, ns[0], xis[0], alpha0)?;
            for &xi in &xis {
                ProtocolParams::new(l1, l2, phi, ns[0], xi, alpha0)?;
            }
            (pp, None, xis)
        };
        if mode == Mode::Cat && ns.contains(&0) {
            return Err(Error::Config("cat mode needs n >= 1".into()));
        }

        let grid = match get("grid") {
            Some(v) => v.parse()?,
            None => PhaseSpaceGrid::default(),
        };
        let mut outputs = match get("outputs") {
            Some(v) => parse_list("outputs", v, str::parse)?,
            None => mode.default_outputs(),
        };
        outputs.sort();
        outputs.dedup();
        let output_dir = PathBuf::from(get("output_dir").unwrap_or("."));
        let format = get("format").map(str::parse).transpose()?.unwrap_or_default();
        let outcome = match get("outcome") {
            None | Some("excited") => QubitOutcome::Excited,
            Some("ground") => QubitOutcome::Ground,
            Some(v) => return Err(Error::Config(format!("outcome: expected ground or excited, got {v:?}"))),
        };
        let n_max = match get("n_max") {
            Some(v) => v.parse().map_err(|_| Error::Config(format!("n_max: bad count {v:?}")))?,
            None => *ns.iter().max().expect("non-empty"),
        };
        let oracle = OracleConfig {
            eta: float("oracle_eta")?.unwrap_or(1e-2),
            cutoff: match get("oracle_cutoff") {
                Some(v) => v.parse().map_err(|_| Error::Config(format!("oracle_cutoff: bad count {v:?}")))?,
                None => DEFAULT_CUTOFF,
            },
            form: match get("oracle_form") {
                None | Some("effective") => HamiltonianForm::Effective,
                Some("dressed") => HamiltonianForm::Dressed,
                Some("full") => HamiltonianForm::Full,
                Some(v) => return Err(Error::Config(format!("oracle_form: unknown form {v:?}"))),
            },
            orientation: match get("oracle_orientation") {
                None | Some("reflected") => Orientation::Reflected,
                Some("literal") => Orientation::Literal,
                Some(v) => return Err(Error::Config(format!("oracle_orientation: unknown value {v:?}"))),
            },
        };
        if let Some(seed) = get("seed") {
            seed.parse::<u64>().map_err(|_| Error::Config(format!("seed: bad integer {seed:?}")))?;
        }
        Ok(Self {
            mode,
            protocol,
            physical,
            ns,
            xis,
            grid,
            outputs,
            output_dir,
            format,
            outcome,
            n_max,
            oracle,
            echo: raw.entries().clone(),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    /// Every `(n, ξ)` case, in sweep order.
    pub fn cases(&self) -> Vec<ProtocolParams> {
        self.ns
            .iter()
            .flat_map(|&n| self.xis.iter().map(move |&xi| (n, xi)))
            .map(|(n, xi)| self.protocol.with_n(n).with_xi(xi))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn angles() {
        assert_abs_diff_eq!(parse_angle("4.5pi").unwrap(), 4.5 * PI);
        assert_abs_diff_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_abs_diff_eq!(parse_angle("0.25 * pi").unwrap(), 0.25 * PI);
        assert_abs_diff_eq!(parse_angle("1.5e-1").unwrap(), 0.15);
        assert!(parse_angle("x pi").is_err());
    }

    #[test]
    fn walk_config() {
        let c = ExperimentConfig::parse(
            "# density sweep\nmode = walk\nl1 = 0.1\nl2 = 1e-2\nphi = 4.5pi\nn = 1, 5, 10, 20\noutputs = pdist\n",
        )
        .unwrap();
        assert_eq!(c.ns, vec![1, 5, 10, 20]);
        assert_abs_diff_eq!(c.protocol.phi, 0.5 * PI, epsilon = 1e-12);
        assert_eq!(c.cases().len(), 4);
        assert_eq!(c.outputs, vec![Artifact::Pdist]);
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn config_errors() {
        let bad = [
            "l1 = 0.1",
            "mode = walk\nl1 = 0.1\nl2 = 0.01\nphi = 0",
            "mode = walk\nl1 = 0.1\nl1 = 0.2\nl2 = 0.01\nphi = 0\nn = 1",
            "mode = walk\nl1 = 0.1\nl2 = 0.01\nphi = 0\nn = 1\nbogus = 3",
            "mode = walk\nderive = true\nl1 = 0.1\nomega = 1\ng = 0.001\nomega1 = 10\nomega2 = 1\nn = 1",
            "mode = walk\nl1 = 0.1\nl2 = 0.01\nphi = 0\nn = 1\nomega = 3",
            "mode = cat\nl1 = 0.1\nl2 = 0.01\nphi = 0\nn = 0",
            "mode = walk\nl1 = -0.1\nl2 = 0.01\nphi = 0\nn = 1",
            "mode = walk\nl1 = 0.1\nl2 = 0.01\nphi = 0\nn = 1\nformat = xml",
            "mode = walk\nl1 = 0.1\nl2 = 0.01\nphi = 0\nn = 1\ngrid = 1,2,3",
            "mode = walk\nl1 = 0.1\nl2 = 0.01\nphi = 0\nn = 1\nno equals sign",
        ];
        for text in bad {
            let e = ExperimentConfig::parse(text).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{text:?} gave {e}");
        }
    }

    #[test]
    fn derived_config() {
        let c = ExperimentConfig::parse(
            "mode = decohere\nderive = true\nomega = 1\ng = 0.01\nomega1 = 100\nomega2 = 10\ngamma = 0.1\nn = 5\n",
        )
        .unwrap();
        assert_abs_diff_eq!(c.protocol.l1, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(c.protocol.l2, 0.01, epsilon = 1e-12);
        assert_abs_diff_eq!(c.xis[0], 0.375 * 0.1 * 2.0 * PI, epsilon = 1e-12);
        let regime = ExperimentConfig::parse("mode = walk\nderive = true\nomega = 1\ng = 0.1\nomega1 = 100\nomega2 = 1\nn = 1\n");
        assert!(matches!(regime, Err(Error::RegimeViolation(_))));
    }
}
