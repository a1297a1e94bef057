//! Experiment configuration: flat `key = value` sections under `[section]`
//! headers. Unknown keys are hard errors so that typos never silently fall
//! back to defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::compare::{CompareSpec, GridSpec, Horizon, ModelKind};
use super::initial::{Bump, FieldSpec, InitialDataSpec};
use crate::dnop::DnBackend;
use crate::error::{Error, Result};
use crate::params::RegimePreset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Simulate,
    Compare,
    Sweep,
    DnStudy,
    TaylorCheck,
}

impl ExperimentKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "simulate" => Ok(Self::Simulate),
            "compare" => Ok(Self::Compare),
            "sweep" => Ok(Self::Sweep),
            "dn_study" | "dn-study" => Ok(Self::DnStudy),
            "taylor_check" | "taylor-check" => Ok(Self::TaylorCheck),
            other => Err(Error::Config(format!("unknown experiment kind '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Simulate => "simulate",
            Self::Compare => "compare",
            Self::Sweep => "sweep",
            Self::DnStudy => "dn_study",
            Self::TaylorCheck => "taylor_check",
        }
    }
}

/// ν selection for simulate runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NuChoice {
    /// the uniform (1+√μ)^{-1}
    Auto,
    /// shallow-water normalization ν = 1
    Unit,
    /// deep-water normalization ν = μ^{-1/2}
    Deep,
    Value(f64),
}

impl NuChoice {
    pub fn resolve(&self, p: &crate::params::RegimeParams) -> Option<f64> {
        match self {
            NuChoice::Auto => None,
            NuChoice::Unit => Some(1.0),
            NuChoice::Deep => Some(1.0 / p.mu.sqrt()),
            NuChoice::Value(v) => Some(*v),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub compare: CompareSpec,
    pub dn_target: DnBackend,
    pub nu: NuChoice,
    pub m_bound: f64,
    pub snapshot_stride: usize,
    pub write_snapshots: bool,
    pub out_dir: PathBuf,
}

struct RawConfig {
    entries: BTreeMap<(String, String), String>,
    consumed: std::cell::RefCell<std::collections::BTreeSet<(String, String)>>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value', got '{raw}'", lineno + 1))
            })?;
            if section.is_empty() {
                return Err(Error::Config(format!(
                    "line {}: key outside any [section]",
                    lineno + 1
                )));
            }
            let prev = entries.insert(
                (section.clone(), key.trim().to_string()),
                value.trim().to_string(),
            );
            if prev.is_some() {
                return Err(Error::Config(format!(
                    "duplicate key '{}' in section [{}]",
                    key.trim(),
                    section
                )));
            }
        }
        Ok(Self {
            entries,
            consumed: Default::default(),
        })
    }

    fn get(&self, section: &str, key: &str) -> Option<&str> {
        let id = (section.to_string(), key.to_string());
        let v = self.entries.get(&id).map(|s| s.as_str());
        if v.is_some() {
            self.consumed.borrow_mut().insert(id);
        }
        v
    }

    fn require(&self, section: &str, key: &str) -> Result<&str> {
        self.get(section, key)
            .ok_or_else(|| Error::Config(format!("missing required key '{key}' in [{section}]")))
    }

    fn f64(&self, section: &str, key: &str, default: f64) -> Result<f64> {
        match self.get(section, key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("[{section}] {key}: bad float '{v}'"))),
        }
    }

    fn usize(&self, section: &str, key: &str, default: usize) -> Result<usize> {
        match self.get(section, key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("[{section}] {key}: bad integer '{v}'"))),
        }
    }

    fn bool(&self, section: &str, key: &str, default: bool) -> Result<bool> {
        match self.get(section, key) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(Error::Config(format!("[{section}] {key}: bad bool '{v}'"))),
        }
    }

    fn finish(&self) -> Result<()> {
        let consumed = self.consumed.borrow();
        let unknown: Vec<String> = self
            .entries
            .keys()
            .filter(|k| !consumed.contains(*k))
            .map(|(s, k)| format!("[{s}] {k}"))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!("unknown keys: {}", unknown.join(", "))))
        }
    }
}

fn parse_kv_payload(payload: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for part in payload.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("bad bump parameter '{part}'")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad bump value '{part}'")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn take(map: &mut BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    map.remove(key).unwrap_or(default)
}

/// `gaussian:amp=..,x0=..,y0=..,wx=..,wy=..`, `mode:amp=..,kx=..,ky=..,phase=..`
/// and `noise:amp=..,kmax=..`, joined by `;`. `none` or empty means zero.
pub fn parse_field_spec(text: &str) -> Result<FieldSpec> {
    let mut spec = FieldSpec::default();
    let text = text.trim();
    if text.is_empty() || text == "none" {
        return Ok(spec);
    }
    for item in text.split(';') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (kind, payload) = item.split_once(':').unwrap_or((item, ""));
        let mut kv = parse_kv_payload(payload)?;
        match kind.trim() {
            "gaussian" => {
                let bump = Bump::Gaussian {
                    amp: take(&mut kv, "amp", 0.1),
                    x0: take(&mut kv, "x0", 0.5),
                    y0: take(&mut kv, "y0", 0.5),
                    wx: take(&mut kv, "wx", 0.1),
                    wy: take(&mut kv, "wy", 0.1),
                };
                spec.bumps.push(bump);
            }
            "mode" => {
                let bump = Bump::Mode {
                    amp: take(&mut kv, "amp", 0.1),
                    kx: take(&mut kv, "kx", 1.0),
                    ky: take(&mut kv, "ky", 0.0),
                    phase: take(&mut kv, "phase", 0.0),
                };
                spec.bumps.push(bump);
            }
            "noise" => {
                spec.noise = Some((take(&mut kv, "amp", 1e-3), take(&mut kv, "kmax", 3.0) as usize));
            }
            other => return Err(Error::Config(format!("unknown field component '{other}'"))),
        }
        if !kv.is_empty() {
            return Err(Error::Config(format!(
                "unknown bump parameters: {:?}",
                kv.keys().collect::<Vec<_>>()
            )));
        }
    }
    Ok(spec)
}

fn parse_values(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad sweep value '{v}'")))
        })
        .collect()
}

/// Load and validate a config file. The experiment kind may be forced by a
/// CLI subcommand; a conflicting `[experiment] kind` is an error.
pub fn load_config(path: &Path, forced_kind: Option<ExperimentKind>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    let raw = RawConfig::parse(&text)?;

    let kind = match (raw.get("experiment", "kind"), forced_kind) {
        (Some(k), Some(forced)) => {
            let k = ExperimentKind::parse(k)?;
            if k != forced {
                return Err(Error::Config(format!(
                    "config kind '{}' conflicts with subcommand '{}'",
                    k.name(),
                    forced.name()
                )));
            }
            k
        }
        (Some(k), None) => ExperimentKind::parse(k)?,
        (None, Some(forced)) => forced,
        (None, None) => return Err(Error::Config("no experiment kind given".into())),
    };

    let fd_mu = match raw.get("regime", "mu") {
        Some(v) => Some(
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("[regime] mu: bad float '{v}'")))?,
        ),
        None => None,
    };
    let preset = RegimePreset::parse(raw.require("regime", "preset")?, fd_mu)?;
    let values = parse_values(raw.require("regime", "values")?)?;
    let m_bound = raw.f64("regime", "m_bound", 1.0)?;
    let nu = match raw.get("regime", "nu") {
        None | Some("auto") => NuChoice::Auto,
        Some("unit") => NuChoice::Unit,
        Some("deep") => NuChoice::Deep,
        Some(v) => NuChoice::Value(
            v.parse()
                .map_err(|_| Error::Config(format!("[regime] nu: bad value '{v}'")))?,
        ),
    };

    let grid = GridSpec {
        nx: raw.usize("grid", "nx", 64)?,
        ny: raw.usize("grid", "ny", 16)?,
        lx: raw.f64("grid", "lx", 8.0 * std::f64::consts::PI)?,
        ly: raw.f64("grid", "ly", 2.0 * std::f64::consts::PI)?,
    };

    let data = InitialDataSpec {
        zeta: parse_field_spec(raw.get("initial_data", "zeta").unwrap_or(""))?,
        psi: parse_field_spec(raw.get("initial_data", "psi").unwrap_or(""))?,
        bottom: parse_field_spec(raw.get("initial_data", "bottom").unwrap_or("none"))?,
    };
    let h0 = raw.f64("initial_data", "h0", 0.1)?;

    let model = match raw.get("experiment", "model") {
        Some(m) => ModelKind::parse(m)?,
        None => match preset {
            RegimePreset::ShallowWater => ModelKind::ShallowWater,
            RegimePreset::GreenNaghdi => ModelKind::GreenNaghdi,
            RegimePreset::Serre => ModelKind::Serre,
            RegimePreset::BoussinesqLongWave => ModelKind::Boussinesq,
            RegimePreset::KpWeaklyTransverse => ModelKind::Kp,
            RegimePreset::FullDispersion { .. } => ModelKind::FullDispersion,
        },
    };
    let seed = raw.usize("experiment", "seed", 0)? as u64;

    let dt = match raw.get("integrator", "dt") {
        None | Some("auto") => None,
        Some(v) => Some(
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("[integrator] dt: bad value '{v}'")))?,
        ),
    };
    let t_end = raw.f64("integrator", "t_end", 1.0)?;
    let horizon = match raw.get("integrator", "horizon") {
        None | Some("fixed") => Horizon::Fixed,
        Some("regime") => Horizon::Regime,
        Some(v) => return Err(Error::Config(format!("[integrator] horizon: bad value '{v}'"))),
    };
    let dealias = raw.bool("integrator", "dealias", true)?;
    let snapshot_stride = raw.usize("integrator", "snapshot_stride", usize::MAX)?;
    let nz = raw.usize("integrator", "nz", 32)?;
    let cg_tol = raw.f64("integrator", "cg_tol", 1e-10)?;
    let cg_maxiter = raw.usize("integrator", "cg_maxiter", 500)?;
    let sa_order = raw.usize("integrator", "sa_order", 1)?;
    let dn_backend_name = raw.get("integrator", "dn_backend").unwrap_or("elliptic").to_string();

    let boussinesq = (
        raw.f64("boussinesq", "theta", 1.0)?,
        raw.f64("boussinesq", "p1", 1.0)?,
        raw.f64("boussinesq", "p2", 0.0)?,
    );

    let out_dir = PathBuf::from(raw.get("output", "dir").unwrap_or("out"));
    let write_snapshots = raw.bool("output", "write_snapshots", false)?;
    let error_s = raw.f64("output", "error_sobolev_s", 2.0)?;
    let self_check = raw.bool("output", "self_check", true)?;

    let dn_target = match raw.get("dn_study", "target") {
        Some("shallow1") => DnBackend::Shallow1,
        Some("shallow2") => DnBackend::Shallow2,
        Some("small_amplitude") => DnBackend::SmallAmplitude {
            order: raw.usize("dn_study", "order", 1)?,
        },
        Some(v) => return Err(Error::Config(format!("[dn_study] target: bad value '{v}'"))),
        None => match dn_backend_name.as_str() {
            "shallow1" => DnBackend::Shallow1,
            "shallow2" => DnBackend::Shallow2,
            "small_amplitude" => DnBackend::SmallAmplitude { order: sa_order },
            _ => DnBackend::Shallow1,
        },
    };
    // dn_backend also selects the water-waves backend for simulate runs
    let _ = match dn_backend_name.as_str() {
        "elliptic" | "shallow1" | "shallow2" | "small_amplitude" => (),
        other => {
            return Err(Error::Config(format!(
                "[integrator] dn_backend: unknown backend '{other}'"
            )))
        }
    };

    raw.finish()?;

    let mut compare = CompareSpec::new(preset, values, model, grid);
    compare.data = data;
    compare.h0 = h0;
    compare.t_end = t_end;
    compare.horizon = horizon;
    compare.dt = dt;
    compare.boussinesq = boussinesq;
    compare.nz_ref = nz;
    compare.cg_tol = cg_tol;
    compare.cg_maxiter = cg_maxiter;
    compare.error_s = error_s;
    compare.self_check = self_check;
    compare.seed = seed;
    compare.dealias = dealias;

    Ok(ExperimentConfig {
        kind,
        compare,
        dn_target,
        nu,
        m_bound,
        snapshot_stride,
        write_snapshots,
        out_dir,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("wavecascade-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(format!("{:x}.cfg", content.len() as u64 + content.as_bytes()[0] as u64));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    const GOOD: &str = "
[experiment]
kind = compare
model = green_naghdi
seed = 7

[regime]
preset = green_naghdi
values = 0.1, 0.05, 0.025

[grid]
nx = 32
ny = 8
lx = 25.132741228718345
ly = 6.283185307179586

[initial_data]
zeta = gaussian:amp=0.2,x0=0.4,y0=0.5,wx=0.08,wy=0.2
psi = mode:amp=0.1,kx=1
h0 = 0.1

[integrator]
t_end = 0.5
dt = 0.02

[output]
dir = out-test
";

    #[test]
    fn parses_complete_config() {
        let path = write_tmp(GOOD);
        let cfg = load_config(&path, None).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::Compare);
        assert_eq!(cfg.compare.model, ModelKind::GreenNaghdi);
        assert_eq!(cfg.compare.values, vec![0.1, 0.05, 0.025]);
        assert_eq!(cfg.compare.seed, 7);
        assert_eq!(cfg.compare.dt, Some(0.02));
        assert_eq!(cfg.compare.grid.nx, 32);
        assert_eq!(cfg.compare.data.zeta.bumps.len(), 1);
        assert_eq!(cfg.out_dir, PathBuf::from("out-test"));
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = format!("{GOOD}\n[integrator]\n");
        // splitting the section is fine, but a typo'd key is fatal
        let bad = bad.replace("t_end = 0.5", "t_end = 0.5\nt_endd = 0.5");
        let path = write_tmp(&bad);
        let err = load_config(&path, None).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("t_endd"), "{err}");
    }

    #[test]
    fn kind_conflict_is_an_error() {
        let path = write_tmp(GOOD);
        assert!(load_config(&path, Some(ExperimentKind::Sweep)).is_err());
        assert!(load_config(&path, Some(ExperimentKind::Compare)).is_ok());
    }

    #[test]
    fn field_spec_grammar() {
        let spec = parse_field_spec("gaussian:amp=0.5 ; mode:amp=1e-6,kx=2,ky=1,phase=0.5 ; noise:amp=1e-4,kmax=2").unwrap();
        assert_eq!(spec.bumps.len(), 2);
        assert_eq!(spec.noise, Some((1e-4, 2)));
        assert!(parse_field_spec("none").unwrap().bumps.is_empty());
        assert!(parse_field_spec("blob:amp=1").is_err());
        assert!(parse_field_spec("gaussian:amp=1,zz=2").is_err());
    }
}
