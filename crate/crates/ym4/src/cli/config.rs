//! Experiment configuration: flag values merged over an optional flat
//! key=value file, flags taking precedence.

use crate::fields::CutoffProfile;
use crate::{Error, Result};
use std::collections::HashMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Bc,
    Taubes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully resolved configuration of a gluing sweep.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub connection: String,
    pub construction: Construction,
    pub rho: Vec<f64>,
    pub tau: f64,
    /// None means "auto": derive c0 from the optimal-gain formula.
    pub c0: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub radial_n: usize,
    pub s3_level: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub profile: ProfileKind,
    pub chern: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    SmoothStep,
    Affine,
    Mollified(f64),
}

impl ProfileKind {
    pub fn parse(s: &str) -> Result<ProfileKind> {
        if s == "smoothstep" {
            Ok(ProfileKind::SmoothStep)
        } else if s == "affine" {
            Ok(ProfileKind::Affine)
        } else if let Some(w) = s.strip_prefix("mollified:") {
            let w: f64 = w
                .parse()
                .map_err(|_| Error::InvalidParam(format!("bad mollified width: {s}")))?;
            Ok(ProfileKind::Mollified(w))
        } else {
            Err(Error::InvalidParam(format!(
                "unknown profile '{s}' (want smoothstep | affine | mollified:W)"
            )))
        }
    }

    pub fn build(&self, tau: f64) -> Result<CutoffProfile> {
        match *self {
            ProfileKind::SmoothStep => CutoffProfile::smoothstep(tau),
            ProfileKind::Affine => CutoffProfile::affine(tau),
            ProfileKind::Mollified(w) => CutoffProfile::mollified_affine(tau, w),
        }
    }
}

/// Optional flag values as parsed from the command line; `None` fields fall
/// back to the config file and then to defaults.
#[derive(Debug, Clone, Default)]
pub struct GlueFlags {
    pub connection: Option<String>,
    pub construction: Option<String>,
    pub rho: Option<String>,
    pub tau: Option<f64>,
    pub c0: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub radial_n: Option<usize>,
    pub s3_level: Option<usize>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub profile: Option<String>,
    pub chern: bool,
}

/// Parse a flat key=value config file. Blank lines and '#' comments allowed.
pub fn parse_kv_file(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParam(format!("cannot read config {}: {e}", path.display())))?;
    parse_kv(&text)
}

pub fn parse_kv(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParam(format!("config line {} is not key=value: {line}", lineno + 1))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn pick<T, F>(flag: Option<T>, file: Option<&String>, parse: F, default: T) -> Result<T>
where
    F: Fn(&str) -> Result<T>,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    if let Some(s) = file {
        return parse(s);
    }
    Ok(default)
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::InvalidParam(format!("bad number: {s}")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::InvalidParam(format!("bad integer: {s}")))
}

pub fn parse_rho_list(s: &str) -> Result<Vec<f64>> {
    let rho: Vec<f64> = s
        .split(',')
        .map(|t| parse_f64(t.trim()))
        .collect::<Result<_>>()?;
    if rho.is_empty() {
        return Err(Error::InvalidParam("rho list must be nonempty".into()));
    }
    for &r in &rho {
        if !(r > 0.0) {
            return Err(Error::InvalidParam(format!("rho must be positive; got {r}")));
        }
    }
    Ok(rho)
}

/// Merge flags over the file contents and defaults into a full configuration.
pub fn resolve(flags: GlueFlags, file: Option<&Path>) -> Result<ExperimentConfig> {
    let kv = match file {
        Some(p) => parse_kv_file(p)?,
        None => HashMap::new(),
    };
    let connection = pick(
        flags.connection,
        kv.get("connection"),
        |s| Ok(s.to_string()),
        "asd:1".to_string(),
    )?;
    let construction_str = pick(
        flags.construction,
        kv.get("construction"),
        |s| Ok(s.to_string()),
        "bc".to_string(),
    )?;
    let construction = match construction_str.as_str() {
        "bc" => Construction::Bc,
        "taubes" => Construction::Taubes,
        other => {
            return Err(Error::InvalidParam(format!(
                "unknown construction '{other}' (want bc | taubes)"
            )))
        }
    };
    let rho_str = pick(flags.rho, kv.get("rho"), |s| Ok(s.to_string()), "0.2,0.1".to_string())?;
    let rho = parse_rho_list(&rho_str)?;
    let tau = pick(flags.tau, kv.get("tau"), parse_f64, 0.35)?;
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParam(format!("tau must lie in (0,1); got {tau}")));
    }
    let c0_str = pick(flags.c0, kv.get("c0"), |s| Ok(s.to_string()), "auto".to_string())?;
    let c0 = if c0_str == "auto" {
        None
    } else {
        let v = parse_f64(&c0_str)?;
        if !(v > 0.0) {
            return Err(Error::InvalidParam(format!("c0 must be positive; got {v}")));
        }
        Some(v)
    };
    let a = pick(flags.a, kv.get("a"), parse_f64, 1.1)?;
    let b = pick(flags.b, kv.get("b"), parse_f64, 0.9)?;
    let radial_n = pick(flags.radial_n, kv.get("radial_n"), parse_usize, 64)?;
    let s3_level = pick(flags.s3_level, kv.get("s3_level"), parse_usize, 12)?;
    if radial_n == 0 || s3_level == 0 {
        return Err(Error::InvalidParam("resolutions must be positive".into()));
    }
    let format_str =
        pick(flags.format, kv.get("format"), |s| Ok(s.to_string()), "csv".to_string())?;
    let format = match format_str.as_str() {
        "csv" => OutputFormat::Csv,
        "json" => OutputFormat::Json,
        other => return Err(Error::InvalidParam(format!("unknown format '{other}'"))),
    };
    let out = match flags.out {
        Some(p) => Some(p),
        None => kv.get("out").map(PathBuf::from),
    };
    let seed = pick(flags.seed, kv.get("seed"), |s| {
        s.parse().map_err(|_| Error::InvalidParam(format!("bad seed: {s}")))
    }, 20260810)?;
    let profile_str = pick(
        flags.profile,
        kv.get("profile"),
        |s| Ok(s.to_string()),
        "smoothstep".to_string(),
    )?;
    let profile = ProfileKind::parse(&profile_str)?;
    let chern = flags.chern
        || kv.get("chern").map(|s| s == "true" || s == "1").unwrap_or(false);
    Ok(ExperimentConfig {
        connection,
        construction,
        rho,
        tau,
        c0,
        a,
        b,
        radial_n,
        s3_level,
        format,
        out,
        seed,
        profile,
        chern,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_parsing_and_merge() {
        let kv = parse_kv("connection = sd:2\nrho= 0.3,0.2\n# comment\ntau =0.4\n").unwrap();
        assert_eq!(kv["connection"], "sd:2");
        assert!(parse_kv("nonsense without equals").is_err());

        let dir = std::env::temp_dir().join("ym4_cfg_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("exp.cfg");
        std::fs::write(&path, "connection=sd:2\nrho=0.3,0.2\ntau=0.4\ns3_level=5\n").unwrap();
        // Flags override file values; file overrides defaults.
        let flags = GlueFlags { tau: Some(0.35), ..Default::default() };
        let cfg = resolve(flags, Some(&path)).unwrap();
        assert_eq!(cfg.connection, "sd:2");
        assert_eq!(cfg.rho, vec![0.3, 0.2]);
        assert_eq!(cfg.tau, 0.35);
        assert_eq!(cfg.s3_level, 5);
        assert_eq!(cfg.radial_n, 64);
        assert!(cfg.c0.is_none());
    }

    #[test]
    fn invalid_values_are_rejected() {
        let flags = GlueFlags { rho: Some("0.1,-0.2".into()), ..Default::default() };
        assert!(resolve(flags, None).is_err());
        let flags = GlueFlags { tau: Some(1.5), ..Default::default() };
        assert!(resolve(flags, None).is_err());
        let flags = GlueFlags { construction: Some("spline".into()), ..Default::default() };
        assert!(resolve(flags, None).is_err());
        let flags = GlueFlags { c0: Some("-2".into()), ..Default::default() };
        assert!(resolve(flags, None).is_err());
        assert!(ProfileKind::parse("mollified:0.01").is_ok());
        assert!(ProfileKind::parse("bumpy").is_err());
    }
}
