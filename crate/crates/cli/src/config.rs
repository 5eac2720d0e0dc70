//! Flat key-value run configuration with dotted keys, merged from an
//! optional config file, repeatable `--set key=value` overrides, and the
//! per-command flags (flags win).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use eqarea_core::{Convexity, Flux, PiecewiseProfile, Segment, SolveParams};

use crate::expr::Expr;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type CfgResult<T> = Result<T, ConfigError>;

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    origin: String,
}

/// Merged raw key-value view, remembering where each key came from so that
/// errors stay anchored to a file line or flag.
#[derive(Debug, Default, Clone)]
pub struct ConfigMap {
    entries: BTreeMap<String, Entry>,
}

pub const KNOWN_KEYS: &[&str] = &[
    "flux.name",
    "flux.range",
    "flux.expr",
    "flux.deriv_expr",
    "flux.second_deriv_expr",
    "flux.convexity",
    "profile.name",
    "profile.segments",
    "profile.n_points",
    "profile.jump_subpoints",
    "solver.root_tol",
    "solver.area_tol",
    "t",
    "out_dir",
    "godunov.cells",
    "godunov.cfl",
    "sweep.t_start",
    "sweep.t_end",
    "sweep.n_times",
    "sweep.jobs",
    "validate.dt",
    "validate.rh_tol",
    "validate.conservation_tol",
    "validate.l1_grid",
    "validate.l1_cells",
    "convergence.n_list",
];

impl ConfigMap {
    pub fn from_file(path: &Path) -> CfgResult<ConfigMap> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        let mut map = ConfigMap::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!(
                    "{}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError(format!(
                    "{}:{}: unknown key '{key}'",
                    path.display(),
                    lineno + 1
                )));
            }
            map.entries.insert(
                key.to_string(),
                Entry {
                    value: value.trim().to_string(),
                    origin: format!("{}:{}", path.display(), lineno + 1),
                },
            );
        }
        Ok(map)
    }

    /// Applies one `key=value` override (from `--set`).
    pub fn apply_set(&mut self, kv: &str) -> CfgResult<()> {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("--set expects key=value, got '{kv}'")))?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(ConfigError(format!("--set: unknown key '{key}'")));
        }
        self.entries.insert(
            key.to_string(),
            Entry {
                value: value.trim().to_string(),
                origin: format!("--set {key}"),
            },
        );
        Ok(())
    }

    pub fn set_from_flag(&mut self, key: &str, value: String) {
        self.entries.insert(
            key.to_string(),
            Entry {
                value,
                origin: format!("--{key}"),
            },
        );
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> CfgResult<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse::<T>().map(Some).map_err(|_| {
                ConfigError(format!(
                    "{}: cannot parse '{}' for key '{key}'",
                    e.origin, e.value
                ))
            }),
        }
    }

    fn parse_or<T: std::str::FromStr>(&self, key: &str, default: T) -> CfgResult<T> {
        Ok(self.parse(key)?.unwrap_or(default))
    }
}

/// Fully parsed and validated run configuration.
pub struct RunConfig {
    pub flux: Flux,
    pub profile: PiecewiseProfile,
    pub params: SolveParams,
    pub t: f64,
    pub out_dir: PathBuf,
    pub godunov_cells: usize,
    pub godunov_cfl: f64,
    pub sweep_t_start: f64,
    pub sweep_t_end: f64,
    pub sweep_n_times: usize,
    pub sweep_jobs: usize,
    pub validate_dt: Option<f64>,
    pub validate_rh_tol: f64,
    pub validate_conservation_tol: Option<f64>,
    pub validate_l1_grid: usize,
    pub validate_l1_cells: usize,
    pub convergence_ns: Vec<usize>,
    /// Echo of the resolved scalar settings for the run report.
    pub summary: Vec<(String, String)>,
}

fn build_flux(map: &ConfigMap) -> CfgResult<Flux> {
    let range = match map.get("flux.range") {
        None => (-2.0, 2.0),
        Some(e) => parse_pair(&e.value)
            .ok_or_else(|| ConfigError(format!("{}: flux.range wants [lo, hi]", e.origin)))?,
    };
    if let Some(name) = map.get("flux.name") {
        if map.get("flux.expr").is_some() {
            return Err(ConfigError(
                "flux.name and flux.expr are mutually exclusive".into(),
            ));
        }
        return Flux::builtin(&name.value)
            .map_err(|e| ConfigError(format!("{}: {e}", name.origin)));
    }
    let expr_of = |key: &str| -> CfgResult<Expr> {
        let e = map
            .get(key)
            .ok_or_else(|| ConfigError(format!("custom flux needs {key}")))?;
        Expr::parse(&e.value, "u").map_err(|pe| ConfigError(format!("{}: {pe}", e.origin)))
    };
    let value = expr_of("flux.expr")?;
    let deriv = expr_of("flux.deriv_expr")?;
    let second = expr_of("flux.second_deriv_expr")?;
    let conv = map
        .get("flux.convexity")
        .ok_or_else(|| ConfigError("custom flux needs flux.convexity".into()))?;
    let convexity = match conv.value.as_str() {
        "strictly_convex" => Convexity::StrictlyConvex,
        "strictly_concave" => Convexity::StrictlyConcave,
        other => {
            return Err(ConfigError(format!(
                "{}: flux.convexity must be strictly_convex or strictly_concave, got '{other}'",
                conv.origin
            )))
        }
    };
    Flux::new(
        value.into_fn(),
        deriv.into_fn(),
        second.into_fn(),
        convexity,
        range,
    )
    .map_err(|e| ConfigError(format!("flux rejected: {e}")))
}

fn build_profile(map: &ConfigMap) -> CfgResult<PiecewiseProfile> {
    if let Some(name) = map.get("profile.name") {
        if map.get("profile.segments").is_some() {
            return Err(ConfigError(
                "profile.name and profile.segments are mutually exclusive".into(),
            ));
        }
        return PiecewiseProfile::builtin(&name.value)
            .map_err(|e| ConfigError(format!("{}: {e}", name.origin)));
    }
    let spec = map
        .get("profile.segments")
        .ok_or_else(|| ConfigError("need profile.name or profile.segments".into()))?;
    let mut segments = Vec::new();
    for part in spec.value.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let parsed = (|| {
            let (span, expr_src) = part.split_once(':')?;
            let (a, b) = span.trim().split_once("..")?;
            let a: f64 = a.trim().parse().ok()?;
            let b: f64 = b.trim().parse().ok()?;
            let expr = Expr::parse(expr_src.trim(), "x").ok()?;
            Some(Segment::new(a, b, expr.into_fn()))
        })();
        segments.push(parsed.ok_or_else(|| {
            ConfigError(format!(
                "{}: segment '{part}' wants 'a..b: expr'",
                spec.origin
            ))
        })?);
    }
    PiecewiseProfile::new(segments).map_err(|e| ConfigError(format!("profile rejected: {e}")))
}

fn parse_pair(s: &str) -> Option<(f64, f64)> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn parse_n_list(s: &str) -> Option<Vec<usize>> {
    let ns: Option<Vec<usize>> = s.split(',').map(|p| p.trim().parse().ok()).collect();
    let ns = ns?;
    if ns.is_empty() {
        None
    } else {
        Some(ns)
    }
}

impl RunConfig {
    pub fn from_map(map: &ConfigMap) -> CfgResult<RunConfig> {
        let flux = build_flux(map)?;
        let profile = build_profile(map)?;

        let n_points: usize = map.parse_or("profile.n_points", 1000)?;
        let jump_subpoints: usize = map.parse_or("profile.jump_subpoints", 64)?;
        let root_tol: f64 = map.parse_or("solver.root_tol", 1e-14)?;
        let area_tol: Option<f64> = map.parse("solver.area_tol")?;
        if n_points < 16 {
            return Err(ConfigError(format!(
                "profile.n_points = {n_points} must be at least 16"
            )));
        }
        if jump_subpoints < 2 {
            return Err(ConfigError(format!(
                "profile.jump_subpoints = {jump_subpoints} must be at least 2"
            )));
        }
        if !(root_tol > 0.0) {
            return Err(ConfigError(format!(
                "solver.root_tol = {root_tol} must be positive"
            )));
        }
        if let Some(a) = area_tol {
            if !(a > 0.0) {
                return Err(ConfigError(format!(
                    "solver.area_tol = {a} must be positive"
                )));
            }
        }

        let t: f64 = map.parse_or("t", 1.0)?;
        if t < 0.0 {
            return Err(ConfigError(format!("t = {t} must be >= 0")));
        }

        let out_dir = match map.get("out_dir") {
            Some(e) => PathBuf::from(&e.value),
            None => std::env::var_os("EQAREA_OUT_DIR")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(".")),
        };

        let godunov_cells: usize = map.parse_or("godunov.cells", 4000)?;
        let godunov_cfl: f64 = map.parse_or("godunov.cfl", 0.9)?;
        let sweep_t_start: f64 = map.parse_or("sweep.t_start", 0.0)?;
        let sweep_t_end: f64 = map.parse_or("sweep.t_end", t.max(1.0))?;
        let sweep_n_times: usize = map.parse_or("sweep.n_times", 50)?;
        let sweep_jobs: usize = map.parse_or("sweep.jobs", 1)?;
        if sweep_jobs == 0 {
            return Err(ConfigError("sweep.jobs must be at least 1".into()));
        }
        let validate_dt: Option<f64> = map.parse("validate.dt")?;
        let validate_rh_tol: f64 = map.parse_or("validate.rh_tol", 1e-2)?;
        if !(validate_rh_tol > 0.0) {
            return Err(ConfigError("validate.rh_tol must be positive".into()));
        }
        let validate_conservation_tol: Option<f64> = map.parse("validate.conservation_tol")?;
        let validate_l1_grid: usize = map.parse_or("validate.l1_grid", 10_000)?;
        let validate_l1_cells: usize = map.parse_or("validate.l1_cells", 0)?;
        let convergence_ns = match map.get("convergence.n_list") {
            None => vec![250, 500, 1000, 2000],
            Some(e) => parse_n_list(&e.value).ok_or_else(|| {
                ConfigError(format!(
                    "{}: convergence.n_list wants comma-separated counts",
                    e.origin
                ))
            })?,
        };

        let mut summary: Vec<(String, String)> = Vec::new();
        for key in KNOWN_KEYS {
            if let Some(e) = map.get(key) {
                summary.push((key.to_string(), e.value.clone()));
            }
        }

        Ok(RunConfig {
            flux,
            profile,
            params: SolveParams {
                n_points,
                jump_subpoints,
                root_tol,
                area_tol,
            },
            t,
            out_dir,
            godunov_cells,
            godunov_cfl,
            sweep_t_start,
            sweep_t_end,
            sweep_n_times,
            sweep_jobs,
            validate_dt,
            validate_rh_tol,
            validate_conservation_tol,
            validate_l1_grid,
            validate_l1_cells,
            convergence_ns,
            summary,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn map_of(lines: &str) -> ConfigMap {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(lines.as_bytes()).unwrap();
        ConfigMap::from_file(f.path()).unwrap()
    }

    #[test]
    fn defaults_build() {
        let map = map_of("flux.name = burgers\nprofile.name = riemann_step\n");
        let cfg = RunConfig::from_map(&map).unwrap();
        assert_eq!(cfg.params.n_points, 1000);
        assert_eq!(cfg.params.jump_subpoints, 64);
        assert_eq!(cfg.params.root_tol, 1e-14);
        assert_eq!(cfg.convergence_ns, vec![250, 500, 1000, 2000]);
    }

    #[test]
    fn file_errors_carry_line_numbers() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(b"flux.name = burgers\nbogus_key = 3\n").unwrap();
        let err = ConfigMap::from_file(f.path()).unwrap_err().to_string();
        assert!(err.contains(":2"), "missing line anchor: {err}");
        assert!(err.contains("bogus_key"));
    }

    #[test]
    fn custom_flux_and_segments() {
        let map = map_of(
            "flux.expr = u^2/2\nflux.deriv_expr = u\nflux.second_deriv_expr = 1\n\
             flux.convexity = strictly_convex\n\
             profile.segments = -1..0: 1 ; 0..1: 1 - x\n",
        );
        let cfg = RunConfig::from_map(&map).unwrap();
        assert_eq!(cfg.flux.speed(0.25), 0.25);
        assert_eq!(cfg.profile.support(), (-1.0, 1.0));
        assert_eq!(cfg.profile.eval(0.5), 0.5);
    }

    #[test]
    fn convexity_mismatch_is_config_error() {
        let map = map_of(
            "flux.expr = u^2/2\nflux.deriv_expr = u\nflux.second_deriv_expr = 1\n\
             flux.convexity = strictly_concave\nprofile.name = box\n",
        );
        assert!(RunConfig::from_map(&map).is_err());
    }

    #[test]
    fn set_overrides_file() {
        let mut map = map_of("flux.name = burgers\nprofile.name = box\nt = 1\n");
        map.apply_set("t=4.25").unwrap();
        map.apply_set("profile.n_points=500").unwrap();
        assert!(map.apply_set("nope=1").is_err());
        let cfg = RunConfig::from_map(&map).unwrap();
        assert_eq!(cfg.t, 4.25);
        assert_eq!(cfg.params.n_points, 500);
    }

    #[test]
    fn bad_values_are_rejected() {
        let mut map = map_of("flux.name = burgers\nprofile.name = box\n");
        map.apply_set("profile.n_points=8").unwrap();
        assert!(RunConfig::from_map(&map).is_err());
        let mut map2 = map_of("flux.name = burgers\nprofile.name = box\n");
        map2.apply_set("solver.root_tol=-1").unwrap();
        assert!(RunConfig::from_map(&map2).is_err());
    }
}
