//! Line-based run configuration.
//!
//! ```text
//! # comment
//! [equation]
//! problem = wave
//! diffusion = 0.05
//!
//! [mesh]
//! nx = 16
//! degree = 3
//!
//! [time]
//! final_time = 1.0
//! mode = fixed
//! ```
//!
//! Vector values are whitespace separated (`velocity = 1.5 1.0`). Every
//! problem found while reading is collected and reported together.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::equations::{AdvDiffParams, NavierStokesParams};
use crate::error::{ConfigIssue, LwfrError, Result};
use crate::mesh::{BoundarySide, Domain, MeshKind};
use crate::problems::{SQUARE, UNIT_SQUARE};
use crate::time_control::ControllerParams;

use super::run::{TimeConfig, TimeMode};

const SECTIONS: [&str; 5] = ["equation", "mesh", "time", "boundary", "output"];

/// Built-in initial/exact data sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// Scalar advection-diffusion of a travelling sine wave.
    Wave,
    /// Navier-Stokes with a manufactured solution and source.
    Manufactured,
    /// Navier-Stokes lid-driven cavity.
    Cavity,
    /// Navier-Stokes uniform flow.
    FreeStream,
}

impl Problem {
    pub const NAMES: [&'static str; 4] = ["wave", "manufactured", "cavity", "free_stream"];

    pub fn name(self) -> &'static str {
        match self {
            Self::Wave => "wave",
            Self::Manufactured => "manufactured",
            Self::Cavity => "cavity",
            Self::FreeStream => "free_stream",
        }
    }

    pub fn is_navier_stokes(self) -> bool {
        self != Self::Wave
    }

    fn default_boundary(self) -> [&'static str; 4] {
        match self {
            Self::Wave | Self::FreeStream => ["periodic"; 4],
            Self::Manufactured => ["periodic", "periodic", "noslip_adiabatic", "noslip_adiabatic"],
            Self::Cavity => [
                "noslip_isothermal",
                "noslip_isothermal",
                "noslip_isothermal",
                "moving_wall_isothermal",
            ],
        }
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [Self::Wave, Self::Manufactured, Self::Cavity, Self::FreeStream]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown problem `{s}`, expected one of {}", Self::NAMES.join(", ")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquationConfig {
    pub problem: Problem,
    pub advdiff: AdvDiffParams,
    pub navier_stokes: NavierStokesParams,
    /// Cavity reference Mach number.
    pub mach: f64,
    /// Primitive `(rho, v1, v2, p)` of the free stream.
    pub free_stream: [f64; 4],
    /// Manufactured solution constants `c`, `A` and the velocity shift.
    pub mms_c: f64,
    pub mms_amplitude: f64,
    pub mms_shift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshConfig {
    pub nx: usize,
    pub ny: usize,
    pub degree: usize,
    pub kind: MeshKind,
    pub domain: Domain,
}

/// A boundary tag by name plus its optional wall data.
#[derive(Debug, Clone, PartialEq)]
pub struct SideConfig {
    pub tag: String,
    pub velocity: Option<[f64; 2]>,
    pub temperature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputConfig {
    pub directory: Option<PathBuf>,
    /// Dump the field every this many accepted steps (and at the end).
    pub dump_every: Option<usize>,
    pub log_steps: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub equation: EquationConfig,
    pub mesh: MeshConfig,
    pub time: TimeConfig,
    /// Indexed by [`BoundarySide`].
    pub boundary: [SideConfig; 4],
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        parse_config(&text)
    }
}

struct Entry {
    line: usize,
    value: String,
}

/// Raw sections with consumable keys; leftovers are reported as unknown.
struct Sections {
    map: BTreeMap<String, (usize, BTreeMap<String, Entry>)>,
    issues: Vec<ConfigIssue>,
}

impl Sections {
    fn issue(&mut self, line: usize, message: impl Into<String>) {
        self.issues.push(ConfigIssue {
            line,
            message: message.into(),
        });
    }

    fn take_raw(&mut self, section: &str, key: &str) -> Option<Entry> {
        self.map.get_mut(section).and_then(|(_, keys)| keys.remove(key))
    }

    fn get<T: FromStr>(&mut self, section: &str, key: &str) -> Option<T> {
        let e = self.take_raw(section, key)?;
        match e.value.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.issue(
                    e.line,
                    format!("[{section}] {key}: expected {}, got `{}`", type_label::<T>(), e.value),
                );
                None
            }
        }
    }

    fn or<T: FromStr>(&mut self, section: &str, key: &str, default: T) -> T {
        self.get(section, key).unwrap_or(default)
    }

    fn required<T: FromStr>(&mut self, section: &str, key: &str) -> Option<T> {
        let present = self.map.get(section).is_some_and(|(_, k)| k.contains_key(key));
        if !present {
            self.issue(0, format!("[{section}] missing required key `{key}`"));
            return None;
        }
        self.get(section, key)
    }

    fn list<const K: usize>(&mut self, section: &str, key: &str) -> Option<[f64; K]> {
        let e = self.take_raw(section, key)?;
        let parsed: Option<Vec<f64>> = e.value.split_whitespace().map(|s| s.parse().ok()).collect();
        match parsed.and_then(|v| <[f64; K]>::try_from(v).ok()) {
            Some(v) => Some(v),
            None => {
                self.issue(e.line, format!("[{section}] {key}: expected {K} numbers, got `{}`", e.value));
                None
            }
        }
    }

    /// Value check tied to the line the key came from.
    fn check(&mut self, section: &str, key: &str, ok: bool, line_of: &BTreeMap<(String, String), usize>, msg: &str) {
        if !ok {
            let line = line_of.get(&(section.to_string(), key.to_string())).copied().unwrap_or(0);
            self.issue(line, format!("[{section}] {key}: {msg}"));
        }
    }
}

fn type_label<T>() -> &'static str {
    let name = std::any::type_name::<T>();
    match name {
        "usize" => "a non-negative integer",
        "f64" => "a number",
        "bool" => "true or false",
        _ if name.ends_with("Problem") => "a problem name",
        _ => "a string",
    }
}

fn tokenize(text: &str) -> Sections {
    let mut s = Sections {
        map: BTreeMap::new(),
        issues: Vec::new(),
    };
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        if let Some(name) = l.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !SECTIONS.contains(&name.as_str()) {
                s.issue(line, format!("unknown section [{name}]"));
                current = None;
            } else if let Some((first, _)) = s.map.get(&name) {
                let first = *first;
                s.issue(line, format!("duplicate section [{name}], first defined on line {first}"));
                current = None;
            } else {
                s.map.insert(name.clone(), (line, BTreeMap::new()));
                current = Some(name);
            }
            continue;
        }
        let Some((k, v)) = l.split_once('=') else {
            s.issue(line, format!("expected `key = value`, got `{l}`"));
            continue;
        };
        let (k, v) = (k.trim().to_string(), v.trim().trim_matches('"').to_string());
        let Some(sec) = current.clone() else {
            s.issue(line, format!("key `{k}` outside of a known section"));
            continue;
        };
        let keys = &mut s.map.get_mut(&sec).expect("section exists").1;
        if let Some(prev) = keys.get(&k) {
            let first = prev.line;
            s.issue(line, format!("[{sec}] duplicate key `{k}`, first set on line {first}"));
            continue;
        }
        keys.insert(k, Entry { line, value: v });
    }
    s
}

/// Parses and validates a config. All problems are reported in one
/// [`LwfrError::ConfigLines`].
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut s = tokenize(text);
    let line_of: BTreeMap<(String, String), usize> = s
        .map
        .iter()
        .flat_map(|(sec, (_, keys))| keys.iter().map(move |(k, e)| ((sec.clone(), k.clone()), e.line)))
        .collect();

    // equation
    let problem: Option<Problem> = s.required("equation", "problem");
    let p = problem.unwrap_or(Problem::Wave);
    let ad = AdvDiffParams::default();
    let advdiff = AdvDiffParams {
        velocity: s.list("equation", "velocity").unwrap_or(ad.velocity),
        diffusion: s.or("equation", "diffusion", ad.diffusion),
    };
    s.check("equation", "diffusion", advdiff.diffusion >= 0.0, &line_of, "must be non-negative");
    let ns_default = match p {
        Problem::Cavity => crate::problems::cavity_params(),
        Problem::Manufactured => NavierStokesParams {
            mu: 1e-2,
            ..NavierStokesParams::default()
        },
        _ => NavierStokesParams::default(),
    };
    let navier_stokes = NavierStokesParams {
        gamma: s.or("equation", "gamma", ns_default.gamma),
        mu: s.or("equation", "mu", ns_default.mu),
        prandtl: s.or("equation", "prandtl", ns_default.prandtl),
    };
    s.check("equation", "gamma", navier_stokes.gamma > 1.0, &line_of, "must exceed 1");
    s.check("equation", "mu", navier_stokes.mu >= 0.0, &line_of, "must be non-negative");
    s.check("equation", "prandtl", navier_stokes.prandtl > 0.0, &line_of, "must be positive");
    let mach = s.or("equation", "mach", 0.1);
    s.check("equation", "mach", mach > 0.0, &line_of, "must be positive");
    let free_stream = s.list("equation", "free_stream").unwrap_or([1.0, 0.3, -0.2, 1.0]);
    s.check(
        "equation",
        "free_stream",
        free_stream[0] > 0.0 && free_stream[3] > 0.0,
        &line_of,
        "density and pressure must be positive",
    );
    let equation = EquationConfig {
        problem: p,
        advdiff,
        navier_stokes,
        mach,
        free_stream,
        mms_c: s.or("equation", "mms_c", 2.0),
        mms_amplitude: s.or("equation", "mms_amplitude", 0.1),
        mms_shift: s.or("equation", "mms_shift", 1.0),
    };

    // mesh
    let nx: Option<usize> = s.required("mesh", "nx");
    let ny: Option<usize> = s.get("mesh", "ny");
    let degree: Option<usize> = s.required("mesh", "degree");
    s.check("mesh", "nx", nx != Some(0), &line_of, "must be at least 1");
    s.check("mesh", "ny", ny != Some(0), &line_of, "must be at least 1");
    s.check(
        "mesh",
        "degree",
        degree.is_none_or(|d| (1..=crate::basis::MAX_DEGREE).contains(&d)),
        &line_of,
        &format!("must be between 1 and {}", crate::basis::MAX_DEGREE),
    );
    let kind_name: String = s.or("mesh", "kind", "cartesian".to_string());
    let amplitude: f64 = s.or("mesh", "amplitude", 0.05);
    let kind = match kind_name.as_str() {
        "cartesian" => MeshKind::Cartesian,
        "warped" => MeshKind::Warped { amplitude },
        other => {
            s.check("mesh", "kind", false, &line_of, &format!("unknown mesh kind `{other}`, expected cartesian or warped"));
            MeshKind::Cartesian
        }
    };
    let default_domain = if p == Problem::Cavity { UNIT_SQUARE } else { SQUARE };
    let domain = s
        .list("mesh", "domain")
        .map(|[x0, x1, y0, y1]| Domain::new(x0, x1, y0, y1))
        .unwrap_or(default_domain);
    s.check(
        "mesh",
        "domain",
        domain.x1 > domain.x0 && domain.y1 > domain.y0,
        &line_of,
        "expected `x0 x1 y0 y1` with x0 < x1 and y0 < y1",
    );
    let nx = nx.unwrap_or(1).max(1);
    let mesh = MeshConfig {
        nx,
        ny: ny.unwrap_or(nx).max(1),
        degree: degree.unwrap_or(1),
        kind,
        domain,
    };

    // time
    let final_time: Option<f64> = s.required("time", "final_time");
    s.check("time", "final_time", final_time.is_none_or(|t| t > 0.0), &line_of, "must be positive");
    let default_mode = if p == Problem::Wave { "fixed" } else { "adaptive" };
    let mode_name: String = s.or("time", "mode", default_mode.to_string());
    let cfl_advective = s.or("time", "cfl_advective", DEFAULT_CFL);
    let cfl_viscous = s.or("time", "cfl_viscous", DEFAULT_CFL);
    let base = ControllerParams::for_degree(mesh.degree);
    let controller = ControllerParams {
        abs_tol: s.or("time", "abs_tol", base.abs_tol),
        rel_tol: s.or("time", "rel_tol", base.rel_tol),
        gains: s.list("time", "gains").unwrap_or(base.gains),
        order: s.or("time", "order", base.order),
        limiter: s.or("time", "limiter", base.limiter),
        max_rejections: s.or("time", "max_rejections", base.max_rejections),
        reject_factor: s.or("time", "reject_factor", base.reject_factor),
    };
    s.check(
        "time",
        "abs_tol",
        controller.abs_tol >= 0.0 && controller.rel_tol >= 0.0 && controller.abs_tol + controller.rel_tol > 0.0,
        &line_of,
        "tolerances must be non-negative and not both zero",
    );
    let initial_safety = s.or("time", "initial_safety", 0.5);
    let max_cfl = s.or("time", "max_cfl", 1.0);
    let max_steps: Option<usize> = s.get("time", "max_steps");
    for (key, v) in [
        ("cfl_advective", cfl_advective),
        ("cfl_viscous", cfl_viscous),
        ("initial_safety", initial_safety),
        ("max_cfl", max_cfl),
        ("order", controller.order),
        ("reject_factor", controller.reject_factor),
    ] {
        s.check("time", key, v > 0.0, &line_of, "must be positive");
    }
    let mode = match mode_name.as_str() {
        "fixed" => TimeMode::Fixed {
            cfl_advective,
            cfl_viscous,
        },
        "adaptive" => TimeMode::Adaptive {
            controller,
            initial_safety,
            max_cfl,
        },
        other => {
            s.check("time", "mode", false, &line_of, &format!("unknown mode `{other}`, expected fixed or adaptive"));
            TimeMode::Fixed {
                cfl_advective,
                cfl_viscous,
            }
        }
    };
    let time = TimeConfig {
        final_time: final_time.unwrap_or(1.0),
        mode,
        max_steps,
    };

    // boundary
    let defaults = p.default_boundary();
    let boundary = BoundarySide::ALL.map(|side| {
        let name = side.name();
        let tag: String = s.or("boundary", name, defaults[side as usize].to_string());
        if !crate::boundary::BoundaryTag::NAMES.contains(&tag.as_str()) {
            s.check(
                "boundary",
                name,
                false,
                &line_of,
                &format!(
                    "unknown boundary tag `{tag}`, expected one of {}",
                    crate::boundary::BoundaryTag::NAMES.join(", ")
                ),
            );
        }
        let velocity = s.list("boundary", &format!("{name}_velocity"));
        let temperature = s.get("boundary", &format!("{name}_temperature"));
        SideConfig {
            tag,
            velocity,
            temperature,
        }
    });
    if !p.is_navier_stokes() {
        for (side, b) in BoundarySide::ALL.iter().zip(&boundary) {
            let wall = !matches!(b.tag.as_str(), "periodic" | "dirichlet_exact" | "inflow_profile");
            s.check(
                "boundary",
                side.name(),
                !wall,
                &line_of,
                "wall conditions need the Navier-Stokes equations",
            );
        }
    }

    // output
    let output = OutputConfig {
        directory: s.get::<String>("output", "directory").map(PathBuf::from),
        dump_every: s.get("output", "dump_every"),
        log_steps: s.or("output", "log_steps", false),
    };
    s.check("output", "dump_every", output.dump_every != Some(0), &line_of, "must be at least 1");

    let leftovers: Vec<(String, String, usize)> = s
        .map
        .iter()
        .flat_map(|(sec, (_, keys))| keys.iter().map(move |(k, e)| (sec.clone(), k.clone(), e.line)))
        .collect();
    for (sec, k, line) in leftovers {
        s.issue(line, format!("[{sec}] unknown key `{k}`"));
    }

    if !s.issues.is_empty() {
        let mut issues = s.issues;
        issues.sort_by_key(|i| i.line);
        return Err(LwfrError::ConfigLines(issues));
    }
    Ok(RunConfig {
        equation,
        mesh,
        time,
        boundary,
        output,
    })
}

/// CFL factors used when the config does not set them.
pub const DEFAULT_CFL: f64 = 0.5;
