//! Flat `key = value` run configuration and the figure presets.
//!
//! ```text
//! # two-level run
//! mode = tls
//! tls.epsilon = 0.2
//! tls.D = 0.1
//! run.trajectories = 1000
//! ```
//!
//! Blank lines and `#` comments are ignored; unknown or repeated keys are
//! errors. Numbers use a period as decimal separator. Every error names the
//! offending key and its line (line 0 for a default that became invalid).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::ensemble::{GridSpec, Job, TlsInitial};
use crate::error::{Error, Result};
use crate::grid::{Friction, LangevinParams, Potential, DEFAULT_SPILL_THRESHOLD};
use crate::two_level::{Coupling, Method, MixedInitial, TlsParams};
use crate::types::Spinor;

/// Environment variable that replaces `run.seed`.
pub const SEED_ENV: &str = "QLANGEVIN_SEED";

/// What a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact Lindblad propagation and the averaged unraveling side by side.
    Tls,
    TlsExact,
    TlsSse,
    /// Quantum Langevin ensemble on the grid.
    Grid,
    /// Classical Langevin ensemble.
    Classical,
    /// Quantum and classical ensembles driven by the same noise streams.
    GridClassical,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Tls,
        Mode::TlsExact,
        Mode::TlsSse,
        Mode::Grid,
        Mode::Classical,
        Mode::GridClassical,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Tls => "tls",
            Mode::TlsExact => "tls-exact",
            Mode::TlsSse => "tls-sse",
            Mode::Grid => "grid",
            Mode::Classical => "classical",
            Mode::GridClassical => "grid-classical",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Mode::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Harmonic,
    Morse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlsConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub d: f64,
    pub xhat: Coupling,
    pub initial: TlsInitial,
    /// Step of the exact propagator; `run.dt` when unset.
    pub exact_dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LangevinConfig {
    pub mu: f64,
    pub k: f64,
    pub gamma: f64,
    pub kt: f64,
    pub sigma_f_override: Option<f64>,
    pub potential: PotentialKind,
    pub de: f64,
    pub a: f64,
    pub q0_morse: f64,
    /// Initial displacement (wavepacket centre or classical position).
    pub q0: f64,
    /// Initial Gaussian width.
    pub sigma0: f64,
    /// Initial momentum boost of the wavepacket.
    pub p0: f64,
    /// Initial classical velocity.
    pub v0: f64,
    pub friction: Friction,
    pub bath_spring: bool,
    pub spill_threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub dt: f64,
    pub t_final: f64,
    pub trajectories: usize,
    pub seed: u64,
    pub method: Method,
    /// Worker threads for ensembles; 0 uses every core.
    pub workers: usize,
    /// Writes the noise of trajectory 0 to this file.
    pub noise_record: Option<PathBuf>,
    /// Drives a single trajectory with the noise stored in this file.
    pub noise_replay: Option<PathBuf>,
}

/// Repeats the run for each value of one numeric key.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub tls: TlsConfig,
    pub grid: GridSpec,
    pub langevin: LangevinConfig,
    pub run: RunSettings,
    pub out_path: Option<PathBuf>,
    pub sweep: Option<Sweep>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Tls,
            tls: TlsConfig {
                epsilon: 0.2,
                delta: 0.2,
                d: 0.0,
                xhat: Coupling::SigmaZ,
                initial: TlsInitial::Pure(Spinor::upper()),
                exact_dt: None,
            },
            grid: GridSpec::default(),
            langevin: LangevinConfig {
                mu: 1.0,
                k: 1.0,
                gamma: 0.1,
                kt: 0.1,
                sigma_f_override: None,
                potential: PotentialKind::Harmonic,
                de: 1.0,
                a: 1.0,
                q0_morse: 0.0,
                q0: 1.0,
                sigma0: 1.0,
                p0: 0.0,
                v0: 0.0,
                friction: Friction::default(),
                bath_spring: false,
                spill_threshold: DEFAULT_SPILL_THRESHOLD,
            },
            run: RunSettings {
                dt: 0.01,
                t_final: 100.0,
                trajectories: 1000,
                seed: 1,
                method: Method::Rk4,
                workers: 0,
                noise_record: None,
                noise_replay: None,
            },
            out_path: None,
            sweep: None,
        }
    }
}

/// Every accepted key.
pub const KEYS: &[&str] = &[
    "mode",
    "tls.epsilon",
    "tls.delta",
    "tls.D",
    "tls.xhat",
    "tls.psi0",
    "tls.mixed.w0",
    "tls.mixed.w1",
    "tls.mixed.alpha",
    "tls.exact_dt",
    "grid.qmin",
    "grid.qmax",
    "grid.ng",
    "langevin.mu",
    "langevin.k",
    "langevin.gamma",
    "langevin.kT",
    "langevin.sigma_F_override",
    "langevin.potential",
    "langevin.De",
    "langevin.a",
    "langevin.q0_morse",
    "langevin.q0",
    "langevin.sigma0",
    "langevin.p0",
    "langevin.v0",
    "langevin.friction",
    "langevin.bath_spring",
    "langevin.spill_threshold",
    "run.dt",
    "run.t_final",
    "run.trajectories",
    "run.seed",
    "run.method",
    "run.workers",
    "run.noise_record",
    "run.noise_replay",
    "out.path",
    "sweep.key",
    "sweep.values",
];

/// Keys holding a single real number; the only ones a sweep may vary.
const NUMERIC_KEYS: &[&str] = &[
    "tls.epsilon",
    "tls.delta",
    "tls.D",
    "tls.mixed.w0",
    "tls.mixed.w1",
    "tls.mixed.alpha",
    "tls.exact_dt",
    "grid.qmin",
    "grid.qmax",
    "langevin.mu",
    "langevin.k",
    "langevin.gamma",
    "langevin.kT",
    "langevin.sigma_F_override",
    "langevin.De",
    "langevin.a",
    "langevin.q0_morse",
    "langevin.q0",
    "langevin.sigma0",
    "langevin.p0",
    "langevin.v0",
    "langevin.spill_threshold",
    "run.dt",
    "run.t_final",
];

struct Entry {
    line: usize,
    value: String,
}

/// Parsed `key = value` lines with their line numbers.
struct Entries(BTreeMap<String, Entry>);

fn config_err(line: usize, key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, content, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(config_err(line, key, "unknown key"));
            }
            if value.is_empty() {
                return Err(config_err(line, key, "missing value"));
            }
            if let Some(prev) = map.get(key) {
                let prev: &Entry = prev;
                return Err(config_err(line, key, format!("already set on line {}", prev.line)));
            }
            map.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }
        Ok(Entries(map))
    }

    fn line(&self, key: &str) -> usize {
        self.0.get(key).map_or(0, |e| e.line)
    }

    fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    fn raw(&self, key: &str) -> Option<(&str, usize)> {
        self.0.get(key).map(|e| (e.value.as_str(), e.line))
    }

    fn number(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.opt_number(key)?.unwrap_or(default))
    }

    fn opt_number(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|(v, line)| parse_number(v).ok_or_else(|| config_err(line, key, format!("`{v}` is not a number"))))
            .transpose()
    }

    fn integer<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some((v, line)) => v
                .parse()
                .map_err(|_| config_err(line, key, format!("`{v}` is not a non-negative integer"))),
        }
    }

    fn choice<T>(&self, key: &str, default: T, parse: impl Fn(&str) -> Option<T>, allowed: &str) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some((v, line)) => parse(v).ok_or_else(|| config_err(line, key, format!("`{v}` is not one of {allowed}"))),
        }
    }
}

/// Decimal number with a period separator (`1.5`, `-2e-3`, `inf` rejected).
fn parse_number(s: &str) -> Option<f64> {
    let ok = s
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    if !ok {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|v| parse_number(v.trim())).collect()
}

/// Parses and validates a configuration, applying defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let e = Entries::parse(text)?;
    let d = RunConfig::default();
    let mode = e.choice(
        "mode",
        d.mode,
        Mode::parse,
        "tls, tls-exact, tls-sse, grid, classical, grid-classical",
    )?;

    let mixed_keys = ["tls.mixed.w0", "tls.mixed.w1", "tls.mixed.alpha"];
    let initial = if mixed_keys.iter().any(|k| e.has(k)) {
        if e.has("tls.psi0") {
            return Err(config_err(
                e.line("tls.psi0"),
                "tls.psi0",
                "cannot be combined with tls.mixed.*",
            ));
        }
        for k in mixed_keys {
            if !e.has(k) {
                return Err(config_err(0, k, "required when any tls.mixed.* key is set"));
            }
        }
        let m = MixedInitial {
            w0: e.number("tls.mixed.w0", 1.0)?,
            w1: e.number("tls.mixed.w1", 0.0)?,
            alpha: e.number("tls.mixed.alpha", 0.0)?,
        };
        m.validate()
            .map_err(|err| config_err(e.line("tls.mixed.w0"), "tls.mixed.w0", err.to_string()))?;
        TlsInitial::Mixed(m)
    } else {
        match e.raw("tls.psi0") {
            None => d.tls.initial,
            Some((v, line)) => {
                let amps = parse_list(v)
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| config_err(line, "tls.psi0", "expected two real amplitudes `c0,c1`"))?;
                let psi = Spinor::from_real(amps[0], amps[1])
                    .normalized()
                    .map_err(|_| config_err(line, "tls.psi0", "amplitudes must not both be zero"))?;
                TlsInitial::Pure(psi)
            }
        }
    };
    let tls = TlsConfig {
        epsilon: e.number("tls.epsilon", d.tls.epsilon)?,
        delta: e.number("tls.delta", d.tls.delta)?,
        d: e.number("tls.D", d.tls.d)?,
        xhat: e.choice("tls.xhat", d.tls.xhat, Coupling::parse, "sigma_z, sigma_x, h0")?,
        initial,
        exact_dt: e.opt_number("tls.exact_dt")?,
    };
    let grid = GridSpec {
        qmin: e.number("grid.qmin", d.grid.qmin)?,
        qmax: e.number("grid.qmax", d.grid.qmax)?,
        ng: e.integer("grid.ng", d.grid.ng)?,
    };
    let dl = d.langevin;
    let langevin = LangevinConfig {
        mu: e.number("langevin.mu", dl.mu)?,
        k: e.number("langevin.k", dl.k)?,
        gamma: e.number("langevin.gamma", dl.gamma)?,
        kt: e.number("langevin.kT", dl.kt)?,
        sigma_f_override: e.opt_number("langevin.sigma_F_override")?,
        potential: e.choice(
            "langevin.potential",
            dl.potential,
            |s| match s {
                "harmonic" => Some(PotentialKind::Harmonic),
                "morse" => Some(PotentialKind::Morse),
                _ => None,
            },
            "harmonic, morse",
        )?,
        de: e.number("langevin.De", dl.de)?,
        a: e.number("langevin.a", dl.a)?,
        q0_morse: e.number("langevin.q0_morse", dl.q0_morse)?,
        q0: e.number("langevin.q0", dl.q0)?,
        sigma0: e.number("langevin.sigma0", dl.sigma0)?,
        p0: e.number("langevin.p0", dl.p0)?,
        v0: e.number("langevin.v0", dl.v0)?,
        friction: e.choice("langevin.friction", dl.friction, Friction::parse, "start, midpoint")?,
        bath_spring: e.choice("langevin.bath_spring", dl.bath_spring, parse_bool, "true, false")?,
        spill_threshold: e.number("langevin.spill_threshold", dl.spill_threshold)?,
    };
    let run = RunSettings {
        dt: e.number("run.dt", d.run.dt)?,
        t_final: e.number("run.t_final", d.run.t_final)?,
        trajectories: e.integer("run.trajectories", d.run.trajectories)?,
        seed: e.integer("run.seed", d.run.seed)?,
        method: e.choice("run.method", d.run.method, Method::parse, "rk4, euler")?,
        workers: e.integer("run.workers", d.run.workers)?,
        noise_record: e.raw("run.noise_record").map(|(v, _)| PathBuf::from(v)),
        noise_replay: e.raw("run.noise_replay").map(|(v, _)| PathBuf::from(v)),
    };
    let sweep = match (e.raw("sweep.key"), e.raw("sweep.values")) {
        (None, None) => None,
        (Some((key, line)), Some((values, vline))) => {
            if !NUMERIC_KEYS.contains(&key) {
                return Err(config_err(line, "sweep.key", format!("`{key}` is not a numeric key")));
            }
            let values = parse_list(values)
                .filter(|v| !v.is_empty())
                .ok_or_else(|| config_err(vline, "sweep.values", "expected comma-separated numbers"))?;
            Some(Sweep {
                key: key.to_string(),
                values,
            })
        }
        (Some(_), None) => return Err(config_err(e.line("sweep.key"), "sweep.values", "required with sweep.key")),
        (None, Some(_)) => return Err(config_err(e.line("sweep.values"), "sweep.key", "required with sweep.values")),
    };
    let cfg = RunConfig {
        mode,
        tls,
        grid,
        langevin,
        run,
        out_path: e.raw("out.path").map(|(v, _)| PathBuf::from(v)),
        sweep,
    };
    cfg.validate_with(&|k| e.line(k))?;
    Ok(cfg)
}

impl RunConfig {
    /// Checks every constraint; errors report line 0.
    pub fn validate(&self) -> Result<()> {
        self.validate_with(&|_| 0)
    }

    fn validate_with(&self, line: &dyn Fn(&str) -> usize) -> Result<()> {
        let check = |ok: bool, key: &str, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(config_err(line(key), key, msg))
            }
        };
        let finite = |v: f64| v.is_finite();
        let t = &self.tls;
        check(finite(t.epsilon), "tls.epsilon", "must be finite")?;
        check(finite(t.delta), "tls.delta", "must be finite")?;
        check(t.d >= 0.0, "tls.D", "must be >= 0")?;
        if let Some(h) = t.exact_dt {
            check(h > 0.0, "tls.exact_dt", "must be > 0")?;
            let ratio = self.run.dt / h;
            check(
                (ratio - ratio.round()).abs() < 1e-9 && ratio.round() >= 1.0,
                "tls.exact_dt",
                "run.dt must be an integer multiple of tls.exact_dt",
            )?;
        }
        let g = &self.grid;
        check(g.qmax > g.qmin, "grid.qmax", "must exceed grid.qmin")?;
        check(g.ng >= 8, "grid.ng", "must be >= 8")?;
        let l = &self.langevin;
        check(l.mu > 0.0, "langevin.mu", "must be > 0")?;
        check(finite(l.k), "langevin.k", "must be finite")?;
        check(l.gamma >= 0.0, "langevin.gamma", "must be >= 0")?;
        check(l.kt >= 0.0, "langevin.kT", "must be >= 0")?;
        if let Some(s) = l.sigma_f_override {
            check(s >= 0.0, "langevin.sigma_F_override", "must be >= 0")?;
        }
        if l.potential == PotentialKind::Morse {
            check(l.de > 0.0, "langevin.De", "must be > 0")?;
            check(l.a > 0.0, "langevin.a", "must be > 0")?;
        }
        check(l.sigma0 > 0.0, "langevin.sigma0", "must be > 0")?;
        check(l.spill_threshold > 0.0, "langevin.spill_threshold", "must be > 0")?;
        let r = &self.run;
        check(r.dt > 0.0, "run.dt", "must be > 0")?;
        check(r.t_final >= 0.0, "run.t_final", "must be >= 0")?;
        check(r.trajectories >= 1, "run.trajectories", "must be >= 1")?;
        if r.noise_replay.is_some() {
            check(
                r.trajectories == 1,
                "run.noise_replay",
                "replaying recorded noise needs run.trajectories = 1",
            )?;
            check(
                !matches!(self.mode, Mode::TlsExact),
                "run.noise_replay",
                "mode tls-exact uses no noise",
            )?;
        }
        Ok(())
    }

    pub fn tls_params(&self) -> Result<TlsParams> {
        TlsParams::new(self.tls.epsilon, self.tls.delta, self.tls.d, self.tls.xhat)
    }

    pub fn potential(&self) -> Result<Potential> {
        let l = &self.langevin;
        match l.potential {
            PotentialKind::Harmonic => Ok(Potential::Harmonic { k: l.k }),
            PotentialKind::Morse => Potential::morse(l.de, l.a, l.q0_morse),
        }
    }

    pub fn langevin_params(&self) -> Result<LangevinParams> {
        let l = &self.langevin;
        let mut p = LangevinParams::new(l.mu, l.gamma, l.kt, self.run.dt, self.run.t_final, self.potential()?)?;
        p.sigma_f_override = l.sigma_f_override;
        p.friction = l.friction;
        p.bath_spring = l.bath_spring;
        p.spill_threshold = l.spill_threshold;
        p.validate()?;
        Ok(p)
    }

    pub fn tls_sse_job(&self) -> Result<Job> {
        Ok(Job::TlsSse {
            params: self.tls_params()?,
            initial: self.tls.initial,
            dt: self.run.dt,
            t_final: self.run.t_final,
        })
    }

    pub fn grid_job(&self) -> Result<Job> {
        Ok(Job::GridLangevin {
            params: self.langevin_params()?,
            grid: self.grid,
            q0: self.langevin.q0,
            sigma0: self.langevin.sigma0,
            p0: self.langevin.p0,
        })
    }

    pub fn classical_job(&self) -> Result<Job> {
        Ok(Job::ClassicalLangevin {
            params: self.langevin_params()?,
            r0: self.langevin.q0,
            v0: self.langevin.v0,
        })
    }

    /// Configuration text that [`parse_config`] maps back to `self`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("mode", self.mode.as_str().into());
        let t = &self.tls;
        kv("tls.epsilon", fmt_num(t.epsilon));
        kv("tls.delta", fmt_num(t.delta));
        kv("tls.D", fmt_num(t.d));
        kv("tls.xhat", t.xhat.as_str().into());
        match t.initial {
            TlsInitial::Pure(psi) => kv("tls.psi0", format!("{},{}", fmt_num(psi.c0.re), fmt_num(psi.c1.re))),
            TlsInitial::Mixed(m) => {
                kv("tls.mixed.w0", fmt_num(m.w0));
                kv("tls.mixed.w1", fmt_num(m.w1));
                kv("tls.mixed.alpha", fmt_num(m.alpha));
            }
        }
        if let Some(h) = t.exact_dt {
            kv("tls.exact_dt", fmt_num(h));
        }
        kv("grid.qmin", fmt_num(self.grid.qmin));
        kv("grid.qmax", fmt_num(self.grid.qmax));
        kv("grid.ng", self.grid.ng.to_string());
        let l = &self.langevin;
        kv("langevin.mu", fmt_num(l.mu));
        kv("langevin.k", fmt_num(l.k));
        kv("langevin.gamma", fmt_num(l.gamma));
        kv("langevin.kT", fmt_num(l.kt));
        if let Some(s) = l.sigma_f_override {
            kv("langevin.sigma_F_override", fmt_num(s));
        }
        kv(
            "langevin.potential",
            match l.potential {
                PotentialKind::Harmonic => "harmonic".into(),
                PotentialKind::Morse => "morse".into(),
            },
        );
        kv("langevin.De", fmt_num(l.de));
        kv("langevin.a", fmt_num(l.a));
        kv("langevin.q0_morse", fmt_num(l.q0_morse));
        kv("langevin.q0", fmt_num(l.q0));
        kv("langevin.sigma0", fmt_num(l.sigma0));
        kv("langevin.p0", fmt_num(l.p0));
        kv("langevin.v0", fmt_num(l.v0));
        kv("langevin.friction", l.friction.as_str().into());
        kv("langevin.bath_spring", l.bath_spring.to_string());
        kv("langevin.spill_threshold", fmt_num(l.spill_threshold));
        let r = &self.run;
        kv("run.dt", fmt_num(r.dt));
        kv("run.t_final", fmt_num(r.t_final));
        kv("run.trajectories", r.trajectories.to_string());
        kv("run.seed", r.seed.to_string());
        kv("run.method", r.method.as_str().into());
        kv("run.workers", r.workers.to_string());
        if let Some(p) = &r.noise_record {
            kv("run.noise_record", p.display().to_string());
        }
        if let Some(p) = &r.noise_replay {
            kv("run.noise_replay", p.display().to_string());
        }
        if let Some(p) = &self.out_path {
            kv("out.path", p.display().to_string());
        }
        if let Some(s) = &self.sweep {
            kv("sweep.key", s.key.clone());
            kv(
                "sweep.values",
                s.values.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(","),
            );
        }
        out
    }

    /// Copy with one numeric key replaced (used for sweeps); the sweep itself
    /// is dropped from the copy.
    pub fn with_value(&self, key: &str, value: f64) -> Result<RunConfig> {
        if !NUMERIC_KEYS.contains(&key) {
            return Err(config_err(0, key, "not a numeric key"));
        }
        let mut base = self.clone();
        base.sweep = None;
        let text: String = base
            .serialize()
            .lines()
            .filter(|l| l.split_once('=').map(|(k, _)| k.trim()) != Some(key))
            .map(|l| format!("{l}\n"))
            .collect();
        parse_config(&format!("{text}{key} = {}\n", fmt_num(value)))
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

/// Parses the value of [`SEED_ENV`], if set.
pub fn seed_override(value: Option<&str>) -> Result<Option<u64>> {
    value
        .map(|v| {
            v.trim()
                .parse::<u64>()
                .map_err(|_| config_err(0, SEED_ENV, format!("`{v}` is not a 64-bit unsigned integer")))
        })
        .transpose()
}

/// Names accepted by [`preset`].
pub const PRESETS: &[&str] = &[
    "fig2.1", "fig2.2", "fig2.3", "fig2.4", "fig2.5", "fig2.6", "fig2.7", "fig3.1", "fig3.2", "fig3.3", "fig3.4",
    "fig3.5", "fig3.6", "fig3.7", "fig3.8",
];

/// Configuration reproducing one figure.
pub fn preset(name: &str) -> Result<RunConfig> {
    let text = match name {
        "fig2.1" => TLS_BASE.to_string() + "tls.D = 0\n",
        "fig2.2" => TLS_BASE.to_string() + "tls.D = 0.03\n",
        "fig2.3" => TLS_BASE.to_string() + "tls.D = 0.1\n",
        "fig2.4" => TLS_BASE.to_string() + "tls.D = 0.3\n",
        "fig2.5" => TLS_BASE.replace("tls.delta = 0.2", "tls.delta = 0.4") + "tls.D = 0.1\n",
        "fig2.6" => TLS_BASE.replace("tls.delta = 0.2", "tls.delta = 0.1") + "tls.D = 0.1\n",
        "fig2.7" => "mode = tls\n\
                     tls.epsilon = 0.2\n\
                     tls.delta = 0\n\
                     tls.D = 0.3\n\
                     tls.xhat = h0\n\
                     tls.mixed.w0 = 0.7\n\
                     tls.mixed.w1 = 0.3\n\
                     tls.mixed.alpha = 0.7853981633974483\n\
                     run.t_final = 500\n\
                     run.trajectories = 1000\n"
            .to_string(),
        // Heating by the random force alone (no friction).
        "fig3.1" => GRID_BASE.replace("langevin.gamma = 0.1", "langevin.gamma = 0") + "langevin.sigma_F_override = 0.14\n",
        // Closed and damped oscillator, quantum against classical.
        "fig3.2" => "mode = grid-classical\n\
                     langevin.kT = 0\n\
                     run.t_final = 20\n\
                     run.trajectories = 1\n\
                     sweep.key = langevin.gamma\n\
                     sweep.values = 0,0.5\n"
            .to_string(),
        "fig3.3" => "mode = classical\n\
                     langevin.gamma = 0.1\n\
                     langevin.kT = 1\n\
                     run.t_final = 200\n\
                     run.trajectories = 1000\n"
            .to_string(),
        "fig3.4" | "fig3.5" => {
            GRID_BASE.to_string() + "langevin.sigma_F_override = 0.14\nsweep.key = langevin.gamma\nsweep.values = 0,0.1\n"
        }
        // Several temperatures; the box is widened (same spacing) so the
        // warmer packets stay inside it.
        "fig3.6" => GRID_BASE.to_string() + WIDE_GRID + "sweep.key = langevin.kT\nsweep.values = 0,0.1,0.3\n",
        "fig3.7" => GRID_BASE.to_string() + WIDE_GRID + "sweep.key = langevin.kT\nsweep.values = 0,0.1,0.3,0.5\n",
        "fig3.8" => GRID_BASE.replace("langevin.kT = 0.1", "langevin.kT = 0.9"),
        _ => {
            return Err(Error::UnknownPreset {
                name: name.to_string(),
                available: PRESETS.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    parse_config(&text)
}

const TLS_BASE: &str = "mode = tls\n\
                        tls.epsilon = 0.2\n\
                        tls.delta = 0.2\n\
                        tls.xhat = sigma_z\n\
                        tls.psi0 = 1,0\n\
                        run.t_final = 100\n\
                        run.trajectories = 1000\n";

const GRID_BASE: &str = "mode = grid\n\
                         langevin.gamma = 0.1\n\
                         langevin.kT = 0.1\n\
                         langevin.q0 = 1\n\
                         run.t_final = 100\n\
                         run.trajectories = 1000\n";

const WIDE_GRID: &str = "grid.qmin = -8\ngrid.qmax = 8\ngrid.ng = 90\n";
