//! Flat `key = value` config files. Keys are the long flag names; blank lines
//! and lines starting with `#` are skipped.

use std::fmt;
use std::path::PathBuf;

use kgsplit::format::fmt_f64;
use kgsplit::RunConfig;

/// Every setting a config file or the command line can provide.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub scheme: Option<String>,
    pub tau: Option<f64>,
    pub sites: Option<usize>,
    pub w: Option<f64>,
    pub seed: Option<u64>,
    pub energy: Option<f64>,
    pub t_end: Option<f64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    /// `(scheme, tau)` pairs of a bench suite.
    pub runs: Option<Vec<(String, f64)>>,
}

/// Parses a float, accepting scientific notation.
pub fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: `{s}`"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: `{s}`"))
    }
}

/// Parses a non-negative integer, also accepting integral values written as
/// floats (`1e3`).
pub fn parse_u64(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v = parse_f64(s)?;
    if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(64) {
        Ok(v as u64)
    } else {
        Err(format!("not a non-negative integer: `{s}`"))
    }
}

pub fn parse_usize(s: &str) -> Result<usize, String> {
    parse_u64(s).and_then(|v| usize::try_from(v).map_err(|_| format!("too large: `{s}`")))
}

/// `SCHEME:TAU[, SCHEME:TAU ...]`
pub fn parse_runs(s: &str) -> Result<Vec<(String, f64)>, String> {
    let runs = s
        .split(',')
        .map(|item| {
            let (name, tau) = item
                .split_once(':')
                .ok_or_else(|| format!("expected SCHEME:TAU, got `{}`", item.trim()))?;
            Ok((name.trim().to_string(), parse_f64(tau)?))
        })
        .collect::<Result<Vec<_>, String>>()?;
    if runs.is_empty() {
        return Err("empty run list".into());
    }
    Ok(runs)
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |e: String| format!("line {}: {e}", i + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected `key = value`, got `{line}`")))?;
            s.set(key.trim(), value.trim()).map_err(at)?;
        }
        Ok(s)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn put<T>(slot: &mut Option<T>, key: &str, v: T) -> Result<(), String> {
            if slot.is_some() {
                return Err(format!("duplicate key `{key}`"));
            }
            *slot = Some(v);
            Ok(())
        }
        match key {
            "scheme" => put(&mut self.scheme, key, value.to_string()),
            "tau" => put(&mut self.tau, key, parse_f64(value)?),
            "sites" => put(&mut self.sites, key, parse_usize(value)?),
            "w" => put(&mut self.w, key, parse_f64(value)?),
            "seed" => put(&mut self.seed, key, parse_u64(value)?),
            "energy" => put(&mut self.energy, key, parse_f64(value)?),
            "t-end" => put(&mut self.t_end, key, parse_f64(value)?),
            "samples" => put(&mut self.samples, key, parse_usize(value)?),
            "out" => put(&mut self.out, key, PathBuf::from(value)),
            "runs" => put(&mut self.runs, key, parse_runs(value)?),
            _ => Err(format!("unknown key `{key}`")),
        }
    }

    /// Values set in `over` replace those in `self`.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            scheme: over.scheme.or(self.scheme),
            tau: over.tau.or(self.tau),
            sites: over.sites.or(self.sites),
            w: over.w.or(self.w),
            seed: over.seed.or(self.seed),
            energy: over.energy.or(self.energy),
            t_end: over.t_end.or(self.t_end),
            samples: over.samples.or(self.samples),
            out: over.out.or(self.out),
            runs: over.runs.or(self.runs),
        }
    }

    /// Run configuration with defaults for anything unset (scheme and tau
    /// included; callers that need them explicitly check first).
    pub fn run_config(&self) -> RunConfig {
        let d = RunConfig::default();
        RunConfig {
            scheme: self.scheme.clone().unwrap_or(d.scheme),
            tau: self.tau.unwrap_or(d.tau),
            n: self.sites.unwrap_or(d.n),
            w: self.w.unwrap_or(d.w),
            seed: self.seed.unwrap_or(d.seed),
            e_total: self.energy.unwrap_or(d.e_total),
            t_end: self.t_end.unwrap_or(d.t_end),
            samples: self.samples.unwrap_or(d.samples),
            energy_check_every: d.energy_check_every,
            output: self.out.clone(),
        }
    }
}

/// Canonical form: one `key = value` line per set key, in a fixed order.
impl fmt::Display for Settings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = &self.scheme {
            writeln!(f, "scheme = {v}")?;
        }
        if let Some(v) = self.tau {
            writeln!(f, "tau = {}", fmt_f64(v))?;
        }
        if let Some(runs) = &self.runs {
            let items: Vec<String> = runs.iter().map(|(n, t)| format!("{n}:{}", fmt_f64(*t))).collect();
            writeln!(f, "runs = {}", items.join(", "))?;
        }
        if let Some(v) = self.sites {
            writeln!(f, "sites = {v}")?;
        }
        if let Some(v) = self.w {
            writeln!(f, "w = {}", fmt_f64(v))?;
        }
        if let Some(v) = self.seed {
            writeln!(f, "seed = {v}")?;
        }
        if let Some(v) = self.energy {
            writeln!(f, "energy = {}", fmt_f64(v))?;
        }
        if let Some(v) = self.t_end {
            writeln!(f, "t-end = {}", fmt_f64(v))?;
        }
        if let Some(v) = self.samples {
            writeln!(f, "samples = {v}")?;
        }
        if let Some(v) = &self.out {
            writeln!(f, "out = {}", v.display())?;
        }
        Ok(())
    }
}

/// Built-in bench suites.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig1", include_str!("../presets/fig1.conf")),
    ("fig2", include_str!("../presets/fig2.conf")),
    ("fig3", include_str!("../presets/fig3.conf")),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
