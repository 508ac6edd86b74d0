//! Experiment layer: protocol runs, step-size calibration, convergence-order
//! fits, generalized-order probes and cross-scheme benchmark tables.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::thread;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::evolve::{evolve, log_times, step, SamplingPlan, WorkCounter};
use crate::lattice::{make_lattice, Lattice, State};
use crate::observables::DiagnosticsProbe;
use crate::scheme::{catalog_scheme, Scheme, StageKind};

/// Seed of the disorder realization used when none is given.
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SAMPLES: usize = 60;
/// Energy-error target used to calibrate step sizes.
pub const DEFAULT_TARGET_REE: f64 = 1e-5;

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scheme: String,
    pub tau: f64,
    pub n: usize,
    pub w: f64,
    pub seed: u64,
    /// Energy placed on the central site at `t = 0`.
    pub e_total: f64,
    pub t_end: f64,
    /// Number of log-spaced observation times in `[1, t_end]` (plus `t = 0`).
    pub samples: usize,
    /// Spacing of the extra energy checks feeding `max_ree`.
    pub energy_check_every: f64,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scheme: "SABA2".into(),
            tau: 0.0185,
            n: 1000,
            w: 4.0,
            seed: DEFAULT_SEED,
            e_total: 0.4,
            t_end: 1e5,
            samples: DEFAULT_SAMPLES,
            energy_check_every: 10.0,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn new(scheme: &str, tau: f64) -> Self {
        Self {
            scheme: scheme.into(),
            tau,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad(format!("tau must be positive, got {}", self.tau));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.samples < 2 {
            return bad(format!("samples must be at least 2, got {}", self.samples));
        }
        if !(self.e_total > 0.0 && self.e_total.is_finite()) {
            return bad(format!("energy must be positive, got {}", self.e_total));
        }
        if self.n == 0 {
            return bad("sites must be at least 1".into());
        }
        if !(self.w > 0.0) {
            return bad(format!("w must be positive, got {}", self.w));
        }
        if !(self.energy_check_every > 0.0) {
            return bad("energy check spacing must be positive".into());
        }
        catalog_scheme(&self.scheme)?;
        Ok(())
    }

    pub fn lattice(&self) -> Result<Lattice> {
        make_lattice(self.n, self.w, self.seed)
    }

    fn shares_lattice_with(&self, other: &RunConfig) -> bool {
        self.n == other.n
            && self.w == other.w
            && self.seed == other.seed
            && self.e_total == other.e_total
            && self.t_end == other.t_end
    }
}

/// One observation row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationRecord {
    pub t: f64,
    pub ree: f64,
    pub m2: f64,
    pub p: f64,
    pub ibar: f64,
    /// Cumulative integration-loop time up to this observation.
    pub wall_seconds: f64,
    pub grad_evals: u64,
    pub corrector_evals: u64,
}

/// Per-run summary used in comparison tables.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub scheme: String,
    pub tau: f64,
    pub max_ree: f64,
    pub final_m2: f64,
    pub final_p: f64,
    pub wall_seconds: f64,
    /// `grad_evals / t_end`, equal to kicks-per-step / tau.
    pub grad_evals_per_unit_time: f64,
    /// Gradient-equivalent cost per unit time (a corrector kick counts as two).
    pub cost_per_unit_time: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: RunConfig,
    pub records: Vec<ObservationRecord>,
    pub summary: BenchRow,
    /// Set when the run aborted; `records` then hold everything up to the abort.
    pub failure: Option<String>,
}

/// Builds the lattice from `cfg` and runs the single-site protocol.
pub fn run_experiment(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let lat = cfg.lattice()?;
    run_on_lattice(cfg, &lat)
}

/// Runs the protocol on a given realization (`cfg.n`, `cfg.w`, `cfg.seed` are
/// taken from the lattice).
pub fn run_on_lattice(cfg: &RunConfig, lat: &Lattice) -> Result<RunOutput> {
    cfg.validate()?;
    let scheme = catalog_scheme(&cfg.scheme)?;
    let mut cfg = cfg.clone();
    cfg.n = lat.n();
    cfg.w = lat.w();
    if let Some(seed) = lat.seed() {
        cfg.seed = seed;
    }

    let tau = cfg.tau;
    let record_plan = SamplingPlan::log_spaced(tau, cfg.t_end, cfg.samples)?;
    let check_plan = SamplingPlan::uniform(tau, cfg.t_end, cfg.energy_check_every)?;
    let record_steps: BTreeSet<u64> = record_plan.steps().iter().copied().collect();
    let mut times: Vec<f64> = record_plan.times().collect();
    times.extend(check_plan.times());
    let plan = SamplingPlan::new(tau, &times)?;

    let st0 = State::single_site(lat.n(), cfg.e_total);
    // the reference energy is the site-energy sum, so REe(0) is exactly zero
    let e0: f64 = lat.site_energies(&st0)?.iter().sum();
    let mut probe = DiagnosticsProbe::new(lat, e0);
    let mut records = Vec::with_capacity(record_steps.len());
    let mut max_ree: f64 = 0.0;
    let mut last_work = WorkCounter::default();
    let mut last_wall = 0.0;
    let mut probe_error = None;

    let outcome = evolve(&scheme, lat, st0, tau, &plan, |obs| {
        if probe_error.is_some() {
            return;
        }
        last_work = obs.work;
        last_wall = obs.integration_time.as_secs_f64();
        let k = obs.work.steps;
        if record_steps.contains(&k) {
            match probe.measure(obs.state, obs.t) {
                Ok(d) => {
                    max_ree = max_ree.max(d.ree);
                    records.push(ObservationRecord {
                        t: obs.t,
                        ree: d.ree,
                        m2: d.m2,
                        p: d.p,
                        ibar: d.ibar,
                        wall_seconds: last_wall,
                        grad_evals: obs.work.grad_evals,
                        corrector_evals: obs.work.corrector_evals,
                    });
                }
                Err(e) => probe_error = Some(e),
            }
        } else {
            match lat.total_energy(obs.state) {
                Ok(e) => max_ree = max_ree.max(((e - e0) / e0).abs()),
                Err(e) => probe_error = Some(e),
            }
        }
    });
    if let Some(e) = probe_error {
        return Err(e);
    }

    let failure = match outcome {
        Ok(_) => None,
        Err(e @ Error::BlowUp { .. }) => Some(e.to_string()),
        Err(e) => return Err(e),
    };
    let horizon = if failure.is_some() {
        records.last().map_or(cfg.t_end, |r| r.t.max(tau))
    } else {
        cfg.t_end
    };
    let last = records.last().copied();
    let summary = BenchRow {
        scheme: cfg.scheme.clone(),
        tau,
        max_ree: if failure.is_some() { f64::INFINITY } else { max_ree },
        final_m2: last.map_or(0.0, |r| r.m2),
        final_p: last.map_or(1.0, |r| r.p),
        wall_seconds: last_wall,
        grad_evals_per_unit_time: if failure.is_some() {
            last_work.grad_evals as f64 / horizon
        } else {
            scheme.count(StageKind::KickB) as f64 / tau
        },
        cost_per_unit_time: if failure.is_some() {
            last_work.weighted_cost() as f64 / horizon
        } else {
            (scheme.count(StageKind::KickB) + 2 * scheme.count(StageKind::CorrectorC)) as f64 / tau
        },
    };
    Ok(RunOutput {
        config: cfg,
        records,
        summary,
        failure,
    })
}

/// Largest relative energy error of `scheme` from `st0` over `[0, horizon]`,
/// checked every `check_every` time units. A blow-up yields infinity.
pub fn max_energy_error(
    scheme: &Scheme,
    lat: &Lattice,
    st0: &State,
    tau: f64,
    horizon: f64,
    check_every: f64,
) -> Result<f64> {
    let plan = SamplingPlan::uniform(tau, horizon, check_every.max(tau))?;
    let e0 = lat.total_energy(st0)?;
    let mut worst: f64 = 0.0;
    match evolve(scheme, lat, st0.clone(), tau, &plan, |obs| {
        if let Ok(e) = lat.total_energy(obs.state) {
            worst = worst.max(((e - e0) / e0).abs());
        }
    }) {
        Ok(_) => Ok(worst),
        Err(Error::BlowUp { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Settings for [`calibrate_tau`].
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationOptions {
    pub target_ree: f64,
    pub horizon: f64,
    pub e_total: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    /// Bisection stops when `hi / lo` falls below this ratio.
    pub resolution: f64,
    pub check_every: f64,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self {
            target_ree: DEFAULT_TARGET_REE,
            horizon: 1e3,
            e_total: 0.4,
            tau_min: 1e-3,
            tau_max: 1.0,
            resolution: 1.02,
            check_every: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub tau: f64,
    pub max_ree: f64,
    /// Every `(tau, max REe)` probe in evaluation order.
    pub probes: Vec<(f64, f64)>,
}

/// Largest step (to within the bisection resolution, in log space) whose
/// single-site run keeps the maximal energy error below the target.
pub fn calibrate_tau(scheme: &Scheme, lat: &Lattice, opts: &CalibrationOptions) -> Result<Calibration> {
    if !(opts.target_ree > 0.0) {
        return Err(Error::Calibration(format!("target must be positive, got {}", opts.target_ree)));
    }
    if !(opts.tau_min > 0.0 && opts.tau_max > opts.tau_min && opts.resolution > 1.0) {
        return Err(Error::Calibration("invalid bracket".into()));
    }
    let st0 = State::single_site(lat.n(), opts.e_total);
    let mut probes = Vec::new();
    let mut eval = |tau: f64| -> Result<f64> {
        let r = max_energy_error(scheme, lat, &st0, tau, opts.horizon, opts.check_every)?;
        probes.push((tau, r));
        Ok(r)
    };

    let hi_ree = eval(opts.tau_max)?;
    if hi_ree <= opts.target_ree {
        return Ok(Calibration {
            tau: opts.tau_max,
            max_ree: hi_ree,
            probes,
        });
    }
    let lo_ree = eval(opts.tau_min)?;
    if lo_ree > opts.target_ree {
        return Err(Error::Calibration(format!(
            "{}: max REe {lo_ree:e} at tau={} already exceeds target {:e}",
            scheme.name(),
            opts.tau_min,
            opts.target_ree
        )));
    }
    let (mut lo, mut hi, mut best) = (opts.tau_min, opts.tau_max, lo_ree);
    while hi / lo > opts.resolution {
        let mid = (lo * hi).sqrt();
        let r = eval(mid)?;
        if r <= opts.target_ree {
            lo = mid;
            best = r;
        } else {
            hi = mid;
        }
    }
    Ok(Calibration {
        tau: lo,
        max_ree: best,
        probes,
    })
}

/// A smooth low-energy state used for convergence-order fits.
pub fn smooth_state(n: usize) -> State {
    let k = std::f64::consts::PI / (n as f64 + 1.0);
    let q = (1..=n).map(|i| 0.3 * (k * i as f64).sin() + 0.1 * (3.0 * k * i as f64).sin()).collect();
    let p = (1..=n).map(|i| 0.2 * (2.0 * k * i as f64).sin()).collect();
    State { q, p }
}

/// Step sizes for order fits of second-order schemes on the 32-site test lattice.
pub const ORDER2_TAUS: [f64; 5] = [0.01, 0.02, 0.04, 0.07, 0.1];
/// Step sizes for fourth-order schemes, larger so the error stays above roundoff.
pub const ORDER4_TAUS: [f64; 5] = [0.03, 0.05, 0.08, 0.15, 0.3];
pub const ORDER_HORIZON: f64 = 10.0;

/// Default step sizes for an order fit of `scheme`, chosen by its nominal order.
pub fn order_taus(scheme: &Scheme) -> &'static [f64] {
    if scheme.order().effective_order() >= 4 {
        &ORDER4_TAUS
    } else {
        &ORDER2_TAUS
    }
}

/// Below this the energy error is roundoff, not truncation.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct OrderFit {
    pub slope: f64,
    /// `(tau, max REe)` per probe.
    pub points: Vec<(f64, f64)>,
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), (x, y)| {
        let dx = x.ln() - mx;
        (num + dx * (y.ln() - my), den + dx * dx)
    });
    num / den
}

/// Fits the energy-error convergence order of `scheme` over the step sizes
/// `taus`, integrating the smooth state for `horizon` time units.
pub fn measure_order(scheme: &Scheme, lat: &Lattice, taus: &[f64], horizon: f64) -> Result<OrderFit> {
    measure_order_from(scheme, lat, &smooth_state(lat.n()), taus, horizon)
}

pub fn measure_order_from(
    scheme: &Scheme,
    lat: &Lattice,
    st0: &State,
    taus: &[f64],
    horizon: f64,
) -> Result<OrderFit> {
    if taus.len() < 4 {
        return Err(Error::domain("order fit needs at least 4 step sizes"));
    }
    let (lo, hi) = taus
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    if !(lo > 0.0) || hi / lo < 10.0 * (1.0 - 1e-12) {
        return Err(Error::domain("step sizes must be positive and span a decade"));
    }
    let e0 = lat.total_energy(st0)?;
    let mut points = Vec::with_capacity(taus.len());
    for &tau in taus {
        let steps = (horizon / tau).round().max(1.0) as u64;
        let plan = SamplingPlan::every_step(tau, steps)?;
        let mut worst: f64 = 0.0;
        evolve(scheme, lat, st0.clone(), tau, &plan, |obs| {
            if let Ok(e) = lat.total_energy(obs.state) {
                worst = worst.max(((e - e0) / e0).abs());
            }
        })?;
        points.push((tau, worst));
    }
    if let Some((tau, r)) = points.iter().find(|(_, r)| *r < ROUNDOFF_FLOOR) {
        return Err(Error::ShrinkRange(format!(
            "{}: max REe {r:e} at tau={tau} is below {ROUNDOFF_FLOOR:e}",
            scheme.name()
        )));
    }
    Ok(OrderFit {
        slope: loglog_slope(&points),
        points,
    })
}

/// Result of an epsilon-scaling probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonProbe {
    pub eps: f64,
    pub ree_eps: f64,
    pub ree_half: f64,
    /// `ree_eps / ree_half`: about 2 when the error is linear in eps, about 4
    /// when it is quadratic.
    pub ratio: f64,
}

/// Runs `scheme` at fixed `tau` on `lat` with its potential scaled by `eps`
/// and by `eps / 2`, from the same smooth state, and compares the maximal
/// relative energy errors.
pub fn epsilon_scaling_probe(
    scheme: &Scheme,
    lat: &Lattice,
    eps: f64,
    tau: f64,
    horizon: f64,
) -> Result<EpsilonProbe> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::domain(format!("eps must lie in (0, 1], got {eps}")));
    }
    let st0 = epsilon_probe_state(lat.n());
    let run = |scale: f64| -> Result<f64> {
        let scaled = lat.with_potential_scale(scale)?;
        let steps = (horizon / tau).round().max(1.0) as u64;
        let plan = SamplingPlan::every_step(tau, steps)?;
        let e0 = scaled.total_energy(&st0)?;
        let mut worst: f64 = 0.0;
        evolve(scheme, &scaled, st0.clone(), tau, &plan, |obs| {
            if let Ok(e) = scaled.total_energy(obs.state) {
                worst = worst.max(((e - e0) / e0).abs());
            }
        })?;
        Ok(worst)
    };
    let ree_eps = run(eps)?;
    let ree_half = run(eps / 2.0)?;
    if ree_half < ROUNDOFF_FLOOR {
        return Err(Error::ShrinkRange(format!(
            "{}: max REe {ree_half:e} at eps={} is at the roundoff floor",
            scheme.name(),
            eps / 2.0
        )));
    }
    Ok(EpsilonProbe {
        eps,
        ree_eps,
        ree_half,
        ratio: ree_eps / ree_half,
    })
}

/// Step size of the default epsilon probe.
pub const EPSILON_PROBE_TAU: f64 = 0.4;
/// Horizon of the default epsilon probe: a single step. Over longer spans the
/// trajectory itself adapts to the potential scale (the quartic term sets the
/// excursion of `q`), which mixes powers of eps into the measured error.
pub const EPSILON_PROBE_HORIZON: f64 = EPSILON_PROBE_TAU;

/// Start state for the epsilon probe: momenta only, so the reference energy
/// does not depend on the potential scale.
pub fn epsilon_probe_state(n: usize) -> State {
    let k = std::f64::consts::PI / (n as f64 + 1.0);
    let q = vec![0.0; n];
    let p = (1..=n).map(|i| (k * i as f64).sin() + 0.4 * (2.0 * k * i as f64).sin()).collect();
    State { q, p }
}

/// `max |J^T Omega J - Omega|` for the one-step map, with `J` from central
/// differences of step `h`.
pub fn symplecticity_defect(scheme: &Scheme, lat: &Lattice, st: &State, tau: f64, h: f64) -> Result<f64> {
    let n = st.len();
    let dim = 2 * n;
    let flat = |s: &State| -> Vec<f64> { s.q.iter().chain(&s.p).copied().collect() };
    let unflat = |z: &[f64]| State {
        q: z[..n].to_vec(),
        p: z[n..].to_vec(),
    };
    let z0 = flat(st);
    // columns of the Jacobian
    let mut jac = vec![vec![0.0; dim]; dim];
    for j in 0..dim {
        let mut zp = z0.clone();
        let mut zm = z0.clone();
        zp[j] += h;
        zm[j] -= h;
        let fp = flat(&step(scheme, lat, &unflat(&zp), tau)?);
        let fm = flat(&step(scheme, lat, &unflat(&zm), tau)?);
        for i in 0..dim {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    let omega = |i: usize, j: usize| -> f64 {
        if j == i + n && i < n {
            1.0
        } else if i == j + n && j < n {
            -1.0
        } else {
            0.0
        }
    };
    let mut worst: f64 = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            let mut s = 0.0;
            for i in 0..dim {
                for j in 0..dim {
                    let o = omega(i, j);
                    if o != 0.0 {
                        s += jac[i][a] * o * jac[j][b];
                    }
                }
            }
            worst = worst.max((s - omega(a, b)).abs());
        }
    }
    Ok(worst)
}

/// Largest component error after a step forward by `tau` and back by `-tau`,
/// relative to the largest component of `st`.
pub fn reversibility_error(scheme: &Scheme, lat: &Lattice, st: &State, tau: f64) -> Result<f64> {
    let fwd = step(scheme, lat, st, tau)?;
    let back = step(scheme, lat, &fwd, -tau)?;
    let scale = st.max_abs().max(f64::MIN_POSITIVE);
    Ok(back
        .q
        .iter()
        .chain(&back.p)
        .zip(st.q.iter().chain(&st.p))
        .map(|(a, b)| (a - b).abs() / scale)
        .fold(0.0, f64::max))
}

/// Output of [`bench_suite`].
#[derive(Debug, Clone)]
pub struct SuiteReport {
    /// Summary rows sorted by wall seconds.
    pub rows: Vec<BenchRow>,
    /// Full outputs in input order.
    pub runs: Vec<RunOutput>,
    /// True when runs were timed one at a time.
    pub exclusive_timing: bool,
    pub threads: usize,
}

/// Runs every config on one shared realization. `max_threads` caps how many
/// runs execute concurrently (and is clamped to the core count); with one
/// thread timings are exclusive.
pub fn bench_suite(cfgs: &[RunConfig], max_threads: usize) -> Result<SuiteReport> {
    let first = cfgs
        .first()
        .ok_or_else(|| Error::Config("bench suite needs at least one run".into()))?;
    for c in cfgs {
        c.validate()?;
        if !c.shares_lattice_with(first) {
            return Err(Error::Config(format!(
                "run `{}` does not share sites/w/seed/energy/t_end with `{}`",
                c.scheme, first.scheme
            )));
        }
    }
    let lat = first.lattice()?;
    let cores = thread::available_parallelism().map_or(1, |n| n.get());
    let threads = max_threads.clamp(1, cores).min(cfgs.len());

    let mut runs: Vec<Option<Result<RunOutput>>> = (0..cfgs.len()).map(|_| None).collect();
    if threads == 1 {
        for (slot, c) in runs.iter_mut().zip(cfgs) {
            *slot = Some(run_on_lattice(c, &lat));
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let results = std::sync::Mutex::new(&mut runs);
        thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= cfgs.len() {
                        break;
                    }
                    let out = run_on_lattice(&cfgs[i], &lat);
                    results.lock().unwrap()[i] = Some(out);
                });
            }
        });
    }
    let runs: Vec<RunOutput> = runs
        .into_iter()
        .map(|r| r.expect("every run slot is filled"))
        .collect::<Result<_>>()?;
    let mut rows: Vec<BenchRow> = runs.iter().map(|r| r.summary.clone()).collect();
    rows.sort_by(|a, b| a.wall_seconds.total_cmp(&b.wall_seconds));
    Ok(SuiteReport {
        rows,
        runs,
        exclusive_timing: threads == 1,
        threads,
    })
}

/// `(scheme, tau)` groupings of the three standard comparison suites.
pub fn figure_runs(figure: u8) -> Option<&'static [(&'static str, f64)]> {
    match figure {
        1 => Some(&[("SBAB2", 0.016), ("SABA2", 0.0185), ("ABA82", 0.032)]),
        2 => Some(&[
            ("SABA2wc", 0.165),
            ("ABAH864", 0.355),
            ("Sz4", 0.084),
            ("SBAB2Y4", 0.13),
            ("ABA82", 0.032),
        ]),
        3 => Some(&[
            ("SABA2Y4", 0.1255),
            ("SBAB2wc", 0.134),
            ("ABAH864", 0.355),
            ("ABA864", 0.4855),
            ("FRo4", 0.084),
        ]),
        _ => None,
    }
}

/// Renders a comparison table as aligned plain text.
pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:<9} {:>8} {:>11} {:>10} {:>9} {:>10} {:>10} {:>10}\n",
        "scheme", "tau", "max_REe", "final_m2", "final_P", "wall_s", "grad/t", "cost/t"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<9} {:>8} {:>11.3e} {:>10.2} {:>9.2} {:>10.3} {:>10.2} {:>10.2}\n",
            r.scheme,
            r.tau,
            r.max_ree,
            r.final_m2,
            r.final_p,
            r.wall_seconds,
            r.grad_evals_per_unit_time,
            r.cost_per_unit_time
        ));
    }
    out
}

/// Wall-clock helper for callers that time whole suites.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64())
}

/// Log-spaced observation times used by [`run_experiment`].
pub fn observation_times(t_end: f64, samples: usize) -> Vec<f64> {
    log_times(t_end, samples)
}
