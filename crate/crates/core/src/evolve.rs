//! Time stepping: applies a scheme's stages to the lattice flows, counts work
//! and hands states to an observer at scheduled times.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, State};
use crate::scheme::{validate, Scheme, StageKind};

/// Any `|q_i|` or `|p_i|` above this aborts the run.
pub const BLOW_UP_THRESHOLD: f64 = 1e10;

/// How often (in steps) the state is scanned for blow-up between observations.
const BLOW_UP_CHECK_INTERVAL: u64 = 1024;

/// Machine-independent cost accounting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WorkCounter {
    /// Evaluations of `grad B` by kick stages.
    pub grad_evals: u64,
    /// Corrector kicks (each needs `grad B` plus a Hessian-vector product).
    pub corrector_evals: u64,
    pub steps: u64,
}

impl WorkCounter {
    /// Gradient-equivalent cost, counting a corrector kick as two gradients.
    pub fn weighted_cost(&self) -> u64 {
        self.grad_evals + 2 * self.corrector_evals
    }
}

/// Observation times snapped to whole numbers of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    tau: f64,
    steps: Vec<u64>,
}

impl SamplingPlan {
    /// Snaps each time to the nearest multiple of `tau`; `0` is always included
    /// and duplicates after snapping are dropped.
    pub fn new(tau: f64, times: &[f64]) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::domain(format!("sampling needs tau > 0, got {tau}")));
        }
        let mut steps = vec![0u64];
        let mut snapped: Vec<u64> = Vec::with_capacity(times.len());
        for &t in times {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::domain(format!("bad observation time {t}")));
            }
            snapped.push((t / tau).round() as u64);
        }
        snapped.sort_unstable();
        for s in snapped {
            if s > *steps.last().unwrap() {
                steps.push(s);
            }
        }
        Ok(Self { tau, steps })
    }

    /// `t = 0` plus `samples` logarithmically spaced times from 1 to `t_end`.
    pub fn log_spaced(tau: f64, t_end: f64, samples: usize) -> Result<Self> {
        if !(t_end > 0.0) {
            return Err(Error::domain(format!("horizon must be positive, got {t_end}")));
        }
        let times = log_times(t_end, samples);
        Self::new(tau, &times)
    }

    /// `t = 0, dt, 2 dt, ...` up to `t_end`.
    pub fn uniform(tau: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && t_end > 0.0) {
            return Err(Error::domain("uniform sampling needs dt > 0 and t_end > 0"));
        }
        let n = (t_end / dt).round() as usize;
        let times: Vec<f64> = (0..=n).map(|k| (k as f64 * dt).min(t_end)).collect();
        Self::new(tau, &times)
    }

    /// Observe after every single step.
    pub fn every_step(tau: f64, total_steps: u64) -> Result<Self> {
        let mut plan = Self::new(tau, &[])?;
        plan.steps = (0..=total_steps).collect();
        Ok(plan)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steps(&self) -> &[u64] {
        &self.steps
    }

    pub fn total_steps(&self) -> u64 {
        *self.steps.last().unwrap()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|&k| k as f64 * self.tau)
    }

    pub fn horizon(&self) -> f64 {
        self.total_steps() as f64 * self.tau
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `samples` log-spaced times in `[1, t_end]` (just `t_end` if `t_end <= 1`).
pub fn log_times(t_end: f64, samples: usize) -> Vec<f64> {
    if samples == 0 {
        return vec![t_end];
    }
    if t_end <= 1.0 || samples == 1 {
        return vec![t_end];
    }
    let hi = t_end.log10();
    (0..samples)
        .map(|k| {
            if k + 1 == samples {
                t_end
            } else {
                10f64.powf(hi * k as f64 / (samples - 1) as f64)
            }
        })
        .collect()
}

/// Applies one scheme step by step, keeping scratch space and a work counter.
#[derive(Debug)]
pub struct Integrator<'a> {
    scheme: &'a Scheme,
    lattice: &'a Lattice,
    tau: f64,
    tau3: f64,
    work: WorkCounter,
    kicks_per_step: u64,
    correctors_per_step: u64,
    scratch: Vec<f64>,
}

impl<'a> Integrator<'a> {
    pub fn new(scheme: &'a Scheme, lattice: &'a Lattice, tau: f64) -> Result<Self> {
        validate(scheme).into_result()?;
        if tau == 0.0 || !tau.is_finite() {
            return Err(Error::domain(format!("step size must be finite and non-zero, got {tau}")));
        }
        Ok(Self {
            scheme,
            lattice,
            tau,
            tau3: tau * tau * tau,
            work: WorkCounter::default(),
            kicks_per_step: scheme.count(StageKind::KickB) as u64,
            correctors_per_step: scheme.count(StageKind::CorrectorC) as u64,
            scratch: vec![0.0; lattice.n()],
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn work(&self) -> WorkCounter {
        self.work
    }

    /// Advances `st` by one step. `st` must match the lattice size
    /// (checked once by [`Integrator::check`]).
    pub fn step(&mut self, st: &mut State) {
        debug_assert_eq!(st.len(), self.lattice.n());
        for stage in self.scheme.stages() {
            match stage.kind {
                StageKind::DriftA => st.drift(stage.coeff * self.tau),
                StageKind::KickB => self.lattice.kick(&st.q, &mut st.p, stage.coeff * self.tau),
                StageKind::CorrectorC => self.lattice.corrector_kick(
                    &st.q,
                    &mut st.p,
                    stage.coeff * self.tau3,
                    &mut self.scratch,
                ),
            }
        }
        self.work.steps += 1;
        self.work.grad_evals += self.kicks_per_step;
        self.work.corrector_evals += self.correctors_per_step;
    }

    pub fn check(&self, st: &State) -> Result<()> {
        self.lattice.check_state(st)
    }

    pub fn advance(&mut self, st: &mut State, steps: u64) {
        for _ in 0..steps {
            self.step(st);
        }
    }
}

/// One step of `scheme` from `st` (convenience form; allocates).
pub fn step(scheme: &Scheme, lat: &Lattice, st: &State, tau: f64) -> Result<State> {
    let mut integ = Integrator::new(scheme, lat, tau)?;
    integ.check(st)?;
    let mut out = st.clone();
    integ.step(&mut out);
    Ok(out)
}

/// What the observer sees at each planned time.
#[derive(Debug)]
pub struct Observation<'s> {
    pub t: f64,
    pub state: &'s State,
    pub work: WorkCounter,
    /// Cumulative time spent in the stepping loop only.
    pub integration_time: Duration,
}

#[derive(Debug, Clone)]
pub struct EvolveOutcome {
    pub state: State,
    pub work: WorkCounter,
    pub integration_time: Duration,
    pub observer_time: Duration,
}

fn blow_up_check(st: &State, t: f64) -> Result<()> {
    let m = st.max_abs();
    if m > BLOW_UP_THRESHOLD || m.is_nan() {
        Err(Error::BlowUp { t, max_abs: m })
    } else {
        Ok(())
    }
}

/// Integrates `st0` through every time of `plan`, calling `observer` at each
/// one (including `t = 0`). Observer cost is timed separately from stepping.
pub fn evolve<F>(
    scheme: &Scheme,
    lat: &Lattice,
    st0: State,
    tau: f64,
    plan: &SamplingPlan,
    mut observer: F,
) -> Result<EvolveOutcome>
where
    F: FnMut(&Observation<'_>),
{
    if (plan.tau() - tau).abs() > 1e-15 * tau.abs() {
        return Err(Error::domain(format!(
            "sampling plan was snapped for tau={} but run uses tau={tau}",
            plan.tau()
        )));
    }
    let mut integ = Integrator::new(scheme, lat, tau)?;
    integ.check(&st0)?;
    let mut st = st0;
    let mut integration_time = Duration::ZERO;
    let mut observer_time = Duration::ZERO;
    let mut done = 0u64;
    for &target in plan.steps() {
        let start = Instant::now();
        while done < target {
            let chunk = (target - done).min(BLOW_UP_CHECK_INTERVAL);
            integ.advance(&mut st, chunk);
            done += chunk;
            blow_up_check(&st, done as f64 * tau)?;
        }
        integration_time += start.elapsed();

        let start = Instant::now();
        observer(&Observation {
            t: target as f64 * tau,
            state: &st,
            work: integ.work(),
            integration_time,
        });
        observer_time += start.elapsed();
    }
    Ok(EvolveOutcome {
        state: st,
        work: integ.work(),
        integration_time,
        observer_time,
    })
}
