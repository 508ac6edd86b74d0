//! Wave-packet diagnostics computed from the normalized site-energy distribution.

use crate::error::{Error, Result};
use crate::lattice::{Lattice, State};

/// Diagnostics of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    /// `|E_t - E_0| / E_0`.
    pub ree: f64,
    /// Energy-weighted variance of the site label.
    pub m2: f64,
    /// Participation number `1 / sum (h_i/E_t)^2`.
    pub p: f64,
    /// Energy-weighted mean site label (one-based).
    pub ibar: f64,
    /// `E_t = sum h_i`.
    pub energy: f64,
}

/// Moments of a site-energy distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub total: f64,
    pub ibar: f64,
    pub m2: f64,
    pub p: f64,
}

/// Moments of `h` with site labels `1..=N`.
pub fn moments(h: &[f64]) -> Result<Moments> {
    let total: f64 = h.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::DegenerateDistribution(total));
    }
    let mut ibar = 0.0;
    let mut sq = 0.0;
    for (i, &e) in h.iter().enumerate() {
        let w = e / total;
        ibar += (i + 1) as f64 * w;
        sq += w * w;
    }
    let m2 = h
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let d = (i + 1) as f64 - ibar;
            d * d * (e / total)
        })
        .sum();
    Ok(Moments {
        total,
        ibar,
        m2,
        p: 1.0 / sq,
    })
}

/// Computes all diagnostics of `st` relative to the initial energy `e0`.
pub fn diagnostics(lat: &Lattice, st: &State, e0: f64, t: f64) -> Result<Diagnostics> {
    let h = lat.site_energies(st)?;
    diagnostics_from_energies(&h, e0, t)
}

pub fn diagnostics_from_energies(h: &[f64], e0: f64, t: f64) -> Result<Diagnostics> {
    if !(e0 > 0.0) {
        return Err(Error::domain(format!("initial energy must be positive, got {e0}")));
    }
    let m = moments(h)?;
    Ok(Diagnostics {
        t,
        ree: ((m.total - e0) / e0).abs(),
        m2: m.m2,
        p: m.p,
        ibar: m.ibar,
        energy: m.total,
    })
}

/// Reuses one buffer for repeated diagnostics on the same lattice.
#[derive(Debug)]
pub struct DiagnosticsProbe<'a> {
    lattice: &'a Lattice,
    e0: f64,
    buf: Vec<f64>,
}

impl<'a> DiagnosticsProbe<'a> {
    pub fn new(lattice: &'a Lattice, e0: f64) -> Self {
        Self {
            lattice,
            e0,
            buf: vec![0.0; lattice.n()],
        }
    }

    pub fn measure(&mut self, st: &State, t: f64) -> Result<Diagnostics> {
        self.lattice.check_state(st)?;
        self.lattice.site_energies_into(st, &mut self.buf);
        diagnostics_from_energies(&self.buf, self.e0, t)
    }
}
