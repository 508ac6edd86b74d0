//! Observation CSV: `t,log10_ree,log10_m2,p,wall_seconds,grad_evals`.

use std::io::{self, Write};

use kgsplit::format::fmt_f64;
use kgsplit::ObservationRecord;

pub const HEADER: &str = "t,log10_ree,log10_m2,p,wall_seconds,grad_evals";

/// Stand-in for `log10(0)`.
pub const LOG10_ZERO: f64 = -16.0;

pub fn log10_or_sentinel(x: f64) -> f64 {
    if x > 0.0 {
        x.log10()
    } else {
        LOG10_ZERO
    }
}

pub fn write_records(mut out: impl Write, records: &[ObservationRecord]) -> io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(r.t),
            fmt_f64(log10_or_sentinel(r.ree)),
            fmt_f64(log10_or_sentinel(r.m2)),
            fmt_f64(r.p),
            fmt_f64(r.wall_seconds),
            r.grad_evals
        )?;
    }
    out.flush()
}
