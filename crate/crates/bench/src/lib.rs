//! Fixtures shared by the criterion benchmarks in `benches/`.

use kgsplit::{make_lattice, Integrator, Lattice, Scheme, State};

/// Protocol lattice (W = 4, seed 1) of `n` sites.
pub fn lattice(n: usize) -> Lattice {
    make_lattice(n, 4.0, 1).expect("valid lattice parameters")
}

/// A spread-out state: the single-site packet integrated for `t` time units
/// with `scheme` at step `tau`, so benchmarks do not time a mostly-zero chain.
pub fn warmed_state(scheme: &Scheme, lat: &Lattice, tau: f64, t: f64) -> State {
    let mut st = State::single_site(lat.n(), 0.4);
    let mut it = Integrator::new(scheme, lat, tau).expect("valid scheme");
    it.advance(&mut st, (t / tau).round() as u64);
    st
}
