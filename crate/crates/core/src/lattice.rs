//! The one-dimensional disordered quartic Klein-Gordon chain
//!
//! ```text
//! H = sum_i p_i^2/2 + eps_i q_i^2/2 + q_i^4/4 + (q_{i+1} - q_i)^2 / (2W)
//! ```
//!
//! with fixed ends `q_0 = q_{N+1} = 0`, split as `H = A(p) + B(q)`. All three
//! flows used by the integrators (drift, kick, corrector kick) are exact shear
//! maps.

use std::io::{BufRead, Write};

use rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::format::fmt_f64;

pub const EPS_MIN: f64 = 0.5;
pub const EPS_MAX: f64 = 1.5;

/// One disorder realization.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    eps: Vec<f64>,
    w: f64,
    seed: Option<u64>,
    /// Global multiplier on the potential part `B`. Always 1 for physical runs.
    scale: f64,
}

/// Generalized positions and momenta of every site.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl State {
    pub fn zeros(n: usize) -> Self {
        Self {
            q: vec![0.0; n],
            p: vec![0.0; n],
        }
    }

    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                got: p.len(),
            });
        }
        Ok(Self { q, p })
    }

    /// Zero displacement everywhere, all energy `energy` as momentum on the central site.
    pub fn single_site(n: usize, energy: f64) -> Self {
        let mut st = Self::zeros(n);
        if n > 0 {
            st.p[center_index(n)] = (2.0 * energy).sqrt();
        }
        st
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().chain(&self.p).all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.q
            .iter()
            .chain(&self.p)
            .fold(0.0_f64, |m, x| if x.abs() > m || x.is_nan() { x.abs() } else { m })
    }

    /// Exact flow of `A = sum p^2/2` for time `s`: `q <- q + s p`.
    pub fn drift(&mut self, s: f64) {
        for (q, p) in self.q.iter_mut().zip(&self.p) {
            *q += s * p;
        }
    }
}

/// Zero-based index of the central site, `ceil(N/2)` in one-based labels.
pub fn center_index(n: usize) -> usize {
    n.div_ceil(2).saturating_sub(1)
}

/// Free-function form of [`State::drift`].
pub fn flow_a(st: &mut State, s: f64) {
    st.drift(s);
}

/// Draws `n` potential strengths uniformly on `[1/2, 3/2)` from a ChaCha8 stream
/// seeded with `seed`. The mapping from seed to values is fixed: 53 high bits of
/// each 64-bit output give a uniform variate on `[0, 1)`.
pub fn make_lattice(n: usize, w: f64, seed: u64) -> Result<Lattice> {
    check_params(n, w)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = (0..n)
        .map(|_| EPS_MIN + (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
        .collect();
    Ok(Lattice {
        eps,
        w,
        seed: Some(seed),
        scale: 1.0,
    })
}

fn check_params(n: usize, w: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("lattice needs at least one site"));
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::domain(format!("coupling W must be positive, got {w}")));
    }
    Ok(())
}

impl Lattice {
    /// A lattice with explicit potential strengths, each in `[1/2, 3/2]`.
    pub fn from_eps(eps: Vec<f64>, w: f64) -> Result<Self> {
        check_params(eps.len(), w)?;
        if let Some((i, e)) = eps
            .iter()
            .enumerate()
            .find(|(_, e)| !(EPS_MIN..=EPS_MAX).contains(*e))
        {
            return Err(Error::domain(format!(
                "eps[{i}] = {e} outside [{EPS_MIN}, {EPS_MAX}]"
            )));
        }
        Ok(Self {
            eps,
            w,
            seed: None,
            scale: 1.0,
        })
    }

    /// Same realization with the potential part multiplied by `scale`, i.e.
    /// `H = A + scale * B`.
    pub fn with_potential_scale(&self, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::domain(format!("potential scale must be positive, got {scale}")));
        }
        Ok(Self {
            scale,
            ..self.clone()
        })
    }

    pub fn n(&self) -> usize {
        self.eps.len()
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn potential_scale(&self) -> f64 {
        self.scale
    }

    pub fn check_state(&self, st: &State) -> Result<()> {
        self.check_len(st.q.len())?;
        self.check_len(st.p.len())
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got == self.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n(),
                got,
            })
        }
    }

    /// Potential part `B(q)`, bond sum over all `N + 1` bonds.
    pub fn potential(&self, q: &[f64]) -> Result<f64> {
        self.check_len(q.len())?;
        let inv_2w = 0.5 / self.w;
        let mut onsite = 0.0;
        let mut bonds = 0.0;
        let mut prev = 0.0;
        for (&e, &x) in self.eps.iter().zip(q) {
            let x2 = x * x;
            onsite += 0.5 * e * x2 + 0.25 * x2 * x2;
            bonds += (x - prev) * (x - prev);
            prev = x;
        }
        bonds += prev * prev;
        Ok(self.scale * (onsite + inv_2w * bonds))
    }

    pub fn total_energy(&self, st: &State) -> Result<f64> {
        self.check_state(st)?;
        let kinetic: f64 = st.p.iter().map(|p| 0.5 * p * p).sum();
        Ok(kinetic + self.potential(&st.q)?)
    }

    /// `dB/dq_i = eps_i q_i + q_i^3 + (2 q_i - q_{i+1} - q_{i-1}) / W`.
    pub fn grad_b(&self, q: &[f64]) -> Result<Vec<f64>> {
        self.check_len(q.len())?;
        let mut g = vec![0.0; q.len()];
        self.grad_into(q, &mut g);
        Ok(g)
    }

    pub(crate) fn grad_into(&self, q: &[f64], out: &mut [f64]) {
        let inv_w = 1.0 / self.w;
        let n = q.len();
        let mut prev = 0.0;
        for i in 0..n {
            let x = q[i];
            let next = if i + 1 < n { q[i + 1] } else { 0.0 };
            out[i] = self.scale * (self.eps[i] * x + x * x * x + inv_w * (2.0 * x - next - prev));
            prev = x;
        }
    }

    /// `p <- p - s grad B(q)` without a length check.
    pub(crate) fn kick(&self, q: &[f64], p: &mut [f64], s: f64) {
        let inv_w = 1.0 / self.w;
        let ss = s * self.scale;
        let n = q.len();
        let mut prev = 0.0;
        for i in 0..n {
            let x = q[i];
            let next = if i + 1 < n { q[i + 1] } else { 0.0 };
            p[i] -= ss * (self.eps[i] * x + x * x * x + inv_w * (2.0 * x - next - prev));
            prev = x;
        }
    }

    /// Exact flow of `B` for time `s`.
    pub fn flow_b(&self, st: &mut State, s: f64) -> Result<()> {
        self.check_state(st)?;
        self.kick(&st.q, &mut st.p, s);
        Ok(())
    }

    /// `G(q) = {{A,B},B} = sum_j (dB/dq_j)^2`.
    pub fn corrector_potential(&self, q: &[f64]) -> Result<f64> {
        Ok(self.grad_b(q)?.iter().map(|g| g * g).sum())
    }

    /// `grad G = 2 Hess(B) grad B`, with the tridiagonal Hessian applied in place.
    pub fn corrector_gradient(&self, q: &[f64]) -> Result<Vec<f64>> {
        self.check_len(q.len())?;
        let mut g = vec![0.0; q.len()];
        self.grad_into(q, &mut g);
        let mut out = vec![0.0; q.len()];
        self.hess_times(q, &g, |i, hg| out[i] = 2.0 * hg);
        Ok(out)
    }

    fn hess_times(&self, q: &[f64], v: &[f64], mut sink: impl FnMut(usize, f64)) {
        let inv_w = 1.0 / self.w;
        let n = q.len();
        let mut prev = 0.0;
        for i in 0..n {
            let next = if i + 1 < n { v[i + 1] } else { 0.0 };
            let diag = self.eps[i] + 3.0 * q[i] * q[i] + 2.0 * inv_w;
            sink(i, self.scale * (diag * v[i] - inv_w * (next + prev)));
            prev = v[i];
        }
    }

    /// `p <- p - s grad G(q)` using `scratch` (length N) for the gradient of `B`.
    pub(crate) fn corrector_kick(&self, q: &[f64], p: &mut [f64], s: f64, scratch: &mut [f64]) {
        self.grad_into(q, scratch);
        let two_s = 2.0 * s;
        self.hess_times(q, scratch, |i, hg| p[i] -= two_s * hg);
    }

    /// Exact flow of the corrector Hamiltonian `G` for time `s` (the caller
    /// passes `coeff * tau^3`).
    pub fn flow_corrector(&self, st: &mut State, s: f64) -> Result<()> {
        self.check_state(st)?;
        let mut scratch = vec![0.0; self.n()];
        self.corrector_kick(&st.q, &mut st.p, s, &mut scratch);
        Ok(())
    }

    /// Per-site energies. Each interior bond is shared equally between its two
    /// sites; the two boundary bonds belong entirely to the end sites, so the
    /// entries sum to the total energy.
    pub fn site_energies(&self, st: &State) -> Result<Vec<f64>> {
        self.check_state(st)?;
        let mut h = vec![0.0; self.n()];
        self.site_energies_into(st, &mut h);
        Ok(h)
    }

    pub(crate) fn site_energies_into(&self, st: &State, h: &mut [f64]) {
        let n = self.n();
        let inv_4w = 0.25 / self.w;
        for (i, hi) in h.iter_mut().enumerate().take(n) {
            let x = st.q[i];
            let x2 = x * x;
            let left = if i == 0 { 2.0 * x2 } else { (x - st.q[i - 1]).powi(2) };
            let right = if i + 1 == n { 2.0 * x2 } else { (st.q[i + 1] - x).powi(2) };
            *hi = 0.5 * st.p[i] * st.p[i]
                + self.scale * (0.5 * self.eps[i] * x2 + 0.25 * x2 * x2 + inv_4w * (left + right));
        }
    }

    /// Writes the realization as text: a commented header with `n`, `w`, `seed`
    /// (and `scale` if not 1), then one potential strength per line.
    pub fn write_to(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "# kg-lattice")?;
        writeln!(out, "# n = {}", self.n())?;
        writeln!(out, "# w = {}", fmt_f64(self.w))?;
        match self.seed {
            Some(s) => writeln!(out, "# seed = {s}")?,
            None => writeln!(out, "# seed = none")?,
        }
        if self.scale != 1.0 {
            writeln!(out, "# scale = {}", fmt_f64(self.scale))?;
        }
        for e in &self.eps {
            writeln!(out, "{}", fmt_f64(*e))?;
        }
        Ok(())
    }

    pub fn read_from(input: impl BufRead) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut w: Option<f64> = None;
        let mut seed = None;
        let mut scale = 1.0;
        let mut eps = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let bad = |reason: String| Error::LatticeFormat { line: lineno, reason };
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('#') {
                let Some((key, value)) = rest.split_once('=') else {
                    continue;
                };
                let value = value.trim();
                match key.trim() {
                    "n" => n = Some(value.parse().map_err(|e| bad(format!("n: {e}")))?),
                    "w" => w = Some(value.parse().map_err(|e| bad(format!("w: {e}")))?),
                    "seed" if value == "none" => seed = None,
                    "seed" => seed = Some(value.parse().map_err(|e| bad(format!("seed: {e}")))?),
                    "scale" => scale = value.parse().map_err(|e| bad(format!("scale: {e}")))?,
                    _ => {}
                }
                continue;
            }
            eps.push(
                trimmed
                    .parse::<f64>()
                    .map_err(|e| bad(format!("potential strength: {e}")))?,
            );
        }
        let w = w.ok_or_else(|| Error::LatticeFormat {
            line: 0,
            reason: "missing `# w = ...` header".into(),
        })?;
        if let Some(n) = n {
            if n != eps.len() {
                return Err(Error::LatticeFormat {
                    line: 0,
                    reason: format!("header says n = {n} but found {} values", eps.len()),
                });
            }
        }
        let mut lat = Lattice::from_eps(eps, w)?;
        lat.seed = seed;
        if scale != 1.0 {
            lat = lat.with_potential_scale(scale)?;
        }
        Ok(lat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::RngCore;

    fn random_state(n: usize, amp: f64, seed: u64) -> State {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut u = || amp * ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0);
        let q = (0..n).map(|_| u()).collect();
        let p = (0..n).map(|_| u()).collect();
        State { q, p }
    }

    fn one_site() -> Lattice {
        Lattice::from_eps(vec![1.0], 4.0).unwrap()
    }

    #[test]
    fn lattice_is_deterministic_and_in_range() {
        let a = make_lattice(1000, 4.0, 7).unwrap();
        let b = make_lattice(1000, 4.0, 7).unwrap();
        assert_eq!(a.eps(), b.eps());
        assert!(a.eps().iter().all(|e| (0.5..=1.5).contains(e)));
        let c = make_lattice(1000, 4.0, 8).unwrap();
        assert_ne!(a.eps(), c.eps());
    }

    #[test]
    fn lattice_mean_is_one() {
        let lat = make_lattice(100_000, 4.0, 1).unwrap();
        let mean = lat.eps().iter().sum::<f64>() / lat.n() as f64;
        assert!((0.99..=1.01).contains(&mean), "{mean}");
    }

    #[test]
    fn lattice_rejects_bad_parameters() {
        assert!(matches!(make_lattice(0, 4.0, 1), Err(Error::Domain(_))));
        assert!(matches!(make_lattice(10, 0.0, 1), Err(Error::Domain(_))));
        assert!(matches!(make_lattice(10, -1.0, 1), Err(Error::Domain(_))));
        assert!(Lattice::from_eps(vec![0.4], 4.0).is_err());
    }

    #[test]
    fn energy_examples() {
        let lat = one_site();
        assert_eq!(lat.total_energy(&State::zeros(1)).unwrap(), 0.0);
        let st = State::new(vec![0.0], vec![0.8f64.sqrt()]).unwrap();
        assert!((lat.total_energy(&st).unwrap() - 0.4).abs() < 1e-15);

        let lat = Lattice::from_eps(vec![1.0, 1.0], 1.0).unwrap();
        let st = State::new(vec![1.0, -1.0], vec![0.0, 0.0]).unwrap();
        assert!((lat.total_energy(&st).unwrap() - 4.5).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let lat = make_lattice(4, 4.0, 1).unwrap();
        let st = State::zeros(3);
        assert!(matches!(
            lat.total_energy(&st),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        ));
        assert!(lat.grad_b(&[0.0; 5]).is_err());
        assert!(lat.clone().flow_b(&mut State::zeros(2), 0.1).is_err());
        assert!(lat.flow_corrector(&mut State::zeros(2), 0.1).is_err());
        assert!(lat.site_energies(&st).is_err());
    }

    #[test]
    fn gradient_examples() {
        let lat = one_site();
        assert_eq!(lat.grad_b(&[0.0]).unwrap(), vec![0.0]);
        assert!((lat.grad_b(&[1.0]).unwrap()[0] - 2.5).abs() < 1e-15);
    }

    #[test]
    fn flow_examples() {
        let mut st = State::new(vec![0.0], vec![1.0]).unwrap();
        flow_a(&mut st, 0.5);
        assert_eq!(st.q, vec![0.5]);
        assert_eq!(st.p, vec![1.0]);

        let lat = one_site();
        let mut st = State::new(vec![1.0], vec![0.0]).unwrap();
        lat.flow_b(&mut st, 0.1).unwrap();
        assert!((st.p[0] + 0.25).abs() < 1e-15);

        let mut st = State::new(vec![1.0], vec![0.0]).unwrap();
        lat.flow_corrector(&mut st, 0.01).unwrap();
        assert!((st.p[0] + 0.225).abs() < 1e-14, "{}", st.p[0]);

        let mut st = State::new(vec![0.0; 3], vec![0.3, -0.2, 0.1]).unwrap();
        let lat = make_lattice(3, 4.0, 2).unwrap();
        let before = st.clone();
        lat.flow_b(&mut st, 0.7).unwrap();
        lat.flow_corrector(&mut st, 0.7).unwrap();
        assert_eq!(st, before);
    }

    #[test]
    fn flows_reverse_exactly() {
        let lat = make_lattice(16, 4.0, 3).unwrap();
        let st0 = random_state(16, 0.8, 11);
        let mut st = st0.clone();
        flow_a(&mut st, 0.37);
        flow_a(&mut st, -0.37);
        lat.flow_b(&mut st, 0.37).unwrap();
        lat.flow_b(&mut st, -0.37).unwrap();
        lat.flow_corrector(&mut st, 0.05).unwrap();
        lat.flow_corrector(&mut st, -0.05).unwrap();
        for (x, y) in st.q.iter().chain(&st.p).zip(st0.q.iter().chain(&st0.p)) {
            assert!((x - y).abs() <= 1e-14, "{x} {y}");
        }
    }

    fn central_diff(f: impl Fn(&[f64]) -> f64, q: &[f64], i: usize, h: f64) -> f64 {
        let mut qp = q.to_vec();
        let mut qm = q.to_vec();
        qp[i] += h;
        qm[i] -= h;
        (f(&qp) - f(&qm)) / (2.0 * h)
    }

    #[test]
    fn gradients_match_finite_differences() {
        for seed in 0..5 {
            let lat = make_lattice(8, 4.0, seed).unwrap();
            let q = random_state(8, 1.0, 100 + seed).q;
            let g = lat.grad_b(&q).unwrap();
            let gg = lat.corrector_gradient(&q).unwrap();
            let scale_g = g.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            let scale_gg = gg.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            for i in 0..8 {
                let fd = central_diff(|x| lat.potential(x).unwrap(), &q, i, 1e-5);
                assert!((fd - g[i]).abs() <= 1e-6 * scale_g, "grad B [{i}] {fd} vs {}", g[i]);
                let fd = central_diff(|x| lat.corrector_potential(x).unwrap(), &q, i, 1e-5);
                assert!((fd - gg[i]).abs() <= 1e-6 * scale_gg, "grad G [{i}] {fd} vs {}", gg[i]);
            }
        }
    }

    #[test]
    fn site_energy_examples() {
        let lat = make_lattice(11, 4.0, 5).unwrap();
        let st = State::single_site(11, 0.4);
        let h = lat.site_energies(&st).unwrap();
        assert_eq!(center_index(11), 5);
        assert!((h[5] - 0.4).abs() < 1e-15);
        assert!(h.iter().enumerate().all(|(i, x)| i == 5 || *x == 0.0));
        assert!(lat.site_energies(&State::zeros(11)).unwrap().iter().all(|x| *x == 0.0));
    }

    #[test]
    fn center_convention() {
        assert_eq!(center_index(1000), 499);
        assert_eq!(center_index(1), 0);
        assert_eq!(center_index(2), 0);
        assert_eq!(center_index(3), 1);
    }

    #[test]
    fn scaled_potential() {
        let lat = make_lattice(6, 4.0, 9).unwrap();
        let half = lat.with_potential_scale(0.5).unwrap();
        let st = random_state(6, 0.5, 4);
        let b = lat.potential(&st.q).unwrap();
        assert!((half.potential(&st.q).unwrap() - 0.5 * b).abs() < 1e-15);
        let sum: f64 = half.site_energies(&st).unwrap().iter().sum();
        assert!((sum - half.total_energy(&st).unwrap()).abs() < 1e-14);
        assert!(lat.with_potential_scale(0.0).is_err());
    }

    #[test]
    fn lattice_file_roundtrip() {
        let lat = make_lattice(25, 3.5, 123).unwrap();
        let mut buf = Vec::new();
        lat.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("# seed = 123"));
        let back = Lattice::read_from(&buf[..]).unwrap();
        assert_eq!(back, lat);
    }

    #[test]
    fn lattice_file_errors() {
        let text = "# w = 4\n# n = 3\n1.0\n1.2\n";
        assert!(matches!(
            Lattice::read_from(text.as_bytes()),
            Err(Error::LatticeFormat { .. })
        ));
        let text = "# w = 4\n1.0\nabc\n";
        assert!(matches!(
            Lattice::read_from(text.as_bytes()),
            Err(Error::LatticeFormat { line: 3, .. })
        ));
        let text = "1.0\n";
        assert!(Lattice::read_from(text.as_bytes()).is_err());
    }
}
