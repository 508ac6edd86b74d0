//! Splitting schemes as ordered sequences of exactly solvable flows.
//!
//! A scheme approximates the flow of `H = A + B` over one step `tau` by a
//! product of drifts (flow of `A`), kicks (flow of `B`) and optional corrector
//! kicks (flow of `{{A,B},B}`), each scaled by a stage coefficient.

use std::fmt;
use std::str::FromStr;

use crate::coefficients;
use crate::error::{Error, Result};

/// Tolerance used for the coefficient-sum and palindrome checks.
pub const STRUCTURE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageKind {
    /// Exact flow of the kinetic part `A = sum p^2 / 2`.
    DriftA,
    /// Exact flow of the potential part `B(q)`.
    KickB,
    /// Exact flow of the corrector Hamiltonian `{{A,B},B} = |grad B|^2`.
    CorrectorC,
}

impl StageKind {
    pub fn symbol(self) -> char {
        match self {
            StageKind::DriftA => 'A',
            StageKind::KickB => 'B',
            StageKind::CorrectorC => 'C',
        }
    }
}

/// One flow of a scheme. For `DriftA`/`KickB` the flow time is `coeff * tau`,
/// for `CorrectorC` it is `coeff * tau^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage {
    pub kind: StageKind,
    pub coeff: f64,
}

impl Stage {
    pub const fn new(kind: StageKind, coeff: f64) -> Self {
        Self { kind, coeff }
    }
    pub const fn a(coeff: f64) -> Self {
        Self::new(StageKind::DriftA, coeff)
    }
    pub const fn b(coeff: f64) -> Self {
        Self::new(StageKind::KickB, coeff)
    }
    pub const fn c(coeff: f64) -> Self {
        Self::new(StageKind::CorrectorC, coeff)
    }
}

/// Nominal accuracy of a scheme: a classical order, or a generalized order
/// `(s1, s2, ...)` meaning a global error `O(tau^s1 eps + tau^s2 eps^2 + ...)`
/// for `H = A + eps B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderTag {
    Classical(u32),
    Generalized(Vec<u32>),
}

impl OrderTag {
    /// The order actually observed when `B` is not small: the last entry of a
    /// generalized order.
    pub fn effective_order(&self) -> u32 {
        match self {
            OrderTag::Classical(k) => *k,
            OrderTag::Generalized(v) => v.last().copied().unwrap_or(0),
        }
    }
}

impl fmt::Display for OrderTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderTag::Classical(k) => write!(f, "{k}"),
            OrderTag::Generalized(v) => {
                let parts: Vec<String> = v.iter().map(u32::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// An immutable splitting scheme. Adjacent stages of the same kind are merged
/// on construction, so the stage list is always minimal.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    name: String,
    stages: Vec<Stage>,
    order: OrderTag,
}

impl Scheme {
    pub fn new(name: impl Into<String>, order: OrderTag, stages: impl IntoIterator<Item = Stage>) -> Self {
        Self {
            name: name.into(),
            stages: merge_adjacent(stages),
            order,
        }
    }

    /// Builds a palindromic scheme from its first half, including the middle stage.
    ///
    /// `symmetric("X", tag, &[a(x1), b(y1), a(x2)])` yields `A(x1) B(y1) A(x2) B(y1) A(x1)`.
    pub fn symmetric(name: impl Into<String>, order: OrderTag, half: &[Stage]) -> Self {
        let mirrored = half.iter().rev().skip(1).copied();
        let full: Vec<Stage> = half.iter().copied().chain(mirrored).collect();
        Self::new(name, order, full)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn order(&self) -> &OrderTag {
        &self.order
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn count(&self, kind: StageKind) -> usize {
        self.stages.iter().filter(|s| s.kind == kind).count()
    }

    pub fn coeff_sum(&self, kind: StageKind) -> f64 {
        self.stages
            .iter()
            .filter(|s| s.kind == kind)
            .map(|s| s.coeff)
            .sum()
    }

    pub fn coeffs(&self, kind: StageKind) -> Vec<f64> {
        self.stages
            .iter()
            .filter(|s| s.kind == kind)
            .map(|s| s.coeff)
            .collect()
    }

    pub fn has_corrector(&self) -> bool {
        self.count(StageKind::CorrectorC) > 0
    }

    /// Largest deviation from a palindrome of the drift/kick subsequence, or
    /// `None` when the kind pattern itself is not palindromic.
    pub fn palindrome_residual(&self) -> Option<f64> {
        palindrome_residual(
            self.stages
                .iter()
                .filter(|s| s.kind != StageKind::CorrectorC)
                .copied(),
        )
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self.palindrome_residual(), Some(r) if r <= STRUCTURE_TOL)
    }

    /// Compact textual form, e.g. `A(0.5) B(1) A(0.5)`.
    pub fn stage_string(&self) -> String {
        self.stages
            .iter()
            .map(|s| format!("{}({})", s.kind.symbol(), s.coeff))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn merge_adjacent(stages: impl IntoIterator<Item = Stage>) -> Vec<Stage> {
    let mut out: Vec<Stage> = Vec::new();
    for st in stages {
        match out.last_mut() {
            Some(last) if last.kind == st.kind => last.coeff += st.coeff,
            _ => out.push(st),
        }
    }
    out
}

fn palindrome_residual(stages: impl Iterator<Item = Stage>) -> Option<f64> {
    let seq: Vec<Stage> = merge_adjacent(stages);
    let mut worst: f64 = 0.0;
    for (x, y) in seq.iter().zip(seq.iter().rev()) {
        if x.kind != y.kind {
            return None;
        }
        worst = worst.max((x.coeff - y.coeff).abs());
    }
    Some(worst)
}

/// Outcome of a single structural check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Measured residual; infinite when the check fails structurally.
    pub residual: f64,
}

/// Result of [`validate`]: one entry per scheme invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub scheme: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} (residual {:e})", c.name, c.residual))
            .collect()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::InvalidScheme {
                name: self.scheme.clone(),
                reason: self.failures().join(", "),
            })
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.scheme)?;
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "  {mark} {:<20} residual {:e}", c.name, c.residual)?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of `scheme`. Never fails; inspect the report.
pub fn validate(scheme: &Scheme) -> ValidationReport {
    let a_res = (scheme.coeff_sum(StageKind::DriftA) - 1.0).abs();
    let b_res = (scheme.coeff_sum(StageKind::KickB) - 1.0).abs();
    let pal = scheme.palindrome_residual().unwrap_or(f64::INFINITY);
    let adjacent = scheme
        .stages
        .windows(2)
        .filter(|w| w[0].kind == w[1].kind)
        .count();
    let finite = scheme.stages.iter().all(|s| s.coeff.is_finite());
    let checks = vec![
        Check {
            name: "finite_coefficients",
            passed: finite,
            residual: if finite { 0.0 } else { f64::INFINITY },
        },
        Check {
            name: "drift_sum",
            passed: a_res <= STRUCTURE_TOL,
            residual: a_res,
        },
        Check {
            name: "kick_sum",
            passed: b_res <= STRUCTURE_TOL,
            residual: b_res,
        },
        Check {
            name: "palindrome",
            passed: pal <= STRUCTURE_TOL,
            residual: pal,
        },
        Check {
            name: "no_adjacent_repeats",
            passed: adjacent == 0,
            residual: adjacent as f64,
        },
    ];
    ValidationReport {
        scheme: scheme.name.clone(),
        checks,
    }
}

/// Triple-jump weights `(a1, a0)` with `2 a1 + a0 = 1`.
pub fn yoshida_weights() -> (f64, f64) {
    let cbrt2 = 2f64.cbrt();
    let a1 = 1.0 / (2.0 - cbrt2);
    let a0 = -cbrt2 / (2.0 - cbrt2);
    (a1, a0)
}

/// Composes a symmetric second-order scheme as `S(a1 tau) S(a0 tau) S(a1 tau)`,
/// giving a fourth-order scheme. Stages meeting at the seams are merged.
pub fn yoshida_compose(s2: &Scheme) -> Result<Scheme> {
    let fail = |reason: &str| Error::Composition {
        name: s2.name.clone(),
        reason: reason.to_string(),
    };
    if s2.has_corrector() {
        return Err(fail("corrector stages cannot be composed"));
    }
    if !s2.is_symmetric() {
        return Err(fail("scheme is not symmetric"));
    }
    if s2.order.effective_order() != 2 {
        return Err(fail("composition expects a second-order scheme"));
    }
    let (a1, a0) = yoshida_weights();
    let scaled = |w: f64| s2.stages.iter().map(move |s| Stage::new(s.kind, s.coeff * w));
    let stages: Vec<Stage> = scaled(a1).chain(scaled(a0)).chain(scaled(a1)).collect();
    Ok(Scheme::new(
        format!("{}Y4", s2.name),
        OrderTag::Classical(4),
        stages,
    ))
}

/// Names accepted by [`catalog_scheme`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeName {
    Lf,
    Saba2,
    Sbab2,
    Saba2Wc,
    Sbab2Wc,
    Saba2Y4,
    Sbab2Y4,
    Sz4,
    Fro4,
    Aba82,
    Aba864,
    Abah864,
}

impl SchemeName {
    pub const ALL: [SchemeName; 12] = [
        SchemeName::Lf,
        SchemeName::Saba2,
        SchemeName::Sbab2,
        SchemeName::Saba2Wc,
        SchemeName::Sbab2Wc,
        SchemeName::Saba2Y4,
        SchemeName::Sbab2Y4,
        SchemeName::Sz4,
        SchemeName::Fro4,
        SchemeName::Aba82,
        SchemeName::Aba864,
        SchemeName::Abah864,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeName::Lf => "LF",
            SchemeName::Saba2 => "SABA2",
            SchemeName::Sbab2 => "SBAB2",
            SchemeName::Saba2Wc => "SABA2wc",
            SchemeName::Sbab2Wc => "SBAB2wc",
            SchemeName::Saba2Y4 => "SABA2Y4",
            SchemeName::Sbab2Y4 => "SBAB2Y4",
            SchemeName::Sz4 => "Sz4",
            SchemeName::Fro4 => "FRo4",
            SchemeName::Aba82 => "ABA82",
            SchemeName::Aba864 => "ABA864",
            SchemeName::Abah864 => "ABAH864",
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.map(Self::as_str).join(", ")
    }
}

impl fmt::Display for SchemeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownScheme {
                name: s.to_string(),
                valid: Self::valid_names(),
            })
    }
}

/// Looks up a scheme by name, e.g. `"SABA2"`.
pub fn catalog_scheme(name: &str) -> Result<Scheme> {
    Ok(build(name.parse()?))
}

/// All catalog schemes in catalog order.
pub fn catalog() -> Vec<Scheme> {
    SchemeName::ALL.into_iter().map(build).collect()
}

pub fn build(name: SchemeName) -> Scheme {
    use coefficients as k;
    let n = name.as_str();
    match name {
        SchemeName::Lf => Scheme::symmetric(n, OrderTag::Classical(2), &[Stage::a(0.5), Stage::b(1.0)]),
        SchemeName::Saba2 => {
            let (c1, c2, d1) = k::saba2();
            Scheme::symmetric(
                n,
                OrderTag::Generalized(vec![4, 2]),
                &[Stage::a(c1), Stage::b(d1), Stage::a(c2)],
            )
        }
        SchemeName::Sbab2 => {
            let (c1, c2, d1) = k::sbab2();
            Scheme::symmetric(
                n,
                OrderTag::Generalized(vec![4, 2]),
                &[Stage::b(c1), Stage::a(d1), Stage::b(c2)],
            )
        }
        SchemeName::Saba2Wc => with_corrector(build(SchemeName::Saba2), k::saba2_corrector(), n),
        SchemeName::Sbab2Wc => with_corrector(build(SchemeName::Sbab2), k::sbab2_corrector(), n),
        SchemeName::Saba2Y4 => compose(SchemeName::Saba2, n),
        SchemeName::Sbab2Y4 => compose(SchemeName::Sbab2, n),
        SchemeName::Sz4 => {
            // written out rather than composed, so that composing LF can be
            // checked against it
            let (w1, w0) = k::sz4_weights();
            Scheme::symmetric(
                n,
                OrderTag::Classical(4),
                &[
                    Stage::a(w1 / 2.0),
                    Stage::b(w1),
                    Stage::a((w1 + w0) / 2.0),
                    Stage::b(w0),
                ],
            )
        }
        SchemeName::Fro4 => {
            let theta = k::forest_ruth_theta();
            Scheme::symmetric(
                n,
                OrderTag::Classical(4),
                &[
                    Stage::a(theta / 2.0),
                    Stage::b(theta),
                    Stage::a((1.0 - theta) / 2.0),
                    Stage::b(1.0 - 2.0 * theta),
                ],
            )
        }
        SchemeName::Aba82 => from_table(n, OrderTag::Generalized(vec![8, 2]), &k::ABA82),
        SchemeName::Aba864 => from_table(n, OrderTag::Generalized(vec![8, 6, 4]), &k::ABA864),
        SchemeName::Abah864 => from_table(n, OrderTag::Generalized(vec![8, 6, 4]), &k::ABAH864),
    }
}

fn compose(base: SchemeName, name: &str) -> Scheme {
    yoshida_compose(&build(base))
        .expect("catalog base schemes are symmetric and second order")
        .with_name(name)
}

/// `C S C` with `C` the corrector flow for time `-c/2 * tau^3`.
fn with_corrector(base: Scheme, c: f64, name: &str) -> Scheme {
    let corr = Stage::c(-c / 2.0);
    let stages: Vec<Stage> = std::iter::once(corr)
        .chain(base.stages.iter().copied())
        .chain(std::iter::once(corr))
        .collect();
    Scheme::new(name, OrderTag::Classical(4), stages)
}

fn from_table(name: &str, order: OrderTag, table: &coefficients::AbaTable) -> Scheme {
    let mut half = Vec::with_capacity(table.a.len() + table.b.len());
    for (i, &a) in table.a.iter().enumerate() {
        half.push(Stage::a(a));
        if let Some(&b) = table.b.get(i) {
            half.push(Stage::b(b));
        }
    }
    Scheme::symmetric(name, order, &half)
}
