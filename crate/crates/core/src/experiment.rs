//! Symmetric perturbations of the driving Hamiltonian, bulk post-selection
//! and failure-probability scaling fits.
//!
//! A run evolves `|+⟩^⊗n` under the perturbed Hamiltonian for the lattice's
//! pump time, measures every bulk qubit in the X basis and accepts a branch
//! when each symmetry generator sees an even number of defect outcomes on
//! its bulk support. A defect is an outcome that differs from the
//! unperturbed pump: `|−⟩` normally, `|+⟩` when the pump flips the bulk.
//! Branch probabilities are summed exactly; a seeded sampled estimate is
//! reported alongside.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::circuit::Gate;
use crate::compiler::{compile_pump, CompileError};
use crate::lattice::{build, Family, HamTerm, LatticeError, LatticeSpec};
use crate::pauli::PauliOperator;
use crate::statevector::{
    DenseState, DiagonalHamiltonian, Hamiltonian, StateError, DEFAULT_QUBIT_CAP,
};
use crate::tableau::{Membership, StabilizerTableau};
use crate::verify::{cluster_stabilizer, term_commutes_with_flip};

/// Truncation tolerance for non-diagonal evolution.
pub const EVOLVE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("perturbation term {0} breaks a symmetry")]
    SymmetryBroken(String),
    #[error("unperturbed pump does not prepare the target: {0}")]
    NotAPump(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, ExperimentError::State(StateError::OverCap { .. }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PerturbationKind {
    /// `ε Σ_plaquettes (Z₁Z₃ + Z₂Z₄)`
    #[serde(rename = "Z_TYPE")]
    ZType,
    /// `ε Σ_i X_i`
    #[serde(rename = "X_TYPE")]
    XType,
}

impl PerturbationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PerturbationKind::ZType => "Z_TYPE",
            PerturbationKind::XType => "X_TYPE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub kind: PerturbationKind,
    pub epsilon: f64,
    /// When set, each perturbation term gets an independent random sign.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disorder_seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcceptRule {
    /// Even defect count on the bulk support of every symmetry generator.
    #[default]
    PerGenerator,
    /// Even total defect count over the bulk.
    GlobalParity,
}

impl AcceptRule {
    pub fn as_str(self) -> &'static str {
        match self {
            AcceptRule::PerGenerator => "per_generator",
            AcceptRule::GlobalParity => "global_parity",
        }
    }
}

/// Driving terms plus the symmetric perturbation.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedHamiltonian {
    pub base: Vec<HamTerm>,
    /// `coef · Z_a Z_b`
    pub zz: Vec<([usize; 2], f64)>,
    /// `coef · X_q`
    pub x_fields: Vec<(usize, f64)>,
    pub time: f64,
}

/// The two diagonals of every four-site CZ plaquette.
fn plaquette_diagonals(spec: &LatticeSpec) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for term in &spec.terms {
        let HamTerm::CzProduct { pairs, .. } = term else {
            continue;
        };
        let sites = term.sites();
        if pairs.len() != 4 || sites.len() != 4 {
            continue;
        }
        for (x, &a) in sites.iter().enumerate() {
            for &b in &sites[x + 1..] {
                if !pairs
                    .iter()
                    .any(|p| (p[0] == a && p[1] == b) || (p[0] == b && p[1] == a))
                {
                    out.push([a, b]);
                }
            }
        }
    }
    out
}

pub fn perturbed_hamiltonian(
    spec: &LatticeSpec,
    p: &PerturbationSpec,
) -> Result<PerturbedHamiltonian, ExperimentError> {
    if !(p.epsilon >= 0.0 && p.epsilon.is_finite()) {
        return Err(ExperimentError::BadParameter(format!(
            "epsilon must be finite and >= 0, got {}",
            p.epsilon
        )));
    }
    let mut rng = p.disorder_seed.map(ChaCha8Rng::seed_from_u64);
    let mut coef = || match rng.as_mut().map(|r| r.gen::<bool>()) {
        Some(true) => -p.epsilon,
        _ => p.epsilon,
    };
    let n = spec.num_sites();
    let flips: Vec<PauliOperator> = spec
        .symmetries
        .iter()
        .map(|s| PauliOperator::x_on(n, s.support.iter().copied()))
        .collect();
    let (mut zz, mut x_fields) = (Vec::new(), Vec::new());
    match p.kind {
        PerturbationKind::ZType => {
            if !matches!(spec.family, Family::Square { .. }) {
                return Err(ExperimentError::Unsupported(format!(
                    "Z_TYPE perturbation is defined for square lattices, not {}",
                    spec.family.name()
                )));
            }
            for d in plaquette_diagonals(spec) {
                let as_term = HamTerm::z_product(d.to_vec(), 1);
                if let Some(f) = flips
                    .iter()
                    .position(|f| !term_commutes_with_flip(&as_term, f))
                {
                    return Err(ExperimentError::SymmetryBroken(format!(
                        "Z{} Z{} vs {}",
                        d[0], d[1], spec.symmetries[f].label
                    )));
                }
                zz.push((d, coef()));
            }
        }
        PerturbationKind::XType => {
            for q in 0..n {
                x_fields.push((q, coef()));
            }
        }
    }
    Ok(PerturbedHamiltonian {
        base: spec.terms.clone(),
        zz,
        x_fields,
        time: spec.family.pump_time(),
    })
}

impl PerturbedHamiltonian {
    /// Dense form. Driving terms are weighted so that evolving for `time`
    /// applies each term for its own angle.
    pub fn to_dense(&self, n: usize, cap: usize) -> Result<Hamiltonian, StateError> {
        let mut diag = DiagonalHamiltonian::zero(n, cap)?;
        for t in &self.base {
            diag.add_term(t, t.angle() / self.time)?;
        }
        for &(d, c) in &self.zz {
            diag.add_z_product(&d, c)?;
        }
        Ok(Hamiltonian {
            diag,
            x_fields: self
                .x_fields
                .iter()
                .copied()
                .filter(|&(_, c)| c != 0.0)
                .collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub accept_rule: AcceptRule,
    pub cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            samples: 10_000,
            accept_rule: AcceptRule::PerGenerator,
            cap: DEFAULT_QUBIT_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryExpectation {
    pub label: String,
    /// `⟨X(support ∩ boundary)⟩` on the accepted branches, with the sign of
    /// the unperturbed outcome on the bulk part divided out.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub lattice: String,
    pub nx: usize,
    pub ny: usize,
    pub n_boundary: usize,
    pub kind: PerturbationKind,
    pub epsilon: f64,
    pub seed: u64,
    pub p_fail_exact: f64,
    pub p_fail_sampled: f64,
    pub samples: usize,
    pub fidelity_post: f64,
    pub accept_rule: AcceptRule,
    pub accepted_parity_rule: String,
    /// Probability mass by number of bulk defects.
    pub defect_histogram: Vec<f64>,
    pub boundary_symmetry: Vec<SymmetryExpectation>,
}

impl RunResult {
    /// Smallest accepted-branch boundary symmetry expectation, 1 if none.
    pub fn min_boundary_symmetry(&self) -> f64 {
        self.boundary_symmetry
            .iter()
            .map(|s| s.value)
            .fold(1.0, f64::min)
    }
}

/// Boundary cluster stabilizers with the signs produced by the unperturbed
/// pump.
pub fn boundary_target(spec: &LatticeSpec) -> Result<Vec<PauliOperator>, ExperimentError> {
    let pump = compile_pump(spec)?;
    let mut t = StabilizerTableau::new_plus_state(spec.num_sites());
    t.apply_circuit(&pump.reduced)
        .map_err(|e| ExperimentError::NotAPump(e.to_string()))?;
    let group = t.group();
    let adj = spec.target_neighbors();
    spec.boundary
        .iter()
        .map(|&q| {
            let k = cluster_stabilizer(spec, &adj, q);
            match group.contains(&k).expect("sizes agree") {
                Membership::Plus => Ok(k),
                Membership::Minus => Ok(k.negated()),
                Membership::Absent => Err(ExperimentError::NotAPump(format!("boundary site {q}"))),
            }
        })
        .collect()
}

fn parity(v: u64) -> bool {
    v.count_ones() % 2 == 1
}

pub fn run_postselected(
    spec: &LatticeSpec,
    p: &PerturbationSpec,
    cfg: &RunConfig,
) -> Result<RunResult, ExperimentError> {
    let n = spec.num_sites();
    if n > cfg.cap {
        return Err(StateError::OverCap { n, cap: cfg.cap }.into());
    }
    let nb = spec.bulk.len();
    let ham = perturbed_hamiltonian(spec, p)?;
    let target = boundary_target(spec)?;
    let dense = ham.to_dense(n, cfg.cap)?;

    let mut psi = DenseState::plus_state(n, cfg.cap)?;
    if dense.x_fields.is_empty() {
        psi.evolve_diagonal(&dense.diag, ham.time)?;
    } else {
        psi.evolve_general(&dense, ham.time, EVOLVE_TOL)?;
    }
    // Rotate the bulk so that bit 1 means outcome |−⟩.
    for &q in &spec.bulk {
        psi.apply_gate(Gate::H(q))?;
    }

    let mut bulk_pos = vec![None; n];
    for (k, &q) in spec.bulk.iter().enumerate() {
        bulk_pos[q] = Some(k);
    }
    let pattern = |b: usize| -> usize {
        spec.bulk
            .iter()
            .enumerate()
            .fold(0, |m, (k, &q)| m | ((b >> q & 1) << k))
    };
    let bulk_mask = |support: &[usize]| -> u64 {
        support
            .iter()
            .filter_map(|&q| bulk_pos[q])
            .fold(0, |m, k| m | 1 << k)
    };
    let expected: u64 = if spec.bulk_flips_to_minus {
        (1u64 << nb) - 1
    } else {
        0
    };
    let generator_masks: Vec<u64> = spec
        .symmetries
        .iter()
        .map(|s| bulk_mask(&s.support))
        .collect();
    let accepts = |m: u64| -> bool {
        let d = m ^ expected;
        match cfg.accept_rule {
            AcceptRule::PerGenerator => generator_masks.iter().all(|&g| !parity(d & g)),
            AcceptRule::GlobalParity => !parity(d),
        }
    };

    let patterns: Vec<usize> = (0..1usize << n).map(pattern).collect();
    let mut prob = vec![0.0f64; 1 << nb];
    for (b, a) in psi.amplitudes().iter().enumerate() {
        prob[patterns[b]] += a.norm_sqr();
    }
    let mut phi = psi.clone();
    for g in &target {
        phi.project_plus(g)?;
    }
    let mut in_target = vec![0.0f64; 1 << nb];
    for (b, a) in phi.amplitudes().iter().enumerate() {
        in_target[patterns[b]] += a.norm_sqr();
    }

    let accepted: Vec<bool> = (0..1u64 << nb).map(accepts).collect();
    let p_acc: f64 = prob
        .iter()
        .zip(&accepted)
        .filter(|(_, &a)| a)
        .map(|(p, _)| p)
        .sum();
    let p_fail_exact = (prob.iter().sum::<f64>() - p_acc).clamp(0.0, 1.0);
    let fidelity_post = if p_acc > 0.0 {
        let f: f64 = in_target
            .iter()
            .zip(&accepted)
            .filter(|(_, &a)| a)
            .map(|(f, _)| f)
            .sum();
        (f / p_acc).clamp(0.0, 1.0)
    } else {
        0.0
    };

    let mut defect_histogram = vec![0.0; nb + 1];
    for (m, pm) in prob.iter().enumerate() {
        defect_histogram[(m as u64 ^ expected).count_ones() as usize] += pm;
    }

    let mut boundary_symmetry = Vec::new();
    for (s, g) in spec.symmetries.iter().enumerate() {
        let on_boundary: Vec<usize> = g
            .support
            .iter()
            .copied()
            .filter(|&q| bulk_pos[q].is_none())
            .collect();
        if on_boundary.is_empty() || p_acc <= 0.0 {
            continue;
        }
        let mut moved = psi.clone();
        moved.apply_pauli(&PauliOperator::x_on(n, on_boundary))?;
        let mut per_pattern = vec![0.0f64; 1 << nb];
        for (b, (a, c)) in psi.amplitudes().iter().zip(moved.amplitudes()).enumerate() {
            per_pattern[patterns[b]] += (a.conj() * c).re;
        }
        let sign = if parity(expected & generator_masks[s]) {
            -1.0
        } else {
            1.0
        };
        let v: f64 = per_pattern
            .iter()
            .zip(&accepted)
            .filter(|(_, &a)| a)
            .map(|(v, _)| v)
            .sum();
        boundary_symmetry.push(SymmetryExpectation {
            label: g.label.clone(),
            value: sign * v / p_acc,
        });
    }

    let p_fail_sampled = sample_fail_rate(&prob, &accepted, cfg.samples, cfg.seed);
    let (nx, ny) = spec.family.dims();
    Ok(RunResult {
        lattice: spec.family.name().to_string(),
        nx,
        ny,
        n_boundary: spec.boundary.len(),
        kind: p.kind,
        epsilon: p.epsilon,
        seed: cfg.seed,
        p_fail_exact,
        p_fail_sampled,
        samples: cfg.samples,
        fidelity_post,
        accept_rule: cfg.accept_rule,
        accepted_parity_rule: match cfg.accept_rule {
            AcceptRule::PerGenerator => {
                "even defect count on the bulk support of every symmetry generator"
            }
            AcceptRule::GlobalParity => "even total defect count over the bulk",
        }
        .to_string(),
        defect_histogram,
        boundary_symmetry,
    })
}

/// Fraction of `samples` seeded draws of the bulk outcome pattern that are
/// rejected. Drawing the whole pattern from its exact distribution is
/// equivalent to measuring the bulk qubits one after another.
fn sample_fail_rate(prob: &[f64], accepted: &[bool], samples: usize, seed: u64) -> f64 {
    if samples == 0 {
        return f64::NAN;
    }
    let mut cdf = Vec::with_capacity(prob.len());
    let mut acc = 0.0;
    for p in prob {
        acc += p;
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = 0usize;
    for _ in 0..samples {
        let r = rng.gen::<f64>() * acc;
        let m = cdf.partition_point(|&c| c <= r).min(prob.len() - 1);
        if !accepted[m] {
            fails += 1;
        }
    }
    fails as f64 / samples as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// 95% Student-t interval, present with three or more points.
    pub slope_ci: Option<[f64; 2]>,
    pub points: usize,
}

/// Least-squares fit of `log y` against `log x`. Points with non-positive
/// coordinates are dropped first.
pub fn fit_loglog(xs: &[f64], ys: &[f64], min_points: usize) -> Result<LogLogFit, ExperimentError> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(&x, &y)| x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = pts.len();
    if k < min_points.max(2) {
        return Err(ExperimentError::DegenerateFit(format!(
            "{k} usable points, need {}",
            min_points.max(2)
        )));
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(ExperimentError::DegenerateFit(
            "all x values coincide".into(),
        ));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_ci = (k >= 3).then(|| {
        let rss: f64 = pts
            .iter()
            .map(|p| (p.1 - intercept - slope * p.0).powi(2))
            .sum();
        let se = (rss / (k - 2) as f64 / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, (k - 2) as f64)
            .expect("positive dof")
            .inverse_cdf(0.975);
        [slope - t * se, slope + t * se]
    });
    Ok(LogLogFit {
        slope,
        intercept,
        slope_ci,
        points: k,
    })
}

fn default_samples() -> usize {
    10_000
}

fn default_cap() -> usize {
    DEFAULT_QUBIT_CAP
}

/// JSON sweep description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub instances: Vec<Family>,
    pub epsilons: Vec<f64>,
    pub kinds: Vec<PerturbationKind>,
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub accept_rule: AcceptRule,
    /// Random per-term signs, seeded from `seed`.
    #[serde(default)]
    pub disorder: bool,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonFit {
    pub lattice: String,
    pub nx: usize,
    pub ny: usize,
    pub kind: PerturbationKind,
    pub p_fail: LogLogFit,
    /// Fit of `1 − fidelity_post`, when enough points are positive.
    pub fidelity_deficit: Option<LogLogFit>,
    /// `p_fail / ε²` at the three smallest positive ε.
    pub small_eps_ratios: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeFit {
    pub lattice: String,
    pub kind: PerturbationKind,
    pub epsilon: f64,
    /// Slope of `log p_fail` against `log n_boundary`.
    pub fit: LogLogFit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<RunResult>,
    pub epsilon_fits: Vec<EpsilonFit>,
    pub size_fits: Vec<SizeFit>,
}

pub fn sweep(cfg: &SweepConfig) -> Result<SweepReport, ExperimentError> {
    if cfg.instances.is_empty() || cfg.kinds.is_empty() {
        return Err(ExperimentError::BadParameter(
            "sweep needs instances and kinds".into(),
        ));
    }
    let specs: Vec<LatticeSpec> = cfg.instances.iter().map(build).collect::<Result<_, _>>()?;
    let mut jobs = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        if spec.num_sites() > cfg.cap {
            return Err(StateError::OverCap {
                n: spec.num_sites(),
                cap: cfg.cap,
            }
            .into());
        }
        for &kind in &cfg.kinds {
            for &epsilon in &cfg.epsilons {
                jobs.push((i, kind, epsilon));
            }
        }
    }
    let run_cfg = RunConfig {
        seed: cfg.seed,
        samples: cfg.samples,
        accept_rule: cfg.accept_rule,
        cap: cfg.cap,
    };
    let results: Vec<(usize, RunResult)> = jobs
        .par_iter()
        .map(|&(i, kind, epsilon)| {
            let p = PerturbationSpec {
                kind,
                epsilon,
                disorder_seed: cfg.disorder.then_some(cfg.seed),
            };
            run_postselected(&specs[i], &p, &run_cfg).map(|r| (i, r))
        })
        .collect::<Result<_, _>>()?;

    let mut rows: Vec<(usize, RunResult)> = results;
    rows.sort_by(|(ia, a), (ib, b)| {
        (ia, a.kind, a.seed)
            .cmp(&(ib, b.kind, b.seed))
            .then(a.epsilon.total_cmp(&b.epsilon))
    });

    let mut by_instance: BTreeMap<(usize, PerturbationKind), Vec<&RunResult>> = BTreeMap::new();
    for (i, r) in &rows {
        by_instance.entry((*i, r.kind)).or_default().push(r);
    }
    // A single positive ε is a size sweep and gets no ε fit.
    let positive_eps = cfg.epsilons.iter().filter(|&&e| e > 0.0).count();
    let mut epsilon_fits = Vec::new();
    for ((_, kind), rs) in by_instance.iter().filter(|_| positive_eps > 1) {
        let eps: Vec<f64> = rs.iter().map(|r| r.epsilon).collect();
        let pf: Vec<f64> = rs.iter().map(|r| r.p_fail_exact).collect();
        let deficit: Vec<f64> = rs.iter().map(|r| 1.0 - r.fidelity_post).collect();
        let mut small: Vec<&&RunResult> = rs.iter().filter(|r| r.epsilon > 0.0).collect();
        small.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
        epsilon_fits.push(EpsilonFit {
            lattice: rs[0].lattice.clone(),
            nx: rs[0].nx,
            ny: rs[0].ny,
            kind: *kind,
            p_fail: fit_loglog(&eps, &pf, 3)?,
            fidelity_deficit: fit_loglog(&eps, &deficit, 3).ok(),
            small_eps_ratios: small
                .iter()
                .take(3)
                .map(|r| r.p_fail_exact / (r.epsilon * r.epsilon))
                .collect(),
        });
    }

    let mut by_eps: BTreeMap<(String, PerturbationKind, u64), Vec<&RunResult>> = BTreeMap::new();
    for (_, r) in &rows {
        if r.epsilon > 0.0 {
            by_eps
                .entry((r.lattice.clone(), r.kind, r.epsilon.to_bits()))
                .or_default()
                .push(r);
        }
    }
    let mut size_fits = Vec::new();
    for ((lattice, kind, eps), rs) in by_eps {
        let ns: Vec<f64> = rs.iter().map(|r| r.n_boundary as f64).collect();
        let pf: Vec<f64> = rs.iter().map(|r| r.p_fail_exact).collect();
        if let Ok(fit) = fit_loglog(&ns, &pf, 2) {
            size_fits.push(SizeFit {
                lattice,
                kind,
                epsilon: f64::from_bits(eps),
                fit,
            });
        }
    }
    Ok(SweepReport {
        rows: rows.into_iter().map(|(_, r)| r).collect(),
        epsilon_fits,
        size_fits,
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    lattice: &'a str,
    nx: usize,
    ny: usize,
    n_boundary: usize,
    kind: &'a str,
    epsilon: f64,
    seed: u64,
    p_fail_exact: f64,
    p_fail_sampled: f64,
    fidelity_post: f64,
    accept_rule: &'a str,
}

pub fn write_csv<W: std::io::Write>(rows: &[RunResult], w: W) -> Result<(), ExperimentError> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(CsvRow {
            lattice: &r.lattice,
            nx: r.nx,
            ny: r.ny,
            n_boundary: r.n_boundary,
            kind: r.kind.as_str(),
            epsilon: r.epsilon,
            seed: r.seed,
            p_fail_exact: r.p_fail_exact,
            p_fail_sampled: r.p_fail_sampled,
            fidelity_post: r.fidelity_post,
            accept_rule: r.accept_rule.as_str(),
        })?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}
