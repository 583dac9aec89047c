//! Exact state-vector verification of a constructed attack.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::attack::{build_isometry, EveIsometry};
use crate::error::{Error, Result};
use crate::infocurves::i_ae;
use crate::mub::BasisSet;
use crate::quantum::{
    inner_product, partial_trace, projective_probabilities, DensityOperator, StateVector,
    Subsystem, STRUCTURAL_TOL,
};

/// `1 - ⟨ψ|ρ_B|ψ⟩` where `ρ_B` is Bob's marginal of the attacked state.
pub fn measure_disturbance(iso: &EveIsometry, psi: &StateVector) -> Result<f64> {
    if psi.dim() != iso.d() {
        return Err(Error::DimensionMismatch {
            expected: iso.d(),
            found: psi.dim(),
        });
    }
    if !psi.is_normalized(STRUCTURAL_TOL) {
        return Err(Error::NotNormalized {
            norm_sqr: psi.norm_sqr(),
        });
    }
    let out = iso.map().apply(psi)?;
    let bob = partial_trace(&out, (iso.d(), iso.eve_dim()), Subsystem::First)?;
    Ok((1.0 - bob.expectation(psi)?).clamp(0.0, 1.0))
}

/// What Eve's state is conditioned on besides Alice's prepared state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Bob's outcome traced out.
    All,
    /// Bob measured this symbol in the computational basis.
    Bob(usize),
}

/// Eve's reduced state when Alice prepares `bases[basis][symbol]`.
pub fn eve_conditional_state(
    iso: &EveIsometry,
    bases: &BasisSet,
    basis: usize,
    symbol: usize,
    branch: Branch,
) -> Result<DensityOperator> {
    if bases.dim() != iso.d() {
        return Err(Error::DimensionMismatch {
            expected: iso.d(),
            found: bases.dim(),
        });
    }
    let psi = bases.state(basis, symbol)?;
    eve_state_for(iso, psi, branch)
}

fn eve_state_for(iso: &EveIsometry, psi: &StateVector, branch: Branch) -> Result<DensityOperator> {
    let out = iso.map().apply(psi)?;
    let eve = iso.eve_dim();
    match branch {
        Branch::All => partial_trace(&out, (iso.d(), eve), Subsystem::Second),
        Branch::Bob(k) => {
            if k >= iso.d() {
                return Err(Error::IndexOutOfRange {
                    what: "Bob symbol",
                    index: k,
                    len: iso.d(),
                });
            }
            let slice = StateVector::new(out.amplitudes()[k * eve..(k + 1) * eve].to_vec())?;
            if slice.norm_sqr() < 1e-24 {
                return Err(Error::InvalidArgument(format!(
                    "Bob outcome {k} has zero probability"
                )));
            }
            DensityOperator::pure(&slice.normalized()?)
        }
    }
}

/// Mutual information in dits of a joint distribution `joint[a][b]`.
pub fn mutual_information(joint: &[Vec<f64>], base: f64) -> f64 {
    let ln_base = base.ln();
    let rows: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let cols = joint.first().map_or(0, Vec::len);
    let col_sums: Vec<f64> = (0..cols)
        .map(|b| joint.iter().map(|r| r[b]).sum())
        .collect();
    let mut info = 0.0;
    for (a, row) in joint.iter().enumerate() {
        for (b, &p) in row.iter().enumerate() {
            if p > 0.0 {
                info += p * (p / (rows[a] * col_sums[b])).ln();
            }
        }
    }
    info / ln_base
}

/// Alice–Eve information for computational-basis signals, by simulation.
///
/// Alice sends each symbol with probability `1/d`; Eve measures her `d²`
/// canonical frame. Barred outcome `k̄` points to symbol `k`, off-diagonal
/// outcome `E_jk` to symbol `j`; the information is computed over Eve's raw
/// outcomes so the off-diagonal flag is kept.
pub fn eve_information_computational(iso: &EveIsometry) -> Result<f64> {
    let d = iso.d();
    let frame: Vec<StateVector> = iso.ancilla_frame().into_iter().map(|(_, v)| v).collect();
    let joint = (0..d)
        .map(|j| {
            let rho = eve_state_for(iso, &StateVector::basis(d, j)?, Branch::All)?;
            Ok(projective_probabilities(&rho, &frame)?
                .into_iter()
                .map(|p| p / d as f64)
                .collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(mutual_information(&joint, d as f64).max(0.0))
}

/// Holevo quantity of Eve's ensemble for each basis, in dits.
pub fn holevo_per_basis(iso: &EveIsometry, bases: &BasisSet) -> Result<Vec<f64>> {
    if bases.dim() != iso.d() {
        return Err(Error::DimensionMismatch {
            expected: iso.d(),
            found: bases.dim(),
        });
    }
    let base = iso.d() as f64;
    bases
        .bases()
        .iter()
        .map(|basis| {
            let states = basis
                .iter()
                .map(|psi| eve_state_for(iso, psi, Branch::All))
                .collect::<Result<Vec<_>>>()?;
            let w = 1.0 / states.len() as f64;
            let parts: Vec<(f64, &DensityOperator)> = states.iter().map(|r| (w, r)).collect();
            let average = DensityOperator::mixture(&parts)?;
            let conditional: f64 = states.iter().map(|r| w * r.entropy(base)).sum();
            Ok((average.entropy(base) - conditional).max(0.0))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDisturbance {
    pub label: String,
    pub disturbance: f64,
}

/// Everything checked for one `(d, D)` configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub d: usize,
    #[serde(rename = "D")]
    pub disturbance: f64,
    #[serde(rename = "S")]
    pub overlap: f64,
    pub x: f64,
    pub y: f64,
    pub isometry_residual: f64,
    pub disturbance_per_state: Vec<StateDisturbance>,
    pub max_disturbance_spread: f64,
    pub max_disturbance_error: f64,
    /// Unitarity expressions, one per pair of input symbols `j < j'`.
    pub unitarity_residuals: Vec<f64>,
    /// Equal-disturbance scalar-product conditions; the four literal
    /// expressions at `d = 3`, a single aggregated cross-overlap value
    /// otherwise.
    pub symmetry_residuals: Vec<f64>,
    pub eve_info_computational: f64,
    pub eve_info_closed_form: f64,
    pub holevo_per_basis: Vec<f64>,
}

impl AttackReport {
    /// Largest structural residual in the report.
    pub fn worst_residual(&self) -> f64 {
        [
            self.isometry_residual,
            self.max_disturbance_spread,
            self.max_disturbance_error,
            (self.eve_info_computational - self.eve_info_closed_form).abs(),
        ]
        .into_iter()
        .chain(self.unitarity_residuals.iter().copied())
        .chain(self.symmetry_residuals.iter().copied())
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst_residual() <= tol
    }
}

fn component_residual(z: Complex64) -> f64 {
    z.re.abs().max(z.im.abs())
}

fn overlap(iso: &EveIsometry, a: (usize, usize), b: (usize, usize)) -> Result<Complex64> {
    inner_product(iso.ancilla(a.0, a.1)?, iso.ancilla(b.0, b.1)?)
}

/// `Σ_k c_jk c_j'k ⟨E_j'k|E_jk⟩` for every `j < j'`.
pub fn unitarity_residuals(iso: &EveIsometry) -> Result<Vec<f64>> {
    let d = iso.d();
    let cfg = iso.config();
    let mut out = Vec::new();
    for j in 0..d {
        for jp in (j + 1)..d {
            let mut z = Complex64::new(0.0, 0.0);
            for k in 0..d {
                z +=
                    overlap(iso, (jp, k), (j, k))? * cfg.coefficient(j, k) * cfg.coefficient(jp, k);
            }
            out.push(component_residual(z));
        }
    }
    Ok(out)
}

/// The equal-disturbance conditions on Eve's scalar products.
pub fn symmetry_residuals(iso: &EveIsometry) -> Result<Vec<f64>> {
    if iso.d() == 3 {
        qutrit_symmetry_conditions(iso)
    } else {
        cross_overlap_residual(iso).map(|r| vec![r])
    }
}

fn qutrit_symmetry_conditions(iso: &EveIsometry) -> Result<Vec<f64>> {
    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    let dist = iso.config().disturbance;
    let o = |bra: (usize, usize), ket: (usize, usize)| overlap(iso, bra, ket);
    let lead = (2.0 * dist * (1.0 - dist)).sqrt();

    let c1 = (o((A, 1), (A, 0))? + o((B, 1), (B, 0))? + o((C, 2), (B, 0))? + o((A, 1), (C, 2))?)
        * lead
        + (o((C, 1), (C, 0))? + o((B, 0), (A, 1))? * 3.0) * dist;
    let c2 = (o((B, 1), (C, 0))? + o((A, 2), (B, 1))? + o((A, 2), (A, 0))? + o((C, 2), (C, 0))?)
        * lead
        + (o((B, 2), (B, 0))? + o((C, 0), (A, 2))? * 3.0) * dist;
    let c3 = (o((B, 2), (B, 1))? + o((C, 2), (C, 1))? + o((B, 2), (A, 0))? + o((A, 0), (C, 1))?)
        * lead
        + (o((A, 2), (A, 1))? + o((C, 1), (B, 2))? * 3.0) * dist;
    let c4 = o((A, 1), (C, 0))?
        + o((A, 2), (B, 0))?
        + o((B, 0), (C, 1))?
        + o((B, 2), (A, 1))?
        + o((C, 1), (A, 2))?
        + o((C, 0), (B, 2))?;
    Ok([c1, c2, c3, c4]
        .into_iter()
        .map(component_residual)
        .collect())
}

/// Largest overlap between two distinct ancillas when at least one of them
/// is off-diagonal.
fn cross_overlap_residual(iso: &EveIsometry) -> Result<f64> {
    let d = iso.d();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (0..d).map(move |k| (j, k))).collect();
    let mut worst = 0.0_f64;
    for (i, &a) in pairs.iter().enumerate() {
        for &b in &pairs[i + 1..] {
            if a.0 == a.1 && b.0 == b.1 {
                continue;
            }
            worst = worst.max(component_residual(overlap(iso, a, b)?));
        }
    }
    Ok(worst)
}

fn state_label(d: usize, basis: usize, symbol: usize) -> String {
    const GREEK: [&str; 3] = ["alpha", "beta", "gamma"];
    match (d, basis) {
        (_, 0) => symbol.to_string(),
        (3, b) => format!("{}{}", GREEK[symbol], "'".repeat(b - 1)),
        (_, b) => format!("b{b}:{symbol}"),
    }
}

/// Builds the attack for `(d, D)` and checks it against every state of
/// `bases`.
pub fn verify_attack(d: usize, disturbance: f64, bases: &BasisSet) -> Result<AttackReport> {
    if bases.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bases.dim(),
        });
    }
    let iso = build_isometry(d, disturbance)?;
    let cfg = *iso.config();

    let mut per_state = Vec::with_capacity(bases.num_states());
    for (b, basis) in bases.bases().iter().enumerate() {
        for (k, psi) in basis.iter().enumerate() {
            per_state.push(StateDisturbance {
                label: state_label(d, b, k),
                disturbance: measure_disturbance(&iso, psi)?,
            });
        }
    }
    let (lo, hi) = per_state
        .iter()
        .map(|s| s.disturbance)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    let max_error = per_state
        .iter()
        .map(|s| (s.disturbance - cfg.disturbance).abs())
        .fold(0.0, f64::max);

    Ok(AttackReport {
        d,
        disturbance: cfg.disturbance,
        overlap: cfg.overlap,
        x: cfg.x,
        y: cfg.y,
        isometry_residual: iso.isometry_residual(),
        max_disturbance_spread: if per_state.is_empty() { 0.0 } else { hi - lo },
        max_disturbance_error: max_error,
        disturbance_per_state: per_state,
        unitarity_residuals: unitarity_residuals(&iso)?,
        symmetry_residuals: symmetry_residuals(&iso)?,
        eve_info_computational: eve_information_computational(&iso)?,
        eve_info_closed_form: i_ae(d, cfg.disturbance)?,
        holevo_per_basis: holevo_per_basis(&iso, bases)?,
    })
}
