//! The symmetric eavesdropping isometry on a `d`-level signal.
//!
//! For Alice's symbol `j` the attack maps
//!
//! ```text
//! |j⟩|A⟩  ↦  √(1-D) |j⟩|E_jj⟩ + Σ_{k≠j} √(D/(d-1)) |k⟩|E_jk⟩
//! ```
//!
//! into a `d · d²` dimensional Bob ⊗ Eve space. The diagonal ancillas
//! `E_jj` live in the first `d` ("barred") Eve dimensions with amplitude
//! `x` on barred index `j` and `y` elsewhere; every off-diagonal ancilla
//! `E_jk` is a distinct canonical vector of the complement, assigned in
//! row-major `(j, k)` order skipping the diagonal.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infocurves::information_for_overlap;
use crate::quantum::{LinearMap, StateVector};

/// Slack for accepting disturbances that sit on an interval endpoint up to
/// rounding.
const ENDPOINT_SLACK: f64 = 1e-12;

/// Roots whose information differs by less than this count as tied.
const ROOT_TIE_TOL: f64 = 1e-12;

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "the attack needs d >= 2",
        });
    }
    Ok(())
}

/// Upper end `(d-1)/d` of the protocol-relevant disturbance interval, where
/// the received symbol is fully randomized.
pub fn max_disturbance(d: usize) -> f64 {
    (d as f64 - 1.0) / d as f64
}

/// Largest `D` at which the radicand of `f_d` is nonnegative, `d/(d+1)`.
pub fn f_domain_max(d: usize) -> f64 {
    d as f64 / (d as f64 + 1.0)
}

pub(crate) fn check_disturbance(d: usize, disturbance: f64) -> Result<f64> {
    check_dim(d)?;
    let max = max_disturbance(d);
    if !disturbance.is_finite()
        || disturbance < -ENDPOINT_SLACK
        || disturbance > max + ENDPOINT_SLACK
    {
        return Err(Error::DisturbanceOutOfRange {
            d,
            value: disturbance,
            min: 0.0,
            max,
        });
    }
    Ok(disturbance.clamp(0.0, max))
}

/// Mean diagonal-ancilla overlap `S` that produces disturbance `D`:
/// `S = ((d-1) - d D) / ((d-1)(1-D))`.
pub fn s_of_disturbance(d: usize, disturbance: f64) -> Result<f64> {
    let dist = check_disturbance(d, disturbance)?;
    let dm1 = d as f64 - 1.0;
    Ok((dm1 - d as f64 * dist) / (dm1 * (1.0 - dist)))
}

/// Disturbance as a function of the mean overlap,
/// `D = (d-1)(1-S) / (d - S(d-1))`.
pub fn disturbance_of_s(d: usize, overlap: f64) -> f64 {
    let dm1 = d as f64 - 1.0;
    dm1 * (1.0 - overlap) / (d as f64 - overlap * dm1)
}

/// `f(D) = (3 - 2D + 2√2 √(D(3-4D))) / (9(1-D))`, the qutrit closed form.
pub fn f_closed_d3(disturbance: f64) -> Result<f64> {
    let dist = disturbance;
    let radicand = dist * (3.0 - 4.0 * dist);
    if !dist.is_finite() || radicand < -ENDPOINT_SLACK || dist >= 1.0 {
        return Err(Error::NegativeRadicand {
            d: 3,
            value: dist,
            max: 0.75,
        });
    }
    let root = 2.0 * 2f64.sqrt() * radicand.max(0.0).sqrt();
    Ok((3.0 - 2.0 * dist + root) / (9.0 * (1.0 - dist)))
}

/// `f_d(D) = (d - 2D + √((d-2D)² - d²(1-2D)²)) / (d²(1-D))`.
pub fn f_general(d: usize, disturbance: f64) -> Result<f64> {
    check_dim(d)?;
    let dist = disturbance;
    let df = d as f64;
    let max = f_domain_max(d);
    if !dist.is_finite() || !(-ENDPOINT_SLACK..1.0).contains(&dist) {
        return Err(Error::DisturbanceOutOfRange {
            d,
            value: dist,
            min: 0.0,
            max,
        });
    }
    let lead = df - 2.0 * dist;
    let radicand = lead * lead - df * df * (1.0 - 2.0 * dist).powi(2);
    if radicand < -ENDPOINT_SLACK {
        return Err(Error::NegativeRadicand {
            d,
            value: dist,
            max,
        });
    }
    Ok((lead + radicand.max(0.0).sqrt()) / (df * df * (1.0 - dist)))
}

/// Real solutions `(x, y)` of `x² + (d-1)y² = 1`, `2xy + (d-2)y² = S`.
///
/// The system fixes `x - y = ±√(1-S)` and `x + (d-1)y = ±√(1+(d-1)S)`. The
/// overall sign of the ancilla states is irrelevant, so only roots with
/// `x + (d-1)y ≥ 0` are returned; coincident roots are merged.
pub fn overlap_roots(d: usize, overlap: f64) -> Vec<(f64, f64)> {
    let df = d as f64;
    let minus = 1.0 - overlap;
    let plus = 1.0 + (df - 1.0) * overlap;
    if minus < -ENDPOINT_SLACK || plus < -ENDPOINT_SLACK {
        return Vec::new();
    }
    let (a, b) = (minus.max(0.0).sqrt(), plus.max(0.0).sqrt());
    let mut roots: Vec<(f64, f64)> = Vec::with_capacity(2);
    for sign in [1.0, -1.0] {
        let diff = sign * a;
        let y = (b - diff) / df;
        let x = y + diff;
        if !roots
            .iter()
            .any(|&(rx, ry)| (rx - x).abs() < 1e-12 && (ry - y).abs() < 1e-12)
        {
            roots.push((x, y));
        }
    }
    roots
}

/// The information-maximizing real root `(x, y)` for `(d, D)`.
///
/// Ties are broken towards larger `x`.
pub fn solve_overlap_coefficients(d: usize, disturbance: f64) -> Result<(f64, f64)> {
    let dist = check_disturbance(d, disturbance)?;
    let overlap = s_of_disturbance(d, dist)?;
    let scored: Vec<(f64, f64, f64)> = overlap_roots(d, overlap)
        .into_iter()
        .map(|(x, y)| (x, y, information_for_overlap(d, dist, x * x)))
        .collect();
    let best = scored.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
    scored
        .into_iter()
        .filter(|r| r.2 >= best - ROOT_TIE_TOL)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(x, y, _)| (x, y))
        .ok_or(Error::NoRealRoot {
            d,
            disturbance: dist,
        })
}

/// Dimension, disturbance and the derived ancilla coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub d: usize,
    #[serde(rename = "D")]
    pub disturbance: f64,
    #[serde(rename = "S")]
    pub overlap: f64,
    pub x: f64,
    pub y: f64,
}

impl AttackConfig {
    pub fn new(d: usize, disturbance: f64) -> Result<Self> {
        let disturbance = check_disturbance(d, disturbance)?;
        let overlap = s_of_disturbance(d, disturbance)?;
        let (x, y) = solve_overlap_coefficients(d, disturbance)?;
        Ok(Self {
            d,
            disturbance,
            overlap,
            x,
            y,
        })
    }

    /// Amplitude of Bob's symbol `received` when Alice sent `sent`.
    pub fn coefficient(&self, sent: usize, received: usize) -> f64 {
        if sent == received {
            (1.0 - self.disturbance).sqrt()
        } else {
            (self.disturbance / (self.d as f64 - 1.0)).sqrt()
        }
    }
}

/// Role of a canonical Eve basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AncillaRole {
    /// Barred vector `|k̄⟩` spanning the diagonal ancillas.
    Barred(usize),
    /// Dedicated vector of the off-diagonal ancilla `E_{sent,received}`.
    OffDiagonal { sent: usize, received: usize },
}

/// Eve index of the off-diagonal ancilla `E_{sent,received}` (`sent ≠ received`).
pub fn off_diagonal_index(d: usize, sent: usize, received: usize) -> usize {
    debug_assert!(sent != received && sent < d && received < d);
    let col = if received < sent {
        received
    } else {
        received - 1
    };
    d + sent * (d - 1) + col
}

/// The roles of Eve's `d²` canonical basis vectors, in index order.
pub fn ancilla_roles(d: usize) -> Vec<AncillaRole> {
    let mut roles: Vec<AncillaRole> = (0..d).map(AncillaRole::Barred).collect();
    for sent in 0..d {
        for received in (0..d).filter(|&k| k != sent) {
            roles.push(AncillaRole::OffDiagonal { sent, received });
        }
    }
    roles
}

/// The attack as a linear map from Alice's space into Bob ⊗ Eve.
#[derive(Debug, Clone)]
pub struct EveIsometry {
    config: AttackConfig,
    map: LinearMap,
    ancillas: Vec<StateVector>,
}

impl EveIsometry {
    pub fn config(&self) -> &AttackConfig {
        &self.config
    }

    pub fn d(&self) -> usize {
        self.config.d
    }

    pub fn eve_dim(&self) -> usize {
        self.config.d * self.config.d
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    /// Eve's normalized state `E_{sent,received}`.
    pub fn ancilla(&self, sent: usize, received: usize) -> Result<&StateVector> {
        let d = self.d();
        for (what, index) in [("sent symbol", sent), ("received symbol", received)] {
            if index >= d {
                return Err(Error::IndexOutOfRange {
                    what,
                    index,
                    len: d,
                });
            }
        }
        Ok(&self.ancillas[sent * d + received])
    }

    /// Eve's canonical orthonormal frame, with the role of each vector.
    pub fn ancilla_frame(&self) -> Vec<(AncillaRole, StateVector)> {
        let n = self.eve_dim();
        ancilla_roles(self.d())
            .into_iter()
            .enumerate()
            .map(|(k, role)| (role, StateVector::basis(n, k).expect("k < d²")))
            .collect()
    }

    pub fn isometry_residual(&self) -> f64 {
        self.map.isometry_residual()
    }

    pub fn summary(&self) -> IsometrySummary {
        IsometrySummary {
            config: self.config,
            isometry_residual: self.isometry_residual(),
        }
    }
}

/// JSON view of an isometry: `{d, D, S, x, y, isometry_residual}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IsometrySummary {
    #[serde(flatten)]
    pub config: AttackConfig,
    pub isometry_residual: f64,
}

fn diagonal_ancilla(d: usize, symbol: usize, x: f64, y: f64) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for (k, a) in amps.iter_mut().take(d).enumerate() {
        *a = Complex64::new(if k == symbol { x } else { y }, 0.0);
    }
    StateVector::new(amps).expect("nonempty")
}

pub fn build_isometry(d: usize, disturbance: f64) -> Result<EveIsometry> {
    let config = AttackConfig::new(d, disturbance)?;
    let eve = d * d;
    let mut ancillas = Vec::with_capacity(eve);
    for sent in 0..d {
        for received in 0..d {
            let v = if sent == received {
                diagonal_ancilla(d, sent, config.x, config.y)
            } else {
                StateVector::basis(eve, off_diagonal_index(d, sent, received))?
            };
            ancillas.push(v);
        }
    }

    let mut matrix = DMatrix::<Complex64>::zeros(d * eve, d);
    for sent in 0..d {
        for received in 0..d {
            let c = config.coefficient(sent, received);
            for (e, amp) in ancillas[sent * d + received]
                .amplitudes()
                .iter()
                .enumerate()
            {
                matrix[(received * eve + e, sent)] += amp * c;
            }
        }
    }

    Ok(EveIsometry {
        config,
        map: LinearMap::new(matrix),
        ancillas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::mub_bases;
    use crate::quantum::{inner_product, partial_trace, DensityOperator, Subsystem};

    #[test]
    fn overlap_endpoints() {
        assert_eq!(s_of_disturbance(3, 0.0).unwrap(), 1.0);
        assert!(s_of_disturbance(3, 2.0 / 3.0).unwrap().abs() < 1e-15);
        // (2 - 3·0.227) / (2 · 0.773)
        let s = s_of_disturbance(3, 0.227).unwrap();
        assert!((s - 1.319 / 1.546).abs() < 1e-14);
        assert!((s - 0.8532).abs() < 5e-5);
        assert!((2.0 * (1.0 - s) / (3.0 - 2.0 * s) - 0.227).abs() < 1e-12);
    }

    #[test]
    fn overlap_rejects_out_of_range() {
        assert!(s_of_disturbance(3, -0.1).is_err());
        assert!(s_of_disturbance(3, 0.7).is_err());
        assert!(s_of_disturbance(3, 1.0).is_err());
        assert!(s_of_disturbance(1, 0.0).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert!((f_closed_d3(0.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((f_closed_d3(2.0 / 3.0).unwrap() - 1.0).abs() < 1e-12);
        // (2.8 + 2√2·√0.26) / 8.1
        let want = (2.8 + 2.0 * 2f64.sqrt() * 0.26f64.sqrt()) / 8.1;
        assert!((f_closed_d3(0.1).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.5237).abs() < 5e-5);
        assert!(f_closed_d3(0.8).is_err());
    }

    #[test]
    fn general_form_values() {
        assert!((f_general(2, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((f_general(2, 0.0).unwrap() - 0.5).abs() < 1e-15);
        for k in 0..=75 {
            let dist = k as f64 / 100.0;
            let diff = f_general(3, dist).unwrap() - f_closed_d3(dist).unwrap();
            assert!(diff.abs() < 1e-12, "D = {dist}");
        }
        let err = f_general(3, 0.8).unwrap_err();
        assert!(matches!(err, Error::NegativeRadicand { .. }));
        assert!(err.to_string().contains("0.75"));
    }

    #[test]
    fn coefficients_at_known_points() {
        let (x, y) = solve_overlap_coefficients(3, 0.0).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((x - r).abs() < 1e-12 && (y - r).abs() < 1e-12);

        let (x, y) = solve_overlap_coefficients(2, 0.5).unwrap();
        assert!((x - 1.0).abs() < 1e-12 && y.abs() < 1e-12);

        let (x, _) = solve_overlap_coefficients(3, 0.1).unwrap();
        assert!((x * x - f_closed_d3(0.1).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn config_satisfies_constraints_on_grid() {
        for d in [2, 3, 5, 7] {
            for i in 0..50 {
                let dist = max_disturbance(d) * i as f64 / 49.0;
                let c = AttackConfig::new(d, dist).unwrap();
                let dm1 = d as f64 - 1.0;
                assert!((c.x * c.x + dm1 * c.y * c.y - 1.0).abs() < 1e-12);
                assert!((2.0 * c.x * c.y + (dm1 - 1.0) * c.y * c.y - c.overlap).abs() < 1e-12);
                assert!((c.x * c.x - f_general(d, dist).unwrap()).abs() < 1e-9);
                assert!((disturbance_of_s(d, c.overlap) - dist).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn off_diagonal_layout_is_row_major() {
        // d = 3: A1→3, A2→4, B0→5, B2→6, C0→7, C1→8
        let got: Vec<usize> = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
            .iter()
            .map(|&(j, k)| off_diagonal_index(3, j, k))
            .collect();
        assert_eq!(got, vec![3, 4, 5, 6, 7, 8]);
        let roles = ancilla_roles(3);
        assert_eq!(roles.len(), 9);
        assert_eq!(
            roles[5],
            AncillaRole::OffDiagonal {
                sent: 1,
                received: 0
            }
        );
    }

    #[test]
    fn isometry_shape_and_residual() {
        let iso = build_isometry(2, 0.3).unwrap();
        assert_eq!(iso.map().out_dim(), 8);
        assert_eq!(iso.map().in_dim(), 2);
        assert!(build_isometry(3, 0.1).unwrap().isometry_residual() < 1e-12);
    }

    #[test]
    fn ancilla_orthogonality() {
        let iso = build_isometry(3, 0.1).unwrap();
        let d = 3;
        for j in 0..d {
            for k in 0..d {
                if j == k {
                    continue;
                }
                let off = iso.ancilla(j, k).unwrap();
                for jj in 0..d {
                    for kk in 0..d {
                        let other = iso.ancilla(jj, kk).unwrap();
                        let want = if (j, k) == (jj, kk) { 1.0 } else { 0.0 };
                        assert!((inner_product(off, other).unwrap().norm() - want).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_disturbance_is_identity_channel_for_bob() {
        let iso = build_isometry(3, 0.0).unwrap();
        for psi in mub_bases(3).unwrap().states() {
            let out = iso.map().apply(psi).unwrap();
            let bob = partial_trace(&out, (3, 9), Subsystem::First).unwrap();
            assert!(bob.distance_max(&DensityOperator::pure(psi).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn bob_marginal_for_computational_input() {
        let iso = build_isometry(3, 0.1).unwrap();
        let out = iso.map().apply(&StateVector::basis(3, 0).unwrap()).unwrap();
        let bob = partial_trace(&out, (3, 9), Subsystem::First).unwrap();

        // brute force: ρ_B[k][l] = Σ_e c_k c_l E_0k[e] E_0l[e]*
        let c = [0.9f64.sqrt(), 0.05f64.sqrt(), 0.05f64.sqrt()];
        for k in 0..3 {
            for l in 0..3 {
                let ek = iso.ancilla(0, k).unwrap().amplitudes();
                let el = iso.ancilla(0, l).unwrap().amplitudes();
                let mut want = Complex64::new(0.0, 0.0);
                for e in 0..9 {
                    want += ek[e] * el[e].conj() * c[k] * c[l];
                }
                assert!((bob.matrix()[(k, l)] - want).norm() < 1e-12);
            }
        }
        let diag: Vec<f64> = (0..3).map(|k| bob.matrix()[(k, k)].re).collect();
        for (got, want) in diag.iter().zip([0.9, 0.05, 0.05]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn summary_json_fields() {
        let iso = build_isometry(3, 0.1).unwrap();
        let json = serde_json::to_value(iso.summary()).unwrap();
        for key in ["d", "D", "S", "x", "y", "isometry_residual"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
