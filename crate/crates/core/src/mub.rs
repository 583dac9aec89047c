//! Mutually unbiased bases for `d = 2` and odd prime `d`.
//!
//! - `d = 2`: eigenbases of the three Pauli operators (six-state protocol).
//! - `d = 3`: the four literal qutrit bases `{|0⟩,|1⟩,|2⟩}`, `{α,β,γ}`,
//!   `{α',β',γ'}`, `{α'',β'',γ''}`.
//! - odd prime `d`: the computational basis plus the `d` bases with
//!   amplitudes `ω^{b j² + j k} / √d`, `ω = e^{2πi/d}`.
//!
//! Every state is stored with its first nonzero amplitude real and positive.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{inner_product, StateVector};

/// A family of orthonormal bases of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    dim: usize,
    bases: Vec<Vec<StateVector>>,
}

impl BasisSet {
    /// Wraps arbitrary bases without certifying them; see [`verify_mub`].
    pub fn from_bases(dim: usize, bases: Vec<Vec<StateVector>>) -> Result<Self> {
        for basis in &bases {
            if basis.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: basis.len(),
                });
            }
            if let Some(v) = basis.iter().find(|v| v.dim() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        Ok(Self { dim, bases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[Vec<StateVector>] {
        &self.bases
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn basis(&self, index: usize) -> Result<&[StateVector]> {
        self.bases
            .get(index)
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange {
                what: "basis",
                index,
                len: self.bases.len(),
            })
    }

    pub fn state(&self, basis: usize, symbol: usize) -> Result<&StateVector> {
        self.basis(basis)?
            .get(symbol)
            .ok_or(Error::IndexOutOfRange {
                what: "symbol",
                index: symbol,
                len: self.dim,
            })
    }

    pub fn states(&self) -> impl Iterator<Item = &StateVector> {
        self.bases.iter().flatten()
    }

    pub fn num_states(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    /// Replaces one state, e.g. to build a deliberately broken set.
    pub fn with_state_replaced(
        &self,
        basis: usize,
        symbol: usize,
        state: StateVector,
    ) -> Result<Self> {
        self.state(basis, symbol)?;
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        let mut out = self.clone();
        out.bases[basis][symbol] = state;
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&BasisSetJson::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BasisSetJson = serde_json::from_str(text)?;
        let bases = raw
            .bases
            .into_iter()
            .map(|basis| {
                basis
                    .into_iter()
                    .map(|amps| {
                        StateVector::new(
                            amps.into_iter()
                                .map(|[re, im]| Complex64::new(re, im))
                                .collect(),
                        )
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bases(raw.dim, bases)
    }
}

/// Wire format: `{"dim": d, "bases": [[[ [re, im], ... ], ...], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
struct BasisSetJson {
    dim: usize,
    bases: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&BasisSet> for BasisSetJson {
    fn from(set: &BasisSet) -> Self {
        Self {
            dim: set.dim,
            bases: set
                .bases
                .iter()
                .map(|basis| {
                    basis
                        .iter()
                        .map(|v| v.amplitudes().iter().map(|a| [a.re, a.im]).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Dimensions with a MUB construction here: 2 and the odd primes.
pub fn is_supported_dimension(d: usize) -> bool {
    is_prime(d)
}

pub fn check_supported_dimension(d: usize) -> Result<()> {
    if is_supported_dimension(d) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension { dim: d })
    }
}

fn root_of_unity(d: usize, power: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * ((power % d) as f64) / d as f64)
}

fn computational_basis(d: usize) -> Vec<StateVector> {
    (0..d)
        .map(|k| StateVector::basis(d, k).expect("index below dim"))
        .collect()
}

fn state_from(amps: Vec<Complex64>, scale: f64) -> StateVector {
    StateVector::new(amps.into_iter().map(|a| a * scale).collect())
        .expect("nonempty")
        .with_canonical_phase()
}

fn qubit_bases() -> Vec<Vec<StateVector>> {
    let s = 0.5f64.sqrt();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    vec![
        computational_basis(2),
        vec![
            state_from(vec![one, one], s),
            state_from(vec![one, -one], s),
        ],
        vec![state_from(vec![one, i], s), state_from(vec![one, -i], s)],
    ]
}

fn qutrit_bases() -> Vec<Vec<StateVector>> {
    let s = 1.0 / 3f64.sqrt();
    let one = Complex64::new(1.0, 0.0);
    let w = root_of_unity(3, 1);
    let wc = w.conj();
    vec![
        computational_basis(3),
        vec![
            state_from(vec![one, one, one], s),
            state_from(vec![one, w, wc], s),
            state_from(vec![one, wc, w], s),
        ],
        vec![
            state_from(vec![w, one, one], s),
            state_from(vec![one, w, one], s),
            state_from(vec![one, one, w], s),
        ],
        vec![
            state_from(vec![wc, one, one], s),
            state_from(vec![one, wc, one], s),
            state_from(vec![one, one, wc], s),
        ],
    ]
}

fn odd_prime_bases(d: usize) -> Vec<Vec<StateVector>> {
    let s = 1.0 / (d as f64).sqrt();
    let mut bases = vec![computational_basis(d)];
    for b in 0..d {
        let basis = (0..d)
            .map(|k| {
                let amps = (0..d)
                    .map(|j| root_of_unity(d, (b * j * j + j * k) % d))
                    .collect();
                state_from(amps, s)
            })
            .collect();
        bases.push(basis);
    }
    bases
}

/// The maximal MUB set for `d`: `d + 1` bases of `d` states each.
pub fn mub_bases(d: usize) -> Result<BasisSet> {
    check_supported_dimension(d)?;
    let bases = match d {
        2 => qubit_bases(),
        3 => qutrit_bases(),
        _ => odd_prime_bases(d),
    };
    BasisSet::from_bases(d, bases)
}

/// Maximum deviation from orthonormality within each basis and from
/// `|⟨e|f⟩|² = 1/d` across bases.
pub fn verify_mub(set: &BasisSet) -> f64 {
    let target = 1.0 / set.dim as f64;
    let mut worst = 0.0_f64;
    for (a, basis_a) in set.bases.iter().enumerate() {
        for (b, basis_b) in set.bases.iter().enumerate().skip(a) {
            for (i, e) in basis_a.iter().enumerate() {
                for (j, f) in basis_b.iter().enumerate() {
                    let overlap = inner_product(e, f).expect("dims checked on construction");
                    let dev = if a == b {
                        let want = if i == j { 1.0 } else { 0.0 };
                        (overlap - Complex64::new(want, 0.0)).norm()
                    } else {
                        (overlap.norm_sqr() - target).abs()
                    };
                    worst = worst.max(dev);
                }
            }
        }
    }
    worst
}
