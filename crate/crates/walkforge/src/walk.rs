//! Exact continuous-time quantum walk engine: state evolution under a graph
//! Hamiltonian, detection probabilities, perfect-transfer checks, and the
//! O(n)-memory product path for hypercube walks.
//!
//! Evolution is ψ(t) = e^{−iΩtA}ψ(0); only the dimensionless phase s = Ω·t
//! enters any computation. The dense path is capped at 4096 vertices — larger
//! hypercubes must use [`evolve_hypercube_product`], which never touches a
//! 2^n × 2^n matrix.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::graphs::{self, Graph, HammingProfile};
use crate::numlin::{self, EigenDecomposition};

/// Largest dimension the dense evolution path accepts.
pub const DENSE_DIM_LIMIT: usize = 4096;
/// Norm slack accepted on input states and enforced on outputs.
pub const NORM_TOL: f64 = 1e-9;

/// Normalized amplitude vector over the computational basis
/// (vertex index = bit-string value, qubit 0 = least significant bit).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Basis state |index⟩ in a d-dimensional space.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Basis state from a bit-string label (leftmost character = qubit 0).
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        let (index, n) = graphs::vertex_from_bitstring(bits)?;
        Self::basis_state(1 << n, index)
    }

    /// General superposition. Non-unit norm is an error, not silently fixed.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub(crate) fn from_raw(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }
}

/// Hopping frequency Ω and time t; evolution depends only on s = Ω·t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub omega: f64,
    pub time: f64,
}

impl WalkParams {
    pub fn new(omega: f64, time: f64) -> Self {
        Self { omega, time }
    }

    /// Directly from the dimensionless phase s = Ω·t (Ω = 1).
    pub fn from_phase(s: f64) -> Self {
        Self { omega: 1.0, time: s }
    }

    /// From the separable circuit angle θ = 2Ωt.
    pub fn from_theta(theta: f64, omega: f64) -> Self {
        Self {
            omega,
            time: theta / (2.0 * omega),
        }
    }

    pub fn phase(&self) -> f64 {
        self.omega * self.time
    }
}

/// Labeled probability table at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistribution {
    pub probabilities: Vec<f64>,
    /// Time in units of 1/Ω.
    pub time: f64,
    pub labels: Vec<String>,
}

impl WalkDistribution {
    pub fn from_state(psi: &StateVector, time: f64, labels: Vec<String>) -> Result<Self> {
        if labels.len() != psi.dim() {
            return Err(Error::LengthMismatch {
                expected: psi.dim(),
                got: labels.len(),
            });
        }
        Ok(Self {
            probabilities: psi.probabilities(),
            time,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// Total variation distance ½ Σ |p − q|.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    0.5 * p
        .iter()
        .zip(q)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
}

/// Cached eigendecomposition of a graph Hamiltonian, for sweeping many time
/// points without re-decomposing.
#[derive(Debug, Clone)]
pub struct GraphPropagator {
    dim: usize,
    eig: EigenDecomposition,
}

impl GraphPropagator {
    pub fn new(g: &Graph) -> Result<Self> {
        let d = g.num_vertices();
        if d > DENSE_DIM_LIMIT {
            return Err(Error::DimensionTooLarge {
                got: d,
                max: DENSE_DIM_LIMIT,
                hint: " (use evolve_hypercube_product for large hypercubes)",
            });
        }
        Ok(Self {
            dim: d,
            eig: numlin::eig_hermitian(&g.adjacency())?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// e^{−i·s·A}.
    pub fn unitary(&self, s: f64) -> numlin::CMatrix {
        self.eig.evolution_operator(s)
    }

    /// ψ(t) = e^{−i·s·A} ψ(0).
    pub fn evolve(&self, s: f64, psi0: &StateVector) -> Result<StateVector> {
        if psi0.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: psi0.dim(),
            });
        }
        Ok(StateVector::from_raw(
            self.eig.evolve_vector(s, psi0.amplitudes()),
        ))
    }
}

/// Evolve a state exactly under the graph Hamiltonian: ψ(t) = e^{−iΩtA}ψ(0).
pub fn evolve_exact(g: &Graph, params: WalkParams, psi0: &StateVector) -> Result<StateVector> {
    GraphPropagator::new(g)?.evolve(params.phase(), psi0)
}

/// |⟨dst| e^{−iΩtA} |src⟩|².
pub fn perfect_transfer_fidelity(
    g: &Graph,
    params: WalkParams,
    src: usize,
    dst: usize,
) -> Result<f64> {
    let d = g.num_vertices();
    if dst >= d {
        return Err(Error::InvalidArgument(format!(
            "destination vertex {dst} out of range for {d} vertices"
        )));
    }
    let psi = evolve_exact(g, params, &StateVector::basis_state(d, src)?)?;
    Ok(psi.amplitudes()[dst].norm_sqr())
}

/// Hypercube walk through the product structure e^{−iΩtA} = (e^{−iΩtX})^⊗n:
/// every qubit flips independently with probability sin²(Ωt), so vertex and
/// level probabilities follow in O(n) memory for any n ≤ 20.
#[derive(Debug, Clone, Copy)]
pub struct HypercubeProductWalk {
    n: usize,
    origin: usize,
    /// Per-qubit flip probability sin²(Ωt).
    flip: f64,
}

impl HypercubeProductWalk {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn flip_probability(&self) -> f64 {
        self.flip
    }

    /// P(walker at `vertex`) = p^k (1−p)^{n−k} with k the Hamming distance
    /// from the origin.
    pub fn vertex_probability(&self, vertex: usize) -> f64 {
        let k = ((vertex ^ self.origin).count_ones()) as i32;
        self.flip.powi(k) * (1.0 - self.flip).powi(self.n as i32 - k)
    }

    /// Level k carries C(n,k) p^k (1−p)^{n−k}.
    pub fn profile(&self) -> HammingProfile {
        let levels = (0..=self.n)
            .map(|k| {
                binomial(self.n, k)
                    * self.flip.powi(k as i32)
                    * (1.0 - self.flip).powi((self.n - k) as i32)
            })
            .collect();
        HammingProfile { levels }
    }
}

/// Walk on the n-dimensional hypercube from `origin`, via the per-qubit
/// product structure. Memory O(n), never O(2^n).
pub fn evolve_hypercube_product(
    n: usize,
    params: WalkParams,
    origin: usize,
) -> Result<HypercubeProductWalk> {
    if n == 0 || n > graphs::MAX_HYPERCUBE_DIM {
        return Err(Error::DimensionTooLarge {
            got: n,
            max: graphs::MAX_HYPERCUBE_DIM,
            hint: "",
        });
    }
    if origin >> n != 0 {
        return Err(Error::InvalidArgument(format!(
            "origin {origin} out of range for n = {n}"
        )));
    }
    let s = params.phase();
    Ok(HypercubeProductWalk {
        n,
        origin,
        flip: s.sin() * s.sin(),
    })
}

/// Binomial coefficient in f64 (exact for the n ≤ 20 range used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_phase_is_identity() {
        let g = graphs::hypercube(3).unwrap();
        let psi0 = StateVector::basis_state(8, 5).unwrap();
        let psi = evolve_exact(&g, WalkParams::from_phase(0.0), &psi0).unwrap();
        assert!((psi.inner(&psi0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hypercube_perfect_transfer_at_half_pi() {
        let g = graphs::hypercube(3).unwrap();
        let psi = evolve_exact(
            &g,
            WalkParams::from_phase(PI / 2.0),
            &StateVector::basis_state(8, 0).unwrap(),
        )
        .unwrap();
        assert!((psi.probabilities()[7] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pst_line_transfer_matches_hypercube_profile() {
        // Oracle for the end-to-end line transfer: the hypercube walk's
        // Hamming profile at the same phase.
        let line = graphs::pst_line(3).unwrap();
        let cube = graphs::hypercube(3).unwrap();
        for &s in &[PI / 2.0, PI / 4.0, 0.9, 2.2] {
            let params = WalkParams::from_phase(s);
            let line_psi =
                evolve_exact(&line, params, &StateVector::basis_state(4, 0).unwrap()).unwrap();
            let cube_psi =
                evolve_exact(&cube, params, &StateVector::basis_state(8, 0).unwrap()).unwrap();
            let profile = graphs::hamming_profile(&cube_psi.probabilities(), 0).unwrap();
            for (p, q) in line_psi.probabilities().iter().zip(&profile.levels) {
                assert!((p - q).abs() < 1e-9, "s = {s}");
            }
        }
        // and at s = π/2 the line transfer is perfect
        let f = perfect_transfer_fidelity(&line, WalkParams::from_phase(PI / 2.0), 0, 3).unwrap();
        assert!((f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn line_hypercube_collapse_up_to_n6() {
        for n in [3, 4, 6] {
            let line = graphs::pst_line(n).unwrap();
            let cube = graphs::hypercube(n).unwrap();
            let line_prop = GraphPropagator::new(&line).unwrap();
            let cube_prop = GraphPropagator::new(&cube).unwrap();
            let line0 = StateVector::basis_state(n + 1, 0).unwrap();
            let cube0 = StateVector::basis_state(1 << n, 0).unwrap();
            for i in 0..16 {
                let s = 0.1 + 0.21 * i as f64;
                let lp = line_prop.evolve(s, &line0).unwrap();
                let cp = cube_prop.evolve(s, &cube0).unwrap();
                let profile = graphs::hamming_profile(&cp.probabilities(), 0).unwrap();
                for (p, q) in lp.probabilities().iter().zip(&profile.levels) {
                    assert!((p - q).abs() < 1e-9, "n = {n}, s = {s}");
                }
            }
        }
    }

    #[test]
    fn norm_is_conserved() {
        let g = graphs::pst_line(5).unwrap();
        let psi0 = StateVector::basis_state(6, 2).unwrap();
        for i in 0..8 {
            let psi = evolve_exact(&g, WalkParams::from_phase(0.37 * i as f64), &psi0).unwrap();
            assert!((psi.norm() - 1.0).abs() < NORM_TOL);
        }
    }

    #[test]
    fn time_reversal_returns_to_start() {
        let g = graphs::hypercube(4).unwrap();
        let psi0 = StateVector::basis_state(16, 9).unwrap();
        let fwd = evolve_exact(&g, WalkParams::from_phase(1.3), &psi0).unwrap();
        let back = evolve_exact(&g, WalkParams::from_phase(-1.3), &fwd).unwrap();
        for (a, b) in back.amplitudes().iter().zip(psi0.amplitudes()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn dimension_checks() {
        let g = graphs::hypercube(3).unwrap();
        let wrong = StateVector::basis_state(4, 0).unwrap();
        assert!(matches!(
            evolve_exact(&g, WalkParams::from_phase(1.0), &wrong),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn non_normalized_input_is_rejected() {
        let res = StateVector::from_amplitudes(vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)]);
        assert!(matches!(res, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn product_walk_point_masses() {
        let w = evolve_hypercube_product(20, WalkParams::from_phase(PI / 2.0), 0).unwrap();
        let prof = w.profile();
        assert!((prof.levels[20] - 1.0).abs() < 1e-9);
        for k in 0..20 {
            assert!(prof.levels[k].abs() < 1e-9);
        }

        let w = evolve_hypercube_product(7, WalkParams::from_phase(PI), 0).unwrap();
        assert!((w.profile().levels[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn product_walk_binomial_at_quarter_pi() {
        let w = evolve_hypercube_product(3, WalkParams::from_phase(PI / 4.0), 0).unwrap();
        let want = [0.125, 0.375, 0.375, 0.125];
        for (got, want) in w.profile().levels.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn product_walk_matches_dense_path() {
        for n in 1..=6 {
            let g = graphs::hypercube(n).unwrap();
            let prop = GraphPropagator::new(&g).unwrap();
            let psi0 = StateVector::basis_state(1 << n, 0).unwrap();
            for i in 0..32 {
                let s = -2.0 + 0.131 * i as f64;
                let dense = prop.evolve(s, &psi0).unwrap();
                let product =
                    evolve_hypercube_product(n, WalkParams::from_phase(s), 0).unwrap();
                for (v, p) in dense.probabilities().iter().enumerate() {
                    assert!(
                        (p - product.vertex_probability(v)).abs() < 1e-9,
                        "n = {n}, s = {s}, v = {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn transfer_fidelity_cases() {
        let g = graphs::hypercube(3).unwrap();
        let f = perfect_transfer_fidelity(&g, WalkParams::from_phase(PI / 2.0), 0, 7).unwrap();
        assert!((f - 1.0).abs() < 1e-9);

        let f = perfect_transfer_fidelity(&g, WalkParams::from_phase(0.0), 5, 5).unwrap();
        assert!((f - 1.0).abs() < 1e-12);

        // p² with p = 1/2, cross-checked against the dense 4×4 exponential
        let g2 = graphs::hypercube(2).unwrap();
        let f = perfect_transfer_fidelity(&g2, WalkParams::from_phase(PI / 4.0), 0, 3).unwrap();
        assert!((f - 0.25).abs() < 1e-9);
        let u = numlin::expm_i_hermitian(&g2.adjacency(), PI / 4.0).unwrap();
        assert!((u[[3, 0]].norm_sqr() - f).abs() < 1e-12);
    }

    #[test]
    fn theta_conversion() {
        let p = WalkParams::from_theta(PI, 1.0);
        assert!((p.phase() - PI / 2.0).abs() < 1e-15);
        let p = WalkParams::from_theta(PI, 2.0);
        assert!((p.phase() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(3, 0), 1.0);
        assert_eq!(binomial(3, 1), 3.0);
        assert_eq!(binomial(20, 10), 184756.0);
        assert_eq!(binomial(4, 5), 0.0);
    }
}
