//! From circuits back to walk graphs: every unitary U defines adjacency
//! matrices A(U) through the matrix logarithm,
//!
//!   A = (i/Ωt)·log U + φ·I + (2πk/(d·Ωt))·J ,
//!
//! with the free parameters k ∈ Z (complete-graph shifts through the
//! idempotent J/d), φ ∈ R (global phase), and an overall rescale b ≠ 0 that
//! trades weight magnitude against the hopping frequency (A ↦ bA with
//! Ω′ = Ω/b). The module also provides the automated sampler that searches
//! random depth-bounded circuits for perfect |0…0⟩ → |1…1⟩ transfer under a
//! coupling-map constraint, and transport reports over extracted graphs.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{simulate_statevector, Circuit};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::numlin::{self, CMatrix};
use crate::walk::{self, StateVector, WalkDistribution, WalkParams};

/// Extracted edge weights with modulus below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-9;
/// Default sampler acceptance threshold: float slack, not physical slack.
pub const DEFAULT_FIDELITY_THRESHOLD: f64 = 1.0 - 1e-6;
/// Default sampler depth bound.
pub const DEFAULT_MAX_DEPTH: usize = 5;

/// Free parameters of the unitary→graph map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionParams {
    pub omega: f64,
    pub time: f64,
    /// Complete-graph multiple.
    pub k: i64,
    /// Real diagonal shift (global-phase freedom).
    pub phi: f64,
    /// Rescale: the returned graph is b·A with effective frequency Ω/b.
    pub b: f64,
}

impl Default for ExtractionParams {
    fn default() -> Self {
        Self {
            omega: 1.0,
            time: 1.0,
            k: 0,
            phi: 0.0,
            b: 1.0,
        }
    }
}

impl ExtractionParams {
    pub fn phase(&self) -> f64 {
        self.omega * self.time
    }

    /// The hopping frequency at which the returned graph reproduces U.
    pub fn omega_effective(&self) -> f64 {
        self.omega / self.b
    }

    fn validate(&self) -> Result<()> {
        if self.phase() == 0.0 || !self.phase().is_finite() {
            return Err(Error::ZeroTime);
        }
        if self.b == 0.0 || !self.b.is_finite() {
            return Err(Error::InvalidArgument("rescale b must be nonzero".into()));
        }
        Ok(())
    }
}

/// Extract the walk graph of a unitary: A = (i/Ωt)·log U + φI + (2πk/(dΩt))·J,
/// then rescaled by b. Evolving the result with Ω′ = Ω/b for time t
/// reproduces U up to the global phase carried by φ.
pub fn graph_from_unitary(u: &CMatrix, params: &ExtractionParams) -> Result<Graph> {
    graph_from_unitary_pruned(u, params, PRUNE_THRESHOLD)
}

pub fn graph_from_unitary_pruned(
    u: &CMatrix,
    params: &ExtractionParams,
    prune: f64,
) -> Result<Graph> {
    params.validate()?;
    let d = u.nrows();
    let s = params.phase();
    // u = e^{iL} with Hermitian principal L, so i·log u = −L and A₀ = −L/(Ωt).
    let log = numlin::logm_unitary_principal(u)?;
    let j_coeff = 2.0 * std::f64::consts::PI * params.k as f64 / (d as f64 * s);
    let mut g = Graph::new(d)?;
    for i in 0..d {
        for j in i..d {
            let mut w = -log[[i, j]] / s + C64::new(j_coeff, 0.0);
            if i == j {
                w += C64::new(params.phi, 0.0);
                w = C64::new(w.re, 0.0);
            }
            w *= params.b;
            if w.norm() > prune {
                g.set_edge(i, j, w)?;
            }
        }
    }
    Ok(g)
}

/// True iff some edge weight has an imaginary part above `tol`; such graphs
/// give direction-dependent (chiral) transport.
pub fn is_chiral(g: &Graph, tol: f64) -> bool {
    g.edges().any(|(_, _, w)| w.im.abs() > tol)
}

/// Directed CNOT placements allowed by the target device.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingMap {
    num_qubits: usize,
    pairs: Vec<(usize, usize)>,
}

impl CouplingMap {
    pub fn new(num_qubits: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        for &(c, t) in &pairs {
            if c >= num_qubits || t >= num_qubits {
                return Err(Error::InvalidArgument(format!(
                    "pair ({c}, {t}) out of range for {num_qubits} qubits"
                )));
            }
            if c == t {
                return Err(Error::InvalidArgument(
                    "coupling pairs must be irreflexive".into(),
                ));
            }
        }
        Ok(Self { num_qubits, pairs })
    }

    /// Linear chain, both directions.
    pub fn linear(num_qubits: usize) -> Self {
        let mut pairs = Vec::new();
        for q in 0..num_qubits.saturating_sub(1) {
            pairs.push((q, q + 1));
            pairs.push((q + 1, q));
        }
        Self { num_qubits, pairs }
    }

    /// All ordered pairs.
    pub fn full(num_qubits: usize) -> Self {
        let mut pairs = Vec::new();
        for c in 0..num_qubits {
            for t in 0..num_qubits {
                if c != t {
                    pairs.push((c, t));
                }
            }
        }
        Self { num_qubits, pairs }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// Angle distribution for sampled U3 parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleDistribution {
    /// {0, ±π/4, ±π/2, ±3π/4, π}: keeps exact perfect transfer reachable and
    /// searches reproducible.
    Grid,
    /// Uniform over (−π, π].
    Continuous,
}

/// Configuration of the random-circuit perfect-transfer sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub num_qubits: usize,
    pub max_depth: usize,
    pub max_tries: u64,
    pub seed: u64,
    pub fidelity_threshold: f64,
    pub use_u3: bool,
    pub use_cnot: bool,
    pub angles: AngleDistribution,
}

impl SamplerConfig {
    pub fn new(num_qubits: usize, max_tries: u64, seed: u64) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidArgument("sampler needs ≥ 1 qubit".into()));
        }
        Ok(Self {
            num_qubits,
            max_depth: DEFAULT_MAX_DEPTH,
            max_tries,
            seed,
            fidelity_threshold: DEFAULT_FIDELITY_THRESHOLD,
            use_u3: true,
            use_cnot: true,
            angles: AngleDistribution::Grid,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.max_depth == 0 {
            return Err(Error::InvalidArgument("max_depth must be ≥ 1".into()));
        }
        if !(self.fidelity_threshold > 0.0 && self.fidelity_threshold <= 1.0) {
            return Err(Error::InvalidArgument(
                "fidelity threshold must lie in (0, 1]".into(),
            ));
        }
        if !self.use_u3 && !self.use_cnot {
            return Err(Error::InvalidArgument("empty gate palette".into()));
        }
        Ok(())
    }
}

const GRID_ANGLES: [f64; 8] = [
    0.0,
    std::f64::consts::FRAC_PI_4,
    -std::f64::consts::FRAC_PI_4,
    std::f64::consts::FRAC_PI_2,
    -std::f64::consts::FRAC_PI_2,
    3.0 * std::f64::consts::FRAC_PI_4,
    -3.0 * std::f64::consts::FRAC_PI_4,
    std::f64::consts::PI,
];

fn sample_angle(rng: &mut ChaCha8Rng, dist: AngleDistribution) -> f64 {
    match dist {
        AngleDistribution::Grid => GRID_ANGLES[rng.gen_range(0..GRID_ANGLES.len())],
        AngleDistribution::Continuous => {
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)
        }
    }
}

/// Chance a layer slot stays idle; keeps sampled circuits from always being
/// fully dense, which empirically raises the perfect-transfer hit rate.
const LAYER_IDLE_PROB: f64 = 0.25;
/// Chance a placement draws a CNOT when both palettes are enabled.
const CNOT_PROB: f64 = 0.5;

/// One random layered circuit honoring the coupling map and depth bound.
fn random_layered_circuit(
    cfg: &SamplerConfig,
    map: &CouplingMap,
    rng: &mut ChaCha8Rng,
) -> Circuit {
    let n = cfg.num_qubits;
    let mut c = Circuit::new(n);
    for _ in 0..cfg.max_depth {
        let mut free = vec![true; n];
        let mut remaining = n;
        while remaining > 0 {
            if cfg.use_u3 && rng.gen_bool(LAYER_IDLE_PROB) {
                let open: Vec<usize> = (0..n).filter(|&q| free[q]).collect();
                let q = open[rng.gen_range(0..open.len())];
                free[q] = false;
                remaining -= 1;
                continue;
            }
            let try_cnot =
                cfg.use_cnot && remaining >= 2 && (!cfg.use_u3 || rng.gen_bool(CNOT_PROB));
            if try_cnot {
                let open: Vec<(usize, usize)> = map
                    .pairs()
                    .iter()
                    .copied()
                    .filter(|&(a, b)| free[a] && free[b])
                    .collect();
                if !open.is_empty() {
                    let (ctl, tgt) = open[rng.gen_range(0..open.len())];
                    c.cx(ctl, tgt).expect("validated pair");
                    free[ctl] = false;
                    free[tgt] = false;
                    remaining -= 2;
                    continue;
                }
            }
            if cfg.use_u3 {
                let open: Vec<usize> = (0..n).filter(|&q| free[q]).collect();
                let q = open[rng.gen_range(0..open.len())];
                let theta = sample_angle(rng, cfg.angles);
                let phi = sample_angle(rng, cfg.angles);
                let lambda = sample_angle(rng, cfg.angles);
                c.u3(q, theta, phi, lambda).expect("validated qubit");
                free[q] = false;
                remaining -= 1;
            } else {
                break;
            }
        }
    }
    c
}

/// Search seeded random circuits (depth ≤ max_depth, CNOTs on the coupling
/// map) for perfect |0…0⟩ → |1…1⟩ transfer. Try k draws its gates from the
/// derived seed `seed + k`, so the result list is deterministic and ordered
/// by try index. An empty result is a valid outcome, not an error.
pub fn sample_perfect_transfer(
    cfg: &SamplerConfig,
    map: &CouplingMap,
) -> Result<Vec<(u64, Circuit, f64)>> {
    cfg.validate()?;
    if map.num_qubits() != cfg.num_qubits {
        return Err(Error::DimensionMismatch {
            left: cfg.num_qubits,
            right: map.num_qubits(),
        });
    }
    let d = 1usize << cfg.num_qubits;
    let start = StateVector::basis_state(d, 0)?;
    let mut found = Vec::new();
    for try_idx in 0..cfg.max_tries {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(try_idx));
        let c = random_layered_circuit(cfg, map, &mut rng);
        let psi = simulate_statevector(&c, &start)?;
        let fidelity = psi.amplitudes()[d - 1].norm_sqr();
        if fidelity >= cfg.fidelity_threshold {
            debug_assert!(c.depth() <= cfg.max_depth);
            found.push((try_idx, c, fidelity));
        }
    }
    Ok(found)
}

/// Per-initial-state transport summary on a graph.
#[derive(Debug, Clone)]
pub struct TransportEntry {
    pub initial_label: String,
    pub initial_vertex: usize,
    pub distribution: WalkDistribution,
    /// Vertices reachable from the start under the graph's couplings; the
    /// walk is confined here exactly when the set is a proper subset.
    pub invariant_set: Vec<usize>,
    /// Probability inside the invariant set at the report time.
    pub confined_probability: f64,
}

#[derive(Debug, Clone)]
pub struct TransportReport {
    pub time: f64,
    pub entries: Vec<TransportEntry>,
}

/// Evolve each initial basis state to time t and report the full vertex
/// distribution plus the invariant subspace it is confined to. Support
/// growth is computed by closing the start vertex under the nonzero
/// couplings, which is exactly the set any evolution time can populate.
pub fn transport_report(
    g: &Graph,
    params: WalkParams,
    initial_vertices: &[usize],
) -> Result<TransportReport> {
    let d = g.num_vertices();
    let prop = walk::GraphPropagator::new(g)?;
    let labels: Vec<String> = (0..d).map(|v| g.label_of(v)).collect();
    let mut entries = Vec::new();
    for &v in initial_vertices {
        let psi = prop.evolve(params.phase(), &StateVector::basis_state(d, v)?)?;
        let dist = WalkDistribution {
            probabilities: psi.probabilities(),
            time: params.time,
            labels: labels.clone(),
        };
        let invariant_set = reachable_set(g, v);
        let confined: f64 = invariant_set
            .iter()
            .map(|&u| dist.probabilities[u])
            .sum();
        entries.push(TransportEntry {
            initial_label: g.label_of(v),
            initial_vertex: v,
            distribution: dist,
            invariant_set,
            confined_probability: confined,
        });
    }
    Ok(TransportReport {
        time: params.time,
        entries,
    })
}

fn reachable_set(g: &Graph, start: usize) -> Vec<usize> {
    let d = g.num_vertices();
    let mut seen = vec![false; d];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    (0..d).filter(|&v| seen[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_unitary;
    use crate::compile;
    use crate::graphs;
    use std::f64::consts::PI;

    #[test]
    fn identity_extracts_to_empty_graph() {
        let g = graph_from_unitary(&numlin::identity(4), &ExtractionParams::default()).unwrap();
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn single_qubit_rotation_extracts_to_unit_line() {
        // U = e^{−iΩtX} with Ωt ∈ (0, π) recovers the two-vertex unit edge.
        let x = graphs::hypercube(1).unwrap().adjacency();
        let params = ExtractionParams {
            omega: 1.0,
            time: 0.9,
            ..Default::default()
        };
        let u = numlin::expm_i_hermitian(&x, 0.9).unwrap();
        let g = graph_from_unitary(&u, &params).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert!((g.weight(0, 1) - C64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn complete_graph_shift_preserves_dynamics_on_two_vertices() {
        let x = graphs::hypercube(1).unwrap().adjacency();
        let s = 0.9;
        let u = numlin::expm_i_hermitian(&x, s).unwrap();
        let base = ExtractionParams {
            omega: 1.0,
            time: s,
            ..Default::default()
        };
        let shifted = ExtractionParams { k: 1, ..base };
        let g0 = graph_from_unitary(&u, &base).unwrap();
        let g1 = graph_from_unitary(&u, &shifted).unwrap();
        // A shifted by (π/Ωt)·J entrywise
        let delta = PI / s;
        for i in 0..2 {
            for j in i..2 {
                let got = g1.weight(i, j) - g0.weight(i, j);
                assert!((got - C64::new(delta, 0.0)).norm() < 1e-9);
            }
        }
        // identical walk dynamics
        let u1 = numlin::expm_i_hermitian(&g1.adjacency(), s).unwrap();
        assert!(numlin::max_abs_diff_mod_phase(&u1, &u) < 1e-7);
    }

    #[test]
    fn extraction_requires_unitary_and_nonzero_phase() {
        let mut m = numlin::identity(2);
        m[[0, 0]] = C64::new(2.0, 0.0);
        assert!(matches!(
            graph_from_unitary(&m, &ExtractionParams::default()),
            Err(Error::NotUnitary { .. })
        ));
        let p = ExtractionParams {
            time: 0.0,
            ..Default::default()
        };
        assert!(matches!(
            graph_from_unitary(&numlin::identity(2), &p),
            Err(Error::ZeroTime)
        ));
    }

    #[test]
    fn round_trip_on_random_circuits() {
        let cfg = SamplerConfig {
            angles: AngleDistribution::Continuous,
            ..SamplerConfig::new(3, 0, 0).unwrap()
        };
        let map = CouplingMap::linear(3);
        let params = ExtractionParams::default();
        for seed in 0..12u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
            let c = random_layered_circuit(&cfg, &map, &mut rng);
            let u = circuit_unitary(&c).unwrap();
            let g = graph_from_unitary(&u, &params).unwrap();
            let a = g.adjacency();
            assert!(numlin::hermiticity_residual(&a) <= 1e-8);
            let back = numlin::expm_i_hermitian(&a, params.phase()).unwrap();
            assert!(
                numlin::max_abs_diff_mod_phase(&back, &u) <= 1e-7,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn phi_and_b_freedom_never_move_probabilities() {
        let c = compile::compile_hypercube_separable(3, WalkParams::from_phase(0.7)).unwrap();
        let u = circuit_unitary(&c).unwrap();
        let base = ExtractionParams::default();
        let variants = [
            ExtractionParams {
                phi: 1.3,
                ..base
            },
            ExtractionParams { b: 2.5, ..base },
            ExtractionParams {
                phi: -0.4,
                b: 0.5,
                ..base
            },
        ];
        let g0 = graph_from_unitary(&u, &base).unwrap();
        let psi0 = StateVector::basis_state(8, 3).unwrap();
        let ref_probs = walk::evolve_exact(
            &g0,
            WalkParams::new(base.omega_effective(), base.time),
            &psi0,
        )
        .unwrap()
        .probabilities();
        for p in variants {
            let g = graph_from_unitary(&u, &p).unwrap();
            let probs = walk::evolve_exact(
                &g,
                WalkParams::new(p.omega_effective(), p.time),
                &psi0,
            )
            .unwrap()
            .probabilities();
            for (a, b) in probs.iter().zip(&ref_probs) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn chirality_predicate() {
        assert!(!is_chiral(&graphs::hypercube(3).unwrap(), 1e-9));
        let mut g = Graph::new(2).unwrap();
        g.set_edge(0, 1, C64::new(0.0, 1.0)).unwrap();
        assert!(is_chiral(&g, 1e-9));
    }

    #[test]
    fn sampler_single_qubit_finds_bit_flip() {
        let cfg = SamplerConfig {
            use_cnot: false,
            max_depth: 1,
            ..SamplerConfig::new(1, 200, 3).unwrap()
        };
        let found = sample_perfect_transfer(&cfg, &CouplingMap::linear(1)).unwrap();
        assert!(!found.is_empty());
        for (_, c, f) in &found {
            assert!(*f >= cfg.fidelity_threshold);
            assert!(c.depth() <= 1);
        }
    }

    #[test]
    fn sampler_cnot_only_finds_nothing() {
        // |00⟩ is a fixed point of every CNOT circuit.
        let cfg = SamplerConfig {
            use_u3: false,
            ..SamplerConfig::new(2, 300, 5).unwrap()
        };
        let found = sample_perfect_transfer(&cfg, &CouplingMap::linear(2)).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn sampler_is_deterministic_and_depth_bounded() {
        let cfg = SamplerConfig::new(4, 1500, 20_000).unwrap();
        let map = CouplingMap::linear(4);
        let a = sample_perfect_transfer(&cfg, &map).unwrap();
        let b = sample_perfect_transfer(&cfg, &map).unwrap();
        assert_eq!(a.len(), b.len());
        for ((ta, ca, fa), (tb, cb, fb)) in a.iter().zip(&b) {
            assert_eq!(ta, tb);
            assert_eq!(ca, cb);
            assert_eq!(fa, fb);
        }
        for (_, c, _) in &a {
            assert!(c.depth() <= cfg.max_depth);
            for g in c.gates() {
                if let crate::circuit::Gate::Cnot { control, target } = g {
                    assert!(map.pairs().contains(&(*control, *target)));
                }
            }
        }
    }

    #[test]
    fn transport_respects_disconnected_components() {
        // two disjoint edges: {0,1} and {2,3}
        let mut g = Graph::new(4).unwrap();
        g.set_edge(0, 1, C64::new(1.0, 0.0)).unwrap();
        g.set_edge(2, 3, C64::new(0.5, 0.2)).unwrap();
        let report = transport_report(&g, WalkParams::from_phase(1.1), &[0, 2]).unwrap();
        assert_eq!(report.entries[0].invariant_set, vec![0, 1]);
        assert!((report.entries[0].confined_probability - 1.0).abs() < 1e-12);
        assert_eq!(report.entries[1].invariant_set, vec![2, 3]);
        assert!((report.entries[1].confined_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampler_output_round_trips_through_extraction() {
        let cfg = SamplerConfig::new(4, 1500, 20_000).unwrap();
        let map = CouplingMap::linear(4);
        let found = sample_perfect_transfer(&cfg, &map).unwrap();
        assert!(!found.is_empty(), "seeded search must find a transfer circuit");
        let (_, c, _) = &found[0];
        let u = circuit_unitary(c).unwrap();
        let params = ExtractionParams::default();
        let g = graph_from_unitary(&u, &params).unwrap();
        // the walk on the extracted graph reproduces the transfer
        let f = walk::perfect_transfer_fidelity(
            &g,
            WalkParams::new(params.omega_effective(), params.time),
            0,
            15,
        )
        .unwrap();
        assert!(f >= 1.0 - 1e-6, "fidelity {f}");
        // chirality is reported, not asserted: just exercise the predicate
        let _ = is_chiral(&g, 1e-9);
    }
}
