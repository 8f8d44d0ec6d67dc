//! Gate-level intermediate representation on the {U1, U2, U3, CNOT} basis,
//! dense unitary assembly, statevector simulation with shot sampling, depth
//! accounting, a stochastic noise channel, and the one-hot post-selection
//! filter.
//!
//! Qubit 0 is the least significant bit of the basis index, everywhere.
//! Bit-string labels are written qubit 0 first, so `1000` is basis index 1 on
//! four qubits.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphs::bitstring_label;
use crate::numlin::CMatrix;
use crate::walk::{StateVector, WalkDistribution};

/// Dense unitary assembly is capped here (2^12 × 2^12 complexes).
pub const UNITARY_QUBIT_LIMIT: usize = 12;
/// Gate-by-gate statevector simulation is capped here.
pub const SIM_QUBIT_LIMIT: usize = 24;
/// Post-selection below this surviving weight is reported as an error.
pub const POSTSELECT_MIN_WEIGHT: f64 = 1e-12;

/// One gate of the {U1, U2, U3, CNOT} palette. Angles are radians.
///
/// U3(θ,φ,λ) is the full one-qubit rotation
/// `[[cos(θ/2), −e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(λ+φ)} cos(θ/2)]]`;
/// U2(φ,λ) ≡ U3(π/2,φ,λ) and U1(λ) ≡ diag(1, e^{iλ}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    U1 { qubit: usize, lambda: f64 },
    U2 { qubit: usize, phi: f64, lambda: f64 },
    U3 { qubit: usize, theta: f64, phi: f64, lambda: f64 },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::U1 { qubit, .. } | Gate::U2 { qubit, .. } | Gate::U3 { qubit, .. } => {
                vec![qubit]
            }
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    fn single_qubit_matrix(&self) -> Option<[[C64; 2]; 2]> {
        match *self {
            Gate::U1 { lambda, .. } => Some(u3_entries(0.0, 0.0, lambda)),
            Gate::U2 { phi, lambda, .. } => {
                Some(u3_entries(std::f64::consts::FRAC_PI_2, phi, lambda))
            }
            Gate::U3 {
                theta, phi, lambda, ..
            } => Some(u3_entries(theta, phi, lambda)),
            Gate::Cnot { .. } => None,
        }
    }
}

fn u3_entries(theta: f64, phi: f64, lambda: f64) -> [[C64; 2]; 2] {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    [
        [C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        [
            C64::from_polar(s, phi),
            C64::from_polar(c, lambda + phi),
        ],
    ]
}

/// The 2×2 (or, for CNOT, 4×4) unitary of a gate.
///
/// The CNOT matrix lives in the two-qubit subspace of (control, target) with
/// the **lower-indexed** qubit as the low bit, consistent with the global
/// little-endian convention.
pub fn gate_matrix(g: &Gate) -> CMatrix {
    if let Some(m) = g.single_qubit_matrix() {
        return ndarray::array![[m[0][0], m[0][1]], [m[1][0], m[1][1]]];
    }
    let Gate::Cnot { control, target } = *g else {
        unreachable!()
    };
    let control_low = control < target;
    let mut m = Array2::from_elem((4, 4), C64::new(0.0, 0.0));
    for idx in 0..4usize {
        let (c_bit, t_bit) = if control_low {
            (idx & 1, idx >> 1)
        } else {
            (idx >> 1, idx & 1)
        };
        let t_out = t_bit ^ c_bit;
        let out = if control_low {
            c_bit | (t_out << 1)
        } else {
            t_out | (c_bit << 1)
        };
        m[[out, idx]] = C64::new(1.0, 0.0);
    }
    m
}

/// Ordered gate list over a fixed qubit count.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.num_qubits {
                return Err(Error::InvalidArgument(format!(
                    "qubit {q} out of range for {} qubits",
                    self.num_qubits
                )));
            }
        }
        if let Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(Error::InvalidArgument(
                    "cnot control and target must differ".into(),
                ));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn u1(&mut self, qubit: usize, lambda: f64) -> Result<()> {
        self.push(Gate::U1 { qubit, lambda })
    }

    pub fn u2(&mut self, qubit: usize, phi: f64, lambda: f64) -> Result<()> {
        self.push(Gate::U2 { qubit, phi, lambda })
    }

    pub fn u3(&mut self, qubit: usize, theta: f64, phi: f64, lambda: f64) -> Result<()> {
        self.push(Gate::U3 {
            qubit,
            theta,
            phi,
            lambda,
        })
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(Gate::Cnot { control, target })
    }

    /// Append another circuit's gates (its qubit count must fit).
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits > self.num_qubits {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Depth under greedy as-soon-as-possible layering: gates on disjoint
    /// qubits share a layer.
    pub fn depth(&self) -> usize {
        let mut frontier = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for gate in &self.gates {
            let layer = 1 + gate
                .qubits()
                .iter()
                .map(|&q| frontier[q])
                .max()
                .unwrap_or(0);
            for q in gate.qubits() {
                frontier[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }
}

fn apply_single(amps: &mut [C64], q: usize, m: &[[C64; 2]; 2]) {
    let bit = 1usize << q;
    let mut base = 0;
    while base < amps.len() {
        for i in base..base + bit {
            let j = i | bit;
            let a0 = amps[i];
            let a1 = amps[j];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[j] = m[1][0] * a0 + m[1][1] * a1;
        }
        base += bit << 1;
    }
}

fn apply_cnot(amps: &mut [C64], control: usize, target: usize) {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    for i in 0..amps.len() {
        if i & cbit != 0 && i & tbit == 0 {
            amps.swap(i, i | tbit);
        }
    }
}

fn apply_gate(amps: &mut [C64], gate: &Gate) {
    match gate {
        Gate::Cnot { control, target } => apply_cnot(amps, *control, *target),
        g => {
            let q = g.qubits()[0];
            apply_single(amps, q, &g.single_qubit_matrix().expect("single-qubit gate"));
        }
    }
}

/// Product of the circuit's gate embeddings in application order, as a dense
/// 2^n × 2^n matrix.
pub fn circuit_unitary(c: &Circuit) -> Result<CMatrix> {
    if c.num_qubits() > UNITARY_QUBIT_LIMIT {
        return Err(Error::TooManyQubits {
            got: c.num_qubits(),
            max: UNITARY_QUBIT_LIMIT,
        });
    }
    let d = 1usize << c.num_qubits();
    let mut u = Array2::from_elem((d, d), C64::new(0.0, 0.0));
    let mut col = vec![C64::new(0.0, 0.0); d];
    for j in 0..d {
        col.fill(C64::new(0.0, 0.0));
        col[j] = C64::new(1.0, 0.0);
        for gate in c.gates() {
            apply_gate(&mut col, gate);
        }
        for i in 0..d {
            u[[i, j]] = col[i];
        }
    }
    Ok(u)
}

/// Evolve a statevector through the circuit with gate-by-gate amplitude
/// updates; the full unitary is never materialized.
pub fn simulate_statevector(c: &Circuit, psi0: &StateVector) -> Result<StateVector> {
    if c.num_qubits() > SIM_QUBIT_LIMIT {
        return Err(Error::TooManyQubits {
            got: c.num_qubits(),
            max: SIM_QUBIT_LIMIT,
        });
    }
    let d = 1usize << c.num_qubits();
    if psi0.dim() != d {
        return Err(Error::DimensionMismatch {
            left: d,
            right: psi0.dim(),
        });
    }
    let mut amps = psi0.amplitudes().to_vec();
    for gate in c.gates() {
        apply_gate(&mut amps, gate);
    }
    Ok(StateVector::from_raw(amps))
}

/// Stochastic error channel: depolarizing insertions per gate (trajectory
/// method) plus classical readout flips per measured bit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseSpec {
    /// Probability of a random Pauli after each one-qubit gate.
    pub depol_1q: f64,
    /// Probability of a random two-qubit Pauli after each CNOT.
    pub depol_2q: f64,
    /// Probability of flipping each measured bit.
    pub readout_flip: f64,
}

impl NoiseSpec {
    pub fn new(depol_1q: f64, depol_2q: f64, readout_flip: f64) -> Result<Self> {
        for (name, p) in [
            ("depol_1q", depol_1q),
            ("depol_2q", depol_2q),
            ("readout_flip", readout_flip),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {p} outside [0, 1]"
                )));
            }
        }
        Ok(Self {
            depol_1q,
            depol_2q,
            readout_flip,
        })
    }

    pub fn is_noiseless(&self) -> bool {
        self.depol_1q == 0.0 && self.depol_2q == 0.0 && self.readout_flip == 0.0
    }
}

fn apply_pauli(amps: &mut [C64], q: usize, which: u8) {
    let bit = 1usize << q;
    match which {
        // X
        0 => {
            for i in 0..amps.len() {
                if i & bit == 0 {
                    amps.swap(i, i | bit);
                }
            }
        }
        // Y
        1 => {
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let j = i | bit;
                    let a0 = amps[i];
                    let a1 = amps[j];
                    amps[i] = C64::new(0.0, -1.0) * a1;
                    amps[j] = C64::new(0.0, 1.0) * a0;
                }
            }
        }
        // Z
        _ => {
            for (i, a) in amps.iter_mut().enumerate() {
                if i & bit != 0 {
                    *a = -*a;
                }
            }
        }
    }
}

fn draw_outcome(amps: &[C64], rng: &mut ChaCha8Rng) -> usize {
    let r: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, a) in amps.iter().enumerate() {
        acc += a.norm_sqr();
        if r < acc {
            return i;
        }
    }
    amps.len() - 1
}

fn flip_readout(outcome: usize, num_bits: usize, p: f64, rng: &mut ChaCha8Rng) -> usize {
    let mut out = outcome;
    for b in 0..num_bits {
        if rng.gen::<f64>() < p {
            out ^= 1 << b;
        }
    }
    out
}

fn counts_to_distribution(counts: &[u64], shots: u64, num_bits: usize) -> WalkDistribution {
    WalkDistribution {
        probabilities: counts.iter().map(|&c| c as f64 / shots as f64).collect(),
        time: 0.0,
        labels: (0..counts.len())
            .map(|v| bitstring_label(v, num_bits))
            .collect(),
    }
}

/// Multinomial shot sampling from |amplitudes|², seeded and reproducible.
/// When a noise spec is given, its readout flips are applied to each drawn
/// bit-string (depolarizing terms do not apply here — the state is already
/// evolved; see [`sample_noisy_trajectories`]).
pub fn sample_counts(
    psi: &StateVector,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseSpec>,
) -> Result<WalkDistribution> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be ≥ 1".into()));
    }
    let d = psi.dim();
    if !d.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "sampling needs a qubit-shaped state, got dimension {d}"
        )));
    }
    let num_bits = d.trailing_zeros() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = psi.probabilities();
    let index = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidArgument(format!("bad sampling weights: {e}")))?;
    let flip_p = noise.map(|n| n.readout_flip).unwrap_or(0.0);
    let mut counts = vec![0u64; d];
    for _ in 0..shots {
        let mut v = index.sample(&mut rng);
        if flip_p > 0.0 {
            v = flip_readout(v, num_bits, flip_p, &mut rng);
        }
        counts[v] += 1;
    }
    Ok(counts_to_distribution(&counts, shots, num_bits))
}

/// Monte-Carlo noisy execution: each shot replays the circuit with random
/// Pauli insertions after gates (probability per the spec), then draws one
/// outcome and applies readout flips. Shot k uses the derived seed
/// `seed + k`, so runs are reproducible and parallelizable.
pub fn sample_noisy_trajectories(
    c: &Circuit,
    psi0: &StateVector,
    shots: u64,
    seed: u64,
    noise: &NoiseSpec,
) -> Result<WalkDistribution> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be ≥ 1".into()));
    }
    let d = 1usize << c.num_qubits();
    if psi0.dim() != d {
        return Err(Error::DimensionMismatch {
            left: d,
            right: psi0.dim(),
        });
    }
    let mut counts = vec![0u64; d];
    let mut amps = vec![C64::new(0.0, 0.0); d];
    for shot in 0..shots {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(shot));
        amps.copy_from_slice(psi0.amplitudes());
        for gate in c.gates() {
            apply_gate(&mut amps, gate);
            match gate {
                Gate::Cnot { control, target } => {
                    if noise.depol_2q > 0.0 && rng.gen::<f64>() < noise.depol_2q {
                        // one of the 15 non-identity two-qubit Paulis
                        let which = rng.gen_range(1..16u8);
                        let (pc, pt) = (which / 4, which % 4);
                        if pc > 0 {
                            apply_pauli(&mut amps, *control, pc - 1);
                        }
                        if pt > 0 {
                            apply_pauli(&mut amps, *target, pt - 1);
                        }
                    }
                }
                g => {
                    if noise.depol_1q > 0.0 && rng.gen::<f64>() < noise.depol_1q {
                        apply_pauli(&mut amps, g.qubits()[0], rng.gen_range(0..3u8));
                    }
                }
            }
        }
        let mut v = draw_outcome(&amps, &mut rng);
        if noise.readout_flip > 0.0 {
            v = flip_readout(v, c.num_qubits(), noise.readout_flip, &mut rng);
        }
        counts[v] += 1;
    }
    Ok(counts_to_distribution(&counts, shots, c.num_qubits()))
}

/// Result of one-hot post-selection.
#[derive(Debug, Clone)]
pub struct Postselected {
    /// Renormalized distribution over line positions 0…m−1.
    pub distribution: WalkDistribution,
    /// Fraction of input weight outside the one-hot subspace.
    pub discarded_fraction: f64,
}

/// Keep only the Hamming-weight-1 strings of a distribution over m qubits,
/// mapping basis index 2^i to line position i, and renormalize.
pub fn postselect_onehot(dist: &WalkDistribution) -> Result<Postselected> {
    let d = dist.len();
    if !d.is_power_of_two() || d < 2 {
        return Err(Error::LengthMismatch {
            expected: d.next_power_of_two().max(2),
            got: d,
        });
    }
    let m = d.trailing_zeros() as usize;
    let total = dist.total();
    let valid: Vec<f64> = (0..m).map(|i| dist.probabilities[1 << i]).collect();
    let kept: f64 = valid.iter().sum();
    if kept < POSTSELECT_MIN_WEIGHT {
        return Err(Error::AllWeightDiscarded { valid: kept });
    }
    Ok(Postselected {
        distribution: WalkDistribution {
            probabilities: valid.iter().map(|p| p / kept).collect(),
            time: dist.time,
            labels: (0..m).map(|i| i.to_string()).collect(),
        },
        discarded_fraction: if total > 0.0 { 1.0 - kept / total } else { 1.0 },
    })
}

/// Emit the circuit text format: a `qubits n` header, then one lowercase gate
/// per line with radians in decimal. Emit→parse is bit-exact.
pub fn emit_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.num_qubits());
    for gate in c.gates() {
        match *gate {
            Gate::U1 { qubit, lambda } => {
                out.push_str(&format!("u1 q[{qubit}] {lambda}\n"));
            }
            Gate::U2 { qubit, phi, lambda } => {
                out.push_str(&format!("u2 q[{qubit}] {phi} {lambda}\n"));
            }
            Gate::U3 {
                qubit,
                theta,
                phi,
                lambda,
            } => {
                out.push_str(&format!("u3 q[{qubit}] {theta} {phi} {lambda}\n"));
            }
            Gate::Cnot { control, target } => {
                out.push_str(&format!("cx q[{control}] q[{target}]\n"));
            }
        }
    }
    out
}

fn parse_qubit(token: &str, line: usize) -> Result<usize> {
    token
        .strip_prefix("q[")
        .and_then(|t| t.strip_suffix(']'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::ParseError {
            line,
            msg: format!("expected qubit token like q[0], got `{token}`"),
        })
}

fn parse_angle(token: &str, line: usize) -> Result<f64> {
    token.parse().map_err(|_| Error::ParseError {
        line,
        msg: format!("expected angle in radians, got `{token}`"),
    })
}

/// Parse the circuit text format. Lines starting with `#` are comments.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let c = match (tokens[0], &mut circuit) {
            ("qubits", slot @ None) => {
                let n: usize = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::ParseError {
                        line: line_no,
                        msg: "expected `qubits n`".into(),
                    })?;
                *slot = Some(Circuit::new(n));
                continue;
            }
            ("qubits", Some(_)) => {
                return Err(Error::ParseError {
                    line: line_no,
                    msg: "duplicate qubits header".into(),
                })
            }
            (_, None) => {
                return Err(Error::ParseError {
                    line: line_no,
                    msg: "missing `qubits n` header before gates".into(),
                })
            }
            (_, Some(c)) => c,
        };
        let expect = |n: usize| -> Result<()> {
            if tokens.len() != n {
                Err(Error::ParseError {
                    line: line_no,
                    msg: format!("expected {n} tokens, got {}", tokens.len()),
                })
            } else {
                Ok(())
            }
        };
        let pushed = match tokens[0] {
            "u1" => {
                expect(3)?;
                c.u1(parse_qubit(tokens[1], line_no)?, parse_angle(tokens[2], line_no)?)
            }
            "u2" => {
                expect(4)?;
                c.u2(
                    parse_qubit(tokens[1], line_no)?,
                    parse_angle(tokens[2], line_no)?,
                    parse_angle(tokens[3], line_no)?,
                )
            }
            "u3" => {
                expect(5)?;
                c.u3(
                    parse_qubit(tokens[1], line_no)?,
                    parse_angle(tokens[2], line_no)?,
                    parse_angle(tokens[3], line_no)?,
                    parse_angle(tokens[4], line_no)?,
                )
            }
            "cx" => {
                expect(3)?;
                c.cx(
                    parse_qubit(tokens[1], line_no)?,
                    parse_qubit(tokens[2], line_no)?,
                )
            }
            other => {
                return Err(Error::ParseError {
                    line: line_no,
                    msg: format!("unknown gate `{other}`"),
                })
            }
        };
        pushed.map_err(|e| Error::ParseError {
            line: line_no,
            msg: e.to_string(),
        })?;
    }
    circuit.ok_or_else(|| Error::ParseError {
        line: 1,
        msg: "missing `qubits n` header".into(),
    })
}
