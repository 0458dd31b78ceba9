//! One-clean-qubit trace estimation and the sampled Jones estimator.
//!
//! The model: one pure control qubit plus a maximally mixed register.
//! Measuring the control after a Hadamard test on a unitary U yields a
//! Bernoulli variable whose bias encodes one quadrature of `Tr[U]/2^n`, so
//! normalized traces are estimable by sampling. The Jones evaluator embeds
//! the Fibonacci representation into a register via the Zeckendorf code,
//! attaches one rotation qubit that imprints the per-string trace weights,
//! and reads the weighted trace off a single augmented-unitary trace.
//! Sampling draws from the exact Bernoulli law rather than simulating
//! trajectories; the statistics are identical.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::fib::{fib, rep_braid, FibConstants, SectorBasis, SectorLabel, Symbol};
use crate::linalg::{c64, eye, kron, max_abs_diff, CMatrix};
use crate::tol;

/// Largest braid the matrix-level Jones estimator accepts.
pub const MAX_ESTIMATOR_STRANDS: usize = 6;

/// Number of qubits a square power-of-two matrix acts on.
fn qubit_count(m: &CMatrix) -> Result<usize> {
    let d = m.nrows();
    if m.ncols() != d {
        return Err(Error::Contract(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::Contract(format!(
            "dimension {d} is not a power of two >= 2"
        )));
    }
    Ok(d.trailing_zeros() as usize)
}

fn require_unitary(m: &CMatrix) -> Result<()> {
    let defect = max_abs_diff(&(m.adjoint() * m), &eye(m.nrows()));
    if defect > tol::UNITARY_INPUT {
        return Err(Error::Contract(format!(
            "input is not unitary: defect {defect:.3e} exceeds {:.1e}",
            tol::UNITARY_INPUT
        )));
    }
    Ok(())
}

/// CNOT on `qubits` qubits with the given 0-based control and target
/// (qubit 0 is the leftmost tensor factor).
pub fn cnot(qubits: usize, control: usize, target: usize) -> Result<CMatrix> {
    if control >= qubits || target >= qubits || control == target {
        return Err(Error::Contract(format!(
            "invalid CNOT wiring: control {control}, target {target} on {qubits} qubits"
        )));
    }
    let dim = 1usize << qubits;
    let cbit = 1usize << (qubits - 1 - control);
    let tbit = 1usize << (qubits - 1 - target);
    let mut m = CMatrix::zeros(dim, dim);
    for x in 0..dim {
        let y = if x & cbit != 0 { x ^ tbit } else { x };
        m[(y, x)] = c64(1.0, 0.0);
    }
    Ok(m)
}

/// Probability of measuring the clean (first) qubit in |0> after running a
/// unitary on the clean qubit plus a maximally mixed register:
/// p_0 = 2^{-n} Tr[(|0><0| x I) U (|0><0| x I) U^dag].
pub fn dqc1_probability(u: &CMatrix) -> Result<f64> {
    qubit_count(u)?;
    require_unitary(u)?;
    let d = u.nrows() / 2;
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            sum += u[(i, j)].norm_sqr();
        }
    }
    Ok(sum / d as f64)
}

/// The clean-qubit probability as a pure trace: a unitary on two more
/// qubits whose trace is 4 Tr[(|0><0| x I) U (|0><0| x I) U^dag], built by
/// replacing each projector with a CNOT onto a fresh target.
pub fn trace_form_circuit(u: &CMatrix) -> Result<CMatrix> {
    let q = qubit_count(u)?;
    require_unitary(u)?;
    let wide = kron(u, &eye(4));
    let first = cnot(q + 2, 0, q)?;
    let second = cnot(q + 2, 0, q + 1)?;
    Ok(second * &wide * first * wide.adjoint())
}

/// A unitary rewired so that its leading ancilla qubits need not be clean:
/// each ancilla controls a CNOT onto a fresh target before the unitary
/// runs, which zeroes every trace contribution from ancilla states
/// outside |0..0>.
#[derive(Debug, Clone)]
pub struct AugmentedUnitary {
    /// The rewired unitary on `n + 2m` qubits.
    pub matrix: CMatrix,
    /// Number of simulated clean ancillas m.
    pub ancillas: usize,
    /// Trace of the input restricted to the ancilla-|0..0> diagonal block.
    pub block_trace: Complex64,
    /// Trace of the rewired unitary; equals 2^m times `block_trace`.
    pub trace: Complex64,
}

/// Simulate `m` clean ancillas (the first `m` qubits of `u`) with CNOTs
/// onto `m` appended targets.
pub fn clean_ancilla_augment(u: &CMatrix, m: usize) -> Result<AugmentedUnitary> {
    let q = qubit_count(u)?;
    if m == 0 || m > q {
        return Err(Error::Contract(format!(
            "cannot simulate {m} ancillas on a {q}-qubit unitary"
        )));
    }
    require_unitary(u)?;
    let mut augmented = kron(u, &eye(1 << m));
    for j in 0..m {
        augmented *= cnot(q + m, j, q + j)?;
    }
    let block = 1usize << (q - m);
    let mut block_trace = c64(0.0, 0.0);
    for i in 0..block {
        block_trace += u[(i, i)];
    }
    let trace = augmented.trace();
    debug_assert!(
        (trace - block_trace * (1u64 << m) as f64).norm() <= tol::DQC1_EXACT,
        "augmented trace identity violated"
    );
    Ok(AugmentedUnitary {
        matrix: augmented,
        ancillas: m,
        block_trace,
        trace,
    })
}

/// Which quadrature of the normalized trace a Hadamard test measures:
/// `Real` uses a (|0> + |1>)/sqrt(2) control, `Imag` uses (|0> - i|1>)/sqrt(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TracePart {
    Real,
    Imag,
}

/// Exact |0>-outcome probability of the Hadamard test for one quadrature:
/// 1/2 + Re(Tr U)/2^{n+1} or 1/2 + Im(Tr U)/2^{n+1}.
pub fn hadamard_part_probability(u: &CMatrix, part: TracePart) -> Result<f64> {
    qubit_count(u)?;
    require_unitary(u)?;
    let x = u.trace() / u.nrows() as f64;
    let quad = match part {
        TracePart::Real => x.re,
        TracePart::Imag => x.im,
    };
    Ok((0.5 + quad / 2.0).clamp(0.0, 1.0))
}

/// Whether trace estimation evaluates the trace directly or samples the
/// Hadamard-test Bernoulli law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMode {
    Exact,
    Sampled,
}

/// Estimate of a normalized trace `Tr[U]/2^n`, one quadrature per control
/// variant, with per-quadrature standard errors (zero in exact mode).
#[derive(Debug, Clone, Copy)]
pub struct TraceEstimate {
    pub re: f64,
    pub im: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub shots: u64,
}

impl TraceEstimate {
    pub fn value(&self) -> Complex64 {
        c64(self.re, self.im)
    }

    /// Worst per-quadrature standard error.
    pub fn stderr(&self) -> f64 {
        self.stderr_re.max(self.stderr_im)
    }
}

fn sample_quadrature(p0: f64, shots: u64, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let mut zeros = 0u64;
    for _ in 0..shots {
        if rng.random_bool(p0) {
            zeros += 1;
        }
    }
    let p_hat = zeros as f64 / shots as f64;
    let estimate = 2.0 * p_hat - 1.0;
    let stderr = 2.0 * (p_hat * (1.0 - p_hat) / shots as f64).sqrt();
    (estimate, stderr)
}

/// Normalized-trace estimate `Tr[U]/2^n`. Exact mode evaluates the trace;
/// sampled mode draws `shots` Bernoulli outcomes per quadrature from the
/// exact Hadamard-test law (real and imaginary controls use disjoint
/// seed streams) and returns 2p-hat - 1 per quadrature.
pub fn hadamard_trace_estimate(
    u: &CMatrix,
    mode: TraceMode,
    shots: u64,
    seed: u64,
) -> Result<TraceEstimate> {
    qubit_count(u)?;
    require_unitary(u)?;
    match mode {
        TraceMode::Exact => {
            let x = u.trace() / u.nrows() as f64;
            Ok(TraceEstimate {
                re: x.re,
                im: x.im,
                stderr_re: 0.0,
                stderr_im: 0.0,
                shots: 0,
            })
        }
        TraceMode::Sampled => {
            if shots == 0 {
                return Err(Error::Contract(
                    "sampled trace estimation requires at least one shot".into(),
                ));
            }
            let mut rng_re = ChaCha8Rng::seed_from_u64(seed);
            rng_re.set_stream(0);
            let mut rng_im = ChaCha8Rng::seed_from_u64(seed);
            rng_im.set_stream(1);
            let p_re = hadamard_part_probability(u, TracePart::Real)?;
            let p_im = hadamard_part_probability(u, TracePart::Imag)?;
            let (re, stderr_re) = sample_quadrature(p_re, shots, &mut rng_re);
            let (im, stderr_im) = sample_quadrature(p_im, shots, &mut rng_im);
            Ok(TraceEstimate {
                re,
                im,
                stderr_re,
                stderr_im,
                shots,
            })
        }
    }
}

/// A full trace-estimation experiment description.
#[derive(Debug, Clone)]
pub struct CleanQubitExperiment {
    pub unitary: CMatrix,
    pub mode: TraceMode,
    pub shots: u64,
    pub seed: u64,
}

impl CleanQubitExperiment {
    pub fn run(&self) -> Result<TraceEstimate> {
        hadamard_trace_estimate(&self.unitary, self.mode, self.shots, self.seed)
    }
}

/// The Fibonacci representation embedded in a qubit register: strings of
/// length n+1 are coded as Zeckendorf indices, the representation acts on
/// coding bitstrings and the identity elsewhere, and one appended qubit
/// carries a per-string rotation whose block trace imprints the trace
/// weights (1 for *..*, 1/phi after rescale for *..p, 0 otherwise).
#[derive(Debug, Clone)]
pub struct WeightedEmbedding {
    pub strands: usize,
    /// Register width: ceil(log2 f_{n+4}) qubits.
    pub b: usize,
    /// Per-bitstring trace weights in [0, 1], length 2^b.
    pub weights: Vec<f64>,
    /// The embedded representation on 2^b dimensions.
    pub unitary: CMatrix,
    /// The weight-rotation augmentation W on b+1 qubits.
    pub augmented: CMatrix,
    /// phi 2^b / (phi f_n + f_{n-1}): maps `Tr[W]/2^{b+1}` to the weighted trace.
    pub rescale: f64,
}

/// Build the weighted register embedding of a braid's representation.
pub fn weighted_embedding(braid: &BraidWord) -> Result<WeightedEmbedding> {
    let n = braid.strands();
    if n > MAX_ESTIMATOR_STRANDS {
        return Err(Error::Resource(format!(
            "matrix-level estimator is limited to {MAX_ESTIMATOR_STRANDS} strands, got {n}"
        )));
    }
    let m = n + 1;
    let k = FibConstants::new();
    let b = (fib(n + 4) as f64).log2().ceil() as usize;
    let dim = 1usize << b;
    let coding = fib(m + 2) as usize;
    debug_assert!(coding <= dim);

    let rep = rep_braid(braid, SectorLabel::Full);
    let mut unitary = eye(dim);
    for i in 0..coding {
        for j in 0..coding {
            unitary[(i, j)] = rep.matrix[(i, j)];
        }
    }

    let basis = SectorBasis::new(m, SectorLabel::Full)?;
    let mut weights = vec![0.0; dim];
    for (pos, s) in basis.strings.iter().enumerate() {
        if s.first() == Symbol::Star {
            weights[pos] = if s.last() == Symbol::Star {
                1.0 / k.phi
            } else {
                1.0
            };
        }
    }

    let mut augmented = CMatrix::zeros(2 * dim, 2 * dim);
    for y in 0..dim {
        let theta = weights[y].clamp(-1.0, 1.0).acos();
        let (sin, cos) = theta.sin_cos();
        for yp in 0..dim {
            let u = unitary[(y, yp)];
            augmented[(2 * y, 2 * yp)] = u * cos;
            augmented[(2 * y, 2 * yp + 1)] = u * -sin;
            augmented[(2 * y + 1, 2 * yp)] = u * sin;
            augmented[(2 * y + 1, 2 * yp + 1)] = u * cos;
        }
    }

    let normalizer = k.phi * fib(n) as f64 + fib(n - 1) as f64;
    Ok(WeightedEmbedding {
        strands: n,
        b,
        weights,
        unitary,
        augmented,
        rescale: k.phi * dim as f64 / normalizer,
    })
}

/// DQC1 estimate of a braid closure's weighted trace and Jones value,
/// with the exact embedding values computed alongside.
#[derive(Debug, Clone)]
pub struct Dqc1JonesEstimate {
    pub strands: usize,
    pub crossings: usize,
    pub b: usize,
    pub shots: u64,
    pub seed: u64,
    pub trace_estimate: Complex64,
    /// Worst-quadrature sampling error at the weighted-trace scale.
    pub trace_stderr: f64,
    pub jones_estimate: Complex64,
    /// Worst-quadrature sampling error at the Jones scale.
    pub jones_stderr: f64,
    pub exact_trace: Complex64,
    pub exact_jones: Complex64,
}

/// Jones evaluation through the one-clean-qubit estimator. `shots = 0`
/// evaluates the augmented trace exactly; otherwise each quadrature is
/// sampled with `shots` Hadamard-test outcomes.
pub fn dqc1_jones_estimate(braid: &BraidWord, shots: u64, seed: u64) -> Result<Dqc1JonesEstimate> {
    let emb = weighted_embedding(braid)?;
    let k = FibConstants::new();
    let n = braid.strands();
    let w = braid.writhe();
    let prefactor = Complex64::from_polar(
        k.phi.powi(n as i32 - 1),
        6.0 * std::f64::consts::PI * w as f64 / 5.0,
    );

    let exact_t = emb.augmented.trace() / emb.augmented.nrows() as f64;
    let exact_trace = exact_t * emb.rescale;
    let exact_jones = prefactor * exact_trace;

    let mode = if shots == 0 {
        TraceMode::Exact
    } else {
        TraceMode::Sampled
    };
    let est = hadamard_trace_estimate(&emb.augmented, mode, shots, seed)?;
    let trace_estimate = est.value() * emb.rescale;
    let trace_stderr = est.stderr() * emb.rescale;

    Ok(Dqc1JonesEstimate {
        strands: n,
        crossings: braid.len(),
        b: emb.b,
        shots: est.shots,
        seed,
        trace_estimate,
        trace_stderr,
        jones_estimate: prefactor * trace_estimate,
        jones_stderr: trace_stderr * prefactor.norm(),
        exact_trace,
        exact_jones,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use crate::fib::zeckendorf_index;
    use crate::jones::{jones_trace_closure, weighted_trace};
    use crate::linalg::{embed_one, matexp, Pauli};

    fn random_unitary(qubits: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let d = 1usize << qubits;
        let mut h = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                h[(i, j)] = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        let herm = (&h + h.adjoint()) * c64(0.5, 0.0);
        matexp(&herm, c64(0.0, 1.0)).unwrap()
    }

    #[test]
    fn identity_experiment_always_reads_zero() {
        let u = eye(8);
        assert!((dqc1_probability(&u).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn clean_qubit_flip_never_reads_zero() {
        let u = embed_one(3, 0, &Pauli::X.matrix());
        assert!(dqc1_probability(&u).unwrap().abs() < 1e-14);
    }

    #[test]
    fn non_unitary_input_is_rejected() {
        let mut u = eye(4);
        u[(0, 0)] = c64(2.0, 0.0);
        assert!(matches!(dqc1_probability(&u), Err(Error::Contract(_))));
    }

    #[test]
    fn trace_form_reproduces_the_projected_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for qubits in 2..=4usize {
            let u = random_unitary(qubits, &mut rng);
            let d = u.nrows() / 2;
            let mut projected = 0.0;
            for i in 0..d {
                for j in 0..d {
                    projected += u[(i, j)].norm_sqr();
                }
            }
            let circuit = trace_form_circuit(&u).unwrap();
            let via_trace = circuit.trace() / 4.0;
            assert!((via_trace - c64(projected, 0.0)).norm() < tol::DQC1_EMBED);
            // And through the probability: p_0 = projected / 2^{n}.
            let p0 = dqc1_probability(&u).unwrap();
            assert!((p0 - projected / d as f64).abs() < tol::DQC1_EMBED);
        }
    }

    #[test]
    fn ancilla_augmentation_scales_the_block_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for (qubits, m) in [(2usize, 1usize), (3, 1), (3, 2), (4, 2)] {
            let u = random_unitary(qubits, &mut rng);
            let aug = clean_ancilla_augment(&u, m).unwrap();
            let expected = aug.block_trace * (1u64 << m) as f64;
            assert!((aug.trace - expected).norm() < tol::DQC1_EXACT);
            assert!((aug.matrix.trace() - aug.trace).norm() < 1e-14);
        }
    }

    #[test]
    fn identity_augmentation_doubles_the_trace() {
        let aug = clean_ancilla_augment(&eye(4), 1).unwrap();
        // Block trace 2 (the two ancilla-|0> diagonal entries), doubled.
        assert!((aug.trace - c64(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn flipped_ancilla_contributes_nothing() {
        let u = embed_one(2, 0, &Pauli::X.matrix());
        let aug = clean_ancilla_augment(&u, 1).unwrap();
        assert!(aug.block_trace.norm() < 1e-14);
        assert!(aug.trace.norm() < 1e-14);
    }

    #[test]
    fn exact_estimates_match_known_traces() {
        let est = hadamard_trace_estimate(&eye(4), TraceMode::Exact, 0, 0).unwrap();
        assert!((est.value() - c64(1.0, 0.0)).norm() < 1e-14);
        let x = Pauli::X.matrix();
        let est = hadamard_trace_estimate(&x, TraceMode::Exact, 0, 0).unwrap();
        assert!(est.value().norm() < 1e-14);
    }

    #[test]
    fn zero_shots_in_sampled_mode_is_a_contract_violation() {
        let r = hadamard_trace_estimate(&eye(2), TraceMode::Sampled, 0, 0);
        assert!(matches!(r, Err(Error::Contract(_))));
    }

    #[test]
    fn sampled_phase_gate_matches_its_trace_within_four_sigma() {
        let mut u = eye(2);
        u[(1, 1)] = c64(0.0, 1.0);
        let est = hadamard_trace_estimate(&u, TraceMode::Sampled, 100_000, 7).unwrap();
        assert!((est.re - 0.5).abs() <= 4.0 * est.stderr_re);
        assert!((est.im - 0.5).abs() <= 4.0 * est.stderr_im);
        assert!(est.value().norm() <= 1.0 + 4.0 * est.stderr());
    }

    #[test]
    fn sampling_error_shrinks_at_the_square_root_rate() {
        let braid = parse_braid("1 1 1", Some(2)).unwrap();
        let emb = weighted_embedding(&braid).unwrap();
        let exact = emb.augmented.trace() / emb.augmented.nrows() as f64;
        let rms = |shots: u64| -> f64 {
            let mut total = 0.0;
            for seed in 0..40u64 {
                let est = hadamard_trace_estimate(&emb.augmented, TraceMode::Sampled, shots, seed)
                    .unwrap();
                total += (est.re - exact.re).powi(2);
            }
            (total / 40.0).sqrt()
        };
        let ratio = rms(4_000) / rms(8_000);
        let expected = std::f64::consts::SQRT_2;
        assert!(
            ratio > 0.8 * expected && ratio < 1.2 * expected,
            "rms ratio {ratio} is far from sqrt(2)"
        );
    }

    #[test]
    fn embedding_diagonal_matches_the_representation() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for n in 2..=5usize {
            let letters: Vec<i32> = (0..6)
                .map(|_| {
                    let g = rng.random_range(1..n) as i32;
                    if rng.random_bool(0.5) {
                        g
                    } else {
                        -g
                    }
                })
                .collect();
            let braid = BraidWord::new(n, letters).unwrap();
            let emb = weighted_embedding(&braid).unwrap();
            let rep = rep_braid(&braid, SectorLabel::Full);
            for (pos, s) in rep.basis.iter().enumerate() {
                let z = zeckendorf_index(s) as usize;
                assert_eq!(z, pos, "full-sector order is the Zeckendorf order");
                let defect = (emb.unitary[(z, z)] - rep.matrix[(pos, pos)]).norm();
                assert!(defect < tol::DQC1_EMBED);
            }
        }
    }

    #[test]
    fn augmented_trace_equals_twice_the_weighted_diagonal() {
        let braid = parse_braid("1 -2 1 2", Some(3)).unwrap();
        let emb = weighted_embedding(&braid).unwrap();
        let mut weighted = c64(0.0, 0.0);
        for y in 0..emb.weights.len() {
            weighted += emb.unitary[(y, y)] * emb.weights[y];
        }
        let defect = (emb.augmented.trace() - weighted * 2.0).norm();
        assert!(defect < tol::DQC1_EXACT);
    }

    #[test]
    fn exact_estimator_reproduces_the_trace_evaluator() {
        let words: [(&str, usize); 5] = [
            ("", 1),
            ("1 1 1", 2),
            ("1 -2 1 -2", 3),
            ("1 2 3 2 1", 4),
            ("-1 2 -3 4 3 -2", 5),
        ];
        for (word, n) in words {
            let braid = parse_braid(word, Some(n)).unwrap();
            let est = dqc1_jones_estimate(&braid, 0, 0).unwrap();
            let reference = jones_trace_closure(&braid);
            assert!(
                (est.exact_jones - reference.value).norm() < tol::DQC1_EXACT,
                "embedding disagrees with the evaluator on {word:?}"
            );
            assert!((est.jones_estimate - est.exact_jones).norm() < 1e-14);
            let tilde = weighted_trace(&braid).value;
            assert!((est.exact_trace - tilde).norm() < tol::DQC1_EXACT);
        }
    }

    #[test]
    fn sampled_trefoil_lands_within_four_sigma() {
        let braid = parse_braid("1 1 1", Some(2)).unwrap();
        let est = dqc1_jones_estimate(&braid, 1_000_000, 11).unwrap();
        let err = (est.jones_estimate - est.exact_jones).norm();
        // Two quadratures with independent errors of scale jones_stderr.
        assert!(err <= 4.0 * est.jones_stderr * std::f64::consts::SQRT_2);
        assert!(err > 0.0, "sampling noise should be visible");
    }

    #[test]
    fn empty_braid_estimates_unit_trace() {
        let braid = BraidWord::identity(2).unwrap();
        let est = dqc1_jones_estimate(&braid, 100_000, 3).unwrap();
        assert!((est.exact_trace - c64(1.0, 0.0)).norm() < tol::DQC1_EXACT);
        assert!(
            (est.trace_estimate - c64(1.0, 0.0)).norm()
                <= 4.0 * est.trace_stderr * std::f64::consts::SQRT_2
        );
    }

    #[test]
    fn strand_limit_is_a_resource_error() {
        let braid = BraidWord::identity(MAX_ESTIMATOR_STRANDS + 1).unwrap();
        assert!(matches!(
            dqc1_jones_estimate(&braid, 0, 0),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn register_width_covers_all_coding_strings() {
        for n in 1..=MAX_ESTIMATOR_STRANDS {
            let braid = BraidWord::identity(n).unwrap();
            let emb = weighted_embedding(&braid).unwrap();
            assert!(fib(n + 3) as usize <= 1 << emb.b);
            assert!(emb.weights.iter().all(|&w| (0.0..=1.0).contains(&w)));
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let braid = parse_braid("1 1", Some(2)).unwrap();
        let a = dqc1_jones_estimate(&braid, 10_000, 5).unwrap();
        let b = dqc1_jones_estimate(&braid, 10_000, 5).unwrap();
        let c = dqc1_jones_estimate(&braid, 10_000, 6).unwrap();
        assert_eq!(a.trace_estimate, b.trace_estimate);
        assert_ne!(a.trace_estimate, c.trace_estimate);
    }
}
