//! Distance-two and distance-three stabilizer codes on one logical qubit,
//! error-detection checks against their code projectors, and penalty
//! encodings that carry a two-local Hamiltonian onto four-qubit code
//! registers while keeping a constant spectral gap to the violating space.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gadget::KLocalHamiltonian;
use crate::linalg::{
    c64, eye, hermitian_eig, kron_chain, max_abs_diff, pauli_to_matrix, CMatrix, Pauli, PauliString,
};
use crate::tol;

/// Largest number of logical qubits the dense encoder accepts (4N physical).
pub const MAX_ENCODED_QUBITS: usize = 3;

/// A stabilizer code on `n` physical qubits encoding one logical qubit,
/// given by explicit generators, codewords, and low-weight logical operators.
#[derive(Debug, Clone)]
pub struct StabilizerCode {
    /// Number of physical qubits.
    pub n: usize,
    /// Independent, mutually commuting, phase-free generators (n - 1 of them).
    pub generators: Vec<PauliString>,
    /// Logical zero codeword as a unit column vector of length 2^n.
    pub zero: CMatrix,
    /// Logical one codeword as a unit column vector of length 2^n.
    pub one: CMatrix,
    /// Logical X operator.
    pub logical_x: PauliString,
    /// Logical Y operator.
    pub logical_y: PauliString,
    /// Logical Z operator.
    pub logical_z: PauliString,
    /// Code distance.
    pub distance: usize,
}

fn pauli_string(phase: Complex64, letters: &str) -> PauliString {
    let factors = letters
        .chars()
        .map(|ch| match ch {
            'I' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            _ => panic!("unknown Pauli letter {ch}"),
        })
        .collect();
    PauliString::new(factors, phase).expect("phase is a fourth root of unity")
}

/// Formats a Pauli string as its sign and letters, e.g. `-IXXI`.
pub fn pauli_letters(p: &PauliString) -> String {
    let mut out = String::new();
    let phase = p.phase();
    if (phase - c64(-1.0, 0.0)).norm() <= 1e-12 {
        out.push('-');
    } else if (phase - c64(0.0, 1.0)).norm() <= 1e-12 {
        out.push('i');
    } else if (phase - c64(0.0, -1.0)).norm() <= 1e-12 {
        out.push_str("-i");
    }
    for f in p.factors() {
        out.push(match f {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        });
    }
    out
}

fn superposition(n: usize, scale: f64, terms: &[(Complex64, &str)]) -> CMatrix {
    let mut v = CMatrix::zeros(1 << n, 1);
    for (coeff, bits) in terms {
        let idx = usize::from_str_radix(bits, 2).expect("binary ket label");
        v[(idx, 0)] += coeff * scale;
    }
    v
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Two Pauli strings commute exactly when the number of positions where
/// both are non-identity and different is even.
fn strings_commute(a: &PauliString, b: &PauliString) -> bool {
    let clashes = a
        .factors()
        .iter()
        .zip(b.factors())
        .filter(|(x, y)| **x != Pauli::I && **y != Pauli::I && x != y)
        .count();
    clashes % 2 == 0
}

fn symplectic_bits(p: &PauliString) -> u64 {
    let n = p.n();
    let mut bits = 0u64;
    for (j, f) in p.factors().iter().enumerate() {
        let (x, z) = match f {
            Pauli::I => (0u64, 0u64),
            Pauli::X => (1, 0),
            Pauli::Y => (1, 1),
            Pauli::Z => (0, 1),
        };
        bits |= x << j;
        bits |= z << (n + j);
    }
    bits
}

/// Gaussian elimination over GF(2) on the symplectic images of the strings.
fn independent(gens: &[PauliString]) -> bool {
    let mut pivots: Vec<u64> = Vec::new();
    for g in gens {
        let mut v = symplectic_bits(g);
        for p in &pivots {
            let lead = 1u64 << (63 - p.leading_zeros());
            if v & lead != 0 {
                v ^= p;
            }
        }
        if v == 0 {
            return false;
        }
        pivots.push(v);
        pivots.sort_unstable_by_key(|p| std::cmp::Reverse(*p));
    }
    true
}

impl StabilizerCode {
    /// Projector onto the codespace, built as the product of (I + g)/2
    /// over the generators.
    pub fn projector(&self) -> CMatrix {
        let dim = 1usize << self.n;
        let mut p = eye(dim);
        for g in &self.generators {
            p = p * (eye(dim) + pauli_to_matrix(g)) * c64(0.5, 0.0);
        }
        p
    }

    /// The 2^n-by-2 isometry whose columns are the two codewords.
    pub fn isometry(&self) -> CMatrix {
        let dim = 1usize << self.n;
        let mut b = CMatrix::zeros(dim, 2);
        b.column_mut(0).copy_from(&self.zero.column(0));
        b.column_mut(1).copy_from(&self.one.column(0));
        b
    }

    fn verify(&self) -> Result<()> {
        let t = tol::STABILIZER;
        let fail = |what: String| Err(Error::Verification(what));
        if self.generators.len() + 1 != self.n {
            return fail(format!(
                "expected {} generators for one logical qubit, got {}",
                self.n - 1,
                self.generators.len()
            ));
        }
        for p in self
            .generators
            .iter()
            .chain([&self.logical_x, &self.logical_y, &self.logical_z])
        {
            if p.n() != self.n {
                return fail(format!("operator {} has wrong length", pauli_letters(p)));
            }
        }
        let dim = 1usize << self.n;
        if self.zero.shape() != (dim, 1) || self.one.shape() != (dim, 1) {
            return fail("codeword vectors have the wrong shape".into());
        }

        let zz = (self.zero.adjoint() * &self.zero)[(0, 0)];
        let oo = (self.one.adjoint() * &self.one)[(0, 0)];
        let zo = (self.zero.adjoint() * &self.one)[(0, 0)];
        if (zz - 1.0).norm() > t || (oo - 1.0).norm() > t || zo.norm() > t {
            return fail("codewords are not orthonormal".into());
        }

        for g in &self.generators {
            if (g.phase() - 1.0).norm() > t {
                return fail(format!("generator {} is not phase-free", pauli_letters(g)));
            }
        }
        if !independent(&self.generators) {
            return fail("generators are not independent".into());
        }
        let gens: Vec<CMatrix> = self.generators.iter().map(pauli_to_matrix).collect();
        for (a, ga) in gens.iter().enumerate() {
            for gb in gens.iter().skip(a + 1) {
                if max_abs_diff(&(ga * gb), &(gb * ga)) > t {
                    return fail("generators do not commute".into());
                }
            }
        }
        for (g, gm) in self.generators.iter().zip(&gens) {
            if max_entry(&(gm * &self.zero - &self.zero)) > t
                || max_entry(&(gm * &self.one - &self.one)) > t
            {
                return fail(format!(
                    "generator {} does not fix the codewords",
                    pauli_letters(g)
                ));
            }
        }

        let logicals = [&self.logical_x, &self.logical_y, &self.logical_z];
        for l in logicals {
            let lm = pauli_to_matrix(l);
            for gm in &gens {
                if max_abs_diff(&(&lm * gm), &(gm * &lm)) > t {
                    return fail(format!(
                        "logical {} does not commute with the generators",
                        pauli_letters(l)
                    ));
                }
            }
        }

        let p = self.projector();
        if max_abs_diff(&(&p * &p), &p) > t {
            return fail("code projector is not idempotent".into());
        }
        if (p.trace() - 2.0).norm() > t {
            return fail("code projector does not have rank two".into());
        }

        let i = c64(0.0, 1.0);
        let actions: [(&PauliString, &CMatrix, Complex64, &CMatrix); 6] = [
            (&self.logical_x, &self.zero, c64(1.0, 0.0), &self.one),
            (&self.logical_x, &self.one, c64(1.0, 0.0), &self.zero),
            (&self.logical_y, &self.zero, i, &self.one),
            (&self.logical_y, &self.one, -i, &self.zero),
            (&self.logical_z, &self.zero, c64(1.0, 0.0), &self.zero),
            (&self.logical_z, &self.one, c64(-1.0, 0.0), &self.one),
        ];
        for (l, input, coeff, output) in actions {
            let got = pauli_to_matrix(l) * input;
            if max_entry(&(got - output * coeff)) > t {
                return fail(format!(
                    "logical {} does not act as an encoded Pauli",
                    pauli_letters(l)
                ));
            }
        }
        Ok(())
    }
}

/// The four-qubit distance-two code whose logical operators are two-local.
pub fn four_qubit_code() -> Result<StabilizerCode> {
    let r = c64(1.0, 0.0);
    let i = c64(0.0, 1.0);
    let code = StabilizerCode {
        n: 4,
        generators: vec![
            pauli_string(r, "XXXX"),
            pauli_string(r, "ZZZZ"),
            pauli_string(r, "XYZI"),
        ],
        zero: superposition(
            4,
            0.5,
            &[(r, "0000"), (i, "0011"), (i, "1100"), (r, "1111")],
        ),
        one: superposition(
            4,
            0.5,
            &[(-r, "0101"), (i, "0110"), (i, "1001"), (-r, "1010")],
        ),
        logical_x: pauli_string(r, "YIYI"),
        logical_y: pauli_string(-r, "IXXI"),
        logical_z: pauli_string(r, "ZZII"),
        distance: 2,
    };
    code.verify()?;
    Ok(code)
}

/// The five-qubit distance-three code with three-local logical operators.
pub fn five_qubit_code() -> Result<StabilizerCode> {
    let r = c64(1.0, 0.0);
    let zero = superposition(
        5,
        0.25,
        &[
            (r, "00000"),
            (r, "10010"),
            (r, "01001"),
            (r, "10100"),
            (r, "01010"),
            (-r, "11011"),
            (-r, "00110"),
            (-r, "11000"),
            (-r, "11101"),
            (-r, "00011"),
            (-r, "11110"),
            (-r, "01111"),
            (-r, "10001"),
            (-r, "01100"),
            (-r, "10111"),
            (r, "00101"),
        ],
    );
    let one = superposition(
        5,
        0.25,
        &[
            (r, "11111"),
            (r, "01101"),
            (r, "10110"),
            (r, "01011"),
            (r, "10101"),
            (-r, "00100"),
            (-r, "11001"),
            (-r, "00111"),
            (-r, "00010"),
            (-r, "11100"),
            (-r, "00001"),
            (-r, "10000"),
            (-r, "01110"),
            (-r, "10011"),
            (-r, "01000"),
            (r, "11010"),
        ],
    );
    let code = StabilizerCode {
        n: 5,
        generators: vec![
            pauli_string(r, "XZZXI"),
            pauli_string(r, "IXZZX"),
            pauli_string(r, "XIXZZ"),
            pauli_string(r, "ZXIXZ"),
        ],
        zero,
        one,
        logical_x: pauli_string(-r, "XIYYI"),
        logical_y: pauli_string(-r, "ZZIYI"),
        logical_z: pauli_string(-r, "YZYII"),
        distance: 3,
    };
    code.verify()?;
    Ok(code)
}

/// A Pauli error the code fails to detect: `P E P` is not zero.
#[derive(Debug, Clone)]
pub struct DetectionViolation {
    /// The undetected error.
    pub error: PauliString,
    /// Largest entry of `P E P` in absolute value.
    pub defect: f64,
}

/// Outcome of checking `P E P = 0` over all errors up to a given weight.
#[derive(Debug, Clone)]
pub struct DetectionReport {
    /// Highest error weight included in the sweep.
    pub max_weight: usize,
    /// Number of errors examined.
    pub checked: usize,
    /// Errors with `P E P` off zero beyond tolerance.
    pub violations: Vec<DetectionViolation>,
}

/// All phase-free Pauli strings on `n` qubits with weight in 1..=w.
fn pauli_errors(n: usize, max_weight: usize) -> Vec<PauliString> {
    let letters = [Pauli::X, Pauli::Y, Pauli::Z];
    let mut out = Vec::new();
    for mask in 1usize..(1 << n) {
        let weight = mask.count_ones() as usize;
        if weight > max_weight {
            continue;
        }
        let sites: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let mut digits = vec![0usize; weight];
        loop {
            let mut factors = vec![Pauli::I; n];
            for (d, &site) in digits.iter().zip(&sites) {
                factors[site] = letters[*d];
            }
            out.push(PauliString::new(factors, c64(1.0, 0.0)).expect("unit phase"));
            let mut pos = 0;
            while pos < weight {
                digits[pos] += 1;
                if digits[pos] < 3 {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == weight {
                break;
            }
        }
    }
    out
}

/// Sweeps every Pauli error of weight 1..=`max_weight` against the code
/// projector and reports the errors whose `P E P` is not zero. Each verdict
/// is cross-checked against the anticommutation criterion: an error is
/// detected exactly when it anticommutes with some generator.
pub fn check_detection(code: &StabilizerCode, max_weight: usize) -> Result<DetectionReport> {
    if max_weight == 0 || max_weight > code.n {
        return Err(Error::Contract(format!(
            "error weight must lie in 1..={}, got {max_weight}",
            code.n
        )));
    }
    let p = code.projector();
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for error in pauli_errors(code.n, max_weight) {
        let defect = max_entry(&(&p * pauli_to_matrix(&error) * &p));
        let detected = defect <= tol::DETECTION;
        let anticommutes = code.generators.iter().any(|g| !strings_commute(g, &error));
        if detected != anticommutes {
            return Err(Error::Verification(format!(
                "projector and anticommutation verdicts disagree on {}",
                pauli_letters(&error)
            )));
        }
        checked += 1;
        if !detected {
            violations.push(DetectionViolation { error, defect });
        }
    }
    Ok(DetectionReport {
        max_weight,
        checked,
        violations,
    })
}

/// A two-local Hamiltonian rewritten on four-qubit code registers, with a
/// per-register stabilizer penalty that is zero on the codespace.
#[derive(Debug, Clone)]
pub struct EncodedHamiltonian {
    /// The code used on every register.
    pub code: StabilizerCode,
    /// Penalty strength per violated stabilizer condition.
    pub penalty: f64,
    /// Number of logical qubits, one register of four physical qubits each.
    pub registers: usize,
    /// The source Hamiltonian with every Pauli replaced by its logical image.
    pub logical_part: CMatrix,
    /// Sum of the per-register penalty blocks, positive semidefinite.
    pub penalty_part: CMatrix,
    /// Full encoded Hamiltonian: logical part plus penalty part.
    pub matrix: CMatrix,
    /// Spectrum of the encoded Hamiltonian restricted to the codespace.
    pub code_spectrum: Vec<f64>,
    /// Spectrum of the source Hamiltonian, for comparison.
    pub source_spectrum: Vec<f64>,
}

fn register_chain(regs: usize, ops: &[(usize, CMatrix)]) -> CMatrix {
    let mut chain: Vec<CMatrix> = Vec::new();
    let mut cursor = 0usize;
    for (q, op) in ops {
        if *q > cursor {
            chain.push(eye(1 << (4 * (q - cursor))));
        }
        chain.push(op.clone());
        cursor = q + 1;
    }
    if cursor < regs {
        chain.push(eye(1 << (4 * (regs - cursor))));
    }
    kron_chain(&chain)
}

/// Replaces every qubit of a one- or two-local Hamiltonian by a four-qubit
/// code register: Pauli factors map to the code's two-local logical
/// operators, and each register receives the penalty
/// `E_p (3 I - g1 - g2 - g3)`, which vanishes exactly on the codespace.
pub fn encode_hamiltonian(h: &KLocalHamiltonian, penalty: f64) -> Result<EncodedHamiltonian> {
    if h.k() > 2 {
        return Err(Error::Contract(format!(
            "encoding accepts one- and two-local terms, got k = {}",
            h.k()
        )));
    }
    if h.n() > MAX_ENCODED_QUBITS {
        return Err(Error::Resource(format!(
            "dense encoding is limited to {MAX_ENCODED_QUBITS} logical qubits ({} physical), got {}",
            4 * MAX_ENCODED_QUBITS,
            h.n()
        )));
    }
    if !penalty.is_finite() || penalty < 0.0 {
        return Err(Error::Contract(format!(
            "penalty strength must be finite and nonnegative, got {penalty}"
        )));
    }
    let code = four_qubit_code()?;
    let regs = h.n();
    let dim = 1usize << (4 * regs);

    let lx = pauli_to_matrix(&code.logical_x);
    let ly = pauli_to_matrix(&code.logical_y);
    let lz = pauli_to_matrix(&code.logical_z);
    let logical_axis = |axis: [f64; 3]| -> CMatrix {
        &lx * c64(axis[0], 0.0) + &ly * c64(axis[1], 0.0) + &lz * c64(axis[2], 0.0)
    };

    let mut block = eye(16) * c64(3.0, 0.0);
    for g in &code.generators {
        block -= pauli_to_matrix(g);
    }
    block *= c64(penalty, 0.0);

    // Register-local commutation of the logical images with the penalty
    // block lifts to commutation of the assembled parts, because distinct
    // registers never share a physical qubit.
    for l in [&lx, &ly, &lz] {
        if max_abs_diff(&(l * &block), &(&block * l)) > tol::STABILIZER {
            return Err(Error::Verification(
                "logical operators fail to commute with the register penalty".into(),
            ));
        }
    }

    let mut logical_part = CMatrix::zeros(dim, dim);
    for term in h.terms() {
        let mut ops: Vec<(usize, CMatrix)> = term
            .factors
            .iter()
            .map(|f| (f.qubit, logical_axis(f.axis)))
            .collect();
        ops.sort_by_key(|(q, _)| *q);
        logical_part += register_chain(regs, &ops) * c64(term.c, 0.0);
    }

    let mut penalty_part = CMatrix::zeros(dim, dim);
    for q in 0..regs {
        penalty_part += register_chain(regs, &[(q, block.clone())]);
    }

    let matrix = &logical_part + &penalty_part;

    let b = kron_chain(&vec![code.isometry(); regs]);
    if max_entry(&(b.adjoint() * &penalty_part * &b)) > tol::STABILIZER {
        return Err(Error::Verification(
            "penalty part is not zero on the codespace".into(),
        ));
    }
    let restricted = b.adjoint() * &matrix * &b;
    let code_spectrum = hermitian_eig(&restricted)?.eigenvalues;
    let source_spectrum = hermitian_eig(&h.matrix())?.eigenvalues;
    for (a, b) in code_spectrum.iter().zip(&source_spectrum) {
        if (a - b).abs() > tol::SPECTRUM_MATCH {
            return Err(Error::Verification(format!(
                "codespace spectrum departs from the source spectrum: {a} vs {b}"
            )));
        }
    }

    Ok(EncodedHamiltonian {
        code,
        penalty,
        registers: regs,
        logical_part,
        penalty_part,
        matrix,
        code_spectrum,
        source_spectrum,
    })
}

/// Gap between the encoded ground energy and the lowest energy outside the
/// codespace, compared against the penalty strength.
#[derive(Debug, Clone)]
pub struct GapReport {
    /// Penalty strength the gap is measured against.
    pub penalty: f64,
    /// Lowest eigenvalue of the encoded Hamiltonian.
    pub ground: f64,
    /// Lowest eigenvalue restricted to states outside the codespace.
    pub outside_min: f64,
    /// `outside_min - ground`.
    pub gap: f64,
    /// `gap - penalty`; nonnegative (within tolerance) when the check passes.
    pub margin: f64,
    /// Whether the gap clears the penalty strength within tolerance.
    pub pass: bool,
}

/// Verifies that every state outside the codespace sits at least the
/// penalty strength above the encoded ground energy. The spectrum splits
/// cleanly because the codespace projector commutes with the Hamiltonian:
/// shifting the codespace far upward exposes the lowest outside level.
pub fn gap_check(e: &EncodedHamiltonian) -> Result<GapReport> {
    let eig = hermitian_eig(&e.matrix)?;
    let ground = eig.eigenvalues[0];
    let top = *eig.eigenvalues.last().expect("nonempty spectrum");
    let shift = 2.0 * ground.abs().max(top.abs()) + e.penalty + 1.0;

    let p16 = e.code.projector();
    let pi = kron_chain(&vec![p16; e.registers]);
    let shifted = &e.matrix + &pi * c64(shift, 0.0);
    let outside_min = hermitian_eig(&shifted)?.eigenvalues[0];

    let gap = outside_min - ground;
    let margin = gap - e.penalty;
    Ok(GapReport {
        penalty: e.penalty,
        ground,
        outside_min,
        gap,
        margin,
        pass: margin >= -tol::GAP_MARGIN,
    })
}

/// Verdict on an ordered generator pair, kept for reporting.
#[derive(Debug, Clone)]
pub struct PairVerdict {
    /// Whether the two strings commute (a valid stabilizer pair must).
    pub commuting: bool,
    /// Whether every single-qubit Pauli anticommutes with some member.
    pub covers_single_errors: bool,
}

/// Classifies an ordered pair of candidate generators by the two conditions
/// a three-qubit detecting code would need.
pub fn pair_verdict(g1: &PauliString, g2: &PauliString) -> PairVerdict {
    let n = g1.n();
    let covers = pauli_errors(n, 1)
        .iter()
        .all(|e| !strings_commute(g1, e) || !strings_commute(g2, e));
    PairVerdict {
        commuting: strings_commute(g1, g2),
        covers_single_errors: covers,
    }
}

/// Result of the exhaustive search for a three-qubit code detecting all
/// single-qubit errors.
#[derive(Debug, Clone)]
pub struct SearchReport {
    /// Ordered pairs of commuting, independent, phase-free, non-identity
    /// generators examined.
    pub pairs_examined: usize,
    /// Pairs whose projector kills every single-qubit error (expected none).
    pub successes: Vec<(PauliString, PauliString)>,
}

/// Exhaustively searches ordered pairs of commuting, independent,
/// phase-free, non-identity Pauli strings on three qubits for a codespace
/// with `P E P = 0` on all nine single-qubit errors. No such pair exists:
/// covering all nine errors forces the two strings to differ and be
/// non-identity at every position, which makes them anticommute.
pub fn search_3qubit_codes() -> Result<SearchReport> {
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut strings = Vec::new();
    for a in letters {
        for b in letters {
            for ch in letters {
                if matches!((a, b, ch), (Pauli::I, Pauli::I, Pauli::I)) {
                    continue;
                }
                strings.push(PauliString::new(vec![a, b, ch], c64(1.0, 0.0)).expect("unit phase"));
            }
        }
    }
    let errors = pauli_errors(3, 1);
    let error_mats: Vec<CMatrix> = errors.iter().map(pauli_to_matrix).collect();
    let id = eye(8);

    let mut pairs_examined = 0usize;
    let mut successes = Vec::new();
    for g1 in &strings {
        let m1 = &id + pauli_to_matrix(g1);
        for g2 in &strings {
            if g1 == g2 || !strings_commute(g1, g2) {
                continue;
            }
            pairs_examined += 1;
            let p = &m1 * (&id + pauli_to_matrix(g2)) * c64(0.25, 0.0);
            let mut all_detected = true;
            for (e, em) in errors.iter().zip(&error_mats) {
                let detected = max_entry(&(&p * em * &p)) <= tol::DETECTION;
                let anticommutes = !strings_commute(g1, e) || !strings_commute(g2, e);
                if detected != anticommutes {
                    return Err(Error::Verification(format!(
                        "projector and anticommutation verdicts disagree on {} for ({}, {})",
                        pauli_letters(e),
                        pauli_letters(g1),
                        pauli_letters(g2)
                    )));
                }
                all_detected &= detected;
            }
            if all_detected {
                successes.push((g1.clone(), g2.clone()));
            }
        }
    }
    Ok(SearchReport {
        pairs_examined,
        successes,
    })
}

/// Quantum Singleton bound for a code on `n` qubits encoding `k` with
/// distance `d`: feasible only when `n - k >= 2(d - 1)`.
pub fn singleton_check(n: usize, k: usize, d: usize) -> bool {
    n >= k && d >= 1 && n - k >= 2 * (d - 1)
}
