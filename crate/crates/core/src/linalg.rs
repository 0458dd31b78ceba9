//! Dense complex linear algebra shared by every module.
//!
//! Conventions: matrices are `nalgebra::DMatrix<Complex64>` (aliased
//! [`CMatrix`]); qubit 0 is the *leftmost* tensor factor, so basis index bit
//! 0 is the most significant bit of the row/column index. Eigendecomposition
//! is restricted to Hermitian matrices — every operator that needs a spectrum
//! here is Hermitian — and `matexp` goes through that spectral form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Dense complex matrix used throughout the workbench.
pub type CMatrix = DMatrix<Complex64>;

/// Shorthand complex constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Identity matrix of dimension `d`.
pub fn eye(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_chain(ops: &[CMatrix]) -> CMatrix {
    let mut out = eye(1);
    for op in ops {
        out = out.kronecker(op);
    }
    out
}

/// `op` (2x2) acting on qubit `q` of an `n`-qubit register.
pub fn embed_one(n: usize, q: usize, op: &CMatrix) -> CMatrix {
    assert!(q < n, "qubit index {q} out of range for {n} qubits");
    assert_eq!(op.nrows(), 2);
    assert_eq!(op.ncols(), 2);
    let mut out = eye(1);
    for i in 0..n {
        out = if i == q {
            out.kronecker(op)
        } else {
            out.kronecker(&eye(2))
        };
    }
    out
}

/// Largest entrywise absolute difference between two equally shaped matrices.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    (a - b).iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// `max |M - M^dag|`: zero exactly when `m` is Hermitian.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Tolerance-based hermiticity test.
pub fn is_hermitian(m: &CMatrix, tolerance: f64) -> bool {
    m.is_square() && hermiticity_defect(m) <= tolerance
}

fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Contract("matrix has non-finite entries".into()))
    }
}

/// Ascending eigenvalues and matching orthonormal eigenvector columns.
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: CMatrix,
}

const EIG_MAX_ITER: usize = 100_000;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::Contract(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    check_finite(m)?;
    let defect = hermiticity_defect(m);
    if defect > tol::HERMITIAN_INPUT {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian: defect {defect:.3e} exceeds {:.0e}",
            tol::HERMITIAN_INPUT
        )));
    }
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, EIG_MAX_ITER)
        .ok_or(Error::EigenConvergence {
            iterations: EIG_MAX_ITER,
        })?;

    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// `exp(scale * M)` for Hermitian `M`, via the spectral decomposition.
pub fn matexp(m: &CMatrix, scale: Complex64) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Contract(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let eig = hermitian_eig(m)?;
    let n = m.nrows();
    let mut phases = CMatrix::zeros(n, n);
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        phases[(j, j)] = (scale * lambda).exp();
    }
    Ok(&eig.eigenvectors * phases * eig.eigenvectors.adjoint())
}

/// Operator (spectral) norm.
///
/// Hermitian input takes the direct route `max |eigenvalue|`; any other
/// square matrix goes through the largest eigenvalue of `M^dag M`, i.e. the
/// largest singular value, which keeps the norm sub-multiplicative.
pub fn opnorm(m: &CMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Contract(format!(
            "operator norm needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    check_finite(m)?;
    if is_hermitian(m, tol::HERMITIAN_INPUT) {
        let eig = hermitian_eig(m)?;
        Ok(eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs())))
    } else {
        let gram = m.adjoint() * m;
        let eig = hermitian_eig(&gram)?;
        let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
        Ok(top.max(0.0).sqrt())
    }
}

/// Neumaier-compensated accumulator: the running carry recovers the low
/// bits that plain `+=` drops when summands cancel far below their size.
#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Accumulates `a * b` exactly: the fused multiply-add supplies the
    /// rounding error of the product, and both halves enter the sum.
    fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        self.add(p);
        self.add(a.mul_add(b, -p));
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// `a * b` with compensated dot products.
///
/// Each entry is formed as if in roughly twice working precision and rounded
/// once, so its error is relative to the entry's own magnitude rather than
/// to the largest intermediate term. Use this when a product's value sits
/// orders of magnitude below the terms that cancel to produce it.
pub fn compensated_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(
        a.ncols(),
        b.nrows(),
        "shape mismatch in compensated_mul: {}x{} * {}x{}",
        a.nrows(),
        a.ncols(),
        b.nrows(),
        b.ncols()
    );
    CMatrix::from_fn(a.nrows(), b.ncols(), |i, j| {
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for l in 0..a.ncols() {
            let x = a[(i, l)];
            let y = b[(l, j)];
            re.add_product(x.re, y.re);
            re.add_product(-x.im, y.im);
            im.add_product(x.re, y.im);
            im.add_product(x.im, y.re);
        }
        c64(re.value(), im.value())
    })
}

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// The 2x2 matrix for this label.
    pub fn matrix(self) -> CMatrix {
        let (a, b, c, d) = match self {
            Pauli::I => (c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)),
            Pauli::X => (c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)),
            Pauli::Y => (c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)),
            Pauli::Z => (c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)),
        };
        CMatrix::from_row_slice(2, 2, &[a, b, c, d])
    }
}

/// A phased tensor product of single-qubit Pauli labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    factors: Vec<Pauli>,
    phase: Complex64,
}

const PAULI_PHASES: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(0.0, -1.0),
];

impl PauliString {
    /// Build a Pauli string; the phase must be one of +1, -1, +i, -i.
    pub fn new(factors: Vec<Pauli>, phase: Complex64) -> Result<Self> {
        if !PAULI_PHASES.iter().any(|p| (p - phase).norm() <= 1e-12) {
            return Err(Error::Contract(format!(
                "Pauli phase must be a fourth root of unity, got {phase}"
            )));
        }
        Ok(PauliString { factors, phase })
    }

    /// Qubit count.
    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn phase(&self) -> Complex64 {
        self.phase
    }
}

/// Materialize a Pauli string as its `2^n x 2^n` matrix, phase applied.
pub fn pauli_to_matrix(p: &PauliString) -> CMatrix {
    let mut out = eye(1);
    for f in p.factors() {
        out = out.kronecker(&f.matrix());
    }
    out * p.phase()
}

/// Dense complex matrix in wire form: row-major `[re, im]` entry pairs.
///
/// This is the JSON representation used by the CLI for Hamiltonians and
/// schedule endpoints. A matrix flagged `hermitian` must satisfy
/// `max|M - M^dag| <= 1e-12` to convert.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
    #[serde(default)]
    pub hermitian: bool,
}

impl ComplexMatrix {
    /// Capture a matrix, flagging hermiticity when it holds at 1e-12.
    pub fn from_cmatrix(m: &CMatrix) -> Self {
        let entries = (0..m.nrows())
            .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
            .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
            .collect();
        ComplexMatrix {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
            hermitian: is_hermitian(m, tol::HERMITIAN_FLAG),
        }
    }

    /// Validate shape (and the hermiticity flag, if set) and densify.
    pub fn to_cmatrix(&self) -> Result<CMatrix> {
        if self.rows * self.cols != self.entries.len() {
            return Err(Error::Contract(format!(
                "matrix shape {}x{} disagrees with {} entries",
                self.rows,
                self.cols,
                self.entries.len()
            )));
        }
        let m = CMatrix::from_row_slice(
            self.rows,
            self.cols,
            &self
                .entries
                .iter()
                .map(|&[re, im]| c64(re, im))
                .collect::<Vec<_>>(),
        );
        check_finite(&m)?;
        if self.hermitian {
            let defect = hermiticity_defect(&m);
            if defect > tol::HERMITIAN_FLAG {
                return Err(Error::Contract(format!(
                    "matrix flagged Hermitian has defect {defect:.3e}"
                )));
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        (&m + m.adjoint()) * c64(0.5, 0.0)
    }

    fn random_matrix(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        m
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = hermitian_eig(&eye(2)).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_z_spectrum_is_ascending() {
        let eig = hermitian_eig(&Pauli::Z.matrix()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_reconstruction_up_to_dim_256() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [2usize, 8, 33, 256] {
            let m = random_hermitian(dim, &mut rng);
            let eig = hermitian_eig(&m).unwrap();
            let mut lambda = CMatrix::zeros(dim, dim);
            for (j, &l) in eig.eigenvalues.iter().enumerate() {
                lambda[(j, j)] = c64(l, 0.0);
            }
            let rebuilt = &eig.eigenvectors * lambda * eig.eigenvectors.adjoint();
            let scale = opnorm(&m).unwrap().max(1.0);
            assert!(
                max_abs_diff(&rebuilt, &m) <= tol::EIG_RESIDUAL * scale,
                "reconstruction failed at dim {dim}"
            );
            let gram = eig.eigenvectors.adjoint() * &eig.eigenvectors;
            assert!(max_abs_diff(&gram, &eye(dim)) <= 1e-10);
        }
    }

    #[test]
    fn eigenvalues_come_out_ascending() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = random_hermitian(24, &mut rng);
        let eig = hermitian_eig(&m).unwrap();
        for w in eig.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
        );
        assert!(matches!(hermitian_eig(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn matexp_of_zero_is_identity() {
        let z = CMatrix::zeros(3, 3);
        let e = matexp(&z, c64(0.0, -1.0)).unwrap();
        assert!(max_abs_diff(&e, &eye(3)) < 1e-14);
    }

    #[test]
    fn matexp_of_pauli_z_quarter_turn() {
        let e = matexp(&Pauli::Z.matrix(), c64(0.0, -std::f64::consts::FRAC_PI_2)).unwrap();
        assert!((e[(0, 0)] - c64(0.0, -1.0)).norm() < 1e-14);
        assert!((e[(1, 1)] - c64(0.0, 1.0)).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn matexp_of_hermitian_times_minus_i_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random_hermitian(4, &mut rng);
        let u = matexp(&h, c64(0.0, -0.3)).unwrap();
        assert!(max_abs_diff(&(u.adjoint() * &u), &eye(4)) <= 1e-9);
    }

    #[test]
    fn matexp_group_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let h = random_hermitian(6, &mut rng);
        let a = matexp(&h, c64(0.0, -0.7)).unwrap();
        let b = matexp(&h, c64(0.0, -0.4)).unwrap();
        let ab = matexp(&h, c64(0.0, -1.1)).unwrap();
        assert!(max_abs_diff(&(a * b), &ab) <= 1e-8);
    }

    #[test]
    fn opnorm_examples() {
        assert!((opnorm(&Pauli::X.matrix()).unwrap() - 1.0).abs() < 1e-12);
        assert!((opnorm(&(eye(4) * c64(3.0, 0.0))).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn opnorm_is_submultiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let dim = rng.random_range(2..8);
            let a = random_matrix(dim, &mut rng);
            let b = random_matrix(dim, &mut rng);
            let na = opnorm(&a).unwrap();
            let nb = opnorm(&b).unwrap();
            let nab = opnorm(&(&a * &b)).unwrap();
            assert!(nab <= na * nb + 1e-9);
            let nsum = opnorm(&(&a + &b)).unwrap();
            assert!(nsum <= na + nb + 1e-9);
        }
    }

    #[test]
    fn compensated_mul_matches_plain_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let dim = rng.random_range(2..9);
            let a = random_matrix(dim, &mut rng);
            let b = random_matrix(dim, &mut rng);
            assert!(max_abs_diff(&compensated_mul(&a, &b), &(&a * &b)) <= 1e-13);
        }
    }

    #[test]
    fn compensated_mul_survives_catastrophic_cancellation() {
        // Row dot column where the large terms cancel exactly and the true
        // value is the sum of the small ones: plain f64 accumulation loses
        // every significant digit, the compensated product keeps them all.
        let terms = 100;
        let mut a = CMatrix::zeros(1, terms + 2);
        let mut b = CMatrix::zeros(terms + 2, 1);
        a[(0, 0)] = c64(1.0, 0.0);
        b[(0, 0)] = c64(1.0, 0.0);
        for l in 0..terms {
            a[(0, l + 1)] = c64(1e-16, 0.0);
            b[(l + 1, 0)] = c64(1.0, 0.0);
        }
        a[(0, terms + 1)] = c64(1.0, 0.0);
        b[(terms + 1, 0)] = c64(-1.0, 0.0);
        let exact = 100e-16;
        let got = compensated_mul(&a, &b)[(0, 0)].re;
        assert!(
            ((got - exact) / exact).abs() <= 1e-12,
            "compensated dot lost the small terms: got {got:e}, want {exact:e}"
        );
    }

    #[test]
    fn pauli_string_materialization() {
        let x = pauli_to_matrix(&PauliString::new(vec![Pauli::X], c64(1.0, 0.0)).unwrap());
        assert!((x[(0, 1)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((x[(1, 0)] - c64(1.0, 0.0)).norm() < 1e-15);

        let zz =
            pauli_to_matrix(&PauliString::new(vec![Pauli::Z, Pauli::Z], c64(1.0, 0.0)).unwrap());
        for (i, want) in [1.0, -1.0, -1.0, 1.0].iter().enumerate() {
            assert!((zz[(i, i)] - c64(*want, 0.0)).norm() < 1e-15);
        }

        let minus_i2 = pauli_to_matrix(&PauliString::new(vec![Pauli::I], c64(-1.0, 0.0)).unwrap());
        assert!(max_abs_diff(&minus_i2, &(eye(2) * c64(-1.0, 0.0))) < 1e-15);
    }

    #[test]
    fn pauli_string_rejects_bad_phase() {
        assert!(PauliString::new(vec![Pauli::X], c64(0.5, 0.5)).is_err());
    }

    #[test]
    fn wire_matrix_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let h = random_hermitian(5, &mut rng);
        let wire = ComplexMatrix::from_cmatrix(&h);
        assert!(wire.hermitian);
        let back = wire.to_cmatrix().unwrap();
        assert!(max_abs_diff(&h, &back) < 1e-15);
    }

    #[test]
    fn wire_matrix_shape_mismatch_is_rejected() {
        let wire = ComplexMatrix {
            rows: 2,
            cols: 2,
            entries: vec![[1.0, 0.0]; 3],
            hermitian: false,
        };
        assert!(wire.to_cmatrix().is_err());
    }

    #[test]
    fn embed_one_places_the_operator() {
        let zi = embed_one(2, 0, &Pauli::Z.matrix());
        let iz = embed_one(2, 1, &Pauli::Z.matrix());
        assert!(max_abs_diff(&zi, &kron(&Pauli::Z.matrix(), &eye(2))) < 1e-15);
        assert!(max_abs_diff(&iz, &kron(&eye(2), &Pauli::Z.matrix())) < 1e-15);
    }
}
