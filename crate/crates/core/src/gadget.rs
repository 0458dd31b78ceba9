//! Perturbative gadgets: 2-local Hamiltonians whose low-energy physics
//! reproduces a k-local target.
//!
//! Each k-local term gets a register of k ancilla qubits ferromagnetically
//! coupled by ZZ penalties; the perturbation couples computational qubit j
//! of the term to ancilla j. Within the joint +1 eigenspace of the register
//! flip operators, k-th order degenerate perturbation theory (in Bloch's
//! formulation) produces the target interaction with a known coefficient.
//! The module builds the gadget exactly, restricts to the +1 sector,
//! evaluates the Bloch series order by order, and measures how fast the
//! exact effective Hamiltonian approaches the predicted one as the
//! perturbation strength shrinks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, compensated_mul, eye, hermitian_eig, hermiticity_defect, kron_chain, max_abs_diff, opnorm,
    CMatrix, Pauli,
};
use crate::tol;

/// Dense-diagonalization budget: total gadget qubits n + r k.
pub const MAX_GADGET_QUBITS: usize = 14;

/// One Pauli factor of a k-local term: a qubit index and an axis on the
/// Bloch sphere defining the operator n . (X, Y, Z).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PauliFactor {
    pub qubit: usize,
    pub axis: [f64; 3],
}

impl PauliFactor {
    /// The single-qubit operator nx X + ny Y + nz Z.
    pub fn operator(&self) -> CMatrix {
        let [nx, ny, nz] = self.axis;
        Pauli::X.matrix() * c64(nx, 0.0)
            + Pauli::Y.matrix() * c64(ny, 0.0)
            + Pauli::Z.matrix() * c64(nz, 0.0)
    }
}

/// One term of a k-local Hamiltonian: a positive coefficient times a
/// k-fold product of single-qubit axis operators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KLocalTerm {
    pub c: f64,
    pub factors: Vec<PauliFactor>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawKLocal {
    n: usize,
    k: usize,
    terms: Vec<KLocalTerm>,
}

/// A k-local Hamiltonian H = sum_s c_s H_s with every c_s > 0 (negative
/// input coefficients are absorbed by flipping one axis of the term).
#[derive(Debug, Clone)]
pub struct KLocalHamiltonian {
    n: usize,
    k: usize,
    terms: Vec<KLocalTerm>,
}

impl KLocalHamiltonian {
    pub fn new(n: usize, k: usize, terms: Vec<KLocalTerm>) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(Error::Contract(format!(
                "invalid locality: k = {k} on n = {n} qubits"
            )));
        }
        let mut normalized = Vec::with_capacity(terms.len());
        for (s, mut term) in terms.into_iter().enumerate() {
            if term.c == 0.0 || !term.c.is_finite() {
                return Err(Error::Contract(format!(
                    "term {s} has coefficient {}; coefficients must be nonzero finite reals",
                    term.c
                )));
            }
            if term.factors.len() != k {
                return Err(Error::Contract(format!(
                    "term {s} has {} factors; every term must have exactly k = {k}",
                    term.factors.len()
                )));
            }
            if term.c < 0.0 {
                term.c = -term.c;
                for x in term.factors[0].axis.iter_mut() {
                    *x = -*x;
                }
            }
            let mut seen = vec![false; n];
            for f in &term.factors {
                if f.qubit >= n {
                    return Err(Error::Contract(format!(
                        "term {s} touches qubit {}, but only {n} qubits exist",
                        f.qubit
                    )));
                }
                if seen[f.qubit] {
                    return Err(Error::Contract(format!(
                        "term {s} touches qubit {} twice",
                        f.qubit
                    )));
                }
                seen[f.qubit] = true;
                let norm = (f.axis[0].powi(2) + f.axis[1].powi(2) + f.axis[2].powi(2)).sqrt();
                if (norm - 1.0).abs() > tol::UNIT_AXIS {
                    return Err(Error::Contract(format!(
                        "term {s} has an axis of norm {norm}; axes must be unit vectors"
                    )));
                }
            }
            normalized.push(term);
        }
        Ok(KLocalHamiltonian {
            n,
            k,
            terms: normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &[KLocalTerm] {
        &self.terms
    }

    /// Number of terms r.
    pub fn r(&self) -> usize {
        self.terms.len()
    }

    /// Dense H on the 2^n computational qubits.
    pub fn matrix(&self) -> CMatrix {
        let dim = 1usize << self.n;
        let mut h = CMatrix::zeros(dim, dim);
        for term in &self.terms {
            let mut factors: Vec<(usize, CMatrix)> = term
                .factors
                .iter()
                .map(|f| (f.qubit, f.operator()))
                .collect();
            factors.sort_by_key(|(q, _)| *q);
            let mut pieces = Vec::new();
            let mut cursor = 0usize;
            for (q, op) in factors {
                if q > cursor {
                    pieces.push(eye(1 << (q - cursor)));
                }
                pieces.push(op);
                cursor = q + 1;
            }
            if cursor < self.n {
                pieces.push(eye(1 << (self.n - cursor)));
            }
            h += kron_chain(&pieces) * c64(term.c, 0.0);
        }
        h
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawKLocal = serde_json::from_str(text)
            .map_err(|e| Error::Contract(format!("malformed Hamiltonian spec: {e}")))?;
        KLocalHamiltonian::new(raw.n, raw.k, raw.terms)
    }

    pub fn to_json(&self) -> String {
        let raw = RawKLocal {
            n: self.n,
            k: self.k,
            terms: self.terms.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("spec serializes")
    }
}

/// Two single-qubit operators embedded at positions q1 < q2 of a
/// `total`-qubit register.
fn two_site(total: usize, q1: usize, op1: &CMatrix, q2: usize, op2: &CMatrix) -> CMatrix {
    debug_assert!(q1 < q2 && q2 < total);
    let mut pieces = Vec::new();
    if q1 > 0 {
        pieces.push(eye(1 << q1));
    }
    pieces.push(op1.clone());
    if q2 > q1 + 1 {
        pieces.push(eye(1 << (q2 - q1 - 1)));
    }
    pieces.push(op2.clone());
    if q2 + 1 < total {
        pieces.push(eye(1 << (total - q2 - 1)));
    }
    kron_chain(&pieces)
}

/// The assembled 2-local gadget H = H^anc + lambda V on n + r k qubits
/// (computational qubits first, then one k-qubit register per term).
#[derive(Debug, Clone)]
pub struct GadgetHamiltonian {
    pub spec: KLocalHamiltonian,
    pub lambda: f64,
    pub qubits: usize,
    /// Sum over registers of the pairwise ZZ penalties.
    pub h_anc: CMatrix,
    /// The perturbation sum_s c_s^{1/k} sum_j sigma_{s,j} x X_{s,j}.
    pub v: CMatrix,
    /// h_anc + lambda v.
    pub matrix: CMatrix,
    /// Unperturbed gap k - 1.
    pub gap: f64,
}

impl GadgetHamiltonian {
    /// First qubit of the ancilla register for term s.
    pub fn register_start(&self, s: usize) -> usize {
        self.spec.n() + s * self.spec.k()
    }

    /// The register flip operator X^{(x)k} on register s, embedded.
    pub fn symmetry_operator(&self, s: usize) -> CMatrix {
        let dim = 1usize << self.qubits;
        let mask = self.symmetry_mask(s);
        let mut m = CMatrix::zeros(dim, dim);
        for x in 0..dim {
            m[(x ^ mask, x)] = c64(1.0, 0.0);
        }
        m
    }

    /// Bit mask (over basis indices) flipped by `symmetry_operator(s)`.
    pub fn symmetry_mask(&self, s: usize) -> usize {
        let start = self.register_start(s);
        let k = self.spec.k();
        let mut mask = 0usize;
        for j in 0..k {
            mask |= 1 << (self.qubits - 1 - (start + j));
        }
        mask
    }
}

/// Largest commutator entry between a bit-flip permutation and `h`.
fn flip_commutation_defect(h: &CMatrix, mask: usize) -> f64 {
    let dim = h.nrows();
    let mut worst: f64 = 0.0;
    for x in 0..dim {
        for y in 0..dim {
            worst = worst.max((h[(x ^ mask, y)] - h[(x, y ^ mask)]).norm());
        }
    }
    worst
}

/// Assemble the gadget for `h` at perturbation strength `lambda`,
/// verifying the register symmetries and the unperturbed gap.
pub fn build_gadget(h: &KLocalHamiltonian, lambda: f64) -> Result<GadgetHamiltonian> {
    let (n, k, r) = (h.n(), h.k(), h.r());
    if k < 2 {
        return Err(Error::Contract(
            "gadget construction needs locality k >= 2".into(),
        ));
    }
    let qubits = n + r * k;
    if qubits > MAX_GADGET_QUBITS {
        return Err(Error::Resource(format!(
            "gadget needs {qubits} qubits; the dense budget is {MAX_GADGET_QUBITS}"
        )));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::Contract(format!(
            "perturbation strength must be a nonnegative real, got {lambda}"
        )));
    }
    let dim = 1usize << qubits;
    let z = Pauli::Z.matrix();
    let x = Pauli::X.matrix();

    let mut h_anc = CMatrix::zeros(dim, dim);
    let mut v = CMatrix::zeros(dim, dim);
    for (s, term) in h.terms().iter().enumerate() {
        let start = n + s * k;
        for i in 0..k {
            for j in (i + 1)..k {
                let zz = two_site(qubits, start + i, &z, start + j, &z);
                h_anc += (eye(dim) - zz) * c64(0.5, 0.0);
            }
        }
        let weight = term.c.powf(1.0 / k as f64);
        for f in term.factors.iter().enumerate() {
            let (j, factor) = f;
            v += two_site(qubits, factor.qubit, &factor.operator(), start + j, &x)
                * c64(weight, 0.0);
        }
    }
    let matrix = &h_anc + &v * c64(lambda, 0.0);

    let gadget = GadgetHamiltonian {
        spec: h.clone(),
        lambda,
        qubits,
        h_anc,
        v,
        matrix,
        gap: (k - 1) as f64,
    };

    for s in 0..r {
        let defect = flip_commutation_defect(&gadget.matrix, gadget.symmetry_mask(s));
        if defect > tol::GADGET_SYMMETRY {
            return Err(Error::Verification(format!(
                "register {s} flip symmetry fails to commute: defect {defect:.3e}"
            )));
        }
    }

    // One register in isolation: ground space {|0..0>, |1..1>} with gap k-1.
    let reg_dim = 1usize << k;
    let mut reg = CMatrix::zeros(reg_dim, reg_dim);
    for i in 0..k {
        for j in (i + 1)..k {
            let zz = two_site(k, i, &z, j, &z);
            reg += (eye(reg_dim) - zz) * c64(0.5, 0.0);
        }
    }
    let eig = hermitian_eig(&reg)?;
    let mut ground = CMatrix::zeros(reg_dim, reg_dim);
    ground[(0, 0)] = c64(1.0, 0.0);
    ground[(reg_dim - 1, reg_dim - 1)] = c64(1.0, 0.0);
    let mut projector = CMatrix::zeros(reg_dim, reg_dim);
    for (idx, &e) in eig.eigenvalues.iter().enumerate() {
        if e.abs() <= tol::EIGENSPACE_CLUSTER {
            let col = eig.eigenvectors.column(idx);
            projector += col * col.adjoint();
        }
    }
    let gap = eig
        .eigenvalues
        .iter()
        .find(|&&e| e.abs() > tol::EIGENSPACE_CLUSTER)
        .copied()
        .unwrap_or(f64::INFINITY);
    if max_abs_diff(&projector, &ground) > tol::SPECTRUM_MATCH
        || (gap - gadget.gap).abs() > tol::SPECTRUM_MATCH
    {
        return Err(Error::Verification(format!(
            "register penalty has the wrong ground structure (gap {gap})"
        )));
    }

    Ok(gadget)
}

/// The gadget restricted to the joint +1 eigenspace of all register
/// flips, together with the isometry that performs the restriction.
#[derive(Debug, Clone)]
pub struct PlusSector {
    /// Isometry B (full dimension x sector dimension); columns orthonormal.
    pub isometry: CMatrix,
    /// B^dag H^anc B.
    pub h0: CMatrix,
    /// B^dag V B.
    pub v: CMatrix,
    /// B^dag H^gad B.
    pub matrix: CMatrix,
}

/// Per-register +1-sector isometry: column x is (|x> + |xbar>)/sqrt(2)
/// for representatives x with leading bit 0; the cat state is column 0.
fn register_isometry(k: usize) -> CMatrix {
    let dim = 1usize << k;
    let half = dim / 2;
    let amp = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut b = CMatrix::zeros(dim, half);
    for xrep in 0..half {
        b[(xrep, xrep)] = amp;
        b[(dim - 1 - xrep, xrep)] = amp;
    }
    b
}

/// The +1-sector isometry for a whole gadget layout.
pub fn sector_isometry(spec: &KLocalHamiltonian) -> CMatrix {
    let mut pieces = vec![eye(1 << spec.n())];
    for _ in 0..spec.r() {
        pieces.push(register_isometry(spec.k()));
    }
    kron_chain(&pieces)
}

/// Restrict the gadget to the all-+1 sector and verify that the sector
/// spectrum is a sub-multiset of the full spectrum.
pub fn plus_sector(g: &GadgetHamiltonian) -> Result<PlusSector> {
    let b = sector_isometry(&g.spec);
    let h0 = b.adjoint() * &g.h_anc * &b;
    let v = b.adjoint() * &g.v * &b;
    let matrix = &h0 + &v * c64(g.lambda, 0.0);

    let sector = hermitian_eig(&matrix)?.eigenvalues;
    let full = hermitian_eig(&g.matrix)?.eigenvalues;
    let mut i = 0usize;
    for &e in &sector {
        while i < full.len() && full[i] < e - tol::SPECTRUM_MATCH {
            i += 1;
        }
        if i >= full.len() || (full[i] - e).abs() > tol::SPECTRUM_MATCH {
            return Err(Error::Verification(format!(
                "sector eigenvalue {e} is missing from the full spectrum"
            )));
        }
        i += 1;
    }

    Ok(PlusSector {
        isometry: b,
        h0,
        v,
        matrix,
    })
}

/// The d lowest eigenpairs of a Hamiltonian, kept as an operator
/// sum E_j |psi_j><psi_j| plus the projector onto their span.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    pub d: usize,
    pub energies: Vec<f64>,
    pub matrix: CMatrix,
    pub projector: CMatrix,
}

/// Sum over the d lowest eigenpairs. A degenerate level straddling the
/// cut is an error: the restriction would depend on an arbitrary basis
/// choice inside the degenerate block.
///
/// The solver pins the kept span down to near machine precision, but its
/// eigenvalues only carry absolute accuracy `eps * |h|`, which would bury
/// level splittings that sit many orders below the norm. The restriction
/// is therefore re-derived as the block `B^dag H B` over the kept columns
/// with compensated products, making each entry accurate relative to its
/// own magnitude, and the reported energies and operators come from that
/// block.
pub fn effective_hamiltonian(h: &CMatrix, d: usize) -> Result<EffectiveHamiltonian> {
    let dim = h.nrows();
    if d == 0 || d > dim {
        return Err(Error::Contract(format!(
            "cannot keep {d} eigenstates of a dimension-{dim} operator"
        )));
    }
    let eig = hermitian_eig(h)?;
    if d < dim {
        let gap = eig.eigenvalues[d] - eig.eigenvalues[d - 1];
        if gap <= tol::DEGENERACY_GAP {
            return Err(Error::DegenerateCut { d, gap });
        }
    }
    let basis = eig.eigenvectors.columns(0, d).into_owned();
    let block = compensated_mul(&basis.adjoint(), &compensated_mul(h, &basis));
    let block = (&block + block.adjoint()) * c64(0.5, 0.0);
    let refined = hermitian_eig(&block)?;
    let matrix = &basis * &block * basis.adjoint();
    let projector = &basis * basis.adjoint();
    Ok(EffectiveHamiltonian {
        d,
        energies: refined.eigenvalues,
        matrix,
        projector,
    })
}

/// The uniform shift Tr(H_eff)/d, which equals the shift function of the
/// gadget series up to the first non-identity order when the target
/// Hamiltonian is traceless.
pub fn estimate_shift(e: &EffectiveHamiltonian) -> f64 {
    e.matrix.trace().re / e.d as f64
}

/// H_eff - Delta Pi: same eigenvectors and gaps, shifted spectrum.
pub fn shifted_effective(e: &EffectiveHamiltonian, delta: f64) -> CMatrix {
    &e.matrix - &e.projector * c64(delta, 0.0)
}

/// All tuples (l_1..l_len) of nonnegative integers summing to `total`
/// whose partial sums satisfy l_1 + .. + l_p >= p for p = 1..len-1.
fn resolvent_tuples(len: usize, total: usize) -> Vec<Vec<usize>> {
    fn extend(tuple: &mut Vec<usize>, remaining: usize, len: usize, out: &mut Vec<Vec<usize>>) {
        if tuple.len() == len {
            if remaining == 0 {
                out.push(tuple.clone());
            }
            return;
        }
        let position = tuple.len() + 1;
        let used: usize = tuple.iter().sum();
        for l in 0..=remaining {
            // Partial-sum constraint applies strictly before the last slot.
            if position < len && used + l < position {
                continue;
            }
            tuple.push(l);
            extend(tuple, remaining - l, len, out);
            tuple.pop();
        }
    }
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), total, len, &mut out);
    out
}

/// Tuples for the order-m wave-operator term: length m, sum m.
pub fn u_tuples(m: usize) -> Vec<Vec<usize>> {
    resolvent_tuples(m, m)
}

/// Tuples for the order-m effective-operator term: length m-1, sum m-1.
pub fn a_tuples(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![];
    }
    resolvent_tuples(m - 1, m - 1)
}

/// Bloch degenerate perturbation series for H = H0 + lambda V around the
/// ground space of H0. `a_terms[m-1]` and `u_terms[m-1]` are the order-m
/// operators computed in the frame where the H0 ground energy is zero;
/// `a_total` restores the frame shift.
#[derive(Debug, Clone)]
pub struct BlochSeries {
    pub order: usize,
    pub lambda: f64,
    /// Ground energy of H0 subtracted before expanding.
    pub ground_energy: f64,
    /// Unperturbed gap between the ground space and the next eigenspace.
    pub gap: f64,
    /// Projector onto the unperturbed ground space.
    pub p0: CMatrix,
    pub a_terms: Vec<CMatrix>,
    pub u_terms: Vec<CMatrix>,
    pub a_tuple_counts: Vec<usize>,
    pub u_tuple_counts: Vec<usize>,
}

impl BlochSeries {
    /// Sum of the per-order effective operators, frame shift restored.
    pub fn a_total(&self) -> CMatrix {
        let mut a = &self.p0 * c64(self.ground_energy, 0.0);
        for t in &self.a_terms {
            a += t;
        }
        a
    }

    /// Truncated wave operator P0 + sum_m U^(m).
    pub fn u_total(&self) -> CMatrix {
        let mut u = self.p0.clone();
        for t in &self.u_terms {
            u += t;
        }
        u
    }

    /// Truncated effective Hamiltonian U A U^dag.
    pub fn h_eff(&self) -> CMatrix {
        let u = self.u_total();
        &u * self.a_total() * u.adjoint()
    }
}

/// Expand the Bloch series to the given order. Requires the convergence
/// condition ||lambda V|| < gap/4.
pub fn bloch_series(h0: &CMatrix, v: &CMatrix, lambda: f64, order: usize) -> Result<BlochSeries> {
    if order == 0 {
        return Err(Error::Contract("series order must be at least 1".into()));
    }
    if hermiticity_defect(v) > tol::HERMITIAN_INPUT {
        return Err(Error::Contract("perturbation must be Hermitian".into()));
    }
    let eig = hermitian_eig(h0)?;
    let dim = h0.nrows();
    let ground_energy = eig.eigenvalues[0];

    // Cluster the shifted spectrum into eigenspaces.
    let mut clusters: Vec<(f64, CMatrix)> = Vec::new();
    for (idx, &e) in eig.eigenvalues.iter().enumerate() {
        let shifted = e - ground_energy;
        let col = eig.eigenvectors.column(idx);
        let outer = col * col.adjoint();
        match clusters.last_mut() {
            Some((e0, proj)) if (shifted - *e0).abs() <= tol::EIGENSPACE_CLUSTER => {
                *proj += outer;
            }
            _ => clusters.push((shifted, outer)),
        }
    }
    let p0 = clusters[0].1.clone();
    if clusters.len() < 2 {
        return Err(Error::Contract(
            "unperturbed Hamiltonian has no excited eigenspace".into(),
        ));
    }
    let gap = clusters[1].0;

    let perturbation_norm = lambda * opnorm(v)?;
    let threshold = gap / 4.0;
    if perturbation_norm >= threshold {
        return Err(Error::SeriesDivergence {
            perturbation_norm,
            threshold,
        });
    }

    // S^l for l = 0..order: -P0 at l = 0, else sum_{j>0} P_j / (-E_j)^l.
    let mut s_pows: Vec<CMatrix> = Vec::with_capacity(order + 1);
    s_pows.push(-&p0);
    for l in 1..=order {
        let mut s = CMatrix::zeros(dim, dim);
        for (e, proj) in clusters.iter().skip(1) {
            s += proj * c64(1.0 / (-e).powi(l as i32), 0.0);
        }
        s_pows.push(s);
    }

    let mut a_terms = Vec::with_capacity(order);
    let mut u_terms = Vec::with_capacity(order);
    let mut a_tuple_counts = Vec::with_capacity(order);
    let mut u_tuple_counts = Vec::with_capacity(order);
    for m in 1..=order {
        let scale = c64(lambda.powi(m as i32), 0.0);

        let tuples = a_tuples(m);
        a_tuple_counts.push(tuples.len());
        let mut a_m = CMatrix::zeros(dim, dim);
        for tuple in &tuples {
            let mut term = v * &p0;
            for &l in tuple.iter().rev() {
                term = v * &s_pows[l] * term;
            }
            a_m += &p0 * term;
        }
        a_terms.push(a_m * scale);

        let tuples = u_tuples(m);
        u_tuple_counts.push(tuples.len());
        let mut u_m = CMatrix::zeros(dim, dim);
        for tuple in &tuples {
            let mut term = p0.clone();
            for &l in tuple.iter().rev() {
                term = &s_pows[l] * (v * term);
            }
            u_m += term;
        }
        u_terms.push(u_m * scale);
    }

    Ok(BlochSeries {
        order,
        lambda,
        ground_energy,
        gap,
        p0,
        a_terms,
        u_terms,
        a_tuple_counts,
        u_tuple_counts,
    })
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Coefficient -k(-lambda)^k/(k-1)! of the simulated interaction.
pub fn ideal_coefficient(k: usize, lambda: f64) -> f64 {
    -(k as f64) * (-lambda).powi(k as i32) / factorial(k - 1)
}

/// The predicted low-energy operator in +1-sector coordinates:
/// the ideal coefficient times H x (per-register cat projectors).
pub fn ideal_hamiltonian_sector(spec: &KLocalHamiltonian, lambda: f64) -> CMatrix {
    let half = 1usize << (spec.k() - 1);
    let mut cat = CMatrix::zeros(half, half);
    cat[(0, 0)] = c64(1.0, 0.0);
    let mut pieces = vec![spec.matrix()];
    for _ in 0..spec.r() {
        pieces.push(cat.clone());
    }
    kron_chain(&pieces) * c64(ideal_coefficient(spec.k(), lambda), 0.0)
}

/// Leading-order bookkeeping for the gadget series at k in {3, 4}.
#[derive(Debug, Clone)]
pub struct LeadingTermReport {
    pub k: usize,
    pub lambda: f64,
    /// prod_{j=1}^{k-1} 1/(-j(k-j)) = (-1)^{k-1}/((k-1)!)^2.
    pub denominator_product: f64,
    /// -k(-lambda)^k/(k-1)!.
    pub coefficient_predicted: f64,
    /// Frobenius projection of the series' non-identity part onto the
    /// predicted operator.
    pub coefficient_extracted: f64,
    /// Residual of the non-identity part after removing the prediction.
    pub identity_defect: f64,
    /// Truncated-series shift function f(lambda) = Tr(A)/d.
    pub shift_function: f64,
    /// Hermiticity defect of the truncated effective operator.
    pub hermiticity_defect: f64,
}

/// Verify that the order-k cross terms of the Bloch series reproduce the
/// predicted interaction coefficient.
pub fn leading_term_check(g: &GadgetHamiltonian) -> Result<LeadingTermReport> {
    let k = g.spec.k();
    if !(3..=4).contains(&k) {
        return Err(Error::Contract(format!(
            "leading-term audit covers k in {{3, 4}}, got {k}"
        )));
    }
    let sector = plus_sector(g)?;
    let series = bloch_series(&sector.h0, &sector.v, g.lambda, k)?;
    let a = series.a_total();
    let defect = hermiticity_defect(&a);
    if defect > tol::HERMITIAN_INPUT {
        return Err(Error::Verification(format!(
            "truncated gadget series is not Hermitian: defect {defect:.3e}"
        )));
    }

    let d = 1usize << g.spec.n();
    let shift = a.trace().re / d as f64;
    let non_identity = &a - &series.p0 * c64(shift, 0.0);

    let target = ideal_hamiltonian_sector(&g.spec, g.lambda)
        * c64(1.0 / ideal_coefficient(k, g.lambda), 0.0);
    let overlap: Complex64 = (target.adjoint() * &non_identity).trace();
    let target_sq: Complex64 = (target.adjoint() * &target).trace();
    let extracted = overlap.re / target_sq.re;

    let residual = &non_identity - &target * c64(extracted, 0.0);
    let denominators: f64 = (1..k).map(|j| 1.0 / -((j * (k - j)) as f64)).product();

    Ok(LeadingTermReport {
        k,
        lambda: g.lambda,
        denominator_product: denominators,
        coefficient_predicted: ideal_coefficient(k, g.lambda),
        coefficient_extracted: extracted,
        identity_defect: opnorm(&residual)?,
        shift_function: shift,
        hermiticity_defect: defect,
    })
}

/// One row of the error-ratio experiment.
#[derive(Debug, Clone, Copy)]
pub struct ErrorRatioPoint {
    pub lambda: f64,
    /// Whether ||lambda V|| < gap/4 held; when false the row is skipped.
    pub converged: bool,
    /// ||H_ideal - H_eff_shifted|| / ||H_ideal||.
    pub ratio: Option<f64>,
    /// Shift estimate Tr(H_eff)/d.
    pub delta: Option<f64>,
}

/// Exact (non-perturbative) gadget-vs-prediction error across a grid of
/// perturbation strengths, in grid order.
pub fn error_ratio_scan(h: &KLocalHamiltonian, lambdas: &[f64]) -> Result<Vec<ErrorRatioPoint>> {
    let gadget = build_gadget(h, 0.0)?;
    let sector = plus_sector(&gadget)?;
    let v_norm = opnorm(&sector.v)?;
    let threshold = gadget.gap / 4.0;
    let d = 1usize << h.n();

    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Contract(format!(
                "perturbation grid must be positive and finite, got {lambda}"
            )));
        }
        if lambda * v_norm >= threshold {
            rows.push(ErrorRatioPoint {
                lambda,
                converged: false,
                ratio: None,
                delta: None,
            });
            continue;
        }
        let matrix = &sector.h0 + &sector.v * c64(lambda, 0.0);
        let eff = effective_hamiltonian(&matrix, d)?;
        let delta = estimate_shift(&eff);
        let shifted = shifted_effective(&eff, delta);
        let ideal = ideal_hamiltonian_sector(h, lambda);
        let ratio = opnorm(&(&ideal - &shifted))? / opnorm(&ideal)?;
        rows.push(ErrorRatioPoint {
            lambda,
            converged: true,
            ratio: Some(ratio),
            delta: Some(delta),
        });
    }
    Ok(rows)
}

/// Evenly spaced grid between `min` and `max`, linear or logarithmic.
pub fn lambda_grid(min: f64, max: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::Contract("grid needs at least one point".into()));
    }
    if !(min.is_finite() && max.is_finite()) || min > max || (log && min <= 0.0) {
        return Err(Error::Contract(format!(
            "invalid grid bounds [{min}, {max}]"
        )));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let grid = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            if log {
                (min.ln() + t * (max.ln() - min.ln())).exp()
            } else {
                min + t * (max - min)
            }
        })
        .collect();
    Ok(grid)
}

/// Least-squares slope of ln(y) against ln(x).
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Contract(
            "slope estimation needs at least two points".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(cov / var)
}
