//! Weighted Markov trace over the Fibonacci representation and the Jones
//! value of a braid's trace closure, plus Temperley-Lieb image checks.
//!
//! The trace sums diagonal representation elements over the strings that
//! start with *, weighting a string by phi when it ends with p and by 1 when
//! it ends with * — equivalently, the union of the *..* and *..p sector
//! traces. Normalized by phi f_n + f_{n-1}, the identity braid traces to 1
//! exactly, and the Jones value is the trace times (-A)^{3w} phi^{n-1}.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::fib::{crossing_op, fib, CrossingOp, FibConstants, SectorBasis, SectorLabel};
use crate::linalg::{c64, eye, max_abs_diff, CMatrix};

/// Weighted trace of a braid word.
#[derive(Debug, Clone)]
pub struct WeightedTraceResult {
    /// The normalized trace.
    pub value: Complex64,
    /// phi f_n + f_{n-1}; dividing by it makes the identity trace to 1.
    pub normalizer: f64,
    /// Weighted diagonal sum over the *..* sector (weight 1 per string).
    pub star_star_part: Complex64,
    /// Weighted diagonal sum over the *..p sector (weight phi per string).
    pub star_p_part: Complex64,
}

/// Diagonal of the representation on one sector, computed by applying the
/// block-sparse crossing sequence to each basis vector in fixed order.
fn sector_diagonal_sum(b: &BraidWord, sector: SectorLabel) -> Complex64 {
    let basis = SectorBasis::new(b.strands() + 1, sector).expect("valid basis");
    let dim = basis.dim();
    if dim == 0 {
        return c64(0.0, 0.0);
    }
    // rho(g1 g2 .. gk) v needs gk applied first.
    let ops: Vec<CrossingOp> = b
        .letters()
        .iter()
        .rev()
        .map(|&g| crossing_op(&basis, g).expect("letters validated by BraidWord"))
        .collect();

    let mut sum = c64(0.0, 0.0);
    let mut v = vec![c64(0.0, 0.0); dim];
    for s in 0..dim {
        v.iter_mut().for_each(|z| *z = c64(0.0, 0.0));
        v[s] = c64(1.0, 0.0);
        for op in &ops {
            op.apply(&mut v);
        }
        sum += v[s];
    }
    sum
}

/// Weighted Markov trace of the representation of `b`.
pub fn weighted_trace(b: &BraidWord) -> WeightedTraceResult {
    let k = FibConstants::new();
    let n = b.strands();
    let normalizer = k.phi * fib(n) as f64 + fib(n - 1) as f64;

    let star_star_part = sector_diagonal_sum(b, SectorLabel::StarStar);
    let star_p_part = sector_diagonal_sum(b, SectorLabel::StarP) * k.phi;

    WeightedTraceResult {
        value: (star_star_part + star_p_part) / normalizer,
        normalizer,
        star_star_part,
        star_p_part,
    }
}

/// Jones value of a trace closure.
#[derive(Debug, Clone)]
pub struct JonesValue {
    pub value: Complex64,
    pub writhe: i64,
    pub strands: usize,
    /// (-A)^{3w} phi^{n-1}; `value` is this times the weighted trace.
    pub prefactor: Complex64,
}

/// Jones polynomial of the trace closure of `b`, evaluated at t = A^{-4}.
pub fn jones_trace_closure(b: &BraidWord) -> JonesValue {
    let k = FibConstants::new();
    let w = b.writhe();
    let n = b.strands();
    // -A = e^{i 2 pi / 5}, so (-A)^{3w} is the exact phase e^{i 6 pi w / 5}.
    let phase = Complex64::from_polar(1.0, 6.0 * std::f64::consts::PI * w as f64 / 5.0);
    let prefactor = phase * k.phi.powi(n as i32 - 1);
    let trace = weighted_trace(b);
    JonesValue {
        value: prefactor * trace.value,
        writhe: w,
        strands: n,
        prefactor,
    }
}

/// Temperley-Lieb generator images E_i over the full sector.
#[derive(Debug, Clone)]
pub struct TLImage {
    pub n: usize,
    /// `e[i-1]` is E_i = A^{-1} rho(sigma_i) - A^{-2} I.
    pub e: Vec<CMatrix>,
}

/// Build the E_i images for braids on `n` strands.
pub fn tl_image(n: usize) -> Result<TLImage> {
    if n < 2 {
        return Err(Error::Contract(format!(
            "Temperley-Lieb image needs at least 2 strands, got {n}"
        )));
    }
    let k = FibConstants::new();
    let a_inv = k.kauffman_a.inv();
    let a_inv2 = a_inv * a_inv;
    let basis = SectorBasis::new(n + 1, SectorLabel::Full)?;
    let dim = basis.dim();
    let e = (1..n)
        .map(|i| {
            let rho = crossing_op(&basis, i as i32)?.dense();
            Ok(rho * a_inv - eye(dim) * a_inv2)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TLImage { n, e })
}

/// Worst-case defects of the three Temperley-Lieb relations.
#[derive(Debug, Clone)]
pub struct TLRelationReport {
    /// max |E_i E_j - E_j E_i| over |i-j| > 1.
    pub far_commute_defect: f64,
    /// max |E_i E_{i+-1} E_i - E_i|.
    pub absorb_defect: f64,
    /// max |E_i^2 - D E_i|.
    pub square_defect: f64,
}

impl TLRelationReport {
    pub fn max_defect(&self) -> f64 {
        self.far_commute_defect
            .max(self.absorb_defect)
            .max(self.square_defect)
    }
}

/// Check E_i E_j = E_j E_i (|i-j|>1), E_i E_{i+-1} E_i = E_i, E_i^2 = D E_i.
pub fn tl_relation_check(img: &TLImage) -> TLRelationReport {
    let k = FibConstants::new();
    let count = img.e.len();
    let mut far = 0.0f64;
    let mut absorb = 0.0f64;
    let mut square = 0.0f64;
    for i in 0..count {
        let ei = &img.e[i];
        square = square.max(max_abs_diff(&(ei * ei), &(ei * c64(k.loop_value, 0.0))));
        for j in 0..count {
            if i.abs_diff(j) > 1 {
                far = far.max(max_abs_diff(&(ei * &img.e[j]), &(&img.e[j] * ei)));
            }
            if i.abs_diff(j) == 1 {
                absorb = absorb.max(max_abs_diff(&(ei * &img.e[j] * ei), ei));
            }
        }
    }
    TLRelationReport {
        far_commute_defect: far,
        absorb_defect: absorb,
        square_defect: square,
    }
}

/// Defects observed when checking both Markov moves on a braid.
#[derive(Debug, Clone)]
pub struct MarkovReport {
    pub trials: usize,
    /// max |tr(g b g^-1) - tr(b)| over random conjugators g.
    pub conjugation_defect: f64,
    /// |jones(b sigma_n) - jones(b)| after widening to n+1 strands.
    pub stabilization_positive_defect: f64,
    /// |jones(b sigma_n^-1) - jones(b)| after widening to n+1 strands.
    pub stabilization_negative_defect: f64,
}

/// Verify trace invariance under conjugation and the Jones value under
/// stabilization by sigma_n^{+-1}.
pub fn markov_move_check(b: &BraidWord, trials: usize, seed: u64) -> Result<MarkovReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = b.strands();
    let base_trace = weighted_trace(b).value;

    let mut conjugation_defect = 0.0f64;
    if n >= 2 {
        for _ in 0..trials {
            let len = rng.random_range(1..=8);
            let letters: Vec<i32> = (0..len)
                .map(|_| {
                    let g = rng.random_range(1..n) as i32;
                    if rng.random_bool(0.5) {
                        g
                    } else {
                        -g
                    }
                })
                .collect();
            let g = BraidWord::new(n, letters)?;
            let conjugated = g.concat(b)?.concat(&g.inverse())?;
            let trace = weighted_trace(&conjugated).value;
            conjugation_defect = conjugation_defect.max((trace - base_trace).norm());
        }
    }

    let jones_base = jones_trace_closure(b).value;
    let widened = b.widen(n + 1)?;
    let stab = |sign: i32| -> Result<f64> {
        let letter = BraidWord::new(n + 1, vec![sign * n as i32])?;
        let stabilized = widened.concat(&letter)?;
        Ok((jones_trace_closure(&stabilized).value - jones_base).norm())
    };

    Ok(MarkovReport {
        trials,
        conjugation_defect,
        stabilization_positive_defect: stab(1)?,
        stabilization_negative_defect: stab(-1)?,
    })
}
