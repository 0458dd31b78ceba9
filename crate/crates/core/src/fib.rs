//! The Fibonacci representation of braid groups.
//!
//! States are length-m strings over {p, *} with no two * adjacent; a braid
//! on n strands acts on strings of length m = n+1. Crossing sigma_i touches
//! the (i+1)-th symbol and is conditioned on its two neighbors, so the first
//! and last symbols are conserved and the representation splits into four
//! boundary sectors. Strings are indexed by their Zeckendorf value and every
//! basis here is ordered by ascending index, which makes all matrices
//! reproducible bit-for-bit.

use num_complex::Complex64;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::linalg::{eye, CMatrix};

/// Fibonacci numbers with f_0 = 0, f_1 = f_2 = 1.
pub fn fib(k: usize) -> u64 {
    assert!(k <= 92, "Fibonacci index {k} overflows u64");
    let (mut prev, mut next) = (0u64, 1u64);
    for _ in 0..k {
        let sum = prev + next;
        prev = next;
        next = sum;
    }
    prev
}

/// The constants of the representation at the five-fold root of unity.
///
/// `kauffman_a` is the bracket variable A = e^{-i3pi/5}; `a`, `b` are the
/// diagonal crossing amplitudes and `c`, `d`, `e` fill the 2x2 mixing block;
/// `loop_value` is the closed-loop weight D and `t` the Jones argument.
#[derive(Debug, Clone)]
pub struct FibConstants {
    pub kauffman_a: Complex64,
    pub tau: f64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
    pub phi: f64,
    pub loop_value: f64,
    pub delta: Complex64,
    pub t: Complex64,
}

impl FibConstants {
    pub fn new() -> Self {
        use std::f64::consts::PI;
        // Powers of A taken as exact phases to avoid accumulation.
        let a_pow = |k: f64| Complex64::from_polar(1.0, -3.0 * PI * k / 5.0);
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let tau = 2.0 / (1.0 + 5.0f64.sqrt());
        let a4 = a_pow(4.0);
        let a8 = a_pow(8.0);
        FibConstants {
            kauffman_a: a_pow(1.0),
            tau,
            a: -a4,
            b: a8,
            c: a8 * tau * tau - a4 * tau,
            d: (a8 + a4) * tau.powf(1.5),
            e: a8 * tau - a4 * tau * tau,
            phi,
            loop_value: phi,
            delta: a_pow(1.0) - 1.0,
            t: a_pow(-4.0),
        }
    }
}

impl Default for FibConstants {
    fn default() -> Self {
        FibConstants::new()
    }
}

/// One symbol of a state string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    P,
    Star,
}

/// A string over {p, *} with no two * adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolString(Vec<Symbol>);

impl SymbolString {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Contract("symbol string must be non-empty".into()));
        }
        if symbols
            .windows(2)
            .any(|w| w == [Symbol::Star, Symbol::Star])
        {
            return Err(Error::Contract(format!(
                "adjacent * symbols in {}",
                render(&symbols)
            )));
        }
        Ok(SymbolString(symbols))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn first(&self) -> Symbol {
        self.0[0]
    }

    pub fn last(&self) -> Symbol {
        *self.0.last().unwrap()
    }
}

fn render(symbols: &[Symbol]) -> String {
    symbols
        .iter()
        .map(|s| match s {
            Symbol::P => 'p',
            Symbol::Star => '*',
        })
        .collect()
}

impl std::fmt::Display for SymbolString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render(&self.0))
    }
}

impl std::str::FromStr for SymbolString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|ch| match ch {
                'p' => Ok(Symbol::P),
                '*' => Ok(Symbol::Star),
                other => Err(Error::Contract(format!(
                    "invalid symbol {other:?}; expected 'p' or '*'"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        SymbolString::new(symbols)
    }
}

/// Zeckendorf value of a string: each * at right-position j contributes
/// f_{j+1}, so the f_{m+2} valid strings map onto 0..f_{m+2}-1.
pub fn zeckendorf_index(s: &SymbolString) -> u64 {
    let m = s.len();
    s.symbols()
        .iter()
        .enumerate()
        .filter(|(_, sym)| **sym == Symbol::Star)
        .map(|(idx, _)| fib(m - idx + 1))
        .sum()
}

/// Inverse of [`zeckendorf_index`] for strings of length `m`.
pub fn zeckendorf_decode(z: u64, m: usize) -> Result<SymbolString> {
    if m < 1 {
        return Err(Error::Contract("string length must be at least 1".into()));
    }
    let limit = fib(m + 2);
    if z >= limit {
        return Err(Error::Contract(format!(
            "Zeckendorf value {z} out of range for length {m} (limit {limit})"
        )));
    }
    let mut symbols = vec![Symbol::P; m];
    let mut remaining = z;
    let mut j = m; // right-position of the candidate *
    while j >= 1 {
        let f = fib(j + 1);
        if remaining >= f {
            symbols[m - j] = Symbol::Star;
            remaining -= f;
            // The greedy pick leaves remaining < f_j, so position j-1 can
            // never fire; skipping it keeps * symbols non-adjacent.
            if j <= 2 {
                break;
            }
            j -= 2;
        } else {
            j -= 1;
        }
    }
    assert_eq!(
        remaining, 0,
        "greedy Zeckendorf decomposition must be exact"
    );
    SymbolString::new(symbols)
}

/// Memoized Fibonacci table plus the string/integer bijection at one length.
#[derive(Debug, Clone)]
pub struct ZeckendorfCodec {
    length: usize,
    fib: Vec<u64>,
}

impl ZeckendorfCodec {
    pub fn new(length: usize) -> Result<Self> {
        if length < 1 {
            return Err(Error::Contract("codec length must be at least 1".into()));
        }
        let fib = (0..=length + 2).map(fib).collect();
        Ok(ZeckendorfCodec { length, fib })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Number of valid strings: f_{m+2}.
    pub fn count(&self) -> u64 {
        self.fib[self.length + 2]
    }

    pub fn index(&self, s: &SymbolString) -> Result<u64> {
        if s.len() != self.length {
            return Err(Error::Contract(format!(
                "string length {} does not match codec length {}",
                s.len(),
                self.length
            )));
        }
        Ok(zeckendorf_index(s))
    }

    pub fn decode(&self, z: u64) -> Result<SymbolString> {
        zeckendorf_decode(z, self.length)
    }
}

/// Boundary sector of the representation, named by (first, last) symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorLabel {
    StarStar,
    StarP,
    PStar,
    PP,
    Full,
}

impl SectorLabel {
    /// All sectors in a fixed order (the four boundary classes, then full).
    pub const ALL: [SectorLabel; 5] = [
        SectorLabel::StarStar,
        SectorLabel::StarP,
        SectorLabel::PStar,
        SectorLabel::PP,
        SectorLabel::Full,
    ];

    /// Does this sector contain the string?
    pub fn admits(self, s: &SymbolString) -> bool {
        match self {
            SectorLabel::StarStar => s.first() == Symbol::Star && s.last() == Symbol::Star,
            SectorLabel::StarP => s.first() == Symbol::Star && s.last() == Symbol::P,
            SectorLabel::PStar => s.first() == Symbol::P && s.last() == Symbol::Star,
            SectorLabel::PP => s.first() == Symbol::P && s.last() == Symbol::P,
            SectorLabel::Full => true,
        }
    }

    /// Sector dimension at string length `m`.
    pub fn dimension(self, m: usize) -> usize {
        assert!(m >= 1);
        if m == 1 {
            return match self {
                SectorLabel::StarStar | SectorLabel::PP => 1,
                SectorLabel::StarP | SectorLabel::PStar => 0,
                SectorLabel::Full => 2,
            };
        }
        let f = match self {
            SectorLabel::StarStar => fib(m - 2),
            SectorLabel::StarP | SectorLabel::PStar => fib(m - 1),
            SectorLabel::PP => fib(m),
            SectorLabel::Full => fib(m + 2),
        };
        f as usize
    }
}

impl std::fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SectorLabel::StarStar => "star_star",
            SectorLabel::StarP => "star_p",
            SectorLabel::PStar => "p_star",
            SectorLabel::PP => "p_p",
            SectorLabel::Full => "full",
        })
    }
}

/// All sector strings of length `m`, ordered by ascending Zeckendorf index.
pub fn enumerate_strings(m: usize, sector: SectorLabel) -> Result<Vec<SymbolString>> {
    if m < 1 {
        return Err(Error::Contract("string length must be at least 1".into()));
    }
    let codec = ZeckendorfCodec::new(m)?;
    let mut out = Vec::new();
    for z in 0..codec.count() {
        let s = codec.decode(z)?;
        if sector.admits(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// A sector basis with constant-time position lookup by Zeckendorf index.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub sector: SectorLabel,
    pub length: usize,
    pub strings: Vec<SymbolString>,
    position_of: Vec<Option<usize>>,
}

impl SectorBasis {
    pub fn new(m: usize, sector: SectorLabel) -> Result<Self> {
        let strings = enumerate_strings(m, sector)?;
        let mut position_of = vec![None; fib(m + 2) as usize];
        for (pos, s) in strings.iter().enumerate() {
            position_of[zeckendorf_index(s) as usize] = Some(pos);
        }
        Ok(SectorBasis {
            sector,
            length: m,
            strings,
            position_of,
        })
    }

    pub fn dim(&self) -> usize {
        self.strings.len()
    }

    /// Basis position of the string with Zeckendorf index `z`, if present.
    pub fn position(&self, z: u64) -> Option<usize> {
        self.position_of.get(z as usize).copied().flatten()
    }
}

/// One crossing image as a disjoint list of 1x1 and 2x2 blocks.
#[derive(Debug, Clone)]
pub struct CrossingOp {
    dim: usize,
    blocks: Vec<Block>,
}

#[derive(Debug, Clone)]
enum Block {
    /// Diagonal amplitude at one basis position.
    One { at: usize, factor: Complex64 },
    /// Mixing block over the pair (middle *, middle p), row-major entries.
    Two {
        star: usize,
        p: usize,
        m: [Complex64; 4],
    },
}

impl CrossingOp {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// In-place action on a state vector (blocks are disjoint).
    pub fn apply(&self, v: &mut [Complex64]) {
        debug_assert_eq!(v.len(), self.dim);
        for block in &self.blocks {
            match *block {
                Block::One { at, factor } => v[at] *= factor,
                Block::Two { star, p, m } => {
                    let (vs, vp) = (v[star], v[p]);
                    v[star] = m[0] * vs + m[1] * vp;
                    v[p] = m[2] * vs + m[3] * vp;
                }
            }
        }
    }

    /// Dense materialization.
    pub fn dense(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for block in &self.blocks {
            match *block {
                Block::One { at, factor } => out[(at, at)] = factor,
                Block::Two { star, p, m } => {
                    out[(star, star)] = m[0];
                    out[(star, p)] = m[1];
                    out[(p, star)] = m[2];
                    out[(p, p)] = m[3];
                }
            }
        }
        out
    }
}

/// Image of the signed letter (positive `i` is sigma_i) on a sector basis.
///
/// The five local rules act on the (i+1)-th symbol given its neighbors:
/// diagonal `b` between two *, diagonal `a` next to a single *, and the
/// `[[c,d],[d,e]]` block mixing the middle * and middle p states between
/// two p's. An inverse letter is the conjugate transpose.
pub fn crossing_op(basis: &SectorBasis, letter: i32) -> Result<CrossingOp> {
    let m = basis.length;
    let n = m - 1; // strands
    let i = letter.unsigned_abs() as usize;
    if letter == 0 || i > n.saturating_sub(1) {
        return Err(Error::Contract(format!(
            "generator {letter} out of range for {n} strands"
        )));
    }
    let k = FibConstants::new();
    let (fa, fb, block) = if letter > 0 {
        (k.a, k.b, [k.c, k.d, k.d, k.e])
    } else {
        (
            k.a.conj(),
            k.b.conj(),
            [k.c.conj(), k.d.conj(), k.d.conj(), k.e.conj()],
        )
    };

    let mut blocks = Vec::new();
    for (pos, s) in basis.strings.iter().enumerate() {
        let sym = s.symbols();
        let (left, mid, right) = (sym[i - 1], sym[i], sym[i + 1]);
        match (left, right) {
            (Symbol::Star, Symbol::Star) => blocks.push(Block::One {
                at: pos,
                factor: fb,
            }),
            (Symbol::Star, Symbol::P) | (Symbol::P, Symbol::Star) => blocks.push(Block::One {
                at: pos,
                factor: fa,
            }),
            (Symbol::P, Symbol::P) => {
                // Emit the pair block once, from its middle-* member.
                if mid == Symbol::Star {
                    let z_star = zeckendorf_index(s);
                    let z_p = z_star - fib(m - i + 1);
                    let p_pos = basis.position(z_p).expect("pair partner in sector");
                    blocks.push(Block::Two {
                        star: pos,
                        p: p_pos,
                        m: block,
                    });
                }
            }
        }
    }
    Ok(CrossingOp {
        dim: basis.dim(),
        blocks,
    })
}

/// A braid's representation matrix on one sector.
#[derive(Debug, Clone)]
pub struct RepMatrix {
    pub sector: SectorLabel,
    pub basis: Vec<SymbolString>,
    pub matrix: CMatrix,
}

/// Image of the single generator sigma_i on `n` strands.
pub fn rep_generator(n: usize, i: usize, sector: SectorLabel) -> Result<RepMatrix> {
    if n < 2 || i < 1 || i > n - 1 {
        return Err(Error::Contract(format!(
            "generator index {i} out of range 1..={} for {n} strands",
            n.saturating_sub(1)
        )));
    }
    let basis = SectorBasis::new(n + 1, sector)?;
    let op = crossing_op(&basis, i as i32)?;
    Ok(RepMatrix {
        sector,
        basis: basis.strings,
        matrix: op.dense(),
    })
}

/// Image of a whole braid word: the ordered product of letter images.
pub fn rep_braid(b: &BraidWord, sector: SectorLabel) -> RepMatrix {
    let basis = SectorBasis::new(b.strands() + 1, sector).expect("valid basis");
    let mut matrix = eye(basis.dim());
    for &letter in b.letters() {
        let op = crossing_op(&basis, letter).expect("letters validated by BraidWord");
        matrix *= op.dense();
    }
    RepMatrix {
        sector,
        basis: basis.strings,
        matrix,
    }
}

/// Rotation data extracted from the two-dimensional sector at n = 4.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub angle_a: f64,
    pub angle_b: f64,
    pub axis_a: [f64; 3],
    pub axis_b: [f64; 3],
    /// Angle between the two rotation axes.
    pub separation: f64,
    /// Frobenius distances of R^j from the identity for j = 1..5, where
    /// R is (rotation A)^5 (rotation B)^5.
    pub power_distances: [f64; 5],
}

fn su2_project(m: &CMatrix) -> CMatrix {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    m / det.sqrt()
}

/// Axis-angle form of a special unitary, written as
/// cos(theta/2) I + i sin(theta/2) (n . sigma).
fn su2_axis_angle(v: &CMatrix) -> (f64, [f64; 3]) {
    let cos_half = (v[(0, 0)].re + v[(1, 1)].re) / 2.0;
    let sx = (v[(0, 1)].im + v[(1, 0)].im) / 2.0;
    let sy = (v[(0, 1)].re - v[(1, 0)].re) / 2.0;
    let sz = (v[(0, 0)].im - v[(1, 1)].im) / 2.0;
    let sin_half = (sx * sx + sy * sy + sz * sz).sqrt();
    if sin_half < 1e-15 {
        return (
            if cos_half > 0.0 {
                0.0
            } else {
                2.0 * std::f64::consts::PI
            },
            [0.0, 0.0, 1.0],
        );
    }
    let theta = 2.0 * sin_half.atan2(cos_half);
    (theta, [sx / sin_half, sy / sin_half, sz / sin_half])
}

type Real3 = nalgebra::Matrix3<f64>;

fn rotation_matrix(theta: f64, axis: [f64; 3]) -> Real3 {
    let [x, y, z] = axis;
    let k = Real3::new(0.0, -z, y, z, 0.0, -x, -y, x, 0.0);
    let outer = nalgebra::Vector3::new(x, y, z) * nalgebra::Vector3::new(x, y, z).transpose();
    Real3::identity() * theta.cos() + k * theta.sin() + outer * (1.0 - theta.cos())
}

/// Numerical spot check of the two-generator rotation group at n = 4.
///
/// Projects the two crossing images in the two-dimensional sector into
/// SU(2) (principal determinant root), maps them to SO(3) rotations, and
/// reports angles, axes, the axis separation, and the distances of the
/// first five powers of R = A^5 B^5 from the identity.
pub fn density_spot_check() -> DensityReport {
    let g1 = rep_generator(4, 1, SectorLabel::StarStar).expect("valid generator");
    let g2 = rep_generator(4, 2, SectorLabel::StarStar).expect("valid generator");

    let (angle_a, axis_a) = su2_axis_angle(&su2_project(&g1.matrix));
    let (angle_b, axis_b) = su2_axis_angle(&su2_project(&g2.matrix));

    let dot = axis_a
        .iter()
        .zip(axis_b.iter())
        .map(|(p, q)| p * q)
        .sum::<f64>()
        .clamp(-1.0, 1.0);

    let ra = rotation_matrix(angle_a, axis_a);
    let rb = rotation_matrix(angle_b, axis_b);
    let pow5 = |m: &Real3| {
        let mut out = Real3::identity();
        for _ in 0..5 {
            out *= m;
        }
        out
    };
    let r = pow5(&ra) * pow5(&rb);

    let mut power_distances = [0.0; 5];
    let mut acc = Real3::identity();
    for slot in power_distances.iter_mut() {
        acc *= r;
        *slot = (acc - Real3::identity()).norm();
    }

    DensityReport {
        angle_a,
        angle_b,
        axis_a,
        axis_b,
        separation: dot.acos(),
        power_distances,
    }
}
