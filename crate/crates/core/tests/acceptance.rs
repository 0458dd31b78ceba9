//! Acceptance gate: one test per release criterion, each at its frozen
//! tolerance. The per-test pass/fail line from the harness is the
//! criterion's verdict; run with `--nocapture` for the measured numbers.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qwb_core::adiabatic::AdiabaticSchedule;
use qwb_core::bracket::kauffman_bracket;
use qwb_core::dqc1::{clean_ancilla_augment, dqc1_jones_estimate, trace_form_circuit};
use qwb_core::fib::{
    crossing_op, density_spot_check, fib, zeckendorf_index, SectorBasis, SectorLabel, Symbol,
    SymbolString, ZeckendorfCodec,
};
use qwb_core::gadget::{
    a_tuples, bloch_series, build_gadget, error_ratio_scan, lambda_grid, log_log_slope,
    plus_sector, u_tuples, KLocalHamiltonian, KLocalTerm, PauliFactor,
};
use qwb_core::jones::{
    jones_trace_closure, markov_move_check, tl_image, tl_relation_check, weighted_trace,
};
use qwb_core::linalg::{c64, eye, hermitian_eig, matexp, max_abs_diff};
use qwb_core::stab::{
    check_detection, encode_hamiltonian, five_qubit_code, four_qubit_code, gap_check,
    search_3qubit_codes, singleton_check,
};
use qwb_core::{BraidWord, CMatrix};

fn words_up_to(strands: usize, max_len: usize) -> Vec<BraidWord> {
    let alphabet: Vec<i32> = (1..strands as i32).flat_map(|i| [i, -i]).collect();
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut idx = vec![0usize; len];
        loop {
            let letters: Vec<i32> = idx.iter().map(|&j| alphabet[j]).collect();
            out.push(BraidWord::new(strands, letters).expect("valid word"));
            let mut pos = 0;
            while pos < len {
                idx[pos] += 1;
                if idx[pos] < alphabet.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == len {
                break;
            }
        }
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng, strands: usize, len: usize) -> BraidWord {
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let mag = rng.random_range(1..strands as i32);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    BraidWord::new(strands, letters).expect("valid word")
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let a = CMatrix::from_fn(d, d, |_, _| {
        c64(rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7))
    });
    (&a + &a.adjoint()) * c64(0.5, 0.0)
}

fn random_unitary(rng: &mut ChaCha8Rng, qubits: usize) -> CMatrix {
    matexp(&random_hermitian(rng, 1 << qubits), Complex64::i()).expect("unitary")
}

fn random_axis(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 0.3 {
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

fn term(c: f64, factors: &[(usize, [f64; 3])]) -> KLocalTerm {
    KLocalTerm {
        c,
        factors: factors
            .iter()
            .map(|&(qubit, axis)| PauliFactor { qubit, axis })
            .collect(),
    }
}

const AXIS_X: [f64; 3] = [1.0, 0.0, 0.0];
const AXIS_Y: [f64; 3] = [0.0, 1.0, 0.0];
const AXIS_Z: [f64; 3] = [0.0, 0.0, 1.0];

fn xyz() -> KLocalHamiltonian {
    KLocalHamiltonian::new(
        3,
        3,
        vec![term(1.0, &[(0, AXIS_X), (1, AXIS_Y), (2, AXIS_Z)])],
    )
    .expect("valid spec")
}

fn xyz_plus_xyy() -> KLocalHamiltonian {
    KLocalHamiltonian::new(
        3,
        3,
        vec![
            term(1.0, &[(0, AXIS_X), (1, AXIS_Y), (2, AXIS_Z)]),
            term(0.7, &[(0, AXIS_X), (1, AXIS_Y), (2, AXIS_Y)]),
        ],
    )
    .expect("valid spec")
}

fn xyzz() -> KLocalHamiltonian {
    KLocalHamiltonian::new(
        4,
        4,
        vec![term(
            1.0,
            &[(0, AXIS_X), (1, AXIS_Y), (2, AXIS_Z), (3, AXIS_Z)],
        )],
    )
    .expect("valid spec")
}

#[test]
fn criterion_01_trace_evaluator_matches_the_state_sum_oracle() {
    let start = Instant::now();
    let mut corpus = words_up_to(2, 6);
    corpus.extend(words_up_to(3, 4));
    let mut rng = ChaCha8Rng::seed_from_u64(2001);
    for _ in 0..200 {
        let strands = rng.random_range(2..=5usize);
        let len = rng.random_range(1..=8usize);
        corpus.push(random_word(&mut rng, strands, len));
    }
    let mut worst = 0.0f64;
    for b in &corpus {
        let evaluated = jones_trace_closure(b).value;
        let oracle = kauffman_bracket(b)
            .expect("within the crossing limit")
            .jones;
        worst = worst.max((evaluated - oracle).norm());
    }
    assert!(
        worst <= 1e-9,
        "worst oracle defect {worst:e} over {} words",
        corpus.len()
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}, budget 2 min");
    println!(
        "criterion 01: {} words, worst defect {worst:e}, {elapsed:?}",
        corpus.len()
    );
}

#[test]
fn criterion_02_trace_normalization_markov_moves_and_projector_relations() {
    for n in 2..=10usize {
        let identity = BraidWord::new(n, vec![]).unwrap();
        let trace = weighted_trace(&identity).value;
        assert!(
            (trace - c64(1.0, 0.0)).norm() <= 1e-12,
            "identity trace {trace} on {n} strands"
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let mut worst_markov = 0.0f64;
    for i in 0..50u64 {
        let strands = rng.random_range(2..=6usize);
        let len = rng.random_range(1..=8usize);
        let b = random_word(&mut rng, strands, len);
        let report = markov_move_check(&b, 4, 3000 + i).expect("valid word");
        worst_markov = worst_markov
            .max(report.conjugation_defect)
            .max(report.stabilization_positive_defect)
            .max(report.stabilization_negative_defect);
    }
    assert!(
        worst_markov <= 1e-9,
        "worst Markov-move defect {worst_markov:e}"
    );

    let mut worst_tl = 0.0f64;
    for n in 2..=6usize {
        let img = tl_image(n).unwrap();
        worst_tl = worst_tl.max(tl_relation_check(&img).max_defect());
    }
    assert!(
        worst_tl <= 1e-10,
        "worst projector-relation defect {worst_tl:e}"
    );
    println!("criterion 02: markov {worst_markov:e}, projector relations {worst_tl:e}");
}

#[test]
fn criterion_03_braid_relations_hold_in_every_sector_up_to_eight_strands() {
    let mut worst = 0.0f64;
    for strands in 2..=8usize {
        for sector in SectorLabel::ALL {
            let basis = SectorBasis::new(strands + 1, sector).unwrap();
            if basis.dim() == 0 {
                continue;
            }
            let dense = |i: i32| crossing_op(&basis, i).unwrap().dense();
            let gens: Vec<CMatrix> = (1..strands as i32).map(dense).collect();
            for i in 0..gens.len() {
                for j in 0..gens.len() {
                    if i.abs_diff(j) > 1 {
                        worst =
                            worst.max(max_abs_diff(&(&gens[i] * &gens[j]), &(&gens[j] * &gens[i])));
                    }
                }
                if i + 1 < gens.len() {
                    let lhs = &gens[i] * &gens[i + 1] * &gens[i];
                    let rhs = &gens[i + 1] * &gens[i] * &gens[i + 1];
                    worst = worst.max(max_abs_diff(&lhs, &rhs));
                }
            }
        }
    }
    assert!(worst <= 1e-10, "worst braid-relation defect {worst:e}");
    println!("criterion 03: worst relation defect {worst:e}");
}

#[test]
fn criterion_04_crossing_rotations_sit_at_the_dense_angles() {
    let report = density_spot_check();
    let want_angle = 7.0 * std::f64::consts::PI / 5.0;
    assert!(
        (report.angle_a - want_angle).abs() <= 1e-9,
        "first rotation angle {}",
        report.angle_a
    );
    assert!(
        (report.angle_b - want_angle).abs() <= 1e-9,
        "second rotation angle {}",
        report.angle_b
    );
    assert!(
        (report.separation - 1.8091137886).abs() <= 1e-9,
        "axis separation {}",
        report.separation
    );
    assert!(
        (report.separation - (2.0 - 5.0f64.sqrt()).acos()).abs() <= 1e-9,
        "axis separation {} off the closed form",
        report.separation
    );
    println!(
        "criterion 04: angles {}, {}; separation {}",
        report.angle_a, report.angle_b, report.separation
    );
}

#[test]
fn criterion_05_string_indexing_is_a_bijection() {
    for m in 1..=20usize {
        let codec = ZeckendorfCodec::new(m).unwrap();
        assert_eq!(codec.count(), fib(m + 2), "count at length {m}");
        for z in 0..codec.count() {
            let s = codec.decode(z).unwrap();
            assert_eq!(s.len(), m);
            assert_eq!(codec.index(&s).unwrap(), z, "round trip at length {m}");
        }
    }
    let left = SymbolString::new(vec![Symbol::Star, Symbol::P, Symbol::P, Symbol::Star]).unwrap();
    let right = SymbolString::new(vec![
        Symbol::P,
        Symbol::P,
        Symbol::Star,
        Symbol::P,
        Symbol::P,
        Symbol::P,
    ])
    .unwrap();
    assert_eq!(zeckendorf_index(&left), 6);
    assert_eq!(zeckendorf_index(&right), 5);
    println!("criterion 05: bijective through length 20; split example (6, 5)");
}

#[test]
fn criterion_06_clean_qubit_estimator_is_unbiased_and_trace_identities_hold() {
    let corpus: [(usize, &[i32]); 4] = [
        (2, &[1, 1, 1]),
        (3, &[1, -2, 1, -2]),
        (4, &[1, 2, 3]),
        (5, &[1, -2, 3, -4]),
    ];
    let mut worst_exact = 0.0f64;
    for (strands, word) in corpus {
        let b = BraidWord::new(strands, word.to_vec()).unwrap();
        let est = dqc1_jones_estimate(&b, 8, 0).unwrap();
        let value = jones_trace_closure(&b).value;
        worst_exact = worst_exact.max((est.exact_jones - value).norm());
    }
    assert!(
        worst_exact <= 1e-10,
        "worst exact-path defect {worst_exact:e}"
    );

    let trefoil = BraidWord::new(2, vec![1, 1, 1]).unwrap();
    let mut worst_sigma = 0.0f64;
    for seed in 0..20u64 {
        let est = dqc1_jones_estimate(&trefoil, 100_000, seed).unwrap();
        let miss = (est.jones_estimate - est.exact_jones).norm();
        let sigmas = miss / est.jones_stderr;
        worst_sigma = worst_sigma.max(sigmas);
        assert!(
            miss <= 4.0 * est.jones_stderr,
            "seed {seed}: miss {miss:e} is {sigmas:.2} sigma"
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2006);
    let mut worst_form = 0.0f64;
    for qubits in 2..=4usize {
        let u = random_unitary(&mut rng, qubits);
        let circuit = trace_form_circuit(&u).unwrap();
        let d = u.nrows() / 2;
        let mut projected = 0.0;
        for i in 0..d {
            for j in 0..d {
                projected += u[(i, j)].norm_sqr();
            }
        }
        let via_trace = circuit.trace() / c64(4.0, 0.0);
        worst_form = worst_form.max((via_trace - c64(projected, 0.0)).norm());
    }
    assert!(
        worst_form <= 1e-10,
        "worst trace-form defect {worst_form:e}"
    );

    let mut worst_augment = 0.0f64;
    for (qubits, m) in [(2usize, 1usize), (3, 1), (3, 2), (4, 2)] {
        let u = random_unitary(&mut rng, qubits);
        let aug = clean_ancilla_augment(&u, m).unwrap();
        let expected = aug.block_trace * c64((1u64 << m) as f64, 0.0);
        worst_augment = worst_augment.max((aug.trace - expected).norm());
    }
    assert!(
        worst_augment <= 1e-10,
        "worst augmentation defect {worst_augment:e}"
    );
    println!(
        "criterion 06: exact {worst_exact:e}, worst miss {worst_sigma:.2} sigma, \
         trace form {worst_form:e}, augmentation {worst_augment:e}"
    );
}

#[test]
fn criterion_07_gadget_error_scales_linearly_in_the_perturbation() {
    let start = Instant::now();
    let grid = lambda_grid(1e-3, 10f64.powf(-1.5), 10, true).unwrap();
    for (name, spec) in [
        ("one three-local term", xyz()),
        ("two three-local terms", xyz_plus_xyy()),
        ("one four-local term", xyzz()),
    ] {
        let rows = error_ratio_scan(&spec, &grid).unwrap();
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.converged)
            .map(|r| (r.lambda, r.ratio.unwrap()))
            .collect();
        assert_eq!(
            points.len(),
            grid.len(),
            "{name}: every grid point converges"
        );
        let slope = log_log_slope(&points).unwrap();
        assert!(
            (0.8..=1.2).contains(&slope),
            "{name}: error-ratio slope {slope}"
        );
        println!("criterion 07: {name} slope {slope:.4}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}, budget 5 min");
}

fn brute_count(len: usize, total: usize) -> usize {
    if len == 0 {
        return usize::from(total == 0);
    }
    let mut count = 0usize;
    let mut tuple = vec![0usize; len];
    loop {
        let sum: usize = tuple.iter().sum();
        let mut ok = sum == total;
        if ok {
            let mut partial = 0usize;
            for (p, &l) in tuple.iter().enumerate().take(len - 1) {
                partial += l;
                if partial < p + 1 {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            count += 1;
        }
        let mut pos = 0;
        while pos < len {
            tuple[pos] += 1;
            if tuple[pos] <= total {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
        if pos == len {
            break;
        }
    }
    count
}

fn series_err(spec: &KLocalHamiltonian, order: usize, lambda: f64) -> f64 {
    let g = build_gadget(spec, lambda).unwrap();
    let sector = plus_sector(&g).unwrap();
    let series = bloch_series(&sector.h0, &sector.v, lambda, order).unwrap();
    let exact = hermitian_eig(&sector.matrix).unwrap().eigenvalues;
    let d = 1usize << spec.n();
    let a = series.a_total();
    let pushed = &a + &series.p0 * c64(1e3, 0.0) - eye(a.nrows()) * c64(1e3, 0.0);
    let approx = hermitian_eig(&pushed).unwrap().eigenvalues;
    let mut kept: Vec<f64> = approx[approx.len() - d..].to_vec();
    kept.sort_by(|x, y| x.total_cmp(y));
    (0..d)
        .map(|j| (kept[j] - exact[j]).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_08_series_terms_count_catalan_and_truncation_error_scales() {
    let catalan = [1usize, 2, 5, 14, 42];
    for m in 1..=5usize {
        let u_count = u_tuples(m).len();
        assert_eq!(u_count, catalan[m - 1], "wave-operator tuples at order {m}");
        assert_eq!(u_count, brute_count(m, m), "brute-force count at order {m}");
        let a_count = a_tuples(m).len();
        assert_eq!(
            a_count,
            brute_count(m - 1, m - 1),
            "effective-operator tuples at order {m}"
        );
    }

    for (hi, lo) in [(0.05, 0.025), (0.04, 0.02), (0.03, 0.015)] {
        let ratio = series_err(&xyz(), 3, hi) / series_err(&xyz(), 3, lo);
        assert!(
            ratio >= 2f64.powf(3.5),
            "three-local truncation shrink {ratio} at ({hi}, {lo})"
        );
        println!("criterion 08: k=3 pair ({hi}, {lo}) shrink {ratio:.2}");
    }
    for (hi, lo) in [(0.1, 0.05), (0.07, 0.035), (0.05, 0.025)] {
        let ratio = series_err(&xyzz(), 4, hi) / series_err(&xyzz(), 4, lo);
        assert!(
            ratio >= 2f64.powf(4.5),
            "four-local truncation shrink {ratio} at ({hi}, {lo})"
        );
        println!("criterion 08: k=4 pair ({hi}, {lo}) shrink {ratio:.2}");
    }
}

#[test]
fn criterion_09_codes_detect_encode_and_gap_while_three_qubits_cannot() {
    let four = four_qubit_code().unwrap();
    let report = check_detection(&four, 1).unwrap();
    assert_eq!(report.checked, 12);
    assert!(
        report.violations.is_empty(),
        "four-qubit weight-1 violations: {}",
        report.violations.len()
    );

    let five = five_qubit_code().unwrap();
    let report = check_detection(&five, 2).unwrap();
    assert_eq!(report.checked, 105);
    assert!(
        report.violations.is_empty(),
        "five-qubit weight-2 violations: {}",
        report.violations.len()
    );
    assert!(singleton_check(4, 1, 2) && singleton_check(5, 1, 3));

    let mut rng = ChaCha8Rng::seed_from_u64(2009);
    let mut worst_spectrum = 0.0f64;
    let mut smallest_margin = f64::INFINITY;
    for draw in 0..20 {
        let terms: Vec<KLocalTerm> = (0..3)
            .map(|_| {
                let c = rng.random_range(0.1..=1.0);
                let a0 = random_axis(&mut rng);
                let a1 = random_axis(&mut rng);
                term(c, &[(0, a0), (1, a1)])
            })
            .collect();
        let h = KLocalHamiltonian::new(2, 2, terms).unwrap();
        let encoded = encode_hamiltonian(&h, 10.0).unwrap();
        let spectrum_defect = encoded
            .code_spectrum
            .iter()
            .zip(&encoded.source_spectrum)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        worst_spectrum = worst_spectrum.max(spectrum_defect);
        assert!(
            spectrum_defect <= 1e-10,
            "draw {draw}: encoded spectrum defect {spectrum_defect:e}"
        );
        let gap = gap_check(&encoded).unwrap();
        smallest_margin = smallest_margin.min(gap.margin);
        assert!(gap.pass, "draw {draw}: gap margin {:e}", gap.margin);
    }

    let search = search_3qubit_codes().unwrap();
    assert_eq!(search.pairs_examined, 1890);
    assert!(
        search.successes.is_empty(),
        "unexpected three-qubit detecting pairs: {}",
        search.successes.len()
    );
    println!(
        "criterion 09: spectrum {worst_spectrum:e}, smallest margin {smallest_margin:e}, \
         search 0/{}",
        search.pairs_examined
    );
}

#[test]
fn criterion_10_evolution_distance_stays_under_the_inverse_time_bound() {
    let start = Instant::now();
    let times = [10.0, 100.0, 1000.0];
    for (dim, seed) in [(2usize, 2010u64), (3, 2011)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ramp in 0..20 {
            let schedule = AdiabaticSchedule::linear(
                random_hermitian(&mut rng, dim),
                random_hermitian(&mut rng, dim),
            )
            .unwrap();
            let reports = qwb_core::adiabatic::adiabatic_check(&schedule, &times, 100)
                .unwrap_or_else(|e| panic!("dim {dim} ramp {ramp}: {e}"));
            for report in &reports {
                assert!(
                    report.pass,
                    "dim {dim} ramp {ramp} T {}: distance {:e} vs bound {:e}",
                    report.total_time, report.distance, report.bound
                );
            }
            let b0 = reports[0].bound;
            for report in &reports[1..] {
                let scaled = report.bound * (report.total_time / reports[0].total_time);
                assert!(
                    (scaled - b0).abs() <= 1e-9 * b0,
                    "dim {dim} ramp {ramp}: bound {scaled} at T {} vs {b0}",
                    report.total_time
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}, budget 2 min");
    println!("criterion 10: 40 ramps x 3 times within bound, {elapsed:?}");
}
