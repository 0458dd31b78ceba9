//! Criterion benchmarks for the hot kernels: the braid trace evaluator,
//! the bracket state sum, the clean-qubit estimator, a gadget scan point,
//! and propagation of an interpolating ramp.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qwb_core::{adiabatic, bracket, dqc1, gadget, jones, parse_braid, BraidWord, Pauli};

fn trefoil() -> BraidWord {
    parse_braid("1 1 1", Some(2)).unwrap()
}

fn xyz_spec() -> gadget::KLocalHamiltonian {
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let factors = axes
        .iter()
        .enumerate()
        .map(|(qubit, &axis)| gadget::PauliFactor { qubit, axis })
        .collect();
    let term = gadget::KLocalTerm { c: 1.0, factors };
    gadget::KLocalHamiltonian::new(3, 3, vec![term]).unwrap()
}

fn trace_closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("jones_trace_closure");
    let words = [
        ("trefoil", trefoil()),
        (
            "four_strand_len12",
            parse_braid("1 -2 3 1 -2 3 1 -2 3 1 -2 3", Some(4)).unwrap(),
        ),
    ];
    for (label, word) in &words {
        group.bench_with_input(BenchmarkId::from_parameter(*label), word, |b, w| {
            b.iter(|| jones::jones_trace_closure(black_box(w)))
        });
    }
    group.finish();
}

fn state_sum(c: &mut Criterion) {
    let word = parse_braid("1 -2 1 -2 1 -2 1 -2 1 -2", Some(3)).unwrap();
    c.bench_function("kauffman_bracket/10_crossings", |b| {
        b.iter(|| bracket::kauffman_bracket(black_box(&word)).unwrap())
    });
}

fn clean_qubit_estimator(c: &mut Criterion) {
    let word = trefoil();
    c.bench_function("dqc1_jones_estimate/trefoil_1000_shots", |b| {
        b.iter(|| dqc1::dqc1_jones_estimate(black_box(&word), 1_000, 7).unwrap())
    });
}

fn gadget_scan_point(c: &mut Criterion) {
    let spec = xyz_spec();
    c.bench_function("error_ratio_scan/xyz_single_lambda", |b| {
        b.iter(|| gadget::error_ratio_scan(black_box(&spec), &[0.01]).unwrap())
    });
}

fn ramp_evolution(c: &mut Criterion) {
    let schedule =
        adiabatic::AdiabaticSchedule::linear(Pauli::X.matrix(), Pauli::Z.matrix()).unwrap();
    c.bench_function("adiabatic_evolve/qubit_ramp_100_steps", |b| {
        b.iter(|| adiabatic::evolve(black_box(&schedule), 10.0, 100).unwrap())
    });
}

criterion_group!(
    kernels,
    trace_closure,
    state_sum,
    clean_qubit_estimator,
    gadget_scan_point,
    ramp_evolution
);
criterion_main!(kernels);
