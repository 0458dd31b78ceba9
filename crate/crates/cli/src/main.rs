//! Command-line front end for the workbench: Jones evaluation with an
//! independent oracle, the one-clean-qubit estimator, gadget error scans,
//! stabilizer-code checks, adiabatic bound checks, and a self-test battery.
//!
//! Results go to stdout as JSON (CSV for `gadget-scan`); diagnostics go to
//! stderr. Exit codes: 0 success, 1 bad input or parse failure, 2 resource
//! limit, 3 verification failure.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qwb_core::{adiabatic, bracket, dqc1, fib, gadget, jones, stab, tol};
use qwb_core::{linalg, parse_braid, BraidWord, CMatrix, Error, Pauli, PauliString, Result};

#[derive(Parser)]
#[command(
    name = "qwb",
    version,
    about = "Quantum workbench: braids, gadgets, codes, ramps"
)]
struct Cli {
    /// Seed for every stochastic step; identical seeds reproduce outputs
    /// byte for byte.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Worker threads for scans over independent grid points.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Jones polynomial of a braid closure at the fifth root
    /// of unity.
    Jones {
        /// Braid word, e.g. "1 -2 1 -2"; letter i is the i-th elementary
        /// crossing, a negative letter its inverse.
        #[arg(long)]
        braid: String,
        /// Strand count (default: smallest count the word fits on).
        #[arg(long)]
        strands: Option<usize>,
        /// Cross-check against the state-sum oracle (at most 24 crossings).
        #[arg(long)]
        oracle: bool,
    },
    /// Estimate the same Jones value with the one-clean-qubit trace
    /// estimator and report the exact value next to it.
    Dqc1Jones {
        /// Braid word, as for `jones`.
        #[arg(long)]
        braid: String,
        /// Strand count (default: smallest count the word fits on).
        #[arg(long)]
        strands: Option<usize>,
        /// Hadamard-test shots per quadrature.
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
    },
    /// Scan the gadget's exact-vs-predicted error ratio over a grid of
    /// perturbation strengths; writes CSV.
    GadgetScan {
        /// Path to a Hamiltonian JSON file:
        /// `{"n":3,"k":3,"terms":[{"c":1.0,"factors":[{"qubit":0,"axis":[1,0,0]},...]}]}`.
        #[arg(long)]
        spec: PathBuf,
        /// Smallest perturbation strength.
        #[arg(long)]
        lambda_min: f64,
        /// Largest perturbation strength.
        #[arg(long)]
        lambda_max: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 10)]
        points: usize,
        /// Space the grid logarithmically instead of linearly.
        #[arg(long)]
        log: bool,
    },
    /// Check a stabilizer code: error detection, the quantum Singleton
    /// bound, and optionally a penalty encoding of a supplied Hamiltonian.
    CodeCheck {
        /// Which code to check.
        #[arg(long, value_enum)]
        code: CodeName,
        /// Penalty strength for the encoded Hamiltonian.
        #[arg(long, default_value_t = 10.0)]
        penalty: f64,
        /// Optional 1- or 2-local Hamiltonian JSON to encode (four-qubit
        /// code only), same format as for gadget-scan.
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
        /// Highest error weight to sweep (default: code distance - 1).
        #[arg(long)]
        weight: Option<usize>,
    },
    /// Evolve a two-Hamiltonian ramp and compare the final-state distance
    /// against the adiabatic theorem's explicit bound.
    AdiabaticCheck {
        /// Path to a schedule JSON file: `{"dim":2,"H0":{...},"H1":{...}}`
        /// with each matrix as `{"rows":r,"cols":c,"entries":[[re,im],...]}`.
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated total evolution times, e.g. --T 10,100,1000.
        #[arg(long = "T", value_delimiter = ',', required = true)]
        times: Vec<f64>,
        /// Initial integrator step count; doubled until the state settles.
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Run a quick battery of internal consistency checks across every
    /// module and report per-suite results.
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodeName {
    /// The distance-two code on four qubits.
    Four,
    /// The distance-three code on five qubits.
    Five,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Contract(_)
        | Error::Parse { .. }
        | Error::SeriesDivergence { .. }
        | Error::DegenerateCut { .. } => 1,
        Error::Resource(_) => 2,
        Error::Verification(_) | Error::EigenConvergence { .. } => 3,
    }
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed;
    let jobs = cli.jobs;
    match cli.command {
        Command::Jones {
            braid,
            strands,
            oracle,
        } => run_jones(&braid, strands, oracle, seed),
        Command::Dqc1Jones {
            braid,
            strands,
            shots,
        } => run_dqc1(&braid, strands, shots, seed),
        Command::GadgetScan {
            spec,
            lambda_min,
            lambda_max,
            points,
            log,
        } => run_gadget_scan(&spec, lambda_min, lambda_max, points, log, jobs, seed),
        Command::CodeCheck {
            code,
            penalty,
            hamiltonian,
            weight,
        } => run_code_check(code, penalty, hamiltonian.as_deref(), weight, seed),
        Command::AdiabaticCheck { spec, times, steps } => {
            run_adiabatic_check(&spec, &times, steps, jobs, seed)
        }
        Command::Selftest => run_selftest(seed),
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Contract(format!("reading {}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Contract(format!("serializing output: {e}")))?;
    println!("{text}");
    Ok(())
}

/// Splits `items` into at most `jobs` contiguous chunks, maps each chunk on
/// its own thread, and concatenates the results in the original order.
fn parallel_flat<T, R, F>(items: &[T], jobs: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&[T]) -> Result<Vec<R>> + Sync,
{
    if jobs == 0 {
        return Err(Error::Contract("jobs must be at least 1".into()));
    }
    let workers = jobs.min(items.len()).max(1);
    if workers == 1 {
        return f(items);
    }
    let chunk_len = items.len().div_ceil(workers);
    let f_ref = &f;
    let mut gathered = Vec::with_capacity(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk_len)
            .map(|part| scope.spawn(move || f_ref(part)))
            .collect();
        for handle in handles {
            gathered.push(handle.join().expect("scan worker panicked"));
        }
    });
    let mut out = Vec::with_capacity(items.len());
    for piece in gathered {
        out.extend(piece?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct JonesOutput {
    braid: String,
    strands: usize,
    crossings: usize,
    writhe: i64,
    seed: u64,
    value_re: f64,
    value_im: f64,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
}

fn run_jones(braid: &str, strands: Option<usize>, oracle: bool, seed: u64) -> Result<()> {
    let b = parse_braid(braid, strands)?;
    let value = jones::jones_trace_closure(&b);
    let mut out = JonesOutput {
        braid: braid.trim().to_string(),
        strands: b.strands(),
        crossings: b.len(),
        writhe: value.writhe,
        seed,
        value_re: value.value.re,
        value_im: value.value.im,
        tolerance: tol::ORACLE_MATCH,
        oracle_re: None,
        oracle_im: None,
        oracle_defect: None,
        oracle_agrees: None,
    };
    let mut defect = None;
    if oracle {
        let state_sum = bracket::kauffman_bracket(&b)?;
        let d = (state_sum.jones - value.value).norm();
        out.oracle_re = Some(state_sum.jones.re);
        out.oracle_im = Some(state_sum.jones.im);
        out.oracle_defect = Some(d);
        out.oracle_agrees = Some(d <= tol::ORACLE_MATCH);
        defect = Some(d);
    }
    emit(&out)?;
    if let Some(d) = defect {
        if d > tol::ORACLE_MATCH {
            return Err(Error::Verification(format!(
                "oracle disagrees with the trace evaluator: defect {d:e} exceeds {:e}",
                tol::ORACLE_MATCH
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Dqc1Output {
    estimate_re: f64,
    estimate_im: f64,
    stderr: f64,
    exact_re: f64,
    exact_im: f64,
    shots: u64,
    seed: u64,
    b: usize,
    strands: usize,
    crossings: usize,
}

fn run_dqc1(braid: &str, strands: Option<usize>, shots: u64, seed: u64) -> Result<()> {
    let b = parse_braid(braid, strands)?;
    let est = dqc1::dqc1_jones_estimate(&b, shots, seed)?;
    emit(&Dqc1Output {
        estimate_re: est.jones_estimate.re,
        estimate_im: est.jones_estimate.im,
        stderr: est.jones_stderr,
        exact_re: est.exact_jones.re,
        exact_im: est.exact_jones.im,
        shots: est.shots,
        seed: est.seed,
        b: est.b,
        strands: est.strands,
        crossings: est.crossings,
    })
}

fn run_gadget_scan(
    spec: &Path,
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
    log: bool,
    jobs: usize,
    seed: u64,
) -> Result<()> {
    let h = gadget::KLocalHamiltonian::from_json(&read_file(spec)?)?;
    let grid = gadget::lambda_grid(lambda_min, lambda_max, points, log)?;
    let rows = parallel_flat(&grid, jobs, |chunk| gadget::error_ratio_scan(&h, chunk))?;
    let mut csv = String::new();
    csv.push_str(&format!(
        "# ratio = |H_ideal - H_eff| / |H_ideal| (operator norms); delta = trace shift; \
         converged = perturbation within a quarter of the gadget gap; \
         eigenspace clustering tolerance {:e}; seed {seed}\n",
        tol::EIGENSPACE_CLUSTER
    ));
    csv.push_str("lambda,ratio,delta,converged\n");
    for row in &rows {
        let ratio = row.ratio.map(|x| x.to_string()).unwrap_or_default();
        let delta = row.delta.map(|x| x.to_string()).unwrap_or_default();
        csv.push_str(&format!(
            "{},{ratio},{delta},{}\n",
            row.lambda, row.converged
        ));
    }
    print!("{csv}");
    Ok(())
}

#[derive(Serialize)]
struct ViolationJson {
    error: String,
    weight: usize,
    defect: f64,
}

#[derive(Serialize)]
struct DetectionJson {
    max_weight: usize,
    checked: usize,
    tolerance: f64,
    pass: bool,
    violations: Vec<ViolationJson>,
}

#[derive(Serialize)]
struct SingletonJson {
    n: usize,
    k: usize,
    d: usize,
    holds: bool,
}

#[derive(Serialize)]
struct GapJson {
    penalty: f64,
    ground: f64,
    outside_min: f64,
    gap: f64,
    margin: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct EncodingJson {
    registers: usize,
    physical_qubits: usize,
    penalty: f64,
    spectrum_tolerance: f64,
    code_spectrum: Vec<f64>,
    source_spectrum: Vec<f64>,
    gap: GapJson,
}

#[derive(Serialize)]
struct CodeCheckOutput {
    code: String,
    seed: u64,
    n: usize,
    distance: usize,
    generators: Vec<String>,
    logical_x: String,
    logical_y: String,
    logical_z: String,
    detection: DetectionJson,
    singleton: SingletonJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    encoding: Option<EncodingJson>,
}

fn pauli_weight(p: &PauliString) -> usize {
    p.factors().iter().filter(|&&f| f != Pauli::I).count()
}

fn run_code_check(
    name: CodeName,
    penalty: f64,
    hamiltonian: Option<&Path>,
    weight: Option<usize>,
    seed: u64,
) -> Result<()> {
    let code = match name {
        CodeName::Four => stab::four_qubit_code()?,
        CodeName::Five => stab::five_qubit_code()?,
    };
    if name == CodeName::Five && hamiltonian.is_some() {
        return Err(Error::Contract(
            "the penalty encoding uses the four-qubit code; drop --hamiltonian or pass --code four"
                .into(),
        ));
    }
    let max_weight = weight.unwrap_or(code.distance - 1);
    let detection = stab::check_detection(&code, max_weight)?;
    let detection_pass = detection
        .violations
        .iter()
        .all(|v| pauli_weight(&v.error) >= code.distance);

    let encoding = match hamiltonian {
        Some(path) => {
            let h = gadget::KLocalHamiltonian::from_json(&read_file(path)?)?;
            let encoded = stab::encode_hamiltonian(&h, penalty)?;
            let gap = stab::gap_check(&encoded)?;
            Some(EncodingJson {
                registers: encoded.registers,
                physical_qubits: encoded.registers * encoded.code.n,
                penalty: encoded.penalty,
                spectrum_tolerance: tol::SPECTRUM_MATCH,
                code_spectrum: encoded.code_spectrum.clone(),
                source_spectrum: encoded.source_spectrum.clone(),
                gap: GapJson {
                    penalty: gap.penalty,
                    ground: gap.ground,
                    outside_min: gap.outside_min,
                    gap: gap.gap,
                    margin: gap.margin,
                    tolerance: tol::GAP_MARGIN,
                    pass: gap.pass,
                },
            })
        }
        None => None,
    };

    let out = CodeCheckOutput {
        code: format!("[[{},1,{}]]", code.n, code.distance),
        seed,
        n: code.n,
        distance: code.distance,
        generators: code.generators.iter().map(stab::pauli_letters).collect(),
        logical_x: stab::pauli_letters(&code.logical_x),
        logical_y: stab::pauli_letters(&code.logical_y),
        logical_z: stab::pauli_letters(&code.logical_z),
        detection: DetectionJson {
            max_weight: detection.max_weight,
            checked: detection.checked,
            tolerance: tol::DETECTION,
            pass: detection_pass,
            violations: detection
                .violations
                .iter()
                .map(|v| ViolationJson {
                    error: stab::pauli_letters(&v.error),
                    weight: pauli_weight(&v.error),
                    defect: v.defect,
                })
                .collect(),
        },
        singleton: SingletonJson {
            n: code.n,
            k: 1,
            d: code.distance,
            holds: stab::singleton_check(code.n, 1, code.distance),
        },
        encoding,
    };
    let gap_pass = out.encoding.as_ref().map(|e| e.gap.pass);
    emit(&out)?;
    if !detection_pass {
        return Err(Error::Verification(format!(
            "an error of weight below {} slipped past detection",
            code.distance
        )));
    }
    if gap_pass == Some(false) {
        return Err(Error::Verification(
            "encoded spectral gap fell short of the penalty strength".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct AdiabaticOutput {
    seed: u64,
    steps: usize,
    distance_slack: f64,
    reports: Vec<adiabatic::AdiabaticReport>,
}

fn run_adiabatic_check(
    spec: &Path,
    times: &[f64],
    steps: usize,
    jobs: usize,
    seed: u64,
) -> Result<()> {
    let schedule = adiabatic::schedule_from_json(&read_file(spec)?)?;
    let reports = parallel_flat(times, jobs, |chunk| {
        adiabatic::adiabatic_check(&schedule, chunk, steps)
    })?;
    let failed: Vec<f64> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.total_time)
        .collect();
    emit(&AdiabaticOutput {
        seed,
        steps,
        distance_slack: tol::DISTANCE_SLACK,
        reports,
    })?;
    if !failed.is_empty() {
        return Err(Error::Verification(format!(
            "final-state distance exceeded the bound at T = {failed:?}"
        )));
    }
    Ok(())
}

type CheckResult = std::result::Result<(), String>;
type Check = (&'static str, CheckResult);

#[derive(Serialize)]
struct SuiteJson {
    name: String,
    passed: usize,
    failed: usize,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct SelftestOutput {
    seed: u64,
    suites: Vec<SuiteJson>,
    passed: usize,
    failed: usize,
    pass: bool,
}

fn suite(name: &str, checks: Vec<Check>) -> SuiteJson {
    let mut passed = 0;
    let mut failures = Vec::new();
    for (check_name, result) in checks {
        match result {
            Ok(()) => passed += 1,
            Err(detail) => failures.push(format!("{check_name}: {detail}")),
        }
    }
    SuiteJson {
        name: name.to_string(),
        passed,
        failed: failures.len(),
        failures,
    }
}

fn err_string(e: Error) -> String {
    e.to_string()
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn run_selftest(seed: u64) -> Result<()> {
    let suites = vec![
        suite(
            "fibonacci-representation",
            vec![
                ("temperley-lieb relations", tl_relations()),
                ("density spot rotations", density_rotations()),
                ("zeckendorf round-trip", zeckendorf_round_trip()),
            ],
        ),
        suite(
            "jones-evaluator",
            vec![
                ("convention pin", convention_pin()),
                (
                    "state-sum agreement on two strands",
                    bracket_agreement(2, 5),
                ),
                (
                    "state-sum agreement on three strands",
                    bracket_agreement(3, 3),
                ),
            ],
        ),
        suite(
            "markov-trace",
            vec![
                ("identity normalization", identity_normalization()),
                ("markov moves on seeded words", markov_moves(seed)),
            ],
        ),
        suite(
            "one-clean-qubit",
            vec![
                (
                    "exact augmented trace matches evaluator",
                    dqc1_exact_agreement(),
                ),
                ("sampled estimate within five sigma", dqc1_sampled(seed)),
                ("trace-form and ancilla identities", dqc1_identities(seed)),
            ],
        ),
        suite(
            "perturbative-gadget",
            vec![
                ("resolvent tuple counts", tuple_counts()),
                ("leading-term coefficient", leading_term()),
            ],
        ),
        suite(
            "stabilizer-codes",
            vec![
                (
                    "four-qubit code detects weight one",
                    detection_clean(CodeName::Four),
                ),
                (
                    "five-qubit code detects weight two",
                    detection_clean(CodeName::Five),
                ),
                ("three-qubit search finds nothing", three_qubit_search()),
                ("singleton bound", singleton_cases()),
                (
                    "penalty encoding of a single-qubit term",
                    encoding_round_trip(),
                ),
            ],
        ),
        suite(
            "adiabatic-theorem",
            vec![
                ("stationary schedule", stationary_schedule()),
                ("bound scales inversely with time", bound_halving()),
                ("crossing ramp within bound", crossing_ramp()),
            ],
        ),
    ];
    let passed = suites.iter().map(|s| s.passed).sum();
    let failed = suites.iter().map(|s| s.failed).sum::<usize>();
    emit(&SelftestOutput {
        seed,
        suites,
        passed,
        failed,
        pass: failed == 0,
    })?;
    if failed > 0 {
        return Err(Error::Verification(format!(
            "{failed} self-test checks failed"
        )));
    }
    Ok(())
}

fn tl_relations() -> CheckResult {
    for n in 2..=5 {
        let img = jones::tl_image(n).map_err(err_string)?;
        let defect = jones::tl_relation_check(&img).max_defect();
        ensure(defect <= tol::TL_RELATION, || {
            format!("n = {n}: defect {defect:e}")
        })?;
    }
    Ok(())
}

fn density_rotations() -> CheckResult {
    let report = fib::density_spot_check();
    let want_angle = 7.0 * PI / 5.0;
    ensure(
        (report.angle_a - want_angle).abs() <= 1e-9 && (report.angle_b - want_angle).abs() <= 1e-9,
        || format!("angles {}, {}", report.angle_a, report.angle_b),
    )?;
    let want_sep = (2.0 - 5.0f64.sqrt()).acos();
    ensure((report.separation - want_sep).abs() <= 1e-9, || {
        format!("separation {}", report.separation)
    })?;
    ensure(report.power_distances.iter().all(|&d| d > 0.1), || {
        format!("power distances {:?}", report.power_distances)
    })
}

fn zeckendorf_round_trip() -> CheckResult {
    for m in 1..=12 {
        let codec = fib::ZeckendorfCodec::new(m).map_err(err_string)?;
        for z in 0..codec.count() {
            let s = codec.decode(z).map_err(err_string)?;
            let back = codec.index(&s).map_err(err_string)?;
            ensure(back == z, || format!("m = {m}: {z} -> {back}"))?;
        }
    }
    Ok(())
}

fn convention_pin() -> CheckResult {
    let pin = bracket::pin_conventions().map_err(err_string)?;
    ensure(
        (pin.kink_value - Complex64::new(1.0, 0.0)).norm() <= tol::ORACLE_MATCH,
        || format!("kink value {}", pin.kink_value),
    )?;
    ensure(pin.trefoil_defect <= tol::ORACLE_MATCH, || {
        format!("trefoil defect {:e}", pin.trefoil_defect)
    })
}

fn bracket_agreement(n: usize, max_len: usize) -> CheckResult {
    let alphabet: Vec<i32> = (1..n as i32).flat_map(|i| [i, -i]).collect();
    for len in 1..=max_len {
        let mut idx = vec![0usize; len];
        loop {
            let letters: Vec<i32> = idx.iter().map(|&i| alphabet[i]).collect();
            let b = BraidWord::new(n, letters).map_err(err_string)?;
            let trace_value = jones::jones_trace_closure(&b).value;
            let state_sum = bracket::kauffman_bracket(&b).map_err(err_string)?;
            let defect = (trace_value - state_sum.jones).norm();
            ensure(defect <= tol::ORACLE_MATCH, || {
                format!("n = {n}, word {:?}: defect {defect:e}", b.letters())
            })?;
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
    Ok(())
}

fn identity_normalization() -> CheckResult {
    for n in 2..=8 {
        let b = BraidWord::new(n, vec![]).map_err(err_string)?;
        let trace = jones::weighted_trace(&b).value;
        ensure(
            (trace - Complex64::new(1.0, 0.0)).norm() <= tol::TRACE_IDENTITY,
            || format!("n = {n}: identity trace {trace}"),
        )?;
    }
    Ok(())
}

fn random_word(
    rng: &mut ChaCha8Rng,
    n: usize,
    len: usize,
) -> std::result::Result<BraidWord, String> {
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let mag = rng.random_range(1..n as i32);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    BraidWord::new(n, letters).map_err(err_string)
}

fn markov_moves(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..5u64 {
        let n = rng.random_range(2..=5usize);
        let len = rng.random_range(1..=6usize);
        let b = random_word(&mut rng, n, len)?;
        let report =
            jones::markov_move_check(&b, 4, seed.wrapping_add(trial)).map_err(err_string)?;
        let worst = report
            .conjugation_defect
            .max(report.stabilization_positive_defect)
            .max(report.stabilization_negative_defect);
        ensure(worst <= tol::MARKOV, || {
            format!("word {:?} on {n} strands: defect {worst:e}", b.letters())
        })?;
    }
    Ok(())
}

fn dqc1_exact_agreement() -> CheckResult {
    let words: [(usize, &[i32]); 3] = [(2, &[1, 1, 1]), (3, &[1, -2, 1, -2]), (4, &[1, 2, 3])];
    for (n, word) in words {
        let b = BraidWord::new(n, word.to_vec()).map_err(err_string)?;
        let est = dqc1::dqc1_jones_estimate(&b, 16, 1).map_err(err_string)?;
        let exact = jones::jones_trace_closure(&b).value;
        let defect = (est.exact_jones - exact).norm();
        ensure(defect <= tol::DQC1_EXACT, || {
            format!("word {word:?} on {n} strands: defect {defect:e}")
        })?;
    }
    Ok(())
}

fn dqc1_sampled(seed: u64) -> CheckResult {
    let b = BraidWord::new(2, vec![1, 1, 1]).map_err(err_string)?;
    let est = dqc1::dqc1_jones_estimate(&b, 20_000, seed).map_err(err_string)?;
    let miss = (est.jones_estimate - est.exact_jones).norm();
    ensure(miss <= 5.0 * est.jones_stderr, || {
        format!("miss {miss:e} vs stderr {:e}", est.jones_stderr)
    })
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let a = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7))
    });
    (&a + &a.adjoint()) * Complex64::new(0.5, 0.0)
}

fn dqc1_identities(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x00c1_ea0a);
    let h = random_hermitian(&mut rng, 4);
    let u = linalg::matexp(&h, Complex64::i()).map_err(err_string)?;
    let circuit = dqc1::trace_form_circuit(&u).map_err(err_string)?;
    let d = u.nrows() / 2;
    let mut projected = 0.0;
    for i in 0..d {
        for j in 0..d {
            projected += u[(i, j)].norm_sqr();
        }
    }
    let via_trace = circuit.trace() / Complex64::new(4.0, 0.0);
    ensure(
        (via_trace - Complex64::new(projected, 0.0)).norm() <= tol::DQC1_EMBED,
        || format!("trace-form defect {:e}", (via_trace.re - projected).abs()),
    )?;
    let aug = dqc1::clean_ancilla_augment(&u, 1).map_err(err_string)?;
    let expected = aug.block_trace * Complex64::new(2.0, 0.0);
    ensure((aug.trace - expected).norm() <= tol::DQC1_EXACT, || {
        format!("augmented trace {} vs {expected}", aug.trace)
    })
}

fn tuple_counts() -> CheckResult {
    let catalan = [1usize, 2, 5, 14, 42];
    for m in 1..=5usize {
        let u_count = gadget::u_tuples(m).len();
        ensure(u_count == catalan[m - 1], || {
            format!("wave-operator tuples at order {m}: {u_count}")
        })?;
        let want_a = if m == 1 { 1 } else { catalan[m - 2] };
        let a_count = gadget::a_tuples(m).len();
        ensure(a_count == want_a, || {
            format!("effective-operator tuples at order {m}: {a_count}")
        })?;
    }
    Ok(())
}

fn xyz_spec() -> std::result::Result<gadget::KLocalHamiltonian, String> {
    let term = gadget::KLocalTerm {
        c: 1.0,
        factors: vec![
            gadget::PauliFactor {
                qubit: 0,
                axis: [1.0, 0.0, 0.0],
            },
            gadget::PauliFactor {
                qubit: 1,
                axis: [0.0, 1.0, 0.0],
            },
            gadget::PauliFactor {
                qubit: 2,
                axis: [0.0, 0.0, 1.0],
            },
        ],
    };
    gadget::KLocalHamiltonian::new(3, 3, vec![term]).map_err(err_string)
}

fn leading_term() -> CheckResult {
    let g = gadget::build_gadget(&xyz_spec()?, 0.01).map_err(err_string)?;
    let report = gadget::leading_term_check(&g).map_err(err_string)?;
    let rel = (report.coefficient_extracted / report.coefficient_predicted - 1.0).abs();
    ensure(rel <= 1e-9, || {
        format!(
            "extracted {} vs predicted {}",
            report.coefficient_extracted, report.coefficient_predicted
        )
    })?;
    ensure(report.identity_defect <= 1e-12, || {
        format!("identity defect {:e}", report.identity_defect)
    })
}

fn detection_clean(name: CodeName) -> CheckResult {
    let (code, expected_checked) = match name {
        CodeName::Four => (stab::four_qubit_code().map_err(err_string)?, 12),
        CodeName::Five => (stab::five_qubit_code().map_err(err_string)?, 105),
    };
    let report = stab::check_detection(&code, code.distance - 1).map_err(err_string)?;
    ensure(report.checked == expected_checked, || {
        format!(
            "checked {} errors, expected {expected_checked}",
            report.checked
        )
    })?;
    ensure(report.violations.is_empty(), || {
        format!("{} undetected errors", report.violations.len())
    })
}

fn three_qubit_search() -> CheckResult {
    let report = stab::search_3qubit_codes().map_err(err_string)?;
    ensure(report.pairs_examined == 1890, || {
        format!("examined {} pairs", report.pairs_examined)
    })?;
    ensure(report.successes.is_empty(), || {
        format!("{} unexpected successes", report.successes.len())
    })
}

fn singleton_cases() -> CheckResult {
    ensure(
        stab::singleton_check(5, 1, 3)
            && stab::singleton_check(4, 1, 2)
            && !stab::singleton_check(3, 1, 3),
        || "singleton bound misclassified a known case".to_string(),
    )
}

fn encoding_round_trip() -> CheckResult {
    let z_term = gadget::KLocalTerm {
        c: 1.0,
        factors: vec![gadget::PauliFactor {
            qubit: 0,
            axis: [0.0, 0.0, 1.0],
        }],
    };
    let h = gadget::KLocalHamiltonian::new(1, 1, vec![z_term]).map_err(err_string)?;
    let encoded = stab::encode_hamiltonian(&h, 10.0).map_err(err_string)?;
    let gap = stab::gap_check(&encoded).map_err(err_string)?;
    ensure(gap.pass, || format!("gap margin {:e}", gap.margin))?;
    let spectrum_defect = encoded
        .code_spectrum
        .iter()
        .zip(&encoded.source_spectrum)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    ensure(spectrum_defect <= tol::SPECTRUM_MATCH, || {
        format!("spectrum defect {spectrum_defect:e}")
    })
}

fn pauli_x_matrix() -> CMatrix {
    Pauli::X.matrix()
}

fn pauli_z_matrix() -> CMatrix {
    Pauli::Z.matrix()
}

fn stationary_schedule() -> CheckResult {
    let z = pauli_z_matrix();
    let schedule = adiabatic::AdiabaticSchedule::linear(z.clone(), z).map_err(err_string)?;
    let reports = adiabatic::adiabatic_check(&schedule, &[5.0], 100).map_err(err_string)?;
    let report = &reports[0];
    ensure(report.bound == 0.0, || format!("bound {:e}", report.bound))?;
    ensure(report.distance <= 1e-8 && report.pass, || {
        format!("distance {:e}", report.distance)
    })
}

fn bound_halving() -> CheckResult {
    let schedule = adiabatic::AdiabaticSchedule::linear(pauli_x_matrix(), pauli_z_matrix())
        .map_err(err_string)?;
    let b1 = adiabatic::goldstone_bound(&schedule, 20.0).map_err(err_string)?;
    let b2 = adiabatic::goldstone_bound(&schedule, 40.0).map_err(err_string)?;
    let rel = (b2 * 2.0 - b1).abs() / b1;
    ensure(rel <= 1e-9, || {
        format!("bound(20) {b1} vs 2*bound(40) {}", b2 * 2.0)
    })
}

fn crossing_ramp() -> CheckResult {
    let schedule = adiabatic::AdiabaticSchedule::linear(pauli_x_matrix(), pauli_z_matrix())
        .map_err(err_string)?;
    let reports = adiabatic::adiabatic_check(&schedule, &[100.0], 100).map_err(err_string)?;
    let report = &reports[0];
    ensure(report.pass && report.converged, || {
        format!("distance {:e} vs bound {:e}", report.distance, report.bound)
    })
}
