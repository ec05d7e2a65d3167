use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qldpc_bp::analysis::{degree_distribution, design_rate, four_loop_census, DegreePolynomial};
use qldpc_bp::bp::{self, ChannelPrior, DecodeConfig, Dist};
use qldpc_bp::constructions::{builtin, generate_bicycle, matrix_to_sparse_text, BicycleSpec};
use qldpc_bp::heuristics::decode_with_heuristics_observed;
use qldpc_bp::oracle::exact_marginals;
use qldpc_bp::sim::{
    self, classify, run_simulation, sample_error, stats_to_csv, stats_to_json, SimConfig,
};
use qldpc_bp::{Pauli, PauliOperator, StabilizerCode, Syndrome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{
    BicycleOptions, CodeSource, Command, DecodeArgs, DecoderOptions, GenerateArgs, InspectArgs,
    OracleArgs, SimulateArgs,
};
use crate::CliError;

type CmdResult = Result<(), CliError>;

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Generate(a) => generate(a),
        Command::Inspect(a) => inspect(a),
        Command::Decode(a) => decode(a),
        Command::Simulate(a) => simulate(a),
        Command::OracleCheck(a) => oracle_check(a),
    }
}

/// `#`-prefixed provenance lines: tool version, subcommand and a JSON config echo.
fn header(command: &str, config: &Value) -> String {
    format!(
        "# {} {}\n# command: {command}\n# config: {config}\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    )
}

fn write_output(path: Option<&Path>, body: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| CliError::Data(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn load_code(
    source: &CodeSource,
    opts: &BicycleOptions,
) -> Result<(StabilizerCode, Value), CliError> {
    if let Some(path) = &source.code {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let code = StabilizerCode::from_text(&text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        Ok((code, json!({ "file": path.display().to_string() })))
    } else if let Some(name) = &source.builtin {
        Ok((builtin(name)?, json!({ "builtin": name })))
    } else if let Some(p) = source.bicycle {
        let spec = BicycleSpec {
            deletion: opts.deletion,
            ..BicycleSpec::new(p.n, p.m, p.w, opts.code_seed)
        };
        let code = generate_bicycle(&spec)?.code;
        Ok((code, json!({ "bicycle": spec })))
    } else {
        Err(CliError::Usage(
            "one of --code, --builtin or --bicycle is required".into(),
        ))
    }
}

fn decode_config(opts: &DecoderOptions, seed: u64) -> Result<DecodeConfig, CliError> {
    let config = DecodeConfig {
        max_iterations: opts.max_iter,
        t_pert: opts.t_pert,
        delta: opts.delta,
        heuristic: opts.heuristic,
        seed,
    };
    config.validate()?;
    Ok(config)
}

fn prior_for(code: &StabilizerCode, epsilon: f64) -> Result<ChannelPrior, CliError> {
    ChannelPrior::depolarizing(code.num_qubits(), epsilon)
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn generate(a: GenerateArgs) -> CmdResult {
    let spec = BicycleSpec {
        deletion: a.deletion,
        ..BicycleSpec::new(a.bicycle.n, a.bicycle.m, a.bicycle.w, a.seed)
    };
    spec.validate()?;
    let bicycle = generate_bicycle(&spec)?;
    let head = header(
        "generate",
        &json!({ "spec": spec, "attempts": bicycle.attempts }),
    );
    write_output(Some(&a.out), &format!("{head}{}", bicycle.code.to_text()))?;
    let mut h_path = a.out.clone().into_os_string();
    h_path.push(".h");
    let h_path = std::path::PathBuf::from(h_path);
    write_output(
        Some(&h_path),
        &format!("{head}{}", matrix_to_sparse_text(&bicycle.h)),
    )?;
    let code = &bicycle.code;
    let mean_qubit_degree = (0..code.num_qubits())
        .map(|q| code.qubit_degree(q))
        .sum::<usize>() as f64
        / code.num_qubits() as f64;
    println!(
        "wrote {} and {}: n = {}, m = {}, k = {}, rate = {}, mean qubit degree = {mean_qubit_degree}",
        a.out.display(),
        h_path.display(),
        code.num_qubits(),
        code.num_checks(),
        code.num_logical(),
        code.rate()
    );
    Ok(())
}

fn polynomial(p: &DegreePolynomial) -> String {
    let terms: Vec<String> = p
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0.0)
        .map(|(i, c)| format!("{c:.6} x^{}", i - 1))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn inspect(a: InspectArgs) -> CmdResult {
    let (code, source) = load_code(&a.source, &a.bicycle)?;
    let mut out = header("inspect", &json!({ "source": source }));
    let dist = degree_distribution(&code);
    let loops = four_loop_census(&code);
    writeln!(out, "n = {}", code.num_qubits()).unwrap();
    writeln!(out, "m = {}", code.num_checks()).unwrap();
    writeln!(out, "k = {}", code.num_logical()).unwrap();
    writeln!(out, "rate = {}", code.rate()).unwrap();
    writeln!(out, "checks commute: yes").unwrap();
    writeln!(out, "fingerprint = {}", code.fingerprint()).unwrap();
    writeln!(out, "lambda(x) = {}", polynomial(&dist.lambda)).unwrap();
    writeln!(out, "rho(x) = {}", polynomial(&dist.rho)).unwrap();
    if dist.lambda.coefficients.len() > 1 && dist.rho.coefficients.len() > 1 {
        writeln!(
            out,
            "design rate = {}",
            design_rate(&dist.lambda, &dist.rho)
        )
        .unwrap();
    }
    if !dist.isolated_qubits.is_empty() {
        writeln!(out, "isolated qubits = {:?}", dist.isolated_qubits).unwrap();
    }
    writeln!(out, "4-loops = {}", loops.len()).unwrap();
    for l in loops.iter().take(a.list_loops) {
        writeln!(
            out,
            "  checks {} {} share qubits {:?}",
            l.first, l.second, l.shared_qubits
        )
        .unwrap();
    }
    print!("{out}");
    if let Some(path) = &a.dot {
        write_output(Some(path), &code.to_dot())?;
    }
    Ok(())
}

fn parse_syndrome(code: &StabilizerCode, s: &str) -> Result<Syndrome, CliError> {
    let syndrome: Syndrome = s
        .parse()
        .map_err(|e: qldpc_bp::Error| CliError::Usage(e.to_string()))?;
    code.check_syndrome_len(&syndrome)?;
    Ok(syndrome)
}

fn parse_error(code: &StabilizerCode, s: &str) -> Result<PauliOperator, CliError> {
    let e: PauliOperator = s
        .parse()
        .map_err(|e: qldpc_bp::Error| CliError::Usage(e.to_string()))?;
    if e.num_qubits() != code.num_qubits() {
        return Err(CliError::Data(format!(
            "error acts on {} qubits, code has {}",
            e.num_qubits(),
            code.num_qubits()
        )));
    }
    Ok(e)
}

fn trace_row(out: &mut String, iteration: usize, beliefs: &[Dist]) {
    for (q, b) in beliefs.iter().enumerate() {
        writeln!(
            out,
            "{iteration},{q},{:e},{:e},{:e},{:e}",
            b[0], b[1], b[2], b[3]
        )
        .unwrap();
    }
}

fn decode(a: DecodeArgs) -> CmdResult {
    let (code, source) = load_code(&a.source, &a.bicycle)?;
    let config = decode_config(&a.decoder, a.seed)?;
    let prior = prior_for(&code, a.epsilon)?;
    let (syndrome, injected) = match (&a.input.syndrome, &a.input.error) {
        (Some(s), _) => (parse_syndrome(&code, s)?, None),
        (None, Some(e)) => {
            let e = parse_error(&code, e)?;
            (code.syndrome(&e)?, Some(e))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "one of --syndrome or --error is required".into(),
            ))
        }
    };
    let echo = json!({
        "source": source,
        "epsilon": a.epsilon,
        "syndrome": syndrome.to_string(),
        "error": injected.as_ref().map(|e| e.to_string()),
        "decode": config,
    });
    let mut trace = String::new();
    let result =
        decode_with_heuristics_observed(&code, &prior, &syndrome, &config, &mut |it, b| {
            trace_row(&mut trace, it, b)
        })?;
    let r = &result.result;
    let mut out = header("decode", &echo);
    writeln!(out, "syndrome = {syndrome}").unwrap();
    writeln!(out, "correction = {}", r.correction).unwrap();
    writeln!(out, "converged = {}", r.converged).unwrap();
    writeln!(out, "iterations = {}", r.iterations_used).unwrap();
    if let Some(e) = &injected {
        writeln!(
            out,
            "outcome = {}",
            outcome_name(classify(&code, e, &r.correction)?)
        )
        .unwrap();
    }
    writeln!(out, "events = {}", result.events.len()).unwrap();
    for event in &result.events {
        writeln!(out, "event {}", event.to_record()).unwrap();
    }
    print!("{out}");
    if let Some(path) = &a.trace {
        let body = format!(
            "{}iteration,qubit,b_I,b_X,b_Y,b_Z\n{trace}",
            header("decode", &echo)
        );
        write_output(Some(path), &body)?;
    }
    Ok(())
}

fn outcome_name(c: sim::Classification) -> &'static str {
    match c {
        sim::Classification::Success => "success",
        sim::Classification::Detected => "detected",
        sim::Classification::Logical => "logical",
    }
}

fn simulate(a: SimulateArgs) -> CmdResult {
    let (code, source) = load_code(&a.source, &a.bicycle)?;
    let epsilons = match (a.epsilon.epsilon, a.epsilon.epsilon_sweep) {
        (Some(e), _) => vec![e],
        (None, Some(s)) => sim::log_sweep(s.lo, s.hi, s.steps)?,
        (None, None) => {
            return Err(CliError::Usage(
                "one of --epsilon or --epsilon-sweep is required".into(),
            ))
        }
    };
    for &e in &epsilons {
        prior_for(&code, e)?;
    }
    let config = SimConfig {
        epsilons,
        trials: a.trials,
        decode: decode_config(&a.decoder, 0)?,
        master_seed: a.seed,
        early_stop_failures: (a.early_stop > 0).then_some(a.early_stop),
        batch_size: a.batch_size,
    };
    let stats = run_simulation(&code, &config)?;
    let echo =
        json!({ "source": source, "code_fingerprint": code.fingerprint(), "simulation": config });
    let body = format!("{}{}", header("simulate", &echo), stats_to_csv(&stats));
    write_output(a.out.as_deref(), &body)?;
    if let Some(path) = &a.json {
        let mut report = stats_to_json(&code, &config, &stats);
        report["source"] = source;
        write_output(
            Some(path),
            &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
        )?;
    }
    if stats.total_logical() > 0 {
        eprintln!(
            "warning: {} of {} failures were undetected logical errors",
            stats.total_logical(),
            stats.total_failures()
        );
    }
    Ok(())
}

fn oracle_check(a: OracleArgs) -> CmdResult {
    let (code, source) = load_code(&a.source, &a.bicycle)?;
    let prior = prior_for(&code, a.epsilon)?;
    let echo = json!({
        "source": source,
        "epsilon": a.epsilon,
        "trials": a.trials,
        "seed": a.seed,
        "iterations": a.max_iter,
    });
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut body = header("oracle-check", &echo);
    body.push_str("trial,syndrome,qubit,pauli,bp_belief,exact_marginal,abs_diff\n");
    let mut worst: f64 = 0.0;
    for t in 0..a.trials {
        let syndrome = code.syndrome(&sample_error(&prior, &mut rng))?;
        let exact = exact_marginals(&code, &prior, &syndrome)?;
        let beliefs = bp::beliefs_after(&code, &prior, &syndrome, a.max_iter)?;
        for (q, (b, e)) in beliefs.iter().zip(&exact).enumerate() {
            for p in Pauli::ALL {
                let diff = (b[p.index()] - e[p.index()]).abs();
                worst = worst.max(diff);
                writeln!(
                    body,
                    "{t},{syndrome},{q},{},{:e},{:e},{:e}",
                    p.as_char(),
                    b[p.index()],
                    e[p.index()],
                    diff
                )
                .unwrap();
            }
        }
    }
    write_output(a.out.as_deref(), &body)?;
    eprintln!("max |bp - exact| = {worst:e}");
    Ok(())
}
