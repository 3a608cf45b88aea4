use std::io::Write;

use oblivious_stacking::analysis::{
    self, estimate_pair_probabilities, verify_center_distance_profile, EstimatorConfig, EstimatorResult, PairMode,
    ReportRow, Strategy,
};
use oblivious_stacking::graph::EXACT_MAX_VERTICES;
use oblivious_stacking::{
    build_overlap_graph, evaluate_cut, generate_extended, generate_scheinerman, greedy_kcut, max_kcut_exact,
    random_coloring, validate_assumption, ColorRule64, Coloring, LengthDensity64, ModelParams64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::instance::{open_output, read_instance, write_instance};
use crate::{CliError, ColorArgs, EvaluateArgs, Format, GenerateArgs, GraphArgs, MaxcutArgs, StrategyArg, Target, VerifyArgs};

fn warn_assumption(k: u32, max_len: f64) {
    if !validate_assumption(k, &max_len) {
        eprintln!("note: (k - 1) / (k L) is not an integer for k = {k}, L = {max_len}; the last J-interval is shorter");
    }
}

pub fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let max_len = args.max_len.resolve(args.k)?;
    let params = ModelParams64::new(args.n, args.k, max_len, args.seed)?;
    let mut rng = params.rng();
    let intervals = match &args.density {
        Some(path) => {
            let density = LengthDensity64::from_json_file(path)?;
            generate_extended(&params, &density, &mut rng)?
        }
        None => generate_scheinerman(&params, &mut rng)?,
    };
    write_instance(open_output(args.output.as_deref())?, &intervals, None)?;
    eprintln!("n={} k={} L={} seed={}", args.n, args.k, max_len, args.seed);
    Ok(())
}

pub fn color(args: &ColorArgs) -> Result<(), CliError> {
    let max_len = args.max_len.resolve(args.k)?;
    let inst = read_instance(&args.input)?;
    let coloring = match args.strategy {
        StrategyArg::Oblivious => {
            warn_assumption(args.k, max_len);
            ColorRule64::new(args.k, max_len)?.color_instance(&inst.intervals)?
        }
        StrategyArg::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            random_coloring(inst.intervals.len(), args.k, &mut rng)?
        }
    };
    write_instance(open_output(args.output.as_deref())?, &inst.intervals, Some(&coloring))
}

fn ratio_value(ratio: Option<f64>) -> Value {
    ratio.map_or_else(|| json!("NA"), |r| json!(r))
}

fn ratio_text(ratio: Option<f64>) -> String {
    ratio.map_or_else(|| "NA".to_string(), |r| format!("{r:.6}"))
}

pub fn evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let inst = read_instance(&args.input)?;
    let colors = match inst.colors {
        Some(c) => c,
        None if inst.intervals.is_empty() => Vec::new(),
        None => {
            return Err(CliError::Usage(format!(
                "{}: every row needs a color column",
                args.input.display()
            )))
        }
    };
    let k = args.k.unwrap_or_else(|| colors.iter().copied().max().unwrap_or(1));
    let coloring = Coloring::new(colors, k)?;
    let stats = evaluate_cut(&inst.intervals, &coloring)?;
    let mut out = std::io::stdout().lock();
    match args.format {
        Format::Json => {
            let obj = json!({
                "n": inst.intervals.len(),
                "m": stats.m,
                "cut": stats.cut,
                "conflicts": stats.conflicts,
                "ratio": ratio_value(stats.ratio()),
            });
            writeln!(out, "{obj}")?;
        }
        Format::Text | Format::Csv => {
            writeln!(out, "n={}", inst.intervals.len())?;
            writeln!(out, "m={}", stats.m)?;
            writeln!(out, "cut={}", stats.cut)?;
            writeln!(out, "conflicts={}", stats.conflicts)?;
            writeln!(out, "ratio={}", ratio_text(stats.ratio()))?;
        }
    }
    Ok(())
}

struct Check {
    row: ReportRow,
    pass: bool,
}

impl Check {
    fn summary(&self) -> String {
        let k = self.row.k.map_or_else(String::new, |k| format!("k={k} "));
        format!(
            "{k}L={:.6} {} estimate={:.6} reference={:.6} rel={:+.3}% stderr={:.2e} {}",
            self.row.max_len,
            self.row.mode,
            self.row.estimate,
            self.row.reference,
            100.0 * self.row.relative_difference,
            self.row.stderr,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

fn estimate_row(args: &VerifyArgs, k: u32, max_len: f64, result: EstimatorResult) -> ReportRow {
    ReportRow {
        k: Some(k),
        max_len,
        mode: args.mode.as_str().to_string(),
        n_or_trials: match args.mode {
            PairMode::AllPairs => args.n as u64,
            PairMode::IndependentPairs => args.trials,
        },
        seed: args.seed,
        estimate: result.estimate,
        reference: result.reference.unwrap_or(f64::NAN),
        relative_difference: result.relative_difference.unwrap_or(f64::NAN),
        stderr: result.standard_error,
    }
}

fn pair_checks(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for &k in &args.k {
        let max_len = args.max_len.resolve(k)?;
        let params = ModelParams64::new(args.n, k, max_len, args.seed)?;
        let rule = ColorRule64::new(k, max_len)?;
        let config = EstimatorConfig {
            mode: args.mode,
            trials: args.trials,
            workers: args.workers,
            strategy: Strategy::Oblivious,
        };
        let reference = match args.target {
            Target::Lemma2 => analysis::p_sc_given_ov(k, &max_len)?,
            _ => analysis::p_ov(&max_len)?,
        };
        let counts = estimate_pair_probabilities(&params, None, &rule, &config)?;
        let result = match args.target {
            Target::Lemma2 => counts.p_sc_given_ov()?,
            _ => counts.p_ov()?,
        }
        .against(reference);
        let row = estimate_row(args, k, max_len, result);
        let pass = row.relative_difference.abs() <= args.threshold;
        checks.push(Check { row, pass });
    }
    Ok(checks)
}

fn center_distance_checks(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    let k = *args.k.first().ok_or_else(|| CliError::Usage("no k given".into()))?;
    let max_len = args.max_len.resolve(k)?;
    let checks = verify_center_distance_profile(&args.x, max_len, args.trials, args.seed, args.workers)?;
    Ok(checks
        .into_iter()
        .map(|c| Check {
            row: ReportRow {
                k: None,
                max_len,
                mode: format!("x={}", c.x),
                n_or_trials: args.trials,
                seed: args.seed,
                estimate: c.result.estimate,
                reference: c.reference,
                relative_difference: c.result.relative_difference.unwrap_or(f64::NAN),
                stderr: c.result.standard_error,
            },
            pass: c.pass,
        })
        .collect())
}

fn theory(args: &VerifyArgs) -> Result<(), CliError> {
    let mut out = open_output(args.output.as_deref())?;
    let mut objects = Vec::new();
    if args.format != Format::Json {
        writeln!(out, "k,L,p_ov,p_si_given_sc,p_ov_given_sc,p_sc_given_ov,expected_cut_ratio")?;
    }
    for &k in &args.k {
        let max_len = args.max_len.resolve(k)?;
        let values = [
            analysis::p_ov(&max_len)?,
            analysis::p_si_given_sc(k, &max_len)?,
            analysis::p_ov_given_sc(k, &max_len)?,
            analysis::p_sc_given_ov(k, &max_len)?,
            analysis::expected_cut_ratio(k, &max_len)?,
        ];
        if args.format == Format::Json {
            objects.push(json!({
                "k": k,
                "L": max_len,
                "p_ov": values[0],
                "p_si_given_sc": values[1],
                "p_ov_given_sc": values[2],
                "p_sc_given_ov": values[3],
                "expected_cut_ratio": values[4],
            }));
        } else {
            let cols: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
            writeln!(out, "{k},{max_len:.6},{}", cols.join(","))?;
        }
    }
    if args.format == Format::Json {
        writeln!(out, "{}", Value::Array(objects))?;
    }
    out.flush()?;
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    if args.k.is_empty() {
        return Err(CliError::Usage("no k given".into()));
    }
    if args.threshold.is_nan() || args.threshold < 0.0 {
        return Err(CliError::Usage(format!("threshold must be non-negative, got {}", args.threshold)));
    }
    let checks = match args.target {
        Target::Theory => return theory(args),
        Target::Lemma1 => center_distance_checks(args)?,
        Target::Lemma2 | Target::Pov => pair_checks(args)?,
    };

    let mut out = open_output(args.output.as_deref())?;
    match args.format {
        Format::Csv => {
            let rows: Vec<ReportRow> = checks.iter().map(|c| c.row.clone()).collect();
            analysis::write_csv(&rows, &mut out)?;
        }
        Format::Json => {
            let mut items = Vec::new();
            for c in &checks {
                let mut v = serde_json::to_value(&c.row).map_err(|e| CliError::Io(e.to_string()))?;
                v["pass"] = json!(c.pass);
                items.push(v);
            }
            writeln!(out, "{}", Value::Array(items))?;
        }
        Format::Text => {
            for c in &checks {
                writeln!(out, "{}", c.summary())?;
            }
        }
    }
    out.flush()?;
    if args.format != Format::Text {
        for c in &checks {
            eprintln!("{}", c.summary());
        }
    }

    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}

pub fn maxcut(args: &MaxcutArgs) -> Result<(), CliError> {
    let max_len = args.max_len.resolve(args.k)?;
    let inst = read_instance(&args.input)?;
    let n = inst.intervals.len();
    if args.exact && n > EXACT_MAX_VERTICES {
        return Err(CliError::Usage(format!(
            "the exact solver handles at most {EXACT_MAX_VERTICES} intervals, this instance has {n}; use --greedy"
        )));
    }
    let graph = build_overlap_graph(&inst.intervals);
    let m = graph.num_edges() as u64;
    let k = u64::from(args.k);

    let exact = if !args.greedy && n <= EXACT_MAX_VERTICES {
        Some(max_kcut_exact(&graph, args.k)?.0)
    } else {
        None
    };
    let greedy = if !args.exact { Some(greedy_kcut(&graph, args.k)?.0) } else { None };
    let rule = ColorRule64::new(args.k, max_len)?;
    let oblivious = rule
        .color_instance(&inst.intervals)
        .ok()
        .map(|c| graph.cut_size(c.colors()));
    let lower_bound = ((k - 1) * m).div_ceil(k);

    let mut out = std::io::stdout().lock();
    match args.format {
        Format::Json => {
            let opt = |v: Option<u64>| v.map_or_else(|| json!("NA"), |x| json!(x));
            let obj = json!({
                "n": n,
                "m": m,
                "k": args.k,
                "exact": opt(exact),
                "greedy": opt(greedy),
                "oblivious": opt(oblivious),
                "lower_bound": lower_bound,
            });
            writeln!(out, "{obj}")?;
        }
        Format::Text | Format::Csv => {
            let opt = |v: Option<u64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
            writeln!(out, "n={n}")?;
            writeln!(out, "m={m}")?;
            writeln!(out, "k={}", args.k)?;
            writeln!(out, "exact={}", opt(exact))?;
            writeln!(out, "greedy={}", opt(greedy))?;
            writeln!(out, "oblivious={}", opt(oblivious))?;
            writeln!(out, "lower_bound={lower_bound}")?;
        }
    }
    if exact.is_none() && !args.greedy {
        eprintln!("note: exact solver skipped, {n} intervals exceed the limit of {EXACT_MAX_VERTICES}");
    }
    Ok(())
}

pub fn graph(args: &GraphArgs) -> Result<(), CliError> {
    let inst = read_instance(&args.input)?;
    let graph = build_overlap_graph(&inst.intervals);
    let mut out = open_output(args.output.as_deref())?;
    graph.write_edge_list(&mut out)?;
    out.flush()?;
    Ok(())
}
