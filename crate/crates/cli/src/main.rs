//! Command-line front end: parse -> instantiate -> embed -> verify ->
//! serialize, with reproducible outputs for the built-in examples.
//!
//! Exit codes: 0 success, 1 failed check or golden mismatch, 2 bad input or
//! usage, 3 mode violation, 4 schema refusal.

use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twogen::embed::{embed, embed_schema, universal_word, EmbedError, EmbedMode, EmbeddingResult};
use twogen::presentation::{parse, Format, ParseError, Presentation};
use twogen::verify::graph::{build_graph, is_free_basis};
use twogen::verify::identities::{check_identities, negative_controls, to_json_lines};
use twogen::verify::witness::{find_witness, WitnessOptions, WitnessStatus};
use twogen::word::Word;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_MODE: u8 = 3;
const EXIT_SCHEMA: u8 = 4;

const ZINF_SRC: &str = "gens a[i] for i >= 1;\nrels [a[k], a[l]] for k, l >= 1;\ntorsion_free;\n";
const RATIONALS_SRC: &str =
    "gens a[i] for i >= 1;\nrels a[s]^s * a[s-1]^-1 for s >= 2;\ntorsion_free;\n";

fn prufer_src(p: i64) -> String {
    format!("gens a[i] for i >= 1;\nrels a[1]^{p};\nrels a[s+1]^{p} * a[s]^-1 for s >= 1;\n")
}

const GOLDEN_ZINF_B3: &str = include_str!("../golden/zinf_bound3.txt");
const GOLDEN_Q_B5: &str = include_str!("../golden/q_bound5.txt");
const GOLDEN_PRUFER_P2_B3: &str = include_str!("../golden/prufer_p2_bound3.txt");

#[derive(Parser)]
#[command(
    name = "twogen",
    version,
    about = "Embed countable presented groups into two-generator groups, and verify the machinery behind the embedding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a presentation over the two generators x, y
    Embed(EmbedArgs),
    /// Run verification suites
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Rebuild a built-in example and diff it against the stored output
    Examples(ExamplesArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    General,
    Tf,
}

impl From<ModeArg> for EmbedMode {
    fn from(m: ModeArg) -> EmbedMode {
        match m {
            ModeArg::General => EmbedMode::General,
            ModeArg::Tf => EmbedMode::TorsionFree,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Dsl,
    Gap,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimplifyArg {
    Cyclic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Table,
    Jsonl,
}

#[derive(Args)]
struct EmbedArgs {
    /// Read the source presentation from a file ('-' reads stdin)
    #[arg(long, conflicts_with = "example")]
    file: Option<String>,
    /// Use a built-in example presentation: zinf, Q, or prufer
    #[arg(long)]
    example: Option<String>,
    /// Prime parameter for the prufer example
    #[arg(long, default_value_t = 2)]
    p: i64,
    /// Expand relator families up to this parameter value before embedding
    #[arg(long)]
    bound: Option<i64>,
    #[arg(long, value_enum, default_value = "general")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "dsl")]
    format: FormatArg,
    /// Apply cyclic reduction to displayed relators
    #[arg(long, value_enum)]
    simplify: Option<SimplifyArg>,
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Check the generator-word identities by free reduction
    Identities {
        #[arg(long, default_value_t = 50)]
        imax: u32,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
    },
    /// Check that the generator words freely generate rank-n subgroups
    Basis {
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long, value_enum, default_value = "general")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
    },
    /// Search for a finite permutation witness that an embedded generator is nontrivial
    Witness {
        /// Built-in source group: C<n> for the cyclic group of order n
        #[arg(long, default_value = "C2")]
        group: String,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[arg(long, default_value_t = 2_000_000)]
        budget_steps: u64,
        #[arg(long)]
        budget_secs: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Exit nonzero when the search times out
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
    },
}

#[derive(Args)]
struct ExamplesArgs {
    /// Example name: zinf, Q, or prufer
    name: String,
    #[arg(long)]
    bound: i64,
    /// Prime parameter for the prufer example
    #[arg(long, default_value_t = 2)]
    p: i64,
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure {
        code,
        msg: msg.into(),
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        fail(EXIT_INPUT, e.to_string())
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Failure {
        let code = match e {
            EmbedError::TorsionFreeNotAsserted => EXIT_MODE,
            EmbedError::SignIndefiniteExponent(_)
            | EmbedError::ParametricExponentInGeneralMode(_) => EXIT_SCHEMA,
            _ => EXIT_INPUT,
        };
        fail(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Embed(args) => cmd_embed(args),
        Command::Verify { suite } => cmd_verify(suite),
        Command::Examples(args) => cmd_examples(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

// ---------------------------------------------------------------------------
// embed

fn builtin_source(name: &str, p: i64) -> Result<String, Failure> {
    match name {
        "zinf" => Ok(ZINF_SRC.to_string()),
        "Q" | "q" => Ok(RATIONALS_SRC.to_string()),
        "prufer" => {
            if p < 2 {
                return Err(fail(EXIT_INPUT, "prufer requires --p >= 2"));
            }
            Ok(prufer_src(p))
        }
        other => Err(fail(
            EXIT_INPUT,
            format!("unknown example `{other}` (expected zinf, Q, or prufer)"),
        )),
    }
}

fn load_source(args: &EmbedArgs) -> Result<String, Failure> {
    if let Some(name) = &args.example {
        return builtin_source(name, args.p);
    }
    match args.file.as_deref() {
        Some("-") | None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| fail(EXIT_INPUT, format!("reading stdin: {e}")))?;
            Ok(text)
        }
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| fail(EXIT_INPUT, format!("reading {path}: {e}"))),
    }
}

fn run_embedding(
    source: &Presentation,
    bound: Option<i64>,
    mode: EmbedMode,
) -> Result<EmbeddingResult, Failure> {
    let result = match bound {
        Some(bound) if bound < 1 => {
            return Err(fail(EXIT_INPUT, "--bound must be at least 1"));
        }
        Some(bound) => {
            let inst = source.instantiate(bound);
            if inst.dropped_trivial > 0 {
                eprintln!(
                    "note: {} freely trivial relator instance(s) dropped",
                    inst.dropped_trivial
                );
            }
            embed(&inst.presentation, mode)?
        }
        None => {
            if source.schemas.is_empty() {
                embed(source, mode)?
            } else {
                embed_schema(source, mode)?
            }
        }
    };
    Ok(result)
}

fn display_word(w: &Word, simplify: Option<SimplifyArg>) -> Word {
    match simplify {
        Some(SimplifyArg::Cyclic) => w.cyclically_reduced(),
        None => w.clone(),
    }
}

fn mode_name(mode: EmbedMode) -> &'static str {
    match mode {
        EmbedMode::General => "general",
        EmbedMode::TorsionFree => "torsion-free",
    }
}

fn render_dsl(result: &EmbeddingResult, simplify: Option<SimplifyArg>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# mode: {}", mode_name(result.mode));
    let _ = writeln!(out, "gens x, y;");
    for (i, r) in result.target.relators.iter().enumerate() {
        let note = result.notes.get(i).map(String::as_str).unwrap_or("");
        let _ = writeln!(out, "rels {};  # {}", display_word(r, simplify), note);
    }
    let schema_notes = &result.notes[result.target.relators.len()..];
    for (s, note) in result.target.schemas.iter().zip(
        schema_notes
            .iter()
            .map(String::as_str)
            .chain(std::iter::repeat("")),
    ) {
        let _ = writeln!(out, "rels {s};  # {note}");
    }
    out.push_str("gamma:\n");
    for (g, w) in result.gamma.iter() {
        let _ = writeln!(out, "{g} -> {w}");
    }
    out
}

fn render_gap(result: &EmbeddingResult, simplify: Option<SimplifyArg>) -> Result<String, Failure> {
    let mut display = result.target.clone();
    display.relators = display
        .relators
        .iter()
        .map(|r| display_word(r, simplify))
        .collect();
    let body = display
        .serialize(Format::Gap)
        .map_err(|e| fail(EXIT_SCHEMA, e.to_string()))?;
    let mut out = String::new();
    for (g, w) in result.gamma.iter() {
        let _ = writeln!(out, "# gamma: {g} -> {w}");
    }
    out.push_str(&body);
    Ok(out)
}

fn render_json(result: &EmbeddingResult, simplify: Option<SimplifyArg>) -> String {
    let relators: Vec<serde_json::Value> = result
        .target
        .relators
        .iter()
        .enumerate()
        .map(|(i, r)| {
            serde_json::json!({
                "word": display_word(r, simplify).to_string(),
                "note": result.notes.get(i).map(String::as_str).unwrap_or(""),
            })
        })
        .collect();
    let schema_notes = &result.notes[result.target.relators.len()..];
    let schemas: Vec<serde_json::Value> = result
        .target
        .schemas
        .iter()
        .zip(
            schema_notes
                .iter()
                .map(String::as_str)
                .chain(std::iter::repeat("")),
        )
        .map(|(s, note)| {
            serde_json::json!({
                "family": s.to_string(),
                "note": note,
            })
        })
        .collect();
    let gamma: Vec<serde_json::Value> = result
        .gamma
        .iter()
        .map(|(g, w)| serde_json::json!({ "gen": g.to_string(), "image": w.to_string() }))
        .collect();
    let value = serde_json::json!({
        "mode": mode_name(result.mode),
        "gens": ["x", "y"],
        "relators": relators,
        "schemas": schemas,
        "gamma": gamma,
    });
    serde_json::to_string_pretty(&value).expect("json renders") + "\n"
}

fn cmd_embed(args: EmbedArgs) -> Result<u8, Failure> {
    let text = load_source(&args)?;
    let source = parse(&text)?;
    let result = run_embedding(&source, args.bound, args.mode.into())?;
    let rendered = match args.format {
        FormatArg::Dsl => render_dsl(&result, args.simplify),
        FormatArg::Gap => render_gap(&result, args.simplify)?,
        FormatArg::Json => render_json(&result, args.simplify),
    };
    print!("{rendered}");
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(suite: VerifySuite) -> Result<u8, Failure> {
    match suite {
        VerifySuite::Identities { imax, format } => verify_identities(imax, format),
        VerifySuite::Basis { n, mode, format } => verify_basis(n, mode.into(), format),
        VerifySuite::Witness {
            group,
            max_degree,
            budget_steps,
            budget_secs,
            seed,
            strict,
            format,
        } => verify_witness(
            &group,
            max_degree,
            budget_steps,
            budget_secs,
            seed,
            strict,
            format,
        ),
    }
}

fn verify_identities(imax: u32, format: ReportFormat) -> Result<u8, Failure> {
    let records = check_identities(imax);
    let controls = negative_controls();
    let all_pass = records.iter().all(|r| r.pass);
    let controls_fail = controls.iter().all(|r| !r.pass);
    match format {
        ReportFormat::Jsonl => {
            print!("{}", to_json_lines(&records));
            print!("{}", to_json_lines(&controls));
        }
        ReportFormat::Table => {
            for r in &records {
                let i = r.params.get("i").copied().unwrap_or(0);
                let status = if r.pass { "ok" } else { "FAIL" };
                println!("{status:<4} i={i:<4} {:<40} {}", r.name, r.certificate);
            }
            for r in &controls {
                let status = if r.pass {
                    "UNEXPECTED-PASS"
                } else {
                    "failed-as-expected"
                };
                println!("{status:<18} {:<46}", r.name);
            }
            println!(
                "summary: {}/{} identities hold; {}/{} negative controls fail as expected",
                records.iter().filter(|r| r.pass).count(),
                records.len(),
                controls.iter().filter(|r| !r.pass).count(),
                controls.len(),
            );
        }
    }
    Ok(if all_pass && controls_fail {
        0
    } else {
        EXIT_CHECK_FAILED
    })
}

fn verify_basis(n: u32, mode: EmbedMode, format: ReportFormat) -> Result<u8, Failure> {
    let mut ok = true;
    for k in 1..=n.max(1) {
        let words: Vec<Word> = (1..=k)
            .map(|i| twogen::embed::generator_word(i, mode))
            .collect::<Result<_, _>>()?;
        let basis = is_free_basis(&words);
        let rank = build_graph(&words).graph.fold().rank().expect("folded");
        let pass = basis && rank == k as usize;
        ok &= pass;
        match format {
            ReportFormat::Table => println!(
                "{} n={k:<3} rank={rank:<3} free-basis={basis}",
                if pass { "ok" } else { "FAIL" }
            ),
            ReportFormat::Jsonl => println!(
                "{}",
                serde_json::json!({
                    "name": "free-basis",
                    "params": { "n": k, "mode": mode_name(mode) },
                    "pass": pass,
                    "certificate": rank,
                })
            ),
        }
    }
    if format == ReportFormat::Table {
        println!(
            "summary: generator words ({} mode) {} a free basis up to n = {n}",
            mode_name(mode),
            if ok { "form" } else { "do NOT form" },
        );
    }
    Ok(if ok { 0 } else { EXIT_CHECK_FAILED })
}

fn verify_witness(
    group: &str,
    max_degree: usize,
    budget_steps: u64,
    budget_secs: Option<u64>,
    seed: u64,
    strict: bool,
    format: ReportFormat,
) -> Result<u8, Failure> {
    let order: u32 = group
        .strip_prefix('C')
        .and_then(|s| s.parse().ok())
        .filter(|&n| n >= 2)
        .ok_or_else(|| {
            fail(
                EXIT_INPUT,
                format!("unknown group `{group}` (expected C<n> with n >= 2)"),
            )
        })?;
    let source = parse(&format!("gens a[i] for i >= 1;\nrels a[1]^{order};\n"))?;
    let result = embed(&source, EmbedMode::General)?;
    let w = universal_word(1)?;
    let opts = WitnessOptions {
        max_degree,
        max_steps: budget_steps,
        time_limit: budget_secs.map(Duration::from_secs),
        seed,
    };
    let report =
        find_witness(&result.target, &w, &opts).map_err(|e| fail(EXIT_INPUT, e.to_string()))?;
    let status = match report.status {
        WitnessStatus::WitnessFound => "WITNESS_FOUND",
        WitnessStatus::Exhausted => "EXHAUSTED",
        WitnessStatus::Timeout => "TIMEOUT",
    };
    match format {
        ReportFormat::Table => {
            println!("group: {group}  word: image of a[1]");
            println!("status: {status}");
            println!("steps: {}", report.steps);
            if let Some(a) = &report.assignment {
                println!("degree: {}", a.degree);
                for (g, perm) in &a.images {
                    println!("{g} -> {:?}", perm.images());
                }
            }
            if let Some(order) = report.image_order {
                println!("image order: {order}");
            }
        }
        ReportFormat::Jsonl => {
            let images: serde_json::Value = match &report.assignment {
                Some(a) => a
                    .images
                    .iter()
                    .map(|(g, p)| (g.to_string(), serde_json::json!(p.images())))
                    .collect::<serde_json::Map<_, _>>()
                    .into(),
                None => serde_json::Value::Null,
            };
            println!(
                "{}",
                serde_json::json!({
                    "name": "witness",
                    "params": { "group": group, "max_degree": max_degree, "seed": seed },
                    "pass": report.status == WitnessStatus::WitnessFound,
                    "certificate": {
                        "status": status,
                        "degree": report.assignment.as_ref().map(|a| a.degree),
                        "images": images,
                        "image_order": report.image_order,
                        "steps": report.steps,
                    },
                })
            );
        }
    }
    match report.status {
        WitnessStatus::WitnessFound => Ok(0),
        WitnessStatus::Exhausted => {
            eprintln!("note: search space exhausted up to degree {max_degree}; absence of a witness proves nothing");
            Ok(0)
        }
        WitnessStatus::Timeout => {
            eprintln!("note: budget exhausted; absence of a witness proves nothing");
            Ok(if strict { EXIT_CHECK_FAILED } else { 0 })
        }
    }
}

// ---------------------------------------------------------------------------
// examples

struct ExampleSpec {
    source: String,
    mode: EmbedMode,
    golden: Option<&'static str>,
    accept_free_equality: bool,
}

fn example_spec(name: &str, bound: i64, p: i64) -> Result<ExampleSpec, Failure> {
    match name {
        "zinf" => Ok(ExampleSpec {
            source: ZINF_SRC.to_string(),
            mode: EmbedMode::TorsionFree,
            golden: (bound == 3).then_some(GOLDEN_ZINF_B3),
            accept_free_equality: false,
        }),
        "Q" | "q" => Ok(ExampleSpec {
            source: RATIONALS_SRC.to_string(),
            mode: EmbedMode::TorsionFree,
            golden: (bound == 5).then_some(GOLDEN_Q_B5),
            accept_free_equality: false,
        }),
        "prufer" => {
            if p < 2 {
                return Err(fail(EXIT_INPUT, "prufer requires --p >= 2"));
            }
            Ok(ExampleSpec {
                source: prufer_src(p),
                mode: EmbedMode::General,
                golden: (bound == 3 && p == 2).then_some(GOLDEN_PRUFER_P2_B3),
                accept_free_equality: true,
            })
        }
        other => Err(fail(
            EXIT_INPUT,
            format!("unknown example `{other}` (expected zinf, Q, or prufer)"),
        )),
    }
}

fn render_example(name: &str, spec: &ExampleSpec, bound: i64) -> Result<String, Failure> {
    let source = parse(&spec.source)?;
    let family = embed_schema(&source, spec.mode)?;
    let instantiated = run_embedding(&source, Some(bound), spec.mode)?;
    let mut out = String::new();
    let _ = writeln!(out, "# example: {name}");
    let _ = writeln!(out, "# mode: {}", mode_name(spec.mode));
    out.push_str("# source\n");
    out.push_str(
        &source
            .serialize(Format::Dsl)
            .expect("dsl always serializes"),
    );
    out.push_str("# target family\n");
    let _ = writeln!(out, "gens x, y;");
    for r in &family.target.relators {
        let _ = writeln!(out, "rels {};", r.cyclically_reduced());
    }
    for s in &family.target.schemas {
        let _ = writeln!(out, "rels {s};");
    }
    let _ = writeln!(out, "# target instantiated at bound {bound}");
    let _ = writeln!(out, "gens x, y;");
    for r in &instantiated.target.relators {
        let _ = writeln!(out, "rels {};", r.cyclically_reduced());
    }
    out.push_str("gamma:\n");
    for (g, w) in instantiated.gamma.iter() {
        let _ = writeln!(out, "{g} -> {w}");
    }
    Ok(out)
}

/// Compares the instantiated-relator lines of two example outputs as words
/// (free equality) rather than as text.
fn relators_freely_equal(actual: &str, golden: &str) -> bool {
    fn target_relators(output: &str) -> Option<Vec<Word>> {
        let tail = output.split("# target instantiated").nth(1)?;
        let mut text = String::from("gens x, y;\n");
        for line in tail.lines().filter(|l| l.starts_with("rels ")) {
            text.push_str(line);
            text.push('\n');
        }
        parse(&text).ok().map(|p| p.relators)
    }
    match (target_relators(actual), target_relators(golden)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

fn cmd_examples(args: ExamplesArgs) -> Result<u8, Failure> {
    let spec = example_spec(&args.name, args.bound, args.p)?;
    let rendered = render_example(&args.name, &spec, args.bound)?;
    print!("{rendered}");
    match spec.golden {
        None => {
            eprintln!("note: no stored golden output for this configuration; skipping comparison");
            Ok(0)
        }
        Some(golden) if golden == rendered => {
            eprintln!("golden: match");
            Ok(0)
        }
        Some(golden) => {
            if spec.accept_free_equality && relators_freely_equal(&rendered, golden) {
                eprintln!("golden: match (free equality of relators)");
                return Ok(0);
            }
            eprintln!("golden: MISMATCH");
            for (i, (a, b)) in rendered.lines().zip(golden.lines()).enumerate() {
                if a != b {
                    eprintln!("  line {}: got      {a}", i + 1);
                    eprintln!("  line {}: expected {b}", i + 1);
                }
            }
            let (got, want) = (rendered.lines().count(), golden.lines().count());
            if got != want {
                eprintln!("  line counts differ: got {got}, expected {want}");
            }
            Ok(EXIT_CHECK_FAILED)
        }
    }
}
