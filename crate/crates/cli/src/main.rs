use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lojnewton::harness::{
    genericity_trial, instance_mapping, lattice_supports, openness_probe, reproduce_example31, reproduce_example32,
    Report, RunConfig, Sampler,
};
use lojnewton::lattice::{reduce_mapping, unimodular_complete_traced, verify_reduction};
use lojnewton::lojasiewicz::{
    fit_exponents, hunt_sequences, ktilde_probe, multiplier, verify_inequality, FitConfig, HuntConfig, KtildeConfig,
    MuConfig, MultiplierConfig, SamplerConfig, SequenceKind,
};
use lojnewton::nondegeneracy::{augmented_check, khovanskii_check, nondegenerate_at_infinity, CheckMode};
use lojnewton::polyhedra::{enumerate_negative_face_tuples, face_lattice};
use lojnewton::polynomial::{parse_polynomial, GRAMMAR};
use lojnewton::{Error, Exec, Polynomial, PolynomialMapping};
use serde::Serialize;
use serde_json::json;

const FLAGS: &str = "\
Common flags:
  --n N            number of variables (inferred from the text when omitted)
  --text POLY      polynomial in text form; repeat for several components
  --json FILE|JSON polynomial JSON {\"n\":..,\"terms\":[{\"c\":..,\"e\":[..]}]}, or a list of them
  --seed S         64-bit seed (default 0)
  --trials T       trial count for experiments
  --epsilon E      perturbation size for the openness probe
  --budget B       rays per level / starts per radius
  --mode M         exact | search | sampled
  --out FILE       write the report there instead of stdout
  --sequential     disable data parallelism (results are identical)";

#[derive(Parser)]
#[command(
    name = "lojnewton",
    version,
    about = "Newton polyhedra at infinity, non-degeneracy and Lojasiewicz exponent probes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "text")]
    text: Vec<String>,
    #[arg(long)]
    json: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exact,
    Search,
    Sampled,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Form {
    /// Every sub-tuple (the default).
    Full,
    /// The whole tuple only.
    Khovanskii,
    /// Augmented rank matrix.
    Augmented,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polyhedron of one polynomial.
    Polyhedron(Common),
    /// Whether the Newton polyhedron meets every coordinate axis.
    Convenient(Common),
    /// All faces, and those with negative covector value.
    Faces(Common),
    /// Non-degeneracy at infinity of a mapping.
    CheckNondegenerate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Form::Full)]
        form: Form,
    },
    /// Monomial reduction of a mapping whose supports are not full-dimensional.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Unimodular completion of covectors nonnegative on a point set.
    CompleteBasis {
        #[command(flatten)]
        common: Common,
        /// Covectors as `a,b;c,d`.
        #[arg(long)]
        covectors: String,
        /// Points as `a,b;c,d`.
        #[arg(long, default_value = "")]
        points: String,
    },
    /// Fit alpha and beta from level-set suprema of |h| on |g| = t.
    FitExponents(Common),
    /// Sample |g|^alpha + |g|^beta >= c |h|.
    VerifyInequality {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Search monomial curves for first- or second-type sequences.
    HuntSequence {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        bound: Option<f64>,
    },
    /// Minimal gradient norm on spheres; a second polynomial with --level adds the constraint h = level.
    KtildeProbe {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "10,100,1000,10000")]
        radii: String,
        #[arg(long)]
        level: Option<f64>,
    },
    /// Multiplier N = 2 (floor(1/alpha) + 1) and sampled h^N / g^2.
    Multiplier {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Non-degeneracy frequency over random coefficients on fixed supports.
    Genericity {
        #[command(flatten)]
        common: Common,
        /// Keep the given coefficients instead of sampling.
        #[arg(long)]
        pinned: bool,
        /// Jitter the given mapping by --epsilon instead.
        #[arg(long)]
        openness: bool,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        hi: f64,
    },
    /// Reproduce the non-convenient example with a second-type sequence.
    ReproduceExample31(Common),
    /// Reproduce the example with exponents 1/2 and 1.
    ReproduceExample32 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        box_samples: Option<usize>,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn infer_vars(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 1;
    for (i, b) in bytes.iter().enumerate() {
        if *b == b'x' {
            let digits: String = text[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(k);
            }
        }
    }
    best
}

fn read_json_input(arg: &str) -> Result<Vec<Polynomial>, Failure> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| usage(format!("cannot read {arg}: {e}")))?
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON: {e}")))?;
    let items = match value {
        serde_json::Value::Array(v) => v,
        serde_json::Value::Object(ref m) if m.contains_key("components") => match &m["components"] {
            serde_json::Value::Array(v) => v.clone(),
            _ => return Err(usage("\"components\" must be a list")),
        },
        other => vec![other],
    };
    items
        .into_iter()
        .map(|v| serde_json::from_value(v).map_err(|e| usage(format!("invalid polynomial JSON: {e}"))))
        .collect()
}

impl Common {
    fn polys(&self) -> Result<Vec<Polynomial>, Failure> {
        let n = self
            .n
            .unwrap_or_else(|| self.text.iter().map(|t| infer_vars(t)).max().unwrap_or(1));
        let mut out = self
            .text
            .iter()
            .map(|t| parse_polynomial(t, n).map_err(Failure::from))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(j) = &self.json {
            out.extend(read_json_input(j)?);
        }
        if out.is_empty() {
            return Err(usage("no input polynomial: pass --text or --json"));
        }
        Ok(out)
    }

    fn exactly(&self, count: usize) -> Result<Vec<Polynomial>, Failure> {
        let p = self.polys()?;
        if p.len() != count {
            return Err(usage(format!("expected {count} polynomial(s), got {}", p.len())));
        }
        Ok(p)
    }

    fn config(&self) -> RunConfig {
        let d = RunConfig::default();
        RunConfig {
            seed: self.seed,
            budget: self.budget.unwrap_or(d.budget),
            trials: self.trials.unwrap_or(d.trials),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            mode: match self.mode {
                Some(Mode::Search) => CheckMode::Search,
                Some(Mode::Sampled) => CheckMode::Sampled,
                _ => CheckMode::Exact,
            },
            out: self.out.as_ref().map(|p| p.display().to_string()),
            exec: if self.sequential {
                Exec::Sequential
            } else {
                Exec::Parallel
            },
            ..d
        }
    }
}

fn report<T: Serialize>(command: &str, cfg: &RunConfig, inputs: &[Polynomial], result: T) -> String {
    let refs: Vec<&Polynomial> = inputs.iter().collect();
    Report::new(command, cfg, &refs, result).to_json()
}

fn parse_int_rows(s: &str, n: usize, what: &str) -> Result<Vec<Vec<i64>>, Failure> {
    s.split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|row| {
            let v = row
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| usage(format!("bad {what} entry in {row:?}: {e}")))?;
            if v.len() != n {
                return Err(usage(format!("{what} {row:?} needs {n} entries")));
            }
            Ok(v)
        })
        .collect()
}

fn run(command: Command) -> Result<(String, Option<PathBuf>), Failure> {
    let out_path = match &command {
        Command::Polyhedron(c) | Command::Convenient(c) | Command::Faces(c) | Command::FitExponents(c) => c.out.clone(),
        Command::ReproduceExample31(c) => c.out.clone(),
        Command::CheckNondegenerate { common, .. }
        | Command::Reduce { common, .. }
        | Command::CompleteBasis { common, .. }
        | Command::VerifyInequality { common, .. }
        | Command::HuntSequence { common, .. }
        | Command::KtildeProbe { common, .. }
        | Command::Multiplier { common, .. }
        | Command::Genericity { common, .. }
        | Command::ReproduceExample32 { common, .. } => common.out.clone(),
    };
    Ok((dispatch(command)?, out_path))
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Polyhedron(c) => {
            let p = c.exactly(1)?;
            let poly = p[0].newton_polyhedron()?;
            Ok(report("polyhedron", &c.config(), &p, poly.to_json()))
        }
        Command::Convenient(c) => {
            let p = c.exactly(1)?;
            let poly = p[0].newton_polyhedron()?;
            let result = json!({ "convenient": poly.is_convenient(), "vertices": poly.vertices() });
            Ok(report("convenient", &c.config(), &p, result))
        }
        Command::Faces(c) => {
            let p = c.exactly(1)?;
            let poly = p[0].newton_polyhedron()?;
            let faces: Vec<_> = face_lattice(&poly)
                .into_iter()
                .map(|idx| idx.iter().map(|&i| poly.vertices()[i].clone()).collect::<Vec<_>>())
                .collect();
            let negative: Vec<_> = match enumerate_negative_face_tuples(std::slice::from_ref(&poly)) {
                Ok(t) => t
                    .into_iter()
                    .map(|t| json!({ "witness_q": t.witness_q, "d": t.degrees[0], "points": t.faces[0].points() }))
                    .collect(),
                Err(Error::DimensionTooLarge(_)) => Vec::new(),
                Err(e) => return Err(e.into()),
            };
            let result = json!({ "dimension": poly.dimension(), "faces": faces, "negative_faces": negative });
            Ok(report("faces", &c.config(), &p, result))
        }
        Command::CheckNondegenerate { common, form } => {
            let p = common.polys()?;
            let cfg = common.config();
            let f = PolynomialMapping::new(p.clone())?;
            let opts = cfg.check_options();
            let r = match form {
                Form::Full => nondegenerate_at_infinity(&f, &opts)?,
                Form::Khovanskii => khovanskii_check(&f, &opts)?,
                Form::Augmented => augmented_check(&f, &opts)?,
            };
            Ok(report("check-nondegenerate", &cfg, &p, r))
        }
        Command::Reduce { common, samples } => {
            let p = common.polys()?;
            let cfg = common.config();
            let r = reduce_mapping(&PolynomialMapping::new(p.clone())?)?;
            let v = verify_reduction(&r, samples, cfg.seed, cfg.exec);
            Ok(report("reduce", &cfg, &p, r.to_json(Some(v))))
        }
        Command::CompleteBasis {
            common,
            covectors,
            points,
        } => {
            let cfg = common.config();
            let n = common.n.ok_or_else(|| usage("complete-basis needs --n"))?;
            let q = parse_int_rows(&covectors, n, "covector")?;
            let s = parse_int_rows(&points, n, "point")?;
            let (basis, steps) = unimodular_complete_traced(n, &q, &s)?;
            let result = json!({ "basis": basis.rows(), "det": basis.det(), "descent": steps });
            Ok(report("complete-basis", &cfg, &[], result))
        }
        Command::FitExponents(c) => {
            let p = c.exactly(2)?;
            let cfg = c.config();
            let fit = fit_exponents(
                &p[0],
                &p[1],
                &FitConfig {
                    mu: MuConfig {
                        budget: cfg.budget,
                        seed: cfg.seed,
                        exec: cfg.exec,
                    },
                    ..FitConfig::default()
                },
            )?;
            Ok(report("fit-exponents", &cfg, &p, fit))
        }
        Command::VerifyInequality {
            common,
            alpha,
            beta,
            c,
            samples,
        } => {
            let p = common.exactly(2)?;
            let mut cfg = common.config();
            cfg.box_samples = samples;
            let sampler = SamplerConfig {
                box_samples: samples,
                box_half_width: cfg.box_half_width,
                seed: cfg.seed,
                exec: cfg.exec,
                ..SamplerConfig::default()
            };
            let r = verify_inequality(&p[0], &p[1], alpha, beta, c, &sampler)?;
            Ok(report("verify-inequality", &cfg, &p, r))
        }
        Command::HuntSequence {
            common,
            kind,
            delta,
            bound,
        } => {
            let p = common.exactly(2)?;
            let mut cfg = common.config();
            cfg.delta = delta.unwrap_or(cfg.delta);
            cfg.g_bound = bound;
            let kind = match kind {
                Kind::First => SequenceKind::FirstType,
                Kind::Second => SequenceKind::SecondType,
            };
            let hc = HuntConfig {
                exponent_bound: cfg.exponent_bound,
                delta: cfg.delta,
                bound: cfg.g_bound,
                seed: cfg.seed,
                exec: cfg.exec,
                ..HuntConfig::default()
            };
            let r = hunt_sequences(&p[0], &p[1], kind, &hc);
            Ok(report("hunt-sequence", &cfg, &p, r))
        }
        Command::KtildeProbe { common, radii, level } => {
            let p = common.polys()?;
            let cfg = common.config();
            let radii: Vec<f64> = radii
                .split(',')
                .map(|r| r.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| usage(format!("bad --radii: {e}")))?;
            let constraint = match (p.len(), level) {
                (1, None) => None,
                (2, Some(r)) => Some((&p[1], r)),
                (2, None) => return Err(usage("a constraint polynomial needs --level")),
                _ => return Err(usage("ktilde-probe takes f, or f and h with --level")),
            };
            let kc = KtildeConfig {
                budget: common.budget.unwrap_or(KtildeConfig::default().budget),
                seed: cfg.seed,
                exec: cfg.exec,
            };
            let r = ktilde_probe(&p[0], constraint, &radii, &kc)?;
            Ok(report("ktilde-probe", &cfg, &p, r))
        }
        Command::Multiplier { common, alpha, samples } => {
            let p = common.exactly(2)?;
            let mut cfg = common.config();
            cfg.multiplier_samples = samples;
            let r = multiplier(
                &p[0],
                &p[1],
                alpha,
                &MultiplierConfig {
                    samples,
                    radius: 1.0,
                    seed: cfg.seed,
                    exec: cfg.exec,
                },
            )?;
            Ok(report("multiplier", &cfg, &p, r))
        }
        Command::Genericity {
            common,
            pinned,
            openness,
            lo,
            hi,
        } => {
            let p = common.polys()?;
            let cfg = common.config();
            let f = PolynomialMapping::new(p.clone())?;
            let opts = cfg.check_options();
            if openness {
                let r = openness_probe(&f, cfg.epsilon, cfg.trials, cfg.seed, &opts)?;
                return Ok(report("genericity", &cfg, &p, r));
            }
            let (supports, sampler) = if pinned {
                let supports: Vec<Vec<Vec<i64>>> = p.iter().map(Polynomial::support_i64).collect();
                let coefficients = p
                    .iter()
                    .map(|q| q.coefficients().iter().map(ToString::to_string).collect())
                    .collect();
                (supports, Sampler::Pinned { coefficients })
            } else {
                (lattice_supports(&f)?, Sampler::Uniform { lo, hi })
            };
            let trials = if pinned { common.trials.unwrap_or(1) } else { cfg.trials };
            let mut stats = genericity_trial(&supports, &sampler, trials, cfg.seed, &opts)?;
            for inst in &stats.degenerate_instances {
                let coeffs = inst
                    .coefficients
                    .iter()
                    .map(|c| c.iter().map(|s| s.parse().expect("stored rational")).collect())
                    .collect::<Vec<_>>();
                let replay = nondegenerate_at_infinity(&instance_mapping(&supports, &coeffs)?, &opts)?;
                if replay.verdict != lojnewton::nondegeneracy::Verdict::Degenerate {
                    return Err(Failure::Internal(format!(
                        "trial {} did not replay as degenerate",
                        inst.trial
                    )));
                }
            }
            stats.trials = trials;
            let mut cfg = cfg;
            cfg.trials = trials;
            Ok(report("genericity", &cfg, &p, stats))
        }
        Command::ReproduceExample31(c) => {
            let cfg = c.config();
            let r = reproduce_example31(&cfg)?;
            let inputs = [r.g.clone(), r.h.clone()];
            Ok(report("reproduce-example31", &cfg, &inputs, r))
        }
        Command::ReproduceExample32 { common, box_samples } => {
            let mut cfg = common.config();
            cfg.box_samples = box_samples.unwrap_or(cfg.box_samples);
            let r = reproduce_example32(&cfg)?;
            let inputs = [r.g.clone(), r.h.clone()];
            Ok(report("reproduce-example32", &cfg, &inputs, r))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}\nPolynomial grammar:\n{GRAMMAR}\n\n{FLAGS}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok((text, None)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok((text, Some(path))) => match fs::write(&path, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                ExitCode::from(2)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nPolynomial grammar:\n{GRAMMAR}\n\n{FLAGS}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
