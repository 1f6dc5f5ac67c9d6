//! Command-line verbs. [`run_args`] parses an argument list and executes it
//! without touching the process, so the binary is a thin wrapper.
//!
//! Exit codes: 0 on success, 1 when the mathematics refuses (inadmissible
//! parameters, a failed identity, a nonzero residual), 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};

use carlitz_core::carlitz::{
    bracket, carlitz_d, carlitz_l, pochhammer, pochhammer_thakur, BracketIndex, PochhammerMode,
};
use carlitz_core::cauchy::{admissibility_check, cauchy_solve, recommended_imax, residual};
use carlitz_core::hyper::{
    contiguous_check, convergence_bound, hyper_eval, hyper_residual, thakur_residual, HyperParams,
    Identity, ResidualForm,
};
use carlitz_core::opring::{
    fhat_count, gamma_dim, gk_fit, normalize, qh_lower_bound, qh_lower_count, Convention,
    NormalForm, Strategy,
};
use carlitz_core::{FieldRef, PerfSeries, QExp, Valuation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::formats::{
    function_from_text, function_to_text, params_from_text, problem_from_text, FieldConfig,
    FormatError, FunctionDoc, ParamSet,
};
use crate::parse::{parse_normal_form, parse_operator, parse_series, parse_tree, ParseError};
use crate::sampling;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("syntax error: {0}")]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Math(#[from] carlitz_core::Error),
    #[error("{detail}")]
    Failed { reason: &'static str, detail: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(e) | CliError::Format(FormatError::Core(e)) => {
                if e.is_refusal() {
                    1
                } else {
                    2
                }
            }
            CliError::Failed { .. } => 1,
            _ => 2,
        }
    }

    /// Machine-readable reason code.
    pub fn reason(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Syntax(_) => "syntax",
            CliError::Format(FormatError::Core(e)) | CliError::Math(e) => e.code(),
            CliError::Format(FormatError::Literal { .. }) => "syntax",
            CliError::Format(_) => "format",
            CliError::Io { .. } => "io",
            CliError::Failed { reason, .. } => reason,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "carlitz", version, about = "Carlitz calculus over local fields of positive characteristic")]
pub struct Cli {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct FieldArgs {
    /// Carlitz parameter q = p^v.
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// Degree m of the constant field F_(q^m).
    #[arg(long, global = true)]
    pub ext: Option<u32>,
    /// Monic modulus over F_p, coefficients low to high, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    /// Relative precision kept by inexact inversions.
    #[arg(long, global = true)]
    pub prec: Option<i64>,
    /// TOML file with default field settings.
    #[arg(long, global = true, env = "CARLITZ_FIELD_CONFIG")]
    pub field_config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FactorialKind {
    D,
    L,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Direct,
    Recurrent,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ConventionArg {
    Standard,
    Alt,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Convention {
        match c {
            ConventionArg::Standard => Convention::Standard,
            ConventionArg::Alt => Convention::Alt,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Leftmost,
    Rightmost,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormArg {
    Product,
    Gauss,
    Thakur,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Series,
    Operator,
    Function,
}

#[derive(Args, Debug)]
pub struct ParamArgs {
    /// Parameter file (TOML).
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Upper parameter as a series literal; repeatable.
    #[arg(long = "a", allow_hyphen_values = true)]
    pub a: Vec<String>,
    /// Lower parameter as a series literal; repeatable.
    #[arg(long = "b", allow_hyphen_values = true)]
    pub b: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The bracket [n] = x^(q^n) - x, or [inf] = -x.
    Bracket {
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// Carlitz factorials D_n and L_n.
    Factorial {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "d")]
        kind: FactorialKind,
    },
    /// The symbol <a>_m, or Thakur's (alpha)_m with --alpha.
    Pochhammer {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "alpha")]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<i64>,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "recurrent")]
        mode: ModeArg,
    },
    /// Normal form of an operator expression.
    OpNormalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Number of s-variables.
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_enum, default_value = "standard")]
        convention: ConventionArg,
        #[arg(long, value_enum, default_value = "leftmost")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Applies an operator expression to a function file.
    OpApply {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        function: PathBuf,
        #[arg(long, value_enum, default_value = "standard")]
        convention: ConventionArg,
    },
    /// Solves a Cauchy problem file.
    CauchySolve {
        problem: PathBuf,
        #[arg(long)]
        trunc_m: Option<u32>,
        #[arg(long)]
        trunc_i: Option<u32>,
        /// Write the solution here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sums the hypergeometric series at z.
    HyperEval {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 5)]
        top: u32,
    },
    /// Applies the hypergeometric operator to the truncated series.
    HyperResidual {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 5)]
        top: u32,
        #[arg(long, value_enum, default_value = "product")]
        form: FormArg,
    },
    /// Checks a contiguous relation on seeded random parameters. Without
    /// --q the trials alternate between q = 2 and q = 3.
    IdentityCheck {
        /// 5.3 .. 5.8 or the role name (e.g. gauss-shift-up).
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: u32,
        /// Largest index m (symbol relations) or truncation M (function relations).
        #[arg(long, default_value_t = 5)]
        top: u32,
    },
    /// Monomial counts for the filtrations of the operator ring.
    DimCount {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        nu_max: u64,
    },
    /// Prints and reparses a value, or a seeded random batch without TEXT.
    ParseRoundtrip {
        #[arg(allow_hyphen_values = true)]
        text: Option<String>,
        #[arg(long, value_enum, default_value = "series")]
        kind: KindArg,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: u32,
    },
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Output {
    text: String,
    json: Value,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl FieldArgs {
    fn config(&self) -> CliResult<FieldConfig> {
        let base = match &self.field_config {
            Some(path) => FieldConfig::from_toml(&read(path)?)?,
            None => FieldConfig::default(),
        };
        Ok(base.overlay(&FieldConfig {
            q: self.q,
            m: self.ext,
            modulus: self.modulus.clone(),
            prec: self.prec,
            ..Default::default()
        }))
    }
}

fn valuation_text(s: &PerfSeries) -> String {
    match s.valuation() {
        Valuation::Infinite => "inf".into(),
        Valuation::Exact(e) => e.to_string(),
        Valuation::AtLeast(e) => format!(">={}", e),
    }
}

fn series_json(s: &PerfSeries) -> Value {
    json!({
        "value": s.to_string(),
        "valuation": valuation_text(s),
        "precision": s.prec().map(|p| p.to_string()),
    })
}

fn single(s: &PerfSeries) -> Output {
    Output {
        text: s.to_string(),
        json: series_json(s),
    }
}

fn params_of(args: &ParamArgs, config: &FieldConfig) -> CliResult<ParamSet> {
    match &args.params {
        Some(path) => {
            if !args.a.is_empty() || !args.b.is_empty() {
                return Err(CliError::Usage("give --params or --a/--b, not both".into()));
            }
            Ok(params_from_text(&read(path)?, config)?)
        }
        None => {
            let field = config.build()?;
            let parse = |v: &[String]| -> CliResult<Vec<PerfSeries>> {
                v.iter().map(|s| Ok(parse_series(&field, s)?)).collect()
            };
            Ok(ParamSet {
                params: HyperParams::new(&field, parse(&args.a)?, parse(&args.b)?)?,
                integers: None,
            })
        }
    }
}

/// Outcome of an identity sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub id: Identity,
    pub passed: u32,
    pub trials: u32,
    /// Smallest precision margin over the inexact comparisons.
    pub min_significance: Option<QExp>,
    pub failures: Vec<String>,
}

/// Checks `id` on `trials` seeded parameter draws. Symbol relations are
/// checked at every `m <= top` their side conditions allow, function
/// relations coefficient-wise up to `top`. A comparison passes when it
/// holds and, if inexact, its margin is positive.
pub fn identity_sweep(
    id: Identity,
    seed: u64,
    trials: u32,
    top: u32,
    fields: &[FieldRef],
) -> CliResult<SweepReport> {
    let mut rng = sampling::rng(seed);
    let mut report = SweepReport {
        id,
        passed: 0,
        trials,
        min_significance: None,
        failures: Vec::new(),
    };
    let first_m = match id {
        Identity::SymbolShiftDown | Identity::SymbolShiftDownRatio => 1,
        _ => 0,
    };
    for t in 0..trials {
        let field = &fields[t as usize % fields.len()];
        let params = sampling::gauss_params(&mut rng, field, top + 1);
        let indices: Vec<u32> = if id.is_function_identity() {
            vec![top]
        } else {
            (first_m..=top).collect()
        };
        let mut ok = true;
        for m in indices {
            let v = contiguous_check(id, &params, m)?;
            if let Some(s) = v.significance {
                report.min_significance = Some(report.min_significance.map_or(s, |r: QExp| r.min(s)));
            }
            if !v.holds || v.significance.is_some_and(|s| s <= QExp::ZERO) {
                ok = false;
                report.failures.push(format!(
                    "trial {} (q = {}, m = {}): {}",
                    t,
                    field.q(),
                    m,
                    carlitz_core::hyper::describe(&v)
                ));
            }
        }
        if ok {
            report.passed += 1;
        }
    }
    Ok(report)
}

fn roundtrip_series(field: &FieldRef, text: &str) -> CliResult<(String, bool)> {
    let tree = parse_tree(text)?;
    let v = parse_series(field, text)?;
    let printed = v.to_string();
    let stable = parse_series(field, &printed)? == v && parse_tree(&tree.to_string())? == tree;
    Ok((printed, stable))
}

fn roundtrip_operator(field: &FieldRef, n: usize, text: &str) -> CliResult<(String, bool)> {
    let tree = parse_tree(text)?;
    let v = parse_normal_form(field, n, text, Convention::Standard)?;
    let printed = v.to_string();
    let stable = parse_normal_form(field, n, &printed, Convention::Standard)? == v
        && parse_tree(&tree.to_string())? == tree;
    Ok((printed, stable))
}

/// Prints and reparses `trials` seeded values of each kind; returns the
/// number that survived and the total.
pub fn roundtrip_sweep(seed: u64, trials: u32) -> CliResult<(u32, u32)> {
    let mut rng = sampling::rng(seed);
    let fields: Vec<FieldRef> = [(2, 1), (3, 1), (4, 1), (3, 2)]
        .iter()
        .map(|&(q, m)| FieldConfig { q: Some(q), m: Some(m), ..Default::default() }.build())
        .collect::<Result<_, _>>()?;
    let mut ok = 0;
    for t in 0..trials {
        let field = &fields[t as usize % fields.len()];
        let survived = match t % 3 {
            0 => {
                let mut s = sampling::series(&mut rng, field, 4, -4, 6, 2);
                if t % 2 == 0 {
                    s = &s + &PerfSeries::big_o(field, QExp::int(7));
                }
                parse_series(field, &s.to_string())? == s
            }
            1 => {
                let n = (t as usize / 3) % 3;
                let nf = sampling::normal_form(&mut rng, field, n, Convention::Standard);
                parse_normal_form(field, n, &nf.to_string(), Convention::Standard)? == nf
            }
            _ => {
                let n = (t as usize / 3) % 3;
                let u = sampling::function(&mut rng, field, n, 3);
                function_from_text(&function_to_text(&u), &FieldConfig::default())? == u
            }
        };
        if survived {
            ok += 1;
        }
    }
    Ok((ok, trials))
}

fn execute(cli: &Cli) -> CliResult<Output> {
    let config = cli.field.config()?;
    match &cli.command {
        Command::Bracket { n } => {
            let field = config.build()?;
            let idx = match n.as_str() {
                "inf" | "infinity" | "∞" => BracketIndex::Infinity,
                s => BracketIndex::Finite(
                    s.parse()
                        .map_err(|_| CliError::Usage(format!("--n expects an integer or 'inf', got '{}'", s)))?,
                ),
            };
            Ok(single(&bracket(&field, idx)))
        }
        Command::Factorial { n, kind } => {
            let field = config.build()?;
            Ok(single(&match kind {
                FactorialKind::D => carlitz_d(&field, *n),
                FactorialKind::L => carlitz_l(&field, *n),
            }))
        }
        Command::Pochhammer { a, alpha, m, mode } => {
            let field = config.build()?;
            let v = match (a, alpha) {
                (Some(a), None) => {
                    let mode = match mode {
                        ModeArg::Direct => PochhammerMode::Direct,
                        ModeArg::Recurrent => PochhammerMode::Recurrent,
                    };
                    pochhammer(&parse_series(&field, a)?, *m, mode)
                }
                (None, Some(al)) => pochhammer_thakur(&field, *al, *m)?,
                _ => return Err(CliError::Usage("give exactly one of --a and --alpha".into())),
            };
            Ok(single(&v))
        }
        Command::OpNormalize { expr, n, convention, strategy, seed } => {
            let field = config.build()?;
            let words = parse_operator(&field, *n, expr)?;
            let strategy = match strategy {
                StrategyArg::Leftmost => Strategy::Leftmost,
                StrategyArg::Rightmost => Strategy::Rightmost,
                StrategyArg::Random => Strategy::Random(*seed),
            };
            let nf = normalize(&field, *n, &words, (*convention).into(), strategy)?;
            Ok(normal_form_output(&nf))
        }
        Command::OpApply { expr, function, convention } => {
            let u = function_from_text(&read(function)?, &config)?;
            let nf = parse_normal_form(u.field(), u.n(), expr, (*convention).into())?;
            let out = nf.op_apply(&u)?;
            Ok(Output {
                text: function_to_text(&out),
                json: serde_json::to_value(FunctionDoc::from_function(&out)).expect("serializable"),
            })
        }
        Command::CauchySolve { problem, trunc_m, trunc_i, output } => {
            let prob = problem_from_text(&read(problem)?, &config)?;
            let tm = trunc_m.unwrap_or(prob.trunc_m);
            let ti = trunc_i.unwrap_or(prob.trunc_i);
            let imax = match prob.imax {
                Some(i) => i,
                None => recommended_imax(&prob.equation)?.max(ti),
            };
            let adm = admissibility_check(&prob.equation, imax)?;
            let u = cauchy_solve(&prob.equation, &prob.init, tm, ti)?;
            let res = residual(&prob.equation, &u)?;
            if !res.is_zero_at_prec() {
                return Err(CliError::Failed {
                    reason: "nonzero-residual",
                    detail: format!("residual does not vanish:\n{}", function_to_text(&res)),
                });
            }
            let tuple: Vec<String> = adm.at.iter().map(|t| t.to_string()).collect();
            let body = function_to_text(&u);
            let header = format!(
                "# admissible up to index {}: largest val Q = {} at ({})\n# residual vanishes on the known support\n",
                imax,
                adm.max_valuation,
                tuple.join(", ")
            );
            if let Some(path) = output {
                fs::write(path, &body).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
            }
            let text = match output {
                Some(path) => format!("{}# solution written to {}", header, path.display()),
                None => format!("{}{}", header, body.trim_end()),
            };
            Ok(Output {
                text,
                json: json!({
                    "imax": imax,
                    "max_valuation": adm.max_valuation.to_string(),
                    "attained_at": tuple,
                    "residual_zero": true,
                    "solution": serde_json::to_value(FunctionDoc::from_function(&u)).expect("serializable"),
                }),
            })
        }
        Command::HyperEval { params, z, top } => {
            let set = params_of(params, &config)?;
            let p = &set.params;
            let z = parse_series(p.field(), z)?;
            let v = hyper_eval(p, &z, *top)?;
            let bound = convergence_bound(p)?;
            let mut j = series_json(&v);
            j["threshold"] = json!(bound.threshold.to_string());
            Ok(Output { text: v.to_string(), json: j })
        }
        Command::HyperResidual { params, top, form } => {
            let set = params_of(params, &config)?;
            let p = &set.params;
            let res = match form {
                FormArg::Product => hyper_residual(p, *top, ResidualForm::Product)?,
                FormArg::Gauss => hyper_residual(p, *top, ResidualForm::Gauss)?,
                FormArg::Thakur => {
                    let (al, be) = set.integers.as_ref().ok_or_else(|| {
                        CliError::Usage("the thakur form needs integer parameters alphas, betas".into())
                    })?;
                    thakur_residual(p.field(), al, be, *top)?
                }
            };
            if !res.is_zero_at_prec() {
                return Err(CliError::Failed {
                    reason: "nonzero-residual",
                    detail: format!("residual does not vanish:\n{}", function_to_text(&res)),
                });
            }
            Ok(Output {
                text: format!("residual vanishes for m <= {}", top),
                json: json!({ "residual_zero": true, "top": top }),
            })
        }
        Command::IdentityCheck { id, seed, trials, top } => {
            let id: Identity = id.parse()?;
            let fields: Vec<FieldRef> = match cli.field.q {
                Some(_) => vec![config.build()?],
                None => [2u64, 3]
                    .iter()
                    .map(|&q| config.overlay(&FieldConfig { q: Some(q), ..Default::default() }).build())
                    .collect::<Result<_, _>>()?,
            };
            let r = identity_sweep(id, *seed, *trials, *top, &fields)?;
            let verdict = if r.passed == r.trials { "PASS" } else { "FAIL" };
            let mut text = format!("{} {}/{}", verdict, r.passed, r.trials);
            for f in &r.failures {
                text.push('\n');
                text.push_str(f);
            }
            let json = json!({
                "id": id.name(),
                "seed": seed,
                "trials": r.trials,
                "passed": r.passed,
                "min_significance": r.min_significance.map(|s| s.to_string()),
                "failures": r.failures,
            });
            if r.passed != r.trials {
                return Err(CliError::Failed {
                    reason: "identity-failed",
                    detail: if cli.json { json.to_string() } else { text },
                });
            }
            Ok(Output { text, json })
        }
        Command::DimCount { n, nu_max } => {
            let rows: Vec<[u64; 5]> = (0..=*nu_max)
                .map(|nu| [nu, gamma_dim(*n, nu), qh_lower_count(*n, nu), qh_lower_bound(*n, nu), fhat_count(*n, nu)])
                .collect();
            let fit = |col: usize| gk_fit(&rows.iter().map(|r| (r[0], r[col])).collect::<Vec<_>>());
            let fmt_fit = |d: Option<u32>| d.map_or("none".to_string(), |d| d.to_string());
            let mut text = String::from("nu gamma qh_count qh_bound fhat\n");
            for r in &rows {
                text.push_str(&format!("{} {} {} {} {}\n", r[0], r[1], r[2], r[3], r[4]));
            }
            text.push_str(&format!(
                "degrees: gamma {}, qh_count {}, fhat {}",
                fmt_fit(fit(1)),
                fmt_fit(fit(2)),
                fmt_fit(fit(4))
            ));
            Ok(Output {
                text,
                json: json!({
                    "n": n,
                    "rows": rows.iter().map(|r| json!({
                        "nu": r[0], "gamma": r[1], "qh_count": r[2], "qh_bound": r[3], "fhat": r[4],
                    })).collect::<Vec<_>>(),
                    "degree": { "gamma": fit(1), "qh_count": fit(2), "fhat": fit(4) },
                }),
            })
        }
        Command::ParseRoundtrip { text, kind, n, seed, trials } => match text {
            Some(text) => {
                let (printed, stable) = match kind {
                    KindArg::Series => roundtrip_series(&config.build()?, text)?,
                    KindArg::Operator => roundtrip_operator(&config.build()?, *n, text)?,
                    KindArg::Function => {
                        let u = function_from_text(&read(Path::new(text))?, &config)?;
                        let printed = function_to_text(&u);
                        let stable = function_from_text(&printed, &config)? == u;
                        (printed.trim_end().to_string(), stable)
                    }
                };
                if !stable {
                    return Err(CliError::Failed {
                        reason: "roundtrip-unstable",
                        detail: format!("reparsing '{}' changed the value", printed),
                    });
                }
                Ok(Output {
                    text: printed.clone(),
                    json: json!({ "printed": printed, "stable": true }),
                })
            }
            None => {
                let (ok, total) = roundtrip_sweep(*seed, *trials)?;
                let text = format!("{} {}/{}", if ok == total { "PASS" } else { "FAIL" }, ok, total);
                if ok != total {
                    return Err(CliError::Failed { reason: "roundtrip-unstable", detail: text });
                }
                Ok(Output {
                    text,
                    json: json!({ "seed": seed, "trials": total, "stable": ok }),
                })
            }
        },
    }
}

fn normal_form_output(nf: &NormalForm) -> Output {
    let degree = nf.filtration_degree();
    let linear = nf.is_linear();
    Output {
        text: format!(
            "{}\nfiltration degree: {}\nlinear: {}",
            nf,
            degree.map_or("none".into(), |d| d.to_string()),
            linear
        ),
        json: json!({
            "normal_form": nf.to_string(),
            "terms": nf.num_terms(),
            "filtration_degree": degree,
            "linear": linear,
        }),
    }
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(out) => Outcome {
            code: 0,
            stdout: if cli.json {
                serde_json::to_string_pretty(&json!({ "status": "ok", "result": out.json })).expect("json")
            } else {
                out.text
            },
            stderr: String::new(),
        },
        Err(e) => {
            let code = e.exit_code();
            let status = if code == 1 { "refused" } else { "error" };
            if cli.json {
                Outcome {
                    code,
                    stdout: serde_json::to_string_pretty(&json!({
                        "status": status,
                        "reason": e.reason(),
                        "message": e.to_string(),
                    }))
                    .expect("json"),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: format!("{} [{}]: {}", status, e.reason(), e),
                }
            }
        }
    }
}

/// Parses and executes an argument list (including the program name).
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            }
        }
    }
}
