mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use report::{Cell, Report, Table};
use twopoint::io::{kernel_from_file, parse_coeff_file, zonal_from_file, CoeffFile};
use twopoint::mercer::{decay_verdict_holder, decay_verdict_sobolev, example_kernel, holder_exponent};
use twopoint::multiplier::{
    gen_shift_multipliers, marcinkiewicz_bound, marcinkiewicz_order, proof_sequences, DefectEngine,
};
use twopoint::random::random_zonal;
use twopoint::scalar::geomspace;
use twopoint::smoothness::{equivalence_report, ReportOptions, REPORT_COLUMNS};
use twopoint::verify::{holder_t_grid, run_all, run_criterion, CriterionOutcome};
use twopoint::{catalog, Family, JacobiIndex, SpaceId, SpaceParams64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Spectral approximation reports on compact two-point homogeneous spaces.
#[derive(Debug, Parser, Serialize)]
#[command(name = "twopoint", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Seed for random test functions.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel sweeps (0 = rayon default).
    #[arg(long, global = true, env = "TWOPOINT_THREADS", default_value_t = 0)]
    #[serde(skip)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Catalog parameters and harmonic dimensions.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Jacobi polynomials.
    #[command(subcommand)]
    Jacobi(JacobiCmd),
    /// Zonal functions.
    #[command(subcommand)]
    Fn(FnCmd),
    /// Multiplier sequences.
    #[command(subcommand)]
    Mult(MultCmd),
    /// K-functional equivalence reports.
    #[command(subcommand)]
    Kfunc(KfuncCmd),
    /// Mercer kernels.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Run the acceptance suite.
    VerifyAll {
        /// Restrict to the given criteria.
        #[arg(long = "criterion")]
        criteria: Vec<u32>,
    },
}

#[derive(Debug, Args, Serialize)]
struct SpaceArgs {
    /// sphere, real-projective, complex-projective, quaternion-projective, cayley
    #[arg(long)]
    family: String,
    #[arg(long)]
    m: u32,
}

impl SpaceArgs {
    fn params(&self) -> Result<SpaceParams64> {
        let family: Family = self.family.parse()?;
        Ok(catalog(SpaceId::new(family, self.m)?))
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SpaceCmd {
    Info {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 16)]
        kmax: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum JacobiCmd {
    /// P_k and the normalized Q_k = P_k / P_k(1) at x for every degree up to k.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long)]
        k: u64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Coefficients c_{k,v} of Q_k(cos θ) = Σ_v c_{k,v} cos(vθ).
    CosineCoeffs {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long)]
        k: u64,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FnCmd {
    /// L^p norm of a zonal function (p may be `inf`).
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        #[serde(serialize_with = "real_or_label")]
        p: f64,
    },
    /// Seeded random zonal function with coefficients g_k (1+k)^{-decay}.
    Random {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[arg(long, default_value_t = 2.0)]
        decay: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Which {
    Mu1,
    Mu2,
    Mu3,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MultCmd {
    /// Generalized-shift multipliers per degree.
    Table {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        kmax: usize,
    },
    /// Dyadic-block statistics of the proof multiplier sequences.
    Marcinkiewicz {
        #[arg(long, value_enum)]
        which: Which,
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 10)]
        jmax: u32,
        /// Difference order; defaults to floor(m/2) + 1.
        #[arg(long)]
        s: Option<usize>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KfuncCmd {
    Report {
        #[arg(long = "fn")]
        input: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.01)]
        tmin: f64,
        #[arg(long, default_value_t = 1.0)]
        tmax: f64,
        #[arg(long, default_value_t = 32)]
        points: usize,
        /// Constant in the realization multiplier cutoff.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DecayMode {
    Holder,
    Sobolev,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KernelCmd {
    /// Eigenvalue decay verdict.
    Decay {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: DecayMode,
        /// Hölder exponent; estimated from the kernel when omitted.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
    },
    /// Kolmogorov n-width κ_n = sqrt(λ_{n+1}).
    Nwidth {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: u64,
    },
    /// Kernel with eigenvalue coefficients decaying like n^{-m(1+ε)-2r+1}.
    Example {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        kmax: usize,
    },
}

/// Non-finite values are written as labels since JSON has no infinity.
fn real_or_label<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(if v.is_nan() { "nan" } else if *v > 0.0 { "inf" } else { "-inf" })
    }
}

/// A rendered report plus the criteria that failed, if any.
struct Outcome {
    report: Report,
    failures: Vec<String>,
    raw_json: Option<String>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Self {
            report,
            failures: Vec::new(),
            raw_json: None,
        }
    }
}

fn read_coeff_file(path: &PathBuf) -> Result<CoeffFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_coeff_file(&text)?)
}

fn run(cli: &Cli) -> Result<Outcome> {
    Ok(match &cli.command {
        Command::Space(SpaceCmd::Info { space, kmax }) => {
            let sp = space.params()?;
            let mut t = Table::new(&["k", "eigenvalue", "d_k", "D_k"]);
            let cum = sp.cumulative_dims_real(*kmax);
            for k in 0..=*kmax {
                t.push(vec![
                    k.into(),
                    sp.laplace_eigenvalue(k as u64).into(),
                    sp.harmonic_dim_real(k as u64).into(),
                    cum[k].into(),
                ]);
            }
            Report::new()
                .field("space", sp.id)
                .field("sigma", sp.sigma)
                .field("rho", sp.rho)
                .field("alpha", sp.alpha)
                .field("beta", sp.beta)
                .with_table("degrees", t)
                .into()
        }
        Command::Jacobi(JacobiCmd::Eval { alpha, beta, k, x }) => {
            let idx = JacobiIndex::new(*alpha, *beta)?;
            let mut t = Table::new(&["k", "x", "P_k", "Q_k"]);
            for n in 0..=*k {
                t.push(vec![n.into(), (*x).into(), idx.p(n, *x)?.into(), idx.q(n, *x).into()]);
            }
            Report::new().with_table("values", t).into()
        }
        Command::Jacobi(JacobiCmd::CosineCoeffs { alpha, beta, k }) => {
            let idx = JacobiIndex::new(*alpha, *beta)?;
            let mut t = Table::new(&["v", "c_kv"]);
            for (v, c) in idx.cosine_coeffs(*k)?.into_iter().enumerate() {
                t.push(vec![v.into(), c.into()]);
            }
            Report::new().field("k", k).with_table("coeffs", t).into()
        }
        Command::Fn(FnCmd::Norm { input, p }) => {
            let f = zonal_from_file(&read_coeff_file(input)?)?;
            Report::new()
                .field("space", f.space.id)
                .field("kmax", f.kmax())
                .field("p", if p.is_finite() { serde_json::json!(p) } else { serde_json::json!("inf") })
                .field("norm", f.lp_norm(*p)?)
                .into()
        }
        Command::Fn(FnCmd::Random { space, kmax, index, decay }) => {
            let sp = space.params()?;
            let f = random_zonal(&sp, *kmax, cli.seed, *index, *decay);
            let file = CoeffFile::new(sp.id, f.coeffs);
            Outcome {
                raw_json: Some(serde_json::to_string_pretty(&file)? + "\n"),
                ..Report::new().into()
            }
        }
        Command::Mult(MultCmd::Table { space, r, t, kmax }) => {
            let sp = space.params()?;
            let mu = gen_shift_multipliers(&sp, *r, *t, *kmax)?;
            let defect = DefectEngine::new(&sp, *kmax).defect(*r, *t);
            let q = sp.jacobi().q_table(*kmax, t.cos());
            let mut table = Table::new(&["k", "Q_k", "m_r", "one_minus_m_r", "ratio_kt_2r"]);
            for k in 0..=*kmax {
                let kt = k as f64 * t;
                let ratio = if k == 0 { None } else { Some(defect[k] / kt.powi(2 * *r as i32)) };
                table.push(vec![k.into(), q[k].into(), mu.values[k].into(), defect[k].into(), ratio.into()]);
            }
            Report::new()
                .field("space", sp.id)
                .field("notes", &mu.notes)
                .with_table("multipliers", table)
                .into()
        }
        Command::Mult(MultCmd::Marcinkiewicz { which, space, r, t, a, jmax, s }) => {
            let sp = space.params()?;
            let s = s.unwrap_or_else(|| marcinkiewicz_order(sp.m));
            let kmax = (1usize << (jmax + 1)) + s;
            let seqs = proof_sequences(&sp, *r, *t, *a, kmax)?;
            let mu = match which {
                Which::Mu1 => &seqs.mu1,
                Which::Mu2 => &seqs.mu2,
                Which::Mu3 => &seqs.mu3,
            };
            let rep = marcinkiewicz_bound(mu, s, *jmax)?;
            let mut table = Table::new(&["j", "block"]);
            for (j, b) in rep.blocks.iter().enumerate() {
                table.push(vec![j.into(), (*b).into()]);
            }
            Report::new()
                .field("space", sp.id)
                .field("sequence", &mu.label)
                .field("s", rep.s)
                .field("sup_abs", rep.sup_abs)
                .field("bound", rep.bound)
                .field("notes", &mu.notes)
                .with_table("blocks", table)
                .into()
        }
        Command::Kfunc(KfuncCmd::Report { input, r, p, tmin, tmax, points, a }) => {
            let f = zonal_from_file(&read_coeff_file(input)?)?;
            if !(tmin > &0.0 && tmax > tmin) || *points < 2 {
                bail!("need 0 < tmin < tmax and at least two points");
            }
            let grid = geomspace(*tmin, *tmax, *points);
            let opts = ReportOptions { a: *a, ..ReportOptions::default() };
            let rep = equivalence_report(&f, *r, &grid, *p, &opts)?;
            let mut headers = vec!["t"];
            headers.extend(REPORT_COLUMNS.iter().copied());
            let mut table = Table::new(&headers);
            for (i, t) in rep.t_grid.iter().enumerate() {
                let mut row: Vec<Cell> = vec![(*t).into()];
                for name in REPORT_COLUMNS {
                    row.push(rep.column(name).and_then(|c| c.values[i]).into());
                }
                table.push(row);
            }
            Report::new()
                .field("space", f.space.id)
                .field("order", 2 * r)
                .field("spreads", &rep.spreads)
                .with_table("rows", table)
                .into()
        }
        Command::Kernel(KernelCmd::Decay { input, mode, beta, r }) => {
            let (kernel, warnings) = kernel_from_file(&read_coeff_file(input)?)?;
            let mut report = Report::new().field("space", kernel.space.id).field("warnings", &warnings);
            let decay = match mode {
                DecayMode::Holder => {
                    let beta = match beta {
                        Some(b) => *b,
                        None => {
                            let est = holder_exponent(&kernel, &holder_t_grid())?;
                            report = report.field("holder_estimate", &est);
                            est.beta.context("Hölder exponent could not be estimated")?
                        }
                    };
                    report = report.field("beta", beta);
                    decay_verdict_holder(&kernel, beta)?
                }
                DecayMode::Sobolev => {
                    let r = r.context("--r is required in sobolev mode")?;
                    report = report.field("r", r);
                    decay_verdict_sobolev(&kernel, r)?
                }
            };
            report.field("decay", &decay).into()
        }
        Command::Kernel(KernelCmd::Nwidth { input, n }) => {
            let (kernel, warnings) = kernel_from_file(&read_coeff_file(input)?)?;
            Report::new()
                .field("space", kernel.space.id)
                .field("warnings", &warnings)
                .field("n", n)
                .field("eigenvalue", kernel.eigenvalue(n + 1)?)
                .field("n_width", kernel.n_width(*n)?)
                .into()
        }
        Command::Kernel(KernelCmd::Example { space, eps, r, kmax }) => {
            let sp = space.params()?;
            let kernel = example_kernel::<f64>(sp.id, *eps, *r, *kmax)?;
            let validation = kernel.validate();
            if !validation.is_valid() {
                bail!("example kernel failed validation: {validation:?}");
            }
            let file = CoeffFile::new(sp.id, kernel.coeffs.clone());
            Outcome {
                raw_json: Some(serde_json::to_string_pretty(&file)? + "\n"),
                ..Report::new().into()
            }
        }
        Command::VerifyAll { criteria } => {
            let outcomes: Vec<CriterionOutcome> = if criteria.is_empty() {
                run_all(cli.seed)
            } else {
                criteria
                    .iter()
                    .map(|&id| run_criterion(id, cli.seed))
                    .collect::<twopoint::Result<_>>()?
            };
            let failures = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| format!("criterion {} ({})", o.id, o.name))
                .collect();
            let mut table = Table::new(&["criterion", "name", "passed", "summary"]);
            for o in &outcomes {
                table.push(vec![
                    u64::from(o.id).into(),
                    o.name.as_str().into(),
                    if o.passed { "true" } else { "false" }.into(),
                    o.summary.as_str().into(),
                ]);
            }
            let all = outcomes.iter().all(|o| o.passed);
            let report = match cli.format {
                Format::Json => Report::new().field("all_passed", all).field("criteria", &outcomes),
                Format::Csv => Report::new().field("all_passed", all).with_table("criteria", table),
            };
            Outcome {
                report,
                failures,
                raw_json: None,
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let result = run(&cli).and_then(|outcome| {
        let text = match &outcome.raw_json {
            Some(raw) => raw.clone(),
            None => outcome.report.render(cli.format, &serde_json::to_value(&cli)?)?,
        };
        match &cli.out {
            Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(outcome.failures)
    });
    match result {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            eprintln!("failed: {}", failures.join(", "));
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
