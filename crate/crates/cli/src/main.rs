use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use restriction_core::asymptotics::{self, FitRow};
use restriction_core::interval::HighPrecisionReal;
use restriction_core::linear::{self, PriorRegistry};
use restriction_core::params::{self, BetaConvention};
use restriction_core::wolff::{self, TrialConfig};
use restriction_core::{broad, Error, Exec};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "restriction", version, about = "Exact restriction-exponent numerology and an incidence lab")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// k-broad exponent p_n(k).
    Broad { n: u32, k: u32 },
    /// Optimal linear exponent in dimension n.
    Linear { n: u32 },
    /// Exponent table against the prior registry.
    Table { n_min: u32, n_max: u32 },
    /// Check the parameter identities at (n, m), or in n at fixed m.
    VerifyParams {
        n: Option<u32>,
        m: Option<u32>,
        /// Verify symbolically in n at depth M.
        #[arg(long, value_name = "M", conflicts_with_all = ["n", "m"])]
        symbolic: Option<u32>,
        /// Degree cap for the symbolic pipeline.
        #[arg(long, default_value_t = params::SYMBOLIC_DEGREE_CAP, requires = "symbolic")]
        degree_cap: usize,
    },
    /// Convergence of n·(p_lin(n) - 2) towards λ.
    Asymptotic {
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 3)]
        n_min: u32,
        /// Arithmetic sweep step; logarithmic checkpoints when absent.
        #[arg(long)]
        step: Option<u32>,
    },
    /// Enclosures of the cubic root, ν and λ.
    Cubic {
        #[arg(long, default_value_t = 64)]
        precision: u32,
    },
    /// Falsification trials from a JSON config.
    Wolff {
        #[arg(long)]
        config: PathBuf,
        /// Write JSON lines here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    /// Bad input or a library error: status 1.
    Usage(String),
    /// A failed identity or a falsification: status 2, with the report.
    Finding(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match run(&cli, exec) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Finding(out)) => {
            print!("{out}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, exec: Exec) -> Outcome {
    let f = cli.format;
    match &cli.command {
        Command::Broad { n, k } => cmd_broad(*n, *k, f),
        Command::Linear { n } => cmd_linear(*n, f),
        Command::Table { n_min, n_max } => cmd_table(*n_min, *n_max, f, exec),
        Command::VerifyParams { n, m, symbolic, degree_cap } => match (symbolic, n, m) {
            (Some(m), _, _) => cmd_verify_symbolic(*m, *degree_cap, f),
            (None, Some(n), Some(m)) => cmd_verify(*n, *m, f),
            _ => Err(Failure::Usage("verify-params needs N M or --symbolic M".into())),
        },
        Command::Asymptotic { n_max, n_min, step } => cmd_asymptotic(*n_min, *n_max, *step, f, exec),
        Command::Cubic { precision } => cmd_cubic(*precision, f),
        Command::Wolff { config, output } => cmd_wolff(config, output.as_ref(), f, exec),
    }
}

fn json_line(v: &serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("values serialize"))
}

fn csv_string(write: impl FnOnce(&mut Vec<u8>) -> restriction_core::Result<()>) -> Result<String, Failure> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    csv_string(|buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    })
}

fn cmd_broad(n: u32, k: u32, f: Format) -> Outcome {
    let b = broad::p_broad(n, k)?;
    let bounds = b.bounds.map(|c| c.holds());
    let out = match f {
        Format::Text => {
            let mut s = format!("p = {}\n", b.p.display_exponent());
            let _ = writeln!(s, "n = {n}, k = {k}");
            let _ = writeln!(s, "product = {}", b.product);
            let _ = writeln!(s, "closed forms agree: {}", b.forms_agree);
            if let Some(ok) = bounds {
                let _ = writeln!(s, "product bounds hold: {ok}");
            }
            s
        }
        Format::Csv => csv_rows(
            &["n", "k", "p_num", "p_den", "product_num", "product_den", "forms_agree"],
            &[vec![
                n.to_string(),
                k.to_string(),
                b.p.numer().to_string(),
                b.p.denom().to_string(),
                b.product.numer().to_string(),
                b.product.denom().to_string(),
                b.forms_agree.to_string(),
            ]],
        )?,
        Format::Json => json_line(&json!({
            "n": n, "k": k,
            "p": b.p.to_string(),
            "p_display": b.p.display_exponent(),
            "product": b.product.to_string(),
            "forms_agree": b.forms_agree,
            "bounds_hold": bounds,
        })),
    };
    if b.certified() {
        Ok(out)
    } else {
        Err(Failure::Finding(out))
    }
}

fn cmd_linear(n: u32, f: Format) -> Outcome {
    let r = linear::linear_exponent(n)?;
    Ok(match f {
        Format::Text => {
            let mut s = format!("p = {}\n", r.p.display_exponent());
            let _ = writeln!(s, "n = {n}, k_opt = {}", r.k_opt);
            let _ = writeln!(s, "p_broad(k_opt) = {}", r.p_broad_at_k.display_exponent());
            let _ = writeln!(s, "p_limit(k_opt) = {}", r.p_limit_at_k.display_exponent());
            let _ = writeln!(s, "upper constraint holds: {}", r.upper_ok);
            if r.tie {
                let _ = writeln!(s, "tie: another k attains the same value");
            }
            s
        }
        Format::Csv => csv_rows(
            &["n", "k_opt", "p_num", "p_den", "upper_ok", "tie"],
            &[vec![
                n.to_string(),
                r.k_opt.to_string(),
                r.p.numer().to_string(),
                r.p.denom().to_string(),
                r.upper_ok.to_string(),
                r.tie.to_string(),
            ]],
        )?,
        Format::Json => json_line(&json!({
            "n": n,
            "k_opt": r.k_opt,
            "p": r.p.to_string(),
            "p_display": r.p.display_exponent(),
            "p_broad_at_k": r.p_broad_at_k.to_string(),
            "p_limit_at_k": r.p_limit_at_k.to_string(),
            "upper_ok": r.upper_ok,
            "tie": r.tie,
        })),
    })
}

fn cmd_table(n_min: u32, n_max: u32, f: Format, exec: Exec) -> Outcome {
    let rows = linear::state_of_art_table(n_min, n_max, &PriorRegistry::standard(), exec)?;
    Ok(match f {
        Format::Text => {
            let mut s = format!("{:>4}  {:<28}  {:<14}  {:<6}  {:>5}\n", "n", "new", "prior", "winner", "k_opt");
            for r in &rows {
                let prior = r.prior.as_ref().map_or("-".to_owned(), |e| e.exponent.display_exponent());
                let _ = writeln!(
                    s,
                    "{:>4}  {:<28}  {:<14}  {:<6}  {:>5}",
                    r.n,
                    r.new_p.display_exponent(),
                    prior,
                    r.winner,
                    r.k_opt
                );
            }
            s
        }
        Format::Csv => csv_string(|buf| linear::write_table_csv(&rows, buf))?,
        Format::Json => json_line(&linear::table_json(&rows)),
    })
}

fn residual_rows(x: &[impl ToString], y: &[impl ToString]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (i, v) in x.iter().enumerate() {
        rows.push(vec!["X".to_owned(), (i + 1).to_string(), v.to_string()]);
    }
    for (i, v) in y.iter().enumerate() {
        rows.push(vec!["Y".to_owned(), (i + 1).to_string(), v.to_string()]);
    }
    rows
}

fn cmd_verify(n: u32, m: u32, f: Format) -> Outcome {
    let rep = params::verify_identities(n, m)?;
    let out = match f {
        Format::Text => {
            let mut s = format!("n = {n}, m = {m}\n");
            let _ = writeln!(s, "p_0 = {}", rep.p0().display_exponent());
            for c in BetaConvention::ALL {
                let chk = rep.check(c);
                let _ = writeln!(s, "{} convention: residuals all zero = {}", c.name(), chk.all_zero);
            }
            let _ = writeln!(s, "p_0 closed form matches: {}", rep.p0_closed_form_match);
            let _ = writeln!(s, "weight invariants hold: {}", rep.gamma_invariants);
            let _ = writeln!(s, "deepest exponent consistent: {}", rep.pm_consistent);
            for note in &rep.notes {
                let _ = writeln!(s, "note: {note}");
            }
            s
        }
        Format::Csv => csv_rows(&["kind", "index", "residual"], &residual_rows(&rep.reciprocal.residuals.x, &rep.reciprocal.residuals.y))?,
        Format::Json => json_line(&rep.to_json()),
    };
    if rep.ok() {
        Ok(out)
    } else {
        Err(Failure::Finding(out))
    }
}

fn cmd_verify_symbolic(m: u32, cap: usize, f: Format) -> Outcome {
    let rep = params::verify_identities_symbolic(m, cap)?;
    let out = match f {
        Format::Text => {
            let mut s = format!("m = {m}, valid for n > {}\n", rep.validity_threshold);
            let _ = writeln!(s, "p_0(n) = {}", rep.p0());
            let _ = writeln!(s, "reciprocal convention: residuals identically zero = {}", rep.reciprocal.all_zero);
            let _ = writeln!(s, "printed convention: residuals identically zero = {}", rep.printed.all_zero);
            let _ = writeln!(s, "p_0 closed form matches: {}", rep.p0_closed_form_match);
            let _ = writeln!(s, "weight invariants certified: {}", rep.gamma_invariants);
            let _ = writeln!(s, "no poles for n > {}: {}", rep.validity_threshold, rep.validity_certified);
            let _ = writeln!(s, "max degree: {}", rep.max_degree);
            for note in &rep.notes {
                let _ = writeln!(s, "note: {note}");
            }
            s
        }
        Format::Csv => csv_rows(&["kind", "index", "residual"], &residual_rows(&rep.reciprocal.residuals.x, &rep.reciprocal.residuals.y))?,
        Format::Json => json_line(&rep.to_json()),
    };
    if rep.ok() {
        Ok(out)
    } else {
        Err(Failure::Finding(out))
    }
}

fn cmd_asymptotic(n_min: u32, n_max: u32, step: Option<u32>, f: Format, exec: Exec) -> Outcome {
    if n_min > n_max {
        return Err(Failure::Usage(format!("empty range {n_min}..={n_max}")));
    }
    let ns = match step {
        Some(s) => asymptotics::stepped(n_min, n_max, s),
        None => asymptotics::log_checkpoints(n_min, n_max),
    };
    let rows: Vec<FitRow> = asymptotics::fit_points(&ns, exec)?;
    let consts = asymptotics::nu_lambda(64)?;
    Ok(match f {
        Format::Text => {
            let mut s = format!("lambda in {}\nnu in {}\n", consts.lambda, consts.nu);
            let d = asymptotics::DEVIATION_DIGITS;
            let _ = writeln!(s, "{:>7}  {:>7}  {:>16}  {:>16}  {:>16}", "n", "k_opt", "gap", "|gap - lambda|", "|k/n - nu|");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>7}  {:>7}  {:>16}  {:>16}  {:>16}",
                    r.n,
                    r.k_opt,
                    r.gap.to_decimal_string(d),
                    r.deviation.to_decimal_string(d),
                    r.k_ratio_deviation.to_decimal_string(d)
                );
            }
            s
        }
        Format::Csv => csv_string(|buf| asymptotics::write_fit_csv(&rows, buf))?,
        Format::Json => json_line(&asymptotics::fit_json(&rows)),
    })
}

fn interval_json(x: &HighPrecisionReal) -> serde_json::Value {
    json!({
        "lower": x.lower().to_string(),
        "upper": x.upper().to_string(),
        "lower_decimal": x.lower().to_decimal_string(20),
        "upper_decimal": x.upper().to_decimal_string(20),
    })
}

fn cmd_cubic(precision: u32, f: Format) -> Outcome {
    let newton = asymptotics::solve_cubic(precision)?;
    let cardano = asymptotics::cardano_root(precision)?;
    let c = asymptotics::nu_lambda(precision)?;
    let agree = newton.intersects(&cardano) && c.consistent;
    let digits = (precision as usize * 3 / 10).max(1);
    let out = match f {
        Format::Text => {
            let mut s = format!("precision = {precision} bits\n");
            let _ = writeln!(s, "root (Newton)  in {newton}");
            let _ = writeln!(s, "root (Cardano) in {cardano}");
            let _ = writeln!(s, "enclosures intersect: {}", newton.intersects(&cardano));
            let _ = writeln!(s, "nu     in {}", c.nu);
            let _ = writeln!(s, "lambda in {}", c.lambda);
            let _ = writeln!(s, "6/(2 + nu^(3/2)) agrees with 4/(2 - nu): {}", c.consistent);
            s
        }
        Format::Csv => {
            let row = |name: &str, x: &HighPrecisionReal| {
                vec![
                    name.to_owned(),
                    x.lower().to_decimal_string(digits),
                    x.upper().to_decimal_string(digits),
                    precision.to_string(),
                ]
            };
            csv_rows(
                &["quantity", "lower", "upper", "precision_bits"],
                &[row("root_newton", &newton), row("root_cardano", &cardano), row("nu", &c.nu), row("lambda", &c.lambda)],
            )?
        }
        Format::Json => json_line(&json!({
            "precision_bits": precision,
            "root_newton": interval_json(&newton),
            "root_cardano": interval_json(&cardano),
            "intersect": newton.intersects(&cardano),
            "nu": interval_json(&c.nu),
            "lambda": interval_json(&c.lambda),
            "consistent": c.consistent,
        })),
    };
    if agree {
        Ok(out)
    } else {
        Err(Failure::Finding(out))
    }
}

fn cmd_wolff(config: &PathBuf, output: Option<&PathBuf>, f: Format, exec: Exec) -> Outcome {
    let text = std::fs::read_to_string(config).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
    let cfg = TrialConfig::from_json(&text)?;
    let reports = wolff::run_suite(&cfg, exec)?;
    let violated = reports.iter().filter(|r| r.violated).count();
    let lines = csv_string(|buf| wolff::write_json_lines(&reports, buf))?;
    let body = match f {
        Format::Json => lines.clone(),
        Format::Csv => csv_rows(
            &["seed", "lines", "count", "bound", "ratio", "violated", "precision"],
            &reports
                .iter()
                .map(|r| {
                    vec![
                        r.seed.to_string(),
                        r.lines.to_string(),
                        r.count.to_string(),
                        r.bound.to_string(),
                        r.ratio.to_string(),
                        r.violated.to_string(),
                        r.precision.clone(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Text => {
            let mut s = format!("n = {}, m = {}, R = {}, C = {}, eps = {}\n", cfg.n, cfg.m, cfg.big_r, cfg.c, cfg.eps);
            let _ = writeln!(s, "{:>8}  {:>8}  {:>8}  {:>14}  {:>10}  violated", "seed", "lines", "count", "bound", "ratio");
            for r in &reports {
                let _ = writeln!(s, "{:>8}  {:>8}  {:>8}  {:>14.4}  {:>10.6}  {}", r.seed, r.lines, r.count, r.bound, r.ratio, r.violated);
            }
            let max = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
            let _ = writeln!(s, "trials = {}, violated = {violated}, max ratio = {max:.6}", reports.len());
            s
        }
    };
    let out = match output {
        Some(path) => {
            std::fs::write(path, &lines).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            if f == Format::Json {
                String::new()
            } else {
                body
            }
        }
        None => body,
    };
    if violated > 0 {
        Err(Failure::Finding(out))
    } else {
        Ok(out)
    }
}
