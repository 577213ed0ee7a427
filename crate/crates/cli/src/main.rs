use std::io::Write;
use std::process::ExitCode;

use bergman_dbar::dbar::{
    compose_solution, dbar_apply, integral_solution_eval, multiplier_solution_scaled, pullback_01, Form01,
};
use bergman_dbar::expr::{parse_form, parse_map, parse_point, parse_symbol};
use bergman_dbar::hs::{
    disc_kernel_l2_bound, hs_partial_sum, kernel_l2_integral, pairwise_orthogonality, poisson_check,
    sweep_diverges, DEFAULT_RHO_SWEEP, TWO_PI,
};
use bergman_dbar::kernels::{basis_sum_kernel, bergman_kernel};
use bergman_dbar::projection::{bergman_project_quadrature, bergman_project_scaled};
use bergman_dbar::verify::{representation_settings, run_suite};
use bergman_dbar::{Domain, Error, QuadratureSpec, Scaled};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

const SCHEMA: &str = "bergman-dbar/1";

#[derive(Parser)]
#[command(name = "bergman-dbar", version, about = "Canonical dbar solutions on the disc, bidisc and ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Bergman kernel B(z, w).
    Kernel {
        #[arg(long, default_value = "disc")]
        domain: Domain,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Second point; defaults to z.
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        /// Also report the basis expansion truncated at this total degree.
        #[arg(long)]
        basis_degree: Option<u32>,
    },
    /// Bergman projection of a symbol, exact or by quadrature at a point.
    Project {
        #[arg(long, default_value = "disc")]
        domain: Domain,
        #[arg(long, allow_hyphen_values = true)]
        symbol: String,
        #[arg(long)]
        exact: bool,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Canonical solution of dbar u = g for a (0,1)-form "g1; g2".
    Solve {
        #[arg(long, default_value = "disc")]
        domain: Domain,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Apply dbar to a symbol.
    Dbar {
        #[arg(long, default_value = "disc")]
        domain: Domain,
        #[arg(long, allow_hyphen_values = true)]
        symbol: String,
    },
    /// Check dbar(u o F) = F*g for u the canonical solution of g.
    Pullback {
        #[arg(long, default_value = "disc")]
        domain: Domain,
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Exact Hilbert-Schmidt partial sum over all indices with entries <= N.
    HsSum {
        #[arg(long, default_value = "disc")]
        domain: Domain,
        #[arg(long)]
        max_degree: u32,
        /// JSON output (the default).
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
    },
    /// Monte Carlo estimates of the squared kernel integral over a rho sweep.
    KernelL2 {
        #[arg(long, default_value = "disc")]
        domain: Domain,
        #[arg(long, value_delimiter = ',')]
        rho_sweep: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Trapezoid rule for the full-circle Poisson kernel integral.
    Poisson {
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value_t = 4096)]
        nodes: usize,
    },
    /// Exact Gram matrix of the disc images S1(u_n dzbar).
    Orthogonality {
        #[arg(long, default_value = "disc")]
        domain: Domain,
        #[arg(long, default_value_t = 5)]
        max: u32,
    },
    /// Run the reproduction battery.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Restrict to these criterion ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Integral,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Output {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuadKind {
    Polar,
    Mc,
}

#[derive(Args)]
struct QuadArgs {
    #[arg(long, value_enum, default_value = "polar")]
    quad: QuadKind,
    /// Polar rule size as RADIALxANGULAR.
    #[arg(long)]
    nodes: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl QuadArgs {
    fn spec(&self, domain: Domain) -> Result<QuadratureSpec, CliError> {
        let spec = match self.quad {
            QuadKind::Polar => match &self.nodes {
                None => representation_settings(domain).0,
                Some(s) => {
                    let (r, a) = s
                        .split_once(['x', 'X'])
                        .ok_or_else(|| CliError::Input(format!("--nodes expects RxA, got {s:?}")))?;
                    let parse = |t: &str| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| CliError::Input(format!("bad node count {t:?}")))
                    };
                    QuadratureSpec::polar(parse(r)?, parse(a)?)
                }
            },
            QuadKind::Mc => QuadratureSpec::monte_carlo(self.samples, self.seed),
        };
        let spec = spec.with_rho(self.rho);
        spec.validate(false)?;
        Ok(spec)
    }
}

enum CliError {
    Input(String),
    Verification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => CliError::Verification(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn require_point(domain: Domain, z: &Option<String>) -> Result<Vec<Complex64>, CliError> {
    let s = z.as_ref().ok_or_else(|| CliError::Input("--z is required".into()))?;
    Ok(parse_point(domain, s)?)
}

/// Result document, and whether it reports a failed check.
fn run(command: Command) -> Result<(String, Value, bool), CliError> {
    let out = match command {
        Command::Kernel {
            domain,
            z,
            w,
            basis_degree,
        } => {
            let zp = parse_point(domain, &z)?;
            let wp = parse_point(domain, w.as_deref().unwrap_or(&z))?;
            let mut v = json!({
                "domain": domain,
                "value": complex(bergman_kernel(domain, &zp, &wp)?),
            });
            if let Some(n) = basis_degree {
                v["basis_sum"] = json!({
                    "max_degree": n,
                    "value": complex(basis_sum_kernel(domain, &zp, &wp, n)?),
                });
            }
            ("kernel", v, false)
        }
        Command::Project {
            domain,
            symbol,
            exact,
            z,
            quad,
        } => {
            let f = parse_symbol(domain, &symbol)?;
            let p = bergman_project_scaled(domain, &f)?;
            let mut v = json!({ "domain": domain, "symbol": symbol });
            if exact || z.is_none() {
                v["projection"] = serde_json::to_value(&p)?;
            }
            if let Some(zs) = &z {
                let zp = parse_point(domain, zs)?;
                let spec = quad.spec(domain)?;
                let ff = f.to_float();
                let q = bergman_project_quadrature(domain, |w| ff.eval(w), &zp, &spec)?;
                let e = p.to_float().eval(&zp);
                v["z"] = Value::String(zs.clone());
                v["quadrature"] = complex(q);
                v["exact_at_z"] = complex(e);
                v["abs_difference"] = json!((q - e).norm());
                v["spec_used"] = serde_json::to_value(&spec)?;
            }
            ("project", v, false)
        }
        Command::Solve {
            domain,
            form,
            mode,
            z,
            quad,
        } => {
            let g = parse_form(domain, &form)?;
            let g = g.try_map(|c| Form01::new(domain, c.clone()))?;
            let u = multiplier_solution_scaled(domain, &g)?;
            let mut v = json!({ "domain": domain, "form": form });
            match mode {
                Mode::Exact => {
                    v["solution"] = serde_json::to_value(&u)?;
                    if let Some(zs) = &z {
                        let zp = parse_point(domain, zs)?;
                        v["z"] = Value::String(zs.clone());
                        v["value"] = complex(u.to_float().eval(&zp));
                    }
                }
                Mode::Integral => {
                    let zp = require_point(domain, &z)?;
                    let spec = quad.spec(domain)?;
                    let scale = g.scale_f64();
                    let gf: Vec<_> = g.body.coefficients().iter().map(|c| c.to_float().scaled(scale)).collect();
                    let q = integral_solution_eval(domain, &gf, &zp, &spec)?;
                    let e = u.to_float().eval(&zp);
                    v["z"] = json!(z);
                    v["value"] = complex(q);
                    v["multiplier_value"] = complex(e);
                    v["abs_difference"] = json!((q - e).norm());
                    v["spec_used"] = serde_json::to_value(&spec)?;
                }
            }
            ("solve", v, false)
        }
        Command::Dbar { domain, symbol } => {
            let f = parse_symbol(domain, &symbol)?;
            let d: Vec<_> = dbar_apply(&f.body)
                .into_iter()
                .map(|c| Scaled::new(f.scale_sq.clone(), c))
                .collect();
            ("dbar", json!({ "domain": domain, "symbol": symbol, "coefficients": d }), false)
        }
        Command::Pullback { domain, map, form } => {
            let f = parse_map(domain, &map)?;
            let g = parse_form(domain, &form)?;
            let g = g.try_map(|c| Form01::new(domain, c.clone()))?;
            let u = multiplier_solution_scaled(domain, &g)?;
            let composed = u.try_map(|b| compose_solution(b, &f))?;
            let lhs = composed.map(dbar_apply);
            let rhs = g.try_map(|b| pullback_01(&f, b))?;
            let holds = lhs.body == rhs.body;
            let v = json!({
                "domain": domain,
                "map": map,
                "form": form,
                "solution": u,
                "composed": composed,
                "dbar_composed": lhs,
                "pullback_form": rhs,
                "identity_holds": holds,
            });
            ("pullback", v, !holds)
        }
        Command::HsSum {
            domain,
            max_degree,
            json: _,
            output,
        } => {
            let r = hs_partial_sum(domain, max_degree)?;
            if output == Output::Csv {
                let mut csv = String::from("max_degree,partial_sum\n");
                for (n, s) in &r.trend_samples {
                    csv.push_str(&format!("{n},{s}\n"));
                }
                return Ok(("csv".into(), Value::String(csv), false));
            }
            ("hs-sum", serde_json::to_value(&r)?, false)
        }
        Command::KernelL2 {
            domain,
            rho_sweep,
            samples,
            seed,
        } => {
            let sweep = rho_sweep.unwrap_or_else(|| DEFAULT_RHO_SWEEP.to_vec());
            let spec = QuadratureSpec::monte_carlo(samples, seed);
            let est = kernel_l2_integral(domain, &spec, &sweep)?;
            let rows: Vec<Value> = est
                .iter()
                .map(|(rho, e)| json!({ "rho": rho, "estimate": e.value.re, "std_error": e.std_error }))
                .collect();
            let mut v = json!({ "domain": domain, "samples": samples, "seed": seed, "estimates": rows });
            if domain == Domain::Disc {
                let bound = disc_kernel_l2_bound();
                let b = bound.to_f64();
                v["bound"] = serde_json::to_value(&bound)?;
                v["within_bound"] = json!(est.iter().all(|(_, e)| e.value.re <= b));
            } else {
                v["diverging_trend"] = json!(sweep_diverges(&est));
            }
            ("kernel-l2", v, false)
        }
        Command::Poisson { rho, phi, nodes } => {
            let value = poisson_check(rho, phi, nodes)?;
            let v = json!({
                "rho": rho,
                "phi": phi,
                "nodes": nodes,
                "value": value,
                "target": TWO_PI,
                "abs_error": (value - TWO_PI).abs(),
            });
            ("poisson", v, false)
        }
        Command::Orthogonality { domain, max } => {
            let g = pairwise_orthogonality(domain, max)?;
            let entries: Vec<Vec<Value>> = g
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| match e.collapse().and_then(|c| c.as_real()) {
                            Some(x) => serde_json::to_value(&x).unwrap_or(Value::Null),
                            None => serde_json::to_value(e).unwrap_or(Value::Null),
                        })
                        .collect()
                })
                .collect();
            let diagonal = g
                .iter()
                .enumerate()
                .all(|(m, row)| row.iter().enumerate().all(|(n, e)| m == n || e.is_zero()));
            (
                "orthogonality",
                json!({ "domain": domain, "max": max, "gram": entries, "diagonal": diagonal }),
                !diagonal,
            )
        }
        Command::Verify { suite: Suite::Paper, only } => {
            let r = run_suite(&only);
            for c in &r.criteria {
                eprintln!(
                    "[{}] {:>2} {} ({:.2?}): {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.id,
                    c.name,
                    c.elapsed,
                    c.detail
                );
            }
            let failed = !r.passed;
            ("verify", serde_json::to_value(&r)?, failed)
        }
    };
    Ok((out.0.to_string(), out.1, out.2))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((kind, Value::String(csv), failed)) if kind == "csv" => {
            emit(&csv);
            ExitCode::from(if failed { 3 } else { 0 })
        }
        Ok((command, result, failed)) => {
            let doc = json!({ "schema": SCHEMA, "command": command, "result": result });
            emit(&(serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"));
            ExitCode::from(if failed { 3 } else { 0 })
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
    }
}
