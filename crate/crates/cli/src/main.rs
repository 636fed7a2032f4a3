mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hilbert_spectra::hilbert::{eigenfunction_eval, hill_sequence, LatentParameter};
use hilbert_spectra::mehler_fock::{kernel_identity_residual, mf_forward, round_trip, ForwardRoute, PhiZ};
use hilbert_spectra::report::{ReportItem, ResidualReport};
use hilbert_spectra::series::{apply_hilbert_series, PowerSeries};
use hilbert_spectra::special::{conical_p, ConicalOrder};
use hilbert_spectra::spectral::{multiplier_psi, spectral_measure_density, spectrum_report, SpectralMeasure};
use hilbert_spectra::verify::{run_suite, Suite, VerifyOptions};
use hilbert_spectra::Error;
use num_complex::Complex64;

use output::{Format, Output, Table};

#[derive(Parser, Debug)]
#[command(
    name = "hilbert-spectra",
    version,
    about = "Spectral theory of the Hilbert matrix, evaluated and verified"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance; verify scales every item's nominal tolerance by tol/1e-6.
    #[arg(
        long,
        global = true,
        env = "HILBERT_SPECTRA_TOL",
        default_value_t = 1e-6,
        allow_negative_numbers = true
    )]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct MuArgs {
    /// Real part of the latent parameter mu (0 < Re mu <= 1/2).
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
    /// Imaginary part of mu.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mu_im: f64,
}

impl MuArgs {
    fn parameter(&self) -> Result<LatentParameter, Error> {
        LatentParameter::new(Complex64::new(self.mu, self.mu_im))
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct ZArgs {
    /// Real part of the disk point z.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    z_re: f64,
    /// Imaginary part of z.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    z_im: f64,
}

impl ZArgs {
    fn z(&self) -> Complex64 {
        Complex64::new(self.z_re, self.z_im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    ClosedForm,
    Quadrature,
}

impl From<Route> for ForwardRoute {
    fn from(r: Route) -> Self {
        match r {
            Route::ClosedForm => ForwardRoute::ClosedForm,
            Route::Quadrature => ForwardRoute::Quadrature,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    Eigenfunction,
    Kernel,
    Density,
    Multiplier,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hill's latent eigenvector x_0, ..., x_(n-1).
    EigSeq {
        #[command(flatten)]
        mu: MuArgs,
        /// Number of terms.
        #[arg(long)]
        n: usize,
    },
    /// The eigenfunction f_mu at z.
    EigEval {
        #[command(flatten)]
        mu: MuArgs,
        #[command(flatten)]
        z: ZArgs,
    },
    /// The Hilbert matrix applied to a finite coefficient vector.
    Apply {
        /// Comma-separated real coefficients a_0, a_1, ...
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        coeffs: Vec<f64>,
        /// Number of output coefficients.
        #[arg(long)]
        n: usize,
    },
    /// Mehler-Fock transform of phi_z(x) = 1/(x(1-z)+1+z) at t.
    Mf {
        #[command(flatten)]
        z: ZArgs,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value = "quadrature")]
        route: Route,
    },
    /// Inverse transform of the transform of phi_z, evaluated at x.
    Imf {
        #[command(flatten)]
        z: ZArgs,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 40.0)]
        t_max: f64,
        #[arg(long, value_enum, default_value = "closed-form")]
        route: Route,
    },
    /// Residual of P(y) = (cosh(pi t)/pi) int_1^inf P(x)/(x+y) dx.
    KernelCheck {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1.0)]
        y: f64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        /// Worker threads (defaults to available parallelism).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// The spectral density on a grid of (0, pi].
    Measure {
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Range of the multiplier and the spectral measure.
    Spectrum,
    /// Tables for plotting.
    Plot {
        #[arg(value_enum)]
        kind: PlotKind,
        #[arg(long, default_value_t = 100)]
        nodes: usize,
        /// mu for the eigenfunction plot.
        #[arg(long, default_value_t = 0.5)]
        mu: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu_im: f64,
        /// t for the kernel plot.
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Right end of the plotted interval (z, x or t depending on the kind).
        #[arg(long)]
        upper: Option<f64>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::Domain { .. } | Error::Existence { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn grid(lo: f64, hi: f64, nodes: usize) -> Vec<f64> {
    if nodes == 1 {
        return vec![lo];
    }
    (0..nodes)
        .map(|k| lo + (hi - lo) * k as f64 / (nodes - 1) as f64)
        .collect()
}

/// Returns the output and whether every check in it passed.
fn run(cli: &Cli) -> Result<(Output, bool), Failure> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(usage(format!("--tol must be positive and finite, got {}", cli.tol)));
    }
    let table = |t: Table| Ok((Output::Table(t), true));
    match &cli.command {
        Command::EigSeq { mu, n } => {
            if *n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let p = mu.parameter()?;
            let x = hill_sequence(p, n - 1)?;
            let mut t = Table::new(&["n", "re", "im"]);
            for (k, v) in x.iter().enumerate() {
                t.row(vec![k as f64, v.re, v.im]);
            }
            let m = p.eigenvalue().value();
            table(
                t.meta("mu", vec![p.mu().re, p.mu().im])
                    .meta("eigenvalue", vec![m.re, m.im]),
            )
        }
        Command::EigEval { mu, z } => {
            let p = mu.parameter()?;
            let f = eigenfunction_eval(p, z.z())?;
            let mut t = Table::new(&["z_re", "z_im", "re", "im"]);
            t.row(vec![z.z_re, z.z_im, f.re, f.im]);
            table(t.meta("mu", vec![p.mu().re, p.mu().im]))
        }
        Command::Apply { coeffs, n } => {
            let out = apply_hilbert_series(&PowerSeries::new(coeffs.clone())?, *n)?;
            let mut t = Table::new(&["n", "value"]);
            for (k, v) in out.coeffs().iter().enumerate() {
                t.row(vec![k as f64, *v]);
            }
            table(t)
        }
        Command::Mf { z, t, route } => {
            let phi = PhiZ::new(z.z())?;
            let (v, est) = match route {
                Route::ClosedForm => (phi.transform_closed_form(*t)?, 0.0),
                Route::Quadrature => {
                    let r = mf_forward(&phi.as_function(), *t, cli.tol)?.require_converged()?;
                    (r.value, r.est_error)
                }
            };
            let mut tab = Table::new(&["t", "re", "im", "est_error"]);
            tab.row(vec![*t, v.re, v.im, est]);
            table(tab)
        }
        Command::Imf { z, x, t_max, route } => {
            let r = round_trip(z.z(), *x, (*route).into(), *t_max, cli.tol)?;
            let mut tab = Table::new(&["x", "re", "im", "expected_re", "expected_im", "residual", "t_end"]);
            tab.row(vec![
                *x,
                r.recovered.re,
                r.recovered.im,
                r.expected.re,
                r.expected.im,
                r.residual,
                r.t_end,
            ]);
            table(tab)
        }
        Command::KernelCheck { t, y } => {
            let mut report = ResidualReport::new(format!("t = {t}, y = {y}"));
            let k = kernel_identity_residual(*t, *y)?;
            report.measure("direct", k.direct);
            report.measure("via_integral", k.via_integral);
            report.push(ReportItem::new(
                format!("P(y) = (cosh(pi t)/pi) int_1^inf P(x)/(x+y) dx, t = {t}, y = {y}"),
                "conical kernel identity",
                k.residual,
                cli.tol,
            ));
            let ok = report.all_passed();
            Ok((Output::Report(report), ok))
        }
        Command::Verify { suite, threads } => {
            let mut options = VerifyOptions {
                tol: cli.tol,
                ..VerifyOptions::default()
            };
            if let Some(n) = threads {
                options.threads = (*n).max(1);
            }
            let report = run_suite(*suite, &options)?;
            let ok = report.all_passed();
            Ok((Output::Report(report), ok))
        }
        Command::Measure { grid: n } => {
            if *n == 0 {
                return Err(usage("--grid must be at least 1"));
            }
            let mut t = Table::new(&["x", "density"]);
            for k in 1..=*n {
                let x = PI * k as f64 / *n as f64;
                t.row(vec![x, spectral_measure_density(x)?]);
            }
            table(t.meta("mass", SpectralMeasure.mass()?))
        }
        Command::Spectrum => {
            let report = spectrum_report();
            let ok = report.all_passed();
            Ok((Output::Report(report), ok))
        }
        Command::Plot {
            kind,
            nodes,
            mu,
            mu_im,
            t,
            upper,
        } => {
            if *nodes == 0 {
                return Err(usage("--nodes must be at least 1"));
            }
            match kind {
                PlotKind::Eigenfunction => {
                    let p = LatentParameter::new(Complex64::new(*mu, *mu_im))?;
                    let mut tab = Table::new(&["z", "re", "im"]);
                    for z in grid(0.0, upper.unwrap_or(0.9), *nodes) {
                        let f = eigenfunction_eval(p, Complex64::new(z, 0.0))?;
                        tab.row(vec![z, f.re, f.im]);
                    }
                    table(tab.meta("mu", vec![*mu, *mu_im]))
                }
                PlotKind::Kernel => {
                    let order = ConicalOrder::new(*t)?;
                    let mut tab = Table::new(&["x", "p"]);
                    for x in grid(1.0, upper.unwrap_or(10.0), *nodes) {
                        tab.row(vec![x, conical_p(order, x)?]);
                    }
                    table(tab.meta("t", *t))
                }
                PlotKind::Density => {
                    let hi = upper.unwrap_or(PI).min(PI);
                    let mut tab = Table::new(&["x", "density"]);
                    for k in 1..=*nodes {
                        let x = hi * k as f64 / *nodes as f64;
                        tab.row(vec![x, spectral_measure_density(x)?]);
                    }
                    table(tab)
                }
                PlotKind::Multiplier => {
                    let mut tab = Table::new(&["t", "psi"]);
                    for s in grid(0.0, upper.unwrap_or(3.0), *nodes) {
                        tab.row(vec![s, multiplier_psi(s)]);
                    }
                    table(tab)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, ok) = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let text = match out.render(cli.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn json(args: &[&str]) -> Value {
        let cli = Cli::try_parse_from(std::iter::once("hilbert-spectra").chain(args.iter().copied())).unwrap();
        let (out, ok) = run(&cli).unwrap_or_else(|_| panic!("{args:?} failed"));
        assert!(ok);
        serde_json::from_str(&out.render(Format::Json).unwrap()).unwrap()
    }

    fn column(v: &Value, k: usize) -> Vec<f64> {
        v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r[k].as_f64().unwrap())
            .collect()
    }

    #[test]
    fn eig_seq_values() {
        let x = column(&json(&["eig-seq", "--mu", "0.5", "--n", "2"]), 1);
        assert_eq!(x.len(), 2);
        assert!((x[0] - PI).abs() < 1e-12 && (x[1] - 0.75 * PI).abs() < 1e-12);
    }

    #[test]
    fn eig_eval_at_origin_is_one() {
        let v = json(&["eig-eval", "--mu", "0.5", "--mu-im", "1"]);
        assert!((column(&v, 2)[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn apply_constant() {
        assert_eq!(
            column(&json(&["apply", "--coeffs", "1", "--n", "3"]), 1),
            vec![1.0, 0.5, 1.0 / 3.0]
        );
    }

    #[test]
    fn measure_grid() {
        let v = json(&["measure", "--grid", "100"]);
        let d = column(&v, 1);
        assert_eq!(d.len(), 100);
        assert!(d.iter().all(|&y| y >= 0.0) && d[99] == 0.0);
        assert!((v["metadata"]["mass"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn plots() {
        let m = column(&json(&["plot", "multiplier", "--nodes", "50"]), 1);
        assert_eq!(m.len(), 50);
        assert_eq!(m[0], PI);
        assert!(m.windows(2).all(|w| w[1] < w[0]));
        let d = column(&json(&["plot", "density", "--nodes", "100"]), 1);
        assert!(d.iter().all(|&y| y >= 0.0) && *d.last().unwrap() == 0.0);
        let f = column(&json(&["plot", "eigenfunction", "--nodes", "10"]), 1);
        assert!(f.iter().all(|&y| y.is_finite() && y > 0.0));
        let k = column(&json(&["plot", "kernel", "--t", "1", "--nodes", "5"]), 1);
        assert_eq!(k[0], 1.0);
    }

    #[test]
    fn transforms() {
        assert!((column(&json(&["mf", "--t", "0"]), 1)[0] - PI).abs() < 1e-6);
        assert!((column(&json(&["mf", "--t", "1", "--route", "closed-form"]), 1)[0] - PI / PI.cosh()).abs() < 1e-12);
        assert!(column(&json(&["imf", "--z-re", "0.3", "--x", "1.5"]), 5)[0] < 1e-4);
        assert_eq!(
            json(&["kernel-check", "--t", "1", "--y", "2"])["items"][0]["verdict"],
            "pass"
        );
    }

    #[test]
    fn spectrum_passes() {
        let v = json(&["spectrum"]);
        assert!(v["items"].as_array().unwrap().iter().all(|i| i["verdict"] == "pass"));
    }

    #[test]
    fn invalid_parameters_are_usage_errors() {
        for args in [
            vec!["eig-seq", "--mu", "0.7", "--n", "2"],
            vec!["eig-eval", "--mu", "0.5", "--z-re", "1.5"],
            vec!["measure", "--grid", "0"],
            vec!["--tol", "-1", "spectrum"],
        ] {
            let cli = Cli::try_parse_from(std::iter::once("hilbert-spectra").chain(args.iter().copied())).unwrap();
            assert!(matches!(run(&cli), Err(Failure::Usage(_))), "{args:?}");
        }
    }
}
