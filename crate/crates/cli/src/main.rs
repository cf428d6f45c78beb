//! Command-line front end: graph and expression parsing, the individual
//! calculus operations, and the verification-suite runner.
//!
//! Exit codes: 0 on success (for `verify`, only when every case passed),
//! 1 when a verification suite reports failures, 2 on usage or input
//! errors.

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use chiral_core::{
    classical_dimension, convolve, decompose_to_lines, elaborate, elaborate_poly, elaborate_w,
    fourier, parse_expr, residue, run_suite, serialize_diagrat, serialize_lambda_poly, DiGraph,
    ExprAst, ExprKind, LineForest, VarId, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(
    name = "chiral",
    version,
    about = "Exact calculus of diagonal-localized rational functions: line-forest \
             decompositions, iterated residues, forest transforms, convolutions, \
             and the verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Express a graph in the line-forest basis
    Decompose {
        /// Graph spec, e.g. "n=3; edges=1->2,1->3"
        #[arg(long)]
        graph: String,
    },
    /// Iterated residue of an expression along a single line
    Residue {
        /// Expression in z-variables, e.g. "(z1-z2)^-1 * z2"
        #[arg(long)]
        expr: String,
        /// Vertex labels joined by '>', e.g. "1>2>3"; the residues are
        /// taken along consecutive pairs and the last label becomes w1
        #[arg(long)]
        line: String,
    },
    /// Transform of an expression along a line forest
    Fourier {
        /// Expression in z-variables; the variable count is the forest's
        #[arg(long)]
        expr: String,
        /// Forest spec: lines joined by '|', e.g. "1>2 | 3"
        #[arg(long)]
        forest: String,
    },
    /// Convolution of a w-variable function against a polynomial in the
    /// line variables L1, L2, ...
    Convolve {
        /// Function in w-variables, e.g. "(w1-w2)^-1"
        #[arg(long)]
        f: String,
        /// Polynomial in L-variables, e.g. "L1^2 - 3*L2"
        #[arg(long)]
        q: String,
    },
    /// Run a named verification suite and report pass/fail per suite
    Verify {
        /// One of line-basis, fourier-delta, residue-lemmas, convolution,
        /// roundtrip, n2-closed-form, lie-dim, all
        #[arg(long)]
        suite: String,
        /// Largest arity to drive; each suite clamps to its own range
        #[arg(long, default_value_t = 4)]
        n: u32,
        /// Seed for the randomized case generators
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solution-space dimensions over the one-dimensional module for
    /// arities 1 through the given bound
    LieDim {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Honors `CHIRAL_THREADS` for the global worker pool; unset or invalid
/// values fall back to the library default.
fn configure_threads() {
    if let Ok(text) = std::env::var("CHIRAL_THREADS") {
        if let Ok(threads) = text.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Decompose { graph } => {
            let g = DiGraph::parse(&graph).context("invalid graph spec")?;
            println!("{}", decompose_to_lines(&g));
            Ok(ExitCode::SUCCESS)
        }
        Command::Residue { expr, line } => {
            let vertices = parse_line_spec(&line)?;
            let ast = parse_expr(&expr).context("invalid expression")?;
            let n = max_index(&ast, 'z')
                .max(vertices.iter().copied().max().unwrap_or(0))
                .max(1);
            let mut f = elaborate(&ast, n).context("invalid expression")?;
            for pair in vertices.windows(2) {
                f = residue(&f, VarId::Z(pair[0]), VarId::Z(pair[1]))
                    .context("residue failed")?;
            }
            let last = *vertices.last().expect("line spec is non-empty");
            let out = f
                .rename_var(VarId::Z(last), VarId::W(1))
                .context("renaming the surviving label failed")?;
            println!("{}", serialize_diagrat(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Fourier { expr, forest } => {
            let forest = LineForest::parse(&forest).context("invalid forest spec")?;
            let ast = parse_expr(&expr).context("invalid expression")?;
            let f = elaborate(&ast, forest.n()).context("invalid expression")?;
            let out = fourier(&f, &forest).context("transform failed")?;
            println!("{}", out.display_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Convolve { f, q } => {
            let f_ast = parse_expr(&f).context("invalid function")?;
            let q_ast = parse_expr(&q).context("invalid polynomial")?;
            let p = max_index(&f_ast, 'w').max(max_index(&q_ast, 'L')).max(1);
            let f = elaborate_w(&f_ast, p).context("invalid function")?;
            let q = elaborate_poly(&q_ast, p).context("invalid polynomial")?;
            println!("{}", serialize_lambda_poly(&convolve(&f, &q)));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            n,
            seed,
            format,
        } => {
            eprintln!("seed = {seed}");
            let reports = run_suite(&suite, n, seed)?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&reports)
                        .expect("report serialization cannot fail")
                ),
                Format::Text => {
                    for report in &reports {
                        println!("{}", report.to_text());
                    }
                }
            }
            if reports.iter().all(|r| r.passed()) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::LieDim { n } => {
            if n == 0 {
                bail!("the arity bound must be at least 1");
            }
            for k in 1..=n {
                println!("n={k}: {}", classical_dimension(k));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Parses `i1>i2>...` into distinct positive labels.
fn parse_line_spec(text: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in text.split('>') {
        let v: u32 = item
            .trim()
            .parse()
            .with_context(|| format!("bad vertex label `{}`", item.trim()))?;
        if v == 0 {
            bail!("vertex labels start at 1");
        }
        if out.contains(&v) {
            bail!("vertex label {v} repeats in the line");
        }
        out.push(v);
    }
    Ok(out)
}

/// The largest index of the given variable family in the tree, 0 if the
/// family does not occur.
fn max_index(ast: &ExprAst, family: char) -> u32 {
    match &ast.kind {
        ExprKind::Rational(_) => 0,
        ExprKind::Var { family: f, index } => {
            if *f == family {
                *index
            } else {
                0
            }
        }
        ExprKind::Sum(a, b) | ExprKind::Diff(a, b) | ExprKind::Prod(a, b) => {
            max_index(a, family).max(max_index(b, family))
        }
        ExprKind::Pow(a, _) => max_index(a, family),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_specs_parse_and_reject_bad_labels() {
        assert_eq!(parse_line_spec("1>2>3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_line_spec(" 2 > 1 ").unwrap(), vec![2, 1]);
        assert!(parse_line_spec("1>1").is_err());
        assert!(parse_line_spec("0>1").is_err());
        assert!(parse_line_spec("1>x").is_err());
        assert!(parse_line_spec("").is_err());
    }

    #[test]
    fn family_indices_are_found_across_the_tree() {
        let ast = parse_expr("(w1-w2)^-1 * L3 + 2").unwrap();
        assert_eq!(max_index(&ast, 'w'), 2);
        assert_eq!(max_index(&ast, 'L'), 3);
        assert_eq!(max_index(&ast, 'z'), 0);
    }
}
