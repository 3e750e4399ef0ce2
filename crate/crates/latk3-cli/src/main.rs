mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

/// Exact lattice computations for K3 automorphism problems.
#[derive(Parser, Debug)]
#[command(name = "latk3", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, signature, determinant and discriminant form of a lattice expression.
    LatticeInfo { expr: String },
    /// Glue maps between two lattices, and optionally the overlattice of one of them.
    Glue {
        a: String,
        b: String,
        #[arg(long, default_value_t = 1)]
        order: u64,
        /// Index into the glue list.
        #[arg(long)]
        build: Option<usize>,
    },
    /// Cyclotomic lattices.
    Cyclo {
        #[command(subcommand)]
        op: CycloOp,
    },
    /// Fundamental roots and chamber symmetries of a hyperbolic lattice.
    Vinberg {
        expr: String,
        #[arg(long)]
        max_height: Option<u64>,
        /// Comma separated absolute root norms.
        #[arg(long, value_delimiter = ',')]
        norms: Option<Vec<u64>>,
        /// Write the dual graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Largest discriminant group for which O(q) is computed.
        #[arg(long, default_value_t = 10_000)]
        oq_bound: u64,
    },
    /// Fixed point data allowed by the Lefschetz formulas.
    Lefschetz {
        n: u64,
        /// Traces of g* on T and on NS.
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["T", "NS"])]
        traces: Option<Vec<i64>>,
        #[arg(long, default_value_t = 24)]
        max_points: u64,
        #[arg(long, default_value_t = 1)]
        max_curves: usize,
        #[arg(long, default_value_t = 10)]
        max_genus: u64,
        /// Right hand side 1 + ζ^conj.
        #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
        conj: i64,
    },
}

#[derive(Subcommand, Debug)]
enum CycloOp {
    /// The principal lattice of c_n.
    Principal { n: u64 },
    /// The twist of the principal lattice of c_n by a real element, in x and y = x + 1/x.
    Twist { n: u64, a: String },
    /// Determinants allowed for a transcendental lattice with an order-n action.
    PossibleDets { n: u64 },
    /// res(c_n, c_m).
    Resultant { n: u64, m: u64 },
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, x) in map {
            match x {
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                    out.push_str(&format!("{k}:\n"));
                    for i in items {
                        out.push_str(&format!("  {i}\n"));
                    }
                }
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
    } else {
        out.push_str(&format!("{v}\n"));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::LatticeInfo { expr } => commands::lattice_info(&expr),
        Command::Glue { a, b, order, build } => commands::glue(&a, &b, order, build),
        Command::Cyclo { op } => match op {
            CycloOp::Principal { n } => commands::cyclo_principal(n),
            CycloOp::Twist { n, a } => commands::cyclo_twist(n, &a),
            CycloOp::PossibleDets { n } => commands::cyclo_possible_dets(n),
            CycloOp::Resultant { n, m } => commands::cyclo_resultant(n, m),
        },
        Command::Vinberg { expr, max_height, norms, dot, oq_bound } => {
            commands::vinberg(&expr, max_height, norms, dot.as_deref(), oq_bound)
        }
        Command::Lefschetz { n, traces, max_points, max_curves, max_genus, conj } => {
            let caps = latk3::lefschetz::FixedPointCaps { max_points, max_curves, max_genus, conj };
            commands::lefschetz(n, traces.as_deref(), &caps)
        }
    };
    match result {
        Ok(v) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                print!("{}", render_text(&v));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = if e.is_usage() { 2 } else { 3 };
            if cli.json {
                let v = serde_json::json!({ "error": e.to_string(), "exit_code": code });
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            }
            eprintln!("latk3: {e}");
            ExitCode::from(code)
        }
    }
}
