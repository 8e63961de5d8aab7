//! Command-line front end.
//!
//! Every subcommand reads complexes in either supported format, prints a
//! JSON report (or a complex file) to standard output, and exits with 0 on
//! success, 1 on bad input or a failed check, and 2 when an internal
//! verification that should be mathematically guaranteed fails.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::complex::Complex;
use crate::cone;
use crate::error::{Error, Result};
use crate::homology;
use crate::invariants::{self, compute_vectors};
use crate::io;
use crate::linalg::Z;
use crate::stress::{self, StressKind};
use crate::structure::{self, GOneClass};

#[derive(Parser)]
#[command(
    name = "gsphere",
    about = "Exact invariants of simplicial homology spheres",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a complex and print it.
    Construct(ConstructArgs),
    /// Print f-, h-, g- and m-vectors plus the missing-face class.
    Info {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run validity checks: purity, Dehn-Sommerville, the vertex-link
    /// summation identity, g/m inequalities, optionally the full
    /// homology-sphere test.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Also verify that every face link has spherical Z/2 homology.
        #[arg(long)]
        sphere: bool,
    },
    /// Linear and affine stress space dimensions (and optionally a basis).
    Stress {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = KindArg::Affine)]
        kind: KindArg,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include the stress basis for the first seeded embedding.
        #[arg(long)]
        basis: bool,
    },
    /// Lift a linear stress from a complex to the cone over it.
    Lift {
        #[arg(long)]
        input: PathBuf,
        /// Degree of the stress to lift.
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Index into the linear stress basis of the input.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value = "apex")]
        apex: String,
    },
    /// The two-star affine stress attached to an edge.
    EdgeStress {
        #[arg(long)]
        input: PathBuf,
        /// The edge, as two vertex labels.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide (k-1)-stackedness and print the certificate ball.
    Stacked {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Classify a sphere with g_k = 1 into its join normal form.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Contract an edge and print the resulting complex.
    Contract {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Vec<String>,
        /// Emit the plain-text format instead of JSON.
        #[arg(long)]
        text: bool,
    },
}

#[derive(Args)]
struct ConstructArgs {
    /// K(i, d-1): join of simplex boundaries, as `--K I D`.
    #[arg(long = "K", num_args = 2, value_names = ["I", "D"])]
    k_sphere: Option<Vec<usize>>,
    /// Boundary of the D-simplex.
    #[arg(long)]
    simplex: Option<usize>,
    /// Stacked (D-1)-sphere with N vertices, as `--stacked D N`.
    #[arg(long, num_args = 2, value_names = ["D", "N"])]
    stacked: Option<Vec<usize>>,
    /// The M-cycle.
    #[arg(long)]
    cycle: Option<usize>,
    /// Join of the complexes in two files.
    #[arg(long, num_args = 2, value_names = ["FILE", "FILE"])]
    join: Option<Vec<PathBuf>>,
    /// Emit the plain-text format instead of JSON.
    #[arg(long)]
    text: bool,
}

fn z_json(z: &Z) -> Value {
    match z.to_i64() {
        Some(small) => json!(small),
        None => json!(z.to_string()),
    }
}

fn z_vec_json(v: &[Z]) -> Value {
    Value::Array(v.iter().map(z_json).collect())
}

fn read_complex(path: &Path) -> Result<Complex> {
    let source = std::fs::read_to_string(path)?;
    io::parse(&source)
}

fn complex_json(cx: &Complex) -> Value {
    serde_json::from_str(&io::to_json(cx)).expect("canonical JSON is valid")
}

fn stress_json(s: &stress::Stress) -> Value {
    json!(s.to_string_map())
}

/// Parse the command line and run; returns the process exit code.
pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap reserves exit code 2 for usage errors; this tool uses 1
            // for every user-facing error and keeps 2 for broken invariants.
            let _ = err.print();
            return if err.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::VerificationFailed(_) | Error::TheoremContradiction(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Construct(args) => construct(args),
        Command::Info { input } => info(&input),
        Command::Check { input, sphere } => check(&input, sphere),
        Command::Stress {
            input,
            k,
            kind,
            trials,
            seed,
            basis,
        } => stress_cmd(&input, k, kind, trials, seed, basis),
        Command::Lift {
            input,
            k,
            seed,
            index,
            apex,
        } => lift_cmd(&input, k, seed, index, &apex),
        Command::EdgeStress { input, edge, seed } => edge_stress_cmd(&input, &edge, seed),
        Command::Stacked { input, k } => stacked_cmd(&input, k),
        Command::Classify { input, k } => classify_cmd(&input, k),
        Command::Contract { input, edge, text } => contract_cmd(&input, &edge, text),
    }
}

fn emit_complex(cx: &Complex, text: bool) {
    if text {
        print!("{}", io::to_text(cx));
    } else {
        print!("{}", io::to_json(cx));
    }
}

fn construct(args: ConstructArgs) -> Result<u8> {
    let picked = [
        args.k_sphere.is_some(),
        args.simplex.is_some(),
        args.stacked.is_some(),
        args.cycle.is_some(),
        args.join.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if picked != 1 {
        return Err(Error::BadParameters(
            "construct takes exactly one of --K, --simplex, --stacked, --cycle, --join".into(),
        ));
    }
    let cx = if let Some(kd) = args.k_sphere {
        Complex::construct_k(kd[0], kd[1])?
    } else if let Some(d) = args.simplex {
        Complex::simplex_boundary(d, "v")?
    } else if let Some(dn) = args.stacked {
        Complex::connected_sum_stacked(dn[0], dn[1])?
    } else if let Some(m) = args.cycle {
        Complex::cycle(m, "c")?
    } else {
        let files = args.join.unwrap();
        let a = read_complex(&files[0])?;
        let b = read_complex(&files[1])?;
        a.join(&b)?
    };
    emit_complex(&cx, args.text);
    Ok(0)
}

fn info(input: &Path) -> Result<u8> {
    let cx = read_complex(input)?;
    let vectors = compute_vectors(&cx)?;
    let report = json!({
        "d": vectors.d,
        "f": z_vec_json(&vectors.f),
        "h": z_vec_json(&vectors.h),
        "g": z_vec_json(&vectors.g),
        "m": z_vec_json(&vectors.m[1..]),
        "s_class": invariants::s_class(&cx),
        "pure": cx.is_pure(),
        "vertices": cx.vertex_count(),
        "facets": cx.facets().len(),
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(0)
}

fn check(input: &Path, sphere: bool) -> Result<u8> {
    let cx = read_complex(input)?;
    if !cx.is_pure() {
        println!("{}", serde_json::to_string_pretty(&json!({"pure": false}))?);
        eprintln!("error: not a pure complex");
        return Ok(1);
    }
    let vectors = compute_vectors(&cx)?;
    let d = vectors.d;
    let dehn_sommerville = (0..=d).all(|i| vectors.h[i] == vectors.h[d - i]);
    let mut mcmullen_zero = true;
    if d >= 1 {
        for k in 0..=(d - 1) / 2 {
            if !num_traits::Zero::is_zero(&invariants::mcmullen_residual(&cx, k)?) {
                mcmullen_zero = false;
            }
        }
    }
    let glbt = invariants::glbt_report(&cx)?;
    let sphere_result = if sphere {
        Some(homology::is_homology_sphere(&cx)?)
    } else {
        None
    };
    let report = json!({
        "pure": true,
        "dehn_sommerville": dehn_sommerville,
        "mcmullen_zero": mcmullen_zero,
        "glbt": {
            "all_passed": glbt.all_passed,
            "clauses": glbt.clauses.iter().map(|c| json!({
                "name": c.name,
                "applicable": c.applicable,
                "passed": c.passed,
                "details": c.details,
            })).collect::<Vec<_>>(),
        },
        "sphere": sphere_result,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    let mut ok = dehn_sommerville && mcmullen_zero && glbt.all_passed;
    if let Some(is_sphere) = sphere_result {
        if !is_sphere {
            eprintln!("error: not a homology sphere");
        }
        ok = ok && is_sphere;
    }
    Ok(if ok { 0 } else { 1 })
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Linear,
    Affine,
}

fn stress_cmd(
    input: &Path,
    k: u32,
    kind: KindArg,
    trials: usize,
    seed: u64,
    basis: bool,
) -> Result<u8> {
    let cx = read_complex(input)?;
    let dims = stress::stress_dims(&cx, k, trials, seed)?;
    let dim = match kind {
        KindArg::Linear => dims.linear,
        KindArg::Affine => dims.affine,
    };
    let basis_json = if basis {
        let d = (cx.dim() + 1).max(1) as usize;
        let emb = stress::generic_embedding(&cx, d, seed);
        let kind = match kind {
            KindArg::Linear => StressKind::Linear,
            KindArg::Affine => StressKind::Affine,
        };
        let stresses = stress::stress_basis(&cx, &emb, k, kind)?;
        Some(stresses.iter().map(stress_json).collect::<Vec<_>>())
    } else {
        None
    };
    let report = json!({
        "k": k,
        "kind": match kind { KindArg::Linear => "linear", KindArg::Affine => "affine" },
        "trials": trials,
        "seed": seed,
        "dim": dim,
        "dims": {"linear": dims.linear, "affine": dims.affine},
        "unanimous": dims.unanimous,
        "basis": basis_json,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(0)
}

fn lift_cmd(input: &Path, k: u32, seed: u64, index: usize, apex: &str) -> Result<u8> {
    let base = read_complex(input)?;
    if base.index_of(apex).is_ok() {
        return Err(Error::LabelCollision(apex.to_string()));
    }
    let d = (base.dim() + 1).max(1) as usize;
    let emb = stress::generic_embedding(&base, d, seed);
    let basis = stress::stress_basis(&base, &emb, k, StressKind::Linear)?;
    if index >= basis.len() {
        return Err(Error::BadParameters(format!(
            "basis index {index} out of range (dimension {})",
            basis.len()
        )));
    }
    let source = &basis[index];
    let a = cone::fresh_cone_values(&base, seed.wrapping_add(1));
    let lifted = cone::lift(source, &base, &emb, &a, apex)?;
    let cone_cx = base.join(&Complex::from_facets(
        vec![apex.to_string()],
        vec![vec![apex.to_string()]],
    )?)?;
    let cone_emb = cone::cone_embedding(&emb, &a, apex)?;
    let valid = stress::linear_stress_defect(&lifted, &cone_cx, &cone_emb).is_none();
    let support_law = {
        let supp = stress::support(source, &base)?;
        let apex_cx =
            Complex::from_facets(vec![apex.to_string()], vec![vec![apex.to_string()]])?;
        let expected = supp.join(&apex_cx)?.skeleton(k as isize - 1)?;
        stress::support(&lifted, &cone_cx)? == expected
    };
    let commuting_square = {
        let lowered = cone::lift(&source.dc(), &base, &emb, &a, apex)?;
        lifted.dc() == lowered
    };
    let report = json!({
        "k": k,
        "seed": seed,
        "index": index,
        "cone": complex_json(&cone_cx),
        "stress": stress_json(&lifted),
        "valid_on_cone": valid,
        "support_law": support_law,
        "commuting_square": commuting_square,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    if !(valid && support_law && commuting_square) {
        return Err(Error::VerificationFailed(
            "cone lifting invariant failed".into(),
        ));
    }
    Ok(0)
}

fn edge_stress_cmd(input: &Path, edge: &[String], seed: u64) -> Result<u8> {
    let cx = read_complex(input)?;
    let outcome = cone::edge_stress(&cx, &edge[0], &edge[1], seed)?;
    let report = json!({
        "edge": [edge[0], edge[1]],
        "seed": seed,
        "attempts": outcome.attempts,
        "degree": outcome.stress.degree(),
        "witness_face": outcome.witness,
        "stress": stress_json(&outcome.stress),
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(0)
}

fn stacked_cmd(input: &Path, k: usize) -> Result<u8> {
    let cx = read_complex(input)?;
    let report = structure::is_stacked(&cx, k)?;
    let certificate = report.certificate.as_ref().map(|c| {
        json!({
            "ball": complex_json(&c.ball),
            "max_cells": c.ball.facets().len(),
            "levels_agree": c.levels_agree,
            "boundary_matches": c.boundary_matches,
            "acyclic": c.acyclic,
        })
    });
    let out = json!({
        "k": report.k,
        "g_k": z_json(&report.g_k),
        "stacked": report.stacked,
        "m_criterion": report.m_criterion,
        "certificate": certificate,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(0)
}

fn classify_cmd(input: &Path, k: usize) -> Result<u8> {
    let cx = read_complex(input)?;
    let result = structure::classify_g1(&cx, k)?;
    let class = match &result.class {
        GOneClass::SimplexBoundaryJoinSphere { simplex_dim, sphere } => json!({
            "kind": "SimplexBoundaryJoinSphere",
            "simplex_dim": simplex_dim,
            "sphere": complex_json(sphere),
        }),
        GOneClass::TwoSimplexBoundaries { j, complement } => json!({
            "kind": "TwoSimplexBoundaries",
            "j": j,
            "complement": complement,
        }),
        GOneClass::ThreeTriangles => json!({"kind": "ThreeTriangles"}),
        GOneClass::NotG1 { g_k } => json!({"kind": "NotG1", "g_k": z_json(g_k)}),
        GOneClass::OutOfTheoremScope => json!({"kind": "OutOfTheoremScope"}),
    };
    let out = json!({
        "k": result.k,
        "d": result.d,
        "class": class,
        "factors": result.factors.iter().map(complex_json).collect::<Vec<_>>(),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(0)
}

fn contract_cmd(input: &Path, edge: &[String], text: bool) -> Result<u8> {
    let cx = read_complex(input)?;
    let contracted = cx.contract_edge(&edge[0], &edge[1])?;
    emit_complex(&contracted, text);
    Ok(0)
}
