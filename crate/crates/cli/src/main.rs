//! Command line front end: run spectral sequences from descriptor files,
//! evaluate characteristic numbers and Floer divisibility, decide
//! orientability for gauge groups, and query the Picard algebra.

use bordcalc::abelian::AbelianGroup;
use bordcalc::abelian::GroupMorphism;
use bordcalc::ahss::{
    parse_group_literal, render_page, render_report, render_report_machine, Assembled, CoeffChoice,
    Runner,
};
use bordcalc::charnum::{
    floer_divisibility, stabilized_divisibility, su_loop_invariants, xi_from_abc, Block,
    BundleData, CharError, ManifoldModel, StructureGroup,
};
use bordcalc::picard::{
    functor_exists, hexagon_holds, ses_check, symmetry_is_involution, CyclicProduct, PicardData,
};
use bordcalc::registry::{classify_orientability, parse as parse_group_expr, OrientabilityVerdict};
use bordcalc::ring::CohomologyClass;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bordcalc",
    version,
    about = "Exact calculators for spin bordism tables"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the spectral sequence for a space descriptor and print its pages
    /// and the assembled groups per total degree.
    Ss {
        /// Space descriptor file.
        space: PathBuf,
        /// Coefficient row: "spin" or a path to a row file.
        #[arg(long, default_value = "spin")]
        coeff: String,
        /// Hint file for the space.
        #[arg(long)]
        hints: Option<PathBuf>,
        /// Largest total degree to assemble.
        #[arg(long, default_value_t = 8)]
        upto: usize,
        /// Print only the surviving entries of this page.
        #[arg(long)]
        page: Option<u32>,
        /// Key=value output instead of the table rendering.
        #[arg(long)]
        machine: bool,
    },
    /// Divisibility modulus for Floer gradings at the given rank.
    Floer {
        r: usize,
        /// Use the stabilized modulus at this rank instead.
        #[arg(long)]
        stabilize: Option<usize>,
    },
    /// Evaluate (a,b,c) and the index Xi for a bundle over an
    /// eight-dimensional product with a circle factor.
    Xi {
        #[command(flatten)]
        spec: BundleSpec,
        /// Rank entering the index formula.
        #[arg(long)]
        r: usize,
    },
    /// Evaluate just the triple (a,b,c).
    Abc {
        #[command(flatten)]
        spec: BundleSpec,
    },
    /// Decide orientability of moduli problems for a product of compact
    /// Lie groups over closed spin manifolds of dimension 7 or 8.
    Orientable {
        /// Group expression such as "SU(5) x E8" or "SO(10)/K".
        expr: String,
        #[arg(long)]
        n: usize,
    },
    /// Picard groupoid queries.
    Picard {
        #[command(subcommand)]
        query: PicardCmd,
    },
}

#[derive(Args)]
struct BundleSpec {
    /// Comma-separated blocks of the base manifold, e.g. "S4,S3,S1" or
    /// "K3,S3,S1".
    #[arg(long)]
    blocks: String,
    /// Bundle rank; unspecified Chern classes are zero.
    #[arg(long, default_value_t = 4)]
    rank: usize,
    /// Second Chern class, e.g. "s4 - s3 s1".
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<String>,
    /// Third Chern class.
    #[arg(long, allow_hyphen_values = true)]
    c3: Option<String>,
    /// Fourth Chern class.
    #[arg(long, allow_hyphen_values = true)]
    c4: Option<String>,
}

#[derive(Subcommand)]
enum PicardCmd {
    /// Count alternating and skew forms for the given finite groups and
    /// check the classifying short exact sequence.
    SesCheck { pi0: String, pi1: String },
    /// Does the forgetful map from graded to ungraded torsors respect the
    /// symmetry invariants?
    Forgetful,
    /// Sanity query: the identity on graded torsors.
    Identity,
    /// Check the torsor symmetry is an involution and satisfies the
    /// hexagon identities.
    Torsor,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders help and version through the error path too
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.cmd {
        Cmd::Ss {
            space,
            coeff,
            hints,
            upto,
            page,
            machine,
        } => cmd_ss(&space, &coeff, hints.as_deref(), upto, page, machine),
        Cmd::Floer { r, stabilize } => cmd_floer(r, stabilize),
        Cmd::Xi { spec, r } => cmd_invariants(&spec, Some(r)),
        Cmd::Abc { spec } => cmd_invariants(&spec, None),
        Cmd::Orientable { expr, n } => cmd_orientable(&expr, n),
        Cmd::Picard { query } => cmd_picard(&query),
    };
    ExitCode::from(code)
}

fn fail(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {}", msg);
    1
}

fn cmd_ss(
    space: &std::path::Path,
    coeff: &str,
    hints: Option<&std::path::Path>,
    upto: usize,
    page: Option<u32>,
    machine: bool,
) -> u8 {
    let choice = if coeff == "spin" {
        CoeffChoice::Spin
    } else {
        CoeffChoice::Path(PathBuf::from(coeff))
    };
    let mut runner = Runner::new();
    let run = match runner.run(space, hints, &choice, upto) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    if let Some(r) = page {
        print!("{}", render_page(&run, r));
        return 0;
    }
    if machine {
        print!("{}", render_report_machine(&run));
    } else {
        for r in run.pages.keys() {
            println!("E{}:", r);
            print!("{}", render_page(&run, *r));
        }
        print!("{}", render_report(&run));
    }
    let unresolved = run
        .reports
        .values()
        .any(|rep| !matches!(rep.assembled, Assembled::Known(_)));
    if unresolved {
        2
    } else {
        0
    }
}

fn cmd_floer(r: usize, stabilize: Option<usize>) -> u8 {
    if r < 2 {
        return fail("rank must be at least 2");
    }
    match stabilize {
        None => println!("{}", floer_divisibility(r)),
        Some(rp) => {
            if rp < 4 || rp < r {
                return fail("stabilized rank must be at least 4 and at least the rank");
            }
            println!("{}", stabilized_divisibility(rp));
        }
    }
    0
}

fn parse_blocks(text: &str) -> Result<Vec<Block>, String> {
    text.split(',')
        .map(|tok| {
            let t = tok.trim();
            if t.eq_ignore_ascii_case("K3") {
                return Ok(Block::K3);
            }
            let rest = t
                .strip_prefix('S')
                .or_else(|| t.strip_prefix('s'))
                .ok_or_else(|| format!("unknown block {:?}", t))?;
            let n: usize = rest.parse().map_err(|_| format!("unknown block {:?}", t))?;
            Ok(Block::Sphere(n))
        })
        .collect()
}

/// Sums of signed monomials in the generator labels, e.g. "s4 - 2 s3 s1".
/// Multiplication runs through the ring, so written factor order is honored.
fn parse_class(
    model: &ManifoldModel,
    text: &str,
    degree: usize,
) -> Result<CohomologyClass, String> {
    let cleaned = text
        .replace('*', " ")
        .replace('+', " + ")
        .replace('-', " - ");
    let tokens: Vec<&str> = cleaned.split_whitespace().collect();
    let mut total = CohomologyClass::zero(&model.name, degree);
    let mut i = 0;
    let mut first = true;
    while i < tokens.len() {
        let mut sign = BigInt::from(1);
        match tokens[i] {
            "+" => i += 1,
            "-" => {
                sign = BigInt::from(-1);
                i += 1;
            }
            _ if first => {}
            other => return Err(format!("expected + or - before {:?}", other)),
        }
        first = false;
        if i >= tokens.len() {
            return Err("dangling sign".into());
        }
        let mut coeff = sign;
        let mut saw_int = false;
        if let Ok(k) = tokens[i].parse::<BigInt>() {
            coeff *= k;
            saw_int = true;
            i += 1;
        }
        let mut term = CohomologyClass::zero(&model.name, 0);
        term.terms.insert(Vec::new(), coeff.clone());
        let mut saw_label = false;
        while i < tokens.len() && tokens[i] != "+" && tokens[i] != "-" {
            saw_label = true;
            let label = tokens[i];
            let idx = model
                .ring
                .generators
                .iter()
                .position(|g| g.label == label)
                .ok_or_else(|| format!("unknown generator {:?}", label))?;
            let dual = model.block_dual(idx);
            term = model
                .ring
                .multiply(&term, &dual)
                .map_err(|e| e.to_string())?;
            i += 1;
        }
        if !saw_label {
            if saw_int && coeff == BigInt::from(0) {
                // a bare 0 stands for the zero class of the expected degree
                continue;
            }
            return Err("term needs at least one generator label".into());
        }
        if term.degree != degree {
            return Err(format!(
                "term has degree {}, expected {}",
                term.degree, degree
            ));
        }
        total = model.ring.add(&total, &term).map_err(|e| e.to_string())?;
    }
    Ok(total)
}

fn build_bundle(spec: &BundleSpec, model: &ManifoldModel) -> Result<BundleData, String> {
    let given: [(usize, &Option<String>); 3] = [(2, &spec.c2), (3, &spec.c3), (4, &spec.c4)];
    let mut chern: Vec<CohomologyClass> = (1..=spec.rank)
        .map(|i| CohomologyClass::zero(&model.name, 2 * i))
        .collect();
    for (k, text) in given {
        if let Some(text) = text {
            if k > spec.rank {
                return Err(format!("c{} needs rank at least {}", k, k));
            }
            chern[k - 1] = parse_class(model, text, 2 * k)?;
        }
    }
    BundleData::new(StructureGroup::SpecialUnitary, spec.rank, chern).map_err(|e| e.to_string())
}

fn cmd_invariants(spec: &BundleSpec, r: Option<usize>) -> u8 {
    let blocks = match parse_blocks(&spec.blocks) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let model = match ManifoldModel::product(&blocks) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let bundle = match build_bundle(spec, &model) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let inv = match su_loop_invariants(&model, &bundle) {
        Ok(i) => i,
        Err(CharError::NotIntegral(v)) => {
            eprintln!("error: non-integral invariant {}", v);
            return 3;
        }
        Err(e) => return fail(e),
    };
    match r {
        None => println!("({},{},{})", inv.a, inv.b, inv.c),
        Some(r) => {
            if r < 2 {
                return fail("rank must be at least 2");
            }
            let xi = xi_from_abc(r, &inv);
            println!("({},{},{})  Xi={}", inv.a, inv.b, inv.c, xi);
        }
    }
    0
}

fn cmd_orientable(expr: &str, n: usize) -> u8 {
    let parsed = match parse_group_expr(expr) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    match classify_orientability(&parsed, n) {
        Ok(OrientabilityVerdict::OrientableAll { simply_connected }) => {
            if simply_connected {
                println!("ORIENTABLE-ALL [simply-connected]");
            } else {
                println!("ORIENTABLE-ALL");
            }
            0
        }
        Ok(OrientabilityVerdict::Counterexample { manifold }) => {
            println!("COUNTEREXAMPLE: {}", manifold);
            0
        }
        Err(e) => fail(e),
    }
}

fn cmd_picard(query: &PicardCmd) -> u8 {
    match query {
        PicardCmd::SesCheck { pi0, pi1 } => {
            let g0 = match parse_cyclic(pi0) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            let g1 = match parse_cyclic(pi1) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            match ses_check(&g0, &g1) {
                Ok(rep) => {
                    println!("|Alt|={} |Skew|={} exact={}", rep.alt, rep.skew, rep.exact);
                    0
                }
                Err(e) => fail(e),
            }
        }
        PicardCmd::Forgetful => {
            let src = PicardData::super_torsors();
            let dst = PicardData::plain_torsors();
            let f0 = GroupMorphism::identity(cyclic_two());
            let f1 = GroupMorphism::identity(cyclic_two());
            report_functor(functor_exists(&src, &dst, &f0, &f1))
        }
        PicardCmd::Identity => {
            let src = PicardData::super_torsors();
            let f0 = GroupMorphism::identity(cyclic_two());
            let f1 = GroupMorphism::identity(cyclic_two());
            report_functor(functor_exists(&src, &src, &f0, &f1))
        }
        PicardCmd::Torsor => {
            if symmetry_is_involution() && hexagon_holds() {
                println!("OK");
                0
            } else {
                println!("COHERENCE FAILURE");
                2
            }
        }
    }
}

fn cyclic_two() -> AbelianGroup {
    AbelianGroup::cyclic(2)
}

fn parse_cyclic(text: &str) -> Result<CyclicProduct, String> {
    let group = parse_group_literal(text)?;
    CyclicProduct::from_abelian(&group).map_err(|e| e.to_string())
}

fn report_functor(result: Result<bool, bordcalc::picard::PicardError>) -> u8 {
    match result {
        Ok(true) => {
            println!("OK");
            0
        }
        Ok(false) => {
            println!("NOT SYMMETRIC-MONOIDAL");
            0
        }
        Err(e) => fail(e),
    }
}
