//! Command-line surface for analyzing conjugation symmetries of unitary
//! matrices. All numeric output is JSON (stdout or --out); human-readable
//! summaries go to stderr.
//!
//! Exit codes: 0 success/member, 1 negative verdict, 2 parse error,
//! 3 not unitary, 4 residual failure, 5 too many clusters, 6 bad params.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use conjsym::antilinear::{conjugation_check, csymmetry_residual, AntilinearOp, Conjugation};
use conjsym::error::Error;
use conjsym::family::ConjugationParametrization;
use conjsym::hyperinv::{equivalence_audit, AuditConfig};
use conjsym::matrix::ComplexMatrix;
use conjsym::shift::{
    self, dft_model, flip_example, grid_norm, lambda_drift_phi, sincos_phi, PhiSymbol,
    PowerShiftModel,
};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_UNITARY: u8 = 3;
const EXIT_RESIDUAL: u8 = 4;
const EXIT_SIZE: u8 = 5;
const EXIT_PARAMS: u8 = 6;

#[derive(Parser)]
#[command(
    name = "conjsym",
    about = "Construct, sample, verify, and decompose the conjugations C with C U C = U* \
             for a unitary matrix U, and audit the hyperinvariant subspace lattice.",
    version
)]
struct Cli {
    #[command(flatten)]
    config: Config,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Serialize)]
struct Config {
    /// Residual tolerance for membership and verification checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Circular-arc tolerance for eigenvalue clustering.
    #[arg(long = "cluster-tol", global = true, default_value_t = 1e-8)]
    cluster_tol: f64,

    /// RNG seed; the CONJSYM_SEED environment variable overrides the
    /// default when the flag is absent.
    #[arg(long, global = true, env = "CONJSYM_SEED", default_value_t = 0)]
    seed: u64,

    /// Write the JSON report to this path instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral clusters, family block dimensions, canonical member, and
    /// the U = J1 J2 factorization of a unitary matrix file.
    Analyze {
        /// Matrix JSON file: {"rows": n, "cols": n, "data": [[re, im], ...]}.
        input: PathBuf,
    },
    /// Sample family members to JSON files and print the residual table.
    Sample {
        input: PathBuf,
        /// Number of members to draw.
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Directory for member files (member_000.json, ...).
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Verify whether a conjugation file belongs to the family of a unitary.
    Verify {
        unitary: PathBuf,
        conjugation: PathBuf,
    },
    /// Hyperinvariance equivalence audit of the spectral lattice.
    Lattice {
        input: PathBuf,
        /// Random members drawn per invariance test.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Random non-lattice subspaces probed for witnesses.
        #[arg(long, default_value_t = 20)]
        probes: usize,
    },
    /// Discretized bilateral-shift demo: Wold transform, intertwining, and
    /// preset conjugation families for multiplication by xi^N.
    ShiftDemo {
        /// Base grid size n (the model lives on n*N points).
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Symbol power N.
        #[arg(long = "power", default_value_t = 2)]
        power: usize,
        /// Preset family: constant-phase, sincos, lambda-drift, or all.
        #[arg(long, default_value = "all")]
        family: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    };
    ExitCode::from(code)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::Io(_) => EXIT_PARSE,
        Error::NotUnitary { .. } => EXIT_NOT_UNITARY,
        Error::TooManyClusters { .. } => EXIT_SIZE,
        // retryable with an adjusted --cluster-tol
        Error::ClusteringUnstable { .. } => EXIT_PARAMS,
        Error::BadParams { .. } | Error::RangeError { .. } | Error::BadPartition { .. } => {
            EXIT_PARAMS
        }
        _ => EXIT_PARSE,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    if cli.config.tol <= 0.0 || cli.config.cluster_tol <= 0.0 {
        return Err(Error::BadParams {
            reason: "tolerances must be positive".into(),
        });
    }
    match &cli.command {
        Command::Analyze { input } => cmd_analyze(&cli.config, input),
        Command::Sample { input, count, dir } => cmd_sample(&cli.config, input, *count, dir),
        Command::Verify {
            unitary,
            conjugation,
        } => cmd_verify(&cli.config, unitary, conjugation),
        Command::Lattice {
            input,
            samples,
            probes,
        } => cmd_lattice(&cli.config, input, *samples, *probes),
        Command::ShiftDemo { n, power, family } => cmd_shift_demo(&cli.config, *n, *power, family),
    }
}

fn load_matrix(path: &Path) -> Result<ComplexMatrix, Error> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_antilinear(path: &Path) -> Result<AntilinearOp, Error> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Tolerance at which input matrices are accepted as unitary.
const INPUT_UNITARY_TOL: f64 = 1e-8;

fn load_unitary(path: &Path, tol: f64) -> Result<ComplexMatrix, Error> {
    let m = load_matrix(path)?;
    let residual = m.unitary_residual()?;
    if residual > tol {
        return Err(Error::NotUnitary { residual, tol });
    }
    Ok(m)
}

fn emit(config: &Config, report: &impl Serialize) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(report)?;
    match &config.out {
        Some(path) => fs::write(path, format!("{json}\n"))?,
        None => println!("{json}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct AnalyzeReport {
    config: Config,
    rows: usize,
    unitary_residual: f64,
    cluster_count: usize,
    clusters: Vec<conjsym::Cluster>,
    block_dims: Vec<usize>,
    canonical_member: Conjugation,
    factorization: FactorizationReport,
}

#[derive(Serialize)]
struct FactorizationReport {
    j1: Conjugation,
    j2: Conjugation,
    product_residual: f64,
    j1_csym_residual: f64,
    j2_csym_residual: f64,
}

fn cmd_analyze(config: &Config, input: &Path) -> Result<u8, Error> {
    let u = load_unitary(input, INPUT_UNITARY_TOL)?;
    let p = ConjugationParametrization::from_unitary(&u, config.cluster_tol)?;
    let dec = p.decomposition();

    let (j1, j2) = p.factor()?;
    let product = j1.matrix().matmul(&j2.matrix().conj())?;
    let factorization = FactorizationReport {
        product_residual: product.frobenius_distance(&u),
        j1_csym_residual: csymmetry_residual(&u, j1.as_op())?,
        j2_csym_residual: csymmetry_residual(&u, j2.as_op())?,
        j1,
        j2,
    };

    let report = AnalyzeReport {
        config: config.clone(),
        rows: u.rows(),
        unitary_residual: u.unitary_residual()?,
        cluster_count: dec.cluster_count(),
        clusters: dec.clusters().to_vec(),
        block_dims: p.block_dims(),
        canonical_member: p.canonical_member(),
        factorization,
    };
    eprintln!(
        "analyze: n = {}, d = {} clusters, block dims {:?}",
        report.rows, report.cluster_count, report.block_dims
    );
    emit(config, &report)?;
    Ok(0)
}

#[derive(Serialize)]
struct SampleReport {
    config: Config,
    count: usize,
    files: Vec<String>,
    residuals: Vec<SampleRow>,
    max_residual: f64,
    all_pass: bool,
}

#[derive(Serialize)]
struct SampleRow {
    file: String,
    csymmetry: f64,
    involution: f64,
    isometry: f64,
}

fn cmd_sample(config: &Config, input: &Path, count: usize, dir: &Path) -> Result<u8, Error> {
    let u = load_unitary(input, INPUT_UNITARY_TOL)?;
    let p = ConjugationParametrization::from_unitary(&u, config.cluster_tol)?;
    fs::create_dir_all(dir)?;

    let mut rng = conjsym::haar::rng_from_seed(config.seed);
    let mut files = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    let mut max_residual: f64 = 0.0;
    for k in 0..count {
        let member = p.sample_member_with(&mut rng);
        let name = format!("member_{k:03}.json");
        let path = dir.join(&name);
        fs::write(
            &path,
            format!("{}\n", serde_json::to_string_pretty(&member)?),
        )?;
        let res = p.member_residuals(&member)?;
        max_residual = max_residual.max(res.max());
        residuals.push(SampleRow {
            file: name.clone(),
            csymmetry: res.csymmetry,
            involution: res.involution,
            isometry: res.isometry,
        });
        files.push(name);
    }
    let all_pass = max_residual <= config.tol;
    let report = SampleReport {
        config: config.clone(),
        count,
        files,
        residuals,
        max_residual,
        all_pass,
    };
    eprintln!(
        "sample: {} member(s) written to {}, max residual {:.3e}",
        count,
        dir.display(),
        max_residual
    );
    emit(config, &report)?;
    Ok(if all_pass { 0 } else { EXIT_RESIDUAL })
}

#[derive(Serialize)]
struct VerifyReport {
    config: Config,
    conjugation_check: conjsym::ConjugationCheck,
    csym_residual: f64,
    is_csymmetric: bool,
    membership: Option<MembershipRow>,
    verdict: String,
}

#[derive(Serialize)]
struct MembershipRow {
    is_member: bool,
    off_block_mass: f64,
    block_dims: Vec<usize>,
}

fn cmd_verify(config: &Config, unitary: &Path, conjugation: &Path) -> Result<u8, Error> {
    let u = load_unitary(unitary, INPUT_UNITARY_TOL)?;
    let op = load_antilinear(conjugation)?;
    if op.dim() != u.rows() {
        return Err(Error::DimensionMismatch {
            left: op.dim().to_string(),
            right: u.rows().to_string(),
            context: "verify",
        });
    }

    let check = conjugation_check(&op, conjsym::antilinear::CONJUGATION_TOL);
    let csym = csymmetry_residual(&u, &op)?;
    let is_csym = csym <= config.tol;

    let mut membership = None;
    let mut member = false;
    if check.is_conjugation {
        let c = Conjugation::new(op.matrix().clone())?;
        let p = ConjugationParametrization::from_unitary(&u, config.cluster_tol)?;
        let m = p.membership(&c)?;
        member = m.is_member;
        membership = Some(MembershipRow {
            is_member: m.is_member,
            off_block_mass: m.off_block_mass,
            block_dims: p.block_dims(),
        });
    }

    let verdict = if check.is_conjugation && is_csym && member {
        "member"
    } else {
        "non-member"
    };
    let report = VerifyReport {
        config: config.clone(),
        conjugation_check: check,
        csym_residual: csym,
        is_csymmetric: is_csym,
        membership,
        verdict: verdict.into(),
    };
    eprintln!(
        "verify: {} (csym residual {:.3e})",
        report.verdict, report.csym_residual
    );
    emit(config, &report)?;
    Ok(if verdict == "member" {
        0
    } else {
        EXIT_NEGATIVE
    })
}

fn cmd_lattice(config: &Config, input: &Path, samples: usize, probes: usize) -> Result<u8, Error> {
    let u = load_unitary(input, INPUT_UNITARY_TOL)?;
    let p = ConjugationParametrization::from_unitary(&u, config.cluster_tol)?;
    let audit = equivalence_audit(
        &p,
        &AuditConfig {
            samples,
            probes,
            seed: config.seed,
            defect_tol: 1e-6,
        },
    )?;
    eprintln!(
        "lattice: {} members over {} clusters, lattice_all_pass = {}, inconclusive probes = {}",
        audit.lattice.len(),
        audit.cluster_count,
        audit.lattice_all_pass,
        audit.inconclusive_count
    );
    emit(config, &audit)?;
    Ok(0)
}

#[derive(Serialize)]
struct ShiftDemoReport {
    config: Config,
    n: usize,
    power: usize,
    grid_size: usize,
    wold_round_trip: f64,
    parseval_defect: f64,
    intertwine_residual: f64,
    family_block_dims: Vec<usize>,
    presets: Vec<PresetRow>,
    dft: conjsym::DftReport,
    flip: FlipRow,
}

#[derive(Serialize)]
struct PresetRow {
    name: String,
    csym_residual: f64,
    involution_residual: f64,
    isometry_residual: f64,
    is_member: bool,
    /// max | |phi11|^2 + |phi21|^2 - 1 | and max | |phi11| - |phi22| | over
    /// the grid (N = 2 presets only).
    unitarity_identities: Option<[f64; 2]>,
}

#[derive(Serialize)]
struct FlipRow {
    csym_residual: f64,
    witness_defect: f64,
    witness: Vec<[f64; 2]>,
}

fn cmd_shift_demo(config: &Config, n: usize, power: usize, family: &str) -> Result<u8, Error> {
    let model = PowerShiftModel::new(n, power)?;
    let p = model.parametrization()?;

    // Wold checks on a seeded random vector
    let mut rng = conjsym::haar::rng_from_seed(config.seed);
    let f: Vec<conjsym::Complex64> =
        conjsym::haar::complex_gaussian(model.grid_size(), 1, &mut rng).column(0);
    let parts = model.wold_transform(&f)?;
    let back = model.wold_inverse(&parts)?;
    let wold_round_trip = conjsym::matrix::vec_dist(&f, &back);
    let parseval_defect = (parts
        .iter()
        .map(|part| grid_norm(part).powi(2))
        .sum::<f64>()
        - grid_norm(&f).powi(2))
    .abs();

    let selected: Vec<&str> = match family {
        "all" => vec!["constant-phase", "sincos", "lambda-drift"],
        other => vec![other],
    };
    let mut presets = Vec::new();
    for name in selected {
        let phi: PhiSymbol = match name {
            "constant-phase" => PhiSymbol::constant_phase(&model, 0.0),
            "sincos" => sincos_phi(&model)?,
            "lambda-drift" => lambda_drift_phi(&model, 0.6, 1.0)?,
            other => return Err(Error::BadParams {
                reason: format!(
                    "unknown preset '{other}' (expected constant-phase, sincos, lambda-drift, all)"
                ),
            }),
        };
        let unitarity_identities = if model.power() == 2 {
            let (a, b) = shift::z2_unitarity_identities(&phi);
            Some([a, b])
        } else {
            None
        };
        let c = model.conjugation_from_phi(&phi)?;
        let res = p.member_residuals(&c)?;
        presets.push(PresetRow {
            name: name.to_string(),
            csym_residual: res.csymmetry,
            involution_residual: res.involution,
            isometry_residual: res.isometry,
            is_member: res.max() <= config.tol,
            unitarity_identities,
        });
    }

    let dft = dft_model(model.grid_size().max(2))?;

    let omega1: BTreeSet<usize> = (0..n / 2).collect();
    let fix = flip_example(n, &omega1)?;
    let flip = FlipRow {
        csym_residual: fix.csym_residual,
        witness_defect: fix.witness_defect,
        witness: fix.witness.iter().map(|z| [z.re, z.im]).collect(),
    };

    let report = ShiftDemoReport {
        config: config.clone(),
        n,
        power,
        grid_size: model.grid_size(),
        wold_round_trip,
        parseval_defect,
        intertwine_residual: model.intertwine_residual(),
        family_block_dims: p.block_dims(),
        presets,
        dft,
        flip,
    };
    eprintln!(
        "shift-demo: grid {}x{} = {}, round trip {:.3e}, intertwine {:.3e}",
        n, power, report.grid_size, report.wold_round_trip, report.intertwine_residual
    );
    emit(config, &report)?;
    let all_pass = report.presets.iter().all(|p| p.is_member);
    Ok(if all_pass { 0 } else { EXIT_RESIDUAL })
}
