//! Command-line driver: file parsing, subcommand dispatch, and structured
//! run reports. Reports are key-value text, one record per line, in a
//! stable field order; re-running with identical arguments and seed
//! reproduces the report byte for byte except for the trailing timing
//! field.

pub mod format;

use std::fs;
use std::time::Instant;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use collat::collineation::{
    col_check, col_j2j2_decide, commutant_witness, lat_j2j2_sample, separator, ColVerdict,
    J2J2Grid, LatKindJ2J2, Verdict,
};
use collat::opspaces::{alg_lat_commutant, commutant, intertwiners, OperatorSpace};
use collat::structure::{jordan_type, nil_index, primary_decompose};
use collat::subspace::Subspace;
use collat::{Error, GaussianRational, Matrix, VectorSample};

use format::{matrix_inline, parse_matrix_file, parse_spectrum_flag, MatrixFile};

/// Process exit codes: 0 success/member, 1 refuted, 2 input error,
/// 3 precondition error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser)]
#[command(
    name = "collat",
    version,
    about = "Exact invariant-subspace lattices, commutants, reflexive covers, and collineation membership over the Gaussian rationals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical basis of the commutant (A)' = { T : AT = TA }.
    Commutant { a: String },
    /// Canonical basis of the intertwiner space { T : AT = TB }.
    Intertwine { a: String, b: String },
    /// Canonical basis of Alg Lat(N)' for a nilpotent N.
    Alglat { n: String },
    /// Jordan type and nil-index of a nilpotent matrix.
    Jordan { n: String },
    /// Primary decomposition with a verified spectrum.
    Decompose {
        a: String,
        /// Comma-separated eigenvalues; overrides the file's spectrum line.
        #[arg(long)]
        spectrum: Option<String>,
    },
    /// Membership of T in the collineation group Col(A).
    Colcheck {
        a: String,
        t: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random sample vectors appended to the deterministic grid.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Comma-separated eigenvalues; overrides the file's spectrum line.
        #[arg(long)]
        spectrum: Option<String>,
    },
    /// Commutant element B with B·x = T·x and T·(N)ₓ = B·(N)ₓ.
    Witness { n: String, t: String, x: String },
    /// Separator certificate (D, K) for nilpotents with two or more
    /// Jordan blocks of size at least 2.
    Separator { n: String },
    /// Sample the invariant-subspace families of J₂ ⊕ J₂.
    #[command(name = "sample-lattice-j2j2")]
    SampleLatticeJ2J2 {
        /// Grid bound g: parameters range over 0, ±1, …, ±g.
        #[arg(long, default_value_t = 2)]
        grid: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the acceptance suites (all, or one by number or name).
    Verify { suite: Option<String> },
}

struct Report {
    fields: Vec<(String, String)>,
}

impl Report {
    fn new(command: &str) -> Report {
        Report {
            fields: vec![("command".into(), command.into())],
        }
    }

    fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.fields.push((key.into(), value.into()));
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

struct CliFailure {
    message: String,
    code: i32,
}

fn input_error(message: impl Into<String>) -> CliFailure {
    CliFailure {
        message: message.into(),
        code: EXIT_INPUT,
    }
}

fn map_lib_error(e: Error) -> CliFailure {
    let code = match e {
        Error::NotNilpotent
        | Error::SpectrumInvalid(_)
        | Error::DuplicateEigenvalue(_)
        | Error::NotSimilar
        | Error::Precondition(_) => EXIT_PRECONDITION,
        Error::AmbientMismatch(_, _)
        | Error::DimensionMismatch(_)
        | Error::NotSquare(_, _)
        | Error::NotInvertible => EXIT_INPUT,
        // Refutation signal, not an input problem.
        Error::NoWitness => EXIT_REFUTED,
    };
    CliFailure {
        message: e.to_string(),
        code,
    }
}

/// Read and parse one input file, tracking its bytes in the digest.
fn load(path: &str, hasher: &mut Sha256) -> Result<MatrixFile, CliFailure> {
    let bytes = fs::read(path)
        .map_err(|e| input_error(format!("cannot read `{path}`: {e}")))?;
    hasher.update(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| input_error(format!("`{path}` is not valid UTF-8")))?;
    parse_matrix_file(&text).map_err(|e| input_error(format!("{path}: {e}")))
}

fn spectrum_for(
    file: &MatrixFile,
    flag: &Option<String>,
) -> Result<Option<Vec<GaussianRational>>, CliFailure> {
    if let Some(text) = flag {
        return parse_spectrum_flag(text)
            .map(Some)
            .map_err(|e| input_error(format!("--spectrum: {}", e.msg)));
    }
    Ok(file.spectrum.clone())
}

fn push_space(report: &mut Report, prefix: &str, space: &OperatorSpace) {
    let (rows, cols) = space.shape();
    report.push(format!("{prefix}.shape"), format!("{rows} {cols}"));
    report.push(format!("{prefix}.dim"), space.dim().to_string());
    for (i, b) in space.basis().iter().enumerate() {
        report.push(format!("{prefix}.basis.{i}"), matrix_inline(b));
    }
}

fn push_subspace(report: &mut Report, prefix: &str, s: &Subspace) {
    report.push(format!("{prefix}.ambient"), s.ambient_dim().to_string());
    report.push(format!("{prefix}.dim"), s.dim().to_string());
    report.push(format!("{prefix}.basis"), matrix_inline(s.basis()));
}

fn scalar_list(values: &[GaussianRational]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Execute one command line (without the program name) and return the
/// report text to print and the process exit code.
pub fn run(args: &[String]) -> (String, i32) {
    let start = Instant::now();
    let mut argv = vec!["collat".to_string()];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let code = if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                EXIT_OK
            } else {
                EXIT_INPUT
            };
            return (e.to_string(), code);
        }
    };
    match dispatch(cli.command) {
        Ok((mut report, code)) => {
            report.push("timing.ms", start.elapsed().as_millis().to_string());
            (report.render(), code)
        }
        Err(f) => {
            let mut report = Report::new("error");
            report.push("error", f.message);
            report.push("timing.ms", start.elapsed().as_millis().to_string());
            (report.render(), f.code)
        }
    }
}

fn dispatch(command: Command) -> Result<(Report, i32), CliFailure> {
    let mut hasher = Sha256::new();
    match command {
        Command::Commutant { a } => {
            let file = load(&a, &mut hasher)?;
            let mut report = Report::new(&format!("commutant {a}"));
            report.push("inputs.digest", hex_digest(hasher));
            report.push("seed", "0");
            let space = commutant(&file.matrix).map_err(map_lib_error)?;
            report.push("outcome", "ok");
            push_space(&mut report, "space", &space);
            Ok((report, EXIT_OK))
        }
        Command::Intertwine { a, b } => {
            let fa = load(&a, &mut hasher)?;
            let fb = load(&b, &mut hasher)?;
            let mut report = Report::new(&format!("intertwine {a} {b}"));
            report.push("inputs.digest", hex_digest(hasher));
            report.push("seed", "0");
            let space = intertwiners(&fa.matrix, &fb.matrix).map_err(map_lib_error)?;
            report.push("outcome", "ok");
            push_space(&mut report, "space", &space);
            Ok((report, EXIT_OK))
        }
        Command::Alglat { n } => {
            let file = load(&n, &mut hasher)?;
            let mut report = Report::new(&format!("alglat {n}"));
            report.push("inputs.digest", hex_digest(hasher));
            report.push("seed", "0");
            let space = alg_lat_commutant(&file.matrix).map_err(map_lib_error)?;
            report.push("outcome", "ok");
            push_space(&mut report, "space", &space);
            Ok((report, EXIT_OK))
        }
        Command::Jordan { n } => {
            let file = load(&n, &mut hasher)?;
            let mut report = Report::new(&format!("jordan {n}"));
            report.push("inputs.digest", hex_digest(hasher));
            report.push("seed", "0");
            let t = jordan_type(&file.matrix).map_err(map_lib_error)?;
            let index = nil_index(&file.matrix).map_err(map_lib_error)?;
            report.push("outcome", "ok");
            report.push(
                "type",
                t.sizes()
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            report.push("nil.index", index.to_string());
            Ok((report, EXIT_OK))
        }
        Command::Decompose { a, spectrum } => {
            let file = load(&a, &mut hasher)?;
            let mut report = Report::new(&format!("decompose {a}"));
            report.push("inputs.digest", hex_digest(hasher));
            report.push("seed", "0");
            let spec = spectrum_for(&file, &spectrum)?
                .ok_or_else(|| input_error("no spectrum: add a `spectrum:` line or --spectrum"))?;
            let pd = primary_decompose(&file.matrix, &spec).map_err(map_lib_error)?;
            report.push("outcome", "ok");
            report.push("components", pd.components.len().to_string());
            for (i, c) in pd.components.iter().enumerate() {
                report.push(format!("component.{i}.eigenvalue"), c.eigenvalue.to_string());
                report.push(format!("component.{i}.exponent"), c.exponent.to_string());
                report.push(format!("component.{i}.dim"), c.component.dim().to_string());
                report.push(format!("component.{i}.basis"), matrix_inline(&c.basis));
                report.push(format!("component.{i}.nilpotent"), matrix_inline(&c.nilpotent));
            }
            Ok((report, EXIT_OK))
        }
        Command::Colcheck {
            a,
            t,
            seed,
            samples,
            spectrum,
        } => {
            let fa = load(&a, &mut hasher)?;
            let ft = load(&t, &mut hasher)?;
            let mut report = Report::new(&format!("colcheck {a} {t}"));
            report.push("inputs.digest", hex_digest(hasher));
            report.push("seed", seed.to_string());
            report.push("samples", samples.to_string());
            let spec = match spectrum_for(&fa, &spectrum)? {
                Some(s) => s,
                None => {
                    // A nilpotent A needs no annotation.
                    if collat::structure::is_nilpotent(&fa.matrix).map_err(map_lib_error)? {
                        vec![GaussianRational::zero()]
                    } else {
                        return Err(input_error(
                            "A is not nilpotent: supply its spectrum via a `spectrum:` line or --spectrum",
                        ));
                    }
                }
            };
            report.push("spectrum", scalar_list(&spec));
            let sample = VectorSample::new(fa.matrix.rows(), samples, seed);
            let verdict = col_check(&fa.matrix, &ft.matrix, &spec, &sample).map_err(map_lib_error)?;
            push_verdict(&mut report, &verdict, &fa.matrix, &ft.matrix, &spec)?;
            let code = if verdict.is_member() {
                EXIT_OK
            } else {
                EXIT_REFUTED
            };
            Ok((report, code))
        }
        Command::Witness { n, t, x } => {
            let fn_ = load(&n, &mut hasher)?;
            let ft = load(&t, &mut hasher)?;
            let fx = load(&x, &mut hasher)?;
            let mut report = Report::new(&format!("witness {n} {t} {x}"));
            report.push("inputs.digest", hex_digest(hasher));
            report.push("seed", "0");
            let vec = column_vector(&fx.matrix)
                .ok_or_else(|| input_error("x must be an n x 1 or 1 x n matrix file"))?;
            match commutant_witness(&fn_.matrix, &ft.matrix, &vec) {
                Ok(w) => {
                    report.push("outcome", "witness");
                    report.push("witness.b", matrix_inline(&w.b));
                    report.push("witness.image.identity", w.image_identity.to_string());
                    Ok((report, EXIT_OK))
                }
                Err(Error::NoWitness) => {
                    report.push("outcome", "no-witness");
                    report.push(
                        "note",
                        "no commutant element agrees with T at x; T is not a collineation of N",
                    );
                    Ok((report, EXIT_REFUTED))
                }
                Err(e) => Err(map_lib_error(e)),
            }
        }
        Command::Separator { n } => {
            let file = load(&n, &mut hasher)?;
            let mut report = Report::new(&format!("separator {n}"));
            report.push("inputs.digest", hex_digest(hasher));
            report.push("seed", "0");
            let sep = separator(&file.matrix).map_err(map_lib_error)?;
            let verified = sep.verify(&file.matrix).map_err(map_lib_error)?;
            report.push("outcome", "ok");
            report.push("separator.d", matrix_inline(&sep.d));
            push_subspace(&mut report, "separator.k", &sep.k);
            push_subspace(
                &mut report,
                "separator.dk",
                &collat::image(&sep.d, &sep.k).map_err(map_lib_error)?,
            );
            report.push("separator.verified", verified.to_string());
            Ok((report, EXIT_OK))
        }
        Command::SampleLatticeJ2J2 { grid, seed } => {
            let mut report = Report::new(&format!("sample-lattice-j2j2 --grid {grid}"));
            report.push("inputs.digest", hex_digest(hasher));
            report.push("seed", seed.to_string());
            let mut values = vec![GaussianRational::zero()];
            for v in 1..=grid as i64 {
                values.push(GaussianRational::from_int(v));
                values.push(GaussianRational::from_int(-v));
            }
            let grid = J2J2Grid {
                values,
                random_tuples: 10,
                seed,
            };
            let elems = lat_j2j2_sample(&grid);
            report.push("outcome", "ok");
            report.push("elements", elems.len().to_string());
            for (i, el) in elems.iter().enumerate() {
                report.push(format!("element.{i}.kind"), lattice_kind_name(&el.kind));
                if let Some(params) = lattice_kind_params(&el.kind) {
                    report.push(format!("element.{i}.params"), params);
                }
                report.push(format!("element.{i}.dim"), el.realized.dim().to_string());
                report.push(
                    format!("element.{i}.basis"),
                    matrix_inline(el.realized.basis()),
                );
            }
            Ok((report, EXIT_OK))
        }
        Command::Verify { suite } => {
            let mut report = Report::new(match &suite {
                Some(s) => format!("verify {s}"),
                None => "verify".to_string(),
            }
            .as_str());
            let ids: Vec<usize> = match &suite {
                None => collat::suites::CRITERIA.iter().map(|(id, _, _)| *id).collect(),
                Some(s) => {
                    let id = s
                        .parse::<usize>()
                        .ok()
                        .filter(|id| collat::suites::CRITERIA.iter().any(|(cid, _, _)| cid == id))
                        .or_else(|| collat::suites::find_by_name(s))
                        .ok_or_else(|| input_error(format!("unknown suite `{s}`")))?;
                    vec![id]
                }
            };
            let mut all_ok = true;
            let mut results = Vec::new();
            for id in ids {
                let r = collat::suites::run(id);
                all_ok &= r.ok;
                results.push(r);
            }
            for r in &results {
                report.push(
                    format!("criterion.{:02}", r.id),
                    format!(
                        "{} {} — {}",
                        if r.ok { "PASS" } else { "FAIL" },
                        r.name,
                        r.details
                    ),
                );
            }
            report.push("outcome", if all_ok { "pass" } else { "fail" });
            Ok((report, if all_ok { EXIT_OK } else { EXIT_REFUTED }))
        }
    }
}

fn hex_digest(hasher: Sha256) -> String {
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn column_vector(m: &Matrix) -> Option<Vec<GaussianRational>> {
    if m.cols() == 1 {
        Some(m.col_vec(0))
    } else if m.rows() == 1 {
        Some(m.row_vec(0))
    } else {
        None
    }
}

fn push_verdict(
    report: &mut Report,
    verdict: &ColVerdict,
    a: &Matrix,
    t: &Matrix,
    spectrum: &[GaussianRational],
) -> Result<(), CliFailure> {
    report.push(
        "outcome",
        match verdict.verdict {
            Verdict::MemberExact => "MemberExact",
            Verdict::MemberSampled => "MemberSampled",
            Verdict::NonMember => "NonMember",
            Verdict::NotInvertible => "NotInvertible",
        },
    );
    for (i, step) in verdict.decision_path.iter().enumerate() {
        report.push(format!("decision.path.{i}"), step.clone());
    }
    report.push(
        "sample.vectors",
        verdict.sample_stats.vectors_tested.to_string(),
    );
    report.push("sample.seed", verdict.sample_stats.seed.to_string());
    if let Some(w) = &verdict.witness {
        report.push("witness.kind", w.kind_name());
        push_subspace(report, "witness.subspace", w.subspace());
        let verified = w.verify(a, t, spectrum).map_err(map_lib_error)?;
        report.push("witness.verified", verified.to_string());
    }
    // For the two-block type, surface the closed-form parametrization.
    if a.rows() == 4 {
        if let Some(p) = col_j2j2_decide(t) {
            report.push("closed.form.t", p.t.to_string());
            report.push(
                "closed.form.gamma",
                scalar_list(&[
                    p.gamma11, p.gamma12, p.gamma13, p.gamma14, p.gamma31, p.gamma32, p.gamma33,
                    p.gamma34,
                ]),
            );
        }
    }
    Ok(())
}

fn lattice_kind_name(kind: &LatKindJ2J2) -> &'static str {
    match kind {
        LatKindJ2J2::Zero => "zero",
        LatKindJ2J2::Kernel => "kernel",
        LatKindJ2J2::Full => "full",
        LatKindJ2J2::Line { .. } => "line",
        LatKindJ2J2::Plane { .. } => "plane",
        LatKindJ2J2::PreimageLine { .. } => "preimage-line",
    }
}

fn lattice_kind_params(kind: &LatKindJ2J2) -> Option<String> {
    match kind {
        LatKindJ2J2::Zero | LatKindJ2J2::Kernel | LatKindJ2J2::Full => None,
        LatKindJ2J2::Line { omega, kappa } => Some(format!("omega={omega} kappa={kappa}")),
        LatKindJ2J2::Plane {
            omega,
            kappa,
            rho,
            theta,
        } => Some(format!(
            "omega={omega} kappa={kappa} rho={rho} theta={theta}"
        )),
        LatKindJ2J2::PreimageLine { omega, kappa } => {
            Some(format!("omega={omega} kappa={kappa}"))
        }
    }
}
