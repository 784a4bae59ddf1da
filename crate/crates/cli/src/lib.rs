//! Argument parsing, dispatch and output for the `adelie` binary.

use std::fmt::Write as _;

use adelie_core::chevalley::{verify_chevalley, ChevalleyConstants, VerifyOptions};
use adelie_core::cotangent::{
    cht, cht_zero_criterion, cotangent_verdict, euler_characteristic_graded, verify_cht_lemma,
    verify_prop11_induction, verify_remark10, verify_simple_euler, DEFAULT_MULTISET_CAP,
};
use adelie_core::flag_cohomology::{
    bwb, index, schubert_restriction_degree, triviality_criterion, verify_lemma3, verify_prop2,
    verify_serre_duality,
};
use adelie_core::obstruction::{
    build_system, certify_solvability, check_bianchi, CotangentOracle, FlagOracle, H2Oracle, Half,
    SurfaceOracle,
};
use adelie_core::surface::{
    bundle_decomposition, resolution_lattice, root_to_divisor, surface_h2_oracle, verify_isometry,
    verify_restriction_degrees, DivisorClass,
};
use adelie_core::{Error, LatticeVector, Report, RootSystem};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub const SCHEMA: u64 = 1;

/// Which core operations each command reaches.
pub const DISPATCH: &[(&str, &[&str])] = &[
    (
        "roots",
        &[
            "root_system::RootSystem::from_spec",
            "root_system::RootSystem::roots",
            "root_system::RootSystem::height",
            "root_system::RootSystem::highest_root",
            "root_system::RootSystem::to_weight",
        ],
    ),
    (
        "cartan",
        &[
            "root_system::RootSystem::cartan",
            "root_system::RootSystem::cartan_det",
            "root_system::CartanType::dynkin_edges",
            "root_system::RootSystem::rho",
        ],
    ),
    (
        "bwb",
        &[
            "flag_cohomology::bwb",
            "flag_cohomology::index",
            "flag_cohomology::schubert_restriction_degree",
        ],
    ),
    ("cht", &["cotangent::cht", "cotangent::cht_zero_criterion"]),
    ("cotangent", &["cotangent::cotangent_verdict"]),
    ("euler", &["cotangent::euler_characteristic_graded"]),
    (
        "chevalley",
        &[
            "chevalley::ChevalleyConstants::build",
            "chevalley::ChevalleyConstants::dump",
            "chevalley::ChevalleyConstants::is_centerless",
        ],
    ),
    (
        "obstruction",
        &[
            "obstruction::build_system",
            "obstruction::certify_solvability",
            "obstruction::ObstructionSystem::render_with",
            "flag_cohomology::triviality_criterion",
        ],
    ),
    (
        "surface",
        &[
            "surface::resolution_lattice",
            "surface::root_to_divisor",
            "surface::bundle_decomposition",
        ],
    ),
    (
        "verify",
        &[
            "chevalley::verify_chevalley",
            "flag_cohomology::verify_prop2",
            "flag_cohomology::verify_lemma3",
            "flag_cohomology::verify_serre_duality",
            "cotangent::verify_remark10",
            "cotangent::verify_cht_lemma",
            "cotangent::verify_prop11_induction",
            "cotangent::verify_simple_euler",
            "surface::verify_isometry",
            "surface::verify_restriction_degrees",
            "surface::surface_h2_oracle",
            "obstruction::check_bianchi",
        ],
    ),
];

const NUMBERING: &str = "Simple roots: A_n is the path 1-2-...-n; D_n is the path 1-...-(n-2) with n-1 and n \
both attached to n-2; E_n uses Bourbaki numbering (chain 1-3-4-...-n, node 2 attached to 4).";

#[derive(Debug, Parser)]
#[command(name = "adelie", version, about = "Exact ADE Lie theory computations", after_help = NUMBERING)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Root,
    Weight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HalfArg {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Flag,
    Cotangent,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Chevalley,
    Prop2,
    Lemma3,
    Cht,
    Prop11,
    Surface,
    Obstruction,
    All,
}

/// A vector argument with its basis.
#[derive(Debug, clap::Args)]
pub struct VectorArgs {
    /// Basis of the coordinates (default: weight).
    #[arg(long, value_enum)]
    pub basis: Option<BasisArg>,
    /// Shorthand for `--basis root`.
    #[arg(long, conflicts_with = "basis")]
    pub root: bool,
    /// Coordinates, one per simple root.
    #[arg(allow_negative_numbers = true, required = true)]
    pub coords: Vec<i64>,
}

impl VectorArgs {
    fn vector(&self) -> LatticeVector {
        match (self.root, self.basis) {
            (true, _) | (false, Some(BasisArg::Root)) => LatticeVector::root(self.coords.clone()),
            _ => LatticeVector::weight(self.coords.clone()),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All roots with heights and weight coordinates.
    Roots { type_spec: String },
    /// Cartan matrix, its determinant and the Dynkin edges.
    Cartan { type_spec: String },
    /// Borel-Weil-Bott verdict for `L_λ` on `G/B`.
    Bwb {
        type_spec: String,
        #[command(flatten)]
        v: VectorArgs,
    },
    /// `Cht(λ)` with `λ*`, `λ⁺` and a longest chain.
    Cht {
        type_spec: String,
        #[command(flatten)]
        v: VectorArgs,
    },
    /// Cohomology verdict for `𝔏_λ` on the cotangent bundle.
    Cotangent {
        type_spec: String,
        #[command(flatten)]
        v: VectorArgs,
    },
    /// Graded Euler characteristic `χ(S^j 𝔫* ⊗ L_λ)`; the last number is `j`.
    Euler {
        type_spec: String,
        #[command(flatten)]
        v: VectorArgs,
        /// Maximum number of multisets to sum over.
        #[arg(long, default_value_t = DEFAULT_MULTISET_CAP)]
        multiset_cap: u128,
    },
    /// Chevalley basis structure constants.
    Chevalley {
        type_spec: String,
        /// Print the sign table as `α | β | n`.
        #[arg(long)]
        dump: bool,
    },
    /// Integrability system for one half of the roots and its solvability certificate.
    Obstruction {
        type_spec: String,
        #[arg(value_enum)]
        half: HalfArg,
        #[arg(long, value_enum, default_value_t = Space::Flag)]
        space: Space,
        /// Print the equations instead of JSON.
        #[arg(long)]
        emit_system: bool,
    },
    /// Exceptional-curve lattice of the resolved surface singularity.
    Surface { type_spec: String },
    /// Run a verification suite; exits 1 on any violation.
    Verify {
        type_spec: String,
        #[arg(value_enum)]
        suite: Suite,
        /// Exhaustive Jacobi for E8 instead of sampling.
        #[arg(long)]
        e8_full: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on weights visited by ball sweeps.
        #[arg(long, default_value_t = 10_000)]
        sample_budget: usize,
        #[arg(long, default_value_t = DEFAULT_MULTISET_CAP)]
        multiset_cap: u128,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Roots { .. } => "roots",
            Command::Cartan { .. } => "cartan",
            Command::Bwb { .. } => "bwb",
            Command::Cht { .. } => "cht",
            Command::Cotangent { .. } => "cotangent",
            Command::Euler { .. } => "euler",
            Command::Chevalley { .. } => "chevalley",
            Command::Obstruction { .. } => "obstruction",
            Command::Surface { .. } => "surface",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }
}

/// Exit 2 for bad input, 1 for anything that went wrong past validation.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::IllegalType { .. }
        | Error::RankTooLarge { .. }
        | Error::ParseType(_)
        | Error::BasisMismatch { .. }
        | Error::NotInRootLattice(_)
        | Error::NotARoot(_)
        | Error::DependentRoots
        | Error::IndexOutOfRange { .. }
        | Error::NotDominant(_)
        | Error::WrongBasis { .. }
        | Error::BudgetExceeded { .. }
        | Error::NotARootClass(_)
        | Error::NotEffective(_) => 2,
        _ => 1,
    }
}

/// Parse and run. Never exits the process.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome {
            code: error_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn render(format: Format, value: &Value, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("json");
            s.push('\n');
            s
        }
        Format::Text => text(),
    }
}

fn big(n: &impl ToString) -> Value {
    serde_json::from_str(&n.to_string()).expect("integer")
}

fn envelope(rs: &RootSystem, command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("type".into(), json!(rs.cartan_type().to_string()));
    m
}

fn check_len(rs: &RootSystem, found: usize) -> Result<(), Error> {
    if found != rs.rank() {
        return Err(Error::BasisMismatch { rank: rs.rank(), found });
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    let f = cli.format;
    match &cli.command {
        Command::Roots { type_spec } => {
            let rs = RootSystem::from_spec(type_spec)?;
            let mut rows = Vec::new();
            let mut text = String::new();
            for a in rs.roots() {
                let w = rs.to_weight(a)?;
                rows.push(json!({"root": a.coords, "weight": w.coords, "height": rs.signed_height(a)}));
                writeln!(text, "{a}\tweight {w}\theight {}", rs.signed_height(a)).unwrap();
            }
            let mut m = envelope(&rs, "roots");
            m.insert("rank".into(), json!(rs.rank()));
            m.insert("dim".into(), json!(rs.dim()));
            m.insert("num_positive".into(), json!(rs.num_positive()));
            m.insert("highest_root".into(), json!(rs.highest_root().coords));
            m.insert("roots".into(), Value::Array(rows));
            Ok(Outcome::ok(render(f, &Value::Object(m), || text)))
        }
        Command::Cartan { type_spec } => {
            let rs = RootSystem::from_spec(type_spec)?;
            let edges: Vec<(usize, usize)> =
                rs.cartan_type().dynkin_edges().iter().map(|&(i, j)| (i + 1, j + 1)).collect();
            let mut m = envelope(&rs, "cartan");
            m.insert("cartan".into(), json!(rs.cartan()));
            m.insert("det".into(), json!(rs.cartan_det()));
            m.insert("dynkin_edges".into(), json!(edges));
            m.insert("rho_weight".into(), json!(rs.rho().coords));
            Ok(Outcome::ok(render(f, &Value::Object(m), || {
                let mut t = String::new();
                for row in rs.cartan() {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
                    writeln!(t, "{}", cells.join(" ")).unwrap();
                }
                writeln!(t, "det {}", rs.cartan_det()).unwrap();
                t
            })))
        }
        Command::Bwb { type_spec, v } => {
            let rs = RootSystem::from_spec(type_spec)?;
            check_len(&rs, v.coords.len())?;
            let lambda = v.vector();
            let verdict = bwb(&rs, &lambda)?;
            let shifted = LatticeVector::weight(
                rs.weight_coords(&lambda)?.iter().map(|c| c + 1).collect::<Vec<_>>(),
            );
            let ind = index(&rs, &shifted)?;
            let degrees = (0..rs.rank())
                .map(|i| schubert_restriction_degree(&rs, &lambda, i))
                .collect::<Result<Vec<_>, _>>()?;
            let word: Vec<usize> = verdict.witness.iter().map(|i| i + 1).collect();
            let mut m = envelope(&rs, "bwb");
            m.insert("lambda".into(), json!(rs.weight_coords(&lambda)?));
            m.insert("status".into(), json!(verdict.status));
            m.insert("degree".into(), json!(verdict.degree));
            m.insert("mu".into(), json!(verdict.highest_weight.as_ref().map(|w| w.coords.clone())));
            m.insert("dim".into(), verdict.dimension.as_ref().map(big).unwrap_or(Value::Null));
            m.insert("word".into(), json!(word));
            m.insert("index".into(), json!(ind));
            m.insert("restriction_degrees".into(), json!(degrees));
            Ok(Outcome::ok(render(f, &Value::Object(m), || match (&verdict.degree, &verdict.dimension) {
                (Some(d), Some(dim)) => format!(
                    "H^{d} has dimension {dim}, highest weight {}; all other degrees vanish\n",
                    verdict.highest_weight.as_ref().unwrap()
                ),
                _ => "all cohomology vanishes\n".to_string(),
            })))
        }
        Command::Cht { type_spec, v } => {
            let rs = RootSystem::from_spec(type_spec)?;
            check_len(&rs, v.coords.len())?;
            let lambda = v.vector();
            let report = cht(&rs, &lambda)?;
            let zero = cht_zero_criterion(&rs, &lambda)?;
            let mut m = envelope(&rs, "cht");
            m.insert("report".into(), serde_json::to_value(&report).expect("json"));
            m.insert("zero_criterion".into(), json!(zero));
            Ok(Outcome::ok(render(f, &Value::Object(m), || {
                format!(
                    "cht {}\nlambda* {}\nlambda+ {}\n",
                    report.cht, report.lambda_star, report.lambda_plus
                )
            })))
        }
        Command::Cotangent { type_spec, v } => {
            let rs = RootSystem::from_spec(type_spec)?;
            check_len(&rs, v.coords.len())?;
            let verdict = cotangent_verdict(&rs, &v.vector())?;
            let mut m = envelope(&rs, "cotangent");
            m.insert("verdict".into(), serde_json::to_value(&verdict).expect("json"));
            Ok(Outcome::ok(render(f, &Value::Object(m), || {
                format!(
                    "cht {}\nH^i = 0 for i > {}\nH^2 vanishes: {}\n",
                    verdict.cht.cht,
                    verdict.upper_vanishing_degree,
                    verdict.h2_vanishes.is_some()
                )
            })))
        }
        Command::Euler { type_spec, v, multiset_cap } => {
            let rs = RootSystem::from_spec(type_spec)?;
            let (j, coords) = v.coords.split_last().expect("required");
            check_len(&rs, coords.len())?;
            let j = usize::try_from(*j).map_err(|_| Error::IndexOutOfRange { index: 0, rank: 0 })?;
            let vv = VectorArgs { basis: v.basis, root: v.root, coords: coords.to_vec() };
            let chi = euler_characteristic_graded(&rs, &vv.vector(), j, *multiset_cap)?;
            let mut m = envelope(&rs, "euler");
            m.insert("lambda".into(), json!(rs.weight_coords(&vv.vector())?));
            m.insert("j".into(), json!(j));
            m.insert("chi".into(), big(&chi));
            Ok(Outcome::ok(render(f, &Value::Object(m), || format!("{chi}\n"))))
        }
        Command::Chevalley { type_spec, dump } => {
            let rs = RootSystem::from_spec(type_spec)?;
            let c = ChevalleyConstants::build(&rs)?;
            let table = c.dump(&rs);
            if *dump {
                return Ok(Outcome::ok(table));
            }
            let mut m = envelope(&rs, "chevalley");
            m.insert("dim".into(), json!(c.dim()));
            m.insert("centerless".into(), json!(c.is_centerless()));
            let rows: Vec<Value> = table
                .lines()
                .map(|l| {
                    let parts: Vec<&str> = l.split(" | ").collect();
                    json!({"alpha": parts[0], "beta": parts[1], "n": parts[2].parse::<i64>().unwrap_or(0)})
                })
                .collect();
            m.insert("constants".into(), Value::Array(rows));
            Ok(Outcome::ok(render(f, &Value::Object(m), || table)))
        }
        Command::Obstruction { type_spec, half, space, emit_system } => {
            let rs = RootSystem::from_spec(type_spec)?;
            let c = ChevalleyConstants::build(&rs)?;
            let half = match half {
                HalfArg::Positive => Half::PositiveHalf,
                HalfArg::Negative => Half::NegativeHalf,
            };
            let system = build_system(&rs, &c, half)?;
            if *emit_system {
                let letter = if *space == Space::Surface { 'C' } else { 'α' };
                return Ok(Outcome::ok(system.render_with(letter)));
            }
            let flag = FlagOracle { rs: &rs };
            let cot = CotangentOracle { rs: &rs };
            let surf = SurfaceOracle::new(&rs);
            let oracle: &dyn H2Oracle = match space {
                Space::Flag => &flag,
                Space::Cotangent => &cot,
                Space::Surface => &surf,
            };
            let cert = certify_solvability(&system, oracle)?;
            // Nontriviality of [φ_α] at height one is witnessed by H¹(L_α) ≠ 0.
            let nonvanishing = cert
                .entries
                .iter()
                .filter(|e| e.requires_nontrivial)
                .map(|e| bwb(&rs, &e.root).map(|v| v.dim_in_degree(1) != 0u32.into()))
                .collect::<Result<Vec<_>, _>>()?;
            let triviality = triviality_criterion(&nonvanishing);
            let mut m = envelope(&rs, "obstruction");
            m.insert("system".into(), serde_json::to_value(&system).expect("json"));
            m.insert("certificate".into(), serde_json::to_value(&cert).expect("json"));
            m.insert("triviality".into(), serde_json::to_value(&triviality).expect("json"));
            let code = if cert.complete { 0 } else { 1 };
            let stdout = render(f, &Value::Object(m), || {
                let mut t = system.render();
                writeln!(t, "certificate ({}): {}", cert.oracle, if cert.complete { "complete" } else { "incomplete" })
                    .unwrap();
                t
            });
            Ok(Outcome { code, stdout, stderr: String::new() })
        }
        Command::Surface { type_spec } => {
            let rs = RootSystem::from_spec(type_spec)?;
            let lattice = resolution_lattice(&rs);
            let decomposition = bundle_decomposition(&rs);
            let mut divisors = Vec::new();
            for a in rs.roots() {
                divisors.push(root_to_divisor(&rs, &lattice, a)?);
            }
            let cross = decomposition.is_ok()
                && verify_isometry(&rs).passed()
                && verify_restriction_degrees(&rs).passed();
            let mut m = envelope(&rs, "surface");
            m.insert("intersection".into(), json!(lattice.intersection));
            m.insert("negative_definite".into(), json!(lattice.is_negative_definite()));
            m.insert("divisor_count".into(), json!(lattice.minus_two_classes().len()));
            m.insert(
                "decomposition_rank".into(),
                json!(decomposition.as_ref().map(|d| d.total_rank).ok()),
            );
            m.insert(
                "trivial_rank".into(),
                json!(decomposition.as_ref().map(|d| d.trivial_rank).ok()),
            );
            m.insert("cross_check".into(), json!(if cross { "pass" } else { "fail" }));
            let code = if cross { 0 } else { 1 };
            let stdout = render(f, &Value::Object(m), || {
                format!(
                    "{} classes with D^2 = -2; total rank {}\ncross check {}\n",
                    divisors.len(),
                    decomposition.as_ref().map(|d| d.total_rank).unwrap_or(0),
                    if cross { "pass" } else { "fail" }
                )
            });
            Ok(Outcome { code, stdout, stderr: String::new() })
        }
        Command::Verify { type_spec, suite, e8_full, seed, sample_budget, multiset_cap } => {
            let rs = RootSystem::from_spec(type_spec)?;
            let cfg = VerifyConfig {
                e8_full: *e8_full,
                seed: *seed,
                sample_budget: *sample_budget,
                multiset_cap: *multiset_cap,
            };
            let (reports, chains) = run_suite(&rs, *suite, &cfg)?;
            let checked: usize = reports.iter().map(|r| r.checked).sum();
            let violations: usize = reports.iter().map(|r| r.violations.len()).sum();
            let mut m = envelope(&rs, "verify");
            m.insert("suite".into(), serde_json::to_value(suite_name(*suite)).expect("json"));
            m.insert("checked".into(), json!(checked));
            m.insert("violations".into(), json!(violations));
            m.insert("reports".into(), serde_json::to_value(&reports).expect("json"));
            if let Some(chains) = chains {
                m.insert("descent_chains".into(), chains);
            }
            let stdout = render(f, &Value::Object(m), || {
                let mut t = String::new();
                for r in &reports {
                    let tag = if r.passed() { "ok  " } else { "FAIL" };
                    writeln!(t, "{tag} {} ({} checked, {} violations)", r.check, r.checked, r.violations.len())
                        .unwrap();
                    for v in &r.violations {
                        writeln!(t, "     {v}").unwrap();
                    }
                }
                t
            });
            Ok(Outcome { code: if violations == 0 { 0 } else { 1 }, stdout, stderr: String::new() })
        }
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Chevalley => "chevalley",
        Suite::Prop2 => "prop2",
        Suite::Lemma3 => "lemma3",
        Suite::Cht => "cht",
        Suite::Prop11 => "prop11",
        Suite::Surface => "surface",
        Suite::Obstruction => "obstruction",
        Suite::All => "all",
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub e8_full: bool,
    pub seed: u64,
    pub sample_budget: usize,
    pub multiset_cap: u128,
}

/// Reports in a fixed order, plus the descent chains when the suite emits them.
pub fn run_suite(rs: &RootSystem, suite: Suite, cfg: &VerifyConfig) -> Result<(Vec<Report>, Option<Value>), Error> {
    let mut reports = Vec::new();
    let mut chains = None;
    let wants = |s: Suite| suite == s || suite == Suite::All;

    if wants(Suite::Chevalley) {
        let c = ChevalleyConstants::build(rs)?;
        reports.extend(verify_chevalley(&c, rs, &VerifyOptions::for_system(rs, cfg.e8_full, cfg.seed)));
    }
    if wants(Suite::Prop2) {
        reports.push(verify_prop2(rs));
        reports.push(verify_serre_duality(rs, 3, cfg.sample_budget));
        let mut euler = verify_simple_euler(rs);
        if cfg.multiset_cap == 0 {
            euler.record(Some("multiset cap 0 leaves nothing to sum".into()));
        }
        reports.push(euler);
    }
    if wants(Suite::Lemma3) {
        reports.push(verify_lemma3(rs));
    }
    if wants(Suite::Cht) {
        reports.push(verify_remark10(rs));
        reports.push(verify_cht_lemma(rs, cfg.sample_budget));
    }
    if wants(Suite::Prop11) {
        let (report, found) = verify_prop11_induction(rs);
        reports.push(report);
        let rows: Vec<Value> = found
            .iter()
            .map(|ch| {
                json!({
                    "root": ch.root.coords,
                    "steps": ch.steps.iter().map(|s| json!([s.simple + 1, s.next.coords])).collect::<Vec<_>>(),
                })
            })
            .collect();
        chains = Some(Value::Array(rows));
    }
    if wants(Suite::Surface) {
        reports.push(verify_isometry(rs));
        reports.push(verify_restriction_degrees(rs));
        let mut dec = Report::new("surface.decomposition");
        dec.record(match bundle_decomposition(rs) {
            Ok(d) if d.total_rank == rs.dim() => None,
            Ok(d) => Some(format!("total rank {} for dimension {}", d.total_rank, rs.dim())),
            Err(e) => Some(e.to_string()),
        });
        reports.push(dec);
        let lattice = resolution_lattice(rs);
        let mut h2 = Report::new("surface.h2_induction");
        for a in rs.positive_roots() {
            h2.record(match surface_h2_oracle(rs, &lattice, &DivisorClass::new(a.coords.clone())) {
                Ok(v) if v.vanishes => None,
                Ok(_) => Some(format!("{a}: H^2 does not vanish")),
                Err(e) => Some(format!("{a}: {e}")),
            });
        }
        reports.push(h2);
    }
    if wants(Suite::Obstruction) {
        let c = ChevalleyConstants::build(rs)?;
        let positive = build_system(rs, &c, Half::PositiveHalf)?;
        let negative = build_system(rs, &c, Half::NegativeHalf)?;
        let mut b = check_bianchi(&positive, &c);
        b.merge(check_bianchi(&negative, &c));
        reports.push(b);
        let flag = FlagOracle { rs };
        let cot = CotangentOracle { rs };
        let surf = SurfaceOracle::new(rs);
        for (system, oracle) in [
            (&negative, &flag as &dyn H2Oracle),
            (&negative, &cot as &dyn H2Oracle),
            (&positive, &surf as &dyn H2Oracle),
        ] {
            let mut r = Report::new(format!("obstruction.certificate.{}", oracle.name()));
            match certify_solvability(system, oracle) {
                Ok(cert) => {
                    for e in &cert.entries {
                        r.record((e.height >= 2 && !e.h2.vanishes).then(|| format!("{}: {}", e.root, e.h2.citation)));
                    }
                }
                Err(e) => r.record(Some(e.to_string())),
            }
            reports.push(r);
        }
    }
    Ok((reports, chains))
}

/// Cap the global thread pool from `ADELIE_THREADS`, if set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("ADELIE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}
