mod manifest;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use mquot::cells::{enumerate_cells, Shape};
use mquot::chain::{cacti_complex, homology, ChainComplex, Coefficients, HomologyResult};
use mquot::cohen::{
    basis, coker_delta_brute_force, coker_delta_dims, cstar_basis, delta, equivariant_series, fiber_dims, fixed_points,
    FixedPoints,
};
use mquot::embedding::{embed, property_trials, sub_leading_residual, Configuration};
use mquot::equivariant::full_quotient_complex;
use mquot::lens::{
    classical_lens_homology, is_homology_sphere, lens_chain_complex_refined, manifold_obstruction, LensSpec,
};
use mquot::pipeline::{e2_grid, GridSpace};
use mquot::verify::{self, EMBEDDING_SEED};
use serde_json::{json, Value};

use manifest::{Output, Timing};

#[derive(Parser)]
#[command(
    name = "mquot",
    version,
    about = "Homology of cactus complexes and moduli-space quotients"
)]
struct Cli {
    /// Worker threads for the parallel stages (0 picks the number of cores).
    #[arg(long, global = true, env = "MQUOT_THREADS")]
    threads: Option<usize>,

    /// Also write a CSV table to this path.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,

    /// Record wall-clock timing in the manifest (not covered by the digest).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Based,
    Unbased,
    Quotient,
}

impl Space {
    fn name(self) -> &'static str {
        match self {
            Space::Based => "based",
            Space::Unbased => "unbased",
            Space::Quotient => "quotient",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    Z,
    F2,
    F3,
    F5,
    F7,
}

impl From<Coeff> for Coefficients {
    fn from(c: Coeff) -> Self {
        match c {
            Coeff::Z => Coefficients::Integers,
            Coeff::F2 => Coefficients::Prime(2),
            Coeff::F3 => Coefficients::Prime(3),
            Coeff::F5 => Coefficients::Prime(5),
            Coeff::F7 => Coefficients::Prime(7),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CohenOp {
    Basis,
    Delta,
    Coker,
    Equivariant,
    Grid,
    FixedPoints,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridKind {
    Configuration,
    FixedPoints,
}

#[derive(Subcommand)]
enum Command {
    /// Count (and optionally list) the cells of a complex.
    Cells {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "based")]
        space: Space,
        /// Include every cell label in the output.
        #[arg(long)]
        list: bool,
    },
    /// Cellular homology of a cactus complex or of the full quotient.
    Homology {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "quotient")]
        space: Space,
        #[arg(long, value_enum, default_value = "z")]
        coeff: Coeff,
    },
    /// Symbolic computations in the homology of configuration spaces.
    Cohen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "basis")]
        op: CohenOp,
        /// Restrict the basis to one degree.
        #[arg(long)]
        degree: Option<usize>,
        /// Truncation degree for the equivariant series (default 2n).
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, value_enum, default_value = "configuration")]
        grid_space: GridKind,
    },
    /// Homology of a lens complex L(m; b_1, ..., b_k).
    #[command(group(ArgGroup::new("lens").required(true).args(["m", "moduli_n"])))]
    Lens {
        #[arg(long, requires = "weights")]
        m: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        weights: Vec<u64>,
        /// Analyse L(n; n-1, ..., 2) and the manifold obstruction instead.
        #[arg(long, conflicts_with = "m")]
        moduli_n: Option<usize>,
        /// Arcs per sector on each circle.
        #[arg(long, default_value_t = 1)]
        refine: u32,
    },
    /// Weighted projective coordinates of configurations.
    #[command(group(ArgGroup::new("source").required(true).args(["points", "samples"])))]
    Embed {
        /// JSON file holding `[[re, im], ...]`.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Run seeded property trials instead.
        #[arg(long, requires = "n")]
        samples: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = EMBEDDING_SEED)]
        seed: u64,
    },
    /// Run verification checks; exits 1 if any fails.
    #[command(group(ArgGroup::new("which").required(true).args(["paper_suite", "check"])))]
    Verify {
        /// Every acceptance check plus the Mayer-Vietoris audits.
        #[arg(long)]
        paper_suite: bool,
        /// Run only the named checks.
        #[arg(long, value_name = "ID")]
        check: Vec<String>,
    },
}

struct Run {
    command: &'static str,
    parameters: Value,
    result: Value,
    csv: Option<String>,
    passed: bool,
}

impl Run {
    fn new(command: &'static str, parameters: Value, result: Value) -> Self {
        Run {
            command,
            parameters,
            result,
            csv: None,
            passed: true,
        }
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<mquot::Error> for Failure {
    fn from(e: mquot::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn complex_for(n: usize, space: Space) -> mquot::Result<ChainComplex> {
    match space {
        Space::Based => cacti_complex(n, Shape::Linear),
        Space::Unbased => cacti_complex(n, Shape::Cyclic),
        Space::Quotient => full_quotient_complex(n),
    }
}

fn alternating_sum(counts: &[usize]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

fn cells(n: usize, space: Space, list: bool) -> Result<Run, Failure> {
    let (counts, labels): (Vec<usize>, Vec<Vec<String>>) = match space {
        Space::Based | Space::Unbased => {
            let shape = if matches!(space, Space::Based) {
                Shape::Linear
            } else {
                Shape::Cyclic
            };
            let e = enumerate_cells(n, shape)?;
            let labels = e
                .by_dim
                .iter()
                .map(|l| l.iter().map(ToString::to_string).collect())
                .collect();
            (e.counts(), labels)
        }
        Space::Quotient => {
            let c = full_quotient_complex(n)?;
            let labels = (0..c.len())
                .map(|d| (0..c.dim(d)).map(|i| c.label(d, i)).collect())
                .collect();
            (c.dims().to_vec(), labels)
        }
    };
    let mut result = json!({
        "n": n,
        "space": space.name(),
        "counts": counts,
        "total": counts.iter().sum::<usize>(),
        "euler_characteristic": alternating_sum(&counts),
    });
    if list {
        result["cells"] = json!(labels);
    }
    let mut csv = String::from("dim,count\n");
    for (d, c) in counts.iter().enumerate() {
        csv.push_str(&format!("{d},{c}\n"));
    }
    let params = json!({"n": n, "space": space.name(), "list": list});
    Ok(Run::new("cells", params, result).with_csv(csv))
}

fn homology_json(h: &HomologyResult) -> Value {
    json!({
        "coefficients": h.coefficients,
        "degrees": h.degrees,
        "groups": h.describe(),
        "betti": h.betti_trimmed(),
        "euler_characteristic": h.euler_characteristic(),
        "is_point": h.is_point(),
    })
}

fn homology_cmd(n: usize, space: Space, coeff: Coeff) -> Result<Run, Failure> {
    let complex = complex_for(n, space)?;
    let coefficients = Coefficients::from(coeff);
    let h = homology(&complex, coefficients)?;
    let mut result = homology_json(&h);
    result["n"] = json!(n);
    result["space"] = json!(space.name());
    result["cells"] = json!(complex.dims());
    let params = json!({"n": n, "space": space.name(), "coeff": coefficients});
    Ok(Run::new("homology", params, result).with_csv(h.to_csv()))
}

fn dims_csv(dims: &[usize]) -> String {
    let mut csv = String::from("degree,dim\n");
    for (d, v) in dims.iter().enumerate() {
        csv.push_str(&format!("{d},{v}\n"));
    }
    csv
}

fn cohen_cmd(
    n: usize,
    p: u64,
    op: CohenOp,
    degree: Option<usize>,
    max_degree: Option<usize>,
    grid_space: GridKind,
) -> Result<Run, Failure> {
    let mut params = json!({"n": n, "p": p});
    let mut csv = None;
    let result = match op {
        CohenOp::Basis => {
            params["op"] = json!("basis");
            params["degree"] = json!(degree);
            let dims = fiber_dims(n, p)?;
            csv = Some(dims_csv(&dims));
            json!({"monomials": basis(n, p, degree)?, "dims": dims})
        }
        CohenOp::Delta => {
            params["op"] = json!("delta");
            let images: Vec<Value> = basis(n, p, None)?
                .iter()
                .map(|m| {
                    let image = delta(m, p)?.map(|(c, t)| json!({"coefficient": c, "monomial": t}));
                    Ok(json!({"source": m, "image": image}))
                })
                .collect::<mquot::Result<_>>()?;
            json!({"delta": images})
        }
        CohenOp::Coker => {
            params["op"] = json!("coker");
            let dims = coker_delta_dims(n, p)?;
            let brute = coker_delta_brute_force(n, p)?;
            csv = Some(dims_csv(&dims));
            json!({"dims": dims, "brute_force": brute, "agree": dims == brute})
        }
        CohenOp::Equivariant => {
            let top = max_degree.unwrap_or(2 * n);
            params["op"] = json!("equivariant");
            params["max_degree"] = json!(top);
            let series = equivariant_series(n, p, top)?;
            csv = Some(dims_csv(&series));
            json!({"series": series})
        }
        CohenOp::Grid => {
            let space = match grid_space {
                GridKind::Configuration => GridSpace::Configuration,
                GridKind::FixedPoints => GridSpace::FixedPoints,
            };
            params["op"] = json!("grid");
            params["grid_space"] = json!(space);
            let g = e2_grid(n, p, space)?;
            let table = g.table();
            json!({"grid": g, "table": table})
        }
        CohenOp::FixedPoints => {
            params["op"] = json!("fixed_points");
            let fp = fixed_points(n, p)?;
            let classes = match fp {
                FixedPoints::Empty => Vec::new(),
                FixedPoints::Cstar { q } => cstar_basis(q, p)?
                    .iter()
                    .map(|c| json!({"name": c.to_string(), "degree": c.degree()}))
                    .collect(),
            };
            json!({"fixed_points": fp, "classes": classes})
        }
    };
    let mut run = Run::new("cohen", params, result);
    run.csv = csv;
    Ok(run)
}

fn lens_cmd(m: Option<u64>, weights: Vec<u64>, moduli_n: Option<usize>, refine: u32) -> Result<Run, Failure> {
    if let Some(n) = moduli_n {
        let report = manifold_obstruction(n)?;
        let params = json!({"moduli_n": n});
        return Ok(Run::new("lens", params, json!(report)));
    }
    let m = m.ok_or_else(|| Failure::Usage("--m is required".into()))?;
    let spec = LensSpec::new(m, weights.clone())?;
    let complex = lens_chain_complex_refined(&spec, refine)?;
    let h = homology(&complex, Coefficients::Integers)?;
    let mut result = homology_json(&h);
    result["spec"] = json!(spec.to_string());
    result["free"] = json!(spec.is_free());
    result["sphere_dim"] = json!(spec.sphere_dim());
    result["cells"] = json!(complex.dims());
    result["is_homology_sphere"] = json!(is_homology_sphere(&h, spec.sphere_dim()));
    if spec.is_free() {
        result["classical"] = json!(classical_lens_homology(m, spec.circles()));
    }
    let params = json!({"m": m, "weights": weights, "refine": refine});
    Ok(Run::new("lens", params, result).with_csv(h.to_csv()))
}

fn embed_cmd(points: Option<PathBuf>, samples: Option<usize>, n: Option<usize>, seed: u64) -> Result<Run, Failure> {
    if let Some(path) = points {
        let text = fs::read_to_string(&path).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
        let config: Configuration =
            serde_json::from_str(&text).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
        let point = embed(&config)?;
        let result = json!({
            "n": config.len(),
            "points": config,
            "embedding": point,
            "sub_leading_residual": sub_leading_residual(&config),
        });
        let params = json!({"points": config});
        return Ok(Run::new("embed", params, result));
    }
    let (samples, n) = match (samples, n) {
        (Some(s), Some(n)) => (s, n),
        _ => return Err(Failure::Usage("--samples needs --n".into())),
    };
    let report = property_trials(n, samples, seed)?;
    let mut run = Run::new(
        "embed",
        json!({"n": n, "samples": samples, "seed": seed}),
        json!({"report": report, "passed": report.passed()}),
    );
    run.passed = report.passed();
    Ok(run)
}

fn verify_cmd(paper_suite: bool, ids: Vec<String>) -> Result<Run, Failure> {
    let report = if paper_suite {
        verify::full_suite()
    } else {
        let mut checks = Vec::new();
        for id in &ids {
            checks.push(verify::check(id).ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown check {id:?}; known: {}, mayer-vietoris",
                    verify::CHECK_IDS.join(", ")
                ))
            })?);
        }
        verify::SuiteReport {
            checks,
            findings: Vec::new(),
        }
    };
    let mut csv = String::from("id,passed,title\n");
    for c in &report.checks {
        csv.push_str(&format!("{},{},\"{}\"\n", c.id, c.passed, c.title.replace('"', "\"\"")));
    }
    let passed = report.passed();
    let params = json!({"paper_suite": paper_suite, "checks": ids});
    let result = json!({"passed": passed, "checks": report.checks, "findings": report.findings});
    let mut run = Run::new("verify", params, result).with_csv(csv);
    run.passed = passed;
    Ok(run)
}

fn dispatch(command: Command) -> Result<Run, Failure> {
    match command {
        Command::Cells { n, space, list } => cells(n, space, list),
        Command::Homology { n, space, coeff } => homology_cmd(n, space, coeff),
        Command::Cohen {
            n,
            p,
            op,
            degree,
            max_degree,
            grid_space,
        } => cohen_cmd(n, p, op, degree, max_degree, grid_space),
        Command::Lens {
            m,
            weights,
            moduli_n,
            refine,
        } => lens_cmd(m, weights, moduli_n, refine),
        Command::Embed {
            points,
            samples,
            n,
            seed,
        } => embed_cmd(points, samples, n, seed),
        Command::Verify { paper_suite, check } => verify_cmd(paper_suite, check),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("mquot: error: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let run = match dispatch(cli.command) {
        Ok(run) => run,
        Err(Failure::Usage(msg)) => {
            eprintln!("mquot: usage error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("mquot: error: {msg}");
            return ExitCode::from(1);
        }
    };
    let timing = cli.timing.then(|| Timing {
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        threads: rayon::current_num_threads(),
    });
    if let Some(path) = &cli.csv {
        let Some(csv) = &run.csv else {
            eprintln!("mquot: error: this command has no CSV form");
            return ExitCode::from(1);
        };
        if let Err(e) = fs::write(path, csv) {
            eprintln!("mquot: error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    let passed = run.passed;
    let output = Output::new(run.command, run.parameters, run.result, timing);
    let text = serde_json::to_string_pretty(&output).expect("JSON values always serialize");
    // a closed pipe downstream is not our failure
    let _ = writeln!(io::stdout().lock(), "{text}");
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
