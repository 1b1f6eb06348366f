use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use jeqp::canon::{canonical_form, permute_partition};
use jeqp::constructions::{coordinate_partition, pattern_partition, Construction};
use jeqp::eigenfn::{
    block_decomposition, classify_theorem1, lemma5_audit, system1_census, CensusOutcome,
    VertexFunction,
};
use jeqp::io::{
    function_from_json, function_to_json, partition_from_json, partition_to_json,
    pattern_from_json, ClassificationRecord,
};
use jeqp::search::{enumerate, prop2_check, prop3_check, SearchSpec, SearchStatus};
use jeqp::{
    admissible_matrices, AntipodalCheck, Equitability, GraphParams, QuotientMatrix, TwoPartition,
    Vertex, VertexIndex,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::report::{CheckStatus, RunReport, Timing};
use crate::{
    AuditArgs, BlocksArgs, CanonArgs, Cli, Command, ConstructArgs, DiffArgs, Family, FileIn, Graph,
    PartitionIn, SearchArgs,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] jeqp::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(jeqp::Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Pass => ExitCode::SUCCESS,
            Outcome::Fail => ExitCode::from(1),
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Spectrum(g) => spectrum(g),
        Command::Matrices(g) => matrices(g),
        Command::Construct(a) => construct(a, cli.seed),
        Command::Verify(a) => verify(a),
        Command::Diff(a) => diff(a),
        Command::Classify(a) => classify(a),
        Command::Blocks(a) => blocks(a),
        Command::Search(a) => search(a),
        Command::Canon(a) => canon(a),
        Command::Audit(a) => audit(a),
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::Read::read_to_end(&mut io::stdin(), &mut buf).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?;
        return Ok(buf);
    }
    fs::read(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read_bytes(path)?).map_err(|_| {
        CliError::Core(jeqp::Error::Format(format!(
            "{} is not UTF-8",
            path.display()
        )))
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn load_partition(input: &PartitionIn) -> Result<TwoPartition> {
    if input.binary {
        let (Some(n), Some(w)) = (input.n, input.w) else {
            return Err(CliError::Usage("--binary needs --n and --w".into()));
        };
        let bytes = read_bytes(&input.input)?;
        return Ok(TwoPartition::from_packed_bits(
            GraphParams::new(n, w)?,
            &bytes,
        )?);
    }
    Ok(partition_from_json(&read_text(&input.input)?)?)
}

fn spectrum(g: Graph) -> Result<Outcome> {
    let params = GraphParams::new(g.n, g.w)?;
    let rows = (0..=g.w)
        .map(|i| Ok((i, params.eigenvalue(i)?)))
        .collect::<Result<Vec<_>>>()?;
    if g.json {
        let rows: Vec<_> = rows
            .iter()
            .map(|&(i, l)| json!({"i": i, "lambda": l}))
            .collect();
        println!("{}", json!({"n": g.n, "w": g.w, "eigenvalues": rows}));
    } else {
        for (i, l) in rows {
            println!("{i}\t{l}");
        }
    }
    Ok(Outcome::Pass)
}

fn matrices(g: Graph) -> Result<Outcome> {
    let params = GraphParams::new(g.n, g.w)?;
    let family = admissible_matrices(params)?;
    for am in family.iter() {
        let sizes = am.matrix.cell_sizes(params);
        if g.json {
            println!(
                "{}",
                json!({"b": am.b, "matrix": am.matrix, "cell_sizes": sizes})
            );
        } else {
            let sizes = sizes.map_or("non-integral".to_string(), |(a, b)| format!("{a}/{b}"));
            println!("b={}\t{}\tcells {}", am.b, am.matrix, sizes);
        }
    }
    Ok(Outcome::Pass)
}

fn construct(a: ConstructArgs, seed: u64) -> Result<Outcome> {
    let need = |v: Option<u32>, flag: &str| {
        v.ok_or_else(|| CliError::Usage(format!("{flag} is required for this family")))
    };
    let mut p = match a.family {
        Family::C1 | Family::C2 | Family::C3 | Family::C4 => {
            let c = match a.family {
                Family::C1 => Construction::C1,
                Family::C2 => Construction::C2,
                Family::C3 => Construction::C3,
                _ => Construction::C4,
            };
            c.build(need(a.w, "--w")?)?
        }
        Family::Coord => {
            let params = GraphParams::new(need(a.n, "--n")?, need(a.w, "--w")?)?;
            let i = need(a.i, "--i")?;
            if i == 0 {
                return Err(CliError::Usage("--i is 1-based".into()));
            }
            coordinate_partition(params, i - 1)?
        }
        Family::Pattern => {
            let path = a
                .pattern
                .as_ref()
                .ok_or_else(|| CliError::Usage("--pattern is required".into()))?;
            let pattern = pattern_from_json(&read_text(path)?)?;
            let params = GraphParams::new(need(a.n, "--n")?, need(a.w, "--w")?)?;
            pattern_partition(params, &pattern)?
        }
    };
    if a.relabel {
        let mut perm: Vec<u32> = (0..p.params().n()).collect();
        perm.shuffle(&mut StdRng::seed_from_u64(seed));
        p = permute_partition(&p, &perm, false)?;
    }
    match (&a.out, a.binary) {
        (Some(path), true) => write_file(path, &p.to_packed_bits())?,
        (Some(path), false) => write_file(path, format!("{}\n", partition_to_json(&p)).as_bytes())?,
        (None, _) => println!("{}", partition_to_json(&p)),
    }
    Ok(Outcome::Pass)
}

fn vertex_string(params: GraphParams, index: VertexIndex) -> String {
    Vertex::unrank(params, index)
        .map(|v| v.to_bitstring())
        .unwrap_or_else(|_| format!("#{}", index.0))
}

fn irregular_detail(params: GraphParams, e: &Equitability) -> String {
    match e {
        Equitability::Equitable(m) => m.to_string(),
        Equitability::Irregular(w) => format!(
            "vertex {} in C{} has (C1, C2) neighbour counts {:?}, expected {:?}",
            vertex_string(params, w.vertex),
            w.cell,
            w.found,
            w.expected
        ),
    }
}

fn verify(a: PartitionIn) -> Result<Outcome> {
    let p = load_partition(&a)?;
    let e = p.verify_equitable();
    match e {
        Equitability::Equitable(m) => {
            let theta = m.eigenvalues().1;
            let index = p.params().eigenvalue_index(theta);
            println!(
                "{}",
                json!({"equitable": true, "matrix": m, "eigenvalue": theta, "eigenvalue_index": index})
            );
            Ok(Outcome::Pass)
        }
        Equitability::Irregular(_) => {
            println!(
                "{}",
                json!({"equitable": false, "witness": irregular_detail(p.params(), &e)})
            );
            Ok(Outcome::Fail)
        }
    }
}

fn coordinate(c: u32, n: u32) -> Result<u32> {
    if c == 0 || c > n {
        return Err(CliError::Usage(format!("coordinate {c} outside 1..={n}")));
    }
    Ok(c - 1)
}

fn partition_function(p: &TwoPartition) -> Result<VertexFunction> {
    Ok(VertexFunction::of_partition(p)?.0)
}

fn diff(a: DiffArgs) -> Result<Outcome> {
    let p = load_partition(&a.partition)?;
    let n = p.params().n();
    let f = partition_function(&p)?;
    let d = f.partial_difference(coordinate(a.i, n)?, coordinate(a.j, n)?)?;
    let c = ClassificationRecord::of(&classify_theorem1(&d.function));
    let lifted: Vec<u32> = c
        .witness
        .iter()
        .map(|&x| d.coords[x as usize - 1] + 1)
        .collect();
    let function: serde_json::Value =
        serde_json::from_str(&function_to_json(&d.function)).expect("function record");
    let coords: Vec<u32> = d.coords.iter().map(|x| x + 1).collect();
    let record = json!({
        "function": function,
        "coordinates": coords,
        "classification": c,
        "witness_original": lifted,
    });
    println!("{record}");
    Ok(Outcome::Pass)
}

fn classify(a: FileIn) -> Result<Outcome> {
    let f = function_from_json(&read_text(&a.input)?)?;
    println!(
        "{}",
        serde_json::to_string(&ClassificationRecord::of(&classify_theorem1(&f))).expect("record")
    );
    Ok(Outcome::Pass)
}

fn blocks(a: BlocksArgs) -> Result<Outcome> {
    let text = read_text(&a.input)?;
    let f = if a.function {
        function_from_json(&text)?
    } else {
        partition_function(&partition_from_json(&text)?)?
    };
    let bd = block_decomposition(&f)?;
    let blocks: Vec<Vec<u32>> = bd
        .blocks()
        .iter()
        .map(|b| b.iter().map(|c| c + 1).collect())
        .collect();
    println!(
        "{}",
        json!({"blocks": blocks, "display": bd.to_string(), "largest": bd.largest()})
    );
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct SearchSummary {
    b: u32,
    matrix: QuotientMatrix,
    status: SearchStatus,
    classes: usize,
    nodes: u64,
    wall_secs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    infeasible: Option<String>,
}

fn search(a: SearchArgs) -> Result<Outcome> {
    let params = GraphParams::new(a.n, a.w)?;
    let matrices: Vec<(u32, QuotientMatrix)> = if a.all_b {
        admissible_matrices(params)?
            .iter()
            .map(|am| (am.b, am.matrix))
            .collect()
    } else {
        let b = a.b.expect("clap requires --b without --all-b");
        vec![(b, QuotientMatrix::second_eigenvalue_family(params, b)?)]
    };
    let time_limit = match a.budget_secs {
        Some(s) if !(s.is_finite() && s > 0.0) => {
            return Err(CliError::Usage(format!("budget must be positive, got {s}")))
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => Some(jeqp::search::DEFAULT_TIME_LIMIT),
    };
    let out_path = a.out.clone();
    let sink: Box<dyn Write> = match &out_path {
        Some(path) => Box::new(fs::File::create(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    let io_err = |source| CliError::Io {
        path: out_path.clone().unwrap_or_else(|| "<stdout>".into()),
        source,
    };
    let mut complete = true;
    for (b, m) in matrices {
        let mut spec = SearchSpec::new(params, m);
        spec.node_limit = a.budget_nodes.unwrap_or(jeqp::search::DEFAULT_NODE_LIMIT);
        spec.time_limit = time_limit;
        spec.threads = a.threads.max(1);
        spec.symmetry = !a.no_symmetry;
        let outcome = enumerate(&spec)?;
        for p in &outcome.partitions {
            writeln!(sink, "{}", partition_to_json(p)).map_err(io_err)?;
        }
        complete &= outcome.status == SearchStatus::Complete;
        let summary = SearchSummary {
            b,
            matrix: m,
            status: outcome.status,
            classes: outcome.partitions.len(),
            nodes: outcome.nodes,
            wall_secs: outcome.wall.as_secs_f64(),
            infeasible: outcome.infeasible,
        };
        writeln!(sink, "{}", json!({ "summary": summary })).map_err(io_err)?;
        sink.flush().map_err(io_err)?;
    }
    Ok(Outcome::from_bool(complete))
}

fn canon(a: CanonArgs) -> Result<Outcome> {
    let p = load_partition(&a.partition)?;
    let cf = canonical_form(&p)?;
    println!("{}", cf.membership_string());
    if a.cert {
        println!("{}", cf.cycle_notation());
        println!("swap: {}", cf.swapped);
    }
    Ok(Outcome::Pass)
}

fn audit(a: AuditArgs) -> Result<Outcome> {
    let started = Instant::now();
    let p = load_partition(&a.partition)?;
    let params = p.params();
    let mut r = RunReport::new("audit");
    r.input("file", a.partition.input.display().to_string());
    r.input("n", params.n());
    r.input("w", params.w());
    audit_checks(&p, &mut r)?;
    if !a.no_timing {
        r.timing = Some(Timing {
            wall_secs: started.elapsed().as_secs_f64(),
        });
    }
    if a.json {
        println!("{}", r.to_json());
    } else {
        print!("{}", r.to_text());
    }
    Ok(Outcome::from_bool(r.passed))
}

fn verdict(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

fn audit_checks(p: &TwoPartition, r: &mut RunReport) -> Result<()> {
    use CheckStatus::{Info, Skip};

    let params = p.params();
    let eq = p.verify_equitable();
    let Some(m) = eq.matrix() else {
        r.check(
            "equitable",
            CheckStatus::Fail,
            irregular_detail(params, &eq),
        );
        for name in [
            "eigenvalue",
            "antipodal",
            "lemma5",
            "census",
            "prop2",
            "prop3",
        ] {
            r.check(name, Skip, "partition is not equitable");
        }
        return Ok(());
    };
    r.check("equitable", CheckStatus::Pass, m.to_string());
    r.output("matrix", m.to_string());

    let theta = m.eigenvalues().1;
    let index = params.eigenvalue_index(theta);
    let second = index == Some(2);
    let eigen_detail = match index {
        Some(2) => format!("second eigenvalue λ2 = {theta}"),
        Some(i) => format!("not a λ2 partition: quotient eigenvalue {theta} = λ{i}"),
        None => format!("not a λ2 partition: {theta} is not an eigenvalue"),
    };
    r.check("eigenvalue", Info, eigen_detail);

    let balanced_second = params.is_balanced() && second;
    if balanced_second {
        match p.antipodal_closed()? {
            AntipodalCheck::Closed => {
                r.check("antipodal", CheckStatus::Pass, "complements share cells")
            }
            AntipodalCheck::Broken(v) => r.check(
                "antipodal",
                CheckStatus::Fail,
                format!(
                    "vertex {} and its complement differ",
                    vertex_string(params, v)
                ),
            ),
        }
    } else {
        r.check("antipodal", Skip, "needs n = 2w and λ2");
    }

    let l5 = lemma5_audit(p)?;
    r.check(
        "lemma5",
        verdict(l5.equal),
        format!("cross edges {} vs difference supports {}", l5.lhs, l5.rhs),
    );

    if balanced_second {
        let census = system1_census(p)?;
        let detail = match &census {
            CensusOutcome::Complete { census, .. } => {
                format!(
                    "(k0, k1, k2) = ({}, {}, {})",
                    census.k0, census.k1, census.k2
                )
            }
            CensusOutcome::RoutedToF3 { pair } => {
                format!("F3 difference at ({}, {})", pair.0 + 1, pair.1 + 1)
            }
        };
        r.check("census", verdict(census.passes()), detail);
        let ok = prop2_check(p)?;
        let detail = if ok {
            "holds"
        } else {
            "F3 difference present but not equivalent to c2 with b = 2w"
        };
        r.check("prop2", verdict(ok), detail);
        if params.w() >= 5 {
            let ok = prop3_check(p)?;
            r.check(
                "prop3",
                verdict(ok),
                if ok {
                    "holds"
                } else {
                    "large block but no matching construction"
                },
            );
        } else {
            r.check("prop3", Skip, "needs w >= 5");
        }
    } else {
        for name in ["census", "prop2", "prop3"] {
            r.check(name, Skip, "needs n = 2w and λ2");
        }
    }
    Ok(())
}
