use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};
use tverberg_core::certify::{
    certify_planar_witness, certify_torus_witness, check_claim_negative, exhaustive_bipartitions,
    exhaustive_rpartitions, CertificateReport, DEFAULT_BIPARTITION_CAP, DEFAULT_RPARTITION_CAP,
};
use tverberg_core::constructions::{choose_params, generate_scalloped, generate_torus, PointGrid, TorusWitness, MAX_PRECISION_BITS};
use tverberg_core::exact::{multi_hulls_intersect, VPolytope};
use tverberg_core::separating::{
    build_auxiliary_graph, check_fac_bound, extract_incidences, improve_separating_system, naive_separating_system,
    DisjointFamily, SeparatingSystem,
};
use tverberg_core::svg::{render_grid, render_system};
use tverberg_core::turan::{
    box_turan, check_box_freeness, find_empty_tuple, halfplane_hypergraph, intersection_hypergraph,
    max_hypercube_free, polyhedral_thickening, power_bound_holds, random_disjoint_unions, random_families,
    random_separated_pairs, vc_dimension, verify_recursion_bound, verify_thickening, EmptyTupleMethod, FTable,
};
use tverberg_core::{random, SCHEMA, VERSION};

use crate::output::{digest_file, kind_of, load, untag, FileDigest, Manifest, OutDir, Status};
use crate::{CertifyArgs, Cli, Command, ExhaustArgs, GridArgs, Mode, RenderArgs, SeparateArgs, TuranCommand};

struct Ctx {
    out: OutDir,
    seed: u64,
    inputs: Vec<FileDigest>,
    hashes: Vec<String>,
}

impl Ctx {
    fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(digest_file(path)?);
        Ok(())
    }
}

/// The command line minus the output directory and replay flags.
fn portable_argv(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--out" || a == "--replay" {
            it.next();
        } else if !a.starts_with("--out=") && !a.starts_with("--replay=") {
            out.push(a.clone());
        }
    }
    out
}

pub fn run(cli: Cli) -> Result<Status> {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let (cli, argv, expected_inputs) = match &cli.replay {
        Some(path) => {
            ensure!(cli.command.is_none(), "--replay takes no subcommand");
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let m: Manifest = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            ensure!(m.schema == SCHEMA, "manifest schema {:?} is not {SCHEMA:?}", m.schema);
            let mut replayed = Cli::try_parse_from(std::iter::once("tverberg".to_string()).chain(m.argv.iter().cloned()))
                .context("manifest argv does not parse")?;
            replayed.out = cli.out.clone();
            (replayed, m.argv, Some(m.inputs))
        }
        None => (cli, portable_argv(&raw), None),
    };
    let Some(command) = cli.command else {
        bail!("no subcommand given; try --help");
    };
    let out = cli.out.unwrap_or_else(|| PathBuf::from("out"));
    let mut ctx = Ctx { out: OutDir::create(&out)?, seed: cli.seed, inputs: Vec::new(), hashes: Vec::new() };
    let status = match &command {
        Command::Generate(a) => generate(&mut ctx, a)?,
        Command::Certify(a) => certify(&mut ctx, a)?,
        Command::Exhaust(a) => exhaust(&mut ctx, a)?,
        Command::Separate(a) => separate(&mut ctx, a)?,
        Command::Turan(t) => turan(&mut ctx, t)?,
        Command::Render(a) => render(&mut ctx, a)?,
    };
    if let Some(expected) = expected_inputs {
        ensure!(expected == ctx.inputs, "replayed inputs differ from the manifest's recorded digests");
    }
    let parameters = serde_json::to_value(&command)?;
    let manifest = Manifest {
        schema: SCHEMA.into(),
        tool: "tverberg".into(),
        version: VERSION.into(),
        subcommand: subcommand_name(&parameters),
        argv,
        parameters,
        seed: ctx.seed,
        status,
        inputs: ctx.inputs,
        artifacts: Vec::new(),
        transcript_hashes: ctx.hashes,
    };
    let path = ctx.out.finish(manifest)?;
    println!("status {}; manifest {}", if status == Status::Pass { "pass" } else { "fail" }, path.display());
    Ok(status)
}

fn subcommand_name(params: &Value) -> String {
    let mut parts = Vec::new();
    let mut cur = params;
    while let Some((k, v)) = cur.as_object().filter(|o| o.len() == 1).and_then(|o| o.iter().next()) {
        parts.push(k.clone());
        cur = v;
    }
    if parts.is_empty() {
        if let Some(s) = params.as_str() {
            parts.push(s.to_string());
        }
    }
    parts.join(" ")
}

enum Witness {
    Grid(PointGrid),
    Torus(TorusWitness),
}

fn build_witness(a: &GridArgs, bits: u32) -> Result<Witness> {
    let s = a.s.context("--s is required when no --grid file is given")?;
    let params = choose_params(s, bits)?;
    match a.r {
        2 => {
            let params = if a.refined { params.refined() } else { params };
            Ok(Witness::Grid(generate_scalloped(&params)?))
        }
        r if r >= 3 => {
            ensure!(!a.refined, "the refined grid has no torus lift; drop --refined or use --r 2");
            Ok(Witness::Torus(generate_torus(s, r, bits)?))
        }
        r => bail!("--r must be at least 2, got {r}"),
    }
}

fn load_witness(ctx: &mut Ctx, path: &Path) -> Result<Witness> {
    ctx.input(path)?;
    let (kind, value) = kind_of(path)?;
    match kind.as_str() {
        "point_grid" => Ok(Witness::Grid(untag(value)?)),
        "torus_witness" => Ok(Witness::Torus(untag(value)?)),
        other => bail!("{}: expected a grid or torus artifact, found {other:?}", path.display()),
    }
}

fn generate(ctx: &mut Ctx, a: &GridArgs) -> Result<Status> {
    match build_witness(a, a.precision_bits)? {
        Witness::Grid(g) => {
            ctx.out.json("grid.json", "point_grid", &g)?;
            ctx.out.text("grid.svg", &render_grid(&g, None)?)?;
            println!("grid: {} arcs x {} points", g.rows, g.cols);
        }
        Witness::Torus(w) => {
            ctx.out.json("torus.json", "torus_witness", &w)?;
            ctx.out.text("grid.svg", &render_grid(&w.base, None)?)?;
            println!("torus witness: {} points in dimension {}", w.points.len(), w.dim);
        }
    }
    Ok(Status::Pass)
}

fn certificate(w: &Witness, mode: Mode, cap: Option<u64>) -> Result<CertificateReport> {
    Ok(match (w, mode) {
        (Witness::Grid(g), Mode::Negative) => check_claim_negative(g),
        (Witness::Grid(g), Mode::Maximal) => certify_planar_witness(g)?,
        (Witness::Grid(g), Mode::Exhaust) => {
            exhaustive_bipartitions(g, cap.map_or(DEFAULT_BIPARTITION_CAP, |c| c as usize))?
        }
        (Witness::Torus(t), Mode::Negative) => check_claim_negative(&t.base),
        (Witness::Torus(t), Mode::Maximal) => certify_torus_witness(t)?,
        (Witness::Torus(t), Mode::Exhaust) => exhaustive_rpartitions(t, cap.unwrap_or(DEFAULT_RPARTITION_CAP))?,
    })
}

#[derive(Serialize)]
struct Attempt {
    precision_bits: u32,
    passed: bool,
}

#[derive(Serialize)]
struct CertifyRun<'a> {
    mode: Mode,
    /// Generated witnesses are retried at doubled precision after a failure.
    precision_attempts: Vec<Attempt>,
    report: &'a CertificateReport,
}

fn run_certificate(ctx: &mut Ctx, grid: &Option<PathBuf>, gen: &GridArgs, mode: Mode, cap: Option<u64>) -> Result<Status> {
    let mut attempts = Vec::new();
    let report = match grid {
        Some(path) => certificate(&load_witness(ctx, path)?, mode, cap)?,
        None => {
            let mut bits = gen.precision_bits;
            loop {
                let report = certificate(&build_witness(gen, bits)?, mode, cap)?;
                attempts.push(Attempt { precision_bits: bits, passed: report.passed() });
                if report.passed() || mode == Mode::Exhaust || bits >= MAX_PRECISION_BITS {
                    break report;
                }
                bits = (bits * 2).min(MAX_PRECISION_BITS);
            }
        }
    };
    ctx.hashes.push(report.transcript_hash.clone());
    ctx.out.json("report.json", "certify_run", &CertifyRun { mode, precision_attempts: attempts, report: &report })?;
    println!(
        "{}: {} ({} checks)",
        report.claim_id,
        if report.passed() { "pass" } else { "fail" },
        report.checked_count
    );
    Ok(Status::of(report.passed()))
}

fn certify(ctx: &mut Ctx, a: &CertifyArgs) -> Result<Status> {
    run_certificate(ctx, &a.grid, &a.gen, a.mode, a.cap)
}

fn exhaust(ctx: &mut Ctx, a: &ExhaustArgs) -> Result<Status> {
    run_certificate(ctx, &a.grid, &a.gen, Mode::Exhaust, a.cap)
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, r: std::result::Result<(), String>) -> Check {
    match r {
        Ok(()) => Check { name, passed: true, detail: String::new() },
        Err(detail) => Check { name, passed: false, detail },
    }
}

fn separate(ctx: &mut Ctx, a: &SeparateArgs) -> Result<Status> {
    let family = match &a.family {
        Some(path) => {
            ctx.input(path)?;
            let f: DisjointFamily = load(path, "disjoint_family")?;
            DisjointFamily::new(f.sets().to_vec())?
        }
        None => DisjointFamily::random(a.a, ctx.seed)?,
    };
    let n = family.len();
    let naive = naive_separating_system(&family)?;
    let imp = improve_separating_system(&naive, &family, a.cap)?;
    let incidences = extract_incidences(&imp.system);
    let graph = build_auxiliary_graph(&imp.system, &incidences);
    let fac = if n >= 3 { Some(check_fac_bound(&imp.system)?) } else { None };
    let mut checks = vec![check("valid", imp.system.validate(&family).map_err(|e| e.to_string()))];
    checks.push(check(
        "plane_drawing",
        graph.as_ref().map_err(|e| e.to_string()).and_then(|g| g.check_plane().map_err(|e| e.to_string())),
    ));
    if let (Ok(g), true) = (&graph, n >= 3) {
        let e = g.edges.len();
        checks.push(check("edge_bound", if e <= 3 * n - 6 { Ok(()) } else { Err(format!("{e} edges > {}", 3 * n - 6)) }));
    }
    if let Some(f) = fac.as_ref().filter(|_| imp.supported) {
        checks.push(check(
            "supported_fac",
            if f.fac_le_twice_incidences { Ok(()) } else { Err(format!("Fac {} > 2|I|", f.fac)) },
        ));
    }
    let status = Status::of(checks.iter().all(|c| c.passed));
    let graph = graph.ok();
    ctx.out.json("family.json", "disjoint_family", &family)?;
    ctx.out.json(
        "separation.json",
        "separation",
        &json!({
            "family": family,
            "naive": naive,
            "improvement": imp,
            "incidences": incidences,
            "graph": graph,
            "fac_report": fac,
            "checks": checks,
        }),
    )?;
    ctx.out.text("system.svg", &render_system(&imp.system, &family, &incidences, graph.as_ref())?)?;
    println!(
        "a = {n}: Fac {} -> {}, {} incidences, supported {}{}",
        naive.fac,
        imp.system.fac,
        incidences.len(),
        imp.supported,
        fac.map(|f| format!(", Fac <= {}: {}", f.bound, f.fac_le_bound)).unwrap_or_default()
    );
    Ok(status)
}

fn seeds(ctx: &Ctx, trials: u64) -> std::ops::Range<u64> {
    ctx.seed..ctx.seed + trials
}

fn turan(ctx: &mut Ctx, t: &TuranCommand) -> Result<Status> {
    match *t {
        TuranCommand::Hypercube { k, m, s, cap } => {
            let f = max_hypercube_free(k, m, s, cap)?;
            let bound = (k >= 2 && m >= 2).then(|| power_bound_holds(k, m, s, f.value));
            ctx.out.json("hypercube.json", "hypercube_free", &json!({ "result": f, "power_bound_holds": bound }))?;
            println!("F({k}, {m}, {s}) = {} ({} nodes)", f.value, f.nodes);
            Ok(Status::of(bound != Some(false)))
        }
        TuranCommand::Recursion { k, m, s, cap } => {
            let table = FTable::compute_for_recursion(k, m, s, cap)?;
            let rec = verify_recursion_bound(&table, k, m, s)?;
            let value = table.get(k, m, s)?;
            let power = power_bound_holds(k, m, s, value);
            ctx.out.json(
                "recursion.json",
                "recursion_check",
                &json!({ "table": table, "check": rec, "power_bound_holds": power }),
            )?;
            println!("F({k}, {m}, {s}) = {value}; double counting {}; power bound {power}", rec.holds);
            Ok(Status::of(rec.holds && power))
        }
        TuranCommand::Boxes { n, d, cap } => {
            let b = box_turan(n, d, cap)?;
            ctx.out.json("boxes.json", "box_turan", &b)?;
            println!("ex({n}, d = {d}) = {} ({} nodes)", b.value, b.nodes);
            Ok(Status::Pass)
        }
        TuranCommand::BoxFree { parts, s, trials } => {
            ensure!(parts >= 2, "--parts must be at least 2");
            let mut rows = Vec::new();
            for seed in seeds(ctx, trials) {
                let families = random_families(parts, s, parts - 1, seed)?;
                let g = intersection_hypergraph(&families)?;
                let violation = check_box_freeness(&g, parts)?;
                rows.push(json!({ "seed": seed, "edges": g.edge_count(), "violation": violation }));
            }
            let ok = rows.iter().all(|r| r["violation"].is_null());
            ctx.out.json("box_free.json", "box_freeness", &json!({ "parts": parts, "s": s, "trials": rows }))?;
            println!("{trials} instances, box-free: {ok}");
            Ok(Status::of(ok))
        }
        TuranCommand::EmptyTuple { d, trials } => {
            let mut rows = Vec::new();
            let mut ok = true;
            for seed in seeds(ctx, trials) {
                let pairs = random_separated_pairs(d, seed);
                let mut row = json!({ "seed": seed });
                for (name, method) in [("brute_force", EmptyTupleMethod::BruteForce), ("inductive", EmptyTupleMethod::Inductive)] {
                    let t = find_empty_tuple(&pairs, method)?;
                    let sets: Vec<VPolytope> =
                        t.iter().zip(&pairs).map(|(&b, p)| if b == 0 { p.0.clone() } else { p.1.clone() }).collect();
                    let empty = multi_hulls_intersect(&sets)?.is_none();
                    ok &= empty;
                    row[name] = json!({ "tuple": t, "empty": empty });
                }
                rows.push(row);
            }
            ctx.out.json("empty_tuples.json", "empty_tuples", &json!({ "d": d, "trials": rows }))?;
            println!("{trials} instances in dimension {d}, methods agree: {ok}");
            Ok(Status::of(ok))
        }
        TuranCommand::Thicken { r, s, d } => {
            let families = random_disjoint_unions(r, s, d, ctx.seed)?;
            let t = polyhedral_thickening(&families)?;
            let verified = verify_thickening(&families, &t.polyhedra).map_err(|e| e.to_string());
            let ok = verified.is_ok() && t.total_facets <= t.budget;
            ctx.out.json(
                "thickening.json",
                "thickening",
                &json!({ "families": families, "thickening": t, "verified": verified.err() }),
            )?;
            println!("{} facets, budget rs(q + s) = {} with q = {}", t.total_facets, t.budget, t.q_observed);
            Ok(Status::of(ok))
        }
        TuranCommand::Vc { n } => {
            let mut rng = random::rng(ctx.seed);
            let points = random::points_in(&mut rng, n, 2, 10, 1);
            let h = halfplane_hypergraph(&points)?;
            let vc = vc_dimension(&h)?;
            ctx.out.json("vc.json", "vc_dimension", &json!({ "points": points, "ranges": h.edge_count(), "result": vc }))?;
            println!("halfplane ranges on {n} points: VC dimension {}", vc.dimension);
            Ok(Status::Pass)
        }
    }
}

fn render(ctx: &mut Ctx, a: &RenderArgs) -> Result<Status> {
    let svg = if let Some(path) = &a.grid {
        match load_witness(ctx, path)? {
            Witness::Grid(g) => render_grid(&g, a.partition)?,
            Witness::Torus(_) => bail!("{}: torus witnesses are not planar; render the base grid from `generate --r 2`", path.display()),
        }
    } else if let Some(path) = &a.separation {
        ctx.input(path)?;
        let (kind, value) = kind_of(path)?;
        ensure!(kind == "separation", "{}: expected a separation artifact, found {kind:?}", path.display());
        let family: DisjointFamily = serde_json::from_value(value["family"].clone())?;
        let family = DisjointFamily::new(family.sets().to_vec())?;
        let system: SeparatingSystem = serde_json::from_value(value["improvement"]["system"].clone())?;
        system.validate(&family)?;
        let incidences = extract_incidences(&system);
        let graph = build_auxiliary_graph(&system, &incidences).ok();
        render_system(&system, &family, &incidences, graph.as_ref())?
    } else {
        bail!("render needs --grid or --separation");
    };
    ensure!(!a.name.contains('/') && !a.name.is_empty(), "--name must be a plain file name");
    let path = ctx.out.text(&a.name, &svg)?;
    println!("wrote {}", path.display());
    Ok(Status::Pass)
}
