// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use divrank_core::analysis::{
    branch_profile, named_fits, rank_order, stability, top_branch_is_prime, FitRanges, RankTable,
    SizeSeries,
};
use divrank_core::net::link_count;
use divrank_core::pagerank::{pagerank_power, semianalytic, IterationTrace};
use divrank_core::spectrum::{
    arnoldi, companion_equilibrated_eigs, compute_cj, gamma_of, jordan_perturbation_demo,
    prime_model_spectrum, reduced_poly_roots, EigenvalueSet, StartVector,
};
use divrank_core::vector::{Snapshot, VectorKind};
use divrank_core::{DivisorCountTable, ModelVariant, ProbVector};

use crate::cache;
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, Format, Table};
use crate::{Command, MethodArg, RunConfig, StartArg};

pub fn dispatch(cfg: &RunConfig, cmd: &Command) -> CliResult<()> {
    match cmd {
        Command::Stats { compare_variants } => stats(cfg, *compare_variants),
        Command::Pagerank { compare_methods, top } => pagerank(cfg, *compare_methods, *top),
        Command::Spectrum { na, start, seed } => spectrum(cfg, *na, start_vector(*start, *seed)),
        Command::Arnoldi { na, start, seed } => arnoldi_cmd(cfg, *na, start_vector(*start, *seed)),
        Command::Analyze { inputs, samples } => analyze(cfg, inputs, *samples),
        Command::DemoJordan { d, eps } => demo_jordan(cfg, *d, *eps),
    }
}

fn start_vector(start: StartArg, seed: u64) -> StartVector {
    match start {
        StartArg::Uniform => StartVector::Uniform,
        StartArg::Random => StartVector::Random(seed),
    }
}

fn load_table(cfg: &RunConfig, n: u64, variant: ModelVariant) -> CliResult<DivisorCountTable> {
    cache::table(cfg.cache_dir.as_deref(), n, variant)
}

fn stem(cfg: &RunConfig, what: &str) -> String {
    format!("{what}_{}_{}", cfg.n_max, cfg.variant().name())
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> CliResult<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Csv => print!("{}", text()),
    }
    Ok(())
}

#[derive(Serialize)]
struct StatsReport {
    n: u64,
    variant: &'static str,
    links: u64,
    dangling: u64,
    l: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    links_simplified: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_ms: Option<f64>,
}

fn stats(cfg: &RunConfig, compare: bool) -> CliResult<()> {
    cfg.guard_memory(8 * cfg.n_max)?;
    let s = link_count(&load_table(cfg, cfg.n_max, cfg.variant())?);
    let mut report = StatsReport {
        n: cfg.n_max,
        variant: cfg.variant().name(),
        links: s.n_links,
        dangling: s.n_dangling as u64,
        l: s.l,
        links_simplified: None,
        r_ms: None,
    };
    if compare {
        let mult = link_count(&load_table(cfg, cfg.n_max, ModelVariant::Multiplicity)?).n_links;
        let simp = link_count(&load_table(cfg, cfg.n_max, ModelVariant::Simplified)?).n_links;
        report.links_simplified = Some(simp);
        report.r_ms = (simp > 0).then(|| mult as f64 / simp as f64);
        if cfg.variant() != ModelVariant::Multiplicity {
            eprintln!("note: R_ms always compares the multiplicity and simplified models");
        }
    }
    emit(cfg.format, &report, || {
        let mut t = format!(
            "N = {}\nvariant = {}\nlinks = {}\ndangling = {}\nl = {}\n",
            report.n, report.variant, report.links, report.dangling, report.l
        );
        if let (Some(s), r) = (report.links_simplified, report.r_ms) {
            t += &format!("links_simplified = {s}\n");
            t += &format!("R_ms = {}\n", r.map_or("undefined".into(), |r| format!("{r:.4}")));
        }
        t
    })
}

fn compute_pagerank(
    cfg: &RunConfig,
    table: &DivisorCountTable,
    method: MethodArg,
) -> CliResult<(ProbVector, IterationTrace)> {
    match method {
        MethodArg::Power => Ok(pagerank_power(table, cfg.alpha, cfg.tol, cfg.max_iter)?),
        MethodArg::Semianalytic => {
            if cfg.alpha != 1.0 {
                return Err(CliError::Validation(
                    "the semianalytic method needs --alpha 1; use --method power".into(),
                ));
            }
            let s = semianalytic(table);
            Ok((s.pagerank, s.trace))
        }
    }
}

fn rank_rows(p: &ProbVector, rank: &RankTable, top: usize) -> Table {
    let mut t = Table::new(&["K", "n", "P"]);
    let rows = if top == 0 { rank.n_max() } else { top.min(rank.n_max()) };
    for k in 1..=rows {
        let n = rank.n_at(k);
        t.push(vec![k.into(), n.into(), p[n].into()]);
    }
    t
}

fn write_snapshot(path: &Path, snap: &Snapshot) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    snap.write_to(BufWriter::new(File::create(path)?))?;
    Ok(())
}

fn pagerank(cfg: &RunConfig, compare: bool, top: usize) -> CliResult<()> {
    cfg.guard_memory(48 * cfg.n_max)?;
    let table = load_table(cfg, cfg.n_max, cfg.variant())?;
    let t0 = Instant::now();
    let (p, trace) = compute_pagerank(cfg, &table, cfg.method)?;
    eprintln!("pagerank computed in {:.3} s", t0.elapsed().as_secs_f64());
    let rank = rank_order(&p);

    let snap_path = cfg.out.join(format!("{}.bin", stem(cfg, "pagerank")));
    write_snapshot(
        &snap_path,
        &Snapshot {
            variant: cfg.variant(),
            kind: VectorKind::PageRank,
            vector: p.clone(),
        },
    )?;
    let rank_path = rank_rows(&p, &rank, top).save(&cfg.out, &stem(cfg, "rank"), cfg.format)?;
    let mut tr = Table::new(&["j", "delta"]);
    for (j, d) in trace.deltas.iter().enumerate() {
        tr.push(vec![(j + 1).into(), (*d).into()]);
    }
    let trace_path = tr.save(&cfg.out, &stem(cfg, "trace"), cfg.format)?;

    println!("N = {}", cfg.n_max);
    println!("variant = {}", cfg.variant());
    println!("method = {:?}", trace.method);
    println!("steps = {}", trace.deltas.len());
    println!("K_d = {}", rank.k_d);
    let head: Vec<String> = rank.order.iter().take(13).map(|n| n.to_string()).collect();
    println!("top = {}", head.join(" "));
    println!("snapshot = {}", snap_path.display());
    println!("rank = {rank_path}");
    println!("trace = {trace_path}");

    if compare {
        let other = match cfg.method {
            MethodArg::Power => MethodArg::Semianalytic,
            MethodArg::Semianalytic => MethodArg::Power,
        };
        let (q, _) = compute_pagerank(cfg, &table, other)?;
        let mut t = Table::new(&["K", "n", "P", "P_other", "dP"]);
        let rows = if top == 0 { rank.n_max() } else { top.min(rank.n_max()) };
        for k in 1..=rows {
            let n = rank.n_at(k);
            t.push(vec![k.into(), n.into(), p[n].into(), q[n].into(), (q[n] - p[n]).into()]);
        }
        let path = t.save(&cfg.out, &stem(cfg, "compare"), cfg.format)?;
        let rel = (1..=p.n_max())
            .map(|n| ((p[n] - q[n]) / p[n]).abs())
            .fold(0.0, f64::max);
        println!("l1_discrepancy = {}", fmt_f64(p.l1_distance(&q)));
        println!("max_relative_discrepancy = {}", fmt_f64(rel));
        println!("compare = {path}");
    }
    Ok(())
}

fn push_eigs(t: &mut Table, set: &EigenvalueSet) {
    for (i, (z, r)) in set.values.iter().zip(&set.residuals).enumerate() {
        let gamma = gamma_of(*z).unwrap_or(f64::INFINITY);
        t.push(vec![
            i.into(),
            z.re.into(),
            z.im.into(),
            z.norm().into(),
            gamma.into(),
            set.provenance.name().into(),
            (*r).into(),
        ]);
    }
}

const SPECTRUM_HEADER: [&str; 7] = ["index", "re", "im", "modulus", "gamma", "provenance", "residual"];

fn fmt_c(z: Complex64) -> String {
    format!("{} {:+}i", fmt_f64(z.re), fmt_f64(z.im))
}

fn spectrum(cfg: &RunConfig, na: usize, start: StartVector) -> CliResult<()> {
    cfg.guard_memory(32 * cfg.n_max + 8 * cfg.n_max * (na as u64 + 2) * (na > 0) as u64)?;
    let table = load_table(cfg, cfg.n_max, cfg.variant())?;
    let coeffs = compute_cj(&table);
    let roots = reduced_poly_roots(&coeffs)?;
    let comp = companion_equilibrated_eigs(&coeffs)?;

    let mut t = Table::new(&SPECTRUM_HEADER);
    push_eigs(&mut t, &roots);
    push_eigs(&mut t, &comp);
    let mut ritz = None;
    if na > 0 {
        let a = arnoldi(&table, na, start)?;
        push_eigs(&mut t, &a.ritz);
        ritz = Some(a);
    }
    let path = t.save(&cfg.out, &stem(cfg, "spectrum"), cfg.format)?;
    let mut ct = Table::new(&["j", "c"]);
    for (j, c) in coeffs.c.iter().enumerate() {
        ct.push(vec![j.into(), (*c).into()]);
    }
    let cpath = ct.save(&cfg.out, &stem(cfg, "coeffs"), cfg.format)?;

    let agree = roots
        .values
        .iter()
        .filter(|z| z.norm() > 1e-6)
        .map(|z| comp.distance_to(*z))
        .fold(0.0, f64::max);
    println!("N = {}", cfg.n_max);
    println!("variant = {}", cfg.variant());
    println!("l = {}", coeffs.l());
    println!("sum_c_minus_1 = {}", fmt_f64(coeffs.sum() - 1.0));
    if let Some(&l1) = roots.values.get(1) {
        println!("lambda_1 = {}", fmt_c(l1));
        println!("abs_lambda_1 = {}", fmt_f64(l1.norm()));
        println!("gamma_1 = {}", fmt_f64(gamma_of(l1).unwrap_or(f64::INFINITY)));
    }
    println!("roots_vs_companion = {}", fmt_f64(agree));
    for w in comp.warnings.iter().chain(&roots.warnings) {
        eprintln!("warning: {w}");
    }
    if cfg.variant() == ModelVariant::PrimeFactors {
        let pm = prime_model_spectrum(cfg.n_max)?;
        println!("prime_count = {}", pm.prime_count);
        for z in &pm.exact.values {
            println!("analytic = {}", fmt_c(*z));
        }
    }
    if let Some(a) = ritz {
        let worst = roots
            .values
            .iter()
            .filter(|z| z.norm() >= 1e-2)
            .map(|z| a.ritz.distance_to(*z))
            .fold(0.0, f64::max);
        println!("arnoldi_dimension = {}", a.dimension);
        println!("arnoldi_worst_match = {}", fmt_f64(worst));
    }
    println!("spectrum = {path}");
    println!("coeffs = {cpath}");
    Ok(())
}

fn arnoldi_cmd(cfg: &RunConfig, na: usize, start: StartVector) -> CliResult<()> {
    cfg.guard_memory(12 * cfg.n_max + 8 * cfg.n_max * (na as u64 + 2))?;
    let table = load_table(cfg, cfg.n_max, cfg.variant())?;
    let a = arnoldi(&table, na, start)?;
    let tag = match start {
        StartVector::Uniform => "uniform".to_string(),
        StartVector::Random(s) => format!("random{s}"),
    };
    let mut t = Table::new(&SPECTRUM_HEADER);
    push_eigs(&mut t, &a.ritz);
    let path = t.save(&cfg.out, &format!("{}_{tag}", stem(cfg, "ritz")), cfg.format)?;
    let mut c = Table::new(&["step", "coupling"]);
    for (k, h) in a.couplings.iter().enumerate() {
        c.push(vec![(k + 1).into(), (*h).into()]);
    }
    let cpath = c.save(&cfg.out, &format!("{}_{tag}", stem(cfg, "couplings")), cfg.format)?;
    let l = table.nilpotency_index();
    println!("N = {}", cfg.n_max);
    println!("dimension = {}", a.dimension);
    println!("breakdown = {}", a.breakdown);
    if let Some(h) = a.couplings.get(l - 1) {
        println!("coupling_at_l = {}", fmt_f64(*h));
    }
    println!("ritz = {path}");
    println!("couplings = {cpath}");
    Ok(())
}

#[derive(Serialize)]
struct SizeRecord {
    n: usize,
    links: u64,
    k_d: usize,
    gamma1: Option<f64>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    variant: &'static str,
    sizes: Vec<SizeRecord>,
    fits: divrank_core::analysis::NamedFits,
    stability: Vec<(usize, usize, Option<usize>)>,
}

fn read_snapshot(path: &Path) -> CliResult<Snapshot> {
    let f = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(Snapshot::read_from(BufReader::new(f))?)
}

fn analyze(cfg: &RunConfig, inputs: &[std::path::PathBuf], samples: usize) -> CliResult<()> {
    let mut snaps = Vec::with_capacity(inputs.len());
    for path in inputs {
        let s = read_snapshot(path)?;
        if s.kind != VectorKind::PageRank {
            return Err(CliError::Validation(format!("{} is not a PageRank snapshot", path.display())));
        }
        snaps.push(s);
    }
    let variant = snaps[0].variant;
    if let Some(s) = snaps.iter().find(|s| s.variant != variant) {
        return Err(CliError::Validation(format!(
            "snapshots mix variants {variant} and {}",
            s.variant
        )));
    }
    snaps.sort_by_key(|s| s.vector.n_max());
    if snaps.windows(2).any(|w| w[0].vector.n_max() == w[1].vector.n_max()) {
        return Err(CliError::Validation("two snapshots have the same size".into()));
    }
    let largest = snaps.last().unwrap().vector.n_max() as u64;
    cfg.guard_memory(80 * largest)?;

    let mut series = SizeSeries::default();
    let mut sizes = Vec::new();
    let mut ranks: Vec<RankTable> = Vec::new();
    for s in &snaps {
        let n = s.vector.n_max();
        let rank = rank_order(&s.vector);
        let table = load_table(cfg, n as u64, variant)?;
        let links = link_count(&table).n_links;
        let roots = reduced_poly_roots(&compute_cj(&table))?;
        let gamma1 = roots.values.get(1).and_then(|z| gamma_of(*z));
        series.links.push((n as u64, links));
        if !rank.tie_groups.is_empty() {
            series.plateaus.push((n as u64, rank.k_d));
        }
        if let Some(g) = gamma1 {
            series.gamma1.push((n as u64, g));
        }
        sizes.push(SizeRecord {
            n,
            links,
            k_d: rank.k_d,
            gamma1,
        });
        ranks.push(rank);
    }

    let top = snaps.last().unwrap();
    let rank = ranks.last().unwrap();
    let table = load_table(cfg, largest, variant)?;
    let deltas = semianalytic(&table).trace.deltas;
    drop(table);
    let fits = named_fits(&top.vector, rank, Some(&deltas), &series, &FitRanges::default());

    let mut stab = Vec::new();
    for w in 0..ranks.len().saturating_sub(1) {
        let (a, b) = (&ranks[w], &ranks[w + 1]);
        let r = stability(a, b)?;
        let mut t = Table::new(&["n", "K1", "K2", "dK"]);
        for n in 1..=r.n1 {
            t.push(vec![n.into(), a.k_of(n).into(), b.k_of(n).into(), r.delta_k[n - 1].into()]);
        }
        let path = t.save(&cfg.out, &format!("stability_{}_{}_{variant}", r.n1, r.n2), cfg.format)?;
        println!("K_s({}, {}) = {}", r.n1, r.n2, r.k_s.map_or("none".into(), |k| k.to_string()));
        println!("stability = {path}");
        stab.push((r.n1, r.n2, r.k_s));
    }

    let records = branch_profile(&top.vector, rank, samples);
    let k_max = 10_000.min(rank.n_max());
    println!("top_branch_prime(K <= {k_max}) = {}", top_branch_is_prime(&records, rank, k_max, 100));
    let keep = sample_ns(largest as usize, samples);
    let mut bt = Table::new(&["n", "K", "P", "nP", "n_over_K", "omega"]);
    for r in records.iter().filter(|r| keep.binary_search(&r.n).is_ok()) {
        bt.push(vec![r.n.into(), r.k.into(), r.p.into(), r.np.into(), r.n_over_k.into(), r.omega.into()]);
    }
    let bpath = bt.save(&cfg.out, &format!("branch_{largest}_{variant}"), cfg.format)?;
    println!("branch = {bpath}");

    for f in &fits.fits {
        let ps: Vec<String> = f
            .param_names
            .iter()
            .zip(f.params.iter().zip(&f.stderrs))
            .map(|(n, (p, e))| format!("{n} = {p:.6} +- {e:.2e}"))
            .collect();
        println!("fit {}: {}", f.model, ps.join(", "));
    }
    for (m, why) in &fits.skipped {
        println!("fit {m}: skipped ({why})");
    }
    let report = AnalyzeReport {
        variant: variant.name(),
        sizes,
        fits,
        stability: stab,
    };
    std::fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join(format!("fits_{largest}_{variant}.json"));
    serde_json::to_writer_pretty(BufWriter::new(File::create(&path)?), &report)?;
    println!("fits = {}", path.display());
    Ok(())
}

/// All `n <= N` when `N <= samples`, else about `samples` log-spaced values.
fn sample_ns(n_max: usize, samples: usize) -> Vec<usize> {
    if n_max <= samples {
        return (1..=n_max).collect();
    }
    let ln = (n_max as f64).ln();
    let mut v: Vec<usize> = (0..samples)
        .map(|i| (ln * i as f64 / (samples - 1).max(1) as f64).exp().round() as usize)
        .map(|n| n.clamp(1, n_max))
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn demo_jordan(cfg: &RunConfig, d: usize, eps: f64) -> CliResult<()> {
    let e = jordan_perturbation_demo(d, eps)?;
    let mut t = Table::new(&SPECTRUM_HEADER);
    push_eigs(&mut t, &e);
    let path = t.save(&cfg.out, &format!("jordan_{d}"), cfg.format)?;
    let (lo, hi) = e
        .values
        .iter()
        .map(|z| z.norm())
        .fold((f64::INFINITY, 0.0f64), |(a, b), m| (a.min(m), b.max(m)));
    println!("D = {d}");
    println!("epsilon = {}", fmt_f64(eps));
    println!("expected_modulus = {}", fmt_f64(eps.powf(1.0 / d as f64)));
    println!("min_modulus = {}", fmt_f64(lo));
    println!("max_modulus = {}", fmt_f64(hi));
    println!("eigenvalues = {path}");
    Ok(())
}
