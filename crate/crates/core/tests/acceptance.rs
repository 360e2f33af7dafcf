//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always show.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tangent_porosity::cli::{reproduce, Target};
use tangent_porosity::generators::{
    gen_example_2_8, gen_factorial, gen_geometric, gen_random_ladder, PartitionSpec,
};
use tangent_porosity::porosity::{
    completely_strong_porosity, default_pool, is_strongly_porous, right_porosity, tau_strong_porosity,
    w_porosity, witness_gap_route, PorosityParams, PosSeq, Status,
};
use tangent_porosity::pretangent::{
    boundedness_experiment, metric_identification, mutual_stability, saturate_family,
    scale_matched_candidates, subsequence_invariance_check, Agreement, DiameterTrend,
    ExperimentConfig, ExperimentReport, MetricOracle, NormalizingSeq, PointSeq, StabilityParams,
};
use tangent_porosity::pretangent::oracles::{Circle, Ray, SubsetOfLine, SymmetricLine};
use tangent_porosity::scaleset::{LogValue, ScaleSet};

const DEPTH: usize = 40;
/// `2^-20`.
const TOL_LOG2: i32 = -20;
const P_PLUS_TOL: f64 = 1e-9;
const RANDOM_LADDERS: u64 = 50;
const FAMILY_BUILDS: usize = 100;
const CLASS_COUNT_SEQUENCES: usize = 100;
const LADDER_J: usize = 16;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn tol() -> f64 {
    f64::from(TOL_LOG2).exp2()
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

struct Corpus {
    geometric: ScaleSet,
    factorial: ScaleSet,
    example: ScaleSet,
}

fn corpus() -> Corpus {
    Corpus {
        geometric: gen_geometric(&half(), DEPTH).unwrap(),
        factorial: gen_factorial(DEPTH).unwrap(),
        example: gen_example_2_8(DEPTH, &PartitionSpec::DyadicClasses).unwrap().0,
    }
}

/// Exact trace against the unrolled recurrence `tau_{n+1} = 2^(-n^2) tau_n`.
fn criterion_1() -> Outcome {
    let partition = PartitionSpec::DyadicClasses;
    let (_, trace) = gen_example_2_8(DEPTH, &partition).map_err(err)?;
    ensure(trace.rows.len() == DEPTH, "row count")?;
    let mut unrolled = BigInt::from(0);
    let mut prev_gap: Option<BigInt> = None;
    for (i, row) in trace.rows.iter().enumerate() {
        let n = i + 1;
        ensure(row.n == n, format!("row {i} has n = {}", row.n))?;
        ensure(row.log2_tau == unrolled, format!("n={n}: log2 tau {} vs unrolled {unrolled}", row.log2_tau))?;
        let ni = n as i64;
        let closed = -(ni - 1) * ni * (2 * ni - 1) / 6;
        ensure(row.log2_tau == BigInt::from(closed), format!("n={n}: closed form {closed}"))?;
        let class = 1 + n.trailing_zeros() as usize;
        let nu = 1usize << (class - 1);
        ensure(row.class == class && row.nu == nu, format!("n={n}: class/nu"))?;
        ensure(row.log2_tau_star == &row.log2_tau - BigInt::from(nu), format!("n={n}: tau*"))?;
        let next = &unrolled - BigInt::from(ni * ni);
        if n >= 2 {
            let scaled = &row.log2_tau - BigInt::from(ni);
            ensure(
                next <= scaled && scaled <= row.log2_tau_star && row.log2_tau_star < row.log2_tau,
                format!("n={n}: chain tau_(n+1) <= 2^-n tau_n <= tau*_n < tau_n"),
            )?;
            let gap = &next - &row.log2_tau_star;
            if let Some(p) = &prev_gap {
                ensure(&gap < p, format!("n={n}: tau_(n+1)/tau*_n not decreasing"))?;
            }
            prev_gap = Some(gap);
        }
        unrolled = next;
    }
    ensure(trace.rows[3].log2_tau == BigInt::from(-14), "tau_4 != 2^-14")?;
    ensure(trace.validate().all_pass(), "library trace validation disagrees")?;
    Ok(format!("{DEPTH} rows exact, tau_4 = 2^-14"))
}

fn criterion_2(c: &Corpus) -> Outcome {
    let params = PorosityParams::default();
    let tol = params.tol.clone();
    let rp = right_porosity(&c.geometric, params.window_fraction).map_err(err)?;
    let p_plus = rp.sup_f64();
    ensure((p_plus - 0.5).abs() <= P_PLUS_TOL, format!("geometric p+ = {p_plus}"))?;
    let strong = |s: &ScaleSet| is_strongly_porous(s, &tol, params.window_fraction).map(|v| v.status);
    let w = |s: &ScaleSet| w_porosity(s, &params).map(|v| v.status);
    let complete = |s: &ScaleSet| {
        completely_strong_porosity(s, &default_pool(s, Vec::new()), &params).map(|v| v.status)
    };
    let expect = [
        ("geometric strong", strong(&c.geometric).map_err(err)?, Status::Fails),
        ("geometric w", w(&c.geometric).map_err(err)?, Status::Fails),
        ("factorial strong", strong(&c.factorial).map_err(err)?, Status::Holds),
        ("factorial w", w(&c.factorial).map_err(err)?, Status::Holds),
        ("factorial complete", complete(&c.factorial).map_err(err)?, Status::Holds),
        ("two-ladder w", w(&c.example).map_err(err)?, Status::Holds),
        ("two-ladder complete", complete(&c.example).map_err(err)?, Status::Fails),
    ];
    for (name, got, want) in expect {
        ensure(got == want, format!("{name}: {got}, expected {want}"))?;
    }

    let partition = PartitionSpec::DyadicClasses;
    let (set, trace) = gen_example_2_8(DEPTH, &partition).map_err(err)?;
    let star = PosSeq::new(trace.tau_star()).map_err(err)?;
    let v = tau_strong_porosity(&set, &star, &params).map_err(err)?;
    ensure(v.status == Status::Fails, format!("tau* verdict {}", v.status))?;
    let ce = v.counterexample.ok_or("tau* fails without a counterexample")?;
    let classes: Vec<usize> = ce.iter().filter_map(|&n| partition.class_of(n)).collect();
    ensure(
        classes.len() == ce.len() && classes.windows(2).all(|w| w[0] == w[1]),
        format!("counterexample {ce:?} spans classes {classes:?}"),
    )?;

    let tau = PosSeq::new(trace.tau()).map_err(err)?;
    let tau_status = tau_strong_porosity(&set, &tau, &params).map_err(err)?.status;
    let (_, files) = reproduce(Target::Example28).map_err(err)?;
    let seqs = files
        .iter()
        .find(|f| f.0 == "sequences.csv")
        .ok_or("no sequence report")?;
    ensure(
        seqs.1.contains(&format!("tau,tau-strong,{tau_status}")),
        "sequence report lacks the tau verdict",
    )?;
    Ok(format!(
        "p+ = {p_plus}, tau* counterexample {ce:?} in class {}, tau recorded as {tau_status}",
        classes[0]
    ))
}

fn criterion_3(c: &Corpus) -> Outcome {
    let params = PorosityParams::default();
    let (_, trace) = gen_example_2_8(DEPTH, &PartitionSpec::DyadicClasses).map_err(err)?;
    let extra = vec![
        PosSeq::new(trace.tau()).map_err(err)?,
        PosSeq::new(trace.tau_star()).map_err(err)?,
    ];
    let sets = [
        ("geometric", &c.geometric, Vec::new()),
        ("factorial", &c.factorial, Vec::new()),
        ("two-ladder", &c.example, extra),
    ];
    let mut pairs = 0;
    let mut decided = 0;
    for (name, set, extra) in sets {
        for (i, seq) in default_pool(set, extra).iter().enumerate() {
            let grid = tau_strong_porosity(set, seq, &params).map_err(err)?.status;
            let gaps = witness_gap_route(set, seq, &params).map_err(err)?.status;
            pairs += 1;
            decided += usize::from(grid != Status::Inconclusive && gaps != Status::Inconclusive);
            ensure(
                !matches!(
                    (grid, gaps),
                    (Status::Holds, Status::Fails) | (Status::Fails, Status::Holds)
                ),
                format!("{name} pool[{i}]: k-grid {grid} vs witness gaps {gaps}"),
            )?;
        }
    }
    Ok(format!("{pairs} pairs, {decided} decided by both routes, 0 disagreements"))
}

fn criterion_4(c: &Corpus) -> Outcome {
    let params = PorosityParams::default();
    let mut sets = vec![
        ("geometric".to_string(), c.geometric.clone()),
        ("factorial".to_string(), c.factorial.clone()),
        ("two-ladder".to_string(), c.example.clone()),
    ];
    for seed in 0..RANDOM_LADDERS {
        sets.push((format!("ladder:{seed}"), gen_random_ladder(seed, DEPTH).map_err(err)?));
    }
    let mut w_holds = 0;
    for (name, set) in &sets {
        if w_porosity(set, &params).map_err(err)?.status != Status::Holds {
            continue;
        }
        w_holds += 1;
        let s = is_strongly_porous(set, &params.tol, params.window_fraction).map_err(err)?.status;
        ensure(s == Status::Holds, format!("{name}: w holds but strong is {s}"))?;
    }
    Ok(format!("{} sets, {w_holds} w-porous, 0 violations", sets.len()))
}

fn decay(a_eighths: i64, lo: i64) -> NormalizingSeq {
    let terms = (1..=DEPTH as i64)
        .map(|n| LogValue::pow2(BigRational::new((-(8 * lo + a_eighths * n)).into(), 8.into())))
        .collect();
    NormalizingSeq::new(terms, format!("decay:{a_eighths}/8@{lo}")).unwrap()
}

/// Build a family over scale-matched candidates and check it.
fn check_family<O: MetricOracle>(oracle: &O, r: &NormalizingSeq, params: &StabilityParams) -> Result<usize, String> {
    let tol = params.tol;
    let cands = scale_matched_candidates(oracle, r, tol);
    let seed = vec![PointSeq::marked(oracle, r.len())];
    let fam = saturate_family(oracle, seed, &cands, r, params).map_err(err)?;
    let n = fam.len();
    let where_ = |i: usize, j: usize| format!("{} on {}: members {i}, {j}", oracle.label(), r.label);
    for i in 0..n {
        for j in 0..n {
            // symmetry against an independent recomputation with swapped arguments
            let a = mutual_stability(oracle, &fam.members[i], &fam.members[j], r, params).map_err(err)?;
            let b = mutual_stability(oracle, &fam.members[j], &fam.members[i], r, params).map_err(err)?;
            ensure(a.limit == b.limit, format!("{}: asymmetric", where_(i, j)))?;
            ensure(fam.dtilde[i][j] == fam.dtilde[j][i], format!("{}: asymmetric matrix", where_(i, j)))?;
            for k in 0..n {
                ensure(
                    fam.dtilde[i][k] <= fam.dtilde[i][j] + fam.dtilde[j][k] + 2.0 * tol,
                    format!("{}: triangle through {k}", where_(i, j)),
                )?;
            }
        }
    }
    let space = metric_identification(&fam, tol).map_err(err)?;
    for (ci, a) in space.classes.iter().enumerate() {
        for (cj, b) in space.classes.iter().enumerate() {
            for &x in a {
                for &y in b {
                    ensure(
                        (fam.dtilde[x][y] - space.rho[ci][cj]).abs() <= 2.0 * tol,
                        format!("{}: representatives of classes {ci}, {cj}", where_(x, y)),
                    )?;
                }
            }
        }
    }
    for offset in 0..2 {
        let idx: Vec<usize> = (offset..r.len()).step_by(2).collect();
        let inv = subsequence_invariance_check(oracle, &fam, &idx, params).map_err(err)?;
        ensure(
            inv.max_deviation <= 2.0 * tol,
            format!("{} on {}: offset {offset} deviation {}", oracle.label(), r.label, inv.max_deviation),
        )?;
    }
    Ok(n)
}

fn criterion_5(c: &Corpus) -> Outcome {
    let params = StabilityParams {
        tol: tol(),
        window_fraction: 0.5,
    };
    let geometric = SubsetOfLine::new(c.geometric.clone());
    let factorial = SubsetOfLine::new(c.factorial.clone());
    let example = SubsetOfLine::new(c.example.clone());
    let symmetric = SymmetricLine::new(c.geometric.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut members = 0;
    for build in 0..FAMILY_BUILDS {
        let r = decay(rng.gen_range(1..=4), rng.gen_range(1..=4));
        members += match build % 6 {
            0 => check_family(&geometric, &r, &params),
            1 => check_family(&factorial, &r, &params),
            2 => check_family(&example, &r, &params),
            3 => check_family(&symmetric, &r, &params),
            4 => check_family(&Ray, &r, &params),
            _ => check_family(&Circle, &r, &params),
        }?;
    }
    Ok(format!("{FAMILY_BUILDS} builds, {members} members, 0 violations"))
}

struct Experiments {
    geometric: ExperimentReport,
    factorial: ExperimentReport,
    example: ExperimentReport,
}

fn run_experiments(c: &Corpus) -> Result<Experiments, String> {
    let cfg = ExperimentConfig {
        depth: DEPTH,
        tol_log2: TOL_LOG2,
        ladder_max: LADDER_J,
        ..ExperimentConfig::default()
    };
    let run = |s: &ScaleSet| boundedness_experiment(&SubsetOfLine::new(s.clone()), &cfg).map_err(err);
    Ok(Experiments {
        geometric: run(&c.geometric)?,
        factorial: run(&c.factorial)?,
        example: run(&c.example)?,
    })
}

fn criterion_6(e: &Experiments) -> Outcome {
    let g = &e.geometric;
    ensure(g.w_status == Status::Fails, format!("geometric w {}", g.w_status))?;
    let ladder = g.ladder.as_ref().ok_or("geometric has no ladder")?;
    ensure(
        ladder.unbounded && ladder.rungs.len() == LADDER_J && ladder.rungs.iter().all(Option::is_some),
        "geometric ladder stalls before J = 16",
    )?;
    ensure(g.agreement == Agreement::Agree, format!("geometric {}", g.agreement))?;
    for (name, rep) in [("factorial", &e.factorial), ("two-ladder", &e.example)] {
        ensure(rep.w_status == Status::Holds, format!("{name} w {}", rep.w_status))?;
        ensure(
            rep.diameter_trend == DiameterTrend::Stable,
            format!("{name}: diameter {} at depth {DEPTH} vs {} at half depth", rep.max_diameter, rep.max_diameter_half),
        )?;
        ensure(rep.agreement == Agreement::Agree, format!("{name} {}", rep.agreement))?;
    }
    Ok(format!(
        "geometric ladder to J = {LADDER_J}, diameters {} (half depth {}); factorial {} / {}; two-ladder {} / {}",
        g.max_diameter, g.max_diameter_half, e.factorial.max_diameter, e.factorial.max_diameter_half,
        e.example.max_diameter, e.example.max_diameter_half
    ))
}

fn criterion_7(reports: &[&ExperimentReport]) -> Outcome {
    let slack = 4.0 * tol();
    let mut checked = 0;
    for rep in reports {
        for run in &rep.runs {
            ensure(run.distance_set_bound_ok, format!("{} run {} flagged", rep.space, run.run_id))?;
            if let (Some(d), Some(ds)) = (run.diameter, run.diameter_distance_set) {
                checked += 1;
                ensure(
                    d <= 2.0 * ds + slack,
                    format!("{} run {}: {d} > 2 * {ds} + 4 tol", rep.space, run.run_id),
                )?;
            }
        }
    }
    Ok(format!("{checked} runs with both spaces built, 0 violations"))
}

fn criterion_8(c: &Corpus) -> Result<(String, ExperimentReport), String> {
    let cfg = ExperimentConfig {
        trials: CLASS_COUNT_SEQUENCES,
        seed: 8,
        ..ExperimentConfig::default()
    };
    let rep = boundedness_experiment(&SubsetOfLine::new(c.example.clone()), &cfg).map_err(err)?;
    let counts: Vec<usize> = rep.runs.iter().filter_map(|r| r.class_count).collect();
    ensure(
        counts.len() >= CLASS_COUNT_SEQUENCES,
        format!("only {} of {} sequences produced a space", counts.len(), rep.runs.len()),
    )?;
    let max = counts.iter().copied().max().unwrap_or(0);
    ensure(max <= 3, format!("a space has {max} classes"))?;
    Ok((format!("{} spaces, max class count {max}", counts.len()), rep))
}

fn criterion_9() -> Outcome {
    let mut files = 0;
    for target in [Target::Example28, Target::Remark211, Target::Theorem24Suite] {
        let dirs = [tempfile::tempdir().map_err(err)?, tempfile::tempdir().map_err(err)?];
        for d in &dirs {
            let args = ["tangent-porosity", "reproduce", target.name(), "--out", d.path().to_str().unwrap()];
            let code = tangent_porosity::cli::run(args, &mut std::io::sink(), &mut std::io::sink());
            ensure(code == 0, format!("{} exited {code}", target.name()))?;
        }
        let mut names: Vec<_> = std::fs::read_dir(dirs[0].path())
            .map_err(err)?
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        for name in names {
            let a = std::fs::read(dirs[0].path().join(&name)).map_err(err)?;
            let b = std::fs::read(dirs[1].path().join(&name)).map_err(err)?;
            ensure(a == b, format!("{} {:?} differs", target.name(), name))?;
            files += 1;
        }
    }
    Ok(format!("{files} files byte-identical across reruns"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: usize, name: &str, start: Instant, out: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {id} {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {id} {name}: {msg} ({secs:.1}s)");
            }
        }
    };
    let c = corpus();

    let t = Instant::now();
    report(1, "two-ladder trace", t, criterion_1());
    let t = Instant::now();
    report(2, "corpus verdicts", t, criterion_2(&c));
    let t = Instant::now();
    report(3, "k-grid and witness-gap routes agree", t, criterion_3(&c));
    let t = Instant::now();
    report(4, "w-porous implies strongly porous", t, criterion_4(&c));
    let t = Instant::now();
    report(5, "pseudometric and quotient", t, criterion_5(&c));

    let t = Instant::now();
    let experiments = run_experiments(&c);
    match &experiments {
        Ok(e) => report(6, "boundedness agreement", t, criterion_6(e)),
        Err(e) => report(6, "boundedness agreement", t, Err(e.clone())),
    }
    let t = Instant::now();
    let class_count = criterion_8(&c);
    let t8 = t.elapsed();

    let t = Instant::now();
    let c7 = match (&experiments, &class_count) {
        (Ok(e), Ok((_, r))) => criterion_7(&[&e.geometric, &e.factorial, &e.example, r]),
        (Err(e), _) | (_, Err(e)) => Err(format!("experiments did not run: {e}")),
    };
    report(7, "distance-set diameter bound", t, c7);
    report(8, "class count at most 3", Instant::now() - t8, class_count.map(|r| r.0));
    let t = Instant::now();
    report(9, "reproduce determinism", t, criterion_9());

    if failed == 0 {
        println!("acceptance: 9 of 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria fail");
        ExitCode::FAILURE
    }
}
