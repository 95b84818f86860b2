//! Acceptance criteria. Runs as a plain binary and prints one line per
//! criterion; exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use common::{catalog_bimodules, oracle_corner, oracle_f2_vector, oracle_regular, ring};
use nilclean_core::cache::ResultCache;
use nilclean_core::construct::triangular_unchecked;
use nilclean_core::dsl::default_catalog;
use nilclean_core::theorems::{run_corpus, Analysis, CorpusOptions, CorpusRun, TheoremId, Verdict};
use nilclean_core::{ut2, Bimodule, ValidatedRing, DEFAULT_BUDGET};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

struct Sweep {
    run: CorpusRun,
    elapsed: Duration,
}

fn options(jobs: usize) -> CorpusOptions<'static> {
    CorpusOptions {
        m_orders: vec![2, 3, 4],
        budget: DEFAULT_BUDGET,
        jobs: Some(jobs),
        ..Default::default()
    }
}

fn sweep() -> &'static Sweep {
    static SWEEP: OnceLock<Sweep> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let run = run_corpus(&default_catalog(), &options(1)).expect("corpus");
        Sweep {
            run,
            elapsed: start.elapsed(),
        }
    })
}

fn timed_index(expr: &str) -> (usize, Duration) {
    let start = Instant::now();
    let nin = ring(expr).nil_clean_index().nin;
    (nin, start.elapsed())
}

fn ac1() -> Outcome {
    let (nin, t) = timed_index("UT2(Z2)");
    within(t, Duration::from_secs(1))?;
    let oracle = oracle_regular(2).nin();
    ensure(nin == 2 && oracle == 2, || {
        format!("nin {nin}, oracle {oracle}")
    })?;
    Ok(format!("nin = 2 in {t:?}"))
}

fn ac2() -> Outcome {
    let (nin, t) = timed_index("Tri(Z3, reg, Z3)");
    within(t, Duration::from_secs(1))?;
    let oracle = oracle_regular(3).nin();
    ensure(nin == 3 && oracle == 3, || {
        format!("nin {nin}, oracle {oracle}")
    })?;
    Ok(format!("nin = 3 in {t:?}"))
}

fn ac3() -> Outcome {
    let (nin, t) = timed_index("Tri(Z4, reg, Z4)");
    within(t, Duration::from_secs(5))?;
    let oracle = oracle_regular(4).nin();
    ensure(nin == 4 && oracle == 4, || {
        format!("nin {nin}, oracle {oracle}")
    })?;
    Ok(format!("nin = 4 in {t:?}"))
}

fn ac4() -> Outcome {
    let (nin, t) = timed_index("Tri(Z2, nat(C2xC2), Z2)");
    within(t, Duration::from_secs(1))?;
    let oracle = oracle_f2_vector(2).nin();
    ensure(nin == 4 && oracle == 4, || {
        format!("nin {nin}, oracle {oracle}")
    })?;
    Ok(format!("nin = 4 in {t:?}"))
}

fn ac5() -> Outcome {
    let start = Instant::now();
    let z2 = ring("Z2");
    let u = ut2(&z2);
    let b = Arc::new(u.flattened().clone());
    let psi: Vec<usize> = (0..b.order()).map(|x| u.decode(x).2).collect();
    let bm = Bimodule::hom_induced(z2.clone(), b.clone(), &z2, &[0, 1], &psi)
        .map_err(|e| e.to_string())?;
    let spec = nilclean_core::triangular(&z2, &bm, &b).map_err(|e| e.to_string())?;
    let a = Analysis::new(&spec).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    within(t, Duration::from_secs(2))?;
    let (nin, na, nb) = (a.nin(), a.nin_a(), a.nin_b());
    ensure(spec.flattened().order() == 32, || {
        "expected an order-32 ring".into()
    })?;
    ensure((na, nb) == (1, 2), || {
        format!("Nin(A) = {na}, Nin(B) = {nb}")
    })?;
    ensure(nin == 4 && nin == 2 * na * nb, || format!("nin {nin}"))?;
    let oracle = oracle_corner().nin();
    ensure(oracle == 4, || format!("oracle {oracle}"))?;
    let rhs = a.main_rhs().map_err(|e| e.to_string())?;
    ensure(rhs.case1 && rhs.rhs, || "case (1) not detected".into())?;
    Ok(format!("nin = 4 = 2*1*2 in {t:?}"))
}

fn ac6() -> Outcome {
    let s = sweep();
    within(s.elapsed, Duration::from_secs(600))?;
    let summary = &s.run.summary;
    ensure(summary.skipped.is_empty(), || {
        format!("{} triples skipped", summary.skipped.len())
    })?;
    ensure(summary.instances == 445, || {
        format!("{} instances, expected 445", summary.instances)
    })?;
    let main = &summary.by_theorem[&TheoremId::MainIff];
    ensure(main.pass == summary.instances && main.fail == 0, || {
        format!("{main:?}")
    })?;
    Ok(format!(
        "{} instances, MAIN_IFF pass on all, {:?} single-threaded",
        summary.instances, s.elapsed
    ))
}

fn ac7() -> Outcome {
    let s = sweep();
    let mut elements = 0;
    for r in s
        .run
        .reports()
        .filter(|r| r.theorem_id == TheoremId::EtaStruct)
    {
        let mismatches = r.observed["mismatches"].as_u64().unwrap_or(u64::MAX);
        ensure(r.verdict == Verdict::Pass && mismatches == 0, || {
            format!("{} mismatches on {}", mismatches, r.instance.expr)
        })?;
        ensure(
            r.observed["elements"].as_u64() == Some(r.instance.order as u64),
            || "element count".into(),
        )?;
        elements += r.instance.order;
    }
    Ok(format!("{elements} elements, 0 mismatches"))
}

fn corpus_rings() -> Vec<ValidatedRing> {
    let mut rings: Vec<ValidatedRing> = default_catalog()
        .iter()
        .map(|c| (*c.ring).clone())
        .collect();
    for bm in catalog_bimodules() {
        rings.push(
            triangular_unchecked(bm.left_ring(), &bm, bm.right_ring())
                .unwrap()
                .flattened()
                .clone(),
        );
    }
    rings
}

fn ac8() -> Outcome {
    let rings = corpus_rings();
    let mut elements = 0;
    for r in &rings {
        let eta = r.eta_all();
        for a in 0..r.order() {
            let b = r.sub(r.one(), a);
            ensure(eta[a].len() == eta[b].len(), || {
                format!("|eta({a})| != |eta(1-{a})|")
            })?;
        }
        let units = r.units();
        for j in r.nilpotents() {
            ensure(units.binary_search(&r.sub(r.one(), j)).is_ok(), || {
                format!("1 - {j} is not a unit")
            })?;
        }
        elements += r.order();
    }
    Ok(format!("{} rings, {elements} elements", rings.len()))
}

fn ac9() -> Outcome {
    let s = sweep();
    let c3: Vec<_> = s
        .run
        .records
        .iter()
        .filter(|r| r.facts.m_type == "C3")
        .collect();
    ensure(!c3.is_empty(), || "no |M| = 3 instances".into())?;
    let mut three = 0;
    for rec in &c3 {
        ensure(rec.facts.nin != 4, || format!("{} has nin 4", rec.label))?;
        if rec.facts.nin_a == 1 && rec.facts.nin_b == 1 {
            ensure(rec.facts.nin == 3, || {
                format!("{} has nin {}", rec.label, rec.facts.nin)
            })?;
            three += 1;
        }
    }
    ensure(three > 0, || "no instance with Nin(A) = Nin(B) = 1".into())?;
    Ok(format!(
        "{} instances, none with nin 4, {three} with Nin(A) = Nin(B) = 1 all at 3",
        c3.len()
    ))
}

fn ac10() -> Outcome {
    let s = sweep();
    let by = &s.run.summary.by_theorem;
    let n = s.run.summary.instances;
    for id in [TheoremId::L25Part1, TheoremId::L25Part3] {
        ensure(by[&id].pass == n, || {
            format!("{}: {:?}", id.as_str(), by[&id])
        })?;
    }
    for id in [TheoremId::L25Part2, TheoremId::L26] {
        ensure(by[&id].fail == 0 && by[&id].pass > 0, || {
            format!("{}: {:?}", id.as_str(), by[&id])
        })?;
    }
    for rec in &s.run.records {
        let t: nilclean_core::GroupType = rec
            .facts
            .m_type
            .parse()
            .map_err(|e: nilclean_core::GroupError| e.to_string())?;
        let l2 = rec
            .reports
            .iter()
            .find(|r| r.theorem_id == TheoremId::L25Part2)
            .unwrap();
        let l26 = rec
            .reports
            .iter()
            .find(|r| r.theorem_id == TheoremId::L26)
            .unwrap();
        ensure(
            (l2.verdict == Verdict::Pass) == t.is_cyclic_p_power().is_some(),
            || rec.label.clone(),
        )?;
        ensure(
            (l26.verdict == Verdict::Pass) == matches!(t.is_cyclic_p_power(), Some((2, _))),
            || rec.label.clone(),
        )?;
    }
    Ok(format!(
        "L25_1 {n}/{n}, L25_3 {n}/{n}, L25_2 {} applicable, L26 {} applicable, 0 violations",
        by[&TheoremId::L25Part2].pass,
        by[&TheoremId::L26].pass
    ))
}

fn ac11() -> Outcome {
    let s = sweep();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = ResultCache::open(dir.path()).map_err(|e| e.to_string())?;
    let eight = run_corpus(
        &default_catalog(),
        &CorpusOptions {
            cache: Some(&cache),
            ..options(8)
        },
    )
    .map_err(|e| e.to_string())?;
    let one = s.run.to_jsonl();
    ensure(one == eight.to_jsonl(), || {
        "jobs 1 and jobs 8 JSONL differ".into()
    })?;
    let resumed = run_corpus(
        &default_catalog(),
        &CorpusOptions {
            cache: Some(&cache),
            resume: true,
            ..options(8)
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(resumed.cache_hits == s.run.summary.instances, || {
        format!("{} cache hits", resumed.cache_hits)
    })?;
    ensure(resumed.summary == s.run.summary, || {
        "resumed summary differs".into()
    })?;
    ensure(resumed.to_jsonl() == one, || "resumed JSONL differs".into())?;
    Ok(format!(
        "{} JSONL bytes identical, resume hit {} records",
        one.len(),
        resumed.cache_hits
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("AC-1", ac1),
        ("AC-2", ac2),
        ("AC-3", ac3),
        ("AC-4", ac4),
        ("AC-5", ac5),
        ("AC-6", ac6),
        ("AC-7", ac7),
        ("AC-8", ac8),
        ("AC-9", ac9),
        ("AC-10", ac10),
        ("AC-11", ac11),
    ];
    let mut failed = 0;
    for (id, check) in criteria {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("{id} PASS {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{id} FAIL {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
