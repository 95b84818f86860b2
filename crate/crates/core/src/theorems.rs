//! Executable checks of the known results on the nil clean index of formal
//! triangular matrix rings, each compared against brute force.
//!
//! Every check yields a [`TheoremReport`]. "Not applicable" is a verdict of
//! its own and is never counted as a pass.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bimodule::enumerate_bimodules;
use crate::cache::{CacheKey, ResultCache};
use crate::construct::{triangular_unchecked, ConstructionError, TriangularSpec};
use crate::group::{FinAbGroup, GroupError, GroupType};
use crate::hash::{bimodule_hash, canonical_hash, hash_parts};
use crate::ring::{EtaSet, IndexReport, ValidatedRing};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("the bimodule is trivial (|M| = 1)")]
    TrivialModule,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "L25_1")]
    L25Part1,
    #[serde(rename = "L25_2")]
    L25Part2,
    #[serde(rename = "L25_3")]
    L25Part3,
    #[serde(rename = "L26")]
    L26,
    #[serde(rename = "T41_SUFF")]
    T41Sufficiency,
    #[serde(rename = "P42_SUFF")]
    P42Sufficiency,
    #[serde(rename = "MAIN_IFF")]
    MainIff,
    #[serde(rename = "ETA_STRUCT")]
    EtaStruct,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::L25Part1,
        TheoremId::L25Part2,
        TheoremId::L25Part3,
        TheoremId::L26,
        TheoremId::T41Sufficiency,
        TheoremId::P42Sufficiency,
        TheoremId::MainIff,
        TheoremId::EtaStruct,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::L25Part1 => "L25_1",
            TheoremId::L25Part2 => "L25_2",
            TheoremId::L25Part3 => "L25_3",
            TheoremId::L26 => "L26",
            TheoremId::T41Sufficiency => "T41_SUFF",
            TheoremId::P42Sufficiency => "P42_SUFF",
            TheoremId::MainIff => "MAIN_IFF",
            TheoremId::EtaStruct => "ETA_STRUCT",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Identifies the triangular ring a report is about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub expr: String,
    pub hash: String,
    pub a_hash: String,
    pub b_hash: String,
    pub bimodule_hash: String,
    pub m_type: String,
    /// `[|A|, |M|, |B|]`
    pub shape: [usize; 3],
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem_id: TheoremId,
    pub instance: InstanceInfo,
    pub claimed: String,
    pub observed: Value,
    pub verdict: Verdict,
    pub witness: Option<Value>,
    pub reason: Option<String>,
}

/// Trace of the universally quantified module condition in cases (3b)/(3c).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantifierTrace {
    /// Elements of the Nin-2 ring with `|η| = 2`.
    pub elements: usize,
    /// `(e, f)` pairs evaluated.
    pub pairs_checked: usize,
    /// First `(element, e, f)` for which the condition fails.
    pub counterexample: Option<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhsEvidence {
    pub m_type: String,
    pub nin_a: usize,
    pub nin_b: usize,
    pub case3b: Option<QuantifierTrace>,
    pub case3c: Option<QuantifierTrace>,
}

/// The right-hand side of the `Nin(R) = 4` characterization, case by case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainRhs {
    pub case1: bool,
    pub case2: bool,
    pub case3a: bool,
    pub case3b: bool,
    pub case3c: bool,
    pub rhs: bool,
    pub evidence: RhsEvidence,
}

/// Brute-force facts about one triangular ring, computed once and shared by
/// all checks.
pub struct Analysis<'a> {
    spec: &'a TriangularSpec,
    m_type: GroupType,
    index_a: IndexReport,
    index_b: IndexReport,
    index: IndexReport,
    eta_a: Vec<EtaSet>,
    eta_b: Vec<EtaSet>,
    info: InstanceInfo,
}

impl<'a> Analysis<'a> {
    pub fn new(spec: &'a TriangularSpec) -> Result<Self, TheoremError> {
        let bm = spec.bimodule();
        let m_type = bm.group().classify()?;
        let a = spec.a_ring();
        let b = spec.b_ring();
        let flat = spec.flattened();
        let (na, m, nb) = spec.shape();
        let info = InstanceInfo {
            expr: String::new(),
            hash: canonical_hash(flat),
            a_hash: canonical_hash(a),
            b_hash: canonical_hash(b),
            bimodule_hash: bimodule_hash(bm),
            m_type: m_type.to_string(),
            shape: [na, m, nb],
            order: flat.order(),
        };
        Ok(Analysis {
            spec,
            m_type,
            index_a: a.nil_clean_index(),
            index_b: b.nil_clean_index(),
            index: flat.nil_clean_index(),
            eta_a: a.eta_all(),
            eta_b: b.eta_all(),
            info,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.info.expr = label.into();
        self
    }

    pub fn info(&self) -> &InstanceInfo {
        &self.info
    }

    pub fn nin(&self) -> usize {
        self.index.nin
    }

    pub fn nin_a(&self) -> usize {
        self.index_a.nin
    }

    pub fn nin_b(&self) -> usize {
        self.index_b.nin
    }

    pub fn m_type(&self) -> &GroupType {
        &self.m_type
    }

    fn m(&self) -> usize {
        self.spec.module_order()
    }

    fn report(
        &self,
        id: TheoremId,
        claimed: String,
        observed: Value,
        verdict: Verdict,
    ) -> TheoremReport {
        let witness = (verdict == Verdict::Fail).then(|| self.max_witness());
        TheoremReport {
            theorem_id: id,
            instance: self.info.clone(),
            claimed,
            observed,
            verdict,
            witness,
            reason: None,
        }
    }

    fn not_applicable(&self, id: TheoremId, claimed: String, reason: String) -> TheoremReport {
        TheoremReport {
            theorem_id: id,
            instance: self.info.clone(),
            claimed,
            observed: Value::Null,
            verdict: Verdict::NotApplicable,
            witness: None,
            reason: Some(reason),
        }
    }

    fn max_witness(&self) -> Value {
        let w = self.index.witness;
        let (a, x, b) = self.spec.decode(w);
        json!({ "element": w, "triple": [a, x, b], "eta_size": self.index.nin })
    }

    /// Lower bounds on `Nin(R)` in terms of `|M|`, `Nin(A)` and `Nin(B)`.
    pub fn lemma_bounds(&self) -> [TheoremReport; 3] {
        let (nin, n, m, size) = (self.nin(), self.nin_a(), self.nin_b(), self.m());
        let part1 = self.report(
            TheoremId::L25Part1,
            format!("Nin(R) >= |M| = {size}"),
            json!({ "nin": nin }),
            Verdict::from_bool(nin >= size),
        );
        let claim2 =
            "Nin(R) >= n + ceil(n/2)(|M|-1) when (M,+) is cyclic of prime power order".to_string();
        let part2 = match self.m_type.is_cyclic_p_power() {
            Some(_) => {
                let bound = n + n.div_ceil(2) * (size - 1);
                self.report(
                    TheoremId::L25Part2,
                    format!("Nin(R) >= {bound}"),
                    json!({ "nin": nin, "bound": bound }),
                    Verdict::from_bool(nin >= bound),
                )
            }
            None => self.not_applicable(
                TheoremId::L25Part2,
                claim2,
                format!("(M,+) = {} is not a cyclic p-group", self.m_type),
            ),
        };
        let first = n * m + size - 1;
        let second = 2 * n * m;
        let part3 = self.report(
            TheoremId::L25Part3,
            format!("Nin(R) >= {first} or Nin(R) >= {second}"),
            json!({ "nin": nin, "bounds": [first, second] }),
            Verdict::from_bool(nin >= first || nin >= second),
        );
        [part1, part2, part3]
    }

    /// `Nin(R) = 2^r·Nin(A)·Nin(B)` when `(M,+) ≅ C_{2^r}`.
    pub fn lemma_two_power(&self) -> TheoremReport {
        match self.m_type.is_cyclic_p_power() {
            Some((2, _)) => {
                let predicted = self.m() * self.nin_a() * self.nin_b();
                self.report(
                    TheoremId::L26,
                    format!("Nin(R) = {predicted}"),
                    json!({ "nin": self.nin(), "predicted": predicted }),
                    Verdict::from_bool(self.nin() == predicted),
                )
            }
            _ => self.not_applicable(
                TheoremId::L26,
                "Nin(R) = 2^r Nin(A) Nin(B) when (M,+) = C_{2^r}".into(),
                format!("(M,+) = {} is not a cyclic 2-group", self.m_type),
            ),
        }
    }

    fn sufficiency(&self, id: TheoremId, size: usize) -> TheoremReport {
        let claimed = format!("Nin(A) = Nin(B) = 1 and |M| = {size} imply Nin(R) = {size}");
        if self.nin_a() == 1 && self.nin_b() == 1 && self.m() == size {
            self.report(
                id,
                claimed,
                json!({ "nin": self.nin() }),
                Verdict::from_bool(self.nin() == size),
            )
        } else {
            let reason = format!(
                "hypotheses fail: Nin(A) = {}, Nin(B) = {}, |M| = {}",
                self.nin_a(),
                self.nin_b(),
                self.m()
            );
            self.not_applicable(id, claimed, reason)
        }
    }

    pub fn index2_sufficiency(&self) -> TheoremReport {
        self.sufficiency(TheoremId::T41Sufficiency, 2)
    }

    pub fn index3_sufficiency(&self) -> TheoremReport {
        self.sufficiency(TheoremId::P42Sufficiency, 3)
    }

    /// Condition (3b): for every `b` with `|η(b)| = 2`, every `f ∈ η(b)` and
    /// every idempotent `e ∈ A`, some `w` has `ew ≠ wf`.
    fn trace_3b(&self) -> QuantifierTrace {
        let bm = self.spec.bimodule();
        let idem_a = self.spec.a_ring().idempotents();
        let mut trace = QuantifierTrace {
            elements: 0,
            pairs_checked: 0,
            counterexample: None,
        };
        for eta in self.eta_b.iter().filter(|s| s.len() == 2) {
            trace.elements += 1;
            for &f in &eta.members {
                for &e in &idem_a {
                    trace.pairs_checked += 1;
                    let holds = bm.module_condition(e, f).expect("idempotents");
                    if !holds && trace.counterexample.is_none() {
                        trace.counterexample = Some([eta.element, e, f]);
                    }
                }
            }
        }
        trace
    }

    /// Condition (3c), the mirror of (3b): for every `a` with `|η(a)| = 2`,
    /// every `e ∈ η(a)` and every idempotent `f ∈ B`.
    fn trace_3c(&self) -> QuantifierTrace {
        let bm = self.spec.bimodule();
        let idem_b = self.spec.b_ring().idempotents();
        let mut trace = QuantifierTrace {
            elements: 0,
            pairs_checked: 0,
            counterexample: None,
        };
        for eta in self.eta_a.iter().filter(|s| s.len() == 2) {
            trace.elements += 1;
            for &e in &eta.members {
                for &f in &idem_b {
                    trace.pairs_checked += 1;
                    let holds = bm.module_condition(e, f).expect("idempotents");
                    if !holds && trace.counterexample.is_none() {
                        trace.counterexample = Some([eta.element, e, f]);
                    }
                }
            }
        }
        trace
    }

    pub fn main_rhs(&self) -> Result<MainRhs, TheoremError> {
        if self.m() < 2 {
            return Err(TheoremError::TrivialModule);
        }
        let (n, m) = (self.nin_a(), self.nin_b());
        let t = self.m_type.invariant_factors();
        let is_c2 = t == [2];
        let is_c4 = t == [4];
        let is_klein = t == [2, 2];
        let case1 = is_c2 && n * m == 2;
        let case2 = is_c4 && n == 1 && m == 1;
        let case3a = is_klein && n == 1 && m == 1;
        let (mut case3b, mut case3c) = (false, false);
        let (mut trace3b, mut trace3c) = (None, None);
        if is_klein && n == 1 && m == 2 {
            let t = self.trace_3b();
            case3b = t.counterexample.is_none();
            trace3b = Some(t);
        }
        if is_klein && m == 1 && n == 2 {
            let t = self.trace_3c();
            case3c = t.counterexample.is_none();
            trace3c = Some(t);
        }
        Ok(MainRhs {
            case1,
            case2,
            case3a,
            case3b,
            case3c,
            rhs: case1 || case2 || case3a || case3b || case3c,
            evidence: RhsEvidence {
                m_type: self.m_type.to_string(),
                nin_a: n,
                nin_b: m,
                case3b: trace3b,
                case3c: trace3c,
            },
        })
    }

    /// `Nin(R) = 4` iff the right-hand side holds.
    pub fn verify_main(&self) -> Result<TheoremReport, TheoremError> {
        let rhs = self.main_rhs()?;
        let lhs = self.nin() == 4;
        let observed = json!({
            "nin": self.nin(),
            "lhs": lhs,
            "rhs": rhs.rhs,
            "cases": {
                "1": rhs.case1, "2": rhs.case2, "3a": rhs.case3a,
                "3b": rhs.case3b, "3c": rhs.case3c,
            },
            "evidence": rhs.evidence,
        });
        let mut report = self.report(
            TheoremId::MainIff,
            "Nin(R) = 4 iff one of (1), (2), (3a), (3b), (3c)".into(),
            observed,
            Verdict::from_bool(lhs == rhs.rhs),
        );
        if let Some(w) = report.witness.as_mut() {
            w["offending_side"] = json!(if lhs { "lhs" } else { "rhs" });
        }
        Ok(report)
    }

    /// η of a flattened element via the triangular formula: all
    /// `(e, w, f)` with `e ∈ η(a)`, `f ∈ η(b)` and `w = ew + wf`.
    pub fn eta_by_formula(&self, flat: usize) -> Vec<usize> {
        let spec = self.spec;
        let bm = spec.bimodule();
        let g = bm.group();
        let (a, _, b) = spec.decode(flat);
        let mut out = Vec::new();
        for &e in &self.eta_a[a].members {
            for &f in &self.eta_b[b].members {
                for w in 0..g.order() {
                    if g.add(bm.lact(e, w), bm.ract(w, f)) == w {
                        out.push(spec.encode(e, w, f));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Compares brute-force η against the formula for one element.
    pub fn eta_crosscheck(&self, flat: usize) -> TheoremReport {
        let brute = self.spec.flattened().eta(flat).members;
        let formula = self.eta_by_formula(flat);
        let ok = brute == formula;
        let mut r = self.report(
            TheoremId::EtaStruct,
            format!("eta({flat}) = {{(e,w,f) : e in eta(a), f in eta(b), w = ew + wf}}"),
            json!({ "element": flat, "brute_force": brute, "formula": formula }),
            Verdict::from_bool(ok),
        );
        if !ok {
            r.witness = Some(json!({ "element": flat, "triple": self.spec.decode(flat) }));
        }
        r
    }

    /// Runs [`eta_crosscheck`](Self::eta_crosscheck) over every element and
    /// aggregates into one report.
    pub fn eta_crosscheck_all(&self) -> TheoremReport {
        let flat = self.spec.flattened();
        let brute = flat.eta_all();
        let mismatches: Vec<usize> = (0..flat.order())
            .filter(|&x| brute[x].members != self.eta_by_formula(x))
            .collect();
        let ok = mismatches.is_empty();
        let mut r = self.report(
            TheoremId::EtaStruct,
            "brute-force eta equals the triangular formula for every element".into(),
            json!({ "elements": flat.order(), "mismatches": mismatches.len() }),
            Verdict::from_bool(ok),
        );
        if !ok {
            r.witness = Some(json!({ "elements": mismatches }));
        }
        r
    }

    /// Every check, in [`TheoremId::ALL`] order.
    pub fn all_checks(&self) -> Result<Vec<TheoremReport>, TheoremError> {
        let mut out = Vec::with_capacity(8);
        out.extend(self.lemma_bounds());
        out.push(self.lemma_two_power());
        out.push(self.index2_sufficiency());
        out.push(self.index3_sufficiency());
        out.push(self.verify_main()?);
        out.push(self.eta_crosscheck_all());
        Ok(out)
    }

    pub fn facts(&self) -> InstanceFacts {
        InstanceFacts {
            nin: self.nin(),
            nin_a: self.nin_a(),
            nin_b: self.nin_b(),
            m_type: self.m_type.to_string(),
        }
    }
}

pub fn check_lemma_bounds(spec: &TriangularSpec) -> Result<[TheoremReport; 3], TheoremError> {
    Ok(Analysis::new(spec)?.lemma_bounds())
}

pub fn check_lemma_two_power(spec: &TriangularSpec) -> Result<TheoremReport, TheoremError> {
    Ok(Analysis::new(spec)?.lemma_two_power())
}

pub fn check_index2_sufficiency(spec: &TriangularSpec) -> Result<TheoremReport, TheoremError> {
    Ok(Analysis::new(spec)?.index2_sufficiency())
}

pub fn check_index3_sufficiency(spec: &TriangularSpec) -> Result<TheoremReport, TheoremError> {
    Ok(Analysis::new(spec)?.index3_sufficiency())
}

pub fn main_theorem_rhs(spec: &TriangularSpec) -> Result<MainRhs, TheoremError> {
    Analysis::new(spec)?.main_rhs()
}

pub fn verify_main_theorem(spec: &TriangularSpec) -> Result<TheoremReport, TheoremError> {
    Analysis::new(spec)?.verify_main()
}

pub fn triangular_eta_crosscheck(
    spec: &TriangularSpec,
    flat: usize,
) -> Result<TheoremReport, TheoremError> {
    Ok(Analysis::new(spec)?.eta_crosscheck(flat))
}

/// A named ring in a corpus catalog.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub label: String,
    pub ring: Arc<ValidatedRing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFacts {
    pub nin: usize,
    pub nin_a: usize,
    pub nin_b: usize,
    pub m_type: String,
}

/// Results for one triangular ring; this is the cached blob.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub label: String,
    pub facts: InstanceFacts,
    pub reports: Vec<TheoremReport>,
}

/// A `(A, B, M)` triple whose bimodule search was abandoned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedTriple {
    pub a: String,
    pub b: String,
    pub m_type: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
}

impl VerdictCounts {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::NotApplicable => self.not_applicable += 1,
        }
    }
}

/// Deterministic corpus summary (no timing).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub checks: usize,
    pub totals: VerdictCounts,
    pub by_theorem: BTreeMap<TheoremId, VerdictCounts>,
    pub skipped: Vec<SkippedTriple>,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusOptions<'c> {
    pub m_orders: Vec<usize>,
    pub budget: u64,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub jobs: Option<usize>,
    pub cache: Option<&'c ResultCache>,
    /// Reuse cached records instead of recomputing.
    pub resume: bool,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusRun {
    pub records: Vec<InstanceRecord>,
    pub summary: Summary,
    pub cache_hits: usize,
}

impl CorpusRun {
    pub fn reports(&self) -> impl Iterator<Item = &TheoremReport> {
        self.records.iter().flat_map(|r| r.reports.iter())
    }

    /// One JSON-encoded [`TheoremReport`] per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in self.reports() {
            out.push_str(&serde_json::to_string(r).expect("serializable"));
            out.push('\n');
        }
        out
    }
}

struct Pending {
    label: String,
    spec: TriangularSpec,
    key: CacheKey,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Theorem(#[from] TheoremError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Exhaustive sweep: every ordered pair `(A, B)` of the catalog, every abelian
/// group type of each listed order, every bimodule structure.
pub fn run_corpus(
    catalog: &[CatalogEntry],
    opts: &CorpusOptions<'_>,
) -> Result<CorpusRun, CorpusError> {
    match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CorpusError::Pool(e.to_string()))?
            .install(|| run_corpus_inner(catalog, opts)),
        None => run_corpus_inner(catalog, opts),
    }
}

fn run_corpus_inner(
    catalog: &[CatalogEntry],
    opts: &CorpusOptions<'_>,
) -> Result<CorpusRun, CorpusError> {
    let mut triples = Vec::new();
    for a in catalog {
        for b in catalog {
            for &order in &opts.m_orders {
                for t in GroupType::all_of_order(order) {
                    triples.push((a, b, t));
                }
            }
        }
    }
    let enumerated: Vec<_> = triples
        .par_iter()
        .map(|(a, b, t)| {
            let g = FinAbGroup::from_type(t);
            (
                enumerate_bimodules(&a.ring, &b.ring, &g, opts.budget),
                a,
                b,
                t,
            )
        })
        .collect();

    let mut pending = Vec::new();
    let mut skipped = Vec::new();
    for (result, a, b, t) in enumerated {
        match result {
            Ok(bms) => {
                let unique = bms.len() == 1;
                for (k, bm) in bms.iter().enumerate() {
                    let mspec = if unique {
                        format!("nat({t})")
                    } else {
                        format!("nat({t})#{k}")
                    };
                    let label = format!("Tri({}, {mspec}, {})", a.label, b.label);
                    let spec = triangular_unchecked(&a.ring, bm, &b.ring)?;
                    let content = hash_parts(&[
                        &label,
                        &canonical_hash(spec.flattened()),
                        &bimodule_hash(bm),
                    ]);
                    let key = CacheKey::new(content, "theorems", TOOL_VERSION);
                    pending.push(Pending { label, spec, key });
                }
            }
            Err(e) => skipped.push(SkippedTriple {
                a: a.label.clone(),
                b: b.label.clone(),
                m_type: t.to_string(),
                reason: e.to_string(),
            }),
        }
    }

    let computed: Vec<Result<(InstanceRecord, bool), TheoremError>> = pending
        .par_iter()
        .map(|p| {
            if opts.resume {
                if let Some(rec) = opts.cache.and_then(|c| c.get::<InstanceRecord>(&p.key)) {
                    return Ok((rec, true));
                }
            }
            p.spec.validate().map_err(ConstructionError::from)?;
            let analysis = Analysis::new(&p.spec)?.with_label(p.label.clone());
            let reports = analysis.all_checks()?;
            Ok((
                InstanceRecord {
                    label: p.label.clone(),
                    facts: analysis.facts(),
                    reports,
                },
                false,
            ))
        })
        .collect();

    let mut run = CorpusRun::default();
    for (p, res) in pending.iter().zip(computed) {
        let (rec, hit) = res?;
        if hit {
            run.cache_hits += 1;
        } else if let Some(cache) = opts.cache {
            // Single writer: records are stored in instance order.
            let _ = cache.put(&p.key, &rec);
        }
        run.records.push(rec);
    }
    let mut summary = Summary {
        instances: run.records.len(),
        skipped,
        ..Summary::default()
    };
    for r in run.reports() {
        summary.checks += 1;
        summary.totals.add(r.verdict);
        summary
            .by_theorem
            .entry(r.theorem_id)
            .or_default()
            .add(r.verdict);
    }
    run.summary = summary;
    Ok(run)
}
