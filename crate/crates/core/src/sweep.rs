//! Exhaustive property sweeps over every marked rooted tree up to a size
//! bound.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::descent::{count_brute, count_cut, Algo, Engine, MemoCache};
use crate::error::{Error, Result};
use crate::expansions::{a_coeff_oracle, check_shift_identity, classify, QualifyingClass};
use crate::poly::{from_basis, seq_predicates, to_basis, Basis, ExactPolynomial};
use crate::poset::{abar_via_heights, build_poset, DEFAULT_EXTENSION_CAP};
use crate::roots::{verify_roots_of, DEFAULT_TOL};
use crate::tree::MarkedTree;

pub const MAX_SWEEP_SIZE: usize = 13;
/// Largest degree for which the a-coefficient oracle runs in a sweep.
pub const ORACLE_SWEEP_DEGREE: usize = 4;
/// Counterexamples kept per property; the failure count is always exact.
pub const MAX_COUNTEREXAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Agreement,
    Degree,
    Roots,
    Expansions,
    Poset,
    Identities,
    Witness,
    Natlab,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Agreement,
        Check::Degree,
        Check::Roots,
        Check::Expansions,
        Check::Poset,
        Check::Identities,
        Check::Witness,
        Check::Natlab,
    ];

    fn name(self) -> &'static str {
        match self {
            Check::Agreement => "agreement",
            Check::Degree => "degree",
            Check::Roots => "roots",
            Check::Expansions => "expansions",
            Check::Poset => "poset",
            Check::Identities => "identities",
            Check::Witness => "witness",
            Check::Natlab => "natlab",
        }
    }

    /// Parses a comma-separated list; `all` selects every check.
    pub fn parse_list(text: &str) -> Result<BTreeSet<Check>> {
        let mut out = BTreeSet::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Check::ALL);
            } else {
                out.insert(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::Precondition("no checks selected".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown check {s:?}")))
    }
}

/// Every property the sweep evaluates, grouped by the check that enables it.
pub const PROPERTIES: &[(Check, &str)] = &[
    (Check::Agreement, "five_way_agreement"),
    (Check::Agreement, "cache_coherence"),
    (Check::Agreement, "interpolation_exact"),
    (Check::Degree, "degree_law"),
    (Check::Degree, "positivity"),
    (Check::Roots, "value_at_zero"),
    (Check::Roots, "s_root_iff_root_descent"),
    (Check::Roots, "s_minus_1_root_iff_descent_child"),
    (Check::Roots, "descent_children_roots"),
    (Check::Roots, "one_root_iff_leaves_descent"),
    (Check::Roots, "integer_roots_at_most_s"),
    (Check::Roots, "root_only_closed_form"),
    (Check::Roots, "minus_one_root_iff_s_even"),
    (Check::Roots, "all_descent_roots"),
    (Check::Roots, "complex_modulus_bound"),
    (Check::Roots, "complex_residual"),
    (Check::Expansions, "a_nonnegative_log_concave"),
    (Check::Expansions, "abar_nonnegative_increasing_log_concave"),
    (Check::Expansions, "shift_identity"),
    (Check::Expansions, "a_oracle"),
    (Check::Expansions, "expansion_integrality"),
    (Check::Expansions, "basis_round_trip"),
    (Check::Poset, "abar_via_heights"),
    (Check::Poset, "root_heights_decreasing"),
    (Check::Poset, "heights_log_concave"),
    (Check::Poset, "height_sum_invariant"),
    (Check::Identities, "lift_invariance"),
    (Check::Identities, "canonical_key_invariance"),
    (Check::Identities, "split_graft_round_trip"),
    (Check::Identities, "hook_consistency"),
    (Check::Witness, "witness_realizes_s"),
    (Check::Natlab, "natlab_brute"),
];

/// Deliberate corruption used to test the harness itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Adds one to every hook-length count before comparing.
    Natlab,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub max_size: usize,
    pub checks: BTreeSet<Check>,
    pub brute_cap: usize,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
}

impl SweepConfig {
    pub fn new(max_size: usize) -> Self {
        SweepConfig {
            max_size,
            checks: Check::ALL.into_iter().collect(),
            brute_cap: crate::descent::DEFAULT_BRUTE_CAP,
            jobs: 1,
            out: None,
            fault: None,
        }
    }

    pub fn with_checks(mut self, checks: impl IntoIterator<Item = Check>) -> Self {
        self.checks = checks.into_iter().collect();
        self
    }
}

/// Rooted tree shapes on `s` vertices, one per isomorphism class, from
/// canonical level sequences in decreasing lexicographic order.
pub fn enum_rooted_trees(s: usize) -> Result<Vec<MarkedTree>> {
    check_size(s)?;
    let mut out = Vec::new();
    let mut levels: Vec<usize> = (0..s).collect();
    loop {
        out.push(tree_from_levels(&levels));
        let Some(p) = levels.iter().rposition(|&l| l > 1) else {
            break;
        };
        let q = levels[..p]
            .iter()
            .rposition(|&l| l == levels[p] - 1)
            .expect("a parent level precedes every non-root entry");
        let period = p - q;
        for i in p..s {
            levels[i] = levels[i - period];
        }
    }
    Ok(out)
}

fn check_size(s: usize) -> Result<()> {
    if (1..=MAX_SWEEP_SIZE).contains(&s) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "tree size {s} outside 1..={MAX_SWEEP_SIZE}"
        )))
    }
}

fn tree_from_levels(levels: &[usize]) -> MarkedTree {
    let mut last_at = Vec::new();
    let mut parent = Vec::with_capacity(levels.len());
    for (v, &l) in levels.iter().enumerate() {
        parent.push(l.checked_sub(1).map(|pl| last_at[pl]));
        last_at.truncate(l);
        last_at.push(v);
    }
    MarkedTree::from_parents(parent, []).expect("level sequences describe trees")
}

fn with_mask(shape: &MarkedTree, mask: u32) -> MarkedTree {
    let parent = shape.vertices().map(|v| shape.parent(v)).collect();
    let descents = shape.vertices().filter(|&v| mask >> v & 1 == 1);
    MarkedTree::from_parents(parent, descents).expect("same shape")
}

/// Every shape on `s` vertices with each of its `2^s` descent sets.
pub fn enum_marked_trees(s: usize) -> Result<Vec<MarkedTree>> {
    Ok(enum_rooted_trees(s)?
        .iter()
        .flat_map(|shape| (0..1u32 << s).map(move |m| with_mask(shape, m)))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    Downgraded(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub check: Check,
    pub property: &'static str,
    pub status: Status,
}

struct Recorder<'a> {
    check: Check,
    out: &'a mut Vec<Outcome>,
}

impl Recorder<'_> {
    fn push(&mut self, property: &'static str, status: Status) {
        self.out.push(Outcome {
            check: self.check,
            property,
            status,
        });
    }

    fn expect(&mut self, property: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let status = if ok { Status::Pass } else { Status::Fail(detail()) };
        self.push(property, status);
    }

    fn result(&mut self, property: &'static str, r: Result<std::result::Result<(), String>>) {
        let status = match r {
            Ok(Ok(())) => Status::Pass,
            Ok(Err(detail)) => Status::Fail(detail),
            Err(e) => Status::Fail(format!("error: {e}")),
        };
        self.push(property, status);
    }

    fn downgrade(&mut self, property: &'static str, reason: String) {
        self.push(property, Status::Downgraded(reason));
    }
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

/// Settings shared by every per-tree check.
pub struct CheckContext<'a> {
    pub engine: &'a Engine,
    pub fault: Option<Fault>,
}

/// Runs the selected checks on one marked tree.
pub fn check_tree(t: &MarkedTree, checks: &BTreeSet<Check>, ctx: &CheckContext<'_>) -> Vec<Outcome> {
    let mut out = Vec::new();
    let poly = ctx.engine.polynomial(t, Algo::Auto);
    for &check in checks {
        let mut rec = Recorder {
            check,
            out: &mut out,
        };
        let p = match &poly {
            Ok(p) => p,
            Err(e) => {
                rec.push("polynomial", Status::Fail(format!("error: {e}")));
                continue;
            }
        };
        match check {
            Check::Agreement => agreement(t, p, ctx, &mut rec),
            Check::Degree => degree(t, p, &mut rec),
            Check::Roots => roots(t, p, &mut rec),
            Check::Expansions => expansions(t, p, ctx, &mut rec),
            Check::Poset => poset(t, &mut rec),
            Check::Identities => identities(t, p, ctx, &mut rec),
            Check::Witness => witness(t, &mut rec),
            Check::Natlab => natlab(t, ctx, &mut rec),
        }
    }
    out
}

fn agreement(t: &MarkedTree, p: &ExactPolynomial, ctx: &CheckContext<'_>, rec: &mut Recorder<'_>) {
    let s = t.size();
    let engine = ctx.engine;
    for n in s..=s + 2 {
        let mut algos = vec![Algo::Cut, Algo::AscentCut, Algo::Explicit, Algo::Shift];
        if n <= engine.brute_cap {
            algos.insert(0, Algo::Brute);
        } else {
            rec.downgrade(
                "five_way_agreement",
                format!("brute force skipped above n = {}", engine.brute_cap),
            );
        }
        let r = algos
            .iter()
            .map(|&a| engine.count(t, n, a).map(|v| (a, v)))
            .collect::<Result<Vec<_>>>()
            .map(|vals| {
                ensure(vals.iter().all(|(_, v)| *v == vals[0].1), || {
                    let listed: Vec<String> = vals.iter().map(|(a, v)| format!("{a}={v}")).collect();
                    format!("n={n}: {}", listed.join(" "))
                })
            });
        rec.result("five_way_agreement", r);
    }

    let n = s + 1;
    let r = (|| {
        let cached = engine.count(t, n, Algo::Cut)?;
        let fresh = count_cut(t, n, &MemoCache::disabled())?;
        Ok(ensure(cached == fresh, || format!("n={n}: cached {cached}, fresh {fresh}")))
    })();
    rec.result("cache_coherence", r);

    let r = (|| {
        let h = t.degree();
        for n in s..=s + h + 1 {
            let direct = engine.count(t, n, Algo::AscentCut)?;
            let value = p.eval_int(n as i64);
            if value != num_rational::BigRational::from_integer(direct.clone()) {
                return Ok(Err(format!("n={n}: polynomial {value}, count {direct}")));
            }
        }
        Ok(Ok(()))
    })();
    rec.result("interpolation_exact", r);
}

fn degree(t: &MarkedTree, p: &ExactPolynomial, rec: &mut Recorder<'_>) {
    let h = t.degree();
    rec.expect("degree_law", p.degree() == Some(h), || {
        format!("deg = {:?}, hook sum = {h}", p.degree())
    });
    let s = t.size() as i64;
    let bad: Vec<i64> = (s + 1..=s + 3)
        .filter(|&n| {
            let v = p.eval_int(n);
            !(v.is_integer() && v.is_positive())
        })
        .collect();
    rec.expect("positivity", bad.is_empty(), || format!("non-positive at {bad:?}"));
}

fn roots(t: &MarkedTree, p: &ExactPolynomial, rec: &mut Recorder<'_>) {
    let report = verify_roots_of(t, p.clone());
    for v in &report.verdicts {
        let name = PROPERTIES
            .iter()
            .map(|&(_, n)| n)
            .find(|&n| n == v.fact)
            .expect("every verdict is a registered property");
        rec.expect(name, v.pass, || v.detail.clone());
    }
    if let Some(cr) = &report.complex_roots {
        rec.expect("complex_residual", cr.max_residual <= DEFAULT_TOL, || {
            format!("max relative residual {:e}", cr.max_residual)
        });
    }
}

fn expansions(t: &MarkedTree, p: &ExactPolynomial, ctx: &CheckContext<'_>, rec: &mut Recorder<'_>) {
    let h = t.degree();
    let qualifying = classify(t).qualifies();
    if qualifying {
        let r = to_basis(p, Basis::A, h).map(|e| {
            let pr = seq_predicates(&e.coeffs);
            ensure(pr.nonnegative && pr.log_concave && e.coeffs[0].is_zero(), || {
                format!("a = {}", join(&e.coeffs))
            })
        });
        rec.result("a_nonnegative_log_concave", r);

        let r = to_basis(p, Basis::ABar, h).map(|e| {
            let tail = &e.coeffs[1..];
            let pr = seq_predicates(tail);
            let ok = e.coeffs[0].is_zero() && pr.nonnegative && pr.increasing && pr.log_concave;
            ensure(ok, || format!("abar = {}", join(&e.coeffs)))
        });
        rec.result("abar_nonnegative_increasing_log_concave", r);

        let r = check_shift_identity(t, ctx.engine).map(|ok| ensure(ok, || "a(x) != x·abar(x+1)".into()));
        rec.result("shift_identity", r);

        if h > ORACLE_SWEEP_DEGREE {
            rec.downgrade("a_oracle", format!("degree above {ORACLE_SWEEP_DEGREE}"));
        } else if 2 * h > ctx.engine.brute_cap {
            rec.downgrade("a_oracle", format!("needs n = {} above the brute cap", 2 * h));
        } else {
            let r = (|| {
                let e = to_basis(p, Basis::A, h)?;
                for (k, c) in e.coeffs.iter().enumerate() {
                    let counted = a_coeff_oracle(t, k)?;
                    if &counted != c {
                        return Ok(Err(format!("a_{k}: expansion {c}, counted {counted}")));
                    }
                }
                Ok(Ok(()))
            })();
            rec.result("a_oracle", r);
        }
    }

    let bases = [Basis::A, Basis::ABar, Basis::C(1), Basis::NK];
    let r = bases
        .iter()
        .map(|&b| to_basis(p, b, h))
        .collect::<Result<Vec<_>>>();
    match r {
        Ok(expansions) => {
            rec.push("expansion_integrality", Status::Pass);
            let bad: Vec<String> = expansions
                .iter()
                .filter(|e| {
                    let back = from_basis(e);
                    back != *p || to_basis(&back, e.basis, h).ok().as_ref() != Some(*e)
                })
                .map(|e| e.basis.to_string())
                .collect();
            rec.expect("basis_round_trip", bad.is_empty(), || format!("bases {bad:?}"));
        }
        Err(e) => rec.push("expansion_integrality", Status::Fail(e.to_string())),
    }
}

fn join(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn poset(t: &MarkedTree, rec: &mut Recorder<'_>) {
    let p = build_poset(t);
    let r = (|| -> Result<_> {
        let total = p.linear_extension_count(DEFAULT_EXTENSION_CAP)?;
        let heights = t
            .vertices()
            .map(|v| p.height_polynomial(v, DEFAULT_EXTENSION_CAP))
            .collect::<Result<Vec<_>>>()?;
        Ok((total, heights))
    })();
    let (total, heights) = match r {
        Ok(x) => x,
        Err(e) => {
            rec.push("height_sum_invariant", Status::Fail(format!("error: {e}")));
            return;
        }
    };
    let uneven: Vec<usize> = heights
        .iter()
        .filter(|hp| hp.total() != total)
        .map(|hp| hp.element)
        .collect();
    rec.expect("height_sum_invariant", uneven.is_empty(), || {
        format!("elements {uneven:?} do not sum to {total}")
    });
    let as_ints = |hp: &crate::poset::HeightPolynomial| -> Vec<BigInt> {
        hp.counts.iter().cloned().map(BigInt::from).collect()
    };
    let not_lc: Vec<usize> = heights
        .iter()
        .filter(|hp| !seq_predicates(&as_ints(hp)).log_concave)
        .map(|hp| hp.element)
        .collect();
    rec.expect("heights_log_concave", not_lc.is_empty(), || {
        format!("elements {not_lc:?}")
    });

    if classify(t).class == QualifyingClass::AscentRootAllDescentChildren {
        let root = &heights[t.root()];
        let mut reversed = as_ints(root);
        reversed.reverse();
        rec.expect("root_heights_decreasing", seq_predicates(&reversed).increasing, || {
            format!("root heights {}", join(&as_ints(root)))
        });
        let r = (|| {
            let via = abar_via_heights(t, DEFAULT_EXTENSION_CAP)?;
            let direct = to_basis(&crate::descent_polynomial(t, Algo::Auto)?, Basis::ABar, t.degree())?;
            Ok(ensure(via == direct, || {
                format!("heights give {}, expansion {}", join(&via.coeffs), join(&direct.coeffs))
            }))
        })();
        rec.result("abar_via_heights", r);
    }
}

fn reverse_children(t: &MarkedTree) -> MarkedTree {
    fn render(t: &MarkedTree, v: usize, out: &mut String) {
        out.push(if t.is_descent(v) { 'd' } else { 'a' });
        let kids = t.children(v);
        if !kids.is_empty() {
            out.push('[');
            for (i, &c) in kids.iter().rev().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render(t, c, out);
            }
            out.push(']');
        }
    }
    let mut s = String::new();
    render(t, t.root(), &mut s);
    s.parse().expect("rendered tree parses")
}

fn identities(t: &MarkedTree, p: &ExactPolynomial, ctx: &CheckContext<'_>, rec: &mut Recorder<'_>) {
    let r = ctx
        .engine
        .polynomial(&t.add_ascent_root(), Algo::Auto)
        .map(|lifted| ensure(&lifted == p, || format!("lifted polynomial {lifted}")));
    rec.result("lift_invariance", r);

    let mirrored = reverse_children(t);
    let mirrored_poly = crate::descent::poly_explicit(&mirrored);
    let same_key = mirrored.canonical_key() == t.canonical_key();
    rec.expect("canonical_key_invariance", same_key && &mirrored_poly == p, || {
        format!("mirror {mirrored}: key equal {same_key}, polynomial {mirrored_poly}")
    });

    let r = (|| {
        for v in t.vertices().filter(|&v| v != t.root()) {
            let parent = t.parent(v).expect("non-root");
            let position = t.children(parent).iter().position(|&c| c == v).expect("child");
            let (sub, rest) = t.split(v)?;
            let rest = rest.expect("non-root split leaves a remainder");
            let back = rest.graft(parent, position, &sub)?;
            if back.to_string() != t.to_string() {
                return Ok(Err(format!("vertex {v}: regrafted {back}")));
            }
        }
        Ok(Ok(()))
    })();
    rec.result("split_graft_round_trip", r);

    let hooks = t.hook_lengths().0;
    let bad: Vec<usize> = t
        .vertices()
        .filter(|&v| hooks[v] != 1 + t.children(v).iter().map(|&c| hooks[c]).sum::<usize>())
        .collect();
    rec.expect("hook_consistency", bad.is_empty(), || format!("vertices {bad:?}"));
}

fn witness(t: &MarkedTree, rec: &mut Recorder<'_>) {
    let s = t.size();
    let r = (|| {
        for n in s + 1..=s + 3 {
            let w = t.witness_labeling(n)?;
            let got = t.extend(n)?.descent_set_of(&w)?;
            if got != t.descents() {
                return Ok(Err(format!("n={n}: labeling {:?} has descents {got:?}", w.labels())));
            }
        }
        Ok(Ok(()))
    })();
    rec.result("witness_realizes_s", r);
}

fn natlab(t: &MarkedTree, ctx: &CheckContext<'_>, rec: &mut Recorder<'_>) {
    let s = t.size();
    if s > ctx.engine.brute_cap {
        rec.downgrade(
            "natlab_brute",
            format!("brute force skipped above n = {}", ctx.engine.brute_cap),
        );
        return;
    }
    let plain = with_mask(t, 0);
    let mut formula = t.natlab();
    if ctx.fault == Some(Fault::Natlab) {
        formula += BigInt::one();
    }
    let r = count_brute(&plain, s, ctx.engine.brute_cap)
        .map(|counted| ensure(counted == formula, || format!("formula {formula}, counted {counted}")));
    rec.result("natlab_brute", r);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub tree: String,
    pub detail: String,
    pub reproduce: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertySummary {
    pub name: String,
    pub check: Check,
    pub pass: u64,
    pub fail: u64,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DowngradeSummary {
    pub check: Check,
    pub property: String,
    pub reason: String,
    pub count: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub shapes: u64,
    pub marked_trees: u64,
    pub pass: u64,
    pub fail: u64,
    pub downgraded: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub totals: Totals,
    pub checks: Vec<PropertySummary>,
    pub downgrades: Vec<DowngradeSummary>,
    pub wall_time_ms: u64,
}

impl SweepReport {
    pub fn failures(&self) -> u64 {
        self.totals.fail
    }

    pub fn property(&self, name: &str) -> Option<&PropertySummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Command line that re-runs one check on one tree.
pub fn reproducer(t: &MarkedTree, check: Check) -> String {
    format!("descent-tree check --tree '{t}' --checks {check}")
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.max_size == 0 || cfg.max_size > MAX_SWEEP_SIZE {
        return Err(Error::Precondition(format!(
            "max_size {} outside 1..={MAX_SWEEP_SIZE}",
            cfg.max_size
        )));
    }
    if cfg.checks.is_empty() {
        return Err(Error::Precondition("no checks selected".into()));
    }
    let start = Instant::now();
    let mut shapes = 0u64;
    let mut trees = Vec::new();
    for s in 1..=cfg.max_size {
        let sized = enum_rooted_trees(s)?;
        shapes += sized.len() as u64;
        for shape in &sized {
            trees.extend((0..1u32 << s).map(|m| with_mask(shape, m)));
        }
    }

    let engine = Engine::with_brute_cap(cfg.brute_cap);
    let ctx = CheckContext {
        engine: &engine,
        fault: cfg.fault,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let outcomes: Vec<Vec<Outcome>> =
        pool.install(|| trees.par_iter().map(|t| check_tree(t, &cfg.checks, &ctx)).collect());

    let mut summaries: BTreeMap<(Check, &'static str), PropertySummary> = BTreeMap::new();
    for &(check, name) in PROPERTIES.iter().filter(|(c, _)| cfg.checks.contains(c)) {
        summaries.insert(
            (check, name),
            PropertySummary {
                name: name.to_string(),
                check,
                pass: 0,
                fail: 0,
                counterexamples: Vec::new(),
            },
        );
    }
    let mut downgrades: BTreeMap<(Check, &'static str, String), u64> = BTreeMap::new();
    let mut totals = Totals {
        shapes,
        marked_trees: trees.len() as u64,
        ..Totals::default()
    };
    for (t, list) in trees.iter().zip(outcomes) {
        for o in list {
            let entry = summaries
                .entry((o.check, o.property))
                .or_insert_with(|| PropertySummary {
                    name: o.property.to_string(),
                    check: o.check,
                    pass: 0,
                    fail: 0,
                    counterexamples: Vec::new(),
                });
            match o.status {
                Status::Pass => {
                    entry.pass += 1;
                    totals.pass += 1;
                }
                Status::Fail(detail) => {
                    entry.fail += 1;
                    totals.fail += 1;
                    if entry.counterexamples.len() < MAX_COUNTEREXAMPLES {
                        entry.counterexamples.push(Counterexample {
                            tree: t.to_string(),
                            detail,
                            reproduce: reproducer(t, o.check),
                        });
                    }
                }
                Status::Downgraded(reason) => {
                    totals.downgraded += 1;
                    *downgrades.entry((o.check, o.property, reason)).or_default() += 1;
                }
            }
        }
    }

    let report = SweepReport {
        config: cfg.clone(),
        totals,
        checks: summaries.into_values().collect(),
        downgrades: downgrades
            .into_iter()
            .map(|((check, property, reason), count)| DowngradeSummary {
                check,
                property: property.to_string(),
                reason,
                count,
            })
            .collect(),
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    if let Some(path) = &cfg.out {
        std::fs::write(path, report.to_json()? + "\n")?;
    }
    Ok(report)
}
