//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use descent_tree::expansions::c_integrality;
use descent_tree::poly::{seq_predicates, to_basis};
use descent_tree::roots::integer_root_values;
use descent_tree::sweep::{enum_marked_trees, Check, PROPERTIES};
use descent_tree::{
    classify, run_sweep, Algo, Basis, Engine, ExactPolynomial, MarkedTree, QualifyingClass, SweepConfig, SweepReport,
};

const JOBS: usize = 4;

type Outcome = Result<String, String>;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn tree(s: &str) -> MarkedTree {
    s.parse().expect("tree literal")
}

fn poly(t: &str) -> ExactPolynomial {
    Engine::default().polynomial(&tree(t), Algo::Cut).expect("polynomial")
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fmt(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    parts.join(", ")
}

/// Printed high-to-low lists, returned low-to-high.
fn from_printed(high_to_low: &[i64]) -> Vec<BigInt> {
    let mut v = ints(high_to_low);
    v.reverse();
    v
}

fn sweep(max: usize, checks: &[Check]) -> Result<SweepReport, String> {
    let mut cfg = SweepConfig::new(max).with_checks(checks.iter().copied());
    cfg.jobs = JOBS;
    run_sweep(&cfg).map_err(|e| e.to_string())
}

/// Every named property ran at least once, never failed and was never
/// skipped.
fn clean(report: &SweepReport, names: &[&str]) -> Result<String, String> {
    let mut evaluated = 0;
    for &name in names {
        let p = report.property(name).ok_or_else(|| format!("{name} missing from report"))?;
        if p.fail > 0 {
            let first = p.counterexamples.first().map(|c| format!("{}: {}", c.tree, c.detail));
            return Err(format!("{name}: {} failures, first {first:?}", p.fail));
        }
        check(p.pass > 0, || format!("{name} never evaluated"))?;
        if let Some(d) = report.downgrades.iter().find(|d| d.property == name) {
            return Err(format!("{name} skipped {} times: {}", d.count, d.reason));
        }
        evaluated += p.pass;
    }
    Ok(format!("{} marked trees, {evaluated} checks", report.totals.marked_trees))
}

fn names_of(check: Check) -> Vec<&'static str> {
    PROPERTIES.iter().filter(|(c, _)| *c == check).map(|&(_, n)| n).collect()
}

fn marked_upto(max: usize) -> Vec<MarkedTree> {
    (1..=max).flat_map(|s| enum_marked_trees(s).expect("enumeration")).collect()
}

fn cubic_golden() -> Outcome {
    let p = poly("a[a[a,a],d[d,a]]");
    let expected = ExactPolynomial::new(vec![rat(80, 1), rat(-58, 3), rat(-1, 1), rat(1, 3)]);
    check(p == expected, || format!("got {p}"))?;
    let roots = integer_root_values(&p).map_err(|e| e.to_string())?;
    check(roots == [-8, 5, 6], || format!("integer roots {roots:?}"))?;
    Ok(format!("{p}; roots {roots:?}"))
}

fn sextic_golden() -> Outcome {
    let p = poly("d[d[d[a,a]],a]");
    let expected = ExactPolynomial::new(vec![
        rat(-10, 1),
        rat(-1, 2),
        rat(103, 36),
        rat(-49, 12),
        rat(19, 9),
        rat(-5, 12),
        rat(1, 36),
    ]);
    check(p == expected, || format!("got {p}"))?;
    for n in [4, 6] {
        let v = p.eval_int(n);
        check(v == rat(0, 1), || format!("d({n}) = {v}"))?;
    }
    Ok(format!("{p}; zero at 4 and 6"))
}

const NEG_A0_TREE: &str = "a[d[d,a],d[a,a],a[a[d],a]]";
const NON_ALT_TREE: &str = "d[a[d,d],d[d,d]]";

fn neg_a0_literal() -> Outcome {
    let t = tree(NEG_A0_TREE);
    let p = poly(NEG_A0_TREE);
    let e = to_basis(&p, Basis::NK, t.degree()).map_err(|e| e.to_string())?;
    let expected = from_printed(&[560, 3800, 10120, 12160, 3150, -3150, -3150, -3150]);
    check(e.coeffs == expected, || {
        format!("C(n-k,k) coefficients are [{}], expected [{}]", fmt(&e.coeffs), fmt(&expected))
    })?;
    check(!seq_predicates(&e.coeffs).nonnegative, || "nonnegativity holds".into())?;
    Ok(format!("[{}]", fmt(&e.coeffs)))
}

fn neg_a0_defined_basis() -> Outcome {
    let t = tree(NEG_A0_TREE);
    let p = poly(NEG_A0_TREE);
    check(classify(&t).class == QualifyingClass::Other, || "tree qualifies".into())?;
    let e = to_basis(&p, Basis::A, t.degree()).map_err(|e| e.to_string())?;
    let expected = from_printed(&[560, 3800, 10120, 12160, 3150, -3150, 3150, -3150]);
    check(e.coeffs == expected, || format!("a = [{}]", fmt(&e.coeffs)))?;
    check(!seq_predicates(&e.coeffs).nonnegative, || "nonnegativity holds".into())?;
    Ok(format!("a = [{}], a_0 < 0", fmt(&e.coeffs)))
}

fn non_alt_literal() -> Outcome {
    let t = tree(NON_ALT_TREE);
    let p = poly(NON_ALT_TREE);
    let e = to_basis(&p, Basis::C(-1), t.degree()).map_err(|e| e.to_string())?;
    let expected = from_printed(&[60, -60, 20, 44, -120, 200, -280, 360]);
    check(e.coeffs == expected, || {
        format!("C(n-1,k) coefficients are [{}], expected [{}]", fmt(&e.coeffs), fmt(&expected))
    })?;
    check(!seq_predicates(&e.coeffs).alternating, || "alternation holds".into())?;
    check(c_integrality(&t, &Engine::default()).map_err(|e| e.to_string())?, || {
        "c-basis not integral".into()
    })?;
    Ok(format!("[{}]", fmt(&e.coeffs)))
}

fn non_alt_defined_basis() -> Outcome {
    let t = tree(NON_ALT_TREE);
    let p = poly(NON_ALT_TREE);
    let e = to_basis(&p, Basis::C(1), t.degree()).map_err(|e| e.to_string())?;
    let expected = from_printed(&[60, -60, 20, 44, -120, 200, -280, 360]);
    check(e.coeffs == expected, || format!("c = [{}]", fmt(&e.coeffs)))?;
    check(!seq_predicates(&e.coeffs).alternating, || "alternation holds".into())?;
    check(c_integrality(&t, &Engine::default()).map_err(|e| e.to_string())?, || {
        "c-basis not integral".into()
    })?;
    Ok(format!("C(n+1,k): c = [{}], integral, not alternating", fmt(&e.coeffs)))
}

fn five_way() -> Outcome {
    let r = sweep(6, &[Check::Agreement])?;
    clean(&r, &["five_way_agreement", "cache_coherence", "interpolation_exact"])
}

fn degree_law() -> Outcome {
    let r = sweep(8, &[Check::Degree])?;
    clean(&r, &["degree_law"])
}

fn root_facts() -> Outcome {
    let r = sweep(7, &[Check::Roots])?;
    let names: Vec<&str> = names_of(Check::Roots)
        .into_iter()
        .filter(|n| !n.starts_with("complex_"))
        .collect();
    clean(&r, &names)
}

fn qualifying_class() -> Outcome {
    let r = sweep(7, &[Check::Expansions])?;
    clean(
        &r,
        &[
            "a_nonnegative_log_concave",
            "abar_nonnegative_increasing_log_concave",
            "shift_identity",
        ],
    )
}

fn heights_correspondence() -> Outcome {
    let r = sweep(6, &[Check::Poset])?;
    let summary = clean(&r, &["abar_via_heights"])?;
    let expected = marked_upto(6)
        .iter()
        .filter(|t| classify(t).class == QualifyingClass::AscentRootAllDescentChildren)
        .count() as u64;
    let got = r.property("abar_via_heights").unwrap().pass;
    check(got == expected, || format!("compared {got} trees, class has {expected}"))?;
    Ok(summary)
}

fn a_oracle() -> Outcome {
    let r = sweep(7, &[Check::Expansions])?;
    let p = r.property("a_oracle").ok_or("a_oracle missing")?;
    check(p.fail == 0, || format!("{} failures: {:?}", p.fail, p.counterexamples.first()))?;
    let expected = marked_upto(7)
        .iter()
        .filter(|t| classify(t).qualifies() && t.degree() <= 4)
        .count() as u64;
    check(p.pass == expected, || format!("compared {} trees, {expected} have h <= 4", p.pass))?;
    Ok(format!("{expected} qualifying trees with h <= 4"))
}

fn complex_bound() -> Outcome {
    let r = sweep(7, &[Check::Roots])?;
    clean(&r, &["complex_modulus_bound", "complex_residual"])
}

fn hygiene() -> Outcome {
    let w = sweep(6, &[Check::Witness])?;
    let rest = sweep(7, &[Check::Natlab, Check::Identities, Check::Expansions])?;
    let a = clean(&w, &["witness_realizes_s"])?;
    let b = clean(&rest, &["natlab_brute", "lift_invariance", "expansion_integrality"])?;
    Ok(format!("witness: {a}; natlab/lift/integrality: {b}"))
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);
    const SEC: u64 = 1;
    const MIN: u64 = 60;
    let criteria: &[Criterion] = &[
        ("1", "cubic golden and integer roots", Duration::from_secs(SEC), cubic_golden),
        ("2", "sextic golden with zeros at 4 and 6", Duration::from_secs(SEC), sextic_golden),
        ("3", "negative-a0 golden over C(n-k,k)", Duration::from_secs(5), neg_a0_literal),
        ("3+", "negative-a0 golden over the a-basis", Duration::from_secs(5), neg_a0_defined_basis),
        ("4", "non-alternating golden over C(n-1,k)", Duration::from_secs(5), non_alt_literal),
        ("4+", "non-alternating golden over the c-basis", Duration::from_secs(5), non_alt_defined_basis),
        ("5", "five-way agreement, s <= 6", Duration::from_secs(10 * MIN), five_way),
        ("6", "degree law, s <= 8", Duration::from_secs(5 * MIN), degree_law),
        ("7", "integer root facts, s <= 7", Duration::from_secs(10 * MIN), root_facts),
        ("8", "qualifying-class coefficients, s <= 7", Duration::MAX, qualifying_class),
        ("9", "abar from height polynomials, s <= 6", Duration::MAX, heights_correspondence),
        ("10", "a-coefficient counting oracle, h <= 4", Duration::from_secs(5 * MIN), a_oracle),
        ("11", "complex root modulus bound, s <= 7", Duration::MAX, complex_bound),
        ("12", "witness, natlab, lift, c-integrality", Duration::MAX, hygiene),
    ];

    let mut failed = Vec::new();
    for &(id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed > budget {
                Err(format!("took {elapsed:.2?}, budget {budget:.0?}; {detail}"))
            } else {
                Ok(detail)
            }
        });
        match outcome {
            Ok(detail) => println!("PASS [{id:>2}] {name} ({elapsed:.2?}): {detail}"),
            Err(reason) => {
                println!("FAIL [{id:>2}] {name} ({elapsed:.2?}): {reason}");
                failed.push(id);
            }
        }
    }
    println!(
        "acceptance: {} passed, {} failed{}",
        criteria.len() - failed.len(),
        failed.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" ({})", failed.join(", "))
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
