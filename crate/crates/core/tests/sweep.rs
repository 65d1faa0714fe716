use std::collections::{BTreeSet, HashSet};

use descent_tree::sweep::{enum_marked_trees, enum_rooted_trees, run_sweep, Check, Fault, SweepConfig, PROPERTIES};
use descent_tree::MarkedTree;

/// Generate-and-dedup oracle: grow every tree of size `s - 1` by one leaf.
fn oracle_shapes(s: usize) -> HashSet<String> {
    let mut level: HashSet<String> = HashSet::from(["a".to_string()]);
    for _ in 1..s {
        let mut next = HashSet::new();
        for key in &level {
            let t: MarkedTree = key.parse().unwrap();
            for v in t.vertices() {
                let mut parent: Vec<Option<usize>> = t.vertices().map(|u| t.parent(u)).collect();
                parent.push(Some(v));
                next.insert(MarkedTree::from_parents(parent, []).unwrap().canonical_key());
            }
        }
        level = next;
    }
    level
}

#[test]
fn enumeration_matches_oracle() {
    for s in 1..=9 {
        let keys: HashSet<String> = enum_rooted_trees(s)
            .unwrap()
            .iter()
            .map(MarkedTree::canonical_key)
            .collect();
        assert_eq!(keys, oracle_shapes(s), "s = {s}");
    }
    assert_eq!(enum_rooted_trees(13).unwrap().len(), 12486);
}

#[test]
fn marked_trees_cover_every_subset() {
    let trees = enum_marked_trees(3).unwrap();
    assert_eq!(trees.len(), 16);
    let keys: HashSet<String> = trees.iter().map(MarkedTree::canonical_key).collect();
    // the two markings of a cherry with one descent child coincide
    assert_eq!(keys.len(), 14);
}

fn normalized(mut cfg: SweepConfig, jobs: usize) -> String {
    cfg.jobs = jobs;
    let mut report = run_sweep(&cfg).unwrap();
    report.wall_time_ms = 0;
    report.config.jobs = 0;
    report.to_json().unwrap()
}

#[test]
fn deterministic_across_worker_counts() {
    let cfg = SweepConfig::new(4);
    let one = normalized(cfg.clone(), 1);
    assert_eq!(one, normalized(cfg.clone(), 1));
    assert_eq!(one, normalized(cfg, 3));
}

#[test]
fn injected_fault_is_reported() {
    let mut cfg = SweepConfig::new(4).with_checks([Check::Natlab]);
    cfg.fault = Some(Fault::Natlab);
    let report = run_sweep(&cfg).unwrap();
    let natlab = report.property("natlab_brute").unwrap();
    assert_eq!(natlab.fail, report.totals.marked_trees);
    assert!(!natlab.counterexamples.is_empty());
    for c in &natlab.counterexamples {
        assert!(c.reproduce.starts_with("descent-tree check --tree '"));
        assert!(c.reproduce.ends_with("--checks natlab"));
    }
    for p in &report.checks {
        assert_eq!(p.fail == 0, p.counterexamples.is_empty());
    }
}

#[test]
fn agreement_with_lowered_brute_cap() {
    let mut cfg = SweepConfig::new(6).with_checks([Check::Agreement]);
    cfg.brute_cap = 8;
    cfg.jobs = 2;
    let report = run_sweep(&cfg).unwrap();
    assert_eq!(report.failures(), 0);
    assert!(report.downgrades.is_empty());

    cfg.max_size = 4;
    cfg.brute_cap = 5;
    let report = run_sweep(&cfg).unwrap();
    assert_eq!(report.failures(), 0);
    let d = &report.downgrades[0];
    assert_eq!(d.property, "five_way_agreement");
    assert!(d.count > 0);
}

/// Every invariant the library documents is wired to some check.
#[test]
fn coverage_audit() {
    let documented = [
        "witness_realizes_s",
        "hook_consistency",
        "natlab_brute",
        "split_graft_round_trip",
        "canonical_key_invariance",
        "expansion_integrality",
        "basis_round_trip",
        "interpolation_exact",
        "shift_identity",
        "five_way_agreement",
        "degree_law",
        "positivity",
        "s_root_iff_root_descent",
        "lift_invariance",
        "cache_coherence",
        "a_nonnegative_log_concave",
        "abar_nonnegative_increasing_log_concave",
        "a_oracle",
        "abar_via_heights",
        "root_heights_decreasing",
        "height_sum_invariant",
        "value_at_zero",
        "s_minus_1_root_iff_descent_child",
        "descent_children_roots",
        "one_root_iff_leaves_descent",
        "complex_modulus_bound",
        "integer_roots_at_most_s",
        "minus_one_root_iff_s_even",
        "root_only_closed_form",
        "all_descent_roots",
    ];
    let registered: BTreeSet<&str> = PROPERTIES.iter().map(|&(_, n)| n).collect();
    for name in documented {
        assert!(registered.contains(name), "{name} has no check");
    }

    let report = run_sweep(&SweepConfig::new(4)).unwrap();
    assert_eq!(report.failures(), 0);
    for &(check, name) in PROPERTIES {
        let p = report.property(name).unwrap();
        assert_eq!(p.check, check);
        assert!(p.pass > 0, "{name} never evaluated");
    }
}

#[test]
fn rejects_bad_config() {
    assert!(run_sweep(&SweepConfig::new(0)).is_err());
    assert!(run_sweep(&SweepConfig::new(14)).is_err());
    assert!(run_sweep(&SweepConfig::new(2).with_checks([])).is_err());
}
