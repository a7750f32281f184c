mod common;

use std::time::Instant;

use common::{brute_force, mixed_instance, suite, suite_instance};
use poutine::bnb::{branch, solve_bnb, BnbBudget, BnbOptions, BnbStatus, IncumbentSink, SearchNode};
use poutine::lp::{LpOptions, LpStatus, Simplex};
use poutine::model::Solution;

#[derive(Default)]
struct Recorder {
    improvements: Vec<f64>,
    samples: Vec<(f64, Option<f64>)>,
}

impl IncumbentSink for Recorder {
    fn improved(&mut self, solution: &Solution) {
        self.improvements.push(solution.objective);
    }

    fn wants_progress(&self) -> bool {
        true
    }

    fn progress(&mut self, lower_bound: f64, incumbent: Option<f64>) {
        self.samples.push((lower_bound, incumbent));
    }
}

#[test]
fn suite_optimum_matches_enumeration() {
    for inst in suite() {
        let truth = brute_force(&inst).expect("suite instances are feasible").0;
        for options in [BnbOptions::plain(), BnbOptions::default()] {
            let started = Instant::now();
            let mut rec = Recorder::default();
            let res = solve_bnb(&inst, None, &BnbBudget::unlimited(), &options, &mut rec);
            assert!(started.elapsed().as_secs_f64() < 1.0, "{}", inst.name);
            assert_eq!(res.status, BnbStatus::Optimal, "{}", inst.name);
            let best = res.best.unwrap();
            assert!((best.objective - truth).abs() <= 1e-6, "{}: {} vs {truth}", inst.name, best.objective);
            assert!((res.lower_bound - truth).abs() <= 1e-6);
            assert!(rec.improvements.windows(2).all(|w| w[1] < w[0]), "{}", inst.name);
            for (lb, inc) in rec.samples {
                assert!(lb <= truth + 1e-6, "{}: bound {lb} above {truth}", inst.name);
                assert!(inc.is_none_or(|z| z >= truth - 1e-6));
            }
        }
    }
}

#[test]
fn plain_search_is_breadth_first() {
    for seed in 0..20 {
        let inst = suite_instance(seed);
        let opts = BnbOptions {
            record_order: true,
            ..BnbOptions::plain()
        };
        let res = solve_bnb(&inst, None, &BnbBudget::unlimited(), &opts, &mut ());
        assert!(res.processed.windows(2).all(|w| w[0] < w[1]), "seed {seed}");
        assert_eq!(res.processed.len() as u64, res.nodes);
    }
}

#[test]
fn children_never_bound_below_parent() {
    let mut checked = 0;
    for seed in 0..200 {
        let inst = if seed % 2 == 0 { suite_instance(seed) } else { mixed_instance(seed) };
        let mut simplex = Simplex::new(&inst, None);
        let opts = LpOptions::default();
        let root = SearchNode::root();
        let lp = simplex.solve(&inst.lower, &inst.upper, None, &opts);
        if lp.status != LpStatus::Optimal {
            continue;
        }
        let mut next = 1;
        let Some((down, up)) = branch(&root, &lp.point, lp.objective, &inst, &mut next) else { continue };
        for child in [down, up] {
            let (lo, hi) = child.bounds(&inst);
            let res = simplex.solve(&lo, &hi, None, &opts);
            if res.status == LpStatus::Optimal {
                assert!(res.objective >= child.parent_bound - 1e-7, "seed {seed}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 100, "{checked}");
}

#[test]
fn warm_incumbent_is_kept_when_optimal() {
    let inst = suite_instance(3);
    let (z, x) = brute_force(&inst).unwrap();
    let warm = poutine::model::evaluate(&inst, &x).unwrap();
    let mut rec = Recorder::default();
    let res = solve_bnb(&inst, Some(&warm), &BnbBudget::unlimited(), &BnbOptions::default(), &mut rec);
    assert_eq!(res.status, BnbStatus::Optimal);
    assert_eq!(res.best.unwrap().objective, z);
    assert!(rec.improvements.is_empty());
}
