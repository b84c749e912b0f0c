#![allow(dead_code)]

use pvc_core::branching::{Rule, SearchObserver};
use pvc_core::oracle::Oracle;
use pvc_core::state::BranchState;

/// Checks every reduction and branching of a search against the oracle.
#[derive(Default)]
pub struct RuleChecker {
    pub reductions: u64,
    pub branchings: u64,
    pub violations: Vec<String>,
    pub factor_violations: Vec<String>,
    pub fallbacks: u64,
}

pub fn residual_opt(s: &BranchState) -> u64 {
    let (res, _) = s.residual_instance();
    Oracle::new(64).min_power(&res).expect("residual within limit").0
}

fn spent(parent: &BranchState, child: &BranchState) -> i64 {
    parent.budget() - child.budget()
}

/// Rules whose two-way branchings carry a claimed worst-case factor.
fn factor_rule(rule: Rule) -> bool {
    matches!(
        rule,
        Rule::Br1 | Rule::HeavyEdge | Rule::Weight3Isolated | Rule::Weight3General | Rule::W2AllTwo | Rule::W2Case(..)
    )
}

impl SearchObserver for RuleChecker {
    fn reduction(&mut self, rule: Rule, before: &BranchState, after: &BranchState) {
        self.reductions += 1;
        let lhs = residual_opt(before) as i64;
        let rhs = residual_opt(after) as i64 + spent(before, after);
        if lhs != rhs {
            self.violations.push(format!("{rule}: opt {lhs} != {rhs}"));
        }
    }

    fn branching(&mut self, rule: Rule, parent: &BranchState, children: &[BranchState]) {
        self.branchings += 1;
        if rule == Rule::Fallback {
            self.fallbacks += 1;
        }
        let lhs = residual_opt(parent) as i64;
        let rhs = children
            .iter()
            .map(|c| residual_opt(c) as i64 + spent(parent, c))
            .min();
        if Some(lhs) != rhs {
            self.violations.push(format!("{rule}: opt {lhs} != min over children {rhs:?}"));
        }
        if factor_rule(rule) && children.len() == 2 {
            let mut d = [spent(parent, &children[0]), spent(parent, &children[1])];
            d.sort_unstable();
            if !((d[0] >= 1 && d[1] >= 5) || (d[0] >= 2 && d[1] >= 3)) {
                self.factor_violations.push(format!("{rule}: decrements {d:?}"));
            }
        }
    }
}
