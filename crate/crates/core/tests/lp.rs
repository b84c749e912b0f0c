use num_traits::{One, Signed, Zero};

use pvc_core::generators::{gen_lp_gap, gen_random};
use pvc_core::lp::{check_semi_integrality, lp_lower_bound, solve, solve_rpvc, Constraint, LinearProgram, LpStatus, Rational, Sense};
use pvc_core::oracle::Oracle;
use pvc_core::DpvcInstance;

/// Edge-packing dual: maximise `Σ w_e y_e` with `Σ_{e ∋ v} y_e ≤ 1`, `y ≥ 0`,
/// written as a minimisation of the negated objective.
fn dual_value(inst: &DpvcInstance) -> (Rational, Vec<Rational>) {
    let m = inst.num_edges();
    let constraints = (0..inst.num_vertices())
        .map(|v| {
            let mut coeffs = vec![Rational::zero(); m];
            for &e in inst.incident(v) {
                coeffs[e] = Rational::one();
            }
            Constraint { coeffs, sense: Sense::Le, rhs: Rational::one() }
        })
        .collect();
    let objective = inst.edges().iter().map(|e| -Rational::from_integer(e.w_uv.into())).collect();
    match solve(&LinearProgram { objective, constraints }) {
        LpStatus::Optimal { x, value } => (-value, x),
        other => panic!("dual not optimal: {other:?}"),
    }
}

fn instances(count: u64) -> impl Iterator<Item = DpvcInstance> {
    (0..count).map(|seed| {
        let n = 2 + (seed % 9) as usize;
        let m = ((seed * 5) as usize % (n * (n - 1) / 2 + 1)).min(16);
        gen_random(n, m, 5, false, 1000 + seed).unwrap()
    })
}

#[test]
fn strong_duality_against_edge_packing() {
    for inst in instances(150) {
        let primal = solve_rpvc(&inst).unwrap();
        let (dual, y) = dual_value(&inst);
        // independently check that y is a feasible packing
        assert!(y.iter().all(|v| !v.is_negative()));
        for v in 0..inst.num_vertices() {
            let load = inst.incident(v).iter().fold(Rational::zero(), |a, &e| a + &y[e]);
            assert!(load <= Rational::one());
        }
        let packed = inst
            .edges()
            .iter()
            .zip(&y)
            .fold(Rational::zero(), |a, (e, ye)| a + Rational::from_integer(e.w_uv.into()) * ye);
        assert_eq!(packed, dual);
        assert_eq!(primal.value, dual, "{inst}");
        // primal feasibility
        for e in inst.edges() {
            assert!(&primal.x[e.u] + &primal.x[e.v] >= Rational::from_integer(e.w_uv.into()));
        }
    }
}

#[test]
fn relaxation_bounds_the_optimum() {
    for inst in instances(150) {
        let opt = Oracle::default().min_power(&inst).unwrap().0;
        let sol = solve_rpvc(&inst).unwrap();
        assert!(sol.value <= Rational::from_integer(opt.into()));
        assert!(lp_lower_bound(&inst) <= opt);
        assert_eq!(check_semi_integrality(&sol), Ok(true));
    }
}

#[test]
fn lower_bound_for_directed_instances() {
    for seed in 0..100 {
        let inst = gen_random(6, 8, 5, true, seed).unwrap();
        let opt = Oracle::default().min_power(&inst).unwrap().0;
        assert!(lp_lower_bound(&inst) <= opt);
    }
}

#[test]
fn gap_instance() {
    let inst = gen_lp_gap();
    assert_eq!(dual_value(&inst).0, Rational::from_integer(4.into()));
}
