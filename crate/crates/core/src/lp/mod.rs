//! Fractional relaxation of PVC: minimize `Σ x_v` subject to
//! `x_u + x_v ≥ w_uv` for every edge and `x ≥ 0`.

pub mod simplex;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::instance::DpvcInstance;

pub use simplex::{solve, Constraint, LinearProgram, LpStatus, Rational, Sense};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("the relaxation is defined for symmetric instances only")]
    NotSymmetric,
    #[error("semi-integrality is only claimed for basic solutions")]
    NotBasic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub value: Rational,
    /// Whether `x` is a vertex of the feasible polyhedron.
    pub basic: bool,
}

fn int(v: u64) -> Rational {
    Rational::from_integer(v.into())
}

/// The covering program of a symmetric instance.
pub fn rpvc_program(inst: &DpvcInstance) -> LinearProgram {
    let n = inst.num_vertices();
    let constraints = inst
        .edges()
        .iter()
        .map(|e| {
            let mut coeffs = vec![Rational::zero(); n];
            coeffs[e.u] = Rational::one();
            coeffs[e.v] = Rational::one();
            Constraint {
                coeffs,
                sense: Sense::Ge,
                rhs: int(e.w_uv),
            }
        })
        .collect();
    LinearProgram {
        objective: vec![Rational::one(); n],
        constraints,
    }
}

/// Basic optimal solution of the relaxation.
pub fn solve_rpvc(inst: &DpvcInstance) -> Result<LpSolution, LpError> {
    if !inst.is_symmetric() {
        return Err(LpError::NotSymmetric);
    }
    match solve(&rpvc_program(inst)) {
        LpStatus::Optimal { x, value } => Ok(LpSolution { x, value, basic: true }),
        // x_v = max demand is feasible and the objective is bounded below by 0
        LpStatus::Infeasible | LpStatus::Unbounded => unreachable!("covering program is feasible and bounded"),
    }
}

/// Whether every coordinate of a basic solution is a multiple of 1/2.
pub fn check_semi_integrality(sol: &LpSolution) -> Result<bool, LpError> {
    if !sol.basic {
        return Err(LpError::NotBasic);
    }
    let two = int(2);
    Ok(sol.x.iter().all(|x| (x * &two).is_integer()))
}

/// `⌈LP⌉` of the symmetric instance with demand `min(w_uv, w_vu)` per edge.
/// Never exceeds the optimum of `inst`.
pub fn lp_lower_bound(inst: &DpvcInstance) -> u64 {
    let sym = inst.symmetrized_min();
    let sol = solve_rpvc(&sym).expect("symmetrized");
    sol.value.ceil().to_integer().try_into().expect("fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_lp_gap;

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    #[test]
    fn examples() {
        let edge = DpvcInstance::pvc(2, &[(0, 1, 5)]).unwrap();
        assert_eq!(solve_rpvc(&edge).unwrap().value, int(5));
        assert_eq!(lp_lower_bound(&edge), 5);

        let tri = DpvcInstance::pvc(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let sol = solve_rpvc(&tri).unwrap();
        assert_eq!(sol.value, int(3) * half());
        assert_eq!(sol.x, vec![half(); 3]);
        assert_eq!(check_semi_integrality(&sol), Ok(true));
        assert_eq!(lp_lower_bound(&tri), 2);
    }

    #[test]
    fn lp_gap() {
        let inst = gen_lp_gap();
        let sol = solve_rpvc(&inst).unwrap();
        assert_eq!(sol.value, int(4));
        assert_eq!(lp_lower_bound(&inst), 4);
        let apex = (0..inst.num_vertices()).find(|&v| inst.degree(v) == 4).unwrap();
        for v in 0..inst.num_vertices() {
            let want = if v == apex { int(0) } else { int(1) };
            assert_eq!(sol.x[v], want, "vertex {v}");
        }
    }

    #[test]
    fn errors() {
        let dir = DpvcInstance::dpvc(2, &[(0, 1, 2, 1)]).unwrap();
        assert_eq!(solve_rpvc(&dir), Err(LpError::NotSymmetric));
        assert_eq!(lp_lower_bound(&dir), 1);
        let sol = LpSolution {
            x: vec![half()],
            value: half(),
            basic: false,
        };
        assert_eq!(check_semi_integrality(&sol), Err(LpError::NotBasic));
    }
}
