use num_traits::{One, Zero};

use super::lp::{lp_solve, LinearProgram, LpOutcome, Relation, VarBound};
use crate::error::{Error, Result};
use crate::rational::dot;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum HullMembership {
    /// Convex coefficients, one per generator, reproducing the point.
    Inside { coefficients: Vec<Rational> },
    /// `functional · point − max_g functional · g = margin > 0`.
    Outside {
        functional: Vec<Rational>,
        margin: Rational,
    },
}

impl HullMembership {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullMembership::Inside { .. })
    }
}

fn check_dims(point: &[Rational], generators: &[Vec<Rational>]) -> Result<()> {
    if let Some(g) = generators.iter().find(|g| g.len() != point.len()) {
        return Err(Error::Shape(format!(
            "generator of length {} against a point of length {}",
            g.len(),
            point.len()
        )));
    }
    Ok(())
}

/// Decides whether `point` lies in the convex hull of `generators`.
pub fn hull_membership(point: &[Rational], generators: &[Vec<Rational>]) -> Result<HullMembership> {
    if generators.is_empty() {
        return Err(Error::Empty("generator list"));
    }
    check_dims(point, generators)?;
    let dim = point.len();
    let k = generators.len();

    let mut lp = LinearProgram::minimize(vec![Rational::zero(); k]).nonnegative();
    lp.add_constraint(vec![Rational::one(); k], Relation::Eq, Rational::one());
    for c in 0..dim {
        let row = generators.iter().map(|g| g[c].clone()).collect();
        lp.add_constraint(row, Relation::Eq, point[c].clone());
    }
    if let LpOutcome::Optimal { witness, .. } = lp_solve(&lp)? {
        return Ok(HullMembership::Inside {
            coefficients: witness,
        });
    }

    // Separation: maximize w·p − s subject to w·g ≤ s, with ‖w‖₁ ≤ 1.
    // Variables: w⁺ (dim), w⁻ (dim), s (free).
    let n = 2 * dim + 1;
    let mut objective = Vec::with_capacity(n);
    objective.extend(point.iter().cloned());
    objective.extend(point.iter().map(|v| -v.clone()));
    objective.push(-Rational::one());
    let mut lp = LinearProgram::maximize(objective);
    for j in 0..2 * dim {
        lp.set_bound(j, VarBound::NonNegative);
    }
    lp.set_bound(2 * dim, VarBound::Free);
    for g in generators {
        let mut row = Vec::with_capacity(n);
        row.extend(g.iter().cloned());
        row.extend(g.iter().map(|v| -v.clone()));
        row.push(-Rational::one());
        lp.add_constraint(row, Relation::Le, Rational::zero());
    }
    let mut l1 = vec![Rational::one(); 2 * dim];
    l1.push(Rational::zero());
    lp.add_constraint(l1, Relation::Le, Rational::one());
    match lp_solve(&lp)? {
        LpOutcome::Optimal { witness, .. } => {
            let functional: Vec<Rational> =
                (0..dim).map(|j| &witness[j] - &witness[dim + j]).collect();
            let best = generators
                .iter()
                .map(|g| dot(&functional, g))
                .max()
                .expect("nonempty generators");
            let margin = dot(&functional, point) - best;
            if margin <= Rational::zero() {
                return Err(Error::Invariant(
                    "membership LP infeasible but no separating functional".into(),
                ));
            }
            Ok(HullMembership::Outside { functional, margin })
        }
        other => Err(Error::Invariant(format!(
            "separation LP returned {other:?}"
        ))),
    }
}

/// `min Σλᵢ` subject to `target = Σ λᵢ gᵢ`, `λ ≥ 0`; `None` when the target
/// is outside the cone generated by `generators`.
pub fn min_coefficient_sum(
    target: &[Rational],
    generators: &[Vec<Rational>],
) -> Result<Option<Rational>> {
    check_dims(target, generators)?;
    let k = generators.len();
    let mut lp = LinearProgram::minimize(vec![Rational::one(); k]).nonnegative();
    for c in 0..target.len() {
        let row = generators.iter().map(|g| g[c].clone()).collect();
        lp.add_constraint(row, Relation::Eq, target[c].clone());
    }
    Ok(match lp_solve(&lp)? {
        LpOutcome::Optimal { optimum, .. } => Some(optimum),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("coefficient sum is bounded below by zero"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ivec(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn generator_is_inside() {
        let gens = vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])];
        match hull_membership(&ivec(&[1, 0]), &gens).unwrap() {
            HullMembership::Inside { coefficients } => {
                assert_eq!(coefficients, ivec(&[0, 1, 0]));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn midpoint() {
        let gens = vec![ivec(&[0, 0]), ivec(&[2, 2])];
        let r = hull_membership(&ivec(&[1, 1]), &gens).unwrap();
        assert_eq!(
            r,
            HullMembership::Inside {
                coefficients: vec![ratio(1, 2), ratio(1, 2)]
            }
        );
    }

    #[test]
    fn separated_by_x() {
        let gens = vec![ivec(&[0, 0]), ivec(&[1, 0])];
        let r = hull_membership(&ivec(&[2, 0]), &gens).unwrap();
        assert_eq!(
            r,
            HullMembership::Outside {
                functional: ivec(&[1, 0]),
                margin: int(1)
            }
        );
    }

    #[test]
    fn empty_generators() {
        assert_eq!(
            hull_membership(&ivec(&[0]), &[]),
            Err(Error::Empty("generator list"))
        );
    }

    #[test]
    fn coefficient_sums() {
        let gens = vec![ivec(&[1, 0]), ivec(&[0, 1])];
        assert_eq!(
            min_coefficient_sum(&ivec(&[1, 0]), &gens).unwrap(),
            Some(int(1))
        );
        assert_eq!(min_coefficient_sum(&ivec(&[-1, 0]), &gens).unwrap(), None);
    }

    #[test]
    fn triangle_decomposition_coefficient_sum() {
        // Points a, b, c with ρ(c,b) = ρ(b,a) = 1, ρ(c,a) = 3; coordinates (a, b, c).
        let e_cb = ivec(&[0, -1, 1]);
        let e_ba = ivec(&[-1, 1, 0]);
        let e_ca = vec![ratio(-1, 3), int(0), ratio(1, 3)];
        assert_eq!(
            min_coefficient_sum(&e_ca, &[e_cb, e_ba]).unwrap(),
            Some(ratio(2, 3))
        );
    }
}
