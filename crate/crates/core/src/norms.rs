//! Compatible norms and seminorms on the zero-mass measures `V₀(X)`.
//!
//! Every norm comes back as a [`NormReport`] whose certificate can be
//! re-evaluated to reproduce the value exactly.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{
    enumerate_vertices, lp_solve, LinearProgram, LpOutcome, Relation, VarBound,
};
use crate::lipschitz::{
    check_enumerable, enumerate_extremal, is_one_lipschitz, lipschitz_polytope, LipschitzFunction,
};
use crate::metric::{FiniteMetricSpace, SignedMeasure};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub from: usize,
    pub to: usize,
    pub mass: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Degenerate case with nothing to certify (the zero space `V₀` of one point).
    Zero,
    /// Transport plan from the positive to the negative part.
    Coupling(Vec<Transfer>),
    /// A maximizing 1-Lipschitz function.
    DualFunction(LipschitzFunction),
    /// HK witness: `value = ±Σ c_k ρ(point, x_k)`.
    Point { point: usize, positive: bool },
    /// Double-point witness: `value = Σ c_k φ_{x,y}(z_k)`.
    Pair { x: usize, y: usize },
    /// Family witness: `value = ±Σ c_k f_index(z_k)`.
    Member { index: usize, positive: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormReport {
    pub value: Rational,
    pub certificate: Certificate,
}

impl NormReport {
    /// Re-evaluates the certificate and compares with the reported value.
    /// `family` is needed only for [`Certificate::Member`].
    pub fn recheck(
        &self,
        space: &FiniteMetricSpace,
        mu: &SignedMeasure,
        family: Option<&FunctionFamily>,
    ) -> bool {
        let signed = |positive: bool, v: Rational| if positive { v } else { -v };
        match &self.certificate {
            Certificate::Zero => mu.is_zero() && self.value.is_zero(),
            Certificate::Coupling(plan) => {
                let n = space.len();
                let mut out = vec![Rational::zero(); n];
                let mut cost = Rational::zero();
                for t in plan {
                    if t.from >= n || t.to >= n || t.mass.is_negative() {
                        return false;
                    }
                    out[t.from] += &t.mass;
                    out[t.to] -= &t.mass;
                    cost += &t.mass * space.dist(t.from, t.to);
                }
                let (pos, neg) = mu.split();
                let sources_ok = plan.iter().all(|t| pos.iter().any(|(i, _)| *i == t.from))
                    && plan.iter().all(|t| neg.iter().any(|(i, _)| *i == t.to));
                sources_ok && out == mu.to_dense(n) && cost == self.value
            }
            Certificate::DualFunction(u) => {
                u.len() == space.len()
                    && is_one_lipschitz(space, u.values())
                    && mu.pair_with(u.values()) == self.value
            }
            Certificate::Point { point, positive } => {
                *point < space.len()
                    && signed(*positive, mu.pair_with(space.row(*point))) == self.value
            }
            Certificate::Pair { x, y } => {
                *x < space.len()
                    && *y < space.len()
                    && x != y
                    && mu.pair_with(&double_point(space, *x, *y)) == self.value
            }
            Certificate::Member { index, positive } => family
                .and_then(|fam| fam.members.get(*index))
                .is_some_and(|f| signed(*positive, mu.pair_with(f.values())) == self.value),
        }
    }
}

fn check_measure(space: &FiniteMetricSpace, mu: &SignedMeasure) -> Result<()> {
    mu.check_in(space)
}

/// Exact optimal transport cost between `μ₊` and `μ₋` with cost `ρ`.
pub fn kr_norm_primal(space: &FiniteMetricSpace, mu: &SignedMeasure) -> Result<NormReport> {
    check_measure(space, mu)?;
    let (pos, neg) = mu.split();
    if pos.is_empty() {
        return Ok(NormReport {
            value: Rational::zero(),
            certificate: Certificate::Coupling(Vec::new()),
        });
    }
    let cols = neg.len();
    let objective: Vec<Rational> = pos
        .iter()
        .flat_map(|(p, _)| neg.iter().map(move |(q, _)| space.dist(*p, *q).clone()))
        .collect();
    let vars = objective.len();
    let mut lp = LinearProgram::minimize(objective).nonnegative();
    for (r, (_, mass)) in pos.iter().enumerate() {
        let mut row = vec![Rational::zero(); vars];
        for c in 0..cols {
            row[r * cols + c] = Rational::one();
        }
        lp.add_constraint(row, Relation::Eq, mass.clone());
    }
    for (c, (_, mass)) in neg.iter().enumerate() {
        let mut row = vec![Rational::zero(); vars];
        for r in 0..pos.len() {
            row[r * cols + c] = Rational::one();
        }
        lp.add_constraint(row, Relation::Eq, mass.clone());
    }
    match lp_solve(&lp)? {
        LpOutcome::Optimal { optimum, witness } => {
            let plan = witness
                .into_iter()
                .enumerate()
                .filter(|(_, m)| !m.is_zero())
                .map(|(k, mass)| Transfer {
                    from: pos[k / cols].0,
                    to: neg[k % cols].0,
                    mass,
                })
                .collect();
            Ok(NormReport {
                value: optimum,
                certificate: Certificate::Coupling(plan),
            })
        }
        other => Err(Error::Invariant(format!("transport LP returned {other:?}"))),
    }
}

/// `sup Σ c_k u(z_k)` over 1-Lipschitz `u`, normalized to `u = 0` at the
/// lowest-index support point.
pub fn kr_norm_dual(space: &FiniteMetricSpace, mu: &SignedMeasure) -> Result<NormReport> {
    check_measure(space, mu)?;
    let n = space.len();
    let Some(anchor) = mu.support().first().copied() else {
        return Ok(NormReport {
            value: Rational::zero(),
            certificate: Certificate::DualFunction(LipschitzFunction::new(vec![
                Rational::zero();
                n
            ])),
        });
    };
    let mut lp = LinearProgram::maximize(mu.to_dense(n));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut row = vec![Rational::zero(); n];
                row[i] = Rational::one();
                row[j] = -Rational::one();
                lp.add_constraint(row, Relation::Le, space.dist(i, j).clone());
            }
        }
    }
    let mut pin = vec![Rational::zero(); n];
    pin[anchor] = Rational::one();
    lp.add_constraint(pin, Relation::Eq, Rational::zero());
    match lp_solve(&lp)? {
        LpOutcome::Optimal { optimum, witness } => Ok(NormReport {
            value: optimum,
            certificate: Certificate::DualFunction(LipschitzFunction::new(witness)),
        }),
        other => Err(Error::Invariant(format!("Lipschitz LP returned {other:?}"))),
    }
}

/// The maximal compatible norm (computed by its transport form).
pub fn kr_norm(space: &FiniteMetricSpace, mu: &SignedMeasure) -> Result<Rational> {
    Ok(kr_norm_primal(space, mu)?.value)
}

/// Hausdorff–Kuratowski norm `max_z |Σ c_k ρ(z, x_k)|`.
pub fn hk_norm(space: &FiniteMetricSpace, mu: &SignedMeasure) -> Result<NormReport> {
    check_measure(space, mu)?;
    let mut best: Option<(Rational, usize, bool)> = None;
    for z in 0..space.len() {
        let s = mu.pair_with(space.row(z));
        let a = s.abs();
        if best.as_ref().is_none_or(|(b, _, _)| a > *b) {
            best = Some((a, z, !s.is_negative()));
        }
    }
    let (value, point, positive) = best.expect("space is nonempty");
    Ok(NormReport {
        value,
        certificate: Certificate::Point { point, positive },
    })
}

/// `φ_{x,y} = (ρ(y,·) − ρ(x,·)) / 2`.
pub fn double_point(space: &FiniteMetricSpace, x: usize, y: usize) -> Vec<Rational> {
    let two = Rational::from_integer(2.into());
    space
        .row(y)
        .iter()
        .zip(space.row(x))
        .map(|(a, b)| (a - b) / &two)
        .collect()
}

/// Double-point norm; the witness is the lexicographically first ordered
/// pair whose function attains the norm with positive sign.
pub fn dp_norm(space: &FiniteMetricSpace, mu: &SignedMeasure) -> Result<NormReport> {
    check_measure(space, mu)?;
    let n = space.len();
    if n < 2 {
        return Ok(NormReport {
            value: Rational::zero(),
            certificate: Certificate::Zero,
        });
    }
    let mut best: Option<(Rational, usize, usize)> = None;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let s = mu.pair_with(&double_point(space, x, y));
            if best.as_ref().is_none_or(|(b, _, _)| s > *b) {
                best = Some((s, x, y));
            }
        }
    }
    let (value, x, y) = best.expect("at least one pair");
    Ok(NormReport {
        value,
        certificate: Certificate::Pair { x, y },
    })
}

/// A nonempty family of 1-Lipschitz functions defining an 𝓛-seminorm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionFamily {
    pub members: Vec<LipschitzFunction>,
    pub tag: String,
}

impl FunctionFamily {
    pub fn new(
        space: &FiniteMetricSpace,
        members: Vec<LipschitzFunction>,
        tag: impl Into<String>,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Family("family is empty".into()));
        }
        for (i, f) in members.iter().enumerate() {
            if f.len() != space.len() {
                return Err(Error::Family(format!("member {i} has {} values", f.len())));
            }
            if !is_one_lipschitz(space, f.values()) {
                return Err(Error::Family(format!("member {i} is not 1-Lipschitz")));
            }
        }
        Ok(FunctionFamily {
            members,
            tag: tag.into(),
        })
    }

    /// `{ρ(z, ·) : z ∈ X}`.
    pub fn distances(space: &FiniteMetricSpace) -> Self {
        let members = (0..space.len())
            .map(|z| LipschitzFunction::distance(space, z))
            .collect();
        FunctionFamily {
            members,
            tag: "distance".into(),
        }
    }

    /// `{φ_{x,y} : x ≠ y}` in lexicographic pair order.
    pub fn double_point(space: &FiniteMetricSpace) -> Self {
        let n = space.len();
        let members = (0..n)
            .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
            .map(|(x, y)| LipschitzFunction::new(double_point(space, x, y)))
            .collect();
        FunctionFamily {
            members,
            tag: "double-point".into(),
        }
    }

    /// All extreme points of the Lipschitz unit ball (modulo constants).
    pub fn extremal(space: &FiniteMetricSpace) -> Result<Self> {
        Self::new(space, enumerate_extremal(space)?, "extremal")
    }
}

/// `max_{f ∈ 𝓛} |Σ c_k f(z_k)|`.
pub fn nl_seminorm(
    space: &FiniteMetricSpace,
    mu: &SignedMeasure,
    family: &FunctionFamily,
) -> Result<NormReport> {
    check_measure(space, mu)?;
    for (i, f) in family.members.iter().enumerate() {
        if f.len() != space.len() || !is_one_lipschitz(space, f.values()) {
            return Err(Error::Family(format!(
                "member {i} is not a 1-Lipschitz function on the space"
            )));
        }
    }
    let mut best: Option<(Rational, usize, bool)> = None;
    for (i, f) in family.members.iter().enumerate() {
        let s = mu.pair_with(f.values());
        let a = s.abs();
        if best.as_ref().is_none_or(|(b, _, _)| a > *b) {
            best = Some((a, i, !s.is_negative()));
        }
    }
    let (value, index, positive) = best.ok_or_else(|| Error::Family("family is empty".into()))?;
    Ok(NormReport {
        value,
        certificate: Certificate::Member { index, positive },
    })
}

/// Generalized two-point family `θ ρ(x,·) − (1 − θ) ρ(y,·)` over ordered
/// pairs, each divided by its Lipschitz constant. `theta[x][y]` must lie in
/// `(0, 1)` for `x ≠ y`; the diagonal is ignored.
pub fn build_theta_family(
    space: &FiniteMetricSpace,
    theta: &[Vec<Rational>],
) -> Result<FunctionFamily> {
    let n = space.len();
    if theta.len() != n || theta.iter().any(|r| r.len() != n) {
        return Err(Error::Shape(format!("theta must be {n}x{n}")));
    }
    if n < 2 {
        return Err(Error::Family("a two-point family needs two points".into()));
    }
    let mut members = Vec::with_capacity(n * (n - 1));
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let t = &theta[x][y];
            if !t.is_positive() || *t >= Rational::one() {
                return Err(Error::Precondition(format!(
                    "theta({x},{y}) = {t} is outside (0, 1)"
                )));
            }
            let s = Rational::one() - t;
            let raw = LipschitzFunction::new(
                space
                    .row(x)
                    .iter()
                    .zip(space.row(y))
                    .map(|(a, b)| t * a - &s * b)
                    .collect(),
            );
            let lip = crate::lipschitz::lipschitz_constant(space, &raw)?;
            members.push(raw.scaled(&lip.recip()));
        }
    }
    FunctionFamily::new(space, members, "theta")
}

fn check_probability(p: &[Rational], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::Shape(format!(
            "probability vector of length {} for {n} points",
            p.len()
        )));
    }
    if p.iter().any(|v| v.is_negative()) {
        return Err(Error::Precondition(
            "probability vector has a negative entry".into(),
        ));
    }
    let total: Rational = p.iter().sum();
    if !total.is_one() {
        return Err(Error::Precondition(format!(
            "probability vector sums to {total}"
        )));
    }
    Ok(())
}

/// Kantorovich distance between two probability vectors.
pub fn kr_distance(space: &FiniteMetricSpace, p: &[Rational], q: &[Rational]) -> Result<Rational> {
    check_probability(p, space.len())?;
    check_probability(q, space.len())?;
    let diff: Vec<Rational> = p.iter().zip(q).map(|(a, b)| a - b).collect();
    kr_norm(space, &SignedMeasure::from_dense(&diff)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairProfile {
    pub x: usize,
    pub y: usize,
    /// `q(e_{x,y}) = min_c ‖e_{x,y} + c v‖_KR`.
    pub quotient: Rational,
    pub minimizer: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientReport {
    /// No compatible seminorm vanishes on `v`.
    pub solid_against_v: bool,
    /// First pair (lexicographic, `x < y`) with `q(e_{x,y}) < ρ(x,y)`.
    pub witness_pair: Option<(usize, usize)>,
    pub profile: Vec<PairProfile>,
}

/// Decides whether some compatible seminorm vanishes on `v`, via the
/// quotient `q(w) = min_c ‖w + c v‖_KR`, which dominates every such
/// seminorm. The minimization is an LP over the Lipschitz-polytope vertices.
pub fn quotient_seminorm_check(
    space: &FiniteMetricSpace,
    v: &SignedMeasure,
) -> Result<QuotientReport> {
    check_measure(space, v)?;
    if v.is_zero() {
        return Err(Error::Precondition("direction v must be nonzero".into()));
    }
    check_enumerable(space)?;
    let n = space.len();
    let vertices: Vec<Vec<Rational>> = enumerate_vertices(&lipschitz_polytope(space))?
        .into_iter()
        .map(|s| {
            let mut f = vec![Rational::zero()];
            f.extend(s);
            f
        })
        .collect();
    let fv: Vec<Rational> = vertices.iter().map(|f| v.pair_with(f)).collect();

    let mut profile = Vec::new();
    let mut witness_pair = None;
    for x in 0..n {
        for y in x + 1..n {
            let w = SignedMeasure::elementary(x, y);
            // min t  s.t.  t − (f·v) c ≥ f·w  for every vertex f.
            let mut lp = LinearProgram::minimize(vec![Rational::zero(), Rational::one()]);
            lp.set_bound(0, VarBound::Free);
            for (f, fdotv) in vertices.iter().zip(&fv) {
                lp.add_constraint(
                    vec![-fdotv.clone(), Rational::one()],
                    Relation::Ge,
                    w.pair_with(f),
                );
            }
            let (quotient, minimizer) = match lp_solve(&lp)? {
                LpOutcome::Optimal { optimum, witness } => (optimum, witness[0].clone()),
                other => return Err(Error::Invariant(format!("quotient LP returned {other:?}"))),
            };
            if witness_pair.is_none() && quotient < *space.dist(x, y) {
                witness_pair = Some((x, y));
            }
            profile.push(PairProfile {
                x,
                y,
                quotient,
                minimizer,
            });
        }
    }
    Ok(QuotientReport {
        solid_against_v: witness_pair.is_some(),
        witness_pair,
        profile,
    })
}
