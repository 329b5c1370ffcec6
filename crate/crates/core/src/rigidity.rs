//! Finite-scale rigidity checks: coincidence of the transport norm with the
//! distance-function and double-point norms, and representability defects.
//!
//! Sampled defects (universality, almost-universality) are lower bounds on
//! a supremum over a polyhedron and are flagged as such in every report.

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactgeom::{hull_membership, vertices_and_rays, HPolytope};
use crate::lipschitz::{
    enumerate_extremal, is_extremal_tight_graph, representability_defect, LipschitzFunction,
    Representation,
};
use crate::metric::{induced_submetric, FiniteMetricSpace, SignedMeasure};
use crate::norms::{dp_norm, hk_norm, kr_norm};
use crate::Rational;

/// Largest subset on which admissible functions are enumerated; bigger
/// subsets are sampled down to this size.
pub const SAMPLE_SUBSET_SIZE: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Wlr,
    DpCoincidence,
    Rigidity,
    Universality,
    AlmostUniversality,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Wlr => "wlr",
            Property::DpCoincidence => "dp-coincidence",
            Property::Rigidity => "rigidity",
            Property::Universality => "universality",
            Property::AlmostUniversality => "almost-universality",
        }
    }
}

/// Evidence attached to a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// The offending or worst function (on the subset, for defects).
    pub function: LipschitzFunction,
    /// Best host approximation of `function`, for defects.
    pub representation: Option<Representation>,
    /// A measure separating two norms, for norm-coincidence checks.
    pub measure: Option<SignedMeasure>,
    /// `(smaller norm, transport norm)` on `measure`.
    pub norms: Option<(Rational, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityReport {
    pub property: Property,
    pub verdict: bool,
    pub defect: Option<Rational>,
    /// The defect is a sampled lower bound rather than an exact value.
    pub lower_bound: bool,
    pub certificate: Option<Witness>,
    pub subset: Vec<usize>,
    pub epsilon: Option<Rational>,
    pub seed: Option<u64>,
    pub sample_size: Option<usize>,
    pub functions_checked: usize,
}

impl RigidityReport {
    fn new(property: Property, verdict: bool) -> Self {
        RigidityReport {
            property,
            verdict,
            defect: None,
            lower_bound: false,
            certificate: None,
            subset: Vec::new(),
            epsilon: None,
            seed: None,
            sample_size: None,
            functions_checked: 0,
        }
    }

    /// Recomputes the certificate against `host` and compares it with the
    /// recorded verdict and values.
    pub fn recheck(&self, host: &FiniteMetricSpace) -> Result<bool> {
        match self.property {
            Property::Wlr | Property::DpCoincidence => {
                let Some(w) = &self.certificate else {
                    return Ok(self.verdict);
                };
                let (Some(mu), Some((small, kr))) = (&w.measure, &w.norms) else {
                    return Ok(false);
                };
                if !is_extremal_tight_graph(host, &w.function)?.verdict {
                    return Ok(false);
                }
                let fresh_small = if self.property == Property::Wlr {
                    hk_norm(host, mu)?.value
                } else {
                    dp_norm(host, mu)?.value
                };
                let fresh_kr = kr_norm(host, mu)?;
                Ok(!self.verdict && fresh_small == *small && fresh_kr == *kr && small < kr)
            }
            Property::Rigidity | Property::Universality | Property::AlmostUniversality => {
                let Some(defect) = &self.defect else {
                    return Ok(false);
                };
                let Some(w) = &self.certificate else {
                    return Ok(defect.is_zero() && self.functions_checked == 0);
                };
                let additive = self.property != Property::Universality;
                let fresh = representability_defect(host, &self.subset, &w.function, additive)?;
                let verdict_ok = match (&self.property, &self.epsilon) {
                    (Property::Rigidity, Some(eps)) => self.verdict == (defect < eps),
                    (Property::Rigidity, None) => false,
                    _ => self.verdict == defect.is_zero(),
                };
                Ok(verdict_ok
                    && fresh.defect == *defect
                    && w.representation.as_ref() == Some(&fresh))
            }
        }
    }
}

/// `Σ e_{i,j}` over tight edges `f(i) − f(j) = ρ(i,j)`. For an extremal
/// `f` this measure exposes `f` alone among 1-Lipschitz functions, so any
/// norm built from functions other than `f` is strictly below the
/// transport norm on it.
pub fn tight_edge_measure(
    space: &FiniteMetricSpace,
    f: &LipschitzFunction,
) -> Result<SignedMeasure> {
    let cert = is_extremal_tight_graph(space, f)?;
    Ok(cert
        .tight_edges
        .iter()
        .fold(SignedMeasure::zero(), |acc, &(i, j)| {
            acc.plus(&SignedMeasure::elementary(i, j))
        }))
}

/// Whether `f` equals `±ρ(x, ·)` up to a constant for some point `x`.
pub fn is_signed_distance_class(space: &FiniteMetricSpace, f: &LipschitzFunction) -> bool {
    (0..space.len()).any(|x| {
        let d = LipschitzFunction::distance(space, x);
        f.same_class(&d) || f.same_class(&d.negated())
    })
}

fn separation_witness(
    space: &FiniteMetricSpace,
    f: &LipschitzFunction,
    smaller: impl Fn(&SignedMeasure) -> Result<Rational>,
) -> Result<Witness> {
    let mu = tight_edge_measure(space, f)?;
    let small = smaller(&mu)?;
    let kr = kr_norm(space, &mu)?;
    if small >= kr {
        return Err(Error::Invariant(format!(
            "tight-edge measure of {:?} does not separate the norms",
            f.values()
        )));
    }
    Ok(Witness {
        function: f.clone(),
        representation: None,
        measure: Some(mu),
        norms: Some((small, kr)),
    })
}

/// Whether the distance-function norm equals the transport norm, i.e.
/// every extremal function is `±ρ(x, ·)` modulo constants. On failure the
/// lexicographically greatest offending function is reported.
pub fn wlr_check(space: &FiniteMetricSpace) -> Result<RigidityReport> {
    let extremal = enumerate_extremal(space)?;
    let failing = extremal
        .iter()
        .rev()
        .find(|f| !is_signed_distance_class(space, f));
    let mut report = RigidityReport::new(Property::Wlr, failing.is_none());
    report.functions_checked = extremal.len();
    if let Some(f) = failing {
        report.certificate = Some(separation_witness(space, f, |mu| {
            Ok(hk_norm(space, mu)?.value)
        })?);
    }
    Ok(report)
}

/// Whether the double-point norm equals the transport norm, decided by
/// hull membership of every extremal function in the double-point family.
pub fn dp_coincidence_check(space: &FiniteMetricSpace) -> Result<RigidityReport> {
    let extremal = enumerate_extremal(space)?;
    let n = space.len();
    let generators: Vec<Vec<Rational>> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .map(|(x, y)| {
            LipschitzFunction::new(crate::norms::double_point(space, x, y))
                .normalized()
                .values()
                .to_vec()
        })
        .collect();
    let mut failing = None;
    for f in extremal.iter().rev() {
        if !hull_membership(f.values(), &generators)?.is_inside() {
            failing = Some(f);
            break;
        }
    }
    let mut report = RigidityReport::new(Property::DpCoincidence, failing.is_none());
    report.functions_checked = extremal.len();
    if let Some(f) = failing {
        report.certificate = Some(separation_witness(space, f, |mu| {
            Ok(dp_norm(space, mu)?.value)
        })?);
    }
    Ok(report)
}

fn worst<'a>(
    candidates: impl Iterator<Item = (&'a LipschitzFunction, Representation)>,
) -> Option<(&'a LipschitzFunction, Representation)> {
    // Ties go to the lexicographically greatest function.
    candidates.fold(None, |best, (f, r)| match best {
        Some((bf, br)) if (br.defect.clone(), bf) > (r.defect.clone(), f) => Some((bf, br)),
        _ => Some((f, r)),
    })
}

fn defects_of<'a>(
    host: &FiniteMetricSpace,
    subset: &[usize],
    functions: &'a [LipschitzFunction],
    additive: bool,
) -> Result<Vec<(&'a LipschitzFunction, Representation)>> {
    functions
        .par_iter()
        .map(|f| Ok((f, representability_defect(host, subset, f, additive)?)))
        .collect()
}

/// Largest additive representability defect over the extremal functions of
/// the subset. The criterion holds at `epsilon` when the defect is below it.
pub fn rigidity_defect(
    host: &FiniteMetricSpace,
    subset: &[usize],
    epsilon: &Rational,
) -> Result<RigidityReport> {
    let sub = induced_submetric(host, subset)?;
    let extremal = enumerate_extremal(&sub)?;
    let scored = defects_of(host, subset, &extremal, true)?;
    let found = worst(scored.into_iter());
    let defect = found
        .as_ref()
        .map_or_else(Rational::zero, |(_, r)| r.defect.clone());
    let mut report = RigidityReport::new(Property::Rigidity, defect < *epsilon);
    report.defect = Some(defect);
    report.subset = subset.to_vec();
    report.epsilon = Some(epsilon.clone());
    report.functions_checked = extremal.len();
    report.certificate = found.map(|(f, r)| Witness {
        function: f.clone(),
        representation: Some(r),
        measure: None,
        norms: None,
    });
    Ok(report)
}

/// Admissible functions on a space: `|f(x) − f(y)| ≤ ρ(x,y) ≤ f(x) + f(y)`.
pub fn admissible_polyhedron(space: &FiniteMetricSpace) -> HPolytope {
    let k = space.len();
    let mut p = HPolytope::new(k);
    let unit = |i: usize, s: i64| {
        let mut row = vec![Rational::zero(); k];
        row[i] += Rational::from_integer(s.into());
        row
    };
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let row: Vec<Rational> = unit(i, 1)
                    .iter()
                    .zip(unit(j, -1))
                    .map(|(a, b)| a + b)
                    .collect();
                p.add_inequality(row, space.dist(i, j).clone());
            }
        }
    }
    for i in 0..k {
        for j in i..k {
            let row: Vec<Rational> = unit(i, -1)
                .iter()
                .zip(unit(j, -1))
                .map(|(a, b)| a + b)
                .collect();
            p.add_inequality(row, -space.dist(i, j).clone());
        }
    }
    p
}

/// Seeded convex combinations of two or three distinct points with small
/// integer weights.
pub(crate) fn random_convex_combinations(
    points: &[Vec<Rational>],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<Rational>> {
    if points.is_empty() {
        return Vec::new();
    }
    let dim = points[0].len();
    (0..count)
        .map(|_| {
            let k = points.len().min(rng.gen_range(2..=3));
            let picks = sample(rng, points.len(), k).into_vec();
            let weights: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=8)).collect();
            let total = Rational::from_integer(weights.iter().sum::<u32>().into());
            let mut out = vec![Rational::zero(); dim];
            for (&p, &w) in picks.iter().zip(&weights) {
                let w = Rational::from_integer(w.into()) / &total;
                for (o, v) in out.iter_mut().zip(&points[p]) {
                    *o += &w * v;
                }
            }
            out
        })
        .collect()
}

/// Maximal 1-Lipschitz extension of values given on `anchors` (positions in
/// `space`) to every point: `g(z) = min_a (g(a) + ρ(a, z))`.
pub fn max_extension(
    space: &FiniteMetricSpace,
    anchors: &[usize],
    values: &[Rational],
) -> Vec<Rational> {
    (0..space.len())
        .map(|z| {
            anchors
                .iter()
                .zip(values)
                .map(|(&a, v)| v + space.dist(a, z))
                .min()
                .expect("anchors are nonempty")
        })
        .collect()
}

/// Sample of functions on `sub`: vertices of the polyhedron built on a
/// (possibly sampled) subset, plus seeded convex combinations, extended to
/// all of `sub` by the maximal extension when the subset was reduced.
fn sample_functions(
    sub: &FiniteMetricSpace,
    sample_size: usize,
    seed: u64,
    vertices_of: impl Fn(&FiniteMetricSpace) -> Result<Vec<Vec<Rational>>>,
) -> Result<Vec<LipschitzFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions: Vec<usize> = if sub.len() > SAMPLE_SUBSET_SIZE {
        let mut p = sample(&mut rng, sub.len(), SAMPLE_SUBSET_SIZE).into_vec();
        p.sort_unstable();
        p
    } else {
        (0..sub.len()).collect()
    };
    let core = induced_submetric(sub, &positions)?;
    let mut points = vertices_of(&core)?;
    let extra = random_convex_combinations(&points, sample_size, &mut rng);
    points.extend(extra);
    Ok(points
        .into_iter()
        .map(|v| {
            if positions.len() == sub.len() {
                LipschitzFunction::new(v)
            } else {
                LipschitzFunction::new(max_extension(sub, &positions, &v))
            }
        })
        .collect())
}

fn sampled_defect(
    property: Property,
    host: &FiniteMetricSpace,
    subset: &[usize],
    sample_size: usize,
    seed: u64,
) -> Result<RigidityReport> {
    let sub = induced_submetric(host, subset)?;
    let additive = property == Property::AlmostUniversality;
    let functions = if additive {
        sample_functions(&sub, sample_size, seed, |core| {
            if core.len() < 2 {
                return Ok(vec![vec![Rational::zero(); core.len()]]);
            }
            Ok(enumerate_extremal(core)?
                .into_iter()
                .map(|f| f.values().to_vec())
                .collect())
        })?
    } else {
        sample_functions(&sub, sample_size, seed, |core| {
            Ok(vertices_and_rays(&admissible_polyhedron(core))?.vertices)
        })?
    };
    let scored = defects_of(host, subset, &functions, additive)?;
    let found = worst(scored.into_iter());
    let defect = found
        .as_ref()
        .map_or_else(Rational::zero, |(_, r)| r.defect.clone());
    let mut report = RigidityReport::new(property, defect.is_zero());
    report.defect = Some(defect);
    report.lower_bound = true;
    report.subset = subset.to_vec();
    report.seed = Some(seed);
    report.sample_size = Some(sample_size);
    report.functions_checked = functions.len();
    report.certificate = found.map(|(f, r)| Witness {
        function: f.clone(),
        representation: Some(r),
        measure: None,
        norms: None,
    });
    Ok(report)
}

/// Lower bound on `sup_f min_x max_{z∈F} |ρ(x,z) − f(z)|` over admissible
/// functions `f` on the subset. The sample depends only on the subset's
/// own metric and the seed, so it is unchanged when the host grows.
pub fn universality_defect(
    host: &FiniteMetricSpace,
    subset: &[usize],
    sample_size: usize,
    seed: u64,
) -> Result<RigidityReport> {
    sampled_defect(Property::Universality, host, subset, sample_size, seed)
}

/// Like [`universality_defect`], over the whole 1-Lipschitz ball on the
/// subset and up to additive constants.
pub fn almost_universality_defect(
    host: &FiniteMetricSpace,
    subset: &[usize],
    sample_size: usize,
    seed: u64,
) -> Result<RigidityReport> {
    sampled_defect(
        Property::AlmostUniversality,
        host,
        subset,
        sample_size,
        seed,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// Zero rigidity defect on the subset, yet `dp < kr` on this measure.
    ZeroDefectNormGap {
        subset: Vec<usize>,
        measure: SignedMeasure,
    },
    /// `dp = kr` on the tight-edge measure of `function`, yet its additive
    /// defect is positive.
    NormEqualityPositiveDefect {
        subset: Vec<usize>,
        function: LipschitzFunction,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub dp_coincidence: bool,
    /// Rigidity defect of each subset, in input order.
    pub defects: Vec<(Vec<usize>, Rational)>,
    pub measures_checked: usize,
    pub functions_checked: usize,
    pub counterexamples: Vec<Counterexample>,
}

/// Seeded zero-mass measure supported on `subset` with integer coefficients
/// in `[-4, 4]`.
pub fn random_measure_on(subset: &[usize], rng: &mut ChaCha8Rng) -> SignedMeasure {
    if subset.len() < 2 {
        return SignedMeasure::zero();
    }
    let mut coeffs: Vec<i64> = (0..subset.len()).map(|_| rng.gen_range(-4..=4)).collect();
    let last = coeffs.len() - 1;
    coeffs[last] = -coeffs[..last].iter().sum::<i64>();
    SignedMeasure::from_entries(
        subset
            .iter()
            .zip(coeffs)
            .map(|(&i, c)| (i, Rational::from_integer(c.into()))),
    )
    .expect("coefficients sum to zero")
}

/// Cross-checks two implications between the double-point norm and
/// additive representability that hold verbatim on finite spaces:
///
/// * zero rigidity defect on `F` forces `dp = kr` on measures supported on `F`;
/// * `dp = kr` on the tight-edge measure of an extremal `f` on `F` forces `f`
///   to be additively representable.
pub fn theorem2_consistency(
    space: &FiniteMetricSpace,
    subsets: &[Vec<usize>],
    measure_sample: usize,
    seed: u64,
) -> Result<ConsistencyReport> {
    let dp_coincidence = dp_coincidence_check(space)?.verdict;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConsistencyReport {
        dp_coincidence,
        defects: Vec::new(),
        measures_checked: 0,
        functions_checked: 0,
        counterexamples: Vec::new(),
    };
    for subset in subsets {
        let rigidity = rigidity_defect(space, subset, &Rational::one())?;
        let defect = rigidity
            .defect
            .clone()
            .expect("rigidity reports carry a defect");
        if defect.is_zero() {
            for _ in 0..measure_sample {
                let mu = random_measure_on(subset, &mut rng);
                report.measures_checked += 1;
                if dp_norm(space, &mu)?.value != kr_norm(space, &mu)? {
                    report
                        .counterexamples
                        .push(Counterexample::ZeroDefectNormGap {
                            subset: subset.clone(),
                            measure: mu,
                        });
                }
            }
        }
        let sub = induced_submetric(space, subset)?;
        for f in enumerate_extremal(&sub)? {
            report.functions_checked += 1;
            let local = tight_edge_measure(&sub, &f)?;
            let mu =
                SignedMeasure::from_entries(local.entries().map(|(i, c)| (subset[i], c.clone())))?;
            if dp_norm(space, &mu)?.value == kr_norm(space, &mu)?
                && !representability_defect(space, subset, &f, true)?
                    .defect
                    .is_zero()
            {
                report
                    .counterexamples
                    .push(Counterexample::NormEqualityPositiveDefect {
                        subset: subset.clone(),
                        function: f,
                    });
            }
        }
        report.defects.push((subset.clone(), defect));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WlrSearch {
    pub samples: usize,
    pub wlr_count: usize,
    /// Distinct WLR spaces found, sorted by distance matrix.
    pub findings: Vec<FiniteMetricSpace>,
}

/// Seeded sampling of random `n`-point spaces, alternating the rational and
/// integer models, collecting those whose distance-function and transport
/// norms coincide. Shards are fixed as in the cone search, so the result
/// does not depend on the thread count.
pub fn wlr_search(n: usize, budget: usize, seed: u64) -> Result<WlrSearch> {
    use crate::cone::SEARCH_SHARDS;
    use crate::constructions::{derive_seed, random_metric, RandomModel};
    if n < 2 {
        return Err(Error::Precondition(
            "search needs at least two points".into(),
        ));
    }
    if n > crate::lipschitz::MAX_POINTS {
        return Err(Error::SizeLimit {
            what: "search size",
            actual: n,
            limit: crate::lipschitz::MAX_POINTS,
        });
    }
    let shards: Vec<Result<(usize, Vec<FiniteMetricSpace>)>> = (0..SEARCH_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let count = budget / SEARCH_SHARDS as usize
                + usize::from((shard as usize) < budget % SEARCH_SHARDS as usize);
            let base = derive_seed(seed, shard);
            let mut hits = 0;
            let mut found = Vec::new();
            for k in 0..count {
                let model = if k % 2 == 0 {
                    RandomModel::ShortestPathCompletion
                } else {
                    RandomModel::IntegerUniform
                };
                let space = random_metric(n, model, derive_seed(base, k as u64))?;
                if wlr_check(&space)?.verdict {
                    hits += 1;
                    found.push(space);
                }
            }
            Ok((hits, found))
        })
        .collect();
    let mut wlr_count = 0;
    let mut findings: Vec<FiniteMetricSpace> = Vec::new();
    for shard in shards {
        let (hits, found) = shard?;
        wlr_count += hits;
        findings.extend(found);
    }
    findings.sort_by(|a, b| a.matrix().cmp(b.matrix()));
    findings.dedup_by(|a, b| a.matrix() == b.matrix());
    Ok(WlrSearch {
        samples: budget,
        wlr_count,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn equilateral() -> FiniteMetricSpace {
        FiniteMetricSpace::uniform(3, int(1)).unwrap()
    }

    fn star(a: i64, b: i64, c: i64) -> FiniteMetricSpace {
        let d = vec![
            vec![0, a + b, a + c, a],
            vec![a + b, 0, b + c, b],
            vec![a + c, b + c, 0, c],
            vec![a, b, c, 0],
        ];
        FiniteMetricSpace::from_matrix(
            d.into_iter()
                .map(|r| r.into_iter().map(int).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn wlr_small_spaces() {
        let two = FiniteMetricSpace::uniform(2, int(5)).unwrap();
        assert!(wlr_check(&two).unwrap().verdict);
        let r = wlr_check(&equilateral()).unwrap();
        assert!(r.verdict);
        assert_eq!(r.functions_checked, 6);
        assert!(wlr_check(&star(1, 1, 1)).unwrap().verdict);
    }

    #[test]
    fn four_point_cycle_is_not_wlr() {
        // Square with unit sides and diagonals 2.
        let d = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]];
        let s = FiniteMetricSpace::from_matrix(
            d.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap();
        let r = wlr_check(&s).unwrap();
        assert!(!r.verdict);
        let w = r.certificate.as_ref().unwrap();
        let (hk, kr) = w.norms.clone().unwrap();
        assert!(hk < kr);
        assert!(r.recheck(&s).unwrap());
    }

    #[test]
    fn dp_coincidence_equilateral() {
        let s = equilateral();
        let r = dp_coincidence_check(&s).unwrap();
        assert!(!r.verdict);
        let w = r.certificate.as_ref().unwrap();
        assert_eq!(w.function, LipschitzFunction::from_integers(&[0, 1, 1]));
        assert_eq!(
            w.measure,
            Some(SignedMeasure::from_dense(&[int(-2), int(1), int(1)]).unwrap())
        );
        assert_eq!(w.norms, Some((ratio(3, 2), int(2))));
        assert!(r.recheck(&s).unwrap());

        let two = FiniteMetricSpace::uniform(2, int(3)).unwrap();
        assert!(dp_coincidence_check(&two).unwrap().verdict);
    }

    #[test]
    fn rigidity_defects() {
        let two = FiniteMetricSpace::uniform(2, int(3)).unwrap();
        assert_eq!(
            rigidity_defect(&two, &[0, 1], &int(1)).unwrap().defect,
            Some(int(0))
        );

        let s = equilateral();
        let r = rigidity_defect(&s, &[0, 1, 2], &ratio(1, 4)).unwrap();
        assert_eq!(r.defect, Some(ratio(1, 2)));
        assert!(!r.verdict);
        assert_eq!(
            r.certificate.as_ref().unwrap().function,
            LipschitzFunction::from_integers(&[0, 1, 0])
        );
        assert!(r.recheck(&s).unwrap());
    }

    #[test]
    fn one_realization_point_leaves_tied_functions() {
        let s = equilateral()
            .extended("z".into(), &[ratio(1, 2), ratio(3, 2), ratio(1, 2)])
            .unwrap();
        let r = rigidity_defect(&s, &[0, 1, 2], &int(1)).unwrap();
        assert_eq!(r.defect, Some(ratio(1, 2)));
        let realized = LipschitzFunction::from_integers(&[0, 1, 0]);
        assert_eq!(
            representability_defect(&s, &[0, 1, 2], &realized, true)
                .unwrap()
                .defect,
            int(0)
        );
    }

    #[test]
    fn sampled_defects() {
        let s = equilateral();
        let u = universality_defect(&s, &[0], 10, 3).unwrap();
        assert_eq!(u.defect, Some(int(0)));
        let u = universality_defect(&s, &[0, 1, 2], 10, 3).unwrap();
        assert!(u.defect.clone().unwrap() > int(0));
        assert!(u.lower_bound);
        assert!(u.recheck(&s).unwrap());
        let a = almost_universality_defect(&s, &[0, 1, 2], 10, 7).unwrap();
        assert!(a.defect.clone().unwrap() >= ratio(1, 2));
        assert!(a.recheck(&s).unwrap());
        assert_eq!(
            a,
            almost_universality_defect(&s, &[0, 1, 2], 10, 7).unwrap()
        );
    }

    #[test]
    fn admissible_vertices_of_equilateral() {
        let p = vertices_and_rays(&admissible_polyhedron(&equilateral())).unwrap();
        assert!(p
            .vertices
            .contains(&vec![ratio(1, 2), ratio(1, 2), ratio(1, 2)]));
        assert!(p.vertices.contains(&vec![int(0), int(1), int(1)]));
        assert!(!p.rays.is_empty());
    }

    #[test]
    fn consistency_harness() {
        let s = equilateral();
        let r = theorem2_consistency(&s, &[vec![0, 1, 2], vec![0, 1]], 5, 1).unwrap();
        assert!(!r.dp_coincidence);
        assert_eq!(r.defects[0].1, ratio(1, 2));
        assert_eq!(r.defects[1].1, int(0));
        assert_eq!(r.measures_checked, 5);
        assert!(r.counterexamples.is_empty());

        let two = FiniteMetricSpace::uniform(2, int(2)).unwrap();
        let r = theorem2_consistency(&two, &[vec![0, 1]], 3, 2).unwrap();
        assert!(r.dp_coincidence);
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn three_point_search_is_all_wlr() {
        let r = wlr_search(3, 24, 4).unwrap();
        assert_eq!(r.samples, 24);
        assert_eq!(r.wlr_count, 24);
        assert!(r.findings.iter().all(|s| wlr_check(s).unwrap().verdict));
    }
}
