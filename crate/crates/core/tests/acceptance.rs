//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigidlab::cli;
use rigidlab::cone::{cone_extremality, search_extremal, Semimetric};
use rigidlab::constructions::{
    additive_realization, derive_seed, grow_universal, katetov_extend, pierce_face, random_metric,
    rigidify, DistanceConstraint, GrowOptions, RandomModel, RigidifyOptions,
};
use rigidlab::exactgeom::hull::hull_membership;
use rigidlab::lipschitz::{
    enumerate_extremal, integer_ray_representative, is_extremal_tight_graph, is_polytope_vertex,
    lipschitz_constant, representability_defect,
};
use rigidlab::metric::{fundamental_vertices, lemma1_check, validate_metric, CandidateVertexData};
use rigidlab::norms::{dp_norm, hk_norm, kr_norm_dual, kr_norm_primal};
use rigidlab::rational::{int, ratio};
use rigidlab::rigidity::{random_measure_on, rigidity_defect, wlr_check};
use rigidlab::{FiniteMetricSpace, LipschitzFunction, Rational, Result, SignedMeasure};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn sized_space(seed: u64, model: RandomModel) -> FiniteMetricSpace {
    let n = 2 + (derive_seed(seed, 1000) % 5) as usize;
    random_metric(n, model, seed).expect("random metric")
}

fn corpus(base: u64, count: u64) -> Vec<FiniteMetricSpace> {
    (0..count)
        .map(|k| sized_space(derive_seed(base, k), RandomModel::ShortestPathCompletion))
        .collect()
}

fn all_points(s: &FiniteMetricSpace) -> Vec<usize> {
    (0..s.len()).collect()
}

fn dense(mu: &SignedMeasure, n: usize) -> Vec<Rational> {
    mu.to_dense(n)
}

fn compatibility() -> Result<Outcome> {
    let mut checked = 0;
    let mut failures = 0;
    for s in corpus(1, 200) {
        for x in 0..s.len() {
            for y in 0..s.len() {
                if x == y {
                    continue;
                }
                let e = SignedMeasure::elementary(x, y);
                let want = s.dist(x, y);
                let values = [
                    kr_norm_primal(&s, &e)?.value,
                    kr_norm_dual(&s, &e)?.value,
                    hk_norm(&s, &e)?.value,
                    dp_norm(&s, &e)?.value,
                ];
                checked += 1;
                if values.iter().any(|v| v != want) {
                    failures += 1;
                }
            }
        }
    }
    Ok(outcome(
        failures == 0,
        format!("{checked} elementary measures, {failures} mismatches"),
    ))
}

fn measure_corpus() -> Vec<(FiniteMetricSpace, SignedMeasure)> {
    corpus(2, 200)
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(3, k as u64));
            let mut mu = random_measure_on(&all_points(&s), &mut rng);
            if mu.is_zero() {
                mu = SignedMeasure::elementary(0, 1);
            }
            (s, mu)
        })
        .collect()
}

fn duality() -> Result<Outcome> {
    let mut failures = 0;
    let corpus = measure_corpus();
    for (s, mu) in &corpus {
        let p = kr_norm_primal(s, mu)?;
        let d = kr_norm_dual(s, mu)?;
        if p.value != d.value || !p.recheck(s, mu, None) || !d.recheck(s, mu, None) {
            failures += 1;
        }
    }
    Ok(outcome(
        failures == 0,
        format!("{} pairs, {failures} gaps", corpus.len()),
    ))
}

fn maximality() -> Result<Outcome> {
    let mut order_failures = 0;
    let mut vertex_failures = 0;
    let mut hull_failures = 0;
    let mut vertices_checked = 0;
    let corpus = measure_corpus();
    for (s, mu) in &corpus {
        let kr = kr_norm_primal(s, mu)?.value;
        if hk_norm(s, mu)?.value > kr || dp_norm(s, mu)?.value > kr {
            order_failures += 1;
        }
        let vertices: Vec<SignedMeasure> = fundamental_vertices(s)
            .into_iter()
            .map(|(_, v)| v)
            .collect();
        for v in &vertices {
            vertices_checked += 1;
            if !kr_norm_primal(s, v)?.value.is_one() {
                vertex_failures += 1;
            }
        }
        let generators: Vec<Vec<Rational>> = vertices.iter().map(|v| dense(v, s.len())).collect();
        let unit = mu.scaled(&kr.recip());
        if !hull_membership(&dense(&unit, s.len()), &generators)?.is_inside() {
            hull_failures += 1;
        }
    }
    Ok(outcome(
        order_failures + vertex_failures + hull_failures == 0,
        format!(
            "{} measures: {order_failures} order violations, {vertices_checked} vertices with {vertex_failures} off the unit sphere, {hull_failures} unit measures outside the hull",
            corpus.len()
        ),
    ))
}

fn candidate_hull_equivalence() -> Result<Outcome> {
    let mut disagreements = 0;
    let mut metric_cases = 0;
    for k in 0..500u64 {
        let seed = derive_seed(4, k);
        let n = 2 + (seed % 5) as usize;
        let rho = if k % 2 == 0 {
            random_metric(n, RandomModel::ShortestPathCompletion, seed)?
                .matrix()
                .to_vec()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut d = vec![vec![Rational::zero(); n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = ratio(rng.gen_range(1..=8), rng.gen_range(1..=3));
                    d[i][j] = v.clone();
                    d[j][i] = v;
                }
            }
            d
        };
        let r = lemma1_check(&CandidateVertexData::from_distances(&rho)?)?;
        metric_cases += usize::from(r.is_metric);
        if !r.agreement || r.is_metric != r.hull_condition {
            disagreements += 1;
        }
    }
    let bad = vec![
        vec![int(0), int(1), int(3)],
        vec![int(1), int(0), int(1)],
        vec![int(3), int(1), int(0)],
    ];
    let witness = lemma1_check(&CandidateVertexData::from_distances(&bad)?)?.witness;
    let sum = witness.as_ref().and_then(|w| w.coefficient_sum.clone());
    let sum_ok = sum == Some(ratio(2, 3));
    Ok(outcome(
        disagreements == 0 && sum_ok,
        format!(
            "500 candidates ({metric_cases} metric), {disagreements} disagreements; violating triangle coefficient sum {}",
            sum.map_or("missing".to_string(), |s| s.to_string())
        ),
    ))
}

fn extremality_cross_validation() -> Result<Outcome> {
    let mut disagreements = 0;
    let mut vertices_checked = 0;
    let mut others_checked = 0;
    let mut non_vertices = 0;
    let mut short_spaces = 0;
    let mut two_point_spaces = 0;
    for (k, s) in corpus(5, 100).into_iter().enumerate() {
        let vertices = enumerate_extremal(&s)?;
        for f in &vertices {
            vertices_checked += 1;
            if !is_extremal_tight_graph(&s, f)?.verdict || !is_polytope_vertex(&s, f)? {
                disagreements += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(6, k as u64));
        let mut found = 0;
        let mut attempts = 0;
        while found < 50 && attempts < 2000 {
            attempts += 1;
            let picks = rng.gen_range(2..=3);
            let mut acc = vec![Rational::zero(); s.len()];
            let mut total = Rational::zero();
            for _ in 0..picks {
                let v = &vertices[rng.gen_range(0..vertices.len())];
                let w = int(rng.gen_range(1..=5));
                for (a, x) in acc.iter_mut().zip(v.values()) {
                    *a += x * &w;
                }
                total += w;
            }
            let f = LipschitzFunction::new(acc.into_iter().map(|a| a / &total).collect());
            let lip = lipschitz_constant(&s, &f)?;
            if lip.is_zero() {
                continue;
            }
            let f = f.scaled(&lip.recip());
            others_checked += 1;
            let vertex = is_polytope_vertex(&s, &f)?;
            found += usize::from(!vertex);
            if is_extremal_tight_graph(&s, &f)?.verdict != vertex {
                disagreements += 1;
            }
        }
        non_vertices += found;
        // On two points the unit sphere of the quotient consists of the two
        // vertices alone, so no non-vertex sample exists there.
        if found < 50 {
            if s.len() == 2 {
                two_point_spaces += 1;
            } else {
                short_spaces += 1;
            }
        }
    }
    Ok(outcome(
        disagreements == 0 && short_spaces == 0,
        format!(
            "{vertices_checked} vertices, {others_checked} rescaled convex combinations including {non_vertices} non-vertices, {disagreements} disagreements; {short_spaces} spaces short of 50 non-vertices besides {two_point_spaces} two-point spaces"
        ),
    ))
}

fn wlr_ground_truths() -> Result<Outcome> {
    let mut failures = 0;
    for k in 0..200 {
        let s = random_metric(3, RandomModel::ShortestPathCompletion, derive_seed(7, k))?;
        failures += usize::from(!wlr_check(&s)?.verdict);
    }
    for k in 0..20 {
        let s = random_metric(4, RandomModel::StarFamily, derive_seed(8, k))?;
        failures += usize::from(!wlr_check(&s)?.verdict);
    }
    for k in 1..=10 {
        let s = FiniteMetricSpace::uniform(2, ratio(k, 3))?;
        failures += usize::from(!wlr_check(&s)?.verdict);
    }
    let eq = FiniteMetricSpace::uniform(3, int(1))?;
    let mu = SignedMeasure::from_dense(&[int(-2), int(1), int(1)])?;
    let dp = dp_norm(&eq, &mu)?.value;
    let kr = kr_norm_primal(&eq, &mu)?.value;
    let gap_ok = dp == ratio(3, 2) && kr == int(2);
    Ok(outcome(
        failures == 0 && gap_ok,
        format!("230 spaces, {failures} not WLR; equilateral dp {dp} vs kr {kr}"),
    ))
}

fn rigidity_ground_truths() -> Result<Outcome> {
    let two = FiniteMetricSpace::uniform(2, ratio(7, 2))?;
    let two_defect = rigidity_defect(&two, &[0, 1], &Rational::zero())?.defect;
    let eq = FiniteMetricSpace::uniform(3, int(1))?;
    let f_all = all_points(&eq);
    let eq_defect = rigidity_defect(&eq, &f_all, &Rational::zero())?.defect;

    // Realize the current worst function until none is left; every tied
    // maximizer has to be realized before the maximum can move.
    let mut host = eq.clone();
    let mut realized = 0;
    let mut own_defects_zero = true;
    let final_defect = loop {
        let report = rigidity_defect(&host, &f_all, &Rational::zero())?;
        let Some(d) = report.defect.clone() else {
            break None;
        };
        if d.is_zero() || realized > 8 {
            break Some(d);
        }
        let f = report
            .certificate
            .expect("positive defect has a witness")
            .function;
        host = additive_realization(&host, &f_all, &f, DistanceConstraint::RealRational)?.space;
        own_defects_zero &= representability_defect(&host, &f_all, &f, true)?
            .defect
            .is_zero();
        realized += 1;
    };
    let pass = two_defect == Some(Rational::zero())
        && eq_defect == Some(ratio(1, 2))
        && final_defect == Some(Rational::zero())
        && own_defects_zero;
    let show = |d: &Option<Rational>| d.as_ref().map_or("none".into(), |d| d.to_string());
    Ok(outcome(
        pass,
        format!(
            "2-point {}, equilateral {}, after realizing {realized} worst functions {}",
            show(&two_defect),
            show(&eq_defect),
            show(&final_defect)
        ),
    ))
}

fn integer_rays() -> Result<Outcome> {
    let mut failures = 0;
    let mut functions = 0;
    for k in 0..200 {
        let s = sized_space(derive_seed(9, k), RandomModel::IntegerUniform);
        for f in enumerate_extremal(&s)? {
            functions += 1;
            if integer_ray_representative(&s, &f).is_err() {
                failures += 1;
            }
        }
    }
    Ok(outcome(
        failures == 0,
        format!("{functions} extremal functions, {failures} failures"),
    ))
}

fn cone_checks() -> Result<Outcome> {
    let m = |rows: &[[i64; 3]]| -> Result<Semimetric> {
        Semimetric::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    };
    let two = Semimetric::new(vec![vec![int(0), int(5)], vec![int(5), int(0)]])?;
    let two_ok = cone_extremality(&two)?.extremal;
    let eq_dim = cone_extremality(&m(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]])?)?.face_dimension;
    let path_dim = cone_extremality(&m(&[[0, 1, 2], [1, 0, 1], [2, 1, 0]])?)?.face_dimension;
    let mut findings = 0;
    let mut unverified = 0;
    for n in 2..=5 {
        for commensurable in [false, true] {
            for d in search_extremal(n, 200, derive_seed(10, n as u64), commensurable)?.findings {
                findings += 1;
                unverified += usize::from(!cone_extremality(&d)?.extremal);
            }
        }
    }
    Ok(outcome(
        two_ok && eq_dim == 3 && path_dim == 2 && unverified == 0,
        format!(
            "2-point extremal {two_ok}, equilateral face dimension {eq_dim}, path face dimension {path_dim}, {findings} search findings with {unverified} failing re-verification"
        ),
    ))
}

fn isometric_extension(original: &FiniteMetricSpace, grown: &FiniteMetricSpace) -> bool {
    let n = original.len();
    grown.len() > n
        && grown.labels()[..n] == *original.labels()
        && (0..n).all(|i| grown.matrix()[i][..n] == original.matrix()[i][..])
}

fn sound(original: &FiniteMetricSpace, grown: &FiniteMetricSpace) -> Result<bool> {
    Ok(validate_metric(grown.matrix())?.is_none() && isometric_extension(original, grown))
}

fn constructions() -> Result<Outcome> {
    let mut outputs = 0;
    let mut unsound = 0;
    let mut pierce_misses = 0;
    let mut trend_misses = 0;
    let mut monotone_misses = 0;
    let mut record = |ok: bool| {
        outputs += 1;
        unsound += usize::from(!ok);
    };
    for (k, s) in corpus(11, 20).into_iter().enumerate() {
        let points = all_points(&s);
        let x = k % s.len();
        let g = LipschitzFunction::distance(&s, x).shifted(&ratio(1, 3));
        record(sound(
            &s,
            &katetov_extend(&s, &g, DistanceConstraint::RealRational)?,
        )?);
        for f in enumerate_extremal(&s)?.into_iter().take(4) {
            let r = additive_realization(&s, &points, &f, DistanceConstraint::RealRational)?;
            record(sound(&s, &r.space)?);
            let p = pierce_face(&s, &f, true)?;
            record(sound(&s, &p.space)?);
            let one_lip = lipschitz_constant(&p.space, &p.extension)?.is_one();
            if !p.tight_vertex.pair_with(p.extension.values()).is_one() || !one_lip {
                pierce_misses += 1;
            }
        }
    }
    let mut diameters = Vec::new();
    for k in 0..5 {
        let start = random_metric(4, RandomModel::ShortestPathCompletion, derive_seed(12, k))?;
        let options = RigidifyOptions {
            max_rounds: 6,
            seed: derive_seed(13, k),
            ..RigidifyOptions::default()
        };
        let t = rigidify(&start, &ratio(1, 100), &options)?;
        record(sound(&start, &t.space)?);
        let first = &t.rounds[0].diameter;
        let last = &t.rounds[t.rounds.len() - 1].diameter;
        let non_decreasing = t.rounds.windows(2).all(|w| w[0].diameter <= w[1].diameter);
        if !(non_decreasing && last > first) {
            trend_misses += 1;
        }
        diameters.push(format!("{first}->{last}"));
    }
    for (k, constraint) in [
        DistanceConstraint::RealRational,
        DistanceConstraint::RationalAtLeastOne,
        DistanceConstraint::IntegerAtLeastOne,
    ]
    .into_iter()
    .enumerate()
    {
        let start = random_metric(3, RandomModel::IntegerUniform, derive_seed(14, k as u64))?;
        let options = GrowOptions {
            rounds: 3,
            seed: derive_seed(15, k as u64),
            ..GrowOptions::default()
        };
        let t = grow_universal(&start, constraint, &options)?;
        record(sound(&start, &t.space)? && constraint.check_space(&t.space).is_ok());
        if !t
            .rounds
            .windows(2)
            .all(|w| w[1].initial_defect <= w[0].initial_defect)
        {
            monotone_misses += 1;
        }
    }
    Ok(outcome(
        unsound + pierce_misses + trend_misses + monotone_misses == 0,
        format!(
            "{outputs} outputs with {unsound} unsound; {pierce_misses} pierce misses; rigidify diameters [{}]; {monotone_misses} non-monotone grow traces",
            diameters.join(", ")
        ),
    ))
}

fn determinism() -> Result<Outcome> {
    let dir = std::env::temp_dir().join(format!("rigidlab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let eq = dir.join("eq.json");
    std::fs::write(
        &eq,
        r#"{"version":1,"labels":["a","b","c"],"distances":[[0,1,1],[1,0,1],[1,1,0]]}"#,
    )
    .expect("write space");
    let eq = eq.to_str().expect("utf-8 path").to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec![
            "search", "--target", "wlr5plus", "--n", "5", "--budget", "200", "--seed", "1",
        ],
        vec![
            "search",
            "--target",
            "extremal-cone",
            "--n",
            "5",
            "--budget",
            "40",
            "--seed",
            "2",
        ],
        vec![
            "defect",
            &eq,
            "--kind",
            "almost-universality",
            "--seed",
            "7",
        ],
        vec![
            "build",
            &eq,
            "--op",
            "grow",
            "--constraint",
            "integer",
            "--rounds",
            "3",
            "--seed",
            "1",
        ],
        vec![
            "build",
            &eq,
            "--op",
            "rigidify",
            "--epsilon",
            "1/4",
            "--rounds",
            "2",
            "--seed",
            "3",
        ],
        vec!["norms", &eq, "--measure", "-2,1,1"],
    ];
    let mut mismatches = 0;
    for c in &commands {
        let run = |threads: &str| {
            let mut args = vec!["rigidlab", "--omit-timing", "--threads", threads];
            args.extend(c.iter().copied());
            cli::run(args)
        };
        let one = run("1");
        let many = run("6");
        if one != many || one.code != 0 || one.stdout.is_empty() {
            mismatches += 1;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(outcome(
        mismatches == 0,
        format!("{} commands, {mismatches} differing", commands.len()),
    ))
}

fn main() {
    type Criterion = fn() -> Result<Outcome>;
    let criteria: [(&str, Criterion); 11] = [
        (
            "compatibility of kr, hk, dp on elementary measures",
            compatibility,
        ),
        ("transport primal equals Lipschitz dual", duality),
        (
            "kr dominates hk and dp; unit ball is the hull of fundamental vertices",
            maximality,
        ),
        (
            "triangle validity iff hull condition",
            candidate_hull_equivalence,
        ),
        (
            "tight-graph extremality matches polytope vertices",
            extremality_cross_validation,
        ),
        ("WLR ground truths", wlr_ground_truths),
        ("rigidity defect ground truths", rigidity_ground_truths),
        ("integer ray representatives", integer_rays),
        ("semimetric cone extremality", cone_checks),
        ("construction soundness", constructions),
        ("determinism across thread counts", determinism),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let number = k + 1;
        if only.is_some_and(|o| o != number) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {number:>2} {} {name} ({detail}) [{:.2}s]",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
