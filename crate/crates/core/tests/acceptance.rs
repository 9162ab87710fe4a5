//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report reads top to bottom; the
//! process exits non-zero if any criterion fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use metric_curv::certifier::{certify, defect_profile, defect_profile_for, Verdict};
use metric_curv::circumradius::{circumcenter_candidates, linf_circumcenter};
use metric_curv::counterexample::{self, STRICT_MARGIN};
use metric_curv::lp::lp_distance;
use metric_curv::metric::{
    from_graph, sample_space, FiniteMetricSpace, GeneratorKind, GeneratorSpec,
};
use metric_curv::model::{comparison_triangle, euclidean_circumradius, Kappa, ModelPoint};
use metric_curv::parallel::with_threads;
use metric_curv::report::Report;
use metric_curv::{
    delta_four_point, relaxed_npc_bound_check, CurvatureQuery, Direction, SideLengths, Triple,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn k(x: f64) -> Kappa {
    Kappa::new(x).unwrap()
}

fn sample(kind: GeneratorKind, seed: u64) -> FiniteMetricSpace {
    sample_space(&GeneratorSpec::new(kind, seed)).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn closed_form_vs_grid_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut triples = Vec::new();
    while triples.len() < 1000 {
        let s = [0, 1, 2].map(|_| rng.random_range(0.05..2.0));
        let sides = SideLengths::new(s[0], s[1], s[2]);
        if sides.a < sides.b + sides.c {
            triples.push(sides);
        }
    }
    let start = Instant::now();
    let closed: Vec<f64> = triples
        .iter()
        .map(|t| euclidean_circumradius(t).map(|r| r.radius))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let closed_secs = start.elapsed().as_secs_f64();
    let widths = triples
        .par_iter()
        .zip(&closed)
        .map(|(sides, &r)| {
            let tri = comparison_triangle(sides, Kappa::ZERO).map_err(|e| e.to_string())?;
            let verts: Vec<[f64; 2]> = tri
                .vertices
                .iter()
                .map(|v| match v {
                    ModelPoint::Euclidean(c) => *c,
                    _ => unreachable!(),
                })
                .collect();
            let (lower, upper) = minmax_bracket(&verts, 2.0, 1e-7);
            ensure(r >= lower - 1e-6 && r <= upper + 1e-6, || {
                format!("sides {sides:?}: closed form {r}, oracle [{lower}, {upper}]")
            })?;
            Ok(upper - lower)
        })
        .collect::<Result<Vec<f64>, String>>()?;
    let worst = widths.iter().copied().fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!(
        "1000 triangles inside oracle brackets of width <= {worst:.1e}; {secs:.2} s ({closed_secs:.1e} s closed form)"
    ))
}

fn curv(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_curv"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn lp_counterexamples() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for p in [4.0, 1.5] {
        let o = counterexample::evaluate(p).map_err(|e| e.to_string())?;
        ensure(o.r_space >= 1.0 + STRICT_MARGIN, || {
            format!("p {p}: r = {}", o.r_space)
        })?;
        ensure((o.r_model - 1.0).abs() <= 1e-12, || {
            format!("p {p}: r_model {}", o.r_model)
        })?;
        let s2 = std::f64::consts::SQRT_2;
        ensure(
            (o.sides[0] - s2).abs() <= 1e-12
                && (o.sides[1] - s2).abs() <= 1e-12
                && (o.sides[2] - 2.0).abs() <= 1e-12,
            || format!("p {p}: sides {:?}", o.sides),
        )?;

        let fixture = dir.path().join(format!("l{p}.pts"));
        let report = dir.path().join(format!("l{p}.json"));
        let (code, _) = curv(&[
            "counterexample",
            "--p",
            &p.to_string(),
            "--write-fixture",
            fixture.to_str().unwrap(),
        ]);
        ensure(code == 0, || format!("p {p}: counterexample exited {code}"))?;
        let (code, _) = curv(&[
            "certify",
            fixture.to_str().unwrap(),
            "--kappa",
            "0",
            "--direction",
            "upper",
            "--epsilon",
            "0",
            "--json",
            report.to_str().unwrap(),
        ]);
        ensure(code == 1, || format!("p {p}: certify exited {code}"))?;
        let r = Report::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
        let labels = r
            .witnesses
            .first()
            .map(|w| w.labels.clone())
            .unwrap_or_default();
        ensure(labels == ["A'", "B", "C"], || {
            format!("p {p}: witness {labels:?}")
        })?;
        parts.push(format!("p={p}: r={:.6}", o.r_space));
    }
    Ok(format!(
        "{}; certify exits 1 with witness (A', B, C)",
        parts.join(", ")
    ))
}

fn max_norm_claim() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for d in 1..=8 {
        for _ in 0..500 {
            let pts: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..d).map(|_| rng.random_range(-5.0..5.0)).collect())
                .collect();
            let r = linf_circumcenter([&pts[0], &pts[1], &pts[2]]).radius;
            let longest = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| lp_distance(&pts[i], &pts[j], f64::INFINITY))
                .fold(0.0, f64::max);
            worst = worst.max((r - 0.5 * longest).abs());
        }
    }
    ensure(worst <= 1e-12, || {
        format!("radius differs from half the longest side by {worst:e}")
    })?;
    let mut samples = 0;
    for d in 1..=8 {
        for seed in 0..3 {
            let s = sample(
                GeneratorKind::Lp {
                    p: f64::INFINITY,
                    n: 20,
                    half_width: 1.0,
                    dim: d,
                },
                seed,
            );
            let q = CurvatureQuery::upper(Kappa::ZERO)
                .with_candidates(circumcenter_candidates(&s).map_err(|e| e.to_string())?);
            let v = certify(&s, &q).map_err(|e| e.to_string())?;
            ensure(v.holds, || {
                format!("dim {d} seed {seed}: fails with {:?}", v.witness)
            })?;
            samples += 1;
        }
    }
    Ok(format!(
        "4000 triples, max error {worst:.1e}; Curv <= 0 holds on {samples} augmented samples"
    ))
}

fn lower_bound_on_model_samples() -> Check {
    let cases: [(&str, GeneratorKind, f64, f64); 3] = [
        (
            "sphere",
            GeneratorKind::Sphere { kappa: 1.0, n: 40 },
            1.0,
            0.1,
        ),
        (
            "euclidean",
            GeneratorKind::Euclidean { dim: 2, n: 60 },
            0.0,
            1e-9,
        ),
        (
            "hyperbolic",
            GeneratorKind::Hyperbolic {
                kappa: -1.0,
                n: 40,
                radius: None,
            },
            -1.0,
            1e-9,
        ),
    ];
    let mut parts = Vec::new();
    for (name, kind, kappa, margin) in cases {
        let mut worst = 0.0_f64;
        let mut slowest = Duration::ZERO;
        let mut skipped = 0;
        for seed in 0..5 {
            let s = sample(kind.clone(), seed);
            let q = CurvatureQuery::lower(k(kappa))
                .with_epsilon(1e-9)
                .with_large_triangle_margin(margin);
            let (v, t) = timed(|| certify(&s, &q));
            let v = v.map_err(|e| e.to_string())?;
            ensure(v.holds, || format!("{name} seed {seed}: {:?}", v.witness))?;
            ensure(t.as_secs_f64() < 10.0, || {
                format!("{name} seed {seed}: {t:?}")
            })?;
            worst = worst.max(v.epsilon_star_lower);
            slowest = slowest.max(t);
            skipped += v.skipped;
        }
        parts.push(format!(
            "{name}: max violation {worst:.1e} ({skipped} skipped, {:.2} s)",
            slowest.as_secs_f64()
        ));
    }
    Ok(parts.join("; "))
}

fn upper(s: &FiniteMetricSpace) -> Result<Verdict, String> {
    certify(s, &CurvatureQuery::upper(Kappa::ZERO)).map_err(|e| e.to_string())
}

fn tree_discretization() -> Check {
    let mut runs = 0;
    for n in [8, 20, 40] {
        for seed in 0..4 {
            let mut prev = f64::INFINITY;
            for depth in 0..3u32 {
                let h = 1.0 / f64::from(1u32 << depth);
                let s = sample(
                    GeneratorKind::Tree {
                        n,
                        subdivision: depth,
                        edge_length: 1.0,
                    },
                    seed,
                );
                let e = upper(&s)?.epsilon_star_upper;
                ensure(e <= 0.5 * h + 1e-9, || {
                    format!("n {n} seed {seed} h {h}: eps* {e}")
                })?;
                ensure(e <= prev + 1e-12, || {
                    format!("n {n} seed {seed}: eps* rose from {prev} to {e} at h {h}")
                })?;
                prev = e;
                runs += 1;
            }
        }
    }
    Ok(format!(
        "{runs} subdivided trees, eps* <= h/2 and nonincreasing in depth"
    ))
}

fn relaxed_bound_on_graphs() -> Check {
    let mut corpus: Vec<(String, Vec<(usize, usize, f64)>, bool)> = Vec::new();
    for n in [5, 10, 20, 40] {
        for (seed, depth) in [(0, 0), (1, 0), (2, 1)] {
            let s = sample(
                GeneratorKind::Tree {
                    n,
                    subdivision: depth,
                    edge_length: 1.0,
                },
                seed,
            );
            let h = 1.0 / f64::from(1u32 << depth);
            // a tree metric is its own graph on the edges of length h
            let edges = (0..s.n())
                .flat_map(|i| (i + 1..s.n()).map(move |j| (i, j)))
                .filter(|&(i, j)| s.d(i, j) == h)
                .map(|(i, j)| (i, j, h))
                .collect();
            corpus.push((format!("tree n={n} k={depth} seed={seed}"), edges, true));
        }
    }
    for n in 3..=30 {
        corpus.push((format!("cycle {n}"), cycle_edges(n), false));
    }
    for w in 1..=6 {
        for h in w.max(2)..=6 {
            corpus.push((format!("grid {w}x{h}"), grid_edges(w, h), w == 1));
        }
    }
    for seed in 0..20 {
        let n = 5 + (seed as usize % 21);
        corpus.push((
            format!("random n={n} seed={seed}"),
            random_connected_graph(n, seed),
            false,
        ));
    }
    let mut min_slack = f64::INFINITY;
    for (name, edges, is_tree) in &corpus {
        let s = from_graph(edges).map_err(|e| e.to_string())?;
        let h = edges.iter().map(|e| e.2).fold(0.0, f64::max);
        let r = relaxed_npc_bound_check(&s, h).map_err(|e| e.to_string())?;
        ensure(r.slack >= -1e-12, || {
            format!(
                "{name}: eps* {} > 2 delta + h = {}",
                r.epsilon_star_upper,
                r.two_delta + h
            )
        })?;
        if *is_tree {
            ensure(r.delta.delta == 0.0, || {
                format!("{name}: delta {}", r.delta.delta)
            })?;
        }
        min_slack = min_slack.min(r.slack);
    }
    Ok(format!(
        "{} graphs, smallest slack {min_slack:.3e}, delta = 0 on every tree",
        corpus.len()
    ))
}

fn brute_force_equivalence() -> Check {
    let mut checked = 0;
    for seed in 0..50u64 {
        let n = 3 + (seed as usize % 8);
        let s = random_metric(n, seed);
        for kappa in [0.0, -1.0, 0.25] {
            let all = brute_defects(&s, kappa, 0.0);
            let up = brute_extreme(&all, true);
            let lo = brute_extreme(&all, false);
            let skipped = all.iter().filter(|d| d.is_none()).count();
            for (dir, eps) in [
                (Direction::Upper, 0.0),
                (Direction::Lower, 0.0),
                (Direction::Upper, 0.3),
            ] {
                let q = CurvatureQuery::new(k(kappa), dir).with_epsilon(eps);
                let v = certify(&s, &q).map_err(|e| e.to_string())?;
                let (need, worst) = match dir {
                    Direction::Upper => (up.map_or(0.0, |d| d.defect.max(0.0)), up),
                    Direction::Lower => (lo.map_or(0.0, |d| (-d.defect).max(0.0)), lo),
                };
                let holds = need <= eps + 1e-12;
                let ctx = format!("seed {seed} kappa {kappa} {dir}");
                ensure(v.holds == holds, || {
                    format!("{ctx}: verdict {} vs {holds}", v.holds)
                })?;
                ensure(v.skipped == skipped, || {
                    format!("{ctx}: skipped {}", v.skipped)
                })?;
                ensure((v.epsilon_needed - need).abs() <= 1e-12, || {
                    format!("{ctx}: eps {} vs {need}", v.epsilon_needed)
                })?;
                let expect = if holds { None } else { worst.map(|d| d.triple) };
                let got = v.witness.map(|d| d.triple.indices());
                ensure(got == expect, || {
                    format!("{ctx}: witness {got:?} vs {expect:?}")
                })?;
                if let (Some(a), Some(b)) = (v.witness, worst) {
                    ensure((a.defect - b.defect).abs() <= 1e-12, || {
                        format!("{ctx}: defect")
                    })?;
                }
            }
            let grid = [0.0, 1.0, 2.0, 3.0];
            let prof = defect_profile(&s, k(kappa), &grid).map_err(|e| e.to_string())?;
            for (bp, &beta) in prof.beta_curve.iter().zip(&grid) {
                let sub = brute_defects(&s, kappa, beta);
                let e_up = sub
                    .iter()
                    .flatten()
                    .map(|d| d.defect.max(0.0))
                    .fold(0.0, f64::max);
                let e_lo = sub
                    .iter()
                    .flatten()
                    .map(|d| (-d.defect).max(0.0))
                    .fold(0.0, f64::max);
                let count = sub.iter().flatten().count();
                ensure(
                    bp.triples == count
                        && (bp.epsilon_upper - e_up).abs() <= 1e-12
                        && (bp.epsilon_lower - e_lo).abs() <= 1e-12,
                    || {
                        format!("seed {seed} kappa {kappa} beta {beta}: {bp:?} vs ({e_up}, {e_lo}, {count})")
                    },
                )?;
            }
            for (d, b) in prof.defects.iter().zip(all.iter().flatten()) {
                ensure(
                    d.triple.indices() == b.triple && (d.defect - b.defect).abs() <= 1e-12,
                    || format!("seed {seed} kappa {kappa}: {d:?} vs {b:?}"),
                )?;
            }
        }
        let (delta, witness) = brute_delta(&s);
        let r = delta_four_point(&s);
        ensure(
            (r.delta - delta).abs() <= 1e-12 && r.witness == Some(witness),
            || format!("seed {seed}: delta {:?} vs ({delta}, {witness:?})", r),
        )?;
        checked += 1;
    }
    Ok(format!(
        "{checked} spaces x 3 curvatures: verdicts, witnesses, profiles and delta agree"
    ))
}

fn invariance() -> Check {
    let spaces: Vec<(String, FiniteMetricSpace)> = vec![
        ("random metric".into(), random_metric(9, 7)),
        (
            "euclidean".into(),
            sample(GeneratorKind::Euclidean { dim: 3, n: 15 }, 2),
        ),
        (
            "tree".into(),
            sample(
                GeneratorKind::Tree {
                    n: 8,
                    subdivision: 1,
                    edge_length: 1.0,
                },
                5,
            ),
        ),
        (
            "random graph".into(),
            from_graph(&random_connected_graph(14, 3)).unwrap(),
        ),
    ];
    // scaling
    for (name, s) in &spaces {
        for dir in [Direction::Upper, Direction::Lower] {
            let base = certify(s, &CurvatureQuery::new(Kappa::ZERO, dir)).unwrap();
            for frac in [0.0, 0.5, 2.0] {
                let eps = frac * base.epsilon_needed;
                let want = certify(s, &CurvatureQuery::new(Kappa::ZERO, dir).with_epsilon(eps))
                    .unwrap()
                    .holds;
                for lambda in [1e-3, 1.0, 1e3] {
                    let q = CurvatureQuery::new(Kappa::ZERO, dir).with_epsilon(lambda * eps);
                    let v = certify(&s.scaled(lambda), &q).unwrap();
                    ensure(v.holds == want, || {
                        format!(
                            "{name} {dir} eps {eps} lambda {lambda}: {} vs {want}",
                            v.holds
                        )
                    })?;
                    let rel = (v.epsilon_needed - lambda * base.epsilon_needed).abs()
                        / (lambda * base.epsilon_needed).max(f64::MIN_POSITIVE);
                    ensure(base.epsilon_needed == 0.0 || rel <= 1e-9, || {
                        format!("{name} {dir} lambda {lambda}: eps* off by {rel:e}")
                    })?;
                }
            }
        }
    }
    // relabeling
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, s) in &spaces {
        let n = s.n();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let t = s.permuted(&perm);
        for dir in [Direction::Upper, Direction::Lower] {
            let q = CurvatureQuery::new(Kappa::ZERO, dir);
            let (a, b) = (certify(s, &q).unwrap(), certify(&t, &q).unwrap());
            ensure(
                a.holds == b.holds
                    && a.epsilon_star_upper == b.epsilon_star_upper
                    && a.epsilon_star_lower == b.epsilon_star_lower,
                || format!("{name} {dir}: {a:?} vs {b:?}"),
            )?;
        }
        let (pa, pb) = (
            defect_profile(s, Kappa::ZERO, &[0.0, 0.5, 1.0]).unwrap(),
            defect_profile(&t, Kappa::ZERO, &[0.0, 0.5, 1.0]).unwrap(),
        );
        ensure(
            pa.beta_curve == pb.beta_curve && pa.histogram == pb.histogram,
            || format!("{name}: profiles differ"),
        )?;
        ensure(
            delta_four_point(s).delta == delta_four_point(&t).delta,
            || format!("{name}: delta differs"),
        )?;
    }
    // relabeling maps the witness of a tie-free space along with the points
    let s = &spaces[0].1;
    let n = s.n();
    let perm: Vec<usize> = (0..n).rev().collect();
    let t = s.permuted(&perm);
    let wa = upper(s)?.witness.map(|d| d.triple);
    let wb = upper(&t)?.witness.map(|d| d.triple);
    let mapped = wb.map(|w| {
        let [i, j, kk] = w.indices();
        Triple::new(perm[i], perm[j], perm[kk])
    });
    ensure(wa == mapped, || {
        format!("witness {wa:?} vs relabeled {mapped:?}")
    })?;
    // thread counts
    for (name, s) in &spaces {
        let run = |threads| {
            with_threads(Some(threads), || {
                let q = CurvatureQuery::upper(Kappa::ZERO);
                (
                    certify(s, &q).unwrap(),
                    defect_profile_for(s, &q, &[0.0, 0.5]).unwrap(),
                    delta_four_point(s),
                )
            })
        };
        let one = run(1);
        for threads in [4, 8] {
            ensure(run(threads) == one, || {
                format!("{name}: {threads} threads differ")
            })?;
        }
    }
    Ok(format!(
        "{} spaces: scaling, relabeling and 1/4/8 threads",
        spaces.len()
    ))
}

fn performance() -> Check {
    let s = sample(GeneratorKind::Euclidean { dim: 2, n: 100 }, 42);
    let (v, t_cert) = timed(|| upper(&s));
    let v = v?;
    ensure(v.evaluated == 161_700, || {
        format!("{} triangles", v.evaluated)
    })?;
    ensure(t_cert.as_secs_f64() < 30.0, || {
        format!("certify took {t_cert:?}")
    })?;
    let s60 = sample(GeneratorKind::Euclidean { dim: 2, n: 60 }, 43);
    let (_, t_delta) = timed(|| delta_four_point(&s60));
    ensure(t_delta.as_secs_f64() < 20.0, || {
        format!("delta took {t_delta:?}")
    })?;
    Ok(format!(
        "certify n=100: {:.3} s; delta n=60: {:.3} s",
        t_cert.as_secs_f64(),
        t_delta.as_secs_f64()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        (
            "flat circumradius matches the grid oracle",
            closed_form_vs_grid_oracle,
        ),
        (
            "l_4 and l_1.5 triangles violate Curv <= 0",
            lp_counterexamples,
        ),
        (
            "l_inf circumcenters and Curv <= 0 on l_inf samples",
            max_norm_claim,
        ),
        (
            "model samples satisfy their lower bound",
            lower_bound_on_model_samples,
        ),
        ("subdivided trees: eps* <= h/2", tree_discretization),
        ("graph corpus: eps* <= 2 delta + h", relaxed_bound_on_graphs),
        ("pipeline equals brute force", brute_force_equivalence),
        ("scale, relabel and thread invariance", invariance),
        ("performance at n = 100 and n = 60", performance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{secs:.2} s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
