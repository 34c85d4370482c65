//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simhyp::actions::{parse_actions, ActionSpace};
use simhyp::census::{
    ball_count, density_bound_from_extension_set, PRINTED_LIMIT, density_table, example_4_9_report, exact_non_sh_fraction,
    f2_ball_formula, f3_ball_formula, verify_extension_claim, Method, SimulHyperbolic,
};
use simhyp::construct::{
    find_simul_contracting, find_simul_hyperbolic, sc_extension_set, FamilyRoute, DEFAULT_SEARCH_RADIUS,
};
use simhyp::contract::{axis, check_contracting};
use simhyp::group::{random_element, GroupSpec, Letter};
use simhyp::qm::{
    combine_nonvanishing, defect_sample, homogeneity_check, lineal_extension_pick, lineal_focal_extension_set,
    QmEvaluator,
};

use common::*;

const GROWTH_SERIES_MAX: u32 = 12;
const GROWTH_BFS_MAX: u32 = 8;
const GROWTH_TIME: Duration = Duration::from_secs(10);
const NON_SH_MAX: u32 = 8;
const NON_SH_TIME: Duration = Duration::from_secs(120);
const AUDIT_ROWS: u32 = 20;
const AUDIT_BFS: u32 = 6;
const LIMIT_RADIUS: u32 = 30;
const LIMIT_TOLERANCE: (i64, i64) = (1, 1_000_000);
const SH_GAP: (i64, i64) = (1, 5);
const EXTENSION_VERIFY: u32 = 6;
const EXTENSION_BFS_MAX: u32 = 8;
const EXTENSION_SERIES_SPAN: u32 = 20;
const ENGINE_TIME: Duration = Duration::from_secs(5);
const HOMOGENEITY_POWER: u32 = 8;
const QM_SAMPLES: usize = 1000;
const QM_SUITES: usize = 100;
const NOGT_RADIUS: u32 = 6;
const TREE_SAMPLES: usize = 10_000;
const PROJECTION_SAMPLES: usize = 1000;
const BASS_SERRE_EDGES: usize = 8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn big(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

fn frac(p: (i64, i64)) -> BigRational {
    BigRational::new(p.0.into(), p.1.into())
}

fn f2xf3() -> GroupSpec {
    GroupSpec::parse("product(free(2),free(3))").expect("group")
}

fn trees(g: &GroupSpec) -> Vec<ActionSpace> {
    parse_actions(g, "cayley(factor=1); cayley(factor=2)").expect("trees")
}

fn growth() -> Outcome {
    let start = Instant::now();
    for (rank, formula) in [(2u32, f2_ball_formula as fn(u32) -> BigRational), (3, f3_ball_formula)] {
        let g = GroupSpec::free(rank).map_err(err)?;
        for n in 0..=GROWTH_SERIES_MAX {
            let s = ball_count(&g, n, Method::Series).map_err(err)?;
            ensure(big(&s) == formula(n), || format!("F{rank} series ball at n={n}: {s}"))?;
            if n <= GROWTH_BFS_MAX {
                let b = ball_count(&g, n, Method::Bfs).map_err(err)?;
                ensure(b == s, || format!("F{rank} bfs ball at n={n}: {b} vs {s}"))?;
            }
        }
    }
    let t = start.elapsed();
    ensure(t < GROWTH_TIME, || format!("took {t:?}"))?;
    Ok(format!("F2, F3 balls: series n<={GROWTH_SERIES_MAX}, bfs n<={GROWTH_BFS_MAX}, {t:.2?}"))
}

fn non_sh() -> Outcome {
    let g = f2xf3();
    let class = SimulHyperbolic::new(trees(&g)).complement();
    let start = Instant::now();
    let rows = density_table(&g, &class, NON_SH_MAX, Method::Bfs).map_err(err)?;
    let t = start.elapsed();
    for r in &rows {
        let expected = f2_ball_formula(r.n) + f3_ball_formula(r.n) - BigRational::one();
        ensure(big(&r.hits) == expected, || format!("n={}: hits {} vs {expected}", r.n, r.hits))?;
    }
    ensure(t < NON_SH_TIME, || format!("took {t:?}"))?;
    let last = rows.last().expect("rows");
    Ok(format!("exhaustive n<={NON_SH_MAX}: {} elements, {} non-SH, {t:.2?}", last.ball, last.hits))
}

fn audit() -> Outcome {
    let a = example_4_9_report(AUDIT_ROWS, AUDIT_BFS).map_err(err)?;
    ensure(a.rows.len() == AUDIT_ROWS as usize + 1, || "row count".into())?;
    ensure(a.consistent(), || "exact columns disagree".into())?;
    ensure(a.first_divergence == Some(1), || format!("first divergence {:?}", a.first_divergence))?;
    let r1 = &a.rows[1];
    ensure(
        r1.printed_ball == BigRational::from_integer(13.into()) && r1.convolution_ball == BigUint::from(11u32),
        || format!("n=1: printed {} exact {}", r1.printed_ball, r1.convolution_ball),
    )?;
    let third = frac((1, 3));
    ensure(a.oracle_limit == third, || format!("oracle limit {}", a.oracle_limit))?;
    let at30 = exact_non_sh_fraction(LIMIT_RADIUS);
    let gap = (&at30 - &third).abs();
    ensure(gap < frac(LIMIT_TOLERANCE), || format!("n={LIMIT_RADIUS}: gap {gap}"))?;
    // SH fraction is 1 minus the non-SH fraction; it stays below 1 − ε.
    let (p, e) = a.min_fractions();
    let eps = frac(SH_GAP);
    ensure(p >= eps && e >= eps, || format!("non-SH minima {p}, {e}"))?;
    Ok(format!(
        "rows n<={AUDIT_ROWS}, diverges at n=1 (13 vs 11), printed limit {}/{}, oracle limit {}, |frac(30) - 1/3| = {:.3e}, SH <= 1 - {eps}",
        PRINTED_LIMIT.0,
        PRINTED_LIMIT.1,
        a.oracle_limit,
        to_f64(&gap)
    ))
}

fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn positive_density() -> Outcome {
    let g = f2xf3();
    let spaces = trees(&g);
    let set = sc_extension_set(&spaces, Some(EXTENSION_VERIFY), FamilyRoute::Search).map_err(err)?;
    let class = SimulHyperbolic::new(spaces.clone());
    let claim = verify_extension_claim(&set.elements, &g, &class, EXTENSION_VERIFY).map_err(err)?;
    let bound = density_bound_from_extension_set(&set.elements, &g).map_err(err)?;
    let ball = ball_count(&g, 2 * bound.m as u32, Method::Series).map_err(err)?;
    ensure(bound.c == BigRational::new(BigInt::one(), BigInt::from(ball)), || "c is not 1/|ball(2M)|".into())?;
    let bfs = density_table(&g, &class, EXTENSION_BFS_MAX, Method::Bfs).map_err(err)?;
    let bfs_applicable = bfs.iter().filter(|r| bound.applies_to(r)).count();
    for r in bfs.iter().filter(|r| bound.applies_to(r)) {
        ensure(bound.holds_for(r), || format!("bfs n={}: {}", r.n, r.ratio))?;
    }
    let top = 2 * bound.m as u32 + EXTENSION_SERIES_SPAN;
    let series = density_table(&g, &class, top, Method::Series).map_err(err)?;
    let mut series_checked = 0;
    for r in series.iter().filter(|r| bound.applies_to(r)) {
        ensure(bound.holds_for(r), || format!("series n={}: {}", r.n, r.ratio))?;
        series_checked += 1;
    }
    Ok(format!(
        "|F|={} verified on {} elements, claim checked {}, M={}, 2M={}, c={:.3e}, bfs rows beyond 2M: {bfs_applicable}, series rows {}..={top}: {series_checked}",
        set.elements.len(),
        set.checked,
        claim.checked,
        bound.m,
        2 * bound.m,
        to_f64(&bound.c),
        2 * bound.m + 1
    ))
}

fn engines() -> Outcome {
    let g = f2xf3();
    let f2 = GroupSpec::free(2).map_err(err)?;
    let zz = GroupSpec::parse("freeprod(z, z/2)").map_err(err)?;
    let scenarios = [
        ("two trees", g.clone(), "cayley(factor=1); cayley(factor=2)"),
        ("trees + line", g.clone(), "cayley(factor=1); cayley(factor=2); line(b=1, z=2)"),
        ("two lines", f2.clone(), "line(a=1); line(a=1, b=1)"),
        ("bass-serre + line", zz.clone(), "bass-serre; line(a=1)"),
    ];
    let mut notes = Vec::new();
    for (name, group, text) in scenarios {
        let spaces = parse_actions(&group, text).map_err(err)?;
        let start = Instant::now();
        let sc = find_simul_contracting(&spaces, None, None).map_err(|e| format!("{name}: sc: {e}"))?;
        let t_sc = start.elapsed();
        ensure(sc.recheck(&spaces).map_err(err)?, || format!("{name}: sc recheck"))?;
        let start = Instant::now();
        let sh = find_simul_hyperbolic(&spaces, &[], DEFAULT_SEARCH_RADIUS).map_err(|e| format!("{name}: sh: {e}"))?;
        let t_sh = start.elapsed();
        ensure(sh.recheck(&spaces, &[]).map_err(err)?, || format!("{name}: sh recheck"))?;
        ensure(t_sc < ENGINE_TIME && t_sh < ENGINE_TIME, || format!("{name}: {t_sc:?} / {t_sh:?}"))?;
        notes.push(format!("{name} {t_sc:.0?}/{t_sh:.0?}"));
    }
    Ok(notes.join(", "))
}

fn random_suite(rng: &mut ChaCha8Rng, f2: &GroupSpec) -> Result<Vec<QmEvaluator>, String> {
    let size = rng.gen_range(1..=4);
    let mut qms = Vec::new();
    while qms.len() < size {
        let q = match rng.gen_range(0..3) {
            0 => {
                let w: Vec<Rational64> = (0..2).map(|_| Rational64::new(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect();
                if w.iter().all(Zero::is_zero) {
                    continue;
                }
                QmEvaluator::homomorphism(f2.clone(), w).map_err(err)?
            }
            1 => {
                let len = rng.gen_range(1..=2);
                let mut letters: Vec<Letter> = Vec::new();
                while letters.len() < len {
                    let l = Letter::new(rng.gen_range(0..2), rng.gen_bool(0.5));
                    if letters.last().is_some_and(|p| p.cancels(l)) {
                        continue;
                    }
                    letters.push(l);
                }
                let p = f2.from_letters(letters).map_err(err)?;
                QmEvaluator::counting(f2.clone(), &p).map_err(err)?
            }
            _ => {
                let w: Vec<Rational64> = (0..2).map(|_| Rational64::from_integer(rng.gen_range(-2..=2))).collect();
                if w.iter().all(Zero::is_zero) {
                    continue;
                }
                let line = ActionSpace::line(f2.clone(), w).map_err(err)?;
                QmEvaluator::busemann(&line).map_err(err)?
            }
        };
        qms.push(q);
    }
    Ok(qms)
}

fn qm_suite() -> Outcome {
    let f2 = GroupSpec::free(2).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37);
    let hom = QmEvaluator::homomorphism(f2.clone(), vec![Rational64::new(3, 2), Rational64::from_integer(-1)]).map_err(err)?;
    let counting = QmEvaluator::counting(f2.clone(), &f2.parse_element("ab").map_err(err)?).map_err(err)?;
    let line = ActionSpace::line(f2.clone(), vec![1.into(), 2.into()]).map_err(err)?;
    let busemann = QmEvaluator::busemann(&line).map_err(err)?;
    for q in [&hom, &counting, &busemann] {
        for _ in 0..QM_SAMPLES {
            let g = random_element(&mut rng, &f2, 12);
            ensure(homogeneity_check(q, &g, HOMOGENEITY_POWER).map_err(err)?, || {
                format!("{} not homogeneous on {}", q.label(), f2.render(&g))
            })?;
        }
        defect_sample(q, QM_SAMPLES, 12, rng.gen()).map_err(err)?;
    }

    let ball3 = simhyp::census::enumerate_ball(&f2, 3).map_err(err)?;
    for i in 0..QM_SUITES {
        let qms = random_suite(&mut rng, &f2)?;
        let c = combine_nonvanishing(&qms, DEFAULT_SEARCH_RADIUS).map_err(|e| format!("suite {i}: {e}"))?;
        for q in &qms {
            ensure(!q.evaluate(&c.element).map_err(err)?.is_zero(), || format!("suite {i}: combined vanishes"))?;
        }
        let lin = lineal_focal_extension_set(&qms, DEFAULT_SEARCH_RADIUS).map_err(|e| format!("suite {i}: {e}"))?;
        for g in &ball3 {
            ensure(lineal_extension_pick(&qms, &lin.set, g).map_err(err)?.is_some(), || {
                format!("suite {i}: no pick for {}", f2.render(g))
            })?;
        }
    }

    let homs = [
        QmEvaluator::homomorphism(f2.clone(), vec![1.into(), 0.into()]).map_err(err)?,
        QmEvaluator::homomorphism(f2.clone(), vec![1.into(), (-1).into()]).map_err(err)?,
    ];
    let lin = lineal_focal_extension_set(&homs, DEFAULT_SEARCH_RADIUS).map_err(err)?;
    let ball = simhyp::census::enumerate_ball(&f2, NOGT_RADIUS).map_err(err)?;
    for g in &ball {
        ensure(lineal_extension_pick(&homs, &lin.set, g).map_err(err)?.is_some(), || {
            format!("two homs: no pick for {}", f2.render(g))
        })?;
    }
    Ok(format!(
        "homogeneity n<={HOMOGENEITY_POWER} on {QM_SAMPLES} elements x 3 kinds, {QM_SUITES} random suites, two-hom pick on {} elements",
        ball.len()
    ))
}

fn tree_invariants() -> Outcome {
    let g = f2xf3();
    let spaces = trees(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ee);
    for i in 0..TREE_SAMPLES {
        let x = random_element(&mut rng, &g, 10);
        let n = rng.gen_range(1..=12i64);
        let s = &spaces[i % 2];
        let tau = s.translation_length(&x).map_err(err)?;
        let d1 = s.orbit_distance(&x).map_err(err)?;
        let dn = s.orbit_distance(&g.pow(&x, n).map_err(err)?).map_err(err)?;
        ensure(dn == tau * n + (d1 - tau), || format!("{} n={n}", g.render(&x)))?;
    }

    let f2 = GroupSpec::free(2).map_err(err)?;
    let tree = ActionSpace::cayley(f2.clone(), None).map_err(err)?;
    for _ in 0..TREE_SAMPLES {
        let x = random_element(&mut rng, &f2, 12);
        let y = random_element(&mut rng, &f2, 12);
        let expected = common_prefix_len(&letters_of(&f2, &x), &letters_of(&f2, &y)) as i64;
        ensure(tree.gromov_product(&x, &y).map_err(err)? == Rational64::from_integer(expected), || {
            format!("gromov product of {} and {}", f2.render(&x), f2.render(&y))
        })?;
    }

    let mut tested = 0;
    let mut axes = 0;
    while tested < PROJECTION_SAMPLES {
        let h = random_element(&mut rng, &f2, 6);
        if !tree.is_hyperbolic(&h).map_err(err)? {
            continue;
        }
        let ax = axis(&tree, &h).map_err(err)?;
        let r = check_contracting(&ax, Rational64::zero(), 100, 8, rng.gen()).map_err(err)?;
        ensure(r.pass && r.max_projection_diameter.is_zero(), || {
            format!("axis of {}: diameter {}", f2.render(&h), r.max_projection_diameter)
        })?;
        tested += r.samples_tested;
        axes += 1;
    }

    let mut bs_points = 0;
    for spec in ["freeprod(z, z/2)", "freeprod(z/2, z/3)"] {
        let bg = GroupSpec::parse(spec).map_err(err)?;
        let space = ActionSpace::bass_serre(bg.clone(), None).map_err(err)?;
        for (x, d) in bass_serre_bfs(&bg, BASS_SERRE_EDGES, 3) {
            ensure(space.orbit_distance(&x).map_err(err)? == d, || format!("{spec}: {}", bg.render(&x)))?;
            bs_points += 1;
        }
    }
    Ok(format!(
        "orbit growth and gromov products on {TREE_SAMPLES} samples each, {tested} disjoint geodesics over {axes} axes, {bs_points} bass-serre orbit points"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("growth", growth),
        ("non-sh-count", non_sh),
        ("growth-audit", audit),
        ("positive-density", positive_density),
        ("engines", engines),
        ("qm-suite", qm_suite),
        ("tree-invariants", tree_invariants),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{t:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
