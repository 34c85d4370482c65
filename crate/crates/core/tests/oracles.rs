//! Engine outputs against independent oracles.

mod common;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simhyp::actions::ActionSpace;
use simhyp::census::{self, density, exact_non_sh_fraction, Method, SimulHyperbolic};
use simhyp::group::{random_element, GroupSpec};
use simhyp::qm::QmEvaluator;

use common::*;

#[test]
fn free_balls_match_brute_force() {
    for (rank, n) in [(1, 10), (2, 8), (3, 6)] {
        let g = GroupSpec::free(rank).unwrap();
        let series = census::sphere_series(&g, n as u32).unwrap().balls();
        let brute = brute_force_free_balls(rank, n);
        assert_eq!(series, brute.iter().map(|&b| BigUint::from(b)).collect::<Vec<_>>(), "rank {rank}");
    }
    // Closed forms: 2·3^n − 1 and (3·5^n − 1)/2.
    let f2 = brute_force_free_balls(2, 8);
    let f3 = brute_force_free_balls(3, 6);
    for (n, b) in f2.iter().enumerate() {
        assert_eq!(*b, 2 * 3u64.pow(n as u32) - 1);
    }
    for (n, b) in f3.iter().enumerate() {
        assert_eq!(*b, (3 * 5u64.pow(n as u32) - 1) / 2);
    }
}

/// Sphere sizes of `F_rank` from `2k (2k-1)^(n-1)`.
fn sphere(rank: u64, n: u32) -> BigUint {
    if n == 0 {
        BigUint::from(1u32)
    } else {
        BigUint::from(2 * rank) * BigUint::from(2 * rank - 1).pow(n - 1)
    }
}

/// Elements `(x, y)` with `|x| + |y| <= n` and `x = 1` or `y = 1`, and the
/// ball itself, by direct double sums.
fn product_counts(n: u32) -> (BigUint, BigUint) {
    let mut ball = BigUint::from(0u32);
    let mut non = BigUint::from(0u32);
    for i in 0..=n {
        for j in 0..=n - i {
            let c = sphere(2, i) * sphere(3, j);
            if i == 0 || j == 0 {
                non += &c;
            }
            ball += c;
        }
    }
    (ball, non)
}

#[test]
fn non_sh_counts_match_double_sums() {
    let g = GroupSpec::parse("product(free(2),free(3))").unwrap();
    let spaces = vec![
        ActionSpace::cayley(g.clone(), Some(0)).unwrap(),
        ActionSpace::cayley(g.clone(), Some(1)).unwrap(),
    ];
    let class = SimulHyperbolic::new(spaces).complement();
    for n in 0..=5 {
        let (ball, non) = product_counts(n);
        for method in [Method::Series, Method::Bfs] {
            let r = density(&g, &class, n, method).unwrap();
            assert_eq!((r.ball.clone(), r.hits.clone()), (ball.clone(), non.clone()), "n={n} {method}");
        }
    }
}

#[test]
fn exact_fraction_at_thirty() {
    let (ball, non) = product_counts(30);
    let oracle = BigRational::new(BigInt::from(non), BigInt::from(ball));
    assert_eq!(exact_non_sh_fraction(30), oracle);
    let third = BigRational::new(1.into(), 3.into());
    let gap = (oracle - third).abs();
    assert!(gap < BigRational::new(1.into(), 1_000_000.into()));
}

#[test]
fn counting_quasimorphism_matches_string_count() {
    let f2 = GroupSpec::free(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for pattern in ["ab", "aB", "a", "ba"] {
        let p = f2.parse_element(pattern).unwrap();
        let q = QmEvaluator::counting(f2.clone(), &p).unwrap();
        for _ in 0..300 {
            let g = random_element(&mut rng, &f2, 12);
            let word = letters_of(&f2, &g);
            let expected = naive_homogenized_count(&word, pattern);
            assert_eq!(q.evaluate(&g).unwrap(), Rational64::from_integer(expected), "{pattern} on {word}");
        }
    }
}

#[test]
fn bass_serre_distances_match_coset_bfs() {
    for spec in ["freeprod(z, z/2)", "freeprod(z/2, z/3)", "freeprod(z, z, z/2)"] {
        let g = GroupSpec::parse(spec).unwrap();
        let space = ActionSpace::bass_serre(g.clone(), None).unwrap();
        let rows = bass_serre_bfs(&g, 8, 3);
        assert!(rows.len() > 10, "{spec}");
        for (x, d) in rows {
            assert_eq!(space.orbit_distance(&x).unwrap(), d, "{spec}: {}", g.render(&x));
        }
    }
}

#[test]
fn gromov_product_is_common_prefix() {
    let f2 = GroupSpec::free(2).unwrap();
    let tree = ActionSpace::cayley(f2.clone(), None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..2000 {
        let x = random_element(&mut rng, &f2, 10);
        let y = random_element(&mut rng, &f2, 10);
        let expected = common_prefix_len(&letters_of(&f2, &x), &letters_of(&f2, &y));
        assert_eq!(tree.gromov_product(&x, &y).unwrap(), Rational64::from_integer(expected as i64));
    }
}
