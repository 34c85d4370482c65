//! Independent oracles shared by the integration tests. None of them calls
//! the code path it checks.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use num_rational::Rational64;
use simhyp::group::{Cyclic, GroupElement, GroupSpec, Syllable};

/// Ball sizes of `F_rank` for radii `0..=n`, by depth-first generation of
/// reduced words as `(generator, sign)` strings.
pub fn brute_force_free_balls(rank: u32, n: usize) -> Vec<u64> {
    fn walk(rank: u32, last: Option<(u32, bool)>, depth: usize, n: usize, spheres: &mut [u64]) {
        spheres[depth] += 1;
        if depth == n {
            return;
        }
        for gen in 0..rank {
            for inv in [false, true] {
                if last == Some((gen, !inv)) {
                    continue;
                }
                walk(rank, Some((gen, inv)), depth + 1, n, spheres);
            }
        }
    }
    let mut spheres = vec![0u64; n + 1];
    walk(rank, None, 0, n, &mut spheres);
    spheres
        .iter()
        .scan(0u64, |acc, s| {
            *acc += s;
            Some(*acc)
        })
        .collect()
}

/// Letters of a reduced free-group element as ASCII: `a`..`z`, uppercase
/// for inverses.
pub fn letters_of(group: &GroupSpec, g: &GroupElement) -> String {
    group
        .geodesic_letters(g)
        .iter()
        .map(|l| {
            let c = (b'a' + l.gen as u8) as char;
            if l.inv {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

fn invert(w: &str) -> String {
    w.chars()
        .rev()
        .map(|c| if c.is_ascii_lowercase() { c.to_ascii_uppercase() } else { c.to_ascii_lowercase() })
        .collect()
}

fn cyclic_core(w: &str) -> String {
    let mut s: Vec<char> = w.chars().collect();
    while s.len() >= 2 {
        let (a, b) = (s[0], s[s.len() - 1]);
        if a != b && a.eq_ignore_ascii_case(&b) {
            s.remove(0);
            s.pop();
        } else {
            break;
        }
    }
    s.into_iter().collect()
}

/// Occurrences of `pattern` minus those of its inverse, read cyclically
/// once around the cyclic core of `word`.
pub fn naive_homogenized_count(word: &str, pattern: &str) -> i64 {
    let core = cyclic_core(word);
    if core.is_empty() {
        return 0;
    }
    let count = |p: &str| -> i64 {
        let reps = p.len() / core.len() + 2;
        let long: String = core.repeat(reps);
        (0..core.len()).filter(|&i| long[i..].starts_with(p)).count() as i64
    };
    count(pattern) - count(&invert(pattern))
}

pub fn common_prefix_len(a: &str, b: &str) -> usize {
    a.chars().zip(b.chars()).take_while(|(x, y)| x == y).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Centre(Vec<Syllable>),
    Coset(Vec<Syllable>, u32),
}

fn syllables(g: &GroupElement) -> Vec<Syllable> {
    match g {
        GroupElement::FreeProduct(s) => s.clone(),
        _ => panic!("free product element expected"),
    }
}

/// Distances `d(o, g o)` for every orbit point within `max_edges` half-edges
/// of the basepoint, from breadth-first search on the coset graph: centres
/// `g{1}`, cosets `g A_i`, infinite factors truncated to `|exp| <= max_exp`.
pub fn bass_serre_bfs(group: &GroupSpec, max_edges: usize, max_exp: i64) -> Vec<(GroupElement, Rational64)> {
    let GroupSpec::FreeProduct(factors) = group else {
        panic!("free product expected");
    };
    let strip = |mut s: Vec<Syllable>, i: u32| {
        if s.last().is_some_and(|x| x.factor == i) {
            s.pop();
        }
        s
    };
    let start = Node::Coset(Vec::new(), 0);
    let mut dist: HashMap<Node, usize> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == max_edges {
            continue;
        }
        let next: Vec<Node> = match &v {
            Node::Centre(g) => (0..factors.len() as u32).map(|i| Node::Coset(strip(g.clone(), i), i)).collect(),
            Node::Coset(r, i) => {
                let exps: Vec<i64> = match factors[*i as usize] {
                    Cyclic::Infinite => (-max_exp..=max_exp).collect(),
                    Cyclic::Finite(k) => (0..k as i64).collect(),
                };
                exps.into_iter()
                    .map(|e| {
                        let t = group.generator(*i, false).expect("factor generator");
                        let mut g = r.clone();
                        g.extend(syllables(&group.pow(&t, e).expect("power")));
                        Node::Centre(g)
                    })
                    .collect()
            }
        };
        for w in next {
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }
    let mut out: Vec<(GroupElement, Rational64)> = dist
        .into_iter()
        .filter_map(|(v, d)| match v {
            Node::Coset(r, 0) => Some((GroupElement::FreeProduct(r), Rational64::new(d as i64, 2))),
            _ => None,
        })
        .collect();
    out.sort_by_key(|(g, _)| syllables(g));
    out
}
