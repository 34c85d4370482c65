//! Vertices of the supported trees and their root paths.
//!
//! The Cayley tree of a free group has one vertex per reduced word. The
//! Bass–Serre tree of `A_0 * ... * A_m` is modelled as the tree of groups
//! with trivial centre: a centre vertex `g{1}` per element, a factor vertex
//! `gA_i` per coset, and an edge of length 1/2 between `g{1}` and `gA_i`.

use num_rational::Rational64;

use crate::group::{syllable_mul, Cyclic, Syllable, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Vertex {
    /// Cayley tree vertex: a reduced word of the acting coordinate.
    Word(Word),
    /// Bass–Serre centre vertex `g{1}`.
    Center(Vec<Syllable>),
    /// Bass–Serre factor vertex `g A_factor`, `rep` without a trailing
    /// syllable from `factor`.
    Coset { rep: Vec<Syllable>, factor: u32 },
    /// A point of a line.
    Point(Rational64),
}

/// Canonical factor vertex for `g A_factor`.
pub fn coset(mut g: Vec<Syllable>, factor: u32) -> Vertex {
    if g.last().is_some_and(|s| s.factor == factor) {
        g.pop();
    }
    Vertex::Coset { rep: g, factor }
}

/// Vertices from the root (`1` for Cayley trees, `{1}` for Bass–Serre
/// trees) to `v`, inclusive at both ends.
pub fn root_path(v: &Vertex) -> Vec<Vertex> {
    match v {
        Vertex::Word(w) => (0..=w.len()).map(|k| Vertex::Word(w.prefix(k))).collect(),
        Vertex::Center(h) => {
            let mut path = Vec::with_capacity(2 * h.len() + 1);
            path.push(Vertex::Center(Vec::new()));
            for k in 0..h.len() {
                path.push(Vertex::Coset {
                    rep: h[..k].to_vec(),
                    factor: h[k].factor,
                });
                path.push(Vertex::Center(h[..=k].to_vec()));
            }
            path
        }
        Vertex::Coset { rep, factor } => {
            let mut path = root_path(&Vertex::Center(rep.clone()));
            path.push(Vertex::Coset {
                rep: rep.clone(),
                factor: *factor,
            });
            path
        }
        Vertex::Point(_) => vec![v.clone()],
    }
}

/// Number of edges between the root and `v`.
pub fn depth(v: &Vertex) -> usize {
    match v {
        Vertex::Word(w) => w.len(),
        Vertex::Center(h) => 2 * h.len(),
        Vertex::Coset { rep, .. } => 2 * rep.len() + 1,
        Vertex::Point(_) => 0,
    }
}

/// Edges on the geodesic between two vertices (both non-`Point`).
pub fn edge_distance(u: &Vertex, v: &Vertex) -> usize {
    if let (Vertex::Word(a), Vertex::Word(b)) = (u, v) {
        let c = a.common_prefix_len(b);
        return a.len() + b.len() - 2 * c;
    }
    let pu = root_path(u);
    let pv = root_path(v);
    let common = pu.iter().zip(&pv).take_while(|(x, y)| x == y).count();
    pu.len() + pv.len() - 2 * common
}

/// Vertex sequence of the geodesic from `u` to `v`.
pub fn geodesic(u: &Vertex, v: &Vertex) -> Vec<Vertex> {
    let pu = root_path(u);
    let pv = root_path(v);
    let common = pu.iter().zip(&pv).take_while(|(x, y)| x == y).count();
    let mut out: Vec<Vertex> = pu[common - 1..].iter().rev().cloned().collect();
    out.extend_from_slice(&pv[common..]);
    out
}

/// The unique vertex lying on all three pairwise geodesics.
pub fn median(x: &Vertex, y: &Vertex, z: &Vertex) -> Vertex {
    let px = root_path(x);
    let py = root_path(y);
    let pz = root_path(z);
    let meet = |a: &[Vertex], b: &[Vertex]| a.iter().zip(b).take_while(|(p, q)| p == q).count();
    let (xy, yz, xz) = (meet(&px, &py), meet(&py, &pz), meet(&px, &pz));
    if xy >= yz && xy >= xz {
        px[xy - 1].clone()
    } else if yz >= xz {
        py[yz - 1].clone()
    } else {
        px[xz - 1].clone()
    }
}

/// Left action of `g` on a Bass–Serre vertex.
pub fn bs_act(fs: &[Cyclic], g: &[Syllable], v: &Vertex) -> Vertex {
    match v {
        Vertex::Center(h) => Vertex::Center(syllable_mul(fs, g, h)),
        Vertex::Coset { rep, factor } => coset(syllable_mul(fs, g, rep), *factor),
        other => other.clone(),
    }
}

/// `d(A_i, g A_j)` by syllable analysis: strip leading `i`- and trailing
/// `j`-syllables; `k` remaining syllables give `k + 1`.
pub fn bs_coset_distance(g: &[Syllable], i: u32, j: u32) -> Rational64 {
    let mut s = g;
    if s.first().is_some_and(|x| x.factor == i) {
        s = &s[1..];
    }
    if s.last().is_some_and(|x| x.factor == j) {
        s = &s[..s.len() - 1];
    }
    if s.is_empty() {
        // g A_j shares the centre vertex {1} with A_i, or is A_i itself.
        return if i == j {
            Rational64::from_integer(0)
        } else {
            Rational64::from_integer(1)
        };
    }
    Rational64::from_integer(s.len() as i64 + 1)
}

/// Cyclic syllable count of a cyclically reduced syllable word.
pub fn bs_cyclic_length(core: &[Syllable]) -> usize {
    if core.len() >= 2 {
        core.len()
    } else {
        0
    }
}
