use std::collections::HashSet;

use num_bigint::BigUint;

use super::series::spheres;
use super::{CensusError, Method};
use crate::group::{GroupElement, GroupSpec, Letter, Word};

/// Largest ball enumerated unless a caller passes its own budget.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

fn order_key(group: &GroupSpec, g: &GroupElement) -> Vec<u32> {
    group.geodesic_letters(g).iter().map(|l| l.rank()).collect()
}

fn check_budget(group: &GroupSpec, n: u32, budget: u64) -> Result<(), CensusError> {
    if let Ok(s) = spheres(group, n) {
        let total: BigUint = s.iter().sum();
        if total > BigUint::from(budget) {
            return Err(CensusError::Budget { radius: n, budget });
        }
    }
    Ok(())
}

/// Spheres `S(0), ..., S(n)`, each in length-lexicographic order of the
/// normal-form letters (`a < A < b < B < ...` over the global generators).
pub fn enumerate_spheres(group: &GroupSpec, n: u32, budget: u64) -> Result<Vec<Vec<GroupElement>>, CensusError> {
    check_budget(group, n, budget)?;
    let mut out = match group {
        GroupSpec::Free(k) => free_spheres(*k, n)
            .into_iter()
            .map(|s| s.into_iter().map(GroupElement::Free).collect())
            .collect(),
        GroupSpec::Product(fs) => product_spheres(fs, n, budget)?,
        GroupSpec::FreeProduct(_) => bfs_spheres(group, n, budget)?,
    };
    if !matches!(group, GroupSpec::Free(_)) {
        for sphere in &mut out {
            sphere.sort_by_cached_key(|g| order_key(group, g));
        }
    }
    Ok(out)
}

/// The sphere of radius `m`, length-lexicographically ordered.
pub fn enumerate_sphere(group: &GroupSpec, m: u32) -> Result<Vec<GroupElement>, CensusError> {
    Ok(enumerate_spheres(group, m, DEFAULT_BUDGET)?.pop().expect("m + 1 spheres"))
}

/// Every element of `S^{<=n}` exactly once, length-lexicographically.
pub fn enumerate_ball(group: &GroupSpec, n: u32) -> Result<Vec<GroupElement>, CensusError> {
    Ok(enumerate_spheres(group, n, DEFAULT_BUDGET)?.into_iter().flatten().collect())
}

fn free_spheres(k: u32, n: u32) -> Vec<Vec<Word>> {
    let mut out = vec![vec![Word::identity()]];
    for _ in 0..n {
        let prev = out.last().expect("nonempty");
        let mut next = Vec::with_capacity(prev.len() * (2 * k as usize - 1).max(2));
        for w in prev {
            for r in 0..2 * k {
                let l = Letter::new(r / 2, r % 2 == 1);
                if w.letters().last().is_some_and(|p| p.cancels(l)) {
                    continue;
                }
                let mut letters = w.letters().to_vec();
                letters.push(l);
                next.push(Word::from_reduced(letters));
            }
        }
        out.push(next);
    }
    out
}

fn product_spheres(fs: &[GroupSpec], n: u32, budget: u64) -> Result<Vec<Vec<GroupElement>>, CensusError> {
    let len = n as usize + 1;
    let mut acc: Vec<Vec<Vec<GroupElement>>> = vec![Vec::new(); len];
    acc[0].push(Vec::new());
    for f in fs {
        let fsph = enumerate_spheres(f, n, budget)?;
        let mut next: Vec<Vec<Vec<GroupElement>>> = vec![Vec::new(); len];
        for (i, left) in acc.iter().enumerate() {
            for (j, right) in fsph.iter().enumerate().take(len - i) {
                for a in left {
                    for b in right {
                        let mut comps = a.clone();
                        comps.push(b.clone());
                        next[i + j].push(comps);
                    }
                }
            }
        }
        acc = next;
    }
    Ok(acc
        .into_iter()
        .map(|s| s.into_iter().map(GroupElement::Product).collect())
        .collect())
}

/// Breadth-first search of the Cayley graph over `S ∪ S^-1`. A new vertex
/// is deduplicated against the previous and current layers only, which
/// suffices because every neighbour of layer `m` lies in layer `m-1`, `m`
/// or `m+1`.
pub fn bfs_spheres(group: &GroupSpec, n: u32, budget: u64) -> Result<Vec<Vec<GroupElement>>, CensusError> {
    let mut out = Vec::new();
    bfs_layers(group, n, budget, |layer| out.push(layer.to_vec()))?;
    Ok(out)
}

/// Sphere sizes by breadth-first search, keeping two layers in memory.
pub fn bfs_sphere_sizes(group: &GroupSpec, n: u32, budget: u64) -> Result<Vec<u64>, CensusError> {
    let mut out = Vec::new();
    bfs_layers(group, n, budget, |layer| out.push(layer.len() as u64))?;
    Ok(out)
}

fn bfs_layers<F>(group: &GroupSpec, n: u32, budget: u64, mut on_layer: F) -> Result<(), CensusError>
where
    F: FnMut(&[GroupElement]),
{
    let gens = group.symmetric_generators();
    let mut prev: HashSet<GroupElement> = HashSet::new();
    let mut cur: Vec<GroupElement> = vec![group.identity()];
    let mut total = 1u64;
    on_layer(&cur);
    for radius in 1..=n {
        let cur_set: HashSet<GroupElement> = cur.iter().cloned().collect();
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut next = Vec::new();
        for g in &cur {
            for s in &gens {
                let x = group.multiply(g, s)?;
                if prev.contains(&x) || cur_set.contains(&x) || !seen.insert(x.clone()) {
                    continue;
                }
                next.push(x);
            }
        }
        total += next.len() as u64;
        if total > budget {
            return Err(CensusError::Budget { radius, budget });
        }
        on_layer(&next);
        prev = cur_set;
        cur = next;
    }
    Ok(())
}

/// `|S^{<=n}|` by the closed-form series or by breadth-first search.
pub fn ball_count(group: &GroupSpec, n: u32, method: Method) -> Result<BigUint, CensusError> {
    match method {
        Method::Series => Ok(spheres(group, n)?.iter().sum()),
        Method::Bfs => Ok(bfs_sphere_sizes(group, n, DEFAULT_BUDGET)?.iter().sum::<u64>().into()),
    }
}
