//! Isometric actions on trees and lines with exact distances.
//!
//! Three kinds are supported. A Cayley tree is acted on through one
//! coordinate of a direct product, or through the whole group when it is
//! free. A Bass–Serre tree belongs to a free product of cyclic groups. A line
//! is acted on by translation through a homomorphism to the rationals. Every
//! kind is 0-hyperbolic.

mod parse;
pub mod tree;

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::group::{Cyclic, GroupElement, GroupError, GroupSpec};
pub use parse::parse_actions;
pub use tree::Vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid action: {0}")]
    Invalid(String),
    #[error("operation needs a tree, got {0}")]
    NotATree(String),
    #[error("element {0} is elliptic on {1}")]
    Elliptic(String, String),
    #[error("empty list of spaces")]
    NoSpaces,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ActionKind {
    /// Cayley tree of the coordinate `factor` (0-based), or of the whole
    /// group when `None`.
    CayleyTree { factor: Option<usize> },
    /// Bass–Serre tree of the free product in coordinate `factor`.
    BassSerreTree { factor: Option<usize> },
    /// Translation by `Σ weight_i · (exponent sum of generator i)`.
    Line { weights: Vec<Rational64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionType {
    Elliptic,
    Lineal { orientable: bool },
    Focal,
    GeneralType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsometryKind {
    Elliptic,
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: IsometryKind,
    pub translation_length: Rational64,
    pub orbit_displacement: Rational64,
}

/// A declared action of `group`; the basepoint is canonical per kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionSpace {
    group: GroupSpec,
    kind: ActionKind,
}

impl ActionSpace {
    pub fn new(group: GroupSpec, kind: ActionKind) -> Result<Self, ActionError> {
        match &kind {
            ActionKind::CayleyTree { factor } => match group.factor_spec(*factor)? {
                GroupSpec::Free(_) => {}
                other => {
                    return Err(ActionError::Invalid(format!(
                        "Cayley tree needs a free coordinate, got {other}"
                    )))
                }
            },
            ActionKind::BassSerreTree { factor } => match group.factor_spec(*factor)? {
                GroupSpec::FreeProduct(_) => {}
                other => {
                    return Err(ActionError::Invalid(format!(
                        "Bass-Serre tree needs a free product coordinate, got {other}"
                    )))
                }
            },
            ActionKind::Line { weights } => {
                if weights.len() != group.rank() as usize {
                    return Err(ActionError::Invalid(format!(
                        "line needs {} weights, got {}",
                        group.rank(),
                        weights.len()
                    )));
                }
                let names = group.generator_names();
                for (i, w) in weights.iter().enumerate() {
                    if !w.is_zero() && torsion_generator(&group, i) {
                        return Err(ActionError::Invalid(format!(
                            "torsion generator {} must have weight 0",
                            names[i]
                        )));
                    }
                }
            }
        }
        Ok(ActionSpace { group, kind })
    }

    pub fn cayley(group: GroupSpec, factor: Option<usize>) -> Result<Self, ActionError> {
        Self::new(group, ActionKind::CayleyTree { factor })
    }

    pub fn bass_serre(group: GroupSpec, factor: Option<usize>) -> Result<Self, ActionError> {
        Self::new(group, ActionKind::BassSerreTree { factor })
    }

    pub fn line(group: GroupSpec, weights: Vec<Rational64>) -> Result<Self, ActionError> {
        Self::new(group, ActionKind::Line { weights })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn kind(&self) -> &ActionKind {
        &self.kind
    }

    pub fn is_tree(&self) -> bool {
        !matches!(self.kind, ActionKind::Line { .. })
    }

    pub fn delta(&self) -> Rational64 {
        Rational64::zero()
    }

    /// Declared action type, from the construction rules.
    pub fn action_type(&self) -> ActionType {
        match &self.kind {
            ActionKind::Line { weights } => {
                if weights.iter().all(|w| w.is_zero()) {
                    ActionType::Elliptic
                } else {
                    ActionType::Lineal { orientable: true }
                }
            }
            ActionKind::CayleyTree { factor } => match self.group.factor_spec(*factor) {
                Ok(GroupSpec::Free(1)) => ActionType::Lineal { orientable: true },
                _ => ActionType::GeneralType,
            },
            ActionKind::BassSerreTree { .. } => {
                let fs = self.bs_factors();
                if fs == [Cyclic::Finite(2), Cyclic::Finite(2)] {
                    ActionType::Lineal { orientable: false }
                } else {
                    ActionType::GeneralType
                }
            }
        }
    }

    fn coordinate_factor(&self) -> Option<usize> {
        match self.kind {
            ActionKind::CayleyTree { factor } | ActionKind::BassSerreTree { factor } => factor,
            ActionKind::Line { .. } => None,
        }
    }

    fn bs_factors(&self) -> &[Cyclic] {
        match self.group.factor_spec(self.coordinate_factor()) {
            Ok(GroupSpec::FreeProduct(fs)) => fs,
            _ => &[],
        }
    }

    /// The coordinate of `g` that acts on the tree.
    pub fn acting<'a>(&self, g: &'a GroupElement) -> Result<&'a GroupElement, ActionError> {
        Ok(self.group.coordinate(g, self.coordinate_factor())?)
    }

    /// The spec of the acting coordinate.
    pub fn acting_spec(&self) -> &GroupSpec {
        self.group
            .factor_spec(self.coordinate_factor())
            .expect("validated at construction")
    }

    /// Homomorphism value of `g` on a line; `None` for trees.
    pub fn line_value(&self, g: &GroupElement) -> Option<Rational64> {
        match &self.kind {
            ActionKind::Line { weights } => Some(weighted_sum(&self.group, weights, g)),
            _ => None,
        }
    }

    pub fn basepoint(&self) -> Vertex {
        match &self.kind {
            ActionKind::CayleyTree { .. } => Vertex::Word(Default::default()),
            ActionKind::BassSerreTree { .. } => tree::coset(Vec::new(), 0),
            ActionKind::Line { .. } => Vertex::Point(Rational64::zero()),
        }
    }

    /// Left action on vertices.
    pub fn act(&self, g: &GroupElement, v: &Vertex) -> Result<Vertex, ActionError> {
        self.group.check(g)?;
        let a = self.acting(g)?;
        Ok(match (&self.kind, a, v) {
            (ActionKind::CayleyTree { .. }, GroupElement::Free(w), Vertex::Word(x)) => {
                Vertex::Word(w.mul(x))
            }
            (ActionKind::BassSerreTree { .. }, GroupElement::FreeProduct(sy), _) => {
                tree::bs_act(self.bs_factors(), sy, v)
            }
            (ActionKind::Line { weights }, _, Vertex::Point(p)) => {
                Vertex::Point(*p + weighted_sum(&self.group, weights, g))
            }
            _ => return Err(ActionError::Invalid(format!("vertex {v:?} is not in {self}"))),
        })
    }

    /// `g · o`.
    pub fn orbit_point(&self, g: &GroupElement) -> Result<Vertex, ActionError> {
        self.act(g, &self.basepoint())
    }

    fn edge_length(&self) -> Rational64 {
        match self.kind {
            ActionKind::BassSerreTree { .. } => Rational64::new(1, 2),
            _ => Rational64::from_integer(1),
        }
    }

    pub fn vertex_distance(&self, u: &Vertex, v: &Vertex) -> Rational64 {
        match (u, v) {
            (Vertex::Point(x), Vertex::Point(y)) => (*x - *y).abs(),
            _ => self.edge_length() * Rational64::from_integer(tree::edge_distance(u, v) as i64),
        }
    }

    /// `d(o, g·o)`.
    pub fn orbit_distance(&self, g: &GroupElement) -> Result<Rational64, ActionError> {
        self.group.check(g)?;
        let a = self.acting(g)?;
        Ok(match (&self.kind, a) {
            (ActionKind::CayleyTree { .. }, GroupElement::Free(w)) => {
                Rational64::from_integer(w.len() as i64)
            }
            (ActionKind::BassSerreTree { .. }, GroupElement::FreeProduct(sy)) => {
                tree::bs_coset_distance(sy, 0, 0)
            }
            (ActionKind::Line { weights }, _) => weighted_sum(&self.group, weights, g).abs(),
            _ => unreachable!("shape checked"),
        })
    }

    /// `d(g·o, h·o)`.
    pub fn orbit_pair_distance(
        &self,
        g: &GroupElement,
        h: &GroupElement,
    ) -> Result<Rational64, ActionError> {
        let gi = self.group.inverse(g);
        self.orbit_distance(&self.group.multiply(&gi, h)?)
    }

    pub fn translation_length(&self, g: &GroupElement) -> Result<Rational64, ActionError> {
        self.group.check(g)?;
        let a = self.acting(g)?;
        Ok(match (&self.kind, a) {
            (ActionKind::CayleyTree { .. }, GroupElement::Free(w)) => {
                Rational64::from_integer(w.cyclic_split().1.len() as i64)
            }
            (ActionKind::BassSerreTree { .. }, GroupElement::FreeProduct(_)) => {
                let form = self.acting_spec().cyclic_reduce(a)?;
                match form.core {
                    GroupElement::FreeProduct(c) => {
                        Rational64::from_integer(tree::bs_cyclic_length(&c) as i64)
                    }
                    _ => unreachable!(),
                }
            }
            (ActionKind::Line { weights }, _) => weighted_sum(&self.group, weights, g).abs(),
            _ => unreachable!("shape checked"),
        })
    }

    pub fn classify(&self, g: &GroupElement) -> Result<Classification, ActionError> {
        let translation_length = self.translation_length(g)?;
        let orbit_displacement = self.orbit_distance(g)?;
        let kind = if translation_length > Rational64::zero() {
            IsometryKind::Hyperbolic
        } else {
            IsometryKind::Elliptic
        };
        Ok(Classification {
            kind,
            translation_length,
            orbit_displacement,
        })
    }

    pub fn is_hyperbolic(&self, g: &GroupElement) -> Result<bool, ActionError> {
        Ok(self.translation_length(g)? > Rational64::zero())
    }

    /// `max_{0 <= n <= n_max} d(o, g^n o)`; bounded orbits stay small.
    pub fn orbit_probe(&self, g: &GroupElement, n_max: u32) -> Result<Rational64, ActionError> {
        let mut best = Rational64::zero();
        let mut p = self.group.identity();
        for _ in 0..n_max {
            p = self.group.multiply(&p, g)?;
            best = best.max(self.orbit_distance(&p)?);
        }
        Ok(best)
    }

    /// `(x·o | y·o)_o`.
    pub fn gromov_product(&self, x: &GroupElement, y: &GroupElement) -> Result<Rational64, ActionError> {
        let dx = self.orbit_distance(x)?;
        let dy = self.orbit_distance(y)?;
        let dxy = self.orbit_pair_distance(x, y)?;
        Ok((dx + dy - dxy) / 2)
    }

    fn require_tree(&self) -> Result<(), ActionError> {
        if self.is_tree() {
            Ok(())
        } else {
            Err(ActionError::NotATree(self.to_string()))
        }
    }

    /// Vertices of the geodesic `[u, v]`.
    pub fn geodesic(&self, u: &Vertex, v: &Vertex) -> Result<Vec<Vertex>, ActionError> {
        self.require_tree()?;
        Ok(tree::geodesic(u, v))
    }

    pub fn median(&self, x: &Vertex, y: &Vertex, z: &Vertex) -> Result<Vertex, ActionError> {
        self.require_tree()?;
        Ok(tree::median(x, y, z))
    }

    /// Distance from `v` to the geodesic `[a, b]`.
    pub fn distance_to_geodesic(&self, v: &Vertex, a: &Vertex, b: &Vertex) -> Rational64 {
        (self.vertex_distance(v, a) + self.vertex_distance(v, b) - self.vertex_distance(a, b)) / 2
    }

    /// Whether every vertex of `[x·o, y·o]` lies within `delta` of the other
    /// two sides of the triangle on `x·o, y·o, z·o`.
    pub fn thin_triangle_check(
        &self,
        x: &GroupElement,
        y: &GroupElement,
        z: &GroupElement,
        delta: Rational64,
    ) -> Result<bool, ActionError> {
        self.require_tree()?;
        let (px, py, pz) = (self.orbit_point(x)?, self.orbit_point(y)?, self.orbit_point(z)?);
        Ok(tree::geodesic(&px, &py).iter().all(|v| {
            let near = self
                .distance_to_geodesic(v, &py, &pz)
                .min(self.distance_to_geodesic(v, &pz, &px));
            near <= delta
        }))
    }

    pub fn render_vertex(&self, v: &Vertex) -> String {
        match v {
            Vertex::Word(w) => self.acting_spec().render(&GroupElement::Free(w.clone())),
            Vertex::Center(h) => format!(
                "{}{{1}}",
                self.acting_spec().render(&GroupElement::FreeProduct(h.clone()))
            ),
            Vertex::Coset { rep, factor } => {
                let name = &self.acting_spec().generator_names()[*factor as usize];
                let r = self.acting_spec().render(&GroupElement::FreeProduct(rep.clone()));
                format!("{r}<{name}>")
            }
            Vertex::Point(p) => p.to_string(),
        }
    }
}

impl fmt::Display for ActionSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ActionKind::CayleyTree { factor: Some(i) } => write!(f, "cayley(factor={})", i + 1),
            ActionKind::CayleyTree { factor: None } => write!(f, "cayley"),
            ActionKind::BassSerreTree { factor: Some(i) } => write!(f, "bass-serre(factor={})", i + 1),
            ActionKind::BassSerreTree { factor: None } => write!(f, "bass-serre"),
            ActionKind::Line { weights } => {
                write!(f, "line(")?;
                let names = self.group.generator_names();
                let mut first = true;
                for (name, w) in names.iter().zip(weights) {
                    if w.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, ",")?;
                    }
                    first = false;
                    write!(f, "{name}={w}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn torsion_generator(group: &GroupSpec, global: usize) -> bool {
    match group {
        GroupSpec::Free(_) => false,
        GroupSpec::FreeProduct(fs) => fs[global].is_torsion(),
        GroupSpec::Product(fs) => {
            let mut i = global;
            for f in fs {
                let r = f.rank() as usize;
                if i < r {
                    return torsion_generator(f, i);
                }
                i -= r;
            }
            false
        }
    }
}

/// `Σ weights[i] · exponent_sum_i(g)`.
pub fn weighted_sum(group: &GroupSpec, weights: &[Rational64], g: &GroupElement) -> Rational64 {
    group
        .exponent_sums(g)
        .iter()
        .zip(weights)
        .filter(|(_, w)| !w.is_zero())
        .map(|(e, w)| *w * *e)
        .sum()
}

/// Hyperbolic on every listed space.
pub fn is_simul_hyperbolic(spaces: &[ActionSpace], g: &GroupElement) -> Result<bool, ActionError> {
    if spaces.is_empty() {
        return Err(ActionError::NoSpaces);
    }
    for s in spaces {
        if !s.is_hyperbolic(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2xf3() -> GroupSpec {
        GroupSpec::parse("product(free(2),free(3))").unwrap()
    }

    #[test]
    fn factor_projection_distance() {
        let g = f2xf3();
        let x = ActionSpace::cayley(g.clone(), Some(0)).unwrap();
        let e = g.parse_element("(a^2, y)").unwrap();
        assert_eq!(x.orbit_distance(&e).unwrap(), Rational64::from_integer(2));
        assert_eq!(x.orbit_distance(&g.identity()).unwrap(), Rational64::zero());
    }

    #[test]
    fn classification_on_factor_tree() {
        let g = f2xf3();
        let x = ActionSpace::cayley(g.clone(), Some(0)).unwrap();
        let c = x.classify(&g.parse_element("(1, y)").unwrap()).unwrap();
        assert_eq!(c.kind, IsometryKind::Elliptic);
        let c = x.classify(&g.parse_element("(a, 1)").unwrap()).unwrap();
        assert_eq!(c.kind, IsometryKind::Hyperbolic);
        assert_eq!(c.translation_length, Rational64::from_integer(1));
        let c = x.classify(&g.parse_element("(a b A, 1)").unwrap()).unwrap();
        assert_eq!(c.translation_length, Rational64::from_integer(1));
        assert_eq!(c.orbit_displacement, Rational64::from_integer(3));
    }

    #[test]
    fn line_values() {
        let f2 = GroupSpec::free(2).unwrap();
        let l = ActionSpace::line(f2.clone(), vec![1.into(), 0.into()]).unwrap();
        let g = f2.parse_element("a b a b^-1 a").unwrap();
        assert_eq!(l.translation_length(&g).unwrap(), Rational64::from_integer(3));
        assert_eq!(l.action_type(), ActionType::Lineal { orientable: true });
    }

    #[test]
    fn torsion_weights_rejected() {
        let g = GroupSpec::parse("freeprod(z, z/2)").unwrap();
        assert!(ActionSpace::line(g.clone(), vec![1.into(), 1.into()]).is_err());
        assert!(ActionSpace::line(g, vec![1.into(), 0.into()]).is_ok());
    }

    #[test]
    fn bass_serre_classification() {
        let g = GroupSpec::parse("freeprod(z, z/2)").unwrap();
        let t = ActionSpace::bass_serre(g.clone(), None).unwrap();
        let b = g.parse_element("b").unwrap();
        assert_eq!(t.classify(&b).unwrap().kind, IsometryKind::Elliptic);
        let ab = g.parse_element("a b").unwrap();
        let c = t.classify(&ab).unwrap();
        assert_eq!(c.kind, IsometryKind::Hyperbolic);
        assert_eq!(c.translation_length, Rational64::from_integer(2));
        assert_eq!(t.action_type(), ActionType::GeneralType);
        let dihedral = GroupSpec::parse("freeprod(z/2, z/2)").unwrap();
        let t = ActionSpace::bass_serre(dihedral, None).unwrap();
        assert_eq!(t.action_type(), ActionType::Lineal { orientable: false });
    }

    #[test]
    fn gromov_product_is_common_prefix() {
        let f2 = GroupSpec::free(2).unwrap();
        let t = ActionSpace::cayley(f2.clone(), None).unwrap();
        let x = f2.parse_element("a b").unwrap();
        let y = f2.parse_element("a B").unwrap();
        assert_eq!(t.gromov_product(&x, &y).unwrap(), Rational64::from_integer(1));
        assert_eq!(t.gromov_product(&x, &x).unwrap(), Rational64::from_integer(2));
    }

    #[test]
    fn simul_hyperbolic_needs_all() {
        let g = f2xf3();
        let spaces = [
            ActionSpace::cayley(g.clone(), Some(0)).unwrap(),
            ActionSpace::cayley(g.clone(), Some(1)).unwrap(),
        ];
        assert!(is_simul_hyperbolic(&spaces, &g.parse_element("(a, y)").unwrap()).unwrap());
        assert!(!is_simul_hyperbolic(&spaces, &g.parse_element("(a, 1)").unwrap()).unwrap());
        assert!(!is_simul_hyperbolic(&spaces, &g.identity()).unwrap());
        assert!(is_simul_hyperbolic(&[], &g.identity()).is_err());
    }

    #[test]
    fn invalid_kinds() {
        let g = f2xf3();
        assert!(ActionSpace::cayley(g.clone(), None).is_err());
        assert!(ActionSpace::cayley(g.clone(), Some(2)).is_err());
        assert!(ActionSpace::bass_serre(g, Some(0)).is_err());
    }
}
