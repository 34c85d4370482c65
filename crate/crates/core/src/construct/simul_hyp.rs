//! Simultaneously hyperbolic elements for a mix of trees of general type
//! and lineal actions.
//!
//! With only lineal actions the quasimorphisms are combined directly. With
//! both, an extension set for the trees gives `F`; a power `h` of a
//! nonvanishing element avoids every coset `A_i f^-1`, so each `h f` is
//! nonzero on the evaluators, and `F` supplies one with `h f` hyperbolic on
//! the trees.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use super::extension::split_spaces;
use super::{find_simul_contracting, hyperbolic_on_all, sc_extension_set, ConstructError, FamilyRoute, ScCertificate};
use crate::actions::ActionSpace;
use crate::group::{GroupElement, GroupSpec};
use crate::qm::{avoid_cosets, combine_nonvanishing, Avoided, Combined, QmEvaluator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShRoute {
    TreesOnly,
    AllLineal,
    Mixed,
}

impl fmt::Display for ShRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShRoute::TreesOnly => "trees",
            ShRoute::AllLineal => "lineal",
            ShRoute::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShCertificate {
    pub element: GroupElement,
    pub route: ShRoute,
    pub d: Rational64,
    pub combined: Option<Combined>,
    pub avoided: Option<Avoided>,
    pub extension_size: usize,
    /// Index in the extension set of the chosen `f`.
    pub pick: Option<usize>,
    pub labels: Vec<String>,
    pub values: Vec<Rational64>,
    pub translation_lengths: Vec<Rational64>,
    pub trees: Option<Box<ScCertificate>>,
}

impl ShCertificate {
    /// Hyperbolic on every space and nonzero on every evaluator.
    pub fn recheck(&self, spaces: &[ActionSpace], qms: &[QmEvaluator]) -> Result<bool, ConstructError> {
        if !hyperbolic_on_all(spaces, &self.element)? {
            return Ok(false);
        }
        for q in qms {
            if q.evaluate(&self.element)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn render(&self, group: &GroupSpec) -> String {
        let mut out = String::new();
        out.push_str(&format!("element\t{}\n", group.render(&self.element)));
        out.push_str(&format!("word_length\t{}\n", group.word_length(&self.element)));
        out.push_str(&format!("route\t{}\n", self.route));
        if self.route == ShRoute::Mixed {
            out.push_str(&format!("D\t{}\nextension_size\t{}\n", self.d, self.extension_size));
        }
        if let Some(c) = &self.combined {
            out.push_str(&format!("combined\t{}\n", group.render(&c.element)));
        }
        if let Some(a) = &self.avoided {
            out.push_str(&format!("coset_power\tk={}\n", a.k));
        }
        if let Some(p) = self.pick {
            out.push_str(&format!("pick\t{}\n", p + 1));
        }
        for (l, v) in self.labels.iter().zip(&self.values) {
            out.push_str(&format!("value\t{l}\t{v}\n"));
        }
        let tl: Vec<_> = self.translation_lengths.iter().map(|t| t.to_string()).collect();
        out.push_str(&format!("translation_lengths\t{}\n", tl.join(",")));
        if let Some(t) = &self.trees {
            out.push_str(&t.render(group));
        }
        out
    }
}

/// Ball radius searched for nonvanishing elements.
pub const DEFAULT_SEARCH_RADIUS: u32 = 4;

/// Lineal spaces add their Busemann evaluators to `qms`.
pub fn find_simul_hyperbolic(
    spaces: &[ActionSpace],
    qms: &[QmEvaluator],
    search_radius: u32,
) -> Result<ShCertificate, ConstructError> {
    let (trees, tail) = split_spaces(spaces, qms)?;
    let labels: Vec<String> = tail.iter().map(|q| q.label().to_string()).collect();
    let finish = |element: GroupElement| -> Result<(Vec<Rational64>, Vec<Rational64>), ConstructError> {
        let values = tail.iter().map(|q| q.evaluate(&element)).collect::<Result<Vec<_>, _>>()?;
        let tl = spaces
            .iter()
            .map(|s| s.translation_length(&element))
            .collect::<Result<Vec<_>, _>>()?;
        if values.iter().any(|v| v.is_zero()) || !hyperbolic_on_all(spaces, &element)? {
            return Err(ConstructError::Verification("result is not simultaneously hyperbolic".into()));
        }
        Ok((values, tl))
    };
    if tail.is_empty() {
        let sc = find_simul_contracting(&trees, None, None)?;
        let (values, translation_lengths) = finish(sc.element.clone())?;
        return Ok(ShCertificate {
            element: sc.element.clone(),
            route: ShRoute::TreesOnly,
            d: sc.d,
            combined: None,
            avoided: None,
            extension_size: 0,
            pick: None,
            labels,
            values,
            translation_lengths,
            trees: Some(Box::new(sc)),
        });
    }
    let combined = combine_nonvanishing(&tail, search_radius)?;
    if trees.is_empty() {
        let (values, translation_lengths) = finish(combined.element.clone())?;
        return Ok(ShCertificate {
            element: combined.element.clone(),
            route: ShRoute::AllLineal,
            d: Rational64::zero(),
            combined: Some(combined),
            avoided: None,
            extension_size: 0,
            pick: None,
            labels,
            values,
            translation_lengths,
            trees: None,
        });
    }
    let group = trees[0].group().clone();
    let set = sc_extension_set(&trees, None, FamilyRoute::Search)?;
    let inverses: Vec<GroupElement> = set.elements.iter().map(|f| group.inverse(f)).collect();
    let avoided = avoid_cosets(&tail, &combined.element, &inverses)?;
    let pick = set
        .pick(&avoided.element)?
        .ok_or_else(|| ConstructError::Verification("extension set has no pick for the coset-avoiding power".into()))?;
    let element = group.multiply(&avoided.element, &set.elements[pick])?;
    let (values, translation_lengths) = finish(element.clone())?;
    Ok(ShCertificate {
        element,
        route: ShRoute::Mixed,
        d: set.d,
        combined: Some(combined),
        avoided: Some(avoided),
        extension_size: set.elements.len(),
        pick: Some(pick),
        labels,
        values,
        translation_lengths,
        trees: None,
    })
}
