//! Action grammar, case-insensitive:
//!
//! ```text
//! actions := action (";" action)*
//! action  := cayley ["(" "factor" "=" k ")"]
//!          | bass-serre ["(" "factor" "=" k ")"]
//!          | line "(" name "=" rational ("," name "=" rational)* ")"
//! ```
//! Factors are numbered from 1. Unlisted line weights are 0.

use num_rational::Rational64;

use super::{ActionError, ActionKind, ActionSpace};
use crate::group::parse::Cursor;
use crate::group::GroupSpec;

pub fn parse_actions(group: &GroupSpec, text: &str) -> Result<Vec<ActionSpace>, ActionError> {
    let mut out = Vec::new();
    for part in text.split(';') {
        if part.trim().is_empty() {
            continue;
        }
        out.push(parse_action(group, part)?);
    }
    Ok(out)
}

pub(crate) fn parse_action(group: &GroupSpec, text: &str) -> Result<ActionSpace, ActionError> {
    let mut cur = Cursor::new(text);
    let space = action(&mut cur, group)?;
    cur.finish()?;
    Ok(space)
}

pub(crate) fn action(cur: &mut Cursor<'_>, group: &GroupSpec) -> Result<ActionSpace, ActionError> {
    let kw = cur.keyword()?;
    let kind = match kw.as_str() {
        "cayley" => ActionKind::CayleyTree {
            factor: optional_factor(cur, group)?,
        },
        "bass-serre" | "bassserre" | "bass_serre" => ActionKind::BassSerreTree {
            factor: optional_factor(cur, group)?,
        },
        "line" => ActionKind::Line {
            weights: line_weights(cur, group)?,
        },
        other => return Err(cur.error(format!("unknown action kind '{other}'")).into()),
    };
    ActionSpace::new(group.clone(), kind)
}

fn optional_factor(cur: &mut Cursor<'_>, group: &GroupSpec) -> Result<Option<usize>, ActionError> {
    if !cur.eat('(') {
        return Ok(None);
    }
    let key = cur.keyword()?;
    if key != "factor" {
        return Err(cur.error(format!("expected 'factor', found '{key}'")).into());
    }
    cur.expect('=')?;
    let k = cur.integer()?;
    cur.expect(')')?;
    let count = group.factors().map_or(1, |f| f.len()) as i64;
    if k < 1 || k > count {
        return Err(cur.error(format!("factor {k} out of range 1..={count}")).into());
    }
    if group.factors().is_none() {
        return Ok(None);
    }
    Ok(Some(k as usize - 1))
}

fn line_weights(cur: &mut Cursor<'_>, group: &GroupSpec) -> Result<Vec<Rational64>, ActionError> {
    let names = group.generator_names();
    let mut weights = vec![Rational64::from_integer(0); names.len()];
    cur.expect('(')?;
    if cur.eat(')') {
        return Ok(weights);
    }
    loop {
        let name = cur.keyword()?;
        let i = names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| cur.error(format!("unknown generator '{name}'")))?;
        cur.expect('=')?;
        weights[i] = cur.rational()?;
        if cur.eat(')') {
            break;
        }
        cur.expect(',')?;
    }
    Ok(weights)
}
