//! Text grammar for group specs and elements.
//!
//! ```text
//! group   := free(k) | product(group, group, ...) | freeprod(cyc, cyc, ...)
//! cyc     := z | z/k
//! element := "1" | factor* | "(" element, ... ")"      (tuples for products)
//! factor  := name ["^" int]        name = a..h, x..t, p..k, g12; uppercase = inverse
//! ```
//! Keywords are case-insensitive.

use super::{Cyclic, GroupElement, GroupError, GroupSpec, Letter};

/// Character cursor shared by the spec parsers of this crate.
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> GroupError {
        GroupError::Parse {
            column: self.src[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), GroupError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    /// `[A-Za-z][A-Za-z0-9_-]*`, lowercased.
    pub(crate) fn keyword(&mut self) -> Result<String, GroupError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphabetic() || (i > 0 && (c.is_ascii_digit() || c == '_' || c == '-'))))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos += len;
        Ok(rest[..len].to_ascii_lowercase())
    }

    pub(crate) fn integer(&mut self) -> Result<i64, GroupError> {
        self.skip_ws();
        let rest = self.rest();
        let mut len = 0;
        if rest.starts_with('-') || rest.starts_with('+') {
            len = 1;
        }
        let digits = rest[len..].chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        len += digits;
        let value = rest[..len]
            .parse::<i64>()
            .map_err(|e| self.error(format!("bad integer: {e}")))?;
        self.pos += len;
        Ok(value)
    }

    /// `int` or `int/int`.
    pub(crate) fn rational(&mut self) -> Result<num_rational::Rational64, GroupError> {
        let n = self.integer()?;
        if self.eat('/') {
            let d = self.integer()?;
            if d == 0 {
                return Err(self.error("zero denominator"));
            }
            Ok(num_rational::Rational64::new(n, d))
        } else {
            Ok(num_rational::Rational64::from_integer(n))
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), GroupError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }
}

pub(super) fn parse_group(text: &str) -> Result<GroupSpec, GroupError> {
    let mut cur = Cursor::new(text);
    let spec = group(&mut cur)?;
    cur.finish()?;
    Ok(spec)
}

fn group(cur: &mut Cursor<'_>) -> Result<GroupSpec, GroupError> {
    let kw = cur.keyword()?;
    cur.expect('(')?;
    let spec = match kw.as_str() {
        "free" => {
            let k = cur.integer()?;
            if k < 1 || k > u32::MAX as i64 {
                return Err(cur.error("free group rank must be >= 1"));
            }
            GroupSpec::free(k as u32)?
        }
        "product" => {
            let mut fs = vec![group(cur)?];
            while cur.eat(',') {
                fs.push(group(cur)?);
            }
            GroupSpec::product(fs).map_err(|e| cur.error(e.to_string()))?
        }
        "freeprod" => {
            let mut fs = vec![cyclic(cur)?];
            while cur.eat(',') {
                fs.push(cyclic(cur)?);
            }
            GroupSpec::free_product(fs).map_err(|e| cur.error(e.to_string()))?
        }
        other => return Err(cur.error(format!("unknown group kind '{other}'"))),
    };
    cur.expect(')')?;
    Ok(spec)
}

fn cyclic(cur: &mut Cursor<'_>) -> Result<Cyclic, GroupError> {
    let kw = cur.keyword()?;
    if kw != "z" {
        return Err(cur.error(format!("expected 'z' or 'z/k', found '{kw}'")));
    }
    if cur.eat('/') {
        let k = cur.integer()?;
        if k < 2 || k > u32::MAX as i64 {
            return Err(cur.error("cyclic order must be >= 2"));
        }
        Ok(Cyclic::Finite(k as u32))
    } else {
        Ok(Cyclic::Infinite)
    }
}

pub(super) fn parse_element(spec: &GroupSpec, text: &str) -> Result<GroupElement, GroupError> {
    let names = spec.generator_names();
    let mut cur = Cursor::new(text);
    let g = match spec {
        GroupSpec::Product(fs) if cur.peek() == Some('(') => {
            cur.expect('(')?;
            let mut comps = Vec::with_capacity(fs.len());
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    cur.expect(',')?;
                }
                let offset = spec.generator_offset(i);
                let local_names = &names[offset as usize..(offset + f.rank()) as usize];
                comps.push(word(&mut cur, f, local_names, &[',', ')'])?);
            }
            cur.expect(')')?;
            GroupElement::Product(comps)
        }
        _ => word(&mut cur, spec, &names, &[])?,
    };
    cur.finish()?;
    Ok(g)
}

/// Parses factors until end of input or one of `stop`.
fn word(
    cur: &mut Cursor<'_>,
    spec: &GroupSpec,
    names: &[String],
    stop: &[char],
) -> Result<GroupElement, GroupError> {
    let mut acc = spec.identity();
    loop {
        let c = match cur.peek() {
            None => break,
            Some(c) if stop.contains(&c) => break,
            Some(c) => c,
        };
        if c == '*' || c == '.' || c == '·' {
            cur.pos += c.len_utf8();
            continue;
        }
        if c == '1' {
            cur.pos += 1;
            continue;
        }
        let letter = generator(cur, names)?;
        let mut exp = 1;
        if cur.eat('^') {
            exp = cur.integer()?;
        }
        let base = spec.generator(letter.gen, letter.inv)?;
        let factor = spec.pow(&base, exp)?;
        acc = spec.multiply(&acc, &factor)?;
    }
    Ok(acc)
}

fn generator(cur: &mut Cursor<'_>, names: &[String]) -> Result<Letter, GroupError> {
    cur.skip_ws();
    let rest = cur.rest();
    // Multi-character names `g<digits>` first.
    let digits = rest
        .get(1..)
        .map_or(0, |r| r.chars().take_while(|c| c.is_ascii_digit()).count());
    if digits > 0 && (rest.starts_with('g') || rest.starts_with('G')) {
        let name = rest[..1 + digits].to_ascii_lowercase();
        if let Some(i) = names.iter().position(|n| *n == name) {
            cur.pos += 1 + digits;
            return Ok(Letter::new(i as u32, rest.starts_with('G')));
        }
    }
    let c = rest.chars().next().ok_or_else(|| cur.error("expected a generator"))?;
    let lower = c.to_ascii_lowercase().to_string();
    match names.iter().position(|n| *n == lower) {
        Some(i) if c.is_ascii_alphabetic() => {
            cur.pos += c.len_utf8();
            Ok(Letter::new(i as u32, c.is_ascii_uppercase()))
        }
        _ => Err(cur.error(format!("unknown generator '{c}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_grammar() {
        assert_eq!(parse_group("free(2)").unwrap(), GroupSpec::Free(2));
        assert_eq!(
            parse_group("PRODUCT(free(2), Free(3))").unwrap(),
            GroupSpec::Product(vec![GroupSpec::Free(2), GroupSpec::Free(3)])
        );
        assert_eq!(
            parse_group("freeprod(z, z/2)").unwrap(),
            GroupSpec::FreeProduct(vec![Cyclic::Infinite, Cyclic::Finite(2)])
        );
        assert_eq!(
            parse_group("product(product(free(1),free(1)),free(2))").unwrap(),
            GroupSpec::Product(vec![GroupSpec::Free(1), GroupSpec::Free(1), GroupSpec::Free(2)])
        );
    }

    #[test]
    fn group_errors() {
        for bad in ["free(0)", "free(2", "product(free(2))", "freeprod(z)", "freeprod(z, z/1)", "tree(2)", "free(2) x"] {
            assert!(matches!(parse_group(bad), Err(GroupError::Parse { .. })), "{bad}");
        }
        match parse_group("free(2) x") {
            Err(GroupError::Parse { column, .. }) => assert_eq!(column, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn element_grammar() {
        let f2 = GroupSpec::Free(2);
        let g = parse_element(&f2, "a^2 B a^-1").unwrap();
        assert_eq!(f2.render(&g), "a^2 b^-1 a^-1");
        assert_eq!(parse_element(&f2, "aA").unwrap(), f2.identity());
        assert_eq!(parse_element(&f2, "1").unwrap(), f2.identity());
        assert!(parse_element(&f2, "c").is_err());

        let p = parse_group("product(free(2),free(3))").unwrap();
        let flat = parse_element(&p, "a y a").unwrap();
        let tuple = parse_element(&p, "(a^2, y)").unwrap();
        assert_eq!(flat, tuple);
    }

    #[test]
    fn long_names() {
        let f = GroupSpec::Free(10);
        let names = f.generator_names();
        assert_eq!(names[8], "g8");
        let g = parse_element(&f, "g9 G8 a").unwrap();
        assert_eq!(f.render(&g), "g9 g8^-1 a");
    }
}
