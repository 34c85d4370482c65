//! Exact element algebra for free groups, direct products of them, and free
//! products of cyclic groups.
//!
//! Elements are stored structurally in normal form, so `==` and `Hash` are
//! equality of normal forms. All operations go through a [`GroupSpec`],
//! which validates that the element shapes match the declared group.

pub(crate) mod parse;
mod sample;
mod word;

use std::fmt;

use thiserror::Error;

pub use sample::{random_element, random_word};
pub use word::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator index {gen} out of range for rank {rank}")]
    LetterOutOfRange { gen: u32, rank: u32 },
    #[error("element does not belong to group {0}")]
    SpecMismatch(String),
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// A cyclic free factor: `Z` or `Z/k` with `k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cyclic {
    Infinite,
    Finite(u32),
}

impl Cyclic {
    /// Normalizes an exponent; `0` means the trivial syllable.
    pub fn normalize(self, e: i64) -> i64 {
        match self {
            Cyclic::Infinite => e,
            Cyclic::Finite(k) => e.rem_euclid(k as i64),
        }
    }

    /// Word length of `t^e` over `{t, t^-1}`.
    pub fn syllable_len(self, e: i64) -> u64 {
        match self {
            Cyclic::Infinite => e.unsigned_abs(),
            Cyclic::Finite(k) => {
                let e = e.rem_euclid(k as i64) as u64;
                e.min(k as u64 - e)
            }
        }
    }

    pub fn is_torsion(self) -> bool {
        matches!(self, Cyclic::Finite(_))
    }
}

impl fmt::Display for Cyclic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cyclic::Infinite => write!(f, "z"),
            Cyclic::Finite(k) => write!(f, "z/{k}"),
        }
    }
}

/// `t_factor^exp`, exponent normalized for the factor, never trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: u32,
    pub exp: i64,
}

/// A declared group with its standard generating set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Free(u32),
    Product(Vec<GroupSpec>),
    FreeProduct(Vec<Cyclic>),
}

/// Element in normal form; the shape mirrors the owning [`GroupSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Free(Word),
    Product(Vec<GroupElement>),
    FreeProduct(Vec<Syllable>),
}

/// `g = conjugator · core · conjugator^-1` with `core` cyclically reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicForm {
    pub conjugator: GroupElement,
    pub core: GroupElement,
}

const ALPHABETS: [&str; 3] = ["abcdefgh", "xyzwuvst", "pqrmnojk"];

impl GroupSpec {
    pub fn free(rank: u32) -> Result<Self, GroupError> {
        if rank == 0 {
            return Err(GroupError::InvalidSpec("free group rank must be >= 1".into()));
        }
        Ok(GroupSpec::Free(rank))
    }

    /// Direct product; nested products are flattened.
    pub fn product(factors: Vec<GroupSpec>) -> Result<Self, GroupError> {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                GroupSpec::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() < 2 {
            return Err(GroupError::InvalidSpec("a product needs >= 2 factors".into()));
        }
        Ok(GroupSpec::Product(flat))
    }

    pub fn free_product(factors: Vec<Cyclic>) -> Result<Self, GroupError> {
        if factors.len() < 2 {
            return Err(GroupError::InvalidSpec(
                "a free product needs >= 2 factors".into(),
            ));
        }
        if let Some(Cyclic::Finite(k)) = factors.iter().find(|c| matches!(c, Cyclic::Finite(k) if *k < 2)) {
            return Err(GroupError::InvalidSpec(format!("cyclic order {k} < 2")));
        }
        Ok(GroupSpec::FreeProduct(factors))
    }

    /// Parses `free(k)`, `product(spec, ...)`, `freeprod(z, z/2, ...)`.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        parse::parse_group(text)
    }

    /// Number of standard generators (inverses not counted).
    pub fn rank(&self) -> u32 {
        match self {
            GroupSpec::Free(k) => *k,
            GroupSpec::FreeProduct(fs) => fs.len() as u32,
            GroupSpec::Product(fs) => fs.iter().map(|f| f.rank()).sum(),
        }
    }

    pub fn factors(&self) -> Option<&[GroupSpec]> {
        match self {
            GroupSpec::Product(fs) => Some(fs),
            _ => None,
        }
    }

    /// Global index of the first generator of product factor `i`.
    pub fn generator_offset(&self, factor: usize) -> u32 {
        match self {
            GroupSpec::Product(fs) => fs[..factor].iter().map(|f| f.rank()).sum(),
            _ => 0,
        }
    }

    /// Names of the standard generators in global order.
    pub fn generator_names(&self) -> Vec<String> {
        fn local(alphabet: usize, n: u32, offset: u32) -> Vec<String> {
            (0..n)
                .map(|i| match ALPHABETS.get(alphabet).and_then(|a| a.chars().nth(i as usize)) {
                    Some(c) => c.to_string(),
                    None => format!("g{}", offset + i),
                })
                .collect()
        }
        match self {
            GroupSpec::Free(_) | GroupSpec::FreeProduct(_) => local(0, self.rank(), 0),
            GroupSpec::Product(fs) => {
                let mut out = Vec::new();
                let mut offset = 0;
                for (i, f) in fs.iter().enumerate() {
                    out.extend(local(i, f.rank(), offset));
                    offset += f.rank();
                }
                out
            }
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::Free(_) => GroupElement::Free(Word::identity()),
            GroupSpec::FreeProduct(_) => GroupElement::FreeProduct(Vec::new()),
            GroupSpec::Product(fs) => GroupElement::Product(fs.iter().map(|f| f.identity()).collect()),
        }
    }

    /// Checks that `g` is a normal-form element of this group.
    pub fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        let ok = match (self, g) {
            (GroupSpec::Free(k), GroupElement::Free(w)) => {
                w.letters().iter().all(|l| l.gen < *k) && w.is_reduced()
            }
            (GroupSpec::FreeProduct(fs), GroupElement::FreeProduct(sy)) => {
                sy.iter().all(|s| {
                    (s.factor as usize) < fs.len()
                        && s.exp != 0
                        && fs[s.factor as usize].normalize(s.exp) == s.exp
                }) && sy.windows(2).all(|w| w[0].factor != w[1].factor)
            }
            (GroupSpec::Product(fs), GroupElement::Product(cs)) => {
                fs.len() == cs.len() && fs.iter().zip(cs).all(|(f, c)| f.check(c).is_ok())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::SpecMismatch(self.to_string()))
        }
    }

    /// A generator `t_i` (global index) or its inverse as an element.
    pub fn generator(&self, gen: u32, inv: bool) -> Result<GroupElement, GroupError> {
        let rank = self.rank();
        if gen >= rank {
            return Err(GroupError::LetterOutOfRange { gen, rank });
        }
        Ok(match self {
            GroupSpec::Free(_) => GroupElement::Free(Word::from_reduced(vec![Letter::new(gen, inv)])),
            GroupSpec::FreeProduct(fs) => {
                let c = fs[gen as usize];
                let exp = c.normalize(if inv { -1 } else { 1 });
                GroupElement::FreeProduct(vec![Syllable { factor: gen, exp }])
            }
            GroupSpec::Product(fs) => {
                let mut comps: Vec<GroupElement> = fs.iter().map(|f| f.identity()).collect();
                let mut local = gen;
                for (i, f) in fs.iter().enumerate() {
                    if local < f.rank() {
                        comps[i] = f.generator(local, inv)?;
                        break;
                    }
                    local -= f.rank();
                }
                GroupElement::Product(comps)
            }
        })
    }

    /// `S ∪ S^-1` in letter order `a, A, b, B, ...`, without duplicates
    /// (a `Z/2` generator is its own inverse).
    pub fn symmetric_generators(&self) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = Vec::new();
        for g in 0..self.rank() {
            for inv in [false, true] {
                let e = self.generator(g, inv).expect("index in range");
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        out
    }

    /// Builds an element from a raw letter sequence over the global generators.
    pub fn from_letters<I>(&self, letters: I) -> Result<GroupElement, GroupError>
    where
        I: IntoIterator<Item = Letter>,
    {
        match self {
            GroupSpec::Free(k) => Ok(GroupElement::Free(Word::reduce(letters, *k)?)),
            _ => {
                let mut acc = self.identity();
                for l in letters {
                    acc = self.multiply(&acc, &self.generator(l.gen, l.inv)?)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        match (self, g, h) {
            (GroupSpec::Free(_), GroupElement::Free(a), GroupElement::Free(b)) => {
                Ok(GroupElement::Free(a.mul(b)))
            }
            (GroupSpec::FreeProduct(fs), GroupElement::FreeProduct(a), GroupElement::FreeProduct(b)) => {
                Ok(GroupElement::FreeProduct(syllable_mul(fs, a, b)))
            }
            (GroupSpec::Product(fs), GroupElement::Product(a), GroupElement::Product(b))
                if a.len() == fs.len() && b.len() == fs.len() =>
            {
                let comps = fs
                    .iter()
                    .zip(a.iter().zip(b))
                    .map(|(f, (x, y))| f.multiply(x, y))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(GroupElement::Product(comps))
            }
            _ => Err(GroupError::SpecMismatch(self.to_string())),
        }
    }

    /// Product of a sequence, left to right.
    pub fn product_of<'a, I>(&self, elems: I) -> Result<GroupElement, GroupError>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let mut acc = self.identity();
        for e in elems {
            acc = self.multiply(&acc, e)?;
        }
        Ok(acc)
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        match (self, g) {
            (_, GroupElement::Free(w)) => GroupElement::Free(w.inverse()),
            (GroupSpec::FreeProduct(fs), GroupElement::FreeProduct(sy)) => GroupElement::FreeProduct(
                sy.iter()
                    .rev()
                    .map(|s| Syllable {
                        factor: s.factor,
                        exp: fs[s.factor as usize].normalize(-s.exp),
                    })
                    .collect(),
            ),
            (GroupSpec::Product(fs), GroupElement::Product(cs)) => {
                GroupElement::Product(fs.iter().zip(cs).map(|(f, c)| f.inverse(c)).collect())
            }
            // Shape mismatch: inverse is infallible by contract, so fall back
            // to the structural inverse without spec data.
            (_, GroupElement::FreeProduct(sy)) => GroupElement::FreeProduct(
                sy.iter().rev().map(|s| Syllable { factor: s.factor, exp: -s.exp }).collect(),
            ),
            (_, GroupElement::Product(cs)) => {
                GroupElement::Product(cs.iter().map(|c| self.inverse(c)).collect())
            }
        }
    }

    pub fn pow(&self, g: &GroupElement, n: i64) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        Ok(match (self, g) {
            (_, GroupElement::Free(w)) => GroupElement::Free(w.pow(n)),
            (GroupSpec::Product(fs), GroupElement::Product(cs)) => GroupElement::Product(
                fs.iter()
                    .zip(cs)
                    .map(|(f, c)| f.pow(c, n))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            (GroupSpec::FreeProduct(fs), GroupElement::FreeProduct(_)) => {
                if n == 0 {
                    return Ok(self.identity());
                }
                let base = if n < 0 { self.inverse(g) } else { g.clone() };
                let n = n.unsigned_abs();
                let form = self.cyclic_reduce(&base)?;
                let core = match &form.core {
                    GroupElement::FreeProduct(c) => c.clone(),
                    _ => unreachable!(),
                };
                let powered = if core.len() == 1 {
                    let s = core[0];
                    let exp = fs[s.factor as usize].normalize(s.exp * n as i64);
                    if exp == 0 {
                        Vec::new()
                    } else {
                        vec![Syllable { factor: s.factor, exp }]
                    }
                } else {
                    let mut v = Vec::with_capacity(core.len() * n as usize);
                    for _ in 0..n {
                        v.extend_from_slice(&core);
                    }
                    v
                };
                let u = &form.conjugator;
                let mid = GroupElement::FreeProduct(powered);
                let left = self.multiply(u, &mid)?;
                self.multiply(&left, &self.inverse(u))?
            }
            _ => unreachable!("checked above"),
        })
    }

    /// Length in the word metric of the standard generators.
    pub fn word_length(&self, g: &GroupElement) -> u64 {
        match (self, g) {
            (_, GroupElement::Free(w)) => w.len() as u64,
            (GroupSpec::FreeProduct(fs), GroupElement::FreeProduct(sy)) => sy
                .iter()
                .map(|s| fs[s.factor as usize].syllable_len(s.exp))
                .sum(),
            (GroupSpec::Product(fs), GroupElement::Product(cs)) => {
                fs.iter().zip(cs).map(|(f, c)| f.word_length(c)).sum()
            }
            (_, GroupElement::FreeProduct(sy)) => sy.iter().map(|s| s.exp.unsigned_abs()).sum(),
            (_, GroupElement::Product(cs)) => cs.iter().map(|c| self.word_length(c)).sum(),
        }
    }

    /// Word-metric distance `|g^-1 h|`.
    pub fn distance(&self, g: &GroupElement, h: &GroupElement) -> Result<u64, GroupError> {
        Ok(self.word_length(&self.multiply(&self.inverse(g), h)?))
    }

    /// Cyclic reduction; componentwise for direct products.
    pub fn cyclic_reduce(&self, g: &GroupElement) -> Result<CyclicForm, GroupError> {
        self.check(g)?;
        Ok(match (self, g) {
            (_, GroupElement::Free(w)) => {
                let (u, c) = w.cyclic_split();
                CyclicForm {
                    conjugator: GroupElement::Free(u),
                    core: GroupElement::Free(c),
                }
            }
            (GroupSpec::Product(fs), GroupElement::Product(cs)) => {
                let forms = fs
                    .iter()
                    .zip(cs)
                    .map(|(f, c)| f.cyclic_reduce(c))
                    .collect::<Result<Vec<_>, _>>()?;
                let (us, cores): (Vec<_>, Vec<_>) =
                    forms.into_iter().map(|f| (f.conjugator, f.core)).unzip();
                CyclicForm {
                    conjugator: GroupElement::Product(us),
                    core: GroupElement::Product(cores),
                }
            }
            (GroupSpec::FreeProduct(fs), GroupElement::FreeProduct(sy)) => {
                let (u, c) = syllable_cyclic_split(fs, sy);
                CyclicForm {
                    conjugator: GroupElement::FreeProduct(u),
                    core: GroupElement::FreeProduct(c),
                }
            }
            _ => unreachable!("checked above"),
        })
    }

    pub fn commutes(&self, g: &GroupElement, h: &GroupElement) -> Result<bool, GroupError> {
        Ok(self.multiply(g, h)? == self.multiply(h, g)?)
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        match g {
            GroupElement::Free(w) => w.is_empty(),
            GroupElement::FreeProduct(s) => s.is_empty(),
            GroupElement::Product(cs) => cs.iter().all(|c| self.is_identity(c)),
        }
    }

    /// Projection to product factor `i`, or the element itself for `None`.
    pub fn coordinate<'a>(
        &self,
        g: &'a GroupElement,
        factor: Option<usize>,
    ) -> Result<&'a GroupElement, GroupError> {
        match (factor, g) {
            (None, _) => Ok(g),
            (Some(i), GroupElement::Product(cs)) if i < cs.len() => Ok(&cs[i]),
            _ => Err(GroupError::SpecMismatch(self.to_string())),
        }
    }

    /// The spec of product factor `i`, or `self` for `None`.
    pub fn factor_spec(&self, factor: Option<usize>) -> Result<&GroupSpec, GroupError> {
        match (factor, self) {
            (None, _) => Ok(self),
            (Some(i), GroupSpec::Product(fs)) if i < fs.len() => Ok(&fs[i]),
            _ => Err(GroupError::InvalidSpec(format!(
                "factor {} does not exist in {}",
                factor.map_or(0, |i| i + 1),
                self
            ))),
        }
    }

    /// Exponent sum of every global generator; torsion factors report the
    /// normalized exponent total modulo their order.
    pub fn exponent_sums(&self, g: &GroupElement) -> Vec<i64> {
        let mut out = vec![0i64; self.rank() as usize];
        self.add_exponent_sums(g, 0, &mut out);
        out
    }

    fn add_exponent_sums(&self, g: &GroupElement, offset: usize, out: &mut [i64]) {
        match (self, g) {
            (_, GroupElement::Free(w)) => {
                for l in w.letters() {
                    out[offset + l.gen as usize] += l.sign();
                }
            }
            (GroupSpec::FreeProduct(fs), GroupElement::FreeProduct(sy)) => {
                for s in sy {
                    let i = offset + s.factor as usize;
                    out[i] = fs[s.factor as usize].normalize(out[i] + s.exp);
                }
            }
            (GroupSpec::Product(fs), GroupElement::Product(cs)) => {
                let mut off = offset;
                for (f, c) in fs.iter().zip(cs) {
                    f.add_exponent_sums(c, off, out);
                    off += f.rank() as usize;
                }
            }
            _ => {}
        }
    }

    /// Normal-form word over the global generators (a geodesic).
    pub fn geodesic_letters(&self, g: &GroupElement) -> Vec<Letter> {
        match (self, g) {
            (_, GroupElement::Free(w)) => w.letters().to_vec(),
            (GroupSpec::FreeProduct(fs), GroupElement::FreeProduct(sy)) => {
                let mut out = Vec::new();
                for s in sy {
                    let c = fs[s.factor as usize];
                    let len = c.syllable_len(s.exp);
                    let positive = match c {
                        Cyclic::Infinite => s.exp > 0,
                        Cyclic::Finite(k) => (s.exp as u64) <= k as u64 - s.exp as u64,
                    };
                    out.extend(std::iter::repeat_n(Letter::new(s.factor, !positive), len as usize));
                }
                out
            }
            (GroupSpec::Product(fs), GroupElement::Product(cs)) => {
                let mut out = Vec::new();
                let mut offset = 0;
                for (f, c) in fs.iter().zip(cs) {
                    out.extend(
                        f.geodesic_letters(c)
                            .into_iter()
                            .map(|l| Letter::new(l.gen + offset, l.inv)),
                    );
                    offset += f.rank();
                }
                out
            }
            _ => Vec::new(),
        }
    }

    pub fn render(&self, g: &GroupElement) -> String {
        struct R<'a>(&'a GroupSpec, &'a GroupElement, &'a [String], u32);
        impl fmt::Display for R<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let R(spec, g, names, offset) = *self;
                match (spec, g) {
                    (_, GroupElement::Free(w)) => {
                        word::render_letters(f, w.letters(), &|i| names[(i + offset) as usize].clone())
                    }
                    (GroupSpec::FreeProduct(fs), GroupElement::FreeProduct(sy)) => {
                        if sy.is_empty() {
                            return write!(f, "1");
                        }
                        for (i, s) in sy.iter().enumerate() {
                            if i > 0 {
                                write!(f, " ")?;
                            }
                            let e = match fs[s.factor as usize] {
                                Cyclic::Finite(k) if 2 * s.exp > k as i64 => s.exp - k as i64,
                                _ => s.exp,
                            };
                            let name = &names[(s.factor + offset) as usize];
                            if e == 1 {
                                write!(f, "{name}")?;
                            } else {
                                write!(f, "{name}^{e}")?;
                            }
                        }
                        Ok(())
                    }
                    (GroupSpec::Product(fs), GroupElement::Product(cs)) => {
                        write!(f, "(")?;
                        let mut off = 0;
                        for (i, (fspec, c)) in fs.iter().zip(cs).enumerate() {
                            if i > 0 {
                                write!(f, ", ")?;
                            }
                            write!(f, "{}", R(fspec, c, names, off))?;
                            off += fspec.rank();
                        }
                        write!(f, ")")
                    }
                    _ => write!(f, "<mismatched element>"),
                }
            }
        }
        let names = self.generator_names();
        R(self, g, &names, 0).to_string()
    }

    /// Parses an element written as a word over the generator names
    /// (`a^2 b A`), or as a tuple `(a^2, y)` for direct products.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        parse::parse_element(self, text)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free(k) => write!(f, "free({k})"),
            GroupSpec::Product(fs) => {
                write!(f, "product(")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            GroupSpec::FreeProduct(fs) => {
                write!(f, "freeprod(")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub(crate) fn syllable_mul(fs: &[Cyclic], a: &[Syllable], b: &[Syllable]) -> Vec<Syllable> {
    let mut out: Vec<Syllable> = a.to_vec();
    let mut rest = b.iter();
    for s in rest.by_ref() {
        match out.last_mut() {
            Some(last) if last.factor == s.factor => {
                let exp = fs[s.factor as usize].normalize(last.exp + s.exp);
                if exp == 0 {
                    out.pop();
                    continue;
                }
                last.exp = exp;
                break;
            }
            _ => {
                out.push(*s);
                break;
            }
        }
    }
    out.extend(rest.copied());
    out
}

/// `sy = u c u^-1` with `c` cyclically reduced (first and last syllables in
/// distinct factors, or at most one syllable).
fn syllable_cyclic_split(fs: &[Cyclic], sy: &[Syllable]) -> (Vec<Syllable>, Vec<Syllable>) {
    let mut u: Vec<Syllable> = Vec::new();
    let mut c: Vec<Syllable> = sy.to_vec();
    loop {
        // Strip inverse first/last pairs: c = x M x^-1.
        let mut k = 0;
        while 2 * k + 1 < c.len() {
            let (x, y) = (c[k], c[c.len() - 1 - k]);
            if x.factor == y.factor && fs[x.factor as usize].normalize(x.exp + y.exp) == 0 {
                k += 1;
            } else {
                break;
            }
        }
        if k > 0 {
            u = syllable_mul(fs, &u, &c[..k]);
            c = c[k..c.len() - k].to_vec();
        }
        if c.len() < 2 {
            break;
        }
        let (x, y) = (c[0], c[c.len() - 1]);
        if x.factor != y.factor {
            break;
        }
        // c = x M y with x, y in one factor: conjugate by x to get M (x y).
        u = syllable_mul(fs, &u, &[x]);
        let merged = Syllable {
            factor: x.factor,
            exp: fs[x.factor as usize].normalize(x.exp + y.exp),
        };
        let mut next: Vec<Syllable> = c[1..c.len() - 1].to_vec();
        if merged.exp != 0 {
            next = syllable_mul(fs, &next, &[merged]);
        }
        c = next;
    }
    (u, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2xf3() -> GroupSpec {
        GroupSpec::parse("product(free(2),free(3))").unwrap()
    }

    #[test]
    fn componentwise_product() {
        let g = f2xf3();
        let x = g.parse_element("(a, y)").unwrap();
        let y = g.parse_element("(A, y)").unwrap();
        let p = g.multiply(&x, &y).unwrap();
        assert_eq!(p, g.parse_element("(1, y^2)").unwrap());
        assert_eq!(g.render(&p), "(1, y^2)");
    }

    #[test]
    fn inverse_is_anti_homomorphism() {
        let f2 = GroupSpec::free(2).unwrap();
        let ab = f2.parse_element("a b").unwrap();
        assert_eq!(f2.inverse(&ab), f2.parse_element("B A").unwrap());
        assert_eq!(f2.inverse(&f2.identity()), f2.identity());
    }

    #[test]
    fn word_length_in_product() {
        let g = f2xf3();
        assert_eq!(g.word_length(&g.parse_element("(a^2, y)").unwrap()), 3);
        assert_eq!(g.word_length(&g.identity()), 0);
    }

    #[test]
    fn cyclic_reduce_free() {
        let f2 = GroupSpec::free(2).unwrap();
        let g = f2.parse_element("a b A").unwrap();
        let form = f2.cyclic_reduce(&g).unwrap();
        assert_eq!(form.conjugator, f2.parse_element("a").unwrap());
        assert_eq!(form.core, f2.parse_element("b").unwrap());
        let h = f2.parse_element("a b").unwrap();
        let form = f2.cyclic_reduce(&h).unwrap();
        assert_eq!(form.conjugator, f2.identity());
        assert_eq!(form.core, h);
    }

    #[test]
    fn free_product_torsion() {
        let g = GroupSpec::parse("freeprod(z, z/2)").unwrap();
        let b = g.parse_element("b").unwrap();
        assert_eq!(g.multiply(&b, &b).unwrap(), g.identity());
        assert_eq!(g.inverse(&b), b);
        let t = g.parse_element("a^2 b a^-1").unwrap();
        let form = g.cyclic_reduce(&t).unwrap();
        let back = g
            .product_of([&form.conjugator, &form.core, &g.inverse(&form.conjugator)])
            .unwrap();
        assert_eq!(back, t);
        assert_eq!(g.word_length(&form.core), 2);
        assert_eq!(g.symmetric_generators().len(), 3);
    }

    #[test]
    fn free_product_z3_lengths() {
        let g = GroupSpec::parse("freeprod(z/3, z/3)").unwrap();
        let a2 = g.parse_element("a^2").unwrap();
        assert_eq!(g.word_length(&a2), 1);
        assert_eq!(g.pow(&a2, 3).unwrap(), g.identity());
        assert_eq!(g.render(&a2), "a^-1");
    }

    #[test]
    fn mismatch_detected() {
        let f2 = GroupSpec::free(2).unwrap();
        let g = f2xf3();
        assert!(g.multiply(&f2.identity(), &g.identity()).is_err());
        assert!(g.check(&f2.identity()).is_err());
    }
}
