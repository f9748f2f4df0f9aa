//! Groups with exact normal forms: free, free abelian and finite.

mod abelian;
mod free;
mod pair;
pub mod word;

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use abelian::Lattice;
pub use free::FoldedGraph;
pub use pair::{
    CayleyBall, CompatibilityReport, CosetLabel, CosetPartition, GroupPair, PeripheralCertificate,
    Subgroup,
};
pub use pair::parse_table;
pub use word::Syllable;

/// Comparison key realising the ShortLex order on normal forms.
pub type ShortLexKey = (usize, Vec<u32>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    /// `table[g][h]` is the id of `g·h`; id 0 is the identity.
    Finite { table: Vec<Vec<usize>> },
}

/// An element in normal form.
///
/// Free words store signed letters (`+k` is generator `k-1`, `-k` its
/// inverse) and are always freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    Free(Vec<i32>),
    Abelian(Vec<i64>),
    Finite(usize),
}

#[derive(Clone, Debug)]
pub struct Group {
    kind: GroupKind,
    symbols: Vec<String>,
    lookup: HashMap<String, usize>,
    inverses: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupOp {
    Multiply,
    Invert,
}

impl Group {
    pub fn free(rank: usize) -> Self {
        assert!(rank > 0, "rank must be positive");
        let symbols = if rank <= 26 {
            (0..rank).map(|k| ((b'a' + k as u8) as char).to_string()).collect()
        } else {
            (1..=rank).map(|k| format!("a{k}")).collect()
        };
        Self::with_symbols(GroupKind::Free { rank }, symbols, Vec::new())
    }

    pub fn free_abelian(rank: usize) -> Self {
        assert!(rank > 0, "rank must be positive");
        let symbols = if rank <= 3 {
            ["x", "y", "z"][..rank].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=rank).map(|k| format!("x{k}")).collect()
        };
        Self::with_symbols(GroupKind::FreeAbelian { rank }, symbols, Vec::new())
    }

    /// Finite group from element names and a multiplication table.
    /// The first name must be the identity.
    pub fn finite(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("multiplication table must be square and match the names"));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::invalid("table entry out of range"));
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::invalid("first element is not the identity"));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == 0 && table[h][g] == 0) {
                Some(h) => inverses[g] = h,
                None => return Err(Error::invalid(format!("{} has no inverse", names[g]))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::invalid("multiplication table is not associative"));
                    }
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        if !names.iter().all(|s| seen.insert(s.clone())) {
            return Err(Error::invalid("duplicate element names"));
        }
        Ok(Self::with_symbols(GroupKind::Finite { table }, names, inverses))
    }

    /// Symmetric group on `{1..n}` with cycle-notation names. The product
    /// `στ` applies `τ` first.
    pub fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            perms.push(p.clone());
            if !next_permutation(&mut p) {
                break;
            }
        }
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index[&(0..n).map(|x| s[t[x]]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let names = perms.iter().map(|p| cycle_name(p)).collect();
        Self::finite(names, table).expect("symmetric group table is valid")
    }

    /// Cyclic group of order `n` with elements `e, r, r2, ...`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "r".to_string(),
                k => format!("r{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::finite(names, table).expect("cyclic group table is valid")
    }

    fn with_symbols(kind: GroupKind, symbols: Vec<String>, inverses: Vec<usize>) -> Self {
        let lookup = symbols.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self {
            kind,
            symbols,
            lookup,
            inverses,
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Finite { table } => Some(table.len()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// All elements, identity first (finite groups only).
    pub fn elements(&self) -> Option<Vec<Element>> {
        self.order().map(|n| (0..n).map(Element::Finite).collect())
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            GroupKind::Free { .. } => Element::Free(Vec::new()),
            GroupKind::FreeAbelian { rank } => Element::Abelian(vec![0; *rank]),
            GroupKind::Finite { .. } => Element::Finite(0),
        }
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        *g == self.identity()
    }

    /// The standard generators (free and abelian bases, or all non-identity
    /// elements of a finite group).
    pub fn standard_generators(&self) -> Vec<Element> {
        match &self.kind {
            GroupKind::Free { rank } => (1..=*rank as i32).map(|k| Element::Free(vec![k])).collect(),
            GroupKind::FreeAbelian { rank } => (0..*rank)
                .map(|k| {
                    let mut v = vec![0; *rank];
                    v[k] = 1;
                    Element::Abelian(v)
                })
                .collect(),
            GroupKind::Finite { table } => (1..table.len()).map(Element::Finite).collect(),
        }
    }

    pub fn check(&self, g: &Element) -> Result<()> {
        let ok = match (&self.kind, g) {
            (GroupKind::Free { rank }, Element::Free(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupKind::FreeAbelian { rank }, Element::Abelian(v)) => v.len() == *rank,
            (GroupKind::Finite { table }, Element::Finite(x)) => *x < table.len(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MixedGroups)
        }
    }

    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    pub fn inverse(&self, g: &Element) -> Result<Element> {
        self.check(g)?;
        Ok(self.inv(g))
    }

    pub fn group_op(&self, g: &Element, h: &Element, op: GroupOp) -> Result<Element> {
        match op {
            GroupOp::Multiply => self.multiply(g, h),
            GroupOp::Invert => self.inverse(g),
        }
    }

    /// Unchecked product of two valid elements.
    pub(crate) fn mul(&self, g: &Element, h: &Element) -> Element {
        match (g, h) {
            (Element::Free(a), Element::Free(b)) => {
                let mut out = a.clone();
                for &l in b {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Element::Free(out)
            }
            (Element::Abelian(a), Element::Abelian(b)) => {
                Element::Abelian(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Element::Finite(a), Element::Finite(b)) => match &self.kind {
                GroupKind::Finite { table } => Element::Finite(table[*a][*b]),
                _ => unreachable!(),
            },
            _ => panic!("mixed group elements"),
        }
    }

    pub(crate) fn inv(&self, g: &Element) -> Element {
        match g {
            Element::Free(a) => Element::Free(a.iter().rev().map(|l| -l).collect()),
            Element::Abelian(a) => Element::Abelian(a.iter().map(|x| -x).collect()),
            Element::Finite(a) => Element::Finite(self.inverses[*a]),
        }
    }

    /// `g⁻¹h`.
    pub(crate) fn left_quotient(&self, g: &Element, h: &Element) -> Element {
        self.mul(&self.inv(g), h)
    }

    fn symbol_element(&self, name: &str) -> Result<Element> {
        let idx = *self
            .lookup
            .get(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(match &self.kind {
            GroupKind::Free { .. } => Element::Free(vec![idx as i32 + 1]),
            GroupKind::FreeAbelian { rank } => {
                let mut v = vec![0; *rank];
                v[idx] = 1;
                Element::Abelian(v)
            }
            GroupKind::Finite { .. } => Element::Finite(idx),
        })
    }

    pub fn evaluate(&self, word: &[Syllable]) -> Result<Element> {
        let mut acc = self.identity();
        for (name, exp) in word {
            let s = self.symbol_element(name)?;
            let s = if *exp < 0 { self.inv(&s) } else { s };
            for _ in 0..exp.unsigned_abs() {
                acc = self.mul(&acc, &s);
            }
        }
        Ok(acc)
    }

    /// Parse a word and return its normal form.
    pub fn normal_form(&self, word: &str) -> Result<Element> {
        self.evaluate(&word::parse_word(word)?)
    }

    /// Render an element as its normal-form word (`1` for the identity).
    pub fn format(&self, g: &Element) -> String {
        let mut out = String::new();
        let mut push = |name: &str, e: i64| {
            out.push_str(name);
            if e != 1 {
                let _ = write!(out, "^{e}");
            }
        };
        match g {
            Element::Free(w) => {
                let mut i = 0;
                while i < w.len() {
                    let l = w[i];
                    let mut j = i;
                    while j < w.len() && w[j] == l {
                        j += 1;
                    }
                    let e = (j - i) as i64 * l.signum() as i64;
                    push(&self.symbols[l.unsigned_abs() as usize - 1], e);
                    i = j;
                }
            }
            Element::Abelian(v) => {
                for (k, &e) in v.iter().enumerate() {
                    if e != 0 {
                        push(&self.symbols[k], e);
                    }
                }
            }
            Element::Finite(x) => {
                if *x != 0 {
                    push(&self.symbols[*x], 1);
                }
            }
        }
        if out.is_empty() {
            "1".to_string()
        } else {
            out
        }
    }

    /// Key whose order is ShortLex on normal-form words, with letters
    /// ordered `a < a⁻¹ < b < b⁻¹ < …`. Finite elements compare by id.
    pub fn shortlex_key(&self, g: &Element) -> ShortLexKey {
        let code = |gen: usize, neg: bool| 2 * gen as u32 + neg as u32;
        match g {
            Element::Free(w) => {
                let letters: Vec<u32> = w
                    .iter()
                    .map(|&l| code(l.unsigned_abs() as usize - 1, l < 0))
                    .collect();
                (letters.len(), letters)
            }
            Element::Abelian(v) => {
                let mut letters = Vec::new();
                for (k, &e) in v.iter().enumerate() {
                    for _ in 0..e.unsigned_abs() {
                        letters.push(code(k, e < 0));
                    }
                }
                (letters.len(), letters)
            }
            Element::Finite(x) => ((*x != 0) as usize, vec![*x as u32]),
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn cycle_name(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            let _ = write!(out, "{}", x + 1);
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_examples() {
        let f2 = Group::free(2);
        assert_eq!(f2.format(&f2.normal_form("a b b⁻¹").unwrap()), "a");
        let z2 = Group::free_abelian(2);
        assert_eq!(z2.format(&z2.normal_form("x y x").unwrap()), "x^2y");
        let s3 = Group::symmetric(3);
        assert!(s3.is_identity(&s3.normal_form("(12)(12)").unwrap()));
        assert!(matches!(
            f2.normal_form("a q"),
            Err(Error::UnknownSymbol(s)) if s == "q"
        ));
    }

    #[test]
    fn group_op_examples() {
        let f2 = Group::free(2);
        let a = f2.normal_form("a").unwrap();
        let ai = f2.normal_form("a^-1").unwrap();
        assert!(f2.is_identity(&f2.multiply(&a, &ai).unwrap()));
        let ab = f2.normal_form("ab").unwrap();
        assert_eq!(f2.format(&f2.inverse(&ab).unwrap()), "b^-1a^-1");

        let s3 = Group::symmetric(3);
        let p = s3.normal_form("(123)").unwrap();
        let t = s3.normal_form("(12)").unwrap();
        assert_eq!(s3.format(&s3.multiply(&p, &t).unwrap()), "(13)");

        assert!(matches!(
            f2.multiply(&a, &Element::Finite(1)),
            Err(Error::MixedGroups)
        ));
    }

    #[test]
    fn finite_table_validation() {
        let names = vec!["e".to_string(), "t".to_string()];
        assert!(Group::finite(names.clone(), vec![vec![0, 1], vec![1, 0]]).is_ok());
        assert!(Group::finite(names.clone(), vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(Group::finite(names, vec![vec![1, 0], vec![0, 1]]).is_err());
        assert_eq!(Group::symmetric(3).order(), Some(6));
        assert_eq!(Group::symmetric(4).order(), Some(24));
    }

    #[test]
    fn shortlex_orders_by_length_first() {
        let f2 = Group::free(2);
        let k = |w: &str| f2.shortlex_key(&f2.normal_form(w).unwrap());
        assert!(k("1") < k("a"));
        assert!(k("a") < k("a^-1"));
        assert!(k("a^-1") < k("b"));
        assert!(k("b^-1") < k("aa"));
    }
}
