//! Subgroups, group pairs, Cayley balls and coset labels.

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::Path;

use serde::Serialize;

use super::abelian::Lattice;
use super::free::FoldedGraph;
use super::word::parse_word_at;
use super::{Element, Group, GroupKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Membership {
    Free(FoldedGraph),
    Abelian(Lattice),
    Finite(Vec<bool>),
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    generators: Vec<Element>,
    membership: Membership,
}

impl Subgroup {
    pub fn new(group: &Group, generators: Vec<Element>) -> Result<Self> {
        for g in &generators {
            group.check(g)?;
        }
        let membership = match group.kind() {
            GroupKind::Free { .. } => Membership::Free(FoldedGraph::new(
                &generators
                    .iter()
                    .map(|g| match g {
                        Element::Free(w) => w.clone(),
                        _ => unreachable!(),
                    })
                    .collect::<Vec<_>>(),
            )),
            GroupKind::FreeAbelian { rank } => Membership::Abelian(Lattice::new(
                *rank,
                &generators
                    .iter()
                    .map(|g| match g {
                        Element::Abelian(v) => v.clone(),
                        _ => unreachable!(),
                    })
                    .collect::<Vec<_>>(),
            )),
            GroupKind::Finite { table } => {
                let mut inside = vec![false; table.len()];
                inside[0] = true;
                let mut queue = vec![0usize];
                while let Some(x) = queue.pop() {
                    for g in &generators {
                        let Element::Finite(g) = g else { unreachable!() };
                        let y = table[x][*g];
                        if !inside[y] {
                            inside[y] = true;
                            queue.push(y);
                        }
                    }
                }
                Membership::Finite(inside)
            }
        };
        Ok(Self {
            generators,
            membership,
        })
    }

    pub fn trivial(group: &Group) -> Self {
        Self::new(group, Vec::new()).expect("trivial subgroup")
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Exact membership test. Elements of another group kind are rejected.
    pub fn contains(&self, g: &Element) -> bool {
        match (&self.membership, g) {
            (Membership::Free(a), Element::Free(w)) => a.accepts(w),
            (Membership::Abelian(l), Element::Abelian(v)) => l.contains(v),
            (Membership::Finite(s), Element::Finite(x)) => s.get(*x).copied().unwrap_or(false),
            _ => false,
        }
    }

    /// Element count for finite groups.
    pub fn order(&self) -> Option<usize> {
        match &self.membership {
            Membership::Finite(s) => Some(s.iter().filter(|&&b| b).count()),
            _ => None,
        }
    }
}

/// A group with peripheral subgroups `Γ_i` and a generating set `S`.
#[derive(Clone, Debug)]
pub struct GroupPair {
    pub group: Group,
    pub peripherals: Vec<Subgroup>,
    pub labels: Vec<String>,
    pub gens: Vec<Element>,
}

/// Radius-`R` ball of the Cayley graph about the identity, ordered by
/// distance and then ShortLex.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub radius: usize,
    pub elements: Vec<Element>,
    pub dist: Vec<usize>,
    index: HashMap<Element, usize>,
}

impl CayleyBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetLabel {
    pub index: usize,
    pub representative: Element,
}

/// Partition of a ball into the traces of the cosets `gΓ_i`.
#[derive(Clone, Debug)]
pub struct CosetPartition {
    pub index: usize,
    /// Class of each ball element.
    pub class_of: Vec<usize>,
    /// Ball index of the ShortLex-least member of each class.
    pub reps: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeripheralCertificate {
    pub index: usize,
    pub label: String,
    /// `S ∩ Γ_i`.
    pub subset: Vec<String>,
    /// Each generator of `Γ_i` with a word over the subset expressing it,
    /// or `None` when the search budget ran out before finding one.
    pub expressions: Vec<(String, Option<Vec<String>>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub generates: bool,
    pub failing_index: Option<usize>,
    pub certificates: Vec<PeripheralCertificate>,
}

const EXPRESSION_BUDGET: usize = 200_000;

impl GroupPair {
    pub fn new(
        group: Group,
        peripherals: Vec<Subgroup>,
        labels: Vec<String>,
        gens: Vec<Element>,
    ) -> Result<Self> {
        if peripherals.is_empty() {
            return Err(Error::invalid("at least one peripheral subgroup is required"));
        }
        if labels.len() != peripherals.len() {
            return Err(Error::invalid("one label per peripheral subgroup"));
        }
        let mut seen = HashSet::new();
        let mut s = Vec::new();
        for g in gens {
            group.check(&g)?;
            if group.is_identity(&g) {
                return Err(Error::invalid("generating set contains the identity"));
            }
            if seen.insert(g.clone()) {
                s.push(g);
            }
        }
        for g in &s {
            if !seen.contains(&group.inv(g)) {
                return Err(Error::invalid(format!(
                    "generating set is not symmetric: missing inverse of {}",
                    group.format(g)
                )));
            }
        }
        Ok(Self {
            group,
            peripherals,
            labels,
            gens: s,
        })
    }

    /// Pair with the standard symmetric generating set.
    pub fn with_standard_gens(group: Group, peripherals: Vec<Subgroup>) -> Result<Self> {
        let mut gens = Vec::new();
        for g in group.standard_generators() {
            let gi = group.inv(&g);
            gens.push(g);
            if !gens.contains(&gi) {
                gens.push(gi);
            }
        }
        let labels = (1..=peripherals.len()).map(|i| i.to_string()).collect();
        Self::new(group, peripherals, labels, gens)
    }

    pub fn index_count(&self) -> usize {
        self.peripherals.len()
    }

    /// `S ∩ Γ_i`.
    pub fn peripheral_gens(&self, i: usize) -> Vec<Element> {
        self.gens
            .iter()
            .filter(|s| self.peripherals[i].contains(s))
            .cloned()
            .collect()
    }

    /// `g⁻¹h ∈ Γ_i`.
    pub fn same_coset(&self, i: usize, g: &Element, h: &Element) -> bool {
        self.peripherals[i].contains(&self.group.left_quotient(g, h))
    }

    pub fn ball(&self, radius: usize) -> CayleyBall {
        let id = self.group.identity();
        let mut dist: HashMap<Element, usize> = HashMap::new();
        dist.insert(id.clone(), 0);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            let d = dist[&g];
            if d == radius {
                continue;
            }
            for s in &self.gens {
                let h = self.group.mul(&g, s);
                if !dist.contains_key(&h) {
                    dist.insert(h.clone(), d + 1);
                    order.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        let mut keyed: Vec<_> = order
            .into_iter()
            .map(|g| ((dist[&g], self.group.shortlex_key(&g)), g))
            .collect();
        keyed.sort();
        let elements: Vec<Element> = keyed.iter().map(|(_, g)| g.clone()).collect();
        let dist = keyed.iter().map(|((d, _), _)| *d).collect();
        let index = elements.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        CayleyBall {
            radius,
            elements,
            dist,
            index,
        }
    }

    pub fn coset_partition(&self, ball: &CayleyBall, i: usize) -> CosetPartition {
        let mut class_of = vec![usize::MAX; ball.len()];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (v, g) in ball.elements.iter().enumerate() {
            let found = members
                .iter()
                .position(|m| self.same_coset(i, &ball.elements[m[0]], g));
            match found {
                Some(c) => {
                    class_of[v] = c;
                    members[c].push(v);
                }
                None => {
                    class_of[v] = members.len();
                    members.push(vec![v]);
                }
            }
        }
        let reps = members
            .iter()
            .map(|m| {
                *m.iter()
                    .min_by_key(|&&v| self.group.shortlex_key(&ball.elements[v]))
                    .unwrap()
            })
            .collect();
        CosetPartition {
            index: i,
            class_of,
            reps,
            members,
        }
    }

    /// ShortLex-least element of `gΓ_i` inside the ball.
    pub fn coset_label(&self, ball: &CayleyBall, g: &Element, i: usize) -> Result<CosetLabel> {
        self.group.check(g)?;
        if i >= self.peripherals.len() {
            return Err(Error::invalid(format!("no peripheral with index {i}")));
        }
        if ball.index_of(g).is_none() {
            return Err(Error::OutsideRegion(self.group.format(g)));
        }
        let representative = ball
            .elements
            .iter()
            .filter(|h| self.same_coset(i, g, h))
            .min_by_key(|h| self.group.shortlex_key(h))
            .cloned()
            .expect("g lies in its own coset");
        Ok(CosetLabel {
            index: i,
            representative,
        })
    }

    /// Whether `S` generates the whole group.
    pub fn generates(&self) -> bool {
        let h = Subgroup::new(&self.group, self.gens.clone()).expect("valid generators");
        match self.group.order() {
            Some(n) => h.order() == Some(n),
            None => self
                .group
                .standard_generators()
                .iter()
                .all(|g| h.contains(g)),
        }
    }

    pub fn check_compatible(&self) -> CompatibilityReport {
        let generates = self.generates();
        let mut failing_index = None;
        let mut certificates = Vec::new();
        for (i, p) in self.peripherals.iter().enumerate() {
            let t = self.peripheral_gens(i);
            let sub = Subgroup::new(&self.group, t.clone()).expect("valid generators");
            let mut expressions = Vec::new();
            for g in p.generators() {
                if !sub.contains(g) {
                    failing_index.get_or_insert(i);
                    expressions.push((self.group.format(g), None));
                    continue;
                }
                let expr = express(&self.group, &t, g, EXPRESSION_BUDGET).map(|w| {
                    w.iter().map(|&k| self.group.format(&t[k])).collect()
                });
                expressions.push((self.group.format(g), expr));
            }
            certificates.push(PeripheralCertificate {
                index: i,
                label: self.labels[i].clone(),
                subset: t.iter().map(|s| self.group.format(s)).collect(),
                expressions,
            });
        }
        CompatibilityReport {
            compatible: generates && failing_index.is_none(),
            generates,
            failing_index,
            certificates,
        }
    }

    pub fn require_compatible(&self) -> Result<()> {
        let r = self.check_compatible();
        if r.compatible {
            Ok(())
        } else if !r.generates {
            Err(Error::invalid("generating set does not generate the group"))
        } else {
            Err(Error::invalid(format!(
                "S does not generate peripheral {}",
                self.labels[r.failing_index.unwrap()]
            )))
        }
    }

    /// Parse a pair description. Relative table paths resolve against
    /// `base_dir`.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut group: Option<Group> = None;
        let mut periph_words: Vec<(String, Vec<(String, usize)>)> = Vec::new();
        let mut gen_words: Option<Vec<(String, usize)>> = None;
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let line_start = offset;
            offset += raw.len();
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let lead = line.len() - line.trim_start().len();
            let at = line_start + lead;
            if let Some(rest) = trimmed.strip_prefix("group") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let g = match parts.as_slice() {
                    ["free", n] => Group::free(parse_rank(n, at)?),
                    ["abelian", n] => Group::free_abelian(parse_rank(n, at)?),
                    ["symmetric", n] => Group::symmetric(parse_rank(n, at)?),
                    ["cyclic", n] => Group::cyclic(parse_rank(n, at)?),
                    ["finite", path] => {
                        let p = match base_dir {
                            Some(b) => b.join(path),
                            None => Path::new(path).to_path_buf(),
                        };
                        parse_table(&std::fs::read_to_string(p)?)?
                    }
                    _ => return Err(Error::parse(at, "expected `group free|abelian|symmetric|cyclic|finite ...`")),
                };
                group = Some(g);
            } else if let Some(rest) = trimmed.strip_prefix("peripheral") {
                let (label, words) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(at, "expected `peripheral <label>: words`"))?;
                let colon = at + "peripheral".len() + label.len() + 1;
                periph_words.push((label.trim().to_string(), split_words(words, colon)));
            } else if let Some(rest) = trimmed.strip_prefix("gens:") {
                gen_words = Some(split_words(rest, at + "gens:".len()));
            } else {
                return Err(Error::parse(at, format!("unrecognised line {trimmed:?}")));
            }
        }
        let group = group.ok_or_else(|| Error::parse(0, "missing `group` line"))?;
        let eval = |w: &(String, usize)| -> Result<Element> {
            group.evaluate(&parse_word_at(&w.0, w.1)?)
        };
        let mut peripherals = Vec::new();
        let mut labels = Vec::new();
        for (label, words) in &periph_words {
            let gens = words.iter().map(eval).collect::<Result<Vec<_>>>()?;
            peripherals.push(Subgroup::new(&group, gens)?);
            labels.push(label.clone());
        }
        match gen_words {
            Some(words) => {
                let gens = words.iter().map(eval).collect::<Result<Vec<_>>>()?;
                Self::new(group, peripherals, labels, gens)
            }
            None => {
                let mut p = Self::with_standard_gens(group, peripherals)?;
                p.labels = labels;
                Ok(p)
            }
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent())
    }
}

fn parse_rank(s: &str, at: usize) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::parse(at, format!("expected a positive integer, got {s:?}"))),
    }
}

/// Whitespace-separated words with their absolute offsets.
fn split_words(s: &str, base: usize) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(st)) => {
                out.push((s[st..i].to_string(), base + st));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

/// Multiplication table file: a line of element names (identity first)
/// followed by one row of names per element. `#` starts a comment.
pub fn parse_table(text: &str) -> Result<Group> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let names: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty table"))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut table = Vec::new();
    for l in lines {
        let row = l
            .split_whitespace()
            .map(|s| index.get(s).copied().ok_or_else(|| Error::UnknownSymbol(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    Group::finite(names, table)
}

/// Shortest word over `t` evaluating to `target`, by breadth-first search.
fn express(group: &Group, t: &[Element], target: &Element, budget: usize) -> Option<Vec<usize>> {
    let id = group.identity();
    let mut parent: HashMap<Element, Option<(Element, usize)>> = HashMap::new();
    parent.insert(id.clone(), None);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        if &g == target {
            let mut word = Vec::new();
            let mut cur = g;
            while let Some(Some((prev, k))) = parent.get(&cur).cloned() {
                word.push(k);
                cur = prev;
            }
            word.reverse();
            return Some(word);
        }
        if parent.len() > budget {
            return None;
        }
        for (k, s) in t.iter().enumerate() {
            let h = group.mul(&g, s);
            if !parent.contains_key(&h) {
                parent.insert(h.clone(), Some((g.clone(), k)));
                queue.push_back(h);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2_pair(periph: &str) -> GroupPair {
        GroupPair::parse(
            &format!("group free 2\nperipheral 1: {periph}\ngens: a a^-1 b b^-1\n"),
            None,
        )
        .unwrap()
    }

    #[test]
    fn membership_examples() {
        let p = f2_pair("a");
        let g = &p.group;
        assert!(p.peripherals[0].contains(&g.normal_form("a^3").unwrap()));
        assert!(!p.peripherals[0].contains(&g.normal_form("bab^-1").unwrap()));
        let z = Group::free_abelian(1);
        let h = Subgroup::new(&z, vec![z.normal_form("x^2").unwrap()]).unwrap();
        assert!(!h.contains(&z.normal_form("x^3").unwrap()));
    }

    #[test]
    fn coset_label_examples() {
        let p = f2_pair("a");
        let ball = p.ball(5);
        let g = &p.group;
        let lab = |w: &str| g.format(&p.coset_label(&ball, &g.normal_form(w).unwrap(), 0).unwrap().representative);
        assert_eq!(lab("a^5"), "1");
        assert_eq!(lab("ba^2"), "b");

        let z2 = GroupPair::parse("group abelian 2\nperipheral 1: x\n", None).unwrap();
        let ball = z2.ball(5);
        let g = z2.group.normal_form("x^3y^2").unwrap();
        let rep = z2.coset_label(&ball, &g, 0).unwrap().representative;
        assert_eq!(z2.group.format(&rep), "y^2");

        let far = p.group.normal_form("b^9").unwrap();
        assert!(matches!(
            p.coset_label(&p.ball(2), &far, 0),
            Err(Error::OutsideRegion(_))
        ));
    }

    #[test]
    fn compatibility_examples() {
        let r = f2_pair("a").check_compatible();
        assert!(r.compatible);
        assert_eq!(r.certificates[0].expressions[0].1, Some(vec!["a".to_string()]));

        let r = f2_pair("a^2").check_compatible();
        assert!(!r.compatible);
        assert_eq!(r.failing_index, Some(0));
        assert!(r.certificates[0].subset.is_empty());

        let z2 = GroupPair::parse(
            "group abelian 2\nperipheral 1: x\ngens: x x^-1 y y^-1 xy {xy}^-1\n",
            None,
        )
        .unwrap();
        assert!(z2.check_compatible().compatible);
    }

    #[test]
    fn rejects_bad_generating_sets() {
        let e = GroupPair::parse("group free 2\nperipheral 1: a\ngens: a b b^-1\n", None);
        assert!(matches!(e, Err(Error::Invalid(_))));
        let e = GroupPair::parse("group free 2\nperipheral 1: a\ngens: 1 a a^-1\n", None);
        assert!(matches!(e, Err(Error::Invalid(_))));
        let p = GroupPair::parse("group free 2\nperipheral 1: a\ngens: a a^-1\n", None).unwrap();
        assert!(!p.check_compatible().generates);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match GroupPair::parse("group free 2\nperipheral 1: a [a,\n", None) {
            Err(Error::Parse { offset, .. }) => assert!(offset >= 15),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            GroupPair::parse("group free 2\nperipheral 1: q\n", None),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn finite_pairs() {
        let p = GroupPair::parse("group symmetric 3\nperipheral 1: (12)\n", None).unwrap();
        assert!(p.check_compatible().compatible);
        assert_eq!(p.peripherals[0].order(), Some(2));
        let ball = p.ball(3);
        assert_eq!(ball.len(), 6);
        assert_eq!(p.coset_partition(&ball, 0).reps.len(), 3);

        let t = parse_table("e t\ne t\nt e\n").unwrap();
        assert_eq!(t.order(), Some(2));
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(f2_pair("a").ball(2).len(), 17);
        let z2 = GroupPair::parse("group abelian 2\nperipheral 1: x\n", None).unwrap();
        assert_eq!(z2.ball(2).len(), 13);
    }
}
