//! Relative presentations, the relative Cayley complex of a group pair, its
//! coset quotient, and circuit enumeration for fineness probes.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{SimpGraph, UNREACHED};
use crate::groups::{word, CayleyBall, Element, GroupPair, Syllable};
use crate::lincomb::LinComb;
use crate::rational::q;

/// `⟨𝒜, Γ′ | ℛ⟩` with words kept as text (already syntax-checked).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativePresentation {
    pub generators: Vec<String>,
    /// `(label, generator words)`.
    pub peripherals: Vec<(String, Vec<String>)>,
    pub relators: Vec<String>,
}

impl RelativePresentation {
    /// Parses `rel-pres { gens: x, y; peripherals: P1 = <a>; relators: [x,y]; }`.
    /// An empty list may be written as nothing or `-`.
    pub fn parse(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = skip_ws(&chars, 0);
        let head = "rel-pres";
        if !starts_with(&chars, pos, head) {
            return Err(Error::parse(pos, "expected `rel-pres`"));
        }
        pos = skip_ws(&chars, pos + head.len());
        if chars.get(pos) != Some(&'{') {
            return Err(Error::parse(pos, "expected `{`"));
        }
        pos += 1;
        let mut pres = RelativePresentation {
            generators: Vec::new(),
            peripherals: Vec::new(),
            relators: Vec::new(),
        };
        let mut seen = BTreeSet::new();
        loop {
            pos = skip_ws(&chars, pos);
            match chars.get(pos) {
                None => return Err(Error::parse(pos, "unterminated presentation, expected `}`")),
                Some('}') => {
                    pos = skip_ws(&chars, pos + 1);
                    if pos != chars.len() {
                        return Err(Error::parse(pos, "trailing input after `}`"));
                    }
                    break;
                }
                _ => {}
            }
            let key_start = pos;
            while pos < chars.len() && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_') {
                pos += 1;
            }
            let key: String = chars[key_start..pos].iter().collect();
            pos = skip_ws(&chars, pos);
            if chars.get(pos) != Some(&':') {
                return Err(Error::parse(pos, "expected `:` after section name"));
            }
            pos += 1;
            let body_start = pos;
            while pos < chars.len() && chars[pos] != ';' {
                pos += 1;
            }
            if chars.get(pos) != Some(&';') {
                return Err(Error::parse(pos, "expected `;` ending the section"));
            }
            if !seen.insert(key.clone()) {
                return Err(Error::parse(key_start, format!("duplicate section `{key}`")));
            }
            let items = split_items(&chars, body_start, pos)?;
            match key.as_str() {
                "gens" => {
                    for (off, item) in items {
                        let w = word::parse_word_at(&item, off)?;
                        if w.len() != 1 || w[0].1 != 1 {
                            return Err(Error::parse(off, format!("generator `{item}` is not a symbol")));
                        }
                        pres.generators.push(w[0].0.clone());
                    }
                }
                "peripherals" => {
                    for (off, item) in items {
                        pres.peripherals.push(parse_peripheral(&item, off)?);
                    }
                }
                "relators" => {
                    for (off, item) in items {
                        word::parse_word_at(&item, off)?;
                        pres.relators.push(item);
                    }
                }
                _ => return Err(Error::parse(key_start, format!("unknown section `{key}`"))),
            }
            pos += 1;
        }
        Ok(pres)
    }

    /// Checks the presentation against a pair: every word evaluates, each
    /// listed peripheral generator lies in the matching subgroup, and every
    /// relator is trivial.
    pub fn check(&self, pair: &GroupPair) -> Result<()> {
        let g = &pair.group;
        for s in &self.generators {
            g.normal_form(s)?;
        }
        for (i, (label, gens)) in self.peripherals.iter().enumerate() {
            let Some(sub) = pair.peripherals.get(i) else {
                return Err(Error::invalid(format!("peripheral {label} has no counterpart in the pair")));
            };
            for w in gens {
                if !sub.contains(&g.normal_form(w)?) {
                    return Err(Error::invalid(format!("{w} is not in peripheral {label}")));
                }
            }
        }
        for r in &self.relators {
            let e = g.normal_form(r)?;
            if !g.is_identity(&e) {
                return Err(Error::invalid(format!("relator {r} evaluates to {}", g.format(&e))));
            }
        }
        Ok(())
    }
}

fn starts_with(chars: &[char], pos: usize, s: &str) -> bool {
    let s: Vec<char> = s.chars().collect();
    chars.len() >= pos + s.len() && chars[pos..pos + s.len()] == s[..]
}

fn skip_ws(chars: &[char], mut pos: usize) -> usize {
    while pos < chars.len() && chars[pos].is_whitespace() {
        pos += 1;
    }
    pos
}

/// Comma-separated items of `chars[start..end]` at bracket depth zero, with
/// the offset of each item. Empty items and `-`/`—` are skipped.
fn split_items(chars: &[char], start: usize, end: usize) -> Result<Vec<(usize, String)>> {
    let mut items = Vec::new();
    let mut depth: Vec<(char, usize)> = Vec::new();
    let mut item_start = start;
    let push = |from: usize, to: usize, items: &mut Vec<(usize, String)>| {
        let from = skip_ws(chars, from);
        let s: String = chars[from..to].iter().collect();
        let s = s.trim_end().to_string();
        if !s.is_empty() && s != "-" && s != "—" {
            items.push((from, s));
        }
    };
    for p in start..end {
        match chars[p] {
            '[' | '<' | '{' | '(' => depth.push((chars[p], p)),
            c @ (']' | '>' | '}' | ')') => {
                let open = match c {
                    ']' => '[',
                    '>' => '<',
                    '}' => '{',
                    _ => '(',
                };
                match depth.pop() {
                    Some((o, _)) if o == open => {}
                    _ => return Err(Error::parse(p, format!("unmatched `{c}`"))),
                }
            }
            ',' if depth.is_empty() => {
                push(item_start, p, &mut items);
                item_start = p + 1;
            }
            _ => {}
        }
    }
    if let Some((c, p)) = depth.pop() {
        return Err(Error::parse(p, format!("unclosed `{c}`")));
    }
    push(item_start, end, &mut items);
    Ok(items)
}

fn parse_peripheral(item: &str, off: usize) -> Result<(String, Vec<String>)> {
    let chars: Vec<char> = item.chars().collect();
    let Some(eq) = chars.iter().position(|&c| c == '=') else {
        return Err(Error::parse(off, "expected `label = <generators>`"));
    };
    let label: String = chars[..eq].iter().collect::<String>().trim().to_string();
    if label.is_empty() {
        return Err(Error::parse(off, "missing peripheral label"));
    }
    let open = skip_ws(&chars, eq + 1);
    if chars.get(open) != Some(&'<') || chars.last() != Some(&'>') {
        return Err(Error::parse(off + open, "expected `<...>`"));
    }
    let mut gens = Vec::new();
    for (o, w) in split_items(&chars, open + 1, chars.len() - 1)? {
        if w != "1" {
            word::parse_word_at(&w, off + o)?;
            gens.push(w);
        }
    }
    Ok((label, gens))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombEdge {
    pub tail: usize,
    pub head: usize,
    pub label: String,
}

/// A 2-cell attached along a closed edge path; `true` means the edge is
/// traversed tail to head.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombCell {
    pub boundary: Vec<(usize, bool)>,
    pub label: String,
}

/// Combinatorial 2-complex with possibly multiple or loop edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CombComplex2 {
    pub vertex_labels: Vec<String>,
    pub edges: Vec<CombEdge>,
    pub cells: Vec<CombCell>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum CombRecord {
    Header { format: String },
    Vertex { id: usize, label: String },
    Edge { id: usize, tail: usize, head: usize, label: String },
    Cell { id: usize, boundary: Vec<(usize, i8)>, label: String },
}

pub const COMB_FORMAT: &str = "comb2";

impl CombComplex2 {
    pub fn new() -> Self {
        Self::default()
    }

    /// 1-dimensional complex of a simple graph, edges oriented `u < v`.
    pub fn from_graph(g: &SimpGraph) -> Self {
        let mut k = Self::new();
        for v in 0..g.vertex_count() {
            k.add_vertex(g.label(v).to_string());
        }
        for (u, v) in g.edges() {
            k.add_edge(u, v, String::new()).expect("graph edges have valid ends");
        }
        k
    }

    pub fn add_vertex(&mut self, label: String) -> usize {
        self.vertex_labels.push(label);
        self.vertex_labels.len() - 1
    }

    pub fn add_edge(&mut self, tail: usize, head: usize, label: String) -> Result<usize> {
        let n = self.vertex_count();
        if tail >= n || head >= n {
            return Err(Error::invalid(format!("edge {tail}->{head} has an unknown end")));
        }
        self.edges.push(CombEdge { tail, head, label });
        Ok(self.edges.len() - 1)
    }

    /// Adds a cell after checking that its boundary is a closed edge path.
    pub fn add_cell(&mut self, boundary: Vec<(usize, bool)>, label: String) -> Result<usize> {
        if boundary.is_empty() {
            return Err(Error::invalid("cell with empty boundary"));
        }
        if let Some(&(e, _)) = boundary.iter().find(|(e, _)| *e >= self.edges.len()) {
            return Err(Error::invalid(format!("cell uses unknown edge {e}")));
        }
        if !self.is_closed_path(&boundary) {
            return Err(Error::invalid(format!("boundary of cell {label} is not a closed path")));
        }
        self.cells.push(CombCell { boundary, label });
        Ok(self.cells.len() - 1)
    }

    fn step_ends(&self, (e, fwd): (usize, bool)) -> (usize, usize) {
        let edge = &self.edges[e];
        if fwd {
            (edge.tail, edge.head)
        } else {
            (edge.head, edge.tail)
        }
    }

    pub fn is_closed_path(&self, path: &[(usize, bool)]) -> bool {
        if path.is_empty() {
            return true;
        }
        (0..path.len()).all(|k| self.step_ends(path[k]).1 == self.step_ends(path[(k + 1) % path.len()]).0)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// The cellular 1-chain of a cell's attaching loop.
    pub fn cell_chain(&self, c: usize) -> LinComb<usize> {
        path_chain(&self.cells[c].boundary)
    }

    /// `∂` of a 1-chain, on vertices.
    pub fn boundary1(&self, z: &LinComb<usize>) -> LinComb<usize> {
        let mut out = LinComb::new();
        for (&e, a) in z.iter() {
            let edge = &self.edges[e];
            out.add_term(edge.head, a.clone());
            out.add_term(edge.tail, -a.clone());
        }
        out
    }

    /// `∂` of a 2-chain, on edges.
    pub fn boundary2(&self, mu: &LinComb<usize>) -> LinComb<usize> {
        mu.map_linear(|&c| self.cell_chain(c))
    }

    /// Vertices met by the edges of a 1-chain.
    pub fn support0(&self, z: &LinComb<usize>) -> BTreeSet<usize> {
        z.keys().flat_map(|&e| [self.edges[e].tail, self.edges[e].head]).collect()
    }

    /// Vertices on the boundary of a cell.
    pub fn cell_vertices(&self, c: usize) -> BTreeSet<usize> {
        self.cells[c]
            .boundary
            .iter()
            .flat_map(|&(e, _)| [self.edges[e].tail, self.edges[e].head])
            .collect()
    }

    /// `(edge, other end, traversed forward)` for every edge end at `v`.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize, bool)>> {
        let mut inc = vec![Vec::new(); self.vertex_count()];
        for (e, edge) in self.edges.iter().enumerate() {
            inc[edge.tail].push((e, edge.head, true));
            if edge.head != edge.tail {
                inc[edge.head].push((e, edge.tail, false));
            }
        }
        inc
    }

    /// Graph metric of the 1-skeleton from a set of sources.
    pub fn distances_from(&self, sources: impl IntoIterator<Item = usize>) -> Vec<u32> {
        let inc = self.incidence();
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s] == UNREACHED {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &(_, w, _) in &inc[v] {
                if dist[w] == UNREACHED {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The 1-chain of an edge path from vertex to vertex. Between
    /// consecutive vertices the lowest-numbered joining edge is used.
    pub fn vertex_path_chain(&self, vertices: &[usize]) -> Result<LinComb<usize>> {
        let inc = self.incidence();
        let mut steps = Vec::new();
        for w in vertices.windows(2) {
            let step = inc[w[0]]
                .iter()
                .filter(|&&(_, o, _)| o == w[1])
                .min_by_key(|&&(e, _, _)| e)
                .ok_or_else(|| Error::invalid(format!("no edge joins {} and {}", w[0], w[1])))?;
            steps.push((step.0, step.2));
        }
        Ok(path_chain(&steps))
    }

    /// Whether at every vertex each `(label, direction)` occurs on at most one
    /// edge end, so that a label sequence determines a path from its start.
    pub fn is_label_deterministic(&self) -> bool {
        let mut seen = HashMap::new();
        for (e, edge) in self.edges.iter().enumerate() {
            for key in [(edge.tail, &edge.label, true), (edge.head, &edge.label, false)] {
                if seen.insert(key, e).is_some_and(|old| old != e) {
                    return false;
                }
            }
        }
        true
    }

    pub fn write_jsonl(&self, mut out: impl Write) -> Result<()> {
        let line = |r: &CombRecord| serde_json::to_string(r);
        writeln!(out, "{}", line(&CombRecord::Header { format: COMB_FORMAT.into() })?)?;
        for (id, label) in self.vertex_labels.iter().enumerate() {
            writeln!(out, "{}", line(&CombRecord::Vertex { id, label: label.clone() })?)?;
        }
        for (id, e) in self.edges.iter().enumerate() {
            writeln!(
                out,
                "{}",
                line(&CombRecord::Edge {
                    id,
                    tail: e.tail,
                    head: e.head,
                    label: e.label.clone()
                })?
            )?;
        }
        for (id, c) in self.cells.iter().enumerate() {
            let boundary = c.boundary.iter().map(|&(e, f)| (e, if f { 1 } else { -1 })).collect();
            writeln!(
                out,
                "{}",
                line(&CombRecord::Cell {
                    id,
                    boundary,
                    label: c.label.clone()
                })?
            )?;
        }
        Ok(())
    }

    pub fn read_jsonl(input: impl BufRead) -> Result<Self> {
        let mut k = Self::new();
        let mut offset = 0;
        for line in input.lines() {
            let line = line?;
            let start = offset;
            offset += line.len() + 1;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CombRecord = serde_json::from_str(&line)
                .map_err(|e| Error::parse(start + e.column().saturating_sub(1), e.to_string()))?;
            match rec {
                CombRecord::Header { format } => {
                    if format != COMB_FORMAT {
                        return Err(Error::invalid(format!("unknown complex format {format:?}")));
                    }
                }
                CombRecord::Vertex { id, label } => {
                    if id != k.vertex_count() {
                        return Err(Error::invalid("vertex ids must be 0..n-1 in order"));
                    }
                    k.add_vertex(label);
                }
                CombRecord::Edge { id, tail, head, label } => {
                    if id != k.edge_count() {
                        return Err(Error::invalid("edge ids must be 0..m-1 in order"));
                    }
                    k.add_edge(tail, head, label)?;
                }
                CombRecord::Cell { id, boundary, label } => {
                    if id != k.cell_count() {
                        return Err(Error::invalid("cell ids must be 0..c-1 in order"));
                    }
                    let b = boundary.into_iter().map(|(e, s)| (e, s > 0)).collect();
                    k.add_cell(b, label)?;
                }
            }
        }
        Ok(k)
    }
}

/// The 1-chain traced by a sequence of oriented edges.
pub fn path_chain(path: &[(usize, bool)]) -> LinComb<usize> {
    let mut c = LinComb::new();
    for &(e, fwd) in path {
        c.add_term(e, q(if fwd { 1 } else { -1 }));
    }
    c
}

/// `S⁺`: one generator from each pair `{s, s⁻¹}`, the first in `S` order.
pub fn positive_generators(pair: &GroupPair) -> Vec<Element> {
    let mut out: Vec<Element> = Vec::new();
    for s in &pair.gens {
        let si = pair.group.inverse(s).expect("generator of the pair's group");
        if !out.contains(&si) {
            out.push(s.clone());
        }
    }
    out
}

/// The relative Cayley complex truncated to the ball of radius `R` in each
/// of the `|I|` copies. Vertex `i·|B| + k` is `(ball[k], i)`.
#[derive(Clone, Debug)]
pub struct RelativeCayleyComplex {
    pub complex: CombComplex2,
    pub pair: GroupPair,
    pub ball: CayleyBall,
    pub s_plus: Vec<Element>,
    /// Horizontal edge `(vertex, generator index in S⁺) -> edge`.
    pub horizontal: HashMap<(usize, usize), usize>,
}

impl RelativeCayleyComplex {
    pub fn build(pres: &RelativePresentation, pair: &GroupPair, radius: usize) -> Result<Self> {
        pair.require_compatible()?;
        pres.check(pair)?;
        let ball = pair.ball(radius);
        let s_plus = positive_generators(pair);
        let (n, copies) = (ball.len(), pair.index_count());
        let mut k = CombComplex2::new();
        for i in 0..copies {
            for g in &ball.elements {
                let name = pair.group.format(g);
                k.add_vertex(if copies == 1 { name } else { format!("{name}@{}", pair.labels[i]) });
            }
        }
        let mut horizontal = HashMap::new();
        for i in 0..copies {
            for (x, g) in ball.elements.iter().enumerate() {
                for (si, s) in s_plus.iter().enumerate() {
                    if let Some(y) = ball.index_of(&pair.group.multiply(g, s)?) {
                        let e = k.add_edge(i * n + x, i * n + y, pair.group.format(s))?;
                        horizontal.insert((i * n + x, si), e);
                    }
                }
            }
        }
        let mut vertical = HashMap::new();
        for x in 0..n {
            for i in 0..copies {
                for j in i + 1..copies {
                    let label = format!("|{}-{}", pair.labels[i], pair.labels[j]);
                    vertical.insert((x, i, j), k.add_edge(i * n + x, j * n + x, label)?);
                }
            }
        }
        let mut rcc = Self {
            complex: k,
            pair: pair.clone(),
            ball,
            s_plus,
            horizontal,
        };
        for r in &pres.relators {
            let letters = rcc.letters(&word::parse_word(r)?)?;
            if letters.is_empty() {
                continue;
            }
            for i in 0..copies {
                for x in 0..n {
                    match rcc.trace(i * n + x, &letters) {
                        Ok(path) => {
                            let label = format!("{r}@{}", rcc.complex.vertex_labels[i * n + x]);
                            rcc.complex.add_cell(path, label)?;
                        }
                        Err(Error::OutsideRegion(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        let mut rects = Vec::new();
        for i in 0..copies {
            for j in i + 1..copies {
                for x in 0..n {
                    for si in 0..rcc.s_plus.len() {
                        let (Some(&hi), Some(&hj)) = (
                            rcc.horizontal.get(&(i * n + x, si)),
                            rcc.horizontal.get(&(j * n + x, si)),
                        ) else {
                            continue;
                        };
                        let y = rcc.complex.edges[hi].head - i * n;
                        let path = vec![(hi, true), (vertical[&(y, i, j)], true), (hj, false), (vertical[&(x, i, j)], false)];
                        rects.push((path, format!("rect {}", rcc.complex.edges[hi].label)));
                    }
                }
            }
        }
        for (path, label) in rects {
            rcc.complex.add_cell(path, label)?;
        }
        Ok(rcc)
    }

    pub fn copies(&self) -> usize {
        self.pair.index_count()
    }

    pub fn vertex(&self, g: &Element, i: usize) -> Option<usize> {
        self.ball.index_of(g).map(|k| i * self.ball.len() + k)
    }

    /// `(element, copy)` of a vertex.
    pub fn key(&self, v: usize) -> (Element, usize) {
        let n = self.ball.len();
        (self.ball.elements[v % n].clone(), v / n)
    }

    /// Identity vertex of each copy; every vertex is a translate of one.
    pub fn roots(&self) -> Vec<usize> {
        (0..self.copies()).map(|i| i * self.ball.len()).collect()
    }

    /// Expands a word into `(index in S⁺, forward)` letters.
    fn letters(&self, w: &[Syllable]) -> Result<Vec<(usize, bool)>> {
        let g = &self.pair.group;
        let mut out = Vec::new();
        for (name, exp) in w {
            let t = g.evaluate(&[(name.clone(), 1)])?;
            let ti = g.inverse(&t)?;
            let (si, fwd) = if let Some(si) = self.s_plus.iter().position(|s| *s == t) {
                (si, true)
            } else if let Some(si) = self.s_plus.iter().position(|s| *s == ti) {
                (si, false)
            } else {
                return Err(Error::invalid(format!("{name} is not in the generating set")));
            };
            for _ in 0..exp.unsigned_abs() {
                out.push((si, fwd == (*exp > 0)));
            }
        }
        Ok(out)
    }

    /// The edge path reading `letters` from vertex `v`.
    fn trace(&self, v: usize, letters: &[(usize, bool)]) -> Result<Vec<(usize, bool)>> {
        let n = self.ball.len();
        let (g, i) = self.key(v);
        let mut x = g;
        let mut path = Vec::new();
        for &(si, fwd) in letters {
            let s = &self.s_plus[si];
            let (tail, next) = if fwd {
                (x.clone(), self.pair.group.multiply(&x, s)?)
            } else {
                let y = self.pair.group.multiply(&x, &self.pair.group.inverse(s)?)?;
                (y.clone(), y)
            };
            let tv = self
                .ball
                .index_of(&tail)
                .ok_or_else(|| Error::OutsideRegion(self.pair.group.format(&tail)))?;
            let e = *self
                .horizontal
                .get(&(i * n + tv, si))
                .ok_or_else(|| Error::OutsideRegion(self.pair.group.format(&next)))?;
            path.push((e, fwd));
            x = next;
        }
        Ok(path)
    }

    /// The 1-chain of the loop reading `word` from `(g, i)`.
    pub fn word_chain(&self, g: &Element, i: usize, w: &str) -> Result<LinComb<usize>> {
        let v = self
            .vertex(g, i)
            .ok_or_else(|| Error::OutsideRegion(self.pair.group.format(g)))?;
        let letters = self.letters(&word::parse_word(w)?)?;
        Ok(path_chain(&self.trace(v, &letters)?))
    }

    /// Checks that every non-trivial `γ` (all elements of a finite group,
    /// else the generators) moves every vertex and edge whose translate
    /// stays in the truncation.
    pub fn action_is_free(&self) -> bool {
        let g = &self.pair.group;
        let movers = match g.elements() {
            Some(all) => all,
            None => self.pair.gens.clone(),
        };
        let n = self.ball.len();
        for gamma in movers.iter().filter(|x| !g.is_identity(x)) {
            for (k, x) in self.ball.elements.iter().enumerate() {
                let Ok(y) = g.multiply(gamma, x) else { return false };
                let Some(ky) = self.ball.index_of(&y) else { continue };
                if ky == k {
                    return false;
                }
                for i in 0..self.copies() {
                    for si in 0..self.s_plus.len() {
                        if let (Some(e), Some(f)) =
                            (self.horizontal.get(&(i * n + k, si)), self.horizontal.get(&(i * n + ky, si)))
                        {
                            if e == f {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// `X̂`: each coset copy `gΓ_i × {i}` collapsed to a vertex.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub complex: CombComplex2,
    /// `(coset representative, copy)` per vertex.
    pub keys: Vec<(Element, usize)>,
    /// Image of each vertex of the relative Cayley complex.
    pub vertex_map: Vec<usize>,
    /// Image of each edge, `None` when collapsed.
    pub edge_map: Vec<Option<usize>>,
    /// Cells whose boundary collapsed to a point.
    pub dropped_cells: usize,
}

impl QuotientComplex {
    pub fn build(rcc: &RelativeCayleyComplex) -> Result<Self> {
        let pair = &rcc.pair;
        let n = rcc.ball.len();
        let mut k = CombComplex2::new();
        let mut keys = Vec::new();
        let mut vertex_map = vec![0; rcc.complex.vertex_count()];
        for i in 0..rcc.copies() {
            let part = pair.coset_partition(&rcc.ball, i);
            let base = k.vertex_count();
            for &rep in &part.reps {
                let g = rcc.ball.elements[rep].clone();
                k.add_vertex(format!("{}·{}", pair.group.format(&g), pair.labels[i]));
                keys.push((g, i));
            }
            for x in 0..n {
                vertex_map[i * n + x] = base + part.class_of[x];
            }
        }
        let mut edge_map = vec![None; rcc.complex.edge_count()];
        for (e, edge) in rcc.complex.edges.iter().enumerate() {
            let (ct, ch) = (edge.tail / n, edge.head / n);
            if ct == ch {
                let (s, _) = rcc.key(edge.head);
                let (x, _) = rcc.key(edge.tail);
                let step = pair.group.multiply(&pair.group.inverse(&x)?, &s)?;
                if pair.peripherals[ct].contains(&step) {
                    continue;
                }
            }
            edge_map[e] = Some(k.add_edge(vertex_map[edge.tail], vertex_map[edge.head], edge.label.clone())?);
        }
        let mut dropped = 0;
        for cell in &rcc.complex.cells {
            let b: Vec<(usize, bool)> = cell
                .boundary
                .iter()
                .filter_map(|&(e, f)| edge_map[e].map(|e2| (e2, f)))
                .collect();
            if b.is_empty() {
                dropped += 1;
            } else {
                k.add_cell(b, cell.label.clone())?;
            }
        }
        Ok(Self {
            complex: k,
            keys,
            vertex_map,
            edge_map,
            dropped_cells: dropped,
        })
    }
}

/// Circuits through one edge, as edge sequences starting with that edge.
#[derive(Clone, Debug, Serialize)]
pub struct FinenessReport {
    pub edge: usize,
    pub max_length: usize,
    pub circuits: Vec<Vec<usize>>,
    pub counts: BTreeMap<usize, usize>,
}

/// All circuits (closed paths meeting each vertex at most once) of length
/// at most `max_len` that contain edge `e`.
pub fn fineness_probe(k: &CombComplex2, e: usize, max_len: usize) -> Result<FinenessReport> {
    let edge = k.edges.get(e).ok_or_else(|| Error::invalid(format!("unknown edge {e}")))?;
    let mut circuits = Vec::new();
    if edge.tail == edge.head {
        if max_len >= 1 {
            circuits.push(vec![e]);
        }
    } else if max_len >= 2 {
        let inc = k.incidence();
        let back = k.distances_from([edge.tail]);
        let mut on_path = vec![false; k.vertex_count()];
        on_path[edge.tail] = true;
        on_path[edge.head] = true;
        let mut path = vec![e];
        extend_to(&inc, &back, edge.head, edge.tail, max_len, &mut on_path, &mut path, &mut circuits);
    }
    let mut counts = BTreeMap::new();
    for c in &circuits {
        *counts.entry(c.len()).or_insert(0) += 1;
    }
    Ok(FinenessReport {
        edge: e,
        max_length: max_len,
        circuits,
        counts,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend_to(
    inc: &[Vec<(usize, usize, bool)>],
    back: &[u32],
    at: usize,
    target: usize,
    max_len: usize,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for &(f, w, _) in &inc[at] {
        if path.contains(&f) {
            continue;
        }
        if w == target {
            path.push(f);
            out.push(path.clone());
            path.pop();
            continue;
        }
        if on_path[w] || back[w] == UNREACHED || path.len() + 1 + back[w] as usize > max_len {
            continue;
        }
        on_path[w] = true;
        path.push(f);
        extend_to(inc, back, w, target, max_len, on_path, path, out);
        path.pop();
        on_path[w] = false;
    }
}
