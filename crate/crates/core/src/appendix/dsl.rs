//! Index notation for transcribed tensor expressions.
//!
//! ```text
//! summand := sign? term
//! term    := rational? factor*
//! factor  := atom | '∂_{' label '}[' sum ']' | '(' sum ')'
//! sum     := sign? term (sign term)*
//! atom    := ('g' | 'G' | 'Γ') ('^{' labels '}')? ('_{' labels '}')? | 'f1' | 'f2'
//! ```
//!
//! `g` is ḡ (all-upper placement reads ḡ⁻¹), `G` is g̿ and `Γ` the Christoffel
//! symbols of ḡ. Factors separated by whitespace multiply.
//!
//! Summation follows the placement on the page, not the intent: a label is
//! summed at the innermost node (atom, derivative or product) where it has two
//! or more unbound occurrences, all occurrences taking the same value. Terms of
//! a sum broadcast over the union of their free labels. Labels still free at
//! the top are summed unless they are output labels.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::jets::SpatialJet;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DslError {
    #[error("parse error at char {pos} of `{text}`: {message}")]
    Parse { text: String, pos: usize, message: String },
    #[error("atom needs jets of degree {needed}, context holds {available}")]
    Degree { needed: usize, available: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    /// ḡ, read as ḡ⁻¹ when every label is upper.
    Base,
    /// g̿, same component whatever the placement.
    Perturbation,
    Christoffel,
    Probe(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Atom { kind: AtomKind, labels: Vec<(char, Slot)> },
    Deriv { label: char, inner: Box<Node> },
    /// Product with a rational prefactor (the sign of the term included).
    Product { coef: f64, factors: Vec<Node> },
    Sum(Vec<Node>),
}

pub fn parse(text: &str) -> Result<Node, DslError> {
    let mut p = Parser {
        src: text,
        chars: text.chars().collect(),
        pos: 0,
    };
    let node = p.sum(None)?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(match node {
        Node::Sum(mut terms) if terms.len() == 1 => terms.pop().unwrap(),
        other => other,
    })
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> DslError {
        DslError::Parse {
            text: self.src.to_string(),
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn sum(&mut self, close: Option<char>) -> Result<Node, DslError> {
        let mut terms = Vec::new();
        let mut sign = 1.0;
        if let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            sign = if c == '-' { -1.0 } else { 1.0 };
        }
        loop {
            terms.push(self.term(sign, close)?);
            match self.peek() {
                Some('+') => sign = 1.0,
                Some('-') => sign = -1.0,
                c if c == close => return Ok(Node::Sum(terms)),
                None => return Err(self.err("unexpected end of input")),
                Some(_) => return Err(self.err("expected `+`, `-` or a closing bracket")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self, sign: f64, close: Option<char>) -> Result<Node, DslError> {
        let mut coef = sign;
        let numeric = matches!(self.peek(), Some(c) if c.is_ascii_digit());
        if numeric {
            let num = self.integer()?;
            let mut den = 1.0;
            if self.chars.get(self.pos) == Some(&'/') {
                self.pos += 1;
                den = self.integer()?;
            }
            coef *= num / den;
        }
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                None | Some('+' | '-') => break,
                c if c == close => break,
                Some(_) => factors.push(self.factor()?),
            }
        }
        if factors.is_empty() && !numeric {
            return Err(self.err("empty term"));
        }
        Ok(Node::Product { coef, factors })
    }

    fn integer(&mut self) -> Result<f64, DslError> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("expected an integer"))
    }

    fn labels(&mut self) -> Result<Vec<char>, DslError> {
        self.expect('{')?;
        let mut out = Vec::new();
        while let Some(&c) = self.chars.get(self.pos) {
            self.pos += 1;
            if c == '}' {
                return Ok(out);
            }
            if !c.is_alphabetic() {
                return Err(self.err("index labels must be letters"));
            }
            out.push(c);
        }
        Err(self.err("unclosed `{`"))
    }

    fn factor(&mut self) -> Result<Node, DslError> {
        let c = self.peek().ok_or_else(|| self.err("expected a factor"))?;
        self.pos += 1;
        match c {
            '(' => {
                let inner = self.sum(Some(')'))?;
                self.expect(')')?;
                Ok(inner)
            }
            '∂' => {
                self.expect('_')?;
                let labels = self.labels()?;
                if labels.len() != 1 {
                    return Err(self.err("a derivative takes exactly one label"));
                }
                self.expect('[')?;
                let inner = self.sum(Some(']'))?;
                self.expect(']')?;
                Ok(Node::Deriv {
                    label: labels[0],
                    inner: Box::new(inner),
                })
            }
            'f' => {
                let d = self.chars.get(self.pos).and_then(|d| d.to_digit(10));
                match d {
                    Some(k @ (1 | 2)) => {
                        self.pos += 1;
                        Ok(Node::Atom {
                            kind: AtomKind::Probe(k as usize),
                            labels: Vec::new(),
                        })
                    }
                    _ => Err(self.err("probes are `f1` and `f2`")),
                }
            }
            'g' | 'G' | 'Γ' => {
                let kind = match c {
                    'g' => AtomKind::Base,
                    'G' => AtomKind::Perturbation,
                    _ => AtomKind::Christoffel,
                };
                let mut labels = Vec::new();
                for (mark, slot) in [('^', Slot::Up), ('_', Slot::Down)] {
                    if self.chars.get(self.pos) == Some(&mark) {
                        self.pos += 1;
                        labels.extend(self.labels()?.into_iter().map(|l| (l, slot)));
                    }
                }
                let want = if kind == AtomKind::Christoffel { 3 } else { 2 };
                if labels.len() != want {
                    return Err(self.err(&format!("`{c}` takes {want} labels")));
                }
                if kind == AtomKind::Base && labels[0].1 != labels[1].1 {
                    return Err(self.err("mixed placement on `g`"));
                }
                Ok(Node::Atom { kind, labels })
            }
            _ => {
                self.pos -= 1;
                Err(self.err("unexpected character"))
            }
        }
    }
}

impl Node {
    /// Deepest derivative nesting at which each atom family occurs:
    /// `(metric, christoffel, probe)`, `None` when absent.
    pub fn depths(&self) -> [Option<usize>; 3] {
        let mut out = [None; 3];
        self.walk_depths(0, &mut out);
        out
    }

    fn walk_depths(&self, depth: usize, out: &mut [Option<usize>; 3]) {
        match self {
            Node::Atom { kind, .. } => {
                let slot = match kind {
                    AtomKind::Base | AtomKind::Perturbation => 0,
                    AtomKind::Christoffel => 1,
                    AtomKind::Probe(_) => 2,
                };
                out[slot] = Some(out[slot].map_or(depth, |d: usize| d.max(depth)));
            }
            Node::Deriv { inner, .. } => inner.walk_depths(depth + 1, out),
            Node::Product { factors, .. } => factors.iter().for_each(|f| f.walk_depths(depth, out)),
            Node::Sum(terms) => terms.iter().for_each(|t| t.walk_depths(depth, out)),
        }
    }
}

// ---------------------------------------------------------------------------
// index audit

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexIssue {
    /// Summed label occurring more than twice in one scope.
    Repeated { label: char, count: usize },
    /// Summed pair with both occurrences up or both down.
    SamePlacement { label: char, slot: Slot },
    /// Terms of one sum with different free labels.
    SumMismatch { left: String, right: String },
    /// Label left free where the result should have none (or other ones).
    Free { label: char, slot: Slot },
}

impl fmt::Display for IndexIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexIssue::Repeated { label, count } => write!(f, "`{label}` summed over {count} occurrences"),
            IndexIssue::SamePlacement { label, slot } => {
                write!(f, "`{label}` contracted {} twice", if *slot == Slot::Up { "up" } else { "down" })
            }
            IndexIssue::SumMismatch { left, right } => write!(f, "sum mixes free labels {{{left}}} and {{{right}}}"),
            IndexIssue::Free { label, .. } => write!(f, "`{label}` left free"),
        }
    }
}

fn label_set(free: &[(char, Slot)]) -> String {
    let set: BTreeSet<String> = free
        .iter()
        .map(|(l, s)| format!("{}{l}", if *s == Slot::Up { '^' } else { '_' }))
        .collect();
    set.into_iter().collect::<Vec<_>>().join(",")
}

fn bind(occ: Vec<(char, Slot)>, issues: &mut Vec<IndexIssue>) -> Vec<(char, Slot)> {
    let mut free = Vec::new();
    let mut seen = BTreeSet::new();
    for &(l, _) in &occ {
        if !seen.insert(l) {
            continue;
        }
        let here: Vec<Slot> = occ.iter().filter(|o| o.0 == l).map(|o| o.1).collect();
        match here.len() {
            1 => free.push((l, here[0])),
            2 if here[0] != here[1] => {}
            2 => issues.push(IndexIssue::SamePlacement { label: l, slot: here[0] }),
            count => issues.push(IndexIssue::Repeated { label: l, count }),
        }
    }
    free
}

fn audit_node(node: &Node, issues: &mut Vec<IndexIssue>) -> Vec<(char, Slot)> {
    match node {
        Node::Atom { labels, .. } => bind(labels.clone(), issues),
        Node::Deriv { label, inner } => {
            let mut occ = audit_node(inner, issues);
            occ.push((*label, Slot::Down));
            bind(occ, issues)
        }
        Node::Product { factors, .. } => {
            let occ = factors.iter().flat_map(|f| audit_node(f, issues)).collect();
            bind(occ, issues)
        }
        Node::Sum(terms) => {
            let frees: Vec<_> = terms.iter().map(|t| audit_node(t, issues)).collect();
            let first = label_set(&frees[0]);
            let mut union = frees[0].clone();
            for f in &frees[1..] {
                let s = label_set(f);
                if s != first {
                    issues.push(IndexIssue::SumMismatch {
                        left: first.clone(),
                        right: s,
                    });
                }
                for &o in f {
                    if !union.iter().any(|u| u.0 == o.0) {
                        union.push(o);
                    }
                }
            }
            union
        }
    }
}

/// Placement problems of `node`, whose result should carry exactly `output`.
pub fn audit(node: &Node, output: &[(char, Slot)]) -> Vec<IndexIssue> {
    let mut issues = Vec::new();
    let free = audit_node(node, &mut issues);
    for &(label, slot) in &free {
        if !output.contains(&(label, slot)) {
            issues.push(IndexIssue::Free { label, slot });
        }
    }
    issues
}

// ---------------------------------------------------------------------------
// evaluation

/// Atom jets at one point, pre-truncated to every degree up to the maximum.
#[derive(Debug, Clone)]
pub struct AtomJets {
    pub dim: usize,
    /// `levels[ν]` holds ḡ, ḡ⁻¹, g̿ (n² each), Γ (n³) and the probes at degree ν.
    levels: Vec<Level>,
    probe_degree: usize,
    gamma_degree: usize,
}

#[derive(Debug, Clone)]
struct Level {
    base: Vec<SpatialJet>,
    inverse: Vec<SpatialJet>,
    pert: Vec<SpatialJet>,
    gamma: Vec<SpatialJet>,
    probes: Vec<SpatialJet>,
}

impl AtomJets {
    /// `base`, `inverse` and `pert` share one degree `m ≥ 1`; Γ of ḡ is built
    /// here at degree `m − 1`. Probe jets may have any degree.
    pub fn new(base: &Matrix<SpatialJet>, inverse: &Matrix<SpatialJet>, pert: &Matrix<SpatialJet>, probes: [&SpatialJet; 2]) -> Self {
        let n = base.dim();
        let m = base[(0, 0)].degree();
        let gd = m.saturating_sub(1);
        let dg: Vec<Matrix<SpatialJet>> = (0..n).map(|c| base.differentiate(c)).collect();
        let mut gamma = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = SpatialJet::constant_in(dg[0][(0, 0)].layout(), 0.0);
                    for l in 0..n {
                        let bracket = dg[j][(i, l)].clone() + dg[i][(j, l)].clone() - dg[l][(i, j)].clone();
                        inverse[(k, l)].truncate(gd).mul_add_into(&bracket, &mut acc);
                    }
                    gamma.push(acc.scale(0.5));
                }
            }
        }
        let top = m.max(probes[0].degree()).max(probes[1].degree());
        let flat = |mat: &Matrix<SpatialJet>, nu: usize| -> Vec<SpatialJet> {
            mat.iter().map(|j| if j.degree() >= nu { j.truncate(nu) } else { j.clone() }).collect()
        };
        let levels = (0..=top)
            .map(|nu| Level {
                base: flat(base, nu),
                inverse: flat(inverse, nu),
                pert: flat(pert, nu),
                gamma: gamma.iter().map(|j| j.truncate(nu.min(gd))).collect(),
                probes: probes.iter().map(|p| p.truncate(nu.min(p.degree()))).collect(),
            })
            .collect();
        AtomJets {
            dim: n,
            levels,
            probe_degree: probes[0].degree().min(probes[1].degree()),
            gamma_degree: gd,
        }
    }

    fn metric_degree(&self) -> usize {
        self.gamma_degree + 1
    }

    /// Checks that `node` can be evaluated from these jets.
    pub fn supports(&self, node: &Node) -> Result<(), DslError> {
        let [metric, gamma, probe] = node.depths();
        let checks = [
            (metric, self.metric_degree()),
            (gamma, self.gamma_degree),
            (probe, self.probe_degree),
        ];
        for (need, have) in checks {
            if let Some(need) = need {
                if need > have {
                    return Err(DslError::Degree {
                        needed: need,
                        available: have,
                    });
                }
            }
        }
        Ok(())
    }

    fn constant(&self, nu: usize, v: f64) -> SpatialJet {
        SpatialJet::constant(self.dim, nu, v).expect("jet layout for a small degree")
    }

    fn atom(&self, kind: AtomKind, labels: &[(char, Slot)], idx: &[usize], nu: usize) -> &SpatialJet {
        let n = self.dim;
        let lv = &self.levels[nu];
        match kind {
            AtomKind::Base if labels[0].1 == Slot::Up => &lv.inverse[idx[0] * n + idx[1]],
            AtomKind::Base => &lv.base[idx[0] * n + idx[1]],
            AtomKind::Perturbation => &lv.pert[idx[0] * n + idx[1]],
            AtomKind::Christoffel => &lv.gamma[(idx[0] * n + idx[1]) * n + idx[2]],
            AtomKind::Probe(k) => &lv.probes[k - 1],
        }
    }
}

/// Dense tensor of jets over named labels, row-major in label order.
#[derive(Debug, Clone)]
struct Tensor {
    labels: Vec<char>,
    data: Vec<SpatialJet>,
}

fn strides(n: usize, rank: usize) -> Vec<usize> {
    let mut s = vec![1; rank];
    for p in (0..rank.saturating_sub(1)).rev() {
        s[p] = s[p + 1] * n;
    }
    s
}

/// Calls `f(flat_index, digits)` for every multi-index of the given rank.
fn for_each_index(n: usize, rank: usize, mut f: impl FnMut(usize, &[usize])) {
    let mut digits = vec![0; rank];
    let total = n.pow(rank as u32);
    for flat in 0..total {
        f(flat, &digits);
        for p in (0..rank).rev() {
            digits[p] += 1;
            if digits[p] < n {
                break;
            }
            digits[p] = 0;
        }
    }
}

impl Tensor {
    fn scalar(jet: SpatialJet) -> Self {
        Tensor {
            labels: Vec::new(),
            data: vec![jet],
        }
    }

    /// Sums every label occurring more than once over its diagonal; the
    /// remaining labels keep their first-occurrence order.
    fn from_raw(n: usize, raw: &[char], get: impl Fn(&[usize]) -> SpatialJet) -> Self {
        let mut free = Vec::new();
        let mut bound = Vec::new();
        for &l in raw {
            let count = raw.iter().filter(|&&x| x == l).count();
            let list = if count == 1 { &mut free } else { &mut bound };
            if !list.contains(&l) {
                list.push(l);
            }
        }
        let all: Vec<char> = free.iter().chain(&bound).copied().collect();
        let pos: Vec<usize> = raw.iter().map(|l| all.iter().position(|a| a == l).unwrap()).collect();
        let inner = n.pow(bound.len() as u32);
        let mut data = Vec::with_capacity(n.pow(free.len() as u32));
        let mut raw_idx = vec![0; raw.len()];
        let mut acc: Option<SpatialJet> = None;
        for_each_index(n, all.len(), |flat, digits| {
            for (r, &p) in pos.iter().enumerate() {
                raw_idx[r] = digits[p];
            }
            let v = get(&raw_idx);
            match acc.as_mut() {
                Some(a) => a.axpy(1.0, &v),
                None => acc = Some(v),
            }
            if (flat + 1) % inner == 0 {
                data.push(acc.take().unwrap());
            }
        });
        Tensor { labels: free, data }
    }

    fn mul(&self, other: &Tensor, n: usize) -> Tensor {
        let mut labels = self.labels.clone();
        for &l in &other.labels {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
        let map = |sub: &[char]| -> Vec<usize> {
            let st = strides(n, sub.len());
            labels
                .iter()
                .map(|l| sub.iter().position(|x| x == l).map_or(0, |p| st[p]))
                .collect()
        };
        let (ma, mb) = (map(&self.labels), map(&other.labels));
        let mut data = Vec::with_capacity(n.pow(labels.len() as u32));
        for_each_index(n, labels.len(), |_, d| {
            let ia: usize = d.iter().zip(&ma).map(|(x, s)| x * s).sum();
            let ib: usize = d.iter().zip(&mb).map(|(x, s)| x * s).sum();
            let mut out = self.data[ia].zero_like();
            self.data[ia].mul_add_into(&other.data[ib], &mut out);
            data.push(out);
        });
        Tensor { labels, data }
    }

    fn sum_out(&self, label: char, n: usize) -> Tensor {
        let p = self.labels.iter().position(|&l| l == label).unwrap();
        let labels: Vec<char> = self.labels.iter().copied().filter(|&l| l != label).collect();
        let st = strides(n, self.labels.len());
        let keep: Vec<usize> = (0..self.labels.len()).filter(|&q| q != p).map(|q| st[q]).collect();
        let mut data = Vec::with_capacity(n.pow(labels.len() as u32));
        for_each_index(n, labels.len(), |_, d| {
            let base: usize = d.iter().zip(&keep).map(|(x, s)| x * s).sum();
            let mut acc = self.data[base].clone();
            for v in 1..n {
                acc.axpy(1.0, &self.data[base + v * st[p]]);
            }
            data.push(acc);
        });
        Tensor { labels, data }
    }

    /// `self += s·other`, broadcasting `other` over labels it lacks.
    fn add_scaled(&mut self, other: &Tensor, n: usize) {
        let st = strides(n, other.labels.len());
        let map: Vec<usize> = self
            .labels
            .iter()
            .map(|l| other.labels.iter().position(|x| x == l).map_or(0, |p| st[p]))
            .collect();
        for_each_index(n, self.labels.len(), |flat, d| {
            let i: usize = d.iter().zip(&map).map(|(x, s)| x * s).sum();
            self.data[flat].axpy(1.0, &other.data[i]);
        });
    }
}

fn free_labels(node: &Node) -> Vec<char> {
    let mut raw = Vec::new();
    match node {
        Node::Atom { labels, .. } => raw.extend(labels.iter().map(|l| l.0)),
        Node::Deriv { label, inner } => {
            raw = free_labels(inner);
            raw.push(*label);
        }
        Node::Product { factors, .. } => raw = factors.iter().flat_map(free_labels).collect(),
        Node::Sum(terms) => {
            let mut union: Vec<char> = Vec::new();
            for t in terms {
                for l in free_labels(t) {
                    if !union.contains(&l) {
                        union.push(l);
                    }
                }
            }
            return union;
        }
    }
    let mut out: Vec<char> = Vec::new();
    for &l in &raw {
        if raw.iter().filter(|&&x| x == l).count() == 1 {
            out.push(l);
        }
    }
    out
}

fn eval_node(node: &Node, nu: usize, ctx: &AtomJets) -> Tensor {
    let n = ctx.dim;
    match node {
        Node::Atom { kind, labels } => {
            let raw: Vec<char> = labels.iter().map(|l| l.0).collect();
            Tensor::from_raw(n, &raw, |idx| ctx.atom(*kind, labels, idx, nu).clone())
        }
        Node::Deriv { label, inner } => {
            let t = eval_node(inner, nu + 1, ctx);
            let mut raw = t.labels.clone();
            raw.push(*label);
            let rank = t.labels.len();
            let st = strides(n, rank);
            Tensor::from_raw(n, &raw, |idx| {
                let i: usize = idx[..rank].iter().zip(&st).map(|(x, s)| x * s).sum();
                t.data[i].differentiate(idx[rank])
            })
        }
        Node::Product { coef, factors } => {
            let one = ctx.constant(nu, *coef);
            let parts: Vec<Tensor> = factors.iter().map(|f| eval_node(f, nu, ctx)).collect();
            let mut counts: Vec<(char, usize)> = Vec::new();
            for l in parts.iter().flat_map(|p| p.labels.iter()) {
                match counts.iter_mut().find(|c| c.0 == *l) {
                    Some(c) => c.1 += 1,
                    None => counts.push((*l, 1)),
                }
            }
            let mut acc = Tensor::scalar(one);
            for (i, part) in parts.iter().enumerate() {
                acc = acc.mul(part, n);
                let done: Vec<char> = acc
                    .labels
                    .iter()
                    .copied()
                    .filter(|l| counts.iter().any(|c| c.0 == *l && c.1 > 1))
                    .filter(|l| !parts[i + 1..].iter().any(|q| q.labels.contains(l)))
                    .collect();
                for l in done {
                    acc = acc.sum_out(l, n);
                }
            }
            acc
        }
        Node::Sum(terms) => {
            let labels = free_labels(node);
            let zero = ctx.constant(nu, 0.0);
            let mut out = Tensor {
                data: vec![zero; n.pow(labels.len() as u32)],
                labels,
            };
            for t in terms {
                out.add_scaled(&eval_node(t, nu, ctx), n);
            }
            out
        }
    }
}

/// Value of `node` with the labels in `output` kept (in that order) and every
/// other free label summed. Returns `n^{|output|}` numbers, row-major.
pub fn evaluate(node: &Node, ctx: &AtomJets, output: &[char]) -> Result<Vec<f64>, DslError> {
    ctx.supports(node)?;
    let n = ctx.dim;
    let mut t = eval_node(node, 0, ctx);
    let extra: Vec<char> = t.labels.iter().copied().filter(|l| !output.contains(l)).collect();
    for l in extra {
        t = t.sum_out(l, n);
    }
    let st = strides(n, t.labels.len());
    // output labels the expression lacks broadcast
    let map: Vec<usize> = output
        .iter()
        .map(|o| t.labels.iter().position(|l| l == o).map_or(0, |p| st[p]))
        .collect();
    let mut out = Vec::with_capacity(n.pow(output.len() as u32));
    for_each_index(n, output.len(), |_, d| {
        let i: usize = d.iter().zip(&map).map(|(x, s)| x * s).sum();
        out.push(t.data[i].value());
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_ctx() -> AtomJets {
        let id = Matrix::from_fn(4, |i, j| SpatialJet::constant(4, 3, if i == j { 1.0 } else { 0.0 }).unwrap());
        let pert = Matrix::from_fn(4, |i, j| SpatialJet::constant(4, 3, if i == j { 2.0 } else { 0.5 }).unwrap());
        let x = |i: usize| SpatialJet::coordinate(4, 3, i, 0.3).unwrap();
        let f1 = x(0) * x(0);
        let f2 = x(0) * x(0) + x(1) * x(2);
        AtomJets::new(&id, &id, &pert, [&f1, &f2])
    }

    fn eval(text: &str) -> f64 {
        evaluate(&parse(text).unwrap(), &flat_ctx(), &[]).unwrap()[0]
    }

    #[test]
    fn parses_nested_forms() {
        let n = parse("- 1/2 g^{jl} ∂_{k}[g^{kr}] (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}])").unwrap();
        match n {
            Node::Product { coef, factors } => {
                assert_eq!(coef, -0.5);
                assert_eq!(factors.len(), 3);
                assert!(matches!(factors[2], Node::Sum(ref t) if t.len() == 2));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("g^{jl").is_err());
        assert!(parse("g^{j}").is_err());
        assert!(parse("g^{j}_{l}").is_err());
        assert!(parse("h_{jl}").is_err());
    }

    #[test]
    fn contractions_on_flat_space() {
        // tr δ = 4, Σ_jl G_jl = 4·2 + 12·0.5
        assert_eq!(eval("g^{jj}"), 4.0);
        assert_eq!(eval("g^{jl} g_{jl}"), 4.0);
        assert_eq!(eval("G_{jl}"), 14.0);
        assert_eq!(eval("g^{jl} G_{jl}"), 8.0);
        // f1 = x1², f2 = x1² + x2 x3, so ⟨df1, df2⟩ = 4x1²
        assert!((eval("∂_{j}[f1] ∂_{l}[f2] g^{jl}") - 0.36).abs() < 1e-15);
        assert!((eval("g^{αβ} ∂_{α}[∂_{β}[∂_{j}[f1] ∂_{l}[f2] g^{jl}]]") - 8.0).abs() < 1e-13);
        assert_eq!(eval("-2 g^{αβ} ∂_{α}[∂_{β}[f1]]"), -4.0);
    }

    #[test]
    fn divergence_binds_at_the_derivative() {
        // ∂_k applied to x_k-dependent pieces: ∂_k[∂_k[f1]] = 2 (k = 1 only)
        assert_eq!(eval("∂_{k}[∂_{k}[f1]]"), 2.0);
        // atoms bind their own repeats first
        assert_eq!(eval("g^{kk} g^{kk}"), 16.0);
        // three occurrences in one product form a single diagonal sum: Σ_k (row sum of G)²
        assert_eq!(eval("g^{kl} G_{km} G_{kn}"), 49.0);
    }

    #[test]
    fn sums_broadcast_missing_labels() {
        // (δ_jl + 1) summed over j, l
        assert_eq!(eval("(g^{jl} + 1)"), 20.0);
    }

    #[test]
    fn audit_flags_placement() {
        let ok = parse("g^{jl} ∂_{k}[g^{kr}] ∂_{l}[G_{jr}]").unwrap();
        assert!(audit(&ok, &[]).is_empty());
        let bad = parse("g^{σr} ∂_{l}[g^{jr}] G_{jσ} g^{ll}").unwrap();
        let issues = audit(&bad, &[]);
        assert!(issues.contains(&IndexIssue::SamePlacement {
            label: 'r',
            slot: Slot::Up
        }));
        let three = parse("g^{kl} G_{λσ} g^{σl} ∂_{j}[G_{il}]").unwrap();
        let issues = audit(&three, &[('k', Slot::Up), ('i', Slot::Down), ('j', Slot::Down)]);
        assert!(issues.contains(&IndexIssue::Repeated { label: 'l', count: 3 }));
        assert!(issues.contains(&IndexIssue::Free {
            label: 'λ',
            slot: Slot::Down
        }));
    }
}
