//! Normal forms and structure constants for `KQ/I`.
//!
//! The ideal is completed to a Gröbner basis under the degree-lexicographic
//! order on arrow words (longest term leads); normal forms are the paths with
//! no leading word as a subword.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::presentation::{Path, PathSum, Presentation};

pub const DEFAULT_LENGTH_CAP: usize = 24;

type Word = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct DegLex(Word);

impl Ord for DegLex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DegLex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Poly<E> = BTreeMap<DegLex, E>;

/// `tip ≡ tail` in the quotient.
#[derive(Clone, Debug)]
struct Rule<E> {
    tip: Word,
    tail: Vec<(Word, E)>,
}

/// A sparse coefficient vector over the normal-form basis.
pub type Sparse<E> = Vec<(usize, E)>;

#[derive(Clone, Debug)]
pub struct Algebra<F: Field> {
    field: F,
    pres: Presentation,
    rules: Vec<Rule<F::Elem>>,
    tips: HashMap<Word, usize>,
    max_tip: usize,
    basis: Vec<Path>,
    index: HashMap<(u32, Word), usize>,
    // arrow_act[b][a]: basis path b followed by arrow a
    arrow_act: Vec<Vec<Option<Sparse<F::Elem>>>>,
}

impl<F: Field> PartialEq for Algebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.pres == other.pres && self.field == other.field
    }
}

impl<F: Field> Algebra<F> {
    pub fn build(field: F, pres: &Presentation, length_cap: usize) -> Result<Self> {
        pres.validate()?;
        if pres.field != field.spec() {
            return Err(Error::Parse(format!(
                "presentation declares {} but field is {}",
                pres.field,
                field.spec()
            )));
        }
        let mut alg = Self {
            field,
            pres: pres.clone(),
            rules: Vec::new(),
            tips: HashMap::new(),
            max_tip: 0,
            basis: Vec::new(),
            index: HashMap::new(),
            arrow_act: Vec::new(),
        };
        alg.complete(length_cap)?;
        alg.enumerate_normal_forms(length_cap)?;
        alg.tabulate_arrows();
        Ok(alg)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn vertices(&self) -> &[u32] {
        self.pres.quiver.vertices()
    }

    pub fn vertex_index(&self, v: u32) -> Result<usize> {
        self.pres.quiver.vertex_index(v).ok_or(Error::UnknownVertex(v))
    }

    pub fn num_arrows(&self) -> usize {
        self.pres.quiver.arrows().len()
    }

    pub fn arrow_ends(&self, a: usize) -> (u32, u32) {
        let ar = &self.pres.quiver.arrows()[a];
        (ar.src, ar.tgt)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn opposite(&self) -> Result<Self> {
        Self::build(self.field.clone(), &self.pres.opposite(), DEFAULT_LENGTH_CAP)
    }

    /// `A / A(Σ_{t ∉ keep} e_t)A`.
    pub fn vertex_factor(&self, keep: &[u32]) -> Result<Self> {
        Self::build(self.field.clone(), &self.pres.restrict(keep)?, DEFAULT_LENGTH_CAP)
    }

    /// `dim e_k A e_j`: paths from `j` to `k`.
    pub fn cartan(&self, k: u32, j: u32) -> usize {
        self.basis.iter().filter(|p| p.src == j && p.tgt == k).count()
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.index.get(&(p.src, p.word.clone())).copied()
    }

    fn monic(&self, mut p: Poly<F::Elem>) -> Option<Rule<F::Elem>> {
        let (DegLex(tip), c) = p.pop_last()?;
        let inv = self.field.inv(&c).expect("nonzero leading coefficient");
        let tail = p
            .into_iter()
            .rev()
            .map(|(DegLex(w), d)| (w, self.field.neg(&self.field.mul(&d, &inv))))
            .collect();
        Some(Rule { tip, tail })
    }

    fn rule_poly(&self, r: &Rule<F::Elem>, pre: &[usize], post: &[usize]) -> Poly<F::Elem> {
        let f = &self.field;
        let wrap = |w: &[usize]| {
            let mut out = pre.to_vec();
            out.extend_from_slice(w);
            out.extend_from_slice(post);
            DegLex(out)
        };
        let mut p = Poly::new();
        p.insert(wrap(&r.tip), f.one());
        for (w, c) in &r.tail {
            add_term(f, &mut p, wrap(w), f.neg(c));
        }
        p
    }

    fn find_tip(&self, w: &[usize]) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            let hi = w.len().min(start + self.max_tip);
            for end in (start + 2)..=hi {
                if let Some(&r) = self.tips.get(&w[start..end]) {
                    return Some((r, start));
                }
            }
        }
        None
    }

    fn reduce_poly(&self, mut p: Poly<F::Elem>) -> Poly<F::Elem> {
        let f = &self.field;
        let mut out = Poly::new();
        while let Some((DegLex(w), c)) = p.pop_last() {
            match self.find_tip(&w) {
                None => {
                    out.insert(DegLex(w), c);
                }
                Some((r, start)) => {
                    let rule = &self.rules[r];
                    let pre = &w[..start];
                    let post = &w[start + rule.tip.len()..];
                    for (tw, tc) in &rule.tail {
                        let mut nw = pre.to_vec();
                        nw.extend_from_slice(tw);
                        nw.extend_from_slice(post);
                        add_term(f, &mut p, DegLex(nw), f.mul(&c, tc));
                    }
                }
            }
        }
        out
    }

    fn complete(&mut self, cap: usize) -> Result<()> {
        let f = self.field.clone();
        let mut pending: VecDeque<Poly<F::Elem>> = VecDeque::new();
        for r in &self.pres.relations {
            let mut p = Poly::new();
            for (c, path) in &r.terms {
                add_term(&f, &mut p, DegLex(path.word.clone()), f.from_rational(c)?);
            }
            pending.push_back(p);
        }
        let mut alive: Vec<bool> = Vec::new();
        let mut steps = 0usize;
        while let Some(p) = pending.pop_front() {
            steps += 1;
            if steps > 200_000 {
                return Err(Error::NotFiniteDimensional(cap));
            }
            let p = self.reduce_poly(p);
            let Some(rule) = self.monic(p) else {
                continue;
            };
            if rule.tip.len() > cap {
                return Err(Error::NotFiniteDimensional(cap));
            }
            // Older rules whose tip contains the new tip get re-queued.
            for r in 0..self.rules.len() {
                if alive[r] && contains_subword(&self.rules[r].tip, &rule.tip) {
                    alive[r] = false;
                    self.tips.remove(&self.rules[r].tip);
                    pending.push_back(self.rule_poly(&self.rules[r], &[], &[]));
                }
            }
            let id = self.rules.len();
            self.tips.insert(rule.tip.clone(), id);
            self.max_tip = self.max_tip.max(rule.tip.len());
            self.rules.push(rule);
            alive.push(true);
            for g in 0..self.rules.len() {
                if !alive[g] {
                    continue;
                }
                for (x, y) in [(id, g), (g, id)] {
                    for s in self.overlaps(x, y) {
                        pending.push_back(s);
                    }
                    if x == y {
                        break;
                    }
                }
            }
        }
        let keep: Vec<Rule<F::Elem>> = self
            .rules
            .iter()
            .zip(&alive)
            .filter(|(_, &a)| a)
            .map(|(r, _)| r.clone())
            .collect();
        self.rules = keep;
        self.tips = self
            .rules
            .iter()
            .enumerate()
            .map(|(t, r)| (r.tip.clone(), t))
            .collect();
        self.max_tip = self.rules.iter().map(|r| r.tip.len()).max().unwrap_or(0);
        Ok(())
    }

    /// S-polynomials for tip(x) = A·B, tip(y) = B·C with B nonempty.
    fn overlaps(&self, x: usize, y: usize) -> Vec<Poly<F::Elem>> {
        let (tx, ty) = (&self.rules[x].tip, &self.rules[y].tip);
        let mut out = Vec::new();
        for k in 1..tx.len().min(ty.len()) {
            if tx[tx.len() - k..] == ty[..k] {
                let a = &tx[..tx.len() - k];
                let c = &ty[k..];
                let mut s = self.rule_poly(&self.rules[x], &[], c);
                for (w, v) in self.rule_poly(&self.rules[y], a, &[]) {
                    add_term(&self.field, &mut s, w, self.field.neg(&v));
                }
                out.push(s);
            }
        }
        out
    }

    fn enumerate_normal_forms(&mut self, cap: usize) -> Result<()> {
        let arrows = self.pres.quiver.arrows().to_vec();
        let mut layer: Vec<Path> = self.vertices().iter().map(|&v| Path::trivial(v)).collect();
        let mut all = Vec::new();
        let mut len = 0;
        while !layer.is_empty() {
            if len > cap {
                return Err(Error::NotFiniteDimensional(cap));
            }
            let mut next = Vec::new();
            for p in &layer {
                for (a, ar) in arrows.iter().enumerate() {
                    if ar.src != p.tgt {
                        continue;
                    }
                    let mut w = p.word.clone();
                    w.push(a);
                    let has_tip = (0..w.len().saturating_sub(1))
                        .any(|s| self.tips.contains_key(&w[s..]));
                    if !has_tip {
                        next.push(Path {
                            src: p.src,
                            tgt: ar.tgt,
                            word: w,
                        });
                    }
                }
            }
            all.append(&mut layer);
            layer = next;
            len += 1;
        }
        all.sort_by(|a, b| {
            a.word
                .len()
                .cmp(&b.word.len())
                .then_with(|| a.word.cmp(&b.word))
                .then_with(|| a.src.cmp(&b.src))
        });
        self.index = all
            .iter()
            .enumerate()
            .map(|(t, p)| ((p.src, p.word.clone()), t))
            .collect();
        self.basis = all;
        Ok(())
    }

    fn tabulate_arrows(&mut self) {
        let n = self.num_arrows();
        let mut table = Vec::with_capacity(self.basis.len());
        for b in 0..self.basis.len() {
            let p = self.basis[b].clone();
            let mut row = Vec::with_capacity(n);
            for a in 0..n {
                let (s, _) = self.arrow_ends(a);
                if s != p.tgt {
                    row.push(None);
                    continue;
                }
                let mut w = p.word.clone();
                w.push(a);
                row.push(Some(self.word_coords(p.src, w)));
            }
            table.push(row);
        }
        self.arrow_act = table;
    }

    /// Coordinates of the path with the given start and word.
    fn word_coords(&self, src: u32, w: Word) -> Sparse<F::Elem> {
        if w.is_empty() {
            return vec![(self.index[&(src, w)], self.field.one())];
        }
        let mut p = Poly::new();
        p.insert(DegLex(w), self.field.one());
        let red = self.reduce_poly(p);
        let mut out: Sparse<F::Elem> = red
            .into_iter()
            .map(|(DegLex(w), c)| (self.index[&(src, w)], c))
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    /// Basis path `b` followed by arrow `a`, i.e. `a · b`.
    pub fn arrow_times(&self, a: usize, b: usize) -> Option<&Sparse<F::Elem>> {
        self.arrow_act[b][a].as_ref()
    }

    /// `x·y` for basis elements: walk `y`, then `x`.
    pub fn mul_basis(&self, x: usize, y: usize) -> Sparse<F::Elem> {
        let (px, py) = (&self.basis[x], &self.basis[y]);
        if py.tgt != px.src {
            return Vec::new();
        }
        let mut w = py.word.clone();
        w.extend_from_slice(&px.word);
        self.word_coords(py.src, w)
    }

    pub fn zero(&self) -> Vec<F::Elem> {
        vec![self.field.zero(); self.dim()]
    }

    pub fn mul(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                let ab = f.mul(a, b);
                for (k, c) in self.mul_basis(i, j) {
                    out[k] = f.add(&out[k], &f.mul(&ab, &c));
                }
            }
        }
        out
    }

    pub fn idempotent(&self, v: u32) -> Result<Vec<F::Elem>> {
        self.path(&[v])
    }

    /// Normal form of the path through the given vertices.
    pub fn path(&self, verts: &[u32]) -> Result<Vec<F::Elem>> {
        let p = self.pres.quiver.path_through(verts)?;
        Ok(self.path_coords(&p))
    }

    pub fn path_coords(&self, p: &Path) -> Vec<F::Elem> {
        let mut out = self.zero();
        for (i, c) in self.word_coords(p.src, p.word.clone()) {
            out[i] = c;
        }
        out
    }

    pub fn from_pathsum(&self, s: &PathSum<F::Elem>) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = self.zero();
        for (c, p) in &s.terms {
            for (i, d) in self.word_coords(p.src, p.word.clone()) {
                out[i] = f.add(&out[i], &f.mul(c, &d));
            }
        }
        out
    }

    pub fn to_pathsum(&self, v: &[F::Elem]) -> PathSum<F::Elem> {
        PathSum {
            terms: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !self.field.is_zero(c))
                .map(|(i, c)| (c.clone(), self.basis[i].clone()))
                .collect(),
        }
    }

    pub fn format_elem(&self, v: &[F::Elem]) -> String {
        let f = &self.field;
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(i, c)| {
                let p = self.pres.quiver.format_path(&self.basis[i]);
                if f.is_one(c) {
                    p
                } else {
                    format!("{}*{}", f.format(c), p)
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Checks `(xy)z = x(yz)` on all basis triples; returns the first failure.
    pub fn check_associativity(&self) -> Option<(usize, usize, usize)> {
        let f = &self.field;
        let n = self.dim();
        let table: Vec<Vec<Sparse<F::Elem>>> = (0..n)
            .map(|x| (0..n).map(|y| self.mul_basis(x, y)).collect())
            .collect();
        let times = |s: &Sparse<F::Elem>, z: usize, left: bool| {
            let mut acc = vec![f.zero(); n];
            for (k, c) in s {
                let prod = if left { &table[*k][z] } else { &table[z][*k] };
                for (m, d) in prod {
                    acc[*m] = f.add(&acc[*m], &f.mul(c, d));
                }
            }
            acc
        };
        for x in 0..n {
            for y in 0..n {
                if table[x][y].is_empty() {
                    continue;
                }
                for z in 0..n {
                    let lhs = times(&table[x][y], z, true);
                    let rhs = times(&table[y][z], x, false);
                    if lhs != rhs {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }
}

fn add_term<F: Field>(f: &F, p: &mut Poly<F::Elem>, w: DegLex, c: F::Elem) {
    if f.is_zero(&c) {
        return;
    }
    match p.get_mut(&w) {
        Some(v) => {
            let s = f.add(v, &c);
            if f.is_zero(&s) {
                p.remove(&w);
            } else {
                *v = s;
            }
        }
        None => {
            p.insert(w, c);
        }
    }
}

fn contains_subword(hay: &[usize], needle: &[usize]) -> bool {
    hay.len() > needle.len() && hay.windows(needle.len()).any(|w| w == needle)
}
