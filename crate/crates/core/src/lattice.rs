//! Submodule lattices over finite fields and their Hasse diagrams.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::module::{Module, Submodule};
use crate::poset::Poset;

pub const DEFAULT_BUDGET: usize = 20_000;

#[derive(Clone, Debug)]
pub struct SubmoduleLattice<F: Field> {
    pub ambient: Module<F>,
    /// sorted by dimension, then by echelon form
    pub nodes: Vec<Submodule<F::Elem>>,
    pub covers: Vec<(usize, usize)>,
}

impl<F: Field> SubmoduleLattice<F> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Number of maximal chains from 0 to the whole module.
    pub fn maximal_chains(&self) -> u128 {
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.covers {
            up[a].push(b);
        }
        // nodes are sorted by dimension, so a reverse sweep is topological
        let mut count = vec![0u128; self.nodes.len()];
        count[self.top()] = 1;
        for a in (0..self.nodes.len()).rev() {
            if a != self.top() {
                count[a] = up[a].iter().map(|&b| count[b]).sum();
            }
        }
        count[self.bottom()]
    }

    pub fn label(&self, idx: usize) -> String {
        let dims: Vec<String> = self.nodes[idx].dims().iter().map(|d| d.to_string()).collect();
        format!("n{idx} [{}]", dims.join(","))
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = (0..self.nodes.len()).map(|i| self.label(i)).collect();
        hasse_dot(&labels, &self.covers)
    }
}

fn sort_key<F: Field>(f: &F, s: &Submodule<F::Elem>) -> (usize, Vec<String>) {
    let rows = s
        .parts
        .iter()
        .flat_map(|p| p.rows.iter())
        .map(|r| r.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(" "))
        .collect();
    (s.dim(), rows)
}

/// Every nonzero homogeneous vector up to scalars, vertex by vertex.
pub(crate) fn homogeneous_lines<F: Field>(m: &Module<F>, elems: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    let f = m.field();
    let mut out = Vec::new();
    for (vi, &d) in m.dims().iter().enumerate() {
        let mut local = vec![f.zero(); d];
        // leading nonzero coordinate fixed to one
        for lead in 0..d {
            let tail = d - lead - 1;
            let mut digits = vec![0usize; tail];
            loop {
                local.iter_mut().for_each(|x| *x = f.zero());
                local[lead] = f.one();
                for (t, &dg) in digits.iter().enumerate() {
                    local[lead + 1 + t] = elems[dg].clone();
                }
                out.push(m.embed_component(vi, &local));
                let mut pos = 0;
                while pos < tail {
                    digits[pos] += 1;
                    if digits[pos] < elems.len() {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == tail {
                    break;
                }
            }
        }
    }
    out
}

/// All submodules of `m`. Every submodule is the sum of the cyclic
/// submodules generated by its homogeneous elements, so the lattice is the
/// closure of those cyclic submodules under sums.
pub fn enumerate_submodules<F: Field>(m: &Module<F>, budget: usize) -> Result<SubmoduleLattice<F>> {
    let f = m.field();
    let elems = f.elements().ok_or(Error::InfiniteFieldUnsupported)?;
    let mut cyclic: Vec<Submodule<F::Elem>> = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for v in homogeneous_lines(m, &elems) {
        let s = m.generated(&[v])?;
        if seen_cyclic.insert(s.clone()) {
            cyclic.push(s);
        }
    }
    let zero = m.zero_submodule();
    let mut seen: HashSet<Submodule<F::Elem>> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(n) = queue.pop_front() {
        for c in &cyclic {
            if n.contains_sub(f, c) {
                continue;
            }
            let s = n.sum(f, c);
            if seen.insert(s.clone()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                queue.push_back(s);
            }
        }
    }
    let mut nodes: Vec<Submodule<F::Elem>> = seen.into_iter().collect();
    nodes.sort_by_cached_key(|s| sort_key(f, s));
    // composition factors are one-dimensional, so covers are exactly the
    // inclusions that raise the dimension by one
    let mut by_dim: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, s) in nodes.iter().enumerate() {
        by_dim.entry(s.dim()).or_default().push(i);
    }
    let mut covers = Vec::new();
    for (i, s) in nodes.iter().enumerate() {
        for &j in by_dim.get(&(s.dim() + 1)).map(Vec::as_slice).unwrap_or(&[]) {
            if nodes[j].contains_sub(f, s) {
                covers.push((i, j));
            }
        }
    }
    Ok(SubmoduleLattice {
        ambient: m.clone(),
        nodes,
        covers,
    })
}

/// DOT text with one node per label and one edge per cover `(lower, upper)`.
pub fn hasse_dot(labels: &[String], covers: &[(usize, usize)]) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
    for (i, l) in labels.iter().enumerate() {
        writeln!(out, "  {i} [label=\"{l}\"];").unwrap();
    }
    let mut edges = covers.to_vec();
    edges.sort_unstable();
    for (a, b) in edges {
        writeln!(out, "  {a} -> {b};").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn poset_dot(po: &Poset) -> String {
    let labels: Vec<String> = po.carrier().iter().map(|v| v.to_string()).collect();
    let pos = |v: u32| po.carrier().iter().position(|&x| x == v).unwrap();
    let covers: Vec<(usize, usize)> = po.cover_pairs().into_iter().map(|(a, b)| (pos(a), pos(b))).collect();
    hasse_dot(&labels, &covers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, DEFAULT_LENGTH_CAP};
    use crate::field::{FieldSpec, PrimeField, Rationals};
    use crate::presets::{make_anc, unipotent_c};
    use num_rational::BigRational;
    use std::sync::Arc;

    fn anc4_fp(p: u32, q: i64) -> Arc<Algebra<PrimeField>> {
        let pres = make_anc(4, &unipotent_c(&BigRational::from_integer(q.into())))
            .unwrap()
            .with_field(FieldSpec::PrimeField(p));
        Arc::new(Algebra::build(PrimeField::new(p).unwrap(), &pres, DEFAULT_LENGTH_CAP).unwrap())
    }

    #[test]
    fn simple_has_two_nodes() {
        let a = anc4_fp(2, 1);
        let l = enumerate_submodules(&Module::simple(&a, 1).unwrap(), 10).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.covers, vec![(0, 1)]);
        assert_eq!(l.maximal_chains(), 1);
        let dot = l.to_dot();
        assert_eq!(dot.matches("->").count(), 1);
    }

    #[test]
    fn projective_three() {
        for p in [2, 3, 5] {
            let a = anc4_fp(p, 1);
            let l = enumerate_submodules(&Module::projective(&a, 3).unwrap(), DEFAULT_BUDGET).unwrap();
            assert_eq!(l.len(), 10, "p = {p}");
        }
    }

    #[test]
    fn injective_three() {
        for (p, q) in [(2, 1), (3, 1), (2, 0), (3, 0)] {
            let a = anc4_fp(p, q);
            let op = Arc::new(a.opposite().unwrap());
            let i3 = Module::injective(&a, &op, 3).unwrap();
            let n = enumerate_submodules(&i3, DEFAULT_BUDGET).unwrap().len();
            let m = enumerate_submodules(&Module::projective(&a, 3).unwrap(), DEFAULT_BUDGET).unwrap().len();
            assert_eq!(m, 10);
            assert_eq!(n, if q == 0 { 10 } else { 9 }, "p = {p}, q = {q}");
        }
    }

    #[test]
    fn budget_and_field_errors() {
        let a = anc4_fp(2, 1);
        let p1 = Module::projective(&a, 1).unwrap();
        assert_eq!(enumerate_submodules(&p1, 3).unwrap_err(), Error::BudgetExceeded(3));
        let pres = make_anc(4, &unipotent_c(&BigRational::from_integer(1.into()))).unwrap();
        let q = Arc::new(Algebra::build(Rationals, &pres, DEFAULT_LENGTH_CAP).unwrap());
        assert_eq!(
            enumerate_submodules(&Module::simple(&q, 1).unwrap(), 10).unwrap_err(),
            Error::InfiniteFieldUnsupported
        );
    }

    #[test]
    fn poset_diagram() {
        let dot = poset_dot(&Poset::chain(3));
        assert_eq!(dot.matches("->").count(), 2);
    }
}
