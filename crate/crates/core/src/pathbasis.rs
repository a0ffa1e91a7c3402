//! Distinguished paths `p(j,i,k)` and the checks built on them.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{rank_of, Matrix};
use crate::module::{Element, Module, ModuleMap, Submodule};
use crate::poset::Poset;
use crate::qh::{FiltrationReport, Layer, QhAlgebra};
use crate::report::Report;

/// Which cover to take at each step of a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChainRule {
    #[default]
    Smallest,
    Largest,
}

/// Covers from `j` up to `i`, endpoints included.
pub fn ascending_chain(po: &Poset, j: u32, i: u32, rule: ChainRule) -> Result<Vec<u32>> {
    if !po.leq(j, i) {
        return Err(Error::NotComparable(j, i));
    }
    let mut chain = vec![j];
    let mut cur = j;
    while cur != i {
        let cands = po.upper_covers(cur).into_iter().filter(|&c| po.leq(c, i));
        cur = match rule {
            ChainRule::Smallest => cands.min(),
            ChainRule::Largest => cands.max(),
        }
        .expect("a cover below i exists");
        chain.push(cur);
    }
    Ok(chain)
}

/// Covers from `i` down to `k`, endpoints included.
pub fn descending_chain(po: &Poset, i: u32, k: u32, rule: ChainRule) -> Result<Vec<u32>> {
    if !po.leq(k, i) {
        return Err(Error::NotComparable(k, i));
    }
    let mut chain = vec![i];
    let mut cur = i;
    while cur != k {
        let cands = po.lower_covers(cur).into_iter().filter(|&c| po.leq(k, c));
        cur = match rule {
            ChainRule::Smallest => cands.min(),
            ChainRule::Largest => cands.max(),
        }
        .expect("a cover above k exists");
        chain.push(cur);
    }
    Ok(chain)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistinguishedPath<E> {
    pub j: u32,
    pub i: u32,
    pub k: u32,
    pub ascending: Vec<u32>,
    pub descending: Vec<u32>,
    /// coordinates in the algebra basis
    pub element: Vec<E>,
}

impl<E> DistinguishedPath<E> {
    pub fn vertices(&self) -> Vec<u32> {
        let mut v = self.ascending.clone();
        v.extend_from_slice(&self.descending[1..]);
        v
    }
}

pub fn distinguished_path<F: Field>(
    a: &QhAlgebra<F>,
    j: u32,
    i: u32,
    k: u32,
    rule: ChainRule,
) -> Result<DistinguishedPath<F::Elem>> {
    let ascending = ascending_chain(&a.poset, j, i, rule)?;
    let descending = descending_chain(&a.poset, i, k, rule)?;
    let mut verts = ascending.clone();
    verts.extend_from_slice(&descending[1..]);
    let element = a.alg.path(&verts)?;
    if element.iter().all(|c| a.field().is_zero(c)) {
        return Err(Error::ZeroPath(j, i, k));
    }
    Ok(DistinguishedPath {
        j,
        i,
        k,
        ascending,
        descending,
        element,
    })
}

/// `P(j)` together with the algebra basis index of each coordinate.
#[derive(Clone, Debug)]
pub struct Projective<F: Field> {
    pub vertex: u32,
    pub module: Module<F>,
    pub paths: Vec<usize>,
    index: HashMap<usize, usize>,
}

impl<F: Field> Projective<F> {
    pub fn new(a: &QhAlgebra<F>, j: u32) -> Result<Self> {
        let (module, paths) = Module::projective_with_basis(&a.alg, j)?;
        let index = paths.iter().enumerate().map(|(t, &p)| (p, t)).collect();
        Ok(Self {
            vertex: j,
            module,
            paths,
            index,
        })
    }

    /// An algebra element lying in `A e_j`, as an element of `P(j)`.
    pub fn element(&self, x: &[F::Elem]) -> Result<Element<F::Elem>> {
        let f = self.module.field();
        let mut out = self.module.zero_element();
        for (p, c) in x.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let t = self.index.get(&p).ok_or(Error::ElementNotInModule)?;
            out[*t] = c.clone();
        }
        Ok(out)
    }

    pub fn to_algebra(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        let alg = self.module.algebra();
        let mut out = alg.zero();
        for (t, c) in x.iter().enumerate() {
            out[self.paths[t]] = c.clone();
        }
        out
    }

    pub fn generated_by(&self, x: &[F::Elem]) -> Result<Submodule<F::Elem>> {
        self.module.generated(&[self.element(x)?])
    }

    /// The map `P(j) → P(j)` given by `x ↦ x·b` for `b ∈ e_j A e_j`.
    pub fn right_multiplication(&self, b: &[F::Elem]) -> Result<ModuleMap<F::Elem>> {
        self.map_to(&self.clone(), b)
    }

    /// The map `P(j) → target` given by `x ↦ x·b` for `b ∈ e_t A e_j`
    /// where `t` is the vertex of `target`.
    pub fn map_to(&self, target: &Projective<F>, b: &[F::Elem]) -> Result<ModuleMap<F::Elem>> {
        let alg = self.module.algebra();
        let f = alg.field();
        let mut blocks = Vec::new();
        let mut offset = 0;
        for vi in 0..alg.vertices().len() {
            let cols = self.module.dims()[vi];
            let rows = target.module.dims()[vi];
            let mut m = Matrix::zeros(f, rows, cols);
            for c in 0..cols {
                let mut x = alg.zero();
                x[self.paths[offset + c]] = f.one();
                let img = target.element(&alg.mul(&x, b))?;
                for (r, v) in target.module.component(&img, vi).into_iter().enumerate() {
                    m.set(r, c, v);
                }
            }
            offset += cols;
            blocks.push(m);
        }
        Ok(ModuleMap { blocks })
    }
}

#[derive(Clone, Debug)]
pub struct PathBasis<E> {
    pub j: u32,
    /// `k ↦ [p(j,i,k) : i ∈ Λ^(j) ∩ Λ^(k)]`, `i` ascending
    pub parts: BTreeMap<u32, Vec<DistinguishedPath<E>>>,
}

impl<E> PathBasis<E> {
    pub fn len(&self) -> usize {
        self.parts.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: u32, k: u32) -> Option<&DistinguishedPath<E>> {
        self.parts.get(&k)?.iter().find(|p| p.i == i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &DistinguishedPath<E>> {
        self.parts.values().flatten()
    }
}

/// All `p(j,i,k)`, checked to form a basis of each `P(j)_k`.
pub fn path_basis<F: Field>(a: &QhAlgebra<F>, j: u32, rule: ChainRule) -> Result<PathBasis<F::Elem>> {
    let po = &a.poset;
    let proj = Projective::new(a, j)?;
    let mut parts = BTreeMap::new();
    for (vi, &k) in a.vertices().iter().enumerate() {
        let mut ps = Vec::new();
        for &i in po.carrier() {
            if po.leq(j, i) && po.leq(k, i) {
                ps.push(distinguished_path(a, j, i, k, rule)?);
            }
        }
        let d = proj.module.dims()[vi];
        let vecs = ps
            .iter()
            .map(|p| Ok(proj.module.component(&proj.element(&p.element)?, vi)))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::BasisFailure(j, k))?;
        if vecs.len() != d || rank_of(a.field(), d, &vecs) != d {
            return Err(Error::BasisFailure(j, k));
        }
        parts.insert(k, ps);
    }
    Ok(PathBasis { j, parts })
}

/// `⟨p(j,i,i)⟩ ⊂ P(j)` with the map `P(i) → P(j)` onto it.
pub fn canonical_copy<F: Field>(
    a: &QhAlgebra<F>,
    j: u32,
    i: u32,
    rule: ChainRule,
) -> Result<(Submodule<F::Elem>, ModuleMap<F::Elem>)> {
    let p = distinguished_path(a, j, i, i, rule)?;
    let pj = Projective::new(a, j)?;
    let pi = Projective::new(a, i)?;
    let sub = pj.generated_by(&p.element)?;
    let map = pi.map_to(&pj, &p.element)?;
    let m = pi.module.full_matrix(&pj.module, &map);
    if !pi.module.is_map(&pj.module, &map) || m.rank(a.field()) != pi.module.dim() || sub.dim() != pi.module.dim() {
        return Err(Error::ZeroPath(j, i, i));
    }
    Ok((sub, map))
}

fn strictly_inside<F: Field>(f: &F, a: &Submodule<F::Elem>, b: &Submodule<F::Elem>) -> bool {
    a.dim() < b.dim() && b.contains_sub(f, a)
}

/// Inclusions among the `⟨p(j,i,k)⟩` against the order on `i` and on `k`.
pub fn verify_lemma_2_2<F: Field>(a: &QhAlgebra<F>, j: u32) -> Result<Report> {
    let f = a.field();
    let po = &a.poset;
    let basis = path_basis(a, j, ChainRule::Smallest)?;
    let proj = Projective::new(a, j)?;
    let mut subs = HashMap::new();
    for p in basis.iter() {
        subs.insert((p.i, p.k), proj.generated_by(&p.element)?);
    }
    let mut rep = Report::default();
    for (&k, ps) in &basis.parts {
        for p in ps {
            for q in ps {
                let got = strictly_inside(f, &subs[&(q.i, k)], &subs[&(p.i, k)]);
                let want = po.lt(p.i, q.i);
                if got != want {
                    rep.push(
                        format!("<p({j},{},{k})> inside <p({j},{},{k})>", q.i, p.i),
                        false,
                        Some(format!("inclusion {got}, order {want}")),
                    );
                }
            }
        }
    }
    for &i in po.up(j).iter() {
        let ks = po.down(i);
        for &k in &ks {
            for &k2 in &ks {
                let got = strictly_inside(f, &subs[&(i, k2)], &subs[&(i, k)]);
                let want = po.lt(k2, k);
                if got != want {
                    rep.push(
                        format!("<p({j},{i},{k2})> inside <p({j},{i},{k})>"),
                        false,
                        Some(format!("inclusion {got}, order {want}")),
                    );
                }
            }
        }
    }
    if rep.checks.is_empty() {
        rep.push(format!("inclusions in P({j}) match the order ({} paths)", basis.len()), true, None);
    }
    Ok(rep)
}

/// Invariance of every `⟨p(j,i,k)⟩` under a basis of `End(P(j))`.
pub fn verify_theorem_a<F: Field>(a: &QhAlgebra<F>, j: u32) -> Result<Report> {
    let f = a.field();
    let basis = path_basis(a, j, ChainRule::Smallest)?;
    let proj = Projective::new(a, j)?;
    let ends: Vec<Vec<F::Elem>> = a
        .alg
        .basis()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.src == j && p.tgt == j)
        .map(|(t, _)| {
            let mut x = a.alg.zero();
            x[t] = f.one();
            x
        })
        .collect();
    let mut rep = Report::default();
    for b in &ends {
        let fmap = proj.right_multiplication(b)?;
        for p in basis.iter() {
            let x = proj.element(&p.element)?;
            let sub = proj.module.generated(&[x.clone()])?;
            let y = proj.module.apply_map(&fmap, &x);
            if !proj.module.contains(&sub, &y) {
                rep.push(
                    format!("<p({j},{},{})> invariant", p.i, p.k),
                    false,
                    Some(format!("fails under right multiplication by {}", a.alg.format_elem(b))),
                );
            }
        }
    }
    if rep.checks.is_empty() {
        rep.push(
            format!("{} paths invariant under {} endomorphisms of P({j})", basis.len(), ends.len()),
            true,
            None,
        );
    }
    Ok(rep)
}

/// Compares `⟨p(j,i,k)⟩` under the two chain rules.
pub fn verify_chain_independence<F: Field>(a: &QhAlgebra<F>, j: u32) -> Result<Report> {
    let small = path_basis(a, j, ChainRule::Smallest)?;
    let large = path_basis(a, j, ChainRule::Largest)?;
    let proj = Projective::new(a, j)?;
    let mut rep = Report::default();
    for p in small.iter() {
        let q = large.get(p.i, p.k).expect("same index set");
        let same = proj.generated_by(&p.element)? == proj.generated_by(&q.element)?;
        rep.push(
            format!("<p({j},{},{})> independent of chain", p.i, p.k),
            same,
            (!same).then(|| format!("{:?} vs {:?}", p.vertices(), q.vertices())),
        );
    }
    Ok(rep)
}

pub fn has_finitely_many_submodules<F: Field>(a: &QhAlgebra<F>, j: u32) -> bool {
    a.poset.is_chain(&a.poset.up(j))
}

/// `D(t) = Σ_{m ≥ t} ⟨p(1,i_m,i_m)⟩` for a sequence in `𝓛(1)`, with each
/// `D(t)/D(t+1)` checked against `Δ(i_t)`. Layers are bottom-up, so they
/// list the sequence in reverse.
pub fn delta_filtration_from_sequence<F: Field>(
    a: &QhAlgebra<F>,
    seq: &[u32],
) -> Result<FiltrationReport<F>> {
    let one = a.min_vertex().ok_or(Error::SequenceNotAdmissible)?;
    if !a.poset.linear_extensions(Some(one)).iter().any(|s| s == seq) {
        return Err(Error::SequenceNotAdmissible);
    }
    let proj = Projective::new(a, one)?;
    let p1 = &proj.module;
    let gens = seq
        .iter()
        .map(|&i| Ok(proj.element(&distinguished_path(a, one, i, i, ChainRule::Smallest)?.element)?))
        .collect::<Result<Vec<_>>>()?;
    let mut above = p1.zero_submodule();
    let mut layers = Vec::new();
    let mut multiplicities = BTreeMap::new();
    let mut steps = Vec::new();
    for (t, &i) in seq.iter().enumerate().rev() {
        let (q, proj_q) = p1.quotient(&above)?;
        let g = p1.apply_map(&proj_q, &gens[t]);
        let layer_sub = q.generated(&[g.clone()])?;
        let (layer, _) = q.submodule_module(&layer_sub)?;
        let std = a.standard(i)?;
        if !layer.is_isomorphic(&std.module)? {
            return Err(Error::SequenceNotAdmissible);
        }
        let witness = std.map_to(&q, &g);
        if !std.module.is_map(&q, &witness) {
            return Err(Error::SequenceNotAdmissible);
        }
        layers.push(i);
        *multiplicities.entry(i).or_insert(0) += 1;
        steps.push(Layer {
            index: i,
            copies: 1,
            stage: q,
            witness,
        });
        above = p1.join(&above, &p1.generated(&[gens[t].clone()])?);
    }
    if above.dim() != p1.dim() {
        return Err(Error::SequenceNotAdmissible);
    }
    Ok(FiltrationReport {
        layers,
        multiplicities,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::presets::{make_anc, make_example4, make_sl3_block, unipotent_c};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn anc4() -> QhAlgebra<Rationals> {
        QhAlgebra::from_presentation(Rationals, &make_anc(4, &unipotent_c(&q(1))).unwrap()).unwrap()
    }

    fn sl3() -> QhAlgebra<Rationals> {
        QhAlgebra::from_presentation(Rationals, &make_sl3_block().unwrap()).unwrap()
    }

    #[test]
    fn chains() {
        let a = anc4();
        assert_eq!(ascending_chain(&a.poset, 1, 4, ChainRule::Smallest).unwrap(), vec![1, 2, 4]);
        assert_eq!(ascending_chain(&a.poset, 1, 4, ChainRule::Largest).unwrap(), vec![1, 3, 4]);
        assert_eq!(ascending_chain(&a.poset, 3, 3, ChainRule::Smallest).unwrap(), vec![3]);
        assert_eq!(ascending_chain(&a.poset, 2, 3, ChainRule::Smallest), Err(Error::NotComparable(2, 3)));
        assert_eq!(ascending_chain(&sl3().poset, 1, 6, ChainRule::Smallest).unwrap(), vec![1, 2, 4, 6]);
    }

    #[test]
    fn anc_paths() {
        let a = anc4();
        let p = distinguished_path(&a, 1, 4, 1, ChainRule::Smallest).unwrap();
        assert_eq!(p.vertices(), vec![1, 2, 4, 2, 1]);
        assert_eq!(p.element, a.alg.path(&[1, 2, 4, 2, 1]).unwrap());
        let p = distinguished_path(&a, 2, 4, 3, ChainRule::Smallest).unwrap();
        assert_eq!(p.vertices(), vec![2, 4, 3]);
        assert_eq!(p.element, a.alg.path(&[2, 4, 3]).unwrap());
        assert_eq!(a.alg.format_elem(&distinguished_path(&a, 2, 2, 2, ChainRule::Smallest).unwrap().element), "e2");
        let b = path_basis(&a, 1, ChainRule::Smallest).unwrap();
        assert_eq!(b.parts[&1].len(), 4);
        assert_eq!(b.len(), 9);
    }

    #[test]
    fn sl3_basis_and_copies() {
        let a = sl3();
        assert_eq!(path_basis(&a, 1, ChainRule::Smallest).unwrap().len(), 19);
        for j in 1..=6 {
            let b = path_basis(&a, j, ChainRule::Largest).unwrap();
            assert_eq!(b.len(), a.projective(j).unwrap().dim());
        }
        let (sub, _) = canonical_copy(&a, 1, 6, ChainRule::Smallest).unwrap();
        assert_eq!(sub.dim(), 6);
    }

    #[test]
    fn lemma_and_theorem_on_small_algebras() {
        let a = anc4();
        for j in 1..=4 {
            assert!(verify_lemma_2_2(&a, j).unwrap().passed(), "j = {j}");
            assert!(verify_theorem_a(&a, j).unwrap().passed(), "j = {j}");
            assert!(verify_chain_independence(&a, j).unwrap().passed());
        }
    }

    #[test]
    fn sl3_lemma_and_theorem() {
        let a = sl3();
        for j in 1..=6 {
            let r = verify_lemma_2_2(&a, j).unwrap();
            assert!(r.passed(), "{:?}", r.failures());
            assert!(verify_theorem_a(&a, j).unwrap().passed(), "j = {j}");
            assert!(verify_chain_independence(&a, j).unwrap().passed());
        }
    }

    #[test]
    fn finitely_many_submodules() {
        let e = QhAlgebra::from_presentation(Rationals, &make_example4(&q(2)).unwrap()).unwrap();
        assert!(!has_finitely_many_submodules(&e, 1));
        for i in 2..=6 {
            assert!(has_finitely_many_submodules(&e, i));
        }
    }

    #[test]
    fn filtrations_from_sequences() {
        let e = QhAlgebra::from_presentation(Rationals, &make_example4(&q(2)).unwrap()).unwrap();
        for seq in e.poset.linear_extensions(Some(1)) {
            let rep = delta_filtration_from_sequence(&e, &seq).unwrap();
            assert_eq!(rep.layers, seq.iter().rev().copied().collect::<Vec<_>>());
        }
        assert_eq!(
            delta_filtration_from_sequence(&e, &[1, 3, 2, 4, 5, 6]).unwrap_err(),
            Error::SequenceNotAdmissible
        );
        let f2 = QhAlgebra::from_presentation(
            PrimeField::new(2).unwrap(),
            &make_anc(4, &unipotent_c(&q(1))).unwrap().with_field(crate::field::FieldSpec::PrimeField(2)),
        )
        .unwrap();
        assert_eq!(delta_filtration_from_sequence(&f2, &[1, 3, 2, 4]).unwrap().layers, vec![4, 2, 3, 1]);
    }
}
