//! The elements `t(i,k)` of `P(1)` and the indecomposable tilting modules.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::lattice::homogeneous_lines;
use crate::matrix::{Echelon, Matrix};
use crate::module::{Element, Module, ModuleMap, Submodule};
use crate::pathbasis::{distinguished_path, path_basis, ChainRule, Projective};
use crate::qh::{PeelOrder, QhAlgebra};
use crate::report::Report;

/// `{x ∈ M : e_t·A·x = 0 for t ∉ support}`.
pub fn largest_supported_submodule<F: Field>(
    a: &QhAlgebra<F>,
    m: &Module<F>,
    support: &[u32],
) -> Result<Submodule<F::Elem>> {
    if !a.poset.is_down_set(support) {
        return Err(Error::NotADownSet);
    }
    let alg = m.algebra();
    let f = m.field();
    let mut parts = Vec::new();
    for (si, &s) in alg.vertices().iter().enumerate() {
        let d = m.dims()[si];
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for (b, p) in alg.basis().iter().enumerate() {
            if p.src != s || support.contains(&p.tgt) {
                continue;
            }
            let ti = alg.vertex_index(p.tgt)?;
            let mut elem = alg.zero();
            elem[b] = f.one();
            let images: Vec<Vec<F::Elem>> = (0..d)
                .map(|c| m.component(&m.act(&elem, &m.unit(si, c)), ti))
                .collect();
            for r in 0..m.dims()[ti] {
                rows.push(images.iter().map(|col| col[r].clone()).collect());
            }
        }
        let kernel = if rows.is_empty() {
            Matrix::identity(f, d).row_vecs()
        } else {
            Matrix::from_rows(d, &rows).kernel_basis(f)
        };
        parts.push(Echelon::span(f, d, &kernel));
    }
    let sub = Submodule { parts };
    debug_assert!(m.is_submodule(&sub));
    Ok(sub)
}

/// `rad N = Σ_a a·N` inside the ambient module.
fn radical_of<F: Field>(m: &Module<F>, s: &Submodule<F::Elem>) -> Result<Submodule<F::Elem>> {
    let mut gens = Vec::new();
    for (vi, part) in s.parts.iter().enumerate() {
        for r in &part.rows {
            let x = m.embed_component(vi, r);
            for a in 0..m.algebra().num_arrows() {
                gens.push(m.act_arrow(a, &x));
            }
        }
    }
    m.generated(&gens)
}

/// The tilting data of a 1-quasi-hereditary algebra inside `P(1)`.
#[derive(Clone, Debug)]
pub struct TiltingKit<F: Field> {
    pub one: u32,
    pub projective: Projective<F>,
    /// `t(i,1)` as algebra elements
    pub generators: BTreeMap<u32, Vec<F::Elem>>,
    /// `t(i,k)` for `k ≤ i`
    pub elements: BTreeMap<(u32, u32), Vec<F::Elem>>,
    pub modules: BTreeMap<u32, Submodule<F::Elem>>,
}

impl<F: Field> TiltingKit<F> {
    pub fn new(a: &QhAlgebra<F>) -> Result<Self> {
        let one = a.min_vertex().ok_or(Error::InvalidParameters("no unique minimal vertex".into()))?;
        let projective = Projective::new(a, one)?;
        let mut kit = Self {
            one,
            projective,
            generators: BTreeMap::new(),
            elements: BTreeMap::new(),
            modules: BTreeMap::new(),
        };
        for &i in a.vertices() {
            let (t, sub) = tilting_generator(a, i)?;
            for (k, tk) in tilting_elements(a, &t, i)? {
                kit.elements.insert((i, k), tk);
            }
            kit.generators.insert(i, t);
            kit.modules.insert(i, sub);
        }
        Ok(kit)
    }

    pub fn t(&self, i: u32, k: u32) -> Option<&Vec<F::Elem>> {
        self.elements.get(&(i, k))
    }

    pub fn generated(&self, x: &[F::Elem]) -> Result<Submodule<F::Elem>> {
        self.projective.generated_by(x)
    }

    /// `T(i)` as a module of its own.
    pub fn summand(&self, i: u32) -> Result<Module<F>> {
        Ok(self.projective.module.submodule_module(&self.modules[&i])?.0)
    }
}

/// `t(i,1)` with `T(i) = ⟨t(i,1)⟩`, the largest submodule of `P(1)` supported
/// on `Λ(i)`. The generator is reduced modulo `rad T(i)` in the coordinates
/// `p(1,l,1)`, `l` descending, and scaled so its first nonzero coordinate is 1.
pub fn tilting_generator<F: Field>(a: &QhAlgebra<F>, i: u32) -> Result<(Vec<F::Elem>, Submodule<F::Elem>)> {
    let f = a.field();
    let one = a.min_vertex().ok_or(Error::InvalidParameters("no unique minimal vertex".into()))?;
    let down = a.poset.down(i);
    if !a.factor(&down)?.check_one_quasi_hereditary().passed() {
        return Err(Error::FactorNotOneQH(i));
    }
    let proj = Projective::new(a, one)?;
    let p1 = &proj.module;
    let t = largest_supported_submodule(a, p1, &down)?;
    let rad = radical_of(p1, &t)?;
    let v1 = a.alg.vertex_index(one)?;
    let top: Vec<usize> = t.dims().iter().zip(rad.dims()).map(|(x, y)| x - y).collect();
    if top.iter().enumerate().any(|(vi, &d)| d != usize::from(vi == v1)) {
        return Err(Error::NotLocal(i));
    }
    // coordinates p(1,l,1), l descending
    let basis = path_basis(a, one, ChainRule::Smallest)?;
    let mut cols: Vec<Vec<F::Elem>> = basis.parts[&one]
        .iter()
        .rev()
        .map(|p| Ok(p1.component(&proj.element(&p.element)?, v1)))
        .collect::<Result<_>>()?;
    let d = cols.len();
    let b = Matrix::from_rows(d, &cols).transpose();
    let binv = b.invert(f)?;
    let rad_coords: Vec<Vec<F::Elem>> = rad.parts[v1].rows.iter().map(|r| binv.apply(f, r)).collect();
    let rad_span = Echelon::span(f, d, &rad_coords);
    let reduced = t.parts[v1]
        .rows
        .iter()
        .map(|r| rad_span.reduce(f, &binv.apply(f, r)))
        .find(|v| v.iter().any(|x| !f.is_zero(x)))
        .ok_or(Error::NotLocal(i))?;
    let lead = reduced.iter().find(|x| !f.is_zero(x)).unwrap();
    let inv = f.inv(lead).unwrap();
    let coords: Vec<F::Elem> = reduced.iter().map(|x| f.mul(x, &inv)).collect();
    cols = vec![b.apply(f, &coords)];
    let gen = proj.to_algebra(&p1.embed_component(v1, &cols[0]));
    if proj.generated_by(&gen)? != t {
        return Err(Error::NotLocal(i));
    }
    Ok((gen, t))
}

/// `t(i,k) = p(1,k,k)·t(i,1)` for `k ≤ i`.
pub fn tilting_elements<F: Field>(a: &QhAlgebra<F>, t: &[F::Elem], i: u32) -> Result<Vec<(u32, Vec<F::Elem>)>> {
    let one = a.min_vertex().ok_or(Error::InvalidParameters("no unique minimal vertex".into()))?;
    a.poset
        .down(i)
        .into_iter()
        .map(|k| {
            let p = distinguished_path(a, one, k, k, ChainRule::Smallest)?;
            Ok((k, a.alg.mul(&p.element, t)))
        })
        .collect()
}

/// Checks that `m` has the Δ-, ∇- and composition multiplicities of `T(i)`
/// and is indecomposable.
pub fn verify_tilting_summand<F: Field>(a: &QhAlgebra<F>, m: &Module<F>, i: u32) -> Report {
    let mut rep = Report::default();
    let delta = a.delta_good_filtration(m, PeelOrder::Ascending);
    let nabla = a.nabla_good_filtration(m, PeelOrder::Ascending);
    rep.push("Delta-good", delta.is_some(), delta.as_ref().map(|r| format!("layers {:?}", r.layers)));
    rep.push("Nabla-good", nabla.is_some(), nabla.as_ref().map(|r| format!("layers {:?}", r.layers)));
    if let (Some(d), Some(n)) = (&delta, &nabla) {
        rep.push(format!("(T:Delta({i})) = 1"), d.multiplicity(i) == 1, None);
        rep.push(format!("(T:Nabla({i})) = 1"), n.multiplicity(i) == 1, None);
        let above: Vec<u32> = a
            .vertices()
            .iter()
            .copied()
            .filter(|&j| !a.poset.leq(j, i) && (d.multiplicity(j) > 0 || n.multiplicity(j) > 0))
            .collect();
        rep.push(
            format!("no Delta or Nabla layers outside Lambda({i})"),
            above.is_empty(),
            (!above.is_empty()).then(|| format!("{above:?}")),
        );
    }
    rep.push(format!("[T:S({i})] = 1"), m.dim_at(i) == 1, Some(m.dim_at(i).to_string()));
    let outside: Vec<u32> = a
        .vertices()
        .iter()
        .copied()
        .filter(|&j| !a.poset.leq(j, i) && m.dim_at(j) > 0)
        .collect();
    rep.push(
        format!("composition factors inside Lambda({i})"),
        outside.is_empty(),
        (!outside.is_empty()).then(|| format!("{outside:?}")),
    );
    match m.is_indecomposable() {
        Ok(b) => rep.push("indecomposable", b, None),
        Err(e) => rep.push("indecomposable", false, Some(e.to_string())),
    }
    rep
}

/// The submodule of `M^m` generated by tuples, as a module with its inclusion.
pub fn submodule_of_power<F: Field>(
    m: &Module<F>,
    copies: usize,
    gens: &[Vec<Element<F::Elem>>],
) -> Result<(Module<F>, ModuleMap<F::Elem>, Module<F>)> {
    let parts = vec![m.clone(); copies];
    let sum = Module::direct_sum(&parts)?;
    let mut elems = Vec::new();
    for g in gens {
        if g.len() != copies || g.iter().any(|x| x.len() != m.dim()) {
            return Err(Error::ElementNotInModule);
        }
        let mut x = sum.zero_element();
        for (idx, c) in g.iter().enumerate() {
            let part = Module::sum_injection(&parts, idx, c);
            for (acc, v) in x.iter_mut().zip(part) {
                *acc = m.field().add(acc, &v);
            }
        }
        elems.push(x);
    }
    let sub = sum.generated(&elems)?;
    let (module, inc) = sum.submodule_module(&sub)?;
    Ok((module, inc, sum))
}

fn strictly_inside<F: Field>(f: &F, a: &Submodule<F::Elem>, b: &Submodule<F::Elem>) -> bool {
    a.dim() < b.dim() && b.contains_sub(f, a)
}

/// Basis property, and over a finite field the comparison with all local
/// Δ-good submodules of `P(1)`, and invariance under `End(P(1))`.
pub fn verify_theorem_b<F: Field>(a: &QhAlgebra<F>, kit: &TiltingKit<F>) -> Result<Report> {
    let f = a.field();
    let proj = &kit.projective;
    let p1 = &proj.module;
    let mut rep = Report::default();

    let vecs: Vec<Vec<F::Elem>> = kit
        .elements
        .values()
        .map(|t| proj.element(t))
        .collect::<Result<_>>()?;
    let rank = Echelon::span(f, p1.dim(), &vecs).dim();
    rep.push(
        "t(i,k) form a basis of P(1)",
        vecs.len() == p1.dim() && rank == p1.dim(),
        Some(format!("{} elements, rank {rank}, dim P(1) = {}", vecs.len(), p1.dim())),
    );

    let subs: HashSet<Submodule<F::Elem>> = kit
        .elements
        .values()
        .map(|t| kit.generated(t))
        .collect::<Result<_>>()?;
    if let Some(values) = f.elements() {
        let mut local = HashSet::new();
        for x in homogeneous_lines(p1, &values) {
            let s = p1.generated(&[x])?;
            if local.contains(&s) {
                continue;
            }
            let (m, _) = p1.submodule_module(&s)?;
            if m.top_dims().iter().sum::<usize>() == 1 && a.delta_good_filtration(&m, PeelOrder::Ascending).is_some() {
                local.insert(s);
            }
        }
        rep.push(
            "<t(i,k)> are exactly the local Delta-good submodules of P(1)",
            local == subs,
            Some(format!("{} local Delta-good, {} from t(i,k)", local.len(), subs.len())),
        );
    } else {
        rep.push(
            "local Delta-good submodules enumerated",
            true,
            Some("skipped over an infinite field".into()),
        );
    }

    let one = kit.one;
    let mut bad = Vec::new();
    for (b, p) in a.alg.basis().iter().enumerate() {
        if p.src != one || p.tgt != one {
            continue;
        }
        let mut e = a.alg.zero();
        e[b] = f.one();
        let fmap = proj.right_multiplication(&e)?;
        for (&(i, k), t) in &kit.elements {
            let x = proj.element(t)?;
            let s = p1.generated(&[x.clone()])?;
            if !p1.contains(&s, &p1.apply_map(&fmap, &x)) {
                bad.push(format!("<t({i},{k})> under {}", a.alg.format_elem(&e)));
            }
        }
    }
    rep.push(
        "<t(i,k)> invariant under End(P(1))",
        bad.is_empty(),
        (!bad.is_empty()).then(|| bad.join("; ")),
    );
    Ok(rep)
}

/// Inclusions among the `⟨t(i,k)⟩` against the order on `i` and on `k`.
pub fn verify_lemma_3_2<F: Field>(a: &QhAlgebra<F>, kit: &TiltingKit<F>) -> Result<Report> {
    let f = a.field();
    let po = &a.poset;
    let mut subs = BTreeMap::new();
    for (&key, t) in &kit.elements {
        subs.insert(key, kit.generated(t)?);
    }
    let mut rep = Report::default();
    for (&(i, k), s) in &subs {
        for (&(i2, k2), s2) in &subs {
            if k2 == k && i2 != i {
                let got = strictly_inside(f, s2, s);
                if got != po.lt(i2, i) {
                    rep.push(format!("<t({i2},{k})> inside <t({i},{k})>"), false, Some(format!("inclusion {got}")));
                }
            }
            if i2 == i && k2 != k {
                let got = strictly_inside(f, s2, s);
                if got != po.lt(k, k2) {
                    rep.push(format!("<t({i},{k2})> inside <t({i},{k})>"), false, Some(format!("inclusion {got}")));
                }
            }
        }
    }
    if rep.checks.is_empty() {
        rep.push(format!("inclusions among {} modules match the order", subs.len()), true, None);
    }
    Ok(rep)
}
