//! Endomorphism algebras of direct sums and presentation checks against them.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::algebra::{Algebra, DEFAULT_LENGTH_CAP};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{Echelon, Matrix};
use crate::module::{split_local_radical, trace_form_rank, Element, Module};
use crate::presentation::Presentation;
use crate::presets::make_anc;
use crate::qh::QhAlgebra;
use crate::report::Report;
use crate::tilting::verify_tilting_summand;

/// A module together with an optional generator and an optional inclusion
/// into a module shared with other summands.
#[derive(Clone, Debug)]
pub struct Summand<F: Field> {
    pub module: Module<F>,
    pub generator: Option<Element<F::Elem>>,
    pub inclusion: Option<Matrix<F::Elem>>,
}

impl<F: Field> Summand<F> {
    pub fn new(module: Module<F>) -> Self {
        Self {
            module,
            generator: None,
            inclusion: None,
        }
    }

    /// The submodule of `ambient` generated by `gens`.
    pub fn generated_in(ambient: &Module<F>, gens: &[Element<F::Elem>]) -> Result<Self> {
        let f = ambient.field();
        let sub = ambient.generated(gens)?;
        let (module, inc) = ambient.submodule_module(&sub)?;
        let full = module.full_matrix(ambient, &inc);
        let generator = match gens {
            [g] => Some(full.solve(f, g).ok_or(Error::ElementNotInModule)?),
            _ => None,
        };
        Ok(Self {
            module,
            generator,
            inclusion: Some(full),
        })
    }
}

/// `End(⊕ T_a)` stored as Hom spaces between the summands, maps as matrices
/// on the total spaces.
#[derive(Clone, Debug)]
pub struct EndAlgebra<F: Field> {
    pub summands: Vec<Summand<F>>,
    /// `homs[a][b]` is a basis of `Hom(T_a, T_b)`
    pub homs: Vec<Vec<Vec<Matrix<F::Elem>>>>,
    pub radical: Vec<Vec<Vec<Matrix<F::Elem>>>>,
    pub radical_sq: Vec<Vec<Vec<Matrix<F::Elem>>>>,
}

fn flat<E: Clone>(m: &Matrix<E>) -> Vec<E> {
    m.entries().to_vec()
}

fn span<F: Field>(f: &F, rows: usize, cols: usize, ms: &[Matrix<F::Elem>]) -> Echelon<F::Elem> {
    Echelon::span(f, rows * cols, &ms.iter().map(flat).collect::<Vec<_>>())
}

impl<F: Field> EndAlgebra<F> {
    pub fn new(summands: Vec<Summand<F>>) -> Result<Self> {
        let n = summands.len();
        let f = summands.first().ok_or(Error::InvalidParameters("no summands".into()))?.module.field().clone();
        let mut homs = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let (ma, mb) = (&summands[a].module, &summands[b].module);
                homs[a][b] = ma.hom_basis(mb)?.iter().map(|h| ma.full_matrix(mb, h)).collect();
            }
        }
        let mut radical = homs.clone();
        for (a, row) in radical.iter_mut().enumerate() {
            let ends = &homs[a][a];
            let rad = if f.characteristic() == 0 && trace_form_rank(&f, ends) != 1 {
                None
            } else {
                split_local_radical(&f, ends)
            };
            row[a] = rad.ok_or(Error::NotLocal(a as u32))?;
        }
        let mut radical_sq = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let (rows, cols) = (summands[b].module.dim(), summands[a].module.dim());
                let mut prods = Vec::new();
                for c in 0..n {
                    for x in &radical[a][c] {
                        for y in &radical[c][b] {
                            prods.push(y.mul(&f, x));
                        }
                    }
                }
                radical_sq[a][b] = span(&f, rows, cols, &prods)
                    .rows
                    .iter()
                    .map(|r| Matrix::from_vec(rows, cols, r.clone()).unwrap())
                    .collect();
            }
        }
        Ok(Self {
            summands,
            homs,
            radical,
            radical_sq,
        })
    }

    pub fn field(&self) -> &F {
        self.summands[0].module.field()
    }

    pub fn dim(&self) -> usize {
        self.homs.iter().flatten().map(Vec::len).sum()
    }

    /// `dim rad/rad²` from `T_a` to `T_b`.
    pub fn arrows(&self, a: usize, b: usize) -> usize {
        self.radical[a][b].len() - self.radical_sq[a][b].len()
    }

    fn shape(&self, a: usize, b: usize) -> (usize, usize) {
        (self.summands[b].module.dim(), self.summands[a].module.dim())
    }

    /// A map `T_a → T_b` sending the generator of `T_a` to that of `T_b`,
    /// or failing that one compatible with the inclusions.
    pub fn normalized_map(&self, a: usize, b: usize) -> Option<Matrix<F::Elem>> {
        let f = self.field();
        let basis = &self.homs[a][b];
        if basis.is_empty() {
            return None;
        }
        let (sa, sb) = (&self.summands[a], &self.summands[b]);
        let combine = |c: &[F::Elem]| {
            let (r, k) = self.shape(a, b);
            basis
                .iter()
                .zip(c)
                .fold(Matrix::zeros(f, r, k), |acc, (h, x)| acc.add(f, &h.scale(f, x)))
        };
        if let (Some(ga), Some(gb)) = (&sa.generator, &sb.generator) {
            let cols: Vec<Vec<F::Elem>> = basis.iter().map(|h| h.apply(f, ga)).collect();
            let sys = Matrix::from_rows(gb.len(), &cols).transpose();
            if let Some(c) = sys.solve(f, gb) {
                return Some(combine(&c));
            }
        }
        if let (Some(ia), Some(ib)) = (&sa.inclusion, &sb.inclusion) {
            if ia.rows() == ib.rows() {
                let cols: Vec<Vec<F::Elem>> = basis.iter().map(|h| flat(&ib.mul(f, h))).collect();
                let sys = Matrix::from_rows(ia.rows() * ia.cols(), &cols).transpose();
                if let Some(c) = sys.solve(f, &flat(ia)) {
                    return Some(combine(&c));
                }
            }
        }
        None
    }
}

/// Checks that `candidate` presents the Ringel dual, with candidate vertex `v`
/// sent to summand `vertex_map[v]`. An arrow `l → m` is realised by a map
/// `T(l) → T(m)` and a path by the composite of its arrows in traversal order.
pub fn verify_ringel_presentation<F: Field>(
    end: &EndAlgebra<F>,
    candidate: &Presentation,
    vertex_map: &BTreeMap<u32, usize>,
) -> Result<Report> {
    let f = end.field();
    let alg = Algebra::build(f.clone(), &candidate.clone().with_field(f.spec()), DEFAULT_LENGTH_CAP)?;
    let sigma = |v: u32| vertex_map.get(&v).copied().ok_or(Error::UnknownVertex(v));
    let mut rep = Report::default();

    let mut tau = Vec::new();
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for arrow in candidate.quiver.arrows() {
        let (a, b) = (sigma(arrow.src)?, sigma(arrow.tgt)?);
        let t = end
            .normalized_map(a, b)
            .ok_or_else(|| Error::ArrowChoiceFailed(arrow.id.clone()))?;
        let (r, c) = end.shape(a, b);
        let in_rad = span(f, r, c, &end.radical[a][b]).contains(f, &flat(&t));
        let in_rad2 = span(f, r, c, &end.radical_sq[a][b]).contains(f, &flat(&t));
        if !in_rad || in_rad2 {
            rep.push(format!("arrow {} lies in rad minus rad^2", arrow.id), false, None);
        }
        *counts.entry((a, b)).or_insert(0) += 1;
        tau.push(t);
    }
    let n = end.summands.len();
    let mut mismatched = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let want = counts.get(&(a, b)).copied().unwrap_or(0);
            if end.arrows(a, b) != want {
                mismatched.push(format!("({a},{b}): {} vs {want}", end.arrows(a, b)));
            }
        }
    }
    rep.push(
        "arrow counts match rad/rad^2",
        mismatched.is_empty(),
        (!mismatched.is_empty()).then(|| mismatched.join(", ")),
    );

    let path_map = |src: u32, word: &[usize]| -> Result<Matrix<F::Elem>> {
        let mut m = Matrix::identity(f, end.summands[sigma(src)?].module.dim());
        for &x in word {
            m = tau[x].mul(f, &m);
        }
        Ok(m)
    };

    // Each relation term as (relation, coefficient, arrows used, unscaled map).
    let mut terms = Vec::new();
    for (ri, rel) in candidate.relations.iter().enumerate() {
        for (coeff, p) in &rel.terms {
            terms.push((ri, f.from_rational(coeff)?, p.word.clone(), path_map(p.src, &p.word)?));
        }
    }
    let failing = |scale: &[F::Elem]| -> Vec<usize> {
        let mut out = Vec::new();
        for (ri, rel) in candidate.relations.iter().enumerate() {
            let first = &rel.terms[0].1;
            let (Ok(a), Ok(b)) = (sigma(first.src), sigma(first.tgt)) else {
                out.push(ri);
                continue;
            };
            let (r, c) = end.shape(a, b);
            let mut total = Matrix::zeros(f, r, c);
            for (_, coeff, word, m) in terms.iter().filter(|t| t.0 == ri) {
                let s = word.iter().fold(coeff.clone(), |acc, &x| f.mul(&acc, &scale[x]));
                total = total.add(f, &m.scale(f, &s));
            }
            if !total.is_zero(f) {
                out.push(ri);
            }
        }
        out
    };

    // The arrow maps are fixed only up to scalars. Rescaling at vertices
    // changes nothing, so arrows on a spanning tree keep scalar 1; the rest
    // are solved from relations with one unknown.
    let k = tau.len();
    let known = arrow_scalars(f, candidate, &terms)?;
    let free: Vec<usize> = (0..k).filter(|&x| known[x].is_none()).collect();
    let units = scalar_choices(f, free.len());
    let total = units.len().checked_pow(free.len() as u32).filter(|&t| t <= SCALING_BUDGET);
    let mut failed = Vec::new();
    let mut rescaled = None;
    for code in 0..total.unwrap_or(1) {
        let mut scale: Vec<F::Elem> = known.iter().map(|x| x.clone().unwrap_or_else(|| f.one())).collect();
        let mut c = code;
        for &x in &free {
            scale[x] = units[c % units.len()].clone();
            c /= units.len();
        }
        let bad = failing(&scale);
        if bad.is_empty() {
            failed.clear();
            rescaled = Some(scale);
            break;
        }
        if code == 0 {
            failed = bad;
        }
    }
    let witness = if !failed.is_empty() {
        Some(
            failed
                .iter()
                .map(|&ri| candidate.relations[ri].format(&candidate.quiver))
                .collect::<Vec<_>>()
                .join("; "),
        )
    } else {
        rescaled.map(|scale| {
            let arrows = candidate.quiver.arrows();
            let moved: Vec<String> = scale
                .iter()
                .enumerate()
                .filter(|(_, s)| **s != f.one())
                .map(|(x, s)| format!("{} by {}", arrows[x].id, f.format(s)))
                .collect();
            format!("arrows rescaled: {}", moved.join(", "))
        })
    };
    rep.push(
        format!("{} relations hold", candidate.relations.len()),
        failed.is_empty(),
        witness,
    );

    let mut images: BTreeMap<(usize, usize), Vec<Vec<F::Elem>>> = BTreeMap::new();
    for p in alg.basis() {
        let m = path_map(p.src, &p.word)?;
        images.entry((sigma(p.src)?, sigma(p.tgt)?)).or_default().push(flat(&m));
    }
    let mut short = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let (r, c) = end.shape(a, b);
            let got = images.get(&(a, b)).map_or(0, |v| Echelon::span(f, r * c, v).dim());
            if got != end.homs[a][b].len() {
                short.push(format!("({a},{b}): rank {got} of {}", end.homs[a][b].len()));
            }
        }
    }
    rep.push(
        "basis paths map onto End",
        short.is_empty(),
        (!short.is_empty()).then(|| short.join(", ")),
    );
    rep.push(
        "dimensions agree",
        alg.dim() == end.dim(),
        Some(format!("candidate {}, End {}", alg.dim(), end.dim())),
    );
    Ok(rep)
}

/// Scalars forced on the arrows of `candidate` once a spanning tree is fixed
/// to 1. `terms` lists (relation, coefficient, arrow word, unscaled map).
#[allow(clippy::type_complexity)]
fn arrow_scalars<F: Field>(
    f: &F,
    candidate: &Presentation,
    terms: &[(usize, F::Elem, Vec<usize>, Matrix<F::Elem>)],
) -> Result<Vec<Option<F::Elem>>> {
    let arrows = candidate.quiver.arrows();
    let mut known: Vec<Option<F::Elem>> = vec![None; arrows.len()];
    let mut parent: Vec<usize> = (0..candidate.quiver.vertices().len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (x, arrow) in arrows.iter().enumerate() {
        let s = candidate.quiver.vertex_index(arrow.src).ok_or(Error::UnknownVertex(arrow.src))?;
        let t = candidate.quiver.vertex_index(arrow.tgt).ok_or(Error::UnknownVertex(arrow.tgt))?;
        let (rs, rt) = (root(&mut parent, s), root(&mut parent, t));
        if rs != rt {
            parent[rs] = rt;
            known[x] = Some(f.one());
        }
    }
    loop {
        let mut progress = false;
        for ri in 0..candidate.relations.len() {
            let rel: Vec<_> = terms.iter().filter(|t| t.0 == ri).collect();
            let unknown: std::collections::BTreeSet<usize> = rel
                .iter()
                .flat_map(|t| t.2.iter().copied())
                .filter(|&x| known[x].is_none())
                .collect();
            if unknown.len() != 1 {
                continue;
            }
            let u = *unknown.iter().next().unwrap();
            if rel.iter().any(|t| t.2.iter().filter(|&&x| x == u).count() > 1) {
                continue;
            }
            // A + λ·B = 0
            let (r, c) = (rel[0].3.rows(), rel[0].3.cols());
            let (mut lhs, mut lin) = (Matrix::zeros(f, r, c), Matrix::zeros(f, r, c));
            for (_, coeff, word, m) in &rel {
                let s = word
                    .iter()
                    .filter(|&&x| x != u)
                    .fold(coeff.clone(), |acc, &x| f.mul(&acc, known[x].as_ref().unwrap()));
                if word.contains(&u) {
                    lin = lin.add(f, &m.scale(f, &s));
                } else {
                    lhs = lhs.add(f, &m.scale(f, &s));
                }
            }
            let Some(e) = lin.entries().iter().position(|x| !f.is_zero(x)) else {
                continue;
            };
            let lambda = f.neg(&f.mul(&lhs.entries()[e], &f.inv(&lin.entries()[e]).unwrap()));
            if f.is_zero(&lambda) || !lhs.add(f, &lin.scale(f, &lambda)).is_zero(f) {
                continue;
            }
            known[u] = Some(lambda);
            progress = true;
        }
        if progress {
            continue;
        }
        // Underdetermined: pin the first unknown arrow that occurs in a
        // relation. A pass found this way is still a witness.
        let next = terms.iter().flat_map(|t| t.2.iter().copied()).find(|&x| known[x].is_none());
        match next {
            Some(x) => known[x] = Some(f.one()),
            None => return Ok(known),
        }
    }
}

/// Largest number of arrow rescalings tried by the presentation check.
pub const SCALING_BUDGET: usize = 1 << 16;

/// Nonzero scalars tried per arrow: all of them over a small prime field,
/// otherwise `±1`.
fn scalar_choices<F: Field>(f: &F, arrows: usize) -> Vec<F::Elem> {
    let p = f.spec().characteristic() as usize;
    if p > 0 && (p - 1).checked_pow(arrows as u32).is_some_and(|t| t <= SCALING_BUDGET) {
        let mut out = Vec::new();
        let mut x = f.one();
        for _ in 1..p {
            out.push(x.clone());
            x = f.add(&x, &f.one());
        }
        return out;
    }
    if p == 2 {
        vec![f.one()]
    } else {
        vec![f.one(), f.neg(&f.one())]
    }
}

/// `t(1) = (1 2 n 2 1)`, `t(i) = Σ_j d_ij (1 j 1)` with `D = C⁻¹`, `t(n) = e_1`.
pub fn anc_tilting_elements<F: Field>(
    a: &QhAlgebra<F>,
    n: u32,
    d: &Matrix<BigRational>,
) -> Result<BTreeMap<u32, Vec<F::Elem>>> {
    let f = a.field();
    let mut out = BTreeMap::new();
    out.insert(1, a.alg.path(&[1, 2, n, 2, 1])?);
    for i in 2..n {
        let mut t = a.alg.zero();
        for j in 2..n {
            let c = f.from_rational(d.get(i as usize - 2, j as usize - 2))?;
            let p = a.alg.path(&[1, j, 1])?;
            for (x, y) in t.iter_mut().zip(&p) {
                *x = f.add(x, &f.mul(&c, y));
            }
        }
        out.insert(i, t);
    }
    out.insert(n, a.alg.idempotent(1)?);
    Ok(out)
}

/// Summands `T(1..n)` of `A_n(C)` inside `P(1)`, from the explicit generators.
pub fn anc_summands<F: Field>(a: &QhAlgebra<F>, n: u32, d: &Matrix<BigRational>) -> Result<Vec<Summand<F>>> {
    let p1 = a.projective(1)?;
    let (_, paths) = Module::projective_with_basis(&a.alg, 1)?;
    let pos: BTreeMap<usize, usize> = paths.iter().enumerate().map(|(t, &p)| (p, t)).collect();
    anc_tilting_elements(a, n, d)?
        .values()
        .map(|t| {
            let mut x = p1.zero_element();
            for (p, c) in t.iter().enumerate() {
                if !a.field().is_zero(c) {
                    x[*pos.get(&p).ok_or(Error::ElementNotInModule)?] = c.clone();
                }
            }
            Summand::generated_in(&p1, &[x])
        })
        .collect()
}

/// Candidate vertex `v` of `A_n(C⁻¹)` goes to `T(v)` with `1` and `n` swapped.
pub fn anc_vertex_map(n: u32) -> BTreeMap<u32, usize> {
    (1..=n)
        .map(|v| {
            let w = if v == 1 { n } else if v == n { 1 } else { v };
            (v, w as usize - 1)
        })
        .collect()
}

/// The identities for `t(i)` on `A_n(C)` and the Ringel dual presentation,
/// in both directions.
pub fn verify_lemma_1_2<F: Field>(field: F, n: u32, c: &Matrix<BigRational>) -> Result<Report> {
    let pres = make_anc(n as usize, c)?.with_field(field.spec());
    let a = QhAlgebra::from_presentation(field.clone(), &pres)?;
    let f = a.field();
    let d = c.invert(&crate::field::Rationals)?;
    let t = anc_tilting_elements(&a, n, &d)?;
    let mut rep = Report::default();
    let mut bad = Vec::new();
    for i in 2..n {
        for k in 2..n {
            let got = a.alg.mul(&a.alg.path(&[1, k])?, &t[&i]);
            let want = if k == i { a.alg.path(&[1, i, n, i])? } else { a.alg.zero() };
            if got != want {
                bad.push(format!("(1->{k})·t({i})"));
            }
        }
        for j in 2..n {
            let got = a.alg.mul(&t[&i], &t[&j]);
            let dij = f.from_rational(d.get(i as usize - 2, j as usize - 2))?;
            let want: Vec<F::Elem> = t[&1].iter().map(|x| f.mul(&dij, x)).collect();
            if got != want {
                bad.push(format!("t({i})t({j})"));
            }
        }
    }
    rep.push("arrow action and products of t(i)", bad.is_empty(), (!bad.is_empty()).then(|| bad.join(", ")));

    let summands = anc_summands(&a, n, &d)?;
    for (idx, s) in summands.iter().enumerate() {
        let i = idx as u32 + 1;
        let r = verify_tilting_summand(&a, &s.module, i);
        rep.push(
            format!("<t({i})> is T({i})"),
            r.passed(),
            (!r.passed()).then(|| format!("{:?}", r.failures())),
        );
    }
    let end = EndAlgebra::new(summands)?;
    let dual = make_anc(n as usize, &d)?;
    let r = verify_ringel_presentation(&end, &dual, &anc_vertex_map(n))?;
    rep.push("End(T)^op presented by A_n(C^-1)", r.passed(), (!r.passed()).then(|| format!("{:?}", r.failures())));

    let pres_d = dual.with_field(field.spec());
    let b = QhAlgebra::from_presentation(field, &pres_d)?;
    let end_b = EndAlgebra::new(anc_summands(&b, n, c)?)?;
    let r = verify_ringel_presentation(&end_b, &make_anc(n as usize, c)?, &anc_vertex_map(n))?;
    rep.push(
        "Ringel dual of A_n(C^-1) presented by A_n(C)",
        r.passed(),
        (!r.passed()).then(|| format!("{:?}", r.failures())),
    );
    Ok(rep)
}

/// Endomorphism algebra of the tilting summands of an algebra, in vertex order.
pub fn tilting_end_algebra<F: Field>(a: &QhAlgebra<F>, kit: &crate::tilting::TiltingKit<F>) -> Result<EndAlgebra<F>> {
    let p1 = &kit.projective;
    let summands = a
        .vertices()
        .iter()
        .map(|i| Summand::generated_in(&p1.module, &[p1.element(&kit.generators[i])?]))
        .collect::<Result<Vec<_>>>()?;
    EndAlgebra::new(summands)
}
