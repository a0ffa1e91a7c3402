//! Finite-dimensional left modules as vertex-graded representations.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{generic_coefficients, Field};
use crate::matrix::{is_zero_vec, Echelon, Matrix};

/// A coordinate vector, concatenated over vertices in vertex order.
pub type Element<E> = Vec<E>;

#[derive(Clone, Debug)]
pub struct Module<F: Field> {
    alg: Arc<Algebra<F>>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    maps: Vec<Matrix<F::Elem>>,
}

/// A homomorphism given by one block `dim N_k × dim M_k` per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap<E> {
    pub blocks: Vec<Matrix<E>>,
}

/// A graded subspace, one echelonized piece per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule<E> {
    pub parts: Vec<Echelon<E>>,
}

impl<E: Clone + PartialEq> Submodule<E> {
    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim()).sum()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.dim()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains_sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        self.parts
            .iter()
            .zip(&other.parts)
            .all(|(a, b)| a.contains_space(f, b))
    }

    pub fn sum<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        Self {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.sum(f, b))
                .collect(),
        }
    }

    pub fn intersect<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        Self {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.intersect(f, b))
                .collect(),
        }
    }
}

pub(crate) fn same_algebra<F: Field>(a: &Arc<Algebra<F>>, b: &Arc<Algebra<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Field> Module<F> {
    pub fn new(alg: Arc<Algebra<F>>, dims: Vec<usize>, maps: Vec<Matrix<F::Elem>>) -> Result<Self> {
        let nv = alg.vertices().len();
        if dims.len() != nv || maps.len() != alg.num_arrows() {
            return Err(Error::Shape("module data does not match the quiver".into()));
        }
        for (a, m) in maps.iter().enumerate() {
            let (s, t) = alg.arrow_ends(a);
            let (si, ti) = (alg.vertex_index(s)?, alg.vertex_index(t)?);
            if m.rows() != dims[ti] || m.cols() != dims[si] {
                return Err(Error::Shape(format!("arrow map {a} has the wrong shape")));
            }
        }
        let mut offsets = Vec::with_capacity(nv);
        let mut acc = 0;
        for &d in &dims {
            offsets.push(acc);
            acc += d;
        }
        let m = Self {
            alg,
            dims,
            offsets,
            maps,
        };
        m.check_relations()?;
        Ok(m)
    }

    fn check_relations(&self) -> Result<()> {
        let f = self.field();
        for rel in &self.alg.presentation().relations {
            let (_, first) = &rel.terms[0];
            let (si, ti) = (self.alg.vertex_index(first.src)?, self.alg.vertex_index(first.tgt)?);
            let mut total = Matrix::zeros(f, self.dims[ti], self.dims[si]);
            for (c, p) in &rel.terms {
                let c = f.from_rational(c)?;
                let mut m = Matrix::identity(f, self.dims[si]);
                for &a in &p.word {
                    m = self.maps[a].mul(f, &m);
                }
                total = total.add(f, &m.scale(f, &c));
            }
            if !total.is_zero(f) {
                return Err(Error::Shape("a relation does not act as zero".into()));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.alg
    }

    pub fn field(&self) -> &F {
        self.alg.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `[M : S(v)]`.
    pub fn dim_at(&self, v: u32) -> usize {
        self.alg.vertex_index(v).map_or(0, |i| self.dims[i])
    }

    pub fn arrow_map(&self, a: usize) -> &Matrix<F::Elem> {
        &self.maps[a]
    }

    pub fn support(&self) -> Vec<u32> {
        self.alg
            .vertices()
            .iter()
            .zip(&self.dims)
            .filter(|(_, &d)| d > 0)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn zero_element(&self) -> Element<F::Elem> {
        vec![self.field().zero(); self.dim()]
    }

    /// The unit vector for basis position `t` at vertex index `vi`.
    pub fn unit(&self, vi: usize, t: usize) -> Element<F::Elem> {
        let mut e = self.zero_element();
        e[self.offsets[vi] + t] = self.field().one();
        e
    }

    pub fn component(&self, x: &[F::Elem], vi: usize) -> Vec<F::Elem> {
        x[self.offsets[vi]..self.offsets[vi] + self.dims[vi]].to_vec()
    }

    pub fn embed_component(&self, vi: usize, local: &[F::Elem]) -> Element<F::Elem> {
        let mut e = self.zero_element();
        e[self.offsets[vi]..self.offsets[vi] + self.dims[vi]].clone_from_slice(local);
        e
    }

    pub fn components(&self, x: &[F::Elem]) -> Vec<Vec<F::Elem>> {
        (0..self.dims.len()).map(|vi| self.component(x, vi)).collect()
    }

    pub fn act_arrow(&self, a: usize, x: &[F::Elem]) -> Element<F::Elem> {
        let (s, t) = self.alg.arrow_ends(a);
        let si = self.alg.vertex_index(s).expect("arrow source");
        let ti = self.alg.vertex_index(t).expect("arrow target");
        let img = self.maps[a].apply(self.field(), &self.component(x, si));
        self.embed_component(ti, &img)
    }

    /// Action of an algebra element given in normal-form coordinates.
    pub fn act(&self, elem: &[F::Elem], x: &[F::Elem]) -> Element<F::Elem> {
        let f = self.field();
        let mut out = self.zero_element();
        for (b, c) in elem.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let p = &self.alg.basis()[b];
            let si = self.alg.vertex_index(p.src).expect("vertex");
            let mut y = self.embed_component(si, &self.component(x, si));
            for &a in &p.word {
                y = self.act_arrow(a, &y);
            }
            for (o, v) in out.iter_mut().zip(&y) {
                if !f.is_zero(v) {
                    *o = f.add(o, &f.mul(c, v));
                }
            }
        }
        out
    }

    /// `P(j) = A e_j` on the normal forms starting at `j`.
    pub fn projective(alg: &Arc<Algebra<F>>, j: u32) -> Result<Self> {
        Ok(Self::projective_with_basis(alg, j)?.0)
    }

    /// As [`Module::projective`], plus the algebra basis index of every module coordinate.
    pub fn projective_with_basis(alg: &Arc<Algebra<F>>, j: u32) -> Result<(Self, Vec<usize>)> {
        alg.vertex_index(j)?;
        let f = alg.field();
        let verts = alg.vertices();
        let mut local: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
        for (b, p) in alg.basis().iter().enumerate() {
            if p.src == j {
                local[alg.vertex_index(p.tgt)?].push(b);
            }
        }
        let mut pos = vec![usize::MAX; alg.dim()];
        for list in &local {
            for (t, &b) in list.iter().enumerate() {
                pos[b] = t;
            }
        }
        let dims: Vec<usize> = local.iter().map(|l| l.len()).collect();
        let mut maps = Vec::with_capacity(alg.num_arrows());
        for a in 0..alg.num_arrows() {
            let (s, t) = alg.arrow_ends(a);
            let (si, ti) = (alg.vertex_index(s)?, alg.vertex_index(t)?);
            let mut m = Matrix::zeros(f, dims[ti], dims[si]);
            for (col, &b) in local[si].iter().enumerate() {
                for (r, c) in alg.arrow_times(a, b).expect("composable") {
                    m.set(pos[*r], col, c.clone());
                }
            }
            maps.push(m);
        }
        let order: Vec<usize> = local.concat();
        Ok((Self::new(alg.clone(), dims, maps)?, order))
    }

    pub fn simple(alg: &Arc<Algebra<F>>, j: u32) -> Result<Self> {
        let ji = alg.vertex_index(j)?;
        let f = alg.field();
        let dims: Vec<usize> = (0..alg.vertices().len()).map(|i| usize::from(i == ji)).collect();
        let maps = (0..alg.num_arrows())
            .map(|a| {
                let (s, t) = alg.arrow_ends(a);
                let (si, ti) = (alg.vertex_index(s).unwrap(), alg.vertex_index(t).unwrap());
                Matrix::zeros(f, dims[ti], dims[si])
            })
            .collect();
        Self::new(alg.clone(), dims, maps)
    }

    pub fn zero(alg: &Arc<Algebra<F>>) -> Self {
        let f = alg.field();
        let dims = vec![0; alg.vertices().len()];
        let maps = (0..alg.num_arrows()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        Self::new(alg.clone(), dims, maps).expect("zero module")
    }

    /// Linear dual, a module over `other`, which must be the opposite algebra.
    pub fn dual(&self, other: &Arc<Algebra<F>>) -> Result<Self> {
        if other.vertices() != self.alg.vertices() || other.num_arrows() != self.alg.num_arrows() {
            return Err(Error::AlgebraMismatch);
        }
        for a in 0..other.num_arrows() {
            let (s, t) = self.alg.arrow_ends(a);
            if other.arrow_ends(a) != (t, s) {
                return Err(Error::AlgebraMismatch);
            }
        }
        let maps = self.maps.iter().map(|m| m.transpose()).collect();
        Self::new(other.clone(), self.dims.clone(), maps)
    }

    /// `I(j)`, the dual of the projective `P(j)` over the opposite algebra.
    pub fn injective(alg: &Arc<Algebra<F>>, op: &Arc<Algebra<F>>, j: u32) -> Result<Self> {
        Self::projective(op, j)?.dual(alg)
    }

    pub fn direct_sum(parts: &[Self]) -> Result<Self> {
        let first = parts.first().ok_or(Error::Shape("empty direct sum".into()))?;
        let alg = first.alg.clone();
        if parts.iter().any(|p| !same_algebra(&p.alg, &alg)) {
            return Err(Error::AlgebraMismatch);
        }
        let f = alg.field();
        let nv = alg.vertices().len();
        let dims: Vec<usize> = (0..nv).map(|i| parts.iter().map(|p| p.dims[i]).sum()).collect();
        let mut maps = Vec::new();
        for a in 0..alg.num_arrows() {
            let (s, t) = alg.arrow_ends(a);
            let (si, ti) = (alg.vertex_index(s)?, alg.vertex_index(t)?);
            let mut m = Matrix::zeros(f, dims[ti], dims[si]);
            let (mut r0, mut c0) = (0, 0);
            for p in parts {
                let pm = &p.maps[a];
                for r in 0..pm.rows() {
                    for c in 0..pm.cols() {
                        m.set(r0 + r, c0 + c, pm.get(r, c).clone());
                    }
                }
                r0 += p.dims[ti];
                c0 += p.dims[si];
            }
            maps.push(m);
        }
        Self::new(alg, dims, maps)
    }

    /// Coordinates of the `idx`-th summand's element inside a direct sum.
    pub fn sum_injection(parts: &[Self], idx: usize, x: &[F::Elem]) -> Element<F::Elem> {
        let f = parts[0].field();
        let nv = parts[0].dims.len();
        let mut out = Vec::new();
        for vi in 0..nv {
            for (t, p) in parts.iter().enumerate() {
                if t == idx {
                    out.extend(p.component(x, vi));
                } else {
                    out.extend(std::iter::repeat(f.zero()).take(p.dims[vi]));
                }
            }
        }
        out
    }

    pub fn zero_submodule(&self) -> Submodule<F::Elem> {
        Submodule {
            parts: self.dims.iter().map(|&d| Echelon::zero(d)).collect(),
        }
    }

    pub fn full_submodule(&self) -> Submodule<F::Elem> {
        let f = self.field();
        Submodule {
            parts: self
                .dims
                .iter()
                .map(|&d| {
                    let id = Matrix::identity(f, d);
                    Echelon::span(f, d, &id.row_vecs())
                })
                .collect(),
        }
    }

    /// Smallest submodule containing `gens`.
    pub fn generated(&self, gens: &[Element<F::Elem>]) -> Result<Submodule<F::Elem>> {
        let mut sub = self.zero_submodule();
        let mut queue: Vec<(usize, Vec<F::Elem>)> = Vec::new();
        for g in gens {
            if g.len() != self.dim() {
                return Err(Error::ElementNotInModule);
            }
            for vi in 0..self.dims.len() {
                let c = self.component(g, vi);
                if !is_zero_vec(self.field(), &c) {
                    queue.push((vi, c));
                }
            }
        }
        self.close(&mut sub, queue);
        Ok(sub)
    }

    fn close(&self, sub: &mut Submodule<F::Elem>, mut queue: Vec<(usize, Vec<F::Elem>)>) {
        let f = self.field();
        let verts = self.alg.vertices();
        while let Some((vi, v)) = queue.pop() {
            if !sub.parts[vi].insert(f, &v) {
                continue;
            }
            for a in 0..self.alg.num_arrows() {
                let (s, t) = self.alg.arrow_ends(a);
                if s != verts[vi] {
                    continue;
                }
                let ti = self.alg.vertex_index(t).expect("vertex");
                let img = self.maps[a].apply(f, &v);
                if !is_zero_vec(f, &img) {
                    queue.push((ti, img));
                }
            }
        }
    }

    /// Smallest submodule containing both.
    pub fn join(&self, a: &Submodule<F::Elem>, b: &Submodule<F::Elem>) -> Submodule<F::Elem> {
        a.sum(self.field(), b)
    }

    pub fn is_submodule(&self, s: &Submodule<F::Elem>) -> bool {
        let f = self.field();
        for a in 0..self.alg.num_arrows() {
            let (src, tgt) = self.alg.arrow_ends(a);
            let si = self.alg.vertex_index(src).unwrap();
            let ti = self.alg.vertex_index(tgt).unwrap();
            for r in &s.parts[si].rows {
                if !s.parts[ti].contains(f, &self.maps[a].apply(f, r)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn contains(&self, s: &Submodule<F::Elem>, x: &[F::Elem]) -> bool {
        (0..self.dims.len()).all(|vi| s.parts[vi].contains(self.field(), &self.component(x, vi)))
    }

    /// The submodule as a module in the echelon basis, with its inclusion.
    pub fn submodule_module(&self, s: &Submodule<F::Elem>) -> Result<(Self, ModuleMap<F::Elem>)> {
        if !self.is_submodule(s) {
            return Err(Error::NotASubmodule);
        }
        let f = self.field();
        let dims = s.dims();
        let mut maps = Vec::new();
        for a in 0..self.alg.num_arrows() {
            let (src, tgt) = self.alg.arrow_ends(a);
            let si = self.alg.vertex_index(src)?;
            let ti = self.alg.vertex_index(tgt)?;
            let mut m = Matrix::zeros(f, dims[ti], dims[si]);
            for (col, r) in s.parts[si].rows.iter().enumerate() {
                let img = self.maps[a].apply(f, r);
                for (row, c) in s.parts[ti].coords(f, &img).into_iter().enumerate() {
                    m.set(row, col, c);
                }
            }
            maps.push(m);
        }
        let blocks = s
            .parts
            .iter()
            .map(|p| {
                if p.rows.is_empty() {
                    Matrix::zeros(f, p.ambient, 0)
                } else {
                    Matrix::from_rows(p.ambient, &p.rows).transpose()
                }
            })
            .collect();
        Ok((Self::new(self.alg.clone(), dims, maps)?, ModuleMap { blocks }))
    }

    /// `M/N` on the non-pivot coordinates of `N`, with the projection.
    pub fn quotient(&self, s: &Submodule<F::Elem>) -> Result<(Self, ModuleMap<F::Elem>)> {
        if !self.is_submodule(s) {
            return Err(Error::NotASubmodule);
        }
        let f = self.field();
        let free: Vec<Vec<usize>> = s.parts.iter().map(|p| p.free_columns()).collect();
        let dims: Vec<usize> = free.iter().map(|c| c.len()).collect();
        let project = |vi: usize, v: &[F::Elem]| -> Vec<F::Elem> {
            let r = s.parts[vi].reduce(f, v);
            free[vi].iter().map(|&c| r[c].clone()).collect()
        };
        let mut maps = Vec::new();
        for a in 0..self.alg.num_arrows() {
            let (src, tgt) = self.alg.arrow_ends(a);
            let si = self.alg.vertex_index(src)?;
            let ti = self.alg.vertex_index(tgt)?;
            let mut m = Matrix::zeros(f, dims[ti], dims[si]);
            for (col, &c) in free[si].iter().enumerate() {
                let img = self.maps[a].column(c);
                for (row, x) in project(ti, &img).into_iter().enumerate() {
                    m.set(row, col, x);
                }
            }
            maps.push(m);
        }
        let mut blocks = Vec::new();
        for vi in 0..self.dims.len() {
            let mut b = Matrix::zeros(f, dims[vi], self.dims[vi]);
            for c in 0..self.dims[vi] {
                let mut e = vec![f.zero(); self.dims[vi]];
                e[c] = f.one();
                for (row, x) in project(vi, &e).into_iter().enumerate() {
                    b.set(row, c, x);
                }
            }
            blocks.push(b);
        }
        Ok((Self::new(self.alg.clone(), dims, maps)?, ModuleMap { blocks }))
    }

    /// Image of `x` in a quotient built by [`Module::quotient`].
    pub fn project(&self, proj: &ModuleMap<F::Elem>, x: &[F::Elem]) -> Element<F::Elem> {
        let f = self.field();
        let mut out = Vec::new();
        for (vi, b) in proj.blocks.iter().enumerate() {
            out.extend(b.apply(f, &self.component(x, vi)));
        }
        out
    }

    /// Sum of the images of all arrow maps.
    pub fn radical(&self) -> Submodule<F::Elem> {
        let f = self.field();
        let mut sub = self.zero_submodule();
        for a in 0..self.alg.num_arrows() {
            let (_, t) = self.alg.arrow_ends(a);
            let ti = self.alg.vertex_index(t).unwrap();
            for c in 0..self.maps[a].cols() {
                sub.parts[ti].insert(f, &self.maps[a].column(c));
            }
        }
        sub
    }

    /// Joint kernel of all arrow maps.
    pub fn socle(&self) -> Submodule<F::Elem> {
        let f = self.field();
        let verts = self.alg.vertices();
        let mut parts = Vec::new();
        for (vi, &v) in verts.iter().enumerate() {
            let outgoing: Vec<usize> = (0..self.alg.num_arrows())
                .filter(|&a| self.alg.arrow_ends(a).0 == v)
                .collect();
            let mut rows = Vec::new();
            for &a in &outgoing {
                rows.extend(self.maps[a].row_vecs());
            }
            let kernel = if rows.is_empty() {
                Matrix::identity(f, self.dims[vi]).row_vecs()
            } else {
                Matrix::from_rows(self.dims[vi], &rows).kernel_basis(f)
            };
            parts.push(Echelon::span(f, self.dims[vi], &kernel));
        }
        Submodule { parts }
    }

    /// `M / rad M`.
    pub fn top(&self) -> Result<Self> {
        Ok(self.quotient(&self.radical())?.0)
    }

    /// Dimension vector of the top.
    pub fn top_dims(&self) -> Vec<usize> {
        let rad = self.radical();
        self.dims.iter().zip(rad.dims()).map(|(d, r)| d - r).collect()
    }

    pub fn is_simple_with_top(&self, v: u32) -> bool {
        self.dim() == 1 && self.dim_at(v) == 1
    }

    pub fn is_map(&self, other: &Self, m: &ModuleMap<F::Elem>) -> bool {
        let f = self.field();
        (0..self.alg.num_arrows()).all(|a| {
            let (s, t) = self.alg.arrow_ends(a);
            let si = self.alg.vertex_index(s).unwrap();
            let ti = self.alg.vertex_index(t).unwrap();
            m.blocks[ti].mul(f, &self.maps[a]) == other.maps[a].mul(f, &m.blocks[si])
        })
    }

    /// Basis of `Hom_A(self, other)`.
    pub fn hom_basis(&self, other: &Self) -> Result<Vec<ModuleMap<F::Elem>>> {
        if !same_algebra(&self.alg, &other.alg) {
            return Err(Error::AlgebraMismatch);
        }
        let f = self.field();
        let nv = self.dims.len();
        let mut var_off = Vec::with_capacity(nv);
        let mut nvars = 0;
        for vi in 0..nv {
            var_off.push(nvars);
            nvars += other.dims[vi] * self.dims[vi];
        }
        // unknown (vi, r, c) = entry (r, c) of block vi
        let var = |vi: usize, r: usize, c: usize| var_off[vi] + r * self.dims[vi] + c;
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for a in 0..self.alg.num_arrows() {
            let (s, t) = self.alg.arrow_ends(a);
            let si = self.alg.vertex_index(s)?;
            let ti = self.alg.vertex_index(t)?;
            let (ma, na) = (&self.maps[a], &other.maps[a]);
            // (F_t M_a - N_a F_s)[r][c] = 0
            for r in 0..other.dims[ti] {
                for c in 0..self.dims[si] {
                    let mut row = vec![f.zero(); nvars];
                    let mut nz = false;
                    for k in 0..self.dims[ti] {
                        let x = ma.get(k, c);
                        if !f.is_zero(x) {
                            let v = var(ti, r, k);
                            row[v] = f.add(&row[v], x);
                            nz = true;
                        }
                    }
                    for k in 0..other.dims[si] {
                        let x = na.get(r, k);
                        if !f.is_zero(x) {
                            let v = var(si, k, c);
                            row[v] = f.sub(&row[v], x);
                            nz = true;
                        }
                    }
                    if nz {
                        rows.push(row);
                    }
                }
            }
        }
        let kernel = if rows.is_empty() {
            Matrix::identity(f, nvars).row_vecs()
        } else {
            Matrix::from_rows(nvars, &rows).kernel_basis(f)
        };
        Ok(kernel
            .into_iter()
            .map(|v| ModuleMap {
                blocks: (0..nv)
                    .map(|vi| {
                        let mut b = Matrix::zeros(f, other.dims[vi], self.dims[vi]);
                        for r in 0..other.dims[vi] {
                            for c in 0..self.dims[vi] {
                                b.set(r, c, v[var(vi, r, c)].clone());
                            }
                        }
                        b
                    })
                    .collect(),
            })
            .collect())
    }

    pub fn apply_map(&self, m: &ModuleMap<F::Elem>, x: &[F::Elem]) -> Element<F::Elem> {
        let f = self.field();
        let mut out = Vec::new();
        for (vi, b) in m.blocks.iter().enumerate() {
            out.extend(b.apply(f, &self.component(x, vi)));
        }
        out
    }

    pub fn is_isomorphic(&self, other: &Self) -> Result<bool> {
        if self.dims != other.dims {
            return Ok(false);
        }
        self.find_map(other, Need::Both)
    }

    pub fn embeds(&self, other: &Self) -> Result<bool> {
        if self.dims.iter().zip(&other.dims).any(|(a, b)| a > b) {
            return Ok(false);
        }
        self.find_map(other, Need::Injective)
    }

    pub fn surjects(&self, other: &Self) -> Result<bool> {
        if self.dims.iter().zip(&other.dims).any(|(a, b)| a < b) {
            return Ok(false);
        }
        self.find_map(other, Need::Surjective)
    }

    /// Decides whether the hom space contains a map of full rank at every
    /// vertex. A few generic combinations are tried first; a negative answer
    /// is only given after an exhaustive search over a grid large enough to
    /// contain a witness whenever one exists.
    fn find_map(&self, other: &Self, need: Need) -> Result<bool> {
        let f = self.field();
        let target: Vec<usize> = match need {
            Need::Injective => self.dims.clone(),
            Need::Surjective => other.dims.clone(),
            Need::Both => self.dims.clone(),
        };
        if target.iter().all(|&d| d == 0) {
            return Ok(true);
        }
        let basis = self.hom_basis(other)?;
        if basis.is_empty() {
            return Ok(false);
        }
        let good = |coeffs: &[F::Elem]| -> bool {
            let m = combine(f, &basis, coeffs);
            m.blocks
                .iter()
                .zip(&target)
                .all(|(b, &t)| t == 0 || b.rank(f) == t)
        };
        let d = basis.len();
        let primes = generic_coefficients(3 * d + 3);
        for shift in 0..3 {
            let coeffs: Vec<F::Elem> = (0..d).map(|i| f.from_i64(primes[shift * d + i])).collect();
            if good(&coeffs) {
                return Ok(true);
            }
        }
        // Each block minor has degree <= its rank in every coefficient, so the
        // product has degree <= total in each variable.
        let total: usize = target.iter().sum();
        let values: Vec<F::Elem> = match f.elements() {
            Some(all) => all,
            None => (0..=total as i64).map(|i| f.from_i64(i)).collect(),
        };
        let size = (values.len() as f64).powi(d as i32);
        if size > 2.0e5 {
            return Err(Error::Undecided);
        }
        let mut idx = vec![0usize; d];
        loop {
            let coeffs: Vec<F::Elem> = idx.iter().map(|&i| values[i].clone()).collect();
            if good(&coeffs) {
                return Ok(true);
            }
            let mut t = 0;
            while t < d {
                idx[t] += 1;
                if idx[t] < values.len() {
                    break;
                }
                idx[t] = 0;
                t += 1;
            }
            if t == d {
                break;
            }
        }
        Ok(false)
    }

    /// Block-diagonal matrix of a map on the total spaces.
    pub fn full_matrix(&self, other: &Self, m: &ModuleMap<F::Elem>) -> Matrix<F::Elem> {
        let f = self.field();
        let mut out = Matrix::zeros(f, other.dim(), self.dim());
        for (vi, b) in m.blocks.iter().enumerate() {
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    out.set(other.offsets[vi] + r, self.offsets[vi] + c, b.get(r, c).clone());
                }
            }
        }
        out
    }

    /// `End(M)` is local.
    pub fn is_indecomposable(&self) -> Result<bool> {
        if self.dim() == 0 {
            return Ok(false);
        }
        let f = self.field();
        let ends: Vec<Matrix<F::Elem>> = self
            .hom_basis(self)?
            .iter()
            .map(|m| self.full_matrix(self, m))
            .collect();
        if f.characteristic() == 0 {
            return Ok(trace_form_rank(f, &ends) == 1);
        }
        if split_local_radical(f, &ends).is_some() {
            return Ok(true);
        }
        let d = ends.len();
        let values = f.elements().expect("finite field");
        if d > 6 || (values.len() as f64).powi(d as i32) > 1.0e6 {
            return Err(Error::UnsupportedField(format!(
                "idempotent search with dim End = {d} over {}",
                f.spec()
            )));
        }
        let id = Matrix::identity(f, self.dim());
        let zero = Matrix::zeros(f, self.dim(), self.dim());
        let mut idx = vec![0usize; d];
        loop {
            let mut e = zero.clone();
            for (t, &i) in idx.iter().enumerate() {
                e = e.add(f, &ends[t].scale(f, &values[i]));
            }
            if e != zero && e != id && e.mul(f, &e) == e {
                return Ok(false);
            }
            let mut t = 0;
            while t < d {
                idx[t] += 1;
                if idx[t] < values.len() {
                    break;
                }
                idx[t] = 0;
                t += 1;
            }
            if t == d {
                return Ok(true);
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Need {
    Injective,
    Surjective,
    Both,
}

pub fn combine<F: Field>(f: &F, basis: &[ModuleMap<F::Elem>], coeffs: &[F::Elem]) -> ModuleMap<F::Elem> {
    let mut blocks: Vec<Matrix<F::Elem>> = basis[0]
        .blocks
        .iter()
        .map(|b| Matrix::zeros(f, b.rows(), b.cols()))
        .collect();
    for (m, c) in basis.iter().zip(coeffs) {
        if f.is_zero(c) {
            continue;
        }
        for (acc, b) in blocks.iter_mut().zip(&m.blocks) {
            *acc = acc.add(f, &b.scale(f, c));
        }
    }
    ModuleMap { blocks }
}

fn is_nilpotent<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    let mut p = m.clone();
    let mut n = 1;
    while n < m.rows() {
        p = p.mul(f, &p);
        n *= 2;
    }
    p.is_zero(f)
}

fn trace<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    (0..m.rows()).fold(f.zero(), |acc, k| f.add(&acc, m.get(k, k)))
}

/// If the span `E` of `mats` (containing the identity) is `K·1 ⊕ N` with `N`
/// a nilpotent ideal, returns a basis of `N`.
pub fn split_local_radical<F: Field>(f: &F, mats: &[Matrix<F::Elem>]) -> Option<Vec<Matrix<F::Elem>>> {
    let n = mats.first()?.rows();
    let id = Matrix::identity(f, n);
    let mut nil = Vec::new();
    for m in mats {
        let shifted = |l: &F::Elem| m.add(f, &id.scale(f, &f.neg(l)));
        let found = if f.characteristic() == 0 {
            let l = f.div(&trace(f, m), &f.from_i64(n as i64))?;
            Some(shifted(&l)).filter(|x| is_nilpotent(f, x))
        } else {
            f.elements()?.iter().map(shifted).find(|x| is_nilpotent(f, x))
        };
        nil.push(found?);
    }
    let flat = |m: &Matrix<F::Elem>| m.entries().to_vec();
    let span = Echelon::span(f, n * n, &nil.iter().map(flat).collect::<Vec<_>>());
    let basis: Vec<Matrix<F::Elem>> = span.rows.iter().map(|r| Matrix::from_vec(n, n, r.clone()).unwrap()).collect();
    if span.contains(f, &flat(&id)) || span.dim() + 1 != Echelon::span(f, n * n, &mats.iter().map(flat).collect::<Vec<_>>()).dim() {
        return None;
    }
    // N·N ⊂ N, then powers of N shrink to zero
    let mut power = basis.clone();
    for _ in 0..=n {
        let mut next = Echelon::zero(n * n);
        for x in &power {
            for y in &basis {
                let p = x.mul(f, y);
                if !span.contains(f, &flat(&p)) {
                    return None;
                }
                next.insert(f, &flat(&p));
            }
        }
        if next.dim() == 0 {
            return Some(basis);
        }
        power = next.rows.iter().map(|r| Matrix::from_vec(n, n, r.clone()).unwrap()).collect();
    }
    None
}

/// Rank of `(x, y) ↦ tr(xy)` on the span of `mats`; in characteristic zero
/// this is the dimension of the span modulo its radical.
pub fn trace_form_rank<F: Field>(f: &F, mats: &[Matrix<F::Elem>]) -> usize {
    let d = mats.len();
    if d == 0 {
        return 0;
    }
    let mut g = Matrix::zeros(f, d, d);
    for i in 0..d {
        for j in 0..d {
            let p = mats[i].mul(f, &mats[j]);
            let mut tr = f.zero();
            for k in 0..p.rows() {
                tr = f.add(&tr, p.get(k, k));
            }
            g.set(i, j, tr);
        }
    }
    g.rank(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_LENGTH_CAP;
    use crate::field::{PrimeField, Rationals};
    use crate::presets::{make_anc, make_auslander, unipotent_c};
    use num_rational::BigRational;

    fn anc4() -> Arc<Algebra<Rationals>> {
        let p = make_anc(4, &unipotent_c(&BigRational::from_integer(1.into()))).unwrap();
        Arc::new(Algebra::build(Rationals, &p, DEFAULT_LENGTH_CAP).unwrap())
    }

    #[test]
    fn projective_dimensions() {
        let a = anc4();
        let dims: Vec<usize> = (1..=4).map(|j| Module::projective(&a, j).unwrap().dim()).collect();
        assert_eq!(dims, vec![9, 6, 6, 4]);
        // P(3)_k for k = 1..4, counted as |Λ^{(3)} ∩ Λ^{(k)}|
        assert_eq!(Module::projective(&a, 3).unwrap().dims(), &[2, 1, 2, 1]);
        assert_eq!(Module::projective(&a, 9).unwrap_err(), Error::UnknownVertex(9));
    }

    #[test]
    fn socle_radical_top() {
        let a = anc4();
        let p1 = Module::projective(&a, 1).unwrap();
        let soc = p1.socle();
        assert_eq!(soc.dims(), vec![1, 0, 0, 0]);
        let (alg_elem, gen) = (a.path(&[1, 2, 4, 2, 1]).unwrap(), p1.unit(0, 0));
        let x = p1.act(&alg_elem, &gen);
        assert!(p1.contains(&soc, &x) && !is_zero_vec(a.field(), &x));
        assert_eq!(p1.top_dims(), vec![1, 0, 0, 0]);
        let s = Module::simple(&a, 2).unwrap();
        assert!(s.radical().is_zero());
        assert_eq!(s.socle().dim(), 1);
        let rad = p1.radical();
        assert_eq!(rad.dim() + p1.top_dims().iter().sum::<usize>(), p1.dim());
    }

    #[test]
    fn homs_and_projectivity() {
        let a = anc4();
        let p1 = Module::projective(&a, 1).unwrap();
        for j in 1..=4 {
            let pj = Module::projective(&a, j).unwrap();
            assert_eq!(pj.hom_basis(&p1).unwrap().len(), p1.dim_at(j));
            for m in pj.hom_basis(&p1).unwrap() {
                assert!(pj.is_map(&p1, &m));
            }
        }
        // End(P(1)) = e_1 A e_1 has dimension |Λ^{(1)}| = n
        assert_eq!(p1.hom_basis(&p1).unwrap().len(), 4);
        let s1 = Module::simple(&a, 1).unwrap();
        let s2 = Module::simple(&a, 2).unwrap();
        assert!(s1.hom_basis(&s2).unwrap().is_empty());
        assert!(s1.embeds(&p1).unwrap());
        assert!(!p1.embeds(&s1).unwrap());
        assert!(p1.is_isomorphic(&p1).unwrap());
    }

    #[test]
    fn injectives_and_duality() {
        let a = anc4();
        let op = Arc::new(a.opposite().unwrap());
        assert_eq!(op.dim(), 25);
        for j in 1..=4 {
            let i = Module::injective(&a, &op, j).unwrap();
            assert_eq!(i.dims(), Module::projective(&op, j).unwrap().dims());
            assert_eq!(i.socle().dims().iter().sum::<usize>(), 1);
        }
        let p1 = Module::projective(&a, 1).unwrap();
        let i1 = Module::injective(&a, &op, 1).unwrap();
        assert!(p1.is_isomorphic(&i1).unwrap());
    }

    #[test]
    fn quotient_and_submodule() {
        let a = anc4();
        let p3 = Module::projective(&a, 3).unwrap();
        let (m0, _) = p3.quotient(&p3.zero_submodule()).unwrap();
        assert!(m0.is_isomorphic(&p3).unwrap());
        let (mm, _) = p3.quotient(&p3.full_submodule()).unwrap();
        assert_eq!(mm.dim(), 0);
        let (top, proj) = p3.quotient(&p3.radical()).unwrap();
        assert!(top.is_isomorphic(&Module::simple(&a, 3).unwrap()).unwrap());
        let (rad, inc) = p3.submodule_module(&p3.radical()).unwrap();
        assert!(rad.is_map(&p3, &inc));
        assert!(p3.is_map(&top, &proj));
        assert_eq!(p3.generated(&[p3.unit(2, 0)]).unwrap(), p3.full_submodule());
        assert!(p3.generated(&[]).unwrap().is_zero());
    }

    #[test]
    fn indecomposability() {
        let a = anc4();
        let s1 = Module::simple(&a, 1).unwrap();
        assert!(s1.is_indecomposable().unwrap());
        let ss = Module::direct_sum(&[s1.clone(), s1.clone()]).unwrap();
        assert!(!ss.is_indecomposable().unwrap());
        for j in 1..=4 {
            assert!(Module::projective(&a, j).unwrap().is_indecomposable().unwrap());
        }
        let f2 = PrimeField::new(2).unwrap();
        let p = make_auslander(2).unwrap().with_field(f2.spec());
        let b = Arc::new(Algebra::build(f2, &p, DEFAULT_LENGTH_CAP).unwrap());
        let s = Module::simple(&b, 1).unwrap();
        assert!(s.is_indecomposable().unwrap());
        assert!(!Module::direct_sum(&[s.clone(), s]).unwrap().is_indecomposable().unwrap());
        assert!(Module::projective(&b, 2).unwrap().is_indecomposable().unwrap());
    }
}
