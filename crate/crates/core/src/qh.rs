//! Standard and costandard modules, good filtrations and the axiom checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Algebra, DEFAULT_LENGTH_CAP};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::module::{Element, Module, ModuleMap, Submodule};
use crate::poset::Poset;
use crate::presentation::Presentation;
use crate::report::Report;

/// Δ(i) for one side, with enough data to map it onto any generator at `i`.
#[derive(Clone, Debug)]
pub struct Standard<F: Field> {
    pub vertex: u32,
    pub module: Module<F>,
    pub projective: Module<F>,
    /// algebra basis index of each coordinate of the projective
    pub paths: Vec<usize>,
    pub projection: ModuleMap<F::Elem>,
    pub killed: Submodule<F::Elem>,
}

impl<F: Field> Standard<F> {
    /// `Δ(i) = P(i) / ⟨e_k P(i) : k ≰ i⟩`.
    pub fn new(alg: &Arc<Algebra<F>>, poset: &Poset, i: u32) -> Result<Self> {
        if !poset.contains(i) {
            return Err(Error::UnknownVertex(i));
        }
        let (p, paths) = Module::projective_with_basis(alg, i)?;
        let mut gens = Vec::new();
        for (vi, &k) in alg.vertices().iter().enumerate() {
            if !poset.leq(k, i) {
                for t in 0..p.dims()[vi] {
                    gens.push(p.unit(vi, t));
                }
            }
        }
        let killed = p.generated(&gens)?;
        let (module, projection) = p.quotient(&killed)?;
        Ok(Self {
            vertex: i,
            module,
            projective: p,
            paths,
            projection,
            killed,
        })
    }

    /// The map `Δ(i) → target` sending the top generator to `v ∈ target_i`.
    /// Only meaningful when that assignment kills the defining submodule.
    pub fn map_to(&self, target: &Module<F>, v: &[F::Elem]) -> ModuleMap<F::Elem> {
        let alg = target.algebra();
        let f = target.field();
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (vi, part) in self.killed.parts.iter().enumerate() {
            let free = part.free_columns();
            let mut b = Matrix::zeros(f, target.dims()[vi], free.len());
            for (col, &c) in free.iter().enumerate() {
                let path = self.paths[offset + c];
                let mut elem = alg.zero();
                elem[path] = f.one();
                let img = target.act(&elem, v);
                for (row, x) in target.component(&img, vi).into_iter().enumerate() {
                    b.set(row, col, x);
                }
            }
            offset += self.projective.dims()[vi];
            blocks.push(b);
        }
        ModuleMap { blocks }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeelOrder {
    Ascending,
    Descending,
}

/// One step of a peeling: `copies` copies of Δ(index) (or ∇(index)) mapped
/// isomorphically onto the bottom of `stage`.
#[derive(Clone, Debug)]
pub struct Layer<F: Field> {
    pub index: u32,
    pub copies: usize,
    pub stage: Module<F>,
    pub witness: ModuleMap<F::Elem>,
}

#[derive(Clone, Debug)]
pub struct FiltrationReport<F: Field> {
    /// Layer indices bottom-up, one entry per copy.
    pub layers: Vec<u32>,
    pub multiplicities: BTreeMap<u32, usize>,
    pub steps: Vec<Layer<F>>,
}

impl<F: Field> FiltrationReport<F> {
    pub fn multiplicity(&self, i: u32) -> usize {
        self.multiplicities.get(&i).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub axiom: u8,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OneQhReport {
    pub quasi_hereditary: bool,
    pub axioms: Vec<AxiomReport>,
}

impl OneQhReport {
    pub fn passed(&self) -> bool {
        self.quasi_hereditary && self.axioms.iter().all(|a| a.passed)
    }

    pub fn axiom(&self, n: u8) -> &AxiomReport {
        &self.axioms[n as usize - 1]
    }
}

/// An algebra with a partial order on its vertices, together with its
/// opposite and the standard modules on both sides.
#[derive(Clone, Debug)]
pub struct QhAlgebra<F: Field> {
    pub alg: Arc<Algebra<F>>,
    pub op: Arc<Algebra<F>>,
    pub poset: Poset,
    deltas: Vec<Standard<F>>,
    deltas_op: Vec<Standard<F>>,
}

impl<F: Field> QhAlgebra<F> {
    pub fn new(alg: Arc<Algebra<F>>, poset: Poset) -> Result<Self> {
        if poset.carrier() != alg.vertices() {
            return Err(Error::Parse("order carrier differs from the vertex set".into()));
        }
        let op = Arc::new(alg.opposite()?);
        let deltas = poset
            .carrier()
            .iter()
            .map(|&i| Standard::new(&alg, &poset, i))
            .collect::<Result<Vec<_>>>()?;
        let deltas_op = poset
            .carrier()
            .iter()
            .map(|&i| Standard::new(&op, &poset, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alg,
            op,
            poset,
            deltas,
            deltas_op,
        })
    }

    pub fn from_presentation(field: F, pres: &Presentation) -> Result<Self> {
        let alg = Arc::new(Algebra::build(field, pres, DEFAULT_LENGTH_CAP)?);
        let poset = Poset::new(pres.quiver.vertices().to_vec(), &pres.order)?;
        Self::new(alg, poset)
    }

    /// `A(l)` for `keep = Λ(l)`, or any other vertex subset.
    pub fn factor(&self, keep: &[u32]) -> Result<Self> {
        let alg = Arc::new(self.alg.vertex_factor(keep)?);
        Self::new(alg, self.poset.restrict(keep))
    }

    pub fn field(&self) -> &F {
        self.alg.field()
    }

    pub fn vertices(&self) -> &[u32] {
        self.poset.carrier()
    }

    fn pos(&self, i: u32) -> Result<usize> {
        self.alg.vertex_index(i)
    }

    pub fn min_vertex(&self) -> Option<u32> {
        self.poset.unique_min()
    }

    pub fn max_vertex(&self) -> Option<u32> {
        self.poset.unique_max()
    }

    pub fn projective(&self, i: u32) -> Result<Module<F>> {
        Ok(self.deltas[self.pos(i)?].projective.clone())
    }

    pub fn injective(&self, i: u32) -> Result<Module<F>> {
        self.deltas_op[self.pos(i)?].projective.dual(&self.alg)
    }

    pub fn simple(&self, i: u32) -> Result<Module<F>> {
        Module::simple(&self.alg, i)
    }

    pub fn standard(&self, i: u32) -> Result<&Standard<F>> {
        Ok(&self.deltas[self.pos(i)?])
    }

    pub fn delta(&self, i: u32) -> Result<Module<F>> {
        Ok(self.standard(i)?.module.clone())
    }

    /// `∇(i)`, the dual of Δ(i) over the opposite algebra.
    pub fn nabla(&self, i: u32) -> Result<Module<F>> {
        self.deltas_op[self.pos(i)?].module.dual(&self.alg)
    }

    pub fn delta_good_filtration(&self, m: &Module<F>, order: PeelOrder) -> Option<FiltrationReport<F>> {
        peel(m, &self.deltas, &self.poset, order)
    }

    /// ∇-peeling through duality; layers are reported bottom-up.
    pub fn nabla_good_filtration(&self, m: &Module<F>, order: PeelOrder) -> Option<FiltrationReport<F>> {
        let d = m.dual(&self.op).ok()?;
        let mut rep = peel(&d, &self.deltas_op, &self.poset, order)?;
        rep.layers.reverse();
        rep.steps.reverse();
        Some(rep)
    }

    pub fn check_quasi_hereditary(&self) -> Report {
        let mut out = Report::default();
        for &i in self.vertices() {
            let d = &self.deltas[self.pos(i).unwrap()].module;
            out.push(
                format!("[Delta({i}):S({i})] = 1"),
                d.dim_at(i) == 1,
                Some(format!("{}", d.dim_at(i))),
            );
            let p = &self.deltas[self.pos(i).unwrap()].projective;
            match self.delta_good_filtration(p, PeelOrder::Ascending) {
                None => out.push(format!("P({i}) is Delta-good"), false, None),
                Some(rep) => {
                    let bad: Vec<u32> = rep
                        .multiplicities
                        .keys()
                        .copied()
                        .filter(|&k| !self.poset.leq(i, k))
                        .collect();
                    out.push(
                        format!("P({i}) is Delta-good with layers above {i}"),
                        bad.is_empty() && rep.multiplicity(i) == 1,
                        Some(format!("layers {:?}", rep.layers)),
                    );
                }
            }
        }
        out
    }

    pub fn is_quasi_hereditary(&self) -> bool {
        self.check_quasi_hereditary().passed()
    }

    pub fn check_one_quasi_hereditary(&self) -> OneQhReport {
        let qh = self.is_quasi_hereditary();
        let mut axioms = Vec::new();
        let min = self.min_vertex();
        let max = self.max_vertex();

        let mut f1 = Vec::new();
        if min.is_none() {
            f1.push(format!("minimal vertices {:?}", self.poset.minimal()));
        }
        if max.is_none() {
            f1.push(format!("maximal vertices {:?}", self.poset.maximal()));
        }
        axioms.push(AxiomReport {
            axiom: 1,
            passed: f1.is_empty(),
            failures: f1,
        });

        let mut f2 = Vec::new();
        let verts = self.vertices().to_vec();
        let filtrations: Vec<Option<FiltrationReport<F>>> = verts
            .iter()
            .map(|&j| self.delta_good_filtration(&self.deltas[self.pos(j).unwrap()].projective, PeelOrder::Ascending))
            .collect();
        for &i in &verts {
            let d = &self.deltas[self.pos(i).unwrap()].module;
            for (jt, &j) in verts.iter().enumerate() {
                if !self.poset.leq(j, i) {
                    continue;
                }
                if d.dim_at(j) != 1 {
                    f2.push(format!("[Delta({i}):S({j})] = {}", d.dim_at(j)));
                }
                match &filtrations[jt] {
                    None => f2.push(format!("P({j}) is not Delta-good")),
                    Some(rep) if rep.multiplicity(i) != 1 => {
                        f2.push(format!("(P({j}):Delta({i})) = {}", rep.multiplicity(i)))
                    }
                    _ => {}
                }
            }
        }
        axioms.push(AxiomReport {
            axiom: 2,
            passed: f2.is_empty(),
            failures: f2,
        });

        let mut f3 = Vec::new();
        match min {
            None => f3.push("no unique minimal vertex".into()),
            Some(one) => {
                let pi = self.pos(one).unwrap();
                let simple_one = |dims: &[usize]| {
                    dims.iter()
                        .enumerate()
                        .all(|(t, &d)| d == usize::from(t == pi))
                };
                for &i in &verts {
                    let p = &self.deltas[self.pos(i).unwrap()].projective;
                    let soc = p.socle().dims();
                    if !simple_one(&soc) {
                        f3.push(format!("soc P({i}) has dimension vector {soc:?}"));
                    }
                    match self.injective(i) {
                        Ok(inj) => {
                            let top = inj.top_dims();
                            if !simple_one(&top) {
                                f3.push(format!("top I({i}) has dimension vector {top:?}"));
                            }
                        }
                        Err(e) => f3.push(format!("I({i}): {e}")),
                    }
                }
            }
        }
        axioms.push(AxiomReport {
            axiom: 3,
            passed: f3.is_empty(),
            failures: f3,
        });

        let mut f4 = Vec::new();
        match max {
            None => f4.push("no unique maximal vertex".into()),
            Some(n) => {
                let dn = self.delta(n).unwrap();
                let nn = self.nabla(n).unwrap();
                for &i in &verts {
                    let di = self.delta(i).unwrap();
                    match di.embeds(&dn) {
                        Ok(true) => {}
                        Ok(false) => f4.push(format!("Delta({i}) does not embed in Delta({n})")),
                        Err(e) => f4.push(format!("Delta({i}) -> Delta({n}): {e}")),
                    }
                    let ni = self.nabla(i).unwrap();
                    match nn.surjects(&ni) {
                        Ok(true) => {}
                        Ok(false) => f4.push(format!("Nabla({n}) does not map onto Nabla({i})")),
                        Err(e) => f4.push(format!("Nabla({n}) -> Nabla({i}): {e}")),
                    }
                }
            }
        }
        axioms.push(AxiomReport {
            axiom: 4,
            passed: f4.is_empty(),
            failures: f4,
        });

        OneQhReport {
            quasi_hereditary: qh,
            axioms,
        }
    }
}

fn peel<F: Field>(
    m: &Module<F>,
    deltas: &[Standard<F>],
    poset: &Poset,
    order: PeelOrder,
) -> Option<FiltrationReport<F>> {
    let alg = m.algebra().clone();
    let mut cur = m.clone();
    let mut layers = Vec::new();
    let mut multiplicities = BTreeMap::new();
    let mut steps = Vec::new();
    loop {
        let support = cur.support();
        if support.is_empty() {
            break;
        }
        let maxes = poset.maximal_in(&support);
        let i = match order {
            PeelOrder::Ascending => *maxes.iter().min()?,
            PeelOrder::Descending => *maxes.iter().max()?,
        };
        let vi = alg.vertex_index(i).ok()?;
        let copies = cur.dims()[vi];
        let gens: Vec<Element<F::Elem>> = (0..copies).map(|t| cur.unit(vi, t)).collect();
        let trace = cur.generated(&gens).ok()?;
        let std = &deltas[vi];
        let outside = alg
            .vertices()
            .iter()
            .enumerate()
            .any(|(k, &v)| !poset.leq(v, i) && trace.parts[k].dim() > 0);
        if outside || trace.dim() != copies * std.module.dim() {
            return None;
        }
        let maps: Vec<ModuleMap<F::Elem>> = gens.iter().map(|g| std.map_to(&cur, g)).collect();
        let witness = ModuleMap {
            blocks: (0..alg.vertices().len())
                .map(|k| {
                    let rows = cur.dims()[k];
                    let mut cols: Vec<Vec<F::Elem>> = Vec::new();
                    for mp in &maps {
                        for c in 0..mp.blocks[k].cols() {
                            cols.push(mp.blocks[k].column(c));
                        }
                    }
                    if cols.is_empty() {
                        Matrix::zeros(cur.field(), rows, 0)
                    } else {
                        Matrix::from_rows(rows, &cols).transpose()
                    }
                })
                .collect(),
        };
        layers.extend(std::iter::repeat(i).take(copies));
        *multiplicities.entry(i).or_insert(0) += copies;
        let (next, _) = cur.quotient(&trace).ok()?;
        steps.push(Layer {
            index: i,
            copies,
            stage: cur,
            witness,
        });
        cur = next;
    }
    Some(FiltrationReport {
        layers,
        multiplicities,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::presets::{make_anc, make_auslander, make_example4, unipotent_c};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn anc4() -> QhAlgebra<Rationals> {
        QhAlgebra::from_presentation(Rationals, &make_anc(4, &unipotent_c(&q(1))).unwrap()).unwrap()
    }

    #[test]
    fn standard_extremes() {
        let a = anc4();
        assert!(a.delta(1).unwrap().is_isomorphic(&a.simple(1).unwrap()).unwrap());
        assert!(a.delta(4).unwrap().is_isomorphic(&a.projective(4).unwrap()).unwrap());
        assert!(a.nabla(1).unwrap().is_isomorphic(&a.simple(1).unwrap()).unwrap());
        for i in 1..=4 {
            let d = a.delta(i).unwrap();
            for j in 1..=4 {
                assert_eq!(d.dim_at(j), usize::from(a.poset.leq(j, i)));
            }
        }
    }

    #[test]
    fn witnesses_are_maps() {
        let a = anc4();
        let rep = a
            .delta_good_filtration(&a.projective(1).unwrap(), PeelOrder::Ascending)
            .unwrap();
        let mut layers = rep.layers.clone();
        layers.sort_unstable();
        assert_eq!(layers, vec![1, 2, 3, 4]);
        for step in &rep.steps {
            let d = a.delta(step.index).unwrap();
            let dom = Module::direct_sum(&vec![d; step.copies]).unwrap();
            assert!(dom.is_map(&step.stage, &step.witness));
            let m = dom.full_matrix(&step.stage, &step.witness);
            assert_eq!(m.rank(a.field()), dom.dim());
        }
    }

    #[test]
    fn anc_and_auslander_are_one_qh() {
        let r = anc4().check_one_quasi_hereditary();
        assert!(r.passed(), "{r:?}");
        for m in 1..=4 {
            let a = QhAlgebra::from_presentation(Rationals, &make_auslander(m).unwrap()).unwrap();
            assert!(a.check_one_quasi_hereditary().passed(), "m = {m}");
        }
    }

    #[test]
    fn example4_factor_fails_socle_axiom() {
        let a = QhAlgebra::from_presentation(Rationals, &make_example4(&q(2)).unwrap()).unwrap();
        assert!(a.check_one_quasi_hereditary().passed());
        let a5 = a.factor(&a.poset.down(5)).unwrap();
        let r = a5.check_one_quasi_hereditary();
        assert!(!r.axiom(3).passed);
        for l in [1, 2, 3, 4, 6] {
            assert!(a.factor(&a.poset.down(l)).unwrap().check_one_quasi_hereditary().passed(), "A({l})");
        }
    }

    #[test]
    fn sl3_block_is_one_qh() {
        let a = QhAlgebra::from_presentation(Rationals, &crate::presets::make_sl3_block().unwrap()).unwrap();
        let r = a.check_one_quasi_hereditary();
        assert!(r.passed(), "{r:?}");
        assert_eq!(a.projective(1).unwrap().dim(), 19);
    }

    #[test]
    fn nabla_peeling_of_injective() {
        let a = anc4();
        let i1 = a.injective(1).unwrap();
        let rep = a.nabla_good_filtration(&i1, PeelOrder::Ascending).unwrap();
        for i in 1..=4 {
            assert_eq!(rep.multiplicity(i), 1);
        }
        let n2 = a.nabla(2).unwrap();
        assert_eq!(a.nabla_good_filtration(&n2, PeelOrder::Ascending).unwrap().layers, vec![2]);
    }
}
