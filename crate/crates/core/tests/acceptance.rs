//! Acceptance criteria. Prints one line per criterion and exits nonzero if
//! any of them fails or runs over its time limit.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use qhalg::field::{Field, PrimeField, Rationals};
use qhalg::lattice::{enumerate_submodules, DEFAULT_BUDGET};
use qhalg::matrix::Matrix;
use qhalg::module::Module;
use qhalg::pathbasis::{
    distinguished_path, verify_chain_independence, verify_lemma_2_2, verify_theorem_a, ChainRule, Projective,
};
use qhalg::presentation::Presentation;
use qhalg::presets::{make_anc, make_auslander, make_example4, make_sl3_block, unipotent_c};
use qhalg::qh::{PeelOrder, QhAlgebra};
use qhalg::ringel::verify_lemma_1_2;
use qhalg::tilting::{
    submodule_of_power, tilting_elements, tilting_generator, verify_lemma_3_2, verify_theorem_b,
    verify_tilting_summand, TiltingKit,
};
use qhalg::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn build<F: Field>(f: F, pres: &Presentation) -> qhalg::Result<QhAlgebra<F>> {
    let pres = pres.clone().with_field(f.spec());
    QhAlgebra::from_presentation(f, &pres)
}

fn anc4<F: Field>(f: F, qq: i64) -> QhAlgebra<F> {
    build(f, &make_anc(4, &unipotent_c(&q(qq))).unwrap()).unwrap()
}

fn e(r: qhalg::Result<qhalg::report::Report>) -> Result<(), String> {
    let rep = r.map_err(|e| e.to_string())?;
    ensure(rep.passed(), || format!("{:?}", rep.failures()))
}

// Submodule count by running through every subspace of F_p^d in reduced
// echelon form and testing it against the arrows and vertex idempotents.
fn brute_submodules(m: &Module<PrimeField>, p: u64) -> usize {
    let d = m.dim();
    let arrows = m.algebra().num_arrows();
    let mut act: Vec<Vec<Vec<u64>>> = Vec::new();
    for a in 0..arrows {
        let cols: Vec<Vec<u64>> = (0..d)
            .map(|t| {
                let mut x = vec![0u32; d];
                x[t] = 1;
                m.act_arrow(a, &x).iter().map(|&v| v as u64).collect()
            })
            .collect();
        act.push(cols);
    }
    // projections onto the vertex components
    let mut start = 0;
    for &w in m.dims() {
        let cols: Vec<Vec<u64>> = (0..d)
            .map(|t| {
                let mut x = vec![0u64; d];
                if (start..start + w).contains(&t) {
                    x[t] = 1;
                }
                x
            })
            .collect();
        act.push(cols);
        start += w;
    }
    let arrows = act.len();
    let apply = |a: usize, v: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; d];
        for (t, &c) in v.iter().enumerate() {
            if c != 0 {
                for (o, x) in out.iter_mut().zip(&act[a][t]) {
                    *o = (*o + c * x) % p;
                }
            }
        }
        out
    };
    let inside = |rows: &[Vec<u64>], pivots: &[usize], v: &[u64]| -> bool {
        let mut w = v.to_vec();
        for (r, &c) in rows.iter().zip(pivots) {
            let s = w[c];
            if s != 0 {
                for (x, y) in w.iter_mut().zip(r) {
                    *x = (*x + (p - s) * y) % p;
                }
            }
        }
        w.iter().all(|&x| x == 0)
    };
    let mut count = 0;
    for mask in 0u32..(1 << d) {
        let pivots: Vec<usize> = (0..d).filter(|&c| mask >> c & 1 == 1).collect();
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &c)| ((c + 1)..d).filter(|x| mask >> x & 1 == 0).map(move |x| (r, x)))
            .collect();
        let total = p.pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0u64; d]; pivots.len()];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = 1;
            }
            let mut c = code;
            for &(r, x) in &free {
                rows[r][x] = c % p;
                c /= p;
            }
            let closed = rows
                .iter()
                .all(|v| (0..arrows).all(|a| inside(&rows, &pivots, &apply(a, v))));
            if closed {
                count += 1;
            }
        }
    }
    count
}

fn criterion_1() -> Outcome {
    let a = anc4(Rationals, 1);
    let rep = a.check_one_quasi_hereditary();
    ensure(rep.passed(), || format!("{rep:?}"))?;
    Ok("A_4(C), q = 1, all four axioms".into())
}

fn criterion_2() -> Outcome {
    let mut seen = Vec::new();
    for p in [2u32, 3] {
        for qq in [1, 0] {
            let a = anc4(PrimeField::new(p).unwrap(), qq);
            let mut counts = Vec::new();
            for m in [a.projective(3).unwrap(), a.injective(3).unwrap()] {
                let n = enumerate_submodules(&m, DEFAULT_BUDGET).map_err(|e| e.to_string())?.len();
                let oracle = brute_submodules(&m, p as u64);
                ensure(n == oracle, || format!("F_{p}, q = {qq}: lattice {n}, brute force {oracle}"))?;
                counts.push(n);
            }
            if qq == 1 {
                ensure(counts == [10, 9], || format!("F_{p}, q = 1: {counts:?}"))?;
            } else {
                ensure(counts[0] == counts[1], || format!("F_{p}, q = 0: {counts:?}"))?;
            }
            seen.push(format!("F_{p} q={qq}: {}/{}", counts[0], counts[1]));
        }
    }
    Ok(seen.join(", "))
}

fn random_invertible(rng: &mut StdRng, k: usize) -> Matrix<BigRational> {
    loop {
        let rows: Vec<Vec<BigRational>> = (0..k)
            .map(|_| (0..k).map(|_| q(rng.gen_range(-3..=3))).collect())
            .collect();
        let c = Matrix::from_rows(k, &rows);
        if c.invert(&Rationals).is_ok() {
            return c;
        }
    }
}

fn criterion_3() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x1a2b);
    for n in [4u32, 5] {
        for _ in 0..3 {
            let c = random_invertible(&mut rng, n as usize - 2);
            let rep = verify_lemma_1_2(Rationals, n, &c).map_err(|e| format!("n = {n}, C = {c:?}: {e}"))?;
            ensure(rep.passed(), || format!("n = {n}, C = {:?}: {:?}", c.row_vecs(), rep.failures()))?;
        }
    }
    Ok("n = 4, 5 with three random C each".into())
}

/// `t(i,k)` as sums of `p(l,k) = p(1,l,k)`.
fn sl3_table() -> Vec<((u32, u32), Vec<(u32, u32)>)> {
    let mut t = vec![
        ((2, 1), vec![(5, 1)]),
        ((3, 1), vec![(4, 1)]),
        ((4, 1), vec![(3, 1)]),
        ((5, 1), vec![(2, 1)]),
        ((4, 3), vec![(5, 3)]),
        ((5, 3), vec![(4, 3), (5, 3)]),
        ((4, 2), vec![(4, 2), (5, 2)]),
        ((5, 2), vec![(4, 2)]),
    ];
    for i in 1..=6 {
        t.push(((i, i), vec![(6, i)]));
    }
    for i in 1..=5 {
        t.push(((6, i), vec![(i, i)]));
    }
    t
}

fn criterion_4() -> Outcome {
    let pres = make_sl3_block().map_err(|e| e.to_string())?;
    let a = build(Rationals, &pres).unwrap();
    let d = a.projective(1).unwrap().dim();
    ensure(d == 19, || format!("dim P(1) = {d}"))?;
    for j in 1..=6 {
        e(verify_theorem_a(&a, j))?;
        e(verify_lemma_2_2(&a, j))?;
    }
    let kit = TiltingKit::new(&a).map_err(|e| e.to_string())?;
    e(verify_lemma_3_2(&a, &kit))?;

    let a2 = build(PrimeField::new(2).unwrap(), &pres).unwrap();
    let kit2 = TiltingKit::new(&a2).map_err(|e| e.to_string())?;
    let rep = verify_theorem_b(&a2, &kit2).map_err(|e| e.to_string())?;
    ensure(rep.passed(), || format!("{:?}", rep.failures()))?;
    let found = rep
        .checks
        .iter()
        .filter_map(|c| c.witness.as_deref())
        .any(|w| w.starts_with("19 local Delta-good"));
    ensure(found, || format!("{:?}", rep.checks))?;

    let table = sl3_table();
    for ((i, k), rhs) in &table {
        let mut x = a.alg.zero();
        for &(l, kk) in rhs {
            let p = distinguished_path(&a, 1, l, kk, ChainRule::Smallest).map_err(|e| e.to_string())?;
            x = x.iter().zip(&p.element).map(|(u, v)| u + v).collect();
        }
        let lhs = kit.t(*i, *k).ok_or(format!("no t({i},{k})"))?;
        ensure(kit.generated(lhs).unwrap() == kit.generated(&x).unwrap(), || {
            format!("<t({i},{k})> differs from the table")
        })?;
    }
    Ok(format!("dim P(1) = 19, 19 local Delta-good over F_2, {} table entries", table.len()))
}

fn criterion_5() -> Outcome {
    let qq = q(2);
    let a = build(Rationals, &make_example4(&qq).unwrap()).unwrap();
    let ext = a.poset.linear_extensions(Some(1));
    let want = vec![vec![1, 2, 3, 4, 5, 6], vec![1, 2, 4, 3, 5, 6], vec![1, 4, 2, 3, 5, 6]];
    ensure(ext == want, || format!("L(1) = {ext:?}"))?;

    for i in 1..=6 {
        let rep = a.factor(&a.poset.down(i)).unwrap().check_one_quasi_hereditary();
        if i == 5 {
            let failing: Vec<u8> = rep.axioms.iter().filter(|x| !x.passed).map(|x| x.axiom).collect();
            ensure(rep.quasi_hereditary && failing == [3], || format!("A(5): {rep:?}"))?;
        } else {
            ensure(rep.passed(), || format!("A({i}): {rep:?}"))?;
        }
    }

    let path = |v: &[u32]| a.alg.path(v).unwrap();
    let sub = |x: &[BigRational], y: &[BigRational]| -> Vec<BigRational> { x.iter().zip(y).map(|(u, v)| u - v).collect() };
    let scale = |s: &BigRational, x: &[BigRational]| -> Vec<BigRational> { x.iter().map(|u| s * u).collect() };
    let expected = [
        (1, path(&[1, 4, 5, 6, 5, 4, 1])),
        (2, path(&[1, 4, 5, 4, 1])),
        (3, sub(&scale(&qq, &path(&[1, 2, 3, 2, 1])), &path(&[1, 4, 1]))),
        (4, sub(&path(&[1, 4, 1]), &path(&[1, 2, 3, 2, 1]))),
        (6, a.alg.idempotent(1).unwrap()),
    ];
    for (i, want) in &expected {
        let (t, _) = tilting_generator(&a, *i).map_err(|e| e.to_string())?;
        let lead = want.iter().position(|x| *x != q(0)).unwrap();
        let lambda = &t[lead] / &want[lead];
        ensure(lambda != q(0) && t == scale(&lambda, want), || format!("t({i}) = {}", a.alg.format_elem(&t)))?;
    }
    ensure(tilting_generator(&a, 5).unwrap_err() == Error::FactorNotOneQH(5), || "t(5) exists".into())?;

    let proj = Projective::new(&a, 1).unwrap();
    let el = |x: Vec<BigRational>| proj.element(&x).unwrap();
    let gens = vec![
        vec![el(path(&[1, 2, 1])), el(sub(&path(&[1, 4, 1]), &path(&[1, 2, 3, 2, 1])))],
        vec![el(path(&[1, 4, 1])), proj.module.zero_element()],
    ];
    let (t5, _, _) = submodule_of_power(&proj.module, 2, &gens).map_err(|e| e.to_string())?;
    let rep = verify_tilting_summand(&a, &t5, 5);
    ensure(rep.passed(), || format!("T(5): {:?}", rep.failures()))?;

    let b = build(PrimeField::new(2).unwrap(), &make_example4(&q(0)).unwrap()).unwrap();
    let lat = enumerate_submodules(&b.delta(6).unwrap(), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let chains = lat.maximal_chains();
    ensure(chains == 3, || format!("Delta(6) has {chains} maximal chains"))?;
    Ok(format!("3 sequences in L(1), A(5) fails axiom (3) only, dim T(5) = {}, 3 chains in Delta(6)", t5.dim()))
}

fn up_sets(pres: &Presentation) -> BTreeMap<u32, BTreeSet<u32>> {
    let verts = pres.quiver.vertices();
    let mut up: BTreeMap<u32, BTreeSet<u32>> = verts.iter().map(|&v| (v, BTreeSet::from([v]))).collect();
    loop {
        let mut grew = false;
        for &(lo, hi) in &pres.order {
            let above = up[&hi].clone();
            let s = up.get_mut(&lo).unwrap();
            let before = s.len();
            s.extend(above);
            grew |= s.len() > before;
        }
        if !grew {
            return up;
        }
    }
}

fn properties(name: &str, pres: &Presentation) -> Result<(), String> {
    let a = build(Rationals, pres).map_err(|e| format!("{name}: {e}"))?;
    ensure(a.alg.check_associativity().is_none(), || format!("{name}: not associative"))?;
    let up = up_sets(pres);
    let verts = a.vertices().to_vec();
    for &j in &verts {
        for &k in &verts {
            let want = up[&j].intersection(&up[&k]).count();
            let got = a.alg.cartan(k, j);
            ensure(got == want, || format!("{name}: dim e_{k} A e_{j} = {got}, expected {want}"))?;
        }
    }
    for &j in &verts {
        let p = a.projective(j).unwrap();
        let asc = a.delta_good_filtration(&p, PeelOrder::Ascending).ok_or(format!("{name}: P({j}) not Delta-good"))?;
        let desc = a.delta_good_filtration(&p, PeelOrder::Descending).ok_or(format!("{name}: P({j}) not Delta-good"))?;
        ensure(asc.multiplicities == desc.multiplicities, || format!("{name}: peeling order changes P({j})"))?;
        for &i in &verts {
            let nabla = a.nabla(i).unwrap().dim_at(j);
            ensure(asc.multiplicity(i) == nabla, || {
                format!("{name}: (P({j}):Delta({i})) = {}, [Nabla({i}):S({j})] = {nabla}", asc.multiplicity(i))
            })?;
        }
        e(verify_chain_independence(&a, j)).map_err(|m| format!("{name}: {m}"))?;
    }
    let proj = Projective::new(&a, a.min_vertex().unwrap()).unwrap();
    for &i in &verts {
        let t = match tilting_generator(&a, i) {
            Ok((t, _)) => t,
            Err(Error::FactorNotOneQH(_)) => continue,
            Err(err) => return Err(format!("{name}: t({i}): {err}")),
        };
        let base = tilting_elements(&a, &t, i).unwrap();
        for s in [q(2), -BigRational::new(1.into(), 3.into())] {
            let scaled: Vec<BigRational> = t.iter().map(|x| &s * x).collect();
            for ((k, x), (_, y)) in base.iter().zip(tilting_elements(&a, &scaled, i).unwrap()) {
                ensure(proj.generated_by(x).unwrap() == proj.generated_by(&y).unwrap(), || {
                    format!("{name}: <t({i},{k})> changes under scaling")
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let presets = vec![
        ("A_4(C) q=1", make_anc(4, &unipotent_c(&q(1))).unwrap()),
        ("A_5(C) random", make_anc(5, &random_invertible(&mut rng, 3)).unwrap()),
        ("sl3", make_sl3_block().unwrap()),
        ("example4", make_example4(&q(2)).unwrap()),
        ("Auslander m=4", make_auslander(4).unwrap()),
    ];
    for (name, pres) in &presets {
        properties(name, pres)?;
    }
    Ok(format!("{} presets", presets.len()))
}

fn criterion_7() -> Outcome {
    for m in 1..=5usize {
        let a = build(Rationals, &make_auslander(m).unwrap()).unwrap();
        let want: usize = (1..=m).flat_map(|x| (1..=m).map(move |y| x.min(y))).sum();
        ensure(a.alg.dim() == want, || format!("m = {m}: dim {} vs {want}", a.alg.dim()))?;
        let rep = a.check_one_quasi_hereditary();
        ensure(rep.passed(), || format!("m = {m}: {rep:?}"))?;
    }
    Ok("m = 1..5".into())
}

fn main() {
    let criteria: [(u8, &str, u64, fn() -> Outcome); 7] = [
        (1, "A_4(C) is 1-quasi-hereditary", 5, criterion_1),
        (2, "submodule counts of P(3) and I(3)", 30, criterion_2),
        (3, "tilting summands and Ringel dual of random A_n(C)", 60, criterion_3),
        (4, "sl3 block", 120, criterion_4),
        (5, "six-vertex example with factor A(5)", 60, criterion_5),
        (6, "property suites", 120, criterion_6),
        (7, "Auslander algebras", 10, criterion_7),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, title, limit, run) in criteria {
        let start = Instant::now();
        let result = match panic::catch_unwind(AssertUnwindSafe(run)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let took = start.elapsed();
        let result = result.and_then(|s| {
            if took > Duration::from_secs(limit) {
                Err(format!("over the {limit}s limit"))
            } else {
                Ok(s)
            }
        });
        let secs = took.as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {n} PASS  {title} [{secs:.2}s] {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL  {title} [{secs:.2}s] {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
