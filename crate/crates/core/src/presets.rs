//! Built-in algebra families.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{parse_rational, FieldSpec, Rationals};
use crate::format::AlgebraJson;
use crate::matrix::Matrix;
use crate::presentation::{Presentation, Quiver};

const SL3_DATA: &str = include_str!("../presets/sl3_block.json");
const EXAMPLE4_DATA: &str = include_str!("../presets/example4.json");

#[derive(Clone, Debug, PartialEq)]
pub enum PresetSpec {
    AnC { n: usize, c: Matrix<BigRational> },
    Sl3Block,
    Example4 { q: BigRational },
    Auslander { m: usize },
}

impl PresetSpec {
    pub fn build(&self) -> Result<Presentation> {
        match self {
            PresetSpec::AnC { n, c } => make_anc(*n, c),
            PresetSpec::Sl3Block => make_sl3_block(),
            PresetSpec::Example4 { q } => make_example4(q),
            PresetSpec::Auslander { m } => make_auslander(*m),
        }
    }
}

fn one() -> BigRational {
    BigRational::one()
}

fn neg(c: &BigRational) -> BigRational {
    -c.clone()
}

/// `A_n(C)`: vertices `1..=n`, middle vertices `2..n-1` pairwise incomparable
/// between `1` and `n`, relations `(j 1 k) = c_jk (j n k)`, `(1 j n) = (1 j' n)`,
/// `(n j 1) = (n j' 1)` and `(n j n) = 0`.
pub fn make_anc(n: usize, c: &Matrix<BigRational>) -> Result<Presentation> {
    if n < 3 {
        return Err(Error::InvalidParameters("A_n(C) needs n >= 3".into()));
    }
    if c.rows() != n - 2 || c.cols() != n - 2 {
        return Err(Error::InvalidParameters(format!(
            "C must be {0}x{0} for n = {n}",
            n - 2
        )));
    }
    c.invert(&Rationals)?;
    let n = n as u32;
    let middle: Vec<u32> = (2..n).collect();
    let edges: Vec<(u32, u32)> = middle.iter().flat_map(|&j| [(1, j), (j, n)]).collect();
    let quiver = Quiver::doubled((1..=n).collect(), &edges)?;
    let mut p = Presentation::new(quiver, vec![], FieldSpec::Rationals, edges)?;
    let mut rels = Vec::new();
    for &j in &middle {
        for &k in &middle {
            let cjk = c.get(j as usize - 2, k as usize - 2);
            rels.push(p.relation_through(&[(one(), &[j, 1, k]), (neg(cjk), &[j, n, k])])?);
        }
    }
    for w in middle.windows(2) {
        let (j, jj) = (w[0], w[1]);
        rels.push(p.relation_through(&[(one(), &[1, j, n]), (neg(&one()), &[1, jj, n])])?);
        rels.push(p.relation_through(&[(one(), &[n, j, 1]), (neg(&one()), &[n, jj, 1])])?);
    }
    for &j in &middle {
        rels.push(p.relation_through(&[(one(), &[n, j, n])])?);
    }
    p.relations = rels.into_iter().filter(|r| !r.is_zero()).collect();
    p.validate()?;
    Ok(p)
}

/// `C = [[1, q], [0, 1]]`, the parameter used for `A_4(C)`.
pub fn unipotent_c(q: &BigRational) -> Matrix<BigRational> {
    Matrix::from_rows(
        2,
        &[
            vec![one(), q.clone()],
            vec![BigRational::zero(), one()],
        ],
    )
}

/// The Auslander algebra of `K[x]/(x^m)` on the chain `1 < 2 < … < m`.
pub fn make_auslander(m: usize) -> Result<Presentation> {
    if m < 1 {
        return Err(Error::InvalidParameters("Auslander algebra needs m >= 1".into()));
    }
    let m = m as u32;
    let edges: Vec<(u32, u32)> = (1..m).map(|i| (i, i + 1)).collect();
    let quiver = Quiver::doubled((1..=m).collect(), &edges)?;
    let mut p = Presentation::new(quiver, vec![], FieldSpec::Rationals, edges)?;
    let mut rels = Vec::new();
    for i in 2..m {
        rels.push(p.relation_through(&[(one(), &[i, i - 1, i]), (neg(&one()), &[i, i + 1, i])])?);
    }
    if m >= 2 {
        rels.push(p.relation_through(&[(one(), &[m, m - 1, m])])?);
    }
    p.relations = rels;
    Ok(p)
}

fn load(data: &str, name: &str, coeff: &dyn Fn(&str) -> Result<BigRational>) -> Result<Presentation> {
    let j: AlgebraJson = serde_json::from_str(data)
        .map_err(|e| Error::PresetDataMissing(format!("{name}: {e}")))?;
    if j.provenance.as_deref().map_or(true, str::is_empty) {
        return Err(Error::PresetDataMissing(format!("{name}: no provenance note")));
    }
    j.to_presentation_with(coeff)
}

/// The algebra of the regular block of category O for sl3.
pub fn make_sl3_block() -> Result<Presentation> {
    load(SL3_DATA, "sl3_block", &parse_rational)
}

/// The six-vertex algebra with order `1 < 2 < 3 < 5 < 6`, `1 < 4 < 5`,
/// deformed by a scalar `q` (`q ≠ 1`).
pub fn make_example4(q: &BigRational) -> Result<Presentation> {
    if q.is_one() {
        return Err(Error::InvalidParameters(
            "q = 1 gives an algebra whose projective-injective is not unique".into(),
        ));
    }
    let q = q.clone();
    load(EXAMPLE4_DATA, "example4", &move |s: &str| match s.trim() {
        "q" => Ok(q.clone()),
        "-q" => Ok(-q.clone()),
        other => parse_rational(other),
    })
}

pub fn sl3_provenance() -> String {
    serde_json::from_str::<AlgebraJson>(SL3_DATA)
        .ok()
        .and_then(|j| j.provenance)
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, DEFAULT_LENGTH_CAP};
    use crate::poset::Poset;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    /// Σ_{j,k} |Λ^{(j)} ∩ Λ^{(k)}|.
    fn up_count(p: &Poset) -> usize {
        let c = p.carrier();
        c.iter()
            .flat_map(|&j| c.iter().map(move |&k| (j, k)))
            .map(|(j, k)| c.iter().filter(|&&i| p.leq(j, i) && p.leq(k, i)).count())
            .sum()
    }

    fn dim(p: &Presentation) -> usize {
        Algebra::build(Rationals, p, DEFAULT_LENGTH_CAP).unwrap().dim()
    }

    fn poset(p: &Presentation) -> Poset {
        Poset::new(p.quiver.vertices().to_vec(), &p.order).unwrap()
    }

    #[test]
    fn anc_dimensions() {
        for (n, c) in [
            (3, Matrix::from_rows(1, &[vec![q(2)]])),
            (4, unipotent_c(&q(1))),
            (4, unipotent_c(&q(0))),
            (
                5,
                Matrix::from_rows(3, &[vec![q(1), q(2), q(0)], vec![q(0), q(1), q(3)], vec![q(1), q(0), q(1)]]),
            ),
        ] {
            let p = make_anc(n, &c).unwrap();
            assert_eq!(dim(&p), up_count(&poset(&p)), "n = {n}");
        }
        assert_eq!(dim(&make_anc(4, &unipotent_c(&q(1))).unwrap()), 25);
        assert_eq!(
            make_anc(4, &Matrix::from_rows(2, &[vec![q(1), q(1)], vec![q(1), q(1)]])),
            Err(Error::Singular)
        );
    }

    #[test]
    fn auslander_dimensions() {
        for m in 1..=5usize {
            let expected: usize = (1..=m).flat_map(|a| (1..=m).map(move |b| a.min(b))).sum();
            assert_eq!(dim(&make_auslander(m).unwrap()), expected);
        }
    }

    #[test]
    fn data_file_dimensions() {
        let sl3 = make_sl3_block().unwrap();
        assert_eq!(dim(&sl3), up_count(&poset(&sl3)));
        assert_eq!(dim(&sl3), 77);
        for qq in [q(0), q(2), q(-3)] {
            let ex4 = make_example4(&qq).unwrap();
            assert_eq!(dim(&ex4), up_count(&poset(&ex4)));
        }
        assert!(make_example4(&q(1)).is_err());
        assert!(!sl3_provenance().is_empty());
    }
}
