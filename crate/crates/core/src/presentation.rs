//! Quivers, paths and relations.
//!
//! Paths are arrow words in traversal order. The product follows the
//! composition convention `(k → i → j) = (i → j)·(k → i)`, so `x·y` walks
//! `y` first.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{format_rational, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub src: u32,
    pub tgt: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<u32>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<u32>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vertices.len() {
            return Err(Error::Parse("duplicate vertex id".into()));
        }
        if vertices.iter().any(|&v| v == 0) {
            return Err(Error::Parse("vertex ids must be positive".into()));
        }
        for (t, a) in arrows.iter().enumerate() {
            for v in [a.src, a.tgt] {
                if !sorted.contains(&v) {
                    return Err(Error::UnknownVertex(v));
                }
            }
            if arrows[..t].iter().any(|b| b.id == a.id) {
                return Err(Error::Parse(format!("duplicate arrow id `{}`", a.id)));
            }
        }
        Ok(Self {
            vertices: sorted,
            arrows,
        })
    }

    /// One arrow each way along every listed edge, named `a<src>_<tgt>`.
    pub fn doubled(vertices: Vec<u32>, edges: &[(u32, u32)]) -> Result<Self> {
        let mut arrows = Vec::new();
        for &(a, b) in edges {
            for (s, t) in [(a, b), (b, a)] {
                arrows.push(Arrow {
                    id: format!("a{s}_{t}"),
                    src: s,
                    tgt: t,
                });
            }
        }
        Self::new(vertices, arrows)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, v: u32) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn path_from_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Path> {
        let word = ids
            .iter()
            .map(|s| {
                self.arrow_index(s.as_ref())
                    .ok_or_else(|| Error::UnknownArrow(s.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.path_from_word(word)
    }

    pub fn path_from_word(&self, word: Vec<usize>) -> Result<Path> {
        let Some(&first) = word.first() else {
            return Err(Error::MalformedRelation("empty arrow word".into()));
        };
        for w in word.windows(2) {
            if self.arrows[w[0]].tgt != self.arrows[w[1]].src {
                return Err(Error::MalformedRelation(format!(
                    "arrows `{}` and `{}` do not compose",
                    self.arrows[w[0]].id, self.arrows[w[1]].id
                )));
            }
        }
        let last = *word.last().unwrap();
        Ok(Path {
            src: self.arrows[first].src,
            tgt: self.arrows[last].tgt,
            word,
        })
    }

    /// The path visiting the given vertices, e.g. `[1, 2, 1]` for `(1 2 1)`.
    /// Needs a unique arrow between consecutive vertices.
    pub fn path_through(&self, verts: &[u32]) -> Result<Path> {
        match verts {
            [] => Err(Error::MalformedRelation("empty vertex sequence".into())),
            [v] => {
                self.vertex_index(*v).ok_or(Error::UnknownVertex(*v))?;
                Ok(Path::trivial(*v))
            }
            _ => {
                let mut word = Vec::new();
                for w in verts.windows(2) {
                    let found: Vec<usize> = (0..self.arrows.len())
                        .filter(|&t| self.arrows[t].src == w[0] && self.arrows[t].tgt == w[1])
                        .collect();
                    match found.as_slice() {
                        [t] => word.push(*t),
                        [] => {
                            return Err(Error::MalformedRelation(format!(
                                "no arrow {} -> {}",
                                w[0], w[1]
                            )))
                        }
                        _ => {
                            return Err(Error::MalformedRelation(format!(
                                "several arrows {} -> {}",
                                w[0], w[1]
                            )))
                        }
                    }
                }
                self.path_from_word(word)
            }
        }
    }

    /// Vertex sequence of a path, e.g. `(1 2 1)`.
    pub fn format_path(&self, p: &Path) -> String {
        let mut vs = vec![p.src];
        vs.extend(p.word.iter().map(|&a| self.arrows[a].tgt));
        if p.word.is_empty() {
            return format!("e{}", p.src);
        }
        let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        format!("({})", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub src: u32,
    pub tgt: u32,
    pub word: Vec<usize>,
}

impl Path {
    pub fn trivial(v: u32) -> Self {
        Self {
            src: v,
            tgt: v,
            word: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.word.is_empty()
    }
}

/// A linear combination of parallel paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSum<E> {
    pub terms: Vec<(E, Path)>,
}

impl<E> PathSum<E> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl PathSum<BigRational> {
    /// Merges duplicate paths, drops zero coefficients and checks parallelism.
    pub fn normalized(terms: Vec<(BigRational, Path)>) -> Result<Self> {
        let mut acc: BTreeMap<Path, BigRational> = BTreeMap::new();
        for (c, p) in terms {
            *acc.entry(p).or_insert_with(BigRational::zero) += c;
        }
        let terms: Vec<(BigRational, Path)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (c, p))
            .collect();
        if let Some((_, first)) = terms.first() {
            if terms
                .iter()
                .any(|(_, p)| p.src != first.src || p.tgt != first.tgt)
            {
                return Err(Error::MalformedRelation("terms are not parallel".into()));
            }
        }
        Ok(Self { terms })
    }

    pub fn format(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, p)| {
                if c.is_one() {
                    q.format_path(p)
                } else {
                    format!("{}*{}", format_rational(c), q.format_path(p))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// `KQ/I` as data: quiver, relations with exact rational coefficients, the
/// field to compute over, and an optional partial order (pairs `a < b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub quiver: Quiver,
    pub relations: Vec<PathSum<BigRational>>,
    pub field: FieldSpec,
    pub order: Vec<(u32, u32)>,
}

impl Presentation {
    pub fn new(
        quiver: Quiver,
        relations: Vec<PathSum<BigRational>>,
        field: FieldSpec,
        order: Vec<(u32, u32)>,
    ) -> Result<Self> {
        let p = Self {
            quiver,
            relations,
            field,
            order,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.relations {
            let first = r
                .terms
                .first()
                .ok_or_else(|| Error::MalformedRelation("empty relation".into()))?;
            for (_, p) in &r.terms {
                if p.len() < 2 {
                    return Err(Error::MalformedRelation(format!(
                        "term {} has length < 2",
                        self.quiver.format_path(p)
                    )));
                }
                if p.src != first.1.src || p.tgt != first.1.tgt {
                    return Err(Error::MalformedRelation("terms are not parallel".into()));
                }
                self.quiver.path_from_word(p.word.clone())?;
            }
        }
        for &(a, b) in &self.order {
            for v in [a, b] {
                self.quiver.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
            }
        }
        Ok(())
    }

    pub fn with_field(mut self, field: FieldSpec) -> Self {
        self.field = field;
        self
    }

    /// Reverses every arrow and every relation word; the order is kept.
    pub fn opposite(&self) -> Self {
        let arrows = self
            .quiver
            .arrows
            .iter()
            .map(|a| Arrow {
                id: a.id.clone(),
                src: a.tgt,
                tgt: a.src,
            })
            .collect();
        let relations = self
            .relations
            .iter()
            .map(|r| PathSum {
                terms: r
                    .terms
                    .iter()
                    .map(|(c, p)| {
                        let mut word = p.word.clone();
                        word.reverse();
                        (
                            c.clone(),
                            Path {
                                src: p.tgt,
                                tgt: p.src,
                                word,
                            },
                        )
                    })
                    .collect(),
            })
            .collect();
        Self {
            quiver: Quiver {
                vertices: self.quiver.vertices.clone(),
                arrows,
            },
            relations,
            field: self.field,
            order: self.order.clone(),
        }
    }

    /// Presentation of `A / A(Σ_{t ∉ keep} e_t)A`: the full subquiver on `keep`
    /// with every term through a removed vertex dropped.
    pub fn restrict(&self, keep: &[u32]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        for &v in keep {
            self.quiver.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
        }
        let kept = |a: &Arrow| keep.contains(&a.src) && keep.contains(&a.tgt);
        let mut new_index = vec![None; self.quiver.arrows.len()];
        let mut arrows = Vec::new();
        for (t, a) in self.quiver.arrows.iter().enumerate() {
            if kept(a) {
                new_index[t] = Some(arrows.len());
                arrows.push(a.clone());
            }
        }
        let mut relations = Vec::new();
        for r in &self.relations {
            let terms: Vec<(BigRational, Path)> = r
                .terms
                .iter()
                .filter_map(|(c, p)| {
                    let word: Option<Vec<usize>> = p.word.iter().map(|&a| new_index[a]).collect();
                    word.map(|word| {
                        (
                            c.clone(),
                            Path {
                                src: p.src,
                                tgt: p.tgt,
                                word,
                            },
                        )
                    })
                })
                .collect();
            if !terms.is_empty() {
                relations.push(PathSum { terms });
            }
        }
        let mut vertices = keep.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let order = self
            .order
            .iter()
            .copied()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .collect();
        Self::new(Quiver::new(vertices, arrows)?, relations, self.field, order)
    }

    /// Builds a relation from vertex sequences, e.g. `[(1, &[1,2,1]), (-1, &[1,3,1])]`.
    pub fn relation_through(&self, terms: &[(BigRational, &[u32])]) -> Result<PathSum<BigRational>> {
        let terms = terms
            .iter()
            .map(|(c, vs)| Ok((c.clone(), self.quiver.path_through(vs)?)))
            .collect::<Result<Vec<_>>>()?;
        PathSum::normalized(terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn two_cycle() -> Presentation {
        let quiver = Quiver::doubled(vec![1, 2], &[(1, 2)]).unwrap();
        let mut p = Presentation::new(quiver, vec![], FieldSpec::Rationals, vec![(1, 2)]).unwrap();
        let r = p.relation_through(&[(q(1), &[2, 1, 2])]).unwrap();
        p.relations.push(r);
        p
    }

    #[test]
    fn path_notation() {
        let p = two_cycle();
        let path = p.quiver.path_through(&[1, 2, 1]).unwrap();
        assert_eq!(path.src, 1);
        assert_eq!(path.tgt, 1);
        assert_eq!(p.quiver.format_path(&path), "(1 2 1)");
        assert!(p.quiver.path_through(&[1, 1]).is_err());
    }

    #[test]
    fn opposite_is_an_involution() {
        let p = two_cycle();
        assert_eq!(p.opposite().opposite(), p);
        let op = p.opposite();
        assert_eq!(op.quiver.arrows()[0].src, 2);
    }

    #[test]
    fn short_and_skew_relations_are_rejected() {
        let quiver = Quiver::doubled(vec![1, 2], &[(1, 2)]).unwrap();
        let short = PathSum {
            terms: vec![(q(1), quiver.path_through(&[1, 2]).unwrap())],
        };
        assert!(Presentation::new(quiver.clone(), vec![short], FieldSpec::Rationals, vec![]).is_err());
        let skew = PathSum::normalized(vec![
            (q(1), quiver.path_through(&[1, 2, 1]).unwrap()),
            (q(1), quiver.path_through(&[2, 1, 2]).unwrap()),
        ]);
        assert!(skew.is_err());
    }

    #[test]
    fn restriction_drops_terms() {
        let quiver = Quiver::doubled(vec![1, 2, 3], &[(1, 2), (1, 3)]).unwrap();
        let mut p = Presentation::new(quiver, vec![], FieldSpec::Rationals, vec![]).unwrap();
        let r = p
            .relation_through(&[(q(1), &[1, 2, 1]), (q(-1), &[1, 3, 1])])
            .unwrap();
        p.relations.push(r);
        let sub = p.restrict(&[1, 2]).unwrap();
        assert_eq!(sub.quiver.vertices(), &[1, 2]);
        assert_eq!(sub.relations.len(), 1);
        assert_eq!(sub.relations[0].terms.len(), 1);
        assert_eq!(p.restrict(&[]), Err(Error::EmptyKeepSet));
    }
}
