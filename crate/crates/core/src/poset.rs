//! Finite partial orders on vertex ids.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    carrier: Vec<u32>,
    // leq[a][b] over carrier positions
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds the order generated by `less` (pairs `a < b`), closing transitively.
    pub fn new(carrier: Vec<u32>, less: &[(u32, u32)]) -> Result<Self> {
        let mut carrier = carrier;
        carrier.sort_unstable();
        carrier.dedup();
        let n = carrier.len();
        let pos = |v: u32| carrier.binary_search(&v).map_err(|_| Error::UnknownVertex(v));
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in less {
            leq[pos(a)?][pos(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Parse(format!(
                        "order relation has a cycle through {} and {}",
                        carrier[i], carrier[j]
                    )));
                }
            }
        }
        Ok(Self { carrier, leq })
    }

    pub fn chain(n: u32) -> Self {
        let less: Vec<(u32, u32)> = (1..n).map(|i| (i, i + 1)).collect();
        Self::new((1..=n).collect(), &less).expect("chain is a poset")
    }

    pub fn carrier(&self) -> &[u32] {
        &self.carrier
    }

    pub fn contains(&self, v: u32) -> bool {
        self.carrier.binary_search(&v).is_ok()
    }

    fn pos(&self, v: u32) -> usize {
        self.carrier
            .binary_search(&v)
            .unwrap_or_else(|_| panic!("vertex {v} not in poset"))
    }

    pub fn leq(&self, a: u32, b: u32) -> bool {
        self.leq[self.pos(a)][self.pos(b)]
    }

    pub fn lt(&self, a: u32, b: u32) -> bool {
        a != b && self.leq(a, b)
    }

    /// `a ⋖ b`: `b` covers `a`.
    pub fn covers(&self, a: u32, b: u32) -> bool {
        self.lt(a, b)
            && !self
                .carrier
                .iter()
                .any(|&c| self.lt(a, c) && self.lt(c, b))
    }

    /// `Λ(i)`: everything below `i`.
    pub fn down(&self, i: u32) -> Vec<u32> {
        self.carrier.iter().copied().filter(|&j| self.leq(j, i)).collect()
    }

    /// `Λ^{(i)}`: everything above `i`.
    pub fn up(&self, i: u32) -> Vec<u32> {
        self.carrier.iter().copied().filter(|&j| self.leq(i, j)).collect()
    }

    pub fn upper_covers(&self, a: u32) -> Vec<u32> {
        self.carrier.iter().copied().filter(|&b| self.covers(a, b)).collect()
    }

    pub fn lower_covers(&self, b: u32) -> Vec<u32> {
        self.carrier.iter().copied().filter(|&a| self.covers(a, b)).collect()
    }

    pub fn cover_pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for &a in &self.carrier {
            for b in self.upper_covers(a) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn minimal(&self) -> Vec<u32> {
        self.carrier
            .iter()
            .copied()
            .filter(|&a| !self.carrier.iter().any(|&b| self.lt(b, a)))
            .collect()
    }

    pub fn maximal(&self) -> Vec<u32> {
        self.carrier
            .iter()
            .copied()
            .filter(|&a| !self.carrier.iter().any(|&b| self.lt(a, b)))
            .collect()
    }

    /// Maximal elements of a subset.
    pub fn maximal_in(&self, subset: &[u32]) -> Vec<u32> {
        subset
            .iter()
            .copied()
            .filter(|&a| !subset.iter().any(|&b| self.lt(a, b)))
            .collect()
    }

    pub fn unique_min(&self) -> Option<u32> {
        match self.minimal().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    pub fn unique_max(&self) -> Option<u32> {
        match self.maximal().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    pub fn is_down_set(&self, s: &[u32]) -> bool {
        s.iter()
            .all(|&a| self.contains(a) && self.down(a).iter().all(|b| s.contains(b)))
    }

    pub fn is_chain(&self, s: &[u32]) -> bool {
        s.iter()
            .all(|&a| s.iter().all(|&b| self.leq(a, b) || self.leq(b, a)))
    }

    /// Restriction to a subset of the carrier.
    pub fn restrict(&self, keep: &[u32]) -> Self {
        let keep: BTreeSet<u32> = keep.iter().copied().filter(|&v| self.contains(v)).collect();
        let mut less = Vec::new();
        for &a in &keep {
            for &b in &keep {
                if self.lt(a, b) {
                    less.push((a, b));
                }
            }
        }
        Self::new(keep.into_iter().collect(), &less).expect("restriction of a poset")
    }

    /// All orderings of the carrier (or of `Λ^{(k)}`) in which no later entry
    /// lies below an earlier one, sorted lexicographically.
    pub fn linear_extensions(&self, up_set_of: Option<u32>) -> Vec<Vec<u32>> {
        let items = match up_set_of {
            Some(k) => self.up(k),
            None => self.carrier.clone(),
        };
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut used = vec![false; items.len()];
        self.extend(&items, &mut used, &mut cur, &mut out);
        out
    }

    fn extend(&self, items: &[u32], used: &mut [bool], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == items.len() {
            out.push(cur.clone());
            return;
        }
        for (t, &v) in items.iter().enumerate() {
            if used[t] {
                continue;
            }
            // every unused element strictly below v must already be placed
            let ready = items
                .iter()
                .enumerate()
                .all(|(s, &w)| used[s] || s == t || !self.lt(w, v));
            if ready {
                used[t] = true;
                cur.push(v);
                self.extend(items, used, cur, out);
                cur.pop();
                used[t] = false;
            }
        }
    }
}
