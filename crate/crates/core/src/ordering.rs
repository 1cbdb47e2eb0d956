use crate::error::{Error, Result};
use crate::tournament::{Tournament, Vertex};

/// A vertex ordering `x_1, ..., x_n`.
///
/// Accessors taking a `position` use 1-based positions; `as_slice` exposes
/// the underlying 0-based sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ordering {
    perm: Vec<Vertex>,
}

impl Ordering {
    pub fn new(perm: Vec<Vertex>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &v in &perm {
            if v >= perm.len() {
                return Err(Error::InvalidOrdering(format!("vertex {v} out of range for {} positions", perm.len())));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidOrdering(format!("vertex {v} appears twice")));
            }
        }
        Ok(Ordering { perm })
    }

    pub fn identity(n: usize) -> Self {
        Ordering { perm: (0..n).collect() }
    }

    pub fn reversed(n: usize) -> Self {
        Ordering { perm: (0..n).rev().collect() }
    }

    pub(crate) fn from_vec_unchecked(perm: Vec<Vertex>) -> Self {
        debug_assert!(Self::new(perm.clone()).is_ok());
        Ordering { perm }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Vertex at 1-based `position`.
    #[inline]
    pub fn at(&self, position: usize) -> Vertex {
        self.perm[position - 1]
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.perm
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.perm
    }

    /// 0-based position of every vertex.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.perm.len()];
        for (p, &v) in self.perm.iter().enumerate() {
            pos[v] = p;
        }
        pos
    }

    pub(crate) fn check_matches(&self, t: &Tournament) -> Result<()> {
        if self.perm.len() == t.n() {
            Ok(())
        } else {
            Err(Error::InvalidOrdering(format!(
                "ordering has {} positions, tournament has {} vertices",
                self.perm.len(),
                t.n()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_permutations() {
        assert!(Ordering::new(vec![0, 2, 2]).is_err());
        assert!(Ordering::new(vec![0, 3, 1]).is_err());
        let o = Ordering::new(vec![2, 0, 1]).unwrap();
        assert_eq!(o.at(1), 2);
        assert_eq!(o.positions(), vec![1, 2, 0]);
    }
}
