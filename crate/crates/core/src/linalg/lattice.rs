use std::collections::{BTreeMap, HashMap};


use super::{add, axpy, div_rem, ext_gcd, lin_comb, neg, Int, SparseVec};
use crate::error::Result;

/// A sublattice of `Z^m` kept in echelon form: each stored vector has a distinct
/// pivot (its largest index). Optionally carries a tag vector per stored vector
/// that undergoes the same unimodular combinations, which turns insertion into
/// column reduction with a tracked transform.
#[derive(Debug, Clone)]
pub(crate) struct Lattice<T> {
    pivots: HashMap<usize, usize>,
    vectors: Vec<SparseVec<T>>,
    tags: Vec<SparseVec<T>>,
}

impl<T: Int> Default for Lattice<T> {
    fn default() -> Self {
        Lattice {
            pivots: HashMap::new(),
            vectors: Vec::new(),
            tags: Vec::new(),
        }
    }
}

impl<T: Int> Lattice<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Basis vectors by slot. Slots are stable: a slot's vector may be replaced
    /// during later insertions but the slot keeps its number.
    pub fn vectors(&self) -> &[SparseVec<T>] {
        &self.vectors
    }

    pub fn insert(&mut self, v: SparseVec<T>) -> Result<bool> {
        let before = self.rank();
        self.insert_tagged(v, Vec::new())?;
        Ok(self.rank() > before)
    }

    /// Adds `v` to the generating set. Returns the tag combination when `v`
    /// reduces to zero, i.e. a relation among the inserted vectors.
    pub fn insert_tagged(&mut self, mut v: SparseVec<T>, mut tag: SparseVec<T>) -> Result<Option<SparseVec<T>>> {
        loop {
            let Some((p, vp)) = v.last().cloned() else {
                return Ok(Some(tag));
            };
            let Some(&slot) = self.pivots.get(&p) else {
                self.pivots.insert(p, self.vectors.len());
                self.vectors.push(v);
                self.tags.push(tag);
                return Ok(None);
            };
            let wp = self.vectors[slot].last().expect("stored vectors are non-zero").1.clone();
            let (q, r) = div_rem(&vp, &wp)?;
            if r.is_zero() {
                let nq = neg(&q)?;
                v = axpy(&v, &nq, &self.vectors[slot])?;
                tag = axpy(&tag, &nq, &self.tags[slot])?;
            } else {
                let (g, s, t) = ext_gcd(&wp, &vp)?;
                let (wg, vg) = (wp.div_floor(&g), vp.div_floor(&g));
                let w = &self.vectors[slot];
                let tw = &self.tags[slot];
                let new_w = lin_comb(&s, w, &t, &v)?;
                let new_tw = lin_comb(&s, tw, &t, &tag)?;
                let nvg = neg(&vg)?;
                let new_v = lin_comb(&wg, &v, &nvg, w)?;
                let new_tag = lin_comb(&wg, &tag, &nvg, tw)?;
                self.vectors[slot] = new_w;
                self.tags[slot] = new_tw;
                v = new_v;
                tag = new_tag;
            }
        }
    }

    /// Coordinates of `v` in the slot basis, or `None` when `v` is not in the lattice.
    pub fn solve(&self, v: &[(usize, T)]) -> Result<Option<SparseVec<T>>> {
        let mut v = v.to_vec();
        let mut coeffs: BTreeMap<usize, T> = BTreeMap::new();
        while let Some((p, vp)) = v.last().cloned() {
            let Some(&slot) = self.pivots.get(&p) else {
                return Ok(None);
            };
            let w = &self.vectors[slot];
            let (q, r) = div_rem(&vp, &w.last().expect("non-zero").1)?;
            if !r.is_zero() {
                return Ok(None);
            }
            v = axpy(&v, &neg(&q)?, w)?;
            let e = coeffs.entry(slot).or_insert_with(T::zero);
            *e = add(e, &q)?;
        }
        Ok(Some(coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect()))
    }

    pub fn contains(&self, v: &[(usize, T)]) -> Result<bool> {
        Ok(self.solve(v)?.is_some())
    }

    /// The same lattice with entries converted to another integer type.
    pub fn convert<U: Int>(&self) -> Lattice<U> {
        let conv = |vs: &Vec<SparseVec<T>>| -> Vec<SparseVec<U>> {
            vs.iter().map(|v| super::convert_sparse(v)).collect()
        };
        Lattice {
            pivots: self.pivots.clone(),
            vectors: conv(&self.vectors),
            tags: conv(&self.tags),
        }
    }
}

/// Column reduction of a matrix given by sparse columns. Returns the echelon
/// lattice spanned by the columns and, when `track` is set, a basis of the
/// integer kernel expressed in column coordinates.
pub(crate) fn reduce_columns<T: Int>(
    columns: &[SparseVec<i64>],
    track: bool,
) -> Result<(Lattice<T>, Vec<SparseVec<T>>)> {
    let mut lattice = Lattice::new();
    let mut kernel = Vec::new();
    for (c, col) in columns.iter().enumerate() {
        let v = super::sparse_from_i64(col);
        let tag = if track { vec![(c, T::one())] } else { Vec::new() };
        if let Some(rel) = lattice.insert_tagged(v, tag)? {
            if track {
                kernel.push(rel);
            }
        }
    }
    Ok((lattice, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_combination_keeps_lattice() {
        let mut l: Lattice<i64> = Lattice::new();
        assert!(l.insert(vec![(0, 1), (1, 4)]).unwrap());
        assert!(l.insert(vec![(1, 6)]).unwrap());
        // lattice spanned by (1,4) and (0,6): contains (0,2)? 6 and 4 -> gcd 2 at pivot 1
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&[(0, 1), (1, 4)]).unwrap());
        assert!(l.contains(&[(1, 6)]).unwrap());
        assert!(l.contains(&[(0, 1), (1, -2)]).unwrap());
        assert!(!l.contains(&[(1, 1)]).unwrap());
        assert!(!l.contains(&[(1, 2)]).unwrap());
        assert!(!l.contains(&[(2, 1)]).unwrap());
    }

    #[test]
    fn kernel_of_boundary_of_an_edge_pair() {
        // columns (-1, 1) and (1, -1): kernel spanned by (1, 1)
        let cols = vec![vec![(0, -1), (1, 1)], vec![(0, 1), (1, -1)]];
        let (lat, ker) = reduce_columns::<i64>(&cols, true).unwrap();
        assert_eq!(lat.rank(), 1);
        assert_eq!(ker, vec![vec![(0, 1), (1, 1)]]);
    }

    #[test]
    fn kernel_is_saturated() {
        // single row (2, 3): kernel is spanned by (3, -2), not a multiple
        let cols = vec![vec![(0, 2)], vec![(0, 3)]];
        let (lat, ker) = reduce_columns::<i64>(&cols, true).unwrap();
        assert_eq!(lat.rank(), 1);
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        let a = super::super::sparse_get(k, 0);
        let b = super::super::sparse_get(k, 1);
        assert_eq!(2 * a + 3 * b, 0);
        assert_eq!(num_integer::Integer::gcd(&a, &b), 1);
    }
}
