//! Finitely generated abelian groups in the form `Z^b ⊕ Z/d_1 ⊕ … ⊕ Z/d_t`
//! and homomorphisms between them given by integer matrices on generators.
//! Subgroup questions are answered in the covering lattice `Z^{b+t}`, where the
//! relations `d_i e_{b+i}` are always adjoined.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, reduce_columns, smith_normal_form, Int, IntMatrix, Lattice, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupShape {
    pub betti: usize,
    /// Invariant factors `> 1`, each dividing the next.
    pub torsion: Vec<i64>,
}

impl GroupShape {
    pub fn new(betti: usize, torsion: Vec<i64>) -> Self {
        GroupShape { betti, torsion }
    }

    pub fn trivial() -> Self {
        GroupShape::new(0, Vec::new())
    }

    pub fn generators(&self) -> usize {
        self.betti + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators() == 0
    }

    /// Shape of the direct sum, with torsion brought back to invariant-factor form.
    pub fn direct_sum(&self, other: &GroupShape) -> Result<GroupShape> {
        let all: Vec<i64> = self.torsion.iter().chain(&other.torsion).copied().collect();
        Ok(GroupShape::new(self.betti + other.betti, invariant_factors(&all)?))
    }

    fn relations<T: Int>(&self) -> Vec<SparseVec<T>> {
        self.torsion
            .iter()
            .enumerate()
            .map(|(i, &d)| vec![(self.betti + i, T::from(d))])
            .collect()
    }
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Invariant factors (`> 1`) of `⊕ Z/a_i`.
pub fn invariant_factors(orders: &[i64]) -> Result<Vec<i64>> {
    let n = orders.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, &a) in orders.iter().enumerate() {
        m.set(i, i, a);
    }
    let s = smith_normal_form(&m)?;
    Ok(s.torsion())
}

/// Reduces the torsion rows of a homomorphism matrix into `[0, d)`.
pub fn reduce_map(m: &IntMatrix, target: &GroupShape) -> Result<IntMatrix> {
    if m.rows() != target.generators() {
        return Err(Error::contract("matrix rows do not match the target group"));
    }
    let mut out = m.clone();
    for (i, &d) in target.torsion.iter().enumerate() {
        let r = target.betti + i;
        for c in 0..m.cols() {
            out.set(r, c, m.get(r, c).rem_euclid(d));
        }
    }
    Ok(out)
}

/// `g ∘ f` reduced in the target of `g`.
pub fn compose(g: &IntMatrix, f: &IntMatrix, target: &GroupShape) -> Result<IntMatrix> {
    reduce_map(&g.mul(f)?, target)
}

fn check_shape(m: &IntMatrix, source: &GroupShape, target: &GroupShape) -> Result<()> {
    if m.rows() != target.generators() || m.cols() != source.generators() {
        return Err(Error::contract(format!(
            "a {}x{} matrix is not a map {} -> {}",
            m.rows(),
            m.cols(),
            source,
            target
        )));
    }
    Ok(())
}

fn columns<T: Int>(m: &IntMatrix) -> Vec<SparseVec<T>> {
    (0..m.cols())
        .map(|c| {
            (0..m.rows())
                .filter(|&r| m.get(r, c) != 0)
                .map(|r| (r, T::from(m.get(r, c))))
                .collect()
        })
        .collect()
}

fn to_i64_cols<T: Int>(v: &[SparseVec<T>]) -> Result<Vec<SparseVec<i64>>> {
    v.iter().map(|x| linalg::sparse_to_i64(x)).collect()
}

/// Generators, in `Z^{source}`, of the preimage of the target relations.
fn kernel_gens<T: Int>(m: &IntMatrix, source: &GroupShape, target: &GroupShape) -> Result<Vec<SparseVec<T>>> {
    let mut cols: Vec<SparseVec<T>> = columns(m);
    cols.extend(target.relations::<T>());
    let cols64 = to_i64_cols(&cols)?;
    let (_, ker) = reduce_columns::<T>(&cols64, true)?;
    let g = source.generators();
    let mut gens: Vec<SparseVec<T>> = ker
        .into_iter()
        .map(|v| v.into_iter().filter(|(i, _)| *i < g).collect::<SparseVec<T>>())
        .filter(|v| !v.is_empty())
        .collect();
    gens.extend(source.relations::<T>());
    Ok(gens)
}

fn image_gens<T: Int>(m: &IntMatrix, target: &GroupShape) -> Vec<SparseVec<T>> {
    let mut gens: Vec<SparseVec<T>> = columns(m);
    gens.extend(target.relations::<T>());
    gens
}

fn lattice<T: Int>(gens: &[SparseVec<T>]) -> Result<Lattice<T>> {
    let mut l = Lattice::new();
    for g in gens {
        l.insert(g.clone())?;
    }
    Ok(l)
}

fn all_in<T: Int>(gens: &[SparseVec<T>], l: &Lattice<T>) -> Result<bool> {
    for g in gens {
        if !l.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Comparison of `im(incoming)` and `ker(outgoing)` inside the middle group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessCheck {
    pub image_rank: usize,
    pub kernel_rank: usize,
    pub image_in_kernel: bool,
    pub kernel_in_image: bool,
}

impl ExactnessCheck {
    pub fn is_exact(&self) -> bool {
        self.image_in_kernel && self.kernel_in_image && self.image_rank == self.kernel_rank
    }
}

fn exactness_t<T: Int>(
    incoming: &IntMatrix,
    outgoing: &IntMatrix,
    middle: &GroupShape,
    target: &GroupShape,
) -> Result<ExactnessCheck> {
    let im = image_gens::<T>(incoming, middle);
    let ker = kernel_gens::<T>(outgoing, middle, target)?;
    let (li, lk) = (lattice(&im)?, lattice(&ker)?);
    Ok(ExactnessCheck {
        image_rank: li.rank(),
        kernel_rank: lk.rank(),
        image_in_kernel: all_in(&im, &lk)?,
        kernel_in_image: all_in(&ker, &li)?,
    })
}

/// Exactness of `F → G → H` at `G`, with maps given on generators.
pub fn exactness(
    incoming: &IntMatrix,
    outgoing: &IntMatrix,
    source: &GroupShape,
    middle: &GroupShape,
    target: &GroupShape,
) -> Result<ExactnessCheck> {
    check_shape(incoming, source, middle)?;
    check_shape(outgoing, middle, target)?;
    linalg::with_escalation(
        || exactness_t::<i64>(incoming, outgoing, middle, target),
        || exactness_t::<BigInt>(incoming, outgoing, middle, target),
    )
}

fn iso_t<T: Int>(m: &IntMatrix, source: &GroupShape, target: &GroupShape) -> Result<bool> {
    let ker = kernel_gens::<T>(m, source, target)?;
    let rel = lattice(&source.relations::<T>())?;
    if !all_in(&ker, &rel)? {
        return Ok(false);
    }
    let im = lattice(&image_gens::<T>(m, target))?;
    let units: Vec<SparseVec<T>> = (0..target.generators()).map(|i| vec![(i, T::one())]).collect();
    all_in(&units, &im)
}

/// Whether the homomorphism given by `m` is bijective. Both shapes are expected
/// in invariant-factor form, so unequal shapes short-circuit to `false`.
pub fn is_isomorphism(m: &IntMatrix, source: &GroupShape, target: &GroupShape) -> Result<bool> {
    check_shape(m, source, target)?;
    if source != target {
        return Ok(false);
    }
    is_bijective(m, source, target)
}

/// Bijectivity for arbitrary presentations (torsion orders need not form a
/// divisibility chain), as for a direct sum of groups listed part by part.
pub fn is_bijective(m: &IntMatrix, source: &GroupShape, target: &GroupShape) -> Result<bool> {
    check_shape(m, source, target)?;
    linalg::with_escalation(
        || iso_t::<i64>(m, source, target),
        || iso_t::<BigInt>(m, source, target),
    )
}

/// Whether the homomorphism is zero.
pub fn is_zero_map(m: &IntMatrix, target: &GroupShape) -> Result<bool> {
    Ok(reduce_map(m, target)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn display_and_sums() {
        let g = GroupShape::new(2, vec![2]);
        assert_eq!(g.to_string(), "Z^2 + Z/2");
        assert_eq!(GroupShape::trivial().to_string(), "0");
        let s = GroupShape::new(0, vec![2]).direct_sum(&GroupShape::new(1, vec![3])).unwrap();
        assert_eq!(s, GroupShape::new(1, vec![6]));
    }

    #[test]
    fn short_exact_sequence_of_doubling() {
        // 0 -> Z --2--> Z --> Z/2 -> 0
        let z = GroupShape::new(1, vec![]);
        let z2 = GroupShape::new(0, vec![2]);
        let zero = GroupShape::trivial();
        let double = mat(vec![vec![2]]);
        let quot = mat(vec![vec![1]]);
        assert!(exactness(&double, &quot, &z, &z, &z2).unwrap().is_exact());
        let into = IntMatrix::zeros(1, 0);
        assert!(exactness(&into, &double, &zero, &z, &z).unwrap().is_exact());
        let out = IntMatrix::zeros(0, 1);
        assert!(exactness(&quot, &out, &z, &z2, &zero).unwrap().is_exact());
        // tripling instead of doubling is not exact at the middle
        assert!(!exactness(&mat(vec![vec![3]]), &quot, &z, &z, &z2).unwrap().is_exact());
    }

    #[test]
    fn isomorphisms() {
        let z2 = GroupShape::new(2, vec![]);
        assert!(is_isomorphism(&mat(vec![vec![1, 1], vec![0, 1]]), &z2, &z2).unwrap());
        assert!(!is_isomorphism(&mat(vec![vec![2, 0], vec![0, 1]]), &z2, &z2).unwrap());
        let t = GroupShape::new(0, vec![3]);
        assert!(is_isomorphism(&mat(vec![vec![2]]), &t, &t).unwrap());
        assert!(!is_isomorphism(&mat(vec![vec![3]]), &t, &t).unwrap());
    }
}
