//! Integer chains on non-degenerate cubes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cubes::{CubeBasis, Side, SingularCube};
use crate::error::{Error, Result};
use crate::image::{DigitalImage, DigitalMap, Point};

/// A finite integer combination of non-degenerate `n`-cubes. Degenerate cubes
/// are zero in the chain group and never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<SingularCube, i64>,
}

fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("chain coefficients"))
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_cube(cube: SingularCube) -> Self {
        let mut c = Chain::zero(cube.dim());
        if !cube.is_degenerate() {
            c.terms.insert(cube, 1);
        }
        c
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (SingularCube, i64)>) -> Result<Self> {
        let mut c = Chain::zero(degree);
        for (cube, k) in terms {
            c.add_term(cube, k)?;
        }
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SingularCube, i64)> + '_ {
        self.terms.iter().map(|(c, k)| (c, *k))
    }

    pub fn coefficient(&self, cube: &SingularCube) -> i64 {
        self.terms.get(cube).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, cube: SingularCube, k: i64) -> Result<()> {
        if cube.dim() != self.degree {
            return Err(Error::domain(format!(
                "cannot add a {}-cube to a {}-chain",
                cube.dim(),
                self.degree
            )));
        }
        if k == 0 || cube.is_degenerate() {
            return Ok(());
        }
        let e = self.terms.entry(cube).or_insert(0);
        *e = checked_add(*e, k)?;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
        Ok(())
    }

    pub fn add(&self, other: &Chain) -> Result<Chain> {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain> {
        self.add_scaled(other, -1)
    }

    /// `self + k · other`.
    pub fn add_scaled(&self, other: &Chain, k: i64) -> Result<Chain> {
        if other.degree != self.degree && !other.is_zero() {
            return Err(Error::domain(format!(
                "degree mismatch: {} vs {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (cube, v) in &other.terms {
            let kv = v.checked_mul(k).ok_or(Error::Overflow("chain coefficients"))?;
            out.add_term(cube.clone(), kv)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Result<Chain> {
        Chain::zero(self.degree).add_scaled(self, k)
    }

    pub fn neg(&self) -> Result<Chain> {
        self.scale(-1)
    }

    /// `∂ = Σ_i (-1)^i (A_i − B_i)` extended linearly; zero in degree 0.
    pub fn boundary(&self) -> Result<Chain> {
        if self.degree == 0 {
            return Ok(Chain::zero(0));
        }
        let mut out = Chain::zero(self.degree - 1);
        for (cube, k) in &self.terms {
            for i in 1..=self.degree {
                let s = if i % 2 == 0 { *k } else { -k };
                out.add_term(cube.face_unchecked(i, Side::Front), s)?;
                out.add_term(cube.face_unchecked(i, Side::Back), -s)?;
            }
        }
        Ok(out)
    }

    /// `f_#`: push every cube forward along a continuous map; degenerate images vanish.
    pub fn pushforward(&self, f: &DigitalMap, source: &DigitalImage, target: &DigitalImage) -> Result<Chain> {
        f.require_continuous(source, target)?;
        self.pushforward_unchecked(f)
    }

    pub(crate) fn pushforward_unchecked(&self, f: &DigitalMap) -> Result<Chain> {
        let mut out = Chain::zero(self.degree);
        for (cube, k) in &self.terms {
            out.add_term(cube.map_vertices(f), *k)?;
        }
        Ok(out)
    }

    /// Every cube of the chain lies in the masked subset.
    pub fn lies_in(&self, mask: &[bool]) -> bool {
        self.terms.keys().all(|c| c.lies_in(mask))
    }

    /// Drops the cubes lying entirely in the masked subset (the projection to the relative chain group).
    pub fn project_off(&self, mask: &[bool]) -> Chain {
        Chain {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| !c.lies_in(mask))
                .map(|(c, k)| (c.clone(), *k))
                .collect(),
        }
    }

    /// Re-expresses a chain over `from` as a chain over `to` by point coordinates.
    pub fn transfer(&self, from: &DigitalImage, to: &DigitalImage) -> Result<Chain> {
        let mut out = Chain::zero(self.degree);
        for (cube, k) in &self.terms {
            let pts = cube.points(from);
            let idx = pts.iter().map(|p| to.require(p)).collect::<Result<Vec<_>>>()?;
            out.add_term(SingularCube::new(to, self.degree, &idx)?, *k)?;
        }
        Ok(out)
    }

    pub(crate) fn to_coords(&self, basis: &CubeBasis) -> Result<Vec<(usize, i64)>> {
        let mut v = self
            .terms
            .iter()
            .map(|(c, k)| {
                basis
                    .index_of(c)
                    .map(|i| (i.0, *k))
                    .ok_or_else(|| Error::domain(format!("cube {c:?} is not a basis cube of the complex")))
            })
            .collect::<Result<Vec<_>>>()?;
        v.sort_unstable();
        Ok(v)
    }

    pub(crate) fn from_coords(basis: &CubeBasis, coords: &[(usize, i64)]) -> Chain {
        Chain {
            degree: basis.degree(),
            terms: coords
                .iter()
                .filter(|(_, k)| *k != 0)
                .map(|(i, k)| (basis.cubes()[*i].clone(), *k))
                .collect(),
        }
    }

    /// Terms as `(coefficient, vertex points)`, for reporting.
    pub fn describe(&self, image: &DigitalImage) -> Vec<ChainTerm> {
        self.terms
            .iter()
            .map(|(c, k)| ChainTerm {
                coefficient: *k,
                vertices: c.points(image),
            })
            .collect()
    }
}

impl std::fmt::Debug for Chain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Chain{}", self.degree)?;
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainTerm {
    pub coefficient: i64,
    pub vertices: Vec<Point>,
}

pub fn boundary_chain(c: &Chain) -> Result<Chain> {
    c.boundary()
}
