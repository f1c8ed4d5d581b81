//! Cubical chain complexes of images and image pairs.

use std::sync::Arc;

use crate::cubes::{check_cap, enumerate_cubes_with, CubeBasis, Side, SingularCube};
use crate::error::{Error, Result};
use crate::image::{DigitalImage, ImagePair};
use crate::linalg::IntMatrix;
use crate::par::{self, EngineConfig};
use crate::Chain;

/// Matrix of `∂_n : C_n → C_{n-1}` in the canonical bases, stored by sparse columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    degree: usize,
    rows: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl BoundaryMatrix {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &[(usize, i64)] {
        &self.columns[c]
    }

    pub(crate) fn columns(&self) -> &[Vec<(usize, i64)>] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        crate::linalg::sparse_get(&self.columns[c], r)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols());
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m.set(*r, c, *v);
            }
        }
        m
    }

    /// Whether `self ∘ next` vanishes, computed sparsely and exactly.
    pub fn composes_to_zero(&self, next: &BoundaryMatrix) -> Result<bool> {
        if next.rows != self.cols() {
            return Err(Error::contract("boundary matrices are not composable"));
        }
        for col in &next.columns {
            let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
            for (k, x) in col {
                for (r, y) in &self.columns[*k] {
                    let e = acc.entry(*r).or_insert(0);
                    *e = x
                        .checked_mul(*y)
                        .and_then(|p| e.checked_add(p))
                        .ok_or(Error::Overflow("boundary product"))?;
                }
            }
            if acc.values().any(|&v| v != 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub(crate) fn apply(&self, v: &[(usize, i64)]) -> Result<Vec<(usize, i64)>> {
        let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
        for (k, x) in v {
            for (r, y) in &self.columns[*k] {
                let e = acc.entry(*r).or_insert(0);
                *e = x
                    .checked_mul(*y)
                    .and_then(|p| e.checked_add(p))
                    .ok_or(Error::Overflow("boundary product"))?;
            }
        }
        Ok(acc.into_iter().filter(|(_, v)| *v != 0).collect())
    }
}

fn boundary_column(cube: &SingularCube, rows: &CubeBasis, skip: Option<&[bool]>) -> Vec<(usize, i64)> {
    let n = cube.dim();
    let mut entries: Vec<(usize, i64)> = Vec::with_capacity(2 * n);
    for i in 1..=n {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for (side, s) in [(Side::Front, sign), (Side::Back, -sign)] {
            let face = cube.face_unchecked(i, side);
            if face.is_degenerate() || skip.is_some_and(|m| face.lies_in(m)) {
                continue;
            }
            let r = rows
                .index_of(&face)
                .expect("faces of basis cubes are basis cubes")
                .0;
            entries.push((r, s));
        }
    }
    entries.sort_unstable();
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(entries.len());
    for (r, s) in entries {
        match out.last_mut() {
            Some((lr, ls)) if *lr == r => *ls += s,
            _ => out.push((r, s)),
        }
    }
    out.retain(|(_, s)| *s != 0);
    out
}

fn build_matrix(
    degree: usize,
    cols: &CubeBasis,
    rows: &CubeBasis,
    skip: Option<&[bool]>,
    cfg: &EngineConfig,
) -> BoundaryMatrix {
    BoundaryMatrix {
        degree,
        rows: rows.len(),
        columns: par::map(cfg, cols.cubes(), |c| boundary_column(c, rows, skip)),
    }
}

/// `∂_n` of an image over the canonical cube bases.
pub fn boundary_matrix(image: &DigitalImage, n: usize) -> Result<BoundaryMatrix> {
    boundary_matrix_with(image, n, &EngineConfig::default())
}

pub fn boundary_matrix_with(image: &DigitalImage, n: usize, cfg: &EngineConfig) -> Result<BoundaryMatrix> {
    if n == 0 {
        return Err(Error::domain("boundary matrices start in degree 1"));
    }
    check_cap(n, cfg)?;
    let rows = CubeBasis::from_cubes(n - 1, enumerate_cubes_with(image, n - 1, cfg)?);
    let cols = CubeBasis::from_cubes(n, enumerate_cubes_with(image, n, cfg)?);
    Ok(build_matrix(n, &cols, &rows, None, cfg))
}

/// Chain groups `C_0..=C_top` with their boundary maps, for an image or (as the
/// quotient by the subimage) for a pair. Relative chain groups use the basis of
/// cubes not lying entirely in the subset.
#[derive(Debug)]
pub struct ChainComplex {
    image: DigitalImage,
    subset: Option<Vec<bool>>,
    bases: Vec<CubeBasis>,
    /// `boundaries[n - 1]` is `∂_n`.
    boundaries: Vec<BoundaryMatrix>,
    config: EngineConfig,
}

impl ChainComplex {
    pub fn absolute(image: &DigitalImage, top: usize, cfg: &EngineConfig) -> Result<Arc<Self>> {
        Self::build(image, None, top, cfg)
    }

    pub fn relative(pair: &ImagePair, top: usize, cfg: &EngineConfig) -> Result<Arc<Self>> {
        Self::build(pair.image(), Some(pair.mask().to_vec()), top, cfg)
    }

    fn build(image: &DigitalImage, subset: Option<Vec<bool>>, top: usize, cfg: &EngineConfig) -> Result<Arc<Self>> {
        check_cap(top, cfg)?;
        let mut bases = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let mut cubes = enumerate_cubes_with(image, n, cfg)?;
            if let Some(m) = &subset {
                cubes.retain(|c| !c.lies_in(m));
            }
            bases.push(CubeBasis::from_cubes(n, cubes));
        }
        let skip = subset.as_deref();
        let boundaries = (1..=top)
            .map(|n| build_matrix(n, &bases[n], &bases[n - 1], skip, cfg))
            .collect();
        Ok(Arc::new(ChainComplex {
            image: image.clone(),
            subset,
            bases,
            boundaries,
            config: *cfg,
        }))
    }

    pub fn image(&self) -> &DigitalImage {
        &self.image
    }

    /// Mask of the subimage for a relative complex.
    pub fn subset(&self) -> Option<&[bool]> {
        self.subset.as_deref()
    }

    pub fn is_relative(&self) -> bool {
        self.subset.is_some()
    }

    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn basis(&self, n: usize) -> Result<&CubeBasis> {
        self.bases
            .get(n)
            .ok_or_else(|| Error::domain(format!("degree {n} is above the complex's top degree {}", self.top_degree())))
    }

    /// `∂_n` for `1 <= n <= top`.
    pub fn boundary(&self, n: usize) -> Result<&BoundaryMatrix> {
        if n == 0 {
            return Err(Error::domain("boundary matrices start in degree 1"));
        }
        self.boundaries
            .get(n - 1)
            .ok_or_else(|| Error::domain(format!("degree {n} is above the complex's top degree {}", self.top_degree())))
    }

    /// Coordinates of a chain in this complex (relative complexes first drop cubes in the subset).
    pub(crate) fn coords(&self, chain: &Chain) -> Result<Vec<(usize, i64)>> {
        let basis = self.basis(chain.degree())?;
        match &self.subset {
            Some(m) => chain.project_off(m).to_coords(basis),
            None => chain.to_coords(basis),
        }
    }

    pub(crate) fn chain(&self, n: usize, coords: &[(usize, i64)]) -> Result<Chain> {
        Ok(Chain::from_coords(self.basis(n)?, coords))
    }

    /// Whether the chain is a cycle of this complex (relative: boundary lies in the subset).
    pub fn is_cycle(&self, chain: &Chain) -> Result<bool> {
        if chain.degree() == 0 {
            return Ok(true);
        }
        let v = self.coords(chain)?;
        Ok(self.boundary(chain.degree())?.apply(&v)?.is_empty())
    }

    pub(crate) fn check_chain_image(&self, chain: &Chain) -> Result<()> {
        let n = self.image.len();
        for (c, _) in chain.terms() {
            if c.vertices().any(|v| v >= n) {
                return Err(Error::domain("chain refers to points outside the image"));
            }
        }
        Ok(())
    }
}
