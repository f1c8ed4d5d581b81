//! Digitally singular cubes: continuous maps from the vertex set `{0,1}^n`
//! (one-bit-flip adjacency) into an image.
//!
//! Vertex `k` of an `n`-cube is the point `(t_1, ..., t_n)` whose binary
//! encoding is `k`, with `t_1` the least significant bit. Vertices are stored
//! as point indices of the underlying image, so the derived ordering on cubes
//! is the lexicographic order on vertex arrays under the image's point order.

use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::image::{DigitalImage, DigitalMap, Point};
use crate::par::{self, EngineConfig};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SingularCube {
    dim: u8,
    vertices: SmallVec<[u32; 8]>,
}

/// Which end of the `i`-th coordinate a face fixes: front is `t_i = 0`, back is `t_i = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Front,
    Back,
}

impl SingularCube {
    /// Checked constructor from point indices of `image`.
    pub fn new(image: &DigitalImage, dim: usize, vertices: &[usize]) -> Result<Self> {
        if vertices.len() != 1usize << dim {
            return Err(Error::malformed(format!(
                "{dim}-cube needs {} vertices, got {}",
                1usize << dim,
                vertices.len()
            )));
        }
        if let Some(v) = vertices.iter().find(|&&v| v >= image.len()) {
            return Err(Error::domain(format!("vertex index {v} outside the image")));
        }
        let cube = SingularCube::from_raw(dim, vertices.iter().map(|&v| v as u32));
        for k in 0..vertices.len() {
            for bit in 0..dim {
                let j = k | (1 << bit);
                if j != k && !image.adjacent_or_equal(vertices[k], vertices[j]) {
                    return Err(Error::contract(format!(
                        "vertices {k} and {j} of the cube map to {} and {}, which are not adjacent",
                        image.point(vertices[k]),
                        image.point(vertices[j])
                    )));
                }
            }
        }
        Ok(cube)
    }

    pub fn from_points(image: &DigitalImage, dim: usize, points: &[Point]) -> Result<Self> {
        let idx = points
            .iter()
            .map(|p| image.require(p))
            .collect::<Result<Vec<_>>>()?;
        SingularCube::new(image, dim, &idx)
    }

    pub(crate) fn from_raw(dim: usize, vertices: impl IntoIterator<Item = u32>) -> Self {
        SingularCube {
            dim: dim as u8,
            vertices: vertices.into_iter().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn vertex(&self, k: usize) -> usize {
        self.vertices[k] as usize
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.vertices.iter().map(|&v| v as usize)
    }

    pub fn points(&self, image: &DigitalImage) -> Vec<Point> {
        self.vertices().map(|v| image.point(v).clone()).collect()
    }

    /// Independent of some coordinate `t_i`. 0-cubes are never degenerate.
    pub fn is_degenerate(&self) -> bool {
        (0..self.dim()).any(|bit| self.ignores(bit))
    }

    fn ignores(&self, bit: usize) -> bool {
        let b = 1usize << bit;
        (0..self.vertices.len())
            .filter(|k| k & b == 0)
            .all(|k| self.vertices[k] == self.vertices[k | b])
    }

    /// `A_i T` (front) or `B_i T` (back), for `1 <= i <= n`.
    pub fn face(&self, i: usize, side: Side) -> Result<SingularCube> {
        if i == 0 || i > self.dim() {
            return Err(Error::domain(format!(
                "face index {i} outside 1..={} for a {}-cube",
                self.dim(),
                self.dim()
            )));
        }
        Ok(self.face_unchecked(i, side))
    }

    pub(crate) fn face_unchecked(&self, i: usize, side: Side) -> SingularCube {
        let shift = i - 1;
        let low = (1usize << shift) - 1;
        let fixed = match side {
            Side::Front => 0,
            Side::Back => 1usize << shift,
        };
        let n = self.dim() - 1;
        SingularCube {
            dim: n as u8,
            vertices: (0..1usize << n)
                .map(|w| self.vertices[(w & low) | fixed | ((w >> shift) << (shift + 1))])
                .collect(),
        }
    }

    /// `T̄(t) = T(1 - t)` for a 1-cube.
    pub fn reverse(&self) -> Result<SingularCube> {
        if self.dim() != 1 {
            return Err(Error::domain("only 1-cubes have a reverse"));
        }
        Ok(SingularCube::from_raw(1, [self.vertices[1], self.vertices[0]]))
    }

    pub(crate) fn map_vertices(&self, f: &DigitalMap) -> SingularCube {
        SingularCube {
            dim: self.dim,
            vertices: self.vertices.iter().map(|&v| f.apply(v as usize) as u32).collect(),
        }
    }

    /// All vertices inside the masked subset.
    pub fn lies_in(&self, mask: &[bool]) -> bool {
        self.vertices.iter().all(|&v| mask[v as usize])
    }

    pub fn describe(&self, image: &DigitalImage) -> String {
        let pts: Vec<String> = self.points(image).iter().map(|p| p.to_string()).collect();
        format!("[{}]", pts.join(" "))
    }
}

impl fmt::Debug for SingularCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cube{}{:?}", self.dim, &self.vertices[..])
    }
}

/// `f ∘ T`; `f` must be continuous from `source` to `target`.
pub fn pushforward(
    f: &DigitalMap,
    cube: &SingularCube,
    source: &DigitalImage,
    target: &DigitalImage,
) -> Result<SingularCube> {
    f.require_continuous(source, target)?;
    Ok(cube.map_vertices(f))
}

/// Ordinal of a non-degenerate cube within the canonical enumeration of its degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeIndex(pub usize);

/// The non-degenerate `n`-cubes of an image in canonical order, with reverse lookup.
#[derive(Debug, Clone)]
pub struct CubeBasis {
    degree: usize,
    cubes: Vec<SingularCube>,
    index: HashMap<SingularCube, usize>,
}

impl CubeBasis {
    pub(crate) fn from_cubes(degree: usize, cubes: Vec<SingularCube>) -> Self {
        let index = cubes.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        CubeBasis {
            degree,
            cubes,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn cubes(&self) -> &[SingularCube] {
        &self.cubes
    }

    pub fn cube(&self, index: CubeIndex) -> &SingularCube {
        &self.cubes[index.0]
    }

    pub fn index_of(&self, cube: &SingularCube) -> Option<CubeIndex> {
        self.index.get(cube).copied().map(CubeIndex)
    }
}

pub(crate) fn check_cap(dim: usize, cfg: &EngineConfig) -> Result<()> {
    if dim > cfg.cube_cap {
        return Err(Error::Refused(format!(
            "cube dimension {dim} exceeds the configured cap of {}",
            cfg.cube_cap
        )));
    }
    Ok(())
}

/// Every non-degenerate `n`-cube of the image exactly once, in canonical order.
pub fn enumerate_cubes(image: &DigitalImage, dim: usize) -> Result<Vec<SingularCube>> {
    enumerate_cubes_with(image, dim, &EngineConfig::default())
}

pub fn enumerate_cubes_with(
    image: &DigitalImage,
    dim: usize,
    cfg: &EngineConfig,
) -> Result<Vec<SingularCube>> {
    check_cap(dim, cfg)?;
    if dim == 0 {
        return Ok((0..image.len() as u32)
            .map(|v| SingularCube::from_raw(0, [v]))
            .collect());
    }
    // Vertices are assigned in increasing binary order; every vertex k > 0 has its
    // lower bit-neighbours already placed, so candidates are pruned against them
    // and the depth-first walk emits cubes in lexicographic order.
    let per_root = par::map_range(cfg, image.len(), |root| {
        let mut out = Vec::new();
        let mut verts = vec![0u32; 1 << dim];
        verts[0] = root as u32;
        extend(image, dim, 1, &mut verts, &mut out);
        out
    });
    Ok(per_root.into_iter().flatten().collect())
}

fn extend(image: &DigitalImage, dim: usize, k: usize, verts: &mut [u32], out: &mut Vec<SingularCube>) {
    if k == verts.len() {
        let cube = SingularCube::from_raw(dim, verts.iter().copied());
        if !cube.is_degenerate() {
            out.push(cube);
        }
        return;
    }
    let lowest = k.trailing_zeros() as usize;
    let anchor = verts[k ^ (1 << lowest)] as usize;
    for &c in image.closed_neighbours(anchor) {
        let ok = (lowest + 1..dim)
            .filter(|b| k & (1 << b) != 0)
            .all(|b| image.adjacent_or_equal(verts[k ^ (1 << b)] as usize, c));
        if ok {
            verts[k] = c as u32;
            extend(image, dim, k + 1, verts, out);
        }
    }
}

/// Non-degenerate cubes of one degree, indexed.
pub fn cube_basis(image: &DigitalImage, dim: usize, cfg: &EngineConfig) -> Result<CubeBasis> {
    Ok(CubeBasis::from_cubes(dim, enumerate_cubes_with(image, dim, cfg)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Adjacency;

    fn pair() -> DigitalImage {
        DigitalImage::new(
            Adjacency::new(2, 1).unwrap(),
            [Point::from([0, 0]), Point::from([1, 0])],
        )
        .unwrap()
    }

    fn raw(dim: usize, v: &[u32]) -> SingularCube {
        SingularCube::from_raw(dim, v.iter().copied())
    }

    #[test]
    fn degeneracy_examples() {
        assert!(raw(1, &[0, 0]).is_degenerate());
        assert!(!raw(1, &[0, 1]).is_degenerate());
        // (v00, v10, v01, v11) = (a, b, a, b) ignores t_2
        assert!(raw(2, &[0, 1, 0, 1]).is_degenerate());
        assert!(!raw(0, &[3]).is_degenerate());
    }

    #[test]
    fn enumeration_examples() {
        let single = DigitalImage::new(Adjacency::new(2, 1).unwrap(), [Point::from([0, 0])]).unwrap();
        assert!(enumerate_cubes(&single, 1).unwrap().is_empty());
        assert_eq!(enumerate_cubes(&single, 0).unwrap().len(), 1);

        let x = pair();
        assert_eq!(enumerate_cubes(&x, 1).unwrap(), vec![raw(1, &[0, 1]), raw(1, &[1, 0])]);
        assert_eq!(enumerate_cubes(&x, 2).unwrap().len(), 10);
    }

    #[test]
    fn enumeration_is_sorted_and_independent_of_scheduling() {
        let pts = (0..3).flat_map(|x| (0..2).map(move |y| Point::from([x, y])));
        let x = DigitalImage::new(Adjacency::new(2, 2).unwrap(), pts).unwrap();
        let seq = enumerate_cubes_with(&x, 2, &EngineConfig::sequential()).unwrap();
        let par = enumerate_cubes_with(&x, 2, &EngineConfig::default()).unwrap();
        assert_eq!(seq, par);
        assert!(seq.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        let x = pair();
        let cfg = EngineConfig::default().with_cube_cap(2);
        assert!(matches!(enumerate_cubes_with(&x, 3, &cfg), Err(Error::Refused(_))));
    }

    #[test]
    fn face_examples() {
        let t = raw(1, &[4, 7]);
        assert_eq!(t.face(1, Side::Front).unwrap(), raw(0, &[4]));
        assert_eq!(t.face(1, Side::Back).unwrap(), raw(0, &[7]));
        let sq = raw(2, &[0, 1, 2, 3]); // (v00, v10, v01, v11)
        assert_eq!(sq.face(1, Side::Front).unwrap(), raw(1, &[0, 2]));
        assert_eq!(sq.face(2, Side::Front).unwrap(), raw(1, &[0, 1]));
        let f = sq.face(2, Side::Back).unwrap().face(1, Side::Front).unwrap();
        assert_eq!(f, raw(0, &[2]));
        assert!(matches!(sq.face(3, Side::Front), Err(Error::Domain(_))));
        assert!(matches!(sq.face(0, Side::Back), Err(Error::Domain(_))));
    }

    #[test]
    fn checked_constructor_rejects_discontinuity() {
        let pts = [Point::from([0, 0]), Point::from([2, 0])];
        let x = DigitalImage::new(Adjacency::new(2, 1).unwrap(), pts.clone()).unwrap();
        assert!(matches!(
            SingularCube::from_points(&x, 1, &pts),
            Err(Error::Contract(_))
        ));
        assert!(matches!(SingularCube::new(&x, 1, &[0]), Err(Error::Malformed(_))));
    }

    #[test]
    fn pushforward_examples() {
        let x = pair();
        let id = DigitalMap::identity(&x);
        for t in enumerate_cubes(&x, 2).unwrap() {
            assert_eq!(pushforward(&id, &t, &x, &x).unwrap(), t);
            let c = DigitalMap::constant(&x, &x, &Point::from([1, 0])).unwrap();
            assert!(pushforward(&c, &t, &x, &x).unwrap().is_degenerate());
        }
        let far = DigitalImage::new(
            Adjacency::new(2, 1).unwrap(),
            [Point::from([0, 0]), Point::from([2, 0])],
        )
        .unwrap();
        let stretch = DigitalMap::from_fn(&x, &far, |p| Point::from([2 * p.coords()[0], 0])).unwrap();
        let t = raw(1, &[0, 1]);
        assert!(matches!(pushforward(&stretch, &t, &x, &far), Err(Error::Contract(_))));
    }
}
