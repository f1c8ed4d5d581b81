//! Paths, loops and homotopies; the Hurewicz map and its surjectivity construction.

use std::collections::VecDeque;

use serde::Serialize;

use crate::chain::Chain;
use crate::cubes::{check_cap, enumerate_cubes_with, SingularCube};
use crate::error::{Error, Result};
use crate::homology::{homology_class, HomologyClassCoords, HomologyGroup};
use crate::image::{is_connected, DigitalImage, DigitalMap, Point};
use crate::par::{self, EngineConfig};

/// A κ-path `x_0, …, x_m` of point indices; consecutive points are equal or adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitalPath {
    vertices: Vec<usize>,
}

impl DigitalPath {
    pub fn new(image: &DigitalImage, points: &[Point]) -> Result<Self> {
        let idx = points.iter().map(|p| image.require(p)).collect::<Result<Vec<_>>>()?;
        Self::from_indices(image, idx)
    }

    pub fn from_indices(image: &DigitalImage, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::malformed("a path has at least one point"));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= image.len()) {
            return Err(Error::domain(format!("point index {v} outside the image")));
        }
        if let Some(w) = vertices.windows(2).find(|w| !image.adjacent_or_equal(w[0], w[1])) {
            return Err(Error::contract(format!(
                "consecutive points {} and {} are not adjacent",
                image.point(w[0]),
                image.point(w[1])
            )));
        }
        Ok(DigitalPath { vertices })
    }

    pub fn constant(image: &DigitalImage, p: &Point) -> Result<Self> {
        Ok(DigitalPath {
            vertices: vec![image.require(p)?],
        })
    }

    /// Number of steps `m`.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("non-empty")
    }

    pub fn is_loop(&self) -> bool {
        self.start() == self.end()
    }

    pub fn points(&self, image: &DigitalImage) -> Vec<Point> {
        self.vertices.iter().map(|&v| image.point(v).clone()).collect()
    }

    /// The trivial extension pausing once at position `k`.
    pub fn pause_at(&self, k: usize) -> Result<DigitalPath> {
        if k > self.len() {
            return Err(Error::domain(format!("position {k} beyond a path of length {}", self.len())));
        }
        let mut v = self.vertices.clone();
        v.insert(k, v[k]);
        Ok(DigitalPath { vertices: v })
    }

    /// The path with all constant steps removed.
    pub fn without_pauses(&self) -> DigitalPath {
        let mut v = self.vertices.clone();
        v.dedup();
        DigitalPath { vertices: v }
    }
}

/// `Σ_j f_j` with `f_j = (f(j-1), f(j))`; constant steps are degenerate and vanish.
pub fn subdivide(f: &DigitalPath) -> Chain {
    let mut c = Chain::zero(1);
    for w in f.vertices.windows(2) {
        c.add_term(SingularCube::from_raw(1, [w[0] as u32, w[1] as u32]), 1)
            .expect("unit coefficients on at most |f| terms");
    }
    c
}

/// `f ∗ g`; `g` must start where `f` ends.
pub fn concat(f: &DigitalPath, g: &DigitalPath) -> Result<DigitalPath> {
    if f.end() != g.start() {
        return Err(Error::domain("the second path does not start where the first ends"));
    }
    let mut v = f.vertices.clone();
    v.extend_from_slice(&g.vertices[1..]);
    Ok(DigitalPath { vertices: v })
}

pub fn reverse(f: &DigitalPath) -> DigitalPath {
    DigitalPath {
        vertices: f.vertices.iter().rev().copied().collect(),
    }
}

/// `φ([f]) = [Σ f_j]` in `H_1`.
pub fn hurewicz(f: &DigitalPath, h1: &HomologyGroup) -> Result<HomologyClassCoords> {
    if h1.degree() != 1 {
        return Err(Error::domain("the Hurewicz map lands in degree 1"));
    }
    if !f.is_loop() {
        return Err(Error::domain("the Hurewicz map is defined on loops"));
    }
    homology_class(&subdivide(f), h1)
}

/// A digital homotopy between maps, as its sequence of stages `H_0, …, H_m`.
#[derive(Debug, Clone)]
pub struct MapHomotopy {
    source: DigitalImage,
    target: DigitalImage,
    steps: Vec<DigitalMap>,
}

impl MapHomotopy {
    /// Checks every stage for continuity and every point track for being a path.
    pub fn new(source: &DigitalImage, target: &DigitalImage, steps: Vec<DigitalMap>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::contract("a homotopy has at least one stage"));
        }
        for (t, h) in steps.iter().enumerate() {
            h.require_continuous(source, target)
                .map_err(|e| Error::contract(format!("stage {t}: {e}")))?;
        }
        for (t, w) in steps.windows(2).enumerate() {
            if let Some(x) = (0..source.len()).find(|&x| !target.adjacent_or_equal(w[0].apply(x), w[1].apply(x))) {
                return Err(Error::contract(format!(
                    "the track of {} jumps between stages {t} and {}",
                    source.point(x),
                    t + 1
                )));
            }
        }
        Ok(MapHomotopy {
            source: source.clone(),
            target: target.clone(),
            steps,
        })
    }

    pub fn constant(source: &DigitalImage, target: &DigitalImage, f: DigitalMap) -> Result<Self> {
        Self::new(source, target, vec![f])
    }

    pub fn source(&self) -> &DigitalImage {
        &self.source
    }

    pub fn target(&self) -> &DigitalImage {
        &self.target
    }

    pub fn steps(&self) -> &[DigitalMap] {
        &self.steps
    }

    pub fn start(&self) -> &DigitalMap {
        &self.steps[0]
    }

    pub fn end(&self) -> &DigitalMap {
        self.steps.last().expect("non-empty")
    }

    /// `H(t, A) ⊂ B` for every stage.
    pub fn respects(&self, a: &[bool], b: &[bool]) -> bool {
        self.steps.iter().all(|h| h.maps_into(a, b))
    }

    /// The prism `Φ(T) = Σ_j F_j(id × T)`: the homotopy parameter is the first cube coordinate.
    pub fn prism_cube(&self, j: usize, cube: &SingularCube) -> SingularCube {
        let (lo, hi) = (&self.steps[j - 1], &self.steps[j]);
        let n = cube.dim();
        SingularCube::from_raw(
            n + 1,
            (0..1usize << (n + 1)).map(|w| {
                let stage = if w & 1 == 0 { lo } else { hi };
                stage.apply(cube.vertex(w >> 1)) as u32
            }),
        )
    }

    pub fn prism(&self, c: &Chain) -> Result<Chain> {
        let mut out = Chain::zero(c.degree() + 1);
        for (cube, k) in c.terms() {
            for j in 1..self.steps.len() {
                out.add_term(self.prism_cube(j, cube), k)?;
            }
        }
        Ok(out)
    }
}

/// Checks `g_# − f_# = ∂Φ_n + Φ_{n-1}∂` on every basis `n`-cube of the source.
pub fn verify_map_homotopy_prism(h: &MapHomotopy, n: usize) -> Result<bool> {
    verify_map_homotopy_prism_with(h, n, &EngineConfig::default())
}

pub fn verify_map_homotopy_prism_with(h: &MapHomotopy, n: usize, cfg: &EngineConfig) -> Result<bool> {
    check_cap(n + 1, cfg)?;
    let cubes = enumerate_cubes_with(&h.source, n, cfg)?;
    let checks = par::map(cfg, &cubes, |t| -> Result<bool> {
        let c = Chain::from_cube(t.clone());
        let lhs = c
            .pushforward_unchecked(h.end())?
            .sub(&c.pushforward_unchecked(h.start())?)?;
        let rhs = h.prism(&c)?.boundary()?.add(&h.prism(&c.boundary()?)?)?;
        Ok(lhs == rhs)
    });
    for ok in checks {
        if !ok? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A rectangular grid of points: row `j` is stage `j` of a homotopy of paths,
/// column `k` is the track of path position `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathHomotopyGrid {
    rows: Vec<Vec<Point>>,
    endpoints_fixed: bool,
}

impl PathHomotopyGrid {
    pub fn new(rows: Vec<Vec<Point>>, endpoints_fixed: bool) -> Result<Self> {
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if width == 0 {
            return Err(Error::malformed("a homotopy grid needs at least one row and one column"));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != width) {
            return Err(Error::malformed(format!(
                "row {r} has {} points, expected {width}",
                rows[r].len()
            )));
        }
        Ok(PathHomotopyGrid { rows, endpoints_fixed })
    }

    /// The homotopy from `T_1 ∗ T_2 ∗ T̄_3` to a trivial extension of `T_0`, where
    /// `T_0, T_1, T_2, T_3` are the faces `A_1T, A_2T, B_1T, B_2T` of a 2-cube.
    pub fn two_cube_faces(image: &DigitalImage, t: &SingularCube) -> Result<Self> {
        if t.dim() != 2 {
            return Err(Error::domain("expected a 2-cube"));
        }
        let p: Vec<Point> = t.points(image);
        let (v00, v10, v01, v11) = (p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone());
        Self::new(
            vec![
                vec![v00.clone(), v10, v11, v01.clone()],
                vec![v00.clone(), v00, v01.clone(), v01],
            ],
            true,
        )
    }

    pub fn rows(&self) -> &[Vec<Point>] {
        &self.rows
    }

    pub fn endpoints_fixed(&self) -> bool {
        self.endpoints_fixed
    }

    pub fn first_row(&self, image: &DigitalImage) -> Result<DigitalPath> {
        DigitalPath::new(image, &self.rows[0])
    }

    pub fn last_row(&self, image: &DigitalImage) -> Result<DigitalPath> {
        DigitalPath::new(image, self.rows.last().expect("non-empty"))
    }
}

/// Rows and columns are paths in the image; with fixed endpoints, the first and last columns are constant.
pub fn validate_path_homotopy(image: &DigitalImage, grid: &PathHomotopyGrid) -> Result<bool> {
    let Some(idx) = grid
        .rows
        .iter()
        .map(|r| r.iter().map(|p| image.index_of(p)).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
    else {
        return Ok(false);
    };
    let width = idx[0].len();
    let rows_ok = idx.iter().all(|r| r.windows(2).all(|w| image.adjacent_or_equal(w[0], w[1])));
    let cols_ok = idx
        .windows(2)
        .all(|w| (0..width).all(|k| image.adjacent_or_equal(w[0][k], w[1][k])));
    let ends_ok = !grid.endpoints_fixed || idx.iter().all(|r| r[0] == idx[0][0] && r[width - 1] == idx[0][width - 1]);
    Ok(rows_ok && cols_ok && ends_ok)
}

/// The 2-chain of grid cells, whose boundary is `subdivide(last row) − subdivide(first row)`.
pub fn homotopy_invariance_witness(image: &DigitalImage, grid: &PathHomotopyGrid) -> Result<Chain> {
    let fixed = PathHomotopyGrid {
        rows: grid.rows.clone(),
        endpoints_fixed: true,
    };
    if !validate_path_homotopy(image, &fixed)? {
        return Err(Error::contract("not a valid end-point fixing homotopy of paths"));
    }
    let idx: Vec<Vec<u32>> = grid
        .rows
        .iter()
        .map(|r| r.iter().map(|p| image.index_of(p).expect("validated") as u32).collect())
        .collect();
    let mut w = Chain::zero(2);
    for j in 1..idx.len() {
        for k in 1..idx[0].len() {
            let cell = SingularCube::from_raw(2, [idx[j - 1][k - 1], idx[j][k - 1], idx[j - 1][k], idx[j][k]]);
            w.add_term(cell, 1)?;
        }
    }
    Ok(w)
}

/// Breadth-first path from `from` to `to`, exploring neighbours in point order.
pub fn shortest_path(image: &DigitalImage, from: usize, to: usize) -> Option<DigitalPath> {
    let mut prev = vec![usize::MAX; image.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &y in image.closed_neighbours(x) {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    if prev[to] == usize::MAX {
        return None;
    }
    let mut v = vec![to];
    while *v.last().expect("non-empty") != from {
        v.push(prev[*v.last().expect("non-empty")]);
    }
    v.reverse();
    Some(DigitalPath { vertices: v })
}

/// A loop at `p` whose Hurewicz image is the class of the 1-cycle `z`.
///
/// Negative terms become reversed 1-cubes and multiplicities become repeats;
/// the resulting balanced edge multiset is split into closed trails (always
/// continuing along the smallest unused edge), and each trail is conjugated
/// by a breadth-first path from `p`.
pub fn cycle_to_loop(image: &DigitalImage, z: &Chain, p: &Point) -> Result<DigitalPath> {
    let base = image.require(p)?;
    if z.degree() != 1 && !z.is_zero() {
        return Err(Error::domain("expected a 1-chain"));
    }
    if !z.boundary()?.is_zero() {
        return Err(Error::contract("the chain is not a cycle"));
    }
    if !is_connected(image) {
        return Err(Error::Refused("loops realize cycles only in connected images".into()));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (cube, k) in z.terms() {
        let (a, b) = (cube.vertex(0), cube.vertex(1));
        if a >= image.len() || b >= image.len() {
            return Err(Error::domain("the chain refers to points outside the image"));
        }
        let e = if k > 0 { (a, b) } else { (b, a) };
        edges.extend(std::iter::repeat_n(e, k.unsigned_abs() as usize));
    }
    edges.sort_unstable();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); image.len()];
    for (i, (a, _)) in edges.iter().enumerate() {
        out_edges[*a].push(i);
    }
    let mut cursor = vec![0usize; image.len()];
    let mut used = vec![false; edges.len()];
    let mut result = DigitalPath { vertices: vec![base] };
    for first in 0..edges.len() {
        if used[first] {
            continue;
        }
        let start = edges[first].0;
        let mut trail = vec![start];
        let mut at = start;
        loop {
            let list = &out_edges[at];
            while cursor[at] < list.len() && used[list[cursor[at]]] {
                cursor[at] += 1;
            }
            let Some(&e) = list.get(cursor[at]) else { break };
            used[e] = true;
            at = edges[e].1;
            trail.push(at);
        }
        if at != start {
            return Err(Error::Inconsistent("an edge trail of a cycle did not close".into()));
        }
        let sigma = shortest_path(image, base, start).expect("connected image");
        let conj = concat(&concat(&sigma, &DigitalPath { vertices: trail })?, &reverse(&sigma))?;
        result = concat(&result, &conj)?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology;
    use crate::image::Adjacency;

    fn ring() -> DigitalImage {
        let pts = (0..3)
            .flat_map(|y| (0..3).map(move |x| [x, y]))
            .filter(|&p| p != [1, 1])
            .map(Point::from);
        DigitalImage::new(Adjacency::new(2, 1).unwrap(), pts).unwrap()
    }

    fn ring_loop(x: &DigitalImage) -> DigitalPath {
        let pts: Vec<Point> = [[0, 0], [1, 0], [2, 0], [2, 1], [2, 2], [1, 2], [0, 2], [0, 1], [0, 0]]
            .into_iter()
            .map(Point::from)
            .collect();
        DigitalPath::new(x, &pts).unwrap()
    }

    #[test]
    fn subdivision_examples() {
        let x = ring();
        let f = DigitalPath::new(&x, &[Point::from([0, 0]), Point::from([1, 0]), Point::from([1, 0])]).unwrap();
        let s = subdivide(&f);
        assert_eq!(s.len(), 1);
        let b = s.boundary().unwrap();
        assert_eq!(b.len(), 2);
        assert!(subdivide(&DigitalPath::constant(&x, &Point::from([0, 0])).unwrap()).is_zero());
        assert!(subdivide(&ring_loop(&x)).boundary().unwrap().is_zero());
    }

    #[test]
    fn path_algebra() {
        let x = ring();
        let p = |c: [i64; 2]| Point::from(c);
        let ab = DigitalPath::new(&x, &[p([0, 0]), p([1, 0])]).unwrap();
        let bc = DigitalPath::new(&x, &[p([1, 0]), p([2, 0])]).unwrap();
        let abc = concat(&ab, &bc).unwrap();
        assert_eq!(abc.points(&x), vec![p([0, 0]), p([1, 0]), p([2, 0])]);
        assert_eq!(reverse(&abc).points(&x), vec![p([2, 0]), p([1, 0]), p([0, 0])]);
        assert!(matches!(concat(&bc, &bc), Err(Error::Domain(_))));
        assert_eq!(subdivide(&abc), subdivide(&ab).add(&subdivide(&bc)).unwrap());
        assert_eq!(subdivide(&abc.pause_at(1).unwrap()), subdivide(&abc));
    }

    #[test]
    fn ring_loop_generates() {
        let x = ring();
        let h = homology(&x, 1).unwrap();
        let c = hurewicz(&ring_loop(&x), &h[1]).unwrap();
        assert_eq!(c.free_part.len(), 1);
        assert_eq!(c.free_part[0].abs(), 1);
        let f = ring_loop(&x);
        assert!(hurewicz(&concat(&f, &reverse(&f)).unwrap(), &h[1]).unwrap().is_zero());
        let back = cycle_to_loop(&x, &h[1].basis()[0], &Point::from([0, 0])).unwrap();
        assert_eq!(hurewicz(&back, &h[1]).unwrap().free_part, vec![1]);
    }

    #[test]
    fn two_cube_face_homotopy() {
        let x = ring();
        for t in crate::cubes::enumerate_cubes(&x, 2).unwrap() {
            let g = PathHomotopyGrid::two_cube_faces(&x, &t).unwrap();
            assert!(validate_path_homotopy(&x, &g).unwrap());
            let w = homotopy_invariance_witness(&x, &g).unwrap();
            let want = subdivide(&g.last_row(&x).unwrap())
                .sub(&subdivide(&g.first_row(&x).unwrap()))
                .unwrap();
            assert_eq!(w.boundary().unwrap(), want);
        }
    }

    #[test]
    fn slide_homotopy_prism() {
        let x = DigitalImage::new(Adjacency::new(2, 1).unwrap(), [Point::from([0, 0]), Point::from([1, 0])]).unwrap();
        let id = DigitalMap::identity(&x);
        let c = DigitalMap::constant(&x, &x, &Point::from([0, 0])).unwrap();
        let h = MapHomotopy::new(&x, &x, vec![id, c]).unwrap();
        for n in 0..=1 {
            assert!(verify_map_homotopy_prism(&h, n).unwrap());
        }
    }

    #[test]
    fn bad_grids() {
        let p = |c: [i64; 2]| Point::from(c);
        assert!(matches!(
            PathHomotopyGrid::new(vec![vec![p([0, 0])], vec![]], true),
            Err(Error::Malformed(_))
        ));
        let x = ring();
        let g = PathHomotopyGrid::new(vec![vec![p([0, 0]), p([1, 0])], vec![p([0, 0]), p([2, 0])]], false).unwrap();
        assert!(!validate_path_homotopy(&x, &g).unwrap());
    }
}
