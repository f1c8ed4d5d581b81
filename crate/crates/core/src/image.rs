//! Digital images: finite point sets in `Z^d` with a `c_l` adjacency, continuous
//! maps between them, connectivity, and the iterated interior / closure operators.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A lattice point of `Z^d`. Points order lexicographically by coordinate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(SmallVec<[i64; 4]>);

impl Point {
    pub fn new(coords: impl IntoIterator<Item = i64>) -> Self {
        Point(coords.into_iter().collect())
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinate-wise sum with `offset`, failing rather than wrapping on overflow.
    pub fn translate(&self, offset: &[i64]) -> Result<Point> {
        if offset.len() != self.dim() {
            return Err(Error::malformed(format!(
                "offset of length {} applied to point of dimension {}",
                offset.len(),
                self.dim()
            )));
        }
        self.0
            .iter()
            .zip(offset)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("point translation")))
            .collect::<Result<SmallVec<_>>>()
            .map(Point)
    }

    /// Reorders coordinates: coordinate `k` of the result is coordinate `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Point {
        Point(perm.iter().map(|&k| self.0[k]).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(c: [i64; N]) -> Self {
        Point::new(c)
    }
}

impl From<Vec<i64>> for Point {
    fn from(c: Vec<i64>) -> Self {
        Point::new(c)
    }
}

pub type PointSet = BTreeSet<Point>;

/// Number of `c_l`-neighbours of a lattice point in `Z^d`: `sum_{k=1..l} 2^k C(d,k)`.
pub fn kappa(dim: usize, l: usize) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for k in 1..=l.min(dim) {
        binom = binom * (dim - k + 1) as u64 / k as u64;
        total += (1u64 << k) * binom;
    }
    total
}

/// The `c_l` adjacency on `Z^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Adjacency {
    dim: usize,
    l: usize,
}

impl Adjacency {
    pub fn new(dim: usize, l: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::malformed("ambient dimension must be positive"));
        }
        if l == 0 || l > dim {
            return Err(Error::malformed(format!(
                "adjacency parameter l={l} outside 1..={dim}"
            )));
        }
        Ok(Adjacency { dim, l })
    }

    /// Resolves a conventional neighbour count (4, 8, 6, 18, 26, ...) in dimension `dim`.
    pub fn from_kappa(dim: usize, kappa_value: u64) -> Result<Self> {
        (1..=dim)
            .find(|&l| kappa(dim, l) == kappa_value)
            .map(|l| Adjacency { dim, l })
            .ok_or_else(|| {
                Error::malformed(format!(
                    "no c_l adjacency in dimension {dim} has {kappa_value} neighbours"
                ))
            })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn kappa(&self) -> u64 {
        kappa(self.dim, self.l)
    }

    fn check(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::malformed(format!(
                "point {p} has dimension {}, adjacency expects {}",
                p.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    fn adjacent_unchecked(&self, p: &Point, q: &Point) -> bool {
        let mut differing = 0;
        for (a, b) in p.coords().iter().zip(q.coords()) {
            match a.abs_diff(*b) {
                0 => {}
                1 => differing += 1,
                _ => return false,
            }
        }
        differing >= 1 && differing <= self.l
    }
}

/// `c_l` adjacency test. Irreflexive and symmetric.
pub fn are_adjacent(p: &Point, q: &Point, adj: Adjacency) -> Result<bool> {
    adj.check(p)?;
    adj.check(q)?;
    Ok(adj.adjacent_unchecked(p, q))
}

struct ImageData {
    adjacency: Adjacency,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    // closed neighbourhoods (the point itself included), sorted by point order
    closed: Vec<Vec<usize>>,
}

/// A finite digital image. Points are kept in lexicographic order, and a point's
/// position in that order is its index everywhere in the crate. Cloning is cheap.
#[derive(Clone)]
pub struct DigitalImage(Arc<ImageData>);

impl DigitalImage {
    pub fn new(adjacency: Adjacency, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let set: PointSet = points.into_iter().collect();
        for p in &set {
            adjacency.check(p)?;
        }
        let points: Vec<Point> = set.into_iter().collect();
        let index: HashMap<Point, usize> =
            points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let closed = build_neighbourhoods(adjacency, &points, &index);
        Ok(DigitalImage(Arc::new(ImageData {
            adjacency,
            points,
            index,
            closed,
        })))
    }

    pub fn empty(adjacency: Adjacency) -> Self {
        DigitalImage::new(adjacency, std::iter::empty()).expect("empty image is well formed")
    }

    pub fn adjacency(&self) -> Adjacency {
        self.0.adjacency
    }

    pub fn dim(&self) -> usize {
        self.0.adjacency.dim
    }

    pub fn len(&self) -> usize {
        self.0.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.0.points
    }

    pub fn point(&self, index: usize) -> &Point {
        &self.0.points[index]
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.0.index.get(p).copied()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.0.index.contains_key(p)
    }

    pub fn point_set(&self) -> PointSet {
        self.0.points.iter().cloned().collect()
    }

    /// Indices of the closed neighbourhood of point `index`, ascending.
    pub fn closed_neighbours(&self, index: usize) -> &[usize] {
        &self.0.closed[index]
    }

    /// Whether points `i` and `j` are equal or adjacent.
    pub fn adjacent_or_equal(&self, i: usize, j: usize) -> bool {
        self.0.closed[i].binary_search(&j).is_ok()
    }

    pub fn degree(&self, index: usize) -> usize {
        self.0.closed[index].len() - 1
    }

    pub(crate) fn require(&self, p: &Point) -> Result<usize> {
        self.index_of(p)
            .ok_or_else(|| Error::domain(format!("point {p} is not in the image")))
    }

    /// Membership mask over point indices for a subset of the image.
    pub fn mask(&self, subset: &PointSet) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.len()];
        for p in subset {
            mask[self.require(p)?] = true;
        }
        Ok(mask)
    }

    pub fn set_from_mask(&self, mask: &[bool]) -> PointSet {
        mask.iter()
            .zip(self.points())
            .filter(|(m, _)| **m)
            .map(|(_, p)| p.clone())
            .collect()
    }

    /// The subset as an image in its own right, with the same adjacency.
    pub fn subimage(&self, subset: &PointSet) -> Result<DigitalImage> {
        self.mask(subset)?;
        DigitalImage::new(self.adjacency(), subset.iter().cloned())
    }

    pub fn same_as(&self, other: &DigitalImage) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.adjacency() == other.adjacency() && self.points() == other.points())
    }
}

impl PartialEq for DigitalImage {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for DigitalImage {}

impl fmt::Debug for DigitalImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitalImage")
            .field("adjacency", &self.0.adjacency)
            .field("points", &self.0.points)
            .finish()
    }
}

fn build_neighbourhoods(
    adjacency: Adjacency,
    points: &[Point],
    index: &HashMap<Point, usize>,
) -> Vec<Vec<usize>> {
    let d = adjacency.dim;
    let offsets = 3usize.checked_pow(d as u32);
    let by_offsets = matches!(offsets, Some(o) if o <= points.len().max(1) * 4 || o <= 729);
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut closed = if by_offsets {
                offset_neighbours(adjacency, p, index)
            } else {
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| adjacency.adjacent_unchecked(p, q))
                    .map(|(j, _)| j)
                    .collect()
            };
            closed.push(i);
            closed.sort_unstable();
            closed
        })
        .collect()
}

fn offset_neighbours(adjacency: Adjacency, p: &Point, index: &HashMap<Point, usize>) -> Vec<usize> {
    let d = adjacency.dim;
    let mut out = Vec::new();
    let mut digits = vec![-1i8; d];
    let mut q = p.clone();
    'outer: loop {
        let nonzero = digits.iter().filter(|&&x| x != 0).count();
        if nonzero >= 1 && nonzero <= adjacency.l {
            let mut representable = true;
            for k in 0..d {
                match p.0[k].checked_add(digits[k] as i64) {
                    Some(c) => q.0[k] = c,
                    None => representable = false,
                }
            }
            if representable {
                if let Some(&j) = index.get(&q) {
                    out.push(j);
                }
            }
        }
        for k in 0..d {
            if digits[k] < 1 {
                digits[k] += 1;
                continue 'outer;
            }
            digits[k] = -1;
        }
        break;
    }
    out
}

/// `N(x, X)`: the points of `X` equal or adjacent to `x`.
pub fn neighborhood(image: &DigitalImage, x: &Point) -> Result<PointSet> {
    let i = image.require(x)?;
    Ok(image
        .closed_neighbours(i)
        .iter()
        .map(|&j| image.point(j).clone())
        .collect())
}

/// Component label for every point index, labels numbered in order of first appearance.
pub(crate) fn component_labels(image: &DigitalImage) -> (Vec<usize>, usize) {
    let n = image.len();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for &j in image.closed_neighbours(i) {
                if label[j] == usize::MAX {
                    label[j] = count;
                    queue.push_back(j);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Maximal connected subsets, ordered by their lexicographically smallest member.
pub fn components(image: &DigitalImage) -> Vec<PointSet> {
    let (label, count) = component_labels(image);
    let mut parts = vec![PointSet::new(); count];
    for (i, &c) in label.iter().enumerate() {
        parts[c].insert(image.point(i).clone());
    }
    parts
}

pub fn is_connected(image: &DigitalImage) -> bool {
    component_labels(image).1 <= 1
}

fn interior_step(image: &DigitalImage, set: &[bool]) -> Vec<bool> {
    (0..image.len())
        .map(|x| set[x] && image.closed_neighbours(x).iter().all(|&y| set[y]))
        .collect()
}

fn closure_step(image: &DigitalImage, set: &[bool]) -> Vec<bool> {
    (0..image.len())
        .map(|x| image.closed_neighbours(x).iter().any(|&y| set[y]))
        .collect()
}

pub(crate) fn interior_mask(image: &DigitalImage, mask: &[bool], times: usize) -> Vec<bool> {
    let mut cur = mask.to_vec();
    for _ in 0..times {
        let next = interior_step(image, &cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

pub(crate) fn closure_mask(image: &DigitalImage, mask: &[bool], times: usize) -> Vec<bool> {
    let mut cur = mask.to_vec();
    for _ in 0..times {
        let next = closure_step(image, &cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// `Int^i(A)`: `A` for `i = 0`, else `Int(Int^{i-1}(A))` with `Int(S) = {x in S : N(x) ⊆ S}`.
pub fn interior(image: &DigitalImage, set: &PointSet, times: usize) -> Result<PointSet> {
    let mask = image.mask(set)?;
    Ok(image.set_from_mask(&interior_mask(image, &mask, times)))
}

/// `Cl^i(A)`: `A` for `i = 0`, else `Cl(Cl^{i-1}(A))` with `Cl(S) = {x in X : N(x) ∩ S ≠ ∅}`.
pub fn closure(image: &DigitalImage, set: &PointSet, times: usize) -> Result<PointSet> {
    let mask = image.mask(set)?;
    Ok(image.set_from_mask(&closure_mask(image, &mask, times)))
}

/// Whether `X = Int^i(A) ∪ Int^i(B)`. Cross-checked against the equivalent
/// `Cl^i(X - B) ⊆ Int^i(A)`; a disagreement is reported as an engine fault.
pub fn covers_by_interiors(
    image: &DigitalImage,
    a: &PointSet,
    b: &PointSet,
    times: usize,
) -> Result<bool> {
    let a_mask = image.mask(a)?;
    let b_mask = image.mask(b)?;
    let int_a = interior_mask(image, &a_mask, times);
    let int_b = interior_mask(image, &b_mask, times);
    let covered = int_a.iter().zip(&int_b).all(|(x, y)| *x || *y);
    let complement_b: Vec<bool> = b_mask.iter().map(|m| !m).collect();
    let cl = closure_mask(image, &complement_b, times);
    let nested = cl.iter().zip(&int_a).all(|(c, i)| !*c || *i);
    if covered != nested {
        return Err(Error::Inconsistent(format!(
            "interior cover ({covered}) disagrees with closure containment ({nested}) at i={times}"
        )));
    }
    Ok(covered)
}

/// A digital image together with a subset `A ⊆ X` carrying the same adjacency.
#[derive(Clone, Debug)]
pub struct ImagePair {
    image: DigitalImage,
    subset: PointSet,
    mask: Vec<bool>,
}

impl ImagePair {
    pub fn new(image: DigitalImage, subset: PointSet) -> Result<Self> {
        let mask = image.mask(&subset)?;
        Ok(ImagePair {
            image,
            subset,
            mask,
        })
    }

    pub fn absolute(image: DigitalImage) -> Self {
        let mask = vec![false; image.len()];
        ImagePair {
            image,
            subset: PointSet::new(),
            mask,
        }
    }

    pub fn image(&self) -> &DigitalImage {
        &self.image
    }

    pub fn subset(&self) -> &PointSet {
        &self.subset
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn subset_image(&self) -> DigitalImage {
        DigitalImage::new(self.image.adjacency(), self.subset.iter().cloned())
            .expect("subset of a valid image")
    }
}

/// A total function between the point sets of two images, stored by point index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitalMap {
    images: Vec<usize>,
    target_len: usize,
}

impl DigitalMap {
    /// Builds the map `p ↦ f(p)`; fails if some value falls outside `target`.
    pub fn from_fn(
        source: &DigitalImage,
        target: &DigitalImage,
        mut f: impl FnMut(&Point) -> Point,
    ) -> Result<Self> {
        let images = source
            .points()
            .iter()
            .map(|p| {
                let q = f(p);
                target
                    .index_of(&q)
                    .ok_or_else(|| Error::domain(format!("map sends {p} to {q}, outside the target")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DigitalMap {
            images,
            target_len: target.len(),
        })
    }

    pub fn from_pairs(
        source: &DigitalImage,
        target: &DigitalImage,
        pairs: &BTreeMap<Point, Point>,
    ) -> Result<Self> {
        for p in pairs.keys() {
            source.require(p)?;
        }
        let mut missing = None;
        let map = DigitalMap::from_fn(source, target, |p| match pairs.get(p) {
            Some(q) => q.clone(),
            None => {
                missing.get_or_insert_with(|| p.clone());
                p.clone()
            }
        });
        if let Some(p) = missing {
            return Err(Error::domain(format!("map is not defined at {p}")));
        }
        map
    }

    pub fn from_indices(images: Vec<usize>, target_len: usize) -> Result<Self> {
        if let Some(bad) = images.iter().find(|&&j| j >= target_len) {
            return Err(Error::domain(format!("target index {bad} out of range")));
        }
        Ok(DigitalMap { images, target_len })
    }

    pub fn identity(image: &DigitalImage) -> Self {
        DigitalMap {
            images: (0..image.len()).collect(),
            target_len: image.len(),
        }
    }

    pub fn constant(source: &DigitalImage, target: &DigitalImage, value: &Point) -> Result<Self> {
        let j = target.require(value)?;
        Ok(DigitalMap {
            images: vec![j; source.len()],
            target_len: target.len(),
        })
    }

    /// Inclusion of `sub` into `image`; every point of `sub` must lie in `image`.
    pub fn inclusion(sub: &DigitalImage, image: &DigitalImage) -> Result<Self> {
        DigitalMap::from_fn(sub, image, |p| p.clone())
    }

    pub fn source_len(&self) -> usize {
        self.images.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn apply(&self, index: usize) -> usize {
        self.images[index]
    }

    pub fn indices(&self) -> &[usize] {
        &self.images
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &DigitalMap) -> Result<DigitalMap> {
        if then.source_len() != self.target_len {
            return Err(Error::malformed("composed maps do not share an image"));
        }
        Ok(DigitalMap {
            images: self.images.iter().map(|&j| then.images[j]).collect(),
            target_len: then.target_len,
        })
    }

    pub fn point_image(&self, source: &DigitalImage, target: &DigitalImage, p: &Point) -> Result<Point> {
        let i = source.require(p)?;
        Ok(target.point(self.images[i]).clone())
    }

    pub(crate) fn check_shape(&self, source: &DigitalImage, target: &DigitalImage) -> Result<()> {
        if self.images.len() != source.len() || self.target_len != target.len() {
            return Err(Error::malformed(format!(
                "map of shape {}→{} used between images of sizes {}→{}",
                self.images.len(),
                self.target_len,
                source.len(),
                target.len()
            )));
        }
        Ok(())
    }

    /// Requires the map to be continuous between the given images.
    pub(crate) fn require_continuous(&self, source: &DigitalImage, target: &DigitalImage) -> Result<()> {
        self.check_shape(source, target)?;
        if let Some((x0, x1)) = self.discontinuity(source, target) {
            return Err(Error::contract(format!(
                "map is not continuous: {} ~ {} but images {} and {} are neither equal nor adjacent",
                source.point(x0),
                source.point(x1),
                target.point(self.images[x0]),
                target.point(self.images[x1])
            )));
        }
        Ok(())
    }

    fn discontinuity(&self, source: &DigitalImage, target: &DigitalImage) -> Option<(usize, usize)> {
        for x0 in 0..source.len() {
            for &x1 in source.closed_neighbours(x0) {
                if x1 > x0 && !target.adjacent_or_equal(self.images[x0], self.images[x1]) {
                    return Some((x0, x1));
                }
            }
        }
        None
    }

    /// Whether the map sends every point of `from` into `into` (maps of pairs).
    pub fn maps_into(&self, from: &[bool], into: &[bool]) -> bool {
        from.iter()
            .enumerate()
            .all(|(i, &inside)| !inside || into[self.images[i]])
    }
}

/// Whether adjacent points of `source` go to equal or adjacent points of `target`.
pub fn is_continuous(f: &DigitalMap, source: &DigitalImage, target: &DigitalImage) -> Result<bool> {
    f.check_shape(source, target)?;
    Ok(f.discontinuity(source, target).is_none())
}
