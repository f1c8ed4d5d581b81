//! Seeded generators for randomized property campaigns. Every generator is a
//! pure function of the RNG state, so a seed reproduces its inputs exactly.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axioms::MapChain;
use crate::error::Result;
use crate::image::{closure_mask, components, interior_mask, Adjacency, DigitalImage, DigitalMap, Point, PointSet};
use crate::paths::{concat, shortest_path, DigitalPath, MapHomotopy};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random subset of the box `[0, side)^d` with at most `max_points` points.
pub fn random_image(rng: &mut SampleRng, adjacency: Adjacency, side: i64, max_points: usize) -> DigitalImage {
    let d = adjacency.dim();
    let total = (side as usize).pow(d as u32);
    let mut all: Vec<usize> = (0..total).collect();
    all.shuffle(rng);
    let count = rng.random_range(1..=max_points.min(total).max(1));
    let pts = all[..count].iter().map(|&k| box_point(k, side, d));
    DigitalImage::new(adjacency, pts).expect("points of one dimension")
}

fn box_point(mut k: usize, side: i64, d: usize) -> Point {
    let mut c = Vec::with_capacity(d);
    for _ in 0..d {
        c.push((k % side as usize) as i64);
        k /= side as usize;
    }
    Point::from(c)
}

/// A connected image of `n` points grown from the origin by random adjacent steps.
pub fn random_connected_image(rng: &mut SampleRng, adjacency: Adjacency, n: usize) -> DigitalImage {
    let d = adjacency.dim();
    let origin = Point::from(vec![0i64; d]);
    let mut pts: Vec<Point> = vec![origin.clone()];
    let mut set: PointSet = [origin].into_iter().collect();
    let offsets = unit_offsets(adjacency);
    while pts.len() < n {
        let from = pts.choose(rng).expect("non-empty").clone();
        let off = offsets.choose(rng).expect("κ > 0");
        let q = from.translate(off).expect("small coordinates");
        if set.insert(q.clone()) {
            pts.push(q);
        }
    }
    DigitalImage::new(adjacency, pts).expect("points of one dimension")
}

fn unit_offsets(adjacency: Adjacency) -> Vec<Vec<i64>> {
    let d = adjacency.dim();
    let mut out = Vec::new();
    for code in 0..3usize.pow(d as u32) {
        let mut c = code;
        let off: Vec<i64> = (0..d)
            .map(|_| {
                let v = (c % 3) as i64 - 1;
                c /= 3;
                v
            })
            .collect();
        let nz = off.iter().filter(|&&v| v != 0).count();
        if nz >= 1 && nz <= adjacency.l() {
            out.push(off);
        }
    }
    out
}

/// Places the parts in separate boxes along the first axis so no two parts are adjacent.
pub fn disjoint_union_parts(rng: &mut SampleRng, adjacency: Adjacency, parts: usize, max_points: usize) -> Vec<DigitalImage> {
    let d = adjacency.dim();
    let mut shift = 0i64;
    (0..parts)
        .map(|_| {
            let n = rng.random_range(1..=max_points.max(1));
            let part = random_connected_image(rng, adjacency, n);
            let min0 = part.points().iter().map(|p| p.coords()[0]).min().expect("non-empty");
            let max0 = part.points().iter().map(|p| p.coords()[0]).max().expect("non-empty");
            let mut off = vec![0i64; d];
            off[0] = shift - min0;
            shift += max0 - min0 + 3;
            let moved = part.points().iter().map(|p| p.translate(&off).expect("small coordinates"));
            DigitalImage::new(adjacency, moved.collect::<Vec<_>>()).expect("same dimension")
        })
        .collect()
}

/// One stage of random single-point moves: each moved point goes to a point equal
/// or adjacent to its current image, keeping the map continuous and, if given,
/// keeping `from_mask` inside `into_mask`. Every point moves at most once, so the
/// result is one homotopy step away from `f`.
pub fn perturb_map(
    rng: &mut SampleRng,
    source: &DigitalImage,
    target: &DigitalImage,
    f: &DigitalMap,
    moves: usize,
    pair: Option<(&[bool], &[bool])>,
) -> DigitalMap {
    let mut img: Vec<usize> = f.indices().to_vec();
    let mut moved = vec![false; source.len()];
    for _ in 0..moves {
        if source.is_empty() {
            break;
        }
        let x = rng.random_range(0..source.len());
        if moved[x] {
            continue;
        }
        let &y = target.closed_neighbours(img[x]).choose(rng).expect("closed neighbourhood");
        if let Some((a, b)) = pair {
            if a[x] && !b[y] {
                continue;
            }
        }
        let ok = source
            .closed_neighbours(x)
            .iter()
            .all(|&w| w == x || target.adjacent_or_equal(y, img[w]));
        if ok {
            img[x] = y;
            moved[x] = true;
        }
    }
    DigitalMap::from_indices(img, target.len()).expect("indices in range")
}

/// A random continuous map reached from `base` by `stages` rounds of moves.
pub fn random_map_from(
    rng: &mut SampleRng,
    source: &DigitalImage,
    target: &DigitalImage,
    base: &DigitalMap,
    stages: usize,
) -> DigitalMap {
    (0..stages).fold(base.clone(), |f, _| perturb_map(rng, source, target, &f, source.len(), None))
}

/// A random continuous map: starts from a constant map and wanders.
pub fn random_map(rng: &mut SampleRng, source: &DigitalImage, target: &DigitalImage) -> DigitalMap {
    let p = target.points().choose(rng).expect("non-empty target").clone();
    let c = DigitalMap::constant(source, target, &p).expect("point of the target");
    random_map_from(rng, source, target, &c, 4)
}

/// A random homotopy starting at `base` with `steps` stages after it.
pub fn random_homotopy(
    rng: &mut SampleRng,
    source: &DigitalImage,
    target: &DigitalImage,
    base: &DigitalMap,
    steps: usize,
    pair: Option<(&[bool], &[bool])>,
) -> Result<MapHomotopy> {
    let mut stages = vec![base.clone()];
    for _ in 0..steps {
        let next = perturb_map(rng, source, target, stages.last().expect("non-empty"), source.len(), pair);
        stages.push(next);
    }
    MapHomotopy::new(source, target, stages)
}

/// A random walk of `len` steps from `base`, closed up by a shortest path back.
pub fn random_loop(rng: &mut SampleRng, image: &DigitalImage, base: usize, len: usize) -> DigitalPath {
    let mut v = vec![base];
    for _ in 0..len {
        let &y = image
            .closed_neighbours(*v.last().expect("non-empty"))
            .choose(rng)
            .expect("closed neighbourhood");
        v.push(y);
    }
    let walk = DigitalPath::from_indices(image, v).expect("walk along neighbours");
    let back = shortest_path(image, walk.end(), base).expect("walk stays in one component");
    concat(&walk, &back).expect("matching endpoints")
}

/// A random subset of the image's points, each kept with probability `p`.
pub fn random_subset(rng: &mut SampleRng, image: &DigitalImage, p: f64) -> PointSet {
    image.points().iter().filter(|_| rng.random_bool(p)).cloned().collect()
}

/// `(X, A, W)` with `W ⊆ A`, `Cl(W) = W` and `Int(A) = A`: both are unions of components.
pub fn closed_open_excision_triple(rng: &mut SampleRng, adjacency: Adjacency, parts: usize, max_points: usize) -> (DigitalImage, PointSet, PointSet) {
    let pieces = disjoint_union_parts(rng, adjacency, parts, max_points);
    let x = DigitalImage::new(adjacency, pieces.iter().flat_map(|p| p.points().to_vec()).collect::<Vec<_>>())
        .expect("same dimension");
    let comps = components(&x);
    let mut a = PointSet::new();
    let mut w = PointSet::new();
    for c in comps {
        match rng.random_range(0..3) {
            0 => {}
            1 => a.extend(c),
            _ => {
                a.extend(c.iter().cloned());
                w.extend(c);
            }
        }
    }
    (x, a, w)
}

/// `(A, B)` covering `X` by `i`-fold interiors: `B = X − S` and `A = Cl^{2i}(S)` for a random seed set `S`.
pub fn interior_cover(rng: &mut SampleRng, image: &DigitalImage, i: usize) -> (PointSet, PointSet) {
    let s = random_subset(rng, image, 0.15);
    let s_mask = image.mask(&s).expect("subset");
    let a_mask = closure_mask(image, &s_mask, 2 * i);
    let b_mask: Vec<bool> = s_mask.iter().map(|m| !m).collect();
    debug_assert!({
        let ia = interior_mask(image, &a_mask, i);
        let ib = interior_mask(image, &b_mask, i);
        ia.iter().zip(&ib).all(|(x, y)| *x || *y)
    });
    (image.set_from_mask(&a_mask), image.set_from_mask(&b_mask))
}

/// Three connected images with random continuous maps `X → Y → Z` between them.
pub fn random_map_chain(rng: &mut SampleRng, adjacency: Adjacency, max_points: usize) -> MapChain {
    let part = |rng: &mut SampleRng| {
        let n = rng.random_range(1..=max_points.max(1));
        random_connected_image(rng, adjacency, n)
    };
    let (x, y, z) = (part(rng), part(rng), part(rng));
    let f = random_map(rng, &x, &y);
    let g = random_map(rng, &y, &z);
    MapChain { x, y, z, f, g }
}
