//! Reference implementation used only by tests: exhaustive cube search over
//! raw coordinate lists and a dense, textbook Smith normal form. Nothing here
//! calls into the engine, so agreement is evidence rather than tautology.
#![allow(dead_code)]

use dighom::{Adjacency, DigitalImage, Point};

pub fn image(l: usize, pts: &[[i64; 2]]) -> DigitalImage {
    DigitalImage::new(Adjacency::new(2, l).unwrap(), pts.iter().map(|&p| Point::from(p))).unwrap()
}

pub fn grid(l: usize, w: i64, h: i64) -> DigitalImage {
    let pts: Vec<[i64; 2]> = (0..h).flat_map(|y| (0..w).map(move |x| [x, y])).collect();
    image(l, &pts)
}

/// The 3×3 grid without its centre.
pub fn ring(l: usize) -> DigitalImage {
    let pts: Vec<[i64; 2]> = (0..3)
        .flat_map(|y| (0..3).map(move |x| [x, y]))
        .filter(|&p| p != [1, 1])
        .collect();
    image(l, &pts)
}

/// The ring traversed once counter-clockwise from the origin.
pub fn ring_loop_points() -> Vec<Point> {
    [[0, 0], [1, 0], [2, 0], [2, 1], [2, 2], [1, 2], [0, 2], [0, 1], [0, 0]]
        .into_iter()
        .map(Point::from)
        .collect()
}

/// Row cubes, column cubes and the matrix, all as raw vertex lists.
pub type DenseBoundary = (Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<Vec<i128>>);

pub struct Oracle {
    pub pts: Vec<Vec<i64>>,
    pub l: usize,
}

impl Oracle {
    pub fn new(x: &DigitalImage) -> Self {
        Oracle {
            pts: x.points().iter().map(|p| p.coords().to_vec()).collect(),
            l: x.adjacency().l(),
        }
    }

    pub fn close(&self, i: usize, j: usize) -> bool {
        let (p, q) = (&self.pts[i], &self.pts[j]);
        let mut moved = 0;
        for (a, b) in p.iter().zip(q) {
            match (a - b).abs() {
                0 => {}
                1 => moved += 1,
                _ => return false,
            }
        }
        moved <= self.l
    }

    fn continuous(&self, n: usize, v: &[usize]) -> bool {
        (0..v.len()).all(|w| (0..n).all(|b| self.close(v[w], v[w ^ (1 << b)])))
    }

    /// Every vertex map `{0,1}^n → X`, by counting in base `|X|`.
    pub fn brute_force_cubes(&self, n: usize) -> Vec<Vec<usize>> {
        let k = self.pts.len();
        let len = 1usize << n;
        let total = k.checked_pow(len as u32).expect("small search space");
        let mut out = Vec::new();
        for mut code in 0..total {
            let mut v = vec![0; len];
            for slot in v.iter_mut() {
                *slot = code % k;
                code /= k;
            }
            if self.continuous(n, &v) && !degenerate(n, &v) {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    /// The same set as `brute_force_cubes`, found by backtracking (vertex `w` is
    /// only tried against already placed neighbours `w ^ 2^b < w`).
    pub fn cubes(&self, n: usize) -> Vec<Vec<usize>> {
        let len = 1usize << n;
        let mut out = Vec::new();
        let mut v = vec![0usize; len];
        self.extend(n, 0, &mut v, &mut out);
        out.sort();
        out
    }

    fn extend(&self, n: usize, w: usize, v: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if w == v.len() {
            if !degenerate(n, v) {
                out.push(v.clone());
            }
            return;
        }
        for p in 0..self.pts.len() {
            if (0..n).filter(|b| w & (1 << b) != 0).all(|b| self.close(p, v[w ^ (1 << b)])) {
                v[w] = p;
                self.extend(n, w + 1, v, out);
            }
        }
    }

    /// Dense `∂_n` over the oracle bases; cubes entirely inside `subset` are dropped.
    pub fn boundary(&self, n: usize, subset: &[bool]) -> DenseBoundary {
        let keep = |c: &Vec<usize>| !c.iter().all(|&p| subset[p]);
        let cols: Vec<Vec<usize>> = self.cubes(n).into_iter().filter(keep).collect();
        let rows: Vec<Vec<usize>> = self.cubes(n - 1).into_iter().filter(keep).collect();
        let mut m = vec![vec![0i128; cols.len()]; rows.len()];
        for (c, cube) in cols.iter().enumerate() {
            for i in 1..=n {
                let sign: i128 = if i % 2 == 0 { 1 } else { -1 };
                for (bit, s) in [(0usize, sign), (1, -sign)] {
                    let f = face(n, cube, i, bit);
                    if degenerate(n - 1, &f) || !keep(&f) {
                        continue;
                    }
                    let r = rows.binary_search(&f).expect("face of a cube is a cube");
                    m[r][c] += s;
                }
            }
        }
        (rows, cols, m)
    }

    /// `(betti, torsion)` per degree `0..=n_max`, relative to `subset`.
    pub fn homology(&self, n_max: usize, subset: &[bool]) -> Vec<(usize, Vec<i128>)> {
        let size = |n: usize| {
            if n == 0 {
                subset.iter().filter(|s| !**s).count()
            } else {
                self.boundary(n, subset).1.len()
            }
        };
        let ranks_and_factors: Vec<(usize, Vec<i128>)> = (1..=n_max + 1)
            .map(|n| {
                let d = snf_diagonal(self.boundary(n, subset).2);
                (d.iter().filter(|x| **x != 0).count(), d)
            })
            .collect();
        (0..=n_max)
            .map(|n| {
                let rank_in = if n == 0 { 0 } else { ranks_and_factors[n - 1].0 };
                let (rank_out, factors) = &ranks_and_factors[n];
                let betti = size(n) - rank_in - rank_out;
                let torsion = factors.iter().copied().filter(|&d| d > 1).collect();
                (betti, torsion)
            })
            .collect()
    }

    pub fn absolute_homology(&self, n_max: usize) -> Vec<(usize, Vec<i128>)> {
        self.homology(n_max, &vec![false; self.pts.len()])
    }

    /// Connected components by union–find.
    pub fn component_count(&self) -> usize {
        let n = self.pts.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for i in 0..n {
            for j in 0..i {
                if self.close(i, j) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }
}

/// Vertex list of the face with coordinate `i` (1-based) fixed to `bit`.
pub fn face(n: usize, v: &[usize], i: usize, bit: usize) -> Vec<usize> {
    (0..1usize << (n - 1))
        .map(|w| {
            let low = w & ((1 << (i - 1)) - 1);
            let high = (w >> (i - 1)) << i;
            v[high | (bit << (i - 1)) | low]
        })
        .collect()
}

/// Independent of some coordinate: both faces in that direction agree.
pub fn degenerate(n: usize, v: &[usize]) -> bool {
    (1..=n).any(|i| face(n, v, i, 0) == face(n, v, i, 1))
}

/// Diagonal of the Smith normal form (length `min(rows, cols)`), by repeated
/// smallest-pivot elimination and a final divisibility repair.
pub fn snf_diagonal(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (r, row) in m.iter().enumerate().skip(t) {
                for (c, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(br, bc)| x.abs() < m[br][bc].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else { break };
            m.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }
            let p = m[t][t];
            let mut clean = true;
            for r in t + 1..rows {
                let q = m[r][t] / p;
                if q != 0 {
                    for c in t..cols {
                        m[r][c] -= q * m[t][c];
                    }
                }
                clean &= m[r][t] == 0;
            }
            for c in t + 1..cols {
                let q = m[t][c] / p;
                if q != 0 {
                    for r in t..rows {
                        m[r][c] -= q * m[r][t];
                    }
                }
                clean &= m[t][c] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold a row with a non-multiple into row t and retry.
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| m[r][c] % p != 0));
            match bad {
                Some(r) => {
                    for c in t..cols {
                        m[t][c] += m[r][c];
                    }
                }
                None => break,
            }
        }
    }
    (0..k).map(|t| m[t][t].abs()).collect()
}
