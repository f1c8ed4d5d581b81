//! Executable witnesses for the homology-theory axioms and the excision
//! theorems. Each check returns an [`AxiomReport`]: per-degree diagnostics plus
//! a verdict, where a failing verdict always carries the inputs needed to rerun it.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cubes::{enumerate_cubes_with, SingularCube};
use crate::error::{Error, Result};
use crate::groups::{self, exactness, is_bijective, is_isomorphism, reduce_map, GroupShape};
use crate::homology::{connecting_hom, homology, induced_map, relative_homology, HomologyGroup};
use crate::image::{
    are_adjacent, closure_mask, interior_mask, DigitalImage, DigitalMap, ImagePair, Point, PointSet,
};
use crate::linalg::IntMatrix;
use crate::par::EngineConfig;
use crate::paths::{verify_map_homotopy_prism, MapHomotopy};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One diagnostic. `holds` is `None` for observations the theorem makes no claim about.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub degree: Option<usize>,
    pub check: String,
    pub holds: Option<bool>,
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub inputs: Value,
    pub verdict: Verdict,
    pub details: Vec<Detail>,
    pub counterexample: Option<Value>,
    pub seed: Option<u64>,
}

impl AxiomReport {
    fn start(axiom: &str, inputs: Value) -> Self {
        AxiomReport {
            axiom: axiom.to_string(),
            inputs,
            verdict: Verdict::Pass,
            details: Vec::new(),
            counterexample: None,
            seed: None,
        }
    }

    fn check(&mut self, degree: Option<usize>, check: &str, holds: bool, data: Value) {
        self.details.push(Detail {
            degree,
            check: check.to_string(),
            holds: Some(holds),
            data,
        });
    }

    fn note(&mut self, degree: Option<usize>, check: &str, data: Value) {
        self.details.push(Detail {
            degree,
            check: check.to_string(),
            holds: None,
            data,
        });
    }

    fn finish(mut self) -> Self {
        let failed: Vec<&Detail> = self.failures().collect();
        if !failed.is_empty() {
            self.counterexample = Some(json!({ "inputs": self.inputs, "failed": failed }));
            self.verdict = Verdict::Fail;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Detail> + '_ {
        self.details.iter().filter(|d| d.holds == Some(false))
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

pub(crate) fn points_json<'a>(points: impl IntoIterator<Item = &'a Point>) -> Value {
    Value::Array(points.into_iter().map(|p| json!(p.coords())).collect())
}

fn image_json(x: &DigitalImage) -> Value {
    let a = x.adjacency();
    json!({ "dim": a.dim(), "l": a.l(), "points": points_json(x.points()) })
}

fn map_json(f: &DigitalMap, source: &DigitalImage, target: &DigitalImage) -> Value {
    Value::Array(
        source
            .points()
            .iter()
            .enumerate()
            .map(|(i, p)| json!([p.coords(), target.point(f.apply(i)).coords()]))
            .collect(),
    )
}

fn shapes_json(h: &[HomologyGroup]) -> Value {
    json!(h.iter().map(|g| g.shape()).collect::<Vec<_>>())
}

fn reduced(m: IntMatrix, target: &HomologyGroup) -> Result<IntMatrix> {
    reduce_map(&m, &target.shape())
}

/// Homotopic maps (of pairs, when `pair = (A, B)` is given) induce equal maps
/// on absolute and relative homology; the prism identity is checked alongside.
pub fn check_homotopy_axiom(
    h: &MapHomotopy,
    pair: Option<(&PointSet, &PointSet)>,
    n_max: usize,
) -> Result<AxiomReport> {
    let (x, y) = (h.source(), h.target());
    let masks = match pair {
        Some((a, b)) => {
            let (am, bm) = (x.mask(a)?, y.mask(b)?);
            if !h.respects(&am, &bm) {
                return Err(Error::malformed("the homotopy does not keep A inside B at every stage"));
            }
            Some((a, b))
        }
        None => None,
    };
    let mut inputs = json!({
        "source": image_json(x),
        "target": image_json(y),
        "stages": h.steps().iter().map(|f| map_json(f, x, y)).collect::<Vec<_>>(),
    });
    if let Some((a, b)) = masks {
        inputs["a"] = points_json(a);
        inputs["b"] = points_json(b);
    }
    let mut r = AxiomReport::start("homotopy", inputs);
    let (f, g) = (h.start(), h.end());

    let (hx, hy) = (homology(x, n_max)?, homology(y, n_max)?);
    for n in 0..=n_max {
        let mf = reduced(induced_map(f, &hx[n], &hy[n])?, &hy[n])?;
        let mg = reduced(induced_map(g, &hx[n], &hy[n])?, &hy[n])?;
        r.check(Some(n), "f_* = g_* on absolute homology", mf == mg, json!({ "f": mf, "g": mg }));
    }
    if let Some((a, b)) = masks {
        let px = ImagePair::new(x.clone(), a.clone())?;
        let py = ImagePair::new(y.clone(), b.clone())?;
        let (rx, ry) = (relative_homology(&px, n_max)?, relative_homology(&py, n_max)?);
        for n in 0..=n_max {
            let mf = reduced(induced_map(f, &rx[n], &ry[n])?, &ry[n])?;
            let mg = reduced(induced_map(g, &rx[n], &ry[n])?, &ry[n])?;
            r.check(Some(n), "f_* = g_* on relative homology", mf == mg, json!({ "f": mf, "g": mg }));
        }
    }
    for n in 0..=n_max {
        let ok = verify_map_homotopy_prism(h, n)?;
        r.check(Some(n), "g_# - f_# = ∂Φ + Φ∂ on basis cubes", ok, Value::Null);
    }
    Ok(r.finish())
}

/// How far the excision hypothesis `Cl^i(W) ⊆ Int^i(A)` reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExcisionDepth {
    /// Largest `i` for which the containment holds (`0`: none with `i >= 1`).
    Finite(usize),
    /// The iterates stabilize with the containment holding, so it holds for every `i`.
    Unbounded,
}

impl ExcisionDepth {
    /// Whether isomorphism in degree `n` is guaranteed (`n < i + 1`, with `i >= 1`).
    pub fn covers(&self, n: usize) -> bool {
        match *self {
            ExcisionDepth::Finite(i) => i >= 1 && n <= i,
            ExcisionDepth::Unbounded => true,
        }
    }
}

pub fn excision_depth(x: &DigitalImage, a: &PointSet, w: &PointSet) -> Result<ExcisionDepth> {
    let (mut cl, mut int) = (x.mask(w)?, x.mask(a)?);
    let mut i = 0;
    loop {
        let next_cl = closure_mask(x, &cl, 1);
        let next_int = interior_mask(x, &int, 1);
        if next_cl.iter().zip(&next_int).any(|(c, n)| *c && !*n) {
            return Ok(ExcisionDepth::Finite(i));
        }
        i += 1;
        if next_cl == cl && next_int == int {
            return Ok(ExcisionDepth::Unbounded);
        }
        (cl, int) = (next_cl, next_int);
    }
}

/// The first cube of dimension `<= n_top` whose image meets both `X − A` and `X − B`.
#[derive(Debug, Clone)]
pub struct CoverageOutcome {
    pub cubes_checked: Vec<usize>,
    pub straddling: Option<SingularCube>,
}

/// Checks every enumerated cube of dimension `0..=n_top` for lying in `A` or in `B`.
pub fn lemma_coverage(x: &DigitalImage, a: &PointSet, b: &PointSet, n_top: usize) -> Result<CoverageOutcome> {
    let (am, bm) = (x.mask(a)?, x.mask(b)?);
    let cfg = EngineConfig::default();
    let mut counts = Vec::new();
    for n in 0..=n_top {
        let cubes = enumerate_cubes_with(x, n, &cfg)?;
        counts.push(cubes.len());
        if let Some(t) = cubes.into_iter().find(|t| !t.lies_in(&am) && !t.lies_in(&bm)) {
            return Ok(CoverageOutcome {
                cubes_checked: counts,
                straddling: Some(t),
            });
        }
    }
    Ok(CoverageOutcome {
        cubes_checked: counts,
        straddling: None,
    })
}

/// When `X = Int^i(A) ∪ Int^i(B)`, every cube of dimension `<= i + 1` lies in `A` or in `B`.
/// Dimensions above `i + 1` are scanned up to `n_top` and reported without a claim.
pub fn check_lemma_cover(x: &DigitalImage, a: &PointSet, b: &PointSet, i: usize, n_top: usize) -> Result<AxiomReport> {
    let inputs = json!({
        "image": image_json(x),
        "a": points_json(a),
        "b": points_json(b),
        "i": i,
    });
    let mut r = AxiomReport::start("lemma-cover", inputs);
    let covered = crate::image::covers_by_interiors(x, a, b, i)?;
    r.note(None, "X = Int^i(A) ∪ Int^i(B)", json!(covered));
    let (am, bm) = (x.mask(a)?, x.mask(b)?);
    let cfg = EngineConfig::default();
    for n in 0..=n_top {
        let cubes = enumerate_cubes_with(x, n, &cfg)?;
        let bad = cubes.iter().find(|t| !t.lies_in(&am) && !t.lies_in(&bm));
        let data = json!({
            "cubes": cubes.len(),
            "straddling": bad.map(|t| points_json(&t.points(x))),
        });
        if covered && n <= i + 1 {
            r.check(Some(n), "every cube lies in A or in B", bad.is_none(), data);
        } else {
            r.note(Some(n), "every cube lies in A or in B", data);
        }
    }
    Ok(r.finish())
}

/// The path `a ~ b ~ c ~ d` under 4-adjacency with `A = {a, b, c}`, `B = {b, c, d}`:
/// `X = Int(A) ∪ Int(B)`, every 2-cube lies in `A` or `B`, yet the 3-cube
/// sending a vertex of weight `k` to the `k`-th point meets both `a` and `d`.
pub fn straddling_cube_example() -> (DigitalImage, PointSet, PointSet, SingularCube) {
    let adj = crate::image::Adjacency::new(2, 1).expect("valid adjacency");
    let pts: Vec<Point> = (0..4).map(|k| Point::from([k, 0])).collect();
    let x = DigitalImage::new(adj, pts.clone()).expect("distinct points");
    let a: PointSet = pts[..3].iter().cloned().collect();
    let b: PointSet = pts[1..].iter().cloned().collect();
    let vertices: Vec<Point> = (0..8u32).map(|v| pts[v.count_ones() as usize].clone()).collect();
    let t = SingularCube::from_points(&x, 3, &vertices).expect("continuous cube");
    (x, a, b, t)
}

/// The inclusion `(X − W, A − W) → (X, A)` on relative homology, asserted to be an
/// isomorphism in the degrees the excision depth covers and reported elsewhere.
pub fn check_excision(x: &DigitalImage, a: &PointSet, w: &PointSet, n_max: usize) -> Result<AxiomReport> {
    let am = x.mask(a)?;
    if !w.is_subset(a) {
        return Err(Error::domain("W must be a subset of A"));
    }
    let inputs = json!({
        "image": image_json(x),
        "a": points_json(a),
        "w": points_json(w),
    });
    let mut r = AxiomReport::start("excision", inputs);
    let depth = excision_depth(x, a, w)?;
    r.note(None, "excision depth", json!(depth));
    let wm = x.mask(w)?;
    let closed_open = closure_mask(x, &wm, 1) == wm && interior_mask(x, &am, 1) == am;
    r.note(None, "Cl(W) = W and Int(A) = A", json!(closed_open));

    let rest: PointSet = x.point_set().difference(w).cloned().collect();
    let xw = x.subimage(&rest)?;
    let aw: PointSet = a.difference(w).cloned().collect();
    let small = relative_homology(&ImagePair::new(xw.clone(), aw)?, n_max)?;
    let big = relative_homology(&ImagePair::new(x.clone(), a.clone())?, n_max)?;
    let inc = DigitalMap::inclusion(&xw, x)?;
    for n in 0..=n_max {
        let m = induced_map(&inc, &small[n], &big[n])?;
        let iso = is_isomorphism(&m, &small[n].shape(), &big[n].shape())?;
        let data = json!({
            "source": small[n].shape(),
            "target": big[n].shape(),
            "map": reduced(m, &big[n])?,
            "isomorphism": iso,
        });
        if depth.covers(n) {
            r.check(Some(n), "inclusion induces an isomorphism", iso, data);
        } else {
            r.note(Some(n), "inclusion induces an isomorphism", data);
        }
    }

    let lemma_top = match depth {
        ExcisionDepth::Finite(0) => None,
        ExcisionDepth::Finite(i) => Some((i, (i + 1).min(n_max + 1))),
        ExcisionDepth::Unbounded => Some((n_max + 1, n_max + 1)),
    };
    if let Some((i, top)) = lemma_top {
        let outcome = lemma_coverage(x, a, &rest, top)?;
        r.check(
            None,
            &format!("cubes of dimension <= {top} lie in A or in X - W (i = {i})"),
            outcome.straddling.is_none(),
            json!({
                "cubes": outcome.cubes_checked,
                "straddling": outcome.straddling.map(|t| points_json(&t.points(x))),
            }),
        );
    }
    Ok(r.finish())
}

/// Exactness of `… → H_n(A) → H_n(X) → H_n(X, A) → H_{n-1}(A) → … → H_0(X, A) → 0`
/// at every node from `H_{n_max}(X)` down. `H_{n_max}(A)` would need the next
/// relative group and is not checked.
pub fn check_les(pair: &ImagePair, n_max: usize) -> Result<AxiomReport> {
    let x = pair.image();
    let sub = pair.subset_image();
    let inputs = json!({ "image": image_json(x), "a": points_json(pair.subset()) });
    let mut r = AxiomReport::start("exactness", inputs);
    let ha = homology(&sub, n_max)?;
    let hx = homology(x, n_max)?;
    let hr = relative_homology(pair, n_max)?;
    r.note(
        None,
        "groups",
        json!({ "subset": shapes_json(&ha), "image": shapes_json(&hx), "relative": shapes_json(&hr) }),
    );
    let inc = DigitalMap::inclusion(&sub, x)?;
    let id = DigitalMap::identity(x);
    let i_star = (0..=n_max)
        .map(|n| induced_map(&inc, &ha[n], &hx[n]))
        .collect::<Result<Vec<_>>>()?;
    let j_star = (0..=n_max)
        .map(|n| induced_map(&id, &hx[n], &hr[n]))
        .collect::<Result<Vec<_>>>()?;
    // d_star[n] : H_n(X, A) → H_{n-1}(A)
    let d_star = (0..=n_max)
        .map(|n| if n == 0 { Ok(None) } else { connecting_hom(&hr[n], &ha[n - 1]).map(Some) })
        .collect::<Result<Vec<_>>>()?;

    let node = |r: &mut AxiomReport, n: usize, at: &str, inc: &IntMatrix, out: &IntMatrix, s: GroupShape, m: GroupShape, t: GroupShape| -> Result<()> {
        let e = exactness(inc, out, &s, &m, &t)?;
        r.check(
            Some(n),
            &format!("exact at {at}"),
            e.is_exact(),
            json!({ "incoming": inc, "outgoing": out, "check": e }),
        );
        Ok(())
    };
    for n in (0..=n_max).rev() {
        node(&mut r, n, "H_n(X)", &i_star[n], &j_star[n], ha[n].shape(), hx[n].shape(), hr[n].shape())?;
        if n >= 1 {
            let d = d_star[n].as_ref().expect("degree >= 1");
            node(&mut r, n, "H_n(X, A)", &j_star[n], d, hx[n].shape(), hr[n].shape(), ha[n - 1].shape())?;
            node(&mut r, n - 1, "H_n(A)", d, &i_star[n - 1], hr[n].shape(), ha[n - 1].shape(), hx[n - 1].shape())?;
        } else {
            let zero = IntMatrix::zeros(0, hr[0].generator_count());
            node(&mut r, 0, "H_n(X, A)", &j_star[0], &zero, hx[0].shape(), hr[0].shape(), GroupShape::trivial())?;
        }
    }
    Ok(r.finish())
}

/// Homology of a union of mutually disconnected parts is the direct sum of the
/// parts' homology, and the inclusions induce the isomorphism.
pub fn check_additivity(parts: &[DigitalImage], n_max: usize) -> Result<AxiomReport> {
    let inputs = json!({ "parts": parts.iter().map(image_json).collect::<Vec<_>>() });
    let mut r = AxiomReport::start("additivity", inputs);
    let Some(first) = parts.first() else {
        return Err(Error::domain("additivity needs at least one part"));
    };
    let adj = first.adjacency();
    if let Some(p) = parts.iter().find(|p| p.adjacency() != adj) {
        r.check(None, "parts share one adjacency", false, json!({ "expected": adj.kappa(), "found": p.adjacency().kappa() }));
        return Ok(r.finish());
    }
    for (i, p) in parts.iter().enumerate() {
        for q in &parts[i + 1..] {
            for u in p.points() {
                for v in q.points() {
                    if u == v || are_adjacent(u, v, adj)? {
                        r.check(
                            None,
                            "parts are mutually disconnected",
                            false,
                            json!({ "points": points_json([u, v]) }),
                        );
                        return Ok(r.finish());
                    }
                }
            }
        }
    }
    r.check(None, "parts are mutually disconnected", true, Value::Null);

    let union = DigitalImage::new(adj, parts.iter().flat_map(|p| p.points().to_vec()))?;
    let hu = homology(&union, n_max)?;
    let hp = parts.iter().map(|p| homology(p, n_max)).collect::<Result<Vec<_>>>()?;
    for n in 0..=n_max {
        let mut sum = GroupShape::trivial();
        for h in &hp {
            sum = sum.direct_sum(&h[n].shape())?;
        }
        let target = hu[n].shape();
        r.check(Some(n), "shape of the union is the direct sum", sum == target, json!({ "sum": sum, "union": target }));

        // Block map ⊕ H_n(part) → H_n(union), free generators of all parts first.
        let mut free_cols = Vec::new();
        let mut torsion_cols = Vec::new();
        let mut torsion = Vec::new();
        for (p, h) in parts.iter().zip(&hp) {
            let m = induced_map(&DigitalMap::inclusion(p, &union)?, &h[n], &hu[n])?;
            for c in 0..m.cols() {
                let col = m.column(c);
                if c < h[n].betti() {
                    free_cols.push(col);
                } else {
                    torsion_cols.push(col);
                    torsion.push(h[n].torsion()[c - h[n].betti()]);
                }
            }
        }
        let source = GroupShape::new(free_cols.len(), torsion);
        let cols: Vec<Vec<i64>> = free_cols.into_iter().chain(torsion_cols).collect();
        let mut block = IntMatrix::zeros(target.generators(), cols.len());
        for (c, col) in cols.iter().enumerate() {
            for (row, v) in col.iter().enumerate() {
                block.set(row, c, *v);
            }
        }
        let ok = is_bijective(&block, &source, &target)?;
        r.check(Some(n), "inclusions induce an isomorphism", ok, json!({ "map": block }));
    }
    Ok(r.finish())
}

/// A composable pair `X --f--> Y --g--> Z` of continuous maps.
#[derive(Debug, Clone)]
pub struct MapChain {
    pub x: DigitalImage,
    pub y: DigitalImage,
    pub z: DigitalImage,
    pub f: DigitalMap,
    pub g: DigitalMap,
}

impl MapChain {
    fn to_json(&self) -> Value {
        json!({
            "x": image_json(&self.x),
            "y": image_json(&self.y),
            "z": image_json(&self.z),
            "f": map_json(&self.f, &self.x, &self.y),
            "g": map_json(&self.g, &self.y, &self.z),
        })
    }
}

/// The one-point image has the homology of a point, and induced maps respect
/// identities and composition on every sample.
pub fn check_dimension_and_functoriality(samples: &[MapChain], n_max: usize) -> Result<AxiomReport> {
    let inputs = json!({ "samples": samples.iter().map(MapChain::to_json).collect::<Vec<_>>(), "n_max": n_max });
    let mut r = AxiomReport::start("dimension-functoriality", inputs);
    let adj = samples
        .first()
        .map(|s| s.x.adjacency())
        .unwrap_or(crate::image::Adjacency::new(2, 1)?);
    let dot = DigitalImage::new(adj, [Point::from(vec![0; adj.dim()])])?;
    for (n, g) in homology(&dot, n_max)?.iter().enumerate() {
        let want = if n == 0 { GroupShape::new(1, vec![]) } else { GroupShape::trivial() };
        r.check(Some(n), "one-point image", g.shape() == want, json!(g.shape()));
    }
    // Samples often share images (campaigns use self-maps); compute each once.
    let mut known: Vec<(DigitalImage, Vec<HomologyGroup>)> = Vec::new();
    let mut ids = Vec::with_capacity(samples.len());
    for s in samples {
        let mut id = [0; 3];
        for (slot, x) in id.iter_mut().zip([&s.x, &s.y, &s.z]) {
            let same = |y: &DigitalImage| y.adjacency() == x.adjacency() && y.points() == x.points();
            *slot = match known.iter().position(|(y, _)| same(y)) {
                Some(k) => k,
                None => {
                    known.push((x.clone(), homology(x, n_max)?));
                    known.len() - 1
                }
            };
        }
        ids.push(id);
    }
    for (k, (s, &[ix, iy, iz])) in samples.iter().zip(&ids).enumerate() {
        let (hx, hy, hz) = (&known[ix].1, &known[iy].1, &known[iz].1);
        let gf = s.f.then(&s.g)?;
        for n in 0..=n_max {
            let id = reduced(induced_map(&DigitalMap::identity(&s.x), &hx[n], &hx[n])?, &hx[n])?;
            let want = reduce_map(&IntMatrix::identity(hx[n].generator_count()), &hx[n].shape())?;
            r.check(Some(n), &format!("sample {k}: id_* = id"), id == want, json!({ "map": id }));
            let mf = induced_map(&s.f, &hx[n], &hy[n])?;
            let mg = induced_map(&s.g, &hy[n], &hz[n])?;
            let lhs = reduced(induced_map(&gf, &hx[n], &hz[n])?, &hz[n])?;
            let rhs = groups::compose(&mg, &mf, &hz[n].shape())?;
            r.check(
                Some(n),
                &format!("sample {k}: (g∘f)_* = g_*∘f_*"),
                lhs == rhs,
                json!({ "composite": lhs, "product": rhs }),
            );
        }
    }
    Ok(r.finish())
}

/// Seeded checks of every axiom on one image: self-maps for functoriality and
/// homotopy, a random subset `A` for exactness, `W = Int^2(A)` (so the
/// excision depth is at least 1) and the components as additivity parts.
pub fn campaign(x: &DigitalImage, seed: u64, n_max: usize) -> Result<Vec<AxiomReport>> {
    if x.is_empty() {
        return Err(Error::domain("campaigns need a non-empty image"));
    }
    let mut rng = sampling::rng(seed);
    let samples: Vec<MapChain> = (0..3)
        .map(|_| {
            let f = sampling::random_map(&mut rng, x, x);
            let g = sampling::random_map(&mut rng, x, x);
            MapChain { x: x.clone(), y: x.clone(), z: x.clone(), f, g }
        })
        .collect();
    let base = sampling::random_map(&mut rng, x, x);
    let h = sampling::random_homotopy(&mut rng, x, x, &base, 2, None)?;
    let a = sampling::random_subset(&mut rng, x, 0.5);
    let w = crate::image::interior(x, &a, 2)?;
    let parts = crate::image::components(x)
        .iter()
        .map(|c| x.subimage(c))
        .collect::<Result<Vec<_>>>()?;
    let reports = vec![
        check_dimension_and_functoriality(&samples, n_max)?,
        check_homotopy_axiom(&h, None, n_max)?,
        check_les(&ImagePair::new(x.clone(), a.clone())?, n_max)?,
        check_excision(x, &a, &w, n_max)?,
        check_additivity(&parts, n_max)?,
    ];
    Ok(reports.into_iter().map(|r| r.with_seed(seed)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::{closure, interior, Adjacency};

    fn grid(l: usize, w: i64, h: i64) -> DigitalImage {
        let pts = (0..h).flat_map(|y| (0..w).map(move |x| Point::from([x, y])));
        DigitalImage::new(Adjacency::new(2, l).unwrap(), pts).unwrap()
    }

    fn rows(x: &DigitalImage, pred: impl Fn(i64) -> bool) -> PointSet {
        x.points().iter().filter(|p| pred(p.coords()[1])).cloned().collect()
    }

    fn ring() -> DigitalImage {
        let pts = (0..3)
            .flat_map(|y| (0..3).map(move |x| [x, y]))
            .filter(|&p| p != [1, 1])
            .map(Point::from);
        DigitalImage::new(Adjacency::new(2, 1).unwrap(), pts).unwrap()
    }

    #[test]
    fn grid_excision_has_depth_one() {
        let x = grid(1, 5, 5);
        let a = rows(&x, |y| y <= 3);
        let w = rows(&x, |y| y == 0);
        assert_eq!(closure(&x, &w, 1).unwrap(), rows(&x, |y| y <= 1));
        assert_eq!(interior(&x, &a, 1).unwrap(), rows(&x, |y| y <= 2));
        assert_eq!(excision_depth(&x, &a, &w).unwrap(), ExcisionDepth::Finite(1));
        let r = check_excision(&x, &a, &w, 1).unwrap();
        assert!(r.passed(), "{r:#?}");
        let asserted: Vec<usize> = r.details.iter().filter(|d| d.holds.is_some()).filter_map(|d| d.degree).collect();
        assert_eq!(asserted, vec![0, 1]);
    }

    #[test]
    fn trivial_excisions() {
        let x = grid(1, 3, 3);
        let a = rows(&x, |y| y <= 1);
        assert_eq!(excision_depth(&x, &a, &PointSet::new()).unwrap(), ExcisionDepth::Unbounded);
        assert!(check_excision(&x, &a, &PointSet::new(), 2).unwrap().passed());
        let all = x.point_set();
        let w = rows(&x, |y| y == 0);
        assert!(check_excision(&x, &all, &w, 2).unwrap().passed());
        assert!(check_excision(&x, &w, &a, 1).is_err());
    }

    #[test]
    fn les_examples() {
        let path = DigitalImage::new(
            Adjacency::new(2, 1).unwrap(),
            [Point::from([0, 0]), Point::from([1, 0]), Point::from([2, 0])],
        )
        .unwrap();
        let ends: PointSet = [Point::from([0, 0]), Point::from([2, 0])].into_iter().collect();
        assert!(check_les(&ImagePair::new(path.clone(), ends).unwrap(), 2).unwrap().passed());
        assert!(check_les(&ImagePair::absolute(path), 1).unwrap().passed());
        let x = ring();
        let dot: PointSet = [Point::from([0, 0])].into_iter().collect();
        assert!(check_les(&ImagePair::new(x, dot).unwrap(), 2).unwrap().passed());
    }

    #[test]
    fn additivity_examples() {
        let adj = Adjacency::new(2, 1).unwrap();
        let p = DigitalImage::new(adj, [Point::from([0, 0])]).unwrap();
        let q = DigitalImage::new(adj, [Point::from([9, 9])]).unwrap();
        let r = check_additivity(&[p.clone(), q], 1).unwrap();
        assert!(r.passed());
        let touching = DigitalImage::new(adj, [Point::from([1, 0])]).unwrap();
        let r = check_additivity(&[p, touching], 1).unwrap();
        assert!(!r.passed());
        assert!(r.counterexample.is_some());
        let shifted = DigitalImage::new(adj, ring().points().iter().map(|p| p.translate(&[10, 0]).unwrap())).unwrap();
        assert!(check_additivity(&[ring(), shifted], 1).unwrap().passed());
    }

    #[test]
    fn straddling_example_behaves_as_described() {
        let (x, a, b, t) = straddling_cube_example();
        assert!(crate::image::covers_by_interiors(&x, &a, &b, 1).unwrap());
        assert!(!t.is_degenerate());
        let r = check_lemma_cover(&x, &a, &b, 1, 3).unwrap();
        assert!(r.passed());
        let top = r.details.iter().find(|d| d.degree == Some(3)).unwrap();
        assert_eq!(top.holds, None);
        assert!(!top.data["straddling"].is_null());
    }

    #[test]
    fn homotopy_of_two_point_slide() {
        let x = DigitalImage::new(Adjacency::new(2, 1).unwrap(), [Point::from([0, 0]), Point::from([1, 0])]).unwrap();
        let f = DigitalMap::identity(&x);
        let g = DigitalMap::constant(&x, &x, &Point::from([0, 0])).unwrap();
        let h = MapHomotopy::new(&x, &x, vec![f, g]).unwrap();
        assert!(check_homotopy_axiom(&h, None, 1).unwrap().passed());
        let a: PointSet = [Point::from([1, 0])].into_iter().collect();
        assert!(check_homotopy_axiom(&h, Some((&a, &a)), 1).is_err());
    }

    #[test]
    fn campaign_is_deterministic() {
        let x = ring();
        let r1 = campaign(&x, 7, 1).unwrap();
        let r2 = campaign(&x, 7, 1).unwrap();
        assert_eq!(r1, r2);
        assert!(r1.iter().all(|r| r.passed() && r.seed == Some(7)), "{r1:#?}");
    }
}
