//! Homology groups with representative cycles, class coordinates, induced maps
//! and the connecting homomorphism.
//!
//! Per degree `n`: a tracked column reduction of `∂_n` gives a basis of the
//! cycle lattice `Z_n`; an untracked reduction of `∂_{n+1}` gives generators
//! of the boundary lattice `B_n`. Expressing `B_n` in `Z_n` coordinates and
//! taking a Smith normal form `P M Q = D` with `P` tracked yields
//! `H_n = Z^{k-r} ⊕ ⊕ Z/d_i`; generators are columns of `P^{-1}` and the class
//! of a cycle with `Z_n`-coordinates `x` is `P x`.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use serde::Serialize;

use crate::chain::Chain;
use crate::complex::{BoundaryMatrix, ChainComplex};
use crate::error::{Error, Result};
use crate::groups::GroupShape;
use crate::image::{DigitalImage, DigitalMap, ImagePair};
use crate::linalg::{self, lin_comb, reduce_columns, sparse_dot, Int, Lattice, SparseSnf, SparseVec};
use crate::par::{self, EngineConfig};

#[derive(Debug, Clone)]
struct DegreeData<T> {
    cycles: Lattice<T>,
    /// Rows of `P` by original row (cycle-basis slot).
    p_rows: Vec<SparseVec<T>>,
    /// Generator rows, free first; torsion generators carry their order.
    gens: Vec<(usize, Option<T>)>,
}

impl<T: Int> DegreeData<T> {
    /// `None` when `v` is not a cycle.
    fn class(&self, v: &[(usize, i64)]) -> Result<Option<Vec<i64>>> {
        let Some(x) = self.cycles.solve(&linalg::sparse_from_i64::<T>(v))? else {
            return Ok(None);
        };
        self.gens
            .iter()
            .map(|(row, order)| {
                let y = sparse_dot(&self.p_rows[*row], &x)?;
                let y = match order {
                    Some(d) => num_integer::Integer::mod_floor(&y, d),
                    None => y,
                };
                linalg::to_i64(&y)
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn widen(&self) -> DegreeData<BigInt> {
        DegreeData {
            cycles: self.cycles.convert(),
            p_rows: self.p_rows.iter().map(|r| linalg::convert_sparse(r)).collect(),
            gens: self
                .gens
                .iter()
                .map(|(r, o)| (*r, o.as_ref().map(|d| BigInt::from(linalg::to_i64(d).expect("fits")))))
                .collect(),
        }
    }
}

#[derive(Debug)]
enum Solver {
    Small(DegreeData<i64>, OnceLock<DegreeData<BigInt>>),
    Big(DegreeData<BigInt>),
}

impl Solver {
    fn class(&self, v: &[(usize, i64)]) -> Result<Option<Vec<i64>>> {
        match self {
            Solver::Small(d, wide) => match d.class(v) {
                Err(Error::Overflow(_)) => wide.get_or_init(|| d.widen()).class(v),
                other => other,
            },
            Solver::Big(d) => d.class(v),
        }
    }
}

struct DegreeResult<T> {
    data: DegreeData<T>,
    betti: usize,
    torsion: Vec<T>,
    generators: Vec<SparseVec<T>>,
}

fn compute_degree<T: Int>(
    size: usize,
    incoming: Option<&BoundaryMatrix>,
    outgoing: Option<&BoundaryMatrix>,
) -> Result<DegreeResult<T>> {
    let kernel: Vec<SparseVec<T>> = match incoming {
        None => (0..size).map(|i| vec![(i, T::one())]).collect(),
        Some(d) => reduce_columns::<T>(d.columns(), true)?.1,
    };
    let mut cycles = Lattice::new();
    for v in kernel {
        if !cycles.insert(v)? {
            return Err(Error::Inconsistent("kernel basis vectors are dependent".into()));
        }
    }
    let k = cycles.rank();
    let boundaries: Vec<SparseVec<T>> = match outgoing {
        None => Vec::new(),
        Some(d) => reduce_columns::<T>(d.columns(), false)?.0.vectors().to_vec(),
    };
    let mut coords = Vec::with_capacity(boundaries.len());
    for b in &boundaries {
        match cycles.solve(b)? {
            Some(c) => coords.push(c),
            None => return Err(Error::Inconsistent("a boundary is not a cycle".into())),
        }
    }
    let snf = SparseSnf::new(k, coords.len(), &coords, true, false).run()?;
    let rank = snf.rank();
    let mut free = Vec::new();
    let mut tors = Vec::new();
    for (pos, &row) in snf.row_order.iter().enumerate() {
        if pos >= rank {
            free.push((row, None));
        } else if !snf.diag[pos].is_one() {
            tors.push((row, Some(snf.diag[pos].clone())));
        }
    }
    let betti = free.len();
    let torsion: Vec<T> = tors.iter().map(|(_, d)| d.clone().expect("torsion order")).collect();
    let gens: Vec<(usize, Option<T>)> = free.into_iter().chain(tors).collect();
    let p_inv = snf.p_inv_cols.expect("tracked");
    let mut generators = Vec::with_capacity(gens.len());
    for (row, _) in &gens {
        let mut g: SparseVec<T> = Vec::new();
        for (slot, c) in &p_inv[*row] {
            g = lin_comb(&T::one(), &g, c, &cycles.vectors()[*slot])?;
        }
        generators.push(g);
    }
    Ok(DegreeResult {
        data: DegreeData {
            cycles,
            p_rows: snf.p_rows.expect("tracked"),
            gens,
        },
        betti,
        torsion,
        generators,
    })
}

/// `H_n` of an image or pair: Betti number, torsion invariant factors (each
/// `> 1`, in divisibility order) and one representative cycle per generator,
/// free generators first.
#[derive(Clone)]
pub struct HomologyGroup {
    degree: usize,
    betti: usize,
    torsion: Vec<i64>,
    basis: Vec<Chain>,
    complex: Arc<ChainComplex>,
    solver: Arc<Solver>,
}

impl std::fmt::Debug for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomologyGroup")
            .field("degree", &self.degree)
            .field("betti", &self.betti)
            .field("torsion", &self.torsion)
            .field("basis", &self.basis)
            .finish()
    }
}

impl HomologyGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn betti(&self) -> usize {
        self.betti
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn basis(&self) -> &[Chain] {
        &self.basis
    }

    /// Number of generators, free and torsion.
    pub fn generator_count(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn shape(&self) -> GroupShape {
        GroupShape::new(self.betti, self.torsion.clone())
    }

    pub fn complex(&self) -> &Arc<ChainComplex> {
        &self.complex
    }

    pub fn image(&self) -> &DigitalImage {
        self.complex.image()
    }

    pub fn is_relative(&self) -> bool {
        self.complex.is_relative()
    }

    fn class_of(&self, z: &Chain) -> Result<Option<HomologyClassCoords>> {
        let v = self.complex.coords(z)?;
        Ok(self.solver.class(&v)?.map(|all| HomologyClassCoords {
            torsion_part: all[self.betti..].to_vec(),
            free_part: all[..self.betti].to_vec(),
        }))
    }
}

/// Coordinates of a class in the stored basis; torsion entries are reduced
/// into `[0, order)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HomologyClassCoords {
    pub free_part: Vec<i64>,
    pub torsion_part: Vec<i64>,
}

impl HomologyClassCoords {
    pub fn is_zero(&self) -> bool {
        self.free_part.iter().chain(&self.torsion_part).all(|&x| x == 0)
    }

    /// Free coordinates followed by torsion coordinates.
    pub fn to_vec(&self) -> Vec<i64> {
        self.free_part.iter().chain(&self.torsion_part).copied().collect()
    }
}

/// Groups `H_0..=H_{n_max}` of a prepared complex, which must reach degree `n_max + 1`.
pub fn homology_of_complex(complex: &Arc<ChainComplex>, n_max: usize) -> Result<Vec<HomologyGroup>> {
    if complex.top_degree() < n_max + 1 {
        return Err(Error::domain(format!(
            "homology up to degree {n_max} needs chains up to degree {}",
            n_max + 1
        )));
    }
    let cfg = *complex.config();
    let per_degree = par::map_range(&cfg, n_max + 1, |n| -> Result<HomologyGroup> {
        let size = complex.basis(n)?.len();
        let incoming = if n == 0 { None } else { Some(complex.boundary(n)?) };
        let outgoing = Some(complex.boundary(n + 1)?);
        let (solver, betti, torsion, generators) = linalg::with_escalation(
            || {
                let r = compute_degree::<i64>(size, incoming, outgoing)?;
                let gens = r.generators;
                Ok((Solver::Small(r.data, OnceLock::new()), r.betti, r.torsion, gens))
            },
            || {
                let r = compute_degree::<BigInt>(size, incoming, outgoing)?;
                let torsion = r.torsion.iter().map(linalg::to_i64).collect::<Result<Vec<_>>>()?;
                let gens = r.generators.iter().map(|g| linalg::sparse_to_i64(g)).collect::<Result<Vec<_>>>()?;
                Ok((Solver::Big(r.data), r.betti, torsion, gens))
            },
        )?;
        let basis = generators
            .iter()
            .map(|g| complex.chain(n, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(HomologyGroup {
            degree: n,
            betti,
            torsion,
            basis,
            complex: Arc::clone(complex),
            solver: Arc::new(solver),
        })
    });
    per_degree.into_iter().collect()
}

pub fn homology(image: &DigitalImage, n_max: usize) -> Result<Vec<HomologyGroup>> {
    homology_with(image, n_max, &EngineConfig::default())
}

pub fn homology_with(image: &DigitalImage, n_max: usize, cfg: &EngineConfig) -> Result<Vec<HomologyGroup>> {
    homology_of_complex(&ChainComplex::absolute(image, n_max + 1, cfg)?, n_max)
}

/// Homology of the quotient complex `C(X) / C(A)`.
pub fn relative_homology(pair: &ImagePair, n_max: usize) -> Result<Vec<HomologyGroup>> {
    relative_homology_with(pair, n_max, &EngineConfig::default())
}

pub fn relative_homology_with(pair: &ImagePair, n_max: usize, cfg: &EngineConfig) -> Result<Vec<HomologyGroup>> {
    homology_of_complex(&ChainComplex::relative(pair, n_max + 1, cfg)?, n_max)
}

/// Coordinates of `[z]` in the basis of `h`.
pub fn homology_class(z: &Chain, h: &HomologyGroup) -> Result<HomologyClassCoords> {
    if z.degree() != h.degree && !z.is_zero() {
        return Err(Error::domain(format!(
            "a {}-chain has no class in degree {}",
            z.degree(),
            h.degree
        )));
    }
    let z = if z.is_zero() { Chain::zero(h.degree) } else { z.clone() };
    h.complex.check_chain_image(&z)?;
    if !h.complex.is_cycle(&z)? {
        return Err(Error::contract("the chain is not a cycle"));
    }
    h.class_of(&z)?
        .ok_or_else(|| Error::Inconsistent("cycle not found in the cycle lattice".into()))
}

fn class_or_fault(z: &Chain, h: &HomologyGroup) -> Result<HomologyClassCoords> {
    h.class_of(z)?
        .ok_or_else(|| Error::Inconsistent(format!("expected a cycle in degree {}", h.degree)))
}

/// Matrix of `f_*: H_n(source) → H_n(target)` in the stored bases; column `k`
/// holds the class of the pushforward of basis cycle `k`.
pub fn induced_map(f: &DigitalMap, source: &HomologyGroup, target: &HomologyGroup) -> Result<linalg::IntMatrix> {
    if source.degree != target.degree {
        return Err(Error::domain("induced maps preserve degree"));
    }
    let (x, y) = (source.image(), target.image());
    f.require_continuous(x, y)?;
    match (source.complex.subset(), target.complex.subset()) {
        (Some(a), Some(b)) if !f.maps_into(a, b) => {
            return Err(Error::contract("the map does not send the subset into the target subset"))
        }
        (Some(_), None) => return Err(Error::contract("a map of pairs needs a relative target")),
        _ => {}
    }
    let mut m = linalg::IntMatrix::zeros(target.generator_count(), source.generator_count());
    for (k, z) in source.basis.iter().enumerate() {
        let c = class_or_fault(&z.pushforward_unchecked(f)?, target)?;
        for (r, v) in c.to_vec().into_iter().enumerate() {
            m.set(r, k, v);
        }
    }
    Ok(m)
}

/// Matrix of `∂_*: H_n(X, A) → H_{n-1}(A)`: lift each relative basis cycle to
/// `C_n(X)`, take its boundary (which lies in `A`) and its class in `H_{n-1}(A)`.
pub fn connecting_hom(relative: &HomologyGroup, subset: &HomologyGroup) -> Result<linalg::IntMatrix> {
    let Some(mask) = relative.complex.subset() else {
        return Err(Error::domain("the connecting homomorphism starts from a relative group"));
    };
    if relative.degree == 0 || subset.degree + 1 != relative.degree {
        return Err(Error::domain("the connecting homomorphism lowers degree by one, from degree >= 1"));
    }
    if subset.is_relative() {
        return Err(Error::domain("the target must be the absolute homology of the subset"));
    }
    let x = relative.image();
    let a = subset.image();
    if a.point_set() != x.set_from_mask(mask) || a.adjacency() != x.adjacency() {
        return Err(Error::domain("the target group is not over the pair's subset"));
    }
    let mut m = linalg::IntMatrix::zeros(subset.generator_count(), relative.generator_count());
    for (k, z) in relative.basis.iter().enumerate() {
        let b = z.boundary()?;
        if !b.lies_in(mask) {
            return Err(Error::Inconsistent("boundary of a relative cycle leaves the subset".into()));
        }
        let c = class_or_fault(&b.transfer(x, a)?, subset)?;
        for (r, v) in c.to_vec().into_iter().enumerate() {
            m.set(r, k, v);
        }
    }
    Ok(m)
}
