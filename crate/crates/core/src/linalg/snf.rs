use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;

use super::{add, div_rem, ext_gcd, mul, neg, to_i64, with_escalation, Int, IntMatrix, SparseVec};
use crate::error::Result;

type Row<T> = BTreeMap<usize, T>;

fn row_axpy<T: Int>(target: &mut Row<T>, c: &T, src: &[(usize, T)]) -> Result<()> {
    for (k, x) in src {
        let e = target.entry(*k).or_insert_with(T::zero);
        *e = add(e, &mul(c, x)?)?;
        if e.is_zero() {
            target.remove(k);
        }
    }
    Ok(())
}

fn snapshot<T: Int>(r: &Row<T>) -> SparseVec<T> {
    r.iter().map(|(k, v)| (*k, v.clone())).collect()
}

/// Sparse Smith normal form by pivoting with unimodular row and column
/// operations. Row transforms `P` and `P^-1` and the column transform `Q`
/// are tracked on request.
pub(crate) struct SparseSnf<T> {
    nrows: usize,
    ncols: usize,
    rows: Vec<Row<T>>,
    cols: Vec<BTreeSet<usize>>,
    p_rows: Option<Vec<Row<T>>>,
    p_inv_cols: Option<Vec<Row<T>>>,
    q_cols: Option<Vec<Row<T>>>,
}

/// Result of [`SparseSnf::run`]: `P M Q` is zero except at
/// `(row_order[k], col_order[k])`, where it equals `diag[k] > 0`, `k < rank`,
/// and `diag[k] | diag[k + 1]`.
#[derive(Debug, Clone)]
pub(crate) struct SnfOutcome<T> {
    pub diag: Vec<T>,
    pub row_order: Vec<usize>,
    pub col_order: Vec<usize>,
    /// Rows of `P`, by original row index.
    pub p_rows: Option<Vec<SparseVec<T>>>,
    /// Columns of `P^-1`, by original row index.
    pub p_inv_cols: Option<Vec<SparseVec<T>>>,
    /// Columns of `Q`, by original column index.
    pub q_cols: Option<Vec<SparseVec<T>>>,
}

impl<T> SnfOutcome<T> {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

fn unit_rows<T: Int>(n: usize) -> Vec<Row<T>> {
    (0..n).map(|i| BTreeMap::from([(i, T::one())])).collect()
}

impl<T: Int> SparseSnf<T> {
    pub fn new(nrows: usize, ncols: usize, columns: &[SparseVec<T>], track_p: bool, track_q: bool) -> Self {
        let mut rows: Vec<Row<T>> = vec![BTreeMap::new(); nrows];
        let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                if !v.is_zero() {
                    rows[*r].insert(c, v.clone());
                    cols[c].insert(*r);
                }
            }
        }
        SparseSnf {
            nrows,
            ncols,
            rows,
            cols,
            p_rows: track_p.then(|| unit_rows(nrows)),
            p_inv_cols: track_p.then(|| unit_rows(nrows)),
            q_cols: track_q.then(|| unit_rows(ncols)),
        }
    }

    /// Transform bookkeeping for `row_a += c row_b`.
    fn track_row_add(&mut self, a: usize, c: &T, b: usize) -> Result<()> {
        if let Some(p) = &mut self.p_rows {
            let src = snapshot(&p[b]);
            row_axpy(&mut p[a], c, &src)?;
        }
        if let Some(pi) = &mut self.p_inv_cols {
            let src = snapshot(&pi[a]);
            row_axpy(&mut pi[b], &neg(c)?, &src)?;
        }
        Ok(())
    }

    fn row_add(&mut self, a: usize, c: &T, b: usize) -> Result<()> {
        let src = snapshot(&self.rows[b]);
        for (j, x) in &src {
            let e = self.rows[a].entry(*j).or_insert_with(T::zero);
            *e = add(e, &mul(c, x)?)?;
            if e.is_zero() {
                self.rows[a].remove(j);
                self.cols[*j].remove(&a);
            } else {
                self.cols[*j].insert(a);
            }
        }
        self.track_row_add(a, c, b)
    }

    fn col_add(&mut self, a: usize, c: &T, b: usize) -> Result<()> {
        let rs: Vec<usize> = self.cols[b].iter().copied().collect();
        for r in rs {
            let x = self.rows[r][&b].clone();
            let e = self.rows[r].entry(a).or_insert_with(T::zero);
            *e = add(e, &mul(c, &x)?)?;
            if e.is_zero() {
                self.rows[r].remove(&a);
                self.cols[a].remove(&r);
            } else {
                self.cols[a].insert(r);
            }
        }
        if let Some(q) = &mut self.q_cols {
            let src = snapshot(&q[b]);
            row_axpy(&mut q[a], c, &src)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, a: usize) -> Result<()> {
        for v in self.rows[a].values_mut() {
            *v = neg(v)?;
        }
        if let Some(p) = &mut self.p_rows {
            for v in p[a].values_mut() {
                *v = neg(v)?;
            }
        }
        if let Some(pi) = &mut self.p_inv_cols {
            for v in pi[a].values_mut() {
                *v = neg(v)?;
            }
        }
        Ok(())
    }

    /// Smallest magnitude, then Markowitz count, then position.
    fn select_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(T, usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            let rl = row.len().saturating_sub(1);
            for (&c, v) in row {
                let mag = v.abs();
                let mk = rl * self.cols[c].len().saturating_sub(1);
                let better = match &best {
                    None => true,
                    Some((bm, bk, _, _)) => (&mag, mk) < (bm, *bk),
                };
                if better {
                    let done = mag.is_one() && mk == 0;
                    best = Some((mag, mk, r, c));
                    if done {
                        return Some((r, c));
                    }
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    /// Clears row and column of the pivot; may move the pivot to a smaller remainder.
    fn eliminate(&mut self, mut i: usize, mut j: usize) -> Result<(usize, usize)> {
        'outer: loop {
            let pv = self.rows[i][&j].clone();
            let others: Vec<usize> = self.cols[j].iter().copied().filter(|&r| r != i).collect();
            for r in others {
                let (q, rem) = div_rem(&self.rows[r][&j], &pv)?;
                if !q.is_zero() {
                    self.row_add(r, &neg(&q)?, i)?;
                }
                if !rem.is_zero() {
                    i = r;
                    continue 'outer;
                }
            }
            let others: Vec<usize> = self.rows[i].keys().copied().filter(|&c| c != j).collect();
            for c in others {
                let (q, rem) = div_rem(&self.rows[i][&c], &pv)?;
                if !q.is_zero() {
                    self.col_add(c, &neg(&q)?, j)?;
                }
                if !rem.is_zero() {
                    j = c;
                    continue 'outer;
                }
            }
            return Ok((i, j));
        }
    }

    pub fn run(mut self) -> Result<SnfOutcome<T>> {
        let mut pivots: Vec<(usize, usize, T)> = Vec::new();
        while let Some((i0, j0)) = self.select_pivot() {
            let (i, j) = self.eliminate(i0, j0)?;
            if self.rows[i][&j].is_negative() {
                self.negate_row(i)?;
            }
            let d = self.rows[i].remove(&j).expect("pivot present");
            self.cols[j].remove(&i);
            debug_assert!(self.rows[i].is_empty() && self.cols[j].is_empty());
            pivots.push((i, j, d));
        }
        // divisibility chain: replace (a, b) by (gcd, lcm) with unimodular 2x2 moves
        let k = pivots.len();
        for a in 0..k {
            for b in a + 1..k {
                let (i1, j1, da) = pivots[a].clone();
                let (i2, j2, db) = pivots[b].clone();
                if div_rem(&db, &da)?.1.is_zero() {
                    continue;
                }
                let (g, s, t) = ext_gcd(&da, &db)?;
                let (ag, bg) = (da.div_floor(&g), db.div_floor(&g));
                self.track_row_add(i1, &T::one(), i2)?;
                if let Some(q) = &mut self.q_cols {
                    let (c1, c2) = (snapshot(&q[j1]), snapshot(&q[j2]));
                    let new1 = super::lin_comb(&s, &c1, &t, &c2)?;
                    let new2 = super::lin_comb(&neg(&bg)?, &c1, &ag, &c2)?;
                    q[j1] = new1.into_iter().collect();
                    q[j2] = new2.into_iter().collect();
                }
                let factor = mul(&t, &bg)?;
                self.track_row_add(i2, &neg(&factor)?, i1)?;
                pivots[a].2 = g;
                pivots[b].2 = mul(&da, &bg)?;
            }
        }
        let mut row_order: Vec<usize> = pivots.iter().map(|p| p.0).collect();
        let mut col_order: Vec<usize> = pivots.iter().map(|p| p.1).collect();
        let used_r: BTreeSet<usize> = row_order.iter().copied().collect();
        let used_c: BTreeSet<usize> = col_order.iter().copied().collect();
        row_order.extend((0..self.nrows).filter(|r| !used_r.contains(r)));
        col_order.extend((0..self.ncols).filter(|c| !used_c.contains(c)));
        let dump = |v: Vec<Row<T>>| v.iter().map(snapshot).collect::<Vec<_>>();
        Ok(SnfOutcome {
            diag: pivots.into_iter().map(|p| p.2).collect(),
            row_order,
            col_order,
            p_rows: self.p_rows.map(dump),
            p_inv_cols: self.p_inv_cols.map(dump),
            q_cols: self.q_cols.map(dump),
        })
    }
}

/// Smith normal form `P A Q = D` of a dense integer matrix, with `P`, `P^-1`
/// and `Q` unimodular and `D` diagonal with `d_1 | d_2 | ... | d_rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    pub diag: Vec<i64>,
    pub rank: usize,
    pub row_transform: IntMatrix,
    pub row_transform_inverse: IntMatrix,
    pub col_transform: IntMatrix,
}

impl SnfResult {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<i64> {
        self.diag[..self.rank].iter().copied().filter(|&d| d > 1).collect()
    }

    /// An integer solution `y` of `A y = b`, if one exists.
    pub fn solve(&self, b: &[i64]) -> Result<Option<Vec<i64>>> {
        let c = self.row_transform.mul_vec(b)?;
        let n = self.col_transform.rows();
        let mut z = vec![0i64; n];
        for (k, ck) in c.iter().enumerate() {
            if k < self.rank {
                let d = self.diag[k];
                if ck % d != 0 {
                    return Ok(None);
                }
                z[k] = ck / d;
            } else if *ck != 0 {
                return Ok(None);
            }
        }
        Ok(Some(self.col_transform.mul_vec(&z)?))
    }
}

fn dense_snf<T: Int>(a: &IntMatrix) -> Result<SnfResult> {
    let (m, n) = (a.rows(), a.cols());
    let columns: Vec<SparseVec<T>> = (0..n)
        .map(|c| {
            (0..m)
                .filter(|&r| a.get(r, c) != 0)
                .map(|r| (r, T::from(a.get(r, c))))
                .collect()
        })
        .collect();
    let out = SparseSnf::new(m, n, &columns, true, true).run()?;
    let rank = out.rank();
    let mut diag = vec![0i64; m.min(n)];
    for (k, d) in out.diag.iter().enumerate() {
        diag[k] = to_i64(d)?;
    }
    let p_rows = out.p_rows.expect("tracked");
    let p_inv = out.p_inv_cols.expect("tracked");
    let q = out.q_cols.expect("tracked");
    let mut p = IntMatrix::zeros(m, m);
    let mut pi = IntMatrix::zeros(m, m);
    for (k, &r) in out.row_order.iter().enumerate() {
        for (c, v) in &p_rows[r] {
            p.set(k, *c, to_i64(v)?);
        }
        for (c, v) in &p_inv[r] {
            pi.set(*c, k, to_i64(v)?);
        }
    }
    let mut qm = IntMatrix::zeros(n, n);
    for (k, &c) in out.col_order.iter().enumerate() {
        for (r, v) in &q[c] {
            qm.set(*r, k, to_i64(v)?);
        }
    }
    Ok(SnfResult {
        diag,
        rank,
        row_transform: p,
        row_transform_inverse: pi,
        col_transform: qm,
    })
}

/// Smith normal form with transforms. Runs in 64-bit arithmetic and falls
/// back to arbitrary precision if intermediate values overflow; fails with
/// [`crate::Error::Overflow`] only if a transform entry itself does not fit.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SnfResult> {
    with_escalation(|| dense_snf::<i64>(a), || dense_snf::<BigInt>(a))
}
