//! Smith normal form over the integers.
//!
//! The reduction keeps the whole computation exact over arbitrary-precision
//! integers. Pivots are chosen by minimal absolute value (unit entries first,
//! with a Markowitz-style fill tie-break) so intermediate entries stay small
//! on the boundary matrices this crate produces, which are dominated by ±1
//! coefficients.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::SparseIntMatrix;

/// Result of a Smith normal form computation.
///
/// `diag` holds the nonzero invariant factors `d_1 | d_2 | ... | d_r`, all
/// positive. When transforms were requested, `u` and `v` are unimodular with
/// `u * m * v` equal to the diagonal matrix padded with zeros.
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub diag: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
    pub u: Option<SparseIntMatrix>,
    pub v: Option<SparseIntMatrix>,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Invariant factors greater than one, i.e. the torsion coefficients of
    /// the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// The diagonal matrix `D` with the invariant factors on the diagonal.
    pub fn diagonal_matrix(&self) -> SparseIntMatrix {
        let mut d = SparseIntMatrix::zero(self.rows, self.cols);
        for (i, val) in self.diag.iter().enumerate() {
            d.set(i, i, val.clone());
        }
        d
    }
}

struct Reduction {
    nrows: usize,
    ncols: usize,
    rows: Vec<BTreeMap<usize, BigInt>>,
    col_rows: Vec<BTreeSet<usize>>,
    row_active: Vec<bool>,
    col_active: Vec<bool>,
    // Unimodular transform trackers, mirrored row/column operations.
    u_rows: Option<Vec<BTreeMap<usize, BigInt>>>,
    v_cols: Option<Vec<BTreeMap<usize, BigInt>>>,
    unit_queue: VecDeque<(usize, usize)>,
    pivots: Vec<(usize, usize, BigInt)>,
}

impl Reduction {
    fn new(m: &SparseIntMatrix, with_transforms: bool) -> Self {
        let nrows = m.rows();
        let ncols = m.cols();
        let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); nrows];
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
        let mut unit_queue = VecDeque::new();
        for (r, c, v) in m.iter() {
            rows[r].insert(c, v.clone());
            col_rows[c].insert(r);
            if v.abs().is_one() {
                unit_queue.push_back((r, c));
            }
        }
        let u_rows = with_transforms.then(|| {
            (0..nrows)
                .map(|r| BTreeMap::from([(r, BigInt::one())]))
                .collect()
        });
        let v_cols = with_transforms.then(|| {
            (0..ncols)
                .map(|c| BTreeMap::from([(c, BigInt::one())]))
                .collect()
        });
        Reduction {
            nrows,
            ncols,
            rows,
            col_rows,
            row_active: vec![true; nrows],
            col_active: vec![true; ncols],
            u_rows,
            v_cols,
            unit_queue,
            pivots: Vec::new(),
        }
    }

    fn entry(&self, r: usize, c: usize) -> Option<&BigInt> {
        self.rows[r].get(&c)
    }

    fn set_entry(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.col_rows[c].remove(&r);
        } else {
            if v.abs().is_one() {
                self.unit_queue.push_back((r, c));
            }
            self.rows[r].insert(c, v);
            self.col_rows[c].insert(r);
        }
    }

    /// row[dst] += q * row[src]
    fn row_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src_row: Vec<(usize, BigInt)> = self.rows[src]
            .iter()
            .map(|(&c, v)| (c, v.clone()))
            .collect();
        for (c, v) in src_row {
            let cur = self.entry(dst, c).cloned().unwrap_or_else(BigInt::zero);
            self.set_entry(dst, c, cur + q * v);
        }
        if let Some(u) = self.u_rows.as_mut() {
            let src_row: Vec<(usize, BigInt)> =
                u[src].iter().map(|(&c, v)| (c, v.clone())).collect();
            for (c, v) in src_row {
                let e = u[dst].entry(c).or_insert_with(BigInt::zero);
                *e += q * v;
                if e.is_zero() {
                    u[dst].remove(&c);
                }
            }
        }
    }

    /// col[dst] += q * col[src]
    fn col_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src_rows: Vec<usize> = self.col_rows[src].iter().copied().collect();
        for r in src_rows {
            let v = self.rows[r].get(&src).cloned().unwrap_or_else(BigInt::zero);
            let cur = self.entry(r, dst).cloned().unwrap_or_else(BigInt::zero);
            self.set_entry(r, dst, cur + q * &v);
        }
        if let Some(v_cols) = self.v_cols.as_mut() {
            let src_col: Vec<(usize, BigInt)> = v_cols[src]
                .iter()
                .map(|(&r, val)| (r, val.clone()))
                .collect();
            for (r, val) in src_col {
                let e = v_cols[dst].entry(r).or_insert_with(BigInt::zero);
                *e += q * val;
                if e.is_zero() {
                    v_cols[dst].remove(&r);
                }
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for v in self.rows[r].values_mut() {
            *v = -(v.clone());
        }
        if let Some(u) = self.u_rows.as_mut() {
            for v in u[r].values_mut() {
                *v = -(v.clone());
            }
        }
    }

    /// Picks a pivot: a queued unit entry when available (best fill among a
    /// small sample), otherwise the active entry of minimal absolute value.
    fn pick_pivot(&mut self) -> Option<(usize, usize)> {
        let mut sampled: Vec<(usize, usize)> = Vec::new();
        while sampled.len() < 32 {
            match self.unit_queue.pop_front() {
                None => break,
                Some((r, c)) => {
                    if self.row_active[r]
                        && self.col_active[c]
                        && self.entry(r, c).map(|v| v.abs().is_one()).unwrap_or(false)
                    {
                        sampled.push((r, c));
                    }
                }
            }
        }
        if !sampled.is_empty() {
            let best = sampled
                .iter()
                .copied()
                .min_by_key(|&(r, c)| (self.rows[r].len() - 1) * (self.col_rows[c].len() - 1))
                .unwrap();
            for pos in sampled {
                if pos != best {
                    self.unit_queue.push_back(pos);
                }
            }
            return Some(best);
        }
        // Full scan for the minimal absolute value among active entries.
        let mut best: Option<(usize, usize, BigInt)> = None;
        for r in 0..self.nrows {
            if !self.row_active[r] {
                continue;
            }
            for (&c, v) in &self.rows[r] {
                if !self.col_active[c] {
                    continue;
                }
                let a = v.abs();
                let better = match &best {
                    None => true,
                    Some((br, bc, bv)) => {
                        a < *bv
                            || (a == *bv
                                && (self.rows[r].len() - 1) * (self.col_rows[c].len() - 1)
                                    < (self.rows[*br].len() - 1) * (self.col_rows[*bc].len() - 1))
                    }
                };
                if better {
                    best = Some((r, c, a));
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    }

    /// Rounded division: the q minimizing |a - q p|.
    fn round_div(a: &BigInt, p: &BigInt) -> BigInt {
        let (q, r) = a.div_rem(p);
        if r.abs() * BigInt::from(2) > p.abs() {
            // Shift q by one towards the smaller remainder.
            if (&r * p).is_negative() {
                q - 1
            } else {
                q + 1
            }
        } else {
            q
        }
    }

    fn process_pivot(&mut self, mut pr: usize, mut pc: usize) {
        loop {
            // Clear the pivot column with row operations. A nonzero remainder
            // becomes the new, strictly smaller pivot.
            let mut restart = false;
            loop {
                let others: Vec<usize> = self.col_rows[pc]
                    .iter()
                    .copied()
                    .filter(|&r| r != pr && self.row_active[r])
                    .collect();
                if others.is_empty() {
                    break;
                }
                let p = self.entry(pr, pc).cloned().expect("pivot present");
                let mut moved = false;
                for r in others {
                    let a = match self.entry(r, pc) {
                        Some(a) => a.clone(),
                        None => continue,
                    };
                    let q = Self::round_div(&a, &p);
                    self.row_add(r, pr, &(-q));
                    if self.entry(r, pc).is_some() {
                        pr = r;
                        moved = true;
                        break;
                    }
                }
                if !moved {
                    break;
                }
            }
            // Clear the pivot row with column operations.
            loop {
                let others: Vec<usize> = self.rows[pr]
                    .keys()
                    .copied()
                    .filter(|&c| c != pc && self.col_active[c])
                    .collect();
                if others.is_empty() {
                    break;
                }
                let p = self.entry(pr, pc).cloned().expect("pivot present");
                let mut moved = false;
                for c in others {
                    let a = match self.entry(pr, c) {
                        Some(a) => a.clone(),
                        None => continue,
                    };
                    let q = Self::round_div(&a, &p);
                    self.col_add(c, pc, &(-q));
                    if self.entry(pr, c).is_some() {
                        pc = c;
                        moved = true;
                        break;
                    }
                }
                if moved {
                    restart = true;
                    break;
                }
            }
            if restart {
                continue;
            }
            // Row and column are clear. Enforce divisibility: the pivot must
            // divide every remaining active entry, otherwise pull the
            // offending row in and keep reducing.
            let p = self.entry(pr, pc).cloned().expect("pivot present");
            if !p.abs().is_one() {
                let mut offender: Option<usize> = None;
                'scan: for r in 0..self.nrows {
                    if !self.row_active[r] || r == pr {
                        continue;
                    }
                    for (&c, v) in &self.rows[r] {
                        if self.col_active[c] && !(v % &p).is_zero() {
                            offender = Some(r);
                            break 'scan;
                        }
                    }
                }
                if let Some(r) = offender {
                    self.row_add(pr, r, &BigInt::one());
                    continue;
                }
            }
            break;
        }
        // Normalize the pivot sign.
        if self.entry(pr, pc).expect("pivot present").is_negative() {
            self.negate_row(pr);
        }
        let value = self.entry(pr, pc).cloned().expect("pivot present");
        self.row_active[pr] = false;
        self.col_active[pc] = false;
        self.pivots.push((pr, pc, value));
    }

    fn run(mut self) -> SmithNormalForm {
        while let Some((r, c)) = self.pick_pivot() {
            self.process_pivot(r, c);
        }
        let rank = self.pivots.len();
        let diag: Vec<BigInt> = self.pivots.iter().map(|(_, _, v)| v.clone()).collect();
        // The divisibility chain holds by construction; check in debug builds.
        debug_assert!(diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        let (u, v) = if let (Some(u_rows), Some(v_cols)) = (self.u_rows, self.v_cols) {
            // Compose with the permutations that move pivot k to slot k.
            let mut row_order: Vec<usize> = self.pivots.iter().map(|&(r, _, _)| r).collect();
            let mut seen_rows: BTreeSet<usize> = row_order.iter().copied().collect();
            for r in 0..self.nrows {
                if !seen_rows.contains(&r) {
                    row_order.push(r);
                    seen_rows.insert(r);
                }
            }
            let mut col_order: Vec<usize> = self.pivots.iter().map(|&(_, c, _)| c).collect();
            let mut seen_cols: BTreeSet<usize> = col_order.iter().copied().collect();
            for c in 0..self.ncols {
                if !seen_cols.contains(&c) {
                    col_order.push(c);
                    seen_cols.insert(c);
                }
            }
            let mut u = SparseIntMatrix::zero(self.nrows, self.nrows);
            for (slot, &orig) in row_order.iter().enumerate() {
                for (&c, val) in &u_rows[orig] {
                    u.set(slot, c, val.clone());
                }
            }
            let mut v = SparseIntMatrix::zero(self.ncols, self.ncols);
            for (slot, &orig) in col_order.iter().enumerate() {
                for (&r, val) in &v_cols[orig] {
                    v.set(r, slot, val.clone());
                }
            }
            (Some(u), Some(v))
        } else {
            (None, None)
        };
        debug_assert_eq!(rank, diag.len());
        SmithNormalForm {
            diag,
            rows: self.nrows,
            cols: self.ncols,
            u,
            v,
        }
    }
}

/// Computes the Smith normal form of `m`.
///
/// With `with_transforms` set, the result carries unimodular `u`, `v` with
/// `u * m * v = d` exactly.
pub fn smith_normal_form(m: &SparseIntMatrix, with_transforms: bool) -> SmithNormalForm {
    Reduction::new(m, with_transforms).run()
}

/// Rank of an integer matrix via Smith normal form.
pub fn rank(m: &SparseIntMatrix) -> usize {
    smith_normal_form(m, false).rank()
}

/// An integral basis of the kernel lattice of `m`, returned as the columns of
/// a matrix. The kernel of an integer matrix is saturated, so this basis
/// generates all integer solutions of `m x = 0`.
pub fn kernel_basis(m: &SparseIntMatrix) -> SparseIntMatrix {
    let snf = smith_normal_form(m, true);
    let v = snf.v.as_ref().expect("transforms requested");
    let r = snf.rank();
    let k = m.cols() - r;
    let mut out = SparseIntMatrix::zero(m.cols(), k);
    for (row, col, val) in v.iter() {
        if col >= r {
            out.set(row, col - r, val.clone());
        }
    }
    out
}

/// Solves `m x = b` over the integers.
pub struct IntegralSolver {
    snf: SmithNormalForm,
}

impl IntegralSolver {
    pub fn new(m: &SparseIntMatrix) -> Self {
        IntegralSolver {
            snf: smith_normal_form(m, true),
        }
    }

    pub fn rank(&self) -> usize {
        self.snf.rank()
    }

    /// Returns some integral solution of `m x = b`, or `None` when none
    /// exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.snf.rows, "dimension mismatch");
        let u = self.snf.u.as_ref().unwrap();
        let v = self.snf.v.as_ref().unwrap();
        let y = u.apply(b);
        let r = self.snf.rank();
        let mut coeffs = vec![BigInt::zero(); self.snf.cols];
        for (i, yi) in y.iter().enumerate() {
            if i < r {
                let (q, rem) = yi.div_rem(&self.snf.diag[i]);
                if !rem.is_zero() {
                    return None;
                }
                coeffs[i] = q;
            } else if !yi.is_zero() {
                return None;
            }
        }
        Some(v.apply(&coeffs))
    }
}
