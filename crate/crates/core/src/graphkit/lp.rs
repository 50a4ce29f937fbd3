//! Revised simplex for covering-type LPs `min c·x, A x = b, x >= 0`, started
//! from a feasible basis supplied by the caller.
//!
//! Generic over the scalar so that the same code runs in floating point (for
//! column generation) and in exact rationals (for small oracle problems).
//! The basis inverse is kept explicitly; problems here have at most a few
//! hundred rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Scalar field for [`Simplex`].
pub trait Scalar: Clone + PartialOrd + Signed + std::fmt::Debug {
    /// Values within this of zero count as zero.
    fn tolerance() -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact types never need refactorization.
    const EXACT: bool;
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-11
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    const EXACT: bool = false;
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        BigRational::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    const EXACT: bool = true;
}

/// Sparse column: `(row, coefficient)` pairs.
pub type Column<T> = Vec<(usize, T)>;

#[derive(Debug, Clone)]
pub struct Simplex<T> {
    rows: usize,
    columns: Vec<Column<T>>,
    cost: Vec<T>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    binv: Vec<Vec<T>>,
    xb: Vec<T>,
    since_refactor: usize,
}

const REFACTOR_EVERY: usize = 50;
const STALL_LIMIT: usize = 50;

impl<T: Scalar> Simplex<T> {
    pub fn new(rhs: Vec<T>) -> Self {
        let rows = rhs.len();
        Self {
            rows,
            columns: Vec::new(),
            cost: Vec::new(),
            rhs,
            basis: Vec::new(),
            binv: Vec::new(),
            xb: Vec::new(),
            since_refactor: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    /// Adds a nonbasic column and returns its index.
    pub fn add_column(&mut self, column: Column<T>, cost: T) -> usize {
        debug_assert!(column.iter().all(|&(i, _)| i < self.rows));
        self.columns.push(column);
        self.cost.push(cost);
        self.columns.len() - 1
    }

    /// Installs a basis (one column per row); it must be primal feasible.
    pub fn set_basis(&mut self, basis: Vec<usize>) -> Result<()> {
        if basis.len() != self.rows || basis.iter().any(|&j| j >= self.columns.len()) {
            return Err(Error::InvalidArgument("basis must name one existing column per row".into()));
        }
        self.basis = basis;
        self.refactor()?;
        if self.xb.iter().any(|x| *x < -T::tolerance()) {
            return Err(Error::InvalidArgument("initial basis is not primal feasible".into()));
        }
        Ok(())
    }

    /// Rebuilds the basis inverse by Gauss-Jordan elimination with partial
    /// pivoting.
    fn refactor(&mut self) -> Result<()> {
        let m = self.rows;
        let mut a = vec![vec![T::zero(); 2 * m]; m];
        for (k, &j) in self.basis.iter().enumerate() {
            for (i, v) in &self.columns[j] {
                a[*i][k] = v.clone();
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[m + i] = T::one();
        }
        for col in 0..m {
            let pivot = (col..m)
                .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).expect("comparable"))
                .expect("nonempty range");
            if a[pivot][col].abs() <= T::tolerance() {
                return Err(Error::InvariantViolated("singular basis".into()));
            }
            a.swap(col, pivot);
            let p = a[col][col].clone();
            for v in a[col].iter_mut() {
                *v = v.clone() / p.clone();
            }
            for r in 0..m {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..2 * m {
                        if !a[col][c].is_zero() {
                            let delta = f.clone() * a[col][c].clone();
                            a[r][c] = a[r][c].clone() - delta;
                        }
                    }
                }
            }
        }
        self.binv = a.into_iter().map(|row| row[m..].to_vec()).collect();
        self.xb = (0..m)
            .map(|i| {
                let mut s = T::zero();
                for (k, b) in self.rhs.iter().enumerate() {
                    if !b.is_zero() {
                        s = s + self.binv[i][k].clone() * b.clone();
                    }
                }
                s
            })
            .collect();
        self.since_refactor = 0;
        Ok(())
    }

    /// Simplex multipliers `y = c_B B^-1`.
    pub fn duals(&self) -> Vec<T> {
        let m = self.rows;
        let mut y = vec![T::zero(); m];
        for (k, &j) in self.basis.iter().enumerate() {
            let c = &self.cost[j];
            if c.is_zero() {
                continue;
            }
            for (i, yi) in y.iter_mut().enumerate() {
                if !self.binv[k][i].is_zero() {
                    *yi = yi.clone() + c.clone() * self.binv[k][i].clone();
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[T]) -> T {
        let mut d = self.cost[j].clone();
        for (i, v) in &self.columns[j] {
            d = d - y[*i].clone() * v.clone();
        }
        d
    }

    pub fn objective(&self) -> T {
        let mut s = T::zero();
        for (k, &j) in self.basis.iter().enumerate() {
            s = s + self.cost[j].clone() * self.xb[k].clone();
        }
        s
    }

    /// Value of every column in the current basic solution.
    pub fn primal(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.columns.len()];
        for (k, &j) in self.basis.iter().enumerate() {
            x[j] = self.xb[k].clone();
        }
        x
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Pivots to optimality. Dantzig pricing, switching to Bland's rule
    /// after a run of degenerate pivots; exact scalars use Bland throughout.
    pub fn solve(&mut self, max_pivots: usize) -> Result<()> {
        if self.basis.len() != self.rows {
            return Err(Error::InvalidArgument("no basis installed".into()));
        }
        let tol = T::tolerance();
        let mut stalled = 0usize;
        let mut in_basis = vec![false; self.columns.len()];
        for &j in &self.basis {
            in_basis[j] = true;
        }
        for _ in 0..max_pivots {
            if !T::EXACT && self.since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            let y = self.duals();
            let bland = T::EXACT || stalled >= STALL_LIMIT;
            let mut entering: Option<(usize, T)> = None;
            for j in 0..self.columns.len() {
                if in_basis[j] {
                    continue;
                }
                let d = self.reduced_cost(j, &y);
                if d < -tol.clone() {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    if entering.as_ref().is_none_or(|(_, best)| d < *best) {
                        entering = Some((j, d));
                    }
                }
            }
            let Some((j, _)) = entering else {
                return Ok(());
            };
            // direction B^-1 a_j
            let m = self.rows;
            let mut dir = vec![T::zero(); m];
            for (i, v) in &self.columns[j] {
                for (k, dk) in dir.iter_mut().enumerate() {
                    if !self.binv[k][*i].is_zero() {
                        *dk = dk.clone() + self.binv[k][*i].clone() * v.clone();
                    }
                }
            }
            // ratio test; ties go to the smallest basic column index
            let mut leave: Option<(usize, T)> = None;
            for k in 0..m {
                if dir[k] > tol {
                    let ratio = self.xb[k].clone() / dir[k].clone();
                    let better = match &leave {
                        None => true,
                        Some((l, best)) => ratio < *best || (ratio == *best && self.basis[k] < self.basis[*l]),
                    };
                    if better {
                        leave = Some((k, ratio));
                    }
                }
            }
            let Some((r, step)) = leave else {
                return Err(Error::InvariantViolated("LP is unbounded".into()));
            };
            if step <= tol {
                stalled += 1;
            } else {
                stalled = 0;
            }
            let p = dir[r].clone();
            for v in self.binv[r].iter_mut() {
                *v = v.clone() / p.clone();
            }
            self.xb[r] = self.xb[r].clone() / p;
            for k in 0..m {
                if k == r || dir[k].is_zero() {
                    continue;
                }
                let f = dir[k].clone();
                for i in 0..m {
                    if !self.binv[r][i].is_zero() {
                        let delta = f.clone() * self.binv[r][i].clone();
                        self.binv[k][i] = self.binv[k][i].clone() - delta;
                    }
                }
                let delta = f * self.xb[r].clone();
                self.xb[k] = self.xb[k].clone() - delta;
                if !T::EXACT && self.xb[k] < T::zero() && self.xb[k] > -tol.clone() {
                    self.xb[k] = T::zero();
                }
            }
            in_basis[self.basis[r]] = false;
            in_basis[j] = true;
            self.basis[r] = j;
            self.since_refactor += 1;
        }
        Err(Error::IterationCap(max_pivots))
    }
}
