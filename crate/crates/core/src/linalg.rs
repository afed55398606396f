//! Exact rational linear algebra and cohomology of finite cochain complexes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse matrix over ℚ. Only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Q) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Q)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mul_vec(&self, x: &[Q]) -> Result<Vec<Q>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = vec![Q::zero(); self.rows];
        for (&(i, j), v) in &self.entries {
            if !x[j].is_zero() {
                out[i] += v * &x[j];
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &Q)>> = BTreeMap::new();
        for (&(k, j), v) in &other.entries {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add_to(i, j, &(a * b));
                }
            }
        }
        Ok(out)
    }

    fn dense_rows(&self) -> Vec<BTreeMap<usize, Q>> {
        let mut rows = vec![BTreeMap::new(); self.rows];
        for (&(i, j), v) in &self.entries {
            rows[i].insert(j, v.clone());
        }
        rows
    }

    pub fn rank(&self) -> usize {
        rref(self.dense_rows(), self.cols).pivots.len()
    }
}

struct Echelon {
    /// Reduced rows, one per pivot, in pivot order.
    rows: Vec<BTreeMap<usize, Q>>,
    pivots: Vec<usize>,
}

/// Reduced row echelon form with deterministic pivoting: columns are scanned
/// left to right and the first row (in original order) with a nonzero entry
/// becomes the pivot row.
fn rref(rows: Vec<BTreeMap<usize, Q>>, cols: usize) -> Echelon {
    let mut pending: Vec<BTreeMap<usize, Q>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut done: Vec<BTreeMap<usize, Q>> = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(pos) = pending.iter().position(|r| r.contains_key(&c)) else {
            continue;
        };
        let mut prow = pending.remove(pos);
        let inv = prow[&c].recip();
        for v in prow.values_mut() {
            *v *= &inv;
        }
        for r in pending.iter_mut().chain(done.iter_mut()) {
            if let Some(f) = r.get(&c).cloned() {
                for (j, v) in &prow {
                    let e = r.entry(*j).or_insert_with(Q::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        r.remove(j);
                    }
                }
            }
        }
        pending.retain(|r| !r.is_empty());
        done.push(prow);
        pivots.push(c);
        if pending.is_empty() {
            break;
        }
    }
    Echelon { rows: done, pivots }
}

/// Solve `A x = b` exactly. Returns `None` if the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &RationalMatrix, b: &[Q]) -> Result<Option<Vec<Q>>> {
    if b.len() != a.rows {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} against {} rows",
            b.len(),
            a.rows
        )));
    }
    let n = a.cols;
    let mut rows = a.dense_rows();
    for (i, r) in rows.iter_mut().enumerate() {
        if !b[i].is_zero() {
            r.insert(n, b[i].clone());
        }
    }
    let ech = rref(rows, n + 1);
    if ech.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Q::zero(); n];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        if let Some(v) = row.get(&n) {
            x[p] = v.clone();
        }
    }
    Ok(Some(x))
}

/// Exact basis of the null space. One vector per free column, with that
/// column set to one.
pub fn kernel_basis(a: &RationalMatrix) -> Vec<Vec<Q>> {
    let ech = rref(a.dense_rows(), a.cols);
    let pivot_set: std::collections::BTreeSet<usize> = ech.pivots.iter().copied().collect();
    let mut out = Vec::new();
    for free in (0..a.cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![Q::zero(); a.cols];
        v[free] = Q::one();
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if let Some(c) = row.get(&free) {
                v[p] = -c.clone();
            }
        }
        out.push(v);
    }
    out
}

/// Inclusive integer interval of cohomological degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeWindow {
    lo: i32,
    hi: i32,
}

impl DegreeWindow {
    pub fn new(lo: i32, hi: i32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Argument(format!("empty degree window [{lo}, {hi}]")));
        }
        Ok(DegreeWindow { lo, hi })
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.hi
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> {
        self.lo..=self.hi
    }

    /// Degrees whose cohomology is determined by the window.
    pub fn interior(&self) -> impl Iterator<Item = i32> {
        (self.lo + 1)..self.hi
    }

    pub fn contains(&self, n: i32) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn widen(&self, below: i32, above: i32) -> DegreeWindow {
        DegreeWindow {
            lo: self.lo - below,
            hi: self.hi + above,
        }
    }
}

/// A cochain complex of finite-dimensional ℚ-vector spaces inside a window.
/// `differential(n)` maps degree n to degree n+1 (rows = dim C^{n+1}); the
/// differential leaving `hi` is not stored.
#[derive(Debug, Clone)]
pub struct FiniteComplex {
    window: DegreeWindow,
    labels: BTreeMap<i32, Vec<String>>,
    diffs: BTreeMap<i32, RationalMatrix>,
}

/// Cohomology of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CohomologyDim {
    Dim(usize),
    /// The degree touches the window boundary.
    WindowIncomplete,
}

impl CohomologyDim {
    pub fn value(&self) -> Option<usize> {
        match self {
            CohomologyDim::Dim(d) => Some(*d),
            CohomologyDim::WindowIncomplete => None,
        }
    }
}

impl FiniteComplex {
    /// `labels[n]` names the basis of degree n; `diffs[n]` is the matrix of
    /// C^n → C^{n+1} for lo ≤ n < hi. Missing entries mean zero spaces/maps.
    pub fn new(
        window: DegreeWindow,
        labels: BTreeMap<i32, Vec<String>>,
        diffs: BTreeMap<i32, RationalMatrix>,
    ) -> Result<Self> {
        let c = FiniteComplex {
            window,
            labels,
            diffs,
        };
        for n in window.lo..window.hi {
            let d = c.differential(n);
            if d.cols() != c.dim(n) || d.rows() != c.dim(n + 1) {
                return Err(Error::Dimension(format!(
                    "differential at degree {n} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    c.dim(n + 1),
                    c.dim(n)
                )));
            }
        }
        for n in window.lo..window.hi.saturating_sub(1).max(window.lo) {
            if n + 1 >= window.hi {
                break;
            }
            let dd = c.differential(n + 1).mul(&c.differential(n))?;
            if !dd.is_zero() {
                return Err(Error::InvalidComplex { degree: n });
            }
        }
        Ok(c)
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    pub fn dim(&self, n: i32) -> usize {
        self.labels.get(&n).map_or(0, |l| l.len())
    }

    pub fn labels(&self, n: i32) -> &[String] {
        self.labels.get(&n).map_or(&[], |l| l.as_slice())
    }

    pub fn differential(&self, n: i32) -> RationalMatrix {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| RationalMatrix::zeros(self.dim(n + 1), self.dim(n)))
    }
}

/// `dim ker d_n − rank d_{n−1}` for each degree of the window; degrees on the
/// boundary are flagged rather than computed.
pub fn cohomology_dims(c: &FiniteComplex) -> BTreeMap<i32, CohomologyDim> {
    let w = c.window();
    let mut out = BTreeMap::new();
    for n in w.degrees() {
        if n == w.lo() || n == w.hi() {
            out.insert(n, CohomologyDim::WindowIncomplete);
            continue;
        }
        let ker = c.dim(n) - c.differential(n).rank();
        let im = c.differential(n - 1).rank();
        out.insert(n, CohomologyDim::Dim(ker - im));
    }
    out
}

/// Mapping cone of a chain map `f: X → Y` given per degree as matrices
/// `f_n: X^n → Y^n`. `Cone^n = X^{n+1} ⊕ Y^n` with `d(x, y) = (−dx, f x + dy)`.
///
/// `x` must cover the window shifted up by one; the cone lives on `y`'s window.
pub fn mapping_cone(
    x: &FiniteComplex,
    y: &FiniteComplex,
    f: &BTreeMap<i32, RationalMatrix>,
) -> Result<FiniteComplex> {
    let w = y.window();
    if x.window().lo() > w.lo() + 1 || x.window().hi() < w.hi() + 1 {
        return Err(Error::Argument("source window does not cover the cone".into()));
    }
    let mut labels = BTreeMap::new();
    for n in w.degrees() {
        let mut l: Vec<String> = x.labels(n + 1).iter().map(|s| format!("s({s})")).collect();
        l.extend(y.labels(n).iter().cloned());
        labels.insert(n, l);
    }
    let mut diffs = BTreeMap::new();
    for n in w.lo()..w.hi() {
        let (xa, xb) = (x.dim(n + 1), x.dim(n + 2));
        let (ya, yb) = (y.dim(n), y.dim(n + 1));
        let mut m = RationalMatrix::zeros(xb + yb, xa + ya);
        for (&(i, j), v) in x.differential(n + 1).entries() {
            m.set(i, j, -v.clone());
        }
        if let Some(fm) = f.get(&(n + 1)) {
            for (&(i, j), v) in fm.entries() {
                m.set(xb + i, j, v.clone());
            }
        }
        for (&(i, j), v) in y.differential(n).entries() {
            m.set(xb + i, xa + j, v.clone());
        }
        diffs.insert(n, m);
    }
    FiniteComplex::new(w, labels, diffs)
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Render a rational as `p/q` (or `p` for integers).
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}
