//! Exact integer linear algebra on row vectors: echelon lattices, left
//! kernels, Smith normal form with column transform, abelian invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Row = Vec<BigInt>;
pub type Mat = Vec<Row>;

pub fn zero_row(n: usize) -> Row {
    vec![BigInt::zero(); n]
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            let mut r = zero_row(n);
            r[i] = BigInt::one();
            r
        })
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn to_i64(row: &[BigInt]) -> Result<Vec<i64>> {
    row.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Internal(format!("integer {x} exceeds 64 bits"))))
        .collect()
}

fn axpy(dst: &mut [BigInt], k: &BigInt, src: &[BigInt]) {
    if k.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += k * s;
        }
    }
}

pub fn row_times_mat(v: &[BigInt], m: &[Row], ncols: usize) -> Row {
    let mut out = zero_row(ncols);
    for (x, r) in v.iter().zip(m) {
        axpy(&mut out, x, r);
    }
    out
}

fn leading(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// A sublattice of `Z^n` kept in Hermite normal form, optionally with the
/// coefficients expressing each basis row in terms of inserted rows.
#[derive(Clone, Debug)]
pub struct Lattice {
    n: usize,
    /// pivot column -> row (pivot entry positive)
    rows: Vec<Option<Row>>,
    track: Option<(usize, Vec<Option<Row>>)>,
    inserted: usize,
}

impl Lattice {
    pub fn new(n: usize) -> Self {
        Lattice {
            n,
            rows: vec![None; n],
            track: None,
            inserted: 0,
        }
    }

    /// Tracks coefficients with respect to at most `max_inserts` inserted rows.
    pub fn with_tracking(n: usize, max_inserts: usize) -> Self {
        Lattice {
            n,
            rows: vec![None; n],
            track: Some((max_inserts, vec![None; n])),
            inserted: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    /// Inserts `v`; returns a dependency (coefficients over inserted rows) when
    /// tracking and `v` reduced to zero.
    pub fn insert(&mut self, v: Row) -> Option<Row> {
        assert_eq!(v.len(), self.n);
        let idx = self.inserted;
        self.inserted += 1;
        let mut coeff = self.track.as_ref().map(|(m, _)| {
            let mut c = zero_row(*m);
            c[idx] = BigInt::one();
            c
        });
        let mut v = v;
        while let Some(p) = leading(&v) {
            match self.rows[p].take() {
                None => {
                    if v[p].is_negative() {
                        v.iter_mut().for_each(|x| *x = -x.clone());
                        if let Some(c) = coeff.as_mut() {
                            c.iter_mut().for_each(|x| *x = -x.clone());
                        }
                    }
                    self.rows[p] = Some(v);
                    if let Some((_, t)) = self.track.as_mut() {
                        t[p] = coeff;
                    }
                    self.reduce_above(p);
                    return None;
                }
                Some(r) => {
                    let rc = self.track.as_mut().and_then(|(_, t)| t[p].take());
                    let a = r[p].clone();
                    let b = v[p].clone();
                    let e = a.extended_gcd(&b);
                    let g = e.gcd;
                    // new pivot row = x*r + y*v; eliminated = (b/g)*r - (a/g)*v
                    let (x, y) = (e.x, e.y);
                    let (bg, ag) = (&b / &g, &a / &g);
                    let mut piv = zero_row(self.n);
                    axpy(&mut piv, &x, &r);
                    axpy(&mut piv, &y, &v);
                    let mut rest = zero_row(self.n);
                    axpy(&mut rest, &bg, &r);
                    axpy(&mut rest, &(-&ag), &v);
                    if let (Some(rc), Some(vc)) = (rc, coeff.as_ref()) {
                        let m = rc.len();
                        let mut pc = zero_row(m);
                        axpy(&mut pc, &x, &rc);
                        axpy(&mut pc, &y, vc);
                        let mut restc = zero_row(m);
                        axpy(&mut restc, &bg, &rc);
                        axpy(&mut restc, &(-&ag), vc);
                        if let Some((_, t)) = self.track.as_mut() {
                            t[p] = Some(pc);
                        }
                        coeff = Some(restc);
                    }
                    self.rows[p] = Some(piv);
                    self.reduce_above(p);
                    v = rest;
                }
            }
        }
        coeff
    }

    fn reduce_above(&mut self, p: usize) {
        // reduce entries below the new pivot's own later pivots, then other rows at column p
        let mut row = self.rows[p].take().unwrap();
        let mut rc = self.track.as_mut().and_then(|(_, t)| t[p].take());
        for q in p + 1..self.n {
            if let Some(r) = &self.rows[q] {
                if !row[q].is_zero() {
                    let k = row[q].div_floor(&r[q]);
                    axpy(&mut row, &(-&k), r);
                    if let (Some(c), Some((_, t))) = (rc.as_mut(), self.track.as_ref()) {
                        axpy(c, &(-&k), t[q].as_ref().unwrap());
                    }
                }
            }
        }
        for q in 0..p {
            let k = match &self.rows[q] {
                Some(r) if !r[p].is_zero() => r[p].div_floor(&row[p]),
                _ => continue,
            };
            if k.is_zero() {
                continue;
            }
            let r = self.rows[q].as_mut().unwrap();
            axpy(r, &(-&k), &row);
            if let (Some(c), Some((_, t))) = (rc.as_ref(), self.track.as_mut()) {
                axpy(t[q].as_mut().unwrap(), &(-&k), c);
            }
        }
        self.rows[p] = Some(row);
        if let Some((_, t)) = self.track.as_mut() {
            t[p] = rc.take();
        }
    }

    /// Reduces `v` modulo the lattice; the result is canonical.
    pub fn reduce(&self, v: &[BigInt]) -> Row {
        let mut v = v.to_vec();
        for p in 0..self.n {
            if let Some(r) = &self.rows[p] {
                if !v[p].is_zero() {
                    let k = v[p].div_floor(&r[p]);
                    axpy(&mut v, &(-&k), r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coefficients `c` over the inserted rows with `c · inserted = v`, if `v` is in the lattice.
    pub fn solve(&self, v: &[BigInt]) -> Option<Row> {
        let (m, t) = self.track.as_ref()?;
        let mut v = v.to_vec();
        let mut c = zero_row(*m);
        for p in 0..self.n {
            if v[p].is_zero() {
                continue;
            }
            let r = self.rows[p].as_ref()?;
            let (k, rem) = v[p].div_rem(&r[p]);
            if !rem.is_zero() {
                return None;
            }
            axpy(&mut v, &(-&k), r);
            axpy(&mut c, &k, t[p].as_ref().unwrap());
        }
        Some(c)
    }

    /// Basis rows in Hermite normal form, ordered by pivot.
    pub fn basis(&self) -> Mat {
        let mut rows: Vec<Option<Row>> = self.rows.clone();
        for q in 0..self.n {
            let Some(mut row) = rows[q].take() else { continue };
            for p in q + 1..self.n {
                if let Some(r) = &rows[p] {
                    if !row[p].is_zero() {
                        let k = row[p].div_floor(&r[p]);
                        axpy(&mut row, &(-&k), r);
                    }
                }
            }
            rows[q] = Some(row);
        }
        // later rows are untouched by the pass, so earlier rows end fully reduced
        rows.into_iter().flatten().collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.n).filter(|&p| self.rows[p].is_some()).collect()
    }

    /// The lattice is all of `Z^n`.
    pub fn is_full(&self) -> bool {
        self.rows.iter().all(|r| matches!(r, Some(v) if leading(v).is_some_and(|p| v[p].is_one())))
    }
}

pub fn lattice_of(rows: &[Row], n: usize) -> Lattice {
    let mut l = Lattice::new(n);
    for r in rows {
        l.insert(r.clone());
    }
    l
}

/// Hermite normal form of the row span.
pub fn hnf(rows: &[Row], n: usize) -> Mat {
    lattice_of(rows, n).basis()
}

/// Basis of `{ v : v · m = 0 }` for an `r × n` matrix `m`.
pub fn left_kernel(m: &[Row], n: usize) -> Mat {
    let r = m.len();
    let mut l = Lattice::with_tracking(n, r);
    let mut deps = Vec::new();
    for row in m {
        if let Some(d) = l.insert(row.clone()) {
            deps.push(d);
        }
    }
    // dependencies found during insertion span the kernel; normalize
    hnf(&deps, r)
}

/// Smith normal form `D = U m V`; returns the diagonal (length min(r, n),
/// nonnegative, each dividing the next among nonzero entries) and `V`.
pub fn smith(m: &[Row], n: usize) -> (Vec<BigInt>, Mat) {
    // shrink the row count first: SNF depends only on the row lattice
    let mut a = hnf(m, n);
    let rows = a.len();
    let mut v = identity(n);
    let mut t = 0;
    while t < rows.min(n) {
        // pick smallest nonzero pivot in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        swap_cols(&mut a, t, bj);
        swap_cols(&mut v, t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let pr = a[t].clone();
                    axpy(&mut a[i], &(-&q), &pr);
                    if !a[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_axpy(&mut a, j, &(-&q), t);
                    col_axpy(&mut v, j, &(-&q), t);
                    if !a[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                let mut best: Option<(usize, usize)> = None;
                for i in t..rows {
                    let j = t;
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
                for j in t..n {
                    let i = t;
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
                let (bi, bj) = best.unwrap();
                a.swap(t, bi);
                swap_cols(&mut a, t, bj);
                swap_cols(&mut v, t, bj);
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let ri = a[i].clone();
                    axpy(&mut a[t], &BigInt::one(), &ri);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            a[t].iter_mut().for_each(|x| *x = -x.clone());
        }
        t += 1;
    }
    let diag = (0..rows.min(n)).map(|i| a[i][i].clone()).collect();
    (diag, v)
}

fn swap_cols(m: &mut [Row], a: usize, b: usize) {
    if a != b {
        for r in m.iter_mut() {
            r.swap(a, b);
        }
    }
}

/// column `dst += k * column src`
fn col_axpy(m: &mut [Row], dst: usize, k: &BigInt, src: usize) {
    for r in m.iter_mut() {
        if !r[src].is_zero() {
            let add = k * &r[src];
            r[dst] += add;
        }
    }
}

/// Free rank and torsion coefficients of a finitely generated abelian group.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Divisibility chain check.
    pub fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|&t| t >= 2) && self.torsion.windows(2).all(|w| w[1] % w[0] == 0)
    }

    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        if self.free_rank > 0 {
            parts.insert(
                0,
                if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) },
            );
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Invariants of `Z^n / rowspan(rows)`.
pub fn abelian_invariants(rows: &[Row], n: usize) -> Result<AbelianInvariants> {
    let (diag, _) = smith(rows, n);
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let mut torsion = Vec::new();
    for d in diag.iter().filter(|d| !d.is_zero() && !d.is_one()) {
        torsion.push(d.to_u64().ok_or_else(|| Error::Internal(format!("torsion coefficient {d} too large")))?);
    }
    Ok(AbelianInvariants {
        free_rank: n - rank,
        torsion,
    })
}
