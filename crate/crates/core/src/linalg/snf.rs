use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::SparseIntMatrix;
use super::ring::Ring;
use crate::error::{contract, Result};

/// Remaining blocks at most this size (in both dimensions) go to the dense routine.
const DENSE_THRESHOLD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    /// Positive divisors with `diagonal[k] | diagonal[k+1]`.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub left: Option<SparseIntMatrix>,
    pub right: Option<SparseIntMatrix>,
}

impl SmithDecomposition {
    /// Divisors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Smith form via sparse elimination. Transforms are not tracked.
pub fn smith_normal_form(m: &SparseIntMatrix) -> Result<SmithDecomposition> {
    if m.ring() != Ring::Integers {
        return contract(format!(
            "Smith normal form needs an integer matrix, got {}",
            m.ring()
        ));
    }
    let diagonal = integer_divisors(m);
    Ok(SmithDecomposition {
        rank: diagonal.len(),
        diagonal,
        left: None,
        right: None,
    })
}

/// Smith form with unimodular `left`, `right` such that `left * m * right` is
/// diagonal. Uses dense arithmetic, so only meant for modest sizes.
pub fn smith_normal_form_with_transforms(m: &SparseIntMatrix) -> Result<SmithDecomposition> {
    if m.ring() != Ring::Integers {
        return contract(format!(
            "Smith normal form needs an integer matrix, got {}",
            m.ring()
        ));
    }
    let (diagonal, l, r) = dense_snf(m.to_dense(), m.rows(), m.cols(), true);
    let to_sparse = |d: Vec<Vec<BigInt>>, n: usize| {
        let trip = d
            .into_iter()
            .enumerate()
            .flat_map(|(i, row)| row.into_iter().enumerate().map(move |(j, v)| (i, j, v)));
        SparseIntMatrix::from_triplets(n, n, Ring::Integers, trip)
    };
    let left = to_sparse(l.expect("transforms requested"), m.rows())?;
    let right = to_sparse(r.expect("transforms requested"), m.cols())?;
    Ok(SmithDecomposition {
        rank: diagonal.len(),
        diagonal,
        left: Some(left),
        right: Some(right),
    })
}

/// Rank over the fraction field (Q for integer input) or over F_p.
pub fn rank(m: &SparseIntMatrix) -> usize {
    match m.ring() {
        Ring::PrimeField(p) => fp_rank(m, p),
        _ => {
            let rows = m.to_rows();
            match to_i64_rows(&rows) {
                Some(r) => match eliminate(r, m.cols()) {
                    Some(piv) => piv.len(),
                    None => big_pivots(rows, m.cols()).len(),
                },
                None => big_pivots(rows, m.cols()).len(),
            }
        }
    }
}

/// Nonzero Smith divisors of an integer matrix, normalized into a chain.
pub(crate) fn integer_divisors(m: &SparseIntMatrix) -> Vec<BigInt> {
    let rows = m.to_rows();
    let raw: Vec<BigInt> = match to_i64_rows(&rows) {
        Some(r) => match eliminate(r, m.cols()) {
            Some(piv) => piv.into_iter().map(BigInt::from).collect(),
            None => {
                log::debug!("i64 elimination overflowed, retrying with big integers");
                big_pivots(rows, m.cols())
            }
        },
        None => big_pivots(rows, m.cols()),
    };
    divisor_chain(raw)
}

fn big_pivots(rows: Vec<Vec<(usize, BigInt)>>, cols: usize) -> Vec<BigInt> {
    eliminate(rows, cols).expect("big-integer elimination cannot overflow")
}

fn to_i64_rows(rows: &[Vec<(usize, BigInt)>]) -> Option<Vec<Vec<(usize, i64)>>> {
    rows.iter()
        .map(|r| r.iter().map(|(c, v)| v.to_i64().map(|x| (*c, x))).collect())
        .collect()
}

fn fp_rank(m: &SparseIntMatrix, p: u32) -> usize {
    let rows: Vec<Vec<(usize, Fp)>> = m
        .to_rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|(c, v)| {
                    (
                        c,
                        Fp::new(v.mod_floor(&BigInt::from(p)).to_u64().unwrap(), p as u64),
                    )
                })
                .filter(|(_, v)| v.v != 0)
                .collect()
        })
        .collect();
    eliminate(rows, m.cols())
        .expect("field elimination cannot overflow")
        .len()
}

/// Turns a list of nonzero diagonal entries into the divisor chain of the
/// diagonal matrix they form.
pub(crate) fn divisor_chain(raw: Vec<BigInt>) -> Vec<BigInt> {
    let mut units = 0usize;
    let mut rest: Vec<BigInt> = Vec::new();
    for d in raw {
        let a = d.abs();
        if a.is_one() {
            units += 1;
        } else {
            rest.push(a);
        }
    }
    rest.sort();
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            if (&rest[j] % &rest[i]).is_zero() {
                continue;
            }
            let g = rest[i].gcd(&rest[j]);
            let l = &rest[i] / &g * &rest[j];
            rest[i] = g;
            rest[j] = l;
        }
    }
    let mut out: Vec<BigInt> = vec![BigInt::one(); units];
    for d in rest {
        if d.is_one() {
            out.insert(0, d);
        } else {
            out.push(d);
        }
    }
    out
}

/// Scalar operations the elimination needs. Methods return `None` on overflow.
pub(crate) trait Coef: Clone + PartialEq + Debug {
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn mag_cmp(&self, other: &Self) -> Ordering;
    /// Quotient leaving a remainder of smaller magnitude than `p`.
    fn quot(&self, p: &Self) -> Option<Self>;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn from_big(d: &BigInt) -> Option<Self>;
}

impl Coef for i64 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn zero_like(&self) -> Self {
        0
    }
    fn mag_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn quot(&self, p: &Self) -> Option<Self> {
        self.checked_div_euclid(*p)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_big(d: &BigInt) -> Option<Self> {
        d.to_i64()
    }
}

impl Coef for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn mag_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn quot(&self, p: &Self) -> Option<Self> {
        Some(self.div_floor(p))
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_big(d: &BigInt) -> Option<Self> {
        Some(d.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    fn new(v: u64, p: u64) -> Fp {
        Fp { v: v % p, p }
    }
    fn inv(&self) -> u64 {
        // p is prime, so v^(p-2) is the inverse
        let mut base = self.v;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Coef for Fp {
    fn is_nil(&self) -> bool {
        self.v == 0
    }
    fn is_unit(&self) -> bool {
        self.v != 0
    }
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn mag_cmp(&self, _other: &Self) -> Ordering {
        Ordering::Equal
    }
    fn quot(&self, p: &Self) -> Option<Self> {
        Some(Fp::new(self.v * p.inv(), self.p))
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        let prod = q.v * b.v % self.p;
        Some(Fp::new(self.v + self.p - prod, self.p))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(self.v)
    }
    fn from_big(_d: &BigInt) -> Option<Self> {
        // every nonzero entry is a unit, so the unit phase leaves nothing behind
        None
    }
}

struct Elim<T> {
    rows: Vec<Vec<(usize, T)>>,
    col_rows: Vec<BTreeSet<usize>>,
    pivots: Vec<T>,
}

impl<T: Coef> Elim<T> {
    fn entry(&self, r: usize, c: usize) -> Option<&T> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0)
            .ok()
            .map(|k| &row[k].1)
    }

    /// row_k -= q * row_r
    fn axpy(&mut self, k: usize, q: &T, r: usize) -> Option<()> {
        let old = std::mem::take(&mut self.rows[k]);
        let src = &self.rows[r];
        let mut out = Vec::with_capacity(old.len() + src.len());
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < src.len() {
            let take_old = j >= src.len() || (i < old.len() && old[i].0 < src[j].0);
            let take_src = i >= old.len() || (j < src.len() && src[j].0 < old[i].0);
            if take_old {
                out.push(old[i].clone());
                i += 1;
            } else if take_src {
                let (c, b) = &src[j];
                let v = b.zero_like().sub_mul(q, b)?;
                if !v.is_nil() {
                    self.col_rows[*c].insert(k);
                    out.push((*c, v));
                }
                j += 1;
            } else {
                let c = old[i].0;
                let v = old[i].1.sub_mul(q, &src[j].1)?;
                if v.is_nil() {
                    self.col_rows[c].remove(&k);
                } else {
                    out.push((c, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[k] = out;
        Some(())
    }

    fn drop_row(&mut self, r: usize) {
        for (c, _) in std::mem::take(&mut self.rows[r]) {
            self.col_rows[c].remove(&r);
        }
    }

    /// Clears column `c` below/above a unit pivot at (r, c) and removes the pivot row.
    fn unit_pivot(&mut self, r: usize, c: usize) -> Option<()> {
        let p = self.entry(r, c).expect("pivot present").clone();
        let others: Vec<usize> = self.col_rows[c]
            .iter()
            .copied()
            .filter(|&k| k != r)
            .collect();
        for k in others {
            let q = self.entry(k, c).expect("column index in sync").quot(&p)?;
            self.axpy(k, &q, r)?;
        }
        self.drop_row(r);
        self.pivots.push(p);
        Some(())
    }

    fn unit_phase(&mut self, ncols: usize) -> Option<()> {
        let mut order: Vec<usize> = (0..ncols).collect();
        order.sort_by_key(|&c| (self.col_rows[c].len(), c));
        loop {
            let mut progress = false;
            for &c in &order {
                if self.col_rows[c].is_empty() {
                    continue;
                }
                let mut best: Option<(usize, usize)> = None;
                for &r in &self.col_rows[c] {
                    if self.entry(r, c).is_some_and(|v| v.is_unit()) {
                        let len = self.rows[r].len();
                        if best.is_none_or(|(l, _)| len < l) {
                            best = Some((len, r));
                        }
                    }
                }
                if let Some((_, r)) = best {
                    self.unit_pivot(r, c)?;
                    progress = true;
                }
            }
            if !progress {
                return Some(());
            }
        }
    }

    /// Minimal-magnitude pivoting with Euclidean reduction of the pivot row and column.
    fn general_phase(&mut self) -> Option<()> {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                for (c, v) in row {
                    let cost = row.len() + self.col_rows[*c].len();
                    let better = match best {
                        None => true,
                        Some((br, bc, bcost)) => {
                            let bv = self.entry(br, bc).unwrap();
                            match v.mag_cmp(bv) {
                                Ordering::Less => true,
                                Ordering::Equal => cost < bcost,
                                Ordering::Greater => false,
                            }
                        }
                    };
                    if better {
                        best = Some((r, *c, cost));
                    }
                }
            }
            let Some((r, c, _)) = best else {
                return Some(());
            };
            let p = self.entry(r, c).unwrap().clone();
            let others: Vec<usize> = self.col_rows[c]
                .iter()
                .copied()
                .filter(|&k| k != r)
                .collect();
            let mut clean = true;
            for k in others {
                let q = self.entry(k, c).unwrap().quot(&p)?;
                self.axpy(k, &q, r)?;
                if self.entry(k, c).is_some() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // column c now holds only the pivot, so column operations touch row r alone
            let row = std::mem::take(&mut self.rows[r]);
            let mut out = Vec::with_capacity(row.len());
            for (l, a) in row {
                if l == c {
                    out.push((l, a));
                    continue;
                }
                let q = a.quot(&p)?;
                let rem = a.sub_mul(&q, &p)?;
                if rem.is_nil() {
                    self.col_rows[l].remove(&r);
                } else {
                    out.push((l, rem));
                }
            }
            let isolated = out.len() == 1;
            self.rows[r] = out;
            if isolated {
                self.drop_row(r);
                self.pivots.push(p);
            }
        }
    }
}

/// Eliminates a sparse row-major matrix down to a diagonal and returns the
/// pivots (equivalent to the input under unimodular row and column operations).
fn eliminate<T: Coef>(rows: Vec<Vec<(usize, T)>>, ncols: usize) -> Option<Vec<T>> {
    let mut col_rows = vec![BTreeSet::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c].insert(r);
        }
    }
    let mut e = Elim {
        rows,
        col_rows,
        pivots: Vec::new(),
    };
    e.unit_phase(ncols)?;
    let live_rows: Vec<usize> = (0..e.rows.len())
        .filter(|&r| !e.rows[r].is_empty())
        .collect();
    if live_rows.is_empty() {
        return Some(e.pivots);
    }
    let live_cols: Vec<usize> = (0..ncols).filter(|&c| !e.col_rows[c].is_empty()).collect();
    if live_rows.len() <= DENSE_THRESHOLD && live_cols.len() <= DENSE_THRESHOLD {
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (i, r) in live_rows.iter().enumerate() {
            for (c, v) in &e.rows[*r] {
                let j = live_cols.binary_search(c).unwrap();
                dense[i][j] = v.to_big();
            }
        }
        let (diag, _, _) = dense_snf(dense, live_rows.len(), live_cols.len(), false);
        let mut piv: Vec<T> = e.pivots;
        for d in diag {
            piv.push(T::from_big(&d)?);
        }
        return Some(piv);
    }
    e.general_phase()?;
    Some(e.pivots)
}

type Dense = Vec<Vec<BigInt>>;

fn identity_dense(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Dense Smith form. Returns the positive divisor chain and, when asked, `L`, `R`
/// with `L * m * R = diag`.
pub(crate) fn dense_snf(
    mut a: Dense,
    rows: usize,
    cols: usize,
    transforms: bool,
) -> (Vec<BigInt>, Option<Dense>, Option<Dense>) {
    let mut l = transforms.then(|| identity_dense(rows));
    let mut r = transforms.then(|| identity_dense(cols));

    fn row_sub(m: &mut Dense, i: usize, q: &BigInt, t: usize) {
        let (src, dst) = if i < t {
            let (lo, hi) = m.split_at_mut(t);
            (&hi[0], &mut lo[i])
        } else {
            let (lo, hi) = m.split_at_mut(i);
            (&lo[t], &mut hi[0])
        };
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
    }
    fn col_sub(m: &mut Dense, j: usize, q: &BigInt, t: usize) {
        for row in m.iter_mut() {
            if !row[t].is_zero() {
                let v = q * &row[t];
                row[j] -= v;
            }
        }
    }
    fn swap_cols(m: &mut Dense, i: usize, j: usize) {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    }

    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        if let Some(l) = l.as_mut() {
            l.swap(t, pi);
        }
        swap_cols(&mut a, t, pj);
        if let Some(r) = r.as_mut() {
            swap_cols(r, t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_sub(&mut a, i, &q, t);
                if let Some(l) = l.as_mut() {
                    row_sub(l, i, &q, t);
                }
                if !a[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, j, &q, t);
                if let Some(r) = r.as_mut() {
                    col_sub(r, j, &q, t);
                }
                if !a[t][j].is_zero() {
                    done = false;
                }
            }
            if !done {
                // bring the smallest leftover in row t or column t to the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].magnitude() < a[best.0][best.1].magnitude() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].magnitude() < a[best.0][best.1].magnitude() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    if let Some(l) = l.as_mut() {
                        l.swap(t, best.0);
                    }
                } else if best.1 != t {
                    swap_cols(&mut a, t, best.1);
                    if let Some(r) = r.as_mut() {
                        swap_cols(r, t, best.1);
                    }
                }
                continue;
            }
            let p = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_sub(&mut a, t, &minus_one, i);
                    if let Some(l) = l.as_mut() {
                        row_sub(l, t, &minus_one, i);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for v in a[t].iter_mut() {
                *v = -&*v;
            }
            if let Some(l) = l.as_mut() {
                for v in l[t].iter_mut() {
                    *v = -&*v;
                }
            }
        }
        t += 1;
    }
    let diag = (0..t).map(|k| a[k][k].clone()).collect();
    (diag, l, r)
}
