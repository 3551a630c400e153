//! The cube of resolutions of an ordinary diagram evaluated in `C_{h,t}`.
//!
//! Generators of homological degree `|s| - n₋` are ordered by state (crossing 0
//! most significant) and then by labelling (circle 0 most significant, bit set
//! meaning `x`). The saddle from `s` to `s ∪ {c}` carries the left-wedge sign
//! `(-1)^{#{a ∈ s : a < c}}`; the whole differential is multiplied by
//! `(-1)^{n₋}` for the homological shift.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::chain::ChainComplex;
use crate::diagram::{CrossingKind, Diagram, Smoothing};
use crate::error::{contract, Result};
use crate::frobenius::FrobeniusAlgebra;
use crate::linalg::{HomologySummary, SparseIntMatrix};

/// Largest number of crossings a cube is built for.
pub const MAX_CROSSINGS: usize = 24;

/// A subset `A` of a totally ordered label set; only its sign content matters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignModule {
    universe: BTreeSet<usize>,
    subset: BTreeSet<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl SignModule {
    pub fn new(
        universe: impl IntoIterator<Item = usize>,
        subset: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let universe: BTreeSet<usize> = universe.into_iter().collect();
        let subset: BTreeSet<usize> = subset.into_iter().collect();
        if let Some(a) = subset.iter().find(|a| !universe.contains(a)) {
            return contract(format!("label {a} is not in the universe"));
        }
        Ok(SignModule { universe, subset })
    }

    pub fn subset(&self) -> &BTreeSet<usize> {
        &self.subset
    }

    fn require(&self, c: usize) -> Result<()> {
        if self.universe.contains(&c) {
            Ok(())
        } else {
            contract(format!("label {c} is not in the universe"))
        }
    }

    fn with(&self, subset: BTreeSet<usize>) -> Self {
        SignModule {
            universe: self.universe.clone(),
            subset,
        }
    }

    fn mu(&self, c: usize) -> usize {
        self.subset.range(..c).count()
    }

    /// `(∧c)`: `None` when `c ∈ A`, otherwise `A ∪ {c}` with sign `(-1)^μ`
    /// (left) or `(-1)^ν` (right).
    pub fn wedge_sign(&self, c: usize, side: Side) -> Result<Option<(i8, SignModule)>> {
        self.require(c)?;
        if self.subset.contains(&c) {
            return Ok(None);
        }
        let count = match side {
            Side::Left => self.mu(c),
            Side::Right => self.subset.range(c + 1..).count(),
        };
        let mut s = self.subset.clone();
        s.insert(c);
        Ok(Some((parity(count), self.with(s))))
    }

    /// `č_c`: `A ∖ {c}` with sign `(-1)^μ` when `c ∈ A`, otherwise `None`.
    pub fn check_sign(&self, c: usize) -> Result<Option<(i8, SignModule)>> {
        self.require(c)?;
        if !self.subset.contains(&c) {
            return Ok(None);
        }
        let mut s = self.subset.clone();
        s.remove(&c);
        Ok(Some((parity(self.mu(c)), self.with(s))))
    }

    /// Sign of the shuffle putting `A` followed by its complement into order.
    pub fn shuffle_sign(&self) -> i8 {
        let mut inversions = 0;
        for a in &self.subset {
            inversions += self
                .universe
                .range(..a)
                .filter(|b| !self.subset.contains(b))
                .count();
        }
        parity(inversions)
    }
}

fn parity(n: usize) -> i8 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of the saddle `s -> s ∪ {c}` for a state given as a bit mask.
pub fn saddle_sign(mask: u64, c: usize) -> i8 {
    parity((mask & ((1u64 << c) - 1)).count_ones() as usize)
}

/// Bit of circle `c` in a labelling of `k` circles.
pub(crate) fn label_bit(l: u64, k: usize, c: usize) -> u8 {
    ((l >> (k - 1 - c)) & 1) as u8
}

pub(crate) fn label_set(l: u64, k: usize, c: usize, v: u8) -> u64 {
    let b = 1u64 << (k - 1 - c);
    if v == 1 {
        l | b
    } else {
        l & !b
    }
}

#[derive(Clone, Copy, Debug)]
struct StateInfo {
    offset: usize,
    circles: usize,
}

/// The Khovanov complex of an ordinary diagram together with its generator layout.
#[derive(Debug)]
pub struct CubeComplex {
    diagram: Diagram,
    algebra: FrobeniusAlgebra,
    complex: Arc<ChainComplex>,
    states: Vec<StateInfo>,
    by_size: Vec<Vec<u64>>,
    smoothings: Vec<Smoothing>,
    n_plus: usize,
    n_minus: usize,
}

/// Maps circles of one smoothing to circles of another through a representative edge.
pub(crate) fn circle_map(from: &Smoothing, to: &Smoothing) -> Vec<usize> {
    let edge_circles = from.count - from.free;
    let to_edge = to.count - to.free;
    let mut map = vec![usize::MAX; from.count];
    for (e, c) in from.edge_circle.iter().enumerate() {
        if map[*c] == usize::MAX {
            map[*c] = to.edge_circle[e];
        }
    }
    for f in 0..from.free {
        map[edge_circles + f] = to_edge + f;
    }
    map
}

fn states_in_order(n: usize) -> Vec<u64> {
    // lexicographic with crossing 0 as the most significant position
    (0..1u64 << n)
        .map(|v| (0..n).fold(0u64, |m, x| m | (((v >> (n - 1 - x)) & 1) << x)))
        .collect()
}

/// Builds the normalized complex `⟦D⟧[-n₋]` evaluated in `f`.
pub fn build_cube(d: &Diagram, f: &FrobeniusAlgebra) -> Result<CubeComplex> {
    if d.kinds().contains(&CrossingKind::Singular) {
        return contract("the cube is defined for diagrams without double points");
    }
    let n = d.crossing_count();
    if n > MAX_CROSSINGS {
        return contract(format!(
            "{n} crossings exceed the supported {MAX_CROSSINGS}"
        ));
    }
    let (n_plus, n_minus) = (d.n_plus(), d.n_minus());
    let ring = f.ring();
    let smoothings: Vec<Smoothing> = (0..1u64 << n)
        .into_par_iter()
        .map(|m| d.smoothing(m))
        .collect();
    let mut by_size = vec![Vec::new(); n + 1];
    for m in states_in_order(n) {
        by_size[m.count_ones() as usize].push(m);
    }
    let mut states = vec![
        StateInfo {
            offset: 0,
            circles: 0
        };
        1 << n
    ];
    let mut ranks = BTreeMap::new();
    for (k, masks) in by_size.iter().enumerate() {
        let mut off = 0;
        for &m in masks {
            let circles = smoothings[m as usize].count;
            states[m as usize] = StateInfo {
                offset: off,
                circles,
            };
            off += 1 << circles;
        }
        ranks.insert(k as i64 - n_minus as i64, off);
    }

    let global = if n_minus % 2 == 0 { 1i64 } else { -1 };
    let diffs: BTreeMap<i64, SparseIntMatrix> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut trip = Vec::new();
            for &m in &by_size[k] {
                for c in (0..n).filter(|c| m >> c & 1 == 0) {
                    let m2 = m | 1 << c;
                    let sign = BigInt::from(global * saddle_sign(m, c) as i64);
                    saddle_entries(
                        f,
                        &smoothings[m as usize],
                        &smoothings[m2 as usize],
                        c,
                        |l, l2, v| {
                            trip.push((
                                states[m2 as usize].offset + l2 as usize,
                                states[m as usize].offset + l as usize,
                                &sign * v,
                            ))
                        },
                    );
                }
            }
            let i = k as i64 - n_minus as i64;
            let rows = ranks[&(i + 1)];
            let cols = ranks[&i];
            SparseIntMatrix::from_triplets(rows, cols, ring, trip).map(|mtx| (i, mtx))
        })
        .collect::<Result<_>>()?;

    let mut complex = ChainComplex::from_parts(ring, ranks, diffs)?;
    if f.is_graded() {
        let shift = n_plus as i64 - 2 * n_minus as i64;
        let mut q = BTreeMap::new();
        for (k, masks) in by_size.iter().enumerate() {
            let mut v = Vec::new();
            for &m in masks {
                let circles = states[m as usize].circles as u32;
                for l in 0..1u64 << circles {
                    let ones = l.count_ones() as i64;
                    v.push(circles as i64 - 2 * ones + k as i64 + shift);
                }
            }
            q.insert(k as i64 - n_minus as i64, v);
        }
        complex = complex.with_qdeg(q)?;
    }
    Ok(CubeComplex {
        diagram: d.clone(),
        algebra: f.clone(),
        complex: Arc::new(complex),
        states,
        by_size,
        smoothings,
        n_plus,
        n_minus,
    })
}

/// Entries of the saddle at `c` from smoothing `s` to `t`, as
/// (source labelling, target labelling, coefficient).
fn saddle_entries(
    f: &FrobeniusAlgebra,
    s: &Smoothing,
    t: &Smoothing,
    c: usize,
    mut emit: impl FnMut(u64, u64, BigInt),
) {
    let phi = circle_map(s, t);
    let (a, b) = s.incidence[c];
    let (ks, kt) = (s.count, t.count);
    let carry = |l: u64, skip: &[usize]| {
        (0..ks).filter(|i| !skip.contains(i)).fold(0u64, |acc, i| {
            label_set(acc, kt, phi[i], label_bit(l, ks, i))
        })
    };
    if a != b {
        let target = phi[a];
        for l in 0..1u64 << ks {
            let base = carry(l, &[a, b]);
            let (one, x) = f.mul_basis(label_bit(l, ks, a), label_bit(l, ks, b));
            for (v, coeff) in [(0u8, one), (1u8, x)] {
                if coeff != BigInt::from(0) {
                    emit(l, label_set(base, kt, target, v), coeff);
                }
            }
        }
    } else {
        let (p, q) = t.incidence[c];
        for l in 0..1u64 << ks {
            let base = carry(l, &[a]);
            let delta = f.comul_basis(label_bit(l, ks, a));
            for (k, coeff) in delta.into_iter().enumerate() {
                if coeff != BigInt::from(0) {
                    let (vp, vq) = ((k >> 1) as u8, (k & 1) as u8);
                    emit(l, label_set(label_set(base, kt, p, vp), kt, q, vq), coeff);
                }
            }
        }
    }
}

impl CubeComplex {
    pub fn complex(&self) -> &Arc<ChainComplex> {
        &self.complex
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra {
        &self.algebra
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn homology(&self) -> HomologySummary {
        self.complex.homology()
    }

    /// States with `|s| = k`, in generator order.
    pub fn states_of_size(&self, k: usize) -> &[u64] {
        self.by_size.get(k).map_or(&[][..], |v| v.as_slice())
    }

    pub fn circle_count(&self, mask: u64) -> usize {
        self.states[mask as usize].circles
    }

    /// Homological degree and index of the generator `(mask, labelling)`.
    pub fn generator(&self, mask: u64, labelling: u64) -> (i64, usize) {
        let i = mask.count_ones() as i64 - self.n_minus as i64;
        (i, self.states[mask as usize].offset + labelling as usize)
    }

    /// Inverse of [`CubeComplex::generator`].
    pub fn generator_state(&self, i: i64, index: usize) -> Option<(u64, u64)> {
        let k = usize::try_from(i + self.n_minus as i64).ok()?;
        let masks = self.by_size.get(k)?;
        let pos = masks.partition_point(|m| self.states[*m as usize].offset <= index);
        let m = *masks.get(pos.checked_sub(1)?)?;
        let st = self.states[m as usize];
        let l = (index - st.offset) as u64;
        (l < 1u64 << st.circles).then_some((m, l))
    }

    pub(crate) fn smoothing(&self, mask: u64) -> &Smoothing {
        &self.smoothings[mask as usize]
    }
}

/// The dual complex: degree `i` becomes `-i`, differentials are transposed and
/// quantum degrees negated.
pub fn dualize(c: &CubeComplex) -> ChainComplex {
    c.complex.dual()
}
