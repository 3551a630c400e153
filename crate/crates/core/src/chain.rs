//! Bounded chain complexes of free modules, graded maps between them, mapping
//! cones and the cone combinators for homotopy-commutative diagrams.
//!
//! Differentials raise degree: `d^i : C^i -> C^{i+1}`. A graded map of degree
//! `k` has components `C^i -> D^{i+k}` and is a chain map when
//! `d f = (-1)^k f d`.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{contract, Result};
use crate::linalg::{
    map_invariants, rank, DegreeKey, HomologyGroup, HomologySummary, Ring, SparseIntMatrix,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    ranks: BTreeMap<i64, usize>,
    diffs: BTreeMap<i64, SparseIntMatrix>,
    qdeg: Option<BTreeMap<i64, Vec<i64>>>,
}

fn sign(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

impl ChainComplex {
    /// Validates shapes and `d^2 = 0`.
    pub fn new(
        ring: Ring,
        ranks: BTreeMap<i64, usize>,
        diffs: BTreeMap<i64, SparseIntMatrix>,
    ) -> Result<Self> {
        let c = Self::from_parts(ring, ranks, diffs)?;
        c.check_d_squared()?;
        Ok(c)
    }

    /// Validates shapes only.
    pub(crate) fn from_parts(
        ring: Ring,
        ranks: BTreeMap<i64, usize>,
        diffs: BTreeMap<i64, SparseIntMatrix>,
    ) -> Result<Self> {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|(_, r)| *r > 0).collect();
        let rk = |i: i64| ranks.get(&i).copied().unwrap_or(0);
        for (i, d) in &diffs {
            if d.ring() != ring {
                return contract(format!(
                    "differential {i} is over {}, complex over {ring}",
                    d.ring()
                ));
            }
            if d.cols() != rk(*i) || d.rows() != rk(i + 1) {
                return contract(format!(
                    "differential {i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    rk(i + 1),
                    rk(*i)
                ));
            }
        }
        let diffs = diffs.into_iter().filter(|(_, d)| !d.is_zero()).collect();
        Ok(ChainComplex {
            ring,
            ranks,
            diffs,
            qdeg: None,
        })
    }

    /// Attaches quantum degrees, checking that every differential preserves them.
    pub fn with_qdeg(mut self, qdeg: BTreeMap<i64, Vec<i64>>) -> Result<Self> {
        for (i, r) in &self.ranks {
            let n = qdeg.get(i).map_or(0, |v| v.len());
            if n != *r {
                return contract(format!(
                    "{n} quantum degrees given for rank {r} in degree {i}"
                ));
            }
        }
        let qdeg: BTreeMap<i64, Vec<i64>> =
            qdeg.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        for (i, d) in &self.diffs {
            let (src, tgt) = (&qdeg[i], &qdeg[&(i + 1)]);
            if let Some((r, c, _)) = d.entries().find(|(r, c, _)| tgt[*r] != src[*c]) {
                return contract(format!(
                    "differential {i} maps quantum degree {} to {}",
                    src[c], tgt[r]
                ));
            }
        }
        self.qdeg = Some(qdeg);
        Ok(self)
    }

    pub fn zero(ring: Ring) -> Self {
        ChainComplex {
            ring,
            ranks: BTreeMap::new(),
            diffs: BTreeMap::new(),
            qdeg: None,
        }
    }

    /// Free module of the given rank concentrated in one degree.
    pub fn concentrated(ring: Ring, degree: i64, rank: usize) -> Self {
        let mut ranks = BTreeMap::new();
        ranks.insert(degree, rank);
        Self::from_parts(ring, ranks, BTreeMap::new()).expect("no differentials")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self, i: i64) -> usize {
        self.ranks.get(&i).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    /// Degrees with a nonzero module.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.ranks.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.ranks.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.ranks.keys().next_back().copied()
    }

    pub fn differential(&self, i: i64) -> Cow<'_, SparseIntMatrix> {
        match self.diffs.get(&i) {
            Some(d) => Cow::Borrowed(d),
            None => Cow::Owned(SparseIntMatrix::zero(
                self.rank(i + 1),
                self.rank(i),
                self.ring,
            )),
        }
    }

    pub fn is_graded(&self) -> bool {
        self.qdeg.is_some()
    }

    pub fn qdeg(&self, i: i64) -> Option<&[i64]> {
        self.qdeg
            .as_ref()
            .map(|q| q.get(&i).map_or(&[][..], |v| v.as_slice()))
    }

    pub(crate) fn qdeg_map(&self) -> Option<&BTreeMap<i64, Vec<i64>>> {
        self.qdeg.as_ref()
    }

    /// Drops the quantum grading.
    pub fn ungraded(&self) -> Self {
        ChainComplex {
            qdeg: None,
            ..self.clone()
        }
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for (i, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(i + 1)) {
                if !next.mul(d)?.is_zero() {
                    return contract(format!("d^{} d^{} is not zero", i + 1, i));
                }
            }
        }
        Ok(())
    }

    /// `C[k]^i = C^{i-k}` with differentials multiplied by `(-1)^k`.
    pub fn shift(&self, k: i64) -> Self {
        let s = sign(k);
        ChainComplex {
            ring: self.ring,
            ranks: self.ranks.iter().map(|(i, r)| (i + k, *r)).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(i, d)| (i + k, d.scale(&s)))
                .collect(),
            qdeg: self
                .qdeg
                .as_ref()
                .map(|q| q.iter().map(|(i, v)| (i + k, v.clone())).collect()),
        }
    }

    /// Adds `delta` to every quantum degree.
    pub fn qshift(&self, delta: i64) -> Self {
        ChainComplex {
            qdeg: self.qdeg.as_ref().map(|q| {
                q.iter()
                    .map(|(i, v)| (*i, v.iter().map(|j| j + delta).collect()))
                    .collect()
            }),
            ..self.clone()
        }
    }

    /// Base change along `Z -> ring`. Entries are read as integer
    /// representatives, so the source ring should be `Z`.
    pub fn with_ring(&self, ring: Ring) -> Self {
        ChainComplex {
            ring,
            ranks: self.ranks.clone(),
            diffs: self
                .diffs
                .iter()
                .map(|(i, d)| (*i, d.with_ring(ring)))
                .filter(|(_, d)| !d.is_zero())
                .collect(),
            qdeg: self.qdeg.clone(),
        }
    }

    /// Dual complex: degree `-i` holds the dual of `C^i` and the differentials are
    /// transposed; quantum degrees are negated.
    pub fn dual(&self) -> Self {
        ChainComplex {
            ring: self.ring,
            ranks: self.ranks.iter().map(|(i, r)| (-i, *r)).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(i, d)| (-i - 1, d.transpose()))
                .collect(),
            qdeg: self.qdeg.as_ref().map(|q| {
                q.iter()
                    .map(|(i, v)| (-i, v.iter().map(|j| -j).collect()))
                    .collect()
            }),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return contract("direct sum of complexes over different rings");
        }
        let degrees: BTreeSet<i64> = self.degrees().chain(other.degrees()).collect();
        let mut ranks = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for &i in &degrees {
            ranks.insert(i, self.rank(i) + other.rank(i));
            let d = SparseIntMatrix::block(
                self.ring,
                &[self.rank(i + 1), other.rank(i + 1)],
                &[self.rank(i), other.rank(i)],
                &[
                    (0, 0, &self.differential(i)),
                    (1, 1, &other.differential(i)),
                ],
            )?;
            diffs.insert(i, d);
        }
        let c = Self::from_parts(self.ring, ranks, diffs)?;
        match (&self.qdeg, &other.qdeg) {
            (Some(a), Some(b)) => {
                let q = degrees
                    .iter()
                    .map(|i| {
                        let mut v = a.get(i).cloned().unwrap_or_default();
                        v.extend(b.get(i).cloned().unwrap_or_default());
                        (*i, v)
                    })
                    .collect();
                c.with_qdeg(q)
            }
            _ => Ok(c),
        }
    }

    /// Homology in every degree (and quantum degree when graded).
    pub fn homology(&self) -> HomologySummary {
        let mut out = HomologySummary::new(self.ring);
        match &self.qdeg {
            None => {
                let degs: Vec<i64> = self.degrees().collect();
                let inv: HashMap<i64, (usize, Vec<BigInt>)> = degs
                    .par_iter()
                    .filter_map(|i| self.diffs.get(i).map(|d| (*i, map_invariants(d))))
                    .collect();
                for i in degs {
                    let (r_out, _) = inv.get(&i).cloned().unwrap_or_default();
                    let (r_in, tor) = inv.get(&(i - 1)).cloned().unwrap_or_default();
                    let g = HomologyGroup {
                        free_rank: self.rank(i) - r_out - r_in,
                        torsion: tor,
                    };
                    out.insert(DegreeKey::Single(i), g);
                }
            }
            Some(q) => {
                // basis indices grouped by (degree, quantum degree)
                let mut blocks: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
                for (i, v) in q {
                    for (k, j) in v.iter().enumerate() {
                        blocks.entry((*i, *j)).or_default().push(k);
                    }
                }
                let keys: Vec<(i64, i64)> = blocks.keys().copied().collect();
                let inv: HashMap<(i64, i64), (usize, Vec<BigInt>)> = keys
                    .par_iter()
                    .filter_map(|&(i, j)| {
                        let d = self.diffs.get(&i)?;
                        let rows = blocks.get(&(i + 1, j))?;
                        let sub = d.submatrix(rows, &blocks[&(i, j)]);
                        Some(((i, j), map_invariants(&sub)))
                    })
                    .collect();
                for (&(i, j), basis) in &blocks {
                    let (r_out, _) = inv.get(&(i, j)).cloned().unwrap_or_default();
                    let (r_in, tor) = inv.get(&(i - 1, j)).cloned().unwrap_or_default();
                    let g = HomologyGroup {
                        free_rank: basis.len() - r_out - r_in,
                        torsion: tor,
                    };
                    out.insert(DegreeKey::Bigraded(i, j), g);
                }
            }
        }
        out
    }

    /// The differential as a degree-one self map.
    pub fn differential_map(self: &Arc<Self>) -> GradedMap {
        GradedMap {
            source: self.clone(),
            target: self.clone(),
            degree: 1,
            components: self.diffs.clone(),
        }
    }
}

fn same_shape(a: &ChainComplex, b: &ChainComplex) -> bool {
    a.ring == b.ring && a.ranks == b.ranks
}

/// A family of module maps `source^i -> target^{i+degree}`.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub source: Arc<ChainComplex>,
    pub target: Arc<ChainComplex>,
    pub degree: i64,
    components: BTreeMap<i64, SparseIntMatrix>,
}

/// Degree-zero chain map.
pub type ChainMap = GradedMap;
/// Map of negative degree witnessing a relation between chain maps.
pub type Homotopy = GradedMap;

/// Outcome of a chain-map test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainMapCheck {
    Holds,
    Fails {
        degree: i64,
        residual: SparseIntMatrix,
    },
}

impl ChainMapCheck {
    pub fn holds(&self) -> bool {
        matches!(self, ChainMapCheck::Holds)
    }
}

impl PartialEq for GradedMap {
    fn eq(&self, other: &Self) -> bool {
        same_shape(&self.source, &other.source)
            && same_shape(&self.target, &other.target)
            && self.degree == other.degree
            && self.components == other.components
    }
}

impl GradedMap {
    pub fn new(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        degree: i64,
        components: BTreeMap<i64, SparseIntMatrix>,
    ) -> Result<Self> {
        if source.ring != target.ring {
            return contract("map between complexes over different rings");
        }
        for (i, m) in &components {
            if m.ring() != source.ring {
                return contract(format!("component {i} has the wrong ring"));
            }
            if m.cols() != source.rank(*i) || m.rows() != target.rank(i + degree) {
                return contract(format!(
                    "component {i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.rank(i + degree),
                    source.rank(*i)
                ));
            }
        }
        let components = components
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .collect();
        Ok(GradedMap {
            source,
            target,
            degree,
            components,
        })
    }

    pub fn zero(source: Arc<ChainComplex>, target: Arc<ChainComplex>, degree: i64) -> Self {
        GradedMap {
            source,
            target,
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn identity(c: Arc<ChainComplex>) -> Self {
        let components = c
            .ranks
            .iter()
            .map(|(i, r)| (*i, SparseIntMatrix::identity(*r, c.ring)))
            .collect();
        GradedMap {
            source: c.clone(),
            target: c,
            degree: 0,
            components,
        }
    }

    pub fn component(&self, i: i64) -> Cow<'_, SparseIntMatrix> {
        match self.components.get(&i) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(SparseIntMatrix::zero(
                self.target.rank(i + self.degree),
                self.source.rank(i),
                self.source.ring,
            )),
        }
    }

    pub fn components(&self) -> &BTreeMap<i64, SparseIntMatrix> {
        &self.components
    }

    pub fn ring(&self) -> Ring {
        self.source.ring
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Source degrees where either side of a relation could be nonzero.
    fn span(&self) -> Vec<i64> {
        let mut s: BTreeSet<i64> = BTreeSet::new();
        for i in self.source.degrees() {
            s.extend([i - 1, i, i + 1]);
        }
        for i in self.target.degrees() {
            let j = i - self.degree;
            s.extend([j - 1, j, j + 1]);
        }
        s.into_iter().collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if !same_shape(&self.source, &other.source)
            || !same_shape(&self.target, &other.target)
            || self.degree != other.degree
        {
            return contract("graded maps have different sources, targets or degrees");
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let keys: BTreeSet<i64> = self
            .components
            .keys()
            .chain(other.components.keys())
            .copied()
            .collect();
        let mut comps = BTreeMap::new();
        for i in keys {
            comps.insert(i, self.component(i).add(&other.component(i))?);
        }
        GradedMap::new(self.source.clone(), self.target.clone(), self.degree, comps)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        GradedMap {
            components: self.components.iter().map(|(i, m)| (*i, m.neg())).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        GradedMap {
            components: self
                .components
                .iter()
                .map(|(i, m)| (*i, m.scale(k)))
                .filter(|(_, m)| !m.is_zero())
                .collect(),
            ..self.clone()
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !same_shape(&other.target, &self.source) {
            return contract("composition of maps whose target and source differ");
        }
        let mut comps = BTreeMap::new();
        for (i, b) in &other.components {
            if let Some(a) = self.components.get(&(i + other.degree)) {
                comps.insert(*i, a.mul(b)?);
            }
        }
        GradedMap::new(
            other.source.clone(),
            self.target.clone(),
            self.degree + other.degree,
            comps,
        )
    }

    /// `d ∘ self + s · self ∘ d`.
    pub fn d_bracket(&self, s: i64) -> Result<Self> {
        let left = self.target.differential_map().compose(self)?;
        let right = self.compose(&self.source.differential_map())?;
        left.add(&right.scale(&BigInt::from(s)))
    }

    /// Reindexes source and target by `[k]`.
    pub fn shift(&self, k: i64) -> Self {
        GradedMap {
            source: Arc::new(self.source.shift(k)),
            target: Arc::new(self.target.shift(k)),
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(i, m)| (i + k, m.clone()))
                .collect(),
        }
    }

    pub fn with_ring(&self, ring: Ring) -> Self {
        GradedMap {
            source: Arc::new(self.source.with_ring(ring)),
            target: Arc::new(self.target.with_ring(ring)),
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(i, m)| (*i, m.with_ring(ring)))
                .filter(|(_, m)| !m.is_zero())
                .collect(),
        }
    }

    /// Re-targets the map at complexes of identical shape.
    pub fn retarget(&self, source: Arc<ChainComplex>, target: Arc<ChainComplex>) -> Result<Self> {
        if !same_shape(&source, &self.source) || !same_shape(&target, &self.target) {
            return contract("retargeting a map onto complexes of another shape");
        }
        Ok(GradedMap {
            source,
            target,
            degree: self.degree,
            components: self.components.clone(),
        })
    }

    /// Rank of the induced map `H^i(source) -> H^{i}(target)` over a field
    /// (over Q for integer complexes). Degree-zero chain maps only.
    pub fn induced_rank(&self, i: i64) -> Result<usize> {
        if self.degree != 0 {
            return contract("induced maps are computed for degree-zero maps");
        }
        let ring = if self.ring() == Ring::Integers {
            Ring::Rationals
        } else {
            self.ring()
        };
        let f = self.component(i).with_ring(ring);
        let dy = self.target.differential(i - 1).with_ring(ring);
        let dx = self.source.differential(i).with_ring(ring);
        let m = SparseIntMatrix::block(
            ring,
            &[f.rows(), dx.rows()],
            &[f.cols(), dy.cols()],
            &[(0, 0, &f), (0, 1, &dy), (1, 0, &dx)],
        )?;
        Ok(rank(&m) - rank(&dx) - rank(&dy))
    }
}

/// Tests `d f = (-1)^k f d`, reporting the first failing source degree.
pub fn is_chain_map(f: &GradedMap) -> Result<ChainMapCheck> {
    let s = sign(f.degree);
    for i in f.span() {
        let dyf = f.target.differential(i + f.degree).mul(&f.component(i))?;
        let fdx = f.component(i + 1).mul(&f.source.differential(i))?;
        let residual = dyf.sub(&fdx.scale(&s))?;
        if !residual.is_zero() {
            return Ok(ChainMapCheck::Fails {
                degree: i,
                residual,
            });
        }
    }
    Ok(ChainMapCheck::Holds)
}

fn require_chain_map(f: &GradedMap, what: &str) -> Result<()> {
    if f.degree != 0 {
        return contract(format!("{what} must have degree 0, has {}", f.degree));
    }
    match is_chain_map(f)? {
        ChainMapCheck::Holds => Ok(()),
        ChainMapCheck::Fails { degree, .. } => {
            contract(format!("{what} is not a chain map at degree {degree}"))
        }
    }
}

fn require_zero(m: &GradedMap, what: &str) -> Result<()> {
    match m.components.iter().next() {
        None => Ok(()),
        Some((i, r)) => contract(format!(
            "{what} fails at degree {i} ({} nonzero entries)",
            r.nnz()
        )),
    }
}

/// `Cone(f)^i = Y^i ⊕ X^{i+1}` with differential `[[d_Y, f], [0, -d_X]]`.
pub fn cone(f: &ChainMap) -> Result<ChainComplex> {
    require_chain_map(f, "cone input")?;
    let (x, y) = (&f.source, &f.target);
    let ring = f.ring();
    let degrees: BTreeSet<i64> = y.degrees().chain(x.degrees().map(|i| i - 1)).collect();
    let mut ranks = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for &i in &degrees {
        ranks.insert(i, y.rank(i) + x.rank(i + 1));
        let neg_dx = x.differential(i + 1).neg();
        let d = SparseIntMatrix::block(
            ring,
            &[y.rank(i + 1), x.rank(i + 2)],
            &[y.rank(i), x.rank(i + 1)],
            &[
                (0, 0, &y.differential(i)),
                (0, 1, &f.component(i + 1)),
                (1, 1, &neg_dx),
            ],
        )?;
        diffs.insert(i, d);
    }
    let c = ChainComplex::from_parts(ring, ranks, diffs)?;
    match (x.qdeg_map(), y.qdeg_map()) {
        (Some(qx), Some(qy)) => {
            let q = degrees
                .iter()
                .map(|i| {
                    let mut v = qy.get(i).cloned().unwrap_or_default();
                    v.extend(qx.get(&(i + 1)).cloned().unwrap_or_default());
                    (*i, v)
                })
                .collect();
            c.with_qdeg(q)
        }
        _ => Ok(c),
    }
}

/// The cone together with its inclusion `Y -> Cone(f)` and projection
/// `Cone(f) -> X` (degree one).
pub fn cone_maps(f: &ChainMap) -> Result<(Arc<ChainComplex>, ChainMap, GradedMap)> {
    let c = Arc::new(cone(f)?);
    let ring = f.ring();
    let (x, y) = (&f.source, &f.target);
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for i in c.degrees() {
        let id_y = SparseIntMatrix::identity(y.rank(i), ring);
        inc.insert(
            i,
            SparseIntMatrix::block(
                ring,
                &[y.rank(i), x.rank(i + 1)],
                &[y.rank(i)],
                &[(0, 0, &id_y)],
            )?,
        );
        let id_x = SparseIntMatrix::identity(x.rank(i + 1), ring);
        proj.insert(
            i,
            SparseIntMatrix::block(
                ring,
                &[x.rank(i + 1)],
                &[y.rank(i), x.rank(i + 1)],
                &[(0, 1, &id_x)],
            )?,
        );
    }
    let inclusion = GradedMap::new(y.clone(), c.clone(), 0, inc)?;
    let projection = GradedMap::new(c.clone(), x.clone(), 1, proj)?;
    Ok((c, inclusion, projection))
}

/// A square
///
/// ```text
/// X' --top--> Y'
/// |left       |right
/// X  --bottom--> Y
/// ```
///
/// commuting up to `homotopy: X' -> Y` of degree -1 with
/// `dF + Fd = bottom∘left - right∘top`.
#[derive(Clone, Debug)]
pub struct HomotopySquare {
    pub top: ChainMap,
    pub bottom: ChainMap,
    pub left: ChainMap,
    pub right: ChainMap,
    pub homotopy: Homotopy,
}

impl HomotopySquare {
    pub fn residual(&self) -> Result<GradedMap> {
        let lhs = self.homotopy.d_bracket(1)?;
        let rhs = self
            .bottom
            .compose(&self.left)?
            .sub(&self.right.compose(&self.top)?)?;
        lhs.sub(&rhs)
    }

    pub fn check(&self) -> Result<()> {
        for (m, what) in [
            (&self.top, "top map"),
            (&self.bottom, "bottom map"),
            (&self.left, "left map"),
            (&self.right, "right map"),
        ] {
            require_chain_map(m, what)?;
        }
        if self.homotopy.degree != -1 {
            return contract("square homotopy must have degree -1");
        }
        require_zero(&self.residual()?, "square relation dF + Fd = f u - v f'")
    }
}

fn block_map(
    source: &Arc<ChainComplex>,
    target: &Arc<ChainComplex>,
    degree: i64,
    build: impl Fn(i64) -> Result<SparseIntMatrix>,
) -> Result<GradedMap> {
    let mut comps = BTreeMap::new();
    for i in source.degrees() {
        if target.rank(i + degree) > 0 {
            comps.insert(i, build(i)?);
        }
    }
    GradedMap::new(source.clone(), target.clone(), degree, comps)
}

/// `F_* : Cone(top) -> Cone(bottom)`, `F_*^i = [[v^i, -F^{i+1}], [0, u^{i+1}]]`.
pub fn cone_functorial_map(sq: &HomotopySquare) -> Result<ChainMap> {
    sq.check()?;
    let src = Arc::new(cone(&sq.top)?);
    let tgt = Arc::new(cone(&sq.bottom)?);
    let (xp, yp) = (&sq.top.source, &sq.top.target);
    let (x, y) = (&sq.bottom.source, &sq.bottom.target);
    let ring = src.ring();
    let out = block_map(&src, &tgt, 0, |i| {
        let neg_f = sq.homotopy.component(i + 1).neg();
        SparseIntMatrix::block(
            ring,
            &[y.rank(i), x.rank(i + 1)],
            &[yp.rank(i), xp.rank(i + 1)],
            &[
                (0, 0, &sq.right.component(i)),
                (0, 1, &neg_f),
                (1, 1, &sq.left.component(i + 1)),
            ],
        )
    })?;
    require_chain_map(&out, "induced cone map")?;
    Ok(out)
}

/// `ĝ : Cone(f) -> Z`, `ĝ^i = [g^i, -H^{i+1}]`, given `dH + Hd = -g f`.
pub fn cone_factor(f: &ChainMap, g: &ChainMap, h: &Homotopy) -> Result<ChainMap> {
    require_chain_map(f, "f")?;
    require_chain_map(g, "g")?;
    if h.degree != -1 {
        return contract("homotopy must have degree -1");
    }
    let rel = h.d_bracket(1)?.add(&g.compose(f)?)?;
    require_zero(&rel, "relation dH + Hd = -g f")?;
    let src = Arc::new(cone(f)?);
    let (x, y) = (&f.source, &f.target);
    let z = &g.target;
    let ring = src.ring();
    let out = block_map(&src, z, 0, |i| {
        let neg_h = h.component(i + 1).neg();
        SparseIntMatrix::block(
            ring,
            &[z.rank(i)],
            &[y.rank(i), x.rank(i + 1)],
            &[(0, 0, &g.component(i)), (0, 1, &neg_h)],
        )
    })?;
    require_chain_map(&out, "factored map")?;
    Ok(out)
}

fn require_equal(a: &ChainMap, b: &ChainMap, what: &str) -> Result<()> {
    if a != b {
        return contract(format!("{what} do not agree"));
    }
    Ok(())
}

/// Homotopy `Ĝ = (G, -Ψ)` from `ĝ∘F_*` to `w∘ĝ'`, where the left square
/// `(f, f', u, v, F)` and the right square `(g, g', v, w, G)` share `v`,
/// `g f = 0 = g' f'`, and `dΨ - Ψd = g F + G f'`. Satisfies
/// `dĜ + Ĝd = ĝ F_* - w ĝ'`.
pub fn cone_hfunc_homotopy(
    left: &HomotopySquare,
    right: &HomotopySquare,
    psi: &GradedMap,
) -> Result<Homotopy> {
    left.check()?;
    right.check()?;
    require_equal(&left.right, &right.left, "shared vertical maps")?;
    require_zero(&right.bottom.compose(&left.bottom)?, "g f = 0")?;
    require_zero(&right.top.compose(&left.top)?, "g' f' = 0")?;
    if psi.degree != -2 {
        return contract("Ψ must have degree -2");
    }
    let rel = psi.d_bracket(-1)?.sub(
        &right
            .bottom
            .compose(&left.homotopy)?
            .add(&right.homotopy.compose(&left.top)?)?,
    )?;
    require_zero(&rel, "relation dΨ - Ψd = g F + G f'")?;

    let (fp, g) = (&left.top, &right.homotopy);
    let src = Arc::new(cone(fp)?);
    let z = &right.bottom.target;
    let (xp, yp) = (&fp.source, &fp.target);
    let ring = src.ring();
    let out = block_map(&src, z, -1, |i| {
        let neg_psi = psi.component(i + 1).neg();
        SparseIntMatrix::block(
            ring,
            &[z.rank(i - 1)],
            &[yp.rank(i), xp.rank(i + 1)],
            &[(0, 0, &g.component(i)), (0, 1, &neg_psi)],
        )
    })?;

    let zero_h =
        |f: &ChainMap, g: &ChainMap| GradedMap::zero(f.source.clone(), g.target.clone(), -1);
    let ghat = cone_factor(
        &left.bottom,
        &right.bottom,
        &zero_h(&left.bottom, &right.bottom),
    )?;
    let ghat_p = cone_factor(&left.top, &right.top, &zero_h(&left.top, &right.top))?;
    let f_star = cone_functorial_map(left)?;
    let target_rel = out
        .d_bracket(1)?
        .sub(&ghat.compose(&f_star)?.sub(&right.right.compose(&ghat_p)?)?)?;
    require_zero(&target_rel, "identity dĜ + Ĝd = ĝ F_* - w ĝ'")?;
    Ok(out)
}

/// `k : Cone(f) -> Cone(h)[1]`, `(y, x) ↦ (0, g y)`, for `X -f-> Y -g-> Z -h-> W`
/// with `g f = 0` and `h g = 0`.
pub fn cone_to_cocone(f: &ChainMap, g: &ChainMap, h: &ChainMap) -> Result<ChainMap> {
    require_zero(&g.compose(f)?, "g f = 0")?;
    require_zero(&h.compose(g)?, "h g = 0")?;
    let src = Arc::new(cone(f)?);
    let tgt = Arc::new(cone(h)?.shift(1));
    let (x, y) = (&f.source, &f.target);
    let (z, w) = (&h.source, &h.target);
    let ring = src.ring();
    block_map(&src, &tgt, 0, |i| {
        SparseIntMatrix::block(
            ring,
            &[w.rank(i - 1), z.rank(i)],
            &[y.rank(i), x.rank(i + 1)],
            &[(1, 0, &g.component(i))],
        )
    })
}

/// Homotopy `Γ_* = [[-Ξ, Γ], [G, -Ψ]] : Cone(f') -> Cone(h)[1]` of degree -1
/// between `k F_*` and `H_* k'`, for three squares `(f, f', u, v, F)`,
/// `(g, g', v, w, G)`, `(h, h', w, ω, H)` with vanishing composites and
/// `dΨ - Ψd = g F + G f'`, `dΞ - Ξd = h G + H g'`, `dΓ + Γd = h Ψ - Ξ f'`.
/// Satisfies `dΓ_* + Γ_* d = k F_* - H_* k'`.
pub fn cone_cocone_homotopy(
    left: &HomotopySquare,
    mid: &HomotopySquare,
    right: &HomotopySquare,
    psi: &GradedMap,
    xi: &GradedMap,
    gamma: &GradedMap,
) -> Result<Homotopy> {
    for sq in [left, mid, right] {
        sq.check()?;
    }
    require_equal(&left.right, &mid.left, "left and middle vertical maps")?;
    require_equal(&mid.right, &right.left, "middle and right vertical maps")?;
    if psi.degree != -2 || xi.degree != -2 || gamma.degree != -3 {
        return contract("Ψ and Ξ need degree -2, Γ degree -3");
    }
    let (f, fp, big_f) = (&left.bottom, &left.top, &left.homotopy);
    let (g, gp, big_g) = (&mid.bottom, &mid.top, &mid.homotopy);
    let (h, hp, big_h) = (&right.bottom, &right.top, &right.homotopy);
    let rel1 = psi
        .d_bracket(-1)?
        .sub(&g.compose(big_f)?.add(&big_g.compose(fp)?)?)?;
    require_zero(&rel1, "relation dΨ - Ψd = g F + G f'")?;
    let rel2 = xi
        .d_bracket(-1)?
        .sub(&h.compose(big_g)?.add(&big_h.compose(gp)?)?)?;
    require_zero(&rel2, "relation dΞ - Ξd = h G + H g'")?;
    let rel3 = gamma
        .d_bracket(1)?
        .sub(&h.compose(psi)?.sub(&xi.compose(fp)?)?)?;
    require_zero(&rel3, "relation dΓ + Γd = h Ψ - Ξ f'")?;

    let k = cone_to_cocone(f, g, h)?;
    let kp = cone_to_cocone(fp, gp, hp)?;
    let f_star = cone_functorial_map(left)?;
    let h_star = cone_functorial_map(right)?.shift(1);

    let src = kp.source.clone();
    let tgt = k.target.clone();
    let (xp, yp) = (&fp.source, &fp.target);
    let (z, w) = (&h.source, &h.target);
    let ring = src.ring();
    let out = block_map(&src, &tgt, -1, |i| {
        let neg_xi = xi.component(i).neg();
        let neg_psi = psi.component(i + 1).neg();
        SparseIntMatrix::block(
            ring,
            &[w.rank(i - 2), z.rank(i - 1)],
            &[yp.rank(i), xp.rank(i + 1)],
            &[
                (0, 0, &neg_xi),
                (0, 1, &gamma.component(i + 1)),
                (1, 0, &big_g.component(i)),
                (1, 1, &neg_psi),
            ],
        )
    })?;
    let rel = out
        .d_bracket(1)?
        .sub(&k.compose(&f_star)?.sub(&h_star.compose(&kp)?)?)?;
    require_zero(&rel, "identity dΓ_* + Γ_* d = k F_* - H_* k'")?;
    Ok(out)
}
