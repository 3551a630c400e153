//! Extended PD codes for oriented link diagrams with double points.
//!
//! A crossing `(a, b, c, d)` lists its edges counterclockwise starting from an
//! incoming strand; `a -> c` is the under-strand of an ordinary crossing. At a
//! double point the tuple starts from either incoming strand.

mod braid;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{contract, ParseError, Result};

pub use braid::{Braid, BraidLetter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossingKind {
    Ordinary,
    Singular,
}

/// Choice of crossing replacing a double point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resolution {
    Negative,
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    name: Option<String>,
    pd: Vec<[u64; 4]>,
    kinds: Vec<CrossingKind>,
    free_loops: usize,
    /// `incoming[x][p]`: the edge at slot `p` of crossing `x` enters the crossing.
    incoming: Vec<[bool; 4]>,
    /// Sorted distinct edge labels; the position is the dense edge index.
    labels: Vec<u64>,
    /// Dense edge index per slot.
    slots: Vec<[usize; 4]>,
    components: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    pd: Vec<[i64; 4]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    singular: Vec<usize>,
    #[serde(default, skip_serializing_if = "is_zero")]
    free_loops: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

/// A state of a diagram: a crossing for each double point (in crossing order)
/// and a smoothing for every crossing, `true` meaning the 1-smoothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub resolution: Vec<Resolution>,
    pub smoothing: Vec<bool>,
}

/// Circles of a complete smoothing. Circles are ordered by their smallest edge
/// label; free loops come last and carry no edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleConfiguration {
    pub circles: Vec<Vec<u64>>,
    /// Per crossing: the circle through the arc at slot 0, and the circle through the other arc.
    pub incidence: Vec<(usize, usize)>,
}

impl CircleConfiguration {
    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Faces of the map with rotation given by slot order must satisfy
/// `V - E + F = 2` on every connected component.
fn check_planar(slots: &[[usize; 4]], occ: &Occurrences) -> std::result::Result<(), ParseError> {
    let n = slots.len();
    let opposite = |x: usize, p: usize| {
        let [a, b] = occ[slots[x][p]];
        if a == (x, p) {
            b
        } else {
            a
        }
    };
    let mut seen = vec![false; 4 * n];
    let mut faces = 0;
    for start in 0..4 * n {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            let (y, q) = opposite(d / 4, d % 4);
            d = 4 * y + (q + 1) % 4;
        }
    }
    let mut uf = UnionFind::new(n);
    for [(x, _), (y, _)] in occ {
        uf.union(*x, *y);
    }
    let parts = (0..n).filter(|x| uf.find(*x) == *x).count();
    if faces != n + 2 * parts {
        return Err(ParseError::NonPlanar((n + 2 * parts - faces) / 2));
    }
    Ok(())
}

fn rotate<T: Copy>(t: [T; 4], k: usize) -> [T; 4] {
    [t[k % 4], t[(k + 1) % 4], t[(k + 2) % 4], t[(k + 3) % 4]]
}

impl Diagram {
    /// Builds and validates a diagram, deriving orientations by traversal.
    pub fn new(
        pd: Vec<[i64; 4]>,
        singular: &[usize],
        free_loops: usize,
        name: Option<String>,
    ) -> std::result::Result<Diagram, ParseError> {
        let mut tuples = Vec::with_capacity(pd.len());
        for t in &pd {
            let mut out = [0u64; 4];
            for (k, v) in t.iter().enumerate() {
                if *v <= 0 {
                    return Err(ParseError::BadLabel(*v));
                }
                out[k] = *v as u64;
            }
            tuples.push(out);
        }
        let mut kinds = vec![CrossingKind::Ordinary; pd.len()];
        for &s in singular {
            if s >= pd.len() {
                return Err(ParseError::SingularIndex {
                    index: s,
                    len: pd.len(),
                });
            }
            if kinds[s] == CrossingKind::Singular {
                return Err(ParseError::DuplicateSingular(s));
            }
            kinds[s] = CrossingKind::Singular;
        }
        let (labels, slots, occ) = index_edges(&tuples)?;
        check_planar(&slots, &occ)?;
        let incoming = orient(&tuples, &slots, &occ, &labels)?;
        Ok(Self::assemble(
            name, tuples, kinds, free_loops, incoming, labels, slots,
        ))
    }

    /// Builds a diagram with a prescribed orientation, checking it is consistent.
    pub(crate) fn with_orientation(
        name: Option<String>,
        pd: Vec<[u64; 4]>,
        kinds: Vec<CrossingKind>,
        free_loops: usize,
        incoming: Vec<[bool; 4]>,
    ) -> std::result::Result<Diagram, ParseError> {
        if let Some(bad) = pd.iter().flatten().find(|v| **v == 0) {
            return Err(ParseError::BadLabel(*bad as i64));
        }
        let (labels, slots, occ) = index_edges(&pd)?;
        if incoming.len() != pd.len() || kinds.len() != pd.len() {
            return Err(ParseError::Orientation(0));
        }
        for (x, inc) in incoming.iter().enumerate() {
            if !inc[0] || inc[2] || inc[1] == inc[3] {
                return Err(ParseError::Orientation(pd[x][0]));
            }
        }
        for (e, pair) in occ.iter().enumerate() {
            let [(x, p), (y, q)] = *pair;
            if incoming[x][p] == incoming[y][q] {
                return Err(ParseError::Orientation(labels[e]));
            }
        }
        Ok(Self::assemble(
            name, pd, kinds, free_loops, incoming, labels, slots,
        ))
    }

    fn assemble(
        name: Option<String>,
        pd: Vec<[u64; 4]>,
        kinds: Vec<CrossingKind>,
        free_loops: usize,
        incoming: Vec<[bool; 4]>,
        labels: Vec<u64>,
        slots: Vec<[usize; 4]>,
    ) -> Diagram {
        // strand components: edges joined through opposite slots
        let mut uf = UnionFind::new(labels.len());
        for s in &slots {
            uf.union(s[0], s[2]);
            uf.union(s[1], s[3]);
        }
        let components = (0..labels.len()).filter(|&e| uf.find(e) == e).count() + free_loops;
        Diagram {
            name,
            pd,
            kinds,
            free_loops,
            incoming,
            labels,
            slots,
            components,
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Diagram, ParseError> {
        let w: DiagramWire = serde_json::from_str(text)?;
        Diagram::new(w.pd, &w.singular, w.free_loops, w.name)
    }

    pub fn to_json(&self) -> String {
        let w = DiagramWire {
            name: self.name.clone(),
            pd: self.pd.iter().map(|t| t.map(|v| v as i64)).collect(),
            singular: self.double_points(),
            free_loops: self.free_loops,
        };
        serde_json::to_string(&w).expect("diagram serializes")
    }

    /// Unknot diagrams without crossings.
    pub fn free(loops: usize) -> Diagram {
        Self::assemble(None, vec![], vec![], loops, vec![], vec![], vec![])
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn pd(&self) -> &[[u64; 4]] {
        &self.pd
    }

    pub fn kinds(&self) -> &[CrossingKind] {
        &self.kinds
    }

    pub fn kind(&self, x: usize) -> CrossingKind {
        self.kinds[x]
    }

    pub fn incoming(&self, x: usize) -> [bool; 4] {
        self.incoming[x]
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn crossing_count(&self) -> usize {
        self.pd.len()
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Indices of double points in increasing order.
    pub fn double_points(&self) -> Vec<usize> {
        (0..self.pd.len())
            .filter(|&x| self.kinds[x] == CrossingKind::Singular)
            .collect()
    }

    pub fn is_singular(&self) -> bool {
        self.kinds.contains(&CrossingKind::Singular)
    }

    /// +1 or -1 by the right-hand rule: positive when the over-strand runs from slot 3 to slot 1.
    pub fn crossing_sign(&self, x: usize) -> Result<i8> {
        if x >= self.pd.len() {
            return contract(format!("crossing {x} out of range"));
        }
        if self.kinds[x] == CrossingKind::Singular {
            return contract(format!("crossing {x} is a double point and has no sign"));
        }
        Ok(if self.incoming[x][3] { 1 } else { -1 })
    }

    fn count_sign(&self, positive: bool) -> usize {
        (0..self.pd.len())
            .filter(|&x| self.kinds[x] == CrossingKind::Ordinary && self.incoming[x][3] == positive)
            .count()
    }

    pub fn n_plus(&self) -> usize {
        self.count_sign(true)
    }

    pub fn n_minus(&self) -> usize {
        self.count_sign(false)
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus() as i64 - self.n_minus() as i64
    }

    /// Replaces double point `x` by a positive or negative crossing.
    pub fn resolve_double_point(&self, x: usize, r: Resolution) -> Result<Diagram> {
        if x >= self.pd.len() || self.kinds[x] != CrossingKind::Singular {
            return contract(format!("crossing {x} is not a double point"));
        }
        // the tuple as given is the crossing with the strand at slot 0 under
        let under_first_sign = if self.incoming[x][3] {
            Resolution::Positive
        } else {
            Resolution::Negative
        };
        let shift = if r == under_first_sign {
            0
        } else if self.incoming[x][3] {
            3
        } else {
            1
        };
        let mut d = self.clone();
        d.pd[x] = rotate(self.pd[x], shift);
        d.incoming[x] = rotate(self.incoming[x], shift);
        d.slots[x] = rotate(self.slots[x], shift);
        d.kinds[x] = CrossingKind::Ordinary;
        Ok(d)
    }

    /// Resolves every double point; `scheme[k]` applies to the `k`-th double point.
    pub fn resolve_all(&self, scheme: &[Resolution]) -> Result<Diagram> {
        let dps = self.double_points();
        if dps.len() != scheme.len() {
            return contract(format!(
                "{} resolutions given for {} double points",
                scheme.len(),
                dps.len()
            ));
        }
        let mut d = self.clone();
        for (x, r) in dps.into_iter().zip(scheme) {
            d = d.resolve_double_point(x, *r)?;
        }
        Ok(d)
    }

    /// Swaps over and under at ordinary crossing `x`.
    pub fn crossing_change(&self, x: usize) -> Result<Diagram> {
        if x >= self.pd.len() || self.kinds[x] != CrossingKind::Ordinary {
            return contract(format!("crossing {x} is not an ordinary crossing"));
        }
        let mut d = self.clone();
        d.change_in_place(x);
        Ok(d)
    }

    fn change_in_place(&mut self, x: usize) {
        let shift = if self.incoming[x][3] { 3 } else { 1 };
        self.pd[x] = rotate(self.pd[x], shift);
        self.incoming[x] = rotate(self.incoming[x], shift);
        self.slots[x] = rotate(self.slots[x], shift);
    }

    /// Mirror image: every ordinary crossing changes, double points stay.
    pub fn mirror(&self) -> Diagram {
        let mut d = self.clone();
        for x in 0..d.pd.len() {
            if d.kinds[x] == CrossingKind::Ordinary {
                d.change_in_place(x);
            }
        }
        d
    }

    /// Disjoint union; labels of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Diagram) -> Diagram {
        let shift = self.labels.last().copied().unwrap_or(0);
        let mut pd = self.pd.clone();
        pd.extend(other.pd.iter().map(|t| t.map(|v| v + shift)));
        let mut kinds = self.kinds.clone();
        kinds.extend(other.kinds.iter().copied());
        let mut incoming = self.incoming.clone();
        incoming.extend(other.incoming.iter().copied());
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a} u {b}")),
            _ => None,
        };
        Diagram::with_orientation(
            name,
            pd,
            kinds,
            self.free_loops + other.free_loops,
            incoming,
        )
        .expect("union of valid diagrams is valid")
    }

    /// Circles of a state.
    pub fn resolve(&self, state: &State) -> Result<CircleConfiguration> {
        if state.smoothing.len() != self.pd.len() {
            return contract(format!(
                "state smooths {} crossings, diagram has {}",
                state.smoothing.len(),
                self.pd.len()
            ));
        }
        let d = self.resolve_all(&state.resolution)?;
        let mask =
            state
                .smoothing
                .iter()
                .enumerate()
                .fold(0u64, |m, (k, b)| if *b { m | (1u64 << k) } else { m });
        if self.pd.len() > 63 {
            return contract("at most 63 crossings can be smoothed");
        }
        let s = d.smoothing(mask);
        let mut circles = vec![Vec::new(); s.count];
        for (e, c) in s.edge_circle.iter().enumerate() {
            circles[*c].push(d.labels[e]);
        }
        Ok(CircleConfiguration {
            circles,
            incidence: s.incidence,
        })
    }

    /// Circles of the smoothing given by `mask` (bit `x` set = 1-smoothing at `x`).
    /// Double points are treated like ordinary crossings given by their tuple.
    pub(crate) fn smoothing(&self, mask: u64) -> Smoothing {
        let e = self.labels.len();
        let mut uf = UnionFind::new(e);
        for (x, s) in self.slots.iter().enumerate() {
            if mask >> x & 1 == 0 {
                uf.union(s[0], s[1]);
                uf.union(s[2], s[3]);
            } else {
                uf.union(s[0], s[3]);
                uf.union(s[1], s[2]);
            }
        }
        let mut id = vec![usize::MAX; e];
        let mut edge_circle = vec![0usize; e];
        let mut count = 0;
        for (k, c) in edge_circle.iter_mut().enumerate() {
            let r = uf.find(k);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            *c = id[r];
        }
        let incidence = self
            .slots
            .iter()
            .enumerate()
            .map(|(x, s)| {
                let other = if mask >> x & 1 == 0 { s[2] } else { s[1] };
                (edge_circle[s[0]], edge_circle[other])
            })
            .collect();
        Smoothing {
            count: count + self.free_loops,
            free: self.free_loops,
            edge_circle,
            incidence,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Smoothing {
    /// Number of circles, free loops included (they come last).
    pub count: usize,
    pub free: usize,
    pub edge_circle: Vec<usize>,
    pub incidence: Vec<(usize, usize)>,
}

type Occurrences = Vec<[(usize, usize); 2]>;
/// Sorted labels, dense edge index per slot, and the two slots of each edge.
type EdgeIndex = (Vec<u64>, Vec<[usize; 4]>, Occurrences);

fn index_edges(pd: &[[u64; 4]]) -> std::result::Result<EdgeIndex, ParseError> {
    let mut seen: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, t) in pd.iter().enumerate() {
        for (p, v) in t.iter().enumerate() {
            seen.entry(*v).or_default().push((x, p));
        }
    }
    if let Some((label, occ)) = seen.iter().find(|(_, o)| o.len() != 2) {
        return Err(ParseError::LabelCount {
            label: *label,
            count: occ.len(),
        });
    }
    let labels: Vec<u64> = seen.keys().copied().collect();
    let mut slots = vec![[0usize; 4]; pd.len()];
    let mut occ = Vec::with_capacity(labels.len());
    for (e, (_, o)) in seen.iter().enumerate() {
        for &(x, p) in o {
            slots[x][p] = e;
        }
        occ.push([o[0], o[1]]);
    }
    Ok((labels, slots, occ))
}

/// Orientation by propagation. Slot 0 enters and slot 2 leaves every crossing;
/// opposite slots of a crossing and the two ends of an edge have opposite
/// flags. A component meeting no such constraint is oriented from its smallest
/// edge towards the smaller of that edge's two neighbours.
fn orient(
    pd: &[[u64; 4]],
    slots: &[[usize; 4]],
    occ: &Occurrences,
    labels: &[u64],
) -> std::result::Result<Vec<[bool; 4]>, ParseError> {
    let n = pd.len();
    let mut val: Vec<Option<bool>> = vec![None; 4 * n];
    let partner_edge = |v: usize| -> usize {
        let (x, p) = (v / 4, v % 4);
        let e = slots[x][p];
        let [a, b] = occ[e];
        if a == (x, p) {
            4 * b.0 + b.1
        } else {
            4 * a.0 + a.1
        }
    };
    let partner_strand = |v: usize| -> usize { 4 * (v / 4) + (v % 4 + 2) % 4 };

    let propagate = |val: &mut Vec<Option<bool>>,
                     seed: usize,
                     value: bool|
     -> std::result::Result<(), ParseError> {
        let mut queue = VecDeque::new();
        match val[seed] {
            Some(v) if v != value => {
                return Err(ParseError::Orientation(labels[slots[seed / 4][seed % 4]]))
            }
            Some(_) => return Ok(()),
            None => {}
        }
        val[seed] = Some(value);
        queue.push_back(seed);
        while let Some(v) = queue.pop_front() {
            let cur = val[v].unwrap();
            for w in [partner_edge(v), partner_strand(v)] {
                match val[w] {
                    None => {
                        val[w] = Some(!cur);
                        queue.push_back(w);
                    }
                    Some(b) if b == cur => {
                        return Err(ParseError::Orientation(labels[slots[w / 4][w % 4]]));
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(())
    };

    for x in 0..n {
        propagate(&mut val, 4 * x, true)?;
        propagate(&mut val, 4 * x + 2, false)?;
    }
    loop {
        // smallest edge among unoriented slots
        let free = (0..4 * n)
            .filter(|&v| val[v].is_none())
            .min_by_key(|&v| slots[v / 4][v % 4]);
        let Some(v) = free else { break };
        let e = slots[v / 4][v % 4];
        let [(x, p), (y, q)] = occ[e];
        let next_x = slots[x][(p + 2) % 4];
        let next_y = slots[y][(q + 2) % 4];
        if next_x <= next_y {
            propagate(&mut val, 4 * x + p, true)?;
        } else {
            propagate(&mut val, 4 * y + q, true)?;
        }
    }
    Ok((0..n)
        .map(|x| [0, 1, 2, 3].map(|p| val[4 * x + p].unwrap()))
        .collect())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn trefoil() -> Diagram {
        Diagram::new(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], &[], 0, None).unwrap()
    }

    fn hopf() -> Diagram {
        Diagram::new(vec![[1, 3, 2, 4], [3, 1, 4, 2]], &[], 0, None).unwrap()
    }

    fn state(bits: &[bool]) -> State {
        State {
            resolution: vec![],
            smoothing: bits.to_vec(),
        }
    }

    #[test]
    fn trefoil_parses() {
        let t = trefoil();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.components(), 1);
        let signs: Vec<i8> = (0..3).map(|x| t.crossing_sign(x).unwrap()).collect();
        assert!(signs.iter().all(|s| *s == signs[0]));
        // hand traversal: 1 -> 2 -> ... -> 6 along the under/over passes gives a left-handed trefoil
        assert_eq!(signs[0], -1);
    }

    #[test]
    fn unknot_and_bad_labels() {
        let u = Diagram::from_json(r#"{"pd": [], "free_loops": 1}"#).unwrap();
        assert_eq!(u.components(), 1);
        assert_eq!(u.resolve(&state(&[])).unwrap().len(), 1);
        let e = Diagram::from_json(r#"{"pd": [[1,2,3,7],[1,2,3,4]]}"#).unwrap_err();
        assert!(matches!(e, ParseError::LabelCount { label: 4, count: 1 }));
        assert!(matches!(
            Diagram::from_json(r#"{"pd": [[0,1,1,0]]}"#).unwrap_err(),
            ParseError::BadLabel(0)
        ));
        assert!(matches!(
            Diagram::from_json("{").unwrap_err(),
            ParseError::Json(_)
        ));
        assert!(matches!(
            Diagram::from_json(r#"{"pd": [[1,2,2,1]], "singular": [1]}"#).unwrap_err(),
            ParseError::SingularIndex { .. }
        ));
        assert!(matches!(
            Diagram::from_json(r#"{"pd": [[1,2,2,1]], "singular": [0, 0]}"#).unwrap_err(),
            ParseError::DuplicateSingular(0)
        ));
        assert!(Diagram::from_json(r#"{"pd": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn inconsistent_orientation_rejected() {
        // edge 1 would have to enter both crossings through slot 0
        let e = Diagram::new(vec![[1, 3, 2, 2], [1, 4, 4, 3]], &[], 0, None).unwrap_err();
        assert!(matches!(e, ParseError::Orientation(_)));
    }

    #[test]
    fn virtual_codes_rejected() {
        // two loops meeting once
        let e = Diagram::new(vec![[2, 1, 2, 1]], &[], 0, None).unwrap_err();
        assert!(matches!(e, ParseError::NonPlanar(1)));
        let e = Diagram::new(vec![[2, 3, 1, 4], [3, 2, 1, 4]], &[], 0, None).unwrap_err();
        assert!(matches!(e, ParseError::NonPlanar(_)));
        assert!(Diagram::new(vec![[1, 2, 2, 1]], &[], 0, None).is_ok());
        let split = Diagram::new(vec![[1, 2, 2, 1], [3, 4, 4, 3]], &[], 0, None).unwrap();
        assert_eq!(split.components(), 2);
    }

    #[test]
    fn hopf_circles() {
        let h = hopf();
        assert_eq!(h.components(), 2);
        let count = |b: [bool; 2]| h.resolve(&state(&b)).unwrap().len();
        assert_eq!(count([false, false]), 2);
        assert_eq!(count([true, true]), 2);
        assert_eq!(count([false, true]), 1);
        assert_eq!(count([true, false]), 1);
    }

    #[test]
    fn trefoil_all_zero_smoothing() {
        // joins (1,4),(2,5) ; (3,6),(4,1) ; (5,2),(6,3): circles {1,4}, {2,5}, {3,6}
        let c = trefoil().resolve(&state(&[false; 3])).unwrap();
        assert_eq!(c.circles, vec![vec![1, 4], vec![2, 5], vec![3, 6]]);
        assert_eq!(c.incidence[0], (0, 1));
    }

    #[test]
    fn toggling_changes_circle_count_by_one() {
        for d in [trefoil(), hopf()] {
            let n = d.crossing_count();
            for mask in 0u64..(1 << n) {
                let k = d.smoothing(mask).count as i64;
                for x in 0..n {
                    let k2 = d.smoothing(mask ^ (1 << x)).count as i64;
                    assert_eq!((k - k2).abs(), 1);
                }
            }
        }
    }

    #[test]
    fn mirror_properties() {
        let t = trefoil();
        let m = t.mirror();
        assert_eq!(m.mirror(), t);
        assert_eq!(m.writhe(), -t.writhe());
        assert!((0..3).all(|x| m.crossing_sign(x).unwrap() == 1));
        let s = Diagram::new(vec![[1, 2, 2, 1]], &[0], 0, None).unwrap();
        assert_eq!(s.mirror(), s);
        assert!(s.crossing_sign(0).is_err());
    }

    #[test]
    fn kink_signs() {
        // slot 3 enters: positive kink
        let pos = Diagram::new(vec![[1, 1, 2, 2]], &[], 0, None).unwrap();
        let neg = Diagram::new(vec![[2, 1, 1, 2]], &[], 0, None).unwrap();
        let other = Diagram::new(vec![[1, 2, 2, 1]], &[], 0, None).unwrap();
        assert_eq!(pos.crossing_sign(0).unwrap(), 1);
        assert_eq!(neg.crossing_sign(0).unwrap(), -1);
        assert_eq!(other.crossing_sign(0).unwrap(), -1);
    }

    #[test]
    fn double_point_resolutions() {
        let d = Diagram::new(vec![[2, 3, 1, 4], [1, 3, 2, 4]], &[1], 0, None).unwrap();
        let minus = d.resolve_double_point(1, Resolution::Negative).unwrap();
        let plus = d.resolve_double_point(1, Resolution::Positive).unwrap();
        assert_eq!(minus.crossing_sign(1).unwrap(), -1);
        assert_eq!(plus.crossing_sign(1).unwrap(), 1);
        assert_eq!(minus.crossing_change(1).unwrap(), plus);
        assert_eq!(plus.crossing_change(1).unwrap(), minus);
        // the V-smoothing of the negative crossing is the 0-smoothing of the positive one
        let v = minus.smoothing(0b10);
        let w = plus.smoothing(0b00);
        assert_eq!(v.count, w.count);
        assert_eq!(v.edge_circle, w.edge_circle);
        assert!(d.resolve_double_point(0, Resolution::Negative).is_err());
        assert_eq!(d.resolve_all(&[Resolution::Positive]).unwrap(), plus);
    }

    #[test]
    fn disjoint_union_counts() {
        let u = Diagram::free(1);
        let uu = u.disjoint_union(&u);
        assert_eq!(uu.free_loops(), 2);
        assert_eq!(uu.components(), 2);
        let t = trefoil();
        let tu = t.disjoint_union(&u);
        assert_eq!(tu.crossing_count(), 3);
        assert_eq!(tu.free_loops(), 1);
        let th = t.disjoint_union(&hopf());
        assert_eq!(th.components(), t.components() + 2);
        assert_eq!(th.writhe(), t.writhe() + hopf().writhe());
    }

    #[test]
    fn json_round_trip() {
        for d in [
            trefoil(),
            hopf(),
            Diagram::free(2),
            Diagram::new(vec![[1, 2, 2, 1]], &[0], 1, Some("fi".into())).unwrap(),
        ] {
            assert_eq!(Diagram::from_json(&d.to_json()).unwrap(), d);
            assert_eq!(
                Diagram::from_json(&d.mirror().to_json()).unwrap(),
                d.mirror()
            );
        }
    }

    #[test]
    fn circle_partition_ignores_crossing_order() {
        let t = trefoil();
        let perm = [2usize, 0, 1];
        let pd: Vec<[i64; 4]> = perm.iter().map(|&k| t.pd()[k].map(|v| v as i64)).collect();
        let u = Diagram::new(pd, &[], 0, None).unwrap();
        for mask in 0u64..8 {
            let mut pmask = 0u64;
            for (new, &old) in perm.iter().enumerate() {
                if mask >> old & 1 == 1 {
                    pmask |= 1 << new;
                }
            }
            let a = t
                .resolve(&state(
                    &(0..3).map(|k| mask >> k & 1 == 1).collect::<Vec<_>>(),
                ))
                .unwrap();
            let b = u
                .resolve(&state(
                    &(0..3).map(|k| pmask >> k & 1 == 1).collect::<Vec<_>>(),
                ))
                .unwrap();
            assert_eq!(a.circles, b.circles);
        }
    }
}
