//! The genus-one crossing-change map `Φ̂ : Kh(D₋) -> Kh(D₊)` and complexes of
//! diagrams with double points, built as iterated mapping cones.
//!
//! At a state `s` of `D₋` that 1-smooths the crossing `c`, the circles of `s`
//! coincide with those of the state `s ∖ {c}` of `D₊`. Writing `L` and `R` for
//! the circles through slots 0 and 1 of the negative crossing, `Φ̂` acts there
//! as `(-1)^{#{a ∈ s : a < c}} (x_R - x_L)` and is zero when `L = R`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chain::{cone, ChainComplex, ChainMap, GradedMap};
use crate::diagram::{CrossingKind, Diagram, Resolution, State};
use crate::error::{contract, Error, Result};
use crate::frobenius::FrobeniusAlgebra;
use crate::invariants::{graded_euler, LaurentPoly};
use crate::khcube::{build_cube, label_bit, label_set, saddle_sign, CubeComplex};
use crate::linalg::{HomologySummary, Ring, SparseIntMatrix};

/// Entries of `x_R - x_L` on the labellings of `k` circles.
fn phi_entries(
    f: &FrobeniusAlgebra,
    k: usize,
    l: usize,
    r: usize,
    mut emit: impl FnMut(u64, u64, BigInt),
) {
    if l == r {
        return;
    }
    for lab in 0..1u64 << k {
        for (circle, sign) in [(r, 1), (l, -1)] {
            if label_bit(lab, k, circle) == 0 {
                emit(lab, label_set(lab, k, circle, 1), BigInt::from(sign));
            } else {
                // x·x = h x + t
                if !f.h().is_zero() {
                    emit(lab, lab, f.h() * sign);
                }
                if !f.t().is_zero() {
                    emit(lab, label_set(lab, k, circle, 0), f.t() * sign);
                }
            }
        }
    }
}

/// The local map `a ⊗ b ↦ a ⊗ xb - ax ⊗ b` on the module of a state of `d_minus`
/// that 1-smooths crossing `c`, as a square matrix on circle labellings.
pub fn phi_local(
    d_minus: &Diagram,
    state: &State,
    c: usize,
    f: &FrobeniusAlgebra,
) -> Result<SparseIntMatrix> {
    if c >= d_minus.crossing_count() {
        return contract(format!("crossing {c} out of range"));
    }
    if !state.smoothing.get(c).copied().unwrap_or(false) {
        return contract(format!(
            "crossing {c} is 0-smoothed; the map has no component there"
        ));
    }
    let config = d_minus.resolve(state)?;
    let (l, r) = config.incidence[c];
    let k = config.len();
    let mut trip = Vec::new();
    phi_entries(f, k, l, r, |a, b, v| trip.push((b as usize, a as usize, v)));
    SparseIntMatrix::from_triplets(1 << k, 1 << k, f.ring(), trip)
}

/// `Φ̂` for one crossing together with the two cubes it connects.
#[derive(Debug)]
pub struct GenusOneMap {
    pub minus: Arc<CubeComplex>,
    pub plus: Arc<CubeComplex>,
    pub crossing: usize,
    pub map: ChainMap,
}

/// `Φ̂ : Kh(D₋) -> Kh(D₊)` at the negative crossing `c` of `d_minus`.
pub fn genus_one_map(d_minus: &Diagram, c: usize, f: &FrobeniusAlgebra) -> Result<GenusOneMap> {
    if c >= d_minus.crossing_count() || d_minus.kind(c) != CrossingKind::Ordinary {
        return contract(format!("crossing {c} is not an ordinary crossing"));
    }
    if d_minus.crossing_sign(c)? != -1 {
        return contract(format!("crossing {c} is positive"));
    }
    let minus = Arc::new(build_cube(d_minus, f)?);
    let plus = Arc::new(build_cube(&d_minus.crossing_change(c)?, f)?);
    let map = genus_one_between(&minus, &plus, c)?;
    Ok(GenusOneMap {
        minus,
        plus,
        crossing: c,
        map,
    })
}

/// `Φ̂` between prebuilt cubes of `D₋` and `D₊` differing at crossing `c`.
pub(crate) fn genus_one_between(
    minus: &CubeComplex,
    plus: &CubeComplex,
    c: usize,
) -> Result<ChainMap> {
    if plus.diagram().pd() != minus.diagram().crossing_change(c)?.pd() {
        return contract(format!(
            "diagrams do not differ by a crossing change at {c}"
        ));
    }
    let f = minus.algebra();
    let n = minus.diagram().crossing_count();
    let mut trip: BTreeMap<i64, Vec<(usize, usize, BigInt)>> = BTreeMap::new();
    for k in 1..=n {
        for &s in minus.states_of_size(k) {
            if s >> c & 1 == 0 {
                continue;
            }
            let t = s & !(1u64 << c);
            let sm = minus.smoothing(s);
            let (l, r) = sm.incidence[c];
            let sign = BigInt::from(saddle_sign(s, c));
            phi_entries(f, sm.count, l, r, |a, b, v| {
                let (i, col) = minus.generator(s, a);
                let (_, row) = plus.generator(t, b);
                trip.entry(i).or_default().push((row, col, &sign * v));
            });
        }
    }
    let (src, tgt) = (minus.complex(), plus.complex());
    let mut comps = BTreeMap::new();
    for (i, t) in trip {
        comps.insert(
            i,
            SparseIntMatrix::from_triplets(tgt.rank(i), src.rank(i), f.ring(), t)?,
        );
    }
    GradedMap::new(src.clone(), tgt.clone(), 0, comps)
}

/// The complex of a diagram with double points.
#[derive(Clone, Debug)]
pub struct SingularComplex {
    pub diagram: Diagram,
    pub complex: Arc<ChainComplex>,
    /// Double points in the order the cones were taken, outermost first.
    pub order: Vec<usize>,
}

type Key = (Vec<[u64; 4]>, Vec<CrossingKind>, usize);

fn key(d: &Diagram) -> Key {
    (d.pd().to_vec(), d.kinds().to_vec(), d.free_loops())
}

/// Memoizes the cubes of fully resolved diagrams.
struct Builder<'a> {
    f: &'a FrobeniusAlgebra,
    cubes: Mutex<HashMap<Key, Arc<CubeComplex>>>,
}

impl<'a> Builder<'a> {
    fn new(f: &'a FrobeniusAlgebra) -> Self {
        Builder {
            f,
            cubes: Mutex::new(HashMap::new()),
        }
    }

    fn cube(&self, d: &Diagram) -> Result<Arc<CubeComplex>> {
        let k = key(d);
        if let Some(c) = self.cubes.lock().expect("cube cache").get(&k) {
            return Ok(c.clone());
        }
        let c = Arc::new(build_cube(d, self.f)?);
        self.cubes.lock().expect("cube cache").insert(k, c.clone());
        Ok(c)
    }

    /// `S(D) = Cone(Φ̂_b : S(D_{b-}) -> S(D_{b+}))` with `b = order[0]`.
    fn complex(&self, d: &Diagram, order: &[usize]) -> Result<Arc<ChainComplex>> {
        match order.split_first() {
            None => Ok(self.cube(d)?.complex().clone()),
            Some((b, rest)) => Ok(Arc::new(cone(&self.phi(d, *b, rest)?)?)),
        }
    }

    /// `Φ̂_b : S(D_{b-}) -> S(D_{b+})`, the remaining double points resolved by `order`.
    fn phi(&self, d: &Diagram, b: usize, order: &[usize]) -> Result<ChainMap> {
        let minus = d.resolve_double_point(b, Resolution::Negative)?;
        let plus = d.resolve_double_point(b, Resolution::Positive)?;
        let Some((b2, rest)) = order.split_first() else {
            let (m, p) = (self.cube(&minus)?, self.cube(&plus)?);
            return genus_one_between(&m, &p, b);
        };
        // on Cone(Y <- X) the lift is diag(Φ̂ on Y, -Φ̂ on X)
        let (on_plus, on_minus) = rayon::join(
            || self.phi(&d.resolve_double_point(*b2, Resolution::Positive)?, b, rest),
            || self.phi(&d.resolve_double_point(*b2, Resolution::Negative)?, b, rest),
        );
        let (on_plus, on_minus) = (on_plus?, on_minus?);
        let (src, tgt) = rayon::join(
            || self.complex(&minus, order),
            || self.complex(&plus, order),
        );
        let (src, tgt) = (src?, tgt?);
        let ring = self.f.ring();
        let mut comps = BTreeMap::new();
        for i in src.degrees() {
            let y = on_plus.component(i);
            let x = on_minus.component(i + 1).neg();
            let m = SparseIntMatrix::block(
                ring,
                &[y.rows(), x.rows()],
                &[y.cols(), x.cols()],
                &[(0, 0, &y), (1, 1, &x)],
            )?;
            comps.insert(i, m);
        }
        GradedMap::new(src, tgt, 0, comps)
    }
}

/// The complex of `d` with cones taken over double points in crossing order.
pub fn singular_complex(d: &Diagram, f: &FrobeniusAlgebra) -> Result<SingularComplex> {
    singular_complex_with_order(d, f, &d.double_points())
}

/// As [`singular_complex`] with an explicit order; `order` must list every double point once.
pub fn singular_complex_with_order(
    d: &Diagram,
    f: &FrobeniusAlgebra,
    order: &[usize],
) -> Result<SingularComplex> {
    check_order(d, order)?;
    let complex = Builder::new(f).complex(d, order)?;
    Ok(SingularComplex {
        diagram: d.clone(),
        complex,
        order: order.to_vec(),
    })
}

fn check_order(d: &Diagram, order: &[usize]) -> Result<()> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != d.double_points() {
        return contract("cone order must list every double point exactly once");
    }
    Ok(())
}

/// The lifted `Φ̂ : S(D_{b-}) -> S(D_{b+})` whose cone is the complex of `d`
/// with `b` resolved first and the other double points in crossing order.
pub fn vassiliev_map(d: &Diagram, b: usize, f: &FrobeniusAlgebra) -> Result<ChainMap> {
    if b >= d.crossing_count() || d.kind(b) != CrossingKind::Singular {
        return contract(format!("crossing {b} is not a double point"));
    }
    let rest: Vec<usize> = d.double_points().into_iter().filter(|x| *x != b).collect();
    Builder::new(f).phi(d, b, &rest)
}

/// Direct construction: the sum over resolution schemes `r` (the set of
/// positively resolved double points) of `Kh(D_r)` placed so that a generator
/// at state `s` sits in degree `|s| + 2|r| - n₋ - 2n×`, with differential
/// `(-1)^{n₋}(d_{D_r} + Σ_{b ∉ r} Φ̂_{r,b})`, `d_{D_r}` the unnormalized bracket
/// differential.
pub fn flattened_singular_complex(d: &Diagram, f: &FrobeniusAlgebra) -> Result<ChainComplex> {
    let dps = d.double_points();
    let m = dps.len();
    if m > 16 {
        return contract("too many double points");
    }
    let nm = d.n_minus();
    let ring = f.ring();
    let schemes: Vec<u32> = (0..1u32 << m).collect();
    let resolve = |r: u32| -> Result<Diagram> {
        let scheme: Vec<Resolution> = (0..m)
            .map(|k| {
                if r >> k & 1 == 1 {
                    Resolution::Positive
                } else {
                    Resolution::Negative
                }
            })
            .collect();
        d.resolve_all(&scheme)
    };
    let cubes: Vec<CubeComplex> = schemes
        .iter()
        .map(|r| build_cube(&resolve(*r)?, f))
        .collect::<Result<_>>()?;
    // Kh degree of D_r plus this offset gives the flattened degree
    let offset = |r: u32| -(m as i64 - r.count_ones() as i64);

    let degrees: BTreeSet<i64> = schemes
        .iter()
        .flat_map(|r| {
            cubes[*r as usize]
                .complex()
                .degrees()
                .map(move |i| i + offset(*r))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut ranks = BTreeMap::new();
    let mut block_off: HashMap<(u32, i64), usize> = HashMap::new();
    for &p in &degrees {
        let mut off = 0;
        for &r in &schemes {
            block_off.insert((r, p), off);
            off += cubes[r as usize].complex().rank(p - offset(r));
        }
        ranks.insert(p, off);
    }
    let global = if nm.is_multiple_of(2) { 1 } else { -1 };
    let mut trip: BTreeMap<i64, Vec<(usize, usize, BigInt)>> = BTreeMap::new();
    for &r in &schemes {
        let cube = &cubes[r as usize];
        // Kh differential times (-1)^{n₋(D_r)} is the bracket differential
        let own = if cube.n_minus().is_multiple_of(2) {
            1
        } else {
            -1
        };
        let s = BigInt::from(global * own);
        for (i, dm) in cube
            .complex()
            .degrees()
            .map(|i| (i, cube.complex().differential(i)))
        {
            let p = i + offset(r);
            let (co, ro) = (
                block_off[&(r, p)],
                block_off.get(&(r, p + 1)).copied().unwrap_or(0),
            );
            for (row, col, v) in dm.entries() {
                trip.entry(p)
                    .or_default()
                    .push((ro + row, co + col, &s * v));
            }
        }
        for (k, b) in dps.iter().enumerate() {
            if r >> k & 1 == 1 {
                continue;
            }
            let r2 = r | 1 << k;
            let phi = genus_one_between(cube, &cubes[r2 as usize], *b)?;
            for (i, mtx) in phi.components() {
                let p = i + offset(r);
                let (co, ro) = (
                    block_off[&(r, p)],
                    block_off.get(&(r2, p + 1)).copied().unwrap_or(0),
                );
                for (row, col, v) in mtx.entries() {
                    trip.entry(p)
                        .or_default()
                        .push((ro + row, co + col, BigInt::from(global) * v));
                }
            }
        }
    }
    let mut diffs = BTreeMap::new();
    for (p, t) in trip {
        let rows = ranks.get(&(p + 1)).copied().unwrap_or(0);
        diffs.insert(p, SparseIntMatrix::from_triplets(rows, ranks[&p], ring, t)?);
    }
    let c = ChainComplex::new(ring, ranks, diffs)?;
    if !f.is_graded() {
        return Ok(c);
    }
    let mut q = BTreeMap::new();
    for &p in &degrees {
        let mut v = Vec::new();
        for &r in &schemes {
            if let Some(qs) = cubes[r as usize].complex().qdeg(p - offset(r)) {
                v.extend_from_slice(qs);
            }
        }
        q.insert(p, v);
    }
    c.with_qdeg(q)
}

/// One degree of the long exact sequence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeinRow {
    pub i: i64,
    pub sing: usize,
    pub plus: usize,
    pub minus: usize,
    /// Rank of `H^i(Φ̂)`.
    pub rank: usize,
    /// `dim coker H^i(Φ̂) + dim ker H^{i+1}(Φ̂)`.
    pub predicted: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerCheck {
    /// Whether the characteristics are graded by `q`; otherwise they are constants.
    pub graded: bool,
    pub sing: LaurentPoly,
    pub plus: LaurentPoly,
    pub minus: LaurentPoly,
    pub holds: bool,
}

/// Outcome of comparing a singular diagram with its two resolutions at one site.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeinReport {
    /// Field the sequence was checked over.
    pub ring: Ring,
    pub site: usize,
    pub rows: Vec<SkeinRow>,
    pub exact: bool,
    pub euler: EulerCheck,
    pub passed: bool,
}

impl SkeinReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn same_diagram(a: &Diagram, b: &Diagram) -> bool {
    a.pd() == b.pd() && a.kinds() == b.kinds() && a.free_loops() == b.free_loops()
}

/// Finds the double point of `sing` whose resolutions are `minus` and `plus`.
pub fn find_site(minus: &Diagram, plus: &Diagram, sing: &Diagram) -> Result<usize> {
    for b in sing.double_points() {
        let m = sing.resolve_double_point(b, Resolution::Negative)?;
        let p = sing.resolve_double_point(b, Resolution::Positive)?;
        if same_diagram(&m, minus) && same_diagram(&p, plus) {
            return Ok(b);
        }
    }
    Err(Error::SiteMismatch(
        "no double point resolves to the given negative and positive diagrams".into(),
    ))
}

fn euler(h: &HomologySummary) -> Result<LaurentPoly> {
    if h.is_graded() {
        return graded_euler(h);
    }
    let mut p = LaurentPoly::zero();
    for (k, g) in &h.groups {
        let sign = if k.i() % 2 == 0 { 1 } else { -1 };
        p.add_term(0, sign * g.free_rank as i64);
    }
    Ok(p)
}

/// Homology of the three diagrams, the maps induced by `Φ̂`, exactness of the
/// long sequence over a field and `χ(sing) = χ(plus) - χ(minus)`.
pub fn skein_triangle_report(
    d_minus: &Diagram,
    d_plus: &Diagram,
    d_sing: &Diagram,
    f: &FrobeniusAlgebra,
) -> Result<SkeinReport> {
    let site = find_site(d_minus, d_plus, d_sing)?;
    let field = if f.ring() == Ring::Integers {
        Ring::Rationals
    } else {
        f.ring()
    };
    let f = f.over(field);
    let phi = vassiliev_map(d_sing, site, &f)?;
    let h_minus = phi.source.homology();
    let h_plus = phi.target.homology();
    let h_sing = singular_complex(d_sing, &f)?.complex.homology();

    let mut degrees: BTreeSet<i64> = BTreeSet::new();
    for c in [&phi.source, &phi.target] {
        for i in c.degrees() {
            degrees.extend([i - 1, i]);
        }
    }
    let ranks: HashMap<i64, usize> = degrees
        .iter()
        .map(|i| phi.induced_rank(*i).map(|r| (*i, r)))
        .collect::<Result<_>>()?;
    let rows: Vec<SkeinRow> = degrees
        .iter()
        .map(|&i| {
            let rank = ranks[&i];
            let next = ranks.get(&(i + 1)).copied().unwrap_or(0);
            let predicted = (h_plus.rank_at(i) - rank) + (h_minus.rank_at(i + 1) - next);
            SkeinRow {
                i,
                sing: h_sing.rank_at(i),
                plus: h_plus.rank_at(i),
                minus: h_minus.rank_at(i),
                rank,
                predicted,
            }
        })
        .collect();
    let covered = h_sing.support().iter().all(|i| degrees.contains(i));
    let exact = covered && rows.iter().all(|r| r.sing == r.predicted);
    let (es, ep, em) = (euler(&h_sing)?, euler(&h_plus)?, euler(&h_minus)?);
    let holds = es == ep.sub(&em);
    let euler = EulerCheck {
        graded: f.is_graded(),
        sing: es,
        plus: ep,
        minus: em,
        holds,
    };
    Ok(SkeinReport {
        ring: field,
        site,
        rows,
        exact,
        passed: exact && euler.holds,
        euler,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::is_chain_map;
    use crate::diagram::{tests::trefoil, Braid};
    use crate::linalg::DegreeKey;

    fn d1() -> Diagram {
        Diagram::new(vec![[2, 3, 1, 4], [1, 3, 2, 4]], &[1], 0, None).unwrap()
    }

    fn d2() -> Diagram {
        Diagram::new(vec![[3, 1, 4, 2], [1, 3, 2, 4]], &[1], 0, None).unwrap()
    }

    fn d3() -> Diagram {
        Diagram::new(vec![[2, 3, 1, 4], [1, 3, 2, 4]], &[0, 1], 0, None).unwrap()
    }

    fn braid(w: &str) -> Diagram {
        Braid::parse(w).unwrap().closure()
    }

    fn algebras() -> Vec<FrobeniusAlgebra> {
        let mut v = Vec::new();
        for ring in [
            Ring::Integers,
            Ring::Rationals,
            Ring::PrimeField(2),
            Ring::PrimeField(3),
        ] {
            for (h, t) in [(0, 0), (1, 0), (0, 1), (2, 3)] {
                v.push(FrobeniusAlgebra::new(ring, h, t));
            }
        }
        v
    }

    fn hopf_negative() -> Diagram {
        d1().resolve_double_point(1, Resolution::Negative).unwrap()
    }

    #[test]
    fn phi_local_examples() {
        // negative Hopf link, both crossings 1-smoothed: two circles
        let d = hopf_negative();
        let st = State {
            resolution: vec![],
            smoothing: vec![true, true],
        };
        let cfg = d.resolve(&st).unwrap();
        assert_eq!(cfg.len(), 2);
        let (l, r) = cfg.incidence[1];
        assert_ne!(l, r);
        let f = FrobeniusAlgebra::new(Ring::Integers, 5, 7);
        let m = phi_local(&d, &st, 1, &f).unwrap();
        // labelling index: circle 0 is the high bit
        let idx = |circles: [u8; 2]| (circles[0] as usize) << 1 | circles[1] as usize;
        let mut lr = [0u8; 2];
        let put = |lr: &mut [u8; 2], vl: u8, vr: u8| {
            lr[l] = vl;
            lr[r] = vr;
        };
        // 1⊗1 ↦ 1⊗x - x⊗1
        put(&mut lr, 0, 0);
        let src = idx(lr);
        let col: Vec<(usize, i64)> = (0..4)
            .map(|row| (row, m.get(row, src).try_into().unwrap()))
            .filter(|e| e.1 != 0)
            .collect();
        put(&mut lr, 0, 1);
        let one_x = idx(lr);
        put(&mut lr, 1, 0);
        let x_one = idx(lr);
        let mut expect = vec![(one_x, 1), (x_one, -1)];
        expect.sort();
        assert_eq!(col, expect);
        // x⊗x ↦ t(x⊗1 - 1⊗x)
        put(&mut lr, 1, 1);
        let src = idx(lr);
        assert_eq!(m.get(x_one, src), BigInt::from(7));
        assert_eq!(m.get(one_x, src), BigInt::from(-7));
        assert_eq!(m.get(src, src), BigInt::from(0));
        // one circle: zero
        let one = State {
            resolution: vec![],
            smoothing: vec![false, true],
        };
        assert_eq!(d.resolve(&one).unwrap().len(), 1);
        assert!(phi_local(&d, &one, 1, &f).unwrap().is_zero());
        // 0-smoothed crossing is rejected
        assert!(phi_local(&d, &st.clone(), 0, &f).is_ok());
        let zero = State {
            resolution: vec![],
            smoothing: vec![true, false],
        };
        assert!(phi_local(&d, &zero, 1, &f).is_err());
    }

    #[test]
    fn hopf_middle_column() {
        let d = hopf_negative();
        let f = FrobeniusAlgebra::khovanov(Ring::Integers);
        let g = genus_one_map(&d, 1, &f).unwrap();
        let (i_top, top) = g.minus.generator(0b10, 0);
        assert!((0..2).all(|l| g.map.component(i_top).column(top + l).is_empty()));
        // bottom row: the full state maps by -φ
        let full = State {
            resolution: vec![],
            smoothing: vec![true, true],
        };
        let phi = phi_local(&d, &full, 1, &f).unwrap();
        let (i, start) = g.minus.generator(0b11, 0);
        let (_, tstart) = g.plus.generator(0b01, 0);
        let comp = g.map.component(i);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(comp.get(tstart + b, start + a), -phi.get(b, a));
            }
        }
    }

    #[test]
    fn chain_map_bidegree_and_vanishing() {
        let mut diagrams = vec![
            hopf_negative(),
            trefoil(),
            braid("3: S1 s2 S1 s2"),
            braid("3: S1 S1 s2 S2"),
        ];
        diagrams.push(trefoil().mirror().crossing_change(0).unwrap());
        for d in &diagrams {
            for c in (0..d.crossing_count()).filter(|c| d.crossing_sign(*c).unwrap() < 0) {
                for f in algebras() {
                    let g = genus_one_map(d, c, &f).unwrap();
                    assert!(
                        is_chain_map(&g.map).unwrap().holds(),
                        "{:?} at {c}",
                        d.name()
                    );
                    if f.is_graded() {
                        for (i, m) in g.map.components() {
                            let (qs, qt) = (
                                g.minus.complex().qdeg(*i).unwrap(),
                                g.plus.complex().qdeg(*i).unwrap(),
                            );
                            assert!(m.entries().all(|(r, col, _)| qs[col] == qt[r]));
                        }
                    }
                    // no component leaves a state that 0-smooths c
                    for (i, m) in g.map.components() {
                        for col in 0..m.cols() {
                            let (s, _) = g.minus.generator_state(*i, col).unwrap();
                            if s >> c & 1 == 0 {
                                assert!(m.column(col).is_empty());
                            }
                        }
                    }
                    if f.ring() == Ring::PrimeField(2) {
                        assert!(g
                            .map
                            .components()
                            .values()
                            .all(|m| m.entries().all(|(_, _, v)| *v == BigInt::from(1))));
                    }
                }
            }
        }
        assert!(genus_one_map(
            &trefoil().mirror(),
            0,
            &FrobeniusAlgebra::khovanov(Ring::Integers)
        )
        .is_err());
    }

    /// The part of the differential that changes the smoothing at `c` from 0 to 1.
    fn saddle_part(cube: &CubeComplex, c: usize) -> GradedMap {
        let cx = cube.complex();
        let mut comps = BTreeMap::new();
        for i in cx.degrees() {
            let d = cx.differential(i);
            let kept = d
                .entries()
                .filter(|(r, col, _)| {
                    let (s, _) = cube.generator_state(i, *col).unwrap();
                    let (t, _) = cube.generator_state(i + 1, *r).unwrap();
                    s >> c & 1 == 0 && t >> c & 1 == 1
                })
                .map(|(r, col, v)| (r, col, v.clone()));
            comps.insert(
                i,
                SparseIntMatrix::from_triplets(d.rows(), d.cols(), cx.ring(), kept).unwrap(),
            );
        }
        GradedMap::new(cx.clone(), cx.clone(), 1, comps).unwrap()
    }

    #[test]
    fn phi_kills_adjacent_saddles() {
        for d in [hopf_negative(), trefoil()] {
            for f in algebras() {
                let g = genus_one_map(&d, 1, &f).unwrap();
                assert!(g.map.compose(&saddle_part(&g.minus, 1)).unwrap().is_zero());
                assert!(saddle_part(&g.plus, 1).compose(&g.map).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn negation_leaves_homology_unchanged() {
        let f = FrobeniusAlgebra::khovanov(Ring::Integers);
        let g = genus_one_map(&hopf_negative(), 1, &f).unwrap();
        assert_eq!(
            cone(&g.map).unwrap().homology(),
            cone(&g.map.neg()).unwrap().homology()
        );
    }

    fn dims(h: &HomologySummary) -> BTreeMap<i64, usize> {
        h.support().into_iter().map(|i| (i, h.rank_at(i))).collect()
    }

    #[test]
    fn hopf_family_homology() {
        for (h, t) in [(0, 0), (1, 0), (0, 1)] {
            let f = FrobeniusAlgebra::new(Ring::Rationals, h, t);
            let get = |d: &Diagram| dims(&singular_complex(d, &f).unwrap().complex.homology());
            assert_eq!(
                get(&d1()),
                BTreeMap::from([(-3, 2), (0, 2)]),
                "D1 at ({h},{t})"
            );
            assert_eq!(
                get(&d2()),
                BTreeMap::from([(-1, 2), (2, 2)]),
                "D2 at ({h},{t})"
            );
            assert_eq!(
                get(&d3()),
                BTreeMap::from([(-4, 2), (-1, 4), (2, 2)]),
                "D3 at ({h},{t})"
            );
        }
    }

    #[test]
    fn no_double_points_gives_the_cube() {
        let f = FrobeniusAlgebra::khovanov(Ring::Integers);
        let s = singular_complex(&trefoil(), &f).unwrap();
        assert_eq!(*s.complex, **build_cube(&trefoil(), &f).unwrap().complex());
    }

    #[test]
    fn fi_configuration_is_acyclic() {
        let fi = Diagram::new(vec![[1, 2, 2, 1]], &[0], 0, None).unwrap();
        for f in algebras() {
            assert!(singular_complex(&fi, &f)
                .unwrap()
                .complex
                .homology()
                .is_zero());
        }
    }

    #[test]
    fn cone_order_independence() {
        for d in [d3(), braid("3: t1 s2 t1 S2"), braid("3: t1 t2 s1")] {
            for f in [
                FrobeniusAlgebra::khovanov(Ring::Integers),
                FrobeniusAlgebra::new(Ring::PrimeField(3), 1, 2),
            ] {
                let dps = d.double_points();
                let mut rev = dps.clone();
                rev.reverse();
                let a = singular_complex_with_order(&d, &f, &dps)
                    .unwrap()
                    .complex
                    .homology();
                let b = singular_complex_with_order(&d, &f, &rev)
                    .unwrap()
                    .complex
                    .homology();
                assert_eq!(a, b);
            }
        }
        let f = FrobeniusAlgebra::khovanov(Ring::Integers);
        assert!(singular_complex_with_order(&d3(), &f, &[1]).is_err());
    }

    #[test]
    fn flattened_matches_iterated() {
        for d in [d3(), d1(), braid("3: t1 s2 t1 S2")] {
            for f in [
                FrobeniusAlgebra::khovanov(Ring::Integers),
                FrobeniusAlgebra::new(Ring::Integers, 1, 0),
            ] {
                let a = singular_complex(&d, &f).unwrap().complex.homology();
                let b = flattened_singular_complex(&d, &f).unwrap().homology();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn skein_reports() {
        let f = FrobeniusAlgebra::khovanov(Ring::Integers);
        let sing = d1();
        let minus = sing.resolve_double_point(1, Resolution::Negative).unwrap();
        let plus = sing.resolve_double_point(1, Resolution::Positive).unwrap();
        let r = skein_triangle_report(&minus, &plus, &sing, &f).unwrap();
        assert!(r.passed, "{}", r.to_json());
        assert_eq!(SkeinReport::from_json(&r.to_json()).unwrap(), r);
        assert!(matches!(
            skein_triangle_report(&plus, &minus, &sing, &f),
            Err(Error::SiteMismatch(_))
        ));
        // FI: Φ̂ is an isomorphism on homology
        let fi = Diagram::new(vec![[1, 2, 2, 1]], &[0], 0, None).unwrap();
        let (m, p) = (
            fi.resolve_double_point(0, Resolution::Negative).unwrap(),
            fi.resolve_double_point(0, Resolution::Positive).unwrap(),
        );
        let r = skein_triangle_report(&m, &p, &fi, &f).unwrap();
        assert!(r.passed);
        assert!(r
            .rows
            .iter()
            .all(|row| row.sing == 0 && row.rank == row.plus && row.rank == row.minus));
    }

    #[test]
    fn d1_integral_torsion_free() {
        let f = FrobeniusAlgebra::khovanov(Ring::Integers);
        let h = singular_complex(&d1(), &f).unwrap().complex.homology();
        assert!(h.groups.values().all(|g| g.torsion.is_empty()));
        assert_eq!(h.ungraded().get(DegreeKey::Single(-3)).free_rank, 2);
    }
}
