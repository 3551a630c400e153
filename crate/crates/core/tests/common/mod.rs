//! Random chain complexes, chain maps and homotopy data whose hypotheses hold
//! by construction.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use khsing::chain::{ChainComplex, GradedMap, HomotopySquare};
use khsing::{Ring, SparseIntMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `U` and `U^{-1}` for a random product of elementary matrices.
pub fn unimodular(
    rng: &mut ChaCha8Rng,
    n: usize,
    ring: Ring,
) -> (SparseIntMatrix, SparseIntMatrix) {
    let mut u = SparseIntMatrix::identity(n, ring);
    let mut inv = SparseIntMatrix::identity(n, ring);
    if n < 2 {
        return (u, inv);
    }
    for _ in 0..2 * n {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let e = |c: i64| {
            let trip = (0..n)
                .map(|k| (k, k, BigInt::from(1)))
                .chain([(a, b, BigInt::from(c))]);
            SparseIntMatrix::from_triplets(n, n, ring, trip).unwrap()
        };
        u = e(c).mul(&u).unwrap();
        inv = inv.mul(&e(-c)).unwrap();
    }
    (u, inv)
}

/// A sum of pieces `Z` and `Z --k--> Z` over degrees `lo..=hi`, in a scrambled basis.
pub fn random_complex(
    rng: &mut ChaCha8Rng,
    ring: Ring,
    lo: i64,
    hi: i64,
    max_total: usize,
) -> ChainComplex {
    let mut ranks: BTreeMap<i64, usize> = (lo..=hi + 1).map(|i| (i, 0)).collect();
    let mut pairs: Vec<(i64, usize, usize, i64)> = Vec::new();
    let mut total = 0;
    let pieces = rng.gen_range(1..=max_total.max(1));
    for _ in 0..pieces {
        let i = rng.gen_range(lo..=hi);
        if rng.gen_bool(0.6) && total + 2 <= max_total && i < hi {
            let k = [1, 2, 3, -1, -2][rng.gen_range(0..5)];
            let (a, b) = (ranks[&i], ranks[&(i + 1)]);
            pairs.push((i, a, b, k));
            *ranks.get_mut(&i).unwrap() += 1;
            *ranks.get_mut(&(i + 1)).unwrap() += 1;
            total += 2;
        } else if total < max_total {
            *ranks.get_mut(&i).unwrap() += 1;
            total += 1;
        }
    }
    let mut trips: BTreeMap<i64, Vec<(usize, usize, BigInt)>> = BTreeMap::new();
    for (i, col, row, k) in pairs {
        trips
            .entry(i)
            .or_default()
            .push((row, col, BigInt::from(k)));
    }
    let basis: BTreeMap<i64, (SparseIntMatrix, SparseIntMatrix)> = ranks
        .iter()
        .map(|(i, r)| (*i, unimodular(rng, *r, ring)))
        .collect();
    let mut diffs = BTreeMap::new();
    for (i, t) in trips {
        let d = SparseIntMatrix::from_triplets(ranks[&(i + 1)], ranks[&i], ring, t).unwrap();
        let conj = basis[&(i + 1)]
            .0
            .mul(&d)
            .unwrap()
            .mul(&basis[&i].1)
            .unwrap();
        diffs.insert(i, conj);
    }
    ChainComplex::new(ring, ranks, diffs).unwrap()
}

/// Sparse random family of degree `degree` with entries in {-1, 1}.
pub fn random_map(
    rng: &mut ChaCha8Rng,
    x: &Arc<ChainComplex>,
    y: &Arc<ChainComplex>,
    degree: i64,
) -> GradedMap {
    let ring = x.ring();
    let mut comps = BTreeMap::new();
    for i in x.degrees() {
        let (rows, cols) = (y.rank(i + degree), x.rank(i));
        if rows == 0 {
            continue;
        }
        let mut t = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(0.35) {
                    t.push((r, c, BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 })));
                }
            }
        }
        comps.insert(
            i,
            SparseIntMatrix::from_triplets(rows, cols, ring, t).unwrap(),
        );
    }
    GradedMap::new(x.clone(), y.clone(), degree, comps).unwrap()
}

/// `c·id + dP + Pd`, a chain map homotopic to `c·id`.
pub fn perturbed_identity(
    rng: &mut ChaCha8Rng,
    x: &Arc<ChainComplex>,
    c: i64,
) -> (GradedMap, GradedMap) {
    let p = random_map(rng, x, x, -1);
    let m = GradedMap::identity(x.clone())
        .scale(&BigInt::from(c))
        .add(&p.d_bracket(1).unwrap())
        .unwrap();
    (m, p)
}

fn block_map(
    x: &Arc<ChainComplex>,
    y: &Arc<ChainComplex>,
    f: impl Fn(i64) -> SparseIntMatrix,
) -> GradedMap {
    let comps = x
        .degrees()
        .filter(|i| y.rank(*i) > 0)
        .map(|i| (i, f(i)))
        .collect();
    GradedMap::new(x.clone(), y.clone(), 0, comps).unwrap()
}

/// Inclusion of the first (`first = true`) or second summand of `a ⊕ b`.
pub fn inclusion(
    a: &Arc<ChainComplex>,
    b: &Arc<ChainComplex>,
    sum: &Arc<ChainComplex>,
    first: bool,
) -> GradedMap {
    let src = if first { a } else { b };
    let ring = sum.ring();
    block_map(src, sum, |i| {
        let id = SparseIntMatrix::identity(src.rank(i), ring);
        let slot = if first { 0 } else { 1 };
        SparseIntMatrix::block(
            ring,
            &[a.rank(i), b.rank(i)],
            &[src.rank(i)],
            &[(slot, 0, &id)],
        )
        .unwrap()
    })
}

/// Projection of `a ⊕ b` onto a summand.
pub fn projection(
    a: &Arc<ChainComplex>,
    b: &Arc<ChainComplex>,
    sum: &Arc<ChainComplex>,
    first: bool,
) -> GradedMap {
    let tgt = if first { a } else { b };
    let ring = sum.ring();
    block_map(sum, tgt, |i| {
        let id = SparseIntMatrix::identity(tgt.rank(i), ring);
        let slot = if first { 0 } else { 1 };
        SparseIntMatrix::block(
            ring,
            &[tgt.rank(i)],
            &[a.rank(i), b.rank(i)],
            &[(0, slot, &id)],
        )
        .unwrap()
    })
}

/// A random change of basis `T : y -> y'` with its inverse.
pub fn scramble(
    rng: &mut ChaCha8Rng,
    y: &Arc<ChainComplex>,
) -> (Arc<ChainComplex>, GradedMap, GradedMap) {
    let ring = y.ring();
    let basis: BTreeMap<i64, (SparseIntMatrix, SparseIntMatrix)> = y
        .degrees()
        .map(|i| (i, unimodular(rng, y.rank(i), ring)))
        .collect();
    let mut diffs = BTreeMap::new();
    for i in y.degrees() {
        if let Some((u, _)) = basis.get(&(i + 1)) {
            diffs.insert(
                i,
                u.mul(&y.differential(i))
                    .unwrap()
                    .mul(&basis[&i].1)
                    .unwrap(),
            );
        }
    }
    let y2 = Arc::new(ChainComplex::new(ring, y.ranks().clone(), diffs).unwrap());
    let t = block_map(y, &y2, |i| basis[&i].0.clone());
    let tinv = block_map(&y2, y, |i| basis[&i].1.clone());
    (y2, t, tinv)
}

/// A row `X -f-> Y -g-> Z -h-> W` of chain maps with `g f = 0` and `h g = 0`.
pub struct Row {
    pub x: Arc<ChainComplex>,
    pub y: Arc<ChainComplex>,
    pub z: Arc<ChainComplex>,
    pub w: Arc<ChainComplex>,
    pub f: GradedMap,
    pub g: GradedMap,
    pub h: GradedMap,
    /// The middle summand `B` of `Y = A ⊕ B` and `Z = B ⊕ C`, with `h ∘ z_from_b = 0`
    /// and `y_to_b ∘ f = 0`.
    pub b: Arc<ChainComplex>,
    pub z_from_b: GradedMap,
    pub y_to_b: GradedMap,
}

pub fn random_row(rng: &mut ChaCha8Rng, ring: Ring, max_piece: usize) -> Row {
    let mut cx = || Arc::new(random_complex(rng, ring, -1, 2, max_piece));
    let (a, b, c) = (cx(), cx(), cx());
    let y0 = Arc::new(a.direct_sum(&b).unwrap());
    let z0 = Arc::new(b.direct_sum(&c).unwrap());
    let k = |rng: &mut ChaCha8Rng| [1, -1, 2, 3][rng.gen_range(0..4)];
    let ka = k(rng);
    let (phi, _) = perturbed_identity(rng, &a, ka);
    let kb = k(rng);
    let (psi, _) = perturbed_identity(rng, &b, kb);
    let kc = k(rng);
    let (chi, _) = perturbed_identity(rng, &c, kc);
    // f: a -> a ⊕ b, g: a ⊕ b -> b ⊕ c through b, h: b ⊕ c -> c
    let f0 = inclusion(&a, &b, &y0, true).compose(&phi).unwrap();
    let g0 = inclusion(&b, &c, &z0, true)
        .compose(&psi)
        .unwrap()
        .compose(&projection(&a, &b, &y0, false))
        .unwrap();
    let h0 = chi.compose(&projection(&b, &c, &z0, false)).unwrap();
    let (y, ty, ty_inv) = scramble(rng, &y0);
    let (z, tz, tz_inv) = scramble(rng, &z0);
    let f = ty.compose(&f0).unwrap();
    let g = tz.compose(&g0).unwrap().compose(&ty_inv).unwrap();
    let h = h0.compose(&tz_inv).unwrap();
    let z_from_b = tz.compose(&inclusion(&b, &c, &z0, true)).unwrap();
    let y_to_b = projection(&a, &b, &y0, false).compose(&ty_inv).unwrap();
    Row {
        x: a,
        y,
        z,
        w: c,
        f,
        g,
        h,
        b,
        z_from_b,
        y_to_b,
    }
}

/// Squares over the row with identical top and bottom rows and verticals
/// `c·id + [d, P]`, plus the higher homotopies `Ψ`, `Ξ`, `Γ`.
pub struct Ladder {
    pub row: Row,
    pub left: HomotopySquare,
    pub mid: HomotopySquare,
    pub right: HomotopySquare,
    pub psi: GradedMap,
    pub xi: GradedMap,
    pub gamma: GradedMap,
}

pub fn random_ladder(rng: &mut ChaCha8Rng, ring: Ring, max_piece: usize) -> Ladder {
    random_ladder_with(rng, ring, max_piece, false)
}

/// With `gamma_zero`, `M` factors through `B ⊂ Z` and `M'` through `Y -> B`, so
/// `Γ = hM - M'f = 0` while `Ψ` and `Ξ` need not vanish.
pub fn random_ladder_with(
    rng: &mut ChaCha8Rng,
    ring: Ring,
    max_piece: usize,
    gamma_zero: bool,
) -> Ladder {
    let row = random_row(rng, ring, max_piece);
    let c = [1, -1, 2][rng.gen_range(0..3)];
    let (u, px) = perturbed_identity(rng, &row.x, c);
    let (v, py) = perturbed_identity(rng, &row.y, c);
    let (w, pz) = perturbed_identity(rng, &row.z, c);
    let (om, pw) = perturbed_identity(rng, &row.w, c);
    // F = f P_X - P_Y f and likewise for G, H
    let htp = |f: &GradedMap, p_src: &GradedMap, p_tgt: &GradedMap| {
        f.compose(p_src)
            .unwrap()
            .sub(&p_tgt.compose(f).unwrap())
            .unwrap()
    };
    let big_f = htp(&row.f, &px, &py);
    let big_g = htp(&row.g, &py, &pz);
    let big_h = htp(&row.h, &pz, &pw);
    let (m, m2) = if gamma_zero {
        let m = row
            .z_from_b
            .compose(&random_map(rng, &row.x, &row.b, -3))
            .unwrap();
        let m2 = random_map(rng, &row.b, &row.w, -3)
            .compose(&row.y_to_b)
            .unwrap();
        (m, m2)
    } else {
        (
            random_map(rng, &row.x, &row.z, -3),
            random_map(rng, &row.y, &row.w, -3),
        )
    };
    let psi = m.d_bracket(1).unwrap();
    let xi = m2.d_bracket(1).unwrap();
    let gamma = row
        .h
        .compose(&m)
        .unwrap()
        .sub(&m2.compose(&row.f).unwrap())
        .unwrap();
    let sq = |f: &GradedMap, l: &GradedMap, r: &GradedMap, hm: GradedMap| HomotopySquare {
        top: f.clone(),
        bottom: f.clone(),
        left: l.clone(),
        right: r.clone(),
        homotopy: hm,
    };
    let left = sq(&row.f, &u, &v, big_f);
    let mid = sq(&row.g, &v, &w, big_g);
    let right = sq(&row.h, &w, &om, big_h);
    Ladder {
        row,
        left,
        mid,
        right,
        psi,
        xi,
        gamma,
    }
}
