use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::SparseIntMatrix;
use super::ring::Ring;
use super::snf::{integer_divisors, rank};
use crate::error::{contract, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DegreeKey {
    Single(i64),
    Bigraded(i64, i64),
}

impl DegreeKey {
    /// Homological degree.
    pub fn i(&self) -> i64 {
        match self {
            DegreeKey::Single(i) | DegreeKey::Bigraded(i, _) => *i,
        }
    }

    pub fn j(&self) -> Option<i64> {
        match self {
            DegreeKey::Single(_) => None,
            DegreeKey::Bigraded(_, j) => Some(*j),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Homology of a complex, one entry per nonzero group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Wire", try_from = "Wire")]
pub struct HomologySummary {
    pub ring: Ring,
    pub groups: BTreeMap<DegreeKey, HomologyGroup>,
}

impl HomologySummary {
    pub fn new(ring: Ring) -> Self {
        HomologySummary {
            ring,
            groups: BTreeMap::new(),
        }
    }

    /// Adds a group, ignoring it when zero.
    pub fn insert(&mut self, key: DegreeKey, group: HomologyGroup) {
        if !group.is_zero() {
            self.groups.insert(key, group);
        }
    }

    pub fn get(&self, key: DegreeKey) -> HomologyGroup {
        self.groups.get(&key).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn is_graded(&self) -> bool {
        self.groups
            .keys()
            .any(|k| matches!(k, DegreeKey::Bigraded(..)))
    }

    /// Free rank in homological degree `i`, summed over quantum degrees.
    pub fn rank_at(&self, i: i64) -> usize {
        self.groups
            .iter()
            .filter(|(k, _)| k.i() == i)
            .map(|(_, g)| g.free_rank)
            .sum()
    }

    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.free_rank).sum()
    }

    /// Homological degrees with a nonzero group.
    pub fn support(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self.groups.keys().map(|k| k.i()).collect();
        out.dedup();
        out
    }

    /// Forgets the quantum grading, merging groups of equal homological degree.
    pub fn ungraded(&self) -> HomologySummary {
        let mut out = HomologySummary::new(self.ring);
        for (k, g) in &self.groups {
            let e = out.groups.entry(DegreeKey::Single(k.i())).or_default();
            e.free_rank += g.free_rank;
            e.torsion.extend(g.torsion.iter().cloned());
        }
        for g in out.groups.values_mut() {
            g.torsion = super::snf::divisor_chain(std::mem::take(&mut g.torsion));
            g.torsion.retain(|d| !d.is_one());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Plain-text table, one row per group.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let graded = self.is_graded();
        let _ = writeln!(s, "ring: {}", self.ring);
        if graded {
            let _ = writeln!(s, "{:>5} {:>5} {:>6}  torsion", "i", "j", "rank");
        } else {
            let _ = writeln!(s, "{:>5} {:>6}  torsion", "i", "rank");
        }
        for (k, g) in &self.groups {
            let tor: Vec<String> = g.torsion.iter().map(|d| d.to_string()).collect();
            let tor = if tor.is_empty() {
                "-".to_string()
            } else {
                tor.join(",")
            };
            match k {
                DegreeKey::Bigraded(i, j) => {
                    let _ = writeln!(s, "{:>5} {:>5} {:>6}  {}", i, j, g.free_rank, tor);
                }
                DegreeKey::Single(i) => {
                    let _ = writeln!(s, "{:>5} {:>6}  {}", i, g.free_rank, tor);
                }
            }
        }
        if self.groups.is_empty() {
            let _ = writeln!(s, "(zero)");
        }
        s
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    ring: Ring,
    groups: Vec<WireGroup>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireGroup {
    i: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j: Option<i64>,
    rank: usize,
    #[serde(default)]
    torsion: Vec<WireInt>,
}

/// Torsion coefficients are JSON numbers when they fit in u64, strings otherwise.
#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Num(u64),
    Str(String),
}

impl From<HomologySummary> for Wire {
    fn from(h: HomologySummary) -> Wire {
        let groups = h
            .groups
            .into_iter()
            .map(|(k, g)| WireGroup {
                i: k.i(),
                j: k.j(),
                rank: g.free_rank,
                torsion: g
                    .torsion
                    .into_iter()
                    .map(|d| match d.to_u64() {
                        Some(v) => WireInt::Num(v),
                        None => WireInt::Str(d.to_string()),
                    })
                    .collect(),
            })
            .collect();
        Wire {
            ring: h.ring,
            groups,
        }
    }
}

impl TryFrom<Wire> for HomologySummary {
    type Error = String;

    fn try_from(w: Wire) -> std::result::Result<Self, String> {
        let mut out = HomologySummary::new(w.ring);
        let graded = w.groups.first().map(|g| g.j.is_some());
        for g in w.groups {
            if Some(g.j.is_some()) != graded {
                return Err("mixed graded and ungraded groups".into());
            }
            let key = match g.j {
                Some(j) => DegreeKey::Bigraded(g.i, j),
                None => DegreeKey::Single(g.i),
            };
            let mut torsion = Vec::with_capacity(g.torsion.len());
            for t in g.torsion {
                let v = match t {
                    WireInt::Num(v) => BigInt::from(v),
                    WireInt::Str(s) => s
                        .parse::<BigInt>()
                        .map_err(|e| format!("bad torsion '{s}': {e}"))?,
                };
                if v <= BigInt::one() {
                    return Err(format!("torsion coefficient {v} must exceed 1"));
                }
                torsion.push(v);
            }
            if w.ring.is_field() && !torsion.is_empty() {
                return Err("torsion reported over a field".into());
            }
            if torsion.windows(2).any(|p| !(&p[1] % &p[0]).is_zero()) {
                return Err("torsion coefficients must form a divisibility chain".into());
            }
            if out.groups.contains_key(&key) {
                return Err(format!("duplicate degree {key:?}"));
            }
            out.insert(
                key,
                HomologyGroup {
                    free_rank: g.rank,
                    torsion,
                },
            );
        }
        Ok(out)
    }
}

/// Rank of a map and, over the integers, its invariant factors greater than one.
pub(crate) fn map_invariants(m: &SparseIntMatrix) -> (usize, Vec<BigInt>) {
    match m.ring() {
        Ring::Integers => {
            let d = integer_divisors(m);
            let r = d.len();
            (r, d.into_iter().filter(|x| !x.is_one()).collect())
        }
        _ => (rank(m), Vec::new()),
    }
}

/// Homology at the middle of `C^{i-1} --d_in--> C^i --d_out--> C^{i+1}`.
pub fn homology_at(
    d_in: &SparseIntMatrix,
    d_out: &SparseIntMatrix,
    ring: Ring,
) -> Result<HomologyGroup> {
    if d_out.cols() != d_in.rows() {
        return contract(format!(
            "d_out has {} columns but d_in has {} rows",
            d_out.cols(),
            d_in.rows()
        ));
    }
    let d_in = d_in.with_ring(ring);
    let d_out = d_out.with_ring(ring);
    if !d_out.mul(&d_in)?.is_zero() {
        return contract("d_out * d_in is not zero");
    }
    let (r_in, torsion) = map_invariants(&d_in);
    let r_out = rank(&if ring == Ring::Integers {
        d_out.with_ring(Ring::Rationals)
    } else {
        d_out
    });
    Ok(HomologyGroup {
        free_rank: d_in.rows() - r_in - r_out,
        torsion,
    })
}
