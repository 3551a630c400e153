//! Jones polynomials from homology and from an independent state sum.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, Resolution};
use crate::error::{contract, Result};
use crate::frobenius::FrobeniusAlgebra;
use crate::genusone::singular_complex;
use crate::khcube::build_cube;
use crate::linalg::{DegreeKey, HomologySummary, Ring};

/// Laurent polynomial in `q` with integer coefficients. Serializes as a JSON
/// object from exponent to coefficient, exponents ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `q + q^{-1}`
    pub fn circle() -> Self {
        Self::monomial(1, 1).add(&Self::monomial(1, -1))
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        let e = self.terms.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> &BTreeMap<i64, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(*e, *c);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            p.add_term(*e, c * k);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomials serialize")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            let body = match (*e, mag) {
                (0, m) => m.to_string(),
                (e, 1) => format!("q^{e}"),
                (e, m) => format!("{m}q^{e}"),
            };
            match (k, *c < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            m.serialize_entry(&e.to_string(), c)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(
                    f,
                    "an object from integer exponents to integer coefficients"
                )
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut a: A,
            ) -> std::result::Result<LaurentPoly, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((k, c)) = a.next_entry::<String, i64>()? {
                    let e: i64 = k
                        .parse()
                        .map_err(|_| serde::de::Error::custom(format!("bad exponent '{k}'")))?;
                    if p.terms.contains_key(&e) {
                        return Err(serde::de::Error::custom(format!("repeated exponent {e}")));
                    }
                    if c == 0 {
                        return Err(serde::de::Error::custom(format!(
                            "zero coefficient at exponent {e}"
                        )));
                    }
                    p.terms.insert(e, c);
                }
                Ok(p)
            }
        }
        d.deserialize_map(V)
    }
}

/// Graded Euler characteristic `Σ (-1)^i q^j rank H^{i,j}` of a bigraded summary.
pub fn graded_euler(h: &HomologySummary) -> Result<LaurentPoly> {
    let mut p = LaurentPoly::zero();
    for (k, g) in &h.groups {
        match k {
            DegreeKey::Bigraded(i, j) => {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                p.add_term(*j, sign * g.free_rank as i64)
            }
            DegreeKey::Single(_) => {
                return contract("graded Euler characteristic needs a quantum grading")
            }
        }
    }
    Ok(p)
}

/// Unnormalized Jones polynomial as the graded Euler characteristic of
/// Khovanov homology over Q.
pub fn jones_polynomial(d: &Diagram) -> Result<LaurentPoly> {
    if d.is_singular() {
        return contract("jones_polynomial takes diagrams without double points");
    }
    let cube = build_cube(d, &FrobeniusAlgebra::khovanov(Ring::Rationals))?;
    graded_euler(&cube.homology())
}

/// Counts the circles of a smoothing by walking the PD code directly.
fn state_circles(d: &Diagram, mask: u64) -> usize {
    let mut index: HashMap<u64, usize> = HashMap::new();
    for t in d.pd() {
        for v in t {
            let n = index.len();
            index.entry(*v).or_insert(n);
        }
    }
    let mut parent: Vec<usize> = (0..index.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for (x, t) in d.pd().iter().enumerate() {
        let e: Vec<usize> = t.iter().map(|v| index[v]).collect();
        let pairs = if mask >> x & 1 == 0 {
            [(0, 1), (2, 3)]
        } else {
            [(0, 3), (1, 2)]
        };
        for (a, b) in pairs {
            let (ra, rb) = (root(&mut parent, e[a]), root(&mut parent, e[b]));
            parent[ra] = rb;
        }
    }
    let roots = (0..parent.len()).filter(|x| parent[*x] == *x).count();
    roots + d.free_loops()
}

/// State sum `Σ_s (-1)^{|s| + n₋} q^{|s| + n₊ - 2n₋} (q + q^{-1})^{#circles}`.
pub fn kauffman_bracket_oracle(d: &Diagram) -> Result<LaurentPoly> {
    if d.is_singular() {
        return contract("the state sum takes diagrams without double points");
    }
    let n = d.crossing_count();
    if n > 24 {
        return contract(format!("{n} crossings are too many for the state sum"));
    }
    let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
    let mut total = LaurentPoly::zero();
    let circle = LaurentPoly::circle();
    for mask in 0..1u64 << n {
        let s = mask.count_ones() as i64;
        let sign = if (s + nm) % 2 == 0 { 1 } else { -1 };
        let term = circle
            .pow(state_circles(d, mask))
            .mul(&LaurentPoly::monomial(sign, s + np - 2 * nm));
        total = total.add(&term);
    }
    Ok(total)
}

/// Jones polynomial extended by `v(D) = v(D₊) - v(D₋)`, resolving double
/// points in crossing order.
pub fn singular_jones(d: &Diagram) -> Result<LaurentPoly> {
    singular_jones_with_order(d, &d.double_points())
}

/// As [`singular_jones`] with an explicit resolution order.
pub fn singular_jones_with_order(d: &Diagram, order: &[usize]) -> Result<LaurentPoly> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != d.double_points() {
        return contract("resolution order must list every double point once");
    }
    fn go(d: &Diagram, order: &[usize]) -> Result<LaurentPoly> {
        match order.split_first() {
            None => jones_polynomial(d),
            Some((b, rest)) => {
                let plus = go(&d.resolve_double_point(*b, Resolution::Positive)?, rest)?;
                let minus = go(&d.resolve_double_point(*b, Resolution::Negative)?, rest)?;
                Ok(plus.sub(&minus))
            }
        }
    }
    go(d, order)
}

/// Homology of the (possibly singular) diagram's complex over `ring` with parameters `(h, t)`.
pub fn homology_signature(d: &Diagram, ring: Ring, h: i64, t: i64) -> Result<HomologySummary> {
    let f = FrobeniusAlgebra::new(ring, h, t);
    Ok(singular_complex(d, &f)?.complex.homology())
}
