//! The rank-two Frobenius algebra `C_{h,t} = k[x]/(x^2 - hx - t)` with basis (1, x).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::{Ring, SparseIntMatrix};

/// Basis index of `1`.
pub const ONE: u8 = 0;
/// Basis index of `x`.
pub const X: u8 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    ring: Ring,
    h: BigInt,
    t: BigInt,
}

/// `one * 1 + x * x`
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    pub one: BigInt,
    pub x: BigInt,
}

impl AlgebraElement {
    pub fn new(one: impl Into<BigInt>, x: impl Into<BigInt>) -> Self {
        AlgebraElement {
            one: one.into(),
            x: x.into(),
        }
    }

    pub fn unit() -> Self {
        Self::new(1, 0)
    }

    pub fn x() -> Self {
        Self::new(0, 1)
    }

    pub fn coeff(&self, basis: u8) -> &BigInt {
        if basis == ONE {
            &self.one
        } else {
            &self.x
        }
    }
}

/// An element of a tensor power of the algebra. Bit `k` of a key is set when
/// the `k`-th listed circle carries `x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorElement {
    pub circles: Vec<usize>,
    pub coeffs: BTreeMap<u64, BigInt>,
}

impl TensorElement {
    pub fn new(circles: Vec<usize>) -> Self {
        TensorElement {
            circles,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, ring: Ring, bits: u64, c: BigInt) {
        let e = self.coeffs.entry(bits).or_default();
        *e = ring.reduce(&*e + c);
        if e.is_zero() {
            self.coeffs.remove(&bits);
        }
    }

    pub fn get(&self, bits: u64) -> BigInt {
        self.coeffs.get(&bits).cloned().unwrap_or_default()
    }
}

impl FrobeniusAlgebra {
    pub fn new(ring: Ring, h: i64, t: i64) -> Self {
        Self::with_params(ring, BigInt::from(h), BigInt::from(t))
    }

    pub fn with_params(ring: Ring, h: BigInt, t: BigInt) -> Self {
        FrobeniusAlgebra {
            ring,
            h: ring.reduce(h),
            t: ring.reduce(t),
        }
    }

    pub fn khovanov(ring: Ring) -> Self {
        Self::new(ring, 0, 0)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn h(&self) -> &BigInt {
        &self.h
    }

    pub fn t(&self) -> &BigInt {
        &self.t
    }

    /// The quantum grading exists only when h and t vanish.
    pub fn is_graded(&self) -> bool {
        self.h.is_zero() && self.t.is_zero()
    }

    /// Same algebra over another ring.
    pub fn over(&self, ring: Ring) -> Self {
        Self::with_params(ring, self.h.clone(), self.t.clone())
    }

    fn el(&self, one: BigInt, x: BigInt) -> AlgebraElement {
        AlgebraElement {
            one: self.ring.reduce(one),
            x: self.ring.reduce(x),
        }
    }

    /// Product of basis elements as (coefficient of 1, coefficient of x).
    pub fn mul_basis(&self, a: u8, b: u8) -> (BigInt, BigInt) {
        match (a, b) {
            (ONE, ONE) => (BigInt::one(), BigInt::zero()),
            (ONE, _) | (_, ONE) => (BigInt::zero(), BigInt::one()),
            _ => (self.t.clone(), self.h.clone()),
        }
    }

    /// Coproduct of a basis element as coefficients of 1⊗1, 1⊗x, x⊗1, x⊗x.
    pub fn comul_basis(&self, a: u8) -> [BigInt; 4] {
        let z = BigInt::zero;
        if a == ONE {
            [self.ring.neg(&self.h), BigInt::one(), BigInt::one(), z()]
        } else {
            [self.t.clone(), z(), z(), BigInt::one()]
        }
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut one = BigInt::zero();
        let mut x = BigInt::zero();
        for i in [ONE, X] {
            for j in [ONE, X] {
                let c = a.coeff(i) * b.coeff(j);
                if c.is_zero() {
                    continue;
                }
                let (p1, px) = self.mul_basis(i, j);
                one += &c * p1;
                x += &c * px;
            }
        }
        self.el(one, x)
    }

    /// `Δ(1) = 1⊗x + x⊗1 - h 1⊗1`, `Δ(x) = x⊗x + t 1⊗1`. The first tensor
    /// factor is circle 0 of the result.
    pub fn comultiply(&self, a: &AlgebraElement) -> TensorElement {
        let mut out = TensorElement::new(vec![0, 1]);
        for i in [ONE, X] {
            let c = a.coeff(i);
            if c.is_zero() {
                continue;
            }
            for (k, v) in self.comul_basis(i).into_iter().enumerate() {
                // k = 2*first + second; key bit 0 is the first factor
                let bits = ((k as u64) >> 1) | (((k as u64) & 1) << 1);
                self.ring_add(&mut out, bits, c * v);
            }
        }
        out
    }

    fn ring_add(&self, t: &mut TensorElement, bits: u64, c: BigInt) {
        if !c.is_zero() {
            t.add_term(self.ring, bits, c);
        }
    }

    /// `ε(1) = 0`, `ε(x) = 1`.
    pub fn counit(&self, a: &AlgebraElement) -> BigInt {
        self.ring.reduce(a.x.clone())
    }

    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement::unit()
    }

    /// `μ(Δ(a))`: gluing a handle onto a sheet.
    pub fn handle(&self, a: &AlgebraElement) -> AlgebraElement {
        let d = self.comultiply(a);
        let mut acc = AlgebraElement::default();
        for (bits, c) in &d.coeffs {
            let first = AlgebraElement::new(u8::from(bits & 1 == 0) as i64, (bits & 1) as i64);
            let second =
                AlgebraElement::new(u8::from(bits & 2 == 0) as i64, ((bits >> 1) & 1) as i64);
            let p = self.multiply(&first, &second);
            acc.one += c * p.one;
            acc.x += c * p.x;
        }
        self.el(acc.one, acc.x)
    }

    /// Multiplication by x.
    pub fn x_action(&self, a: &AlgebraElement) -> AlgebraElement {
        self.multiply(&AlgebraElement::x(), a)
    }

    /// μ as a 2x4 matrix on the basis 1⊗1, 1⊗x, x⊗1, x⊗x.
    pub fn mu_matrix(&self) -> SparseIntMatrix {
        let mut trip = Vec::new();
        for a in [ONE, X] {
            for b in [ONE, X] {
                let (p1, px) = self.mul_basis(a, b);
                let col = 2 * a as usize + b as usize;
                trip.push((0, col, p1));
                trip.push((1, col, px));
            }
        }
        SparseIntMatrix::from_triplets(2, 4, self.ring, trip).expect("in range")
    }

    pub fn delta_matrix(&self) -> SparseIntMatrix {
        let mut trip = Vec::new();
        for a in [ONE, X] {
            for (k, v) in self.comul_basis(a).into_iter().enumerate() {
                trip.push((k, a as usize, v));
            }
        }
        SparseIntMatrix::from_triplets(4, 2, self.ring, trip).expect("in range")
    }

    pub fn counit_matrix(&self) -> SparseIntMatrix {
        SparseIntMatrix::from_triplets(1, 2, self.ring, vec![(0, 1, BigInt::one())])
            .expect("in range")
    }

    pub fn unit_matrix(&self) -> SparseIntMatrix {
        SparseIntMatrix::from_triplets(2, 1, self.ring, vec![(0, 0, BigInt::one())])
            .expect("in range")
    }

    /// Quantum degree of a basis element: `deg 1 = +1`, `deg x = -1`.
    pub fn degree(basis: u8) -> i64 {
        if basis == ONE {
            1
        } else {
            -1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn alg(h: i64, t: i64) -> FrobeniusAlgebra {
        FrobeniusAlgebra::new(Ring::Integers, h, t)
    }

    #[test]
    fn multiplication_examples() {
        let a = alg(3, 5);
        assert_eq!(
            a.multiply(&AlgebraElement::unit(), &AlgebraElement::x()),
            AlgebraElement::x()
        );
        assert_eq!(
            a.multiply(&AlgebraElement::x(), &AlgebraElement::x()),
            AlgebraElement::new(5, 3)
        );
        let lee = alg(0, 1);
        let one_plus_x = AlgebraElement::new(1, 1);
        assert_eq!(
            lee.multiply(&one_plus_x, &AlgebraElement::x()),
            AlgebraElement::new(1, 1)
        );
    }

    #[test]
    fn comultiplication_examples() {
        let a = alg(2, 7);
        let d1 = a.comultiply(&AlgebraElement::unit());
        // keys: bit 0 = first factor
        assert_eq!(d1.get(0b10), BigInt::one()); // 1⊗x
        assert_eq!(d1.get(0b01), BigInt::one()); // x⊗1
        assert_eq!(d1.get(0b00), BigInt::from(-2)); // -h 1⊗1
        assert_eq!(d1.get(0b11), BigInt::zero());
        let dx = a.comultiply(&AlgebraElement::x());
        assert_eq!(dx.get(0b11), BigInt::one());
        assert_eq!(dx.get(0b00), BigInt::from(7));
        assert_eq!(dx.coeffs.len(), 2);
        let k = alg(0, 0).comultiply(&AlgebraElement::unit());
        assert_eq!(k.coeffs.len(), 2);
    }

    #[test]
    fn counit_and_handle() {
        let a = alg(0, 0);
        assert_eq!(a.counit(&AlgebraElement::unit()), BigInt::zero());
        assert_eq!(a.counit(&AlgebraElement::x()), BigInt::one());
        assert_eq!(a.counit(&AlgebraElement::new(3, 2)), BigInt::from(2));
        assert_eq!(a.handle(&AlgebraElement::unit()), AlgebraElement::new(0, 2));
        assert_eq!(
            a.counit(&a.handle(&AlgebraElement::unit())),
            BigInt::from(2)
        );
        // sphere: ε(η(1)) = 0
        assert_eq!(a.counit(&a.unit()), BigInt::zero());
        let b = alg(3, 4);
        assert_eq!(
            b.handle(&AlgebraElement::unit()),
            AlgebraElement::new(-3, 2)
        );
        assert_eq!(
            b.counit(&b.handle(&AlgebraElement::unit())),
            BigInt::from(2)
        );
    }

    #[test]
    fn prime_field_reduction() {
        let a = FrobeniusAlgebra::new(Ring::PrimeField(2), 3, -1);
        assert_eq!(a.h(), &BigInt::one());
        assert_eq!(a.t(), &BigInt::one());
        assert!(!a.is_graded());
        assert!(FrobeniusAlgebra::new(Ring::PrimeField(3), 3, 6).is_graded());
    }

    #[test]
    fn grading_of_structure_maps() {
        let a = alg(0, 0);
        let deg2 = |k: usize| {
            FrobeniusAlgebra::degree((k >> 1) as u8) + FrobeniusAlgebra::degree((k & 1) as u8)
        };
        for (r, c, _) in a.mu_matrix().entries() {
            assert_eq!(FrobeniusAlgebra::degree(r as u8), deg2(c) - 1);
        }
        for (r, c, _) in a.delta_matrix().entries() {
            assert_eq!(deg2(r), FrobeniusAlgebra::degree(c as u8) - 1);
        }
        // unit and counit are the disc cobordisms and raise degree by one
        for (_, c, _) in a.counit_matrix().entries() {
            assert_eq!(0, FrobeniusAlgebra::degree(c as u8) + 1);
        }
        for (r, _, _) in a.unit_matrix().entries() {
            assert_eq!(FrobeniusAlgebra::degree(r as u8), 1);
        }
    }

    fn axioms_hold(a: &FrobeniusAlgebra) -> Result<(), TestCaseError> {
        let ring = a.ring();
        let id = SparseIntMatrix::identity(2, ring);
        let mu = a.mu_matrix();
        let de = a.delta_matrix();
        let ep = a.counit_matrix();
        let eta = a.unit_matrix();
        let mul = |x: &SparseIntMatrix, y: &SparseIntMatrix| x.mul(y).unwrap();
        let kron = |x: &SparseIntMatrix, y: &SparseIntMatrix| x.kron(y).unwrap();
        // associativity and unit
        prop_assert_eq!(mul(&mu, &kron(&mu, &id)), mul(&mu, &kron(&id, &mu)));
        prop_assert_eq!(mul(&mu, &kron(&eta, &id)), id.clone());
        prop_assert_eq!(mul(&mu, &kron(&id, &eta)), id.clone());
        // coassociativity and counit
        prop_assert_eq!(mul(&kron(&de, &id), &de), mul(&kron(&id, &de), &de));
        prop_assert_eq!(mul(&kron(&ep, &id), &de), id.clone());
        prop_assert_eq!(mul(&kron(&id, &ep), &de), id.clone());
        // Frobenius condition
        let dm = mul(&de, &mu);
        prop_assert_eq!(mul(&kron(&mu, &id), &kron(&id, &de)), dm.clone());
        prop_assert_eq!(mul(&kron(&id, &mu), &kron(&de, &id)), dm);
        // commutativity and cocommutativity
        let swap = SparseIntMatrix::from_dense(
            ring,
            4,
            4,
            &[1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1],
        )
        .unwrap();
        prop_assert_eq!(mul(&mu, &swap), mu.clone());
        prop_assert_eq!(mul(&swap, &de), de.clone());
        Ok(())
    }

    proptest! {
        #[test]
        fn frobenius_axioms(h in -9i64..10, t in -9i64..10, ring in prop::sample::select(vec![
            Ring::Integers, Ring::PrimeField(2), Ring::PrimeField(3), Ring::PrimeField(5)])) {
            axioms_hold(&FrobeniusAlgebra::new(ring, h, t))?;
        }

        #[test]
        fn element_ops_match_matrices(h in -5i64..6, t in -5i64..6, a1 in -4i64..5, ax in -4i64..5,
                                      b1 in -4i64..5, bx in -4i64..5) {
            let alg = FrobeniusAlgebra::new(Ring::Integers, h, t);
            let a = AlgebraElement::new(a1, ax);
            let b = AlgebraElement::new(b1, bx);
            let p = alg.multiply(&a, &b);
            prop_assert_eq!(p.clone(), alg.multiply(&b, &a));
            // (ab) x = a (bx)
            prop_assert_eq!(alg.x_action(&p), alg.multiply(&a, &alg.x_action(&b)));
            // ε(Δ(a) first factor) reproduces a
            let d = alg.comultiply(&a);
            let back_x: BigInt = d.coeffs.iter().filter(|(k, _)| *k & 1 == 1).map(|(k, c)| {
                if *k & 2 == 2 { c.clone() } else { BigInt::zero() }
            }).sum();
            prop_assert_eq!(back_x, a.x.clone());
        }
    }
}
