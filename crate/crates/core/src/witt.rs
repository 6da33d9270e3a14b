//! Big Witt vectors `W_S(R)` for `R = Z` or `Z/m` over a truncation set `S`.
//!
//! Every ring operation is computed through ghost coordinates of canonical
//! integral lifts: lift the coefficients to `Z`, work with the triangular
//! ghost system exactly, and reduce back. Functoriality of the Witt ring
//! along `Z -> Z/m` makes this correct for every modulus at once, with no
//! per-modulus structure constants.
//!
//! Frobenius is the ghost-reindexing `w_s ∘ F_n = w_{ns}`; Verschiebung is a
//! coefficientwise shift and needs no ghost computation at all.

use crate::truncation::TruncationSet;
use crate::{is_prime, Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct WittVector {
    set: TruncationSet,
    /// 0 means integral coefficients; m > 0 means coefficients in `Z/m`,
    /// stored canonically in `[0, m)`.
    modulus: u64,
    coeffs: Vec<BigInt>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GhostVector {
    set: TruncationSet,
    values: Vec<BigInt>,
}

impl GhostVector {
    pub fn new(set: TruncationSet, values: Vec<BigInt>) -> Result<Self> {
        if values.len() != set.len() {
            return Err(Error::Usage(format!(
                "ghost vector needs {} values for set {set}, got {}",
                set.len(),
                values.len()
            )));
        }
        Ok(GhostVector { set, values })
    }

    pub fn set(&self) -> &TruncationSet {
        &self.set
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn value_at(&self, s: u64) -> &BigInt {
        let idx = self.set.index_of(s).expect("ghost component outside the set");
        &self.values[idx]
    }

    fn map2(&self, other: &GhostVector, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> GhostVector {
        assert_eq!(self.set, other.set);
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        GhostVector { set: self.set.clone(), values }
    }
}

impl WittVector {
    pub fn new(set: TruncationSet, modulus: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != set.len() {
            return Err(Error::Usage(format!(
                "witt vector needs {} coefficients for set {set}, got {}",
                set.len(),
                coeffs.len()
            )));
        }
        let mut v = WittVector { set, modulus, coeffs };
        v.canonicalize();
        Ok(v)
    }

    pub fn zero(set: TruncationSet, modulus: u64) -> Self {
        let coeffs = vec![BigInt::zero(); set.len()];
        WittVector { set, modulus, coeffs }
    }

    /// Teichmüller representative `[c]`: `c` in slot 1, zero elsewhere.
    pub fn teichmuller(c: BigInt, set: TruncationSet, modulus: u64) -> Self {
        let mut v = WittVector::zero(set, modulus);
        if let Some(idx) = v.set.index_of(1) {
            v.coeffs[idx] = c;
        }
        v.canonicalize();
        v
    }

    /// The multiplicative unit `[1]`.
    pub fn unit(set: TruncationSet, modulus: u64) -> Self {
        WittVector::teichmuller(BigInt::one(), set, modulus)
    }

    fn canonicalize(&mut self) {
        if self.modulus > 0 {
            let m = BigInt::from(self.modulus);
            for c in &mut self.coeffs {
                *c = c.mod_floor(&m);
            }
        }
    }

    pub fn set(&self) -> &TruncationSet {
        &self.set
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff_at(&self, s: u64) -> &BigInt {
        let idx = self.set.index_of(s).expect("coefficient outside the set");
        &self.coeffs[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Canonical integral lift: the same coefficients viewed in `W_S(Z)`.
    pub fn lift(&self) -> WittVector {
        WittVector { set: self.set.clone(), modulus: 0, coeffs: self.coeffs.clone() }
    }

    /// Coefficientwise reduction into `W_S(Z/m)` (or a fresh copy for m = 0).
    pub fn reduce(&self, modulus: u64) -> WittVector {
        let mut v = WittVector { set: self.set.clone(), modulus, coeffs: self.coeffs.clone() };
        v.canonicalize();
        v
    }

    /// Ghost coordinates `w_s = Σ_{d | s} d · a_d^{s/d}`; integral
    /// coefficients only.
    pub fn ghost(&self) -> Result<GhostVector> {
        if self.modulus != 0 {
            return Err(Error::Domain("ghost requires integral coefficients".into()));
        }
        let values = self
            .set
            .elements()
            .iter()
            .map(|&s| {
                let mut w = BigInt::zero();
                for (idx, &d) in self.set.elements().iter().enumerate() {
                    if d > s {
                        break;
                    }
                    if s % d == 0 {
                        let power = self.coeffs[idx].pow((s / d) as u32);
                        w += BigInt::from(d) * power;
                    }
                }
                w
            })
            .collect();
        Ok(GhostVector { set: self.set.clone(), values })
    }

    /// Invert the triangular ghost system. Fails when the ghost vector is not
    /// in the image of the ghost map, which signals a caller composing
    /// operations that do not preserve integrality.
    pub fn from_ghost(g: &GhostVector) -> Result<WittVector> {
        let set = g.set.clone();
        let mut coeffs: Vec<BigInt> = Vec::with_capacity(set.len());
        for (idx, &s) in set.elements().iter().enumerate() {
            let mut rhs = g.values[idx].clone();
            for (didx, &d) in set.elements().iter().enumerate() {
                if d >= s {
                    break;
                }
                if s % d == 0 {
                    rhs -= BigInt::from(d) * coeffs[didx].pow((s / d) as u32);
                }
            }
            let (q, r) = rhs.div_rem(&BigInt::from(s));
            if !r.is_zero() {
                return Err(Error::Domain(format!(
                    "ghost vector not in image: slot {s} leaves remainder {r} after division by {s}"
                )));
            }
            coeffs.push(q);
        }
        Ok(WittVector { set, modulus: 0, coeffs })
    }

    fn check_compatible(&self, other: &WittVector) -> Result<()> {
        if self.set != other.set {
            return Err(Error::Usage(format!(
                "witt vectors live on different sets {} and {}",
                self.set, other.set
            )));
        }
        if self.modulus != other.modulus {
            return Err(Error::Usage(format!(
                "witt vectors have different moduli {} and {}",
                self.modulus, other.modulus
            )));
        }
        Ok(())
    }

    fn ghost_op(&self, other: &WittVector, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<WittVector> {
        self.check_compatible(other)?;
        let ga = self.lift().ghost()?;
        let gb = other.lift().ghost()?;
        let g = ga.map2(&gb, f);
        let result = WittVector::from_ghost(&g)
            .expect("universal witt operation on integral lifts must be integral");
        Ok(result.reduce(self.modulus))
    }

    pub fn add(&self, other: &WittVector) -> Result<WittVector> {
        self.ghost_op(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &WittVector) -> Result<WittVector> {
        self.ghost_op(other, |a, b| a * b)
    }

    /// Additive inverse by triangular solve on the negated ghost; `[-1]` is
    /// not the additive inverse of `[1]` in big Witt rings, so there is no
    /// shortcut through Teichmüller multiplication.
    pub fn neg(&self) -> WittVector {
        let g = self.lift().ghost().expect("lift is integral");
        let negated = GhostVector {
            set: g.set.clone(),
            values: g.values.iter().map(|w| -w).collect(),
        };
        WittVector::from_ghost(&negated)
            .expect("negation of an integral ghost vector is integral")
            .reduce(self.modulus)
    }

    pub fn sub(&self, other: &WittVector) -> Result<WittVector> {
        self.add(&other.neg())
    }

    /// `n`-fold Witt sum by binary doubling; negation for negative `n`.
    pub fn scalar_int(&self, n: &BigInt) -> WittVector {
        if n.is_zero() {
            return WittVector::zero(self.set.clone(), self.modulus);
        }
        let mut remaining = n.abs().to_biguint().expect("abs is nonnegative");
        let mut acc = WittVector::zero(self.set.clone(), self.modulus);
        let mut base = self.clone();
        loop {
            if remaining.is_odd() {
                acc = acc.add(&base).expect("compatible by construction");
            }
            remaining >>= 1;
            if remaining.is_zero() {
                break;
            }
            base = base.add(&base).expect("compatible by construction");
        }
        if n.is_negative() {
            acc.neg()
        } else {
            acc
        }
    }

    /// Verschiebung `V_n : W_{S/n} -> W_S`, placing slot `s` at slot `ns`.
    /// `self` must live on `target/n`.
    pub fn verschiebung(&self, n: u64, target: &TruncationSet) -> Result<WittVector> {
        if n == 0 {
            return Err(Error::Usage("verschiebung requires n >= 1".into()));
        }
        let expected = target.divide(n);
        if self.set != expected {
            return Err(Error::Usage(format!(
                "verschiebung V_{n} into {target} expects a vector on {expected}, got one on {}",
                self.set
            )));
        }
        let coeffs = target
            .elements()
            .iter()
            .map(|&s| {
                if s % n == 0 {
                    self.coeff_at(s / n).clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        Ok(WittVector { set: target.clone(), modulus: self.modulus, coeffs })
    }

    /// Frobenius `F_n : W_S -> W_{S/n}`, characterized on ghost coordinates by
    /// `w_s(F_n a) = w_{ns}(a)`. The triangular solve is always exact here,
    /// so a failed division is a program error.
    pub fn frobenius(&self, n: u64) -> Result<WittVector> {
        if n == 0 {
            return Err(Error::Usage("frobenius requires n >= 1".into()));
        }
        let target = self.set.divide(n);
        let ghost = self.lift().ghost()?;
        let values = target.elements().iter().map(|&s| ghost.value_at(n * s).clone()).collect();
        let g = GhostVector { set: target, values };
        let result = WittVector::from_ghost(&g).expect("frobenius must preserve integrality");
        Ok(result.reduce(self.modulus))
    }

    /// Restriction along `T ⊆ S`: forget the coefficients outside `T`.
    pub fn restrict(&self, t: &TruncationSet) -> Result<WittVector> {
        if !t.is_subset_of(&self.set) {
            return Err(Error::Usage(format!("{t} is not a subset of {}", self.set)));
        }
        let coeffs = t.elements().iter().map(|&s| self.coeff_at(s).clone()).collect();
        Ok(WittVector { set: t.clone(), modulus: self.modulus, coeffs })
    }

    /// The p-typical coordinate decomposition of `W_S(F_p)`: component `j`
    /// (for `j ∈ S`, `p ∤ j`) is the image of `F_j` restricted to the
    /// p-typical set through `j`, read off as an integer mod `p^{t_j}`. The
    /// total map is an additive bijection onto `⊕_j Z/p^{t_j}`.
    pub fn decompose(&self) -> Result<Decomposition> {
        let p = self.modulus;
        if !is_prime(p) {
            return Err(Error::Domain(format!(
                "decompose requires a prime coefficient modulus, got {p}"
            )));
        }
        let lengths = self.set.p_typical_lengths(p)?;
        let mut components = Vec::with_capacity(lengths.len());
        for (j, t) in lengths {
            let fj = self.frobenius(j)?;
            let p_typ = TruncationSet::p_typical(p, t);
            let restricted = fj.restrict(&p_typ)?;
            let value = p_typ_to_int(&restricted)?;
            components.push(DecompositionComponent { j, t, value });
        }
        Ok(Decomposition { p, components })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "set": self.set.elements(),
            "modulus": self.modulus,
            "coeffs": self.coeffs.iter().map(bigint_json).collect::<Vec<_>>(),
        })
    }
}

/// JSON encoding for possibly-large integers: a number when it fits i64,
/// otherwise a decimal string.
pub fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(small) => json!(small),
        None => json!(n.to_string()),
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{}(mod {}) {}", self.set, self.modulus, self)
    }
}

/// One component of the p-typical decomposition: the residue `value` in
/// `Z/p^t` attached to the p-free index `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecompositionComponent {
    pub j: u64,
    pub t: u32,
    pub value: BigUint,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub p: u64,
    pub components: Vec<DecompositionComponent>,
}

impl Decomposition {
    pub fn component(&self, j: u64) -> Option<&DecompositionComponent> {
        self.components.iter().find(|c| c.j == j)
    }

    /// Componentwise sum mod `p^{t_j}`; the decomposition is additive.
    pub fn add(&self, other: &Decomposition) -> Decomposition {
        assert_eq!(self.p, other.p);
        assert_eq!(self.components.len(), other.components.len());
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| {
                assert_eq!((a.j, a.t), (b.j, b.t));
                let modulus = BigUint::from(self.p).pow(a.t);
                DecompositionComponent { j: a.j, t: a.t, value: (&a.value + &b.value) % modulus }
            })
            .collect();
        Decomposition { p: self.p, components }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "components": self.components.iter().map(|c| json!({
                "j": c.j,
                "modulus": crate::abgroup::biguint_json(&BigUint::from(self.p).pow(c.t)),
                "value": crate::abgroup::biguint_json(&c.value),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The inverse of `n ↦ n·[1]` on a p-typical Witt ring over `F_p`: greedy
/// digit extraction. Subtracting `c_0·[1]` kills the slot-1 coefficient, the
/// remaining vector is a coefficient shift (the image of `V_p`), and shifting
/// down recurses on one digit fewer.
pub fn p_typ_to_int(w: &WittVector) -> Result<BigUint> {
    let p = w.modulus();
    if !is_prime(p) {
        return Err(Error::Domain(format!("p_typ_to_int requires a prime modulus, got {p}")));
    }
    let t = w.set().len() as u32;
    if *w.set() != TruncationSet::p_typical(p, t) {
        return Err(Error::Usage(format!(
            "p_typ_to_int requires the p-typical set of length {t}, got {}",
            w.set()
        )));
    }
    let mut acc = BigUint::zero();
    let mut power = BigUint::one();
    let mut cur = w.clone();
    for _ in 0..t {
        let digit = cur.coeffs[0].to_biguint().expect("canonical coefficients are nonnegative");
        acc += &digit * &power;
        power *= p;
        let unit = WittVector::unit(cur.set.clone(), p);
        cur = cur.sub(&unit.scalar_int(&BigInt::from(digit)))?;
        assert!(
            cur.coeffs[0].is_zero(),
            "digit extraction must clear the slot-1 coefficient"
        );
        // shift down: inverse of V_p on a vector with vanishing slot 1
        let shorter = TruncationSet::p_typical(p, cur.set.len() as u32 - 1);
        cur = WittVector { set: shorter, modulus: p, coeffs: cur.coeffs[1..].to_vec() };
    }

    // In test builds, cross-validate the digit algorithm against brute-force
    // enumeration while the ring is small.
    #[cfg(debug_assertions)]
    {
        if BigUint::from(p).pow(t) <= BigUint::from(4096u32) {
            let unit = WittVector::unit(w.set().clone(), p);
            let mut probe = WittVector::zero(w.set().clone(), p);
            let mut n = BigUint::zero();
            let found = loop {
                if probe == *w {
                    break n.clone();
                }
                probe = probe.add(&unit).expect("compatible");
                n += 1u32;
                assert!(n < BigUint::from(p).pow(t), "brute-force enumeration exhausted");
            };
            assert_eq!(found, acc, "digit extraction disagrees with enumeration");
        }
    }

    Ok(acc)
}

/// `n ↦ n·[1]` on the p-typical Witt ring of length `t` over `F_p`.
pub fn int_to_p_typ(n: &BigUint, p: u64, t: u32) -> Result<WittVector> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("int_to_p_typ requires a prime modulus, got {p}")));
    }
    let set = TruncationSet::p_typical(p, t);
    let unit = WittVector::unit(set, p);
    Ok(unit.scalar_int(&BigInt::from(n.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(set: &TruncationSet, modulus: u64, coeffs: &[i64]) -> WittVector {
        WittVector::new(set.clone(), modulus, coeffs.iter().map(|&c| BigInt::from(c)).collect())
            .unwrap()
    }

    fn s(m: u64) -> TruncationSet {
        TruncationSet::interval(m)
    }

    #[test]
    fn ghost_examples() {
        let s2 = s(2);
        assert_eq!(
            w(&s2, 0, &[1, 0]).ghost().unwrap().values(),
            &[BigInt::from(1), BigInt::from(1)]
        );
        assert_eq!(
            w(&s2, 0, &[2, -1]).ghost().unwrap().values(),
            &[BigInt::from(2), BigInt::from(2)]
        );
        let s3 = s(3);
        assert_eq!(
            w(&s3, 0, &[1, 1, 1]).ghost().unwrap().values(),
            &[BigInt::from(1), BigInt::from(3), BigInt::from(4)]
        );
        assert!(w(&s2, 2, &[1, 0]).ghost().is_err());
    }

    #[test]
    fn from_ghost_examples() {
        let s2 = s(2);
        let g = GhostVector::new(s2.clone(), vec![BigInt::from(2), BigInt::from(2)]).unwrap();
        assert_eq!(WittVector::from_ghost(&g).unwrap(), w(&s2, 0, &[2, -1]));

        let s1 = s(1);
        let g = GhostVector::new(s1.clone(), vec![BigInt::from(7)]).unwrap();
        assert_eq!(WittVector::from_ghost(&g).unwrap(), w(&s1, 0, &[7]));

        let bad = GhostVector::new(s2, vec![BigInt::zero(), BigInt::one()]).unwrap();
        assert!(WittVector::from_ghost(&bad).is_err());
    }

    #[test]
    fn add_examples() {
        let s2 = s(2);
        let a = w(&s2, 0, &[1, 0]);
        assert_eq!(a.add(&a).unwrap(), w(&s2, 0, &[2, -1]));

        let am2 = w(&s2, 2, &[1, 0]);
        assert_eq!(am2.add(&am2).unwrap(), w(&s2, 2, &[0, 1]));

        let zero = WittVector::zero(s2.clone(), 0);
        let b = w(&s2, 0, &[5, -3]);
        assert_eq!(b.add(&zero).unwrap(), b);

        // mismatched modulus is a usage error
        assert!(a.add(&am2).is_err());
        // mismatched set is a usage error
        assert!(a.add(&w(&s(3), 0, &[1, 0, 0])).is_err());
    }

    #[test]
    fn neg_examples() {
        let s1 = s(1);
        assert_eq!(w(&s1, 0, &[5]).neg(), w(&s1, 0, &[-5]));

        let s2 = s(2);
        let a = w(&s2, 0, &[1, 0]);
        let n = a.neg();
        assert_eq!(n, w(&s2, 0, &[-1, -1]));
        assert!(a.add(&n).unwrap().is_zero());

        // defining property over Z/2 as well
        let am2 = w(&s2, 2, &[1, 1]);
        assert!(am2.add(&am2.neg()).unwrap().is_zero());
    }

    #[test]
    fn mul_examples() {
        let s3 = s(3);
        let a = WittVector::teichmuller(BigInt::from(2), s3.clone(), 0);
        let b = WittVector::teichmuller(BigInt::from(3), s3.clone(), 0);
        assert_eq!(a.mul(&b).unwrap(), WittVector::teichmuller(BigInt::from(6), s3.clone(), 0));

        let unit = WittVector::unit(s3.clone(), 0);
        let c = w(&s3, 0, &[2, -5, 7]);
        assert_eq!(c.mul(&unit).unwrap(), c);

        // ghost rule, not coefficientwise product: (0,1)*(0,1) = (0,2)
        let s2 = s(2);
        let v = w(&s2, 0, &[0, 1]);
        assert_eq!(v.mul(&v).unwrap(), w(&s2, 0, &[0, 2]));
    }

    #[test]
    fn scalar_examples() {
        let s2 = s(2);
        let a = w(&s2, 0, &[1, 0]);
        assert_eq!(a.scalar_int(&BigInt::from(2)), w(&s2, 0, &[2, -1]));
        assert!(a.scalar_int(&BigInt::zero()).is_zero());

        // brute-force oracle: 3 * [1] over Z/2 on {1,2}
        let unit = WittVector::unit(s2.clone(), 2);
        let brute = unit.add(&unit).unwrap().add(&unit).unwrap();
        assert_eq!(unit.scalar_int(&BigInt::from(3)), brute);
        assert_eq!(brute, w(&s2, 2, &[1, 1]));

        // negative scalar is the negated positive scalar
        let b = w(&s2, 0, &[3, -2]);
        assert_eq!(b.scalar_int(&BigInt::from(-4)), b.scalar_int(&BigInt::from(4)).neg());
    }

    #[test]
    fn teichmuller_examples() {
        let s3 = s(3);
        let t = WittVector::teichmuller(BigInt::one(), s3.clone(), 0);
        assert_eq!(t.coeffs(), &[BigInt::one(), BigInt::zero(), BigInt::zero()]);
        assert!(WittVector::teichmuller(BigInt::zero(), s3.clone(), 0).is_zero());

        let c = BigInt::from(5);
        let ghost = WittVector::teichmuller(c.clone(), s3.clone(), 0).ghost().unwrap();
        assert_eq!(ghost.values(), &[c.clone(), c.pow(2), c.pow(3)]);
    }

    #[test]
    fn verschiebung_examples() {
        let s2 = s(2);
        let a = w(&s(1), 0, &[7]);
        assert_eq!(a.verschiebung(2, &s2).unwrap(), w(&s2, 0, &[0, 7]));

        let b = w(&s2, 0, &[3, 4]);
        assert_eq!(b.verschiebung(1, &s2).unwrap(), b);

        // wrong source set
        assert!(b.verschiebung(3, &s2).is_err());
    }

    #[test]
    fn frobenius_examples() {
        // F_2 on {1,2}: the single ghost coordinate w_2 = a_1^2 + 2 a_2
        let s2 = s(2);
        let a = w(&s2, 0, &[3, 5]);
        assert_eq!(a.frobenius(2).unwrap(), w(&s(1), 0, &[3 * 3 + 2 * 5]));

        // F_n [c] = [c^n]
        let s6 = s(6);
        let c = BigInt::from(4);
        let t = WittVector::teichmuller(c.clone(), s6.clone(), 0);
        assert_eq!(
            t.frobenius(3).unwrap(),
            WittVector::teichmuller(c.pow(3), s6.divide(3), 0)
        );
    }

    #[test]
    fn restrict_examples() {
        let s4 = s(4);
        let a = w(&s4, 0, &[1, 2, 3, 4]);
        assert_eq!(a.restrict(&s4).unwrap(), a);
        assert_eq!(a.restrict(&s(2)).unwrap(), w(&s(2), 0, &[1, 2]));
        // {1,3} is divisor closed and a subset
        let t = TruncationSet::new(vec![1, 3]).unwrap();
        assert_eq!(a.restrict(&t).unwrap().coeffs(), &[BigInt::from(1), BigInt::from(3)]);
        // not a subset
        assert!(w(&s(2), 0, &[1, 2]).restrict(&s4).is_err());
    }

    #[test]
    fn p_typ_examples() {
        let p2t2 = TruncationSet::p_typical(2, 2);
        let unit = WittVector::unit(p2t2.clone(), 2);
        assert_eq!(p_typ_to_int(&unit).unwrap(), BigUint::from(1u32));

        let w11 = WittVector::new(p2t2.clone(), 2, vec![BigInt::one(), BigInt::one()]).unwrap();
        assert_eq!(p_typ_to_int(&w11).unwrap(), BigUint::from(3u32));

        let w01 = WittVector::new(p2t2.clone(), 2, vec![BigInt::zero(), BigInt::one()]).unwrap();
        assert_eq!(p_typ_to_int(&w01).unwrap(), BigUint::from(2u32));

        assert_eq!(int_to_p_typ(&BigUint::from(3u32), 2, 2).unwrap(), w11);
        assert_eq!(int_to_p_typ(&BigUint::from(1u32), 2, 2).unwrap(), unit);

        // exhaustive round-trip for small parameters
        for (p, t) in [(2u64, 4u32), (3, 3), (5, 2)] {
            let count = p.pow(t);
            for n in 0..count {
                let n = BigUint::from(n);
                let v = int_to_p_typ(&n, p, t).unwrap();
                assert_eq!(p_typ_to_int(&v).unwrap(), n);
            }
        }
    }

    #[test]
    fn decompose_examples() {
        // [1] on {1,2,3,4} over F_2: component 1 is 1 in Z/8, component 3 is 1 in Z/2
        let s4 = s(4);
        let unit = WittVector::unit(s4.clone(), 2);
        let d = unit.decompose().unwrap();
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.component(1).unwrap().t, 3);
        assert_eq!(d.component(1).unwrap().value, BigUint::from(1u32));
        assert_eq!(d.component(3).unwrap().t, 1);
        assert_eq!(d.component(3).unwrap().value, BigUint::from(1u32));

        // V_3([1]) on {1,2,3}: component 3 nonzero, component 1 zero
        let s3 = s(3);
        let v3 = WittVector::unit(s3.divide(3), 2).verschiebung(3, &s3).unwrap();
        let d = v3.decompose().unwrap();
        assert!(d.component(1).unwrap().value.is_zero());
        assert!(!d.component(3).unwrap().value.is_zero());

        // composite modulus is rejected
        assert!(w(&s4, 6, &[1, 0, 0, 0]).decompose().is_err());
    }

    #[test]
    fn decompose_is_additive_bijection_small() {
        // full enumeration over F_2 on {1..4}
        let s4 = s(4);
        let mut seen = std::collections::HashSet::new();
        let mut all = Vec::new();
        for mask in 0..16u32 {
            let coeffs: Vec<BigInt> = (0..4).map(|b| BigInt::from((mask >> b) & 1)).collect();
            let v = WittVector::new(s4.clone(), 2, coeffs).unwrap();
            let d = v.decompose().unwrap();
            let key: Vec<(u64, BigUint)> =
                d.components.iter().map(|c| (c.j, c.value.clone())).collect();
            assert!(seen.insert(key), "decompose must be injective");
            all.push((v, d));
        }
        // additivity on all pairs
        for (a, da) in &all {
            for (b, db) in &all {
                let sum = a.add(b).unwrap();
                assert_eq!(sum.decompose().unwrap(), da.add(db));
            }
        }
    }

    fn arb_coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-9i64..=9, len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn ghost_ring_homomorphism(a in arb_coeffs(12), b in arb_coeffs(12)) {
            let s12 = s(12);
            let x = w(&s12, 0, &a);
            let y = w(&s12, 0, &b);
            let gx = x.ghost().unwrap();
            let gy = y.ghost().unwrap();
            let sum = x.add(&y).unwrap().ghost().unwrap();
            let prod = x.mul(&y).unwrap().ghost().unwrap();
            for i in 0..12 {
                prop_assert_eq!(&sum.values()[i], &(&gx.values()[i] + &gy.values()[i]));
                prop_assert_eq!(&prod.values()[i], &(&gx.values()[i] * &gy.values()[i]));
            }
        }

        #[test]
        fn from_ghost_inverts_ghost(a in arb_coeffs(12)) {
            let s12 = s(12);
            let x = w(&s12, 0, &a);
            prop_assert_eq!(WittVector::from_ghost(&x.ghost().unwrap()).unwrap(), x);
        }

        #[test]
        fn verschiebung_ghost_identity(a in arb_coeffs(6), n in 1u64..5) {
            let s12 = s(12);
            let source_set = s12.divide(n);
            let coeffs: Vec<BigInt> = a.iter().take(source_set.len()).map(|&c| BigInt::from(c)).collect();
            prop_assume!(coeffs.len() == source_set.len());
            let x = WittVector::new(source_set, 0, coeffs).unwrap();
            let v = x.verschiebung(n, &s12).unwrap();
            let gv = v.ghost().unwrap();
            let gx = x.ghost().unwrap();
            for (idx, &sl) in s12.elements().iter().enumerate() {
                if sl % n == 0 {
                    prop_assert_eq!(&gv.values()[idx], &(BigInt::from(n) * gx.value_at(sl / n)));
                } else {
                    prop_assert!(gv.values()[idx].is_zero());
                }
            }
        }

        #[test]
        fn frobenius_after_verschiebung_is_multiplication(a in arb_coeffs(6), n in 2u64..5) {
            let s12 = s(12);
            let source_set = s12.divide(n);
            let coeffs: Vec<BigInt> = a.iter().take(source_set.len()).map(|&c| BigInt::from(c)).collect();
            prop_assume!(coeffs.len() == source_set.len());
            let x = WittVector::new(source_set, 0, coeffs).unwrap();
            let fv = x.verschiebung(n, &s12).unwrap().frobenius(n).unwrap();
            prop_assert_eq!(fv, x.scalar_int(&BigInt::from(n)));
        }

        #[test]
        fn verschiebung_is_additive(a in arb_coeffs(6), b in arb_coeffs(6), n in 2u64..4) {
            let s12 = s(12);
            let source = s12.divide(n);
            let take = |c: &[i64]| -> Vec<BigInt> {
                c.iter().take(source.len()).map(|&x| BigInt::from(x)).collect()
            };
            prop_assume!(take(&a).len() == source.len());
            let x = WittVector::new(source.clone(), 0, take(&a)).unwrap();
            let y = WittVector::new(source.clone(), 0, take(&b)).unwrap();
            prop_assert_eq!(
                x.add(&y).unwrap().verschiebung(n, &s12).unwrap(),
                x.verschiebung(n, &s12).unwrap().add(&y.verschiebung(n, &s12).unwrap()).unwrap()
            );
        }

        #[test]
        fn frobenius_and_restrict_are_ring_homomorphisms(a in arb_coeffs(12), b in arb_coeffs(12), n in 2u64..4) {
            let s12 = s(12);
            let x = w(&s12, 0, &a);
            let y = w(&s12, 0, &b);
            prop_assert_eq!(
                x.add(&y).unwrap().frobenius(n).unwrap(),
                x.frobenius(n).unwrap().add(&y.frobenius(n).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.mul(&y).unwrap().frobenius(n).unwrap(),
                x.frobenius(n).unwrap().mul(&y.frobenius(n).unwrap()).unwrap()
            );
            let t = s(4);
            prop_assert_eq!(
                x.add(&y).unwrap().restrict(&t).unwrap(),
                x.restrict(&t).unwrap().add(&y.restrict(&t).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.mul(&y).unwrap().restrict(&t).unwrap(),
                x.restrict(&t).unwrap().mul(&y.restrict(&t).unwrap()).unwrap()
            );
        }

        #[test]
        fn reduction_commutes_with_operations(a in arb_coeffs(8), b in arb_coeffs(8), m in 2u64..12) {
            let s8 = s(8);
            let x = w(&s8, 0, &a);
            let y = w(&s8, 0, &b);
            let xr = x.reduce(m);
            let yr = y.reduce(m);
            prop_assert_eq!(x.add(&y).unwrap().reduce(m), xr.add(&yr).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().reduce(m), xr.mul(&yr).unwrap());
            prop_assert_eq!(x.neg().reduce(m), xr.neg());
            prop_assert_eq!(x.frobenius(2).unwrap().reduce(m), xr.frobenius(2).unwrap());
            prop_assert_eq!(x.restrict(&s(4)).unwrap().reduce(m), xr.restrict(&s(4)).unwrap());
        }
    }
}
