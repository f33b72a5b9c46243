//! Exact multivariate polynomials over the jet atoms.
//!
//! `AtomPoly` is the coefficient ring for jets and symbols: a canonical map
//! from monomials (sorted atom-power lists) to nonzero rationals. All
//! operations are exact; equality is structural equality of the canonical
//! form.

use crate::atom::{riemann_component, Atom, AtomKind};
use crate::rational::{format_rational, rat_int, Rational};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("atom {0} has no assigned value")]
    MissingAtom(String),
}

/// A power product of atoms, sorted by atom with exponents >= 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(Atom, u8)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Monomial {
        Monomial(vec![(a, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn factors(&self) -> &[(Atom, u8)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

/// Exact polynomial in the atoms; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AtomPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl AtomPoly {
    pub fn zero() -> AtomPoly {
        AtomPoly::default()
    }

    pub fn one() -> AtomPoly {
        AtomPoly::constant(rat_int(1))
    }

    pub fn constant(c: Rational) -> AtomPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        AtomPoly { terms }
    }

    pub fn atom(a: Atom) -> AtomPoly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::atom(a), rat_int(1));
        AtomPoly { terms }
    }

    /// Canonical boundary-Riemann component as a polynomial (respects the
    /// tensor symmetries and the first Bianchi identity).
    pub fn riemann(a: u8, b: u8, c: u8, d: u8) -> AtomPoly {
        let mut p = AtomPoly::zero();
        for (atom, sign) in riemann_component(a, b, c, d) {
            p.add_term(Monomial::atom(atom), rat_int(sign as i64));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(Monomial::is_one)
    }

    /// Constant term (zero if absent).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for &(a, _) in m.factors() {
                out.insert(a);
            }
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &AtomPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &AtomPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> AtomPoly {
        if c.is_zero() {
            return AtomPoly::zero();
        }
        AtomPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &AtomPoly) -> AtomPoly {
        let mut out = AtomPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> AtomPoly {
        let mut out = AtomPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact evaluation; every atom must be assigned.
    pub fn eval(&self, assignment: &BTreeMap<Atom, Rational>) -> Result<Rational, PolyError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for &(a, e) in m.factors() {
                let x = assignment
                    .get(&a)
                    .ok_or_else(|| PolyError::MissingAtom(a.to_string()))?;
                v *= num_traits::pow::pow(x.clone(), e as usize);
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Substitute values for a subset of atoms, keeping the rest symbolic.
    pub fn substitute(&self, assignment: &BTreeMap<Atom, Rational>) -> AtomPoly {
        let mut out = AtomPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Monomial::one();
            for &(a, e) in m.factors() {
                if let Some(x) = assignment.get(&a) {
                    coeff *= num_traits::pow::pow(x.clone(), e as usize);
                } else {
                    rest = rest.mul(&Monomial(vec![(a, e)]));
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// True iff the polynomial mentions phi or V atoms.
    pub fn involves_phi_v(&self) -> bool {
        self.terms.keys().any(|m| {
            m.factors()
                .iter()
                .any(|(a, _)| matches!(a.kind(), AtomKind::Phi | AtomKind::Pot))
        })
    }

    /// Relabel tangential indices through `perm`; Riemann atoms are
    /// re-canonicalized after relabelling.
    pub fn relabel_tangential(&self, perm: &[u8], n: u8) -> AtomPoly {
        let mut out = AtomPoly::zero();
        for (m, c) in &self.terms {
            let mut parts = AtomPoly::constant(c.clone());
            for &(a, e) in m.factors() {
                let r = a.relabel_tangential(perm, n);
                let factor = if r.kind() == AtomKind::BoundaryRiemann {
                    let i = r.indices();
                    AtomPoly::riemann(i[0], i[1], i[2], i[3])
                } else {
                    AtomPoly::atom(r)
                };
                for _ in 0..e {
                    parts = parts.mul(&factor);
                }
            }
            out.add_assign(&parts);
        }
        out
    }
}

impl Add<&AtomPoly> for &AtomPoly {
    type Output = AtomPoly;
    fn add(self, rhs: &AtomPoly) -> AtomPoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub<&AtomPoly> for &AtomPoly {
    type Output = AtomPoly;
    fn sub(self, rhs: &AtomPoly) -> AtomPoly {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl Mul<&AtomPoly> for &AtomPoly {
    type Output = AtomPoly;
    fn mul(self, rhs: &AtomPoly) -> AtomPoly {
        AtomPoly::mul(self, rhs)
    }
}

impl Neg for &AtomPoly {
    type Output = AtomPoly;
    fn neg(self) -> AtomPoly {
        self.scale(&rat_int(-1))
    }
}

impl fmt::Display for AtomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = mag.is_one();
            if m.is_one() {
                write!(f, "{}", format_rational(&mag))?;
                continue;
            }
            if !coeff_is_one {
                write!(f, "{}*", format_rational(&mag))?;
            }
            let mut fs = Vec::new();
            for &(a, e) in m.factors() {
                if e == 1 {
                    fs.push(a.to_string());
                } else {
                    fs.push(format!("{a}^{e}"));
                }
            }
            write!(f, "{}", fs.join("*"))?;
        }
        Ok(())
    }
}

/// Draw a nonzero rational with numerator in [-9, 9] and denominator in
/// [1, 7]; this is the documented Schwartz-Zippel sample space. With at
/// least 90 distinct values and total degrees well under 20 in practice,
/// a single trial errs with probability < 1/4 and 50 independent trials
/// with probability < 1e-30.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let n = rng.gen_range(-9i64..=9);
        let d = rng.gen_range(1i64..=7);
        let r = Rational::new(n.into(), d.into());
        if !r.is_zero() {
            return r;
        }
    }
}

/// Seeded random assignment for a set of atoms; repeated values are
/// re-drawn so assignments stay generic.
pub fn random_assignment(atoms: &BTreeSet<Atom>, seed: u64) -> BTreeMap<Atom, Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used: Vec<Rational> = Vec::new();
    let mut out = BTreeMap::new();
    for &a in atoms {
        let mut v = random_rational(&mut rng);
        let mut attempts = 0;
        while used.contains(&v) && attempts < 64 {
            v = random_rational(&mut rng);
            attempts += 1;
        }
        used.push(v.clone());
        out.insert(a, v);
    }
    out
}

/// Probabilistic equality: structural equality short-circuits; otherwise the
/// difference is evaluated at `trials` seeded random points.
pub fn poly_equal_probabilistic(a: &AtomPoly, b: &AtomPoly, trials: u32, seed: u64) -> bool {
    assert!(trials >= 1, "trials must be at least 1");
    if a == b {
        return true;
    }
    let diff = a - b;
    let atoms = diff.atoms();
    for t in 0..trials {
        let assignment = random_assignment(&atoms, seed.wrapping_add(t as u64));
        match diff.eval(&assignment) {
            Ok(v) => {
                if !v.is_zero() {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn x() -> AtomPoly {
        AtomPoly::atom(Atom::kappa(1))
    }

    fn y() -> AtomPoly {
        AtomPoly::atom(Atom::kappa(2))
    }

    #[test]
    fn ring_identities() {
        let p = &x() + &y();
        let q = &x() - &y();
        let prod = &p * &q;
        let expect = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(prod, expect);
        assert_eq!(&p + &AtomPoly::zero(), p);
        let half_k = x().scale(&rat(1, 2));
        let third_k = x().scale(&rat(1, 3));
        assert_eq!(&half_k * &third_k, x().pow(2).scale(&rat(1, 6)));
    }

    #[test]
    fn evaluation() {
        let p = x().pow(2);
        let mut assignment = BTreeMap::new();
        assignment.insert(Atom::kappa(1), rat(2, 3));
        assert_eq!(p.eval(&assignment).unwrap(), rat(4, 9));
        assert_eq!(
            AtomPoly::constant(rat_int(5)).eval(&BTreeMap::new()).unwrap(),
            rat_int(5)
        );
        // H*phi_n with H = kappa_1 + kappa_2 pre-contracted, n = 3
        let h = &x() + &y();
        let p = &h * &AtomPoly::atom(Atom::phi(&[3]));
        let mut assignment = BTreeMap::new();
        assignment.insert(Atom::kappa(1), rat_int(1));
        assignment.insert(Atom::kappa(2), rat_int(2));
        assignment.insert(Atom::phi(&[3]), rat_int(-1));
        assert_eq!(p.eval(&assignment).unwrap(), rat_int(-3));
        let err = p.eval(&BTreeMap::new());
        assert!(matches!(err, Err(PolyError::MissingAtom(_))));
    }

    #[test]
    fn probabilistic_equality() {
        assert!(poly_equal_probabilistic(&x(), &x(), 5, 1));
        let xx = &x() * &x();
        assert!(poly_equal_probabilistic(&xx, &x().pow(2), 5, 1));
        let xp1 = &x() + &AtomPoly::one();
        assert!(!poly_equal_probabilistic(&x(), &xp1, 5, 1));
    }

    #[test]
    fn display_deterministic() {
        let p = &(&x() + &y().scale(&rat(-1, 2))) + &AtomPoly::one();
        assert_eq!(p.to_string(), "1 + kappa(1) - 1/2*kappa(2)");
    }

    fn arb_poly() -> impl Strategy<Value = AtomPoly> {
        let atom = prop_oneof![
            Just(Atom::kappa(1)),
            Just(Atom::kappa(2)),
            Just(Atom::phi(&[3])),
            Just(Atom::second_normal(1, 2)),
        ];
        let term = (atom, 0u8..3, -5i64..6).prop_map(|(a, e, c)| {
            let mut p = AtomPoly::constant(rat_int(c));
            for _ in 0..e {
                p = p.mul(&AtomPoly::atom(a));
            }
            p
        });
        prop::collection::vec(term, 0..5).prop_map(|ts| {
            let mut acc = AtomPoly::zero();
            for t in ts {
                acc.add_assign(&t);
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in (arb_poly(), arb_poly(), arb_poly())) {
            // associativity and commutativity
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            // distributivity
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn canonical_form_idempotent(a in arb_poly()) {
            // re-normalizing (rebuilding term by term) changes nothing
            let mut rebuilt = AtomPoly::zero();
            rebuilt.add_assign(&a);
            prop_assert_eq!(rebuilt, a);
        }
    }
}
