//! Truncated Taylor expansions around the base boundary point, with
//! coefficients in the atom-polynomial ring.
//!
//! A jet of order T stores the Taylor coefficients c_mu = (d^mu f / mu!)(x0)
//! for |mu| <= T. Products truncate at the minimum of the factor orders and
//! every derivative consumes one order; since all downstream evaluations
//! happen at x0 after a bounded number of derivatives, the stored windows
//! are exact wherever they are read.

use crate::atom::MAX_DIM;
use crate::poly::AtomPoly;
use crate::rational::{factorial, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JetError {
    #[error("jets have different dimensions")]
    DimensionMismatch,
    #[error("jet order too low for the requested derivative")]
    OrderTooLow,
    #[error("leading metric coefficient is singular")]
    SingularLeadingCoefficient,
}

/// Sentinel order for jets that are exact polynomials (constants, scalars).
pub const UNBOUNDED: u32 = u32::MAX;

/// Exponent multi-index over the n coordinates (1-based slots 1..=n).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mi {
    n: u8,
    e: [u8; MAX_DIM],
}

impl Mi {
    pub fn zero(n: u8) -> Mi {
        assert!((n as usize) <= MAX_DIM);
        Mi {
            n,
            e: [0; MAX_DIM],
        }
    }

    /// Unit multi-index in coordinate j (1-based).
    pub fn unit(n: u8, j: u8) -> Mi {
        let mut m = Mi::zero(n);
        m.e[(j - 1) as usize] = 1;
        m
    }

    /// Build from a derivative multiset, e.g. [n, n, 1].
    pub fn from_dirs(n: u8, dirs: &[u8]) -> Mi {
        let mut m = Mi::zero(n);
        for &d in dirs {
            m.e[(d - 1) as usize] += 1;
        }
        m
    }

    pub fn dim(&self) -> u8 {
        self.n
    }

    pub fn total(&self) -> u32 {
        self.e[..self.n as usize].iter().map(|&x| x as u32).sum()
    }

    pub fn get(&self, j: u8) -> u8 {
        self.e[(j - 1) as usize]
    }

    pub fn add(&self, other: &Mi) -> Mi {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for i in 0..self.n as usize {
            out.e[i] += other.e[i];
        }
        out
    }

    pub fn bump(&self, j: u8) -> Mi {
        let mut out = *self;
        out.e[(j - 1) as usize] += 1;
        out
    }

    /// Decrement slot j; None if it is already zero.
    pub fn lower(&self, j: u8) -> Option<Mi> {
        let i = (j - 1) as usize;
        if self.e[i] == 0 {
            return None;
        }
        let mut out = *self;
        out.e[i] -= 1;
        Some(out)
    }

    /// mu! as a rational.
    pub fn factorial(&self) -> Rational {
        let mut acc = crate::rational::rat_int(1);
        for i in 0..self.n as usize {
            acc *= factorial(self.e[i] as u32);
        }
        acc
    }

    /// The derivative multiset (1-based directions, ascending).
    pub fn dirs(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for i in 0..self.n as usize {
            for _ in 0..self.e[i] {
                out.push((i + 1) as u8);
            }
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = (u8, u8)> + '_ {
        (0..self.n as usize)
            .filter(|&i| self.e[i] != 0)
            .map(|i| ((i + 1) as u8, self.e[i]))
    }
}

/// Truncated Taylor expansion at x0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet {
    n: u8,
    order: u32,
    coeffs: BTreeMap<Mi, AtomPoly>,
}

impl Jet {
    pub fn zero(n: u8) -> Jet {
        Jet {
            n,
            order: UNBOUNDED,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: u8, c: AtomPoly) -> Jet {
        let mut j = Jet::zero(n);
        if !c.is_zero() {
            j.coeffs.insert(Mi::zero(n), c);
        }
        j
    }

    pub fn one(n: u8) -> Jet {
        Jet::constant(n, AtomPoly::one())
    }

    /// The coordinate function x_j as an exact jet.
    pub fn coordinate(n: u8, j: u8) -> Jet {
        let mut out = Jet::zero(n);
        out.coeffs.insert(Mi::unit(n, j), AtomPoly::one());
        out
    }

    pub fn with_order(mut self, order: u32) -> Jet {
        self.order = order;
        self.truncate();
        self
    }

    pub fn dim(&self) -> u8 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, mi: &Mi) -> AtomPoly {
        self.coeffs.get(mi).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Mi, &AtomPoly)> {
        self.coeffs.iter()
    }

    /// Set the Taylor coefficient of x^mu directly.
    pub fn set_coeff(&mut self, mi: Mi, c: AtomPoly) {
        debug_assert_eq!(mi.dim(), self.n);
        if c.is_zero() {
            self.coeffs.remove(&mi);
        } else {
            self.coeffs.insert(mi, c);
        }
    }

    /// Set the derivative value (d^mu f)(x0); stores value / mu!.
    pub fn set_deriv(&mut self, mi: Mi, value: AtomPoly) {
        let c = value.scale(&mi.factorial().recip());
        self.set_coeff(mi, c);
    }

    /// The derivative value (d^mu f)(x0) = mu! * coefficient.
    pub fn deriv_at_origin(&self, mi: &Mi) -> AtomPoly {
        self.coeff(mi).scale(&mi.factorial())
    }

    pub fn eval_origin(&self) -> AtomPoly {
        self.coeff(&Mi::zero(self.n))
    }

    fn truncate(&mut self) {
        if self.order == UNBOUNDED {
            return;
        }
        let order = self.order;
        self.coeffs.retain(|mi, _| mi.total() <= order);
    }

    pub fn add(&self, other: &Jet) -> Jet {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        out.order = self.order.min(other.order);
        for (mi, c) in &other.coeffs {
            let mut cur = out.coeffs.remove(mi).unwrap_or_default();
            cur.add_assign(c);
            if !cur.is_zero() {
                out.coeffs.insert(*mi, cur);
            }
        }
        out.truncate();
        out
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Jet {
        self.scale(&crate::rational::rat_int(-1))
    }

    pub fn scale(&self, c: &Rational) -> Jet {
        if c.is_zero() {
            return Jet::zero(self.n).with_order(self.order);
        }
        Jet {
            n: self.n,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(mi, v)| (*mi, v.scale(c)))
                .collect(),
        }
    }

    pub fn scale_poly(&self, c: &AtomPoly) -> Jet {
        if c.is_zero() {
            return Jet::zero(self.n).with_order(self.order);
        }
        Jet {
            n: self.n,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(mi, v)| (*mi, v.mul(c)))
                .collect(),
        }
    }

    /// Cauchy product truncated at min(order_a, order_b).
    pub fn mul(&self, other: &Jet) -> Jet {
        debug_assert_eq!(self.n, other.n);
        let order = self.order.min(other.order);
        let mut out = Jet::zero(self.n);
        out.order = order;
        for (ma, ca) in &self.coeffs {
            if order != UNBOUNDED && ma.total() > order {
                continue;
            }
            for (mb, cb) in &other.coeffs {
                let m = ma.add(mb);
                if order != UNBOUNDED && m.total() > order {
                    continue;
                }
                let prod = ca.mul(cb);
                if prod.is_zero() {
                    continue;
                }
                let mut cur = out.coeffs.remove(&m).unwrap_or_default();
                cur.add_assign(&prod);
                if !cur.is_zero() {
                    out.coeffs.insert(m, cur);
                }
            }
        }
        out
    }

    /// Formal partial derivative; the truncation order drops by one.
    pub fn derivative(&self, j: u8) -> Result<Jet, JetError> {
        let order = if self.order == UNBOUNDED {
            UNBOUNDED
        } else if self.order == 0 {
            return Err(JetError::OrderTooLow);
        } else {
            self.order - 1
        };
        let mut out = Jet::zero(self.n);
        out.order = order;
        for (mi, c) in &self.coeffs {
            if let Some(lower) = mi.lower(j) {
                let k = mi.get(j) as i64;
                let v = c.scale(&crate::rational::rat_int(k));
                if !v.is_zero() {
                    out.coeffs.insert(lower, v);
                }
            }
        }
        out.truncate();
        Ok(out)
    }

    /// Substitute x_n = 0; the result depends on the tangential variables
    /// only (entries with normal exponent > 0 are dropped).
    pub fn restrict_to_boundary(&self) -> Jet {
        let n = self.n;
        Jet {
            n,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(mi, _)| mi.get(n) == 0)
                .map(|(mi, c)| (*mi, c.clone()))
                .collect(),
        }
    }

    /// Apply an atom substitution to every coefficient.
    pub fn substitute(&self, assignment: &BTreeMap<crate::atom::Atom, Rational>) -> Jet {
        let mut out = Jet::zero(self.n);
        out.order = self.order;
        for (mi, c) in &self.coeffs {
            let v = c.substitute(assignment);
            if !v.is_zero() {
                out.coeffs.insert(*mi, v);
            }
        }
        out
    }

    /// Permute the tangential coordinate slots and relabel atoms to match.
    pub fn relabel_tangential(&self, perm: &[u8]) -> Jet {
        let n = self.n;
        let mut out = Jet::zero(n);
        out.order = self.order;
        for (mi, c) in &self.coeffs {
            let mut e = Mi::zero(n);
            for (j, k) in mi.entries() {
                let target = if j == n { n } else { perm[(j - 1) as usize] };
                for _ in 0..k {
                    e = e.bump(target);
                }
            }
            let v = c.relabel_tangential(perm, n);
            let mut cur = out.coeffs.remove(&e).unwrap_or_default();
            cur.add_assign(&v);
            if !cur.is_zero() {
                out.coeffs.insert(e, cur);
            }
        }
        out
    }
}
