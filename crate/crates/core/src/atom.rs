//! Named jet atoms: the free Taylor data of the metric, drifting function and
//! potential at the base boundary point, after the boundary-normal-coordinate
//! gauge has been imposed.
//!
//! Atoms are small `Copy` values with a fixed total order (kind, then index
//! list); every canonical form downstream derives from that order. Coordinate
//! indices are 1-based, with index `n` reserved for the inward normal.

use std::fmt;

/// Hard cap on the manifold dimension; index bytes and multi-index storage
/// are sized for it.
pub const MAX_DIM: usize = 10;

const MAX_IDX: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
#[repr(u8)]
pub enum AtomKind {
    /// Principal curvature kappa_alpha (or the shared umbilic kappa when the
    /// index list is empty).
    Kappa = 0,
    /// Constant sectional curvature of the ambient space form.
    K0 = 1,
    /// Boundary Riemann tensor component R_{a b c d} at x0, stored as a
    /// canonical representative under the tensor symmetries.
    BoundaryRiemann = 2,
    /// g_{ab,nn}(x0): free symmetric second normal jets S_{ab}.
    SecondNormal = 3,
    /// g_{ab,nnn}(x0): free symmetric third normal jets T_{ab}.
    ThirdNormal = 4,
    /// Partial derivative of phi at x0; indices are the sorted derivative
    /// multiset, e.g. [1,1,3] for d^3 phi / dx1^2 dx3.
    Phi = 5,
    /// Potential V and its first derivatives at x0; empty index list is V(x0).
    Pot = 6,
    /// Raw metric Taylor data g_{ab}, derivative multiset mu, for explicit
    /// scenarios that bypass the curvature parametrization.
    MetricJet = 7,
    /// Free-form tagged atom.
    Aux = 8,
}

/// A single named generator of the coefficient ring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    kind: AtomKind,
    len: u8,
    idx: [u8; MAX_IDX],
}

impl Atom {
    fn new(kind: AtomKind, indices: &[u8]) -> Atom {
        assert!(indices.len() <= MAX_IDX, "atom index list too long");
        let mut idx = [0u8; MAX_IDX];
        idx[..indices.len()].copy_from_slice(indices);
        Atom {
            kind,
            len: indices.len() as u8,
            idx,
        }
    }

    pub fn kind(&self) -> AtomKind {
        self.kind
    }

    pub fn indices(&self) -> &[u8] {
        &self.idx[..self.len as usize]
    }

    pub fn kappa(alpha: u8) -> Atom {
        Atom::new(AtomKind::Kappa, &[alpha])
    }

    /// The shared principal curvature of an umbilic boundary.
    pub fn kappa_umbilic() -> Atom {
        Atom::new(AtomKind::Kappa, &[])
    }

    pub fn k0() -> Atom {
        Atom::new(AtomKind::K0, &[])
    }

    pub fn second_normal(a: u8, b: u8) -> Atom {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Atom::new(AtomKind::SecondNormal, &[a, b])
    }

    pub fn third_normal(a: u8, b: u8) -> Atom {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Atom::new(AtomKind::ThirdNormal, &[a, b])
    }

    /// phi derivative atom for the sorted multiset of directions.
    pub fn phi(dirs: &[u8]) -> Atom {
        let mut d = dirs.to_vec();
        d.sort_unstable();
        Atom::new(AtomKind::Phi, &d)
    }

    pub fn pot(dirs: &[u8]) -> Atom {
        let mut d = dirs.to_vec();
        d.sort_unstable();
        Atom::new(AtomKind::Pot, &d)
    }

    pub fn metric_jet(a: u8, b: u8, dirs: &[u8]) -> Atom {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let mut v = vec![a, b];
        let mut d = dirs.to_vec();
        d.sort_unstable();
        v.extend_from_slice(&d);
        Atom::new(AtomKind::MetricJet, &v)
    }

    pub fn aux(tag: u8) -> Atom {
        Atom::new(AtomKind::Aux, &[tag])
    }

    /// Raw boundary-Riemann atom; callers should go through
    /// [`riemann_component`] so the symmetries are respected.
    pub fn boundary_riemann_raw(a: u8, b: u8, c: u8, d: u8) -> Atom {
        Atom::new(AtomKind::BoundaryRiemann, &[a, b, c, d])
    }

    /// Relabel tangential indices through `perm` (perm[i] is the new name of
    /// index i+1); the normal index and K0/Aux are untouched.
    pub fn relabel_tangential(&self, perm: &[u8], n: u8) -> Atom {
        let map = |i: u8| -> u8 {
            if i == n || i == 0 {
                i
            } else {
                perm[(i - 1) as usize]
            }
        };
        match self.kind {
            AtomKind::K0 | AtomKind::Aux => *self,
            AtomKind::Kappa => {
                if self.len == 0 {
                    *self
                } else {
                    Atom::kappa(map(self.idx[0]))
                }
            }
            AtomKind::SecondNormal => Atom::second_normal(map(self.idx[0]), map(self.idx[1])),
            AtomKind::ThirdNormal => Atom::third_normal(map(self.idx[0]), map(self.idx[1])),
            AtomKind::Phi => {
                let d: Vec<u8> = self.indices().iter().map(|&i| map(i)).collect();
                Atom::phi(&d)
            }
            AtomKind::Pot => {
                let d: Vec<u8> = self.indices().iter().map(|&i| map(i)).collect();
                Atom::pot(&d)
            }
            AtomKind::MetricJet => {
                let i = self.indices();
                Atom::metric_jet(map(i[0]), map(i[1]), &i[2..].iter().map(|&j| map(j)).collect::<Vec<_>>())
            }
            // Relabelled Riemann atoms must be re-canonicalized by the caller.
            AtomKind::BoundaryRiemann => {
                let i = self.indices();
                Atom::boundary_riemann_raw(map(i[0]), map(i[1]), map(i[2]), map(i[3]))
            }
        }
    }
}

/// Canonical reduction of a boundary Riemann component R_{abcd} under
/// R_{jklm} = R_{lmjk} = -R_{kjlm} = -R_{jkml} and the first Bianchi
/// identity. The result is a short signed combination of basis atoms:
/// for four distinct indices a<b<c<d the basis is {R_{abcd}, R_{acbd}} and
/// R_{adbc} rewrites to R_{acbd} - R_{abcd}.
pub fn riemann_component(a: u8, b: u8, c: u8, d: u8) -> Vec<(Atom, i8)> {
    if a == b || c == d {
        return Vec::new();
    }
    let mut sign: i8 = 1;
    let (mut p1, mut p2) = ((a, b), (c, d));
    if p1.0 > p1.1 {
        p1 = (p1.1, p1.0);
        sign = -sign;
    }
    if p2.0 > p2.1 {
        p2 = (p2.1, p2.0);
        sign = -sign;
    }
    if p1 > p2 {
        std::mem::swap(&mut p1, &mut p2);
    }
    let (a, b, c, d) = (p1.0, p1.1, p2.0, p2.1);
    // With pairs sorted and ordered, four distinct indices can only appear
    // as (ab)(cd), (ac)(bd) or (ad)(bc) with a<b<c<d overall.
    let mut all = [a, b, c, d];
    all.sort_unstable();
    let distinct = {
        let mut k = 1;
        for i in 1..4 {
            if all[i] != all[i - 1] {
                k += 1;
            }
        }
        k
    };
    if distinct == 4 && a == all[0] && b == all[3] {
        // (ad)(bc) pattern: rewrite through Bianchi.
        let x = Atom::boundary_riemann_raw(all[0], all[2], all[1], all[3]); // R_{acbd}
        let y = Atom::boundary_riemann_raw(all[0], all[1], all[2], all[3]); // R_{abcd}
        return vec![(x, sign), (y, -sign)];
    }
    vec![(Atom::boundary_riemann_raw(a, b, c, d), sign)]
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            AtomKind::Kappa => "kappa",
            AtomKind::K0 => "K0",
            AtomKind::BoundaryRiemann => "R",
            AtomKind::SecondNormal => "S",
            AtomKind::ThirdNormal => "T",
            AtomKind::Phi => "phi",
            AtomKind::Pot => "V",
            AtomKind::MetricJet => "g",
            AtomKind::Aux => "aux",
        };
        if self.len == 0 {
            return write!(f, "{name}");
        }
        let idx: Vec<String> = if self.kind == AtomKind::MetricJet {
            let i = self.indices();
            let dirs: Vec<String> = i[2..].iter().map(|j| j.to_string()).collect();
            return write!(f, "g({},{}|{})", i[0], i[1], dirs.join(","));
        } else {
            self.indices().iter().map(|j| j.to_string()).collect()
        };
        write!(f, "{name}({})", idx.join(","))
    }
}

/// Parse the display form back into an atom (used by the JSON loader).
pub fn parse_atom(s: &str) -> Option<Atom> {
    let s = s.trim();
    if s == "K0" {
        return Some(Atom::k0());
    }
    if s == "kappa" {
        return Some(Atom::kappa_umbilic());
    }
    if s == "V" {
        return Some(Atom::pot(&[]));
    }
    let (name, rest) = s.split_once('(')?;
    let rest = rest.strip_suffix(')')?;
    let parse_list = |t: &str| -> Option<Vec<u8>> {
        if t.is_empty() {
            return Some(Vec::new());
        }
        t.split(',').map(|x| x.trim().parse::<u8>().ok()).collect()
    };
    match name {
        "kappa" => {
            let v = parse_list(rest)?;
            Some(if v.is_empty() {
                Atom::kappa_umbilic()
            } else {
                Atom::kappa(v[0])
            })
        }
        "R" => {
            let v = parse_list(rest)?;
            (v.len() == 4).then(|| Atom::boundary_riemann_raw(v[0], v[1], v[2], v[3]))
        }
        "S" => {
            let v = parse_list(rest)?;
            (v.len() == 2).then(|| Atom::second_normal(v[0], v[1]))
        }
        "T" => {
            let v = parse_list(rest)?;
            (v.len() == 2).then(|| Atom::third_normal(v[0], v[1]))
        }
        "phi" => Some(Atom::phi(&parse_list(rest)?)),
        "V" => Some(Atom::pot(&parse_list(rest)?)),
        "aux" => {
            let v = parse_list(rest)?;
            (v.len() == 1).then(|| Atom::aux(v[0]))
        }
        "g" => {
            let (ab, dirs) = rest.split_once('|')?;
            let ab = parse_list(ab)?;
            let dirs = parse_list(dirs)?;
            (ab.len() == 2).then(|| Atom::metric_jet(ab[0], ab[1], &dirs))
        }
        _ => None,
    }
}
