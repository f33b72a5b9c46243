//! Gauge-constrained jets of the metric, drifting function and potential in
//! boundary normal coordinates, together with the concrete geometric
//! scenarios used for verification.
//!
//! Coordinates are (x_1, ..., x_{n-1}, x_n) with x_n the inward geodesic
//! distance to the boundary; the metric block-splits as
//! g = g_{ab} dx_a dx_b + dx_n^2, so g_{nn} = 1 and g_{na} = 0 hold as full
//! jets. At the base point the frame diagonalizes the second fundamental
//! form, first tangential derivatives vanish, g_{ab,n}(x0) = -2 kappa_a
//! delta_{ab}, and the second tangential derivatives carry the boundary
//! curvature through the normal-coordinate expansion
//! g_{ab,cd}(x0) = (R_{acbd} + R_{adbc}) / 3.

use crate::atom::Atom;
use crate::jet::{Jet, JetError, Mi, UNBOUNDED};
use crate::poly::{random_assignment, AtomPoly};
use crate::rational::{parse_rational, rat, rat_int, Rational};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GaugeError {
    #[error("truncation order {0} unsupported (maximum 3)")]
    UnsupportedOrder(u32),
    #[error("dimension {0} outside the supported range 2..=10")]
    UnsupportedDimension(u8),
    #[error("ball radius must be positive")]
    InvalidRadius,
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("explicit metric data is not gauge-consistent: {0}")]
    InvalidGauge(String),
    #[error("malformed gauge JSON: {0}")]
    BadJson(String),
}

/// A space-form parameter: symbolic atom or exact rational value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SfParam {
    Symbolic,
    Value(Rational),
}

/// Explicit jet data keyed by derivative multisets (1-based directions).
#[derive(Clone, PartialEq, Debug, Default)]
pub struct ExplicitData {
    /// (a, b, dirs) -> value of d^dirs g_{ab} at x0, tangential a <= b.
    pub metric: Vec<(u8, u8, Vec<u8>, AtomPoly)>,
    /// dirs -> derivative of phi at x0.
    pub phi: Vec<(Vec<u8>, AtomPoly)>,
    /// dirs -> derivative of V at x0.
    pub pot: Vec<(Vec<u8>, AtomPoly)>,
    /// Ambient constant sectional curvature, when known.
    pub k0: Option<AtomPoly>,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Scenario {
    /// Fully symbolic gauge: free atoms for curvatures, phi and V. The seed
    /// feeds verification-time atom assignments, not the construction.
    RandomGauge { seed: u64 },
    /// Flat half-space: every curvature quantity vanishes, phi = V = 0.
    Flat,
    /// Ball of the given radius in Euclidean space, optionally with radial
    /// phi(r) and V(r) given by polynomial coefficients in r.
    EuclideanBall {
        radius: Rational,
        phi_radial: Vec<Rational>,
        pot_radial: Vec<Rational>,
    },
    /// Geodesic ball in a space form, parametrized by the ambient curvature
    /// K0 and the (umbilic) boundary principal curvature kappa. Both stay
    /// exact: symbolic atoms or rationals.
    SpaceFormBall { curvature: SfParam, kappa: SfParam },
    /// User-supplied jets.
    Explicit(ExplicitData),
}

/// Gauge-constrained jets at the base point plus the atom registry.
#[derive(Clone, PartialEq, Debug)]
pub struct GaugeJets {
    n: u8,
    order: u32,
    /// Full symmetric metric table including the normal row/column.
    g: Vec<Vec<Jet>>,
    ginv: Vec<Vec<Jet>>,
    phi: Jet,
    pot: Jet,
    atoms: BTreeSet<Atom>,
    k0: Option<AtomPoly>,
    scenario_name: String,
}

impl GaugeJets {
    pub fn build(scenario: &Scenario, n: u8, order: u32) -> Result<GaugeJets, GaugeError> {
        if !(2..=crate::atom::MAX_DIM as u8).contains(&n) {
            return Err(GaugeError::UnsupportedDimension(n));
        }
        if order > 3 {
            return Err(GaugeError::UnsupportedOrder(order));
        }
        let mut jets = match scenario {
            Scenario::RandomGauge { .. } => build_random_gauge(n, order),
            Scenario::Flat => build_flat(n, order),
            Scenario::EuclideanBall {
                radius,
                phi_radial,
                pot_radial,
            } => {
                if *radius <= Rational::zero() {
                    return Err(GaugeError::InvalidRadius);
                }
                let kappa = radius.recip();
                build_warped_ball(
                    n,
                    order,
                    AtomPoly::zero(),
                    AtomPoly::constant(kappa),
                    Some(AtomPoly::zero()),
                    phi_radial,
                    pot_radial,
                    radius,
                )
            }
            Scenario::SpaceFormBall { curvature, kappa } => {
                let k0 = match curvature {
                    SfParam::Symbolic => AtomPoly::atom(Atom::k0()),
                    SfParam::Value(v) => AtomPoly::constant(v.clone()),
                };
                let ka = match kappa {
                    SfParam::Symbolic => AtomPoly::atom(Atom::kappa_umbilic()),
                    SfParam::Value(v) => AtomPoly::constant(v.clone()),
                };
                let k0_report = k0.clone();
                build_warped_ball(n, order, k0, ka, Some(k0_report), &[], &[], &rat_int(1))
            }
            Scenario::Explicit(data) => build_explicit(n, order, data)?,
        };
        jets.scenario_name = scenario_label(scenario);
        jets.invert_metric()?;
        jets.collect_atoms();
        Ok(jets)
    }

    pub fn dim(&self) -> u8 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn scenario_name(&self) -> &str {
        &self.scenario_name
    }

    pub fn metric(&self, a: u8, b: u8) -> &Jet {
        &self.g[(a - 1) as usize][(b - 1) as usize]
    }

    pub fn inverse(&self, a: u8, b: u8) -> &Jet {
        &self.ginv[(a - 1) as usize][(b - 1) as usize]
    }

    pub fn phi(&self) -> &Jet {
        &self.phi
    }

    pub fn potential(&self) -> &Jet {
        &self.pot
    }

    pub fn ambient_k0(&self) -> Option<&AtomPoly> {
        self.k0.as_ref()
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    /// Same jets with phi and V identically zero (for coefficient splits).
    pub fn zero_phi_v(&self) -> GaugeJets {
        let mut out = self.clone();
        out.phi = Jet::zero(self.n).with_order(self.phi.order());
        out.pot = Jet::zero(self.n).with_order(self.pot.order());
        out.collect_atoms();
        out
    }

    /// Seeded random rational values for every registered atom.
    pub fn random_assignment(&self, seed: u64) -> BTreeMap<Atom, Rational> {
        random_assignment(&self.atoms, seed)
    }

    /// Substitute rational values for atoms in every jet.
    pub fn substitute(&self, assignment: &BTreeMap<Atom, Rational>) -> GaugeJets {
        let map_jet = |j: &Jet| j.substitute(assignment);
        let mut out = GaugeJets {
            n: self.n,
            order: self.order,
            g: self.g.iter().map(|row| row.iter().map(map_jet).collect()).collect(),
            ginv: self
                .ginv
                .iter()
                .map(|row| row.iter().map(map_jet).collect())
                .collect(),
            phi: map_jet(&self.phi),
            pot: map_jet(&self.pot),
            atoms: BTreeSet::new(),
            k0: self.k0.as_ref().map(|p| p.substitute(assignment)),
            scenario_name: format!("{}+assigned", self.scenario_name),
        };
        out.collect_atoms();
        out
    }

    /// Permute the tangential coordinates (perm maps old index -> new index,
    /// 1-based, length n-1); used by the relabeling-equivariance tests.
    pub fn relabel_tangential(&self, perm: &[u8]) -> GaugeJets {
        let n = self.n as usize;
        let mut g = vec![vec![Jet::zero(self.n); n]; n];
        let mut ginv = vec![vec![Jet::zero(self.n); n]; n];
        let map = |i: usize| -> usize {
            if i == n - 1 {
                i
            } else {
                (perm[i] - 1) as usize
            }
        };
        for a in 0..n {
            for b in 0..n {
                g[map(a)][map(b)] = self.g[a][b].relabel_tangential(perm);
                ginv[map(a)][map(b)] = self.ginv[a][b].relabel_tangential(perm);
            }
        }
        let mut out = GaugeJets {
            n: self.n,
            order: self.order,
            g,
            ginv,
            phi: self.phi.relabel_tangential(perm),
            pot: self.pot.relabel_tangential(perm),
            atoms: BTreeSet::new(),
            k0: self.k0.as_ref().map(|p| p.relabel_tangential(perm, self.n)),
            scenario_name: format!("{}+relabelled", self.scenario_name),
        };
        out.collect_atoms();
        out
    }

    fn collect_atoms(&mut self) {
        let mut atoms = BTreeSet::new();
        let mut visit = |j: &Jet| {
            for (_, c) in j.coeffs() {
                atoms.extend(c.atoms());
            }
        };
        for row in &self.g {
            for j in row {
                visit(j);
            }
        }
        for row in &self.ginv {
            for j in row {
                visit(j);
            }
        }
        visit(&self.phi);
        visit(&self.pot);
        if let Some(k0) = &self.k0 {
            atoms.extend(k0.atoms());
        }
        self.atoms = atoms;
    }

    /// Order-by-order Neumann inversion of the metric block; exact through
    /// the truncation order.
    fn invert_metric(&mut self) -> Result<(), GaugeError> {
        let n = self.n as usize;
        let t = self.order;
        for a in 1..=n as u8 {
            for b in 1..=n as u8 {
                let lead = self.metric(a, b).eval_origin();
                let expect = if a == b { AtomPoly::one() } else { AtomPoly::zero() };
                if lead != expect {
                    return Err(GaugeError::InvalidGauge(format!(
                        "g_{{{a}{b}}}(x0) must be delta (boundary normal coordinates)"
                    )));
                }
            }
        }
        // E = g - I vanishes at x0, so (I + E)^{-1} = sum_k (-E)^k exactly
        // through order t.
        let mut e = vec![vec![Jet::zero(self.n); n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut j = self.g[a][b].clone().with_order(t);
                if a == b {
                    j = j.sub(&Jet::one(self.n));
                }
                e[a][b] = j;
            }
        }
        let id: Vec<Vec<Jet>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if a == b {
                            Jet::one(self.n).with_order(t)
                        } else {
                            Jet::zero(self.n).with_order(t)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut acc = id.clone();
        let mut power = id;
        for _ in 0..t {
            let mut next = vec![vec![Jet::zero(self.n).with_order(t); n]; n];
            for a in 0..n {
                for b in 0..n {
                    let mut s = Jet::zero(self.n).with_order(t);
                    for k in 0..n {
                        if power[a][k].is_zero() || e[k][b].is_zero() {
                            continue;
                        }
                        s = s.add(&power[a][k].mul(&e[k][b]).neg());
                    }
                    next[a][b] = s;
                }
            }
            power = next;
            for a in 0..n {
                for b in 0..n {
                    acc[a][b] = acc[a][b].add(&power[a][b]);
                }
            }
        }
        self.ginv = acc;
        Ok(())
    }
}

fn scenario_label(s: &Scenario) -> String {
    match s {
        Scenario::RandomGauge { seed } => format!("random-gauge(seed={seed})"),
        Scenario::Flat => "flat".into(),
        Scenario::EuclideanBall { radius, .. } => {
            format!("euclidean-ball(r0={})", crate::rational::format_rational(radius))
        }
        Scenario::SpaceFormBall { .. } => "space-form-ball".into(),
        Scenario::Explicit(_) => "explicit".into(),
    }
}

fn empty_tables(n: u8, order: u32) -> GaugeJets {
    let nn = n as usize;
    let mut g = vec![vec![Jet::zero(n).with_order(order); nn]; nn];
    for (a, row) in g.iter_mut().enumerate() {
        row[a] = Jet::one(n).with_order(order);
    }
    GaugeJets {
        n,
        order,
        ginv: g.clone(),
        g,
        phi: Jet::zero(n).with_order(order),
        pot: Jet::zero(n).with_order(order.min(1)),
        atoms: BTreeSet::new(),
        k0: None,
        scenario_name: String::new(),
    }
}

fn build_flat(n: u8, order: u32) -> GaugeJets {
    let mut jets = empty_tables(n, order);
    jets.k0 = Some(AtomPoly::zero());
    jets
}

/// Free symmetric atoms for the fully symbolic gauge. Third-order metric
/// jets other than g_{ab,nnn} are set to zero; see the jet-constraint notes
/// in the module docs.
fn build_random_gauge(n: u8, order: u32) -> GaugeJets {
    let mut jets = empty_tables(n, order);
    let nt = n - 1;
    for a in 1..=nt {
        for b in a..=nt {
            let mut jet = if a == b { Jet::one(n) } else { Jet::zero(n) };
            jet = jet.with_order(UNBOUNDED);
            if order >= 1 && a == b {
                // g_{aa,n}(x0) = -2 kappa_a
                let mut d = Jet::zero(n);
                d.set_deriv(
                    Mi::unit(n, n),
                    AtomPoly::atom(Atom::kappa(a)).scale(&rat_int(-2)),
                );
                jet = jet.add(&d);
            }
            if order >= 2 {
                // g_{ab,nn}(x0) = S_{ab}
                let mut d = Jet::zero(n);
                d.set_deriv(
                    Mi::from_dirs(n, &[n, n]),
                    AtomPoly::atom(Atom::second_normal(a, b)),
                );
                jet = jet.add(&d);
                // g_{ab,cd}(x0) = (R_{acbd} + R_{adbc}) / 3
                for c in 1..=nt {
                    for d2 in c..=nt {
                        let val = (&AtomPoly::riemann(a, c, b, d2)
                            + &AtomPoly::riemann(a, d2, b, c))
                            .scale(&rat(1, 3));
                        if val.is_zero() {
                            continue;
                        }
                        let mut d = Jet::zero(n);
                        d.set_deriv(Mi::from_dirs(n, &[c, d2]), val);
                        jet = jet.add(&d);
                    }
                }
            }
            if order >= 3 {
                // g_{ab,nnn}(x0) = T_{ab}; all other third-order jets zero.
                let mut d = Jet::zero(n);
                d.set_deriv(
                    Mi::from_dirs(n, &[n, n, n]),
                    AtomPoly::atom(Atom::third_normal(a, b)),
                );
                jet = jet.add(&d);
            }
            let jet = jet.with_order(order);
            jets.g[(a - 1) as usize][(b - 1) as usize] = jet.clone();
            jets.g[(b - 1) as usize][(a - 1) as usize] = jet;
        }
    }
    // phi: free derivative atoms of order 1..=order, phi(x0) = 0.
    let mut phi = Jet::zero(n).with_order(order);
    for dirs in derivative_multisets(n, order.min(3)) {
        if dirs.is_empty() {
            continue;
        }
        let mut d = Jet::zero(n);
        d.set_deriv(Mi::from_dirs(n, &dirs), AtomPoly::atom(Atom::phi(&dirs)));
        phi = phi.add(&d);
    }
    jets.phi = phi.with_order(order);
    // V: value and first derivatives.
    let mut pot = Jet::constant(n, AtomPoly::atom(Atom::pot(&[])));
    for j in 1..=n {
        let mut d = Jet::zero(n);
        d.set_deriv(Mi::unit(n, j), AtomPoly::atom(Atom::pot(&[j])));
        pot = pot.add(&d);
    }
    jets.pot = pot.with_order(order.min(1));
    jets
}

/// All derivative multisets of total order <= max over directions 1..=n.
fn derivative_multisets(n: u8, max: u32) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for base in &out {
            let start = base.last().copied().unwrap_or(1);
            for j in start..=n {
                let mut v = base.clone();
                v.push(j);
                next.push(v);
            }
        }
        out.extend(next.clone());
        out = {
            let mut dedup: BTreeSet<Vec<u8>> = BTreeSet::new();
            dedup.extend(out);
            dedup.into_iter().collect()
        };
    }
    out
}

/// Warped-product ball jets: g_{ab}(x', x_n) = warp(x_n) * ghat_{ab}(x')
/// with ghat the constant-curvature boundary metric (curvature
/// K_b = K0 + kappa^2) in normal coordinates at x0 and
/// warp = 1 - 2 kappa x_n + (kappa^2 - K0) x_n^2 + (4/3) K0 kappa x_n^3.
#[allow(clippy::too_many_arguments)]
fn build_warped_ball(
    n: u8,
    order: u32,
    k0: AtomPoly,
    kappa: AtomPoly,
    k0_report: Option<AtomPoly>,
    phi_radial: &[Rational],
    pot_radial: &[Rational],
    radius: &Rational,
) -> GaugeJets {
    let mut jets = empty_tables(n, order);
    jets.k0 = k0_report;
    let nt = n - 1;
    let kb = &k0 + &kappa.pow(2);
    // warp jet in x_n
    let mut warp = Jet::one(n);
    {
        let mut d1 = Jet::zero(n);
        d1.set_coeff(Mi::unit(n, n), kappa.scale(&rat_int(-2)));
        let mut d2 = Jet::zero(n);
        d2.set_coeff(Mi::from_dirs(n, &[n, n]), &kappa.pow(2) - &k0);
        let mut d3 = Jet::zero(n);
        d3.set_coeff(Mi::from_dirs(n, &[n, n, n]), k0.mul(&kappa).scale(&rat(4, 3)));
        warp = warp.add(&d1).add(&d2).add(&d3).with_order(order);
    }
    for a in 1..=nt {
        for b in a..=nt {
            // ghat_{ab} = delta + quadratic curvature correction; for
            // constant curvature g_{ab,cd} = (Kb/3)(d_ad d_bc + d_ac d_bd
            // - 2 d_ab d_cd).
            let mut ghat = if a == b { Jet::one(n) } else { Jet::zero(n) };
            ghat = ghat.with_order(UNBOUNDED);
            for c in 1..=nt {
                for d2 in c..=nt {
                    let del = |i: u8, j: u8| i64::from(i == j);
                    let coeff = del(a, d2) * del(b, c) + del(a, c) * del(b, d2)
                        - 2 * del(a, b) * del(c, d2);
                    if coeff == 0 {
                        continue;
                    }
                    let val = kb.scale(&rat(coeff, 3));
                    let mut d = Jet::zero(n);
                    d.set_deriv(Mi::from_dirs(n, &[c, d2]), val);
                    ghat = ghat.add(&d);
                }
            }
            let jet = ghat.with_order(order).mul(&warp);
            jets.g[(a - 1) as usize][(b - 1) as usize] = jet.clone();
            jets.g[(b - 1) as usize][(a - 1) as usize] = jet;
        }
    }
    // Radial data: r = r0 - x_n exactly in these coordinates, so phi(x',
    // x_n) = phi(r0 - x_n) has x_n-jets only.
    jets.phi = radial_jet(n, order, phi_radial, radius);
    jets.pot = radial_jet(n, order.min(1), pot_radial, radius);
    jets
}

/// Jet of p(r0 - x_n) at x_n = 0 for a polynomial p given by coefficients.
fn radial_jet(n: u8, order: u32, coeffs: &[Rational], radius: &Rational) -> Jet {
    let mut out = Jet::zero(n).with_order(order);
    if coeffs.iter().all(Rational::is_zero) {
        return out;
    }
    // r jet: r0 - x_n
    let r = Jet::constant(n, AtomPoly::constant(radius.clone()))
        .add(&Jet::coordinate(n, n).neg())
        .with_order(order);
    let mut power = Jet::one(n).with_order(order);
    for c in coeffs {
        if !c.is_zero() {
            out = out.add(&power.scale(c));
        }
        power = power.mul(&r);
    }
    out
}

fn build_explicit(n: u8, order: u32, data: &ExplicitData) -> Result<GaugeJets, GaugeError> {
    let mut jets = empty_tables(n, order);
    let nt = n - 1;
    for (a, b, dirs, val) in &data.metric {
        if *a > nt || *b > nt {
            return Err(GaugeError::InvalidGauge(
                "explicit metric entries must be tangential".into(),
            ));
        }
        let mut d = Jet::zero(n);
        d.set_deriv(Mi::from_dirs(n, dirs), val.clone());
        let (a, b) = (*a.min(b), *a.max(b));
        let cur = jets.g[(a - 1) as usize][(b - 1) as usize].clone();
        let j = cur.add(&d).with_order(order);
        jets.g[(a - 1) as usize][(b - 1) as usize] = j.clone();
        jets.g[(b - 1) as usize][(a - 1) as usize] = j;
    }
    let mut phi = Jet::zero(n);
    for (dirs, val) in &data.phi {
        let mut d = Jet::zero(n);
        d.set_deriv(Mi::from_dirs(n, dirs), val.clone());
        phi = phi.add(&d);
    }
    jets.phi = phi.with_order(order);
    let mut pot = Jet::zero(n);
    for (dirs, val) in &data.pot {
        let mut d = Jet::zero(n);
        d.set_deriv(Mi::from_dirs(n, dirs), val.clone());
        pot = pot.add(&d);
    }
    jets.pot = pot.with_order(order.min(1));
    jets.k0 = data.k0.clone();
    Ok(jets)
}

// ---- JSON dump/load -------------------------------------------------------

impl GaugeJets {
    /// Deterministic JSON dump: atom registry plus coefficient tables, with
    /// rationals serialized as "p/q" strings.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Map, Value};
        let jet_to_json = |j: &Jet| -> Value {
            let mut m = Map::new();
            for (mi, c) in j.coeffs() {
                let key = mi
                    .dirs()
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                m.insert(key, Value::String(c.to_string()));
            }
            json!({ "order": if j.order() == UNBOUNDED { -1 } else { j.order() as i64 }, "coeffs": Value::Object(m) })
        };
        let mut metric = Map::new();
        for a in 1..=self.n {
            for b in a..=self.n {
                metric.insert(format!("{a},{b}"), jet_to_json(self.metric(a, b)));
            }
        }
        json!({
            "schema": 1,
            "dim": self.n,
            "order": self.order,
            "scenario": self.scenario_name,
            "atoms": self.atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "metric": Value::Object(metric),
            "phi": jet_to_json(&self.phi),
            "potential": jet_to_json(&self.pot),
            "k0": self.k0.as_ref().map(|p| p.to_string()),
        })
    }

    /// Reload a dump produced by [`GaugeJets::to_json`].
    pub fn from_json(v: &serde_json::Value) -> Result<GaugeJets, GaugeError> {
        let bad = |m: &str| GaugeError::BadJson(m.to_string());
        let n = v["dim"].as_u64().ok_or_else(|| bad("dim"))? as u8;
        let order = v["order"].as_u64().ok_or_else(|| bad("order"))? as u32;
        let parse_jet = |jv: &serde_json::Value| -> Result<Jet, GaugeError> {
            let mut out = Jet::zero(n);
            let coeffs = jv["coeffs"].as_object().ok_or_else(|| bad("coeffs"))?;
            for (key, val) in coeffs {
                let dirs: Vec<u8> = if key.is_empty() {
                    Vec::new()
                } else {
                    key.split(',')
                        .map(|s| s.parse::<u8>().map_err(|_| bad("multi-index")))
                        .collect::<Result<_, _>>()?
                };
                let poly = parse_poly(val.as_str().ok_or_else(|| bad("coeff"))?)
                    .ok_or_else(|| bad("coeff polynomial"))?;
                out.set_coeff(Mi::from_dirs(n, &dirs), poly);
            }
            let o = jv["order"].as_i64().ok_or_else(|| bad("jet order"))?;
            Ok(out.with_order(if o < 0 { UNBOUNDED } else { o as u32 }))
        };
        let mut jets = empty_tables(n, order);
        let metric = v["metric"].as_object().ok_or_else(|| bad("metric"))?;
        for (key, jv) in metric {
            let (a, b) = key.split_once(',').ok_or_else(|| bad("metric key"))?;
            let a: u8 = a.parse().map_err(|_| bad("metric key"))?;
            let b: u8 = b.parse().map_err(|_| bad("metric key"))?;
            let j = parse_jet(jv)?;
            jets.g[(a - 1) as usize][(b - 1) as usize] = j.clone();
            jets.g[(b - 1) as usize][(a - 1) as usize] = j;
        }
        jets.phi = parse_jet(&v["phi"])?;
        jets.pot = parse_jet(&v["potential"])?;
        jets.k0 = match &v["k0"] {
            serde_json::Value::Null => None,
            serde_json::Value::String(s) => Some(parse_poly(s).ok_or_else(|| bad("k0"))?),
            _ => return Err(bad("k0")),
        };
        jets.scenario_name = v["scenario"].as_str().unwrap_or("explicit").to_string();
        jets.invert_metric()?;
        jets.collect_atoms();
        Ok(jets)
    }
}

/// Parse the canonical `AtomPoly` display form.
pub fn parse_poly(s: &str) -> Option<AtomPoly> {
    let s = s.trim();
    if s == "0" {
        return Some(AtomPoly::zero());
    }
    let mut out = AtomPoly::zero();
    // split on " + " / " - " while honoring a leading sign
    let mut rest = s;
    let mut sign = rat_int(1);
    if let Some(r) = rest.strip_prefix('-') {
        sign = rat_int(-1);
        rest = r;
    }
    loop {
        let (term, next) = match (rest.find(" + "), rest.find(" - ")) {
            (Some(p), Some(m)) if p < m => (&rest[..p], Some((&rest[p + 3..], rat_int(1)))),
            (Some(_), Some(m)) => (&rest[..m], Some((&rest[m + 3..], rat_int(-1)))),
            (Some(p), None) => (&rest[..p], Some((&rest[p + 3..], rat_int(1)))),
            (None, Some(m)) => (&rest[..m], Some((&rest[m + 3..], rat_int(-1)))),
            (None, None) => (rest, None),
        };
        let mut coeff = sign.clone();
        let mut poly = AtomPoly::one();
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return None;
            }
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<u32>().ok()?),
                None => (factor, 1),
            };
            if let Some(r) = parse_rational(base) {
                coeff *= crate::rational::pow_i(&r, exp as i32);
            } else {
                let atom = crate::atom::parse_atom(base)?;
                poly = poly.mul(&AtomPoly::atom(atom).pow(exp));
            }
        }
        out.add_assign(&poly.scale(&coeff));
        match next {
            Some((r, s2)) => {
                rest = r;
                sign = s2;
            }
            None => break,
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_gauge_coefficients() {
        let jets = GaugeJets::build(&Scenario::RandomGauge { seed: 0 }, 3, 2).unwrap();
        let n = 3u8;
        // g_{12,n}(x0) = 0 and g_{11,n}(x0) = -2 kappa_1
        assert!(jets.metric(1, 2).deriv_at_origin(&Mi::unit(n, 3)).is_zero());
        assert_eq!(
            jets.metric(1, 1).deriv_at_origin(&Mi::unit(n, 3)),
            AtomPoly::atom(Atom::kappa(1)).scale(&rat_int(-2))
        );
        // block structure
        assert_eq!(jets.metric(3, 3), &Jet::one(n).with_order(2));
        assert!(jets.metric(1, 3).is_zero());
        // first tangential derivatives vanish
        assert!(jets.metric(1, 1).deriv_at_origin(&Mi::unit(n, 1)).is_zero());
        // mixed normal-tangential second derivative vanishes
        assert!(jets
            .metric(1, 1)
            .deriv_at_origin(&Mi::from_dirs(n, &[1, 3]))
            .is_zero());
    }

    #[test]
    fn inverse_identity_through_order() {
        for (scenario, n, t) in [
            (Scenario::RandomGauge { seed: 1 }, 4u8, 3u32),
            (Scenario::Flat, 3, 2),
            (
                Scenario::EuclideanBall {
                    radius: rat(1, 1),
                    phi_radial: vec![],
                    pot_radial: vec![],
                },
                4,
                3,
            ),
            (
                Scenario::SpaceFormBall {
                    curvature: SfParam::Symbolic,
                    kappa: SfParam::Symbolic,
                },
                3,
                3,
            ),
        ] {
            let jets = GaugeJets::build(&scenario, n, t).unwrap();
            for a in 1..=n {
                for b in 1..=n {
                    let mut s = Jet::zero(n).with_order(t);
                    for k in 1..=n {
                        s = s.add(&jets.metric(a, k).mul(jets.inverse(k, b)));
                    }
                    let expect = if a == b {
                        Jet::one(n).with_order(t)
                    } else {
                        Jet::zero(n).with_order(t)
                    };
                    assert_eq!(s, expect, "metric inverse at ({a},{b}) for n={n}");
                }
            }
        }
    }

    #[test]
    fn inverse_first_normal_derivative_flips_sign() {
        let jets = GaugeJets::build(&Scenario::RandomGauge { seed: 0 }, 3, 2).unwrap();
        let n = 3u8;
        assert_eq!(
            jets.inverse(1, 1).deriv_at_origin(&Mi::unit(n, 3)),
            AtomPoly::atom(Atom::kappa(1)).scale(&rat_int(2))
        );
    }

    #[test]
    fn lemma_proof_inverse_second_derivative_sum() {
        // sum_a (g_{aa,nn} + g^{aa,nn}) = 8 sum_a kappa_a^2 under the gauge
        let jets = GaugeJets::build(&Scenario::RandomGauge { seed: 0 }, 4, 2).unwrap();
        let n = 4u8;
        let mi = Mi::from_dirs(n, &[n, n]);
        let mut lhs = AtomPoly::zero();
        for a in 1..=3u8 {
            lhs.add_assign(&jets.metric(a, a).deriv_at_origin(&mi));
            lhs.add_assign(&jets.inverse(a, a).deriv_at_origin(&mi));
        }
        let mut rhs = AtomPoly::zero();
        for a in 1..=3u8 {
            rhs.add_assign(&AtomPoly::atom(Atom::kappa(a)).pow(2).scale(&rat_int(8)));
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn euclidean_ball_jets() {
        let jets = GaugeJets::build(
            &Scenario::EuclideanBall {
                radius: rat(1, 1),
                phi_radial: vec![],
                pot_radial: vec![],
            },
            3,
            3,
        )
        .unwrap();
        let n = 3u8;
        // kappa = 1: g_{aa,n} = -2, S_{aa} = g_{aa,nn} = 2, third normal = 0
        assert_eq!(
            jets.metric(1, 1).deriv_at_origin(&Mi::unit(n, 3)),
            AtomPoly::constant(rat_int(-2))
        );
        assert_eq!(
            jets.metric(1, 1).deriv_at_origin(&Mi::from_dirs(n, &[3, 3])),
            AtomPoly::constant(rat_int(2))
        );
        assert!(jets
            .metric(1, 1)
            .deriv_at_origin(&Mi::from_dirs(n, &[3, 3, 3]))
            .is_zero());
        // boundary quadratic: g_{22,11}(x0) = -2/3 Kb = -2/3
        assert_eq!(
            jets.metric(2, 2).deriv_at_origin(&Mi::from_dirs(n, &[1, 1])),
            AtomPoly::constant(rat(-2, 3))
        );
        assert!(jets.atoms().is_empty());
    }

    #[test]
    fn radial_phi_jets() {
        // phi(r) = r^2/2 on the unit disk: phi_n = -phi'(1) = -1,
        // phi_nn = +phi''(1) = 1
        let jets = GaugeJets::build(
            &Scenario::EuclideanBall {
                radius: rat(1, 1),
                phi_radial: vec![rat_int(0), rat_int(0), rat(1, 2)],
                pot_radial: vec![],
            },
            2,
            3,
        )
        .unwrap();
        let n = 2u8;
        assert_eq!(
            jets.phi().deriv_at_origin(&Mi::unit(n, 2)),
            AtomPoly::constant(rat_int(-1))
        );
        assert_eq!(
            jets.phi().deriv_at_origin(&Mi::from_dirs(n, &[2, 2])),
            AtomPoly::constant(rat_int(1))
        );
        assert!(jets
            .phi()
            .deriv_at_origin(&Mi::unit(n, 1))
            .is_zero());
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            GaugeJets::build(&Scenario::Flat, 3, 4).unwrap_err(),
            GaugeError::UnsupportedOrder(4)
        );
        assert_eq!(
            GaugeJets::build(
                &Scenario::EuclideanBall {
                    radius: rat_int(0),
                    phi_radial: vec![],
                    pot_radial: vec![]
                },
                3,
                2
            )
            .unwrap_err(),
            GaugeError::InvalidRadius
        );
    }

    #[test]
    fn json_round_trip() {
        let jets = GaugeJets::build(&Scenario::RandomGauge { seed: 3 }, 3, 3).unwrap();
        let v = jets.to_json();
        let back = GaugeJets::from_json(&v).unwrap();
        for a in 1..=3u8 {
            for b in 1..=3u8 {
                assert_eq!(jets.metric(a, b), back.metric(a, b));
                assert_eq!(jets.inverse(a, b), back.inverse(a, b));
            }
        }
        assert_eq!(jets.phi(), back.phi());
        assert_eq!(jets.potential(), back.potential());
        assert_eq!(jets.atoms(), back.atoms());
    }

    #[test]
    fn poly_parse_round_trip() {
        let p = &(&AtomPoly::atom(Atom::kappa(1)).pow(2).scale(&rat(3, 2))
            - &AtomPoly::atom(Atom::phi(&[3])))
            + &AtomPoly::one();
        let s = p.to_string();
        assert_eq!(parse_poly(&s), Some(p));
    }
}
