//! Curvature of the ambient manifold and its boundary at the base point,
//! computed from gauge jets: Christoffel symbols, Riemann/Ricci/scalar
//! curvature, the covariant derivative of the Ricci tensor in the normal
//! direction, and the drift/potential scalars entering the closed forms.
//!
//! Boundary curvature is computed twice, intrinsically from the restricted
//! tangential jets and through the Gauss equation from the ambient tensor;
//! the two must agree, which doubles as a test of the gauge construction.

use crate::gauge::GaugeJets;
use crate::jet::{Jet, JetError, Mi};
use crate::poly::AtomPoly;
use crate::rational::{rat, rat_int};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("jet order too low for {0}")]
    OrderTooLow(&'static str),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("second fundamental form is not diagonal at x0")]
    NonDiagonalFrame,
    #[error("boundary curvature mismatch between intrinsic and Gauss routes at ({0},{1},{2},{3})")]
    GaussMismatch(u8, u8, u8, u8),
}

/// Christoffel symbol Gamma^l_{jk} as a jet of order T-1.
pub fn christoffel(jets: &GaugeJets, j: u8, k: u8, l: u8) -> Result<Jet, GeometryError> {
    let n = jets.dim();
    let mut out = Jet::zero(n);
    for m in 1..=n {
        let glm = jets.inverse(l, m);
        if glm.is_zero() {
            continue;
        }
        let s = jets
            .metric(j, m)
            .derivative(k)?
            .add(&jets.metric(k, m).derivative(j)?)
            .sub(&jets.metric(j, k).derivative(m)?);
        out = out.add(&glm.mul(&s));
    }
    Ok(out.scale(&rat(1, 2)))
}

/// Table of all Christoffel jets, indexed [j][k][l] (0-based).
fn christoffel_table(jets: &GaugeJets) -> Result<Vec<Vec<Vec<Jet>>>, GeometryError> {
    let n = jets.dim() as usize;
    let mut t = vec![vec![vec![Jet::zero(jets.dim()); n]; n]; n];
    for j in 1..=n as u8 {
        for k in j..=n as u8 {
            for l in 1..=n as u8 {
                let g = christoffel(jets, j, k, l)?;
                t[(j - 1) as usize][(k - 1) as usize][(l - 1) as usize] = g.clone();
                t[(k - 1) as usize][(j - 1) as usize][(l - 1) as usize] = g;
            }
        }
    }
    Ok(t)
}

/// Riemann curvature jet R_{jklm} from the coordinate formula
/// R_{jklm} = (g_{jl,km} + g_{km,jl} - g_{jm,kl} - g_{kl,jm})/2
///          + sum_{p,h} g_{ph} (Gamma^p_{jl} Gamma^h_{km} - Gamma^p_{jm} Gamma^h_{kl}).
fn riemann_jet(
    jets: &GaugeJets,
    gamma: &[Vec<Vec<Jet>>],
    j: u8,
    k: u8,
    l: u8,
    m: u8,
) -> Result<Jet, GeometryError> {
    let n = jets.dim();
    let d2 = |a: u8, b: u8, c: u8, d: u8| -> Result<Jet, GeometryError> {
        Ok(jets.metric(a, b).derivative(c)?.derivative(d)?)
    };
    let mut out = d2(j, l, k, m)?
        .add(&d2(k, m, j, l)?)
        .sub(&d2(j, m, k, l)?)
        .sub(&d2(k, l, j, m)?)
        .scale(&rat(1, 2));
    let idx = |a: u8| (a - 1) as usize;
    for p in 1..=n {
        for h in 1..=n {
            let gph = jets.metric(p, h);
            if gph.is_zero() {
                continue;
            }
            let t1 = gamma[idx(j)][idx(l)][idx(p)].mul(&gamma[idx(k)][idx(m)][idx(h)]);
            let t2 = gamma[idx(j)][idx(m)][idx(p)].mul(&gamma[idx(k)][idx(l)][idx(h)]);
            out = out.add(&gph.mul(&t1.sub(&t2)));
        }
    }
    Ok(out)
}

/// Ambient Riemann component at the base point.
pub fn riemann(jets: &GaugeJets, j: u8, k: u8, l: u8, m: u8) -> Result<AtomPoly, GeometryError> {
    let gamma = christoffel_table(jets)?;
    Ok(riemann_jet(jets, &gamma, j, k, l, m)?.eval_origin())
}

/// Everything the closed forms need, evaluated at the base point.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub n: u8,
    /// Principal curvatures kappa_alpha, alpha = 1..n-1.
    pub kappa: Vec<AtomPoly>,
    /// Mean curvature H = sum kappa_alpha.
    pub mean: AtomPoly,
    /// Second fundamental form h_{ab}(x0).
    pub h: Vec<Vec<AtomPoly>>,
    /// Ambient Riemann tensor at x0, indexed [j][k][l][m] (0-based).
    pub tilde_riemann: Vec<Vec<Vec<Vec<AtomPoly>>>>,
    /// Ambient Ricci tensor at x0.
    pub tilde_ricci: Vec<Vec<AtomPoly>>,
    pub tilde_scalar: AtomPoly,
    /// Boundary Riemann tensor at x0 (tangential indices only).
    pub b_riemann: Vec<Vec<Vec<Vec<AtomPoly>>>>,
    pub b_ricci: Vec<Vec<AtomPoly>>,
    pub b_scalar: AtomPoly,
    /// (nabla_{d/dx_n} tilde-Ric)_{nn}(x0); needs order >= 3.
    pub nabla_ric_nn: Option<AtomPoly>,
    /// Laplace-Beltrami of phi at x0.
    pub laplace_phi: AtomPoly,
    /// |grad phi|^2 at x0.
    pub grad_phi_sq: AtomPoly,
    pub phi_n: AtomPoly,
    pub phi_nn: AtomPoly,
    pub phi_nnn: Option<AtomPoly>,
    pub phi_a: Vec<AtomPoly>,
    pub phi_ab: Vec<Vec<AtomPoly>>,
    /// phi_{n a a} for each tangential a; needs order >= 3.
    pub phi_naa: Option<Vec<AtomPoly>>,
    pub v0: AtomPoly,
    pub v_n: AtomPoly,
    /// d/dx_n (Laplace phi - |grad phi|^2 / 2 + 2V) at x0; needs order >= 3.
    pub normal_deriv_group: Option<AtomPoly>,
    /// Ambient constant sectional curvature when the scenario provides it.
    pub k0: Option<AtomPoly>,
}

impl CurvatureReport {
    pub fn compute(jets: &GaugeJets) -> Result<CurvatureReport, GeometryError> {
        let n = jets.dim();
        let nt = n - 1;
        let t = jets.order();
        if t < 2 {
            return Err(GeometryError::OrderTooLow("curvature report"));
        }
        let idx = |a: u8| (a - 1) as usize;

        // Second fundamental form h_{ab} = -g_{ab,n}(x0)/2, diagonal frame.
        let mut h = vec![vec![AtomPoly::zero(); nt as usize]; nt as usize];
        let mut kappa = vec![AtomPoly::zero(); nt as usize];
        for a in 1..=nt {
            for b in 1..=nt {
                let v = jets
                    .metric(a, b)
                    .deriv_at_origin(&Mi::unit(n, n))
                    .scale(&rat(-1, 2));
                if a != b && !v.is_zero() {
                    return Err(GeometryError::NonDiagonalFrame);
                }
                if a == b {
                    kappa[idx(a)] = v.clone();
                }
                h[idx(a)][idx(b)] = v;
            }
        }
        let mut mean = AtomPoly::zero();
        for k in &kappa {
            mean.add_assign(k);
        }

        let gamma = christoffel_table(jets)?;

        // Ambient curvature at x0.
        let nn = n as usize;
        let mut tilde_riemann = vec![vec![vec![vec![AtomPoly::zero(); nn]; nn]; nn]; nn];
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    for m in 1..=n {
                        tilde_riemann[idx(j)][idx(k)][idx(l)][idx(m)] =
                            riemann_jet(jets, &gamma, j, k, l, m)?.eval_origin();
                    }
                }
            }
        }
        // Ricci R_{jk} = sum_{l,m} g^{lm} R_{jlmk}; g^{lm}(x0) = delta.
        let mut tilde_ricci = vec![vec![AtomPoly::zero(); nn]; nn];
        for j in 1..=n {
            for k in 1..=n {
                let mut s = AtomPoly::zero();
                for l in 1..=n {
                    s.add_assign(&tilde_riemann[idx(j)][idx(l)][idx(l)][idx(k)]);
                }
                tilde_ricci[idx(j)][idx(k)] = s;
            }
        }
        let mut tilde_scalar = AtomPoly::zero();
        for j in 1..=n {
            tilde_scalar.add_assign(&tilde_ricci[idx(j)][idx(j)]);
        }

        // Boundary curvature, intrinsic route: restrict tangential jets and
        // run the same coordinate formulas in the n-1 tangential slots.
        let b_riemann = boundary_riemann_intrinsic(jets)?;
        // Gauss route: R_{abcd} = tilde R_{abcd} + h_{ad} h_{bc} - h_{ac} h_{bd}.
        for a in 1..=nt {
            for b in 1..=nt {
                for c in 1..=nt {
                    for d in 1..=nt {
                        let mut gauss = tilde_riemann[idx(a)][idx(b)][idx(c)][idx(d)].clone();
                        gauss.add_assign(&h[idx(a)][idx(d)].mul(&h[idx(b)][idx(c)]));
                        gauss.sub_assign(&h[idx(a)][idx(c)].mul(&h[idx(b)][idx(d)]));
                        if gauss != b_riemann[idx(a)][idx(b)][idx(c)][idx(d)] {
                            return Err(GeometryError::GaussMismatch(a, b, c, d));
                        }
                    }
                }
            }
        }
        let ntt = nt as usize;
        let mut b_ricci = vec![vec![AtomPoly::zero(); ntt]; ntt];
        for a in 1..=nt {
            for b in 1..=nt {
                let mut s = AtomPoly::zero();
                for c in 1..=nt {
                    s.add_assign(&b_riemann[idx(a)][idx(c)][idx(c)][idx(b)]);
                }
                b_ricci[idx(a)][idx(b)] = s;
            }
        }
        let mut b_scalar = AtomPoly::zero();
        for a in 1..=nt {
            b_scalar.add_assign(&b_ricci[idx(a)][idx(a)]);
        }

        // nabla_n tilde-Ric_nn: x_n-derivative of the contracted Ricci jet
        // minus the Christoffel corrections (zero in this gauge, kept for
        // the record).
        let nabla_ric_nn = if t >= 3 {
            let mut ric_nn_jet = Jet::zero(n);
            for l in 1..=n {
                for m in 1..=n {
                    let glm = jets.inverse(l, m);
                    if glm.is_zero() {
                        continue;
                    }
                    ric_nn_jet = ric_nn_jet.add(&glm.mul(&riemann_jet(jets, &gamma, n, l, m, n)?));
                }
            }
            let mut v = ric_nn_jet.derivative(n)?.eval_origin();
            for j in 1..=n {
                // -2 Gamma^j_{nn} R_{jn} at x0
                let g = gamma[idx(n)][idx(n)][idx(j)].eval_origin();
                if !g.is_zero() {
                    v.sub_assign(&g.mul(&tilde_ricci[idx(j)][idx(n)]).scale(&rat_int(2)));
                }
            }
            Some(v)
        } else {
            None
        };

        // Drift and potential scalars.
        let phi = jets.phi();
        let deriv = |dirs: &[u8]| phi.deriv_at_origin(&Mi::from_dirs(n, dirs));
        let phi_n = deriv(&[n]);
        let phi_nn = deriv(&[n, n]);
        let phi_nnn = (t >= 3).then(|| deriv(&[n, n, n]));
        let phi_a: Vec<AtomPoly> = (1..=nt).map(|a| deriv(&[a])).collect();
        let phi_ab: Vec<Vec<AtomPoly>> = (1..=nt)
            .map(|a| (1..=nt).map(|b| deriv(&[a, b])).collect())
            .collect();
        let phi_naa: Option<Vec<AtomPoly>> =
            (t >= 3).then(|| (1..=nt).map(|a| deriv(&[n, a, a])).collect());

        let laplace_phi = laplace_jet(jets, &gamma, phi)?.eval_origin();
        let mut grad_phi_sq = AtomPoly::zero();
        for j in 1..=n {
            // g^{jk}(x0) = delta
            grad_phi_sq.add_assign(&deriv(&[j]).pow(2));
        }

        let v0 = jets.potential().eval_origin();
        let v_n = jets.potential().deriv_at_origin(&Mi::unit(n, n));

        let normal_deriv_group = if t >= 3 {
            // jet of (Laplace phi - |grad phi|^2/2 + 2V), then d/dx_n at x0
            let lap = laplace_jet(jets, &gamma, phi)?;
            let mut grad = Jet::zero(n);
            for j in 1..=n {
                for k in 1..=n {
                    let gjk = jets.inverse(j, k);
                    if gjk.is_zero() {
                        continue;
                    }
                    grad = grad.add(&gjk.mul(&phi.derivative(j)?).mul(&phi.derivative(k)?));
                }
            }
            let group = lap
                .sub(&grad.scale(&rat(1, 2)))
                .add(&jets.potential().scale(&rat_int(2)));
            Some(group.derivative(n)?.eval_origin())
        } else {
            None
        };

        Ok(CurvatureReport {
            n,
            kappa,
            mean,
            h,
            tilde_riemann,
            tilde_ricci,
            tilde_scalar,
            b_riemann,
            b_ricci,
            b_scalar,
            nabla_ric_nn,
            laplace_phi,
            grad_phi_sq,
            phi_n,
            phi_nn,
            phi_nnn,
            phi_a,
            phi_ab,
            phi_naa,
            v0,
            v_n,
            normal_deriv_group,
            k0: jets.ambient_k0().cloned(),
        })
    }

    pub fn sum_kappa_sq(&self) -> AtomPoly {
        let mut s = AtomPoly::zero();
        for k in &self.kappa {
            s.add_assign(&k.pow(2));
        }
        s
    }

    pub fn sum_kappa_cu(&self) -> AtomPoly {
        let mut s = AtomPoly::zero();
        for k in &self.kappa {
            s.add_assign(&k.pow(3));
        }
        s
    }

    pub fn sum_kappa_tilde_ricci(&self) -> AtomPoly {
        let mut s = AtomPoly::zero();
        for (i, k) in self.kappa.iter().enumerate() {
            s.add_assign(&k.mul(&self.tilde_ricci[i][i]));
        }
        s
    }

    pub fn sum_kappa_b_ricci(&self) -> AtomPoly {
        let mut s = AtomPoly::zero();
        for (i, k) in self.kappa.iter().enumerate() {
            s.add_assign(&k.mul(&self.b_ricci[i][i]));
        }
        s
    }

    pub fn sum_phi_a_sq_kappa(&self) -> AtomPoly {
        let mut s = AtomPoly::zero();
        for (i, k) in self.kappa.iter().enumerate() {
            s.add_assign(&self.phi_a[i].pow(2).mul(k));
        }
        s
    }

    pub fn sum_phi_naa(&self) -> Option<AtomPoly> {
        self.phi_naa.as_ref().map(|v| {
            let mut s = AtomPoly::zero();
            for p in v {
                s.add_assign(p);
            }
            s
        })
    }

    /// The group (Laplace phi - |grad phi|^2/2 + 2V) at x0.
    pub fn group_at_origin(&self) -> AtomPoly {
        let mut g = self.laplace_phi.clone();
        g.sub_assign(&self.grad_phi_sq.scale(&rat(1, 2)));
        g.add_assign(&self.v0.scale(&rat_int(2)));
        g
    }
}

/// Laplace-Beltrami of a scalar jet:
/// sum_{j,k} g^{jk} (f_{,jk} - sum_l Gamma^l_{jk} f_{,l}).
fn laplace_jet(
    jets: &GaugeJets,
    gamma: &[Vec<Vec<Jet>>],
    f: &Jet,
) -> Result<Jet, GeometryError> {
    let n = jets.dim();
    let idx = |a: u8| (a - 1) as usize;
    let mut out = Jet::zero(n);
    for j in 1..=n {
        for k in 1..=n {
            let gjk = jets.inverse(j, k);
            if gjk.is_zero() {
                continue;
            }
            let mut term = f.derivative(j)?.derivative(k)?;
            for l in 1..=n {
                let g = &gamma[idx(j)][idx(k)][idx(l)];
                if g.is_zero() {
                    continue;
                }
                term = term.sub(&g.mul(&f.derivative(l)?));
            }
            out = out.add(&gjk.mul(&term));
        }
    }
    Ok(out)
}

/// Boundary curvature via the intrinsic coordinate formula on the restricted
/// tangential jets (which are normal coordinates for the boundary metric).
fn boundary_riemann_intrinsic(
    jets: &GaugeJets,
) -> Result<Vec<Vec<Vec<Vec<AtomPoly>>>>, GeometryError> {
    let n = jets.dim();
    let nt = n - 1;
    let idx = |a: u8| (a - 1) as usize;
    let g: Vec<Vec<Jet>> = (1..=nt)
        .map(|a| {
            (1..=nt)
                .map(|b| jets.metric(a, b).restrict_to_boundary())
                .collect()
        })
        .collect();
    // The tangential block of the ambient inverse restricts to the boundary
    // inverse because the metric block-splits.
    let ginv: Vec<Vec<Jet>> = (1..=nt)
        .map(|a| {
            (1..=nt)
                .map(|b| jets.inverse(a, b).restrict_to_boundary())
                .collect()
        })
        .collect();
    // Christoffels of the boundary metric.
    let ntt = nt as usize;
    let mut gamma = vec![vec![vec![Jet::zero(n); ntt]; ntt]; ntt];
    for j in 1..=nt {
        for k in 1..=nt {
            for l in 1..=nt {
                let mut s = Jet::zero(n);
                for m in 1..=nt {
                    let glm = &ginv[idx(l)][idx(m)];
                    if glm.is_zero() {
                        continue;
                    }
                    let d = g[idx(j)][idx(m)]
                        .derivative(k)?
                        .add(&g[idx(k)][idx(m)].derivative(j)?)
                        .sub(&g[idx(j)][idx(k)].derivative(m)?);
                    s = s.add(&glm.mul(&d));
                }
                gamma[idx(j)][idx(k)][idx(l)] = s.scale(&rat(1, 2));
            }
        }
    }
    let mut out = vec![vec![vec![vec![AtomPoly::zero(); ntt]; ntt]; ntt]; ntt];
    for j in 1..=nt {
        for k in 1..=nt {
            for l in 1..=nt {
                for m in 1..=nt {
                    let mut jet = g[idx(j)][idx(l)]
                        .derivative(k)?
                        .derivative(m)?
                        .add(&g[idx(k)][idx(m)].derivative(j)?.derivative(l)?)
                        .sub(&g[idx(j)][idx(m)].derivative(k)?.derivative(l)?)
                        .sub(&g[idx(k)][idx(l)].derivative(j)?.derivative(m)?)
                        .scale(&rat(1, 2));
                    for p in 1..=nt {
                        for hh in 1..=nt {
                            let gph = &g[idx(p)][idx(hh)];
                            if gph.is_zero() {
                                continue;
                            }
                            let t1 =
                                gamma[idx(j)][idx(l)][idx(p)].mul(&gamma[idx(k)][idx(m)][idx(hh)]);
                            let t2 =
                                gamma[idx(j)][idx(m)][idx(p)].mul(&gamma[idx(k)][idx(l)][idx(hh)]);
                            jet = jet.add(&gph.mul(&t1.sub(&t2)));
                        }
                    }
                    out[idx(j)][idx(k)][idx(l)][idx(m)] = jet.eval_origin();
                }
            }
        }
    }
    Ok(out)
}

/// Both displayed identities of the second-derivative lemma:
/// sum_a g_{aa,nn}(x0) = 3 sum kappa^2 - H^2 - tilde R + R and
/// sum_a g^{aa,nn}(x0) = 5 sum kappa^2 + H^2 + tilde R - R.
pub fn lemma21_check(jets: &GaugeJets) -> Result<bool, GeometryError> {
    let report = CurvatureReport::compute(jets)?;
    let n = jets.dim();
    let mi = Mi::from_dirs(n, &[n, n]);
    let mut lhs_g = AtomPoly::zero();
    let mut lhs_ginv = AtomPoly::zero();
    for a in 1..=n - 1 {
        lhs_g.add_assign(&jets.metric(a, a).deriv_at_origin(&mi));
        lhs_ginv.add_assign(&jets.inverse(a, a).deriv_at_origin(&mi));
    }
    let sk2 = report.sum_kappa_sq();
    let h2 = report.mean.pow(2);
    let mut rhs_g = sk2.scale(&rat_int(3));
    rhs_g.sub_assign(&h2);
    rhs_g.sub_assign(&report.tilde_scalar);
    rhs_g.add_assign(&report.b_scalar);
    let mut rhs_ginv = sk2.scale(&rat_int(5));
    rhs_ginv.add_assign(&h2);
    rhs_ginv.add_assign(&report.tilde_scalar);
    rhs_ginv.sub_assign(&report.b_scalar);
    Ok(lhs_g == rhs_g && lhs_ginv == rhs_ginv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::Atom;
    use crate::gauge::{Scenario, SfParam};

    fn random_jets(n: u8, t: u32) -> GaugeJets {
        GaugeJets::build(&Scenario::RandomGauge { seed: 0 }, n, t).unwrap()
    }

    #[test]
    fn flat_everything_vanishes() {
        let jets = GaugeJets::build(&Scenario::Flat, 3, 3).unwrap();
        let r = CurvatureReport::compute(&jets).unwrap();
        assert!(r.tilde_scalar.is_zero());
        assert!(r.b_scalar.is_zero());
        assert!(r.mean.is_zero());
        assert!(r.nabla_ric_nn.unwrap().is_zero());
        assert!(r.laplace_phi.is_zero());
        assert!(lemma21_check(&jets).unwrap());
        let g = christoffel(&jets, 1, 2, 3).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn gauge_christoffels_at_origin() {
        let jets = random_jets(4, 2);
        let n = 4u8;
        // Gamma^b_{an}(x0) = -kappa_a delta_ab
        for a in 1..=3u8 {
            for b in 1..=3u8 {
                let g = christoffel(&jets, a, n, b).unwrap().eval_origin();
                if a == b {
                    assert_eq!(g, AtomPoly::atom(Atom::kappa(a)).scale(&rat_int(-1)));
                } else {
                    assert!(g.is_zero());
                }
            }
        }
        // Gamma^k_{nn} vanishes as a full jet in this gauge
        for k in 1..=n {
            assert!(christoffel(&jets, n, n, k).unwrap().is_zero());
        }
        // Gamma^n_{aa}(x0) = kappa_a
        let g = christoffel(&jets, 1, 1, n).unwrap().eval_origin();
        assert_eq!(g, AtomPoly::atom(Atom::kappa(1)));
    }

    #[test]
    fn riemann_alpha_n_alpha_n() {
        // tilde R_{anan}(x0) = g_{aa,nn}/2 - sum_b (Gamma^b_{an})^2
        //                    = S_aa/2 - kappa_a^2
        let jets = random_jets(3, 2);
        let r = riemann(&jets, 1, 3, 1, 3).unwrap();
        let mut expect = AtomPoly::atom(Atom::second_normal(1, 1)).scale(&rat(1, 2));
        expect.sub_assign(&AtomPoly::atom(Atom::kappa(1)).pow(2));
        assert_eq!(r, expect);
    }

    #[test]
    fn riemann_symmetries_and_bianchi() {
        let jets = random_jets(4, 2);
        let r = CurvatureReport::compute(&jets).unwrap();
        let n = 4usize;
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let v = &r.tilde_riemann[j][k][l][m];
                        assert_eq!(v, &r.tilde_riemann[l][m][j][k]);
                        assert_eq!(&-v, &r.tilde_riemann[k][j][l][m]);
                        assert_eq!(&-v, &r.tilde_riemann[j][k][m][l]);
                        // first Bianchi (cyclic over k,l,m)
                        let mut s = v.clone();
                        s.add_assign(&r.tilde_riemann[j][l][m][k]);
                        s.add_assign(&r.tilde_riemann[j][m][k][l]);
                        assert!(s.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_curvature_reproduces_atoms() {
        // The intrinsic boundary curvature of a random gauge must equal the
        // free Riemann atoms that seeded the metric jets.
        let jets = random_jets(4, 2);
        let r = CurvatureReport::compute(&jets).unwrap();
        assert_eq!(r.b_riemann[0][1][0][1], AtomPoly::riemann(1, 2, 1, 2));
        assert_eq!(r.b_riemann[0][1][0][2], AtomPoly::riemann(1, 2, 1, 3));
    }

    #[test]
    fn gauss_scalar_identity() {
        // R = tilde R - 2 tilde R_nn + H^2 - sum kappa^2 identically
        for n in [3u8, 4, 5] {
            let jets = random_jets(n, 2);
            let r = CurvatureReport::compute(&jets).unwrap();
            let mut rhs = r.tilde_scalar.clone();
            rhs.sub_assign(&r.tilde_ricci[(n - 1) as usize][(n - 1) as usize].scale(&rat_int(2)));
            rhs.add_assign(&r.mean.pow(2));
            rhs.sub_assign(&r.sum_kappa_sq());
            assert_eq!(r.b_scalar, rhs, "Gauss scalar identity at n={n}");
        }
    }

    #[test]
    fn lemma21_random_gauges() {
        for n in [3u8, 4, 5, 6] {
            assert!(lemma21_check(&random_jets(n, 2)).unwrap(), "n={n}");
        }
    }

    #[test]
    fn euclidean_ball_curvature() {
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
        let r = CurvatureReport::compute(&jets).unwrap();
        // ambient curvature identically zero
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    for m in 0..3 {
                        assert!(r.tilde_riemann[j][k][l][m].is_zero());
                    }
                }
            }
        }
        // unit 2-sphere boundary: R = 2, kappa = 1
        assert_eq!(r.b_scalar, AtomPoly::constant(rat_int(2)));
        assert_eq!(r.kappa[0], AtomPoly::one());
        assert_eq!(r.mean, AtomPoly::constant(rat_int(2)));
        assert!(r.nabla_ric_nn.unwrap().is_zero());
        // general radius: R = (n-1)(n-2)/r0^2
        let jets = GaugeJets::build(
            &Scenario::EuclideanBall {
                radius: rat(2, 1),
                phi_radial: vec![],
                pot_radial: vec![],
            },
            5,
            2,
        )
        .unwrap();
        let r = CurvatureReport::compute(&jets).unwrap();
        assert_eq!(r.b_scalar, AtomPoly::constant(rat(12, 4)));
        assert_eq!(r.kappa[0], AtomPoly::constant(rat(1, 2)));
    }

    #[test]
    fn space_form_curvature() {
        let jets = GaugeJets::build(
            &Scenario::SpaceFormBall {
                curvature: SfParam::Symbolic,
                kappa: SfParam::Symbolic,
            },
            4,
            3,
        )
        .unwrap();
        let r = CurvatureReport::compute(&jets).unwrap();
        let k0 = AtomPoly::atom(Atom::k0());
        // tilde R_{jklm} = K0 (d_jm d_kl - d_jl d_km) componentwise at x0
        for j in 0..4usize {
            for k in 0..4usize {
                for l in 0..4usize {
                    for m in 0..4usize {
                        let del = |a: usize, b: usize| i64::from(a == b);
                        let expect =
                            k0.scale(&rat_int(del(j, m) * del(k, l) - del(j, l) * del(k, m)));
                        assert_eq!(r.tilde_riemann[j][k][l][m], expect, "({j},{k},{l},{m})");
                    }
                }
            }
        }
        // tilde R = n(n-1) K0
        assert_eq!(r.tilde_scalar, k0.scale(&rat_int(12)));
        // nabla_n Ric_nn = 0 for space forms
        assert!(r.nabla_ric_nn.as_ref().unwrap().is_zero());
        // sum kappa^2 = (n-1)(n-2) K0 + H^2 - R
        let mut rhs = k0.scale(&rat_int(6));
        rhs.add_assign(&r.mean.pow(2));
        rhs.sub_assign(&r.b_scalar);
        assert_eq!(r.sum_kappa_sq(), rhs);
        // sum kappa_a R_aa = H^3 + n(n-2) H K0 - H R - sum kappa^3
        let mut rhs = r.mean.pow(3);
        rhs.add_assign(&r.mean.mul(&k0).scale(&rat_int(8)));
        rhs.sub_assign(&r.mean.mul(&r.b_scalar));
        rhs.sub_assign(&r.sum_kappa_cu());
        assert_eq!(r.sum_kappa_b_ricci(), rhs);
    }

    #[test]
    fn nabla_ric_linear_in_third_jets() {
        let jets = random_jets(3, 3);
        let r = CurvatureReport::compute(&jets).unwrap();
        let v = r.nabla_ric_nn.unwrap();
        let has_third = v
            .atoms()
            .iter()
            .any(|a| a.kind() == crate::atom::AtomKind::ThirdNormal);
        assert!(has_third, "expected third-normal atoms in nabla_n Ric_nn: {v}");
    }

    #[test]
    fn phi_scalars() {
        // phi = x_n only: Laplace phi (x0) = -H, |grad phi|^2 = 1
        let mut data = crate::gauge::ExplicitData::default();
        data.phi.push((vec![3], AtomPoly::one()));
        data.metric
            .push((1, 1, vec![3], AtomPoly::constant(rat_int(-1))));
        data.metric
            .push((2, 2, vec![3], AtomPoly::constant(rat_int(-3))));
        let jets = GaugeJets::build(&Scenario::Explicit(data), 3, 2).unwrap();
        let r = CurvatureReport::compute(&jets).unwrap();
        // kappa = (1/2, 3/2), H = 2
        assert_eq!(r.mean, AtomPoly::constant(rat_int(2)));
        assert_eq!(r.laplace_phi, AtomPoly::constant(rat_int(-2)));
        assert_eq!(r.grad_phi_sq, AtomPoly::one());
        // |grad phi|^2 with phi_1 = 2, phi_n = 3
        let mut data = crate::gauge::ExplicitData::default();
        data.phi.push((vec![1], AtomPoly::constant(rat_int(2))));
        data.phi.push((vec![3], AtomPoly::constant(rat_int(3))));
        let jets = GaugeJets::build(&Scenario::Explicit(data), 3, 2).unwrap();
        let r = CurvatureReport::compute(&jets).unwrap();
        assert_eq!(r.grad_phi_sq, AtomPoly::constant(rat_int(13)));
        assert!(r.laplace_phi.is_zero());
    }
}
