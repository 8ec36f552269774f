//! Invariant metrics, Kähler two-forms and the transforms between the
//! Siegel-Jacobi upper half space and the Siegel-Jacobi ball.
//!
//! Two-forms are evaluated on pairs of tangents, `(α∧β)(t1, t2) = α(t1)β(t2) - α(t2)β(t1)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::{siegel_from, stack, Coords, Reader, Vector};
use crate::forms::{oneforms_sn, SnTangent};
use crate::jacobi::{ChartPoint, ExtendedPoint, PqPoint, SiegelJacobiPoint, SnChart};
use crate::linalg::{
    cexpm, cinverse, complex_from_parts, row_to_complex, symmetrize, CMat, CRow, CVec, Mat, Row,
    SYM_TOL,
};
use crate::sampling::Rng;
use crate::symplectic::SiegelPoint;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Margin kept from the boundary `|W| = 1` of the ball.
pub const BALL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl MetricParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        if !(alpha > 0.0) || beta < 0.0 || gamma < 0.0 || delta < 0.0 {
            return Err(Error::InvariantViolation(format!(
                "need alpha > 0 and beta, gamma, delta >= 0, got ({alpha}, {beta}, {gamma}, {delta})"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
        })
    }
}

impl Default for MetricParams {
    fn default() -> Self {
        Self {
            alpha: 0.75,
            beta: 0.5,
            gamma: 1.25,
            delta: 0.6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KahlerParams {
    pub k: f64,
    pub nu: f64,
}

impl KahlerParams {
    pub fn new(k: f64, nu: f64) -> Result<Self> {
        if !(k > 0.0) || !(nu > 0.0) {
            return Err(Error::InvariantViolation(format!(
                "need k > 0 and nu > 0, got ({k}, {nu})"
            )));
        }
        Ok(Self { k, nu })
    }
}

impl Default for KahlerParams {
    fn default() -> Self {
        Self { k: 3.0, nu: 1.25 }
    }
}

fn frob(a: &Mat, b: &Mat) -> f64 {
    a.component_mul(b).sum()
}

/// Polarized `Σ λ_i²` with `λ_1 = √α(λ^F + λ^G)`, `λ_2 = √α λ^H`,
/// `λ_3 = √β(λ^F - λ^G)`, `λ_4 = √γ λ^P`, `λ_5 = √γ λ^Q`, `λ_6 = √δ λ^R`.
/// Matrix squares are `tr(λ λ^t)`, so a non-symmetric `λ^H` still gives a positive term.
pub fn metric_group(
    params: &MetricParams,
    chart: &SnChart,
    t1: &SnTangent,
    t2: &SnTangent,
) -> Result<f64> {
    let a = oneforms_sn(chart, t1)?;
    let b = oneforms_sn(chart, t2)?;
    Ok(params.alpha * frob(&(&a.f + &a.g), &(&b.f + &b.g))
        + params.alpha * frob(&a.h, &b.h)
        + params.beta * frob(&(&a.f - &a.g), &(&b.f - &b.g))
        + params.gamma * (a.p.dot(&b.p) + a.q.dot(&b.q))
        + params.delta * a.r * b.r)
}

/// `tr(y^{-1} dx1 y^{-1} dx2 + y^{-1} dy1 y^{-1} dy2)`.
pub fn siegel_metric(v: &SiegelPoint, dx1: &Mat, dy1: &Mat, dx2: &Mat, dy2: &Mat) -> f64 {
    let yi = v.y.inverse();
    (&yi * dx1 * &yi * dx2 + &yi * dy1 * &yi * dy2).trace()
}

/// Ratio of `metric_group` with only `α = 1` to `tr[(y^{-1}dx)² + (y^{-1}dy)²]`
/// on a `(dx, dy)` tangent.
pub fn siegel_sector_ratio(chart: &SnChart, dx: &Mat, dy: &Mat) -> Result<f64> {
    let t = SnTangent {
        dx: dx.clone(),
        dy: dy.clone(),
        ..SnTangent::zeros(chart.dim())
    };
    let only_alpha = MetricParams::new(1.0, 0.0, 0.0, 0.0)?;
    let v = SiegelPoint {
        x: chart.x.clone(),
        y: chart.y.clone(),
    };
    Ok(metric_group(&only_alpha, chart, &t, &t)? / siegel_metric(&v, dx, dy, dx, dy))
}

/// A tangent in one of the real charts, laid out like the chart's coordinates:
/// `(dx, dy, d1, d2)` with `(d1, d2)` = `(dp, dq)`, `(dξ, dρ)`, `(dχ^t, dψ^t)`
/// or `(d Re u, d Im u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartTangent {
    pub dx: Mat,
    pub dy: Mat,
    pub d1: Row,
    pub d2: Row,
}

impl ChartTangent {
    pub fn zeros(n: usize) -> Self {
        Self {
            dx: Mat::zeros(n, n),
            dy: Mat::zeros(n, n),
            d1: Row::zeros(n),
            d2: Row::zeros(n),
        }
    }

    pub fn random(rng: &mut Rng, n: usize) -> Self {
        Self {
            dx: rng.sym(n).into_mat(),
            dy: rng.sym(n).into_mat(),
            d1: rng.row(n),
            d2: rng.row(n),
        }
    }

    pub fn to_vec(&self) -> Vector {
        stack(&[
            self.dx.as_slice(),
            self.dy.as_slice(),
            self.d1.as_slice(),
            self.d2.as_slice(),
        ])
    }

    pub fn from_vec(n: usize, v: &Vector) -> Self {
        let mut r = Reader::new(v);
        Self {
            dx: r.mat(n, n),
            dy: r.mat(n, n),
            d1: r.row(n),
            d2: r.row(n),
        }
    }
}

fn check_alpha_gamma(alpha: f64, gamma: f64) -> Result<()> {
    if !(alpha > 0.0) || gamma < 0.0 {
        return Err(Error::InvariantViolation(format!(
            "need alpha > 0 and gamma >= 0, got ({alpha}, {gamma})"
        )));
    }
    Ok(())
}

/// `dp (x y^{-1} x + y) dp'^t + dq y^{-1} dq'^t + dp x y^{-1} dq'^t + dp' x y^{-1} dq^t`.
fn pq_sector(x: &Mat, yi: &Mat, y: &Mat, dp1: &Row, dq1: &Row, dp2: &Row, dq2: &Row) -> f64 {
    let xyx = x * yi * x + y;
    (dp1 * &xyx * dp2.transpose())[0]
        + (dq1 * yi * dq2.transpose())[0]
        + (dp1 * x * yi * dq2.transpose())[0]
        + (dp2 * x * yi * dq1.transpose())[0]
}

/// The two-parameter invariant metric on the Siegel-Jacobi upper half space,
/// evaluated in the chart of `point`. The `(v, u)` chart is not supported.
pub fn metric_xjn(
    alpha: f64,
    gamma: f64,
    point: &ChartPoint,
    t1: &ChartTangent,
    t2: &ChartTangent,
) -> Result<f64> {
    check_alpha_gamma(alpha, gamma)?;
    let base = point.to_pq();
    let v = base.siegel();
    let (x, y) = (v.x.as_mat(), v.y.as_mat());
    let yi = v.y.inverse();
    let siegel = alpha * siegel_metric(&v, &t1.dx, &t1.dy, &t2.dx, &t2.dy);
    let heis = match point {
        ChartPoint::Pq(_) => pq_sector(x, &yi, y, &t1.d1, &t1.d2, &t2.d1, &t2.d2),
        // (d1, d2) = (dχ^t, dψ^t) = (dq, dp)
        ChartPoint::ChiPsi { .. } => pq_sector(x, &yi, y, &t1.d2, &t1.d1, &t2.d2, &t2.d1),
        ChartPoint::XiRho { rho, .. } => {
            let ry = rho * &yi;
            let re1 = &t1.d1 - &ry * &t1.dx;
            let im1 = &t1.d2 - &ry * &t1.dy;
            let re2 = &t2.d1 - &ry * &t2.dx;
            let im2 = &t2.d2 - &ry * &t2.dy;
            (re1 * &yi * re2.transpose())[0] + (im1 * &yi * im2.transpose())[0]
        }
        ChartPoint::Vu(_) => {
            return Err(Error::UnsupportedChart(
                "metric_xjn takes the (x,y,p,q), (x,y,ξ,ρ) or (x,y,χ,ψ) chart".into(),
            ))
        }
    };
    Ok(siegel + gamma * heis)
}

/// Tangent on the extended space, laid out like [`ExtendedPoint`] coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedTangent {
    pub base: ChartTangent,
    pub dkappa: f64,
}

impl ExtendedTangent {
    pub fn random(rng: &mut Rng, n: usize) -> Self {
        Self {
            base: ChartTangent::random(rng, n),
            dkappa: rng.unit(),
        }
    }

    pub fn to_vec(&self) -> Vector {
        stack(&[self.base.to_vec().as_slice(), &[self.dkappa]])
    }

    pub fn from_vec(n: usize, v: &Vector) -> Self {
        let k = v.len() - 1;
        Self {
            base: ChartTangent::from_vec(n, &v.rows(0, k).into_owned()),
            dkappa: v[k],
        }
    }
}

/// `λ^R = dκ - p dq^t + q dp^t` on the extended space.
pub fn lambda_r(pt: &ExtendedPoint, t: &ExtendedTangent) -> f64 {
    t.dkappa - pt.base.p.dot(&t.base.d2) + pt.base.q.dot(&t.base.d1)
}

/// [`metric_xjn`] in the `(x, y, p, q)` chart plus `δ (λ^R)²`.
pub fn metric_extended(
    alpha: f64,
    gamma: f64,
    delta: f64,
    pt: &ExtendedPoint,
    t1: &ExtendedTangent,
    t2: &ExtendedTangent,
) -> Result<f64> {
    if delta < 0.0 {
        return Err(Error::InvariantViolation(format!("need delta >= 0, got {delta}")));
    }
    let base = ChartPoint::Pq(pt.base.clone());
    Ok(metric_xjn(alpha, gamma, &base, &t1.base, &t2.base)?
        + delta * lambda_r(pt, t1) * lambda_r(pt, t2))
}

/// A two-form value and the sum of magnitudes of the terms that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoFormValue {
    pub value: Complex64,
    pub scale: f64,
}

/// Tangent in the `(v, u)` chart.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloTangent {
    pub dv: CMat,
    pub du: CRow,
}

impl HoloTangent {
    pub fn random(rng: &mut Rng, n: usize) -> Self {
        Self {
            dv: rng.complex_sym(n),
            du: rng.complex_row(n),
        }
    }

    /// Multiplication by `i`.
    pub fn rotate(&self) -> Self {
        Self {
            dv: &self.dv * I,
            du: &self.du * I,
        }
    }

    pub fn to_vec(&self) -> Vector {
        complex_vec(&self.dv, &self.du)
    }

    pub fn from_vec(n: usize, v: &Vector) -> Self {
        let (dv, du) = complex_from_vec(n, v);
        Self { dv, du }
    }

    /// The same tangent in `(dx, dy, dp, dq)`, using `u = pv + q`.
    pub fn to_pq(&self, pt: &SiegelJacobiPoint) -> ChartTangent {
        let pq = pt.to_pq();
        let yi = pq.y.inverse();
        let dx = self.dv.map(|z| z.re);
        let dy = self.dv.map(|z| z.im);
        let dp = (self.du.map(|z| z.im) - &pq.p * &dy) * &yi;
        let dq = self.du.map(|z| z.re) - &dp * pq.x.as_mat() - &pq.p * &dx;
        ChartTangent {
            dx,
            dy,
            d1: dp,
            d2: dq,
        }
    }
}

fn complex_vec(m: &CMat, r: &CRow) -> Vector {
    let re: Vec<f64> = m.iter().map(|z| z.re).collect();
    let im: Vec<f64> = m.iter().map(|z| z.im).collect();
    let rre: Vec<f64> = r.iter().map(|z| z.re).collect();
    let rim: Vec<f64> = r.iter().map(|z| z.im).collect();
    stack(&[&re, &im, &rre, &rim])
}

fn complex_from_vec(n: usize, v: &Vector) -> (CMat, CRow) {
    let mut r = Reader::new(v);
    let m = complex_from_parts(&r.mat(n, n), &r.mat(n, n));
    let (re, im) = (r.row(n), r.row(n));
    let row = CRow::from_fn(n, |_, i| Complex64::new(re[i], im[i]));
    (m, row)
}

fn inv(m: &CMat) -> Result<CMat> {
    cinverse(m).ok_or(Error::SingularDenominator)
}

fn ident(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `G^t = du - (u - ū)(v - v̄)^{-1} dv`, the row form of `G = du^t - dv(v - v̄)^{-1}(u - ū)^t`.
pub fn g_form(pt: &SiegelJacobiPoint, t: &HoloTangent) -> Result<CRow> {
    let v = pt.v.v();
    let u = &pt.u;
    let vv = &v - v.map(|z| z.conj());
    let uu = u - u.map(|z| z.conj());
    Ok(&t.du - uu * inv(&vv)? * &t.dv)
}

/// `ω` with `-iω = (k/2) tr(H∧H̄) + (2ν/i) tr(G^t D∧Ḡ)`, `D = (v̄ - v)^{-1}`, `H = D dv`.
pub fn kahler_xjn(
    kp: &KahlerParams,
    pt: &SiegelJacobiPoint,
    t1: &HoloTangent,
    t2: &HoloTangent,
) -> Result<TwoFormValue> {
    let v = pt.v.v();
    let d = inv(&(v.map(|z| z.conj()) - &v))?;
    let h1 = &d * &t1.dv;
    let h2 = &d * &t2.dv;
    let g1 = g_form(pt, t1)?;
    let g2 = g_form(pt, t2)?;
    let hh = [
        (&h1 * h2.map(|z| z.conj())).trace(),
        (&h2 * h1.map(|z| z.conj())).trace(),
    ];
    let gg = [
        (&g1 * &d * g2.map(|z| z.conj()).transpose())[0],
        (&g2 * &d * g1.map(|z| z.conj()).transpose())[0],
    ];
    let c1 = Complex64::new(kp.k / 2.0, 0.0);
    let c2 = Complex64::new(2.0 * kp.nu, 0.0) / I;
    let minus_i_omega = c1 * (hh[0] - hh[1]) + c2 * (gg[0] - gg[1]);
    let scale = kp.k / 2.0 * (hh[0].norm() + hh[1].norm())
        + 2.0 * kp.nu * (gg[0].norm() + gg[1].norm());
    Ok(TwoFormValue {
        value: I * minus_i_omega,
        scale,
    })
}

/// The symmetric form `ω(t1, i·t2)` associated with [`kahler_xjn`].
pub fn kahler_xjn_metric(
    kp: &KahlerParams,
    pt: &SiegelJacobiPoint,
    t1: &HoloTangent,
    t2: &HoloTangent,
) -> Result<f64> {
    Ok(kahler_xjn(kp, pt, t1, &t2.rotate())?.value.re)
}

/// A point `(W, z)` of the Siegel-Jacobi ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    pub w: CMat,
    pub z: CRow,
}

impl BallPoint {
    /// Checks symmetry of `W` and `1 - W W̄ > 0`.
    pub fn new(w: CMat, z: CRow) -> Result<Self> {
        if w.nrows() != w.ncols() || z.len() != w.nrows() {
            return Err(Error::BadShape(format!(
                "W is {}x{}, z has {} entries",
                w.nrows(),
                w.ncols(),
                z.len()
            )));
        }
        let defect = crate::linalg::cmax_abs(&(&w - w.transpose()));
        if defect > SYM_TOL {
            return Err(Error::NotSymmetric { defect });
        }
        if w.nrows() > 0 && w.clone().singular_values().max() >= 1.0 - BALL_TOL {
            return Err(Error::ContractionViolation);
        }
        Ok(Self { w, z })
    }

    pub fn center(n: usize) -> Self {
        Self {
            w: CMat::zeros(n, n),
            z: CRow::zeros(n),
        }
    }

    pub fn random(rng: &mut Rng, n: usize) -> Self {
        let (w, z) = crate::sampling::random_ball_point(rng, n);
        Self { w, z }
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    /// `M = (1 - W W̄)^{-1}`.
    pub fn m(&self) -> Result<CMat> {
        inv(&(ident(self.dim()) - &self.w * self.w.map(|z| z.conj())))
    }
}

impl Coords for BallPoint {
    fn coords(&self) -> Vector {
        complex_vec(&self.w, &self.z)
    }

    fn with_coords(&self, c: &Vector) -> Result<Self> {
        let (w, z) = complex_from_vec(self.dim(), c);
        let re = symmetrize(&w.map(|z| z.re));
        let im = symmetrize(&w.map(|z| z.im));
        BallPoint::new(complex_from_parts(&re, &im), z)
    }
}

/// Tangent `(dW, dz)` at a ball point.
#[derive(Debug, Clone, PartialEq)]
pub struct BallTangent {
    pub dw: CMat,
    pub dz: CRow,
}

impl BallTangent {
    pub fn random(rng: &mut Rng, n: usize) -> Self {
        Self {
            dw: rng.complex_sym(n),
            dz: rng.complex_row(n),
        }
    }

    pub fn to_vec(&self) -> Vector {
        complex_vec(&self.dw, &self.dz)
    }

    pub fn from_vec(n: usize, v: &Vector) -> Self {
        let (dw, dz) = complex_from_vec(n, v);
        Self { dw, dz }
    }
}

/// `η = M(z^t + W z†)`.
pub fn fc_transform(pt: &BallPoint) -> Result<CVec> {
    let zt = pt.z.transpose();
    Ok(pt.m()? * (&zt + &pt.w * zt.map(|z| z.conj())))
}

/// `z^t = η - W η̄`.
pub fn fc_inverse(w: &CMat, eta: &CVec) -> Result<BallPoint> {
    let zt = eta - w * eta.map(|z| z.conj());
    BallPoint::new(w.clone(), zt.transpose())
}

/// `ω` with `-iω = (k/2) tr(B∧B̄) + ν tr(A^t M̄ ∧ Ā)`,
/// `A = dz^t + dW η̄`, `B = M dW`, `M = (1 - W W̄)^{-1}`.
pub fn kahler_ball(
    kp: &KahlerParams,
    pt: &BallPoint,
    t1: &BallTangent,
    t2: &BallTangent,
) -> Result<TwoFormValue> {
    let m = pt.m()?;
    let mbar = m.map(|z| z.conj());
    let eta_bar = fc_transform(pt)?.map(|z| z.conj());
    let a = |t: &BallTangent| t.dz.transpose() + &t.dw * &eta_bar;
    let (a1, a2) = (a(t1), a(t2));
    let b1 = &m * &t1.dw;
    let b2 = &m * &t2.dw;
    let bb = [
        (&b1 * b2.map(|z| z.conj())).trace(),
        (&b2 * b1.map(|z| z.conj())).trace(),
    ];
    let aa = [
        (a1.transpose() * &mbar * a2.map(|z| z.conj()))[0],
        (a2.transpose() * &mbar * a1.map(|z| z.conj()))[0],
    ];
    let minus_i_omega =
        Complex64::new(kp.k / 2.0, 0.0) * (bb[0] - bb[1]) + Complex64::new(kp.nu, 0.0) * (aa[0] - aa[1]);
    let scale = kp.k / 2.0 * (bb[0].norm() + bb[1].norm()) + kp.nu * (aa[0].norm() + aa[1].norm());
    Ok(TwoFormValue {
        value: I * minus_i_omega,
        scale,
    })
}

/// Partial Cayley transform `W = (v + i)^{-1}(v - i)`, `z^t = 2i(v + i)^{-1} u^t`.
pub fn cayley(pt: &SiegelJacobiPoint) -> Result<BallPoint> {
    let n = pt.dim();
    let v = pt.v.v();
    let vi = inv(&(&v + ident(n) * I))?;
    let w = &vi * (&v - ident(n) * I);
    let w = (&w + w.transpose()) * Complex64::new(0.5, 0.0);
    let zt = vi * pt.u.transpose() * (I * 2.0);
    BallPoint::new(w, zt.transpose())
}

/// `v = i(1 - W)^{-1}(1 + W)`, `u^t = (1 - W)^{-1} z^t`.
pub fn cayley_inverse(pt: &BallPoint) -> Result<SiegelJacobiPoint> {
    let n = pt.dim();
    let wi = inv(&(ident(n) - &pt.w))?;
    let v = &wi * (ident(n) + &pt.w) * I;
    let u = (wi * pt.z.transpose()).transpose();
    Ok(SiegelJacobiPoint {
        v: SiegelPoint::from_complex(&v)?,
        u,
    })
}

/// `u^t = (1/2i)[(v + i)η - (v - i)η̄]`.
pub fn u_from_eta(v: &CMat, eta: &CVec) -> CRow {
    let n = v.nrows();
    let ut = ((v + ident(n) * I) * eta - (v - ident(n) * I) * eta.map(|z| z.conj())) / (I * 2.0);
    ut.transpose()
}

/// An element `(P, Q, α)` acting on the ball, with `P P† - Q Q† = 1` and `P Q^t = Q P^t`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallTransform {
    pub p: CMat,
    pub q: CMat,
    pub alpha: CRow,
}

impl BallTransform {
    /// `(P, Q)` from `exp([[A, B], [B̄, Ā]])`, `A` anti-Hermitian, `B` complex symmetric.
    pub fn random(rng: &mut Rng, n: usize) -> Self {
        let a = rng.anti_hermitian(n) * Complex64::new(0.5, 0.0);
        let b = rng.complex_sym(n) * Complex64::new(0.5, 0.0);
        let mut gen = CMat::zeros(2 * n, 2 * n);
        gen.view_mut((0, 0), (n, n)).copy_from(&a);
        gen.view_mut((0, n), (n, n)).copy_from(&b);
        gen.view_mut((n, 0), (n, n)).copy_from(&b.map(|z| z.conj()));
        gen.view_mut((n, n), (n, n)).copy_from(&a.map(|z| z.conj()));
        let e = cexpm(&gen);
        Self {
            p: e.view((0, 0), (n, n)).into_owned(),
            q: e.view((0, n), (n, n)).into_owned(),
            alpha: rng.complex_row(n),
        }
    }

    /// `max(|P P† - Q Q† - 1|, |P Q^t - Q P^t|)`.
    pub fn residual(&self) -> f64 {
        let n = self.p.nrows();
        let r1 = &self.p * self.p.adjoint() - &self.q * self.q.adjoint() - ident(n);
        let r2 = &self.p * self.q.transpose() - &self.q * self.p.transpose();
        crate::linalg::cmax_abs(&r1).max(crate::linalg::cmax_abs(&r2))
    }
}

/// `W1 = (W Q† + P†)^{-1}(Q^t + W P^t)`, `z1^t = (W Q† + P†)^{-1}(z^t + α^t - W α†)`.
pub fn act_ball(g: &BallTransform, pt: &BallPoint) -> Result<BallPoint> {
    let den = inv(&(&pt.w * g.q.adjoint() + g.p.adjoint()))?;
    let w1 = &den * (g.q.transpose() + &pt.w * g.p.transpose());
    let w1 = (&w1 + w1.transpose()) * Complex64::new(0.5, 0.0);
    let at = g.alpha.transpose();
    let z1 = den * (pt.z.transpose() + &at - &pt.w * at.map(|z| z.conj()));
    BallPoint::new(w1, z1.transpose())
}

/// Upper half space point from `v` and `u`, validating `Im v > 0`.
pub fn siegel_jacobi(v: &CMat, u: CRow) -> Result<SiegelJacobiPoint> {
    let x = v.map(|z| z.re);
    let y = v.map(|z| z.im);
    Ok(SiegelJacobiPoint {
        v: siegel_from(x, y)?,
        u,
    })
}

/// A `(dx, dy, dp, dq)` tangent in the `(v, u)` chart.
pub fn holo_from_pq(pt: &PqPoint, t: &ChartTangent) -> HoloTangent {
    // u = pv + q  =>  du = dp v + p dv + dq
    let dv = complex_from_parts(&t.dx, &t.dy);
    let v = pt.siegel().v();
    let du = row_to_complex(&t.d1) * &v + row_to_complex(&pt.p) * &dv + row_to_complex(&t.d2);
    HoloTangent { dv, du }
}
