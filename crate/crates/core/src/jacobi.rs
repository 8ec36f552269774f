//! The Jacobi group `G^J_n(R)`, its actions on the Siegel-Jacobi upper half
//! space and its extension, and the S_n coordinates `(x, y, X, Y, p, q, κ)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::JacobiAlgebraElement;
use crate::error::{Error, Result};
use crate::heisenberg::HeisenbergElement;
use crate::linalg::{
    cmax_abs, complex_from_parts, expm, max_abs, row_to_complex, symmetrize, CMat, CRow, Mat,
    Row, SpdMatrix, SymMatrix,
};
use crate::symplectic::{
    blocks, from_blocks, mobius_act, modified_pre_iwasawa, PreIwasawaFactors, SiegelPoint,
    SymplecticMatrix, UnitaryPair, Variant,
};

/// Tolerance for reading an embedded matrix back as a group element.
pub const EMBED_TOL: f64 = 1e-9;

/// `(M, λ, μ, κ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiElement {
    pub m: SymplecticMatrix,
    pub lambda: Row,
    pub mu: Row,
    pub kappa: f64,
}

/// `(p, q) = (λ, μ) M^{-1} = (λd^t - μc^t, -λb^t + μa^t)`.
pub fn pq_from_lm(lambda: &Row, mu: &Row, m: &SymplecticMatrix) -> (Row, Row) {
    let (a, b, c, d) = m.blocks();
    (
        lambda * d.transpose() - mu * c.transpose(),
        -(lambda * b.transpose()) + mu * a.transpose(),
    )
}

/// `(λ, μ) = (p, q) M = (pa + qc, pb + qd)`.
pub fn lm_from_pq(p: &Row, q: &Row, m: &SymplecticMatrix) -> (Row, Row) {
    let (a, b, c, d) = m.blocks();
    (p * a + q * c, p * b + q * d)
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            got: b,
        });
    }
    Ok(())
}

impl JacobiElement {
    pub fn new(m: SymplecticMatrix, lambda: Row, mu: Row, kappa: f64) -> Result<Self> {
        same_dim(m.degree(), lambda.len())?;
        same_dim(m.degree(), mu.len())?;
        Ok(Self {
            m,
            lambda,
            mu,
            kappa,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_sp(SymplecticMatrix::identity(n))
    }

    pub fn from_sp(m: SymplecticMatrix) -> Self {
        let n = m.degree();
        Self {
            m,
            lambda: Row::zeros(n),
            mu: Row::zeros(n),
            kappa: 0.0,
        }
    }

    pub fn from_heisenberg(h: &HeisenbergElement) -> Self {
        Self {
            m: SymplecticMatrix::identity(h.dim()),
            lambda: h.lambda.clone(),
            mu: h.mu.clone(),
            kappa: h.kappa,
        }
    }

    pub fn dim(&self) -> usize {
        self.m.degree()
    }

    pub fn pq(&self) -> (Row, Row) {
        pq_from_lm(&self.lambda, &self.mu, &self.m)
    }

    pub fn embed(&self) -> Mat {
        gj_embed(self)
    }

    pub fn exp(z: &JacobiAlgebraElement) -> Result<Self> {
        gj_from_embedded(&expm(&z.to_matrix()))
    }
}

/// `(MM', (λ̃ + λ', μ̃ + μ'), κ + κ' + λ̃μ'^t - μ̃λ'^t)` with `(λ̃, μ̃) = (λ, μ)M'`.
pub fn gj_compose(g: &JacobiElement, h: &JacobiElement) -> Result<JacobiElement> {
    same_dim(g.dim(), h.dim())?;
    let (lt, mt) = lm_from_pq(&g.lambda, &g.mu, &h.m);
    Ok(JacobiElement {
        m: g.m.mul(&h.m),
        kappa: g.kappa + h.kappa + lt.dot(&h.mu) - mt.dot(&h.lambda),
        lambda: lt + &h.lambda,
        mu: mt + &h.mu,
    })
}

/// `(M^{-1}, -(p, q), -κ)`.
pub fn gj_inverse(g: &JacobiElement) -> JacobiElement {
    let (p, q) = g.pq();
    JacobiElement {
        m: g.m.inverse(),
        lambda: -p,
        mu: -q,
        kappa: -g.kappa,
    }
}

/// Block matrix in `Sp(n+1, R)`, rows and columns grouped `n | 1 | n | 1`:
///
/// ```text
///     [ a  0  b   q^t ]
///     [ λ  1  μ   κ   ]
///     [ c  0  d  -p^t ]
///     [ 0  0  0   1   ]
/// ```
pub fn gj_embed(g: &JacobiElement) -> Mat {
    let n = g.dim();
    let s = 2 * n + 2;
    let (a, b, c, d) = g.m.blocks();
    let (p, q) = g.pq();
    let mut e = Mat::zeros(s, s);
    e.view_mut((0, 0), (n, n)).copy_from(&a);
    e.view_mut((0, n + 1), (n, n)).copy_from(&b);
    e.view_mut((n + 1, 0), (n, n)).copy_from(&c);
    e.view_mut((n + 1, n + 1), (n, n)).copy_from(&d);
    for i in 0..n {
        e[(n, i)] = g.lambda[i];
        e[(n, n + 1 + i)] = g.mu[i];
        e[(i, s - 1)] = q[i];
        e[(n + 1 + i, s - 1)] = -p[i];
    }
    e[(n, n)] = 1.0;
    e[(n, s - 1)] = g.kappa;
    e[(s - 1, s - 1)] = 1.0;
    e
}

/// Reads a group element from its embedding, checking the block layout.
pub fn gj_from_embedded(e: &Mat) -> Result<JacobiElement> {
    let s = e.nrows();
    if s != e.ncols() || s < 4 || !s.is_multiple_of(2) {
        return Err(Error::BadShape(format!(
            "Jacobi group matrix must be (2n+2)x(2n+2), got {}x{}",
            e.nrows(),
            e.ncols()
        )));
    }
    let n = s / 2 - 1;
    let a = e.view((0, 0), (n, n)).into_owned();
    let b = e.view((0, n + 1), (n, n)).into_owned();
    let c = e.view((n + 1, 0), (n, n)).into_owned();
    let d = e.view((n + 1, n + 1), (n, n)).into_owned();
    let m = SymplecticMatrix::new(from_blocks(&a, &b, &c, &d))?;
    let g = JacobiElement {
        m,
        lambda: Row::from_fn(n, |_, i| e[(n, i)]),
        mu: Row::from_fn(n, |_, i| e[(n, n + 1 + i)]),
        kappa: e[(n, s - 1)],
    };
    let residual = max_abs(&(e - gj_embed(&g)));
    if residual > EMBED_TOL * max_abs(e).max(1.0) {
        return Err(Error::ProjectionResidual { residual });
    }
    Ok(g)
}

/// Max entrywise distance between two group elements, via their embeddings.
pub fn gj_distance(g: &JacobiElement, h: &JacobiElement) -> f64 {
    max_abs(&(gj_embed(g) - gj_embed(h)))
}

/// Charts on the Siegel-Jacobi upper half space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// `(v, u)`, complex.
    Vu,
    /// `(x, y, p, q)` with `u = pv + q`.
    Pq,
    /// `(x, y, ξ, ρ)` with `ξ = px + q`, `ρ = py`.
    XiRho,
    /// `(x, y, χ, ψ)` with `χ = q^t`, `ψ = p^t`.
    ChiPsi,
}

/// A point `(v, u)` of the Siegel-Jacobi upper half space.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelJacobiPoint {
    pub v: SiegelPoint,
    pub u: CRow,
}

/// The same point in `(x, y, p, q)` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PqPoint {
    pub x: SymMatrix,
    pub y: SpdMatrix,
    pub p: Row,
    pub q: Row,
}

/// A point of the extended space `(x, y, p, q, κ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedPoint {
    pub base: PqPoint,
    pub kappa: f64,
}

/// A point in any of the four charts.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartPoint {
    Vu(SiegelJacobiPoint),
    Pq(PqPoint),
    XiRho {
        x: SymMatrix,
        y: SpdMatrix,
        xi: Row,
        rho: Row,
    },
    ChiPsi {
        x: SymMatrix,
        y: SpdMatrix,
        chi: nalgebra::DVector<f64>,
        psi: nalgebra::DVector<f64>,
    },
}

impl SiegelJacobiPoint {
    pub fn base(n: usize) -> Self {
        Self {
            v: SiegelPoint::base(n),
            u: CRow::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    pub fn to_pq(&self) -> PqPoint {
        // Im u = p y, Re u = p x + q
        let yi = self.v.y.inverse();
        let p = self.u.map(|z| z.im) * yi;
        let q = self.u.map(|z| z.re) - &p * self.v.x.as_mat();
        PqPoint {
            x: self.v.x.clone(),
            y: self.v.y.clone(),
            p,
            q,
        }
    }
}

impl PqPoint {
    pub fn base(n: usize) -> Self {
        Self {
            x: SymMatrix::zeros(n),
            y: SpdMatrix::identity(n),
            p: Row::zeros(n),
            q: Row::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn siegel(&self) -> SiegelPoint {
        SiegelPoint {
            x: self.x.clone(),
            y: self.y.clone(),
        }
    }

    pub fn xi(&self) -> Row {
        &self.p * self.x.as_mat() + &self.q
    }

    pub fn rho(&self) -> Row {
        &self.p * self.y.as_mat()
    }

    /// `u = pv + q`.
    pub fn to_vu(&self) -> SiegelJacobiPoint {
        let u = complex_from_parts(
            &Mat::from_row_slice(1, self.dim(), self.xi().as_slice()),
            &Mat::from_row_slice(1, self.dim(), self.rho().as_slice()),
        );
        SiegelJacobiPoint {
            v: self.siegel(),
            u: CRow::from_fn(self.dim(), |_, i| u[(0, i)]),
        }
    }

    /// `p = ρy^{-1}`, `q = ξ - ρy^{-1}x`.
    pub fn from_xi_rho(x: SymMatrix, y: SpdMatrix, xi: &Row, rho: &Row) -> Self {
        let p = rho * y.inverse();
        let q = xi - &p * x.as_mat();
        Self { x, y, p, q }
    }
}

impl ChartPoint {
    pub fn chart(&self) -> Chart {
        match self {
            ChartPoint::Vu(_) => Chart::Vu,
            ChartPoint::Pq(_) => Chart::Pq,
            ChartPoint::XiRho { .. } => Chart::XiRho,
            ChartPoint::ChiPsi { .. } => Chart::ChiPsi,
        }
    }

    pub fn to_pq(&self) -> PqPoint {
        match self {
            ChartPoint::Vu(p) => p.to_pq(),
            ChartPoint::Pq(p) => p.clone(),
            ChartPoint::XiRho { x, y, xi, rho } => {
                PqPoint::from_xi_rho(x.clone(), y.clone(), xi, rho)
            }
            ChartPoint::ChiPsi { x, y, chi, psi } => PqPoint {
                x: x.clone(),
                y: y.clone(),
                p: psi.transpose(),
                q: chi.transpose(),
            },
        }
    }

    pub fn from_pq(p: &PqPoint, chart: Chart) -> Self {
        match chart {
            Chart::Vu => ChartPoint::Vu(p.to_vu()),
            Chart::Pq => ChartPoint::Pq(p.clone()),
            Chart::XiRho => ChartPoint::XiRho {
                x: p.x.clone(),
                y: p.y.clone(),
                xi: p.xi(),
                rho: p.rho(),
            },
            Chart::ChiPsi => ChartPoint::ChiPsi {
                x: p.x.clone(),
                y: p.y.clone(),
                chi: p.q.transpose(),
                psi: p.p.transpose(),
            },
        }
    }
}

/// Converts a point between charts.
pub fn chart_convert(point: &ChartPoint, to: Chart) -> ChartPoint {
    ChartPoint::from_pq(&point.to_pq(), to)
}

/// Max entrywise distance between two points, compared in the `(v, u)` chart.
pub fn point_distance(a: &ChartPoint, b: &ChartPoint) -> f64 {
    let (a, b) = (a.to_pq().to_vu(), b.to_pq().to_vu());
    let du = (&a.u - &b.u).iter().map(|z| z.norm()).fold(0.0, f64::max);
    cmax_abs(&(a.v.v() - b.v.v())).max(du)
}

/// `v1 = M·v`, `u1 = (u + λv + μ)(cv + d)^{-1}`.
pub fn act_xjn(g: &JacobiElement, pt: &SiegelJacobiPoint) -> Result<SiegelJacobiPoint> {
    same_dim(g.dim(), pt.dim())?;
    let (_, _, c, d) = g.m.blocks();
    let v = pt.v.v();
    let den = crate::linalg::to_complex(&c) * &v + crate::linalg::to_complex(&d);
    let inv = crate::linalg::cinverse(&den).ok_or(Error::SingularDenominator)?;
    let num = &pt.u + row_to_complex(&g.lambda) * &v + row_to_complex(&g.mu);
    Ok(SiegelJacobiPoint {
        v: mobius_act(&g.m, &pt.v)?,
        u: num * inv,
    })
}

/// `(p1, q1) = (p_g, q_g) + (p', q')M^{-1}`.
pub fn act_pq(g: &JacobiElement, pt: &PqPoint) -> Result<PqPoint> {
    same_dim(g.dim(), pt.dim())?;
    let v1 = mobius_act(&g.m, &pt.siegel())?;
    let (pg, qg) = g.pq();
    let (dp, dq) = pq_from_lm(&pt.p, &pt.q, &g.m);
    Ok(PqPoint {
        x: v1.x,
        y: v1.y,
        p: pg + dp,
        q: qg + dq,
    })
}

/// `κ1 = κ + κ' + λq'^t - μp'^t` on top of [`act_pq`].
pub fn act_extended(g: &JacobiElement, pt: &ExtendedPoint) -> Result<ExtendedPoint> {
    let base = act_pq(g, &pt.base)?;
    Ok(ExtendedPoint {
        base,
        kappa: g.kappa + pt.kappa + g.lambda.dot(&pt.base.q) - g.mu.dot(&pt.base.p),
    })
}

/// S_n coordinates `(x, y, X, Y, p, q, κ)`; `(x, y, X, Y)` is the modified
/// pre-Iwasawa decomposition of `M` and `(p, q) = (λ, μ)M^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnChart {
    pub x: SymMatrix,
    pub y: SpdMatrix,
    pub unitary: UnitaryPair,
    pub p: Row,
    pub q: Row,
    pub kappa: f64,
}

impl SnChart {
    pub fn base(n: usize) -> Self {
        Self {
            x: SymMatrix::zeros(n),
            y: SpdMatrix::identity(n),
            unitary: UnitaryPair::identity(n),
            p: Row::zeros(n),
            q: Row::zeros(n),
            kappa: 0.0,
        }
    }

    /// `n = 1` with `X = cos θ`, `Y = sin θ`.
    pub fn from_angle(x: f64, y: f64, theta: f64, p: f64, q: f64, kappa: f64) -> Result<Self> {
        Ok(Self {
            x: SymMatrix::symmetrized(&Mat::from_element(1, 1, x)),
            y: SpdMatrix::new(Mat::from_element(1, 1, y))?,
            unitary: UnitaryPair::new(
                Mat::from_element(1, 1, theta.cos()),
                Mat::from_element(1, 1, theta.sin()),
            )?,
            p: Row::from_element(1, p),
            q: Row::from_element(1, q),
            kappa,
        })
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn factors(&self) -> PreIwasawaFactors {
        PreIwasawaFactors {
            x: self.x.clone(),
            y: self.y.clone(),
            unitary: self.unitary.clone(),
            variant: Variant::Modified,
        }
    }

    pub fn extended_point(&self) -> ExtendedPoint {
        ExtendedPoint {
            base: PqPoint {
                x: self.x.clone(),
                y: self.y.clone(),
                p: self.p.clone(),
                q: self.q.clone(),
            },
            kappa: self.kappa,
        }
    }
}

pub fn sn_chart(g: &JacobiElement) -> Result<SnChart> {
    let f = modified_pre_iwasawa(&g.m)?;
    let (p, q) = g.pq();
    Ok(SnChart {
        x: f.x,
        y: f.y,
        unitary: f.unitary,
        p,
        q,
        kappa: g.kappa,
    })
}

pub fn sn_chart_inverse(s: &SnChart) -> Result<JacobiElement> {
    let m = s.factors().compose()?;
    let (lambda, mu) = lm_from_pq(&s.p, &s.q, &m);
    JacobiElement::new(m, lambda, mu, s.kappa)
}

/// `v` with symmetrized real and imaginary parts, for points rebuilt from
/// perturbed coordinates.
pub fn siegel_from_parts(x: &Mat, y: &Mat) -> Result<SiegelPoint> {
    SiegelPoint::new(SymMatrix::symmetrized(x), SpdMatrix::new(symmetrize(y))?)
}

pub fn complex_row(re: &Row, im: &Row) -> CRow {
    CRow::from_fn(re.len(), |_, i| Complex64::new(re[i], im[i]))
}

pub fn cmat_blocks(m: &SymplecticMatrix) -> (CMat, CMat, CMat, CMat) {
    let (a, b, c, d) = blocks(m.as_mat());
    let t = crate::linalg::to_complex;
    (t(&a), t(&b), t(&c), t(&d))
}
