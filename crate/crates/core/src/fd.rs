//! Flat coordinates and central-difference derivatives.
//!
//! Points are flattened to `DVector`s (matrices column-major, full `n x n`
//! even when symmetric). Rebuilding a point symmetrizes symmetric blocks, so
//! maps stay smooth for perturbations slightly off the constraint set.

use nalgebra::DVector;

use crate::error::Result;
use crate::jacobi::{ChartPoint, ExtendedPoint, JacobiElement, PqPoint, SiegelJacobiPoint, SnChart};
use crate::linalg::{complex_from_parts, symmetrize, CRow, Mat, Row, SpdMatrix, SymMatrix};
use crate::symplectic::{SiegelPoint, SymplecticMatrix, UnitaryPair, DERIVED_UNITARY_TOL};

pub type Vector = DVector<f64>;

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-6;

pub trait Coords: Sized {
    fn coords(&self) -> Vector;
    /// Rebuilds a point with the same shape as `self` from `c`.
    fn with_coords(&self, c: &Vector) -> Result<Self>;
}

/// Sequential reader over a coordinate vector.
pub struct Reader<'a> {
    c: &'a Vector,
    at: usize,
}

impl<'a> Reader<'a> {
    pub fn new(c: &'a Vector) -> Self {
        Self { c, at: 0 }
    }

    pub fn mat(&mut self, r: usize, k: usize) -> Mat {
        let m = Mat::from_column_slice(r, k, &self.c.as_slice()[self.at..self.at + r * k]);
        self.at += r * k;
        m
    }

    pub fn row(&mut self, n: usize) -> Row {
        let r = Row::from_row_slice(&self.c.as_slice()[self.at..self.at + n]);
        self.at += n;
        r
    }

    pub fn scalar(&mut self) -> f64 {
        self.at += 1;
        self.c[self.at - 1]
    }
}

/// Concatenates slices into a coordinate vector.
pub fn stack(parts: &[&[f64]]) -> Vector {
    Vector::from_iterator(
        parts.iter().map(|p| p.len()).sum(),
        parts.iter().flat_map(|p| p.iter().copied()),
    )
}

pub fn siegel_from(x: Mat, y: Mat) -> Result<SiegelPoint> {
    SiegelPoint::new(SymMatrix::symmetrized(&x), SpdMatrix::new(symmetrize(&y))?)
}

impl Coords for PqPoint {
    fn coords(&self) -> Vector {
        stack(&[
            self.x.as_mat().as_slice(),
            self.y.as_mat().as_slice(),
            self.p.as_slice(),
            self.q.as_slice(),
        ])
    }

    fn with_coords(&self, c: &Vector) -> Result<Self> {
        let n = self.dim();
        let mut r = Reader::new(c);
        let v = siegel_from(r.mat(n, n), r.mat(n, n))?;
        Ok(PqPoint {
            x: v.x,
            y: v.y,
            p: r.row(n),
            q: r.row(n),
        })
    }
}

impl Coords for ExtendedPoint {
    fn coords(&self) -> Vector {
        let b = self.base.coords();
        stack(&[b.as_slice(), &[self.kappa]])
    }

    fn with_coords(&self, c: &Vector) -> Result<Self> {
        let k = c.len() - 1;
        Ok(ExtendedPoint {
            base: self.base.with_coords(&c.rows(0, k).into_owned())?,
            kappa: c[k],
        })
    }
}

impl Coords for SiegelJacobiPoint {
    fn coords(&self) -> Vector {
        let v = self.v.v();
        let re: Vec<f64> = v.iter().map(|z| z.re).collect();
        let im: Vec<f64> = v.iter().map(|z| z.im).collect();
        let ure: Vec<f64> = self.u.iter().map(|z| z.re).collect();
        let uim: Vec<f64> = self.u.iter().map(|z| z.im).collect();
        stack(&[&re, &im, &ure, &uim])
    }

    fn with_coords(&self, c: &Vector) -> Result<Self> {
        let n = self.dim();
        let mut r = Reader::new(c);
        let v = siegel_from(r.mat(n, n), r.mat(n, n))?;
        let (ure, uim) = (r.row(n), r.row(n));
        let u = complex_from_parts(
            &Mat::from_row_slice(1, n, ure.as_slice()),
            &Mat::from_row_slice(1, n, uim.as_slice()),
        );
        Ok(SiegelJacobiPoint {
            v,
            u: CRow::from_fn(n, |_, i| u[(0, i)]),
        })
    }
}

/// Matrix chart `(M, p, q, κ)` of the group.
impl Coords for JacobiElement {
    fn coords(&self) -> Vector {
        let (p, q) = self.pq();
        stack(&[
            self.m.as_mat().as_slice(),
            p.as_slice(),
            q.as_slice(),
            &[self.kappa],
        ])
    }

    fn with_coords(&self, c: &Vector) -> Result<Self> {
        let n = self.dim();
        let mut r = Reader::new(c);
        let m = SymplecticMatrix::new(r.mat(2 * n, 2 * n))?;
        let (p, q) = (r.row(n), r.row(n));
        let (lambda, mu) = crate::jacobi::lm_from_pq(&p, &q, &m);
        JacobiElement::new(m, lambda, mu, r.scalar())
    }
}

impl Coords for SnChart {
    fn coords(&self) -> Vector {
        stack(&[
            self.x.as_mat().as_slice(),
            self.y.as_mat().as_slice(),
            self.unitary.x().as_slice(),
            self.unitary.y().as_slice(),
            self.p.as_slice(),
            self.q.as_slice(),
            &[self.kappa],
        ])
    }

    fn with_coords(&self, c: &Vector) -> Result<Self> {
        let n = self.dim();
        let mut r = Reader::new(c);
        let v = siegel_from(r.mat(n, n), r.mat(n, n))?;
        let unitary = UnitaryPair::with_tol(r.mat(n, n), r.mat(n, n), DERIVED_UNITARY_TOL)?;
        Ok(SnChart {
            x: v.x,
            y: v.y,
            unitary,
            p: r.row(n),
            q: r.row(n),
            kappa: r.scalar(),
        })
    }
}

/// Layout per chart: `(Re v, Im v, Re u, Im u)`, `(x, y, p, q)`,
/// `(x, y, ξ, ρ)`, `(x, y, χ, ψ)`.
impl Coords for ChartPoint {
    fn coords(&self) -> Vector {
        match self {
            ChartPoint::Vu(p) => p.coords(),
            ChartPoint::Pq(p) => p.coords(),
            ChartPoint::XiRho { x, y, xi, rho } => stack(&[
                x.as_mat().as_slice(),
                y.as_mat().as_slice(),
                xi.as_slice(),
                rho.as_slice(),
            ]),
            ChartPoint::ChiPsi { x, y, chi, psi } => stack(&[
                x.as_mat().as_slice(),
                y.as_mat().as_slice(),
                chi.as_slice(),
                psi.as_slice(),
            ]),
        }
    }

    fn with_coords(&self, c: &Vector) -> Result<Self> {
        let n = self.to_pq().dim();
        Ok(match self {
            ChartPoint::Vu(p) => ChartPoint::Vu(p.with_coords(c)?),
            ChartPoint::Pq(p) => ChartPoint::Pq(p.with_coords(c)?),
            ChartPoint::XiRho { .. } => {
                let mut r = Reader::new(c);
                let v = siegel_from(r.mat(n, n), r.mat(n, n))?;
                ChartPoint::XiRho {
                    x: v.x,
                    y: v.y,
                    xi: r.row(n),
                    rho: r.row(n),
                }
            }
            ChartPoint::ChiPsi { .. } => {
                let mut r = Reader::new(c);
                let v = siegel_from(r.mat(n, n), r.mat(n, n))?;
                ChartPoint::ChiPsi {
                    x: v.x,
                    y: v.y,
                    chi: r.row(n).transpose(),
                    psi: r.row(n).transpose(),
                }
            }
        })
    }
}

/// `(c(p + h t) - c(p - h t)) / 2h` for a vector-valued `f`.
pub fn directional<P: Coords>(
    f: impl Fn(&P) -> Result<Vector>,
    p: &P,
    t: &Vector,
    h: f64,
) -> Result<Vector> {
    let c = p.coords();
    let plus = f(&p.with_coords(&(&c + t * h))?)?;
    let minus = f(&p.with_coords(&(&c - t * h))?)?;
    Ok((plus - minus) / (2.0 * h))
}

/// Pushforward of the tangent `t` at `p` under `f`, by central differences.
pub fn pushforward<P: Coords, Q: Coords>(
    f: impl Fn(&P) -> Result<Q>,
    p: &P,
    t: &Vector,
    h: f64,
) -> Result<Vector> {
    directional(|x| f(x).map(|y| y.coords()), p, t, h)
}
