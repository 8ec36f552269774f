//! Invariant one-forms, invariant vector fields and fundamental vector fields.
//!
//! One-form values are matrices `λ^F, λ^G, λ^H` (the `b`, `c` and `a`
//! blocks of `g^{-1} dg`), rows `λ^P, λ^Q` and the scalar `λ^R`.
//! Coefficients in the generator basis follow [`JacobiAlgebraElement::coordinates`]:
//! off-diagonal `F_ij`, `G_ij` carry `2 λ^F_ij`, `2 λ^G_ij`.

use serde::{Deserialize, Serialize};

use crate::algebra::{jacobi_generators, Generator, JacobiAlgebraElement};
use crate::error::{Error, Result};
use crate::fd::{stack, Reader, Vector};
use crate::jacobi::{
    gj_embed, gj_inverse, ExtendedPoint, JacobiElement, SnChart,
};
use crate::linalg::{
    dsqrtm, max_abs, row_to_complex, sqrtm_spd, sym_defect, to_complex, CMat, CRow, Mat, Row,
    SymMatrix,
};
use crate::symplectic::{blocks, from_blocks, j_matrix};

/// A tangent vector at `g` in the matrix chart `(M, p, q, κ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTangent {
    pub dm: Mat,
    pub dp: Row,
    pub dq: Row,
    pub dkappa: f64,
}

impl MatrixTangent {
    pub fn zeros(n: usize) -> Self {
        Self {
            dm: Mat::zeros(2 * n, 2 * n),
            dp: Row::zeros(n),
            dq: Row::zeros(n),
            dkappa: 0.0,
        }
    }

    pub fn to_vec(&self) -> Vector {
        stack(&[
            self.dm.as_slice(),
            self.dp.as_slice(),
            self.dq.as_slice(),
            &[self.dkappa],
        ])
    }

    pub fn from_vec(n: usize, v: &Vector) -> Self {
        let mut r = Reader::new(v);
        Self {
            dm: r.mat(2 * n, 2 * n),
            dp: r.row(n),
            dq: r.row(n),
            dkappa: r.scalar(),
        }
    }

    /// `|dM^t J M + M^t J dM|_max`; zero for tangents to `Sp(n, R)`.
    pub fn constraint_residual(&self, g: &JacobiElement) -> f64 {
        let j = j_matrix(g.dim());
        let m = g.m.as_mat();
        max_abs(&(self.dm.transpose() * &j * m + m.transpose() * &j * &self.dm))
    }
}

/// A tangent vector in S_n coordinates `(x, y, X, Y, p, q, κ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnTangent {
    pub dx: Mat,
    pub dy: Mat,
    pub dxx: Mat,
    pub dyy: Mat,
    pub dp: Row,
    pub dq: Row,
    pub dkappa: f64,
}

impl SnTangent {
    pub fn zeros(n: usize) -> Self {
        Self {
            dx: Mat::zeros(n, n),
            dy: Mat::zeros(n, n),
            dxx: Mat::zeros(n, n),
            dyy: Mat::zeros(n, n),
            dp: Row::zeros(n),
            dq: Row::zeros(n),
            dkappa: 0.0,
        }
    }

    pub fn to_vec(&self) -> Vector {
        stack(&[
            self.dx.as_slice(),
            self.dy.as_slice(),
            self.dxx.as_slice(),
            self.dyy.as_slice(),
            self.dp.as_slice(),
            self.dq.as_slice(),
            &[self.dkappa],
        ])
    }

    pub fn from_vec(n: usize, v: &Vector) -> Self {
        let mut r = Reader::new(v);
        Self {
            dx: r.mat(n, n),
            dy: r.mat(n, n),
            dxx: r.mat(n, n),
            dyy: r.mat(n, n),
            dp: r.row(n),
            dq: r.row(n),
            dkappa: r.scalar(),
        }
    }

    /// Tangent to the unitary pairs at `(X, Y)` generated by `X + iY -> (X + iY)(A_r + i A_i)`
    /// with `A_r + i A_i` anti-Hermitian.
    pub fn unitary_direction(chart: &SnChart, a: &CMat) -> (Mat, Mat) {
        let (x, y) = (chart.unitary.x(), chart.unitary.y());
        let ar = a.map(|z| z.re);
        let ai = a.map(|z| z.im);
        (x * &ar - y * &ai, x * &ai + y * &ar)
    }

    /// Largest violation of the tangent constraints at `chart`.
    pub fn constraint_residual(&self, chart: &SnChart) -> f64 {
        let (x, y) = (chart.unitary.x(), chart.unitary.y());
        let (dx, dy) = (&self.dxx, &self.dyy);
        let norm = dx.transpose() * x + x.transpose() * dx + dy.transpose() * y + y.transpose() * dy;
        let sym = dx.transpose() * y + x.transpose() * dy - dy.transpose() * x - y.transpose() * dx;
        [sym_defect(&self.dx), sym_defect(&self.dy), max_abs(&norm), max_abs(&sym)]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Values of `(λ^F, λ^G, λ^H, λ^P, λ^Q, λ^R)` on one tangent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct OneFormCoefficients {
    pub f: Mat,
    pub g: Mat,
    pub h: Mat,
    pub p: Row,
    pub q: Row,
    pub r: f64,
}

impl OneFormCoefficients {
    pub fn from_algebra(z: &JacobiAlgebraElement) -> Self {
        Self {
            f: z.b.as_mat().clone(),
            g: z.c.as_mat().clone(),
            h: z.a.clone(),
            p: z.p.clone(),
            q: z.q.clone(),
            r: z.r,
        }
    }

    pub fn to_algebra(&self) -> JacobiAlgebraElement {
        JacobiAlgebraElement {
            a: self.h.clone(),
            b: SymMatrix::symmetrized(&self.f),
            c: SymMatrix::symmetrized(&self.g),
            p: self.p.clone(),
            q: self.q.clone(),
            r: self.r,
        }
    }

    /// Max entrywise difference.
    pub fn distance(&self, o: &Self) -> f64 {
        [
            max_abs(&(&self.f - &o.f)),
            max_abs(&(&self.g - &o.g)),
            max_abs(&(&self.h - &o.h)),
            (&self.p - &o.p).amax(),
            (&self.q - &o.q).amax(),
            (self.r - o.r).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn magnitude(&self) -> f64 {
        [
            max_abs(&self.f),
            max_abs(&self.g),
            max_abs(&self.h),
            self.p.amax(),
            self.q.amax(),
            self.r.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Asymmetry of `λ^F` and `λ^G`.
    pub fn symmetry_defect(&self) -> f64 {
        sym_defect(&self.f).max(sym_defect(&self.g))
    }

    /// Asymmetry of `λ^H`, which is not symmetric in general.
    pub fn h_asymmetry(&self) -> f64 {
        sym_defect(&self.h)
    }
}

/// Derivative of the embedding along a matrix-chart tangent.
pub fn embed_differential(g: &JacobiElement, t: &MatrixTangent) -> Mat {
    let n = g.dim();
    let s = 2 * n + 2;
    let (a, b, c, d) = g.m.blocks();
    let (da, db, dc, dd) = blocks(&t.dm);
    let (p, q) = g.pq();
    let dl = &t.dp * &a + &p * &da + &t.dq * &c + &q * &dc;
    let dmu = &t.dp * &b + &p * &db + &t.dq * &d + &q * &dd;
    let mut e = Mat::zeros(s, s);
    e.view_mut((0, 0), (n, n)).copy_from(&da);
    e.view_mut((0, n + 1), (n, n)).copy_from(&db);
    e.view_mut((n + 1, 0), (n, n)).copy_from(&dc);
    e.view_mut((n + 1, n + 1), (n, n)).copy_from(&dd);
    for i in 0..n {
        e[(n, i)] = dl[i];
        e[(n, n + 1 + i)] = dmu[i];
        e[(i, s - 1)] = t.dq[i];
        e[(n + 1 + i, s - 1)] = -t.dp[i];
    }
    e[(n, s - 1)] = t.dkappa;
    e
}

/// Relative projection tolerance for tangents obtained by finite differences.
pub const MC_TOL: f64 = 1e-6;

/// `g^{-1} dg` on the embedded matrices, projected onto the algebra.
pub fn maurer_cartan(g: &JacobiElement, t: &MatrixTangent) -> Result<JacobiAlgebraElement> {
    maurer_cartan_with_tol(g, t, MC_TOL)
}

pub fn maurer_cartan_with_tol(
    g: &JacobiElement,
    t: &MatrixTangent,
    tol: f64,
) -> Result<JacobiAlgebraElement> {
    let omega = gj_embed(&gj_inverse(g)) * embed_differential(g, t);
    JacobiAlgebraElement::from_matrix_with_tol(&omega, tol)
}

/// Closed-form one-forms in the matrix chart:
/// `λ^F = d^t db - b^t dd`, `λ^G = -c^t da + a^t dc`, `λ^H = d^t da - b^t dc`,
/// `λ^P = dp a + dq c`, `λ^Q = dp b + dq d`, `λ^R = dκ - p dq^t + q dp^t`.
pub fn oneforms_matrix_chart(g: &JacobiElement, t: &MatrixTangent) -> OneFormCoefficients {
    let (a, b, c, d) = g.m.blocks();
    let (da, db, dc, dd) = blocks(&t.dm);
    let (p, q) = g.pq();
    OneFormCoefficients {
        f: d.transpose() * &db - b.transpose() * &dd,
        g: -(c.transpose() * &da) + a.transpose() * &dc,
        h: d.transpose() * &da - b.transpose() * &dc,
        p: &t.dp * &a + &t.dq * &c,
        q: &t.dp * &b + &t.dq * &d,
        r: t.dkappa - p.dot(&t.dq) + q.dot(&t.dp),
    }
}

/// The alternative form `λ^P = dλ - p da - q dc`.
pub fn lambda_p_alt(g: &JacobiElement, t: &MatrixTangent) -> Row {
    let (a, _, c, _) = g.m.blocks();
    let (da, _, dc, _) = blocks(&t.dm);
    let (p, q) = g.pq();
    let dl = &t.dp * &a + &p * &da + &t.dq * &c + &q * &dc;
    dl - &p * da - &q * dc
}

/// One-forms in S_n coordinates. With `s = y^{1/2}`, `L = s^{-1} ds`,
/// `R = ds s^{-1}`, `C = s^{-1} dx s^{-1}`:
///
/// ```text
/// λ^F = X^t dY - Y^t dX + X^t L Y + X^t C X + Y^t R X
/// λ^G = -X^t dY + Y^t dX + Y^t L X - Y^t C Y + X^t R Y
/// λ^H = X^t dX + Y^t dY + X^t L X - X^t C Y - Y^t R Y
/// λ^P = dp (sX - x s^{-1} Y) - dq s^{-1} Y
/// λ^Q = dq s^{-1} X + dp (sY + x s^{-1} X)
/// λ^R = dκ - dq p^t + dp q^t
/// ```
pub fn oneforms_sn(chart: &SnChart, t: &SnTangent) -> Result<OneFormCoefficients> {
    let s = sqrtm_spd(&chart.y);
    let si = s.inverse();
    let ds = dsqrtm(&chart.y, &SymMatrix::symmetrized(&t.dy))?;
    let (s, ds) = (s.as_mat(), ds.as_mat());
    let x = chart.x.as_mat();
    let (xx, yy) = (chart.unitary.x(), chart.unitary.y());
    let (xt, yt) = (xx.transpose(), yy.transpose());
    let l = &si * ds;
    let r = ds * &si;
    let c = &si * &t.dx * &si;
    Ok(OneFormCoefficients {
        f: &xt * &t.dyy - &yt * &t.dxx + &xt * &l * yy + &xt * &c * xx + &yt * &r * xx,
        g: -(&xt * &t.dyy) + &yt * &t.dxx + &yt * &l * xx - &yt * &c * yy + &xt * &r * yy,
        h: &xt * &t.dxx + &yt * &t.dyy + &xt * &l * xx - &xt * &c * yy - &yt * &r * yy,
        p: &t.dp * (s * xx - x * &si * yy) - &t.dq * &si * yy,
        q: &t.dq * &si * xx + &t.dp * (s * yy + x * &si * xx),
        r: t.dkappa - t.dq.dot(&chart.p) + t.dp.dot(&chart.q),
    })
}

/// A point of `G^J_1(R)` in coordinates `(x, y, θ, p, q, κ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct N1Point {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub p: f64,
    pub q: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct N1Tangent {
    pub dx: f64,
    pub dy: f64,
    pub dtheta: f64,
    pub dp: f64,
    pub dq: f64,
    pub dkappa: f64,
}

impl N1Point {
    pub fn chart(&self) -> Result<SnChart> {
        SnChart::from_angle(self.x, self.y, self.theta, self.p, self.q, self.kappa)
    }
}

impl N1Tangent {
    pub fn sn_tangent(&self, pt: &N1Point) -> SnTangent {
        let e = |v: f64| Mat::from_element(1, 1, v);
        SnTangent {
            dx: e(self.dx),
            dy: e(self.dy),
            dxx: e(-pt.theta.sin() * self.dtheta),
            dyy: e(pt.theta.cos() * self.dtheta),
            dp: Row::from_element(1, self.dp),
            dq: Row::from_element(1, self.dq),
            dkappa: self.dkappa,
        }
    }
}

/// Scalar one-forms on `G^J_1(R)`.
pub fn oneforms_n1(pt: &N1Point, t: &N1Tangent) -> Result<OneFormCoefficients> {
    if pt.y <= 0.0 {
        return Err(Error::NotSpd);
    }
    let (x, y, th) = (pt.x, pt.y, pt.theta);
    let (sn, cs) = th.sin_cos();
    let (s2, c2) = (2.0 * th).sin_cos();
    let sy = y.sqrt();
    let e = |v: f64| Mat::from_element(1, 1, v);
    Ok(OneFormCoefficients {
        f: e(t.dx / y * cs * cs + t.dy / (2.0 * y) * s2 + t.dtheta),
        g: e(-t.dx / y * sn * sn + t.dy / (2.0 * y) * s2 - t.dtheta),
        h: e(-t.dx / (2.0 * y) * s2 + t.dy / (2.0 * y) * c2),
        p: Row::from_element(1, t.dp * (sy * cs - x * sn / sy) - t.dq * sn / sy),
        q: Row::from_element(1, t.dq * cs / sy + t.dp * (sy * sn + x * cs / sy)),
        r: t.dkappa - t.dq * pt.p + t.dp * pt.q,
    })
}

/// The left-invariant field of `z` at `g`: the tangent of `t -> g exp(tz)`.
pub fn invariant_field(g: &JacobiElement, z: &JacobiAlgebraElement) -> MatrixTangent {
    let n = g.dim();
    let s = 2 * n + 2;
    let de = gj_embed(g) * z.to_matrix();
    let dm = from_blocks(
        &de.view((0, 0), (n, n)).into_owned(),
        &de.view((0, n + 1), (n, n)).into_owned(),
        &de.view((n + 1, 0), (n, n)).into_owned(),
        &de.view((n + 1, n + 1), (n, n)).into_owned(),
    );
    let dl = Row::from_fn(2 * n, |_, i| if i < n { de[(n, i)] } else { de[(n, i + 1)] });
    let (p, q) = g.pq();
    let pq = Row::from_fn(2 * n, |_, i| if i < n { p[i] } else { q[i - n] });
    // (dλ, dμ) = (dp, dq) M + (p, q) dM
    let dpq = (dl - pq * &dm) * g.m.inverse().as_mat();
    MatrixTangent {
        dm,
        dp: Row::from_fn(n, |_, i| dpq[i]),
        dq: Row::from_fn(n, |_, i| dpq[n + i]),
        dkappa: de[(n, s - 1)],
    }
}

/// `L^β` at `g` for a basis generator `β`.
pub fn invariant_vf(g: &JacobiElement, gen: Generator) -> MatrixTangent {
    invariant_field(g, &JacobiAlgebraElement::generator(g.dim(), gen))
}

/// Matrix of basis coefficients `λ^α(L^β)` over all generators `α, β`.
pub fn duality_table(g: &JacobiElement) -> Result<Mat> {
    let gens = jacobi_generators(g.dim());
    let k = gens.len();
    let mut t = Mat::zeros(k, k);
    for (j, &b) in gens.iter().enumerate() {
        let c = maurer_cartan(g, &invariant_vf(g, b))?.coordinates();
        for i in 0..k {
            t[(i, j)] = c[i];
        }
    }
    Ok(t)
}

/// Families of invariant objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    F,
    G,
    H,
    P,
    Q,
    R,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::F, Family::G, Family::H, Family::P, Family::Q, Family::R];

    pub fn of(g: Generator) -> Self {
        match g {
            Generator::F(..) => Family::F,
            Generator::G(..) => Family::G,
            Generator::H(..) => Family::H,
            Generator::P(_) => Family::P,
            Generator::Q(_) => Family::Q,
            Generator::R => Family::R,
        }
    }
}

/// Max deviation of each `6 x 6` family block of the duality table from
/// the identity (diagonal blocks) or zero (off-diagonal blocks).
pub fn duality_blocks(g: &JacobiElement) -> Result<[[f64; 6]; 6]> {
    let gens = jacobi_generators(g.dim());
    let t = duality_table(g)?;
    let mut out = [[0.0; 6]; 6];
    for (i, &a) in gens.iter().enumerate() {
        for (j, &b) in gens.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            let fa = Family::ALL.iter().position(|&f| f == Family::of(a)).unwrap();
            let fb = Family::ALL.iter().position(|&f| f == Family::of(b)).unwrap();
            out[fa][fb] = f64::max(out[fa][fb], (t[(i, j)] - want).abs());
        }
    }
    Ok(out)
}

/// The `(a, b, c, d)` assignments `L^F: (0, a, 0, c)`, `L^G: (b, b, d, d)`,
/// `L^H: (a, b, c, d)` read literally as matrix-valued tangents.
pub fn literal_sp_field(g: &JacobiElement, family: Family) -> Result<Mat> {
    let (a, b, c, d) = g.m.blocks();
    let z = Mat::zeros(a.nrows(), a.ncols());
    match family {
        Family::F => Ok(from_blocks(&z, &a, &z, &c)),
        Family::G => Ok(from_blocks(&b, &b, &d, &d)),
        Family::H => Ok(from_blocks(&a, &b, &c, &d)),
        other => Err(Error::InvariantViolation(format!(
            "no literal matrix assignment for {other:?}"
        ))),
    }
}

/// Substitutes a matrix-valued tangent into `λ^F, λ^G, λ^H` (as matrix products).
pub fn sp_forms_on_blocks(g: &JacobiElement, dm: &Mat) -> (Mat, Mat, Mat) {
    let t = MatrixTangent {
        dm: dm.clone(),
        ..MatrixTangent::zeros(g.dim())
    };
    let w = oneforms_matrix_chart(g, &t);
    (w.f, w.g, w.h)
}

/// Spaces on which fundamental vector fields are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FvfSpace {
    XjnHolo,
    XjnRealXirho,
    XjnPq,
    ExtendedXirho,
    ExtendedPq,
}

impl FvfSpace {
    pub const ALL: [FvfSpace; 5] = [
        FvfSpace::XjnHolo,
        FvfSpace::XjnRealXirho,
        FvfSpace::XjnPq,
        FvfSpace::ExtendedXirho,
        FvfSpace::ExtendedPq,
    ];

    pub fn extended(self) -> bool {
        matches!(self, FvfSpace::ExtendedXirho | FvfSpace::ExtendedPq)
    }
}

/// Coordinates of a point in the chart of `space`:
/// holo `(Re v, Im v, Re u, Im u)`, xirho `(x, y, ξ, ρ)`, pq `(x, y, p, q)`,
/// extended charts append `κ`.
pub fn space_coords(space: FvfSpace, pt: &ExtendedPoint) -> Vector {
    use crate::fd::Coords;
    let b = &pt.base;
    let base = match space {
        FvfSpace::XjnHolo => b.to_vu().coords(),
        FvfSpace::XjnRealXirho | FvfSpace::ExtendedXirho => stack(&[
            b.x.as_mat().as_slice(),
            b.y.as_mat().as_slice(),
            b.xi().as_slice(),
            b.rho().as_slice(),
        ]),
        FvfSpace::XjnPq | FvfSpace::ExtendedPq => b.coords(),
    };
    if space.extended() {
        stack(&[base.as_slice(), &[pt.kappa]])
    } else {
        base
    }
}

/// A fundamental vector field value, laid out like [`space_coords`].
#[derive(Debug, Clone, PartialEq)]
pub enum FvfTangent {
    Holo { dv: CMat, du: CRow },
    Real {
        dx: Mat,
        dy: Mat,
        d1: Row,
        d2: Row,
        dkappa: Option<f64>,
    },
}

impl FvfTangent {
    pub fn to_vec(&self) -> Vector {
        match self {
            FvfTangent::Holo { dv, du } => {
                let re: Vec<f64> = dv.iter().map(|z| z.re).collect();
                let im: Vec<f64> = dv.iter().map(|z| z.im).collect();
                let ure: Vec<f64> = du.iter().map(|z| z.re).collect();
                let uim: Vec<f64> = du.iter().map(|z| z.im).collect();
                stack(&[&re, &im, &ure, &uim])
            }
            FvfTangent::Real {
                dx,
                dy,
                d1,
                d2,
                dkappa,
            } => {
                let v = stack(&[dx.as_slice(), dy.as_slice(), d1.as_slice(), d2.as_slice()]);
                match dkappa {
                    Some(k) => stack(&[v.as_slice(), &[*k]]),
                    None => v,
                }
            }
        }
    }
}

/// `d/dt|_0` of the action of `exp(tZ)` on `pt`, in the chart of `space`.
///
/// With `Z = (A, B, C, p_Z, q_Z, r)`:
/// `dv = Av + vA^t + B - vCv`, `du = p_Z v + q_Z + uA^t - uCv`,
/// `dp = p_Z - pA - qC`, `dq = q_Z - pB + qA^t`, `dκ = r + p_Z q^t - q_Z p^t`.
pub fn fvf(z: &JacobiAlgebraElement, pt: &ExtendedPoint, space: FvfSpace) -> Result<FvfTangent> {
    let b = &pt.base;
    if z.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            got: z.dim(),
        });
    }
    let (a, bb, c) = (&z.a, z.b.as_mat(), z.c.as_mat());
    let vu = b.to_vu();
    let v = vu.v.v();
    let (ac, bc, cc) = (to_complex(a), to_complex(bb), to_complex(c));
    let dv = &ac * &v + &v * ac.transpose() + &bc - &v * &cc * &v;
    let du = row_to_complex(&z.p) * &v + row_to_complex(&z.q) + &vu.u * ac.transpose()
        - &vu.u * &cc * &v;
    let dp = &z.p - &b.p * a - &b.q * c;
    let dq = &z.q - &b.p * bb + &b.q * a.transpose();
    let dkappa = z.r + z.p.dot(&b.q) - z.q.dot(&b.p);
    let re = |m: &CMat| m.map(|w| w.re);
    let im = |m: &CMat| m.map(|w| w.im);
    let kappa = space.extended().then_some(dkappa);
    Ok(match space {
        FvfSpace::XjnHolo => FvfTangent::Holo { dv, du },
        FvfSpace::XjnRealXirho | FvfSpace::ExtendedXirho => FvfTangent::Real {
            dx: re(&dv),
            dy: im(&dv),
            d1: du.map(|w| w.re),
            d2: du.map(|w| w.im),
            dkappa: kappa,
        },
        FvfSpace::XjnPq | FvfSpace::ExtendedPq => FvfTangent::Real {
            dx: re(&dv),
            dy: im(&dv),
            d1: dp,
            d2: dq,
            dkappa: kappa,
        },
    })
}

pub fn fvf_generator(gen: Generator, pt: &ExtendedPoint, space: FvfSpace) -> Result<FvfTangent> {
    fvf(&JacobiAlgebraElement::generator(pt.base.dim(), gen), pt, space)
}

/// Central difference of `t -> space_coords(exp(tZ) · pt)` at `t = 0`.
pub fn fvf_by_action(
    z: &JacobiAlgebraElement,
    pt: &ExtendedPoint,
    space: FvfSpace,
    h: f64,
) -> Result<Vector> {
    let moved = |s: f64| -> Result<Vector> {
        let g = JacobiElement::exp(&z.scale(s))?;
        Ok(space_coords(space, &crate::jacobi::act_extended(&g, pt)?))
    };
    Ok((moved(h)? - moved(-h)?) / (2.0 * h))
}

/// Result of comparing brackets of fundamental fields with the structure constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FvfBracketCheck {
    /// `+1` or `-1`: `[Z1*, Z2*] = sign · [Z1, Z2]*`.
    pub sign: f64,
    pub max_residual: f64,
    pub opposite_sign_residual: f64,
    pub pairs: usize,
}

/// Lie brackets of the fields `Z*` on the extended `(x, y, p, q, κ)` chart,
/// by nested central differences, against `±[Z1, Z2]*` for all basis pairs.
pub fn fvf_bracket_check(pt: &ExtendedPoint, h: f64) -> Result<FvfBracketCheck> {
    use crate::fd::directional;
    let n = pt.base.dim();
    let gens = jacobi_generators(n);
    let field = |z: &JacobiAlgebraElement, p: &ExtendedPoint| -> Result<Vector> {
        Ok(fvf(z, p, FvfSpace::ExtendedPq)?.to_vec())
    };
    let mut plus: f64 = 0.0;
    let mut minus: f64 = 0.0;
    let mut pairs = 0;
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            let za = JacobiAlgebraElement::generator(n, a);
            let zb = JacobiAlgebraElement::generator(n, b);
            let va = field(&za, pt)?;
            let vb = field(&zb, pt)?;
            // [V_a, V_b] = D V_b · V_a - D V_a · V_b
            let dvb = directional(|p: &ExtendedPoint| field(&zb, p), pt, &va, h)?;
            let dva = directional(|p: &ExtendedPoint| field(&za, p), pt, &vb, h)?;
            let lie = dvb - dva;
            let expect = field(&crate::algebra::gj_bracket(&za, &zb)?, pt)?;
            plus = plus.max((&lie - &expect).amax());
            minus = minus.max((&lie + &expect).amax());
            pairs += 1;
        }
    }
    let (sign, max_residual, opposite) = if minus <= plus {
        (-1.0, minus, plus)
    } else {
        (1.0, plus, minus)
    };
    Ok(FvfBracketCheck {
        sign,
        max_residual,
        opposite_sign_residual: opposite,
        pairs,
    })
}
