//! `Sp(n, R)`, its Lie algebra, the Siegel upper half space and the
//! pre-Iwasawa decompositions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{sp_generators, Generator, JacobiAlgebraElement};
use crate::error::{Error, Result};
use crate::linalg::{
    cinverse, cmax_abs, complex_from_parts, expm, max_abs, spd_power, sqrtm_spd, symmetrize,
    to_complex, CMat, Mat, SpdMatrix, SymMatrix,
};

/// Tolerance on `|M^t J M - J|`, scaled by `max(1, |M|^2)`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;
pub const DET_TOL: f64 = 1e-8;
pub const UNITARY_TOL: f64 = 1e-10;
/// Looser bound used when a unitary pair is produced by a decomposition.
pub const DERIVED_UNITARY_TOL: f64 = 1e-8;

/// `J_n = (0, I; -I, 0)`.
pub fn j_matrix(n: usize) -> Mat {
    let mut j = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

fn even_square(m: &Mat) -> Result<usize> {
    if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) || m.nrows() == 0 {
        return Err(Error::BadShape(format!(
            "expected a nonempty 2n x 2n matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows() / 2)
}

/// `|M^t J M - J|_max`.
pub fn symplectic_residual(m: &Mat) -> Result<f64> {
    let n = even_square(m)?;
    let j = j_matrix(n);
    Ok(max_abs(&(m.transpose() * &j * m - j)))
}

pub fn is_symplectic(m: &Mat, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(m)? <= tol)
}

/// Blocks `(a, b, c, d)` of a `2n x 2n` matrix.
pub fn blocks(m: &Mat) -> (Mat, Mat, Mat, Mat) {
    let n = m.nrows() / 2;
    (
        m.view((0, 0), (n, n)).into_owned(),
        m.view((0, n), (n, n)).into_owned(),
        m.view((n, 0), (n, n)).into_owned(),
        m.view((n, n), (n, n)).into_owned(),
    )
}

pub fn from_blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
    let n = a.nrows();
    let mut m = Mat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// Largest residual over both equivalent sets of block relations.
pub fn block_relation_residual(m: &Mat) -> Result<f64> {
    let n = even_square(m)?;
    let (a, b, c, d) = blocks(m);
    let id = Mat::identity(n, n);
    let rows = [
        &a * b.transpose() - &b * a.transpose(),
        &a * d.transpose() - &b * c.transpose() - &id,
        &c * d.transpose() - &d * c.transpose(),
        a.transpose() * &c - c.transpose() * &a,
        a.transpose() * &d - c.transpose() * &b - &id,
        b.transpose() * &d - d.transpose() * &b,
    ];
    Ok(rows.iter().map(max_abs).fold(0.0, f64::max))
}

pub fn check_block_relations(m: &Mat, tol: f64) -> Result<bool> {
    Ok(block_relation_residual(m)? <= tol)
}

/// A validated element of `Sp(n, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix(Mat);

impl SymplecticMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        let residual = symplectic_residual(&m)?;
        let scale = max_abs(&m).powi(2).max(1.0);
        if residual > SYMPLECTIC_TOL * scale {
            return Err(Error::NotSymplectic { residual });
        }
        let det = m.clone().determinant();
        if (det - 1.0).abs() > DET_TOL * scale.powi(m.nrows() as i32 / 2) {
            return Err(Error::NotSymplectic {
                residual: (det - 1.0).abs(),
            });
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(Mat::identity(2 * n, 2 * n))
    }

    pub fn j(n: usize) -> Self {
        Self(j_matrix(n))
    }

    pub fn degree(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    pub fn blocks(&self) -> (Mat, Mat, Mat, Mat) {
        blocks(&self.0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self(&self.0 * &o.0)
    }

    /// Block inverse `(d^t, -b^t; -c^t, a^t)`.
    pub fn inverse(&self) -> Self {
        let (a, b, c, d) = self.blocks();
        Self(from_blocks(
            &d.transpose(),
            &(-b.transpose()),
            &(-c.transpose()),
            &a.transpose(),
        ))
    }
}

pub fn sp_inverse(m: &SymplecticMatrix) -> SymplecticMatrix {
    m.inverse()
}

/// An element `(a, b; c, -a^t)` of `sp(n, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpAlgebraElement {
    pub a: Mat,
    pub b: SymMatrix,
    pub c: SymMatrix,
}

impl SpAlgebraElement {
    pub fn zeros(n: usize) -> Self {
        Self {
            a: Mat::zeros(n, n),
            b: SymMatrix::zeros(n),
            c: SymMatrix::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn generator(n: usize, g: Generator) -> Result<Self> {
        if !g.is_symplectic() {
            return Err(Error::InvariantViolation(format!("{g} is not in sp(n)")));
        }
        Ok(Self::from(&JacobiAlgebraElement::generator(n, g)))
    }

    pub fn to_matrix(&self) -> Mat {
        from_blocks(
            &self.a,
            self.b.as_mat(),
            self.c.as_mat(),
            &(-self.a.transpose()),
        )
    }

    pub fn from_matrix(z: &Mat) -> Result<Self> {
        even_square(z)?;
        let (a, b, c, d) = blocks(z);
        let el = Self {
            a,
            b: SymMatrix::symmetrized(&b),
            c: SymMatrix::symmetrized(&c),
        };
        let residual = max_abs(&(z - el.to_matrix())).max(max_abs(&(d + el.a.transpose())));
        if residual > 1e-10 * max_abs(z).max(1.0) {
            return Err(Error::ProjectionResidual { residual });
        }
        Ok(el)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            a: &self.a * s,
            b: SymMatrix::symmetrized(&(self.b.as_mat() * s)),
            c: SymMatrix::symmetrized(&(self.c.as_mat() * s)),
        }
    }

    pub fn exp(&self) -> Result<SymplecticMatrix> {
        SymplecticMatrix::new(expm(&self.to_matrix()))
    }
}

impl From<&JacobiAlgebraElement> for SpAlgebraElement {
    fn from(z: &JacobiAlgebraElement) -> Self {
        Self {
            a: z.a.clone(),
            b: z.b.clone(),
            c: z.c.clone(),
        }
    }
}

/// The `2n^2 + n` generators `H_ij`, `F_ij`, `G_ij` of `sp(n, R)`.
pub fn sp_basis(n: usize) -> Vec<(Generator, SpAlgebraElement)> {
    sp_generators(n)
        .into_iter()
        .map(|g| (g, SpAlgebraElement::from(&JacobiAlgebraElement::generator(n, g))))
        .collect()
}

/// `(X, Y)` with `X + iY` unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryPair {
    x: Mat,
    y: Mat,
}

impl UnitaryPair {
    pub fn new(x: Mat, y: Mat) -> Result<Self> {
        Self::with_tol(x, y, UNITARY_TOL)
    }

    pub fn with_tol(x: Mat, y: Mat, tol: f64) -> Result<Self> {
        if x.shape() != y.shape() || x.nrows() != x.ncols() {
            return Err(Error::BadShape("unitary pair blocks must be equal square".into()));
        }
        let p = Self { x, y };
        let r = p.residual();
        if r > tol {
            return Err(Error::InvariantViolation(format!(
                "unitary pair residual {r:.3e}"
            )));
        }
        Ok(p)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            x: Mat::identity(n, n),
            y: Mat::zeros(n, n),
        }
    }

    pub fn from_unitary(u: &CMat) -> Result<Self> {
        Self::new(u.map(|z| z.re), u.map(|z| z.im))
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    pub fn y(&self) -> &Mat {
        &self.y
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn residual(&self) -> f64 {
        let (x, y) = (&self.x, &self.y);
        let id = Mat::identity(x.nrows(), x.nrows());
        [
            x.transpose() * x + y.transpose() * y - &id,
            x.transpose() * y - y.transpose() * x,
            x * x.transpose() + y * y.transpose() - &id,
            y * x.transpose() - x * y.transpose(),
        ]
        .iter()
        .map(max_abs)
        .fold(0.0, f64::max)
    }

    /// The orthogonal symplectic matrix `(X, Y; -Y, X)`.
    pub fn to_symplectic(&self) -> Mat {
        from_blocks(&self.x, &self.y, &(-&self.y), &self.x)
    }

    pub fn from_symplectic(m: &Mat) -> Result<Self> {
        even_square(m)?;
        let (a, b, c, d) = blocks(m);
        let defect = max_abs(&(&a - &d)).max(max_abs(&(&b + &c)));
        if defect > UNITARY_TOL {
            return Err(Error::InvariantViolation(format!(
                "matrix is not of the form (X, Y; -Y, X), defect {defect:.3e}"
            )));
        }
        Self::new(a, b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            x: &self.x * &o.x - &self.y * &o.y,
            y: &self.x * &o.y + &self.y * &o.x,
        }
    }
}

/// `(X, Y) -> X + iY`, an isomorphism `Sp(n, R) ∩ O(2n) -> U(n)`.
pub fn unitary_iso(p: &UnitaryPair) -> CMat {
    complex_from_parts(&p.x, &p.y)
}

pub fn unitary_iso_inverse(u: &CMat) -> Result<UnitaryPair> {
    UnitaryPair::from_unitary(u)
}

/// A point `v = x + iy` of the Siegel upper half space.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    pub x: SymMatrix,
    pub y: SpdMatrix,
}

impl SiegelPoint {
    pub fn new(x: SymMatrix, y: SpdMatrix) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch {
                expected: x.dim(),
                got: y.dim(),
            });
        }
        Ok(Self { x, y })
    }

    /// `i I`.
    pub fn base(n: usize) -> Self {
        Self {
            x: SymMatrix::zeros(n),
            y: SpdMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn v(&self) -> CMat {
        complex_from_parts(self.x.as_mat(), self.y.as_mat())
    }

    /// Accepts a numerically computed `v`, symmetrizing its parts.
    pub fn from_complex(v: &CMat) -> Result<Self> {
        let x = v.map(|z| z.re);
        let y = v.map(|z| z.im);
        Ok(Self {
            x: SymMatrix::symmetrized(&x),
            y: SpdMatrix::new(symmetrize(&y))?,
        })
    }
}

fn denominator_inverse(den: &CMat) -> Result<CMat> {
    let inv = cinverse(den).ok_or(Error::SingularDenominator)?;
    if !inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::SingularDenominator);
    }
    Ok(inv)
}

/// `(av + b)(cv + d)^{-1}`.
pub fn mobius_act(m: &SymplecticMatrix, v: &SiegelPoint) -> Result<SiegelPoint> {
    let (a, b, c, d) = m.blocks();
    let vc = v.v();
    let num = to_complex(&a) * &vc + to_complex(&b);
    let den = to_complex(&c) * &vc + to_complex(&d);
    SiegelPoint::from_complex(&(num * denominator_inverse(&den)?))
}

/// `(v c^t + d^t)^{-1}(v a^t + b^t)`.
pub fn mobius_act_left(m: &SymplecticMatrix, v: &SiegelPoint) -> Result<SiegelPoint> {
    let (a, b, c, d) = m.blocks();
    let vc = v.v();
    let num = &vc * to_complex(&a.transpose()) + to_complex(&b.transpose());
    let den = &vc * to_complex(&c.transpose()) + to_complex(&d.transpose());
    SiegelPoint::from_complex(&(denominator_inverse(&den)? * num))
}

/// `(v̄ c^t + d^t)^{-1} (B/2 + i y) (cv + d)^{-1}` with
/// `B = 2 v̄ a^t c v + v̄(c^t b + a^t d) + (b^t c + d^t a) v + 2 b^t d`.
pub fn mobius_act_hermitian(m: &SymplecticMatrix, v: &SiegelPoint) -> Result<SiegelPoint> {
    let (a, b, c, d) = m.blocks();
    let (ac, bc, cc, dc) = (to_complex(&a), to_complex(&b), to_complex(&c), to_complex(&d));
    let vv = v.v();
    let vb = vv.map(|z| z.conj());
    let two = Complex64::new(2.0, 0.0);
    let big_b = &vb * ac.transpose() * &cc * &vv * two
        + &vb * (cc.transpose() * &bc + ac.transpose() * &dc)
        + (bc.transpose() * &cc + dc.transpose() * &ac) * &vv
        + bc.transpose() * &dc * two;
    let left = denominator_inverse(&(&vb * cc.transpose() + dc.transpose()))?;
    let right = denominator_inverse(&(&cc * &vv + &dc))?;
    let mid = big_b * Complex64::new(0.5, 0.0) + to_complex(v.y.as_mat()) * Complex64::i();
    SiegelPoint::from_complex(&(left * mid * right))
}

/// `M_{x+iy} = (√y, x √y^{-1}; 0, √y^{-1})`, which sends `iI` to `x + iy`.
pub fn m_point(x: &SymMatrix, y: &SpdMatrix) -> Result<SymplecticMatrix> {
    let s = sqrtm_spd(y);
    let si = s.inverse();
    let n = x.dim();
    SymplecticMatrix::new(from_blocks(
        s.as_mat(),
        &(x.as_mat() * &si),
        &Mat::zeros(n, n),
        &si,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Modified,
}

/// `M = (I, x; 0, I) · diag(s, s^{-1}) · (X, Y; -Y, X)` where `s = y`
/// (plain) or `s = y^{1/2}` (modified).
#[derive(Debug, Clone, PartialEq)]
pub struct PreIwasawaFactors {
    pub x: SymMatrix,
    pub y: SpdMatrix,
    pub unitary: UnitaryPair,
    pub variant: Variant,
}

impl PreIwasawaFactors {
    /// The scale `s` of the diagonal factor.
    fn scale(&self) -> SpdMatrix {
        match self.variant {
            Variant::Plain => self.y.clone(),
            Variant::Modified => sqrtm_spd(&self.y),
        }
    }

    pub fn compose(&self) -> Result<SymplecticMatrix> {
        let s = self.scale();
        let si = s.inverse();
        let (xx, yy) = (self.unitary.x(), self.unitary.y());
        let x = self.x.as_mat();
        let s = s.as_mat();
        let a = s * xx - x * &si * yy;
        let b = s * yy + x * &si * xx;
        let c = -(&si * yy);
        let d = &si * xx;
        SymplecticMatrix::new(from_blocks(&a, &b, &c, &d))
    }

    pub fn siegel_point(&self) -> SiegelPoint {
        SiegelPoint {
            x: self.x.clone(),
            y: self.y.clone(),
        }
    }
}

pub fn decompose(m: &SymplecticMatrix, variant: Variant) -> Result<PreIwasawaFactors> {
    let (a, b, c, d) = m.blocks();
    // dd^t + cc^t is SPD for any symplectic M
    let g = SpdMatrix::new(symmetrize(&(&d * d.transpose() + &c * c.transpose())))
        .map_err(|_| Error::InvariantViolation("dd^t + cc^t is not SPD".into()))?;
    let ginv = SpdMatrix::new(symmetrize(&g.inverse()))?;
    let (s, y) = match variant {
        Variant::Plain => {
            let s = SpdMatrix::new(symmetrize(&spd_power(&g, -0.5)))?;
            (s.clone(), s)
        }
        Variant::Modified => (sqrtm_spd(&ginv), ginv.clone()),
    };
    let x = SymMatrix::symmetrized(&(ginv.as_mat() * (&d * b.transpose() + &c * a.transpose())));
    // X - iY = s (d + ic)
    let xx = s.as_mat() * &d;
    let yy = -(s.as_mat() * &c);
    let unitary = UnitaryPair::with_tol(xx, yy, DERIVED_UNITARY_TOL)?;
    Ok(PreIwasawaFactors {
        x,
        y,
        unitary,
        variant,
    })
}

pub fn pre_iwasawa(m: &SymplecticMatrix) -> Result<PreIwasawaFactors> {
    decompose(m, Variant::Plain)
}

pub fn modified_pre_iwasawa(m: &SymplecticMatrix) -> Result<PreIwasawaFactors> {
    decompose(m, Variant::Modified)
}

/// Action of `M` on modified-chart coordinates `(x', y', X', Y')`, written
/// out in closed form rather than through the product `M M'`.
pub fn act_modified_chart(
    m: &SymplecticMatrix,
    f: &PreIwasawaFactors,
) -> Result<PreIwasawaFactors> {
    if f.variant != Variant::Modified {
        return Err(Error::UnsupportedChart(
            "the chart action is defined on modified factors".into(),
        ));
    }
    let (a, b, c, d) = m.blocks();
    let xp = f.x.as_mat();
    let yp = f.y.as_mat();
    let ypi = f.y.inverse();
    let s = sqrtm_spd(&f.y);
    let sp = s.as_mat();
    let spi = s.inverse();
    let bracket = yp + xp * &ypi * xp;
    let den = &c * &bracket * c.transpose()
        + &d * &ypi * d.transpose()
        + &c * xp * &ypi * d.transpose()
        + &d * &ypi * xp * c.transpose();
    let num = &c * &bracket * a.transpose()
        + &c * xp * &ypi * b.transpose()
        + &d * &ypi * xp * a.transpose()
        + &d * &ypi * b.transpose();
    let y1 = SpdMatrix::new(symmetrize(
        &den.clone()
            .try_inverse()
            .ok_or(Error::SingularDenominator)?,
    ))?;
    let x1 = SymMatrix::symmetrized(&(y1.as_mat() * num));
    let s1 = sqrtm_spd(&y1);
    let cxd = &c * xp + &d;
    let (xq, yq) = (f.unitary.x(), f.unitary.y());
    let re = &cxd * &spi * xq + &c * sp * yq;
    let im = &c * sp * xq - &cxd * &spi * yq;
    // X1 - iY1 = s1 (re + i im)
    let unitary = UnitaryPair::with_tol(s1.as_mat() * re, -(s1.as_mat() * im), DERIVED_UNITARY_TOL)?;
    Ok(PreIwasawaFactors {
        x: x1,
        y: y1,
        unitary,
        variant: Variant::Modified,
    })
}

/// Max entrywise distance between two Siegel points.
pub fn siegel_distance(a: &SiegelPoint, b: &SiegelPoint) -> f64 {
    cmax_abs(&(a.v() - b.v()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_sp_algebra, random_symplectic, Rng};

    fn diag2(a: f64, b: f64) -> Mat {
        Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![a, b]))
    }

    #[test]
    fn symplectic_test_cases() {
        for n in 1..=3 {
            assert!(is_symplectic(&Mat::identity(2 * n, 2 * n), 1e-12).unwrap());
            assert!(is_symplectic(&j_matrix(n), 1e-12).unwrap());
            assert!(check_block_relations(&j_matrix(n), 1e-12).unwrap());
        }
        let m = diag2(2.0, 1.0);
        assert!(!is_symplectic(&m, 1e-10).unwrap());
        assert!(!check_block_relations(&m, 1e-10).unwrap());
        assert!(matches!(
            is_symplectic(&Mat::identity(3, 3), 1e-10),
            Err(Error::BadShape(_))
        ));
    }

    #[test]
    fn inverse_cases() {
        let j = SymplecticMatrix::j(2);
        assert_eq!(j.inverse().as_mat(), &(-j_matrix(2)));
        assert_eq!(SymplecticMatrix::identity(2).inverse(), SymplecticMatrix::identity(2));
        let mut rng = Rng::new(3);
        for n in 1..=3 {
            let z = random_sp_algebra(&mut rng, n);
            let m = z.exp().unwrap();
            let minus = z.scale(-1.0).exp().unwrap();
            assert!(max_abs(&(m.inverse().as_mat() - minus.as_mat())) < 1e-12);
            assert!(max_abs(&(m.as_mat() * m.inverse().as_mat() - Mat::identity(2 * n, 2 * n))) < 1e-12);
        }
    }

    #[test]
    fn sp_basis_membership() {
        assert_eq!(sp_basis(1).len(), 3);
        assert_eq!(sp_basis(2).len(), 10);
        for n in 1..=3 {
            let j = j_matrix(n);
            for (_, z) in sp_basis(n) {
                let x = z.to_matrix();
                assert_eq!(max_abs(&(x.transpose() * &j + &j * &x)), 0.0);
            }
        }
    }

    #[test]
    fn unitary_iso_cases() {
        assert_eq!(unitary_iso(&UnitaryPair::identity(2)), CMat::identity(2, 2));
        let t: f64 = 0.7;
        let p = UnitaryPair::new(
            Mat::from_element(1, 1, t.cos()),
            Mat::from_element(1, 1, t.sin()),
        )
        .unwrap();
        let u = unitary_iso(&p)[(0, 0)];
        assert!((u - Complex64::from_polar(1.0, t)).norm() < 1e-15);
    }

    #[test]
    fn unitary_iso_is_homomorphism() {
        let mut rng = Rng::new(11);
        for n in 1..=3 {
            let p1 = modified_pre_iwasawa(&random_symplectic(&mut rng, n)).unwrap().unitary;
            let p2 = modified_pre_iwasawa(&random_symplectic(&mut rng, n)).unwrap().unitary;
            let prod = UnitaryPair::from_symplectic(&(p1.to_symplectic() * p2.to_symplectic())).unwrap();
            let lhs = unitary_iso(&prod);
            let rhs = unitary_iso(&p1) * unitary_iso(&p2);
            assert!(cmax_abs(&(lhs.clone() - rhs)) < 1e-12);
            let uu = lhs.adjoint() * &lhs - CMat::identity(n, n);
            assert!(cmax_abs(&uu) < 1e-10);
            assert!(is_symplectic(&p1.to_symplectic(), 1e-12).unwrap());
        }
    }

    #[test]
    fn mobius_cases() {
        let n = 2;
        let mut rng = Rng::new(5);
        let v = crate::sampling::random_siegel(&mut rng, n);
        let w = mobius_act(&SymplecticMatrix::identity(n), &v).unwrap();
        assert!(siegel_distance(&v, &w) < 1e-14);
        let base = SiegelPoint::base(n);
        let fixed = mobius_act(&SymplecticMatrix::j(n), &base).unwrap();
        assert!(siegel_distance(&fixed, &base) < 1e-14);
        let mp = m_point(&v.x, &v.y).unwrap();
        assert!(siegel_distance(&mobius_act(&mp, &base).unwrap(), &v) < 1e-10);
    }

    #[test]
    fn mobius_forms_agree_and_compose() {
        let mut rng = Rng::new(8);
        for n in 1..=3 {
            for _ in 0..20 {
                let m1 = random_symplectic(&mut rng, n);
                let m2 = random_symplectic(&mut rng, n);
                let v = crate::sampling::random_siegel(&mut rng, n);
                let a = mobius_act(&m1, &v).unwrap();
                assert!(siegel_distance(&a, &mobius_act_left(&m1, &v).unwrap()) < 1e-10);
                assert!(siegel_distance(&a, &mobius_act_hermitian(&m1, &v).unwrap()) < 1e-10);
                let lhs = mobius_act(&m1.mul(&m2), &v).unwrap();
                let rhs = mobius_act(&m1, &mobius_act(&m2, &v).unwrap()).unwrap();
                assert!(siegel_distance(&lhs, &rhs) < 1e-10);
            }
        }
    }

    #[test]
    fn m_point_cases() {
        let m = m_point(&SymMatrix::zeros(2), &SpdMatrix::identity(2)).unwrap();
        assert_eq!(m, SymplecticMatrix::identity(2));
        let four = SpdMatrix::new(Mat::identity(2, 2) * 4.0).unwrap();
        let m = m_point(&SymMatrix::zeros(2), &four).unwrap();
        let expected = from_blocks(
            &(Mat::identity(2, 2) * 2.0),
            &Mat::zeros(2, 2),
            &Mat::zeros(2, 2),
            &(Mat::identity(2, 2) * 0.5),
        );
        assert!(max_abs(&(m.as_mat() - expected)) < 1e-15);
    }

    #[test]
    fn decomposition_special_cases() {
        for variant in [Variant::Plain, Variant::Modified] {
            let f = decompose(&SymplecticMatrix::identity(2), variant).unwrap();
            assert_eq!(max_abs(f.x.as_mat()), 0.0);
            assert!(max_abs(&(f.y.as_mat() - Mat::identity(2, 2))) < 1e-15);
            assert!(max_abs(&(f.unitary.x() - Mat::identity(2, 2))) < 1e-15);
            assert_eq!(max_abs(f.unitary.y()), 0.0);
            let f = decompose(&SymplecticMatrix::j(2), variant).unwrap();
            assert!(max_abs(f.x.as_mat()) < 1e-15);
            assert!(max_abs(&(f.y.as_mat() - Mat::identity(2, 2))) < 1e-15);
            assert!(max_abs(f.unitary.x()) < 1e-15);
            assert!(max_abs(&(f.unitary.y() - Mat::identity(2, 2))) < 1e-15);
        }
    }

    #[test]
    fn variants_related_by_square() {
        let mut rng = Rng::new(21);
        for n in 1..=3 {
            let m = random_symplectic(&mut rng, n);
            let p = pre_iwasawa(&m).unwrap();
            let q = modified_pre_iwasawa(&m).unwrap();
            assert!(max_abs(&(q.y.as_mat() - p.y.as_mat() * p.y.as_mat())) < 1e-12);
            assert!(max_abs(&(q.x.as_mat() - p.x.as_mat())) < 1e-12);
            // the modified chart sends iI to x + iy
            let v = mobius_act(&m, &SiegelPoint::base(n)).unwrap();
            assert!(siegel_distance(&v, &q.siegel_point()) < 1e-10);
        }
    }

    #[test]
    fn n1_modified_matches_angle_form() {
        let (x, y, t): (f64, f64, f64) = (0.3, 1.7, 0.9);
        let f = PreIwasawaFactors {
            x: SymMatrix::symmetrized(&Mat::from_element(1, 1, x)),
            y: SpdMatrix::new(Mat::from_element(1, 1, y)).unwrap(),
            unitary: UnitaryPair::new(Mat::from_element(1, 1, t.cos()), Mat::from_element(1, 1, t.sin())).unwrap(),
            variant: Variant::Modified,
        };
        let m = f.compose().unwrap();
        let a = y.sqrt() * t.cos() - x / y.sqrt() * t.sin();
        let b = y.sqrt() * t.sin() + x / y.sqrt() * t.cos();
        let c = -t.sin() / y.sqrt();
        let d = t.cos() / y.sqrt();
        let expect = Mat::from_row_slice(2, 2, &[a, b, c, d]);
        assert!(max_abs(&(m.as_mat() - expect)) < 1e-15);
    }

    #[test]
    fn chart_action_identity_and_composition() {
        let mut rng = Rng::new(31);
        let n = 2;
        let f = modified_pre_iwasawa(&random_symplectic(&mut rng, n)).unwrap();
        let g = act_modified_chart(&SymplecticMatrix::identity(n), &f).unwrap();
        assert!(max_abs(&(g.compose().unwrap().as_mat() - f.compose().unwrap().as_mat())) < 1e-12);
        let m1 = random_symplectic(&mut rng, n);
        let m2 = random_symplectic(&mut rng, n);
        let two = act_modified_chart(&m1, &act_modified_chart(&m2, &f).unwrap()).unwrap();
        let prod = act_modified_chart(&m1.mul(&m2), &f).unwrap();
        assert!(max_abs(&(two.compose().unwrap().as_mat() - prod.compose().unwrap().as_mat())) < 1e-10);
        // the chart action is left multiplication
        let direct = modified_pre_iwasawa(&m1.mul(&f.compose().unwrap())).unwrap();
        assert!(max_abs(&(direct.compose().unwrap().as_mat() - act_modified_chart(&m1, &f).unwrap().compose().unwrap().as_mat())) < 1e-10);
    }
}
