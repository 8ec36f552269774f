//! Structured dense linear algebra used throughout the crate.
//!
//! Symmetric and SPD matrix newtypes, the `vec`/`vech` calculus with its
//! duplication and elimination matrices, Kronecker products and sums, a dense
//! Sylvester solver, and the principal square root of an SPD matrix together
//! with its differential.
//!
//! `vech` stacks the lower triangle column by column:
//! `vech([[a, b], [b, d]]) = (a, b, d)`.

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;
pub type Row = RowDVector<f64>;
pub type CRow = RowDVector<Complex64>;
pub type CVec = DVector<Complex64>;

/// Relative symmetry tolerance for [`SymMatrix`].
pub const SYM_TOL: f64 = 1e-12;
/// Eigenvalue ratio below which a symmetric matrix is not considered SPD.
pub const SPD_RATIO: f64 = 1e-10;

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn cmax_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.norm()))
}

/// `max |A - A^t|`.
pub fn sym_defect(m: &Mat) -> f64 {
    max_abs(&(m - m.transpose()))
}

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

pub fn complex_from_parts(re: &Mat, im: &Mat) -> CMat {
    re.zip_map(im, Complex64::new)
}

pub fn row_to_complex(r: &Row) -> CRow {
    r.map(|v| Complex64::new(v, 0.0))
}

fn check_square(m: &Mat, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::BadShape(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// A real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Mat);

impl SymMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        check_square(&m, "symmetric matrix")?;
        let defect = sym_defect(&m);
        if defect > SYM_TOL * max_abs(&m).max(1.0) {
            return Err(Error::NotSymmetric { defect });
        }
        Ok(Self(m))
    }

    /// Replaces the input by its symmetric part.
    pub fn symmetrized(m: &Mat) -> Self {
        Self(symmetrize(m))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Mat::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(Mat::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }
}

/// A real symmetric positive definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix(Mat);

impl SpdMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        let s = SymMatrix::new(m).map_err(|e| match e {
            Error::NotSymmetric { .. } => Error::NotSpd,
            other => other,
        })?;
        Self::from_sym(s)
    }

    pub fn from_sym(s: SymMatrix) -> Result<Self> {
        if s.dim() == 0 {
            return Err(Error::BadShape("empty matrix".into()));
        }
        let eig = s.as_mat().clone().symmetric_eigen();
        let max = eig.eigenvalues.max();
        let min = eig.eigenvalues.min();
        if !(max > 0.0) || !(min > SPD_RATIO * max) {
            return Err(Error::NotSpd);
        }
        Ok(Self(s.into_mat()))
    }

    pub fn identity(n: usize) -> Self {
        Self(Mat::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    pub fn as_sym(&self) -> SymMatrix {
        SymMatrix(self.0.clone())
    }

    pub fn inverse(&self) -> Mat {
        spd_power(self, -1.0)
    }
}

/// `A^alpha = U diag(l_i^alpha) U^t` for SPD `A`.
pub fn spd_power(a: &SpdMatrix, alpha: f64) -> Mat {
    let eig = a.as_mat().clone().symmetric_eigen();
    let d = Mat::from_diagonal(&eig.eigenvalues.map(|l| l.powf(alpha)));
    symmetrize(&(&eig.eigenvectors * d * eig.eigenvectors.transpose()))
}

/// Principal square root of an SPD matrix, by symmetric eigendecomposition.
pub fn sqrtm_spd(a: &SpdMatrix) -> SpdMatrix {
    let eig = a.as_mat().clone().symmetric_eigen();
    let d = Mat::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    SpdMatrix(symmetrize(&(&eig.eigenvectors * d * eig.eigenvectors.transpose())))
}

/// Kronecker product, `(A ⊗ B)[i p + k, j q + l] = A[i, j] B[k, l]`.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Kronecker sum `A ⊗ I_m + I_n ⊗ B`.
///
/// With this orientation the Sylvester equation `AX + XB = C` reads
/// `kron_sum(B^t, A) vec(X) = vec(C)`.
pub fn kron_sum(a: &Mat, b: &Mat) -> Result<Mat> {
    let n = check_square(a, "kron_sum left operand")?;
    let m = check_square(b, "kron_sum right operand")?;
    Ok(kron(a, &Mat::identity(m, m)) + kron(&Mat::identity(n, n), b))
}

/// Column stacking.
pub fn vec(a: &Mat) -> DVector<f64> {
    DVector::from_column_slice(a.as_slice())
}

pub fn unvec(v: &DVector<f64>, rows: usize, cols: usize) -> Result<Mat> {
    if v.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            got: v.len(),
        });
    }
    Ok(Mat::from_column_slice(rows, cols, v.as_slice()))
}

/// Half-vectorisation of a symmetric matrix.
pub fn vech(a: &Mat) -> Result<DVector<f64>> {
    let s = SymMatrix::new(a.clone())?;
    Ok(vech_sym(&s))
}

pub fn vech_sym(a: &SymMatrix) -> DVector<f64> {
    let n = a.dim();
    let m = a.as_mat();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for j in 0..n {
        for i in j..n {
            out.push(m[(i, j)]);
        }
    }
    DVector::from_vec(out)
}

pub fn unvech(v: &DVector<f64>, n: usize) -> Result<SymMatrix> {
    let len = n * (n + 1) / 2;
    if v.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            got: v.len(),
        });
    }
    let mut m = Mat::zeros(n, n);
    let mut k = 0;
    for j in 0..n {
        for i in j..n {
            m[(i, j)] = v[k];
            m[(j, i)] = v[k];
            k += 1;
        }
    }
    Ok(SymMatrix(m))
}

fn lower_positions(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for j in 0..n {
        for i in j..n {
            out.push((i, j));
        }
    }
    out
}

/// Duplication matrix `D_n` with `vec(A) = D_n vech(A)` for symmetric `A`.
pub fn duplication_matrix(n: usize) -> Mat {
    let pos = lower_positions(n);
    let mut d = Mat::zeros(n * n, pos.len());
    for (k, &(i, j)) in pos.iter().enumerate() {
        d[(i + j * n, k)] = 1.0;
        d[(j + i * n, k)] = 1.0;
    }
    d
}

/// Elimination matrix `L_n` with `vech(A) = L_n vec(A)`.
pub fn elimination_matrix(n: usize) -> Mat {
    let pos = lower_positions(n);
    let mut l = Mat::zeros(pos.len(), n * n);
    for (k, &(i, j)) in pos.iter().enumerate() {
        l[(k, i + j * n)] = 1.0;
    }
    l
}

/// Reciprocal condition number below which a Kronecker system is singular.
const SYLVESTER_RCOND: f64 = 1e-13;

/// Solves `AX + XB = C` by dense Kronecker linearisation,
/// `(I_m ⊗ A + B^t ⊗ I_n) vec(X) = vec(C)`.
pub fn sylvester_solve(a: &Mat, b: &Mat, c: &Mat) -> Result<Mat> {
    let n = check_square(a, "Sylvester A")?;
    let m = check_square(b, "Sylvester B")?;
    if c.nrows() != n || c.ncols() != m {
        return Err(Error::BadShape(format!(
            "Sylvester C must be {n}x{m}, got {}x{}",
            c.nrows(),
            c.ncols()
        )));
    }
    let k = kron_sum(&b.transpose(), a)?;
    let sv = k.clone().svd(true, true);
    let smax = sv.singular_values.max();
    let smin = sv.singular_values.min();
    let rcond = if smax > 0.0 { smin / smax } else { 0.0 };
    if rcond < SYLVESTER_RCOND {
        return Err(Error::SingularSylvester { rcond });
    }
    let x = k
        .lu()
        .solve(&vec(c))
        .ok_or(Error::SingularSylvester { rcond })?;
    unvec(&x, n, m)
}

/// Differential of the principal square root: the symmetric `X` with
/// `X A^{1/2} + A^{1/2} X = dA`.
pub fn dsqrtm(a: &SpdMatrix, da: &SymMatrix) -> Result<SymMatrix> {
    if a.dim() != da.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: da.dim(),
        });
    }
    let s = sqrtm_spd(a);
    let x = sylvester_solve(s.as_mat(), s.as_mat(), da.as_mat())?;
    Ok(SymMatrix::symmetrized(&x))
}

/// `(a ⊙ b)_{ij} = a_i b_j + a_j b_i - a_i b_j δ_ij`.
pub fn odot(a: &Row, b: &Row) -> Result<SymMatrix> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let n = a.len();
    let m = Mat::from_fn(n, n, |i, j| {
        let v = a[i] * b[j] + a[j] * b[i];
        if i == j {
            v - a[i] * b[j]
        } else {
            v
        }
    });
    Ok(SymMatrix(m))
}

/// Coefficient mask `e_{μν} = (1 + δ_{μν}) / 2` of the symmetric derivative.
pub fn sym_mask(n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.5 })
}

/// Matrix exponential (scaling and squaring with Padé approximants).
pub fn expm(a: &Mat) -> Mat {
    a.exp()
}

pub fn cexpm(a: &CMat) -> CMat {
    a.exp()
}

pub fn cinverse(a: &CMat) -> Option<CMat> {
    a.clone().try_inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx_eq::assert_close;

    mod approx_eq {
        macro_rules! assert_close {
            ($a:expr, $b:expr, $tol:expr) => {{
                let d = $crate::linalg::max_abs(&(&$a - &$b));
                assert!(d <= $tol, "difference {d:e} exceeds {:e}", $tol);
            }};
        }
        pub(crate) use assert_close;
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&Mat::identity(2, 2), &Mat::identity(3, 3)), Mat::identity(6, 6));
        let a = Mat::from_row_slice(2, 2, &[1.0, -2.0, 3.5, 4.0]);
        assert_eq!(kron(&a, &Mat::from_element(1, 1, 2.0)), &a * 2.0);
        let k = kron(&Mat::zeros(2, 3), &Mat::zeros(4, 5));
        assert_eq!((k.nrows(), k.ncols()), (8, 15));
    }

    #[test]
    fn kron_entry_layout() {
        let a = Mat::from_fn(2, 3, |i, j| (i * 3 + j) as f64 + 1.0);
        let b = Mat::from_fn(4, 5, |i, j| (i * 5 + j) as f64 - 7.0);
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..3 {
                for p in 0..4 {
                    for q in 0..5 {
                        assert_eq!(k[(i * 4 + p, j * 5 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_sum_cases() {
        let i3 = Mat::identity(3, 3);
        assert_eq!(kron_sum(&i3, &i3).unwrap(), Mat::identity(9, 9) * 2.0);
        let a = Mat::from_row_slice(2, 2, &[1.0, 2.0, -1.0, 0.5]);
        assert_eq!(kron_sum(&a, &Mat::zeros(3, 3)).unwrap(), kron(&a, &i3));
        assert!(matches!(
            kron_sum(&Mat::zeros(2, 3), &i3),
            Err(Error::BadShape(_))
        ));
    }

    #[test]
    fn kron_sum_spectrum() {
        let a = Mat::from_diagonal(&DVector::from_vec(vec![1.0, 2.0]));
        let b = Mat::from_diagonal(&DVector::from_vec(vec![3.0, 4.0]));
        let k = kron_sum(&a, &b).unwrap();
        let mut ev: Vec<f64> = k.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (got, want) in ev.iter().zip([4.0, 5.0, 5.0, 6.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn vech_small_cases() {
        let a = Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 5.0]);
        assert_eq!(vech(&a).unwrap().as_slice(), &[1.0, 2.0, 5.0]);
        assert_eq!(duplication_matrix(1), Mat::identity(1, 1));
        assert_eq!(elimination_matrix(1), Mat::identity(1, 1));
        assert!(matches!(
            vech(&Mat::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0])),
            Err(Error::NotSymmetric { .. })
        ));
        assert_eq!(duplication_matrix(3).shape(), (9, 6));
    }

    #[test]
    fn elimination_times_duplication_is_identity() {
        for n in 1..=4 {
            let p = elimination_matrix(n) * duplication_matrix(n);
            assert_eq!(p, Mat::identity(n * (n + 1) / 2, n * (n + 1) / 2));
        }
    }

    #[test]
    fn sylvester_cases() {
        let i2 = Mat::identity(2, 2);
        assert_close!(sylvester_solve(&i2, &i2, &(&i2 * 2.0)).unwrap(), i2, 1e-14);

        let a = Mat::from_diagonal(&DVector::from_vec(vec![1.0, 2.0]));
        let b = Mat::from_diagonal(&DVector::from_vec(vec![3.0, 4.0]));
        let x = sylvester_solve(&a, &b, &Mat::from_element(2, 2, 1.0)).unwrap();
        // elementwise oracle 1 / (a_i + b_j)
        let want = Mat::from_fn(2, 2, |i, j| 1.0 / (a[(i, i)] + b[(j, j)]));
        assert_close!(x, want, 1e-14);
        assert_close!(x, Mat::from_row_slice(2, 2, &[0.25, 0.2, 0.2, 1.0 / 6.0]), 1e-14);

        let nil = Mat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            sylvester_solve(&nil, &Mat::zeros(2, 2), &i2),
            Err(Error::SingularSylvester { .. })
        ));
    }

    #[test]
    fn sqrtm_cases() {
        let a = SpdMatrix::new(Mat::identity(3, 3) * 4.0).unwrap();
        assert_close!(sqrtm_spd(&a).into_mat(), Mat::identity(3, 3) * 2.0, 1e-14);

        let a = SpdMatrix::new(Mat::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        let s = sqrtm_spd(&a).into_mat();
        assert_close!(&s * &s, a.as_mat().clone(), 1e-12 * 3.0);

        let a = SpdMatrix::new(Mat::from_diagonal(&DVector::from_vec(vec![1.0, 4.0, 9.0]))).unwrap();
        assert_close!(
            sqrtm_spd(&a).into_mat(),
            Mat::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0])),
            1e-14
        );

        assert_eq!(
            SpdMatrix::new(Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])),
            Err(Error::NotSpd)
        );
        assert_eq!(
            SpdMatrix::new(Mat::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0])),
            Err(Error::NotSpd)
        );
    }

    #[test]
    fn dsqrtm_cases() {
        let da = SymMatrix::new(Mat::from_row_slice(2, 2, &[0.3, -1.0, -1.0, 2.0])).unwrap();
        let x = dsqrtm(&SpdMatrix::identity(2), &da).unwrap();
        assert_close!(x.into_mat(), da.as_mat() * 0.5, 1e-14);

        let a = SpdMatrix::new(Mat::from_diagonal(&DVector::from_vec(vec![4.0, 9.0]))).unwrap();
        let x = dsqrtm(&a, &SymMatrix::identity(2)).unwrap();
        assert_close!(
            x.into_mat(),
            Mat::from_diagonal(&DVector::from_vec(vec![0.25, 1.0 / 6.0])),
            1e-14
        );
    }

    #[test]
    fn dsqrtm_matches_central_difference() {
        let a = SpdMatrix::new(Mat::from_row_slice(3, 3, &[3.0, 0.4, -0.2, 0.4, 2.0, 0.3, -0.2, 0.3, 1.5])).unwrap();
        let e = SymMatrix::new(Mat::from_row_slice(3, 3, &[0.1, 1.0, 0.0, 1.0, -0.5, 0.2, 0.0, 0.2, 0.7])).unwrap();
        let h = 1e-5;
        let plus = SpdMatrix::new(a.as_mat() + e.as_mat() * h).unwrap();
        let minus = SpdMatrix::new(a.as_mat() - e.as_mat() * h).unwrap();
        let fd = (sqrtm_spd(&plus).into_mat() - sqrtm_spd(&minus).into_mat()) / (2.0 * h);
        let x = dsqrtm(&a, &e).unwrap().into_mat();
        assert!(max_abs(&(&fd - &x)) <= 1e-6 * max_abs(&x));
    }

    #[test]
    fn odot_and_mask() {
        let e1 = Row::from_vec(vec![1.0, 0.0]);
        let e2 = Row::from_vec(vec![0.0, 1.0]);
        assert_eq!(odot(&e1, &e2).unwrap().into_mat(), Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert_eq!(odot(&e1, &e1).unwrap().into_mat(), Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(sym_mask(1), Mat::identity(1, 1));
        assert_eq!(sym_mask(2), Mat::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]));
    }

    #[test]
    fn sym_mask_contraction_is_identity_on_symmetric_matrices() {
        // Σ_{μν} e_{μν} ∂w_ij/∂w_μν S_μν = S_ij, with the symmetric-derivative
        // rule ∂w_ij/∂w_pq = δ_ip δ_jq + δ_iq δ_jp - δ_ij δ_pq δ_ip
        let k = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let d = |i, j, p, q| k(i, p) * k(j, q) + k(i, q) * k(j, p) - k(i, j) * k(p, q) * k(i, p);
        for n in 1..=4 {
            let e = sym_mask(n);
            let s = Mat::from_fn(n, n, |i, j| 1.0 + (i + j) as f64 + 0.5 * (i * j) as f64);
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for mu in 0..n {
                        for nu in 0..n {
                            acc += e[(mu, nu)] * d(i, j, mu, nu) * s[(mu, nu)];
                        }
                    }
                    assert!((acc - s[(i, j)]).abs() < 1e-14);
                }
            }
        }
    }
}
