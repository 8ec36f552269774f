//! The Jacobi algebra embedded in `sp(n+1, R)`.
//!
//! Block layout of a `(2n+2) x (2n+2)` algebra matrix (rows and columns are
//! grouped as `n | 1 | n | 1`):
//!
//! ```text
//!     [ a   0   b    q^t ]
//!     [ p   0   q    r   ]
//!     [ c   0  -a^t -p^t ]
//!     [ 0   0   0    0   ]
//! ```
//!
//! with `b`, `c` symmetric. The basis is `H_ij` (all `i, j`), `F_ij` and
//! `G_ij` (`i <= j`, off-diagonal ones carrying `(E_ij + E_ji) / 2`), `P_i`,
//! `Q_i` and `R`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, Mat, Row, SymMatrix};

/// Tolerance for an embedded matrix to be accepted as an algebra element.
pub const PROJECTION_TOL: f64 = 1e-10;
/// Structure constants are snapped to multiples of `1 / SNAP_DENOM`.
pub const SNAP_DENOM: f64 = 4.0;
pub const SNAP_TOL: f64 = 1e-9;

/// A basis generator, zero-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    H(usize, usize),
    F(usize, usize),
    G(usize, usize),
    P(usize),
    Q(usize),
    R,
}

impl Generator {
    /// `F` and `G` are symmetric in their indices; this puts them in `i <= j` form.
    pub fn canonical(self) -> Self {
        match self {
            Generator::F(i, j) if i > j => Generator::F(j, i),
            Generator::G(i, j) if i > j => Generator::G(j, i),
            g => g,
        }
    }

    pub fn is_symplectic(self) -> bool {
        matches!(self, Generator::H(..) | Generator::F(..) | Generator::G(..))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::H(i, j) => write!(f, "H{}{}", i + 1, j + 1),
            Generator::F(i, j) => write!(f, "F{}{}", i + 1, j + 1),
            Generator::G(i, j) => write!(f, "G{}{}", i + 1, j + 1),
            Generator::P(i) => write!(f, "P{}", i + 1),
            Generator::Q(i) => write!(f, "Q{}", i + 1),
            Generator::R => write!(f, "R"),
        }
    }
}

/// Generators of `sp(n, R)` in basis order: `H`, then `F`, then `G`.
pub fn sp_generators(n: usize) -> Vec<Generator> {
    let mut out = Vec::with_capacity(2 * n * n + n);
    for i in 0..n {
        for j in 0..n {
            out.push(Generator::H(i, j));
        }
    }
    for i in 0..n {
        for j in i..n {
            out.push(Generator::F(i, j));
        }
    }
    for i in 0..n {
        for j in i..n {
            out.push(Generator::G(i, j));
        }
    }
    out
}

/// Generators of the Jacobi algebra in basis order; `(n + 1)(2n + 1)` of them.
pub fn jacobi_generators(n: usize) -> Vec<Generator> {
    let mut out = sp_generators(n);
    out.extend((0..n).map(Generator::P));
    out.extend((0..n).map(Generator::Q));
    out.push(Generator::R);
    out
}

fn sym_unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    if i == j {
        m[(i, i)] = 1.0;
    } else {
        m[(i, j)] = 0.5;
        m[(j, i)] = 0.5;
    }
    m
}

/// An element of the Jacobi algebra in block form.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiAlgebraElement {
    pub a: Mat,
    pub b: SymMatrix,
    pub c: SymMatrix,
    pub p: Row,
    pub q: Row,
    pub r: f64,
}

impl JacobiAlgebraElement {
    pub fn zeros(n: usize) -> Self {
        Self {
            a: Mat::zeros(n, n),
            b: SymMatrix::zeros(n),
            c: SymMatrix::zeros(n),
            p: Row::zeros(n),
            q: Row::zeros(n),
            r: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn generator(n: usize, g: Generator) -> Self {
        let mut z = Self::zeros(n);
        match g.canonical() {
            Generator::H(i, j) => z.a[(i, j)] = 1.0,
            Generator::F(i, j) => z.b = SymMatrix::symmetrized(&sym_unit(n, i, j)),
            Generator::G(i, j) => z.c = SymMatrix::symmetrized(&sym_unit(n, i, j)),
            Generator::P(i) => z.p[i] = 1.0,
            Generator::Q(i) => z.q[i] = 1.0,
            Generator::R => z.r = 1.0,
        }
        z
    }

    /// The symplectic part `(a, b; c, -a^t)` as a `2n x 2n` matrix.
    pub fn sp_matrix(&self) -> Mat {
        let n = self.dim();
        let mut m = Mat::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.a);
        m.view_mut((0, n), (n, n)).copy_from(self.b.as_mat());
        m.view_mut((n, 0), (n, n)).copy_from(self.c.as_mat());
        m.view_mut((n, n), (n, n)).copy_from(&(-self.a.transpose()));
        m
    }

    /// The embedded `(2n+2) x (2n+2)` matrix.
    pub fn to_matrix(&self) -> Mat {
        let n = self.dim();
        let s = 2 * n + 2;
        let mut m = Mat::zeros(s, s);
        m.view_mut((0, 0), (n, n)).copy_from(&self.a);
        m.view_mut((0, n + 1), (n, n)).copy_from(self.b.as_mat());
        m.view_mut((n + 1, 0), (n, n)).copy_from(self.c.as_mat());
        m.view_mut((n + 1, n + 1), (n, n))
            .copy_from(&(-self.a.transpose()));
        for i in 0..n {
            m[(n, i)] = self.p[i];
            m[(n, n + 1 + i)] = self.q[i];
            m[(i, s - 1)] = self.q[i];
            m[(n + 1 + i, s - 1)] = -self.p[i];
        }
        m[(n, s - 1)] = self.r;
        m
    }

    /// Reads the blocks of an embedded matrix and checks that it lies in the algebra.
    pub fn from_matrix(z: &Mat) -> Result<Self> {
        Self::from_matrix_with_tol(z, PROJECTION_TOL)
    }

    /// As [`Self::from_matrix`] with a relative residual tolerance.
    pub fn from_matrix_with_tol(z: &Mat, tol: f64) -> Result<Self> {
        let s = z.nrows();
        if s != z.ncols() || s < 4 || !s.is_multiple_of(2) {
            return Err(Error::BadShape(format!(
                "Jacobi algebra matrix must be (2n+2)x(2n+2), got {}x{}",
                z.nrows(),
                z.ncols()
            )));
        }
        let n = s / 2 - 1;
        let a = z.view((0, 0), (n, n)).into_owned();
        let b = SymMatrix::symmetrized(&z.view((0, n + 1), (n, n)).into_owned());
        let c = SymMatrix::symmetrized(&z.view((n + 1, 0), (n, n)).into_owned());
        let p = Row::from_fn(n, |_, i| z[(n, i)]);
        let q = Row::from_fn(n, |_, i| z[(n, n + 1 + i)]);
        let el = Self {
            a,
            b,
            c,
            p,
            q,
            r: z[(n, s - 1)],
        };
        let residual = max_abs(&(z - el.to_matrix()));
        if residual > tol * max_abs(z).max(1.0) {
            return Err(Error::ProjectionResidual { residual });
        }
        Ok(el)
    }

    /// Coefficients in the basis of [`jacobi_generators`].
    pub fn coordinates(&self) -> Vec<f64> {
        let n = self.dim();
        jacobi_generators(n)
            .into_iter()
            .map(|g| match g {
                Generator::H(i, j) => self.a[(i, j)],
                Generator::F(i, j) => self.b.as_mat()[(i, j)] * if i == j { 1.0 } else { 2.0 },
                Generator::G(i, j) => self.c.as_mat()[(i, j)] * if i == j { 1.0 } else { 2.0 },
                Generator::P(i) => self.p[i],
                Generator::Q(i) => self.q[i],
                Generator::R => self.r,
            })
            .collect()
    }

    pub fn from_coordinates(n: usize, coords: &[f64]) -> Result<Self> {
        let gens = jacobi_generators(n);
        if coords.len() != gens.len() {
            return Err(Error::DimensionMismatch {
                expected: gens.len(),
                got: coords.len(),
            });
        }
        let mut acc = Self::zeros(n);
        for (g, &w) in gens.into_iter().zip(coords) {
            acc = acc.add(&Self::generator(n, g).scale(w));
        }
        Ok(acc)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            a: &self.a * s,
            b: SymMatrix::symmetrized(&(self.b.as_mat() * s)),
            c: SymMatrix::symmetrized(&(self.c.as_mat() * s)),
            p: &self.p * s,
            q: &self.q * s,
            r: self.r * s,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            a: &self.a + &o.a,
            b: SymMatrix::symmetrized(&(self.b.as_mat() + o.b.as_mat())),
            c: SymMatrix::symmetrized(&(self.c.as_mat() + o.c.as_mat())),
            p: &self.p + &o.p,
            q: &self.q + &o.q,
            r: self.r + o.r,
        }
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.to_matrix())
    }
}

/// Embedded matrix of a single generator.
pub fn generator_matrix(n: usize, g: Generator) -> Mat {
    JacobiAlgebraElement::generator(n, g).to_matrix()
}

/// Embedded basis of the Jacobi algebra.
pub fn gj_basis(n: usize) -> Vec<(Generator, Mat)> {
    jacobi_generators(n)
        .into_iter()
        .map(|g| (g, generator_matrix(n, g)))
        .collect()
}

/// Matrix commutator of two algebra elements, re-projected onto the algebra.
pub fn gj_bracket(x: &JacobiAlgebraElement, y: &JacobiAlgebraElement) -> Result<JacobiAlgebraElement> {
    let (mx, my) = (x.to_matrix(), y.to_matrix());
    let c = &mx * &my - &my * &mx;
    JacobiAlgebraElement::from_matrix(&c).map_err(|e| match e {
        Error::ProjectionResidual { residual } => Error::BasisClosureFailure { residual },
        other => other,
    })
}

/// Snaps a structure constant to the nearest multiple of `1/4`.
pub fn snap(v: f64) -> Option<f64> {
    let s = (v * SNAP_DENOM).round() / SNAP_DENOM;
    ((v - s).abs() <= SNAP_TOL).then_some(s)
}

/// Structure constants `[X_i, X_j] = Σ_k c_ij^k X_k` over [`jacobi_generators`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorTable {
    pub n: usize,
    pub generators: Vec<Generator>,
    /// `constants[i][j][k]`, snapped to multiples of 1/4.
    pub constants: Vec<Vec<Vec<f64>>>,
}

impl CommutatorTable {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, g: Generator) -> Option<usize> {
        let g = g.canonical();
        self.generators.iter().position(|&h| h == g)
    }

    /// Nonzero terms of `[gi, gj]`.
    pub fn bracket_terms(&self, gi: Generator, gj: Generator) -> Vec<(Generator, f64)> {
        let (i, j) = (self.index_of(gi).unwrap(), self.index_of(gj).unwrap());
        self.constants[i][j]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(k, &c)| (self.generators[k], c))
            .collect()
    }
}

pub fn commutator_table(n: usize) -> Result<CommutatorTable> {
    let generators = jacobi_generators(n);
    let elems: Vec<_> = generators
        .iter()
        .map(|&g| JacobiAlgebraElement::generator(n, g))
        .collect();
    let mut constants = Vec::with_capacity(elems.len());
    for x in &elems {
        let mut row = Vec::with_capacity(elems.len());
        for y in &elems {
            let coords = gj_bracket(x, y)?.coordinates();
            let snapped = coords
                .iter()
                .map(|&v| {
                    snap(v).ok_or(Error::BasisClosureFailure {
                        residual: (v * SNAP_DENOM - (v * SNAP_DENOM).round()).abs() / SNAP_DENOM,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            row.push(snapped);
        }
        constants.push(row);
    }
    Ok(CommutatorTable {
        n,
        generators,
        constants,
    })
}

/// Which version of the `4[F_ij, G_kl]` family to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FgConvention {
    /// `δ_jk H_il + δ_jl H_ik + δ_ik H_jl + δ_il H_jk`, from the matrix product.
    Computed,
    /// `δ_li H_kj + δ_jl H_ik + δ_jk H_il + δ_ik H_jl`.
    Swapped,
}

/// Agreement of one relation family with the computed table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyCheck {
    pub family: &'static str,
    pub cases: usize,
    pub mismatches: usize,
    pub max_deviation: f64,
}

fn sum_terms(n: usize, terms: &[(f64, Generator)]) -> JacobiAlgebraElement {
    terms.iter().fold(JacobiAlgebraElement::zeros(n), |acc, &(w, g)| {
        if w == 0.0 {
            acc
        } else {
            acc.add(&JacobiAlgebraElement::generator(n, g).scale(w))
        }
    })
}

fn kd(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Checks the eight closed-form relation families against [`commutator_table`].
///
/// Each family is stated as `m [X, Y] = Σ c Z` with integer `m` and `c`; the
/// symmetric generators range over all index pairs, not only `i <= j`.
pub fn check_comm_families(table: &CommutatorTable, fg: FgConvention) -> Vec<FamilyCheck> {
    use Generator::*;
    let n = table.n;
    let idx = |g: Generator| table.index_of(g).expect("generator in table");
    let bracket = |x: Generator, y: Generator| {
        let c = &table.constants[idx(x)][idx(y)];
        JacobiAlgebraElement::from_coordinates(n, c).expect("table row has basis length")
    };
    let mut out = Vec::new();
    let mut run = |family: &'static str, cases: Vec<(Generator, Generator, f64, Vec<(f64, Generator)>)>| {
        let mut check = FamilyCheck {
            family,
            cases: cases.len(),
            mismatches: 0,
            max_deviation: 0.0,
        };
        for (x, y, m, terms) in cases {
            let dev = bracket(x, y).scale(m).add(&sum_terms(n, &terms).scale(-1.0)).max_abs();
            check.max_deviation = check.max_deviation.max(dev);
            if dev > SNAP_TOL {
                check.mismatches += 1;
            }
        }
        out.push(check);
    };
    let r = 0..n;
    let pairs: Vec<(usize, usize)> = r.clone().flat_map(|i| (0..n).map(move |j| (i, j))).collect();

    let mut c = Vec::new();
    for &(k, l) in &pairs {
        for &(i, j) in &pairs {
            c.push((H(k, l), F(i, j), 1.0, vec![(kd(l, j), F(i, k)), (kd(l, i), F(k, j))]));
        }
    }
    run("[H_kl, F_ij] = δ_lj F_ik + δ_li F_kj", c);

    let mut c = Vec::new();
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            c.push((G(i, j), H(k, l), 1.0, vec![(kd(k, i), G(l, j)), (kd(k, j), G(l, i))]));
        }
    }
    run("[G_ij, H_kl] = δ_ki G_lj + δ_kj G_li", c);

    let mut c = Vec::new();
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            let terms = match fg {
                FgConvention::Computed => vec![
                    (kd(j, k), H(i, l)),
                    (kd(j, l), H(i, k)),
                    (kd(i, k), H(j, l)),
                    (kd(i, l), H(j, k)),
                ],
                FgConvention::Swapped => vec![
                    (kd(l, i), H(k, j)),
                    (kd(j, l), H(i, k)),
                    (kd(j, k), H(i, l)),
                    (kd(i, k), H(j, l)),
                ],
            };
            c.push((F(i, j), G(k, l), 4.0, terms));
        }
    }
    run(
        match fg {
            FgConvention::Computed => "4[F_ij, G_kl] = δ_jk H_il + δ_jl H_ik + δ_ik H_jl + δ_il H_jk",
            FgConvention::Swapped => "4[F_ij, G_kl] = δ_li H_kj + δ_jl H_ik + δ_jk H_il + δ_ik H_jl",
        },
        c,
    );

    let mut c = Vec::new();
    for p in r.clone() {
        for q in r.clone() {
            c.push((P(p), Q(q), 1.0, vec![(2.0 * kd(p, q), R)]));
        }
    }
    run("[P_p, Q_q] = 2δ_pq R", c);

    let mut c = Vec::new();
    for p in r.clone() {
        for &(i, j) in &pairs {
            c.push((P(p), F(i, j), 2.0, vec![(kd(p, i), Q(j)), (kd(p, j), Q(i))]));
        }
    }
    run("2[P_p, F_ij] = δ_pi Q_j + δ_pj Q_i", c);

    let mut c = Vec::new();
    for q in r.clone() {
        for &(i, j) in &pairs {
            c.push((Q(q), G(i, j), 2.0, vec![(kd(i, q), P(j)), (kd(j, q), P(i))]));
        }
    }
    run("2[Q_q, G_ij] = δ_iq P_j + δ_jq P_i", c);

    let mut c = Vec::new();
    for p in r.clone() {
        for &(i, j) in &pairs {
            c.push((P(p), H(i, j), 1.0, vec![(kd(p, i), P(j))]));
        }
    }
    run("[P_p, H_ij] = δ_pi P_j", c);

    let mut c = Vec::new();
    for &(i, j) in &pairs {
        for q in r.clone() {
            c.push((H(i, j), Q(q), 1.0, vec![(kd(j, q), Q(i))]));
        }
    }
    run("[H_ij, Q_q] = δ_jq Q_i", c);
    out
}
