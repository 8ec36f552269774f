//! Seeded random samplers for group elements, points and tangents.
//!
//! Every sample index gets its own ChaCha stream, so batch runs give the same
//! result regardless of how work is split across threads.

use num_complex::Complex64;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::JacobiAlgebraElement;
use crate::jacobi::{ExtendedPoint, JacobiElement, PqPoint, SiegelJacobiPoint, SnChart};
use crate::linalg::{symmetrize, CMat, CRow, Mat, Row, SpdMatrix, SymMatrix};
use crate::symplectic::{modified_pre_iwasawa, SiegelPoint, SpAlgebraElement, SymplecticMatrix};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Independent generator for sample `index` of a run seeded with `seed`.
    pub fn for_sample(seed: u64, index: u64) -> Self {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(index);
        Self(r)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.random_range(lo..hi)
    }

    pub fn unit(&mut self) -> f64 {
        self.uniform(-1.0, 1.0)
    }

    pub fn mat(&mut self, r: usize, c: usize) -> Mat {
        Mat::from_fn(r, c, |_, _| self.unit())
    }

    pub fn row(&mut self, n: usize) -> Row {
        Row::from_fn(n, |_, _| self.unit())
    }

    pub fn sym(&mut self, n: usize) -> SymMatrix {
        SymMatrix::symmetrized(&self.mat(n, n))
    }

    /// SPD matrix `B B^t / n + I/2` with `B` uniform in `[-1, 1]`.
    pub fn spd(&mut self, n: usize) -> SpdMatrix {
        let b = self.mat(n, n);
        let m = &b * b.transpose() / n as f64 + Mat::identity(n, n) * 0.5;
        SpdMatrix::new(symmetrize(&m)).expect("sampled matrix is SPD")
    }

    /// SPD matrix with eigenvalues in `[1, cond]`.
    pub fn spd_with_condition(&mut self, n: usize, cond: f64) -> SpdMatrix {
        let q = self.mat(n, n).qr().q();
        let eig = nalgebra::DVector::from_fn(n, |i, _| {
            if n == 1 {
                1.0 + (cond - 1.0) * self.uniform(0.0, 1.0)
            } else {
                1.0 + (cond - 1.0) * i as f64 / (n - 1) as f64
            }
        });
        let m = &q * Mat::from_diagonal(&eig) * q.transpose();
        SpdMatrix::new(symmetrize(&m)).expect("sampled matrix is SPD")
    }

    pub fn anti_hermitian(&mut self, n: usize) -> CMat {
        let re = self.mat(n, n);
        let im = self.mat(n, n);
        let re = (&re - re.transpose()) * 0.5;
        let im = (&im + im.transpose()) * 0.5;
        CMat::from_fn(n, n, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
    }

    pub fn complex_sym(&mut self, n: usize) -> CMat {
        let re = self.sym(n).into_mat();
        let im = self.sym(n).into_mat();
        CMat::from_fn(n, n, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
    }

    pub fn complex_row(&mut self, n: usize) -> CRow {
        CRow::from_fn(n, |_, _| Complex64::new(self.unit(), self.unit()))
    }
}

/// Entries uniform in `[-1, 1]`, scaled by `1/(2n)`.
pub fn random_sp_algebra(rng: &mut Rng, n: usize) -> SpAlgebraElement {
    SpAlgebraElement {
        a: rng.mat(n, n),
        b: rng.sym(n),
        c: rng.sym(n),
    }
    .scale(0.5 / n as f64)
}

pub fn random_symplectic(rng: &mut Rng, n: usize) -> SymplecticMatrix {
    random_sp_algebra(rng, n)
        .exp()
        .expect("exponential of an sp(n) element is symplectic")
}

pub fn random_jacobi_algebra(rng: &mut Rng, n: usize) -> JacobiAlgebraElement {
    let sp = random_sp_algebra(rng, n);
    JacobiAlgebraElement {
        a: sp.a,
        b: sp.b,
        c: sp.c,
        p: rng.row(n),
        q: rng.row(n),
        r: rng.unit(),
    }
}

pub fn random_jacobi(rng: &mut Rng, n: usize) -> JacobiElement {
    let m = random_symplectic(rng, n);
    JacobiElement {
        m,
        lambda: rng.row(n),
        mu: rng.row(n),
        kappa: rng.unit(),
    }
}

pub fn random_siegel(rng: &mut Rng, n: usize) -> SiegelPoint {
    SiegelPoint {
        x: rng.sym(n),
        y: rng.spd(n),
    }
}

pub fn random_pq_point(rng: &mut Rng, n: usize) -> PqPoint {
    let v = random_siegel(rng, n);
    PqPoint {
        x: v.x,
        y: v.y,
        p: rng.row(n),
        q: rng.row(n),
    }
}

pub fn random_vu_point(rng: &mut Rng, n: usize) -> SiegelJacobiPoint {
    random_pq_point(rng, n).to_vu()
}

pub fn random_extended_point(rng: &mut Rng, n: usize) -> ExtendedPoint {
    ExtendedPoint {
        base: random_pq_point(rng, n),
        kappa: rng.unit(),
    }
}

/// An S_n point whose symplectic part is a random modified decomposition.
pub fn random_sn_chart(rng: &mut Rng, n: usize) -> SnChart {
    let f = modified_pre_iwasawa(&random_symplectic(rng, n)).expect("decomposition exists");
    let v = random_siegel(rng, n);
    SnChart {
        x: v.x,
        y: v.y,
        unitary: f.unitary,
        p: rng.row(n),
        q: rng.row(n),
        kappa: rng.unit(),
    }
}

/// Complex symmetric `W` with spectral norm `0.8`, and a random `z`.
pub fn random_ball_point(rng: &mut Rng, n: usize) -> (CMat, CRow) {
    let w = rng.complex_sym(n);
    let norm = w.clone().singular_values().max();
    let scale = if norm > 0.0 { 0.8 / norm } else { 0.0 };
    (w * Complex64::new(scale, 0.0), rng.complex_row(n))
}
