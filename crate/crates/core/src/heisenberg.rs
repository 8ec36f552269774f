//! The Heisenberg group `H_n(R)` with elements `(λ, μ, κ)`.

use crate::algebra::{Generator, JacobiAlgebraElement};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Row};

#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergElement {
    pub lambda: Row,
    pub mu: Row,
    pub kappa: f64,
}

fn check_dims(a: &HeisenbergElement, b: &HeisenbergElement) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

impl HeisenbergElement {
    pub fn new(lambda: Row, mu: Row, kappa: f64) -> Result<Self> {
        if lambda.len() != mu.len() {
            return Err(Error::DimensionMismatch {
                expected: lambda.len(),
                got: mu.len(),
            });
        }
        Ok(Self { lambda, mu, kappa })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            lambda: Row::zeros(n),
            mu: Row::zeros(n),
            kappa: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }
}

/// `(λ + λ', μ + μ', κ + κ' + λμ'^t - μλ'^t)`.
pub fn h_compose(g: &HeisenbergElement, h: &HeisenbergElement) -> Result<HeisenbergElement> {
    check_dims(g, h)?;
    Ok(HeisenbergElement {
        lambda: &g.lambda + &h.lambda,
        mu: &g.mu + &h.mu,
        kappa: g.kappa + h.kappa + g.lambda.dot(&h.mu) - g.mu.dot(&h.lambda),
    })
}

pub fn h_inverse(g: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement {
        lambda: -&g.lambda,
        mu: -&g.mu,
        kappa: -g.kappa,
    }
}

/// The `(2n+2) x (2n+2)` symplectic matrix of `g`.
pub fn h_embed(g: &HeisenbergElement) -> Mat {
    let n = g.dim();
    let s = 2 * n + 2;
    let mut m = Mat::identity(s, s);
    for i in 0..n {
        m[(n, i)] = g.lambda[i];
        m[(n, n + 1 + i)] = g.mu[i];
        m[(i, s - 1)] = g.mu[i];
        m[(n + 1 + i, s - 1)] = -g.lambda[i];
    }
    m[(n, s - 1)] = g.kappa;
    m
}

/// Inverse of [`h_embed`]; does not check the remaining blocks.
pub fn h_from_embedded(m: &Mat) -> Result<HeisenbergElement> {
    let s = m.nrows();
    if s != m.ncols() || s < 4 || !s.is_multiple_of(2) {
        return Err(Error::BadShape(format!("{}x{}", m.nrows(), m.ncols())));
    }
    let n = s / 2 - 1;
    Ok(HeisenbergElement {
        lambda: Row::from_fn(n, |_, i| m[(n, i)]),
        mu: Row::from_fn(n, |_, i| m[(n, n + 1 + i)]),
        kappa: m[(n, s - 1)],
    })
}

/// A tangent vector `(dλ, dμ, dκ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HTangent {
    pub dlambda: Row,
    pub dmu: Row,
    pub dkappa: f64,
}

impl HTangent {
    pub fn zeros(n: usize) -> Self {
        Self {
            dlambda: Row::zeros(n),
            dmu: Row::zeros(n),
            dkappa: 0.0,
        }
    }
}

/// Values of the left-invariant one-forms `(λ^p, λ^q, λ^r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HOneForms {
    pub p: Row,
    pub q: Row,
    pub r: f64,
}

impl HOneForms {
    pub fn as_algebra(&self) -> JacobiAlgebraElement {
        let mut z = JacobiAlgebraElement::zeros(self.p.len());
        z.p = self.p.clone();
        z.q = self.q.clone();
        z.r = self.r;
        z
    }
}

/// `λ^p = dλ`, `λ^q = dμ`, `λ^r = dκ - λ dμ^t + μ dλ^t`.
pub fn h_oneforms(g: &HeisenbergElement, t: &HTangent) -> HOneForms {
    HOneForms {
        p: t.dlambda.clone(),
        q: t.dmu.clone(),
        r: t.dkappa - g.lambda.dot(&t.dmu) + g.mu.dot(&t.dlambda),
    }
}

/// Polarized left-invariant metric `dλ² + dμ² + (λ^r)²`.
pub fn h_metric(g: &HeisenbergElement, t1: &HTangent, t2: &HTangent) -> f64 {
    let a = h_oneforms(g, t1);
    let b = h_oneforms(g, t2);
    a.p.dot(&b.p) + a.q.dot(&b.q) + a.r * b.r
}

/// Fundamental vector fields `P*_p = ∂_λp + μ_p ∂_κ`, `Q*_q = ∂_μq - λ_q ∂_κ`, `R* = ∂_κ`.
pub fn h_fvf(gen: Generator, g: &HeisenbergElement) -> Result<HTangent> {
    let n = g.dim();
    let mut t = HTangent::zeros(n);
    match gen {
        Generator::P(i) if i < n => {
            t.dlambda[i] = 1.0;
            t.dkappa = g.mu[i];
        }
        Generator::Q(i) if i < n => {
            t.dmu[i] = 1.0;
            t.dkappa = -g.lambda[i];
        }
        Generator::R => t.dkappa = 1.0,
        other => {
            return Err(Error::InvariantViolation(format!(
                "{other} is not a Heisenberg generator for n = {n}"
            )))
        }
    }
    Ok(t)
}
