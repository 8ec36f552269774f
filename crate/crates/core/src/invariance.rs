//! Sampled invariance checks: pull an object back along a random group
//! element and compare with its original value.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::{pushforward, FD_STEP};
use crate::forms::SnTangent;
use crate::jacobi::{
    act_extended, act_pq, act_xjn, gj_compose, sn_chart, sn_chart_inverse, Chart, ChartPoint,
    ExtendedPoint, SnChart,
};
use crate::metrics::*;
use crate::sampling::{
    random_extended_point, random_jacobi, random_pq_point, random_sn_chart, random_vu_point, Rng,
};

/// Weight of the spurious `tr(dx dx')` term in the negative control.
pub const CONTROL_WEIGHT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvarianceObject {
    MetricGroup,
    /// `metric_xjn` in the `(x, y, p, q)` chart.
    MetricXjn,
    MetricXjnChipsi,
    MetricXjnXirho,
    MetricExtended,
    KahlerXjn,
    KahlerBall,
    LambdaR,
    /// `metric_xjn` plus a `tr(dx dx')` term; expected to fail.
    NegativeControl,
}

impl InvarianceObject {
    pub const ALL: [InvarianceObject; 9] = [
        InvarianceObject::MetricGroup,
        InvarianceObject::MetricXjn,
        InvarianceObject::MetricXjnChipsi,
        InvarianceObject::MetricXjnXirho,
        InvarianceObject::MetricExtended,
        InvarianceObject::KahlerXjn,
        InvarianceObject::KahlerBall,
        InvarianceObject::LambdaR,
        InvarianceObject::NegativeControl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InvarianceObject::MetricGroup => "metric_group",
            InvarianceObject::MetricXjn => "metric_xjn",
            InvarianceObject::MetricXjnChipsi => "metric_xjn_chipsi",
            InvarianceObject::MetricXjnXirho => "metric_xjn_xirho",
            InvarianceObject::MetricExtended => "metric_extended",
            InvarianceObject::KahlerXjn => "kahler_xjn",
            InvarianceObject::KahlerBall => "kahler_ball",
            InvarianceObject::LambdaR => "lambda_r",
            InvarianceObject::NegativeControl => "negative_control",
        }
    }
}

impl fmt::Display for InvarianceObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InvarianceObject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase().replace('-', "_");
        InvarianceObject::ALL
            .into_iter()
            .find(|o| o.name() == s || (s == "metric_xjn_pq" && *o == InvarianceObject::MetricXjn))
            .ok_or_else(|| Error::InvariantViolation(format!("unknown object {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub object: String,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_abs: f64,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceConfig {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub fd_step: f64,
    pub tol: f64,
    pub metric: MetricParams,
    pub kahler: KahlerParams,
}

impl InvarianceConfig {
    pub fn new(n: usize, samples: usize, seed: u64, tol: f64) -> Self {
        Self {
            n,
            samples,
            seed,
            fd_step: FD_STEP,
            tol,
            metric: MetricParams::default(),
            kahler: KahlerParams::default(),
        }
    }
}

/// Original value, pulled-back value and the magnitude used for the relative error.
struct Sample {
    orig: f64,
    pulled: f64,
    scale: f64,
}

fn metric_scale(g11: f64, g22: f64) -> f64 {
    (g11 * g22).abs().sqrt()
}

fn sample(object: InvarianceObject, cfg: &InvarianceConfig, index: u64) -> Result<Sample> {
    let mut rng = Rng::for_sample(cfg.seed, index);
    let n = cfg.n;
    let h = cfg.fd_step;
    let g = random_jacobi(&mut rng, n);
    let (mp, kp) = (&cfg.metric, &cfg.kahler);
    match object {
        InvarianceObject::MetricGroup => {
            let chart = random_sn_chart(&mut rng, n);
            let t1 = random_sn_tangent(&mut rng, &chart);
            let t2 = random_sn_tangent(&mut rng, &chart);
            let act = |c: &SnChart| sn_chart(&gj_compose(&g, &sn_chart_inverse(c)?)?);
            let moved = act(&chart)?;
            let p1 = SnTangent::from_vec(n, &pushforward(act, &chart, &t1.to_vec(), h)?);
            let p2 = SnTangent::from_vec(n, &pushforward(act, &chart, &t2.to_vec(), h)?);
            let orig = metric_group(mp, &chart, &t1, &t2)?;
            Ok(Sample {
                orig,
                pulled: metric_group(mp, &moved, &p1, &p2)?,
                scale: metric_scale(
                    metric_group(mp, &chart, &t1, &t1)?,
                    metric_group(mp, &chart, &t2, &t2)?,
                ),
            })
        }
        InvarianceObject::MetricXjn
        | InvarianceObject::MetricXjnChipsi
        | InvarianceObject::MetricXjnXirho
        | InvarianceObject::NegativeControl => {
            let chart = match object {
                InvarianceObject::MetricXjnChipsi => Chart::ChiPsi,
                InvarianceObject::MetricXjnXirho => Chart::XiRho,
                _ => Chart::Pq,
            };
            let point = ChartPoint::from_pq(&random_pq_point(&mut rng, n), chart);
            let t1 = ChartTangent::random(&mut rng, n);
            let t2 = ChartTangent::random(&mut rng, n);
            let act = |p: &ChartPoint| -> Result<ChartPoint> {
                Ok(ChartPoint::from_pq(&act_pq(&g, &p.to_pq())?, chart))
            };
            let metric = |p: &ChartPoint, a: &ChartTangent, b: &ChartTangent| -> Result<f64> {
                let extra = if object == InvarianceObject::NegativeControl {
                    CONTROL_WEIGHT * (&a.dx * &b.dx).trace()
                } else {
                    0.0
                };
                Ok(metric_xjn(mp.alpha, mp.gamma, p, a, b)? + extra)
            };
            let moved = act(&point)?;
            let p1 = ChartTangent::from_vec(n, &pushforward(act, &point, &t1.to_vec(), h)?);
            let p2 = ChartTangent::from_vec(n, &pushforward(act, &point, &t2.to_vec(), h)?);
            Ok(Sample {
                orig: metric(&point, &t1, &t2)?,
                pulled: metric(&moved, &p1, &p2)?,
                scale: metric_scale(metric(&point, &t1, &t1)?, metric(&point, &t2, &t2)?),
            })
        }
        InvarianceObject::MetricExtended => {
            let point = random_extended_point(&mut rng, n);
            let t1 = ExtendedTangent::random(&mut rng, n);
            let t2 = ExtendedTangent::random(&mut rng, n);
            let act = |p: &ExtendedPoint| act_extended(&g, p);
            let moved = act(&point)?;
            let p1 = ExtendedTangent::from_vec(n, &pushforward(act, &point, &t1.to_vec(), h)?);
            let p2 = ExtendedTangent::from_vec(n, &pushforward(act, &point, &t2.to_vec(), h)?);
            let m = |p: &ExtendedPoint, a: &ExtendedTangent, b: &ExtendedTangent| {
                metric_extended(mp.alpha, mp.gamma, mp.delta, p, a, b)
            };
            Ok(Sample {
                orig: m(&point, &t1, &t2)?,
                pulled: m(&moved, &p1, &p2)?,
                scale: metric_scale(m(&point, &t1, &t1)?, m(&point, &t2, &t2)?),
            })
        }
        InvarianceObject::KahlerXjn => {
            let point = random_vu_point(&mut rng, n);
            let t1 = HoloTangent::random(&mut rng, n);
            let t2 = HoloTangent::random(&mut rng, n);
            let act = |p: &crate::jacobi::SiegelJacobiPoint| act_xjn(&g, p);
            let moved = act(&point)?;
            let p1 = HoloTangent::from_vec(n, &pushforward(act, &point, &t1.to_vec(), h)?);
            let p2 = HoloTangent::from_vec(n, &pushforward(act, &point, &t2.to_vec(), h)?);
            let orig = kahler_xjn(kp, &point, &t1, &t2)?;
            Ok(Sample {
                orig: orig.value.re,
                pulled: kahler_xjn(kp, &moved, &p1, &p2)?.value.re,
                scale: orig.scale,
            })
        }
        InvarianceObject::KahlerBall => {
            let t = BallTransform::random(&mut rng, n);
            let point = BallPoint::random(&mut rng, n);
            let t1 = BallTangent::random(&mut rng, n);
            let t2 = BallTangent::random(&mut rng, n);
            let act = |p: &BallPoint| act_ball(&t, p);
            let moved = act(&point)?;
            let p1 = BallTangent::from_vec(n, &pushforward(act, &point, &t1.to_vec(), h)?);
            let p2 = BallTangent::from_vec(n, &pushforward(act, &point, &t2.to_vec(), h)?);
            let orig = kahler_ball(kp, &point, &t1, &t2)?;
            Ok(Sample {
                orig: orig.value.re,
                pulled: kahler_ball(kp, &moved, &p1, &p2)?.value.re,
                scale: orig.scale,
            })
        }
        InvarianceObject::LambdaR => {
            let point = random_extended_point(&mut rng, n);
            let t = ExtendedTangent::random(&mut rng, n);
            let moved = act_extended(&g, &point)?;
            let (a, b, c, d) = g.m.blocks();
            let (dp, dq) = (&t.base.d1, &t.base.d2);
            // exact differential of the affine action on (p, q, κ)
            let dp1 = dp * d.transpose() - dq * c.transpose();
            let dq1 = -(dp * b.transpose()) + dq * a.transpose();
            let dk1 = t.dkappa + g.lambda.dot(dq) - g.mu.dot(dp);
            let pushed = ExtendedTangent {
                base: ChartTangent {
                    d1: dp1,
                    d2: dq1,
                    ..t.base.clone()
                },
                dkappa: dk1,
            };
            let p = &point.base;
            Ok(Sample {
                orig: lambda_r(&point, &t),
                pulled: lambda_r(&moved, &pushed),
                scale: t.dkappa.abs() + p.p.dot(dq).abs() + p.q.dot(dp).abs(),
            })
        }
    }
}

fn random_sn_tangent(rng: &mut Rng, chart: &SnChart) -> SnTangent {
    let n = chart.dim();
    let (dxx, dyy) = SnTangent::unitary_direction(chart, &rng.anti_hermitian(n));
    SnTangent {
        dx: rng.sym(n).into_mat(),
        dy: rng.sym(n).into_mat(),
        dxx,
        dyy,
        dp: rng.row(n),
        dq: rng.row(n),
        dkappa: rng.unit(),
    }
}

/// Runs `cfg.samples` independent samples; the result depends only on `cfg`.
pub fn invariance_report(object: InvarianceObject, cfg: &InvarianceConfig) -> Result<InvarianceReport> {
    if cfg.n == 0 || cfg.samples == 0 || !(cfg.fd_step > 0.0) || !(cfg.tol > 0.0) {
        return Err(Error::InvariantViolation(
            "need n, samples, fd_step and tol positive".into(),
        ));
    }
    let results: Vec<Sample> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| sample(object, cfg, i))
        .collect::<Result<_>>()?;
    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    let mut sum_rel = 0.0;
    for s in &results {
        let err = (s.pulled - s.orig).abs();
        let rel = err / s.orig.abs().max(s.scale).max(f64::MIN_POSITIVE);
        max_abs = max_abs.max(err);
        max_rel = max_rel.max(rel);
        sum_rel += rel;
    }
    Ok(InvarianceReport {
        object: object.name().to_string(),
        n: cfg.n,
        samples: cfg.samples,
        seed: cfg.seed,
        max_abs,
        max_rel,
        mean_rel: sum_rel / results.len() as f64,
        pass: max_rel <= cfg.tol,
    })
}

/// Whether the report matches what the object is expected to do:
/// pass for invariant objects, fail for the negative control.
pub fn as_expected(object: InvarianceObject, report: &InvarianceReport) -> bool {
    report.pass != (object == InvarianceObject::NegativeControl)
}

