use jacobi_core::algebra::commutator_table;
use jacobi_core::forms::{oneforms_sn, OneFormCoefficients, SnTangent};
use jacobi_core::invariance::{invariance_report, InvarianceConfig, InvarianceObject};
use jacobi_core::jacobi::{act_extended, act_pq, act_xjn, gj_embed, ChartPoint};
use jacobi_core::linalg::{dsqrtm, max_abs, sqrtm_spd, Mat, SpdMatrix, SymMatrix};
use jacobi_core::metrics::{
    metric_extended, metric_group, metric_xjn, ChartTangent, ExtendedTangent, MetricParams,
};
use jacobi_core::sampling::{random_extended_point, random_pq_point, random_sn_chart, Rng};
use jacobi_core::symplectic::{
    block_relation_residual, decompose, mobius_act, symplectic_residual, SymplecticMatrix, Variant,
};
use serde_json::{json, Value};

use crate::json::*;
use crate::{CliError, JobSpec};

type Res<T> = std::result::Result<T, CliError>;

/// A command result: the JSON document and whether the verdict was positive.
pub struct Output {
    pub doc: Value,
    pub ok: bool,
}

fn ok(doc: Value) -> Res<Output> {
    Ok(Output { doc, ok: true })
}

fn input(job: &JobSpec) -> Res<&Value> {
    job.payload
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs JSON input".into()))
}

/// `{"matrix": ...}`, `{"element": ...}` or a bare nested array.
pub fn check(job: &JobSpec) -> Res<Output> {
    let v = input(job)?;
    let (m, source) = if v.is_array() {
        (mat(v, "matrix")?, "matrix")
    } else if let Some(e) = opt_field(v, "element") {
        (gj_embed(&element(e)?), "element")
    } else {
        (mat(field(v, "matrix")?, "matrix")?, "matrix")
    };
    let residual = symplectic_residual(&m)?;
    let blocks = block_relation_residual(&m)?;
    let symplectic = residual <= job.tol;
    let relations = blocks <= job.tol;
    Ok(Output {
        doc: json!({
            "source": source,
            "degree": m.nrows() / 2,
            "symplectic": symplectic,
            "residual": residual,
            "block_relations": relations,
            "block_residual": blocks,
            "tol": job.tol,
        }),
        ok: symplectic && relations,
    })
}

pub fn decompose_cmd(job: &JobSpec, variant: Variant) -> Res<Output> {
    let v = input(job)?;
    let m = mat(opt_field(v, "matrix").unwrap_or(v), "matrix")?;
    let m = SymplecticMatrix::new(m)?;
    let f = decompose(&m, variant)?;
    let residual = max_abs(&(f.compose()?.into_mat() - m.as_mat()));
    ok(json!({
        "variant": variant,
        "x": mat_json(f.x.as_mat()),
        "y": mat_json(f.y.as_mat()),
        "unitary": unitary_json(&f.unitary),
        "residual": residual,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ActSpace {
    /// Siegel upper half space, `{"v"}`; only `m` of the element acts.
    Siegel,
    /// `{"v", "u"}`.
    Vu,
    /// `{"x", "y", "p", "q"}`.
    Pq,
    /// `{"x", "y", "p", "q", "kappa"}`.
    Extended,
}

/// `{"element": ..., "point": ...}`.
pub fn act(job: &JobSpec, space: ActSpace) -> Res<Output> {
    let v = input(job)?;
    let g = element(field(v, "element")?)?;
    let pt = field(v, "point")?;
    let moved = match space {
        ActSpace::Siegel => siegel_json(&mobius_act(&g.m, &siegel(pt)?)?),
        ActSpace::Vu => vu_json(&act_xjn(&g, &vu(pt)?)?),
        ActSpace::Pq => pq_json(&act_pq(&g, &pq(pt)?)?),
        ActSpace::Extended => extended_json(&act_extended(&g, &extended(pt)?)?),
    };
    ok(json!({ "point": moved }))
}

fn sn_tangent(v: &Value, n: usize) -> Res<SnTangent> {
    Ok(SnTangent {
        dx: opt_mat(v, "dx", n)?,
        dy: opt_mat(v, "dy", n)?,
        dxx: opt_mat(v, "dxx", n)?,
        dyy: opt_mat(v, "dyy", n)?,
        dp: opt_row(v, "dp", n)?,
        dq: opt_row(v, "dq", n)?,
        dkappa: opt_number(v, "dkappa", 0.0)?,
    })
}

fn sn_tangent_json(t: &SnTangent) -> Value {
    json!({
        "dx": mat_json(&t.dx),
        "dy": mat_json(&t.dy),
        "dxx": mat_json(&t.dxx),
        "dyy": mat_json(&t.dyy),
        "dp": row_json(&t.dp),
        "dq": row_json(&t.dq),
        "dkappa": t.dkappa,
    })
}

fn random_sn_tangent(rng: &mut Rng, chart: &jacobi_core::jacobi::SnChart) -> SnTangent {
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

fn forms_json(f: &OneFormCoefficients) -> Value {
    json!({
        "f": mat_json(&f.f),
        "g": mat_json(&f.g),
        "h": mat_json(&f.h),
        "p": row_json(&f.p),
        "q": row_json(&f.q),
        "r": f.r,
    })
}

/// `{"chart": ..., "tangent": ...}`, or a seeded random pair without input.
pub fn oneforms(job: &JobSpec) -> Res<Output> {
    let (chart, t) = match &job.payload {
        Some(v) => {
            let chart = sn_chart(field(v, "chart")?)?;
            let t = sn_tangent(field(v, "tangent")?, chart.dim())?;
            (chart, t)
        }
        None => {
            let mut rng = Rng::new(job.seed);
            let chart = random_sn_chart(&mut rng, job.n);
            let t = random_sn_tangent(&mut rng, &chart);
            (chart, t)
        }
    };
    let forms = oneforms_sn(&chart, &t)?;
    ok(json!({
        "chart": sn_chart_json(&chart),
        "tangent": sn_tangent_json(&t),
        "constraint_residual": t.constraint_residual(&chart),
        "forms": forms_json(&forms),
    }))
}

fn chart_tangent(v: &Value, n: usize) -> Res<ChartTangent> {
    Ok(ChartTangent {
        dx: opt_mat(v, "dx", n)?,
        dy: opt_mat(v, "dy", n)?,
        d1: opt_row(v, "d1", n)?,
        d2: opt_row(v, "d2", n)?,
    })
}

fn chart_tangent_json(t: &ChartTangent) -> Value {
    json!({
        "dx": mat_json(&t.dx),
        "dy": mat_json(&t.dy),
        "d1": row_json(&t.d1),
        "d2": row_json(&t.d2),
    })
}

fn extended_tangent(v: &Value, n: usize) -> Res<ExtendedTangent> {
    Ok(ExtendedTangent {
        base: chart_tangent(v, n)?,
        dkappa: opt_number(v, "dkappa", 0.0)?,
    })
}

fn extended_tangent_json(t: &ExtendedTangent) -> Value {
    let mut out = chart_tangent_json(&t.base);
    out["dkappa"] = t.dkappa.into();
    out
}

fn metric_params(v: Option<&Value>) -> Res<MetricParams> {
    let d = MetricParams::default();
    let Some(p) = v.and_then(|v| opt_field(v, "params")) else {
        return Ok(d);
    };
    Ok(MetricParams::new(
        opt_number(p, "alpha", d.alpha)?,
        opt_number(p, "beta", d.beta)?,
        opt_number(p, "gamma", d.gamma)?,
        opt_number(p, "delta", d.delta)?,
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MetricKind {
    /// Two-parameter metric on the Siegel-Jacobi space, any real chart.
    #[value(name = "metric_xjn", alias = "metric-xjn")]
    Xjn,
    /// `metric_xjn` in the `(x, y, p, q)` chart plus `δ (λ^R)²`.
    #[value(name = "metric_extended", alias = "metric-extended")]
    Extended,
    /// Left-invariant metric on the group in S_n coordinates.
    #[value(name = "metric_group", alias = "metric-group")]
    Group,
}

/// `{"point" | "chart", "t1", "t2", "params"}`, or a seeded random sample.
pub fn metric(job: &JobSpec, kind: MetricKind) -> Res<Output> {
    let params = metric_params(job.payload.as_ref())?;
    let mut rng = Rng::new(job.seed);
    let n = job.n;
    let (value, point, t1, t2) = match (kind, &job.payload) {
        (MetricKind::Xjn, Some(v)) => {
            let pt = chart_point(field(v, "point")?)?;
            let n = pt.to_pq().x.dim();
            let t1 = chart_tangent(field(v, "t1")?, n)?;
            let t2 = chart_tangent(field(v, "t2")?, n)?;
            let g = metric_xjn(params.alpha, params.gamma, &pt, &t1, &t2)?;
            (g, chart_point_json(&pt), chart_tangent_json(&t1), chart_tangent_json(&t2))
        }
        (MetricKind::Xjn, None) => {
            let pt = ChartPoint::Pq(random_pq_point(&mut rng, n));
            let (t1, t2) = (ChartTangent::random(&mut rng, n), ChartTangent::random(&mut rng, n));
            let g = metric_xjn(params.alpha, params.gamma, &pt, &t1, &t2)?;
            (g, chart_point_json(&pt), chart_tangent_json(&t1), chart_tangent_json(&t2))
        }
        (MetricKind::Extended, payload) => {
            let (pt, t1, t2) = match payload {
                Some(v) => {
                    let pt = extended(field(v, "point")?)?;
                    let n = pt.base.x.dim();
                    let t1 = extended_tangent(field(v, "t1")?, n)?;
                    let t2 = extended_tangent(field(v, "t2")?, n)?;
                    (pt, t1, t2)
                }
                None => (
                    random_extended_point(&mut rng, n),
                    ExtendedTangent::random(&mut rng, n),
                    ExtendedTangent::random(&mut rng, n),
                ),
            };
            let g = metric_extended(params.alpha, params.gamma, params.delta, &pt, &t1, &t2)?;
            (g, extended_json(&pt), extended_tangent_json(&t1), extended_tangent_json(&t2))
        }
        (MetricKind::Group, payload) => {
            let (chart, t1, t2) = match payload {
                Some(v) => {
                    let chart = sn_chart(field(v, "chart")?)?;
                    let n = chart.dim();
                    (chart, sn_tangent(field(v, "t1")?, n)?, sn_tangent(field(v, "t2")?, n)?)
                }
                None => {
                    let chart = random_sn_chart(&mut rng, n);
                    let t1 = random_sn_tangent(&mut rng, &chart);
                    let t2 = random_sn_tangent(&mut rng, &chart);
                    (chart, t1, t2)
                }
            };
            let g = metric_group(&params, &chart, &t1, &t2)?;
            (g, sn_chart_json(&chart), sn_tangent_json(&t1), sn_tangent_json(&t2))
        }
    };
    ok(json!({
        "object": kind_name(kind),
        "params": params,
        "point": point,
        "t1": t1,
        "t2": t2,
        "value": value,
    }))
}

fn kind_name(kind: MetricKind) -> &'static str {
    match kind {
        MetricKind::Xjn => "metric_xjn",
        MetricKind::Extended => "metric_extended",
        MetricKind::Group => "metric_group",
    }
}

pub fn commutators(job: &JobSpec) -> Res<Output> {
    let t = commutator_table(job.n)?;
    let names: Vec<String> = t.generators.iter().map(ToString::to_string).collect();
    let mut brackets = Vec::new();
    for (i, &x) in t.generators.iter().enumerate() {
        for &y in &t.generators[i + 1..] {
            let terms: Vec<Value> = t
                .bracket_terms(x, y)
                .into_iter()
                .map(|(g, c)| json!([g.to_string(), c]))
                .collect();
            if !terms.is_empty() {
                brackets.push(json!({ "x": x.to_string(), "y": y.to_string(), "terms": terms }));
            }
        }
    }
    ok(json!({
        "n": t.n,
        "generators": names,
        "constants": t.constants,
        "brackets": brackets,
    }))
}

pub fn invariance(job: &JobSpec, object: InvarianceObject) -> Res<Output> {
    let mut cfg = InvarianceConfig::new(job.n, job.samples, job.seed, job.tol);
    cfg.fd_step = job.fd_step;
    let r = invariance_report(object, &cfg)?;
    let pass = r.pass;
    let doc = serde_json::to_value(&r).map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(Output { doc, ok: pass })
}

/// `{"a": ..., "da": ...}`; `a` must be SPD and `da` symmetric.
pub fn sqrt_diff(job: &JobSpec) -> Res<Output> {
    let v = input(job)?;
    let a: Mat = mat(field(v, "a")?, "a")?;
    let n = a.nrows();
    let a = SpdMatrix::new(a)?;
    let da = SymMatrix::new(mat(field(v, "da")?, "da")?)?;
    if da.dim() != n {
        return Err(CliError::Usage(format!("da: expected {n}x{n}")));
    }
    ok(json!({
        "sqrt": mat_json(sqrtm_spd(&a).as_mat()),
        "dsqrt": mat_json(dsqrtm(&a, &da)?.as_mat()),
    }))
}
