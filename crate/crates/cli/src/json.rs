//! Conversions between JSON values and the library types.
//!
//! Matrices are row-major nested arrays, rows are flat arrays and complex
//! numbers are `[re, im]` pairs. A bare number is accepted wherever a complex
//! entry is expected.

use jacobi_core::jacobi::{ChartPoint, ExtendedPoint, JacobiElement, PqPoint, SiegelJacobiPoint, SnChart};
use jacobi_core::linalg::{CMat, CRow, Mat, Row, SpdMatrix, SymMatrix};
use jacobi_core::symplectic::{SiegelPoint, SymplecticMatrix, UnitaryPair};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::CliError;

type Res<T> = std::result::Result<T, CliError>;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn field<'a>(obj: &'a Value, key: &str) -> Res<&'a Value> {
    obj.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

pub fn opt_field<'a>(obj: &'a Value, key: &str) -> Option<&'a Value> {
    obj.get(key).filter(|v| !v.is_null())
}

pub fn number(v: &Value, what: &str) -> Res<f64> {
    v.as_f64().ok_or_else(|| bad(format!("{what}: expected a number")))
}

fn complex(v: &Value, what: &str) -> Res<Complex64> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex64::new(number(re, what)?, number(im, what)?)),
        _ => Err(bad(format!("{what}: expected a number or [re, im]"))),
    }
}

fn grid<T>(v: &Value, what: &str, entry: impl Fn(&Value, &str) -> Res<T>) -> Res<(usize, usize, Vec<T>)> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad(format!("{what}: expected an array of rows")))?;
    let cols = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
    let mut data = Vec::with_capacity(rows.len() * cols);
    for r in rows {
        let r = r
            .as_array()
            .ok_or_else(|| bad(format!("{what}: expected an array of rows")))?;
        if r.len() != cols {
            return Err(bad(format!("{what}: ragged rows")));
        }
        for x in r {
            data.push(entry(x, what)?);
        }
    }
    Ok((rows.len(), cols, data))
}

pub fn mat(v: &Value, what: &str) -> Res<Mat> {
    let (r, c, data) = grid(v, what, number)?;
    Ok(Mat::from_row_slice(r, c, &data))
}

pub fn cmat(v: &Value, what: &str) -> Res<CMat> {
    let (r, c, data) = grid(v, what, complex)?;
    Ok(CMat::from_row_slice(r, c, &data))
}

pub fn row(v: &Value, what: &str) -> Res<Row> {
    let xs = v
        .as_array()
        .ok_or_else(|| bad(format!("{what}: expected an array")))?
        .iter()
        .map(|x| number(x, what))
        .collect::<Res<Vec<_>>>()?;
    Ok(Row::from_row_slice(&xs))
}

pub fn crow(v: &Value, what: &str) -> Res<CRow> {
    let xs = v
        .as_array()
        .ok_or_else(|| bad(format!("{what}: expected an array")))?
        .iter()
        .map(|x| complex(x, what))
        .collect::<Res<Vec<_>>>()?;
    Ok(CRow::from_row_slice(&xs))
}

fn sized_row(v: &Value, what: &str, n: usize) -> Res<Row> {
    let r = row(v, what)?;
    if r.len() != n {
        return Err(bad(format!("{what}: expected length {n}, got {}", r.len())));
    }
    Ok(r)
}

fn sized_mat(v: &Value, what: &str, n: usize) -> Res<Mat> {
    let m = mat(v, what)?;
    if m.shape() != (n, n) {
        return Err(bad(format!("{what}: expected {n}x{n}, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(m)
}

pub fn opt_row(obj: &Value, key: &str, n: usize) -> Res<Row> {
    opt_field(obj, key).map_or(Ok(Row::zeros(n)), |v| sized_row(v, key, n))
}

pub fn opt_mat(obj: &Value, key: &str, n: usize) -> Res<Mat> {
    opt_field(obj, key).map_or(Ok(Mat::zeros(n, n)), |v| sized_mat(v, key, n))
}

pub fn opt_number(obj: &Value, key: &str, default: f64) -> Res<f64> {
    opt_field(obj, key).map_or(Ok(default), |v| number(v, key))
}

pub fn mat_json(m: &Mat) -> Value {
    m.row_iter()
        .map(|r| r.iter().copied().collect::<Vec<f64>>())
        .collect::<Vec<_>>()
        .into()
}

pub fn row_json(r: &Row) -> Value {
    r.iter().copied().collect::<Vec<f64>>().into()
}

fn c_json(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn cmat_json(m: &CMat) -> Value {
    Value::Array(
        m.row_iter()
            .map(|r| Value::Array(r.iter().map(c_json).collect()))
            .collect(),
    )
}

pub fn crow_json(r: &CRow) -> Value {
    Value::Array(r.iter().map(c_json).collect())
}

/// Dimension `n` of a point or element, read off the first field that fixes it.
fn dim_from(obj: &Value, keys: &[&str]) -> Res<usize> {
    for k in keys {
        if let Some(v) = opt_field(obj, k) {
            if let Some(a) = v.as_array() {
                return Ok(a.len());
            }
        }
    }
    Err(bad(format!("cannot infer n: none of {keys:?} given")))
}

pub fn sym(v: &Value, what: &str, n: usize) -> Res<SymMatrix> {
    Ok(SymMatrix::new(sized_mat(v, what, n)?)?)
}

pub fn spd(v: &Value, what: &str, n: usize) -> Res<SpdMatrix> {
    Ok(SpdMatrix::new(sized_mat(v, what, n)?)?)
}

/// `{"m", "lambda", "mu", "kappa"}`; missing parts default to the identity.
pub fn element(v: &Value) -> Res<JacobiElement> {
    let m = match opt_field(v, "m") {
        Some(m) => Some(SymplecticMatrix::new(mat(m, "m")?)?),
        None => None,
    };
    let n = match &m {
        Some(m) => m.degree(),
        None => dim_from(v, &["lambda", "mu"])?,
    };
    let m = m.unwrap_or_else(|| SymplecticMatrix::identity(n));
    Ok(JacobiElement::new(
        m,
        opt_row(v, "lambda", n)?,
        opt_row(v, "mu", n)?,
        opt_number(v, "kappa", 0.0)?,
    )?)
}

pub fn siegel(v: &Value) -> Res<SiegelPoint> {
    Ok(SiegelPoint::from_complex(&cmat(field(v, "v")?, "v")?)?)
}

pub fn siegel_json(v: &SiegelPoint) -> Value {
    json!({ "v": cmat_json(&v.v()) })
}

pub fn vu(v: &Value) -> Res<SiegelJacobiPoint> {
    let s = siegel(v)?;
    let u = crow(field(v, "u")?, "u")?;
    if u.len() != s.dim() {
        return Err(bad(format!("u: expected length {}, got {}", s.dim(), u.len())));
    }
    Ok(SiegelJacobiPoint { v: s, u })
}

pub fn vu_json(p: &SiegelJacobiPoint) -> Value {
    json!({ "v": cmat_json(&p.v.v()), "u": crow_json(&p.u) })
}

pub fn pq(v: &Value) -> Res<PqPoint> {
    let n = dim_from(v, &["y", "x"])?;
    Ok(PqPoint {
        x: sym(field(v, "x")?, "x", n)?,
        y: spd(field(v, "y")?, "y", n)?,
        p: opt_row(v, "p", n)?,
        q: opt_row(v, "q", n)?,
    })
}

pub fn pq_json(p: &PqPoint) -> Value {
    json!({
        "x": mat_json(p.x.as_mat()),
        "y": mat_json(p.y.as_mat()),
        "p": row_json(&p.p),
        "q": row_json(&p.q),
    })
}

pub fn extended(v: &Value) -> Res<ExtendedPoint> {
    Ok(ExtendedPoint {
        base: pq(v)?,
        kappa: opt_number(v, "kappa", 0.0)?,
    })
}

pub fn extended_json(p: &ExtendedPoint) -> Value {
    let mut out = pq_json(&p.base);
    out["kappa"] = p.kappa.into();
    out
}

/// A point tagged with `"chart": "pq" | "xirho" | "chipsi"`.
pub fn chart_point(v: &Value) -> Res<ChartPoint> {
    let chart = opt_field(v, "chart").and_then(Value::as_str).unwrap_or("pq");
    let n = dim_from(v, &["y", "x"])?;
    let (x, y) = (sym(field(v, "x")?, "x", n)?, spd(field(v, "y")?, "y", n)?);
    match chart {
        "pq" => pq(v).map(ChartPoint::Pq),
        "xirho" => Ok(ChartPoint::XiRho {
            x,
            y,
            xi: opt_row(v, "xi", n)?,
            rho: opt_row(v, "rho", n)?,
        }),
        "chipsi" => Ok(ChartPoint::ChiPsi {
            x,
            y,
            chi: opt_row(v, "chi", n)?.transpose(),
            psi: opt_row(v, "psi", n)?.transpose(),
        }),
        other => Err(bad(format!("chart `{other}`: expected pq, xirho or chipsi"))),
    }
}

pub fn chart_point_json(p: &ChartPoint) -> Value {
    match p {
        ChartPoint::Pq(pq) => {
            let mut out = pq_json(pq);
            out["chart"] = "pq".into();
            out
        }
        ChartPoint::XiRho { x, y, xi, rho } => json!({
            "chart": "xirho",
            "x": mat_json(x.as_mat()),
            "y": mat_json(y.as_mat()),
            "xi": row_json(xi),
            "rho": row_json(rho),
        }),
        ChartPoint::ChiPsi { x, y, chi, psi } => json!({
            "chart": "chipsi",
            "x": mat_json(x.as_mat()),
            "y": mat_json(y.as_mat()),
            "chi": row_json(&chi.transpose()),
            "psi": row_json(&psi.transpose()),
        }),
        ChartPoint::Vu(p) => {
            let mut out = vu_json(p);
            out["chart"] = "vu".into();
            out
        }
    }
}

pub fn sn_chart(v: &Value) -> Res<SnChart> {
    let n = dim_from(v, &["y", "x"])?;
    let u = field(v, "unitary")?;
    Ok(SnChart {
        x: sym(field(v, "x")?, "x", n)?,
        y: spd(field(v, "y")?, "y", n)?,
        unitary: UnitaryPair::new(
            sized_mat(field(u, "x")?, "unitary.x", n)?,
            sized_mat(field(u, "y")?, "unitary.y", n)?,
        )?,
        p: opt_row(v, "p", n)?,
        q: opt_row(v, "q", n)?,
        kappa: opt_number(v, "kappa", 0.0)?,
    })
}

pub fn unitary_json(u: &UnitaryPair) -> Value {
    json!({ "x": mat_json(u.x()), "y": mat_json(u.y()) })
}

pub fn sn_chart_json(c: &SnChart) -> Value {
    json!({
        "x": mat_json(c.x.as_mat()),
        "y": mat_json(c.y.as_mat()),
        "unitary": unitary_json(&c.unitary),
        "p": row_json(&c.p),
        "q": row_json(&c.q),
        "kappa": c.kappa,
    })
}
