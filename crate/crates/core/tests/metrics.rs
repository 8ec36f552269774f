use num_complex::Complex64;

use jacobi_core::fd::pushforward;
use jacobi_core::forms::{N1Point, N1Tangent};
use jacobi_core::jacobi::{chart_convert, Chart, ChartPoint, PqPoint, SiegelJacobiPoint};
use jacobi_core::linalg::{cmax_abs, CMat, CRow, Mat, Row};
use jacobi_core::metrics::*;
use jacobi_core::sampling::*;
use jacobi_core::symplectic::SiegelPoint;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn metric_xjn_at_base_point() {
    let base = ChartPoint::Pq(PqPoint::base(2));
    let mut t = ChartTangent::zeros(2);
    t.dx = Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, -1.0]);
    let v = metric_xjn(0.75, 1.25, &base, &t, &t).unwrap();
    assert!((v - 0.75 * (&t.dx * &t.dx).trace()).abs() < 1e-14);
    let mut t = ChartTangent::zeros(2);
    t.d2 = Row::from_row_slice(&[0.5, -2.0]);
    let v = metric_xjn(0.75, 1.25, &base, &t, &t).unwrap();
    assert!((v - 1.25 * 4.25).abs() < 1e-14);
    let vu = ChartPoint::Vu(SiegelJacobiPoint::base(2));
    assert!(metric_xjn(1.0, 1.0, &vu, &t, &t).is_err());
    assert!(metric_xjn(0.0, 1.0, &base, &t, &t).is_err());
}

#[test]
fn metric_xjn_charts_agree() {
    let mut rng = Rng::new(31);
    for n in 1..=3 {
        for _ in 0..20 {
            let pq = ChartPoint::Pq(random_pq_point(&mut rng, n));
            let t1 = ChartTangent::random(&mut rng, n);
            let t2 = ChartTangent::random(&mut rng, n);
            let want = metric_xjn(0.75, 1.25, &pq, &t1, &t2).unwrap();
            for chart in [Chart::XiRho, Chart::ChiPsi] {
                let conv = |p: &ChartPoint| Ok(chart_convert(p, chart));
                let other = chart_convert(&pq, chart);
                let s1 = ChartTangent::from_vec(n, &pushforward(conv, &pq, &t1.to_vec(), 1e-6).unwrap());
                let s2 = ChartTangent::from_vec(n, &pushforward(conv, &pq, &t2.to_vec(), 1e-6).unwrap());
                let got = metric_xjn(0.75, 1.25, &other, &s1, &s2).unwrap();
                assert!((got - want).abs() < 1e-9 * (1.0 + want.abs()), "{chart:?}");
            }
        }
    }
}

#[test]
fn metric_extended_properties() {
    let mut rng = Rng::new(32);
    let n = 2;
    let pt = random_extended_point(&mut rng, n);
    let mut t = ExtendedTangent { base: ChartTangent::zeros(n), dkappa: 1.5 };
    assert!((metric_extended(0.75, 1.25, 0.6, &pt, &t, &t).unwrap() - 0.6 * 2.25).abs() < 1e-14);
    t = ExtendedTangent::random(&mut rng, n);
    let s = ExtendedTangent::random(&mut rng, n);
    let base = ChartPoint::Pq(pt.base.clone());
    assert_eq!(
        metric_extended(0.75, 1.25, 0.0, &pt, &t, &s).unwrap(),
        metric_xjn(0.75, 1.25, &base, &t.base, &s.base).unwrap()
    );
    // polarization
    let g = |a: &ExtendedTangent, b: &ExtendedTangent| metric_extended(0.75, 1.25, 0.6, &pt, a, b).unwrap();
    let n_ = |v: &jacobi_core::fd::Vector| ExtendedTangent::from_vec(n, v);
    let plus = n_(&(t.to_vec() + s.to_vec()));
    let minus = n_(&(t.to_vec() - s.to_vec()));
    assert!((g(&t, &s) - 0.25 * (g(&plus, &plus) - g(&minus, &minus))).abs() < 1e-12);
}

#[test]
fn metric_extended_positive_definite() {
    let mut rng = Rng::new(33);
    let n = 2;
    let dim = 2 * n * n + 2 * n + 1;
    for _ in 0..100 {
        let pt = random_extended_point(&mut rng, n);
        let basis: Vec<ExtendedTangent> = (0..dim)
            .map(|i| {
                let mut v = jacobi_core::fd::Vector::zeros(dim);
                v[i] = 1.0;
                let mut t = ExtendedTangent::from_vec(n, &v);
                // symmetric directions only
                t.base.dx = (&t.base.dx + t.base.dx.transpose()) * 0.5;
                t.base.dy = (&t.base.dy + t.base.dy.transpose()) * 0.5;
                t
            })
            .collect();
        let gram = Mat::from_fn(dim, dim, |i, j| {
            metric_extended(0.75, 1.25, 0.6, &pt, &basis[i], &basis[j]).unwrap()
        });
        let eig = gram.symmetric_eigen().eigenvalues;
        // duplicated off-diagonal directions give zero eigenvalues; drop them
        let mut pos: Vec<f64> = eig.iter().copied().filter(|e| e.abs() > 1e-12).collect();
        pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(pos.len(), 3 + 3 + 2 * n + 1);
        assert!(pos[0] > 0.0);
    }
}

#[test]
fn metric_group_gram_at_base_point() {
    // at x = 0, y = 1, θ = 0: λ^F + λ^G = dx, λ^H = dy/2, λ^F - λ^G = dx + 2dθ
    let pt = N1Point { x: 0.0, y: 1.0, theta: 0.0, p: 0.0, q: 0.0, kappa: 0.0 };
    let chart = pt.chart().unwrap();
    let params = MetricParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
    let unit = |i: usize| {
        let mut v = [0.0; 6];
        v[i] = 1.0;
        N1Tangent { dx: v[0], dy: v[1], dtheta: v[2], dp: v[3], dq: v[4], dkappa: v[5] }.sn_tangent(&pt)
    };
    let gram = Mat::from_fn(6, 6, |i, j| metric_group(&params, &chart, &unit(i), &unit(j)).unwrap());
    let want = Mat::from_row_slice(
        6,
        6,
        &[
            2.0, 0.0, 2.0, 0.0, 0.0, 0.0, //
            0.0, 0.25, 0.0, 0.0, 0.0, 0.0, //
            2.0, 0.0, 4.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
        ],
    );
    assert!(jacobi_core::linalg::max_abs(&(gram - want)) < 1e-14);
}

#[test]
fn metric_group_kappa_direction() {
    let mut rng = Rng::new(34);
    let chart = random_sn_chart(&mut rng, 2);
    let mut t = jacobi_core::forms::SnTangent::zeros(2);
    t.dkappa = 2.0;
    let p = MetricParams::default();
    assert!((metric_group(&p, &chart, &t, &t).unwrap() - p.delta * 4.0).abs() < 1e-14);
}

#[test]
fn siegel_sector_ratio_depends_on_angle() {
    let dx = Mat::from_element(1, 1, 1.0);
    let dy = Mat::zeros(1, 1);
    let at = |theta: f64| {
        let pt = N1Point { x: 0.0, y: 1.0, theta, p: 0.0, q: 0.0, kappa: 0.0 };
        siegel_sector_ratio(&pt.chart().unwrap(), &dx, &dy).unwrap()
    };
    // cos²2θ + sin²2θ / 4
    assert!((at(0.0) - 1.0).abs() < 1e-14);
    assert!((at(std::f64::consts::FRAC_PI_8) - 0.625).abs() < 1e-14);
    assert!((at(std::f64::consts::FRAC_PI_4) - 0.25).abs() < 1e-14);
}

#[test]
fn kahler_forms_are_antisymmetric_and_real() {
    let mut rng = Rng::new(35);
    let kp = KahlerParams::default();
    for n in 1..=3 {
        let pt = random_vu_point(&mut rng, n);
        let (a, b) = (HoloTangent::random(&mut rng, n), HoloTangent::random(&mut rng, n));
        let w = kahler_xjn(&kp, &pt, &a, &b).unwrap().value;
        assert!((w + kahler_xjn(&kp, &pt, &b, &a).unwrap().value).norm() < 1e-12);
        assert!(w.im.abs() < 1e-12 * (1.0 + w.re.abs()));
        let bp = BallPoint::random(&mut rng, n);
        let (a, b) = (BallTangent::random(&mut rng, n), BallTangent::random(&mut rng, n));
        let w = kahler_ball(&kp, &bp, &a, &b).unwrap().value;
        assert!((w + kahler_ball(&kp, &bp, &b, &a).unwrap().value).norm() < 1e-12);
        assert!(w.im.abs() < 1e-12 * (1.0 + w.re.abs()));
    }
}

#[test]
fn kahler_ball_at_center() {
    let mut rng = Rng::new(36);
    let kp = KahlerParams::default();
    let n = 2;
    let (a, b) = (BallTangent::random(&mut rng, n), BallTangent::random(&mut rng, n));
    let wedge = |x: Complex64, y: Complex64| I * (x - y);
    let bb = (&a.dw * b.dw.map(|z| z.conj())).trace();
    let ba = (&b.dw * a.dw.map(|z| z.conj())).trace();
    let zz = (&a.dz * b.dz.map(|z| z.conj()).transpose())[0];
    let zb = (&b.dz * a.dz.map(|z| z.conj()).transpose())[0];
    let want = wedge(bb, ba) * (kp.k / 2.0) + wedge(zz, zb) * kp.nu;
    let got = kahler_ball(&kp, &BallPoint::center(n), &a, &b).unwrap().value;
    assert!((got - want).norm() < 1e-13);
}

#[test]
fn kahler_xjn_at_base_point() {
    // D = i/2, H = (i/2) dv, G = du
    let kp = KahlerParams::new(2.0, 1.0).unwrap();
    let pt = SiegelJacobiPoint::base(1);
    let t1 = HoloTangent { dv: CMat::from_element(1, 1, c(1.0, 0.0)), du: CRow::zeros(1) };
    let t2 = HoloTangent { dv: CMat::from_element(1, 1, c(0.0, 1.0)), du: CRow::zeros(1) };
    // -iω = (k/2)(1/4)(dv1 dv̄2 - dv2 dv̄1) = (1/4)(-i - i)
    let w = kahler_xjn(&kp, &pt, &t1, &t2).unwrap().value;
    assert!((w - c(0.5, 0.0)).norm() < 1e-15);
    let t3 = HoloTangent { dv: CMat::zeros(1, 1), du: CRow::from_element(1, c(1.0, 0.0)) };
    let t4 = HoloTangent { dv: CMat::zeros(1, 1), du: CRow::from_element(1, c(0.0, 1.0)) };
    // -iω = (2ν/i)(i/2)(du1 dū2 - du2 dū1) = ν(-2i)
    let w = kahler_xjn(&kp, &pt, &t3, &t4).unwrap().value;
    assert!((w - c(2.0, 0.0)).norm() < 1e-15);
}

#[test]
fn kahler_xjn_associated_metric() {
    // ω(t1, i t2) equals metric_xjn with α = k/4 and γ = 2ν
    let mut rng = Rng::new(37);
    let kp = KahlerParams::default();
    for n in 1..=3 {
        for _ in 0..20 {
            let pt = random_vu_point(&mut rng, n);
            let (a, b) = (HoloTangent::random(&mut rng, n), HoloTangent::random(&mut rng, n));
            let got = kahler_xjn_metric(&kp, &pt, &a, &b).unwrap();
            let chart = ChartPoint::Pq(pt.to_pq());
            let (pa, pb) = (a.to_pq(&pt), b.to_pq(&pt));
            let want = metric_xjn(kp.k / 4.0, 2.0 * kp.nu, &chart, &pa, &pb).unwrap();
            assert!((got - want).abs() < 1e-10 * (1.0 + want.abs()));
            let half = metric_xjn(kp.k / 4.0, kp.nu, &chart, &pa, &pb).unwrap();
            let gap = (got - half).abs();
            let heis = metric_xjn(kp.k / 4.0, kp.nu, &chart, &pa, &pb).unwrap()
                - metric_xjn(kp.k / 4.0, 0.0, &chart, &pa, &pb).unwrap();
            assert!((gap - heis.abs()).abs() < 1e-10 * (1.0 + gap));
        }
    }
}

#[test]
fn g_form_in_pq_chart() {
    let mut rng = Rng::new(38);
    for n in 1..=3 {
        let pq = random_pq_point(&mut rng, n);
        let t = ChartTangent::random(&mut rng, n);
        let g = g_form(&pq.to_vu(), &holo_from_pq(&pq, &t)).unwrap();
        let v = pq.siegel().v();
        let want = jacobi_core::linalg::row_to_complex(&t.d1) * v + jacobi_core::linalg::row_to_complex(&t.d2);
        assert!((g - want).iter().all(|z| z.norm() < 1e-12));
    }
    let pt = SiegelJacobiPoint::base(2);
    assert_eq!(
        g_form(&pt, &HoloTangent { dv: CMat::zeros(2, 2), du: CRow::zeros(2) }).unwrap(),
        CRow::zeros(2)
    );
}

#[test]
fn holo_tangent_conversion_matches_chart_map() {
    let mut rng = Rng::new(39);
    let pt = random_vu_point(&mut rng, 2);
    let t = HoloTangent::random(&mut rng, 2);
    let push = pushforward(|p: &SiegelJacobiPoint| Ok(p.to_pq()), &pt, &t.to_vec(), 1e-6).unwrap();
    assert!((t.to_pq(&pt).to_vec() - push).amax() < 1e-8);
}

#[test]
fn cayley_cases() {
    let b = cayley(&SiegelJacobiPoint::base(2)).unwrap();
    assert!(cmax_abs(&b.w) < 1e-15 && b.z.iter().all(|z| z.norm() < 1e-15));
    let v = SiegelPoint::from_complex(&CMat::from_element(1, 1, c(0.0, 2.0))).unwrap();
    let b = cayley(&SiegelJacobiPoint { v, u: CRow::zeros(1) }).unwrap();
    assert!((b.w[(0, 0)] - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
}

#[test]
fn transform_roundtrips() {
    let mut rng = Rng::new(40);
    for n in 1..=3 {
        for _ in 0..50 {
            let pt = random_vu_point(&mut rng, n);
            let back = cayley_inverse(&cayley(&pt).unwrap()).unwrap();
            assert!(cmax_abs(&(back.v.v() - pt.v.v())) < 1e-10);
            assert!((&back.u - &pt.u).iter().all(|z| z.norm() < 1e-10));
            let bp = BallPoint::random(&mut rng, n);
            let eta = fc_transform(&bp).unwrap();
            let z = fc_inverse(&bp.w, &eta).unwrap().z;
            assert!((z - &bp.z).iter().all(|z| z.norm() < 1e-12));
        }
    }
}

#[test]
fn fc_cases() {
    let mut rng = Rng::new(41);
    let z = rng.complex_row(3);
    let eta = fc_transform(&BallPoint::new(CMat::zeros(3, 3), z.clone()).unwrap()).unwrap();
    assert_eq!(eta, z.transpose());
    let (w, zr) = (0.4, 1.7);
    let bp = BallPoint::new(CMat::from_element(1, 1, c(w, 0.0)), CRow::from_element(1, c(zr, 0.0))).unwrap();
    assert!((fc_transform(&bp).unwrap()[0] - c(zr / (1.0 - w), 0.0)).norm() < 1e-14);
}

#[test]
fn cayley_fc_chain() {
    // through the ball, η = (q + ip)^t and u^t = (1/2i)[(v + i)η - (v - i)η̄]
    let mut rng = Rng::new(42);
    for n in 1..=3 {
        let pq = random_pq_point(&mut rng, n);
        let vu = pq.to_vu();
        let eta = fc_transform(&cayley(&vu).unwrap()).unwrap();
        let want = CRow::from_fn(n, |_, i| c(pq.q[i], pq.p[i]));
        assert!((eta.transpose() - want).iter().all(|z| z.norm() < 1e-10));
        let u = u_from_eta(&vu.v.v(), &eta);
        assert!((u - &vu.u).iter().all(|z| z.norm() < 1e-10));
    }
}

#[test]
fn ball_point_validation() {
    let big = CMat::from_element(1, 1, c(1.0, 0.0));
    assert!(BallPoint::new(big, CRow::zeros(1)).is_err());
    let asym = CMat::from_row_slice(2, 2, &[c(0.1, 0.0), c(0.2, 0.0), c(0.0, 0.0), c(0.1, 0.0)]);
    assert!(BallPoint::new(asym, CRow::zeros(2)).is_err());
}

#[test]
fn ball_transforms_satisfy_relations() {
    let mut rng = Rng::new(43);
    for n in 1..=3 {
        let t = BallTransform::random(&mut rng, n);
        assert!(t.residual() < 1e-10);
        let bp = BallPoint::random(&mut rng, n);
        let moved = act_ball(&t, &bp).unwrap();
        assert!(moved.w.clone().singular_values().max() < 1.0);
    }
}
