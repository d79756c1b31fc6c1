use proptest::prelude::*;
use walker_core::construction::planarity_check;
use walker_core::curve_geometry::{frenet_apparatus, CurveSpec};
use walker_core::field_expr::ExprAst;
use walker_core::manifold::det3;
use walker_core::numerics::{central_5pt, central_5pt_second};
use walker_core::surface_geometry::{second_fundamental, shape_operator, SurfacePatch};
use walker_core::{GeometryError, Point3, Sign, Vec3, WalkerMetric};

fn vec3() -> impl Strategy<Value = Vec3> {
    (-3.0..3.0, -3.0..3.0, -3.0..3.0).prop_map(|(a, b, c)| Vec3::new(a, b, c))
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("y".to_owned()),
        Just("z".to_owned()),
        (1u32..50).prop_map(|n| format!("{}", n as f64 / 8.0)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}/({b} + 7)")),
            inner.clone().prop_map(|a| format!("-({a})")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("exp(cos({a}))")),
            inner.clone().prop_map(|a| format!("({a})^2")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cross_product_represents_determinant(eps in sign(), p in vec3(), u in vec3(), v in vec3(), w in vec3()) {
        let m = WalkerMetric::parse(eps, "y^2 + z").unwrap();
        let p = Point3::from(p);
        let c = m.cross_f(&p, &u, &v).unwrap();
        let scale = 1.0 + (1.0 + m.field().value(p.y, p.z).unwrap().abs()) * u.amax() * v.amax() * w.amax();
        prop_assert!((m.metric_dot(&p, &c, &w).unwrap() - det3(&u, &v, &w)).abs() <= 1e-9 * scale);
    }

    #[test]
    fn printing_round_trips(text in expr(), y in -2.0..2.0, z in -2.0..2.0) {
        let ast = ExprAst::parse(&text, &["y", "z"]).unwrap();
        let printed = ast.to_string();
        let again = ExprAst::parse(&printed, &["y", "z"]).unwrap();
        prop_assert_eq!(again.to_string(), printed);
        let (a, b) = (ast.eval(&[y, z]).ok(), again.eval(&[y, z]).ok());
        prop_assert_eq!(a.map(f64::to_bits), b.map(f64::to_bits));
    }

    #[test]
    fn differentiation_is_linear(a in expr(), b in expr(), k in -3.0f64..3.0, y in -2.0..2.0, z in -2.0..2.0) {
        let vars = ["y", "z"];
        let ea = ExprAst::parse(&a, &vars).unwrap();
        let eb = ExprAst::parse(&b, &vars).unwrap();
        let combined = ExprAst::parse(&format!("({k})*({a}) + ({b})"), &vars).unwrap();
        for var in vars {
            let lhs = combined.differentiate(var).unwrap().eval(&[y, z]);
            let da = ea.differentiate(var).unwrap().eval(&[y, z]);
            let db = eb.differentiate(var).unwrap().eval(&[y, z]);
            if let (Ok(lhs), Ok(da), Ok(db)) = (lhs, da, db) {
                let rhs = k * da + db;
                prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs() + (k * da).abs()));
            }
        }
    }

    #[test]
    fn planar_curves_keep_pairing_constant(c in -5.0..5.0, a in 0.2..2.0, eps in sign()) {
        let m = WalkerMetric::flat(eps);
        let curve = CurveSpec::parse(&format!("{a}*t^2 + t^3/9"), &format!("{c}"), "t", (0.5, 2.0)).unwrap();
        let ts: Vec<f64> = (0..=15).map(|i| 0.5 + 0.1 * i as f64).collect();
        prop_assert!(planarity_check(&m, &curve, &ts).unwrap() <= 1e-8);
    }
}

/// Intrinsic curvature of the induced metric by the Brioschi formula, with
/// finite differences of `E`, `F`, `G`.
fn brioschi(m: &WalkerMetric, s: &SurfacePatch, u: f64, v: f64) -> Result<f64, GeometryError> {
    let h = 1e-3;
    let efg = |u: f64, v: f64| -> Result<[f64; 3], GeometryError> {
        let j = s.jet(m, u, v)?;
        let p = j.point;
        Ok([m.metric_dot(&p, &j.du, &j.du)?, m.metric_dot(&p, &j.du, &j.dv)?, m.metric_dot(&p, &j.dv, &j.dv)?])
    };
    let [e, f, g] = efg(u, v)?;
    let [e_u, f_u, g_u] = central_5pt(|a| efg(a, v), u, h)?;
    let [e_v, f_v, g_v] = central_5pt(|b| efg(u, b), v, h)?;
    let e_vv = central_5pt_second(|b| efg(u, b).map(|x| x[0]), v, h)?;
    let g_uu = central_5pt_second(|a| efg(a, v).map(|x| x[2]), u, h)?;
    let f_uv = central_5pt(|a| central_5pt(|b| efg(a, b).map(|x| [x[1]]), v, h), u, h)?[0];
    let m1 = nalgebra::Matrix3::new(
        -0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v,
        f_v - 0.5 * g_u, e, f,
        0.5 * g_v, f, g,
    );
    let m2 = nalgebra::Matrix3::new(0.0, 0.5 * e_v, 0.5 * g_u, 0.5 * e_v, e, f, 0.5 * g_u, f, g);
    let w = e * g - f * f;
    Ok((m1.determinant() - m2.determinant()) / (w * w))
}

#[test]
fn gauss_equation_matches_intrinsic_curvature() {
    let cases = [
        (Sign::Plus, "sin(y) + z", ["u", "v", "u^2/2 + v^2/3 + u*v/4"]),
        (Sign::Minus, "y^2", ["u*v/2", "u + v^2/4", "v"]),
        (Sign::Plus, "exp(y/2)*z", ["u^2/3 + v", "u", "v + u*v/5"]),
        (Sign::Minus, "1 + y*z", ["sin(u) + v", "cos(v)", "u + v/2"]),
    ];
    let mut checked = 0;
    for (eps, f, [x, y, z]) in cases {
        let m = WalkerMetric::parse(eps, f).unwrap();
        let patch = SurfacePatch::parse(x, y, z).unwrap();
        for (u, v) in [(0.3, -0.2), (-0.4, 0.5), (0.7, 0.6)] {
            let Ok(sd) = shape_operator(&m, &patch, u, v) else { continue };
            let k = brioschi(&m, &patch, u, v).unwrap();
            assert!((sd.gauss - k).abs() <= 1e-5 * (1.0 + k.abs()), "{f} ({x}, {y}, {z}) at ({u}, {v}): {} vs {k}", sd.gauss);
            checked += 1;
        }
    }
    assert!(checked >= 8);
}

#[test]
fn shape_operator_is_self_adjoint_against_h() {
    let m = WalkerMetric::parse(Sign::Minus, "sin(y) + z^2").unwrap();
    let patch = SurfacePatch::parse("u*v/3", "u + v^2/4", "v - u^2/5").unwrap();
    for (u, v) in [(0.2, 0.1), (-0.5, 0.4)] {
        let sd = shape_operator(&m, &patch, u, v).unwrap();
        assert!((sd.h[(0, 1)] - sd.h[(1, 0)]).abs() <= 1e-10);
        // ⟨S X, Y⟩ = δ h(X, Y) for the coordinate basis
        let lhs = sd.first * sd.shape;
        let rhs = sd.h * sd.delta.value();
        assert!((lhs - rhs).amax() <= 1e-8);
        let sf = second_fundamental(&m, &patch, u, v).unwrap();
        assert_eq!(sf.h, sd.h);
    }
}

#[test]
fn frame_is_invariant_under_reparametrization() {
    let m = WalkerMetric::parse(Sign::Plus, "exp(y/2)").unwrap();
    let c = CurveSpec::parse("cos(t)", "sin(t)", "t", (0.0, 2.0)).unwrap();
    let r = CurveSpec::parse("cos(t + t^3/10)", "sin(t + t^3/10)", "t + t^3/10", (0.0, 1.5)).unwrap();
    for s in [0.2, 0.7, 1.1] {
        let t = s + s * s * s / 10.0;
        let (a, b) = (frenet_apparatus(&m, &c, t).unwrap(), frenet_apparatus(&m, &r, s).unwrap());
        assert!((a.kappa - b.kappa).abs() <= 1e-10);
        assert!((a.tau - b.tau).abs() <= 1e-7);
        assert!((a.binormal - b.binormal).amax() <= 1e-10);
    }
}
