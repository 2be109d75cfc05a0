//! Public API checks against values from an independent brute-force oracle.

use lambda_griffiths::exact::{parse_rational, rat};
use lambda_griffiths::griffiths::{g_biorth_gram, g_eval, EvalMethod, GRelationId, ParamSet};
use lambda_griffiths::krawtchouk::{k_eval, KrawtchoukParams};
use lambda_griffiths::operators::{
    build_operator, commutator_is_zero, eigen_residual, FamilyParams, OperatorKind,
};
use lambda_griffiths::oscillator::fit_and_verify;
use lambda_griffiths::suites::{run_suite, Suite, SuiteConfig};
use lambda_griffiths::tratnik::{t_eval, TratnikParams};
use lambda_griffiths::Error;
use num_complex::Complex64;
use num_traits::Zero;

fn q(s: &str) -> lambda_griffiths::Rational {
    parse_rational(s).unwrap()
}

fn griffiths(p1: &str, p2: &str, p3: &str, lambda: &str, n: usize) -> ParamSet {
    ParamSet::new(q(p1), q(p2), q(p3), q(lambda), n).unwrap()
}

#[test]
fn krawtchouk_oracle_values() {
    let kp = KrawtchoukParams::new(rat(2, 7), 5).unwrap();
    assert_eq!(k_eval(2, 3, &kp).unwrap(), rat(38, 125));
    let kp = KrawtchoukParams::new(rat(-3, 4), 4).unwrap();
    assert_eq!(k_eval(3, 1, &kp).unwrap(), rat(-24, 7));
    assert!(k_eval(1, 5, &kp).unwrap().is_zero());
}

#[test]
fn tratnik_oracle_value() {
    let tp = TratnikParams::new(rat(1, 3), rat(1, 5), 3).unwrap();
    assert_eq!(t_eval(1, 1, 1, 1, &tp).unwrap(), rat(3, 8));
}

#[test]
fn griffiths_oracle_values_on_every_route() {
    let cases = [
        (
            griffiths("1/2", "1/3", "1/5", "2", 3),
            (1, 0, 2, 1),
            rat(-77, 32),
        ),
        (
            griffiths("-2/3", "7/4", "3/11", "-5/2", 4),
            (2, 1, 1, 2),
            rat(-875, 12),
        ),
        (
            griffiths("1/2", "1/2", "1/2", "1", 2),
            (0, 0, 0, 0),
            rat(4, 1),
        ),
    ];
    for (ps, (i, j, x, y), want) in cases {
        for m in EvalMethod::ALL {
            assert_eq!(g_eval(i, j, x, y, &ps, m).unwrap(), want, "{m:?}");
        }
    }
}

#[test]
fn mu_and_biorth_diagonal() {
    let ps = griffiths("1/2", "1/3", "1/5", "2", 3);
    assert_eq!(ps.mu().unwrap(), rat(3, 8));
    let gram = g_biorth_gram(&ps).unwrap();
    assert!(gram.is_diagonal());
    assert_eq!(gram[(0, 0)], rat(10125, 32));
}

#[test]
fn griffiths_operators_are_bispectral() {
    let ps = griffiths("3/7", "-1/2", "5/9", "4/3", 4);
    let fp = FamilyParams::Griffiths(ps.clone());
    let table = lambda_griffiths::griffiths::GriffithsTable::new(&ps).unwrap();
    for rel in GRelationId::ALL {
        let op = build_operator(OperatorKind::Griffiths(rel), &fp).unwrap();
        let res = eigen_residual(&op, table.values(), |p| rel.eigenvalue(p)).unwrap();
        assert!(res.is_zero(), "{rel}");
    }
    let rx = build_operator(OperatorKind::Griffiths(GRelationId::RecX), &fp).unwrap();
    let ry = build_operator(OperatorKind::Griffiths(GRelationId::RecY), &fp).unwrap();
    assert!(commutator_is_zero(&rx, &ry).unwrap());
}

#[test]
fn degenerate_parameters_are_rejected() {
    assert!(matches!(
        ParamSet::new(rat(1, 2), rat(1, 3), rat(1, 5), rat(0, 1), 2),
        Err(Error::InvalidParameter { .. } | Error::DegenerateParams(_))
    ));
    assert!(KrawtchoukParams::new(rat(1, 1), 2).is_err());
    assert!(TratnikParams::new(rat(0, 1), rat(1, 2), 2).is_err());
}

#[test]
fn suites_are_deterministic() {
    let config = SuiteConfig {
        seed: 42,
        max_n: 3,
        samples: 2,
    };
    for suite in [Suite::Duality, Suite::Tratnik] {
        let a = run_suite(suite, &config).unwrap();
        let b = run_suite(suite, &config).unwrap();
        assert!(a.passed());
        assert_eq!(a, b);
    }
}

#[test]
fn oscillator_fit_recovers_angles() {
    let (phi, theta, psi) = (0.4f64, 0.9f64, 1.2f64);
    let r = fit_and_verify(phi, theta, psi, Complex64::new(0.3, 0.0), 3).unwrap();
    assert!(r.max_mismatch <= 1e-8);
    for (p, angle) in [(r.p1, phi), (r.p2, theta), (r.p3, psi)] {
        assert!((p - angle.sin().powi(2)).abs() < 1e-8, "{p} vs {angle}");
    }
}
