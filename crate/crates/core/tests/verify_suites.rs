use bargmann::config::RunConfig;
use bargmann::report::VerificationReport;
use bargmann::verify::{run, Suite};

#[test]
fn suites_have_unique_prefixed_ids_and_round_trip() {
    let cfg = RunConfig::default();
    for (suite, prefix) in [(Suite::Special, "special."), (Suite::Quadrature, "quadrature."), (Suite::Operators, "operators.")] {
        let r = run(suite, &cfg).unwrap();
        assert!(!r.checks.is_empty());
        assert!(r.duplicate_ids().is_empty());
        assert!(r.checks.iter().all(|c| c.id.starts_with(prefix)), "{prefix}");
        assert!(r.checks.iter().all(|c| c.passed == (c.measured <= c.tolerance)));
        let back = VerificationReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.metadata.config, cfg.to_pairs());
    }
}

#[test]
fn special_and_quadrature_pass() {
    let cfg = RunConfig::default();
    for suite in [Suite::Special, Suite::Quadrature] {
        let r = run(suite, &cfg).unwrap();
        let failed: Vec<_> = r.failures().map(|c| c.id.clone()).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}

#[test]
fn deterministic_for_fixed_config() {
    let cfg = RunConfig::default();
    let a = run(Suite::Operators, &cfg).unwrap();
    let b = run(Suite::Operators, &cfg).unwrap();
    assert_eq!(a.checks, b.checks);
}

#[test]
fn tolerance_override_flips_verdict() {
    let mut cfg = RunConfig::default();
    cfg.set("tol.special.genfun.hermite", "0").unwrap();
    let r = run(Suite::Special, &cfg).unwrap();
    let c = r.get("special.genfun.hermite").unwrap();
    assert_eq!(c.tolerance, 0.0);
    assert!(!c.passed);
    assert!(!r.passed());
}

#[test]
fn coarse_omega_grid_fails_laplace_checks() {
    let mut cfg = RunConfig::default();
    cfg.omega_h = 0.1;
    let r = run(Suite::Kernels, &cfg).unwrap();
    for m in [2, 3] {
        for a in ["0", "0.5", "1.5"] {
            let c = r.get(&format!("kernels.omega.laplace.a{a}.m{m}")).unwrap();
            assert!(!c.passed, "{}", c.id);
        }
    }
}

#[test]
fn invalid_config_is_rejected() {
    let mut cfg = RunConfig::default();
    cfg.omega_h = -1.0;
    assert!(run(Suite::Kernels, &cfg).is_err());
    assert!("nosuch".parse::<Suite>().is_err());
    assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
}
