use spectral_eta::asymptotics::{eta_residues, fit_heat_expansion, log_window, sample_heat_trace, FitOptions};
use spectral_eta::ball::{enumerate_spectrum, write_csv, BallConfig, TraceKind, TraceOptions};
use spectral_eta::report::to_json;
use spectral_eta::theorems::{ball_predictions, TheoremReport};
use spectral_eta::verify::{self, Suite, VerifyConfig};
use spectral_eta::BallConfig64;

#[test]
fn exact_routes_agree_for_tabulated_even_m() {
    for m in (4..=10).step_by(2) {
        let r = eta_residues(m).unwrap();
        let p = ball_predictions(m).unwrap();
        assert_eq!(r.res_eta_top, p.res_eta_top, "m={}", m);
        assert_eq!(r.res_eta_next, p.res_eta_next, "m={}", m);
        assert_eq!(r.a2, p.a2, "m={}", m);
        assert_eq!(r.a3, p.a3, "m={}", m);
    }
    assert!(eta_residues(12).is_err());
}

#[test]
fn spectrum_csv_matches_enumeration() {
    let s = enumerate_spectrum(&BallConfig64::with_auto_n_max(4, 0.1, 20.0).unwrap()).unwrap();
    let mut buf = Vec::new();
    write_csv(&s, &mut buf).unwrap();
    let mut rdr = csv::Reader::from_reader(buf.as_slice());
    let mut weight = 0.0;
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let root: f64 = rec[4].parse().unwrap();
        assert!(root > 0.0 && root <= 20.0);
        weight += rec[2].parse::<f64>().unwrap();
        rows += 1;
    }
    assert_eq!(rows, s.eigenvalues().len());
    assert_eq!(weight, s.report().weighted_count);
}

#[test]
fn single_precision_spectrum_tracks_double() {
    let s32 = enumerate_spectrum(&BallConfig::<f32>::with_auto_n_max(4, 0.1, 15.0).unwrap()).unwrap();
    let s64 = enumerate_spectrum(&BallConfig64::with_auto_n_max(4, 0.1, 15.0).unwrap()).unwrap();
    assert_eq!(s32.eigenvalues().len(), s64.eigenvalues().len());
    for (a, b) in s32.eigenvalues().iter().zip(s64.eigenvalues()) {
        assert!((a.0 as f64 - b.0).abs() < 1e-4 * b.0.abs().max(1.0));
        assert_eq!(a.1 as f64, b.1);
    }
}

#[test]
fn zeta_fit_on_enumerated_spectrum_recovers_volume_term() {
    let s = enumerate_spectrum(&BallConfig64::with_auto_n_max(4, 0.0, 200.0).unwrap()).unwrap();
    let ts = log_window(0.002, 0.02, 30).unwrap();
    let samples = sample_heat_trace(&s, TraceKind::Zeta, &ts, TraceOptions::default()).unwrap();
    let fit = fit_heat_expansion(&samples, 4, TraceKind::Zeta, 5, FitOptions::default()).unwrap();
    // (4 pi)^-2 * vol(B^4) * 4 = 1/8
    assert!((fit.coefficient(0).unwrap() - 0.125).abs() < 1e-4);
}

#[test]
fn theorem_report_serializes_with_holding_relations() {
    let report = TheoremReport::ball(6, 0.1).unwrap();
    let json = to_json(&report).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let rel = v["relations"].as_array().unwrap();
    assert!(!rel.is_empty());
    assert!(rel.iter().all(|r| r["holds"] == serde_json::Value::Bool(true)));
}

#[test]
fn exact_verify_suites_pass_at_m6() {
    let cfg = VerifyConfig {
        m: 6,
        trace_samples: 100,
        identity_samples: 5,
        ..VerifyConfig::default()
    };
    let report = verify::run(&cfg, &[Suite::Barnes, Suite::Constants, Suite::Residues]);
    assert!(report.passed, "{}", report.table());
}
