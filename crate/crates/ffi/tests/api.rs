use std::ffi::{CStr, c_char};
use std::ptr;

use gapdex_ffi::*;

fn last_error() -> String {
    let p = gapdex_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn scalar_functions_match_core() {
    let mut v = f64::NAN;
    for z in [-3.0, -0.5, 0.0, 1.0, 7.5] {
        unsafe {
            assert_eq!(gapdex_normal_cdf(z, &mut v), GapdexStatus::Ok);
            assert_eq!(v, gapdex::std_normal_cdf(z).unwrap());
            assert_eq!(gapdex_normal_upper_tail(z, &mut v), GapdexStatus::Ok);
            assert_eq!(v, gapdex::std_normal_upper_tail(z).unwrap());
            assert_eq!(gapdex_mills_ratio(z, &mut v), GapdexStatus::Ok);
            assert_eq!(v, gapdex::mills_ratio(z).unwrap());
            assert_eq!(gapdex_gumbel_cdf(z, &mut v), GapdexStatus::Ok);
            assert_eq!(v, gapdex::gumbel_cdf(z).unwrap());
        }
    }
    unsafe {
        assert_eq!(gapdex_normal_quantile(0.975, &mut v), GapdexStatus::Ok);
        assert!((v - 1.959963984540054).abs() < 1e-12);
        assert_eq!(gapdex_normal_cdf(f64::NAN, &mut v), GapdexStatus::Domain);
    }
    assert!(last_error().contains("finite"));
}

#[test]
fn truncated_moments_at_zero() {
    let mut m = GapdexTruncatedMoments::default();
    assert_eq!(unsafe { gapdex_truncated_moments(0.0, &mut m) }, GapdexStatus::Ok);
    assert!((m.mean - 0.797884560802865).abs() < 1e-12);
    assert!((m.variance - 0.363380227632419).abs() < 1e-12);
}

#[test]
fn sample_lifecycle_and_split() {
    let xs = [0.0, 1.0, 2.0, 10.0];
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(gapdex_sample_new(xs.as_ptr(), xs.len(), &mut s), GapdexStatus::Ok);
        assert_eq!(gapdex_sample_len(s), 4);
        let mut split = GapdexSplit::default();
        assert_eq!(gapdex_sample_cluster_split(s, &mut split), GapdexStatus::Ok);
        assert_eq!(split.j, 3);
        assert!((split.statistic - 13.5 / 15.6875).abs() < 1e-12);
        let mut t = GapdexGumbelTest::default();
        assert_eq!(gapdex_cluster_test(4, split.statistic, &mut t), GapdexStatus::Ok);
        assert_eq!(t.p_value, gapdex::cluster_test(4, split.statistic).unwrap().p_value);
        gapdex_sample_free(s);
        gapdex_sample_free(ptr::null_mut());
        assert_eq!(gapdex_sample_len(ptr::null()), 0);
    }
}

#[test]
fn sample_errors() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(gapdex_sample_new(ptr::null(), 3, &mut s), GapdexStatus::NullPointer);
        assert_eq!(gapdex_sample_new([1.0].as_ptr(), 1, &mut s), GapdexStatus::Size);
        assert_eq!(gapdex_sample_new([1.0, f64::INFINITY].as_ptr(), 2, &mut s), GapdexStatus::Data);
        assert!(s.is_null());
        let mut split = GapdexSplit::default();
        assert_eq!(gapdex_sample_cluster_split(ptr::null(), &mut split), GapdexStatus::NullPointer);
    }
}

#[test]
fn substream_normals_match_engine() {
    let mut a = vec![0.0; 64];
    unsafe { assert_eq!(gapdex_substream_normals(9, 4, a.as_mut_ptr(), a.len()), GapdexStatus::Ok) };
    let mut stream = gapdex::montecarlo::substream(9, 4);
    let b = gapdex::montecarlo::sample_std_normal(&mut stream, 64);
    assert_eq!(a, b);
}

#[test]
fn simulate_json_round_trip() {
    let mut out: *mut c_char = ptr::null_mut();
    unsafe {
        assert_eq!(gapdex_simulate_json(40, 30, 2, false, &mut out), GapdexStatus::Ok);
        let json = CStr::from_ptr(out).to_str().unwrap().to_owned();
        gapdex_string_free(out);
        let report: gapdex::MonteCarloReport = serde_json::from_str(&json).unwrap();
        let cfg = gapdex::SimConfig::new(40, 30, 2, gapdex::montecarlo::default_grid()).unwrap();
        assert_eq!(report, gapdex::simulate_cluster_statistic(&cfg).unwrap());
        assert_eq!(gapdex_simulate_json(2, 30, 2, false, &mut out), GapdexStatus::Size);
        assert_eq!(gapdex_simulate_json(40, 0, 2, true, &mut out), GapdexStatus::Domain);
    }
}
