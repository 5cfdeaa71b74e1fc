use std::ffi::{CStr, CString};
use std::ptr;

use fastmix_ffi::*;

fn last_error() -> String {
    let p = fm_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn family(name: &str, n: usize, k: usize) -> *mut FmGraph {
    let name = CString::new(name).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { fm_graph_generate(name.as_ptr(), n, k, &mut g) },
        FmStatus::Ok
    );
    g
}

#[test]
fn graph_handles() {
    let edges = [0usize, 1, 1, 2, 2, 3];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(fm_graph_new(4, edges.as_ptr(), 3, &mut g), FmStatus::Ok);
        assert!(fm_last_error().is_null());
        assert_eq!(fm_graph_vertex_count(g), 4);
        assert_eq!(fm_graph_edge_count(g), 3);
        let mut d = 0;
        assert_eq!(fm_graph_diameter(g, &mut d), FmStatus::Ok);
        assert_eq!(d, 3);
        let mut buf = [0usize; 6];
        assert_eq!(fm_graph_edges(g, buf.as_mut_ptr(), 6), FmStatus::Ok);
        assert_eq!(buf, edges);
        assert_eq!(
            fm_graph_edges(g, buf.as_mut_ptr(), 5),
            FmStatus::BufferTooSmall
        );
        fm_graph_free(g);
        fm_graph_free(ptr::null_mut());
    }
}

#[test]
fn parse_and_errors() {
    let text = CString::new("0 1\n1 2\n").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(fm_graph_parse(text.as_ptr(), &mut g), FmStatus::Ok);
        assert_eq!(fm_graph_vertex_count(g), 3);
        fm_graph_free(g);

        let bad = CString::new("0 1\n1 x\n").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(fm_graph_parse(bad.as_ptr(), &mut h), FmStatus::Parse);
        assert!(h.is_null());
        assert!(last_error().contains("line 2"));

        assert_eq!(fm_graph_parse(ptr::null(), &mut h), FmStatus::NullPointer);
        let edges = [0usize, 5];
        assert_eq!(
            fm_graph_new(3, edges.as_ptr(), 1, &mut h),
            FmStatus::InvalidArgument
        );
        let name = CString::new("nonsense").unwrap();
        assert_eq!(
            fm_graph_generate(name.as_ptr(), 3, 0, &mut h),
            FmStatus::InvalidArgument
        );
        assert_eq!(fm_graph_vertex_count(ptr::null()), 0);
    }
}

#[test]
fn conductance_of_star() {
    let g = family("star", 4, 0);
    let mut c = FmConductance::default();
    let mut set = [usize::MAX; 5];
    unsafe {
        assert_eq!(
            fm_conductance(g, FmMeasure::Vertex, &mut c, set.as_mut_ptr(), 5),
            FmStatus::Ok
        );
        assert_eq!((c.num, c.den), (1, 2));
        assert!(c.exact);
        assert_eq!(c.set_len, 2);
        assert!(set[..2].iter().all(|&v| v != 0 && v < 5));
        assert_eq!(
            fm_conductance(g, FmMeasure::Edge, &mut c, set.as_mut_ptr(), 0),
            FmStatus::BufferTooSmall
        );
        assert_eq!(
            fm_conductance(g, FmMeasure::Matching, &mut c, ptr::null_mut(), 0),
            FmStatus::Ok
        );
        assert_eq!(c.value, 0.5);
        fm_graph_free(g);
    }
}

#[test]
fn disconnected_graph_is_reported() {
    let edges = [0usize, 1, 2, 3];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(fm_graph_new(4, edges.as_ptr(), 2, &mut g), FmStatus::Ok);
        let mut c = FmConductance::default();
        assert_eq!(
            fm_conductance(g, FmMeasure::Edge, &mut c, ptr::null_mut(), 0),
            FmStatus::Disconnected
        );
        fm_graph_free(g);
    }
}

#[test]
fn almost_mix_chain() {
    let g = family("dumbbell", 5, 0);
    let pi: Vec<f64> = (1..=11).map(f64::from).collect();
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(
            fm_build_almost_mix(g, pi.as_ptr(), 0.1, FM_DEFAULT_ROOT, &mut c),
            FmStatus::Ok
        );
        let n = fm_chain_size(c);
        assert_eq!(n, 11);
        assert!(fm_chain_gap(c) >= 0.1 / (48.0 * 16.0));
        let mut p = vec![0.0; n * n];
        let mut stationary = vec![0.0; n];
        assert_eq!(
            fm_chain_matrix(c, p.as_mut_ptr(), p.len(), stationary.as_mut_ptr()),
            FmStatus::Ok
        );
        for i in 0..n {
            assert!((p[i * n..(i + 1) * n].iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p[i * n + i] >= 0.5);
        }
        assert!((stationary.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for i in 0..n {
            assert!(stationary[i] >= 0.9 * pi[i] / 66.0);
        }
        fm_chain_free(c);

        let mut bad = ptr::null_mut();
        assert_eq!(
            fm_build_almost_mix(g, ptr::null(), 1.5, FM_DEFAULT_ROOT, &mut bad),
            FmStatus::InvalidArgument
        );
        assert!(last_error().contains("outside"));
        assert!(fm_chain_gap(ptr::null()).is_nan());
        fm_graph_free(g);
    }
}

#[test]
fn continuous_rates_on_path() {
    let g = family("path", 3, 0);
    let mut rates = [0.0; 2];
    let mut h = 0.0;
    unsafe {
        assert_eq!(
            fm_build_continuous(g, 0, rates.as_mut_ptr(), 2, &mut h),
            FmStatus::Ok
        );
        assert_eq!(h, 8.0);
        assert_eq!(rates, [0.5, 0.25]);
        assert_eq!(
            fm_build_continuous(g, 0, rates.as_mut_ptr(), 1, ptr::null_mut()),
            FmStatus::BufferTooSmall
        );
        fm_graph_free(g);
    }
}

#[test]
fn schedule_reaches_target() {
    let g = family("cycle", 6, 0);
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(fm_build_schedule(g, ptr::null(), 0, &mut s), FmStatus::Ok);
        assert_eq!(fm_schedule_len(s), 6);
        let mut tv = 1.0;
        assert_eq!(fm_schedule_worst_tv(s, &mut tv), FmStatus::Ok);
        assert!(tv < 1e-12);
        let mut step = vec![0.0; 36];
        assert_eq!(fm_schedule_step(s, 0, step.as_mut_ptr(), 36), FmStatus::Ok);
        for i in 0..6 {
            assert!((step[i * 6..(i + 1) * 6].iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(
            fm_schedule_step(s, 6, step.as_mut_ptr(), 36),
            FmStatus::InvalidArgument
        );
        fm_schedule_free(s);
        fm_graph_free(g);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(fm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
