use std::ffi::{CStr, CString};
use std::ptr;

use lcpforms_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { lcp_string_free(p) };
    s
}

fn last_error() -> String {
    let p = lcp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn standard_forms_and_stabilizers() {
    for (kind, dim, degree, stab) in [
        (LcpFormKind::G2, 7, 3, 14),
        (LcpFormKind::Spin7, 8, 4, 21),
        (LcpFormKind::Spin7Octonionic, 8, 4, 21),
    ] {
        let mut f = ptr::null_mut();
        assert_eq!(unsafe { lcp_form_standard(kind, &mut f) }, LcpStatus::Ok);
        assert_eq!(unsafe { lcp_form_dim(f) }, dim);
        assert_eq!(unsafe { lcp_form_degree(f) }, degree);
        let mut s = 0usize;
        assert_eq!(unsafe { lcp_form_stabilizer_dim(f, &mut s) }, LcpStatus::Ok);
        assert_eq!(s, stab);
        unsafe { lcp_form_free(f) };
    }
}

#[test]
fn json_roundtrip_and_algebra() {
    let mut omega = ptr::null_mut();
    unsafe { lcp_form_standard(LcpFormKind::G2, &mut omega) };
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { lcp_form_to_json(omega, &mut out) }, LcpStatus::Ok);
    let text = CString::new(take_string(out)).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(
        unsafe { lcp_form_from_json(text.as_ptr(), &mut back) },
        LcpStatus::Ok
    );
    assert!(unsafe { lcp_form_equal(omega, back) });

    let mut star = ptr::null_mut();
    assert_eq!(unsafe { lcp_form_hodge(omega, &mut star) }, LcpStatus::Ok);
    let mut vol = ptr::null_mut();
    assert_eq!(
        unsafe { lcp_form_wedge(omega, star, &mut vol) },
        LcpStatus::Ok
    );
    let mut out = ptr::null_mut();
    unsafe { lcp_form_to_json(vol, &mut out) };
    assert_eq!(
        take_string(out),
        r#"{"dim":7,"degree":7,"terms":[{"idx":[1,2,3,4,5,6,7],"coef":"7"}]}"#
    );
    unsafe {
        lcp_form_free(omega);
        lcp_form_free(back);
        lcp_form_free(star);
        lcp_form_free(vol);
    }
}

#[test]
fn wedge_dimension_mismatch_sets_the_error() {
    let (mut a, mut b, mut w) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        lcp_form_standard(LcpFormKind::G2, &mut a);
        lcp_form_standard(LcpFormKind::Spin7, &mut b);
    }
    assert_eq!(
        unsafe { lcp_form_wedge(a, b, &mut w) },
        LcpStatus::DimensionMismatch
    );
    assert!(w.is_null());
    assert!(last_error().contains("dimension"));
    unsafe {
        lcp_form_free(a);
        lcp_form_free(b);
    }
}

#[test]
fn bad_inputs() {
    let mut f = ptr::null_mut();
    let bad = CString::new("{ nope").unwrap();
    assert_eq!(
        unsafe { lcp_form_from_json(bad.as_ptr(), &mut f) },
        LcpStatus::Parse
    );
    let unsorted =
        CString::new(r#"{"dim":7,"degree":2,"terms":[{"idx":[3,1],"coef":"1"}]}"#).unwrap();
    assert_eq!(
        unsafe { lcp_form_from_json(unsorted.as_ptr(), &mut f) },
        LcpStatus::InvalidIndex
    );
    assert_eq!(
        unsafe { lcp_form_from_json(ptr::null(), &mut f) },
        LcpStatus::NullPointer
    );
    assert_eq!(
        unsafe { lcp_form_stabilizer_dim(ptr::null(), ptr::null_mut()) },
        LcpStatus::NullPointer
    );
    assert_eq!(unsafe { lcp_form_dim(ptr::null()) }, 0);
    unsafe {
        lcp_form_free(ptr::null_mut());
        lcp_group_free(ptr::null_mut());
        lcp_string_free(ptr::null_mut());
    }
}

#[test]
fn frame_groups() {
    let mut g = ptr::null_mut();
    let frame = CString::new("e1,e2,e3,e4").unwrap();
    assert_eq!(
        unsafe { lcp_group_from_frame(frame.as_ptr(), 0, &mut g) },
        LcpStatus::Ok
    );
    assert_eq!(unsafe { lcp_group_order(g) }, 32);
    let mut phi = ptr::null_mut();
    unsafe { lcp_form_standard(LcpFormKind::Spin7Octonionic, &mut phi) };
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { lcp_group_classify_json(g, phi, &mut out) },
        LcpStatus::Ok
    );
    let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(report["order"], 32);
    assert_eq!(report["preserves_spin7"], true);
    assert_eq!(report["is_free_on_sphere"], false);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { lcp_group_to_json(g, &mut out) }, LcpStatus::Ok);
    let file: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(file["elements"].as_array().unwrap().len(), 32);
    unsafe {
        lcp_group_free(g);
        lcp_form_free(phi);
    }

    let seven = CString::new("e1,e2,e3,e4,e5,e6,e7").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { lcp_group_from_frame(seven.as_ptr(), 0, &mut g) },
        LcpStatus::OrderMismatch
    );
    assert!(last_error().contains("128"));
    let bad = CString::new("e1,x").unwrap();
    assert_eq!(
        unsafe { lcp_group_from_frame(bad.as_ptr(), 0, &mut g) },
        LcpStatus::Parse
    );
}

#[test]
fn generators_and_sp2() {
    let json = CString::new(r#"[{"dim":2,"rows":[["0","-1"],["1","0"]]}]"#).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { lcp_group_from_generators_json(json.as_ptr(), 0, &mut g) },
        LcpStatus::Ok
    );
    assert_eq!(unsafe { lcp_group_order(g) }, 4);
    let mut free = false;
    assert_eq!(unsafe { lcp_group_is_free(g, &mut free) }, LcpStatus::Ok);
    assert!(free);
    unsafe { lcp_group_free(g) };

    let mut sp2 = ptr::null_mut();
    assert_eq!(unsafe { lcp_group_sp2_example(&mut sp2) }, LcpStatus::Ok);
    assert_eq!(unsafe { lcp_group_order(sp2) }, 8);
    let mut free = false;
    unsafe { lcp_group_is_free(sp2, &mut free) };
    assert!(free);
    unsafe { lcp_group_free(sp2) };

    let not_orth = CString::new(r#"[{"dim":2,"rows":[["2","0"],["0","1"]]}]"#).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { lcp_group_from_generators_json(not_orth.as_ptr(), 0, &mut g) },
        LcpStatus::NotOrthonormal
    );
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(lcp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
