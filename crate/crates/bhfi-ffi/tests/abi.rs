use std::ffi::{CStr, CString};
use std::ptr;

use bhfi_ffi::*;

fn builtin(name: &str) -> *mut BhfiStructure {
    let n = CString::new(name).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { bhfi_structure_builtin(n.as_ptr(), &mut h) }, BhfiStatus::Ok);
    h
}

#[test]
fn s2xs1_through_the_abi() {
    let p = builtin("cfd0");
    let m = builtin("cfa0_k1");
    let mut n = 0usize;
    unsafe {
        assert_eq!(bhfi_hfhat(p, p, &mut n), BhfiStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(bhfi_hfhat(m, p, &mut n), BhfiStatus::Ok);
        assert_eq!(n, 2);
        let mut s = ptr::null_mut();
        assert_eq!(bhfi_hfihat(p, p, 4, &mut s), BhfiStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        bhfi_string_free(s);
        assert!(text.starts_with(r#"{"hf_dim":2,"#), "{text}");
        assert!(text.contains(r#""hfi_dim":4"#));
        bhfi_structure_free(p);
        bhfi_structure_free(m);
    }
}

#[test]
fn json_round_trip() {
    let az = builtin("az_k1");
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(bhfi_structure_to_json(az, &mut s), BhfiStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(bhfi_structure_from_json(s, &mut back), BhfiStatus::Ok);
        let (mut a, mut b, mut v) = (0usize, 0usize, 1usize);
        bhfi_structure_len(az, &mut a);
        bhfi_structure_len(back, &mut b);
        assert_eq!((a, b), (8, 8));
        assert_eq!(bhfi_structure_check(back, &mut v), BhfiStatus::Ok);
        assert_eq!(v, 0);
        bhfi_string_free(s);
        bhfi_structure_free(az);
        bhfi_structure_free(back);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut h = ptr::null_mut();
        let bad = CString::new("{not json").unwrap();
        assert_eq!(bhfi_structure_from_json(bad.as_ptr(), &mut h), BhfiStatus::Parse);
        assert!(!bhfi_last_error().is_null());
        let name = CString::new("nope").unwrap();
        assert_eq!(bhfi_structure_builtin(name.as_ptr(), &mut h), BhfiStatus::Parse);
        assert_eq!(bhfi_structure_builtin(ptr::null(), &mut h), BhfiStatus::BadArgument);
        let mut n = 0usize;
        assert_eq!(bhfi_structure_len(ptr::null(), &mut n), BhfiStatus::BadArgument);
        let p = builtin("cfd0");
        assert_eq!(bhfi_structure_len(p, ptr::null_mut()), BhfiStatus::BadArgument);
        bhfi_structure_free(p);
        bhfi_structure_free(ptr::null_mut());
        let ok = builtin("cfd_inf");
        assert!(bhfi_last_error().is_null());
        bhfi_structure_free(ok);
    }
}
