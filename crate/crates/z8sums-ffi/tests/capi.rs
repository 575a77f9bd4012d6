use std::ffi::{c_char, CStr, CString};
use std::ptr;

use z8sums_ffi::*;

const PLAIN: u32 = Z8Mode::Plain as u32;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let n = unsafe { z8_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn modulus(c: [i64; 4]) -> *mut Z8Modulus {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { z8_modulus_new(c.as_ptr(), &mut m) }, Z8Status::Ok);
    m
}

#[test]
fn modulus_round_trip() {
    let m = modulus([3, 0, 0, 0]);
    let mut n = 0u64;
    assert_eq!(unsafe { z8_modulus_norm(m, &mut n) }, Z8Status::Ok);
    assert_eq!(n, 81);
    unsafe { z8_modulus_free(m) };
    unsafe { z8_modulus_free(ptr::null_mut()) };
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut m = ptr::null_mut();
    let zero = [0i64; 4];
    assert_eq!(unsafe { z8_modulus_new(zero.as_ptr(), &mut m) }, Z8Status::InvalidArgument);
    assert!(last_error().contains("zero"));
    assert_eq!(unsafe { z8_modulus_new(ptr::null(), &mut m) }, Z8Status::NullPointer);
    assert!(last_error().contains("coeffs"));

    let c = modulus([3, 0, 0, 0]);
    let f = CString::new("1:2").unwrap();
    let mut v = Z8Complex::default();
    assert_eq!(unsafe { z8_complete_sum(f.as_ptr(), c, 9, &mut v) }, Z8Status::InvalidArgument);
    assert_eq!(unsafe { z8_complete_sum(f.as_ptr(), c, PLAIN, &mut v) }, Z8Status::Ok);
    assert_eq!(unsafe { z8_last_error_message(ptr::null_mut(), 0) }, 0);
    // Σ ψ(x²) over R/3 has absolute value √81
    assert!(((v.re * v.re + v.im * v.im).sqrt() - 9.0).abs() < 1e-9);
    unsafe { z8_modulus_free(c) };
}

#[test]
fn symbol_and_kloosterman() {
    let mut e = 0i32;
    let a = [2i64, 0, 0, 0];
    let c = [3i64, 0, 0, 0];
    assert_eq!(unsafe { z8_power_symbol(a.as_ptr(), c.as_ptr(), 4, &mut e) }, Z8Status::Ok);
    assert!((0..4).contains(&e));
    assert_eq!(unsafe { z8_power_symbol(c.as_ptr(), c.as_ptr(), 4, &mut e) }, Z8Status::Ok);
    assert_eq!(e, -1);

    let m = modulus(c);
    let mut v = Z8Complex::default();
    let one = [1i64, 0, 0, 0];
    assert_eq!(unsafe { z8_kloosterman_s4(one.as_ptr(), one.as_ptr(), m, PLAIN, &mut v) }, Z8Status::Ok);
    assert!(v.re.is_finite() && v.im.is_finite());
    unsafe { z8_modulus_free(m) };
}

#[test]
fn prime_identity_report() {
    let a = [1i64, 0, 0, 0];
    let b = [4i64, 0, 0, 0];
    let p = [1i64, 0, 0, 0];
    let mut r = ptr::null_mut();
    // a unit is not a prime
    assert_eq!(unsafe { z8_identity_prime(a.as_ptr(), b.as_ptr(), p.as_ptr(), PLAIN, &mut r) }, Z8Status::Precondition);

    let p17 = [0i64, 0, 1, -2];
    assert_eq!(unsafe { z8_identity_prime(a.as_ptr(), b.as_ptr(), p17.as_ptr(), PLAIN, &mut r) }, Z8Status::Ok);
    let (mut res, mut scale) = (0.0, 0.0);
    assert_eq!(unsafe { z8_report_residual(r, &mut res, &mut scale) }, Z8Status::Ok);
    assert!(res < 1e-9 * scale);
    assert!((scale - 17f64.sqrt()).abs() < 1e-12);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { z8_report_json(r, &mut json) }, Z8Status::Ok);
    let s = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(s.contains("\"statement_id\":\"c4\""));
    unsafe {
        z8_string_free(json);
        z8_report_free(r);
    }
}

#[test]
fn patterson_and_fit() {
    let f = CString::new("1:3").unwrap();
    let mut v = Z8Complex::default();
    assert_eq!(unsafe { z8_patterson_sum(f.as_ptr(), 1, &mut v) }, Z8Status::Ok);
    assert_eq!((v.re, v.im), (1.0, 0.0));
    let bad = CString::new("x^3").unwrap();
    assert_eq!(unsafe { z8_patterson_sum(bad.as_ptr(), 10, &mut v) }, Z8Status::InvalidArgument);

    let xs: Vec<f64> = (0..6).map(|k| 2f64.powi(10 + k)).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(4.0 / 3.0)).collect();
    let (mut slope, mut se) = (0.0, 0.0);
    assert_eq!(unsafe { z8_fit_exponent(xs.as_ptr(), ys.as_ptr(), 6, &mut slope, &mut se) }, Z8Status::Ok);
    assert!((slope - 4.0 / 3.0).abs() < 1e-9);
    assert_eq!(unsafe { z8_fit_exponent(xs.as_ptr(), ys.as_ptr(), 2, &mut slope, &mut se) }, Z8Status::InvalidArgument);
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(z8_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
