//! C ABI over `hecke-core`.
//!
//! Every function returns a [`HeckeStatus`]; on failure the message is
//! available from [`hecke_last_error`] on the same thread. Handles are
//! opaque, owned by the caller, and released with the matching `_free`
//! function. Strings returned through `char **` are released with
//! [`hecke_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hecke_core::crossed::{CpElement, CrossedProduct};
use hecke_core::format;
use hecke_core::hecke::{HeckeAlgebra, HeckeElement};
use hecke_core::pair::{Descriptor, GaussPair, HeckePair, LinearPair};
use hecke_core::selftest;
use hecke_core::Error;

/// Result code of every call. Codes 2 to 4 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeckeStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InstanceMismatch = 3,
    Domain = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A Hecke pair together with its algebra.
pub struct HeckeInstance {
    inner: Algebra,
}

enum Algebra {
    Linear(HeckeAlgebra<LinearPair>),
    Gauss(HeckeAlgebra<GaussPair>),
}

/// An element of the Hecke algebra of some instance.
pub struct HeckeElem {
    inner: Elem,
}

enum Elem {
    Linear(HeckeElement<LinearPair>),
    Gauss(HeckeElement<GaussPair>),
}

/// An element of the crossed product of some instance.
pub struct HeckeCp {
    inner: Cp,
}

enum Cp {
    Linear(CpElement<LinearPair>),
    Gauss(CpElement<GaussPair>),
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(HeckeStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            2 => HeckeStatus::Parse,
            3 => HeckeStatus::InstanceMismatch,
            _ => HeckeStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

fn mismatch() -> Failure {
    Failure(HeckeStatus::InstanceMismatch, "handle belongs to a different instance family".into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HeckeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HeckeStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".into());
            set_error(&msg);
            HeckeStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(HeckeStatus::NullPointer, "null handle".into()))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(HeckeStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(HeckeStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(HeckeStatus::NullPointer, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(HeckeStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s).map_err(|_| Failure(HeckeStatus::Domain, "output contains a NUL byte".into()))?.into_raw();
    Ok(())
}

unsafe fn put_value<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(HeckeStatus::NullPointer, "null output pointer".into()));
    }
    *out = v;
    Ok(())
}

/// Message of the most recent failure on this thread; empty after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hecke_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn hecke_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an instance from a descriptor: `bc`, `bc:2,3`, `gl:1`..`gl:3`
/// or `gauss`.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_instance_new(descriptor: *const c_char, out: *mut *mut HeckeInstance) -> HeckeStatus {
    guard(|| {
        let desc: Descriptor = text(descriptor)?.parse()?;
        let inner = match desc {
            Descriptor::Gauss => Algebra::Gauss(HeckeAlgebra::new(GaussPair::default())),
            other => Algebra::Linear(HeckeAlgebra::new(LinearPair::new(other)?)),
        };
        put(out, HeckeInstance { inner })
    })
}

/// # Safety
/// `inst` must be null or a handle from [`hecke_instance_new`].
#[no_mangle]
pub unsafe extern "C" fn hecke_instance_free(inst: *mut HeckeInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `e` must be null or an element handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hecke_element_free(e: *mut HeckeElem) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// # Safety
/// `c` must be null or a crossed-product handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hecke_cp_free(c: *mut HeckeCp) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Parses an element file (`instance <desc>` header, then
/// `<coeff> [<element>]` lines).
///
/// # Safety
/// Pointers must be valid; `src` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hecke_element_parse(
    inst: *const HeckeInstance,
    src: *const c_char,
    out: *mut *mut HeckeElem,
) -> HeckeStatus {
    guard(|| {
        let src = text(src)?;
        let inner = match &deref(inst)?.inner {
            Algebra::Linear(h) => Elem::Linear(format::parse_element(h.pair(), src)?),
            Algebra::Gauss(h) => Elem::Gauss(format::parse_element(h.pair(), src)?),
        };
        put(out, HeckeElem { inner })
    })
}

/// The basis element `[γ]` of a group element such as `(1/2; 2)`.
///
/// # Safety
/// Pointers must be valid; `elem` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hecke_element_basis(
    inst: *const HeckeInstance,
    elem: *const c_char,
    out: *mut *mut HeckeElem,
) -> HeckeStatus {
    guard(|| {
        let elem = text(elem)?;
        let inner = match &deref(inst)?.inner {
            Algebra::Linear(h) => Elem::Linear(h.basis(&h.pair().parse_elem(elem)?)),
            Algebra::Gauss(h) => Elem::Gauss(h.basis(&h.pair().parse_elem(elem)?)),
        };
        put(out, HeckeElem { inner })
    })
}

/// Renders an element in the element-file grammar.
///
/// # Safety
/// Pointers must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_element_render(
    inst: *const HeckeInstance,
    e: *const HeckeElem,
    out: *mut *mut c_char,
) -> HeckeStatus {
    guard(|| {
        let s = match (&deref(inst)?.inner, &deref(e)?.inner) {
            (Algebra::Linear(h), Elem::Linear(x)) => format::render_element(h.pair(), x),
            (Algebra::Gauss(h), Elem::Gauss(x)) => format::render_element(h.pair(), x),
            _ => return Err(mismatch()),
        };
        put_string(out, s)
    })
}

/// Exact equality of two elements.
///
/// # Safety
/// Pointers must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_element_equal(a: *const HeckeElem, b: *const HeckeElem, out: *mut bool) -> HeckeStatus {
    guard(|| {
        let eq = match (&deref(a)?.inner, &deref(b)?.inner) {
            (Elem::Linear(x), Elem::Linear(y)) => x == y,
            (Elem::Gauss(x), Elem::Gauss(y)) => x == y,
            _ => false,
        };
        put_value(out, eq)
    })
}

/// Convolution product `a ∗ b`.
///
/// # Safety
/// Pointers must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_convolve(
    inst: *const HeckeInstance,
    a: *const HeckeElem,
    b: *const HeckeElem,
    out: *mut *mut HeckeElem,
) -> HeckeStatus {
    guard(|| {
        let inner = match (&deref(inst)?.inner, &deref(a)?.inner, &deref(b)?.inner) {
            (Algebra::Linear(h), Elem::Linear(x), Elem::Linear(y)) => Elem::Linear(h.convolve(x, y)?),
            (Algebra::Gauss(h), Elem::Gauss(x), Elem::Gauss(y)) => Elem::Gauss(h.convolve(x, y)?),
            _ => return Err(mismatch()),
        };
        put(out, HeckeElem { inner })
    })
}

/// Sum `a + b`.
///
/// # Safety
/// Pointers must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_add(a: *const HeckeElem, b: *const HeckeElem, out: *mut *mut HeckeElem) -> HeckeStatus {
    guard(|| {
        let inner = match (&deref(a)?.inner, &deref(b)?.inner) {
            (Elem::Linear(x), Elem::Linear(y)) => Elem::Linear(x.add(y)?),
            (Elem::Gauss(x), Elem::Gauss(y)) => Elem::Gauss(x.add(y)?),
            _ => return Err(mismatch()),
        };
        put(out, HeckeElem { inner })
    })
}

/// The involution `f*(γ) = f(γ⁻¹)`.
///
/// # Safety
/// Pointers must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_involution(
    inst: *const HeckeInstance,
    a: *const HeckeElem,
    out: *mut *mut HeckeElem,
) -> HeckeStatus {
    guard(|| {
        let inner = match (&deref(inst)?.inner, &deref(a)?.inner) {
            (Algebra::Linear(h), Elem::Linear(x)) => Elem::Linear(h.involution(x)),
            (Algebra::Gauss(h), Elem::Gauss(x)) => Elem::Gauss(h.involution(x)),
            _ => return Err(mismatch()),
        };
        put(out, HeckeElem { inner })
    })
}

/// Right and left coset counts `R(γ)`, `L(γ)` of a group element.
///
/// # Safety
/// Pointers must be valid; `elem` NUL-terminated; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_coset_counts(
    inst: *const HeckeInstance,
    elem: *const c_char,
    r: *mut u64,
    l: *mut u64,
) -> HeckeStatus {
    fn counts<P: HeckePair>(p: &P, text: &str) -> Result<(u64, u64), Failure> {
        let k = p.key(&p.parse_elem(text)?);
        Ok((p.r_count(&k), p.l_count(&k)))
    }
    guard(|| {
        let elem = text(elem)?;
        let (rv, lv) = match &deref(inst)?.inner {
            Algebra::Linear(h) => counts(h.pair(), elem)?,
            Algebra::Gauss(h) => counts(h.pair(), elem)?,
        };
        put_value(r, rv)?;
        put_value(l, lv)
    })
}

/// Parses a crossed-product element (`<coeff> mu*(<t>) e[<x>] mu(<s>)` lines).
///
/// # Safety
/// Pointers must be valid; `src` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hecke_cp_parse(
    inst: *const HeckeInstance,
    src: *const c_char,
    out: *mut *mut HeckeCp,
) -> HeckeStatus {
    guard(|| {
        let src = text(src)?;
        let inner = match &deref(inst)?.inner {
            Algebra::Linear(h) => Cp::Linear(format::parse_cp(&CrossedProduct::new(h), src)?),
            Algebra::Gauss(h) => Cp::Gauss(format::parse_cp(&CrossedProduct::new(h), src)?),
        };
        put(out, HeckeCp { inner })
    })
}

/// # Safety
/// Pointers must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_cp_render(
    inst: *const HeckeInstance,
    c: *const HeckeCp,
    out: *mut *mut c_char,
) -> HeckeStatus {
    guard(|| {
        let s = match (&deref(inst)?.inner, &deref(c)?.inner) {
            (Algebra::Linear(h), Cp::Linear(x)) => format::render_cp(h.pair(), x),
            (Algebra::Gauss(h), Cp::Gauss(x)) => format::render_cp(h.pair(), x),
            _ => return Err(mismatch()),
        };
        put_string(out, s)
    })
}

/// Crossed-product multiplication.
///
/// # Safety
/// Pointers must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_cp_mul(
    inst: *const HeckeInstance,
    a: *const HeckeCp,
    b: *const HeckeCp,
    out: *mut *mut HeckeCp,
) -> HeckeStatus {
    guard(|| {
        let inner = match (&deref(inst)?.inner, &deref(a)?.inner, &deref(b)?.inner) {
            (Algebra::Linear(h), Cp::Linear(x), Cp::Linear(y)) => Cp::Linear(CrossedProduct::new(h).cp_mul(x, y)?),
            (Algebra::Gauss(h), Cp::Gauss(x), Cp::Gauss(y)) => Cp::Gauss(CrossedProduct::new(h).cp_mul(x, y)?),
            _ => return Err(mismatch()),
        };
        put(out, HeckeCp { inner })
    })
}

/// Crossed-product involution.
///
/// # Safety
/// Pointers must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_cp_star(
    inst: *const HeckeInstance,
    a: *const HeckeCp,
    out: *mut *mut HeckeCp,
) -> HeckeStatus {
    guard(|| {
        let inner = match (&deref(inst)?.inner, &deref(a)?.inner) {
            (Algebra::Linear(h), Cp::Linear(x)) => Cp::Linear(CrossedProduct::new(h).cp_star(x)),
            (Algebra::Gauss(h), Cp::Gauss(x)) => Cp::Gauss(CrossedProduct::new(h).cp_star(x)),
            _ => return Err(mismatch()),
        };
        put(out, HeckeCp { inner })
    })
}

/// The canonical map from the crossed product into the Hecke algebra.
///
/// # Safety
/// Pointers must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_cp_embed(
    inst: *const HeckeInstance,
    a: *const HeckeCp,
    out: *mut *mut HeckeElem,
) -> HeckeStatus {
    guard(|| {
        let inner = match (&deref(inst)?.inner, &deref(a)?.inner) {
            (Algebra::Linear(h), Cp::Linear(x)) => Elem::Linear(CrossedProduct::new(h).embed(x)?),
            (Algebra::Gauss(h), Cp::Gauss(x)) => Elem::Gauss(CrossedProduct::new(h).embed(x)?),
            _ => return Err(mismatch()),
        };
        put(out, HeckeElem { inner })
    })
}

/// Inverse of [`hecke_cp_embed`].
///
/// # Safety
/// Pointers must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_cp_unembed(
    inst: *const HeckeInstance,
    a: *const HeckeElem,
    out: *mut *mut HeckeCp,
) -> HeckeStatus {
    guard(|| {
        let inner = match (&deref(inst)?.inner, &deref(a)?.inner) {
            (Algebra::Linear(h), Elem::Linear(x)) => Cp::Linear(CrossedProduct::new(h).unembed(x)?),
            (Algebra::Gauss(h), Elem::Gauss(x)) => Cp::Gauss(CrossedProduct::new(h).unembed(x)?),
            _ => return Err(mismatch()),
        };
        put(out, HeckeCp { inner })
    })
}

/// The corner endomorphism `α_s` on an element supported in `N`.
///
/// # Safety
/// Pointers must be valid; `s` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_alpha(
    inst: *const HeckeInstance,
    s: *const c_char,
    a: *const HeckeElem,
    out: *mut *mut HeckeElem,
) -> HeckeStatus {
    guard(|| {
        let s = text(s)?;
        let inner = match (&deref(inst)?.inner, &deref(a)?.inner) {
            (Algebra::Linear(h), Elem::Linear(x)) => {
                Elem::Linear(CrossedProduct::new(h).alpha(&h.pair().parse_s(s)?, x)?)
            }
            (Algebra::Gauss(h), Elem::Gauss(x)) => Elem::Gauss(CrossedProduct::new(h).alpha(&h.pair().parse_s(s)?, x)?),
            _ => return Err(mismatch()),
        };
        put(out, HeckeElem { inner })
    })
}

/// Runs the property suites (all of them when `suite` is null) and
/// returns the JSON report; `passed` is false if any suite failed.
///
/// # Safety
/// `suite` must be null or NUL-terminated; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn hecke_selftest(
    seed: u64,
    suite: *const c_char,
    report: *mut *mut c_char,
    passed: *mut bool,
) -> HeckeStatus {
    guard(|| {
        let only = if suite.is_null() { None } else { Some(text(suite)?) };
        let cfg = selftest::Config { seed, ..Default::default() };
        let r = selftest::run(&cfg, only)?;
        put_value(passed, r.passed())?;
        put_string(report, r.to_json().to_string())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hecke_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cs(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn last_error() -> String {
        unsafe { CStr::from_ptr(hecke_last_error()).to_string_lossy().into_owned() }
    }

    unsafe fn render(inst: *const HeckeInstance, e: *const HeckeElem) -> String {
        let mut s = ptr::null_mut();
        assert_eq!(hecke_element_render(inst, e, &mut s), HeckeStatus::Ok);
        let out = CStr::from_ptr(s).to_string_lossy().into_owned();
        hecke_string_free(s);
        out
    }

    #[test]
    fn bc_convolution_round_trip() {
        unsafe {
            let mut inst = ptr::null_mut();
            assert_eq!(hecke_instance_new(cs("bc").as_ptr(), &mut inst), HeckeStatus::Ok);
            let (mut a, mut b, mut c, mut six) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
            assert_eq!(hecke_element_basis(inst, cs("(0; 2)").as_ptr(), &mut a), HeckeStatus::Ok);
            assert_eq!(hecke_element_basis(inst, cs("(0; 3)").as_ptr(), &mut b), HeckeStatus::Ok);
            assert_eq!(hecke_convolve(inst, a, b, &mut c), HeckeStatus::Ok);
            assert_eq!(hecke_element_basis(inst, cs("(0; 6)").as_ptr(), &mut six), HeckeStatus::Ok);
            let mut eq = false;
            assert_eq!(hecke_element_equal(c, six, &mut eq), HeckeStatus::Ok);
            assert!(eq);
            let text = render(inst, c);
            let mut back = ptr::null_mut();
            assert_eq!(hecke_element_parse(inst, cs(&text).as_ptr(), &mut back), HeckeStatus::Ok);
            assert_eq!(hecke_element_equal(back, c, &mut eq), HeckeStatus::Ok);
            assert!(eq);
            let (mut r, mut l) = (0u64, 0u64);
            assert_eq!(hecke_coset_counts(inst, cs("(1/2; 2)").as_ptr(), &mut r, &mut l), HeckeStatus::Ok);
            assert_eq!((r, l), (2, 1));
            let mut sum = ptr::null_mut();
            assert_eq!(hecke_add(c, six, &mut sum), HeckeStatus::Ok);
            assert_eq!(render(inst, sum), "instance bc\n2 [(0; 6)]\n");
            for h in [a, b, c, six, back, sum] {
                hecke_element_free(h);
            }
            hecke_instance_free(inst);
        }
    }

    #[test]
    fn errors_are_reported() {
        unsafe {
            let mut inst = ptr::null_mut();
            assert_eq!(hecke_instance_new(cs("gl:7").as_ptr(), &mut inst), HeckeStatus::Parse);
            assert!(!last_error().is_empty());
            assert_eq!(hecke_instance_new(ptr::null(), &mut inst), HeckeStatus::NullPointer);
            let (mut bc, mut gauss) = (ptr::null_mut(), ptr::null_mut());
            assert_eq!(hecke_instance_new(cs("bc").as_ptr(), &mut bc), HeckeStatus::Ok);
            assert!(last_error().is_empty());
            assert_eq!(hecke_instance_new(cs("gauss").as_ptr(), &mut gauss), HeckeStatus::Ok);
            let (mut x, mut y, mut z) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
            assert_eq!(hecke_element_basis(bc, cs("(0; 2)").as_ptr(), &mut x), HeckeStatus::Ok);
            assert_eq!(hecke_element_basis(gauss, cs("(1/2, 1; 1)").as_ptr(), &mut y), HeckeStatus::Ok);
            assert_eq!(hecke_convolve(bc, x, y, &mut z), HeckeStatus::InstanceMismatch);
            assert!(z.is_null());
            assert_eq!(hecke_element_basis(bc, cs("(0; ").as_ptr(), &mut z), HeckeStatus::Parse);
            let mut other = ptr::null_mut();
            assert_eq!(hecke_instance_new(cs("bc:2").as_ptr(), &mut other), HeckeStatus::Ok);
            let mut w = ptr::null_mut();
            assert_eq!(hecke_element_basis(other, cs("(0; 2)").as_ptr(), &mut w), HeckeStatus::Ok);
            assert_eq!(hecke_convolve(bc, x, w, &mut z), HeckeStatus::InstanceMismatch);
            hecke_element_free(x);
            hecke_element_free(y);
            hecke_element_free(w);
            hecke_instance_free(bc);
            hecke_instance_free(gauss);
            hecke_instance_free(other);
        }
    }

    #[test]
    fn crossed_product_through_the_abi() {
        unsafe {
            let mut inst = ptr::null_mut();
            assert_eq!(hecke_instance_new(cs("bc").as_ptr(), &mut inst), HeckeStatus::Ok);
            let src = cs("instance bc\n1 mu*(1) e[(0; 1)] mu(2)\n");
            let (mut mu, mut star, mut prod) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
            assert_eq!(hecke_cp_parse(inst, src.as_ptr(), &mut mu), HeckeStatus::Ok);
            assert_eq!(hecke_cp_star(inst, mu, &mut star), HeckeStatus::Ok);
            assert_eq!(hecke_cp_mul(inst, star, mu, &mut prod), HeckeStatus::Ok);
            let (mut e, mut one) = (ptr::null_mut(), ptr::null_mut());
            assert_eq!(hecke_cp_embed(inst, prod, &mut e), HeckeStatus::Ok);
            assert_eq!(hecke_element_basis(inst, cs("(0; 1)").as_ptr(), &mut one), HeckeStatus::Ok);
            let mut eq = false;
            assert_eq!(hecke_element_equal(e, one, &mut eq), HeckeStatus::Ok);
            assert!(eq, "μ₂*μ₂ = 1");
            let mut back = ptr::null_mut();
            assert_eq!(hecke_cp_unembed(inst, e, &mut back), HeckeStatus::Ok);
            let mut s = ptr::null_mut();
            assert_eq!(hecke_cp_render(inst, back, &mut s), HeckeStatus::Ok);
            assert!(CStr::from_ptr(s).to_str().unwrap().contains("mu(1)"));
            hecke_string_free(s);
            let (mut x, mut ax) = (ptr::null_mut(), ptr::null_mut());
            assert_eq!(hecke_element_basis(inst, cs("(1/2; 1)").as_ptr(), &mut x), HeckeStatus::Ok);
            assert_eq!(hecke_alpha(inst, cs("2").as_ptr(), x, &mut ax), HeckeStatus::Ok);
            assert!(render(inst, ax).contains("1/4"));
            for h in [e, one, x, ax] {
                hecke_element_free(h);
            }
            for c in [mu, star, prod, back] {
                hecke_cp_free(c);
            }
            hecke_instance_free(inst);
        }
    }

    #[test]
    fn selftest_single_suite() {
        unsafe {
            let (mut report, mut passed) = (ptr::null_mut(), false);
            let st = hecke_selftest(0, cs("r-multiplicative").as_ptr(), &mut report, &mut passed);
            assert_eq!(st, HeckeStatus::Ok);
            assert!(passed);
            let json = CStr::from_ptr(report).to_str().unwrap().to_owned();
            assert!(json.contains("r-multiplicative"));
            hecke_string_free(report);
            assert_eq!(hecke_selftest(0, cs("nope").as_ptr(), &mut report, &mut passed), HeckeStatus::Parse);
        }
    }

    #[test]
    fn version_is_a_c_string() {
        let v = unsafe { CStr::from_ptr(hecke_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
