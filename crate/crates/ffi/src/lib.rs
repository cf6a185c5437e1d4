// Copyright 2026 The hspsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


//! C ABI for `hspsim`.
//!
//! Objects cross the boundary as opaque pointers created by `*_new` and
//! released by the matching `*_free`. Every fallible call returns an
//! [`HspStatus`]; on failure [`hsp_last_error`] describes the cause for the
//! calling thread. Strings returned by the library are owned by the caller
//! and must be released with [`hsp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use hspsim::engine::{identify_subgroup, EngineOptions, DEFAULT_S_CAP};
use hspsim::harness::{self, exit_code, parse_config};
use hspsim::{Error, FiniteGroup, HiddenOracle, Subgroup, SubgroupCatalog};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HspStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Bad input: malformed text, out-of-range index or invalid group data.
    InvalidArgument = 2,
    /// A structural invariant failed during simulation.
    Invariant = 3,
    /// A size or escalation cap was reached.
    ResourceCap = 4,
    /// An output buffer is too small; the needed length was still written.
    BufferTooSmall = 5,
    /// The library panicked. This is a bug.
    Panic = 6,
}

/// A finite group together with its subgroup catalog.
pub struct HspGroup {
    group: Arc<FiniteGroup>,
    catalog: SubgroupCatalog,
}

/// An oracle hiding one subgroup of an [`HspGroup`], with its query ledger.
pub struct HspOracle {
    inner: HiddenOracle,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> HspStatus {
    // Oracle errors at this level come from caller-supplied element ids.
    if matches!(err, Error::Oracle(_)) {
        return HspStatus::InvalidArgument;
    }
    match exit_code(err) {
        1 => HspStatus::InvalidArgument,
        3 => HspStatus::ResourceCap,
        _ => HspStatus::Invariant,
    }
}

fn fail(status: HspStatus, msg: impl Into<String>) -> HspStatus {
    set_error(msg);
    status
}

fn fail_with(err: Error) -> HspStatus {
    fail(status_of(&err), err.to_string())
}

fn guard(f: impl FnOnce() -> HspStatus) -> HspStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(HspStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, HspStatus> {
    if p.is_null() {
        return Err(fail(HspStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(HspStatus::InvalidArgument, "argument is not valid UTF-8"))
}

unsafe fn write_indices(src: &[usize], out: *mut usize, cap: usize, out_len: *mut usize) -> HspStatus {
    if out_len.is_null() || (out.is_null() && cap > 0) {
        return fail(HspStatus::NullPointer, "null output argument");
    }
    *out_len = src.len();
    if src.len() > cap {
        return fail(HspStatus::BufferTooSmall, format!("need room for {} entries", src.len()));
    }
    if !src.is_empty() {
        ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    }
    HspStatus::Ok
}

/// Message for the most recent failure on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hsp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hsp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a group from a spec such as `"Z:6"`, `"D:4"`, `"Q8"`, `"S:3"`,
/// `"Z2^3"` or a JSON `{"order","table"}` document.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsp_group_new(spec: *const c_char, out: *mut *mut HspGroup) -> HspStatus {
    guard(|| {
        if out.is_null() {
            return fail(HspStatus::NullPointer, "null output argument");
        }
        *out = ptr::null_mut();
        let spec = match text(spec) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let group = match FiniteGroup::build(spec) {
            Ok(g) => Arc::new(g),
            Err(e) => return fail_with(e.into()),
        };
        let catalog = match SubgroupCatalog::enumerate(&group) {
            Ok(c) => c,
            Err(e) => return fail_with(e.into()),
        };
        *out = Box::into_raw(Box::new(HspGroup { group, catalog }));
        HspStatus::Ok
    })
}

/// # Safety
/// `group` must come from [`hsp_group_new`] and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hsp_group_free(group: *mut HspGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Group order, or 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hsp_group_order(group: *const HspGroup) -> usize {
    group.as_ref().map_or(0, |g| g.group.order())
}

/// Number of subgroups, or 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hsp_group_subgroup_count(group: *const HspGroup) -> usize {
    group.as_ref().map_or(0, |g| g.catalog.len())
}

/// Product `a·b` of two element ids.
///
/// # Safety
/// `group` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsp_group_mul(
    group: *const HspGroup,
    a: usize,
    b: usize,
    out: *mut usize,
) -> HspStatus {
    guard(|| {
        let (Some(g), false) = (group.as_ref(), out.is_null()) else {
            return fail(HspStatus::NullPointer, "null argument");
        };
        let n = g.group.order();
        if a >= n || b >= n {
            return fail(HspStatus::InvalidArgument, format!("element id out of range 0..{n}"));
        }
        *out = g.group.mul(a, b);
        HspStatus::Ok
    })
}

/// Member ids of catalog entry `index` (largest subgroups first).
///
/// Writes the member count to `out_len` even when the buffer is too small.
///
/// # Safety
/// `out` must have room for `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn hsp_group_subgroup(
    group: *const HspGroup,
    index: usize,
    out: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> HspStatus {
    guard(|| {
        let Some(g) = group.as_ref() else {
            return fail(HspStatus::NullPointer, "null group");
        };
        if index >= g.catalog.len() {
            return fail(HspStatus::InvalidArgument, format!("subgroup index {index} out of range"));
        }
        write_indices(g.catalog.get(index).members(), out, cap, out_len)
    })
}

/// Creates an oracle hiding the subgroup with the given member ids.
///
/// # Safety
/// `members` must point to `len` ids; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsp_oracle_new(
    group: *const HspGroup,
    members: *const usize,
    len: usize,
    out: *mut *mut HspOracle,
) -> HspStatus {
    guard(|| {
        if out.is_null() || (members.is_null() && len > 0) {
            return fail(HspStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Some(g) = group.as_ref() else {
            return fail(HspStatus::NullPointer, "null group");
        };
        let ids = if len == 0 { &[][..] } else { std::slice::from_raw_parts(members, len) };
        let hidden = match Subgroup::new(&g.group, ids) {
            Ok(h) => h,
            Err(e) => return fail_with(e.into()),
        };
        match HiddenOracle::new(g.group.clone(), &hidden) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(HspOracle { inner }));
                HspStatus::Ok
            }
            Err(e) => fail_with(e.into()),
        }
    })
}

/// # Safety
/// `oracle` must come from [`hsp_oracle_new`] and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hsp_oracle_free(oracle: *mut HspOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

/// One classical oracle call: the coset label of element `g`.
///
/// # Safety
/// `oracle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsp_oracle_query(oracle: *mut HspOracle, g: usize, out: *mut usize) -> HspStatus {
    guard(|| {
        let (Some(o), false) = (oracle.as_mut(), out.is_null()) else {
            return fail(HspStatus::NullPointer, "null argument");
        };
        match o.inner.query(g) {
            Ok(label) => {
                *out = label;
                HspStatus::Ok
            }
            Err(e) => fail_with(e.into()),
        }
    })
}

/// Total oracle calls charged so far, or 0 for a null handle.
///
/// # Safety
/// `oracle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hsp_oracle_query_count(oracle: *const HspOracle) -> u64 {
    oracle.as_ref().map_or(0, |o| o.inner.query_count())
}

/// Identifies the hidden subgroup exactly and writes a generating set.
///
/// `s = 0` picks the copy count automatically; `s_cap = 0` uses the default
/// escalation cap. Queries are charged to the oracle's ledger.
///
/// # Safety
/// `out` must have room for `cap` entries; `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hsp_identify(
    oracle: *mut HspOracle,
    s: u32,
    s_cap: u32,
    out: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> HspStatus {
    guard(|| {
        let Some(o) = oracle.as_mut() else {
            return fail(HspStatus::NullPointer, "null oracle");
        };
        if s % 2 == 1 {
            return fail(HspStatus::InvalidArgument, "s must be even");
        }
        let opts = EngineOptions {
            s: (s > 0).then_some(s),
            s_cap: if s_cap == 0 { DEFAULT_S_CAP } else { s_cap },
        };
        match identify_subgroup(&mut o.inner, opts) {
            Ok(id) => write_indices(&id.generators, out, cap, out_len),
            Err(e) => fail_with(e.into()),
        }
    })
}

/// Runs the command-line driver on `argv` (without a program name) and
/// returns the serialized report in `*out`.
///
/// A report whose checks fail is still returned, with status
/// [`HspStatus::Invariant`].
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hsp_run(argv: *const *const c_char, argc: usize, out: *mut *mut c_char) -> HspStatus {
    guard(|| {
        if out.is_null() || (argv.is_null() && argc > 0) {
            return fail(HspStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let mut args = Vec::with_capacity(argc);
        for i in 0..argc {
            match text(*argv.add(i)) {
                Ok(a) => args.push(a.to_string()),
                Err(st) => return st,
            }
        }
        let config = match parse_config(args) {
            Ok(c) => c,
            Err(e) => return fail(HspStatus::InvalidArgument, e.to_string()),
        };
        let report = match harness::execute(&config) {
            Ok(r) => r,
            Err(e) => return fail_with(e),
        };
        let bytes = harness::serialize(&report, config.format);
        let Ok(s) = CString::new(bytes) else {
            return fail(HspStatus::Invariant, "report contains NUL");
        };
        *out = s.into_raw();
        if report.all_passed() {
            HspStatus::Ok
        } else {
            fail(HspStatus::Invariant, format!("check failed: {}", report.failed_checks().join(", ")))
        }
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn hsp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hspsim::error::{CascadeError, EngineError, GroupError};

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&GroupError::UnknownSpec("X".into()).into()), HspStatus::InvalidArgument);
        let cap = Error::Cascade(CascadeError::CapExceeded { needed: 9, cap: 1 });
        assert_eq!(status_of(&cap), HspStatus::ResourceCap);
        assert_eq!(status_of(&EngineError::Singular.into()), HspStatus::Invariant);
    }

    #[test]
    fn panics_become_status() {
        assert_eq!(guard(|| panic!("boom")), HspStatus::Panic);
        let msg = unsafe { CStr::from_ptr(hsp_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }
}
