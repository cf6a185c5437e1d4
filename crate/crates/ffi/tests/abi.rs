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


use std::ffi::{CStr, CString};
use std::ptr;

use hspsim_ffi::*;

fn group(spec: &str) -> *mut HspGroup {
    let spec = CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { hsp_group_new(spec.as_ptr(), &mut g) }, HspStatus::Ok);
    g
}

fn last_error() -> String {
    let p = hsp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn group_catalog() {
    let g = group("D:4");
    unsafe {
        assert_eq!(hsp_group_order(g), 8);
        assert_eq!(hsp_group_subgroup_count(g), 10);
        let mut buf = [0usize; 8];
        let mut len = 0;
        assert_eq!(hsp_group_subgroup(g, 0, buf.as_mut_ptr(), 8, &mut len), HspStatus::Ok);
        assert_eq!(&buf[..len], &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(hsp_group_subgroup(g, 0, buf.as_mut_ptr(), 2, &mut len), HspStatus::BufferTooSmall);
        assert_eq!(len, 8);
        assert_eq!(hsp_group_subgroup(g, 10, buf.as_mut_ptr(), 8, &mut len), HspStatus::InvalidArgument);
        let mut p = 0;
        assert_eq!(hsp_group_mul(g, 1, 3, &mut p), HspStatus::Ok);
        assert_eq!(p, 0);
        hsp_group_free(g);
    }
}

#[test]
fn bad_inputs() {
    let spec = CString::new("X:1").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(hsp_group_new(spec.as_ptr(), &mut g), HspStatus::InvalidArgument);
        assert!(g.is_null());
        assert!(last_error().starts_with("group_core:"));
        assert_eq!(hsp_group_new(ptr::null(), &mut g), HspStatus::NullPointer);
        assert_eq!(hsp_group_order(ptr::null()), 0);
        hsp_group_free(ptr::null_mut());
        hsp_oracle_free(ptr::null_mut());
        hsp_string_free(ptr::null_mut());

        let g = group("Z:6");
        let mut o = ptr::null_mut();
        let not_closed = [0usize, 1];
        assert_eq!(hsp_oracle_new(g, not_closed.as_ptr(), 2, &mut o), HspStatus::InvalidArgument);
        assert!(o.is_null());
        hsp_group_free(g);
    }
}

#[test]
fn oracle_and_identify() {
    let g = group("Z:6");
    let hidden = [0usize, 3];
    let mut o = ptr::null_mut();
    unsafe {
        assert_eq!(hsp_oracle_new(g, hidden.as_ptr(), 2, &mut o), HspStatus::Ok);
        let (mut a, mut b) = (0, 0);
        assert_eq!(hsp_oracle_query(o, 1, &mut a), HspStatus::Ok);
        assert_eq!(hsp_oracle_query(o, 4, &mut b), HspStatus::Ok);
        assert_eq!(a, b);
        assert_eq!(hsp_oracle_query_count(o), 2);
        assert_eq!(hsp_oracle_query(o, 6, &mut a), HspStatus::InvalidArgument);

        let mut gens = [0usize; 4];
        let mut len = 0;
        assert_eq!(hsp_identify(o, 3, 0, gens.as_mut_ptr(), 4, &mut len), HspStatus::InvalidArgument);
        assert_eq!(hsp_identify(o, 0, 0, gens.as_mut_ptr(), 4, &mut len), HspStatus::Ok);
        assert_eq!(&gens[..len], &[3]);
        assert!(hsp_oracle_query_count(o) > 2);

        assert_eq!(hsp_identify(o, 2, 1, gens.as_mut_ptr(), 4, &mut len), HspStatus::ResourceCap);
        hsp_oracle_free(o);
        hsp_group_free(g);
    }
}

#[test]
fn run_driver() {
    let args: Vec<CString> = ["matrix", "--group", "Z:2", "--s", "2"]
        .iter()
        .map(|a| CString::new(*a).unwrap())
        .collect();
    let argv: Vec<_> = args.iter().map(|a| a.as_ptr()).collect();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(hsp_run(argv.as_ptr(), argv.len(), &mut out), HspStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_string();
        hsp_string_free(out);
        assert!(text.contains("\"1/4\""));

        let bad = [CString::new("simulate").unwrap(), CString::new("--s").unwrap(), CString::new("3").unwrap()];
        let argv: Vec<_> = bad.iter().map(|a| a.as_ptr()).collect();
        assert_eq!(hsp_run(argv.as_ptr(), argv.len(), &mut out), HspStatus::InvalidArgument);
        assert!(out.is_null());
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(hsp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
