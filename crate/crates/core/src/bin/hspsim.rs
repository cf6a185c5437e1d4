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

use std::io::Write;
use std::process::ExitCode;

use hspsim::harness::{execute, exit_code, parse_config, serialize};

fn main() -> ExitCode {
    let config = match parse_config(std::env::args_os().skip(1)) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = match execute(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    let bytes = serialize(&report, config.format);
    if std::io::stdout().write_all(&bytes).is_err() {
        return ExitCode::from(1);
    }
    if !report.all_passed() {
        for name in report.failed_checks() {
            eprintln!("check failed: {name}");
        }
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
