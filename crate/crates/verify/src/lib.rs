//! Locating the `bbshift` binary from a test in another package.

use std::path::PathBuf;
use std::process::Command;

/// Path of the `bbshift` executable next to the running test, building it
/// first when this package is tested on its own.
pub fn cli_binary() -> PathBuf {
    let exe = std::env::current_exe().expect("test executable path");
    // target/<profile>/deps/<test> -> target/<profile>/bbshift
    let profile_dir = exe
        .parent()
        .and_then(|d| d.parent())
        .expect("target layout");
    let bin = profile_dir.join(format!("bbshift{}", std::env::consts::EXE_SUFFIX));
    if !bin.exists() {
        let release = profile_dir.file_name().is_some_and(|n| n == "release");
        let mut cmd = Command::new(env!("CARGO"));
        cmd.args(["build", "-q", "-p", "bbshift-cli"]);
        if release {
            cmd.arg("--release");
        }
        let status = cmd.status().expect("spawn cargo");
        assert!(status.success(), "building bbshift-cli failed");
    }
    bin
}
