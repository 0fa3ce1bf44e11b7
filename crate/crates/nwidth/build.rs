use std::path::{Path, PathBuf};
use std::{env, fs};

/// The system LAPACK backend links `-lcblas`, but some distributions ship the
/// CBLAS interface only as GSL's `libgslcblas`. When no `libcblas` is present,
/// expose the GSL one under the expected name via a symlink in OUT_DIR.
fn main() {
    let dirs = [
        "/usr/lib/x86_64-linux-gnu",
        "/usr/lib64",
        "/usr/lib",
        "/usr/local/lib",
    ];
    let find = |name: &str| -> Option<PathBuf> {
        dirs.iter()
            .map(|d| Path::new(d).join(name))
            .find(|p| p.exists())
    };
    if find("libcblas.so").is_some() {
        return;
    }
    if let Some(gsl) = find("libgslcblas.so") {
        let out = env::var("OUT_DIR").unwrap();
        let link = Path::new(&out).join("libcblas.so");
        let _ = fs::remove_file(&link);
        std::os::unix::fs::symlink(&gsl, &link).expect("symlink libcblas.so");
        println!("cargo:rustc-link-search=native={out}");
    }
}
