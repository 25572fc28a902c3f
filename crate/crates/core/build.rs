use std::path::Path;
use std::process::Command;

fn git(args: &[&str]) -> Option<String> {
    let out = Command::new("git").args(args).output().ok()?;
    if !out.status.success() {
        return None;
    }
    let s = String::from_utf8(out.stdout).ok()?.trim().to_string();
    (!s.is_empty()).then_some(s)
}

fn main() {
    let pkg = env!("CARGO_PKG_VERSION");
    let version = match git(&["describe", "--tags", "--dirty"]) {
        Some(tagged) => tagged,
        None => match git(&["describe", "--always", "--dirty", "--abbrev=7"]) {
            Some(commit) => format!("{pkg}+g{commit}"),
            None => pkg.to_string(),
        },
    };
    println!("cargo:rustc-env=BETA_ENSEMBLE_VERSION={version}");
    if let Some(dir) = git(&["rev-parse", "--git-dir"]) {
        for f in ["HEAD", "index"] {
            let p = Path::new(&dir).join(f);
            if p.exists() {
                println!("cargo:rerun-if-changed={}", p.display());
            }
        }
    }
    println!("cargo:rerun-if-changed=build.rs");
}
