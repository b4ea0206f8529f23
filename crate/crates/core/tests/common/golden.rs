use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
}

pub fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(dir().join("commands.txt")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once(':').unwrap();
            Case { name: name.trim().into(), args: args.split_whitespace().map(String::from).collect() }
        })
        .collect()
}

/// Exit code plus stdout, and the SVG file when the case writes one.
pub fn run(case: &Case) -> (String, Option<String>) {
    let out = Command::new(env!("CARGO_BIN_EXE_kmfan"))
        .args(&case.args)
        .current_dir(dir())
        .output()
        .unwrap();
    let text = format!("exit: {}\n{}", out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap());
    let svg = case
        .args
        .iter()
        .position(|a| a == "--out")
        .map(|i| std::fs::read_to_string(dir().join(&case.args[i + 1])).unwrap_or_default());
    (text, svg)
}

pub fn expected(case: &Case) -> (String, Option<String>) {
    let e = dir().join("expected");
    let text = std::fs::read_to_string(e.join(format!("{}.out", case.name))).unwrap_or_default();
    let svg = case.args.contains(&"--out".to_string()).then(|| {
        std::fs::read_to_string(e.join(format!("{}.svg", case.name))).unwrap_or_default()
    });
    (text, svg)
}

pub fn bless(case: &Case) {
    let (text, svg) = run(case);
    let e = dir().join("expected");
    std::fs::create_dir_all(&e).unwrap();
    std::fs::write(e.join(format!("{}.out", case.name)), text).unwrap();
    if let Some(s) = svg {
        std::fs::write(e.join(format!("{}.svg", case.name)), s).unwrap();
    }
}
