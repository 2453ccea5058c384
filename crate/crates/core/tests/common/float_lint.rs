//! Floating point is allowed only in the SVG renderer.

use std::path::{Path, PathBuf};

const ALLOWED: &[&str] = &["src/report.rs"];

fn rust_files(dir: &Path, out: &mut Vec<PathBuf>) {
    let Ok(entries) = std::fs::read_dir(dir) else { return };
    for e in entries.flatten() {
        let p = e.path();
        if p.is_dir() {
            rust_files(&p, out);
        } else if p.extension().is_some_and(|x| x == "rs") {
            out.push(p);
        }
    }
}

/// Source with comments and string or char literals blanked out.
pub fn code_only(src: &str) -> String {
    let b: Vec<char> = src.chars().collect();
    let mut out = String::with_capacity(b.len());
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let next = b.get(i + 1).copied();
        if c == '/' && next == Some('/') {
            while i < b.len() && b[i] != '\n' {
                i += 1;
            }
        } else if c == '/' && next == Some('*') {
            i += 2;
            while i + 1 < b.len() && !(b[i] == '*' && b[i + 1] == '/') {
                i += 1;
            }
            i += 2;
            out.push(' ');
        } else if c == '"' {
            i += 1;
            while i < b.len() && b[i] != '"' {
                if b[i] == '\\' {
                    i += 1;
                }
                i += 1;
            }
            i += 1;
            out.push_str("\"\"");
        } else if c == '\'' && b.get(i + 2) == Some(&'\'') {
            i += 3;
            out.push_str("' '");
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

fn is_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub fn offences(code: &str) -> Vec<String> {
    let chars: Vec<char> = code.chars().collect();
    let mut found = Vec::new();
    let float_types = [format!("f{}", 32), format!("f{}", 64)];
    let mut i = 0;
    while i < chars.len() {
        if !is_ident(chars[i]) || (i > 0 && (is_ident(chars[i - 1]) || chars[i - 1] == '.')) {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && is_ident(chars[i]) {
            i += 1;
        }
        let word: String = chars[start..i].iter().collect();
        if float_types.contains(&word) {
            found.push(word);
            continue;
        }
        if !word.starts_with(|c: char| c.is_ascii_digit()) {
            continue;
        }
        let mantissa = word.trim_start_matches(|c: char| c.is_ascii_digit() || c == '_');
        let exponent = mantissa.starts_with(['e', 'E']) && {
            let rest = &mantissa[1..];
            rest.chars().all(|c| c.is_ascii_digit() || c == '_')
                && (!rest.is_empty() || matches!(chars.get(i), Some('+' | '-')))
        };
        let suffixed = float_types.iter().any(|t| word.ends_with(t.as_str()));
        let fraction = chars.get(i) == Some(&'.')
            && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit());
        if exponent || suffixed || fraction {
            found.push(word);
        }
    }
    found
}


/// Every float type or literal in the crate outside [`ALLOWED`], as `file:line: token`.
pub fn scan() -> (usize, Vec<String>) {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let mut files = Vec::new();
    for dir in ["src", "tests", "examples", "benches"] {
        rust_files(&root.join(dir), &mut files);
    }
    let mut bad = Vec::new();
    for f in &files {
        let rel = f.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
        if ALLOWED.contains(&rel.as_str()) {
            continue;
        }
        let code = code_only(&std::fs::read_to_string(f).unwrap());
        for (n, line) in code.lines().enumerate() {
            for o in offences(line) {
                bad.push(format!("{rel}:{}: {o}", n + 1));
            }
        }
    }
    (files.len(), bad)
}
