//! Output plumbing: reproducibility stamps, full-precision CSV, and atomic
//! file writes.

use std::fs;
use std::io::Write;
use std::path::Path;

/// First line of every output: tool version plus the full flag set, so any
/// artifact can be regenerated from its own header.
pub fn stamp() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    format!("# farcast {} {}", env!("CARGO_PKG_VERSION"), args.join(" "))
}

/// Stamp as a JSON meta object.
pub fn meta() -> serde_json::Value {
    let args: Vec<String> = std::env::args().skip(1).collect();
    serde_json::json!({
        "tool": "farcast",
        "version": env!("CARGO_PKG_VERSION"),
        "args": args,
    })
}

/// 17 significant digits, so downstream fits are never truncation-limited.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Assemble a stamped CSV document.
pub fn csv_document(header: &str, rows: &[String]) -> String {
    let mut doc = String::new();
    doc.push_str(&stamp());
    doc.push('\n');
    doc.push_str(header);
    doc.push('\n');
    for row in rows {
        doc.push_str(row);
        doc.push('\n');
    }
    doc
}

/// Wrap a JSON payload with the meta stamp. Keys serialize in stable
/// (alphabetical) order.
pub fn json_document(data: serde_json::Value) -> String {
    let doc = serde_json::json!({ "meta": meta(), "data": data });
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}

/// Write to `path` via a temporary sibling plus rename (no partial files on
/// error), or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, contents: &str) -> std::io::Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()
        }
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".tmp");
            let tmp = std::path::PathBuf::from(tmp);
            fs::write(&tmp, contents)?;
            fs::rename(&tmp, path)
        }
    }
}
