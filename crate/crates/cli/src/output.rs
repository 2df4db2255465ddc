use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

pub const SCHEMA: &str = "fextq-report/1";

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Adds the schema tag and writes the JSON summary when requested.
pub fn report(path: Option<&Path>, command: &str, mut body: Value) -> std::io::Result<()> {
    let Some(path) = path else {
        return Ok(());
    };
    if let Value::Object(map) = &mut body {
        map.insert("schema".into(), SCHEMA.into());
        map.insert("command".into(), command.into());
        map.insert("status".into(), "ok".into());
    }
    let mut text = serde_json::to_string_pretty(&body).map_err(std::io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

pub fn warn(warnings: &mut Vec<String>, message: String) {
    eprintln!("warning: {message}");
    warnings.push(message);
}
