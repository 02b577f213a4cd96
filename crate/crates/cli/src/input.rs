use std::fs;

use anyhow::Context;

/// A literal string, or the contents of a file for `@path` with one trailing
/// newline removed.
pub fn read_arg(arg: &str) -> anyhow::Result<Vec<u8>> {
    let Some(path) = arg.strip_prefix('@') else {
        return Ok(arg.as_bytes().to_vec());
    };
    let mut bytes = fs::read(path).with_context(|| format!("reading {path}"))?;
    if bytes.last() == Some(&b'\n') {
        bytes.pop();
        if bytes.last() == Some(&b'\r') {
            bytes.pop();
        }
    }
    Ok(bytes)
}
