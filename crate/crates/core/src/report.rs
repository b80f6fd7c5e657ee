//! Canonical JSON and CSV output shared by the CLI and the tests.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

/// Pretty JSON with object keys sorted at every depth, so equal values give
/// byte-identical text.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    // `Value` objects are ordered maps, so a round trip sorts every key.
    let v: Value = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// `{"tool", "version", "config", "result"}` envelope for an artifact.
pub fn artifact<C: Serialize, R: Serialize>(tool: &str, version: &str, config: &C, result: &R) -> Result<String> {
    canonical_json(&serde_json::json!({
        "tool": tool,
        "version": version,
        "config": serde_json::to_value(config)?,
        "result": serde_json::to_value(result)?,
    }))
}

pub fn write_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    write_csv(std::fs::File::create(path)?, header, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn keys_are_sorted() {
        let mut m = HashMap::new();
        for k in ["zeta", "alpha", "mid"] {
            m.insert(k, serde_json::json!({"b": 1, "a": [2.5, null]}));
        }
        let s = canonical_json(&m).unwrap();
        let a = s.find("alpha").unwrap();
        assert!(a < s.find("mid").unwrap() && s.find("mid").unwrap() < s.find("zeta").unwrap());
        assert_eq!(s, canonical_json(&m).unwrap());
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["n", "x"], &[vec!["1".into(), "0.5".into()]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,x\n1,0.5\n");
    }
}
