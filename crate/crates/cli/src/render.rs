//! Report rendering. JSON is the source of truth; markdown and CSV are
//! flattened views of the same value: top-level scalars go into a summary
//! table and every array of objects becomes its own table.

use serde_json::{Map, Value};

pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            a.iter().map(cell).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

fn is_table(v: &Value) -> bool {
    matches!(v, Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object))
}

fn collect(title: &str, obj: &Map<String, Value>, out: &mut Vec<Table>) {
    let mut summary = Table { title: title.to_string(), headers: vec!["field".into(), "value".into()], rows: vec![] };
    let mut nested = Vec::new();
    let mut arrays = Vec::new();
    for (key, v) in obj {
        let name = if title.is_empty() { key.clone() } else { format!("{title}.{key}") };
        match v {
            Value::Object(inner) => nested.push((name, inner)),
            Value::Array(rows) if is_table(v) => {
                let mut headers: Vec<String> = Vec::new();
                for r in rows {
                    for k in r.as_object().expect("checked").keys() {
                        if !headers.contains(k) {
                            headers.push(k.clone());
                        }
                    }
                }
                let body = rows
                    .iter()
                    .map(|r| headers.iter().map(|h| r.get(h).map_or(String::new(), cell)).collect())
                    .collect();
                arrays.push(Table { title: name, headers, rows: body });
            }
            _ => summary.rows.push(vec![key.clone(), cell(v)]),
        }
    }
    if !summary.rows.is_empty() {
        out.push(summary);
    }
    out.extend(arrays);
    for (name, inner) in nested {
        collect(&name, inner, out);
    }
}

pub fn tables(v: &Value) -> Vec<Table> {
    let mut out = Vec::new();
    if let Value::Object(obj) = v {
        collect("", obj, &mut out);
    }
    out
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

pub fn markdown(heading: &str, v: &Value) -> String {
    let mut s = format!("# {heading}\n\nLog-domain quantities are shown as natural logarithms.\n");
    for t in tables(v) {
        s.push('\n');
        if !t.title.is_empty() {
            s.push_str(&format!("## {}\n\n", t.title));
        }
        s.push_str(&format!("| {} |\n", t.headers.iter().map(|h| md_escape(h)).collect::<Vec<_>>().join(" | ")));
        s.push_str(&format!("|{}\n", " --- |".repeat(t.headers.len())));
        for r in &t.rows {
            s.push_str(&format!("| {} |\n", r.iter().map(|c| md_escape(c)).collect::<Vec<_>>().join(" | ")));
        }
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One block per table: a `table,<title>` line, the header, the rows, and a
/// blank separator line.
pub fn csv(v: &Value) -> String {
    let mut s = String::new();
    for t in tables(v) {
        let title = if t.title.is_empty() { "summary" } else { &t.title };
        s.push_str(&format!("table,{}\n", csv_field(title)));
        s.push_str(&t.headers.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(","));
        s.push('\n');
        for r in &t.rows {
            s.push_str(&r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_objects_and_arrays() {
        let v = json!({"schema": 1, "report": {"passed": true, "rows": [{"n": 0, "x": 1.5}, {"n": 1, "x": null}]}});
        let t = tables(&v);
        let titles: Vec<&str> = t.iter().map(|t| t.title.as_str()).collect();
        assert_eq!(titles, vec!["", "report", "report.rows"]);
        assert_eq!(t[2].rows[1], vec!["1".to_string(), "-".to_string()]);
    }

    #[test]
    fn csv_quotes() {
        let v = json!({"label": "a,b"});
        assert!(csv(&v).contains("\"a,b\""));
    }

    #[test]
    fn markdown_has_tables() {
        let md = markdown("demo", &json!({"rows": [{"k": 1}]}));
        assert!(md.contains("## rows") && md.contains("| k |"));
    }
}
