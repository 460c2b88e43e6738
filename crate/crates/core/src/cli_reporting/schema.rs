//! Validation of reports against the shipped JSON schema.
//!
//! Supports the keywords the schema uses: `type`, `enum`, `required`,
//! `properties`, `additionalProperties`, `items`, `anyOf`, `not` and local `$ref`.

use serde_json::Value;

pub const REPORT_SCHEMA: &str = include_str!("../../../../docs/report.schema.json");

/// Checks a report text; returns the first violation as `path: reason`.
pub fn validate_report(text: &str) -> Result<(), String> {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).map_err(|e| format!("schema: {e}"))?;
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("report is not JSON: {e}"))?;
    check(&schema, &schema, &doc, "$")
}

fn resolve<'a>(root: &'a Value, reference: &str) -> Result<&'a Value, String> {
    let pointer = reference.strip_prefix('#').ok_or_else(|| format!("non-local $ref {reference}"))?;
    root.pointer(pointer).ok_or_else(|| format!("dangling $ref {reference}"))
}

fn type_matches(name: &str, v: &Value) -> bool {
    match name {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => false,
    }
}

fn check(root: &Value, schema: &Value, v: &Value, path: &str) -> Result<(), String> {
    let Some(s) = schema.as_object() else {
        return match schema {
            Value::Bool(true) => Ok(()),
            _ => Err(format!("{path}: not allowed")),
        };
    };
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        check(root, resolve(root, r)?, v, path)?;
    }
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(name) => type_matches(name, v),
            Value::Array(names) => names.iter().filter_map(Value::as_str).any(|n| type_matches(n, v)),
            _ => false,
        };
        if !ok {
            return Err(format!("{path}: expected type {t}"));
        }
    }
    if let Some(options) = s.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in {}", Value::Array(options.clone())));
        }
    }
    if let Some(alts) = s.get("anyOf").and_then(Value::as_array) {
        if !alts.iter().any(|a| check(root, a, v, path).is_ok()) {
            return Err(format!("{path}: matches no alternative"));
        }
    }
    if let Some(negated) = s.get("not") {
        if check(root, negated, v, path).is_ok() {
            return Err(format!("{path}: matches a forbidden form"));
        }
    }
    if let Some(obj) = v.as_object() {
        if let Some(req) = s.get("required").and_then(Value::as_array) {
            for key in req.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    return Err(format!("{path}: missing {key}"));
                }
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (key, value) in obj {
            let sub = format!("{path}.{key}");
            match props.and_then(|p| p.get(key)) {
                Some(p) => check(root, p, value, &sub)?,
                None => {
                    if let Some(extra) = s.get("additionalProperties") {
                        check(root, extra, value, &sub)?;
                    }
                }
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        for (k, item) in arr.iter().enumerate() {
            check(root, items, item, &format!("{path}[{k}]"))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(results: &str) -> String {
        format!(
            r#"{{"tool_version": "0", "config_echo": {{"command": "mass", "family": {{"kind": "zero"}}}},
               "results": {results}, "hypothesis_flags": {{"a": true}}, "error_estimates": {{}}, "timings": {{}}}}"#
        )
    }

    #[test]
    fn accepts_measurements_and_nested_records() {
        let ok = report(
            r#"{"m": {"value": 1.5, "error_estimate": "NaN"}, "class": "zero",
                "rows": [{"r": {"value": [1, 2], "error_estimate": 0}}]}"#,
        );
        validate_report(&ok).unwrap();
    }

    #[test]
    fn rejects_bare_numbers_and_missing_errors() {
        assert!(validate_report(&report(r#"{"m": 1.5}"#)).is_err());
        assert!(validate_report(&report(r#"{"m": {"value": 1.5}}"#)).is_err());
        assert!(validate_report(&report(r#"{"rows": [{"r": 2}]}"#)).is_err());
        let extra = report("{}").replacen('{', r#"{"extra": 1, "#, 1);
        assert!(validate_report(&extra).is_err());
    }
}
