//! Deterministic JSON text: sorted keys, `%.17g` floats, non-finite floats as strings.

use std::collections::BTreeMap;
use std::fmt::Write;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Node>),
    Obj(BTreeMap<String, Node>),
}

impl Node {
    pub fn obj<I, K>(pairs: I) -> Node
    where
        I: IntoIterator<Item = (K, Node)>,
        K: Into<String>,
    {
        Node::Obj(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn nums(values: &[f64]) -> Node {
        Node::Arr(values.iter().map(|&v| Node::Num(v)).collect())
    }

    /// `{value, error_estimate}`.
    pub fn measurement(value: Node, error: f64) -> Node {
        Node::obj([("value", value), ("error_estimate", Node::Num(error))])
    }

    pub fn scalar(value: f64, error: f64) -> Node {
        Node::measurement(Node::Num(value), error)
    }

    pub fn from_json(v: &serde_json::Value) -> Node {
        use serde_json::Value;
        match v {
            Value::Null => Node::Null,
            Value::Bool(b) => Node::Bool(*b),
            Value::Number(x) => match x.as_i64() {
                Some(i) => Node::Int(i),
                None => Node::Num(x.as_f64().unwrap_or(f64::NAN)),
            },
            Value::String(s) => Node::Str(s.clone()),
            Value::Array(a) => Node::Arr(a.iter().map(Node::from_json).collect()),
            Value::Object(m) => Node::Obj(m.iter().map(|(k, v)| (k.clone(), Node::from_json(v))).collect()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Node::Null => out.push_str("null"),
            Node::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Node::Int(i) => write!(out, "{i}").unwrap(),
            Node::Num(x) => out.push_str(&number(*x)),
            Node::Str(s) => out.push_str(&quote(s)),
            Node::Arr(items) if items.iter().all(Node::is_leaf) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, indent);
                }
                out.push(']');
            }
            Node::Arr(items) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    out.push_str(if k > 0 { ",\n" } else { "\n" });
                    pad(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                pad(out, indent);
                out.push(']');
            }
            Node::Obj(map) if map.is_empty() => out.push_str("{}"),
            Node::Obj(map) => {
                out.push('{');
                for (k, (key, value)) in map.iter().enumerate() {
                    out.push_str(if k > 0 { ",\n" } else { "\n" });
                    pad(out, indent + 1);
                    out.push_str(&quote(key));
                    out.push_str(": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                pad(out, indent);
                out.push('}');
            }
        }
    }

    fn is_leaf(&self) -> bool {
        !matches!(self, Node::Arr(_) | Node::Obj(_))
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// JSON token for `x`: `%.17g` when finite, else `"NaN"`, `"Infinity"`, `"-Infinity"`.
pub fn number(x: f64) -> String {
    if x.is_nan() {
        "\"NaN\"".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "\"Infinity\"".into()
        } else {
            "\"-Infinity\"".into()
        }
    } else {
        format_g17(x)
    }
}

/// C's `%.17g`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (16 - exp) as usize))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
