use serde_json::{Number, Value};

use crate::{Body, Command, Global};

const SCHEMA_VERSION: u64 = 1;

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Simulate { .. } => "simulate",
        Command::Classify { .. } => "classify",
        Command::Entanglement { .. } => "entanglement",
        Command::Orbit { .. } => "orbit",
        Command::Equiv { .. } => "equiv",
        Command::Reduce { .. } => "reduce",
        Command::Weighted { .. } => "weighted",
        Command::Decohere { .. } => "decohere",
        Command::Purify { .. } => "purify",
        Command::Bell { .. } => "bell",
    }
}

/// Round to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64 number"));
            Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

pub fn render(g: &Global, c: &Command, body: Body) -> String {
    let mut out = Body::new();
    out.insert("schema_version".into(), SCHEMA_VERSION.into());
    out.insert("command".into(), command_name(c).into());
    out.insert("seed".into(), g.seed.into());
    for (k, v) in body {
        out.insert(k, v);
    }
    let mut s = serde_json::to_string_pretty(&round_floats(Value::Object(out))).expect("JSON values serialize");
    s.push('\n');
    s
}
