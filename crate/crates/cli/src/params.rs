//! Typed per-command parameters and their three sources: defaults, the
//! config file and command-line flags.

use std::fmt;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    /// Non-negative integer.
    Int,
    Bool,
    Choice(&'static [&'static str]),
    /// Comma-separated on the command line, an array in the config file.
    List,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    List(Vec<f64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Float(v) => write!(f, "{v}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Text(v) => f.write_str(v),
            Value::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParamSpec {
    pub key: &'static str,
    pub kind: Kind,
    pub default: Value,
    pub help: &'static str,
}

pub fn float(key: &'static str, default: f64, help: &'static str) -> ParamSpec {
    ParamSpec { key, kind: Kind::Float, default: Value::Float(default), help }
}

pub fn int(key: &'static str, default: u64, help: &'static str) -> ParamSpec {
    ParamSpec { key, kind: Kind::Int, default: Value::Int(default), help }
}

pub fn flag(key: &'static str, default: bool, help: &'static str) -> ParamSpec {
    ParamSpec { key, kind: Kind::Bool, default: Value::Bool(default), help }
}

pub fn choice(key: &'static str, options: &'static [&'static str], help: &'static str) -> ParamSpec {
    ParamSpec {
        key,
        kind: Kind::Choice(options),
        default: Value::Text(options[0].to_string()),
        help,
    }
}

pub fn list(key: &'static str, default: &[f64], help: &'static str) -> ParamSpec {
    ParamSpec { key, kind: Kind::List, default: Value::List(default.to_vec()), help }
}

fn bad(key: &str, msg: impl fmt::Display) -> CliError {
    CliError::Usage(format!("invalid value for `{key}`: {msg}"))
}

fn finite(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(key, "must be finite"))
    }
}

impl ParamSpec {
    pub fn value_name(&self) -> &'static str {
        match self.kind {
            Kind::Float => "FLOAT",
            Kind::Int => "INT",
            Kind::Bool => "BOOL",
            Kind::Choice(_) => "NAME",
            Kind::List => "LIST",
        }
    }

    /// Parses a command-line string.
    pub fn parse_str(&self, s: &str) -> Result<Value, CliError> {
        let k = self.key;
        let s = s.trim();
        match self.kind {
            Kind::Float => {
                let v = s.parse::<f64>().map_err(|e| bad(k, format!("`{s}`: {e}")))?;
                Ok(Value::Float(finite(k, v)?))
            }
            Kind::Int => s
                .parse::<u64>()
                .map(Value::Int)
                .map_err(|e| bad(k, format!("`{s}`: {e}"))),
            Kind::Bool => match s {
                "true" | "1" | "yes" => Ok(Value::Bool(true)),
                "false" | "0" | "no" => Ok(Value::Bool(false)),
                _ => Err(bad(k, format!("`{s}` is not true or false"))),
            },
            Kind::Choice(opts) => self.check_choice(s, opts),
            Kind::List => {
                let mut out = Vec::new();
                for part in s.split(',') {
                    let v = part
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| bad(k, format!("`{part}`: {e}")))?;
                    out.push(finite(k, v)?);
                }
                Ok(Value::List(out))
            }
        }
    }

    fn check_choice(&self, s: &str, opts: &[&str]) -> Result<Value, CliError> {
        if opts.contains(&s) {
            Ok(Value::Text(s.to_string()))
        } else {
            Err(bad(self.key, format!("`{s}`, expected one of {}", opts.join(", "))))
        }
    }

    /// Converts a config-file value.
    pub fn from_toml(&self, v: &toml::Value) -> Result<Value, CliError> {
        let k = self.key;
        let num = |v: &toml::Value| match v {
            toml::Value::Float(x) => finite(k, *x),
            toml::Value::Integer(i) => Ok(*i as f64),
            other => Err(bad(k, format!("expected a number, got {}", other.type_str()))),
        };
        match (self.kind, v) {
            (Kind::Float, v) => Ok(Value::Float(num(v)?)),
            (Kind::Int, toml::Value::Integer(i)) if *i >= 0 => Ok(Value::Int(*i as u64)),
            (Kind::Int, other) => Err(bad(k, format!("expected a non-negative integer, got {other}"))),
            (Kind::Bool, toml::Value::Boolean(b)) => Ok(Value::Bool(*b)),
            (Kind::Bool, other) => Err(bad(k, format!("expected a boolean, got {other}"))),
            (Kind::Choice(opts), toml::Value::String(s)) => self.check_choice(s, opts),
            (Kind::Choice(_), other) => Err(bad(k, format!("expected a string, got {other}"))),
            (Kind::List, toml::Value::Array(a)) => Ok(Value::List(a.iter().map(num).collect::<Result<_, _>>()?)),
            (Kind::List, other) => Err(bad(k, format!("expected an array of numbers, got {other}"))),
        }
    }
}

pub fn to_toml(v: &Value) -> toml::Value {
    match v {
        Value::Float(x) => toml::Value::Float(*x),
        Value::Int(i) => toml::Value::Integer(*i as i64),
        Value::Bool(b) => toml::Value::Boolean(*b),
        Value::Text(s) => toml::Value::String(s.clone()),
        Value::List(l) => toml::Value::Array(l.iter().map(|x| toml::Value::Float(*x)).collect()),
    }
}

/// Resolved parameters of one run, in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    values: Vec<(&'static str, Value)>,
}

impl Params {
    pub fn defaults(specs: &[ParamSpec]) -> Self {
        Params {
            values: specs.iter().map(|s| (s.key, s.default.clone())).collect(),
        }
    }

    pub fn set(&mut self, key: &str, v: Value) {
        let slot = self.values.iter_mut().find(|(k, _)| *k == key).expect("declared key");
        slot.1 = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = &(&'static str, Value)> {
        self.values.iter()
    }

    fn get(&self, key: &str) -> &Value {
        &self
            .values
            .iter()
            .find(|(k, _)| *k == key)
            .unwrap_or_else(|| panic!("undeclared parameter `{key}`"))
            .1
    }

    pub fn f(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Float(v) => *v,
            other => panic!("`{key}` is {other:?}, not a float"),
        }
    }

    pub fn u(&self, key: &str) -> u64 {
        match self.get(key) {
            Value::Int(v) => *v,
            other => panic!("`{key}` is {other:?}, not an integer"),
        }
    }

    pub fn usize(&self, key: &str) -> usize {
        self.u(key) as usize
    }

    pub fn b(&self, key: &str) -> bool {
        match self.get(key) {
            Value::Bool(v) => *v,
            other => panic!("`{key}` is {other:?}, not a bool"),
        }
    }

    pub fn s(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Text(v) => v,
            other => panic!("`{key}` is {other:?}, not text"),
        }
    }

    pub fn list(&self, key: &str) -> &[f64] {
        match self.get(key) {
            Value::List(v) => v,
            other => panic!("`{key}` is {other:?}, not a list"),
        }
    }
}

/// Applies one config-file section on top of `params`. Unknown keys are
/// rejected with the accepted ones listed.
pub fn apply_section(
    command: &str,
    specs: &[ParamSpec],
    section: &toml::Table,
    params: &mut Params,
) -> Result<(), CliError> {
    for (key, v) in section {
        let Some(spec) = specs.iter().find(|s| s.key == key) else {
            let accepted: Vec<&str> = specs.iter().map(|s| s.key).collect();
            let list = if accepted.is_empty() {
                "none".to_string()
            } else {
                accepted.join(", ")
            };
            return Err(CliError::Usage(format!(
                "unknown key `{key}` in [{command}]; accepted keys: {list}"
            )));
        };
        params.set(spec.key, spec.from_toml(v)?);
    }
    Ok(())
}
