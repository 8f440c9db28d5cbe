//! Parsing of `--arg` values.
//!
//! ```text
//! [name=]1,2.5,NaN        double vector
//! [name=]1:10             integer range (inclusive)
//! [name=]zeros:<mode>:n   write descriptor, mode = double | numeric | integer
//! [name=]path.dc64        vector file
//! ```

use std::path::Path;

use dotcall64::{ArgValue, CallArgument, TypedVector, VectorDescriptor};

use crate::CliError;

/// Parses one `--arg` value. Unnamed arguments are called `arg<k>`, with
/// `k` counting from 1.
pub fn parse_argument(text: &str, position: usize) -> Result<CallArgument, CliError> {
    let (name, body) = match text.split_once('=') {
        Some((n, b)) if is_identifier(n) => (n.to_owned(), b),
        _ => (format!("arg{}", position + 1), text),
    };
    let value = parse_value(body).map_err(|e| match e {
        CliError::Usage(m) => CliError::Usage(format!("argument {}: {m}", position + 1)),
        other => other,
    })?;
    Ok(CallArgument::named(name, value))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

pub fn parse_value(body: &str) -> Result<ArgValue, CliError> {
    let body = body.trim();
    if let Some(rest) = body.strip_prefix("zeros:") {
        return parse_descriptor(rest).map(ArgValue::from);
    }
    if body.ends_with(".dc64") {
        let path = Path::new(body);
        if !path.is_file() {
            return Err(CliError::Usage(format!("no such vector file: {body}")));
        }
        return Ok(dotcall64::vector::read_dc64_file(path)?.into());
    }
    if let Some((a, b)) = body.split_once(':') {
        return parse_range(a, b).map(ArgValue::from);
    }
    parse_doubles(body).map(ArgValue::from)
}

fn parse_descriptor(rest: &str) -> Result<VectorDescriptor, CliError> {
    let (mode, len) = rest
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("expected zeros:<mode>:<length>, got zeros:{rest}")))?;
    let len: u64 = len
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid descriptor length `{len}`")))?;
    let d = match mode.trim() {
        "double" | "numeric" => VectorDescriptor::numeric(len)?,
        "integer" | "int" => VectorDescriptor::integer(len)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown descriptor mode `{other}` (expected double, numeric or integer)"
            )))
        }
    };
    Ok(d)
}

fn parse_int(s: &str) -> Result<i32, CliError> {
    s.trim()
        .parse::<i32>()
        .ok()
        .filter(|&v| v != dotcall64::INT32_NA)
        .ok_or_else(|| CliError::Usage(format!("invalid integer `{s}`")))
}

fn parse_range(a: &str, b: &str) -> Result<TypedVector, CliError> {
    let (a, b) = (parse_int(a)?, parse_int(b)?);
    let values: Vec<i32> = if a <= b {
        (a..=b).collect()
    } else {
        (b..=a).rev().collect()
    };
    Ok(TypedVector::from_i32(values))
}

fn parse_doubles(body: &str) -> Result<TypedVector, CliError> {
    if body.is_empty() {
        return Ok(TypedVector::from_f64(Vec::new()));
    }
    body.split(',')
        .map(|s| {
            let s = s.trim();
            if s.eq_ignore_ascii_case("na") {
                return Ok(f64::NAN);
            }
            s.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("invalid number `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(TypedVector::from_f64)
}
