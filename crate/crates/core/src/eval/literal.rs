//! Value literals: `1.5`, `3`, `(a, b)`, `[v0, v1, ...]`.

use std::fmt;

use thiserror::Error;

use super::value::Value;
use crate::types::Type;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct LiteralError {
    pub message: String,
}

fn fail<T>(message: impl Into<String>) -> Result<T, LiteralError> {
    Err(LiteralError { message: message.into() })
}

/// Float text used for printed values: plain decimal in the usual range,
/// exponent notation for very large or very small magnitudes.
pub fn fmt_flt(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:?}")
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Fin(v, _) => write!(f, "{v}"),
            Value::Flt(x) => f.write_str(&fmt_flt(*x)),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Fun(_) => write!(f, "<fun>"),
            Value::Arr(xs) => {
                write!(f, "[")?;
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

struct Reader<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), LiteralError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => fail(format!("expected `{}`, found `{}` at offset {}", c as char, d as char, self.pos)),
            None => fail(format!("expected `{}`, found end of input", c as char)),
        }
    }

    fn number(&mut self) -> Result<&str, LiteralError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            if c.is_ascii_alphanumeric() || matches!(c, b'.' | b'+' | b'-') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return fail(format!("expected a number at offset {start}"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii"))
    }

    fn value(&mut self, ty: &Type) -> Result<Value, LiteralError> {
        match ty {
            Type::Flt => {
                let text = self.number()?;
                match text.parse::<f64>() {
                    Ok(x) => Ok(Value::Flt(x)),
                    Err(_) => fail(format!("`{text}` is not a float")),
                }
            }
            Type::Fin(n) => {
                let text = self.number()?;
                match text.parse::<u64>() {
                    Ok(v) if v < *n => Ok(Value::Fin(v, *n)),
                    Ok(v) => fail(format!("{v} is out of bounds for `fin {n}`")),
                    Err(_) => fail(format!("`{text}` is not a natural number")),
                }
            }
            Type::Prod(a, b) => {
                self.expect(b'(')?;
                let x = self.value(a)?;
                self.expect(b',')?;
                let y = self.value(b)?;
                self.expect(b')')?;
                Ok(Value::pair(x, y))
            }
            Type::Array(n, t) => {
                self.expect(b'[')?;
                let mut items = Vec::new();
                if self.peek() != Some(b']') {
                    loop {
                        items.push(self.value(t)?);
                        if self.peek() == Some(b',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(b']')?;
                if items.len() as u64 != *n {
                    return fail(format!("expected an array of length {n}, found {} element(s)", items.len()));
                }
                Ok(Value::arr(items))
            }
            Type::Arrow(..) => fail(format!("values of type `{ty}` cannot be written as literals")),
        }
    }
}

/// Parses a literal of type `ty`; array lengths must match exactly.
pub fn parse_value(text: &str, ty: &Type) -> Result<Value, LiteralError> {
    let mut r = Reader { s: text.as_bytes(), pos: 0 };
    let v = r.value(ty)?;
    if let Some(c) = r.peek() {
        return fail(format!("unexpected `{}` after value", c as char));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing() {
        let v = Value::arr(vec![
            Value::arr(vec![Value::Flt(19.0), Value::Flt(22.0)]),
            Value::arr(vec![Value::Flt(43.0), Value::Flt(50.0)]),
        ]);
        assert_eq!(v.to_string(), "[[19, 22], [43, 50]]");
        assert_eq!(Value::Flt(1e300).to_string(), "1e300");
        assert_eq!(Value::Flt(0.1).to_string(), "0.1");
        assert_eq!(Value::pair(Value::Fin(2, 3), Value::Flt(-1.5)).to_string(), "(2, -1.5)");
    }

    #[test]
    fn parse_and_print_roundtrip() {
        let ty = Type::array(2, Type::prod(Type::Flt, Type::Fin(4)));
        let v = parse_value("[(1.5, 3), (-2e-9, 0)]", &ty).unwrap();
        assert_eq!(parse_value(&v.to_string(), &ty).unwrap(), v);
    }

    #[test]
    fn shape_errors() {
        let e = parse_value("[1, 2]", &Type::array(3, Type::Flt)).unwrap_err();
        assert!(e.message.contains("length 3"));
        assert!(parse_value("4", &Type::Fin(4)).is_err());
        assert!(parse_value("1.0 2.0", &Type::Flt).is_err());
    }
}
