//! Constant semantics shared by every interpreter and by constant folding.

use super::value::Value;
use crate::types::{Const, Type};

/// Standard normal CDF, `0.5 * (1 + erf(x / sqrt 2))`, with `erf` from libm.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2))
}

/// Applies a float operator or intrinsic to literal operands.
pub fn float_op(c: &Const, args: &[f64]) -> Option<f64> {
    Some(match (c, args) {
        (Const::Add, [a, b]) => a + b,
        (Const::Sub, [a, b]) => a - b,
        (Const::Mul, [a, b]) => a * b,
        (Const::Div, [a, b]) => a / b,
        (Const::Max, [a, b]) => a.max(*b),
        (Const::Log, [a]) => a.ln(),
        (Const::Sqrt, [a]) => a.sqrt(),
        (Const::Exp, [a]) => a.exp(),
        (Const::NormCdf, [a]) => norm_cdf(*a),
        _ => return None,
    })
}

/// Applies an index operator to literal operands.
pub fn fin_op(c: &Const, a: u64, b: u64) -> Option<u64> {
    match c {
        Const::Add => a.checked_add(b),
        Const::Mul => a.checked_mul(b),
        _ => None,
    }
}

fn fin_bound(ty: &Type) -> u64 {
    match ty {
        Type::Fin(n) => *n,
        other => panic!("internal error: fin result at type {other}"),
    }
}

/// Applies constant `c` whose result has type `ty`.
///
/// Panics on ill-typed operands; well-typed programs never reach that.
pub fn apply_const(c: &Const, args: &[Value], ty: &Type) -> Value {
    match (c, args) {
        (Const::Nat(n), []) => match ty {
            Type::Flt => Value::Flt(*n as f64),
            _ => Value::Fin(*n, fin_bound(ty)),
        },
        (Const::Flt(x), []) => Value::Flt(x.0),
        (Const::Add | Const::Mul, [Value::Fin(a, _), Value::Fin(b, _)]) => {
            let v = fin_op(c, *a, *b).expect("index arithmetic overflow");
            Value::Fin(v, fin_bound(ty))
        }
        (Const::App, [Value::Fun(f), x]) => f.call(x),
        (Const::Get, [Value::Arr(xs), Value::Fin(i, _)]) => xs[*i as usize].clone(),
        (Const::Pair, [a, b]) => Value::pair(a.clone(), b.clone()),
        (Const::Fst, [Value::Pair(a, _)]) => (**a).clone(),
        (Const::Snd, [Value::Pair(_, b)]) => (**b).clone(),
        (Const::Sum, [Value::Arr(xs)]) => Value::Flt(xs.iter().fold(0.0, |acc, x| acc + x.as_flt())),
        _ => {
            let floats: Option<Vec<f64>> = args
                .iter()
                .map(|v| match v {
                    Value::Flt(x) => Some(*x),
                    _ => None,
                })
                .collect();
            match floats.and_then(|xs| float_op(c, &xs)) {
                Some(x) => Value::Flt(x),
                None => panic!("internal error: `{}` applied to {args:?}", c.name()),
            }
        }
    }
}
