use std::fmt;
use std::hash::{Hash, Hasher};
use std::rc::Rc;

use crate::types::Type;

/// A runtime function value.
#[derive(Clone)]
pub struct FunV(pub Rc<dyn Fn(&Value) -> Value>);

impl FunV {
    pub fn new(f: impl Fn(&Value) -> Value + 'static) -> Self {
        FunV(Rc::new(f))
    }

    pub fn call(&self, v: &Value) -> Value {
        (self.0)(v)
    }

    fn addr(&self) -> *const () {
        Rc::as_ptr(&self.0) as *const ()
    }
}

/// Runtime values. Equality and hashing are structural, bitwise on floats,
/// and by identity on functions.
#[derive(Clone)]
pub enum Value {
    /// A natural below its bound.
    Fin(u64, u64),
    Flt(f64),
    Pair(Rc<Value>, Rc<Value>),
    Fun(FunV),
    Arr(Rc<Vec<Value>>),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Rc::new(a), Rc::new(b))
    }

    pub fn arr(items: Vec<Value>) -> Value {
        Value::Arr(Rc::new(items))
    }

    pub fn as_fin(&self) -> u64 {
        match self {
            Value::Fin(v, _) => *v,
            other => panic!("expected a fin value, found {other:?}"),
        }
    }

    pub fn as_flt(&self) -> f64 {
        match self {
            Value::Flt(x) => *x,
            other => panic!("expected a float value, found {other:?}"),
        }
    }

    /// True if the value has the shape of `ty`: array lengths, fin bounds
    /// and pair structure all match.
    pub fn conforms(&self, ty: &Type) -> bool {
        match (self, ty) {
            (Value::Fin(v, b), Type::Fin(n)) => b == n && v < n,
            (Value::Flt(_), Type::Flt) => true,
            (Value::Pair(a, b), Type::Prod(s, t)) => a.conforms(s) && b.conforms(t),
            (Value::Fun(_), Type::Arrow(..)) => true,
            (Value::Arr(xs), Type::Array(n, t)) => xs.len() as u64 == *n && xs.iter().all(|x| x.conforms(t)),
            _ => false,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Fin(a, n), Value::Fin(b, m)) => a == b && n == m,
            (Value::Flt(x), Value::Flt(y)) => x.to_bits() == y.to_bits(),
            (Value::Pair(a, b), Value::Pair(c, d)) => a == c && b == d,
            (Value::Fun(f), Value::Fun(g)) => f.addr() == g.addr(),
            (Value::Arr(xs), Value::Arr(ys)) => xs == ys,
            _ => false,
        }
    }
}

impl Eq for Value {}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Value::Fin(a, n) => {
                a.hash(state);
                n.hash(state);
            }
            Value::Flt(x) => x.to_bits().hash(state),
            Value::Pair(a, b) => {
                a.hash(state);
                b.hash(state);
            }
            Value::Fun(f) => f.addr().hash(state),
            Value::Arr(xs) => xs.hash(state),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Fin(v, n) => write!(f, "{v}:fin {n}"),
            Value::Flt(x) => write!(f, "{x:?}"),
            Value::Pair(a, b) => write!(f, "({a:?}, {b:?})"),
            Value::Fun(_) => write!(f, "<fun>"),
            Value::Arr(xs) => f.debug_list().entries(xs.iter()).finish(),
        }
    }
}

/// Relative tolerance used when comparing float results across stages.
pub const REL_TOL: f64 = 1e-12;

fn floats_agree(x: f64, y: f64, rel: f64) -> bool {
    if x.is_nan() || y.is_nan() {
        return x.is_nan() && y.is_nan();
    }
    if x == y {
        // also equates +0 and -0
        return true;
    }
    if x.is_infinite() || y.is_infinite() {
        return false;
    }
    (x - y).abs() <= rel * x.abs().max(y.abs())
}

/// Compares values with fin parts exact and floats within `rel` relative
/// error. NaN agrees with NaN. Functions never agree.
pub fn values_agree(a: &Value, b: &Value, rel: f64) -> bool {
    match (a, b) {
        (Value::Fin(x, n), Value::Fin(y, m)) => x == y && n == m,
        (Value::Flt(x), Value::Flt(y)) => floats_agree(*x, *y, rel),
        (Value::Pair(a1, b1), Value::Pair(a2, b2)) => values_agree(a1, a2, rel) && values_agree(b1, b2, rel),
        (Value::Arr(xs), Value::Arr(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| values_agree(x, y, rel))
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agreement_rules() {
        assert!(values_agree(&Value::Flt(f64::NAN), &Value::Flt(f64::NAN), REL_TOL));
        assert!(values_agree(&Value::Flt(0.0), &Value::Flt(-0.0), REL_TOL));
        assert!(values_agree(&Value::Flt(1.0), &Value::Flt(1.0 + 1e-13), REL_TOL));
        assert!(!values_agree(&Value::Flt(1.0), &Value::Flt(1.0 + 1e-9), REL_TOL));
        assert!(!values_agree(&Value::Fin(1, 3), &Value::Fin(1, 4), REL_TOL));
    }

    #[test]
    fn conformance() {
        let v = Value::arr(vec![Value::Fin(0, 2), Value::Fin(1, 2)]);
        assert!(v.conforms(&Type::array(2, Type::Fin(2))));
        assert!(!v.conforms(&Type::array(3, Type::Fin(2))));
        assert!(!Value::Fin(2, 2).conforms(&Type::Fin(2)));
    }
}
