use thiserror::Error;

use super::{Const, Type};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SigError {
    #[error("`{name}` expects {expected} argument(s), found {found}")]
    Arity { name: &'static str, expected: usize, found: usize },
    #[error("no signature of `{name}` accepts argument types ({args})")]
    NoInstance { name: &'static str, args: String },
}

fn fin_add(n: u64, m: u64) -> u64 {
    if n == 0 || m == 0 {
        0
    } else {
        n + m - 1
    }
}

fn fin_mul(n: u64, m: u64) -> u64 {
    if n == 0 || m == 0 {
        0
    } else {
        (n - 1) * (m - 1) + 1
    }
}

/// Result type of applying `c` to arguments of the given types.
///
/// A natural literal `n` synthesizes its smallest type, `fin (n+1)`; checking
/// it against a larger bound is the checker's job.
pub fn const_sig(c: &Const, args: &[Type]) -> Result<Type, SigError> {
    if args.len() != c.arity() {
        return Err(SigError::Arity { name: c.name(), expected: c.arity(), found: args.len() });
    }
    let no_instance = || SigError::NoInstance {
        name: c.name(),
        args: args.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", "),
    };
    use Type::*;
    let ty = match (c, args) {
        (Const::Nat(n), []) => Fin(n + 1),
        (Const::Flt(_), []) => Flt,
        (Const::Add, [Fin(n), Fin(m)]) => Fin(fin_add(*n, *m)),
        (Const::Mul, [Fin(n), Fin(m)]) => Fin(fin_mul(*n, *m)),
        (Const::Add | Const::Mul | Const::Sub | Const::Div | Const::Max, [Flt, Flt]) => Flt,
        (Const::Log | Const::Sqrt | Const::Exp | Const::NormCdf, [Flt]) => Flt,
        (Const::App, [Arrow(a, b), t]) if **a == *t => (**b).clone(),
        (Const::Get, [Array(n, t), Fin(m)]) if n == m => (**t).clone(),
        (Const::Pair, [a, b]) => Type::prod(a.clone(), b.clone()),
        (Const::Fst, [Prod(a, _)]) => (**a).clone(),
        (Const::Snd, [Prod(_, b)]) => (**b).clone(),
        (Const::Sum, [Array(_, t)]) if **t == Flt => Flt,
        _ => return Err(no_instance()),
    };
    Ok(ty)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fin_addition_widens_bound() {
        assert_eq!(const_sig(&Const::Add, &[Type::Fin(4), Type::Fin(3)]), Ok(Type::Fin(6)));
    }

    #[test]
    fn fin_multiplication_bound() {
        // 10 : fin 11, i : fin 3  =>  largest product 20
        assert_eq!(const_sig(&Const::Mul, &[Type::Fin(11), Type::Fin(3)]), Ok(Type::Fin(21)));
    }

    #[test]
    fn get_on_sized_array() {
        let arr = Type::array(5, Type::Flt);
        assert_eq!(const_sig(&Const::Get, &[arr.clone(), Type::Fin(5)]), Ok(Type::Flt));
        assert!(const_sig(&Const::Get, &[arr, Type::Fin(4)]).is_err());
    }

    #[test]
    fn projection_of_non_pair_has_no_instance() {
        let err = const_sig(&Const::Fst, &[Type::Flt]).unwrap_err();
        assert!(matches!(err, SigError::NoInstance { name: "fst", .. }));
    }

    #[test]
    fn arity_is_checked() {
        let err = const_sig(&Const::Add, &[Type::Flt]).unwrap_err();
        assert!(matches!(err, SigError::Arity { expected: 2, found: 1, .. }));
    }

    #[test]
    fn sub_and_div_are_float_only() {
        assert!(const_sig(&Const::Sub, &[Type::Fin(3), Type::Fin(3)]).is_err());
        assert!(const_sig(&Const::Div, &[Type::Fin(3), Type::Fin(3)]).is_err());
        assert_eq!(const_sig(&Const::Div, &[Type::Flt, Type::Flt]), Ok(Type::Flt));
    }

    #[test]
    fn sum_requires_float_elements() {
        assert_eq!(const_sig(&Const::Sum, &[Type::array(3, Type::Flt)]), Ok(Type::Flt));
        assert!(const_sig(&Const::Sum, &[Type::array(3, Type::Fin(2))]).is_err());
    }
}
