//! Golden listings for the example corpus and the pass examples.

mod common;

use std::collections::HashMap;

use arrc::ainf::{ainf_eval, parse_ainf, stats, validate, EnvEntry, Stats};
use arrc::eval::Value;
use arrc::opt::{cse_with_renaming, dce, licm, licm_violations};
use arrc::pipeline::{compile_source, Compilation, Level, Options};
use common::{env_histogram, program_source, programs_alpha_eq, sizes};

const RAW: Options = Options { fold: true, identities: true, licm: false, cse: false, dce: false };

fn compile(file: &str, sz: &[(&str, u64)], opts: &Options) -> Compilation {
    compile_source(&program_source(file), &sizes(sz), None, opts).expect("corpus program compiles")
}

/// Dense layer listing with indices named i and j, at n=2, m=3.
const DENSE_REFERENCE: &str = "\
dense(b: 2 => flt, W: 2 => 3 => flt, x: 3 => flt): 2 => flt :=
let for i:2, (x0 : flt := 0.000000)
let for i:2, for j:3, (x1 : 3 => flt := W[i])
let for i:2, for j:3, (x2 : flt := x1[j])
let for i:2, for j:3, (x3 : flt := x[j])
let for i:2, for j:3, (x4 : flt := x2 * x3)
let for i:2, (x5 : 3 => flt := for j:3. x4)
let for i:2, (x6 : flt := sum x5)
let for i:2, (x7 : flt := b[i])
let for i:2, (x8 : flt := x6 + x7)
let for i:2, (x9 : flt := max x0 x8)
let (x10 : 2 => flt := for i:2. x9)
x10
";

/// Convolution listing with indices named i and j, at n=2, m=3 (p=4).
const CONV_REFERENCE: &str = "\
conv(x: 2 => flt, y: 4 => flt): 3 => flt :=
let for i:3, for j:2, (x0 : flt := x[j])
let for i:3, for j:2, (x1 : fin 4 := j + i)
let for i:3, for j:2, (x2 : flt := y[x1])
let for i:3, for j:2, (x3 : flt := x0 * x2)
let for i:3, (x4 : 2 => flt := for j:2. x3)
let for i:3, (x5 : flt := sum x4)
let (x6 : 3 => flt := for i:3. x5)
x6
";

#[test]
fn dense_lowering_matches_the_reference_listing() {
    let c = compile("dense.arr", &[], &RAW);
    let p = c.final_program();
    programs_alpha_eq(p, &parse_ainf(DENSE_REFERENCE).unwrap()).unwrap();
    assert_eq!(env_histogram(p), [1, 6, 4]);
    assert_eq!(stats(p), Stats { bindings: 11, arity0: 1, arity1: 6, arity2plus: 4 });
}

#[test]
fn conv_lowering_matches_the_reference_listing() {
    let c = compile("conv.arr", &[], &RAW);
    let p = c.final_program();
    programs_alpha_eq(p, &parse_ainf(CONV_REFERENCE).unwrap()).unwrap();
    assert_eq!(env_histogram(p), [1, 2, 4]);
    assert!(p.to_string().contains("(x1 : fin 4 := i2 + i1)"));
}

#[test]
fn conv_at_other_sizes() {
    let c = compile("conv.arr", &[("n", 3), ("m", 2)], &Options::default());
    let x = common::vec_value(&[1.0, 2.0, 3.0]);
    let y = common::vec_value(&[1.0, 0.0, 0.0, 0.0]);
    let want = common::convolve(&[1.0, 2.0, 3.0], &[1.0, 0.0, 0.0, 0.0], 2);
    assert_eq!(want, [1.0, 0.0]);
    for level in Level::ALL {
        assert_eq!(c.run(level, &[x.clone(), y.clone()]), common::vec_value(&want), "{level}");
    }
}

#[test]
fn dense_unit_example() {
    let c = compile("dense.arr", &[("n", 1), ("m", 1)], &Options::default());
    let args = [common::vec_value(&[0.0]), common::mat_value(&vec![vec![2.0]]), common::vec_value(&[3.0])];
    for level in Level::ALL {
        assert_eq!(c.run(level, &args), common::vec_value(&[6.0]), "{level}");
    }
}

#[test]
fn licm_hoists_the_dense_zero() {
    let c = compile("dense.arr", &[], &Options { cse: false, dce: false, ..Options::default() });
    let p = c.final_program();
    assert_eq!(p.bindings[0].to_string(), "let (x0 : flt := 0.000000)");
    assert!(licm_violations(p).is_empty());
}

#[test]
fn black_scholes_sizes() {
    let full = compile("blackscholes.arr", &[("n", 1)], &Options::default());
    let no_cse = compile("blackscholes.arr", &[("n", 1)], &Options { cse: false, ..Options::default() });
    let (a, b) = (full.final_program().bindings.len(), no_cse.final_program().bindings.len());
    assert!(a <= 24, "{a} bindings");
    assert!(b as f64 >= 1.7 * a as f64, "{b} vs {a}");
    assert_eq!(full.final_program().bindings[0].to_string(), "let (x0 : flt := 1.500000)");
}

#[test]
fn black_scholes_levels_agree() {
    let c = compile("blackscholes.arr", &[("n", 3)], &Options::default());
    let arr = common::vec_value(&[0.5, 1.0, 2.0]);
    let reference = c.run(Level::Surface, std::slice::from_ref(&arr));
    for level in Level::ALL {
        assert!(arrc::eval::values_agree(&c.run(level, std::slice::from_ref(&arr)), &reference, arrc::eval::REL_TOL));
    }
}

#[test]
fn tabulate_everywhere() {
    let c = compile("tabulate.arr", &[], &Options::default());
    for level in Level::ALL {
        assert_eq!(c.run(level, &[]).to_string(), "[0, 10, 20]");
    }
}

#[test]
fn cse_chain() {
    let src = "\
chain(one: flt): flt :=
let (x : flt := 2.500000)
let (y : flt := 2.500000)
let (z : flt := x + y)
let (q : flt := y + x)
let (t : flt := z + one)
let (r : flt := q + one)
r
";
    let p = parse_ainf(src).unwrap();
    let (q, ren) = cse_with_renaming(&p);
    assert_eq!(q.bindings.len(), 3);
    assert_eq!(q.bindings[1].to_string(), "let (z : flt := x + x)");
    let ren: Vec<(&str, &str)> = ren.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    assert_eq!(ren, [("y", "x"), ("q", "z"), ("r", "t")]);
    assert_eq!(q.result.name(), "t");
    let args: HashMap<String, Value> = [("one".to_string(), Value::Flt(1.0))].into_iter().collect();
    assert_eq!(ainf_eval(&q, &args), ainf_eval(&p, &args));
}

#[test]
fn cse_across_loop_boundaries_after_licm() {
    let src = "\
t(x: flt): ((3 => flt) × flt) :=
let for i1:3, (one : flt := 1.000000)
let for i1:3, (y : flt := x + one)
let for i1:3, (two : flt := 2.000000)
let for i1:3, (y2 : flt := two * y)
let (f : 3 => flt := for i1:3. y2)
let (one' : flt := 1.000000)
let (z : flt := x + one')
let (r : ((3 => flt) × flt) := (f, z))
r
";
    let p = licm(&parse_ainf(src).unwrap());
    let (q, ren) = cse_with_renaming(&p);
    assert!(ren.contains(&("z".to_string(), "y".to_string())), "{ren:?}");
    assert_eq!(q.bindings.len(), 6);
    assert_eq!(validate(&q), Ok(()));
}

#[test]
fn licm_drops_the_unused_index() {
    let src = "\
t(xs: 3 => flt): 3 => flt :=
let for i1:3, (ys : flt := 1.000000)
let for i1:3, (x0 : flt := xs[i1])
let for i1:3, (x1 : flt := x0 * ys)
let (zs : 3 => flt := for i1:3. x1)
zs
";
    let p = parse_ainf(src).unwrap();
    let q = licm(&p);
    assert_eq!(q.bindings[0].to_string(), "let (ys : flt := 1.000000)");
    assert_eq!(q.bindings[1].env, vec![EnvEntry::For("i1".into(), 3)]);
    assert!(licm_violations(&q).is_empty());
    assert_eq!(validate(&q), Ok(()));
}

#[test]
fn dce_keeps_only_the_first_components() {
    let src = "\
t(xs: 3 => flt): 3 => flt :=
let for i:3, (a : flt := xs[i])
let for i:3, (ys : flt := sqrt a)
let for i:3, (zs : flt := exp a)
let for i:3, (x : (flt × flt) := (ys, zs))
let for i:3, (y : flt := fst x)
let (z : 3 => flt := for i:3. y)
z
";
    let p = parse_ainf(src).unwrap();
    let q = dce(&p);
    assert_eq!(validate(&q), Ok(()));
    let vars: Vec<&str> = q.bindings.iter().map(|b| b.var.as_str()).collect();
    assert_eq!(vars, ["a", "ys", "z"]);
    assert_eq!(q.bindings[2].to_string(), "let (z : 3 => flt := for i:3. ys)");
    let xs = common::vec_value(&[1.0, 4.0, 9.0]);
    let args: HashMap<String, Value> = [("xs".to_string(), xs)].into_iter().collect();
    assert_eq!(ainf_eval(&q, &args).to_string(), "[1, 2, 3]");
}

#[test]
fn pair_example_end_to_end() {
    let c = compile("pairs.arr", &[], &Options::default());
    let text = c.final_program().to_string();
    assert!(!text.contains("exp"), "{text}");
    let xs = common::vec_value(&[1.0, 4.0, 9.0]);
    assert_eq!(c.run(Level::Opt, &[xs]).to_string(), "[1, 2, 3]");
}
