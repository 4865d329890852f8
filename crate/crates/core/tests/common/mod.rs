//! Test-side oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use arrc::ainf::{ainf_eval, fission_violations, validate, EnvEntry, Prim, Program, VPar};
use arrc::eval::{eval_with_params, gen_program, values_agree, Value, REL_TOL};
use arrc::lower::to_ainf;
use arrc::nbe::{is_normal, Normalizer};
use arrc::opt::{canon_env, cse, cse_duplicates, dce, licm, licm_violations};
use arrc::pipeline::{compile_source, optimize, Level, Options};
use arrc::syntax::SizeEnv;
use arrc::types::{alpha_eq, check as recheck, forget, verify, Ctx};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn program_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs").join(name)
}

pub fn program_source(name: &str) -> String {
    std::fs::read_to_string(program_path(name)).expect("corpus file")
}

pub fn sizes(pairs: &[(&str, u64)]) -> SizeEnv {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// A partial bijection between the names of two programs.
#[derive(Default)]
struct Bij {
    fwd: HashMap<String, String>,
    bwd: HashMap<String, String>,
}

impl Bij {
    fn link(&mut self, x: &str, y: &str) -> bool {
        match (self.fwd.get(x), self.bwd.get(y)) {
            (None, None) => {
                self.fwd.insert(x.to_string(), y.to_string());
                self.bwd.insert(y.to_string(), x.to_string());
                true
            }
            (Some(y2), Some(x2)) => y2 == y && x2 == x,
            _ => false,
        }
    }

    fn vpar(&mut self, u: &VPar, v: &VPar) -> bool {
        match (u, v) {
            (VPar::Var(x, s), VPar::Var(y, t)) | (VPar::Idx(x, s), VPar::Idx(y, t)) => s == t && self.link(x, y),
            _ => false,
        }
    }

    fn entry(&mut self, e: &EnvEntry, f: &EnvEntry) -> bool {
        match (e, f) {
            (EnvEntry::For(i, n), EnvEntry::For(j, m)) => n == m && self.link(i, j),
            (EnvEntry::Fun(i, s), EnvEntry::Fun(j, t)) => s == t && self.link(i, j),
            (EnvEntry::IfTrue(x), EnvEntry::IfTrue(y)) | (EnvEntry::IfFalse(x), EnvEntry::IfFalse(y)) => {
                self.link(x, y)
            }
            _ => false,
        }
    }

    fn prim(&mut self, p: &Prim, q: &Prim) -> bool {
        match (p, q) {
            (Prim::Const(c, xs), Prim::Const(d, ys)) => {
                c == d && xs.len() == ys.len() && xs.iter().zip(ys).all(|(u, v)| self.vpar(u, v))
            }
            (Prim::IdxRef(i), Prim::IdxRef(j)) => self.link(i, j),
            (Prim::For(i, n, u), Prim::For(j, m, v)) => n == m && self.link(i, j) && self.vpar(u, v),
            (Prim::Fun(i, s, u), Prim::Fun(j, t, v)) => s == t && self.link(i, j) && self.vpar(u, v),
            (Prim::Ite(c, u, w), Prim::Ite(d, v, z)) => self.vpar(c, d) && self.vpar(u, v) && self.vpar(w, z),
            _ => false,
        }
    }
}

/// Structural equality of two programs up to a consistent bijective
/// renaming of variables and indices. Parameters must match by name.
pub fn programs_alpha_eq(a: &Program, b: &Program) -> Result<(), String> {
    if a.params != b.params {
        return Err("parameters differ".into());
    }
    if a.bindings.len() != b.bindings.len() {
        return Err(format!("{} bindings vs {}", a.bindings.len(), b.bindings.len()));
    }
    let mut bij = Bij::default();
    for (x, _) in &a.params {
        bij.link(x, x);
    }
    for (k, (p, q)) in a.bindings.iter().zip(&b.bindings).enumerate() {
        let ok = p.ty == q.ty
            && p.env.len() == q.env.len()
            && p.env.iter().zip(&q.env).all(|(e, f)| bij.entry(e, f))
            && bij.prim(&p.prim, &q.prim)
            && bij.link(&p.var, &q.var);
        if !ok {
            return Err(format!("binding {k} differs: `{p}` vs `{q}`"));
        }
    }
    if !bij.vpar(&a.result, &b.result) {
        return Err(format!("results differ: `{}` vs `{}`", a.result, b.result));
    }
    Ok(())
}

/// Histogram `[arity0, arity1, arity2+]` counted independently of the
/// library's stats.
pub fn env_histogram(p: &Program) -> [usize; 3] {
    let mut h = [0; 3];
    for b in &p.bindings {
        let k = b.env.iter().filter(|e| matches!(e, EnvEntry::For(..) | EnvEntry::Fun(..))).count();
        h[k.min(2)] += 1;
    }
    h
}

// ---- brute-force linear algebra ----------------------------------------

pub type Mat = Vec<Vec<f64>>;

pub fn vec_value(v: &[f64]) -> Value {
    Value::arr(v.iter().map(|x| Value::Flt(*x)).collect())
}

pub fn mat_value(m: &Mat) -> Value {
    Value::arr(m.iter().map(|r| vec_value(r)).collect())
}

pub fn vadd(v: &[f64], w: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 0..v.len() {
        out.push(v[k] + w[k]);
    }
    out
}

pub fn vmul(v: &[f64], w: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 0..v.len() {
        out.push(v[k] * w[k]);
    }
    out
}

pub fn madd(a: &Mat, b: &Mat) -> Mat {
    (0..a.len()).map(|r| vadd(&a[r], &b[r])).collect()
}

pub fn mmul(a: &Mat, b: &Mat) -> Mat {
    (0..a.len()).map(|r| vmul(&a[r], &b[r])).collect()
}

pub fn outer(a: &Mat, b: &Mat) -> Vec<Vec<Mat>> {
    let mut out = Vec::new();
    for r in a {
        let mut row = Vec::new();
        for x in r {
            row.push(b.iter().map(|br| br.iter().map(|y| x * y).collect()).collect());
        }
        out.push(row);
    }
    out
}

pub fn trace(a: &Mat) -> f64 {
    (0..a.len()).map(|k| a[k][k]).sum()
}

pub fn transpose(a: &Mat) -> Mat {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|c| a.iter().map(|r| r[c]).collect()).collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (n, m, k) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![0.0; k]; n];
    for r in 0..n {
        for c in 0..k {
            let mut s = 0.0;
            for j in 0..m {
                s += a[r][j] * b[j][c];
            }
            out[r][c] = s;
        }
    }
    out
}

pub fn matvec(a: &Mat, v: &[f64]) -> Vec<f64> {
    a.iter().map(|r| r.iter().zip(v).fold(0.0, |s, (x, y)| s + x * y)).collect()
}

pub fn convolve(x: &[f64], y: &[f64], m: usize) -> Vec<f64> {
    (0..m).map(|i| (0..x.len()).fold(0.0, |s, j| s + x[j] * y[j + i])).collect()
}

pub fn dense(b: &[f64], w: &Mat, x: &[f64]) -> Vec<f64> {
    (0..b.len()).map(|i| f64::max(0.0, matvec(w, x)[i] + b[i])).collect()
}

// ---- linear algebra corpus at every level -----------------------------

pub fn vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-8i32..=8) as f64 / 2.0 + rng.gen::<f64>()).collect()
}

pub fn matrix(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Mat {
    (0..n).map(|_| vector(rng, m)).collect()
}

/// Runs `entry` at all levels and compares with `want`.
pub fn check(entry: &str, dims: [u64; 4], args: &[Value], want: &Value) -> Result<(), String> {
    let sizes = sizes(&[("n", dims[0]), ("m", dims[1]), ("k", dims[2]), ("l", dims[3])]);
    let c = compile_source(&program_source("linalg.arr"), &sizes, Some(entry), &Options::default())
        .map_err(|d| format!("{entry} at {dims:?}: {d}"))?;
    for level in Level::ALL {
        let got = c.run(level, args);
        if !values_agree(&got, want, REL_TOL) {
            return Err(format!("{entry} at {dims:?}, level {level}: {got} vs {want}"));
        }
    }
    Ok(())
}

/// Checks all nine operations at the given sizes with random inputs.
pub fn check_all(rng: &mut ChaCha8Rng, dims: [u64; 4]) -> Result<(), String> {
    let [n, m, k, l] = dims.map(|d| d as usize);
    let (v, w) = (vector(rng, n), vector(rng, n));
    let (a, b) = (matrix(rng, n, m), matrix(rng, n, m));
    check("vadd", dims, &[vec_value(&v), vec_value(&w)], &vec_value(&vadd(&v, &w)))?;
    check("vmul", dims, &[vec_value(&v), vec_value(&w)], &vec_value(&vmul(&v, &w)))?;
    check("madd", dims, &[mat_value(&a), mat_value(&b)], &mat_value(&madd(&a, &b)))?;
    check("mmul", dims, &[mat_value(&a), mat_value(&b)], &mat_value(&mmul(&a, &b)))?;
    let c = matrix(rng, k, l);
    let outer = outer(&a, &c);
    let outer_v = Value::arr(outer.iter().map(|r| Value::arr(r.iter().map(mat_value).collect())).collect());
    check("outer", dims, &[mat_value(&a), mat_value(&c)], &outer_v)?;
    let sq = matrix(rng, n, n);
    check("trace", dims, &[mat_value(&sq)], &Value::Flt(trace(&sq)))?;
    check("transpose", dims, &[mat_value(&a)], &mat_value(&transpose(&a)))?;
    let bk = matrix(rng, m, k);
    check("matmul", dims, &[mat_value(&a), mat_value(&bk)], &mat_value(&matmul(&a, &bk)))?;
    let x = vector(rng, m);
    check("matvec", dims, &[mat_value(&a), vec_value(&x)], &vec_value(&matvec(&a, &x)))?;
    Ok(())
}

// ---- per-program stage audit -------------------------------------------

/// Wall time of the phases whose termination is checked.
#[derive(Clone, Copy, Debug, Default)]
pub struct Timings {
    pub normalize: Duration,
    pub lower: Duration,
    pub cse: Duration,
}

/// Runs a generated program through every stage and checks types,
/// validation, agreement with the reference interpreter, idempotence of
/// the passes, the post-pass scans and maximal fission.
pub fn audit(seed: u64, depth: u32, opts: &Options) -> Result<Timings, String> {
    let g = gen_program(seed, depth);
    let ctx = |what: &str| format!("seed {seed}: {what}\nbody: {}", g.body);
    let expected = eval_with_params(&g.params, &g.args, &g.body);
    let agree = |v: &Value, what: &str| -> Result<(), String> {
        if values_agree(v, &expected, REL_TOL) {
            Ok(())
        } else {
            Err(ctx(&format!("{what} gives {v}, reference {expected}")))
        }
    };
    let mut t = Timings::default();

    let nbe = Normalizer::new(opts.fold, opts.identities);
    let start = Instant::now();
    let normal = nbe.normalize_entry(&g.params, &g.body);
    t.normalize = start.elapsed();
    if normal.ty != g.body.ty {
        return Err(ctx("normalization changed the type"));
    }
    verify(&normal, &g.params).map_err(|e| ctx(&format!("normal form does not type-check: {e:?}")))?;
    let scope = g.params.iter().fold(Ctx::new(), |c, (x, t)| c.extended(x, t.clone()));
    match recheck(&scope, &SizeEnv::new(), &forget(&normal), Some(&normal.ty)) {
        Ok(again) if again == normal => {}
        Ok(again) => return Err(ctx(&format!("re-checking changes annotations:\n{normal}\n{again}"))),
        Err(e) => return Err(ctx(&format!("normal form does not re-check: {e}"))),
    }
    if !is_normal(&normal) {
        return Err(ctx(&format!("not normal: {normal}")));
    }
    let again = Normalizer::new(opts.fold, opts.identities).normalize_entry(&g.params, &normal);
    if !alpha_eq(&again, &normal) {
        return Err(ctx(&format!("normalize is not idempotent:\n{normal}\n{again}")));
    }
    agree(&eval_with_params(&g.params, &g.args, &normal), "normal form")?;

    let named: HashMap<String, Value> = g.params.iter().map(|(x, _)| x.clone()).zip(g.args.iter().cloned()).collect();
    let start = Instant::now();
    let lowered = to_ainf("gen", &g.params, &normal);
    t.lower = start.elapsed();
    let (stages, _) = optimize(lowered, opts);
    let mut prev = usize::MAX;
    for s in &stages {
        let p = &s.program;
        let here = |what: &str| ctx(&format!("stage {}: {what}\n{p}", s.name));
        validate(p).map_err(|e| here(&format!("invalid: {e:?}")))?;
        if *p.result_type() != g.body.ty {
            return Err(here("result type changed"));
        }
        if let Some(v) = fission_violations(p).first() {
            return Err(here(&format!("fission scan: {v}")));
        }
        if p.bindings.len() > prev {
            return Err(here("binding count grew"));
        }
        prev = p.bindings.len();
        agree(&ainf_eval(p, &named), &format!("stage {}", s.name))?;
        let idem: Option<Program> = match s.name {
            "canon" => Some(canon_env(p)),
            "licm" => Some(licm(p)),
            "cse" => {
                let start = Instant::now();
                let q = cse(p);
                t.cse = start.elapsed();
                Some(q)
            }
            "dce" => Some(dce(p)),
            _ => None,
        };
        if let Some(q) = idem {
            if q != *p {
                return Err(here(&format!("pass is not idempotent:\n{q}")));
            }
        }
        if s.name == "licm" {
            if let Some((x, i)) = licm_violations(p).first() {
                return Err(here(&format!("index {i} of {x} survives LICM")));
            }
        }
        if s.name == "cse" {
            if let Some((x, y)) = cse_duplicates(p).first() {
                return Err(here(&format!("{x} and {y} survive CSE")));
            }
        }
    }
    Ok(t)
}
