//! C ABI for the compiler.
//!
//! Every function returns an [`ArrcStatus`] and writes results through out
//! pointers. On failure the message is available from [`arrc_last_error`] on
//! the calling thread. Strings handed out are owned by the caller and must be
//! released with [`arrc_string_free`]. A compilation handle is not thread
//! safe: use it from one thread at a time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use arrc::ainf::{stats, write_tsv};
use arrc::pipeline::{compile_source, Compilation, Level, Options};
use arrc::syntax::SizeEnv;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrcStatus {
    Ok = 0,
    /// A required pointer was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The source program failed to parse or type-check.
    Diagnostic = 3,
    /// A size list, argument list, stage or level was malformed.
    InvalidArgument = 4,
    /// The compiler panicked. This is a bug.
    Internal = 5,
}

/// Pass switches, all enabled by [`arrc_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArrcOptions {
    pub fold: bool,
    pub identities: bool,
    pub licm: bool,
    pub cse: bool,
    pub dce: bool,
}

impl From<ArrcOptions> for Options {
    fn from(o: ArrcOptions) -> Self {
        Options { fold: o.fold, identities: o.identities, licm: o.licm, cse: o.cse, dce: o.dce }
    }
}

/// Evaluation level for [`arrc_compilation_run`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrcLevel {
    Surface = 0,
    Norm = 1,
    Ainf = 2,
    Opt = 3,
}

fn level_from(raw: i32) -> Option<Level> {
    Some(match raw {
        x if x == ArrcLevel::Surface as i32 => Level::Surface,
        x if x == ArrcLevel::Norm as i32 => Level::Norm,
        x if x == ArrcLevel::Ainf as i32 => Level::Ainf,
        x if x == ArrcLevel::Opt as i32 => Level::Opt,
        _ => return None,
    })
}

/// Opaque result of [`arrc_compile`].
pub struct ArrcCompilation {
    inner: Compilation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<Vec<u8>>) {
    let mut bytes = message.into();
    bytes.retain(|b| *b != 0);
    let c = CString::new(bytes).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(ArrcStatus, String);

type Res<T> = Result<T, Fail>;

fn guard(f: impl FnOnce() -> Res<()>) -> ArrcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ArrcStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let what = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {what}"));
            ArrcStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(ArrcStatus::NullArgument, format!("`{what}` is null"))
}

fn invalid(message: String) -> Fail {
    Fail(ArrcStatus::InvalidArgument, message)
}

/// # Safety
/// `p` is null or a nul-terminated string.
unsafe fn opt_str<'a>(p: *const c_char, what: &str) -> Res<Option<&'a str>> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Some)
        .map_err(|_| Fail(ArrcStatus::InvalidUtf8, format!("`{what}` is not valid UTF-8")))
}

/// # Safety
/// As [`opt_str`].
unsafe fn req_str<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    opt_str(p, what)?.ok_or_else(|| null(what))
}

/// # Safety
/// `h` is null or a live handle from [`arrc_compile`].
unsafe fn handle<'a>(h: *const ArrcCompilation) -> Res<&'a Compilation> {
    h.as_ref().map(|c| &c.inner).ok_or_else(|| null("compilation"))
}

/// # Safety
/// `out` is null or writable.
unsafe fn put<T>(out: *mut T, v: T) -> Res<()> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(v);
    Ok(())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "")).expect("interior nul removed").into_raw()
}

fn parse_sizes(text: &str) -> Res<SizeEnv> {
    let mut sizes = SizeEnv::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item.split_once('=').ok_or_else(|| invalid(format!("size `{item}` is not NAME=NAT")))?;
        let n = value.trim().parse().map_err(|_| invalid(format!("`{value}` is not a natural number")))?;
        sizes.insert(name.trim().to_string(), n);
    }
    Ok(sizes)
}

fn parse_args(text: &str) -> Res<Vec<(String, String)>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_once('=')
                .map(|(x, v)| (x.trim().to_string(), v.to_string()))
                .ok_or_else(|| invalid(format!("argument `{l}` is not NAME=LITERAL")))
        })
        .collect()
}

fn stage_program<'a>(c: &'a Compilation, name: Option<&str>) -> Res<&'a arrc::ainf::Program> {
    match name {
        None => Ok(c.final_program()),
        Some(n) => c.stage(n).ok_or_else(|| invalid(format!("stage `{n}` did not run"))),
    }
}

/// Options with every pass enabled.
#[no_mangle]
pub extern "C" fn arrc_options_default() -> ArrcOptions {
    let o = Options::default();
    ArrcOptions { fold: o.fold, identities: o.identities, licm: o.licm, cse: o.cse, dce: o.dce }
}

/// Library version as a static string. Do not free.
#[no_mangle]
pub extern "C" fn arrc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn arrc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Compiles `source`.
///
/// `sizes` is a comma-separated `NAME=NAT` list or null. `entry` names the
/// definition to compile; null selects the last one. `options` may be null
/// for the defaults. On success `*out` receives a handle to release with
/// [`arrc_compilation_free`].
///
/// # Safety
/// String arguments are null or nul-terminated; `options` is null or valid;
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn arrc_compile(
    source: *const c_char,
    sizes: *const c_char,
    entry: *const c_char,
    options: *const ArrcOptions,
    out: *mut *mut ArrcCompilation,
) -> ArrcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let src = req_str(source, "source")?;
        let sizes = parse_sizes(opt_str(sizes, "sizes")?.unwrap_or(""))?;
        let entry = opt_str(entry, "entry")?;
        let opts = options.as_ref().map_or_else(Options::default, |o| (*o).into());
        let inner =
            compile_source(src, &sizes, entry, &opts).map_err(|d| Fail(ArrcStatus::Diagnostic, d.to_string()))?;
        out.write(Box::into_raw(Box::new(ArrcCompilation { inner })));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` is null or a handle from [`arrc_compile`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn arrc_compilation_free(h: *mut ArrcCompilation) {
    if !h.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(h))));
    }
}

/// The entry's name and result type, as `name : type`.
///
/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn arrc_compilation_signature(h: *const ArrcCompilation, out: *mut *mut c_char) -> ArrcStatus {
    guard(|| {
        let c = handle(h)?;
        put(out, to_c(format!("{} : {}", c.checked.entry, c.checked.result)))
    })
}

/// Listing of `stage` (`lower`, `canon`, `licm`, `cse`, `dce`, or `norm`
/// for the normal form); null selects the final stage.
///
/// # Safety
/// `h` is a live handle; `stage` is null or nul-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn arrc_compilation_listing(
    h: *const ArrcCompilation,
    stage: *const c_char,
    out: *mut *mut c_char,
) -> ArrcStatus {
    guard(|| {
        let c = handle(h)?;
        let name = opt_str(stage, "stage")?;
        let text = if name == Some("norm") { c.normal.to_string() } else { stage_program(c, name)?.to_string() };
        put(out, to_c(text))
    })
}

/// Final program as tab-separated records.
///
/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn arrc_compilation_tsv(h: *const ArrcCompilation, out: *mut *mut c_char) -> ArrcStatus {
    guard(|| {
        let c = handle(h)?;
        put(out, to_c(write_tsv(c.final_program())))
    })
}

/// One `stage=... bindings=...` line per stage that ran.
///
/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn arrc_compilation_stats(h: *const ArrcCompilation, out: *mut *mut c_char) -> ArrcStatus {
    guard(|| {
        let c = handle(h)?;
        put(out, to_c(c.stats_report()))
    })
}

/// Number of bindings at `stage` (null for the final stage).
///
/// # Safety
/// `h` is a live handle; `stage` is null or nul-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn arrc_compilation_binding_count(
    h: *const ArrcCompilation,
    stage: *const c_char,
    out: *mut usize,
) -> ArrcStatus {
    guard(|| {
        let c = handle(h)?;
        let p = stage_program(c, opt_str(stage, "stage")?)?;
        put(out, stats(p).bindings)
    })
}

/// Evaluates the entry at `level`, one of the `ArrcLevel` values. `args` holds one `NAME=LITERAL` per line
/// (null or empty when the entry has no parameters). The printed value goes
/// to `*out`.
///
/// # Safety
/// `h` is a live handle; `args` is null or nul-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn arrc_compilation_run(
    h: *const ArrcCompilation,
    level: i32,
    args: *const c_char,
    out: *mut *mut c_char,
) -> ArrcStatus {
    guard(|| {
        let c = handle(h)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let level = level_from(level).ok_or_else(|| invalid(format!("unknown level {level}")))?;
        if !c.checked.result.is_first_order() {
            return Err(invalid(format!("cannot print a value of type `{}`", c.checked.result)));
        }
        let given = parse_args(opt_str(args, "args")?.unwrap_or(""))?;
        let values = c.bind_args(&given).map_err(|d| invalid(d.message))?;
        put(out, to_c(c.run(level, &values).to_string()))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn arrc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
