//! Proof-script runner for the extension workbench. Scripts are plain text,
//! one command per line (# starts a comment):
//!
//! ```text
//! nilradical M1 7 delta=1
//! pattern m1delta
//! complement 1
//! build
//! pin a1
//! residual e1 x e1
//! solve
//! apply
//! residual x e1 e2
//! check
//! ```
//!
//! Every command echoes its resulting equation set so runs can be compared
//! against golden files.

use std::collections::BTreeMap;
use std::str::FromStr;

use leibniz_core::catalog::{self, FamilyId};
use leibniz_core::extension::{
    build_generic_extension, ExtensionPattern, GenericExtension, ResidualSystem,
};
use leibniz_core::scalar::{parse_scalar, Rational, Scalar};
use leibniz_core::Algebra;

pub struct ScriptOutcome {
    pub transcript: String,
}

struct State {
    nilradical: Option<Algebra>,
    pattern: Option<ExtensionPattern>,
    s: usize,
    ext: Option<GenericExtension>,
    system: ResidualSystem,
    pending: Vec<(String, Scalar)>,
}

fn parse_binding(text: &str) -> Result<(String, Rational), String> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| format!("expected k=v, got {text:?}"))?;
    let s = parse_scalar(v).map_err(|e| e.to_string())?;
    let r = s
        .as_rational()
        .ok_or_else(|| format!("parameter {k:?} must be rational"))?;
    Ok((k.to_string(), r.clone()))
}

pub fn run_script(text: &str) -> Result<ScriptOutcome, String> {
    let mut st = State {
        nilradical: None,
        pattern: None,
        s: 1,
        ext: None,
        system: ResidualSystem::default(),
        pending: Vec::new(),
    };
    let mut out = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push_str(&format!("> {line}\n"));
        let mut words = line.split_whitespace();
        let cmd = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        let fail = |msg: String| format!("line {}: {msg}", lineno + 1);
        match cmd {
            "nilradical" => {
                if rest.len() < 2 {
                    return Err(fail("usage: nilradical <family> <n> [k=v ...]".into()));
                }
                let id = FamilyId::from_str(rest[0]).map_err(|e| fail(e.to_string()))?;
                let n: usize = rest[1].parse().map_err(|_| fail("bad dimension".into()))?;
                let mut params = BTreeMap::new();
                for kv in &rest[2..] {
                    let (k, v) = parse_binding(kv).map_err(fail)?;
                    params.insert(k, v);
                }
                let a = catalog::make(id, n, &params).map_err(|e| fail(e.to_string()))?;
                out.push_str(&format!("nilradical {id} dim {}\n", a.dim()));
                st.nilradical = Some(a);
            }
            "pattern" => {
                let p = match rest.first().copied() {
                    Some("m1delta") => ExtensionPattern::M1Delta,
                    Some("m2lambda") => ExtensionPattern::M2Lambda,
                    Some("m31") => ExtensionPattern::M31,
                    Some("full") => ExtensionPattern::Full,
                    other => return Err(fail(format!("unknown pattern {other:?}"))),
                };
                st.pattern = Some(p);
            }
            "complement" => {
                st.s = rest
                    .first()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| fail("usage: complement <s>".into()))?;
            }
            "build" => {
                let n = st
                    .nilradical
                    .as_ref()
                    .ok_or_else(|| fail("no nilradical declared".into()))?;
                let p = st
                    .pattern
                    .ok_or_else(|| fail("no pattern declared".into()))?;
                let ext =
                    build_generic_extension(n, p, st.s).map_err(|e| fail(e.to_string()))?;
                out.push_str(&format!(
                    "extension built: dim {}, {} unknowns\n",
                    ext.table().dim(),
                    ext.vars().len()
                ));
                st.ext = Some(ext);
            }
            "pin" => {
                let ext = st.ext.as_mut().ok_or_else(|| fail("no extension built".into()))?;
                let var = rest.first().ok_or_else(|| fail("usage: pin <var>".into()))?;
                ext.pin_nonzero(var);
                out.push_str(&format!("pinned {var} != 0\n"));
            }
            "residual" => {
                let ext = st.ext.as_ref().ok_or_else(|| fail("no extension built".into()))?;
                if rest.len() != 3 {
                    return Err(fail("usage: residual <x> <y> <z>".into()));
                }
                let sys = ext
                    .residual_system(&[(rest[0], rest[1], rest[2])])
                    .map_err(|e| fail(e.to_string()))?;
                for eq in &sys.equations {
                    out.push_str(&format!("  {eq}\n"));
                }
                if sys.is_empty() {
                    out.push_str("  (no residual)\n");
                }
                st.system = sys;
            }
            "annihilator" => {
                let ext = st.ext.as_ref().ok_or_else(|| fail("no extension built".into()))?;
                let sys = ext.annihilator_constraints().map_err(|e| fail(e.to_string()))?;
                out.push_str(&format!("  {} structural constraints\n", sys.equations.len()));
                st.system = sys;
            }
            "solve" => {
                let ext = st.ext.as_ref().ok_or_else(|| fail("no extension built".into()))?;
                st.pending = ext.auto_solve_linear(&st.system);
                for (v, rhs) in &st.pending {
                    out.push_str(&format!("  {v} -> {rhs}\n"));
                }
                if st.pending.is_empty() {
                    out.push_str("  (nothing linear to solve)\n");
                }
            }
            "apply" => {
                let ext = st.ext.take().ok_or_else(|| fail("no extension built".into()))?;
                let next = ext
                    .substitute(&std::mem::take(&mut st.pending))
                    .map_err(|e| fail(e.to_string()))?;
                out.push_str(&format!("  {} bindings accumulated\n", next.bindings().len()));
                st.ext = Some(next);
            }
            "check" => {
                let ext = st.ext.as_ref().ok_or_else(|| fail("no extension built".into()))?;
                match ext.contradiction(&st.system) {
                    Some(c) => out.push_str(&format!("  CONTRADICTION: {c}\n")),
                    None => out.push_str("  no contradiction\n"),
                }
            }
            other => return Err(fail(format!("unknown command {other:?}"))),
        }
    }
    Ok(ScriptOutcome { transcript: out })
}
