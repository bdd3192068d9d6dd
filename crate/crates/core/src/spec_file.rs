//! Plain-text code description (`LRC1`).
//!
//! ```text
//! LRC1
//! q=4 p=2 m=2 irr=1,1
//! r=2 mu=2 w=0 l=3 t=3 strategy=FULL seed=
//! n=9 k=6
//! B=0,1,2
//! Y=0,1,2
//! E=
//! <k lines of n space-separated generator entries>
//! ```
//!
//! Elements are written as their decimal encodings. Parsing is strict so that
//! `serialize(parse(text)) == text`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::construction::{
    plan_params, plan_params_shared, CodeInstance, ConstructionError, Strategy,
};
use crate::gf::{make_field, Field};
use crate::linalg::Matrix;

pub const MAGIC: &str = "LRC1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecFileError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("inconsistent code file: {0}")]
    Invalid(#[from] ConstructionError),
}

fn join(xs: &[u32], sep: &str) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(sep)
}

pub fn serialize(instance: &CodeInstance) -> String {
    let spec = instance.field.spec();
    let p = &instance.params;
    let lay = &instance.layout;
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(
        out,
        "q={} p={} m={} irr={}",
        spec.q,
        spec.p,
        spec.m,
        join(&spec.irr, ",")
    );
    let _ = writeln!(
        out,
        "r={} mu={} w={} l={} t={} strategy={} seed={}",
        p.r,
        p.mu,
        p.w,
        p.l,
        p.t,
        p.strategy,
        instance
            .subspace
            .seed
            .map(|s| s.to_string())
            .unwrap_or_default()
    );
    let _ = writeln!(out, "n={} k={}", p.n, p.k);
    let _ = writeln!(out, "B={}", join(&lay.b, ","));
    let _ = writeln!(out, "Y={}", join(&lay.y, ","));
    let _ = writeln!(out, "E={}", join(&lay.e, ","));
    for row in instance.generator.row_iter() {
        let _ = writeln!(out, "{}", join(row, " "));
    }
    out
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Lines<'a> {
    fn take(&mut self) -> Result<(usize, &'a str), SpecFileError> {
        let i = self.next;
        self.next += 1;
        self.lines
            .get(i)
            .map(|l| (i + 1, *l))
            .ok_or(SpecFileError::Malformed {
                line: i + 1,
                msg: "unexpected end of file".into(),
            })
    }
}

fn malformed(line: usize, msg: impl Into<String>) -> SpecFileError {
    SpecFileError::Malformed {
        line,
        msg: msg.into(),
    }
}

/// Splits `k1=v1 k2=v2 ...` and checks the keys appear exactly as listed.
fn fields<'a>(line: usize, text: &'a str, keys: &[&str]) -> Result<Vec<&'a str>, SpecFileError> {
    let parts: Vec<&str> = text.split(' ').collect();
    if parts.len() != keys.len() {
        return Err(malformed(line, format!("expected fields {keys:?}")));
    }
    parts
        .iter()
        .zip(keys)
        .map(|(part, key)| {
            part.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| malformed(line, format!("expected {key}=")))
        })
        .collect()
}

fn number<T: std::str::FromStr + ToString>(line: usize, s: &str) -> Result<T, SpecFileError> {
    let v: T = s
        .parse()
        .map_err(|_| malformed(line, format!("not a number: {s:?}")))?;
    // reject leading zeros, '+' and the like so that output matches input
    if v.to_string() != s {
        return Err(malformed(line, format!("non-canonical number: {s:?}")));
    }
    Ok(v)
}

fn list(line: usize, s: &str, sep: char) -> Result<Vec<u32>, SpecFileError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(sep).map(|x| number(line, x)).collect()
}

pub fn parse(text: &str) -> Result<CodeInstance, SpecFileError> {
    let Some(body) = text.strip_suffix('\n') else {
        return Err(malformed(
            text.lines().count().max(1),
            "missing final newline",
        ));
    };
    let mut lines = Lines {
        lines: body.split('\n').collect(),
        next: 0,
    };

    let (ln, magic) = lines.take()?;
    if magic != MAGIC {
        return Err(malformed(ln, format!("expected {MAGIC}")));
    }

    let (ln, text) = lines.take()?;
    let f = fields(ln, text, &["q", "p", "m", "irr"])?;
    let q: u64 = number(ln, f[0])?;
    let p: u32 = number(ln, f[1])?;
    let m: u32 = number(ln, f[2])?;
    let irr = list(ln, f[3], ',')?;
    let spec = make_field(q).map_err(|e| malformed(ln, e.to_string()))?;
    if spec.p != p || spec.m != m || spec.irr != irr {
        return Err(malformed(
            ln,
            "field description differs from the canonical field",
        ));
    }

    let (ln, text) = lines.take()?;
    let f = fields(ln, text, &["r", "mu", "w", "l", "t", "strategy", "seed"])?;
    let r: usize = number(ln, f[0])?;
    let mu: usize = number(ln, f[1])?;
    let w: usize = number(ln, f[2])?;
    let l: usize = number(ln, f[3])?;
    let t: usize = number(ln, f[4])?;
    let strategy: Strategy = f[5]
        .parse()
        .map_err(|e: ConstructionError| malformed(ln, e.to_string()))?;
    if strategy.as_str() != f[5] {
        return Err(malformed(ln, "strategy must be upper case"));
    }
    let seed: Option<u64> = if f[6].is_empty() {
        None
    } else {
        Some(number(ln, f[6])?)
    };
    if seed.is_some() != (strategy == Strategy::Random) {
        return Err(malformed(
            ln,
            "seed is required for RANDOM and only for RANDOM",
        ));
    }
    let shared = r + mu - 1 + w > q as usize;
    let params = if shared {
        plan_params_shared(q, r, mu, w, l, Some(t), strategy)
    } else {
        plan_params(q, r, mu, w, l, Some(t), strategy)
    }
    .map_err(|e| malformed(ln, e.to_string()))?;

    let (ln, text) = lines.take()?;
    let f = fields(ln, text, &["n", "k"])?;
    let n: usize = number(ln, f[0])?;
    let k: usize = number(ln, f[1])?;
    if n != params.n || k != params.k {
        return Err(malformed(
            ln,
            format!(
                "n={n} k={k} differ from the parameters (n={} k={})",
                params.n, params.k
            ),
        ));
    }

    let mut sets = Vec::new();
    for key in ["B", "Y", "E"] {
        let (ln, text) = lines.take()?;
        let f = fields(ln, text, &[key])?;
        let xs = list(ln, f[0], ',')?;
        if xs.iter().any(|&x| x >= spec.q) {
            return Err(malformed(ln, "element encoding out of range"));
        }
        sets.push(xs);
    }

    let mut data = Vec::with_capacity(n * k);
    for _ in 0..k {
        let (ln, text) = lines.take()?;
        let row = list(ln, text, ' ')?;
        if row.len() != n {
            return Err(malformed(
                ln,
                format!("expected {n} entries, got {}", row.len()),
            ));
        }
        if row.iter().any(|&x| x >= spec.q) {
            return Err(malformed(ln, "element encoding out of range"));
        }
        data.extend(row);
    }
    if lines.next < lines.lines.len() {
        return Err(malformed(lines.next + 1, "trailing content"));
    }

    let field = Field::from_spec(spec);
    let mut layout = crate::construction::build_layout(&params);
    let [b, y, e]: [Vec<u32>; 3] = sets.try_into().expect("three sets");
    layout.b = b;
    layout.y = y;
    layout.e = e;
    let generator = Matrix::from_vec(&field, k, n, data);
    Ok(CodeInstance::from_parts(
        field, params, layout, generator, seed,
    )?)
}
