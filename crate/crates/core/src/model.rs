//! Catalog files and their instantiation into concrete homogeneous models.
//!
//! A catalog is a plain-text collection of `[entry id]` blocks.  Each block
//! presents a Lie algebra by structure constants over a basis `e1..ek` for
//! the isotropy part and `u1..u4` for the complement (entries without
//! isotropy use `e1..e4` for the complement), an invariant metric on the
//! complement, and the results expected of the geometry pipeline.
//! Coefficients are expressions in declared parameters.
//!
//! Instantiating an entry at a rational parameter point checks the declared
//! parameter constraints, evaluates every coefficient, and then validates
//! the result: the Jacobi identity (with a witness triple on failure),
//! nondegeneracy of the metric, invariance of the complement under the
//! isotropy part, and invariance of the metric under the derived isotropy
//! action.

use crate::expr::{
    lex, parse_constraint, parse_expr, parse_expr_list, Constraint, EvalError, Expr, Tok,
};
pub use crate::expr::ParamEnv;
use crate::linalg::{signature, Matrix};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("line {line}, column {col}: {message}")]
    SyntaxError {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}: duplicate entry id `{id}`")]
    DuplicateId { line: usize, id: String },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstantiateError {
    #[error("entry `{0}` is a stub: it records expected results but no structure constants")]
    StubEntry(String),
    #[error("parameter `{0}` is not declared by this entry")]
    UnknownParameter(String),
    #[error("parameter constraint `{0}` is violated")]
    ConstraintViolated(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("Jacobi identity fails on ({0}, {1}, {2}); residual {3}")]
    JacobiFailed(String, String, String, String),
    #[error("the metric is degenerate")]
    MetricDegenerate,
    #[error("bracket [{0}, {1}] leaves the complement: component {2}")]
    NotReductive(String, String, String),
    #[error("the metric is not invariant under the isotropy action of {0}")]
    MetricNotIsotropyInvariant(String),
}

/// One structure-constant line: `[left, right] = rhs`, with the right-hand
/// side stored as one optional coefficient per basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub left: usize,
    pub right: usize,
    pub rhs: Vec<Option<Expr>>,
}

/// An expected parallel span: `none`, or a list of coefficient vectors over
/// the complement basis, optionally guarded by a parameter constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanRow {
    pub vectors: Option<Vec<Vec<Option<Expr>>>>,
    pub when: Option<Constraint>,
}

/// Expected results recorded with an entry.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Expected {
    pub segre: Option<String>,
    pub conformally_flat: Option<bool>,
    pub ricci_parallel: Option<bool>,
    pub line: Vec<SpanRow>,
    pub plane: Vec<SpanRow>,
}

impl Expected {
    fn row_for<'a>(
        rows: &'a [SpanRow],
        env: &ParamEnv,
    ) -> Result<Option<&'a SpanRow>, EvalError> {
        for row in rows {
            match &row.when {
                None => return Ok(Some(row)),
                Some(c) if c.holds(env)? => return Ok(Some(row)),
                Some(_) => {}
            }
        }
        Ok(None)
    }

    /// First line expectation whose guard holds at `env`.
    pub fn line_for(&self, env: &ParamEnv) -> Result<Option<&SpanRow>, EvalError> {
        Self::row_for(&self.line, env)
    }

    /// First plane expectation whose guard holds at `env`.
    pub fn plane_for(&self, env: &ParamEnv) -> Result<Option<&SpanRow>, EvalError> {
        Self::row_for(&self.plane, env)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub dim_h: usize,
    pub stub: bool,
    pub params: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub comments: Vec<String>,
    pub brackets: Vec<Bracket>,
    /// Metric components on the complement, zero-based index pairs.
    pub metric: Vec<(usize, usize, Expr)>,
    pub expected: Expected,
}

impl CatalogEntry {
    /// Basis names of the full algebra, isotropy part first.
    pub fn basis_names(&self) -> Vec<String> {
        basis_names(self.dim_h)
    }

    /// Basis names of the complement.
    pub fn complement_names(&self) -> Vec<String> {
        complement_names(self.dim_h)
    }
}

fn basis_names(dim_h: usize) -> Vec<String> {
    if dim_h == 0 {
        (1..=4).map(|k| format!("e{k}")).collect()
    } else {
        (1..=dim_h)
            .map(|k| format!("e{k}"))
            .chain((1..=4).map(|k| format!("u{k}")))
            .collect()
    }
}

fn complement_names(dim_h: usize) -> Vec<String> {
    if dim_h == 0 {
        (1..=4).map(|k| format!("e{k}")).collect()
    } else {
        (1..=4).map(|k| format!("u{k}")).collect()
    }
}

/// A catalog entry evaluated at a parameter point and validated.
#[derive(Debug, Clone)]
pub struct HomogeneousModel {
    pub id: String,
    pub dim_h: usize,
    pub env: ParamEnv,
    /// `table[i][j]` is the coefficient vector of `[b_i, b_j]` over the full
    /// basis, isotropy part first.
    table: Vec<Vec<Vec<Scalar>>>,
    /// Metric on the complement.
    pub metric: Matrix,
    /// Derived action of each isotropy basis vector on the complement.
    pub isotropy: Vec<Matrix>,
}

impl HomogeneousModel {
    pub fn algebra_dim(&self) -> usize {
        self.dim_h + 4
    }

    /// Bracket of two full-basis vectors by index.
    pub fn bracket(&self, i: usize, j: usize) -> &[Scalar] {
        &self.table[i][j]
    }

    /// Bracket of complement basis vectors `u_i, u_j` (indices `0..4`),
    /// split into its complement part and its isotropy part.
    pub fn bracket_m(&self, i: usize, j: usize) -> (Vec<Scalar>, Vec<Scalar>) {
        let v = &self.table[self.dim_h + i][self.dim_h + j];
        (v[self.dim_h..].to_vec(), v[..self.dim_h].to_vec())
    }

    /// Action on the complement of an isotropy element given by coefficients.
    pub fn isotropy_action(&self, h: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(4, 4);
        for (c, m) in h.iter().zip(&self.isotropy) {
            if !c.is_zero() {
                out = out.add(&m.scale(c));
            }
        }
        out
    }

    /// Signature `(plus, minus)` of the metric.
    pub fn signature(&self) -> (usize, usize) {
        signature(&self.metric)
    }
}

fn render_combo(v: &[Scalar], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (c, n) in v.iter().zip(names) {
        if !c.is_zero() {
            parts.push(format!("({c})*{n}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Evaluates a stored coefficient vector at a parameter point.
pub fn eval_combo(combo: &[Option<Expr>], env: &ParamEnv) -> Result<Vec<Scalar>, EvalError> {
    combo
        .iter()
        .map(|c| match c {
            Some(e) => e.eval(env),
            None => Ok(Scalar::zero()),
        })
        .collect()
}

/// Evaluates `entry` at the parameter point `env` and validates the result.
pub fn instantiate(
    entry: &CatalogEntry,
    env: &ParamEnv,
) -> Result<HomogeneousModel, InstantiateError> {
    if entry.stub {
        return Err(InstantiateError::StubEntry(entry.id.clone()));
    }
    for p in env.keys() {
        if !entry.params.contains(p) {
            return Err(InstantiateError::UnknownParameter(p.clone()));
        }
    }
    for p in &entry.params {
        if !env.contains_key(p) {
            return Err(EvalError::UnboundParameter(p.clone()).into());
        }
    }
    for c in &entry.constraints {
        if !c.holds(env)? {
            return Err(InstantiateError::ConstraintViolated(c.to_string()));
        }
    }

    let dim_h = entry.dim_h;
    let n = dim_h + 4;
    let names = entry.basis_names();
    let zero_vec = vec![Scalar::zero(); n];
    let mut table = vec![vec![zero_vec; n]; n];
    for b in &entry.brackets {
        let v = eval_combo(&b.rhs, env)?;
        table[b.right][b.left] = v.iter().map(|s| -s).collect();
        table[b.left][b.right] = v;
    }

    let mut g = Matrix::zeros(4, 4);
    for (i, j, e) in &entry.metric {
        let v = e.eval(env)?;
        g.set(*i, *j, v.clone());
        g.set(*j, *i, v);
    }

    // All structure constants and metric components must lie in a single
    // quadratic extension of the rationals; everything downstream relies
    // on that.
    let mut radicand: Option<u64> = None;
    let all_scalars = table
        .iter()
        .flatten()
        .flatten()
        .chain((0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| g.get(i, j)));
    for s in all_scalars {
        if let Some(d) = s.radicand() {
            match radicand {
                None => radicand = Some(d),
                Some(r) if r == d => {}
                Some(_) => {
                    return Err(EvalError::Scalar(
                        crate::scalar::ScalarError::MixedRadicands,
                    )
                    .into())
                }
            }
        }
    }

    // [v, b_k] for a coefficient vector v.
    let ad = |table: &Vec<Vec<Vec<Scalar>>>, v: &[Scalar], k: usize| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n];
        for (a, c) in v.iter().enumerate() {
            if !c.is_zero() {
                for t in 0..n {
                    out[t] += &(c * &table[a][k][t]);
                }
            }
        }
        out
    };

    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let mut r = ad(&table, &table[i][j], k);
                for (t, c) in ad(&table, &table[j][k], i).into_iter().enumerate() {
                    r[t] += &c;
                }
                for (t, c) in ad(&table, &table[k][i], j).into_iter().enumerate() {
                    r[t] += &c;
                }
                if r.iter().any(|c| !c.is_zero()) {
                    return Err(InstantiateError::JacobiFailed(
                        names[i].clone(),
                        names[j].clone(),
                        names[k].clone(),
                        render_combo(&r, &names),
                    ));
                }
            }
        }
    }

    if g.det().is_zero() {
        return Err(InstantiateError::MetricDegenerate);
    }

    for a in 0..dim_h {
        for i in 0..4 {
            let v = &table[a][dim_h + i];
            for (t, c) in v.iter().enumerate().take(dim_h) {
                if !c.is_zero() {
                    return Err(InstantiateError::NotReductive(
                        names[a].clone(),
                        names[dim_h + i].clone(),
                        render_combo(v, &names),
                    ));
                }
                let _ = t;
            }
        }
    }

    let mut isotropy = Vec::with_capacity(dim_h);
    for a in 0..dim_h {
        let h = Matrix::from_fn(4, 4, |k, i| table[a][dim_h + i][dim_h + k].clone());
        let gh = g.matmul(&h);
        if !h.transpose().matmul(&g).add(&gh).is_zero() {
            return Err(InstantiateError::MetricNotIsotropyInvariant(
                names[a].clone(),
            ));
        }
        isotropy.push(h);
    }

    Ok(HomogeneousModel {
        id: entry.id.clone(),
        dim_h,
        env: env.clone(),
        table,
        metric: g,
        isotropy,
    })
}

// ---------------------------------------------------------------------------
// Linear extraction of bracket right-hand sides and span vectors.

struct Lin {
    coeffs: Vec<Option<Expr>>,
    scalar: Option<Expr>,
}

impl Lin {
    fn is_scalar(&self) -> bool {
        self.coeffs.iter().all(Option::is_none)
    }
}

fn neg_expr(e: Expr) -> Expr {
    match e {
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn mul_expr(s: &Expr, c: Expr) -> Expr {
    if *s == Expr::int(1) {
        c
    } else if c == Expr::int(1) {
        s.clone()
    } else {
        Expr::Mul(Box::new(s.clone()), Box::new(c))
    }
}

fn add_opt(a: Option<Expr>, b: Option<Expr>) -> Option<Expr> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(Expr::Add(Box::new(a), Box::new(b))),
    }
}

fn mentions(e: &Expr, syms: &BTreeMap<String, usize>) -> bool {
    e.params().iter().any(|p| syms.contains_key(p))
}

fn lin(e: &Expr, syms: &BTreeMap<String, usize>, n: usize) -> Result<Lin, String> {
    let scalar_of = |e: &Expr| Lin {
        coeffs: vec![None; n],
        scalar: Some(e.clone()),
    };
    match e {
        Expr::Param(p) => {
            if let Some(&i) = syms.get(p) {
                let mut coeffs = vec![None; n];
                coeffs[i] = Some(Expr::int(1));
                Ok(Lin {
                    coeffs,
                    scalar: None,
                })
            } else {
                Ok(scalar_of(e))
            }
        }
        Expr::Int(_) => Ok(scalar_of(e)),
        Expr::Sqrt(inner) | Expr::Pow(inner, _) => {
            if mentions(inner, syms) {
                Err("basis symbols may only appear linearly".into())
            } else {
                Ok(scalar_of(e))
            }
        }
        Expr::Neg(x) => {
            let l = lin(x, syms, n)?;
            Ok(Lin {
                coeffs: l.coeffs.into_iter().map(|c| c.map(neg_expr)).collect(),
                scalar: l.scalar.map(neg_expr),
            })
        }
        Expr::Add(a, b) => {
            let la = lin(a, syms, n)?;
            let lb = lin(b, syms, n)?;
            Ok(Lin {
                coeffs: la
                    .coeffs
                    .into_iter()
                    .zip(lb.coeffs)
                    .map(|(x, y)| add_opt(x, y))
                    .collect(),
                scalar: add_opt(la.scalar, lb.scalar),
            })
        }
        Expr::Sub(a, b) => {
            let la = lin(a, syms, n)?;
            let lb = lin(b, syms, n)?;
            Ok(Lin {
                coeffs: la
                    .coeffs
                    .into_iter()
                    .zip(lb.coeffs)
                    .map(|(x, y)| add_opt(x, y.map(neg_expr)))
                    .collect(),
                scalar: add_opt(la.scalar, lb.scalar.map(neg_expr)),
            })
        }
        Expr::Mul(a, b) => {
            let la = lin(a, syms, n)?;
            let lb = lin(b, syms, n)?;
            let (s, l) = if la.is_scalar() {
                (la, lb)
            } else if lb.is_scalar() {
                (lb, la)
            } else {
                return Err("basis symbols may only appear linearly".into());
            };
            let se = s.scalar.expect("scalar side of a product");
            Ok(Lin {
                coeffs: l
                    .coeffs
                    .into_iter()
                    .map(|c| c.map(|c| mul_expr(&se, c)))
                    .collect(),
                scalar: l.scalar.map(|c| mul_expr(&se, c)),
            })
        }
        Expr::Div(a, b) => {
            let la = lin(a, syms, n)?;
            let lb = lin(b, syms, n)?;
            if !lb.is_scalar() {
                return Err("cannot divide by a basis symbol".into());
            }
            let se = lb.scalar.expect("divisor expression");
            Ok(Lin {
                coeffs: la
                    .coeffs
                    .into_iter()
                    .map(|c| c.map(|c| Expr::Div(Box::new(c), Box::new(se.clone()))))
                    .collect(),
                scalar: la
                    .scalar
                    .map(|c| Expr::Div(Box::new(c), Box::new(se.clone()))),
            })
        }
    }
}

/// Extracts per-symbol coefficients from a linear combination, rejecting any
/// constant term that is not literally zero.
fn extract_combo(
    e: &Expr,
    syms: &BTreeMap<String, usize>,
    n: usize,
) -> Result<Vec<Option<Expr>>, String> {
    let l = lin(e, syms, n)?;
    if let Some(s) = &l.scalar {
        let free = s.params().is_empty();
        let zero = free
            && s
                .eval(&ParamEnv::new())
                .map(|v| v.is_zero())
                .unwrap_or(false);
        if !zero {
            return Err(format!("constant term `{s}` in a basis combination"));
        }
    }
    Ok(l.coeffs)
}

// ---------------------------------------------------------------------------
// Parsing.

struct Pending {
    id: String,
    dim_h: usize,
    dim_h_line: Option<usize>,
    stub: bool,
    params: Vec<String>,
    constraints: Vec<Constraint>,
    comments: Vec<String>,
    raw_brackets: Vec<(String, String, Expr, usize)>,
    raw_metric: Vec<(usize, usize, Expr, usize)>,
    expected_segre: Option<String>,
    expected_cf: Option<bool>,
    expected_rp: Option<bool>,
    raw_line: Vec<(Option<Vec<Expr>>, Option<Constraint>, usize)>,
    raw_plane: Vec<(Option<Vec<Expr>>, Option<Constraint>, usize)>,
}

fn syntax<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, CatalogError> {
    Err(CatalogError::SyntaxError {
        line,
        col,
        message: message.into(),
    })
}

fn ident_only(s: &str) -> bool {
    matches!(lex(s).as_deref(), Ok([(Tok::Ident(_), _)]))
}

/// Parses catalog text into entries.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut entries = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut cur: Option<Pending> = None;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        // Column of byte `off` within the suffix `rest` of the trimmed line.
        let col = |rest: &str, off: usize| indent + (line.len() - rest.len()) + off + 1;

        if let Some(rest) = line.strip_prefix("[entry") {
            if let Some(p) = cur.take() {
                entries.push(finalize(p)?);
            }
            let Some(body) = rest.strip_suffix(']') else {
                return syntax(lineno, col(rest, rest.len()), "expected closing `]`");
            };
            let id = body.trim().to_string();
            if id.is_empty() {
                return syntax(lineno, col(body, 0), "empty entry id");
            }
            if !seen.insert(id.clone()) {
                return Err(CatalogError::DuplicateId { line: lineno, id });
            }
            cur = Some(Pending {
                id,
                dim_h: 0,
                dim_h_line: None,
                stub: false,
                params: Vec::new(),
                constraints: Vec::new(),
                comments: Vec::new(),
                raw_brackets: Vec::new(),
                raw_metric: Vec::new(),
                expected_segre: None,
                expected_cf: None,
                expected_rp: None,
                raw_line: Vec::new(),
                raw_plane: Vec::new(),
            });
            continue;
        }

        let Some(p) = cur.as_mut() else {
            return syntax(lineno, indent + 1, "content before any `[entry ...]` heading");
        };

        if line.starts_with("g(") {
            let rest = &line[2..];
            let Some(close) = rest.find(')') else {
                return syntax(lineno, col(rest, 0), "expected `)` after metric indices");
            };
            let idx: Vec<&str> = rest[..close].split(',').map(str::trim).collect();
            let [si, sj] = idx.as_slice() else {
                return syntax(lineno, col(rest, 0), "expected two metric indices");
            };
            let (Ok(i1), Ok(j1)) = (si.parse::<usize>(), sj.parse::<usize>()) else {
                return syntax(lineno, col(rest, 0), "metric indices must be integers");
            };
            if !(1..=4).contains(&i1) || !(1..=4).contains(&j1) {
                return syntax(lineno, col(rest, 0), "metric indices must lie in 1..4");
            }
            let after = rest[close + 1..].trim_start();
            let Some(value) = after.strip_prefix('=') else {
                return syntax(lineno, col(after, 0), "expected `=` after metric indices");
            };
            let value = value.trim();
            let e = parse_expr(value)
                .map_err(|e| CatalogError::SyntaxError {
                    line: lineno,
                    col: col(value, e.offset),
                    message: e.message,
                })?;
            p.raw_metric.push((i1 - 1, j1 - 1, e, lineno));
            continue;
        }

        if let Some(rest) = line.strip_prefix('[') {
            let Some(close) = rest.find(']') else {
                return syntax(lineno, col(rest, 0), "expected `]` after bracket arguments");
            };
            let args: Vec<&str> = rest[..close].split(',').map(str::trim).collect();
            let [a, b] = args.as_slice() else {
                return syntax(lineno, col(rest, 0), "expected two bracket arguments");
            };
            let after = rest[close + 1..].trim_start();
            let Some(value) = after.strip_prefix('=') else {
                return syntax(lineno, col(after, 0), "expected `=` after bracket arguments");
            };
            let value = value.trim();
            let e = parse_expr(value)
                .map_err(|e| CatalogError::SyntaxError {
                    line: lineno,
                    col: col(value, e.offset),
                    message: e.message,
                })?;
            p.raw_brackets
                .push((a.to_string(), b.to_string(), e, lineno));
            continue;
        }

        if let Some((key, value)) = split_directive(line) {
            let value = value.trim();
            match key {
                "dim_m" => {
                    if value != "4" {
                        return syntax(lineno, col(value, 0), "dim_m must be 4");
                    }
                }
                "dim_h" => {
                    let Ok(v) = value.parse::<usize>() else {
                        return syntax(lineno, col(value, 0), "dim_h must be an integer");
                    };
                    if v > 6 {
                        return syntax(lineno, col(value, 0), "dim_h must lie in 0..6");
                    }
                    p.dim_h = v;
                    p.dim_h_line = Some(lineno);
                }
                "params" => {
                    for name in value.split(',') {
                        let name = name.trim();
                        if !ident_only(name) {
                            return syntax(
                                lineno,
                                col(value, 0),
                                format!("invalid parameter name `{name}`"),
                            );
                        }
                        if p.params.iter().any(|q| q == name) {
                            return syntax(
                                lineno,
                                col(value, 0),
                                format!("parameter `{name}` declared twice"),
                            );
                        }
                        p.params.push(name.to_string());
                    }
                }
                "constraint" => {
                    let c = parse_constraint(value).map_err(|e| CatalogError::SyntaxError {
                        line: lineno,
                        col: col(value, e.offset),
                        message: e.message,
                    })?;
                    p.constraints.push(c);
                }
                "flag" => match value {
                    "full" => p.stub = false,
                    "stub" => p.stub = true,
                    _ => {
                        return syntax(lineno, col(value, 0), "flag must be `full` or `stub`")
                    }
                },
                "comment" => p.comments.push(value.to_string()),
                "segre" => {
                    if p.expected_segre.is_some() {
                        return syntax(lineno, indent + 1, "segre recorded twice");
                    }
                    p.expected_segre = Some(value.to_string());
                }
                "conformally_flat" | "ricci_parallel" => {
                    let b = match value {
                        "true" => true,
                        "false" => false,
                        _ => {
                            return syntax(lineno, col(value, 0), "expected `true` or `false`")
                        }
                    };
                    let slot = if key == "conformally_flat" {
                        &mut p.expected_cf
                    } else {
                        &mut p.expected_rp
                    };
                    if slot.is_some() {
                        return syntax(lineno, indent + 1, format!("{key} recorded twice"));
                    }
                    *slot = Some(b);
                }
                "line" | "plane" => {
                    let (combos, when) = parse_span_value(value).map_err(|(off, msg)| {
                        CatalogError::SyntaxError {
                            line: lineno,
                            col: col(value, off),
                            message: msg,
                        }
                    })?;
                    let want = if key == "line" { 1 } else { 2 };
                    if let Some(c) = &combos {
                        if c.len() != want {
                            return syntax(
                                lineno,
                                col(value, 0),
                                format!("a {key} span needs exactly {want} vector(s)"),
                            );
                        }
                    }
                    let rows = if key == "line" {
                        &mut p.raw_line
                    } else {
                        &mut p.raw_plane
                    };
                    rows.push((combos, when, lineno));
                }
                other => {
                    return syntax(lineno, indent + 1, format!("unrecognised directive `{other}`"))
                }
            }
            continue;
        }

        return syntax(lineno, indent + 1, "unrecognised line");
    }

    if let Some(p) = cur.take() {
        entries.push(finalize(p)?);
    }
    Ok(entries)
}

/// Splits `key: value` or `key = value` directive lines.
fn split_directive(line: &str) -> Option<(&str, &str)> {
    let bytes = line.as_bytes();
    for (i, b) in bytes.iter().enumerate() {
        match b {
            b':' | b'=' => {
                let key = line[..i].trim();
                if key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !key.is_empty() {
                    return Some((key, &line[i + 1..]));
                }
                return None;
            }
            b' ' | b'\t' => continue,
            _ if b.is_ascii_alphanumeric() || *b == b'_' => continue,
            _ => return None,
        }
    }
    None
}

type SpanValue = (Option<Vec<Expr>>, Option<Constraint>);

fn parse_span_value(value: &str) -> Result<SpanValue, (usize, String)> {
    let (combos, rest) = if let Some(rest) = value.strip_prefix("none") {
        (None, rest)
    } else if let Some(inner_start) = value.strip_prefix("span(") {
        let mut depth = 1usize;
        let mut close = None;
        for (i, c) in inner_start.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let Some(close) = close else {
            return Err((value.len(), "unclosed `span(`".into()));
        };
        let inner = &inner_start[..close];
        let combos = parse_expr_list(inner)
            .map_err(|e| (5 + e.offset, e.message))?;
        (Some(combos), &inner_start[close + 1..])
    } else {
        return Err((0, "expected `none` or `span(...)`".into()));
    };
    let rest = rest.trim_start();
    if rest.is_empty() {
        return Ok((combos, None));
    }
    let Some(cond) = rest.strip_prefix("when") else {
        return Err((
            value.len() - rest.len(),
            "expected `when <constraint>` or end of line".into(),
        ));
    };
    let cond = cond.trim();
    let c = parse_constraint(cond)
        .map_err(|e| (value.len() - cond.len() + e.offset, e.message))?;
    Ok((combos, Some(c)))
}

fn finalize(p: Pending) -> Result<CatalogEntry, CatalogError> {
    let dim_h = p.dim_h;
    let full_names = basis_names(dim_h);
    let m_names = complement_names(dim_h);
    let full_idx: BTreeMap<String, usize> = full_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    let m_idx: BTreeMap<String, usize> = m_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    let n = dim_h + 4;

    for name in &p.params {
        if full_idx.contains_key(name) || name == "sqrt" {
            return syntax(
                p.dim_h_line.unwrap_or(1),
                1,
                format!("parameter `{name}` shadows a reserved name"),
            );
        }
    }
    let check_params = |e: &Expr, lineno: usize| -> Result<(), CatalogError> {
        for q in e.params() {
            if !p.params.iter().any(|d| *d == q) {
                return syntax(lineno, 1, format!("undeclared parameter `{q}`"));
            }
        }
        Ok(())
    };

    let mut brackets = Vec::new();
    let mut seen_pairs = BTreeSet::new();
    for (a, b, rhs, lineno) in &p.raw_brackets {
        let Some(&ia) = full_idx.get(a) else {
            return syntax(*lineno, 1, format!("unknown basis symbol `{a}`"));
        };
        let Some(&ib) = full_idx.get(b) else {
            return syntax(*lineno, 1, format!("unknown basis symbol `{b}`"));
        };
        if ia == ib {
            return syntax(*lineno, 1, "bracket of a basis vector with itself");
        }
        if !seen_pairs.insert((ia.min(ib), ia.max(ib))) {
            return syntax(*lineno, 1, format!("bracket [{a}, {b}] recorded twice"));
        }
        let coeffs = extract_combo(rhs, &full_idx, n)
            .map_err(|m| CatalogError::SyntaxError {
                line: *lineno,
                col: 1,
                message: m,
            })?;
        for c in coeffs.iter().flatten() {
            check_params(c, *lineno)?;
        }
        brackets.push(Bracket {
            left: ia,
            right: ib,
            rhs: coeffs,
        });
    }

    let mut metric = Vec::new();
    let mut seen_g = BTreeSet::new();
    for (i1, j1, e, lineno) in &p.raw_metric {
        if !seen_g.insert((*i1.min(j1), *i1.max(j1))) {
            return syntax(
                *lineno,
                1,
                format!("metric component g({}, {}) recorded twice", i1 + 1, j1 + 1),
            );
        }
        check_params(e, *lineno)?;
        metric.push((*i1, *j1, e.clone()));
    }

    for c in &p.constraints {
        for q in c.lhs.params().into_iter().chain(c.rhs.params()) {
            if !p.params.iter().any(|d| *d == q) {
                return syntax(1, 1, format!("constraint references undeclared parameter `{q}`"));
            }
        }
    }

    let convert_rows =
        |raw: &[(Option<Vec<Expr>>, Option<Constraint>, usize)]| -> Result<Vec<SpanRow>, CatalogError> {
            let mut rows = Vec::new();
            for (combos, when, lineno) in raw {
                if let Some(c) = when {
                    for q in c.lhs.params().into_iter().chain(c.rhs.params()) {
                        if !p.params.iter().any(|d| *d == q) {
                            return syntax(
                                *lineno,
                                1,
                                format!("guard references undeclared parameter `{q}`"),
                            );
                        }
                    }
                }
                let vectors = match combos {
                    None => None,
                    Some(list) => {
                        let mut vs = Vec::new();
                        for e in list {
                            let coeffs = extract_combo(e, &m_idx, 4)
                                .map_err(|m| CatalogError::SyntaxError {
                                    line: *lineno,
                                    col: 1,
                                    message: m,
                                })?;
                            if coeffs.iter().all(Option::is_none) {
                                return syntax(*lineno, 1, "zero vector in a span");
                            }
                            for c in coeffs.iter().flatten() {
                                check_params(c, *lineno)?;
                            }
                            vs.push(coeffs);
                        }
                        Some(vs)
                    }
                };
                rows.push(SpanRow {
                    vectors,
                    when: when.clone(),
                });
            }
            Ok(rows)
        };

    let line = convert_rows(&p.raw_line)?;
    let plane = convert_rows(&p.raw_plane)?;

    Ok(CatalogEntry {
        id: p.id,
        dim_h,
        stub: p.stub,
        params: p.params,
        constraints: p.constraints,
        comments: p.comments,
        brackets,
        metric,
        expected: Expected {
            segre: p.expected_segre,
            conformally_flat: p.expected_cf,
            ricci_parallel: p.expected_rp,
            line,
            plane,
        },
    })
}

// ---------------------------------------------------------------------------
// Printing.

fn fmt_combo(f: &mut fmt::Formatter<'_>, combo: &[Option<Expr>], names: &[String]) -> fmt::Result {
    let mut first = true;
    for (c, name) in combo.iter().zip(names) {
        let Some(c) = c else { continue };
        let term = if *c == Expr::int(1) {
            name.clone()
        } else if *c == Expr::Neg(Box::new(Expr::int(1))) {
            format!("-{name}")
        } else {
            let mut s = String::new();
            // Render the coefficient as the left factor of a product.
            struct AtPrec<'a>(&'a Expr);
            impl fmt::Display for AtPrec<'_> {
                fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                    // Reuse Display, adding parens for additive expressions.
                    match self.0 {
                        Expr::Add(..) | Expr::Sub(..) => write!(f, "({})", self.0),
                        _ => write!(f, "{}", self.0),
                    }
                }
            }
            s.push_str(&format!("{}*{name}", AtPrec(c)));
            s
        };
        if first {
            write!(f, "{term}")?;
            first = false;
        } else if term.starts_with('-') {
            write!(f, " {}", term)?;
        } else {
            write!(f, " + {term}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

struct ComboDisplay<'a>(&'a [Option<Expr>], &'a [String]);

impl fmt::Display for ComboDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_combo(f, self.0, self.1)
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[entry {}]", self.id)?;
        writeln!(f, "dim_m = 4")?;
        writeln!(f, "dim_h = {}", self.dim_h)?;
        writeln!(f, "flag: {}", if self.stub { "stub" } else { "full" })?;
        if !self.params.is_empty() {
            writeln!(f, "params: {}", self.params.join(", "))?;
        }
        for c in &self.constraints {
            writeln!(f, "constraint: {c}")?;
        }
        for c in &self.comments {
            writeln!(f, "comment: {c}")?;
        }
        let names = self.basis_names();
        for b in &self.brackets {
            writeln!(
                f,
                "[{}, {}] = {}",
                names[b.left],
                names[b.right],
                ComboDisplay(&b.rhs, &names)
            )?;
        }
        for (i, j, e) in &self.metric {
            writeln!(f, "g({}, {}) = {e}", i + 1, j + 1)?;
        }
        if let Some(s) = &self.expected.segre {
            writeln!(f, "segre = {s}")?;
        }
        if let Some(b) = self.expected.conformally_flat {
            writeln!(f, "conformally_flat = {b}")?;
        }
        if let Some(b) = self.expected.ricci_parallel {
            writeln!(f, "ricci_parallel = {b}")?;
        }
        let m_names = self.complement_names();
        let write_rows = |f: &mut fmt::Formatter<'_>,
                              label: &str,
                              rows: &[SpanRow]|
         -> fmt::Result {
            for row in rows {
                write!(f, "{label} = ")?;
                match &row.vectors {
                    None => write!(f, "none")?,
                    Some(vs) => {
                        write!(f, "span(")?;
                        for (k, v) in vs.iter().enumerate() {
                            if k > 0 {
                                write!(f, ", ")?;
                            }
                            fmt_combo(f, v, &m_names)?;
                        }
                        write!(f, ")")?;
                    }
                }
                match &row.when {
                    Some(c) => writeln!(f, " when {c}")?,
                    None => writeln!(f)?,
                }
            }
            Ok(())
        };
        write_rows(f, "line", &self.expected.line)?;
        write_rows(f, "plane", &self.expected.plane)?;
        Ok(())
    }
}

/// Prints entries back in catalog syntax.
pub fn print_catalog(entries: &[CatalogEntry]) -> String {
    entries
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

// ---------------------------------------------------------------------------
// Lookup.

/// Finds an entry by id, tolerating common shorthand: a `komrakov-` prefix
/// may be dropped, a trailing `-stub` is ignored, and a bare case name
/// resolves to its first lettered or signed variant in catalog order.
pub fn find_entry<'a>(entries: &'a [CatalogEntry], query: &str) -> Option<&'a CatalogEntry> {
    let base = query.strip_suffix("-stub").unwrap_or(query);
    for q in [query, base] {
        if let Some(e) = entries.iter().find(|e| e.id == q) {
            return Some(e);
        }
        let prefixed = format!("komrakov-{q}");
        if let Some(e) = entries.iter().find(|e| e.id == prefixed) {
            return Some(e);
        }
    }
    entries.iter().find(|e| {
        e.id.strip_prefix(base).is_some_and(|tail| {
            (tail.len() == 1 && tail.chars().all(|c| c.is_ascii_lowercase()))
                || tail.starts_with("-eps")
        })
    })
}

/// The entries compiled into the library.
pub fn builtin_catalog() -> &'static [CatalogEntry] {
    static CAT: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CAT.get_or_init(|| {
        parse_catalog(include_str!("builtin.cat")).expect("built-in catalog parses")
    })
}
