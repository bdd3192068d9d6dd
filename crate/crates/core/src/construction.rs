//! Evaluation-code construction of locally recoverable codes.
//!
//! A coefficient grid `a[h][s]` (`h < r`, `s < t`) defines
//! `F(x, y) = Σ_h Σ_s a[h][s] g(x)^s y^h`. The point set is `l` repair groups
//! of `r + μ - 1` points each. Point `(i, j)` has `g(x) = Y[i]` and `y = B[j]`,
//! so every group sees a polynomial of degree `< r` in `y` evaluated at the
//! distinct nodes `B`. A code is obtained by restricting the grid to a linear
//! subspace `U` of `GF(q)^{rt}`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{Field, GfError};
use crate::linalg::{null_space, rref, vandermonde, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("generator rank {got} is below the subspace dimension {expected}")]
    RankDeficient { expected: usize, got: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symbol {0} is not a field element")]
    InvalidSymbol(u32),
    #[error("the RANDOM strategy requires a seed")]
    MissingSeed,
    #[error("message space of size {q}^{k} exceeds the enumeration cap {cap}")]
    CapExceeded { q: u32, k: usize, cap: u64 },
    #[error("generator is inconsistent with the parameters: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type Result<T, E = ConstructionError> = std::result::Result<T, E>;

/// How the coefficient subspace `U` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Strategy {
    /// `U` is the whole coefficient space.
    Full,
    /// Every column polynomial vanishes at each node of `E`.
    Colwise,
    /// Only column `s = 0` vanishes at the nodes of `E`.
    Global,
    /// A seeded uniformly random subspace of codimension `w`.
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Full,
        Strategy::Colwise,
        Strategy::Global,
        Strategy::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Full => "FULL",
            Strategy::Colwise => "COLWISE",
            Strategy::Global => "GLOBAL",
            Strategy::Random => "RANDOM",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "FULL" => Ok(Strategy::Full),
            "COLWISE" => Ok(Strategy::Colwise),
            "GLOBAL" => Ok(Strategy::Global),
            "RANDOM" => Ok(Strategy::Random),
            _ => Err(ConstructionError::InvalidParams(format!(
                "unknown strategy {s:?} (expected full, colwise, global or random)"
            ))),
        }
    }
}

/// Validated code parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LrcParams {
    pub q: u32,
    /// Locality.
    pub r: usize,
    /// Local distance; repair groups have `r + mu - 1` points.
    pub mu: usize,
    /// Number of Vandermonde constraints.
    pub w: usize,
    /// Number of repair groups.
    pub l: usize,
    /// Degree bound in `g`.
    pub t: usize,
    pub strategy: Strategy,
    pub n: usize,
    pub k: usize,
    /// `E` may reuse nodes of `B` because `r + mu - 1 + w > q`. Only the
    /// long-code presets set this.
    pub shared_nodes: bool,
}

impl LrcParams {
    pub fn group_size(&self) -> usize {
        self.r + self.mu - 1
    }

    /// Length of a flattened coefficient grid.
    pub fn grid_len(&self) -> usize {
        self.r * self.t
    }
}

/// Validates raw parameters; `t` defaults to `l`.
pub fn plan_params(
    q: u64,
    r: usize,
    mu: usize,
    w: usize,
    l: usize,
    t: Option<usize>,
    strategy: Strategy,
) -> Result<LrcParams> {
    plan(q, r, mu, w, l, t, strategy, false)
}

/// Like [`plan_params`] but lets `E` wrap around into `B` when
/// `r + mu - 1 + w > q`.
pub fn plan_params_shared(
    q: u64,
    r: usize,
    mu: usize,
    w: usize,
    l: usize,
    t: Option<usize>,
    strategy: Strategy,
) -> Result<LrcParams> {
    plan(q, r, mu, w, l, t, strategy, true)
}

#[allow(clippy::too_many_arguments)]
fn plan(
    q: u64,
    r: usize,
    mu: usize,
    w: usize,
    l: usize,
    t: Option<usize>,
    strategy: Strategy,
    allow_shared: bool,
) -> Result<LrcParams> {
    let invalid = |msg: String| Err(ConstructionError::InvalidParams(msg));
    let spec =
        crate::gf::make_field(q).map_err(|e| ConstructionError::InvalidParams(e.to_string()))?;
    let qs = spec.q as usize;
    if r < 1 || r > qs - 1 {
        return invalid(format!("r <= q-1 violated (r={r}, q={q})"));
    }
    if mu < 2 {
        return invalid(format!("mu >= 2 violated (mu={mu})"));
    }
    if w + 1 > r {
        return invalid(format!("w <= r-1 violated (w={w}, r={r})"));
    }
    if strategy == Strategy::Full && w != 0 {
        return invalid(format!("FULL has no constraints, w must be 0 (w={w})"));
    }
    let group = r + mu - 1;
    if group > qs {
        return invalid(format!("r+mu-1 <= q violated (r+mu-1={group}, q={q})"));
    }
    let shared_nodes = group + w > qs;
    if shared_nodes && !allow_shared {
        return invalid(format!(
            "r+mu-1+w <= q violated (r+mu-1+w={}, q={q})",
            group + w
        ));
    }
    if l < 1 || l > qs {
        return invalid(format!("1 <= l <= q violated (l={l}, q={q})"));
    }
    let t = t.unwrap_or(l);
    if t < 1 || t > l {
        return invalid(format!("1 <= t <= l violated (t={t}, l={l})"));
    }
    let k = match strategy {
        Strategy::Full => r * t,
        Strategy::Colwise => (r - w) * t,
        Strategy::Global | Strategy::Random => r * t - w,
    };
    Ok(LrcParams {
        q: spec.q,
        r,
        mu,
        w,
        l,
        t,
        strategy,
        n: group * l,
        k,
        shared_nodes,
    })
}

/// Number of rows in the long-code table.
pub const TABLE1_ROWS: usize = 8;

/// Long-code preset: row `i` (1-based) has locality `q-2-i`, distance target
/// `i+5` (so `w = i+3`), `l = q` groups and the GLOBAL strategy.
pub fn table1_preset(row: usize, q: u64) -> Result<LrcParams> {
    if !(1..=TABLE1_ROWS).contains(&row) {
        return Err(ConstructionError::InvalidParams(format!(
            "table row must be in 1..={TABLE1_ROWS} (got {row})"
        )));
    }
    let r = (q as i64) - 2 - row as i64;
    let w = row + 3;
    if r < 1 || (w as i64) > r - 1 {
        return Err(ConstructionError::InvalidParams(format!(
            "table row {row} needs w={w} <= r-1 with r=q-{}; infeasible at q={q}",
            row + 2
        )));
    }
    plan_params_shared(q, r as usize, 2, w, q as usize, None, Strategy::Global)
}

/// Evaluation geometry: group values `Y`, nodes `B`, constraint nodes `E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupLayout {
    pub y: Vec<u32>,
    pub b: Vec<u32>,
    pub e: Vec<u32>,
    /// `(group, slot)` for each position, group-major.
    pub points: Vec<(usize, usize)>,
}

impl GroupLayout {
    pub fn group_size(&self) -> usize {
        self.b.len()
    }

    pub fn groups(&self) -> usize {
        self.y.len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, group: usize, slot: usize) -> usize {
        group * self.group_size() + slot
    }

    pub fn locate(&self, position: usize) -> (usize, usize) {
        (position / self.group_size(), position % self.group_size())
    }

    pub fn group_positions(&self, group: usize) -> std::ops::Range<usize> {
        let g = self.group_size();
        group * g..(group + 1) * g
    }
}

/// Canonical layout: `Y` and `B` are initial segments of the element order,
/// `E` the `w` elements following `B` (wrapping around when nodes are shared).
pub fn build_layout(params: &LrcParams) -> GroupLayout {
    let q = params.q;
    let g = params.group_size();
    let y: Vec<u32> = (0..params.l as u32).collect();
    let b: Vec<u32> = (0..g as u32).collect();
    let e: Vec<u32> = (0..params.w as u32).map(|i| (g as u32 + i) % q).collect();
    let points = (0..params.l)
        .flat_map(|i| (0..g).map(move |j| (i, j)))
        .collect();
    GroupLayout { y, b, e, points }
}

/// Coefficient grid `a[h][s]`, flattened as `h * t + s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientGrid {
    r: usize,
    t: usize,
    a: Vec<u32>,
}

impl CoefficientGrid {
    pub fn zero(r: usize, t: usize) -> Self {
        Self {
            r,
            t,
            a: vec![0; r * t],
        }
    }

    pub fn from_flat(r: usize, t: usize, a: Vec<u32>) -> Result<Self> {
        if a.len() != r * t {
            return Err(ConstructionError::LengthMismatch {
                expected: r * t,
                got: a.len(),
            });
        }
        Ok(Self { r, t, a })
    }

    /// Builds a grid whose column `s` holds `columns[s]` (coefficients low degree first).
    pub fn from_columns(r: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let t = columns.len();
        let mut grid = Self::zero(r, t);
        for (s, col) in columns.iter().enumerate() {
            if col.len() > r {
                return Err(ConstructionError::LengthMismatch {
                    expected: r,
                    got: col.len(),
                });
            }
            for (h, &c) in col.iter().enumerate() {
                grid.set(h, s, c);
            }
        }
        Ok(grid)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn get(&self, h: usize, s: usize) -> u32 {
        self.a[h * self.t + s]
    }

    pub fn set(&mut self, h: usize, s: usize, v: u32) {
        self.a[h * self.t + s] = v;
    }

    pub fn as_flat(&self) -> &[u32] {
        &self.a
    }

    pub fn column(&self, s: usize) -> Vec<u32> {
        (0..self.r).map(|h| self.get(h, s)).collect()
    }
}

/// `F_a` at a position: `Σ_h (Σ_s a[h][s] y_i^s) b_j^h`.
pub fn evaluate_f(
    field: &Field,
    a: &CoefficientGrid,
    layout: &GroupLayout,
    position: usize,
) -> u32 {
    let (i, j) = layout.points[position];
    let y = layout.y[i];
    let local: Vec<u32> = (0..a.r)
        .map(|h| field.eval_poly(&a.a[h * a.t..(h + 1) * a.t], y))
        .collect();
    field.eval_poly(&local, layout.b[j])
}

/// Number of nodes in `B` that are common roots of all column polynomials.
pub fn coeff_h(field: &Field, a: &CoefficientGrid, layout: &GroupLayout) -> usize {
    layout
        .b
        .iter()
        .filter(|&&b| (0..a.t).all(|s| field.eval_poly(&a.column(s), b) == 0))
        .count()
}

/// Basis of the coefficient subspace `U`, in reduced row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub basis: Matrix,
    pub strategy: Strategy,
    pub seed: Option<u64>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
}

fn canonical(basis: &Matrix) -> Matrix {
    let reduced = rref(basis);
    reduced
        .matrix
        .select_rows(&(0..reduced.rank).collect::<Vec<_>>())
}

/// Constraint rows for COLWISE (`all_columns`) or GLOBAL (column 0 only).
fn constraint_matrix(
    field: &Field,
    params: &LrcParams,
    layout: &GroupLayout,
    all_columns: bool,
) -> Matrix {
    let (r, t) = (params.r, params.t);
    let powers = vandermonde(field, &layout.e, r).expect("E is duplicate-free");
    let cols: Vec<usize> = if all_columns {
        (0..t).collect()
    } else {
        vec![0]
    };
    let mut m = Matrix::zeros(field, layout.e.len() * cols.len(), r * t);
    let mut row = 0;
    for &s in &cols {
        for e in 0..layout.e.len() {
            for h in 0..r {
                m.set(row, h * t + s, powers.get(e, h));
            }
            row += 1;
        }
    }
    m
}

pub fn build_subspace(
    field: &Field,
    params: &LrcParams,
    layout: &GroupLayout,
    seed: Option<u64>,
) -> Result<SubspaceBasis> {
    let dim = params.grid_len();
    let basis = match params.strategy {
        Strategy::Full => Matrix::identity(field, dim),
        Strategy::Colwise => {
            canonical(&null_space(&constraint_matrix(field, params, layout, true)))
        }
        Strategy::Global => canonical(&null_space(&constraint_matrix(
            field, params, layout, false,
        ))),
        Strategy::Random => {
            let seed = seed.ok_or(ConstructionError::MissingSeed)?;
            random_basis(field, dim - params.w, dim, seed)
        }
    };
    let seed = (params.strategy == Strategy::Random)
        .then_some(seed)
        .flatten();
    Ok(SubspaceBasis {
        basis,
        strategy: params.strategy,
        seed,
    })
}

fn random_basis(field: &Field, rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let data = (0..rows * cols)
            .map(|_| rng.gen_range(0..field.q()))
            .collect();
        let m = Matrix::from_vec(field, rows, cols, data);
        let reduced = rref(&m);
        if reduced.rank == rows {
            return reduced.matrix;
        }
    }
}

/// Evaluation matrix: row `h * t + s` holds `y_i^s b_j^h` over all positions.
pub fn evaluation_matrix(field: &Field, params: &LrcParams, layout: &GroupLayout) -> Matrix {
    let (r, t) = (params.r, params.t);
    let mut m = Matrix::zeros(field, r * t, layout.len());
    for (pos, &(i, j)) in layout.points.iter().enumerate() {
        let (y, b) = (layout.y[i], layout.b[j]);
        for h in 0..r {
            let bh = field.pow(b, h as u64);
            for s in 0..t {
                m.set(h * t + s, pos, field.mul(bh, field.pow(y, s as u64)));
            }
        }
    }
    m
}

/// A constructed code `C(U)` with its generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeInstance {
    pub field: Field,
    pub params: LrcParams,
    pub layout: GroupLayout,
    pub subspace: SubspaceBasis,
    /// `k x n`; row `i` is the codeword of basis row `i` (unless loaded from a file).
    pub generator: Matrix,
}

impl CodeInstance {
    /// Field, layout, subspace and generator in one call.
    pub fn build(params: LrcParams, seed: Option<u64>) -> Result<Self> {
        let field = Field::new(params.q as u64)?;
        let layout = build_layout(&params);
        let subspace = build_subspace(&field, &params, &layout, seed)?;
        generator_matrix(&field, params, layout, subspace)
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    /// Rebuilds an instance from stored parts. The layout must be canonical for
    /// `params`, and every generator row must be an evaluation of a grid in the
    /// subspace the strategy (and seed) determines.
    pub fn from_parts(
        field: Field,
        params: LrcParams,
        layout: GroupLayout,
        generator: Matrix,
        seed: Option<u64>,
    ) -> Result<Self> {
        let inconsistent = |m: &str| Err(ConstructionError::Inconsistent(m.to_string()));
        if field.q() != params.q {
            return inconsistent("field size differs from q");
        }
        if layout != build_layout(&params) {
            return inconsistent("layout is not the canonical layout for these parameters");
        }
        if generator.rows() != params.k || generator.cols() != params.n {
            return inconsistent("generator shape differs from k x n");
        }
        if params.strategy == Strategy::Random && seed.is_none() {
            return Err(ConstructionError::MissingSeed);
        }
        // Solve grid · EV = row for every generator row at once.
        let ev = evaluation_matrix(&field, &params, &layout);
        let g = params.grid_len();
        let mut aug = Matrix::zeros(&field, params.n, g + params.k);
        for pos in 0..params.n {
            for c in 0..g {
                aug.set(pos, c, ev.get(c, pos));
            }
            for i in 0..params.k {
                aug.set(pos, g + i, generator.get(i, pos));
            }
        }
        let reduced = rref(&aug);
        if reduced.pivots.iter().any(|&p| p >= g) {
            return inconsistent("a generator row is not an evaluation of any coefficient grid");
        }
        if reduced.rank < g {
            return inconsistent("evaluation map is not injective");
        }
        let mut grids = Matrix::zeros(&field, params.k, g);
        for i in 0..params.k {
            for c in 0..g {
                grids.set(i, c, reduced.matrix.get(c, g + i));
            }
        }
        let recovered = canonical(&grids);
        if recovered.rows() != params.k {
            return Err(ConstructionError::RankDeficient {
                expected: params.k,
                got: recovered.rows(),
            });
        }
        let expected = build_subspace(&field, &params, &layout, seed)?;
        if expected.basis != recovered {
            return inconsistent("generator does not span the strategy's code");
        }
        Ok(Self {
            field,
            params,
            layout,
            subspace: expected,
            generator,
        })
    }
}

/// Evaluates each basis grid at every position and checks the result has full rank.
pub fn generator_matrix(
    field: &Field,
    params: LrcParams,
    layout: GroupLayout,
    subspace: SubspaceBasis,
) -> Result<CodeInstance> {
    if params.t > params.l {
        return Err(ConstructionError::InvalidParams(format!(
            "t <= l violated (t={}, l={})",
            params.t, params.l
        )));
    }
    let ev = evaluation_matrix(field, &params, &layout);
    let generator = subspace.basis.mul(&ev);
    let rank = generator.rank();
    if rank < subspace.dim() {
        return Err(ConstructionError::RankDeficient {
            expected: subspace.dim(),
            got: rank,
        });
    }
    if subspace.dim() != params.k {
        return Err(ConstructionError::RankDeficient {
            expected: params.k,
            got: subspace.dim(),
        });
    }
    Ok(CodeInstance {
        field: field.clone(),
        params,
        layout,
        subspace,
        generator,
    })
}

/// `Σ msg_i · G_i`.
pub fn encode(instance: &CodeInstance, msg: &[u32]) -> Result<Vec<u32>> {
    if msg.len() != instance.k() {
        return Err(ConstructionError::LengthMismatch {
            expected: instance.k(),
            got: msg.len(),
        });
    }
    if let Some(&bad) = msg.iter().find(|&&x| x >= instance.field.q()) {
        return Err(ConstructionError::InvalidSymbol(bad));
    }
    Ok(instance.generator.left_mul_vec(msg))
}

/// Per-trial seed derived from `(seed, trial)`; reproduces the trial's basis via
/// [`build_subspace`].
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng.next_u64()
}

/// Samples `trials` random codimension-`w` subspaces, measures each code's exact
/// distance, and keeps the best (lowest trial index on ties).
pub fn random_subspace_search(
    params: &LrcParams,
    trials: usize,
    seed: u64,
    cap: u64,
    workers: usize,
) -> Result<(SubspaceBasis, usize)> {
    if trials == 0 {
        return Err(ConstructionError::InvalidParams(
            "trials >= 1 violated".into(),
        ));
    }
    let mut params = params.clone();
    params.strategy = Strategy::Random;
    params.k = params.grid_len() - params.w;
    if !crate::verify::within_cap(params.q, params.k, cap) {
        return Err(ConstructionError::CapExceeded {
            q: params.q,
            k: params.k,
            cap,
        });
    }
    let field = Field::new(params.q as u64)?;
    let layout = build_layout(&params);
    let mut best: Option<(SubspaceBasis, usize)> = None;
    for trial in 0..trials as u64 {
        let subspace = build_subspace(&field, &params, &layout, Some(trial_seed(seed, trial)))?;
        let inst = generator_matrix(&field, params.clone(), layout.clone(), subspace)?;
        let d = crate::verify::exact_distance(&inst.generator, cap, workers)
            .map_err(|_| ConstructionError::CapExceeded {
                q: params.q,
                k: params.k,
                cap,
            })?
            .distance;
        if best.as_ref().is_none_or(|(_, bd)| d > *bd) {
            best = Some((inst.subspace, d));
        }
    }
    Ok(best.expect("at least one trial"))
}
