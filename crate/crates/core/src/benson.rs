//! Outer approximation of the upper image of a linear multiobjective program
//!
//! The solver keeps a polyhedron `P^i` that contains the upper image
//! `C(X) + K`. In each round it scalarizes the first unverified vertex. If
//! the vertex is more than `epsilon` away from the upper image along `k`,
//! the supporting halfspace from the LP duals is cut off. Vertex
//! enumeration after a cut is delegated to one of three backends.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::dd::{self, CutKind, DdError};
use crate::linalg::{distance, dot, norm};
use crate::lp::{solve_lp, Bound, LinearProgram, LpError, LpStatus, Relation};
use crate::oracle::{enumerate_vertices_brute, HRep, OracleError};
use crate::polyhedron::{
    standard_cone_dd, AdjacencyPolyhedron, ConeDD, FacetId, Halfspace, PolyError,
};

/// Side length of the truncating simplex used by [`Backend::Box`].
pub const DEFAULT_M: f64 = 1e4;
pub const DEFAULT_MAX_CUTS: usize = 100_000;
/// Feasibility slack used when checking `A x <= b`.
pub const FEAS_TOL: f64 = 1e-7;

/// 0.005 for two objectives, 0.05 otherwise.
pub fn default_epsilon(d: usize) -> f64 {
    if d <= 2 {
        0.005
    } else {
        0.05
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BensonError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Dd(#[from] DdError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("infeasible")]
    Infeasible,
    #[error("unbounded: the ideal point is not finite")]
    Unbounded,
    #[error("scalarization LP infeasible at v = {0:?}")]
    ScalarizationInfeasible(Vec<f64>),
    #[error("dual multipliers vanish; no supporting halfspace")]
    DegenerateDual,
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("an initial point is required for a cone other than the nonnegative orthant")]
    NeedsInitialPoint,
    #[error("cut limit of {0} reached without meeting the tolerance")]
    CutLimit(usize),
    #[error("cut at alpha = {alpha:e} did not change the outer approximation")]
    Stalled { alpha: f64 },
    #[error("outer approximation became empty")]
    EmptyOuter,
}

/// `min C x` subject to `A x <= b`, `x >= 0`, ordered by a polyhedral cone.
#[derive(Clone, Debug, PartialEq)]
pub struct MolpInstance {
    c: Vec<Vec<f64>>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    cone: ConeDD,
    k: Vec<f64>,
}

impl MolpInstance {
    /// Instance over `R^d_+` with the all-ones scalarization direction.
    pub fn new(c: Vec<Vec<f64>>, a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self, BensonError> {
        let d = c.len();
        let n = c.first().map_or(0, Vec::len);
        if d < 2 {
            return Err(BensonError::InvalidInstance(format!(
                "need at least two objectives, got {d}"
            )));
        }
        if n == 0 {
            return Err(BensonError::InvalidInstance("no variables".into()));
        }
        if let Some(i) = c.iter().position(|r| r.len() != n) {
            return Err(BensonError::InvalidInstance(format!(
                "objective row {i} has length {}, expected {n}",
                c[i].len()
            )));
        }
        if let Some(i) = a.iter().position(|r| r.len() != n) {
            return Err(BensonError::InvalidInstance(format!(
                "constraint row {i} has length {}, expected {n}",
                a[i].len()
            )));
        }
        if a.len() != b.len() {
            return Err(BensonError::InvalidInstance(format!(
                "{} constraint rows but {} right-hand sides",
                a.len(),
                b.len()
            )));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !(c.iter().all(|r| finite(r)) && a.iter().all(|r| finite(r)) && finite(&b)) {
            return Err(BensonError::InvalidInstance("non-finite data".into()));
        }
        let cone = standard_cone_dd(d)?;
        let k = cone.default_direction();
        Ok(Self { c, a, b, cone, k })
    }

    /// Replaces the ordering cone and resets `k` to the cone's default.
    pub fn with_cone(mut self, cone: ConeDD) -> Result<Self, BensonError> {
        if cone.dim() != self.dim() {
            return Err(BensonError::InvalidInstance(format!(
                "cone has dimension {}, objectives {}",
                cone.dim(),
                self.dim()
            )));
        }
        self.k = cone.default_direction();
        self.cone = cone;
        Ok(self)
    }

    /// Sets the scalarization direction; it must lie in the cone interior.
    pub fn with_direction(mut self, k: Vec<f64>) -> Result<Self, BensonError> {
        if !self.cone.contains_interior(&k) {
            return Err(BensonError::InvalidInstance(format!(
                "direction {k:?} is not in the interior of the ordering cone"
            )));
        }
        self.k = k;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn num_vars(&self) -> usize {
        self.c[0].len()
    }

    pub fn num_constraints(&self) -> usize {
        self.a.len()
    }

    pub fn objectives(&self) -> &[Vec<f64>] {
        &self.c
    }

    pub fn constraint_matrix(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn cone(&self) -> &ConeDD {
        &self.cone
    }

    pub fn direction(&self) -> &[f64] {
        &self.k
    }

    /// `C x`.
    pub fn image(&self, x: &[f64]) -> Vec<f64> {
        self.c.iter().map(|row| dot(row, x)).collect()
    }

    /// `A x <= b + tol` and `x >= -tol`.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|&xi| xi >= -tol)
            && self
                .a
                .iter()
                .zip(&self.b)
                .all(|(row, &bi)| dot(row, x) <= bi + tol)
    }

    fn feasible_set_lp(&self, objective: Vec<f64>) -> LinearProgram {
        let extra = objective.len() - self.num_vars();
        let mut lp = LinearProgram::minimize(objective);
        for (row, &bi) in self.a.iter().zip(&self.b) {
            let mut r = row.clone();
            r.extend(std::iter::repeat_n(0.0, extra));
            lp = lp.subject_to(r, Relation::Le, bi);
        }
        lp
    }
}

/// Componentwise minima of the objectives and one minimizer per objective.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealPoint {
    pub point: Vec<f64>,
    pub minimizers: Vec<Vec<f64>>,
}

/// Minimizes each objective over the feasible set. Only defined for the
/// nonnegative orthant as ordering cone.
pub fn ideal_point(inst: &MolpInstance) -> Result<IdealPoint, BensonError> {
    if !inst.cone.is_nonnegative_orthant() {
        return Err(BensonError::NeedsInitialPoint);
    }
    let mut point = Vec::with_capacity(inst.dim());
    let mut minimizers = Vec::with_capacity(inst.dim());
    for row in &inst.c {
        let sol = solve_lp(&inst.feasible_set_lp(row.clone()))?;
        match sol.status {
            LpStatus::Optimal => {
                point.push(sol.objective_value);
                minimizers.push(sol.x);
            }
            LpStatus::Infeasible => return Err(BensonError::Infeasible),
            LpStatus::Unbounded => return Err(BensonError::Unbounded),
        }
    }
    Ok(IdealPoint { point, minimizers })
}

/// Optimal solution of the scalarization at `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarizationResult {
    pub x: Vec<f64>,
    pub alpha: f64,
    /// Dual multipliers of the cone rows mapped back to objective space.
    pub w: Vec<f64>,
    /// `v + alpha * k`.
    pub y: Vec<f64>,
}

/// Solves `min alpha` subject to `C x <=_K v + alpha k`, `A x <= b`,
/// `x >= 0`. The cone inequality is written as one row per cone facet.
pub fn scalarize(inst: &MolpInstance, v: &[f64]) -> Result<ScalarizationResult, BensonError> {
    let d = inst.dim();
    if v.len() != d {
        return Err(BensonError::InvalidInstance(format!(
            "point has length {}, expected {d}",
            v.len()
        )));
    }
    let n = inst.num_vars();
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let facets = inst.cone.facets();
    let mut lp = LinearProgram::minimize(objective).with_bound(n, Bound::Free);
    for h in facets {
        let a = h.normal();
        let mut row: Vec<f64> = (0..n)
            .map(|j| (0..d).map(|i| a[i] * inst.c[i][j]).sum())
            .collect();
        row.push(-dot(a, &inst.k));
        lp = lp.subject_to(row, Relation::Le, dot(a, v));
    }
    for (row, &bi) in inst.a.iter().zip(&inst.b) {
        let mut r = row.clone();
        r.push(0.0);
        lp = lp.subject_to(r, Relation::Le, bi);
    }
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(BensonError::ScalarizationInfeasible(v.to_vec())),
        LpStatus::Unbounded => return Err(BensonError::Unbounded),
    }
    let alpha = sol.x[n];
    let mut w = vec![0.0; d];
    for (h, &lambda) in facets.iter().zip(&sol.duals) {
        for (wi, ai) in w.iter_mut().zip(h.normal()) {
            *wi -= lambda * ai;
        }
    }
    let y = v
        .iter()
        .zip(&inst.k)
        .map(|(vi, ki)| vi + alpha * ki)
        .collect();
    let mut x = sol.x;
    x.truncate(n);
    Ok(ScalarizationResult { x, alpha, w, y })
}

/// `w^T y >= w^T y^v`.
pub fn supporting_halfspace(res: &ScalarizationResult) -> Result<Halfspace, BensonError> {
    if norm(&res.w) <= 1e-12 {
        return Err(BensonError::DegenerateDual);
    }
    let b = dot(&res.w, &res.y);
    Ok(Halfspace::new(res.w.clone(), b)?)
}

/// Vertex enumeration used after each cut.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Backend {
    /// Unbounded start `{y} + K`, cut with the modified method.
    Cone,
    /// Bounded start truncated at distance `m`, cut with the standard method.
    Box { m: f64 },
    /// H-representation only; vertices recomputed from scratch each round.
    Offline,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Cone => "cone",
            Backend::Box { .. } => "box",
            Backend::Offline => "offline",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub epsilon: f64,
    pub backend: Backend,
    pub max_cuts: usize,
    /// Apex of the initial outer approximation. Required unless the cone
    /// is the nonnegative orthant, where the ideal point is used.
    pub initial_point: Option<Vec<f64>>,
}

impl SolveOptions {
    pub fn new(epsilon: f64, backend: Backend) -> Self {
        Self {
            epsilon,
            backend,
            max_cuts: DEFAULT_MAX_CUTS,
            initial_point: None,
        }
    }

    /// Default epsilon for `d` objectives with the cone backend.
    pub fn for_dim(d: usize) -> Self {
        Self::new(default_epsilon(d), Backend::Cone)
    }
}

/// A cut as seen by a [`SolveObserver`].
#[derive(Clone, Debug)]
pub struct CutEvent<'a> {
    /// Index of the polyhedron produced by this cut.
    pub iteration: usize,
    pub vertex: &'a [f64],
    pub alpha: f64,
    pub halfspace: &'a Halfspace,
}

/// Hook for following the cut sequence of a solve, e.g. to replay it into
/// other vertex enumeration backends.
pub trait SolveObserver {
    fn on_init(&mut self, _apex: &[f64]) -> Result<(), BensonError> {
        Ok(())
    }

    fn on_cut(&mut self, _event: &CutEvent<'_>) -> Result<(), BensonError> {
        Ok(())
    }
}

impl SolveObserver for () {}

/// Statistics for one polyhedron `P^i`. Iteration 0 is the initial one.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Vertex whose scalarization produced the cut.
    pub vertex: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub cut: Option<Halfspace>,
    /// Time spent building or updating the vertex representation.
    pub ve_time: Duration,
    /// Vertices of `P^i`, excluding artificial ones.
    pub actual: usize,
    /// Vertices on the artificial facet; always 0 except for the box backend.
    pub artificial: usize,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    /// Final outer approximation: vertices, cone directions and facets.
    pub outer: AdjacencyPolyhedron,
    /// Vertices of the final outer approximation in selection order.
    pub vertices: Vec<Vec<f64>>,
    /// Weakly efficient solutions found along the way.
    pub efficient_set: Vec<Vec<f64>>,
    /// Apex of the initial outer approximation.
    pub apex: Vec<f64>,
    pub epsilon: f64,
    pub backend: Backend,
    pub iterations: Vec<IterationRecord>,
    /// Number of scalarization LPs solved.
    pub scalarizations: usize,
}

impl SolveReport {
    pub fn num_cuts(&self) -> usize {
        self.iterations.len() - 1
    }

    pub fn cuts(&self) -> impl Iterator<Item = &Halfspace> {
        self.iterations.iter().filter_map(|r| r.cut.as_ref())
    }
}

/// Halfspaces `{y} + f~_j` of the shifted cone.
pub fn shifted_cone_facets(cone: &ConeDD, apex: &[f64]) -> Result<Vec<Halfspace>, BensonError> {
    cone.facets()
        .iter()
        .map(|h| Ok(Halfspace::new(h.normal().to_vec(), dot(h.normal(), apex))?))
        .collect()
}

/// Incremental vertex enumeration state behind one backend.
#[derive(Clone)]
pub(crate) enum VeState {
    Cone(AdjacencyPolyhedron),
    Box {
        polyhedron: AdjacencyPolyhedron,
        artificial: FacetId,
    },
    Offline {
        dim: usize,
        halfspaces: Vec<Halfspace>,
        directions: Vec<Vec<f64>>,
        /// Current vertices with stable keys in discovery order.
        vertices: Vec<(u64, Vec<f64>)>,
        next_key: u64,
    },
}

impl VeState {
    pub(crate) fn init(backend: Backend, apex: &[f64], cone: &ConeDD) -> Result<Self, BensonError> {
        Ok(match backend {
            Backend::Cone => VeState::Cone(dd::init_cone(apex, cone)?),
            Backend::Box { m } => {
                let b = dd::init_box(apex, cone, m)?;
                VeState::Box {
                    polyhedron: b.polyhedron,
                    artificial: b.artificial_facet,
                }
            }
            Backend::Offline => VeState::Offline {
                dim: cone.dim(),
                halfspaces: shifted_cone_facets(cone, apex)?,
                directions: cone.directions().to_vec(),
                vertices: vec![(0, apex.to_vec())],
                next_key: 1,
            },
        })
    }

    /// Current vertices in selection order, with keys stable across cuts.
    pub(crate) fn vertices(&self) -> Vec<(u64, Vec<f64>)> {
        match self {
            VeState::Cone(p) | VeState::Box { polyhedron: p, .. } => p
                .vertices()
                .map(|v| (v.id.0 as u64, v.coords.clone()))
                .collect(),
            VeState::Offline { vertices, .. } => vertices.clone(),
        }
    }

    pub(crate) fn num_vertices(&self) -> usize {
        match self {
            VeState::Cone(p) | VeState::Box { polyhedron: p, .. } => p.num_vertices(),
            VeState::Offline { vertices, .. } => vertices.len(),
        }
    }

    /// `(actual, artificial)` vertex counts.
    pub(crate) fn counts(&self) -> (usize, usize) {
        match self {
            VeState::Box {
                polyhedron,
                artificial,
            } => {
                let art = polyhedron.members_of(*artificial).map_or(0, |ms| {
                    ms.iter().filter(|m| polyhedron.is_vertex(**m)).count()
                });
                (polyhedron.num_vertices() - art, art)
            }
            _ => (self.num_vertices(), 0),
        }
    }

    pub(crate) fn cut(&mut self, h: &Halfspace) -> Result<CutKind, BensonError> {
        match self {
            VeState::Cone(p) => Ok(dd::onlinevert2_in_place(p, h)?.kind),
            VeState::Box { polyhedron, .. } => Ok(dd::onlinevert_in_place(polyhedron, h)?.kind),
            VeState::Offline {
                dim,
                halfspaces,
                directions,
                vertices,
                next_key,
            } => {
                let mut hs = halfspaces.clone();
                hs.push(h.clone());
                let hrep = HRep::new(*dim, hs).with_recession_dirs(directions.clone());
                let found = enumerate_vertices_brute(&hrep)?.vertices;
                if found.is_empty() {
                    return Ok(CutKind::Empty);
                }
                halfspaces.push(h.clone());
                let same = |a: &[f64], b: &[f64]| distance(a, b) <= 1e-7 * (1.0 + norm(a));
                let mut next: Vec<(u64, Vec<f64>)> = vertices
                    .iter()
                    .filter(|(_, old)| found.iter().any(|v| same(old, v)))
                    .cloned()
                    .collect();
                let unchanged = next.len() == vertices.len() && found.len() == vertices.len();
                for v in found {
                    if !next.iter().any(|(_, old)| same(old, &v)) {
                        next.push((*next_key, v));
                        *next_key += 1;
                    }
                }
                *vertices = next;
                Ok(if unchanged {
                    CutKind::Unchanged
                } else {
                    CutKind::Updated
                })
            }
        }
    }

    /// Final outer approximation as a polyhedron with the cone directions.
    fn into_outer(
        self,
        cone: &ConeDD,
    ) -> Result<(AdjacencyPolyhedron, Vec<Vec<f64>>), BensonError> {
        match self {
            VeState::Cone(p) => {
                let verts = p.vertex_points();
                Ok((p, verts))
            }
            VeState::Box {
                polyhedron,
                artificial,
            } => {
                let verts: Vec<Vec<f64>> = dd::strip_artificial(&polyhedron, artificial)?
                    .into_iter()
                    .map(|v| v.coords)
                    .collect();
                let hs: Vec<Halfspace> = polyhedron
                    .facets()
                    .filter(|f| f.id != artificial)
                    .map(|f| f.halfspace.clone())
                    .collect();
                let p =
                    AdjacencyPolyhedron::from_parts(cone.dim(), &verts, cone.directions(), &hs)?;
                Ok((p, verts))
            }
            VeState::Offline {
                dim,
                halfspaces,
                directions,
                vertices,
                ..
            } => {
                let verts: Vec<Vec<f64>> = vertices.into_iter().map(|(_, v)| v).collect();
                let p = AdjacencyPolyhedron::from_parts(dim, &verts, &directions, &halfspaces)?;
                Ok((p, verts))
            }
        }
    }
}

/// Runs the outer approximation loop with the given backend.
pub fn solve_molp(inst: &MolpInstance, opts: &SolveOptions) -> Result<SolveReport, BensonError> {
    solve_molp_observed(inst, opts, &mut ())
}

/// As [`solve_molp`], reporting the initial apex and every cut to `observer`.
pub fn solve_molp_observed(
    inst: &MolpInstance,
    opts: &SolveOptions,
    observer: &mut dyn SolveObserver,
) -> Result<SolveReport, BensonError> {
    let eps = opts.epsilon;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(BensonError::InvalidEpsilon(eps));
    }
    let mut efficient_set: Vec<Vec<f64>> = Vec::new();
    let apex = match &opts.initial_point {
        Some(y) => {
            if y.len() != inst.dim() {
                return Err(BensonError::InvalidInstance(format!(
                    "initial point has length {}, expected {}",
                    y.len(),
                    inst.dim()
                )));
            }
            if solve_lp(&inst.feasible_set_lp(vec![0.0; inst.num_vars()]))?.status
                == LpStatus::Infeasible
            {
                return Err(BensonError::Infeasible);
            }
            y.clone()
        }
        None => {
            let ideal = ideal_point(inst)?;
            for x in ideal.minimizers {
                push_unique(&mut efficient_set, x);
            }
            ideal.point
        }
    };

    let start = Instant::now();
    let mut state = VeState::init(opts.backend, &apex, &inst.cone)?;
    let ve_time = start.elapsed();
    observer.on_init(&apex)?;
    let (actual, artificial) = state.counts();
    let mut iterations = vec![IterationRecord {
        iteration: 0,
        vertex: None,
        alpha: None,
        cut: None,
        ve_time,
        actual,
        artificial,
    }];

    let mut verified: BTreeSet<u64> = BTreeSet::new();
    let mut scalarizations = 0;
    loop {
        let next = state
            .vertices()
            .into_iter()
            .find(|(key, _)| !verified.contains(key));
        let Some((key, v)) = next else { break };
        let res = scalarize(inst, &v)?;
        scalarizations += 1;
        push_unique(&mut efficient_set, res.x.clone());
        if res.alpha <= eps {
            verified.insert(key);
            continue;
        }
        if iterations.len() > opts.max_cuts {
            return Err(BensonError::CutLimit(opts.max_cuts));
        }
        let h = supporting_halfspace(&res)?;
        let start = Instant::now();
        let kind = state.cut(&h)?;
        let ve_time = start.elapsed();
        match kind {
            CutKind::Updated => {}
            CutKind::Unchanged => return Err(BensonError::Stalled { alpha: res.alpha }),
            CutKind::Empty => return Err(BensonError::EmptyOuter),
        }
        let iteration = iterations.len();
        observer.on_cut(&CutEvent {
            iteration,
            vertex: &v,
            alpha: res.alpha,
            halfspace: &h,
        })?;
        let (actual, artificial) = state.counts();
        iterations.push(IterationRecord {
            iteration,
            vertex: Some(v),
            alpha: Some(res.alpha),
            cut: Some(h),
            ve_time,
            actual,
            artificial,
        });
        let alive: BTreeSet<u64> = state.vertices().into_iter().map(|(k, _)| k).collect();
        verified.retain(|k| alive.contains(k));
    }

    let (outer, vertices) = state.into_outer(&inst.cone)?;
    Ok(SolveReport {
        outer,
        vertices,
        efficient_set,
        apex,
        epsilon: eps,
        backend: opts.backend,
        iterations,
        scalarizations,
    })
}

fn push_unique(set: &mut Vec<Vec<f64>>, x: Vec<f64>) {
    if !set
        .iter()
        .any(|y| distance(y, &x) <= 1e-9 * (1.0 + norm(&x)))
    {
        set.push(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `x >= 0, x1 + x2 >= 1`, `C = I`.
    fn demo() -> MolpInstance {
        MolpInstance::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![-1.0, -1.0]],
            vec![-1.0],
        )
        .unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && distance(a, b) <= tol
    }

    fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn ideal_point_examples() {
        let ip = ideal_point(&demo()).unwrap();
        assert!(close(&ip.point, &[0.0, 0.0], 1e-12));

        let neg = MolpInstance::new(
            vec![vec![-1.0, 0.0], vec![0.0, -1.0]],
            vec![vec![-1.0, -1.0]],
            vec![-1.0],
        )
        .unwrap();
        assert_eq!(ideal_point(&neg), Err(BensonError::Unbounded));

        let boxed = MolpInstance::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![2.0, 3.0],
        )
        .unwrap();
        assert!(close(
            &ideal_point(&boxed).unwrap().point,
            &[0.0, 0.0],
            1e-12
        ));

        let infeasible = MolpInstance::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1.0, 1.0]],
            vec![-1.0],
        )
        .unwrap();
        assert_eq!(ideal_point(&infeasible), Err(BensonError::Infeasible));
    }

    #[test]
    fn scalarization_examples() {
        let inst = demo();
        let r = scalarize(&inst, &[0.0, 0.0]).unwrap();
        assert!((r.alpha - 0.5).abs() < 1e-9);
        assert!(close(&r.y, &[0.5, 0.5], 1e-9));
        assert!(close(&r.w, &[0.5, 0.5], 1e-9));

        let r = scalarize(&inst, &[1.0, 1.0]).unwrap();
        assert!((r.alpha + 0.5).abs() < 1e-9);

        let r = scalarize(&inst, &[1.0, 0.0]).unwrap();
        assert!(r.alpha.abs() < 1e-9);
        assert!(close(&r.y, &[1.0, 0.0], 1e-9));
    }

    #[test]
    fn supporting_halfspace_examples() {
        let r = scalarize(&demo(), &[0.0, 0.0]).unwrap();
        let h = supporting_halfspace(&r).unwrap();
        assert!(close(h.normal(), &[0.5, 0.5], 1e-9));
        assert!((h.offset() - 0.5).abs() < 1e-9);
        assert_eq!(h.slack(&r.y), 0.0);

        let r = ScalarizationResult {
            x: vec![],
            alpha: 0.0,
            w: vec![1.0, 0.0],
            y: vec![2.0, 7.0],
        };
        let h = supporting_halfspace(&r).unwrap();
        assert_eq!(h.normal(), &[1.0, 0.0]);
        assert_eq!(h.offset(), 2.0);

        let zero = ScalarizationResult {
            w: vec![0.0, 0.0],
            ..r
        };
        assert_eq!(
            supporting_halfspace(&zero),
            Err(BensonError::DegenerateDual)
        );
    }

    #[test]
    fn demo_solves_with_one_cut_on_every_backend() {
        for backend in [
            Backend::Cone,
            Backend::Box { m: DEFAULT_M },
            Backend::Offline,
        ] {
            let rep = solve_molp(&demo(), &SolveOptions::new(0.005, backend)).unwrap();
            assert_eq!(rep.num_cuts(), 1, "{backend:?}");
            let first = rep.cuts().next().unwrap().normalized();
            let s = 0.5f64.sqrt();
            assert!(close(first.normal(), &[s, s], 1e-9));
            assert!((first.offset() - s).abs() < 1e-9);
            let v = sorted(rep.vertices.clone());
            assert_eq!(v.len(), 2, "{backend:?}");
            assert!(close(&v[0], &[0.0, 1.0], 1e-9));
            assert!(close(&v[1], &[1.0, 0.0], 1e-9));
            assert_eq!(rep.outer.num_directions(), 2);
            assert!(
                rep.outer.validate().is_empty(),
                "{:?}",
                rep.outer.validate()
            );
        }
    }

    #[test]
    fn large_epsilon_means_no_cuts() {
        let rep = solve_molp(&demo(), &SolveOptions::new(10.0, Backend::Cone)).unwrap();
        assert_eq!(rep.num_cuts(), 0);
        assert_eq!(rep.vertices, vec![vec![0.0, 0.0]]);
        assert_eq!(rep.iterations.len(), 1);
        // two argmins (1,0) and (0,1), plus the scalarization at the apex
        assert_eq!(rep.efficient_set.len(), 3);
    }

    #[test]
    fn box_iteration_zero_counts() {
        let rep = solve_molp(
            &demo(),
            &SolveOptions::new(0.005, Backend::Box { m: DEFAULT_M }),
        )
        .unwrap();
        let r0 = &rep.iterations[0];
        assert_eq!((r0.actual, r0.artificial), (1, 2));
    }

    #[test]
    fn rejects_bad_epsilon_and_k() {
        assert_eq!(
            solve_molp(&demo(), &SolveOptions::new(0.0, Backend::Cone)).unwrap_err(),
            BensonError::InvalidEpsilon(0.0)
        );
        assert!(demo().with_direction(vec![1.0, 0.0]).is_err());
        assert!(demo().with_direction(vec![2.0, 1.0]).is_ok());
    }

    #[test]
    fn general_cone_needs_a_start_point() {
        // cone spanned by (1,0) and (1,1): facets y2 >= 0 and y1 - y2 >= 0
        let cone = ConeDD::from_geometry(
            vec![vec![1.0, 0.0], vec![1.0, 1.0]],
            vec![
                Halfspace::new(vec![0.0, 1.0], 0.0).unwrap(),
                Halfspace::new(vec![1.0, -1.0], 0.0).unwrap(),
            ],
        )
        .unwrap();
        // x2 <= 2 keeps x1 - x2 bounded below, so (-2, 0) + K contains the image
        let inst = MolpInstance::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![-1.0, -1.0], vec![0.0, 1.0]],
            vec![-1.0, 2.0],
        )
        .unwrap()
        .with_cone(cone)
        .unwrap();
        assert_eq!(
            solve_molp(&inst, &SolveOptions::new(0.01, Backend::Cone)).unwrap_err(),
            BensonError::NeedsInitialPoint
        );
        let mut opts = SolveOptions::new(0.01, Backend::Cone);
        opts.initial_point = Some(vec![-2.0, 0.0]);
        let rep = solve_molp(&inst, &opts).unwrap();
        for v in &rep.vertices {
            assert!(scalarize(&inst, v).unwrap().alpha <= 0.01 + 1e-7);
        }
    }
}
