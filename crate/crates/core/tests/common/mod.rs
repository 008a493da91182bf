#![allow(dead_code)]

use ddmolp::benson::{scalarize, MolpInstance};
use ddmolp::dd::{
    init_box, init_cone, onlinevert2_in_place, onlinevert_in_place, strip_artificial, CutKind,
};
use ddmolp::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use ddmolp::oracle::{enumerate_vertices_brute, HRep};
use ddmolp::polyhedron::{standard_cone_dd, AdjacencyPolyhedron, Halfspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Hausdorff distance between two finite point sets; infinite when exactly
/// one of them is empty.
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let one_way = |p: &[Vec<f64>], q: &[Vec<f64>]| {
        p.iter()
            .map(|x| q.iter().map(|y| dist(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Same size and within `tol` of each other.
pub fn same_points(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.len() == b.len() && hausdorff(a, b) <= tol
}

/// A cut with small integer normal `a >= 0` that passes between the
/// current vertices, or through one of them with probability 1/5.
pub fn random_cut(rng: &mut ChaCha8Rng, vertices: &[Vec<f64>]) -> Halfspace {
    let d = vertices[0].len();
    loop {
        let a: Vec<f64> = (0..d).map(|_| rng.random_range(0..=4) as f64).collect();
        if a.iter().all(|&x| x == 0.0) {
            continue;
        }
        let vals: Vec<f64> = vertices.iter().map(|v| dot(&a, v)).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let b = if rng.random_bool(0.2) {
            vals[rng.random_range(0..vals.len())]
        } else if hi - lo > 1e-6 {
            lo + rng.random_range(0.05..0.95) * (hi - lo)
        } else {
            lo + rng.random_range(0.1..3.0)
        };
        return Halfspace::new(a, b).unwrap();
    }
}

/// Apex-at-origin H-representation of `R^d_+` intersected with `cuts`.
pub fn orthant_hrep(d: usize, cuts: &[Halfspace]) -> HRep {
    let mut hs: Vec<Halfspace> = (0..d)
        .map(|i| {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            Halfspace::new(e, 0.0).unwrap()
        })
        .collect();
    hs.extend(cuts.iter().cloned());
    let dirs = (0..d)
        .map(|i| {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            e
        })
        .collect();
    HRep::new(d, hs).with_recession_dirs(dirs)
}

/// Outcome of replaying one random cut sequence through both incremental
/// methods and the brute-force enumerator.
pub struct SequenceCheck {
    pub cuts: usize,
    /// Largest distance between the modified method and the oracle.
    pub oracle_gap: f64,
    pub oracle_count_mismatch: bool,
    /// Largest distance between stripped box chain and the modified method.
    pub box_gap: f64,
    pub box_count_mismatch: bool,
    pub validation_failures: usize,
}

pub fn check_sequence(d: usize, seed: u64, cuts: usize, with_box: bool) -> SequenceCheck {
    const M: f64 = 1e4;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cone = standard_cone_dd(d).unwrap();
    let apex = vec![0.0; d];
    let mut p = init_cone(&apex, &cone).unwrap();
    let mut applied = Vec::new();
    let mut history = Vec::new();
    let mut out = SequenceCheck {
        cuts,
        oracle_gap: 0.0,
        oracle_count_mismatch: false,
        box_gap: 0.0,
        box_count_mismatch: false,
        validation_failures: 0,
    };
    for _ in 0..cuts {
        let h = random_cut(&mut rng, &p.vertex_points());
        let kind = onlinevert2_in_place(&mut p, &h).unwrap().kind;
        assert_ne!(kind, CutKind::Empty);
        applied.push(h.clone());
        if !p.validate().is_empty() {
            out.validation_failures += 1;
        }
        let truth = enumerate_vertices_brute(&orthant_hrep(d, &applied))
            .unwrap()
            .vertices;
        let mine = p.vertex_points();
        out.oracle_gap = out.oracle_gap.max(hausdorff(&mine, &truth));
        out.oracle_count_mismatch |= mine.len() != truth.len();
        history.push(mine);
    }
    if !with_box {
        return out;
    }
    // Shrink the whole sequence towards the apex so every true vertex stays
    // well inside the box.
    let reach = history
        .iter()
        .flatten()
        .map(|v| v.iter().sum::<f64>())
        .fold(0.0, f64::max);
    let scale = if reach > 0.5 * M {
        0.5 * M / reach
    } else {
        1.0
    };
    let boxed = init_box(&apex, &cone, M).unwrap();
    let (mut q, f0) = (boxed.polyhedron, boxed.artificial_facet);
    for (h, mine) in applied.iter().zip(&history) {
        let h = Halfspace::new(h.normal().to_vec(), h.offset() * scale).unwrap();
        onlinevert_in_place(&mut q, &h).unwrap();
        if !q.validate().is_empty() {
            out.validation_failures += 1;
        }
        let stripped: Vec<Vec<f64>> = strip_artificial(&q, f0)
            .unwrap()
            .into_iter()
            .map(|v| v.coords)
            .collect();
        let expected: Vec<Vec<f64>> = mine
            .iter()
            .map(|v| v.iter().map(|x| x * scale).collect())
            .collect();
        out.box_gap = out.box_gap.max(hausdorff(&stripped, &expected));
        out.box_count_mismatch |= stripped.len() != expected.len();
    }
    out
}

/// Rebuilds adjacency from coordinates alone and compares with the
/// maintained maps.
pub fn adjacency_matches_geometry(p: &AdjacencyPolyhedron) -> bool {
    let vertices: Vec<_> = p.vertices().collect();
    let directions: Vec<_> = p.directions().collect();
    for f in p.facets() {
        let h = &f.halfspace;
        let members = p.members_of(f.id).unwrap();
        for v in &vertices {
            let on = h.slack(&v.coords).abs()
                <= 1e-8 * (1.0 + h.offset().abs() + norm(h.normal()) * norm(&v.coords));
            if on != members.contains(&v.id) {
                return false;
            }
        }
        let has_vertex = vertices.iter().any(|v| members.contains(&v.id));
        for z in &directions {
            let on = has_vertex
                && dot(h.normal(), &z.coords).abs()
                    <= 1e-8 * (1.0 + norm(h.normal()) * norm(&z.coords));
            if on != members.contains(&z.id) {
                return false;
            }
        }
    }
    true
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Feasible points of an instance: optimal solutions of random weighted
/// sums, mixed with each other and with the origin (feasible since
/// `b >= 0`), then nudged and kept only if still feasible.
pub fn sample_feasible(inst: &MolpInstance, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = inst.num_vars();
    let mut anchors: Vec<Vec<f64>> = vec![vec![0.0; n]];
    for _ in 0..count.min(10) {
        let w: Vec<f64> = (0..inst.dim())
            .map(|_| rng.random_range(0.0..1.0))
            .collect();
        let c: Vec<f64> = (0..n)
            .map(|j| {
                (0..inst.dim())
                    .map(|i| w[i] * inst.objectives()[i][j])
                    .sum()
            })
            .collect();
        let mut lp = LinearProgram::minimize(c);
        for (row, &bi) in inst.constraint_matrix().iter().zip(inst.rhs()) {
            lp = lp.subject_to(row.clone(), Relation::Le, bi);
        }
        let sol = solve_lp(&lp).unwrap();
        if sol.status == LpStatus::Optimal {
            anchors.push(sol.x);
        }
    }
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let i = rng.random_range(0..anchors.len());
        let j = rng.random_range(0..anchors.len());
        let t: f64 = rng.random_range(0.0..1.0);
        let x: Vec<f64> = anchors[i]
            .iter()
            .zip(&anchors[j])
            .map(|(a, b)| t * a + (1.0 - t) * b)
            .collect();
        let nudged: Vec<f64> = x
            .iter()
            .map(|xi| xi + rng.random_range(-0.05..0.05))
            .collect();
        if inst.is_feasible(&nudged, 0.0) {
            out.push(nudged);
        } else if inst.is_feasible(&x, 1e-9) {
            out.push(x);
        }
    }
    out
}

/// Largest alpha over re-scalarized points.
pub fn max_alpha(inst: &MolpInstance, points: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .map(|v| scalarize(inst, v).unwrap().alpha)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// True when `y` satisfies `h` up to a relative tolerance.
pub fn inside(h: &Halfspace, y: &[f64], tol: f64) -> bool {
    h.slack(y) >= -tol * (1.0 + h.offset().abs() + norm(h.normal()) * norm(y))
}
