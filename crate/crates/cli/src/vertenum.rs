use anyhow::{anyhow, bail, Result};
use ddmolp::dd::{
    init_box, init_cone, onlinevert2_in_place, onlinevert_in_place, strip_artificial, CutKind,
};
use ddmolp::lp::{solve_lp, Bound, LinearProgram, LpStatus, Relation};
use ddmolp::oracle::{enumerate_vertices_brute, HRep};
use ddmolp::polyhedron::{ConeDD, Halfspace};

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Offline,
    OnlineBox,
    OnlineCone,
}

pub enum Outcome {
    Empty,
    Found {
        vertices: Vec<Vec<f64>>,
        directions: Vec<Vec<f64>>,
    },
}

fn free_lp(objective: Vec<f64>) -> LinearProgram {
    let d = objective.len();
    (0..d).fold(LinearProgram::minimize(objective), |lp, i| {
        lp.with_bound(i, Bound::Free)
    })
}

fn with_rows(mut lp: LinearProgram, hs: &[Halfspace]) -> LinearProgram {
    for h in hs {
        lp = lp.subject_to(h.normal().to_vec(), Relation::Ge, h.offset());
    }
    lp
}

fn is_empty(dim: usize, hs: &[Halfspace]) -> Result<bool> {
    let sol = solve_lp(&with_rows(free_lp(vec![0.0; dim]), hs))?;
    Ok(sol.status == LpStatus::Infeasible)
}

/// True when `{z : a_i^T z >= 0}` is `{0}`.
fn is_bounded(dim: usize, hs: &[Halfspace]) -> Result<bool> {
    for i in 0..dim {
        for sign in [1.0, -1.0] {
            let mut c = vec![0.0; dim];
            c[i] = sign;
            let mut lp = free_lp(c);
            for h in hs {
                lp = lp.subject_to(h.normal().to_vec(), Relation::Ge, 0.0);
            }
            for j in 0..dim {
                let mut e = vec![0.0; dim];
                e[j] = 1.0;
                lp = lp.subject_to(e.clone(), Relation::Le, 1.0);
                lp = lp.subject_to(e, Relation::Ge, -1.0);
            }
            let sol = solve_lp(&lp)?;
            if sol.status == LpStatus::Optimal && sol.objective_value < -1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A point `y` with `P ⊆ {y} + K`: first `t_j = min a_j^T y` over `P` for
/// every cone facet, then any `y` with `a_j^T y <= t_j`.
fn start_point(dim: usize, hs: &[Halfspace], cone: &ConeDD) -> Result<Vec<f64>> {
    let mut bounds = Vec::new();
    for f in cone.facets() {
        let sol = solve_lp(&with_rows(free_lp(f.normal().to_vec()), hs))?;
        match sol.status {
            LpStatus::Optimal => bounds.push(sol.objective_value),
            _ => bail!("polyhedron is not contained in a translate of the cone"),
        }
    }
    let mut lp = free_lp(vec![0.0; dim]);
    for (f, t) in cone.facets().iter().zip(bounds) {
        lp = lp.subject_to(f.normal().to_vec(), Relation::Le, t);
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        bail!("no start point for the cone");
    }
    Ok(sol.x)
}

fn check_recession(hs: &[Halfspace], cone: &ConeDD) -> Result<()> {
    for z in cone.directions() {
        for h in hs {
            let s: f64 = h.normal().iter().zip(z).map(|(a, b)| a * b).sum();
            if s < -h.direction_tolerance(z) {
                bail!("cone direction {z:?} is not a recession direction of the polyhedron");
            }
        }
    }
    Ok(())
}

pub fn enumerate(
    dim: usize,
    hs: &[Halfspace],
    mode: Mode,
    m: f64,
    cone: &ConeDD,
) -> Result<Outcome> {
    if cone.dim() != dim {
        bail!("cone has dimension {}, polyhedron {dim}", cone.dim());
    }
    if is_empty(dim, hs)? {
        return Ok(Outcome::Empty);
    }
    let bounded = is_bounded(dim, hs)?;
    if !bounded {
        check_recession(hs, cone)?;
    }
    let directions = if bounded {
        Vec::new()
    } else {
        cone.directions().to_vec()
    };
    match mode {
        Mode::Offline => {
            let vertices = enumerate_vertices_brute(&HRep::new(dim, hs.to_vec()))?.vertices;
            if vertices.is_empty() {
                return Ok(Outcome::Empty);
            }
            if !bounded {
                // rec(P) ⊆ K, otherwise there is no start point
                start_point(dim, hs, cone)?;
            }
            Ok(Outcome::Found {
                vertices,
                directions,
            })
        }
        Mode::OnlineCone => {
            if bounded {
                bail!("online-cone needs an unbounded polyhedron whose recession cone is the given cone; use online-box or offline");
            }
            let y = start_point(dim, hs, cone)?;
            let mut p = init_cone(&y, cone)?;
            for h in hs {
                if onlinevert2_in_place(&mut p, h)?.kind == CutKind::Empty {
                    return Ok(Outcome::Empty);
                }
            }
            Ok(Outcome::Found {
                vertices: p.vertex_points(),
                directions: p.direction_points(),
            })
        }
        Mode::OnlineBox => {
            let y = start_point(dim, hs, cone).map_err(|e| {
                anyhow!("{e}; online-box starts from a truncated translate of the cone")
            })?;
            let start = init_box(&y, cone, m)?;
            let mut p = start.polyhedron;
            for h in hs {
                if onlinevert_in_place(&mut p, h)?.kind == CutKind::Empty {
                    return Ok(Outcome::Empty);
                }
            }
            let vertices = strip_artificial(&p, start.artificial_facet)?
                .into_iter()
                .map(|v| v.coords)
                .collect();
            Ok(Outcome::Found {
                vertices,
                directions,
            })
        }
    }
}
