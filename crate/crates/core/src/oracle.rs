//! Brute-force vertex enumeration from an H-representation.
//!
//! Every `d`-subset of boundary hyperplanes is intersected by solving a
//! `d x d` system; feasible solutions are the vertices. This is the ground
//! truth for the incremental methods and the offline baseline in
//! benchmarks. It is exponential in `d` and meant for small inputs only.

use thiserror::Error;

use crate::linalg::{distance, dot, norm, solve_in_place};
use crate::polyhedron::Halfspace;

/// Absolute tolerance on `a^T y - b` for a candidate to count as feasible.
pub const FEAS_TOL: f64 = 1e-7;
/// Relative distance under which two enumerated points are the same vertex.
pub const DEDUP_TOL: f64 = 1e-8;
/// Largest number of subsets the enumerator accepts.
pub const MAX_SUBSETS: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("halfspace {index} has dimension {got}, expected {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("{count} subsets exceed the limit of {MAX_SUBSETS}")]
    TooLarge { count: u128 },
    #[error("recession direction {index} violates halfspace {halfspace} (a^T z = {value:e})")]
    InconsistentDirection {
        index: usize,
        halfspace: usize,
        value: f64,
    },
}

/// An H-representation `{ y : a_i^T y >= b_i }`, optionally with the known
/// extreme directions of its recession cone.
#[derive(Clone, Debug, PartialEq)]
pub struct HRep {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    pub recession_dirs: Option<Vec<Vec<f64>>>,
}

impl HRep {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Self {
        Self {
            dim,
            halfspaces,
            recession_dirs: None,
        }
    }

    pub fn with_recession_dirs(mut self, dirs: Vec<Vec<f64>>) -> Self {
        self.recession_dirs = Some(dirs);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VRep {
    pub vertices: Vec<Vec<f64>>,
    pub directions: Vec<Vec<f64>>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Enumerates vertices of `h` by trying every `d`-subset of hyperplanes.
/// Vertices come out in the order of first discovery over subsets in
/// lexicographic order. Directions are passed through from
/// `recession_dirs` after checking each is a recession direction.
pub fn enumerate_vertices_brute(h: &HRep) -> Result<VRep, OracleError> {
    let d = h.dim;
    for (index, hs) in h.halfspaces.iter().enumerate() {
        if hs.dim() != d {
            return Err(OracleError::Dimension {
                index,
                expected: d,
                got: hs.dim(),
            });
        }
    }
    let mut directions = Vec::new();
    if let Some(dirs) = &h.recession_dirs {
        for (index, z) in dirs.iter().enumerate() {
            for (halfspace, hs) in h.halfspaces.iter().enumerate() {
                let value = dot(hs.normal(), z);
                if value < -1e-9 * (1.0 + norm(hs.normal()) * norm(z)) {
                    return Err(OracleError::InconsistentDirection {
                        index,
                        halfspace,
                        value,
                    });
                }
            }
            directions.push(z.clone());
        }
    }
    let k = h.halfspaces.len();
    let count = binomial(k, d);
    if count > MAX_SUBSETS {
        return Err(OracleError::TooLarge { count });
    }
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    if k < d {
        return Ok(VRep {
            vertices,
            directions,
        });
    }
    let mut idx: Vec<usize> = (0..d).collect();
    let mut mat = vec![0.0; d * d];
    let mut rhs = vec![0.0; d];
    loop {
        for (r, &i) in idx.iter().enumerate() {
            mat[r * d..(r + 1) * d].copy_from_slice(h.halfspaces[i].normal());
            rhs[r] = h.halfspaces[i].offset();
        }
        if solve_in_place(&mut mat, &mut rhs, d, 1e-12) {
            let y = &rhs;
            let ny = norm(y);
            let feasible = h.halfspaces.iter().all(|hs| hs.slack(y) >= -FEAS_TOL);
            if feasible {
                let tol = DEDUP_TOL * (1.0 + ny);
                if !vertices.iter().any(|v| distance(v, y) <= tol) {
                    vertices.push(y.clone());
                }
            }
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(VRep {
                    vertices,
                    directions,
                });
            }
            i -= 1;
            if idx[i] < k - d + i {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(a: &[f64], b: f64) -> Halfspace {
        Halfspace::new(a.to_vec(), b).unwrap()
    }

    fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    fn orthant2() -> Vec<Vec<f64>> {
        vec![vec![1.0, 0.0], vec![0.0, 1.0]]
    }

    #[test]
    fn cut_orthant() {
        let h = HRep::new(
            2,
            vec![
                hs(&[1.0, 0.0], 0.0),
                hs(&[0.0, 1.0], 0.0),
                hs(&[1.0, 1.0], 1.0),
            ],
        )
        .with_recession_dirs(orthant2());
        let v = enumerate_vertices_brute(&h).unwrap();
        assert_eq!(sorted(v.vertices), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(v.directions, orthant2());
    }

    #[test]
    fn unit_square() {
        let h = HRep::new(
            2,
            vec![
                hs(&[1.0, 0.0], 0.0),
                hs(&[0.0, 1.0], 0.0),
                hs(&[-1.0, 0.0], -1.0),
                hs(&[0.0, -1.0], -1.0),
            ],
        );
        let v = enumerate_vertices_brute(&h).unwrap();
        assert_eq!(v.vertices.len(), 4);
        assert!(v.directions.is_empty());
    }

    #[test]
    fn shifted_facet_cuts_origin() {
        let h = HRep::new(
            2,
            vec![
                hs(&[1.0, 0.0], 0.0),
                hs(&[0.0, 1.0], 0.0),
                hs(&[1.0, 0.0], 1.0),
            ],
        )
        .with_recession_dirs(orthant2());
        let v = enumerate_vertices_brute(&h).unwrap();
        assert_eq!(v.vertices, vec![vec![1.0, 0.0]]);
        assert_eq!(v.directions.len(), 2);
    }

    #[test]
    fn inconsistent_direction_is_an_error() {
        let h = HRep::new(2, vec![hs(&[1.0, -1.0], 0.0), hs(&[0.0, 1.0], 0.0)])
            .with_recession_dirs(orthant2());
        assert!(matches!(
            enumerate_vertices_brute(&h),
            Err(OracleError::InconsistentDirection { index: 1, .. })
        ));
    }

    #[test]
    fn guard_against_explosion() {
        let many: Vec<Halfspace> = (0..400)
            .map(|i| hs(&[1.0, i as f64, 1.0, 0.0, 2.0], 0.0))
            .collect();
        let h = HRep::new(5, many);
        assert!(matches!(
            enumerate_vertices_brute(&h),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(40, 4), 91_390);
        assert_eq!(binomial(3, 4), 0);
    }
}
