//! Online vertex enumeration by the double description method.
//!
//! [`onlinevert`] intersects a bounded polyhedron with one halfspace.
//! [`onlinevert2`] does the same for an unbounded polyhedron whose recession
//! cone is known and unchanged by the cut; extreme directions take part in
//! the edge search as if they were vertices. Both keep the vertex/facet
//! adjacency lists up to date, which is what makes the edge test
//! ([`isedge`]) purely combinatorial.
//!
//! [`init_box`] and [`init_cone`] build the starting polyhedron `{y} + K`
//! either truncated by an artificial facet or left unbounded.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::linalg::{distance, dot, norm};
use crate::polyhedron::{
    AdjacencyPolyhedron, ConeDD, FacetId, Halfspace, MemberId, PolyError, Side, Vertex, TAU_CLASS,
    TAU_DUP,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DdError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("unknown member id {0}")]
    UnknownMember(MemberId),
    #[error("{0} is not a vertex")]
    NotAVertex(MemberId),
    #[error("dimension mismatch: polyhedron is {expected}-dimensional, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate segment: a^T(v+ - v-) = {denominator:e}")]
    DegenerateSegment { denominator: f64 },
    #[error("ray parallel to hyperplane: a^T z = {value:e}")]
    ParallelRay { value: f64 },
    #[error("polyhedron has {0} directions; the bounded method does not apply")]
    Unbounded(usize),
    #[error("cut would shrink the recession cone: direction {direction} has a^T z = {value:e}")]
    RecessionConeViolation { direction: MemberId, value: f64 },
    #[error("box size M must be positive and finite, got {0}")]
    InvalidScale(f64),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CutKind {
    /// Every vertex satisfies the halfspace; nothing changed.
    Unchanged,
    /// The intersection is empty.
    Empty,
    Updated,
}

/// Result of [`onlinevert`] / [`onlinevert2`].
#[derive(Clone, Debug)]
pub struct CutOutcome {
    pub kind: CutKind,
    /// `P ∩ H`; absent when the intersection is empty.
    pub polyhedron: Option<AdjacencyPolyhedron>,
    /// Id of the boundary hyperplane as a new facet, when one was added.
    pub new_facet: Option<FacetId>,
}

/// What an in-place cut did to the polyhedron.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CutReport {
    pub kind: CutKind,
    pub new_facet: Option<FacetId>,
}

/// Facets shared by `x_plus` and `x_minus` if the two span an edge, else the
/// empty set. `x_plus` may be a direction, in which case the edge is the ray
/// from `x_minus` along it.
pub fn isedge(
    p: &AdjacencyPolyhedron,
    x_plus: MemberId,
    x_minus: MemberId,
) -> Result<BTreeSet<FacetId>, DdError> {
    if p.facets_of(x_plus).is_none() {
        return Err(DdError::UnknownMember(x_plus));
    }
    if !p.is_vertex(x_minus) {
        return Err(match p.facets_of(x_minus) {
            None => DdError::UnknownMember(x_minus),
            Some(_) => DdError::NotAVertex(x_minus),
        });
    }
    Ok(edge_facets(p, x_plus, x_minus))
}

fn edge_facets(p: &AdjacencyPolyhedron, x_plus: MemberId, x_minus: MemberId) -> BTreeSet<FacetId> {
    let (Some(fp), Some(fm)) = (p.facets_of(x_plus), p.facets_of(x_minus)) else {
        return BTreeSet::new();
    };
    let common: BTreeSet<FacetId> = fp.intersection(fm).copied().collect();
    let mut iter = common.iter();
    let Some(first) = iter.next() else {
        // the running intersection stays the full member set
        return common;
    };
    let mut acc: Vec<MemberId> = p
        .members_of(*first)
        .map(|ms| ms.iter().copied().collect())
        .unwrap_or_default();
    for f in iter {
        if acc.len() <= 2 {
            break;
        }
        let ms = p.members_of(*f).expect("adjacency is symmetric");
        acc.retain(|m| ms.contains(m));
    }
    let is_edge = acc.len() == 2 && acc.contains(&x_plus) && acc.contains(&x_minus);
    if is_edge {
        common
    } else {
        BTreeSet::new()
    }
}

/// `[v_plus, v_minus] ∩ h` for `v_plus` strictly inside and `v_minus`
/// strictly outside the halfspace.
pub fn segment_hyperplane_intersection(
    v_plus: &[f64],
    v_minus: &[f64],
    h: &Halfspace,
) -> Result<Vec<f64>, DdError> {
    check_len(h.dim(), v_plus.len())?;
    check_len(h.dim(), v_minus.len())?;
    let sp = dot(h.normal(), v_plus);
    let sm = dot(h.normal(), v_minus);
    let denom = sp - sm;
    let tol =
        TAU_CLASS * (1.0 + h.offset().abs() + norm(h.normal()) * norm(v_plus).max(norm(v_minus)));
    if denom.abs() <= tol {
        return Err(DdError::DegenerateSegment { denominator: denom });
    }
    let lambda = (h.offset() - sm) / denom;
    Ok(v_minus
        .iter()
        .zip(v_plus)
        .map(|(m, p)| m + lambda * (p - m))
        .collect())
}

/// `{v_minus + γ z : γ >= 0} ∩ h` for `v_minus` outside the halfspace and
/// `a^T z > 0`.
pub fn ray_hyperplane_intersection(
    v_minus: &[f64],
    z: &[f64],
    h: &Halfspace,
) -> Result<Vec<f64>, DdError> {
    check_len(h.dim(), v_minus.len())?;
    check_len(h.dim(), z.len())?;
    let az = dot(h.normal(), z);
    if az.abs() <= h.direction_tolerance(z) {
        return Err(DdError::ParallelRay { value: az });
    }
    let gamma = (h.offset() - dot(h.normal(), v_minus)) / az;
    Ok(v_minus
        .iter()
        .zip(z)
        .map(|(v, zi)| v + gamma * zi)
        .collect())
}

fn check_len(expected: usize, got: usize) -> Result<(), DdError> {
    if expected == got {
        Ok(())
    } else {
        Err(DdError::DimensionMismatch { expected, got })
    }
}

/// `P ∩ H` for a bounded polyhedron.
pub fn onlinevert(p: &AdjacencyPolyhedron, h: &Halfspace) -> Result<CutOutcome, DdError> {
    let mut q = p.clone();
    let report = onlinevert_in_place(&mut q, h)?;
    Ok(outcome(q, report))
}

/// `P ∩ H` for an unbounded polyhedron whose recession cone is spanned by
/// its stored directions and is not changed by the cut.
pub fn onlinevert2(p: &AdjacencyPolyhedron, h: &Halfspace) -> Result<CutOutcome, DdError> {
    let mut q = p.clone();
    let report = onlinevert2_in_place(&mut q, h)?;
    Ok(outcome(q, report))
}

fn outcome(q: AdjacencyPolyhedron, report: CutReport) -> CutOutcome {
    CutOutcome {
        kind: report.kind,
        polyhedron: (report.kind != CutKind::Empty).then_some(q),
        new_facet: report.new_facet,
    }
}

/// In-place form of [`onlinevert`]. On `Empty` or on error the polyhedron
/// is left untouched.
pub fn onlinevert_in_place(
    p: &mut AdjacencyPolyhedron,
    h: &Halfspace,
) -> Result<CutReport, DdError> {
    if !p.is_bounded() {
        return Err(DdError::Unbounded(p.num_directions()));
    }
    cut(p, h, None)
}

/// In-place form of [`onlinevert2`]. On `Empty` or on error the polyhedron
/// is left untouched.
pub fn onlinevert2_in_place(
    p: &mut AdjacencyPolyhedron,
    h: &Halfspace,
) -> Result<CutReport, DdError> {
    cut(p, h, None)
}

struct NewVertex {
    coords: Vec<f64>,
    facets: BTreeSet<FacetId>,
}

/// Shared cut routine. Directions (if any) join the outer loop; for a
/// bounded polyhedron this is exactly the standard method. `shuffle`
/// permutes the outer loop, which must not change the result.
pub(crate) fn cut(
    p: &mut AdjacencyPolyhedron,
    h: &Halfspace,
    shuffle: Option<u64>,
) -> Result<CutReport, DdError> {
    check_len(p.dim(), h.dim())?;

    let mut plus = Vec::new();
    let mut zero = Vec::new();
    let mut minus = Vec::new();
    for v in p.vertices() {
        match h.classify_point(&v.coords) {
            Side::Interior => plus.push(v.id),
            Side::Boundary => zero.push(v.id),
            Side::Exterior => minus.push(v.id),
        }
    }
    let mut dir_plus = Vec::new();
    let mut dir_parallel = Vec::new();
    for z in p.directions() {
        match h.classify_direction(&z.coords) {
            Side::Interior => dir_plus.push(z.id),
            Side::Boundary => dir_parallel.push(z.id),
            Side::Exterior => {
                return Err(DdError::RecessionConeViolation {
                    direction: z.id,
                    value: dot(h.normal(), &z.coords),
                })
            }
        }
    }

    if minus.is_empty() {
        return Ok(CutReport {
            kind: CutKind::Unchanged,
            new_facet: None,
        });
    }
    if plus.is_empty() && zero.is_empty() && dir_plus.is_empty() {
        return Ok(CutReport {
            kind: CutKind::Empty,
            new_facet: None,
        });
    }

    // Edges crossing h, computed against the adjacency of P before any update.
    let mut outer: Vec<MemberId> = plus.iter().chain(&dir_plus).copied().collect();
    if let Some(seed) = shuffle {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        outer.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    }
    let mut fresh: Vec<NewVertex> = Vec::new();
    for &xp in &outer {
        let is_direction = p.is_direction(xp);
        let xp_coords = p.coords(xp).expect("classified member exists");
        for &xm in &minus {
            let facets = edge_facets(p, xp, xm);
            if facets.is_empty() {
                continue;
            }
            let vm = &p.vertex(xm).expect("classified vertex exists").coords;
            let coords = if is_direction {
                ray_hyperplane_intersection(vm, xp_coords, h)?
            } else {
                segment_hyperplane_intersection(xp_coords, vm, h)?
            };
            fresh.push(NewVertex { coords, facets });
        }
    }

    let hid = p.add_facet(h.clone())?;
    for &v in zero.iter().chain(&dir_parallel) {
        p.link(v, hid)?;
    }
    let minus_set: BTreeSet<MemberId> = minus.iter().copied().collect();
    for nv in fresh {
        let id = match find_duplicate(p, &nv.coords, &minus_set) {
            Some(existing) => existing,
            None => p.add_vertex(nv.coords)?,
        };
        for f in nv.facets {
            p.link(id, f)?;
        }
        p.link(id, hid)?;
    }
    for v in minus {
        p.remove_vertex(v);
    }
    p.drop_vertexless_facets();
    Ok(CutReport {
        kind: CutKind::Updated,
        new_facet: Some(hid),
    })
}

fn find_duplicate(
    p: &AdjacencyPolyhedron,
    x: &[f64],
    exclude: &BTreeSet<MemberId>,
) -> Option<MemberId> {
    let tol = TAU_DUP * (1.0 + norm(x));
    p.vertices()
        .filter(|v| !exclude.contains(&v.id))
        .find(|v| distance(&v.coords, x) <= tol)
        .map(|v| v.id)
}

/// Bounded start `{y} + conv{0, M z^1, .., M z^m}` together with the id of
/// the artificial facet `f^0` through the far corners.
#[derive(Clone, Debug)]
pub struct BoxInit {
    pub polyhedron: AdjacencyPolyhedron,
    pub artificial_facet: FacetId,
}

/// Builds the truncated start polyhedron. Directions are rescaled so that
/// all `M z^i` lie on one hyperplane `c^T y = M`, where `c` is the sum of
/// the cone's facet normals; for `R^d_+` this leaves `e^i` unchanged.
pub fn init_box(y: &[f64], cone: &ConeDD, m: f64) -> Result<BoxInit, DdError> {
    check_len(cone.dim(), y.len())?;
    if !(m > 0.0 && m.is_finite()) {
        return Err(DdError::InvalidScale(m));
    }
    let d = cone.dim();
    let mut c = vec![0.0; d];
    for h in cone.facets() {
        for (ci, ai) in c.iter_mut().zip(h.normal()) {
            *ci += ai;
        }
    }
    let mut p = AdjacencyPolyhedron::new(d)?;
    let v0 = p.add_vertex(y.to_vec())?;
    let mut corners = Vec::with_capacity(cone.directions().len());
    for z in cone.directions() {
        let s = dot(&c, z);
        if s <= 0.0 {
            return Err(
                PolyError::InvalidCone("direction not in cone interior halfspace".into()).into(),
            );
        }
        let corner: Vec<f64> = y.iter().zip(z).map(|(yi, zi)| yi + m * zi / s).collect();
        corners.push(p.add_vertex(corner)?);
    }
    let shifted = shifted_facets(&mut p, y, cone)?;
    let f0 = p.add_facet(Halfspace::new(
        c.iter().map(|x| -x).collect(),
        -(dot(&c, y) + m),
    )?)?;
    for (j, &fj) in shifted.iter().enumerate() {
        p.link(v0, fj)?;
        for &i in cone.directions_of_facet(j) {
            p.link(corners[i], fj)?;
        }
    }
    for &vi in &corners {
        p.link(vi, f0)?;
    }
    Ok(BoxInit {
        polyhedron: p,
        artificial_facet: f0,
    })
}

/// Builds the unbounded start polyhedron `{y} + K` with a single vertex.
pub fn init_cone(y: &[f64], cone: &ConeDD) -> Result<AdjacencyPolyhedron, DdError> {
    check_len(cone.dim(), y.len())?;
    let mut p = AdjacencyPolyhedron::new(cone.dim())?;
    let v0 = p.add_vertex(y.to_vec())?;
    let dirs = cone
        .directions()
        .iter()
        .map(|z| p.add_direction(z.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let shifted = shifted_facets(&mut p, y, cone)?;
    for (j, &fj) in shifted.iter().enumerate() {
        p.link(v0, fj)?;
        for &i in cone.directions_of_facet(j) {
            p.link(dirs[i], fj)?;
        }
    }
    Ok(p)
}

/// Adds `{y} + f~_j` for every cone facet.
fn shifted_facets(
    p: &mut AdjacencyPolyhedron,
    y: &[f64],
    cone: &ConeDD,
) -> Result<Vec<FacetId>, DdError> {
    cone.facets()
        .iter()
        .map(|h| {
            let a = h.normal().to_vec();
            let b = dot(&a, y);
            Ok(p.add_facet(Halfspace::new(a, b)?)?)
        })
        .collect()
}

/// Vertices not adjacent to the artificial facet `f0`. If `f0` has been
/// dropped (no vertex left on it) every vertex is returned.
pub fn strip_artificial(p: &AdjacencyPolyhedron, f0: FacetId) -> Result<Vec<Vertex>, DdError> {
    if !p.facet_id_allocated(f0) {
        return Err(PolyError::UnknownFacet(f0).into());
    }
    let artificial = p.members_of(f0);
    Ok(p.vertices()
        .filter(|v| artificial.is_none_or(|ms| !ms.contains(&v.id)))
        .cloned()
        .collect())
}
