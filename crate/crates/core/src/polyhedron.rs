//! Polyhedra in double description form.
//!
//! An [`AdjacencyPolyhedron`] keeps both representations of a pointed convex
//! polyhedron at once: its vertices and extreme directions, its facets as
//! halfspaces `a^T y >= b`, and the incidence between the two. Vertices and
//! directions share one id space ("members"); facets have their own. Ids
//! come from monotone counters and are never reused, so a stale id held by a
//! caller can always be told apart from a live one.
//!
//! The orthant `R^d_+` and other ordering cones are described by [`ConeDD`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::linalg::{dot, norm, rank};

/// Relative tolerance for classifying a point against a hyperplane.
pub const TAU_CLASS: f64 = 1e-9;
/// Tolerance for on-facet checks in validation and adjacency reconstruction.
pub const TAU_ON: f64 = 1e-8;
/// Relative distance under which two vertices are identified.
pub const TAU_DUP: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("expected a vector of length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("halfspace normal is zero")]
    ZeroNormal,
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("unknown member id {0}")]
    UnknownMember(MemberId),
    #[error("unknown facet id {0}")]
    UnknownFacet(FacetId),
    #[error("invalid cone: {0}")]
    InvalidCone(String),
}

/// Id of a vertex or a direction.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemberId(pub usize);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetId(pub usize);

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

impl fmt::Display for FacetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

/// Where a point (or direction) sits relative to a halfspace.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Interior,
    Boundary,
    Exterior,
}

/// The closed halfspace `{ y : a^T y >= b }`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    a: Vec<f64>,
    b: f64,
}

impl Halfspace {
    pub fn new(a: Vec<f64>, b: f64) -> Result<Self, PolyError> {
        if a.len() < 2 {
            return Err(PolyError::Dimension(a.len()));
        }
        if !b.is_finite() || a.iter().any(|x| !x.is_finite()) {
            return Err(PolyError::NonFinite);
        }
        if norm(&a) == 0.0 {
            return Err(PolyError::ZeroNormal);
        }
        Ok(Self { a, b })
    }

    pub fn normal(&self) -> &[f64] {
        &self.a
    }

    pub fn offset(&self) -> f64 {
        self.b
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `a^T y - b`; positive strictly inside, zero on the boundary hyperplane.
    pub fn slack(&self, y: &[f64]) -> f64 {
        dot(&self.a, y) - self.b
    }

    pub fn point_tolerance(&self, y: &[f64]) -> f64 {
        TAU_CLASS * (1.0 + self.b.abs() + norm(&self.a) * norm(y))
    }

    pub fn direction_tolerance(&self, z: &[f64]) -> f64 {
        TAU_CLASS * (1.0 + norm(&self.a) * norm(z))
    }

    pub fn classify_point(&self, y: &[f64]) -> Side {
        side_of(self.slack(y), self.point_tolerance(y))
    }

    /// Sign of `a^T z` for a recession direction `z`.
    pub fn classify_direction(&self, z: &[f64]) -> Side {
        side_of(dot(&self.a, z), self.direction_tolerance(z))
    }

    /// True when `y` satisfies the inequality up to `tol` (absolute).
    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        self.slack(y) >= -tol
    }

    /// Same halfspace with the normal scaled to unit length.
    pub fn normalized(&self) -> Halfspace {
        let s = norm(&self.a);
        Halfspace {
            a: self.a.iter().map(|x| x / s).collect(),
            b: self.b / s,
        }
    }
}

fn side_of(value: f64, tol: f64) -> Side {
    if value > tol {
        Side::Interior
    } else if value < -tol {
        Side::Exterior
    } else {
        Side::Boundary
    }
}

/// Scale used for on-facet checks: `TAU_ON * (1 + |b| + |a||y|)`.
pub(crate) fn on_facet_tolerance(h: &Halfspace, y: &[f64]) -> f64 {
    TAU_ON * (1.0 + h.offset().abs() + norm(h.normal()) * norm(y))
}

pub(crate) fn on_direction_tolerance(h: &Halfspace, z: &[f64]) -> f64 {
    TAU_ON * (1.0 + norm(h.normal()) * norm(z))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub id: MemberId,
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    pub id: MemberId,
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub id: FacetId,
    pub halfspace: Halfspace,
}

/// A pointed polyhedron with vertex/direction/facet adjacency lists.
#[derive(Clone, Debug)]
pub struct AdjacencyPolyhedron {
    dim: usize,
    vertices: BTreeMap<MemberId, Vertex>,
    directions: BTreeMap<MemberId, Direction>,
    facets: BTreeMap<FacetId, Facet>,
    facets_of: BTreeMap<MemberId, BTreeSet<FacetId>>,
    members_of: BTreeMap<FacetId, BTreeSet<MemberId>>,
    next_member: usize,
    next_facet: usize,
}

impl AdjacencyPolyhedron {
    pub fn new(dim: usize) -> Result<Self, PolyError> {
        if dim < 2 {
            return Err(PolyError::Dimension(dim));
        }
        Ok(Self {
            dim,
            vertices: BTreeMap::new(),
            directions: BTreeMap::new(),
            facets: BTreeMap::new(),
            facets_of: BTreeMap::new(),
            members_of: BTreeMap::new(),
            next_member: 0,
            next_facet: 0,
        })
    }

    /// Builds a polyhedron from explicit vertex, direction and halfspace
    /// lists, deriving adjacency from the geometry: a vertex lies on a
    /// facet when its slack is within the on-facet tolerance, a direction
    /// lies on a facet when it is orthogonal to the normal and the facet has
    /// at least one vertex. Halfspaces touching no vertex are dropped.
    pub fn from_parts(
        dim: usize,
        vertices: &[Vec<f64>],
        directions: &[Vec<f64>],
        halfspaces: &[Halfspace],
    ) -> Result<Self, PolyError> {
        let mut p = Self::new(dim)?;
        let vids = vertices
            .iter()
            .map(|v| p.add_vertex(v.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let zids = directions
            .iter()
            .map(|z| p.add_direction(z.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        for h in halfspaces {
            let on: Vec<MemberId> = vids
                .iter()
                .zip(vertices)
                .filter(|(_, v)| h.slack(v).abs() <= on_facet_tolerance(h, v))
                .map(|(id, _)| *id)
                .collect();
            if on.is_empty() {
                continue;
            }
            let fid = p.add_facet(h.clone())?;
            for id in on {
                p.link(id, fid)?;
            }
            for (id, z) in zids.iter().zip(directions) {
                if dot(h.normal(), z).abs() <= on_direction_tolerance(h, z) {
                    p.link(*id, fid)?;
                }
            }
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_directions(&self) -> usize {
        self.directions.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn is_bounded(&self) -> bool {
        self.directions.is_empty()
    }

    /// Vertices in creation order.
    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn directions(&self) -> impl Iterator<Item = &Direction> {
        self.directions.values()
    }

    pub fn facets(&self) -> impl Iterator<Item = &Facet> {
        self.facets.values()
    }

    pub fn vertex(&self, id: MemberId) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn direction(&self, id: MemberId) -> Option<&Direction> {
        self.directions.get(&id)
    }

    pub fn facet(&self, id: FacetId) -> Option<&Facet> {
        self.facets.get(&id)
    }

    pub fn is_vertex(&self, id: MemberId) -> bool {
        self.vertices.contains_key(&id)
    }

    pub fn is_direction(&self, id: MemberId) -> bool {
        self.directions.contains_key(&id)
    }

    /// Coordinates of a vertex or a direction.
    pub fn coords(&self, id: MemberId) -> Option<&[f64]> {
        self.vertices
            .get(&id)
            .map(|v| v.coords.as_slice())
            .or_else(|| self.directions.get(&id).map(|z| z.coords.as_slice()))
    }

    /// `F_v` / `F_z`.
    pub fn facets_of(&self, id: MemberId) -> Option<&BTreeSet<FacetId>> {
        self.facets_of.get(&id)
    }

    /// `V_f`, holding vertex and direction ids alike.
    pub fn members_of(&self, id: FacetId) -> Option<&BTreeSet<MemberId>> {
        self.members_of.get(&id)
    }

    /// True if `id` was handed out by this polyhedron at some point, even if
    /// the facet has since been dropped.
    pub fn facet_id_allocated(&self, id: FacetId) -> bool {
        id.0 < self.next_facet
    }

    pub fn vertex_points(&self) -> Vec<Vec<f64>> {
        self.vertices.values().map(|v| v.coords.clone()).collect()
    }

    pub fn direction_points(&self) -> Vec<Vec<f64>> {
        self.directions.values().map(|z| z.coords.clone()).collect()
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.facets.values().map(|f| f.halfspace.clone()).collect()
    }

    fn check_vector(&self, v: &[f64]) -> Result<(), PolyError> {
        if v.len() != self.dim {
            return Err(PolyError::Length {
                expected: self.dim,
                got: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(PolyError::NonFinite);
        }
        Ok(())
    }

    pub fn add_vertex(&mut self, coords: Vec<f64>) -> Result<MemberId, PolyError> {
        self.check_vector(&coords)?;
        let id = MemberId(self.next_member);
        self.next_member += 1;
        self.vertices.insert(id, Vertex { id, coords });
        self.facets_of.insert(id, BTreeSet::new());
        Ok(id)
    }

    pub fn add_direction(&mut self, coords: Vec<f64>) -> Result<MemberId, PolyError> {
        self.check_vector(&coords)?;
        if norm(&coords) == 0.0 {
            return Err(PolyError::ZeroDirection);
        }
        let id = MemberId(self.next_member);
        self.next_member += 1;
        self.directions.insert(id, Direction { id, coords });
        self.facets_of.insert(id, BTreeSet::new());
        Ok(id)
    }

    pub fn add_facet(&mut self, halfspace: Halfspace) -> Result<FacetId, PolyError> {
        if halfspace.dim() != self.dim {
            return Err(PolyError::Length {
                expected: self.dim,
                got: halfspace.dim(),
            });
        }
        let id = FacetId(self.next_facet);
        self.next_facet += 1;
        self.facets.insert(id, Facet { id, halfspace });
        self.members_of.insert(id, BTreeSet::new());
        Ok(id)
    }

    /// Records that `member` lies on `facet`, on both sides of the map.
    pub fn link(&mut self, member: MemberId, facet: FacetId) -> Result<(), PolyError> {
        let fs = self
            .facets_of
            .get_mut(&member)
            .ok_or(PolyError::UnknownMember(member))?;
        let ms = self
            .members_of
            .get_mut(&facet)
            .ok_or(PolyError::UnknownFacet(facet))?;
        fs.insert(facet);
        ms.insert(member);
        Ok(())
    }

    pub fn unlink(&mut self, member: MemberId, facet: FacetId) -> bool {
        let a = self
            .facets_of
            .get_mut(&member)
            .is_some_and(|s| s.remove(&facet));
        let b = self
            .members_of
            .get_mut(&facet)
            .is_some_and(|s| s.remove(&member));
        a || b
    }

    /// Removes a vertex and purges it from every member list.
    pub fn remove_vertex(&mut self, id: MemberId) -> Option<Vertex> {
        let v = self.vertices.remove(&id)?;
        if let Some(fs) = self.facets_of.remove(&id) {
            for f in fs {
                if let Some(ms) = self.members_of.get_mut(&f) {
                    ms.remove(&id);
                }
            }
        }
        Some(v)
    }

    /// Removes a facet and purges it from every `F_v` / `F_z`.
    pub fn remove_facet(&mut self, id: FacetId) -> Option<Facet> {
        let f = self.facets.remove(&id)?;
        if let Some(ms) = self.members_of.remove(&id) {
            for m in ms {
                if let Some(fs) = self.facets_of.get_mut(&m) {
                    fs.remove(&id);
                }
            }
        }
        Some(f)
    }

    /// Drops every facet not adjacent to at least one vertex.
    pub(crate) fn drop_vertexless_facets(&mut self) {
        let keep: BTreeSet<FacetId> = self
            .vertices
            .keys()
            .flat_map(|v| self.facets_of[v].iter().copied())
            .collect();
        let dead: Vec<FacetId> = self
            .facets
            .keys()
            .filter(|f| !keep.contains(f))
            .copied()
            .collect();
        for f in dead {
            self.remove_facet(f);
        }
    }

    /// Checks every structural and geometric invariant. Returns an empty
    /// list when the polyhedron is consistent.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (m, fs) in &self.facets_of {
            for f in fs {
                match self.members_of.get(f) {
                    None => out.push(Violation::DanglingFacet {
                        member: *m,
                        facet: *f,
                    }),
                    Some(ms) if !ms.contains(m) => out.push(Violation::AsymmetricLink {
                        member: *m,
                        facet: *f,
                        listed_in: LinkSide::FacetsOfMember,
                    }),
                    _ => {}
                }
            }
        }
        for (f, ms) in &self.members_of {
            for m in ms {
                match self.facets_of.get(m) {
                    None => out.push(Violation::DanglingMember {
                        facet: *f,
                        member: *m,
                    }),
                    Some(fs) if !fs.contains(f) => out.push(Violation::AsymmetricLink {
                        member: *m,
                        facet: *f,
                        listed_in: LinkSide::MembersOfFacet,
                    }),
                    _ => {}
                }
            }
        }
        for v in self.vertices.values() {
            let count = self.facets_of.get(&v.id).map_or(0, BTreeSet::len);
            if count < self.dim {
                out.push(Violation::TooFewFacets {
                    member: v.id,
                    count,
                    required: self.dim,
                });
            }
        }
        for z in self.directions.values() {
            let count = self.facets_of.get(&z.id).map_or(0, BTreeSet::len);
            if count < self.dim - 1 {
                out.push(Violation::TooFewFacets {
                    member: z.id,
                    count,
                    required: self.dim - 1,
                });
            }
        }
        for f in self.facets.values() {
            let h = &f.halfspace;
            let members = self.members_of.get(&f.id);
            for v in self.vertices.values() {
                let s = h.slack(&v.coords);
                let tol = on_facet_tolerance(h, &v.coords);
                if s < -tol {
                    out.push(Violation::OutsideFacet {
                        member: v.id,
                        facet: f.id,
                        residual: s,
                    });
                }
                if members.is_some_and(|ms| ms.contains(&v.id)) && s.abs() > tol {
                    out.push(Violation::OffFacet {
                        member: v.id,
                        facet: f.id,
                        residual: s,
                    });
                }
            }
            for z in self.directions.values() {
                let s = dot(h.normal(), &z.coords);
                let tol = on_direction_tolerance(h, &z.coords);
                if s < -tol {
                    out.push(Violation::OutsideFacet {
                        member: z.id,
                        facet: f.id,
                        residual: s,
                    });
                }
                if members.is_some_and(|ms| ms.contains(&z.id)) && s.abs() > tol {
                    out.push(Violation::OffFacet {
                        member: z.id,
                        facet: f.id,
                        residual: s,
                    });
                }
            }
        }
        out
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LinkSide {
    /// The facet appears in `F_x` but `x` is missing from `V_f`.
    FacetsOfMember,
    /// The member appears in `V_f` but `f` is missing from `F_x`.
    MembersOfFacet,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    AsymmetricLink {
        member: MemberId,
        facet: FacetId,
        listed_in: LinkSide,
    },
    DanglingFacet {
        member: MemberId,
        facet: FacetId,
    },
    DanglingMember {
        facet: FacetId,
        member: MemberId,
    },
    TooFewFacets {
        member: MemberId,
        count: usize,
        required: usize,
    },
    /// A vertex violates a facet inequality, or a direction points out of it.
    OutsideFacet {
        member: MemberId,
        facet: FacetId,
        residual: f64,
    },
    /// An adjacent member does not lie on the facet hyperplane.
    OffFacet {
        member: MemberId,
        facet: FacetId,
        residual: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AsymmetricLink {
                member,
                facet,
                listed_in,
            } => match listed_in {
                LinkSide::FacetsOfMember => write!(
                    f,
                    "symmetric adjacency: {facet} in F_{member} but {member} not in V_{facet}"
                ),
                LinkSide::MembersOfFacet => write!(
                    f,
                    "symmetric adjacency: {member} in V_{facet} but {facet} not in F_{member}"
                ),
            },
            Violation::DanglingFacet { member, facet } => {
                write!(f, "dangling id: F_{member} names unknown facet {facet}")
            }
            Violation::DanglingMember { facet, member } => {
                write!(f, "dangling id: V_{facet} names unknown member {member}")
            }
            Violation::TooFewFacets {
                member,
                count,
                required,
            } => write!(
                f,
                "facet count: {member} lies on {count} facets, needs at least {required}"
            ),
            Violation::OutsideFacet {
                member,
                facet,
                residual,
            } => write!(
                f,
                "feasibility: {member} violates {facet} (residual {residual:e})"
            ),
            Violation::OffFacet {
                member,
                facet,
                residual,
            } => write!(
                f,
                "incidence: {member} listed on {facet} but off its hyperplane (residual {residual:e})"
            ),
        }
    }
}

/// Double description of a closed convex pointed solid cone
/// `K = cone conv {z^1..z^m} = { y : a_i^T y >= 0, i = 1..l }`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeDD {
    dim: usize,
    directions: Vec<Vec<f64>>,
    facets: Vec<Halfspace>,
    /// `F~_{z^i}` as indices into `facets`.
    facets_of_direction: Vec<BTreeSet<usize>>,
    /// `V~_{f~_j}` as indices into `directions`.
    directions_of_facet: Vec<BTreeSet<usize>>,
}

impl ConeDD {
    /// Builds a cone from its extreme directions, facet halfspaces (all with
    /// zero offset) and the facet lists of each direction.
    pub fn new(
        directions: Vec<Vec<f64>>,
        facets: Vec<Halfspace>,
        facets_of_direction: Vec<BTreeSet<usize>>,
    ) -> Result<Self, PolyError> {
        let dim = directions.first().map_or(0, Vec::len);
        if dim < 2 {
            return Err(PolyError::Dimension(dim));
        }
        if facets_of_direction.len() != directions.len() {
            return Err(PolyError::InvalidCone(
                "one facet list per direction is required".into(),
            ));
        }
        let mut directions_of_facet = vec![BTreeSet::new(); facets.len()];
        for (i, fs) in facets_of_direction.iter().enumerate() {
            for &j in fs {
                let slot = directions_of_facet.get_mut(j).ok_or_else(|| {
                    PolyError::InvalidCone(format!("direction {i} names unknown facet {j}"))
                })?;
                slot.insert(i);
            }
        }
        let cone = Self {
            dim,
            directions,
            facets,
            facets_of_direction,
            directions_of_facet,
        };
        cone.check()?;
        Ok(cone)
    }

    /// Builds a cone deriving adjacency from orthogonality `a_j^T z^i = 0`.
    pub fn from_geometry(
        directions: Vec<Vec<f64>>,
        facets: Vec<Halfspace>,
    ) -> Result<Self, PolyError> {
        let adj = directions
            .iter()
            .map(|z| {
                facets
                    .iter()
                    .enumerate()
                    .filter(|(_, h)| dot(h.normal(), z).abs() <= on_direction_tolerance(h, z))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Self::new(directions, facets, adj)
    }

    fn check(&self) -> Result<(), PolyError> {
        let d = self.dim;
        for z in &self.directions {
            if z.len() != d {
                return Err(PolyError::Length {
                    expected: d,
                    got: z.len(),
                });
            }
            if z.iter().any(|x| !x.is_finite()) {
                return Err(PolyError::NonFinite);
            }
            if norm(z) == 0.0 {
                return Err(PolyError::ZeroDirection);
            }
        }
        for h in &self.facets {
            if h.dim() != d {
                return Err(PolyError::Length {
                    expected: d,
                    got: h.dim(),
                });
            }
            if h.offset() != 0.0 {
                return Err(PolyError::InvalidCone(format!(
                    "facet offset must be exactly 0, got {}",
                    h.offset()
                )));
            }
        }
        if self.directions.len() < d || self.facets.len() < d {
            return Err(PolyError::InvalidCone(format!(
                "a solid pointed cone in R^{d} needs at least {d} directions and {d} facets"
            )));
        }
        if rank(&self.directions, 1e-12) < d {
            return Err(PolyError::InvalidCone("directions do not span".into()));
        }
        let normals: Vec<Vec<f64>> = self.facets.iter().map(|h| h.normal().to_vec()).collect();
        if rank(&normals, 1e-12) < d {
            return Err(PolyError::InvalidCone(
                "facet normals do not span (cone is not pointed)".into(),
            ));
        }
        for (i, z) in self.directions.iter().enumerate() {
            for (j, h) in self.facets.iter().enumerate() {
                let s = dot(h.normal(), z);
                let tol = on_direction_tolerance(h, z);
                if s < -tol {
                    return Err(PolyError::InvalidCone(format!(
                        "direction {i} violates facet {j}"
                    )));
                }
                if self.facets_of_direction[i].contains(&j) && s.abs() > tol {
                    return Err(PolyError::InvalidCone(format!(
                        "direction {i} is listed on facet {j} but not orthogonal to it"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn facets_of_direction(&self, i: usize) -> &BTreeSet<usize> {
        &self.facets_of_direction[i]
    }

    pub fn directions_of_facet(&self, j: usize) -> &BTreeSet<usize> {
        &self.directions_of_facet[j]
    }

    /// True when `k` has strictly positive inner product with every facet
    /// normal, i.e. `k` lies in the interior of the cone.
    pub fn contains_interior(&self, k: &[f64]) -> bool {
        k.len() == self.dim
            && self
                .facets
                .iter()
                .all(|h| dot(h.normal(), k) > h.direction_tolerance(k))
    }

    /// True for `R^d_+` given by its unit vectors and coordinate facets.
    pub fn is_nonnegative_orthant(&self) -> bool {
        let d = self.dim;
        let unit = |v: &[f64], i: usize| {
            v.iter()
                .enumerate()
                .all(|(j, &x)| if i == j { x > 0.0 } else { x == 0.0 })
        };
        self.directions.len() == d
            && self.facets.len() == d
            && (0..d).all(|i| self.directions.iter().any(|z| unit(z, i)))
            && (0..d).all(|i| self.facets.iter().any(|h| unit(h.normal(), i)))
    }

    /// Default scalarization direction: the all-ones vector for `R^d_+`,
    /// otherwise the sum of the extreme directions.
    pub fn default_direction(&self) -> Vec<f64> {
        if self.is_nonnegative_orthant() {
            return vec![1.0; self.dim];
        }
        let mut k = vec![0.0; self.dim];
        for z in &self.directions {
            for (ki, zi) in k.iter_mut().zip(z) {
                *ki += zi;
            }
        }
        k
    }
}

/// `R^d_+` with `Z = {e^1..e^d}`, facets `y_i >= 0`, and `e^i` adjacent to
/// every facet except its own.
pub fn standard_cone_dd(d: usize) -> Result<ConeDD, PolyError> {
    if d < 2 {
        return Err(PolyError::Dimension(d));
    }
    let unit = |i: usize| {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        e
    };
    let directions = (0..d).map(unit).collect();
    let facets = (0..d)
        .map(|i| Halfspace::new(unit(i), 0.0))
        .collect::<Result<Vec<_>, _>>()?;
    let adj = (0..d)
        .map(|i| (0..d).filter(|&j| j != i).collect())
        .collect();
    ConeDD::new(directions, facets, adj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> AdjacencyPolyhedron {
        let hs = vec![
            Halfspace::new(vec![1.0, 0.0], 0.0).unwrap(),
            Halfspace::new(vec![0.0, 1.0], 0.0).unwrap(),
            Halfspace::new(vec![-1.0, 0.0], -1.0).unwrap(),
            Halfspace::new(vec![0.0, -1.0], -1.0).unwrap(),
        ];
        let vs = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ];
        AdjacencyPolyhedron::from_parts(2, &vs, &[], &hs).unwrap()
    }

    #[test]
    fn halfspace_rejects_zero_normal_and_low_dimension() {
        assert_eq!(
            Halfspace::new(vec![0.0, 0.0], 1.0),
            Err(PolyError::ZeroNormal)
        );
        assert_eq!(Halfspace::new(vec![1.0], 1.0), Err(PolyError::Dimension(1)));
    }

    #[test]
    fn classification_uses_tolerance() {
        let h = Halfspace::new(vec![1.0, 1.0], 1.0).unwrap();
        assert_eq!(h.classify_point(&[1.0, 0.5]), Side::Interior);
        assert_eq!(h.classify_point(&[0.5, 0.5 + 1e-12]), Side::Boundary);
        assert_eq!(h.classify_point(&[0.0, 0.0]), Side::Exterior);
        assert_eq!(h.classify_direction(&[1.0, -1.0]), Side::Boundary);
    }

    #[test]
    fn standard_cone_d2() {
        let k = standard_cone_dd(2).unwrap();
        assert_eq!(k.directions(), &[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(k.facets()[0].normal(), &[1.0, 0.0]);
        assert_eq!(k.facets()[1].normal(), &[0.0, 1.0]);
        // e^1 lies only on y2 >= 0
        assert_eq!(
            k.facets_of_direction(0).iter().copied().collect::<Vec<_>>(),
            vec![1]
        );
        assert_eq!(
            k.directions_of_facet(0).iter().copied().collect::<Vec<_>>(),
            vec![1]
        );
        assert!(k.is_nonnegative_orthant());
    }

    #[test]
    fn standard_cone_d3_adjacency() {
        let k = standard_cone_dd(3).unwrap();
        for i in 0..3 {
            assert_eq!(k.facets_of_direction(i).len(), 2);
            assert!(!k.facets_of_direction(i).contains(&i));
        }
    }

    #[test]
    fn standard_cone_rejects_d1() {
        assert_eq!(standard_cone_dd(1).unwrap_err(), PolyError::Dimension(1));
    }

    #[test]
    fn cone_from_geometry_matches_standard() {
        let std = standard_cone_dd(3).unwrap();
        let g = ConeDD::from_geometry(std.directions().to_vec(), std.facets().to_vec()).unwrap();
        assert_eq!(g, std);
    }

    #[test]
    fn cone_validation_rejects_bad_inputs() {
        let hs = vec![
            Halfspace::new(vec![1.0, 0.0], 0.0).unwrap(),
            Halfspace::new(vec![0.0, 1.0], 1.0).unwrap(),
        ];
        let zs = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(matches!(
            ConeDD::from_geometry(zs.clone(), hs),
            Err(PolyError::InvalidCone(_))
        ));
        // a half-plane is not pointed
        let hs = vec![
            Halfspace::new(vec![1.0, 0.0], 0.0).unwrap(),
            Halfspace::new(vec![2.0, 0.0], 0.0).unwrap(),
        ];
        assert!(ConeDD::from_geometry(zs, hs).is_err());
    }

    #[test]
    fn default_direction_is_ones_for_orthant() {
        let k = standard_cone_dd(4).unwrap();
        assert_eq!(k.default_direction(), vec![1.0; 4]);
        assert!(k.contains_interior(&[1.0, 2.0, 0.5, 1.0]));
        assert!(!k.contains_interior(&[1.0, 0.0, 0.5, 1.0]));
    }

    #[test]
    fn square_from_parts_is_valid() {
        let p = unit_square();
        assert_eq!(p.num_vertices(), 4);
        assert_eq!(p.num_facets(), 4);
        assert!(p.validate().is_empty());
        for v in p.vertices() {
            assert_eq!(p.facets_of(v.id).unwrap().len(), 2);
        }
    }

    #[test]
    fn removed_link_reports_one_violation() {
        let mut p = unit_square();
        let v = p.vertices().next().unwrap().id;
        let f = *p.facets_of(v).unwrap().iter().next().unwrap();
        p.members_of.get_mut(&f).unwrap().remove(&v);
        let violations = p.validate();
        assert_eq!(violations.len(), 1, "{violations:?}");
        assert_eq!(
            violations[0],
            Violation::AsymmetricLink {
                member: v,
                facet: f,
                listed_in: LinkSide::FacetsOfMember
            }
        );
        assert!(violations[0].to_string().contains("symmetric adjacency"));
    }

    #[test]
    fn validation_catches_geometry_errors() {
        let mut p = unit_square();
        let outside = p.add_vertex(vec![2.0, 0.5]).unwrap();
        let violations = p.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::OutsideFacet { member, .. } if *member == outside)));
        assert!(violations.iter().any(
            |v| matches!(v, Violation::TooFewFacets { member, count: 0, .. } if *member == outside)
        ));
    }

    #[test]
    fn ids_are_never_reused() {
        let mut p = unit_square();
        let first = p.vertices().next().unwrap().id;
        p.remove_vertex(first).unwrap();
        let fresh = p.add_vertex(vec![0.0, 0.0]).unwrap();
        assert!(fresh > first);
        assert!(p.vertex(first).is_none());
        let f = p.facets().next().unwrap().id;
        p.remove_facet(f).unwrap();
        assert!(p.facet_id_allocated(f));
        assert!(!p.facet_id_allocated(FacetId(1000)));
    }
}
