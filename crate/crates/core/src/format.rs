//! Line-oriented text formats for polyhedra, cut sequences, cones and
//! problem instances. `#` starts a comment; blank lines are ignored.
//!
//! Polyhedron:
//!
//! ```text
//! d 2
//! v 1 0
//! v 0 1
//! z 1 0
//! z 0 1
//! f 1 1 1
//! f 1 0 0
//! adj 0 0 1
//! adj 1 1 3
//! ```
//!
//! Members are numbered by the order of their `v`/`z` lines, facets by the
//! order of their `f` lines. Without `adj` lines adjacency is derived from
//! the geometry.
//!
//! Instance: a header `d n m`, then `d` rows of `C`, `m` rows of `A`, one
//! row `b`, and optionally one row `k`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::benson::MolpInstance;
use crate::polyhedron::{AdjacencyPolyhedron, ConeDD, Halfspace, MemberId};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based; 0 when the error concerns the file as a whole.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn numbers(line: usize, toks: &[&str]) -> Result<Vec<f64>, ParseError> {
    toks.iter()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| ParseError::new(line, format!("invalid number '{t}'")))
        })
        .collect()
}

fn index(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>()
        .map_err(|_| ParseError::new(line, format!("invalid index '{tok}'")))
}

fn join(xs: &[f64]) -> String {
    // `+ 0.0` turns -0 into 0
    xs.iter()
        .map(|x| (x + 0.0).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Contents of a polyhedron file before adjacency is resolved.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub directions: Vec<Vec<f64>>,
    pub halfspaces: Vec<Halfspace>,
    /// `(facet index, member indices)` per `adj` line.
    pub adjacency: Vec<(usize, Vec<usize>)>,
}

impl PolyFile {
    /// Builds the polyhedron. Uses the `adj` lines when present, otherwise
    /// derives adjacency geometrically (which drops facets touching no
    /// vertex).
    pub fn to_polyhedron(&self) -> Result<AdjacencyPolyhedron, ParseError> {
        let err = |e: crate::polyhedron::PolyError| ParseError::new(0, e.to_string());
        if self.adjacency.is_empty() {
            return AdjacencyPolyhedron::from_parts(
                self.dim,
                &self.vertices,
                &self.directions,
                &self.halfspaces,
            )
            .map_err(err);
        }
        let mut p = AdjacencyPolyhedron::new(self.dim).map_err(err)?;
        let mut members = Vec::new();
        for v in &self.vertices {
            members.push(p.add_vertex(v.clone()).map_err(err)?);
        }
        for z in &self.directions {
            members.push(p.add_direction(z.clone()).map_err(err)?);
        }
        let mut facets = Vec::new();
        for h in &self.halfspaces {
            facets.push(p.add_facet(h.clone()).map_err(err)?);
        }
        for (f, ms) in &self.adjacency {
            let fid = *facets
                .get(*f)
                .ok_or_else(|| ParseError::new(0, format!("adjacency names unknown facet {f}")))?;
            for m in ms {
                let mid = *members.get(*m).ok_or_else(|| {
                    ParseError::new(0, format!("adjacency names unknown member {m}"))
                })?;
                p.link(mid, fid).map_err(err)?;
            }
        }
        Ok(p)
    }
}

pub fn parse_polyhedron(text: &str) -> Result<PolyFile, ParseError> {
    let mut out = PolyFile::default();
    let mut dim: Option<usize> = None;
    for (line, toks) in lines(text) {
        let (tag, rest) = (toks[0], &toks[1..]);
        if tag == "d" {
            if dim.is_some() {
                return Err(ParseError::new(line, "duplicate dimension line"));
            }
            if rest.len() != 1 {
                return Err(ParseError::new(line, "expected 'd <dim>'"));
            }
            let d = index(line, rest[0])?;
            if d < 2 {
                return Err(ParseError::new(
                    line,
                    format!("dimension must be at least 2, got {d}"),
                ));
            }
            dim = Some(d);
            out.dim = d;
            continue;
        }
        let d = dim.ok_or_else(|| ParseError::new(line, "missing 'd <dim>' header"))?;
        match tag {
            "v" | "z" => {
                if rest.len() != d {
                    return Err(ParseError::new(
                        line,
                        format!("expected {d} coordinates, got {}", rest.len()),
                    ));
                }
                let xs = numbers(line, rest)?;
                if tag == "v" {
                    out.vertices.push(xs);
                } else {
                    if xs.iter().all(|&x| x == 0.0) {
                        return Err(ParseError::new(line, "direction must be nonzero"));
                    }
                    out.directions.push(xs);
                }
            }
            "f" => out.halfspaces.push(halfspace(line, d, rest)?),
            "adj" => {
                if rest.is_empty() {
                    return Err(ParseError::new(line, "expected 'adj <facet> <members..>'"));
                }
                let f = index(line, rest[0])?;
                let ms = rest[1..]
                    .iter()
                    .map(|t| index(line, t))
                    .collect::<Result<Vec<_>, _>>()?;
                out.adjacency.push((f, ms));
            }
            other => return Err(ParseError::new(line, format!("unknown record '{other}'"))),
        }
    }
    if dim.is_none() {
        return Err(ParseError::new(0, "missing 'd <dim>' header"));
    }
    let nm = out.vertices.len() + out.directions.len();
    let nf = out.halfspaces.len();
    for (f, ms) in &out.adjacency {
        if *f >= nf {
            return Err(ParseError::new(
                0,
                format!("adjacency names unknown facet {f}"),
            ));
        }
        if let Some(m) = ms.iter().find(|&&m| m >= nm) {
            return Err(ParseError::new(
                0,
                format!("adjacency names unknown member {m}"),
            ));
        }
    }
    Ok(out)
}

fn halfspace(line: usize, d: usize, toks: &[&str]) -> Result<Halfspace, ParseError> {
    if toks.len() != d + 1 {
        return Err(ParseError::new(
            line,
            format!(
                "expected {} numbers (normal and offset), got {}",
                d + 1,
                toks.len()
            ),
        ));
    }
    let mut xs = numbers(line, toks)?;
    let b = xs.pop().unwrap_or_default();
    Halfspace::new(xs, b).map_err(|e| ParseError::new(line, e.to_string()))
}

/// Writes vertices first, then directions, then facets with their
/// adjacency rows. Reading the output back gives the same polyhedron up to
/// id renumbering.
pub fn write_polyhedron(p: &AdjacencyPolyhedron) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "d {}", p.dim());
    let mut pos: Vec<MemberId> = Vec::new();
    for v in p.vertices() {
        let _ = writeln!(s, "v {}", join(&v.coords));
        pos.push(v.id);
    }
    for z in p.directions() {
        let _ = writeln!(s, "z {}", join(&z.coords));
        pos.push(z.id);
    }
    for f in p.facets() {
        let h = &f.halfspace;
        let _ = writeln!(s, "f {} {}", join(h.normal()), h.offset() + 0.0);
    }
    for (i, f) in p.facets().enumerate() {
        let members = p.members_of(f.id).cloned().unwrap_or_default();
        let idx: Vec<String> = pos
            .iter()
            .enumerate()
            .filter(|(_, m)| members.contains(m))
            .map(|(j, _)| j.to_string())
            .collect();
        if idx.is_empty() {
            let _ = writeln!(s, "adj {i}");
        } else {
            let _ = writeln!(s, "adj {i} {}", idx.join(" "));
        }
    }
    s
}

/// Vertex representation only: `d`, `v` and `z` lines.
pub fn write_vrep(dim: usize, vertices: &[Vec<f64>], directions: &[Vec<f64>]) -> String {
    let mut s = format!("d {dim}\n");
    for v in vertices {
        let _ = writeln!(s, "v {}", join(v));
    }
    for z in directions {
        let _ = writeln!(s, "z {}", join(z));
    }
    s
}

/// Cut sequence: one `cut a1 .. ad b` per line.
pub fn parse_cuts(text: &str, dim: usize) -> Result<Vec<Halfspace>, ParseError> {
    lines(text)
        .map(|(line, toks)| {
            if toks[0] != "cut" {
                return Err(ParseError::new(
                    line,
                    format!("unknown record '{}'", toks[0]),
                ));
            }
            halfspace(line, dim, &toks[1..])
        })
        .collect()
}

pub fn write_cuts(cuts: &[Halfspace]) -> String {
    cuts.iter()
        .map(|h| format!("cut {} {}\n", join(h.normal()), h.offset() + 0.0))
        .collect()
}

/// Ordering cone: `d`, then `z` lines for the extreme directions and `f`
/// lines (offset 0) for the facets. Adjacency is derived from orthogonality.
pub fn parse_cone(text: &str) -> Result<ConeDD, ParseError> {
    let pf = parse_polyhedron(text)?;
    if !pf.vertices.is_empty() {
        return Err(ParseError::new(0, "a cone file has no 'v' lines"));
    }
    ConeDD::from_geometry(pf.directions, pf.halfspaces)
        .map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn parse_instance(text: &str) -> Result<MolpInstance, ParseError> {
    let mut it = lines(text);
    let (line, header) = it
        .next()
        .ok_or_else(|| ParseError::new(0, "empty instance file"))?;
    if header.len() != 3 {
        return Err(ParseError::new(line, "expected header 'd n m'"));
    }
    let d = index(line, header[0])?;
    let n = index(line, header[1])?;
    let m = index(line, header[2])?;
    let mut last = line;
    let mut row = |what: &str, len: usize| -> Result<Vec<f64>, ParseError> {
        let (line, toks) = it
            .next()
            .ok_or_else(|| ParseError::new(last + 1, format!("missing {what}")))?;
        last = line;
        if toks.len() != len {
            return Err(ParseError::new(
                line,
                format!("{what}: expected {len} numbers, got {}", toks.len()),
            ));
        }
        numbers(line, &toks)
    };
    let c = (0..d)
        .map(|i| row(&format!("objective row {}", i + 1), n))
        .collect::<Result<Vec<_>, _>>()?;
    let a = (0..m)
        .map(|i| row(&format!("constraint row {}", i + 1), n))
        .collect::<Result<Vec<_>, _>>()?;
    let b = row("right-hand side", m)?;
    let k = match row("direction", d) {
        Ok(k) => Some(k),
        Err(e) if e.message.starts_with("missing") => None,
        Err(e) => return Err(e),
    };
    if let Some((line, _)) = it.next() {
        return Err(ParseError::new(line, "unexpected trailing data"));
    }
    let inst = MolpInstance::new(c, a, b).map_err(|e| ParseError::new(0, e.to_string()))?;
    match k {
        Some(k) => inst
            .with_direction(k)
            .map_err(|e| ParseError::new(last, e.to_string())),
        None => Ok(inst),
    }
}

pub fn write_instance(inst: &MolpInstance) -> String {
    let mut s = format!(
        "{} {} {}\n",
        inst.dim(),
        inst.num_vars(),
        inst.num_constraints()
    );
    for r in inst.objectives() {
        let _ = writeln!(s, "{}", join(r));
    }
    for r in inst.constraint_matrix() {
        let _ = writeln!(s, "{}", join(r));
    }
    let _ = writeln!(s, "{}", join(inst.rhs()));
    let _ = writeln!(s, "{}", join(inst.direction()));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::{init_cone, onlinevert2};
    use crate::polyhedron::standard_cone_dd;

    #[test]
    fn polyhedron_round_trip_keeps_adjacency() {
        let cone = standard_cone_dd(3).unwrap();
        let p = init_cone(&[0.0, 0.0, 0.0], &cone).unwrap();
        let h = Halfspace::new(vec![1.0, 2.0, 1.0], 1.5).unwrap();
        let p = onlinevert2(&p, &h).unwrap().polyhedron.unwrap();
        let text = write_polyhedron(&p);
        let q = parse_polyhedron(&text).unwrap().to_polyhedron().unwrap();
        assert_eq!(write_polyhedron(&q), text);
        assert!(q.validate().is_empty());
    }

    #[test]
    fn geometric_adjacency_without_adj_lines() {
        let text =
            "d 2\n# square\nv 0 0\nv 1 0\nv 1 1\nv 0 1\nf 1 0 0\nf 0 1 0\nf -1 0 -1\nf 0 -1 -1\n";
        let p = parse_polyhedron(text).unwrap().to_polyhedron().unwrap();
        assert_eq!(p.num_facets(), 4);
        assert!(p.validate().is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_polyhedron("d 2\nv 1 0\n\nf 1 x 0\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_polyhedron("v 1 0\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_polyhedron("d 2\nq 1 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_polyhedron("d 2\nf 0 0 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(parse_polyhedron("").unwrap_err().line, 0);
    }

    #[test]
    fn cuts_round_trip() {
        let cuts = vec![
            Halfspace::new(vec![1.0, 1.0], 1.0).unwrap(),
            Halfspace::new(vec![0.25, -3.5], -2.0).unwrap(),
        ];
        assert_eq!(parse_cuts(&write_cuts(&cuts), 2).unwrap(), cuts);
        assert_eq!(parse_cuts("cut 1 1\n", 2).unwrap_err().line, 1);
    }

    #[test]
    fn instance_round_trip_and_optional_direction() {
        let text = "# demo\n2 2 1\n1 0\n0 1\n-1 -1\n-1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.direction(), &[1.0, 1.0]);
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);

        let with_k = parse_instance("2 2 1\n1 0\n0 1\n-1 -1\n-1\n2 1\n").unwrap();
        assert_eq!(with_k.direction(), &[2.0, 1.0]);

        let e = parse_instance("2 2 1\n1 0\n0 1 5\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_instance("2 2 1\n1 0\n0 1\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_instance("2 2 1\n1 0\n0 1\n-1 -1\n-1\n1 1\n7\n").unwrap_err();
        assert_eq!(e.line, 7);
    }

    #[test]
    fn cone_file() {
        let cone = parse_cone("d 2\nz 1 0\nz 1 1\nf 0 1 0\nf 1 -1 0\n").unwrap();
        assert_eq!(cone.directions().len(), 2);
        assert!(cone.directions_of_facet(0).contains(&0));
        assert!(parse_cone("d 2\nz 1 0\nz 0 1\nf 1 0 1\nf 0 1 0\n").is_err());
    }
}
