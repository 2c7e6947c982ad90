//! Reader and writer for ASCII GMSH meshes, format version 2.2.
//!
//! Only what a 2D triangle mesh needs is interpreted: `$MeshFormat`,
//! `$Nodes` and `$Elements`. Other sections (`$PhysicalNames`, ...) are
//! skipped. Element type 2 (3-node triangle) becomes a mesh cell, type 1
//! (2-node line) a boundary segment, type 15 (point) is ignored.
//!
//! A line's first tag is its physical group; physical group `t > 0` maps to
//! boundary code `-t` (see [`BoundaryCode`]).

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{BoundaryCode, BoundarySegment, MeshError, MeshSource};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-blank line, trimmed, with its 1-based number.
    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            self.last = i + 1;
            let t = l.trim();
            if !t.is_empty() {
                return Some((i + 1, t));
            }
        }
        None
    }

    fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str), MeshError> {
        let last = self.last;
        self.next_line().ok_or_else(|| MeshError::Parse {
            line: last + 1,
            message: format!("unexpected end of file, expected {what}"),
        })
    }

    fn expect_end(&mut self, section: &str) -> Result<(), MeshError> {
        let (line, l) = self.expect_line(&format!("$End{section}"))?;
        if l != format!("$End{section}") {
            return Err(MeshError::Parse {
                line,
                message: format!("expected $End{section}, found `{l}`"),
            });
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, MeshError> {
    let tok = tok.ok_or_else(|| MeshError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| MeshError::Parse {
        line,
        message: format!("invalid {what} `{tok}`"),
    })
}

/// Parse the text of a version 2.2 ASCII `.msh` file.
pub fn parse_msh(text: &str) -> Result<MeshSource, MeshError> {
    let mut lines = Lines::new(text);
    let mut seen_format = false;
    let mut node_index: HashMap<u64, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut segments = Vec::new();
    let mut seen_nodes = false;
    let mut seen_elements = false;

    while let Some((line, header)) = lines.next_line() {
        match header {
            "$MeshFormat" => {
                let (line, l) = lines.expect_line("mesh format line")?;
                let mut it = l.split_whitespace();
                let version = it.next().unwrap_or("");
                if version != "2.2" {
                    return Err(MeshError::UnsupportedVersion {
                        line,
                        version: version.to_string(),
                    });
                }
                let file_type: u32 = parse_num(it.next(), line, "file type")?;
                if file_type != 0 {
                    return Err(MeshError::Parse {
                        line,
                        message: "binary .msh files are not supported".into(),
                    });
                }
                lines.expect_end("MeshFormat")?;
                seen_format = true;
            }
            "$Nodes" => {
                let (line, l) = lines.expect_line("node count")?;
                let count: usize = parse_num(Some(l), line, "node count")?;
                vertices.reserve(count);
                for _ in 0..count {
                    let (line, l) = lines.expect_line("node")?;
                    let mut it = l.split_whitespace();
                    let id: u64 = parse_num(it.next(), line, "node id")?;
                    let x: f64 = parse_num(it.next(), line, "x coordinate")?;
                    let y: f64 = parse_num(it.next(), line, "y coordinate")?;
                    let _z: f64 = parse_num(it.next(), line, "z coordinate")?;
                    if !(x.is_finite() && y.is_finite()) {
                        return Err(MeshError::Parse {
                            line,
                            message: format!("non-finite coordinates for node {id}"),
                        });
                    }
                    if node_index.insert(id, vertices.len()).is_some() {
                        return Err(MeshError::Parse {
                            line,
                            message: format!("duplicate node id {id}"),
                        });
                    }
                    vertices.push([x, y]);
                }
                lines.expect_end("Nodes")?;
                seen_nodes = true;
            }
            "$Elements" => {
                let (line, l) = lines.expect_line("element count")?;
                let count: usize = parse_num(Some(l), line, "element count")?;
                for _ in 0..count {
                    let (line, l) = lines.expect_line("element")?;
                    let mut it = l.split_whitespace();
                    let _id: u64 = parse_num(it.next(), line, "element id")?;
                    let kind: u32 = parse_num(it.next(), line, "element type")?;
                    let ntags: usize = parse_num(it.next(), line, "tag count")?;
                    let mut tags = Vec::with_capacity(ntags);
                    for _ in 0..ntags {
                        tags.push(parse_num::<i64>(it.next(), line, "tag")?);
                    }
                    let node = |it: &mut std::str::SplitWhitespace| -> Result<usize, MeshError> {
                        let id: u64 = parse_num(it.next(), line, "node reference")?;
                        node_index
                            .get(&id)
                            .copied()
                            .ok_or(MeshError::UndefinedNode { line, node: id })
                    };
                    match kind {
                        1 => {
                            let a = node(&mut it)?;
                            let b = node(&mut it)?;
                            let tag = *tags.first().ok_or(MeshError::Parse {
                                line,
                                message: "boundary line without a physical tag".into(),
                            })?;
                            if tag <= 0 {
                                return Err(MeshError::Parse {
                                    line,
                                    message: format!("boundary physical tag must be positive, got {tag}"),
                                });
                            }
                            segments.push(BoundarySegment {
                                vertices: [a, b],
                                code: BoundaryCode(-(tag as i32)),
                            });
                        }
                        2 => {
                            let a = node(&mut it)?;
                            let b = node(&mut it)?;
                            let c = node(&mut it)?;
                            triangles.push([a, b, c]);
                        }
                        15 => {}
                        3 | 10 | 16 => {
                            return Err(MeshError::NonTriangleElement { line, kind });
                        }
                        other => {
                            return Err(MeshError::Parse {
                                line,
                                message: format!("unsupported element type {other}"),
                            });
                        }
                    }
                }
                lines.expect_end("Elements")?;
                seen_elements = true;
            }
            h if h.starts_with('$') && !h.starts_with("$End") => {
                let name = &h[1..];
                let end = format!("$End{name}");
                loop {
                    match lines.next_line() {
                        Some((_, l)) if l == end => break,
                        Some(_) => continue,
                        None => {
                            return Err(MeshError::Parse {
                                line,
                                message: format!("section {h} is not closed"),
                            })
                        }
                    }
                }
            }
            other => {
                return Err(MeshError::Parse {
                    line,
                    message: format!("malformed section header `{other}`"),
                })
            }
        }
    }

    if !seen_format {
        return Err(MeshError::MissingSection("$MeshFormat"));
    }
    if !seen_nodes {
        return Err(MeshError::MissingSection("$Nodes"));
    }
    if !seen_elements {
        return Err(MeshError::MissingSection("$Elements"));
    }
    Ok(MeshSource {
        vertices,
        triangles,
        boundary: segments,
    })
}

impl MeshSource {
    /// Serialise as ASCII `.msh` version 2.2. Node ids are `index + 1`;
    /// triangles carry physical group 100.
    pub fn to_msh(&self) -> String {
        let mut out = String::new();
        out.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n");
        let _ = writeln!(out, "$Nodes\n{}", self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "{} {:?} {:?} 0", i + 1, v[0], v[1]);
        }
        out.push_str("$EndNodes\n");
        let _ = writeln!(out, "$Elements\n{}", self.boundary.len() + self.triangles.len());
        let mut id = 1;
        for s in &self.boundary {
            let tag = -s.code.0;
            let _ = writeln!(out, "{id} 1 2 {tag} {tag} {} {}", s.vertices[0] + 1, s.vertices[1] + 1);
            id += 1;
        }
        for t in &self.triangles {
            let _ = writeln!(out, "{id} 2 2 100 1 {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
            id += 1;
        }
        out.push_str("$EndElements\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_TRIANGLE: &str = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n1 0 0 0\n2 1 0 0\n3 0 1 0\n$EndNodes\n$Elements\n1\n1 2 2 1 1 1 2 3\n$EndElements\n";

    #[test]
    fn single_triangle() {
        let src = parse_msh(ONE_TRIANGLE).unwrap();
        assert_eq!(src.vertices.len(), 3);
        assert_eq!(src.triangles, vec![[0, 1, 2]]);
        assert!(src.boundary.is_empty());
    }

    #[test]
    fn undefined_node_is_reported_with_line() {
        let text = ONE_TRIANGLE.replace("1 2 2 1 1 1 2 3", "1 2 2 1 1 1 2 99");
        let err = parse_msh(&text).unwrap_err();
        assert_eq!(err, MeshError::UndefinedNode { line: 12, node: 99 });
        assert!(err.to_string().contains("undefined node"));
    }

    #[test]
    fn other_versions_are_rejected() {
        let text = ONE_TRIANGLE.replace("2.2 0 8", "4.1 0 8");
        assert!(matches!(parse_msh(&text), Err(MeshError::UnsupportedVersion { line: 2, .. })));
    }

    #[test]
    fn quads_are_rejected() {
        let text = ONE_TRIANGLE
            .replace("$Nodes\n3\n", "$Nodes\n4\n")
            .replace("3 0 1 0\n", "3 0 1 0\n4 1 1 0\n")
            .replace("1 2 2 1 1 1 2 3", "1 3 2 1 1 1 2 4 3");
        assert!(matches!(
            parse_msh(&text),
            Err(MeshError::NonTriangleElement { line: 13, kind: 3 })
        ));
    }

    #[test]
    fn malformed_header() {
        let text = ONE_TRIANGLE.replace("$Nodes\n3", "Nodes\n3");
        assert!(matches!(parse_msh(&text), Err(MeshError::Parse { line: 4, .. })));
    }

    #[test]
    fn unknown_sections_are_skipped_and_lines_tagged() {
        let text = ONE_TRIANGLE
            .replace(
                "$Nodes",
                "$PhysicalNames\n1\n1 3 \"wall\"\n$EndPhysicalNames\n$Nodes",
            )
            .replace("$Elements\n1\n", "$Elements\n2\n7 1 2 3 9 1 2\n");
        let src = parse_msh(&text).unwrap();
        assert_eq!(src.boundary.len(), 1);
        assert_eq!(src.boundary[0].code, BoundaryCode(-3));
        assert_eq!(src.boundary[0].vertices, [0, 1]);
    }

    #[test]
    fn writer_round_trips() {
        let mut src = parse_msh(ONE_TRIANGLE).unwrap();
        src.boundary.push(BoundarySegment {
            vertices: [1, 2],
            code: BoundaryCode::OUTFLOW,
        });
        src.vertices[2] = [0.1 + 0.2, 1.0 / 3.0];
        let again = parse_msh(&src.to_msh()).unwrap();
        assert_eq!(again, src);
    }
}
