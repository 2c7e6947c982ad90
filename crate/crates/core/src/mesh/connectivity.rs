use std::collections::BTreeMap;

use super::geometry::{edge_geometry, element_jacobian, signed_area2};
use super::{BoundaryCode, Edge, Element, Mesh, MeshError, MeshSource, RightSide};

/// Build the edge list, side maps, normals and element Jacobians.
///
/// Clockwise triangles are reordered to counter-clockwise. The result
/// depends only on the input (no hash-order effects).
pub fn build_connectivity(src: &MeshSource) -> Result<Mesh, MeshError> {
    let mut elements = Vec::with_capacity(src.triangles.len());
    for (i, t) in src.triangles.iter().enumerate() {
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(MeshError::RepeatedVertex { element: i });
        }
        let mut v = *t;
        let p = |k: usize| src.vertices[v[k]];
        if signed_area2(p(0), p(1), p(2)) < 0.0 {
            v.swap(1, 2);
        }
        let coords = [src.vertices[v[0]], src.vertices[v[1]], src.vertices[v[2]]];
        let (det, tau) = element_jacobian(&coords)?;
        elements.push(Element {
            vertices: v,
            edges: [usize::MAX; 3],
            jacobian_det: det,
            jacobian_tau: tau,
        });
    }

    // (sorted vertex pair) -> [(element, local edge)]
    let mut owners: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (i, el) in elements.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (el.vertices[k], el.vertices[(k + 1) % 3]);
            owners.entry((a.min(b), a.max(b))).or_default().push((i, k));
        }
    }

    let mut tags: BTreeMap<(usize, usize), BoundaryCode> = BTreeMap::new();
    for s in &src.boundary {
        let [a, b] = s.vertices;
        tags.insert((a.min(b), a.max(b)), s.code);
    }

    let mut boundary = Vec::new();
    let mut interior = Vec::new();
    for (&(a, b), own) in &owners {
        match own.as_slice() {
            &[(e, k)] => {
                let code = *tags.get(&(a, b)).ok_or(MeshError::UntaggedBoundaryEdge(a, b))?;
                boundary.push((code, e, k));
            }
            &[(e0, k0), (e1, k1)] => {
                // owners are pushed in element order, so e0 < e1 unless a
                // triangle is listed twice
                let ((l, kl), (r, kr)) = if e0 <= e1 { ((e0, k0), (e1, k1)) } else { ((e1, k1), (e0, k0)) };
                interior.push((l, kl, r, kr));
            }
            more => return Err(MeshError::NonManifoldEdge(a, b, more.len())),
        }
    }
    // codes are negative: -1 first, then -2, ...
    boundary.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    interior.sort();

    let mut edges = Vec::with_capacity(boundary.len() + interior.len());
    let mut push_edge = |left: usize, k: usize, right: RightSide, elements: &mut [Element]| -> Result<(), MeshError> {
        let el = &elements[left];
        let va = el.vertices[k];
        let vb = el.vertices[(k + 1) % 3];
        let (normal, half_length) = edge_geometry(src.vertices[va], src.vertices[vb])?;
        let id = edges.len();
        edges.push(Edge {
            vertices: [va, vb],
            left,
            left_side: k,
            right,
            normal,
            half_length,
        });
        elements[left].edges[k] = id;
        if let RightSide::Element { index, side } = right {
            elements[index].edges[side] = id;
        }
        Ok(())
    };
    for &(code, e, k) in &boundary {
        push_edge(e, k, RightSide::Boundary(code), &mut elements)?;
    }
    for &(l, kl, r, kr) in &interior {
        push_edge(l, kl, RightSide::Element { index: r, side: kr }, &mut elements)?;
    }

    Ok(Mesh {
        vertices: src.vertices.clone(),
        elements,
        n_boundary_edges: boundary.len(),
        edges,
    })
}
