//! Schlegel projection of the 4-polytope pi(D_m^eps) into one of its
//! facets, and assembly of the embedded quad mesh in R^3.
//!
//! The viewpoint sits just beyond the base facet F_0: on the ray from the
//! vertex barycenter of the polytope through the barycenter of F_0, halfway
//! between crossing F_0's hyperplane and the first other facet. Central
//! projection from there maps every hull vertex into aff(F_0), and the
//! image is written in an exact rational affine frame of that hyperplane.

use crate::geom::{
    build_deformed_cube, cube_vertex, preservation_certificate, project_to_r4, GeomError,
};
use crate::hull::{hull4, HullError, Polytope4};
use crate::linalg::{dot, rank, solve};
use crate::mirror::{build_qm, orient_qm, CubeFaceCode, MirrorError};
use crate::rational::Rat;
use num::bigint::BigInt;
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchlegelError {
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Mirror(#[from] MirrorError),
    #[error("no preservation certificate for quad `{code}`")]
    MissingCertificate { code: String },
    #[error("{0}")]
    Domain(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Exact affine frame of a hyperplane: `point = origin + sum gamma_i b_i`.
#[derive(Debug, Clone)]
pub struct AffineFrame {
    pub origin: Vec<Rat>,
    pub basis: Vec<Vec<Rat>>,
}

impl AffineFrame {
    /// Frame coordinates of a point of the hyperplane.
    pub fn coords(&self, point: &[Rat]) -> Vec<Rat> {
        // solve the 4x3 system basis^T gamma = point - origin
        let a: Vec<Vec<Rat>> = (0..4)
            .map(|r| self.basis.iter().map(|b| b[r].clone()).collect())
            .collect();
        let rhs: Vec<Rat> = point
            .iter()
            .zip(&self.origin)
            .map(|(p, o)| p - o)
            .collect();
        solve(&a, &rhs).expect("point lies in the frame's hyperplane")
    }
}

#[derive(Debug, Clone)]
pub struct SchlegelScene {
    pub base_facet: usize,
    pub viewpoint: Vec<Rat>,
    pub frame: AffineFrame,
}

/// Polyhedral mesh in R^3 with one cube-face code per face.
#[derive(Debug, Clone)]
pub struct EmbeddedMesh {
    pub vertices: Vec<Vec<Rat>>,
    pub faces: Vec<Vec<usize>>,
    pub provenance: Vec<CubeFaceCode>,
}

/// A point beyond facet `f0` and strictly beneath every other facet:
/// `c + t (y0 - c)` with c the vertex barycenter of the polytope, y0 the
/// vertex barycenter of f0, and t halfway between the f0 crossing (t = 1)
/// and the first crossing of any other facet hyperplane.
pub fn choose_viewpoint(p: &Polytope4, f0: usize) -> Vec<Rat> {
    let verts: Vec<usize> = (0..p.points().len()).filter(|&i| p.is_vertex(i)).collect();
    let nv = Rat::from(BigInt::from(verts.len() as i64));
    let c: Vec<Rat> = (0..4)
        .map(|k| verts.iter().map(|&v| p.points()[v][k].clone()).sum::<Rat>() / nv.clone())
        .collect();
    let fverts = &p.facets()[f0].vertices;
    let nf = Rat::from(BigInt::from(fverts.len() as i64));
    let y0: Vec<Rat> = (0..4)
        .map(|k| fverts.iter().map(|&v| p.points()[v][k].clone()).sum::<Rat>() / nf.clone())
        .collect();
    let dir: Vec<Rat> = y0.iter().zip(&c).map(|(a, b)| a - b).collect();
    // crossing parameter of each facet hyperplane along c + t dir
    let mut t_min: Option<Rat> = None;
    for (fi, f) in p.facets().iter().enumerate() {
        if fi == f0 {
            continue;
        }
        let slope = dot(&f.normal, &dir);
        if !num::Signed::is_positive(&slope) {
            continue; // ray moves away from this facet
        }
        let t = (f.offset.clone() - dot(&f.normal, &c)) / slope;
        assert!(t > Rat::one(), "facet barycenter must clear other facets");
        if t_min.as_ref().is_none_or(|m| t < *m) {
            t_min = Some(t);
        }
    }
    // if the ray never crosses another facet hyperplane (e.g. an axis
    // cube), every t > 1 works; use t = 2 for determinism
    let t = match t_min {
        Some(t_star) => (Rat::one() + t_star) / Rat::from(BigInt::from(2)),
        None => Rat::from(BigInt::from(2)),
    };
    c.iter().zip(&dir).map(|(ck, dk)| ck + t.clone() * dk).collect()
}

/// The frame of aff(F_0): origin at F_0's smallest vertex id, basis from
/// edge vectors of F_0 in lexicographic (u, v) order until rank 3.
pub fn facet_frame(p: &Polytope4, f0: usize) -> AffineFrame {
    let verts = &p.facets()[f0].vertices;
    let origin = p.points()[verts[0]].clone();
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    'outer: for (ui, &u) in verts.iter().enumerate() {
        for &v in &verts[ui + 1..] {
            if !p.is_edge(u, v) {
                continue;
            }
            let e: Vec<Rat> = p.points()[v]
                .iter()
                .zip(&p.points()[u])
                .map(|(a, b)| a - b)
                .collect();
            let mut trial = basis.clone();
            trial.push(e);
            if rank(&trial) == trial.len() {
                basis = trial;
                if basis.len() == 3 {
                    break 'outer;
                }
            }
        }
    }
    assert_eq!(basis.len(), 3, "facet must span a 3-dimensional flat");
    AffineFrame { origin, basis }
}

pub fn make_scene(p: &Polytope4, f0: usize) -> SchlegelScene {
    SchlegelScene {
        base_facet: f0,
        viewpoint: choose_viewpoint(p, f0),
        frame: facet_frame(p, f0),
    }
}

/// Image of hull vertex `v`: the segment [viewpoint, x_v] meets aff(F_0)
/// in exactly one point, returned in frame coordinates.
pub fn schlegel_map(p: &Polytope4, scene: &SchlegelScene, v: usize) -> Vec<Rat> {
    let f = &p.facets()[scene.base_facet];
    let x = &p.points()[v];
    let w = &scene.viewpoint;
    let denom = dot(&f.normal, &x.iter().zip(w).map(|(a, b)| a - b).collect::<Vec<_>>());
    assert!(!denom.is_zero(), "viewpoint is beyond F_0, vertices are not");
    let s = (f.offset.clone() - dot(&f.normal, w)) / denom;
    let point: Vec<Rat> = (0..4)
        .map(|k| w[k].clone() + s.clone() * (x[k].clone() - w[k].clone()))
        .collect();
    scene.frame.coords(&point)
}

/// Full pipeline: deformed cube, per-quad preservation certificates,
/// exact hull of the projected vertices, Schlegel projection into the
/// facet selected by `f0` (default: facet 0, the lexicographically
/// smallest vertex set), and assembly of the oriented quad mesh.
pub fn realize_surface(
    m: usize,
    eps: Rat,
    f0: Option<usize>,
) -> Result<EmbeddedMesh, SchlegelError> {
    if m < 4 {
        return Err(SchlegelError::Domain(format!(
            "realization needs m >= 4, got m = {m}"
        )));
    }
    let cube = build_deformed_cube(m, eps)?;
    let q = build_qm(m)?;
    for code in q.quads() {
        preservation_certificate(&cube, code).map_err(|e| match e {
            GeomError::NotPreserved { face } => SchlegelError::MissingCertificate { code: face },
            other => SchlegelError::Geom(other),
        })?;
    }
    let points: Vec<Vec<Rat>> = (0..1usize << m)
        .map(|v| {
            let signs: Vec<bool> = (0..m).map(|i| v >> i & 1 == 1).collect();
            project_to_r4(&cube_vertex(&cube, &signs)).to_vec()
        })
        .collect();
    let hull = hull4(&points)?;
    for v in 0..points.len() {
        if !hull.is_vertex(v) {
            return Err(SchlegelError::Internal(format!(
                "projected cube vertex {v} is not a hull vertex"
            )));
        }
    }
    let f0 = f0.unwrap_or(0);
    if f0 >= hull.facets().len() {
        return Err(SchlegelError::Domain(format!(
            "facet index {f0} out of range ({} facets)",
            hull.facets().len()
        )));
    }
    let scene = make_scene(&hull, f0);
    let vertices: Vec<Vec<Rat>> = (0..points.len())
        .map(|v| schlegel_map(&hull, &scene, v))
        .collect();
    let oriented = orient_qm(&q)?;
    Ok(EmbeddedMesh {
        vertices,
        faces: oriented.faces().to_vec(),
        provenance: q.quads().to_vec(),
    })
}

/// Splits each quad by the parity diagonal rule of the combinatorial
/// triangulation, keeping vertex set, genus, and provenance codes.
pub fn triangulate_mesh(mesh: &EmbeddedMesh) -> Result<EmbeddedMesh, SchlegelError> {
    let mut faces = Vec::with_capacity(2 * mesh.faces.len());
    let mut provenance = Vec::with_capacity(2 * mesh.faces.len());
    for (cyc, code) in mesh.faces.iter().zip(&mesh.provenance) {
        if cyc.len() != 4 {
            return Err(SchlegelError::Domain(
                "triangulate_mesh expects a quad mesh".into(),
            ));
        }
        let m = code.m();
        let free = code.free_positions();
        let p = if free == vec![0, m - 1] { m - 1 } else { free[0] };
        let k = ((p + 1) % m) + 1;
        let want_odd = k % 2 == 1;
        let parity = |v: usize| v.count_ones() % 2 == 1;
        let diag_02 = parity(cyc[0]) == want_odd;
        let (t1, t2) = if diag_02 {
            (vec![cyc[0], cyc[1], cyc[2]], vec![cyc[0], cyc[2], cyc[3]])
        } else {
            (vec![cyc[1], cyc[2], cyc[3]], vec![cyc[1], cyc[3], cyc[0]])
        };
        faces.push(t1);
        faces.push(t2);
        provenance.push(code.clone());
        provenance.push(code.clone());
    }
    Ok(EmbeddedMesh { vertices: mesh.vertices.clone(), faces, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::surface::{CellSurface, FVector};

    fn cube4_points() -> Vec<Vec<Rat>> {
        (0..16)
            .map(|i| {
                (0..4)
                    .map(|k| rat_int(if i >> k & 1 == 1 { 1 } else { -1 }))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn viewpoint_beyond_base_only() {
        let h = hull4(&cube4_points()).unwrap();
        for f0 in 0..h.facets().len() {
            let w = choose_viewpoint(&h, f0);
            for (fi, f) in h.facets().iter().enumerate() {
                let val = dot(&f.normal, &w);
                if fi == f0 {
                    assert!(val > f.offset);
                } else {
                    assert!(val < f.offset);
                }
            }
        }
    }

    #[test]
    fn base_facet_vertices_fixed() {
        let h = hull4(&cube4_points()).unwrap();
        let scene = make_scene(&h, 0);
        for &v in &h.facets()[0].vertices {
            let img = schlegel_map(&h, &scene, v);
            assert_eq!(img, scene.frame.coords(&h.points()[v]));
        }
    }

    #[test]
    fn images_distinct_m4() {
        let mesh = realize_surface(4, rat(1, 4), None).unwrap();
        assert_eq!(mesh.vertices.len(), 16);
        assert_eq!(mesh.faces.len(), 16);
        for i in 0..16 {
            for j in 0..i {
                assert_ne!(mesh.vertices[i], mesh.vertices[j]);
            }
        }
    }

    #[test]
    fn mesh_combinatorics_match_qm() {
        let mesh = realize_surface(4, rat(1, 4), None).unwrap();
        let s = CellSurface::new(16, mesh.faces.clone(), None).unwrap();
        let r = s.analyze();
        assert_eq!(r.f_vector, FVector { f0: 16, f1: 32, f2: 16 });
        assert_eq!(r.genus, Some(1));
    }

    #[test]
    fn triangulated_mesh_m4() {
        let mesh = realize_surface(4, rat(1, 4), None).unwrap();
        let tri = triangulate_mesh(&mesh).unwrap();
        assert_eq!(tri.faces.len(), 32);
        let s = CellSurface::new(16, tri.faces.clone(), None).unwrap();
        assert_eq!(s.analyze().genus, Some(1));
    }

    #[test]
    fn small_m_rejected() {
        assert!(matches!(
            realize_surface(3, rat(1, 4), None),
            Err(SchlegelError::Domain(_))
        ));
    }
}
