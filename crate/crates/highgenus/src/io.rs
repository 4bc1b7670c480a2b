//! Mesh and surface serialization: OFF/OBJ export with rounded decimals,
//! and a JSON mesh format that keeps exact rational coordinates.
//!
//! OFF and OBJ are lossy (fixed decimal places); the JSON dump is the
//! exact companion and is preferred for re-verification whenever present.

use crate::mirror::CubeFaceCode;
use crate::rational::{parse_rational, rat_to_decimal, rat_to_string};
use crate::schlegel::EmbeddedMesh;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Pipeline parameters recorded with an exported mesh.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshMeta {
    pub m: usize,
    pub eps: String,
    pub f0: usize,
}

/// Exact on-disk mesh: rational coordinate strings, face cycles, and one
/// cube-face code per face.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshFile {
    pub meta: Option<MeshMeta>,
    pub vertices: Vec<Vec<String>>,
    pub faces: Vec<Vec<usize>>,
    pub provenance: Vec<String>,
}

pub fn mesh_to_file(mesh: &EmbeddedMesh, meta: Option<MeshMeta>) -> MeshFile {
    MeshFile {
        meta,
        vertices: mesh
            .vertices
            .iter()
            .map(|p| p.iter().map(rat_to_string).collect())
            .collect(),
        faces: mesh.faces.clone(),
        provenance: mesh.provenance.iter().map(|c| c.to_string()).collect(),
    }
}

pub fn mesh_from_file(file: &MeshFile) -> Result<EmbeddedMesh, IoError> {
    let vertices = file
        .vertices
        .iter()
        .map(|p| {
            if p.len() != 3 {
                return Err(IoError::Parse("vertex is not 3-dimensional".into()));
            }
            p.iter()
                .map(|s| parse_rational(s).map_err(|e| IoError::Parse(e.to_string())))
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if !file.provenance.is_empty() && file.provenance.len() != file.faces.len() {
        return Err(IoError::Parse(
            "provenance length does not match face count".into(),
        ));
    }
    let provenance = file
        .provenance
        .iter()
        .map(|s| CubeFaceCode::parse(s).map_err(|e| IoError::Parse(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EmbeddedMesh { vertices, faces: file.faces.clone(), provenance })
}

fn header_comment(meta: Option<&MeshMeta>, prefix: &str) -> String {
    match meta {
        Some(m) => format!("{prefix} m={} eps={} f0={}\n", m.m, m.eps, m.f0),
        None => String::new(),
    }
}

/// OFF text with coordinates rounded to `places` decimal digits.
pub fn off_string(mesh: &EmbeddedMesh, meta: Option<&MeshMeta>, places: usize) -> String {
    let mut out = String::from("OFF\n");
    out.push_str(&header_comment(meta, "#"));
    out.push_str(&format!("{} {} 0\n", mesh.vertices.len(), mesh.faces.len()));
    for p in &mesh.vertices {
        let coords: Vec<String> = p.iter().map(|x| rat_to_decimal(x, places)).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    for f in &mesh.faces {
        out.push_str(&f.len().to_string());
        for v in f {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

/// Wavefront OBJ text (1-based indices) at `places` decimal digits.
pub fn obj_string(mesh: &EmbeddedMesh, meta: Option<&MeshMeta>, places: usize) -> String {
    let mut out = header_comment(meta, "#");
    for p in &mesh.vertices {
        let coords: Vec<String> = p.iter().map(|x| rat_to_decimal(x, places)).collect();
        out.push_str(&format!("v {}\n", coords.join(" ")));
    }
    for f in &mesh.faces {
        let ids: Vec<String> = f.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&format!("f {}\n", ids.join(" ")));
    }
    out
}

/// Parses OFF text back into a mesh (coordinates become exact decimals;
/// provenance is not represented in OFF).
pub fn parse_off(text: &str) -> Result<EmbeddedMesh, IoError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let bad = |msg: &str| IoError::Parse(msg.to_string());
    let magic = lines.next().ok_or_else(|| bad("empty OFF file"))?;
    if magic != "OFF" {
        return Err(bad("missing OFF magic line"));
    }
    let counts = lines.next().ok_or_else(|| bad("missing count line"))?;
    let nums: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad("bad count line")))
        .collect::<Result<_, _>>()?;
    if nums.len() < 2 {
        return Err(bad("bad count line"));
    }
    let (nv, nf) = (nums[0], nums[1]);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let line = lines.next().ok_or_else(|| bad("missing vertex line"))?;
        let coords: Vec<_> = line
            .split_whitespace()
            .map(|t| parse_rational(t).map_err(|e| IoError::Parse(e.to_string())))
            .collect::<Result<_, _>>()?;
        if coords.len() != 3 {
            return Err(bad("vertex line is not 3-dimensional"));
        }
        vertices.push(coords);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let line = lines.next().ok_or_else(|| bad("missing face line"))?;
        let ids: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad face line")))
            .collect::<Result<_, _>>()?;
        let (&k, rest) = ids.split_first().ok_or_else(|| bad("empty face line"))?;
        if rest.len() != k {
            return Err(bad("face vertex count mismatch"));
        }
        if rest.iter().any(|&v| v >= nv) {
            return Err(bad("face references a missing vertex"));
        }
        faces.push(rest.to_vec());
    }
    Ok(EmbeddedMesh { vertices, faces, provenance: vec![] })
}

/// Deterministic pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}
