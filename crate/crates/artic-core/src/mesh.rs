//! Triangle meshes and OBJ/PLY file I/O.
//!
//! Only the subset the pipeline needs: OBJ `v`/`f` records and PLY
//! (ascii or binary little-endian) with vertex positions, optional
//! per-vertex normals, and optional triangle faces.

use crate::kinematics::{Aabb, RigidTransform};
use crate::Vec3;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported mesh format: {0} (OBJ and PLY are supported)")]
    UnsupportedFormat(String),
    #[error("malformed {format} at line {line}: {reason}")]
    Malformed {
        format: &'static str,
        line: usize,
        reason: String,
    },
    #[error("vertex index {index} out of range (mesh has {count} vertices)")]
    IndexOutOfRange { index: usize, count: usize },
}

/// Indexed triangle mesh. Triangles wind counterclockwise seen from outside.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>) -> Self {
        Self {
            vertices,
            triangles,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn aabb(&self) -> Option<Aabb> {
        Aabb::from_points(&self.vertices)
    }

    pub fn triangle_vertices(&self, t: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[t];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_vertices(t);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Outward face normal from winding; zero vector for degenerate faces.
    pub fn triangle_normal(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.triangle_vertices(t);
        let n = (b - a).cross(&(c - a));
        let norm = n.norm();
        if norm > 0.0 {
            n / norm
        } else {
            Vec3::zeros()
        }
    }

    pub fn transformed(&self, t: &RigidTransform) -> TriMesh {
        TriMesh {
            vertices: self.vertices.iter().map(|v| t.apply(v)).collect(),
            triangles: self.triangles.clone(),
        }
    }

    pub fn transform_in_place(&mut self, t: &RigidTransform) {
        for v in &mut self.vertices {
            *v = t.apply(v);
        }
    }

    /// Append `other`, reindexing its triangles.
    pub fn append(&mut self, other: &TriMesh) {
        let base = self.vertices.len() as u32;
        self.vertices.extend_from_slice(&other.vertices);
        self.triangles
            .extend(other.triangles.iter().map(|t| t.map(|i| i + base)));
    }

    pub fn validate_indices(&self) -> Result<(), MeshError> {
        let count = self.vertices.len();
        for tri in &self.triangles {
            for &i in tri {
                if i as usize >= count {
                    return Err(MeshError::IndexOutOfRange {
                        index: i as usize,
                        count,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Closed axis-aligned box as 12 triangles with outward winding.
pub fn box_mesh(aabb: &Aabb) -> TriMesh {
    let (lo, hi) = (aabb.min, aabb.max);
    let v = vec![
        Vec3::new(lo.x, lo.y, lo.z),
        Vec3::new(hi.x, lo.y, lo.z),
        Vec3::new(hi.x, hi.y, lo.z),
        Vec3::new(lo.x, hi.y, lo.z),
        Vec3::new(lo.x, lo.y, hi.z),
        Vec3::new(hi.x, lo.y, hi.z),
        Vec3::new(hi.x, hi.y, hi.z),
        Vec3::new(lo.x, hi.y, hi.z),
    ];
    let tris = vec![
        // -z
        [0, 2, 1],
        [0, 3, 2],
        // +z
        [4, 5, 6],
        [4, 6, 7],
        // -y
        [0, 1, 5],
        [0, 5, 4],
        // +y
        [3, 7, 6],
        [3, 6, 2],
        // -x
        [0, 4, 7],
        [0, 7, 3],
        // +x
        [1, 2, 6],
        [1, 6, 5],
    ];
    TriMesh::new(v, tris)
}

// ---------------------------------------------------------------------------
// OBJ

/// Parse OBJ text: `v` and `f` records; everything else is skipped.
/// Faces with more than three vertices are fan-triangulated.
pub fn parse_obj(text: &str) -> Result<TriMesh, MeshError> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let mut coord = |what: &str| -> Result<f64, MeshError> {
                    parts
                        .next()
                        .ok_or_else(|| MeshError::Malformed {
                            format: "OBJ",
                            line: lineno + 1,
                            reason: format!("missing {what} coordinate"),
                        })?
                        .parse()
                        .map_err(|e| MeshError::Malformed {
                            format: "OBJ",
                            line: lineno + 1,
                            reason: format!("bad {what} coordinate: {e}"),
                        })
                };
                let (x, y, z) = (coord("x")?, coord("y")?, coord("z")?);
                vertices.push(Vec3::new(x, y, z));
            }
            Some("f") => {
                let mut idx = Vec::new();
                for token in parts {
                    // `f v`, `f v/vt`, `f v/vt/vn`, `f v//vn`
                    let v = token.split('/').next().unwrap_or(token);
                    let i: i64 = v.parse().map_err(|e| MeshError::Malformed {
                        format: "OBJ",
                        line: lineno + 1,
                        reason: format!("bad face index `{token}`: {e}"),
                    })?;
                    let i = if i < 0 {
                        vertices.len() as i64 + i
                    } else {
                        i - 1
                    };
                    if i < 0 || i as usize >= vertices.len() {
                        return Err(MeshError::IndexOutOfRange {
                            index: i.max(0) as usize,
                            count: vertices.len(),
                        });
                    }
                    idx.push(i as u32);
                }
                if idx.len() < 3 {
                    return Err(MeshError::Malformed {
                        format: "OBJ",
                        line: lineno + 1,
                        reason: "face with fewer than 3 vertices".into(),
                    });
                }
                for k in 1..idx.len() - 1 {
                    triangles.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    Ok(TriMesh::new(vertices, triangles))
}

pub fn write_obj<W: Write>(mesh: &TriMesh, mut w: W) -> Result<(), MeshError> {
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// PLY

#[derive(Debug, Clone, Copy, PartialEq)]
enum PlyFormat {
    Ascii,
    BinaryLittleEndian,
}

#[derive(Debug, Clone, Copy)]
enum PlyScalar {
    F32,
    F64,
    U8,
    I8,
    U16,
    I16,
    U32,
    I32,
}

impl PlyScalar {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "float" | "float32" => PlyScalar::F32,
            "double" | "float64" => PlyScalar::F64,
            "uchar" | "uint8" => PlyScalar::U8,
            "char" | "int8" => PlyScalar::I8,
            "ushort" | "uint16" => PlyScalar::U16,
            "short" | "int16" => PlyScalar::I16,
            "uint" | "uint32" => PlyScalar::U32,
            "int" | "int32" => PlyScalar::I32,
            _ => None,
        })
    }

    fn size(&self) -> usize {
        match self {
            PlyScalar::U8 | PlyScalar::I8 => 1,
            PlyScalar::U16 | PlyScalar::I16 => 2,
            PlyScalar::F32 | PlyScalar::U32 | PlyScalar::I32 => 4,
            PlyScalar::F64 => 8,
        }
    }

    fn read(&self, bytes: &[u8]) -> f64 {
        match self {
            PlyScalar::F32 => f32::from_le_bytes(bytes[..4].try_into().unwrap()) as f64,
            PlyScalar::F64 => f64::from_le_bytes(bytes[..8].try_into().unwrap()),
            PlyScalar::U8 => bytes[0] as f64,
            PlyScalar::I8 => bytes[0] as i8 as f64,
            PlyScalar::U16 => u16::from_le_bytes(bytes[..2].try_into().unwrap()) as f64,
            PlyScalar::I16 => i16::from_le_bytes(bytes[..2].try_into().unwrap()) as f64,
            PlyScalar::U32 => u32::from_le_bytes(bytes[..4].try_into().unwrap()) as f64,
            PlyScalar::I32 => i32::from_le_bytes(bytes[..4].try_into().unwrap()) as f64,
        }
    }
}

#[derive(Debug)]
struct PlyProperty {
    name: String,
    scalar: PlyScalar,
    list_count: Option<PlyScalar>,
}

#[derive(Debug)]
struct PlyElement {
    name: String,
    count: usize,
    properties: Vec<PlyProperty>,
}

/// Vertices, optional normals, optional faces parsed from a PLY body.
#[derive(Debug, Default)]
pub struct PlyData {
    pub vertices: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
}

impl PlyData {
    pub fn into_mesh(self) -> TriMesh {
        TriMesh::new(self.vertices, self.triangles)
    }
}

fn ply_malformed(line: usize, reason: impl Into<String>) -> MeshError {
    MeshError::Malformed {
        format: "PLY",
        line,
        reason: reason.into(),
    }
}

/// Parse a PLY file (ascii or binary little-endian).
pub fn parse_ply(bytes: &[u8]) -> Result<PlyData, MeshError> {
    // header is always ascii, terminated by `end_header`
    let mut cursor = 0usize;
    let mut lineno = 0usize;
    let mut next_line = |cursor: &mut usize| -> Result<String, MeshError> {
        let start = *cursor;
        while *cursor < bytes.len() && bytes[*cursor] != b'\n' {
            *cursor += 1;
        }
        if *cursor >= bytes.len() {
            return Err(ply_malformed(lineno, "unexpected end of header"));
        }
        let line = String::from_utf8_lossy(&bytes[start..*cursor]).trim().to_string();
        *cursor += 1;
        Ok(line)
    };

    let magic = next_line(&mut cursor)?;
    lineno += 1;
    if magic != "ply" {
        return Err(ply_malformed(1, "missing `ply` magic"));
    }
    let mut format = None;
    let mut elements: Vec<PlyElement> = Vec::new();
    loop {
        let line = next_line(&mut cursor)?;
        lineno += 1;
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("format") => {
                format = Some(match parts.next() {
                    Some("ascii") => PlyFormat::Ascii,
                    Some("binary_little_endian") => PlyFormat::BinaryLittleEndian,
                    other => {
                        return Err(ply_malformed(
                            lineno,
                            format!("unsupported format {other:?}"),
                        ))
                    }
                });
            }
            Some("comment") | Some("obj_info") => {}
            Some("element") => {
                let name = parts
                    .next()
                    .ok_or_else(|| ply_malformed(lineno, "element missing name"))?;
                let count: usize = parts
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| ply_malformed(lineno, "element missing count"))?;
                elements.push(PlyElement {
                    name: name.to_string(),
                    count,
                    properties: Vec::new(),
                });
            }
            Some("property") => {
                let element = elements
                    .last_mut()
                    .ok_or_else(|| ply_malformed(lineno, "property before element"))?;
                let first = parts
                    .next()
                    .ok_or_else(|| ply_malformed(lineno, "property missing type"))?;
                if first == "list" {
                    let count_ty = parts
                        .next()
                        .and_then(PlyScalar::parse)
                        .ok_or_else(|| ply_malformed(lineno, "bad list count type"))?;
                    let item_ty = parts
                        .next()
                        .and_then(PlyScalar::parse)
                        .ok_or_else(|| ply_malformed(lineno, "bad list item type"))?;
                    let name = parts
                        .next()
                        .ok_or_else(|| ply_malformed(lineno, "list property missing name"))?;
                    element.properties.push(PlyProperty {
                        name: name.to_string(),
                        scalar: item_ty,
                        list_count: Some(count_ty),
                    });
                } else {
                    let scalar = PlyScalar::parse(first)
                        .ok_or_else(|| ply_malformed(lineno, format!("bad type `{first}`")))?;
                    let name = parts
                        .next()
                        .ok_or_else(|| ply_malformed(lineno, "property missing name"))?;
                    element.properties.push(PlyProperty {
                        name: name.to_string(),
                        scalar,
                        list_count: None,
                    });
                }
            }
            Some("end_header") => break,
            other => {
                return Err(ply_malformed(lineno, format!("unexpected `{other:?}`")));
            }
        }
    }
    let format = format.ok_or_else(|| ply_malformed(lineno, "no format line"))?;

    let mut data = PlyData::default();
    match format {
        PlyFormat::Ascii => {
            let body = String::from_utf8_lossy(&bytes[cursor..]);
            let mut tokens = body.split_whitespace();
            for element in &elements {
                for _ in 0..element.count {
                    let mut values = Vec::with_capacity(element.properties.len());
                    let mut lists = Vec::new();
                    for prop in &element.properties {
                        if prop.list_count.is_some() {
                            let n: usize = tokens
                                .next()
                                .and_then(|t| t.parse().ok())
                                .ok_or_else(|| ply_malformed(lineno, "bad list count"))?;
                            let mut list = Vec::with_capacity(n);
                            for _ in 0..n {
                                let v: f64 = tokens
                                    .next()
                                    .and_then(|t| t.parse().ok())
                                    .ok_or_else(|| ply_malformed(lineno, "bad list item"))?;
                                list.push(v);
                            }
                            lists.push((prop.name.clone(), list));
                            values.push(f64::NAN);
                        } else {
                            let v: f64 = tokens
                                .next()
                                .and_then(|t| t.parse().ok())
                                .ok_or_else(|| ply_malformed(lineno, "bad scalar"))?;
                            values.push(v);
                        }
                    }
                    record_ply_row(&mut data, element, &values, &lists)?;
                }
            }
        }
        PlyFormat::BinaryLittleEndian => {
            let mut at = cursor;
            for element in &elements {
                for _ in 0..element.count {
                    let mut values = Vec::with_capacity(element.properties.len());
                    let mut lists = Vec::new();
                    for prop in &element.properties {
                        if let Some(count_ty) = prop.list_count {
                            if at + count_ty.size() > bytes.len() {
                                return Err(ply_malformed(lineno, "truncated binary body"));
                            }
                            let n = count_ty.read(&bytes[at..]) as usize;
                            at += count_ty.size();
                            let mut list = Vec::with_capacity(n);
                            for _ in 0..n {
                                if at + prop.scalar.size() > bytes.len() {
                                    return Err(ply_malformed(lineno, "truncated binary body"));
                                }
                                list.push(prop.scalar.read(&bytes[at..]));
                                at += prop.scalar.size();
                            }
                            lists.push((prop.name.clone(), list));
                            values.push(f64::NAN);
                        } else {
                            if at + prop.scalar.size() > bytes.len() {
                                return Err(ply_malformed(lineno, "truncated binary body"));
                            }
                            values.push(prop.scalar.read(&bytes[at..]));
                            at += prop.scalar.size();
                        }
                    }
                    record_ply_row(&mut data, element, &values, &lists)?;
                }
            }
        }
    }
    Ok(data)
}

fn record_ply_row(
    data: &mut PlyData,
    element: &PlyElement,
    values: &[f64],
    lists: &[(String, Vec<f64>)],
) -> Result<(), MeshError> {
    let get = |name: &str| -> Option<f64> {
        element
            .properties
            .iter()
            .position(|p| p.name == name)
            .map(|i| values[i])
    };
    match element.name.as_str() {
        "vertex" => {
            let (x, y, z) = match (get("x"), get("y"), get("z")) {
                (Some(x), Some(y), Some(z)) => (x, y, z),
                _ => return Err(ply_malformed(0, "vertex element without x/y/z")),
            };
            data.vertices.push(Vec3::new(x, y, z));
            if let (Some(nx), Some(ny), Some(nz)) = (get("nx"), get("ny"), get("nz")) {
                data.normals.push(Vec3::new(nx, ny, nz));
            }
        }
        "face" => {
            for (name, list) in lists {
                if name == "vertex_indices" || name == "vertex_index" {
                    if list.len() < 3 {
                        return Err(ply_malformed(0, "face with fewer than 3 vertices"));
                    }
                    for k in 1..list.len() - 1 {
                        data.triangles.push([
                            list[0] as u32,
                            list[k] as u32,
                            list[k + 1] as u32,
                        ]);
                    }
                }
            }
        }
        _ => {}
    }
    Ok(())
}

/// Write an ascii PLY with positions, optional normals (`nx ny nz`), and
/// optional faces.
pub fn write_ply<W: Write>(
    vertices: &[Vec3],
    normals: Option<&[Vec3]>,
    triangles: &[[u32; 3]],
    mut w: W,
) -> Result<(), MeshError> {
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "element vertex {}", vertices.len())?;
    writeln!(w, "property double x")?;
    writeln!(w, "property double y")?;
    writeln!(w, "property double z")?;
    if normals.is_some() {
        writeln!(w, "property double nx")?;
        writeln!(w, "property double ny")?;
        writeln!(w, "property double nz")?;
    }
    if !triangles.is_empty() {
        writeln!(w, "element face {}", triangles.len())?;
        writeln!(w, "property list uchar uint vertex_indices")?;
    }
    writeln!(w, "end_header")?;
    for (i, v) in vertices.iter().enumerate() {
        write!(w, "{} {} {}", v.x, v.y, v.z)?;
        if let Some(ns) = normals {
            let n = ns[i];
            write!(w, " {} {} {}", n.x, n.y, n.z)?;
        }
        writeln!(w)?;
    }
    for t in triangles {
        writeln!(w, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}

/// Load a mesh from disk, dispatching on the file extension.
pub fn load_mesh(path: &std::path::Path) -> Result<TriMesh, MeshError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    match ext.as_str() {
        "obj" => {
            let text = std::fs::read_to_string(path)?;
            parse_obj(&text)
        }
        "ply" => {
            let bytes = std::fs::read(path)?;
            Ok(parse_ply(&bytes)?.into_mesh())
        }
        other => Err(MeshError::UnsupportedFormat(other.to_string())),
    }
}

/// Read lines from a buffered reader until `end_header`; helper for sniffing
/// PLY payload kinds without a full parse.
pub fn ply_has_normals<R: BufRead>(mut r: R) -> Result<bool, MeshError> {
    let mut line = String::new();
    let mut found = false;
    loop {
        line.clear();
        if r.read_line(&mut line)? == 0 {
            break;
        }
        let trimmed = line.trim();
        if trimmed.ends_with(" nx") {
            found = true;
        }
        if trimmed == "end_header" {
            break;
        }
    }
    Ok(found)
}
