//! OBJ export of truncated-octahedron cells.

use std::io::{self, Write};

use tricolor::lattice::{cell_vertex_offsets2, NEIGHBOR_OFFSETS};
use tricolor::{CellCoord, Color};

pub const VERTICES_PER_CELL: usize = 24;
pub const FACES_PER_CELL: usize = 14;

/// Material used for cells without a color.
pub const UNCOLORED: &str = "uncolored";

/// Polygon soup with one material per face.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Material name and zero-based vertex indices, counterclockwise seen
    /// from outside the cell.
    pub faces: Vec<(&'static str, Vec<usize>)>,
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Vertex indices (into [`cell_vertex_offsets2`]) of the face toward each
/// neighbor offset, ordered counterclockwise about the outward normal.
fn face_loops() -> Vec<Vec<usize>> {
    let verts = cell_vertex_offsets2().map(|v| v.map(|x| x as f64));
    NEIGHBOR_OFFSETS
        .iter()
        .map(|n| {
            let n = n.map(|x| x as f64);
            // the face lies on the bisector plane 2v·n = |n|², centered at n
            let rel = |i: usize| -> [f64; 3] { std::array::from_fn(|k| verts[i][k] - n[k]) };
            let mut idx: Vec<usize> = (0..24).filter(|&i| dot(verts[i], n) == dot(n, n)).collect();
            let u = rel(idx[0]);
            let v = cross(n, u);
            let angle = |i: usize| dot(rel(i), v).atan2(dot(rel(i), u));
            idx.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
            idx
        })
        .collect()
}

pub fn material(c: Option<Color>) -> &'static str {
    c.map_or(UNCOLORED, Color::name)
}

impl Mesh {
    /// One truncated octahedron per cell: 24 vertices at `c` plus the
    /// permutations of `(0, ±1/2, ±1)`, 6 square and 8 hexagonal faces.
    pub fn from_cells(cells: &[(CellCoord, Option<Color>)]) -> Mesh {
        let loops = face_loops();
        let offsets = cell_vertex_offsets2();
        let mut mesh = Mesh::default();
        for &(c, color) in cells {
            let base = mesh.vertices.len();
            let p = c.coords();
            mesh.vertices.extend(
                offsets
                    .iter()
                    .map(|o| std::array::from_fn(|k| p[k] as f64 + o[k] as f64 / 2.0)),
            );
            for l in &loops {
                mesh.faces
                    .push((material(color), l.iter().map(|&i| base + i).collect()));
            }
        }
        mesh
    }

    pub fn write_obj<W: Write>(&self, mut w: W, mtl_name: &str) -> io::Result<()> {
        writeln!(w, "mtllib {mtl_name}")?;
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
        }
        let mut current = "";
        for (m, f) in &self.faces {
            if *m != current {
                writeln!(w, "usemtl {m}")?;
                current = m;
            }
            let idx: Vec<String> = f.iter().map(|i| (i + 1).to_string()).collect();
            writeln!(w, "f {}", idx.join(" "))?;
        }
        Ok(())
    }
}

pub fn write_mtl<W: Write>(mut w: W) -> io::Result<()> {
    for (name, rgb) in [
        ("red", [0.85, 0.1, 0.1]),
        ("yellow", [0.95, 0.85, 0.1]),
        ("blue", [0.1, 0.25, 0.85]),
        (UNCOLORED, [0.6, 0.6, 0.6]),
    ] {
        writeln!(w, "newmtl {name}")?;
        writeln!(w, "Kd {} {} {}", rgb[0], rgb[1], rgb[2])?;
        writeln!(w, "d 1.0")?;
        writeln!(w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn centroid(mesh: &Mesh, f: &[usize]) -> [f64; 3] {
        std::array::from_fn(|k| {
            f.iter().map(|&i| mesh.vertices[i][k]).sum::<f64>() / f.len() as f64
        })
    }

    #[test]
    fn one_cell() {
        let m = Mesh::from_cells(&[(CellCoord::ORIGIN, Some(Color::Red))]);
        assert_eq!(m.vertices.len(), VERTICES_PER_CELL);
        assert_eq!(m.faces.len(), FACES_PER_CELL);
        let squares = m.faces.iter().filter(|(_, f)| f.len() == 4).count();
        let hexagons = m.faces.iter().filter(|(_, f)| f.len() == 6).count();
        assert_eq!((squares, hexagons), (6, 8));
    }

    #[test]
    fn face_centers_are_midpoints_and_faces_wind_outward() {
        let c = CellCoord::new(3, -1, 5).unwrap();
        let m = Mesh::from_cells(&[(c, None)]);
        for ((_, f), n) in m.faces.iter().zip(NEIGHBOR_OFFSETS) {
            let ctr = centroid(&m, f);
            for k in 0..3 {
                assert_eq!(ctr[k], c.coords()[k] as f64 + n[k] as f64 / 2.0);
            }
            // Newell normal points along the outward offset
            let mut normal = [0.0; 3];
            for i in 0..f.len() {
                let (a, b) = (m.vertices[f[i]], m.vertices[f[(i + 1) % f.len()]]);
                normal[0] += (a[1] - b[1]) * (a[2] + b[2]);
                normal[1] += (a[2] - b[2]) * (a[0] + b[0]);
                normal[2] += (a[0] - b[0]) * (a[1] + b[1]);
            }
            let d: f64 = (0..3).map(|k| normal[k] * n[k] as f64).sum();
            assert!(d > 0.0);
        }
    }

    #[test]
    fn empty_mesh_writes_header_only() {
        let mut buf = Vec::new();
        Mesh::from_cells(&[]).write_obj(&mut buf, "x.mtl").unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "mtllib x.mtl\n");
    }
}
