//! Mesh and solution export.
//!
//! The OBJ writer emits the graph surface as a triangulated height field,
//! optionally followed by its reflection through height zero so the doubled
//! surface can be inspected as one object. Coordinates can stay in the
//! half-plane or be pushed through the disk model. All floats use the
//! shortest round-trip decimal form, so identical inputs give identical
//! bytes.

use std::io::{self, Write};

use crate::geom::HPoint;
use crate::mesh::Mesh;

/// Half-plane to disk model, w = (z - i) / (z + i). The basepoint (0, 1)
/// goes to the origin and the ideal boundary to the unit circle.
pub fn disk_point(p: HPoint) -> [f64; 2] {
    let denom = p.x * p.x + (p.y + 1.0) * (p.y + 1.0);
    [
        (p.x * p.x + p.y * p.y - 1.0) / denom,
        -2.0 * p.x / denom,
    ]
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ObjOptions<'a> {
    /// Append the height-negated copy with reversed winding.
    pub mirror: bool,
    /// Map the horizontal coordinates through the disk model.
    pub disk: bool,
    /// Per-vertex scalar rendered as a vertex color ramp.
    pub color: Option<&'a [f64]>,
    /// Comment lines placed at the top of the file.
    pub comments: &'a [String],
}

fn ramp(t: f64) -> [f64; 3] {
    [t, 0.25 + 0.5 * (1.0 - (2.0 * t - 1.0).abs()), 1.0 - t]
}

pub fn write_obj<W: Write>(
    out: &mut W,
    mesh: &Mesh,
    u: &[f64],
    opts: &ObjOptions,
) -> io::Result<()> {
    assert_eq!(u.len(), mesh.points.len());
    for line in opts.comments {
        writeln!(out, "# {line}")?;
    }
    let scale = opts.color.map(|c| {
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    });
    let sheets: &[f64] = if opts.mirror { &[1.0, -1.0] } else { &[1.0] };
    for &sign in sheets {
        for (i, &p) in mesh.points.iter().enumerate() {
            let [x, y] = if opts.disk {
                disk_point(p)
            } else {
                [p.x, p.y]
            };
            let z = sign * u[i];
            match (opts.color, scale) {
                (Some(c), Some((lo, hi))) => {
                    let t = if hi > lo { (c[i] - lo) / (hi - lo) } else { 0.5 };
                    let [r, g, b] = ramp(t);
                    writeln!(out, "v {x} {y} {z} {r} {g} {b}")?;
                }
                _ => writeln!(out, "v {x} {y} {z}")?,
            }
        }
    }
    let nv = mesh.points.len();
    for tri in &mesh.triangles {
        writeln!(out, "f {} {} {}", tri[0] + 1, tri[1] + 1, tri[2] + 1)?;
    }
    if opts.mirror {
        for tri in &mesh.triangles {
            writeln!(
                out,
                "f {} {} {}",
                nv + tri[1] + 1,
                nv + tri[0] + 1,
                nv + tri[2] + 1
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_finite, FiniteParams};
    use crate::mesh::MeshParams;

    fn small_mesh() -> Mesh {
        let poly = build_finite(&FiniteParams::new(1)).unwrap();
        Mesh::build(&poly, &MeshParams::new(0.4)).unwrap()
    }

    #[test]
    fn disk_map_sends_the_domain_into_the_unit_disk() {
        let mesh = small_mesh();
        for &p in &mesh.points {
            let [x, y] = disk_point(p);
            assert!(x * x + y * y < 1.0);
        }
        let center = disk_point(HPoint::new(0.0, 1.0));
        assert_eq!(center, [0.0, 0.0]);
    }

    #[test]
    fn obj_counts_and_mirror_negation() {
        let mesh = small_mesh();
        let u: Vec<f64> = mesh.points.iter().map(|p| p.x + 0.3).collect();
        let mut buf = Vec::new();
        let comments = vec!["config abc".to_string()];
        write_obj(
            &mut buf,
            &mesh,
            &u,
            &ObjOptions {
                mirror: true,
                comments: &comments,
                ..ObjOptions::default()
            },
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let verts: Vec<&str> = text.lines().filter(|l| l.starts_with("v ")).collect();
        let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(verts.len(), 2 * mesh.points.len());
        assert_eq!(faces.len(), 2 * mesh.triangles.len());
        assert!(text.starts_with("# config abc\n"));
        let nv = mesh.points.len();
        for i in 0..nv {
            let a: Vec<f64> = verts[i].split_whitespace().skip(1).map(|s| s.parse().unwrap()).collect();
            let b: Vec<f64> = verts[nv + i].split_whitespace().skip(1).map(|s| s.parse().unwrap()).collect();
            assert_eq!(a[0], b[0]);
            assert_eq!(a[1], b[1]);
            assert_eq!(a[2], -b[2]);
        }
        for f in faces {
            for ix in f.split_whitespace().skip(1) {
                let ix: usize = ix.parse().unwrap();
                assert!(ix >= 1 && ix <= 2 * nv);
            }
        }
    }

    #[test]
    fn identical_inputs_write_identical_bytes() {
        let mesh = small_mesh();
        let u: Vec<f64> = mesh.points.iter().map(|p| (p.x * 1.7).sin()).collect();
        let render = || {
            let mut buf = Vec::new();
            write_obj(
                &mut buf,
                &mesh,
                &u,
                &ObjOptions {
                    mirror: true,
                    disk: true,
                    color: Some(&u),
                    comments: &[],
                },
            )
            .unwrap();
            buf
        };
        assert_eq!(render(), render());
    }
}
