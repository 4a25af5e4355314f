//! Triangle meshes of ellipsoids for plotting.

use std::io::Write;

use serde_json::{json, Value};

use super::Ellipsoid;
use crate::error::{Error, Result};
use crate::numerics::real3::Vec3;
use crate::scalar::Real;

pub const MIN_RESOLUTION: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh<T> {
    pub vertices: Vec<Vec3<T>>,
    /// Zero-based, counter-clockwise seen from outside.
    pub faces: Vec<[usize; 3]>,
}

/// UV sphere with `resolution` longitudes and `resolution - 1` latitude rings
/// plus both poles, pushed through the ellipsoid's affine parametrization.
pub fn mesh<T: Real>(e: &Ellipsoid<T>, resolution: usize) -> Result<Mesh<T>> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::BadResolution(resolution));
    }
    let r = resolution;
    let mut vertices = Vec::with_capacity(r * (r - 1) + 2);
    vertices.push(e.surface_point(&[T::zero(), T::zero(), T::one()]));
    for ring in 1..r {
        let polar = T::PI() * T::of(ring as f64) / T::of(r as f64);
        for k in 0..r {
            let azimuth = T::of(2.0) * T::PI() * T::of(k as f64) / T::of(r as f64);
            let u = [polar.sin() * azimuth.cos(), polar.sin() * azimuth.sin(), polar.cos()];
            vertices.push(e.surface_point(&u));
        }
    }
    vertices.push(e.surface_point(&[T::zero(), T::zero(), -T::one()]));

    let south = vertices.len() - 1;
    let at = |ring: usize, k: usize| 1 + (ring - 1) * r + k % r;
    let mut faces = Vec::with_capacity(2 * r * (r - 1));
    for k in 0..r {
        faces.push([0, at(1, k), at(1, k + 1)]);
    }
    for ring in 1..r - 1 {
        for k in 0..r {
            let (a, b) = (at(ring, k), at(ring, k + 1));
            let (c, d) = (at(ring + 1, k), at(ring + 1, k + 1));
            faces.push([a, c, d]);
            faces.push([a, d, b]);
        }
    }
    for k in 0..r {
        faces.push([south, at(r - 1, k + 1), at(r - 1, k)]);
    }
    Ok(Mesh { vertices, faces })
}

impl<T: Real> Mesh<T> {
    /// Wavefront OBJ. A reference sphere, if given, becomes a second object.
    pub fn write_obj<W: Write>(&self, sphere: Option<&Mesh<T>>, out: &mut W) -> Result<()> {
        writeln!(out, "o ellipsoid")?;
        write_obj_body(self, 0, out)?;
        if let Some(s) = sphere {
            writeln!(out, "o bloch_sphere")?;
            write_obj_body(s, self.vertices.len(), out)?;
        }
        Ok(())
    }

    pub fn to_json(&self, sphere: Option<&Mesh<T>>) -> Value {
        let mut v = json!({ "schema_version": "1" });
        v["vertices"] = vertices_json(&self.vertices);
        v["faces"] = json!(self.faces);
        if let Some(s) = sphere {
            v["sphere"] = json!({ "vertices": vertices_json(&s.vertices), "faces": s.faces });
        }
        v
    }
}

fn vertices_json<T: Real>(vs: &[Vec3<T>]) -> Value {
    Value::Array(vs.iter().map(|v| json!(v.map(|x| x.as_f64()))).collect())
}

fn write_obj_body<T: Real, W: Write>(m: &Mesh<T>, offset: usize, out: &mut W) -> Result<()> {
    for v in &m.vertices {
        writeln!(out, "v {} {} {}", v[0].as_f64(), v[1].as_f64(), v[2].as_f64())?;
    }
    for f in &m.faces {
        writeln!(
            out,
            "f {} {} {}",
            f[0] + offset + 1,
            f[1] + offset + 1,
            f[2] + offset + 1
        )?;
    }
    Ok(())
}
