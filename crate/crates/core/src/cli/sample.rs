use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::surface::{LocalGeometry, Rect, SurfacePatch, DEFAULT_SURFACE_ORDER, V5};

pub const CSV_HEADER: [&str; 11] = [
    "s",
    "t",
    "x1",
    "x2",
    "x3",
    "x4",
    "x5",
    "K",
    "Kd_abs",
    "H_max_component",
    "sphere_residual",
];

/// Linear map E^5_2 -> R^3 for mesh export.
#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    /// 1-based coordinate indices.
    Coords([usize; 3]),
    Matrix([[f64; 5]; 3]),
}

impl Projection {
    pub fn parse(s: &str) -> std::result::Result<Projection, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        match parts.len() {
            3 => {
                let mut idx = [0usize; 3];
                for (i, p) in parts.iter().enumerate() {
                    let v: usize = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
                    if !(1..=5).contains(&v) {
                        return Err(format!("coordinate index {v} is not in 1..=5"));
                    }
                    idx[i] = v;
                }
                Ok(Projection::Coords(idx))
            }
            15 => {
                let mut m = [[0.0; 5]; 3];
                for (k, p) in parts.iter().enumerate() {
                    m[k / 5][k % 5] = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
                }
                Ok(Projection::Matrix(m))
            }
            n => Err(format!(
                "expected 3 indices or 15 matrix entries, got {n} values"
            )),
        }
    }

    pub fn apply(&self, x: &V5) -> [f64; 3] {
        match self {
            Projection::Coords(idx) => idx.map(|i| x[i - 1]),
            Projection::Matrix(m) => m.map(|row| (0..5).map(|j| row[j] * x[j]).sum()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Projection::Coords(idx) => format!("coordinates x{} x{} x{}", idx[0], idx[1], idx[2]),
            Projection::Matrix(m) => {
                let rows: Vec<String> = m
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|v| format!("{v:?}"))
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                format!("matrix [{}]", rows.join("; "))
            }
        }
    }
}

/// One grid sample; curvature fields are NaN where the geometry fails.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub s: f64,
    pub t: f64,
    pub x: V5,
    pub k: f64,
    pub kd_abs: f64,
    pub h_max: f64,
    pub sphere: f64,
}

impl SampleRow {
    fn fields(&self) -> [f64; 11] {
        let x = &self.x;
        [
            self.s,
            self.t,
            x[0],
            x[1],
            x[2],
            x[3],
            x[4],
            self.k,
            self.kd_abs,
            self.h_max,
            self.sphere,
        ]
    }
}

pub fn sample(
    patch: &dyn SurfacePatch,
    rect: Rect,
    (ns, nt): (usize, usize),
) -> Result<Vec<SampleRow>> {
    if ns < 2 || nt < 2 {
        return Err(Error::InvalidArgument(format!(
            "sampling grid must be at least 2x2, got {ns}x{nt}"
        )));
    }
    rect.grid(ns, nt)
        .into_par_iter()
        .map(|(s, t)| {
            let x = patch.position(s, t)?;
            let sphere = (crate::surface::ip(&x, &x) - 1.0).abs();
            let (k, kd_abs, h_max) = match LocalGeometry::new(patch, s, t, DEFAULT_SURFACE_ORDER) {
                Ok(g) => {
                    let r = g.report();
                    (r.k, r.k_normal_abs, r.mean_curvature_max)
                }
                Err(_) => (f64::NAN, f64::NAN, f64::NAN),
            };
            Ok(SampleRow {
                s,
                t,
                x,
                k,
                kd_abs,
                h_max,
                sphere,
            })
        })
        .collect()
}

/// `{:?}` prints the shortest string that parses back to the same `f64`.
fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_csv(rows: &[SampleRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record(r.fields().map(num)).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ASCII output"))
}

/// Wavefront OBJ: one vertex per grid point (grid order, `s` major), two
/// triangles per grid cell.
pub fn write_obj(
    rows: &[SampleRow],
    (ns, nt): (usize, usize),
    projection: &Projection,
    label: &str,
) -> Result<String> {
    if rows.len() != ns * nt {
        return Err(Error::DimensionMismatch {
            expected: ns * nt,
            got: rows.len(),
        });
    }
    let mut out = String::new();
    writeln!(out, "# pslab surface mesh: {label}").unwrap();
    writeln!(out, "# grid {ns}x{nt}").unwrap();
    writeln!(out, "# projection: {}", projection.describe()).unwrap();
    for r in rows {
        let p = projection.apply(&r.x);
        writeln!(out, "v {} {} {}", num(p[0]), num(p[1]), num(p[2])).unwrap();
    }
    let id = |i: usize, j: usize| i * nt + j + 1;
    for i in 0..ns - 1 {
        for j in 0..nt - 1 {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            writeln!(out, "f {a} {b} {c}").unwrap();
            writeln!(out, "f {a} {c} {d}").unwrap();
        }
    }
    Ok(out)
}

pub fn rows_json(rows: &[SampleRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                let f = r.fields();
                let obj: serde_json::Map<String, Value> = CSV_HEADER
                    .iter()
                    .zip(f)
                    .map(|(k, v)| (k.to_string(), json!(v)))
                    .collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::VeronesePatch;

    #[test]
    fn csv_round_trips_bit_exactly() {
        let rows = sample(&VeronesePatch, Rect::new((-1.0, 1.0), (0.0, 0.3)), (3, 4)).unwrap();
        let text = write_csv(&rows).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), CSV_HEADER);
        let back: Vec<Vec<f64>> = rd
            .records()
            .map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(back.len(), 12);
        for (row, vals) in rows.iter().zip(&back) {
            for (a, b) in row.fields().iter().zip(vals) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn obj_has_two_triangles_per_cell() {
        let rows = sample(&VeronesePatch, VeronesePatch.domain(), (4, 3)).unwrap();
        let p = Projection::parse("3,4,5").unwrap();
        let obj = write_obj(&rows, (4, 3), &p, "v").unwrap();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 12);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 12);
        assert!(obj.contains("# projection: coordinates x3 x4 x5"));
    }

    #[test]
    fn projections() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(
            Projection::parse("1,5,2").unwrap().apply(&x),
            [1.0, 5.0, 2.0]
        );
        let m = Projection::parse("1,0,0,0,0, 0,1,1,0,0, 0,0,0,0,2").unwrap();
        assert_eq!(m.apply(&x), [1.0, 5.0, 10.0]);
        assert!(Projection::parse("0,1,2").is_err());
        assert!(Projection::parse("1,2").is_err());
    }

    proptest::proptest! {
        #[test]
        fn csv_round_trips_arbitrary_values(
            vals in proptest::collection::vec(proptest::num::f64::ANY, 11 * 3),
        ) {
            let rows: Vec<SampleRow> = vals
                .chunks(11)
                .map(|v| SampleRow {
                    s: v[0],
                    t: v[1],
                    x: [v[2], v[3], v[4], v[5], v[6]],
                    k: v[7],
                    kd_abs: v[8],
                    h_max: v[9],
                    sphere: v[10],
                })
                .collect();
            let text = write_csv(&rows).unwrap();
            let mut rd = csv::Reader::from_reader(text.as_bytes());
            let back: Vec<f64> = rd
                .records()
                .flat_map(|r| r.unwrap().iter().map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>())
                .collect();
            proptest::prop_assert_eq!(back.len(), vals.len());
            for (a, b) in vals.iter().zip(&back) {
                proptest::prop_assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
            }
        }
    }
}
