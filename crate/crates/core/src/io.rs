//! Legacy VTK snapshots and CSV tables.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::NodalField;
use crate::mesh::{Mesh, Point, ZoneLabel};
use crate::simulation::SeriesRow;

/// Writes the mesh with `phi`, `u` and the zone label of every element as a
/// legacy ASCII unstructured grid. With `mask_pressure`, `u` is written as NaN
/// at nodes where `phi = -1`.
pub fn write_vtk(
    out: &mut impl Write,
    mesh: &Mesh,
    phi: &NodalField,
    u: &NodalField,
    zones: &[ZoneLabel],
    mask_pressure: bool,
    title: &str,
) -> Result<()> {
    phi.check_mesh(mesh)?;
    u.check_mesh(mesh)?;
    write_geometry(out, mesh, title)?;
    writeln!(out, "CELL_DATA {}", mesh.num_elements())?;
    writeln!(out, "SCALARS zone int 1\nLOOKUP_TABLE default")?;
    for z in zones {
        writeln!(out, "{}", z.code())?;
    }
    writeln!(out, "POINT_DATA {}", mesh.num_nodes())?;
    writeln!(out, "SCALARS phi double 1\nLOOKUP_TABLE default")?;
    for v in phi.iter() {
        writeln!(out, "{v:.16e}")?;
    }
    writeln!(out, "SCALARS u double 1\nLOOKUP_TABLE default")?;
    for (v, p) in u.iter().zip(phi.iter()) {
        if mask_pressure && *p <= -1.0 {
            writeln!(out, "nan")?;
        } else {
            writeln!(out, "{v:.16e}")?;
        }
    }
    Ok(())
}

/// Writes only the triangulation.
pub fn write_mesh_vtk(out: &mut impl Write, mesh: &Mesh, title: &str) -> Result<()> {
    write_geometry(out, mesh, title)
}

fn write_geometry(out: &mut impl Write, mesh: &Mesh, title: &str) -> Result<()> {
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "{}", title.lines().next().unwrap_or(""))?;
    writeln!(out, "ASCII\nDATASET UNSTRUCTURED_GRID")?;
    writeln!(out, "POINTS {} double", mesh.num_nodes())?;
    for p in mesh.nodes() {
        writeln!(out, "{:.16e} {:.16e} 0.0", p[0], p[1])?;
    }
    let n = mesh.num_elements();
    writeln!(out, "CELLS {n} {}", 4 * n)?;
    for v in mesh.elements() {
        writeln!(out, "3 {} {} {}", v[0], v[1], v[2])?;
    }
    writeln!(out, "CELL_TYPES {n}")?;
    for _ in 0..n {
        writeln!(out, "5")?;
    }
    Ok(())
}

pub fn write_vtk_file(
    path: &Path,
    mesh: &Mesh,
    phi: &NodalField,
    u: &NodalField,
    zones: &[ZoneLabel],
    mask_pressure: bool,
    title: &str,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_vtk(&mut w, mesh, phi, u, zones, mask_pressure, title)?;
    w.flush()?;
    Ok(())
}

/// Contents of a legacy VTK file written by this module.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VtkData {
    pub points: Vec<Point>,
    pub cells: Vec<[usize; 3]>,
    pub cell_types: Vec<u8>,
    pub cell_data: BTreeMap<String, Vec<f64>>,
    pub point_data: BTreeMap<String, Vec<f64>>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Reads the subset of the legacy format produced by [`write_vtk`].
pub fn read_vtk(input: impl BufRead) -> Result<VtkData> {
    let mut lines = Vec::new();
    for line in input.lines() {
        lines.push(line?);
    }
    if !lines.first().is_some_and(|l| l.starts_with("# vtk DataFile")) {
        return Err(parse_err(1, "missing `# vtk DataFile` header"));
    }
    let mut data = VtkData::default();
    let mut i = 2;
    let mut section: Option<(bool, usize)> = None;
    let next_values = |i: &mut usize, count: usize| -> Result<Vec<f64>> {
        let mut vals = Vec::with_capacity(count);
        while vals.len() < count {
            let line = lines.get(*i).ok_or_else(|| parse_err(*i + 1, "unexpected end of file"))?;
            for tok in line.split_whitespace() {
                vals.push(tok.parse::<f64>().map_err(|_| parse_err(*i + 1, format!("bad number `{tok}`")))?);
            }
            *i += 1;
        }
        Ok(vals)
    };
    while i < lines.len() {
        let line = lines[i].trim();
        let tok: Vec<&str> = line.split_whitespace().collect();
        i += 1;
        let count_at = |k: usize| -> Result<usize> {
            tok.get(k).and_then(|s| s.parse().ok()).ok_or_else(|| parse_err(i, format!("bad count in `{line}`")))
        };
        match tok.first().copied() {
            None | Some("ASCII") | Some("DATASET") => {}
            Some("POINTS") => {
                let n = count_at(1)?;
                let v = next_values(&mut i, 3 * n)?;
                data.points = v.chunks(3).map(|c| [c[0], c[1]]).collect();
            }
            Some("CELLS") => {
                let n = count_at(1)?;
                let v = next_values(&mut i, 4 * n)?;
                for c in v.chunks(4) {
                    if c[0] != 3.0 {
                        return Err(parse_err(i, "only triangles are supported"));
                    }
                    data.cells.push([c[1] as usize, c[2] as usize, c[3] as usize]);
                }
            }
            Some("CELL_TYPES") => {
                let n = count_at(1)?;
                data.cell_types = next_values(&mut i, n)?.into_iter().map(|v| v as u8).collect();
            }
            Some("CELL_DATA") => section = Some((true, count_at(1)?)),
            Some("POINT_DATA") => section = Some((false, count_at(1)?)),
            Some("SCALARS") => {
                let (is_cell, n) = section.ok_or_else(|| parse_err(i, "SCALARS outside a data section"))?;
                let name = tok.get(1).ok_or_else(|| parse_err(i, "SCALARS without a name"))?.to_string();
                if lines.get(i).is_some_and(|l| l.trim_start().starts_with("LOOKUP_TABLE")) {
                    i += 1;
                }
                let v = next_values(&mut i, n)?;
                if is_cell {
                    data.cell_data.insert(name, v);
                } else {
                    data.point_data.insert(name, v);
                }
            }
            Some(other) => return Err(parse_err(i, format!("unsupported keyword `{other}`"))),
        }
    }
    Ok(data)
}

pub fn read_vtk_file(path: &Path) -> Result<VtkData> {
    read_vtk(BufReader::new(File::open(path)?))
}

pub const SERIES_HEADER: &str = "t,radius,u_min,u_max,energy_defect,stability_slack,vi_residual,tumour_area,nodes";

/// Time-series CSV; the header is written on construction.
pub struct SeriesWriter<W: Write> {
    out: W,
}

impl<W: Write> SeriesWriter<W> {
    pub fn new(mut out: W) -> Result<Self> {
        writeln!(out, "{SERIES_HEADER}")?;
        Ok(Self { out })
    }

    pub fn write_row(&mut self, r: &SeriesRow) -> Result<()> {
        let radius = r.radius.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            self.out,
            "{},{},{},{},{},{},{},{},{}",
            r.t, radius, r.u_min, r.u_max, r.energy_defect, r.stability_slack, r.vi_residual, r.tumour_area, r.nodes
        )?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// Writes `t,R_h,R_oracle,diff` rows.
pub fn write_radial_csv(out: &mut impl Write, times: &[f64], simulated: &[f64], oracle: &[f64]) -> Result<()> {
    writeln!(out, "t,R_h,R_oracle,diff")?;
    for ((t, a), b) in times.iter().zip(simulated).zip(oracle) {
        writeln!(out, "{t},{a},{b},{}", a - b)?;
    }
    Ok(())
}

/// Writes a table with a label column followed by one column per header entry.
/// Missing entries are left empty.
pub fn write_table_csv(
    out: &mut impl Write,
    corner: &str,
    columns: &[String],
    rows: &[(String, Vec<Option<f64>>)],
) -> Result<()> {
    writeln!(out, "{corner},{}", columns.join(","))?;
    for (label, vals) in rows {
        let cells: Vec<String> = vals.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()).collect();
        writeln!(out, "{label},{}", cells.join(","))?;
    }
    Ok(())
}
