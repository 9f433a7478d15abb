//! Moment CSV export and coefficient snapshots.
//!
//! Snapshot layout, little-endian: `"BHSF"`, `u32` version, frame `ū` and
//! `θ̄` (four `f64`), `u32` M, `u32` dims, two `u32` cell counts, `f64` Δx,
//! two `f64` origin coordinates, `f64` time, `f64` molecular mass, `f64` k_B,
//! `u64` cell count, the raw coefficients cell by cell, then a CRC32.

use std::fmt::Write as _;
use std::path::Path;

use crate::basis::{index_count, Frame};
use crate::error::{Error, Result};
use crate::frames::CoeffVector;
use crate::solver::CellField;

const MAGIC: &[u8; 4] = b"BHSF";
const VERSION: u32 = 1;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let s = self
            .bytes
            .get(self.pos..self.pos + n)
            .ok_or_else(|| Error::BadCache("truncated snapshot".into()))?;
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")) as usize)
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        (0..n)
            .map(|_| Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes"))))
            .collect()
    }
}

/// Field plus the grid geometry and gas constants needed to interpret it.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub field: CellField,
    pub dims: usize,
    pub cells: [usize; 2],
    pub dx: f64,
    pub origin: [f64; 2],
    pub mass: f64,
    pub kb: f64,
}

impl Snapshot {
    pub fn center(&self, k: usize) -> [f64; 2] {
        let (i, j) = (k % self.cells[0], k / self.cells[0]);
        [
            self.origin[0] + (i as f64 + 0.5) * self.dx,
            self.origin[1] + (j as f64 + 0.5) * self.dx,
        ]
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let f = &self.field;
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        for x in f.frame().u_bar.iter().chain([f.frame().theta_bar].iter()) {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        for n in [f.max_degree(), self.dims, self.cells[0], self.cells[1]] {
            buf.extend_from_slice(&(n as u32).to_le_bytes());
        }
        for x in [self.dx, self.origin[0], self.origin[1], f.time, self.mass, self.kb] {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        buf.extend_from_slice(&(f.len() as u64).to_le_bytes());
        for c in f.cells() {
            for x in c.values() {
                buf.extend_from_slice(&x.to_le_bytes());
            }
        }
        let crc = crc32fast::hash(&buf);
        buf.extend_from_slice(&crc.to_le_bytes());
        buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 || &bytes[..4] != MAGIC {
            return Err(Error::BadCache("not a snapshot file".into()));
        }
        let (body, tail) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
        let computed = crc32fast::hash(body);
        if stored != computed {
            return Err(Error::Checksum { stored, computed });
        }
        let mut r = Cursor { bytes: body, pos: 4 };
        let version = r.u32()?;
        if version != VERSION as usize {
            return Err(Error::BadCache(format!("unsupported snapshot version {version}")));
        }
        let fr = r.f64s(4)?;
        let frame = Frame::new([fr[0], fr[1], fr[2]], fr[3])?;
        let ints = [r.u32()?, r.u32()?, r.u32()?, r.u32()?];
        let (m, dims, cells) = (ints[0], ints[1], [ints[2], ints[3]]);
        let g = r.f64s(6)?;
        let count = u64::from_le_bytes(r.take(8)?.try_into().expect("8 bytes")) as usize;
        if count != cells[0] * cells[1] {
            return Err(Error::BadCache(format!("{count} cells for a {}x{} grid", cells[0], cells[1])));
        }
        let n = index_count(m);
        if body.len() != r.pos + count * n * 8 {
            return Err(Error::BadCache("snapshot length does not match its header".into()));
        }
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(CoeffVector::from_values(frame, m, r.f64s(n)?)?);
        }
        Ok(Snapshot {
            field: CellField::from_cells(out, g[3])?,
            dims,
            cells,
            dx: g[0],
            origin: [g[1], g[2]],
            mass: g[4],
            kb: g[5],
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }

    /// Moment table: header plus one row per cell.
    pub fn moments_csv(&self) -> Result<String> {
        let mut out = String::new();
        if self.dims == 1 {
            out.push_str("x,rho,u1,u2,u3,T,sigma11,sigma12,q1\n");
        } else {
            out.push_str("x,y,rho,u1,u2,u3,T,sigma11,sigma12,sigma22,q1,q2\n");
        }
        for (k, m) in self.field.moments()?.iter().enumerate() {
            let c = self.center(k);
            let t = m.temperature(self.mass, self.kb);
            let row: Vec<f64> = if self.dims == 1 {
                vec![c[0], m.rho, m.u[0], m.u[1], m.u[2], t, m.sigma[0][0], m.sigma[0][1], m.q[0]]
            } else {
                vec![
                    c[0], c[1], m.rho, m.u[0], m.u[1], m.u[2], t, m.sigma[0][0], m.sigma[0][1], m.sigma[1][1], m.q[0],
                    m.q[1],
                ]
            };
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{x:.16e}").expect("write to String");
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.moments_csv()?).map_err(|e| Error::io(path, e))
    }
}
