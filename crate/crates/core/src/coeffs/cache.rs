//! Binary cache of a collision tensor.
//!
//! Little-endian layout: `"BHSC"`, `u32` version, `u8` kernel id, three `f64`
//! kernel parameters, `u32` M0, `f64` threshold, `u64` entry count, entries of
//! nine `u8` index components and an `f64` value, then a CRC32 of everything
//! before it.

use std::path::Path;

use super::{CollisionTensor, Entry};
use crate::basis::MultiIndex;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;

const MAGIC: &[u8; 4] = b"BHSC";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 1 + 24 + 4 + 8 + 8;
const ENTRY_LEN: usize = 9 + 8;

pub fn to_bytes(tensor: &CollisionTensor) -> Result<Vec<u8>> {
    let mut buf = Vec::with_capacity(HEADER_LEN + ENTRY_LEN * tensor.len() + 4);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.push(tensor.kernel().id());
    for p in tensor.kernel().params() {
        buf.extend_from_slice(&p.to_le_bytes());
    }
    buf.extend_from_slice(&(tensor.m0() as u32).to_le_bytes());
    buf.extend_from_slice(&tensor.threshold().to_le_bytes());
    buf.extend_from_slice(&(tensor.len() as u64).to_le_bytes());
    for e in tensor.entries() {
        for idx in [e.alpha, e.beta, e.gamma] {
            for c in idx.0 {
                let c = u8::try_from(c)
                    .map_err(|_| Error::BadCache(format!("index component {c} exceeds u8")))?;
                buf.push(c);
            }
        }
        buf.extend_from_slice(&e.value.to_le_bytes());
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    Ok(buf)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        let s = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::BadCache("truncated file".into()))?;
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<CollisionTensor> {
    if bytes.len() < HEADER_LEN + 4 {
        return Err(Error::BadCache("truncated file".into()));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::BadCache("bad magic".into()));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }
    let mut r = Reader { bytes: body, pos: 4 };
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::BadCache(format!("unsupported version {version}")));
    }
    let id = r.take(1)?[0];
    let params = [r.f64()?, r.f64()?, r.f64()?];
    let kernel = KernelSpec::from_parts(id, params)?;
    let m0 = r.u32()? as usize;
    let threshold = r.f64()?;
    let count = r.u64()? as usize;
    if body.len() != HEADER_LEN + count * ENTRY_LEN {
        return Err(Error::BadCache(format!(
            "entry count {count} does not match file length {}",
            bytes.len()
        )));
    }
    let mut entries = Vec::with_capacity(count);
    for _ in 0..count {
        let ix = r.take(9)?;
        let m = |o: usize| MultiIndex::new(ix[o] as usize, ix[o + 1] as usize, ix[o + 2] as usize);
        entries.push(Entry {
            alpha: m(0),
            beta: m(3),
            gamma: m(6),
            value: r.f64()?,
        });
    }
    CollisionTensor::from_entries(kernel, m0, threshold, entries)
}

pub fn save_cache(tensor: &CollisionTensor, path: &Path) -> Result<()> {
    let bytes = to_bytes(tensor)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn load_cache(path: &Path) -> Result<CollisionTensor> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    from_bytes(&bytes)
}

/// Loads a cache and rejects it unless it was built for `kernel`
/// (and for `m0`, when given).
pub fn load_cache_checked(path: &Path, kernel: &KernelSpec, m0: Option<usize>) -> Result<CollisionTensor> {
    let tensor = load_cache(path)?;
    if tensor.kernel() != kernel {
        return Err(Error::Fingerprint {
            found: tensor.kernel().fingerprint(),
            expected: kernel.fingerprint(),
        });
    }
    if let Some(m0) = m0 {
        if tensor.m0() != m0 {
            return Err(Error::Fingerprint {
                found: format!("M0 = {}", tensor.m0()),
                expected: format!("M0 = {m0}"),
            });
        }
    }
    Ok(tensor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::assemble_tensor;

    fn small() -> CollisionTensor {
        assemble_tensor(&KernelSpec::HardSphere { d: 1.0 }, 2, None).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let t = small();
        let bytes = to_bytes(&t).unwrap();
        let back = from_bytes(&bytes).unwrap();
        assert_eq!(back.entries(), t.entries());
        assert_eq!(back.threshold().to_bits(), t.threshold().to_bits());
        assert_eq!(to_bytes(&back).unwrap(), bytes);
    }

    #[test]
    fn corruption_is_detected() {
        let mut bytes = to_bytes(&small()).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0x40;
        assert!(matches!(from_bytes(&bytes), Err(Error::Checksum { .. })));
        assert!(matches!(from_bytes(&bytes[..10]), Err(Error::BadCache(_))));
        let mut magic = to_bytes(&small()).unwrap();
        magic[0] = b'X';
        assert!(matches!(from_bytes(&magic), Err(Error::BadCache(_))));
    }

    #[test]
    fn fingerprint_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.bhsc");
        save_cache(&small(), &path).unwrap();
        let other = KernelSpec::HardSphere { d: 2.0 };
        assert!(matches!(
            load_cache_checked(&path, &other, None),
            Err(Error::Fingerprint { .. })
        ));
        assert!(load_cache_checked(&path, &KernelSpec::HardSphere { d: 1.0 }, Some(2)).is_ok());
    }
}
