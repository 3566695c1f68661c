//! Binary field container.
//!
//! Layout, all integers and floats little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic `BSQFIELD` |
//! | 4     | format version (`u32`, currently 1) |
//! | 4     | tag length `t` (`u32`) |
//! | t     | convention tag, UTF-8, `c-exp-parseval-L3` |
//! | 8     | period `L` (`f64`) |
//! | 4     | resolution `N` (`u32`) |
//! | 8     | dealias fraction (`f64`) |
//! | 1     | kind: 0 scalar, 1 vector |
//! | 1     | flags: bit 0 set for a divergence-free vector |
//! | 16·N³·m | coefficients, `m` = 1 or 3 components one after the other |
//!
//! Within a component the coefficients run row-major over `(k₁, k₂, k₃)`, each axis from
//! `−N/2` up to `N/2 − 1`; each coefficient is `(re, im)` as two `f64`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::box_spec::BoxSpec;
use crate::error::{Error, Result};
use crate::field::{SpectralScalarField, SpectralVectorField};
use crate::lattice::Lattice;

pub const MAGIC: &[u8; 8] = b"BSQFIELD";
pub const VERSION: u32 = 1;
pub const CONVENTION_TAG: &str = "c-exp-parseval-L3";

/// A field read back from a container.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldData {
    Scalar(SpectralScalarField),
    Vector(SpectralVectorField),
}

/// Storage indices in container order (`k` ascending from `−N/2` per axis).
fn k_order(b: &BoxSpec) -> Vec<usize> {
    let lat = Lattice::for_box(b);
    let h = b.n() as i32 / 2;
    let mut idx = Vec::with_capacity(b.len());
    for k1 in -h..h {
        for k2 in -h..h {
            for k3 in -h..h {
                idx.push(lat.index_of([k1, k2, k3]));
            }
        }
    }
    idx
}

pub fn write_field<W: Write>(mut w: W, data: &FieldData) -> Result<()> {
    let (b, parts, kind, flags): (BoxSpec, Vec<&SpectralScalarField>, u8, u8) = match data {
        FieldData::Scalar(f) => (*f.box_spec(), vec![f], 0, 0),
        FieldData::Vector(v) => (*v.box_spec(), v.components().iter().collect(), 1, u8::from(v.is_divergence_free())),
    };
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(CONVENTION_TAG.len() as u32).to_le_bytes())?;
    w.write_all(CONVENTION_TAG.as_bytes())?;
    w.write_all(&b.period_l.to_le_bytes())?;
    w.write_all(&(b.resolution_n as u32).to_le_bytes())?;
    w.write_all(&b.dealias_fraction.to_le_bytes())?;
    w.write_all(&[kind, flags])?;
    let order = k_order(&b);
    for part in parts {
        for &i in &order {
            let c = part.coeffs()[i];
            w.write_all(&c.re.to_le_bytes())?;
            w.write_all(&c.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_array<const K: usize, R: Read>(r: &mut R) -> Result<[u8; K]> {
    let mut buf = [0u8; K];
    r.read_exact(&mut buf).map_err(|e| Error::Format(format!("truncated container: {e}")))?;
    Ok(buf)
}

pub fn read_field<R: Read>(mut r: R) -> Result<FieldData> {
    if &read_array::<8, _>(&mut r)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(read_array(&mut r)?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let tag_len = u32::from_le_bytes(read_array(&mut r)?) as usize;
    if tag_len > 256 {
        return Err(Error::Format(format!("implausible tag length {tag_len}")));
    }
    let mut tag = vec![0u8; tag_len];
    r.read_exact(&mut tag).map_err(|e| Error::Format(format!("truncated container: {e}")))?;
    if tag != CONVENTION_TAG.as_bytes() {
        return Err(Error::Format(format!("unknown convention tag {:?}", String::from_utf8_lossy(&tag))));
    }
    let period_l = f64::from_le_bytes(read_array(&mut r)?);
    let n = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let dealias = f64::from_le_bytes(read_array(&mut r)?);
    let b = BoxSpec { period_l, resolution_n: n, dealias_fraction: dealias };
    b.validate()?;
    let [kind, flags] = read_array::<2, _>(&mut r)?;
    let order = k_order(&b);
    let read_part = |r: &mut R| -> Result<SpectralScalarField> {
        let mut c = vec![Complex64::default(); b.len()];
        for &i in &order {
            let re = f64::from_le_bytes(read_array(r)?);
            let im = f64::from_le_bytes(read_array(r)?);
            c[i] = Complex64::new(re, im);
        }
        SpectralScalarField::from_coeffs(&b, c)
    };
    match kind {
        0 => Ok(FieldData::Scalar(read_part(&mut r)?)),
        1 => {
            let parts = [read_part(&mut r)?, read_part(&mut r)?, read_part(&mut r)?];
            let v = SpectralVectorField::from_components(parts)?;
            let v = if flags & 1 == 1 {
                v.try_tag_divergence_free().map_err(|e| Error::Format(format!("divergence-free flag: {e}")))?
            } else {
                v
            };
            Ok(FieldData::Vector(v))
        }
        k => Err(Error::Format(format!("unknown field kind {k}"))),
    }
}

pub fn save(path: impl AsRef<Path>, data: &FieldData) -> Result<()> {
    write_field(BufWriter::new(File::create(path)?), data)
}

pub fn load(path: impl AsRef<Path>) -> Result<FieldData> {
    read_field(BufReader::new(File::open(path)?))
}
