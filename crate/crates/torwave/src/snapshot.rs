//! Binary snapshot formats.
//!
//! Field files ("NWF1"): magic bytes, then little-endian `u32` radius N,
//! `u32` m×1000 (informational), `u8` real flag, and `(2N+1)³` complex
//! coefficient pairs of 64-bit floats in lexicographic k order (k1
//! slowest).
//!
//! State files ("NWS1"): magic bytes, a `u8` kind tag (1 = second-order
//! state, 2 = first-order state), the time as a 64-bit float, then the
//! component fields, each in the field format. Round trips are bit-exact.

use crate::field::SpectralField;
use crate::hyperbolic::HyperbolicState;
use crate::wave::WaveState;
use crate::{Error, Result};
use std::io::{Read, Write};

pub const FIELD_MAGIC: &[u8; 4] = b"NWF1";
pub const STATE_MAGIC: &[u8; 4] = b"NWS1";

pub fn write_field<W: Write>(w: &mut W, field: &SpectralField, m_times_1000: u32) -> Result<()> {
    w.write_all(FIELD_MAGIC)?;
    w.write_all(&field.n().to_le_bytes())?;
    w.write_all(&m_times_1000.to_le_bytes())?;
    w.write_all(&[u8::from(field.real_flag())])?;
    for c in field.coeffs() {
        w.write_all(&c.re.to_le_bytes())?;
        w.write_all(&c.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_exact<R: Read, const L: usize>(r: &mut R) -> Result<[u8; L]> {
    let mut buf = [0u8; L];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Snapshot(format!("truncated file: {e}")))?;
    Ok(buf)
}

pub fn read_field<R: Read>(r: &mut R) -> Result<(SpectralField, u32)> {
    let magic: [u8; 4] = read_exact(r)?;
    if &magic != FIELD_MAGIC {
        return Err(Error::Snapshot(format!(
            "bad field magic {magic:?}, expected {FIELD_MAGIC:?}"
        )));
    }
    let n = u32::from_le_bytes(read_exact(r)?);
    let m_times_1000 = u32::from_le_bytes(read_exact(r)?);
    let real = read_exact::<R, 1>(r)?[0] != 0;
    let mut field = SpectralField::zeros(n, real);
    for c in field.coeffs_mut() {
        let re = f64::from_le_bytes(read_exact(r)?);
        let im = f64::from_le_bytes(read_exact(r)?);
        *c = num_complex::Complex64::new(re, im);
    }
    Ok((field, m_times_1000))
}

/// A saved solver state of either formulation.
#[derive(Clone, Debug)]
pub enum SnapshotState {
    Wave(WaveState),
    Hyperbolic(HyperbolicState),
}

pub fn write_state<W: Write>(w: &mut W, state: &SnapshotState, m: f64) -> Result<()> {
    let m_tag = (m * 1000.0).round().clamp(0.0, u32::MAX as f64) as u32;
    w.write_all(STATE_MAGIC)?;
    match state {
        SnapshotState::Wave(s) => {
            w.write_all(&[1u8])?;
            w.write_all(&s.t.to_le_bytes())?;
            write_field(w, &s.u, m_tag)?;
            write_field(w, &s.ut, m_tag)?;
        }
        SnapshotState::Hyperbolic(s) => {
            w.write_all(&[2u8])?;
            w.write_all(&s.t.to_le_bytes())?;
            write_field(w, &s.u, m_tag)?;
            write_field(w, &s.p, m_tag)?;
            for q in &s.q {
                write_field(w, q, m_tag)?;
            }
        }
    }
    Ok(())
}

pub fn read_state<R: Read>(r: &mut R) -> Result<(SnapshotState, f64)> {
    let magic: [u8; 4] = read_exact(r)?;
    if &magic != STATE_MAGIC {
        return Err(Error::Snapshot(format!(
            "bad state magic {magic:?}, expected {STATE_MAGIC:?}"
        )));
    }
    let kind = read_exact::<R, 1>(r)?[0];
    let t = f64::from_le_bytes(read_exact(r)?);
    match kind {
        1 => {
            let (u, m_tag) = read_field(r)?;
            let (ut, _) = read_field(r)?;
            Ok((
                SnapshotState::Wave(WaveState { t, u, ut }),
                m_tag as f64 / 1000.0,
            ))
        }
        2 => {
            let (u, m_tag) = read_field(r)?;
            let (p, _) = read_field(r)?;
            let (q0, _) = read_field(r)?;
            let (q1, _) = read_field(r)?;
            let (q2, _) = read_field(r)?;
            Ok((
                SnapshotState::Hyperbolic(HyperbolicState {
                    t,
                    u,
                    p,
                    q: [q0, q1, q2],
                }),
                m_tag as f64 / 1000.0,
            ))
        }
        other => Err(Error::Snapshot(format!("unknown state kind tag {other}"))),
    }
}

pub fn save_state_file(path: &std::path::Path, state: &SnapshotState, m: f64) -> Result<()> {
    let mut buf = Vec::new();
    write_state(&mut buf, state, m)?;
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn load_state_file(path: &std::path::Path) -> Result<(SnapshotState, f64)> {
    let data = std::fs::read(path)?;
    read_state(&mut data.as_slice())
}
