//! Binary trajectory records.
//!
//! Header: `d, m, K, M, N_noise` as little-endian `u32`. Then the `M + 1`
//! node times as `f64`, then one snapshot per node: for each frequency index
//! in lattice order, for each component, the real and imaginary part as `f64`.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::scheme::Trajectory;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DumpHeader {
    pub d: u32,
    pub m: u32,
    pub k: u32,
    pub steps: u32,
    pub n_noise: u32,
}

fn io(e: std::io::Error) -> Error {
    Error::invalid(format!("i/o error: {e}"))
}

fn to_u32(v: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::invalid("value does not fit the u32 header"))
}

pub fn write_trajectory(w: &mut impl Write, traj: &Trajectory) -> Result<()> {
    let first = &traj.states[0];
    let l = first.lattice();
    let header = [
        to_u32(l.dim())?,
        to_u32(first.components())?,
        to_u32(l.cutoff())?,
        to_u32(traj.grid.steps())?,
        to_u32(traj.info.n_noise)?,
    ];
    let mut buf = Vec::new();
    header.iter().for_each(|h| buf.extend_from_slice(&h.to_le_bytes()));
    traj.grid.nodes().iter().for_each(|t| buf.extend_from_slice(&t.to_le_bytes()));
    for u in &traj.states {
        for idx in 0..l.len() {
            for c in 0..u.components() {
                let z = u.channel(c)[idx];
                buf.extend_from_slice(&z.re.to_le_bytes());
                buf.extend_from_slice(&z.im.to_le_bytes());
            }
        }
    }
    w.write_all(&buf).map_err(io)
}

/// Reads a record back as `(header, times, snapshots)`; each snapshot is in
/// frequency-major order.
pub fn read_trajectory(r: &mut impl Read) -> Result<(DumpHeader, Vec<f64>, Vec<Vec<Complex64>>)> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(io)?;
    let short = || Error::invalid("truncated trajectory record");
    let word = |i: usize| -> Result<u32> {
        let s = bytes.get(4 * i..4 * i + 4).ok_or_else(short)?;
        Ok(u32::from_le_bytes([s[0], s[1], s[2], s[3]]))
    };
    let header = DumpHeader { d: word(0)?, m: word(1)?, k: word(2)?, steps: word(3)?, n_noise: word(4)? };
    let mut pos = 20;
    let mut float = || -> Result<f64> {
        let s = bytes.get(pos..pos + 8).ok_or_else(short)?;
        pos += 8;
        Ok(f64::from_le_bytes(s.try_into().map_err(|_| short())?))
    };
    let nodes = header.steps as usize + 1;
    let times = (0..nodes).map(|_| float()).collect::<Result<Vec<_>>>()?;
    let modes = ((2 * header.k) as usize).pow(header.d) * header.m as usize;
    let snaps = (0..nodes)
        .map(|_| (0..modes).map(|_| Ok(Complex64::new(float()?, float()?))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok((header, times, snaps))
}
