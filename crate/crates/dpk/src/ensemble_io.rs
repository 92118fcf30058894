//! Ensemble export: columnar CSV and the compact "DPKE" binary form
//! (magic bytes, version u16, little-endian f64 payload).

use std::io::{self, Read, Write};

use crate::mcsim::{PathEnsemble, Scheme, SimulationConfig};

const MAGIC: &[u8; 4] = b"DPKE";
const VERSION: u16 = 1;

/// Columnar CSV: `path,time,particle,position` with `#` metadata headers.
pub fn write_csv<W: Write>(ensemble: &PathEnsemble, mut w: W) -> io::Result<()> {
    let cfg = ensemble.config();
    writeln!(w, "# dpk ensemble v{VERSION}")?;
    writeln!(
        w,
        "# n={} paths={} dt={:.17e} seed={} scheme={:?} collisions={}",
        cfg.n,
        cfg.paths,
        cfg.dt,
        cfg.seed,
        cfg.scheme,
        ensemble.collision_events()
    )?;
    writeln!(w, "path,time,particle,position")?;
    for p in 0..cfg.paths {
        for (ti, &t) in cfg.times.iter().enumerate() {
            for (j, &x) in ensemble.positions(p, ti).iter().enumerate() {
                writeln!(w, "{p},{t:.17e},{j},{x:.17e}")?;
            }
        }
    }
    Ok(())
}

pub fn write_binary<W: Write>(ensemble: &PathEnsemble, mut w: W) -> io::Result<()> {
    let cfg = ensemble.config();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(cfg.n as u32).to_le_bytes())?;
    w.write_all(&(cfg.times.len() as u32).to_le_bytes())?;
    w.write_all(&(cfg.paths as u32).to_le_bytes())?;
    w.write_all(&cfg.dt.to_le_bytes())?;
    w.write_all(&cfg.seed.to_le_bytes())?;
    w.write_all(&[match cfg.scheme {
        Scheme::Matrix => 0u8,
        Scheme::Sde => 1u8,
    }])?;
    w.write_all(&ensemble.collision_events().to_le_bytes())?;
    for &t in &cfg.times {
        w.write_all(&t.to_le_bytes())?;
    }
    for &x in ensemble.raw() {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> io::Result<PathEnsemble> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("not a DPKE file"));
    }
    let mut b2 = [0u8; 2];
    r.read_exact(&mut b2)?;
    if u16::from_le_bytes(b2) != VERSION {
        return Err(bad("unsupported DPKE version"));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b4)?;
    let n_times = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b4)?;
    let paths = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b8)?;
    let dt = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let seed = u64::from_le_bytes(b8);
    let mut b1 = [0u8; 1];
    r.read_exact(&mut b1)?;
    let scheme = match b1[0] {
        0 => Scheme::Matrix,
        1 => Scheme::Sde,
        _ => return Err(bad("unknown scheme tag")),
    };
    r.read_exact(&mut b8)?;
    let collisions = u64::from_le_bytes(b8);
    let mut times = Vec::with_capacity(n_times);
    for _ in 0..n_times {
        r.read_exact(&mut b8)?;
        times.push(f64::from_le_bytes(b8));
    }
    let total = paths
        .checked_mul(n_times)
        .and_then(|v| v.checked_mul(n))
        .ok_or_else(|| bad("size overflow"))?;
    let mut positions = Vec::with_capacity(total);
    for _ in 0..total {
        r.read_exact(&mut b8)?;
        positions.push(f64::from_le_bytes(b8));
    }
    let config = SimulationConfig {
        n,
        times,
        dt,
        paths,
        seed,
        scheme,
    };
    Ok(PathEnsemble::from_parts(config, positions, collisions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcsim::matrix_bm_eigen;

    fn small_ensemble() -> PathEnsemble {
        let config = SimulationConfig {
            n: 3,
            times: vec![0.5, 1.0],
            dt: 0.01,
            paths: 4,
            seed: 7,
            scheme: Scheme::Matrix,
        };
        matrix_bm_eigen(&config).unwrap()
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let e = small_ensemble();
        let mut buf = Vec::new();
        write_binary(&e, &mut buf).unwrap();
        let back = read_binary(buf.as_slice()).unwrap();
        assert_eq!(back.raw(), e.raw());
        assert_eq!(back.config().times, e.config().times);
        assert_eq!(back.config().seed, e.config().seed);
        assert_eq!(back.collision_events(), e.collision_events());
    }

    #[test]
    fn rejects_foreign_bytes() {
        assert!(read_binary(&b"NOPE"[..]).is_err());
    }

    #[test]
    fn csv_has_headers_and_all_rows() {
        let e = small_ensemble();
        let mut buf = Vec::new();
        write_csv(&e, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with('#'));
        assert!(lines.next().unwrap().starts_with('#'));
        assert_eq!(lines.next().unwrap(), "path,time,particle,position");
        assert_eq!(text.lines().count(), 3 + 4 * 2 * 3);
        assert!(!text.contains("\r\n"));
    }
}
