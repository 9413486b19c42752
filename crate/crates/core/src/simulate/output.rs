//! CSV writers. Floats use Rust's shortest round-trip formatting, so equal
//! data always produces equal bytes.

use std::io::{self, Write};

use super::integrate::Trajectory;
use super::series::Series;

/// One row per stored sample, compartment and component.
pub fn write_trajectory_csv<W: Write>(out: &mut W, traj: &Trajectory) -> io::Result<()> {
    writeln!(out, "t,compartment,component,value")?;
    let n = traj.state_dim();
    for (t, x) in traj.times.iter().zip(&traj.states) {
        for (k, v) in x.iter().enumerate() {
            writeln!(out, "{t},{},{},{v}", k / n, k % n)?;
        }
    }
    Ok(())
}

pub fn write_series_csv<W: Write>(out: &mut W, series: &Series) -> io::Result<()> {
    writeln!(out, "t,value")?;
    for (t, v) in series.times.iter().zip(&series.values) {
        writeln!(out, "{t},{v}")?;
    }
    Ok(())
}
