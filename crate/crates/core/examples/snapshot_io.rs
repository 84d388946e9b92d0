//! Write and read back a binary snapshot and a diagnostics table.
//!
//!     cargo run --release --example snapshot_io

use ns_mild::generate::random_divfree_field;
use ns_mild::io::{read_diagnostics, read_snapshot, write_diagnostics, write_snapshot};
use ns_mild::solver::DiagnosticsRow;
use ns_mild::{Result, TorusGrid};

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("nsmild-snapshot-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let grid = TorusGrid::standard(3, 16)?;
    let u = random_divfree_field(&grid, 42, 2.0, 1.0)?;
    let snap = dir.join("u.nsms");
    write_snapshot(&snap, &u, 0.125)?;
    let (v, t) = read_snapshot(&snap)?;
    let identical = u
        .components()
        .iter()
        .zip(v.components())
        .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
    println!("{} bytes, t = {t}, bit-identical: {identical}", std::fs::metadata(&snap)?.len());

    let csv = dir.join("diagnostics.csv");
    let row = DiagnosticsRow::compute(t, &u, 2.0, true)?;
    write_diagnostics(&csv, &[row])?;
    print!("{}", std::fs::read_to_string(&csv)?);
    println!("round trip equal: {}", read_diagnostics(&csv)? == vec![row]);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
