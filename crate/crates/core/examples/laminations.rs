//! Coordinates, curve words and canonical decomposition.

use qduality::lamination::{canonical_decompose, coords, format_coords, from_coords, CurveWord};
use qduality::surface::IdealTriangulation;

fn main() -> qduality::Result<()> {
    let tri = IdealTriangulation::punctured_torus();

    // Doubled coordinates: μ = 2a.
    for mu in [[0, 1, 1], [2, 1, 1], [3, 3, 2], [2, 2, 2], [-2, -2, -2]] {
        let l = from_coords(&tri, &mu)?;
        println!("a = ({})", format_coords(&mu));
        for c in l.components() {
            let kind = c.peripheral.map_or("curve".to_string(), |p| format!("loop at puncture {p}"));
            println!("  {} x {}  ({kind})", c.weight, c.word);
        }
        assert_eq!(coords(&l), mu);
    }

    // Odd crossing parity in a triangle cannot be realized.
    println!("(1/2, 0, 0): {}", from_coords(&tri, &[1, 0, 0]).unwrap_err());

    // Two parallel copies of a curve collapse to one weighted component.
    let w = CurveWord::parse("2L,3R")?;
    let l = canonical_decompose(&tri, vec![(w.clone(), 1), (w.rotate(1), 2)])?;
    println!("3 parallel copies of {w}: a = {}", l.coords_string());
    Ok(())
}
