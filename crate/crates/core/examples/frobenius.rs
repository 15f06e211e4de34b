//! Frobenius identity at odd roots of unity.

use qduality::duality::Duality;
use qduality::lamination::from_coords;
use qduality::surface::IdealTriangulation;

fn main() -> qduality::Result<()> {
    let d = Duality::new(IdealTriangulation::punctured_torus());
    let l = from_coords(d.triangulation(), &[2, 4, 4])?;
    for n in [1, 3, 5, 7] {
        let (lhs, rhs) = d.frobenius_sides(&l, n)?;
        println!("N = {n}: {}", if lhs == rhs { "holds" } else { "fails" });
        println!("  {}", lhs.to_text());
    }
    println!("N = 4: {}", d.frobenius_check(&l, 4).unwrap_err());
    Ok(())
}
