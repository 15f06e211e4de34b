//! The duality map on integral laminations, in ω and Z and in q and X.

use qduality::duality::Duality;
use qduality::lamination::from_coords;
use qduality::surface::IdealTriangulation;

fn main() -> qduality::Result<()> {
    let d = Duality::new(IdealTriangulation::sphere_4());
    let tri = d.triangulation().clone();

    for a in [[0, 0, 0, 0, 0, 0], [1, 1, 0, 1, 1, 0], [1, 1, 1, 1, 1, 1]] {
        let mu: Vec<i64> = a.iter().map(|x| 2 * x).collect();
        let l = from_coords(&tri, &mu)?;
        let x = d.i_hat_q(&l)?;
        let top = x.highest_term()?;
        println!("a = {a:?}: {} terms, top {:?} with {}", x.len(), top.exponents, top.coeff.render("q"));
        println!("  {}", x.to_text());
    }

    let report = d.verify_bundle(&from_coords(&tri, &[2, 2, 0, 2, 2, 0])?);
    print!("{}", report.to_text(false));
    Ok(())
}
