//! Structure constants of products of duality images.

use qduality::duality::Duality;
use qduality::lamination::from_coords;
use qduality::surface::IdealTriangulation;

fn main() -> qduality::Result<()> {
    let d = Duality::new(IdealTriangulation::punctured_torus());
    let tri = d.triangulation().clone();
    let a = from_coords(&tri, &[0, 2, 2])?;
    let b = from_coords(&tri, &[2, 0, 2])?;

    let table = d.product_expand(&a, &b)?;
    println!("I({}) I({}) =", a.coords_string(), b.coords_string());
    print!("{}", table.to_text());

    let product = &d.i_hat_q(&a)? * &d.i_hat_q(&b)?;
    assert_eq!(d.reconstruct(&table)?, product);
    assert!(table.rows.iter().all(|(_, c)| c.is_nonnegative()));

    // The opposite order differs only in the q-powers.
    print!("reversed:\n{}", d.product_expand(&b, &a)?.to_text());
    Ok(())
}
