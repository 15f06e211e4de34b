//! Peripheral loops are central and shift images by a Weyl monomial.

use qduality::duality::Duality;
use qduality::lamination::from_coords;
use qduality::surface::IdealTriangulation;

fn main() -> qduality::Result<()> {
    let d = Duality::new(IdealTriangulation::sphere_4());
    let tri = d.triangulation().clone();
    let l = from_coords(&tri, &[2, 2, 0, 2, 2, 0])?;

    for p in 0..tri.num_punctures() {
        let a = tri.peripheral_vector(p)?;
        let combo = d.peripheral_combination(&a)?;
        println!("puncture {p}: a = {a:?}, peripheral weights {combo:?}, shift ok: {}", d.peripheral_shift_check(&l, &a)?);
    }
    println!("{}", d.peripheral_shift_check(&l, &[1, 0, 0, 0, 0, 0]).unwrap_err());
    Ok(())
}
