//! Bundled triangulations and their exchange matrices.

use qduality::surface::IdealTriangulation;

fn main() -> qduality::Result<()> {
    for tri in [IdealTriangulation::punctured_torus(), IdealTriangulation::sphere_4()] {
        println!(
            "{} edges, {} triangles, {} punctures, genus {}",
            tri.num_edges(),
            tri.num_triangles(),
            tri.num_punctures(),
            tri.genus()
        );
        for row in tri.epsilon_matrix().rows() {
            println!("  {row:?}");
        }
        for p in 0..tri.num_punctures() {
            println!("  loop around {}: mu = {:?}", tri.puncture_label(p), tri.peripheral_vector(p)?);
        }
    }

    // JSON round trip.
    let tri = IdealTriangulation::punctured_torus();
    let again = IdealTriangulation::from_json(&tri.to_json())?;
    assert_eq!(again.epsilon_matrix(), tri.epsilon_matrix());
    Ok(())
}
