//! Quantum traces of simple closed curves and their classical limits.

use qduality::classical::curve_trace;
use qduality::lamination::{peripheral_word, trace_word, CurveWord};
use qduality::skein::{quantum_trace, quantum_trace_from};
use qduality::surface::IdealTriangulation;

fn main() -> qduality::Result<()> {
    let tri = IdealTriangulation::punctured_torus();
    for w in ["2L,3R", "1L,2R,1R,3L"] {
        let w = CurveWord::parse(w)?;
        let q = quantum_trace(&tri, &w)?;
        println!("Tr({w}) = {}", q.to_text());
        println!("  at w = 1: {}", q.classical_limit().to_text());
        assert_eq!(q.classical_limit(), curve_trace(&tri, &w)?);
        assert_eq!(q.star(), q);

        // Independent of where the ascent is placed.
        for start in 0..trace_word(&tri, &w)?.passages.len() {
            assert_eq!(quantum_trace_from(&tri, &w, start)?, q);
        }
    }

    let loop_word = peripheral_word(&tri, 0)?;
    println!("peripheral loop {loop_word}: {}", quantum_trace(&tri, &loop_word)?.to_text());
    Ok(())
}
