//! Chebyshev polynomials, their inverses, and traces of matrix powers.

use qduality::classical::{chebyshev, inverse_chebyshev};

fn main() -> qduality::Result<()> {
    for k in 0..=5 {
        println!("F_{k} = {:?}", chebyshev(k).coeffs());
    }
    // t^k in the basis 1, F_1, ..., F_k.
    for k in 1..=5 {
        println!("t^{k} -> {:?}", inverse_chebyshev(k)?.coeffs());
    }

    // tr(M^k) = F_k(tr M) for M in SL(2, Z).
    let m = [[2i64, 1], [1, 1]];
    let mut p = [[1i64, 0], [0, 1]];
    for k in 0..=6 {
        let tr = p[0][0] + p[1][1];
        assert_eq!(tr, chebyshev(k).eval(3));
        println!("tr(M^{k}) = {tr}");
        p = [
            [p[0][0] * m[0][0] + p[0][1] * m[1][0], p[0][0] * m[0][1] + p[0][1] * m[1][1]],
            [p[1][0] * m[0][0] + p[1][1] * m[1][0], p[1][0] * m[0][1] + p[1][1] * m[1][1]],
        ];
    }
    assert_eq!(chebyshev(2).compose(&chebyshev(3)), chebyshev(6));
    Ok(())
}
