//! Inputs shared by the benches.

use supergrade::{CycScalar, Matrix};

/// A dense size×size matrix over ℚ(ζ_m) with small deterministic entries.
pub fn dense(size: usize, m: u32) -> Matrix {
    let mut x = Matrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            let k = (3 * i + 5 * j + 1) as i64;
            let z = CycScalar::root_of_unity(k, m).expect("positive order");
            x.set(i, j, &z + &CycScalar::from_int((i as i64 - j as i64) % 3));
        }
    }
    x
}
