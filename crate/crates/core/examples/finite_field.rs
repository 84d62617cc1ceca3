// Arithmetic in F_{p²} = Z[j]/(p) and Gaussian elimination over it.

use std::error::Error;

use dascof::gfield::{mod_p_reduce, FqElem, FqMatrix, GaussianInt, GaussianPrime, IntMatrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = GaussianPrime::new(7)?;
    let a = FqElem::new(3, 5, p);
    let inv = a.inverse()?;
    println!("({a})^-1 = {inv}, product {}", a * inv);
    assert_eq!(a * inv, FqElem::one(p));

    // Reduction of a Gaussian integer picks the representative in [0, p)².
    let z = GaussianInt::new(-9, 16);
    println!("{z} mod {p} = {}", mod_p_reduce(z, p));

    let m = IntMatrix::from_rows(&[
        vec![GaussianInt::new(1, 1), GaussianInt::new(2, 0)],
        vec![GaussianInt::new(0, 1), GaussianInt::new(1, -1)],
    ]);
    let q = m.reduce(p);
    let qi = q.inverse()?;
    println!("Q =\n{q}Q^-1 =\n{qi}");
    assert_eq!(q.mul(&qi)?, FqMatrix::identity(2, p));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
