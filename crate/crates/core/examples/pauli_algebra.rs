//! Pauli-string arithmetic: products, commutators, dense matrices and back.

use lgt::pauli::{PauliOperator, C64};

fn main() -> lgt::Result<()> {
    let one = C64::new(1.0, 0.0);
    let a = PauliOperator::parse(&[(one, "XZI"), (C64::new(0.5, 0.0), "IYY")])?;
    let b = PauliOperator::parse(&[(one, "ZZX")])?;

    println!("A        = {a}");
    println!("B        = {b}");
    println!("A*B      = {}", a.mul(&b));
    println!("[A, B]   = {}", a.commutator(&b));
    println!("A + A^dg hermitian: {}", a.plus_hc().is_hermitian(1e-12));

    let m = a.mul(&b).to_matrix()?;
    let back = PauliOperator::decompose_matrix(&m)?;
    println!("decompose(matrix(A*B)) = {back}");
    println!("max support {}, 1-norm {:.3}", back.max_support(), back.norm1());

    let c = PauliOperator::parse(&[(C64::new(1.0, 1.0), "XY"), (C64::new(0.0, 2.0), "ZZ"), (one, "IX")])?;
    let k = c.classify();
    println!("classification of {c}: real {}, imaginary {}, mixed {}", k.n_real, k.n_imag, k.n_mixed);
    Ok(())
}
