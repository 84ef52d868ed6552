//! Exact arithmetic in the roots of unity.

use finalg::scalars::RootOfUnity;

fn main() -> finalg::Result<()> {
    let zeta12 = RootOfUnity::new(12, 1)?;
    let i = RootOfUnity::new(4, 1)?;
    let x = zeta12.mul(i);
    println!("ζ₁₂ · i = exp(2πi·{}/{})", x.exp(), x.order());

    // ζ₁₂³ is i again, stored in lowest terms
    assert_eq!(zeta12.pow(3), i);
    assert!(zeta12.pow(12).is_one());
    let (re, im) = zeta12.inv().to_f64_pair();
    println!("ζ₁₂⁻¹ ≈ {re:.4} {im:+.4}i");
    Ok(())
}
