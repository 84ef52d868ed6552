//! Group cohomology with μ_N and full scalar coefficients.

use std::sync::Arc;

use finalg::cohomology::{cohomology, Coefficients, FiniteGroup};
use finalg::config::Caps;

fn main() -> finalg::Result<()> {
    let caps = Caps::default();
    for spec in ["2", "3", "2,2"] {
        let g = Arc::new(FiniteGroup::from_abelian(&spec.parse()?));
        for n in 1..=3 {
            let h = cohomology(&g, n, Coefficients::FullScalars, &caps)?;
            println!("H^{n}({spec}, k^×) ≅ {:?}", h.invariant_factors);
        }
    }
    let g = Arc::new(FiniteGroup::from_abelian(&"2".parse()?));
    let h = cohomology(&g, 2, Coefficients::MuN(4), &caps)?;
    println!("H²(Z/2, μ₄) ≅ {:?}", h.invariant_factors);
    Ok(())
}
