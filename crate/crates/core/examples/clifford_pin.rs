//! Lipschitz, Pin and Spin groups of quadratic spaces over F_p.

use finalg::clifford::{pin_spin_report, spinor_norm, CliffordAlgebra, CliffordElement, QuadraticSpace};
use finalg::config::Caps;

fn main() -> finalg::Result<()> {
    let caps = Caps::default();
    let spaces = [
        ("hyperbolic plane over F_3", QuadraticSpace::split(3, 1)?),
        ("hyperbolic plane over F_5", QuadraticSpace::split(5, 1)?),
        ("⟨1, 1⟩ over F_3", QuadraticSpace::diagonal(3, &[1, 1])?),
    ];
    for (name, v) in spaces {
        let r = pin_spin_report(&v, &caps)?;
        println!(
            "{name}: |Γ| = {}, |O| = {}, |Pin| = {}, |Spin| = {}",
            r.gamma_order, r.orthogonal_order, r.pin_order, r.spin_order
        );
    }

    let v = QuadraticSpace::split(3, 1)?;
    let alg = CliffordAlgebra::new(v.clone(), &caps)?;
    for x in v.vectors().filter(|x| v.q(x) != 0) {
        let g = CliffordElement::vector(&alg, &x)?;
        println!("N({x:?}) = {}, q = {}", spinor_norm(&g)?, v.q(&x));
    }
    Ok(())
}
