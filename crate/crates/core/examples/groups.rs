//! Finite abelian groups, their duals, automorphisms and subgroups.

use finalg::abelian::{dual, enumerate_automorphisms, FiniteAbelianGroup};
use finalg::config::Caps;
use finalg::subgroups::enumerate_subgroups;

fn main() -> finalg::Result<()> {
    let caps = Caps::default();
    for spec in ["2,2", "2,4", "3,3", "6"] {
        let a: FiniteAbelianGroup = spec.parse()?;
        let auts = enumerate_automorphisms(&a, &caps)?;
        let subs = enumerate_subgroups(&a, &caps)?;
        println!(
            "{a:>6}: order {:>2}, exponent {}, |Aut| = {:>3}, {} subgroups",
            a.order(),
            a.exponent(),
            auts.len(),
            subs.len()
        );
    }

    let a: FiniteAbelianGroup = "4".parse()?;
    let d = dual(&a);
    let chi = a.generator(0);
    for x in a.elements() {
        let z = d.pairing(&chi, &x)?;
        println!("χ₁({:?}) = exp(2πi·{}/{})", x.coords(), z.exp(), z.order());
    }
    Ok(())
}
