//! Quadratic forms on small groups and the standard metric groups.

use finalg::abelian::FiniteAbelianGroup;
use finalg::config::Caps;
use finalg::quadratic::{enumerate_quadratic_forms, evaluation_form, split_form};

fn main() -> finalg::Result<()> {
    let caps = Caps::default();
    for spec in ["1", "2", "3", "4", "2,2"] {
        let a: FiniteAbelianGroup = spec.parse()?;
        let all = enumerate_quadratic_forms(&a, false, &caps)?;
        let nondeg = enumerate_quadratic_forms(&a, true, &caps)?;
        println!("{a:>4}: {:>2} forms, {:>2} nondegenerate", all.len(), nondeg.len());
    }

    let ev = evaluation_form(&"2".parse()?);
    println!("ev on Z/2 ⊕ Z/2: {} isotropic elements", ev.form().isotropic_count());
    let split = split_form(1, 5)?;
    println!(
        "split form on F_5²: {} isotropic elements",
        split.form().isotropic_count()
    );
    Ok(())
}
