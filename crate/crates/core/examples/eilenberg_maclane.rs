//! Abelian 3-cocycle classes against quadratic forms.

use finalg::cohomology::em_correspondence;
use finalg::config::Caps;

fn main() -> finalg::Result<()> {
    let caps = Caps::default();
    for spec in ["1", "2", "3", "4", "2,2"] {
        let r = em_correspondence(&spec.parse()?, &caps)?;
        println!(
            "{spec:>4}: {:>2} classes mod {:>2}, {:>2} forms, bijective: {}",
            r.classes,
            r.modulus,
            r.forms,
            r.bijective()
        );
    }
    Ok(())
}
