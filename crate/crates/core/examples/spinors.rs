//! The exterior algebra as a module over Cl(L ⊕ L*).

use finalg::clifford::spinor_module;
use finalg::config::Caps;

fn main() -> finalg::Result<()> {
    let caps = Caps::default();
    for (m, p) in [(1, 3), (1, 5), (2, 3)] {
        let r = spinor_module(m, p, &caps)?;
        println!(
            "m = {m}, p = {p}: dim Cl = {}, dim End = {}, rank {}, bijective: {}",
            r.clifford_dim, r.end_dim, r.rank, r.bijective
        );
    }
    Ok(())
}
