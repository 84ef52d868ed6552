//! Orthogonal groups of metric groups and the split order formula.

use finalg::config::Caps;
use finalg::orthogonal::{orthogonal_group, split_orthogonal_check};
use finalg::quadratic::evaluation_form;

fn main() -> finalg::Result<()> {
    let caps = Caps::default();
    for spec in ["2", "3", "4", "2,2"] {
        let m = evaluation_form(&spec.parse()?);
        let s = orthogonal_group(&m, &caps)?.summary();
        println!(
            "O(ev on {spec}): order {}, SO of index {}, dets {:?}",
            s.order, s.index, s.det_spectrum
        );
    }
    for (n, p) in [(1, 3), (1, 5), (2, 3)] {
        let r = split_orthogonal_check(n, p, &caps)?;
        println!(
            "O({n},{n}; F_{p}): brute force {}, formula {}",
            r.brute_force, r.formula
        );
    }
    Ok(())
}
