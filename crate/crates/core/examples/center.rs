//! Pointedness and classification of the Drinfeld center of Vect[L]^τ.

use finalg::center::{classify_center, pointedness, solve_trivialization, PointedFusionData};
use finalg::config::Caps;

fn main() -> finalg::Result<()> {
    let caps = Caps::default();
    for spec in ["2", "3", "2,2", "4"] {
        let l = spec.parse()?;
        let d = PointedFusionData::trivial(l, 12);
        let r = pointedness(&d, &caps)?;
        let t = solve_trivialization(&d, &caps)?;
        let c = classify_center(&d, &t)?;
        let ok = c.checks.iter().all(|c| c.passed);
        println!(
            "L = {spec:>3}: pointed {}, center of order {}, checks pass: {ok}",
            r.pointed,
            c.metric.order()
        );
    }

    // the nontrivial class on Z/2: τ(1,1,1) = −1
    let d = PointedFusionData::from_table("2".parse()?, 2, vec![0, 0, 0, 0, 0, 0, 0, 1])?;
    println!("τ ≠ 0 on Z/2: pointed {}", pointedness(&d, &caps)?.pointed);
    Ok(())
}
