//! Lagrangian subgroups and the polarizations A ≅ L ⊕ L̂ they induce.

use finalg::config::Caps;
use finalg::quadratic::{evaluation_form, split_form};
use finalg::subgroups::{find_polarizations, lagrangians};

fn main() -> finalg::Result<()> {
    let caps = Caps::default();
    let metrics = [
        ("ev on Z/2", evaluation_form(&"2".parse()?)),
        ("ev on Z/4", evaluation_form(&"4".parse()?)),
        ("split(1,3)", split_form(1, 3)?),
        ("split(2,3)", split_form(2, 3)?),
    ];
    for (name, m) in metrics {
        let lags = lagrangians(&m, &caps)?;
        let pols = find_polarizations(&m, &caps)?;
        let ok = pols.iter().all(|p| p.verify());
        println!("{name:>10}: {} Lagrangians, polarizations verified: {ok}", lags.len());
        for l in lags.iter().take(3) {
            println!("    generated by {:?}", l.generators());
        }
    }
    Ok(())
}
