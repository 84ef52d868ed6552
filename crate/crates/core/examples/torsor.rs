//! Coefficient and torsor groups for a subgroup of O(A, q).

use finalg::cohomology::{orthogonal_subgroup, torsor_and_coefficient_report, SubgroupSpec};
use finalg::config::Caps;
use finalg::quadratic::{enumerate_quadratic_forms, evaluation_form, MetricGroup};

fn main() -> finalg::Result<()> {
    let caps = Caps::default();
    let m = evaluation_form(&"2".parse()?);
    for spec in [SubgroupSpec::Trivial, SubgroupSpec::FirstInvolution] {
        let g = orthogonal_subgroup(&m, &spec, &caps)?;
        let r = torsor_and_coefficient_report(&m, &g, &caps)?;
        println!(
            "|G| = {}: l = {}, coefficients μ_{}, H³(G, k^×) ≅ {:?}, torsor of size {}",
            r.subgroup_order, r.l, r.coefficient_order, r.h3_scalars.invariant_factors, r.torsor_size
        );
    }

    // a nondegenerate form on Z/3 has order 3, which is not a square
    let q = enumerate_quadratic_forms(&"3".parse()?, true, &caps)?.remove(0);
    let odd = MetricGroup::new(q)?;
    let g = orthogonal_subgroup(&odd, &SubgroupSpec::Trivial, &caps)?;
    match torsor_and_coefficient_report(&odd, &g, &caps) {
        Err(e) => println!("Z/3: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
