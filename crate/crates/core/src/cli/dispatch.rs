use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{Command, ErrorInfo, GroupArg, JobSpec, ResultEnvelope, Status, VERSION};
use crate::abelian::{enumerate_automorphisms, FiniteAbelianGroup};
use crate::center::{classify_center_with, pointedness, solve_trivialization, t_two_cocycle};
use crate::clifford::{pin_spin_report, spinor_module};
use crate::cohomology::cochain::normalized_len;
use crate::cohomology::compute::random_cocycle;
use crate::cohomology::{
    cohomology, em_correspondence, is_coboundary, orthogonal_subgroup, torsor_and_coefficient_report, Check, Cochain,
    Coefficients, CohomologySummary, FiniteGroup,
};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::orthogonal::{orthogonal_group, split_orthogonal_check};
use crate::quadratic::{enumerate_quadratic_forms, MetricGroup, QuadraticForm};
use crate::subgroups::{enumerate_subgroups, find_polarizations, is_lagrangian, lagrangians, Subgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Record wall time in the envelope.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { timing: true }
    }
}

/// Runs one job with timing enabled.
pub fn run(spec: &JobSpec) -> ResultEnvelope {
    run_with(spec, RunOptions::default())
}

pub fn run_with(spec: &JobSpec, opts: RunOptions) -> ResultEnvelope {
    let input = spec.canonical();
    let start = Instant::now();
    let outcome = spec.validate().and_then(|_| execute(&input));
    let wall_time_ms = opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    match outcome {
        Ok((payload, checks)) => ResultEnvelope {
            version: VERSION.to_string(),
            input,
            wall_time_ms,
            status: if checks.iter().all(|c| c.passed) {
                Status::Ok
            } else {
                Status::VerificationFailure
            },
            payload: Some(payload),
            checks,
            error: None,
        },
        Err(e) => ResultEnvelope {
            version: VERSION.to_string(),
            input,
            wall_time_ms,
            status: Status::Error,
            payload: None,
            checks: Vec::new(),
            error: Some(ErrorInfo {
                kind: e.kind().to_string(),
                message: e.to_string(),
            }),
        },
    }
}

/// Runs a batch on at most `workers` threads (all cores when `None`),
/// returning envelopes in input order.
pub fn run_batch(batch: &[JobSpec], opts: RunOptions, workers: Option<usize>) -> Result<Vec<ResultEnvelope>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| Error::Io(e.to_string()))?;
    Ok(pool.install(|| batch.par_iter().map(|s| run_with(s, opts)).collect()))
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Parse(e.to_string()))
}

/// Checks the optional `--group` against the group the form lives on.
fn metric_for(group: &Option<GroupArg>, form: &super::FormSpec) -> Result<MetricGroup> {
    let m = form.metric()?;
    if let Some(GroupArg(g)) = group {
        if g != m.group() {
            return Err(Error::ShapeMismatch(format!(
                "--group {} does not match the form's group {}",
                GroupArg(g.clone()),
                GroupArg(m.group().clone())
            )));
        }
    }
    Ok(m)
}

fn quadratic_for(group: &Option<GroupArg>, form: &super::FormSpec) -> Result<QuadraticForm> {
    let q = form.quadratic_form()?;
    if let Some(GroupArg(g)) = group {
        if g != q.group() {
            return Err(Error::ShapeMismatch(format!(
                "--group {} does not match the form's group {}",
                GroupArg(g.clone()),
                GroupArg(q.group().clone())
            )));
        }
    }
    Ok(q)
}

type Outcome = (Value, Vec<Check>);

fn execute(spec: &JobSpec) -> Result<Outcome> {
    let caps = &spec.caps;
    match &spec.command {
        Command::GroupInfo { group: GroupArg(a) } => Ok((
            json!({
                "group": a,
                "order": a.order(),
                "exponent": a.exponent(),
                "invariant_factors": Subgroup::whole(a).invariant_factors(),
            }),
            Vec::new(),
        )),
        Command::GroupAut { group: GroupArg(a) } => {
            let auts = enumerate_automorphisms(a, caps)?;
            let mut bijective = true;
            for f in &auts {
                bijective &= f.is_isomorphism(caps)?;
            }
            Ok((
                json!({ "group": a, "order": auts.len() }),
                vec![Check::new("every enumerated map is bijective", bijective)],
            ))
        }
        Command::GroupSubgroups { group: GroupArg(a) } => {
            let subs = enumerate_subgroups(a, caps)?;
            let closed = subs.iter().all(Subgroup::is_closed);
            let divides = subs.iter().all(|s| a.order() % s.order() == 0);
            Ok((
                json!({ "count": subs.len(), "subgroups": subs }),
                vec![
                    Check::new("every subgroup is closed under addition", closed),
                    Check::new("every subgroup order divides |A|", divides),
                ],
            ))
        }
        Command::QuadList {
            group: GroupArg(a),
            nondegenerate,
        } => {
            let forms = enumerate_quadratic_forms(a, *nondegenerate, caps)?;
            let valid = forms.iter().all(|q| q.validate().is_ok());
            Ok((
                json!({ "count": forms.len(), "forms": forms }),
                vec![Check::new("every form satisfies the form axioms", valid)],
            ))
        }
        Command::QuadInfo { group, form } => {
            let q = quadratic_for(group, form)?;
            let a = q.group().clone();
            let radical: Vec<Vec<u64>> = q.radical().into_iter().map(|i| a.coords_at(i)).collect();
            let checks = vec![Check::new("form axioms", q.validate().is_ok())];
            Ok((
                json!({
                    "order": a.order(),
                    "nondegenerate": q.is_nondegenerate(),
                    "isotropic_count": q.isotropic_count(),
                    "radical": radical,
                    "form": q,
                }),
                checks,
            ))
        }
        Command::QuadSummary { group, form } => {
            let m = metric_for(group, form)?;
            let o = orthogonal_group(&m, caps)?;
            let s = o.summary();
            let lags = lagrangians(&m, caps)?;
            Ok((
                json!({
                    "order": m.order(),
                    "nondegenerate": true,
                    "orthogonal_order": s.order,
                    "so_order": s.so_order,
                    "so_index": s.index,
                    "lagrangian_count": lags.len(),
                }),
                vec![
                    Check::new("O(A,q) preserves q", o.verify().is_ok()),
                    Check::new("SO(A,q) is a subgroup", s.so_is_subgroup),
                ],
            ))
        }
        Command::OrthOrder { group, form, elements } => {
            let m = metric_for(group, form)?;
            let o = orthogonal_group(&m, caps)?;
            let s = o.summary();
            let det_id_one = o.identity_position().map(|i| o.determinants()[i] == 1).unwrap_or(false);
            let checks = vec![
                Check::new("O(A,q) preserves q", o.verify().is_ok()),
                Check::new("O(A,q) is closed under composition", o.is_group()),
                Check::new("det(id) = 1", det_id_one),
                Check::new("SO(A,q) is a subgroup", s.so_is_subgroup),
                Check::new("[O : SO] ≤ 2", s.index <= 2),
            ];
            let mut v = to_value(&s)?;
            if *elements {
                let mats: Vec<Vec<Vec<u64>>> = o.elements().iter().map(|h| h.matrix().to_vec()).collect();
                v["elements"] = to_value(&mats)?;
            }
            Ok((v, checks))
        }
        Command::OrthSplit { n, p } => {
            let r = split_orthogonal_check(*n, *p, caps)?;
            let checks = vec![Check::new("brute force equals the split order formula", r.equal)];
            Ok((to_value(&r)?, checks))
        }
        Command::LagrangianList { group, form } => {
            let m = metric_for(group, form)?;
            let lags = lagrangians(&m, caps)?;
            let mut ok = true;
            for l in &lags {
                ok &= is_lagrangian(l, &m)?;
            }
            Ok((
                json!({ "count": lags.len(), "lagrangians": lags }),
                vec![Check::new("q ≡ 1 on L and |L|² = |A| for every L", ok)],
            ))
        }
        Command::LagrangianPolarize { group, form } => {
            let m = metric_for(group, form)?;
            let pols = find_polarizations(&m, caps)?;
            let lags = lagrangians(&m, caps)?;
            let verified = pols.iter().all(|p| p.verify());
            // a Lagrangian with L ⊕ L̂ ≇ A has no polarization, so only injectivity is checked
            let mut used: Vec<&[usize]> = pols.iter().map(|p| p.lagrangian.indices()).collect();
            used.sort();
            used.dedup();
            let injective = used.len() == pols.len() && used.iter().all(|u| lags.iter().any(|l| l.indices() == *u));
            Ok((
                json!({
                    "count": pols.len(),
                    "lagrangian_count": lags.len(),
                    "verified": verified,
                    "polarizations": pols,
                }),
                vec![
                    Check::new("every polarization carries q to ev", verified),
                    Check::new("at most one polarization per Lagrangian", injective),
                ],
            ))
        }
        Command::Cohomology {
            group: GroupArg(a),
            degree,
            coeff,
        } => {
            let g = Arc::new(FiniteGroup::from_abelian(a));
            let h = cohomology(&g, *degree, *coeff, caps)?;
            let summary = CohomologySummary::from(&h);
            Ok((to_value(&summary)?, h.checks.clone()))
        }
        Command::CohomologyEm { group: GroupArg(a) } => {
            let r = em_correspondence(a, caps)?;
            Ok((to_value(&r)?, r.checks.clone()))
        }
        Command::CohomologyTorsor { group, form, gsub } => {
            let m = metric_for(group, form)?;
            let g = orthogonal_subgroup(&m, &(*gsub).into(), caps)?;
            let r = torsor_and_coefficient_report(&m, &g, caps)?;
            let mut checks = r.h4_coefficient.checks.clone();
            checks.extend(r.h3_scalars.checks.iter().cloned());
            checks.push(Check::new("l² = |A|", (r.l * r.l) as usize == m.order()));
            Ok((to_value(&r)?, checks))
        }
        Command::CohomologyRandom {
            group: GroupArg(a),
            degree,
            coeff,
            samples,
        } => random_checks(a, *degree, *coeff, *samples, spec.seed.unwrap_or(0), caps),
        Command::CenterPointed {
            group: GroupArg(l),
            tau,
        } => {
            let d = tau.load(l)?;
            let r = pointedness(&d, caps)?;
            let m = r.modulus;
            let g = d.tau().group().clone();
            let mut witnesses_ok = true;
            for (i, w) in r.witnesses.iter().enumerate() {
                if let Some(t) = w {
                    let gen = l.index_of(&l.generator(i));
                    let dt = Cochain::new(g.clone(), 1, m, t.clone())?.differential();
                    witnesses_ok &= dt == t_two_cocycle(&d, gen).embed(m)?;
                }
            }
            Ok((
                to_value(&r)?,
                vec![Check::new("every witness t satisfies d(t) = T_ℓ", witnesses_ok)],
            ))
        }
        Command::CenterClassify {
            group: GroupArg(l),
            tau,
            twist,
        } => {
            let d = tau.load(l)?;
            let t = solve_trivialization(&d, caps)?;
            let c = classify_center_with(&d, &t, *twist)?;
            Ok((to_value(&c)?, c.checks.clone()))
        }
        Command::CliffordPin { p, dim, form } => {
            let space = form.build(*p, *dim)?;
            let r = pin_spin_report(&space, caps)?;
            Ok((to_value(&r)?, r.checks.clone()))
        }
        Command::CliffordSpinor { p, m } => {
            let r = spinor_module(*m, *p, caps)?;
            Ok((to_value(&r)?, r.checks.clone()))
        }
    }
}

/// For each sample: a random `(n−1)`-cochain `c` with `d(c)` a cocycle and a
/// coboundary, and a random `n`-cocycle.
fn random_checks(
    a: &FiniteAbelianGroup,
    n: usize,
    coeff: Coefficients,
    samples: usize,
    seed: u64,
    caps: &Caps,
) -> Result<Outcome> {
    let Coefficients::MuN(m) = coeff else {
        return Err(Error::Parse("random cochains need muN:<N> coefficients".into()));
    };
    if n == 0 {
        return Err(Error::Parse("degree must be at least 1".into()));
    }
    let g = Arc::new(FiniteGroup::from_abelian(a));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = normalized_len(g.order(), n - 1);
    let (mut dd, mut exact, mut closed) = (true, true, true);
    let mut cocycles = Vec::with_capacity(samples);
    for _ in 0..samples {
        let coords: Vec<u64> = (0..len).map(|_| rng.gen_range(0..m)).collect();
        let c = Cochain::from_normalized_coords(g.clone(), n - 1, m, &coords)?;
        let dc = c.differential();
        dd &= dc.is_cocycle();
        exact &= is_coboundary(&dc, caps)?;
        let z = random_cocycle(&g, n, m, &mut rng, caps)?;
        closed &= z.is_cocycle();
        cocycles.push(z.values().to_vec());
    }
    Ok((
        json!({ "samples": samples, "modulus": m, "degree": n, "cocycles": cocycles }),
        vec![
            Check::new("d∘d = 0 on random cochains", dd),
            Check::new("d(c) is a coboundary", exact),
            Check::new("random cocycles are closed", closed),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::{FormSpec, TauSpec};

    fn quiet(c: Command) -> ResultEnvelope {
        run_with(&JobSpec::new(c), RunOptions { timing: false })
    }

    #[test]
    fn orth_order_of_ev3() {
        let e = quiet(Command::OrthOrder {
            group: Some("3,3".parse().unwrap()),
            form: "ev:3".parse().unwrap(),
            elements: true,
        });
        assert_eq!(e.status, Status::Ok, "{e:?}");
        let p = e.payload.unwrap();
        // O(ev on Z/3 ⊕ Z/3) ≅ O(1,1; F_3) has order 4
        assert_eq!(p["order"], 4);
        assert_eq!(p["elements"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn group_mismatch_is_usage_error() {
        let e = quiet(Command::OrthOrder {
            group: Some("9".parse().unwrap()),
            form: FormSpec::Ev("3".parse().unwrap()),
            elements: false,
        });
        assert_eq!(e.exit_code(), super::super::EXIT_USAGE);
    }

    #[test]
    fn center_classify_trivial_tau() {
        let e = quiet(Command::CenterClassify {
            group: "3".parse().unwrap(),
            tau: TauSpec::Trivial,
            twist: Default::default(),
        });
        assert_eq!(e.status, Status::Ok, "{e:?}");
        let q: QuadraticForm = serde_json::from_value(e.payload.unwrap()["metric"].clone()).unwrap();
        let ev = crate::quadratic::evaluation_form(&"3".parse().unwrap());
        for i in 0..9 {
            assert_eq!(q.value_idx(i), ev.form().value_idx(i));
        }
    }

    #[test]
    fn cap_is_reported() {
        let caps = Caps::default().with_group_order(4);
        let spec = JobSpec::new(Command::GroupAut {
            group: "3,3".parse().unwrap(),
        })
        .with_caps(caps);
        let e = run_with(&spec, RunOptions { timing: false });
        assert_eq!(e.error.as_ref().unwrap().kind, "CapExceeded");
        assert_eq!(e.exit_code(), super::super::EXIT_CAP);
    }

    #[test]
    fn random_is_deterministic() {
        let spec = JobSpec::new(Command::CohomologyRandom {
            group: "2,2".parse().unwrap(),
            degree: 2,
            coeff: Coefficients::MuN(8),
            samples: 5,
        })
        .with_seed(11);
        let a = serde_json::to_string(&run_with(&spec, RunOptions { timing: false })).unwrap();
        let b = serde_json::to_string(&run_with(&spec, RunOptions { timing: false })).unwrap();
        assert_eq!(a, b);
        let e: ResultEnvelope = serde_json::from_str(&a).unwrap();
        assert_eq!(e.status, Status::Ok);
        assert_eq!(e.input.seed, Some(11));
    }
}
