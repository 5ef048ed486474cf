//! The five subcommands, each returning a report plus verdict.

use crate::input::{self, LoadedModel};
use crate::report::{self, complex, number, site_list, subset_field};
use crate::{CliError, CriterionArg, Outcome, RuleArg, Status};
use latgas::criteria;
use latgas::exact::{self, PartitionQuery};
use latgas::hypergraph::{self, ScanRule};
use latgas::ks::{self, Selector};
use latgas::recursion;
use latgas::{C64, CorrelationTable64, EvalError, SiteSet};
use serde_json::{json, Value};
use std::path::Path;

fn eval_err(e: EvalError) -> CliError {
    match e {
        EvalError::MissingPotential | EvalError::DegreeExceeded { .. } => {
            CliError::Capability(e.to_string())
        }
        EvalError::VanishingDenominator(_)
        | EvalError::NoConvergence { .. }
        | EvalError::DepthGuardExceeded => CliError::Numerical(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn query_value(lm: &LoadedModel) -> Value {
    json!({
        "pinned": site_list(&lm.labels, lm.query.pinned),
        "volume": site_list(&lm.labels, lm.query.volume),
        "boundary": site_list(&lm.labels, lm.query.boundary),
    })
}

pub fn partition(input: &Path, sweep: bool, csv: bool) -> Result<Outcome, CliError> {
    let lm = input::load_model(input)?;
    let q = &lm.query;
    let evaluate = |volume: SiteSet| {
        exact::partition_function(
            &lm.model,
            PartitionQuery { pinned: q.pinned, volume, boundary: q.boundary },
        )
    };

    let mut rows: Vec<(SiteSet, C64)> = Vec::new();
    if sweep {
        let mut prefix = SiteSet::EMPTY;
        rows.push((prefix, evaluate(prefix)));
        for x in q.volume.sites() {
            prefix = prefix.insert(x);
            rows.push((prefix, evaluate(prefix)));
        }
    } else {
        rows.push((q.volume, evaluate(q.volume)));
    }

    let mut rep = json!({
        "command": "partition",
        "query": query_value(&lm),
    });
    if sweep {
        rep["sweep"] = rows
            .iter()
            .map(|&(volume, z)| {
                json!({ "volume": site_list(&lm.labels, volume), "Z": complex(z) })
            })
            .collect::<Vec<_>>()
            .into();
    } else {
        rep["Z"] = complex(rows[0].1);
    }

    let csv_text = csv.then(|| {
        let mut out = String::from("volume,re,im\n");
        for &(volume, z) in &rows {
            out.push_str(&format!(
                "{},{},{}\n",
                subset_field(&lm.labels, volume),
                number(z.re),
                number(z.im)
            ));
        }
        out
    });
    Ok(Outcome { report: rep, csv: csv_text, status: Status::Satisfied })
}

pub fn check(
    input: &Path,
    criterion: CriterionArg,
    params: Option<&Path>,
    delta: Option<f64>,
    csv: bool,
) -> Result<Outcome, CliError> {
    let hyper = matches!(criterion, CriterionArg::Galvin | CriterionArg::BencsBuys);
    let weighted = matches!(criterion, CriterionArg::Dobrushin | CriterionArg::Kp);
    if !hyper && delta.is_some() {
        return Err(CliError::Input(
            "--Delta only applies to the galvin and bencs-buys criteria".into(),
        ));
    }
    if !weighted && params.is_some() {
        return Err(CliError::Input(
            "--params only applies to the dobrushin and kp criteria".into(),
        ));
    }

    let (labels, rep, extras) = if hyper {
        let lh = input::load_hypergraph(input)?;
        let name = if criterion == CriterionArg::Galvin { "galvin" } else { "bencs-buys" };
        let delta = delta
            .ok_or_else(|| CliError::Input(format!("criterion {name} needs --Delta")))?;
        let activity = lh.activity.as_ref().ok_or_else(|| {
            CliError::Input("the hypergraph file lists no activities to check".into())
        })?;
        let min_delta = if criterion == CriterionArg::Galvin { 1.0 } else { 2.0 };
        if delta < min_delta || delta.is_nan() {
            return Err(CliError::Input(format!(
                "criterion {name} needs Delta >= {min_delta}, got {delta}"
            )));
        }
        let rep = match criterion {
            CriterionArg::Galvin => hypergraph::galvin_check(&lh.graph, activity, delta),
            _ => hypergraph::bencs_buys_check(&lh.graph, activity, delta),
        };
        (lh.labels, rep, vec![("Delta", Value::from(delta))])
    } else {
        let lm = input::load_model(input)?;
        match criterion {
            CriterionArg::Dobrushin | CriterionArg::Kp => {
                let name = if criterion == CriterionArg::Dobrushin { "dobrushin" } else { "kp" };
                let path = params
                    .ok_or_else(|| CliError::Input(format!("criterion {name} needs --params")))?;
                let p = input::load_params(path, &lm.labels)?;
                let rep = if criterion == CriterionArg::Dobrushin {
                    criteria::dobrushin_check(&lm.model, &p)
                } else {
                    criteria::kp_like_check(&lm.model, &p)
                };
                (lm.labels, rep, vec![])
            }
            CriterionArg::KpAuto => {
                let out = criteria::kp_auto(&lm.model);
                let extras = vec![
                    ("c_bar", Value::from(out.c_bar)),
                    ("derived_alpha", Value::from(out.c_bar.recip())),
                    ("derived_r", Value::from((1.0 + out.c_bar).recip())),
                ];
                (lm.labels, out.report, extras)
            }
            CriterionArg::Gms => {
                let rep = criteria::gms_improved_check(&lm.model).map_err(eval_err)?;
                (lm.labels, rep, vec![])
            }
            _ => unreachable!("hypergraph criteria handled above"),
        }
    };

    let mut report = report::criterion(&labels, &rep);
    report["command"] = "check".into();
    for (key, value) in extras {
        report[key] = value;
    }
    let status = if rep.overall {
        Status::Satisfied
    } else {
        let site = report::first_failing(&labels, &rep).unwrap_or_default();
        Status::Unsatisfied(format!(
            "criterion {} unsatisfied at site {site:?}",
            rep.criterion.as_str()
        ))
    };
    let csv_text = csv.then(|| report::criterion_csv(&labels, &rep));
    Ok(Outcome { report, csv: csv_text, status })
}

pub fn ks_solve(input: &Path, tol: f64, csv: bool) -> Result<Outcome, CliError> {
    let lm = input::load_model(input)?;
    let q = &lm.query;
    let model = if q.boundary.is_empty() {
        lm.model.clone()
    } else {
        lm.model.conditioned(q.boundary)
    };
    let volume = q.volume;
    let support = lm.solver_support();
    let max_iter = ks::default_max_iter(support);

    let mut deltas: Vec<f64> = Vec::new();
    let mut prev: Option<CorrelationTable64> = None;
    let sol = ks::picard_solve_observed(
        &model,
        volume,
        support,
        Selector::MinSite,
        tol,
        max_iter,
        |_, rho| {
            if let Some(p) = prev.as_ref() {
                deltas.push(rho.max_abs_diff(p));
            }
            prev = Some(rho.clone());
        },
    )
    .map_err(|e| match e {
        EvalError::NoConvergence { .. } => {
            let tail: Vec<String> =
                deltas.iter().rev().take(8).rev().map(|&d| number(d)).collect();
            CliError::Numerical(format!("{e}; trailing sweep updates: [{}]", tail.join(", ")))
        }
        other => eval_err(other),
    })?;

    let mu = ks::mu_recover(&sol.table, volume).map_err(eval_err)?;
    let mu_empty = mu.get(SiteSet::EMPTY);
    if mu_empty.norm() < 1e-14 {
        return Err(CliError::Numerical(format!(
            "recovered weight at the empty set has norm {:e}; consistency check impossible",
            mu_empty.norm()
        )));
    }
    let mut mu_residual = 0.0f64;
    for x in support.subsets() {
        let expected = model.monomial(x) * model.kappa(x);
        mu_residual = mu_residual.max((mu.get(x) / mu_empty - expected).norm());
    }

    let entries: Vec<Value> = sol
        .table
        .iter()
        .map(|(subset, v)| {
            json!({ "subset": site_list(&lm.labels, subset), "re": v.re, "im": v.im })
        })
        .collect();
    let report = json!({
        "command": "ks-solve",
        "volume": site_list(&lm.labels, volume),
        "iterations": sol.iterations,
        "residual": sol.residual,
        "mu_residual": mu_residual,
        "table": { "support": site_list(&lm.labels, support), "entries": entries },
    });
    let csv_text = csv.then(|| {
        let mut out = String::from("subset,re,im\n");
        for (subset, v) in sol.table.iter() {
            out.push_str(&format!(
                "{},{},{}\n",
                subset_field(&lm.labels, subset),
                number(v.re),
                number(v.im)
            ));
        }
        out
    });
    Ok(Outcome { report, csv: csv_text, status: Status::Satisfied })
}

pub fn crosscheck(
    input: &Path,
    params: Option<&Path>,
    tol: f64,
    max_dev: Option<f64>,
    csv: bool,
) -> Result<Outcome, CliError> {
    let lm = input::load_model(input)?;
    let (p, params_source) = match params {
        Some(path) => (input::load_params(path, &lm.labels)?, "file"),
        None => (criteria::kp_auto(&lm.model).params, "kp-auto"),
    };
    let crit = criteria::dobrushin_check(&lm.model, &p);
    let mut report = json!({
        "command": "crosscheck",
        "criterion": report::criterion(&lm.labels, &crit),
        "params_source": params_source,
    });
    if !crit.overall {
        let site = report::first_failing(&lm.labels, &crit).unwrap_or_default();
        return Ok(Outcome {
            report,
            csv: None,
            status: Status::Unsatisfied(format!(
                "dobrushin criterion unsatisfied at site {site:?}"
            )),
        });
    }

    let q = &lm.query;
    let cond = if q.boundary.is_empty() {
        lm.model.clone()
    } else {
        lm.model.conditioned(q.boundary)
    };
    let mut rows: Vec<(usize, C64, C64, C64, f64)> = Vec::new();
    let mut overall_dev = 0.0f64;
    for x in 0..lm.model.site_count() {
        if q.boundary.contains(x) {
            continue;
        }
        let volume = q.volume.remove(x);
        let direct =
            exact::effective_activity(&lm.model, x, volume, q.boundary).map_err(eval_err)?;
        let recursive = recursion::recursive_effective_activity(
            &lm.model,
            x,
            volume,
            q.boundary,
            volume.len() + 2,
        )
        .map_err(eval_err)?;
        let support = volume.insert(x);
        let sol = ks::picard_solve(
            &cond,
            volume,
            support,
            Selector::MinSite,
            tol,
            ks::default_max_iter(support),
        )
        .map_err(eval_err)?;
        let solved = sol.table.get(SiteSet::singleton(x));
        let dev = (direct - recursive)
            .norm()
            .max((direct - solved).norm())
            .max((recursive - solved).norm());
        overall_dev = overall_dev.max(dev);
        rows.push((x, direct, recursive, solved, dev));
    }

    report["volume"] = site_list(&lm.labels, q.volume);
    report["per_site"] = rows
        .iter()
        .map(|&(x, direct, recursive, solved, dev)| {
            json!({
                "site": lm.labels.label(x),
                "exact": complex(direct),
                "recursive": complex(recursive),
                "ks": complex(solved),
                "max_dev": dev,
            })
        })
        .collect::<Vec<_>>()
        .into();
    report["max_dev"] = overall_dev.into();

    let csv_text = csv.then(|| {
        let mut out =
            String::from("site,exact_re,exact_im,recursive_re,recursive_im,ks_re,ks_im,max_dev\n");
        for &(x, direct, recursive, solved, dev) in &rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                report::csv_field(lm.labels.label(x)),
                number(direct.re),
                number(direct.im),
                number(recursive.re),
                number(recursive.im),
                number(solved.re),
                number(solved.im),
                number(dev)
            ));
        }
        out
    });
    let status = match max_dev {
        Some(cap) if overall_dev > cap => Status::Breach(format!(
            "max pairwise deviation {} exceeds --max-dev {}",
            number(overall_dev),
            number(cap)
        )),
        _ => Status::Satisfied,
    };
    Ok(Outcome { report, csv: csv_text, status })
}

pub fn scan(
    input: &Path,
    rule: RuleArg,
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<Outcome, CliError> {
    let lh = input::load_hypergraph(input)?;
    let rule = match rule {
        RuleArg::Galvin => ScanRule::Galvin,
        RuleArg::BencsBuys => ScanRule::BencsBuys,
    };
    let rep = hypergraph::polydisc_scan(&lh.graph, rule, delta, samples, seed).map_err(|e| {
        match e {
            EvalError::DegreeExceeded { site, degree, max } => CliError::Capability(format!(
                "site {:?} has degree {degree}, above the allowed Delta = {max}",
                lh.labels.label(site)
            )),
            other => eval_err(other),
        }
    })?;
    let argmin: Vec<Value> = rep
        .argmin_activity
        .iter()
        .enumerate()
        .map(|(x, z)| json!({ "site": lh.labels.label(x), "re": z.re, "im": z.im }))
        .collect();
    let report = json!({
        "command": "scan",
        "rule": rep.rule.as_str(),
        "Delta": rep.delta,
        "samples": rep.samples,
        "seed": rep.seed,
        "min_abs_Z": rep.min_abs_z,
        "argmin_sample": rep.argmin_sample,
        "argmin_activity": argmin,
        "lower_bound": rep.lower_bound,
        "ok": rep.ok,
    });
    let status = if rep.ok {
        Status::Satisfied
    } else {
        Status::Breach(format!(
            "min |Z| = {} fell below the certified bound {}",
            number(rep.min_abs_z),
            number(rep.lower_bound)
        ))
    };
    Ok(Outcome { report, csv: None, status })
}
