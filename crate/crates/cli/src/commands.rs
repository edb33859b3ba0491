use serde_json::{json, Value};

use spectral_lab::functionals::{
    g_1d, g_composite_bound, g_product_direct, ql_liminf_1d, ql_liminf_product, FunctionalValue,
};
use spectral_lab::product_spectrum::{build_product, check_mm, exceptional_dilatations, ProductSpectrum};
use spectral_lab::square_lab::{c_omega, c_omega_scan, min_lambda_with_representations};
use spectral_lab::tube_lab::{
    tube_complement, tube_functional_bound, Approximation, ThetaMode, TubeSpec,
};
use spectral_lab::{ArithmeticMode, ModelOperator1D, Rational, RectSet, Weight1D};

use crate::output::{real, Report, Table};
use crate::{parse, CliError, Command, Method, Mode, PairArgs, SquareCmd, TubeCmd};

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Compute(e.to_string()))
}

fn report(name: &str, json: Value, table: Option<Table>) -> Result<Report, CliError> {
    Ok(Report { name: name.to_string(), json, table })
}

fn check_cutoff(lambda_max: f64) -> Result<(), CliError> {
    if lambda_max.is_finite() && lambda_max >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Schema(format!("lambda-max must be a nonnegative number, got {lambda_max}")))
    }
}

fn arithmetic(op1: &ModelOperator1D, op2: &ModelOperator1D, mode: Option<Mode>, tol: Option<f64>, cutoff: f64) -> ArithmeticMode {
    let exact_ok = op1.pi_ratio.is_some() && op2.pi_ratio.is_some();
    match mode {
        Some(Mode::Exact) => ArithmeticMode::ExactRational,
        Some(Mode::Floating) => tol.map_or(ArithmeticMode::floating_for(cutoff), |t| ArithmeticMode::Floating { tolerance: t }),
        None if exact_ok && tol.is_none() => ArithmeticMode::ExactRational,
        None => tol.map_or(ArithmeticMode::floating_for(cutoff), |t| ArithmeticMode::Floating { tolerance: t }),
    }
}

fn product(
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    cutoff: f64,
    mode: ArithmeticMode,
) -> Result<ProductSpectrum, CliError> {
    Ok(build_product(&op1.spectrum_covering(cutoff), &op2.spectrum_covering(cutoff), cutoff, mode)?)
}

fn pair(a: &PairArgs) -> Result<(ModelOperator1D, ModelOperator1D, ProductSpectrum), CliError> {
    check_cutoff(a.lambda_max)?;
    let (op1, op2) = (parse::operator(&a.op1)?, parse::operator(&a.op2)?);
    let mode = arithmetic(&op1, &op2, a.mode, a.tolerance, a.lambda_max);
    let ps = product(&op1, &op2, a.lambda_max, mode)?;
    Ok((op1, op2, ps))
}

fn exact_text(r: &Option<Rational>) -> Value {
    r.map_or(Value::Null, |r| Value::String(r.to_string()))
}

pub fn run(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Spectrum { op, count, lambda_max } => {
            let opr = parse::operator(&op)?;
            let entries = match (count, lambda_max) {
                (Some(n), _) => opr.spectrum(n)?,
                (None, Some(l)) => {
                    check_cutoff(l)?;
                    let n = opr.count_up_to(l);
                    if n == 0 {
                        Vec::new()
                    } else {
                        opr.spectrum(n)?
                    }
                }
                (None, None) => return Err(CliError::Schema("need --count or --lambda-max".into())),
            };
            let mut t = Table::new(&["index", "eigenvalue", "multiplicity", "exact"]);
            for e in &entries {
                t.push(vec![
                    e.index.to_string(),
                    real(e.eigenvalue),
                    e.multiplicity.to_string(),
                    e.exact.map_or(String::new(), |r| r.to_string()),
                ]);
            }
            report("spectrum", json!({ "operator": to_json(&opr)?, "entries": to_json(&entries)? }), Some(t))
        }

        Command::Product(a) => {
            let (_, _, ps) = pair(&a)?;
            let mut t = Table::new(&["i", "j", "eigenvalue", "own_mult", "total_mult", "class_id"]);
            for e in &ps.entries {
                t.push(vec![
                    e.i.to_string(),
                    e.j.to_string(),
                    real(e.eigenvalue),
                    e.own_multiplicity.to_string(),
                    e.total_multiplicity.to_string(),
                    e.class_id.to_string(),
                ]);
            }
            let collisions: Vec<Value> = ps
                .classes
                .iter()
                .filter(|c| c.members.len() > 1)
                .map(|c| {
                    json!({ "class_id": c.id, "sum": c.eigenvalue, "exact": exact_text(&c.exact),
                            "pairs": c.members, "total_multiplicity": c.total_multiplicity })
                })
                .collect();
            let summary = json!({
                "cutoff": ps.cutoff, "mode": to_json(&ps.mode)?, "mm": ps.mm_holds,
                "entries": ps.entries.len(), "classes": ps.classes.len(), "collisions": collisions,
            });
            report("product", summary, Some(t))
        }

        Command::Mm(a) => {
            let (_, _, ps) = pair(&a)?;
            let v = check_mm(&ps);
            let mut t = Table::new(&["class_id", "sum", "i", "j"]);
            for c in &v.classes {
                for &(i, j) in &c.members {
                    t.push(vec![c.id.to_string(), real(c.eigenvalue), i.to_string(), j.to_string()]);
                }
            }
            let witnesses: Vec<Value> = v
                .classes
                .iter()
                .map(|c| {
                    json!({ "sum": c.eigenvalue, "exact": exact_text(&c.exact), "pairs": c.members,
                            "total_multiplicity": c.total_multiplicity })
                })
                .collect();
            let summary = json!({
                "mm": v.holds, "scope": to_json(&v.scope)?, "cutoff": v.cutoff,
                "witnesses": witnesses, "collisions": to_json(&v.witnesses)?,
            });
            report("mm", summary, Some(t))
        }

        Command::Dilatation { op1, op2, alpha, s_min, s_max, lambda_max } => {
            check_cutoff(lambda_max)?;
            let (o1, o2) = (parse::operator(&op1)?, parse::operator(&op2)?);
            let alpha: Rational = alpha.parse()?;
            let out = exceptional_dilatations(
                &o1.spectrum_covering(lambda_max),
                &o2.spectrum_covering(lambda_max),
                alpha,
                s_min,
                s_max,
                lambda_max,
            )?;
            let mut t = Table::new(&["s", "exact", "ratio", "i", "j", "i2", "j2"]);
            let mut rows = Vec::new();
            for d in &out {
                let exact = d.exact.as_ref().map(|x| x.to_string());
                t.push(vec![
                    real(d.s),
                    exact.clone().unwrap_or_default(),
                    d.ratio.to_string(),
                    d.witness.i.to_string(),
                    d.witness.j.to_string(),
                    d.witness.i2.to_string(),
                    d.witness.j2.to_string(),
                ]);
                rows.push(json!({ "s": d.s, "exact": exact, "ratio": d.ratio.to_string(), "witness": to_json(&d.witness)? }));
            }
            let summary = json!({
                "alpha": alpha.to_string(), "window": [s_min, s_max], "cutoff": lambda_max,
                "count": out.len(), "dilatations": rows,
            });
            report("dilatation", summary, Some(t))
        }

        Command::Gfunc { op, op1, op2, omega, lambda_max, method, window } => {
            check_cutoff(lambda_max)?;
            if let Some(op) = op {
                let opr = parse::operator(&op)?;
                let set = parse::interval_set(&omega, opr.length)?;
                let w = Weight1D::Indicator(set);
                let v = match window {
                    Some(f) => ql_liminf_1d(&opr, &w, lambda_max, f)?,
                    None => g_1d(&opr, &w, lambda_max)?,
                };
                return report("gfunc", functional_json(&v)?, None);
            }
            let (o1, o2) = (parse::operator(op1.as_deref().unwrap())?, parse::operator(op2.as_deref().unwrap())?);
            let set = parse::rect_set(&omega, (o1.length, o2.length))?;
            gfunc_product(&o1, &o2, &set, lambda_max, method, window)
        }

        Command::Square { action } => match action {
            SquareCmd::Scan { omega, lambda_max } => {
                let set = parse::rect_set(&omega, (std::f64::consts::PI, std::f64::consts::PI))?;
                let scan = c_omega_scan(&set, lambda_max)?;
                let mut t = Table::new(&["lambda", "dim", "c_value"]);
                for r in &scan.table {
                    t.push(vec![r.lambda.to_string(), r.dim.to_string(), real(r.c_value)]);
                }
                let summary = json!({
                    "lambda_max": scan.lambda_max, "eigenvalues": scan.table.len(),
                    "min_c": scan.min_c, "argmin_lambda": scan.argmin_lambda, "omega": to_json(&set)?,
                });
                report("square_scan", summary, Some(t))
            }
            SquareCmd::Value { omega, lambda } => {
                let set = parse::rect_set(&omega, (std::f64::consts::PI, std::f64::consts::PI))?;
                let r = c_omega(lambda, &set)?;
                let pairs = spectral_lab::square_lab::sum_two_squares(lambda).pairs;
                let mut v = to_json(&r)?;
                v["pairs"] = to_json(&pairs)?;
                report("square_value", v, None)
            }
            SquareCmd::MinLambda { p, limit } => {
                let l = min_lambda_with_representations(p, limit)?;
                let pairs = spectral_lab::square_lab::sum_two_squares(l).pairs;
                report("square_min_lambda", json!({ "p": p, "lambda": l, "pairs": pairs }), None)
            }
        },

        Command::Tube { action } => match action {
            TubeCmd::Scan { geodesic, eps_list, op1, op2, lambda_max, resolution, eta } => {
                check_cutoff(lambda_max)?;
                let seg = parse::geodesic(&geodesic, (std::f64::consts::PI, std::f64::consts::PI))?;
                let (l1, l2) = seg.domain;
                let o1 = match op1 {
                    Some(s) => parse::operator(&s)?,
                    None => ModelOperator1D::dirichlet(l1)?,
                };
                let o2 = match op2 {
                    Some(s) => parse::operator(&s)?,
                    None => ModelOperator1D::dirichlet(l2)?,
                };
                // A clustering failure leaves minimal multiplicity unverified.
                let mm = product(&o1, &o2, lambda_max, ArithmeticMode::floating_for(lambda_max))
                    .map(|ps| check_mm(&ps).holds)
                    .unwrap_or(false);
                let mut t = Table::new(&["epsilon", "bound_value", "direct_value"]);
                let mut rows = Vec::new();
                let mut label = "";
                for eps in parse::real_list(&eps_list)? {
                    let ts = match eta {
                        Some(e) => TubeSpec::with_eta(seg, eps, e)?,
                        None => TubeSpec::new(seg, eps)?,
                    }
                    .resolution(resolution)?;
                    let bound = tube_functional_bound(&ts, &o1, &o2, lambda_max, ThetaMode::BoundFormula, Approximation::Outer, mm)?;
                    let direct = tube_functional_bound(&ts, &o1, &o2, lambda_max, ThetaMode::Direct, Approximation::Outer, mm)?;
                    label = bound.label();
                    t.push(vec![real(eps), real(bound.functional.value), real(direct.functional.value)]);
                    rows.push(json!({
                        "epsilon": eps, "bound_value": bound.functional.value,
                        "direct_value": direct.functional.value, "covering_count": ts.covering_count,
                    }));
                }
                let summary = json!({
                    "geodesic": to_json(&seg)?, "lambda_max": lambda_max, "resolution": resolution,
                    "mm_verified": mm, "label": label, "rows": rows,
                });
                report("tube_scan", summary, Some(t))
            }
            TubeCmd::Complement { geodesic, eps, resolution, eta } => {
                let seg = parse::geodesic(&geodesic, (std::f64::consts::PI, std::f64::consts::PI))?;
                let ts = match eta {
                    Some(e) => TubeSpec::with_eta(seg, eps, e)?,
                    None => TubeSpec::new(seg, eps)?,
                }
                .resolution(resolution)?;
                let (outer, inner) = tube_complement(&ts)?;
                let summary = json!({
                    "tube": to_json(&ts)?, "outer": to_json(&outer)?, "inner": to_json(&inner)?,
                    "outer_measure": outer.measure(), "inner_measure": inner.measure(),
                });
                report("tube_complement", summary, None)
            }
        },
    }
}

fn functional_json(v: &FunctionalValue) -> Result<Value, CliError> {
    to_json(v)
}

fn gfunc_product(
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    set: &RectSet,
    cutoff: f64,
    method: Method,
    window: Option<f64>,
) -> Result<Report, CliError> {
    let mut out = serde_json::Map::new();
    let need_direct = matches!(method, Method::Direct | Method::Both) || window.is_some();
    let mut mm = None;
    if need_direct {
        let ps = product(op1, op2, cutoff, arithmetic(op1, op2, None, None, cutoff))?;
        mm = Some(ps.mm_holds);
        let v = match window {
            Some(f) => ql_liminf_product(&ps, op1, op2, set, cutoff, f)?,
            None => g_product_direct(&ps, op1, op2, set, cutoff)?,
        };
        out.insert("direct".into(), functional_json(&v)?);
    }
    if matches!(method, Method::Composite | Method::Both) && window.is_none() {
        out.insert("composite".into(), functional_json(&g_composite_bound(op1, op2, set, cutoff)?)?);
    }
    if let Some(m) = mm {
        out.insert("mm".into(), Value::Bool(m));
    }
    report("gfunc", Value::Object(out), None)
}
