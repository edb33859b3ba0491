//! Text formats accepted on the command line.

use serde_json::Value;
use spectral_lab::tube_lab::GeodesicSegment;
use spectral_lab::{IntervalSet, ModelOperator1D, OperatorKind, Rational, Rect, RectSet};

use crate::CliError;

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

/// `c`, `c*pi`, `cpi/q`, `pi/q` or a plain decimal. Rational multiples of π
/// come back with their exact ratio.
pub fn length(text: &str) -> Result<(f64, Option<Rational>), CliError> {
    let t: String = text.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let Some((coef, rest)) = t.split_once("pi") else {
        let v: f64 = t.parse().map_err(|_| schema(format!("bad length {text:?}")))?;
        return Ok((v, None));
    };
    let coef = coef.trim_end_matches('*');
    let denom = match rest {
        "" => 1,
        r => r
            .strip_prefix('/')
            .and_then(|q| q.parse::<i64>().ok())
            .ok_or_else(|| schema(format!("bad length {text:?}")))?,
    };
    let exact = if coef.is_empty() { Some(Rational::ONE) } else { coef.parse::<Rational>().ok() };
    match exact {
        Some(r) => {
            let ratio = r.checked_div(&Rational::from_int(denom)).map_err(|e| schema(e.to_string()))?;
            Ok((std::f64::consts::PI * ratio.to_f64(), Some(ratio)))
        }
        None => {
            let c: f64 = coef.parse().map_err(|_| schema(format!("bad length {text:?}")))?;
            Ok((c * std::f64::consts::PI / denom as f64, None))
        }
    }
}

/// `kind:length`, e.g. `dirichlet:pi`, `neumann:2.5`, `circle:2pi`.
pub fn operator(text: &str) -> Result<ModelOperator1D, CliError> {
    let (kind, len) = text.split_once(':').ok_or_else(|| schema(format!("operator {text:?} is not kind:length")))?;
    let kind = match kind.trim().to_ascii_lowercase().as_str() {
        "dirichlet" | "d" => OperatorKind::DirichletInterval,
        "neumann" | "n" => OperatorKind::NeumannInterval,
        "circle" | "c" | "periodic" => OperatorKind::Circle,
        other => return Err(schema(format!("unknown operator kind {other:?}"))),
    };
    let (l, ratio) = length(len)?;
    let op = match ratio {
        Some(r) => ModelOperator1D::with_pi_ratio(kind, r),
        None => ModelOperator1D::new(kind, l),
    };
    op.map_err(|e| schema(e.to_string()))
}

fn json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| schema(format!("bad JSON {text:?}: {e}")))
}

fn numbers(v: &Value, what: &str) -> Result<Vec<f64>, CliError> {
    v.as_array()
        .ok_or_else(|| schema(format!("{what} must be an array")))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| schema(format!("{what} entries must be numbers"))))
        .collect()
}

fn rows(v: &Value, width: usize, what: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let out: Vec<Vec<f64>> = v
        .as_array()
        .ok_or_else(|| schema(format!("{what} must be an array")))?
        .iter()
        .map(|r| numbers(r, what))
        .collect::<Result<_, _>>()?;
    if let Some(r) = out.iter().find(|r| r.len() != width) {
        return Err(schema(format!("{what} entries need {width} numbers, got {r:?}")));
    }
    Ok(out)
}

/// Clamps to `[0, l]`; coordinates given to a few digits may overshoot `π`.
fn clip(v: f64, l: f64) -> f64 {
    v.clamp(0.0, l)
}

/// A bare `[[a, b], ...]` or `{"domain": L, "intervals": [...]}`. The set is
/// intersected with `[0, domain]`.
pub fn interval_set(text: &str, domain: f64) -> Result<IntervalSet, CliError> {
    let v = json(text)?;
    let (dom, list) = match &v {
        Value::Array(_) => (domain, &v),
        Value::Object(m) => (
            m.get("domain").and_then(Value::as_f64).unwrap_or(domain),
            m.get("intervals").ok_or_else(|| schema("missing \"intervals\""))?,
        ),
        _ => return Err(schema("omega must be an array or an object")),
    };
    if (dom - domain).abs() > 1e-9 * domain {
        return Err(schema(format!("set domain {dom} does not match operator length {domain}")));
    }
    let parts = rows(list, 2, "intervals")?.into_iter().map(|r| (clip(r[0], domain), clip(r[1], domain))).collect();
    IntervalSet::new(domain, parts).map_err(|e| schema(e.to_string()))
}

/// A bare `[[x0, x1, y0, y1], ...]` or `{"domain": [L1, L2], "rects": [...]}`.
/// Overlapping rectangles are split; the set is intersected with the domain.
pub fn rect_set(text: &str, domain: (f64, f64)) -> Result<RectSet, CliError> {
    let v = json(text)?;
    let (dom, list) = match &v {
        Value::Array(_) => (domain, &v),
        Value::Object(m) => {
            let d = match m.get("domain") {
                Some(d) => {
                    let d = numbers(d, "domain")?;
                    if d.len() != 2 {
                        return Err(schema("domain needs two lengths"));
                    }
                    (d[0], d[1])
                }
                None => domain,
            };
            (d, m.get("rects").ok_or_else(|| schema("missing \"rects\""))?)
        }
        _ => return Err(schema("omega must be an array or an object")),
    };
    if (dom.0 - domain.0).abs() > 1e-9 * domain.0 || (dom.1 - domain.1).abs() > 1e-9 * domain.1 {
        return Err(schema(format!("set domain {dom:?} does not match operators {domain:?}")));
    }
    let rects = rows(list, 4, "rects")?
        .into_iter()
        .map(|r| Rect::new(clip(r[0], domain.0), clip(r[1], domain.0), clip(r[2], domain.1), clip(r[3], domain.1)))
        .collect();
    RectSet::normalize(domain, rects).map_err(|e| schema(e.to_string()))
}

/// A geodesic as JSON. `domain` defaults to `default_domain` and `t` to the
/// full crossing for horizontal and vertical lines.
pub fn geodesic(text: &str, default_domain: (f64, f64)) -> Result<GeodesicSegment, CliError> {
    let mut v = json(text)?;
    let m = v.as_object_mut().ok_or_else(|| schema("geodesic must be an object"))?;
    let domain = match m.get("domain") {
        Some(d) => {
            let d = numbers(d, "domain")?;
            if d.len() != 2 {
                return Err(schema("domain needs two lengths"));
            }
            (d[0], d[1])
        }
        None => default_domain,
    };
    m.insert("domain".into(), serde_json::json!([domain.0, domain.1]));
    if !m.contains_key("t") {
        let t = match m.get("kind").and_then(Value::as_str) {
            Some("horizontal") => domain.0 - m.get("x0").and_then(Value::as_f64).unwrap_or(0.0),
            Some("vertical") => domain.1 - m.get("y0").and_then(Value::as_f64).unwrap_or(0.0),
            _ => return Err(schema("diagonal geodesics need \"t\"")),
        };
        m.insert("t".into(), serde_json::json!(t));
    }
    serde_json::from_value(v).map_err(|e| schema(format!("bad geodesic: {e}")))
}

/// Comma-separated positive reals.
pub fn real_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| schema(format!("bad number {s:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn lengths() {
        assert_eq!(length("pi").unwrap(), (PI, Some(Rational::ONE)));
        assert_eq!(length("2pi").unwrap().1, Some(Rational::from_int(2)));
        assert_eq!(length("3/2*pi").unwrap().1, Some(Rational::new(3, 2).unwrap()));
        assert_eq!(length("pi/4").unwrap().1, Some(Rational::new(1, 4).unwrap()));
        let (v, r) = length("0.5pi").unwrap();
        assert!(r.is_none() && (v - PI / 2.0).abs() < 1e-15);
        assert_eq!(length("2.5").unwrap(), (2.5, None));
        assert!(length("pie").is_err());
        assert!(length("x").is_err());
    }

    #[test]
    fn operators() {
        let op = operator("dirichlet:pi").unwrap();
        assert_eq!(op.kind, OperatorKind::DirichletInterval);
        assert_eq!(op.exact_eigenvalue(3), Some(Rational::from_int(9)));
        assert_eq!(operator("circle:2pi").unwrap().kind, OperatorKind::Circle);
        assert!(operator("robin:pi").is_err());
        assert!(operator("dirichlet").is_err());
        assert!(operator("dirichlet:-1").is_err());
    }

    #[test]
    fn sets() {
        let s = interval_set("[[0, 1.5707963267948966]]", PI).unwrap();
        assert_eq!(s.intervals(), &[(0.0, PI / 2.0)]);
        let s = interval_set(r#"{"domain": 2.0, "intervals": [[0.5, 1.0]]}"#, 2.0).unwrap();
        assert_eq!(s.measure(), 0.5);
        assert!(interval_set(r#"{"domain": 3.0, "intervals": []}"#, 2.0).is_err());
        let w = rect_set("[[0,1.5708,0,3.1416]]", (PI, PI)).unwrap();
        assert_eq!(w.rects()[0].y1, PI);
        let w = rect_set("[[0,1,0,1],[0.5,2,0.5,2]]", (PI, PI)).unwrap();
        assert!((w.measure() - 3.0).abs() < 1e-12);
        assert!(rect_set("[[0,1,0]]", (PI, PI)).is_err());
    }

    #[test]
    fn geodesics() {
        let g = geodesic(r#"{"kind":"horizontal","y":1.0}"#, (PI, 2.0)).unwrap();
        assert_eq!(g, GeodesicSegment::horizontal((PI, 2.0), 1.0));
        assert!(geodesic(r#"{"kind":"diagonal","slope":1.0}"#, (PI, PI)).is_err());
        let g = geodesic(r#"{"kind":"diagonal","slope":1.0,"t":2.0,"reflected":true}"#, (PI, PI)).unwrap();
        assert_eq!(g, GeodesicSegment::diagonal((PI, PI), 1.0, 0.0, 2.0, true));
    }
}
