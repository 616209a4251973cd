//! Browser bindings: paste a problem, get its bounds, or check a code.
//! Each export returns a JSON string; failures come back as `{"error": ...}`.

use netcap::code::{verify, Code};
use netcap::rational::format_rational;
use netcap::routing::{routing_capacity, RoutingMode};
use netcap::shannon::{outer_bound, BoundMode, BoundQuery};
use netcap::{Problem, Result};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// The butterfly network and its XOR code, as starting input.
#[wasm_bindgen]
pub fn example_problem() -> String {
    netcap::examples::butterfly_spec().to_json()
}

#[wasm_bindgen]
pub fn example_code() -> String {
    let p = Problem::from_spec(&netcap::examples::butterfly_spec()).expect("example is valid");
    Code::Linear(netcap::code::butterfly_xor_code()).to_json(&p)
}

/// Throughput along the problem's rates under the polymatroid bound and
/// both routing bounds.
#[wasm_bindgen]
pub fn bounds(problem_json: &str) -> String {
    respond((|| {
        let p = Problem::from_json(problem_json)?;
        let caps = p.capacities_or_unit();
        let direction = BoundMode::Throughput { direction: p.rates_or_unit() };
        let shannon = outer_bound(&BoundQuery::new(p.clone(), None, direction.clone(), false)?)?;
        let strict = routing_capacity(&p, RoutingMode::Strict, &caps, &direction, true)?;
        let general = routing_capacity(&p, RoutingMode::Generalised, &caps, &direction, true)?;
        let fmt = |v: &Option<netcap::Rational>| v.as_ref().map(format_rational);
        Ok(json!({
            "shannon": fmt(&shannon.value),
            "routing_strict": fmt(&strict.value),
            "routing_generalised": fmt(&general.value),
            "packing": serde_json::to_value(strict.packing.to_export(&p)).expect("serializable"),
        }))
    })())
}

/// Verification report of a code for a problem.
#[wasm_bindgen]
pub fn check_code(problem_json: &str, code_json: &str) -> String {
    respond((|| {
        let p = Problem::from_json(problem_json)?;
        let c = Code::from_json(code_json, &p)?;
        let report = verify(&c, &p, p.is_secure())?;
        Ok(json!({
            "zero_error": report.zero_error(),
            "strongly_secure": report.strongly_secure(),
            "report": serde_json::to_value(&report).expect("serializable"),
        }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn butterfly_bounds() {
        let v: Value = serde_json::from_str(&bounds(&example_problem())).unwrap();
        assert_eq!(v["shannon"], json!("2"));
        assert_eq!(v["routing_strict"], json!("3/2"));
    }

    #[test]
    fn example_code_checks_out() {
        let v: Value = serde_json::from_str(&check_code(&example_problem(), &example_code())).unwrap();
        assert_eq!(v["zero_error"], json!(true));
    }

    #[test]
    fn errors_are_reported_as_json() {
        let v: Value = serde_json::from_str(&bounds("{")).unwrap();
        assert!(v["error"].is_string());
    }
}
