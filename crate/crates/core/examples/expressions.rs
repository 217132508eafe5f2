//! Parsing and evaluating time-dependent coefficient expressions.
//!
//! ```bash
//! cargo run -p qlag --example expressions
//! ```

use qlag::parse_expr;

fn main() {
    for src in ["0.5", "1/(2*(1 + 0.1*t^2))", "-0.5*cos(2*t)", "exp(-t)*sin(3*t) + tanh(t)"] {
        let e = parse_expr(src).expect("valid expression");
        let samples: Vec<String> = [0.0, 0.5, 1.0]
            .iter()
            .map(|&t| format!("{:.6}", e.eval(t).unwrap()))
            .collect();
        println!("{src:<28} -> {e}");
        println!("{:<28}    t = 0, 0.5, 1: {}", "", samples.join(", "));
        // printing and re-parsing gives back the same tree
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    for bad in ["2*", "sin(t, 1)", "x + 1", "sqrt(t - 1)"] {
        match parse_expr(bad).and_then(|e| e.eval(0.0)) {
            Ok(v) => println!("{bad:<12} = {v}"),
            Err(err) => println!("{bad:<12} error: {err}"),
        }
    }
}
