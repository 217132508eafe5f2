//! Re-derives the Schrödinger-type equation from the short-time kernel in
//! both expansion modes and prints where they disagree.
//!
//! ```bash
//! cargo run -p qlag --example derivation_audit
//! ```

use qlag::symbolic::{compare_modes, derive_pde, DerivationConfig, ExpansionMode, Sym};

fn main() {
    for mode in ExpansionMode::ALL {
        let pde = derive_pde(&DerivationConfig::new(mode)).expect("derivation succeeds");
        println!("[{mode}]");
        print!("{pde}");
        println!();
    }

    let report = compare_modes(&[]).unwrap();
    println!("literal reproduces the published form: {}", report.literal_matches_published);
    println!("exact reproduces Weyl quantization:    {}", report.exact_matches_quantization);
    for e in &report.entries {
        println!(
            "  {:<12} {:<14} literal {:>6}   exact {:>6}",
            e.term.label(),
            e.monomial.to_string(),
            e.paper_literal.to_string(),
            e.exact.to_string()
        );
    }
    for c in &report.claims {
        println!("  [{}] {} ({})", if c.holds { "ok" } else { "FAILS" }, c.claim, c.mode);
    }

    let quiet = compare_modes(&[Sym::B, Sym::D]).unwrap();
    println!("with b = d = 0: {} discrepancies", quiet.entries.len());
}
