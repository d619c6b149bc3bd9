//! The whole identity registry must pass at its default parameters
//! (enumerative sweeps to n = 8, series order 12).

use gramcalc::identities::{registry_ids, verify_all, CheckParams};

#[test]
fn every_registered_identity_passes_at_default_params() {
    let params = CheckParams::default();
    let reports = verify_all(&params);
    assert_eq!(reports.len(), registry_ids().len());
    let mut failures = Vec::new();
    for r in &reports {
        println!(
            "{:<22} {}",
            r.id,
            if r.pass { "pass" } else { "FAIL" }
        );
        if !r.pass {
            failures.push(format!(
                "{}: {}",
                r.id,
                r.witness.clone().unwrap_or_default()
            ));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
