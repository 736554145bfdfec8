#![no_main]
use libfuzzer_sys::fuzz_target;

use hs_core::measure::json::MeasureSpec;

fuzz_target!(|data: &str| {
    let Ok(spec) = MeasureSpec::parse(data) else {
        return;
    };
    if let Ok(m) = spec.to_measure() {
        assert!(m.total_mass() >= 0.0);
        assert!(m.sup_atom() <= m.total_mass() + 1e-12 * m.total_mass().max(1.0));
    }
    if let Ok(nu) = spec.to_nu() {
        let back = MeasureSpec::from_nu(&nu).expect("valid nu converts back");
        back.to_nu().expect("round-tripped spec is valid");
    }
});
