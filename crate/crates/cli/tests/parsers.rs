//! The properties checked by the fuzz targets, run over the checked-in seeds
//! and over generated inputs.

use std::path::PathBuf;

use hs_cli::complex::{format_complex, parse_complex};
use hs_cli::job::JobSpec;
use hs_core::measure::json::MeasureSpec;
use hs_core::plog::GridSpec;
use num_complex::Complex64;
use proptest::prelude::*;

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds in {}", dir.display());
    files.iter().map(|p| std::fs::read_to_string(p).unwrap()).collect()
}

fn complex_round_trips(data: &str) {
    if let Ok(z) = parse_complex(data) {
        assert_eq!(parse_complex(&format_complex(z)), Ok(z));
    }
}

fn job_round_trips(data: &str) {
    if let Ok(job) = JobSpec::parse(data) {
        let text = serde_json::to_string(&job).unwrap();
        assert_eq!(JobSpec::parse(&text), Ok(job));
    }
}

fn grid_round_trips(data: &str) {
    if let Ok(grid) = data.parse::<GridSpec>() {
        assert_eq!(grid.to_string().parse::<GridSpec>().ok(), Some(grid));
    }
}

fn measure_round_trips(data: &str) {
    if let Ok(spec) = MeasureSpec::parse(data) {
        if let Ok(nu) = spec.to_nu() {
            MeasureSpec::from_nu(&nu).unwrap().to_nu().unwrap();
        }
    }
}

#[test]
fn seeds_parse_and_round_trip() {
    for s in seeds("complex_arg") {
        parse_complex(&s).unwrap();
        complex_round_trips(&s);
    }
    for s in seeds("job_spec") {
        JobSpec::parse(&s).unwrap();
        job_round_trips(&s);
    }
    for s in seeds("grid_spec") {
        s.parse::<GridSpec>().unwrap();
        grid_round_trips(&s);
    }
    for s in seeds("measure_spec") {
        MeasureSpec::parse(&s).unwrap().to_measure().unwrap();
        measure_round_trips(&s);
    }
}

proptest! {
    #[test]
    fn complex_from_parts(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let z = Complex64::new(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)), Ok(z));
    }

    #[test]
    fn complex_arbitrary_text(s in "[-+0-9.eEi ]{0,12}") {
        complex_round_trips(&s);
    }

    #[test]
    fn grid_arbitrary_text(s in "(xs|ys)=[-0-9.,e]{0,16}(;(xs|ys)=[-0-9.,e]{0,16})?") {
        grid_round_trips(&s);
    }

    #[test]
    fn job_with_numbers(p in proptest::collection::vec(-10f64..10.0, 0..4), tol in 1e-14f64..1e-2) {
        let text = serde_json::json!({
            "command": "hardy",
            "input": {"nu": {"atoms": [[-1, 0.5], [1, 0.5]]}},
            "parameters": {"p": p, "tol_abs": tol},
        })
        .to_string();
        job_round_trips(&text);
        prop_assert!(JobSpec::parse(&text).is_ok());
    }

    #[test]
    fn measure_arbitrary_atoms(atoms in proptest::collection::vec((-5f64..5.0, -0.5f64..1.5), 0..5)) {
        let atoms: Vec<[f64; 2]> = atoms.into_iter().map(|(x, w)| [x, w]).collect();
        measure_round_trips(&serde_json::json!({"atoms": atoms}).to_string());
    }
}
