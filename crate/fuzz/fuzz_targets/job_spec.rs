#![no_main]
use libfuzzer_sys::fuzz_target;

use hs_cli::job::JobSpec;

fuzz_target!(|data: &str| {
    if let Ok(job) = JobSpec::parse(data) {
        let text = serde_json::to_string(&job).expect("job serializes");
        assert_eq!(JobSpec::parse(&text), Ok(job));
    }
});
