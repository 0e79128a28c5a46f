#![no_main]

use libfuzzer_sys::fuzz_target;
use qclone_core::distspec::SweepSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(sweep) = SweepSpec::parse(s) {
        assert!(sweep.n >= 2 && sweep.start != sweep.stop);
        let again = SweepSpec::parse(&sweep.to_string()).expect("printed sweep re-parses");
        assert_eq!(again, sweep);
        if sweep.n <= 10_000 {
            assert_eq!(sweep.values().len(), sweep.n);
        }
    }
});
