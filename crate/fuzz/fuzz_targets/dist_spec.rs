#![no_main]

use libfuzzer_sys::fuzz_target;
use qclone_core::distspec::DistSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = DistSpec::parse(s) {
        if matches!(spec, DistSpec::Table(_)) {
            return;
        }
        let again = DistSpec::parse(&spec.to_string()).expect("printed spec re-parses");
        assert_eq!(again, spec);
        if let Ok(d) = spec.to_distribution() {
            let _ = d.moments();
        }
    }
});
