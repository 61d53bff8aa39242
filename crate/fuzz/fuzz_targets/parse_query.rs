#![no_main]

use libfuzzer_sys::fuzz_target;
use zetareg_core::query::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    match parse(text) {
        Ok(ast) => {
            let printed = ast.to_string();
            assert_eq!(parse(&printed).as_ref(), Ok(&ast), "{printed}");
        }
        Err(e) => {
            assert!(e.offset <= text.len());
            let _ = e.render(text);
        }
    }
});
