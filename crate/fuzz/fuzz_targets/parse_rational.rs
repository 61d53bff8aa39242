#![no_main]

use libfuzzer_sys::fuzz_target;
use zetareg_core::exact::Rational;

// Both text forms: `p/q` and decimal literals.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(q) = text.parse::<Rational>() {
        assert_eq!(q.to_string().parse::<Rational>().as_ref(), Ok(&q));
    }
    if let Ok(q) = Rational::from_decimal_str(text) {
        let printed = q.to_terminating_decimal().expect("decimal literals terminate");
        assert_eq!(Rational::from_decimal_str(&printed).as_ref(), Ok(&q));
    }
});
