//! JSON output with every float written to 17 significant digits.
//!
//! 17 significant digits identify any binary64 value uniquely, and
//! `serde_json`'s `float_roundtrip` parser reads them back exactly, so a
//! written file reproduces the in-memory values bit for bit.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// `x` with 17 significant digits, positional when the exponent is modest.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        // not representable in JSON; callers never emit these
        return "null".to_owned();
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0.0000000000000000".to_owned()
        } else {
            "0.0000000000000000".to_owned()
        };
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..=16).contains(&exp) {
        let decimals = (16 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, Digits17(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("serializing plain data to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(std::f64::consts::PI), "3.1415926535897931");
        assert_eq!(format_f64(0.5), "0.50000000000000000");
        assert_eq!(format_f64(-0.0), "-0.0000000000000000");
        assert_eq!(format_f64(2f64.powi(-70)), "8.4703294725430034e-22");
        assert_eq!(format_f64(6.02e23), "6.0200000000000000e23");
    }

    #[test]
    fn round_trips_exactly() {
        let values = [
            std::f64::consts::PI,
            0.1,
            1.0 / 3.0,
            -2.5e-17,
            f64::MIN_POSITIVE,
            f64::MAX,
            0.9776087734 + f64::EPSILON,
            123456.789e-3,
        ];
        for v in values {
            let back: f64 = serde_json::from_str(&format_f64(v)).unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v}");
        }
    }

    #[test]
    fn nested_output_parses() {
        let text = to_string(&serde_json::json!({"a": [[0.1, 0.2]], "b": 3}));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["a"][0][1].as_f64(), Some(0.2));
        assert!(text.contains("0.20000000000000001"));
    }
}
