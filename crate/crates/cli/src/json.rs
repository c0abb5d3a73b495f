//! Stable JSON output: keys sorted, floats in 17-significant-digit
//! scientific notation so every `f64` survives a round trip.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

struct Scientific;

impl Formatter for Scientific {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes through `serde_json::Value`, whose object map is ordered by
/// key, then writes it with [`Scientific`] float formatting.
pub fn to_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let tree = serde_json::to_value(value)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Scientific);
    tree.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}
