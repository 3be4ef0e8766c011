use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// Rounds to nine significant digits, ties to even, and folds -0 into 0.
pub fn round9(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    let r: f64 = format!("{v:.8e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Text form shared by every CSV cell; infinities read `inf` and `-inf`.
pub fn cell(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        round9(v).to_string()
    }
}

/// A report number. Serializes rounded; infinities become strings, NaN null.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_nan() {
            s.serialize_none()
        } else if v.is_infinite() {
            s.serialize_str(if v > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(round9(v))
        }
    }
}

/// Label-keyed numbers that keep their declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Labelled(pub Vec<(String, Num)>);

impl Labelled {
    pub fn new<'a>(labels: impl IntoIterator<Item = String>, values: impl IntoIterator<Item = &'a f64>) -> Self {
        Labelled(labels.into_iter().zip(values.into_iter().map(|&v| Num(v))).collect())
    }
}

impl Serialize for Labelled {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}
