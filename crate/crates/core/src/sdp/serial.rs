//! Decimal-string serde for `BigFloat` values and matrices.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg::Mat;
use crate::exactfield::{BigFloat, Precision};

fn digits(prec: u32) -> usize {
    Precision::new(prec.max(Precision::MIN_BITS))
        .map(Precision::decimal_digits)
        .unwrap_or(20)
        + 2
}

pub fn float_to_string(x: &BigFloat) -> String {
    format!("{:.1$e}", x, digits(x.prec()))
}

pub fn float_from_str(s: &str, prec: u32) -> Result<BigFloat, String> {
    BigFloat::parse(s)
        .map(|v| BigFloat::with_val(prec, v))
        .map_err(|e| format!("bad decimal {s:?}: {e}"))
}

#[derive(Serialize, Deserialize)]
struct FloatRepr {
    precision: u32,
    value: String,
}

pub mod float {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigFloat, s: S) -> Result<S::Ok, S::Error> {
        FloatRepr {
            precision: x.prec(),
            value: float_to_string(x),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigFloat, D::Error> {
        let r = FloatRepr::deserialize(d)?;
        float_from_str(&r.value, r.precision).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct VecRepr {
    precision: u32,
    values: Vec<String>,
}

pub mod float_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigFloat], s: S) -> Result<S::Ok, S::Error> {
        VecRepr {
            precision: v.iter().map(BigFloat::prec).max().unwrap_or(Precision::MIN_BITS),
            values: v.iter().map(float_to_string).collect(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigFloat>, D::Error> {
        let r = VecRepr::deserialize(d)?;
        r.values
            .iter()
            .map(|s| float_from_str(s, r.precision))
            .collect::<Result<_, _>>()
            .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct MatRepr {
    precision: u32,
    rows: usize,
    cols: usize,
    /// Row-major.
    data: Vec<String>,
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatRepr {
            precision: self.prec(),
            rows: self.rows(),
            cols: self.cols(),
            data: self.row_major().iter().map(float_to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Mat, D::Error> {
        let r = MatRepr::deserialize(d)?;
        if r.data.len() != r.rows * r.cols {
            return Err(D::Error::custom("matrix data length does not match shape"));
        }
        let vals = r
            .data
            .iter()
            .map(|s| float_from_str(s, r.precision))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let rows = vals.chunks(r.cols.max(1)).map(<[BigFloat]>::to_vec).collect();
        Ok(Mat::from_rows(rows, r.precision))
    }
}
