//! Records and their text, JSON and CSV renderings.
//!
//! Floats are written with 17 significant digits so that parsing a printed
//! double gives back the same bits. Scaled values whose modulus leaves
//! `[1e-300, 1e300]` are written as `<mantissa>e<exponent>` with a decimal
//! exponent that may exceed the double range.

use std::fmt::Write as _;
use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

use cauchy_deriv::ScaledComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A double with 17 significant digits.
pub fn float(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    format!("{x:.16e}")
}

fn in_double_range(v: &ScaledComplex) -> bool {
    let l = v.log10_abs();
    (-300.0..=300.0).contains(&l)
}

/// Real and imaginary parts of a scaled value as strings.
pub fn scaled(v: &ScaledComplex) -> (String, String) {
    if v.is_zero() {
        return ("0".into(), "0".into());
    }
    if in_double_range(v) {
        let c = v.to_complex();
        return (float(c.re), float(c.im));
    }
    let (m, d) = v.to_decimal();
    let part = |x: f64| {
        if x == 0.0 {
            "0".to_string()
        } else {
            format!("{x:.16}e{d:+}")
        }
    };
    (part(m.re), part(m.im))
}

/// Result of `derive`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub function: String,
    pub n: u64,
    pub quantity: &'static str,
    pub value: String,
    pub value_im: String,
    pub kappa: f64,
    pub m_used: usize,
    pub radius: f64,
    pub strategy: &'static str,
    pub predicted_digit_loss: Option<f64>,
    pub digit_loss: f64,
    pub rel_error_estimate: Option<f64>,
    pub oracle_rel_error: Option<f64>,
    pub status: &'static str,
    pub warning: Option<String>,
}

/// Result of `radius`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusRecord {
    pub function: String,
    pub n: u64,
    pub radius: f64,
    pub strategy: &'static str,
    pub saddle_re: Option<f64>,
    pub saddle_im: Option<f64>,
    pub predicted_nodes: Option<u64>,
    pub predicted_digit_loss: Option<f64>,
    pub warning: Option<String>,
}

/// Result of `nodes`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodesRecord {
    pub regime: &'static str,
    pub eps: String,
    pub estimate: f64,
    pub sampling_floor: u64,
    pub recommendation: u64,
    pub note: &'static str,
}

/// Field names and printable values of a flat record.
pub trait Fields {
    fn fields(&self) -> Vec<(&'static str, String)>;
}

fn opt(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

impl Fields for OutputRecord {
    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("function", self.function.clone()),
            ("n", self.n.to_string()),
            ("quantity", self.quantity.to_string()),
            ("value", self.value.clone()),
            ("value_im", self.value_im.clone()),
            ("kappa", float(self.kappa)),
            ("m_used", self.m_used.to_string()),
            ("radius", float(self.radius)),
            ("strategy", self.strategy.to_string()),
            ("predicted_digit_loss", opt(self.predicted_digit_loss)),
            ("digit_loss", float(self.digit_loss)),
            ("rel_error_estimate", opt(self.rel_error_estimate)),
            ("oracle_rel_error", opt(self.oracle_rel_error)),
            ("status", self.status.to_string()),
            ("warning", self.warning.clone().unwrap_or_default()),
        ]
    }
}

impl Fields for RadiusRecord {
    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("function", self.function.clone()),
            ("n", self.n.to_string()),
            ("radius", float(self.radius)),
            ("strategy", self.strategy.to_string()),
            ("saddle_re", opt(self.saddle_re)),
            ("saddle_im", opt(self.saddle_im)),
            ("predicted_nodes", self.predicted_nodes.map(|v| v.to_string()).unwrap_or_default()),
            ("predicted_digit_loss", opt(self.predicted_digit_loss)),
            ("warning", self.warning.clone().unwrap_or_default()),
        ]
    }
}

impl Fields for NodesRecord {
    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("regime", self.regime.to_string()),
            ("eps", self.eps.clone()),
            ("estimate", float(self.estimate)),
            ("sampling_floor", self.sampling_floor.to_string()),
            ("recommendation", self.recommendation.to_string()),
            ("note", self.note.to_string()),
        ]
    }
}

/// Writes one record in the requested format.
pub fn write_record<R, W>(out: &mut W, record: &R, format: Format) -> anyhow::Result<()>
where
    R: Fields + Serialize,
    W: Write + ?Sized,
{
    match format {
        Format::Text => {
            let fields = record.fields();
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut s = String::new();
            for (k, v) in fields {
                if !v.is_empty() {
                    writeln!(s, "{k:<width$}  {v}")?;
                }
            }
            out.write_all(s.as_bytes())?;
        }
        Format::Json => {
            let mut value = serde_json::to_value(record)?;
            // Floats go out as 17-digit strings parsed back into JSON numbers.
            if let serde_json::Value::Object(map) = &mut value {
                for (_, v) in map.iter_mut() {
                    if let Some(x) = v.as_f64().filter(|_| v.is_f64()) {
                        *v = serde_json::from_str(&float(x)).unwrap_or(serde_json::Value::Null);
                    }
                }
            }
            serde_json::to_writer_pretty(&mut *out, &value)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let fields = record.fields();
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
            w.write_record(fields.iter().map(|(k, _)| *k))?;
            w.write_record(fields.iter().map(|(_, v)| v.as_str()))?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Writes a header and rows as CSV with LF line endings.
pub fn write_csv<W: Write + ?Sized>(out: &mut W, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}
