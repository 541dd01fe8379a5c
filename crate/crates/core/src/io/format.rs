//! CSV and JSON writers. Numbers are printed like C's `%.12e`; lines end in LF.

use crate::oam::{JointOamSpectrum, OamSpectrum};
use crate::pipeline::{LengthsReport, RowMetric, SweepTable};
use serde::Serialize;
use std::fmt::Write as _;
use std::io;

/// `x` as `d.dddddddddddde±XX`.
pub fn e12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub fn spectrum_csv(s: &OamSpectrum) -> String {
    let mut out = String::from("m,weight\n");
    for (m, w) in s.iter() {
        writeln!(out, "{m},{}", e12(w)).unwrap();
    }
    out
}

pub fn joint_csv(s: &JointOamSpectrum) -> String {
    let mut out = String::from("m1,m2,weight\n");
    for (m1, m2, w) in s.iter() {
        writeln!(out, "{m1},{m2},{}", e12(w)).unwrap();
    }
    out
}

/// Scalar metrics: `param,value,<metric>,converged`.
/// Full spectra, one line per mode: `param,value,m,weight,converged`.
pub fn sweep_csv(t: &SweepTable) -> String {
    let param = t.parameter.name();
    let mut out = match t.metric {
        crate::pipeline::SweepMetric::FullSpectrum => {
            "param,value,m,weight,converged\n".to_string()
        }
        m => format!("param,value,{},converged\n", m.name()),
    };
    for row in &t.rows {
        let v = e12(row.value);
        match &row.metric {
            Some(RowMetric::Scalar(x)) => {
                writeln!(out, "{param},{v},{},{}", e12(*x), row.converged).unwrap()
            }
            Some(RowMetric::Spectrum(s)) => {
                for (m, w) in s.iter() {
                    writeln!(out, "{param},{v},{m},{},{}", e12(w), row.converged).unwrap();
                }
            }
            None if t.metric == crate::pipeline::SweepMetric::FullSpectrum => {
                writeln!(out, "{param},{v},,nan,false").unwrap()
            }
            None => writeln!(out, "{param},{v},nan,false").unwrap(),
        }
    }
    out
}

/// `quantity,value_m` rows; regime flags follow as 0/1.
pub fn lengths_csv(r: &LengthsReport) -> String {
    let mut out = String::from("quantity,value_m\n");
    writeln!(out, "L,{}", e12(r.length_l)).unwrap();
    writeln!(out, "L_nc,{}", e12(r.l_nc.value())).unwrap();
    writeln!(out, "L_w,{}", e12(r.l_w.value())).unwrap();
    let flags = [
        (
            "short_against_noncollinear",
            r.regimes.short_against_noncollinear,
        ),
        ("beyond_noncollinear", r.regimes.beyond_noncollinear),
        ("beyond_walkoff", r.regimes.beyond_walkoff),
    ];
    for (name, on) in flags {
        writeln!(out, "{name},{}", on as u8).unwrap();
    }
    out
}

/// Pretty JSON whose floats use the same `%.12e` form as the CSV files.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, E12Formatter::default());
    value.serialize(&mut ser).expect("serializable");
    buf.push(b'\n');
    String::from_utf8(buf).expect("utf-8")
}

#[derive(Default)]
struct E12Formatter {
    pretty: serde_json::ser::PrettyFormatter<'static>,
}

impl serde_json::ser::Formatter for E12Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(e12(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}
