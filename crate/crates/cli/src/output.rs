use clap::ValueEnum;
use serde::Serialize;

use tdeform_core::limits::{clt_csv, lln_csv, CltRow, ConvergenceRow};
use tdeform_core::rational::format_decimal;
use tdeform_core::{format_rational, Poly, Rational, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub enum Output {
    Series(TruncatedSeries),
    /// 1-based sequence such as cumulants or power sums.
    Vector(Vec<Rational>),
    Poly(Poly),
    Lln(Vec<ConvergenceRow>),
    Clt(Vec<CltRow>),
    /// Any other serializable result, already encoded.
    Json(String),
}

fn csv_rows<'a>(header: &str, rows: impl Iterator<Item = (usize, &'a Rational)>) -> String {
    let mut out = format!("{header},value,value_decimal\n");
    for (i, r) in rows {
        out.push_str(&format!(
            "{i},{},{}\n",
            format_rational(r),
            format_decimal(r)
        ));
    }
    out
}

impl Output {
    pub fn json(value: &impl Serialize) -> Self {
        Output::Json(serde_json::to_string(value).expect("results serialize"))
    }

    /// `None` when the format does not apply to this result.
    pub fn render(&self, format: Format) -> Option<String> {
        match format {
            Format::Json => {
                let text = match self {
                    Output::Series(s) => serde_json::to_string(s),
                    Output::Vector(v) => {
                        serde_json::to_string(&v.iter().map(format_rational).collect::<Vec<_>>())
                    }
                    Output::Poly(p) => serde_json::to_string(p),
                    Output::Lln(rows) => serde_json::to_string(rows),
                    Output::Clt(rows) => serde_json::to_string(rows),
                    Output::Json(v) => Ok(v.clone()),
                }
                .expect("results serialize");
                Some(format!("{text}\n"))
            }
            Format::Csv => match self {
                Output::Series(s) => Some(csv_rows("k", s.coeffs().iter().enumerate())),
                Output::Vector(v) => {
                    Some(csv_rows("n", v.iter().enumerate().map(|(i, r)| (i + 1, r))))
                }
                Output::Poly(p) => {
                    let d = p.degree();
                    Some(csv_rows(
                        "power",
                        p.coeffs().iter().enumerate().map(|(i, r)| (d - i, r)),
                    ))
                }
                Output::Lln(rows) => Some(lln_csv(rows)),
                Output::Clt(rows) => Some(clt_csv(rows)),
                Output::Json(_) => None,
            },
        }
    }
}
