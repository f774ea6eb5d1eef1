//! Output formatting: torus elements and count tables as canonical text,
//! JSON, or LaTeX, including exact specialization of the quantum
//! parameter at an integer.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use qcc::torus::TorusElement;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

pub fn render_element(x: &TorusElement, format: Format) -> String {
    match format {
        Format::Text => x.to_string(),
        Format::Json => pretty(&x.to_json()),
        Format::Latex => x.to_latex(),
    }
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON serialization cannot fail")
}

/// Exact value of every coefficient at q = q0: each term becomes
/// a + b*sqrt(q0) with rational a, b.
pub fn render_specialized(
    x: &TorusElement,
    q0: i64,
    format: Format,
) -> Result<String, CliError> {
    let mut rows: Vec<(Vec<i64>, BigRational, BigRational)> = Vec::new();
    for (e, c) in x.iter() {
        let (a, b) = c.specialize_sqrt(q0)?;
        rows.push((e.to_vec(), a, b));
    }
    Ok(match format {
        Format::Json => pretty(&json!({
            "q0": q0,
            "terms": rows
                .iter()
                .map(|(e, a, b)| {
                    json!({
                        "exp": e,
                        "rational": a.to_string(),
                        "sqrt": b.to_string(),
                    })
                })
                .collect::<Vec<_>>(),
        })),
        Format::Text | Format::Latex => {
            let latex = format == Format::Latex;
            let mut parts = Vec::new();
            for (e, a, b) in &rows {
                let coeff = specialized_coeff(a, b, q0, latex);
                let body = e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
                let mono = if e.iter().all(|&v| v == 0) {
                    String::new()
                } else if latex {
                    format!("X^{{({body})}}")
                } else {
                    format!("X^({body})")
                };
                parts.push(match (coeff.as_str(), mono.is_empty()) {
                    (_, true) => coeff,
                    ("1", false) => mono,
                    (_, false) => format!("{coeff} {mono}"),
                });
            }
            parts.join(" + ")
        }
    })
}

fn specialized_coeff(a: &BigRational, b: &BigRational, q0: i64, latex: bool) -> String {
    let rat = |r: &BigRational| -> String {
        if r.is_integer() {
            r.to_integer().to_string()
        } else if latex {
            format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
        } else {
            r.to_string()
        }
    };
    let root = if latex {
        format!("\\sqrt{{{q0}}}")
    } else {
        format!("sqrt({q0})")
    };
    if b.is_zero() {
        return rat(a);
    }
    let b_part = if *b == BigRational::from_integer(1.into()) {
        root
    } else if *b == BigRational::from_integer((-1).into()) {
        format!("-{root}")
    } else if b.is_integer() || latex {
        format!("{}{root}", rat(b))
    } else {
        format!("({}){root}", rat(b))
    };
    if a.is_zero() {
        b_part
    } else if b.is_negative() {
        format!("({} {})", rat(a), b_part.replacen('-', "- ", 1))
    } else {
        format!("({} + {})", rat(a), b_part)
    }
}
