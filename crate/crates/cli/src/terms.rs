//! The term table: one row per `j` with the matching factor `A`, the
//! rooted-forest factor `B`, the sign, `|term|` and the running sum.

use std::io::Write;

use serde::Serialize;

use forestcount::exactmath::{matching_selection_count, rooted_forest_count_specified_roots};
use forestcount::{Natural, SignedCount};

use crate::{json_line, unsupported, Format, Outcome};

#[derive(Debug, Serialize)]
pub struct TermRow {
    pub j: u32,
    #[serde(rename = "A")]
    pub a: Natural,
    #[serde(rename = "B")]
    pub b: Natural,
    pub sign: char,
    pub term: Natural,
    pub partial_sum: SignedCount,
}

pub fn rows(n: u32) -> forestcount::Result<Vec<TermRow>> {
    let mut running = SignedCount::zero();
    (0..=n / 2)
        .map(|j| {
            let a = matching_selection_count(n, j)?;
            let b = rooted_forest_count_specified_roots(n + 1, 2 * j + 1)?;
            let term = a.clone() * &b;
            let signed = SignedCount::new(j % 2 == 1, term.clone());
            running = running.clone() + signed.clone();
            Ok(TermRow {
                j,
                a,
                b,
                sign: signed.sign_char(),
                term,
                partial_sum: running.clone(),
            })
        })
        .collect()
}

pub fn write(n: u32, format: Format, out: &mut impl Write) -> Outcome {
    let rows = rows(n)?;
    match format {
        Format::Csv => {
            writeln!(out, "j,A,B,sign,term,partial_sum")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.j, r.a, r.b, r.sign, r.term, r.partial_sum
                )?;
            }
        }
        Format::Json => {
            for r in &rows {
                json_line(out, r)?;
            }
        }
        Format::Plain => {
            let cells: Vec<[String; 6]> = rows
                .iter()
                .map(|r| {
                    [
                        r.j.to_string(),
                        r.a.to_string(),
                        r.b.to_string(),
                        r.sign.to_string(),
                        r.term.to_string(),
                        r.partial_sum.to_string(),
                    ]
                })
                .collect();
            let header = ["j", "A", "B", "sign", "term", "partial_sum"].map(String::from);
            let mut widths = header.clone().map(|h| h.len());
            for row in &cells {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.len());
                }
            }
            for row in std::iter::once(&header).chain(&cells) {
                let padded: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                writeln!(out, "{}", padded.join("  "))?;
            }
        }
        Format::Dot => return Err(unsupported(format, "terms")),
    }
    Ok(())
}
