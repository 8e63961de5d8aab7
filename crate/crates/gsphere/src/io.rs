//! Reading and writing complexes.
//!
//! Two formats, both canonical and bit-exact on output (labels sorted,
//! facets sorted lexicographically):
//!
//! - JSON: `{"vertices": ["a", ...], "facets": [["a", "b"], ...]}`
//! - plain text: one facet per line, labels separated by whitespace, `#`
//!   starts a comment. Vertices are the union of the facet labels.

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    vertices: Vec<String>,
    facets: Vec<Vec<String>>,
}

fn canonical_facets(cx: &Complex) -> Vec<Vec<String>> {
    let mut facets: Vec<Vec<String>> = cx
        .facets()
        .iter()
        .map(|f| cx.set_labels(f))
        .collect();
    facets.sort();
    facets
}

pub fn to_json(cx: &Complex) -> String {
    let file = ComplexFile {
        vertices: cx.labels().to_vec(),
        facets: canonical_facets(cx),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("serialization cannot fail");
    out.push('\n');
    out
}

pub fn from_json(source: &str) -> Result<Complex> {
    let file: ComplexFile = serde_json::from_str(source)?;
    Complex::from_facets(file.vertices, file.facets)
}

pub fn to_text(cx: &Complex) -> String {
    let mut out = String::new();
    for facet in canonical_facets(cx) {
        out.push_str(&facet.join(" "));
        out.push('\n');
    }
    out
}

pub fn from_text(source: &str) -> Result<Complex> {
    let mut facets: Vec<Vec<String>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for (line_idx, raw_line) in source.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let mut facet: Vec<String> = Vec::new();
        let mut col = 0usize;
        for token in line.split_whitespace() {
            col = line[col..]
                .find(token)
                .map(|offset| col + offset)
                .unwrap_or(col);
            if facet.iter().any(|t| t == token) {
                return Err(Error::ParseError {
                    line: line_idx + 1,
                    col: col + 1,
                    msg: format!("label `{token}` repeated within one facet"),
                });
            }
            facet.push(token.to_string());
            col += token.len();
        }
        if facet.is_empty() {
            continue;
        }
        for l in &facet {
            if !labels.contains(l) {
                labels.push(l.clone());
            }
        }
        facets.push(facet);
    }
    Complex::from_facets(labels, facets)
}

/// Parse either format, deciding by the first non-whitespace byte.
pub fn parse(source: &str) -> Result<Complex> {
    if source.trim_start().starts_with('{') {
        from_json(source)
    } else {
        from_text(source)
    }
}
