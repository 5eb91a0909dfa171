//! The motive document format: a flat key-value text file. Matrix entries
//! are quoted `"p/q"` strings so floating point can never sneak in.
//!
//! ```text
//! # a 1×1 example
//! name = example_r1d1_u2
//! r = 1
//! d = 1
//! u = ["2"]
//! primes = [2, 3, 5]        # optional window
//! denominator_bound = 6     # optional window
//! morphism.1.fx = [1]       # optional endomorphism blocks
//! morphism.1.ft = [1]
//! ```
//!
//! `u` is row-major with `d` rows of `r` entries; a `;` may be used in
//! place of `,` to mark row breaks, purely for readability.

use std::collections::BTreeMap;
use std::fmt;

use cartier::motive::{QStarMatrix, ToricOneMotive};
use cartier::ratmult::{factorize, parse_rational};
use cartier::{Int, IntMatrix};

/// Parse failure with its input line.
#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// An endomorphism candidate from the document, not yet validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismBlock {
    pub label: String,
    pub f_lattice: IntMatrix,
    pub f_torus: IntMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotiveDocument {
    pub name: String,
    pub lattice_rank: usize,
    pub torus_rank: usize,
    /// row-major, `d×r`, exact rational strings
    pub entries: Vec<String>,
    pub primes: Option<Vec<u64>>,
    pub denominator_bound: Option<u32>,
    pub morphisms: Vec<MorphismBlock>,
}

impl MotiveDocument {
    pub fn parse(text: &str) -> Result<MotiveDocument, ParseError> {
        let mut fields: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(
                    line_no,
                    format!("expected `key = value`, got `{line}`"),
                ));
            };
            let key = key.trim().to_string();
            if fields.contains_key(&key) {
                return Err(err(line_no, format!("duplicate key `{key}`")));
            }
            fields.insert(key, (line_no, value.trim().to_string()));
        }

        let take = |fields: &mut BTreeMap<String, (usize, String)>, key: &str| fields.remove(key);

        let (name_line, name) =
            take(&mut fields, "name").ok_or_else(|| err(1, "missing required key `name`"))?;
        if name.is_empty() {
            return Err(err(name_line, "empty name"));
        }
        let name = name.to_string();

        let parse_count =
            |entry: Option<(usize, String)>, key: &str| -> Result<usize, ParseError> {
                let (line, value) =
                    entry.ok_or_else(|| err(1, format!("missing required key `{key}`")))?;
                value
                    .parse::<usize>()
                    .map_err(|_| err(line, format!("`{key}` must be a nonnegative integer")))
            };
        let lattice_rank = parse_count(take(&mut fields, "r"), "r")?;
        let torus_rank = parse_count(take(&mut fields, "d"), "d")?;

        let entries = match take(&mut fields, "u") {
            Some((line, value)) => parse_quoted_list(&value, line)?,
            None if lattice_rank * torus_rank == 0 => Vec::new(),
            None => return Err(err(1, "missing required key `u`")),
        };
        if entries.len() != lattice_rank * torus_rank {
            return Err(err(
                1,
                format!(
                    "`u` must have d·r = {} entries, got {}",
                    lattice_rank * torus_rank,
                    entries.len()
                ),
            ));
        }

        let primes = match take(&mut fields, "primes") {
            Some((line, value)) => Some(
                parse_bare_list(&value, line)?
                    .iter()
                    .map(|s| {
                        s.parse::<u64>()
                            .map_err(|_| err(line, format!("`{s}` is not a prime number literal")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };

        let denominator_bound = match take(&mut fields, "denominator_bound") {
            Some((line, value)) => Some(
                value
                    .parse::<u32>()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| err(line, "`denominator_bound` must be a positive integer"))?,
            ),
            None => None,
        };

        // morphism.N.fx / morphism.N.ft pairs
        let mut morphism_parts: BTreeMap<
            String,
            (Option<(usize, String)>, Option<(usize, String)>),
        > = BTreeMap::new();
        let remaining: Vec<String> = fields.keys().cloned().collect();
        for key in remaining {
            if let Some(rest) = key.strip_prefix("morphism.") {
                let (line, value) = fields.remove(&key).expect("key listed from the map");
                let Some((label, part)) = rest.rsplit_once('.') else {
                    return Err(err(
                        line,
                        format!("expected `morphism.<label>.fx|ft`, got `{key}`"),
                    ));
                };
                let slot = morphism_parts.entry(label.to_string()).or_default();
                match part {
                    "fx" => slot.0 = Some((line, value)),
                    "ft" => slot.1 = Some((line, value)),
                    other => {
                        return Err(err(line, format!("unknown morphism part `{other}`")));
                    }
                }
            }
        }
        let mut morphisms = Vec::new();
        for (label, (fx, ft)) in morphism_parts {
            let (fx_line, fx_value) =
                fx.ok_or_else(|| err(1, format!("morphism `{label}` is missing fx")))?;
            let (ft_line, ft_value) =
                ft.ok_or_else(|| err(1, format!("morphism `{label}` is missing ft")))?;
            let f_lattice = parse_int_matrix(&fx_value, fx_line, lattice_rank, lattice_rank)?;
            let f_torus = parse_int_matrix(&ft_value, ft_line, torus_rank, torus_rank)?;
            morphisms.push(MorphismBlock {
                label,
                f_lattice,
                f_torus,
            });
        }

        if let Some((line, _)) = fields.values().next() {
            let key = fields.keys().next().expect("nonempty");
            return Err(err(*line, format!("unknown key `{key}`")));
        }

        let doc = MotiveDocument {
            name,
            lattice_rank,
            torus_rank,
            entries,
            primes,
            denominator_bound,
            morphisms,
        };
        // a document must denote a valid motive
        doc.to_motive().map_err(|e| err(1, e.to_string()))?;
        Ok(doc)
    }

    pub fn to_motive(&self) -> cartier::Result<ToricOneMotive> {
        let entries = self
            .entries
            .iter()
            .map(|s| factorize(&parse_rational(s)?))
            .collect::<cartier::Result<Vec<_>>>()?;
        ToricOneMotive::new(
            self.lattice_rank,
            self.torus_rank,
            QStarMatrix::new(self.torus_rank, self.lattice_rank, entries)?,
        )
    }

    /// Render back to document text; `parse` of the output reproduces the
    /// document exactly.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name = {}\n", self.name));
        out.push_str(&format!("r = {}\n", self.lattice_rank));
        out.push_str(&format!("d = {}\n", self.torus_rank));
        if !self.entries.is_empty() {
            let quoted: Vec<String> = self.entries.iter().map(|e| format!("\"{e}\"")).collect();
            out.push_str(&format!("u = [{}]\n", quoted.join(", ")));
        }
        if let Some(primes) = &self.primes {
            let rendered: Vec<String> = primes.iter().map(u64::to_string).collect();
            out.push_str(&format!("primes = [{}]\n", rendered.join(", ")));
        }
        if let Some(n) = self.denominator_bound {
            out.push_str(&format!("denominator_bound = {n}\n"));
        }
        for block in &self.morphisms {
            out.push_str(&format!(
                "morphism.{}.fx = [{}]\n",
                block.label,
                render_int_matrix(&block.f_lattice)
            ));
            out.push_str(&format!(
                "morphism.{}.ft = [{}]\n",
                block.label,
                render_int_matrix(&block.f_torus)
            ));
        }
        out
    }
}

fn render_int_matrix(m: &IntMatrix) -> String {
    let mut parts = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            parts.push(m[(r, c)].to_string());
        }
    }
    parts.join(", ")
}

fn strip_comment(line: &str) -> &str {
    // '#' inside quotes does not start a comment
    let mut in_quotes = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn split_list(value: &str, line: usize) -> Result<Vec<String>, ParseError> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| err(line, "expected a [...] list"))?;
    let items: Vec<String> = inner
        .split([',', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    Ok(items)
}

fn parse_quoted_list(value: &str, line: usize) -> Result<Vec<String>, ParseError> {
    split_list(value, line)?
        .into_iter()
        .map(|item| {
            let inner = item
                .strip_prefix('"')
                .and_then(|v| v.strip_suffix('"'))
                .ok_or_else(|| {
                    err(
                        line,
                        format!("entry {item} must be a quoted rational like \"3/5\""),
                    )
                })?;
            // reject floats and anything else early, with the line number
            parse_rational(inner).map_err(|e| err(line, e.to_string()))?;
            Ok(inner.to_string())
        })
        .collect()
}

fn parse_bare_list(value: &str, line: usize) -> Result<Vec<String>, ParseError> {
    split_list(value, line)
}

fn parse_int_matrix(
    value: &str,
    line: usize,
    rows: usize,
    cols: usize,
) -> Result<IntMatrix, ParseError> {
    let items = parse_bare_list(value, line)?;
    if items.len() != rows * cols {
        return Err(err(
            line,
            format!(
                "matrix needs {}×{} = {} entries, got {}",
                rows,
                cols,
                rows * cols,
                items.len()
            ),
        ));
    }
    let entries = items
        .iter()
        .map(|s| {
            s.parse::<i64>()
                .map(Int::from)
                .map_err(|_| err(line, format!("`{s}` is not an integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    IntMatrix::new(rows, cols, entries).map_err(|e| err(line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
# sample document
name = example_r2d1
r = 2
d = 1
u = ["2", "-3/5"]
primes = [2, 3, 5]
denominator_bound = 6
morphism.1.fx = [1, 0, 0, 1]
morphism.1.ft = [1]
"#;

    #[test]
    fn parse_and_render_round_trip() {
        let doc = MotiveDocument::parse(SAMPLE).unwrap();
        assert_eq!(doc.name, "example_r2d1");
        assert_eq!((doc.lattice_rank, doc.torus_rank), (2, 1));
        assert_eq!(doc.entries, vec!["2", "-3/5"]);
        assert_eq!(doc.primes, Some(vec![2, 3, 5]));
        assert_eq!(doc.denominator_bound, Some(6));
        assert_eq!(doc.morphisms.len(), 1);
        let again = MotiveDocument::parse(&doc.render()).unwrap();
        assert_eq!(doc, again);
    }

    #[test]
    fn motive_construction() {
        let doc = MotiveDocument::parse(SAMPLE).unwrap();
        let m = doc.to_motive().unwrap();
        assert_eq!(m.lattice_rank(), 2);
        assert_eq!(m.torus_rank(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "name = x\nr = 1\nd = 1\nu = [2]\n";
        let e = MotiveDocument::parse(bad).unwrap_err();
        assert_eq!(e.line, 4);

        let bad = "name = x\nr = one\nd = 1\nu = [\"2\"]\n";
        let e = MotiveDocument::parse(bad).unwrap_err();
        assert_eq!(e.line, 2);

        let bad = "name = x\nr = 1\nd = 1\nu = [\"2.5\"]\n";
        assert!(MotiveDocument::parse(bad).is_err());

        let bad = "name = x\nr = 1\nd = 1\nu = [\"2\"]\nmystery = 3\n";
        let e = MotiveDocument::parse(bad).unwrap_err();
        assert!(e.message.contains("mystery"));
    }

    #[test]
    fn zero_is_rejected_as_an_entry() {
        let bad = "name = x\nr = 1\nd = 1\nu = [\"0\"]\n";
        assert!(MotiveDocument::parse(bad).is_err());
    }

    #[test]
    fn empty_motive_needs_no_u() {
        let doc = MotiveDocument::parse("name = empty\nr = 0\nd = 0\n").unwrap();
        let m = doc.to_motive().unwrap();
        assert_eq!((m.lattice_rank(), m.torus_rank()), (0, 0));
    }

    #[test]
    fn semicolons_allowed_as_row_breaks() {
        let text = "name = x\nr = 2\nd = 2\nu = [\"2\", \"3\"; \"5\", \"7\"]\n";
        let doc = MotiveDocument::parse(text).unwrap();
        assert_eq!(doc.entries, vec!["2", "3", "5", "7"]);
    }
}
