//! Text model format:
//!
//! ```text
//! GMRBM1 <visible> <hidden>
//! <W row 0: hidden values>
//! ...
//! <W row visible-1>
//! <visible bias>
//! <hidden bias>
//! ```
//!
//! Values use Rust's shortest round-trip float formatting, so a saved model
//! loads back bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rbm::RbmModel;

pub const MODEL_MAGIC: &str = "GMRBM1";

pub fn model_to_string(model: &RbmModel) -> String {
    let mut s = format!("{MODEL_MAGIC} {} {}\n", model.visible(), model.hidden());
    let mut line = |values: &[f64]| {
        let mut first = true;
        for v in values {
            if !first {
                s.push(' ');
            }
            first = false;
            let _ = write!(s, "{v:?}");
        }
        s.push('\n');
    };
    let h = model.hidden();
    for i in 0..model.visible() {
        line(&model.weights()[i * h..(i + 1) * h]);
    }
    line(model.visible_bias());
    line(model.hidden_bias());
    s
}

/// Line cursor that remembers byte offsets for error messages.
struct Lines<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        // Every record ends in a newline; a missing one means the file was cut short.
        let start = self.pos.min(self.text.len());
        let rest = &self.text[start..];
        let end = rest.find('\n').ok_or_else(|| Error::Parse {
            offset: self.text.len(),
            message: format!("unexpected end of file, expected {what}"),
        })?;
        self.pos = start + end + 1;
        Ok((start, rest[..end].trim_end_matches('\r')))
    }
}

fn parse_values(start: usize, line: &str, expected: usize, what: &str) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(expected);
    for (k, tok) in line.split(' ').filter(|t| !t.is_empty()).enumerate() {
        let offset = start + (tok.as_ptr() as usize - line.as_ptr() as usize);
        if k >= expected {
            return Err(Error::Parse {
                offset,
                message: format!("{what}: more than {expected} values"),
            });
        }
        let v: f64 = tok.parse().map_err(|_| Error::Parse {
            offset,
            message: format!("{what}: '{tok}' is not a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::NonFinite("model file"));
        }
        out.push(v);
    }
    if out.len() != expected {
        return Err(Error::Parse {
            offset: start + line.len(),
            message: format!("{what}: expected {expected} values, found {}", out.len()),
        });
    }
    Ok(out)
}

pub fn model_from_str(text: &str) -> Result<RbmModel> {
    let mut lines = Lines { text, pos: 0 };
    let (_, header) = lines.next("header")?;
    let mut fields = header.split_whitespace();
    match fields.next() {
        Some(MODEL_MAGIC) => {}
        Some(m) if m.starts_with("GMRBM") => return Err(Error::UnsupportedVersion(m.to_string())),
        _ => {
            return Err(Error::Parse {
                offset: 0,
                message: format!("missing {MODEL_MAGIC} header"),
            })
        }
    }
    let mut dim = |what: &str| -> Result<usize> {
        fields.next().and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse {
            offset: 0,
            message: format!("header: bad {what} count"),
        })
    };
    let visible = dim("visible")?;
    let hidden = dim("hidden")?;

    let mut weights = Vec::with_capacity(visible * hidden);
    for i in 0..visible {
        let (start, line) = lines.next(&format!("weight row {i}"))?;
        weights.extend(parse_values(start, line, hidden, "weight row")?);
    }
    let (start, line) = lines.next("visible bias")?;
    let visible_bias = parse_values(start, line, visible, "visible bias")?;
    let (start, line) = lines.next("hidden bias")?;
    let hidden_bias = parse_values(start, line, hidden, "hidden bias")?;
    if !text[lines.pos.min(text.len())..].trim().is_empty() {
        return Err(Error::Parse {
            offset: lines.pos,
            message: "trailing data after hidden bias".into(),
        });
    }
    RbmModel::new(visible, hidden, weights, visible_bias, hidden_bias)
}

pub fn save_model(model: &RbmModel, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, model_to_string(model))?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<RbmModel> {
    model_from_str(&std::fs::read_to_string(path)?)
}
