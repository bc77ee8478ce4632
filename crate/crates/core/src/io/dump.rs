//! Sample dumps:
//!
//! ```text
//! GMSAMP1 <n> <dim> <seed> <burn_in> <thin> <init> <sampler id>
//! 0110...
//! ```
//!
//! `<init>` is `random` or `given:<bits>`. The sampler id runs to the end of
//! the header line. Each following line is one sample.

use std::path::Path;

use crate::bits::{BitMatrix, BitRow};
use crate::error::{Error, Result};
use crate::rbm::{ChainInit, ChainSettings, SampleBatch};

pub const DUMP_MAGIC: &str = "GMSAMP1";

pub fn batch_to_string(batch: &SampleBatch) -> String {
    let init = match &batch.settings.init {
        ChainInit::RandomUniform => "random".to_string(),
        ChainInit::GivenVector(bits) => format!("given:{bits}"),
    };
    let mut s = format!(
        "{DUMP_MAGIC} {} {} {} {} {} {init} {}\n",
        batch.len(),
        batch.dim(),
        batch.seed,
        batch.settings.burn_in,
        batch.settings.thin,
        batch.sampler_id
    );
    s.reserve(batch.len() * (batch.dim() + 1));
    for row in batch.samples.iter_rows() {
        s.push_str(&row.to_string());
        s.push('\n');
    }
    s
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

pub fn batch_from_str(text: &str) -> Result<SampleBatch> {
    let header_end = text
        .find('\n')
        .ok_or_else(|| parse_err(text.len(), "missing header line"))?;
    let mut fields = text[..header_end].splitn(8, ' ');
    match fields.next() {
        Some(DUMP_MAGIC) => {}
        Some(m) if m.starts_with("GMSAMP") => return Err(Error::UnsupportedVersion(m.to_string())),
        _ => return Err(parse_err(0, format!("missing {DUMP_MAGIC} header"))),
    }
    let mut num = |what: &str| -> Result<u64> {
        fields
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(0, format!("header: bad {what}")))
    };
    let n = num("sample count")? as usize;
    let dim = num("dimension")? as usize;
    let seed = num("seed")?;
    let burn_in = num("burn-in")? as usize;
    let thin = num("thin")? as usize;
    let init = match fields.next() {
        Some("random") => ChainInit::RandomUniform,
        Some(t) if t.starts_with("given:") => ChainInit::GivenVector(t["given:".len()..].to_string()),
        _ => return Err(parse_err(0, "header: bad init")),
    };
    let sampler_id = fields.next().unwrap_or("").to_string();

    let mut samples = BitMatrix::with_cols(dim);
    let mut pos = header_end + 1;
    for k in 0..n {
        let rest = &text[pos.min(text.len())..];
        let end = rest
            .find('\n')
            .ok_or_else(|| parse_err(text.len(), format!("missing sample {k}")))?;
        let line = &rest[..end];
        if line.len() != dim {
            return Err(parse_err(
                pos,
                format!("sample {k} has {} bits, expected {dim}", line.len()),
            ));
        }
        let row = BitRow::parse(line).ok_or_else(|| parse_err(pos, format!("sample {k} is not a 0/1 string")))?;
        samples.push_row(&row)?;
        pos += end + 1;
    }
    if pos < text.len() {
        return Err(parse_err(pos, "trailing data after samples"));
    }
    Ok(SampleBatch {
        samples,
        sampler_id,
        seed,
        settings: ChainSettings {
            burn_in,
            thin,
            n_samples: n,
            init,
        },
    })
}

pub fn save_batch(batch: &SampleBatch, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, batch_to_string(batch))?;
    Ok(())
}

pub fn load_batch(path: impl AsRef<Path>) -> Result<SampleBatch> {
    batch_from_str(&std::fs::read_to_string(path)?)
}
