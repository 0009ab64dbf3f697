//! The channel JSON schema, the preset spec grammar, and deterministic JSON
//! output.
//!
//! Channels travel as `{"dim": d, "kraus": [matrix, ...]}` where each matrix
//! is a list of rows and each entry is a `[re, im]` pair. On the command line
//! a channel is addressed either by a preset string — `identity`,
//! `depolarizing:0.9`, `dephasing:0.2`, `amp_damp:0.1` — or by the path of a
//! JSON file in the schema above.
//!
//! All JSON output goes through [`to_json_string`], which prints floats with
//! 17 significant digits in scientific notation and keeps struct key order,
//! so identical inputs produce byte-identical documents.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::linalg::{all_finite, c64, CMatrix};

/// Wire form of a channel: a list of Kraus matrices, each a list of rows of
/// `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub dim: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelJson {
    pub fn from_channel(channel: &Channel) -> Self {
        Self {
            dim: channel.dim(),
            kraus: channel.kraus().iter().map(matrix_to_rows).collect(),
        }
    }

    /// Validates shapes and finiteness, then runs the CPTP check in
    /// [`Channel::new`].
    pub fn into_channel(self) -> Result<Channel> {
        let mut kraus = Vec::with_capacity(self.kraus.len());
        for (k, rows) in self.kraus.iter().enumerate() {
            let m = rows_to_matrix(rows)
                .map_err(|e| Error::Parse(format!("Kraus operator {k}: {e}")))?;
            if !all_finite(&m) {
                return Err(Error::InvalidChannel(format!(
                    "Kraus operator {k} has non-finite entries"
                )));
            }
            kraus.push(m);
        }
        Channel::new(self.dim, kraus)
    }
}

/// Serializes a matrix as a list of rows of `[re, im]` pairs.
pub fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.rows()
        .into_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

/// Parses a list of rows of `[re, im]` pairs into a matrix; rows must be
/// nonempty and of equal length.
pub fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::Parse("matrix must be nonempty".into()));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse("matrix rows have unequal lengths".into()));
    }
    let entries = rows
        .iter()
        .flat_map(|r| r.iter().map(|&[re, im]| c64(re, im)))
        .collect();
    ndarray::Array2::from_shape_vec((rows.len(), ncols), entries)
        .map_err(|e| Error::Parse(format!("bad matrix shape: {e}")))
}

/// Resolves a channel spec string: one of the preset forms, otherwise the
/// path of a channel JSON file.
pub fn channel_from_spec(spec: &str) -> Result<Channel> {
    if let Some(channel) = parse_preset(spec)? {
        return Ok(channel);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::Parse(format!(
            "'{spec}' is neither a preset (identity, depolarizing:p, dephasing:p, amp_damp:p) \
             nor an existing file"
        )));
    }
    let text = std::fs::read_to_string(path)?;
    let parsed: ChannelJson = serde_json::from_str(&text)?;
    parsed.into_channel()
}

/// Parses the preset grammar `name` or `name:param`. Returns `Ok(None)` when
/// the string does not look like a preset at all (so a file fallback can
/// run), and an error when it names a preset with a malformed parameter.
fn parse_preset(spec: &str) -> Result<Option<Channel>> {
    if spec == "identity" {
        return Ok(Some(Channel::identity(2)));
    }
    let Some((name, param)) = spec.split_once(':') else {
        return Ok(None);
    };
    let build = match name {
        "depolarizing" => Channel::depolarizing as fn(f64) -> Result<Channel>,
        "dephasing" => Channel::dephasing,
        "amp_damp" => Channel::amplitude_damping,
        _ => return Ok(None),
    };
    let value: f64 = param.parse().map_err(|_| {
        Error::Parse(format!(
            "preset '{name}' has non-numeric parameter '{param}'"
        ))
    })?;
    build(value).map(Some)
}

struct SeventeenDigitFormatter;

impl serde_json::ser::Formatter for SeventeenDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        if value.is_finite() {
            // One mantissa digit before the point plus 16 after: 17
            // significant digits, enough to round-trip any f64.
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes to JSON with floats at 17 significant digits and struct key
/// order preserved; identical values give byte-identical strings.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigitFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}
