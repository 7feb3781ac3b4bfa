//! Lossless coding of SW graphs and the `SWG1` container.
//!
//! Labelled mode walks the pairs `(u, v)`, `u < v`, in lexicographic order,
//! skips the cycle edges and codes each remaining pair as Bernoulli(`q(k)`)
//! where `q(k) = round(p(k)·2³²)` clamped to `[1, 2³² − 1]`.
//!
//! Structural mode replaces the graph by its canonical representative and
//! codes every pair with one uniform edge probability equal to the expected
//! edge density. Canonical labels carry no circle distances, so the
//! per-distance model does not apply there.
//!
//! Container layout: the magic `SWG1`, a little-endian `u32` header length,
//! the UTF-8 header of `key=value` lines, then the payload bytes. `a` and `b`
//! travel as shortest round-trip decimal strings so both sides derive
//! identical `q(k)` tables.

mod range;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use range::{RangeDecoder, RangeEncoder};

use crate::entropy::sw_expected_edges;
use crate::error::{Error, Result};
use crate::graph::LabelledGraph;
use crate::model::{ring_distance, ModelParams};
use crate::symmetry::{canonical_form, is_admissible};

pub const MAGIC: &[u8; 4] = b"SWG1";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Labelled,
    Structural,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Labelled => "labelled",
            Mode::Structural => "structural",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "labelled" => Ok(Mode::Labelled),
            "structural" => Ok(Mode::Structural),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// Byte-padded coder output with its exact bit length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitStream {
    bytes: Vec<u8>,
    length_bits: u64,
}

impl BitStream {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        let length_bits = 8 * bytes.len() as u64;
        Self { bytes, length_bits }
    }

    pub fn with_length(bytes: Vec<u8>, length_bits: u64) -> Result<Self> {
        let cap = 8 * bytes.len() as u64;
        if length_bits > cap || length_bits + 8 <= cap {
            return Err(Error::CorruptPayload(format!(
                "{length_bits} bits do not fit {} bytes",
                bytes.len()
            )));
        }
        Ok(Self { bytes, length_bits })
    }

    pub fn length_bits(&self) -> u64 {
        self.length_bits
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Header {
    pub version: u32,
    pub mode: Mode,
    pub n: usize,
    pub a: String,
    pub b: String,
    /// Edge count of the coded graph.
    pub edges: usize,
    /// FNV-1a digest of the coded graph's edge list.
    pub digest: u64,
    pub payload_bits: u64,
}

impl Header {
    pub fn params(&self) -> Result<ModelParams> {
        let parse = |key: &str, s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("header {key}={s:?} is not a number")))
        };
        ModelParams::new(self.n, parse("a", &self.a)?, parse("b", &self.b)?)
    }

    fn render(&self) -> String {
        format!(
            "version={}\nmode={}\nn={}\na={}\nb={}\nedges={}\ndigest={:016x}\npayload_bits={}\n",
            self.version,
            self.mode,
            self.n,
            self.a,
            self.b,
            self.edges,
            self.digest,
            self.payload_bits
        )
    }

    fn parse(text: &str) -> Result<Self> {
        let mut fields: [Option<&str>; 8] = [None; 8];
        const KEYS: [&str; 8] = [
            "version",
            "mode",
            "n",
            "a",
            "b",
            "edges",
            "digest",
            "payload_bits",
        ];
        for line in text.lines().filter(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("header line {line:?} lacks '='")))?;
            let slot = KEYS
                .iter()
                .position(|&k| k == key)
                .ok_or_else(|| Error::Parse(format!("unknown header key {key:?}")))?;
            if fields[slot].replace(value).is_some() {
                return Err(Error::Parse(format!("duplicate header key {key:?}")));
            }
        }
        let get = |i: usize| {
            fields[i].ok_or_else(|| Error::Parse(format!("missing header key {:?}", KEYS[i])))
        };
        let int = |i: usize| {
            get(i)?
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("header {} is not an integer", KEYS[i])))
        };
        let version = int(0)? as u32;
        if version != FORMAT_VERSION {
            return Err(Error::HeaderMismatch(format!(
                "unsupported format version {version}"
            )));
        }
        Ok(Self {
            version,
            mode: get(1)?.parse()?,
            n: int(2)? as usize,
            a: get(3)?.to_string(),
            b: get(4)?.to_string(),
            edges: int(5)? as usize,
            digest: u64::from_str_radix(get(6)?, 16)
                .map_err(|_| Error::Parse("header digest is not hexadecimal".into()))?,
            payload_bits: int(7)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedGraph {
    pub header: Header,
    pub payload: BitStream,
}

impl CompressedGraph {
    pub fn to_bytes(&self) -> Vec<u8> {
        let header = self.header.render();
        let mut out = Vec::with_capacity(8 + header.len() + self.payload.bytes.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(header.len() as u32).to_le_bytes());
        out.extend_from_slice(header.as_bytes());
        out.extend_from_slice(&self.payload.bytes);
        out
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        if data.len() < 8 || &data[..4] != MAGIC {
            return Err(Error::CorruptPayload("missing SWG1 magic".into()));
        }
        let len = u32::from_le_bytes(data[4..8].try_into().expect("4 bytes")) as usize;
        let body = &data[8..];
        if body.len() < len {
            return Err(Error::CorruptPayload("header truncated".into()));
        }
        let text = std::str::from_utf8(&body[..len])
            .map_err(|_| Error::Parse("header is not UTF-8".into()))?;
        let header = Header::parse(text)?;
        let payload = BitStream::with_length(body[len..].to_vec(), header.payload_bits)?;
        Ok(Self { header, payload })
    }

    pub fn payload_bits(&self) -> u64 {
        self.payload.length_bits()
    }
}

/// `round(p·2³²)` clamped to `[1, 2³² − 1]`.
pub fn quantize(p: f64) -> u32 {
    let q = (p * 4_294_967_296.0).round();
    q.clamp(1.0, u32::MAX as f64) as u32
}

/// `table[k] = q(k)` for `k ≥ 2`; entries 0 and 1 are unused.
pub fn quantized_table(params: &ModelParams) -> Vec<u32> {
    let mut t: Vec<u32> = params
        .probability_table()
        .into_iter()
        .map(quantize)
        .collect();
    t[0] = 0;
    t[1] = 0;
    t
}

fn digest(g: &LabelledGraph) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0100_0000_01b3;
    let mut h = OFFSET;
    for (u, v) in g.edges() {
        for byte in (u as u32)
            .to_le_bytes()
            .into_iter()
            .chain((v as u32).to_le_bytes())
        {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
    }
    h
}

fn header_for(params: &ModelParams, mode: Mode, g: &LabelledGraph, payload_bits: u64) -> Header {
    Header {
        version: FORMAT_VERSION,
        mode,
        n: params.n(),
        a: format!("{}", params.a()),
        b: format!("{}", params.b()),
        edges: g.edge_count(),
        digest: digest(g),
        payload_bits,
    }
}

fn check_size(params: &ModelParams, g: &LabelledGraph) -> Result<()> {
    if g.n() != params.n() {
        return Err(Error::DimensionMismatch {
            expected: params.n(),
            got: g.n(),
        });
    }
    Ok(())
}

/// Codes every pair `(u, v)`, `u < v`, accepted by `code_pair`, with the
/// probability it returns.
fn encode_pairs(g: &LabelledGraph, code_pair: impl Fn(usize, usize) -> Option<u32>) -> Vec<u8> {
    let n = g.n();
    let mut enc = RangeEncoder::new();
    for u in 1..n {
        let nbrs = g.neighbors(u);
        let mut next = nbrs.partition_point(|&w| (w as usize) <= u);
        for v in u + 1..=n {
            let present = next < nbrs.len() && nbrs[next] as usize == v;
            if present {
                next += 1;
            }
            if let Some(q) = code_pair(u, v) {
                enc.encode(present, q);
            }
        }
    }
    enc.finish()
}

fn decode_pairs(
    n: usize,
    bytes: &[u8],
    mut g: LabelledGraph,
    code_pair: impl Fn(usize, usize) -> Option<u32>,
) -> Result<LabelledGraph> {
    let mut dec = RangeDecoder::new(bytes)?;
    for u in 1..n {
        for v in u + 1..=n {
            if let Some(q) = code_pair(u, v) {
                if dec.decode(q)? {
                    g.insert(u, v);
                }
            }
        }
    }
    dec.finish()?;
    g.finish();
    Ok(g)
}

fn verify(header: &Header, g: &LabelledGraph) -> Result<()> {
    if g.edge_count() != header.edges || digest(g) != header.digest {
        return Err(Error::HeaderMismatch(
            "decoded graph does not match the header's edge count and digest".into(),
        ));
    }
    Ok(())
}

fn expect_mode(header: &Header, mode: Mode) -> Result<()> {
    if header.mode != mode {
        return Err(Error::HeaderMismatch(format!(
            "container holds a {} graph, not {mode}",
            header.mode
        )));
    }
    Ok(())
}

pub fn encode_labelled(params: &ModelParams, g: &LabelledGraph) -> Result<CompressedGraph> {
    check_size(params, g)?;
    if !is_admissible(g) {
        return Err(Error::NotAdmissible("graph lacks a base-cycle edge".into()));
    }
    let n = params.n();
    let table = quantized_table(params);
    let bytes = encode_pairs(g, |u, v| {
        let k = ring_distance(n, u, v);
        (k >= 2).then(|| table[k])
    });
    let payload = BitStream::from_bytes(bytes);
    Ok(CompressedGraph {
        header: header_for(params, Mode::Labelled, g, payload.length_bits()),
        payload,
    })
}

pub fn decode_labelled(c: &CompressedGraph) -> Result<LabelledGraph> {
    expect_mode(&c.header, Mode::Labelled)?;
    let params = c.header.params()?;
    let n = params.n();
    let table = quantized_table(&params);
    let mut g = LabelledGraph::empty(n);
    g.add_cycle();
    let g = decode_pairs(n, c.payload.bytes(), g, |u, v| {
        let k = ring_distance(n, u, v);
        (k >= 2).then(|| table[k])
    })?;
    verify(&c.header, &g)?;
    Ok(g)
}

/// Uniform edge probability used by the structural coder: expected edge
/// count over the number of pairs.
pub fn structural_probability(params: &ModelParams) -> u32 {
    let n = params.n() as f64;
    quantize(sw_expected_edges(params) / (n * (n - 1.0) / 2.0))
}

pub fn encode_structural(params: &ModelParams, g: &LabelledGraph) -> Result<CompressedGraph> {
    check_size(params, g)?;
    if !is_admissible(g) {
        return Err(Error::NotAdmissible("graph lacks a base-cycle edge".into()));
    }
    let canon = canonical_form(g)?.to_graph();
    let q = structural_probability(params);
    let payload = BitStream::from_bytes(encode_pairs(&canon, |_, _| Some(q)));
    Ok(CompressedGraph {
        header: header_for(params, Mode::Structural, &canon, payload.length_bits()),
        payload,
    })
}

/// Returns the canonical representative, which is isomorphic to the input.
pub fn decode_structural(c: &CompressedGraph) -> Result<LabelledGraph> {
    expect_mode(&c.header, Mode::Structural)?;
    let params = c.header.params()?;
    let q = structural_probability(&params);
    let g = decode_pairs(
        params.n(),
        c.payload.bytes(),
        LabelledGraph::empty(params.n()),
        |_, _| Some(q),
    )?;
    verify(&c.header, &g)?;
    Ok(g)
}

pub fn decode(c: &CompressedGraph) -> Result<LabelledGraph> {
    match c.header.mode {
        Mode::Labelled => decode_labelled(c),
        Mode::Structural => decode_structural(c),
    }
}
