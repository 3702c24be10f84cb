//! Uniform random k-out digraphs.
//!
//! Vertices are `0..n` (0-based, also in every serialized form). Each vertex
//! owns `k` labeled out-arcs stored row-major, so the endpoint of arc `i`
//! leaving `v` is `endpoints[v * k + i]`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on rejection-sampling attempts in [`KOutDigraph::generate_simple`].
pub const DEFAULT_ATTEMPT_CAP: u64 = 1_000_000;

/// Identifies one reproducible random stream.
///
/// The generator is ChaCha8 seeded from `seed` (expanded through
/// `SeedableRng::seed_from_u64`) with its 64-bit stream counter set to
/// `stream`. Distinct streams under one seed are independent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSpec { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Sequential access to out-neighbours; implemented by the full digraph and by
/// induced sub-digraphs.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    /// Out-neighbours of `v`, one entry per arc (parallel arcs repeat).
    fn successors(&self, v: usize) -> &[u32];
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KOutDigraph {
    n: usize,
    k: usize,
    endpoints: Vec<u32>,
}

impl KOutDigraph {
    /// Builds a digraph from a row-major endpoint table, validating every entry.
    pub fn from_endpoints(n: usize, k: usize, endpoints: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("a digraph needs at least one vertex".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::Validation(format!("n = {n} does not fit 32-bit vertex ids")));
        }
        let arcs = n.checked_mul(k).ok_or_else(|| Error::Validation("n * k overflows".into()))?;
        if endpoints.len() != arcs {
            return Err(Error::Validation(format!(
                "expected {arcs} endpoints for n = {n}, k = {k}, got {}",
                endpoints.len()
            )));
        }
        if let Some(pos) = endpoints.iter().position(|&e| e as usize >= n) {
            return Err(Error::Validation(format!(
                "endpoint of arc {} leaving vertex {} is {}, outside [0, {n})",
                pos % k.max(1),
                pos / k.max(1),
                endpoints[pos]
            )));
        }
        Ok(KOutDigraph { n, k, endpoints })
    }

    /// Builds a digraph from per-vertex rows.
    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(v) = rows.iter().position(|r| r.as_ref().len() != k) {
            return Err(Error::Validation(format!("vertex {v} has {} arcs, expected {k}", rows[v].as_ref().len())));
        }
        let endpoints = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_endpoints(n, k, endpoints)
    }

    /// Draws every endpoint independently and uniformly from `0..n`.
    pub fn generate(n: usize, k: usize, spec: RngSpec) -> Result<Self> {
        Self::generate_with(n, k, &mut spec.rng())
    }

    pub fn generate_with<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if n > u32::MAX as usize {
            return Err(Error::invalid(format!("n = {n} does not fit 32-bit vertex ids")));
        }
        let bound = n as u32;
        let endpoints = (0..n * k).map(|_| rng.random_range(0..bound)).collect();
        Ok(KOutDigraph { n, k, endpoints })
    }

    /// Samples uniformly among simple k-out digraphs by rejection.
    ///
    /// Returns the digraph and the number of attempts used (at least 1).
    pub fn generate_simple(n: usize, k: usize, spec: RngSpec, attempt_cap: u64) -> Result<(Self, u64)> {
        if n <= k {
            return Err(Error::invalid(format!("a simple {k}-out digraph needs n > k, got n = {n}")));
        }
        let mut rng = spec.rng();
        for attempt in 1..=attempt_cap {
            let g = Self::generate_with(n, k, &mut rng)?;
            if g.is_simple() {
                return Ok((g, attempt));
            }
        }
        Err(Error::AttemptCapExceeded { attempts: attempt_cap })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arc_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn endpoints(&self) -> &[u32] {
        &self.endpoints
    }

    /// Endpoints of the arcs leaving `v`, in label order.
    pub fn row(&self, v: usize) -> &[u32] {
        &self.endpoints[v * self.k..(v + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        // k may be 0, which chunks_exact rejects
        (0..self.n).map(move |v| self.row(v))
    }

    pub fn endpoint(&self, v: usize, label: usize) -> u32 {
        self.endpoints[v * self.k + label]
    }

    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for &e in &self.endpoints {
            deg[e as usize] += 1;
        }
        deg
    }

    /// Number of self-loop arcs.
    pub fn count_self_loops(&self) -> usize {
        self.rows().enumerate().map(|(v, row)| row.iter().filter(|&&e| e as usize == v).count()).sum()
    }

    /// Number of label pairs `i < j` at a common vertex whose arcs share an endpoint.
    pub fn count_multi_pairs(&self) -> usize {
        self.rows()
            .map(|row| {
                let mut pairs = 0;
                for i in 0..row.len() {
                    for j in i + 1..row.len() {
                        if row[i] == row[j] {
                            pairs += 1;
                        }
                    }
                }
                pairs
            })
            .sum()
    }

    pub fn is_simple(&self) -> bool {
        self.rows()
            .enumerate()
            .all(|(v, row)| row.iter().enumerate().all(|(i, &e)| e as usize != v && !row[..i].contains(&e)))
    }

    /// Reverse adjacency in compressed form: `(offsets, sources)` where the
    /// in-neighbours of `v` are `sources[offsets[v]..offsets[v + 1]]`, one per arc.
    pub fn reverse_adjacency(&self) -> (Vec<usize>, Vec<u32>) {
        let mut offsets = vec![0usize; self.n + 1];
        for &e in &self.endpoints {
            offsets[e as usize + 1] += 1;
        }
        for v in 0..self.n {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut sources = vec![0u32; self.endpoints.len()];
        for (v, row) in self.rows().enumerate() {
            for &e in row {
                sources[fill[e as usize]] = v as u32;
                fill[e as usize] += 1;
            }
        }
        (offsets, sources)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<&[u32]> = self.rows().collect();
        serde_json::json!({ "n": self.n, "k": self.k, "endpoints": rows }).to_string()
    }

    /// Binary form: `KOUT1`, little-endian `u64` n and k, then `n * k`
    /// little-endian `u32` endpoints.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(MAGIC.len() + 16 + 4 * self.endpoints.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&(self.k as u64).to_le_bytes());
        for &e in &self.endpoints {
            out.extend_from_slice(&e.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let parse_err = |offset: usize, message: &str| Error::Parse { offset, message: message.to_string() };
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            let offset = bytes.iter().zip(MAGIC).take_while(|(a, b)| a == b).count();
            return Err(parse_err(offset, "missing KOUT1 header"));
        }
        let mut pos = MAGIC.len();
        let read_u64 = |pos: &mut usize, what: &str| -> Result<u64> {
            let chunk =
                bytes.get(*pos..*pos + 8).ok_or_else(|| parse_err(bytes.len(), &format!("truncated {what}")))?;
            *pos += 8;
            Ok(u64::from_le_bytes(chunk.try_into().unwrap()))
        };
        let n = read_u64(&mut pos, "vertex count")?;
        let k = read_u64(&mut pos, "out-degree")?;
        let body = bytes.len() - pos;
        let arcs = n.checked_mul(k).filter(|a| a.checked_mul(4).is_some_and(|b| b == body as u64)).ok_or_else(|| {
            let offset = if (body as u64) < n.saturating_mul(k).saturating_mul(4) { bytes.len() } else { pos };
            parse_err(offset, &format!("body of {body} bytes does not hold n * k = {n} * {k} endpoints"))
        })? as usize;
        let endpoints =
            bytes[pos..].chunks_exact(4).take(arcs).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
        Self::from_endpoints(n as usize, k as usize, endpoints)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            n: usize,
            k: usize,
            endpoints: Vec<Vec<u32>>,
        }
        let wire: Wire = serde_json::from_str(text)
            .map_err(|e| Error::Parse { offset: byte_offset(text, e.line(), e.column()), message: e.to_string() })?;
        if wire.endpoints.len() != wire.n {
            return Err(Error::Validation(format!("n = {} but {} endpoint rows given", wire.n, wire.endpoints.len())));
        }
        if let Some(v) = wire.endpoints.iter().position(|r| r.len() != wire.k) {
            return Err(Error::Validation(format!(
                "vertex {v} has {} arcs, expected k = {}",
                wire.endpoints[v].len(),
                wire.k
            )));
        }
        Self::from_endpoints(wire.n, wire.k, wire.endpoints.into_iter().flatten().collect())
    }

    /// Decodes either form, choosing binary when the `KOUT1` header is present.
    pub fn deserialize(bytes: &[u8]) -> Result<Self> {
        if bytes.starts_with(MAGIC) {
            return Self::from_bytes(bytes);
        }
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
            offset: e.valid_up_to(),
            message: "input is neither KOUT1 binary nor UTF-8 JSON".into(),
        })?;
        Self::from_json(text)
    }
}

const MAGIC: &[u8; 5] = b"KOUT1";

/// Converts serde_json's 1-based line/column into a byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

impl Adjacency for KOutDigraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn successors(&self, v: usize) -> &[u32] {
        self.row(v)
    }
}
