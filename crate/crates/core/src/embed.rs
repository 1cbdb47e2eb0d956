//! Constructive embeddings: Hamilton paths, squares of paths on at least
//! `ceil(2n/3)` vertices, and `k`-th powers of paths built chunk by chunk
//! along a locally optimal ordering.
//!
//! The chunked embedding works on 0-based intervals `[i, j)` of ordering
//! positions. From a working set `A_s` inside the window `[i_s - t, i_s)` it
//! extracts a transitive chunk of `k` vertices having many common
//! out-neighbours inside one of the `blocks` windows of width `t` that follow
//! `i_s`; those out-neighbours become `A_{s+1}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::median::{
    eliminate_bad_indices, exact_median, insertion_local_search, insertion_local_search_within, DEFAULT_EXACT_CAP,
};
use crate::ordering::Ordering;
use crate::tournament::{greedy_transitive, Tournament, Vertex};
use crate::witness::{verify_power_path, Mode, PowerPathWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EmbedParams {
    pub k: usize,
    /// Window width.
    pub t: usize,
    /// Working-set size.
    pub a_star: usize,
    /// Windows scanned after each `i_s`.
    pub blocks: usize,
}

impl EmbedParams {
    /// `t = 2^(4k+4) k`, `a_star = 2^(2k)`, `blocks = 2k + 1`.
    pub fn defaults(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("power order k must be at least 1".into()));
        }
        let t = 1usize
            .checked_shl((4 * k + 4) as u32)
            .filter(|_| 4 * k + 4 < usize::BITS as usize)
            .and_then(|p| p.checked_mul(k))
            .ok_or_else(|| Error::InvalidParameter(format!("default window width overflows for k = {k}")))?;
        Ok(EmbedParams { k, t, a_star: 1 << (2 * k), blocks: 2 * k + 1 })
    }

    pub fn new(k: usize, t: usize, a_star: usize, blocks: usize) -> Result<Self> {
        let p = EmbedParams { k, t, a_star, blocks };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidParameter(m));
        if self.k == 0 {
            return fail("k must be at least 1".into());
        }
        if self.blocks == 0 {
            return fail("blocks must be at least 1".into());
        }
        if self.a_star == 0 || self.a_star > self.t {
            return fail(format!("need 1 <= a_star <= t, got a_star = {}, t = {}", self.a_star, self.t));
        }
        if self.span().is_none() {
            return fail("blocks * t overflows".into());
        }
        Ok(())
    }

    pub fn is_default(&self) -> bool {
        EmbedParams::defaults(self.k).is_ok_and(|d| d == *self)
    }

    fn span(&self) -> Option<usize> {
        self.blocks.checked_mul(self.t)
    }

    /// Out-degree into `B` every working-set vertex must reach:
    /// `ceil(k |B| / (2k + 1))`, i.e. `(1 - 1/(2k+1)) |B| / 2`.
    pub fn degree_threshold(&self) -> usize {
        (self.k * self.blocks * self.t).div_ceil(2 * self.k + 1)
    }
}

/// First `k`-subset of `a` (in lexicographic order of positions in `a`)
/// whose common out-neighbourhood in `b` has at least `out_threshold`
/// vertices, returned with that neighbourhood (in `b`'s order).
///
/// Every vertex of `a` must have at least `(1 - 1/(2k+1)) |b| / 2`
/// out-neighbours in `b`; when also `|b| >= 2^(4k+4) k` a subset with
/// `(2k+1) 4^k` common out-neighbours always exists.
pub fn kst_select(
    t: &Tournament,
    a: &[Vertex],
    b: &[Vertex],
    k: usize,
    out_threshold: usize,
) -> Result<(Vec<Vertex>, Vec<Vertex>)> {
    if k == 0 || a.len() != 2 * k + 1 {
        return Err(Error::InvalidParameter(format!("A must have 2k + 1 = {} vertices, got {}", 2 * k + 1, a.len())));
    }
    for &v in a.iter().chain(b) {
        t.check_vertex(v)?;
    }
    if let Some(v) = a.iter().find(|v| b.contains(v)) {
        return Err(Error::InvalidParameter(format!("vertex {v} lies in both A and B")));
    }
    let words = b.len().div_ceil(64);
    let mut rows = Vec::with_capacity(a.len());
    for &v in a {
        let mut row = vec![0u64; words];
        for (idx, &u) in b.iter().enumerate() {
            if t.edge(v, u) {
                row[idx / 64] |= 1 << (idx % 64);
            }
        }
        let degree: usize = row.iter().map(|w| w.count_ones() as usize).sum();
        if degree * (2 * k + 1) < k * b.len() {
            return Err(Error::Precondition(format!(
                "vertex {v} has {degree} out-neighbours in B, needs (1 - 1/(2k+1))|B|/2 = {:.1}",
                (k * b.len()) as f64 / (2 * k + 1) as f64
            )));
        }
        rows.push(row);
    }
    let mut combo: Vec<usize> = (0..k).collect();
    let mut common = vec![0u64; words];
    loop {
        common.copy_from_slice(&rows[combo[0]]);
        for &c in &combo[1..] {
            for (w, r) in common.iter_mut().zip(&rows[c]) {
                *w &= r;
            }
        }
        let size: usize = common.iter().map(|w| w.count_ones() as usize).sum();
        if size >= out_threshold {
            let chosen = combo.iter().map(|&c| a[c]).collect();
            let members = b
                .iter()
                .enumerate()
                .filter(|&(idx, _)| (common[idx / 64] >> (idx % 64)) & 1 == 1)
                .map(|(_, &u)| u)
                .collect();
            return Ok((chosen, members));
        }
        if !next_combination(&mut combo, a.len()) {
            return Err(Error::NotFound { k, threshold: out_threshold });
        }
    }
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(pos) = (0..k).rev().find(|&p| combo[p] < n - k + p) else {
        return false;
    };
    combo[pos] += 1;
    for p in pos + 1..k {
        combo[p] = combo[p - 1] + 1;
    }
    true
}

/// One application of the window step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimStep {
    /// Transitive `k`-chunk, in transitive order.
    pub chunk: Vec<Vertex>,
    /// Right end (exclusive) of the window holding `next`.
    pub j: usize,
    /// Next working set: the smallest `a_star` common out-neighbours of
    /// `chunk` in `[j - t, j)`.
    pub next: Vec<Vertex>,
}

pub fn claim_step(
    t: &Tournament,
    ord: &Ordering,
    i: usize,
    a_star: &[Vertex],
    params: &EmbedParams,
) -> Result<ClaimStep> {
    ord.check_matches(t)?;
    params.validate()?;
    claim_step_at(t, ord.as_slice(), &ord.positions(), i, a_star, params)
}

fn claim_step_at(
    t: &Tournament,
    seq: &[Vertex],
    pos: &[usize],
    i: usize,
    a_star: &[Vertex],
    p: &EmbedParams,
) -> Result<ClaimStep> {
    let n = seq.len();
    let span = p.blocks * p.t;
    if i + span > n {
        return Err(Error::Precondition(format!("i = {i} exceeds n - blocks * t = {}", n as i64 - span as i64)));
    }
    if a_star.len() != p.a_star {
        return Err(Error::Precondition(format!("working set has {} vertices, expected {}", a_star.len(), p.a_star)));
    }
    let lo = i.saturating_sub(p.t);
    for &v in a_star {
        t.check_vertex(v)?;
        if !(lo..i).contains(&pos[v]) {
            return Err(Error::Precondition(format!(
                "vertex {v} at position {} lies outside the window [{lo}, {i})",
                pos[v]
            )));
        }
    }
    let needed = 2 * p.k + 1;
    let mut chain = greedy_transitive(t, a_star)?;
    if chain.len() < needed {
        return Err(Error::InsufficientTransitive { found: chain.len(), needed });
    }
    chain.truncate(needed);
    let b = &seq[i..i + span];
    let threshold = p.degree_threshold();
    for &v in &chain {
        let degree = b.iter().filter(|&&u| t.edge(v, u)).count();
        if degree < threshold {
            return Err(Error::NotLocallyOptimal(format!(
                "vertex {v} has {degree} out-neighbours in [{i}, {}), needs {threshold}",
                i + span
            )));
        }
    }
    let (chunk, common) = kst_select(t, &chain, b, p.k, p.blocks * p.a_star)?;
    for block in 0..p.blocks {
        let window = i + block * p.t..i + (block + 1) * p.t;
        let mut inside: Vec<Vertex> = common.iter().copied().filter(|&u| window.contains(&pos[u])).collect();
        if inside.len() >= p.a_star {
            inside.sort_unstable();
            inside.truncate(p.a_star);
            return Ok(ClaimStep { chunk, j: window.end, next: inside });
        }
    }
    Err(Error::Contract(format!("{} common out-neighbours but no window holds {}", common.len(), p.a_star)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub s: usize,
    pub i: usize,
    pub working_set: Vec<Vertex>,
    pub chunk: Vec<Vertex>,
    pub j: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EmbedTrace {
    pub steps: Vec<TraceStep>,
    pub final_chunk: Vec<Vertex>,
}

impl EmbedTrace {
    /// One JSON object per step, then `{"final_chunk":[...]}`.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("trace serializes"));
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "final_chunk": self.final_chunk }).to_string());
        out.push('\n');
        out
    }

    /// Step bounds `i_s + t <= i_{s+1} <= i_s + blocks t`, disjoint
    /// consecutive windows, and chunks drawn from their working sets.
    pub fn check(&self, p: &EmbedParams) -> Result<()> {
        for (idx, step) in self.steps.iter().enumerate() {
            let fail = |m: String| Err(Error::Contract(format!("trace step {idx}: {m}")));
            if step.s != idx {
                return fail(format!("step counter {}", step.s));
            }
            if step.j < step.i + p.t || step.j > step.i + p.blocks * p.t {
                return fail(format!("j = {} outside [i + t, i + blocks t] for i = {}", step.j, step.i));
            }
            if step.chunk.len() != p.k || !step.chunk.iter().all(|v| step.working_set.contains(v)) {
                return fail("chunk is not a k-subset of the working set".into());
            }
            if let Some(next) = self.steps.get(idx + 1) {
                if next.i != step.j {
                    return fail(format!("next step starts at {} instead of {}", next.i, step.j));
                }
                // windows [i - t, i) and [j - t, j) are disjoint iff j - t >= i
                if next.i - p.t < step.i {
                    return fail("consecutive windows overlap".into());
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbedMode {
    /// Default parameters only; any failed step is a bug.
    Guaranteed,
    /// Any consistent parameters; a failed step ends the embedding early.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub witness: PowerPathWitness,
    pub trace: EmbedTrace,
    /// Set when a step failed in heuristic mode and the witness stops there.
    pub partial: Option<String>,
}

/// Ordering used by the embeddings: exact for small `n`, otherwise insertion
/// local search from the identity, restricted to shifts of `radius`.
fn locally_optimal(t: &Tournament, radius: usize) -> Result<Ordering> {
    if t.n() <= DEFAULT_EXACT_CAP {
        exact_median(t)
    } else if radius >= t.n() {
        insertion_local_search(t, &Ordering::identity(t.n()))
    } else {
        insertion_local_search_within(t, &Ordering::identity(t.n()), radius)
    }
}

/// Block-transitive `k`-th power of a path, built by chaining window steps
/// along a locally optimal ordering and closing with a transitive chunk of
/// `2k + 1` vertices.
pub fn embed_power_path(t: &Tournament, params: &EmbedParams, mode: EmbedMode) -> Result<Embedding> {
    params.validate()?;
    let p = *params;
    let n = t.n();
    let k = p.k;
    if mode == EmbedMode::Guaranteed {
        if !p.is_default() {
            return Err(Error::InvalidParameter("guaranteed mode requires the default parameters".into()));
        }
        if (n as u128) < 1u128 << (2 * k) {
            let witness = PowerPathWitness::new(k, Mode::BlockTransitive, vec![0]);
            return Ok(Embedding { witness, trace: EmbedTrace::default(), partial: None });
        }
    }
    // single-vertex moves of up to (blocks + 1) t positions give every
    // working-set vertex the out-degree the window step needs
    let radius = (p.blocks + 1).saturating_mul(p.t);
    let ord = locally_optimal(t, radius)?;
    let seq = ord.as_slice();
    let pos = ord.positions();

    let mut trace = EmbedTrace::default();
    let mut vertices = Vec::new();
    let mut partial = None;
    let mut i = p.a_star.min(n);
    let mut working: Vec<Vertex> = seq[..i].to_vec();
    while i + p.blocks * p.t <= n && working.len() == p.a_star {
        match claim_step_at(t, seq, &pos, i, &working, &p) {
            Ok(step) => {
                vertices.extend_from_slice(&step.chunk);
                trace.steps.push(TraceStep {
                    s: trace.steps.len(),
                    i,
                    working_set: std::mem::take(&mut working),
                    chunk: step.chunk,
                    j: step.j,
                });
                i = step.j;
                working = step.next;
            }
            Err(e) => {
                let step = trace.steps.len();
                if mode == EmbedMode::Guaranteed {
                    return Err(Error::Contract(Error::StepFailed { step, source: Box::new(e) }.to_string()));
                }
                partial = Some(Error::StepFailed { step, source: Box::new(e) }.to_string());
                break;
            }
        }
    }
    // the working set consists of common out-neighbours of the last chunk,
    // so any transitive piece of it extends the witness
    let mut tail = greedy_transitive(t, &working)?;
    tail.truncate(2 * k + 1);
    if mode == EmbedMode::Guaranteed && tail.len() < 2 * k + 1 {
        return Err(Error::Contract(format!("final chunk has only {} vertices", tail.len())));
    }
    vertices.extend_from_slice(&tail);
    trace.final_chunk = tail;
    trace.check(&p)?;

    let witness = PowerPathWitness::new(k, Mode::BlockTransitive, vertices);
    if !verify_power_path(t, &witness.vertices, k, Mode::BlockTransitive)? {
        return Err(Error::Contract("embedded sequence failed verification".into()));
    }
    if mode == EmbedMode::Guaranteed {
        // m >= k n / ((2k + 1) t)
        let m = witness.len() as u128;
        if m * ((2 * k + 1) * p.t) as u128 <= (k * n) as u128 {
            return Err(Error::Contract(format!("witness on {m} vertices is below the guaranteed length")));
        }
    }
    Ok(Embedding { witness, trace, partial })
}

/// Square of a path on at least `ceil(2n/3)` vertices: the positions `i` of a
/// bad-index-free median-like ordering with `x_i -> x_{i-2}` absent.
pub fn embed_square_path(t: &Tournament) -> Result<PowerPathWitness> {
    let n = t.n();
    let ord = eliminate_bad_indices(t, &locally_optimal(t, usize::MAX)?)?;
    let seq = ord.as_slice();
    // 0-based indices c with x_c -> x_{c-2} absent; always includes 0 and 1
    let keep: Vec<bool> = (0..n).map(|c| c < 2 || !t.edge(seq[c], seq[c - 2])).collect();
    for c in 0..n.saturating_sub(2) {
        if !keep[c + 2] && !(keep[c] && keep[c + 1]) {
            return Err(Error::Contract(format!("position {} dropped together with a neighbour", c + 3)));
        }
    }
    let vertices: Vec<Vertex> = seq.iter().zip(&keep).filter(|(_, &k)| k).map(|(&v, _)| v).collect();
    let witness = PowerPathWitness::new(2, Mode::Plain, vertices);
    if witness.len() < (2 * n).div_ceil(3) || !witness.verify(t)? {
        return Err(Error::Contract("square-path extraction broke its guarantee".into()));
    }
    Ok(witness)
}

/// Hamilton path read off a locally optimal ordering.
pub fn hamilton_path(t: &Tournament) -> Result<PowerPathWitness> {
    let ord = locally_optimal(t, usize::MAX)?;
    let witness = PowerPathWitness::new(1, Mode::Plain, ord.into_vec());
    if !witness.verify(t)? {
        return Err(Error::Contract("locally optimal ordering has a backward adjacent pair".into()));
    }
    Ok(witness)
}
