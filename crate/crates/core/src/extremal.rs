//! Exact oracles for the longest power of a path, exhaustive computation of
//! `l_k(n)` on tiny tournaments, random avoider search, and upper-bound
//! certificates assembled from avoiders with [`compose_forward`].
//!
//! All sizes are vertex counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format;
use crate::tournament::{compose_forward, pair_count, Tournament, Vertex};
use crate::witness::{verify_power_path, Mode};

/// Largest `n` handled by the depth-first oracle.
pub const DFS_CAP: usize = 24;
/// Largest `n` handled by the `k = 2` subset dynamic program.
pub const SQUARE_DP_CAP: usize = 20;
/// Largest `n` for which `ell_exact` runs without the long-run flag.
pub const ELL_CAP: usize = 6;
pub const ELL_LONG_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub max_vertices: usize,
    pub witness: Vec<Vertex>,
    pub nodes_explored: u64,
}

/// Exhaustive longest `k`-th power of a path: the subset dynamic program for
/// `k = 2`, depth-first search otherwise.
pub fn longest_power_path(t: &Tournament, k: usize) -> Result<OracleResult> {
    if k == 2 {
        longest_square_path_dp(t)
    } else {
        longest_power_path_dfs(t, k)
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidParameter("power order k must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Depth-first search extending by common out-neighbours of the last
/// `min(k, depth)` vertices, pruned when `depth + unused <= best`.
pub fn longest_power_path_dfs(t: &Tournament, k: usize) -> Result<OracleResult> {
    check_k(k)?;
    if t.n() > DFS_CAP {
        return Err(Error::Capacity { what: "depth-first power-path oracle", n: t.n(), cap: DFS_CAP });
    }
    let mut search = MaskSearch::new(t.out_masks(), k, None);
    search.run();
    Ok(OracleResult { max_vertices: search.best.len(), witness: search.best, nodes_explored: search.nodes })
}

/// Some power path on `m` vertices, if one exists (search stops at the
/// first one found).
pub fn find_power_path(t: &Tournament, k: usize, m: usize) -> Result<Option<Vec<Vertex>>> {
    check_k(k)?;
    if t.n() > DFS_CAP {
        return Err(Error::Capacity { what: "depth-first power-path oracle", n: t.n(), cap: DFS_CAP });
    }
    Ok(find_in_masks(t.out_masks(), k, m))
}

fn find_in_masks(out: Vec<u64>, k: usize, m: usize) -> Option<Vec<Vertex>> {
    if m > out.len() {
        return None;
    }
    let mut search = MaskSearch::new(out, k, Some(m));
    search.run();
    (search.best.len() >= m).then(|| search.best[..m].to_vec())
}

struct MaskSearch {
    out: Vec<u64>,
    k: usize,
    all: u64,
    target: Option<usize>,
    path: Vec<Vertex>,
    best: Vec<Vertex>,
    nodes: u64,
}

impl MaskSearch {
    fn new(out: Vec<u64>, k: usize, target: Option<usize>) -> Self {
        let n = out.len();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        MaskSearch { out, k, all, target, path: Vec::with_capacity(n), best: Vec::new(), nodes: 0 }
    }

    fn done(&self) -> bool {
        self.best.len() >= self.target.unwrap_or(self.out.len())
    }

    fn run(&mut self) {
        self.extend(0);
    }

    fn extend(&mut self, used: u64) {
        self.nodes += 1;
        if self.path.len() > self.best.len() {
            self.best.clone_from(&self.path);
        }
        if self.done() {
            return;
        }
        let unused = self.all & !used;
        if self.path.len() + unused.count_ones() as usize <= self.best.len() {
            return;
        }
        let mut cand = unused;
        for &v in self.path.iter().rev().take(self.k) {
            cand &= self.out[v];
        }
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.path.push(v);
            self.extend(used | 1 << v);
            self.path.pop();
            if self.done() {
                return;
            }
        }
    }
}

/// Longest square of a path by dynamic programming over `(visited set, last
/// two vertices)`: `reach[S][b]` holds every `a` such that some valid
/// sequence on exactly `S` ends with `a, b`.
pub fn longest_square_path_dp(t: &Tournament) -> Result<OracleResult> {
    let n = t.n();
    if n > SQUARE_DP_CAP {
        return Err(Error::Capacity { what: "square-path dynamic program", n, cap: SQUARE_DP_CAP });
    }
    let out: Vec<u32> = t.out_masks().into_iter().map(|m| m as u32).collect();
    let mut in_mask = vec![0u32; n];
    for (u, &m) in out.iter().enumerate() {
        for (v, im) in in_mask.iter_mut().enumerate() {
            if (m >> v) & 1 == 1 {
                *im |= 1 << u;
            }
        }
    }
    if n == 1 {
        return Ok(OracleResult { max_vertices: 1, witness: vec![0], nodes_explored: 1 });
    }
    let full = 1usize << n;
    let mut reach = vec![0u32; full * n];
    for a in 0..n {
        for b in 0..n {
            if (out[a] >> b) & 1 == 1 {
                reach[((1 << a) | (1 << b)) * n + b] |= 1 << a;
            }
        }
    }
    let mut best: Option<(u32, usize, usize)> = None;
    let mut nodes = 0u64;
    for s in 0..full {
        let size = (s as u32).count_ones();
        let mut members = s;
        while members != 0 {
            let b = members.trailing_zeros() as usize;
            members &= members - 1;
            let preds = reach[s * n + b];
            if preds == 0 {
                continue;
            }
            nodes += 1;
            if best.is_none_or(|(sz, _, _)| size > sz) {
                best = Some((size, s, b));
            }
            let mut next = out[b] & !(s as u32);
            while next != 0 {
                let c = next.trailing_zeros() as usize;
                next &= next - 1;
                if preds & in_mask[c] != 0 {
                    reach[(s | 1 << c) * n + c] |= 1 << b;
                }
            }
        }
    }
    let (size, mut s, mut cur) = best.expect("a tournament on two or more vertices has an edge");
    let mut prev = reach[s * n + cur].trailing_zeros() as usize;
    let mut seq = vec![cur];
    loop {
        seq.push(prev);
        let rest = s & !(1 << cur);
        if rest.count_ones() == 1 {
            break;
        }
        let before = (reach[rest * n + prev] & in_mask[cur]).trailing_zeros() as usize;
        s = rest;
        cur = prev;
        prev = before;
    }
    seq.reverse();
    debug_assert_eq!(seq.len(), size as usize);
    Ok(OracleResult { max_vertices: seq.len(), witness: seq, nodes_explored: nodes })
}

/// `l_k(n)` over one shard of the labelled tournaments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllExact {
    pub n: usize,
    pub k: usize,
    /// Minimum, over the tournaments scanned, of the longest power path.
    pub value: usize,
    /// A scanned tournament attaining `value`.
    pub extremal: Tournament,
    pub tournaments: u64,
}

pub fn ell_exact(n: usize, k: usize, long_run: bool) -> Result<EllExact> {
    ell_exact_shard(n, k, long_run, 1, 0)
}

/// Scans tournament codes in the `index`-th of `shards` contiguous ranges of
/// `0..2^(n(n-1)/2)`; `value` of the full problem is the minimum over shards.
pub fn ell_exact_shard(n: usize, k: usize, long_run: bool, shards: u64, index: u64) -> Result<EllExact> {
    check_k(k)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let cap = if long_run { ELL_LONG_CAP } else { ELL_CAP };
    if n > cap {
        return Err(Error::Capacity { what: "exhaustive l_k(n) enumeration", n, cap });
    }
    if shards == 0 || index >= shards {
        return Err(Error::InvalidParameter(format!("shard index {index} outside 0..{shards}")));
    }
    let pairs = pair_count(n);
    let total = 1u64 << pairs;
    let lo = total / shards * index + index.min(total % shards);
    let hi = lo + total / shards + u64::from(index < total % shards);
    if lo == hi {
        return Err(Error::InvalidParameter("empty shard".into()));
    }
    let pair_list: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();

    let mut value = n + 1;
    let mut extremal_code = lo;
    for code in lo..hi {
        let mut out = vec![0u64; n];
        for (bit, &(i, j)) in pair_list.iter().enumerate() {
            if (code >> bit) & 1 == 1 {
                out[i] |= 1 << j;
            } else {
                out[j] |= 1 << i;
            }
        }
        // only tournaments beating the running minimum need the full search
        let probe = value.min(n);
        if value <= n && find_in_masks(out.clone(), k, probe).is_some() {
            continue;
        }
        let mut search = MaskSearch::new(out, k, None);
        search.run();
        if search.best.len() < value {
            value = search.best.len();
            extremal_code = code;
        }
    }
    let extremal = Tournament::from_fn(n, |i, j| {
        let bit = pair_list.iter().position(|&p| p == (i, j)).expect("pair listed");
        (extremal_code >> bit) & 1 == 1
    });
    Ok(EllExact { n, k, value, extremal, tournaments: hi - lo })
}

/// A tournament asserted to contain no `k`-th power of a path on `m`
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoiderCertificate {
    pub tournament: Tournament,
    pub k: usize,
    pub m: usize,
    pub verified: bool,
    /// Seed of the random tournament, when it came from the generator.
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CertificateMeta {
    k: usize,
    m: usize,
    verified: bool,
    seed: Option<u64>,
}

impl AvoiderCertificate {
    /// The cyclic triangle has no transitive triple: `k = 2`, `m = 3`.
    pub fn cyclic_triangle() -> Self {
        let tournament = Tournament::c3chain(3).expect("3 is divisible by 3");
        let mut cert = AvoiderCertificate { tournament, k: 2, m: 3, verified: false, seed: None };
        cert.verified = cert.check().expect("three vertices are within oracle capacity");
        cert
    }

    /// Oracle confirmation that no power path on `m` vertices exists.
    pub fn check(&self) -> Result<bool> {
        Ok(find_power_path(&self.tournament, self.k, self.m)?.is_none())
    }

    /// Re-run the oracle on a relabelled copy (`perm[x]` becomes `x`).
    pub fn check_relabelled(&self, perm: &[Vertex]) -> Result<bool> {
        let relabelled = self.tournament.relabel(perm)?;
        Ok(longest_power_path(&relabelled, self.k)?.max_vertices < self.m)
    }

    /// `PTv1` tournament followed by `{"k":K,"m":M,"verified":B,"seed":S}`.
    pub fn to_text(&self) -> Result<String> {
        let mut text = format::serialize(&self.tournament)?;
        let meta = CertificateMeta { k: self.k, m: self.m, verified: self.verified, seed: self.seed };
        text.push_str(&serde_json::to_string(&meta).expect("metadata serializes"));
        text.push('\n');
        Ok(text)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (tournament, rest) = format::parse_prefix(text)?;
        let line = tournament.n().max(1) + 1;
        let meta: CertificateMeta = serde_json::from_str(rest.trim())
            .map_err(|e| Error::Parse { line, message: format!("certificate metadata: {e}") })?;
        Ok(AvoiderCertificate { tournament, k: meta.k, m: meta.m, verified: meta.verified, seed: meta.seed })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoiderSearch {
    pub certificate: Option<AvoiderCertificate>,
    pub trials_run: u64,
}

/// Sample random tournaments on `2^(k-1)` vertices (sample `r` uses seed
/// `seed + r`) until one has no `k`-th power of a path on `m` vertices.
pub fn search_avoider(k: usize, m: usize, trials: u64, seed: u64) -> Result<AvoiderSearch> {
    search_avoider_range(k, m, 0..trials, seed)
}

/// Trials `range` only; shards combine by taking the lowest successful trial.
pub fn search_avoider_range(k: usize, m: usize, range: std::ops::Range<u64>, seed: u64) -> Result<AvoiderSearch> {
    check_k(k)?;
    if m < 2 {
        return Err(Error::InvalidParameter("avoider bound m must be at least 2".into()));
    }
    let n = 1usize.checked_shl(k as u32 - 1).filter(|&n| n <= DFS_CAP).ok_or(Error::Capacity {
        what: "avoider search (2^(k-1) vertices)",
        n: usize::MAX,
        cap: DFS_CAP,
    })?;
    let mut trials_run = 0;
    for r in range {
        trials_run += 1;
        let sample_seed = seed.wrapping_add(r);
        let t = Tournament::random(n, sample_seed);
        if find_power_path(&t, k, m)?.is_none() {
            let certificate = AvoiderCertificate { tournament: t, k, m, verified: true, seed: Some(sample_seed) };
            return Ok(AvoiderSearch { certificate: Some(certificate), trials_run });
        }
    }
    Ok(AvoiderSearch { certificate: None, trials_run })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBound {
    pub tournament: Tournament,
    /// No `k`-th power of a path in `tournament` has more vertices.
    pub bound: usize,
    /// Exact longest power path, when `n` is within oracle capacity.
    pub oracle_max: Option<usize>,
}

/// Chain `ceil(n / |block|)` copies of the avoider, the last one truncated to
/// its first vertices, with every edge between copies pointing forward. Each
/// full copy contributes at most `m - 1` path vertices and the truncated copy
/// at most `min(r, m - 1)`.
pub fn certify_upper_bound(k: usize, n: usize, block: &AvoiderCertificate) -> Result<UpperBound> {
    if !block.verified {
        return Err(Error::InvalidCertificate("block is not verified".into()));
    }
    if block.k != k {
        return Err(Error::InvalidCertificate(format!("block certifies k = {}, requested {k}", block.k)));
    }
    let size = block.tournament.n();
    if n < size {
        return Err(Error::InvalidParameter(format!("n = {n} is smaller than the block ({size})")));
    }
    let (full, rest) = (n / size, n % size);
    let mut tournament = block.tournament.clone();
    for _ in 1..full {
        tournament = compose_forward(&tournament, &block.tournament)?;
    }
    if rest > 0 {
        let head: Vec<Vertex> = (0..rest).collect();
        tournament = compose_forward(&tournament, &block.tournament.induced(&head)?)?;
    }
    let bound = full * (block.m - 1) + rest.min(block.m - 1);
    let cap = if k == 2 { SQUARE_DP_CAP } else { DFS_CAP };
    let oracle_max = if n <= cap {
        let result = longest_power_path(&tournament, k)?;
        if result.max_vertices > bound || !verify_power_path(&tournament, &result.witness, k, Mode::Plain)? {
            return Err(Error::Contract(format!(
                "composition has a power path on {} vertices, above the bound {bound}",
                result.max_vertices
            )));
        }
        Some(result.max_vertices)
    } else {
        None
    };
    Ok(UpperBound { tournament, bound, oracle_max })
}
