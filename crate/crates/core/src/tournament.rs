//! Tournament storage, generators and structural queries.
//!
//! Explicit tournaments keep one bit per unordered pair in a packed
//! strict-upper-triangle table: bit `(i, j)` with `i < j` is set iff `i -> j`.
//! Implicit tournaments answer the same query from a keyed hash of the pair,
//! so they cost no storage at all.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ordering::Ordering;

pub type Vertex = usize;

/// Generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Independent fair coin per pair, explicit storage.
    Random,
    /// `u -> v` iff `u < v`.
    Transitive,
    /// Consecutive cyclic triangles, earlier triangles beating later ones.
    C3Chain,
    /// Same distribution as `Random`, answered from a pairwise hash.
    ImplicitRandom,
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Model::Random),
            "transitive" => Ok(Model::Transitive),
            "c3chain" => Ok(Model::C3Chain),
            "implicit_random" | "implicit-random" => Ok(Model::ImplicitRandom),
            other => Err(Error::InvalidParameter(format!("unknown model '{other}'"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Storage {
    Explicit(Vec<u64>),
    Implicit { key: u64 },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Tournament {
    n: usize,
    storage: Storage,
}

impl std::fmt::Debug for Tournament {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.storage {
            Storage::Explicit(_) => "explicit",
            Storage::Implicit { .. } => "implicit",
        };
        f.debug_struct("Tournament").field("n", &self.n).field("storage", &kind).finish()
    }
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Number of pairs `(i, j)`, `i < j`, in a tournament on `n` vertices.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[inline]
fn row_offset(n: usize, i: usize) -> usize {
    // pairs in rows 0..i of the strict upper triangle
    i * (2 * n - i - 1) / 2
}

#[inline]
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    row_offset(n, i) + (j - i - 1)
}

impl Tournament {
    /// Build an explicit tournament from `forward(i, j)`, queried once for
    /// every `i < j` in row order; `true` means `i -> j`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(Vertex, Vertex) -> bool) -> Self {
        let mut bits = vec![0u64; pair_count(n).div_ceil(64)];
        let mut idx = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if forward(i, j) {
                    bits[idx / 64] |= 1 << (idx % 64);
                }
                idx += 1;
            }
        }
        Tournament { n, storage: Storage::Explicit(bits) }
    }

    pub fn generate(model: Model, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        match model {
            Model::Transitive => Ok(Self::transitive(n)),
            Model::C3Chain => Self::c3chain(n),
            Model::Random => Ok(Self::random(n, seed)),
            Model::ImplicitRandom => Ok(Self::implicit_random(n, seed)),
        }
    }

    pub fn transitive(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn c3chain(n: usize) -> Result<Self> {
        if !n.is_multiple_of(3) {
            return Err(Error::InvalidParameter(format!("c3chain needs n divisible by 3, got {n}")));
        }
        // inside a triple {a, a+1, a+2}: a -> a+1 -> a+2 -> a
        Ok(Self::from_fn(n, |i, j| i / 3 != j / 3 || !(i % 3 == 0 && j % 3 == 2)))
    }

    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs = pair_count(n);
        let mut bits: Vec<u64> = (0..pairs.div_ceil(64)).map(|_| rng.next_u64()).collect();
        if !pairs.is_multiple_of(64) {
            if let Some(last) = bits.last_mut() {
                *last &= (1u64 << (pairs % 64)) - 1;
            }
        }
        Tournament { n, storage: Storage::Explicit(bits) }
    }

    pub fn implicit_random(n: usize, seed: u64) -> Self {
        assert!(n <= u32::MAX as usize, "implicit tournaments index pairs with 32-bit halves");
        Tournament { n, storage: Storage::Implicit { key: mix64(seed ^ 0x7074_7631) } }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.storage, Storage::Explicit(_))
    }

    /// Unchecked orientation query: `true` iff `u -> v`. Requires `u != v`,
    /// both in range.
    #[inline]
    pub fn edge(&self, u: Vertex, v: Vertex) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        // min/max rather than a branch: callers scan vertices in arbitrary order
        let (lo, hi, forward) = (u.min(v), u.max(v), u < v);
        let bit = match &self.storage {
            Storage::Explicit(bits) => {
                let idx = pair_index(self.n, lo, hi);
                (bits[idx / 64] >> (idx % 64)) & 1 == 1
            }
            Storage::Implicit { key } => {
                let pair = ((lo as u64) << 32) | hi as u64;
                mix64(pair ^ key) >> 63 == 1
            }
        };
        bit == forward
    }

    /// Checked orientation query.
    pub fn orient(&self, u: Vertex, v: Vertex) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(self.edge(u, v))
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n })
        }
    }

    /// Explicit copy answering every query identically.
    pub fn materialize(&self) -> Self {
        match self.storage {
            Storage::Explicit(_) => self.clone(),
            Storage::Implicit { .. } => Self::from_fn(self.n, |i, j| self.edge(i, j)),
        }
    }

    /// Sub-tournament induced on `verts`, relabelled `0..verts.len()` in the
    /// given order.
    pub fn induced(&self, verts: &[Vertex]) -> Result<Self> {
        for &v in verts {
            self.check_vertex(v)?;
        }
        let mut seen = vec![false; self.n];
        for &v in verts {
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!("vertex {v} repeated")));
            }
        }
        Ok(Self::from_fn(verts.len(), |i, j| self.edge(verts[i], verts[j])))
    }

    /// Relabel so that old vertex `perm[x]` becomes new vertex `x`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidParameter("relabelling must cover every vertex".into()));
        }
        self.induced(perm)
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        (0..self.n).filter(|&u| u != v && self.edge(v, u)).count()
    }

    /// Out-neighbourhoods as bitmasks; `n <= 64`.
    pub fn out_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64);
        (0..self.n)
            .map(|v| (0..self.n).filter(|&u| u != v && self.edge(v, u)).fold(0u64, |m, u| m | (1 << u)))
            .collect()
    }

    pub(crate) fn from_bits(n: usize, bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), pair_count(n).div_ceil(64));
        Tournament { n, storage: Storage::Explicit(bits) }
    }
}

/// Full out-neighbourhood bit matrix of an explicit tournament: row `v` has
/// bit `u` set iff `v -> u`. Comparing one vertex against many then reads a
/// single cache-resident row instead of scattered triangle entries.
pub(crate) struct OutRows {
    words: usize,
    bits: Vec<u64>,
}

impl OutRows {
    /// Largest `n` worth the `n^2 / 8` bytes.
    const CAP: usize = 1 << 15;

    pub(crate) fn build(t: &Tournament) -> Option<Self> {
        let Storage::Explicit(tri) = &t.storage else { return None };
        let n = t.n;
        if n > Self::CAP {
            return None;
        }
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        let bit = |idx: usize| (tri[idx / 64] >> (idx % 64)) & 1 == 1;
        for i in 0..n {
            let row = &mut bits[i * words..(i + 1) * words];
            for j in i + 1..n {
                if bit(pair_index(n, i, j)) {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
        }
        // backward edges j -> i, i < j, gathered 64 rows of i at a time so
        // each target word is written once
        for base in (0..n).step_by(64) {
            for j in base + 1..n {
                let mut w = 0u64;
                for i in base..(base + 64).min(j) {
                    if !bit(pair_index(n, i, j)) {
                        w |= 1 << (i - base);
                    }
                }
                bits[j * words + base / 64] |= w;
            }
        }
        Some(OutRows { words, bits })
    }

    #[inline]
    pub(crate) fn edge(&self, u: Vertex, v: Vertex) -> bool {
        (self.bits[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }
}

/// Disjoint union of `first` and `second` (first's vertices keep their labels,
/// second's are shifted by `first.n()`), with every cross edge directed from
/// `first` to `second`.
pub fn compose_forward(first: &Tournament, second: &Tournament) -> Result<Tournament> {
    if !first.is_explicit() || !second.is_explicit() {
        return Err(Error::UnsupportedStorage);
    }
    let n1 = first.n();
    Ok(Tournament::from_fn(n1 + second.n(), |i, j| match (i < n1, j < n1) {
        (true, true) => first.edge(i, j),
        (false, false) => second.edge(i - n1, j - n1),
        _ => true,
    }))
}

/// Number of position pairs `p < q` with `x_p -> x_q`.
pub fn forward_edges(t: &Tournament, ord: &Ordering) -> Result<u64> {
    ord.check_matches(t)?;
    let perm = ord.as_slice();
    let mut count = 0u64;
    for (p, &u) in perm.iter().enumerate() {
        count += perm[p + 1..].iter().filter(|&&v| t.edge(u, v)).count() as u64;
    }
    Ok(count)
}

/// Transitive sequence inside `subset`: take a vertex of maximum out-degree
/// (smallest id on ties), then recurse on its out-neighbourhood. The result
/// has at least `floor(log2 |subset|) + 1` vertices.
pub fn greedy_transitive(t: &Tournament, subset: &[Vertex]) -> Result<Vec<Vertex>> {
    if subset.is_empty() {
        return Err(Error::InvalidParameter("greedy_transitive needs a non-empty set".into()));
    }
    for &v in subset {
        t.check_vertex(v)?;
    }
    let mut current: Vec<Vertex> = subset.to_vec();
    current.sort_unstable();
    current.dedup();
    let mut chain = Vec::new();
    while !current.is_empty() {
        let mut best = (0usize, current[0]);
        for &v in &current {
            let d = current.iter().filter(|&&u| u != v && t.edge(v, u)).count();
            if d > best.0 {
                best = (d, v);
            }
        }
        let pick = best.1;
        chain.push(pick);
        current.retain(|&u| u != pick && t.edge(pick, u));
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_rows_agree_with_triangle() {
        for n in [1, 2, 63, 64, 65, 130] {
            let t = Tournament::random(n, n as u64);
            let rows = OutRows::build(&t).unwrap();
            for u in 0..n {
                for v in (0..n).filter(|&v| v != u) {
                    assert_eq!(rows.edge(u, v), t.edge(u, v), "n {n} pair ({u}, {v})");
                }
            }
        }
        assert!(OutRows::build(&Tournament::implicit_random(10, 1)).is_none());
    }

    #[test]
    fn transitive_four() {
        let t = Tournament::transitive(4);
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    assert_eq!(t.edge(u, v), u < v);
                }
            }
        }
    }

    #[test]
    fn c3chain_six() {
        let t = Tournament::c3chain(6).unwrap();
        for base in [0, 3] {
            assert!(t.edge(base, base + 1));
            assert!(t.edge(base + 1, base + 2));
            assert!(t.edge(base + 2, base));
        }
        for u in 0..3 {
            for v in 3..6 {
                assert!(t.edge(u, v));
            }
        }
        assert!(matches!(Tournament::c3chain(7), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn random_is_deterministic() {
        let a = Tournament::generate(Model::Random, 5, 77).unwrap();
        let b = Tournament::generate(Model::Random, 5, 77).unwrap();
        assert_eq!(a, b);
        let c = Tournament::generate(Model::Random, 40, 1).unwrap();
        let d = Tournament::generate(Model::Random, 40, 2).unwrap();
        assert_ne!(c, d);
    }

    #[test]
    fn orient_examples_and_errors() {
        let t3 = Tournament::transitive(3);
        assert_eq!(t3.orient(0, 2), Ok(true));
        let c3 = Tournament::c3chain(3).unwrap();
        assert_eq!(c3.orient(2, 0), Ok(true));
        assert_eq!(c3.orient(0, 2), Ok(false));
        assert_eq!(c3.orient(1, 1), Err(Error::SelfLoop(1)));
        assert_eq!(c3.orient(0, 3), Err(Error::InvalidVertex { vertex: 3, n: 3 }));
    }

    #[test]
    fn antisymmetry_all_models() {
        let ts = [
            Tournament::random(200, 3),
            Tournament::implicit_random(200, 3),
            Tournament::c3chain(198).unwrap(),
            Tournament::transitive(200),
        ];
        for t in &ts {
            for u in 0..t.n() {
                for v in 0..t.n() {
                    if u != v {
                        assert_ne!(t.edge(u, v), t.edge(v, u));
                    }
                }
            }
        }
        // sampled pairs on a large implicit tournament
        let big = Tournament::implicit_random(1_000_000, 9);
        let mut x = 12345u64;
        for _ in 0..10_000 {
            x = mix64(x);
            let u = (x % 1_000_000) as usize;
            let v = ((x >> 32) % 1_000_000) as usize;
            if u != v {
                assert_ne!(big.edge(u, v), big.edge(v, u));
            }
        }
    }

    #[test]
    fn implicit_random_is_roughly_fair() {
        let t = Tournament::implicit_random(400, 5);
        let forward = (0..400).flat_map(|i| (i + 1..400).map(move |j| (i, j))).filter(|&(i, j)| t.edge(i, j)).count();
        let total = pair_count(400) as f64;
        assert!((forward as f64 / total - 0.5).abs() < 0.01);
    }

    #[test]
    fn materialize_preserves_orientation() {
        let t = Tournament::implicit_random(60, 11);
        let m = t.materialize();
        assert!(m.is_explicit());
        for u in 0..60 {
            for v in 0..60 {
                if u != v {
                    assert_eq!(t.edge(u, v), m.edge(u, v));
                }
            }
        }
    }

    #[test]
    fn compose_examples() {
        let t = compose_forward(&Tournament::transitive(2), &Tournament::transitive(3)).unwrap();
        assert_eq!(t, Tournament::transitive(5));
        let c = Tournament::c3chain(3).unwrap();
        assert_eq!(compose_forward(&c, &c).unwrap(), Tournament::c3chain(6).unwrap());
        let imp = Tournament::implicit_random(3, 0);
        assert_eq!(compose_forward(&imp, &c), Err(Error::UnsupportedStorage));
    }

    #[test]
    fn forward_edges_examples() {
        let c3 = Tournament::c3chain(3).unwrap();
        // rotations of the cycle keep two edges forward, the reversed ones one
        for (perm, fwd) in
            [([0, 1, 2], 2), ([1, 2, 0], 2), ([2, 0, 1], 2), ([0, 2, 1], 1), ([1, 0, 2], 1), ([2, 1, 0], 1)]
        {
            let ord = Ordering::new(perm.to_vec()).unwrap();
            assert_eq!(forward_edges(&c3, &ord).unwrap(), fwd);
        }
        let t = Tournament::transitive(7);
        assert_eq!(forward_edges(&t, &Ordering::identity(7)).unwrap(), 21);
        let t3 = Tournament::transitive(3);
        let rev = Ordering::new(vec![2, 1, 0]).unwrap();
        assert_eq!(forward_edges(&t3, &rev).unwrap(), 0);
        assert!(matches!(forward_edges(&t3, &Ordering::identity(4)), Err(Error::InvalidOrdering(_))));
    }

    #[test]
    fn greedy_examples() {
        let t = Tournament::transitive(8);
        let all: Vec<_> = (0..8).collect();
        assert_eq!(greedy_transitive(&t, &all).unwrap(), all);
        let c3 = Tournament::c3chain(3).unwrap();
        assert_eq!(greedy_transitive(&c3, &[0, 1, 2]).unwrap().len(), 2);
        assert!(matches!(greedy_transitive(&c3, &[]), Err(Error::InvalidParameter(_))));
        for seed in 0..20 {
            let r = Tournament::random(16, seed);
            let all: Vec<_> = (0..16).collect();
            assert!(greedy_transitive(&r, &all).unwrap().len() >= 5);
        }
    }

    #[test]
    fn induced_and_relabel() {
        let c = Tournament::c3chain(6).unwrap();
        let sub = c.induced(&[3, 4, 5]).unwrap();
        assert_eq!(sub, Tournament::c3chain(3).unwrap());
        let r = Tournament::random(9, 4);
        let perm = [8, 2, 5, 0, 1, 7, 3, 6, 4];
        let rl = r.relabel(&perm).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                if a != b {
                    assert_eq!(rl.edge(a, b), r.edge(perm[a], perm[b]));
                }
            }
        }
        assert!(c.induced(&[1, 1]).is_err());
    }
}
