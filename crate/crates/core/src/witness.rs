//! Power-path certificates and their verifier.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tournament::{Tournament, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `v_i -> v_j` for all `i < j <= i + k`.
    Plain,
    /// Plain, plus `v_a -> v_b` whenever `a < b` and `b / k <= a / k + 1`.
    BlockTransitive,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Mode::Plain),
            "block_transitive" | "block-transitive" | "block" => Ok(Mode::BlockTransitive),
            other => Err(Error::InvalidParameter(format!("unknown witness mode '{other}'"))),
        }
    }
}

/// `k` plus a vertex sequence claimed to span the `k`-th power of a path.
/// Field order matches the JSON line format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerPathWitness {
    pub k: usize,
    pub mode: Mode,
    pub vertices: Vec<Vertex>,
}

impl PowerPathWitness {
    pub fn new(k: usize, mode: Mode, vertices: Vec<Vertex>) -> Self {
        PowerPathWitness { k, mode, vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn verify(&self, t: &Tournament) -> Result<bool> {
        verify_power_path(t, &self.vertices, self.k, self.mode)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        serde_json::from_str(line.trim()).map_err(|e| Error::Parse { line: 1, message: e.to_string() })
    }
}

/// `true` iff `seq` spans the `k`-th power of a directed path in `t` (with
/// the extra block edges in block-transitive mode). Repeated vertices make
/// the answer `false`.
pub fn verify_power_path(t: &Tournament, seq: &[Vertex], k: usize, mode: Mode) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidParameter("power order k must be at least 1".into()));
    }
    for &v in seq {
        t.check_vertex(v)?;
    }
    let mut seen = vec![false; t.n()];
    for &v in seq {
        if std::mem::replace(&mut seen[v], true) {
            return Ok(false);
        }
    }
    for a in 0..seq.len() {
        let reach = match mode {
            // b - a <= k implies b / k <= a / k + 1, so block mode covers plain
            Mode::Plain => (a + k).min(seq.len() - 1),
            Mode::BlockTransitive => ((a / k + 2) * k - 1).min(seq.len() - 1),
        };
        for b in a + 1..=reach {
            if !t.edge(seq[a], seq[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::Tournament;

    #[test]
    fn examples() {
        let t = Tournament::transitive(5);
        assert!(verify_power_path(&t, &[0, 1, 2, 3, 4], 3, Mode::Plain).unwrap());
        let c3 = Tournament::c3chain(3).unwrap();
        assert!(!verify_power_path(&c3, &[0, 1, 2], 2, Mode::Plain).unwrap());
        assert!(verify_power_path(&c3, &[0, 1, 2], 1, Mode::Plain).unwrap());
        assert!(!verify_power_path(&t, &[0, 1, 1], 1, Mode::Plain).unwrap());
        assert!(verify_power_path(&t, &[], 2, Mode::Plain).unwrap());
        assert!(verify_power_path(&t, &[0, 9], 1, Mode::Plain).is_err());
        assert!(verify_power_path(&t, &[0], 0, Mode::Plain).is_err());
    }

    #[test]
    fn block_mode_needs_edges_beyond_k() {
        // sequence 0..4 with k = 2: blocks {0,1},{2,3},{4}; block mode also needs 0 -> 3
        let t = Tournament::from_fn(5, |i, j| !(i == 0 && j == 3));
        let seq = [0, 1, 2, 3, 4];
        assert!(verify_power_path(&t, &seq, 2, Mode::Plain).unwrap());
        assert!(!verify_power_path(&t, &seq, 2, Mode::BlockTransitive).unwrap());
        // 1 -> 4 and 0 -> 4 are required by neither mode
        let t2 = Tournament::from_fn(5, |i, j| !(j == 4 && i <= 1));
        assert!(verify_power_path(&t2, &seq, 2, Mode::Plain).unwrap());
        assert!(verify_power_path(&t2, &seq, 2, Mode::BlockTransitive).unwrap());
        let t4 = Tournament::from_fn(6, |i, j| !(i == 0 && j == 4));
        assert!(verify_power_path(&t4, &[0, 1, 2, 3, 4, 5], 2, Mode::BlockTransitive).unwrap());
    }

    #[test]
    fn json_line_format() {
        let w = PowerPathWitness::new(2, Mode::Plain, vec![3, 1, 4]);
        assert_eq!(w.to_json_line(), r#"{"k":2,"mode":"plain","vertices":[3,1,4]}"#);
        assert_eq!(PowerPathWitness::from_json_line(&w.to_json_line()).unwrap(), w);
        let b = PowerPathWitness::new(3, Mode::BlockTransitive, vec![]);
        assert_eq!(b.to_json_line(), r#"{"k":3,"mode":"block_transitive","vertices":[]}"#);
        assert!(PowerPathWitness::from_json_line("{\"k\":2}").is_err());
    }
}
