//! `PTv1` text format.
//!
//! ```text
//! PTv1 <n>
//! <row 0: n-1 chars>
//! ...
//! <row n-2: 1 char>
//! ```
//!
//! Character `j - i - 1` of row `i` is `1` iff `i -> j`. Every line ends in `\n`.

use crate::error::{Error, Result};
use crate::tournament::{pair_count, Tournament};

const MAGIC: &str = "PTv1";

pub fn serialize(t: &Tournament) -> Result<String> {
    if !t.is_explicit() {
        return Err(Error::UnsupportedStorage);
    }
    let n = t.n();
    let mut out = String::with_capacity(pair_count(n) + 2 * n + 16);
    out.push_str(MAGIC);
    out.push(' ');
    out.push_str(&n.to_string());
    out.push('\n');
    for i in 0..n.saturating_sub(1) {
        for j in i + 1..n {
            out.push(if t.edge(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn parse(text: &str) -> Result<Tournament> {
    let (t, rest) = parse_prefix(text)?;
    if let Some((offset, line)) = rest.lines().enumerate().find(|(_, l)| !l.is_empty()) {
        return Err(Error::Parse {
            line: t.n().max(1) + 1 + offset,
            message: format!("unexpected trailing content '{}'", truncate(line)),
        });
    }
    Ok(t)
}

/// Parse a tournament from the start of `text`, returning the unread rest.
pub(crate) fn parse_prefix(text: &str) -> Result<(Tournament, &str)> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let (header, mut rest) = split_line(text).ok_or_else(|| err(1, "missing header".into()))?;
    let n = header
        .strip_prefix(MAGIC)
        .and_then(|s| s.strip_prefix(' '))
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| err(1, format!("expected 'PTv1 <n>' with n >= 1, got '{}'", truncate(header))))?;

    let pairs = pair_count(n);
    let mut bits = vec![0u64; pairs.div_ceil(64)];
    let mut idx = 0usize;
    for i in 0..n - 1 {
        let line_no = i + 2;
        let (row, next) = split_line(rest).ok_or_else(|| err(line_no, format!("missing row {i} (or its newline)")))?;
        rest = next;
        let expected = n - 1 - i;
        if row.len() != expected {
            return Err(err(line_no, format!("row {i} has length {}, expected {expected}", row.len())));
        }
        for (col, c) in row.bytes().enumerate() {
            match c {
                b'1' => bits[idx / 64] |= 1 << (idx % 64),
                b'0' => {}
                _ => return Err(err(line_no, format!("invalid character {:?} in column {}", c as char, i + 1 + col))),
            }
            idx += 1;
        }
    }
    Ok((Tournament::from_bits(n, bits), rest))
}

fn split_line(text: &str) -> Option<(&str, &str)> {
    text.find('\n').map(|p| (&text[..p], &text[p + 1..]))
}

fn truncate(s: &str) -> String {
    s.chars().take(40).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(serialize(&Tournament::transitive(3)).unwrap(), "PTv1 3\n11\n1\n");
        assert_eq!(serialize(&Tournament::c3chain(3).unwrap()).unwrap(), "PTv1 3\n10\n1\n");
        assert_eq!(serialize(&Tournament::transitive(1)).unwrap(), "PTv1 1\n");
        assert_eq!(serialize(&Tournament::implicit_random(3, 0)), Err(Error::UnsupportedStorage));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let line_of = |text: &str| match parse(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line_of(""), 1);
        assert_eq!(line_of("PTv2 3\n11\n1\n"), 1);
        assert_eq!(line_of("PTv1 0\n"), 1);
        assert_eq!(line_of("PTv1 3\n111\n1\n"), 2);
        assert_eq!(line_of("PTv1 3\n11\n2\n"), 3);
        assert_eq!(line_of("PTv1 3\n11\n1"), 3);
        assert_eq!(line_of("PTv1 3\n11\n"), 3);
        assert_eq!(line_of("PTv1 3\n11\n1\n0\n"), 4);
    }

    #[test]
    fn random_round_trip() {
        let t = Tournament::random(10, 42);
        assert_eq!(parse(&serialize(&t).unwrap()).unwrap(), t);
    }

    proptest! {
        #[test]
        fn round_trip_is_identity(n in 1usize..40, seed in any::<u64>()) {
            let t = Tournament::random(n, seed);
            let text = serialize(&t).unwrap();
            let back = parse(&text).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(serialize(&back).unwrap(), text);
        }
    }
}
