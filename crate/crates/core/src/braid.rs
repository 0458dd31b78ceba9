//! Braid words in the braid group B_n.
//!
//! A word is an ordered list of signed generator indices: letter `+i` is the
//! elementary crossing of strands i and i+1, `-i` its inverse. The text form
//! is whitespace-separated signed integers (`"1 -2 1"`), chosen for trivial
//! interop with scripts.

use std::fmt;

use crate::error::{Error, Result};

/// A word in B_n: `strands` = n, letters are signed generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    /// Build a word, checking every letter satisfies `1 <= |g| <= strands-1`.
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands < 1 {
            return Err(Error::Contract("a braid needs at least one strand".into()));
        }
        for (idx, &g) in letters.iter().enumerate() {
            if g == 0 {
                return Err(Error::Contract(format!(
                    "letter {} is zero; generators are numbered from 1",
                    idx + 1
                )));
            }
            if g.unsigned_abs() as usize >= strands {
                return Err(Error::Contract(format!(
                    "letter {} refers to generator {} but only {} strands exist",
                    idx + 1,
                    g,
                    strands
                )));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// The identity braid on `strands` strands.
    pub fn identity(strands: usize) -> Result<Self> {
        BraidWord::new(strands, Vec::new())
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Crossing count (word length).
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of letter signs: the writhe of the trace closure with all strands
    /// co-oriented (+1 per positive crossing).
    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|&g| g.signum() as i64).sum()
    }

    /// Group inverse: reversed order, flipped signs.
    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&g| -g).collect(),
        }
    }

    /// Concatenation `self * other`; both words must live in the same B_n.
    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::Contract(format!(
                "cannot concatenate words on {} and {} strands",
                self.strands, other.strands
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    /// The same word viewed in B_m for m >= n (trivial strands on the right).
    pub fn widen(&self, strands: usize) -> Result<BraidWord> {
        if strands < self.strands {
            return Err(Error::Contract(format!(
                "cannot widen a {}-strand word to {} strands",
                self.strands, strands
            )));
        }
        Ok(BraidWord {
            strands,
            letters: self.letters.clone(),
        })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
            first = false;
        }
        Ok(())
    }
}

/// Parse whitespace-separated signed generator indices.
///
/// With `strands` given, every letter must satisfy `|g| < strands`; without
/// it the strand count is inferred as `max|g| + 1` (1 for the empty word).
pub fn parse_braid(text: &str, strands: Option<usize>) -> Result<BraidWord> {
    let mut letters = Vec::new();
    for (idx, token) in text.split_whitespace().enumerate() {
        let position = idx + 1;
        let g: i32 = token.parse().map_err(|_| Error::Parse {
            position,
            token: token.to_string(),
            reason: "expected a signed integer".into(),
        })?;
        if g == 0 {
            return Err(Error::Parse {
                position,
                token: token.to_string(),
                reason: "zero is not a generator index".into(),
            });
        }
        if let Some(n) = strands {
            if g.unsigned_abs() as usize >= n {
                return Err(Error::Parse {
                    position,
                    token: token.to_string(),
                    reason: format!("generator out of range for {n} strands"),
                });
            }
        }
        letters.push(g);
    }
    let n = strands.unwrap_or_else(|| {
        letters
            .iter()
            .map(|g| g.unsigned_abs() as usize + 1)
            .max()
            .unwrap_or(1)
    });
    BraidWord::new(n, letters)
}

/// How a braid is closed into a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureKind {
    /// Each strand end joined to the matching start.
    Trace,
    /// Adjacent pairs capped top and bottom; needs an even strand count.
    Plat,
}

impl ClosureKind {
    /// Check the closure applies to a word on `strands` strands.
    pub fn validate(self, strands: usize) -> Result<()> {
        if self == ClosureKind::Plat && !strands.is_multiple_of(2) {
            return Err(Error::Contract(format!(
                "plat closure needs an even strand count, got {strands}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_explicit_strand_count() {
        let b = parse_braid("1 1 1", Some(2)).unwrap();
        assert_eq!(b.strands(), 2);
        assert_eq!(b.letters(), &[1, 1, 1]);
        assert_eq!(b.writhe(), 3);
    }

    #[test]
    fn infers_strand_count() {
        let b = parse_braid("1 -2 1", None).unwrap();
        assert_eq!(b.strands(), 3);
        assert_eq!(b.writhe(), 1);
    }

    #[test]
    fn empty_word_is_single_strand() {
        let b = parse_braid("", None).unwrap();
        assert_eq!(b.strands(), 1);
        assert!(b.is_empty());
        assert_eq!(b.writhe(), 0);
    }

    #[test]
    fn zero_token_is_a_parse_error() {
        match parse_braid("0", None) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_integer_token_reports_position() {
        match parse_braid("1 x 2", None) {
            Err(Error::Parse {
                position, token, ..
            }) => {
                assert_eq!(position, 2);
                assert_eq!(token, "x");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_generator_is_rejected() {
        assert!(matches!(
            parse_braid("3", Some(3)),
            Err(Error::Parse { position: 1, .. })
        ));
    }

    #[test]
    fn inverse_reverses_and_flips() {
        let b = parse_braid("1 2", None).unwrap();
        assert_eq!(b.inverse().letters(), &[-2, -1]);
        assert_eq!(b.inverse().strands(), 3);
    }

    #[test]
    fn concat_appends_and_checks_strands() {
        let a = parse_braid("1", Some(2)).unwrap();
        let b = parse_braid("-1", Some(2)).unwrap();
        assert_eq!(a.concat(&b).unwrap().letters(), &[1, -1]);

        let c = parse_braid("1", Some(3)).unwrap();
        assert!(a.concat(&c).is_err());
    }

    #[test]
    fn plat_needs_even_strands() {
        assert!(ClosureKind::Plat.validate(4).is_ok());
        assert!(ClosureKind::Plat.validate(3).is_err());
        assert!(ClosureKind::Trace.validate(3).is_ok());
    }

    fn braid_strategy() -> impl Strategy<Value = BraidWord> {
        (2usize..7).prop_flat_map(|n| {
            let letter = (1i32..n as i32).prop_flat_map(|g| prop_oneof![Just(g), Just(-g)]);
            proptest::collection::vec(letter, 0..12)
                .prop_map(move |letters| BraidWord::new(n, letters).unwrap())
        })
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(b in braid_strategy()) {
            let again = parse_braid(&b.to_string(), Some(b.strands())).unwrap();
            prop_assert_eq!(again, b);
        }

        #[test]
        fn writhe_of_inverse_negates(b in braid_strategy()) {
            prop_assert_eq!(b.inverse().writhe(), -b.writhe());
        }

        #[test]
        fn writhe_adds_under_concat(a in braid_strategy(), b in braid_strategy()) {
            if a.strands() == b.strands() {
                let ab = a.concat(&b).unwrap();
                prop_assert_eq!(ab.writhe(), a.writhe() + b.writhe());
            }
        }
    }
}
