//! Braid words and their closures, a convenient source of oriented diagrams.
//!
//! Text form: `<strands>: <letters>`, letters separated by spaces or commas.
//! `s2` is the positive generator at positions 2,3, `S2` its inverse and `t2`
//! the double point there. Example: `3: s1 S2 t1`.

use std::collections::BTreeMap;
use std::fmt;

use super::{CrossingKind, Diagram};
use crate::error::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BraidLetter {
    Sigma(usize),
    SigmaInv(usize),
    Tau(usize),
}

impl BraidLetter {
    pub fn position(&self) -> usize {
        match self {
            BraidLetter::Sigma(i) | BraidLetter::SigmaInv(i) | BraidLetter::Tau(i) => *i,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braid {
    pub strands: usize,
    pub word: Vec<BraidLetter>,
}

impl Braid {
    pub fn new(strands: usize, word: Vec<BraidLetter>) -> Result<Braid, ParseError> {
        if strands == 0 {
            return Err(ParseError::Braid(
                "a braid needs at least one strand".into(),
            ));
        }
        for l in &word {
            let i = l.position();
            if i == 0 || i >= strands {
                return Err(ParseError::Braid(format!(
                    "generator index {i} invalid on {strands} strands"
                )));
            }
        }
        Ok(Braid { strands, word })
    }

    pub fn parse(text: &str) -> Result<Braid, ParseError> {
        let (n, rest) = text
            .split_once(':')
            .ok_or_else(|| ParseError::Braid("expected '<strands>: <letters>'".into()))?;
        let strands: usize = n
            .trim()
            .parse()
            .map_err(|_| ParseError::Braid(format!("bad strand count '{}'", n.trim())))?;
        if strands > 64 {
            return Err(ParseError::Braid(format!(
                "{strands} strands is more than supported"
            )));
        }
        let mut word = Vec::new();
        for tok in rest
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let mut chars = tok.chars();
            let head = chars.next().unwrap();
            let i: usize = chars
                .as_str()
                .parse()
                .map_err(|_| ParseError::Braid(format!("bad letter '{tok}'")))?;
            word.push(match head {
                's' => BraidLetter::Sigma(i),
                'S' => BraidLetter::SigmaInv(i),
                't' => BraidLetter::Tau(i),
                _ => return Err(ParseError::Braid(format!("bad letter '{tok}'"))),
            });
        }
        Braid::new(strands, word)
    }

    /// Closure as an oriented diagram, strands running upwards.
    pub fn closure(&self) -> Diagram {
        let n = self.strands;
        let mut cur: Vec<u64> = (1..=n as u64).collect();
        let mut next = n as u64 + 1;
        let mut pd = Vec::with_capacity(self.word.len());
        let mut kinds = Vec::with_capacity(self.word.len());
        let mut incoming = Vec::with_capacity(self.word.len());
        for l in &self.word {
            let i = l.position() - 1;
            let (ei, ej) = (cur[i], cur[i + 1]);
            let (fi, fj) = (next, next + 1);
            next += 2;
            let (tuple, inc, kind) = match l {
                BraidLetter::Sigma(_) => (
                    [ej, fj, fi, ei],
                    [true, false, false, true],
                    CrossingKind::Ordinary,
                ),
                BraidLetter::SigmaInv(_) => (
                    [ei, ej, fj, fi],
                    [true, true, false, false],
                    CrossingKind::Ordinary,
                ),
                BraidLetter::Tau(_) => (
                    [ei, ej, fj, fi],
                    [true, true, false, false],
                    CrossingKind::Singular,
                ),
            };
            pd.push(tuple);
            incoming.push(inc);
            kinds.push(kind);
            cur[i] = fi;
            cur[i + 1] = fj;
        }
        // close up: each top label becomes the bottom label of its position
        let mut rename: BTreeMap<u64, u64> = BTreeMap::new();
        let mut free_loops = 0;
        for (p, top) in cur.iter().enumerate() {
            if *top == p as u64 + 1 {
                free_loops += 1;
            } else {
                rename.insert(*top, p as u64 + 1);
            }
        }
        for t in pd.iter_mut() {
            for v in t.iter_mut() {
                if let Some(b) = rename.get(v) {
                    *v = *b;
                }
            }
        }
        // compact labels, keeping their order
        let mut used: Vec<u64> = pd.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let compact: BTreeMap<u64, u64> = used
            .iter()
            .enumerate()
            .map(|(k, v)| (*v, k as u64 + 1))
            .collect();
        for t in pd.iter_mut() {
            for v in t.iter_mut() {
                *v = compact[v];
            }
        }
        Diagram::with_orientation(Some(self.to_string()), pd, kinds, free_loops, incoming)
            .expect("braid closures are consistently oriented")
    }
}

impl fmt::Display for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for l in &self.word {
            match l {
                BraidLetter::Sigma(i) => write!(f, " s{i}")?,
                BraidLetter::SigmaInv(i) => write!(f, " S{i}")?,
                BraidLetter::Tau(i) => write!(f, " t{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let b = Braid::parse("3: s1 S2, t1").unwrap();
        assert_eq!(
            b.word,
            vec![
                BraidLetter::Sigma(1),
                BraidLetter::SigmaInv(2),
                BraidLetter::Tau(1)
            ]
        );
        assert_eq!(Braid::parse(&b.to_string()).unwrap(), b);
        assert!(Braid::parse("2: s2").is_err());
        assert!(Braid::parse("s1").is_err());
        assert!(Braid::parse("2: x1").is_err());
        assert!(Braid::parse("0:").is_err());
    }

    #[test]
    fn closure_signs_follow_letters() {
        let d = Braid::parse("3: s1 S2 t1 s2").unwrap().closure();
        assert_eq!(d.crossing_sign(0).unwrap(), 1);
        assert_eq!(d.crossing_sign(1).unwrap(), -1);
        assert!(d.crossing_sign(2).is_err());
        assert_eq!(d.crossing_sign(3).unwrap(), 1);
    }

    #[test]
    fn closure_orientation_survives_reparse() {
        for w in [
            "2: s1 s1 s1",
            "3: s1 S2 s1 S2",
            "2: t1",
            "2: S1 t1",
            "3: s1 s2 t1",
            "4: s1 s3",
            "3: s1",
        ] {
            let d = Braid::parse(w).unwrap().closure();
            let back = Diagram::from_json(&d.to_json()).unwrap();
            assert_eq!(back, d, "{w}");
        }
    }

    #[test]
    fn closure_components() {
        assert_eq!(Braid::parse("2: s1 s1").unwrap().closure().components(), 2);
        assert_eq!(
            Braid::parse("2: s1 s1 s1").unwrap().closure().components(),
            1
        );
        let loops = Braid::parse("3: s1").unwrap().closure();
        assert_eq!(loops.free_loops(), 1);
        assert_eq!(loops.components(), 2);
        assert_eq!(
            Braid::parse("2: t1").unwrap().closure().pd(),
            &[[1, 2, 2, 1]]
        );
    }
}
