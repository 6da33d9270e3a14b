//! Truncation sets: finite sets of positive integers closed under division.
//!
//! A truncation set indexes the coordinates of a big Witt vector. The empty
//! set is allowed. Division `S/n = { s : ns ∈ S }` and the p-typical length
//! bookkeeping live here because every other module needs them.

use crate::{is_prime, Error, Result};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncationSet {
    elements: Vec<u64>,
}

impl TruncationSet {
    /// Validates divisor closure and rejects bad input instead of silently
    /// closing up; silent closure would hide caller bugs.
    pub fn new(mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Domain(format!("duplicate element {} in truncation set", w[0])));
            }
        }
        if elements.first() == Some(&0) {
            return Err(Error::Domain("truncation set elements must be positive".into()));
        }
        let set = TruncationSet { elements };
        for &s in &set.elements {
            let mut d = 1u64;
            while d * d <= s {
                if s % d == 0 {
                    for q in [d, s / d] {
                        if !set.contains(q) {
                            return Err(Error::Domain(format!(
                                "truncation set is not closed under division: {s} is present but its divisor {q} is not"
                            )));
                        }
                    }
                }
                d += 1;
            }
        }
        Ok(set)
    }

    /// The interval `{1, ..., m}`; `m = 0` yields the empty set.
    pub fn interval(m: u64) -> Self {
        TruncationSet { elements: (1..=m).collect() }
    }

    /// The p-typical set `{1, p, ..., p^(t-1)}`.
    pub fn p_typical(p: u64, t: u32) -> Self {
        let mut elements = Vec::with_capacity(t as usize);
        let mut x = 1u64;
        for v in 0..t {
            elements.push(x);
            if v + 1 < t {
                x = x.checked_mul(p).expect("p-typical element overflow");
            }
        }
        TruncationSet { elements }
    }

    /// `S/n = { s : ns ∈ S }`, itself divisor-closed.
    pub fn divide(&self, n: u64) -> TruncationSet {
        assert!(n >= 1, "divide requires n >= 1");
        let elements = self
            .elements
            .iter()
            .filter_map(|&s| if s % n == 0 { Some(s / n) } else { None })
            .collect();
        TruncationSet { elements }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.elements.binary_search(&s).is_ok()
    }

    pub fn index_of(&self, s: u64) -> Option<usize> {
        self.elements.binary_search(&s).ok()
    }

    pub fn is_subset_of(&self, other: &TruncationSet) -> bool {
        self.elements.iter().all(|&s| other.contains(s))
    }

    /// For each `j ∈ S` with `p ∤ j`, the length `t_j = #{ v ≥ 0 : j·p^v ∈ S }`
    /// of the p-typical chain through `j`. The lengths partition `S`, so they
    /// sum to `|S|`.
    pub fn p_typical_lengths(&self, p: u64) -> Result<Vec<(u64, u32)>> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let mut out = Vec::new();
        let mut total = 0usize;
        for &j in &self.elements {
            if j % p == 0 {
                continue;
            }
            let mut t = 0u32;
            let mut x = j;
            while self.contains(x) {
                t += 1;
                match x.checked_mul(p) {
                    Some(next) => x = next,
                    None => break,
                }
            }
            total += t as usize;
            out.push((j, t));
        }
        debug_assert_eq!(total, self.len(), "p-typical lengths must partition the set");
        Ok(out)
    }
}

impl fmt::Display for TruncationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for TruncationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts the CLI text forms `1..m` (interval) and `{a,b,c}` / `{}`.
impl FromStr for TruncationSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((lo, hi)) = s.split_once("..") {
            let lo: u64 = lo
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("malformed truncation set interval '{s}'")))?;
            let hi: u64 = hi
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("malformed truncation set interval '{s}'")))?;
            if lo != 1 {
                return Err(Error::Usage(format!("interval form must start at 1, got '{s}'")));
            }
            return Ok(TruncationSet::interval(hi));
        }
        let inner = s
            .strip_prefix('{')
            .and_then(|rest| rest.strip_suffix('}'))
            .ok_or_else(|| Error::Usage(format!("malformed truncation set '{s}', expected '1..m' or '{{a,b,c}}'")))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return TruncationSet::new(Vec::new());
        }
        let elements = inner
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Usage(format!("malformed truncation set element '{tok}'")))
            })
            .collect::<Result<Vec<u64>>>()?;
        TruncationSet::new(elements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn interval_examples() {
        assert_eq!(TruncationSet::interval(4).elements(), &[1, 2, 3, 4]);
        assert_eq!(TruncationSet::interval(1).elements(), &[1]);
        assert!(TruncationSet::interval(0).is_empty());
    }

    #[test]
    fn divide_examples() {
        let s8 = TruncationSet::interval(8);
        assert_eq!(s8.divide(2).elements(), &[1, 2, 3, 4]);
        assert_eq!(s8.divide(3).elements(), &[1, 2]);
        assert!(TruncationSet::interval(4).divide(5).is_empty());
    }

    #[test]
    fn p_typical_length_examples() {
        let s = TruncationSet::interval(4);
        assert_eq!(s.p_typical_lengths(2).unwrap(), vec![(1, 3), (3, 1)]);
        let s = TruncationSet::interval(3);
        assert_eq!(s.p_typical_lengths(3).unwrap(), vec![(1, 2), (2, 1)]);
        let s = TruncationSet::interval(1);
        assert_eq!(s.p_typical_lengths(5).unwrap(), vec![(1, 1)]);
    }

    #[test]
    fn p_typical_lengths_rejects_composite() {
        assert!(TruncationSet::interval(4).p_typical_lengths(4).is_err());
    }

    #[test]
    fn constructor_rejects_open_sets() {
        assert!(TruncationSet::new(vec![2]).is_err());
        assert!(TruncationSet::new(vec![1, 4]).is_err());
        assert!(TruncationSet::new(vec![1, 2, 2]).is_err());
        assert!(TruncationSet::new(vec![0, 1]).is_err());
        assert!(TruncationSet::new(vec![1, 2, 3, 6]).is_ok());
        assert!(TruncationSet::new(vec![]).is_ok());
    }

    #[test]
    fn parse_text_forms() {
        assert_eq!("1..5".parse::<TruncationSet>().unwrap(), TruncationSet::interval(5));
        assert_eq!(
            "{1,2,4}".parse::<TruncationSet>().unwrap().elements(),
            &[1, 2, 4]
        );
        assert_eq!("{}".parse::<TruncationSet>().unwrap(), TruncationSet::interval(0));
        assert!("2..5".parse::<TruncationSet>().is_err());
        assert!("{2,4}".parse::<TruncationSet>().is_err());
        assert!("1-5".parse::<TruncationSet>().is_err());
    }

    proptest! {
        #[test]
        fn divide_by_one_is_identity(m in 0u64..40) {
            let s = TruncationSet::interval(m);
            prop_assert_eq!(s.divide(1), s);
        }

        #[test]
        fn divide_composes(m in 0u64..60, a in 1u64..6, b in 1u64..6) {
            let s = TruncationSet::interval(m);
            prop_assert_eq!(s.divide(a).divide(b), s.divide(a * b));
            prop_assert!(s.divide(a).is_subset_of(&s));
        }

        #[test]
        fn p_typical_lengths_partition(m in 0u64..60, pidx in 0usize..3) {
            let p = [2u64, 3, 5][pidx];
            let s = TruncationSet::interval(m);
            let total: u64 = s.p_typical_lengths(p).unwrap().iter().map(|&(_, t)| t as u64).sum();
            prop_assert_eq!(total, s.len() as u64);
        }
    }
}
