use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An interval `[lo, hi]` of vertices, naming the uniserial module with
/// socle at `lo` and top at `hi`. The stacked form lists the composition
/// factors from the top down, so `5/4/3` is `[3, 5]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    lo: usize,
    hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Result<Self, Error> {
        if lo == 0 || lo > hi {
            return Err(Error::Parse(format!("[{lo},{hi}] is not an interval")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(self) -> usize {
        self.lo
    }

    pub fn hi(self) -> usize {
        self.hi
    }

    pub fn socle(self) -> usize {
        self.lo
    }

    pub fn top(self) -> usize {
        self.hi
    }

    pub fn len(self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, v: usize) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn stacked(self) -> String {
        (self.lo..=self.hi)
            .rev()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("/")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Interval {
    type Err = Error;

    /// Accepts `[a,b]`, the stacked form `b/.../a`, or a bare vertex `v`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad vertex '{x}' in '{s}'")))
        };
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected [a,b], got '{s}'")))?;
            return Interval::new(num(a)?, num(b)?);
        }
        let parts: Vec<usize> = t.split('/').map(num).collect::<Result<_, _>>()?;
        for w in parts.windows(2) {
            if w[1] + 1 != w[0] {
                return Err(Error::Parse(format!(
                    "stacked form '{s}' must list consecutive vertices from the top down"
                )));
            }
        }
        let hi = parts[0];
        let lo = *parts.last().expect("split yields at least one part");
        Interval::new(lo, hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite multiset of indecomposables, kept sorted; the empty multiset is
/// the zero object.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Obj(Vec<Interval>);

impl Obj {
    pub fn new(mut parts: Vec<Interval>) -> Self {
        parts.sort();
        Obj(parts)
    }

    pub fn zero() -> Self {
        Obj(Vec::new())
    }

    pub fn single(x: Interval) -> Self {
        Obj(vec![x])
    }

    pub fn parts(&self) -> &[Interval] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Interval> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn oplus(&self, other: &Obj) -> Obj {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Obj::new(v)
    }

    pub fn multiplicity(&self, x: Interval) -> usize {
        self.0.iter().filter(|&&y| y == x).count()
    }

    /// Distinct summands in order.
    pub fn support(&self) -> Vec<Interval> {
        let mut v = self.0.clone();
        v.dedup();
        v
    }

    pub fn total_dim(&self) -> usize {
        self.0.iter().map(|x| x.len()).sum()
    }

    /// The summands not satisfying `keep` are dropped.
    pub fn filter(&self, keep: impl Fn(Interval) -> bool) -> Obj {
        Obj(self.0.iter().copied().filter(|&x| keep(x)).collect())
    }
}

impl FromIterator<Interval> for Obj {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        Obj::new(iter.into_iter().collect())
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Obj {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Obj {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Obj::new(Vec::<Interval>::deserialize(d)?))
    }
}
