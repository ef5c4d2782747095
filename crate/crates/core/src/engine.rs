//! Psi-class intersection numbers `<tau_{d_1} ... tau_{d_n}>_g` by string,
//! dilaton and Virasoro recursion over a shared memo table.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::RwLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{double_factorial, int, one, parse_rational, ratio, zero, Rational};

pub const CACHE_HEADER: &str = "taukappa-cache v1";

/// Canonical bracket key: genus plus insertions sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TauBracket {
    genus: u32,
    insertions: Vec<u32>,
}

impl TauBracket {
    pub fn new(genus: u32, d: &[u32]) -> Self {
        let mut insertions = d.to_vec();
        insertions.sort_unstable_by(|a, b| b.cmp(a));
        TauBracket { genus, insertions }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn insertions(&self) -> &[u32] {
        &self.insertions
    }

    pub fn n(&self) -> usize {
        self.insertions.len()
    }

    pub fn dimension_ok(&self) -> bool {
        let sum: i64 = self.insertions.iter().map(|&x| x as i64).sum();
        sum == 3 * self.genus as i64 - 3 + self.n() as i64
    }

    pub fn is_stable(&self) -> bool {
        2 * self.genus as i64 - 2 + self.n() as i64 > 0
    }
}

impl fmt::Display for TauBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.insertions.iter().map(|x| x.to_string()).collect();
        write!(f, "{};{}", self.genus, d.join(","))
    }
}

/// The genus forced by `3g - 3 + n = sum(d)`, if it is a non-negative integer.
pub fn infer_genus(d: &[u32]) -> Option<u32> {
    let s: i64 = d.iter().map(|&x| x as i64).sum::<i64>() + 3 - d.len() as i64;
    (s >= 0 && s % 3 == 0).then_some((s / 3) as u32)
}

/// `phi(g) = <tau_{3g-2}>_g`, from `phi(g) = phi(g-1) / (24 g)` and `phi(0) = 1`.
pub fn phi(g: u32) -> Rational {
    (1..=g as i64).fold(one(), |acc, k| acc / int(24 * k))
}

/// Genus-0 brackets through the string equation alone.
pub fn genus0_oracle(d: &[u32]) -> Result<Rational> {
    if d.is_empty() || infer_genus(d) != Some(0) {
        return Err(Error::NotGenusZero(d.to_vec()));
    }
    fn rec(d: Vec<u32>, memo: &mut HashMap<Vec<u32>, Rational>) -> Rational {
        if d.len() == 3 {
            return if d.iter().all(|&x| x == 0) { one() } else { zero() };
        }
        if let Some(v) = memo.get(&d) {
            return v.clone();
        }
        // sum(d) = n - 3 < n, so a zero is always present here
        let pos = d.iter().rposition(|&x| x == 0).expect("genus 0 bracket has a zero");
        let mut rest = d.clone();
        rest.remove(pos);
        let mut total = zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut r = rest.clone();
                r[j] -= 1;
                r.sort_unstable_by(|a, b| b.cmp(a));
                total += rec(r, memo);
            }
        }
        memo.insert(d, total.clone());
        total
    }
    let mut key = d.to_vec();
    key.sort_unstable_by(|a, b| b.cmp(a));
    Ok(rec(key, &mut HashMap::new()))
}

/// Idempotent map from canonical brackets to values.
#[derive(Default)]
pub struct MemoTable {
    map: RwLock<HashMap<TauBracket, Rational>>,
}

impl MemoTable {
    pub fn get(&self, key: &TauBracket) -> Option<Rational> {
        self.map.read().unwrap().get(key).cloned()
    }

    /// Inserting a known key with a different value is an integrity error.
    pub fn insert(&self, key: TauBracket, value: Rational) -> Result<()> {
        let mut map = self.map.write().unwrap();
        if let Some(old) = map.get(&key) {
            if *old != value {
                return Err(Error::MemoConflict {
                    key: key.to_string(),
                    stored: old.to_string(),
                    new: value.to_string(),
                });
            }
            return Ok(());
        }
        map.insert(key, value);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Snapshot sorted by key.
    pub fn entries(&self) -> Vec<(TauBracket, Rational)> {
        let mut v: Vec<_> = self
            .map
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

pub struct IntersectionEngine {
    memo: MemoTable,
}

impl Default for IntersectionEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl IntersectionEngine {
    pub fn new() -> Self {
        let memo = MemoTable::default();
        memo.insert(TauBracket::new(0, &[0, 0, 0]), one()).unwrap();
        memo.insert(TauBracket::new(1, &[1]), ratio(1, 24)).unwrap();
        IntersectionEngine { memo }
    }

    pub fn memo(&self) -> &MemoTable {
        &self.memo
    }

    /// `<tau_{d_1} ... tau_{d_n}>_g`; zero off the dimension constraint or when unstable.
    pub fn tau(&self, g: u32, d: &[u32]) -> Rational {
        self.bracket(&TauBracket::new(g, d))
    }

    /// Same as [`tau`](Self::tau) with the genus read off the dimension constraint.
    pub fn tau_auto(&self, d: &[u32]) -> Rational {
        match infer_genus(d) {
            Some(g) => self.tau(g, d),
            None => zero(),
        }
    }

    pub fn bracket(&self, key: &TauBracket) -> Rational {
        if key.n() == 0 || !key.dimension_ok() || !key.is_stable() {
            return zero();
        }
        if let Some(v) = self.memo.get(key) {
            return v;
        }
        let v = self.reduce(key);
        if let Err(e) = self.memo.insert(key.clone(), v.clone()) {
            panic!("{e}");
        }
        v
    }

    fn reduce(&self, key: &TauBracket) -> Rational {
        let g = key.genus;
        let d = &key.insertions;
        let n = d.len() as i64;

        // string
        if let Some(pos) = d.iter().position(|&x| x == 0) {
            let mut rest = d.clone();
            rest.remove(pos);
            let mut total = zero();
            for j in 0..rest.len() {
                if rest[j] > 0 {
                    let mut r = rest.clone();
                    r[j] -= 1;
                    total += self.tau(g, &r);
                }
            }
            return total;
        }

        // dilaton
        if let Some(pos) = d.iter().position(|&x| x == 1) {
            if 2 * g as i64 - 2 + n - 1 > 0 {
                let mut rest = d.clone();
                rest.remove(pos);
                return int(2 * g as i64 - 2 + n - 1) * self.tau(g, &rest);
            }
        }

        // Virasoro L_k with d_max = k + 1
        let k = d[0] as i64 - 1;
        let rest: Vec<u32> = d[1..].to_vec();
        let mut total = zero();

        for j in 0..rest.len() {
            let dj = rest[j] as i64;
            let c = Rational::new(double_factorial(2 * k + 2 * dj + 1), double_factorial(2 * dj - 1));
            let mut r = rest.clone();
            r[j] += k as u32;
            total += c * self.tau(g, &r);
        }

        let m = rest.len();
        for a in 0..k {
            let b = k - 1 - a;
            let half = Rational::new(double_factorial(2 * a + 1) * double_factorial(2 * b + 1), 2.into());

            let mut r = rest.clone();
            r.push(a as u32);
            r.push(b as u32);
            if g >= 1 {
                total += &half * self.tau(g - 1, &r);
            }

            for mask in 0u64..(1u64 << m) {
                let mut left = vec![a as u32];
                let mut right = vec![b as u32];
                for (i, &x) in rest.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        left.push(x);
                    } else {
                        right.push(x);
                    }
                }
                let l = self.tau_auto(&left);
                if l.is_zero() {
                    continue;
                }
                total += &half * l * self.tau_auto(&right);
            }
        }

        total / Rational::from_integer(double_factorial(2 * k + 3))
    }

    /// Merges cache lines into the memo table. A conflicting value is fatal.
    pub fn read_cache<R: Read>(&self, reader: R) -> Result<usize> {
        let mut lines = BufReader::new(reader).lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == CACHE_HEADER => {}
            Some(Ok(h)) => return Err(Error::Cache(format!("bad header {h:?}"))),
            Some(Err(e)) => return Err(e.into()),
            None => return Err(Error::Cache("empty file".into())),
        }
        let mut count = 0;
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let key_value = parse_cache_line(line)
                .map_err(|e| Error::Cache(format!("line {}: {e}", lineno + 2)))?;
            self.memo.insert(key_value.0, key_value.1)?;
            count += 1;
        }
        Ok(count)
    }

    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CACHE_HEADER}")?;
        for (k, v) in self.memo.entries() {
            writeln!(w, "{k};{v}")?;
        }
        Ok(())
    }

    pub fn load_cache(&self, path: &Path) -> Result<usize> {
        self.read_cache(std::fs::File::open(path)?)
    }

    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_cache(&mut buf)?;
        std::fs::write(path, buf)?;
        Ok(())
    }

    /// Recomputes every memo entry in a fresh engine; returns the keys that disagree.
    pub fn audit(&self) -> Vec<TauBracket> {
        let fresh = IntersectionEngine::new();
        self.memo
            .entries()
            .into_iter()
            .filter(|(k, v)| fresh.bracket(k) != *v)
            .map(|(k, _)| k)
            .collect()
    }
}

fn parse_cache_line(line: &str) -> std::result::Result<(TauBracket, Rational), String> {
    let parts: Vec<&str> = line.split(';').collect();
    if parts.len() != 3 {
        return Err(format!("expected g;d;value, got {line:?}"));
    }
    let g: u32 = parts[0].parse().map_err(|_| format!("bad genus {:?}", parts[0]))?;
    let d: Vec<u32> = parts[1]
        .split(',')
        .map(|x| x.parse::<u32>().map_err(|_| format!("bad index {x:?}")))
        .collect::<std::result::Result<_, _>>()?;
    if d.windows(2).any(|w| w[0] < w[1]) {
        return Err(format!("insertions not sorted descending: {:?}", parts[1]));
    }
    let key = TauBracket::new(g, &d);
    if !key.dimension_ok() || !key.is_stable() {
        return Err(format!("bracket {key} violates dimension or stability"));
    }
    let v = parse_rational(parts[2]).map_err(|e| e.to_string())?;
    Ok((key, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_and_small_values() {
        let e = IntersectionEngine::new();
        assert_eq!(e.tau(0, &[0, 0, 0]), one());
        assert_eq!(e.tau(1, &[1]), ratio(1, 24));
        assert_eq!(e.tau(0, &[1, 0, 0]), zero());
        assert_eq!(e.tau(0, &[0, 0, 0, 1]), one());
        assert_eq!(e.tau(2, &[4]), ratio(1, 1152));
        assert_eq!(e.tau(3, &[7]), ratio(1, 82944));
        assert_eq!(e.tau(1, &[2, 2, 0, 0]), ratio(1, 6));
        assert_eq!(e.tau(1, &[3, 0, 0]), ratio(1, 24));
    }

    #[test]
    fn auto_genus() {
        let e = IntersectionEngine::new();
        assert_eq!(e.tau_auto(&[0, 0, 0]), one());
        assert_eq!(e.tau_auto(&[0, 0]), zero());
        assert_eq!(e.tau_auto(&[4]), ratio(1, 1152));
        assert_eq!(infer_genus(&[0, 0]), None);
        assert_eq!(infer_genus(&[2, 6]), Some(3));
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(0), one());
        assert_eq!(phi(1), ratio(1, 24));
        assert_eq!(phi(2), ratio(1, 1152));
    }

    #[test]
    fn oracle_basics() {
        assert_eq!(genus0_oracle(&[0, 0, 0]).unwrap(), one());
        assert_eq!(genus0_oracle(&[0, 0, 0, 1]).unwrap(), one());
        assert!(matches!(genus0_oracle(&[0, 0, 2]), Err(Error::NotGenusZero(_))));
        // <tau_0^3 tau_1^2>_0 = 2, <tau_0^4 tau_2>_0 = 1
        assert_eq!(genus0_oracle(&[1, 1, 0, 0, 0]).unwrap(), int(2));
        assert_eq!(genus0_oracle(&[2, 0, 0, 0, 0]).unwrap(), one());
    }

    #[test]
    fn memo_conflict_is_reported() {
        let m = MemoTable::default();
        let k = TauBracket::new(1, &[1]);
        m.insert(k.clone(), ratio(1, 24)).unwrap();
        m.insert(k.clone(), ratio(1, 24)).unwrap();
        assert!(matches!(m.insert(k, ratio(1, 12)), Err(Error::MemoConflict { .. })));
    }

    #[test]
    fn cache_lines() {
        assert!(parse_cache_line("2;4;1/1152").is_ok());
        assert!(parse_cache_line("0;0,1,0,0;1").is_err());
        assert!(parse_cache_line("0;1,0,0;1").is_err());
        assert!(parse_cache_line("0;0,0,0").is_err());
    }
}
