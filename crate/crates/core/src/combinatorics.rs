//! Set partitions and labelled assignments of small index sets.

/// All set partitions of `{0..n}` as block lists (restricted growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let n = rgs.len();
        if i == n {
            let blocks = if n == 0 { 0 } else { max + 1 };
            let mut p = vec![Vec::new(); blocks];
            for (k, &b) in rgs.iter().enumerate() {
                p[b].push(k);
            }
            out.push(p);
            return;
        }
        let top = if i == 0 { 0 } else { max + 1 };
        for b in 0..=top {
            rgs[i] = b;
            rec(i + 1, max.max(b), rgs, out);
        }
    }
    rec(0, 0, &mut rgs, &mut out);
    out
}

/// Every map `{0..n} -> {0..k}`, as a vector of targets.
pub fn assignments(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let total = k.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let t = code % k;
                    code /= k;
                    t
                })
                .collect()
        })
        .collect()
}

/// Every weak composition of `total` into `parts` ordered non-negative parts.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Multisets of size `len` with the given sum, each sorted descending.
pub fn multisets_with_sum(len: usize, sum: u32) -> Vec<Vec<u32>> {
    fn rec(len: usize, sum: u32, cap: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 0 {
            if sum == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for x in (0..=cap.min(sum)).rev() {
            acc.push(x);
            rec(len - 1, sum - x, x, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, sum, sum, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(n).len(), b, "n = {n}");
        }
    }

    #[test]
    fn assignment_counts() {
        assert_eq!(assignments(3, 2).len(), 8);
        assert_eq!(assignments(0, 3).len(), 1);
        assert_eq!(assignments(2, 0).len(), 0);
    }

    #[test]
    fn composition_counts() {
        // C(total + parts - 1, parts - 1)
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(0, 4).len(), 1);
        assert_eq!(multisets_with_sum(3, 3).len(), 3);
    }
}
