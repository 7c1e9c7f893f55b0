//! Linear algebra over a prime field `F_p`, just enough to enumerate
//! subspaces by their reduced row echelon forms.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n + 1;
    while !is_prime(k) {
        k += 1;
    }
    k
}

/// The first `count` primes in ascending order.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = 1;
    while out.len() < count {
        p = next_prime(p);
        out.push(p);
    }
    out
}

/// Number of `k`-dimensional subspaces of `F_p^n`, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, k: usize, p: u64) -> u128 {
    if k > n {
        return 0;
    }
    let pow = |e: usize| -> Option<u128> { (p as u128).checked_pow(e as u32) };
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        let (Some(a), Some(b)) = (pow(n - i), pow(i + 1)) else {
            return u128::MAX;
        };
        let (Some(nn), Some(dd)) = (num.checked_mul(a - 1), den.checked_mul(b - 1)) else {
            return u128::MAX;
        };
        // keep the running quotient small; the final ratio is exact
        let g = gcd(nn, dd);
        num = nn / g;
        den = dd / g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A subspace of `F_p^n` given by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[u64], p: u64) -> bool {
        let mut r = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = r[piv];
            if c != 0 {
                for (x, y) in r.iter_mut().zip(row) {
                    *x = (*x + (p - c) * y) % p;
                }
            }
        }
        r.iter().all(|&x| x == 0)
    }
}

/// Every `k`-dimensional subspace of `F_p^n`, each exactly once.
pub fn subspaces(n: usize, k: usize, p: u64) -> Vec<Subspace> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    for pivots in combinations(n, k) {
        // free positions: row i, column j > pivot_i with j not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pv = pivots.clone();
                (pivots[i] + 1..n).filter(move |j| !pv.contains(j)).map(move |j| (i, j))
            })
            .collect();
        let mut vals = vec![0u64; free.len()];
        loop {
            let mut rows = vec![vec![0u64; n]; k];
            for (i, &pv) in pivots.iter().enumerate() {
                rows[i][pv] = 1;
            }
            for (&(i, j), &x) in free.iter().zip(&vals) {
                rows[i][j] = x;
            }
            out.push(Subspace { rows, pivots: pivots.clone() });
            // odometer over F_p^{free}
            let mut pos = 0;
            loop {
                if pos == vals.len() {
                    break;
                }
                vals[pos] += 1;
                if vals[pos] < p {
                    break;
                }
                vals[pos] = 0;
                pos += 1;
            }
            if pos == vals.len() {
                break;
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `M v` for an `r×c` matrix over `F_p`.
pub fn mat_vec(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (a, b)| (acc + a * b) % p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
        assert_eq!(next_prime(11), 13);
        assert!(!is_prime(1) && !is_prime(9) && is_prime(97));
    }

    #[test]
    fn enumeration_matches_gaussian_binomial() {
        for p in [2, 3, 5] {
            for n in 0..=4 {
                for k in 0..=n {
                    let subs = subspaces(n, k, p);
                    assert_eq!(subs.len() as u128, gaussian_binomial(n, k, p), "n={n} k={k} p={p}");
                    for (i, a) in subs.iter().enumerate() {
                        for b in &subs[i + 1..] {
                            assert_ne!(a, b);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn membership() {
        let u = &subspaces(3, 1, 3)[0];
        assert!(u.contains(&[0, 0, 0], 3));
        assert!(u.contains(&u.rows[0].iter().map(|x| 2 * x % 3).collect::<Vec<_>>(), 3));
        let plane = Subspace { rows: vec![vec![1, 0, 2], vec![0, 1, 1]], pivots: vec![0, 1] };
        assert!(plane.contains(&[1, 1, 0], 3));
        assert!(!plane.contains(&[0, 0, 1], 3));
    }
}
