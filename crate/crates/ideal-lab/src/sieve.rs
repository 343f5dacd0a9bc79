//! Segmented sieve over prime windows.

/// Primes in [lo, hi], ascending. Segmented so large windows stay cheap on
/// memory.
pub fn primes_in_window(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return vec![];
    }
    let lo = lo.max(2);
    let root = (hi as f64).sqrt() as u64 + 2;
    // base primes up to sqrt(hi)
    let mut base_sieve = vec![true; (root + 1) as usize];
    let mut base = vec![];
    for i in 2..=root {
        if base_sieve[i as usize] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                base_sieve[j as usize] = false;
                j += i;
            }
        }
    }
    let mut out = vec![];
    const SEG: u64 = 1 << 18;
    let mut start = lo;
    while start <= hi {
        let end = (start + SEG - 1).min(hi);
        let len = (end - start + 1) as usize;
        let mut seg = vec![true; len];
        for &p in &base {
            if p * p > end {
                break;
            }
            let mut j = (start + p - 1) / p * p;
            if j < p * p {
                j = p * p;
            }
            while j <= end {
                seg[(j - start) as usize] = false;
                j += p;
            }
        }
        for (i, is_p) in seg.iter().enumerate() {
            let v = start + i as u64;
            if *is_p && v >= 2 {
                out.push(v);
            }
        }
        start = end + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_window() {
        assert_eq!(primes_in_window(2, 30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_in_window(24, 28), Vec::<u64>::new());
        assert_eq!(primes_in_window(10, 2), Vec::<u64>::new());
    }

    #[test]
    fn counts_match_known_pi() {
        assert_eq!(primes_in_window(2, 100_000).len(), 9592);
        assert_eq!(primes_in_window(2, 10_000).len(), 1229);
    }

    #[test]
    fn segmented_matches_direct() {
        let ps = primes_in_window(299_950, 300_100);
        for &p in &ps {
            assert!(crate::arith::fp::is_prime_u64(p));
        }
        let direct: Vec<u64> = (299_950..=300_100)
            .filter(|&n| crate::arith::fp::is_prime_u64(n))
            .collect();
        assert_eq!(ps, direct);
    }
}
