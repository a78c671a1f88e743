/// Longest `l` such that the last `l` symbols of `a` equal the first `l` of `b`.
///
/// Runs KMP: the matcher state after scanning `a` against the pattern `b` is
/// the longest prefix of `b` that is a suffix of `a`.
pub fn suffix_prefix_overlap(a: &[u8], b: &[u8]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let fail = prefix_function(b);
    // Only suffixes of `a` no longer than `b` can match, so start the scan late.
    let start = a.len().saturating_sub(b.len());
    let mut q = 0;
    for &c in &a[start..] {
        while q > 0 && (q == b.len() || b[q] != c) {
            q = fail[q - 1];
        }
        if b[q] == c {
            q += 1;
        }
    }
    q
}

fn prefix_function(s: &[u8]) -> Vec<usize> {
    let mut pi = vec![0; s.len()];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi
}

/// Largest `l` in `[1, L]` whose suffix/prefix Hamming distance is at most
/// `alpha * l`, or 0 if none is.
pub fn hamming_overlap_score(ri: &[u8], rj: &[u8], alpha: f64) -> usize {
    let len = ri.len().min(rj.len());
    (1..=len)
        .rev()
        .find(|&l| {
            let tail = &ri[ri.len() - l..];
            let dist = tail.iter().zip(&rj[..l]).filter(|(x, y)| x != y).count();
            dist as f64 <= alpha * l as f64
        })
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::parse_codes;
    use proptest::prelude::*;

    fn naive(a: &[u8], b: &[u8]) -> usize {
        (0..=a.len().min(b.len())).rev().find(|&l| a[a.len() - l..] == b[..l]).unwrap()
    }

    #[test]
    fn examples() {
        let c = |s: &str| parse_codes(s).unwrap();
        assert_eq!(suffix_prefix_overlap(&c("ACGTAC"), &c("TACGGA")), 3);
        assert_eq!(suffix_prefix_overlap(&c("AAAA"), &c("AAAA")), 4);
        assert_eq!(suffix_prefix_overlap(&c("AAAC"), &c("GAAA")), 0);
    }

    #[test]
    fn hamming_extremes() {
        let a = parse_codes("AAAA").unwrap();
        let b = parse_codes("CCCC").unwrap();
        assert_eq!(hamming_overlap_score(&a, &b, 1.0), 4);
        assert_eq!(hamming_overlap_score(&a, &b, 0.1), 0);
        let x = parse_codes("ACGTAC").unwrap();
        let y = parse_codes("TACGGA").unwrap();
        assert_eq!(hamming_overlap_score(&x, &y, 0.1), suffix_prefix_overlap(&x, &y));
    }

    proptest! {
        #[test]
        fn kmp_matches_naive(a in proptest::collection::vec(0u8..2, 0..20),
                             b in proptest::collection::vec(0u8..2, 0..20)) {
            prop_assert_eq!(suffix_prefix_overlap(&a, &b), naive(&a, &b));
        }

        #[test]
        fn tiny_alpha_is_exact(a in proptest::collection::vec(0u8..3, 1..16),
                               b in proptest::collection::vec(0u8..3, 1..16)) {
            let len = a.len().min(b.len());
            let alpha = 0.99 / len as f64;
            prop_assert_eq!(hamming_overlap_score(&a, &b, alpha), naive(&a, &b));
        }
    }
}
