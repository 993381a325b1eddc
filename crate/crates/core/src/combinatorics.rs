//! The sign combinatorics behind the degree count: the pair statistic σ,
//! the parity pa, the counts M_n and P_n with their recursions, and the
//! signed sum d_n computed three independent ways.
//!
//! Everything here is exact integer arithmetic.

use crate::error::{Error, Result};

/// Largest n for which the 2^n brute-force enumeration is allowed.
pub const BRUTE_LIMIT: usize = 25;

/// Largest n for which 2^n fits the integer types used by the recursions.
pub const WIDTH_LIMIT: usize = 62;

/// A binary sequence ε = (ε₁, …, ε_n), ε_k ∈ {0, 1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsSeq {
    bits: Vec<u8>,
}

impl EpsSeq {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidBits);
        }
        Ok(Self { bits })
    }

    /// The index-th sequence of length n, reading the index in binary with
    /// ε₁ as the most significant bit, so index 0 is all zeros and the
    /// sequences come in natural reading order.
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!((1..=WIDTH_LIMIT).contains(&n));
        assert!(index < (1u64 << n));
        let bits = (0..n).map(|j| ((index >> (n - 1 - j)) & 1) as u8).collect();
        Self { bits }
    }

    /// All 2^n sequences of length n in index order.
    pub fn all(n: usize) -> impl Iterator<Item = EpsSeq> {
        (0..(1u64 << n)).map(move |i| EpsSeq::from_index(n, i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

/// Number of pairs j < k with ε_j = 0 and ε_k = 1, and its parity.
/// Single pass: each 1 closes a pair with every 0 seen before it.
pub fn sigma(eps: &EpsSeq) -> (u64, u8) {
    let mut zeros = 0u64;
    let mut pairs = 0u64;
    for &b in eps.bits() {
        if b == 0 {
            zeros += 1;
        } else {
            pairs += zeros;
        }
    }
    (pairs, (pairs & 1) as u8)
}

/// Parity of ε: popcount mod 2.
pub fn pa(eps: &EpsSeq) -> u8 {
    (eps.bits().iter().map(|&b| b as u32).sum::<u32>() & 1) as u8
}

fn check_brute_budget(n: usize) -> Result<()> {
    if n == 0 || n > BRUTE_LIMIT {
        return Err(Error::BruteBudget {
            n,
            limit: BRUTE_LIMIT,
        });
    }
    Ok(())
}

/// Σ_ε (−1)^{σ(ε)} over all of Υ_n, by direct enumeration on the raw bit
/// patterns (no allocation per sequence).
pub fn d_brute(n: usize) -> Result<i64> {
    check_brute_budget(n)?;
    let mut sum: i64 = 0;
    for idx in 0..(1u64 << n) {
        let mut zeros = 0u64;
        let mut pairs = 0u64;
        for j in (0..n).rev() {
            if (idx >> j) & 1 == 0 {
                zeros += 1;
            } else {
                pairs += zeros;
            }
        }
        sum += 1 - 2 * ((pairs & 1) as i64);
    }
    Ok(sum)
}

/// #{ε ∈ Υ_n : σ(ε) even}, brute force. Backs M-vector cross-checks.
pub fn m_brute(n: usize) -> Result<u64> {
    check_brute_budget(n)?;
    let mut count = 0u64;
    for eps in EpsSeq::all(n) {
        if sigma(&eps).1 == 0 {
            count += 1;
        }
    }
    Ok(count)
}

/// #{ε ∈ Υ_n : σ(ε) + pa(ε) even}, brute force. Backs P-vector cross-checks.
pub fn p_brute(n: usize) -> Result<u64> {
    check_brute_budget(n)?;
    let mut count = 0u64;
    for eps in EpsSeq::all(n) {
        if (sigma(&eps).1 + pa(&eps)).is_multiple_of(2) {
            count += 1;
        }
    }
    Ok(count)
}

/// The coupled recursion
///   M_n = M_{n−1} + P_{n−1},
///   P_n = (2^{n−1} − P_{n−1}) + M_{n−1},
/// seeded with M₁ = 2, P₁ = 1. Returns the vectors (M_1..M_n, P_1..P_n)
/// and verifies the decoupled two-step form M_k = 2·M_{k−2} + 2^{k−2}
/// at every index k ≥ 3.
pub fn mp_recursion(n: usize) -> Result<(Vec<u64>, Vec<u64>)> {
    if n == 0 || n > WIDTH_LIMIT {
        return Err(Error::WidthExceeded {
            n,
            limit: WIDTH_LIMIT,
        });
    }
    let mut m = vec![2u64];
    let mut p = vec![1u64];
    for k in 2..=n {
        let pow = 1u64 << (k - 1);
        let mk = m[k - 2] + p[k - 2];
        let pk = (pow - p[k - 2]) + m[k - 2];
        m.push(mk);
        p.push(pk);
        if k >= 3 {
            let two_step = 2 * m[k - 3] + (1u64 << (k - 2));
            assert_eq!(mk, two_step, "two-step recursion broke at k = {k}");
        }
    }
    Ok((m, p))
}

/// d_n from the recursion: M_n − (2^n − M_n).
pub fn d_recursion(n: usize) -> Result<i64> {
    let (m, _) = mp_recursion(n)?;
    Ok(2 * m[n - 1] as i64 - (1i64 << n))
}

/// d_n in closed form: 2^{m+1} for n = 2m + 1.
pub fn d_closed(n: usize) -> Result<i64> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    Ok(1i64 << n.div_ceil(2))
}

/// The three routes to d_n side by side, with the doubling chain
/// d_k = 2·d_{k−2} replayed along odd k ≤ n.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub n: usize,
    pub d_brute: i64,
    pub d_rec: i64,
    pub d_closed: i64,
    pub m: Vec<u64>,
    pub p: Vec<u64>,
}

pub fn lemma_report(n: usize) -> Result<LemmaReport> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    let brute = d_brute(n)?;
    let (m, p) = mp_recursion(n)?;
    let rec = 2 * m[n - 1] as i64 - (1i64 << n);
    let closed = d_closed(n)?;
    if brute != rec || rec != closed {
        return Err(Error::CountMismatch {
            brute,
            recursion: rec,
            closed,
        });
    }
    let mut k = 3;
    while k <= n {
        let dk = 2 * m[k - 1] as i64 - (1i64 << k);
        let prev = 2 * m[k - 3] as i64 - (1i64 << (k - 2));
        assert_eq!(dk, 2 * prev, "doubling chain broke at k = {k}");
        k += 2;
    }
    Ok(LemmaReport {
        n,
        d_brute: brute,
        d_rec: rec,
        d_closed: closed,
        m,
        p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_hand_cases() {
        let e = |bits: &[u8]| EpsSeq::new(bits.to_vec()).unwrap();
        assert_eq!(sigma(&e(&[0, 1])), (1, 1));
        assert_eq!(sigma(&e(&[1, 0])), (0, 0));
        assert_eq!(sigma(&e(&[0, 1, 1])), (2, 0));
        assert_eq!(sigma(&e(&[0, 0, 1, 1])), (4, 0));
    }

    #[test]
    fn pa_hand_cases() {
        let e = |bits: &[u8]| EpsSeq::new(bits.to_vec()).unwrap();
        assert_eq!(pa(&e(&[0, 0, 0])), 0);
        assert_eq!(pa(&e(&[1, 0, 1])), 0);
        assert_eq!(pa(&e(&[1, 1, 1])), 1);
    }

    #[test]
    fn eps_from_index_reads_msb_first() {
        let e = EpsSeq::from_index(3, 0b011);
        assert_eq!(e.bits(), &[0, 1, 1]);
        let e = EpsSeq::from_index(3, 0b100);
        assert_eq!(e.bits(), &[1, 0, 0]);
    }

    #[test]
    fn eps_rejects_non_binary() {
        assert!(matches!(EpsSeq::new(vec![0, 2]), Err(Error::InvalidBits)));
    }

    #[test]
    fn d_brute_small_values() {
        assert_eq!(d_brute(1).unwrap(), 2);
        assert_eq!(d_brute(2).unwrap(), 2);
        assert_eq!(d_brute(3).unwrap(), 4);
    }

    #[test]
    fn n3_signs_by_hand() {
        // Over 000..111 the signs come out +,+,−,+,+,−,+,+.
        let signs: Vec<i64> = EpsSeq::all(3)
            .map(|e| 1 - 2 * sigma(&e).1 as i64)
            .collect();
        assert_eq!(signs, vec![1, 1, -1, 1, 1, -1, 1, 1]);
    }

    #[test]
    fn d_brute_rejects_over_budget() {
        assert!(matches!(d_brute(26), Err(Error::BruteBudget { .. })));
    }

    #[test]
    fn recursion_seeds_and_first_steps() {
        let (m, p) = mp_recursion(4).unwrap();
        assert_eq!(m, vec![2, 3, 6, 10]);
        assert_eq!(p, vec![1, 3, 4, 10]);
    }

    #[test]
    fn recursion_matches_brute_counts() {
        let (m, p) = mp_recursion(12).unwrap();
        for k in 1..=12 {
            assert_eq!(m[k - 1], m_brute(k).unwrap(), "M_{k}");
            assert_eq!(p[k - 1], p_brute(k).unwrap(), "P_{k}");
        }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(d_closed(1).unwrap(), 2);
        assert_eq!(d_closed(3).unwrap(), 4);
        assert_eq!(d_closed(9).unwrap(), 32);
        assert_eq!(d_closed(21).unwrap(), 2048);
        assert!(matches!(d_closed(4), Err(Error::EvenDimension(4))));
    }

    #[test]
    fn three_routes_agree_through_n9() {
        for n in [1usize, 3, 5, 7, 9] {
            let r = lemma_report(n).unwrap();
            assert_eq!(r.d_brute, r.d_closed);
            assert_eq!(r.d_rec, r.d_closed);
        }
    }

    #[test]
    fn d_equals_two_m_minus_pow() {
        for n in 1..=15 {
            let (m, _) = mp_recursion(n).unwrap();
            assert_eq!(d_brute(n).unwrap(), 2 * m[n - 1] as i64 - (1i64 << n));
        }
    }

    #[test]
    fn lemma_report_rejects_even_n() {
        assert!(matches!(lemma_report(2), Err(Error::EvenDimension(2))));
    }
}
