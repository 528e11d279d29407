use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::MetricError;

use super::Codeword;

/// Huffman code lengths for `counts`.
///
/// The slice order is the tie-break order: among equal weights the leaf that
/// appears earlier is merged first, and every internal node ranks after all
/// leaves and after internal nodes created before it.
pub fn code_lengths(counts: &[u64]) -> Vec<usize> {
    let n = counts.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![1],
        _ => {}
    }
    let mut parent = vec![usize::MAX; 2 * n - 1];
    let mut heap: BinaryHeap<Reverse<(u128, usize)>> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| Reverse((c as u128, i)))
        .collect();
    let mut next = n;
    while heap.len() > 1 {
        let Reverse((w1, a)) = heap.pop().unwrap();
        let Reverse((w2, b)) = heap.pop().unwrap();
        parent[a] = next;
        parent[b] = next;
        heap.push(Reverse((w1 + w2, next)));
        next += 1;
    }
    // parents are always created after their children, so walk top-down
    let mut depth = vec![0usize; 2 * n - 1];
    for node in (0..2 * n - 2).rev() {
        depth[node] = depth[parent[node]] + 1;
    }
    depth.truncate(n);
    depth
}

/// Assigns canonical codewords to lengths already sorted by (length, key).
pub fn canonical_codewords(sorted_lengths: &[usize]) -> Vec<Codeword> {
    let mut out = Vec::with_capacity(sorted_lengths.len());
    let mut code: u64 = 0;
    let mut prev = 0usize;
    for (i, &len) in sorted_lengths.iter().enumerate() {
        debug_assert!((1..=64).contains(&len));
        if i > 0 {
            code = code.wrapping_add(1);
        }
        if len > prev {
            code = if len - prev >= 64 { 0 } else { code << (len - prev) };
        }
        prev = len;
        out.push(Codeword::new(code, len as u8));
    }
    out
}

/// Shannon entropy in bits of a normalized distribution.
pub fn entropy(probabilities: &[f64]) -> Result<f64, MetricError> {
    if probabilities.iter().any(|&p| !(p > 0.0)) {
        return Err(MetricError::NonPositive);
    }
    let sum: f64 = probabilities.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(MetricError::NotNormalized);
    }
    Ok(-probabilities.iter().map(|&p| p * p.log2()).sum::<f64>())
}

/// Σ 2^(64 - L) over codeword lengths; equals 2^64 exactly for a complete code.
pub fn kraft_numerator<I: IntoIterator<Item = usize>>(lengths: I) -> Option<u128> {
    let mut sum: u128 = 0;
    for len in lengths {
        if len == 0 || len > 64 {
            return None;
        }
        sum += 1u128 << (64 - len);
    }
    Some(sum)
}

pub const KRAFT_ONE: u128 = 1u128 << 64;
