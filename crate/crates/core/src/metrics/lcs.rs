//! Character-level longest common subsequence.

use super::MetricError;

/// Length of the longest common subsequence of `a` and `b`.
///
/// Two-row dynamic program: O(|a|·|b|) time, O(min(|a|, |b|)) space.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut prev = vec![0usize; short.len() + 1];
    let mut cur = vec![0usize; short.len() + 1];
    for x in long {
        for (j, y) in short.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

/// LCS length over the longer length; in [0, 1].
pub fn lcs_ratio(a: &[char], b: &[char]) -> Result<f64, MetricError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::EmptyText);
    }
    Ok(lcs_len(a, b) as f64 / a.len().max(b.len()) as f64)
}

/// Normalised LCS similarity of two texts, compared char by char.
pub fn lcs_similarity(a: &str, b: &str) -> Result<f64, MetricError> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    lcs_ratio(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(lcs_similarity("abc", "abc").unwrap(), 1.0);
        assert_eq!(lcs_similarity("port1", "port2").unwrap(), 0.8);
        assert_eq!(lcs_similarity("abc", "xyz").unwrap(), 0.0);
        assert_eq!(lcs_len(b"ABCBDAB", b"BDCABA"), 4);
    }

    #[test]
    fn empty_text_is_an_error() {
        assert_eq!(lcs_similarity("", "a"), Err(MetricError::EmptyText));
        assert_eq!(lcs_similarity("a", ""), Err(MetricError::EmptyText));
    }

    #[test]
    fn counts_chars_not_bytes() {
        assert_eq!(lcs_similarity("größe", "grösse").unwrap(), 4.0 / 6.0);
    }
}
