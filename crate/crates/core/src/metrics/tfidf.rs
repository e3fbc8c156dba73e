//! Token TF-IDF over a component pool.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Flagged, MetricError, MetricVector, SparseVector, VectorFlag};

/// Document frequencies of a fitted pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    documents: usize,
    df: BTreeMap<String, u32>,
}

impl TfidfModel {
    /// Fit document frequencies; each item of `docs` is one document's tokens.
    pub fn fit<D, S>(docs: &[D]) -> Result<Self, MetricError>
    where
        D: AsRef<[S]>,
        S: AsRef<str>,
    {
        if docs.is_empty() {
            return Err(MetricError::EmptyPool);
        }
        let mut df: BTreeMap<String, u32> = BTreeMap::new();
        for doc in docs {
            let mut seen: Vec<&str> = doc.as_ref().iter().map(AsRef::as_ref).collect();
            seen.sort_unstable();
            seen.dedup();
            for term in seen {
                match df.get_mut(term) {
                    Some(n) => *n += 1,
                    None => {
                        df.insert(term.to_string(), 1);
                    }
                }
            }
        }
        Ok(TfidfModel { documents: docs.len(), df })
    }

    pub fn documents(&self) -> usize {
        self.documents
    }

    pub fn document_frequency(&self, term: &str) -> u32 {
        self.df.get(term).copied().unwrap_or(0)
    }

    /// `ln((1 + N) / (1 + df)) + 1`. Unseen terms get df = 0.
    pub fn idf(&self, term: &str) -> f64 {
        let n = self.documents as f64;
        let df = self.document_frequency(term) as f64;
        ((1.0 + n) / (1.0 + df)).ln() + 1.0
    }

    /// L2-normalised weights of one document (raw counts times idf).
    pub fn transform<S: AsRef<str>>(&self, tokens: &[S]) -> Flagged {
        let mut tf: BTreeMap<&str, u32> = BTreeMap::new();
        for t in tokens {
            *tf.entry(t.as_ref()).or_default() += 1;
        }
        if tf.is_empty() {
            return Flagged { vector: MetricVector::Tfidf(SparseVector::default()), flag: Some(VectorFlag::NoTokens) };
        }
        let mut weights: Vec<(String, f64)> =
            tf.into_iter().map(|(term, count)| (term.to_string(), count as f64 * self.idf(term))).collect();
        let norm = weights.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        for (_, w) in &mut weights {
            *w /= norm;
        }
        Flagged { vector: MetricVector::Tfidf(SparseVector::from_sorted(weights)), flag: None }
    }
}

/// Fit on `docs` and return the weight vector of each document.
pub fn tfidf_fit<D, S>(docs: &[D]) -> Result<(TfidfModel, Vec<Flagged>), MetricError>
where
    D: AsRef<[S]>,
    S: AsRef<str>,
{
    let model = TfidfModel::fit(docs)?;
    let vectors = docs.iter().map(|d| model.transform(d.as_ref())).collect();
    Ok((model, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights(v: &Flagged) -> &SparseVector {
        match &v.vector {
            MetricVector::Tfidf(s) => s,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn three_document_table() {
        let docs = [vec!["a", "b"], vec!["a", "c"], vec!["a", "d"]];
        let (model, vectors) = tfidf_fit(&docs).unwrap();
        // idf(a) = ln(4/4) + 1 = 1; idf(b) = ln(4/2) + 1
        let idf_rare = 2f64.ln() + 1.0;
        assert_eq!(model.idf("a"), 1.0);
        assert!((model.idf("b") - idf_rare).abs() < 1e-12);
        let norm = (1.0 + idf_rare * idf_rare).sqrt();
        for (v, rare) in vectors.iter().zip(["b", "c", "d"]) {
            let w = weights(v);
            assert!((w.get("a") - 1.0 / norm).abs() < 1e-9);
            assert!((w.get(rare) - idf_rare / norm).abs() < 1e-9);
            assert!(w.get("a") < w.get(rare));
        }
    }

    #[test]
    fn single_document_has_uniform_weights() {
        let (_, vectors) = tfidf_fit(&[vec!["x", "y", "z"]]).unwrap();
        let w = weights(&vectors[0]);
        let expected = 1.0 / 3f64.sqrt();
        for term in ["x", "y", "z"] {
            assert!((w.get(term) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn raw_counts_are_term_frequencies() {
        let model = TfidfModel::fit(&[vec!["x", "y"]]).unwrap();
        let v = model.transform(&["x", "x", "y"]);
        let w = weights(&v);
        assert!((w.get("x") / w.get("y") - 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_document_is_flagged() {
        let empty: Vec<&str> = vec![];
        let (_, vectors) = tfidf_fit(&[vec!["x"], empty]).unwrap();
        assert_eq!(vectors[0].flag, None);
        assert_eq!(vectors[1].flag, Some(VectorFlag::NoTokens));
        assert!(vectors[1].vector.is_zero());
    }

    #[test]
    fn empty_pool_is_an_error() {
        let docs: Vec<Vec<&str>> = vec![];
        assert_eq!(TfidfModel::fit(&docs), Err(MetricError::EmptyPool));
    }

    #[test]
    fn unseen_terms_count_as_rarest() {
        let model = TfidfModel::fit(&[vec!["x"], vec!["x", "y"]]).unwrap();
        assert!(model.idf("never") > model.idf("y"));
        assert!(model.idf("y") > model.idf("x"));
    }
}
