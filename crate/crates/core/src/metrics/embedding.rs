//! Paragraph vectors: distributed bag-of-words with negative sampling,
//! optionally interleaved with skip-gram training of the token vectors.
//!
//! Training and inference are single-threaded and driven by a seeded
//! ChaCha stream, so a fixed config and corpus always give the same model.

use std::collections::{BTreeMap, HashMap};
use std::io::{self, BufRead, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Flagged, MetricError, MetricVector, VectorFlag};

pub const EMBEDDING_FORMAT_VERSION: u32 = 1;
const EMBEDDING_FORMAT_NAME: &str = "simrepair-embedding";

/// Vector size used for statements.
pub const STATEMENT_DIMENSION: usize = 128;
/// Vector size used for methods.
pub const METHOD_DIMENSION: usize = 300;

const MIN_DOCUMENTS: usize = 2;
const MIN_DISTINCT_TOKENS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbeddingConfig {
    pub dimension: usize,
    pub window: usize,
    pub epochs: usize,
    pub negative: usize,
    pub min_count: usize,
    pub seed: u64,
    pub learning_rate: f32,
    pub min_learning_rate: f32,
    /// Passes over a component when inferring its vector.
    pub infer_epochs: usize,
    /// Also train token vectors with skip-gram between DBOW steps.
    pub train_words: bool,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            dimension: STATEMENT_DIMENSION,
            window: 5,
            epochs: 20,
            negative: 5,
            min_count: 1,
            seed: 0,
            learning_rate: 0.025,
            min_learning_rate: 0.0001,
            infer_epochs: 20,
            train_words: true,
        }
    }
}

impl EmbeddingConfig {
    pub fn with_dimension(dimension: usize) -> Self {
        EmbeddingConfig { dimension, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    config: EmbeddingConfig,
    vocab: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, usize>,
    /// Token input vectors, `vocab.len() × dimension`, row-major.
    word_vectors: Vec<f32>,
    /// Output (negative-sampling) weights, same shape.
    output_weights: Vec<f32>,
    noise: NoiseTable,
}

#[derive(Debug, Clone, PartialEq)]
struct NoiseTable {
    cumulative: Vec<f64>,
}

impl NoiseTable {
    /// Unigram distribution raised to 3/4.
    fn new(counts: &[u64]) -> Self {
        let mut total = 0.0;
        let cumulative = counts
            .iter()
            .map(|&c| {
                total += (c as f64).powf(0.75);
                total
            })
            .collect();
        NoiseTable { cumulative }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().unwrap_or(&0.0);
        let r = rng.gen::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= r).min(self.cumulative.len() - 1)
    }
}

enum Output<'a> {
    Train(&'a mut [f32]),
    Frozen(&'a [f32]),
}

struct Trainer<'a> {
    dim: usize,
    negative: usize,
    noise: &'a NoiseTable,
    gradient: Vec<f32>,
}

impl Trainer<'_> {
    /// One negative-sampling step predicting `target` from `input`.
    fn step(&mut self, input: &mut [f32], target: usize, mut output: Output<'_>, alpha: f32, rng: &mut ChaCha8Rng) {
        let dim = self.dim;
        self.gradient.iter_mut().for_each(|g| *g = 0.0);
        for k in 0..=self.negative {
            let (word, label) = if k == 0 {
                (target, 1.0)
            } else {
                let w = self.noise.sample(rng);
                if w == target {
                    continue;
                }
                (w, 0.0)
            };
            let range = word * dim..(word + 1) * dim;
            let row = match &output {
                Output::Train(w) => &w[range.clone()],
                Output::Frozen(w) => &w[range.clone()],
            };
            let f: f32 = input.iter().zip(row).map(|(a, b)| a * b).sum();
            let g = (label - sigmoid(f)) * alpha;
            for (acc, o) in self.gradient.iter_mut().zip(row) {
                *acc += g * o;
            }
            if let Output::Train(w) = &mut output {
                for (o, i) in w[range].iter_mut().zip(input.iter()) {
                    *o += g * i;
                }
            }
        }
        for (i, g) in input.iter_mut().zip(&self.gradient) {
            *i += g;
        }
    }
}

fn sigmoid(x: f32) -> f32 {
    1.0 / (1.0 + (-x).exp())
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f32> {
    (0..dim).map(|_| (rng.gen::<f32>() - 0.5) / dim as f32).collect()
}

fn decayed(config: &EmbeddingConfig, progress: f64) -> f32 {
    let a = config.learning_rate as f64 - (config.learning_rate - config.min_learning_rate) as f64 * progress;
    a.max(config.min_learning_rate as f64) as f32
}

impl EmbeddingModel {
    /// Train on tokenised documents.
    pub fn train<S: AsRef<str>>(docs: &[Vec<S>], config: &EmbeddingConfig) -> Result<Self, MetricError> {
        let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
        for doc in docs {
            for t in doc {
                *freq.entry(t.as_ref()).or_default() += 1;
            }
        }
        if docs.len() < MIN_DOCUMENTS || freq.len() < MIN_DISTINCT_TOKENS {
            return Err(MetricError::CorpusTooSmall { documents: docs.len(), distinct_tokens: freq.len() });
        }
        if config.dimension == 0 {
            return Err(MetricError::BadConfig("dimension must be positive".into()));
        }
        let mut entries: Vec<(&str, u64)> = freq.into_iter().filter(|&(_, c)| c as usize >= config.min_count.max(1)).collect();
        if entries.is_empty() {
            return Err(MetricError::BadConfig("min_count leaves an empty vocabulary".into()));
        }
        entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let vocab: Vec<String> = entries.iter().map(|(t, _)| t.to_string()).collect();
        let counts: Vec<u64> = entries.iter().map(|&(_, c)| c).collect();

        let dim = config.dimension;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut word_vectors = Vec::with_capacity(vocab.len() * dim);
        for _ in 0..vocab.len() {
            word_vectors.extend(random_vector(&mut rng, dim));
        }
        let mut model = EmbeddingModel {
            config: config.clone(),
            index: vocab.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect(),
            noise: NoiseTable::new(&counts),
            output_weights: vec![0.0; vocab.len() * dim],
            word_vectors,
            vocab,
            counts,
        };

        let encoded: Vec<Vec<usize>> = docs.iter().map(|d| model.encode(d)).filter(|d| !d.is_empty()).collect();
        let mut doc_vectors: Vec<Vec<f32>> = encoded.iter().map(|_| random_vector(&mut rng, dim)).collect();
        let mut order: Vec<usize> = (0..encoded.len()).collect();
        let total = (config.epochs * encoded.len()).max(1) as f64;
        let mut done = 0usize;
        let mut trainer = Trainer { dim, negative: config.negative, noise: &model.noise, gradient: vec![0.0; dim] };
        let mut context = vec![0.0f32; dim];

        for _ in 0..config.epochs {
            order.shuffle(&mut rng);
            for &d in &order {
                let alpha = decayed(config, done as f64 / total);
                let words = &encoded[d];
                for (pos, &target) in words.iter().enumerate() {
                    trainer.step(&mut doc_vectors[d], target, Output::Train(&mut model.output_weights), alpha, &mut rng);
                    if !config.train_words || config.window == 0 {
                        continue;
                    }
                    let reach = rng.gen_range(1..=config.window);
                    let lo = pos.saturating_sub(reach);
                    let hi = (pos + reach).min(words.len() - 1);
                    for c in (lo..=hi).filter(|&c| c != pos) {
                        let w = words[c];
                        context.copy_from_slice(&model.word_vectors[w * dim..(w + 1) * dim]);
                        trainer.step(&mut context, target, Output::Train(&mut model.output_weights), alpha, &mut rng);
                        model.word_vectors[w * dim..(w + 1) * dim].copy_from_slice(&context);
                    }
                }
                done += 1;
            }
        }
        Ok(model)
    }

    fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<usize> {
        tokens.iter().filter_map(|t| self.index.get(t.as_ref()).copied()).collect()
    }

    pub fn config(&self) -> &EmbeddingConfig {
        &self.config
    }

    pub fn dimension(&self) -> usize {
        self.config.dimension
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocab
    }

    pub fn word_vector(&self, token: &str) -> Option<&[f32]> {
        let dim = self.dimension();
        self.index.get(token).map(|&i| &self.word_vectors[i * dim..(i + 1) * dim])
    }

    /// Infer a document vector against the frozen output weights. The
    /// starting point is seeded from the config seed and the token texts.
    pub fn infer<S: AsRef<str>>(&self, tokens: &[S]) -> Flagged {
        let dim = self.dimension();
        let words = self.encode(tokens);
        if words.is_empty() {
            return Flagged { vector: MetricVector::Doc2vec(vec![0.0; dim]), flag: Some(VectorFlag::OutOfVocabulary) };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed ^ crate::fnv1a(tokens.iter().map(|t| t.as_ref().as_bytes())));
        let mut doc = random_vector(&mut rng, dim);
        let mut trainer = Trainer { dim, negative: self.config.negative, noise: &self.noise, gradient: vec![0.0; dim] };
        let epochs = self.config.infer_epochs.max(1);
        for epoch in 0..epochs {
            let alpha = decayed(&self.config, epoch as f64 / epochs as f64);
            for &target in &words {
                trainer.step(&mut doc, target, Output::Frozen(&self.output_weights), alpha, &mut rng);
            }
        }
        Flagged { vector: MetricVector::Doc2vec(doc), flag: None }
    }

    pub fn write_json<W: Write>(&self, out: W) -> io::Result<()> {
        let file = ModelFile {
            format: EMBEDDING_FORMAT_NAME.into(),
            format_version: EMBEDDING_FORMAT_VERSION,
            config: self.config.clone(),
            vocabulary: self.vocab.clone(),
            counts: self.counts.clone(),
            word_vectors: self.word_vectors.clone(),
            output_weights: self.output_weights.clone(),
        };
        serde_json::to_writer(out, &file).map_err(io::Error::other)
    }

    pub fn read_json<R: BufRead>(input: R) -> Result<Self, MetricError> {
        let file: ModelFile = serde_json::from_reader(input).map_err(|e| MetricError::BadModel(e.to_string()))?;
        if file.format != EMBEDDING_FORMAT_NAME || file.format_version != EMBEDDING_FORMAT_VERSION {
            return Err(MetricError::BadModel(format!("unsupported format {} v{}", file.format, file.format_version)));
        }
        let cells = file.vocabulary.len() * file.config.dimension;
        if file.counts.len() != file.vocabulary.len() || file.word_vectors.len() != cells || file.output_weights.len() != cells {
            return Err(MetricError::BadModel("matrix shape does not match vocabulary".into()));
        }
        Ok(EmbeddingModel {
            index: file.vocabulary.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect(),
            noise: NoiseTable::new(&file.counts),
            config: file.config,
            vocab: file.vocabulary,
            counts: file.counts,
            word_vectors: file.word_vectors,
            output_weights: file.output_weights,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    format_version: u32,
    config: EmbeddingConfig,
    vocabulary: Vec<String>,
    counts: Vec<u64>,
    word_vectors: Vec<f32>,
    output_weights: Vec<f32>,
}
