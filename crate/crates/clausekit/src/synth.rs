//! Seeded generator of gold-annotated corpora with controllable nesting,
//! used as the bed for property tests and desk-scale evaluation runs.
//!
//! Sentences are built clause-set first — top-down random nesting — and then
//! serialized, so every generated annotation is balanced and non-crossing by
//! construction. Each sentence draws from its own pseudo-random stream
//! derived from the seed and the sentence index, so generation order never
//! affects output.

use crate::corpus::{ColumnLayout, Corpus, Sentence, Token};
use crate::encoding::{spans_to_tags, ClauseSet, ClauseSpan};

/// Knobs for [`generate`]. Counts must be positive and the density must lie
/// in [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct GenerateConfig {
    pub sentences: usize,
    pub max_len: usize,
    pub max_depth: usize,
    /// Permit tokens that open or close more than one clause (equal spans,
    /// shared starts, shared ends).
    pub allow_multi_boundary: bool,
    /// Chance of starting a clause at each opportunity.
    pub clause_density: f64,
    pub seed: u64,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        GenerateConfig {
            sentences: 100,
            max_len: 25,
            max_depth: 4,
            allow_multi_boundary: false,
            clause_density: 0.35,
            seed: 1,
        }
    }
}

const POS_TAGS: [&str; 8] = ["DT", "NN", "VB", "IN", "JJ", "RB", "PRP", "CC"];

/// Generates a corpus with the standard four-column layout (word, POS, `O`
/// chunk placeholder, bracket tags). Deterministic for a fixed config.
pub fn generate(config: &GenerateConfig) -> Corpus {
    assert!(config.sentences > 0, "sentence count must be positive");
    assert!(config.max_len > 0, "max_len must be positive");
    assert!(config.max_depth > 0, "max_depth must be positive");
    assert!(
        (0.0..=1.0).contains(&config.clause_density),
        "clause_density must lie in [0,1]"
    );
    let sentences = (0..config.sentences)
        .map(|index| generate_sentence(config, index as u64))
        .collect();
    Corpus::new(sentences, ColumnLayout::standard())
        .expect("generated sentences conform to the standard layout")
}

fn generate_sentence(config: &GenerateConfig, index: u64) -> Sentence {
    let mut rng = SplitMix64::stream(config.seed, index);
    let length = 1 + rng.below(config.max_len as u64) as usize;
    let mut spans = Vec::new();
    build_spans(
        &mut rng,
        config,
        0,
        length - 1,
        config.max_depth,
        &mut spans,
    );
    let set =
        ClauseSet::try_from_spans(spans).expect("top-down nesting cannot produce crossing spans");
    let tags = spans_to_tags(&set, length).expect("generated spans fit the sentence");
    let tokens = tags
        .into_iter()
        .map(|tag| {
            let word = format!("w{}", rng.below(900) + 100);
            let pos = POS_TAGS[rng.below(POS_TAGS.len() as u64) as usize];
            Token::new(word)
                .expect("generated words contain no whitespace")
                .with_pos(pos)
                .with_chunk("O")
                .expect("O is a valid chunk tag")
                .with_annotation(tag.to_string())
        })
        .collect();
    Sentence::new(tokens).expect("generated sentences are non-empty")
}

/// Carves clause windows into `[begin, end]`, recursing into each window.
fn build_spans(
    rng: &mut SplitMix64,
    config: &GenerateConfig,
    begin: usize,
    end: usize,
    depth_left: usize,
    spans: &mut Vec<ClauseSpan>,
) {
    if depth_left == 0 || begin > end {
        return;
    }
    let mut i = begin;
    while i <= end {
        if rng.chance(config.clause_density) {
            let width = 1 + rng.below((end - i + 1) as u64) as usize;
            let (clause_begin, clause_end) = (i, i + width - 1);
            spans.push(ClauseSpan::new(clause_begin, clause_end));
            // Every span on the stack takes one nesting level, a duplicate
            // included, which keeps the bracket depth within max_depth.
            let mut consumed = 1;
            if config.allow_multi_boundary && depth_left >= 2 && rng.chance(0.3) {
                spans.push(ClauseSpan::new(clause_begin, clause_end));
                consumed = 2;
            }
            if config.allow_multi_boundary {
                build_spans(
                    rng,
                    config,
                    clause_begin,
                    clause_end,
                    depth_left - consumed,
                    spans,
                );
            } else if clause_end > clause_begin + 1 {
                // Children stay strictly inside the parent so no token opens
                // or closes twice.
                build_spans(
                    rng,
                    config,
                    clause_begin + 1,
                    clause_end - 1,
                    depth_left - 1,
                    spans,
                );
            }
            i = clause_end + 1;
        } else {
            i += 1;
        }
    }
}

/// SplitMix64: a tiny, well-known pseudo-random generator with a stable
/// definition, so seeds mean the same thing forever.
#[derive(Debug, Clone)]
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    /// An independent stream for one item of a seeded collection.
    pub(crate) fn stream(seed: u64, index: u64) -> SplitMix64 {
        SplitMix64::new(mix(seed).wrapping_add(mix(index.wrapping_add(0x9E37_79B9_7F4A_7C15))))
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix(self.state)
    }

    /// Uniform in `0..bound`; 0 when the bound is 0.
    pub(crate) fn below(&mut self, bound: u64) -> u64 {
        if bound == 0 {
            return 0;
        }
        self.next_u64() % bound
    }

    /// True with probability `p`.
    pub(crate) fn chance(&mut self, p: f64) -> bool {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) < p
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus_to_string;
    use crate::encoding::{parse_clause_column, spans_from_tags, validate};

    fn config(sentences: usize, multi: bool, seed: u64) -> GenerateConfig {
        GenerateConfig {
            sentences,
            max_len: 20,
            max_depth: 4,
            allow_multi_boundary: multi,
            clause_density: 0.4,
            seed,
        }
    }

    #[test]
    fn one_token_full_density_sentence_is_a_one_token_clause() {
        let corpus = generate(&GenerateConfig {
            sentences: 1,
            max_len: 1,
            max_depth: 1,
            allow_multi_boundary: false,
            clause_density: 1.0,
            seed: 7,
        });
        let sentence = &corpus.sentences()[0];
        assert_eq!(sentence.len(), 1);
        assert_eq!(sentence.tokens()[0].clause_annotations[0], "(S*S)");
    }

    #[test]
    fn same_seed_gives_identical_corpora() {
        let a = generate(&config(50, true, 42));
        let b = generate(&config(50, true, 42));
        assert_eq!(a, b);
        assert_eq!(corpus_to_string(&a), corpus_to_string(&b));
        let c = generate(&config(50, true, 43));
        assert_ne!(a, c);
    }

    #[test]
    fn sentence_streams_are_independent_of_corpus_size() {
        let small = generate(&config(5, true, 9));
        let large = generate(&config(50, true, 9));
        assert_eq!(small.sentences(), &large.sentences()[..5]);
    }

    #[test]
    fn all_generated_sentences_validate() {
        let corpus = generate(&config(1000, true, 42));
        let columns = parse_clause_column(&corpus).unwrap();
        for tags in &columns {
            assert_eq!(validate(tags), Ok(()));
        }
    }

    #[test]
    fn single_boundary_mode_never_stacks_tags() {
        let corpus = generate(&config(500, false, 11));
        let columns = parse_clause_column(&corpus).unwrap();
        for tags in &columns {
            for tag in tags {
                assert!(tag.opens <= 1 && tag.closes <= 1, "{tag}");
            }
        }
    }

    #[test]
    fn multi_boundary_mode_actually_stacks_tags() {
        let corpus = generate(&config(500, true, 11));
        let columns = parse_clause_column(&corpus).unwrap();
        let stacked = columns
            .iter()
            .flatten()
            .filter(|t| t.opens > 1 || t.closes > 1)
            .count();
        assert!(stacked > 0);
    }

    #[test]
    fn nesting_depth_respects_the_bound() {
        let corpus = generate(&config(500, true, 3));
        let columns = parse_clause_column(&corpus).unwrap();
        for tags in &columns {
            let mut depth: isize = 0;
            let mut max_depth: isize = 0;
            for tag in tags {
                depth += tag.opens as isize;
                max_depth = max_depth.max(depth);
                depth -= tag.closes as isize;
            }
            assert!(max_depth <= 4, "depth {max_depth} exceeds bound");
            spans_from_tags(tags).unwrap();
        }
    }
}
