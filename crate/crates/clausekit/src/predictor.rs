//! A minimal trainable predictor of start/end flags, so the full
//! parts-1→2→3 pipeline runs end to end. It counts POS trigrams with
//! backoff to the current POS and a global prior — deliberately small and
//! analyzable, not a competitor to any published system.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::corpus::{ColumnRole, Corpus, Sentence};
use crate::encoding::{derive_boundaries, parse_clause_column, BoundaryKind, BoundaryTag};
use crate::error::{Error, Result};

/// POS symbol standing in for positions outside the sentence.
pub const OUT_OF_SENTENCE_POS: &str = "<s>";

/// Separator joining the POS symbols of a context key.
const KEY_SEPARATOR: char = '|';

/// Mark/NoMark counts per context at three backoff levels. Lookup falls
/// through trigram → unigram → prior, stopping at the first level that has
/// seen the context at all.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextModel {
    trigram: BTreeMap<String, (u64, u64)>,
    unigram: BTreeMap<String, (u64, u64)>,
    prior: (u64, u64),
    /// Add-constant smoothing applied when turning counts into a
    /// probability.
    pub smoothing: f64,
}

impl Default for ContextModel {
    fn default() -> Self {
        ContextModel {
            trigram: BTreeMap::new(),
            unigram: BTreeMap::new(),
            prior: (0, 0),
            smoothing: 1.0,
        }
    }
}

impl ContextModel {
    pub fn trigram_counts(&self, prev: &str, cur: &str, next: &str) -> (u64, u64) {
        self.trigram
            .get(&trigram_key(prev, cur, next))
            .copied()
            .unwrap_or((0, 0))
    }

    /// Smoothed probability of Mark at the first backoff level that has a
    /// nonzero raw total; 0.5 when even the prior is empty.
    fn mark_probability(&self, prev: &str, cur: &str, next: &str) -> f64 {
        let levels = [
            self.trigram
                .get(&trigram_key(prev, cur, next))
                .copied()
                .unwrap_or((0, 0)),
            self.unigram.get(cur).copied().unwrap_or((0, 0)),
            self.prior,
        ];
        let (mark, nomark) = levels
            .into_iter()
            .find(|(m, n)| m + n > 0)
            .unwrap_or(self.prior);
        (mark as f64 + self.smoothing) / ((mark + nomark) as f64 + 2.0 * self.smoothing)
    }

    /// Writes the model as sorted `level<TAB>key<TAB>mark<TAB>nomark` lines
    /// behind a `smoothing` header; byte-stable, so models diff cleanly.
    pub fn save<W: Write>(&self, writer: &mut W) -> Result<()> {
        writeln!(writer, "smoothing\t{}", self.smoothing)?;
        for (key, (mark, nomark)) in &self.trigram {
            writeln!(writer, "trigram\t{key}\t{mark}\t{nomark}")?;
        }
        for (key, (mark, nomark)) in &self.unigram {
            writeln!(writer, "unigram\t{key}\t{mark}\t{nomark}")?;
        }
        let (mark, nomark) = self.prior;
        writeln!(writer, "prior\t-\t{mark}\t{nomark}")?;
        Ok(())
    }

    pub fn load<R: BufRead>(reader: R) -> Result<ContextModel> {
        let mut model = ContextModel::default();
        for (index, line) in reader.lines().enumerate() {
            let line = line?;
            let number = index + 1;
            let bad = |message: &str| Error::ModelFormat {
                line: number,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["smoothing", value] => {
                    model.smoothing = value
                        .parse()
                        .map_err(|_| bad("smoothing value is not a number"))?;
                }
                [level, key, mark, nomark] => {
                    let mark: u64 = mark.parse().map_err(|_| bad("bad mark count"))?;
                    let nomark: u64 = nomark.parse().map_err(|_| bad("bad nomark count"))?;
                    match *level {
                        "trigram" => {
                            model.trigram.insert(key.to_string(), (mark, nomark));
                        }
                        "unigram" => {
                            model.unigram.insert(key.to_string(), (mark, nomark));
                        }
                        "prior" => model.prior = (mark, nomark),
                        _ => return Err(bad("unknown level")),
                    }
                }
                _ => return Err(bad("expected level\\tkey\\tmark\\tnomark")),
            }
        }
        Ok(model)
    }
}

fn trigram_key(prev: &str, cur: &str, next: &str) -> String {
    format!("{prev}{KEY_SEPARATOR}{cur}{KEY_SEPARATOR}{next}")
}

fn pos_at(sentence: &Sentence, index: isize) -> Result<&str> {
    if index < 0 || index as usize >= sentence.len() {
        return Ok(OUT_OF_SENTENCE_POS);
    }
    sentence.tokens()[index as usize]
        .pos
        .as_deref()
        .ok_or_else(|| Error::Layout("POS column required but absent".into()))
}

/// Counts boundary outcomes per POS context over a corpus with a gold
/// bracket column; targets come from `derive_boundaries` on that column.
pub fn train(corpus: &Corpus, target: BoundaryKind) -> Result<ContextModel> {
    if corpus.layout().position(ColumnRole::Pos).is_none() {
        return Err(Error::Layout("training requires a POS column".into()));
    }
    let columns = parse_clause_column(corpus)?;
    let mut model = ContextModel::default();
    for (sentence, tags) in corpus.sentences().iter().zip(&columns) {
        let (starts, ends) = derive_boundaries(tags);
        let targets = match target {
            BoundaryKind::Starts => starts,
            BoundaryKind::Ends => ends,
        };
        for (i, flag) in targets.iter().enumerate() {
            let i = i as isize;
            let key = trigram_key(
                pos_at(sentence, i - 1)?,
                pos_at(sentence, i)?,
                pos_at(sentence, i + 1)?,
            );
            let cur = pos_at(sentence, i)?.to_string();
            for entry in [
                model.trigram.entry(key).or_insert((0, 0)),
                model.unigram.entry(cur).or_insert((0, 0)),
                &mut model.prior,
            ] {
                match flag {
                    BoundaryTag::Mark => entry.0 += 1,
                    BoundaryTag::NoMark => entry.1 += 1,
                }
            }
        }
    }
    Ok(model)
}

/// Flags each token as Mark iff the smoothed Mark probability of its POS
/// context exceeds 0.5; exact ties resolve to NoMark.
pub fn predict(model: &ContextModel, sentence: &Sentence) -> Result<Vec<BoundaryTag>> {
    (0..sentence.len() as isize)
        .map(|i| {
            let p = model.mark_probability(
                pos_at(sentence, i - 1)?,
                pos_at(sentence, i)?,
                pos_at(sentence, i + 1)?,
            );
            Ok(if p > 0.5 {
                BoundaryTag::Mark
            } else {
                BoundaryTag::NoMark
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{read_corpus, ColumnLayout};
    use crate::encoding::TaskPart;
    use crate::scoring::{score_boundaries, Score};
    use crate::synth::{generate, GenerateConfig};

    fn three_column_layout() -> ColumnLayout {
        ColumnLayout::new(vec![
            ColumnRole::Word,
            ColumnRole::Pos,
            ColumnRole::Clause(TaskPart::Clauses),
        ])
        .unwrap()
    }

    /// The worked example with a hand-assigned POS row.
    const EXAMPLE: &str = "\
Coach VB (S*
them PRP *
in IN *
handling VBG (S*
complaints NNS *S)
so IN (S*
that IN *
they PRP (S*
can MD *
resolve VB *
problems NNS *
immediately RB *S)S)
. . *S)
";

    #[test]
    fn trigram_counts_match_a_hand_tally() {
        let corpus = read_corpus(EXAMPLE.as_bytes(), &three_column_layout()).unwrap();
        let model = train(&corpus, BoundaryKind::Starts).unwrap();
        // Only token 3 ("handling") has the context (IN, VBG, NNS), and it
        // starts a clause.
        assert_eq!(model.trigram_counts("IN", "VBG", "NNS"), (1, 0));
        // Token 1 ("them") has context (VB, PRP, IN) and starts nothing.
        assert_eq!(model.trigram_counts("VB", "PRP", "IN"), (0, 1));
        // Sentence boundaries use the reserved symbol.
        assert_eq!(
            model.trigram_counts(OUT_OF_SENTENCE_POS, "VB", "PRP"),
            (1, 0)
        );
        assert_eq!(model.trigram_counts("RB", ".", OUT_OF_SENTENCE_POS), (0, 1));
    }

    #[test]
    fn training_is_deterministic() {
        let corpus = generate(&GenerateConfig {
            sentences: 50,
            seed: 5,
            ..GenerateConfig::default()
        });
        let a = train(&corpus, BoundaryKind::Starts).unwrap();
        let b = train(&corpus, BoundaryKind::Starts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_corpus_predicts_start_at_first_token() {
        // Every sentence's token 0 is a clause start, so every trigram with
        // an out-of-sentence left context is pure Mark.
        let corpus = generate(&GenerateConfig {
            sentences: 30,
            max_len: 6,
            max_depth: 1,
            allow_multi_boundary: false,
            clause_density: 1.0,
            seed: 2,
        });
        let model = train(&corpus, BoundaryKind::Starts).unwrap();
        for (key, (mark, nomark)) in &model.trigram {
            if key.starts_with(OUT_OF_SENTENCE_POS) {
                assert!(mark > &0 && nomark == &0, "{key}: ({mark},{nomark})");
            }
        }
    }

    #[test]
    fn empty_model_predicts_all_nomark() {
        let corpus = read_corpus(EXAMPLE.as_bytes(), &three_column_layout()).unwrap();
        let model = ContextModel::default();
        let flags = predict(&model, &corpus.sentences()[0]).unwrap();
        assert!(flags.iter().all(|t| !t.is_mark()));
    }

    #[test]
    fn single_token_sentence_uses_out_of_sentence_context_both_sides() {
        let mut model = ContextModel::default();
        model.trigram.insert(
            format!("{OUT_OF_SENTENCE_POS}|NN|{OUT_OF_SENTENCE_POS}"),
            (3, 0),
        );
        let corpus = read_corpus("word NN (S*S)\n".as_bytes(), &three_column_layout()).unwrap();
        let flags = predict(&model, &corpus.sentences()[0]).unwrap();
        assert_eq!(flags, vec![BoundaryTag::Mark]);
    }

    #[test]
    fn self_application_beats_the_all_nomark_predictor() {
        let corpus = generate(&GenerateConfig {
            sentences: 200,
            seed: 13,
            clause_density: 0.5,
            ..GenerateConfig::default()
        });
        let model = train(&corpus, BoundaryKind::Starts).unwrap();
        let columns = parse_clause_column(&corpus).unwrap();
        let gold: Vec<_> = columns
            .iter()
            .map(|tags| derive_boundaries(tags).0)
            .collect();
        let predicted: Vec<_> = corpus
            .sentences()
            .iter()
            .map(|s| predict(&model, s).unwrap())
            .collect();
        let f = Score::from_counts(&score_boundaries(&gold, &predicted).unwrap(), 1.0).f;
        // The all-NoMark predictor scores F = 0 on any corpus with a start.
        assert!(gold.iter().flatten().any(|t| t.is_mark()));
        assert!(f > 0.0, "self-application F was {f}");
    }

    #[test]
    fn save_then_load_round_trips() {
        let corpus = read_corpus(EXAMPLE.as_bytes(), &three_column_layout()).unwrap();
        let model = train(&corpus, BoundaryKind::Ends).unwrap();
        let mut bytes = Vec::new();
        model.save(&mut bytes).unwrap();
        let loaded = ContextModel::load(bytes.as_slice()).unwrap();
        assert_eq!(loaded, model);
        let mut again = Vec::new();
        loaded.save(&mut again).unwrap();
        assert_eq!(bytes, again);
    }

    #[test]
    fn missing_pos_column_is_a_layout_error() {
        let layout = ColumnLayout::new(vec![
            ColumnRole::Word,
            ColumnRole::Clause(TaskPart::Clauses),
        ])
        .unwrap();
        let corpus = read_corpus("a (S*S)\n".as_bytes(), &layout).unwrap();
        assert!(matches!(
            train(&corpus, BoundaryKind::Starts),
            Err(Error::Layout(_))
        ));
    }

    #[test]
    fn malformed_model_file_is_rejected() {
        assert!(ContextModel::load("trigram\tA|B|C\tx\t1\n".as_bytes()).is_err());
        assert!(ContextModel::load("what\tA\t1\t2\n".as_bytes()).is_err());
        assert!(ContextModel::load("trigram\tA|B|C\t1\n".as_bytes()).is_err());
    }
}
