//! The per-subcommand implementations: read a corpus, apply one pipeline
//! stage, write a corpus (or a report).

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clausekit::baseline::baseline_predict;
use clausekit::corpus::{
    corpus_to_string, read_corpus, ColumnLayout, ColumnRole, Corpus, Sentence, Token,
};
use clausekit::encoding::{
    derive_boundaries, parse_boundary_column, parse_clause_column, spans_from_tags, spans_to_tags,
    validate, BoundaryKind, BoundaryTag, TaskPart,
};
use clausekit::error::Error;
use clausekit::predictor::{predict, train, ContextModel};
use clausekit::scoring::{score_boundaries, score_clauses, PartCounts, Score};
use clausekit::synth::{generate, GenerateConfig};
use clausekit::treebank::{extract_clauses, parse_trees};
use clausekit::{assemble, AssemblyPolicy};

use crate::args::Encoding;

pub type OpResult = Result<u8, Error>;

/// Opens a file for reading, naming the path in the error.
fn open_file(path: &Path) -> io::Result<File> {
    File::open(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// Creates a file for writing, naming the path in the error.
fn create_file(path: &Path) -> io::Result<File> {
    File::create(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

pub fn read_input(path: &Path) -> io::Result<String> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)?;
    } else {
        open_file(path)?.read_to_string(&mut text)?;
    }
    Ok(text)
}

pub fn write_output(output: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match output {
        Some(path) => {
            let mut writer = BufWriter::new(create_file(path)?);
            writer.write_all(text.as_bytes())?;
            writer.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut handle = stdout.lock();
            handle.write_all(text.as_bytes())?;
            handle.flush()
        }
    }
}

fn read_corpus_file(path: &Path, layout: &ColumnLayout) -> Result<Corpus, Error> {
    let text = read_input(path)?;
    read_corpus(BufReader::new(text.as_bytes()), layout).map_err(|e| match e {
        Error::Format { line, message } => Error::Format {
            line,
            message: format!("{message} (in {})", path.display()),
        },
        other => other,
    })
}

/// The output layout of a transform: the input's retained columns with its
/// clause columns replaced by `replacement` — in place of the first clause
/// column, or appended when the input has none or `append` is set.
fn replace_clause_columns(
    layout: &ColumnLayout,
    replacement: &[ColumnRole],
    append: bool,
) -> Vec<ColumnRole> {
    let mut roles = Vec::new();
    let mut replaced = false;
    for role in layout.roles() {
        match role {
            ColumnRole::Ignore => {}
            ColumnRole::Clause(_) => {
                if !append && !replaced {
                    roles.extend_from_slice(replacement);
                    replaced = true;
                }
            }
            other => roles.push(*other),
        }
    }
    if !replaced {
        roles.extend_from_slice(replacement);
    }
    roles
}

/// Rebuilds a corpus around fresh clause columns. `columns[s][k][t]` is the
/// annotation of token `t` in the k-th new clause column of sentence `s`.
fn rebuild_corpus(
    corpus: &Corpus,
    roles: Vec<ColumnRole>,
    columns: Vec<Vec<Vec<String>>>,
) -> Result<Corpus, Error> {
    let layout = ColumnLayout::new(roles)?;
    let sentences = corpus
        .sentences()
        .iter()
        .zip(columns)
        .map(|(sentence, new_columns)| {
            let tokens = sentence
                .tokens()
                .iter()
                .enumerate()
                .map(|(t, token)| Token {
                    word: token.word.clone(),
                    pos: token.pos.clone(),
                    chunk: token.chunk.clone(),
                    clause_annotations: new_columns.iter().map(|col| col[t].clone()).collect(),
                })
                .collect();
            Sentence::new(tokens)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Corpus::new(sentences, layout)
}

fn write_corpus_output(output: Option<&PathBuf>, corpus: &Corpus) -> Result<u8, Error> {
    write_output(output, &corpus_to_string(corpus))?;
    Ok(0)
}

pub fn ingest(input: &Path, output: Option<&PathBuf>, dedupe_spans: bool) -> OpResult {
    let text = read_input(input)?;
    let trees = parse_trees(&text)?;
    if trees.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut sentences = Vec::with_capacity(trees.len());
    for tree in &trees {
        let mut sentence = extract_clauses(tree)?;
        if dedupe_spans {
            sentence = dedupe_sentence(&sentence)?;
        }
        sentences.push(sentence);
    }
    let corpus = Corpus::new(sentences, ColumnLayout::standard())?;
    write_corpus_output(output, &corpus)
}

fn dedupe_sentence(sentence: &Sentence) -> Result<Sentence, Error> {
    let tags = sentence
        .tokens()
        .iter()
        .map(|t| clausekit::parse_bracket_tag(&t.clause_annotations[0]))
        .collect::<Result<Vec<_>, _>>()?;
    let spans = spans_from_tags(&tags)?.deduplicated();
    let tokens = sentence
        .tokens()
        .iter()
        .zip(spans_to_tags(&spans, sentence.len())?)
        .map(|(token, tag)| Token {
            clause_annotations: vec![tag.to_string()],
            ..token.clone()
        })
        .collect();
    Sentence::new(tokens)
}

pub fn convert(
    from: Encoding,
    to: Encoding,
    input: &Path,
    output: Option<&PathBuf>,
    layout: &ColumnLayout,
) -> OpResult {
    let corpus = read_corpus_file(input, layout)?;
    let columns: Vec<Vec<String>> = match from {
        Encoding::Brackets => {
            let tag_columns = parse_clause_column(&corpus)?;
            tag_columns
                .iter()
                .map(|tags| match to {
                    Encoding::Brackets => tags.iter().map(|t| t.to_string()).collect(),
                    Encoding::Starts => {
                        render_flags(&derive_boundaries(tags).0, BoundaryKind::Starts)
                    }
                    Encoding::Ends => render_flags(&derive_boundaries(tags).1, BoundaryKind::Ends),
                })
                .collect()
        }
        Encoding::Starts | Encoding::Ends => {
            let kind = match from {
                Encoding::Starts => BoundaryKind::Starts,
                _ => BoundaryKind::Ends,
            };
            parse_boundary_column(&corpus, kind)?
                .iter()
                .map(|flags| render_flags(flags, kind))
                .collect()
        }
    };
    let roles = replace_clause_columns(corpus.layout(), &[ColumnRole::Clause(to.part())], false);
    let rebuilt = rebuild_corpus(
        &corpus,
        roles,
        columns.into_iter().map(|c| vec![c]).collect(),
    )?;
    write_corpus_output(output, &rebuilt)
}

fn render_flags(flags: &[BoundaryTag], kind: BoundaryKind) -> Vec<String> {
    flags.iter().map(|f| f.render(kind).to_string()).collect()
}

pub fn validate_corpus(input: &Path, layout: &ColumnLayout) -> OpResult {
    let corpus = read_corpus_file(input, layout)?;
    let slot = corpus
        .layout()
        .annotation_slot(TaskPart::Clauses)
        .ok_or_else(|| Error::Layout("corpus has no clause bracket column".into()))?;
    let mut invalid = 0;
    let mut report = String::new();
    for (i, sentence) in corpus.sentences().iter().enumerate() {
        let tags: Result<Vec<_>, _> = sentence
            .tokens()
            .iter()
            .map(|t| clausekit::parse_bracket_tag(&t.clause_annotations[slot]))
            .collect();
        let problem = match tags {
            Err(error) => Some(error.to_string()),
            Ok(tags) => validate(&tags).err().map(|v| v.to_string()),
        };
        if let Some(problem) = problem {
            invalid += 1;
            report.push_str(&format!("sentence {i}: {problem}\n"));
        }
    }
    write_output(None, &report)?;
    eprintln!(
        "clausekit: checked {} sentence(s), {} invalid",
        corpus.len(),
        invalid
    );
    Ok(if invalid > 0 { 1 } else { 0 })
}

pub fn derive(input: &Path, output: Option<&PathBuf>, layout: &ColumnLayout) -> OpResult {
    let corpus = read_corpus_file(input, layout)?;
    let columns = parse_clause_column(&corpus)?
        .iter()
        .map(|tags| {
            let (starts, ends) = derive_boundaries(tags);
            vec![
                render_flags(&starts, BoundaryKind::Starts),
                render_flags(&ends, BoundaryKind::Ends),
            ]
        })
        .collect();
    let roles = replace_clause_columns(
        corpus.layout(),
        &[
            ColumnRole::Clause(TaskPart::Starts),
            ColumnRole::Clause(TaskPart::Ends),
        ],
        false,
    );
    let rebuilt = rebuild_corpus(&corpus, roles, columns)?;
    write_corpus_output(output, &rebuilt)
}

pub fn assemble_corpus(
    input: &Path,
    output: Option<&PathBuf>,
    layout: &ColumnLayout,
    policy: AssemblyPolicy,
) -> OpResult {
    let corpus = read_corpus_file(input, layout)?;
    let starts = parse_boundary_column(&corpus, BoundaryKind::Starts)?;
    let ends = parse_boundary_column(&corpus, BoundaryKind::Ends)?;
    let columns = starts
        .iter()
        .zip(&ends)
        .map(|(s, e)| {
            let set = assemble(s, e, policy)?;
            let tags = spans_to_tags(&set, s.len())?;
            Ok(vec![tags.iter().map(|t| t.to_string()).collect()])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let roles = replace_clause_columns(
        corpus.layout(),
        &[ColumnRole::Clause(TaskPart::Clauses)],
        false,
    );
    let rebuilt = rebuild_corpus(&corpus, roles, columns)?;
    write_corpus_output(output, &rebuilt)
}

pub fn baseline(
    input: &Path,
    output: Option<&PathBuf>,
    layout: &ColumnLayout,
    encoding: Encoding,
) -> OpResult {
    let corpus = read_corpus_file(input, layout)?;
    let columns = corpus
        .sentences()
        .iter()
        .map(|sentence| {
            let prediction = baseline_predict(sentence);
            let column = match encoding {
                Encoding::Brackets => spans_to_tags(&prediction.clauses, sentence.len())
                    .expect("baseline spans fit the sentence")
                    .iter()
                    .map(|t| t.to_string())
                    .collect(),
                Encoding::Starts => render_flags(&prediction.starts, BoundaryKind::Starts),
                Encoding::Ends => render_flags(&prediction.ends, BoundaryKind::Ends),
            };
            vec![column]
        })
        .collect();
    let roles = replace_clause_columns(
        corpus.layout(),
        &[ColumnRole::Clause(encoding.part())],
        true,
    );
    let rebuilt = rebuild_corpus(&corpus, roles, columns)?;
    write_corpus_output(output, &rebuilt)
}

pub fn train_model(
    input: &Path,
    model_path: &Path,
    target: BoundaryKind,
    layout: &ColumnLayout,
) -> OpResult {
    let corpus = read_corpus_file(input, layout)?;
    let model = train(&corpus, target)?;
    let mut writer = BufWriter::new(create_file(model_path)?);
    model.save(&mut writer)?;
    writer.flush()?;
    Ok(0)
}

pub fn predict_corpus(
    input: &Path,
    output: Option<&PathBuf>,
    model_path: &Path,
    target: BoundaryKind,
    layout: &ColumnLayout,
) -> OpResult {
    let corpus = read_corpus_file(input, layout)?;
    let model = ContextModel::load(BufReader::new(open_file(model_path)?))?;
    let columns = corpus
        .sentences()
        .iter()
        .map(|sentence| {
            let flags = predict(&model, sentence)?;
            Ok(vec![render_flags(&flags, target)])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let roles = replace_clause_columns(corpus.layout(), &[ColumnRole::Clause(target.part())], true);
    let rebuilt = rebuild_corpus(&corpus, roles, columns)?;
    write_corpus_output(output, &rebuilt)
}

pub fn score(
    part: TaskPart,
    gold_path: &Path,
    pred_path: &Path,
    beta: f64,
    gold_layout: &ColumnLayout,
    pred_layout: &ColumnLayout,
) -> OpResult {
    let gold = read_corpus_file(gold_path, gold_layout)?;
    let prediction = read_corpus_file(pred_path, pred_layout)?;
    check_tokenization(&gold, &prediction)?;
    let counts = count_part(part, &gold, &prediction)?;
    let score = Score::from_counts(&counts, beta);
    let mut report = score.human_line();
    report.push('\n');
    report.push_str(&score.machine_line(part, &counts));
    report.push('\n');
    write_output(None, &report)?;
    Ok(0)
}

/// Refuses gold/prediction pairs whose sentences or words diverge; silent
/// realignment would hide upstream bugs.
fn check_tokenization(gold: &Corpus, prediction: &Corpus) -> Result<(), Error> {
    if gold.len() != prediction.len() {
        return Err(Error::Alignment {
            sentence: gold.len().min(prediction.len()),
            message: format!(
                "gold has {} sentences, prediction has {}",
                gold.len(),
                prediction.len()
            ),
        });
    }
    for (i, (g, p)) in gold
        .sentences()
        .iter()
        .zip(prediction.sentences())
        .enumerate()
    {
        if g.len() != p.len() {
            return Err(Error::Alignment {
                sentence: i,
                message: format!("gold has {} tokens, prediction has {}", g.len(), p.len()),
            });
        }
        for (gt, pt) in g.tokens().iter().zip(p.tokens()) {
            if gt.word != pt.word {
                return Err(Error::Alignment {
                    sentence: i,
                    message: format!(
                        "tokenization differs: gold word {:?} vs prediction word {:?}",
                        gt.word, pt.word
                    ),
                });
            }
        }
    }
    Ok(())
}

fn count_part(part: TaskPart, gold: &Corpus, prediction: &Corpus) -> Result<PartCounts, Error> {
    match part.boundary() {
        Some(kind) => {
            let gold_flags = parse_boundary_column(gold, kind)?;
            let pred_flags = parse_boundary_column(prediction, kind)?;
            score_boundaries(&gold_flags, &pred_flags)
        }
        None => {
            let gold_sets = parse_clause_column(gold)?
                .iter()
                .map(|tags| spans_from_tags(tags))
                .collect::<Result<Vec<_>, _>>()?;
            let pred_sets = parse_clause_column(prediction)?
                .iter()
                .map(|tags| spans_from_tags(tags))
                .collect::<Result<Vec<_>, _>>()?;
            score_clauses(&gold_sets, &pred_sets)
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn generate_corpus(
    sentences: usize,
    max_len: usize,
    max_depth: usize,
    multi_boundary: bool,
    density: f64,
    seed: u64,
    output: Option<&PathBuf>,
) -> OpResult {
    let corpus = generate(&GenerateConfig {
        sentences,
        max_len,
        max_depth,
        allow_multi_boundary: multi_boundary,
        clause_density: density,
        seed,
    });
    write_corpus_output(output, &corpus)
}
