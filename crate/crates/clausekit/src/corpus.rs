//! In-memory model for annotated corpora and the whitespace-column,
//! blank-line-separated file format every pipeline stage exchanges.
//!
//! One line per token, columns split on runs of spaces or tabs, sentences
//! separated by blank lines. Which column means what is declared by a
//! [`ColumnLayout`] rather than guessed from the data.

use std::io::{BufRead, Write};

use crate::encoding::TaskPart;
use crate::error::{Error, Result};

/// What a column holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnRole {
    Word,
    Pos,
    Chunk,
    /// A clause annotation column for one task part: start flags, end flags
    /// or bracket tags. Uninterpreted at this layer.
    Clause(TaskPart),
    /// Present in the file but not retained.
    Ignore,
}

/// Mapping from column index to role. Exactly one column must be the word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnLayout {
    roles: Vec<ColumnRole>,
}

impl ColumnLayout {
    pub fn new(roles: Vec<ColumnRole>) -> Result<ColumnLayout> {
        let words = roles.iter().filter(|r| **r == ColumnRole::Word).count();
        if words != 1 {
            return Err(Error::Layout(format!(
                "layout must have exactly one word column, found {words}"
            )));
        }
        Ok(ColumnLayout { roles })
    }

    /// The default four-column layout: word, POS, chunk, bracket tags.
    pub fn standard() -> ColumnLayout {
        ColumnLayout {
            roles: vec![
                ColumnRole::Word,
                ColumnRole::Pos,
                ColumnRole::Chunk,
                ColumnRole::Clause(TaskPart::Clauses),
            ],
        }
    }

    pub fn roles(&self) -> &[ColumnRole] {
        &self.roles
    }

    pub fn column_count(&self) -> usize {
        self.roles.len()
    }

    pub fn position(&self, role: ColumnRole) -> Option<usize> {
        self.roles.iter().position(|r| *r == role)
    }

    /// Index into `Token::clause_annotations` for the given part's column:
    /// clause columns are stored in column order, skipping everything else.
    pub fn annotation_slot(&self, part: TaskPart) -> Option<usize> {
        self.roles
            .iter()
            .filter_map(|r| match r {
                ColumnRole::Clause(p) => Some(*p),
                _ => None,
            })
            .position(|p| p == part)
    }

    /// The parts of the clause columns, in column order.
    pub fn clause_parts(&self) -> Vec<TaskPart> {
        self.roles
            .iter()
            .filter_map(|r| match r {
                ColumnRole::Clause(p) => Some(*p),
                _ => None,
            })
            .collect()
    }
}

impl Default for ColumnLayout {
    fn default() -> Self {
        ColumnLayout::standard()
    }
}

/// One token: the word plus whatever annotation columns the corpus carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub word: String,
    pub pos: Option<String>,
    pub chunk: Option<String>,
    /// One string per clause column, in layout order; boundary flags or
    /// bracket tags, uninterpreted here.
    pub clause_annotations: Vec<String>,
}

impl Token {
    pub fn new(word: impl Into<String>) -> Result<Token> {
        let word = word.into();
        validate_word(&word)?;
        Ok(Token {
            word,
            pos: None,
            chunk: None,
            clause_annotations: Vec::new(),
        })
    }

    pub fn with_pos(mut self, pos: impl Into<String>) -> Token {
        self.pos = Some(pos.into());
        self
    }

    pub fn with_chunk(mut self, chunk: impl Into<String>) -> Result<Token> {
        let chunk = chunk.into();
        validate_chunk(&chunk)?;
        self.chunk = Some(chunk);
        Ok(self)
    }

    pub fn with_annotation(mut self, annotation: impl Into<String>) -> Token {
        self.clause_annotations.push(annotation.into());
        self
    }
}

fn validate_word(word: &str) -> Result<()> {
    if word.is_empty() || word.chars().any(|c| c.is_whitespace()) {
        return Err(Error::Layout(format!(
            "word {word:?} must be non-empty and free of whitespace"
        )));
    }
    Ok(())
}

/// `O`, `B-<label>` or `I-<label>` with a non-empty label.
fn validate_chunk(chunk: &str) -> Result<()> {
    let ok = chunk == "O"
        || chunk
            .strip_prefix("B-")
            .or_else(|| chunk.strip_prefix("I-"))
            .is_some_and(|label| !label.is_empty());
    if ok {
        Ok(())
    } else {
        Err(Error::Layout(format!(
            "chunk tag {chunk:?} is not O, B-<label> or I-<label>"
        )))
    }
}

/// A non-empty token sequence in which every token carries the same number
/// of clause annotation columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Result<Sentence> {
        let first = tokens
            .first()
            .ok_or_else(|| Error::Layout("sentence must contain at least one token".into()))?;
        let columns = first.clause_annotations.len();
        if tokens.iter().any(|t| t.clause_annotations.len() != columns) {
            return Err(Error::Layout(
                "tokens of one sentence must carry the same number of annotation columns".into(),
            ));
        }
        Ok(Sentence { tokens })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }
}

/// An ordered list of sentences plus the layout they conform to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Sentence>,
    layout: ColumnLayout,
}

impl Corpus {
    pub fn new(sentences: Vec<Sentence>, layout: ColumnLayout) -> Result<Corpus> {
        let clause_columns = layout.clause_parts().len();
        let pos = layout.position(ColumnRole::Pos).is_some();
        let chunk = layout.position(ColumnRole::Chunk).is_some();
        for (i, sentence) in sentences.iter().enumerate() {
            for token in sentence.tokens() {
                if token.clause_annotations.len() != clause_columns
                    || (pos && token.pos.is_none())
                    || (chunk && token.chunk.is_none())
                {
                    return Err(Error::Layout(format!(
                        "sentence {i} does not conform to the declared column layout"
                    )));
                }
            }
        }
        Ok(Corpus { sentences, layout })
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn layout(&self) -> &ColumnLayout {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Reads a corpus from a character stream.
///
/// Tokens are grouped into sentences at blank lines; consecutive blank lines
/// collapse and trailing blank lines are ignored. Columns are split on runs
/// of spaces and tabs. Columns beyond the layout are dropped.
///
/// # Errors
///
/// A line with fewer columns than the layout requires is a format error
/// carrying its 1-based line number; an input with no token lines at all is
/// an empty-corpus error.
pub fn read_corpus<R: BufRead>(reader: R, layout: &ColumnLayout) -> Result<Corpus> {
    let mut sentences = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            if !tokens.is_empty() {
                sentences.push(Sentence::new(std::mem::take(&mut tokens))?);
            }
            continue;
        }
        tokens.push(parse_token_line(line, index + 1, layout)?);
    }
    if !tokens.is_empty() {
        sentences.push(Sentence::new(tokens)?);
    }
    if sentences.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Corpus::new(sentences, layout.clone())
}

fn parse_token_line(line: &str, line_number: usize, layout: &ColumnLayout) -> Result<Token> {
    let columns: Vec<&str> = line.split_whitespace().collect();
    if columns.len() < layout.column_count() {
        return Err(Error::Format {
            line: line_number,
            message: format!(
                "expected at least {} columns, found {}",
                layout.column_count(),
                columns.len()
            ),
        });
    }
    let mut word = None;
    let mut pos = None;
    let mut chunk = None;
    let mut annotations = Vec::new();
    for (value, role) in columns.iter().zip(layout.roles()) {
        match role {
            ColumnRole::Word => word = Some(value.to_string()),
            ColumnRole::Pos => pos = Some(value.to_string()),
            ColumnRole::Chunk => {
                validate_chunk(value).map_err(|e| Error::Format {
                    line: line_number,
                    message: e.to_string(),
                })?;
                chunk = Some(value.to_string());
            }
            ColumnRole::Clause(_) => annotations.push(value.to_string()),
            ColumnRole::Ignore => {}
        }
    }
    let word = word.expect("layout has a word column");
    validate_word(&word).map_err(|e| Error::Format {
        line: line_number,
        message: e.to_string(),
    })?;
    Ok(Token {
        word,
        pos,
        chunk,
        clause_annotations: annotations,
    })
}

/// Writes a corpus in the interchange format: one space between columns,
/// one blank line after each sentence. Reading the output back with the
/// same layout reproduces the corpus.
///
/// # Errors
///
/// A layout error if the output layout asks for a column the corpus does not
/// carry, or contains an ignore column (there is nothing to write there).
pub fn write_corpus<W: Write>(
    writer: &mut W,
    corpus: &Corpus,
    layout: &ColumnLayout,
) -> Result<()> {
    for sentence in corpus.sentences() {
        for token in sentence.tokens() {
            let mut line = String::new();
            for role in layout.roles() {
                let value = match role {
                    ColumnRole::Word => token.word.as_str(),
                    ColumnRole::Pos => token
                        .pos
                        .as_deref()
                        .ok_or_else(|| Error::Layout("corpus has no POS column".into()))?,
                    ColumnRole::Chunk => token
                        .chunk
                        .as_deref()
                        .ok_or_else(|| Error::Layout("corpus has no chunk column".into()))?,
                    ColumnRole::Clause(part) => {
                        let slot = corpus.layout().annotation_slot(*part).ok_or_else(|| {
                            Error::Layout(format!(
                                "corpus has no part-{} clause column",
                                part.number()
                            ))
                        })?;
                        token.clause_annotations[slot].as_str()
                    }
                    ColumnRole::Ignore => {
                        return Err(Error::Layout("cannot write an ignore column".into()))
                    }
                };
                if !line.is_empty() {
                    line.push(' ');
                }
                line.push_str(value);
            }
            writeln!(writer, "{line}")?;
        }
        writeln!(writer)?;
    }
    Ok(())
}

/// [`write_corpus`] into a string, using the corpus's own layout with its
/// ignore columns omitted (their content was never retained).
pub fn corpus_to_string(corpus: &Corpus) -> String {
    let roles = corpus
        .layout()
        .roles()
        .iter()
        .copied()
        .filter(|r| *r != ColumnRole::Ignore)
        .collect();
    let layout = ColumnLayout::new(roles).expect("the corpus layout has a word column");
    let mut out = Vec::new();
    write_corpus(&mut out, corpus, &layout)
        .expect("writing a corpus with its own retained columns cannot fail");
    String::from_utf8(out).expect("corpus text is valid UTF-8")
}
