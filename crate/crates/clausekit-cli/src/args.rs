//! Command-line definitions and the mapping from column flags to layouts.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use clausekit::corpus::{ColumnLayout, ColumnRole};
use clausekit::encoding::TaskPart;
use clausekit::ClosurePolicy;

#[derive(Parser)]
#[command(
    name = "clausekit",
    version,
    about = "Clause identification pipeline over whitespace-column corpora",
    after_help = "Exit status: 0 success, 1 data or format error, 2 usage error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Convert treebank parse trees into a task-format corpus
    Ingest {
        /// Treebank file of bracketed trees, or - for stdin
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Collapse duplicate spans from unary clause chains
        #[arg(long)]
        dedupe_spans: bool,
    },
    /// Re-encode the clause column between bracket and flag encodings
    Convert {
        /// Encoding of the input clause column
        #[arg(long, value_enum)]
        from: Encoding,
        /// Encoding of the output clause column
        #[arg(long, value_enum)]
        to: Encoding,
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        columns: ColumnOpts,
    },
    /// Check that every sentence's bracket column is balanced
    Validate {
        input: PathBuf,
        #[command(flatten)]
        columns: ColumnOpts,
    },
    /// Split a bracket column into start-flag and end-flag columns
    Derive {
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        columns: ColumnOpts,
    },
    /// Build a bracket column from start-flag and end-flag columns
    Assemble {
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Column carrying S/X start flags (0-based)
        #[arg(long, default_value_t = 1)]
        starts_col: usize,
        /// Column carrying E/X end flags (0-based)
        #[arg(long, default_value_t = 2)]
        ends_col: usize,
        /// How to resolve opens left unmatched at sentence end
        #[arg(long, default_value_t = ClosurePolicy::Strict)]
        policy: ClosurePolicy,
        /// Add a whole-sentence clause when none was produced
        #[arg(long)]
        add_sentence_clause: bool,
        /// Word column (0-based)
        #[arg(long, default_value_t = 0)]
        word_col: usize,
    },
    /// Predict one whole-sentence clause per sentence
    Baseline {
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Encoding of the emitted prediction column
        #[arg(long, value_enum, default_value_t = Encoding::Brackets)]
        encoding: Encoding,
        #[command(flatten)]
        columns: ColumnOpts,
    },
    /// Count POS-context boundary statistics from a gold bracket column
    Train {
        input: PathBuf,
        /// Where to write the model file
        #[arg(long)]
        model: PathBuf,
        /// Which boundary side to learn
        #[arg(long, value_enum)]
        target: Target,
        #[command(flatten)]
        columns: ColumnOpts,
    },
    /// Flag boundaries with a trained model
    Predict {
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Model file written by train
        #[arg(long)]
        model: PathBuf,
        /// Which boundary side the model was trained for
        #[arg(long, value_enum)]
        target: Target,
        #[command(flatten)]
        columns: ColumnOpts,
    },
    /// Score a prediction against gold for one task part
    Score {
        /// Task part: 1 clause starts, 2 clause ends, 3 complete clauses
        #[arg(long, value_parser = parse_part)]
        part: TaskPart,
        gold: PathBuf,
        prediction: PathBuf,
        /// Beta of the F measure
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[command(flatten)]
        columns: ColumnOpts,
        /// Clause column of the gold file (overrides --clause-col)
        #[arg(long)]
        gold_clause_col: Option<usize>,
        /// Clause column of the prediction file (overrides --clause-col)
        #[arg(long)]
        pred_clause_col: Option<usize>,
    },
    /// Generate a seeded synthetic gold corpus
    Generate {
        #[arg(long, short, default_value_t = 100)]
        sentences: usize,
        #[arg(long, default_value_t = 25)]
        max_len: usize,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        /// Allow tokens that open or close more than one clause
        #[arg(long)]
        multi_boundary: bool,
        /// Chance of starting a clause at each opportunity, in [0,1]
        #[arg(long, default_value_t = 0.35)]
        density: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Encoding {
    /// Bracket tags such as (S*, *S)S)
    Brackets,
    /// S/X start flags
    Starts,
    /// E/X end flags
    Ends,
}

impl Encoding {
    pub fn part(self) -> TaskPart {
        match self {
            Encoding::Brackets => TaskPart::Clauses,
            Encoding::Starts => TaskPart::Starts,
            Encoding::Ends => TaskPart::Ends,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Starts,
    Ends,
}

impl Target {
    pub fn kind(self) -> clausekit::BoundaryKind {
        match self {
            Target::Starts => clausekit::BoundaryKind::Starts,
            Target::Ends => clausekit::BoundaryKind::Ends,
        }
    }
}

fn parse_part(text: &str) -> Result<TaskPart, String> {
    text.parse::<u8>()
        .ok()
        .and_then(TaskPart::from_number)
        .ok_or_else(|| format!("invalid part {text:?}; expected 1, 2 or 3"))
}

/// Column-role flags shared by the corpus-reading subcommands.
///
/// With no flags the standard four-column layout applies (word, POS, chunk,
/// clause at columns 0-3). As soon as any flag is given, only the named
/// columns are read; the word column defaults to 0.
#[derive(Debug, Clone, Default, Args)]
pub struct ColumnOpts {
    /// Word column (0-based)
    #[arg(long)]
    pub word_col: Option<usize>,
    /// POS column (0-based)
    #[arg(long)]
    pub pos_col: Option<usize>,
    /// Chunk column (0-based)
    #[arg(long)]
    pub chunk_col: Option<usize>,
    /// Clause annotation column (0-based)
    #[arg(long)]
    pub clause_col: Option<usize>,
}

impl ColumnOpts {
    fn is_default(&self) -> bool {
        self.word_col.is_none()
            && self.pos_col.is_none()
            && self.chunk_col.is_none()
            && self.clause_col.is_none()
    }

    /// Builds the input layout, reading the clause column as `clause_part`.
    pub fn layout(&self, clause_part: TaskPart) -> Result<ColumnLayout, String> {
        if self.is_default() {
            return build_layout(vec![
                (0, ColumnRole::Word),
                (1, ColumnRole::Pos),
                (2, ColumnRole::Chunk),
                (3, ColumnRole::Clause(clause_part)),
            ]);
        }
        let mut columns = vec![(self.word_col.unwrap_or(0), ColumnRole::Word)];
        if let Some(c) = self.pos_col {
            columns.push((c, ColumnRole::Pos));
        }
        if let Some(c) = self.chunk_col {
            columns.push((c, ColumnRole::Chunk));
        }
        if let Some(c) = self.clause_col {
            columns.push((c, ColumnRole::Clause(clause_part)));
        }
        build_layout(columns)
    }

    /// Layout with an explicit clause column, as used by score's per-file
    /// overrides.
    pub fn layout_with_clause_col(
        &self,
        clause_part: TaskPart,
        clause_col: Option<usize>,
    ) -> Result<ColumnLayout, String> {
        match clause_col.or(self.clause_col) {
            None if self.is_default() => self.layout(clause_part),
            None => Err("a clause column is required; pass --clause-col".into()),
            Some(col) => {
                let mut with = self.clone();
                with.clause_col = Some(col);
                with.layout(clause_part)
            }
        }
    }
}

/// Turns (index, role) pairs into a layout, filling gaps with ignore
/// columns and rejecting duplicate indices.
pub fn build_layout(columns: Vec<(usize, ColumnRole)>) -> Result<ColumnLayout, String> {
    let width = columns.iter().map(|(i, _)| i + 1).max().unwrap_or(0);
    let mut roles = vec![ColumnRole::Ignore; width];
    for (index, role) in columns {
        if roles[index] != ColumnRole::Ignore {
            return Err(format!("column {index} assigned to two roles"));
        }
        roles[index] = role;
    }
    ColumnLayout::new(roles).map_err(|e| e.to_string())
}
