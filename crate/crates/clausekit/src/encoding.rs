//! The clause-tag algebra: the three per-token encodings used by the task
//! and the conversions between tag sequences and clause span multisets.
//!
//! Clauses of one sentence form a multiset of token spans that never cross
//! (two clauses are either disjoint or nested, equal spans allowed). Three
//! encodings carry that structure per token:
//!
//! * bracket tags — `(S*`, `*S)`, `(S*S)`, `*S)S)`, ... — zero or more
//!   opens, then `*`, then zero or more closes;
//! * start flags — `S` (a clause starts here) or `X`;
//! * end flags — `E` (a clause ends here) or `X`.
//!
//! Bracket tags are lossless; the two flag columns are the lossy projections
//! used by the first two parts of the task.

use std::fmt;

use crate::corpus::{ColumnRole, Corpus};
use crate::error::{Error, Result};

/// The three subproblems: flagging clause starts, flagging clause ends, and
/// producing the full embedded bracketing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TaskPart {
    Starts,
    Ends,
    Clauses,
}

impl TaskPart {
    pub fn number(self) -> u8 {
        match self {
            TaskPart::Starts => 1,
            TaskPart::Ends => 2,
            TaskPart::Clauses => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<TaskPart> {
        match n {
            1 => Some(TaskPart::Starts),
            2 => Some(TaskPart::Ends),
            3 => Some(TaskPart::Clauses),
            _ => None,
        }
    }

    /// The boundary side this part flags, if it is a boundary part.
    pub fn boundary(self) -> Option<BoundaryKind> {
        match self {
            TaskPart::Starts => Some(BoundaryKind::Starts),
            TaskPart::Ends => Some(BoundaryKind::Ends),
            TaskPart::Clauses => None,
        }
    }
}

/// Which side of a clause a flag column marks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Starts,
    Ends,
}

impl BoundaryKind {
    /// The letter used for a marked token: `S` for starts, `E` for ends.
    pub fn mark_letter(self) -> &'static str {
        match self {
            BoundaryKind::Starts => "S",
            BoundaryKind::Ends => "E",
        }
    }

    pub fn part(self) -> TaskPart {
        match self {
            BoundaryKind::Starts => TaskPart::Starts,
            BoundaryKind::Ends => TaskPart::Ends,
        }
    }
}

/// A single start- or end-flag: `S`/`E` versus `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    Mark,
    NoMark,
}

impl BoundaryTag {
    pub fn is_mark(self) -> bool {
        matches!(self, BoundaryTag::Mark)
    }

    pub fn render(self, kind: BoundaryKind) -> &'static str {
        match self {
            BoundaryTag::Mark => kind.mark_letter(),
            BoundaryTag::NoMark => "X",
        }
    }

    /// Parses one flag; only the part's mark letter and `X` are accepted.
    pub fn parse(text: &str, kind: BoundaryKind) -> Result<BoundaryTag> {
        if text == "X" {
            Ok(BoundaryTag::NoMark)
        } else if text == kind.mark_letter() {
            Ok(BoundaryTag::Mark)
        } else {
            Err(Error::TagSyntax {
                text: text.to_string(),
                expected: match kind {
                    BoundaryKind::Starts => "start flag (S or X)",
                    BoundaryKind::Ends => "end flag (E or X)",
                },
            })
        }
    }
}

/// Per-token counts of clause opens and closes.
///
/// Serialized as `(S` repeated `opens` times, one `*`, then `S)` repeated
/// `closes` times; opens always precede closes within a token, which is what
/// makes the one-token clause `(S*S)` well formed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct BracketTag {
    pub opens: usize,
    pub closes: usize,
}

impl BracketTag {
    pub fn new(opens: usize, closes: usize) -> BracketTag {
        BracketTag { opens, closes }
    }
}

impl fmt::Display for BracketTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.opens {
            f.write_str("(S")?;
        }
        f.write_str("*")?;
        for _ in 0..self.closes {
            f.write_str("S)")?;
        }
        Ok(())
    }
}

/// Parses a bracket tag of the shape `open* "*" close*` with `open = "(S"`
/// and `close = "S)"`. Anything else is a tag syntax error.
pub fn parse_bracket_tag(text: &str) -> Result<BracketTag> {
    let err = || Error::TagSyntax {
        text: text.to_string(),
        expected: "bracket",
    };
    let mut rest = text;
    let mut opens = 0;
    while let Some(r) = rest.strip_prefix("(S") {
        opens += 1;
        rest = r;
    }
    rest = rest.strip_prefix('*').ok_or_else(err)?;
    let mut closes = 0;
    while let Some(r) = rest.strip_prefix("S)") {
        closes += 1;
        rest = r;
    }
    if !rest.is_empty() {
        return Err(err());
    }
    Ok(BracketTag { opens, closes })
}

/// Renders a bracket tag; inverse of [`parse_bracket_tag`].
pub fn format_bracket_tag(tag: BracketTag) -> String {
    tag.to_string()
}

/// Where and how a bracket-tag sequence failed the balance check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceViolation {
    /// A close with no matching open; `token` is where the depth first went
    /// negative.
    CloseWithoutOpen { token: usize },
    /// Opens left unmatched at the end of the sentence.
    UnclosedOpens {
        count: usize,
        first_open_token: usize,
    },
}

impl fmt::Display for BalanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BalanceViolation::CloseWithoutOpen { token } => {
                write!(f, "close without open at token {token}")
            }
            BalanceViolation::UnclosedOpens {
                count,
                first_open_token,
            } => write!(
                f,
                "{count} clause(s) unclosed at sentence end (first opened at token {first_open_token})"
            ),
        }
    }
}

/// Checks that a tag sequence is balanced: scanning left to right and
/// applying each token's opens before its closes, the depth never goes
/// negative and ends at zero.
///
/// A violation is data about the input, not a failure of this function; the
/// first one found is returned.
pub fn validate(tags: &[BracketTag]) -> std::result::Result<(), BalanceViolation> {
    let mut open_positions: Vec<usize> = Vec::new();
    for (i, tag) in tags.iter().enumerate() {
        for _ in 0..tag.opens {
            open_positions.push(i);
        }
        for _ in 0..tag.closes {
            if open_positions.pop().is_none() {
                return Err(BalanceViolation::CloseWithoutOpen { token: i });
            }
        }
    }
    if let Some(&first) = open_positions.first() {
        return Err(BalanceViolation::UnclosedOpens {
            count: open_positions.len(),
            first_open_token: first,
        });
    }
    Ok(())
}

/// One clause as an inclusive token span within a single sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseSpan {
    pub begin: usize,
    pub end: usize,
}

impl ClauseSpan {
    pub fn new(begin: usize, end: usize) -> ClauseSpan {
        ClauseSpan { begin, end }
    }

    pub fn contains(&self, other: &ClauseSpan) -> bool {
        self.begin <= other.begin && other.end <= self.end
    }
}

impl fmt::Display for ClauseSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.begin, self.end)
    }
}

/// The clauses of one sentence: a multiset of spans in which any two spans
/// are disjoint or nested. Equal spans are legal and counted with
/// multiplicity.
///
/// Equality is multiset equality; spans are kept in a canonical order
/// (begin ascending, end descending — outer before inner).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClauseSet {
    spans: Vec<ClauseSpan>,
}

impl ClauseSet {
    pub fn empty() -> ClauseSet {
        ClauseSet::default()
    }

    /// Builds a set from spans, rejecting begin > end and crossing pairs.
    pub fn try_from_spans(mut spans: Vec<ClauseSpan>) -> Result<ClauseSet> {
        for s in &spans {
            if s.begin > s.end {
                return Err(Error::InvalidSpan {
                    begin: s.begin,
                    end: s.end,
                });
            }
        }
        spans.sort_by(|a, b| a.begin.cmp(&b.begin).then(b.end.cmp(&a.end)));
        // In canonical order every span must nest inside the nearest still-open
        // enclosing span; anything else is a crossing.
        let mut enclosing: Vec<ClauseSpan> = Vec::new();
        for &s in &spans {
            while let Some(top) = enclosing.last() {
                if top.end < s.begin {
                    enclosing.pop();
                } else {
                    break;
                }
            }
            if let Some(top) = enclosing.last() {
                if s.end > top.end {
                    return Err(Error::Nesting { a: *top, b: s });
                }
            }
            enclosing.push(s);
        }
        Ok(ClauseSet { spans })
    }

    pub fn spans(&self) -> &[ClauseSpan] {
        &self.spans
    }

    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn contains(&self, span: ClauseSpan) -> bool {
        self.spans.contains(&span)
    }

    /// Collapses duplicate spans to a single occurrence.
    pub fn deduplicated(&self) -> ClauseSet {
        let mut spans = self.spans.clone();
        spans.dedup();
        ClauseSet { spans }
    }

    /// Size of the multiset intersection with `other`.
    pub fn intersection_size(&self, other: &ClauseSet) -> usize {
        let (mut i, mut j, mut common) = (0, 0, 0);
        while i < self.spans.len() && j < other.spans.len() {
            match span_order(&self.spans[i], &other.spans[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    common += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        common
    }

    /// True if every span of `self` occurs in `other` with at least the same
    /// multiplicity.
    pub fn is_subset_of(&self, other: &ClauseSet) -> bool {
        self.intersection_size(other) == self.len()
    }
}

fn span_order(a: &ClauseSpan, b: &ClauseSpan) -> std::cmp::Ordering {
    a.begin.cmp(&b.begin).then(b.end.cmp(&a.end))
}

/// Recovers the clause multiset from a balanced tag sequence by LIFO
/// matching: each open pushes its token index, each close pops the most
/// recent open; a token's opens are applied before its closes.
pub fn spans_from_tags(tags: &[BracketTag]) -> Result<ClauseSet> {
    let mut stack: Vec<usize> = Vec::new();
    let mut spans: Vec<ClauseSpan> = Vec::new();
    for (i, tag) in tags.iter().enumerate() {
        for _ in 0..tag.opens {
            stack.push(i);
        }
        for _ in 0..tag.closes {
            let begin =
                stack
                    .pop()
                    .ok_or(Error::Unbalanced(BalanceViolation::CloseWithoutOpen {
                        token: i,
                    }))?;
            spans.push(ClauseSpan::new(begin, i));
        }
    }
    if let Some(&first) = stack.first() {
        return Err(Error::Unbalanced(BalanceViolation::UnclosedOpens {
            count: stack.len(),
            first_open_token: first,
        }));
    }
    // LIFO matching of a balanced sequence cannot produce crossing spans.
    Ok(ClauseSet::try_from_spans(spans).expect("stack matching yields nested spans"))
}

/// Serializes a clause multiset over a sentence of `length` tokens: token i
/// opens once per span beginning at i and closes once per span ending at i.
/// Inverse of [`spans_from_tags`].
pub fn spans_to_tags(set: &ClauseSet, length: usize) -> Result<Vec<BracketTag>> {
    let mut tags = vec![BracketTag::default(); length];
    for s in set.spans() {
        if s.end >= length {
            return Err(Error::SpanOutOfRange {
                span: *s,
                len: length,
            });
        }
        tags[s.begin].opens += 1;
        tags[s.end].closes += 1;
    }
    Ok(tags)
}

/// Projects a bracket-tag sequence onto the two flag columns: a token is a
/// start iff it opens at least one clause, an end iff it closes at least one.
pub fn derive_boundaries(tags: &[BracketTag]) -> (Vec<BoundaryTag>, Vec<BoundaryTag>) {
    let starts = tags
        .iter()
        .map(|t| {
            if t.opens > 0 {
                BoundaryTag::Mark
            } else {
                BoundaryTag::NoMark
            }
        })
        .collect();
    let ends = tags
        .iter()
        .map(|t| {
            if t.closes > 0 {
                BoundaryTag::Mark
            } else {
                BoundaryTag::NoMark
            }
        })
        .collect();
    (starts, ends)
}

/// Parses the corpus's part-3 column into per-sentence bracket tags.
pub fn parse_clause_column(corpus: &Corpus) -> Result<Vec<Vec<BracketTag>>> {
    let slot = corpus
        .layout()
        .annotation_slot(TaskPart::Clauses)
        .ok_or_else(|| Error::Layout("corpus has no clause bracket column".into()))?;
    corpus
        .sentences()
        .iter()
        .map(|sentence| {
            sentence
                .tokens()
                .iter()
                .map(|t| parse_bracket_tag(&t.clause_annotations[slot]))
                .collect()
        })
        .collect()
}

/// Parses a start- or end-flag column into per-sentence boundary tags.
pub fn parse_boundary_column(corpus: &Corpus, kind: BoundaryKind) -> Result<Vec<Vec<BoundaryTag>>> {
    let slot = corpus
        .layout()
        .annotation_slot(kind.part())
        .ok_or_else(|| {
            Error::Layout(format!(
                "corpus has no {} column",
                match kind {
                    BoundaryKind::Starts => "start-flag",
                    BoundaryKind::Ends => "end-flag",
                }
            ))
        })?;
    corpus
        .sentences()
        .iter()
        .map(|sentence| {
            sentence
                .tokens()
                .iter()
                .map(|t| BoundaryTag::parse(&t.clause_annotations[slot], kind))
                .collect()
        })
        .collect()
}

impl ColumnRole {
    /// The annotation encoding expected in a clause column of this role.
    pub fn task_part(self) -> Option<TaskPart> {
        match self {
            ColumnRole::Clause(part) => Some(part),
            _ => None,
        }
    }
}
