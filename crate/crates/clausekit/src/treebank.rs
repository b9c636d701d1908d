//! Penn-Treebank-style bracketed parse trees: an S-expression parser and the
//! extraction of clause constituents into task-format sentences.
//!
//! A constituent counts as a clause iff its base label (truncated at the
//! first `-` or `=` function/coindex suffix) is one of the S-initial clause
//! labels, so `RRC` and `FRAG` are disregarded and `S--NOM` counts as `S`.
//! Clause type information is discarded: every clause becomes a plain `S`
//! bracket.

use crate::corpus::{Sentence, Token};
use crate::encoding::{spans_to_tags, ClauseSet, ClauseSpan};
use crate::error::{Error, Result};

/// Treebank constituent labels that qualify as clauses.
pub const CLAUSE_LABELS: [&str; 5] = ["S", "SBAR", "SBARQ", "SINV", "SQ"];

/// POS label of empty elements; leaves under it carry no surface text.
pub const EMPTY_ELEMENT_LABEL: &str = "-NONE-";

/// POS emitted for a leaf that has no preterminal above it (simplified
/// trees whose clause nodes dominate bare words).
pub const UNKNOWN_POS: &str = "UNK";

/// A node of a parsed tree: a labelled constituent or a bare word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseNode {
    Constituent {
        label: String,
        children: Vec<ParseNode>,
    },
    Word(String),
}

impl ParseNode {
    pub fn constituent(label: impl Into<String>, children: Vec<ParseNode>) -> ParseNode {
        ParseNode::Constituent {
            label: label.into(),
            children,
        }
    }

    pub fn word(word: impl Into<String>) -> ParseNode {
        ParseNode::Word(word.into())
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            ParseNode::Constituent { label, .. } => Some(label),
            ParseNode::Word(_) => None,
        }
    }
}

/// The label truncated at the first `-` or `=` suffix. Labels that start
/// with `-` (`-NONE-`, `-LRB-`, `-RRB-`) are left whole.
pub fn base_label(label: &str) -> &str {
    if label.starts_with('-') {
        return label;
    }
    match label.find(['-', '=']) {
        Some(i) => &label[..i],
        None => label,
    }
}

fn is_clause_label(label: &str) -> bool {
    CLAUSE_LABELS.contains(&base_label(label))
}

/// Parses zero or more parenthesized trees. Whitespace between tokens is
/// insignificant. A top-level group whose first element is itself a tree —
/// the standard treebank file shape `( (S ...) )` — is transparently
/// unwrapped.
pub fn parse_trees(source: &str) -> Result<Vec<ParseNode>> {
    Parser::new(source).parse_all()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(source: &'a str) -> Parser<'a> {
        Parser {
            bytes: source.as_bytes(),
            pos: 0,
        }
    }

    fn parse_all(mut self) -> Result<Vec<ParseNode>> {
        let mut trees = Vec::new();
        loop {
            self.skip_whitespace();
            match self.peek() {
                None => break,
                Some(b'(') => {
                    let offset = self.pos;
                    self.pos += 1;
                    self.skip_whitespace();
                    if self.peek() == Some(b'(') {
                        // Unlabeled wrapper: splice its children into the
                        // top-level list.
                        loop {
                            self.skip_whitespace();
                            match self.peek() {
                                Some(b')') => {
                                    self.pos += 1;
                                    break;
                                }
                                Some(b'(') => trees.push(self.parse_node()?),
                                Some(_) => {
                                    return Err(self.error(
                                        self.pos,
                                        "expected a subtree or ')' in unlabeled group",
                                    ))
                                }
                                None => {
                                    return Err(self.error(
                                        offset,
                                        "unbalanced parentheses: group never closed",
                                    ))
                                }
                            }
                        }
                    } else {
                        self.pos = offset;
                        trees.push(self.parse_node()?);
                    }
                }
                Some(b')') => return Err(self.error(self.pos, "unmatched ')'")),
                Some(_) => return Err(self.error(self.pos, "expected '('")),
            }
        }
        Ok(trees)
    }

    fn parse_node(&mut self) -> Result<ParseNode> {
        let offset = self.pos;
        debug_assert_eq!(self.peek(), Some(b'('));
        self.pos += 1;
        self.skip_whitespace();
        match self.peek() {
            Some(b')') => Err(self.error(offset, "empty label: '(' immediately closed")),
            Some(b'(') => {
                Err(self.error(self.pos, "empty label: subtree where a label was expected"))
            }
            None => Err(self.error(offset, "unbalanced parentheses: node never closed")),
            Some(_) => {
                let label = self.take_atom();
                let mut children = Vec::new();
                loop {
                    self.skip_whitespace();
                    match self.peek() {
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(b'(') => children.push(self.parse_node()?),
                        Some(_) => children.push(ParseNode::Word(self.take_atom())),
                        None => {
                            return Err(
                                self.error(offset, "unbalanced parentheses: node never closed")
                            )
                        }
                    }
                }
                if children.is_empty() {
                    return Err(
                        self.error(offset, format!("constituent {label:?} has no children"))
                    );
                }
                Ok(ParseNode::Constituent { label, children })
            }
        }
    }

    fn take_atom(&mut self) -> String {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b == b'(' || b == b')' || (b as char).is_ascii_whitespace() {
                break;
            }
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn skip_whitespace(&mut self) {
        while let Some(b) = self.peek() {
            if (b as char).is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn error(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::TreeSyntax {
            offset,
            message: message.into(),
        }
    }
}

/// Extracts the clause structure of one parsed sentence.
///
/// Tokens are the tree's leaves minus empty elements; every constituent with
/// a clause base label and at least one surviving leaf contributes one span
/// from its first to its last covered token. Duplicate spans from unary
/// clause-over-clause chains are preserved. The result carries the word,
/// the leaf's Treebank POS (or [`UNKNOWN_POS`] for bare words), an `O`
/// chunk placeholder and the serialized bracket column.
pub fn extract_clauses(tree: &ParseNode) -> Result<Sentence> {
    let mut words: Vec<(String, String)> = Vec::new();
    let mut spans: Vec<ClauseSpan> = Vec::new();
    collect(tree, &mut words, &mut spans);
    if words.is_empty() {
        return Err(Error::EmptySentence);
    }
    let set =
        ClauseSet::try_from_spans(spans).expect("tree constituents cannot produce crossing spans");
    let tags = spans_to_tags(&set, words.len())?;
    let tokens = words
        .into_iter()
        .zip(tags)
        .map(|((word, pos), tag)| {
            Ok(Token::new(word)?
                .with_pos(pos)
                .with_chunk("O")?
                .with_annotation(tag.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Sentence::new(tokens)
}

fn collect(node: &ParseNode, words: &mut Vec<(String, String)>, spans: &mut Vec<ClauseSpan>) {
    match node {
        ParseNode::Word(word) => words.push((word.clone(), UNKNOWN_POS.to_string())),
        ParseNode::Constituent { label, children } => {
            // A preterminal dominates exactly one word and is not itself a
            // clause; its label is the leaf's POS.
            if let [ParseNode::Word(word)] = children.as_slice() {
                if !is_clause_label(label) {
                    if label != EMPTY_ELEMENT_LABEL {
                        words.push((word.clone(), label.clone()));
                    }
                    return;
                }
            }
            let begin = words.len();
            for child in children {
                collect(child, words, spans);
            }
            let end = words.len();
            if is_clause_label(label) && end > begin {
                spans.push(ClauseSpan::new(begin, end - 1));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{parse_bracket_tag, spans_from_tags, validate};

    pub(crate) const EXAMPLE_TREE: &str = "(S Coach them in (S--NOM handling complaints) \
         (SBAR--PRP so that (S they can resolve problems immediately)) .)";

    fn annotations(sentence: &Sentence) -> Vec<String> {
        sentence
            .tokens()
            .iter()
            .map(|t| t.clause_annotations[0].clone())
            .collect()
    }

    #[test]
    fn parses_simple_tree() {
        let trees = parse_trees("(S (NP (NN dog)) (VP (VBZ barks)))").unwrap();
        assert_eq!(trees.len(), 1);
        match &trees[0] {
            ParseNode::Constituent { label, children } => {
                assert_eq!(label, "S");
                assert_eq!(children.len(), 2);
                assert_eq!(children[0].label(), Some("NP"));
                assert_eq!(children[1].label(), Some("VP"));
            }
            other => panic!("expected constituent, got {other:?}"),
        }
    }

    #[test]
    fn unwraps_unlabeled_top_level_group() {
        let trees = parse_trees("((S (X a)))").unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].label(), Some("S"));
        assert_eq!(
            trees[0],
            ParseNode::constituent(
                "S",
                vec![ParseNode::constituent("X", vec![ParseNode::word("a")])]
            )
        );
    }

    #[test]
    fn parses_multiple_wrapped_trees() {
        let trees = parse_trees("((S (X a)))\n((S (X b)))").unwrap();
        assert_eq!(trees.len(), 2);
    }

    #[test]
    fn truncated_input_is_a_parse_error() {
        let err = parse_trees("(S (NP").unwrap_err();
        assert!(matches!(err, Error::TreeSyntax { .. }), "{err}");
    }

    #[test]
    fn stray_close_reports_offset() {
        match parse_trees("(S (X a)) )").unwrap_err() {
            Error::TreeSyntax { offset, .. } => assert_eq!(offset, 10),
            other => panic!("expected tree syntax error, got {other}"),
        }
    }

    #[test]
    fn empty_group_is_a_parse_error() {
        assert!(parse_trees("()").is_err());
        assert!(parse_trees("(S a ())").is_err());
    }

    #[test]
    fn extracts_worked_example_column() {
        let trees = parse_trees(EXAMPLE_TREE).unwrap();
        let sentence = extract_clauses(&trees[0]).unwrap();
        assert_eq!(sentence.len(), 13);
        assert_eq!(
            annotations(&sentence),
            vec!["(S*", "*", "*", "(S*", "*S)", "(S*", "*", "(S*", "*", "*", "*", "*S)S)", "*S)"]
        );
        let words: Vec<&str> = sentence.tokens().iter().map(|t| t.word.as_str()).collect();
        assert_eq!(words[0], "Coach");
        assert_eq!(words[12], ".");
    }

    #[test]
    fn frag_contributes_no_clauses() {
        let trees = parse_trees("(FRAG (NP (NN Yes)) (. .))").unwrap();
        let sentence = extract_clauses(&trees[0]).unwrap();
        assert_eq!(annotations(&sentence), vec!["*", "*"]);
        assert_eq!(sentence.tokens()[0].pos.as_deref(), Some("NN"));
        assert_eq!(sentence.tokens()[1].pos.as_deref(), Some("."));
    }

    #[test]
    fn unary_clause_chain_preserves_duplicate_span() {
        let trees = parse_trees("(S (S (X a)))").unwrap();
        let sentence = extract_clauses(&trees[0]).unwrap();
        assert_eq!(annotations(&sentence), vec!["(S(S*S)S)"]);
    }

    #[test]
    fn single_word_clause_is_still_a_clause() {
        let trees = parse_trees("(S Go)").unwrap();
        let sentence = extract_clauses(&trees[0]).unwrap();
        assert_eq!(annotations(&sentence), vec!["(S*S)"]);
        assert_eq!(sentence.tokens()[0].pos.as_deref(), Some(UNKNOWN_POS));
    }

    #[test]
    fn empty_elements_are_dropped() {
        let trees =
            parse_trees("(S (NP-SBJ (-NONE- *T*-1)) (VP (VBZ barks) (SBAR (-NONE- 0))))").unwrap();
        let sentence = extract_clauses(&trees[0]).unwrap();
        assert_eq!(sentence.len(), 1);
        assert_eq!(sentence.tokens()[0].word, "barks");
        // The SBAR covers only an empty element, so only the outer S remains.
        assert_eq!(annotations(&sentence), vec!["(S*S)"]);
    }

    #[test]
    fn tree_of_only_empty_elements_is_an_empty_sentence() {
        let trees = parse_trees("(S (-NONE- *T*-2))").unwrap();
        assert!(matches!(
            extract_clauses(&trees[0]),
            Err(Error::EmptySentence)
        ));
    }

    #[test]
    fn function_and_coindex_suffixes_are_truncated() {
        assert_eq!(base_label("S--NOM"), "S");
        assert_eq!(base_label("SBAR-PRP"), "SBAR");
        assert_eq!(base_label("S=2"), "S");
        assert_eq!(base_label("SINV"), "SINV");
        assert_eq!(base_label("-NONE-"), "-NONE-");
        assert_eq!(base_label("-LRB-"), "-LRB-");
    }

    #[test]
    fn all_s_initial_clause_labels_qualify() {
        for label in ["S", "SBAR", "SBARQ", "SINV", "SQ", "S-TPC-1", "SQ=3"] {
            let text = format!("({label} (X a) (Y b))");
            let trees = parse_trees(&text).unwrap();
            let sentence = extract_clauses(&trees[0]).unwrap();
            assert_eq!(annotations(&sentence), vec!["(S*", "*S)"], "label {label}");
        }
        for label in ["RRC", "FRAG", "SBJ", "NP-S", "X"] {
            let text = format!("({label} (X a) (Y b))");
            let trees = parse_trees(&text).unwrap();
            let sentence = extract_clauses(&trees[0]).unwrap();
            assert_eq!(annotations(&sentence), vec!["*", "*"], "label {label}");
        }
    }

    #[test]
    fn extraction_is_balanced_and_counts_match() {
        let trees = parse_trees(EXAMPLE_TREE).unwrap();
        let sentence = extract_clauses(&trees[0]).unwrap();
        let tags: Vec<_> = annotations(&sentence)
            .iter()
            .map(|t| parse_bracket_tag(t).unwrap())
            .collect();
        assert_eq!(validate(&tags), Ok(()));
        let opens: usize = tags.iter().map(|t| t.opens).sum();
        let closes: usize = tags.iter().map(|t| t.closes).sum();
        assert_eq!(opens, 4);
        assert_eq!(closes, 4);
        let spans = spans_from_tags(&tags).unwrap();
        let expected = ClauseSet::try_from_spans(vec![
            ClauseSpan::new(0, 12),
            ClauseSpan::new(3, 4),
            ClauseSpan::new(5, 11),
            ClauseSpan::new(7, 11),
        ])
        .unwrap();
        assert_eq!(spans, expected);
    }
}
