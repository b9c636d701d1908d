use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

mod args;
mod ops;

use args::{Cli, Command, Encoding};
use clausekit::{AssemblyPolicy, ColumnLayout, ColumnRole, TaskPart};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("clausekit: {error}");
            ExitCode::from(1)
        }
    }
}

/// Flags that contradict each other are usage errors (exit 2), reported the
/// way clap reports its own.
fn usage_error(message: String) -> ! {
    Cli::command()
        .error(ErrorKind::InvalidValue, message)
        .exit()
}

/// A subcommand that cannot work without a column the flags did not declare
/// is a usage problem, not a data problem.
fn require_columns(layout: &ColumnLayout, roles: &[(ColumnRole, &str)]) {
    for (role, flag) in roles {
        if layout.position(*role).is_none() {
            usage_error(format!("this subcommand needs {flag}"));
        }
    }
}

fn dispatch(cli: Cli) -> ops::OpResult {
    match cli.command {
        Command::Ingest {
            input,
            output,
            dedupe_spans,
        } => ops::ingest(&input, output.as_ref(), dedupe_spans),
        Command::Convert {
            from,
            to,
            input,
            output,
            columns,
        } => {
            let supported = from == Encoding::Brackets || from == to;
            if !supported {
                usage_error(format!(
                    "cannot convert from {from:?} to {to:?}: flag columns are lossy; use assemble \
                     to combine start and end flags into brackets"
                ));
            }
            let layout = columns
                .layout(from.part())
                .unwrap_or_else(|e| usage_error(e));
            require_columns(
                &layout,
                &[(
                    ColumnRole::Clause(from.part()),
                    "a clause column (--clause-col)",
                )],
            );
            ops::convert(from, to, &input, output.as_ref(), &layout)
        }
        Command::Validate { input, columns } => {
            let layout = columns
                .layout(TaskPart::Clauses)
                .unwrap_or_else(|e| usage_error(e));
            require_columns(
                &layout,
                &[(
                    ColumnRole::Clause(TaskPart::Clauses),
                    "a clause column (--clause-col)",
                )],
            );
            ops::validate_corpus(&input, &layout)
        }
        Command::Derive {
            input,
            output,
            columns,
        } => {
            let layout = columns
                .layout(TaskPart::Clauses)
                .unwrap_or_else(|e| usage_error(e));
            require_columns(
                &layout,
                &[(
                    ColumnRole::Clause(TaskPart::Clauses),
                    "a clause column (--clause-col)",
                )],
            );
            ops::derive(&input, output.as_ref(), &layout)
        }
        Command::Assemble {
            input,
            output,
            starts_col,
            ends_col,
            policy,
            add_sentence_clause,
            word_col,
        } => {
            let layout = args::build_layout(vec![
                (word_col, ColumnRole::Word),
                (starts_col, ColumnRole::Clause(TaskPart::Starts)),
                (ends_col, ColumnRole::Clause(TaskPart::Ends)),
            ])
            .unwrap_or_else(|e| usage_error(e));
            ops::assemble_corpus(
                &input,
                output.as_ref(),
                &layout,
                AssemblyPolicy::new(policy, add_sentence_clause),
            )
        }
        Command::Baseline {
            input,
            output,
            encoding,
            columns,
        } => {
            let layout = columns
                .layout(TaskPart::Clauses)
                .unwrap_or_else(|e| usage_error(e));
            ops::baseline(&input, output.as_ref(), &layout, encoding)
        }
        Command::Train {
            input,
            model,
            target,
            columns,
        } => {
            let layout = columns
                .layout(TaskPart::Clauses)
                .unwrap_or_else(|e| usage_error(e));
            require_columns(
                &layout,
                &[
                    (
                        ColumnRole::Clause(TaskPart::Clauses),
                        "a clause column (--clause-col)",
                    ),
                    (ColumnRole::Pos, "a POS column (--pos-col)"),
                ],
            );
            ops::train_model(&input, &model, target.kind(), &layout)
        }
        Command::Predict {
            input,
            output,
            model,
            target,
            columns,
        } => {
            let layout = columns
                .layout(TaskPart::Clauses)
                .unwrap_or_else(|e| usage_error(e));
            require_columns(&layout, &[(ColumnRole::Pos, "a POS column (--pos-col)")]);
            ops::predict_corpus(&input, output.as_ref(), &model, target.kind(), &layout)
        }
        Command::Score {
            part,
            gold,
            prediction,
            beta,
            columns,
            gold_clause_col,
            pred_clause_col,
        } => {
            if beta <= 0.0 {
                usage_error(format!("--beta must be positive, got {beta}"));
            }
            let gold_layout = columns
                .layout_with_clause_col(part, gold_clause_col)
                .unwrap_or_else(|e| usage_error(e));
            let pred_layout = columns
                .layout_with_clause_col(part, pred_clause_col)
                .unwrap_or_else(|e| usage_error(e));
            ops::score(part, &gold, &prediction, beta, &gold_layout, &pred_layout)
        }
        Command::Generate {
            sentences,
            max_len,
            max_depth,
            multi_boundary,
            density,
            seed,
            output,
        } => {
            if sentences == 0 || max_len == 0 || max_depth == 0 {
                usage_error("--sentences, --max-len and --max-depth must be positive".into());
            }
            if !(0.0..=1.0).contains(&density) {
                usage_error(format!("--density must lie in [0,1], got {density}"));
            }
            ops::generate_corpus(
                sentences,
                max_len,
                max_depth,
                multi_boundary,
                density,
                seed,
                output.as_ref(),
            )
        }
    }
}
