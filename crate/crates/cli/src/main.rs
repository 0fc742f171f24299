//! `sss`: spectrum scale-space saliency from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod baseline;
mod cli;
mod common;
mod demo;
mod eval;
mod sequence;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use common::UsageError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sequence(a) => sequence::run(a),
        Command::Baseline(a) => baseline::run(a),
        Command::Demo1d(a) => demo::run(a),
        Command::Eval(a) => eval::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<UsageError>().is_some() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
