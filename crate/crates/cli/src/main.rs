//! `cuntz-ideals`: analyze quasi-free circle-group actions on Cuntz
//! algebras — ideal lattices, simplicity, primitive ideal space, Connes
//! spectrum, and K-groups — from a small INI-style action description.

mod commands;
mod config;
mod registry;
mod render;
mod setexpr;

use std::process::ExitCode;

use clap::{Arg, ArgAction, Command};

use cuntz_ideals::{Error, Limits};

use registry::{registry, AnalysisCommand, CmdOutput, Format, RunContext};

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Mismatch(_) => 2,
        Error::ResourceLimit(_) => 3,
        Error::InfiniteGroup(_) => 4,
        Error::Precondition(_) => 5,
    }
}

fn build_cli(cmds: &[Box<dyn AnalysisCommand>]) -> Command {
    let mut top = Command::new("cuntz-ideals")
        .about("Ideal structure and K-theory of Cuntz algebra crossed products")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for cmd in cmds {
        let mut sub = Command::new(cmd.name()).about(cmd.about());
        if cmd.needs_input() {
            sub = sub.arg(
                Arg::new("input")
                    .required(true)
                    .value_name("FILE")
                    .help("Action description file (INI format; see README)"),
            );
        }
        sub = sub
            .arg(
                Arg::new("format")
                    .long("format")
                    .value_name("FORMAT")
                    .value_parser(["text", "json", "dot"])
                    .default_value("text")
                    .help("Output format"),
            )
            .arg(
                Arg::new("limits")
                    .long("limits")
                    .value_name("FILE")
                    .help("Resource limits file overriding the defaults"),
            )
            .arg(
                Arg::new("seed")
                    .long("seed")
                    .value_name("U64")
                    .value_parser(clap::value_parser!(u64))
                    .default_value("0")
                    .action(ArgAction::Set)
                    .help("Seed for randomized commands (selfcheck)"),
            );
        top = top.subcommand(sub);
    }
    top
}

fn read_file(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read `{path}`: {e}")))
}

fn run() -> Result<(), Error> {
    let cmds = registry();
    let matches = build_cli(&cmds).get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let cmd = cmds
        .iter()
        .find(|c| c.name() == name)
        .expect("subcommands come from the registry");

    let format = match sub.get_one::<String>("format").map(String::as_str) {
        Some("json") => Format::Json,
        Some("dot") => Format::Dot,
        _ => Format::Text,
    };
    let limits = match sub.get_one::<String>("limits") {
        Some(path) => config::parse_limits(&read_file(path)?)?,
        None => Limits::default(),
    };
    let input = match cmd.needs_input().then(|| sub.get_one::<String>("input")).flatten() {
        Some(path) => Some(config::parse_input(&read_file(path)?, limits)?),
        None => None,
    };
    let seed = *sub.get_one::<u64>("seed").expect("has a default");

    let ctx = RunContext { input, seed };
    let CmdOutput { text, json, dot } = cmd.run(&ctx)?;
    match format {
        Format::Text => print!("{text}"),
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&json)
                    .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?
            );
        }
        Format::Dot => match dot {
            Some(d) => print!("{d}"),
            None => {
                return Err(Error::Parse(format!(
                    "the `{name}` command has no DOT output"
                )))
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
