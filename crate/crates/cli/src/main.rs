mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command};
use commands::Failure;

fn parse() -> Result<Cli, ExitCode> {
    let raw: Vec<String> = std::env::args().collect();
    let expanded = match config::expand(raw) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return Err(ExitCode::from(1));
        }
    };
    let cmd = Cli::command()
        .args_override_self(true)
        .mut_subcommands(|s| s.args_override_self(true));
    match cmd
        .try_get_matches_from(expanded)
        .and_then(|m| Cli::from_arg_matches(&m))
    {
        Ok(cli) => Ok(cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            Err(ExitCode::from(code))
        }
    }
}

fn main() -> ExitCode {
    let cli = match parse() {
        Ok(c) => c,
        Err(code) => return code,
    };
    let (name, common, out) = match &cli.command {
        Command::Zak(a) => ("zak", Some(&a.common), None),
        Command::Riesz(c) => ("riesz", Some(c), None),
        Command::Identities(a) => ("identities", Some(&a.common), None),
        Command::Winding(a) => ("winding", Some(&a.common), None),
        Command::Lemma1(a) => ("lemma1", Some(&a.plane.common), None),
        Command::Jumpset(a) => ("jumpset", Some(&a.common), None),
        Command::Lemma3(a) => ("lemma3", Some(&a.common), None),
        Command::Tails(a) => ("tails", Some(&a.common), None),
        Command::Probe(a) => ("probe", Some(&a.common), None),
        Command::Sharpness(a) => ("sharpness", Some(&a.common), None),
        Command::Gamma(a) => ("gamma", None, a.out.clone()),
    };
    let mut rep = commands::new_report(name, common, out);
    let result = match &cli.command {
        Command::Zak(a) => commands::zak(a, &mut rep),
        Command::Riesz(c) => commands::riesz(c, &mut rep),
        Command::Identities(a) => commands::identities(a, &mut rep),
        Command::Winding(a) => commands::winding(a, &mut rep),
        Command::Lemma1(a) => commands::lemma1(a, &mut rep),
        Command::Jumpset(a) => commands::jumpset(a, &mut rep),
        Command::Lemma3(a) => commands::lemma3(a, &mut rep),
        Command::Tails(a) => commands::tails(a, &mut rep),
        Command::Probe(a) => commands::probe(a, &mut rep),
        Command::Sharpness(a) => commands::sharpness(a, &mut rep),
        Command::Gamma(a) => commands::gamma(a, &mut rep),
    };
    let code = match result {
        Ok(()) if rep.pass => 0,
        Ok(()) => 3,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            rep.pass = false;
            rep.metric("error", msg);
            1
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("precondition failed: {msg}");
            rep.pass = false;
            rep.metric("error", msg);
            2
        }
    };
    println!("{}", rep.summary());
    ExitCode::from(code)
}
