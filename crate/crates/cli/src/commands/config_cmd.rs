//! `config`: dump the effective configuration.

use std::path::PathBuf;

use clap::Args;

use super::Ctx;
use crate::error::CliResult;
use crate::io_util::{atomic_write, to_json_bytes};

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Emit the full effective config as JSON.
    #[arg(long)]
    pub dump: bool,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &ConfigArgs, ctx: &Ctx) -> CliResult<()> {
    if args.dump {
        let bytes = to_json_bytes(&ctx.config);
        match &args.out {
            Some(path) => atomic_write(path, &bytes)?,
            None => print!("{}", String::from_utf8(bytes).expect("json is utf8")),
        }
    }
    Ok(())
}
