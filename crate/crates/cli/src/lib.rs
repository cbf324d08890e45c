//! Command-line front end over `pvmeta`. Commands build [`OutputTable`]s;
//! [`run`] writes them.

pub mod args;
pub mod commands;
pub mod error;
pub mod grid;
pub mod table;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub use args::{Cli, Command};
pub use error::CliError;
pub use grid::GridSpec;
pub use table::{Format, OutputTable};

fn emit(table: &OutputTable, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (table, output) = match &cli.command {
        Command::Pdf(a) => (commands::curves(a, false)?, &a.output),
        Command::Cdf(a) => (commands::curves(a, true)?, &a.output),
        Command::Hack(a) => (commands::hack(a)?, &a.output),
        Command::Stats(a) => (commands::stats(a)?, &a.output),
        Command::Power(a) => (commands::power(a)?, &a.output),
        Command::McCheck(a) => (commands::mc_check(a)?, &a.output),
        Command::Figures(a) => {
            let tables = commands::figures(a)?;
            fs::create_dir_all(&a.out)?;
            for (name, table) in &tables {
                let path = a.out.join(format!("{name}.{}", a.format.extension()));
                emit(table, a.format, Some(&path))?;
            }
            return Ok(());
        }
    };
    emit(&table, output.format, output.out.as_deref())
}
