//! Command-line front end: argument and config parsing, dispatch to the
//! numerical core, file output and manifests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::fmt;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{Arg, ArgAction, ArgMatches, ColorChoice};

pub mod commands;
pub mod output;
pub mod params;
mod plot;

use commands::{registry, Command};
use output::{write_all, Format, RunInfo};
use params::{apply_section, Params};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_VAR: &str = "HANDSHAKE_OUTPUT_DIR";

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<handshake_core::Error> for CliError {
    fn from(e: handshake_core::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn cli(registry: &[Command], color: bool) -> clap::Command {
    let mut root = clap::Command::new("handshake")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Atom-to-atom photon transfer simulations")
        .subcommand_required(true)
        .color(if color { ColorChoice::Auto } else { ColorChoice::Never })
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .global(true)
                .help("TOML file with one [command] section per command"),
        )
        .arg(
            Arg::new("output-dir")
                .long("output-dir")
                .short('o')
                .value_name("DIR")
                .global(true)
                .help(format!("where files go [default: ${OUTPUT_DIR_VAR}, else ./output]")),
        )
        .arg(
            Arg::new("format")
                .long("format")
                .value_name("LIST")
                .global(true)
                .value_delimiter(',')
                .action(ArgAction::Append)
                .help("output formats: csv, grid, png"),
        )
        .arg(
            Arg::new("no-color")
                .long("no-color")
                .global(true)
                .action(ArgAction::SetTrue)
                .help("plain terminal output"),
        );
    for c in registry {
        let mut sub = clap::Command::new(c.name).about(c.about);
        for p in (c.params)() {
            let default = p.default.to_string();
            let help = if default.is_empty() {
                p.help.to_string()
            } else {
                format!("{} [default: {default}]", p.help)
            };
            sub = sub.arg(
                Arg::new(p.key)
                    .long(p.key)
                    .value_name(p.value_name())
                    .allow_negative_numbers(true)
                    .help(help),
            );
        }
        root = root.subcommand(sub);
    }
    root.subcommand(
        clap::Command::new("replay")
            .about("Rerun a command from its manifest")
            .arg(Arg::new("manifest").required(true).value_name("MANIFEST")),
    )
}

struct Style {
    color: bool,
}

impl Style {
    fn key(&self, s: &str) -> String {
        if self.color {
            format!("\x1b[36m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn error(&self, s: &str) -> String {
        if self.color {
            format!("\x1b[31merror:\x1b[0m {s}")
        } else {
            format!("error: {s}")
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let no_color = args.iter().any(|a| a == "--no-color");
    let out_style = Style { color: !no_color && std::io::stdout().is_terminal() };
    let err_style = Style { color: !no_color && std::io::stderr().is_terminal() };
    let reg = registry();
    let matches = match cli(&reg, !no_color).try_get_matches_from(&args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&reg, &matches, &out_style) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", err_style.error(&e.to_string()));
            e.exit_code()
        }
    }
}

fn output_dir(m: &ArgMatches) -> PathBuf {
    if let Some(d) = m.get_one::<String>("output-dir") {
        return PathBuf::from(d);
    }
    match std::env::var_os(OUTPUT_DIR_VAR) {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => PathBuf::from("output"),
    }
}

fn read_toml(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Checks every section of a config file and returns the one for `command`.
fn config_section(reg: &[Command], doc: &toml::Table, command: &str) -> Result<Option<toml::Table>, CliError> {
    let mut found = None;
    for (name, v) in doc {
        let Some(c) = reg.iter().find(|c| c.name == name) else {
            let names: Vec<&str> = reg.iter().map(|c| c.name).collect();
            return Err(CliError::Usage(format!(
                "unknown section [{name}]; accepted sections: {}",
                names.join(", ")
            )));
        };
        let toml::Value::Table(t) = v else {
            return Err(CliError::Usage(format!("`{name}` must be a [section]")));
        };
        let specs = (c.params)();
        apply_section(c.name, &specs, t, &mut Params::defaults(&specs))?;
        if name == command {
            found = Some(t.clone());
        }
    }
    Ok(found)
}

fn formats_for(c: &Command, requested: Option<Vec<String>>) -> Result<Vec<Format>, CliError> {
    let Some(req) = requested else {
        return Ok(c.default_formats.to_vec());
    };
    let mut out = Vec::new();
    for s in req {
        let f = Format::parse(&s)?;
        if !c.formats.contains(&f) {
            let ok: Vec<&str> = c.formats.iter().map(|f| f.name()).collect();
            return Err(CliError::Usage(format!(
                "`{}` cannot write {}; accepted formats: {}",
                c.name,
                f.name(),
                ok.join(", ")
            )));
        }
        if f == Format::Png && !plot::available() {
            return Err(CliError::Usage("built without png support".into()));
        }
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no output format selected".into()));
    }
    Ok(out)
}

fn dispatch(reg: &[Command], m: &ArgMatches, style: &Style) -> Result<(), CliError> {
    let (name, sub) = m.subcommand().expect("subcommand required");
    let dir = output_dir(sub);
    if name == "replay" {
        return replay(reg, sub, &dir, style);
    }
    let c = reg.iter().find(|c| c.name == name).expect("registered command");
    let specs = (c.params)();
    let mut params = Params::defaults(&specs);
    if let Some(path) = sub.get_one::<String>("config") {
        let doc = read_toml(Path::new(path))?;
        if let Some(section) = config_section(reg, &doc, name)? {
            apply_section(name, &specs, &section, &mut params)?;
        }
    }
    for spec in &specs {
        if sub.value_source(spec.key) == Some(ValueSource::CommandLine) {
            let raw = sub.get_one::<String>(spec.key).expect("flag value");
            params.set(spec.key, spec.parse_str(raw)?);
        }
    }
    let requested = sub
        .get_many::<String>("format")
        .map(|v| v.cloned().collect::<Vec<_>>());
    let formats = formats_for(c, requested)?;
    execute(c, &params, &formats, &dir, None, style)
}

fn replay(reg: &[Command], sub: &ArgMatches, dir: &Path, style: &Style) -> Result<(), CliError> {
    if sub.contains_id("config") && sub.value_source("config") == Some(ValueSource::CommandLine) {
        return Err(CliError::Usage("replay takes its parameters from the manifest; drop --config".into()));
    }
    if sub.value_source("format") == Some(ValueSource::CommandLine) {
        return Err(CliError::Usage("replay takes its formats from the manifest; drop --format".into()));
    }
    let path = PathBuf::from(sub.get_one::<String>("manifest").expect("required"));
    let doc = read_toml(&path)?;
    let bad = |m: &str| CliError::Usage(format!("{}: {m}", path.display()));
    let run = doc
        .get("run")
        .and_then(|v| v.as_table())
        .ok_or_else(|| bad("no [run] section"))?;
    let name = run
        .get("command")
        .and_then(|v| v.as_str())
        .ok_or_else(|| bad("[run] has no command"))?;
    let c = reg
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| bad(&format!("unknown command `{name}`")))?;
    let formats: Vec<String> = match run.get("formats") {
        Some(toml::Value::Array(a)) => a
            .iter()
            .map(|v| v.as_str().map(str::to_string).ok_or_else(|| bad("formats must be strings")))
            .collect::<Result<_, _>>()?,
        _ => return Err(bad("[run] has no formats")),
    };
    let formats = formats_for(c, Some(formats))?;
    let specs = (c.params)();
    let mut params = Params::defaults(&specs);
    match doc.get(name) {
        Some(toml::Value::Table(t)) => apply_section(name, &specs, t, &mut params)?,
        None if specs.is_empty() => {}
        _ => return Err(bad(&format!("no [{name}] section"))),
    }
    execute(c, &params, &formats, dir, Some(&path), style)
}

fn execute(
    c: &Command,
    params: &Params,
    formats: &[Format],
    dir: &Path,
    replayed_from: Option<&Path>,
    style: &Style,
) -> Result<(), CliError> {
    // everything is computed before the first byte is written
    let out = (c.run)(params, formats)?;
    let info = RunInfo {
        command: c.name,
        reproduces: c.reproduces,
        formats,
        params,
        replayed_from,
    };
    let written = write_all(dir, &info, &out)?;
    for (k, v) in &out.summary {
        println!("{}: {v}", style.key(k));
    }
    for p in &written {
        println!("{} {}", style.key("wrote"), p.display());
    }
    Ok(())
}
