//! The `provgame` command line.
//!
//! Exit codes: 0 success, 1 parse or IO error, 2 validation error,
//! 3 atom derived or not derived contrary to the command, 4 negation where a
//! polynomial is requested, 5 unknown output format.

pub mod export;
pub mod play;
pub mod report;

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use provgame_core::datalog::{
    parse_database, parse_ground_atom, parse_program, Database, GroundAtom, Program,
};
use provgame_core::explain::{provenance_polynomial, why_not_from_game, why_report};
use provgame_core::game::{solve, GameGraphBuilder, NodeValue, SolvedGame};
use provgame_core::poly::Semiring;
use provgame_core::query_game::{
    move_claim, solve_query_game, BuildVariant, GameNodeId, NodeKind, SolvedQueryGame,
};
use provgame_core::wfs::alternating_fixpoint;
use provgame_core::{Error, ErrorKind};

use export::{Styled, View};
use play::Player;

#[derive(Debug, Parser)]
#[command(
    name = "provgame",
    version,
    about = "Query evaluation, provenance and why-not explanations as win-move games"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Inputs {
    /// Datalog program; empty when omitted.
    #[arg(long, value_name = "PATH")]
    program: Option<PathBuf>,
    /// Database facts, optionally annotated as `B(a,b) @p.`; empty when omitted.
    #[arg(long, value_name = "PATH")]
    db: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Output {
    /// Write to PATH instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the query game and list relation nodes with value and length.
    Solve {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value = "full")]
        variant: BuildVariant,
        /// List every node, not only relation nodes.
        #[arg(long)]
        all: bool,
        /// Solve a plain game given as `src dst` lines instead.
        #[arg(long, value_name = "PATH", hide = true)]
        raw_game: Option<PathBuf>,
        /// With --raw-game, print the well-founded model instead.
        #[arg(long, hide = true, requires = "raw_game")]
        wfs: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Explain why ATOM is derived.
    Why {
        atom: String,
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value = "full")]
        variant: BuildVariant,
        /// text or json.
        #[arg(long, default_value = "text")]
        format: String,
        #[command(flatten)]
        output: Output,
    },
    /// Explain why ATOM is not derived.
    Whynot {
        atom: String,
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value = "full")]
        variant: BuildVariant,
        /// text or json.
        #[arg(long, default_value = "text")]
        format: String,
        #[command(flatten)]
        output: Output,
    },
    /// Print the provenance polynomial of ATOM.
    Poly {
        atom: String,
        #[command(flatten)]
        inputs: Inputs,
        /// nx, bx or trio.
        #[arg(long, default_value = "nx")]
        semiring: Semiring,
        #[command(flatten)]
        output: Output,
    },
    /// Export the solved game, or the provenance of ATOM, as DOT or JSON.
    Export {
        atom: Option<String>,
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value = "full")]
        variant: BuildVariant,
        /// dot or json.
        #[arg(long, default_value = "dot")]
        format: String,
        /// full or gamma; gamma needs ATOM.
        #[arg(long, default_value = "full")]
        scope: Scope,
        #[arg(long, value_name = "PATH", hide = true)]
        raw_game: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Play the game from ATOM against the engine.
    Play {
        atom: String,
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value = "full")]
        variant: BuildVariant,
        /// The side you play; player I moves first.
        #[arg(long = "as", default_value = "I")]
        side: Player,
        /// ATOM is then a position of this plain game.
        #[arg(long, value_name = "PATH", hide = true)]
        raw_game: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Scope {
    Full,
    Gamma,
}

/// A failed command: the message for standard error and the exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Parse => 1,
            ErrorKind::Validation | ErrorKind::Internal => 2,
            ErrorKind::Derivation => 3,
            ErrorKind::Negation => 4,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult<T = ()> = Result<T, Failure>;

fn read(path: &Path) -> CmdResult<String> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))
}

fn in_file(path: &Path, e: Error) -> Failure {
    let mut f = Failure::from(e);
    f.message = format!("{}: {}", path.display(), f.message);
    f
}

impl Inputs {
    fn load(&self) -> CmdResult<(Program, Database)> {
        let program = match &self.program {
            Some(p) => parse_program(&read(p)?).map_err(|e| in_file(p, e))?,
            None => Program::empty(),
        };
        let db = match &self.db {
            Some(p) => parse_database(&read(p)?).map_err(|e| in_file(p, e))?,
            None => Database::new(),
        };
        Ok((program, db))
    }
}

fn parse_atom(text: &str) -> CmdResult<GroundAtom> {
    parse_ground_atom(text).map_err(|e| Failure::new(1, format!("atom `{text}`: {e}")))
}

fn emit(output: &Output, text: &str, stdout: &mut dyn Write) -> CmdResult {
    let result = match &output.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    result.map_err(|m| Failure::new(1, m))
}

/// Reads a plain game: one `src dst` move or one lone position per line,
/// `#` starts a comment.
fn load_raw_game(path: &Path) -> CmdResult<SolvedGame<String>> {
    let text = read(path)?;
    let mut builder = GameGraphBuilder::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or_default();
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            [p] => builder.add_position(p.to_string()),
            [a, b] => builder.add_move(a.to_string(), b.to_string()),
            _ => {
                return Err(Failure::new(
                    1,
                    format!(
                        "{}:{}: expected `src dst` or a single position",
                        path.display(),
                        n + 1
                    ),
                ))
            }
        }
    }
    Ok(solve(builder.build()))
}

fn check_format(format: &str, allowed: &[&str]) -> CmdResult {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::new(
            5,
            format!(
                "unknown format `{format}` (expected {})",
                allowed.join(" or ")
            ),
        ))
    }
}

fn listing<'a>(rows: impl Iterator<Item = (String, String)> + 'a) -> String {
    let mut out = String::new();
    for (id, rest) in rows {
        let _ = writeln!(out, "{id} {rest}");
    }
    out
}

fn cmd_solve(
    inputs: &Inputs,
    variant: BuildVariant,
    all: bool,
    raw_game: Option<&Path>,
    wfs: bool,
    output: &Output,
    stdout: &mut dyn Write,
) -> CmdResult {
    if let Some(path) = raw_game {
        let game = load_raw_game(path)?;
        let text = if wfs {
            listing(
                alternating_fixpoint(game.graph())
                    .into_iter()
                    .map(|(p, t)| (p, t.to_string())),
            )
        } else {
            listing(game.iter().map(|(p, v, l)| (p.clone(), format!("{v} {l}"))))
        };
        return emit(output, &text, stdout);
    }
    let (program, db) = inputs.load()?;
    let game = solve_query_game(&program, &db, variant)?;
    let text = listing(
        game.solved()
            .iter()
            .filter(|(p, _, _)| all || p.kind() == NodeKind::Rel)
            .map(|(p, v, l)| (p.to_string(), format!("{v} {l}"))),
    );
    emit(output, &text, stdout)
}

/// The query game together with the parsed inputs.
struct Session {
    program: Program,
    game: SolvedQueryGame,
}

impl Session {
    fn open(inputs: &Inputs, variant: BuildVariant) -> CmdResult<Self> {
        let (program, db) = inputs.load()?;
        let game = solve_query_game(&program, &db, variant)?;
        Ok(Session { program, game })
    }

    /// The relation node of `atom`, which must be a position of the game.
    fn rel(&self, atom: &GroundAtom) -> CmdResult<GameNodeId> {
        self.game.value_of(atom)?;
        Ok(GameNodeId::rel(atom.clone()))
    }
}

fn cmd_why(
    atom: &str,
    inputs: &Inputs,
    variant: BuildVariant,
    format: &str,
    output: &Output,
    stdout: &mut dyn Write,
) -> CmdResult {
    check_format(format, &["text", "json"])?;
    let atom = parse_atom(atom)?;
    let s = Session::open(inputs, variant)?;
    let report = why_report(&s.game, &s.program, &atom)?;
    let root = s.rel(&atom)?;
    let text = if format == "json" {
        report::why_json(&report, &root)
    } else {
        report::why_text(&report, &root, &s.game.provenance(&root)?)
    };
    emit(output, &text, stdout)
}

fn cmd_whynot(
    atom: &str,
    inputs: &Inputs,
    variant: BuildVariant,
    format: &str,
    output: &Output,
    stdout: &mut dyn Write,
) -> CmdResult {
    check_format(format, &["text", "json"])?;
    let atom = parse_atom(atom)?;
    let s = Session::open(inputs, variant)?;
    let report = why_not_from_game(&s.game, &s.program, &atom)?;
    let root = GameNodeId::neg(atom.clone());
    let text = if format == "json" {
        report::why_not_json(&report, &root)
    } else {
        report::why_not_text(&report, &root, &s.game.provenance(&root)?)
    };
    emit(output, &text, stdout)
}

fn cmd_poly(
    atom: &str,
    inputs: &Inputs,
    semiring: Semiring,
    output: &Output,
    stdout: &mut dyn Write,
) -> CmdResult {
    let atom = parse_atom(atom)?;
    let (program, db) = inputs.load()?;
    let poly = provenance_polynomial(&program, &db, &atom, semiring)?;
    emit(output, &format!("{poly}\n"), stdout)
}

fn render<P: Styled>(view: &View<P>, format: &str) -> String {
    if format == "json" {
        export::to_json(view)
    } else {
        export::to_dot(view)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_export(
    atom: Option<&str>,
    inputs: &Inputs,
    variant: BuildVariant,
    format: &str,
    scope: Scope,
    raw_game: Option<&Path>,
    output: &Output,
    stdout: &mut dyn Write,
) -> CmdResult {
    check_format(format, &["dot", "json"])?;
    if scope == Scope::Gamma && atom.is_none() {
        return Err(Failure::new(1, "--scope gamma needs an ATOM"));
    }
    if let Some(path) = raw_game {
        let game = load_raw_game(path)?;
        let view = match (scope, atom) {
            (Scope::Gamma, Some(p)) => View::gamma(&game.provenance(&p.to_string())?),
            _ => View::full(&game),
        };
        return emit(output, &render(&view, format), stdout);
    }
    let s = Session::open(inputs, variant)?;
    let view = match (scope, atom) {
        (Scope::Gamma, Some(a)) => {
            let rel = s.rel(&parse_atom(a)?)?;
            // a missing answer is explained from its negation
            let root = match s.game.solved().value(&rel)? {
                NodeValue::Lost => {
                    GameNodeId::neg(rel.atom().cloned().expect("rel node has an atom"))
                }
                _ => rel,
            };
            View::gamma(&s.game.provenance(&root)?)
        }
        _ => View::full(s.game.solved()),
    };
    emit(output, &render(&view, format), stdout)
}

fn cmd_play(
    atom: &str,
    inputs: &Inputs,
    variant: BuildVariant,
    side: Player,
    raw_game: Option<&Path>,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
) -> CmdResult {
    let io_err = |e: std::io::Error| Failure::new(1, e.to_string());
    if let Some(path) = raw_game {
        let game = load_raw_game(path)?;
        let start = atom.to_string();
        game.value(&start)?;
        let claim = |a: &String, b: &String| format!("{a} -> {b}");
        play::play(&game, &start, side, &claim, stdin, stdout).map_err(io_err)?;
        return Ok(());
    }
    let atom = parse_atom(atom)?;
    let s = Session::open(inputs, variant)?;
    let start = s.rel(&atom)?;
    let claim = |a: &GameNodeId, b: &GameNodeId| move_claim(a, b).unwrap_or_default();
    play::play(s.game.solved(), &start, side, &claim, stdin, stdout).map_err(io_err)?;
    Ok(())
}

fn dispatch(cli: Cli, stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Solve {
            inputs,
            variant,
            all,
            raw_game,
            wfs,
            output,
        } => cmd_solve(
            inputs,
            *variant,
            *all,
            raw_game.as_deref(),
            *wfs,
            output,
            stdout,
        ),
        Command::Why {
            atom,
            inputs,
            variant,
            format,
            output,
        } => cmd_why(atom, inputs, *variant, format, output, stdout),
        Command::Whynot {
            atom,
            inputs,
            variant,
            format,
            output,
        } => cmd_whynot(atom, inputs, *variant, format, output, stdout),
        Command::Poly {
            atom,
            inputs,
            semiring,
            output,
        } => cmd_poly(atom, inputs, *semiring, output, stdout),
        Command::Export {
            atom,
            inputs,
            variant,
            format,
            scope,
            raw_game,
            output,
        } => cmd_export(
            atom.as_deref(),
            inputs,
            *variant,
            format,
            *scope,
            raw_game.as_deref(),
            output,
            stdout,
        ),
        Command::Play {
            atom,
            inputs,
            variant,
            side,
            raw_game,
        } => cmd_play(
            atom,
            inputs,
            *variant,
            *side,
            raw_game.as_deref(),
            stdin,
            stdout,
        ),
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli, stdin, stdout) {
        Ok(()) => {
            let _ = stdout.flush();
            0
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
