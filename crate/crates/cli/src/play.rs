//! Playing a solved game against the engine in the terminal.
//!
//! Player I moves first. The engine always plays a preferred good move:
//! the shortest win from a won position, the longest delay from a lost one,
//! a drawing move from a drawn one. Ties go to the smallest position id.

use std::io::{self, BufRead, Write};

use provgame_core::game::{EdgeLabel, NodeValue, Position, SolvedGame};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    I,
    II,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::I => Player::II,
            Player::II => Player::I,
        }
    }
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Player::I => "I",
            Player::II => "II",
        })
    }
}

impl std::str::FromStr for Player {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "I" | "i" | "1" => Ok(Player::I),
            "II" | "ii" | "2" => Ok(Player::II),
            other => Err(format!("unknown player `{other}` (expected I or II)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// `None` when the input ended or the play never terminates.
    pub winner: Option<Player>,
    pub plies: usize,
    pub bad_moves: usize,
    pub aborted: bool,
}

/// Who wins from `start` under optimal play, with I to move.
fn predicted_winner(value: NodeValue) -> Option<Player> {
    match value {
        NodeValue::Won => Some(Player::I),
        NodeValue::Lost => Some(Player::II),
        NodeValue::Drawn => None,
    }
}

fn engine_move<P: Position>(game: &SolvedGame<P>, pos: &P) -> P {
    let moves = game.optimal_moves(pos).expect("position is in the game");
    moves
        .preferred
        .into_iter()
        .next()
        .or_else(|| game.graph().followers(pos).ok()?.next().cloned())
        .expect("non-sink position has a move")
}

/// Reads the human's choice among `n` moves. `None` on end of input.
fn read_choice(
    n: usize,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> io::Result<Option<usize>> {
    loop {
        write!(out, "your move [1-{n}]> ")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(None);
        }
        match line.trim().parse::<usize>() {
            Ok(k) if (1..=n).contains(&k) => return Ok(Some(k - 1)),
            _ => writeln!(out, "pick a number between 1 and {n}")?,
        }
    }
}

/// Runs one play from `start`. `claim` describes a move in words.
pub fn play<P: Position>(
    game: &SolvedGame<P>,
    start: &P,
    human: Player,
    claim: &dyn Fn(&P, &P) -> String,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> io::Result<Outcome> {
    let start_value = game.value(start).expect("start is a position");
    writeln!(
        out,
        "game at {start} ({} {}); you are player {human}, player I moves first",
        start_value.symbol(),
        game.length(start).expect("start is a position"),
    )?;

    let limit = 2 * game.graph().len() + 2;
    let mut pos = start.clone();
    let mut mover = Player::I;
    let mut plies = 0;
    let mut bad_moves = 0;
    let winner = loop {
        let followers: Vec<P> = game
            .graph()
            .followers(&pos)
            .expect("position is in the game")
            .cloned()
            .collect();
        if followers.is_empty() {
            writeln!(out, "player {mover} cannot move from {pos}")?;
            break Some(mover.other());
        }
        if plies >= limit {
            writeln!(out, "the play cycles through drawn positions without end")?;
            break None;
        }
        let next = if mover == human {
            for (k, f) in followers.iter().enumerate() {
                writeln!(out, "  [{}] {f}: {}", k + 1, claim(&pos, f))?;
            }
            let Some(k) = read_choice(followers.len(), input, out)? else {
                writeln!(out, "aborted")?;
                return Ok(Outcome {
                    winner: None,
                    plies,
                    bad_moves,
                    aborted: true,
                });
            };
            let next = followers[k].clone();
            if game.label(&pos, &next).ok() == Some(EdgeLabel::Bad) {
                bad_moves += 1;
                writeln!(
                    out,
                    "  bad move: {pos} is {} but {next} is {} for your opponent",
                    game.value(&pos).expect("known").symbol(),
                    game.value(&next).expect("known").symbol(),
                )?;
            }
            next
        } else {
            engine_move(game, &pos)
        };
        writeln!(out, "{mover}: {pos} -> {next}")?;
        writeln!(out, "    \"{}\"", claim(&pos, &next))?;
        pos = next;
        mover = mover.other();
        plies += 1;
    };

    match winner {
        Some(w) if w == human => writeln!(out, "verdict: player {w} wins; you win")?,
        Some(w) => {
            let reason = match (predicted_winner(start_value), bad_moves) {
                (Some(p), 0) if p != human => "the loss was forced".to_string(),
                (Some(p), n) if p != human => {
                    format!("the loss was forced; you also made {n} bad move(s)")
                }
                (_, n) => format!("you lost through {n} bad move(s)"),
            };
            writeln!(out, "verdict: player {w} wins; you lose ({reason})")?;
        }
        None => writeln!(out, "verdict: drawn")?,
    }
    Ok(Outcome {
        winner,
        plies,
        bad_moves,
        aborted: false,
    })
}
