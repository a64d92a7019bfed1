//! Seeded random programs and databases for property tests.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::datalog::{parse_database, parse_program, Database, Program};

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub negation: bool,
    pub max_rules: usize,
    pub max_goals: usize,
    pub max_constants: usize,
    pub idb_in_bodies: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            negation: true,
            max_rules: 3,
            max_goals: 3,
            max_constants: 3,
            idb_in_bodies: true,
        }
    }
}

impl Shape {
    pub fn positive() -> Self {
        Shape {
            negation: false,
            ..Shape::default()
        }
    }
}

const EDB: [(&str, usize); 2] = [("E", 2), ("F", 1)];
const IDB: [(&str, usize); 3] = [("P", 1), ("Q", 2), ("R", 1)];
const CONSTANTS: [&str; 3] = ["a", "b", "c"];
const VARIABLES: [&str; 2] = ["X", "Y"];

/// A non-recursive program over `E/2, F/1` (EDB) and `P/1, Q/2, R/1` (IDB,
/// each depending only on earlier ones) with a random database.
pub fn random_instance(seed: u64, shape: Shape) -> (Program, Database) {
    let mut rng = StdRng::seed_from_u64(seed);
    let n_const = rng.random_range(1..=shape.max_constants);
    let consts = &CONSTANTS[..n_const];

    let term = |rng: &mut StdRng| -> String {
        if rng.random_bool(0.8) {
            VARIABLES[rng.random_range(0..VARIABLES.len())].into()
        } else {
            consts[rng.random_range(0..consts.len())].into()
        }
    };
    let atom = |rng: &mut StdRng, (name, arity): (&str, usize)| -> String {
        let args: Vec<String> = (0..arity).map(|_| term(rng)).collect();
        format!("{name}({})", args.join(","))
    };

    let mut text = String::new();
    for _ in 0..rng.random_range(1..=shape.max_rules) {
        let h = rng.random_range(0..IDB.len());
        let mut body = Vec::new();
        for _ in 0..rng.random_range(1..=shape.max_goals) {
            let reach = if shape.idb_in_bodies { h } else { 0 };
            let pick = rng.random_range(0..EDB.len() + reach);
            let pred = if pick < EDB.len() {
                EDB[pick]
            } else {
                IDB[pick - EDB.len()]
            };
            let neg = shape.negation && rng.random_bool(0.3);
            let a = atom(&mut rng, pred);
            body.push(if neg { format!("not {a}") } else { a });
        }
        let head = atom(&mut rng, IDB[h]);
        text.push_str(&format!("{head} :- {}.\n", body.join(", ")));
    }

    let mut db = String::new();
    let mut k = 0;
    for (name, arity) in EDB {
        let n = consts.len().pow(arity as u32);
        for i in 0..n {
            if rng.random_bool(0.5) {
                let args: Vec<&str> = (0..arity)
                    .map(|d| consts[i / consts.len().pow(d as u32) % consts.len()])
                    .collect();
                db.push_str(&format!("{name}({}) @x{k}.\n", args.join(",")));
                k += 1;
            }
        }
    }
    let program = parse_program(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    let database = parse_database(&db).unwrap_or_else(|e| panic!("{e}\n{db}"));
    (program, database)
}
