//! Brute-force minimal separating DFA — the classical ground truth.
//!
//! A DFA separates two words when they drive it from the start state to
//! different states; no accepting set is involved. The minimum number of
//! states needed is the baseline the automata in the rest of this crate
//! are measured against. Enumeration covers each connected machine once by
//! numbering states in discovery order: scanning the transition table
//! row-major, a previously unseen state may only appear with the next
//! unused label, and every state must be referenced before its own row.

use rayon::prelude::*;

use crate::words::Word;
use crate::{Error, Result};

/// Deterministic finite automaton with start state 0 (no accepting set:
/// separation is about reaching distinct states).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    n: usize,
    alphabet: u8,
    table: Vec<usize>,
}

impl Dfa {
    pub fn new(n: usize, alphabet: u8, table: Vec<usize>) -> Result<Self> {
        if n == 0 || alphabet == 0 {
            return Err(Error::InvalidMachine(
                "a DFA needs at least one state and one symbol".into(),
            ));
        }
        if table.len() != n * alphabet as usize {
            return Err(Error::InvalidMachine(format!(
                "transition table has {} entries, expected {}",
                table.len(),
                n * alphabet as usize
            )));
        }
        if table.iter().any(|&q| q >= n) {
            return Err(Error::InvalidMachine("transition target out of range".into()));
        }
        Ok(Dfa { n, alphabet, table })
    }

    pub fn n_states(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// State reached from the start state after reading `w`.
    pub fn run(&self, w: &Word) -> Result<usize> {
        let mut state = 0usize;
        for &s in w.symbols() {
            if s >= self.alphabet {
                return Err(Error::UnknownSymbol {
                    symbol: s,
                    alphabet: self.alphabet,
                });
            }
            state = self.table[state * self.alphabet as usize + s as usize];
        }
        Ok(state)
    }

    pub fn separates(&self, x: &Word, y: &Word) -> Result<bool> {
        Ok(self.run(x)? != self.run(y)?)
    }
}

fn run_table(table: &[usize], k: usize, w: &[u8]) -> usize {
    let mut state = 0usize;
    for &s in w {
        state = table[state * k + s as usize];
    }
    state
}

/// Depth-first completion of a partial table in canonical numbering;
/// returns the lexicographically first completed table that separates.
fn complete(
    table: &mut Vec<usize>,
    max_used: usize,
    n: usize,
    k: usize,
    x: &[u8],
    y: &[u8],
) -> Option<Vec<usize>> {
    let idx = table.len();
    if idx == n * k {
        if max_used == n - 1 && run_table(table, k, x) != run_table(table, k, y) {
            return Some(table.clone());
        }
        return None;
    }
    // A state never referenced before its own row is unreachable.
    if idx.is_multiple_of(k) && idx / k > max_used {
        return None;
    }
    let limit = (max_used + 1).min(n - 1);
    for v in 0..=limit {
        table.push(v);
        let found = complete(table, max_used.max(v), n, k, x, y);
        table.truncate(idx);
        if found.is_some() {
            return found;
        }
    }
    None
}

/// All canonical choices for the first row, as parallel work partitions.
fn first_row_prefixes(n: usize, k: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(
        current: &mut Vec<usize>,
        max_used: usize,
        n: usize,
        k: usize,
        out: &mut Vec<(Vec<usize>, usize)>,
    ) {
        if current.len() == k {
            out.push((current.clone(), max_used));
            return;
        }
        let limit = (max_used + 1).min(n - 1);
        for v in 0..=limit {
            current.push(v);
            rec(current, max_used.max(v), n, k, out);
            current.pop();
        }
    }
    rec(&mut current, 0, n, k, &mut out);
    out
}

/// Smallest DFA (by state count, then lexicographic table order) with at
/// most `n_max` states sending `x` and `y` to different states, if any.
pub fn min_separating_dfa(x: &Word, y: &Word, n_max: usize) -> Result<Option<Dfa>> {
    if x == y {
        return Err(Error::InvalidPair("words are identical".into()));
    }
    let k = usize::from(x.alphabet().max(y.alphabet()).max(1));
    for n in 1..=n_max {
        let found = first_row_prefixes(n, k)
            .into_par_iter()
            .map(|(prefix, max_used)| {
                let mut table = prefix;
                table.reserve(n * k);
                complete(&mut table, max_used, n, k, x.symbols(), y.symbols())
            })
            .find_first(Option::is_some)
            .flatten();
        if let Some(table) = found {
            return Ok(Some(Dfa {
                n,
                alphabet: k as u8,
                table,
            }));
        }
    }
    Ok(None)
}

/// State count of the smallest separating DFA within `n_max`, if any.
pub fn min_separating_dfa_size(x: &Word, y: &Word, n_max: usize) -> Result<Option<usize>> {
    Ok(min_separating_dfa(x, y, n_max)?.map(|d| d.n))
}
