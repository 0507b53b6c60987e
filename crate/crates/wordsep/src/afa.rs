//! Affine finite automata over exact rationals.
//!
//! The machine state is a real vector with entry sum 1; each symbol applies
//! a column-sum-1 matrix, an end-marker matrix is applied after the last
//! symbol, and acceptance is the normalized absolute weight of the
//! accepting entries: `Σ_{accepting} |v_f[j]| / Σ_j |v_f[j]|`. Everything
//! here runs over arbitrary-precision rationals, so equality claims are
//! bit-exact.
//!
//! The word-encoding constructions all maintain the running invariant that
//! after reading a prefix `z` the state is `(e(z), 1 − e(z))` — the
//! positional encoding stored in an affine coordinate — and differ only in
//! how the end-marker turns `e(z)` into an acceptance weight.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{rat, rat_big, rat_int, Matrix, Rational, Scalar, Vector};
use crate::mcqfa::check_disjoint;
use crate::report::{EvalOptions, MachineInfo, SeparationMode, SeparationReport};
use crate::words::{encode, symbol_letter, Word, WordPair};
use crate::{Error, Result};

/// An affine finite automaton (exact rational entries throughout).
#[derive(Clone, Debug)]
pub struct Afa {
    kind: String,
    transitions: Vec<Matrix<Rational>>,
    end_marker: Matrix<Rational>,
    initial: Vector<Rational>,
    accepting: BTreeSet<usize>,
}

/// Final state (after the end-marker) and exact acceptance probability.
#[derive(Clone, Debug)]
pub struct AfaRun {
    pub final_state: Vector<Rational>,
    pub accept_probability: BigRational,
}

impl Afa {
    /// Validate and build: every transition and the end-marker must have
    /// exact column sums 1, the initial state exact entry sum 1.
    pub fn new(
        kind: impl Into<String>,
        transitions: Vec<Matrix<Rational>>,
        end_marker: Matrix<Rational>,
        initial: Vector<Rational>,
        accepting: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let kind = kind.into();
        if transitions.is_empty() || transitions.len() > 26 {
            return Err(Error::InvalidMachine(format!(
                "{kind}: need between 1 and 26 symbols, got {}",
                transitions.len()
            )));
        }
        let n = initial.dim();
        if n == 0 {
            return Err(Error::InvalidMachine(format!("{kind}: empty state space")));
        }
        for (sym, m) in transitions.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::InvalidMachine(format!(
                    "{kind}: transition for {:?} is {}x{}, expected {n}x{n}",
                    symbol_letter(sym as u8),
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_affine() {
                return Err(Error::InvalidMachine(format!(
                    "{kind}: transition for {:?} has a column not summing to 1",
                    symbol_letter(sym as u8)
                )));
            }
        }
        if end_marker.rows() != n || end_marker.cols() != n || !end_marker.is_affine() {
            return Err(Error::InvalidMachine(format!(
                "{kind}: end-marker is not an affine {n}x{n} matrix"
            )));
        }
        if !initial.entry_sum().is_one() {
            return Err(Error::InvalidMachine(format!(
                "{kind}: initial state entries do not sum to 1"
            )));
        }
        let accepting: BTreeSet<usize> = accepting.into_iter().collect();
        if let Some(&bad) = accepting.iter().find(|&&q| q >= n) {
            return Err(Error::InvalidMachine(format!(
                "{kind}: accepting state {bad} out of range (n={n})"
            )));
        }
        Ok(Afa {
            kind,
            transitions,
            end_marker,
            initial,
            accepting,
        })
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn n_states(&self) -> usize {
        self.initial.dim()
    }

    pub fn alphabet(&self) -> u8 {
        self.transitions.len() as u8
    }

    pub fn transition(&self, sym: u8) -> &Matrix<Rational> {
        &self.transitions[sym as usize]
    }

    pub fn end_marker(&self) -> &Matrix<Rational> {
        &self.end_marker
    }

    pub fn initial(&self) -> &Vector<Rational> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    fn check_word(&self, x: &Word) -> Result<()> {
        if x.alphabet() > self.alphabet() {
            if let Some(&bad) = x.symbols().iter().find(|&&s| s >= self.alphabet()) {
                return Err(Error::UnknownSymbol {
                    symbol: bad,
                    alphabet: self.alphabet(),
                });
            }
        }
        Ok(())
    }

    /// States v₀, v₁, …, v_{|x|} reached while reading `x`, before the
    /// end-marker.
    pub fn trajectory(&self, x: &Word) -> Result<Vec<Vector<Rational>>> {
        self.check_word(x)?;
        let mut states = Vec::with_capacity(x.len() + 1);
        states.push(self.initial.clone());
        for &s in x.symbols() {
            let next = self.transitions[s as usize].mat_vec(states.last().unwrap());
            states.push(next);
        }
        Ok(states)
    }

    /// Normalized absolute weight of the accepting entries.
    pub fn measure(&self, final_state: &Vector<Rational>) -> BigRational {
        let total = final_state.l1_norm();
        let mut acc = BigRational::zero();
        for &q in &self.accepting {
            acc += final_state.get(q).abs();
        }
        acc / total
    }

    pub fn run(&self, x: &Word) -> Result<AfaRun> {
        self.check_word(x)?;
        let mut state = self.initial.clone();
        for &s in x.symbols() {
            state = self.transitions[s as usize].mat_vec(&state);
        }
        let final_state = self.end_marker.mat_vec(&state);
        let accept_probability = self.measure(&final_state);
        Ok(AfaRun {
            final_state,
            accept_probability,
        })
    }

    pub fn info(&self) -> MachineInfo {
        MachineInfo {
            kind: self.kind.clone(),
            states: self.n_states(),
            backend: Rational::BACKEND,
        }
    }

    /// Run every word of both sides and verify the claimed separation mode
    /// (`xs` = accept side, `ys` = reject side), bit-exactly.
    pub fn evaluate_separation(
        &self,
        xs: &[Word],
        ys: &[Word],
        mode: SeparationMode,
        opts: &EvalOptions,
    ) -> Result<SeparationReport> {
        check_disjoint(xs, ys)?;
        let start = Instant::now();
        let mut accept_values = Vec::with_capacity(xs.len());
        for w in xs {
            accept_values.push((w.to_string(), self.run(w)?.accept_probability));
        }
        let mut reject_values = Vec::with_capacity(ys.len());
        for w in ys {
            reject_values.push((w.to_string(), self.run(w)?.accept_probability));
        }
        Ok(SeparationReport::assess::<Rational>(
            self.info(),
            mode,
            accept_values,
            reject_values,
            opts,
            start.elapsed(),
        ))
    }

    /// Serialize to the shared machine JSON schema (adds `end_marker`).
    pub fn to_json(&self) -> serde_json::Value {
        let entry = |e: &Rational| Scalar::entry_json(e);
        let transitions: serde_json::Map<String, serde_json::Value> = self
            .transitions
            .iter()
            .enumerate()
            .map(|(sym, m)| {
                (
                    symbol_letter(sym as u8).to_string(),
                    serde_json::Value::Array(m.entries().iter().map(entry).collect()),
                )
            })
            .collect();
        serde_json::json!({
            "schema": 1,
            "kind": self.kind,
            "model": "afa",
            "backend": Rational::BACKEND,
            "states": self.n_states(),
            "alphabet": self.alphabet(),
            "transitions": transitions,
            "end_marker": self.end_marker.entries().iter().map(entry).collect::<Vec<_>>(),
            "initial": self.initial.iter().map(entry).collect::<Vec<_>>(),
            "accepting": self.accepting.iter().copied().collect::<Vec<_>>(),
        })
    }
}

/// The affine map subtracting `1/t` from the first entry per application
/// (on entry-sum-1 states).
fn subtraction_step(t: u32) -> Matrix<Rational> {
    let inv_t = rat(1, i64::from(t));
    Matrix::from_rows(vec![
        vec![rat_int(1) - &inv_t, -inv_t.clone()],
        vec![inv_t.clone(), rat_int(1) + &inv_t],
    ])
}

/// 2-state unary machine starting at `(1 + d/t, −d/t)`, subtracting `1/t`
/// from the first entry per symbol, accepting the first state: after `d`
/// symbols the state is exactly (1, 0) (accept 1), after `d + t` it is
/// (0, 1) (accept 0) — separating `a^d` from `a^{d+t}` exactly.
pub fn subtraction_machine(d: u32, t: u32) -> Result<Afa> {
    if t == 0 {
        return Err(Error::InvalidConstruction(
            "subtraction step t must be > 0".into(),
        ));
    }
    let ratio = rat(i64::from(d), i64::from(t));
    let initial = Vector::from(vec![rat_int(1) + &ratio, -ratio]);
    Afa::new(
        format!("subtraction(d={d},t={t})"),
        vec![subtraction_step(t)],
        Matrix::identity(2),
        initial,
        [0],
    )
}

/// Separate an easy pair by counting its witness symbol affinely: that
/// symbol subtracts `1/t`, all others act as identity. Returns the machine
/// and whether `x` is the side accepted with probability 1.
pub fn subtraction_separator(pair: &WordPair) -> Result<(Afa, bool)> {
    let witness = pair.easy_witness().ok_or_else(|| {
        Error::Precondition("subtraction separation applies to easy pairs only".into())
    })?;
    let cx = pair.x.counts()[witness as usize] as u32;
    let cy = pair.y.counts()[witness as usize] as u32;
    let d = cx.min(cy);
    let t = cx.abs_diff(cy);
    let ratio = rat(i64::from(d), i64::from(t));
    let initial = Vector::from(vec![rat_int(1) + &ratio, -ratio]);
    let transitions = (0..pair.x.alphabet())
        .map(|sym| {
            if sym == witness {
                subtraction_step(t)
            } else {
                Matrix::identity(2)
            }
        })
        .collect();
    let m = Afa::new(
        format!("subtraction(witness={},d={d},t={t})", symbol_letter(witness)),
        transitions,
        Matrix::identity(2),
        initial,
        [0],
    )?;
    Ok((m, cx < cy))
}

/// The per-symbol maps maintaining `(e(z), 1 − e(z))` over a `k`-ary
/// alphabet: reading σ sends `e(z)` to `e(zσ) = k·e(z) + σ`.
pub fn encoding_transitions(k: u8) -> Vec<Matrix<Rational>> {
    assert!(k >= 2, "positional encoding needs alphabet size at least 2");
    (0..k)
        .map(|sigma| {
            let kq = rat_int(i64::from(k));
            let sq = rat_int(i64::from(sigma));
            Matrix::from_rows(vec![
                vec![&kq + &sq, sq.clone()],
                vec![rat_int(1) - &kq - &sq, rat_int(1) - &sq],
            ])
        })
        .collect()
}

/// The end-marker factor turning `(e(z), 1 − e(z))` into
/// `(s·(e(x) − e(z)), 1 − s·(e(x) − e(z)))`, with integer scale `s ≥ 1`.
fn difference_marker(target: &BigInt, scale: u64) -> Matrix<Rational> {
    let s = rat_big(BigInt::from(scale));
    let ex = rat_big(target.clone());
    let r00 = &s * (&ex - rat_int(1));
    let r01 = &s * &ex;
    Matrix::from_rows(vec![
        vec![r00.clone(), r01.clone()],
        vec![rat_int(1) - r00, rat_int(1) - r01],
    ])
}

/// The end-marker factor dividing the first coordinate by `d`:
/// `(w, 1 − w) ↦ (w/d, 1 − w/d)`, generalized to `n` states (first entry
/// scaled, remainder folded into the second entry).
fn scale_first(n: usize, d: &BigRational) -> Matrix<Rational> {
    assert!(!d.is_zero());
    let inv = d.recip();
    let mut m = Matrix::from_rows(vec![vec![rat_int(0); n]; n]);
    m.set(0, 0, inv.clone());
    m.set(1, 0, rat_int(1) - inv);
    for j in 1..n {
        m.set(1, j, rat_int(1));
    }
    m
}

/// Sum all entries except the first into one coordinate: with
/// `swap = false` the result is `(v₁, Σ_{j>1} v_j, 0, …, 0)`; with
/// `swap = true` the two outputs trade places.
fn collapse_to_pair(n: usize, swap: bool) -> Matrix<Rational> {
    let (first_row, rest_row) = if swap { (1, 0) } else { (0, 1) };
    let mut m = Matrix::from_rows(vec![vec![rat_int(0); n]; n]);
    m.set(first_row, 0, rat_int(1));
    for j in 1..n {
        m.set(rest_row, j, rat_int(1));
    }
    m
}

/// The sharpening map sending `(w, 1 − w, 0, …, 0)` to
/// `(k·w, −(k+1)·w, 1 + w, 0, …, 0)`: the acceptance weight of the third
/// entry shrinks like `1/k` unless `w = 0`, which maps to exactly
/// `(0, 0, 1, 0, …, 0)`.
fn sharpening_map(n: usize, k: u64) -> Matrix<Rational> {
    assert!(n >= 3);
    let kq = rat_big(BigInt::from(k));
    let mut m = Matrix::from_rows(vec![vec![rat_int(0); n]; n]);
    m.set(0, 0, kq.clone());
    m.set(1, 0, -(&kq + rat_int(1)));
    m.set(2, 0, rat_int(2));
    for j in 1..n {
        m.set(2, j, rat_int(1));
    }
    m
}

fn require_fits_alphabet(w: &Word, alphabet: u8, what: &str) -> Result<()> {
    if w.alphabet() > alphabet {
        return Err(Error::Precondition(format!(
            "{what} must fit the machine alphabet ({} > {alphabet})",
            w.alphabet()
        )));
    }
    Ok(())
}

/// Encode a word into the machine's base for `e(·)` arithmetic.
fn encode_in(w: &Word, alphabet: u8) -> BigInt {
    let lifted = Word::new(w.symbols().to_vec(), alphabet).expect("alphabet checked");
    encode(&lifted)
}

/// 2-state machine separating two distinct binary words exactly: the run
/// tracks `(e(z), 1 − e(z))`; the end-marker maps `e(z)` to
/// `(e(x) − e(z)) / (e(x) − e(y))`. Reading `x` accepts with probability
/// exactly 1, reading `y` with exactly 0. Accepting state: the second.
pub fn encoding_machine(x: &Word, y: &Word) -> Result<Afa> {
    if x.alphabet() > 2 || y.alphabet() > 2 {
        return Err(Error::Precondition(
            "exact pair separation is defined for binary words".into(),
        ));
    }
    if x == y {
        return Err(Error::InvalidPair("words are identical".into()));
    }
    let ex = encode_in(x, 2);
    let ey = encode_in(y, 2);
    let d = rat_big(&ex - &ey);
    let marker = scale_first(2, &d).mat_mul(&difference_marker(&ex, 1));
    Afa::new(
        format!("encoding-pair({},{})", x.display_digits(), y.display_digits()),
        encoding_transitions(2),
        marker,
        Vector::from(vec![rat_int(1), rat_int(0)]),
        [1],
    )
}

/// 2-state machine accepting `x` with probability exactly 1 and every
/// other word over the alphabet with probability at most
/// `(k+1)/(2k+1)` for scale `k` (2/3 at scale 1). The end-marker leaves
/// `(k·i, 1 − k·i)` with `i = e(x) − e(z)`, a nonzero integer whenever
/// `z ≠ x`. Accepting state: the second.
pub fn bounded_machine(x: &Word, alphabet: u8, scale: u64) -> Result<Afa> {
    if alphabet < 2 {
        return Err(Error::Precondition("alphabet size must be at least 2".into()));
    }
    require_fits_alphabet(x, alphabet, "the distinguished word")?;
    if scale == 0 {
        return Err(Error::InvalidConstruction("scale must be at least 1".into()));
    }
    let ex = encode_in(x, alphabet);
    Afa::new(
        format!(
            "bounded({},k={alphabet},scale={scale})",
            x.display_letters()
        ),
        encoding_transitions(alphabet),
        difference_marker(&ex, scale),
        Vector::from(vec![rat_int(1), rat_int(0)]),
        [1],
    )
}

fn embed_pair_in(n: usize, m: &Matrix<Rational>) -> Matrix<Rational> {
    let mut out = Matrix::identity(n);
    for i in 0..2 {
        for j in 0..2 {
            out.set(i, j, m.get(i, j).clone());
        }
    }
    out
}

/// 3-state machine accepting `x` with probability exactly 1 and every
/// other word with probability at most `2/(2k+1)` (the attained maximum is
/// `2/(2k+3)`). The encoding pair is embedded in the first two states; the
/// end-marker composes the difference map with the sharpening map, leaving
/// `(k·i, −(k+1)·i, 1 + i)` with `i = e(x) − e(z)`. Accepting state: the
/// third.
pub fn three_state_machine(x: &Word, alphabet: u8, k: u64) -> Result<Afa> {
    if alphabet < 2 {
        return Err(Error::Precondition("alphabet size must be at least 2".into()));
    }
    require_fits_alphabet(x, alphabet, "the distinguished word")?;
    if k == 0 {
        return Err(Error::InvalidConstruction("sharpening k must be at least 1".into()));
    }
    let ex = encode_in(x, alphabet);
    let transitions = encoding_transitions(alphabet)
        .iter()
        .map(|m| embed_pair_in(3, m))
        .collect();
    let marker = sharpening_map(3, k).mat_mul(&embed_pair_in(3, &difference_marker(&ex, 1)));
    Afa::new(
        format!("three-state({},k={alphabet},sharpen={k})", x.display_letters()),
        transitions,
        marker,
        Vector::from(vec![rat_int(1), rat_int(0), rat_int(0)]),
        [2],
    )
}

fn check_binary_set(words: &[Word], what: &str) -> Result<()> {
    if words.is_empty() {
        return Err(Error::Precondition(format!("{what} must be nonempty")));
    }
    for w in words {
        if w.alphabet() > 2 {
            return Err(Error::Precondition(format!(
                "{what} must contain binary words"
            )));
        }
    }
    for (i, w) in words.iter().enumerate() {
        if words[i + 1..].contains(w) {
            return Err(Error::Precondition(format!(
                "{what} contains {} twice",
                w.display_digits()
            )));
        }
    }
    Ok(())
}

/// Tensor the 2-state encoding runs for `m` words into a `2^m`-state run:
/// reading `z` produces `⊗_j (e(z), 1 − e(z))`, and applying each word's
/// difference marker leaves the first entry `Π_j (e(w_j) − e(z))`.
fn tensor_encoding(words: &[Word]) -> (Vec<Matrix<Rational>>, Matrix<Rational>, Vector<Rational>) {
    let base = encoding_transitions(2);
    let mut transitions = base.clone();
    let mut marker = difference_marker(&encode_in(&words[0], 2), 1);
    let mut initial = Vector::from(vec![rat_int(1), rat_int(0)]);
    let unit = Vector::from(vec![rat_int(1), rat_int(0)]);
    for w in &words[1..] {
        for (t, b) in transitions.iter_mut().zip(&base) {
            *t = t.tensor(b);
        }
        marker = marker.tensor(&difference_marker(&encode_in(w, 2), 1));
        initial = initial.tensor(&unit);
    }
    (transitions, marker, initial)
}

/// `2^{|Y|}`-state machine separating the binary word `x` from every word
/// of the finite set `Y` exactly: accept(x) = 1 and accept(y) = 0 for all
/// y ∈ Y, bit-exactly. Runs one encoding per member of `Y` in parallel;
/// the end-marker collapses the product `Π_j (e(y_j) − e(z))` onto the
/// first entry and divides by its value at `z = x`. Accepting state: the
/// first.
pub fn singleton_vs_set_machine(x: &Word, ys: &[Word]) -> Result<Afa> {
    check_binary_set(ys, "the excluded set")?;
    if x.alphabet() > 2 {
        return Err(Error::Precondition(
            "the distinguished word must be binary".into(),
        ));
    }
    if ys.contains(x) {
        return Err(Error::OverlappingSets(x.display_digits()));
    }
    let n = 1usize << ys.len();
    let (transitions, markers, initial) = tensor_encoding(ys);
    let ex = encode_in(x, 2);
    let mut d = BigInt::one();
    for y in ys {
        d *= encode_in(y, 2) - &ex;
    }
    let marker = scale_first(n, &rat_big(d))
        .mat_mul(&collapse_to_pair(n, false))
        .mat_mul(&markers);
    let names: Vec<String> = ys.iter().map(Word::display_digits).collect();
    Afa::new(
        format!(
            "encoding-set({} | {})",
            x.display_digits(),
            names.join(",")
        ),
        transitions,
        marker,
        initial,
        [0],
    )
}

/// `2^{|X|}`-state machine accepting every member of the binary set `X`
/// with probability exactly 1 and every other word with probability at
/// most 2/3 — or at most `2/(2k+1)` when `sharpen` composes the
/// sharpening map into the end-marker. Runs one encoding per member; the
/// end-marker turns the product `P = Π_j (e(x_j) − e(z))`, which vanishes
/// exactly on members, into the final acceptance weight. A sharpened
/// singleton needs a third state, so `|X| = 1` with `sharpen` returns the
/// 3-state machine.
pub fn set_machine(xs: &[Word], k: u64, sharpen: bool) -> Result<Afa> {
    check_binary_set(xs, "the member set")?;
    if k == 0 {
        return Err(Error::InvalidConstruction("sharpening k must be at least 1".into()));
    }
    if xs.len() == 1 && sharpen {
        return three_state_machine(&xs[0], 2, k);
    }
    let n = 1usize << xs.len();
    let (transitions, markers, initial) = tensor_encoding(xs);
    let names: Vec<String> = xs.iter().map(Word::display_digits).collect();
    let (marker, accepting, kind) = if sharpen {
        (
            sharpening_map(n, k)
                .mat_mul(&collapse_to_pair(n, false))
                .mat_mul(&markers),
            2usize,
            format!("members-set({} | sharpen={k})", names.join(",")),
        )
    } else {
        (
            collapse_to_pair(n, true).mat_mul(&markers),
            0usize,
            format!("members-set({})", names.join(",")),
        )
    };
    Afa::new(kind, transitions, marker, initial, [accepting])
}
