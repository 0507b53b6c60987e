//! Measure-once quantum finite automata.
//!
//! The machine state is a unit vector; each input symbol applies its
//! unitary (first symbol first: reading `x = x_1 … x_n` yields
//! `U_{x_n} ··· U_{x_1} · u_0`), and acceptance is the squared amplitude
//! mass on the accepting states of the final vector. Machines run either
//! over exact rationals (when every entry is rational) or complex floats.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::Rng;

use crate::exactnum::{rat, rat_int, ComplexFloat, Matrix, Rational, Scalar, Vector};
use crate::freegroup::{FreeWord, Gen};
use crate::report::{EvalOptions, MachineInfo, SeparationMode, SeparationReport, DEFAULT_TOL};
use crate::words::{symbol_letter, Word, WordPair};
use crate::{Error, Result};

/// A measure-once quantum finite automaton over scalar backend `S`.
#[derive(Clone, Debug)]
pub struct Mcqfa<S: Scalar> {
    kind: String,
    transitions: Vec<Matrix<S>>,
    initial: Vector<S>,
    accepting: BTreeSet<usize>,
}

/// Final state and acceptance probability of one run.
#[derive(Clone, Debug)]
pub struct RunResult<S: Scalar> {
    pub final_state: Vector<S>,
    pub accept_probability: S::Real,
}

impl<S: Scalar> Mcqfa<S> {
    /// Validate and build: one unitary per symbol (all n×n), unit initial
    /// state, accepting indices in range. `tol` governs the float backend's
    /// unitarity/norm checks; the exact backend ignores it.
    pub fn new(
        kind: impl Into<String>,
        transitions: Vec<Matrix<S>>,
        initial: Vector<S>,
        accepting: impl IntoIterator<Item = usize>,
        tol: f64,
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
            if !m.all_finite() {
                return Err(Error::InvalidMachine(format!(
                    "{kind}: non-finite entry in transition for {:?}",
                    symbol_letter(sym as u8)
                )));
            }
            if !m.is_unitary(tol) {
                return Err(Error::InvalidMachine(format!(
                    "{kind}: transition for {:?} is not unitary",
                    symbol_letter(sym as u8)
                )));
            }
        }
        if !S::real_is_one(&initial.l2_norm_sq(), tol) {
            return Err(Error::InvalidMachine(format!(
                "{kind}: initial state is not a unit vector"
            )));
        }
        let accepting: BTreeSet<usize> = accepting.into_iter().collect();
        if let Some(&bad) = accepting.iter().find(|&&q| q >= n) {
            return Err(Error::InvalidMachine(format!(
                "{kind}: accepting state {bad} out of range (n={n})"
            )));
        }
        Ok(Mcqfa {
            kind,
            transitions,
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

    pub fn transition(&self, sym: u8) -> &Matrix<S> {
        &self.transitions[sym as usize]
    }

    pub fn initial(&self) -> &Vector<S> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    /// Squared amplitude mass on the accepting states.
    pub fn measure(&self, state: &Vector<S>) -> S::Real {
        let mut p = S::real_zero();
        for &q in &self.accepting {
            p = p + state.get(q).abs_sq();
        }
        p
    }

    pub fn run(&self, x: &Word) -> Result<RunResult<S>> {
        if x.alphabet() > self.alphabet() {
            if let Some(&bad) = x.symbols().iter().find(|&&s| s >= self.alphabet()) {
                return Err(Error::UnknownSymbol {
                    symbol: bad,
                    alphabet: self.alphabet(),
                });
            }
        }
        let mut state = self.initial.clone();
        for &s in x.symbols() {
            state = self.transitions[s as usize].mat_vec(&state);
        }
        let accept_probability = self.measure(&state);
        Ok(RunResult {
            final_state: state,
            accept_probability,
        })
    }

    pub fn info(&self) -> MachineInfo {
        MachineInfo {
            kind: self.kind.clone(),
            states: self.n_states(),
            backend: S::BACKEND,
        }
    }

    /// Run every word of both sides and verify the claimed separation mode
    /// (`xs` = accept side, `ys` = reject side).
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
        Ok(SeparationReport::assess::<S>(
            self.info(),
            mode,
            accept_values,
            reject_values,
            opts,
            start.elapsed(),
        ))
    }

    /// Serialize to the shared machine JSON schema.
    pub fn to_json(&self) -> serde_json::Value {
        let transitions: serde_json::Map<String, serde_json::Value> = self
            .transitions
            .iter()
            .enumerate()
            .map(|(sym, m)| {
                (
                    symbol_letter(sym as u8).to_string(),
                    serde_json::Value::Array(m.entries().iter().map(S::entry_json).collect()),
                )
            })
            .collect();
        serde_json::json!({
            "schema": 1,
            "kind": self.kind,
            "model": "mcqfa",
            "backend": S::BACKEND,
            "states": self.n_states(),
            "alphabet": self.alphabet(),
            "transitions": transitions,
            "initial": self.initial.iter().map(S::entry_json).collect::<Vec<_>>(),
            "accepting": self.accepting.iter().copied().collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn check_disjoint(xs: &[Word], ys: &[Word]) -> Result<()> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::Precondition(
            "separation needs nonempty accept and reject sides".into(),
        ));
    }
    for x in xs {
        if ys.contains(x) {
            return Err(Error::OverlappingSets(x.to_string()));
        }
    }
    Ok(())
}

fn c(re: f64) -> ComplexFloat {
    ComplexFloat::new(re, 0.0)
}

fn real_rotation(theta: f64) -> Matrix<ComplexFloat> {
    Matrix::from_rows(vec![
        vec![c(theta.cos()), c(-theta.sin())],
        vec![c(theta.sin()), c(theta.cos())],
    ])
}

/// 2-state unary machine: each symbol rotates the plane counter-clockwise
/// by π/2t, starting at angle −dπ/2t, accepting the first state. After
/// `d` symbols the state is exactly (1,0) (accept 1); after `d+t` it is
/// (0,1) (accept 0) — separating `a^d` from `a^{d+t}`.
pub fn rotation_machine(d: u32, t: u32) -> Result<Mcqfa<ComplexFloat>> {
    if t == 0 {
        return Err(Error::InvalidConstruction("rotation step t must be > 0".into()));
    }
    let theta = PI / (2.0 * f64::from(t));
    let angle0 = f64::from(d) * theta;
    let initial = Vector::from(vec![c(angle0.cos()), c(-angle0.sin())]);
    Mcqfa::new(
        format!("rotation(d={d},t={t})"),
        vec![real_rotation(theta)],
        initial,
        [0],
        DEFAULT_TOL,
    )
}

/// Separate an easy pair by counting its witness symbol: that symbol
/// rotates by π/2t, all others act as identity. Returns the machine and
/// whether `x` is the side accepted with probability 1 (the word with the
/// smaller witness count).
pub fn rotation_separator(pair: &WordPair) -> Result<(Mcqfa<ComplexFloat>, bool)> {
    let witness = match pair.easy_witness() {
        Some(witness_symbol) => witness_symbol,
        None => {
            return Err(Error::Precondition(
                "rotation separation applies to easy pairs only".into(),
            ))
        }
    };
    let cx = pair.x.counts()[witness as usize] as u32;
    let cy = pair.y.counts()[witness as usize] as u32;
    let d = cx.min(cy);
    let t = cx.abs_diff(cy);
    let theta = PI / (2.0 * f64::from(t));
    let angle0 = f64::from(d) * theta;
    let initial = Vector::from(vec![c(angle0.cos()), c(-angle0.sin())]);
    let transitions = (0..pair.x.alphabet())
        .map(|sym| {
            if sym == witness {
                real_rotation(theta)
            } else {
                Matrix::identity(2)
            }
        })
        .collect();
    let m = Mcqfa::new(
        format!(
            "rotation(witness={},d={d},t={t})",
            symbol_letter(witness)
        ),
        transitions,
        initial,
        [0],
        DEFAULT_TOL,
    )?;
    Ok((m, cx < cy))
}

/// The 2-state real machine separating the hard pair (ab, ba) exactly:
/// initial (1/√2, 1/√2), symbol `a` negates the second amplitude, symbol
/// `b` applies the balanced reflection. Reading "ab" ends in (0,1)
/// (accept 0), reading "ba" ends in (1,0) (accept 1).
pub fn swap_pair_machine() -> Mcqfa<ComplexFloat> {
    let h = 1.0 / 2.0_f64.sqrt();
    let u_a = Matrix::from_rows(vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(-1.0)]]);
    let u_b = Matrix::from_rows(vec![vec![c(h), c(h)], vec![c(h), c(-h)]]);
    Mcqfa::new(
        "swap-pair",
        vec![u_a, u_b],
        Vector::from(vec![c(h), c(h)]),
        [0],
        DEFAULT_TOL,
    )
    .expect("fixed construction is valid")
}

fn complex_entries_real(m: &Mcqfa<ComplexFloat>) -> bool {
    m.transitions
        .iter()
        .flat_map(|t| t.entries().iter())
        .chain(m.initial.iter())
        .all(|e| e.im == 0.0)
}

/// Is the word a concatenation of doubled letters `aa` / `bb`?
pub fn is_doubled_word(w: &Word) -> bool {
    w.alphabet() <= 2 && w.symbols().chunks(2).all(|ch| ch.len() == 2 && ch[0] == ch[1])
}

/// Sup-norm gap between the final states a 2-state real machine reaches on
/// two doubled-letter words with equal symbol counts. The squares of real
/// 2×2 orthogonal matrices are plane rotations, which commute, so the two
/// products coincide and the gap is numerical noise — no such machine can
/// separate such a pair, even nondeterministically.
pub fn equal_count_final_gap(
    m: &Mcqfa<ComplexFloat>,
    x: &Word,
    y: &Word,
) -> Result<f64> {
    if m.n_states() != 2 || !complex_entries_real(m) {
        return Err(Error::Precondition(
            "gap check applies to 2-state real machines".into(),
        ));
    }
    if !is_doubled_word(x) || !is_doubled_word(y) {
        return Err(Error::Precondition(
            "gap check needs words built from doubled letters".into(),
        ));
    }
    if x.counts() != y.counts() {
        return Err(Error::Precondition(
            "gap check needs equal symbol counts".into(),
        ));
    }
    let fx = m.run(x)?.final_state;
    let fy = m.run(y)?.final_state;
    let gap = fx
        .iter()
        .zip(fy.iter())
        .map(|(a, b)| (*a - *b).norm())
        .fold(0.0f64, f64::max);
    Ok(gap)
}

/// A uniformly seeded random 2-state machine with real orthogonal
/// transitions (rotation or reflection per symbol), a random real unit
/// initial state, and accepting {q₁}.
pub fn random_real_orthogonal_machine(rng: &mut impl Rng) -> Mcqfa<ComplexFloat> {
    let random_orthogonal = |rng: &mut dyn rand::RngCore| {
        let phi: f64 = rng.gen_range(0.0..(2.0 * PI));
        let reflect: bool = rng.gen();
        let m = real_rotation(phi);
        if reflect {
            m.mat_mul(&Matrix::from_rows(vec![
                vec![c(1.0), c(0.0)],
                vec![c(0.0), c(-1.0)],
            ]))
        } else {
            m
        }
    };
    let u_a = random_orthogonal(rng);
    let u_b = random_orthogonal(rng);
    let psi: f64 = rng.gen_range(0.0..(2.0 * PI));
    let initial = Vector::from(vec![c(psi.cos()), c(psi.sin())]);
    Mcqfa::new("random-orthogonal", vec![u_a, u_b], initial, [0], DEFAULT_TOL)
        .expect("orthogonal construction is valid")
}

/// The fixed pair of exact rational rotations (about the third and second
/// axes, by the angle with cosine 4/5) that generates a free group — the
/// rotation pair behind the Banach–Tarski construction. Symbol 0 ↦ first,
/// symbol 1 ↦ second.
pub fn free_rotation_generators() -> (Matrix<Rational>, Matrix<Rational>) {
    let u_a = Matrix::from_rows(vec![
        vec![rat(4, 5), rat(3, 5), rat_int(0)],
        vec![rat(-3, 5), rat(4, 5), rat_int(0)],
        vec![rat_int(0), rat_int(0), rat_int(1)],
    ]);
    let u_b = Matrix::from_rows(vec![
        vec![rat(4, 5), rat_int(0), rat(3, 5)],
        vec![rat_int(0), rat_int(1), rat_int(0)],
        vec![rat(-3, 5), rat_int(0), rat(4, 5)],
    ]);
    (u_a, u_b)
}

/// Evaluate a free word on the free rotation pair, exactly. Inverses are
/// transposes. The map is injective: the result is the identity matrix
/// only for the empty word.
pub fn free_rotation_product(w: &FreeWord) -> Matrix<Rational> {
    let (u_a, u_b) = free_rotation_generators();
    let mut acc: Matrix<Rational> = Matrix::identity(3);
    for l in w.letters() {
        let base = match l.gen {
            Gen::A => &u_a,
            Gen::B => &u_b,
        };
        let factor = if l.exp == 1 { base.clone() } else { base.transpose() };
        acc = acc.mat_mul(&factor);
    }
    acc
}

/// Exact 3-state machine accepting the single word `x` with probability 0
/// and every other word with nonzero probability (accepting {q₂, q₃}).
/// The initial state applies the inverses of `x`'s transitions to |q₁⟩ in
/// reverse reading order, so reading `x` telescopes back to |q₁⟩ exactly;
/// any other word leaves a nontrivial free-rotation product applied to
/// |q₁⟩.
pub fn free_rotation_machine(x: &Word) -> Result<Mcqfa<Rational>> {
    if x.alphabet() > 2 {
        return Err(Error::Precondition(
            "single-word exclusion machine needs a binary word".into(),
        ));
    }
    let (u_a, u_b) = free_rotation_generators();
    let mut initial = Vector::basis(3, 0);
    for &s in x.symbols().iter().rev() {
        let inv = if s == 0 { u_a.transpose() } else { u_b.transpose() };
        initial = inv.mat_vec(&initial);
    }
    Mcqfa::new(
        format!("free-rotation({})", x.display_letters()),
        vec![u_a, u_b],
        initial,
        [1, 2],
        0.0,
    )
}

/// Lift an exact rotation matrix (in SO(3)) to SU(2) through the double
/// cover, pairing the first rotation axis with the diagonal Pauli matrix
/// so rotations fixing the first axis lift to diagonal unitaries. The
/// global sign is fixed by making the quaternion's first nonzero component
/// positive.
pub fn su2_from_so3(m: &Matrix<Rational>) -> Matrix<ComplexFloat> {
    let r = |i: usize, j: usize| -> f64 { m.get(i, j).to_f64().unwrap() };
    let t = r(0, 0) + r(1, 1) + r(2, 2);
    // Quaternion components via the largest of w², x², y², z² (Shepperd's
    // pivot choice keeps the divisions well-conditioned).
    let candidates = [t, r(0, 0), r(1, 1), r(2, 2)];
    let pivot = candidates
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    let mut q = match pivot {
        0 => {
            let w = (1.0 + t).sqrt() / 2.0;
            [
                w,
                (r(2, 1) - r(1, 2)) / (4.0 * w),
                (r(0, 2) - r(2, 0)) / (4.0 * w),
                (r(1, 0) - r(0, 1)) / (4.0 * w),
            ]
        }
        1 => {
            let x = (1.0 + 2.0 * r(0, 0) - t).sqrt() / 2.0;
            [
                (r(2, 1) - r(1, 2)) / (4.0 * x),
                x,
                (r(0, 1) + r(1, 0)) / (4.0 * x),
                (r(0, 2) + r(2, 0)) / (4.0 * x),
            ]
        }
        2 => {
            let y = (1.0 + 2.0 * r(1, 1) - t).sqrt() / 2.0;
            [
                (r(0, 2) - r(2, 0)) / (4.0 * y),
                (r(0, 1) + r(1, 0)) / (4.0 * y),
                y,
                (r(1, 2) + r(2, 1)) / (4.0 * y),
            ]
        }
        _ => {
            let z = (1.0 + 2.0 * r(2, 2) - t).sqrt() / 2.0;
            [
                (r(1, 0) - r(0, 1)) / (4.0 * z),
                (r(0, 2) + r(2, 0)) / (4.0 * z),
                (r(1, 2) + r(2, 1)) / (4.0 * z),
                z,
            ]
        }
    };
    if let Some(first) = q.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            for v in &mut q {
                *v = -*v;
            }
        }
    }
    let [w, x, y, z] = q;
    // U = wI − i(x·σz + y·σx + z·σy): rotation axis 1 ↦ Pauli z, so the
    // state |p₁⟩ plays the role the first coordinate axis plays in SO(3).
    Matrix::from_rows(vec![
        vec![ComplexFloat::new(w, -x), ComplexFloat::new(-z, -y)],
        vec![ComplexFloat::new(z, -y), ComplexFloat::new(w, x)],
    ])
}

/// 2-state complex machine with the same zero/nonzero acceptance pattern
/// as [`free_rotation_machine`]: reading `x` leaves the accepting
/// amplitude at zero, any other word makes it nonzero. Obtained by lifting
/// both rotations through the SO(3) → SU(2) double cover; accepting {p₂}.
pub fn spin_lift_machine(x: &Word) -> Result<Mcqfa<ComplexFloat>> {
    if x.alphabet() > 2 {
        return Err(Error::Precondition(
            "single-word exclusion machine needs a binary word".into(),
        ));
    }
    let (u_a, u_b) = free_rotation_generators();
    let v_a = su2_from_so3(&u_a);
    let v_b = su2_from_so3(&u_b);
    let mut initial = Vector::basis(2, 0);
    for &s in x.symbols().iter().rev() {
        let inv = if s == 0 { v_a.dagger() } else { v_b.dagger() };
        initial = inv.mat_vec(&initial);
    }
    Mcqfa::new(
        format!("spin-lift({})", x.display_letters()),
        vec![v_a, v_b],
        initial,
        [1],
        DEFAULT_TOL,
    )
}

/// Tensor several machines over the same alphabet into one running them
/// in parallel. A product state is accepting when every component state is
/// accepting in its own machine, so the acceptance probability is the
/// product of the components'.
pub fn tensor_machines<S: Scalar>(machines: &[Mcqfa<S>], tol: f64) -> Result<Mcqfa<S>> {
    let first = machines
        .first()
        .ok_or_else(|| Error::Precondition("tensor of zero machines".into()))?;
    if machines.iter().any(|m| m.alphabet() != first.alphabet()) {
        return Err(Error::Precondition(
            "tensored machines must share an alphabet".into(),
        ));
    }
    let mut transitions = first.transitions.clone();
    let mut initial = first.initial.clone();
    let mut accepting_flat: Vec<usize> = first.accepting.iter().copied().collect();
    for m in &machines[1..] {
        for (t, mt) in transitions.iter_mut().zip(&m.transitions) {
            *t = t.tensor(mt);
        }
        initial = initial.tensor(&m.initial);
        let n = m.n_states();
        accepting_flat = accepting_flat
            .iter()
            .flat_map(|&base| m.accepting.iter().map(move |&q| base * n + q))
            .collect();
    }
    let kind = format!(
        "tensor[{}]",
        machines.iter().map(|m| m.kind.as_str()).collect::<Vec<_>>().join(", ")
    );
    Mcqfa::new(kind, transitions, initial, accepting_flat, tol)
}
