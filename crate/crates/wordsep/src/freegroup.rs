//! Free-group words over two generators and derived-series membership.
//!
//! Elements of the free group F₂ = ⟨a, b⟩ are freely reduced letter
//! sequences. The first derived subgroup F₂⁽¹⁾ = [F₂, F₂] is the kernel of
//! abelianization: membership is two exponent sums vanishing. The second
//! derived subgroup F₂⁽²⁾ = [F₂⁽¹⁾, F₂⁽¹⁾] is the kernel of abelianizing
//! F₂⁽¹⁾ itself, which is free on the Schreier generators
//! `t_{i,j} = aⁱbʲ a b⁻ʲ a⁻ⁱ⁻¹` (j ≠ 0) obtained from the coset transversal
//! `{aⁱbʲ}`. Reidemeister–Schreier rewriting turns a word of F₂⁽¹⁾ into a
//! word in the `t_{i,j}`, and membership in F₂⁽²⁾ is all net exponents
//! vanishing — a basis-independent condition, so nothing depends on this
//! particular free basis.

use std::collections::BTreeMap;
use std::fmt;

use crate::words::Word;
use crate::{Error, Result};

/// Generator name: `a` or `b`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Gen {
    A,
    B,
}

/// One letter of a free word: a generator with exponent ±1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Letter {
    pub gen: Gen,
    /// +1 or −1.
    pub exp: i8,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            exp: -self.exp,
        }
    }

    fn to_char(self) -> char {
        match (self.gen, self.exp) {
            (Gen::A, 1) => 'a',
            (Gen::A, _) => 'A',
            (Gen::B, 1) => 'b',
            (Gen::B, _) => 'B',
        }
    }
}

/// A freely reduced word over {a, b, a⁻¹, b⁻¹}. Inverses print as capitals:
/// `a b A B` is the commutator [a, b].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

/// Freely reduce a raw letter sequence (cancel adjacent inverse pairs).
pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> FreeWord {
    let mut stack: Vec<Letter> = Vec::new();
    for l in raw {
        debug_assert!(l.exp == 1 || l.exp == -1);
        match stack.last() {
            Some(&top) if top.gen == l.gen && top.exp == -l.exp => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    FreeWord { letters: stack }
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    /// Parse letters `a`, `b` with capitals `A`, `B` as inverses;
    /// whitespace is ignored; `ε`, `-` or the empty string denote the
    /// identity. The result is freely reduced.
    pub fn parse(input: &str) -> Result<Self> {
        let trimmed = input.trim();
        if trimmed.is_empty() || trimmed == "-" || trimmed == "ε" {
            return Ok(FreeWord::identity());
        }
        let mut raw = Vec::new();
        for c in trimmed.chars() {
            if c.is_whitespace() {
                continue;
            }
            let letter = match c {
                'a' => Letter { gen: Gen::A, exp: 1 },
                'A' => Letter { gen: Gen::A, exp: -1 },
                'b' => Letter { gen: Gen::B, exp: 1 },
                'B' => Letter { gen: Gen::B, exp: -1 },
                _ => {
                    return Err(Error::FreeWordParse {
                        input: input.to_string(),
                        reason: format!("invalid letter {c:?} (use a, b, A, B)"),
                    })
                }
            };
            raw.push(letter);
        }
        Ok(reduce(raw))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Product `self · other`, freely reduced.
    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        reduce(self.letters.iter().chain(&other.letters).copied())
    }

    /// Exponent sums `(deg_a, deg_b)` — the abelianized image in ℤ².
    pub fn degrees(&self) -> (i64, i64) {
        let mut da = 0i64;
        let mut db = 0i64;
        for l in &self.letters {
            match l.gen {
                Gen::A => da += l.exp as i64,
                Gen::B => db += l.exp as i64,
            }
        }
        (da, db)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord({self})")
    }
}

/// Commutator `[u, v] = u v u⁻¹ v⁻¹`.
pub fn commutator(u: &FreeWord, v: &FreeWord) -> FreeWord {
    u.concat(v).concat(&u.inverse()).concat(&v.inverse())
}

/// The group element `x y⁻¹` of a binary word pair: symbol 0 ↦ a,
/// symbol 1 ↦ b, then reduce `x · reverse-inverted y`.
pub fn pair_to_element(x: &Word, y: &Word) -> Result<FreeWord> {
    let lift = |w: &Word| -> Result<Vec<Letter>> {
        w.symbols()
            .iter()
            .map(|&s| match s {
                0 => Ok(Letter { gen: Gen::A, exp: 1 }),
                1 => Ok(Letter { gen: Gen::B, exp: 1 }),
                _ => Err(Error::Precondition(
                    "free-group lift needs binary words".into(),
                )),
            })
            .collect()
    };
    let lx = lift(x)?;
    let ly = lift(y)?;
    Ok(reduce(
        lx.into_iter().chain(ly.into_iter().rev().map(Letter::inverse)),
    ))
}

/// In the first derived subgroup F₂⁽¹⁾ = [F₂, F₂]?
pub fn in_derived1(w: &FreeWord) -> bool {
    w.degrees() == (0, 0)
}

/// Image of a word under Reidemeister–Schreier rewriting over the coset
/// transversal `{aⁱbʲ}` of F₂⁽¹⁾, abelianized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierDecomposition {
    /// Net exponent of each Schreier generator `t_{i,j}` (j ≠ 0); zeros are
    /// dropped.
    pub generator_multiset: BTreeMap<(i64, i64), i64>,
    /// Final coset `(i, j)` — the exponent sums of the whole word. `(0,0)`
    /// iff the word lies in F₂⁽¹⁾.
    pub residual_degrees: (i64, i64),
}

/// Rewrite `w` over the Schreier generators of F₂⁽¹⁾, keeping only the
/// abelianized image. Scanning tracks the coset `(i, j)` of the processed
/// prefix; a letter `a±¹` crossing a coset with `j ≠ 0` emits `t_{i,j}±¹`
/// (`i` taken after the decrement for `a⁻¹`), and `b±¹` only moves the
/// coset.
pub fn schreier_decompose(w: &FreeWord) -> SchreierDecomposition {
    let mut coset = (0i64, 0i64);
    let mut multiset: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    let mut bump = |key: (i64, i64), delta: i64| {
        let slot = multiset.entry(key).or_insert(0);
        *slot += delta;
        if *slot == 0 {
            multiset.remove(&key);
        }
    };
    for l in w.letters() {
        match (l.gen, l.exp) {
            (Gen::A, 1) => {
                if coset.1 != 0 {
                    bump(coset, 1);
                }
                coset.0 += 1;
            }
            (Gen::A, _) => {
                coset.0 -= 1;
                if coset.1 != 0 {
                    bump(coset, -1);
                }
            }
            (Gen::B, 1) => coset.1 += 1,
            (Gen::B, _) => coset.1 -= 1,
        }
    }
    SchreierDecomposition {
        generator_multiset: multiset,
        residual_degrees: coset,
    }
}

/// In the second derived subgroup F₂⁽²⁾ = [F₂⁽¹⁾, F₂⁽¹⁾]? True iff the
/// word lies in F₂⁽¹⁾ and abelianizes to zero there: every Schreier
/// generator's net exponent vanishes.
pub fn in_derived2(w: &FreeWord) -> bool {
    let d = schreier_decompose(w);
    d.residual_degrees == (0, 0) && d.generator_multiset.is_empty()
}

/// All freely reduced words of length exactly `len` (4·3^{len−1} of them
/// for len ≥ 1; just ε for len 0).
pub fn reduced_words_of_length(len: usize) -> Vec<FreeWord> {
    let alphabet = [
        Letter { gen: Gen::A, exp: 1 },
        Letter { gen: Gen::A, exp: -1 },
        Letter { gen: Gen::B, exp: 1 },
        Letter { gen: Gen::B, exp: -1 },
    ];
    let mut out = Vec::new();
    let mut stack: Vec<Letter> = Vec::new();
    fn go(
        stack: &mut Vec<Letter>,
        len: usize,
        alphabet: &[Letter; 4],
        out: &mut Vec<FreeWord>,
    ) {
        if stack.len() == len {
            out.push(FreeWord {
                letters: stack.clone(),
            });
            return;
        }
        for &l in alphabet {
            if let Some(&top) = stack.last() {
                if top.gen == l.gen && top.exp == -l.exp {
                    continue;
                }
            }
            stack.push(l);
            go(stack, len, alphabet, out);
            stack.pop();
        }
    }
    go(&mut stack, len, &alphabet, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::WordPair;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn fw(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    #[test]
    fn reduce_cancels() {
        assert_eq!(fw("aA"), FreeWord::identity());
        assert_eq!(fw("a b B a"), fw("aa"));
        assert_eq!(fw("abAB").to_string(), "a b A B");
        assert_eq!(FreeWord::identity().to_string(), "ε");
    }

    #[test]
    fn reduce_idempotent_and_shorter() {
        let raw = "a A a b B b A a A B b a";
        let once = fw(raw);
        let twice = reduce(once.letters().iter().copied());
        assert_eq!(once, twice);
        assert!(once.len() <= raw.split_whitespace().count());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(FreeWord::parse("abc").is_err());
    }

    #[test]
    fn inverse_and_concat() {
        let w = fw("abA");
        assert_eq!(w.concat(&w.inverse()), FreeWord::identity());
        assert_eq!(w.inverse().to_string(), "a B A");
    }

    fn pte(x: &str, y: &str) -> FreeWord {
        let p = WordPair::parse(x, y, 2).unwrap();
        pair_to_element(&p.x, &p.y).unwrap()
    }

    #[test]
    fn pair_to_element_examples() {
        assert_eq!(pte("ab", "ba").to_string(), "a b A B");
        assert_eq!(pte("abba", "baab").to_string(), "a b b a B A A B");
        let x = Word::parse("abab", 2).unwrap();
        assert_eq!(
            pair_to_element(&x, &x).unwrap(),
            FreeWord::identity()
        );
    }

    #[test]
    fn derived1_examples() {
        assert!(in_derived1(&fw("abAB")));
        assert!(!in_derived1(&fw("a")));
        assert!(in_derived1(&FreeWord::identity()));
    }

    #[test]
    fn schreier_identity() {
        let d = schreier_decompose(&FreeWord::identity());
        assert!(d.generator_multiset.is_empty());
        assert_eq!(d.residual_degrees, (0, 0));
    }

    #[test]
    fn schreier_commutator() {
        // Scan a b A B: 'a' at (0,0) emits nothing; 'b' moves to (1,1);
        // 'A' moves to (0,1) and emits t_{0,1}⁻¹; 'B' closes the loop.
        let d = schreier_decompose(&fw("abAB"));
        assert_eq!(d.residual_degrees, (0, 0));
        assert_eq!(d.generator_multiset.len(), 1);
        assert_eq!(d.generator_multiset.get(&(0, 1)), Some(&-1));
    }

    #[test]
    fn schreier_hard_pair_nonzero() {
        let d = schreier_decompose(&pte("abba", "baab"));
        assert_eq!(d.residual_degrees, (0, 0));
        assert!(!d.generator_multiset.is_empty());
    }

    #[test]
    fn derived2_examples() {
        assert!(in_derived2(&FreeWord::identity()));
        // [[a,b],[a²,b]] ∈ F₂⁽²⁾ by construction.
        let c1 = commutator(&fw("a"), &fw("b"));
        let c2 = commutator(&fw("aa"), &fw("b"));
        assert!(in_derived1(&c1) && in_derived1(&c2));
        let c = commutator(&c1, &c2);
        assert!(!c.is_empty());
        assert!(in_derived2(&c));
        // ... but [a,b] itself is not in F₂⁽²⁾.
        assert!(!in_derived2(&c1));
    }

    #[test]
    fn derived1_iff_hard_pair() {
        // Exhaustive over distinct binary pairs of equal length ≤ 5.
        for len in 1..=5usize {
            for xb in 0..(1u32 << len) {
                for yb in 0..(1u32 << len) {
                    if xb == yb {
                        continue;
                    }
                    let sym = |bits: u32| -> Vec<u8> {
                        (0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u8).collect()
                    };
                    let x = Word::new(sym(xb), 2).unwrap();
                    let y = Word::new(sym(yb), 2).unwrap();
                    let p = WordPair::new(x, y).unwrap();
                    let w = pair_to_element(&p.x, &p.y).unwrap();
                    assert_eq!(in_derived1(&w), p.classify().is_hard(), "{p:?}");
                }
            }
        }
    }

    #[test]
    fn pair_elements_escape_derived2() {
        for len in 1..=4usize {
            for xb in 0..(1u32 << len) {
                for yb in 0..(1u32 << len) {
                    if xb == yb {
                        continue;
                    }
                    let sym = |bits: u32| -> Vec<u8> {
                        (0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u8).collect()
                    };
                    let x = Word::new(sym(xb), 2).unwrap();
                    let y = Word::new(sym(yb), 2).unwrap();
                    let w = pair_to_element(&x, &y).unwrap();
                    assert!(!in_derived2(&w), "xy⁻¹ must escape F₂⁽²⁾: {w}");
                }
            }
        }
    }

    fn random_word(rng: &mut impl Rng, max_len: usize) -> FreeWord {
        let len = rng.gen_range(1..=max_len);
        let raw: Vec<Letter> = (0..len)
            .map(|_| Letter {
                gen: if rng.gen() { Gen::A } else { Gen::B },
                exp: if rng.gen() { 1 } else { -1 },
            })
            .collect();
        reduce(raw)
    }

    fn random_derived1(rng: &mut impl Rng) -> FreeWord {
        // Product of 1–3 commutators of short random words.
        let mut w = FreeWord::identity();
        for _ in 0..rng.gen_range(1..=3) {
            let c = commutator(&random_word(rng, 3), &random_word(rng, 3));
            w = w.concat(&c);
        }
        w
    }

    #[test]
    fn random_second_derived_elements_accepted() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut nontrivial = 0;
        for _ in 0..50 {
            let g = random_derived1(&mut rng);
            let h = random_derived1(&mut rng);
            let c = commutator(&g, &h);
            assert!(in_derived2(&c), "commutator of F₂⁽¹⁾ elements: {c}");
            if !c.is_empty() {
                nontrivial += 1;
            }
        }
        assert!(nontrivial > 25, "degenerate sample: {nontrivial}");
    }

    #[test]
    fn enumerate_reduced_counts() {
        assert_eq!(reduced_words_of_length(0).len(), 1);
        assert_eq!(reduced_words_of_length(1).len(), 4);
        assert_eq!(reduced_words_of_length(2).len(), 12);
        assert_eq!(reduced_words_of_length(3).len(), 36);
        for w in reduced_words_of_length(3) {
            assert_eq!(reduce(w.letters().iter().copied()), w);
        }
    }
}
