//! Words over finite alphabets `{0, 1, ..., k-1}`.
//!
//! A pair of distinct words of equal length is *easy* when some symbol
//! occurs a different number of times in the two words, and *hard*
//! otherwise. Hard pairs reduce to pairs over the binary alphabet by
//! deleting the first position where the words differ; the surviving
//! symbols at that position name the two tracked letters.

use num_bigint::BigInt;

use crate::{Error, Result};

/// A word over the alphabet `{0, ..., alphabet-1}`.
///
/// Symbols are stored as `u8` indices. The alphabet size is carried by the
/// word so mixed-alphabet operations can be rejected.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<u8>,
    alphabet: u8,
}

/// Map a symbol index to its display letter: 0 → 'a', 1 → 'b', ...
pub fn symbol_letter(sym: u8) -> char {
    (b'a' + sym) as char
}

impl Word {
    pub fn new(symbols: Vec<u8>, alphabet: u8) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::Precondition("alphabet size must be positive".into()));
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::UnknownSymbol {
                symbol: bad,
                alphabet,
            });
        }
        Ok(Word { symbols, alphabet })
    }

    /// Parse from letters (`"abba"`) or digits (`"0110"`), inferring the
    /// alphabet size from the largest symbol (at least `min_alphabet`).
    /// Empty input or the literal `"-"` is the empty word.
    pub fn parse(input: &str, min_alphabet: u8) -> Result<Self> {
        let trimmed = input.trim();
        let effective = if trimmed == "-" { "" } else { trimmed };
        let mut symbols = Vec::with_capacity(effective.len());
        for c in effective.chars() {
            let sym = match c {
                'a'..='z' => c as u8 - b'a',
                '0'..='9' => c as u8 - b'0',
                _ => {
                    return Err(Error::WordParse {
                        input: input.to_string(),
                        reason: format!("invalid symbol {c:?} (use a-z or 0-9)"),
                    })
                }
            };
            symbols.push(sym);
        }
        let needed = symbols.iter().copied().max().map_or(0, |m| m + 1);
        let alphabet = needed.max(min_alphabet).max(1);
        Word::new(symbols, alphabet)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Count of each symbol, indexed by symbol.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.alphabet as usize];
        for &s in &self.symbols {
            counts[s as usize] += 1;
        }
        counts
    }

    /// Render with letters for alphabets up to 26; `ε` for the empty word.
    pub fn display_letters(&self) -> String {
        if self.symbols.is_empty() {
            return "ε".to_string();
        }
        self.symbols.iter().map(|&s| symbol_letter(s)).collect()
    }

    /// Render with digits (binary words, encodings); `ε` for the empty word.
    pub fn display_digits(&self) -> String {
        if self.symbols.is_empty() {
            return "ε".to_string();
        }
        self.symbols
            .iter()
            .map(|&s| char::from_digit(s as u32, 10).expect("digit display needs symbols < 10"))
            .collect()
    }
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Word({}, k={})", self.display_letters(), self.alphabet)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display_letters())
    }
}

/// How a pair of words can be told apart by counting, if at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairClass {
    /// Some symbol occurs a different number of times; the witness is the
    /// least such symbol index. Any unequal-length pair is easy.
    Easy { witness_symbol: u8 },
    /// All symbol counts agree (forcing equal lengths); carries the
    /// equivalent binary pair.
    Hard(HardReduction),
}

impl PairClass {
    pub fn is_hard(&self) -> bool {
        matches!(self, PairClass::Hard(_))
    }
}

/// A pair of distinct words over a common alphabet, validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordPair {
    pub x: Word,
    pub y: Word,
}

impl WordPair {
    pub fn new(x: Word, y: Word) -> Result<Self> {
        if x.alphabet() != y.alphabet() {
            return Err(Error::InvalidPair(format!(
                "alphabet mismatch: {} vs {}",
                x.alphabet(),
                y.alphabet()
            )));
        }
        if x == y {
            return Err(Error::InvalidPair("words are identical".into()));
        }
        Ok(WordPair { x, y })
    }

    /// Parse both words with a common inferred alphabet.
    pub fn parse(x: &str, y: &str, min_alphabet: u8) -> Result<Self> {
        let wx = Word::parse(x, min_alphabet)?;
        let wy = Word::parse(y, min_alphabet)?;
        let k = wx.alphabet().max(wy.alphabet());
        let wx = Word::new(wx.symbols().to_vec(), k)?;
        let wy = Word::new(wy.symbols().to_vec(), k)?;
        WordPair::new(wx, wy)
    }

    pub fn classify(&self) -> PairClass {
        match self.easy_witness() {
            Some(witness_symbol) => PairClass::Easy { witness_symbol },
            None => PairClass::Hard(reduction_of(self)),
        }
    }

    /// Least symbol whose counts differ, if any.
    pub fn easy_witness(&self) -> Option<u8> {
        let cx = self.x.counts();
        let cy = self.y.counts();
        cx.iter()
            .zip(&cy)
            .position(|(a, b)| a != b)
            .map(|sym| sym as u8)
    }

    /// First position where the two words differ, when both are long
    /// enough to compare there.
    pub fn first_difference(&self) -> Option<usize> {
        self.x
            .symbols()
            .iter()
            .zip(self.y.symbols())
            .position(|(a, b)| a != b)
    }
}

/// A hard pair's equivalent binary pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardReduction {
    /// The reduced pair, over alphabet {0, 1}. Still hard, equal lengths.
    pub pair: WordPair,
    /// First position where the originals differ.
    pub differing_position: usize,
    /// Original symbol renamed to binary 0 (the smaller of the two symbols
    /// disagreeing at `differing_position`).
    pub zero_symbol: u8,
    /// Original symbol renamed to binary 1 (the larger of the two).
    pub one_symbol: u8,
}

fn reduction_of(pair: &WordPair) -> HardReduction {
    let pos = pair
        .first_difference()
        .expect("distinct equal-count words differ at some shared position");
    let sx = pair.x.symbols()[pos];
    let sy = pair.y.symbols()[pos];
    let zero_symbol = sx.min(sy);
    let one_symbol = sx.max(sy);

    let project = |w: &Word| -> Word {
        let symbols = w
            .symbols()
            .iter()
            .filter_map(|&s| {
                if s == zero_symbol {
                    Some(0)
                } else if s == one_symbol {
                    Some(1)
                } else {
                    None
                }
            })
            .collect();
        Word::new(symbols, 2).expect("projection yields binary symbols")
    };

    HardReduction {
        pair: WordPair {
            x: project(&pair.x),
            y: project(&pair.y),
        },
        differing_position: pos,
        zero_symbol,
        one_symbol,
    }
}

/// Reduce a hard pair to a binary hard pair: take the two symbols that
/// disagree at the first differing position, erase every other symbol from
/// both words, and rename the kept symbols 0/1 in index order. Counts of
/// the kept symbols are preserved, so the projected pair is again hard, and
/// the projections still differ at the image of the differing position. A
/// machine separating the reduced pair separates the originals after
/// composing with the same erasure. Already-binary hard pairs come back
/// unchanged.
pub fn reduce_hard_pair(pair: &WordPair) -> Result<HardReduction> {
    if pair.easy_witness().is_some() {
        return Err(Error::Precondition(
            "reduction applies to hard pairs only".into(),
        ));
    }
    Ok(reduction_of(pair))
}

/// All words of exactly `len` symbols over `{0, ..., alphabet-1}`, in
/// lexicographic order.
pub fn all_words(alphabet: u8, len: usize) -> Vec<Word> {
    assert!(alphabet >= 1);
    let k = alphabet as usize;
    let mut out = Vec::with_capacity(k.pow(len as u32));
    let mut current = vec![0u8; len];
    loop {
        out.push(Word {
            symbols: current.clone(),
            alphabet,
        });
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < alphabet {
                break;
            }
            current[pos] = 0;
        }
    }
}

/// All words of length ≤ `max_len`, shortest first, lexicographic within a
/// length.
pub fn all_words_up_to(alphabet: u8, max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|l| all_words(alphabet, l)).collect()
}

/// Positional encoding: `e(z)` = value of the numeral `1z` read in base
/// `k` (the alphabet size), so distinct words of any length get distinct
/// positive values. `e(ε) = 1`.
pub fn encode(word: &Word) -> BigInt {
    let base = BigInt::from(word.alphabet().max(2));
    let mut value = BigInt::from(1);
    for &s in word.symbols() {
        value = value * &base + BigInt::from(s);
    }
    value
}
