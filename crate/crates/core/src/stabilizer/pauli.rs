use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-qubit Pauli measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub(crate) fn bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Measurement outcome, the eigenvalue `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Outcome {
    pub fn sign(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn from_sign(sign: i8) -> Option<Self> {
        match sign {
            1 => Some(Outcome::Plus),
            -1 => Some(Outcome::Minus),
            _ => None,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Outcome::Minus
    }

    /// Outcome encoded by bit `k` of a pattern word (set bit means `-1`).
    pub fn from_pattern(pattern: u64, k: usize) -> Self {
        if pattern >> k & 1 == 1 {
            Outcome::Minus
        } else {
            Outcome::Plus
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+1",
            Outcome::Minus => "-1",
        })
    }
}

/// Phase contribution `g` from Aaronson–Gottesman: the exponent of `i` picked
/// up when multiplying two Hermitian single-qubit Paulis.
pub(crate) fn phase_g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

/// Signed Hermitian Pauli string over at most 32 qubits.
///
/// Qubit `q` carries `X` if bit `q` of `x` is set, `Z` if bit `q` of `z` is
/// set and `Y` if both are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    pub(crate) x: u32,
    pub(crate) z: u32,
    pub(crate) neg: bool,
}

impl PauliString {
    pub fn identity() -> Self {
        PauliString { x: 0, z: 0, neg: false }
    }

    pub fn single(qubit: usize, p: Pauli) -> Self {
        let (x, z) = p.bits();
        PauliString {
            x: (x as u32) << qubit,
            z: (z as u32) << qubit,
            neg: false,
        }
    }

    pub fn with_sign(mut self, neg: bool) -> Self {
        self.neg = neg;
        self
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn letter(&self, qubit: usize) -> char {
        match (self.x >> qubit & 1, self.z >> qubit & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (1, 1) => 'Y',
            _ => 'Z',
        }
    }

    /// Parses `+XZI`, `-YY`, or an unsigned `XZ`. Qubit 0 is the first letter.
    pub fn parse(text: &str) -> Result<Self> {
        let (neg, body) = match text.as_bytes().first() {
            Some(b'+') => (false, &text[1..]),
            Some(b'-') => (true, &text[1..]),
            _ => (false, text),
        };
        if body.len() > 32 {
            return Err(Error::InvalidGenerators(format!("pauli string too long: {text}")));
        }
        let mut p = PauliString::identity().with_sign(neg);
        for (q, c) in body.chars().enumerate() {
            let (x, z) = match c {
                'I' | '_' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                _ => return Err(Error::InvalidGenerators(format!("bad letter {c:?} in {text}"))),
            };
            p.x |= (x as u32) << q;
            p.z |= (z as u32) << q;
        }
        Ok(p)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    /// Product of two commuting strings, `None` if they anticommute.
    pub fn product(&self, other: &PauliString) -> Option<PauliString> {
        self.commutes_with(other).then(|| self.mul_commuting(other))
    }

    /// Product of two commuting strings; the result is again Hermitian.
    pub(crate) fn mul_commuting(&self, other: &PauliString) -> PauliString {
        let mut e: i32 = 2 * self.neg as i32 + 2 * other.neg as i32;
        let mut support = (self.x | self.z) & (other.x | other.z);
        while support != 0 {
            let q = support.trailing_zeros();
            support &= support - 1;
            e += phase_g(
                self.x >> q & 1 == 1,
                self.z >> q & 1 == 1,
                other.x >> q & 1 == 1,
                other.z >> q & 1 == 1,
            );
        }
        let e = e.rem_euclid(4);
        debug_assert!(e % 2 == 0, "product of anticommuting Paulis");
        PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            neg: e == 2,
        }
    }

    pub fn to_string_n(&self, n: usize) -> String {
        let mut s = String::with_capacity(n + 1);
        s.push(if self.neg { '-' } else { '+' });
        for q in 0..n {
            s.push(self.letter(q));
        }
        s
    }
}
