//! Exact stabilizer-state oracle for desk-scale checks (at most 24 qubits).
//!
//! States are kept as `n` commuting, independent signed Pauli generators.
//! Measured qubits stay in the tableau in their post-measurement product
//! state. No destabilizers are tracked; deterministic outcomes are found by
//! reducing the measured Pauli against the canonical form.

mod clifford;
mod pauli;

use std::fmt;

use rand::RngCore;

pub use clifford::{Clifford1, LocalOp};
pub use pauli::{Outcome, Pauli, PauliString};

use crate::error::{Error, Result};
use crate::graph_state::Graph;

pub const MAX_QUBITS: usize = 24;

/// How `measure_pauli` picks an outcome when the measurement is random.
pub enum OutcomePolicy<'a> {
    Forced(Outcome),
    Random(&'a mut dyn RngCore),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StabTableau {
    n: usize,
    rows: Vec<PauliString>,
}

impl StabTableau {
    /// Builds a tableau from explicit generators, checking commutation and
    /// independence.
    pub fn from_generators(n: usize, rows: Vec<PauliString>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        if rows.len() != n {
            return Err(Error::InvalidGenerators(format!(
                "expected {n} generators, got {}",
                rows.len()
            )));
        }
        let mask = mask(n);
        if rows.iter().any(|r| (r.x | r.z) & !mask != 0) {
            return Err(Error::InvalidGenerators("support outside register".into()));
        }
        for (i, a) in rows.iter().enumerate() {
            for b in &rows[i + 1..] {
                if !a.commutes_with(b) {
                    return Err(Error::InvalidGenerators(format!(
                        "{} and {} anticommute",
                        a.to_string_n(n),
                        b.to_string_n(n)
                    )));
                }
            }
        }
        let t = StabTableau { n, rows };
        if t.rank() != n {
            return Err(Error::InvalidGenerators("generators are dependent".into()));
        }
        Ok(t)
    }

    /// Parses generators such as `["+XZ", "+ZX"]`.
    pub fn parse(rows: &[&str]) -> Result<Self> {
        let n = rows
            .first()
            .map(|r| r.trim_start_matches(['+', '-']).len())
            .unwrap_or(0);
        let parsed = rows.iter().map(|r| PauliString::parse(r)).collect::<Result<Vec<_>>>()?;
        Self::from_generators(n, parsed)
    }

    /// Stabilizer group of the graph state `|G>`: generator `a` is
    /// `X_a Z_{N(a)}`. Deleted nodes are isolated `|+>` qubits.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let n = g.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        let rows = (0..n)
            .map(|a| {
                let mut p = PauliString::single(a, Pauli::X);
                if g.is_alive(a) {
                    for &b in g.neighbors(a) {
                        p.z |= 1 << b;
                    }
                }
                p
            })
            .collect();
        Ok(StabTableau { n, rows })
    }

    /// `|G>` with each listed (deleted) qubit replaced by the eigenstate of
    /// its Pauli with the given sign.
    pub fn from_graph_with_measured(g: &Graph, measured: &[(usize, Pauli, Outcome)]) -> Result<Self> {
        let mut t = Self::from_graph(g)?;
        for &(q, p, o) in measured {
            t.check_qubit(q)?;
            if g.is_alive(q) {
                return Err(Error::InvalidGenerators(format!(
                    "qubit {q} is still part of the graph"
                )));
            }
            t.rows[q] = PauliString::single(q, p).with_sign(o.is_minus());
        }
        Self::from_generators(t.n, t.rows)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.rows
    }

    /// Replaces generator `i` outright. Used to describe measured qubits in
    /// their known product state when building comparison targets.
    pub fn with_generator(mut self, i: usize, p: PauliString) -> Result<Self> {
        if i >= self.n {
            return Err(Error::QubitOutOfRange { qubit: i, n: self.n });
        }
        self.rows[i] = p;
        Self::from_generators(self.n, self.rows)
    }

    fn rank(&self) -> usize {
        let mut rows: Vec<(u32, u32)> = self.rows.iter().map(|r| (r.x, r.z)).collect();
        let mut rank = 0;
        for col in 0..2 * self.n {
            let bit = |r: &(u32, u32)| col_bit(r.0, r.1, col, self.n);
            let Some(p) = (rank..rows.len()).find(|&i| bit(&rows[i])) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && bit(r) {
                    r.0 ^= pivot.0;
                    r.1 ^= pivot.1;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Reduced row-echelon form of the symplectic matrix (columns
    /// `x_0..x_{n-1}, z_0..z_{n-1}`) with signs carried through row
    /// products. Two tableaus describe the same state iff their canonical
    /// forms are identical.
    pub fn canonical(&self) -> StabTableau {
        let mut rows = self.rows.clone();
        let mut pivot_row = 0;
        for col in 0..2 * self.n {
            let bit = |r: &PauliString| col_bit(r.x, r.z, col, self.n);
            let Some(p) = (pivot_row..rows.len()).find(|&i| bit(&rows[i])) else {
                continue;
            };
            rows.swap(pivot_row, p);
            let pivot = rows[pivot_row];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != pivot_row && bit(row) {
                    *row = row.mul_commuting(&pivot);
                }
            }
            pivot_row += 1;
        }
        StabTableau { n: self.n, rows }
    }

    pub fn states_equal(&self, other: &StabTableau) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        Ok(self.canonical().rows == other.canonical().rows)
    }

    /// Returns `Some(outcome)` if `basis` on `qubit` has a deterministic
    /// outcome in this state.
    pub fn deterministic_outcome(&self, qubit: usize, basis: Pauli) -> Result<Option<Outcome>> {
        self.check_qubit(qubit)?;
        let target = PauliString::single(qubit, basis);
        if self.rows.iter().any(|r| !r.commutes_with(&target)) {
            return Ok(None);
        }
        // The group is maximal, so +-target is a product of canonical rows.
        let canon = self.canonical();
        let mut acc = PauliString::identity();
        let mut rest = (target.x, target.z);
        for row in &canon.rows {
            let Some(col) = (0..2 * self.n).find(|&c| col_bit(row.x, row.z, c, self.n)) else {
                continue;
            };
            if col_bit(rest.0, rest.1, col, self.n) {
                acc = acc.mul_commuting(row);
                rest.0 ^= row.x;
                rest.1 ^= row.z;
            }
        }
        debug_assert_eq!(rest, (0, 0));
        debug_assert_eq!((acc.x, acc.z), (target.x, target.z));
        Ok(Some(if acc.neg { Outcome::Minus } else { Outcome::Plus }))
    }

    /// Projective measurement of a single-qubit Pauli.
    pub fn measure_pauli(
        &self,
        qubit: usize,
        basis: Pauli,
        policy: OutcomePolicy<'_>,
    ) -> Result<(Outcome, StabTableau)> {
        self.check_qubit(qubit)?;
        if let Some(actual) = self.deterministic_outcome(qubit, basis)? {
            if let OutcomePolicy::Forced(forced) = policy {
                if forced != actual {
                    return Err(Error::ContradictoryOutcome {
                        forced: forced.sign(),
                        actual: actual.sign(),
                    });
                }
            }
            return Ok((actual, self.clone()));
        }
        let outcome = match policy {
            OutcomePolicy::Forced(o) => o,
            OutcomePolicy::Random(rng) => {
                if rng.next_u32() & 1 == 0 {
                    Outcome::Plus
                } else {
                    Outcome::Minus
                }
            }
        };
        let target = PauliString::single(qubit, basis);
        let mut rows = self.rows.clone();
        let anti: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].commutes_with(&target)).collect();
        let p = anti[0];
        let pivot = rows[p];
        for &i in &anti[1..] {
            rows[i] = rows[i].mul_commuting(&pivot);
        }
        rows[p] = target.with_sign(outcome.is_minus());
        Ok((outcome, StabTableau { n: self.n, rows }))
    }

    /// Conjugates every generator by a single-qubit Clifford on `qubit`.
    pub fn apply_clifford(&self, qubit: usize, c: &Clifford1) -> Result<StabTableau> {
        self.check_qubit(qubit)?;
        let mut out = self.clone();
        for row in &mut out.rows {
            let x = row.x >> qubit & 1 == 1;
            let z = row.z >> qubit & 1 == 1;
            let (nx, nz, flip) = c.conjugate(x, z);
            row.x = (row.x & !(1 << qubit)) | ((nx as u32) << qubit);
            row.z = (row.z & !(1 << qubit)) | ((nz as u32) << qubit);
            row.neg ^= flip;
        }
        Ok(out)
    }

    pub fn apply_single_qubit_clifford(&self, qubit: usize, op: LocalOp) -> Result<StabTableau> {
        self.apply_clifford(qubit, &op.clifford())
    }

    /// True iff some product of single-qubit Cliffords on `free` maps `self`
    /// onto `other`. Exhaustive over `24^|free|`, so `|free| <= 4`.
    pub fn equal_up_to_local_clifford(&self, other: &StabTableau, free: &[usize]) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        if free.len() > 4 {
            return Err(Error::TooManyFreeQubits(free.len()));
        }
        for &q in free {
            self.check_qubit(q)?;
        }
        let target = other.canonical();
        let all = Clifford1::all();
        let mut choice = vec![0usize; free.len()];
        loop {
            let mut t = self.clone();
            for (&q, &c) in free.iter().zip(&choice) {
                t = t.apply_clifford(q, &all[c])?;
            }
            if t.canonical().rows == target.rows {
                return Ok(true);
            }
            // odometer over the 24^k choices
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return Ok(false);
                }
                choice[i] += 1;
                if choice[i] < all.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n {
            Err(Error::QubitOutOfRange { qubit, n: self.n })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for StabTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{}", row.to_string_n(self.n))?;
        }
        Ok(())
    }
}

fn mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn col_bit(x: u32, z: u32, col: usize, n: usize) -> bool {
    if col < n {
        x >> col & 1 == 1
    } else {
        z >> (col - n) & 1 == 1
    }
}
