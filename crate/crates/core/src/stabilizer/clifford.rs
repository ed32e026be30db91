//! Phase-free single-qubit Clifford conjugation tables.
//!
//! A Clifford is stored by where it sends `X` and `Z` under conjugation
//! `P -> C P C^dagger`; the image of `Y = iXZ` follows. Global phase is
//! discarded, so `S` stands for `diag(1, i)` and its inverse for
//! `diag(1, -i)`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::pauli::phase_g;

/// Hermitian single-qubit Pauli with a sign: `(-1)^neg * P(x, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct SignedPauli {
    pub x: bool,
    pub z: bool,
    pub neg: bool,
}

const fn sp(x: bool, z: bool, neg: bool) -> SignedPauli {
    SignedPauli { x, z, neg }
}

const PX: SignedPauli = sp(true, false, false);
const MX: SignedPauli = sp(true, false, true);
const PY: SignedPauli = sp(true, true, false);
const MY: SignedPauli = sp(true, true, true);
const PZ: SignedPauli = sp(false, true, false);
const MZ: SignedPauli = sp(false, true, true);

/// A single-qubit Clifford modulo global phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clifford1 {
    x_image: SignedPauli,
    z_image: SignedPauli,
}

impl Clifford1 {
    const fn new(x_image: SignedPauli, z_image: SignedPauli) -> Self {
        Clifford1 { x_image, z_image }
    }

    /// Image of the Hermitian Pauli `P(x, z)`, as `(x', z', sign flip)`.
    pub(crate) fn conjugate(&self, x: bool, z: bool) -> (bool, bool, bool) {
        match (x, z) {
            (false, false) => (false, false, false),
            (true, false) => (self.x_image.x, self.x_image.z, self.x_image.neg),
            (false, true) => (self.z_image.x, self.z_image.z, self.z_image.neg),
            (true, true) => {
                // Y = i X Z  ->  i * img(X) * img(Z)
                let a = self.x_image;
                let b = self.z_image;
                let e = 1 + phase_g(a.x, a.z, b.x, b.z) + 2 * (a.neg as i32 + b.neg as i32);
                let e = e.rem_euclid(4);
                debug_assert!(e % 2 == 0);
                (a.x ^ b.x, a.z ^ b.z, e == 2)
            }
        }
    }

    /// `self` applied after `first`.
    pub fn compose_after(&self, first: &Clifford1) -> Clifford1 {
        let img = |p: SignedPauli| {
            let (x, z, flip) = self.conjugate(p.x, p.z);
            sp(x, z, p.neg ^ flip)
        };
        Clifford1::new(img(first.x_image), img(first.z_image))
    }

    pub fn is_diagonal(&self) -> bool {
        self.z_image == PZ
    }

    /// All 24 single-qubit Cliffords. The four powers of `S` come first so
    /// searches over diagonal frames terminate early.
    pub fn all() -> &'static [Clifford1] {
        static ALL: OnceLock<Vec<Clifford1>> = OnceLock::new();
        ALL.get_or_init(|| {
            let mut out: Vec<Clifford1> = [LocalOp::I, LocalOp::S, LocalOp::Z, LocalOp::SDag]
                .iter()
                .map(|op| op.clifford())
                .collect();
            let signed = [PX, MX, PY, MY, PZ, MZ];
            for &a in &signed {
                for &b in &signed {
                    if (a.x, a.z) == (b.x, b.z) {
                        continue;
                    }
                    let c = Clifford1::new(a, b);
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
            debug_assert_eq!(out.len(), 24);
            out
        })
    }
}

/// Named single-qubit operations used by corrections and frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalOp {
    I,
    X,
    Y,
    Z,
    /// `diag(1, i)`, equal to `sqrt(-iZ)` up to phase.
    S,
    /// `diag(1, -i)`, equal to `sqrt(iZ)` up to phase.
    SDag,
    /// `sqrt(iY) ~ exp(i pi/4 Y)`.
    SqrtYPos,
    /// `sqrt(-iY) ~ exp(-i pi/4 Y)`.
    SqrtYNeg,
    H,
}

impl LocalOp {
    pub fn clifford(self) -> Clifford1 {
        match self {
            LocalOp::I => Clifford1::new(PX, PZ),
            LocalOp::X => Clifford1::new(PX, MZ),
            LocalOp::Y => Clifford1::new(MX, MZ),
            LocalOp::Z => Clifford1::new(MX, PZ),
            LocalOp::S => Clifford1::new(PY, PZ),
            LocalOp::SDag => Clifford1::new(MY, PZ),
            LocalOp::SqrtYPos => Clifford1::new(PZ, MX),
            LocalOp::SqrtYNeg => Clifford1::new(MZ, PX),
            LocalOp::H => Clifford1::new(PZ, PX),
        }
    }

    /// Exponent `k` with `self = S^k` for the diagonal subgroup.
    pub fn s_power(self) -> Option<u8> {
        match self {
            LocalOp::I => Some(0),
            LocalOp::S => Some(1),
            LocalOp::Z => Some(2),
            LocalOp::SDag => Some(3),
            _ => None,
        }
    }

    pub fn from_s_power(k: u8) -> LocalOp {
        match k % 4 {
            0 => LocalOp::I,
            1 => LocalOp::S,
            2 => LocalOp::Z,
            _ => LocalOp::SDag,
        }
    }
}

impl fmt::Display for LocalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LocalOp::I => "I",
            LocalOp::X => "X",
            LocalOp::Y => "Y",
            LocalOp::Z => "Z",
            LocalOp::S => "S",
            LocalOp::SDag => "S_dag",
            LocalOp::SqrtYPos => "sqrtY_pos",
            LocalOp::SqrtYNeg => "sqrtY_neg",
            LocalOp::H => "H",
        };
        f.write_str(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_table() {
        // S X S^dag = Y, S Y S^dag = -X
        let s = LocalOp::S.clifford();
        assert_eq!(s.conjugate(true, false), (true, true, false));
        assert_eq!(s.conjugate(true, true), (true, false, true));
        // Z X Z = -X, Z Y Z = -Y
        let z = LocalOp::Z.clifford();
        assert_eq!(z.conjugate(true, false), (true, false, true));
        assert_eq!(z.conjugate(true, true), (true, true, true));
        // H Y H = -Y
        assert_eq!(LocalOp::H.clifford().conjugate(true, true), (true, true, true));
    }

    #[test]
    fn group_structure() {
        let all = Clifford1::all();
        assert_eq!(all.len(), 24);
        let s = LocalOp::S.clifford();
        let sd = LocalOp::SDag.clifford();
        assert_eq!(sd.compose_after(&s), LocalOp::I.clifford());
        assert_eq!(s.compose_after(&s), LocalOp::Z.clifford());
        let yp = LocalOp::SqrtYPos.clifford();
        assert_eq!(yp.compose_after(&yp), LocalOp::Y.clifford());
        assert_eq!(LocalOp::SqrtYNeg.clifford().compose_after(&yp), LocalOp::I.clifford());
        // closure
        for a in all {
            for b in all {
                assert!(all.contains(&a.compose_after(b)));
            }
        }
    }

    #[test]
    fn s_powers() {
        for k in 0..4u8 {
            assert_eq!(LocalOp::from_s_power(k).s_power(), Some(k));
        }
        assert_eq!(LocalOp::H.s_power(), None);
    }
}
