//! Pauli strings in the binary (x|z) representation with exact phases.

use std::fmt;

use crate::clifford::{Axis, Clifford, SignedAxis};
use crate::error::{Error, Result};
use crate::f2::BitVec;

/// `i^phase · ⊗_q σ(x_q, z_q)` with σ(1,0)=σx, σ(1,1)=σy, σ(0,1)=σz.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: BitVec,
    pub z: BitVec,
    /// Exponent of i, mod 4.
    pub phase: u8,
}

// Exponent of i in σ(x1,z1)·σ(x2,z2) = i^g σ(x1+x2, z1+z2).
#[inline]
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 as i32 - x2 as i32,
        (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
        (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// σx^X σz^Z with the Y convention applied where both are set, sign +.
    pub fn from_xz(x: BitVec, z: BitVec) -> Self {
        assert_eq!(x.len(), z.len());
        PauliString { x, z, phase: 0 }
    }

    pub fn single(n: usize, q: usize, axis: Axis) -> Self {
        let mut p = PauliString::identity(n);
        let (x, z) = axis.bits();
        p.x.set(q, x);
        p.z.set(q, z);
        p
    }

    /// +1 / -1 for Hermitian strings.
    pub fn sign(&self) -> i8 {
        match self.phase % 4 {
            0 => 1,
            2 => -1,
            _ => panic!("non-Hermitian Pauli string has no real sign"),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) % 4;
    }

    pub fn axis_at(&self, q: usize) -> Option<Axis> {
        Axis::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn weight(&self) -> usize {
        self.x.or(&self.z).count_ones()
    }

    pub fn support(&self) -> BitVec {
        self.x.or(&self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// self · other
    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.n(), other.n());
        let mut e: i32 = self.phase as i32 + other.phase as i32;
        let active = self.support().and(&other.support());
        for q in active.iter_ones() {
            e += g(self.x.get(q), self.z.get(q), other.x.get(q), other.z.get(q));
        }
        PauliString {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            phase: e.rem_euclid(4) as u8,
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Conjugate by a single-qubit Clifford at qubit q: P ↦ C P C†.
    pub fn conjugate_at(&mut self, q: usize, c: Clifford) {
        if let Some(axis) = self.axis_at(q) {
            let img = c.conjugate(SignedAxis::new(axis, false));
            let (x, z) = img.axis.bits();
            self.x.set(q, x);
            self.z.set(q, z);
            if img.negative {
                self.negate();
            }
        }
    }

    /// Parse `+XZIIZ`-style text; a missing sign means +.
    pub fn parse(s: &str) -> Result<PauliString> {
        let s = s.trim();
        let (neg, body) = match s.chars().next() {
            Some('+') => (false, &s[1..]),
            Some('-') => (true, &s[1..]),
            _ => (false, s),
        };
        let n = body.chars().count();
        let mut p = PauliString::identity(n);
        for (q, ch) in body.chars().enumerate() {
            let axis = match ch {
                'I' | '.' => None,
                'X' => Some(Axis::X),
                'Y' => Some(Axis::Y),
                'Z' => Some(Axis::Z),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unexpected character {other:?} in Pauli string"
                    )))
                }
            };
            if let Some(a) = axis {
                let (x, z) = a.bits();
                p.x.set(q, x);
                p.z.set(q, z);
            }
        }
        if neg {
            p.negate();
        }
        Ok(p)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase % 4 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for q in 0..self.n() {
            let c = self.axis_at(q).map_or('I', |a| a.letter());
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
