//! The 24-element single-qubit Clifford group modulo phases.
//!
//! An element is stored by its action on the Pauli operators: the signed images
//! of σx and σz under conjugation `P ↦ C P C†`. The image of σy follows from
//! σy = iσxσz.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Single-qubit Pauli axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Binary (x|z) encoding: X = (1|0), Y = (1|1), Z = (0|1).
    pub fn bits(self) -> (bool, bool) {
        match self {
            Axis::X => (true, false),
            Axis::Y => (true, true),
            Axis::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Option<Axis> {
        match (x, z) {
            (true, false) => Some(Axis::X),
            (true, true) => Some(Axis::Y),
            (false, true) => Some(Axis::Z),
            (false, false) => None,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }

    pub fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Axis::X => [[o, l], [l, o]],
            Axis::Y => [[o, -i], [i, o]],
            Axis::Z => [[l, o], [o, -l]],
        }
    }
}

/// ±σ_axis
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedAxis {
    pub axis: Axis,
    pub negative: bool,
}

impl SignedAxis {
    pub fn new(axis: Axis, negative: bool) -> Self {
        SignedAxis { axis, negative }
    }

    pub fn sign(self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for SignedAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.negative { '-' } else { '+' }, self.axis.letter())
    }
}

// σ_p σ_q = i ε_pqr σ_r for p ≠ q
fn levi_civita(p: usize, q: usize) -> (usize, i8) {
    let r = 3 - p - q;
    let s = if (p + 1) % 3 == q { 1 } else { -1 };
    (r, s)
}

/// Element of the single-qubit Clifford group modulo phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clifford(u8);

struct Tables {
    images: [[SignedAxis; 3]; 24],
    mul: [[u8; 24]; 24],
    inv: [u8; 24],
    unitary: [[[Complex64; 2]; 2]; 24],
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(build_tables)
}

fn images_from(x: SignedAxis, z: SignedAxis) -> [SignedAxis; 3] {
    let (r, e) = levi_civita(x.axis.index(), z.axis.index());
    // C σy C† = i (C σx C†)(C σz C†) = -s_x s_z ε σ_r
    let s = -(x.sign() * z.sign() * e);
    [x, SignedAxis::new(Axis::from_index(r), s < 0), z]
}

fn element_index(x: SignedAxis, z: SignedAxis) -> u8 {
    // x ranges over 6 signed axes; z over the 4 signed axes orthogonal to x.
    let xi = x.axis.index() * 2 + x.negative as usize;
    let others: Vec<usize> = (0..3).filter(|&a| a != x.axis.index()).collect();
    let zpos = others.iter().position(|&a| a == z.axis.index()).expect("orthogonal axes");
    let zi = zpos * 2 + z.negative as usize;
    (xi * 4 + zi) as u8
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn dagger(a: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

// Identify U σ U† with a signed Pauli.
fn conjugate_axis(u: &[[Complex64; 2]; 2], axis: Axis) -> SignedAxis {
    let m = mat_mul(&mat_mul(u, &axis.matrix()), &dagger(u));
    for cand in Axis::ALL {
        let p = cand.matrix();
        // tr(P·M)/2 is ±1 for M = ±P
        let t = (0..2)
            .map(|i| (0..2).map(|k| p[i][k] * m[k][i]).sum::<Complex64>())
            .sum::<Complex64>()
            / 2.0;
        if (t.re - 1.0).abs() < 1e-9 {
            return SignedAxis::new(cand, false);
        }
        if (t.re + 1.0).abs() < 1e-9 {
            return SignedAxis::new(cand, true);
        }
    }
    unreachable!("Clifford conjugation must map Paulis to signed Paulis")
}

fn build_tables() -> Tables {
    let mut images = [[SignedAxis::new(Axis::X, false); 3]; 24];
    for xa in Axis::ALL {
        for xn in [false, true] {
            for za in Axis::ALL {
                if za == xa {
                    continue;
                }
                for zn in [false, true] {
                    let x = SignedAxis::new(xa, xn);
                    let z = SignedAxis::new(za, zn);
                    images[element_index(x, z) as usize] = images_from(x, z);
                }
            }
        }
    }
    let apply = |e: usize, p: SignedAxis| {
        let img = images[e][p.axis.index()];
        SignedAxis::new(img.axis, img.negative ^ p.negative)
    };
    let mut mul = [[0u8; 24]; 24];
    for a in 0..24 {
        for b in 0..24 {
            // (a ∘ b)(P) = a(b(P))
            let x = apply(a, images[b][0]);
            let z = apply(a, images[b][2]);
            mul[a][b] = element_index(x, z);
        }
    }
    let id_index = element_index(SignedAxis::new(Axis::X, false), SignedAxis::new(Axis::Z, false));
    let mut inv = [0u8; 24];
    for a in 0..24 {
        inv[a] = (0..24u8).find(|&b| mul[a][b as usize] == id_index).expect("group");
    }

    // Unitaries by closure from H and S.
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let h = [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]];
    let s = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]];
    let id = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let mut unitary = [[[c(0.0, 0.0); 2]; 2]; 24];
    let mut found = [false; 24];
    let mut queue = vec![id];
    let key = |u: &[[Complex64; 2]; 2]| {
        element_index(conjugate_axis(u, Axis::X), conjugate_axis(u, Axis::Z)) as usize
    };
    found[key(&id)] = true;
    unitary[key(&id)] = id;
    while let Some(u) = queue.pop() {
        for g in [&h, &s] {
            let v = mat_mul(g, &u);
            let k = key(&v);
            if !found[k] {
                found[k] = true;
                unitary[k] = v;
                queue.push(v);
            }
        }
    }
    assert!(found.iter().all(|&f| f), "H and S generate all 24 elements");
    Tables {
        images,
        mul,
        inv,
        unitary,
    }
}

impl Clifford {
    pub const COUNT: usize = 24;

    pub fn all() -> impl Iterator<Item = Clifford> {
        (0..24u8).map(Clifford)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Clifford {
        assert!(i < 24);
        Clifford(i as u8)
    }

    /// Element with the given images of σx and σz; `None` if they anticommute
    /// incorrectly (equal axes).
    pub fn from_images(x: SignedAxis, z: SignedAxis) -> Option<Clifford> {
        if x.axis == z.axis {
            None
        } else {
            Some(Clifford(element_index(x, z)))
        }
    }

    pub fn identity() -> Clifford {
        Self::named(Named::I)
    }

    pub fn named(n: Named) -> Clifford {
        let p = |a, neg| SignedAxis::new(a, neg);
        use Axis::*;
        let (x, z) = match n {
            Named::I => (p(X, false), p(Z, false)),
            Named::X => (p(X, false), p(Z, true)),
            Named::Y => (p(X, true), p(Z, true)),
            Named::Z => (p(X, true), p(Z, false)),
            Named::H => (p(Z, false), p(X, false)),
            // S σx S† = σy
            Named::S => (p(Y, false), p(Z, false)),
            Named::SD => (p(Y, true), p(Z, false)),
            // √(iσx) = e^{iπ/4 σx}: σz ↦ σy
            Named::SQX => (p(X, false), p(Y, false)),
            Named::SQXD => (p(X, false), p(Y, true)),
            // √(iσy): σx ↦ σz, σz ↦ -σx
            Named::SQY => (p(Z, false), p(X, true)),
            Named::SQYD => (p(Z, true), p(X, false)),
            // √(iσz): σx ↦ -σy
            Named::SQZ => (p(Y, true), p(Z, false)),
            Named::SQZD => (p(Y, false), p(Z, false)),
        };
        Clifford(element_index(x, z))
    }

    /// Signed image of σ_axis.
    pub fn image(self, axis: Axis) -> SignedAxis {
        tables().images[self.index()][axis.index()]
    }

    /// C (±σ) C†
    pub fn conjugate(self, p: SignedAxis) -> SignedAxis {
        let img = self.image(p.axis);
        SignedAxis::new(img.axis, img.negative ^ p.negative)
    }

    /// C† (±σ) C
    pub fn conjugate_inverse(self, p: SignedAxis) -> SignedAxis {
        self.inverse().conjugate(p)
    }

    /// Composition: `self.then(u)` is u ∘ self (apply self first).
    pub fn then(self, u: Clifford) -> Clifford {
        u.compose(self)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Clifford) -> Clifford {
        Clifford(tables().mul[self.index()][other.index()])
    }

    pub fn inverse(self) -> Clifford {
        Clifford(tables().inv[self.index()])
    }

    /// Commutes with σz up to sign-free conjugation: C σz C† = +σz.
    pub fn is_diagonal(self) -> bool {
        self.image(Axis::Z) == SignedAxis::new(Axis::Z, false)
    }

    /// A unitary representative (global phase arbitrary).
    pub fn unitary(self) -> [[Complex64; 2]; 2] {
        tables().unitary[self.index()]
    }

    /// Binary symplectic matrix [[A, B], [C, D]] acting on column vectors
    /// (x, z): image of σx is (A, C), image of σz is (B, D).
    pub fn symplectic(self) -> [[bool; 2]; 2] {
        let (a, c) = self.image(Axis::X).axis.bits();
        let (b, d) = self.image(Axis::Z).axis.bits();
        [[a, b], [c, d]]
    }

    /// Circuit mnemonic where one exists, otherwise the action on σx, σz.
    pub fn name(self) -> String {
        for n in Named::ALL {
            if Clifford::named(n) == self {
                return n.mnemonic().to_string();
            }
        }
        format!(
            "C[X->{}, Z->{}]",
            self.image(Axis::X),
            self.image(Axis::Z)
        )
    }
}

impl fmt::Debug for Clifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Gates with a circuit mnemonic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    I,
    X,
    Y,
    Z,
    H,
    S,
    SD,
    SQX,
    SQXD,
    SQY,
    SQYD,
    SQZ,
    SQZD,
}

impl Named {
    pub const ALL: [Named; 13] = [
        Named::I,
        Named::X,
        Named::Y,
        Named::Z,
        Named::H,
        Named::S,
        Named::SD,
        Named::SQX,
        Named::SQXD,
        Named::SQY,
        Named::SQYD,
        Named::SQZ,
        Named::SQZD,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            Named::I => "I",
            Named::X => "X",
            Named::Y => "Y",
            Named::Z => "Z",
            Named::H => "H",
            Named::S => "S",
            Named::SD => "SD",
            Named::SQX => "SQX",
            Named::SQXD => "SQXD",
            Named::SQY => "SQY",
            Named::SQYD => "SQYD",
            Named::SQZ => "SQZ",
            Named::SQZD => "SQZD",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<Named> {
        Named::ALL.into_iter().find(|n| n.mnemonic() == s)
    }
}
