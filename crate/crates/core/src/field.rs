//! Exact arithmetic in GF(p) and GF(2^m).
//!
//! Everything above this module is written against the [`Field`] trait. A
//! field is a context object: elements are plain canonical integers and the
//! field value interprets them. [`FieldSpec`] is the runtime-selected field
//! used by the CLI; [`PrimeField`] is a zero-sized compile-time prime field.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported prime characteristic.
pub const MAX_PRIME: u64 = 1 << 16;
/// Largest supported extension degree for GF(2^m).
pub const MAX_EXTENSION_DEGREE: u32 = 16;

/// A finite field acting on its elements.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    /// Number of elements q.
    fn order(&self) -> u64;
    fn characteristic(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; [`Error::ZeroInverse`] for zero.
    fn inv(&self, a: Self::Elem) -> Result<Self::Elem>;

    /// Element with canonical integer representative `value`.
    fn element(&self, value: u64) -> Result<Self::Elem>;
    /// Canonical integer representative in `[0, q)`.
    fn value(&self, a: Self::Elem) -> u64;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    /// `a * b + c`
    fn mul_add(&self, a: Self::Elem, b: Self::Elem, c: Self::Elem) -> Self::Elem {
        self.add(self.mul(a, b), c)
    }

    fn elements(&self) -> Vec<Self::Elem> {
        (0..self.order())
            .map(|v| self.element(v).expect("value below order"))
            .collect()
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        self.element(rng.gen_range(0..self.order()))
            .expect("value below order")
    }

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        self.element(rng.gen_range(1..self.order()))
            .expect("value below order")
    }

    /// Short name such as `gf(8)`.
    fn name(&self) -> String {
        format!("gf({})", self.order())
    }
}

/// Canonical representative of an element of a [`FieldSpec`] field.
///
/// For GF(2^m) the bits of the value are the polynomial coefficients, bit 0
/// being the constant term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Fixed irreducible polynomial for GF(2^m), bit i holding the coefficient of
/// x^i (the leading x^m bit included).
pub fn default_binary_modulus(m: u32) -> Option<u32> {
    let poly = match m {
        2 => 0x7,      // x^2 + x + 1
        3 => 0xB,      // x^3 + x + 1
        4 => 0x13,     // x^4 + x + 1
        5 => 0x25,     // x^5 + x^2 + 1
        6 => 0x43,     // x^6 + x + 1
        7 => 0x83,     // x^7 + x + 1
        8 => 0x11B,    // x^8 + x^4 + x^3 + x + 1
        9 => 0x211,    // x^9 + x^4 + 1
        10 => 0x409,   // x^10 + x^3 + 1
        11 => 0x805,   // x^11 + x^2 + 1
        12 => 0x1053,  // x^12 + x^6 + x^4 + x + 1
        13 => 0x201B,  // x^13 + x^4 + x^3 + x + 1
        14 => 0x4443,  // x^14 + x^10 + x^6 + x + 1
        15 => 0x8003,  // x^15 + x + 1
        16 => 0x1100B, // x^16 + x^12 + x^3 + x + 1
        _ => return None,
    };
    Some(poly)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn poly_degree(p: u64) -> Option<u32> {
    (p != 0).then(|| 63 - p.leading_zeros())
}

/// Remainder of `a` divided by `b` over GF(2).
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("nonzero divisor");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Brute-force factor search: no polynomial of degree 1..=deg/2 divides `poly`.
pub fn is_irreducible_gf2(poly: u64) -> bool {
    let Some(deg) = poly_degree(poly) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for g in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(poly, g) == 0 {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Repr {
    Prime { p: u32 },
    Binary { m: u32, modulus: u32 },
}

/// Runtime description of GF(q) for q = p (prime, p ≤ 2^16) or q = 2^m (m ≤ 16).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    repr: Repr,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidField(format!(
                "{p} is not a supported prime (p ≤ {MAX_PRIME})"
            )));
        }
        Ok(Self {
            repr: Repr::Prime { p: p as u32 },
        })
    }

    /// GF(2^m) with the built-in modulus.
    pub fn binary(m: u32) -> Result<Self> {
        if m == 1 {
            return Self::prime(2);
        }
        let modulus = default_binary_modulus(m).ok_or_else(|| {
            Error::InvalidField(format!("extension degree {m} outside 1..={MAX_EXTENSION_DEGREE}"))
        })?;
        Self::binary_with_modulus(m, modulus)
    }

    /// GF(2^m) with an explicit modulus; irreducibility is verified.
    pub fn binary_with_modulus(m: u32, modulus: u32) -> Result<Self> {
        if !(2..=MAX_EXTENSION_DEGREE).contains(&m) {
            return Err(Error::InvalidField(format!(
                "extension degree {m} outside 2..={MAX_EXTENSION_DEGREE}"
            )));
        }
        if poly_degree(modulus as u64) != Some(m) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:#x} does not have degree {m}"
            )));
        }
        if !is_irreducible_gf2(modulus as u64) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:#x} is reducible over GF(2)"
            )));
        }
        Ok(Self {
            repr: Repr::Binary { m, modulus },
        })
    }

    /// GF(q) for q prime or a power of two.
    pub fn from_order(q: u64) -> Result<Self> {
        if q >= 4 && q.is_power_of_two() {
            Self::binary(q.trailing_zeros())
        } else {
            Self::prime(q)
        }
    }

    /// Parses `gf(q)` with an optional hex-encoded modulus bit string
    /// (`"13"` or `"0x13"` for x^4 + x + 1).
    pub fn parse(field: &str, modulus: Option<&str>) -> Result<Self> {
        let base: FieldSpec = field.parse()?;
        match (modulus, base.repr) {
            (None, _) => Ok(base),
            (Some(hex), Repr::Binary { m, .. }) => {
                let digits = hex.trim().trim_start_matches("0x").trim_start_matches("0X");
                let modulus = u32::from_str_radix(digits, 16)
                    .map_err(|e| Error::InvalidField(format!("bad modulus {hex:?}: {e}")))?;
                Self::binary_with_modulus(m, modulus)
            }
            (Some(_), Repr::Prime { .. }) => Err(Error::InvalidField(
                "a modulus is only meaningful for GF(2^m), m > 1".into(),
            )),
        }
    }

    pub fn extension_degree(&self) -> u32 {
        match self.repr {
            Repr::Prime { .. } => 1,
            Repr::Binary { m, .. } => m,
        }
    }

    /// Modulus polynomial bits, present iff m > 1.
    pub fn modulus(&self) -> Option<u32> {
        match self.repr {
            Repr::Prime { .. } => None,
            Repr::Binary { modulus, .. } => Some(modulus),
        }
    }

    fn gf2m_mul(a: u32, b: u32, m: u32, modulus: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut acc = 0u32;
        let top = 1u32 << m;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= modulus;
            }
        }
        acc
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gf({})", self.order())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let inner = t
            .strip_prefix("gf(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidField(format!("expected gf(q), got {s:?}")))?;
        let q: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::InvalidField(format!("bad field order in {s:?}")))?;
        if q >= 4 && q.is_power_of_two() {
            return Self::binary(q.trailing_zeros());
        }
        if !is_prime(q) {
            return Err(Error::InvalidField(format!(
                "{q} is neither a prime nor a power of two"
            )));
        }
        Self::prime(q)
    }
}

impl Field for FieldSpec {
    type Elem = FieldElement;

    fn order(&self) -> u64 {
        match self.repr {
            Repr::Prime { p } => p as u64,
            Repr::Binary { m, .. } => 1u64 << m,
        }
    }

    fn characteristic(&self) -> u64 {
        match self.repr {
            Repr::Prime { p } => p as u64,
            Repr::Binary { .. } => 2,
        }
    }

    fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.repr {
            Repr::Prime { p } => FieldElement(((a.0 as u64 + b.0 as u64) % p as u64) as u32),
            Repr::Binary { .. } => FieldElement(a.0 ^ b.0),
        }
    }

    fn neg(&self, a: FieldElement) -> FieldElement {
        match self.repr {
            Repr::Prime { p } => FieldElement(if a.0 == 0 { 0 } else { p - a.0 }),
            Repr::Binary { .. } => a,
        }
    }

    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.repr {
            Repr::Prime { p } => FieldElement(((a.0 as u64 * b.0 as u64) % p as u64) as u32),
            Repr::Binary { m, modulus } => FieldElement(Self::gf2m_mul(a.0, b.0, m, modulus)),
        }
    }

    fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        match self.repr {
            Repr::Prime { p } => {
                // extended Euclid
                let (mut r0, mut r1) = (p as i64, a.0 as i64);
                let (mut t0, mut t1) = (0i64, 1i64);
                while r1 != 0 {
                    let k = r0 / r1;
                    (r0, r1) = (r1, r0 - k * r1);
                    (t0, t1) = (t1, t0 - k * t1);
                }
                Ok(FieldElement(t0.rem_euclid(p as i64) as u32))
            }
            Repr::Binary { m, modulus } => {
                // a^(2^m - 2)
                let mut result = 1u32;
                let mut base = a.0;
                let mut e = (1u64 << m) - 2;
                while e != 0 {
                    if e & 1 != 0 {
                        result = Self::gf2m_mul(result, base, m, modulus);
                    }
                    base = Self::gf2m_mul(base, base, m, modulus);
                    e >>= 1;
                }
                Ok(FieldElement(result))
            }
        }
    }

    fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.order() {
            return Err(Error::ElementOutOfRange {
                value,
                order: self.order(),
            });
        }
        Ok(FieldElement(value as u32))
    }

    fn value(&self, a: FieldElement) -> u64 {
        a.0 as u64
    }
}

/// GF(P) fixed at compile time. Elements are `u32` residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PrimeField<const P: u32>;

impl<const P: u32> PrimeField<P> {
    pub fn new() -> Result<Self> {
        if is_prime(P as u64) && (P as u64) <= MAX_PRIME {
            Ok(Self)
        } else {
            Err(Error::InvalidField(format!("{P} is not a supported prime")))
        }
    }
}

impl<const P: u32> Field for PrimeField<P> {
    type Elem = u32;

    fn order(&self) -> u64 {
        P as u64
    }

    fn characteristic(&self) -> u64 {
        P as u64
    }

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % P as u64) as u32
    }

    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            P - a
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % P as u64) as u32
    }

    fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        // Fermat: a^(P-2)
        let (mut result, mut base, mut e) = (1u64, a as u64, P as u64 - 2);
        while e != 0 {
            if e & 1 != 0 {
                result = result * base % P as u64;
            }
            base = base * base % P as u64;
            e >>= 1;
        }
        Ok(result as u32)
    }

    fn element(&self, value: u64) -> Result<u32> {
        if value >= P as u64 {
            return Err(Error::ElementOutOfRange {
                value,
                order: P as u64,
            });
        }
        Ok(value as u32)
    }

    fn value(&self, a: u32) -> u64 {
        a as u64
    }
}
