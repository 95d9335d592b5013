//! Exact arithmetic in rings of integers of imaginary quadratic fields.
//!
//! A field `M = Q(i√d)` with `d ≥ 1` squarefree has ring of integers
//! `Z_M = Z[μ]` where the shape of `μ` depends on `d mod 4`:
//!
//! * `d ≡ 1, 2 (mod 4)`: `μ = i√d`, discriminant `D_M = −4d` ([`BasisKind::Sqrt`]),
//! * `d ≡ 3 (mod 4)`: `μ = ω = (1 + i√d)/2`, discriminant `D_M = −d`
//!   ([`BasisKind::Half`]).
//!
//! Elements are stored as coordinate pairs `(a, b)` meaning `a + bμ` with
//! arbitrary-precision integer coordinates. Multiplication reduces `μ²`
//! through `μ² = −d` resp. `ω² = ω − (1+d)/4`; conjugation maps `μ ↦ −μ`
//! resp. `ω ↦ 1 − ω`. Everything downstream (polynomial arithmetic,
//! resultants, index computations) manipulates these pairs exactly; no
//! embedding into the complex numbers is ever taken.
//!
//! The unit group is `{±1, ±i}` for `d = 1`, the six units `±1, ±ω, ±(ω−1)`
//! for `d = 3` in the half-integral basis, and `{±1}` otherwise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Shape of the integral basis `{1, μ}` of `Z_M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `μ = i√d`, valid for `d ≡ 1, 2 (mod 4)`.
    Sqrt,
    /// `μ = (1 + i√d)/2`, valid for `d ≡ 3 (mod 4)`.
    Half,
}

/// Errors raised by field construction and ring operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuadError {
    #[error("d = {0} is not squarefree")]
    NonSquarefree(u64),
    #[error("d = {0} must be positive")]
    NonPositive(u64),
    #[error("basis {basis:?} is not admissible for d = {d} (d mod 4 = {rem})")]
    BasisMismatch { d: u64, basis: BasisKind, rem: u64 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("exact division failed: divisor does not divide dividend in Z_M")]
    NotDivisible,
    #[error("division by zero in Z_M")]
    DivisionByZero,
    #[error("cannot parse {0:?} as an element of Z_M")]
    Parse(String),
}

/// An imaginary quadratic field `Q(i√d)` together with its integral basis.
///
/// This is a small copyable value; elements carry their field with them so
/// that mixed-field operations can be detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: u64,
    basis: BasisKind,
}

fn is_squarefree(d: u64) -> bool {
    if d.is_multiple_of(4) {
        return false;
    }
    let mut n = d;
    while n.is_multiple_of(2) {
        n /= 2;
    }
    let mut p = 3u64;
    while p.checked_mul(p).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(p * p) {
            return false;
        }
        while n.is_multiple_of(p) {
            n /= p;
        }
        p += 2;
    }
    true
}

impl QuadField {
    /// Validates `d` and the basis shape and returns the field.
    ///
    /// `d` must be a positive squarefree integer, and the basis must match
    /// `d mod 4`: [`BasisKind::Half`] only for `d ≡ 3`, [`BasisKind::Sqrt`]
    /// only for `d ≡ 1, 2`.
    pub fn new(d: u64, basis: BasisKind) -> Result<Self, QuadError> {
        if d == 0 {
            return Err(QuadError::NonPositive(d));
        }
        if !is_squarefree(d) {
            return Err(QuadError::NonSquarefree(d));
        }
        let rem = d % 4;
        let ok = match basis {
            BasisKind::Sqrt => rem == 1 || rem == 2,
            BasisKind::Half => rem == 3,
        };
        if !ok {
            return Err(QuadError::BasisMismatch { d, basis, rem });
        }
        Ok(QuadField { d, basis })
    }

    /// Convenience constructor choosing the canonical basis for `d`.
    pub fn for_d(d: u64) -> Result<Self, QuadError> {
        let basis = if d % 4 == 3 {
            BasisKind::Half
        } else {
            BasisKind::Sqrt
        };
        QuadField::new(d, basis)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    /// Field discriminant `D_M`: `−4d` in the square-root basis, `−d` in the
    /// half-integral basis.
    pub fn disc(&self) -> BigInt {
        match self.basis {
            BasisKind::Sqrt => BigInt::from(-4i64) * BigInt::from(self.d),
            BasisKind::Half => -BigInt::from(self.d),
        }
    }

    /// Builds the element `a + bμ` from machine-integer coordinates.
    pub fn int(&self, a: i64, b: i64) -> QuadInt {
        QuadInt {
            field: *self,
            a: BigInt::from(a),
            b: BigInt::from(b),
        }
    }

    /// Builds the element `a + bμ` from big-integer coordinates.
    pub fn make(&self, a: BigInt, b: BigInt) -> QuadInt {
        QuadInt { field: *self, a, b }
    }

    pub fn zero(&self) -> QuadInt {
        self.int(0, 0)
    }

    pub fn one(&self) -> QuadInt {
        self.int(1, 0)
    }

    /// The generator `μ` of the integral basis (either `i√d` or `ω`).
    pub fn mu(&self) -> QuadInt {
        self.int(0, 1)
    }

    /// All units of `Z_M`, in a fixed order.
    ///
    /// `{±1, ±μ}` for `d = 1`; `{±1, ±ω, ±(ω−1)}` for `d = 3` in the
    /// half-integral basis; `{±1}` otherwise.
    pub fn units(&self) -> Vec<QuadInt> {
        let mut out = vec![self.one(), self.int(-1, 0)];
        if self.d == 1 {
            out.push(self.int(0, 1));
            out.push(self.int(0, -1));
        } else if self.d == 3 && self.basis == BasisKind::Half {
            out.push(self.int(0, 1));
            out.push(self.int(0, -1));
            out.push(self.int(-1, 1));
            out.push(self.int(1, -1));
        }
        out
    }

    /// Representatives of the unit group modulo `{±1}`, in a fixed order.
    ///
    /// Useful because negating the whole element only reflects the
    /// `J`-polynomial, so sweeps over units need one member of each `±` pair.
    pub fn unit_reps_mod_sign(&self) -> Vec<QuadInt> {
        let mut out = vec![self.one()];
        if self.d == 1 {
            out.push(self.int(0, 1));
        } else if self.d == 3 && self.basis == BasisKind::Half {
            out.push(self.int(0, 1));
            out.push(self.int(-1, 1));
        }
        out
    }
}

/// An element `a + bμ` of `Z_M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    field: QuadField,
    a: BigInt,
    b: BigInt,
}

impl QuadInt {
    pub fn field(&self) -> QuadField {
        self.field
    }

    /// Rational coordinate (coefficient of 1).
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Irrational coordinate (coefficient of `μ`).
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the element lies in `Z`, i.e. is fixed by conjugation.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check_same_field(&self, other: &QuadInt) {
        assert!(
            self.field == other.field,
            "Z_M operands from different fields: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    pub fn add(&self, other: &QuadInt) -> QuadInt {
        self.check_same_field(other);
        self.field.make(&self.a + &other.a, &self.b + &other.b)
    }

    pub fn sub(&self, other: &QuadInt) -> QuadInt {
        self.check_same_field(other);
        self.field.make(&self.a - &other.a, &self.b - &other.b)
    }

    pub fn neg(&self) -> QuadInt {
        self.field.make(-&self.a, -&self.b)
    }

    /// Product, reducing `μ²` according to the basis shape.
    pub fn mul(&self, other: &QuadInt) -> QuadInt {
        self.check_same_field(other);
        let ac = &self.a * &other.a;
        let bd = &self.b * &other.b;
        let cross = &self.a * &other.b + &self.b * &other.a;
        match self.field.basis {
            // μ² = −d
            BasisKind::Sqrt => {
                let d = BigInt::from(self.field.d);
                self.field.make(ac - d * bd, cross)
            }
            // ω² = ω − (1+d)/4
            BasisKind::Half => {
                let q = BigInt::from((1 + self.field.d) / 4);
                self.field.make(ac - q * &bd, cross + bd)
            }
        }
    }

    /// Multiplies by a rational integer.
    pub fn scale(&self, k: &BigInt) -> QuadInt {
        self.field.make(&self.a * k, &self.b * k)
    }

    /// Complex conjugate: `μ ↦ −μ` resp. `ω ↦ 1 − ω`.
    pub fn conj(&self) -> QuadInt {
        match self.field.basis {
            BasisKind::Sqrt => self.field.make(self.a.clone(), -&self.b),
            BasisKind::Half => self.field.make(&self.a + &self.b, -&self.b),
        }
    }

    /// Field norm `N_{M/Q}(x) = x · x̄`, always a nonnegative integer.
    pub fn norm(&self) -> BigInt {
        match self.field.basis {
            BasisKind::Sqrt => {
                &self.a * &self.a + BigInt::from(self.field.d) * &self.b * &self.b
            }
            BasisKind::Half => {
                let q = BigInt::from((1 + self.field.d) / 4);
                &self.a * &self.a + &self.a * &self.b + q * &self.b * &self.b
            }
        }
    }

    /// Field trace `Tr_{M/Q}(x) = x + x̄`.
    pub fn trace(&self) -> BigInt {
        match self.field.basis {
            BasisKind::Sqrt => 2 * &self.a,
            BasisKind::Half => 2 * &self.a + &self.b,
        }
    }

    /// True iff the element is a unit of `Z_M`, i.e. has norm 1.
    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Exact division in `Z_M`.
    ///
    /// Computes `self · d̄ / N(d)` and verifies that both coordinates divide
    /// exactly; returns [`QuadError::NotDivisible`] otherwise and
    /// [`QuadError::DivisionByZero`] for a zero divisor.
    pub fn exact_div(&self, divisor: &QuadInt) -> Result<QuadInt, QuadError> {
        if self.field != divisor.field {
            return Err(QuadError::FieldMismatch);
        }
        if divisor.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        let n = divisor.norm();
        let num = self.mul(&divisor.conj());
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if !ra.is_zero() || !rb.is_zero() {
            return Err(QuadError::NotDivisible);
        }
        Ok(self.field.make(qa, qb))
    }

    /// Raises to a small power by repeated multiplication.
    pub fn pow(&self, e: u32) -> QuadInt {
        let mut acc = self.field.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total order on coordinates `(a, b)`, used only to canonicalize and
    /// sort result listings; it has no arithmetic meaning.
    pub fn coord_cmp(&self, other: &QuadInt) -> std::cmp::Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }
}

/// Canonical textual form.
///
/// `b = 0` prints as the bare integer `a`; `a = 0, b ≠ 0` prints as `b*w`;
/// otherwise `a+b*w` with the sign of `b` folded into the separator. No
/// spaces are emitted, and `w` always carries an explicit coefficient.
impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*w", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, self.b.magnitude())
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

/// Parses the textual forms produced by `Display`, plus the shorthands `w`,
/// `-w`, `a+w`, `a-w`. The field is supplied separately since the string does
/// not encode it.
pub fn parse_quadint(field: QuadField, s: &str) -> Result<QuadInt, QuadError> {
    let err = || QuadError::Parse(s.to_string());
    let t = s.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(err());
    }
    // Split at the last top-level '+' or '-' that is not a leading sign.
    let bytes = t.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if bytes[i] == b'+' || bytes[i] == b'-' {
            // Not a sign directly after '*', 'w' handled below; digits only here.
            split = Some(i);
            break;
        }
    }
    let parse_int = |u: &str| BigInt::from_str(u).map_err(|_| err());
    let parse_wterm = |u: &str| -> Result<BigInt, QuadError> {
        // Accepts "w", "-w", "+w", "c*w".
        match u {
            "w" | "+w" => Ok(BigInt::one()),
            "-w" => Ok(-BigInt::one()),
            _ => {
                let c = u.strip_suffix("*w").ok_or_else(err)?;
                parse_int(c)
            }
        }
    };
    if t.ends_with('w') {
        match split {
            Some(i) if !t[..i].is_empty() => {
                let a = parse_int(&t[..i])?;
                let sign = if bytes[i] == b'-' { -1 } else { 1 };
                let b = parse_wterm(&t[i + 1..])?;
                Ok(field.make(a, b * sign))
            }
            _ => Ok(field.make(BigInt::zero(), parse_wterm(t)?)),
        }
    } else {
        Ok(field.make(parse_int(t)?, BigInt::zero()))
    }
}
