//! Univariate polynomial arithmetic over pluggable coefficient rings.
//!
//! The coefficient contract ([`CoeffRing`]) deliberately excludes division:
//! every instance only needs ring operations, zero/one witnesses and a
//! structural-compatibility test. That makes the nested instantiations used
//! elsewhere in the crate valid, in particular `UPoly<QuadInt>` (quartic
//! characteristic polynomials over `Z_M`) and `UPoly<UPoly<QuadInt>>`
//! (those same polynomials with one symbolic coordinate left free).
//!
//! Resultants are computed as Sylvester determinants. Two determinant
//! engines are provided: a division-free subset dynamic program for generic
//! coefficient rings, and fraction-free Bareiss elimination for the
//! `BigInt`-matrix fast path. Neither ever approximates a root.
//!
//! [`integer_root_search`] finds all integer solutions of `p(a) = target`
//! exactly, via an integer Sturm sequence (primitive pseudo-remainders) and
//! interval bisection down to unit length. This is what keeps polynomial
//! equations with coefficients of hundreds of digits decidable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

use crate::quadring::QuadInt;

/// Commutative-ring operations required of polynomial coefficients.
///
/// `same_structure` decides whether two values live in the same coefficient
/// ring instance (same field `d`, same basis shape, compatible nesting); the
/// polynomial layer asserts it when combining operands.
pub trait CoeffRing: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Additive identity of the ring this value belongs to.
    fn zero_like(&self) -> Self;
    /// Multiplicative identity of the ring this value belongs to.
    fn one_like(&self) -> Self;
    fn same_structure(&self, other: &Self) -> bool;
}

impl CoeffRing for BigInt {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn same_structure(&self, _other: &Self) -> bool {
        true
    }
}

impl CoeffRing for QuadInt {
    fn add(&self, other: &Self) -> Self {
        QuadInt::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        QuadInt::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        QuadInt::mul(self, other)
    }
    fn neg(&self) -> Self {
        QuadInt::neg(self)
    }
    fn is_zero(&self) -> bool {
        QuadInt::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn same_structure(&self, other: &Self) -> bool {
        self.field() == other.field()
    }
}

/// Errors raised by polynomial-level operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("resultant of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("discriminant is only implemented for monic polynomials")]
    NotMonic,
    #[error("operation requires a nonconstant polynomial")]
    ConstantPolynomial,
}

/// A univariate polynomial with coefficients in `C`, stored constant-first.
///
/// The representation is canonical: no trailing zero coefficients, except
/// that the zero polynomial keeps a single zero coefficient as a witness of
/// its coefficient ring. `degree()` of the zero polynomial is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct UPoly<C: CoeffRing> {
    coeffs: Vec<C>,
}

impl<C: CoeffRing> UPoly<C> {
    /// Builds a polynomial from constant-first coefficients, normalizing away
    /// trailing zeros. Panics on an empty list or structurally incompatible
    /// coefficients; those are programming errors, not data conditions.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        for c in &coeffs[1..] {
            assert!(
                coeffs[0].same_structure(c),
                "polynomial coefficients from mismatched rings"
            );
        }
        let mut p = UPoly { coeffs };
        p.normalize();
        p
    }

    pub fn constant(c: C) -> Self {
        UPoly { coeffs: vec![c] }
    }

    /// `c·x^deg`.
    pub fn monomial(c: C, deg: usize) -> Self {
        if CoeffRing::is_zero(&c) {
            return UPoly::constant(c);
        }
        let mut coeffs = vec![c.zero_like(); deg];
        coeffs.push(c);
        UPoly { coeffs }
    }

    fn normalize(&mut self) {
        while self.coeffs.len() > 1 && CoeffRing::is_zero(self.coeffs.last().unwrap()) {
            self.coeffs.pop();
        }
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && CoeffRing::is_zero(&self.coeffs[0])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, defaulting to zero beyond the stored degree.
    pub fn coeff(&self, i: usize) -> C {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    /// Leading coefficient; for the zero polynomial this is the witness zero.
    pub fn lc(&self) -> &C {
        self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        *self.lc() == self.lc().one_like()
    }

    fn zero_coeff(&self) -> C {
        self.coeffs[0].zero_like()
    }

    fn check_compatible(&self, other: &UPoly<C>) {
        assert!(
            self.coeffs[0].same_structure(&other.coeffs[0]),
            "polynomials over mismatched coefficient rings"
        );
    }

    pub fn add(&self, other: &UPoly<C>) -> UPoly<C> {
        self.check_compatible(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        UPoly::new(out)
    }

    pub fn sub(&self, other: &UPoly<C>) -> UPoly<C> {
        self.check_compatible(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).sub(&other.coeff(i)));
        }
        UPoly::new(out)
    }

    pub fn neg(&self) -> UPoly<C> {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &UPoly<C>) -> UPoly<C> {
        self.check_compatible(other);
        if self.is_zero() || other.is_zero() {
            return UPoly::constant(self.zero_coeff());
        }
        let mut out = vec![self.zero_coeff(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if CoeffRing::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if CoeffRing::is_zero(b) {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(out)
    }

    pub fn mul_scalar(&self, k: &C) -> UPoly<C> {
        UPoly::new(self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    /// Applies `f` to every coefficient, producing a polynomial over another
    /// ring. The image is re-normalized (coefficients may map to zero).
    pub fn map<D: CoeffRing>(&self, f: impl Fn(&C) -> D) -> UPoly<D> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Horner evaluation at a ring element.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = self.lc().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Polynomial composition `self(inner)` by Horner's rule.
    pub fn compose(&self, inner: &UPoly<C>) -> UPoly<C> {
        self.check_compatible(inner);
        let mut acc = UPoly::constant(self.lc().clone());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(inner).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// Formal derivative. Integer multiples are formed by double-and-add so
    /// the coefficient ring never needs a `Z`-action of its own.
    pub fn derivative(&self) -> UPoly<C> {
        if self.coeffs.len() == 1 {
            return UPoly::constant(self.zero_coeff());
        }
        let out: Vec<C> = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| int_multiple(c, i + 1))
            .collect();
        UPoly::new(out)
    }
}

/// `k·c` by binary double-and-add.
fn int_multiple<C: CoeffRing>(c: &C, k: usize) -> C {
    let mut acc = c.zero_like();
    let mut base = c.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.add(&base);
        }
        k >>= 1;
        if k > 0 {
            base = base.add(&base);
        }
    }
    acc
}

impl<C: CoeffRing> fmt::Display for UPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if CoeffRing::is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*x", c)?,
                _ => write!(f, "({})*x^{}", c, i)?,
            }
        }
        Ok(())
    }
}

impl<C: CoeffRing> CoeffRing for UPoly<C> {
    fn add(&self, other: &Self) -> Self {
        UPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        UPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        UPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        UPoly::neg(self)
    }
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        UPoly::constant(self.zero_coeff())
    }
    fn one_like(&self) -> Self {
        UPoly::constant(self.coeffs[0].one_like())
    }
    fn same_structure(&self, other: &Self) -> bool {
        self.coeffs[0].same_structure(&other.coeffs[0])
    }
}

/// Division-free determinant by dynamic programming over column subsets.
///
/// State `f[S]` is the determinant of the submatrix formed by rows
/// `0..|S|-1` and columns `S`, filled in increasing mask order with Laplace
/// expansion along the last row. Costs `O(n·2ⁿ)` ring multiplications, which
/// is the right trade for the small, dense, division-less rings used here.
pub fn det_division_free<C: CoeffRing>(m: &[Vec<C>], witness: &C) -> C {
    let n = m.len();
    if n == 0 {
        return witness.one_like();
    }
    let zero = witness.zero_like();
    let mut f: Vec<Option<C>> = vec![None; 1 << n];
    f[0] = Some(witness.one_like());
    for mask in 1usize..(1 << n) {
        let row = (mask.count_ones() - 1) as usize;
        let mut acc = zero.clone();
        let mut idx = 0; // position of the column among set bits
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let entry = &m[row][j];
            if !CoeffRing::is_zero(entry) {
                if let Some(sub) = &f[mask ^ (1 << j)] {
                    let term = sub.mul(entry);
                    // Laplace sign (−1)^{row + idx}
                    if (row + idx).is_multiple_of(2) {
                        acc = acc.add(&term);
                    } else {
                        acc = acc.sub(&term);
                    }
                }
            }
            idx += 1;
        }
        if !CoeffRing::is_zero(&acc) {
            f[mask] = Some(acc);
        }
    }
    f[(1 << n) - 1].take().unwrap_or(zero)
}

/// Fraction-free Bareiss determinant for integer matrices. All interior
/// divisions are exact, so the result is the exact determinant.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if Zero::is_zero(&m[k][k]) {
            match (k + 1..n).find(|&i| !Zero::is_zero(&m[i][k])) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = std::mem::replace(&mut m[n - 1][n - 1], BigInt::zero());
    if sign < 0 {
        -det
    } else {
        det
    }
}

fn sylvester<C: CoeffRing>(p: &UPoly<C>, q: &UPoly<C>) -> Vec<Vec<C>> {
    let n = p.degree().unwrap();
    let m = q.degree().unwrap();
    let size = n + m;
    let zero = p.coeffs()[0].zero_like();
    let mut mat = vec![vec![zero; size]; size];
    for i in 0..m {
        for k in 0..=n {
            mat[i][i + k] = p.coeff(n - k);
        }
    }
    for i in 0..n {
        for k in 0..=m {
            mat[m + i][i + k] = q.coeff(m - k);
        }
    }
    mat
}

/// Resultant of two nonzero polynomials, as the determinant of their
/// Sylvester matrix. With the convention used here,
/// `Res(p, q) = lc(p)^deg q · lc(q)^deg p · ∏(αᵢ − βⱼ)`.
pub fn resultant<C: CoeffRing>(p: &UPoly<C>, q: &UPoly<C>) -> Result<C, PolyError> {
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let witness = p.coeffs()[0].zero_like();
    let mat = sylvester(p, q);
    Ok(det_division_free(&mat, &witness))
}

/// Resultant over `Z` through Bareiss elimination; same value as
/// [`resultant`], asymptotically cheaper for the wide matrices produced by
/// octic discriminants.
pub fn resultant_int(p: &UPoly<BigInt>, q: &UPoly<BigInt>) -> Result<BigInt, PolyError> {
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(det_bareiss(sylvester(p, q)))
}

/// Discriminant of a monic polynomial:
/// `disc p = (−1)^{n(n−1)/2} · Res(p, p′)`.
///
/// Restricted to monic inputs so no division by the leading coefficient is
/// ever needed; that covers every polynomial this crate produces.
pub fn discriminant<C: CoeffRing>(p: &UPoly<C>) -> Result<C, PolyError> {
    let n = match p.degree() {
        None => return Err(PolyError::ZeroPolynomial),
        Some(0) => return Err(PolyError::ConstantPolynomial),
        Some(n) => n,
    };
    if !p.is_monic() {
        return Err(PolyError::NotMonic);
    }
    if n == 1 {
        return Ok(p.coeffs()[0].one_like());
    }
    let r = resultant(p, &p.derivative())?;
    if (n * (n - 1) / 2) % 2 == 1 {
        Ok(r.neg())
    } else {
        Ok(r)
    }
}

/// Discriminant of a monic integer polynomial via the Bareiss fast path.
pub fn discriminant_int(p: &UPoly<BigInt>) -> Result<BigInt, PolyError> {
    let n = match p.degree() {
        None => return Err(PolyError::ZeroPolynomial),
        Some(0) => return Err(PolyError::ConstantPolynomial),
        Some(n) => n,
    };
    if !p.is_monic() {
        return Err(PolyError::NotMonic);
    }
    if n == 1 {
        return Ok(BigInt::one());
    }
    let r = resultant_int(p, &p.derivative())?;
    if (n * (n - 1) / 2) % 2 == 1 {
        Ok(-r)
    } else {
        Ok(r)
    }
}

/// Content (positive gcd of coefficients) of a nonzero integer polynomial.
fn content(p: &UPoly<BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for c in p.coeffs() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn divide_coeffs(p: &UPoly<BigInt>, g: &BigInt) -> UPoly<BigInt> {
    UPoly::new(p.coeffs().iter().map(|c| c / g).collect())
}

/// Pseudo-remainder of `f` by `g` over `Z`: the remainder of
/// `lc(g)^{deg f − deg g + 1} · f` under long division by `g`, which stays in
/// `Z[x]` by construction. Also returns the sign of the premultiplier.
fn pseudo_rem(f: &UPoly<BigInt>, g: &UPoly<BigInt>) -> (UPoly<BigInt>, i32) {
    let df = f.degree().unwrap();
    let dg = g.degree().unwrap();
    debug_assert!(df >= dg);
    let lc = g.lc().clone();
    let mult_sign = if lc.is_negative() && (df - dg + 1) % 2 == 1 {
        -1
    } else {
        1
    };
    let mut r = f.clone();
    // Each step replaces r by lc·r − lc(r)·x^s·g, so after exactly
    // df − dg + 1 steps r ≡ lc^{df−dg+1}·f (mod g) with deg r < dg.
    let steps = df - dg + 1;
    for _ in 0..steps {
        match r.degree() {
            Some(dr) if dr >= dg => {
                let shift = dr - dg;
                let factor = r.lc().clone();
                let sub = UPoly::new(
                    std::iter::repeat_with(BigInt::zero)
                        .take(shift)
                        .chain(g.coeffs().iter().map(|c| c * &factor))
                        .collect(),
                );
                r = r.mul_scalar(&lc).sub(&sub);
            }
            _ => r = r.mul_scalar(&lc),
        }
    }
    (r, mult_sign)
}

/// Sturm chain of a nonconstant squarefree-or-not integer polynomial, using
/// primitive pseudo-remainders. Each member equals the mathematically correct
/// Sturm chain entry up to a positive rational factor, which is all that sign
/// variation counting needs.
fn sturm_chain(q: &UPoly<BigInt>) -> Vec<UPoly<BigInt>> {
    let mut chain = Vec::new();
    let c0 = content(q);
    chain.push(divide_coeffs(q, &c0));
    let d = q.derivative();
    if d.is_zero() {
        return chain;
    }
    let c1 = content(&d);
    chain.push(divide_coeffs(&d, &c1));
    loop {
        let prev = &chain[chain.len() - 2];
        let cur = &chain[chain.len() - 1];
        if cur.degree().is_none() {
            break;
        }
        if prev.degree().unwrap() < cur.degree().unwrap() {
            break;
        }
        let (r, msign) = pseudo_rem(prev, cur);
        if r.is_zero() {
            break;
        }
        let c = content(&r);
        let mut next = divide_coeffs(&r, &c);
        // Sturm wants −(prev mod cur) up to a positive factor; the pseudo
        // remainder is m·(prev mod cur) with m of known sign.
        if msign > 0 {
            next = next.neg();
        }
        chain.push(next);
        if chain.last().unwrap().degree() == Some(0) {
            break;
        }
    }
    chain
}

/// Number of sign variations of the chain at integer `x`, zeros dropped.
fn variations(chain: &[UPoly<BigInt>], x: &BigInt) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None; // sign as is_positive
    for s in chain {
        let v = s.eval(x);
        if Zero::is_zero(&v) {
            continue;
        }
        let pos = v.is_positive();
        if let Some(l) = last {
            if l != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

/// Upper bound `B` such that every real root of `q` satisfies `|x| ≤ B`,
/// from the Lagrange bound `|x| ≤ 2·maxᵢ (|c_i|/|c_n|)^{1/(n−i)}` rounded up
/// in integer arithmetic.
fn root_bound(q: &UPoly<BigInt>) -> BigInt {
    let n = q.degree().unwrap();
    let lead = q.lc().magnitude().to_owned();
    let mut best = BigInt::one();
    for i in 0..n {
        let c = q.coeff(i);
        if Zero::is_zero(&c) {
            continue;
        }
        let ratio: BigInt = (BigInt::from(c.magnitude().to_owned()) / BigInt::from(lead.clone()))
            + BigInt::one();
        let k = (n - i) as u32;
        let root = ratio.nth_root(k) + BigInt::one();
        if root > best {
            best = root;
        }
    }
    BigInt::from(2) * best + BigInt::one()
}

/// Finds every integer `a` with `p(a) = target`, exactly.
///
/// The search bisects `[−B, B]` (Lagrange root bound) guided by Sturm sign
/// variations, so intervals free of real roots are discarded wholesale and
/// only O(roots · log B) chain evaluations happen. Integer points are probed
/// directly when the bisection lands on them; non-integer roots are discarded
/// once an interval has shrunk to unit length.
pub fn integer_root_search(p: &UPoly<BigInt>, target: &BigInt) -> Vec<BigInt> {
    let q = p.sub(&UPoly::constant(target.clone()));
    match q.degree() {
        None => panic!("integer_root_search needs p ≠ target identically"),
        Some(0) => return Vec::new(),
        Some(_) => {}
    }
    let chain = sturm_chain(&q);
    let bound = root_bound(&q);
    let lo = -&bound - BigInt::one();
    let hi = bound + BigInt::one();
    let mut found = Vec::new();

    // Invariant: q(a) ≠ 0 and q(b) ≠ 0. Guaranteed at the top level because
    // every root has magnitude ≤ B.
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        if variations(&chain, &a) == variations(&chain, &b) {
            continue;
        }
        if &b - &a <= BigInt::one() {
            // Any root in (a, b] would have to be b, which is a non-root.
            continue;
        }
        let mut mid: BigInt = (&a + &b) / 2i32;
        // Walk to a non-root split point, recording integer roots on the way.
        while mid > a && Zero::is_zero(&q.eval(&mid)) {
            found.push(mid.clone());
            mid -= 1;
        }
        if mid == a {
            mid = (&a + &b) / 2i32 + 1;
            while mid < b && Zero::is_zero(&q.eval(&mid)) {
                found.push(mid.clone());
                mid += 1;
            }
            if mid == b {
                continue;
            }
        }
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    found.sort();
    found.dedup();
    found
}

/// Convenience constructor for integer polynomials from machine integers.
pub fn zpoly(coeffs: &[i64]) -> UPoly<BigInt> {
    UPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadring::QuadField;
    use proptest::prelude::*;

    /// Cofactor-expansion determinant, kept deliberately naive as an
    /// independent oracle for the two production engines.
    fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if Zero::is_zero(&m[0][j]) {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn canonical_form_and_degree() {
        let p = zpoly(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coeffs().len(), 2);
        let z = zpoly(&[0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(z.coeffs().len(), 1);
        assert_eq!(zpoly(&[5]).degree(), Some(0));
    }

    #[test]
    fn arithmetic_basics() {
        let p = zpoly(&[1, 1]); // 1 + x
        let q = zpoly(&[-1, 1]); // −1 + x
        assert_eq!(p.mul(&q), zpoly(&[-1, 0, 1]));
        assert_eq!(p.add(&q), zpoly(&[0, 2]));
        assert_eq!(p.sub(&p), zpoly(&[0]));
        assert_eq!(p.eval(&BigInt::from(4)), BigInt::from(5));
        // (x²+1) ∘ (x−3) = x² − 6x + 10
        let c = zpoly(&[1, 0, 1]).compose(&zpoly(&[-3, 1]));
        assert_eq!(c, zpoly(&[10, -6, 1]));
        assert_eq!(zpoly(&[7, 3, 0, 5]).derivative(), zpoly(&[3, 0, 15]));
        assert_eq!(zpoly(&[9]).derivative(), zpoly(&[0]));
    }

    #[test]
    fn resultant_examples() {
        // Res(x−2, x−5) = 2 − 5 = −3
        let r = resultant(&zpoly(&[-2, 1]), &zpoly(&[-5, 1])).unwrap();
        assert_eq!(r, BigInt::from(-3));
        // Shared roots give zero.
        let p = zpoly(&[1, 0, 1]);
        assert_eq!(resultant(&p, &p).unwrap(), BigInt::zero());
        // Res(x²−2, x²−3) = 1
        let r = resultant(&zpoly(&[-2, 0, 1]), &zpoly(&[-3, 0, 1])).unwrap();
        assert_eq!(r, BigInt::one());
        // Constant conventions: Res(c, q) = c^{deg q}.
        let r = resultant(&zpoly(&[3]), &zpoly(&[1, 0, 1])).unwrap();
        assert_eq!(r, BigInt::from(9));
        assert_eq!(
            resultant(&zpoly(&[0]), &zpoly(&[1, 1])),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn discriminant_examples() {
        // x² + bx + c → b² − 4c
        let p = zpoly(&[7, 5, 1]);
        assert_eq!(discriminant(&p).unwrap(), BigInt::from(25 - 28));
        // x³ + px + q → −4p³ − 27q²
        let p = zpoly(&[2, -3, 0, 1]);
        assert_eq!(discriminant(&p).unwrap(), BigInt::from(4 * 27 - 27 * 4));
        let p = zpoly(&[1, 1, 0, 1]);
        assert_eq!(discriminant(&p).unwrap(), BigInt::from(-4 - 27));
        // monic quartic x⁴ + px² + qx + r
        let (pp, qq, rr) = (3i64, -2, 5);
        let quartic = zpoly(&[rr, qq, pp, 0, 1]);
        let expected = 16 * pp.pow(4) * rr - 4 * pp.pow(3) * qq * qq - 128 * pp * pp * rr * rr
            + 144 * pp * qq * qq * rr
            - 27 * qq.pow(4)
            + 256 * rr.pow(3);
        assert_eq!(discriminant(&quartic).unwrap(), BigInt::from(expected));
        assert_eq!(discriminant(&zpoly(&[1, 2])), Err(PolyError::NotMonic));
        assert_eq!(discriminant(&zpoly(&[4])), Err(PolyError::ConstantPolynomial));
        assert_eq!(discriminant(&zpoly(&[-9, 1])).unwrap(), BigInt::one());
    }

    #[test]
    fn nested_polynomials_work() {
        // Treat y as inner variable: p(x) = (y+1)x² − yx ∈ (Z[y])[x].
        let y = zpoly(&[0, 1]);
        let yp1 = zpoly(&[1, 1]);
        let p = UPoly::new(vec![zpoly(&[0]), y.neg(), yp1.clone()]);
        assert_eq!(p.degree(), Some(2));
        // Evaluate at x = y: (y+1)y² − y² = y³.
        let v = p.eval(&y);
        assert_eq!(v, zpoly(&[0, 0, 0, 1]));
    }

    #[test]
    fn integer_root_search_examples() {
        // x¹⁶ − 65536 = 0 at ±2.
        let mut coeffs = vec![0i64; 17];
        coeffs[0] = -65536;
        coeffs[16] = 1;
        let p = zpoly(&coeffs);
        assert_eq!(
            integer_root_search(&p, &BigInt::zero()),
            vec![BigInt::from(-2), BigInt::from(2)]
        );
        // Repeated roots are found once.
        let p = zpoly(&[1, -2, 1]); // (x−1)²
        assert_eq!(integer_root_search(&p, &BigInt::zero()), vec![BigInt::one()]);
        // Nonzero target.
        let p = zpoly(&[0, 0, 1]); // x²
        assert_eq!(
            integer_root_search(&p, &BigInt::from(49)),
            vec![BigInt::from(-7), BigInt::from(7)]
        );
        // No integer roots.
        let p = zpoly(&[-2, 0, 1]);
        assert!(integer_root_search(&p, &BigInt::zero()).is_empty());
        // Dense cluster of roots exercises the walk logic.
        let p = zpoly(&[0, -1, 0, 1]); // x³ − x = x(x−1)(x+1)
        assert_eq!(
            integer_root_search(&p, &BigInt::zero()),
            vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]
        );
    }

    #[test]
    fn quadint_coefficients() {
        let f = QuadField::new(1, crate::quadring::BasisKind::Sqrt).unwrap();
        // (x − i)(x + i) = x² + 1 over Z[i].
        let p = UPoly::new(vec![f.int(0, -1), f.one()]);
        let q = UPoly::new(vec![f.int(0, 1), f.one()]);
        assert_eq!(p.mul(&q), UPoly::new(vec![f.one(), f.zero(), f.one()]));
        let r = resultant(&p, &q).unwrap();
        // Res = i − (−i) = 2i
        assert_eq!(r, f.int(0, 2));
    }

    fn arb_zpoly(max_deg: usize, max_coeff: i64) -> impl Strategy<Value = UPoly<BigInt>> {
        prop::collection::vec(-max_coeff..=max_coeff, 1..=max_deg + 1)
            .prop_map(|v| UPoly::new(v.into_iter().map(BigInt::from).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn resultant_swap_sign(p in arb_zpoly(4, 20), q in arb_zpoly(4, 20)) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            let n = p.degree().unwrap();
            let m = q.degree().unwrap();
            let lhs = resultant(&p, &q).unwrap();
            let mut rhs = resultant(&q, &p).unwrap();
            if (n * m) % 2 == 1 {
                rhs = -rhs;
            }
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn resultant_multiplicative(p in arb_zpoly(3, 10), q in arb_zpoly(3, 10), r in arb_zpoly(3, 10)) {
            prop_assume!(!p.is_zero() && !q.is_zero() && !r.is_zero());
            let lhs = resultant(&p.mul(&q), &r).unwrap();
            let rhs = resultant(&p, &r).unwrap() * resultant(&q, &r).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn engines_agree(p in arb_zpoly(4, 30), q in arb_zpoly(4, 30)) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            let dp = resultant(&p, &q).unwrap();
            let bareiss = resultant_int(&p, &q).unwrap();
            prop_assert_eq!(&dp, &bareiss);
            let syl = sylvester(&p, &q);
            prop_assert_eq!(dp, det_cofactor(&syl));
        }

        #[test]
        fn disc_translation_invariant(c0 in -20i64..20, c1 in -20i64..20,
                                      c2 in -20i64..20, c3 in -20i64..20,
                                      shift in -10i64..10) {
            let p = UPoly::new(vec![
                BigInt::from(c0), BigInt::from(c1), BigInt::from(c2),
                BigInt::from(c3), BigInt::one(),
            ]);
            let shifted = p.compose(&zpoly(&[shift, 1]));
            prop_assert_eq!(discriminant(&p).unwrap(), discriminant(&shifted).unwrap());
        }

        #[test]
        fn root_search_matches_brute_force(p in arb_zpoly(6, 1000), target in -1000i64..1000) {
            prop_assume!(p.degree().is_some_and(|d| d >= 1));
            let t = BigInt::from(target);
            let fast = integer_root_search(&p, &t);
            // Brute force over the same guaranteed window.
            let bound = root_bound(&p.sub(&UPoly::constant(t.clone())));
            let mut slow = Vec::new();
            let b: i64 = 10_000; // generous cap; bound stays far below it here
            let bound_i = bound.to_string().parse::<i64>().unwrap_or(b).min(b);
            for a in -bound_i..=bound_i {
                if p.eval(&BigInt::from(a)) == t {
                    slow.push(BigInt::from(a));
                }
            }
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn planted_roots_are_found(r1 in -9000i64..9000, r2 in -9000i64..9000, scale in 1i64..5) {
            // p = scale·(x − r1)(x − r2) targeted at 0.
            let p = zpoly(&[-r1 * scale, scale]).mul(&zpoly(&[-r2, 1]));
            let roots = integer_root_search(&p, &BigInt::zero());
            prop_assert!(roots.contains(&BigInt::from(r1)));
            prop_assert!(roots.contains(&BigInt::from(r2)));
            prop_assert_eq!(roots.len(), if r1 == r2 { 1 } else { 2 });
        }
    }
}
