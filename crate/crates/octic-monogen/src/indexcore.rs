//! Relative and absolute indices of elements in quartic orders over `Z_M`.
//!
//! A [`RelQuarticOrder`] is `O = Z_M[ξ]` for a monic quartic `g` over the
//! ring of integers of an imaginary quadratic field. For an element
//! `α = A + Xξ + Yξ² + Zξ³` with `A, X, Y, Z ∈ Z_M` the module computes
//!
//! * `h = charpoly_{O/M}(α)`, exactly, from the multiplication matrix
//!   `A·I + X·C + Y·C² + Z·C³` where `C` is the companion matrix of `g`;
//! * the relative index `I_{O/M}(α) = √(|N(disc h)| / |N(disc g)|)`, an
//!   integer whenever `α` generates `O` over `Z_M` up to finite index;
//! * the co-index `J(α) = |Res(h, h̄)| / D_M²` measuring how far `Z[α]` sits
//!   inside `Z_M[α]`, where `h̄` conjugates the coefficients of `h`;
//! * the absolute index `I_O(α) = I_{O/M}(α) · J(α)`, cross-checked against
//!   `I_O(α)² · |D_O| = |disc(h·h̄)|` on every call.
//!
//! The absolute discriminant is stored as `D_O = N(disc g) · D_M⁴`, the
//! norm-and-power relation for a relative quartic extension.
//! [`RelQuarticOrder::check_disc_relation`] verifies that value against an
//! independently computed trace-form Gram determinant over the `Z`-basis
//! `{μ^e ξ^j}`, and against the octic discriminant `disc(g·ḡ)` when
//! `Res(g, ḡ) ≠ 0`.
//!
//! Degenerate inputs are tolerated but inert: an order with `disc g = 0`
//! can be constructed and its discriminant relation checked, while index
//! computations on it return [`IndexError::DegenerateOrder`].

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

use crate::polyarith::{
    det_bareiss, det_division_free, discriminant, discriminant_int, resultant, UPoly,
};
use crate::quadring::{QuadField, QuadInt};

/// Errors raised by order construction and index computations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("defining polynomial must be monic of degree 4, got degree {0:?}")]
    WrongShape(Option<usize>),
    #[error("defining polynomial has coefficients outside the given field")]
    FieldMismatch,
    #[error("defining polynomial has the small root {0}, so it is reducible")]
    ObviousRoot(String),
    #[error("order has zero relative discriminant; indices are undefined")]
    DegenerateOrder,
    #[error("element does not generate a finite-index subring over Z_M (disc h = 0)")]
    NotPrimitive,
    #[error("element does not generate a finite-index subring over Z (Res(h, h̄) = 0)")]
    NotPrimitiveAbs,
    #[error("norm quotient is not a perfect square; index relation violated")]
    InexactSqrt,
    #[error("resultant is not divisible by D_M²; co-index relation violated")]
    InexactDivision,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// The order `O = Z_M[ξ]`, `ξ` a root of a monic quartic `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelQuarticOrder {
    field: QuadField,
    g: UPoly<QuadInt>,
    rel_disc: QuadInt,
    abs_disc: BigInt,
}

impl RelQuarticOrder {
    /// Builds the order after validating the defining polynomial.
    ///
    /// `g` must be monic of degree 4 with coefficients in `field`. As a
    /// sanity check, roots `a + bμ` with `|a|, |b| ≤ 8` are scanned for and
    /// rejected; full irreducibility over `M` is an assumption on the
    /// caller, not something this library proves. A vanishing discriminant
    /// is allowed here so that degenerate parameter choices can still be
    /// inspected; the index operations themselves refuse to run on them.
    pub fn new(field: QuadField, g: UPoly<QuadInt>) -> Result<Self, IndexError> {
        if g.degree() != Some(4) {
            return Err(IndexError::WrongShape(g.degree()));
        }
        if !g.is_monic() {
            return Err(IndexError::WrongShape(g.degree()));
        }
        for c in g.coeffs() {
            if c.field() != field {
                return Err(IndexError::FieldMismatch);
            }
        }
        for a in -8i64..=8 {
            for b in -8i64..=8 {
                let r = field.int(a, b);
                if g.eval(&r).is_zero() {
                    return Err(IndexError::ObviousRoot(r.to_string()));
                }
            }
        }
        let rel_disc = discriminant(&g).expect("monic quartic has a discriminant");
        let dm2 = field.disc() * field.disc();
        let abs_disc = rel_disc.norm() * &dm2 * &dm2;
        Ok(RelQuarticOrder {
            field,
            g,
            rel_disc,
            abs_disc,
        })
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn g(&self) -> &UPoly<QuadInt> {
        &self.g
    }

    /// `disc g ∈ Z_M`.
    pub fn rel_disc(&self) -> &QuadInt {
        &self.rel_disc
    }

    /// `D_O = N(disc g) · D_M⁴ ∈ Z`.
    pub fn abs_disc(&self) -> &BigInt {
        &self.abs_disc
    }

    pub fn is_degenerate(&self) -> bool {
        self.rel_disc.is_zero()
    }

    /// The element `A + Xξ + Yξ² + Zξ³`.
    pub fn element(&self, a: QuadInt, x: QuadInt, y: QuadInt, z: QuadInt) -> OcticElement<'_> {
        for c in [&a, &x, &y, &z] {
            assert!(c.field() == self.field, "element coordinates outside Z_M");
        }
        OcticElement {
            order: self,
            a,
            x,
            y,
            z,
        }
    }

    /// Convenience constructor from machine-integer coordinate pairs.
    pub fn element_i64(
        &self,
        a: (i64, i64),
        x: (i64, i64),
        y: (i64, i64),
        z: (i64, i64),
    ) -> OcticElement<'_> {
        let f = self.field;
        self.element(
            f.int(a.0, a.1),
            f.int(x.0, x.1),
            f.int(y.0, y.1),
            f.int(z.0, z.1),
        )
    }

    /// The distinguished generator `ξ`.
    pub fn xi(&self) -> OcticElement<'_> {
        self.element_i64((0, 0), (1, 0), (0, 0), (0, 0))
    }

    /// Companion matrix of `g`, acting on the basis `{1, ξ, ξ², ξ³}`.
    fn companion(&self) -> Vec<Vec<QuadInt>> {
        let z = self.field.zero();
        let o = self.field.one();
        let c = |i: usize| self.g.coeff(i).neg();
        vec![
            vec![z.clone(), z.clone(), z.clone(), c(0)],
            vec![o.clone(), z.clone(), z.clone(), c(1)],
            vec![z.clone(), o.clone(), z.clone(), c(2)],
            vec![z.clone(), z, o, c(3)],
        ]
    }

    /// Verifies the discriminant relation `D_O = N(disc g) · D_M⁴` against
    /// independent computations.
    ///
    /// Primary check: the Gram determinant of the trace form on the Z-basis
    /// `{μ^e ξ^j : e ∈ {0,1}, j ∈ {0..3}}`, with entries
    /// `Tr_{M/Q}(μ^{e+f} · p_{j+k})` built from Newton power sums of `g`,
    /// must equal the stored `abs_disc`. Secondary check, when
    /// `Res(g, ḡ) ≠ 0`: `|disc(g·ḡ)| = J(ξ)² · D_O`.
    pub fn check_disc_relation(&self) -> Result<bool, IndexError> {
        let gram = self.trace_gram_det();
        if gram != self.abs_disc {
            return Ok(false);
        }
        let gbar = conj_poly(&self.g);
        let r = resultant(&self.g, &gbar).map_err(|e| IndexError::Invariant(e.to_string()))?;
        if !r.is_zero() {
            let j = self.xi().j_value()?;
            let octic = rational_poly(&self.g.mul(&gbar)).ok_or_else(|| {
                IndexError::Invariant("g·ḡ is not conjugation-fixed".into())
            })?;
            let disc8 = discriminant_int(&octic)
                .map_err(|e| IndexError::Invariant(e.to_string()))?;
            if disc8.abs() != &j * &j * &self.abs_disc {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn trace_gram_det(&self) -> BigInt {
        // Newton power sums p_k = Tr_{K/M}(ξ^k) for k = 0..6.
        let f = self.field;
        let e1 = self.g.coeff(3).neg();
        let e2 = self.g.coeff(2);
        let e3 = self.g.coeff(1).neg();
        let e4 = self.g.coeff(0);
        let mut p: Vec<QuadInt> = vec![f.int(4, 0)];
        p.push(e1.clone());
        p.push(e1.mul(&p[1]).sub(&e2.scale(&BigInt::from(2))));
        p.push(
            e1.mul(&p[2])
                .sub(&e2.mul(&p[1]))
                .add(&e3.scale(&BigInt::from(3))),
        );
        p.push(
            e1.mul(&p[3])
                .sub(&e2.mul(&p[2]))
                .add(&e3.mul(&p[1]))
                .sub(&e4.scale(&BigInt::from(4))),
        );
        for k in 5..=6usize {
            let next = e1
                .mul(&p[k - 1])
                .sub(&e2.mul(&p[k - 2]))
                .add(&e3.mul(&p[k - 3]))
                .sub(&e4.mul(&p[k - 4]));
            p.push(next);
        }
        let mu_pows = [f.one(), f.mu(), f.mu().mul(&f.mu())];
        let mut gram = vec![vec![BigInt::zero(); 8]; 8];
        for e in 0..2usize {
            for j in 0..4usize {
                for fe in 0..2usize {
                    for k in 0..4usize {
                        let v = mu_pows[e + fe].mul(&p[j + k]);
                        gram[e * 4 + j][fe * 4 + k] = v.trace();
                    }
                }
            }
        }
        det_bareiss(gram)
    }
}

/// Coefficientwise complex conjugate of a polynomial over `Z_M`.
pub fn conj_poly(p: &UPoly<QuadInt>) -> UPoly<QuadInt> {
    p.map(|c| c.conj())
}

/// Projects a conjugation-fixed polynomial over `Z_M` down to `Z`, or `None`
/// if any coefficient has a nonzero `μ`-coordinate.
pub fn rational_poly(p: &UPoly<QuadInt>) -> Option<UPoly<BigInt>> {
    if p.coeffs().iter().any(|c| !c.is_rational()) {
        return None;
    }
    Some(p.map(|c| c.a().clone()))
}

/// An element `A + Xξ + Yξ² + Zξ³` of a [`RelQuarticOrder`].
#[derive(Debug, Clone, PartialEq)]
pub struct OcticElement<'o> {
    order: &'o RelQuarticOrder,
    a: QuadInt,
    x: QuadInt,
    y: QuadInt,
    z: QuadInt,
}

/// Result of a successful absolute-index computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    pub rel_index: BigInt,
    pub j_value: BigInt,
    pub abs_index: BigInt,
    pub primitive_rel: bool,
    pub primitive_abs: bool,
}

impl Serialize for IndexReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("IndexReport", 5)?;
        st.serialize_field("rel_index", &self.rel_index.to_string())?;
        st.serialize_field("j_value", &self.j_value.to_string())?;
        st.serialize_field("abs_index", &self.abs_index.to_string())?;
        st.serialize_field("primitive_rel", &self.primitive_rel)?;
        st.serialize_field("primitive_abs", &self.primitive_abs)?;
        st.end()
    }
}

fn mat_mul(a: &[Vec<QuadInt>], b: &[Vec<QuadInt>]) -> Vec<Vec<QuadInt>> {
    let n = a.len();
    let zero = a[0][0].field().zero();
    let mut out = vec![vec![zero; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

impl<'o> OcticElement<'o> {
    pub fn order(&self) -> &'o RelQuarticOrder {
        self.order
    }

    pub fn coords(&self) -> (&QuadInt, &QuadInt, &QuadInt, &QuadInt) {
        (&self.a, &self.x, &self.y, &self.z)
    }

    /// Multiplication-by-`α` matrix on the basis `{1, ξ, ξ², ξ³}`.
    fn mult_matrix(&self) -> Vec<Vec<QuadInt>> {
        let f = self.order.field;
        let c1 = self.order.companion();
        let c2 = mat_mul(&c1, &c1);
        let c3 = mat_mul(&c2, &c1);
        let mut m = vec![vec![f.zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut v = c1[i][j].mul(&self.x);
                v = v.add(&c2[i][j].mul(&self.y));
                v = v.add(&c3[i][j].mul(&self.z));
                if i == j {
                    v = v.add(&self.a);
                }
                m[i][j] = v;
            }
        }
        m
    }

    /// Characteristic polynomial of `α` over `M`: `det(xI − M_α)`, computed
    /// division-free. Always monic of degree 4.
    pub fn rel_char_poly(&self) -> UPoly<QuadInt> {
        let f = self.order.field;
        let m = self.mult_matrix();
        let mut pm: Vec<Vec<UPoly<QuadInt>>> = Vec::with_capacity(4);
        for (i, m_row) in m.iter().enumerate() {
            let mut row = Vec::with_capacity(4);
            for (j, entry) in m_row.iter().enumerate() {
                if i == j {
                    row.push(UPoly::new(vec![entry.neg(), f.one()]));
                } else {
                    row.push(UPoly::constant(entry.neg()));
                }
            }
            pm.push(row);
        }
        let witness = UPoly::constant(f.zero());
        let h = det_division_free(&pm, &witness);
        debug_assert_eq!(h.degree(), Some(4));
        debug_assert!(h.is_monic());
        h
    }

    /// Relative index `I_{O/M}(α)`, the exact square root of
    /// `|N(disc h)| / |N(disc g)|`.
    pub fn rel_index(&self) -> Result<BigInt, IndexError> {
        if self.order.is_degenerate() {
            return Err(IndexError::DegenerateOrder);
        }
        let h = self.rel_char_poly();
        let dh = discriminant(&h).expect("monic quartic has a discriminant");
        if dh.is_zero() {
            return Err(IndexError::NotPrimitive);
        }
        let num = dh.norm();
        let den = self.order.rel_disc.norm();
        let (q, r) = num_integer::Integer::div_rem(&num, &den);
        if !r.is_zero() {
            return Err(IndexError::InexactSqrt);
        }
        let s = q.sqrt();
        if &s * &s != q {
            return Err(IndexError::InexactSqrt);
        }
        Ok(s)
    }

    /// Co-index `J(α) = |Res(h, h̄)| / D_M²`.
    ///
    /// The resultant is conjugation-fixed (swapping `h` and `h̄` conjugates
    /// it while `(−1)^{4·4}` leaves the sign alone), so it lies in `Z`; the
    /// division by `D_M²` must then be exact for a well-formed element.
    pub fn j_value(&self) -> Result<BigInt, IndexError> {
        let h = self.rel_char_poly();
        let hbar = conj_poly(&h);
        let r = resultant(&h, &hbar).map_err(|e| IndexError::Invariant(e.to_string()))?;
        if r.is_zero() {
            return Err(IndexError::NotPrimitiveAbs);
        }
        if !r.is_rational() {
            return Err(IndexError::Invariant(format!(
                "Res(h, h̄) = {} is not conjugation-fixed",
                r
            )));
        }
        let dm = self.order.field.disc();
        let dm2 = &dm * &dm;
        let (q, rem) = num_integer::Integer::div_rem(&r.a().abs(), &dm2);
        if !rem.is_zero() {
            return Err(IndexError::InexactDivision);
        }
        Ok(q)
    }

    /// Absolute index `I_O(α) = I_{O/M}(α) · J(α)`, with the defining
    /// relation `I_O(α)² · D_O = |disc(h·h̄)|` re-verified on every call.
    pub fn abs_index(&self) -> Result<IndexReport, IndexError> {
        let rel = self.rel_index()?;
        let j = self.j_value()?;
        let abs = &rel * &j;
        let h = self.rel_char_poly();
        let octic = rational_poly(&h.mul(&conj_poly(&h)))
            .ok_or_else(|| IndexError::Invariant("h·h̄ is not conjugation-fixed".into()))?;
        let disc8 = discriminant_int(&octic).map_err(|e| IndexError::Invariant(e.to_string()))?;
        if disc8.abs() != &abs * &abs * &self.order.abs_disc {
            return Err(IndexError::Invariant(format!(
                "abs-index relation failed: |disc(h·h̄)| = {} but I²·D_O = {}",
                disc8.abs(),
                &abs * &abs * &self.order.abs_disc
            )));
        }
        Ok(IndexReport {
            rel_index: rel,
            j_value: j,
            abs_index: abs,
            primitive_rel: true,
            primitive_abs: true,
        })
    }
}

/// Which generator-equivalence to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivMode {
    /// `α ∼ α′` when they differ by a rational-integer translation and a
    /// global sign: PIB generators of the same order come in such classes.
    Abs,
    /// `α ∼ α′` when `(X, Y, Z)` differ by a unit factor of `Z_M`; the `A`
    /// coordinate is free because relative generators absorb any `Z_M`
    /// translation.
    Rel,
}

/// Decides equivalence of two elements of the same order.
pub fn are_equivalent(e1: &OcticElement<'_>, e2: &OcticElement<'_>, mode: EquivMode) -> bool {
    if e1.order != e2.order {
        return false;
    }
    let (a1, x1, y1, z1) = e1.coords();
    let (a2, x2, y2, z2) = e2.coords();
    match mode {
        EquivMode::Abs => {
            for sign in [1i64, -1] {
                let s = BigInt::from(sign);
                if *x1 == x2.scale(&s)
                    && *y1 == y2.scale(&s)
                    && *z1 == z2.scale(&s)
                    && a1.sub(&a2.scale(&s)).is_rational()
                {
                    return true;
                }
            }
            false
        }
        EquivMode::Rel => {
            for u in e1.order.field.units() {
                if *x1 == x2.mul(&u) && *y1 == y2.mul(&u) && *z1 == z2.mul(&u) {
                    return true;
                }
            }
            let _ = a1;
            false
        }
    }
}
