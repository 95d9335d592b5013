//! Quartic resolvent machinery: the cubic form `F`, the quadratics `Q1, Q2`,
//! unit-splitting, and a bounded relative Thue oracle for the `D4` family.
//!
//! For a monic quartic `g = x⁴ + a₁x³ + a₂x² + a₃x + a₄` over `Z_M`, the
//! relative index of `α = A + Xξ + Yξ² + Zξ³` depends only on `(X, Y, Z)`
//! and factors through two quadratics and a cubic:
//!
//! ```text
//! Q1 = x² − a₁xy + a₂y² + (a₁²−2a₂)xz + (a₃−a₁a₂)yz + (−a₁a₃+a₂²+a₄)z²
//! Q2 = y² − xz − a₁yz + a₂z²
//! F(u,v) = u³ − a₂u²v + (a₁a₃−4a₄)uv² + (4a₂a₄−a₃²−a₁²a₄)v³
//! |N_{M/Q}(F(Q1(X,Y,Z), Q2(X,Y,Z)))| = I_{O/M}(α)
//! ```
//!
//! so `α` is a
//! relative generator exactly when `F(Q1, Q2)` evaluates to a unit of `Z_M`.
//! When `F` splits into three linear factors over `Z_M`, a relative
//! generator forces each factor to take a unit value; [`solve_uv_split`]
//! resolves the resulting 2×2 unit systems exactly and keeps only solutions
//! the third factor confirms.
//!
//! For the `D4` family the remaining quartic Thue equation
//! `P⁴ − 2iT²P²Q² + Q⁴ = unit` over `Z[i]` is searched exhaustively inside a
//! coordinate box by [`thue_bounded_search`]. A norm inequality shows any
//! solution with both entries nonzero satisfies
//! `N(Q) ≥ (2T² − 2)·N(P)` (after ordering `N(P) ≤ N(Q)`), which prunes the
//! search to a thin region and makes boxes of radius several hundred cheap.
//! The search is complete within its box; it is an oracle for cross-checking
//! candidate lists, not a proof of completeness beyond the box.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use std::collections::BTreeSet;
use thiserror::Error;

use crate::polyarith::UPoly;
use crate::quadring::{BasisKind, QuadField, QuadInt};

/// Errors raised by resolvent construction and the solvers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuartError {
    #[error("resolvent forms require a monic quartic, got degree {0:?}")]
    WrongShape(Option<usize>),
    #[error("the supplied linear factors do not multiply to F")]
    NotSplit,
    #[error("no pair of factors is linearly independent")]
    DegenerateFactors,
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
}

/// The three resolvent forms attached to a monic quartic.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventForms {
    field: QuadField,
    /// `F` coefficients in the order `[u³, u²v, uv², v³]`.
    pub f: [QuadInt; 4],
    /// `Q1` coefficients in the order `[x², xy, y², xz, yz, z²]`.
    pub q1: [QuadInt; 6],
    /// `Q2` coefficients in the same order.
    pub q2: [QuadInt; 6],
}

/// Builds the resolvent forms of a monic quartic over `Z_M`.
pub fn resolvent_forms(g: &UPoly<QuadInt>) -> Result<ResolventForms, QuartError> {
    if g.degree() != Some(4) || !g.is_monic() {
        return Err(QuartError::WrongShape(g.degree()));
    }
    let field = g.coeffs()[0].field();
    let a1 = g.coeff(3);
    let a2 = g.coeff(2);
    let a3 = g.coeff(1);
    let a4 = g.coeff(0);
    let one = field.one();
    let four = field.int(4, 0);
    let two = field.int(2, 0);

    let f = [
        one.clone(),
        a2.neg(),
        a1.mul(&a3).sub(&four.mul(&a4)),
        four.mul(&a2).mul(&a4).sub(&a3.mul(&a3)).sub(&a1.mul(&a1).mul(&a4)),
    ];
    let q1 = [
        one.clone(),
        a1.neg(),
        a2.clone(),
        a1.mul(&a1).sub(&two.mul(&a2)),
        a3.sub(&a1.mul(&a2)),
        a2.mul(&a2).add(&a4).sub(&a1.mul(&a3)),
    ];
    let q2 = [
        field.zero(),
        field.zero(),
        one,
        field.int(-1, 0),
        a1.neg(),
        a2,
    ];
    Ok(ResolventForms { field, f, q1, q2 })
}

impl ResolventForms {
    pub fn field(&self) -> QuadField {
        self.field
    }

    /// Evaluates the cubic `F(u, v)`.
    pub fn eval_f(&self, u: &QuadInt, v: &QuadInt) -> QuadInt {
        let u2 = u.mul(u);
        let v2 = v.mul(v);
        self.f[0]
            .mul(&u2)
            .mul(u)
            .add(&self.f[1].mul(&u2).mul(v))
            .add(&self.f[2].mul(u).mul(&v2))
            .add(&self.f[3].mul(&v2).mul(v))
    }

    fn eval_quadratic(c: &[QuadInt; 6], x: &QuadInt, y: &QuadInt, z: &QuadInt) -> QuadInt {
        c[0].mul(x)
            .mul(x)
            .add(&c[1].mul(x).mul(y))
            .add(&c[2].mul(y).mul(y))
            .add(&c[3].mul(x).mul(z))
            .add(&c[4].mul(y).mul(z))
            .add(&c[5].mul(z).mul(z))
    }

    pub fn eval_q1(&self, x: &QuadInt, y: &QuadInt, z: &QuadInt) -> QuadInt {
        Self::eval_quadratic(&self.q1, x, y, z)
    }

    pub fn eval_q2(&self, x: &QuadInt, y: &QuadInt, z: &QuadInt) -> QuadInt {
        Self::eval_quadratic(&self.q2, x, y, z)
    }
}

/// Evaluates the sextic index form `F(Q1, Q2)` at coordinates `(X, Y, Z)`.
///
/// The value is a unit iff the element is a relative generator, zero iff it
/// is relatively non-primitive, and in general its absolute norm equals the
/// relative index.
pub fn index_form_eval(
    forms: &ResolventForms,
    x: &QuadInt,
    y: &QuadInt,
    z: &QuadInt,
) -> QuadInt {
    let u = forms.eval_q1(x, y, z);
    let v = forms.eval_q2(x, y, z);
    forms.eval_f(&u, &v)
}

/// One solution of the split unit system.
#[derive(Debug, Clone, PartialEq)]
pub struct UVSolution {
    pub u: QuadInt,
    pub v: QuadInt,
    /// `F(u, v)`, always a unit.
    pub eps: QuadInt,
}

/// Solves `F(u, v) = unit` given a factorization of `F` into three linear
/// forms `lᵢ(u, v) = aᵢu + bᵢv` over `Z_M`.
///
/// The factorization is verified coefficientwise against `F` first
/// ([`QuartError::NotSplit`] on mismatch). A unit value of `F` forces every
/// `lᵢ` to a unit, so two independent factors pin `(u, v)` by Cramer's rule
/// for each pair of unit right-hand sides; candidates whose third factor
/// value is not a unit are discarded. That last filter is essential: for
/// some parameter choices the 2×2 systems admit spurious integral solutions.
pub fn solve_uv_split(
    forms: &ResolventForms,
    factors: &[[QuadInt; 2]; 3],
) -> Result<Vec<UVSolution>, QuartError> {
    let field = forms.field;
    // ∏ (aᵢ u + bᵢ v) expanded.
    let (a0, b0) = (&factors[0][0], &factors[0][1]);
    let (a1, b1) = (&factors[1][0], &factors[1][1]);
    let (a2, b2) = (&factors[2][0], &factors[2][1]);
    let c_u3 = a0.mul(a1).mul(a2);
    let c_u2v = a0.mul(a1).mul(b2).add(&a0.mul(b1).mul(a2)).add(&b0.mul(a1).mul(a2));
    let c_uv2 = a0.mul(b1).mul(b2).add(&b0.mul(a1).mul(b2)).add(&b0.mul(b1).mul(a2));
    let c_v3 = b0.mul(b1).mul(b2);
    if [&c_u3, &c_u2v, &c_uv2, &c_v3]
        .iter()
        .zip(forms.f.iter())
        .any(|(got, want)| **got != *want)
    {
        return Err(QuartError::NotSplit);
    }

    // Pick a linearly independent pair to solve with; the leftover factor
    // becomes the checker.
    let pairs = [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)];
    let mut chosen = None;
    for (i, j, k) in pairs {
        let det = factors[i][0]
            .mul(&factors[j][1])
            .sub(&factors[j][0].mul(&factors[i][1]));
        if !det.is_zero() {
            chosen = Some((i, j, k, det));
            break;
        }
    }
    let Some((i, j, k, det)) = chosen else {
        return Err(QuartError::DegenerateFactors);
    };

    let units = field.units();
    let mut out: Vec<UVSolution> = Vec::new();
    for e_i in &units {
        for e_j in &units {
            // aᵢu + bᵢv = εᵢ, aⱼu + bⱼv = εⱼ.
            let num_u = e_i.mul(&factors[j][1]).sub(&e_j.mul(&factors[i][1]));
            let num_v = factors[i][0].mul(e_j).sub(&factors[j][0].mul(e_i));
            let (Ok(u), Ok(v)) = (num_u.exact_div(&det), num_v.exact_div(&det)) else {
                continue;
            };
            let third = factors[k][0].mul(&u).add(&factors[k][1].mul(&v));
            if !third.is_unit() {
                continue;
            }
            if out.iter().any(|s| s.u == u && s.v == v) {
                continue;
            }
            let eps = forms.eval_f(&u, &v);
            debug_assert!(eps.is_unit());
            out.push(UVSolution { u, v, eps });
        }
    }
    out.sort_by(|s, t| s.u.coord_cmp(&t.u).then_with(|| s.v.coord_cmp(&t.v)));
    Ok(out)
}

/// Maps a Thue pair `(P, Q)` over `Z[i]` to the coordinates of a `D4`
/// relative generator: `(X, Y, Z) = (P² − 2iT²Q², PQ, Q²)`.
pub fn parametrize_d4(p: &QuadInt, q: &QuadInt, t: i64) -> (QuadInt, QuadInt, QuadInt) {
    let field = p.field();
    assert!(
        field.d() == 1 && field.basis() == BasisKind::Sqrt,
        "D4 parametrization lives over Q(i)"
    );
    let coeff = field.make(BigInt::from(0), BigInt::from(-2) * t * t);
    let x = p.mul(p).add(&coeff.mul(&q.mul(q)));
    let y = p.mul(q);
    let z = q.mul(q);
    (x, y, z)
}

/// A canonical representative of a joint-unit orbit `{(uP, uQ)}` of Thue
/// solutions, stored as Gaussian coordinate pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ThueClass {
    pub p: (i64, i64),
    pub q: (i64, i64),
    /// Value of `P⁴ − 2iT²P²Q² + Q⁴`, invariant on the orbit.
    pub unit: (i64, i64),
}

fn gmul(a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn gnorm(a: (i128, i128)) -> i128 {
    a.0 * a.0 + a.1 * a.1
}

fn thue_form(t: i128, p: (i128, i128), q: (i128, i128)) -> (i128, i128) {
    let p2 = gmul(p, p);
    let q2 = gmul(q, q);
    let p4 = gmul(p2, p2);
    let q4 = gmul(q2, q2);
    let cross = gmul((0, -2 * t * t), gmul(p2, q2));
    (p4.0 + cross.0 + q4.0, p4.1 + cross.1 + q4.1)
}

fn canonical_class(p: (i128, i128), q: (i128, i128)) -> (i64, i64, i64, i64) {
    const UNITS: [(i128, i128); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    UNITS
        .iter()
        .map(|&u| {
            let up = gmul(u, p);
            let uq = gmul(u, q);
            (up.0 as i64, up.1 as i64, uq.0 as i64, uq.1 as i64)
        })
        .min()
        .unwrap()
}

/// Exhaustively solves `P⁴ − 2iT²P²Q² + Q⁴ ∈ Z[i]^×` for Gaussian integers
/// whose coordinates all lie in `[−bound, bound]`, returning one
/// representative per joint-unit orbit, sorted.
///
/// Completeness inside the box follows from exhaustion plus the norm
/// inequality `2T²·N(P)N(Q) ≤ N(P)² + N(Q)² + 1`, which for `|T| ≥ 2` and
/// `N(P) ≤ N(Q)` forces `N(Q) ≥ (2T²−2)·N(P)` and so confines the smaller
/// entry to a tiny disk. For `|T| = 1` no pruning applies and the box is
/// capped to keep the quartic scan affordable.
pub fn thue_bounded_search(t: i64, bound: i64) -> Result<Vec<ThueClass>, QuartError> {
    if t == 0 {
        return Err(QuartError::InvalidParams("T must be nonzero".into()));
    }
    if bound < 1 {
        return Err(QuartError::InvalidParams("bound must be positive".into()));
    }
    if t.abs() > 10_000 || bound > 10_000 {
        return Err(QuartError::InvalidParams(
            "|T| and bound are capped at 10000 to keep exact arithmetic in range".into(),
        ));
    }
    if t.abs() == 1 && bound > 50 {
        return Err(QuartError::InvalidParams(
            "for |T| = 1 the unpruned scan is quartic in the bound; use bound ≤ 50".into(),
        ));
    }
    let t128 = t as i128;
    let b = bound as i128;
    let mut classes: BTreeSet<(i64, i64, i64, i64)> = BTreeSet::new();

    // Axis solutions: one of P, Q zero forces the other to be a unit.
    for u in [(1i128, 0i128), (0, 1), (-1, 0), (0, -1)] {
        classes.insert(canonical_class(u, (0, 0)));
        classes.insert(canonical_class((0, 0), u));
    }

    // Both nonzero: order so N(P) ≤ N(Q); enumerate the small disk for P.
    let prune = 2 * t128 * t128 - 2;
    let p_norm_cap = if prune >= 2 {
        (2 * b * b) / prune + 1
    } else {
        2 * b * b
    };
    let mut p_points: Vec<(i128, i128)> = Vec::new();
    for pa in -b..=b {
        for pb in -b..=b {
            if (pa, pb) == (0, 0) {
                continue;
            }
            if gnorm((pa, pb)) <= p_norm_cap {
                p_points.push((pa, pb));
            }
        }
    }

    let q_rows: Vec<i128> = (-b..=b).collect();
    let rows: Vec<Vec<(i64, i64, i64, i64)>> = q_rows
        .par_iter()
        .map(|&qa| {
            let mut local = Vec::new();
            for qb in -b..=b {
                let q = (qa, qb);
                if q == (0, 0) {
                    continue;
                }
                let nq = gnorm(q);
                for &p in &p_points {
                    let np = gnorm(p);
                    if np > nq {
                        continue;
                    }
                    if prune >= 2 && nq < prune * np {
                        continue;
                    }
                    if gnorm(thue_form(t128, p, q)) == 1 {
                        local.push(canonical_class(p, q));
                        local.push(canonical_class(q, p));
                    }
                }
            }
            local
        })
        .collect();
    for row in rows {
        classes.extend(row);
    }

    let out = classes
        .into_iter()
        .map(|(pa, pb, qa, qb)| {
            let unit = thue_form(t128, (pa as i128, pb as i128), (qa as i128, qb as i128));
            debug_assert_eq!(gnorm(unit), 1);
            ThueClass {
                p: (pa, pb),
                q: (qa, qb),
                unit: (unit.0 as i64, unit.1 as i64),
            }
        })
        .collect();
    Ok(out)
}

/// Convenience: `|N_{M/Q}(index form)|` as used by the identity tests.
pub fn index_form_norm(forms: &ResolventForms, x: &QuadInt, y: &QuadInt, z: &QuadInt) -> BigInt {
    index_form_eval(forms, x, y, z).norm().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexcore::{IndexError, RelQuarticOrder};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn d4_g(t: i64) -> UPoly<QuadInt> {
        let f = QuadField::new(1, BasisKind::Sqrt).unwrap();
        UPoly::new(vec![f.one(), f.zero(), f.int(0, -2 * t * t), f.zero(), f.one()])
    }

    fn d4_factors(t: i64, f: QuadField) -> [[QuadInt; 2]; 3] {
        [
            [f.one(), f.int(0, 2 * t * t)],
            [f.one(), f.int(-2, 0)],
            [f.one(), f.int(2, 0)],
        ]
    }

    #[test]
    fn pure_quartic_resolvent() {
        // g = x⁴ + a₄ has F = u³ − 4a₄·uv².
        let f = QuadField::for_d(7).unwrap();
        let g = UPoly::new(vec![f.int(5, 0), f.zero(), f.zero(), f.zero(), f.one()]);
        let forms = resolvent_forms(&g).unwrap();
        assert_eq!(forms.f[0], f.one());
        assert_eq!(forms.f[1], f.zero());
        assert_eq!(forms.f[2], f.int(-20, 0));
        assert_eq!(forms.f[3], f.zero());
        let bad = UPoly::new(vec![f.one(), f.one()]);
        assert_eq!(resolvent_forms(&bad).unwrap_err(), QuartError::WrongShape(Some(1)));
    }

    #[test]
    fn index_form_reference_points() {
        let t = 3i64;
        let g = d4_g(t);
        let f = g.coeffs()[0].field();
        let forms = resolvent_forms(&g).unwrap();
        // ξ itself.
        let v = index_form_eval(&forms, &f.one(), &f.zero(), &f.zero());
        assert_eq!(v, f.one());
        // The candidate (−2iT², 0, 1).
        let v = index_form_eval(&forms, &f.int(0, -2 * t * t), &f.zero(), &f.one());
        assert_eq!(v, f.one());
        // ξ² is not even relatively primitive.
        let v = index_form_eval(&forms, &f.zero(), &f.one(), &f.zero());
        assert!(v.is_zero());
    }

    #[test]
    fn d4_split_solutions() {
        let t = 12i64;
        let g = d4_g(t);
        let f = g.coeffs()[0].field();
        let forms = resolvent_forms(&g).unwrap();
        let sols = solve_uv_split(&forms, &d4_factors(t, f)).unwrap();
        // V = 0 and U a unit, once per unit.
        assert_eq!(sols.len(), 4);
        for s in &sols {
            assert!(s.v.is_zero());
            assert!(s.u.is_unit());
            assert!(s.eps.is_unit());
        }
        // A wrong factorization is rejected.
        let bad = [
            [f.one(), f.int(0, 2 * t * t)],
            [f.one(), f.int(-2, 0)],
            [f.one(), f.int(3, 0)],
        ];
        assert_eq!(solve_uv_split(&forms, &bad).unwrap_err(), QuartError::NotSplit);
    }

    #[test]
    fn parametrization_class_map() {
        let t = 12i64;
        let f = QuadField::new(1, BasisKind::Sqrt).unwrap();
        let t4 = t * t * t * t;
        let cases = [
            ((1i64, 0i64), (0i64, 0i64), (1i64, 0i64), (0i64, 0i64), (0i64, 0i64)),
            ((0, 0), (1, 0), (0, -2 * t * t), (0, 0), (1, 0)),
            ((1, 0), (t, t), (1 + 4 * t4, 0), (t, t), (0, 2 * t * t)),
            ((t, t), (1, 0), (0, 0), (t, t), (1, 0)),
        ];
        for (p, q, ex, ey, ez) in cases {
            let (x, y, z) = parametrize_d4(&f.int(p.0, p.1), &f.int(q.0, q.1), t);
            assert_eq!(x, f.int(ex.0, ex.1));
            assert_eq!(y, f.int(ey.0, ey.1));
            assert_eq!(z, f.int(ez.0, ez.1));
        }
    }

    #[test]
    fn thue_search_frozen_counts() {
        let classes = thue_bounded_search(12, 30).unwrap();
        assert_eq!(classes.len(), 6);
        let expected: Vec<((i64, i64), (i64, i64))> = vec![
            ((-12, -12), (-1, 0)),
            ((-12, -12), (1, 0)),
            ((-1, 0), (-12, -12)),
            ((-1, 0), (0, 0)),
            ((-1, 0), (12, 12)),
            ((0, 0), (-1, 0)),
        ];
        let got: Vec<((i64, i64), (i64, i64))> =
            classes.iter().map(|c| (c.p, c.q)).collect();
        assert_eq!(got, expected);
        for c in &classes {
            assert_eq!(c.unit, (1, 0));
        }
        // Shrinking the box drops the |coordinate| = 12 orbits.
        let classes = thue_bounded_search(12, 5).unwrap();
        assert_eq!(classes.len(), 2);
        // Parameter validation.
        assert!(thue_bounded_search(0, 10).is_err());
        assert!(thue_bounded_search(12, 0).is_err());
        assert!(thue_bounded_search(1, 51).is_err());
        assert!(thue_bounded_search(20_000, 10).is_err());
    }

    #[test]
    fn parametrized_classes_are_generators() {
        let t = 12i64;
        let g = d4_g(t);
        let f = g.coeffs()[0].field();
        let order = RelQuarticOrder::new(f, g.clone()).unwrap();
        let forms = resolvent_forms(&g).unwrap();
        for c in thue_bounded_search(t, 3 * t).unwrap() {
            let (x, y, z) = parametrize_d4(&f.int(c.p.0, c.p.1), &f.int(c.q.0, c.q.1), t);
            let val = index_form_eval(&forms, &x, &y, &z);
            assert!(val.is_unit(), "{} {} {} gave {}", x, y, z, val);
            let elem = order.element(f.zero(), x, y, z);
            assert_eq!(elem.rel_index().unwrap(), num_bigint::BigInt::from(1));
        }
    }

    fn arb_coord() -> impl Strategy<Value = (i64, i64)> {
        (-4i64..=4, -4i64..=4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn index_form_identity(x in arb_coord(), y in arb_coord(), z in arb_coord(),
                               t in 1i64..4) {
            let g = d4_g(t);
            let f = g.coeffs()[0].field();
            let order = RelQuarticOrder::new(f, g.clone()).unwrap();
            let forms = resolvent_forms(&g).unwrap();
            let elem = order.element_i64((0, 0), x, y, z);
            let n = index_form_norm(&forms, &f.int(x.0, x.1), &f.int(y.0, y.1), &f.int(z.0, z.1));
            match elem.rel_index() {
                Ok(idx) => prop_assert_eq!(n, idx),
                Err(IndexError::NotPrimitive) => prop_assert!(n.is_zero()),
                Err(e) => return Err(TestCaseError::fail(format!("unexpected: {e}"))),
            }
        }

        #[test]
        fn index_form_is_homogeneous_of_degree_six(x in arb_coord(), y in arb_coord(),
                                                   z in arb_coord(), lam in arb_coord()) {
            let g = d4_g(2);
            let f = g.coeffs()[0].field();
            let forms = resolvent_forms(&g).unwrap();
            let l = f.int(lam.0, lam.1);
            let v1 = index_form_eval(&forms,
                &f.int(x.0, x.1).mul(&l), &f.int(y.0, y.1).mul(&l), &f.int(z.0, z.1).mul(&l));
            let v0 = index_form_eval(&forms, &f.int(x.0, x.1), &f.int(y.0, y.1), &f.int(z.0, z.1));
            prop_assert_eq!(v1, v0.mul(&l.pow(6)));
        }
    }
}
