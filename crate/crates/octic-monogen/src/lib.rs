//! Exact index computations in quartic extensions of imaginary quadratic fields.
//!
//! Given an imaginary quadratic field `M = Q(i√d)` and an order `O = Z_M[ξ]`
//! defined by a monic quartic `g` over `Z_M`, every element
//! `α = A + Xξ + Yξ² + Zξ³` has
//!
//! * a *relative index* `I_{O/M}(α) = (O⁺ : Z_M[α]⁺)`, computable as the exact
//!   square root of `|N_{M/Q}(disc h)| / |N_{M/Q}(disc g)|` where `h` is the
//!   characteristic polynomial of `α` over `M`,
//! * a *co-index* `J(α) = (Z_M[α]⁺ : Z[α]⁺) = |Res(h, h̄)| / D_M²` where `h̄`
//!   is the coefficient conjugate of `h`, and
//! * an *absolute index* `I_O(α) = I_{O/M}(α) · J(α)`.
//!
//! `α` generates a power integral basis (PIB) of `O` iff `I_O(α) = 1`, which
//! forces both factors to be 1. The library implements the resulting
//! two-step search — enumerate relative generators, then decide `J(α) = 1`
//! through a degree-16 integer polynomial in the coordinate `a₂` of
//! `A = a₁ + a₂μ₂` — for three families of octic orders:
//!
//! * `D4`: `g = x⁴ − 2iT²x² + 1` over `Q(i)` (from `x⁸ + (4T⁴+2)x⁴ + 1`),
//! * `COMPOSITE`: `g = x⁴ − m` over `Q(i√d)`, `d ≡ 3 (mod 4)`,
//! * `PARAM_I` / `PARAM_II`: `g = x⁴ − t²x² + 1` and
//!   `g = x⁴ − 4tx³ + (6t+2)x² + 4tx + 1` with `t ∈ Z_M`.
//!
//! All arithmetic is exact: arbitrary-precision integers, division-free
//! resultants, and integer Sturm sequences. No floating point participates in
//! any verdict.
//!
//! Module map:
//!
//! * [`quadring`] — `Z_M` arithmetic for both integral-basis shapes.
//! * [`polyarith`] — univariate polynomials over pluggable coefficient rings,
//!   resultants, discriminants, integer root search.
//! * [`indexcore`] — relative/absolute indices, `J`, discriminant relation,
//!   equivalence of generators.
//! * [`quartsolve`] — quartic resolvent forms, the index-form identity, the
//!   `D4` parametrization and a bounded relative Thue oracle.
//! * [`families`] — the three families, `J`-polynomials, divisibility and PIB
//!   verdicts, the end-to-end pipeline.
//! * [`cli`] — command-line front end with versioned JSON reports.

pub mod cli;
pub mod families;
pub mod indexcore;
pub mod polyarith;
pub mod quadring;
pub mod quartsolve;
