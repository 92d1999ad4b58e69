//! The vertex Lie structure `(Y₋, ∂)` on the algebra, its half
//! skew-symmetry and half commutator checks, the symmetric-algebra vertex
//! Poisson extension, and the Novikov product the quadratic part encodes.
//!
//! `Y₋(J_i, z)J_k = (i+1)∂J_{i+k} z⁻¹ + (i+k+2)J_{i+k} z⁻²` packages the
//! n-products as a generating function; everything here manipulates such
//! distributions exactly, expanding `(z₁−z₂)^{−n}` in the |z₁|>|z₂| domain
//! and truncating through `Sing`, which loses nothing on singular parts.

use std::fmt;

use crate::conformal::{AlgebraError, AlgebraSpec, ConformalElement, GeneratorIndex};
use crate::laurent::{Dist, DistCoeff};
use crate::poly::{Monomial, Poly};
use crate::report::CheckReport;
use crate::scalar::Scalar;
use crate::vars::Var;

impl<C: Scalar> DistCoeff for ConformalElement<C> {
    type Scalar = C;
    fn zero() -> Self {
        ConformalElement::zero()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, c: &C) -> Self {
        ConformalElement::scale(self, c)
    }
    fn apply_partial(&self) -> Self {
        ConformalElement::apply_partial(self)
    }
}

/// A coordinate of the free differential algebra `S(ℂ[∂] ⊗ V)`: the symbol
/// `x_{gen, dpow}` stands for `∂^dpow J_gen`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SymVar {
    pub gen: usize,
    pub dpow: u32,
}

impl fmt::Display for SymVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dpow == 0 {
            write!(f, "x{}", self.gen)
        } else {
            write!(f, "x{}'{}", self.gen, self.dpow)
        }
    }
}

/// An element of the symmetric algebra: a polynomial in the `x_{i,m}`.
pub type SymElement<C> = Poly<SymVar, C>;

/// The differential-algebra derivation: `∂ x_{i,m} = x_{i,m+1}`, extended by
/// Leibniz.
pub fn sym_partial<C: Scalar>(s: &SymElement<C>) -> SymElement<C> {
    let mut out = SymElement::zero();
    for (m, c) in s.terms() {
        for (v, e) in m.iter() {
            let mut pairs: Vec<(SymVar, u32)> =
                m.iter().map(|(w, k)| if w == v { (w, k - 1) } else { (w, k) }).collect();
            pairs.push((SymVar { gen: v.gen, dpow: v.dpow + 1 }, 1));
            let lowered = Monomial::from_pairs(pairs);
            out.add_assign_ref(&Poly::monomial(lowered, c.clone() * C::int(e as i64)));
        }
    }
    out
}

impl<C: Scalar> DistCoeff for SymElement<C> {
    type Scalar = C;
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, c: &C) -> Self {
        Poly::scale(self, c)
    }
    fn apply_partial(&self) -> Self {
        sym_partial(self)
    }
}

/// Embed a (λ-free, centerless) conformal element into the symmetric
/// algebra: `Σ c ∂^m J_i ↦ Σ c x_{i,m}`.
pub fn sym_of_element<C: Scalar>(x: &ConformalElement<C>) -> Result<SymElement<C>, AlgebraError> {
    if !x.central_coeff().is_zero() {
        return Err(AlgebraError::CenterUnsupported(
            "the symmetric algebra is built over the centerless algebra".into(),
        ));
    }
    let mut out = SymElement::zero();
    for (i, f) in x.iter() {
        for (m, c) in f.terms() {
            let dpow = m.degree_in(Var::Partial);
            if m.total_degree() != dpow {
                return Err(AlgebraError::CenterUnsupported(
                    "symmetric-algebra coefficients must be polynomials in ∂ alone".into(),
                ));
            }
            out.add_assign_ref(&Poly::monomial(
                Monomial::var(SymVar { gen: i, dpow }),
                c.clone(),
            ));
        }
    }
    Ok(out)
}

/// One-variable distributions with algebra-element coefficients.
pub type ElemDist<C> = Dist<i64, ConformalElement<C>>;
/// Two-variable distributions with algebra-element coefficients.
pub type ElemDist2<C> = Dist<(i64, i64), ConformalElement<C>>;
/// One-variable distributions with symmetric-algebra coefficients.
pub type SymDist<C> = Dist<i64, SymElement<C>>;
/// Two-variable distributions with symmetric-algebra coefficients.
pub type SymDist2<C> = Dist<(i64, i64), SymElement<C>>;

/// `Y₋(J_i, z) J_k = Σ_n (J_i (n) J_k) z^{−n−1}`.
pub fn y_minus_generators<C: Scalar>(
    spec: &AlgebraSpec<C>,
    i: GeneratorIndex,
    k: GeneratorIndex,
) -> Result<ElemDist<C>, AlgebraError> {
    let bracket = spec.bracket_generators(i, k, Var::Lambda)?;
    let bound = bracket.degree_in(Var::Lambda);
    let mut out = ElemDist::zero();
    for n in 0..=bound {
        let fact = C::factorial(n);
        let coeff = bracket.map_coeffs(|p| p.coefficient_in(Var::Lambda, n).scale(&fact));
        out.add_term(-(n as i64) - 1, coeff);
    }
    Ok(out)
}

/// `Y₋(a, z)(∂^m J_k)` by translation covariance: apply `f(d/dz)` for the
/// coefficient of each `J_i` in `a`, and `(∂ − d/dz)^m` for the target.
pub fn y_minus<C: Scalar>(
    spec: &AlgebraSpec<C>,
    a: &ConformalElement<C>,
    m: u32,
    k: GeneratorIndex,
) -> Result<ElemDist<C>, AlgebraError> {
    let mut out = ElemDist::zero();
    for (i, f) in a.iter() {
        let mut base = y_minus_generators(spec, i, k)?;
        for _ in 0..m {
            base = base.apply_partial().sub(&base.dz(0));
        }
        for (mono, c) in f.terms() {
            let e = mono.degree_in(Var::Partial);
            debug_assert_eq!(mono.total_degree(), e, "Y₋ arguments live in ℂ[∂]⊗V");
            let mut term = base.clone();
            for _ in 0..e {
                term = term.dz(0);
            }
            out = out.add(&term.scale(c));
        }
    }
    Ok(out)
}

/// `Y₋(a, z)` applied to a general element of ℂ[∂]⊗V (plus a silent center).
pub fn y_minus_elem<C: Scalar>(
    spec: &AlgebraSpec<C>,
    a: &ConformalElement<C>,
    target: &ConformalElement<C>,
) -> Result<ElemDist<C>, AlgebraError> {
    let mut out = ElemDist::zero();
    for (k, g) in target.iter() {
        for (mono, c) in g.terms() {
            let e = mono.degree_in(Var::Partial);
            debug_assert_eq!(mono.total_degree(), e);
            out = out.add(&y_minus(spec, a, e, k)?.scale(c));
        }
    }
    Ok(out)
}

/// Half skew-symmetry on generators:
/// `Y₋(J_i,z)J_j = Sing(e^{z∂} Y₋(J_j,−z)J_i)`.
pub fn check_half_skew<C: Scalar>(
    spec: &AlgebraSpec<C>,
    i: GeneratorIndex,
    j: GeneratorIndex,
) -> Result<CheckReport, AlgebraError> {
    let lhs = y_minus_generators(spec, i, j)?;
    let rhs = y_minus_generators(spec, j, i)?.negate_var(0).sing_exp_partial(0);
    let residual = lhs.sub(&rhs);
    let mut report = CheckReport::new("half-skew", format!("(i,j)=({i},{j})"));
    report.residual("identity", residual.is_zero(), || residual.to_string());
    Ok(report)
}

/// The double product `Y₋(J_i, z₁) Y₋(J_j, z₂) J_k`.
pub fn double_product<C: Scalar>(
    spec: &AlgebraSpec<C>,
    i: GeneratorIndex,
    j: GeneratorIndex,
    k: GeneratorIndex,
) -> Result<ElemDist2<C>, AlgebraError> {
    let inner = y_minus_generators(spec, j, k)?;
    let mut out = ElemDist2::zero();
    for (e2, coeff) in inner.iter() {
        let outer = y_minus_elem(spec, &ConformalElement::generator(i), coeff)?;
        for (e1, c) in outer.iter() {
            out.add_term((*e1, *e2), c.clone());
        }
    }
    Ok(out)
}

/// Multiply a z₂-distribution by the |z₁|>|z₂| expansion of
/// `(z₁−z₂)^{−n−1}` and project onto the singular part — exact, since only
/// finitely many expansion terms can reach negative z₂-powers.
fn mul_binomial_expansion<T: DistCoeff>(
    inner: &Dist<i64, T>,
    n: u32,
) -> Dist<(i64, i64), T> {
    let mut out = Dist::zero();
    for (e2, coeff) in inner.iter() {
        if *e2 >= 0 {
            continue;
        }
        for r in 0..=(-1 - e2) {
            let b = T::Scalar::binomial(n as u64 + r as u64, r as u64);
            out.add_term((-(n as i64) - 1 - r, e2 + r), coeff.scale(&b));
        }
    }
    out
}

/// Half commutator on generators:
/// `Y₋(J_i,z₁)Y₋(J_j,z₂)J_k − Y₋(J_j,z₂)Y₋(J_i,z₁)J_k
///  = Sing(Σ_n (z₁−z₂)^{−n−1} Y₋(J_i (n) J_j, z₂) J_k)`,
/// with `(z₁−z₂)^{−n−1}` expanded in |z₁|>|z₂|. Each field keeps its own
/// variable on the left; only the composition order swaps. (Read that way,
/// the n-product Jacobi identity is exactly the coefficient-wise statement.)
pub fn check_half_commutator<C: Scalar>(
    spec: &AlgebraSpec<C>,
    i: GeneratorIndex,
    j: GeneratorIndex,
    k: GeneratorIndex,
) -> Result<CheckReport, AlgebraError> {
    // second term: inner field in z₁, outer in z₂
    let inner_z1 = y_minus_generators(spec, i, k)?;
    let mut term2 = ElemDist2::zero();
    for (e1, coeff) in inner_z1.iter() {
        let outer = y_minus_elem(spec, &ConformalElement::generator(j), coeff)?;
        for (e2, c) in outer.iter() {
            term2.add_term((*e1, *e2), c.clone());
        }
    }
    let lhs = double_product(spec, i, j, k)?.sub(&term2);
    let bracket = spec.bracket_generators(i, j, Var::Lambda)?;
    let bound = bracket.degree_in(Var::Lambda);
    let mut rhs = ElemDist2::zero();
    for n in 0..=bound {
        let jp = spec.j_product(&ConformalElement::generator(i), &ConformalElement::generator(j), n)?;
        if jp.is_zero() {
            continue;
        }
        let inner = y_minus_elem(spec, &jp, &ConformalElement::generator(k))?;
        rhs = rhs.add(&mul_binomial_expansion(&inner, n));
    }
    let residual = lhs.sub(&rhs.sing());
    let mut report = CheckReport::new("half-commutator", format!("(i,j,k)=({i},{j},{k})"));
    report.residual("identity", residual.is_zero(), || residual.to_string());
    Ok(report)
}

/// The n-th product acting on the symmetric algebra as a derivation:
/// `a_(n)(s·t) = (a_(n)s)·t + s·(a_(n)t)`, agreeing with the algebra
/// n-product on the generators `x_{k,m} = ∂^m J_k`.
pub fn sym_derivation_action<C: Scalar>(
    spec: &AlgebraSpec<C>,
    a: &ConformalElement<C>,
    n: u32,
    s: &SymElement<C>,
) -> Result<SymElement<C>, AlgebraError> {
    let mut out = SymElement::zero();
    for (mono, c) in s.terms() {
        for (v, e) in mono.iter() {
            let acted = spec.j_product(a, &ConformalElement::partial_power(v.gen, v.dpow), n)?;
            let acted = sym_of_element(&acted)?;
            let rest: Vec<(SymVar, u32)> =
                mono.iter().map(|(w, k)| if w == v { (w, k - 1) } else { (w, k) }).collect();
            let rest = Poly::monomial(Monomial::from_pairs(rest), c.clone() * C::int(e as i64));
            out.add_assign_ref(&rest.mul_ref(&acted));
        }
    }
    Ok(out)
}

/// The weak pre-vertex Poisson structure on `S(ℂ[∂]⊗V)`:
/// `Y⁰₋(J_i, z)J_j = (i+1)∂J_{i+j} z⁻¹ + (i+j+2)J_{i+j} z⁻²` (poles ≤ 2).
#[derive(Clone, Copy, Debug, Default)]
pub struct PreVpStructure;

impl PreVpStructure {
    pub fn pair<C: Scalar>(&self, i: GeneratorIndex, j: GeneratorIndex) -> SymDist<C> {
        let mut out = SymDist::zero();
        out.add_term(
            -1,
            Poly::monomial(Monomial::var(SymVar { gen: i + j, dpow: 1 }), C::int(i as i64 + 1)),
        );
        out.add_term(
            -2,
            Poly::monomial(Monomial::var(SymVar { gen: i + j, dpow: 0 }), C::int((i + j) as i64 + 2)),
        );
        out
    }

    /// The tilde extension on a symmetric-algebra element, acting in the
    /// named output variable. On a factor `x_{t,m}` it is
    /// `(∂ − d/dz)^m Y⁰₋(J_u, z)J_t` (the conjugation by `e^{−z₁ d/dz}`
    /// collapsed), extended to products as a derivation.
    pub fn tilde_apply<C: Scalar>(&self, u: GeneratorIndex, s: &SymElement<C>) -> SymDist<C> {
        let mut out = SymDist::zero();
        for (mono, c) in s.terms() {
            for (v, e) in mono.iter() {
                let mut base: SymDist<C> = self.pair(u, v.gen);
                for _ in 0..v.dpow {
                    base = base.apply_partial().sub(&base.dz(0));
                }
                let rest: Vec<(SymVar, u32)> =
                    mono.iter().map(|(w, k)| if w == v { (w, k - 1) } else { (w, k) }).collect();
                let rest = Poly::monomial(Monomial::from_pairs(rest), c.clone() * C::int(e as i64));
                out = out.add(&base.map_coeffs(|t| t.mul_ref(&rest)));
            }
        }
        out
    }
}

/// The compatibility condition for extending the pre-structure to a vertex
/// Poisson structure on the symmetric algebra:
/// `Ỹ⁰(J_i,z₁)Y⁰(J_j,z₂)J_k − Ỹ⁰(J_j,z₂)Y⁰(J_i,z₁)J_k
///  = Sing(e^{z₂∂} Ỹ⁰(J_k,−z₂) Y⁰(J_i, z₁−z₂)J_j)`.
pub fn check_th1_condition<C: Scalar>(
    i: GeneratorIndex,
    j: GeneratorIndex,
    k: GeneratorIndex,
) -> CheckReport {
    let pre = PreVpStructure;

    // left side, first term: expand Y⁰(J_j,z₂)J_k and let Ỹ⁰(J_i,·) act in z₁
    let inner_jk: SymDist<C> = pre.pair(j, k);
    let mut term1 = SymDist2::zero();
    for (e2, coeff) in inner_jk.iter() {
        let acted = pre.tilde_apply(i, coeff);
        for (e1, c) in acted.iter() {
            term1.add_term((*e1, *e2), c.clone());
        }
    }
    // second term: Ỹ⁰(J_j, z₂) acting on the z₁-coefficients
    let inner_ik: SymDist<C> = pre.pair(i, k);
    let mut term2 = SymDist2::zero();
    for (e1, coeff) in inner_ik.iter() {
        let acted = pre.tilde_apply(j, coeff);
        for (e2, c) in acted.iter() {
            term2.add_term((*e1, *e2), c.clone());
        }
    }
    let lhs = term1.sub(&term2);

    // right side: Y⁰(J_i, z₁−z₂)J_j has coefficients at (z₁−z₂)^{−n};
    // Ỹ⁰(J_k,−z₂) acts on them, then e^{z₂∂} and Sing.
    let inner_ij: SymDist<C> = pre.pair(i, j);
    let mut rhs = SymDist2::zero();
    for (e_formal, coeff) in inner_ij.iter() {
        let n = (-e_formal - 1) as u32; // pole order minus one of (z₁−z₂)
        let acted = pre.tilde_apply(k, coeff).negate_var(0);
        // e^{z₂∂}, truncated by the final Sing in z₂
        let exp = acted.sing_exp_partial(0);
        rhs = rhs.add(&mul_binomial_expansion(&exp, n));
    }
    let residual = lhs.sub(&rhs.sing());

    let mut report = CheckReport::new("vertex-poisson-compat", format!("(i,j,k)=({i},{j},{k})"));
    report.residual("identity", residual.is_zero(), || residual.to_string());
    report
}

/// The Novikov product the quadratic part of the bracket encodes:
/// `J_i ∘ J_j = (j+1) J_{i+j}`.
pub fn novikov_product<C: Scalar>(i: GeneratorIndex, j: GeneratorIndex) -> ConformalElement<C> {
    ConformalElement::generator(i + j).scale(&C::int(j as i64 + 1))
}

fn novikov_on_elem<C: Scalar>(x: &ConformalElement<C>, j_side: GeneratorIndex, left: bool) -> ConformalElement<C> {
    // extend ∘ linearly in the generator slots (coefficients are scalars)
    let mut out = ConformalElement::zero();
    for (i, f) in x.iter() {
        let c = f.constant_term();
        let prod = if left { novikov_product::<C>(j_side, i) } else { novikov_product::<C>(i, j_side) };
        out = &out + &prod.scale(&c);
    }
    out
}

/// Left-symmetry of the associator, right-commutativity, and the commutator
/// bracket `[J_i, J_j] = (j−i) J_{i+j}`.
pub fn check_novikov_axioms<C: Scalar>(
    i: GeneratorIndex,
    j: GeneratorIndex,
    k: GeneratorIndex,
) -> CheckReport {
    let assoc = |a: GeneratorIndex, b: GeneratorIndex, c: GeneratorIndex| {
        let ab_c = novikov_on_elem::<C>(&novikov_product::<C>(a, b), c, false);
        let a_bc = novikov_on_elem::<C>(&novikov_product::<C>(b, c), a, true);
        &ab_c - &a_bc
    };
    let mut report = CheckReport::new("novikov", format!("(i,j,k)=({i},{j},{k})"));

    let left_sym = &assoc(i, j, k) - &assoc(j, i, k);
    report.residual("left-symmetry", left_sym.is_zero(), || left_sym.to_string());

    let rc = &novikov_on_elem::<C>(&novikov_product::<C>(i, j), k, false)
        - &novikov_on_elem::<C>(&novikov_product::<C>(i, k), j, false);
    report.residual("right-commutativity", rc.is_zero(), || rc.to_string());

    let commutator = &novikov_product::<C>(i, j) - &novikov_product::<C>(j, i);
    let expect = ConformalElement::generator(i + j).scale(&C::int(j as i64 - i as i64));
    let diff = &commutator - &expect;
    report.residual("commutator is (j−i)J_{i+j}", diff.is_zero(), || diff.to_string());
    report
}

/// Jacobi identity for the commutator Lie bracket `(j−i) J_{i+j}`.
pub fn check_novikov_commutator_jacobi<C: Scalar>(
    i: GeneratorIndex,
    j: GeneratorIndex,
    k: GeneratorIndex,
) -> CheckReport {
    let br = |a: usize, b: usize| -> ConformalElement<C> {
        ConformalElement::generator(a + b).scale(&C::int(b as i64 - a as i64))
    };
    let br_elem = |a: usize, x: &ConformalElement<C>| -> ConformalElement<C> {
        let mut out = ConformalElement::zero();
        for (b, f) in x.iter() {
            out = &out + &br(a, b).scale(&f.constant_term());
        }
        out
    };
    let bracket_with = |x: &ConformalElement<C>, b: usize| -> ConformalElement<C> {
        let mut out = ConformalElement::zero();
        for (t, f) in x.iter() {
            out = &out + &br(t, b).scale(&f.constant_term());
        }
        out
    };
    let total =
        &(&br_elem(i, &br(j, k)) - &br_elem(j, &br(i, k))) - &bracket_with(&br(i, j), k);
    let mut report = CheckReport::new("novikov-lie-jacobi", format!("(i,j,k)=({i},{j},{k})"));
    report.residual("jacobi", total.is_zero(), || total.to_string());
    report
}
