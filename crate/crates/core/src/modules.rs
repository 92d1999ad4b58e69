//! Conformal modules of rank one and the module-axiom machinery.
//!
//! A rank-1 module is determined by the ∂-action on its generator `v` and by
//! polynomials `g_i(λ, ∂)` with `J_i λ v = g_i(λ, ∂) v`. The presets are the
//! trivial module ℂ (everything acts by zero), ℂ_a (∂ acts by the scalar `a`,
//! the algebra acts by zero) and the family M_{Δ,α} = ℂ[∂]v with
//! `J₀ λ v = (∂ + α + Δλ) v` and `J_i λ v = 0` for i ≥ 1. Parameters may be
//! bound to rationals or kept symbolic, in which case every residual is a
//! polynomial identity in the parameters and a zero residual certifies the
//! statement for all parameter values at once.

use std::collections::BTreeMap;

use crate::conformal::{AlgebraError, AlgebraSpec, GeneratorIndex};
use crate::linalg::{EchelonBuilder, SubspaceBasis};
use crate::poly::{Monomial, Poly};
use crate::report::CheckReport;
use crate::scalar::Scalar;
use crate::vars::Var;

/// A parameter binding: a concrete rational or the symbolic indeterminate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding<C> {
    Symbolic,
    Value(C),
}

impl<C: Scalar> Binding<C> {
    fn to_poly(&self, symbol: Var) -> Poly<Var, C> {
        match self {
            Binding::Symbolic => Poly::var(symbol),
            Binding::Value(c) => Poly::constant(c.clone()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModulePreset {
    Trivial,
    ConstantA,
    FreeRank1,
    CustomRank1,
}

/// A rank-1 conformal module presentation.
#[derive(Clone, Debug)]
pub struct ModuleSpec<C: Scalar> {
    preset: ModulePreset,
    /// ∂_M as a polynomial: 0, the scalar `a`, or ∂ itself.
    partial_action: Poly<Var, C>,
    /// `g_i(λ, ∂)` with λ stored as [`Var::Lambda`]; absent means zero.
    actions: BTreeMap<GeneratorIndex, Poly<Var, C>>,
    label: String,
}

impl<C: Scalar> ModuleSpec<C> {
    /// The trivial module ℂ: ∂ and the whole algebra act by zero.
    pub fn trivial() -> Self {
        ModuleSpec {
            preset: ModulePreset::Trivial,
            partial_action: Poly::zero(),
            actions: BTreeMap::new(),
            label: "trivial".into(),
        }
    }

    /// ℂ_a: ∂v = a·v, the algebra acts by zero.
    pub fn constant_a(a: Binding<C>) -> Self {
        let label = match &a {
            Binding::Symbolic => "C_a (a symbolic)".into(),
            Binding::Value(v) => format!("C_a (a={v})"),
        };
        ModuleSpec {
            preset: ModulePreset::ConstantA,
            partial_action: a.to_poly(Var::ParamA),
            actions: BTreeMap::new(),
            label,
        }
    }

    /// M_{Δ,α} = ℂ[∂]v with `J₀ λ v = (∂ + α + Δλ) v`.
    pub fn free_rank1(delta: Binding<C>, alpha: Binding<C>) -> Self {
        let g0 = &(&Poly::var(Var::Partial) + &alpha.to_poly(Var::Alpha))
            + &delta.to_poly(Var::Delta).mul_ref(&Poly::var(Var::Lambda));
        let mut actions = BTreeMap::new();
        actions.insert(0, g0);
        let fmt_binding = |b: &Binding<C>| match b {
            Binding::Symbolic => "symbolic".to_string(),
            Binding::Value(v) => v.to_string(),
        };
        let label = format!("M(delta={}, alpha={})", fmt_binding(&delta), fmt_binding(&alpha));
        ModuleSpec {
            preset: ModulePreset::FreeRank1,
            partial_action: Poly::var(Var::Partial),
            actions,
            label,
        }
    }

    /// A custom rank-1 action table over a given ∂-action.
    pub fn custom_rank1(
        partial_action: Poly<Var, C>,
        actions: BTreeMap<GeneratorIndex, Poly<Var, C>>,
    ) -> Self {
        let actions = actions.into_iter().filter(|(_, g)| !g.is_zero()).collect();
        ModuleSpec {
            preset: ModulePreset::CustomRank1,
            partial_action,
            actions,
            label: "custom".into(),
        }
    }

    pub fn preset(&self) -> ModulePreset {
        self.preset
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The polynomial through which ∂ acts on values.
    pub fn partial_action(&self) -> &Poly<Var, C> {
        &self.partial_action
    }

    /// `g_i(λ, ∂)` with the λ-slot renamed to `lv`.
    pub fn action(&self, i: GeneratorIndex, lv: Var) -> Poly<Var, C> {
        match self.actions.get(&i) {
            Some(g) => g.rename_vars(|v| if v == Var::Lambda { lv } else { v }),
            None => Poly::zero(),
        }
    }

    /// Largest generator index acting nontrivially.
    pub fn action_support_max(&self) -> Option<GeneratorIndex> {
        self.actions.keys().next_back().copied()
    }

    /// Whether values live in ℂ[∂] (free ∂-action) rather than a line.
    pub fn values_involve_partial(&self) -> bool {
        self.partial_action.contains_var(Var::Partial)
    }

    /// True when no symbolic parameter occurs anywhere in the presentation.
    pub fn is_numeric(&self) -> bool {
        let symbolic = [Var::Delta, Var::Alpha, Var::ParamA];
        !symbolic.iter().any(|&v| {
            self.partial_action.contains_var(v) || self.actions.values().any(|g| g.contains_var(v))
        })
    }
}

/// `J_i lv (f v)` as a value polynomial: `f(∂_M + λ) · g_i(λ, ∂_M) v`.
///
/// For the free module ∂_M is the symbol ∂ itself; for the one-dimensional
/// presets it is the defining scalar, and the substitution evaluates ∂ away.
pub fn module_action<C: Scalar>(
    mspec: &ModuleSpec<C>,
    i: GeneratorIndex,
    f: &Poly<Var, C>,
    lv: Var,
) -> Poly<Var, C> {
    let g = mspec.action(i, lv);
    if g.is_zero() {
        return Poly::zero();
    }
    let shift = &mspec.partial_action + &Poly::var(lv);
    let shifted = f.substitute(Var::Partial, &shift);
    let g_onto = g.substitute(Var::Partial, &mspec.partial_action);
    shifted.mul_ref(&g_onto)
}

/// Residual of the module commutator axiom on `(J_i, J_j, v)`:
/// `J_i λ (J_j μ v) − J_j μ (J_i λ v) − [J_i λ J_j]_{λ+μ} v`.
///
/// The central coordinate of the bracket (block-central preset) acts by zero.
pub fn module_axiom_residual<C: Scalar>(
    spec: &AlgebraSpec<C>,
    mspec: &ModuleSpec<C>,
    i: GeneratorIndex,
    j: GeneratorIndex,
) -> Result<Poly<Var, C>, AlgebraError> {
    let one = Poly::one();
    let t1 = module_action(mspec, i, &module_action(mspec, j, &one, Var::Mu), Var::Lambda);
    let t2 = module_action(mspec, j, &module_action(mspec, i, &one, Var::Lambda), Var::Mu);
    let bracket = spec.bracket_generators(i, j, Var::Lambda)?;
    let minus_nu = -&Poly::var(Var::Nu);
    let mut t3 = Poly::zero();
    for (t, h) in bracket.iter() {
        // (f(∂, λ)J_t)_ν v = f(−ν, λ) · g_t(ν, ∂_M) v, evaluated afterwards
        // at ν = λ + μ; the λ already present in f stays a scalar.
        let coeff = h.substitute(Var::Partial, &minus_nu);
        t3.add_assign_ref(&coeff.mul_ref(&module_action(mspec, t, &one, Var::Nu)));
    }
    let lam_plus_mu = &Poly::var(Var::Lambda) + &Poly::var(Var::Mu);
    let t3 = t3.substitute(Var::Nu, &lam_plus_mu);
    Ok(&(&t1 - &t2) - &t3)
}

pub fn check_module_axioms<C: Scalar>(
    spec: &AlgebraSpec<C>,
    mspec: &ModuleSpec<C>,
    i: GeneratorIndex,
    j: GeneratorIndex,
) -> Result<CheckReport, AlgebraError> {
    let mut report = CheckReport::new(
        "module-axioms",
        format!("{} on (i,j)=({i},{j})", mspec.label()),
    );
    let residual = module_axiom_residual(spec, mspec, i, j)?;
    report.residual("commutator axiom", residual.is_zero(), || residual.to_string());
    Ok(report)
}

/// One unknown of the rank-1 classification: the coefficient of
/// `λ^l_pow ∂^d_pow` in `g_k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ActionCoeff {
    pub k: GeneratorIndex,
    pub d_pow: u32,
    pub l_pow: u32,
}

/// Result of the windowed rank-1 classification.
#[derive(Clone, Debug)]
pub struct Rank1Window<C: Scalar> {
    pub n: usize,
    pub deg: u32,
    pub labels: Vec<ActionCoeff>,
    pub kernel: SubspaceBasis<C>,
}

impl<C: Scalar> Rank1Window<C> {
    /// True when the only solution is `g_k = 0` for every k ≥ 1.
    pub fn only_zero(&self) -> bool {
        self.kernel.dim() == 0
    }
}

/// Classify the possible `J_k` actions (1 ≤ k ≤ N, degree ≤ D) on a free
/// rank-1 module once `J₀ λ v = (∂ + α + Δλ) v` is fixed with Δ, α symbolic.
///
/// Only the constraints linear in the unknowns are imposed — the commutator
/// axiom on the pairs (J₀, J_k):
/// `[J₀ λ J_k]_{λ+μ} v = J₀ λ (J_k μ v) − J_k μ (J₀ λ v)`.
pub fn classify_rank1_window<C: Scalar>(
    spec: &AlgebraSpec<C>,
    n: usize,
    deg: u32,
) -> Result<Rank1Window<C>, AlgebraError> {
    assert!(n >= 1, "the window must contain at least J1");
    let g0: Poly<Var, C> = &(&Poly::var(Var::Partial) + &Poly::var(Var::Alpha))
        + &Poly::var(Var::Delta).mul_ref(&Poly::var(Var::Lambda));

    let mut labels = Vec::new();
    for k in 1..=spec.clamp_index(n) {
        for d_pow in 0..=deg {
            for l_pow in 0..=(deg - d_pow) {
                labels.push(ActionCoeff { k, d_pow, l_pow });
            }
        }
    }
    let mut builder = EchelonBuilder::<C>::new(labels.len());

    let lam = Poly::var(Var::Lambda);
    let mu = Poly::var(Var::Mu);
    let lam_plus_mu = &lam + &mu;
    for k in 1..=spec.clamp_index(n) {
        // [J₀ λ J_k] must land on J_k alone for the constraint to stay linear
        // in g_k; graded algebras guarantee it.
        let bracket = spec.bracket_generators(0, k, Var::Lambda)?;
        let mut bracket_coeff = Poly::zero();
        for (t, h) in bracket.iter() {
            if t != k {
                return Err(AlgebraError::CenterUnsupported(format!(
                    "rank-1 classification needs [J0 λ J{k}] supported on J{k}, found J{t}"
                )));
            }
            bracket_coeff = h.clone();
        }
        // (h(∂, λ) J_k)_{λ+μ} v = h(−(λ+μ), λ) g_k(λ+μ, ∂)
        let lhs_scalar = bracket_coeff.substitute(Var::Partial, &(-&lam_plus_mu));

        let mut rows: BTreeMap<Monomial<Var>, Vec<(usize, C)>> = BTreeMap::new();
        for (slot, label) in labels.iter().enumerate() {
            if label.k != k {
                continue;
            }
            // Unit monomial g = λ^l ∂^d and its three appearances.
            let g_lam_mu = lam_plus_mu.pow(label.l_pow).mul_ref(&Poly::var(Var::Partial).pow(label.d_pow));
            let g_mu = mu.pow(label.l_pow).mul_ref(&Poly::var(Var::Partial).pow(label.d_pow));
            let g_mu_shift = mu
                .pow(label.l_pow)
                .mul_ref(&(&Poly::var(Var::Partial) + &lam).pow(label.d_pow));

            // residual = [J0 λ Jk]_{λ+μ} v − J0 λ (Jk μ v) + Jk μ (J0 λ v)
            let mut residual = lhs_scalar.mul_ref(&g_lam_mu);
            residual.sub_assign_ref(&g_mu_shift.mul_ref(&g0));
            let g0_shift_mu = g0.substitute(Var::Partial, &(&Poly::var(Var::Partial) + &mu));
            residual.add_assign_ref(&g0_shift_mu.mul_ref(&g_mu));

            for (m, c) in residual.terms() {
                rows.entry(m.clone()).or_default().push((slot, c.clone()));
            }
        }
        for (_, mut row) in rows {
            row.sort_by_key(|(s, _)| *s);
            builder.push_row(row);
        }
    }

    Ok(Rank1Window { n, deg, labels, kernel: builder.kernel_basis() })
}

pub fn check_rank1_classification<C: Scalar>(
    spec: &AlgebraSpec<C>,
    n: usize,
    deg: u32,
) -> Result<CheckReport, AlgebraError> {
    let w = classify_rank1_window(spec, n, deg)?;
    let mut report = CheckReport::new("rank1-classification", format!("g_k for 1<=k<={n}, degree<={deg}"))
        .with_window(format!("N={n}, D={deg}"));
    report.residual(
        "solution space is zero",
        w.only_zero(),
        || format!("{} unexpected solution(s) beyond g=0", w.kernel.dim()),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::Rat;

    fn poly(s: &str) -> Poly<Var, Rat> {
        parse_poly(s).unwrap()
    }

    fn m_symbolic() -> ModuleSpec<Rat> {
        ModuleSpec::free_rank1(Binding::Symbolic, Binding::Symbolic)
    }

    #[test]
    fn free_module_action_on_the_generator() {
        // J0 λ v = (∂ + α + Δλ) v
        let m = m_symbolic();
        assert_eq!(module_action(&m, 0, &Poly::one(), Var::Lambda), poly("d + A + D*l"));
        // J0 λ (∂v) = (∂ + λ)(∂ + α + Δλ) v
        assert_eq!(
            module_action(&m, 0, &poly("d"), Var::Lambda),
            poly("(d + l)*(d + A + D*l)")
        );
        // higher generators act by zero
        assert!(module_action(&m, 3, &Poly::one(), Var::Lambda).is_zero());
    }

    #[test]
    fn one_dimensional_modules_kill_the_action() {
        let ca = ModuleSpec::<Rat>::constant_a(Binding::Symbolic);
        assert!(module_action(&ca, 3, &Poly::one(), Var::Lambda).is_zero());
        let t = ModuleSpec::<Rat>::trivial();
        assert!(module_action(&t, 0, &Poly::one(), Var::Lambda).is_zero());
    }

    #[test]
    fn commutator_axiom_holds_symbolically_for_m_delta_alpha() {
        let spec = AlgebraSpec::<Rat>::block();
        let m = m_symbolic();
        // (0,0): both sides equal (λ−μ)(∂+α+Δ(λ+μ)) v.
        let lhs = &module_action(&m, 0, &module_action(&m, 0, &Poly::one(), Var::Mu), Var::Lambda)
            - &module_action(&m, 0, &module_action(&m, 0, &Poly::one(), Var::Lambda), Var::Mu);
        assert_eq!(lhs, poly("(l - m)*(d + A + D*l + D*m)"));
        for (i, j) in [(0, 0), (0, 2), (1, 1), (2, 3)] {
            let r = module_axiom_residual(&spec, &m, i, j).unwrap();
            assert!(r.is_zero(), "residual at ({i},{j}): {r}");
        }
    }

    #[test]
    fn commutator_axiom_trivial_cases() {
        let spec = AlgebraSpec::<Rat>::block();
        for m in [ModuleSpec::trivial(), ModuleSpec::constant_a(Binding::Symbolic)] {
            for (i, j) in [(0, 0), (1, 2)] {
                assert!(module_axiom_residual(&spec, &m, i, j).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn a_wrong_action_fails_the_axiom() {
        // g1 = λ breaks the (0,1) commutator.
        let spec = AlgebraSpec::<Rat>::block();
        let mut actions = BTreeMap::new();
        actions.insert(0usize, poly("d + A + D*l"));
        actions.insert(1usize, poly("l"));
        let m = ModuleSpec::custom_rank1(poly("d"), actions);
        let r = module_axiom_residual(&spec, &m, 0, 1).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn rank1_window_forces_zero_actions() {
        let spec = AlgebraSpec::<Rat>::block();
        let w = classify_rank1_window(&spec, 2, 4).unwrap();
        assert!(w.only_zero(), "kernel dim = {}", w.kernel.dim());
    }

    #[test]
    fn rank1_constant_case() {
        // At D = 0 the constraint ((k+1)λ − μ) g(λ+μ) = −μ g(μ) forces g = 0.
        let spec = AlgebraSpec::<Rat>::block();
        let w = classify_rank1_window(&spec, 1, 0).unwrap();
        assert!(w.only_zero());
    }
}
