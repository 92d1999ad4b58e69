//! Conformal derivations on truncation windows.
//!
//! A conformal linear map `d` is determined by its images `d_λ J_i`; the
//! derivation identity `d_λ[a_μ b] = [(d_λ a)_{λ+μ} b] + [a_μ (d_λ b)]` is a
//! linear constraint on those images. The solver treats every coefficient of
//! every image (domain index ≤ N, codomain index ≤ N_cod, total degree ≤ D)
//! as an unknown, imposes zero defect on all pairs with i+j ≤ N, and compares
//! the solution space with the window-restricted inner derivations. For the
//! Block algebra the quotient comes out zero — every window derivation is
//! inner.

use std::collections::BTreeMap;
use std::fmt;

use crate::conformal::{AlgebraError, AlgebraSpec, ConformalElement, GeneratorIndex, LambdaElement};
use crate::linalg::{EchelonBuilder, SparseRow, SubspaceBasis};
use crate::poly::{Monomial, Poly};
use crate::report::CheckReport;
use crate::scalar::Scalar;
use crate::vars::Var;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivationError {
    #[error("pair ({i},{j}) leaves the domain window (bound {bound})")]
    Window { i: usize, j: usize, bound: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A conformal linear map given by its images on window generators, with
/// λ = [`Var::Lambda`]. Images on ∂-multiples follow from
/// `φ_λ(∂v) = (∂+λ) φ_λ(v)` and are never stored; the center maps to zero
/// (forced by that same relation, since ∂ kills the center).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalLinearMap<C: Scalar> {
    domain_bound: usize,
    images: BTreeMap<GeneratorIndex, LambdaElement<C>>,
}

impl<C: Scalar> ConformalLinearMap<C> {
    pub fn zero(domain_bound: usize) -> Self {
        ConformalLinearMap { domain_bound, images: BTreeMap::new() }
    }

    pub fn from_images(
        domain_bound: usize,
        images: BTreeMap<GeneratorIndex, LambdaElement<C>>,
    ) -> Self {
        let images = images.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        ConformalLinearMap { domain_bound, images }
    }

    pub fn domain_bound(&self) -> usize {
        self.domain_bound
    }

    /// `d_λ J_i` (zero when unset).
    pub fn image(&self, i: GeneratorIndex) -> LambdaElement<C> {
        self.images.get(&i).cloned().unwrap_or_else(ConformalElement::zero)
    }

    /// The inner map `ad x`: `(ad x)_λ J_i = [x_λ J_i]` on the window.
    pub fn ad(
        spec: &AlgebraSpec<C>,
        x: &ConformalElement<C>,
        domain_bound: usize,
    ) -> Result<Self, AlgebraError> {
        let mut images = BTreeMap::new();
        for i in 0..=spec.clamp_index(domain_bound) {
            let v = spec.lambda_bracket(x, &ConformalElement::generator(i), Var::Lambda)?;
            if !v.is_zero() {
                images.insert(i, v);
            }
        }
        Ok(ConformalLinearMap { domain_bound, images })
    }

    /// Apply to an arbitrary window element: `d_λ(f(∂)J_i) = f(∂+λ) d_λ J_i`.
    /// The central coordinate of the argument maps to zero.
    pub fn apply(&self, x: &ConformalElement<C>) -> LambdaElement<C> {
        let shifted = &Poly::var(Var::Partial) + &Poly::var(Var::Lambda);
        let mut out = ConformalElement::zero();
        for (i, f) in x.iter() {
            let img = match self.images.get(&i) {
                Some(v) => v,
                None => continue,
            };
            let op = f.substitute(Var::Partial, &shifted);
            out = &out + &img.apply_partial_poly(&op);
        }
        out
    }
}

/// The defect `d_λ[J_i μ J_j] − [(d_λ J_i)_{λ+μ} J_j] − [J_i μ (d_λ J_j)]`,
/// an element over (∂, λ, μ). It vanishes exactly when the derivation
/// identity holds on the pair.
pub fn derivation_defect<C: Scalar>(
    spec: &AlgebraSpec<C>,
    d: &ConformalLinearMap<C>,
    i: GeneratorIndex,
    j: GeneratorIndex,
) -> Result<LambdaElement<C>, DerivationError> {
    let bound = d.domain_bound();
    if i > bound || j > bound || i + j > bound {
        return Err(DerivationError::Window { i, j, bound });
    }
    let bracket = spec.bracket_generators(i, j, Var::Mu)?;
    let t1 = d.apply(&bracket);
    let lam_plus_mu = &Poly::var(Var::Lambda) + &Poly::var(Var::Mu);
    let t2 = spec
        .lambda_bracket(&d.image(i), &ConformalElement::generator(j), Var::Nu)?
        .substitute_all(Var::Nu, &lam_plus_mu);
    let t3 = spec.lambda_bracket(&ConformalElement::generator(i), &d.image(j), Var::Mu)?;
    Ok(&(&t1 - &t2) - &t3)
}

/// One unknown of the window problem: the coefficient of `∂^d_pow λ^l_pow`
/// in the `target` coordinate of `d_λ J_domain`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ImageCoeff {
    pub domain: usize,
    pub target: TargetCoord,
    pub d_pow: u32,
    pub l_pow: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum TargetCoord {
    Gen(usize),
    Center,
}

impl fmt::Display for ImageCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.target {
            TargetCoord::Gen(t) => write!(
                f,
                "coeff of d^{}*l^{} J{} in d(J{})",
                self.d_pow, self.l_pow, t, self.domain
            ),
            TargetCoord::Center => {
                write!(f, "coeff of l^{} c in d(J{})", self.l_pow, self.domain)
            }
        }
    }
}

/// Window parameters for the derivation solver.
#[derive(Clone, Copy, Debug)]
pub struct DerivationWindowProblem {
    /// Domain window bound N: images are constrained on pairs with i+j ≤ N.
    pub n: usize,
    /// Total-degree bound on image coefficients.
    pub deg: u32,
    /// Codomain index bound; images may land up to here.
    pub n_cod: usize,
}

impl DerivationWindowProblem {
    /// The default codomain bound 2N keeps defects on window pairs
    /// expressible.
    pub fn new(n: usize, deg: u32) -> Self {
        DerivationWindowProblem { n, deg, n_cod: 2 * n }
    }

    pub fn window_label(&self) -> String {
        format!("N={}, D={}, N_cod={}", self.n, self.deg, self.n_cod)
    }
}

/// The solved window problem: a basis of the space of window derivations in
/// the `labels` coordinates.
#[derive(Clone, Debug)]
pub struct DerivationSolution<C: Scalar> {
    pub problem: DerivationWindowProblem,
    pub labels: Vec<ImageCoeff>,
    pub basis: SubspaceBasis<C>,
}

impl<C: Scalar> DerivationSolution<C> {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Reconstruct the conformal linear map a solution vector encodes.
    pub fn map_from_vector(&self, v: &[C]) -> ConformalLinearMap<C> {
        assert_eq!(v.len(), self.labels.len());
        let mut images: BTreeMap<usize, ConformalElement<C>> = BTreeMap::new();
        for (label, c) in self.labels.iter().zip(v) {
            if c.is_zero() {
                continue;
            }
            let mono = Monomial::from_pairs([(Var::Partial, label.d_pow), (Var::Lambda, label.l_pow)]);
            let poly = Poly::monomial(mono, c.clone());
            let piece = match label.target {
                TargetCoord::Gen(t) => ConformalElement::from_coeff(t, poly),
                TargetCoord::Center => ConformalElement::central(poly),
            };
            let entry = images.entry(label.domain).or_insert_with(ConformalElement::zero);
            *entry = &*entry + &piece;
        }
        ConformalLinearMap::from_images(self.problem.n, images)
    }
}

fn enumerate_labels<C: Scalar>(
    spec: &AlgebraSpec<C>,
    p: &DerivationWindowProblem,
) -> Vec<ImageCoeff> {
    let mut labels = Vec::new();
    for domain in 0..=spec.clamp_index(p.n) {
        for t in 0..=spec.clamp_index(p.n_cod) {
            for d_pow in 0..=p.deg {
                for l_pow in 0..=(p.deg - d_pow) {
                    labels.push(ImageCoeff { domain, target: TargetCoord::Gen(t), d_pow, l_pow });
                }
            }
        }
        if spec.has_center() {
            for l_pow in 0..=p.deg {
                labels.push(ImageCoeff { domain, target: TargetCoord::Center, d_pow: 0, l_pow });
            }
        }
    }
    labels
}

/// Vectorize a window map over the label set; `None` when the map does not
/// fit the index/degree bounds.
fn vectorize_map<C: Scalar>(
    map: &ConformalLinearMap<C>,
    labels: &[ImageCoeff],
    index: &BTreeMap<ImageCoeff, usize>,
) -> Option<Vec<C>> {
    let mut v = vec![C::zero(); labels.len()];
    for (domain, img) in map.images.iter() {
        for (t, poly) in img.iter() {
            for (m, c) in poly.terms() {
                let label = ImageCoeff {
                    domain: *domain,
                    target: TargetCoord::Gen(t),
                    d_pow: m.degree_in(Var::Partial),
                    l_pow: m.degree_in(Var::Lambda),
                };
                if m.total_degree() != label.d_pow + label.l_pow {
                    return None;
                }
                let slot = *index.get(&label)?;
                v[slot] = c.clone();
            }
        }
        for (m, c) in img.central_coeff().terms() {
            let label = ImageCoeff {
                domain: *domain,
                target: TargetCoord::Center,
                d_pow: 0,
                l_pow: m.degree_in(Var::Lambda),
            };
            if m.total_degree() != label.l_pow {
                return None;
            }
            let slot = *index.get(&label)?;
            v[slot] = c.clone();
        }
    }
    Some(v)
}

/// Solve the window problem: a basis for all conformal linear maps within the
/// bounds whose defect vanishes identically on every pair with i+j ≤ N.
pub fn solve_derivation_window<C: Scalar>(
    spec: &AlgebraSpec<C>,
    p: DerivationWindowProblem,
) -> Result<DerivationSolution<C>, DerivationError> {
    let labels = enumerate_labels(spec, &p);
    let mut builder = EchelonBuilder::<C>::new(labels.len());

    let n = spec.clamp_index(p.n);
    for i in 0..=n {
        for j in 0..=(n - i) {
            // The defect is linear in the unknown images, so assemble it
            // column by column from unit maps.
            let mut rows: BTreeMap<(TargetCoord, Monomial<Var>), SparseRow<C>> = BTreeMap::new();
            for (slot, label) in labels.iter().enumerate() {
                if label.domain != i && label.domain != j && label.domain != i + j {
                    continue;
                }
                let unit = unit_map(p.n, label);
                let defect = derivation_defect(spec, &unit, i, j)?;
                for (t, poly) in defect.iter() {
                    for (m, c) in poly.terms() {
                        rows.entry((TargetCoord::Gen(t), m.clone()))
                            .or_default()
                            .push((slot, c.clone()));
                    }
                }
                for (m, c) in defect.central_coeff().terms() {
                    rows.entry((TargetCoord::Center, m.clone()))
                        .or_default()
                        .push((slot, c.clone()));
                }
            }
            for (_, mut row) in rows {
                row.sort_by_key(|(s, _)| *s);
                builder.push_row(row);
            }
        }
    }

    Ok(DerivationSolution { problem: p, labels, basis: builder.kernel_basis() })
}

fn unit_map<C: Scalar>(domain_bound: usize, label: &ImageCoeff) -> ConformalLinearMap<C> {
    let mono = Monomial::from_pairs([(Var::Partial, label.d_pow), (Var::Lambda, label.l_pow)]);
    let poly = Poly::monomial(mono, C::one());
    let img = match label.target {
        TargetCoord::Gen(t) => ConformalElement::from_coeff(t, poly),
        TargetCoord::Center => ConformalElement::central(poly),
    };
    let mut images = BTreeMap::new();
    images.insert(label.domain, img);
    ConformalLinearMap { domain_bound, images }
}

/// The window-restricted inner derivations that fit the same index/degree
/// bounds as the solver ansatz: `ad(∂^e J_t)` for t ≤ N_cod and e ≤ D−1,
/// keeping only those whose images stay inside the bounds.
pub fn inner_window_vectors<C: Scalar>(
    spec: &AlgebraSpec<C>,
    sol: &DerivationSolution<C>,
) -> Result<Vec<Vec<C>>, DerivationError> {
    let p = &sol.problem;
    let index: BTreeMap<ImageCoeff, usize> =
        sol.labels.iter().enumerate().map(|(s, l)| (*l, s)).collect();
    let mut vectors = Vec::new();
    if p.deg == 0 {
        return Ok(vectors);
    }
    for t in 0..=spec.clamp_index(p.n_cod) {
        for e in 0..=(p.deg - 1) {
            let h = ConformalElement::partial_power(t, e);
            let ad = ConformalLinearMap::ad(spec, &h, p.n)?;
            if let Some(v) = vectorize_map(&ad, &sol.labels, &index) {
                vectors.push(v);
            }
        }
    }
    Ok(vectors)
}

/// The outcome of the inner-quotient computation on a window.
#[derive(Clone, Debug)]
pub struct InnerQuotient {
    pub solution_dim: usize,
    pub inner_dim: usize,
    pub quotient_dim: usize,
    /// Every window-compatible inner derivation solved the defect equations.
    pub inner_contained: bool,
}

/// dim(window derivations) − dim(window-restricted inner derivations).
pub fn inner_quotient_dim<C: Scalar>(
    spec: &AlgebraSpec<C>,
    p: DerivationWindowProblem,
) -> Result<(InnerQuotient, DerivationSolution<C>), DerivationError> {
    let sol = solve_derivation_window(spec, p)?;
    let inner = inner_window_vectors(spec, &sol)?;
    let inner_basis = SubspaceBasis::from_vectors(sol.labels.len(), inner.clone());
    let inner_contained = inner.iter().all(|v| sol.basis.in_span(v));
    let quotient = InnerQuotient {
        solution_dim: sol.dim(),
        inner_dim: inner_basis.dim(),
        quotient_dim: sol.dim() - inner_basis.dim(),
        inner_contained,
    };
    Ok((quotient, sol))
}

/// Report form of [`inner_quotient_dim`], failing when the quotient is
/// nonzero or an inner derivation escapes the solution space.
pub fn check_derivations_inner<C: Scalar>(
    spec: &AlgebraSpec<C>,
    p: DerivationWindowProblem,
    expected_quotient: usize,
) -> Result<CheckReport, DerivationError> {
    let (q, _) = inner_quotient_dim(spec, p)?;
    let mut report = CheckReport::new("derivations-inner", format!("quotient at {}", p.window_label()))
        .with_window(p.window_label());
    report.residual("inner ⊆ solutions", q.inner_contained, || {
        "an inner derivation violates the window defect equations".into()
    });
    report.residual(
        format!("quotient dim (expected {expected_quotient})"),
        q.quotient_dim == expected_quotient,
        || format!("solution dim {} vs inner dim {}", q.solution_dim, q.inner_dim),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;
    use crate::Rat;

    type Elem = ConformalElement<Rat>;

    fn elem(s: &str) -> Elem {
        parse_element(s).unwrap()
    }

    #[test]
    fn inner_maps_have_zero_defect() {
        let spec = AlgebraSpec::<Rat>::block();
        let ad_j0 = ConformalLinearMap::ad(&spec, &Elem::generator(0), 6).unwrap();
        assert!(derivation_defect(&spec, &ad_j0, 1, 2).unwrap().is_zero());
        let ad_dj1 = ConformalLinearMap::ad(&spec, &elem("d J1"), 6).unwrap();
        assert!(derivation_defect(&spec, &ad_dj1, 0, 1).unwrap().is_zero());
        // bilinearity: defect(a+b) = defect(a) + defect(b), so sums stay zero
        let ad_sum = ConformalLinearMap::ad(&spec, &elem("d J1 + 3 J0"), 6).unwrap();
        assert!(derivation_defect(&spec, &ad_sum, 2, 1).unwrap().is_zero());
    }

    #[test]
    fn ad_images_match_the_bracket() {
        let spec = AlgebraSpec::<Rat>::block();
        let ad_j0 = ConformalLinearMap::ad(&spec, &Elem::generator(0), 4).unwrap();
        assert_eq!(ad_j0.image(2), elem("(d + 4*l) J2"));
        let ad_j1 = ConformalLinearMap::ad(&spec, &Elem::generator(1), 4).unwrap();
        assert_eq!(ad_j1.image(0), elem("(2*d + 3*l) J1"));
        // the center is central
        let spec_c = AlgebraSpec::<Rat>::block_central();
        let ad_c = ConformalLinearMap::ad(&spec_c, &elem("c"), 4).unwrap();
        for i in 0..=4 {
            assert!(ad_c.image(i).is_zero());
        }
    }

    #[test]
    fn a_non_derivation_has_the_predicted_defect() {
        // d with d_λ J0 = J0 and zero elsewhere: the (0,0) defect is
        // −(∂ + λ + 2μ) J0.
        let spec = AlgebraSpec::<Rat>::block();
        let mut images = BTreeMap::new();
        images.insert(0usize, Elem::generator(0));
        let d = ConformalLinearMap::from_images(2, images);
        let defect = derivation_defect(&spec, &d, 0, 0).unwrap();
        assert_eq!(defect, elem("(-d - l - 2*m) J0"));
    }

    #[test]
    fn window_violations_are_errors() {
        let spec = AlgebraSpec::<Rat>::block();
        let d = ConformalLinearMap::<Rat>::zero(2);
        assert!(matches!(
            derivation_defect(&spec, &d, 1, 2),
            Err(DerivationError::Window { .. })
        ));
    }

    #[test]
    fn defect_is_bilinear_in_the_map() {
        let spec = AlgebraSpec::<Rat>::block();
        let mut img1 = BTreeMap::new();
        img1.insert(0usize, elem("(l) J1"));
        let d1 = ConformalLinearMap::from_images(2, img1);
        let mut img2 = BTreeMap::new();
        img2.insert(1usize, elem("(d^2) J0"));
        img2.insert(0usize, elem("J2"));
        let d2 = ConformalLinearMap::from_images(2, img2);
        let mut sum_images = BTreeMap::new();
        for i in 0..=2usize {
            sum_images.insert(i, &d1.image(i) + &d2.image(i));
        }
        let dsum = ConformalLinearMap::from_images(2, sum_images);
        for (i, j) in [(0, 0), (0, 1), (1, 1), (2, 0)] {
            let lhs = derivation_defect(&spec, &dsum, i, j).unwrap();
            let rhs = &derivation_defect(&spec, &d1, i, j).unwrap()
                + &derivation_defect(&spec, &d2, i, j).unwrap();
            assert_eq!(lhs, rhs, "pair ({i},{j})");
        }
    }

    #[test]
    fn solver_solutions_round_trip_to_zero_defect() {
        let spec = AlgebraSpec::<Rat>::block();
        let sol = solve_derivation_window(&spec, DerivationWindowProblem::new(2, 2)).unwrap();
        assert!(sol.dim() > 0);
        for v in sol.basis.vectors() {
            let map = sol.map_from_vector(v);
            for i in 0..=2usize {
                for j in 0..=(2 - i) {
                    assert!(
                        derivation_defect(&spec, &map, i, j).unwrap().is_zero(),
                        "pair ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn block_window_derivations_are_inner() {
        let spec = AlgebraSpec::<Rat>::block();
        let (q, sol) = inner_quotient_dim(&spec, DerivationWindowProblem::new(2, 3)).unwrap();
        assert!(q.inner_contained);
        assert_eq!(q.quotient_dim, 0, "sol={} inner={}", q.solution_dim, q.inner_dim);
        // every solution is a combination of window inner derivations
        let inner = inner_window_vectors(&spec, &sol).unwrap();
        let inner_basis = SubspaceBasis::from_vectors(sol.labels.len(), inner);
        for v in sol.basis.vectors() {
            assert!(inner_basis.in_span(v));
        }
    }

    #[test]
    fn virasoro_window_derivations_are_inner() {
        let spec = AlgebraSpec::<Rat>::virasoro();
        let (q, sol) = inner_quotient_dim(&spec, DerivationWindowProblem::new(0, 3)).unwrap();
        assert!(q.inner_contained);
        assert_eq!(q.quotient_dim, 0);
        // d_λ J0 = f(∂,λ) J0 with deg f ≤ 3 and zero (0,0)-defect is spanned
        // by ad(f(∂)J0) with deg f ≤ 2.
        assert_eq!(q.solution_dim, 3);
        assert_eq!(sol.dim(), q.inner_dim);
    }

    #[test]
    fn central_extension_window_derivations_are_inner() {
        // Computed once and frozen: the center admits no extra outer
        // directions on this window; ad images (λ³-cocycle terms included)
        // span the full 10-dimensional solution space.
        let spec = AlgebraSpec::<Rat>::block_central();
        let (q, _) = inner_quotient_dim(&spec, DerivationWindowProblem::new(2, 4)).unwrap();
        assert!(q.inner_contained);
        assert_eq!((q.solution_dim, q.inner_dim, q.quotient_dim), (10, 10, 0));
    }

    #[test]
    fn degree_zero_window_forces_constant_images() {
        // With D = 0 no inner images fit (ad raises the degree), and the
        // defect equations kill every constant-coefficient map.
        let spec = AlgebraSpec::<Rat>::block();
        let (q, _) = inner_quotient_dim(&spec, DerivationWindowProblem::new(2, 0)).unwrap();
        assert_eq!(q.inner_dim, 0);
        assert_eq!(q.solution_dim, 0);
        assert_eq!(q.quotient_dim, 0);
    }
}
