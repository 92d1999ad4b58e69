//! Cochains, the differential, σ-reduction, homotopy contraction, and
//! truncated cohomology dimensions.
//!
//! A q-cochain stores values on canonically sorted generator tuples only;
//! evaluation at any other ordering applies the permutation sign while
//! permuting the λ-slots simultaneously, and conformal antilinearity
//! `γ(…, ∂a, …) = −λ_i γ(…, a, …)` is built into evaluation of non-generator
//! arguments. The differential is computed exactly — for the module presets
//! here it never enlarges the index support of a cochain — so `d² = 0` holds
//! on the nose and the only truncation is the finite basis (window N, degree
//! D) fed to the rank computations.

use std::collections::BTreeMap;

use crate::conformal::{AlgebraError, AlgebraSpec, GeneratorIndex};
use crate::linalg::{EchelonBuilder, SparseRow, SubspaceBasis};
use crate::modules::{module_action, ModuleSpec};
use crate::poly::{Monomial, Poly};
use crate::report::CheckReport;
use crate::scalar::Scalar;
use crate::vars::Var;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("cochains are stored on generator tuples; a centered algebra is not supported")]
    CenteredAlgebra,
    #[error("cohomology dimensions need numeric module parameters")]
    SymbolicParameters,
    #[error("cochain degree {q} exceeds the cost guard (q <= {max})")]
    CostGuard { q: usize, max: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

const MAX_Q: usize = 3;

/// A q-cochain with values in a rank-1 module, stored on sorted tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain<C: Scalar> {
    q: usize,
    values: BTreeMap<Vec<GeneratorIndex>, Poly<Var, C>>,
}

/// Sign and permutation that sort a tuple: `sorted[r] = tuple[perm[r]]`.
fn sorting_permutation(tuple: &[usize]) -> (Vec<usize>, Vec<usize>, i32) {
    let mut perm: Vec<usize> = (0..tuple.len()).collect();
    perm.sort_by_key(|&r| (tuple[r], r)); // stable
    let sorted: Vec<usize> = perm.iter().map(|&r| tuple[r]).collect();
    // parity by counting transpositions of the permutation
    let mut sign = 1i32;
    let mut seen = vec![false; perm.len()];
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = perm[at];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    (sorted, perm, sign)
}

/// All permutations of positions within groups of equal indices.
fn equal_group_permutations(tuple: &[usize]) -> Vec<(Vec<usize>, i32)> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut start = 0;
    while start < tuple.len() {
        let mut end = start + 1;
        while end < tuple.len() && tuple[end] == tuple[start] {
            end += 1;
        }
        groups.push((start..end).collect());
        start = end;
    }
    let mut perms: Vec<(Vec<usize>, i32)> = vec![((0..tuple.len()).collect(), 1)];
    for g in groups {
        if g.len() < 2 {
            continue;
        }
        let mut extended = Vec::new();
        for (base, sign) in &perms {
            for (gp, gsign) in permutations_with_sign(&g) {
                let mut p = base.clone();
                for (slot, &target) in g.iter().zip(&gp) {
                    p[*slot] = base[target];
                }
                extended.push((p, sign * gsign));
            }
        }
        perms = extended;
    }
    perms
}

fn permutations_with_sign(items: &[usize]) -> Vec<(Vec<usize>, i32)> {
    if items.len() <= 1 {
        return vec![(items.to_vec(), 1)];
    }
    let mut out = Vec::new();
    for (k, &first) in items.iter().enumerate() {
        let rest: Vec<usize> = items.iter().enumerate().filter(|(r, _)| *r != k).map(|(_, &v)| v).collect();
        let flip = if k % 2 == 0 { 1 } else { -1 };
        for (mut p, s) in permutations_with_sign(&rest) {
            p.insert(0, first);
            out.push((p, s * flip));
        }
    }
    out
}

impl<C: Scalar> Cochain<C> {
    pub fn zero(q: usize) -> Self {
        Cochain { q, values: BTreeMap::new() }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vec<GeneratorIndex>, &Poly<Var, C>)> {
        self.values.iter()
    }

    pub fn support_max_index(&self) -> Option<GeneratorIndex> {
        self.values.keys().filter_map(|t| t.iter().max()).max().copied()
    }

    /// Add `value` (a polynomial in λ₁..λ_q and the module variables) at a
    /// sorted tuple. Tuples with repeated indices are antisymmetrized over
    /// the equal-index positions, which is the constraint the skew rule
    /// induces there.
    pub fn add_at(&mut self, tuple: &[GeneratorIndex], value: Poly<Var, C>) {
        assert_eq!(tuple.len(), self.q, "tuple arity must equal the cochain degree");
        assert!(tuple.windows(2).all(|w| w[0] <= w[1]), "tuple must be sorted");
        if value.is_zero() {
            return;
        }
        let perms = equal_group_permutations(tuple);
        let norm = C::one() / C::int(perms.len() as i64);
        let mut sym = Poly::zero();
        for (perm, sign) in &perms {
            // (σ·V)(λ_1..λ_q) = sign(σ) V(λ_{σ(1)}, …, λ_{σ(q)})
            let renamed = value.rename_vars(|v| match v {
                Var::LambdaI(i) => {
                    let slot = i as usize - 1;
                    if slot < perm.len() {
                        Var::lambda_i(perm[slot] + 1)
                    } else {
                        v
                    }
                }
                other => other,
            });
            let signed = if *sign >= 0 { renamed } else { -&renamed };
            sym.add_assign_ref(&signed);
        }
        let sym = sym.scale(&norm);
        if sym.is_zero() {
            return;
        }
        let entry = self.values.entry(tuple.to_vec()).or_insert_with(Poly::zero);
        entry.add_assign_ref(&sym);
        if entry.is_zero() {
            self.values.remove(tuple);
        }
    }

    pub fn set(&mut self, tuple: &[GeneratorIndex], value: Poly<Var, C>) {
        self.values.remove(tuple);
        self.add_at(tuple, value);
    }

    /// Evaluate at an arbitrary tuple with the given λ-variable slots:
    /// `γ_{slots[0], …}(J_{tuple[0]}, …)`.
    pub fn eval(&self, tuple: &[GeneratorIndex], slots: &[Var]) -> Poly<Var, C> {
        assert_eq!(tuple.len(), self.q);
        assert_eq!(slots.len(), self.q);
        let (sorted, perm, sign) = sorting_permutation(tuple);
        let Some(stored) = self.values.get(&sorted) else {
            return Poly::zero();
        };
        // stored slot r carries the λ-variable of original position perm[r]
        let renamed = stored.rename_vars(|v| match v {
            Var::LambdaI(i) => {
                let slot = i as usize - 1;
                if slot < perm.len() {
                    slots[perm[slot]]
                } else {
                    v
                }
            }
            other => other,
        });
        if sign >= 0 {
            renamed
        } else {
            -&renamed
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Cochain::zero(self.q);
        for (t, v) in &self.values {
            let s = v.scale(c);
            if !s.is_zero() {
                out.values.insert(t.clone(), s);
            }
        }
        out
    }

    /// Multiply every value by a scalar polynomial.
    pub fn mul_poly(&self, p: &Poly<Var, C>) -> Self {
        let mut out = Cochain::zero(self.q);
        for (t, v) in &self.values {
            let s = v.mul_ref(p);
            if !s.is_zero() {
                out.values.insert(t.clone(), s);
            }
        }
        out
    }
}

impl<C: Scalar> std::ops::Add for &Cochain<C> {
    type Output = Cochain<C>;
    fn add(self, other: Self) -> Cochain<C> {
        assert_eq!(self.q, other.q);
        let mut out = self.clone();
        for (t, v) in &other.values {
            let entry = out.values.entry(t.clone()).or_insert_with(Poly::zero);
            entry.add_assign_ref(v);
            if entry.is_zero() {
                out.values.remove(t);
            }
        }
        out
    }
}

impl<C: Scalar> std::ops::Sub for &Cochain<C> {
    type Output = Cochain<C>;
    fn sub(self, other: Self) -> Cochain<C> {
        self + &other.scale(&-C::one())
    }
}

fn sorted_tuples(max_index: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut stack = vec![(Vec::<usize>::new(), 0usize)];
    while let Some((prefix, min)) = stack.pop() {
        if prefix.len() == len {
            out.push(prefix);
            continue;
        }
        for i in (min..=max_index).rev() {
            let mut next = prefix.clone();
            next.push(i);
            stack.push((next, i));
        }
    }
    out.sort();
    out
}

/// The differential of Def.-style cochain calculus, computed exactly:
///
/// `(dγ)(a_1,…,a_{q+1}) = Σ_r (−1)^{r+1} a_r λ_r γ(…â_r…)`
/// `+ Σ_{r<s} (−1)^{r+s} γ([a_r λ_r a_s], …â_r…â_s…)` with the bracket slot
/// carrying λ_r + λ_s.
pub fn differential<C: Scalar>(
    spec: &AlgebraSpec<C>,
    mspec: &ModuleSpec<C>,
    g: &Cochain<C>,
) -> Result<Cochain<C>, CohomologyError> {
    let q = g.q();
    let mut out = Cochain::zero(q + 1);
    let bound = match (g.support_max_index(), mspec.action_support_max()) {
        (None, _) if q > 0 => return Ok(out),
        (gm, am) => gm.unwrap_or(0).max(am.unwrap_or(0)),
    };
    let slots: Vec<Var> = (1..=q + 1).map(Var::lambda_i).collect();
    for tuple in sorted_tuples(bound, q + 1) {
        let mut value = Poly::zero();
        // action terms
        for r in 0..=q {
            let mut rest_t = tuple.clone();
            let actor = rest_t.remove(r);
            let mut rest_slots = slots.clone();
            let actor_slot = rest_slots.remove(r);
            let inner = g.eval(&rest_t, &rest_slots);
            if inner.is_zero() {
                continue;
            }
            let acted = module_action(mspec, actor, &inner, actor_slot);
            if r % 2 == 0 {
                value.add_assign_ref(&acted);
            } else {
                value.sub_assign_ref(&acted);
            }
        }
        // bracket terms
        for r in 0..=q {
            for s in (r + 1)..=q {
                let bracket = spec.bracket_generators(tuple[r], tuple[s], slots[r])?;
                if !bracket.central_coeff().is_zero() {
                    return Err(CohomologyError::CenteredAlgebra);
                }
                let mut rest_t: Vec<usize> = Vec::with_capacity(q - 1);
                let mut rest_slots: Vec<Var> = Vec::with_capacity(q - 1);
                for (pos, (&t, &sl)) in tuple.iter().zip(&slots).enumerate() {
                    if pos != r && pos != s {
                        rest_t.push(t);
                        rest_slots.push(sl);
                    }
                }
                let joined = &Poly::var(slots[r]) + &Poly::var(slots[s]);
                let minus_joined = -&joined;
                for (u, h) in bracket.iter() {
                    // γ(h(∂, λ_r) J_u, …) = h(−(λ_r+λ_s), λ_r) γ(J_u, …)
                    let mut eval_t = vec![u];
                    eval_t.extend_from_slice(&rest_t);
                    let mut eval_slots = vec![Var::Nu];
                    eval_slots.extend_from_slice(&rest_slots);
                    let inner = g.eval(&eval_t, &eval_slots).substitute(Var::Nu, &joined);
                    if inner.is_zero() {
                        continue;
                    }
                    let coeff = h.substitute(Var::Partial, &minus_joined);
                    let term = coeff.mul_ref(&inner);
                    // sign (−1)^{(r+1)+(s+1)} = (−1)^{r+s}
                    if (r + s) % 2 == 0 {
                        value.add_assign_ref(&term);
                    } else {
                        value.sub_assign_ref(&term);
                    }
                }
            }
        }
        out.add_at(&tuple, value);
    }
    Ok(out)
}

/// The ∂-action on cochains: multiplication by `∂_M + Σ λ_i`.
pub fn partial_on_cochain<C: Scalar>(mspec: &ModuleSpec<C>, g: &Cochain<C>) -> Cochain<C> {
    let mut mult = mspec.partial_action().clone();
    for i in 1..=g.q() {
        mult.add_assign_ref(&Poly::var(Var::lambda_i(i)));
    }
    g.mul_poly(&mult)
}

/// A σ-reduced cochain: the last λ-slot has been eliminated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCochain<C: Scalar> {
    pub q: usize,
    pub values: BTreeMap<Vec<GeneratorIndex>, Poly<Var, C>>,
}

impl<C: Scalar> ReducedCochain<C> {
    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

/// σ-reduction: substitute `λ_q := −∂_M − λ_1 − … − λ_{q−1}` in every value.
/// Its kernel is exactly `(∂_M + Σλ_i)·C̃`, so the image realizes the reduced
/// complex. For q = 0 this is the identity on values.
pub fn sigma_reduce<C: Scalar>(mspec: &ModuleSpec<C>, g: &Cochain<C>) -> ReducedCochain<C> {
    let q = g.q();
    let mut repl = -mspec.partial_action();
    for i in 1..q {
        repl.sub_assign_ref(&Poly::var(Var::lambda_i(i)));
    }
    let mut values = BTreeMap::new();
    for (t, v) in g.support() {
        let reduced = if q == 0 { v.clone() } else { v.substitute(Var::lambda_i(q), &repl) };
        if !reduced.is_zero() {
            values.insert(t.clone(), reduced);
        }
    }
    ReducedCochain { q, values }
}

/// The homotopy contraction against `J₀` at λ = 0 (written τ over ℂ_a and κ
/// over M_{Δ,α} — one and the same operator):
/// `(τγ)_{λ_1..λ_{q−1}}(a_1..a_{q−1}) = (−1)^{q−1} γ_{λ_1..λ_{q−1},λ}(a_1,…,J₀)|_{λ=0}`.
pub fn homotopy_contraction<C: Scalar>(g: &Cochain<C>) -> Cochain<C> {
    let q = g.q();
    assert!(q >= 1, "the contraction lowers degree");
    let mut out = Cochain::zero(q - 1);
    let bound = g.support_max_index().unwrap_or(0);
    let slots: Vec<Var> = (1..q).map(Var::lambda_i).chain(std::iter::once(Var::Nu)).collect();
    for tuple in sorted_tuples(bound, q - 1) {
        let mut eval_t = tuple.clone();
        eval_t.push(0);
        let v = g.eval(&eval_t, &slots).substitute(Var::Nu, &Poly::zero());
        let v = if (q - 1) % 2 == 0 { v } else { -&v };
        out.add_at(&tuple, v);
    }
    out
}

/// Residual of the homotopy identity
/// `(dτ + τd)γ = (g₀(0, ∂_M) + Σλ_i)·γ`, which specializes to `(Σλ_i)γ` over
/// ℂ_a and to `(∂ + α + Σλ_i)γ` over M_{Δ,α}.
pub fn homotopy_residual<C: Scalar>(
    spec: &AlgebraSpec<C>,
    mspec: &ModuleSpec<C>,
    g: &Cochain<C>,
) -> Result<Cochain<C>, CohomologyError> {
    let d_tau = differential(spec, mspec, &homotopy_contraction(g))?;
    let tau_d = homotopy_contraction(&differential(spec, mspec, g)?);
    let mut mult = mspec
        .action(0, Var::Lambda)
        .substitute(Var::Lambda, &Poly::zero())
        .substitute(Var::Partial, mspec.partial_action());
    for i in 1..=g.q() {
        mult.add_assign_ref(&Poly::var(Var::lambda_i(i)));
    }
    Ok(&(&d_tau + &tau_d) - &g.mul_poly(&mult))
}

pub fn d_squared_check<C: Scalar>(
    spec: &AlgebraSpec<C>,
    mspec: &ModuleSpec<C>,
    g: &Cochain<C>,
) -> Result<CheckReport, CohomologyError> {
    let dd = differential(spec, mspec, &differential(spec, mspec, g)?)?;
    let mut report = CheckReport::new("d-squared", format!("q={} over {}", g.q(), mspec.label()));
    report.residual("d(d(γ))", dd.is_zero(), || {
        dd.support()
            .map(|(t, v)| format!("{t:?}: {v}"))
            .collect::<Vec<_>>()
            .join("; ")
    });
    Ok(report)
}

/// Truncation window for the dimension computations.
#[derive(Clone, Copy, Debug)]
pub struct TruncationParams {
    /// Max generator index in cochain tuples.
    pub n: usize,
    /// Max total λ-degree of stored values (and max ∂-degree for free
    /// modules).
    pub d: u32,
    /// Cochain degree.
    pub q: usize,
}

/// Dimensions of the truncated (co)cycle/coboundary spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CohomologyDims {
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub h_dim: usize,
}

/// Enumerate a basis of the window cochain space: one antisymmetrized
/// monomial per orbit, per sorted tuple.
fn cochain_basis<C: Scalar>(mspec: &ModuleSpec<C>, q: usize, n: usize, d: u32) -> Vec<Cochain<C>> {
    let with_partial = mspec.values_involve_partial();
    let mut out = Vec::new();
    for tuple in sorted_tuples(n, q) {
        let perms = equal_group_permutations(&tuple);
        let mut exps = vec![0u32; q + 1]; // slot 0 is the ∂-exponent
        loop {
            let lam_total: u32 = exps[1..].iter().sum();
            let d_ok = if with_partial { exps[0] <= d } else { exps[0] == 0 };
            if lam_total <= d && d_ok {
                let mono = Monomial::from_pairs(
                    std::iter::once((Var::Partial, exps[0]))
                        .chain((1..=q).map(|i| (Var::lambda_i(i), exps[i]))),
                );
                // keep only orbit maxima so antisymmetrization is counted once
                let is_max = perms.iter().all(|(perm, _)| {
                    let permuted = mono.rename(|v| match v {
                        Var::LambdaI(i) => {
                            let slot = i as usize - 1;
                            if slot < perm.len() {
                                Var::lambda_i(perm[slot] + 1)
                            } else {
                                v
                            }
                        }
                        other => other,
                    });
                    permuted <= mono
                });
                if is_max {
                    let mut c = Cochain::zero(q);
                    c.add_at(&tuple, Poly::monomial(mono, C::one()));
                    if !c.is_zero() {
                        out.push(c);
                    }
                }
            }
            // next exponent vector with bounded entries
            let mut pos = 0;
            loop {
                if pos > q {
                    break;
                }
                exps[pos] += 1;
                if exps[pos] <= d {
                    break;
                }
                exps[pos] = 0;
                pos += 1;
            }
            if pos > q {
                break;
            }
        }
    }
    out
}

/// Intern (tuple, monomial) coordinates over a family of cochains.
struct CoordSpace {
    index: BTreeMap<(Vec<usize>, Monomial<Var>), usize>,
}

impl CoordSpace {
    fn build<'a, C: Scalar>(families: impl Iterator<Item = &'a Cochain<C>>) -> Self {
        let mut keys = std::collections::BTreeSet::new();
        for c in families {
            for (t, v) in c.support() {
                for (m, _) in v.terms() {
                    keys.insert((t.clone(), m.clone()));
                }
            }
        }
        CoordSpace { index: keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect() }
    }

    fn dim(&self) -> usize {
        self.index.len()
    }

    fn vectorize<C: Scalar>(&self, c: &Cochain<C>) -> SparseRow<C> {
        let mut row: SparseRow<C> = Vec::new();
        for (t, v) in c.support() {
            for (m, coeff) in v.terms() {
                let slot = self.index[&(t.clone(), m.clone())];
                row.push((slot, coeff.clone()));
            }
        }
        row.sort_by_key(|(s, _)| *s);
        row
    }

    fn vectorize_reduced<C: Scalar>(&self, c: &ReducedCochain<C>) -> SparseRow<C> {
        let mut row: SparseRow<C> = Vec::new();
        for (t, v) in &c.values {
            for (m, coeff) in v.terms() {
                let slot = self.index[&(t.clone(), m.clone())];
                row.push((slot, coeff.clone()));
            }
        }
        row.sort_by_key(|(s, _)| *s);
        row
    }
}

fn rank_of<C: Scalar>(ncols: usize, rows: impl Iterator<Item = SparseRow<C>>) -> usize {
    let mut b = EchelonBuilder::<C>::new(ncols);
    for r in rows {
        b.push_row(r);
    }
    b.rank()
}

fn guard<C: Scalar>(
    spec: &AlgebraSpec<C>,
    mspec: &ModuleSpec<C>,
    q: usize,
) -> Result<(), CohomologyError> {
    if q > MAX_Q {
        return Err(CohomologyError::CostGuard { q, max: MAX_Q });
    }
    if spec.has_center() {
        return Err(CohomologyError::CenteredAlgebra);
    }
    if !mspec.is_numeric() {
        return Err(CohomologyError::SymbolicParameters);
    }
    Ok(())
}

/// Cohomology dimensions on the window: kernel and image of the exact
/// differential restricted to the finite basis (window N, λ-degree ≤ D;
/// coboundary preimages get degree D+1).
pub fn cohomology_dims<C: Scalar>(
    spec: &AlgebraSpec<C>,
    mspec: &ModuleSpec<C>,
    t: TruncationParams,
    reduced: bool,
) -> Result<CohomologyDims, CohomologyError> {
    guard(spec, mspec, t.q)?;
    if reduced {
        reduced_dims(spec, mspec, t)
    } else {
        basic_dims(spec, mspec, t)
    }
}

fn basic_dims<C: Scalar>(
    spec: &AlgebraSpec<C>,
    mspec: &ModuleSpec<C>,
    t: TruncationParams,
) -> Result<CohomologyDims, CohomologyError> {
    let t = TruncationParams { n: spec.clamp_index(t.n), ..t };
    let basis_q = cochain_basis(mspec, t.q, t.n, t.d);
    let images: Vec<Cochain<C>> = basis_q
        .iter()
        .map(|b| differential(spec, mspec, b))
        .collect::<Result<_, _>>()?;

    let prev_images: Vec<Cochain<C>> = if t.q == 0 {
        Vec::new()
    } else {
        cochain_basis(mspec, t.q - 1, t.n, t.d + 1)
            .iter()
            .map(|b| differential(spec, mspec, b))
            .collect::<Result<_, _>>()?
    };

    let coords = CoordSpace::build(images.iter().chain(prev_images.iter()));
    let lambda_vars: Vec<Var> = (1..=t.q + 1).map(Var::lambda_i).collect();
    let in_space = |key: &(Vec<usize>, Monomial<Var>)| {
        let lam_deg: u32 = lambda_vars.iter().map(|v| key.1.degree_in(*v)).sum();
        lam_deg <= t.d && key.1.degree_in(Var::Partial) <= t.d && key.0.iter().all(|&i| i <= t.n)
    };

    let rank_d = rank_of(coords.dim(), images.iter().map(|c| coords.vectorize(c)));
    let cocycle_dim = basis_q.len() - rank_d;

    // dim{dφ inside the window space} = rank(dφ) − rank(out-of-window part)
    let coboundary_dim = if t.q == 0 {
        0
    } else {
        let rank_full = rank_of(coords.dim(), prev_images.iter().map(|c| coords.vectorize(c)));
        let high_keys: std::collections::BTreeSet<usize> = coords
            .index
            .iter()
            .filter(|(k, _)| !in_space(k))
            .map(|(_, &s)| s)
            .collect();
        let rank_high = rank_of(
            coords.dim(),
            prev_images.iter().map(|c| {
                coords
                    .vectorize(c)
                    .into_iter()
                    .filter(|(s, _)| high_keys.contains(s))
                    .collect()
            }),
        );
        rank_full - rank_high
    };

    Ok(CohomologyDims {
        cocycle_dim,
        coboundary_dim,
        h_dim: cocycle_dim - coboundary_dim,
    })
}

fn reduced_dims<C: Scalar>(
    spec: &AlgebraSpec<C>,
    mspec: &ModuleSpec<C>,
    t: TruncationParams,
) -> Result<CohomologyDims, CohomologyError> {
    let t = TruncationParams { n: spec.clamp_index(t.n), ..t };
    if t.q == 0 {
        return reduced_dims_q0(spec, mspec, t);
    }
    let basis_q = cochain_basis(mspec, t.q, t.n, t.d);
    let sigma_q: Vec<ReducedCochain<C>> = basis_q.iter().map(|b| sigma_reduce(mspec, b)).collect();
    let sigma_d_q: Vec<ReducedCochain<C>> = basis_q
        .iter()
        .map(|b| Ok(sigma_reduce(mspec, &differential(spec, mspec, b)?)))
        .collect::<Result<_, CohomologyError>>()?;
    let basis_prev = cochain_basis(mspec, t.q - 1, t.n, t.d + 1);
    let sigma_d_prev: Vec<ReducedCochain<C>> = basis_prev
        .iter()
        .map(|b| Ok(sigma_reduce(mspec, &differential(spec, mspec, b)?)))
        .collect::<Result<_, CohomologyError>>()?;

    // three families share one coordinate space; reduced cochains reuse the
    // (tuple, monomial) keys
    let mut keys = std::collections::BTreeSet::new();
    for fam in [&sigma_q, &sigma_d_q, &sigma_d_prev] {
        for c in fam.iter() {
            for (tup, v) in &c.values {
                for (m, _) in v.terms() {
                    keys.insert((tup.clone(), m.clone()));
                }
            }
        }
    }
    let coords = CoordSpace { index: keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect() };

    let rank_sigma = rank_of(coords.dim(), sigma_q.iter().map(|c| coords.vectorize_reduced(c)));
    let rank_sigma_d =
        rank_of(coords.dim(), sigma_d_q.iter().map(|c| coords.vectorize_reduced(c)));
    let cocycle_dim = rank_sigma - rank_sigma_d;

    // B = dim(span{σdφ} ∩ span{σγ}) = rank U + rank V − rank(U ∪ V)
    let rank_u = rank_of(coords.dim(), sigma_d_prev.iter().map(|c| coords.vectorize_reduced(c)));
    let rank_uv = rank_of(
        coords.dim(),
        sigma_d_prev
            .iter()
            .chain(sigma_q.iter())
            .map(|c| coords.vectorize_reduced(c)),
    );
    let coboundary_dim = rank_u + rank_sigma - rank_uv;

    Ok(CohomologyDims {
        cocycle_dim,
        coboundary_dim,
        h_dim: cocycle_dim - coboundary_dim,
    })
}

/// Reduced q = 0: cocycles are `{m : dm ∈ (∂_M + λ₁)·C̃¹}` modulo `∂_M·M`.
fn reduced_dims_q0<C: Scalar>(
    spec: &AlgebraSpec<C>,
    mspec: &ModuleSpec<C>,
    t: TruncationParams,
) -> Result<CohomologyDims, CohomologyError> {
    let basis_m = cochain_basis(mspec, 0, t.n, t.d);
    let basis_phi = cochain_basis(mspec, 1, t.n, t.d + 1);
    let d_images: Vec<Cochain<C>> =
        basis_m.iter().map(|b| differential(spec, mspec, b)).collect::<Result<_, _>>()?;
    let mut pmult = mspec.partial_action().clone();
    pmult.add_assign_ref(&Poly::var(Var::lambda_i(1)));
    let p_images: Vec<Cochain<C>> = basis_phi.iter().map(|b| b.mul_poly(&pmult)).collect();

    let coords = CoordSpace::build(d_images.iter().chain(p_images.iter()));
    let ncols = basis_m.len() + basis_phi.len();
    let mut builder = EchelonBuilder::<C>::new(ncols);
    // rows of [d | −P] over the shared coordinate space
    let mut rows: BTreeMap<usize, SparseRow<C>> = BTreeMap::new();
    for (col, img) in d_images.iter().enumerate() {
        for (slot, v) in coords.vectorize(img) {
            rows.entry(slot).or_default().push((col, v));
        }
    }
    for (col, img) in p_images.iter().enumerate() {
        for (slot, v) in coords.vectorize(img) {
            rows.entry(slot).or_default().push((basis_m.len() + col, -v));
        }
    }
    for (_, mut row) in rows {
        row.sort_by_key(|(s, _)| *s);
        builder.push_row(row);
    }
    let kernel = builder.kernel_basis();

    // project kernel vectors onto the m-part and measure the span
    let m_parts: Vec<Vec<C>> =
        kernel.vectors().iter().map(|v| v[..basis_m.len()].to_vec()).collect();
    let z_raw = SubspaceBasis::from_vectors(basis_m.len(), m_parts).dim();

    // ∂_M·(window values) as vectors over the m-basis coordinates
    let m_coords = CoordSpace::build(basis_m.iter());
    let p0 = rank_of(
        m_coords.dim(),
        basis_m
            .iter()
            .map(|b| m_coords.vectorize(&b.mul_poly(mspec.partial_action()))),
    );
    Ok(CohomologyDims { cocycle_dim: z_raw - p0, coboundary_dim: 0, h_dim: z_raw - p0 })
}

/// Confirm the cubic class: `γ'_{λ₁,λ₂}(J₀,J₀) = (λ₁³ − λ₂³)/2` (the skew
/// representative of λ³) is a reduced 2-cocycle and is not a reduced
/// coboundary on the window.
pub fn lambda_cubed_class_check<C: Scalar>(
    spec: &AlgebraSpec<C>,
    n: usize,
    d: u32,
) -> Result<CheckReport, CohomologyError> {
    let mspec = ModuleSpec::<C>::trivial();
    guard(spec, &mspec, 2)?;
    let n = spec.clamp_index(n);
    let mut gamma = Cochain::zero(2);
    gamma.add_at(&[0, 0], Poly::var(Var::lambda_i(1)).pow(3));
    let mut report = CheckReport::new("lambda-cubed-class", "γ'(J0,J0) = λ³ in reduced H²")
        .with_window(format!("N={n}, D={d}"));

    let sig_d = sigma_reduce(&mspec, &differential(spec, &mspec, &gamma)?);
    report.residual("σ(dγ') = 0", sig_d.is_zero(), || {
        sig_d
            .values
            .iter()
            .map(|(t, v)| format!("{t:?}: {v}"))
            .collect::<Vec<_>>()
            .join("; ")
    });

    let basis_prev = cochain_basis(&mspec, 1, n, d + 1);
    let sigma_d_prev: Vec<ReducedCochain<C>> = basis_prev
        .iter()
        .map(|b| Ok(sigma_reduce(&mspec, &differential(spec, &mspec, b)?)))
        .collect::<Result<_, CohomologyError>>()?;
    let target = sigma_reduce(&mspec, &gamma);

    let mut keys = std::collections::BTreeSet::new();
    for c in sigma_d_prev.iter().chain(std::iter::once(&target)) {
        for (tup, v) in &c.values {
            for (m, _) in v.terms() {
                keys.insert((tup.clone(), m.clone()));
            }
        }
    }
    let coords = CoordSpace { index: keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect() };
    let mut dense_rows = Vec::new();
    for c in &sigma_d_prev {
        let row = coords.vectorize_reduced(c);
        let mut dense = vec![C::zero(); coords.dim()];
        for (s, v) in row {
            dense[s] = v;
        }
        dense_rows.push(dense);
    }
    let span = SubspaceBasis::from_vectors(coords.dim(), dense_rows);
    let mut tvec = vec![C::zero(); coords.dim()];
    for (s, v) in coords.vectorize_reduced(&target) {
        tvec[s] = v;
    }
    report.residual("σγ' not a reduced coboundary", !span.in_span(&tvec), || {
        "λ³ class lies in the coboundary span".into()
    });
    Ok(report)
}
