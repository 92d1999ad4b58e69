//! Exact sparse multivariate polynomials.
//!
//! `Poly<V, C>` is a finite map from monomials to nonzero coefficients,
//! generic over the variable key `V` and the scalar field `C`. The map is
//! kept in canonical form at all times: no zero coefficients, monomials
//! ordered graded-lexicographically. Two polynomials are equal exactly when
//! their stored maps are identical, which is what every identity check in
//! this crate ultimately reduces to.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Variable keys: small copyable symbols with a fixed total order.
pub trait VarKey: Copy + Ord + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {}
impl<T> VarKey for T where T: Copy + Ord + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {}

/// A monomial: sorted `(variable, exponent)` pairs, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial<V: VarKey> {
    exps: Vec<(V, u32)>,
}

impl<V: VarKey> Monomial<V> {
    /// The empty monomial (constant term).
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    /// A single variable to the first power.
    pub fn var(v: V) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    /// Build from arbitrary pairs; merges duplicates and drops zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (V, u32)>) -> Self {
        let mut exps: Vec<(V, u32)> = Vec::new();
        for (v, e) in pairs {
            if e == 0 {
                continue;
            }
            match exps.iter_mut().find(|(w, _)| *w == v) {
                Some((_, old)) => *old += e,
                None => exps.push((v, e)),
            }
        }
        exps.sort_by_key(|(v, _)| *v);
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: V) -> u32 {
        self.exps.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (V, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial::from_pairs(self.iter().chain(other.iter()))
    }

    /// Drop the `v`-factor entirely.
    pub fn without(&self, v: V) -> Self {
        Monomial { exps: self.exps.iter().copied().filter(|(w, _)| *w != v).collect() }
    }

    /// Apply a variable renaming. The map need not be injective; exponents of
    /// colliding targets merge.
    pub fn rename(&self, f: impl Fn(V) -> V) -> Self {
        Monomial::from_pairs(self.iter().map(|(v, e)| (f(v), e)))
    }
}

// Graded-lex: total degree first, then lexicographic on the (sorted) exponent
// vectors with earlier variables weighing more.
impl<V: VarKey> Ord for Monomial<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a = self.exps.iter();
        let mut b = other.exps.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                // The side that still has factors holds a *later* variable
                // at this position, hence is lex-smaller.
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => {
                    match va.cmp(vb) {
                        // Smaller variable first means a higher power of an
                        // earlier variable: lex-greater.
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(eb) {
                            Ordering::Equal => {}
                            ord => return ord,
                        },
                    }
                }
            }
        }
    }
}

impl<V: VarKey> PartialOrd for Monomial<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: VarKey> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.exps {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A sparse polynomial in canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<V: VarKey, C: Scalar> {
    terms: BTreeMap<Monomial<V>, C>,
}

impl<V: VarKey, C: Scalar> Poly<V, C> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    /// The constant polynomial `n`.
    pub fn int(n: i64) -> Self {
        Poly::constant(C::int(n))
    }

    pub fn var(v: V) -> Self {
        Poly::monomial(Monomial::var(v), C::one())
    }

    pub fn monomial(m: Monomial<V>, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &C)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: V) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: V) -> bool {
        self.terms.keys().any(|m| m.degree_in(v) > 0)
    }

    /// Total degree counting only the given variables.
    pub fn degree_in_set(&self, vars: &[V]) -> u32 {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|v| m.degree_in(*v)).sum())
            .max()
            .unwrap_or(0)
    }

    fn insert_add(&mut self, m: Monomial<V>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.insert_add(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.insert_add(m.clone(), -c.clone());
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_add(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul_ref(self);
        }
        out
    }

    /// Substitute `v := q`. Homomorphic: acts factor-wise on monomials.
    pub fn substitute(&self, v: V, q: &Self) -> Self {
        // Cache successive powers of q; exponents are small in practice.
        let mut powers: Vec<Poly<V, C>> = vec![Poly::one()];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul_ref(q);
                powers.push(next);
            }
            let rest = Poly::monomial(m.without(v), c.clone());
            out.add_assign_ref(&rest.mul_ref(&powers[e]));
        }
        out
    }

    /// Simultaneously rename variables. Safe even when the target set
    /// overlaps the source set, because each monomial is re-keyed atomically.
    pub fn rename_vars(&self, f: impl Fn(V) -> V) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.insert_add(m.rename(&f), c.clone());
        }
        out
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial_derivative(&self, v: V) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(v);
            if e == 0 {
                continue;
            }
            let lowered = Monomial::from_pairs(
                m.iter().map(|(w, k)| if w == v { (w, k - 1) } else { (w, k) }),
            );
            out.insert_add(lowered, c.clone() * C::int(e as i64));
        }
        out
    }

    /// The coefficient of `v^k`, as a polynomial free of `v`.
    pub fn coefficient_in(&self, v: V, k: u32) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.degree_in(v) == k {
                out.insert_add(m.without(v), c.clone());
            }
        }
        out
    }

    /// Evaluate the coefficient map, consuming monomials into `f`'s image.
    pub fn map_monomials<W: VarKey>(&self, f: impl Fn(&Monomial<V>) -> Monomial<W>) -> Poly<W, C> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.insert_add(f(m), c.clone());
        }
        out
    }
}

impl<V: VarKey, C: Scalar> Add for &Poly<V, C> {
    type Output = Poly<V, C>;
    fn add(self, other: Self) -> Poly<V, C> {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }
}

impl<V: VarKey, C: Scalar> Sub for &Poly<V, C> {
    type Output = Poly<V, C>;
    fn sub(self, other: Self) -> Poly<V, C> {
        let mut out = self.clone();
        out.sub_assign_ref(other);
        out
    }
}

impl<V: VarKey, C: Scalar> Mul for &Poly<V, C> {
    type Output = Poly<V, C>;
    fn mul(self, other: Self) -> Poly<V, C> {
        self.mul_ref(other)
    }
}

impl<V: VarKey, C: Scalar> Neg for &Poly<V, C> {
    type Output = Poly<V, C>;
    fn neg(self) -> Poly<V, C> {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl<V: VarKey, C: Scalar> fmt::Display for Poly<V, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest terms first reads naturally.
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars::Var;
    use crate::Rat;

    type P = Poly<Var, Rat>;

    fn d() -> P {
        P::var(Var::Partial)
    }
    fn l() -> P {
        P::var(Var::Lambda)
    }
    fn mu() -> P {
        P::var(Var::Mu)
    }

    #[test]
    fn additive_cancellation() {
        // (d + 2l) + (-2l) = d
        let p = &d() + &l().scale(&Rat::int(2));
        let q = l().scale(&Rat::int(-2));
        assert_eq!(&p + &q, d());
    }

    #[test]
    fn difference_of_squares() {
        // (d + 2l)(d - 2l) = d^2 - 4 l^2
        let p = &d() + &l().scale(&Rat::int(2));
        let q = &d() - &l().scale(&Rat::int(2));
        let expect = &d().pow(2) - &l().pow(2).scale(&Rat::int(4));
        assert_eq!(&p * &q, expect);
    }

    #[test]
    fn scaling_distributes() {
        // (3/2)(d + 2l) = (3/2)d + 3l
        let p = &d() + &l().scale(&Rat::int(2));
        let half3 = Rat::new(3.into(), 2.into());
        let expect = &d().scale(&half3) + &l().scale(&Rat::int(3));
        assert_eq!(p.scale(&half3), expect);
    }

    #[test]
    fn substitution_examples() {
        // d := -l - m in d + 2l gives l - m
        let p = &d() + &l().scale(&Rat::int(2));
        let q = &(-&l()) - &mu();
        assert_eq!(p.substitute(Var::Partial, &q), &l() - &mu());

        // l := 0 in l^3 gives 0
        assert_eq!(l().pow(3).substitute(Var::Lambda, &P::zero()), P::zero());

        // d := d + m in d^2 gives d^2 + 2md + m^2
        let shifted = d().pow(2).substitute(Var::Partial, &(&d() + &mu()));
        let expect = &(&d().pow(2) + &(&d() * &mu()).scale(&Rat::int(2))) + &mu().pow(2);
        assert_eq!(shifted, expect);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(l().pow(3).partial_derivative(Var::Lambda), l().pow(2).scale(&Rat::int(3)));
        let p = &d() + &l().scale(&Rat::int(2));
        assert_eq!(p.partial_derivative(Var::Lambda), P::int(2));
        assert_eq!(p.partial_derivative(Var::Mu), P::zero());
    }

    #[test]
    fn coefficient_extraction_examples() {
        let p = &d() + &l().scale(&Rat::int(2));
        assert_eq!(p.coefficient_in(Var::Lambda, 1), P::int(2));
        assert_eq!(p.coefficient_in(Var::Lambda, 0), d());
        assert_eq!(l().pow(3).coefficient_in(Var::Lambda, 3), P::one());
    }

    #[test]
    fn graded_lex_ordering() {
        // deg first, then earlier-variable powers dominate
        let m_d2 = Monomial::from_pairs([(Var::Partial, 2)]);
        let m_dl = Monomial::from_pairs([(Var::Partial, 1), (Var::Lambda, 1)]);
        let m_l2 = Monomial::from_pairs([(Var::Lambda, 2)]);
        let m_d = Monomial::var(Var::Partial);
        assert!(m_d2 > m_dl);
        assert!(m_dl > m_l2);
        assert!(m_l2 > m_d);
    }

    #[test]
    fn display_is_readable() {
        let p = &d().scale(&Rat::int(2)) + &l().scale(&Rat::int(5));
        assert_eq!(p.to_string(), "2*d + 5*l");
        let q = &d().pow(2) - &l().pow(2).scale(&Rat::int(4));
        assert_eq!(q.to_string(), "d^2 - 4*l^2");
        assert_eq!(P::zero().to_string(), "0");
        assert_eq!((-&l().pow(3)).to_string(), "-l^3");
    }
}
