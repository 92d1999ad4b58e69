//! Formal distributions: finitely supported Laurent expressions in one or two
//! formal variables, with coefficients in any additive structure carrying a
//! ∂-action (conformal elements, symmetric-algebra elements).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::scalar::Scalar;

/// An exponent key: one (`i64`) or two (`(i64, i64)`) formal variables.
pub trait ExpKey: Copy + Ord + Eq + fmt::Debug {
    const ARITY: usize;
    fn get(&self, var: usize) -> i64;
    fn with(&self, var: usize, value: i64) -> Self;
    /// Strictly negative in every variable — the support of `Sing`.
    fn is_singular(&self) -> bool;
}

impl ExpKey for i64 {
    const ARITY: usize = 1;
    fn get(&self, var: usize) -> i64 {
        debug_assert_eq!(var, 0);
        *self
    }
    fn with(&self, var: usize, value: i64) -> Self {
        debug_assert_eq!(var, 0);
        let _ = self;
        value
    }
    fn is_singular(&self) -> bool {
        *self <= -1
    }
}

impl ExpKey for (i64, i64) {
    const ARITY: usize = 2;
    fn get(&self, var: usize) -> i64 {
        match var {
            0 => self.0,
            1 => self.1,
            _ => panic!("two-variable key"),
        }
    }
    fn with(&self, var: usize, value: i64) -> Self {
        match var {
            0 => (value, self.1),
            1 => (self.0, value),
            _ => panic!("two-variable key"),
        }
    }
    fn is_singular(&self) -> bool {
        self.0 <= -1 && self.1 <= -1
    }
}

/// Coefficients of a formal distribution: an additive group with a scalar
/// action and a ∂-operator.
pub trait DistCoeff: Clone + Eq + fmt::Debug + fmt::Display {
    type Scalar: Scalar;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, c: &Self::Scalar) -> Self;
    /// The ∂-action on coefficients.
    fn apply_partial(&self) -> Self;
}

/// A finitely supported formal distribution `Σ coeff · z^k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dist<K: ExpKey, T> {
    terms: BTreeMap<K, T>,
}

impl<K: ExpKey, T: Clone> Dist<K, T> {
    pub fn iter(&self) -> impl Iterator<Item = (&K, &T)> {
        self.terms.iter()
    }
}

impl<K: ExpKey, T: DistCoeff> Dist<K, T> {
    pub fn zero() -> Self {
        Dist { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(k: K, t: T) -> Self {
        let mut d = Dist::zero();
        d.add_term(k, t);
        d
    }

    pub fn get(&self, k: &K) -> T {
        self.terms.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn add_term(&mut self, k: K, t: T) {
        if t.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(t);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add_ref(&t);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, t) in &other.terms {
            out.add_term(*k, t.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, t) in &other.terms {
            out.add_term(*k, t.neg_ref());
        }
        out
    }

    pub fn scale(&self, c: &T::Scalar) -> Self {
        let mut out = Dist::zero();
        for (k, t) in &self.terms {
            out.add_term(*k, t.scale(c));
        }
        out
    }

    /// Apply the coefficient-∂ to every term.
    pub fn apply_partial(&self) -> Self {
        let mut out = Dist::zero();
        for (k, t) in &self.terms {
            out.add_term(*k, t.apply_partial());
        }
        out
    }

    /// d/dz on the chosen variable.
    pub fn dz(&self, var: usize) -> Self {
        let mut out = Dist::zero();
        for (k, t) in &self.terms {
            let e = k.get(var);
            if e == 0 {
                continue;
            }
            out.add_term(k.with(var, e - 1), t.scale(&T::Scalar::int(e)));
        }
        out
    }

    /// Substitute `z ↦ −z` in the chosen variable.
    pub fn negate_var(&self, var: usize) -> Self {
        let mut out = Dist::zero();
        for (k, t) in &self.terms {
            let e = k.get(var);
            let t = if e.rem_euclid(2) == 0 { t.clone() } else { t.neg_ref() };
            out.add_term(*k, t);
        }
        out
    }

    /// Keep only terms with strictly negative exponents in every variable.
    pub fn sing(&self) -> Self {
        Dist {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.is_singular())
                .map(|(k, t)| (*k, t.clone()))
                .collect(),
        }
    }

    /// `Sing(e^{z∂} f)` in the chosen variable, computed exactly: the series
    /// truncates at the pole order because higher terms only produce
    /// nonnegative powers.
    pub fn sing_exp_partial(&self, var: usize) -> Self {
        let mut out = Dist::zero();
        for (k, t) in &self.terms {
            let e = k.get(var);
            if e >= 0 {
                continue;
            }
            let mut dt = t.clone();
            for j in 0..=(-1 - e) {
                let term = if j == 0 { dt.clone() } else {
                    dt = dt.apply_partial();
                    dt.clone()
                };
                let coeff = T::Scalar::one() / T::Scalar::factorial(j as u32);
                out.add_term(k.with(var, e + j), term.scale(&coeff));
            }
        }
        out.sing()
    }
}

impl<K: ExpKey, T: DistCoeff> Dist<K, T> {
    pub fn map_coeffs(&self, f: impl Fn(&T) -> T) -> Self {
        let mut out = Dist::zero();
        for (k, t) in &self.terms {
            out.add_term(*k, f(t));
        }
        out
    }
}

impl<K: ExpKey, T: fmt::Display> fmt::Display for Dist<K, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["z1", "z2"];
        let mut first = true;
        for (k, t) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({t})")?;
            for var in 0..K::ARITY {
                let e = k.get(var);
                if e != 0 {
                    let name = if K::ARITY == 1 { "z" } else { names[var] };
                    write!(f, " {name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::ConformalElement;
    use crate::parse::parse_element;
    use crate::Rat;

    type Elem = ConformalElement<Rat>;
    type D1 = Dist<i64, Elem>;

    fn elem(s: &str) -> Elem {
        parse_element(s).unwrap()
    }

    #[test]
    fn sing_keeps_only_negative_powers() {
        let mut d = D1::zero();
        d.add_term(2, Elem::generator(0));
        d.add_term(-1, Elem::generator(0));
        d.add_term(-2, Elem::generator(0).scale(&Rat::int(3)));
        let s = d.sing();
        assert_eq!(s.get(&2), Elem::zero());
        assert_eq!(s.get(&-1), Elem::generator(0));
        assert_eq!(s.get(&-2), Elem::generator(0).scale(&Rat::int(3)));
    }

    #[test]
    fn sing_in_two_variables_needs_all_negative() {
        let mut d = Dist::<(i64, i64), Elem>::zero();
        d.add_term((-1, 0), Elem::generator(0));
        d.add_term((-2, -1), Elem::generator(1));
        let s = d.sing();
        assert!(s.get(&(-1, 0)).is_zero());
        assert_eq!(s.get(&(-2, -1)), Elem::generator(1));
    }

    #[test]
    fn sing_is_idempotent_and_commutes_with_dz() {
        // over a spread of pseudo-random distributions
        let mut seed = 0x51u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 9) as i64 - 4
        };
        for _ in 0..20 {
            let mut d = D1::zero();
            for e in -4..=3i64 {
                let c = next();
                let m = next().rem_euclid(3) as u32;
                if c != 0 {
                    d.add_term(e, Elem::partial_power(0, m).scale(&Rat::int(c)));
                }
            }
            assert_eq!(d.sing().sing(), d.sing());
            assert_eq!(d.sing().dz(0).sing(), d.dz(0).sing());
        }
    }

    #[test]
    fn sing_exp_partial_truncates_exactly() {
        // f = 2J0 z^{-2}: Sing(e^{z∂} f) = 2J0 z^{-2} + 2∂J0 z^{-1}
        let d = D1::term(-2, elem("2 J0"));
        let s = d.sing_exp_partial(0);
        assert_eq!(s.get(&-2), elem("2 J0"));
        assert_eq!(s.get(&-1), elem("2*d J0"));
        assert!(s.get(&0).is_zero());
        // nonnegative powers contribute nothing
        let d = D1::term(0, elem("J0"));
        assert!(d.sing_exp_partial(0).is_zero());
    }
}
