//! Property tests for the polynomial substrate and the exact solvers.

use proptest::prelude::*;

use lieconf_core::linalg::Matrix;
use lieconf_core::poly::{Monomial, Poly};
use lieconf_core::vars::Var;
use lieconf_core::{Rat, RatPoly, Scalar};

fn arb_var() -> impl Strategy<Value = Var> {
    prop_oneof![
        Just(Var::Partial),
        Just(Var::Lambda),
        Just(Var::Mu),
        Just(Var::lambda_i(1)),
        Just(Var::lambda_i(2)),
        Just(Var::Delta),
        Just(Var::Alpha),
    ]
}

fn arb_poly() -> impl Strategy<Value = RatPoly> {
    // up to 6 random terms with small exponents and coefficients
    prop::collection::vec(
        (
            prop::collection::vec((arb_var(), 0u32..3), 0..3),
            -9i64..10,
        ),
        0..6,
    )
    .prop_map(|terms| {
        let mut p = RatPoly::zero();
        for (pairs, c) in terms {
            p.add_assign_ref(&Poly::monomial(Monomial::from_pairs(pairs), Rat::int(c)));
        }
        p
    })
}

proptest! {
    // Canonical form: p − q = 0 exactly when the stored maps agree, and
    // arithmetic built two different ways lands on the same map.
    #[test]
    fn canonical_form_is_unique(p in arb_poly(), q in arb_poly()) {
        let diff = &p - &q;
        prop_assert_eq!(diff.is_zero(), p == q);
        let left = &(&p + &q) * &p;
        let right = &(&p * &p) + &(&q * &p);
        prop_assert_eq!(left, right);
    }

    // Substitution is homomorphic and composes with itself on unrelated
    // variables.
    #[test]
    fn substitution_composes(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        let q = q.substitute(Var::Nu, &RatPoly::zero());
        // keep the replacement polys free of each other's variable
        let q = q.substitute(Var::Mu, &RatPoly::one());
        let r = r.substitute(Var::Lambda, &RatPoly::one());
        let step = p.substitute(Var::Lambda, &q).substitute(Var::Mu, &r);
        let swapped = p.substitute(Var::Mu, &r).substitute(Var::Lambda, &q);
        prop_assert_eq!(step, swapped);
    }

    #[test]
    fn substitution_is_multiplicative(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        let lhs = (&p * &q).substitute(Var::Partial, &r);
        let rhs = &p.substitute(Var::Partial, &r) * &q.substitute(Var::Partial, &r);
        prop_assert_eq!(lhs, rhs);
    }

    // Σ_k coefficient_in(p, v, k) v^k reconstructs p.
    #[test]
    fn coefficient_reconstruction(p in arb_poly(), v in arb_var()) {
        let mut rebuilt = RatPoly::zero();
        for k in 0..=p.degree_in(v) {
            let part = p.coefficient_in(v, k);
            rebuilt.add_assign_ref(&(&part * &RatPoly::var(v).pow(k)));
        }
        prop_assert_eq!(rebuilt, p);
    }

    // d/dv commutes with substitution in an unrelated variable.
    #[test]
    fn derivative_commutes_with_unrelated_substitution(p in arb_poly(), r in arb_poly()) {
        let r = r.substitute(Var::Lambda, &RatPoly::one());
        let lhs = p.substitute(Var::Mu, &r).partial_derivative(Var::Lambda);
        let rhs = p.partial_derivative(Var::Lambda).substitute(Var::Mu, &r);
        prop_assert_eq!(lhs, rhs);
    }

    // Leibniz rule for the formal derivative.
    #[test]
    fn derivative_is_a_derivation(p in arb_poly(), q in arb_poly(), v in arb_var()) {
        let lhs = (&p * &q).partial_derivative(v);
        let rhs = &(&p.partial_derivative(v) * &q) + &(&p * &q.partial_derivative(v));
        prop_assert_eq!(lhs, rhs);
    }

    // Parser round-trip through the printer.
    #[test]
    fn printer_parser_round_trip(p in arb_poly()) {
        let printed = p.to_string();
        let reparsed: RatPoly = lieconf_core::parse::parse_poly(&printed).unwrap();
        prop_assert_eq!(reparsed, p);
    }
}

fn arb_matrix() -> impl Strategy<Value = Matrix<Rat>> {
    (1usize..5, 1usize..6).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(prop::collection::vec(-5i64..6, cols), rows).prop_map(move |data| {
            Matrix::from_rows(
                cols,
                data.into_iter()
                    .map(|r| r.into_iter().map(Rat::int).collect())
                    .collect(),
            )
        })
    })
}

proptest! {
    // Every kernel vector really is annihilated, and rank + nullity = cols.
    #[test]
    fn rank_nullity_and_kernel(m in arb_matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.dim(), m.ncols());
        for v in k.vectors() {
            prop_assert!(m.mul_vec(v).iter().all(|c| num_traits::Zero::is_zero(c)));
        }
    }

    #[test]
    fn rref_is_idempotent(m in arb_matrix()) {
        let (r, pivots) = m.rref();
        let (r2, pivots2) = r.rref();
        prop_assert_eq!(r, r2);
        prop_assert_eq!(pivots, pivots2);
    }
}
