//! The fixed variable registry.
//!
//! Every polynomial in the engine lives over this closed set of symbols:
//! the module generator `∂`, the bracket variables `λ, μ, ν`, the cochain
//! variables `λ₁, λ₂, …`, and the scalar parameters `Δ, α, a, c`. The
//! declaration order below is the total order used for graded-lex monomial
//! comparison, so it is fixed: changing it changes canonical forms.

use std::fmt;

/// A registered indeterminate. Textual names (`d`, `l`, `m`, `nu`, `l1`…,
/// `D`, `A`, `a`, `c`) are case-sensitive and round-trip through the parser.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    /// `d` — the translation generator ∂.
    Partial,
    /// `l` — the λ of a λ-bracket.
    Lambda,
    /// `m` — the second bracket variable μ.
    Mu,
    /// `nu` — a scratch bracket variable, kept free for internal
    /// substitutions like ν ↦ λ+μ.
    Nu,
    /// `l1`, `l2`, … — the cochain variables λ₁, λ₂, ….
    LambdaI(u8),
    /// `D` — the conformal weight Δ of the rank-1 module family.
    Delta,
    /// `A` — the shift parameter α of the rank-1 module family.
    Alpha,
    /// `a` — the scalar through which ∂ acts on the one-dimensional module.
    ParamA,
    /// `c` — a free scalar parameter (central-charge coefficient).
    ParamC,
}

impl Var {
    /// The i-th cochain variable λ_i (1-based).
    pub fn lambda_i(i: usize) -> Var {
        assert!(i >= 1 && i <= u8::MAX as usize, "cochain variable index out of range: {i}");
        Var::LambdaI(i as u8)
    }

    /// Parse a textual variable name.
    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "d" => Some(Var::Partial),
            "l" => Some(Var::Lambda),
            "m" => Some(Var::Mu),
            "nu" => Some(Var::Nu),
            "D" => Some(Var::Delta),
            "A" => Some(Var::Alpha),
            "a" => Some(Var::ParamA),
            "c" => Some(Var::ParamC),
            _ => {
                let rest = name.strip_prefix('l')?;
                let i: usize = rest.parse().ok()?;
                if i >= 1 && i <= u8::MAX as usize && rest == i.to_string() {
                    Some(Var::LambdaI(i as u8))
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Partial => write!(f, "d"),
            Var::Lambda => write!(f, "l"),
            Var::Mu => write!(f, "m"),
            Var::Nu => write!(f, "nu"),
            Var::LambdaI(i) => write!(f, "l{i}"),
            Var::Delta => write!(f, "D"),
            Var::Alpha => write!(f, "A"),
            Var::ParamA => write!(f, "a"),
            Var::ParamC => write!(f, "c"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let vars = [
            Var::Partial,
            Var::Lambda,
            Var::Mu,
            Var::Nu,
            Var::lambda_i(1),
            Var::lambda_i(17),
            Var::Delta,
            Var::Alpha,
            Var::ParamA,
            Var::ParamC,
        ];
        for v in vars {
            assert_eq!(Var::from_name(&v.to_string()), Some(v));
        }
    }

    #[test]
    fn rejects_malformed_names() {
        for bad in ["x", "l0", "l01", "l256", "dd", "", "L1"] {
            assert_eq!(Var::from_name(bad), None, "{bad:?} should not parse");
        }
    }

    #[test]
    fn registry_order_is_fixed() {
        // The graded-lex tie-break relies on this exact order.
        assert!(Var::Partial < Var::Lambda);
        assert!(Var::Lambda < Var::Mu);
        assert!(Var::Mu < Var::Nu);
        assert!(Var::Nu < Var::lambda_i(1));
        assert!(Var::lambda_i(1) < Var::lambda_i(2));
        assert!(Var::lambda_i(255) < Var::Delta);
        assert!(Var::Delta < Var::Alpha);
        assert!(Var::Alpha < Var::ParamA);
        assert!(Var::ParamA < Var::ParamC);
    }
}
