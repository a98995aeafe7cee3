//! Symbolic exterior calculus with Laurent-polynomial coefficients.

mod form;
mod laurent;
mod parse;

pub use form::{Chart, LaurentMap, PrimitiveStrategy, SymbolicForm};
pub use laurent::{LaurentPoly, PolyDisplay};
pub use parse::{parse_form, parse_poly, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("form is not closed")]
    NotClosed,
    #[error("no polynomial primitive: a coefficient has a negative power of an integration variable")]
    NotPolynomial,
    #[error("substitution leaves the Laurent ring")]
    NonLaurentComposition,
    #[error("map does not land in the chart of the form")]
    ChartMismatch,
    #[error("a 0-form has no primitive")]
    DegreeZero,
    #[error("form has differentials outside the integration variables")]
    NotFiberwise,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use std::sync::Arc;

    fn chart(names: &[&str]) -> Arc<Chart> {
        Chart::new(names.iter().copied())
    }

    fn f(src: &str, c: &Arc<Chart>) -> SymbolicForm {
        parse_form(src, c).unwrap_or_else(|e| panic!("{src}: {e}"))
    }

    #[test]
    fn exterior_derivative_examples() {
        let c = chart(&["a", "b"]);
        assert_eq!(f("a*db", &c).exterior_d(), f("da^db", &c));
        assert!(f("da", &c).exterior_d().is_zero());
        let xy = chart(&["x", "y"]);
        assert_eq!(f("x^2*y*dy", &xy).exterior_d(), f("2*x*y*dx^dy", &xy));
    }

    #[test]
    fn pullback_examples() {
        let ab = chart(&["a", "b"]);
        let src = chart(&["a''", "b'"]);
        let rename = LaurentMap::new(&src, &ab, vec![src.var("a''"), src.var("b'")]);
        assert_eq!(f("da^db", &ab).pullback(&rename).unwrap(), f("da''^db'", &src));

        let g2 = chart(&["a'", "b'", "a", "b"]);
        let m = LaurentMap::new(
            &g2,
            &ab,
            vec![g2.var("a'").add(&g2.var("a")), g2.var("b'").add(&g2.var("b"))],
        );
        assert_eq!(f("a*db", &ab).pullback(&m).unwrap(), f("(a'+a)*(db'+db)", &g2));

        let z = chart(&["z"]);
        let sq = LaurentMap::new(&z, &z, vec![z.var("z").mul(&z.var("z"))]);
        assert_eq!(f("dz/z", &z).pullback(&sq).unwrap(), f("2*dz/z", &z));

        let shift = LaurentMap::new(&ab, &z, vec![ab.var("a").add(&ab.var("b"))]);
        assert_eq!(f("dz/z", &z).pullback(&shift), Err(FormError::NonLaurentComposition));
    }

    #[test]
    fn primitive_examples() {
        let c = chart(&["a", "b"]);
        let omega = f("da^db", &c);
        assert_eq!(omega.primitive(PrimitiveStrategy::Iterated).unwrap(), f("a*db", &c));
        let radial = omega.primitive(PrimitiveStrategy::Radial).unwrap();
        assert_eq!(radial, f("1/2*a*db - 1/2*b*da", &c));
        assert_eq!(radial.exterior_d(), omega);
        let x = chart(&["x"]);
        assert_eq!(f("dx", &x).primitive(PrimitiveStrategy::Radial).unwrap(), f("x", &x));
        let z = chart(&["z"]);
        assert_eq!(f("dz/z", &z).primitive(PrimitiveStrategy::Radial), Err(FormError::NotPolynomial));
        assert_eq!(f("a*db", &c).primitive(PrimitiveStrategy::Radial), Err(FormError::NotClosed));
    }

    #[test]
    fn fiberwise_primitive_keeps_parameters() {
        let c = chart(&["t", "s", "p"]);
        // closed in (t, s), Laurent in the parameter p
        let omega = f("p^-1*s*dt + (p^-1*t + p^-2)*ds", &c);
        for strategy in [PrimitiveStrategy::Radial, PrimitiveStrategy::Iterated] {
            let eta = omega.primitive_in(&[0, 1], strategy).unwrap();
            assert_eq!(eta.d_in(&[0, 1]), omega);
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let c = chart(&["a'", "b'", "a", "b"]);
        for src in ["a'*b", "(a' + a)*db", "-da^db + 1/2*a*db'^da", "a'^-2*b^3 - 7", "0"] {
            let form = f(src, &c);
            let printed = form.to_string();
            assert_eq!(f(&printed, &c), form, "{src} -> {printed}");
        }
        assert_eq!(f("a'*b", &c).to_string(), "a'*b");
        assert_eq!(f("(a'+a)*db", &c).to_string(), "(a' + a)*db");
    }

    #[test]
    fn parse_errors() {
        let c = chart(&["x", "y"]);
        assert!(parse_form("x + dx", &c).is_err());
        assert!(parse_form("q", &c).is_err());
        assert!(parse_form("dx/(x+y)", &c).is_err());
        assert!(parse_form("(x", &c).is_err());
        assert!(parse_form("dx^2", &c).is_err());
    }

    #[test]
    fn evaluation_matches_wedge() {
        let c = chart(&["x", "y"]);
        let w = f("x*dx^dy", &c);
        let v = w.evaluate(&[rat(3), rat(5)], &[vec![rat(1), rat(2)], vec![rat(0), rat(1)]]).unwrap();
        assert_eq!(v, rat(3));
    }
}
