//! The module of meromorphic units on `C` with divisor supported at `0`:
//! fibers `C*` away from the origin and `C* × Z` over it, acted on by the
//! scaling groupoid `C* ⋉ C`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::exactalg::Rat;
use crate::forms::{parse_poly, Chart, LaurentPoly};

/// Gaussian rational.
pub type GRat = Complex<Rat>;

pub const DEFAULT_SERIES_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivisorError {
    #[error("elements lie over different base points")]
    FiberMismatch,
    #[error("the scalar must be nonzero")]
    ZeroScalar,
    #[error("the fiber coordinate must be nonzero")]
    ZeroFiber,
    #[error("the unit part must be nonzero at the origin")]
    UnitViolation,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

pub fn grat(re: Rat) -> GRat {
    Complex::new(re, Rat::zero())
}

fn gpow(z: &GRat, n: i64) -> GRat {
    let mut out = GRat::one();
    let base = if n < 0 { GRat::one() / z.clone() } else { z.clone() };
    for _ in 0..n.unsigned_abs() {
        out = out * base.clone();
    }
    out
}

/// `(x; y; i)`: base point `x`, fiber coordinate `y ≠ 0`, order `i`.
/// `(x, y, i) ~ (x, x^{-j} y, i + j)` whenever `x ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogPointElement {
    pub x: GRat,
    pub y: GRat,
    pub i: i64,
}

impl LogPointElement {
    pub fn new(x: GRat, y: GRat, i: i64) -> Result<Self, DivisorError> {
        if y.is_zero() {
            return Err(DivisorError::ZeroFiber);
        }
        Ok(Self { x, y, i })
    }

    pub fn identity(x: GRat) -> Self {
        Self { x, y: GRat::one(), i: 0 }
    }

    pub fn inverse(&self) -> Self {
        Self { x: self.x.clone(), y: GRat::one() / self.y.clone(), i: -self.i }
    }

    /// Canonical representative: `i = 0` away from the origin.
    pub fn normalize(&self) -> Self {
        if self.x.is_zero() || self.i == 0 {
            return self.clone();
        }
        Self { x: self.x.clone(), y: gpow(&self.x, self.i) * self.y.clone(), i: 0 }
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.normalize() == other.normalize()
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, DivisorError> {
        if self.x != other.x {
            return Err(DivisorError::FiberMismatch);
        }
        Ok(Self { x: self.x.clone(), y: self.y.clone() * other.y.clone(), i: self.i + other.i }.normalize())
    }
}

impl fmt::Display for LogPointElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}; {})", fmt_grat(&self.x), fmt_grat(&self.y), self.i)
    }
}

pub fn fmt_grat(z: &GRat) -> String {
    let im = &z.im;
    if im.is_zero() {
        return z.re.to_string();
    }
    let im_part = if *im == Rat::one() {
        "i".to_string()
    } else if *im == -Rat::one() {
        "-i".to_string()
    } else {
        format!("{im}i")
    };
    if z.re.is_zero() {
        im_part
    } else if im_part.starts_with('-') {
        format!("{}{}", z.re, im_part)
    } else {
        format!("{}+{}", z.re, im_part)
    }
}

fn parse_rat(s: &str) -> Result<Rat, DivisorError> {
    let s = s.trim();
    let err = || DivisorError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(n.trim().parse().map_err(|_| err())?, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// `a`, `bi`, `a+bi`, `a-bi` with rational `a`, `b`.
pub fn parse_grat(src: &str) -> Result<GRat, DivisorError> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else { return Ok(grat(parse_rat(&s)?)) };
    // split at the last sign that is not the leading one
    let cut = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(k, _)| k).last();
    let (re, im) = match cut {
        Some(k) => (parse_rat(&body[..k])?, &body[k..]),
        None => (Rat::zero(), body),
    };
    let im = match im.trim_start_matches('+') {
        "" => Rat::one(),
        "-" => -Rat::one(),
        t => parse_rat(t)?,
    };
    Ok(Complex::new(re, im))
}

impl FromStr for LogPointElement {
    type Err = DivisorError;

    fn from_str(src: &str) -> Result<Self, DivisorError> {
        let err = || DivisorError::Parse(src.to_string());
        let inner = src.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(err)?;
        let parts: Vec<&str> = inner.split(';').collect();
        let [x, y, i] = parts.as_slice() else { return Err(err()) };
        Self::new(parse_grat(x)?, parse_grat(y)?, i.trim().parse().map_err(|_| err())?)
    }
}

/// Arrow `(a, x): x → a x` of the scaling groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingArrow {
    pub a: GRat,
    pub x: GRat,
}

impl ScalingArrow {
    pub fn new(a: GRat, x: GRat) -> Result<Self, DivisorError> {
        if a.is_zero() {
            return Err(DivisorError::ZeroScalar);
        }
        Ok(Self { a, x })
    }

    pub fn target(&self) -> GRat {
        self.a.clone() * self.x.clone()
    }

    /// `self ∘ first`, defined when `first` ends where `self` starts.
    pub fn after(&self, first: &Self) -> Result<Self, DivisorError> {
        if first.target() != self.x {
            return Err(DivisorError::FiberMismatch);
        }
        Ok(Self { a: self.a.clone() * first.a.clone(), x: first.x.clone() })
    }
}

/// `(a, x)·(x, y, i) = (a x, a^{-i} y, i)`.
pub fn act(g: &ScalingArrow, p: &LogPointElement) -> Result<LogPointElement, DivisorError> {
    if g.a.is_zero() {
        return Err(DivisorError::ZeroScalar);
    }
    if g.x != p.x {
        return Err(DivisorError::FiberMismatch);
    }
    Ok(LogPointElement { x: g.target(), y: gpow(&g.a, -p.i) * p.y.clone(), i: p.i }.normalize())
}

/// The section `x ↦ (x, f(x), n)`, identified with `x^n f(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeromorphicSection {
    pub n: i64,
    pub f: LaurentPoly,
}

impl MeromorphicSection {
    pub fn new(n: i64, f: LaurentPoly) -> Result<Self, DivisorError> {
        if f.nvars() != 1 || !f.is_polynomial() || f.constant_term().is_zero() {
            return Err(DivisorError::UnitViolation);
        }
        Ok(Self { n, f })
    }

    pub fn multiply(&self, other: &Self) -> Self {
        Self { n: self.n + other.n, f: self.f.mul(&other.f) }
    }

    /// `x^n f(x)` as a one-variable Laurent polynomial.
    pub fn to_meromorphic(&self) -> LaurentPoly {
        let n = i32::try_from(self.n).expect("order fits in i32");
        LaurentPoly::monomial(vec![n], Rat::one()).mul(&self.f)
    }

    /// The element over `x`; `None` if `f` vanishes there.
    pub fn at(&self, x: &GRat) -> Option<LogPointElement> {
        let y = self.f.terms().fold(GRat::zero(), |acc, (e, c)| acc + gpow(x, e[0] as i64) * grat(c.clone()));
        LogPointElement::new(x.clone(), y, self.n).ok()
    }

    /// `n + x f'(x) / f(x)` as a power series through `x^order`.
    pub fn dlog(&self, order: usize) -> LaurentPoly {
        let xf = LaurentPoly::var(1, 0).mul(&self.f.partial(0));
        let num = coefficients(&xf, order);
        let inv = series_inverse(&coefficients(&self.f, order), order);
        let mut out = LaurentPoly::constant(1, Rat::from_integer(self.n.into()));
        for k in 0..=order {
            let c: Rat = (0..=k).fold(Rat::zero(), |acc, j| acc + num[j].clone() * inv[k - j].clone());
            if !c.is_zero() {
                out = out.add(&LaurentPoly::monomial(vec![k as i32], c));
            }
        }
        out
    }
}

impl fmt::Display for MeromorphicSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} * ({})", self.n, self.f.display(&["x"]))
    }
}

impl FromStr for MeromorphicSection {
    type Err = DivisorError;

    /// `x^n * (poly)`, `x^n`, `x`, or `(poly)`.
    fn from_str(src: &str) -> Result<Self, DivisorError> {
        let chart = Chart::new(["x"]);
        let err = |s: &str| DivisorError::Parse(s.to_string());
        let s = src.trim();
        let (n, rest) = if let Some(after) = s.strip_prefix("x^") {
            let end = after.find('*').unwrap_or(after.len());
            let n: i64 = after[..end].trim().parse().map_err(|_| err(src))?;
            (n, after[end..].trim_start_matches('*').trim())
        } else if let Some(after) = s.strip_prefix('x').filter(|a| a.trim().is_empty() || a.trim_start().starts_with('*')) {
            (1, after.trim().trim_start_matches('*').trim())
        } else {
            (0, s)
        };
        let f = if rest.is_empty() {
            LaurentPoly::one(1)
        } else {
            parse_poly(rest, &chart).map_err(|e| DivisorError::Parse(e.to_string()))?
        };
        Self::new(n, f)
    }
}

pub fn section_to_meromorphic(n: i64, f: &LaurentPoly) -> Result<LaurentPoly, DivisorError> {
    Ok(MeromorphicSection::new(n, f.clone())?.to_meromorphic())
}

pub fn dlog_section(n: i64, f: &LaurentPoly, order: usize) -> Result<LaurentPoly, DivisorError> {
    Ok(MeromorphicSection::new(n, f.clone())?.dlog(order))
}

fn coefficients(p: &LaurentPoly, order: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); order + 1];
    for (e, c) in p.terms() {
        if let Ok(k) = usize::try_from(e[0]) {
            if k <= order {
                out[k] = c.clone();
            }
        }
    }
    out
}

fn series_inverse(f: &[Rat], order: usize) -> Vec<Rat> {
    let mut g = vec![Rat::zero(); order + 1];
    g[0] = Rat::one() / f[0].clone();
    for k in 1..=order {
        let s: Rat = (1..=k).fold(Rat::zero(), |acc, j| acc + f[j].clone() * g[k - j].clone());
        g[k] = -s * g[0].clone();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    fn el(s: &str) -> LogPointElement {
        s.parse().unwrap()
    }

    #[test]
    fn normal_forms() {
        assert_eq!(el("(2; 1; 1)").normalize(), el("(2; 2; 0)"));
        assert_eq!(el("(0; 5; 3)").normalize(), el("(0; 5; 3)"));
        assert_eq!(el("(1/2+i; 3; 0)").normalize(), el("(1/2+i; 3; 0)"));
        assert_eq!(el("(2; 1/4; -2)").normalize(), el("(2; 1/16; 0)"));
        assert_eq!(el("(1-2i; -i; 1)").to_string(), "(1-2i; -i; 1)");
    }

    #[test]
    fn group_law() {
        assert_eq!(el("(0; 2; 1)").multiply(&el("(0; 3; -1)")).unwrap(), el("(0; 6; 0)"));
        assert_eq!(el("(2; 1; 1)").multiply(&el("(2; 1; 1)")).unwrap(), el("(2; 4; 0)"));
        let p = el("(0; 3/7-i; 4)");
        assert_eq!(p.multiply(&p.inverse()).unwrap(), LogPointElement::identity(grat(rat(0))));
        assert_eq!(el("(0; 1; 0)").multiply(&el("(1; 1; 0)")), Err(DivisorError::FiberMismatch));
    }

    #[test]
    fn action() {
        let p = el("(3; 5; 2)");
        let one = ScalingArrow::new(grat(rat(1)), grat(rat(3))).unwrap();
        assert_eq!(act(&one, &p).unwrap(), p.normalize());
        let g = ScalingArrow::new(grat(rat(2)), grat(rat(3))).unwrap();
        assert_eq!(act(&g, &el("(3; 5; 0)")).unwrap(), el("(6; 5; 0)"));
        assert_eq!(act(&g, &p).unwrap(), act(&g, &p.normalize()).unwrap());
        let at0 = ScalingArrow::new(grat(rat(2)), grat(rat(0))).unwrap();
        assert_eq!(act(&at0, &el("(0; 1; 1)")).unwrap(), el("(0; 1/2; 1)"));
        assert_eq!(ScalingArrow::new(grat(rat(0)), grat(rat(1))), Err(DivisorError::ZeroScalar));
    }

    #[test]
    fn dlog_examples() {
        let s: MeromorphicSection = "x^1 * (1)".parse().unwrap();
        assert_eq!(s.to_meromorphic(), LaurentPoly::var(1, 0));
        assert_eq!(s.dlog(DEFAULT_SERIES_ORDER), LaurentPoly::one(1));
        let c: MeromorphicSection = "(7/3)".parse().unwrap();
        assert!(c.dlog(5).is_zero());
        let u: MeromorphicSection = "1 + x".parse().unwrap();
        let expected: Vec<Rat> = (0..=4).map(|k| if k == 0 { rat(0) } else { ratio(if k % 2 == 1 { 1 } else { -1 }, 1) }).collect();
        assert_eq!(coefficients(&u.dlog(4), 4), expected);
        assert_eq!("x".parse::<MeromorphicSection>().unwrap().n, 1);
        assert_eq!("x^-2".parse::<MeromorphicSection>().unwrap().n, -2);
        assert_eq!("x^2 * (x)".parse::<MeromorphicSection>(), Err(DivisorError::UnitViolation));
    }

    #[test]
    fn sections_agree_with_meromorphic_values() {
        let s: MeromorphicSection = "x^-1 * (2 + x^2)".parse().unwrap();
        let x = grat(ratio(1, 2));
        let value = s.at(&x).unwrap().normalize();
        let direct = s.to_meromorphic().evaluate(&[ratio(1, 2)]).unwrap();
        assert_eq!(value.y, grat(direct));
        assert_eq!(s.at(&grat(rat(0))).unwrap().i, -1);
    }
}
