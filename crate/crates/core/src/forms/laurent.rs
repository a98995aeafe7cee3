use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactalg::Rat;

/// A Laurent polynomial in a fixed number of variables with rational
/// coefficients. Terms with zero coefficient are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Rat>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exponents: Vec<i32>, c: Rat) -> Self {
        let nvars = exponents.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        Self { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Rat::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    /// `Some((exponents, coefficient))` for a single nonzero term.
    pub fn as_monomial(&self) -> Option<(&Vec<i32>, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, e: Vec<i32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Multiplicative inverse, which exists only for a single monomial.
    pub fn inverse(&self) -> Option<Self> {
        let (e, c) = self.as_monomial()?;
        Some(Self::monomial(e.iter().map(|x| -x).collect(), c.recip()))
    }

    /// Integer power; negative powers need a monomial.
    pub fn pow(&self, n: i32) -> Option<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::one(self.nvars);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Some(out)
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * Rat::from_integer(e[i].into()));
            }
        }
        out
    }

    /// `∫_0^{x_i} p dx_i`; `None` if some exponent of `x_i` is negative.
    pub fn integrate_from_zero(&self, i: usize) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] < 0 {
                return None;
            }
            let mut f = e.clone();
            f[i] += 1;
            let k = Rat::from_integer(f[i].into());
            out.add_term(f, c / k);
        }
        Some(out)
    }

    /// Whether every exponent of every variable in `vars` is nonnegative.
    pub fn is_polynomial_in(&self, vars: &[usize]) -> bool {
        self.terms.keys().all(|e| vars.iter().all(|&i| e[i] >= 0))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Whether the polynomial depends on variable `i`.
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] != 0)
    }

    /// Total degree in the variables of `vars` of each term is shifted by
    /// `shift` and divided out: `Σ c x^α / (|α_vars| + shift)`.
    pub fn divide_by_degree(&self, vars: &[usize], shift: i32) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let deg: i32 = vars.iter().map(|&i| e[i]).sum::<i32>() + shift;
            if deg == 0 {
                return None;
            }
            out.add_term(e.clone(), c / Rat::from_integer(deg.into()));
        }
        Some(out)
    }

    /// Sets `x_i = value` (only valid when `x_i` has no negative exponents or
    /// `value` is nonzero).
    pub fn substitute_constant(&self, i: usize, value: &Rat) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[i];
            if k < 0 && value.is_zero() {
                return None;
            }
            let factor = if k == 0 {
                Rat::one()
            } else if k > 0 {
                num_traits::pow(value.clone(), k as usize)
            } else {
                num_traits::pow(value.recip(), (-k) as usize)
            };
            let mut f = e.clone();
            f[i] = 0;
            out.add_term(f, c * factor);
        }
        Some(out)
    }

    /// Composition with `x_i ↦ components[i]`, all components living in a
    /// common ring of `components[0].nvars()` variables.
    pub fn compose(&self, components: &[LaurentPoly], target_nvars: usize) -> Option<Self> {
        debug_assert_eq!(components.len(), self.nvars);
        let mut out = Self::zero(target_nvars);
        let mut cache: BTreeMap<(usize, i32), LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut t = Self::constant(target_nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = match cache.get(&(i, k)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = components[i].pow(k)?;
                        cache.insert((i, k), p.clone());
                        p
                    }
                };
                t = t.mul(&p);
            }
            out = out.add(&t);
        }
        Some(out)
    }

    /// Re-embeds into a ring of `nvars` variables, sending variable `i` to `map[i]`.
    pub fn reindex(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Exact evaluation; `None` when a negative power meets a zero coordinate.
    pub fn evaluate(&self, point: &[Rat]) -> Option<Rat> {
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k < 0 {
                    if x.is_zero() {
                        return None;
                    }
                    v *= num_traits::pow(x.recip(), (-k) as usize);
                } else if k > 0 {
                    v *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += v;
        }
        Some(total)
    }

    /// Floating-point evaluation.
    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (x, &k) in point.iter().zip(e) {
                    v *= x.powi(k);
                }
                v
            })
            .sum()
    }

    /// Complex floating-point evaluation.
    pub fn evaluate_c64(&self, point: &[num_complex::Complex64]) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = num_complex::Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
                for (x, &k) in point.iter().zip(e) {
                    v *= x.powi(k);
                }
                v
            })
            .sum()
    }

    /// Writes the polynomial with the given variable names, highest terms first.
    pub fn write_with(&self, names: &[impl AsRef<str>], f: &mut impl fmt::Write) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            write_monomial(e, &c.abs(), names, f)?;
        }
        Ok(())
    }

    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> PolyDisplay<'a, S> {
        PolyDisplay { poly: self, names }
    }
}

/// Writes `c*x^e*...` with a nonnegative coefficient `c`.
pub(crate) fn write_monomial(e: &[i32], c: &Rat, names: &[impl AsRef<str>], f: &mut impl fmt::Write) -> fmt::Result {
    let vars: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| if k == 1 { names[i].as_ref().to_string() } else { format!("{}^{k}", names[i].as_ref()) })
        .collect();
    if vars.is_empty() {
        return write!(f, "{c}");
    }
    if !c.is_one() {
        write!(f, "{c}*")?;
    }
    write!(f, "{}", vars.join("*"))
}

pub struct PolyDisplay<'a, S> {
    poly: &'a LaurentPoly,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for PolyDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.write_with(self.names, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    fn x() -> LaurentPoly {
        LaurentPoly::var(2, 0)
    }
    fn y() -> LaurentPoly {
        LaurentPoly::var(2, 1)
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let p = x().add(&y());
        let q = x().sub(&y());
        let prod = p.mul(&q);
        assert_eq!(prod, x().mul(&x()).sub(&y().mul(&y())));
        assert!(p.sub(&p).is_zero());
        assert_eq!(x().pow(-2).unwrap().mul(&x().pow(2).unwrap()), LaurentPoly::one(2));
        assert!(p.inverse().is_none());
    }

    #[test]
    fn calculus() {
        let p = x().pow(2).unwrap().mul(&y());
        assert_eq!(p.partial(0), x().mul(&y()).scale(&rat(2)));
        assert_eq!(x().integrate_from_zero(0).unwrap(), x().pow(2).unwrap().scale(&ratio(1, 2)));
        assert!(x().inverse().unwrap().integrate_from_zero(0).is_none());
    }

    #[test]
    fn composition_and_evaluation() {
        // x -> x + y, y -> 2y
        let comps = [x().add(&y()), y().scale(&rat(2))];
        let p = x().mul(&y());
        let q = p.compose(&comps, 2).unwrap();
        assert_eq!(q.evaluate(&[rat(1), rat(3)]).unwrap(), rat(24));
        assert!(x().inverse().unwrap().compose(&comps, 2).is_none());
    }

    #[test]
    fn printing() {
        let names = ["a'", "b"];
        let p = x().mul(&y()).add(&LaurentPoly::constant(2, ratio(-1, 2)));
        assert_eq!(p.display(&names).to_string(), "a'*b - 1/2");
        assert_eq!(x().pow(-1).unwrap().display(&names).to_string(), "a'^-1");
    }
}
