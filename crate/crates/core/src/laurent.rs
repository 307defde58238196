//! Laurent polynomials in `t` with the Witt bracket `[f, g] = t (f g' - g f')`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// A finitely supported map `exponent -> coefficient` with no zero entries.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        LaurentPoly::t(0)
    }

    /// `t^k`.
    pub fn t(k: i64) -> Self {
        LaurentPoly::monomial(Scalar::one(), k)
    }

    pub fn monomial(c: Scalar, k: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(k, &c);
        p
    }

    pub fn constant(c: Scalar) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(it: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, c) in it {
            p.add_term(k, &c);
        }
        p
    }

    pub fn from_ints(pairs: &[(i64, i64)]) -> Self {
        LaurentPoly::from_terms(pairs.iter().map(|&(k, c)| (k, Scalar::int(c))))
    }

    pub fn from_poly(p: &Poly) -> Self {
        LaurentPoly::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| (k as i64, c.clone())))
    }

    /// `t - c`.
    pub fn linear_root(c: &Scalar) -> Self {
        LaurentPoly::from_poly(&Poly::linear_root(c))
    }

    pub fn add_term(&mut self, k: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        self.terms.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest exponent; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True when all exponents are nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    /// Dense form, if the support is nonnegative.
    pub fn to_poly(&self) -> Option<Poly> {
        if !self.is_polynomial() {
            return None;
        }
        let deg = self.degree().unwrap_or(-1);
        Some(Poly::new((0..=deg).map(|k| self.coeff(k)).collect()))
    }

    /// Writes a nonzero element as `t^v P` with `P(0) != 0`.
    pub fn split(&self) -> Option<(i64, Poly)> {
        let v = self.valuation()?;
        Some((v, self.shift(-v).to_poly().expect("nonnegative support")))
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluation at `x`; negative exponents need `x != 0`.
    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (k, c) in self.terms() {
            acc += &(c * &x.pow(k)?);
        }
        Ok(acc)
    }

    /// Termwise `t^n -> n t^(n-1)`.
    pub fn derivative(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(k, c)| (k - 1, c * &Scalar::int(k))))
    }

    /// The Witt bracket `t (f g' - g f')`.
    pub fn lie_bracket(&self, g: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (j, a) in self.terms() {
            for (k, b) in g.terms() {
                if j != k {
                    out.add_term(j + k, &(&(a * b) * &Scalar::int(k - j)));
                }
            }
        }
        out
    }

    /// The unique `q` with `q d = self`.
    pub fn divide_exact(&self, d: &LaurentPoly) -> Result<LaurentPoly> {
        let (dv, dp) = d.split().ok_or(Error::DivisionByZero)?;
        let Some((gv, gp)) = self.split() else {
            return Ok(LaurentPoly::zero());
        };
        let (q, r) = gp.div_rem(&dp)?;
        if !r.is_zero() {
            return Err(Error::NotDivisible);
        }
        Ok(LaurentPoly::from_poly(&q).shift(gv - dv))
    }

    /// The residue of `self` modulo the ideal generated by `modulus` in `C[t^±]`,
    /// as a polynomial of degree below `deg modulus`. Requires `modulus(0) != 0`.
    pub fn residue(&self, modulus: &Poly) -> Result<Poly> {
        check_modulus(modulus)?;
        let Some((v, p)) = self.split() else {
            return Ok(Poly::zero());
        };
        let base = p.rem(modulus)?;
        if v >= 0 {
            let tv = Poly::monomial(Scalar::one(), v as usize);
            return (&base * &tv).rem(modulus);
        }
        let tinv = t_inverse(modulus)?;
        let mut acc = base;
        for _ in 0..(-v) {
            acc = (&acc * &tinv).rem(modulus)?;
        }
        Ok(acc)
    }

    /// Decomposes `self = sum_{i<n} window[i] f^i + tail f^n`.
    ///
    /// `f` is rescaled to be monic. The window entries are polynomials of
    /// degree below `deg f`, hence constants when `f` is linear.
    pub fn f_adic_decompose(&self, f: &LaurentPoly, n: usize) -> Result<FAdic> {
        let f = normalize_modulus(f)?;
        if n == 0 {
            return Err(Error::BadModulus("n must be positive".into()));
        }
        let big = f.pow(n as u32);
        let mut r = self.residue(&big)?;
        let mut window = Vec::with_capacity(n);
        for _ in 0..n {
            let (q, d) = r.div_rem(&f)?;
            window.push(d);
            r = q;
        }
        let mut rest = self.clone();
        let mut fi = Poly::constant(Scalar::one());
        for d in &window {
            rest = &rest - &LaurentPoly::from_poly(&(d * &fi));
            fi = &fi * &f;
        }
        let tail = rest.divide_exact(&LaurentPoly::from_poly(&big))?;
        Ok(FAdic { window, tail })
    }

    /// Cofactors `u, v` in `C[t]` with `u a + v b = 1`.
    pub fn bezout(a: &LaurentPoly, b: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
        let pa = a
            .to_poly()
            .filter(|p| !p.is_zero())
            .ok_or_else(|| Error::InvalidInput("bezout needs nonzero polynomials".into()))?;
        let pb = b
            .to_poly()
            .filter(|p| !p.is_zero())
            .ok_or_else(|| Error::InvalidInput("bezout needs nonzero polynomials".into()))?;
        let (g, u, v) = Poly::ext_gcd(&pa, &pb);
        if g.degree() != 0 {
            return Err(Error::NotCoprime);
        }
        Ok((LaurentPoly::from_poly(&u), LaurentPoly::from_poly(&v)))
    }
}

/// Result of [`LaurentPoly::f_adic_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FAdic {
    pub window: Vec<Poly>,
    pub tail: LaurentPoly,
}

impl FAdic {
    /// The window as scalars; `None` unless every entry is constant.
    pub fn scalar_window(&self) -> Option<Vec<Scalar>> {
        self.window
            .iter()
            .map(|p| (p.degree() <= 0).then(|| p.coeff(0)))
            .collect()
    }
}

fn check_modulus(f: &Poly) -> Result<()> {
    if f.degree() < 0 {
        return Err(Error::BadModulus("zero modulus".into()));
    }
    if f.coeff(0).is_zero() {
        return Err(Error::BadModulus("modulus vanishes at t = 0".into()));
    }
    Ok(())
}

/// Rescales `f` to a monic polynomial of positive degree with `f(0) != 0`.
pub fn normalize_modulus(f: &LaurentPoly) -> Result<Poly> {
    let p = f
        .to_poly()
        .ok_or_else(|| Error::BadModulus("modulus must be a polynomial".into()))?;
    if p.degree() < 1 {
        return Err(Error::BadModulus("modulus must have positive degree".into()));
    }
    check_modulus(&p)?;
    Ok(p.monic())
}

/// The inverse of `t` modulo `f`.
fn t_inverse(f: &Poly) -> Result<Poly> {
    let t = Poly::monomial(Scalar::one(), 1);
    let (g, u, _) = Poly::ext_gcd(&t, f);
    if g.degree() != 0 {
        return Err(Error::BadModulus("modulus vanishes at t = 0".into()));
    }
    u.rem(f)
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in o.terms() {
            out.add_term(k, c);
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in o.terms() {
            out.add_term(k, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (j, a) in self.terms() {
            for (k, b) in o.terms() {
                out.add_term(j + k, &(a * b));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(k, c)| format!("({c})t^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, &Scalar> = self.terms.iter().map(|(k, c)| (k.to_string(), c)).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = BTreeMap::<String, Scalar>::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for (k, c) in m {
            let k: i64 = k.trim().parse().map_err(serde::de::Error::custom)?;
            p.add_term(k, &c);
        }
        Ok(p)
    }
}
