//! The Virasoro algebra `span{z, e_j}` and its polynomial subalgebras.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{normalize_modulus, LaurentPoly};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// `sum c_j e_j + c z`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct VirElement {
    #[serde(with = "index_map")]
    e: BTreeMap<i64, Scalar>,
    #[serde(default = "Scalar::zero")]
    z: Scalar,
}

/// Serializes integer-keyed maps with string keys, dropping zeros on input.
pub(crate) mod index_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<i64, Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let out: BTreeMap<String, &Scalar> = m.iter().map(|(k, v)| (k.to_string(), v)).collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<i64, Scalar>, D::Error> {
        let raw = BTreeMap::<String, Scalar>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in raw {
            let k: i64 = k.trim().parse().map_err(serde::de::Error::custom)?;
            if !v.is_zero() {
                out.insert(k, v);
            }
        }
        Ok(out)
    }
}

impl VirElement {
    pub fn zero() -> Self {
        VirElement::default_zero()
    }

    fn default_zero() -> Self {
        VirElement { e: BTreeMap::new(), z: Scalar::zero() }
    }

    /// `e_j`.
    pub fn e(j: i64) -> Self {
        let mut x = VirElement::zero();
        x.add_e(j, &Scalar::one());
        x
    }

    /// The central element `z`.
    pub fn central() -> Self {
        VirElement { e: BTreeMap::new(), z: Scalar::one() }
    }

    /// The element with `theta(x) = g` and no central part.
    pub fn from_laurent(g: &LaurentPoly) -> Self {
        VirElement::from_parts(g.terms().map(|(k, c)| (k, c.clone())), Scalar::zero())
    }

    pub fn from_parts<I: IntoIterator<Item = (i64, Scalar)>>(e: I, z: Scalar) -> Self {
        let mut x = VirElement { e: BTreeMap::new(), z };
        for (k, c) in e {
            x.add_e(k, &c);
        }
        x
    }

    pub fn add_e(&mut self, j: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let v = self.e.entry(j).or_insert_with(Scalar::zero);
        *v += c;
        if v.is_zero() {
            self.e.remove(&j);
        }
    }

    pub fn e_terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.e.iter().map(|(k, c)| (*k, c))
    }

    pub fn e_coeff(&self, j: i64) -> Scalar {
        self.e.get(&j).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn z_part(&self) -> &Scalar {
        &self.z
    }

    pub fn is_zero(&self) -> bool {
        self.e.is_empty() && self.z.is_zero()
    }

    pub fn scale(&self, c: &Scalar) -> VirElement {
        VirElement::from_parts(self.e_terms().map(|(k, v)| (k, v * c)), &self.z * c)
    }

    /// The bracket `[e_j, e_k] = (k-j) e_{j+k} + delta_{j+k,0} (j^3-j)/12 z`.
    pub fn bracket(&self, y: &VirElement) -> VirElement {
        let mut out = VirElement::zero();
        for (j, a) in self.e_terms() {
            for (k, b) in y.e_terms() {
                let ab = a * b;
                if j != k {
                    out.add_e(j + k, &(&ab * &Scalar::int(k - j)));
                }
                if j + k == 0 {
                    out.z += &(&ab * &cocycle(j));
                }
            }
        }
        out
    }

    /// The projection `e_j -> t^j`, `z -> 0`.
    pub fn theta(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.e_terms().map(|(k, c)| (k, c.clone())))
    }

    /// The automorphism `e_k -> lambda^k e_k`, `z -> z`.
    pub fn twist(&self, lambda: &Scalar) -> Result<VirElement> {
        if lambda.is_zero() {
            return Err(Error::ZeroLambda);
        }
        let mut out = VirElement { e: BTreeMap::new(), z: self.z.clone() };
        for (k, c) in self.e_terms() {
            out.add_e(k, &(c * &lambda.pow(k)?));
        }
        Ok(out)
    }
}

/// `(j^3 - j) / 12`.
pub fn cocycle(j: i64) -> Scalar {
    Scalar::frac(j * j * j - j, 12)
}

impl<'a> Add<&'a VirElement> for &'a VirElement {
    type Output = VirElement;
    fn add(self, o: &VirElement) -> VirElement {
        let mut out = self.clone();
        for (k, c) in o.e_terms() {
            out.add_e(k, c);
        }
        out.z += &o.z;
        out
    }
}

impl<'a> Sub<&'a VirElement> for &'a VirElement {
    type Output = VirElement;
    fn sub(self, o: &VirElement) -> VirElement {
        self + &(-o)
    }
}

impl Neg for &VirElement {
    type Output = VirElement;
    fn neg(self) -> VirElement {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Debug for VirElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.e_terms().map(|(k, c)| format!("({c})e_{k}")).collect();
        if !self.z.is_zero() {
            parts.push(format!("({})z", self.z));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Which part of `Vir^{f^n}` is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Restriction {
    Full,
    /// `b_m^{f^n} = Vir^{f^n} ∩ span{z, e_j : j >= m}`.
    Bm { m: i64 },
}

/// Descriptor of `Vir^{f^n}` or its restriction to `b_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraSpec {
    f: Poly,
    n: u32,
    restriction: Restriction,
    modulus: Poly,
}

impl SubalgebraSpec {
    /// `f` is rescaled to be monic; `f(0) = 0` is rejected.
    pub fn new(f: &LaurentPoly, n: u32, restriction: Restriction) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        if let Restriction::Bm { m } = restriction {
            if m < -1 {
                return Err(Error::InvalidInput(format!("restriction index {m} < -1")));
            }
        }
        let f = normalize_modulus(f)?;
        let modulus = f.pow(n);
        Ok(SubalgebraSpec { f, n, restriction, modulus })
    }

    pub fn full(f: &LaurentPoly, n: u32) -> Result<Self> {
        SubalgebraSpec::new(f, n, Restriction::Full)
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn restriction(&self) -> Restriction {
        self.restriction
    }

    /// `f^n` as a dense polynomial, coefficients `a_0..=a_p`.
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `x_j = sum_i a_i e_{j+i}` with `sum_i a_i t^i = f^n`.
    pub fn x_basis(&self, j: i64) -> Result<VirElement> {
        if let Restriction::Bm { m } = self.restriction {
            if j < m {
                return Err(Error::IndexOutOfSubalgebra { j, m });
            }
        }
        Ok(x_element(&self.modulus, j))
    }

    /// The z-coefficient of `[x_j, x_k] - (k-j) sum_i a_i x_{j+k+i}`.
    pub fn central_defect(&self, j: i64, k: i64) -> Scalar {
        let a = &self.modulus;
        let lhs = x_element(a, j).bracket(&x_element(a, k));
        let mut rhs = VirElement::zero();
        for (i, ai) in a.coeffs().iter().enumerate() {
            rhs = &rhs + &x_element(a, j + k + i as i64).scale(&(ai * &Scalar::int(k - j)));
        }
        let d = &lhs - &rhs;
        debug_assert!(d.e.is_empty(), "bracket left the subalgebra");
        d.z.clone()
    }

    /// Membership of `x` in the full subalgebra `span{z} + θ^{-1}⟨f^n⟩`.
    pub fn contains(&self, x: &VirElement) -> bool {
        let in_ideal = x.theta().divide_exact(&LaurentPoly::from_poly(&self.modulus)).is_ok();
        match self.restriction {
            Restriction::Full => in_ideal,
            Restriction::Bm { m } => in_ideal && x.e.keys().next().is_none_or(|&j| j >= m),
        }
    }
}

fn x_element(a: &Poly, j: i64) -> VirElement {
    VirElement::from_parts(
        a.coeffs().iter().enumerate().map(|(i, c)| (j + i as i64, c.clone())),
        Scalar::zero(),
    )
}

/// Tests whether `x` lies in `span({z} ∪ {y_i})` (or without `z`), where each
/// family member `y_i` has lowest index `i` with nonzero coefficient.
pub fn in_span_of_family(x: &VirElement, family: &dyn Fn(i64) -> VirElement, with_z: bool) -> bool {
    let mut rest = x.clone();
    if with_z {
        rest.z = Scalar::zero();
    }
    let Some(hi) = rest.e.keys().next_back().copied() else {
        return rest.z.is_zero();
    };
    while let Some((&j, c)) = rest.e.iter().next() {
        if j > hi {
            return false;
        }
        let y = family(j);
        let lead = y.e_coeff(j);
        if lead.is_zero() || y.e.keys().next() != Some(&j) {
            return false;
        }
        let c = c / &lead;
        rest = &rest - &y.scale(&c);
        if with_z {
            rest.z = Scalar::zero();
        }
    }
    rest.z.is_zero()
}

/// Checks that all brackets `[y_j, y_k]` for `j, k` in `range` stay in the span.
pub fn span_closure_check(
    family: &dyn Fn(i64) -> VirElement,
    with_z: bool,
    range: std::ops::RangeInclusive<i64>,
) -> bool {
    for j in range.clone() {
        for k in range.clone() {
            let b = family(j).bracket(&family(k));
            if !in_span_of_family(&b, family, with_z) {
                return false;
            }
        }
    }
    true
}

/// Closure of `span{z, e_j + c e_{j+1}}` under brackets over `range`.
pub fn codim1_closure_check(c: &Scalar, range: std::ops::RangeInclusive<i64>) -> Result<bool> {
    if c.is_zero() {
        return Err(Error::InvalidInput("c must be nonzero".into()));
    }
    let fam = |j: i64| VirElement::from_parts([(j, Scalar::one()), (j + 1, c.clone())], Scalar::zero());
    Ok(span_closure_check(&fam, true, range))
}
