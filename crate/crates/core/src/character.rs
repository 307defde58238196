//! One-dimensional characters of `⟨f⟩`, `Vir^f` and `b_m^f`.
//!
//! A character of the ideal `⟨f⟩` with `f = Π (t - λ_i)^{n_i}` is stored by its
//! values `μ(t^j f) = Σ p_i(j) λ_i^j`, where `deg p_i < n_i`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// One root of `f` with its multiplicity and exponential-polynomial coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootFactor {
    pub lambda: Scalar,
    pub n: u32,
    #[serde(default)]
    pub p: Poly,
}

impl RootFactor {
    pub fn new(lambda: Scalar, n: u32, p: Poly) -> Self {
        RootFactor { lambda, n, p }
    }

    /// `deg p`, `-1` for the zero polynomial.
    pub fn r(&self) -> i64 {
        self.p.degree()
    }

    /// `(t - λ)^n`.
    pub fn power(&self) -> Poly {
        Poly::linear_root(&self.lambda).pow(self.n)
    }
}

/// A character of `⟨f⟩` in exponential-polynomial form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpPolyCharacter {
    factors: Vec<RootFactor>,
}

/// One entry of [`ExpPolyCharacter::degree_profile`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub lambda: Scalar,
    pub n: u32,
    pub r: i64,
}

impl ExpPolyCharacter {
    pub fn new(factors: Vec<RootFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("a character needs at least one root".into()));
        }
        for (i, fa) in factors.iter().enumerate() {
            if fa.lambda.is_zero() {
                return Err(Error::InvalidInput("roots must be nonzero".into()));
            }
            if fa.n == 0 {
                return Err(Error::InvalidInput("multiplicities must be positive".into()));
            }
            if fa.r() >= fa.n as i64 {
                return Err(Error::InvalidInput(format!(
                    "deg p = {} must be below the multiplicity {}",
                    fa.r(),
                    fa.n
                )));
            }
            if factors[..i].iter().any(|g| g.lambda == fa.lambda) {
                return Err(Error::InvalidInput(format!("repeated root {}", fa.lambda)));
            }
        }
        Ok(ExpPolyCharacter { factors })
    }

    pub fn single(lambda: Scalar, n: u32, p: Poly) -> Result<Self> {
        ExpPolyCharacter::new(vec![RootFactor::new(lambda, n, p)])
    }

    /// The zero character of `⟨Π (t - λ_i)^{n_i}⟩`.
    pub fn zero_on(roots: &[(Scalar, u32)]) -> Result<Self> {
        ExpPolyCharacter::new(roots.iter().map(|(l, n)| RootFactor::new(l.clone(), *n, Poly::zero())).collect())
    }

    pub fn factors(&self) -> &[RootFactor] {
        &self.factors
    }

    pub fn roots(&self) -> Vec<(Scalar, u32)> {
        self.factors.iter().map(|f| (f.lambda.clone(), f.n)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().all(|f| f.p.is_zero())
    }

    /// `f = Π (t - λ_i)^{n_i}`.
    pub fn modulus(&self) -> Poly {
        modulus_of(&self.roots())
    }

    /// `μ(t^j f)`.
    pub fn value(&self, j: i64) -> Scalar {
        let mut acc = Scalar::zero();
        for fa in &self.factors {
            if fa.p.is_zero() {
                continue;
            }
            let lj = fa.lambda.pow(j).expect("nonzero root");
            acc += &(&fa.p.eval_int(j) * &lj);
        }
        acc
    }

    /// Checks `Σ a_i μ_{m+i} = 0` for every `m` in `range`.
    pub fn validate(&self, range: std::ops::RangeInclusive<i64>) -> bool {
        let a = self.modulus();
        let p = a.degree();
        let values: BTreeMap<i64, Scalar> =
            (*range.start()..=*range.end() + p).map(|j| (j, self.value(j))).collect();
        validate_values(&a, &values, range)
    }

    /// `μ(g)` for `g ∈ ⟨f⟩`.
    pub fn eval(&self, g: &LaurentPoly) -> Result<Scalar> {
        let q = g
            .divide_exact(&LaurentPoly::from_poly(&self.modulus()))
            .map_err(|_| Error::NotInIdeal)?;
        let mut acc = Scalar::zero();
        for (k, c) in q.terms() {
            acc += &(c * &self.value(k));
        }
        Ok(acc)
    }

    pub fn degree_profile(&self) -> Vec<DegreeEntry> {
        self.factors
            .iter()
            .map(|f| DegreeEntry { lambda: f.lambda.clone(), n: f.n, r: f.r() })
            .collect()
    }

    /// `r_i >= n_i - 2` for every factor.
    pub fn is_large_degree(&self) -> bool {
        self.factors.iter().all(|f| f.r() >= f.n as i64 - 2)
    }

    pub fn single_factor(&self) -> Result<&RootFactor> {
        match self.factors.as_slice() {
            [f] => Ok(f),
            _ => Err(Error::InvalidInput("operation needs a single-root character".into())),
        }
    }

    /// `p_m` with `μ(t^j f^m) = p_m(j) λ^j`, for a single root and `m >= n`.
    pub fn derived_power(&self, m: u32) -> Result<Poly> {
        let fa = self.single_factor()?;
        if m < fa.n {
            return Err(Error::InvalidInput(format!("m = {m} is below n = {}", fa.n)));
        }
        let mut p = fa.p.clone();
        for _ in fa.n..m {
            p = (&p.shift(&Scalar::one()) - &p).scale(&fa.lambda);
        }
        Ok(p)
    }

    /// `μ(t^j f^m)` for a single root and `m >= n`.
    pub fn power_value(&self, j: i64, m: u32) -> Result<Scalar> {
        let fa = self.single_factor()?;
        Ok(&self.derived_power(m)?.eval_int(j) * &fa.lambda.pow(j)?)
    }

    /// The restriction of a single-root character to `⟨g f^n⟩`.
    pub fn restrict(&self, g: &LaurentPoly) -> Result<Poly> {
        let fa = self.single_factor()?;
        restrict(&fa.lambda, &fa.p, g)
    }

    /// Splits a character of `Vir^f` into single-root characters `μ_i` of
    /// `Vir^{(t-λ_i)^{n_i}}` whose sum restricts to `μ`.
    pub fn decompose(&self) -> Result<Vec<ExpPolyCharacter>> {
        let roots = self.roots();
        let mut out = Vec::with_capacity(roots.len());
        for (i, fa) in self.factors.iter().enumerate() {
            let g = LaurentPoly::from_poly(&cofactor(&roots, i));
            // images of the basis characters γ_{i,d}: j -> j^d λ^j
            let r = fa.r();
            let mut images = Vec::new();
            for d in 0..=r.max(-1) {
                images.push(restrict(&fa.lambda, &Poly::monomial(Scalar::one(), d as usize), &g)?);
            }
            // triangular solve: q = Σ b_d images[d], images[d] has degree d
            let mut rest = fa.p.clone();
            let mut b = vec![Scalar::zero(); (r + 1).max(0) as usize];
            for d in (0..=r).rev() {
                let du = d as usize;
                let lead = images[du].coeff(du);
                if lead.is_zero() {
                    return Err(Error::SingularSystem);
                }
                let c = &rest.coeff(du) / &lead;
                rest = &rest - &images[du].scale(&c);
                b[du] = c;
            }
            if !rest.is_zero() {
                return Err(Error::SingularSystem);
            }
            out.push(ExpPolyCharacter::single(fa.lambda.clone(), fa.n, Poly::new(b))?);
        }
        Ok(out)
    }

    /// The character of `Vir^f` obtained by restricting `Σ μ_i` from single-root parts.
    pub fn compose(parts: &[ExpPolyCharacter]) -> Result<ExpPolyCharacter> {
        let mut singles = Vec::with_capacity(parts.len());
        for p in parts {
            singles.push(p.single_factor()?.clone());
        }
        let roots: Vec<(Scalar, u32)> = singles.iter().map(|f| (f.lambda.clone(), f.n)).collect();
        let mut factors = Vec::with_capacity(singles.len());
        for (i, fa) in singles.iter().enumerate() {
            let g = LaurentPoly::from_poly(&cofactor(&roots, i));
            let q = restrict(&fa.lambda, &fa.p, &g)?;
            factors.push(RootFactor::new(fa.lambda.clone(), fa.n, q));
        }
        ExpPolyCharacter::new(factors)
    }
}

/// `Π (t - λ_i)^{n_i}`.
pub fn modulus_of(roots: &[(Scalar, u32)]) -> Poly {
    roots
        .iter()
        .fold(Poly::constant(Scalar::one()), |acc, (l, n)| &acc * &Poly::linear_root(l).pow(*n))
}

fn cofactor(roots: &[(Scalar, u32)], skip: usize) -> Poly {
    let others: Vec<(Scalar, u32)> =
        roots.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r.clone()).collect();
    modulus_of(&others)
}

/// Checks the recurrence `Σ a_i μ_{m+i} = 0` on explicit values.
pub fn validate_values(a: &Poly, values: &BTreeMap<i64, Scalar>, range: std::ops::RangeInclusive<i64>) -> bool {
    for m in range {
        let mut acc = Scalar::zero();
        for (i, ai) in a.coeffs().iter().enumerate() {
            match values.get(&(m + i as i64)) {
                Some(v) => acc += &(ai * v),
                None => return false,
            }
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

/// `q(j) = Σ_i c_i λ^i p(i + j)` for `g = Σ c_i t^i`.
pub fn restrict(lambda: &Scalar, p: &Poly, g: &LaurentPoly) -> Result<Poly> {
    if !g.is_polynomial() || g.is_zero() {
        return Err(Error::InvalidInput("restricting element must be a nonzero polynomial".into()));
    }
    if g.eval(lambda)?.is_zero() {
        return Err(Error::RootCollision(lambda.to_string()));
    }
    let mut q = Poly::zero();
    for (i, c) in g.terms() {
        let w = c * &lambda.pow(i)?;
        q = &q + &p.shift(&Scalar::int(i)).scale(&w);
    }
    Ok(q)
}

/// Solves `μ_j = Σ q_i(j) λ_i^j` (`deg q_i < n_i`) from `p = Σ n_i`
/// consecutive values starting at `j0`.
pub fn solve_exp_poly(values: &[Scalar], j0: i64, roots: &[(Scalar, u32)]) -> Result<ExpPolyCharacter> {
    let p: usize = roots.iter().map(|(_, n)| *n as usize).sum();
    if values.len() != p {
        return Err(Error::InvalidInput(format!("expected {p} values, got {}", values.len())));
    }
    let mut rows = Vec::with_capacity(p);
    for (row, _) in values.iter().enumerate() {
        let j = j0 + row as i64;
        let mut r = Vec::with_capacity(p);
        for (l, n) in roots {
            let lj = l.pow(j)?;
            for d in 0..*n {
                r.push(&Scalar::int(j).pow(d as i64)? * &lj);
            }
        }
        rows.push(r);
    }
    let sol = linalg::solve(rows, values.to_vec())?;
    let mut factors = Vec::with_capacity(roots.len());
    let mut at = 0;
    for (l, n) in roots {
        let q = Poly::new(sol[at..at + *n as usize].to_vec());
        at += *n as usize;
        factors.push(RootFactor::new(l.clone(), *n, q));
    }
    ExpPolyCharacter::new(factors)
}

/// A character of `b_m^f`: free values on the window `m..=2m+p` and an
/// exponential-polynomial tail forced by the recurrence beyond `2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedCharacter {
    m: i64,
    window: BTreeMap<i64, Scalar>,
    tail: ExpPolyCharacter,
    z: Scalar,
}

/// Result of [`RestrictedCharacter::split_muhat`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuhatSplit {
    pub mu_ddot: ExpPolyCharacter,
    #[serde(with = "crate::vir::index_map")]
    pub mu_hat: BTreeMap<i64, Scalar>,
    pub z: Scalar,
}

/// Closed forms for `μ̂` next to the triangular-solve values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuhatClosedForms {
    /// `a_0^{-2} Σ a_i μ_{2m+i}`.
    pub mu_hat_2m: Scalar,
    /// `a_0^{-2} (Σ a_i μ_{2m-1+i} - 2 a_1 a_0^{-1} Σ a_i μ_{2m+i})`, for `m >= 1`.
    pub mu_hat_2m_minus_1: Option<Scalar>,
    /// `a_0 Σ a_i μ_{2m-1+i} - 2 a_1 Σ a_i μ_{2m+i}`, equal to `a_0^3 μ̂_{2m-1}`.
    pub whittaker_displayed: Option<Scalar>,
}

impl RestrictedCharacter {
    /// Builds the character from its window values `μ_j`, `m <= j <= 2m+p`.
    pub fn new(m: i64, roots: &[(Scalar, u32)], window: BTreeMap<i64, Scalar>, z: Scalar) -> Result<Self> {
        if m < -1 {
            return Err(Error::InvalidInput(format!("m = {m} < -1")));
        }
        let p: i64 = roots.iter().map(|(_, n)| *n as i64).sum();
        for j in m..=2 * m + p {
            if !window.contains_key(&j) {
                return Err(Error::InvalidInput(format!("window is missing μ_{j}")));
            }
        }
        if let Some((&j, _)) = window.iter().find(|(&j, _)| j < m || j > 2 * m + p) {
            return Err(Error::InvalidInput(format!("window index {j} outside [{m}, {}]", 2 * m + p)));
        }
        let vals: Vec<Scalar> = (2 * m + 1..=2 * m + p).map(|j| window[&j].clone()).collect();
        let tail = solve_exp_poly(&vals, 2 * m + 1, roots)?;
        Ok(RestrictedCharacter { m, window, tail, z })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn window(&self) -> &BTreeMap<i64, Scalar> {
        &self.window
    }

    pub fn tail(&self) -> &ExpPolyCharacter {
        &self.tail
    }

    pub fn z_value(&self) -> &Scalar {
        &self.z
    }

    /// Coefficients `a_0..=a_p` of `f`.
    pub fn modulus(&self) -> Poly {
        self.tail.modulus()
    }

    /// `μ(x_j)` for `j >= m`.
    pub fn value(&self, j: i64) -> Result<Scalar> {
        if j < self.m {
            return Err(Error::IndexOutOfSubalgebra { j, m: self.m });
        }
        Ok(match self.window.get(&j) {
            Some(v) => v.clone(),
            None => self.tail.value(j),
        })
    }

    fn weighted(&self, j: i64) -> Scalar {
        let a = self.modulus();
        let mut acc = Scalar::zero();
        for (i, ai) in a.coeffs().iter().enumerate() {
            acc += &(ai * &self.value(j + i as i64).expect("index in range"));
        }
        acc
    }

    /// `μ = μ̈ + μ̂`: `μ̈` extends the tail to all of `Vir^f`, `μ̂` is a
    /// character of `b_m` supported on `[m, 2m]` carrying the central value.
    pub fn split_muhat(&self) -> MuhatSplit {
        let a = self.modulus();
        let p = a.degree();
        let a0_inv = a.coeff(0).inv().expect("f(0) != 0");
        let mut mu_hat: BTreeMap<i64, Scalar> = BTreeMap::new();
        let get = |mh: &BTreeMap<i64, Scalar>, j: i64| mh.get(&j).cloned().unwrap_or_else(Scalar::zero);
        for j in (self.m..=2 * self.m).rev() {
            let mut rhs = &self.window[&j] - &self.tail.value(j);
            for i in 1..=p {
                rhs -= &(&a.coeff(i as usize) * &get(&mu_hat, j + i));
            }
            let v = &rhs * &a0_inv;
            if !v.is_zero() {
                mu_hat.insert(j, v);
            }
        }
        MuhatSplit { mu_ddot: self.tail.clone(), mu_hat, z: self.z.clone() }
    }

    /// The closed-form values of `μ̂_{2m}` and `μ̂_{2m-1}`.
    pub fn closed_forms(&self) -> Result<MuhatClosedForms> {
        if self.m < 0 {
            return Err(Error::HypothesisViolation("closed forms need m >= 0".into()));
        }
        let a = self.modulus();
        let a0 = a.coeff(0);
        let a1 = a.coeff(1);
        let a0_inv = a0.inv()?;
        let a0_inv2 = &a0_inv * &a0_inv;
        let s2m = self.weighted(2 * self.m);
        let mu_hat_2m = &a0_inv2 * &s2m;
        let (mu_hat_2m_minus_1, whittaker_displayed) = if self.m >= 1 {
            let s = self.weighted(2 * self.m - 1);
            let two = Scalar::int(2);
            let v = &a0_inv2 * &(&s - &(&(&two * &a1) * &(&a0_inv * &s2m)));
            let disp = &(&a0 * &s) - &(&(&two * &a1) * &s2m);
            (Some(v), Some(disp))
        } else {
            (None, None)
        };
        Ok(MuhatClosedForms { mu_hat_2m, mu_hat_2m_minus_1, whittaker_displayed })
    }
}
