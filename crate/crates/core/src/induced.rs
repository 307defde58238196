//! Modules `V_μ^F` induced from a character of `Vir^F`.
//!
//! For `F = Π (t - λ_i)^{n_i}` of degree `p`, put `h = t - λ_1`. The vectors
//! `(h^0)^{s_0} (h^1)^{s_1} ⋯ (h^{p-1})^{s_{p-1}} v_μ` form a basis of `V_μ^F`.
//! With a single root `h^i = f^i`, and this is the basis indexed by
//! multi-indices. The action of `t^j` is computed by straightening:
//!
//! ```text
//! t^j f^s v = h^ℓ (t^j f^{D(s)} v) + [t^j, h^ℓ] f^{D(s)} v
//! ```
//!
//! where `h^ℓ` is pushed past lower powers with `[h^a, h^b] = (b - a) t h^{a+b-1}`.
//! Every bracket branch lowers `|s|`, so the recursion terminates.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::character::ExpPolyCharacter;
use crate::error::{Error, Result};
use crate::faulhaber::faulhaber;
use crate::laurent::LaurentPoly;
use crate::module::{SparseVec, VirModule};
use crate::poly::Poly;
use crate::scalar::{binomial, factorial, Scalar};
use crate::vir::VirElement;

/// Exponents `(s_0, ..., s_{n-1})` of a basis vector. The derived order is
/// lexicographic with `s_0` most significant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(s: Vec<u32>) -> Self {
        MultiIndex(s)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut s = vec![0; n];
        s[i] = 1;
        MultiIndex(s)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `|s|`.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `ℓ(s)`, the first position with a nonzero entry.
    pub fn ell(&self) -> Option<usize> {
        self.0.iter().position(|&x| x > 0)
    }

    /// `D(s)`: decrements `s_ℓ`.
    pub fn d(&self) -> Option<MultiIndex> {
        let l = self.ell()?;
        let mut s = self.0.clone();
        s[l] -= 1;
        Some(MultiIndex(s))
    }

    /// `D^k(s)`.
    pub fn d_pow(&self, k: u32) -> Option<MultiIndex> {
        let mut s = self.clone();
        for _ in 0..k {
            s = s.d()?;
        }
        Some(s)
    }

    /// `D̃(s) = (0, s_1, ..., s_{n-1})`.
    pub fn d_tilde(&self) -> MultiIndex {
        let mut s = self.0.clone();
        if let Some(x) = s.first_mut() {
            *x = 0;
        }
        MultiIndex(s)
    }

    pub fn bump(&self, i: usize) -> MultiIndex {
        let mut s = self.0.clone();
        s[i] += 1;
        MultiIndex(s)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of length `n` with `|s| <= max_size`, in increasing order.
pub fn indices_up_to(n: usize, max_size: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if cur.len() == n {
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(n, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_size, &mut Vec::with_capacity(n), &mut out);
    out.sort();
    out
}

/// The order in which `j` is searched: `0, 1, -1, 2, -2, ...` up to `±window`.
pub fn search_order(window: u32) -> impl Iterator<Item = i64> {
    let w = window as i64;
    std::iter::once(0).chain((1..=w).flat_map(|k| [k, -k]))
}

pub type ModuleElement = SparseVec<MultiIndex>;

/// `Λ(v)`.
pub fn leading_index(v: &ModuleElement) -> Result<&MultiIndex> {
    v.max_index().ok_or(Error::ZeroVector)
}

/// Memo tables for one straightening session.
#[derive(Default)]
pub struct InducedMemo {
    base: HashMap<i64, ModuleElement>,
    act: HashMap<(i64, MultiIndex), ModuleElement>,
    left: HashMap<(usize, MultiIndex), ModuleElement>,
}

#[derive(Clone, Debug)]
pub struct InducedModule {
    mu: ExpPolyCharacter,
    modulus: Poly,
    center: Scalar,
    rank: usize,
}

/// Which denominator to use in the `ℓ(s) = 0` closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorialReading {
    /// `(n+r)!`.
    #[default]
    Corrected,
    /// `(n+k)!` with the unbound `k` read as `0`.
    Literal,
}

/// One application of `t^j f^m - μ(t^j f^m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReduceStep {
    pub j: i64,
    pub m: u32,
    pub w: ModuleElement,
}

impl InducedModule {
    pub fn new(mu: ExpPolyCharacter) -> Self {
        let modulus = mu.modulus();
        let center = mu.factors()[0].lambda.clone();
        let rank = modulus.degree() as usize;
        InducedModule { mu, modulus, center, rank }
    }

    pub fn character(&self) -> &ExpPolyCharacter {
        &self.mu
    }

    /// Length of the multi-indices, `deg F`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn generator_index(&self) -> MultiIndex {
        MultiIndex::zeros(self.rank)
    }

    pub fn basis_vector(&self, s: &MultiIndex) -> ModuleElement {
        ModuleElement::basis(s.clone())
    }

    /// `h^i`.
    pub fn basis_element(&self, i: usize) -> LaurentPoly {
        LaurentPoly::from_poly(&Poly::linear_root(&self.center).pow(i as u32))
    }

    fn base(&self, memo: &mut InducedMemo, j: i64) -> ModuleElement {
        if let Some(v) = memo.base.get(&j) {
            return v.clone();
        }
        let tj = LaurentPoly::t(j);
        let res = tj.residue(&self.modulus).expect("modulus has nonzero roots");
        let mut out = ModuleElement::zero();
        for (i, c) in res.shift(&self.center).coeffs().iter().enumerate() {
            out.add_term(MultiIndex::unit(self.rank, i), c);
        }
        let rest = &tj - &LaurentPoly::from_poly(&res);
        let mu = self.mu.eval(&rest).expect("remainder lies in the ideal");
        out.add_term(self.generator_index(), &mu);
        memo.base.insert(j, out.clone());
        out
    }

    fn act_t(&self, memo: &mut InducedMemo, j: i64, s: &MultiIndex) -> ModuleElement {
        let (Some(l), Some(ds)) = (s.ell(), s.d()) else {
            return self.base(memo, j);
        };
        if let Some(v) = memo.act.get(&(j, s.clone())) {
            return v.clone();
        }
        let inner = self.act_t(memo, j, &ds);
        let mut out = ModuleElement::zero();
        for (idx, c) in inner.terms() {
            let lm = self.leftmul(memo, l, idx);
            out.add_scaled(&lm, c);
        }
        let br = LaurentPoly::t(j).lie_bracket(&self.basis_element(l));
        let corr = self.act_poly(memo, &br, &ds);
        out.add_scaled(&corr, &Scalar::one());
        memo.act.insert((j, s.clone()), out.clone());
        out
    }

    /// `h^l · f^r v`.
    fn leftmul(&self, memo: &mut InducedMemo, l: usize, r: &MultiIndex) -> ModuleElement {
        let lr = match r.ell() {
            Some(lr) if lr < l => lr,
            _ => return ModuleElement::basis(r.bump(l)),
        };
        if let Some(v) = memo.left.get(&(l, r.clone())) {
            return v.clone();
        }
        let dr = r.d().expect("nonzero index");
        let inner = self.leftmul(memo, l, &dr);
        let mut out = ModuleElement::zero();
        for (idx, c) in inner.terms() {
            let lm = self.leftmul(memo, lr, idx);
            out.add_scaled(&lm, c);
        }
        let br = self.basis_element(l).lie_bracket(&self.basis_element(lr));
        let corr = self.act_poly(memo, &br, &dr);
        out.add_scaled(&corr, &Scalar::one());
        memo.left.insert((l, r.clone()), out.clone());
        out
    }

    fn act_poly(&self, memo: &mut InducedMemo, g: &LaurentPoly, s: &MultiIndex) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (k, c) in g.terms() {
            let v = self.act_t(memo, k, s);
            out.add_scaled(&v, c);
        }
        out
    }

    pub fn act_laurent_memo(&self, memo: &mut InducedMemo, g: &LaurentPoly, v: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (s, c) in v.terms() {
            let w = self.act_poly(memo, g, s);
            out.add_scaled(&w, c);
        }
        out
    }

    /// The action of `g ∈ C[t^±]`, viewed in `Vir` through `θ`.
    pub fn act_laurent(&self, g: &LaurentPoly, v: &ModuleElement) -> ModuleElement {
        self.act_laurent_memo(&mut InducedMemo::default(), g, v)
    }

    fn single(&self) -> Result<(Scalar, u32, Poly)> {
        let fa = self.mu.single_factor()?;
        Ok((fa.lambda.clone(), fa.n, fa.p.clone()))
    }

    /// `t^j f^m` for the single root `f = t - λ`.
    pub fn shifted_power(&self, j: i64, m: u32) -> Result<LaurentPoly> {
        let (lambda, _, _) = self.single()?;
        Ok(LaurentPoly::from_poly(&Poly::linear_root(&lambda).pow(m)).shift(j))
    }

    /// `(t^j f^m - μ(t^j f^m)) v`, which on `f^s v_μ` equals `[t^j f^m, f^s] v_μ`.
    pub fn apply_shifted_memo(&self, memo: &mut InducedMemo, j: i64, m: u32, v: &ModuleElement) -> Result<ModuleElement> {
        let g = self.shifted_power(j, m)?;
        let val = self.mu.eval(&g)?;
        let mut w = self.act_laurent_memo(memo, &g, v);
        w.add_scaled(v, &-val);
        Ok(w)
    }

    /// `[t^j f^m, f^s] v_μ` computed by straightening.
    pub fn bracket_oracle(&self, j: i64, m: u32, s: &MultiIndex) -> Result<ModuleElement> {
        self.apply_shifted_memo(&mut InducedMemo::default(), j, m, &self.basis_vector(s))
    }

    /// `[t^j f^m, f^s] v_μ` from the closed forms, for a single root.
    pub fn closed_form_bracket(&self, j: i64, m: u32, s: &MultiIndex, reading: FactorialReading) -> Result<ModuleElement> {
        let (_, n, p) = self.single()?;
        let (n, r, mi) = (n as i64, p.degree(), m as i64);
        if s.len() != self.rank {
            return Err(Error::InvalidInput(format!("index {s:?} has the wrong length")));
        }
        let Some(l) = s.ell() else {
            return Err(Error::HypothesisViolation("|s| must be positive".into()));
        };
        if mi < n {
            return Err(Error::HypothesisViolation(format!("m = {m} is below n = {n}")));
        }
        let pv = |j: i64, m: i64| self.mu.power_value(j, m as u32);
        if l > 0 {
            let crit = n + r + 1 - l as i64;
            if mi < crit {
                return Err(Error::HypothesisViolation(format!("m = {m} is below n + r + 1 - ℓ = {crit}")));
            }
            if mi > crit {
                return Ok(ModuleElement::zero());
            }
            if l > 1 {
                let c = Scalar::int((l as i64 - mi) * s.get(l) as i64) * pv(j + 1, n + r)?;
                return Ok(ModuleElement::basis(s.d().expect("nonzero")).scale(&c));
            }
            let s1 = s.get(1);
            let mut out = ModuleElement::zero();
            for k in 1..=s1 {
                let c = Scalar::int(1 - mi).pow(k as i64)? * binomial(s1 as u64, k as u64) * pv(j + k as i64, mi)?;
                out.add_term(s.d_pow(k).expect("k <= s_1"), &c);
            }
            return Ok(out);
        }
        let s0 = s.get(0) as i64;
        let crit = n + r + s0;
        if mi < crit {
            return Err(Error::HypothesisViolation(format!("m = {m} is below n + r + s_0 = {crit}")));
        }
        if mi > crit {
            return Ok(ModuleElement::zero());
        }
        if r < 0 {
            return Err(Error::HypothesisViolation("the zero character has no equality case".into()));
        }
        let denom = match reading {
            FactorialReading::Corrected => factorial((n + r) as u64),
            FactorialReading::Literal => factorial(n as u64),
        };
        let sign = if s0 % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let coeff = sign * factorial(crit as u64) / denom;
        let dt = s.d_tilde();
        let mut inner = ModuleElement::basis(dt.clone()).scale(&pv(j + s0, n + r)?);
        if !dt.is_zero() {
            let br = self.closed_form_bracket(j + s0, (n + r) as u32, &dt, reading)?;
            inner.add_scaled(&br, &Scalar::one());
        }
        Ok(inner.scale(&coeff))
    }

    /// The exponent `m` used to lower `Λ = s`, and the expected new leading index.
    pub fn reduction_target(&self, s: &MultiIndex) -> Result<(u32, MultiIndex)> {
        let (_, n, p) = self.single()?;
        let (n, r) = (n as i64, p.degree());
        let l = s
            .ell()
            .ok_or_else(|| Error::HypothesisViolation("vector already lies in span{v_μ}".into()))?;
        if l > 0 {
            Ok(((n + r + 1 - l as i64) as u32, s.d().expect("nonzero")))
        } else {
            Ok(((n + r + s.get(0) as i64) as u32, s.d_tilde()))
        }
    }

    fn check_reducible(&self) -> Result<()> {
        let (_, n, p) = self.single()?;
        if p.is_zero() || p.degree() <= n as i64 - 3 {
            return Err(Error::HypothesisViolation(format!(
                "reduction needs a nonzero character with r > n - 3 (n = {n}, r = {})",
                p.degree()
            )));
        }
        Ok(())
    }

    /// Finds `j` with `Λ((t^j f^m - μ(t^j f^m)) v)` equal to `D(Λ(v))`, or
    /// `D̃(Λ(v))` when `ℓ = 0`.
    pub fn reduce_step(&self, v: &ModuleElement, window: u32) -> Result<ReduceStep> {
        self.reduce_step_memo(&mut InducedMemo::default(), v, window)
    }

    fn reduce_step_memo(&self, memo: &mut InducedMemo, v: &ModuleElement, window: u32) -> Result<ReduceStep> {
        self.check_reducible()?;
        let u = leading_index(v)?;
        let (m, target) = self.reduction_target(u)?;
        for j in search_order(window) {
            let w = self.apply_shifted_memo(memo, j, m, v)?;
            if w.max_index() == Some(&target) {
                return Ok(ReduceStep { j, m, w });
            }
        }
        Err(Error::SearchExhausted { lo: -(window as i64), hi: window as i64 })
    }

    /// Repeats [`Self::reduce_step`] until the vector lies in `span{v_μ}`.
    pub fn reduce_to_generator(&self, v: &ModuleElement, window: u32, max_steps: usize) -> Result<Vec<ReduceStep>> {
        let mut memo = InducedMemo::default();
        let mut cur = v.clone();
        let mut trace = Vec::new();
        while !leading_index(&cur)?.is_zero() {
            if trace.len() == max_steps {
                return Err(Error::StepLimit(max_steps));
            }
            let step = self.reduce_step_memo(&mut memo, &cur, window)?;
            cur = step.w.clone();
            trace.push(step);
        }
        Ok(trace)
    }

    /// Whether `span{f^s v_μ : s_pos >= 1}` is stable under `e_k`, `|k| <= kmax`,
    /// on all indices with `|s| <= max_size`.
    pub fn slice_invariant(&self, pos: usize, kmax: i64, max_size: u32) -> bool {
        let mut memo = InducedMemo::default();
        for s in indices_up_to(self.rank, max_size) {
            if s.get(pos) == 0 {
                continue;
            }
            let v = self.basis_vector(&s);
            for k in -kmax..=kmax {
                let w = self.act_laurent_memo(&mut memo, &LaurentPoly::t(k), &v);
                if w.terms().any(|(i, _)| i.get(pos) == 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Checks the submodule and quotient description for characters of small degree.
    pub fn quotient_smalldegree(&self, reading: SmallDegreeReading, js: RangeInclusive<i64>) -> Result<QuotientReport> {
        let (lambda, n, p) = self.single()?;
        let r = p.degree();
        if !reading.predicts_reducible(n, r) {
            return Err(Error::HypothesisViolation(format!(
                "(n, r) = ({n}, {r}) is outside the small-degree range under the {reading:?} reading"
            )));
        }
        let top = (n - 1) as usize;
        let gen = MultiIndex::unit(self.rank, top);
        let gv = self.basis_vector(&gen);
        let mut memo = InducedMemo::default();

        let mut eigen_relation = true;
        for j in js.clone() {
            let w = self.apply_shifted_memo(&mut memo, j, n, &gv)?;
            // For n = 1 the generator is e_0 v_μ, which t^j f only sends back into the slice.
            eigen_relation &= if n == 1 { w.terms().all(|(i, _)| i.get(top) > 0) } else { w.is_zero() };
        }
        let slice_invariant = self.slice_invariant(top, 4, 3);

        let q = mu_prime_poly(&lambda, &p)?;
        let v0 = ModuleElement::basis(self.generator_index());
        let mut oracle_agrees = true;
        let mut partial_sums_agree = true;
        for j in js {
            let lj = lambda.pow(j)?;
            let predicted = if n == 1 { Scalar::zero() } else { &q.eval_int(j) * &lj };
            let g = LaurentPoly::from_poly(&Poly::linear_root(&lambda).pow(n - 1)).shift(j);
            let w = self.act_laurent_memo(&mut memo, &g, &v0);
            let in_m = w.terms().all(|(i, c)| i.is_zero() || i.get(top) > 0 && (i != &gen || c == &lj));
            oracle_agrees &= in_m && w.coeff(&self.generator_index()) == predicted;
            if n > 1 {
                partial_sums_agree &= partial_sum(&lambda, &p, j)? == predicted;
            }
        }
        let mu_prime = if n == 1 { None } else { Some(ExpPolyCharacter::single(lambda, n - 1, q.clone())?) };
        Ok(QuotientReport {
            n,
            r,
            reading,
            generator: gen,
            eigen_relation,
            slice_invariant,
            mu_prime_degree: mu_prime.as_ref().map(|_| q.degree()),
            mu_prime,
            partial_sums_agree,
            oracle_agrees,
        })
    }
}

impl VirModule for InducedModule {
    type Index = MultiIndex;
    type Memo = InducedMemo;

    fn generator(&self) -> ModuleElement {
        ModuleElement::basis(self.generator_index())
    }

    /// `z` acts by zero; `e_j` acts through `θ`.
    fn act_memo(&self, memo: &mut InducedMemo, x: &VirElement, v: &ModuleElement) -> ModuleElement {
        self.act_laurent_memo(memo, &x.theta(), v)
    }
}

/// `q` with `μ'(t^j f^{n-1}) = q(j) λ^j` on the quotient, where
/// `q(x) = λ^{-1} (p_0 x + Σ_{k>=1} p_k P_k(x - 1))`.
pub fn mu_prime_poly(lambda: &Scalar, p: &Poly) -> Result<Poly> {
    let mut q = Poly::monomial(p.coeff(0), 1);
    for k in 1..p.coeffs().len() {
        let pk = faulhaber(k as u32).poly.shift(&-Scalar::one());
        q = &q + &pk.scale(&p.coeff(k));
    }
    Ok(q.scale(&lambda.inv()?))
}

/// The displayed partial sums: `λ^{j-1} Σ_{i=0}^{j-1} p(i)` for `j >= 0` and
/// `-λ^{j-1} Σ_{i=1}^{-j} p(-i)` for `j < 0`.
pub fn partial_sum(lambda: &Scalar, p: &Poly, j: i64) -> Result<Scalar> {
    let pre = lambda.pow(j - 1)?;
    let mut acc = Scalar::zero();
    if j >= 0 {
        for i in 0..j {
            acc += &p.eval_int(i);
        }
        Ok(&pre * &acc)
    } else {
        for i in 1..=-j {
            acc += &p.eval_int(-i);
        }
        Ok(-(&pre * &acc))
    }
}

/// How to read the small-degree hypothesis at `n = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmallDegreeReading {
    /// `r <= n - 3`, or `n = 1` and `r = -1` (the zero character).
    #[default]
    Corrected,
    /// `r <= n - 3`, or `n = 1` and `r = 0`, as printed.
    Literal,
}

impl SmallDegreeReading {
    pub fn predicts_reducible(self, n: u32, r: i64) -> bool {
        let boundary = match self {
            SmallDegreeReading::Corrected => -1,
            SmallDegreeReading::Literal => 0,
        };
        r <= n as i64 - 3 || (n == 1 && r == boundary)
    }
}

impl std::str::FromStr for SmallDegreeReading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(SmallDegreeReading::Corrected),
            "literal" => Ok(SmallDegreeReading::Literal),
            _ => Err(Error::InvalidInput(format!("unknown reading {s:?}"))),
        }
    }
}

impl std::str::FromStr for FactorialReading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(FactorialReading::Corrected),
            "literal" => Ok(FactorialReading::Literal),
            _ => Err(Error::InvalidInput(format!("unknown reading {s:?}"))),
        }
    }
}

/// Result of [`InducedModule::quotient_smalldegree`].
#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    pub n: u32,
    pub r: i64,
    pub reading: SmallDegreeReading,
    /// `f^{n-1} v_μ`, which generates the submodule.
    pub generator: MultiIndex,
    /// `t^j f^n` acts on the generator by `μ(t^j f^n)`; for `n = 1`, it
    /// maps the generator into the slice.
    pub eigen_relation: bool,
    /// The span of indices with `s_{n-1} >= 1` is stable under `e_k`.
    pub slice_invariant: bool,
    /// The quotient character on `⟨f^{n-1}⟩`; `None` when `n = 1`, where
    /// the quotient is the trivial module.
    pub mu_prime: Option<ExpPolyCharacter>,
    pub mu_prime_degree: Option<i64>,
    pub partial_sums_agree: bool,
    /// `t^j f^{n-1} v_μ` equals `μ'(t^j f^{n-1}) v_μ` modulo the submodule.
    pub oracle_agrees: bool,
}

/// The module `Ω(λ, b)` on `C[∂]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaSpec {
    pub lambda: Scalar,
    pub b: Scalar,
}

impl OmegaSpec {
    pub fn new(lambda: Scalar, b: Scalar) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroLambda);
        }
        Ok(OmegaSpec { lambda, b })
    }

    /// The character of `Vir^{t-λ}` with `μ(t^k f) = λ^{k+1}(b - 1)`.
    pub fn character(&self) -> Result<ExpPolyCharacter> {
        let p = &self.lambda * &(&self.b - &Scalar::one());
        ExpPolyCharacter::single(self.lambda.clone(), 1, Poly::constant(p))
    }

    /// `e_k · P(∂) = λ^k (∂ + k(b-1)) P(∂ - k)`.
    pub fn action(&self, k: i64, poly: &[Scalar]) -> Result<Vec<Scalar>> {
        let shifted = Poly::new(poly.to_vec()).shift(&Scalar::int(-k));
        let lin = Poly::new(vec![Scalar::int(k) * (&self.b - &Scalar::one()), Scalar::one()]);
        Ok((&lin * &shifted).scale(&self.lambda.pow(k)?).coeffs().to_vec())
    }

    /// Checks `(s) ↦ ∂^s` intertwines `e_k` for `|k| <= depth`, `s <= depth`.
    pub fn iso_check(&self, depth: u32) -> Result<bool> {
        self.iso_check_with(&self.character()?, depth)
    }

    /// As [`Self::iso_check`], against an arbitrary character of `Vir^{t-λ}`.
    pub fn iso_check_with(&self, mu: &ExpPolyCharacter, depth: u32) -> Result<bool> {
        if depth == 0 {
            return Err(Error::InvalidInput("depth must be at least 1".into()));
        }
        let m = InducedModule::new(mu.clone());
        if m.rank() != 1 {
            return Err(Error::InvalidInput("Ω is compared with a module over a linear f".into()));
        }
        let mut memo = InducedMemo::default();
        for s in 0..=depth {
            let v = ModuleElement::basis(MultiIndex::new(vec![s]));
            let mut dpow = vec![Scalar::zero(); s as usize + 1];
            dpow[s as usize] = Scalar::one();
            let d = depth as i64;
            for k in -d..=d {
                let w = m.act_laurent_memo(&mut memo, &LaurentPoly::t(k), &v);
                let mut image = Vec::new();
                for (idx, c) in w.terms() {
                    let e = idx.get(0) as usize;
                    if image.len() <= e {
                        image.resize(e + 1, Scalar::zero());
                    }
                    image[e] = c.clone();
                }
                if Poly::new(image) != Poly::new(self.action(k, &dpow)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Checks `V_μ^{(t-λ)^n} ≅ (V_{μ∘τ_λ^{-1}}^{(t-1)^n})^{τ_λ}` on basis vectors
/// with `|s| <= depth` and `e_k`, `|k| <= depth`. The map sends `f^s v` to
/// `λ^{Σ i s_i} f^s v`.
pub fn twist_check(mu: &ExpPolyCharacter, depth: u32) -> Result<bool> {
    let fa = mu.single_factor()?;
    let lambda = fa.lambda.clone();
    let p1 = fa.p.scale(&lambda.pow(-(fa.n as i64))?);
    let a = InducedModule::new(mu.clone());
    let b = InducedModule::new(ExpPolyCharacter::single(Scalar::one(), fa.n, p1)?);
    let phi = |v: &ModuleElement| -> Result<ModuleElement> {
        let mut out = ModuleElement::zero();
        for (s, c) in v.terms() {
            let w: i64 = s.entries().iter().enumerate().map(|(i, x)| i as i64 * *x as i64).sum();
            out.add_term(s.clone(), &(c * &lambda.pow(w)?));
        }
        Ok(out)
    };
    let (mut ma, mut mb) = (InducedMemo::default(), InducedMemo::default());
    let d = depth as i64;
    for s in indices_up_to(a.rank(), depth) {
        let v = ModuleElement::basis(s);
        let pv = phi(&v)?;
        for k in -d..=d {
            let tk = LaurentPoly::t(k);
            let lhs = phi(&a.act_laurent_memo(&mut ma, &tk, &v))?;
            let rhs = b.act_laurent_memo(&mut mb, &tk, &pv).scale(&lambda.pow(k)?);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
