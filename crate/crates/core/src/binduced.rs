//! Modules induced from a character of `b_m^F = {z, x_j^F : j >= m}`.
//!
//! With `F = 1` these are the Verma modules (`m = 0`), `M̄` (`m = -1`) and the
//! Whittaker modules (`m >= 1`). A nonconstant `F` gives `V^{F,m}_μ` directly.
//! The basis is the sorted monomials `e_{i_1} ⋯ e_{i_k} v` with
//! `i_1 <= ⋯ <= i_k < m + deg F`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::character::RestrictedCharacter;
use crate::error::{Error, Result};
use crate::module::{SparseVec, VirModule};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::vir::{cocycle, VirElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailKind {
    Verma,
    Mbar,
    Whittaker,
}

/// Parameters of a module induced from `b_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TailModuleSpec {
    #[serde(rename = "type")]
    pub kind: TailKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Scalar>,
    #[serde(default)]
    pub c: Scalar,
    #[serde(default, with = "crate::vir::index_map", skip_serializing_if = "BTreeMap::is_empty")]
    pub psi: BTreeMap<i64, Scalar>,
}

impl TailModuleSpec {
    pub fn verma(h: Scalar, c: Scalar) -> Self {
        TailModuleSpec { kind: TailKind::Verma, m: Some(0), h: Some(h), c, psi: BTreeMap::new() }
    }

    pub fn mbar(c: Scalar) -> Self {
        TailModuleSpec { kind: TailKind::Mbar, m: Some(-1), h: None, c, psi: BTreeMap::new() }
    }

    pub fn whittaker(m: i64, psi: BTreeMap<i64, Scalar>, c: Scalar) -> Result<Self> {
        let s = TailModuleSpec { kind: TailKind::Whittaker, m: Some(m), h: None, c, psi };
        s.validate()?;
        Ok(s)
    }

    pub fn m(&self) -> i64 {
        match self.kind {
            TailKind::Verma => 0,
            TailKind::Mbar => -1,
            TailKind::Whittaker => self.m.unwrap_or(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.m();
        if let Some(given) = self.m {
            if given != m {
                return Err(Error::InvalidInput(format!("{:?} modules have m = {m}, got {given}", self.kind)));
            }
        }
        match self.kind {
            TailKind::Verma => {
                if self.h.is_none() {
                    return Err(Error::InvalidInput("a Verma module needs h".into()));
                }
                if self.psi.iter().any(|(j, v)| *j != 0 && !v.is_zero()) {
                    return Err(Error::InvalidInput("a Verma character vanishes on e_j, j >= 1".into()));
                }
            }
            TailKind::Mbar => {
                if self.psi.values().any(|v| !v.is_zero()) || self.h.as_ref().is_some_and(|h| !h.is_zero()) {
                    return Err(Error::InvalidInput("the M̄ character vanishes on every e_j".into()));
                }
            }
            TailKind::Whittaker => {
                if m < 1 {
                    return Err(Error::InvalidInput("Whittaker modules need m >= 1".into()));
                }
                if let Some((j, _)) = self.psi.iter().find(|(j, v)| (**j < m || **j > 2 * m) && !v.is_zero()) {
                    return Err(Error::InvalidInput(format!("ψ(e_{j}) must vanish outside [{m}, {}]", 2 * m)));
                }
            }
        }
        Ok(())
    }

    /// `ψ(e_j)` for `j >= m`, nonzero entries only.
    pub fn character(&self) -> BTreeMap<i64, Scalar> {
        let mut out = BTreeMap::new();
        match self.kind {
            TailKind::Verma => {
                let h = self.h.clone().or_else(|| self.psi.get(&0).cloned()).unwrap_or_default();
                if !h.is_zero() {
                    out.insert(0, h);
                }
            }
            TailKind::Mbar => {}
            TailKind::Whittaker => {
                for (j, v) in &self.psi {
                    if !v.is_zero() {
                        out.insert(*j, v.clone());
                    }
                }
            }
        }
        out
    }

    /// The largest `j` with `ψ(e_j) != 0`, else `m - 1`.
    pub fn character_top(&self) -> i64 {
        self.character().keys().next_back().copied().unwrap_or(self.m() - 1)
    }

    /// Isomorphism of tails, decided on parameters within each family.
    pub fn same_parameters(&self, other: &TailModuleSpec) -> bool {
        self.kind == other.kind && self.m() == other.m() && self.c == other.c && self.character() == other.character()
    }
}

/// A sorted list of free indices `i_1 <= ⋯ <= i_k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BMonomial(Vec<i64>);

impl BMonomial {
    pub fn generator() -> Self {
        BMonomial(Vec::new())
    }

    /// Sorts the given indices.
    pub fn new(mut indices: Vec<i64>) -> Self {
        indices.sort();
        BMonomial(indices)
    }

    pub fn indices(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ |i|` over negative indices.
    pub fn negative_weight(&self) -> i64 {
        self.0.iter().filter(|&&i| i < 0).map(|i| -i).sum()
    }
}

impl std::fmt::Debug for BMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "e{:?}", self.0)
    }
}

pub type BElement = SparseVec<BMonomial>;

#[derive(Clone, Debug)]
enum Values {
    Finite(BTreeMap<i64, Scalar>),
    Restricted(RestrictedCharacter),
}

#[derive(Clone, Debug)]
pub struct BInducedModule {
    m: i64,
    a: Poly,
    values: Values,
    c: Scalar,
}

#[derive(Default)]
pub struct BMemo {
    act: HashMap<(i64, BMonomial), BElement>,
}

impl BInducedModule {
    pub fn from_tail(spec: &TailModuleSpec) -> Result<Self> {
        spec.validate()?;
        Ok(BInducedModule {
            m: spec.m(),
            a: Poly::constant(Scalar::one()),
            values: Values::Finite(spec.character()),
            c: spec.c.clone(),
        })
    }

    /// `V^{f,m}_μ`, induced from a character of `b_m^f`.
    pub fn from_restricted(mu: &RestrictedCharacter) -> Self {
        BInducedModule {
            m: mu.m(),
            a: mu.modulus(),
            values: Values::Restricted(mu.clone()),
            c: mu.z_value().clone(),
        }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn central_charge(&self) -> &Scalar {
        &self.c
    }

    /// Indices `i < free_bound()` label the free PBW directions.
    pub fn free_bound(&self) -> i64 {
        self.m + self.a.degree()
    }

    fn value(&self, j: i64) -> Scalar {
        match &self.values {
            Values::Finite(v) => v.get(&j).cloned().unwrap_or_else(Scalar::zero),
            Values::Restricted(mu) => mu.value(j).expect("j >= m"),
        }
    }

    /// `e_j v` on the generator.
    fn act_generator(&self, memo: &mut BMemo, j: i64) -> BElement {
        if j < self.free_bound() {
            return BElement::basis(BMonomial(vec![j]));
        }
        let p = self.a.degree();
        let mut out = BElement::zero();
        out.add_term(BMonomial::generator(), &self.value(j - p));
        for i in 0..p {
            let ai = self.a.coeff(i as usize);
            if ai.is_zero() {
                continue;
            }
            let w = self.act_e(memo, j - p + i, &BMonomial::generator());
            out.add_scaled(&w, &-ai);
        }
        out
    }

    fn act_e(&self, memo: &mut BMemo, j: i64, mono: &BMonomial) -> BElement {
        let Some(&i1) = mono.0.first() else {
            return self.act_generator(memo, j);
        };
        if j <= i1 {
            let mut v = Vec::with_capacity(mono.len() + 1);
            v.push(j);
            v.extend_from_slice(&mono.0);
            return BElement::basis(BMonomial(v));
        }
        if let Some(v) = memo.act.get(&(j, mono.clone())) {
            return v.clone();
        }
        let rest = BMonomial(mono.0[1..].to_vec());
        let inner = self.act_e(memo, j, &rest);
        let mut out = BElement::zero();
        for (idx, c) in inner.terms() {
            let w = self.act_e(memo, i1, idx);
            out.add_scaled(&w, c);
        }
        let w = self.act_e(memo, j + i1, &rest);
        out.add_scaled(&w, &Scalar::int(i1 - j));
        if j == -i1 {
            out.add_term(rest, &(&cocycle(j) * &self.c));
        }
        memo.act.insert((j, mono.clone()), out.clone());
        out
    }

    /// `e_j v`.
    pub fn act_e_memo(&self, memo: &mut BMemo, j: i64, v: &BElement) -> BElement {
        let mut out = BElement::zero();
        for (mono, c) in v.terms() {
            let w = self.act_e(memo, j, mono);
            out.add_scaled(&w, c);
        }
        out
    }

    /// An `L` with `e_j v = 0` for all `j >= L`. Only tail modules (`F = 1`)
    /// are locally annihilated.
    pub fn ann_bound(&self, v: &BElement) -> Result<i64> {
        let Values::Finite(vals) = &self.values else {
            return Err(Error::HypothesisViolation("only modules induced from b_m are locally annihilated".into()));
        };
        let top = vals.iter().filter(|(_, x)| !x.is_zero()).map(|(j, _)| *j).max().unwrap_or(self.m - 1);
        let weight = v.terms().map(|(mono, _)| mono.negative_weight()).max().unwrap_or(0);
        Ok(top.max(0) + weight + 1)
    }
}

impl VirModule for BInducedModule {
    type Index = BMonomial;
    type Memo = BMemo;

    fn generator(&self) -> BElement {
        BElement::basis(BMonomial::generator())
    }

    fn act_memo(&self, memo: &mut BMemo, x: &VirElement, v: &BElement) -> BElement {
        let mut out = BElement::zero();
        for (j, c) in x.e_terms() {
            let w = self.act_e_memo(memo, j, v);
            out.add_scaled(&w, c);
        }
        out.add_scaled(v, &(x.z_part() * &self.c));
        out
    }
}

/// `h_{r,s}(c) + h_{s,r}(c)` and `h_{r,s}(c) h_{s,r}(c)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KacPair {
    pub r: u32,
    pub s: u32,
    pub sum: Scalar,
    pub product: Scalar,
}

fn kac_parts(r: u32, s: u32, c: &Scalar) -> (Scalar, Scalar, Scalar) {
    let (r, s) = (r as i64, s as i64);
    let a = (Scalar::int(13) - c) * Scalar::int(r * r + s * s) - Scalar::int(24 * r * s + 2) + Scalar::int(2) * c;
    let b = Scalar::int(r * r - s * s);
    let d = (c - &Scalar::one()) * (c - &Scalar::int(25));
    (a, b, d)
}

/// The rational data of the conjugate pair `h_{r,s}(c)`, `h_{s,r}(c)`.
pub fn kac_h(r: u32, s: u32, c: &Scalar) -> KacPair {
    let (a, b, d) = kac_parts(r, s, c);
    let sum = &a / &Scalar::int(24);
    let product = (&a * &a - &(&b * &b) * &d) / Scalar::int(48 * 48);
    KacPair { r, s, sum, product }
}

/// `Φ_{r,s}(c, h) = (h - h_{r,s}(c)) (h - h_{s,r}(c))`.
pub fn kac_phi(r: u32, s: u32, c: &Scalar, h: &Scalar) -> Scalar {
    let k = kac_h(r, s, c);
    h * h - &(&k.sum * h) + k.product
}

/// `h_{r,s}(c)` and `h_{s,r}(c)` when `(c-1)(c-25)` is a square in the field.
pub fn kac_h_exact(r: u32, s: u32, c: &Scalar) -> Option<(Scalar, Scalar)> {
    let (a, b, d) = kac_parts(r, s, c);
    let root = d.rational_sqrt()?;
    let bs = &b * &root;
    let den = Scalar::int(48);
    Some(((&a + &bs) / den.clone(), (&a - &bs) / den))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KacVerdict {
    pub level: u32,
    pub simple_up_to_level: bool,
    pub degenerate: Option<(u32, u32)>,
}

/// Looks for `(r, s)` with `rs <= level` and `Φ_{r,s}(c, h) = 0`.
pub fn verma_simple_upto(h: &Scalar, c: &Scalar, level: u32) -> Result<KacVerdict> {
    if level == 0 {
        return Err(Error::InvalidInput("level must be at least 1".into()));
    }
    for r in 1..=level {
        for s in 1..=level / r {
            if s < r {
                continue;
            }
            if kac_phi(r, s, c, h).is_zero() {
                let pair = if kac_h_exact(r, s, c).is_some_and(|(x, _)| &x == h) { (r, s) } else { (s, r) };
                return Ok(KacVerdict { level, simple_up_to_level: false, degenerate: Some(pair) });
            }
        }
    }
    Ok(KacVerdict { level, simple_up_to_level: true, degenerate: None })
}

/// Simplicity of `M̄` with central value `c`: reducible exactly when
/// `c = 1 - 6(p-q)^2/(pq)` for coprime `p, q >= 2`. Nonreal `c` is never of
/// that form.
pub fn mbar_simple(c: &Scalar) -> bool {
    let Some(_) = c.as_rational() else {
        return true;
    };
    // 6x^2 - (13 - c)x + 6 = 0 with x = p/q
    let b = Scalar::int(13) - c;
    let disc = &b * &b - &Scalar::int(144);
    let Some(root) = disc.rational_sqrt() else {
        return true;
    };
    for x in [(&b + &root) / Scalar::int(12), (&b - &root) / Scalar::int(12)] {
        let q = x.as_rational().expect("rational");
        if q.numer() >= &2.into() && q.denom() >= &2.into() {
            return false;
        }
    }
    true
}

/// Whittaker criterion: `ψ(e_{2m}) != 0` or `ψ(e_{2m-1}) != 0`.
pub fn whittaker_simple(spec: &TailModuleSpec) -> Result<bool> {
    if spec.kind != TailKind::Whittaker {
        return Err(Error::InvalidInput("not a Whittaker module".into()));
    }
    spec.validate()?;
    let psi = spec.character();
    if psi.is_empty() {
        return Err(Error::HypothesisViolation("ψ must be nonzero".into()));
    }
    let m = spec.m();
    Ok(psi.contains_key(&(2 * m)) || psi.contains_key(&(2 * m - 1)))
}

/// Simplicity verdict for a tail module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailVerdict {
    pub kind: TailKind,
    pub simple: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kac: Option<KacVerdict>,
}

pub fn tail_simple(spec: &TailModuleSpec, kac_level: u32) -> Result<TailVerdict> {
    spec.validate()?;
    Ok(match spec.kind {
        TailKind::Verma => {
            let h = spec.character().get(&0).cloned().unwrap_or_default();
            let k = verma_simple_upto(&h, &spec.c, kac_level)?;
            TailVerdict { kind: spec.kind, simple: k.simple_up_to_level, kac: Some(k) }
        }
        TailKind::Mbar => TailVerdict { kind: spec.kind, simple: mbar_simple(&spec.c), kac: None },
        TailKind::Whittaker => TailVerdict { kind: spec.kind, simple: whittaker_simple(spec)?, kac: None },
    })
}
