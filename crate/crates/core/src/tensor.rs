//! Tensor products `⊗_i V_{μ_i}^{(t-λ_i)^{n_i}} ⊗ V` of single-root induced
//! modules with a tail `V` that is either trivial or induced from `b_m`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::binduced::{tail_simple, BElement, BInducedModule, BMemo, BMonomial, TailKind, TailModuleSpec, TailVerdict};
use crate::character::{ExpPolyCharacter, MuhatClosedForms, MuhatSplit, RestrictedCharacter, RootFactor};
use crate::error::{Error, Result};
use crate::induced::{indices_up_to, search_order, InducedMemo, InducedModule, MultiIndex, SmallDegreeReading};
use crate::laurent::LaurentPoly;
use crate::linalg::SparseEchelon;
use crate::module::{SparseVec, VirModule};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::vir::VirElement;

/// `f^{s̄̄} v_0 ⊗ (tail monomial)`. The derived order is lexicographic on the
/// concatenated parts, then on the tail.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TensorIndex {
    pub parts: Vec<MultiIndex>,
    #[serde(default)]
    pub tail: BMonomial,
}

impl TensorIndex {
    pub fn new(parts: Vec<MultiIndex>, tail: BMonomial) -> Self {
        TensorIndex { parts, tail }
    }

    /// `|s̄̄|`.
    pub fn size(&self) -> u32 {
        self.parts.iter().map(MultiIndex::size).sum()
    }

    /// Whether the term lies in `v_0 ⊗ V`.
    pub fn on_v0(&self) -> bool {
        self.parts.iter().all(MultiIndex::is_zero)
    }
}

impl fmt::Debug for TensorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "⊗")?;
            }
            write!(f, "{p:?}")?;
        }
        if !self.tail.is_empty() {
            write!(f, "⊗{:?}", self.tail)?;
        }
        Ok(())
    }
}

pub type TensorElement = SparseVec<TensorIndex>;

/// Factor data `(λ_i, n_i, p_i)` and a tail; no tail means the trivial module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorSpec {
    pub factors: Vec<RootFactor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailModuleSpec>,
}

impl TensorSpec {
    pub fn new(factors: Vec<RootFactor>, tail: Option<TailModuleSpec>) -> Result<Self> {
        let s = TensorSpec { factors, tail };
        s.validate()?;
        Ok(s)
    }

    /// Roots nonzero and pairwise distinct, `deg p_i < n_i`, tail well formed.
    pub fn validate(&self) -> Result<()> {
        ExpPolyCharacter::new(self.factors.clone())?;
        if let Some(t) = &self.tail {
            t.validate()?;
        }
        Ok(())
    }

    pub fn characters(&self) -> Result<Vec<ExpPolyCharacter>> {
        self.factors.iter().map(|f| ExpPolyCharacter::single(f.lambda.clone(), f.n, f.p.clone())).collect()
    }

    pub fn module(&self) -> Result<TensorModule> {
        self.validate()?;
        let factors = self.characters()?.into_iter().map(InducedModule::new).collect();
        let tail = self.tail.as_ref().map(BInducedModule::from_tail).transpose()?;
        Ok(TensorModule::new(factors, tail))
    }
}

#[derive(Clone, Debug)]
pub struct TensorModule {
    factors: Vec<InducedModule>,
    tail: Option<BInducedModule>,
}

#[derive(Default)]
pub struct TensorMemo {
    factors: Vec<InducedMemo>,
    tail: BMemo,
}

/// One application of `t^j ĝ F̂ - μ_{i_0}(t^j f^m)`.
#[derive(Clone, Debug, Serialize)]
pub struct CyclicStep {
    /// `i_0`, the first factor with a nonzero part in `Λ(w)`.
    pub factor: usize,
    pub m: u32,
    pub j: i64,
    /// `L` with `Vir_{>=L}` killing every tail component, if there is a tail.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ann_bound: Option<i64>,
    /// `t^j ĝ F̂`.
    pub operator: LaurentPoly,
    /// `μ_{i_0}(t^j f^m)`.
    pub shift: Scalar,
    pub leading: TensorIndex,
    pub w: TensorElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicTrace {
    pub steps: Vec<CyclicStep>,
    /// The final vector, supported on `v_0 ⊗ V`.
    pub result: TensorElement,
}

fn valuation(p: &Poly) -> i64 {
    p.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0) as i64
}

impl TensorModule {
    pub fn new(factors: Vec<InducedModule>, tail: Option<BInducedModule>) -> Self {
        TensorModule { factors, tail }
    }

    pub fn factors(&self) -> &[InducedModule] {
        &self.factors
    }

    pub fn tail(&self) -> Option<&BInducedModule> {
        self.tail.as_ref()
    }

    /// `v_0 ⊗ v`.
    pub fn generator_index(&self) -> TensorIndex {
        TensorIndex::new(self.factors.iter().map(InducedModule::generator_index).collect(), BMonomial::generator())
    }

    fn prepare(&self, memo: &mut TensorMemo) {
        if memo.factors.len() < self.factors.len() {
            memo.factors.resize_with(self.factors.len(), InducedMemo::default);
        }
    }

    fn act_on_factors(&self, memo: &mut TensorMemo, g: &LaurentPoly, idx: &TensorIndex, c: &Scalar, out: &mut TensorElement) {
        for (i, f) in self.factors.iter().enumerate() {
            let w = f.act_laurent_memo(&mut memo.factors[i], g, &SparseVec::basis(idx.parts[i].clone()));
            for (s, d) in w.terms() {
                let mut k = idx.clone();
                k.parts[i] = s.clone();
                out.add_term(k, &(c * d));
            }
        }
    }

    fn act_on_tail(&self, memo: &mut TensorMemo, x: &VirElement, idx: &TensorIndex, c: &Scalar, out: &mut TensorElement) {
        let Some(t) = &self.tail else {
            return;
        };
        let w = t.act_memo(&mut memo.tail, x, &BElement::basis(idx.tail.clone()));
        for (mono, d) in w.terms() {
            let mut k = idx.clone();
            k.tail = mono.clone();
            out.add_term(k, &(c * d));
        }
    }

    /// The action of `g ∈ C[t^±]` through `θ`, on every factor and the tail.
    pub fn act_laurent_memo(&self, memo: &mut TensorMemo, g: &LaurentPoly, v: &TensorElement) -> TensorElement {
        self.act_memo(memo, &VirElement::from_laurent(g), v)
    }

    pub fn act_laurent(&self, g: &LaurentPoly, v: &TensorElement) -> TensorElement {
        self.act_laurent_memo(&mut TensorMemo::default(), g, v)
    }

    /// The Leibniz action of `g` on the induced factors only.
    pub fn act_induced(&self, g: &LaurentPoly, v: &TensorElement) -> TensorElement {
        let mut memo = TensorMemo::default();
        self.prepare(&mut memo);
        let mut out = TensorElement::zero();
        for (idx, c) in v.terms() {
            self.act_on_factors(&mut memo, g, idx, c, &mut out);
        }
        out
    }

    /// `N_i = n_i + r_i + max s_{i,0} + 1` over the terms of `w`, so that
    /// `⟨f_i^{N_i}⟩` kills the `i`-th component of every term.
    pub fn annihilation_exponents(&self, w: &TensorElement) -> Vec<u32> {
        self.factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let fa = &f.character().factors()[0];
                let s0 = w.terms().map(|(idx, _)| idx.parts[i].get(0) as i64).max().unwrap_or(0);
                (fa.n as i64 + fa.r() + s0 + 1) as u32
            })
            .collect()
    }

    fn root(&self, i: usize) -> &Scalar {
        &self.factors[i].character().factors()[0].lambda
    }

    /// `Π f_i^{N_i}` over the factors selected by `keep`.
    fn annihilator(&self, ns: &[u32], keep: impl Fn(usize) -> bool) -> Poly {
        let mut out = Poly::constant(Scalar::one());
        for (i, &n) in ns.iter().enumerate() {
            if keep(i) {
                out = &out * &Poly::linear_root(self.root(i)).pow(n);
            }
        }
        out
    }

    /// A polynomial `h̃ ∈ span{t^j : j >= L}` acting on the induced factors of
    /// `w` exactly as `h` does, from Bezout of `t^L` against `Π f_i^{N_i}`.
    pub fn annihilating_shift(&self, h: &LaurentPoly, l: i64, w: &TensorElement) -> Result<LaurentPoly> {
        if l < 0 {
            return Err(Error::InvalidInput(format!("L = {l} must be nonnegative")));
        }
        let hp = h.to_poly().ok_or_else(|| Error::InvalidInput("h must lie in C[t]".into()))?;
        if hp.is_zero() || valuation(&hp) >= l {
            return Ok(h.clone());
        }
        let f = self.annihilator(&self.annihilation_exponents(w), |_| true);
        let tl = Poly::monomial(Scalar::one(), l as usize);
        let (g, u, _) = Poly::ext_gcd(&tl, &f);
        if g.degree() != 0 {
            return Err(Error::NotCoprime);
        }
        let r = (&hp * &u).rem(&f)?;
        Ok(LaurentPoly::from_poly(&r).shift(l))
    }

    fn check_reducible(&self) -> Result<()> {
        for f in &self.factors {
            let fa = &f.character().factors()[0];
            if SmallDegreeReading::Corrected.predicts_reducible(fa.n, fa.r()) {
                return Err(Error::HypothesisViolation(format!(
                    "factor at λ = {} has n = {}, r = {}, so the tensor product is not simple",
                    fa.lambda,
                    fa.n,
                    fa.r()
                )));
            }
        }
        Ok(())
    }

    fn cyclic_step(&self, memo: &mut TensorMemo, w: &TensorElement, window: u32) -> Result<CyclicStep> {
        let u = w.max_index().ok_or(Error::ZeroVector)?;
        let i0 = u.parts.iter().position(|s| !s.is_zero()).expect("leading index off v_0");
        let fac = &self.factors[i0];
        let (m, target) = fac.reduction_target(&u.parts[i0])?;
        let mut expected = u.parts.clone();
        expected[i0] = target;

        let ns = self.annihilation_exponents(w);
        let f_i0 = self.annihilator(&ns, |i| i == i0);
        let f_hat = self.annihilator(&ns, |i| i != i0);
        let (_, _, v) = Poly::ext_gcd(&f_i0, &f_hat);
        let fm = Poly::linear_root(self.root(i0)).pow(m);
        let g_hat = (&fm * &v).rem(&f_i0)?;
        let base = &g_hat * &f_hat;
        let val = valuation(&base);

        let ann_bound = match &self.tail {
            Some(t) => {
                let tails = BElement::from_terms(w.terms().map(|(idx, _)| (idx.tail.clone(), Scalar::one())));
                Some(t.ann_bound(&tails)?)
            }
            None => None,
        };
        let candidates: Vec<i64> = match ann_bound {
            Some(l) => (l - val..=l - val + 2 * window as i64).collect(),
            None => search_order(window).collect(),
        };
        let base = LaurentPoly::from_poly(&base);
        let fm = LaurentPoly::from_poly(&fm);
        for &j in &candidates {
            let operator = base.shift(j);
            let shift = fac.character().eval(&fm.shift(j))?;
            let mut next = self.act_laurent_memo(memo, &operator, w);
            next.add_scaled(w, &-shift.clone());
            if let Some(lead) = next.max_index() {
                if lead.parts == expected {
                    let leading = lead.clone();
                    return Ok(CyclicStep { factor: i0, m, j, ann_bound, operator, shift, leading, w: next });
                }
            }
        }
        Err(Error::SearchExhausted { lo: candidates[0], hi: *candidates.last().expect("nonempty window") })
    }

    /// Lowers `Λ(w)` step by step until `w ∈ v_0 ⊗ V`, following the proof
    /// that the tensor product is simple.
    pub fn cyclic_reduce(&self, w: &TensorElement, window: u32, max_steps: usize) -> Result<CyclicTrace> {
        self.check_reducible()?;
        let mut memo = TensorMemo::default();
        let mut cur = w.clone();
        let mut steps = Vec::new();
        while !cur.max_index().ok_or(Error::ZeroVector)?.on_v0() {
            if steps.len() == max_steps {
                return Err(Error::StepLimit(max_steps));
            }
            let step = self.cyclic_step(&mut memo, &cur, window)?;
            cur = step.w.clone();
            steps.push(step);
        }
        Ok(CyclicTrace { steps, result: cur })
    }

    /// Indices `f^{s̄̄} v_0 ⊗ v` with `|s̄̄| <= max_size`.
    pub fn indices_up_to(&self, max_size: u32) -> Vec<TensorIndex> {
        let mut out = vec![Vec::new()];
        for f in &self.factors {
            let mut next = Vec::new();
            for prefix in &out {
                let used: u32 = prefix.iter().map(MultiIndex::size).sum();
                for s in indices_up_to(f.rank(), max_size - used) {
                    let mut p = prefix.clone();
                    p.push(s);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(|parts| TensorIndex::new(parts, BMonomial::generator())).collect()
    }

    /// Whether the span of indices with `s_{factor, pos} >= 1` is stable under
    /// `e_k`, `|k| <= kmax`, checked on all indices with `|s̄̄| <= max_size`.
    pub fn slice_invariant(&self, factor: usize, pos: usize, kmax: i64, max_size: u32) -> bool {
        let mut memo = TensorMemo::default();
        for idx in self.indices_up_to(max_size) {
            if idx.parts[factor].get(pos) == 0 {
                continue;
            }
            let v = TensorElement::basis(idx);
            for k in -kmax..=kmax {
                let w = self.act_laurent_memo(&mut memo, &LaurentPoly::t(k), &v);
                if w.terms().any(|(i, _)| i.parts[factor].get(pos) == 0) {
                    return false;
                }
            }
        }
        true
    }
}

impl VirModule for TensorModule {
    type Index = TensorIndex;
    type Memo = TensorMemo;

    fn generator(&self) -> TensorElement {
        TensorElement::basis(self.generator_index())
    }

    /// Induced factors see `θ(x)` and kill `z`; the tail sees all of `x`.
    fn act_memo(&self, memo: &mut TensorMemo, x: &VirElement, v: &TensorElement) -> TensorElement {
        self.prepare(memo);
        let g = x.theta();
        let mut out = TensorElement::zero();
        for (idx, c) in v.terms() {
            self.act_on_factors(memo, &g, idx, c, &mut out);
            self.act_on_tail(memo, x, idx, c, &mut out);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorVerdict {
    pub lambda: Scalar,
    pub n: u32,
    pub r: i64,
    /// `r >= n - 2`.
    pub large_degree: bool,
    /// Large degree and a nonzero character.
    pub simple: bool,
}

/// The `μ̂` data of a restricted character next to its closed forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictedReport {
    pub m: i64,
    pub split: MuhatSplit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_forms: Option<MuhatClosedForms>,
    /// Closed forms equal the triangular-solve values, with
    /// `a_0^3 μ̂_{2m-1}` for the displayed Whittaker quantity.
    pub closed_forms_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub simple: bool,
    pub factors: Vec<FactorVerdict>,
    /// `None` for the trivial tail, which is simple.
    pub tail: Option<TailVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted: Option<RestrictedReport>,
}

fn factor_verdicts(fs: &[RootFactor]) -> Vec<FactorVerdict> {
    fs.iter()
        .map(|f| FactorVerdict {
            lambda: f.lambda.clone(),
            n: f.n,
            r: f.r(),
            large_degree: f.r() >= f.n as i64 - 2,
            simple: !SmallDegreeReading::Corrected.predicts_reducible(f.n, f.r()),
        })
        .collect()
}

/// Simple iff every factor has large degree and nonzero character and the tail is simple.
pub fn simplicity_verdict(spec: &TensorSpec, kac_level: u32) -> Result<SimplicityReport> {
    spec.validate()?;
    let factors = factor_verdicts(&spec.factors);
    let tail = spec.tail.as_ref().map(|t| tail_simple(t, kac_level)).transpose()?;
    let simple = factors.iter().all(|f| f.simple) && tail.as_ref().is_none_or(|t| t.simple);
    Ok(SimplicityReport { simple, factors, tail, restricted: None })
}

/// `Ind_{b_m} C_{μ̂}` for the split of a restricted character.
pub fn tail_of_split(m: i64, split: &MuhatSplit) -> Result<TailModuleSpec> {
    match m {
        -1 => Ok(TailModuleSpec::mbar(split.z.clone())),
        0 => Ok(TailModuleSpec::verma(split.mu_hat.get(&0).cloned().unwrap_or_default(), split.z.clone())),
        _ => TailModuleSpec::whittaker(m, split.mu_hat.clone(), split.z.clone()),
    }
}

/// Simplicity of `V^{f,m}_μ ≅ V^f_{μ̈} ⊗ Ind_{b_m} C_{μ̂}`.
pub fn restricted_verdict(mu: &RestrictedCharacter, kac_level: u32) -> Result<SimplicityReport> {
    let m = mu.m();
    let split = mu.split_muhat();
    let factors = factor_verdicts(split.mu_ddot.factors());
    let spec = tail_of_split(m, &split)?;
    let tail = if spec.kind == TailKind::Whittaker && spec.character().is_empty() {
        TailVerdict { kind: TailKind::Whittaker, simple: false, kac: None }
    } else {
        tail_simple(&spec, kac_level)?
    };
    let (closed_forms, closed_forms_agree) = if m >= 0 {
        let cf = mu.closed_forms()?;
        let hat = |j: i64| split.mu_hat.get(&j).cloned().unwrap_or_default();
        let mut agree = cf.mu_hat_2m == hat(2 * m);
        if let (Some(v), Some(d)) = (&cf.mu_hat_2m_minus_1, &cf.whittaker_displayed) {
            let a0 = mu.modulus().coeff(0);
            agree &= *v == hat(2 * m - 1) && *d == &(&(&a0 * &a0) * &a0) * &hat(2 * m - 1);
        }
        (Some(cf), agree)
    } else {
        (None, true)
    };
    let simple = factors.iter().all(|f| f.simple) && tail.simple;
    Ok(SimplicityReport {
        simple,
        factors,
        tail: Some(tail),
        restricted: Some(RestrictedReport { m, split, closed_forms, closed_forms_agree }),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    /// `permutation[i]` is the factor of the second spec matching factor `i` of the first.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    pub reason: String,
}

impl IsoVerdict {
    fn no(reason: String) -> Self {
        IsoVerdict { isomorphic: false, permutation: None, reason }
    }
}

/// Decides isomorphism of two tensor products with simple tails: the factor
/// data must agree up to renumbering and the tails must have equal parameters.
pub fn iso_decide(a: &TensorSpec, b: &TensorSpec) -> IsoVerdict {
    if a.factors.len() != b.factors.len() {
        return IsoVerdict::no(format!("factor counts differ ({} vs {})", a.factors.len(), b.factors.len()));
    }
    let mut perm = Vec::with_capacity(a.factors.len());
    for fa in &a.factors {
        let Some(j) = b.factors.iter().position(|fb| fb.lambda == fa.lambda) else {
            return IsoVerdict::no(format!("root {} appears only in the first product", fa.lambda));
        };
        let fb = &b.factors[j];
        if fa.n != fb.n {
            return IsoVerdict::no(format!("multiplicities differ at λ = {} ({} vs {})", fa.lambda, fa.n, fb.n));
        }
        if fa.p != fb.p {
            return IsoVerdict::no(format!("characters differ at λ = {}", fa.lambda));
        }
        perm.push(j);
    }
    let tails_match = match (&a.tail, &b.tail) {
        (None, None) => true,
        (Some(x), Some(y)) => x.same_parameters(y),
        _ => false,
    };
    if !tails_match {
        return IsoVerdict::no("tail modules differ".into());
    }
    IsoVerdict { isomorphic: true, permutation: Some(perm), reason: "factors and tails match".into() }
}

/// Result of comparing `w·v_{α+β}` with `w·(v_α ⊗ v_β)` over words `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorMapReport {
    pub depth: u32,
    pub words: usize,
    pub source_rank: usize,
    pub target_rank: usize,
    pub joint_rank: usize,
    /// Every relation among source vectors holds among their images, so
    /// `w·v_{α+β} ↦ w·(v_α ⊗ v_β)` is a well-defined module map on the slice.
    pub equivariant: bool,
    /// Every relation among the images already holds in the source.
    pub injective: bool,
    pub passed: bool,
}

/// Letters of the words applied to both generators.
pub const MAP_LETTERS: std::ops::RangeInclusive<i64> = -2..=2;

fn word_orbit<M: VirModule>(module: &M, depth: u32) -> Vec<SparseVec<M::Index>> {
    let mut memo = M::Memo::default();
    let gen = module.generator();
    let mut out = vec![gen.clone(), module.act_memo(&mut memo, &VirElement::central(), &gen)];
    let mut level = vec![gen];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * MAP_LETTERS.count());
        for v in &level {
            for k in MAP_LETTERS {
                next.push(module.act_memo(&mut memo, &VirElement::e(k), v));
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

fn coordinates<I: Ord + Clone + std::hash::Hash>(
    vecs: &[SparseVec<I>],
    offset: usize,
    cols: &mut HashMap<I, usize>,
) -> Vec<BTreeMap<usize, Scalar>> {
    vecs.iter()
        .map(|v| {
            v.terms()
                .map(|(i, c)| {
                    let n = cols.len();
                    let col = *cols.entry(i.clone()).or_insert(n);
                    (col, c.clone())
                })
                .collect::<Vec<_>>()
        })
        .map(|row| row.into_iter().map(|(c, x)| (c + offset, x)).collect())
        .collect()
}

fn prefix_rank(first: &[BTreeMap<usize, Scalar>], second: &[BTreeMap<usize, Scalar>], width: usize) -> (usize, usize) {
    let mut e = SparseEchelon::new();
    for (a, b) in first.iter().zip(second) {
        let mut row = a.clone();
        row.extend(b.iter().map(|(c, x)| (c + width, x.clone())));
        e.insert(row);
    }
    (e.pivot_columns().filter(|&c| c < width).count(), e.rank())
}

/// Compares a module `V_{α+β}` with a tensor product `V_α ⊗ V_β` on the
/// slices spanned by words of length `<= depth` in `e_{-2}, …, e_2` applied
/// to the generators, plus `z` on the generator.
pub fn general_tensor_map<S: VirModule>(source: &S, target: &TensorModule, depth: u32) -> Result<TensorMapReport> {
    if depth == 0 {
        return Err(Error::DepthTooSmall(0));
    }
    let a = word_orbit(source, depth);
    let b = word_orbit(target, depth);
    let mut ca = HashMap::new();
    let mut cb = HashMap::new();
    let ra = coordinates(&a, 0, &mut ca);
    let rb = coordinates(&b, 0, &mut cb);
    let (source_rank, joint_rank) = prefix_rank(&ra, &rb, ca.len());
    let (target_rank, joint2) = prefix_rank(&rb, &ra, cb.len());
    debug_assert_eq!(joint_rank, joint2);
    let equivariant = source_rank == joint_rank;
    let injective = target_rank == joint_rank;
    Ok(TensorMapReport {
        depth,
        words: a.len(),
        source_rank,
        target_rank,
        joint_rank,
        equivariant,
        injective,
        passed: equivariant && injective,
    })
}

/// `V^f_μ` with `μ = Σ μ_i` against `⊗_i V_{μ_i}^{(t-λ_i)^{n_i}}`.
pub fn genf_tensor_map(parts: &[ExpPolyCharacter], depth: u32) -> Result<TensorMapReport> {
    let mu = ExpPolyCharacter::compose(parts)?;
    let source = InducedModule::new(mu);
    let target = TensorModule::new(parts.iter().cloned().map(InducedModule::new).collect(), None);
    general_tensor_map(&source, &target, depth)
}

/// `V^{f,m}_μ` against `⊗_i V_{μ̈_i} ⊗ Ind_{b_m} C_{μ̂}`.
pub fn restricted_tensor_map(mu: &RestrictedCharacter, depth: u32) -> Result<TensorMapReport> {
    let split = mu.split_muhat();
    let tail = BInducedModule::from_tail(&tail_of_split(mu.m(), &split)?)?;
    let factors = split.mu_ddot.decompose()?.into_iter().map(InducedModule::new).collect();
    let source = BInducedModule::from_restricted(mu);
    general_tensor_map(&source, &TensorModule::new(factors, Some(tail)), depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    fn rf(l: i64, n: u32, p: &[i64]) -> RootFactor {
        RootFactor::new(s(l), n, Poly::from_ints(p))
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn ti(parts: &[&[u32]]) -> TensorIndex {
        TensorIndex::new(parts.iter().map(|p| mi(p)).collect(), BMonomial::generator())
    }

    #[test]
    fn rejects_repeated_or_zero_roots() {
        assert!(TensorSpec::new(vec![rf(1, 1, &[1]), rf(1, 1, &[2])], None).is_err());
        assert!(TensorSpec::new(vec![rf(0, 1, &[1])], None).is_err());
    }

    #[test]
    fn central_element_acts_by_tail_value() {
        let t = TensorSpec::new(vec![rf(1, 1, &[1]), rf(2, 1, &[1])], None).unwrap().module().unwrap();
        assert!(t.act(&VirElement::central(), &t.generator()).is_zero());
        let tail = TailModuleSpec::verma(s(1), s(3));
        let t = TensorSpec::new(vec![rf(1, 1, &[1])], Some(tail)).unwrap().module().unwrap();
        assert_eq!(t.act(&VirElement::central(), &t.generator()), t.generator().scale(&s(3)));
    }

    #[test]
    fn single_factor_matches_induced_action() {
        let mu = ExpPolyCharacter::single(s(1), 2, Poly::from_ints(&[1, 1])).unwrap();
        let v = InducedModule::new(mu);
        let t = TensorSpec::new(vec![rf(1, 2, &[1, 1])], None).unwrap().module().unwrap();
        let x = VirElement::from_parts([(-2, s(1)), (3, s(-2))], s(5));
        for idx in indices_up_to(2, 2) {
            let a = v.act(&x, &SparseVec::basis(idx.clone()));
            let b = t.act(&x, &TensorElement::basis(TensorIndex::new(vec![idx], BMonomial::generator())));
            let lifted = a.map_linear(|s| TensorElement::basis(TensorIndex::new(vec![s.clone()], BMonomial::generator())));
            assert_eq!(b, lifted);
        }
    }

    #[test]
    fn leibniz_on_two_factors() {
        let t = TensorSpec::new(vec![rf(1, 1, &[1]), rf(2, 1, &[1])], None).unwrap().module().unwrap();
        let w = t.act(&VirElement::e(0), &t.generator());
        let f1 = InducedModule::new(ExpPolyCharacter::single(s(1), 1, Poly::from_ints(&[1])).unwrap());
        let f2 = InducedModule::new(ExpPolyCharacter::single(s(2), 1, Poly::from_ints(&[1])).unwrap());
        let a = f1.act_laurent(&LaurentPoly::one(), &f1.generator());
        let b = f2.act_laurent(&LaurentPoly::one(), &f2.generator());
        let mut expected = TensorElement::zero();
        for (i, c) in a.terms() {
            expected.add_term(TensorIndex::new(vec![i.clone(), mi(&[0])], BMonomial::generator()), c);
        }
        for (i, c) in b.terms() {
            expected.add_term(TensorIndex::new(vec![mi(&[0]), i.clone()], BMonomial::generator()), c);
        }
        assert_eq!(w, expected);
    }

    #[test]
    fn annihilating_shift_example() {
        let t = TensorSpec::new(vec![rf(1, 1, &[1])], None).unwrap().module().unwrap();
        let w = t.generator();
        assert_eq!(t.annihilation_exponents(&w), vec![2]);
        let h = t.annihilating_shift(&LaurentPoly::one(), 1, &w).unwrap();
        // u t + v (t-1)^2 = 1 with u = 2 - t
        assert_eq!(h, LaurentPoly::from_ints(&[(1, 2), (2, -1)]));
        assert_eq!(t.act_induced(&h, &w), t.act_induced(&LaurentPoly::one(), &w));
        let g = LaurentPoly::t(3);
        assert_eq!(t.annihilating_shift(&g, 2, &w).unwrap(), g);
    }

    #[test]
    fn annihilating_shift_on_two_factors() {
        let t = TensorSpec::new(vec![rf(1, 2, &[0, 1]), rf(-1, 1, &[3])], None).unwrap().module().unwrap();
        let w = TensorElement::from_terms([(ti(&[&[1, 1], &[0]]), s(1)), (ti(&[&[0, 0], &[2]]), s(-2))]);
        let h = LaurentPoly::from_ints(&[(0, 1), (1, 3)]);
        let ht = t.annihilating_shift(&h, 4, &w).unwrap();
        assert!(ht.valuation().unwrap() >= 4);
        assert_eq!(t.act_induced(&ht, &w), t.act_induced(&h, &w));
    }

    #[test]
    fn cyclic_reduce_single_factor() {
        let t = TensorSpec::new(vec![rf(1, 1, &[2])], None).unwrap().module().unwrap();
        let w = TensorElement::basis(ti(&[&[1]]));
        let tr = t.cyclic_reduce(&w, 16, 8).unwrap();
        assert_eq!(tr.steps.len(), 1);
        assert!(tr.result.terms().all(|(i, _)| i.on_v0()));
        assert!(t.cyclic_reduce(&t.generator(), 16, 8).unwrap().steps.is_empty());
    }

    #[test]
    fn cyclic_reduce_two_factors() {
        let t = TensorSpec::new(vec![rf(1, 1, &[1]), rf(2, 1, &[3])], None).unwrap().module().unwrap();
        let w = TensorElement::basis(ti(&[&[1], &[0]]));
        let tr = t.cyclic_reduce(&w, 16, 8).unwrap();
        assert!((1..=2).contains(&tr.steps.len()));
        let mut prev = ti(&[&[1], &[0]]);
        for st in &tr.steps {
            assert!(st.leading < prev);
            prev = st.leading.clone();
        }
    }

    #[test]
    fn cyclic_reduce_with_verma_tail() {
        let tail = TailModuleSpec::verma(s(1), s(2));
        let t = TensorSpec::new(vec![rf(1, 2, &[0, 1]), rf(-1, 1, &[1])], Some(tail)).unwrap().module().unwrap();
        let w = TensorElement::from_terms([
            (TensorIndex::new(vec![mi(&[0, 1]), mi(&[1])], BMonomial::new(vec![-1])), s(1)),
            (TensorIndex::new(vec![mi(&[1, 0]), mi(&[0])], BMonomial::new(vec![-2, -1])), s(3)),
        ]);
        let tr = t.cyclic_reduce(&w, 16, 12).unwrap();
        assert!(!tr.result.is_zero());
        assert!(tr.result.terms().all(|(i, _)| i.on_v0()));
        assert!(tr.steps.iter().all(|st| st.operator.valuation().unwrap() >= st.ann_bound.unwrap()));
    }

    #[test]
    fn cyclic_reduce_rejects_small_degree() {
        let t = TensorSpec::new(vec![rf(1, 3, &[1])], None).unwrap().module().unwrap();
        let w = TensorElement::basis(ti(&[&[1, 0, 0]]));
        assert!(matches!(t.cyclic_reduce(&w, 16, 8), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn small_degree_slice_is_invariant() {
        let t = TensorSpec::new(vec![rf(1, 3, &[1]), rf(2, 1, &[1])], None).unwrap().module().unwrap();
        assert!(t.slice_invariant(0, 2, 4, 2));
        let t = TensorSpec::new(vec![rf(1, 2, &[1]), rf(2, 1, &[1])], None).unwrap().module().unwrap();
        assert!(!t.slice_invariant(0, 1, 4, 2));
    }

    #[test]
    fn verdict_examples() {
        let one = TensorSpec::new(vec![rf(1, 1, &[1])], None).unwrap();
        assert!(simplicity_verdict(&one, 20).unwrap().simple);
        let small = TensorSpec::new(vec![rf(1, 3, &[1])], None).unwrap();
        assert!(!simplicity_verdict(&small, 20).unwrap().simple);
        let zero = TensorSpec::new(vec![rf(1, 1, &[])], None).unwrap();
        let v = simplicity_verdict(&zero, 20).unwrap();
        assert!(v.factors[0].large_degree && !v.simple);
        let verma0 = TensorSpec::new(vec![rf(1, 1, &[1])], Some(TailModuleSpec::verma(s(0), s(1)))).unwrap();
        assert!(!simplicity_verdict(&verma0, 20).unwrap().simple);
    }

    #[test]
    fn restricted_verdict_reports_closed_forms() {
        let roots = [(s(1), 1), (s(2), 1)];
        let window: BTreeMap<i64, Scalar> = [(1, s(1)), (2, s(0)), (3, s(2)), (4, s(5))].into_iter().collect();
        let rc = RestrictedCharacter::new(1, &roots, window, s(1)).unwrap();
        let r = restricted_verdict(&rc, 20).unwrap();
        let rr = r.restricted.unwrap();
        assert!(rr.closed_forms_agree);
        assert_eq!(r.tail.unwrap().kind, TailKind::Whittaker);
    }

    #[test]
    fn iso_examples() {
        let a = TensorSpec::new(vec![rf(1, 1, &[1]), rf(2, 2, &[0, 1])], None).unwrap();
        let b = TensorSpec::new(vec![rf(2, 2, &[0, 1]), rf(1, 1, &[1])], None).unwrap();
        let v = iso_decide(&a, &b);
        assert!(v.isomorphic);
        assert_eq!(v.permutation, Some(vec![1, 0]));
        let c = TensorSpec::new(vec![rf(1, 1, &[1]), rf(3, 2, &[0, 1])], None).unwrap();
        assert!(!iso_decide(&a, &c).isomorphic);
        let d = TensorSpec::new(vec![rf(1, 1, &[2]), rf(2, 2, &[0, 1])], None).unwrap();
        assert!(!iso_decide(&a, &d).isomorphic);
    }

    #[test]
    fn tensor_map_depth_zero() {
        let parts = [ExpPolyCharacter::single(s(1), 1, Poly::from_ints(&[1])).unwrap()];
        assert_eq!(genf_tensor_map(&parts, 0), Err(Error::DepthTooSmall(0)));
    }

    #[test]
    fn tensor_map_two_roots() {
        let parts = [
            ExpPolyCharacter::single(s(1), 1, Poly::from_ints(&[1])).unwrap(),
            ExpPolyCharacter::single(s(2), 1, Poly::from_ints(&[2])).unwrap(),
        ];
        let r = genf_tensor_map(&parts, 2).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn tensor_map_detects_wrong_character() {
        let parts = [
            ExpPolyCharacter::single(s(1), 1, Poly::from_ints(&[1])).unwrap(),
            ExpPolyCharacter::single(s(2), 1, Poly::from_ints(&[2])).unwrap(),
        ];
        let wrong = ExpPolyCharacter::single(s(2), 1, Poly::from_ints(&[3])).unwrap();
        let source = InducedModule::new(ExpPolyCharacter::compose(&parts).unwrap());
        let target = TensorModule::new(vec![InducedModule::new(parts[0].clone()), InducedModule::new(wrong)], None);
        assert!(!general_tensor_map(&source, &target, 2).unwrap().passed);
    }

    #[test]
    fn tensor_map_restricted_verma() {
        let roots = [(s(1), 1), (s(2), 1)];
        let window: BTreeMap<i64, Scalar> = [(0, s(3)), (1, s(1)), (2, s(2))].into_iter().collect();
        let rc = RestrictedCharacter::new(0, &roots, window, s(1)).unwrap();
        let r = restricted_tensor_map(&rc, 2).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn tensor_map_restricted_detects_wrong_weight() {
        let roots = [(s(1), 1), (s(2), 1)];
        let window: BTreeMap<i64, Scalar> = [(0, s(3)), (1, s(1)), (2, s(2))].into_iter().collect();
        let rc = RestrictedCharacter::new(0, &roots, window, s(1)).unwrap();
        let split = rc.split_muhat();
        let h = &split.mu_hat.get(&0).cloned().unwrap_or_default() + &s(1);
        let tail = BInducedModule::from_tail(&TailModuleSpec::verma(h, s(1))).unwrap();
        let factors = split.mu_ddot.decompose().unwrap().into_iter().map(InducedModule::new).collect();
        let source = BInducedModule::from_restricted(&rc);
        let r = general_tensor_map(&source, &TensorModule::new(factors, Some(tail)), 2).unwrap();
        assert!(!r.passed, "{r:?}");
    }

    #[test]
    fn tensor_map_depth_three() {
        let parts = [
            ExpPolyCharacter::single(s(1), 1, Poly::from_ints(&[1])).unwrap(),
            ExpPolyCharacter::single(s(2), 1, Poly::from_ints(&[2])).unwrap(),
        ];
        let r = genf_tensor_map(&parts, 3).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.words, 1 + 1 + 5 + 25 + 125);
        let roots = [(s(1), 1), (s(2), 1)];
        let window: BTreeMap<i64, Scalar> = [(0, s(3)), (1, s(1)), (2, s(2))].into_iter().collect();
        let rc = RestrictedCharacter::new(0, &roots, window, s(1)).unwrap();
        let r = restricted_tensor_map(&rc, 3).unwrap();
        assert!(r.passed, "{r:?}");
        eprintln!("{r:?}");
    }
}
