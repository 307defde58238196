//! Named verification suites that compare closed forms and criteria against
//! the straightening engines over fixed parameter grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::character::ExpPolyCharacter;
use crate::error::{Error, Result};
use crate::faulhaber::{faulhaber_neg_sum, faulhaber_sum};
use crate::induced::{indices_up_to, FactorialReading, InducedMemo, InducedModule, ModuleElement, SmallDegreeReading};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::tensor::{genf_tensor_map, restricted_tensor_map};

pub const SUITES: [&str; 11] = [
    "repRootPowerComp1",
    "repRootPowerComp3",
    "brack-tupleSize",
    "reducedegree",
    "faulhaber",
    "degreehom",
    "codim1",
    "omega-iso",
    "smalldegree-quotient",
    "muhat-split",
    "tensor-map",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: u64,
    pub failed: u64,
    pub first_counterexample: Option<Value>,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub nmax: u32,
    pub seed: u64,
    pub factorial_reading: FactorialReading,
    pub small_degree_reading: SmallDegreeReading,
    pub j_window: u32,
    pub depth: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            nmax: 3,
            seed: 0,
            factorial_reading: FactorialReading::Corrected,
            small_degree_reading: SmallDegreeReading::Corrected,
            j_window: 16,
            depth: 3,
        }
    }
}

struct Tally {
    suite: &'static str,
    passed: u64,
    failed: u64,
    first: Option<Value>,
}

impl Tally {
    fn new(suite: &'static str) -> Self {
        Tally { suite, passed: 0, failed: 0, first: None }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> Value) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(case());
            }
        }
    }

    fn finish(self, seed: u64) -> SuiteReport {
        SuiteReport { suite: self.suite.into(), passed: self.passed, failed: self.failed, first_counterexample: self.first, seed }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let Some(&suite) = SUITES.iter().find(|s| **s == name) else {
        return Err(Error::InvalidInput(format!("unknown suite {name:?}; known: {}", SUITES.join(", "))));
    };
    let t = match suite {
        "repRootPowerComp1" => closed_form_grid(suite, opts, false)?,
        "repRootPowerComp3" => closed_form_grid(suite, opts, true)?,
        "brack-tupleSize" => size_bound_grid(opts)?,
        "reducedegree" => reduce_grid(opts)?,
        "faulhaber" => faulhaber_grid(),
        "degreehom" => degreehom_grid(opts)?,
        "codim1" => codim1_grid()?,
        "omega-iso" => omega_grid(opts)?,
        "smalldegree-quotient" => quotient_grid(opts)?,
        "muhat-split" => muhat_grid(opts)?,
        "tensor-map" => tensor_map_grid(opts)?,
        _ => unreachable!(),
    };
    Ok(t.finish(opts.seed))
}

/// `p(j) = Σ_{k<=r} (k+1) j^k`, a fixed polynomial of degree `r`.
fn grid_poly(r: i64) -> Poly {
    Poly::new((0..=r).map(|k| Scalar::int(k + 1)).collect())
}

const GRID_LAMBDAS: [i64; 2] = [1, -2];

fn grid_modules(nmax: u32) -> Result<Vec<(i64, u32, i64, InducedModule)>> {
    let mut out = Vec::new();
    for &lambda in &GRID_LAMBDAS {
        for n in 1..=nmax {
            for r in -1..n as i64 {
                let mu = ExpPolyCharacter::single(Scalar::int(lambda), n, grid_poly(r))?;
                out.push((lambda, n, r, InducedModule::new(mu)));
            }
        }
    }
    Ok(out)
}

fn show(v: &ModuleElement) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn closed_form_grid(suite: &'static str, opts: &SuiteOptions, zero_ell: bool) -> Result<Tally> {
    let mut t = Tally::new(suite);
    for (lambda, n, r, m) in grid_modules(opts.nmax)? {
        let mut memo = InducedMemo::default();
        let n_i = n as i64;
        for s in indices_up_to(n as usize, 3) {
            let Some(l) = s.ell() else { continue };
            if (l == 0) != zero_ell {
                continue;
            }
            let crit = if l > 0 { n_i + r + 1 - l as i64 } else { n_i + r + s.get(0) as i64 };
            for mm in crit.max(n_i)..=crit.max(n_i) + 1 {
                if l == 0 && mm == crit && r < 0 {
                    continue;
                }
                for j in -4..=4 {
                    let cf = m.closed_form_bracket(j, mm as u32, &s, opts.factorial_reading)?;
                    let oracle = m.apply_shifted_memo(&mut memo, j, mm as u32, &ModuleElement::basis(s.clone()))?;
                    t.record(cf == oracle, || {
                        json!({"lambda": lambda, "n": n, "r": r, "s": s, "j": j, "m": mm,
                               "closed_form": show(&cf), "oracle": show(&oracle)})
                    });
                }
            }
        }
    }
    Ok(t)
}

fn size_bound_grid(opts: &SuiteOptions) -> Result<Tally> {
    let mut t = Tally::new("brack-tupleSize");
    for (lambda, n, r, m) in grid_modules(opts.nmax)? {
        let mut memo = InducedMemo::default();
        for s in indices_up_to(n as usize, 3) {
            if s.is_zero() {
                continue;
            }
            let lo = n + s.get(0);
            for mm in lo..=lo + 1 {
                for j in -4..=4 {
                    let w = m.apply_shifted_memo(&mut memo, j, mm, &ModuleElement::basis(s.clone()))?;
                    let ok = w.terms().all(|(i, _)| i.size() < s.size());
                    t.record(ok, || json!({"lambda": lambda, "n": n, "r": r, "s": s, "j": j, "m": mm, "bracket": show(&w)}));
                }
            }
        }
    }
    Ok(t)
}

fn reduce_grid(opts: &SuiteOptions) -> Result<Tally> {
    let mut t = Tally::new("reducedegree");
    for (lambda, n, r, m) in grid_modules(opts.nmax)? {
        if r < 0 || r <= n as i64 - 3 {
            continue;
        }
        for s in indices_up_to(n as usize, 3) {
            if s.is_zero() {
                continue;
            }
            let v = ModuleElement::basis(s.clone());
            let res = m.reduce_to_generator(&v, opts.j_window, s.size() as usize + 3);
            let ok = matches!(&res, Ok(trace) if trace.windows(2).all(|w| w[1].w.max_index() < w[0].w.max_index()));
            t.record(ok, || json!({"lambda": lambda, "n": n, "r": r, "s": s, "error": res.err().map(|e| e.to_string())}));
        }
    }
    Ok(t)
}

fn faulhaber_grid() -> Tally {
    let mut t = Tally::new("faulhaber");
    for k in 0..=10u32 {
        for j in 0..=25i64 {
            let direct: Scalar = (1..=j).map(|i| Scalar::int(i).pow(k as i64).expect("nonzero")).fold(Scalar::int(0), |a, b| a + b);
            t.record(faulhaber_sum(k, j) == direct, || json!({"k": k, "j": j, "part": "i"}));
            let neg: Scalar = (1..=j).map(|i| Scalar::int(-i).pow(k as i64).expect("nonzero")).fold(Scalar::int(0), |a, b| a + b);
            t.record(faulhaber_neg_sum(k, j) == neg, || json!({"k": k, "j": j, "part": "ii"}));
        }
    }
    t
}

fn degreehom_grid(opts: &SuiteOptions) -> Result<Tally> {
    let mut t = Tally::new("degreehom");
    for &lambda in &GRID_LAMBDAS {
        for n in 1..=opts.nmax {
            for r in -1..n as i64 {
                let mu = ExpPolyCharacter::single(Scalar::int(lambda), n, grid_poly(r))?;
                for mm in n..=(n as i64 + r + 2) as u32 {
                    let pm = mu.derived_power(mm)?;
                    let want = (n as i64 + r - mm as i64).max(-1);
                    let mut ok = pm.degree() == want;
                    let im = InducedModule::new(mu.clone());
                    for j in -3..=3 {
                        let g = im.shifted_power(j, mm)?;
                        ok &= mu.eval(&g)? == &pm.eval_int(j) * &Scalar::int(lambda).pow(j)?;
                    }
                    t.record(ok, || json!({"lambda": lambda, "n": n, "r": r, "m": mm, "p_m": pm}));
                }
            }
        }
    }
    Ok(t)
}

fn codim1_grid() -> Result<Tally> {
    let mut t = Tally::new("codim1");
    for c in [Scalar::int(1), Scalar::int(3), Scalar::frac(-1, 2), Scalar::int(-2)] {
        let ok = crate::vir::codim1_closure_check(&c, -6..=6)?;
        t.record(ok, || json!({"c": c}));
    }
    Ok(t)
}

fn omega_grid(opts: &SuiteOptions) -> Result<Tally> {
    let mut t = Tally::new("omega-iso");
    let lambdas = [Scalar::int(1), Scalar::int(2), Scalar::frac(1, 2)];
    let bs = [Scalar::int(0), Scalar::int(2), Scalar::int(-1)];
    for l in &lambdas {
        for b in &bs {
            let spec = crate::induced::OmegaSpec::new(l.clone(), b.clone())?;
            let ok = spec.iso_check(opts.depth.max(1) as u32)?;
            t.record(ok, || json!({"lambda": l, "b": b}));
        }
    }
    Ok(t)
}

fn quotient_grid(opts: &SuiteOptions) -> Result<Tally> {
    let mut t = Tally::new("smalldegree-quotient");
    let cases: [(u32, i64); 6] = [(1, -1), (1, 0), (2, -1), (3, 0), (4, 0), (4, 1)];
    for (n, r) in cases {
        if !opts.small_degree_reading.predicts_reducible(n, r) {
            continue;
        }
        for &lambda in &GRID_LAMBDAS {
            let mu = ExpPolyCharacter::single(Scalar::int(lambda), n, grid_poly(r))?;
            let rep = InducedModule::new(mu).quotient_smalldegree(opts.small_degree_reading, -4..=4)?;
            let degree_ok = match &rep.mu_prime_degree {
                Some(d) => *d == if r < 0 { -1 } else { r + 1 },
                None => n == 1,
            };
            let ok = rep.eigen_relation && rep.slice_invariant && rep.oracle_agrees && rep.partial_sums_agree && degree_ok;
            t.record(ok, || json!({"lambda": lambda, "report": rep}));
        }
    }
    Ok(t)
}

fn muhat_grid(opts: &SuiteOptions) -> Result<Tally> {
    let mut t = Tally::new("muhat-split");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let root_sets: Vec<Vec<(Scalar, u32)>> = vec![
        vec![(Scalar::int(1), 1)],
        vec![(Scalar::int(2), 2)],
        vec![(Scalar::int(1), 1), (Scalar::int(-1), 1)],
        vec![(Scalar::int(1), 2), (Scalar::int(3), 1)],
    ];
    for roots in &root_sets {
        let p: i64 = roots.iter().map(|(_, n)| *n as i64).sum();
        for m in 0..=2i64 {
            let window = (m..=2 * m + p).map(|j| (j, Scalar::frac(rng.gen_range(-9..=9), rng.gen_range(1..=4)))).collect();
            let z = Scalar::int(rng.gen_range(-5..=5));
            let rc = crate::character::RestrictedCharacter::new(m, roots, window, z)?;
            let split = rc.split_muhat();
            let f = LaurentModulus::new(&rc.modulus());
            let mut ok = true;
            for j in m..=2 * m + p {
                let ddot = split.mu_ddot.eval(&f.shifted(j))?;
                let hat = f.hat_pairing(&split.mu_hat, j);
                ok &= &ddot + &hat == rc.value(j)?;
            }
            let cf = rc.closed_forms()?;
            let hat = |j: i64| split.mu_hat.get(&j).cloned().unwrap_or_else(|| Scalar::int(0));
            ok &= cf.mu_hat_2m == hat(2 * m);
            if m >= 1 {
                let a0 = rc.modulus().coeff(0);
                let a0_cubed = &(&a0 * &a0) * &a0;
                ok &= cf.mu_hat_2m_minus_1 == Some(hat(2 * m - 1));
                ok &= cf.whittaker_displayed == Some(&a0_cubed * &hat(2 * m - 1));
            }
            t.record(ok, || json!({"roots": roots, "m": m, "split": split}));
        }
    }
    Ok(t)
}

/// `t^j F` and the pairing `Σ a_i μ̂_{j+i}` with the coefficients of `F`.
struct LaurentModulus {
    a: Poly,
}

impl LaurentModulus {
    fn new(a: &Poly) -> Self {
        LaurentModulus { a: a.clone() }
    }

    fn shifted(&self, j: i64) -> crate::laurent::LaurentPoly {
        crate::laurent::LaurentPoly::from_poly(&self.a).shift(j)
    }

    fn hat_pairing(&self, hat: &std::collections::BTreeMap<i64, Scalar>, j: i64) -> Scalar {
        let mut acc = Scalar::int(0);
        for (i, ai) in self.a.coeffs().iter().enumerate() {
            if let Some(h) = hat.get(&(j + i as i64)) {
                acc += &(ai * h);
            }
        }
        acc
    }
}

fn tensor_map_grid(opts: &SuiteOptions) -> Result<Tally> {
    let mut t = Tally::new("tensor-map");
    let depth = opts.depth as u32;
    for (l1, l2) in [(1, 2), (1, -1)] {
        for (n1, n2) in [(1, 1), (2, 1), (1, 2)] {
            let parts = [
                ExpPolyCharacter::single(Scalar::int(l1), n1, grid_poly(n1 as i64 - 1))?,
                ExpPolyCharacter::single(Scalar::int(l2), n2, grid_poly(n2 as i64 - 2))?,
            ];
            let rep = genf_tensor_map(&parts, depth)?;
            t.record(rep.passed, || json!({"parts": parts, "report": rep}));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let root_sets: Vec<Vec<(Scalar, u32)>> =
        vec![vec![(Scalar::int(1), 1), (Scalar::int(2), 1)], vec![(Scalar::int(-1), 2)]];
    for roots in &root_sets {
        let p: i64 = roots.iter().map(|(_, n)| *n as i64).sum();
        for m in -1..=1i64 {
            let window = (m..=2 * m + p).map(|j| (j, Scalar::frac(rng.gen_range(-9..=9), rng.gen_range(1..=4)))).collect();
            let z = Scalar::int(rng.gen_range(-5..=5));
            let rc = crate::character::RestrictedCharacter::new(m, roots, window, z)?;
            let rep = restricted_tensor_map(&rc, depth)?;
            t.record(rep.passed, || json!({"roots": roots, "m": m, "window": rc.window(), "report": rep}));
        }
    }
    Ok(t)
}
