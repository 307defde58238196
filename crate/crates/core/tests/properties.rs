use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;

use polyvir::binduced::{kac_h, kac_phi, BElement, BInducedModule, BMonomial, TailModuleSpec};
use polyvir::character::{ExpPolyCharacter, RootFactor};
use polyvir::config::CharacterConfig;
use polyvir::induced::indices_up_to;
use polyvir::tensor::iso_decide;
use polyvir::{InducedModule, LaurentPoly, ModuleElement, Poly, Scalar, SparseVec, TensorIndex, TensorSpec, VirElement, VirModule};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=3).prop_map(|(a, b)| Scalar::frac(a, b))
}

fn gaussian() -> impl Strategy<Value = Scalar> {
    (scalar(), scalar()).prop_map(|(re, im)| Scalar::gaussian(re, im))
}

fn laurent(lo: i64, hi: i64, terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((lo..=hi, scalar()), 0..=terms).prop_map(LaurentPoly::from_terms)
}

fn vir(lo: i64, hi: i64, terms: usize) -> impl Strategy<Value = VirElement> {
    (prop::collection::vec((lo..=hi, scalar()), 0..=terms), scalar()).prop_map(|(e, z)| VirElement::from_parts(e, z))
}

fn lambda() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![1i64, 2, -1])
}

fn poly_below(n: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-3i64..=3, 0..=n as usize).prop_map(|c| Poly::from_ints(&c))
}

fn root_factor(lambda: i64, nmax: u32) -> impl Strategy<Value = RootFactor> {
    (1..=nmax).prop_flat_map(move |n| poly_below(n).prop_map(move |p| RootFactor::new(Scalar::int(lambda), n, p)))
}

fn tail() -> impl Strategy<Value = Option<TailModuleSpec>> {
    prop_oneof![
        Just(None),
        (scalar(), scalar()).prop_map(|(h, c)| Some(TailModuleSpec::verma(h, c))),
        scalar().prop_map(|c| Some(TailModuleSpec::mbar(c))),
        (scalar(), scalar()).prop_map(|(a, c)| {
            let psi = BTreeMap::from([(1, Scalar::one()), (2, a)]);
            Some(TailModuleSpec::whittaker(1, psi, c).unwrap())
        }),
    ]
}

fn combination<I: Ord + Clone>(pool: Vec<I>, picks: Vec<(usize, Scalar)>) -> SparseVec<I> {
    SparseVec::from_terms(picks.into_iter().map(|(k, c)| (pool[k % pool.len()].clone(), c)))
}

fn picks(len: usize) -> impl Strategy<Value = Vec<(usize, Scalar)>> {
    prop::collection::vec((0..64usize, scalar()), 1..=len)
}

/// Free monomials `e_{i_1} ⋯ e_{i_k}` with `i < bound`, `k <= 2`.
fn tail_monomials(bound: i64) -> Vec<BMonomial> {
    let mut out = vec![BMonomial::generator()];
    for a in bound - 3..bound {
        out.push(BMonomial::new(vec![a]));
        for b in a..bound {
            out.push(BMonomial::new(vec![a, b]));
        }
    }
    out
}

/// `x(y v) - y(x v) = [x, y] v`.
fn representation_holds<M: VirModule>(m: &M, x: &VirElement, y: &VirElement, v: &SparseVec<M::Index>) -> bool {
    let lhs = m.act(x, &m.act(y, v)).minus(&m.act(y, &m.act(x, v)));
    lhs == m.act(&x.bracket(y), v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lie_bracket_jacobi(f in laurent(-6, 6, 4), g in laurent(-6, 6, 4), h in laurent(-6, 6, 4)) {
        let sum = &(&f.lie_bracket(&g.lie_bracket(&h)) + &g.lie_bracket(&h.lie_bracket(&f))) + &h.lie_bracket(&f.lie_bracket(&g));
        prop_assert!(sum.is_zero());
        prop_assert_eq!(f.lie_bracket(&g), -&g.lie_bracket(&f));
    }

    #[test]
    fn vir_bracket_jacobi(x in vir(-6, 6, 4), y in vir(-6, 6, 4), w in vir(-6, 6, 4)) {
        let sum = &(&x.bracket(&y.bracket(&w)) + &y.bracket(&w.bracket(&x))) + &w.bracket(&x.bracket(&y));
        prop_assert!(sum.is_zero());
        prop_assert_eq!(x.bracket(&y).theta(), x.theta().lie_bracket(&y.theta()));
    }

    #[test]
    fn scalar_field_axioms(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }
    }

    #[test]
    fn induced_representation(
        l in lambda(),
        n in 1u32..=3,
        coeffs in prop::collection::vec(-3i64..=3, 0..=3),
        x in vir(-3, 3, 2),
        y in vir(-3, 3, 2),
        pk in picks(3),
    ) {
        let p = Poly::from_ints(&coeffs[..coeffs.len().min(n as usize)]);
        let m = InducedModule::new(ExpPolyCharacter::single(Scalar::int(l), n, p).unwrap());
        let v: ModuleElement = combination(indices_up_to(n as usize, 3), pk);
        prop_assert!(representation_holds(&m, &x, &y, &v));
    }

    #[test]
    fn tail_representation(t in tail(), x in vir(-3, 3, 2), y in vir(-3, 3, 2), pk in picks(3)) {
        let Some(t) = t else { return Ok(()) };
        let m = BInducedModule::from_tail(&t).unwrap();
        let v: BElement = combination(tail_monomials(m.free_bound()), pk);
        prop_assert!(representation_holds(&m, &x, &y, &v));
    }

    #[test]
    fn tensor_representation(
        a in root_factor(1, 2),
        b in prop::sample::select(vec![2i64, -1]).prop_flat_map(|l| root_factor(l, 2)),
        t in tail(),
        x in vir(-2, 2, 2),
        y in vir(-2, 2, 2),
        pk in picks(3),
    ) {
        let spec = TensorSpec::new(vec![a, b], t).unwrap();
        let m = spec.module().unwrap();
        let monos = m.tail().map_or_else(|| vec![BMonomial::generator()], |t| tail_monomials(t.free_bound()));
        let pool: Vec<TensorIndex> = m
            .indices_up_to(1)
            .into_iter()
            .flat_map(|i| monos.iter().map(move |mono| TensorIndex::new(i.parts.clone(), mono.clone())))
            .collect();
        let v = combination(pool, pk);
        prop_assert!(representation_holds(&m, &x, &y, &v));
    }

    #[test]
    fn ann_bound_is_sound(t in tail(), pk in picks(3)) {
        let Some(t) = t else { return Ok(()) };
        let m = BInducedModule::from_tail(&t).unwrap();
        let v: BElement = combination(tail_monomials(m.free_bound()), pk);
        let l = m.ann_bound(&v).unwrap();
        for j in l..l + 5 {
            prop_assert!(m.act(&VirElement::e(j), &v).is_zero(), "e_{} v != 0 with bound {}", j, l);
        }
    }

    /// The level-2 Gram determinant of a Verma module is `2h (16h^2 + 2hc - 10h + c)`.
    #[test]
    fn kac_level_two(h in scalar(), c in scalar()) {
        let gram = &(&(&Scalar::int(16) * &(&h * &h)) + &(&Scalar::int(2) * &(&h * &c))) - &(&Scalar::int(10) * &h);
        prop_assert_eq!(&gram + &c, &Scalar::int(16) * &kac_phi(1, 2, &c, &h));
        prop_assert!(kac_h(1, 1, &c).sum.is_zero() && kac_h(1, 1, &c).product.is_zero());
    }

    #[test]
    fn serde_round_trips(a in gaussian(), f in laurent(-6, 6, 4), x in vir(-6, 6, 4), p in poly_below(4)) {
        let a2: Scalar = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(a2, a);
        let f2: LaurentPoly = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(f2, f);
        let x2: VirElement = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        prop_assert_eq!(x2, x);
        let p2: Poly = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(p2, p);
    }

    #[test]
    fn config_and_vector_round_trips(a in root_factor(1, 3), b in root_factor(-1, 3), pk in picks(4)) {
        let cfg = CharacterConfig { field: Default::default(), factors: vec![a, b], restriction: None };
        let again: CharacterConfig = serde_json::from_value(serde_json::to_value(&cfg).unwrap()).unwrap();
        prop_assert_eq!(&again, &cfg);
        let m = TensorSpec::new(cfg.factors.clone(), None).unwrap().module().unwrap();
        let v = combination(m.indices_up_to(3), pk);
        let v2: SparseVec<TensorIndex> = serde_json::from_value(serde_json::to_value(&v).unwrap()).unwrap();
        prop_assert_eq!(v2, v);
    }

    #[test]
    fn iso_decide_symmetries(
        a in root_factor(1, 2),
        b in root_factor(2, 2),
        c in root_factor(-1, 2),
        t in tail(),
        swap in 0usize..6,
        bump in 1i64..=3,
    ) {
        let factors = vec![a, b, c];
        let spec = TensorSpec::new(factors.clone(), t.clone()).unwrap();
        let mut perm = factors.clone();
        perm.rotate_left(swap % 3);
        if swap >= 3 {
            perm.swap(0, 1);
        }
        let permuted = TensorSpec::new(perm, t.clone()).unwrap();
        prop_assert!(iso_decide(&spec, &spec).isomorphic);
        prop_assert!(iso_decide(&spec, &permuted).isomorphic);
        prop_assert!(iso_decide(&permuted, &spec).isomorphic);

        let mut changed = factors;
        let n = changed[0].n;
        changed[0].p = &changed[0].p + &Poly::from_ints(&[bump]);
        if changed[0].p.degree() >= n as i64 {
            return Ok(());
        }
        let other = TensorSpec::new(changed, t).unwrap();
        prop_assert!(!iso_decide(&spec, &other).isomorphic);
        prop_assert!(!iso_decide(&other, &spec).isomorphic);
    }
}
