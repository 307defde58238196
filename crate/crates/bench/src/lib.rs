//! Shared fixtures for the benchmarks.

use polyvir::character::{ExpPolyCharacter, RootFactor};
use polyvir::{InducedModule, MultiIndex, Poly, Scalar, SparseVec, TensorElement, TensorIndex, TensorModule, TensorSpec};

/// `V_μ` for `μ = λ^j p(j)` on `(t - λ)^n`.
pub fn induced(lambda: i64, n: u32, p: &[i64]) -> InducedModule {
    InducedModule::new(ExpPolyCharacter::single(Scalar::int(lambda), n, Poly::from_ints(p)).expect("valid character"))
}

/// Two factors at `t = 1` and `t = 2` with `n = 2`, degree-one characters.
pub fn two_factor_tensor() -> TensorModule {
    TensorSpec::new(
        vec![
            RootFactor::new(Scalar::int(1), 2, Poly::from_ints(&[1, 1])),
            RootFactor::new(Scalar::int(2), 2, Poly::from_ints(&[-1, 2])),
        ],
        None,
    )
    .and_then(|s| s.module())
    .expect("valid spec")
}

/// `f^{(1, 1)} v ⊗ f^{(0, 1)} v + f^{(2, 0)} v ⊗ v`.
pub fn tensor_start() -> TensorElement {
    let ix = |a: [u32; 2], b: [u32; 2]| TensorIndex::new(vec![MultiIndex::new(a.to_vec()), MultiIndex::new(b.to_vec())], Default::default());
    SparseVec::from_terms([(ix([1, 1], [0, 1]), Scalar::int(1)), (ix([2, 0], [0, 0]), Scalar::int(3))])
}

pub fn two_root_character() -> Vec<ExpPolyCharacter> {
    vec![
        ExpPolyCharacter::single(Scalar::int(1), 1, Poly::from_ints(&[2])).expect("valid"),
        ExpPolyCharacter::single(Scalar::int(2), 1, Poly::from_ints(&[-1])).expect("valid"),
    ]
}
