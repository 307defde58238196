//! Sparse vectors over a basis and the interface shared by module engines.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Scalar;
use crate::vir::VirElement;

/// A finite linear combination of basis indices, with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec<I: Ord> {
    terms: BTreeMap<I, Scalar>,
}

impl<I: Ord + Clone> Default for SparseVec<I> {
    fn default() -> Self {
        SparseVec { terms: BTreeMap::new() }
    }
}

impl<I: Ord + Clone> SparseVec<I> {
    pub fn zero() -> Self {
        SparseVec::default()
    }

    pub fn basis(i: I) -> Self {
        let mut v = SparseVec::zero();
        v.add_term(i, &Scalar::from(1));
        v
    }

    pub fn from_terms<T: IntoIterator<Item = (I, Scalar)>>(it: T) -> Self {
        let mut v = SparseVec::zero();
        for (i, c) in it {
            v.add_term(i, &c);
        }
        v
    }

    pub fn add_term(&mut self, i: I, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&i) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&i);
                }
            }
            None => {
                self.terms.insert(i, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec<I>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, v) in &other.terms {
            self.add_term(i.clone(), &(v * c));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&I, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: &I) -> Scalar {
        self.terms.get(i).cloned().unwrap_or_else(Scalar::zero)
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

    /// The largest index with nonzero coefficient.
    pub fn max_index(&self) -> Option<&I> {
        self.terms.keys().next_back()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = SparseVec::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::from(1));
        out
    }

    pub fn minus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::from(-1));
        out
    }

    /// Applies a linear map given on basis vectors.
    pub fn map_linear<J: Ord + Clone>(&self, mut f: impl FnMut(&I) -> SparseVec<J>) -> SparseVec<J> {
        let mut out = SparseVec::zero();
        for (i, c) in &self.terms {
            out.add_scaled(&f(i), c);
        }
        out
    }
}

impl<I: Ord + Debug> Debug for SparseVec<I> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct Term<I> {
    s: I,
    c: Scalar,
}

#[derive(Serialize, Deserialize)]
struct Terms<I> {
    terms: Vec<Term<I>>,
}

impl<I: Ord + Clone + Serialize> Serialize for SparseVec<I> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        Terms { terms: self.terms.iter().map(|(s, c)| Term { s: s.clone(), c: c.clone() }).collect() }
            .serialize(ser)
    }
}

impl<'de, I: Ord + Clone + DeserializeOwned> Deserialize<'de> for SparseVec<I> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let t = Terms::<I>::deserialize(de)?;
        Ok(SparseVec::from_terms(t.terms.into_iter().map(|t| (t.s, t.c))))
    }
}

/// A Virasoro module with a distinguished cyclic generator and an explicit basis.
///
/// `Memo` is per-computation scratch space for the straightening recursion;
/// engines themselves stay immutable.
pub trait VirModule {
    type Index: Ord + Clone + Hash + Debug;
    type Memo: Default;

    fn generator(&self) -> SparseVec<Self::Index>;

    fn act_memo(
        &self,
        memo: &mut Self::Memo,
        x: &VirElement,
        v: &SparseVec<Self::Index>,
    ) -> SparseVec<Self::Index>;

    fn act(&self, x: &VirElement, v: &SparseVec<Self::Index>) -> SparseVec<Self::Index> {
        self.act_memo(&mut Self::Memo::default(), x, v)
    }
}
