//! Differential operators in `z, z̄` with 2×2 spin structure.
//!
//! A [`ScalarOp`] is a sum of `coefficient × word` where a word is a product
//! of the primitives `∂_z`, `∂_z̄`, `z·` and `z̄·`. The rightmost primitive acts
//! first. An [`OperatorExpr`] is a 2×2 matrix of scalar operators, i.e. a sum
//! of elementary spin matrices tensored with words.
//!
//! The momenta `Π_z = −iħ∂_z`, `Π_z̄ = −iħ∂_z̄` are not primitives; see
//! [`ScalarOp::pi_z`].

use super::poly::{SpinorFunction, WeightedPolynomial};
use super::scalar::Scalar;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Primitive {
    Dz,
    Dzbar,
    Z,
    Zbar,
}

impl Primitive {
    fn apply<S: Scalar>(self, p: &WeightedPolynomial<S>) -> WeightedPolynomial<S> {
        match self {
            Primitive::Dz => p.d_z(),
            Primitive::Dzbar => p.d_zbar(),
            Primitive::Z => p.mul_z(),
            Primitive::Zbar => p.mul_zbar(),
        }
    }

    /// Image under `z ↔ z̄`.
    fn swapped(self) -> Self {
        match self {
            Primitive::Dz => Primitive::Dzbar,
            Primitive::Dzbar => Primitive::Dz,
            Primitive::Z => Primitive::Zbar,
            Primitive::Zbar => Primitive::Z,
        }
    }
}

/// Normal-ordered monomial `z^a z̄^b ∂_z^c ∂_z̄^d`.
pub type NormalKey = (u32, u32, u32, u32);

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarOp<S> {
    terms: Vec<(S, Vec<Primitive>)>,
}

impl<S: Scalar> ScalarOp<S> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn scalar(c: S) -> Self {
        Self::word(c, Vec::new())
    }

    pub fn identity() -> Self {
        Self::scalar(S::one())
    }

    pub fn word(c: S, word: Vec<Primitive>) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(c, word)] };
        Self { terms }
    }

    pub fn prim(p: Primitive) -> Self {
        Self::word(S::one(), vec![p])
    }

    /// `Π_z = −iħ ∂_z`.
    pub fn pi_z(hbar: S) -> Self {
        Self::word(-(S::imag_unit() * hbar), vec![Primitive::Dz])
    }

    /// `Π_z̄ = −iħ ∂_z̄`.
    pub fn pi_zbar(hbar: S) -> Self {
        Self::word(-(S::imag_unit() * hbar), vec![Primitive::Dzbar])
    }

    pub fn terms(&self) -> &[(S, Vec<Primitive>)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn apply(&self, p: &WeightedPolynomial<S>) -> WeightedPolynomial<S> {
        let mut out = WeightedPolynomial::zero(p.envelope().clone());
        for (c, word) in &self.terms {
            let mut q = p.clone();
            for prim in word.iter().rev() {
                q = prim.apply(&q);
            }
            out = &out + &q.scale(c);
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, w)| (k.clone() * c.clone(), w.clone()))
                .filter(|(k, _)| !k.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(-S::one())))
    }

    /// Operator product `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, wa) in &self.terms {
            for (b, wb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                let c = a.clone() * b.clone();
                if !c.is_zero() {
                    terms.push((c, w));
                }
            }
        }
        Self { terms }
    }

    /// Flat-measure adjoint: `∂_z† = −∂_z̄`, `z† = z̄`, words reversed,
    /// coefficients conjugated.
    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, w)| {
                let mut coeff = c.conj();
                let word: Vec<Primitive> = w
                    .iter()
                    .rev()
                    .map(|p| {
                        if matches!(p, Primitive::Dz | Primitive::Dzbar) {
                            coeff = -coeff.clone();
                        }
                        p.swapped()
                    })
                    .collect();
                (coeff, word)
            })
            .collect();
        Self { terms }
    }

    /// Conjugation by the antilinear map `f(z, z̄) ↦ f̄` (coefficients
    /// conjugated, `z ↔ z̄`).
    pub fn complex_conjugate(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| (c.conj(), w.iter().map(|p| p.swapped()).collect()))
                .collect(),
        }
    }

    /// Normal-ordered form `Σ c · z^a z̄^b ∂_z^c ∂_z̄^d`, obtained with
    /// `∂_z z = z ∂_z + 1` and `∂_z̄ z̄ = z̄ ∂_z̄ + 1`.
    pub fn normal_form(&self) -> BTreeMap<NormalKey, S> {
        let mut total: BTreeMap<NormalKey, S> = BTreeMap::new();
        for (c, word) in &self.terms {
            let mut acc: BTreeMap<NormalKey, S> = BTreeMap::new();
            acc.insert((0, 0, 0, 0), c.clone());
            for prim in word {
                acc = right_multiply(&acc, *prim);
            }
            for (k, v) in acc {
                accumulate(&mut total, k, v);
            }
        }
        total
    }

    /// Rebuilds the operator from its normal form, dropping cancelled terms.
    pub fn normalized(&self) -> Self {
        let terms = self
            .normal_form()
            .into_iter()
            .map(|((a, b, c, d), coeff)| {
                let mut w = Vec::new();
                w.extend(std::iter::repeat_n(Primitive::Z, a as usize));
                w.extend(std::iter::repeat_n(Primitive::Zbar, b as usize));
                w.extend(std::iter::repeat_n(Primitive::Dz, c as usize));
                w.extend(std::iter::repeat_n(Primitive::Dzbar, d as usize));
                (coeff, w)
            })
            .collect();
        Self { terms }
    }

    /// Largest normal-form coefficient magnitude of `self − other`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other)
            .normal_form()
            .values()
            .map(S::magnitude)
            .fold(0.0, f64::max)
    }
}

fn accumulate<S: Scalar>(map: &mut BTreeMap<NormalKey, S>, key: NormalKey, value: S) {
    if value.is_zero() {
        return;
    }
    let sum = match map.remove(&key) {
        Some(old) => old + value,
        None => value,
    };
    if !sum.is_zero() {
        map.insert(key, sum);
    }
}

fn right_multiply<S: Scalar>(acc: &BTreeMap<NormalKey, S>, prim: Primitive) -> BTreeMap<NormalKey, S> {
    let mut out = BTreeMap::new();
    for (&(a, b, c, d), v) in acc {
        match prim {
            Primitive::Dz => accumulate(&mut out, (a, b, c + 1, d), v.clone()),
            Primitive::Dzbar => accumulate(&mut out, (a, b, c, d + 1), v.clone()),
            Primitive::Z => {
                accumulate(&mut out, (a + 1, b, c, d), v.clone());
                if c > 0 {
                    accumulate(&mut out, (a, b, c - 1, d), v.clone() * S::from_i64(c as i64));
                }
            }
            Primitive::Zbar => {
                accumulate(&mut out, (a, b + 1, c, d), v.clone());
                if d > 0 {
                    accumulate(&mut out, (a, b, c, d - 1), v.clone() * S::from_i64(d as i64));
                }
            }
        }
    }
    out
}

/// 2×2 matrix of complex scalars.
pub type SpinMatrix<S> = [[S; 2]; 2];

pub fn spin_identity<S: Scalar>() -> SpinMatrix<S> {
    [[S::one(), S::zero()], [S::zero(), S::one()]]
}

pub fn sigma_x<S: Scalar>() -> SpinMatrix<S> {
    [[S::zero(), S::one()], [S::one(), S::zero()]]
}

pub fn sigma_y<S: Scalar>() -> SpinMatrix<S> {
    let i = S::imag_unit();
    [[S::zero(), -i.clone()], [i, S::zero()]]
}

pub fn sigma_z<S: Scalar>() -> SpinMatrix<S> {
    [[S::one(), S::zero()], [S::zero(), -S::one()]]
}

pub fn spin_mul<S: Scalar>(a: &SpinMatrix<S>, b: &SpinMatrix<S>) -> SpinMatrix<S> {
    let entry = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

pub fn spin_scale<S: Scalar>(a: &SpinMatrix<S>, c: &S) -> SpinMatrix<S> {
    [
        [a[0][0].clone() * c.clone(), a[0][1].clone() * c.clone()],
        [a[1][0].clone() * c.clone(), a[1][1].clone() * c.clone()],
    ]
}

pub fn spin_conj<S: Scalar>(a: &SpinMatrix<S>) -> SpinMatrix<S> {
    [[a[0][0].conj(), a[0][1].conj()], [a[1][0].conj(), a[1][1].conj()]]
}

pub fn spin_inverse<S: Scalar>(a: &SpinMatrix<S>) -> SpinMatrix<S> {
    let det = a[0][0].clone() * a[1][1].clone() - a[0][1].clone() * a[1][0].clone();
    [
        [a[1][1].clone() / det.clone(), -(a[0][1].clone() / det.clone())],
        [-(a[1][0].clone() / det.clone()), a[0][0].clone() / det],
    ]
}

/// Spin-matrix-valued differential operator acting on [`SpinorFunction`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorExpr<S> {
    blocks: [[ScalarOp<S>; 2]; 2],
}

impl<S: Scalar> OperatorExpr<S> {
    pub fn zero() -> Self {
        Self::from_blocks([
            [ScalarOp::zero(), ScalarOp::zero()],
            [ScalarOp::zero(), ScalarOp::zero()],
        ])
    }

    pub fn identity() -> Self {
        Self::kron(&spin_identity(), &ScalarOp::identity())
    }

    pub fn from_blocks(blocks: [[ScalarOp<S>; 2]; 2]) -> Self {
        Self { blocks }
    }

    /// `[[0, upper_right], [lower_left, 0]]`.
    pub fn off_diagonal(upper_right: ScalarOp<S>, lower_left: ScalarOp<S>) -> Self {
        Self::from_blocks([[ScalarOp::zero(), upper_right], [lower_left, ScalarOp::zero()]])
    }

    /// `spin ⊗ op`.
    pub fn kron(spin: &SpinMatrix<S>, op: &ScalarOp<S>) -> Self {
        let b = |i: usize, j: usize| op.scale(&spin[i][j]);
        Self::from_blocks([[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]])
    }

    pub fn block(&self, i: usize, j: usize) -> &ScalarOp<S> {
        &self.blocks[i][j]
    }

    pub fn apply(&self, s: &SpinorFunction<S>) -> SpinorFunction<S> {
        let row = |i: usize| &self.blocks[i][0].apply(&s.upper) + &self.blocks[i][1].apply(&s.lower);
        SpinorFunction {
            upper: row(0),
            lower: row(1),
            energy: None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|op| op.scale(c))
    }

    pub fn compose(&self, other: &Self) -> Self {
        let entry = |i: usize, j: usize| {
            self.blocks[i][0]
                .compose(&other.blocks[0][j])
                .add(&self.blocks[i][1].compose(&other.blocks[1][j]))
        };
        Self::from_blocks([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// Adjoint under the flat measure: spin part conjugate-transposed, each
    /// block replaced by the adjoint of its transpose partner.
    pub fn formal_adjoint(&self) -> Self {
        let b = |i: usize, j: usize| self.blocks[j][i].adjoint();
        Self::from_blocks([[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]])
    }

    /// `M · self · M⁻¹` for a constant spin matrix `M`.
    pub fn spin_conjugated(&self, m: &SpinMatrix<S>) -> Self {
        let left = Self::kron(m, &ScalarOp::identity());
        let right = Self::kron(&spin_inverse(m), &ScalarOp::identity());
        left.compose(self).compose(&right).normalized()
    }

    /// Entry-wise complex conjugation with `z ↔ z̄`.
    pub fn complex_conjugate(&self) -> Self {
        self.map(ScalarOp::complex_conjugate)
    }

    pub fn normalized(&self) -> Self {
        self.map(ScalarOp::normalized)
    }

    /// Largest normal-form coefficient magnitude of `self − other`; zero iff
    /// the two expressions denote the same operator.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max(self.blocks[i][j].distance(&other.blocks[i][j]));
            }
        }
        worst
    }

    fn map(&self, f: impl Fn(&ScalarOp<S>) -> ScalarOp<S>) -> Self {
        Self::from_blocks([
            [f(&self.blocks[0][0]), f(&self.blocks[0][1])],
            [f(&self.blocks[1][0]), f(&self.blocks[1][1])],
        ])
    }

    fn zip(&self, other: &Self, f: impl Fn(&ScalarOp<S>, &ScalarOp<S>) -> ScalarOp<S>) -> Self {
        let b = |i: usize, j: usize| f(&self.blocks[i][j], &other.blocks[i][j]);
        Self::from_blocks([[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z() -> ScalarOp<Complex64> {
        ScalarOp::prim(Primitive::Z)
    }
    fn zbar() -> ScalarOp<Complex64> {
        ScalarOp::prim(Primitive::Zbar)
    }

    #[test]
    fn multiply_by_z() {
        let p = WeightedPolynomial::monomial(2, 0, c(1.0, 0.0), c(-0.5, 0.0));
        assert_eq!(z().apply(&p), WeightedPolynomial::monomial(3, 0, c(1.0, 0.0), c(-0.5, 0.0)));
    }

    #[test]
    fn normal_ordering_uses_canonical_commutator() {
        let dz = ScalarOp::<Complex64>::prim(Primitive::Dz);
        let nf = dz.compose(&z()).normal_form();
        assert_eq!(nf.get(&(1, 0, 1, 0)), Some(&c(1.0, 0.0)));
        assert_eq!(nf.get(&(0, 0, 0, 0)), Some(&c(1.0, 0.0)));
        assert_eq!(nf.len(), 2);
        // ∂_z and z̄ commute
        assert_eq!(dz.compose(&zbar()).distance(&zbar().compose(&dz)), 0.0);
    }

    #[test]
    fn adjoint_of_momentum() {
        let hbar = c(1.0, 0.0);
        let pz = ScalarOp::pi_z(hbar);
        assert_eq!(pz.adjoint().distance(&ScalarOp::pi_zbar(hbar)), 0.0);
        assert_eq!(pz.adjoint().adjoint().distance(&pz), 0.0);
    }

    #[test]
    fn spin_conjugation_of_sigma_x() {
        let op = OperatorExpr::kron(&sigma_x(), &z());
        let conj = op.spin_conjugated(&sigma_z());
        let expected = OperatorExpr::kron(&sigma_x(), &z().scale(&c(-1.0, 0.0)));
        assert_eq!(conj.distance(&expected), 0.0);
    }

    fn arb_poly() -> impl Strategy<Value = WeightedPolynomial<Complex64>> {
        (
            -1.0f64..1.0,
            proptest::collection::vec(((0u32..5, 0u32..5), (-1f64..1.0, -1f64..1.0)), 1..10),
        )
            .prop_map(|(d, terms)| {
                WeightedPolynomial::from_terms(terms.into_iter().map(|(k, (re, im))| (k, c(re, im))), c(d, 0.0))
            })
    }

    fn arb_word() -> impl Strategy<Value = Vec<Primitive>> {
        proptest::collection::vec(
            prop_oneof![
                Just(Primitive::Dz),
                Just(Primitive::Dzbar),
                Just(Primitive::Z),
                Just(Primitive::Zbar)
            ],
            0..5,
        )
    }

    proptest! {
        #[test]
        fn normalization_preserves_action(w in arb_word(), p in arb_poly()) {
            let op = ScalarOp::word(c(0.7, -0.2), w);
            let a = op.apply(&p);
            let b = op.normalized().apply(&p);
            prop_assert!((&a - &b).max_abs() <= 1e-10 * (1.0 + a.max_abs()));
        }

        #[test]
        fn application_is_linear(w1 in arb_word(), w2 in arb_word(), p in arb_poly(),
                                 a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let x = ScalarOp::word(c(1.0, 0.0), w1);
            let y = ScalarOp::word(c(1.0, 0.0), w2);
            let (ca, cb) = (c(a, 0.3), c(b, -0.1));
            let combined = x.scale(&ca).add(&y.scale(&cb)).apply(&p);
            let separate = &x.apply(&p).scale(&ca) + &y.apply(&p).scale(&cb);
            prop_assert!((&combined - &separate).max_abs() <= 1e-10 * (1.0 + combined.max_abs()));
            prop_assert_eq!(combined.envelope(), p.envelope());
        }

        #[test]
        fn adjoint_is_involution(w in arb_word(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let op = ScalarOp::word(c(re, im), w);
            prop_assert!(op.adjoint().adjoint().distance(&op) == 0.0);
        }
    }
}
