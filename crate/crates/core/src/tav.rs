//! Tropical abelian varieties of rank 1 and 2 and their morphisms.
//!
//! A real torus with integral structure is stored as the matrix `P` of its
//! pairing between fixed bases of `Λ` and `Λ'`. A polarization `ζ: Λ' → Λ`
//! is an integer matrix `Z` whose Gram matrix `Zᵀ P` is symmetric positive
//! definite. A morphism `f` is the pair `f^#: Λ₂ → Λ₁` (`msharp`) and
//! `f_#: Λ'₁ → Λ'₂` (`mflat`).

use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{inv2, snf2, to_integer, to_rational, IntMatrix, Integer, RatMatrix};

/// `Λ`, `Λ'` and the pairing between them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralTorus {
    pairing: RatMatrix,
}

impl IntegralTorus {
    pub fn new(pairing: RatMatrix) -> Result<Self> {
        if !pairing.is_square() {
            return Err(Error::UnsupportedShape { rows: pairing.rows(), cols: pairing.cols() });
        }
        if !(1..=2).contains(&pairing.rows()) {
            return Err(Error::UnsupportedRank(pairing.rows()));
        }
        if pairing.det().is_zero() {
            return Err(Error::DegeneratePairing);
        }
        Ok(IntegralTorus { pairing })
    }

    pub fn rank(&self) -> usize {
        self.pairing.rows()
    }

    pub fn pairing(&self) -> &RatMatrix {
        &self.pairing
    }

    /// Swaps the roles of `Λ` and `Λ'`.
    pub fn dual(&self) -> IntegralTorus {
        IntegralTorus { pairing: self.pairing.transpose() }
    }

    /// `Zᵀ P`, the bilinear form `[ζ(·), ·]`.
    pub fn gram(&self, z: &IntMatrix) -> RatMatrix {
        &to_rational(z).transpose() * &self.pairing
    }

    pub fn is_polarization(&self, z: &IntMatrix) -> bool {
        z.rows() == self.rank() && z.cols() == self.rank() && is_positive_definite(&self.gram(z))
    }
}

/// Symmetric with positive leading principal minors.
pub fn is_positive_definite(g: &RatMatrix) -> bool {
    if !g.is_symmetric() {
        return false;
    }
    (1..=g.rows()).all(|k| {
        let minor = RatMatrix::from_fn(k, k, |r, c| g[(r, c)].clone());
        minor.det().is_positive()
    })
}

/// An integral torus with a polarization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tav {
    torus: IntegralTorus,
    polarization: IntMatrix,
}

impl Tav {
    pub fn new(torus: IntegralTorus, polarization: IntMatrix) -> Result<Self> {
        if polarization.rows() != torus.rank() || polarization.cols() != torus.rank() {
            return Err(Error::UnsupportedShape {
                rows: polarization.rows(),
                cols: polarization.cols(),
            });
        }
        let g = torus.gram(&polarization);
        if !g.is_symmetric() {
            return Err(Error::NotPolarization("Gram matrix is not symmetric"));
        }
        if !is_positive_definite(&g) {
            return Err(Error::NotPolarization("Gram matrix is not positive definite"));
        }
        Ok(Tav { torus, polarization })
    }

    /// A circle of length `len` with its principal polarization.
    pub fn circle(len: crate::exact::Rational) -> Result<Self> {
        Tav::new(IntegralTorus::new(RatMatrix::m1(len))?, IntMatrix::identity(1))
    }

    pub fn torus(&self) -> &IntegralTorus {
        &self.torus
    }

    pub fn rank(&self) -> usize {
        self.torus.rank()
    }

    pub fn pairing(&self) -> &RatMatrix {
        self.torus.pairing()
    }

    pub fn polarization(&self) -> &IntMatrix {
        &self.polarization
    }

    pub fn gram(&self) -> RatMatrix {
        self.torus.gram(&self.polarization)
    }

    pub fn is_principal(&self) -> bool {
        polarization_type(&self.polarization).is_ok_and(|t| t.iter().all(One::is_one))
    }
}

/// Product of two rank-1 tavs with the componentwise polarization.
pub fn direct_sum(t1: &Tav, t2: &Tav) -> Result<Tav> {
    for t in [t1, t2] {
        if t.rank() != 1 {
            return Err(Error::UnsupportedRank(t.rank()));
        }
    }
    let pairing = RatMatrix::diag(&[t1.pairing()[(0, 0)].clone(), t2.pairing()[(0, 0)].clone()]);
    let z = IntMatrix::diag(&[t1.polarization()[(0, 0)].clone(), t2.polarization()[(0, 0)].clone()]);
    Tav::new(IntegralTorus::new(pairing)?, z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MorphismClass {
    pub surjective: bool,
    pub finite: bool,
    pub injective: bool,
    pub isogeny: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TavMorphism {
    source: IntegralTorus,
    target: IntegralTorus,
    msharp: IntMatrix,
    mflat: IntMatrix,
}

impl TavMorphism {
    /// Checks shapes and `msharpᵀ P₁ = P₂ mflat`.
    pub fn new(
        source: IntegralTorus,
        target: IntegralTorus,
        msharp: IntMatrix,
        mflat: IntMatrix,
    ) -> Result<Self> {
        let (r1, r2) = (source.rank(), target.rank());
        if msharp.rows() != r1 || msharp.cols() != r2 {
            return Err(Error::UnsupportedShape { rows: msharp.rows(), cols: msharp.cols() });
        }
        if mflat.rows() != r2 || mflat.cols() != r1 {
            return Err(Error::UnsupportedShape { rows: mflat.rows(), cols: mflat.cols() });
        }
        let lhs = &to_rational(&msharp).transpose() * source.pairing();
        let rhs = target.pairing() * &to_rational(&mflat);
        if lhs != rhs {
            return Err(Error::IncompatibleMorphism);
        }
        Ok(TavMorphism { source, target, msharp, mflat })
    }

    pub fn identity(t: &IntegralTorus) -> Self {
        let id = IntMatrix::identity(t.rank());
        TavMorphism { source: t.clone(), target: t.clone(), msharp: id.clone(), mflat: id }
    }

    /// Multiplication by `n`.
    pub fn multiplication(t: &IntegralTorus, n: &Integer) -> Self {
        let m = IntMatrix::identity(t.rank()).scale(n);
        TavMorphism { source: t.clone(), target: t.clone(), msharp: m.clone(), mflat: m }
    }

    pub fn source(&self) -> &IntegralTorus {
        &self.source
    }

    pub fn target(&self) -> &IntegralTorus {
        &self.target
    }

    pub fn msharp(&self) -> &IntMatrix {
        &self.msharp
    }

    pub fn mflat(&self) -> &IntMatrix {
        &self.mflat
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &TavMorphism) -> Result<TavMorphism> {
        if self.target != then.source {
            return Err(Error::IncompatibleMorphism);
        }
        TavMorphism::new(
            self.source.clone(),
            then.target.clone(),
            &self.msharp * &then.msharp,
            &then.mflat * &self.mflat,
        )
    }

    /// The dual morphism `Σ̌₂ → Σ̌₁` given by the pair `(f_#, f^#)`.
    pub fn dual(&self) -> TavMorphism {
        TavMorphism {
            source: self.target.dual(),
            target: self.source.dual(),
            msharp: self.mflat.clone(),
            mflat: self.msharp.clone(),
        }
    }

    pub fn classify(&self) -> MorphismClass {
        let (r1, r2) = (self.source.rank(), self.target.rank());
        let surjective = self.msharp.small_rank() == r2;
        let finite = self.mflat.small_rank() == r1;
        let injective = finite && maximal_minor_gcd(&self.mflat).is_one();
        MorphismClass { surjective, finite, injective, isogeny: surjective && finite }
    }
}

/// gcd of the `cols × cols` minors of a matrix with at most two columns.
fn maximal_minor_gcd(m: &IntMatrix) -> Integer {
    match m.cols() {
        1 => m.entries().fold(Integer::zero(), |g, x| g.gcd(x)),
        2 if m.rows() == 2 => m.det().abs(),
        _ => Integer::zero(),
    }
}

/// `f^* ζ₂ = f^# ∘ ζ₂ ∘ f_#`.
pub fn pullback_polarization(f: &TavMorphism, z2: &IntMatrix) -> Result<IntMatrix> {
    if !f.classify().isogeny {
        return Err(Error::NotIsogeny);
    }
    if !f.target.is_polarization(z2) {
        return Err(Error::NotPolarization("not a polarization on the target"));
    }
    let z1 = &(&f.msharp * z2) * &f.mflat;
    if !f.source.is_polarization(&z1) {
        return Err(Error::InternalInconsistency("pullback is not a polarization"));
    }
    Ok(z1)
}

/// Invariant factors of `z`.
pub fn polarization_type(z: &IntMatrix) -> Result<Vec<Integer>> {
    if !z.is_square() {
        return Err(Error::UnsupportedShape { rows: z.rows(), cols: z.cols() });
    }
    if z.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(snf2(z)?.invariant_factors())
}

/// Outcome of deciding whether `ζ₁` descends along an isogeny.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inducement {
    /// The unique `ζ₂` with `f^* ζ₂ = ζ₁`.
    Induced(IntMatrix),
    /// `M = A·B⁻¹` is not integral.
    NotInducible(RatMatrix),
}

impl Inducement {
    pub fn induced(&self) -> Option<&IntMatrix> {
        match self {
            Inducement::Induced(m) => Some(m),
            Inducement::NotInducible(_) => None,
        }
    }
}

/// Decides whether `z1` is the pullback of a polarization on the target.
pub fn induce_polarization(f: &TavMorphism, z1: &IntMatrix) -> Result<Inducement> {
    let id = IntMatrix::identity(f.target.rank());
    induce_polarization_in_basis(f, z1, &id)
}

/// As [`induce_polarization`], with `Λ'₂` written in the basis given by the
/// columns of the unimodular `basis`. An induced `ζ₂` is returned in that basis.
pub fn induce_polarization_in_basis(
    f: &TavMorphism,
    z1: &IntMatrix,
    basis: &IntMatrix,
) -> Result<Inducement> {
    if !f.classify().isogeny {
        return Err(Error::NotIsogeny);
    }
    if !f.source.is_polarization(z1) {
        return Err(Error::NotPolarization("not a polarization on the source"));
    }
    let basis_r = to_rational(basis);
    let basis_inv = inv2(&basis_r)?;
    if to_integer(&basis_inv).is_none() {
        return Err(Error::NotIsogeny);
    }
    // A: coordinates of im(ζ₁) in the basis of im(f^#) induced by f^#.
    let a = &inv2(&to_rational(&f.msharp))? * &to_rational(z1);
    if to_integer(&a).is_none() {
        return Err(Error::ImageConditionViolated);
    }
    // B: inclusion of im(f_#) in Λ'₂.
    let b = &basis_inv * &to_rational(&f.mflat);
    let m = &a * &inv2(&b)?;
    let Some(z2) = to_integer(&m) else {
        return Ok(Inducement::NotInducible(m));
    };
    let z2_std = to_integer(&(&m * &basis_inv))
        .ok_or(Error::InternalInconsistency("basis change broke integrality"))?;
    if &(&f.msharp * &z2_std) * &f.mflat != *z1 {
        return Err(Error::InternalInconsistency("induced polarization does not pull back"));
    }
    if !f.target.is_polarization(&z2_std) {
        return Err(Error::InternalInconsistency("induced form is not positive definite"));
    }
    Ok(Inducement::Induced(z2))
}

/// The adjoint `f̃: Σ₂ → Σ₁` of `f` for principal `z1`, `z2`.
pub fn adjoint(f: &TavMorphism, z1: &IntMatrix, z2: &IntMatrix) -> Result<TavMorphism> {
    for z in [z1, z2] {
        let t = polarization_type(z)?;
        if !t.iter().all(One::is_one) {
            return Err(Error::NotPrincipal(t));
        }
    }
    Tav::new(f.source.clone(), z1.clone())?;
    Tav::new(f.target.clone(), z2.clone())?;
    let z1_inv = inv2(&to_rational(z1))?;
    let sharp = &(&to_rational(&(z2 * &f.mflat)) * &z1_inv);
    let flat = &(&z1_inv * &to_rational(&(&f.msharp * z2)));
    let (Some(sharp), Some(flat)) = (to_integer(sharp), to_integer(flat)) else {
        return Err(Error::NonIntegralAdjoint);
    };
    TavMorphism::new(f.target.clone(), f.source.clone(), sharp, flat)
        .map_err(|_| Error::InternalInconsistency("adjoint violates compatibility"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, rat_int};
    use proptest::prelude::*;

    fn im(a: i64, b: i64, c: i64, d: i64) -> IntMatrix {
        IntMatrix::m2(int(a), int(b), int(c), int(d))
    }

    /// The quotient E'⊕E → J for d = 2, k = 1, lp = 1, l = 3.
    fn quotient_d2() -> TavMorphism {
        let source = IntegralTorus::new(RatMatrix::diag(&[rat_int(1), rat_int(3)])).unwrap();
        let target =
            IntegralTorus::new(RatMatrix::m2(rat_int(1), rat(1, 2), rat_int(0), rat(3, 2)))
                .unwrap();
        TavMorphism::new(source, target, im(1, 0, 0, 1), im(1, -1, 0, 2)).unwrap()
    }

    #[test]
    fn classify_examples() {
        let t = IntegralTorus::new(RatMatrix::diag(&[rat_int(1), rat_int(3)])).unwrap();
        let c = TavMorphism::identity(&t).classify();
        assert!(c.surjective && c.finite && c.injective && c.isogeny);

        let c = quotient_d2().classify();
        assert!(c.surjective && c.finite && c.isogeny && !c.injective);

        let zero = TavMorphism::new(t.clone(), t.clone(), im(0, 0, 0, 0), im(0, 0, 0, 0)).unwrap();
        assert!(!zero.classify().finite);

        let bad = TavMorphism::new(t.clone(), t, im(1, 0, 0, 1), im(1, 1, 0, 1));
        assert_eq!(bad, Err(Error::IncompatibleMorphism));
    }

    #[test]
    fn rank_one_into_rank_two() {
        let circle = IntegralTorus::new(RatMatrix::m1(rat_int(2))).unwrap();
        let plane = IntegralTorus::new(RatMatrix::diag(&[rat_int(2), rat_int(5)])).unwrap();
        // inclusion of the first factor
        let f = TavMorphism::new(
            circle,
            plane,
            IntMatrix::from_rows(alloc::vec![alloc::vec![int(1), int(0)]]).unwrap(),
            IntMatrix::from_rows(alloc::vec![alloc::vec![int(1)], alloc::vec![int(0)]]).unwrap(),
        )
        .unwrap();
        let c = f.classify();
        assert!(c.finite && c.injective && !c.surjective && !c.isogeny);
        let c = f.dual().classify();
        assert!(c.surjective && !c.finite);
    }

    #[test]
    fn duality() {
        let q = quotient_d2();
        let dq = q.dual();
        assert_eq!(dq.mflat(), &im(1, 0, 0, 1));
        assert_eq!(dq.msharp(), &im(1, -1, 0, 2));
        assert_eq!(dq.dual(), q);
        let (c, dc) = (q.classify(), dq.classify());
        assert_eq!((c.surjective, c.finite), (dc.finite, dc.surjective));
        TavMorphism::new(dq.source().clone(), dq.target().clone(), dq.msharp().clone(), dq.mflat().clone())
            .unwrap();
        let t = q.source().clone();
        assert_eq!(t.dual().dual(), t);
    }

    #[test]
    fn direct_sum_of_circles() {
        let s = direct_sum(&Tav::circle(rat_int(1)).unwrap(), &Tav::circle(rat_int(3)).unwrap())
            .unwrap();
        assert_eq!(s.pairing(), &RatMatrix::diag(&[rat_int(1), rat_int(3)]));
        assert_eq!(s.polarization(), &IntMatrix::identity(2));
        assert_eq!(s.gram(), RatMatrix::diag(&[rat_int(1), rat_int(3)]));
        assert_eq!(Tav::circle(rat_int(0)), Err(Error::DegeneratePairing));
        assert_eq!(direct_sum(&s, &s), Err(Error::UnsupportedRank(2)));
    }

    #[test]
    fn pullback_examples() {
        let q = quotient_d2();
        assert_eq!(pullback_polarization(&q, &im(2, 1, 0, 1)).unwrap(), im(2, 0, 0, 2));
        let t = q.source().clone();
        let z = im(1, 0, 0, 1);
        assert_eq!(pullback_polarization(&TavMorphism::identity(&t), &z).unwrap(), z);
        let m3 = TavMorphism::multiplication(&t, &int(3));
        assert_eq!(pullback_polarization(&m3, &z).unwrap(), z.scale(&int(9)));
        let zero = TavMorphism::new(t.clone(), t, im(0, 0, 0, 0), im(0, 0, 0, 0)).unwrap();
        assert_eq!(pullback_polarization(&zero, &z), Err(Error::NotIsogeny));
    }

    #[test]
    fn polarization_types() {
        assert_eq!(polarization_type(&im(1, 0, 0, 1)).unwrap(), [int(1), int(1)]);
        assert_eq!(polarization_type(&im(1, -1, 0, 2)).unwrap(), [int(1), int(2)]);
        assert_eq!(polarization_type(&im(2, 1, 0, 1)).unwrap(), [int(1), int(2)]);
        assert_eq!(polarization_type(&im(1, 1, 1, 1)), Err(Error::SingularMatrix));
    }

    #[test]
    fn induce_examples() {
        let q = quotient_d2();
        assert_eq!(
            induce_polarization(&q, &im(2, 0, 0, 2)).unwrap(),
            Inducement::Induced(im(2, 1, 0, 1))
        );
        let expected = RatMatrix::m2(rat_int(1), rat(1, 2), rat_int(0), rat(1, 2));
        assert_eq!(
            induce_polarization(&q, &im(1, 0, 0, 1)).unwrap(),
            Inducement::NotInducible(expected)
        );
        let t = q.source().clone();
        let z = im(3, 0, 0, 1);
        assert_eq!(
            induce_polarization(&TavMorphism::identity(&t), &z).unwrap(),
            Inducement::Induced(z)
        );
    }

    #[test]
    fn image_condition_is_checked() {
        let t = IntegralTorus::new(RatMatrix::diag(&[rat_int(1), rat_int(1)])).unwrap();
        let m2 = TavMorphism::multiplication(&t, &int(2));
        assert_eq!(induce_polarization(&m2, &im(1, 0, 0, 1)), Err(Error::ImageConditionViolated));
        assert_eq!(
            induce_polarization(&m2, &im(4, 0, 0, 4)).unwrap(),
            Inducement::Induced(im(1, 0, 0, 1))
        );
    }

    #[test]
    fn adjoint_examples() {
        let t = IntegralTorus::new(RatMatrix::diag(&[rat_int(1), rat_int(3)])).unwrap();
        let id = IntMatrix::identity(2);
        assert_eq!(adjoint(&TavMorphism::identity(&t), &id, &id).unwrap(), TavMorphism::identity(&t));
        assert!(matches!(
            adjoint(&quotient_d2(), &id, &im(2, 1, 0, 1)),
            Err(Error::NotPrincipal(_))
        ));
    }

    fn unimodular() -> impl Strategy<Value = IntMatrix> {
        prop::collection::vec(0u8..4, 0..8).prop_map(|steps| {
            steps.iter().fold(IntMatrix::identity(2), |m, s| {
                let e = match s {
                    0 => im(1, 1, 0, 1),
                    1 => im(1, 0, 1, 1),
                    2 => im(0, 1, 1, 0),
                    _ => im(1, 0, 0, -1),
                };
                &m * &e
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn inducibility_is_basis_independent(
            s in unimodular(),
            a in 1i64..6, b in -5i64..6, c in 1i64..6,
        ) {
            // Zᵀ·diag(1,3) is symmetric exactly when Z = [[x, 3z], [z, w]]
            prop_assume!(12 * a * c > 9 * b * b);
            let q = quotient_d2();
            let z1 = im(2 * a, 3 * b, b, 2 * c);
            let std = induce_polarization(&q, &z1).unwrap();
            let other = induce_polarization_in_basis(&q, &z1, &s).unwrap();
            prop_assert_eq!(std.induced().is_some(), other.induced().is_some());
            if let (Some(z), Some(zs)) = (std.induced(), other.induced()) {
                prop_assert_eq!(&(z * &s), zs);
            }
        }

        #[test]
        fn dual_is_involution(lp in 1i64..20, l in 1i64..20, d in 2i64..9) {
            let src = IntegralTorus::new(RatMatrix::diag(&[rat_int(lp), rat_int(l)])).unwrap();
            let f = TavMorphism::multiplication(&src, &int(d));
            prop_assert_eq!(f.dual().dual(), f.clone());
            let c = f.classify();
            let dc = f.dual().classify();
            prop_assert_eq!(c.surjective, dc.finite);
            prop_assert_eq!(c.finite, dc.surjective);
        }
    }
}
