//! Splitting data, the principally polarized quotient `J^pp` and the
//! isogeny `φ: E'×E → J^pp` with its adjoint.
//!
//! Splitting data is `(d, k, lp, l)`: circles `E'` and `E` of lengths `lp`
//! and `l`, and the subgroup `G` generated by `(k·lp/d, l/d)`. The lattice of
//! the quotient is spanned by `B₁ = (lp, 0)` and `B₂ = (k·lp/d, l/d)`.

use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result, ValidationError};
use crate::exact::{
    inv2, snf2, to_integer, to_rational, IntMatrix, Integer, RatMatrix, Rational,
};
use crate::form::QuadForm2;
use crate::tav::{
    adjoint, direct_sum, induce_polarization, polarization_type, pullback_polarization,
    Inducement, IntegralTorus, Tav, TavMorphism,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplittingData {
    pub d: u64,
    pub k: u64,
    pub lp: Rational,
    pub l: Rational,
}

impl SplittingData {
    pub fn new(d: u64, k: u64, lp: Rational, l: Rational) -> Result<Self, ValidationError> {
        let sd = SplittingData { d, k, lp, l };
        sd.validate()?;
        Ok(sd)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let (d, k) = (self.d, self.k);
        if d < 2 {
            return Err(ValidationError::DegreeTooSmall { d });
        }
        if k == 0 || k >= d {
            return Err(ValidationError::KOutOfRange { k, d });
        }
        let gcd = k.gcd(&d);
        if gcd != 1 {
            return Err(ValidationError::NotCoprime { k, d, gcd });
        }
        if !self.lp.is_positive() {
            return Err(ValidationError::NonPositiveLength { which: "lp" });
        }
        if !self.l.is_positive() {
            return Err(ValidationError::NonPositiveLength { which: "l" });
        }
        Ok(())
    }

    pub fn d_int(&self) -> Integer {
        Integer::from(self.d)
    }

    pub fn k_int(&self) -> Integer {
        Integer::from(self.k)
    }

    fn d_rat(&self) -> Rational {
        Rational::from_integer(self.d_int())
    }

    fn k_rat(&self) -> Rational {
        Rational::from_integer(self.k_int())
    }
}

/// `[[d·lp, k·lp], [k·lp, (k²·lp + l)/d]]`, the Gram matrix of `ζ^pp`.
pub fn qpp_unflipped(sd: &SplittingData) -> Result<QuadForm2> {
    sd.validate()?;
    let (d, k) = (sd.d_rat(), sd.k_rat());
    Ok(QuadForm2::new(
        &d * &sd.lp,
        &k * &sd.lp,
        (&k * &k * &sd.lp + &sd.l) / &d,
    ))
}

/// `diag(1,-1) • qpp_unflipped`, the starting point of the reduction.
pub fn qpp(sd: &SplittingData) -> Result<QuadForm2> {
    Ok(qpp_unflipped(sd)?.flip())
}

/// `q_# = [[1, -k], [0, d]]`.
pub fn qflat(sd: &SplittingData) -> IntMatrix {
    IntMatrix::m2(Integer::one(), -sd.k_int(), Integer::zero(), sd.d_int())
}

/// `diag(d,d)·q_#⁻¹ = [[d, k], [0, 1]]`.
pub fn zeta_closed_form(sd: &SplittingData) -> IntMatrix {
    IntMatrix::m2(sd.d_int(), sd.k_int(), Integer::zero(), Integer::one())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JppModel {
    pub sd: SplittingData,
    pub qflat: IntMatrix,
    /// The polarization on `J` pulling back to `d·ζ_⊕`.
    pub zeta: IntMatrix,
    pub zetapp: IntMatrix,
    /// Gram matrix of `ζ^pp`, before the sign flip.
    pub gram: QuadForm2,
    /// `B₁`, `B₂` in `ℝ² = Lie(E'×E)`.
    pub basis_b: [(Rational, Rational); 2],
    /// `E'×E` with the product polarization.
    pub product: Tav,
    /// `J = (E'×E)/G`.
    pub quotient: IntegralTorus,
    pub jpp: Tav,
    /// `E'×E → J`.
    pub q: TavMorphism,
    /// `J → J^pp`, the identity on `Λ'` and `ζ` on `Λ`.
    pub phibar: TavMorphism,
    /// `φ = φ̄ ∘ q`.
    pub phi: TavMorphism,
    /// The adjoint `φ̃: J^pp → E'×E`.
    pub phitilde: TavMorphism,
}

pub fn build_jpp(sd: &SplittingData) -> Result<JppModel> {
    sd.validate()?;
    let (d, k) = (sd.d_rat(), sd.k_rat());
    let product = direct_sum(&Tav::circle(sd.lp.clone())?, &Tav::circle(sd.l.clone())?)?;
    // [ω_i, B_j]
    let pairing_j = RatMatrix::m2(
        sd.lp.clone(),
        &k * &sd.lp / &d,
        Rational::zero(),
        &sd.l / &d,
    );
    let quotient = IntegralTorus::new(pairing_j)?;
    let qflat = qflat(sd);
    let q = TavMorphism::new(
        product.torus().clone(),
        quotient.clone(),
        IntMatrix::identity(2),
        qflat.clone(),
    )?;

    let d_zeta = IntMatrix::identity(2).scale(&sd.d_int());
    let zeta = match induce_polarization(&q, &d_zeta)? {
        Inducement::Induced(z) => z,
        Inducement::NotInducible(_) => {
            return Err(Error::InternalInconsistency("d times the product polarization does not descend"))
        }
    };
    if zeta != zeta_closed_form(sd) {
        return Err(Error::InternalInconsistency("induced polarization differs from closed form"));
    }
    let closed = &to_rational(&d_zeta) * &inv2(&to_rational(&qflat))?;
    if to_integer(&closed).as_ref() != Some(&zeta) {
        return Err(Error::InternalInconsistency("diag(d,d)·q_#⁻¹ differs from ζ"));
    }
    if pullback_polarization(&q, &zeta)? != d_zeta {
        return Err(Error::InternalInconsistency("ζ does not pull back to d·ζ_⊕"));
    }

    let gram_m = quotient.gram(&zeta);
    let gram = QuadForm2::from_matrix(&gram_m)?;
    if gram != qpp_unflipped(sd)? {
        return Err(Error::InternalInconsistency("Gram of ζ differs from Q^pp"));
    }
    let zetapp = IntMatrix::identity(2);
    let jpp = Tav::new(IntegralTorus::new(gram_m)?, zetapp.clone())?;
    let phibar = TavMorphism::new(
        quotient.clone(),
        jpp.torus().clone(),
        zeta.clone(),
        IntMatrix::identity(2),
    )?;
    let phi = q.then(&phibar)?;
    let phitilde = adjoint(&phi, product.polarization(), &zetapp)?;
    let basis_b = [
        (sd.lp.clone(), Rational::zero()),
        (&k * &sd.lp / &d, &sd.l / &d),
    ];
    Ok(JppModel {
        sd: sd.clone(),
        qflat,
        zeta,
        zetapp,
        gram,
        basis_b,
        product,
        quotient,
        jpp,
        q,
        phibar,
        phi,
        phitilde,
    })
}

/// The six maps between `E'`, `E` and `J^pp`, with each circle scaled to
/// `ℝ/ℤ` and `J^pp` written in the basis `B₁, B₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitDiagram {
    pub d: u64,
    /// `E' → J^pp`.
    pub f1: RatMatrix,
    /// `E → J^pp`.
    pub f2: RatMatrix,
    /// `J^pp → E'`.
    pub g1: RatMatrix,
    /// `J^pp → E`.
    pub g2: RatMatrix,
    pub phi: RatMatrix,
    pub phitilde: RatMatrix,
}

impl SplitDiagram {
    pub fn identities_hold(&self) -> bool {
        let d = RatMatrix::m1(Rational::from_integer(Integer::from(self.d)));
        let zero = RatMatrix::zero(1, 1);
        &self.g2 * &self.f1 == zero
            && &self.g1 * &self.f2 == zero
            && &self.g1 * &self.f1 == d
            && &self.g2 * &self.f2 == d
            && &self.phitilde * &self.phi == RatMatrix::identity(2).scale(&d[(0, 0)])
    }
}

pub fn build_diagram(sd: &SplittingData) -> Result<SplitDiagram> {
    diagram_of(&build_jpp(sd)?)
}

/// The diagram of an already built model.
pub fn diagram_of(model: &JppModel) -> Result<SplitDiagram> {
    let phi = to_rational(model.phi.mflat());
    let phitilde = to_rational(model.phitilde.mflat());
    let diagram = SplitDiagram {
        d: model.sd.d,
        f1: phi.column(0),
        f2: phi.column(1),
        g1: phitilde.row(0),
        g2: phitilde.row(1),
        phi,
        phitilde,
    };
    if !diagram.identities_hold() {
        return Err(Error::InternalInconsistency("diagram identities fail"));
    }
    Ok(diagram)
}

/// Points `x ∈ [0,1)²` with `m·x ∈ ℤ²`, sorted.
pub fn torus_kernel(m: &IntMatrix) -> Result<Vec<(Rational, Rational)>> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::UnsupportedShape { rows: m.rows(), cols: m.cols() });
    }
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let snf = snf2(m)?;
    let [g1, g2] = [snf.d[(0, 0)].clone(), snf.d[(1, 1)].clone()];
    let v = to_rational(&snf.v);
    let frac = |x: Rational| &x - x.floor();
    let mut out = Vec::new();
    let mut a = Integer::zero();
    while a < g1 {
        let mut b = Integer::zero();
        while b < g2 {
            let y0 = Rational::new(a.clone(), g1.clone());
            let y1 = Rational::new(b.clone(), g2.clone());
            let x0 = &v[(0, 0)] * &y0 + &v[(0, 1)] * &y1;
            let x1 = &v[(1, 0)] * &y0 + &v[(1, 1)] * &y1;
            out.push((frac(x0), frac(x1)));
            b += 1;
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// The graph `{(k·j/d mod 1, j/d)}` in normalized coordinates.
pub fn torsion_graph(sd: &SplittingData) -> Vec<(Rational, Rational)> {
    let d = sd.d_int();
    let mut out: Vec<_> = (0..sd.d)
        .map(|j| {
            let j = Integer::from(j);
            let kj = (sd.k_int() * &j).mod_floor(&d);
            (Rational::new(kj, d.clone()), Rational::new(j, d.clone()))
        })
        .collect();
    out.sort();
    out
}

/// Kernel points in raw coordinates `(x·lp, y·l)`.
pub fn to_raw(sd: &SplittingData, pts: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    pts.iter().map(|(x, y)| (x * &sd.lp, y * &sd.l)).collect()
}

/// Type of `ζ`, never `(1, 1)`.
pub fn zeta_type(model: &JppModel) -> Result<Vec<Integer>> {
    polarization_type(&model.zeta)
}


#[cfg(test)]
mod tests {
    use super::tests_support::valid_sd;
    use super::*;
    use crate::exact::{int, rat, rat_int};
    use proptest::prelude::*;

    fn sd(d: u64, k: u64, lp: i64, l: i64) -> SplittingData {
        SplittingData::new(d, k, rat_int(lp), rat_int(l)).unwrap()
    }

    fn im(a: i64, b: i64, c: i64, d: i64) -> IntMatrix {
        IntMatrix::m2(int(a), int(b), int(c), int(d))
    }

    #[test]
    fn validation() {
        assert!(SplittingData::new(2, 1, rat_int(1), rat_int(3)).is_ok());
        assert!(SplittingData::new(18, 7, rat_int(3), rat_int(1)).is_ok());
        assert_eq!(
            SplittingData::new(4, 2, rat_int(1), rat_int(1)),
            Err(ValidationError::NotCoprime { k: 2, d: 4, gcd: 2 })
        );
        assert_eq!(
            SplittingData::new(1, 1, rat_int(1), rat_int(1)),
            Err(ValidationError::DegreeTooSmall { d: 1 })
        );
        assert_eq!(
            SplittingData::new(5, 5, rat_int(1), rat_int(1)),
            Err(ValidationError::KOutOfRange { k: 5, d: 5 })
        );
        assert_eq!(
            SplittingData::new(5, 2, rat_int(0), rat_int(1)),
            Err(ValidationError::NonPositiveLength { which: "lp" })
        );
    }

    #[test]
    fn qpp_examples() {
        assert_eq!(
            qpp(&sd(18, 7, 3, 1)).unwrap(),
            QuadForm2::new(rat_int(54), rat_int(-21), rat(74, 9))
        );
        assert_eq!(
            qpp(&sd(2, 1, 1, 3)).unwrap(),
            QuadForm2::new(rat_int(2), rat_int(-1), rat_int(2))
        );
    }

    #[test]
    fn jpp_examples() {
        let m = build_jpp(&sd(2, 1, 1, 3)).unwrap();
        assert_eq!(m.zeta, im(2, 1, 0, 1));
        assert_eq!(m.gram, QuadForm2::new(rat_int(2), rat_int(1), rat_int(2)));
        assert_eq!(m.qflat, im(1, -1, 0, 2));
        let m = build_jpp(&sd(18, 7, 3, 1)).unwrap();
        assert_eq!(m.zeta, im(18, 7, 0, 1));
        assert_eq!(polarization_type(&m.zetapp).unwrap(), [int(1), int(1)]);
        assert_eq!(zeta_type(&m).unwrap(), [int(1), int(18)]);
        assert!(m.jpp.is_principal());
    }

    #[test]
    fn phi_in_lattice_coordinates() {
        let m = build_jpp(&sd(2, 1, 1, 3)).unwrap();
        // f^# = ζ and f_# = q_#
        assert_eq!(m.phi.msharp(), &im(2, 1, 0, 1));
        assert_eq!(m.phi.mflat(), &im(1, -1, 0, 2));
        assert_eq!(m.phitilde.msharp(), &im(1, -1, 0, 2));
        assert_eq!(m.phitilde.mflat(), &im(2, 1, 0, 1));
        // the torus map of φ̃ on Λ is the transpose of its f^#
        assert_eq!(m.phitilde.msharp().transpose(), im(1, 0, -1, 2));
        let comp = m.phi.then(&m.phitilde).unwrap();
        assert_eq!(comp.msharp(), &im(2, 0, 0, 2));
        assert_eq!(comp.mflat(), &im(2, 0, 0, 2));
    }

    #[test]
    fn diagram_examples() {
        let dg = build_diagram(&sd(2, 1, 1, 3)).unwrap();
        assert_eq!(&dg.phitilde * &dg.phi, RatMatrix::identity(2).scale(&rat_int(2)));
        let s = sd(2, 1, 1, 3);
        let ker = torus_kernel(&to_integer(&dg.phi).unwrap()).unwrap();
        assert_eq!(ker, [(rat_int(0), rat_int(0)), (rat(1, 2), rat(1, 2))]);
        assert_eq!(to_raw(&s, &ker), [(rat_int(0), rat_int(0)), (rat(1, 2), rat(3, 2))]);
        let dg = build_diagram(&sd(18, 7, 3, 1)).unwrap();
        assert_eq!(&dg.g2 * &dg.f1, RatMatrix::zero(1, 1));
        assert_eq!(dg.phi, to_rational(&im(1, -7, 0, 18)));
        assert_eq!(dg.phitilde, to_rational(&im(18, 7, 0, 1)));
    }

    /// Brute force over the `(1/det)`-grid.
    fn kernel_oracle(m: &IntMatrix) -> Vec<(Rational, Rational)> {
        let n = i64::try_from(m.det().abs()).unwrap();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (rat(a, n), rat(b, n));
                let r = to_rational(m);
                let u = &r[(0, 0)] * &x + &r[(0, 1)] * &y;
                let v = &r[(1, 0)] * &x + &r[(1, 1)] * &y;
                if u.is_integer() && v.is_integer() {
                    out.push((x, y));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn kernel_matches_brute_force() {
        for m in [im(2, 1, 0, 1), im(3, 0, 0, 6), im(1, -7, 0, 18), im(4, 6, 2, 7)] {
            assert_eq!(torus_kernel(&m).unwrap(), kernel_oracle(&m));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn qpp_invariants(s in valid_sd()) {
            let q = qpp(&s).unwrap();
            prop_assert_eq!(q.det(), &s.lp * &s.l);
            prop_assert!(q.q12.is_negative());
            prop_assert!(q.q11.is_positive());
            prop_assert!(q.is_positive_definite());
        }

        #[test]
        fn jpp_and_diagram(s in valid_sd()) {
            let m = build_jpp(&s).unwrap();
            prop_assert_eq!(&m.zeta, &zeta_closed_form(&s));
            let t = zeta_type(&m).unwrap();
            prop_assert!(!t.iter().all(One::is_one));
            let dg = diagram_of(&m).unwrap();
            prop_assert!(dg.identities_hold());
            let ker = torus_kernel(&to_integer(&dg.phi).unwrap()).unwrap();
            prop_assert_eq!(ker.len() as u64, s.d);
            prop_assert_eq!(&ker, &torsion_graph(&s));
            let mut xs: Vec<_> = ker.iter().map(|p| p.0.clone()).collect();
            let mut ys: Vec<_> = ker.iter().map(|p| p.1.clone()).collect();
            xs.sort();
            ys.sort();
            xs.dedup();
            ys.dedup();
            let torsion: Vec<_> = (0..s.d as i64).map(|j| rat(j, s.d as i64)).collect();
            prop_assert_eq!(xs, torsion.clone());
            prop_assert_eq!(ys, torsion);
        }
    }
}
