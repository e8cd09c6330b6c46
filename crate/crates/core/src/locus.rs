//! The fan `Δ_k` on the quadrant of lengths `(lp, l)`.
//!
//! Every entry of `Q^pp` is linear in `(lp, l)` once `d` and `k` are fixed,
//! so Selling reduction can be replayed symbolically. Points with the same
//! reduction word form an open cone; on it the σ-coordinates of the reduced
//! form are linear maps `φ_σ` into the theta cell of the moduli space.
//!
//! Directions in the quadrant are parametrized by `t = l / lp`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::Sign;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{int_to_rat, IntMatrix, Integer, Rational};
use crate::form::QuadForm2;
use crate::selling::{Move, ReductionWord};
use crate::splitting::SplittingData;

/// `a·lp + b·l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinForm {
    pub a: Rational,
    pub b: Rational,
}

impl LinForm {
    pub fn new(a: Rational, b: Rational) -> Self {
        LinForm { a, b }
    }

    /// The form `lp`.
    pub fn lp() -> Self {
        LinForm::new(Rational::one(), Rational::zero())
    }

    /// The form `l`.
    pub fn l() -> Self {
        LinForm::new(Rational::zero(), Rational::one())
    }

    pub fn eval(&self, lp: &Rational, l: &Rational) -> Rational {
        &self.a * lp + &self.b * l
    }

    /// Value on the direction `(1, t)`.
    pub fn at(&self, t: &Rational) -> Rational {
        &self.a + &self.b * t
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &LinForm) -> LinForm {
        LinForm::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn scale(&self, s: &Rational) -> LinForm {
        LinForm::new(&self.a * s, &self.b * s)
    }

    pub fn neg(&self) -> LinForm {
        LinForm::new(-self.a.clone(), -self.b.clone())
    }

    /// Vanishes somewhere in the open quadrant.
    pub fn has_interior_zero(&self) -> bool {
        (self.a.is_positive() && self.b.is_negative()) || (self.a.is_negative() && self.b.is_positive())
    }

    /// Positive multiple with coprime integer coefficients and `b > 0`,
    /// or `a > 0` when `b = 0`.
    pub fn primitive(&self) -> LinForm {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.a.denom().lcm(self.b.denom());
        let (na, nb) = (self.a.numer() * (&den / self.a.denom()), self.b.numer() * (&den / self.b.denom()));
        let mut g = na.gcd(&nb);
        if nb.is_negative() || (nb.is_zero() && na.is_negative()) {
            g = -g;
        }
        LinForm::new(Rational::from_integer(na / &g), Rational::from_integer(nb / &g))
    }

    /// The `t` where the form vanishes, if it has a zero at a finite direction.
    pub fn zero_direction(&self) -> Option<Rational> {
        if self.b.is_zero() {
            None
        } else {
            Some(-(&self.a / &self.b))
        }
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (c, name) in [(&self.a, "lp"), (&self.b, "l")] {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if wrote { "+" } else { "" };
            if wrote {
                write!(f, " {sign} ")?;
            } else {
                f.write_str(sign)?;
            }
            let m = c.abs();
            if m.is_one() {
                f.write_str(name)?;
            } else {
                write!(f, "{m}*{name}")?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Symmetric form with entries linear in `(lp, l)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymForm {
    pub q11: LinForm,
    pub q12: LinForm,
    pub q22: LinForm,
}

impl SymForm {
    /// The sign-flipped `Q^pp` for fixed `(d, k)`.
    pub fn qpp(d: u64, k: u64) -> Self {
        let d = Rational::from_integer(d.into());
        let k = Rational::from_integer(k.into());
        SymForm {
            q11: LinForm::new(d.clone(), Rational::zero()),
            q12: LinForm::new(-k.clone(), Rational::zero()),
            q22: LinForm::new(&k * &k / &d, d.recip()),
        }
    }

    pub fn eval(&self, lp: &Rational, l: &Rational) -> QuadForm2 {
        QuadForm2::new(self.q11.eval(lp, l), self.q12.eval(lp, l), self.q22.eval(lp, l))
    }

    /// `Xᵀ Q X`.
    pub fn act(&self, x: &IntMatrix) -> SymForm {
        let [a, b, c, d] = [(0, 0), (0, 1), (1, 0), (1, 1)].map(|i| int_to_rat(&x[i]));
        let quad = |u: &Rational, v: &Rational, s: &Rational, w: &Rational| {
            // Q((u, v), (s, w))
            self.q11
                .scale(&(u * s))
                .add(&self.q12.scale(&(u * w + v * s)))
                .add(&self.q22.scale(&(v * w)))
        };
        SymForm { q11: quad(&a, &c, &a, &c), q12: quad(&a, &c, &b, &d), q22: quad(&b, &d, &b, &d) }
    }

    /// `(p12, p13, p23)`.
    pub fn params(&self) -> [LinForm; 3] {
        [
            self.q12.clone(),
            self.q11.add(&self.q12).neg(),
            self.q22.add(&self.q12).neg(),
        ]
    }

    /// `(q11 + q12, q22 + q12, -q12)`.
    pub fn sigma_coords(&self) -> [LinForm; 3] {
        [self.q11.add(&self.q12), self.q22.add(&self.q12), self.q12.neg()]
    }
}

/// A maximal cone `{(lp, l) : lower < l/lp < upper}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanCone {
    pub word: ReductionWord,
    /// Each is positive on the open cone.
    pub inequalities: Vec<LinForm>,
    /// Primitive forms vanishing on the lower and upper boundary ray.
    pub rays: [LinForm; 2],
    pub lower: Rational,
    /// `None` for the `l` axis.
    pub upper: Option<Rational>,
    pub reduced: SymForm,
    pub phi_sigma: [LinForm; 3],
    /// An interior point `(lp, l)`.
    pub sample: (Rational, Rational),
}

impl FanCone {
    pub fn contains_direction(&self, t: &Rational) -> bool {
        t > &self.lower && self.upper.as_ref().is_none_or(|u| t < u)
    }

    /// Directions `(lp, l)` of the two boundary rays.
    pub fn ray_directions(&self) -> [(Rational, Rational); 2] {
        let lo = (Rational::one(), self.lower.clone());
        let hi = match &self.upper {
            Some(u) => (Rational::one(), u.clone()),
            None => (Rational::zero(), Rational::one()),
        };
        [lo, hi]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanDelta {
    pub d: u64,
    pub k: u64,
    /// Ordered from the `lp` axis to the `l` axis.
    pub cones: Vec<FanCone>,
}

impl FanDelta {
    /// Rays between adjacent cones, as primitive forms.
    pub fn interior_rays(&self) -> Vec<LinForm> {
        self.cones.iter().skip(1).map(|c| c.rays[0].clone()).collect()
    }
}

pub fn default_cone_cap(d: u64) -> usize {
    usize::try_from(d).unwrap_or(usize::MAX / 64).saturating_mul(64)
}

pub fn phi_sigma(cone: &FanCone) -> [LinForm; 3] {
    cone.phi_sigma.clone()
}

struct Replay {
    moves: Vec<Move>,
    reduced: SymForm,
    inequalities: Vec<LinForm>,
}

/// Reruns the reduction at direction `(1, t)`, recording the branch conditions.
fn replay(d: u64, k: u64, t: &Rational, cap: usize) -> Result<Replay> {
    let mut q = SymForm::qpp(d, k);
    let mut moves = Vec::new();
    let mut inequalities = Vec::new();
    for _ in 0..=cap {
        let [_, p13, p23] = q.params();
        let (v13, v23) = (p13.at(t), p23.at(t));
        if v13.is_zero() || v23.is_zero() {
            return Err(Error::DegenerateSample);
        }
        let m = if v13.is_positive() {
            inequalities.push(p13);
            Move::T2
        } else if v23.is_positive() {
            inequalities.push(p23);
            Move::T1
        } else {
            let [p12, p13, p23] = q.params();
            if p12.at(t).is_zero() {
                return Err(Error::DegenerateSample);
            }
            inequalities.extend([p12.neg(), p13.neg(), p23.neg()]);
            return Ok(Replay { moves, reduced: q, inequalities });
        };
        q = q.act(&m.matrix());
        moves.push(m);
    }
    Err(Error::IterationCapExceeded { cap })
}

/// Open interval of directions on which every form is positive.
fn interval(forms: &[LinForm]) -> Result<(Rational, Option<Rational>)> {
    let mut lo = Rational::zero();
    let mut hi: Option<Rational> = None;
    for f in forms {
        match f.b.numer().sign() {
            Sign::Plus => lo = lo.max(-(&f.a / &f.b)),
            Sign::Minus => {
                let r = -(&f.a / &f.b);
                hi = Some(hi.map_or(r.clone(), |h| h.min(r)));
            }
            Sign::NoSign => {
                if !f.a.is_positive() {
                    return Err(Error::InternalInconsistency("empty cone"));
                }
            }
        }
    }
    if hi.as_ref().is_some_and(|h| h <= &lo) {
        return Err(Error::InternalInconsistency("empty cone"));
    }
    Ok((lo, hi))
}

fn cone_at(d: u64, k: u64, t: &Rational, cap: usize) -> Result<FanCone> {
    let r = replay(d, k, t, cap)?;
    let (lower, upper) = interval(&r.inequalities)?;
    let boundary = |x: &Rational| LinForm::new(-x.clone(), Rational::one()).primitive();
    let rays = [
        if lower.is_zero() { LinForm::l() } else { boundary(&lower) },
        upper.as_ref().map_or_else(LinForm::lp, boundary),
    ];
    let phi_sigma = r.reduced.sigma_coords();
    Ok(FanCone {
        word: ReductionWord { moves: r.moves, ..Default::default() },
        inequalities: r.inequalities,
        rays,
        lower,
        upper,
        phi_sigma,
        reduced: r.reduced,
        sample: (Rational::one(), t.clone()),
    })
}

/// Walks the quadrant from the `lp` axis to the `l` axis, one cone at a time.
pub fn build_fan(d: u64, k: u64, cap: usize) -> Result<FanDelta> {
    SplittingData::new(d, k, Rational::one(), Rational::one())?;
    let step_cap = crate::selling::DEFAULT_ITERATION_CAP;
    let half = Rational::new(1.into(), 2.into());
    let shrink = Rational::new(2.into(), 3.into());

    let mut t = half.clone();
    let first = loop {
        match cone_at(d, k, &t, step_cap) {
            Ok(c) if c.lower.is_zero() => break c,
            Ok(c) => t = &c.lower / Rational::from_integer(2.into()),
            Err(Error::DegenerateSample) => t = &t * &shrink,
            Err(e) => return Err(e),
        }
    };
    let mut cones = alloc::vec![first];
    while let Some(hi) = cones.last().and_then(|c| c.upper.clone()) {
        if cones.len() >= cap {
            return Err(Error::ConeCapExceeded { cap });
        }
        let mut delta = hi.clone().max(Rational::one());
        let next = loop {
            let t = &hi + &delta;
            match cone_at(d, k, &t, step_cap) {
                Ok(c) if c.lower == hi => break c,
                Ok(_) => delta = &delta * &half,
                Err(Error::DegenerateSample) => delta = &delta * &shrink,
                Err(e) => return Err(e),
            }
        };
        cones.push(next);
    }
    Ok(FanDelta { d, k, cones })
}

/// Terminal forms `q11 + q12` and `q22 + q12` of each cone that vanish
/// somewhere in the open quadrant.
pub fn boundary_rays(d: u64, k: u64) -> Result<Vec<(ReductionWord, LinForm)>> {
    let fan = build_fan(d, k, default_cone_cap(d))?;
    let mut out = Vec::new();
    for c in &fan.cones {
        let [l1, l2, _] = c.reduced.sigma_coords();
        for f in [l1, l2] {
            if f.has_interior_zero() {
                out.push((c.word.clone(), f.primitive()));
            }
        }
    }
    Ok(out)
}

/// A cone in the theta cell, spanned by two normalized σ-coordinate vectors.
pub type ImageCone = [[Rational; 3]; 2];

fn normalize(v: [Rational; 3]) -> [Rational; 3] {
    let s: Rational = v.iter().sum();
    if s.is_zero() {
        v
    } else {
        v.map(|x| x / &s)
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Smallest image of the pair under a simultaneous permutation of coordinates.
pub fn canonical_image(cone: &ImageCone) -> ImageCone {
    PERMUTATIONS
        .iter()
        .map(|p| {
            let [u, v] = cone.clone().map(|w| p.map(|i| w[i].clone()));
            if u <= v {
                [u, v]
            } else {
                [v, u]
            }
        })
        .min()
        .expect("six permutations")
}

/// The canonicalized images of all cones of a fan, sorted and deduplicated.
pub fn image_cones(fan: &FanDelta) -> Vec<ImageCone> {
    let mut out: Vec<ImageCone> = fan
        .cones
        .iter()
        .map(|c| {
            let rays = c.ray_directions().map(|(lp, l)| normalize(c.phi_sigma.clone().map(|f| f.eval(&lp, &l))));
            canonical_image(&rays)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Whether the two fans have the same image in the theta cell.
pub fn compare_images(f1: &FanDelta, f2: &FanDelta) -> bool {
    image_cones(f1) == image_cones(f2)
}

/// The primitive integer direction `(lp, l)` in the closed quadrant on
/// which the form vanishes.
pub fn ray_point(f: &LinForm) -> (Integer, Integer) {
    let p = f.primitive();
    let (x, y) = (p.b.to_integer(), -p.a.to_integer());
    if x.is_negative() || y.is_negative() {
        (-x, -y)
    } else {
        (x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use crate::reconstruct::torelli_preimage;
    use crate::selling::{reduce_to_sigma, sigma_coords, TropicalCurveResult, DEFAULT_ITERATION_CAP};

    fn lf(a: Rational, b: Rational) -> LinForm {
        LinForm::new(a, b)
    }

    fn fan(d: u64, k: u64) -> FanDelta {
        build_fan(d, k, default_cone_cap(d)).unwrap()
    }

    #[test]
    fn primitive_forms() {
        assert_eq!(ray_point(&LinForm::lp()), (Integer::from(0), Integer::from(1)));
        assert_eq!(ray_point(&LinForm::l()), (Integer::from(1), Integer::from(0)));
        assert_eq!(ray_point(&lf(rat_int(-2), rat_int(1))), (Integer::from(1), Integer::from(2)));
        assert_eq!(lf(rat(2, 3), rat(-4, 3)).primitive(), lf(rat_int(-1), rat_int(2)));
        assert_eq!(lf(rat_int(-3), rat_int(0)).primitive(), lf(rat_int(1), rat_int(0)));
        assert_eq!(alloc::format!("{}", lf(rat_int(-2), rat(1, 3))), "-2*lp + 1/3*l");
        assert_eq!(alloc::format!("{}", LinForm::l()), "l");
    }

    #[test]
    fn symbolic_qpp_matches_concrete() {
        let s = SplittingData::new(18, 7, rat_int(3), rat_int(1)).unwrap();
        let q = SymForm::qpp(18, 7).eval(&s.lp, &s.l);
        assert_eq!(q, crate::splitting::qpp(&s).unwrap());
    }

    #[test]
    fn d3_fans() {
        for k in [1, 2] {
            let f = fan(3, k);
            assert_eq!(f.cones.len(), 3);
            assert_eq!(f.interior_rays(), [lf(rat_int(-1), rat_int(2)), lf(rat_int(-2), rat_int(1))]);
        }
        let f = fan(3, 1);
        let by_word = |pairs: &[(u64, u64)]| {
            f.cones.iter().find(|c| c.word.pairs() == pairs).expect("cone present").phi_sigma.clone()
        };
        let (lp, l) = (LinForm::lp(), LinForm::l());
        assert_eq!(
            by_word(&[]),
            [lp.scale(&rat_int(2)), l.scale(&rat(1, 3)).add(&lp.scale(&rat(-2, 3))), lp.clone()]
        );
        assert_eq!(
            by_word(&[(2, 0)]),
            [l.scale(&rat_int(2)), l.clone(), lp.scale(&rat(1, 3)).add(&l.scale(&rat(-2, 3)))]
        );
        assert!(compare_images(&fan(3, 1), &fan(3, 2)));
    }

    #[test]
    fn d2_fan() {
        let f = fan(2, 1);
        assert_eq!(f.cones.len(), 2);
        assert_eq!(f.interior_rays(), [lf(rat_int(-1), rat_int(1))]);
    }

    #[test]
    fn cone_invariants() {
        for (d, k) in [(5, 2), (7, 3), (8, 3), (9, 4), (11, 5)] {
            let f = fan(d, k);
            assert_eq!(f.cones[0].lower, rat_int(0));
            assert!(f.cones.last().unwrap().upper.is_none());
            for w in f.cones.windows(2) {
                assert_eq!(w[0].upper.as_ref(), Some(&w[1].lower));
                assert_eq!(w[0].rays[1], w[1].rays[0]);
                assert_ne!(w[0].word, w[1].word);
            }
            for c in &f.cones {
                let (lp, l) = &c.sample;
                assert!(c.inequalities.iter().all(|g| g.eval(lp, l).is_positive()));
                assert!(c.phi_sigma.iter().all(|g| g.eval(lp, l).is_positive()));
                let s = SplittingData::new(d, k, lp.clone(), l.clone()).unwrap();
                let q = crate::splitting::qpp(&s).unwrap();
                let (red, word) = reduce_to_sigma(&q, DEFAULT_ITERATION_CAP).unwrap();
                assert_eq!(word.moves, c.word.moves);
                assert_eq!(c.reduced.eval(lp, l), red);
                let sc = sigma_coords(&red).unwrap();
                assert_eq!(c.phi_sigma.clone().map(|g| g.eval(lp, l)), [sc.l1, sc.l2, sc.l3]);
            }
        }
    }

    #[test]
    fn shared_rays_are_dumbbells() {
        for (d, k) in [(3, 1), (3, 2), (5, 2), (7, 3)] {
            let f = fan(d, k);
            for w in f.cones.windows(2) {
                let (lp, l) = ray_point(&w[1].rays[0]);
                let (lp, l) = (Rational::from_integer(lp), Rational::from_integer(l));
                let mut left = w[0].phi_sigma.clone().map(|g| g.eval(&lp, &l));
                let mut right = w[1].phi_sigma.clone().map(|g| g.eval(&lp, &l));
                assert_eq!(left.iter().filter(|x| x.is_zero()).count(), 1);
                left.sort();
                right.sort();
                assert_eq!(left, right);
                let s = SplittingData::new(d, k, lp, l).unwrap();
                let t = torelli_preimage(&s, DEFAULT_ITERATION_CAP).unwrap();
                let TropicalCurveResult::DumbbellFamily { lc1, lc2 } = t.curve else {
                    panic!("ray point gave a theta curve");
                };
                let mut cyc = [lc1, lc2];
                cyc.sort();
                assert_eq!(cyc[..], left[1..]);
            }
        }
    }

    #[test]
    fn boundary_rays_cover_fan_rays() {
        for (d, k) in [(3, 1), (4, 1), (5, 2), (7, 3), (7, 6)] {
            let rays: Vec<_> = boundary_rays(d, k).unwrap().into_iter().map(|(_, f)| f).collect();
            for r in fan(d, k).interior_rays() {
                assert!(rays.contains(&r), "ray {r} missing for d={d}, k={k}");
            }
            for c in fan(d, k).cones {
                let [l1, l2, _] = c.reduced.sigma_coords();
                let both = l1.has_interior_zero() && l2.has_interior_zero();
                assert!(!(both && l1.primitive() == l2.primitive()));
            }
        }
        let mut rays: Vec<_> = boundary_rays(3, 1).unwrap().into_iter().map(|(_, f)| f).collect();
        rays.sort();
        rays.dedup();
        assert_eq!(rays, [lf(rat_int(-2), rat_int(1)), lf(rat_int(-1), rat_int(2))]);
    }

    #[test]
    fn canonical_image_is_permutation_invariant() {
        let c: ImageCone = [
            [rat(1, 2), rat(1, 3), rat(1, 6)],
            [rat(1, 4), rat(1, 4), rat(1, 2)],
        ];
        let swapped: ImageCone = [
            [rat(1, 4), rat(1, 2), rat(1, 4)],
            [rat(1, 2), rat(1, 6), rat(1, 3)],
        ];
        assert_eq!(canonical_image(&c), canonical_image(&swapped));
        let f = fan(5, 2);
        assert!(compare_images(&f, &f));
    }

    fn ray_family(d: u64) -> Vec<LinForm> {
        let d = i64::try_from(d).unwrap();
        (1..d).map(|a| lf(rat_int(a - d), rat_int(a)).primitive()).rev().collect()
    }

    #[test]
    fn ray_families_for_extreme_k() {
        for d in 2..=10 {
            for k in [1, d - 1] {
                let f = fan(d, k);
                assert_eq!(f.cones.len() as u64, d);
                assert_eq!(f.interior_rays(), ray_family(d), "d={d}, k={k}");
            }
            let mut b: Vec<_> = boundary_rays(d, 1).unwrap().into_iter().map(|(_, r)| r).collect();
            b.sort();
            b.dedup();
            let mut expected = ray_family(d);
            expected.sort();
            assert_eq!(b, expected);
        }
    }

    #[test]
    fn fan_covers_grid() {
        for (d, k) in [(5, 2), (7, 3), (9, 4)] {
            let f = fan(d, k);
            let rays = f.interior_rays();
            for lp in 1..=12i64 {
                for l in 1..=12i64 {
                    let t = rat(l, lp);
                    let inside = f.cones.iter().filter(|c| c.contains_direction(&t)).count();
                    let on_ray = rays.iter().any(|r| r.at(&t).is_zero());
                    assert_eq!(inside + usize::from(on_ray), 1, "t={t}");
                }
            }
        }
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn symbolic_replay_matches_concrete(
            sd in crate::splitting::tests_support::valid_sd()
                .prop_filter("small d", |s| s.d <= 12)
        ) {
            let f = fan(sd.d, sd.k);
            let t = &sd.l / &sd.lp;
            let q = crate::splitting::qpp(&sd).unwrap();
            let (red, word) = reduce_to_sigma(&q, DEFAULT_ITERATION_CAP).unwrap();
            if let Some(c) = f.cones.iter().find(|c| c.contains_direction(&t)) {
                prop_assert_eq!(&c.word.moves, &word.moves);
                prop_assert_eq!(c.reduced.eval(&sd.lp, &sd.l), red);
            } else {
                prop_assert!(f.interior_rays().iter().any(|r| r.at(&t).is_zero()));
            }
        }
    }
}

