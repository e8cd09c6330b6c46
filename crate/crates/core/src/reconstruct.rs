//! From splitting data to the genus-2 curve and its two covers.
//!
//! The theta graph has vertices `P0`, `P1` and edges `e: P1 → P0`,
//! `e1, e2: P0 → P1`; its cycle basis is `(e + e2, e2 - e1)`. The dumbbell
//! has loops `e1` at `P0`, `e2` at `P1` and a bridge `P0 → P1` of free
//! length `t`.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{inv2, to_rational, IntMatrix, Integer, RatMatrix, Rational};
use crate::form::QuadForm2;
use crate::selling::{
    classify_curve, fd_representative, flip_matrix, selling_reduce, ReductionWord, SellingParams,
    TropicalCurveResult,
};
use crate::splitting::{build_diagram, qpp, qpp_unflipped, SplittingData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineTrace {
    pub sd: SplittingData,
    pub qpp: QuadForm2,
    /// Selling reduction of `qpp`.
    pub qreduced: QuadForm2,
    pub params: SellingParams,
    /// Includes the stabilizer element applied last.
    pub word: ReductionWord,
    pub qtilde: QuadForm2,
    /// `Xᵀ·qpp·X = qtilde`.
    pub transform: IntMatrix,
    pub curve: TropicalCurveResult,
}

pub fn torelli_preimage(sd: &SplittingData, cap: usize) -> Result<PipelineTrace> {
    let q = qpp(sd)?;
    let (qreduced, mut word) = selling_reduce(&q, cap)?;
    let (qtilde, stab) = fd_representative(&qreduced)?;
    word.stab = stab;
    let transform = word.matrix();
    if q.act(&transform) != qtilde || qtilde.det() != &sd.lp * &sd.l {
        return Err(Error::InternalInconsistency("reduction word does not reproduce the F-representative"));
    }
    let curve = classify_curve(&qtilde)?;
    Ok(PipelineTrace {
        sd: sd.clone(),
        qpp: q,
        params: SellingParams::of(&qreduced),
        qreduced,
        word,
        qtilde,
        transform,
        curve,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Theta,
    Dumbbell,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodMatrix {
    pub form: QuadForm2,
    pub kind: CurveKind,
}

/// Intersection form on the cycle basis. The bridge length `t` only has
/// to be non-negative; it does not enter the result.
pub fn period_matrix(curve: &TropicalCurveResult, t: Option<&Rational>) -> Result<PeriodMatrix> {
    if t.is_some_and(Signed::is_negative) {
        return Err(Error::NonPositiveLength);
    }
    match curve {
        TropicalCurveResult::Theta { le, le1, le2 } => {
            if !(le.is_positive() && le1.is_positive() && le2.is_positive()) {
                return Err(Error::NonPositiveLength);
            }
            Ok(PeriodMatrix {
                form: QuadForm2::new(le + le2, le2.clone(), le1 + le2),
                kind: CurveKind::Theta,
            })
        }
        TropicalCurveResult::DumbbellFamily { lc1, lc2 } => {
            if !(lc1.is_positive() && lc2.is_positive()) {
                return Err(Error::NonPositiveLength);
            }
            Ok(PeriodMatrix {
                form: QuadForm2::new(lc1.clone(), Rational::zero(), lc2.clone()),
                kind: CurveKind::Dumbbell,
            })
        }
    }
}

/// `a ∈ 1..d` with `a·l = (d - a)·lp`.
fn boundary_witness(sd: &SplittingData) -> Option<u64> {
    let a = Rational::from_integer(sd.d_int()) * &sd.lp / (&sd.lp + &sd.l);
    if !a.is_integer() {
        return None;
    }
    u64::try_from(a.to_integer()).ok().filter(|&a| a >= 1 && a < sd.d)
}

/// The witness `α` with `α·l = (d-α)·lp`, for `k = 1`.
pub fn boundary_test_k1(sd: &SplittingData) -> Result<Option<u64>> {
    sd.validate()?;
    if sd.k != 1 {
        return Err(Error::WrongK { d: sd.d, k: sd.k });
    }
    Ok(boundary_witness(sd))
}

/// The witness `β` with `β·l = (d-β)·lp`, for `k = d - 1` and `d ≥ 3`.
pub fn boundary_test_kd1(sd: &SplittingData) -> Result<Option<u64>> {
    if sd.d < 3 || sd.k + 1 != sd.d {
        return Err(Error::WrongK { d: sd.d, k: sd.k });
    }
    sd.validate()?;
    Ok(boundary_witness(sd))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeId {
    E,
    E1,
    E2,
    Bridge,
}

impl EdgeId {
    pub fn name(self) -> &'static str {
        match self {
            EdgeId::E => "e",
            EdgeId::E1 => "e1",
            EdgeId::E2 => "e2",
            EdgeId::Bridge => "bridge",
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    P0,
    P1,
}

impl Vertex {
    pub fn name(self) -> &'static str {
        match self {
            Vertex::P0 => "P0",
            Vertex::P1 => "P1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub id: EdgeId,
    pub from: Vertex,
    pub to: Vertex,
    /// `None` for the bridge, whose length is the family parameter.
    pub length: Option<Rational>,
    /// Coefficients in the cycle basis.
    pub cycle_vector: (i64, i64),
}

/// Edges of the curve with the orientations of the module docs.
pub fn curve_edges(curve: &TropicalCurveResult) -> Vec<GraphEdge> {
    let edge = |id, from, to, length: Option<&Rational>, v| GraphEdge {
        id,
        from,
        to,
        length: length.cloned(),
        cycle_vector: v,
    };
    use Vertex::{P0, P1};
    match curve {
        TropicalCurveResult::Theta { le, le1, le2 } => alloc::vec![
            edge(EdgeId::E, P1, P0, Some(le), (1, 0)),
            edge(EdgeId::E1, P0, P1, Some(le1), (0, -1)),
            edge(EdgeId::E2, P0, P1, Some(le2), (1, 1)),
        ],
        TropicalCurveResult::DumbbellFamily { lc1, lc2 } => alloc::vec![
            edge(EdgeId::E1, P0, P0, Some(lc1), (1, 0)),
            edge(EdgeId::E2, P1, P1, Some(lc2), (0, 1)),
            edge(EdgeId::Bridge, P0, P1, None, (0, 0)),
        ],
    }
}

/// `τ ↦ offset·L + slope·τ` on an edge of the curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMap {
    pub edge: EdgeId,
    pub slope: Integer,
    /// Image of the start of the edge in `ℝ/ℤ`.
    pub offset: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub target_length: Rational,
    pub maps: Vec<EdgeMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPair {
    pub d: u64,
    pub edges: Vec<GraphEdge>,
    /// `φ': Γ → E'`.
    pub to_eprime: Cover,
    /// `φ: Γ → E`.
    pub to_e: Cover,
}

impl CoverPair {
    pub fn covers(&self) -> [&Cover; 2] {
        [&self.to_eprime, &self.to_e]
    }

    fn slope(&self, cover: &Cover, id: EdgeId) -> Integer {
        cover.maps.iter().find(|m| m.edge == id).map(|m| m.slope.clone()).unwrap_or_default()
    }

    /// Outgoing derivatives at `v`, one per tangent direction.
    pub fn directions(&self, cover: &Cover, v: Vertex) -> Vec<Integer> {
        let mut out = Vec::new();
        for e in &self.edges {
            let s = self.slope(cover, e.id);
            if e.from == v {
                out.push(s.clone());
            }
            if e.to == v {
                out.push(-s);
            }
        }
        out
    }

    /// Sum of the positive outgoing derivatives at `v`.
    pub fn local_degree(&self, cover: &Cover, v: Vertex) -> Integer {
        self.directions(cover, v).into_iter().filter(Signed::is_positive).sum()
    }

    /// Both tangent directions of the circle receive the same total weight.
    pub fn is_harmonic(&self, cover: &Cover, v: Vertex) -> bool {
        self.directions(cover, v).into_iter().sum::<Integer>().is_zero()
    }

    pub fn vertex_image(&self, cover: &Cover, v: Vertex) -> Rational {
        for e in &self.edges {
            let m = cover.maps.iter().find(|m| m.edge == e.id).expect("edge without map");
            if e.from == v {
                return m.offset.clone();
            }
            if e.to == v {
                let len = e.length.clone().unwrap_or_default();
                return frac(&m.offset + Rational::from_integer(m.slope.clone()) * len / &cover.target_length);
            }
        }
        Rational::zero()
    }

    /// Number of preimages of a generic point, counted with slope.
    pub fn degree(&self, cover: &Cover) -> Integer {
        let images = [self.vertex_image(cover, Vertex::P0), self.vertex_image(cover, Vertex::P1)];
        let n = 1009i64;
        let y = (1..n)
            .map(|m| Rational::new(m.into(), n.into()))
            .find(|y| !images.contains(y))
            .expect("a generic point exists");
        let mut total = Integer::zero();
        for e in &self.edges {
            let m = cover.maps.iter().find(|m| m.edge == e.id).expect("edge without map");
            if m.slope.is_zero() {
                continue;
            }
            let len = e.length.clone().unwrap_or_default() / &cover.target_length;
            let s = Rational::from_integer(m.slope.clone());
            // offset + s·τ ≡ y (mod 1) for τ ∈ (0, len)
            let a = &m.offset - &y;
            let (lo, hi) = if s.is_positive() { (a.clone(), a + s * len) } else { (a.clone() + s * len, a) };
            let count = hi.ceil().to_integer() - lo.floor().to_integer() - 1;
            total += count * m.slope.abs();
        }
        total
    }
}

fn frac(x: Rational) -> Rational {
    &x - x.floor()
}

/// The two degree-`d` covers `Γ → E'` and `Γ → E`.
pub fn build_covers(trace: &PipelineTrace) -> Result<CoverPair> {
    let sd = &trace.sd;
    let diagram = build_diagram(sd)?;
    if !diagram.identities_hold() {
        return Err(Error::InternalInconsistency("g_i ∘ f_i is not d"));
    }
    let period = period_matrix(&trace.curve, None)?;
    // identification of H₁(Γ) with the lattice of J^pp
    let flip = flip_matrix();
    let y = &(&flip * &trace.transform) * &flip;
    let gram = qpp_unflipped(sd)?;
    if gram.act(&y) != period.form {
        return Err(Error::InternalInconsistency("period matrix differs from the reduced form"));
    }
    let yr = to_rational(&y);
    let y_inv_t = inv2(&yr)?.transpose();
    let gram_inv = inv2(&gram.to_matrix())?;
    let edges = curve_edges(&trace.curve);

    let derivative = |v: (i64, i64)| -> RatMatrix {
        let v = RatMatrix::from_fn(2, 1, |r, _| Rational::from_integer(if r == 0 { v.0 } else { v.1 }.into()));
        &gram_inv * &(&y_inv_t * &v)
    };
    let p1 = match &trace.curve {
        TropicalCurveResult::Theta { le2, .. } => derivative((1, 1)).scale(le2),
        TropicalCurveResult::DumbbellFamily { .. } => RatMatrix::zero(2, 1),
    };
    let position = |v: Vertex| match v {
        Vertex::P0 => RatMatrix::zero(2, 1),
        Vertex::P1 => p1.clone(),
    };

    let cover = |g: &RatMatrix, target: &Rational| -> Result<Cover> {
        let mut maps = Vec::new();
        for e in &edges {
            let s = (g * &derivative(e.cycle_vector))[(0, 0)].clone() * target;
            if !s.is_integer() {
                return Err(Error::NonIntegralSlope);
            }
            let offset = frac((g * &position(e.from))[(0, 0)].clone());
            let end = frac((g * &position(e.to))[(0, 0)].clone());
            if let Some(len) = &e.length {
                if frac(&offset + &s * len / target) != end {
                    return Err(Error::InternalInconsistency("edge image does not close up"));
                }
            } else if !s.is_zero() {
                return Err(Error::InternalInconsistency("bridge is not contracted"));
            }
            maps.push(EdgeMap { edge: e.id, slope: s.to_integer(), offset });
        }
        Ok(Cover { target_length: target.clone(), maps })
    };
    let pair = CoverPair {
        d: sd.d,
        to_eprime: cover(&diagram.g1, &sd.lp)?,
        to_e: cover(&diagram.g2, &sd.l)?,
        edges,
    };
    let d = sd.d_int();
    for c in pair.covers() {
        let harmonic = [Vertex::P0, Vertex::P1].iter().all(|&v| pair.is_harmonic(c, v));
        if !harmonic || pair.degree(c) != d {
            return Err(Error::InternalInconsistency("cover is not harmonic of degree d"));
        }
    }
    Ok(pair)
}

/// `gcd` of the slopes of a cover, which is 1 for a cover that does not
/// factor through a multiplication map.
pub fn slope_gcd(cover: &Cover) -> Integer {
    cover.maps.iter().fold(Integer::zero(), |g, m| g.gcd(&m.slope))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, rat_int};
    use crate::selling::{in_f, reduce_to_sigma, DEFAULT_ITERATION_CAP};
    use crate::splitting::tests_support::valid_sd;
    use proptest::prelude::*;

    fn sd(d: u64, k: u64, lp: i64, l: i64) -> SplittingData {
        SplittingData::new(d, k, rat_int(lp), rat_int(l)).unwrap()
    }

    fn run(s: &SplittingData) -> PipelineTrace {
        torelli_preimage(s, DEFAULT_ITERATION_CAP).unwrap()
    }

    #[test]
    fn pipeline_examples() {
        assert_eq!(
            run(&sd(2, 1, 1, 3)).curve,
            TropicalCurveResult::Theta { le: rat_int(1), le1: rat_int(1), le2: rat_int(1) }
        );
        let t = run(&sd(18, 7, 3, 1));
        assert_eq!(
            t.curve,
            TropicalCurveResult::Theta { le: rat(11, 9), le1: rat(5, 3), le2: rat(1, 3) }
        );
        assert_eq!(t.word.counts(), [1, 2]);
        assert_eq!(t.qpp.act(&t.transform), t.qtilde);
        for (d, lc1, lc2) in [(16, rat(1, 2), rat_int(30)), (24, rat(1, 3), rat_int(45))] {
            let t = run(&sd(d, 1, 3, 5));
            assert_eq!(t.curve, TropicalCurveResult::DumbbellFamily { lc1, lc2 });
            assert_eq!(t.qpp.det(), rat_int(15));
            assert_eq!(t.qtilde.det(), rat_int(15));
        }
    }

    #[test]
    fn period_matrices() {
        let theta = TropicalCurveResult::Theta { le: rat_int(1), le1: rat_int(1), le2: rat_int(1) };
        let p = period_matrix(&theta, None).unwrap();
        assert_eq!(p.form, QuadForm2::new(rat_int(2), rat_int(1), rat_int(2)));
        assert_eq!(p.kind, CurveKind::Theta);
        let db = TropicalCurveResult::DumbbellFamily { lc1: rat(1, 2), lc2: rat_int(30) };
        let p = period_matrix(&db, Some(&rat_int(7))).unwrap();
        assert_eq!(p.form, QuadForm2::new(rat(1, 2), rat_int(0), rat_int(30)));
        assert_eq!(period_matrix(&db, Some(&rat_int(-1))), Err(Error::NonPositiveLength));
        let bad = TropicalCurveResult::Theta { le: rat_int(0), le1: rat_int(1), le2: rat_int(1) };
        assert_eq!(period_matrix(&bad, None), Err(Error::NonPositiveLength));
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(boundary_test_k1(&sd(16, 1, 3, 5)).unwrap(), Some(6));
        assert_eq!(boundary_test_k1(&sd(24, 1, 3, 5)).unwrap(), Some(9));
        assert_eq!(boundary_test_k1(&sd(2, 1, 1, 3)).unwrap(), None);
        assert_eq!(boundary_test_k1(&sd(5, 2, 1, 3)), Err(Error::WrongK { d: 5, k: 2 }));
        assert_eq!(boundary_test_kd1(&sd(3, 2, 1, 2)).unwrap(), Some(1));
        assert!(matches!(run(&sd(3, 2, 1, 2)).curve, TropicalCurveResult::DumbbellFamily { .. }));
        assert_eq!(boundary_test_kd1(&sd(3, 2, 1, 1)).unwrap(), None);
        assert_eq!(boundary_test_kd1(&sd(2, 1, 1, 1)), Err(Error::WrongK { d: 2, k: 1 }));
    }

    #[test]
    fn covers_for_d2() {
        let pair = build_covers(&run(&sd(2, 1, 1, 3))).unwrap();
        let slopes = |c: &Cover| c.maps.iter().map(|m| m.slope.clone()).collect::<Vec<_>>();
        assert_eq!(slopes(&pair.to_eprime), [int(1), int(0), int(1)]);
        let mags: Vec<_> = slopes(&pair.to_e).iter().map(Signed::abs).collect();
        assert_eq!(mags, [int(1), int(2), int(1)]);
        for c in pair.covers() {
            assert_eq!(pair.degree(c), int(2));
            assert_eq!(slope_gcd(c), int(1));
        }
        // P0 is one of two preimages of its image under φ', a ramification point of φ
        assert_eq!(pair.local_degree(&pair.to_eprime, Vertex::P0), int(1));
        assert_eq!(pair.local_degree(&pair.to_e, Vertex::P0), int(2));
        // e runs from P1 back to P0: the offset is the image of P1
        assert_eq!(pair.to_eprime.maps[0].offset, rat_int(0));
        assert_eq!(pair.vertex_image(&pair.to_e, Vertex::P1), rat(1, 3));
    }

    #[test]
    fn dumbbell_covers() {
        let pair = build_covers(&run(&sd(16, 1, 3, 5))).unwrap();
        for c in pair.covers() {
            let bridge = c.maps.iter().find(|m| m.edge == EdgeId::Bridge).unwrap();
            assert!(bridge.slope.is_zero());
            assert!(c.maps.iter().all(|m| m.offset.is_zero()));
            assert_eq!(pair.degree(c), int(16));
        }
    }

    /// `Σ slope²·length = d·L` for a harmonic cover of degree `d`.
    fn energy(pair: &CoverPair, c: &Cover) -> Rational {
        pair.edges
            .iter()
            .zip(&c.maps)
            .filter_map(|(e, m)| {
                e.length.as_ref().map(|len| Rational::from_integer(&m.slope * &m.slope) * len)
            })
            .sum()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn round_trip(s in valid_sd()) {
            let t = run(&s);
            let p = period_matrix(&t.curve, None).unwrap();
            let (red, _) = reduce_to_sigma(&p.form.flip(), DEFAULT_ITERATION_CAP).unwrap();
            let (f_rep, _) = fd_representative(&red).unwrap();
            prop_assert_eq!(&f_rep, &t.qtilde);
            prop_assert!(in_f(&t.qtilde));
        }

        #[test]
        fn covers_are_harmonic_of_degree_d(s in valid_sd()) {
            let pair = build_covers(&run(&s)).unwrap();
            let d = s.d_int();
            for (c, len) in [(&pair.to_eprime, &s.lp), (&pair.to_e, &s.l)] {
                prop_assert_eq!(pair.degree(c), d.clone());
                prop_assert!(pair.is_harmonic(c, Vertex::P0) && pair.is_harmonic(c, Vertex::P1));
                prop_assert_eq!(energy(&pair, c), Rational::from_integer(d.clone()) * len);
            }
        }

        #[test]
        fn k1_witness_matches_pipeline(d in 2u64..13, a in 1i64..9, b in 1i64..9, c in 1i64..9, e in 1i64..9) {
            let s = SplittingData::new(d, 1, rat(a, b), rat(c, e)).unwrap();
            let oracle = (1..d).find(|&al| {
                Rational::from_integer(al.into()) * &s.l == Rational::from_integer((d - al).into()) * &s.lp
            });
            let w = boundary_test_k1(&s).unwrap();
            prop_assert_eq!(w, oracle);
            let dumbbell = matches!(run(&s).curve, TropicalCurveResult::DumbbellFamily { .. });
            prop_assert_eq!(w.is_some(), dumbbell);
        }
    }
}
