//! Selling reduction, the stabilizer of the Selling cone `σ`, the
//! fundamental domain `F ⊂ σ` and the curve type read off from it.
//!
//! `σ` is spanned by `diag(1,0)`, `diag(0,1)` and `[[1,-1],[-1,1]]`. A form
//! lies in `σ` exactly when its three Selling parameters are `≤ 0`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::exact::{int, rat_int, IntMatrix, Rational};
pub use crate::form::QuadForm2;

pub const DEFAULT_ITERATION_CAP: usize = 10_000;

/// `(q12, -q11-q12, -q22-q12)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SellingParams {
    pub p12: Rational,
    pub p13: Rational,
    pub p23: Rational,
}

impl SellingParams {
    pub fn of(q: &QuadForm2) -> Self {
        SellingParams {
            p12: q.q12.clone(),
            p13: -(&q.q11 + &q.q12),
            p23: -(&q.q22 + &q.q12),
        }
    }

    pub fn to_array(&self) -> [Rational; 3] {
        [self.p12.clone(), self.p13.clone(), self.p23.clone()]
    }

    pub fn all_nonpositive(&self) -> bool {
        !self.p12.is_positive() && !self.p13.is_positive() && !self.p23.is_positive()
    }
}

/// Elementary reduction moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// `[[1,0],[1,1]]`
    T1,
    /// `[[1,1],[0,1]]`
    T2,
}

impl Move {
    pub fn matrix(self) -> IntMatrix {
        match self {
            Move::T1 => IntMatrix::m2(int(1), int(0), int(1), int(1)),
            Move::T2 => IntMatrix::m2(int(1), int(1), int(0), int(1)),
        }
    }
}

pub fn flip_matrix() -> IntMatrix {
    IntMatrix::m2(int(1), int(0), int(0), int(-1))
}

/// The transformation linking an input form to its reduction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReductionWord {
    pub preflip: bool,
    /// In order of application.
    pub moves: Vec<Move>,
    pub stab: IntMatrix,
}

impl Default for ReductionWord {
    fn default() -> Self {
        ReductionWord { preflip: false, moves: Vec::new(), stab: IntMatrix::identity(2) }
    }
}

impl ReductionWord {
    /// `X` with `Xᵀ Q₀ X` the final form.
    pub fn matrix(&self) -> IntMatrix {
        let start = if self.preflip { flip_matrix() } else { IntMatrix::identity(2) };
        let x = self.moves.iter().fold(start, |x, m| &x * &m.matrix());
        &x * &self.stab
    }

    /// Runs `(α₁, β₁), …, (αₙ, βₙ)` in application order: `αᵢ` moves of type
    /// `T1` followed by `βᵢ` of type `T2`. `α₁` is zero when the word starts
    /// with `T2`, `βₙ` is zero when it ends with `T1`.
    pub fn pairs(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        let mut prev = None;
        for &m in &self.moves {
            match (prev, m) {
                (None, Move::T1) | (Some(Move::T2), Move::T1) => out.push((1, 0)),
                (None, Move::T2) => out.push((0, 1)),
                (Some(Move::T1), Move::T1) => out.last_mut().unwrap().0 += 1,
                (Some(_), Move::T2) => out.last_mut().unwrap().1 += 1,
            }
            prev = Some(m);
        }
        out
    }

    /// Move counts in reverse order of application, ending with the count
    /// of the first run of `T1`. A trailing run of `T1` is not preceded by a
    /// zero count of `T2`.
    pub fn counts(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (i, &(a, b)) in self.pairs().iter().enumerate().rev() {
            if !(i + 1 == self.pairs().len() && b == 0) {
                out.push(b);
            }
            out.push(a);
        }
        out
    }

    /// Inverse of [`ReductionWord::counts`].
    pub fn moves_from_counts(counts: &[u64]) -> Vec<Move> {
        let mut moves = Vec::new();
        // counts[last] is a T1 count; kinds alternate going backwards
        for (i, &c) in counts.iter().enumerate().rev() {
            let kind = if (counts.len() - 1 - i).is_multiple_of(2) { Move::T1 } else { Move::T2 };
            moves.extend(core::iter::repeat_n(kind, c as usize));
        }
        moves
    }
}

/// Which move, if any, Selling's algorithm applies next.
pub fn next_move(p: &SellingParams) -> Option<Move> {
    if p.p13.is_positive() {
        Some(Move::T2)
    } else if p.p23.is_positive() {
        Some(Move::T1)
    } else {
        None
    }
}

/// Reduces a positive definite form with `q12 ≤ 0` into `σ`.
pub fn selling_reduce(q: &QuadForm2, cap: usize) -> Result<(QuadForm2, ReductionWord)> {
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    if q.q12.is_positive() {
        return Err(Error::PositiveQ12);
    }
    let mut cur = q.clone();
    let mut word = ReductionWord::default();
    for _ in 0..=cap {
        match next_move(&SellingParams::of(&cur)) {
            None => return Ok((cur, word)),
            Some(m) => {
                cur = cur.act(&m.matrix());
                word.moves.push(m);
            }
        }
    }
    Err(Error::IterationCapExceeded { cap })
}

/// [`selling_reduce`] preceded by `diag(1,-1)` when `q12 > 0`.
pub fn reduce_to_sigma(q: &QuadForm2, cap: usize) -> Result<(QuadForm2, ReductionWord)> {
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let preflip = q.q12.is_positive();
    let start = if preflip { q.flip() } else { q.clone() };
    let (red, mut word) = selling_reduce(&start, cap)?;
    word.preflip = preflip;
    Ok((red, word))
}

fn sigma_rays() -> [QuadForm2; 3] {
    let r = |a: i64, b: i64, c: i64| QuadForm2::new(rat_int(a), rat_int(b), rat_int(c));
    [r(1, 0, 0), r(0, 0, 1), r(1, -1, 1)]
}

fn canonical_sign(x: IntMatrix) -> IntMatrix {
    let negative = x.entries().find(|e| !e.is_zero()).is_some_and(Signed::is_negative);
    if negative {
        -&x
    } else {
        x
    }
}

/// Matrices `X` with `X • σ = σ`, one per pair `±X`; six in total.
pub fn stab_sigma() -> &'static [IntMatrix] {
    static STAB: OnceBox<Vec<IntMatrix>> = OnceBox::new();
    STAB.get_or_init(|| {
        let rays = sigma_rays();
        let mut out: Vec<IntMatrix> = Vec::new();
        for code in 0..81u32 {
            let e = |i: u32| int((code / 3u32.pow(i) % 3) as i64 - 1);
            let x = IntMatrix::m2(e(0), e(1), e(2), e(3));
            if x.det().abs() != int(1) {
                continue;
            }
            let permutes = rays.iter().all(|r| rays.contains(&r.act(&x)));
            if permutes {
                let x = canonical_sign(x);
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out.sort_by_key(|x| {
            let id = x == &IntMatrix::identity(2);
            (!id, x.entries().map(|e| i64::try_from(e).unwrap()).collect::<Vec<_>>())
        });
        Box::new(out)
    })
}

/// Whether `x` or `-x` is listed by [`stab_sigma`].
pub fn stabilizes_sigma(x: &IntMatrix) -> bool {
    stab_sigma().contains(&canonical_sign(x.clone()))
}

pub fn in_sigma(q: &QuadForm2) -> bool {
    SellingParams::of(q).all_nonpositive()
}

/// `q12 ≤ 0`, `q11 + 2 q12 ≥ 0`, `q22 ≥ q11`.
pub fn in_f(q: &QuadForm2) -> bool {
    !q.q12.is_positive()
        && !(&q.q11 + &q.q12 + &q.q12).is_negative()
        && !(&q.q22 - &q.q11).is_negative()
}

/// Coordinates of `Q ∈ σ` in the ray basis of `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaCoords {
    pub l1: Rational,
    pub l2: Rational,
    pub l3: Rational,
}

impl SigmaCoords {
    pub fn to_form(&self) -> QuadForm2 {
        QuadForm2::new(&self.l1 + &self.l3, -self.l3.clone(), &self.l2 + &self.l3)
    }

    pub fn in_f(&self) -> bool {
        self.l3 <= self.l1 && self.l1 <= self.l2
    }
}

pub fn sigma_coords(q: &QuadForm2) -> Result<SigmaCoords> {
    if !in_sigma(q) {
        return Err(Error::NotInSigma);
    }
    Ok(SigmaCoords { l1: &q.q11 + &q.q12, l2: &q.q22 + &q.q12, l3: -q.q12.clone() })
}

/// The representative of `Q ∈ σ` in `F` and the stabilizer element reaching it.
pub fn fd_representative(q: &QuadForm2) -> Result<(QuadForm2, IntMatrix)> {
    if !in_sigma(q) {
        return Err(Error::NotInSigma);
    }
    for x in stab_sigma() {
        let img = q.act(x);
        if in_f(&img) {
            return Ok((img, x.clone()));
        }
    }
    Err(Error::InternalInconsistency("no stabilizer image lies in F"))
}

/// A genus-2 tropical curve of maximal type, or the one-parameter family of
/// dumbbell curves whose bridge length is free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TropicalCurveResult {
    Theta { le: Rational, le1: Rational, le2: Rational },
    DumbbellFamily { lc1: Rational, lc2: Rational },
}

/// Reads the curve off a form in `σ`.
pub fn classify_curve(q: &QuadForm2) -> Result<TropicalCurveResult> {
    let s = sigma_coords(q)?;
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let zeros = [&s.l1, &s.l2, &s.l3].iter().filter(|l| l.is_zero()).count();
    match zeros {
        0 => Ok(TropicalCurveResult::Theta { le: s.l1, le1: s.l2, le2: s.l3 }),
        1 => {
            let remap = if s.l2.is_zero() {
                IntMatrix::m2(int(-1), int(0), int(-1), int(1))
            } else if s.l1.is_zero() {
                IntMatrix::m2(int(1), int(-1), int(0), int(-1))
            } else {
                IntMatrix::identity(2)
            };
            let diag = q.act(&remap);
            if !diag.q12.is_zero() {
                return Err(Error::InternalInconsistency("boundary form did not diagonalize"));
            }
            Ok(TropicalCurveResult::DumbbellFamily { lc1: diag.q11, lc2: diag.q22 })
        }
        _ => Err(Error::NotPositiveDefinite),
    }
}
