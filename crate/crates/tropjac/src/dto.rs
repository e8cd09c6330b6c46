//! Serializable views of the core types.
//!
//! Rationals are strings `"p/q"` or `"p"`, matrices are row-major arrays of
//! such strings.

use serde::{Deserialize, Serialize};
use tropjac_core::exact::{parse_rational, IntMatrix, Matrix, RatMatrix};
use tropjac_core::form::QuadForm2;
use tropjac_core::locus::{FanCone, FanDelta, ImageCone, LinForm};
use tropjac_core::reconstruct::{Cover, CoverPair, GraphEdge, PipelineTrace, Vertex};
use tropjac_core::selling::{Move, ReductionWord, SellingParams, TropicalCurveResult};
use tropjac_core::splitting::{SplitDiagram, SplittingData};
use tropjac_core::tav::{IntegralTorus, TavMorphism};
use tropjac_core::{Integer, Rational};

use crate::error::CliError;

pub type MatrixDto = Vec<Vec<String>>;

pub fn q(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_q(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Input(format!("not an exact rational: {s:?}")))
}

pub fn matrix<T: ToString + Clone>(m: &Matrix<T>) -> MatrixDto {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

pub fn parse_rat_matrix(m: &MatrixDto) -> Result<RatMatrix, CliError> {
    let rows = m.iter().map(|r| r.iter().map(|s| parse_q(s)).collect()).collect::<Result<_, _>>()?;
    Ok(Matrix::from_rows(rows)?)
}

pub fn parse_int_matrix(m: &MatrixDto) -> Result<IntMatrix, CliError> {
    let r = parse_rat_matrix(m)?;
    tropjac_core::exact::to_integer(&r).ok_or_else(|| CliError::Input("expected an integer matrix".into()))
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SplittingDto {
    pub d: u64,
    pub k: u64,
    pub lp: String,
    pub l: String,
}

impl From<&SplittingData> for SplittingDto {
    fn from(s: &SplittingData) -> Self {
        SplittingDto { d: s.d, k: s.k, lp: q(&s.lp), l: q(&s.l) }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FormDto {
    pub q11: String,
    pub q12: String,
    pub q22: String,
}

impl From<&QuadForm2> for FormDto {
    fn from(f: &QuadForm2) -> Self {
        FormDto { q11: q(&f.q11), q12: q(&f.q12), q22: q(&f.q22) }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ParamsDto {
    pub p12: String,
    pub p13: String,
    pub p23: String,
}

impl From<&SellingParams> for ParamsDto {
    fn from(p: &SellingParams) -> Self {
        ParamsDto { p12: q(&p.p12), p13: q(&p.p13), p23: q(&p.p23) }
    }
}

fn move_name(m: Move) -> String {
    match m {
        Move::T1 => "T1",
        Move::T2 => "T2",
    }
    .to_string()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct WordDto {
    pub preflip: bool,
    pub moves: Vec<String>,
    pub pairs: Vec<(u64, u64)>,
    /// Reverse order of application, ending with the first `T1` count.
    pub counts: Vec<u64>,
    pub stab: MatrixDto,
    pub matrix: MatrixDto,
}

impl From<&ReductionWord> for WordDto {
    fn from(w: &ReductionWord) -> Self {
        WordDto {
            preflip: w.preflip,
            moves: w.moves.iter().map(|&m| move_name(m)).collect(),
            pairs: w.pairs(),
            counts: w.counts(),
            stab: matrix(&w.stab),
            matrix: matrix(&w.matrix()),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CurveDto {
    Theta { le: String, le1: String, le2: String },
    Dumbbell { lc1: String, lc2: String },
}

impl From<&TropicalCurveResult> for CurveDto {
    fn from(c: &TropicalCurveResult) -> Self {
        match c {
            TropicalCurveResult::Theta { le, le1, le2 } => {
                CurveDto::Theta { le: q(le), le1: q(le1), le2: q(le2) }
            }
            TropicalCurveResult::DumbbellFamily { lc1, lc2 } => CurveDto::Dumbbell { lc1: q(lc1), lc2: q(lc2) },
        }
    }
}

impl CurveDto {
    pub fn type_name(&self) -> &'static str {
        match self {
            CurveDto::Theta { .. } => "theta",
            CurveDto::Dumbbell { .. } => "dumbbell",
        }
    }

    pub fn lengths(&self) -> Vec<String> {
        match self {
            CurveDto::Theta { le, le1, le2 } => vec![le.clone(), le1.clone(), le2.clone()],
            CurveDto::Dumbbell { lc1, lc2 } => vec![lc1.clone(), lc2.clone()],
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SetMatrixDto {
    pub input: SplittingDto,
    pub qpp: FormDto,
    pub matrix: MatrixDto,
    pub det: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SellingDto {
    pub input: FormDto,
    pub qreduced: FormDto,
    pub params: ParamsDto,
    pub word: WordDto,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FdDto {
    pub input: FormDto,
    pub qreduced: FormDto,
    pub qtilde: FormDto,
    /// `(l1, l2, l3)` of `qtilde`.
    pub sigma: [String; 3],
    pub stab: MatrixDto,
    /// `Xᵀ·input·X = qtilde`.
    pub transform: MatrixDto,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TraceDto {
    pub input: SplittingDto,
    pub qpp: FormDto,
    pub qreduced: FormDto,
    pub params: ParamsDto,
    pub word: WordDto,
    pub qtilde: FormDto,
    pub transform: MatrixDto,
    pub curve: CurveDto,
    pub period_matrix: MatrixDto,
}

impl TraceDto {
    pub fn new(t: &PipelineTrace, period: &QuadForm2) -> Self {
        TraceDto {
            input: (&t.sd).into(),
            qpp: (&t.qpp).into(),
            qreduced: (&t.qreduced).into(),
            params: (&t.params).into(),
            word: (&t.word).into(),
            qtilde: (&t.qtilde).into(),
            transform: matrix(&t.transform),
            curve: (&t.curve).into(),
            period_matrix: matrix(&period.to_matrix()),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EdgeDto {
    pub id: String,
    pub from: String,
    pub to: String,
    /// `null` for the bridge, whose length is a free parameter.
    pub length: Option<String>,
    pub cycle_vector: (i64, i64),
}

impl From<&GraphEdge> for EdgeDto {
    fn from(e: &GraphEdge) -> Self {
        EdgeDto {
            id: e.id.name().into(),
            from: e.from.name().into(),
            to: e.to.name().into(),
            length: e.length.as_ref().map(q),
            cycle_vector: e.cycle_vector,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EdgeMapDto {
    pub edge: String,
    pub slope: String,
    /// Image of the edge's start, as a fraction of the target circle.
    pub offset: String,
    pub length: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CoverDto {
    pub target_length: String,
    pub degree: String,
    pub harmonic: bool,
    pub local_degree: [(String, String); 2],
    pub maps: Vec<EdgeMapDto>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CoversDto {
    pub input: SplittingDto,
    pub curve: CurveDto,
    pub edges: Vec<EdgeDto>,
    pub to_eprime: CoverDto,
    pub to_e: CoverDto,
}

fn cover_dto(pair: &CoverPair, c: &Cover) -> CoverDto {
    let vs = [Vertex::P0, Vertex::P1];
    CoverDto {
        target_length: q(&c.target_length),
        degree: pair.degree(c).to_string(),
        harmonic: vs.iter().all(|&v| pair.is_harmonic(c, v)),
        local_degree: vs.map(|v| (v.name().to_string(), pair.local_degree(c, v).to_string())),
        maps: c
            .maps
            .iter()
            .map(|m| EdgeMapDto {
                edge: m.edge.name().into(),
                slope: m.slope.to_string(),
                offset: q(&m.offset),
                length: pair.edges.iter().find(|e| e.id == m.edge).and_then(|e| e.length.as_ref()).map(q),
            })
            .collect(),
    }
}

impl CoversDto {
    pub fn new(t: &PipelineTrace, pair: &CoverPair) -> Self {
        CoversDto {
            input: (&t.sd).into(),
            curve: (&t.curve).into(),
            edges: pair.edges.iter().map(Into::into).collect(),
            to_eprime: cover_dto(pair, &pair.to_eprime),
            to_e: cover_dto(pair, &pair.to_e),
        }
    }
}

fn point(p: &(Rational, Rational)) -> (String, String) {
    (q(&p.0), q(&p.1))
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct DiagramDto {
    pub input: SplittingDto,
    pub zeta: MatrixDto,
    pub zeta_type: Vec<String>,
    pub f1: MatrixDto,
    pub f2: MatrixDto,
    pub g1: MatrixDto,
    pub g2: MatrixDto,
    pub phi: MatrixDto,
    pub phitilde: MatrixDto,
    pub identities_hold: bool,
    /// `ker φ` in the coordinates of `E' × E` scaled to `ℝ²/ℤ²`.
    pub kernel: Vec<(String, String)>,
    /// The subgroup `G` in raw coordinates.
    pub torsion_graph: Vec<(String, String)>,
}

impl DiagramDto {
    pub fn new(
        sd: &SplittingData,
        zeta: &IntMatrix,
        zeta_type: &[Integer],
        dg: &SplitDiagram,
        kernel: &[(Rational, Rational)],
        graph: &[(Rational, Rational)],
    ) -> Self {
        DiagramDto {
            input: sd.into(),
            zeta: matrix(zeta),
            zeta_type: zeta_type.iter().map(ToString::to_string).collect(),
            f1: matrix(&dg.f1),
            f2: matrix(&dg.f2),
            g1: matrix(&dg.g1),
            g2: matrix(&dg.g2),
            phi: matrix(&dg.phi),
            phitilde: matrix(&dg.phitilde),
            identities_hold: dg.identities_hold(),
            kernel: kernel.iter().map(point).collect(),
            torsion_graph: graph.iter().map(point).collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TorusDto {
    pub pairing: MatrixDto,
}

/// Input and output shape of a morphism of tropical abelian varieties.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MorphismDto {
    pub source: TorusDto,
    pub target: TorusDto,
    pub msharp: MatrixDto,
    pub mflat: MatrixDto,
}

impl From<&TavMorphism> for MorphismDto {
    fn from(f: &TavMorphism) -> Self {
        MorphismDto {
            source: TorusDto { pairing: matrix(f.source().pairing()) },
            target: TorusDto { pairing: matrix(f.target().pairing()) },
            msharp: matrix(f.msharp()),
            mflat: matrix(f.mflat()),
        }
    }
}

impl MorphismDto {
    pub fn to_core(&self) -> Result<TavMorphism, CliError> {
        let source = IntegralTorus::new(parse_rat_matrix(&self.source.pairing)?)?;
        let target = IntegralTorus::new(parse_rat_matrix(&self.target.pairing)?)?;
        Ok(TavMorphism::new(source, target, parse_int_matrix(&self.msharp)?, parse_int_matrix(&self.mflat)?)?)
    }
}

/// Input file of `mumford` and `adjoint`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MorphismInput {
    pub morphism: MorphismDto,
    pub z1: MatrixDto,
    #[serde(default)]
    pub z2: Option<MatrixDto>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MumfordDto {
    pub induced: bool,
    /// `A·B⁻¹`.
    pub m: MatrixDto,
    pub zeta2: Option<MatrixDto>,
    pub zeta2_type: Option<Vec<String>>,
    /// `f^* ζ₂`, equal to `z1` when induced.
    pub pullback: Option<MatrixDto>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct AdjointDto {
    pub adjoint: MorphismDto,
    /// Components of the adjoint composed with the input morphism.
    pub composite_sharp: MatrixDto,
    pub composite_flat: MatrixDto,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct LinFormDto {
    /// Coefficient of `lp`.
    pub lp: String,
    /// Coefficient of `l`.
    pub l: String,
    pub text: String,
}

impl From<&LinForm> for LinFormDto {
    fn from(f: &LinForm) -> Self {
        LinFormDto { lp: q(&f.a), l: q(&f.b), text: f.to_string() }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ConeDto {
    pub moves: Vec<String>,
    pub pairs: Vec<(u64, u64)>,
    pub inequalities: Vec<LinFormDto>,
    pub rays: [LinFormDto; 2],
    /// Bounds on `l / lp`; `null` upper bound is the `l` axis.
    pub lower: String,
    pub upper: Option<String>,
    pub sample: (String, String),
    pub phi_sigma: [LinFormDto; 3],
}

impl From<&FanCone> for ConeDto {
    fn from(c: &FanCone) -> Self {
        ConeDto {
            moves: c.word.moves.iter().map(|&m| move_name(m)).collect(),
            pairs: c.word.pairs(),
            inequalities: c.inequalities.iter().map(Into::into).collect(),
            rays: [(&c.rays[0]).into(), (&c.rays[1]).into()],
            lower: q(&c.lower),
            upper: c.upper.as_ref().map(q),
            sample: point(&c.sample),
            phi_sigma: [(&c.phi_sigma[0]).into(), (&c.phi_sigma[1]).into(), (&c.phi_sigma[2]).into()],
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BoundaryRayDto {
    pub pairs: Vec<(u64, u64)>,
    pub form: LinFormDto,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FanDto {
    pub d: u64,
    pub k: u64,
    pub cones: Vec<ConeDto>,
    pub interior_rays: Vec<LinFormDto>,
    pub boundary_rays: Vec<BoundaryRayDto>,
}

impl FanDto {
    pub fn new(f: &FanDelta, boundary: &[(ReductionWord, LinForm)]) -> Self {
        FanDto {
            d: f.d,
            k: f.k,
            cones: f.cones.iter().map(Into::into).collect(),
            interior_rays: f.interior_rays().iter().map(Into::into).collect(),
            boundary_rays: boundary
                .iter()
                .map(|(w, r)| BoundaryRayDto { pairs: w.pairs(), form: r.into() })
                .collect(),
        }
    }
}

pub type ImageConeDto = [[String; 3]; 2];

pub fn image_cone(c: &ImageCone) -> ImageConeDto {
    c.clone().map(|v| v.map(|x| q(&x)))
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CompareDto {
    pub d: u64,
    pub k1: u64,
    pub k2: u64,
    pub same_image: bool,
    pub images1: Vec<ImageConeDto>,
    pub images2: Vec<ImageConeDto>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub lp: String,
    pub l: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub lengths: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ErrorDto {
    pub error: ErrorBody,
}
