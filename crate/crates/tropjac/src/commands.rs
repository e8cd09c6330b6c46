use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use tropjac_core::exact::{to_integer, IntMatrix};
use tropjac_core::form::QuadForm2;
use tropjac_core::locus::{
    boundary_rays, build_fan, compare_images, default_cone_cap, image_cones, ray_point, FanDelta,
};
use tropjac_core::reconstruct::{build_covers, period_matrix, torelli_preimage};
use tropjac_core::selling::{
    classify_curve, fd_representative, reduce_to_sigma, sigma_coords, DEFAULT_ITERATION_CAP,
};
use tropjac_core::splitting::{
    build_jpp, diagram_of, qpp, to_raw, torus_kernel, zeta_type, SplittingData,
};
use tropjac_core::tav::{adjoint, induce_polarization, polarization_type, pullback_polarization, Inducement};
use tropjac_core::{Error, Rational};

use crate::cli::{Cli, Command, FormArgs, Format, MorphismArgs, SplitArgs};
use crate::dto::*;
use crate::error::CliError;

pub const SWEEP_HEADER: [&str; 6] = ["lp", "l", "type", "len1", "len2", "len3"];

fn splitting(a: &SplitArgs) -> Result<SplittingData, CliError> {
    Ok(SplittingData::new(a.d, a.k, a.lp.0.clone(), a.l.0.clone())?)
}

fn form(a: &FormArgs) -> QuadForm2 {
    QuadForm2::new(a.q11.0.clone(), a.q12.0.clone(), a.q22.0.clone())
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(e.to_string()))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::String(s) => out.push(vec![prefix.to_string(), s.clone()]),
        Value::Null => out.push(vec![prefix.to_string(), String::new()]),
        other => out.push(vec![prefix.to_string(), other.to_string()]),
    }
}

/// `key,value` rows with dotted paths.
pub fn flat_csv<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut rows = Vec::new();
    flatten("", &serde_json::to_value(v)?, &mut rows);
    csv_table(&["key", "value"], rows)
}

fn emit<T: Serialize>(v: &T, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json(v),
        Format::Csv => flat_csv(v),
    }
}

fn curve_row(lp: &Rational, l: &Rational, c: &CurveDto) -> Vec<String> {
    let mut row = vec![q(lp), q(l), c.type_name().to_string()];
    row.extend(c.lengths());
    row.resize(SWEEP_HEADER.len(), String::new());
    row
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    let cap = cli.cap.unwrap_or(DEFAULT_ITERATION_CAP);
    let format = cli.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Setmatrix(a) => {
            let sd = splitting(a)?;
            let f = qpp(&sd)?;
            let dto = SetMatrixDto {
                input: (&sd).into(),
                qpp: (&f).into(),
                matrix: matrix(&f.to_matrix()),
                det: q(&f.det()),
            };
            emit(&dto, format)
        }
        Command::Selling(a) => {
            let f = form(a);
            let (red, word) = reduce_to_sigma(&f, cap)?;
            let dto = SellingDto {
                input: (&f).into(),
                params: (&tropjac_core::selling::SellingParams::of(&red)).into(),
                qreduced: (&red).into(),
                word: (&word).into(),
            };
            emit(&dto, format)
        }
        Command::Fd(a) => {
            let f = form(a);
            let (red, mut word) = reduce_to_sigma(&f, cap)?;
            let (qt, stab) = fd_representative(&red)?;
            word.stab = stab.clone();
            let s = sigma_coords(&qt)?;
            let dto = FdDto {
                input: (&f).into(),
                qreduced: (&red).into(),
                qtilde: (&qt).into(),
                sigma: [q(&s.l1), q(&s.l2), q(&s.l3)],
                stab: matrix(&stab),
                transform: matrix(&word.matrix()),
            };
            emit(&dto, format)
        }
        Command::Lengths(a) => {
            let (red, _) = reduce_to_sigma(&form(a), cap)?;
            let (qt, _) = fd_representative(&red)?;
            let c: CurveDto = (&classify_curve(&qt)?).into();
            match format {
                Format::Json => json(&c),
                Format::Csv => {
                    let mut row = vec![c.type_name().to_string()];
                    row.extend(c.lengths());
                    row.resize(4, String::new());
                    csv_table(&["type", "len1", "len2", "len3"], [row])
                }
            }
        }
        Command::Reconstruct(a) => {
            let sd = splitting(a)?;
            let t = torelli_preimage(&sd, cap)?;
            let pm = period_matrix(&t.curve, None)?;
            let dto = TraceDto::new(&t, &pm.form);
            match format {
                Format::Json => json(&dto),
                Format::Csv => csv_table(&SWEEP_HEADER, [curve_row(&sd.lp, &sd.l, &dto.curve)]),
            }
        }
        Command::Covers(a) => {
            let sd = splitting(a)?;
            let t = torelli_preimage(&sd, cap)?;
            let pair = build_covers(&t)?;
            let dto = CoversDto::new(&t, &pair);
            match format {
                Format::Json => json(&dto),
                Format::Csv => {
                    let rows = [("to_eprime", &dto.to_eprime), ("to_e", &dto.to_e)].into_iter().flat_map(
                        |(name, c)| {
                            c.maps.iter().map(move |m| {
                                vec![
                                    name.to_string(),
                                    m.edge.clone(),
                                    m.slope.clone(),
                                    m.offset.clone(),
                                    m.length.clone().unwrap_or_default(),
                                ]
                            })
                        },
                    );
                    csv_table(&["cover", "edge", "slope", "offset", "length"], rows)
                }
            }
        }
        Command::Diagram(a) => {
            let sd = splitting(a)?;
            let model = build_jpp(&sd)?;
            let dg = diagram_of(&model)?;
            let phi = to_integer(&dg.phi).ok_or(Error::InternalInconsistency("φ is not integral"))?;
            let kernel = torus_kernel(&phi)?;
            let dto = DiagramDto::new(&sd, &model.zeta, &zeta_type(&model)?, &dg, &kernel, &to_raw(&sd, &kernel));
            emit(&dto, format)
        }
        Command::Mumford(a) => emit(&mumford(a)?, format),
        Command::Adjoint(a) => emit(&adjoint_cmd(a)?, format),
        Command::Fan { d, k, csv } => {
            let fan = build_fan(*d, *k, cli.cap.unwrap_or(default_cone_cap(*d)))?;
            let dto = FanDto::new(&fan, &boundary_rays(*d, *k)?);
            if let Some(path) = csv {
                std::fs::write(path, fan_csv(&fan)?)?;
            }
            match format {
                Format::Json => json(&dto),
                Format::Csv => fan_csv(&fan),
            }
        }
        Command::LocusCompare { d, k1, k2 } => {
            let cone_cap = cli.cap.unwrap_or(default_cone_cap(*d));
            let (f1, f2) = rayon::join(|| build_fan(*d, *k1, cone_cap), || build_fan(*d, *k2, cone_cap));
            let (f1, f2) = (f1?, f2?);
            let dto = CompareDto {
                d: *d,
                k1: *k1,
                k2: *k2,
                same_image: compare_images(&f1, &f2),
                images1: image_cones(&f1).iter().map(image_cone).collect(),
                images2: image_cones(&f2).iter().map(image_cone).collect(),
            };
            emit(&dto, format)
        }
        Command::Sweep { d, k, lp, l, farey } => {
            let grid = match (lp, l, farey) {
                (Some(lp), Some(l), _) => product(&parse_list(lp)?, &parse_list(l)?),
                (_, _, Some(n)) => {
                    let values = farey_values(*n);
                    product(&values, &values)
                }
                _ => return Err(CliError::Input("sweep needs --lp and --l, or --farey".into())),
            };
            let rows = sweep(*d, *k, &grid, cap)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => json(&rows),
                Format::Csv => csv_table(
                    &SWEEP_HEADER,
                    rows.into_iter().map(|r| {
                        let mut v = vec![r.lp, r.l, r.kind];
                        v.extend(r.lengths);
                        v.resize(SWEEP_HEADER.len(), String::new());
                        v
                    }),
                ),
            }
        }
    }
}

/// Comma-separated rationals; the empty string is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(parse_q).collect()
}

/// Distinct `a/b` with `1 ≤ a, b ≤ n`, ascending.
pub fn farey_values(n: u64) -> Vec<Rational> {
    let set: BTreeSet<Rational> =
        (1..=n).flat_map(|a| (1..=n).map(move |b| Rational::new(a.into(), b.into()))).collect();
    set.into_iter().collect()
}

fn product(a: &[Rational], b: &[Rational]) -> Vec<(Rational, Rational)> {
    a.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

/// One row per grid point in grid order.
pub fn sweep(d: u64, k: u64, grid: &[(Rational, Rational)], cap: usize) -> Result<Vec<SweepRow>, CliError> {
    SplittingData::new(d, k, Rational::from_integer(1.into()), Rational::from_integer(1.into()))?;
    grid.par_iter()
        .map(|(lp, l)| {
            let sd = SplittingData::new(d, k, lp.clone(), l.clone())?;
            let c: CurveDto = (&torelli_preimage(&sd, cap)?.curve).into();
            Ok(SweepRow { lp: q(lp), l: q(l), kind: c.type_name().into(), lengths: c.lengths() })
        })
        .collect()
}

/// Ray directions and one interior sample per cone.
pub fn fan_csv(fan: &FanDelta) -> Result<String, CliError> {
    let mut rows = Vec::new();
    for (i, c) in fan.cones.iter().enumerate() {
        if i == 0 {
            rows.push(vec!["ray".into(), String::new(), "1".into(), "0".into(), "l".into()]);
        }
        let (lp, l) = &c.sample;
        rows.push(vec!["sample".into(), i.to_string(), q(lp), q(l), String::new()]);
        let (a, b) = ray_point(&c.rays[1]);
        rows.push(vec!["ray".into(), String::new(), a.to_string(), b.to_string(), c.rays[1].to_string()]);
    }
    csv_table(&["kind", "cone", "lp", "l", "form"], rows)
}

fn read_input(path: &Path) -> Result<MorphismInput, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)?
    };
    Ok(serde_json::from_str(&text)?)
}

fn splitting_from(a: &MorphismArgs) -> Result<SplittingData, CliError> {
    match (a.d, a.k, &a.lp, &a.l) {
        (Some(d), Some(k), Some(lp), Some(l)) => Ok(SplittingData::new(d, k, lp.0.clone(), l.0.clone())?),
        _ => Err(CliError::Input("give --input, or all of --d --k --lp --l".into())),
    }
}

fn mumford(a: &MorphismArgs) -> Result<MumfordDto, CliError> {
    let (f, z1) = match &a.input {
        Some(p) => {
            let inp = read_input(p)?;
            (inp.morphism.to_core()?, parse_int_matrix(&inp.z1)?)
        }
        None => {
            let sd = splitting_from(a)?;
            let model = build_jpp(&sd)?;
            (model.q, IntMatrix::identity(2).scale(&sd.d_int()))
        }
    };
    Ok(match induce_polarization(&f, &z1)? {
        Inducement::Induced(z2) => MumfordDto {
            induced: true,
            m: matrix(&z2),
            zeta2_type: Some(polarization_type(&z2)?.iter().map(ToString::to_string).collect()),
            pullback: Some(matrix(&pullback_polarization(&f, &z2)?)),
            zeta2: Some(matrix(&z2)),
        },
        Inducement::NotInducible(m) => {
            MumfordDto { induced: false, m: matrix(&m), zeta2: None, zeta2_type: None, pullback: None }
        }
    })
}

fn adjoint_cmd(a: &MorphismArgs) -> Result<AdjointDto, CliError> {
    let (f, z1, z2) = match &a.input {
        Some(p) => {
            let inp = read_input(p)?;
            let z2 = inp.z2.as_ref().ok_or_else(|| CliError::Input("adjoint needs z2".into()))?;
            (inp.morphism.to_core()?, parse_int_matrix(&inp.z1)?, parse_int_matrix(z2)?)
        }
        None => {
            let model = build_jpp(&splitting_from(a)?)?;
            (model.phi, model.product.polarization().clone(), model.zetapp)
        }
    };
    let adj = adjoint(&f, &z1, &z2)?;
    let comp = f.then(&adj)?;
    Ok(AdjointDto {
        adjoint: (&adj).into(),
        composite_sharp: matrix(comp.msharp()),
        composite_flat: matrix(comp.mflat()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn lists_and_grids() {
        assert_eq!(parse_list("1, 2/3,5").unwrap(), [r(1, 1), r(2, 3), r(5, 1)]);
        assert!(parse_list("").unwrap().is_empty());
        assert!(parse_list("1,x").is_err());
        assert_eq!(farey_values(2), [r(1, 2), r(1, 1), r(2, 1)]);
        assert_eq!(product(&[r(1, 1)], &[r(1, 1), r(2, 1)]).len(), 2);
    }

    #[test]
    fn flattened_csv() {
        let v = serde_json::json!({"a": {"b": ["1/2", null]}, "c": true});
        assert_eq!(flat_csv(&v).unwrap(), "key,value\na.b.0,1/2\na.b.1,\nc,true\n");
    }

    #[test]
    fn sweep_keeps_grid_order() {
        let grid: Vec<_> = (1..=9).rev().map(|i| (r(i, 1), r(1, 1))).collect();
        let rows = sweep(2, 1, &grid, DEFAULT_ITERATION_CAP).unwrap();
        let lps: Vec<_> = rows.iter().map(|row| row.lp.clone()).collect();
        assert_eq!(lps, ["9", "8", "7", "6", "5", "4", "3", "2", "1"]);
        assert_eq!(rows[8].kind, "dumbbell");
    }
}
