//! The `kmfan` command line: each subcommand reads JSON documents, runs one
//! operation and prints one line of JSON.
//!
//! Exit codes: 0 on success, 1 when the input is well formed but refused
//! (invalid fan, failed precondition), 2 when the input is malformed.

mod document;
mod draw;

pub use document::{
    ints, matrix_rows, parse_fan, serialize_fan, ConeDoc, DatumDoc, FanDocument, GroupDoc, HomDocument, Int,
    SCHEMA_VERSION,
};
pub use draw::draw_svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::abelian::{FgaGroup, GroupHom};
use crate::error::Error;
use crate::gsfan::{
    fold, fold_unfold_roundtrip, fold_violations, is_gs_representable, lattice_data_colimit, rigidified_unfold, unfold,
    FoldViolation, GsFan,
};
use crate::kmfan::{
    canonical_resolution, coarse_fan, contract, dilate, fundamental_group, has_reduced_fibers, inflate,
    is_equidimensional, is_proper, is_representable, is_semi_tame, is_tame, isotropy, local_presentation, product,
    rigidify, roots, star, strata, torsor_group, validate, validate_hom, KmFan, KmFanHom,
};

#[derive(Parser, Debug)]
#[command(name = "kmfan", version, about = "Exact computations with KM fans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Fan document.
    #[arg(long)]
    fan: Option<PathBuf>,
    /// Second fan document (product).
    #[arg(long)]
    fan2: Option<PathBuf>,
    /// Hom document.
    #[arg(long)]
    hom: Option<PathBuf>,
    /// Index of a cone in the canonical order of the fan.
    #[arg(long)]
    cone: Option<usize>,
    /// Comma separated integers.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Half width of the drawing window.
    #[arg(long, default_value_t = 5)]
    window: u32,
    /// Output file for drawings.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the fan axioms.
    Validate(Opts),
    /// Group, cones and basic predicates.
    Info(Opts),
    /// The classical fan over N/N_tor.
    Coarse(Opts),
    /// Push the lattice data to N/N_tor.
    Rigidify(Opts),
    /// Star of the cone given by --cone.
    Star(Opts),
    /// Product of --fan and --fan2.
    Product(Opts),
    /// Root construction with multipliers --point, one per ray.
    Roots(Opts),
    /// Multiply every lattice by --point.
    Dilate(Opts),
    /// Push the source fan of --hom forward along its map.
    Inflate(Opts),
    /// Pull the target fan of --hom back along its map.
    Contract(Opts),
    /// Canonical resolution of a simplicial fan.
    Resolve(Opts),
    /// Fine and coarse support membership of --point.
    Support(Opts),
    /// Properness of the map of --hom.
    Proper(Opts),
    /// Tameness and the torsor group of the map of --hom.
    Tame(Opts),
    /// Representability of the map of --hom.
    Representable(Opts),
    /// Equidimensionality and reduced fibers of the map of --hom.
    Equidim(Opts),
    /// Fundamental group N / sum of the lattices.
    Pi1(Opts),
    /// Isotropy group of the cone --cone.
    Isotropy(Opts),
    /// Torus rank, isotropy and band of every cone.
    Strata(Opts),
    /// Local presentation at the cone --cone.
    Local(Opts),
    /// Fold the GS fan given by --hom (classical source fan, map to N).
    Fold(Opts),
    /// Unfold along the colimit of the lattice data.
    Unfold(Opts),
    /// Rigidified unfolding.
    UnfoldRig(Opts),
    /// Whether the fan comes from a GS fan.
    GsCheck(Opts),
    /// Check that folding the rigidified unfolding gives the fan back.
    Roundtrip(Opts),
    /// Draw the fan as SVG into --out.
    Draw(Opts),
}

/// Exit code and standard output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

enum Failure {
    Malformed(Value),
    Refused(Value),
}

type Res<T> = std::result::Result<T, Failure>;

fn error_value(kind: &str, message: &str) -> Value {
    json!({"error": {"kind": kind, "message": message}})
}

fn malformed(message: impl Into<String>) -> Failure {
    Failure::Malformed(error_value("Malformed", &message.into()))
}

fn error_kind(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(['(', ' ', '{']).next().unwrap_or("Error").to_string()
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let v = error_value(&error_kind(&e), &e.to_string());
        match e {
            Error::DimensionMismatch(_)
            | Error::InvalidGroup(_)
            | Error::NotAHomomorphism(_)
            | Error::GeneratorOutsideAmbient(_) => Failure::Malformed(v),
            _ => Failure::Refused(v),
        }
    }
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: e.to_string() },
                _ => Outcome { code: 2, stdout: line(&error_value("Usage", e.to_string().trim())) },
            };
        }
    };
    match dispatch(cli.command) {
        Ok(Text::Json(v)) => Outcome { code: 0, stdout: line(&v) },
        Ok(Text::Raw(s)) => Outcome { code: 0, stdout: s },
        Err(Failure::Refused(v)) => Outcome { code: 1, stdout: line(&v) },
        Err(Failure::Malformed(v)) => Outcome { code: 2, stdout: line(&v) },
    }
}

fn line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values serialize");
    s.push('\n');
    s
}

enum Text {
    Json(Value),
    Raw(String),
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

/// Parses a fan document without checking the axioms.
fn read_fan(path: &Path) -> Res<KmFan> {
    let text = read(path)?;
    let doc: FanDocument =
        serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    doc.to_fan().map_err(|e| match e {
        Error::InvalidArgument(m) => malformed(format!("{}: {m}", path.display())),
        e => Failure::from(e),
    })
}

fn violations_value(fan: &KmFan) -> Vec<Value> {
    validate(fan)
        .iter()
        .map(|v| {
            let d = format!("{v:?}");
            let kind = d.split([' ', '{']).next().unwrap_or("Violation").to_string();
            json!({"kind": kind, "message": v.to_string()})
        })
        .collect()
}

fn valid_fan(path: &Path) -> Res<KmFan> {
    let fan = read_fan(path)?;
    let v = violations_value(&fan);
    if !v.is_empty() {
        return Err(Failure::Refused(json!({"valid": false, "violations": v})));
    }
    Ok(fan)
}

fn need<'a, T>(x: &'a Option<T>, flag: &str) -> Res<&'a T> {
    x.as_ref().ok_or_else(|| malformed(format!("missing --{flag}")))
}

fn fan_arg(o: &Opts) -> Res<KmFan> {
    valid_fan(need(&o.fan, "fan")?)
}

/// Source fan, target fan and group map of a hom document. Commands that
/// only need a group on one side ignore the cones of that fan.
fn hom_parts(o: &Opts) -> Res<(KmFan, KmFan, GroupHom)> {
    let path = need(&o.hom, "hom")?;
    let doc: HomDocument =
        serde_json::from_str(&read(path)?).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    let (s, t) = doc.resolve(path);
    let source = valid_fan(&s)?;
    let target = valid_fan(&t)?;
    let hom = doc.to_hom(source.group(), target.group()).map_err(|e| match e {
        Error::InvalidArgument(m) => malformed(m),
        e => Failure::from(e),
    })?;
    Ok((source, target, hom))
}

fn fan_hom(o: &Opts) -> Res<KmFanHom> {
    let (s, t, h) = hom_parts(o)?;
    validate_hom(&s, &t, &h).map_err(|r| {
        Failure::Refused(json!({"error": {"kind": "InvalidMorphism", "cone": r.cone, "message": r.reason}}))
    })
}

fn point(o: &Opts) -> Res<Vec<BigInt>> {
    let p = need(&o.point, "point")?;
    if p.trim().is_empty() {
        return Ok(Vec::new());
    }
    p.split(',')
        .map(|x| x.trim().parse::<BigInt>().map_err(|_| malformed(format!("bad integer {x:?} in --point"))))
        .collect()
}

fn cone_arg(fan: &KmFan, o: &Opts) -> Res<crate::cones::Cone> {
    let i = *need(&o.cone, "cone")?;
    fan.cones()
        .get(i)
        .cloned()
        .ok_or_else(|| malformed(format!("--cone {i} is out of range (the fan has {} cones)", fan.len())))
}

fn group_value(g: &FgaGroup) -> Value {
    json!({"free_rank": g.free_rank(), "torsion": ints(g.torsion_invariants())})
}

fn fan_value(f: &KmFan) -> Value {
    serde_json::to_value(FanDocument::of(f)).expect("documents serialize")
}

fn matrix_value(h: &GroupHom) -> Value {
    json!(matrix_rows(h.matrix()))
}

fn fan_and_map(f: &KmFan, h: &GroupHom) -> Value {
    json!({"fan": fan_value(f), "map": matrix_value(h)})
}

fn vectors(v: &[Vec<BigInt>]) -> Value {
    json!(v.iter().map(|x| ints(x)).collect::<Vec<_>>())
}

fn dispatch(cmd: Command) -> Res<Text> {
    use Command::*;
    let v = match cmd {
        Validate(o) => {
            let fan = read_fan(need(&o.fan, "fan")?)?;
            let v = violations_value(&fan);
            if !v.is_empty() {
                return Err(Failure::Refused(json!({"valid": false, "violations": v})));
            }
            json!({"valid": true, "cones": fan.len(), "maximal_cones": fan.maximal_cones().len()})
        }
        Info(o) => {
            let f = fan_arg(&o)?;
            let rays: Vec<Vec<BigInt>> = f.rays().iter().map(|&i| f.ray_generator(i).expect("ray")).collect();
            json!({
                "group": group_value(f.group()),
                "cones": f.len(),
                "rays": vectors(&rays),
                "maximal_cones": f.maximal_cones(),
                "classical": f.is_classical(),
                "simplicial": f.is_simplicial(),
                "smooth": f.is_smooth(),
                "atoroidal": f.is_atoroidal(),
                "nondegenerate": f.is_nondegenerate(),
            })
        }
        Coarse(o) => {
            let c = coarse_fan(&fan_arg(&o)?);
            fan_and_map(&c.fan, c.projection.hom())
        }
        Rigidify(o) => {
            let r = rigidify(&fan_arg(&o)?);
            fan_and_map(&r.fan, r.quotient.hom())
        }
        Star(o) => {
            let f = fan_arg(&o)?;
            let tau = cone_arg(&f, &o)?;
            json!({"fan": fan_value(&star(&f, &tau)?)})
        }
        Product(o) => {
            let a = fan_arg(&o)?;
            let b = valid_fan(need(&o.fan2, "fan2")?)?;
            json!({"fan": fan_value(&product(&a, &b)?.fan)})
        }
        Roots(o) => {
            let f = fan_arg(&o)?;
            let a = point(&o)?;
            if a.len() != f.rays().len() {
                return Err(malformed(format!("--point needs {} multipliers, one per ray", f.rays().len())));
            }
            let (g, h) = roots(&f, &a)?;
            fan_and_map(&g, h.hom())
        }
        Dilate(o) => {
            let f = fan_arg(&o)?;
            let a = point(&o)?;
            let [a] = a.as_slice() else {
                return Err(malformed("--point must be a single integer"));
            };
            let (g, h) = dilate(&f, a)?;
            fan_and_map(&g, h.hom())
        }
        Inflate(o) => {
            let (s, _, h) = hom_parts(&o)?;
            let (g, m) = inflate(&s, &h)?;
            fan_and_map(&g, m.hom())
        }
        Contract(o) => {
            let (_, t, h) = hom_parts(&o)?;
            let (g, m) = contract(&t, &h)?;
            fan_and_map(&g, m.hom())
        }
        Resolve(o) => {
            let (g, h) = canonical_resolution(&fan_arg(&o)?)?;
            fan_and_map(&g, h.hom())
        }
        Support(o) => {
            let f = fan_arg(&o)?;
            let n = point(&o)?;
            if n.len() != f.group().dim() {
                return Err(malformed(format!("--point needs {} coordinates", f.group().dim())));
            }
            let free = f.group().free_part(&n).to_vec();
            json!({"fine": f.support_contains(&n)?, "coarse": f.coarse_support_contains(&free)?})
        }
        Proper(o) => json!({"proper": is_proper(&fan_hom(&o)?)?}),
        Tame(o) => {
            let h = fan_hom(&o)?;
            let t = is_tame(&h);
            let torsor = if t { group_value(&torsor_group(&h)?) } else { Value::Null };
            json!({"tame": t, "semi_tame": is_semi_tame(&h), "torsor_group": torsor})
        }
        Representable(o) => json!({"representable": is_representable(&fan_hom(&o)?)}),
        Equidim(o) => {
            let h = fan_hom(&o)?;
            json!({"equidimensional": is_equidimensional(&h)?, "reduced_fibers": has_reduced_fibers(&h)?})
        }
        Pi1(o) => group_value(&fundamental_group(&fan_arg(&o)?)),
        Isotropy(o) => {
            let f = fan_arg(&o)?;
            let c = cone_arg(&f, &o)?;
            json!({"torsion": ints(isotropy(&f, &c)?.torsion_invariants())})
        }
        Strata(o) => {
            let f = fan_arg(&o)?;
            let s: Vec<Value> = strata(&f)
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    json!({
                        "cone": i,
                        "torus_rank": s.torus_rank,
                        "isotropy": ints(s.isotropy.torsion_invariants()),
                        "band": ints(s.band.torsion_invariants()),
                    })
                })
                .collect();
            json!({"strata": s})
        }
        Local(o) => {
            let f = fan_arg(&o)?;
            let c = cone_arg(&f, &o)?;
            let lp = local_presentation(&f, &c)?;
            json!({
                "lifting": vectors(lp.lifting.basis()),
                "local_cone": vectors(&lp.local_cone.generators()),
                "monoid_generators": vectors(&lp.monoid_generators),
                "stabilizer": group_value(&lp.stabilizer),
                "action": matrix_value(&lp.action),
            })
        }
        Fold(o) => {
            let (s, _, h) = hom_parts(&o)?;
            let g = GsFan::new(s, h)?;
            let bad = fold_violations(&g);
            if !bad.is_empty() {
                let v: Vec<Value> = bad
                    .iter()
                    .map(|b| match b {
                        FoldViolation::NotInjective { cone } => json!({"kind": "NotInjective", "cones": [cone]}),
                        FoldViolation::Overlap { first, second } => {
                            json!({"kind": "Overlap", "cones": [first, second]})
                        }
                    })
                    .collect();
                return Err(Failure::Refused(json!({"foldable": false, "violations": v})));
            }
            let (f, m) = fold(&g)?;
            json!({"foldable": true, "fan": fan_value(&f), "map": matrix_value(m.hom())})
        }
        Unfold(o) => {
            let f = fan_arg(&o)?;
            let u = lattice_data_colimit(&f);
            let (g, m) = unfold(&f);
            json!({"colimit": group_value(&u.colimit), "fan": fan_value(&g), "map": matrix_value(m.hom())})
        }
        UnfoldRig(o) => {
            let (g, m) = rigidified_unfold(&fan_arg(&o)?);
            json!({"fan": fan_value(&g), "map": m.map(|m| matrix_value(m.hom()))})
        }
        GsCheck(o) => json!({"gs_representable": is_gs_representable(&fan_arg(&o)?)?}),
        Roundtrip(o) => json!({"roundtrip": fold_unfold_roundtrip(&fan_arg(&o)?)?}),
        Draw(o) => {
            let svg = draw_svg(&fan_arg(&o)?, o.window)?;
            match &o.out {
                None => return Ok(Text::Raw(svg)),
                Some(p) => {
                    std::fs::write(p, &svg).map_err(|e| malformed(format!("{}: {e}", p.display())))?;
                    json!({"svg": p.display().to_string(), "bytes": svg.len()})
                }
            }
        }
    };
    Ok(Text::Json(v))
}
