//! Command-line front end: generation, X-ray measurement, grid candidates,
//! determination certificates, U-polygon tools, switching pairs, homothety
//! embedding, second-direction search, the rational-ratio sweep, and SVG
//! rendering.
//!
//! Exit codes: 0 success (and `certify` Determined), 1 `certify`
//! NotDetermined or `sweep` summary violation, 2 bad arguments or input,
//! 3 non-generic configuration, 4 `certify` Inconclusive.

mod doc;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;

use quasitomo_core::model_set::{embed_homothety, generate, FinitePointSet, ModelSetSpec};
use quasitomo_core::polygon::{
    build_u_polygon, certify_convex_determination, is_u_polygon, PolygonInPlane, Verdict,
};
use quasitomo_core::successive::{candidate_grid, max_points_per_line, second_direction};
use quasitomo_core::valuation::{base_class_of, enumerate_rational_f, family_pattern, FamilyPattern};
use quasitomo_core::xray::{grid, switching_pair, xray, Direction};
use quasitomo_core::{CycloRat, QtError, QtResult};

use doc::{
    coeff_strings, document_to_point_set, element_from_csv, elements_from_arg,
    point_set_to_document, rational_to_string, timestamp_now, DocumentMetadata,
    PointSetDocument, PolygonDocument, SwitchDocument, SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(name = "quasitomo", version, about = "Exact planar point-set tomography tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set from a preset and write it as JSON.
    Generate {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        radius: f64,
        /// Physical-plane center "x,y" of the sampling disk.
        #[arg(long, default_value = "0,0")]
        center: String,
        /// Override the window shift, e.g. "--tau 0,0" for the unshifted window.
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure the X-ray of a stored point set along one direction.
    Xray {
        #[arg(long = "in")]
        input: PathBuf,
        /// Direction as a comma-separated coefficient vector.
        #[arg(long)]
        direction: String,
    },
    /// Candidate grid of a stored point set for several directions.
    Grid {
        #[arg(long = "in")]
        input: PathBuf,
        /// Directions as ';'-separated coefficient vectors.
        #[arg(long)]
        directions: String,
    },
    /// Decide whether the directions determine all convex lattice sets.
    Certify {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        directions: String,
    },
    /// Build a U-polygon witness (≤ 3 directions) or test a given polygon.
    Upolygon {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        directions: String,
        /// Optional vertices (';'-separated coefficient vectors) to test.
        #[arg(long)]
        vertices: Option<String>,
    },
    /// Construct a switching pair: two disjoint sets with equal X-rays.
    Switch {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        directions: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a finite rational point set into a model set by scaling.
    Embed {
        #[arg(long)]
        order: u32,
        /// Points as ';'-separated rational coefficient vectors.
        #[arg(long)]
        points: String,
        #[arg(long)]
        preset: String,
    },
    /// Choose a second X-ray direction after the first X-ray is known.
    #[command(name = "second-direction")]
    SecondDirection {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        direction: String,
        /// Also enumerate the candidate grid and verify the one-per-line contract.
        #[arg(long)]
        verify: bool,
    },
    /// Enumerate all rational four-index ratios up to a cyclotomic order.
    Sweep {
        #[arg(long)]
        mmax: u32,
    },
    /// Render stored documents as SVG.
    Render {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        polygon: Option<PathBuf>,
        #[arg(long = "switch")]
        switch_doc: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn max_order() -> u32 {
    std::env::var("QUASITOMO_MAX_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(60)
}

fn check_order(n: u32) -> QtResult<()> {
    let cap = max_order();
    if n > cap {
        return Err(QtError::BadArgument(format!(
            "order {} exceeds the configured ceiling {} (QUASITOMO_MAX_ORDER)",
            n, cap
        )));
    }
    Ok(())
}

fn parse_pair(s: &str, what: &str) -> QtResult<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(QtError::BadArgument(format!("{} must be two comma-separated numbers", what)));
    }
    let x = parts[0]
        .parse()
        .map_err(|_| QtError::BadArgument(format!("cannot parse {} value '{}'", what, parts[0])))?;
    let y = parts[1]
        .parse()
        .map_err(|_| QtError::BadArgument(format!("cannot parse {} value '{}'", what, parts[1])))?;
    Ok((x, y))
}

fn load_point_set(path: &PathBuf) -> QtResult<(PointSetDocument, FinitePointSet)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QtError::BadArgument(format!("cannot read {}: {}", path.display(), e)))?;
    let document: PointSetDocument = serde_json::from_str(&text)
        .map_err(|e| QtError::BadArgument(format!("malformed document {}: {}", path.display(), e)))?;
    check_order(document.order)?;
    let set = document_to_point_set(&document)?;
    Ok((document, set))
}

fn parse_directions(order: u32, arg: &str) -> QtResult<Vec<Direction>> {
    elements_from_arg(order, arg)?.iter().map(Direction::new).collect()
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> QtResult<()> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| QtError::BadArgument(format!("serialization failed: {}", e)))?;
    match out {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| QtError::BadArgument(format!("cannot write {}: {}", path.display(), e))),
        None => {
            println!("{}", json);
            Ok(())
        }
    }
}

fn direction_coeffs(d: &Direction) -> Vec<String> {
    coeff_strings(d.rep())
}

fn run(cli: Cli) -> QtResult<u8> {
    match cli.command {
        Command::Generate { preset, radius, center, tau, out } => {
            let mut spec = ModelSetSpec::preset(&preset)?;
            check_order(spec.order)?;
            if let Some(tau) = tau {
                if spec.window.is_empty() {
                    return Err(QtError::BadArgument(format!(
                        "preset '{}' has no window to shift",
                        preset
                    )));
                }
                let shift = parse_pair(&tau, "--tau")?;
                for s in spec.window_shift.iter_mut() {
                    *s = shift;
                }
                spec.validate()?;
            }
            let center = parse_pair(&center, "--center")?;
            if !(radius > 0.0) {
                return Err(QtError::BadArgument("--radius must be positive".into()));
            }
            let set = generate(&spec, center, radius)?;
            let metadata = DocumentMetadata {
                window_shift: spec.window_shift.clone(),
                radius: Some(radius),
                timestamp: Some(timestamp_now()),
            };
            let document = point_set_to_document(&set, spec.preset_name.clone(), metadata)?;
            emit(&document, out.as_ref())?;
            Ok(0)
        }
        Command::Xray { input, direction } => {
            let (document, set) = load_point_set(&input)?;
            let u = Direction::new(&element_from_csv(document.order, &direction)?)?;
            let snapshot = xray(&set, &u)?;
            #[derive(Serialize)]
            struct Line {
                key: Vec<String>,
                count: usize,
            }
            #[derive(Serialize)]
            struct Out {
                order: u32,
                direction: Vec<String>,
                total: usize,
                lines: Vec<Line>,
            }
            let lines = snapshot
                .buckets
                .iter()
                .map(|(k, &count)| Line { key: coeff_strings(k.value()), count })
                .collect();
            emit(
                &Out {
                    order: document.order,
                    direction: direction_coeffs(&u),
                    total: snapshot.total(),
                    lines,
                },
                None,
            )?;
            Ok(0)
        }
        Command::Grid { input, directions } => {
            let (document, set) = load_point_set(&input)?;
            let dirs = parse_directions(document.order, &directions)?;
            let points = grid(&set, &dirs)?;
            #[derive(Serialize)]
            struct Out {
                order: u32,
                directions: Vec<Vec<String>>,
                count: usize,
                points: Vec<Vec<String>>,
                integral: Vec<bool>,
            }
            emit(
                &Out {
                    order: document.order,
                    directions: dirs.iter().map(direction_coeffs).collect(),
                    count: points.len(),
                    points: points.iter().map(coeff_strings).collect(),
                    integral: points.iter().map(|z| z.is_integral()).collect(),
                },
                None,
            )?;
            Ok(0)
        }
        Command::Certify { order, directions } => {
            check_order(order)?;
            let dirs = parse_directions(order, &directions)?;
            let cert = certify_convex_determination(&dirs, order)?;
            #[derive(Serialize)]
            struct CrossRatioOut {
                norm: String,
                value_rational: Option<String>,
                class: quasitomo_core::valuation::CrossRatioClass,
                two_prime_member: bool,
            }
            #[derive(Serialize)]
            struct Out {
                schema_version: String,
                order: u32,
                directions: Vec<Vec<String>>,
                verdict: Verdict,
                reason: quasitomo_core::polygon::CertificateReason,
                witness: Option<Vec<Vec<String>>>,
                cross_ratio: Option<CrossRatioOut>,
            }
            let out = Out {
                schema_version: SCHEMA_VERSION.to_string(),
                order,
                directions: cert.directions.iter().map(direction_coeffs).collect(),
                verdict: cert.verdict,
                reason: cert.reason,
                witness: cert
                    .witness
                    .as_ref()
                    .map(|p| p.vertices().iter().map(coeff_strings).collect()),
                cross_ratio: cert.classification.as_ref().map(|c| CrossRatioOut {
                    norm: rational_to_string(&c.norm),
                    value_rational: c.value_rational.as_ref().map(rational_to_string),
                    class: c.class,
                    two_prime_member: c.two_prime_member,
                }),
            };
            emit(&out, None)?;
            Ok(match cert.verdict {
                Verdict::Determined => 0,
                Verdict::NotDetermined => 1,
                Verdict::Inconclusive => 4,
            })
        }
        Command::Upolygon { order, directions, vertices } => {
            check_order(order)?;
            let dirs = parse_directions(order, &directions)?;
            match vertices {
                Some(vertices) => {
                    let verts = elements_from_arg(order, &vertices)?;
                    let polygon = PolygonInPlane::new(order, verts)?;
                    #[derive(Serialize)]
                    struct Out {
                        order: u32,
                        vertex_count: usize,
                        is_u_polygon: bool,
                    }
                    let flag = is_u_polygon(&polygon, &dirs)?;
                    emit(
                        &Out { order, vertex_count: polygon.vertices().len(), is_u_polygon: flag },
                        None,
                    )?;
                    Ok(0)
                }
                None => {
                    let elements: Vec<CycloRat> =
                        dirs.iter().map(|d| d.rep().clone()).collect();
                    let polygon = build_u_polygon(&elements)?;
                    let document = PolygonDocument {
                        schema_version: SCHEMA_VERSION.to_string(),
                        order,
                        vertices: polygon.vertices().iter().map(coeff_strings).collect(),
                    };
                    emit(&document, None)?;
                    Ok(0)
                }
            }
        }
        Command::Switch { order, directions, out } => {
            check_order(order)?;
            let dirs = parse_directions(order, &directions)?;
            let (f1, f2) = switching_pair(&dirs, order)?;
            let document = SwitchDocument {
                schema_version: SCHEMA_VERSION.to_string(),
                f1: point_set_to_document(&f1, None, DocumentMetadata::default())?,
                f2: point_set_to_document(&f2, None, DocumentMetadata::default())?,
            };
            emit(&document, out.as_ref())?;
            Ok(0)
        }
        Command::Embed { order, points, preset } => {
            check_order(order)?;
            let pts = elements_from_arg(order, &points)?;
            let spec = ModelSetSpec::preset(&preset)?;
            let embedding = embed_homothety(&pts, &spec)?;
            #[derive(Serialize)]
            struct Out {
                order: u32,
                scale: Vec<String>,
                pv_power: u32,
                offset: Vec<String>,
                image: PointSetDocument,
            }
            emit(
                &Out {
                    order: spec.order,
                    scale: coeff_strings(embedding.scale.as_cyclo()),
                    pv_power: embedding.pv_power,
                    offset: coeff_strings(&embedding.offset),
                    image: point_set_to_document(
                        &embedding.image,
                        spec.preset_name.clone(),
                        DocumentMetadata::default(),
                    )?,
                },
                None,
            )?;
            Ok(0)
        }
        Command::SecondDirection { input, direction, verify } => {
            let (document, set) = load_point_set(&input)?;
            let u = Direction::new(&element_from_csv(document.order, &direction)?)?;
            let result = second_direction(&set, &u)?;
            #[derive(Serialize)]
            struct Out {
                order: u32,
                epsilon: String,
                r: f64,
                direction: Vec<String>,
                auxiliary: Vec<String>,
                note: Option<String>,
                grid_size: Option<usize>,
                max_points_per_line: Option<usize>,
            }
            let (grid_size, max_per_line) = if verify {
                let g = candidate_grid(&set, &u)?;
                let m = max_points_per_line(&g, &result.direction)?;
                (Some(g.len()), Some(m))
            } else {
                (None, None)
            };
            emit(
                &Out {
                    order: document.order,
                    epsilon: rational_to_string(&result.epsilon),
                    r: result.r,
                    direction: direction_coeffs(&result.direction),
                    auxiliary: coeff_strings(&result.auxiliary),
                    note: result.note.clone(),
                    grid_size,
                    max_points_per_line: max_per_line,
                },
                None,
            )?;
            Ok(0)
        }
        Command::Sweep { mmax } => {
            check_order(mmax)?;
            if mmax < 4 {
                return Err(QtError::BadArgument("--mmax must be at least 4".into()));
            }
            let hits = enumerate_rational_f(mmax)?;
            let mut values: Vec<BigRational> = Vec::new();
            let mut unattributed = 0usize;
            for hit in &hits {
                let family = family_pattern(hit).map(|f| match f {
                    FamilyPattern::FirstDoubled => "first-doubled",
                    FamilyPattern::SecondDoubled => "second-doubled",
                });
                let base = base_class_of(hit);
                if family.is_none() && base.is_none() {
                    unattributed += 1;
                }
                #[derive(Serialize)]
                struct Row<'a> {
                    m: u32,
                    k: [u32; 4],
                    value: String,
                    family: Option<&'a str>,
                    base_class: Option<usize>,
                }
                let row = Row {
                    m: hit.index.m,
                    k: hit.index.k,
                    value: rational_to_string(&hit.value),
                    family,
                    base_class: base,
                };
                println!(
                    "{}",
                    serde_json::to_string(&row)
                        .map_err(|e| QtError::BadArgument(e.to_string()))?
                );
                if !values.contains(&hit.value) {
                    values.push(hit.value.clone());
                }
            }
            values.sort();
            let expected: Vec<BigRational> = [(4, 3), (3, 2), (2, 1), (3, 1), (4, 1)]
                .iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect();
            let ok = values.iter().all(|v| expected.contains(v)) && unattributed == 0;
            #[derive(Serialize)]
            struct Summary {
                summary: bool,
                mmax: u32,
                hits: usize,
                values: Vec<String>,
                values_in_expected_set: bool,
                unattributed: usize,
            }
            println!(
                "{}",
                serde_json::to_string(&Summary {
                    summary: true,
                    mmax,
                    hits: hits.len(),
                    values: values.iter().map(rational_to_string).collect(),
                    values_in_expected_set: ok,
                    unattributed,
                })
                .map_err(|e| QtError::BadArgument(e.to_string()))?
            );
            Ok(if ok { 0 } else { 1 })
        }
        Command::Render { input, polygon, switch_doc, out } => {
            let base = match &input {
                Some(path) => Some(load_point_set(path)?.1),
                None => None,
            };
            let polygon_shape = match &polygon {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        QtError::BadArgument(format!("cannot read {}: {}", path.display(), e))
                    })?;
                    let document: PolygonDocument =
                        serde_json::from_str(&text).map_err(|e| {
                            QtError::BadArgument(format!(
                                "malformed polygon document {}: {}",
                                path.display(),
                                e
                            ))
                        })?;
                    check_order(document.order)?;
                    Some(doc::document_to_polygon(&document)?)
                }
                None => None,
            };
            let switch_sets = match &switch_doc {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        QtError::BadArgument(format!("cannot read {}: {}", path.display(), e))
                    })?;
                    let document: SwitchDocument = serde_json::from_str(&text).map_err(|e| {
                        QtError::BadArgument(format!(
                            "malformed switch document {}: {}",
                            path.display(),
                            e
                        ))
                    })?;
                    check_order(document.f1.order)?;
                    Some((
                        document_to_point_set(&document.f1)?,
                        document_to_point_set(&document.f2)?,
                    ))
                }
                None => None,
            };
            let svg = render::render_svg(&render::RenderInput {
                points: base.as_ref(),
                switch: switch_sets.as_ref().map(|(a, b)| (a, b)),
                polygon: polygon_shape.as_ref(),
            })?;
            std::fs::write(&out, svg).map_err(|e| {
                QtError::BadArgument(format!("cannot write {}: {}", out.display(), e))
            })?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            let code = match &e {
                QtError::NonGenericConfiguration(_) => {
                    eprintln!(
                        "hint: perturb the window, e.g. --tau 0.000318,0.000368, to make every \
                         lattice star image avoid the boundary"
                    );
                    3
                }
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
