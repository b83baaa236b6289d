//! Subcommand implementations.

use std::path::Path;

use anyhow::{bail, Context, Result};
use nalgebra::Vector3;
use povm_entropy::catalog::{interpolation_set, validate_povm_seeded};
use povm_entropy::certificate::{certify_minimum_from, kernel_certificate, HermiteCertificate, KernelCertificate};
use povm_entropy::dynamics::{block_entropy, dynamical_entropy, measurement_entropy, transition_matrix, UnitaryAsRotation};
use povm_entropy::entropy::{
    antipodal_orbit, bifurcation_function, classify_inert_point, find_extrema_with, orbit_match_error,
    rectangle_bifurcation_threshold, sample_landscape, CriticalPoint, ExtremaOptions, Mode,
};
use povm_entropy::groups::degree_bound;
use povm_entropy::info::{info_power_report, informational_power, ngon_informational_power, info_power_table, InfoPowerRow};
use povm_entropy::io::{read_povm, PovmFile};
use povm_entropy::{make_hs_povm, make_rectangle_povm, BlochVector, DesignReport, EntropyKernel, Family, HsPovm};
use serde::Serialize;

use crate::output::{csv, emit, json, machine, table, text_table, Units, SCHEMA_VERSION};
use crate::{Cli, Command, Format, ModeArg, Source};

/// Tolerance on the informational-power table.
const REFERENCE_TOL: f64 = 5e-6;

/// Usage error raised after argument parsing (exit code 2).
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub enum Outcome {
    Success,
    CheckFailed(String),
}

pub fn exit_code_for(e: &anyhow::Error) -> u8 {
    use povm_entropy::Error as E;
    if e.is::<Usage>() {
        return 2;
    }
    match e.downcast_ref::<E>() {
        Some(
            E::InvalidArgument(_)
            | E::UnknownFamily(_)
            | E::UnknownInvariant(_)
            | E::NotSymmetric
            | E::NotUnit { .. }
            | E::NotOnAxis
            | E::Domain { .. },
        ) => 2,
        _ => 1,
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn load(source: &Source) -> Result<HsPovm> {
    match (&source.family, &source.povm) {
        (Some(f), _) => Ok(make_hs_povm(*f)?),
        (None, Some(p)) => read_povm(p).with_context(|| format!("reading {}", p.display())),
        (None, None) => Err(usage("one of --family or --povm is required")),
    }
}

fn families_for(name: &str) -> Result<Vec<Family>> {
    if name.eq_ignore_ascii_case("all") {
        Ok(Family::all_hs())
    } else {
        Ok(vec![name.parse()?])
    }
}

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let units = Units { bits: cli.bits };
    match &cli.command {
        Command::Generate { family, out } => {
            let povm = make_hs_povm(*family)?;
            emit(out.as_deref(), &json(&PovmFile::from_povm(&povm))?)?;
            Ok(Outcome::Success)
        }
        Command::Validate { source, out } => validate(cli, &load(source)?, out.as_deref()),
        Command::EntropyMap { source, grid, kernel, out } => {
            entropy_map(cli, units, &load(source)?, *grid, *kernel, out.as_deref())
        }
        Command::Minimize { source, grid, mode, report } => minimize(units, &load(source)?, *grid, *mode, report.as_deref()),
        Command::Classify { source, point, grid, out } => {
            classify(units, &load(source)?, point.as_deref(), *grid, out.as_deref())
        }
        Command::Certify { family, precision, kernel, out } => certify(cli, family, *precision, *kernel, out.as_deref()),
        Command::InfoPower { family, ngon_sweep, out } => match (family, ngon_sweep) {
            (_, Some(range)) => sweep(cli, units, range, out.as_deref()),
            (Some(name), None) if name.eq_ignore_ascii_case("all") => reference_table(cli, units, out.as_deref()),
            (Some(name), None) => info_power(cli, units, &make_hs_povm(name.parse()?)?, out.as_deref()),
            (None, None) => Err(usage("one of --family or --ngon-sweep is required")),
        },
        Command::NgonSweep { range, out } => sweep(cli, units, range, out.as_deref()),
        Command::Dynent { source, rotation, block, out } => dynent(units, &load(source)?, rotation, *block, out.as_deref()),
        Command::Bifurcation { alphas, grid, out } => bifurcation(units, alphas, *grid, out.as_deref()),
        Command::Table5 { out } => reference_table(cli, units, out.as_deref()),
    }
}

#[derive(Serialize)]
struct ValidateOutput {
    schema_version: u32,
    family: Family,
    k: usize,
    design: DesignReport,
    group: String,
    group_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    symmetry: Option<SymmetryInfo>,
}

#[derive(Serialize)]
struct SymmetryInfo {
    stabilizer_order: usize,
    n_a: usize,
    n_s: usize,
    n_v: f64,
    value_classes: usize,
    degree_bound: usize,
    value_degree_bound: usize,
    interpolation_set: Vec<f64>,
}

fn validate(cli: &Cli, povm: &HsPovm, out: Option<&Path>) -> Result<Outcome> {
    let design = validate_povm_seeded(povm.vectors(), cli.seed);
    let group = povm.group();
    let symmetry = povm.family().is_highly_symmetric().then(|| {
        let v = povm.fiducial();
        let stab = group.stabilizer(v).order();
        let profile = group.double_coset_profile(v);
        SymmetryInfo {
            stabilizer_order: stab,
            n_a: profile.n_a,
            n_s: profile.n_s,
            n_v: profile.n_v,
            value_classes: profile.value_classes,
            degree_bound: degree_bound(&profile, povm.k(), stab),
            value_degree_bound: profile.value_degree_bound(),
            interpolation_set: interpolation_set(povm),
        }
    });
    let report = ValidateOutput {
        schema_version: SCHEMA_VERSION,
        family: povm.family(),
        k: povm.k(),
        group: format!("{:?}", group.kind()),
        group_order: group.order(),
        symmetry,
        design,
    };
    let text = match format_or(cli, Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv | Format::Table => {
            let d = &report.design;
            let rows = vec![
                vec!["family".into(), report.family.to_string()],
                vec!["k".into(), report.k.to_string()],
                vec!["is_povm".into(), d.is_povm.to_string()],
                vec!["informationally_complete".into(), d.informationally_complete.to_string()],
                vec!["design_order".into(), d.design_order.to_string()],
                vec!["group".into(), format!("{} (order {})", report.group, report.group_order)],
            ];
            text_table(&["field", "value"], &rows)
        }
    };
    emit(out, &text)?;
    Ok(if report.design.is_povm {
        Outcome::Success
    } else {
        Outcome::CheckFailed("the vectors do not form a POVM".into())
    })
}

fn entropy_map(cli: &Cli, units: Units, povm: &HsPovm, grid: usize, kernel: EntropyKernel, out: Option<&Path>) -> Result<Outcome> {
    if grid == 0 {
        return Err(usage("--grid must be positive"));
    }
    let k = povm.k();
    let hmax = kernel.entropy(&vec![1.0 / k as f64; k]);
    let samples = sample_landscape(povm, grid, kernel);
    let text = match format_or(cli, Format::Csv) {
        Format::Csv => {
            let meta = format!("family={} kernel={} grid={grid} units={}", povm.family(), kernel, units.name());
            let rows = samples.iter().map(|(u, h)| {
                vec![
                    machine(u.x()),
                    machine(u.y()),
                    machine(u.z()),
                    machine(units.scale(*h)),
                    machine(units.scale(hmax - h)),
                ]
            });
            csv(&meta, &["x", "y", "z", "H", "Hrel"], rows)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct MapOutput {
                schema_version: u32,
                family: Family,
                kernel: EntropyKernel,
                units: &'static str,
                points: Vec<[f64; 5]>,
            }
            json(&MapOutput {
                schema_version: SCHEMA_VERSION,
                family: povm.family(),
                kernel,
                units: units.name(),
                points: samples
                    .iter()
                    .map(|(u, h)| [u.x(), u.y(), u.z(), units.scale(*h), units.scale(hmax - h)])
                    .collect(),
            })?
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = samples
                .iter()
                .map(|(u, h)| vec![table(u.x()), table(u.y()), table(u.z()), table(units.scale(*h)), table(units.scale(hmax - h))])
                .collect();
            text_table(&["x", "y", "z", "H", "Hrel"], &rows)
        }
    };
    emit(out, &text)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct PointOut {
    location: BlochVector,
    value: f64,
    kind: povm_entropy::entropy::CriticalKind,
    type_label: povm_entropy::entropy::TypeLabel,
    classifier_statistic: Option<f64>,
}

impl PointOut {
    fn new(c: &CriticalPoint, units: Units) -> Self {
        PointOut {
            location: c.location,
            value: units.scale(c.value),
            kind: c.kind,
            type_label: c.type_label,
            classifier_statistic: c.classifier_statistic,
        }
    }
}

fn extrema(povm: &HsPovm, grid: usize, mode: Mode) -> Result<Vec<CriticalPoint>> {
    if grid == 0 {
        return Err(usage("--grid must be positive"));
    }
    Ok(find_extrema_with(povm, mode, &ExtremaOptions { grid, ..Default::default() }))
}

fn minimize(units: Units, povm: &HsPovm, grid: usize, mode: ModeArg, out: Option<&Path>) -> Result<Outcome> {
    let mode = match mode {
        ModeArg::Min => Mode::Min,
        ModeArg::Max => Mode::Max,
    };
    let found = extrema(povm, grid, mode)?;
    #[derive(Serialize)]
    struct MinimizeOutput {
        schema_version: u32,
        family: Family,
        mode: Mode,
        grid: usize,
        units: &'static str,
        extrema: Vec<PointOut>,
        /// Angular distance to the antipodal orbit (minimization, symmetric families).
        antipodal_orbit_error: Option<f64>,
        /// `ln k − W` from the closed form, when available.
        expected_minimum: Option<f64>,
    }
    let symmetric_min = mode == Mode::Min && povm.family().is_highly_symmetric();
    let orbit_err = symmetric_min
        .then(|| orbit_match_error(&found.iter().map(|c| c.location).collect::<Vec<_>>(), &antipodal_orbit(povm)))
        .flatten();
    let expected = if symmetric_min {
        informational_power(povm).ok().map(|w| units.scale((povm.k() as f64).ln() - w))
    } else {
        None
    };
    let report = MinimizeOutput {
        schema_version: SCHEMA_VERSION,
        family: povm.family(),
        mode,
        grid,
        units: units.name(),
        extrema: found.iter().map(|c| PointOut::new(c, units)).collect(),
        antipodal_orbit_error: orbit_err,
        expected_minimum: expected,
    };
    emit(out, &json(&report)?)?;
    Ok(Outcome::Success)
}

fn parse_point(s: &str) -> Result<BlochVector> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| usage(format!("point must be x,y,z, got `{s}`")))?;
    let [x, y, z] = parts[..] else {
        return Err(usage(format!("point must have three coordinates, got `{s}`")));
    };
    Ok(BlochVector::normalize(Vector3::new(x, y, z))?)
}

fn classify(units: Units, povm: &HsPovm, point: Option<&str>, grid: usize, out: Option<&Path>) -> Result<Outcome> {
    #[derive(Serialize)]
    struct ClassifyOutput {
        schema_version: u32,
        family: Family,
        units: &'static str,
        points: Vec<PointOut>,
    }
    let points = match point {
        Some(p) => vec![classify_inert_point(&parse_point(p)?, povm)?],
        None => {
            let mut v = extrema(povm, grid, Mode::Min)?;
            v.extend(extrema(povm, grid, Mode::Max)?);
            v
        }
    };
    let report = ClassifyOutput {
        schema_version: SCHEMA_VERSION,
        family: povm.family(),
        units: units.name(),
        points: points.iter().map(|c| PointOut::new(c, units)).collect(),
    };
    emit(out, &json(&report)?)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
#[serde(untagged)]
enum AnyCertificate {
    Shannon(Box<HermiteCertificate>),
    Kernel(KernelCertificate),
}

fn certify(cli: &Cli, family: &str, precision: u32, kernel: Option<EntropyKernel>, out: Option<&Path>) -> Result<Outcome> {
    if !(64..=4096).contains(&precision) {
        return Err(usage("--precision must lie in 64..=4096 bits"));
    }
    let families = families_for(family)?;
    let mut certs = Vec::new();
    let mut failures = Vec::new();
    for f in &families {
        let povm = make_hs_povm(*f)?;
        match kernel {
            None | Some(EntropyKernel::Shannon) => {
                let c = certify_minimum_from(&povm, precision)?;
                if !c.valid {
                    failures.push(format!("{f}: {}", c.reason.clone().unwrap_or_default()));
                }
                certs.push(AnyCertificate::Shannon(Box::new(c)));
            }
            Some(k) => {
                let c = kernel_certificate(&povm, k)?;
                if !c.below {
                    failures.push(format!("{f}: interpolant not below the profile"));
                }
                certs.push(AnyCertificate::Kernel(c));
            }
        }
    }
    let text = match format_or(cli, Format::Json) {
        Format::Json if certs.len() == 1 => {
            #[derive(Serialize)]
            struct One<'a> {
                schema_version: u32,
                #[serde(flatten)]
                certificate: &'a AnyCertificate,
            }
            json(&One { schema_version: SCHEMA_VERSION, certificate: &certs[0] })?
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Many<'a> {
                schema_version: u32,
                certificates: &'a [AnyCertificate],
            }
            json(&Many { schema_version: SCHEMA_VERSION, certificates: &certs })?
        }
        Format::Csv | Format::Table => {
            let rows: Vec<Vec<String>> = certs
                .iter()
                .map(|c| match c {
                    AnyCertificate::Shannon(c) => vec![
                        c.family.to_string(),
                        c.valid.to_string(),
                        c.degree.to_string(),
                        c.value_degree_bound.to_string(),
                        format!("{:.2e}", c.below_check.min_gap + 0.0),
                        c.sturm_root_count.map_or("-".into(), |n| n.to_string()),
                        format!("{:.1}", c.elapsed_ms),
                    ],
                    AnyCertificate::Kernel(c) => vec![
                        c.family.to_string(),
                        c.below.to_string(),
                        c.degree.to_string(),
                        "-".into(),
                        format!("{:.2e}", c.below_check.min_gap + 0.0),
                        "-".into(),
                        "-".into(),
                    ],
                })
                .collect();
            text_table(&["family", "valid", "degree", "bound", "min gap", "Sturm roots", "ms"], &rows)
        }
    };
    emit(out, &text)?;
    Ok(if failures.is_empty() {
        Outcome::Success
    } else {
        Outcome::CheckFailed(failures.join("; "))
    })
}

fn info_power(cli: &Cli, units: Units, povm: &HsPovm, out: Option<&Path>) -> Result<Outcome> {
    let r = info_power_report(povm)?;
    let text = match format_or(cli, Format::Json) {
        Format::Json => {
            #[derive(Serialize)]
            struct InfoOutput {
                schema_version: u32,
                family: Family,
                units: &'static str,
                w: f64,
                h_min: f64,
                average_relative_entropy: f64,
                uncertainty_bound: Option<f64>,
            }
            json(&InfoOutput {
                schema_version: SCHEMA_VERSION,
                family: r.family,
                units: units.name(),
                w: units.scale(r.w),
                h_min: units.scale(r.h_min),
                average_relative_entropy: units.scale(r.average_relative_entropy),
                uncertainty_bound: r.uncertainty_bound.map(|x| units.scale(x)),
            })?
        }
        Format::Csv => csv(
            &format!("units={}", units.name()),
            &["family", "W", "H_min", "average_relative_entropy"],
            [vec![
                r.family.to_string(),
                machine(units.scale(r.w)),
                machine(units.scale(r.h_min)),
                machine(units.scale(r.average_relative_entropy)),
            ]],
        ),
        Format::Table => text_table(
            &["family", "W", "H_min"],
            &[vec![r.family.to_string(), table(units.scale(r.w)), table(units.scale(r.h_min))]],
        ),
    };
    emit(out, &text)?;
    Ok(Outcome::Success)
}

fn parse_range(s: &str) -> Result<(u32, u32)> {
    let bad = || usage(format!("range must look like 3..64, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a < 2 || b < a {
        return Err(usage(format!("range needs 2 ≤ A ≤ B, got `{s}`")));
    }
    Ok((a, b))
}

fn sweep(cli: &Cli, units: Units, range: &str, out: Option<&Path>) -> Result<Outcome> {
    let (a, b) = parse_range(range)?;
    let rows: Vec<(u32, f64, f64)> = (a..=b)
        .map(|n| {
            let w = ngon_informational_power(n)?;
            Ok((n, units.scale(w), units.scale(f64::from(n).ln() - w)))
        })
        .collect::<Result<_>>()?;
    let text = match format_or(cli, Format::Csv) {
        Format::Csv => csv(
            &format!("units={}", units.name()),
            &["n", "W", "H_min"],
            rows.iter().map(|(n, w, h)| vec![n.to_string(), machine(*w), machine(*h)]),
        ),
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                n: u32,
                w: f64,
                h_min: f64,
            }
            #[derive(Serialize)]
            struct SweepOutput {
                schema_version: u32,
                units: &'static str,
                rows: Vec<Row>,
            }
            json(&SweepOutput {
                schema_version: SCHEMA_VERSION,
                units: units.name(),
                rows: rows.iter().map(|&(n, w, h_min)| Row { n, w, h_min }).collect(),
            })?
        }
        Format::Table => {
            let t: Vec<Vec<String>> = rows.iter().map(|(n, w, h)| vec![n.to_string(), table(*w), table(*h)]).collect();
            text_table(&["n", "W", "H_min"], &t)
        }
    };
    emit(out, &text)?;
    Ok(Outcome::Success)
}

fn reference_table(cli: &Cli, units: Units, out: Option<&Path>) -> Result<Outcome> {
    let rows = info_power_table()?;
    let worst = rows.iter().map(|r| r.delta.abs()).fold(0.0, f64::max);
    let scaled: Vec<InfoPowerRow> = rows
        .iter()
        .map(|r| InfoPowerRow {
            label: r.label.clone(),
            computed: units.scale(r.computed),
            reference: units.scale(r.reference),
            delta: units.scale(r.delta),
        })
        .collect();
    let text = match format_or(cli, Format::Table) {
        Format::Table => {
            let t: Vec<Vec<String>> = scaled
                .iter()
                .map(|r| vec![r.label.clone(), table(r.computed), table(r.reference), format!("{:+.2e}", r.delta)])
                .collect();
            let mut s = text_table(&["family", "W", "reference", "delta"], &t);
            s.push_str(&format!("max |delta| = {worst:.2e} nats\n"));
            s
        }
        Format::Csv => csv(
            &format!("units={}", units.name()),
            &["family", "W", "reference", "delta"],
            scaled.iter().map(|r| vec![r.label.clone(), machine(r.computed), machine(r.reference), machine(r.delta)]),
        ),
        Format::Json => {
            #[derive(Serialize)]
            struct TableOutput<'a> {
                schema_version: u32,
                units: &'static str,
                max_abs_delta: f64,
                rows: &'a [InfoPowerRow],
            }
            json(&TableOutput { schema_version: SCHEMA_VERSION, units: units.name(), max_abs_delta: units.scale(worst), rows: &scaled })?
        }
    };
    emit(out, &text)?;
    Ok(if worst < REFERENCE_TOL {
        Outcome::Success
    } else {
        Outcome::CheckFailed(format!("max |delta| {worst:.2e} exceeds {REFERENCE_TOL:e}"))
    })
}

/// Parses `axis=z,angle=0.78` (axis `x`, `y`, `z` or `a:b:c`).
fn parse_rotation(s: &str) -> Result<([f64; 3], f64)> {
    let mut axis = None;
    let mut angle = None;
    for part in s.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("rotation entries must be key=value, got `{part}`")))?;
        match key.trim() {
            "axis" => axis = Some(parse_axis(value.trim()).ok_or_else(|| usage(format!("bad axis `{value}`")))?),
            "angle" => angle = Some(value.trim().parse::<f64>().map_err(|_| usage(format!("bad angle `{value}`")))?),
            other => bail!(Usage(format!("unknown rotation key `{other}`"))),
        }
    }
    match (axis, angle) {
        (Some(a), Some(t)) if t.is_finite() => Ok((a, t)),
        _ => Err(usage("rotation needs axis=... and a finite angle=...")),
    }
}

fn dynent(units: Units, povm: &HsPovm, rotation: &str, block: Option<usize>, out: Option<&Path>) -> Result<Outcome> {
    let (axis, angle) = parse_rotation(rotation)?;
    let r = UnitaryAsRotation::about(Vector3::from(axis), angle)?;
    let t = transition_matrix(&r, povm);
    let m = t.matrix();
    #[derive(Serialize)]
    struct Blocks {
        block_entropies: Vec<f64>,
        rate_estimate: f64,
    }
    let blocks = match block {
        None => None,
        Some(0) => return Err(usage("--block must be at least 1")),
        Some(n) => {
            let hs: Vec<f64> = (1..=n).map(|j| block_entropy(&r, povm, j)).collect::<povm_entropy::Result<_>>()?;
            let rate = if n == 1 { hs[0] } else { hs[n - 1] - hs[n - 2] };
            Some(Blocks { block_entropies: hs.iter().map(|h| units.scale(*h)).collect(), rate_estimate: units.scale(rate) })
        }
    };
    #[derive(Serialize)]
    struct DynentOutput {
        schema_version: u32,
        family: Family,
        units: &'static str,
        axis: [f64; 3],
        angle: f64,
        dynamical_entropy: f64,
        measurement_entropy: f64,
        stochasticity_error: f64,
        transition_matrix: Vec<Vec<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        blocks: Option<Blocks>,
    }
    let report = DynentOutput {
        schema_version: SCHEMA_VERSION,
        family: povm.family(),
        units: units.name(),
        axis,
        angle,
        dynamical_entropy: units.scale(dynamical_entropy(&r, povm)),
        measurement_entropy: units.scale(measurement_entropy(povm)),
        stochasticity_error: t.stochasticity_error(),
        transition_matrix: (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect(),
        blocks,
    };
    emit(out, &json(&report)?)?;
    Ok(Outcome::Success)
}

fn bifurcation(units: Units, alphas: &[f64], grid: usize, out: Option<&Path>) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Sample {
        alpha: f64,
        regime: &'static str,
        minima: Vec<PointOut>,
    }
    #[derive(Serialize)]
    struct BifurcationOutput {
        schema_version: u32,
        threshold: f64,
        residual: f64,
        units: &'static str,
        samples: Vec<Sample>,
    }
    let a0 = rectangle_bifurcation_threshold();
    let samples = alphas
        .iter()
        .map(|&a| {
            let povm = make_rectangle_povm(a)?;
            let found = extrema(&povm, grid, Mode::Min)?;
            Ok(Sample {
                alpha: a,
                regime: if a < a0 { "below" } else { "above" },
                minima: found.iter().map(|c| PointOut::new(c, units)).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = BifurcationOutput {
        schema_version: SCHEMA_VERSION,
        threshold: a0,
        residual: bifurcation_function(a0),
        units: units.name(),
        samples,
    };
    emit(out, &json(&report)?)?;
    Ok(Outcome::Success)
}

fn parse_axis(s: &str) -> Option<[f64; 3]> {
    let v = match s {
        "x" => [1.0, 0.0, 0.0],
        "y" => [0.0, 1.0, 0.0],
        "z" => [0.0, 0.0, 1.0],
        _ => {
            let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
            <[f64; 3]>::try_from(parts).ok()?
        }
    };
    (v.iter().map(|c| c * c).sum::<f64>() > 0.0).then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_strings() {
        let (a, t) = parse_rotation("axis=z,angle=0.5").unwrap();
        assert_eq!((a, t), ([0.0, 0.0, 1.0], 0.5));
        assert_eq!(parse_rotation("angle=1,axis=1:1:0").unwrap().0, [1.0, 1.0, 0.0]);
        assert!(parse_rotation("axis=0:0:0,angle=1").is_err());
        assert!(parse_rotation("axis=z").is_err());
        assert!(parse_rotation("axis=z,angle=1,spin=2").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..64").unwrap(), (3, 64));
        assert_eq!(parse_range("5..=5").unwrap(), (5, 5));
        assert!(parse_range("1..4").is_err());
        assert!(parse_range("9..4").is_err());
        assert!(parse_range("abc").is_err());
    }
}
