use std::fs;
use std::path::Path;
use std::time::Instant;

use nalgebra::DVector;
use serde::Serialize;
use stressflex_core::analysis::{
    lemma_random_suite, stress_flex_table, stresses_for_analysis, summarize, InstanceReport, LemmaSuite,
    ProjectionReport, StabilityVerdict, StressFlexTable, SweepSummary,
};
use stressflex_core::polytope::{random_slide_factors, NamedPolytope, PolytopeSource};
use stressflex_core::stress::Selection;
use stressflex_core::*;

use crate::args::{AnalyzeArgs, Command, CommonArgs, Format, LabelingArg, ModelArgs, ProjectArgs, SlideArgs, SweepArgs};
use crate::error::CliError;
use crate::json::{format_float, to_string};

pub const SCHEMA: u32 = 1;

/// Random vectors per certified stress in the lemma check.
const LEMMA_VECTORS: usize = 1000;

/// Rendered report and the exit code it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub exit_code: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDescriptor {
    Named { name: String },
    Off { path: String },
    RandomSimple { seed: u64, planes: u64 },
}

struct Input {
    descriptor: InputDescriptor,
    source: PolytopeSource,
}

fn resolve_input(model: &ModelArgs, seed: u64) -> Result<Input, CliError> {
    if let Some(name) = &model.model {
        let named: NamedPolytope = name.parse().map_err(|e: polytope::PolytopeError| CliError::input(e.to_string()))?;
        return Ok(Input {
            descriptor: InputDescriptor::Named { name: named.as_str().to_string() },
            source: PolytopeSource::Named(named),
        });
    }
    if let Some(path) = &model.off {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        let poly = parse_off(&text)?;
        return Ok(Input {
            descriptor: InputDescriptor::Off { path: path.display().to_string() },
            source: PolytopeSource::Fixed(Box::new(poly)),
        });
    }
    if model.random_simple {
        return Ok(Input {
            descriptor: InputDescriptor::RandomSimple { seed, planes: model.planes },
            source: PolytopeSource::RandomSimple { planes: model.planes as usize },
        });
    }
    Err(CliError::input("one of --model, --off or --random-simple is required"))
}

pub fn parse_apex(spec: &str, dim: usize) -> Result<ApexStrategy, CliError> {
    match spec {
        "centroid" => Ok(ApexStrategy::Centroid),
        "interior-random" | "interior" => Ok(ApexStrategy::InteriorRandom),
        "exterior-random" | "exterior" => Ok(ApexStrategy::ExteriorRandom),
        coords => {
            let values: Result<Vec<f64>, _> = coords.split(',').map(|t| t.trim().parse::<f64>()).collect();
            let values = values.map_err(|_| CliError::input(format!("invalid --apex {coords:?}")))?;
            if values.len() != dim {
                return Err(CliError::input(format!("--apex has {} coordinates, polytope has dimension {dim}", values.len())));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(CliError::input("--apex coordinates must be finite"));
            }
            Ok(ApexStrategy::Explicit(values))
        }
    }
}

fn tolerances(common: &CommonArgs) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    if !(common.tol_rank > 0.0 && common.tol_rank < 1.0) {
        return Err(CliError::input("--tol-rank must lie in (0, 1)"));
    }
    if !(common.tol_residual > 0.0 && common.tol_residual < tol.residual_fails) {
        return Err(CliError::input(format!("--tol-residual must lie in (0, {:e})", tol.residual_fails)));
    }
    tol.rank = common.tol_rank;
    tol.residual_holds = common.tol_residual;
    Ok(tol)
}

fn labeling(arg: LabelingArg) -> Labeling {
    match arg {
        LabelingArg::Tensegrity => Labeling::Tensegrity,
        LabelingArg::Bars => Labeling::Bars,
    }
}

/// The command line that reproduces a report, with `--out` and `--timing` left off.
fn invocation(command: &str, model: &ModelArgs, common: &CommonArgs, extra: &[(&str, String)]) -> Vec<String> {
    let mut out = vec![command.to_string()];
    if let Some(m) = &model.model {
        out.extend(["--model".to_string(), m.clone()]);
    }
    if let Some(p) = &model.off {
        out.extend(["--off".to_string(), p.display().to_string()]);
    }
    if model.random_simple {
        out.extend(["--random-simple".to_string(), "--planes".to_string(), model.planes.to_string()]);
    }
    for (flag, value) in extra {
        out.push(format!("--{flag}"));
        if !value.is_empty() {
            out.push(value.clone());
        }
    }
    let label = match common.labeling {
        LabelingArg::Tensegrity => "tensegrity",
        LabelingArg::Bars => "bars",
    };
    let format = match common.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    out.extend([
        "--seed".to_string(),
        common.seed.to_string(),
        "--tol-rank".to_string(),
        format!("{:e}", common.tol_rank),
        "--tol-residual".to_string(),
        format!("{:e}", common.tol_residual),
        "--labeling".to_string(),
        label.to_string(),
        "--format".to_string(),
        format.to_string(),
    ]);
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ApexReport {
    pub strategy: &'static str,
    pub point: Vec<f64>,
    /// `None` when interiority cannot be decided (non-convex input).
    pub interior: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Dimensions {
    pub n_vertices: usize,
    pub n_points: usize,
    pub n_edges: usize,
    pub rank: usize,
    pub rank_gap_ratio: Option<f64>,
    pub rank_ambiguous: bool,
    pub kernel_dim: usize,
    pub trivial_flex_dim: usize,
    pub nontrivial_flex_dim: usize,
    pub flex_split_consistent: bool,
    pub stress_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IzmestievReport {
    /// `certified`, `failed` or `error`.
    pub status: &'static str,
    pub certification_expected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<Selection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_checks: Option<Vec<&'static str>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma: Option<LemmaSuite>,
}

/// A report section that either succeeded or records why it could not run.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Section<T> {
    Done(T),
    Skipped { error: String },
}

impl<T> Section<T> {
    fn from_result<E: std::fmt::Display>(r: Result<T, E>) -> Self {
        match r {
            Ok(v) => Section::Done(v),
            Err(e) => Section::Skipped { error: e.to_string() },
        }
    }
}

/// Everything computed from one coned framework.
#[derive(Debug, Clone, Serialize)]
pub struct FrameworkAnalysis {
    pub dimensions: Dimensions,
    pub izmestiev: IzmestievReport,
    pub stress_flex: StressFlexTable,
    pub stability: Section<StabilityVerdict>,
}

impl FrameworkAnalysis {
    fn certification_failed(&self) -> bool {
        self.izmestiev.certification_expected && self.izmestiev.status != "certified"
    }
}

fn analyze_framework(fw: &ConedFramework, expected: bool, seed: u64, tol: &Tolerances) -> Result<FrameworkAnalysis, CliError> {
    let analysis_error = |e: &dyn std::fmt::Display| CliError::Analysis(e.to_string());
    let rank = rigidity_matrix(fw).rank(tol);
    let flexes = flex_space(fw, tol).map_err(|e| analysis_error(&e))?;
    let basis = stress_space(fw, tol);
    let iz = izmestiev_stress(fw, tol);
    let stresses = stresses_for_analysis(&basis, &iz);
    let table = stress_flex_table(fw, &stresses, &flexes.nontrivial_flexes(), tol).map_err(|e| analysis_error(&e))?;

    let izmestiev = match &iz {
        Ok(s) => {
            let passed = s.certificate.passed();
            IzmestievReport {
                status: if passed { "certified" } else { "failed" },
                certification_expected: expected,
                error: None,
                selection: Some(s.selection),
                failed_checks: Some(s.certificate.failed()),
                certificate: Some(s.certificate.clone()),
                alpha: Some(s.alpha.iter().copied().collect()),
                b: Some(s.b),
                lemma: passed.then(|| lemma_random_suite(&s.omega, LEMMA_VECTORS, seed, tol)),
            }
        }
        Err(e) => IzmestievReport {
            status: "error",
            certification_expected: expected,
            error: Some(e.to_string()),
            selection: None,
            failed_checks: None,
            certificate: None,
            alpha: None,
            b: None,
            lemma: None,
        },
    };
    // Stability needs a stress; the certified one if available, else the first basis element.
    let stability = match (&iz, basis.matrices.first()) {
        (Ok(s), _) if s.certificate.passed() => Section::from_result(stability_test(fw, &s.omega, tol)),
        (_, Some(omega)) => Section::from_result(stability_test(fw, omega, tol)),
        (_, None) => Section::Skipped { error: "no equilibrium stress".to_string() },
    };
    Ok(FrameworkAnalysis {
        dimensions: Dimensions {
            n_vertices: fw.n_base(),
            n_points: fw.n_points(),
            n_edges: fw.edges().len(),
            rank: rank.rank,
            rank_gap_ratio: rank.gap_ratio,
            rank_ambiguous: rank.ambiguous,
            kernel_dim: flexes.kernel_dim(),
            trivial_flex_dim: flexes.trivial.ncols(),
            nontrivial_flex_dim: flexes.nontrivial.ncols(),
            flex_split_consistent: flexes.split_consistent,
            stress_dim: basis.dim(),
        },
        izmestiev,
        stress_flex: table,
        stability,
    })
}

fn certification_expected(poly: &Polytope, interior: Option<bool>, tol: &Tolerances) -> bool {
    interior == Some(true) && poly.is_convex(tol.geom) != Some(false)
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub command: &'static str,
    pub invocation: Vec<String>,
    pub input: InputDescriptor,
    pub seed: u64,
    pub labeling: &'static str,
    pub tolerances: Tolerances,
    pub apex: ApexReport,
    #[serde(flatten)]
    pub analysis: FrameworkAnalysis,
    pub projection: Section<ProjectionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

fn labeling_name(l: LabelingArg) -> &'static str {
    match l {
        LabelingArg::Tensegrity => "tensegrity",
        LabelingArg::Bars => "bars",
    }
}

fn place_apex(poly: &Polytope, spec: &str, seed: u64, tol: &Tolerances) -> Result<(ApexStrategy, DVector<f64>, ApexReport), CliError> {
    let strategy = parse_apex(spec, poly.dim())?;
    let point = strategy.place(poly, seed);
    let interior = strategy.interior(poly, &point, tol);
    let report = ApexReport { strategy: strategy.label(), point: point.iter().copied().collect(), interior };
    Ok((strategy, point, report))
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Output, CliError> {
    let start = Instant::now();
    let c = &args.common;
    let tol = tolerances(c)?;
    let input = resolve_input(&args.model, c.seed)?;
    let poly = input.source.build(c.seed)?;
    let (_, apex, apex_report) = place_apex(&poly, &args.apex, c.seed, &tol)?;
    let fw = cone(&poly, &apex, labeling(c.labeling))?;
    let expected = certification_expected(&poly, apex_report.interior, &tol);
    let analysis = analyze_framework(&fw, expected, c.seed, &tol)?;
    let projection = Section::from_result(projection_check(&poly, c.seed, &tol));
    let exit_code = u8::from(analysis.certification_failed());
    let report = AnalysisReport {
        schema: SCHEMA,
        command: "analyze",
        invocation: invocation("analyze", &args.model, c, &[("apex", args.apex.clone())]),
        input: input.descriptor,
        seed: c.seed,
        labeling: labeling_name(c.labeling),
        tolerances: tol,
        apex: apex_report,
        analysis,
        projection,
        wall_clock_seconds: c.timing.then(|| start.elapsed().as_secs_f64()),
    };
    let text = match c.format {
        Format::Json => to_string(&report),
        Format::Csv => residual_csv(&report.analysis.stress_flex)?,
    };
    Ok(Output { text, exit_code })
}

fn residual_csv(table: &StressFlexTable) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["stress", "flex", "relative", "verdict", "residual"]).map_err(csv_error)?;
    for p in &table.pairs {
        let residual = p.residual.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(";");
        w.write_record([p.stress.clone(), p.flex.to_string(), format_float(p.relative), p.verdict.as_str().to_string(), residual])
            .map_err(csv_error)?;
    }
    finish_csv(w)
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Analysis(format!("csv: {e}"))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Analysis(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv writes UTF-8"))
}

/// One line per sweep instance, shared by the JSON and CSV outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub seed: u64,
    pub strategy: &'static str,
    pub apex: Vec<f64>,
    pub interior: Option<bool>,
    pub n_vertices: Option<usize>,
    pub n_edges: Option<usize>,
    pub rank: Option<usize>,
    pub rank_ambiguous: Option<bool>,
    pub stress_dim: Option<usize>,
    pub trivial_flex_dim: Option<usize>,
    pub nontrivial_flex_dim: Option<usize>,
    pub pairs: Option<usize>,
    pub max_relative: Option<f64>,
    pub verdict: Option<&'static str>,
    pub certified: Option<bool>,
    pub error: Option<String>,
}

impl SweepRow {
    fn from_instance(r: &InstanceReport) -> Self {
        SweepRow {
            seed: r.seed,
            strategy: r.strategy,
            apex: r.apex.clone(),
            interior: r.interior,
            n_vertices: Some(r.n_vertices),
            n_edges: Some(r.n_edges),
            rank: Some(r.rank.rank),
            rank_ambiguous: Some(r.rank.ambiguous),
            stress_dim: Some(r.stress_dim),
            trivial_flex_dim: Some(r.trivial_flex_dim),
            nontrivial_flex_dim: Some(r.nontrivial_flex_dim),
            pairs: Some(r.table.pairs.len()),
            max_relative: r.max_relative(),
            verdict: Some(r.verdict().as_str()),
            certified: Some(r.izmestiev_certified),
            error: None,
        }
    }

    fn failed(seed: u64, strategy: &'static str, error: String) -> Self {
        SweepRow {
            seed,
            strategy,
            apex: Vec::new(),
            interior: None,
            n_vertices: None,
            n_edges: None,
            rank: None,
            rank_ambiguous: None,
            stress_dim: None,
            trivial_flex_dim: None,
            nontrivial_flex_dim: None,
            pairs: None,
            max_relative: None,
            verdict: None,
            certified: None,
            error: Some(error),
        }
    }

    const HEADER: [&'static str; 16] = [
        "seed",
        "strategy",
        "apex",
        "interior",
        "n_vertices",
        "n_edges",
        "rank",
        "rank_ambiguous",
        "stress_dim",
        "trivial_flex_dim",
        "nontrivial_flex_dim",
        "pairs",
        "max_relative",
        "verdict",
        "certified",
        "error",
    ];

    fn record(&self) -> Vec<String> {
        fn opt<T: ToString>(x: &Option<T>) -> String {
            x.as_ref().map(T::to_string).unwrap_or_default()
        }
        vec![
            self.seed.to_string(),
            self.strategy.to_string(),
            self.apex.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(";"),
            opt(&self.interior),
            opt(&self.n_vertices),
            opt(&self.n_edges),
            opt(&self.rank),
            opt(&self.rank_ambiguous),
            opt(&self.stress_dim),
            opt(&self.trivial_flex_dim),
            opt(&self.nontrivial_flex_dim),
            opt(&self.pairs),
            self.max_relative.map(format_float).unwrap_or_default(),
            opt(&self.verdict),
            opt(&self.certified),
            opt(&self.error),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutput {
    pub schema: u32,
    pub command: &'static str,
    pub invocation: Vec<String>,
    pub input: InputDescriptor,
    pub first_seed: u64,
    pub count: u64,
    pub apex_strategy: &'static str,
    pub tolerances: Tolerances,
    pub summary: SweepSummary,
    pub rows: Vec<SweepRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

pub fn sweep(args: &SweepArgs) -> Result<Output, CliError> {
    let start = Instant::now();
    let c = &args.common;
    let tol = tolerances(c)?;
    let input = resolve_input(&args.model, c.seed)?;
    let probe = input.source.build(c.seed)?;
    let strategy = parse_apex(&args.apex, probe.dim())?;
    let seeds: Vec<u64> = (0..args.count).map(|k| c.seed.wrapping_add(k)).collect();
    let report = sweep_strong_conjecture(&input.source, &seeds, std::slice::from_ref(&strategy), &tol);

    // Instances are seed-ordered; merge the error list back into that order.
    let mut rows: Vec<SweepRow> = report.instances.iter().map(SweepRow::from_instance).collect();
    rows.extend(report.errors.iter().map(|e| SweepRow::failed(e.seed, e.strategy, e.error.clone())));
    rows.sort_by_key(|r| r.seed.wrapping_sub(c.seed));
    let summary = summarize(&report.instances, report.errors.len(), &tol);

    let out = SweepOutput {
        schema: SCHEMA,
        command: "sweep",
        invocation: invocation(
            "sweep",
            &args.model,
            c,
            &[("apex", args.apex.clone()), ("count", args.count.to_string())],
        ),
        input: input.descriptor,
        first_seed: c.seed,
        count: args.count,
        apex_strategy: strategy.label(),
        tolerances: tol,
        summary,
        rows,
        wall_clock_seconds: c.timing.then(|| start.elapsed().as_secs_f64()),
    };
    let text = match c.format {
        Format::Json => to_string(&out),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(SweepRow::HEADER).map_err(csv_error)?;
            for row in &out.rows {
                w.write_record(row.record()).map_err(csv_error)?;
            }
            finish_csv(w)?
        }
    };
    Ok(Output { text, exit_code: 0 })
}

#[derive(Debug, Clone, Serialize)]
pub struct SlideReport {
    pub schema: u32,
    pub command: &'static str,
    pub invocation: Vec<String>,
    pub input: InputDescriptor,
    pub seed: u64,
    pub labeling: &'static str,
    pub tolerances: Tolerances,
    pub apex: ApexReport,
    pub factors: Vec<f64>,
    pub dims_preserved: bool,
    pub max_relative_before: Option<f64>,
    pub max_relative_after: Option<f64>,
    pub before: FrameworkAnalysis,
    pub after: FrameworkAnalysis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

pub fn slide_cmd(args: &SlideArgs) -> Result<Output, CliError> {
    let start = Instant::now();
    let c = &args.common;
    let tol = tolerances(c)?;
    let input = resolve_input(&args.model, c.seed)?;
    let poly = input.source.build(c.seed)?;
    let (_, apex, apex_report) = place_apex(&poly, &args.apex, c.seed, &tol)?;
    let fw = cone(&poly, &apex, labeling(c.labeling))?;
    let factors =
        if args.unit_factors { vec![1.0; poly.n_vertices()] } else { random_slide_factors(c.seed, poly.n_vertices()) };
    let slid = slide(&fw, &factors)?;

    let expected = certification_expected(&poly, apex_report.interior, &tol);
    let before = analyze_framework(&fw, expected, c.seed, &tol)?;
    // A slid polytope generally has warped faces, so no certificate is expected.
    let after = analyze_framework(&slid, expected && args.unit_factors, c.seed, &tol)?;
    let dims = |a: &FrameworkAnalysis| {
        (a.dimensions.rank, a.dimensions.stress_dim, a.dimensions.trivial_flex_dim, a.dimensions.nontrivial_flex_dim)
    };
    let mut extra = vec![("apex", args.apex.clone())];
    if args.unit_factors {
        extra.push(("unit-factors", String::new()));
    }
    let report = SlideReport {
        schema: SCHEMA,
        command: "slide",
        invocation: invocation("slide", &args.model, c, &extra),
        input: input.descriptor,
        seed: c.seed,
        labeling: labeling_name(c.labeling),
        tolerances: tol,
        apex: apex_report,
        factors,
        dims_preserved: dims(&before) == dims(&after),
        max_relative_before: before.stress_flex.max_relative,
        max_relative_after: after.stress_flex.max_relative,
        before,
        after,
        wall_clock_seconds: c.timing.then(|| start.elapsed().as_secs_f64()),
    };
    let exit_code = u8::from(report.before.certification_failed());
    let text = match c.format {
        Format::Json => to_string(&report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["stage", "stress", "flex", "relative", "verdict"]).map_err(csv_error)?;
            for (stage, a) in [("before", &report.before), ("after", &report.after)] {
                for p in &a.stress_flex.pairs {
                    w.write_record([stage, &p.stress, &p.flex.to_string(), &format_float(p.relative), p.verdict.as_str()])
                        .map_err(csv_error)?;
                }
            }
            finish_csv(w)?
        }
    };
    Ok(Output { text, exit_code })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectOutput {
    pub schema: u32,
    pub command: &'static str,
    pub invocation: Vec<String>,
    pub input: InputDescriptor,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub projection: ProjectionReport,
    /// Residual verdict of the same polytope coned at its centroid.
    pub coned_verdict: ConditionVerdict,
    pub coned_max_relative: Option<f64>,
    pub verdicts_agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

pub fn project(args: &ProjectArgs) -> Result<Output, CliError> {
    let start = Instant::now();
    let c = &args.common;
    let tol = tolerances(c)?;
    let input = resolve_input(&args.model, c.seed)?;
    let poly = input.source.build(c.seed)?;
    let projection = projection_check(&poly, c.seed, &tol).map_err(|e| CliError::Analysis(e.to_string()))?;
    let coned = analysis::analyze_instance(&poly, &ApexStrategy::Centroid, c.seed, &tol)
        .map_err(|e| CliError::Analysis(e.to_string()))?;
    let out = ProjectOutput {
        schema: SCHEMA,
        command: "project",
        invocation: invocation("project", &args.model, c, &[]),
        input: input.descriptor,
        seed: c.seed,
        tolerances: tol,
        verdicts_agree: agree(projection.verdict, coned.verdict()),
        coned_verdict: coned.verdict(),
        coned_max_relative: coned.max_relative(),
        projection,
        wall_clock_seconds: c.timing.then(|| start.elapsed().as_secs_f64()),
    };
    let text = match c.format {
        Format::Json => to_string(&out),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["stress", "flex", "cond1_relative", "cond2_relative", "cond1", "cond2"]).map_err(csv_error)?;
            for r in &out.projection.rows {
                let cond1 = r.cond1.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(";");
                w.write_record([
                    r.stress.to_string(),
                    r.flex.to_string(),
                    format_float(r.cond1_relative),
                    format_float(r.cond2_relative),
                    cond1,
                    format_float(r.cond2),
                ])
                .map_err(csv_error)?;
            }
            finish_csv(w)?
        }
    };
    Ok(Output { text, exit_code: 0 })
}

/// Vacuous on one side counts as agreement with holds on the other: both say
/// nothing is violated.
pub fn agree(a: ConditionVerdict, b: ConditionVerdict) -> bool {
    use ConditionVerdict::*;
    a == b || matches!((a, b), (Holds, Vacuous) | (Vacuous, Holds))
}

pub fn run(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Analyze(a) => analyze(a),
        Command::Sweep(a) => sweep(a),
        Command::Slide(a) => slide_cmd(a),
        Command::Project(a) => project(a),
    }
}

/// Writes to `--out` when given; otherwise returns the text for stdout.
pub fn deliver(output: &Output, out: Option<&Path>) -> Result<Option<String>, CliError> {
    match out {
        Some(path) => {
            fs::write(path, &output.text)?;
            Ok(None)
        }
        None => Ok(Some(output.text.clone())),
    }
}

pub fn out_path(command: &Command) -> Option<&Path> {
    let common = match command {
        Command::Analyze(a) => &a.common,
        Command::Sweep(a) => &a.common,
        Command::Slide(a) => &a.common,
        Command::Project(a) => &a.common,
    };
    common.out.as_deref()
}
