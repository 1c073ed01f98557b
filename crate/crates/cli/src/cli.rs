//! Command-line surface. `run` is the whole program minus process exit.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand};
use spherolimb_core::nalgebra::Vector6;
use spherolimb_core::{
    analyze_limb, assemble_extended_jacobian, block_inverse, build_limb, build_robot, catalog,
    catalog_counts, check_case_conditions, check_geometric_propositions, count_robots, linalg,
    pitch, platform_twist_space, project_feasible, propositions::Proposition, verify_all,
    verify_so3_platform, verify_variant, CaseTag, CatalogCounts, ConditionChecklist,
    ConstraintReport, Error, PitchClass, PropositionReport, Screw, SystemFamily, VariantDescriptor,
    VerificationReport,
};

use crate::render::{fmt_num, fmt_vec, table, to_csv, to_jsonl, Record, ReportFormat};
use crate::spec_file::{parse_limb_spec, LimbSpecFile, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest proposition residual accepted by `props`.
const PROPOSITION_BOUND: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(
    name = "spherolimb",
    version,
    about = "Constraint analysis and limb enumeration for spherical parallel robots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the limb-variant table and the robot counts.
    Catalog {
        #[arg(long, value_enum, default_value = "human")]
        format: ReportFormat,
        /// Only rows of this family, e.g. `5$0`, `3$0-2$inf` or `S3_0_2inf`.
        #[arg(long)]
        category: Option<String>,
    },
    /// Constraint analysis of a limb-spec file.
    Analyze {
        limbspec: PathBuf,
        /// Evaluate this descriptor's condition list (overrides the file's).
        #[arg(long)]
        checklist: Option<String>,
        #[arg(long, value_enum, default_value = "human")]
        format: ReportFormat,
    },
    /// Randomized necessary-condition check of table rows.
    #[command(group(ArgGroup::new("which").required(true).args(["descriptor", "all"])))]
    Verify {
        descriptor: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "human")]
        format: ReportFormat,
    },
    /// Build a three-limb robot from table rows and check its platform.
    Robot {
        #[arg(num_args = 3, required = true, value_names = ["D1", "D2", "D3"])]
        descriptors: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "human")]
        format: ReportFormat,
    },
    /// Symmetric and asymmetric robot counts.
    Counts {
        /// Number of limb types (default: the table's).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limbs: Option<u64>,
        #[arg(long, value_enum, default_value = "human")]
        format: ReportFormat,
    },
    /// Numerical check of the four finite-motion propositions.
    Props {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "human")]
        format: ReportFormat,
    },
}

struct Output {
    text: String,
    code: i32,
}

fn emit(
    format: ReportFormat,
    human: impl FnOnce() -> String,
    records: impl FnOnce() -> Vec<Record>,
) -> String {
    match format {
        ReportFormat::HumanTable => human(),
        ReportFormat::Csv => to_csv(&records()),
        ReportFormat::JsonLines => to_jsonl(&records()),
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Catalog { format, category } => cmd_catalog(format, category.as_deref()),
        Command::Analyze {
            limbspec,
            checklist,
            format,
        } => cmd_analyze(&limbspec, checklist.as_deref(), format, err),
        Command::Verify {
            descriptor,
            all,
            trials,
            seed,
            format,
        } => cmd_verify(descriptor.as_deref(), all, trials as usize, seed, format),
        Command::Robot {
            descriptors,
            seed,
            format,
        } => cmd_robot(&descriptors, seed, format),
        Command::Counts { limbs, format } => Ok(cmd_counts(limbs, format)),
        Command::Props {
            trials,
            seed,
            format,
        } => Ok(cmd_props(trials as usize, seed, format)),
    };
    match result {
        Ok(o) => {
            if out.write_all(o.text.as_bytes()).is_err() {
                return EXIT_FAILED;
            }
            o.code
        }
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn parse_descriptor(id: &str) -> Result<VariantDescriptor, String> {
    id.parse::<VariantDescriptor>().map_err(|e| e.to_string())
}

/// Case column as printed in the table; only the split families have one.
fn case_label(family: SystemFamily, case: CaseTag) -> String {
    match family {
        SystemFamily::S5_0 | SystemFamily::S4_0_1inf | SystemFamily::S3_0_2inf => case.to_string(),
        _ => "-".into(),
    }
}

fn counts_lines(c: &CatalogCounts) -> String {
    format!(
        "{} symmetric / {} asymmetric / {} total\n",
        c.symmetric, c.asymmetric, c.total_robots
    )
}

fn counts_records(c: &CatalogCounts) -> Vec<Record> {
    let mut rs: Vec<Record> = c
        .per_category
        .iter()
        .map(|(f, n)| {
            Record::new()
                .with("record", "family")
                .with("family", f.label())
                .with("count", *n)
        })
        .collect();
    rs.push(
        Record::new()
            .with("record", "counts")
            .with("total_limbs", c.total_limbs)
            .with("symmetric", c.symmetric)
            .with("asymmetric", c.asymmetric)
            .with("total_robots", c.total_robots),
    );
    rs
}

fn cmd_catalog(format: ReportFormat, category: Option<&str>) -> Result<Output, String> {
    let family = match category {
        None => None,
        Some(c) => Some(
            SystemFamily::parse(c)
                .filter(|f| *f != SystemFamily::Other)
                .ok_or_else(|| {
                    let known: Vec<&str> = SystemFamily::TABLE.iter().map(|f| f.label()).collect();
                    format!(
                        "unknown category {c:?}; expected one of {}",
                        known.join(", ")
                    )
                })?,
        ),
    };
    let rows: Vec<(usize, VariantDescriptor)> = catalog()
        .into_iter()
        .enumerate()
        .filter(|(_, d)| family.is_none_or(|f| d.system() == f))
        .collect();
    let counts = catalog_counts();
    let human = || {
        let body: Vec<Vec<String>> = rows
            .iter()
            .map(|(i, d)| {
                vec![
                    (i + 1).to_string(),
                    d.system().label().to_string(),
                    case_label(d.system(), d.class.case_tag),
                    d.id.clone(),
                    d.note.to_string(),
                ]
            })
            .collect();
        let mut s = table(&["#", "family", "case", "descriptor", "note"], &body);
        s.push('\n');
        let per: Vec<Vec<String>> = counts
            .per_category
            .iter()
            .map(|(f, n)| vec![f.label().to_string(), n.to_string()])
            .collect();
        s.push_str(&table(&["family", "limbs"], &per));
        s.push_str(&format!("{} limb types\n", counts.total_limbs));
        s.push_str(&counts_lines(&counts));
        s
    };
    let records = || {
        let mut rs: Vec<Record> = rows
            .iter()
            .map(|(i, d)| {
                Record::new()
                    .with("record", "variant")
                    .with("index", i + 1)
                    .with("family", d.system().label())
                    .with("case", case_label(d.system(), d.class.case_tag))
                    .with("id", d.id.clone())
                    .with("intersection_at_center", d.intersection_at_center)
                    .with("redundant", d.redundant)
                    .with("note", d.note)
            })
            .collect();
        rs.extend(counts_records(&counts));
        rs
    };
    Ok(Output {
        text: emit(format, human, records),
        code: EXIT_OK,
    })
}

fn pitch_text(s: &Screw) -> String {
    match pitch(s) {
        Ok(PitchClass::ZeroPitch) => "0".into(),
        Ok(PitchClass::FinitePitch(h)) => fmt_num(h),
        Ok(PitchClass::InfinitePitch) => "inf".into(),
        Err(_) => "-".into(),
    }
}

fn screw_text(s: &Screw) -> String {
    format!(
        "{} | {}",
        fmt_vec(s.a().as_slice()),
        fmt_vec(s.b().as_slice())
    )
}

fn cmd_analyze(
    path: &std::path::Path,
    checklist: Option<&str>,
    format: ReportFormat,
    err: &mut dyn Write,
) -> Result<Output, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: LimbSpecFile = parse_limb_spec(&text).map_err(|e| match e {
        SpecError::Parse(p) => format!("{}:{p}", path.display()),
        other => format!("{}: {other}", path.display()),
    })?;
    for w in &file.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let limb = build_limb(file.spec.clone()).map_err(|e| e.to_string())?;
    let report = analyze_limb(&limb);
    let descriptor = match checklist.map(str::to_string).or(file.descriptor.clone()) {
        Some(id) => Some(parse_descriptor(&id)?),
        None => None,
    };
    let conditions = match &descriptor {
        Some(d) => Some(check_case_conditions(&limb, d).map_err(|e| e.to_string())?),
        None => None,
    };
    let categories: Vec<String> = limb.categories().iter().map(|c| c.to_string()).collect();
    let human = || {
        analyze_human(
            &limb.pattern(),
            &categories,
            &file,
            &report,
            conditions.as_ref(),
        )
    };
    let records = || analyze_records(&limb.pattern(), &categories, &report, conditions.as_ref());
    Ok(Output {
        text: emit(format, human, records),
        code: EXIT_OK,
    })
}

fn analyze_human(
    pattern: &str,
    categories: &[String],
    file: &LimbSpecFile,
    r: &ConstraintReport,
    conditions: Option<&ConditionChecklist>,
) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "limb {pattern} about center {}\n",
        fmt_vec(file.spec.center.as_slice())
    ));
    s.push_str(&format!(
        "family {} case {}\n",
        r.classification.system,
        case_label(r.classification.system, r.classification.case_tag)
    ));
    s.push_str(&format!("categories {}\n", categories.join(" ")));
    s.push_str(&format!(
        "twist rank {} (direction block {}, moment block {})\n",
        r.rank, r.rank_c1, r.rank_c2
    ));
    s.push_str("constraint wrenches [force | moment]\n");
    if r.constraint_wrenches.is_empty() {
        s.push_str("  none\n");
    }
    for (i, w) in r.constraint_wrenches.iter().enumerate() {
        s.push_str(&format!(
            "  w{}  {}  pitch {}\n",
            i + 1,
            screw_text(w),
            pitch_text(w)
        ));
    }
    s.push_str("restriction twists [angular | linear]\n");
    for (i, t) in r.restriction_twists.iter().enumerate() {
        s.push_str(&format!(
            "  t{}  {}  pitch {}\n",
            i + 1,
            screw_text(t),
            pitch_text(t)
        ));
    }
    s.push_str(&format!(
        "necessary condition: {}\n",
        if r.so3_necessary { "holds" } else { "fails" }
    ));
    s.push_str(&format!(
        "largest wrench moment {}\n",
        fmt_num(r.max_moment)
    ));
    s.push_str(&format!(
        "redundant {}\n",
        if r.redundant { "yes" } else { "no" }
    ));
    for d in &r.diagnostics {
        s.push_str(&format!("note: {d}\n"));
    }
    if let Some(c) = conditions {
        s.push_str(&format!("conditions for {}\n", c.descriptor));
        for item in &c.items {
            let mark = if item.pass { "PASS" } else { "FAIL" };
            s.push_str(&format!("  [{mark}] {}: {}\n", item.name, item.text));
            for leaf in &item.leaves {
                s.push_str(&format!(
                    "         {}  ({})\n",
                    leaf.text,
                    fmt_num(leaf.value)
                ));
            }
        }
        s.push_str(&format!(
            "overall {}\n",
            if c.overall { "PASS" } else { "FAIL" }
        ));
    }
    s
}

fn analyze_records(
    pattern: &str,
    categories: &[String],
    r: &ConstraintReport,
    conditions: Option<&ConditionChecklist>,
) -> Vec<Record> {
    let mut rs = vec![Record::new()
        .with("record", "limb")
        .with("pattern", pattern)
        .with("family", r.classification.system.label())
        .with(
            "case",
            case_label(r.classification.system, r.classification.case_tag),
        )
        .with("categories", categories.join(" "))
        .with("rank", r.rank)
        .with("rank_c1", r.rank_c1)
        .with("rank_c2", r.rank_c2)
        .with("so3_necessary", r.so3_necessary)
        .with("redundant", r.redundant)
        .with("max_moment", r.max_moment)];
    let screw_record = |kind: &'static str, i: usize, s: &Screw| {
        Record::new()
            .with("record", kind)
            .with("index", i + 1)
            .with("a", crate::render::Field::Vec(s.a().as_slice().to_vec()))
            .with("b", crate::render::Field::Vec(s.b().as_slice().to_vec()))
            .with("pitch", pitch_text(s))
    };
    for (i, w) in r.constraint_wrenches.iter().enumerate() {
        rs.push(screw_record("constraint_wrench", i, w));
    }
    for (i, t) in r.restriction_twists.iter().enumerate() {
        rs.push(screw_record("restriction_twist", i, t));
    }
    for d in &r.diagnostics {
        rs.push(
            Record::new()
                .with("record", "diagnostic")
                .with("text", d.clone()),
        );
    }
    if let Some(c) = conditions {
        for item in &c.items {
            rs.push(
                Record::new()
                    .with("record", "condition")
                    .with("name", item.name)
                    .with("text", item.text.clone())
                    .with("pass", item.pass),
            );
        }
        rs.push(
            Record::new()
                .with("record", "conditions")
                .with("id", c.descriptor.clone())
                .with("pass", c.overall),
        );
    }
    rs
}

fn status(r: &VerificationReport) -> &'static str {
    if r.redundant {
        "REDUNDANT"
    } else if r.ok() {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_verify(
    descriptor: Option<&str>,
    all: bool,
    trials: usize,
    seed: u64,
    format: ReportFormat,
) -> Result<Output, String> {
    let reports = if all {
        verify_all(trials, seed)
    } else {
        let d = parse_descriptor(descriptor.expect("clap requires one"))?;
        vec![verify_variant(&d, trials, seed)]
    };
    let families: Vec<VariantDescriptor> = reports
        .iter()
        .map(|r| r.id.parse().expect("reports come from table rows"))
        .collect();
    let ok = reports.iter().all(VerificationReport::ok);
    let human = || {
        let body: Vec<Vec<String>> = reports
            .iter()
            .zip(&families)
            .map(|(r, d)| {
                vec![
                    r.id.clone(),
                    d.system().label().to_string(),
                    case_label(d.system(), d.class.case_tag),
                    format!("{}/{}", r.passes, r.trials),
                    fmt_num(r.max_moment_residual),
                    fmt_num(r.max_center_velocity),
                    status(r).to_string(),
                ]
            })
            .collect();
        let mut s = table(
            &[
                "descriptor",
                "family",
                "case",
                "passes",
                "max moment",
                "max center velocity",
                "status",
            ],
            &body,
        );
        for r in &reports {
            for n in &r.notes {
                s.push_str(&format!("{}: {n}\n", r.id));
            }
        }
        let usable: Vec<&VerificationReport> = reports.iter().filter(|r| !r.redundant).collect();
        let passing = usable.iter().filter(|r| r.ok()).count();
        s.push_str(&format!(
            "{passing}/{} non-redundant variants pass; {} flagged redundant\n",
            usable.len(),
            reports.len() - usable.len()
        ));
        s.push_str(&format!(
            "generator {} seed {seed} trials {trials}\n",
            spherolimb_core::sample::GENERATOR
        ));
        s
    };
    let records = || {
        reports
            .iter()
            .zip(&families)
            .map(|(r, d)| {
                Record::new()
                    .with("id", r.id.clone())
                    .with("family", d.system().label())
                    .with("case", case_label(d.system(), d.class.case_tag))
                    .with("trials", r.trials)
                    .with("passes", r.passes)
                    .with("max_moment_residual", r.max_moment_residual)
                    .with("max_center_velocity", r.max_center_velocity)
                    .with("checklist_failures", r.checklist_failures)
                    .with("redundant", r.redundant)
                    .with("status", status(r))
                    .with("generator", r.generator)
                    .with("seed", r.seed)
                    .with("notes", r.notes.join("; "))
            })
            .collect()
    };
    Ok(Output {
        text: emit(format, human, records),
        code: if ok { EXIT_OK } else { EXIT_FAILED },
    })
}

fn cmd_robot(ids: &[String], seed: u64, format: ReportFormat) -> Result<Output, String> {
    let ds = ids
        .iter()
        .map(|id| parse_descriptor(id))
        .collect::<Result<Vec<_>, _>>()?;
    let robot = match build_robot([&ds[0], &ds[1], &ds[2]], seed) {
        Ok(r) => r,
        Err(e @ Error::RedundantDescriptor { .. }) => return Err(e.to_string()),
        Err(e) => {
            return Ok(Output {
                text: format!("robot could not be built: {e}\n"),
                code: EXIT_FAILED,
            })
        }
    };
    let verdict = verify_so3_platform(&robot);
    let blocks = assemble_extended_jacobian(&robot).map_err(|e| e.to_string())?;
    let gt = blocks.g_transpose();
    let block_ranks = [
        linalg::rank(&blocks.g_av),
        linalg::rank(&blocks.g_aw),
        linalg::rank(&blocks.g_cv),
        linalg::rank(&blocks.g_cw),
    ];
    let conditioning = linalg::relative_sigma_min(&gt);
    let inverse = match block_inverse(&blocks) {
        Ok(_) => "available".to_string(),
        Err(e) => e.to_string(),
    };
    let translation = project_feasible(&blocks, &Vector6::new(1.0, 2.0, 3.0, 0.0, 0.0, 0.0)).norm();
    let space = platform_twist_space(&robot);
    let center = robot.center();
    let human = || {
        let mut s = String::new();
        for (i, (d, a)) in ds.iter().zip(robot.actuated()).enumerate() {
            s.push_str(&format!(
                "limb {}  {}  actuated joint {}\n",
                i + 1,
                d.id,
                a + 1
            ));
        }
        s.push_str(&format!("center {}\n", fmt_vec(center.as_slice())));
        s.push_str(&format!(
            "G^T {}x6; ranks G_av {} G_aw {} G_cv {} G_cw {}; relative sigma_min {}\n",
            gt.nrows(),
            block_ranks[0],
            block_ranks[1],
            block_ranks[2],
            block_ranks[3],
            fmt_num(conditioning)
        ));
        s.push_str(&format!("block inverse: {inverse}\n"));
        s.push_str(&format!(
            "projected translation (1, 2, 3): norm {}\n",
            fmt_num(translation)
        ));
        s.push_str(&format!(
            "platform twist space dimension {}\n",
            space.dimension
        ));
        for (i, t) in space.basis.iter().enumerate() {
            s.push_str(&format!(
                "  t{}  {}  pitch {}\n",
                i + 1,
                screw_text(t),
                pitch_text(t)
            ));
        }
        s.push_str(&format!(
            "center velocity residual {}\n",
            fmt_num(verdict.center_velocity_residual)
        ));
        for d in &verdict.diagnostics {
            s.push_str(&format!("note: {d}\n"));
        }
        s.push_str(&format!(
            "SO(3) platform: {}\n",
            if verdict.ok { "PASS" } else { "FAIL" }
        ));
        s
    };
    let records = || {
        let mut rs: Vec<Record> = ds
            .iter()
            .zip(robot.actuated())
            .zip(&verdict.per_limb_necessary)
            .enumerate()
            .map(|(i, ((d, a), n))| {
                Record::new()
                    .with("record", "limb")
                    .with("index", i + 1)
                    .with("id", d.id.clone())
                    .with("actuated", a + 1)
                    .with("necessary", *n)
            })
            .collect();
        rs.push(
            Record::new()
                .with("record", "platform")
                .with(
                    "center",
                    crate::render::Field::Vec(center.as_slice().to_vec()),
                )
                .with("rows", gt.nrows())
                .with("rank_g_av", block_ranks[0])
                .with("rank_g_aw", block_ranks[1])
                .with("rank_g_cv", block_ranks[2])
                .with("rank_g_cw", block_ranks[3])
                .with("relative_sigma_min", conditioning)
                .with("block_inverse", inverse.clone())
                .with("projected_translation", translation)
                .with("twist_space_dimension", space.dimension)
                .with("center_velocity_residual", verdict.center_velocity_residual)
                .with("ok", verdict.ok)
                .with("notes", verdict.diagnostics.join("; ")),
        );
        rs
    };
    Ok(Output {
        text: emit(format, human, records),
        code: if verdict.ok { EXIT_OK } else { EXIT_FAILED },
    })
}

fn cmd_counts(limbs: Option<u64>, format: ReportFormat) -> Output {
    let counts = match limbs {
        Some(l) => count_robots(l),
        None => catalog_counts(),
    };
    let human = || {
        let mut s = String::new();
        if !counts.per_category.is_empty() {
            let per: Vec<Vec<String>> = counts
                .per_category
                .iter()
                .map(|(f, n)| vec![f.label().to_string(), n.to_string()])
                .collect();
            s.push_str(&table(&["family", "limbs"], &per));
        }
        s.push_str(&format!("{} limb types\n", counts.total_limbs));
        s.push_str(&counts_lines(&counts));
        s
    };
    Output {
        text: emit(format, human, || counts_records(&counts)),
        code: EXIT_OK,
    }
}

fn cmd_props(trials: usize, seed: u64, format: ReportFormat) -> Output {
    let report: PropositionReport = check_geometric_propositions(seed, trials);
    let ok = report.all_within(PROPOSITION_BOUND);
    let rows: Vec<(usize, &str, f64, bool)> = Proposition::ALL
        .iter()
        .zip(report.max_residual)
        .enumerate()
        .map(|(i, (p, r))| (i + 1, p.name(), r, r <= PROPOSITION_BOUND))
        .collect();
    let human = || {
        let body: Vec<Vec<String>> = rows
            .iter()
            .map(|(i, name, r, pass)| {
                vec![
                    i.to_string(),
                    name.to_string(),
                    fmt_num(*r),
                    if *pass { "PASS" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        let mut s = table(&["#", "proposition", "max residual", "status"], &body);
        s.push_str(&format!(
            "{trials} trials each, seed {seed}, bound {}\n",
            fmt_num(PROPOSITION_BOUND)
        ));
        s
    };
    let records = || {
        rows.iter()
            .map(|(i, name, r, pass)| {
                Record::new()
                    .with("index", *i)
                    .with("proposition", *name)
                    .with("max_residual", *r)
                    .with("pass", *pass)
                    .with("trials", trials)
                    .with("seed", seed)
            })
            .collect()
    };
    Output {
        text: emit(format, human, records),
        code: if ok { EXIT_OK } else { EXIT_FAILED },
    }
}
