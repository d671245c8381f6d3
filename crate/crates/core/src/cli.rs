//! JSON request documents, command dispatch and report rendering for the
//! `pinv` binary.
//!
//! A request document looks like
//!
//! ```json
//! {
//!   "surface": {"type": "log_transform_elliptic",
//!               "fibers": [[3, 1, 1], [3, 1, 0], [3, 1, 0], [3, -3, -1]]},
//!   "classes": ["zero", "canonical", [1, 0, 0, 0, 0]],
//!   "commands": ["compute", "wallcheck"]
//! }
//! ```
//!
//! Exit codes: 0 success, 2 invalid input, 3 engine failure.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::engine::{self, EngineError};
use crate::exterior::{bigint_to_json, ExtElement};
use crate::lattice::{smith_normal_form, ClassGroup, IntMatrix, RelationPresentation};
use crate::surface::{
    build_log_transform, DivisorClass, EllipticModel, LogFiber, RuledClass, SpecialClass, SurfaceError,
    SurfaceModel, SymbolicClass,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed or inconsistent input, located by a JSON pointer.
    Input { location: String, message: String },
    /// A computation failed; `operation` names the command.
    Engine { operation: String, message: String },
}

impl CliError {
    fn input(location: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Input {
            location: location.into(),
            message: message.to_string(),
        }
    }

    fn engine(operation: &str, err: EngineError) -> Self {
        CliError::Engine {
            operation: operation.to_string(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => EXIT_INPUT,
            CliError::Engine { .. } => EXIT_ENGINE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input { location, message } => {
                let at = if location.is_empty() { "/" } else { location };
                write!(f, "invalid input at {at}: {message}")
            }
            CliError::Engine { operation, message } => write!(f, "{operation} failed: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Invariants,
    Compute,
    Wallcheck,
    Components,
    BasicClasses,
    Blowup,
    Snf,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Invariants,
        Command::Compute,
        Command::Wallcheck,
        Command::Components,
        Command::BasicClasses,
        Command::Blowup,
        Command::Snf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::Compute => "compute",
            Command::Wallcheck => "wallcheck",
            Command::Components => "components",
            Command::BasicClasses => "basic-classes",
            Command::Blowup => "blowup",
            Command::Snf => "snf",
        }
    }

    pub fn parse(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PgPositiveName {
    K3,
    Abelian,
    GeneralType,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PgZeroName {
    Enriques,
    Bielliptic,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuledFields {
    base_genus: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HirzebruchFields {
    n: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EllipticFields {
    base_genus: i64,
    chi: i64,
    q: i64,
    #[serde(default)]
    multiplicities: Vec<i64>,
    #[serde(default)]
    relations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogTransformFields {
    fibers: Vec<[i64; 3]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlowUpFields {
    base: Value,
    exceptional_count: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PgPositiveFields {
    kind: PgPositiveName,
    chi: Option<i64>,
    q: Option<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PgZeroFields {
    kind: PgZeroName,
}

const SURFACE_TYPES: [&str; 7] = [
    "ruled",
    "hirzebruch",
    "elliptic",
    "log_transform_elliptic",
    "blow_up",
    "minimal_pg_positive",
    "minimal_pg_zero_special",
];

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ClassTag {
    Zero,
    Canonical,
    Other,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuledClassDescriptor {
    fiber_pairing: i64,
    nu: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlowUpClassDescriptor {
    base: Box<ClassDescriptor>,
    l: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecialClassDescriptor {
    nu: i64,
    hilb_nonempty: bool,
    c_half: Option<i64>,
}

/// Class descriptor: an integer vector, a tag, or an object.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged, expecting = "an integer vector, \"zero\", \"canonical\", \"other\", or a class object")]
enum ClassDescriptor {
    Vector(Vec<i64>),
    Tag(ClassTag),
    Ruled(RuledClassDescriptor),
    BlowUp(BlowUpClassDescriptor),
    Special(SpecialClassDescriptor),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlowupOptions {
    l: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnfOptions {
    matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRequest {
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    surface: Value,
    #[serde(default)]
    classes: Vec<Value>,
    #[serde(default)]
    commands: Vec<Command>,
    #[serde(default)]
    blowup: Option<BlowupOptions>,
    #[serde(default)]
    snf: Option<SnfOptions>,
}

/// A validated request.
#[derive(Clone, Debug)]
pub struct ComputationRequest {
    pub surface: SurfaceModel,
    pub surface_descriptor: Value,
    pub classes: Vec<DivisorClass>,
    pub commands: Vec<Command>,
    pub blowup_l: Option<Vec<i64>>,
    pub snf_matrix: Option<Vec<Vec<i64>>>,
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            serde_path_to_error::Segment::Seq { index } => {
                let _ = write!(out, "/{index}");
            }
            serde_path_to_error::Segment::Map { key } => {
                let _ = write!(out, "/{}", key.replace('~', "~0").replace('/', "~1"));
            }
            serde_path_to_error::Segment::Enum { variant } => {
                let _ = write!(out, "/{variant}");
            }
            serde_path_to_error::Segment::Unknown => {}
        }
    }
    out
}

fn from_value<T: for<'de> Deserialize<'de>>(value: &Value, base: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let location = format!("{base}{}", pointer(e.path()));
        CliError::input(location, e.inner())
    })
}

fn surface_error(location: &str, err: SurfaceError) -> CliError {
    CliError::input(location, err)
}

fn build_surface(value: &Value, at: &str) -> Result<SurfaceModel, CliError> {
    let Some(obj) = value.as_object() else {
        return Err(CliError::input(at, "surface descriptor must be an object"));
    };
    let tag = match obj.get("type") {
        Some(Value::String(t)) => t.as_str(),
        Some(_) => return Err(CliError::input(format!("{at}/type"), "type must be a string")),
        None => return Err(CliError::input(at, "missing field `type`")),
    };
    let mut fields = obj.clone();
    fields.remove("type");
    let fields = Value::Object(fields);
    let model = match tag {
        "ruled" => {
            let f: RuledFields = from_value(&fields, at)?;
            SurfaceModel::ruled(f.base_genus)
        }
        "hirzebruch" => {
            let f: HirzebruchFields = from_value(&fields, at)?;
            if f.n < 0 {
                return Err(CliError::input(format!("{at}/n"), "Hirzebruch index must be >= 0"));
            }
            SurfaceModel::ruled(0)
        }
        "elliptic" => {
            let f: EllipticFields = from_value(&fields, at)?;
            EllipticModel::new(f.base_genus, f.chi, f.q, f.multiplicities, f.relations)
                .map(SurfaceModel::elliptic)
        }
        "log_transform_elliptic" => {
            let f: LogTransformFields = from_value(&fields, at)?;
            let fibers: Vec<LogFiber> = f
                .fibers
                .iter()
                .map(|&[n, u, v]| LogFiber { n, u, v })
                .collect();
            return build_log_transform(&fibers)
                .map_err(|e| surface_error(&format!("{at}/fibers"), e));
        }
        "blow_up" => {
            let f: BlowUpFields = from_value(&fields, at)?;
            let base = build_surface(&f.base, &format!("{at}/base"))?;
            SurfaceModel::blow_up(base, f.exceptional_count)
        }
        "minimal_pg_positive" => {
            let f: PgPositiveFields = from_value(&fields, at)?;
            match f.kind {
                PgPositiveName::K3 => Ok(SurfaceModel::k3()),
                PgPositiveName::Abelian => Ok(SurfaceModel::abelian()),
                PgPositiveName::GeneralType => {
                    let chi = f.chi.ok_or_else(|| {
                        CliError::input(format!("{at}/chi"), "general_type needs chi")
                    })?;
                    let q = f
                        .q
                        .ok_or_else(|| CliError::input(format!("{at}/q"), "general_type needs q"))?;
                    SurfaceModel::general_type(chi, q)
                }
            }
        }
        "minimal_pg_zero_special" => {
            let f: PgZeroFields = from_value(&fields, at)?;
            Ok(match f.kind {
                PgZeroName::Enriques => SurfaceModel::enriques(),
                PgZeroName::Bielliptic => SurfaceModel::bielliptic(),
            })
        }
        other => {
            return Err(CliError::input(
                format!("{at}/type"),
                format!("unknown surface type `{other}`, expected one of {}", SURFACE_TYPES.join(", ")),
            ))
        }
    };
    model.map_err(|e| surface_error(at, e))
}

fn build_class(
    model: &SurfaceModel,
    desc: &ClassDescriptor,
    at: &str,
) -> Result<DivisorClass, CliError> {
    let class = match desc {
        ClassDescriptor::Vector(v) => Ok(DivisorClass::Fiber(v.clone())),
        ClassDescriptor::Tag(ClassTag::Zero) => model.zero_class(),
        ClassDescriptor::Tag(ClassTag::Canonical) => model.canonical_class(),
        ClassDescriptor::Tag(ClassTag::Other) => Ok(DivisorClass::Symbolic(SymbolicClass::Other)),
        ClassDescriptor::Ruled(c) => Ok(DivisorClass::Ruled(RuledClass {
            fiber_pairing: c.fiber_pairing,
            nu: c.nu,
        })),
        ClassDescriptor::BlowUp(c) => {
            let SurfaceModel::BlowUp { base, .. } = model else {
                return Err(CliError::input(
                    at,
                    format!("blow_up class given for a {} surface", model.kind_name()),
                ));
            };
            let base_class = build_class(base, &c.base, &format!("{at}/base"))?;
            Ok(DivisorClass::BlowUp {
                base: Box::new(base_class),
                l: c.l.clone(),
            })
        }
        ClassDescriptor::Special(c) => Ok(DivisorClass::Special(SpecialClass {
            nu: c.nu,
            hilb_nonempty: c.hilb_nonempty,
            c_half: c.c_half,
        })),
    }
    .map_err(|e| surface_error(at, e))?;
    model.check_class(&class).map_err(|e| surface_error(at, e))?;
    Ok(class)
}

/// Parses a surface descriptor on its own (a JSON object with `"type"`).
pub fn parse_surface(value: &Value) -> Result<SurfaceModel, CliError> {
    build_surface(value, "")
}

/// Parses a class descriptor against a surface; `location` prefixes error
/// pointers.
pub fn parse_class(model: &SurfaceModel, value: &Value, location: &str) -> Result<DivisorClass, CliError> {
    let desc: ClassDescriptor = from_value(value, location)?;
    build_class(model, &desc, location)
}

/// Parses and validates a request document.
pub fn parse_request(document: &str) -> Result<ComputationRequest, CliError> {
    let value: Value = serde_json::from_str(document)
        .map_err(|e| CliError::input("", format!("not valid JSON: {e}")))?;
    let raw: RawRequest = from_value(&value, "")?;
    let surface = build_surface(&raw.surface, "/surface")?;
    let classes = raw
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| parse_class(&surface, c, &format!("/classes/{i}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComputationRequest {
        surface,
        surface_descriptor: value["surface"].clone(),
        classes,
        commands: raw.commands,
        blowup_l: raw.blowup.map(|b| b.l),
        snf_matrix: raw.snf.map(|s| s.matrix),
    })
}

/// One command's results, rendered both as JSON and as a table.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub command: Command,
    /// `Some` for commands that check an identity.
    pub pass: Option<bool>,
    pub items: Vec<Value>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub surface: Value,
    pub invariants: Value,
    pub blocks: Vec<Block>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.blocks.iter().all(|b| b.pass != Some(false))
    }

    pub fn to_json(&self) -> Value {
        let results: Vec<Value> = self
            .blocks
            .iter()
            .map(|b| {
                let mut obj = json!({"command": b.command.name(), "items": b.items});
                if let Some(pass) = b.pass {
                    obj["pass"] = json!(pass);
                }
                obj
            })
            .collect();
        json!({
            "surface": {"descriptor": self.surface, "invariants": self.invariants},
            "results": results,
        })
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let inv = &self.invariants;
        let _ = writeln!(
            out,
            "surface: {}  chi={} q={} p_g={}",
            inv["kind"].as_str().unwrap_or("?"),
            inv["chi"],
            inv["q"],
            inv["p_g"]
        );
        for block in &self.blocks {
            let status = match block.pass {
                Some(true) => " [pass]",
                Some(false) => " [FAIL]",
                None => "",
            };
            let _ = writeln!(out, "\n== {}{status} ==", block.command.name());
            out.push_str(&align(&block.header, &block.rows));
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Json => self.render_json(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
}

fn align(header: &[String], rows: &[Vec<String>]) -> String {
    if rows.is_empty() {
        return "(no rows)\n".into();
    }
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                let pad = widths[i] - cell.chars().count();
                s.push_str(cell);
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&line(&rule));
    for row in rows {
        out.push_str(&line(row));
    }
    out
}

fn invariants_json(model: &SurfaceModel) -> Value {
    let inv = model.invariants();
    let mut obj = json!({
        "kind": model.kind_name(),
        "chi": inv.chi,
        "q": inv.q,
        "p_g": inv.p_g,
        "ext_rank": model.ext_rank(),
        "provenance": "classification_table",
    });
    if let Some(kf) = inv.canonical_fiber_degree {
        obj["canonical_fiber_degree"] = json!(kf);
    }
    if let Ok(k) = model.canonical_class() {
        obj["canonical_class"] = k.to_json();
    }
    obj
}

fn ext(e: &ExtElement) -> String {
    e.to_string()
}

fn strings<const N: usize>(cells: [&str; N]) -> Vec<String> {
    cells.iter().map(|s| s.to_string()).collect()
}

fn log_model<'a>(model: &'a SurfaceModel, op: &str) -> Result<&'a EllipticModel, CliError> {
    match model {
        SurfaceModel::Elliptic(m) if m.log_fibers().is_some() => Ok(m),
        _ => Err(CliError::engine(
            op,
            EngineError::Unsupported(format!(
                "{op} needs a log_transform_elliptic surface, got {}",
                model.kind_name()
            )),
        )),
    }
}

fn run_invariants(req: &ComputationRequest) -> Block {
    let inv = invariants_json(&req.surface);
    let mut rows = Vec::new();
    for key in ["kind", "chi", "q", "p_g", "canonical_fiber_degree", "canonical_class"] {
        if let Some(v) = inv.get(key) {
            let cell = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            rows.push(vec![key.to_string(), cell]);
        }
    }
    Block {
        command: Command::Invariants,
        pass: None,
        items: vec![inv],
        header: strings(["field", "value"]),
        rows,
    }
}

fn run_compute(req: &ComputationRequest) -> Result<Block, CliError> {
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for class in &req.classes {
        let pair = engine::compute(&req.surface, class).map_err(|e| CliError::engine("compute", e))?;
        let (a, b) = pair.numeric_degrees();
        let flag = if pair.branch_conflict.is_some() {
            " (branch conflict)"
        } else {
            ""
        };
        rows.push(vec![
            class.to_string(),
            ext(&pair.p_plus),
            ext(&pair.p_minus),
            format!("{a}, {b}"),
            format!("{}{flag}", pair.provenance.tag()),
        ]);
        items.push(json!({"class": class.to_json(), "pair": pair.to_json()}));
    }
    Ok(Block {
        command: Command::Compute,
        pass: None,
        items,
        header: strings(["class", "P+", "P-", "degrees", "provenance"]),
        rows,
    })
}

fn run_wallcheck(req: &ComputationRequest) -> Result<Block, CliError> {
    let mut items = Vec::new();
    let mut rows = Vec::new();
    let mut pass = true;
    for class in &req.classes {
        let wc = engine::wallcheck(&req.surface, class).map_err(|e| CliError::engine("wallcheck", e))?;
        let direct_tag = engine::compute(&req.surface, class)
            .map_err(|e| CliError::engine("wallcheck", e))?
            .provenance
            .tag();
        pass &= wc.agree();
        rows.push(vec![
            class.to_string(),
            ext(&wc.direct),
            ext(&wc.wall),
            format!("q={} nu={} c={}", wc.q, wc.nu, wc.c_half),
            if wc.agree() { "yes" } else { "NO" }.to_string(),
        ]);
        items.push(json!({
            "class": class.to_json(),
            "direct": wc.direct.to_json(),
            "wall_crossing": wc.wall.to_json(),
            "agree": wc.agree(),
            "q": wc.q,
            "nu": wc.nu,
            "c_half": bigint_to_json(&wc.c_half),
            "route": wc.route,
            "detail": wc.detail,
            "provenance": {"direct": direct_tag, "wall_crossing": engine::Provenance::WallCrossingFibered.tag()},
        }));
    }
    Ok(Block {
        command: Command::Wallcheck,
        pass: Some(pass),
        items,
        header: strings(["class", "P+ - P-", "wall crossing", "data", "agree"]),
        rows,
    })
}

fn run_components(req: &ComputationRequest) -> Result<Block, CliError> {
    let model = log_model(&req.surface, "components")?;
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for class in &req.classes {
        let DivisorClass::Fiber(v) = class else {
            unreachable!("checked against the elliptic model");
        };
        let comps = engine::hilbert_components(model, v).map_err(|e| CliError::engine("components", e))?;
        let nonempty = comps.iter().filter(|c| !c.empty).count();
        for c in &comps {
            rows.push(vec![
                class.to_string(),
                c.twist.to_string(),
                c.d.to_string(),
                format!("{:?}", c.a),
                if c.empty {
                    "empty".into()
                } else {
                    format!("P^{}", c.dimension)
                },
            ]);
        }
        items.push(json!({
            "class": class.to_json(),
            "components": serde_json::to_value(&comps).expect("components serialize"),
            "count": comps.len(),
            "nonempty": nonempty,
            "provenance": "twisted_vertical_linear_systems",
        }));
    }
    Ok(Block {
        command: Command::Components,
        pass: None,
        items,
        header: strings(["class", "twist", "d", "a", "system"]),
        rows,
    })
}

fn run_basic_classes(req: &ComputationRequest) -> Result<Block, CliError> {
    match engine::basic_classes(&req.surface) {
        Err(EngineError::InfiniteBasicClasses) => Ok(Block {
            command: Command::BasicClasses,
            pass: None,
            items: vec![json!({"finite": false, "simple_type": false})],
            header: strings(["finite", "simple type"]),
            rows: vec![strings(["no", "no"])],
        }),
        Err(e) => Err(CliError::engine("basic-classes", e)),
        Ok(report) => {
            let mut rows = Vec::new();
            let mut classes = Vec::new();
            for (class, pair) in &report.classes {
                let (a, b) = pair.numeric_degrees();
                rows.push(vec![
                    class.to_string(),
                    ext(&pair.p_plus),
                    ext(&pair.p_minus),
                    format!("{a}, {b}"),
                ]);
                classes.push(json!({"class": class.to_json(), "pair": pair.to_json()}));
            }
            Ok(Block {
                command: Command::BasicClasses,
                pass: Some(report.simple_type),
                items: vec![json!({
                    "finite": true,
                    "simple_type": report.simple_type,
                    "classes": classes,
                })],
                header: strings(["class", "P+", "P-", "degrees"]),
                rows,
            })
        }
    }
}

fn run_blowup(req: &ComputationRequest) -> Result<Block, CliError> {
    let ls = req
        .blowup_l
        .as_ref()
        .ok_or_else(|| CliError::input("/blowup", "blowup needs {\"l\": [...]}"))?;
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for class in &req.classes {
        let fail = |e: EngineError| CliError::engine("blowup", e);
        let mut pair = engine::compute(&req.surface, class).map_err(fail)?;
        let mut mmk = req
            .surface
            .m_m_minus_k(class)
            .map_err(|e| fail(EngineError::from(e)))?;
        let mut bounds = Vec::new();
        for &l in ls {
            pair = engine::blowup_transform(&pair, mmk, l);
            mmk = engine::blowup_bound(mmk, l);
            bounds.push(mmk);
        }
        rows.push(vec![
            class.to_string(),
            format!("{ls:?}"),
            format!("{bounds:?}"),
            ext(&pair.p_plus),
            ext(&pair.p_minus),
        ]);
        items.push(json!({
            "class": class.to_json(),
            "l": ls,
            "bounds": bounds,
            "pair": pair.to_json(),
        }));
    }
    Ok(Block {
        command: Command::Blowup,
        pass: None,
        items,
        header: strings(["class", "l", "bounds", "P+", "P-"]),
        rows,
    })
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(bigint_to_json).collect()))
            .collect(),
    )
}

fn run_snf(req: &ComputationRequest) -> Result<Block, CliError> {
    let (rows_in, cols) = match (&req.snf_matrix, &req.surface) {
        (Some(m), _) => {
            let cols = m.first().map_or(0, |r| r.len());
            (m.clone(), cols)
        }
        (None, SurfaceModel::Elliptic(e)) => {
            let p = e.presentation();
            (p.relations().to_vec(), p.n_generators())
        }
        (None, _) => {
            return Err(CliError::input(
                "/snf",
                "snf needs {\"matrix\": [[...]]} unless the surface is elliptic",
            ))
        }
    };
    let r = IntMatrix::from_rows(&rows_in, cols).map_err(|e| CliError::input("/snf/matrix", e))?;
    let snf = smith_normal_form(&r);
    let group = RelationPresentation::new(cols, rows_in.clone())
        .map(|p| ClassGroup::new(&p))
        .map_err(|e| CliError::input("/snf/matrix", e))?;
    let invariant: Vec<BigInt> = snf.invariant_factors();
    let torsion = group.torsion_orders();
    let check = snf.u.mul(&r).mul(&snf.v) == snf.d;
    let fmt_list = |v: &[BigInt]| {
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(", "))
    };
    let rows = vec![
        vec!["shape".into(), format!("{} x {}", r.rows(), r.cols())],
        vec!["invariant factors".into(), fmt_list(&invariant)],
        vec!["torsion orders".into(), fmt_list(&torsion)],
        vec!["free rank".into(), group.free_rank().to_string()],
        vec!["U R V = D".into(), if check { "yes" } else { "NO" }.into()],
    ];
    Ok(Block {
        command: Command::Snf,
        pass: Some(check),
        items: vec![json!({
            "matrix": matrix_json(&r),
            "u": matrix_json(&snf.u),
            "d": matrix_json(&snf.d),
            "v": matrix_json(&snf.v),
            "invariant_factors": invariant.iter().map(bigint_to_json).collect::<Vec<_>>(),
            "torsion_orders": torsion.iter().map(bigint_to_json).collect::<Vec<_>>(),
            "free_rank": group.free_rank(),
            "provenance": "smith_normal_form",
        })],
        header: strings(["field", "value"]),
        rows,
    })
}

/// Executes every command of the request in order.
pub fn run(req: &ComputationRequest) -> Result<Report, CliError> {
    let mut blocks = Vec::new();
    for &command in &req.commands {
        blocks.push(match command {
            Command::Invariants => run_invariants(req),
            Command::Compute => run_compute(req)?,
            Command::Wallcheck => run_wallcheck(req)?,
            Command::Components => run_components(req)?,
            Command::BasicClasses => run_basic_classes(req)?,
            Command::Blowup => run_blowup(req)?,
            Command::Snf => run_snf(req)?,
        });
    }
    Ok(Report {
        surface: req.surface_descriptor.clone(),
        invariants: invariants_json(&req.surface),
        blocks,
    })
}

/// Builds a request from a surface file plus command-line overrides.
///
/// The file may hold a full request document or a bare surface descriptor.
/// `class` is either an index into the document's classes or inline JSON.
pub fn request_from_file(
    text: &str,
    command: Option<Command>,
    class: Option<&str>,
) -> Result<ComputationRequest, CliError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::input("", format!("not valid JSON: {e}")))?;
    let document = if value.get("surface").is_some() {
        value
    } else {
        json!({"surface": value})
    };
    let mut req = parse_request(&document.to_string())?;
    if let Some(c) = command {
        req.commands = vec![c];
    }
    if let Some(spec) = class {
        let spec = spec.trim();
        req.classes = match spec.parse::<usize>() {
            Ok(i) => {
                let chosen = req.classes.get(i).cloned().ok_or_else(|| {
                    CliError::input(
                        "/classes",
                        format!("class index {i} out of range ({} classes)", req.classes.len()),
                    )
                })?;
                vec![chosen]
            }
            Err(_) => {
                let inline: Value = serde_json::from_str(spec)
                    .map_err(|e| CliError::input("--class", format!("not valid JSON: {e}")))?;
                vec![parse_class(&req.surface, &inline, "--class")?]
            }
        };
    }
    Ok(req)
}
