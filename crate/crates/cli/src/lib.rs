//! Configuration, dispatch and rendering for the `supergrade` binary.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::json;
use thiserror::Error;

use supergrade::classify::{
    build_type_a, build_type_q, check_osp_pairing, check_trp_product, enumerate_admissible,
    falsify_fine_compatibility, falsify_queer_compatibility, two_block_degree, verify_tensor_factorization, Bounds,
    EnumKind, TrpSpec, TypeASpec, TypeQSpec,
};
use supergrade::structures::{bracket_span, decomposition_check, StructureError, StructureKind};
use supergrade::superinvolution::paired_phi;
use supergrade::{
    EvidenceKind, FiniteAbelianGroup, GroupElement, Grading, Instance, Report,
    SuperSignature, Superinvolution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Group,
    Grade,
    Involution,
    Enumerate,
    Falsify,
    Verify,
    Structure,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Group,
        Command::Grade,
        Command::Involution,
        Command::Enumerate,
        Command::Falsify,
        Command::Verify,
        Command::Structure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Group => "group",
            Command::Grade => "grade",
            Command::Involution => "involution",
            Command::Enumerate => "enumerate",
            Command::Falsify => "falsify",
            Command::Verify => "verify",
            Command::Structure => "structure",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected text or json)")),
        }
    }
}

pub const KEYS: &[&str] = &[
    "command", "group", "sig", "theta", "gs", "p", "q", "perm", "h", "k", "kind", "inv", "claim", "pauli", "n", "m",
    "format", "bounds",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{key}: {message}")]
    Semantic { key: String, message: String },
}

impl ConfigError {
    fn semantic(key: &str, message: impl fmt::Display) -> Self {
        ConfigError::Semantic {
            key: key.to_string(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("{claim}: {message}")]
    Run { claim: String, message: String },
}

/// Everything a run needs, as validated key=value entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
}

/// Parse whitespace-separated `key=value` entries; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    for (ln, line) in text.lines().enumerate() {
        let code = line.split('#').next().unwrap_or("");
        let mut col = 0;
        for token in code.split_whitespace() {
            col = code[col..].find(token).map(|i| i + col).unwrap_or(col);
            let at = |message: String| ConfigError::Syntax {
                line: ln + 1,
                column: col + 1,
                message,
            };
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| at(format!("expected key=value, found {token:?}")))?;
            if key.is_empty() {
                return Err(at("missing key before '='".into()));
            }
            if !KEYS.contains(&key) {
                return Err(at(format!("unknown key {key:?}")));
            }
            if value.is_empty() {
                return Err(at(format!("missing value for {key:?}")));
            }
            if cfg.entries.contains_key(key) {
                return Err(at(format!("duplicate key {key:?}")));
            }
            cfg.entries.insert(key.to_string(), value.to_string());
            col += token.len();
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_usize_list(key: &str, v: &str) -> Result<Vec<usize>, ConfigError> {
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| ConfigError::semantic(key, format!("{s:?} is not a nonnegative integer")))
        })
        .collect()
}

impl RunConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Set an entry; later values replace earlier ones.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::semantic(key, "unknown key"));
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::semantic(key, "required"))
    }

    /// One `key=value` per line in key order.
    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn command(&self) -> Result<Command, ConfigError> {
        self.require("command")?
            .parse()
            .map_err(|e: String| ConfigError::semantic("command", e))
    }

    pub fn format(&self) -> Result<Format, ConfigError> {
        match self.get("format") {
            None => Ok(Format::Text),
            Some(f) => f.parse().map_err(|e: String| ConfigError::semantic("format", e)),
        }
    }

    pub fn group(&self) -> Result<FiniteAbelianGroup, ConfigError> {
        match self.get("group") {
            None => Ok(FiniteAbelianGroup::trivial()),
            Some(g) => g.parse().map_err(|e| ConfigError::semantic("group", e)),
        }
    }

    pub fn sig(&self) -> Result<SuperSignature, ConfigError> {
        let v = self.require("sig")?;
        let parts = parse_usize_list("sig", v)?;
        if parts.len() != 2 {
            return Err(ConfigError::semantic("sig", "expected n,m"));
        }
        SuperSignature::standard(parts[0], parts[1]).map_err(|e| ConfigError::semantic("sig", e))
    }

    fn elements(&self, key: &str) -> Result<Vec<GroupElement>, ConfigError> {
        let group = self.group()?;
        let v = self.require(key)?;
        let parsed = if v.contains('(') {
            group.parse_elements(v)
        } else {
            // Bare integers for cyclic groups.
            v.split(',')
                .map(|s| group.parse_element(&format!("({})", s.trim())))
                .collect()
        };
        parsed.map_err(|e| ConfigError::semantic(key, e))
    }

    fn element(&self, key: &str) -> Result<GroupElement, ConfigError> {
        let els = self.elements(key)?;
        match els.as_slice() {
            [one] => Ok(one.clone()),
            _ => Err(ConfigError::semantic(key, "expected a single element")),
        }
    }

    fn sizes(&self, key: &str) -> Result<Vec<usize>, ConfigError> {
        parse_usize_list(key, self.require(key)?)
    }

    fn number(&self, key: &str) -> Result<usize, ConfigError> {
        let v = self.require(key)?;
        v.parse().map_err(|_| ConfigError::semantic(key, format!("{v:?} is not a nonnegative integer")))
    }

    pub fn bounds(&self) -> Result<Bounds, ConfigError> {
        let base = match self.get("bounds") {
            Some(b) => Bounds::parse(b),
            None => Bounds::from_env(),
        };
        base.map_err(|e| ConfigError::semantic("bounds", e))
    }

    fn check_distinct(&self) -> Result<(), ConfigError> {
        if self.get("gs").is_none() {
            return Ok(());
        }
        let gs = self.elements("gs")?;
        for (j, b) in gs.iter().enumerate() {
            if let Some(i) = gs[..j].iter().position(|a| a == b) {
                return Err(ConfigError::semantic(
                    "gs",
                    format!("distinctness: g{} and g{} are both {b}", i + 1, j + 1),
                ));
            }
        }
        Ok(())
    }

    /// Checks that do not need a run: every present value parses and the
    /// lengths fit together.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.get("command").is_some() {
            self.command()?;
        }
        self.format()?;
        self.group()?;
        if let Some(b) = self.get("bounds") {
            Bounds::parse(b).map_err(|e| ConfigError::semantic("bounds", e))?;
        }
        if self.get("sig").is_some() {
            let sig = self.sig()?;
            if self.get("theta").is_some() {
                let theta = self.elements("theta")?;
                if theta.len() != sig.size() {
                    return Err(ConfigError::semantic(
                        "theta",
                        format!("has {} entries but the signature {sig} needs {}", theta.len(), sig.size()),
                    ));
                }
            }
        } else if self.get("theta").is_some() && self.get("command") != Some("verify") {
            self.elements("theta")?;
        }
        for key in ["p", "q", "perm", "k"] {
            if self.get(key).is_some() {
                self.sizes(key)?;
            }
        }
        for key in ["n", "m"] {
            if self.get(key).is_some() {
                self.number(key)?;
            }
        }
        if self.get("h").is_some() {
            self.element("h")?;
        }
        if self.get("kind").is_some() && self.get("command") == Some("structure") {
            self.structure_kind()?;
        }
        self.check_distinct()
    }

    fn structure_kind(&self) -> Result<StructureKind, ConfigError> {
        self.require("kind")?
            .parse()
            .map_err(|e: StructureError| ConfigError::semantic("kind", e))
    }
}

fn run_err(claim: &str) -> impl Fn(&dyn fmt::Display) -> CliError + '_ {
    move |e| CliError::Run {
        claim: claim.to_string(),
        message: e.to_string(),
    }
}

macro_rules! ctx {
    ($claim:expr, $e:expr) => {
        $e.map_err(|e| run_err($claim)(&e))
    };
}

fn grading_of(cfg: &RunConfig) -> Result<Grading, CliError> {
    let group = cfg.group()?;
    let sig = cfg.sig()?;
    if let Some(k) = cfg.get("pauli") {
        let k: usize = k
            .parse()
            .map_err(|_| ConfigError::semantic("pauli", "expected the number of tensor factors"))?;
        return ctx!("grade", Grading::pauli_standard(k, &sig));
    }
    let theta = cfg.elements("theta")?;
    ctx!("grade", Grading::elementary(&group, &sig, &theta))
}

fn involution_of(cfg: &RunConfig, sig: &SuperSignature) -> Result<Superinvolution, CliError> {
    let claim = "involution";
    match cfg.get("inv").unwrap_or("osp") {
        "osp" => ctx!(claim, Superinvolution::canonical_osp(sig)),
        "trp" => ctx!(claim, Superinvolution::trp(sig)),
        "osp-paired" => {
            let (p, q) = (cfg.sizes("p")?, cfg.sizes("q")?);
            let phi = paired_phi(&p, &q).ok_or_else(|| {
                ConfigError::semantic("p", "paired form needs an even number of blocks with p1=p2, q1=q2, ...")
            })?;
            ctx!(claim, Superinvolution::osp(sig, phi))
        }
        other => Err(ConfigError::semantic("inv", format!("unknown involution {other:?} (osp, osp-paired, trp)")).into()),
    }
}

fn group_report(cfg: &RunConfig) -> Result<Report, CliError> {
    let g = cfg.group()?;
    let mut r = Report::new("group", EvidenceKind::Exact);
    let els = g.elements();
    let chars = g.characters();
    r.push(
        Instance::new(format!("{g}: enumeration has |G| elements"), els.len() as u64 == g.order()).with_details(json!({
            "invariant_factors": g.invariant_factors(),
            "order": g.order(),
            "exponent": g.exponent(),
            "subgroups": g.subgroups().len(),
            "involutions": g.involutions().len(),
        })),
    );
    let m = g.field_order();
    let mut ok = true;
    for chi in &chars {
        for a in &els {
            for b in &els {
                let ab = g.mul(a, b).map_err(|e| run_err("group")(&e))?;
                let lhs = g.char_eval(chi, &ab, m).map_err(|e| run_err("group")(&e))?;
                let rhs = &g.char_eval(chi, a, m).map_err(|e| run_err("group")(&e))?
                    * &g.char_eval(chi, b, m).map_err(|e| run_err("group")(&e))?;
                ok &= lhs == rhs;
            }
        }
    }
    r.check(format!("all {} characters are multiplicative", chars.len()), ok);
    Ok(r)
}

fn grade_report(cfg: &RunConfig) -> Result<Report, CliError> {
    let claim = "grade";
    let gr = if cfg.get("h").is_some() {
        let spec = ctx!(claim, TypeQSpec::new(&cfg.group()?, cfg.element("h")?, cfg.elements("gs")?, cfg.sizes("k")?))?;
        return Ok(ctx!(claim, build_type_q(&spec))?.1);
    } else if cfg.get("gs").is_some() {
        let spec = ctx!(claim, TypeASpec::new(&cfg.group()?, cfg.elements("gs")?, cfg.sizes("p")?, cfg.sizes("q")?))?;
        return Ok(ctx!(claim, build_type_a(&spec))?.1);
    } else {
        grading_of(cfg)?
    };
    let mut r = Report::new(claim, EvidenceKind::Exact);
    let dims: BTreeMap<String, usize> = gr.components().iter().map(|(g, c)| (g.to_string(), c.dim())).collect();
    r.push(
        Instance::new(
            "grading is multiplicative",
            ctx!(claim, gr.multiplicativity_violation())?.is_none(),
        )
        .with_details(json!({"components": dims, "fine": gr.is_fine(), "dim_identity": gr.identity_component().dim()})),
    );
    r.check("compatible with parity", ctx!(claim, gr.is_super_compatible())?);
    Ok(r)
}

fn involution_report(cfg: &RunConfig) -> Result<Report, CliError> {
    let claim = "involution";
    let sig = cfg.sig()?;
    let inv = involution_of(cfg, &sig)?;
    let mut r = Report::new(claim, EvidenceKind::Exact);
    let axioms = inv.check_axioms();
    r.push(
        Instance::new(format!("{} on {sig} satisfies the axioms", inv.kind()), axioms.is_ok()).with_details(json!({
            "dim_h": inv.h_space().dim(),
            "dim_k": inv.k_space().dim(),
            "violation": axioms.err().map(|v| v.to_string()),
        })),
    );
    if cfg.get("theta").is_some() || cfg.get("pauli").is_some() {
        let gr = grading_of(cfg)?;
        let violation = ctx!(claim, gr.map_violation(inv.map()))?;
        r.push(
            Instance::new("the grading is respected", violation.is_none())
                .with_details(json!(violation.map(|v| json!({"degree": v.degree.to_string(), "basis_index": v.basis_index})))),
        );
    }
    Ok(r)
}

fn enum_kind(cfg: &RunConfig) -> Result<EnumKind, ConfigError> {
    match cfg.get("kind").unwrap_or("osp") {
        "osp" => Ok(EnumKind::Osp),
        "trp" => Ok(EnumKind::Trp),
        other => Err(ConfigError::semantic("kind", format!("unknown family {other:?} (osp or trp)"))),
    }
}

fn enumerate_report(cfg: &RunConfig) -> Result<Report, CliError> {
    let kind = enum_kind(cfg)?;
    let claim = match kind {
        EnumKind::Osp => "osp-pairing",
        EnumKind::Trp => "trp-product",
    };
    let e = ctx!(
        claim,
        enumerate_admissible(&cfg.group()?, cfg.number("n")?, cfg.number("m")?, kind, &cfg.bounds()?)
    )?;
    Ok(e.report())
}

fn falsify_report(cfg: &RunConfig) -> Result<Report, CliError> {
    let claim = cfg.require("claim")?;
    match claim {
        "queer-incompatible" => {
            let spec = ctx!(claim, TypeQSpec::new(&cfg.group()?, cfg.element("h")?, cfg.elements("gs")?, cfg.sizes("k")?))?;
            ctx!(claim, falsify_queer_compatibility(&spec))
        }
        "pauli-incompatible" => ctx!(claim, falsify_fine_compatibility(cfg.number("k")?)),
        other => Err(ConfigError::semantic("claim", format!("no falsification for {other:?}")).into()),
    }
}

fn tensor_report(cfg: &RunConfig, claim: &str) -> Result<(Grading, Superinvolution, Grading, Superinvolution), CliError> {
    let group = cfg.group()?;
    let sig = cfg.sig()?;
    let c = ctx!(claim, Grading::elementary(&group, &sig, &cfg.elements("theta")?))?;
    let inv_c = involution_of(cfg, &sig)?;
    let gens = if cfg.get("pauli").is_some() { cfg.elements("pauli")? } else { Vec::new() };
    if gens.len() % 2 != 0 {
        return Err(ConfigError::semantic("pauli", "expected generator pairs u1,v1,u2,v2,...").into());
    }
    let pairs: Vec<(GroupElement, GroupElement)> = gens.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
    let size = 1usize << pairs.len();
    let d_sig = ctx!(claim, SuperSignature::trivial(size))?;
    let d = ctx!(claim, Grading::pauli(&group, &d_sig, &pairs))?;
    let inv_d = ctx!(claim, Superinvolution::transpose(size))?;
    Ok((c, inv_c, d, inv_d))
}

fn verify_report(cfg: &RunConfig) -> Result<Report, CliError> {
    let claim = cfg.require("claim")?;
    let group = cfg.group()?;
    match claim {
        "osp-pairing" => {
            let spec = ctx!(claim, TypeASpec::new(&group, cfg.elements("gs")?, cfg.sizes("p")?, cfg.sizes("q")?))?;
            let c = ctx!(claim, check_osp_pairing(&spec))?;
            let mut r = Report::new(claim, EvidenceKind::Exact);
            match c.graded {
                Some(graded) => {
                    r.push(
                        Instance::new("relation predicate agrees with the direct check", c.predicate == graded)
                            .with_details(json!({"predicate": c.predicate, "graded": graded, "squares": c.squares})),
                    );
                }
                None => {
                    r.push(
                        Instance::new("block sizes are unpaired; no prescribed form", !c.predicate)
                            .with_details(json!({"predicate": c.predicate})),
                    );
                }
            }
            Ok(r)
        }
        "trp-product" => {
            let spec = ctx!(
                claim,
                TrpSpec::new(&group, cfg.elements("gs")?, cfg.sizes("p")?, cfg.sizes("q")?, cfg.sizes("perm")?)
            )?;
            let (pred, direct) = ctx!(claim, check_trp_product(&spec))?;
            let mut r = Report::new(claim, EvidenceKind::Exact);
            r.push(
                Instance::new("relation predicate agrees with the direct check", pred == direct)
                    .with_details(json!({"predicate": pred, "graded": direct})),
            );
            Ok(r)
        }
        "type-a" => {
            let spec = ctx!(claim, TypeASpec::new(&group, cfg.elements("gs")?, cfg.sizes("p")?, cfg.sizes("q")?))?;
            Ok(ctx!(claim, build_type_a(&spec))?.1)
        }
        "type-q" => {
            let spec = ctx!(claim, TypeQSpec::new(&group, cfg.element("h")?, cfg.elements("gs")?, cfg.sizes("k")?))?;
            Ok(ctx!(claim, build_type_q(&spec))?.1)
        }
        "tensor-factorization" => {
            let (c, inv_c, d, inv_d) = tensor_report(cfg, claim)?;
            ctx!(claim, verify_tensor_factorization(&c, &inv_c, &d, &inv_d))
        }
        "two-block" => {
            let theta = cfg.elements("theta")?;
            let found = ctx!(claim, two_block_degree(&group, &theta))?;
            let mut r = Report::new(claim, EvidenceKind::Exact);
            r.push(
                Instance::new("two simple summands in R_e and a degree g ≠ e with A1 R A2 ⊆ R_g", found.is_some())
                    .with_details(json!({"degree": found.map(|g| g.to_string())})),
            );
            Ok(r)
        }
        other => Err(ConfigError::semantic("claim", format!("nothing to verify for {other:?}")).into()),
    }
}

fn structure_report(cfg: &RunConfig) -> Result<Report, CliError> {
    let kind = cfg.structure_kind()?;
    let claim = kind.to_string();
    let claim = claim.as_str();
    let sig = cfg.sig()?;
    let group = cfg.group()?;
    let theta = match cfg.get("theta") {
        Some(_) => cfg.elements("theta")?,
        None => vec![group.identity(); sig.size()],
    };
    let grading = ctx!(claim, Grading::elementary(&group, &sig, &theta))?;
    let inv = involution_of(cfg, &sig)?;
    let s = match kind {
        StructureKind::OspJordan => supergrade::structures::build_osp_jordan(&grading, &inv),
        StructureKind::PJordan => supergrade::structures::build_p_jordan(&grading, &inv),
        StructureKind::BLie => supergrade::structures::build_b_lie(&grading, &inv),
    };
    let s = ctx!(claim, s)?;
    let mut r = s.report();
    if kind == StructureKind::BLie {
        let hh = ctx!(claim, bracket_span(&sig, &inv.h_space()))?;
        r.push(Instance::new("K = span[H,H]", &hh == s.carrier()).with_details(json!({"dim_hh": hh.dim()})));
    }
    if cfg.get("pauli").is_some() {
        let (t, t_inv, d, d_inv) = tensor_report(cfg, claim)?;
        r.merge(ctx!(claim, decomposition_check(&d, &d_inv, &t, &t_inv))?);
    }
    Ok(r)
}

/// Execute a validated configuration.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    match cfg.command()? {
        Command::Group => group_report(cfg),
        Command::Grade => grade_report(cfg),
        Command::Involution => involution_report(cfg),
        Command::Enumerate => enumerate_report(cfg),
        Command::Falsify => falsify_report(cfg),
        Command::Verify => verify_report(cfg),
        Command::Structure => structure_report(cfg),
    }
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    }
}

pub fn exit_code(result: &Result<Report, CliError>) -> i32 {
    match result {
        Ok(r) if r.passed() => 0,
        Ok(_) => 1,
        Err(_) => 2,
    }
}
