//! Subcommand pipelines. Each returns a finished report or an input error.

use std::fs;
use std::path::{Path, PathBuf};

use modchain::complex::{
    depth, find_shelling, is_cohen_macaulay, order_complex, reduced_betti, validate_certificate, vd_certificate_bruteforce, verify_shelling,
    CmFailure, ComplexError, SimplicialComplex,
};
use modchain::construct::{constructive_vd_full, constructive_vd_skeleton, ConstructError};
use modchain::groups::{self, GroupError, GroupLattice};
use modchain::io::{self, IoError, LabelingFile, PosetFile};
use modchain::labeling::{left_modular_labeling, min_chain_complexity, verify_el, verify_quasi_el, LabelingError};
use modchain::lattice::LatticeError;
use modchain::morse::{homology_consistency, morse_report};
use modchain::{EdgeLabeling, Grading, Lattice, Poset, PosetError};
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::{InputDigest, Report, Status};
use crate::{Cli, Command, ComplexCommand, ComplexSource, GroupCommand, LabelCommand, Limits, Method, MorseCommand, PosetCommand};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {reason}")]
    Read { path: PathBuf, reason: String },
    #[error("cannot write {path}: {reason}")]
    Write { path: PathBuf, reason: String },
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Inputs read so far, plus warnings and the element order for the report.
struct Session {
    command: String,
    inputs: Vec<InputDigest>,
    warnings: Vec<String>,
    element_order: Vec<String>,
}

impl Session {
    fn new(command: &str) -> Session {
        Session {
            command: command.to_string(),
            inputs: Vec::new(),
            warnings: Vec::new(),
            element_order: Vec::new(),
        }
    }

    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Read {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        self.inputs.push(InputDigest::of(&path.display().to_string(), &bytes));
        String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))
    }

    fn poset(&mut self, path: &Path) -> Result<Poset, CliError> {
        let text = self.read(path)?;
        let p = io::poset_from_json(&text).map_err(|e| located(path, e))?;
        self.element_order = p.names().to_vec();
        Ok(p)
    }

    fn labeling(&mut self, path: &Path) -> Result<EdgeLabeling, CliError> {
        let text = self.read(path)?;
        io::labeling_from_json(&text).map_err(|e| located(path, e))
    }

    fn complex(&mut self, source: &ComplexSource) -> Result<SimplicialComplex, CliError> {
        if let Some(path) = &source.poset {
            let p = self.poset(path)?;
            return order_complex(&p).map_err(input);
        }
        let path = source.complex.as_ref().expect("clap requires one source");
        let text = self.read(path)?;
        let c = io::complex_from_json(&text).map_err(|e| located(path, e))?;
        self.element_order = c.vertices().iter().map(|&v| c.vertex_name(v).to_string()).collect();
        Ok(c)
    }

    fn group(&mut self, path: &Path, limits: &Limits) -> Result<GroupLattice, CliError> {
        let text = self.read(path)?;
        let g = groups::parse_group_file(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let gl = groups::subgroup_lattice(&g, limits.order_limit).map_err(input)?;
        self.element_order = gl.poset().names().to_vec();
        Ok(gl)
    }

    fn finish(self, status: Status, results: Value) -> Report {
        Report {
            command: self.command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            status,
            inputs: self.inputs,
            element_order: self.element_order,
            results,
            warnings: self.warnings,
            timing: None,
        }
    }
}

fn located(path: &Path, e: IoError) -> CliError {
    CliError::Input(format!("{}: {e} [{}]", path.display(), io_kind(&e)))
}

fn io_kind(e: &IoError) -> &'static str {
    match e {
        IoError::ByteOrderMark => "ByteOrderMark",
        IoError::Json(_) => "InputParseError",
        IoError::Poset(p) => match p {
            PosetError::DuplicateElement(_) => "DuplicateElement",
            PosetError::UnknownElement(_) => "UnknownElement",
            PosetError::CycleDetected(_) => "CycleDetected",
            PosetError::RedundantCover(..) => "RedundantCover",
            _ => "PosetError",
        },
        IoError::Complex(_) => "ComplexError",
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, format!("{text}\n")).map_err(|e| CliError::Write {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::VerificationFailed
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let limits = &cli.limits;
    match &cli.command {
        Command::Poset(PosetCommand::Check { file }) => poset_check(file),
        Command::Label(LabelCommand::Modular { poset, chain, output }) => label_modular(poset, chain, output.as_deref()),
        Command::Label(LabelCommand::Verify { poset, labeling, el }) => label_verify(poset, labeling, *el),
        Command::Complex(ComplexCommand::Vd {
            complex,
            poset,
            labeling,
            skeleton,
            full,
            certificate,
            output,
        }) => complex_vd(complex.as_deref(), poset.as_deref(), labeling.as_deref(), *skeleton, *full, certificate.as_deref(), output.as_deref(), limits),
        Command::Complex(ComplexCommand::Depth { source, skeleton }) => complex_depth(source, *skeleton, limits),
        Command::Complex(ComplexCommand::Shell { source, skeleton, verify }) => complex_shell(source, *skeleton, verify.as_deref(), limits),
        Command::Morse(MorseCommand::Report { poset, labeling }) => morse(poset, labeling, limits),
        Command::Group(GroupCommand::Lattice { file, output }) => group_lattice(file, output.as_deref(), limits),
        Command::Group(GroupCommand::Solvable { file, method }) => group_solvable(file, *method, limits),
        Command::Group(GroupCommand::Thevenaz { file }) => group_thevenaz(file, limits),
    }
}

fn poset_check(file: &Path) -> Result<Report, CliError> {
    let mut s = Session::new("poset check");
    let p = s.poset(file)?;
    let mut results = json!({
        "elements": p.len(),
        "covers": p.cover_pairs().len(),
        "bottom": p.bottom().map(|b| p.name(b)),
        "top": p.top().map(|t| p.name(t)),
        "bounded": p.is_bounded(),
    });
    if !p.is_bounded() {
        s.warnings.push("poset is not bounded; lattice and grading checks skipped".into());
        return Ok(s.finish(Status::Ok, results));
    }
    let lattice = match Lattice::new(p.clone()) {
        Ok(_) => json!({"lattice": true}),
        Err(LatticeError::NotALattice(x, y, why)) => json!({"lattice": false, "witness": [x, y], "reason": why}),
        Err(e) => return Err(input(e)),
    };
    extend(&mut results, lattice);
    let grading = match p.grading().map_err(input)? {
        Grading::Graded { rank } => json!({
            "graded": true,
            "rank": rank,
        }),
        Grading::NotGraded { shorter, longer } => json!({
            "graded": false,
            "shorter_chain": p.chain_names(&shorter),
            "longer_chain": p.chain_names(&longer),
        }),
    };
    extend(&mut results, grading);
    extend(&mut results, json!({"maximal_chains": p.count_maximal_chains().map_err(input)?.to_string()}));
    Ok(s.finish(Status::Ok, results))
}

fn extend(target: &mut Value, more: Value) {
    if let (Value::Object(t), Value::Object(m)) = (target, more) {
        t.extend(m);
    }
}

fn label_modular(poset: &Path, chain: &[String], output: Option<&Path>) -> Result<Report, CliError> {
    let mut s = Session::new("label modular");
    let p = s.poset(poset)?;
    let l = Lattice::new(p).map_err(input)?;
    let m = match l.verify_chain_by_name(chain) {
        Ok(m) => m,
        Err(e @ (LatticeError::NotLeftModular { .. } | LatticeError::NotAChain(_))) => {
            return Ok(s.finish(Status::VerificationFailed, json!({"chain": chain, "left_modular": false, "reason": e.to_string()})));
        }
        Err(e) => return Err(input(e)),
    };
    let lab = left_modular_labeling(&l, &m).map_err(input)?;
    let quasi_el = verify_quasi_el(l.poset(), &lab).is_ok();
    if !quasi_el {
        s.warnings.push("left-modular labeling failed the quasi-EL check".into());
    }
    let file = labeling_file(l.poset(), &lab);
    if let Some(path) = output {
        write(path, &io::labeling_to_json_for(l.poset(), &lab))?;
    }
    Ok(s.finish(
        status(quasi_el),
        json!({
            "chain": chain,
            "kind": m.kind(),
            "r": m.len(),
            "quasi_el": quasi_el,
            "labeling": file,
        }),
    ))
}

fn labeling_file(p: &Poset, lab: &EdgeLabeling) -> LabelingFile {
    serde_json::from_str(&io::labeling_to_json_for(p, lab)).expect("own output parses")
}

/// Labeling problems that mean the file does not fit the poset.
fn labeling_input_error(e: &LabelingError) -> bool {
    matches!(
        e,
        LabelingError::MissingLabel(..) | LabelingError::NotACover(..) | LabelingError::Poset(PosetError::Unbounded) | LabelingError::SizeLimit { .. }
    )
}

fn label_verify(poset: &Path, labeling: &Path, el: bool) -> Result<Report, CliError> {
    let mut s = Session::new("label verify");
    let p = s.poset(poset)?;
    let lab = s.labeling(labeling)?;
    let mut results = json!({});
    let ok = match verify_quasi_el(&p, &lab) {
        Ok(cert) => {
            let spines: Vec<Value> = cert
                .spines()
                .iter()
                .map(|sp| {
                    json!({
                        "interval": [p.name(sp.interval.0), p.name(sp.interval.1)],
                        "spine": p.chain_names(&sp.elements),
                        "labels": sp.labels,
                    })
                })
                .collect();
            let (r, chain) = min_chain_complexity(&p, &lab).map_err(input)?;
            extend(
                &mut results,
                json!({"quasi_el": true, "min_chain_complexity": r, "minimizing_chain": p.chain_names(&chain), "spines": spines}),
            );
            true
        }
        Err(e) if labeling_input_error(&e) => return Err(input(e)),
        Err(e) => {
            extend(&mut results, json!({"quasi_el": false, "violation": e.to_string()}));
            false
        }
    };
    let mut all_ok = ok;
    if el {
        match verify_el(&p, &lab) {
            Ok(()) => extend(&mut results, json!({"el": true})),
            Err(e) if labeling_input_error(&e) => return Err(input(e)),
            Err(e) => {
                all_ok = false;
                extend(&mut results, json!({"el": false, "el_violation": e.to_string()}));
            }
        }
    }
    Ok(s.finish(status(all_ok), results))
}

/// Whether a construction failure is about the input rather than the claim.
fn construct_input_error(e: &ConstructError) -> bool {
    match e {
        ConstructError::Labeling(l) => labeling_input_error(l),
        ConstructError::Poset(_) => true,
        ConstructError::Complex(ComplexError::SizeLimit { .. }) => true,
        _ => false,
    }
}

#[allow(clippy::too_many_arguments)]
fn complex_vd(
    complex: Option<&Path>,
    poset: Option<&Path>,
    labeling: Option<&Path>,
    skeleton: Option<isize>,
    full: bool,
    certificate: Option<&Path>,
    output: Option<&Path>,
    limits: &Limits,
) -> Result<Report, CliError> {
    let mut s = Session::new("complex vd");
    if let (Some(p), Some(l)) = (poset, labeling) {
        let p = s.poset(p)?;
        let lab = s.labeling(l)?;
        let (r, _) = match min_chain_complexity(&p, &lab) {
            Ok(v) => v,
            Err(e) if labeling_input_error(&e) => return Err(input(e)),
            Err(e) => return Ok(s.finish(Status::VerificationFailed, json!({"method": "constructive", "reason": e.to_string()}))),
        };
        let (level, built) = if full {
            (None, constructive_vd_full(&p, &lab))
        } else {
            let k = skeleton.unwrap_or(r as isize - 2);
            if k < -1 {
                return Err(CliError::Input(format!("skeleton dimension {k} is below -1")));
            }
            (Some(k), constructive_vd_skeleton(&p, &lab, (k + 2) as usize))
        };
        return match built {
            Ok(cert) => {
                if let Some(path) = output {
                    write(path, &io::certificate_to_json(&cert))?;
                }
                Ok(s.finish(
                    Status::Ok,
                    json!({
                        "method": "constructive",
                        "skeleton": level,
                        "full": full,
                        "min_chain_complexity": r,
                        "decomposable": true,
                        "shedding_steps": cert.shed_count(),
                        "certificate": cert,
                    }),
                ))
            }
            Err(e) if construct_input_error(&e) => Err(input(e)),
            Err(e) => Ok(s.finish(
                Status::VerificationFailed,
                json!({"method": "constructive", "skeleton": level, "full": full, "min_chain_complexity": r, "reason": e.to_string()}),
            )),
        };
    }
    let source = ComplexSource {
        complex: complex.map(Path::to_path_buf),
        poset: poset.map(Path::to_path_buf),
    };
    if source.complex.is_none() && source.poset.is_none() {
        return Err(CliError::Input("give --complex, or --poset with --labeling".into()));
    }
    let whole = s.complex(&source)?;
    let c = match skeleton {
        Some(k) => whole.skeleton(k),
        None => whole,
    };
    if let Some(path) = certificate {
        let text = s.read(path)?;
        let cert = io::certificate_from_json(&text).map_err(|e| located(path, e))?;
        return Ok(match validate_certificate(&c, &cert) {
            Ok(()) => s.finish(Status::Ok, json!({"method": "check", "skeleton": skeleton, "valid": true})),
            Err(e) => s.finish(Status::VerificationFailed, json!({"method": "check", "skeleton": skeleton, "valid": false, "reason": e.to_string()})),
        });
    }
    let found = vd_certificate_bruteforce(&c, limits.vertex_limit).map_err(input)?;
    if let (Some(cert), Some(path)) = (&found, output) {
        write(path, &io::certificate_to_json(cert))?;
    }
    Ok(s.finish(
        Status::Ok,
        json!({
            "method": "search",
            "skeleton": skeleton,
            "decomposable": found.is_some(),
            "certificate": found,
        }),
    ))
}

fn complex_depth(source: &ComplexSource, skeleton: Option<isize>, limits: &Limits) -> Result<Report, CliError> {
    let mut s = Session::new("complex depth");
    let whole = s.complex(source)?;
    let c = match skeleton {
        Some(k) => whole.skeleton(k),
        None => whole,
    };
    let betti = reduced_betti(&c, limits.face_limit).map_err(input)?;
    let d = match depth(&c, limits.face_limit) {
        Ok(d) => Some(d),
        Err(ComplexError::VoidComplex) => None,
        Err(e) => return Err(input(e)),
    };
    let cm = is_cohen_macaulay(&c, limits.face_limit).map_err(input)?;
    let failure = cm.as_ref().map(|f| match f {
        CmFailure::NotPure => "not pure".to_string(),
        other => format!("{other:?}"),
    });
    Ok(s.finish(
        Status::Ok,
        json!({
            "skeleton": skeleton,
            "dim": c.dim(),
            "pure": c.is_pure(),
            "f_vector": c.f_vector(),
            "reduced_betti": betti.iter().collect::<Vec<_>>(),
            "depth": d,
            "cohen_macaulay": cm.is_none(),
            "cm_failure": failure,
        }),
    ))
}

fn complex_shell(source: &ComplexSource, skeleton: Option<isize>, verify: Option<&Path>, limits: &Limits) -> Result<Report, CliError> {
    let mut s = Session::new("complex shell");
    let whole = s.complex(source)?;
    let c = match skeleton {
        Some(k) => whole.skeleton(k),
        None => whole,
    };
    if let Some(path) = verify {
        let text = s.read(path)?;
        let order = io::order_from_json(&text).map_err(|e| located(path, e))?;
        return Ok(match verify_shelling(&c, &order) {
            Ok(None) => s.finish(Status::Ok, json!({"skeleton": skeleton, "valid": true})),
            Ok(Some(k)) => s.finish(
                Status::VerificationFailed,
                json!({"skeleton": skeleton, "valid": false, "fails_at": k, "facet": order[k]}),
            ),
            Err(e) => s.finish(Status::VerificationFailed, json!({"skeleton": skeleton, "valid": false, "reason": e.to_string()})),
        });
    }
    let found = find_shelling(&c, limits.facet_limit).map_err(input)?;
    Ok(s.finish(Status::Ok, json!({"skeleton": skeleton, "shellable": found.is_some(), "order": found})))
}

fn morse(poset: &Path, labeling: &Path, limits: &Limits) -> Result<Report, CliError> {
    let mut s = Session::new("morse report");
    let p = s.poset(poset)?;
    let lab = s.labeling(labeling)?;
    if let Err(e) = verify_quasi_el(&p, &lab) {
        if labeling_input_error(&e) {
            return Err(input(e));
        }
        return Ok(s.finish(Status::VerificationFailed, json!({"quasi_el": false, "violation": e.to_string()})));
    }
    let report = morse_report(&p, &lab, limits.chain_limit).map_err(input)?;
    let mut results = serde_json::to_value(&report).expect("report serializes");
    match homology_consistency(&p, &lab, limits.chain_limit, limits.face_limit) {
        Ok(h) => extend(&mut results, json!({"homology": h, "consistent": h.consistent()})),
        Err(e) => s.warnings.push(format!("homology comparison skipped: {e}")),
    }
    let ok = report.violations.is_empty();
    Ok(s.finish(status(ok), results))
}

fn group_lattice(file: &Path, output: Option<&Path>, limits: &Limits) -> Result<Report, CliError> {
    let mut s = Session::new("group lattice");
    let gl = s.group(file, limits)?;
    let p = gl.poset();
    let subgroups: Vec<Value> = (0..p.len())
        .map(|i| json!({"name": p.name(i), "order": gl.order_of(i), "normal": gl.is_normal(i)}))
        .collect();
    let chief: Vec<Value> = gl
        .chief_series()
        .elements()
        .iter()
        .map(|&i| json!({"name": p.name(i), "order": gl.order_of(i)}))
        .collect();
    if let Some(path) = output {
        write(path, &io::poset_to_json(p))?;
    }
    Ok(s.finish(
        Status::Ok,
        json!({
            "degree": gl.group().degree(),
            "order": gl.group().order(),
            "subgroup_count": p.len(),
            "subgroups": subgroups,
            "chief_series": chief,
            "r": gl.r(),
            "solvable": gl.is_solvable(),
            "lattice": PosetFile::of(p),
        }),
    ))
}

fn group_solvable(file: &Path, method: Method, limits: &Limits) -> Result<Report, CliError> {
    let mut s = Session::new("group solvable");
    let gl = s.group(file, limits)?;
    Ok(match method {
        Method::Depth => {
            let v = groups::solvability_by_depth(&gl, limits.face_limit).map_err(input)?;
            if !v.depth_exact {
                s.warnings.push(format!("depth is only bounded below by {}", v.depth));
            }
            let ok = v.agree();
            s.finish(
                status(ok),
                json!({"method": "depth", "solvable": v.solvable_by_depth, "depth": v.depth, "r": v.r, "verdict": v}),
            )
        }
        Method::Skeleton => match groups::skeleton_shellability_criterion(&gl, limits.face_limit) {
            Ok(v) => {
                let ok = v.agree();
                s.finish(status(ok), json!({"method": "skeleton", "solvable": v.solvable_by_criterion, "r": v.r, "verdict": v}))
            }
            Err(e @ GroupError::ShellabilityUndecided { .. }) => {
                s.warnings.push(e.to_string());
                s.finish(
                    Status::VerificationFailed,
                    json!({"method": "skeleton", "solvable": null, "r": gl.r(), "solvable_by_derived_series": gl.is_solvable()}),
                )
            }
            Err(e) => return Err(input(e)),
        },
    })
}

fn group_thevenaz(file: &Path, limits: &Limits) -> Result<Report, CliError> {
    let mut s = Session::new("group thevenaz");
    let gl = s.group(file, limits)?;
    let v = match groups::thevenaz_check(&gl, limits.face_limit) {
        Ok(v) => v,
        Err(GroupError::NotSolvable) => return Err(CliError::Input("the check applies to solvable groups only".into())),
        Err(e) => return Err(input(e)),
    };
    let ok = v.holds();
    Ok(s.finish(status(ok), json!({"holds": ok, "verdict": v})))
}
