//! Command implementations. Each command parses its input, runs the
//! library, and renders either human-readable text or deterministic JSON.
//!
//! Exit-code contract: 0 success, 1 verification failure (with
//! witnesses), 2 parse or usage error.

use std::fmt::Write as _;

use crate::corpus;
use crate::doc::MotiveDocument;
use crate::report::*;
use cartier::biext::{
    canonical_nat_structure, curvature, deligne_pairing_of, is_perfect, poincare,
    weight_block_check,
};
use cartier::extgroups::{ext_gm, hom_to_gm, nat_ext_group, ApproximationWindow};
use cartier::motive::{cartier_dual, MotiveMorphism, ToricOneMotive};
use cartier::universal::{de_rham, universal_extension};
use cartier::verify::{all_pass, run_all};

/// A command's result: rendered output plus the process exit code.
pub struct CmdOutput {
    pub text: String,
    pub exit_code: i32,
}

fn ok(text: String) -> CmdOutput {
    CmdOutput { text, exit_code: 0 }
}

/// Default extra primes merged into every window.
const DEFAULT_PRIMES: [u64; 3] = [2, 3, 5];
const DEFAULT_DENOMINATOR_BOUND: u32 = 6;

/// Resolve the window for a document: CLI flags override document fields
/// override defaults; the window is auto-extended to cover the motive's
/// primes, with the extension recorded.
pub fn resolve_window(
    doc: &MotiveDocument,
    motive: &ToricOneMotive,
    primes_flag: Option<&[u64]>,
    denominator_flag: Option<u32>,
) -> Result<(ApproximationWindow, bool), String> {
    let requested: Vec<u64> = match (primes_flag, &doc.primes) {
        (Some(flag), _) => flag.to_vec(),
        (None, Some(doc_primes)) => doc_primes.clone(),
        (None, None) => DEFAULT_PRIMES.to_vec(),
    };
    let n = denominator_flag
        .or(doc.denominator_bound)
        .unwrap_or(DEFAULT_DENOMINATOR_BOUND);
    let window =
        ApproximationWindow::new(requested.iter().copied(), n).map_err(|e| e.to_string())?;
    if window.covers(motive) {
        return Ok((window, false));
    }
    let extended = ApproximationWindow::for_motive(motive, requested.iter().copied(), n)
        .map_err(|e| e.to_string())?;
    Ok((extended, true))
}

fn motive_data(m: &ToricOneMotive) -> MotiveData {
    let u = (0..m.torus_rank())
        .map(|r| {
            (0..m.lattice_rank())
                .map(|c| m.structure_map().at(r, c).reconstruct().to_string())
                .collect()
        })
        .collect();
    MotiveData {
        lattice_rank: m.lattice_rank(),
        torus_rank: m.torus_rank(),
        u,
    }
}

fn parse_doc(input: &str) -> Result<(MotiveDocument, ToricOneMotive), String> {
    let doc = MotiveDocument::parse(input).map_err(|e| e.to_string())?;
    let motive = doc.to_motive().map_err(|e| e.to_string())?;
    Ok((doc, motive))
}

pub fn cmd_describe(input: &str, json: bool) -> Result<CmdOutput, String> {
    let (doc, motive) = parse_doc(input)?;
    let dual = cartier_dual(&motive);
    let ext = universal_extension(&motive);
    let dr = de_rham(&motive);
    let weights = cartier::motive::weight_data(&motive);
    let morphisms: Vec<MorphismReport> = doc
        .morphisms
        .iter()
        .map(|block| MorphismReport {
            label: block.label.clone(),
            valid: MotiveMorphism::new(
                motive.clone(),
                motive.clone(),
                block.f_lattice.clone(),
                block.f_torus.clone(),
            )
            .is_ok(),
        })
        .collect();

    let data = DescribeData {
        motive: motive_data(&motive),
        dual: motive_data(&dual),
        universal_extension: UniversalData {
            vector_rank: ext.vector_rank(),
            lift_is_canonical: ext.v.is_identity(),
        },
        de_rham: DeRhamData {
            dim: dr.dim,
            basis_labels: dr.basis_labels.clone(),
            weight_minus2_rank: dr.weight_minus2_rank,
        },
        weights: WeightReport {
            gr0_rank: weights.gr0_rank,
            gr_minus2_rank: weights.gr_minus2_rank,
        },
        morphisms,
    };
    let report = Report::new("describe", input.as_bytes(), doc.name.clone(), data);
    if json {
        return Ok(ok(report.to_json()));
    }

    let mut text = String::new();
    let _ = writeln!(
        text,
        "motive {}: M = [u: Z^{} → Gm^{}]",
        doc.name,
        motive.lattice_rank(),
        motive.torus_rank()
    );
    let _ = writeln!(text, "  u           = {}", motive.structure_map());
    let _ = writeln!(
        text,
        "  dual        = [u′: Z^{} → Gm^{}], u′ = {}",
        dual.lattice_rank(),
        dual.torus_rank(),
        dual.structure_map()
    );
    let _ = writeln!(
        text,
        "  M♮          = vector rank {}, canonical lift {}",
        ext.vector_rank(),
        if ext.v.is_identity() { "yes" } else { "no" }
    );
    let _ = writeln!(
        text,
        "  T_dR        = dim {} (basis {}), W₋₂ rank {}",
        dr.dim,
        dr.basis_labels.join(", "),
        dr.weight_minus2_rank
    );
    let _ = writeln!(
        text,
        "  weights     = gr₀ {}, gr₋₂ {}",
        weights.gr0_rank, weights.gr_minus2_rank
    );
    for m in &report.data.morphisms {
        let _ = writeln!(
            text,
            "  morphism {} = {}",
            m.label,
            if m.valid { "valid" } else { "INVALID" }
        );
    }
    Ok(ok(text))
}

pub fn cmd_pairing(input: &str, json: bool) -> Result<CmdOutput, String> {
    let (doc, motive) = parse_doc(input)?;
    let b = poincare(&motive);
    let nat = canonical_nat_structure(&b).map_err(|e| e.to_string())?;
    let phi = deligne_pairing_of(&b, &nat).map_err(|e| e.to_string())?;
    let perfect = is_perfect(&phi);
    let weights_ok = weight_block_check(&motive).map_err(|e| e.to_string())?;
    let curv = curvature(&nat);

    let det = perfect
        .det
        .as_ref()
        .map(|d| d.to_string())
        .unwrap_or_else(|| "undefined".to_string());
    let data = PairingData {
        connection_form: nat.connection_form.display(),
        curvature: curv.display(),
        phi: rat_matrix_rows(&phi.matrix),
        row_labels: phi.row_labels.clone(),
        col_labels: phi.col_labels.clone(),
        det: det.clone(),
        perfect: perfect.perfect,
        unimodular: perfect.unimodular,
        weight_blocks_ok: weights_ok,
    };
    let report = Report::new("pairing", input.as_bytes(), doc.name.clone(), data);
    if json {
        return Ok(ok(report.to_json()));
    }
    let mut text = String::new();
    let _ = writeln!(text, "motive {}", doc.name);
    let _ = writeln!(text, "  ω  = {}", report.data.connection_form);
    let _ = writeln!(text, "  R  = {}", report.data.curvature);
    let _ = writeln!(text, "  Φ  = {}", phi.matrix);
    let _ = writeln!(text, "  det Φ = {det}");
    let _ = writeln!(
        text,
        "  perfect: {}, unimodular: {}, weight blocks: {}",
        report.data.perfect,
        report.data.unimodular,
        if weights_ok { "ok" } else { "FAIL" }
    );
    let exit_code = i32::from(!(report.data.perfect && weights_ok));
    Ok(CmdOutput { text, exit_code })
}

pub fn cmd_extgroups(
    input: &str,
    primes_flag: Option<&[u64]>,
    denominator_flag: Option<u32>,
    json: bool,
) -> Result<CmdOutput, String> {
    let (doc, motive) = parse_doc(input)?;
    let (window, auto_extended) = resolve_window(&doc, &motive, primes_flag, denominator_flag)?;

    let hom = hom_to_gm(&motive);
    let hom_nabla = cartier::extgroups::hom_nabla(&motive);
    let ext = ext_gm(&motive, &window).map_err(|e| e.to_string())?;
    let nat = nat_ext_group(&motive, &window).map_err(|e| e.to_string())?;
    let nat_presentation = nat.presentation();

    let hom_basis = (0..hom.cols())
        .map(|c| hom.col(c).iter().map(|x| x.to_string()).collect())
        .collect();
    let data = ExtGroupsData {
        window: WindowData::new(&window, auto_extended),
        hom_rank: hom.cols(),
        hom_basis,
        hom_nabla_rank: hom_nabla.cols(),
        ext: GroupData::new(&ext.s_part),
        ext_symbolic_summand: format!(
            "Z^{} for each prime outside S",
            ext.residual_free_rank_per_prime
        ),
        ext_nat: GroupData::new(&nat_presentation),
        ext_nat_generators: nat.labels.clone(),
    };
    let report = Report::new("extgroups", input.as_bytes(), doc.name.clone(), data);
    if json {
        return Ok(ok(report.to_json()));
    }
    let mut text = String::new();
    let _ = writeln!(text, "motive {} in window {window}", doc.name);
    if auto_extended {
        let _ = writeln!(
            text,
            "  (window auto-extended to cover the motive's primes)"
        );
    }
    let _ = writeln!(text, "  Hom(M,Gm)    = Z^{}", report.data.hom_rank);
    let _ = writeln!(text, "  Hom∇(M,Gm)   = Z^{}", report.data.hom_nabla_rank);
    let _ = writeln!(
        text,
        "  Ext(M,Gm)    = {} ⊕ ({})",
        ext.s_part, report.data.ext_symbolic_summand
    );
    let _ = writeln!(text, "  Ext♮(M,Gm)   = {nat_presentation}");
    Ok(ok(text))
}

fn verify_data(
    motive: &ToricOneMotive,
    window: &ApproximationWindow,
    auto_extended: bool,
) -> Result<VerifyData, String> {
    let checks = run_all(motive, window).map_err(|e| e.to_string())?;
    let all_passed = all_pass(&checks);
    Ok(VerifyData {
        window: WindowData::new(window, auto_extended),
        checks: checks
            .into_iter()
            .map(|c| CheckData {
                name: c.name,
                passed: c.passed,
                detail: c.detail,
            })
            .collect(),
        all_passed,
    })
}

pub fn cmd_verify(
    input: &str,
    primes_flag: Option<&[u64]>,
    denominator_flag: Option<u32>,
    json: bool,
) -> Result<CmdOutput, String> {
    let (doc, motive) = parse_doc(input)?;
    let (window, auto_extended) = resolve_window(&doc, &motive, primes_flag, denominator_flag)?;
    let data = verify_data(&motive, &window, auto_extended)?;
    let all_passed = data.all_passed;
    let report = Report::new("verify", input.as_bytes(), doc.name.clone(), data);
    let text = if json {
        report.to_json()
    } else {
        render_verify_text(&doc.name, &report.data)
    };
    Ok(CmdOutput {
        text,
        exit_code: i32::from(!all_passed),
    })
}

fn render_verify_text(name: &str, data: &VerifyData) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "verify {name} [S={{{}}}, N={}]",
        data.window
            .primes
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(","),
        data.window.denominator_bound
    );
    for check in &data.checks {
        let mark = if check.passed { "ok  " } else { "FAIL" };
        let _ = writeln!(text, "  [{mark}] {}", check.name);
        if !check.passed {
            let _ = writeln!(text, "         {}", check.detail);
        }
    }
    let _ = writeln!(
        text,
        "result: {}",
        if data.all_passed { "PASS" } else { "FAIL" }
    );
    text
}

pub fn cmd_verify_corpus(
    primes_flag: Option<&[u64]>,
    denominator_flag: Option<u32>,
    json: bool,
) -> Result<CmdOutput, String> {
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut all_passed = true;
    let mut corpus_bytes = Vec::new();
    for (name, content) in corpus::BUNDLED {
        corpus_bytes.extend_from_slice(content.as_bytes());
        let (doc, motive) = parse_doc(content)?;
        debug_assert_eq!(&doc.name, name, "corpus file name/content mismatch");
        let (window, auto_extended) = resolve_window(&doc, &motive, primes_flag, denominator_flag)?;
        let data = verify_data(&motive, &window, auto_extended)?;
        all_passed &= data.all_passed;
        let failed: Vec<String> = data
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.clone())
            .collect();
        if !json {
            let _ = writeln!(
                text,
                "[{}] {name}{}",
                if data.all_passed { "ok  " } else { "FAIL" },
                if failed.is_empty() {
                    String::new()
                } else {
                    format!(" — failed: {}", failed.join(", "))
                }
            );
        }
        entries.push(CorpusEntryData {
            name: doc.name,
            window: data.window,
            failed_checks: failed,
            passed: data.all_passed,
        });
    }
    let exit_code = i32::from(!all_passed);
    if json {
        let report = Report::new(
            "verify",
            &corpus_bytes,
            "corpus".to_string(),
            CorpusVerifyData {
                motives: entries,
                all_passed,
            },
        );
        return Ok(CmdOutput {
            text: report.to_json(),
            exit_code,
        });
    }
    let _ = writeln!(
        text,
        "corpus result: {}",
        if all_passed { "PASS" } else { "FAIL" }
    );
    Ok(CmdOutput { text, exit_code })
}

pub fn cmd_random(
    lattice_rank: usize,
    torus_rank: usize,
    primes: &[u64],
    seed: u64,
) -> Result<CmdOutput, String> {
    if lattice_rank > 6 || torus_rank > 6 {
        return Err("random motives are desk scale: r, d ≤ 6".to_string());
    }
    let primes = if primes.is_empty() {
        DEFAULT_PRIMES.to_vec()
    } else {
        primes.to_vec()
    };
    let mut rng = cartier::rng::DetRng::new(seed);
    let motive = rng.motive(lattice_rank, torus_rank, &primes, 2);
    let entries = (0..torus_rank)
        .flat_map(|r| (0..lattice_rank).map(move |c| (r, c)))
        .map(|(r, c)| motive.structure_map().at(r, c).reconstruct().to_string())
        .collect();
    let doc = MotiveDocument {
        name: format!("random_r{lattice_rank}d{torus_rank}_seed{seed}"),
        lattice_rank,
        torus_rank,
        entries,
        primes: Some(primes),
        denominator_bound: Some(DEFAULT_DENOMINATOR_BOUND),
        morphisms: Vec::new(),
    };
    // the rendered document must parse back identically
    let rendered = doc.render();
    let reparsed = MotiveDocument::parse(&rendered).map_err(|e| e.to_string())?;
    debug_assert_eq!(doc, reparsed);
    Ok(ok(rendered))
}
