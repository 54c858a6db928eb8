//! Subcommand dispatch and report formatting.
//!
//! Every command emits a `Report { schema_version, command, inputs, outputs }`
//! as pretty JSON under `--json`, or a plain-text rendering by default.  All
//! output is deterministic for fixed inputs; no color is ever emitted, so
//! `NO_COLOR` is honored trivially.

use std::collections::BTreeSet;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dp4::galois::{
    certify_chain, delta_gset, enumerate_links, h1, invariant_rank, is_minimal, orbits_on_lines,
    GaloisError, LineAction, LinkFlags, LinkReport,
};
use dp4::involutions::{bertini_involution, geiser_involution, quadric_involutions};
use dp4::lattice::{enumerate_lines, LatticeAut, LatticeTag};
use dp4::marking::{
    construction_s_to_x, construction_x_to_s, unique_section, CbMarking, Dp4Action, Dp4Marking,
    Dp4MarkingDto,
};
use dp4::transform::{uniqueness_check, ChainDto, ChainMove};
use dp4::weyl::{enumerate_group, Subgroup, WeylElement};

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(
    name = "dp4",
    about = "Exact combinatorics of degree-4 del Pezzo surfaces",
    version
)]
struct Cli {
    /// Emit the machine-readable JSON report instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the lines of a del Pezzo Picard lattice.
    Lines(LinesArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Orbit, minimality, cohomology, and link data for a subgroup.
    Galois(GaloisArgs),
    /// Compose and certify a chain of moves from a JSON file.
    Chain(ChainArgs),
    /// List the standard involutions and their lattice matrices.
    Involutions,
    /// Validate a degree-4 marking and show its induced bundle marking.
    Marking(MarkingArgs),
}

#[derive(Args)]
struct LinesArgs {
    /// Surface degree, 1 through 4.
    #[arg(long)]
    degree: u8,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: parity, unique-section, aut-order, relation,
    /// theta-uniqueness, roundtrip.
    suite: String,
}

#[derive(Args)]
struct GaloisArgs {
    /// Comma-separated generators, e.g. "i1234,(12)"; empty for the trivial
    /// subgroup.
    #[arg(long, default_value = "")]
    gens: String,
    /// A rational point in general position exists.
    #[arg(long)]
    point: bool,
    /// A suitable degree-2 closed point exists.
    #[arg(long)]
    deg2: bool,
    /// A suitable degree-3 closed point exists.
    #[arg(long)]
    deg3: bool,
}

#[derive(Args)]
struct ChainArgs {
    /// Chain description file: {"moves": [...]}.
    file: std::path::PathBuf,
    /// Comma-separated generators for the certification subgroup.
    #[arg(long, default_value = "i1234,(12)")]
    gens: String,
}

#[derive(Args)]
struct MarkingArgs {
    /// Marking file {"Q": [...], "L": [[...]; 5]}; defaults to the standard
    /// marking.
    #[arg(long)]
    file: Option<std::path::PathBuf>,
}

#[derive(Serialize)]
struct Report<I: Serialize, O: Serialize> {
    schema_version: &'static str,
    command: &'static str,
    inputs: I,
    outputs: O,
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(verified) => {
            if verified {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

/// Runs one command; `Ok(false)` means the command ran but a requested
/// verification failed.
fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Lines(a) => cmd_lines(a, cli.json),
        Command::Verify(a) => cmd_verify(a, cli.json),
        Command::Galois(a) => cmd_galois(a, cli.json),
        Command::Chain(a) => cmd_chain(a, cli.json),
        Command::Involutions => cmd_involutions(cli.json),
        Command::Marking(a) => cmd_marking(a, cli.json),
    }
}

fn print_report<I: Serialize, O: Serialize>(report: &Report<I, O>, json: bool, text: String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serialization")
        );
    } else {
        print!("{text}");
    }
}

fn parse_gens(gens: &str) -> Result<Subgroup> {
    let mut parsed = Vec::new();
    for tok in gens.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let g: WeylElement = tok
            .parse()
            .map_err(|e| anyhow!("cannot parse generator {tok:?}: {e}"))?;
        parsed.push(g);
    }
    Subgroup::generate(&parsed).map_err(|e| anyhow!("invalid generators: {e}"))
}

fn cmd_lines(args: &LinesArgs, json: bool) -> Result<bool> {
    let tag = LatticeTag::new(args.degree).map_err(|e| anyhow!("{e}"))?;
    let lines = enumerate_lines(tag)?;

    #[derive(Serialize)]
    struct Inputs {
        degree: u8,
    }
    #[derive(Serialize)]
    struct Outputs {
        count: usize,
        lines: Vec<Vec<i64>>,
    }

    let mut text = format!("{} lines on dp{}\n", lines.len(), args.degree);
    for l in &lines {
        text.push_str(&format!("{l}\n"));
    }
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: "lines",
        inputs: Inputs {
            degree: args.degree,
        },
        outputs: Outputs {
            count: lines.len(),
            lines: lines.iter().map(|l| l.coords().to_vec()).collect(),
        },
    };
    print_report(&report, json, text);
    Ok(true)
}

#[derive(Serialize)]
struct SuiteOutcome {
    passed: bool,
    detail: String,
}

fn suite_parity() -> SuiteOutcome {
    let markings = CbMarking::all();
    let mut checked = 0usize;
    for m in &markings {
        let Ok(p) = m.parity() else {
            return SuiteOutcome {
                passed: false,
                detail: "a marking has sections of mixed parity".into(),
            };
        };
        if m.equivalent().parity().ok() == Some(p) {
            return SuiteOutcome {
                passed: false,
                detail: "swapping every component failed to flip parity".into(),
            };
        }
        checked += 1;
    }
    SuiteOutcome {
        passed: true,
        detail: format!("parity well defined and swap-reversed for {checked} markings"),
    }
}

fn suite_unique_section() -> SuiteOutcome {
    let (odd, _) = CbMarking::standard()
        .canonical_odd()
        .expect("standard marking parity");
    let mut hits = 0usize;
    for mask in (0u8..32).filter(|m| m.count_ones() % 2 == 1) {
        match unique_section(&odd, mask) {
            Ok(s) if odd.section_subset(&s).ok() == Some(mask) => hits += 1,
            _ => {
                return SuiteOutcome {
                    passed: false,
                    detail: format!("no unique section for subset {mask:#07b}"),
                }
            }
        }
    }
    let even_rejected = unique_section(&odd, 0b11).is_err();
    SuiteOutcome {
        passed: hits == 16 && even_rejected,
        detail: format!("{hits}/16 odd subsets matched; even subsets rejected: {even_rejected}"),
    }
}

fn suite_aut_order() -> SuiteOutcome {
    let lines = enumerate_lines(LatticeTag::DP4).expect("dp4 lines");
    let n = lines.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && dp4::lattice::intersect(&lines[i], &lines[j]).unwrap() > 0)
                .collect()
        })
        .collect();
    fn extend(adj: &[Vec<bool>], image: &mut Vec<usize>, used: &mut [bool], count: &mut usize) {
        let v = image.len();
        if v == adj.len() {
            *count += 1;
            return;
        }
        for cand in 0..adj.len() {
            if !used[cand] && (0..v).all(|u| adj[u][v] == adj[image[u]][cand]) {
                used[cand] = true;
                image.push(cand);
                extend(adj, image, used, count);
                image.pop();
                used[cand] = false;
            }
        }
    }
    let mut count = 0usize;
    extend(&adj, &mut Vec::new(), &mut vec![false; n], &mut count);
    SuiteOutcome {
        passed: count == 1920,
        detail: format!("incidence graph has {count} automorphisms"),
    }
}

fn suite_relation() -> SuiteOutcome {
    let order = enumerate_group(5).map(|g| g.len()).unwrap_or(0);
    let product = ["i1234", "i1235", "i1245", "i1345", "i2345"]
        .iter()
        .map(|s| s.parse::<WeylElement>().unwrap())
        .try_fold(WeylElement::identity(5).unwrap(), |acc, g| acc.compose(&g));
    let relation = product.map(|p| p.is_identity()).unwrap_or(false);
    SuiteOutcome {
        passed: order == 1920 && relation,
        detail: format!("group order {order}; five-involution relation holds: {relation}"),
    }
}

fn suite_theta_uniqueness() -> SuiteOutcome {
    let mx = CbMarking::standard();
    let order = [2usize, 0, 4, 1, 3];
    let pairs = std::array::from_fn(|i| {
        let (e, f) = &mx.pairs()[order[i]];
        if i % 2 == 0 {
            (f.clone(), e.clone())
        } else {
            (e.clone(), f.clone())
        }
    });
    let mx2 = CbMarking::new(pairs).expect("permuted marking");
    match uniqueness_check(&mx, &mx2) {
        Ok(cert) => {
            let survivors = cert
                .candidates
                .iter()
                .filter(|c| c.integral && c.equivariant)
                .count();
            SuiteOutcome {
                passed: survivors == 1 && cert.non_equivariant_isometry_exists,
                detail: format!(
                    "{survivors} surviving candidate(s); non-equivariant isometry witness: {}",
                    cert.non_equivariant_isometry_exists
                ),
            }
        }
        Err(e) => SuiteOutcome {
            passed: false,
            detail: format!("uniqueness check failed: {e}"),
        },
    }
}

fn suite_roundtrip() -> SuiteOutcome {
    let markings = Dp4Marking::all();
    for m in &markings {
        let back = construction_s_to_x(m).and_then(|mx| construction_x_to_s(&mx));
        if back.as_ref().ok() != Some(m) {
            return SuiteOutcome {
                passed: false,
                detail: format!("round trip failed for {m:?}"),
            };
        }
    }
    SuiteOutcome {
        passed: true,
        detail: format!("all {} markings round trip", markings.len()),
    }
}

fn cmd_verify(args: &VerifyArgs, json: bool) -> Result<bool> {
    let outcome = match args.suite.as_str() {
        "parity" => suite_parity(),
        "unique-section" => suite_unique_section(),
        "aut-order" => suite_aut_order(),
        "relation" => suite_relation(),
        "theta-uniqueness" => suite_theta_uniqueness(),
        "roundtrip" => suite_roundtrip(),
        other => bail!(
            "unknown suite {other:?}; expected one of parity, unique-section, \
             aut-order, relation, theta-uniqueness, roundtrip"
        ),
    };

    #[derive(Serialize)]
    struct Inputs {
        suite: String,
    }

    let text = format!(
        "{}: {} ({})\n",
        args.suite,
        if outcome.passed { "pass" } else { "FAIL" },
        outcome.detail
    );
    let passed = outcome.passed;
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        inputs: Inputs {
            suite: args.suite.clone(),
        },
        outputs: outcome,
    };
    print_report(&report, json, text);
    Ok(passed)
}

fn cmd_galois(args: &GaloisArgs, json: bool) -> Result<bool> {
    let g = parse_gens(&args.gens)?;
    let action = Dp4Action::new(&Dp4Marking::standard())?;
    let marked = LineAction::marked(&action, &g)?;
    let mut orbit_sizes: Vec<usize> = orbits_on_lines(&marked).iter().map(Vec::len).collect();
    orbit_sizes.sort_unstable();
    let rank = invariant_rank(&marked, &action)?;
    let minimal = is_minimal(&marked, &action)?;
    let mut cycle_types: Vec<String> = delta_gset(&marked, &action)?.cycle_types();
    cycle_types.sort();
    cycle_types.dedup();
    let h1_count = h1(&g)?.len();
    let flags = LinkFlags {
        point: args.point,
        deg2: args.deg2,
        deg3: args.deg3,
    };
    let (links, link_refusal) = match enumerate_links(&g, &action, flags) {
        Ok(report) => (Some(report), None),
        Err(GaloisError::NotMinimal) => (
            None,
            Some("link enumeration refused: configuration is not minimal".to_string()),
        ),
        Err(e) => return Err(e.into()),
    };

    #[derive(Serialize)]
    struct Inputs {
        gens: Vec<String>,
        flags: LinkFlags,
    }
    #[derive(Serialize)]
    struct Outputs {
        subgroup_order: usize,
        orbit_sizes: Vec<usize>,
        invariant_rank: usize,
        minimal: bool,
        delta_cycle_types: Vec<String>,
        h1_classes: usize,
        links: Option<LinkReport>,
        link_refusal: Option<String>,
    }

    let mut text = format!(
        "subgroup order {}\norbit sizes {:?}\ninvariant rank {}\nminimal: {}\n",
        g.order(),
        orbit_sizes,
        rank,
        minimal
    );
    text.push_str(&format!("delta cycle types: {}\n", cycle_types.join(", ")));
    text.push_str(&format!("H1 classes: {h1_count}\n"));
    match (&links, &link_refusal) {
        (Some(report), _) => {
            text.push_str(&format!("verdict: {}\n", report.verdict));
            for l in &report.links {
                text.push_str(&format!("link: {} -> {}\n", l.kind, l.target));
            }
        }
        (None, Some(msg)) => text.push_str(&format!("{msg}\n")),
        (None, None) => unreachable!("link outcome is always recorded"),
    }
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: "galois",
        inputs: Inputs {
            gens: g.generators().iter().map(|w| w.to_string()).collect(),
            flags,
        },
        outputs: Outputs {
            subgroup_order: g.order(),
            orbit_sizes,
            invariant_rank: rank,
            minimal,
            delta_cycle_types: cycle_types,
            h1_classes: h1_count,
            links,
            link_refusal,
        },
    };
    print_report(&report, json, text);
    Ok(true)
}

fn cmd_chain(args: &ChainArgs, json: bool) -> Result<bool> {
    let g = parse_gens(&args.gens)?;
    let raw = std::fs::read_to_string(&args.file)
        .with_context(|| format!("cannot read {}", args.file.display()))?;
    let dto: ChainDto = serde_json::from_str(&raw).context("malformed chain file")?;
    let moves: Vec<ChainMove> = dto
        .moves
        .iter()
        .enumerate()
        .map(|(i, m)| ChainMove::try_from(m).map_err(|e| anyhow!("move {}: {e}", i + 1)))
        .collect::<Result<_>>()?;
    let result = dp4::transform::chain_compose(&moves).map_err(|e| anyhow!("{e}"))?;
    let cert = certify_chain(&result, &g)?;
    let certified = cert.n_equivariant && cert.g_equivariant && cert.invariant_preserved;

    // Images of the marked lines under the composite bijection.
    let nu = result.as_nu();
    let mut marked_images = Vec::new();
    let q_img = nu.apply(result.start_marking.q()).map_err(|e| anyhow!("{e}"))?;
    marked_images.push(("Q".to_string(), q_img));
    for (i, l) in result.start_marking.lines().iter().enumerate() {
        let img = nu.apply(l).map_err(|e| anyhow!("{e}"))?;
        marked_images.push((format!("L{}", i + 1), img));
    }

    #[derive(Serialize)]
    struct Inputs {
        file: String,
        gens: Vec<String>,
        moves: usize,
    }
    #[derive(Serialize)]
    struct Outputs {
        start_q: Vec<i64>,
        end_q: Vec<i64>,
        line_images: Vec<[String; 2]>,
        permutation: Vec<usize>,
        n_equivariant: bool,
        g_equivariant: bool,
        invariant_preserved: bool,
    }

    let mut text = format!(
        "chain of {} move(s): {:?} -> {:?}\n",
        moves.len(),
        result.start_marking,
        result.end_marking
    );
    for (name, img) in &marked_images {
        text.push_str(&format!("{name} -> {img}\n"));
    }
    text.push_str(&format!(
        "certificate: sign-subgroup equivariant {}, subgroup equivariant {}, invariant preserved {}\n",
        cert.n_equivariant, cert.g_equivariant, cert.invariant_preserved
    ));
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: "chain",
        inputs: Inputs {
            file: args.file.display().to_string(),
            gens: g.generators().iter().map(|w| w.to_string()).collect(),
            moves: moves.len(),
        },
        outputs: Outputs {
            start_q: result.start_marking.q().coords().to_vec(),
            end_q: result.end_marking.q().coords().to_vec(),
            line_images: marked_images
                .iter()
                .map(|(n, c)| [n.clone(), c.to_string()])
                .collect(),
            permutation: result.perm.clone(),
            n_equivariant: cert.n_equivariant,
            g_equivariant: cert.g_equivariant,
            invariant_preserved: cert.invariant_preserved,
        },
    };
    print_report(&report, json, text);
    Ok(certified)
}

fn aut_rows(aut: &LatticeAut) -> Vec<Vec<i64>> {
    let n = aut.tag().rank();
    (0..n)
        .map(|r| (0..n).map(|c| aut.entry(r, c)).collect())
        .collect()
}

fn cmd_involutions(json: bool) -> Result<bool> {
    let quadrics = quadric_involutions();

    #[derive(Serialize)]
    struct QuadricOut {
        index: u8,
        element: String,
        fixed_lines: usize,
    }
    #[derive(Serialize)]
    struct Outputs {
        quadric: Vec<QuadricOut>,
        geiser_dp2: Vec<Vec<i64>>,
        bertini_dp1: Vec<Vec<i64>>,
    }

    let action = Dp4Action::new(&Dp4Marking::standard())?;
    let mut quadric_out = Vec::new();
    for q in &quadrics {
        let perm = action.line_perm(q.element())?;
        let fixed = perm.iter().enumerate().filter(|&(i, &j)| i == j).count();
        quadric_out.push(QuadricOut {
            index: q.index(),
            element: q.element().to_string(),
            fixed_lines: fixed,
        });
    }
    let geiser = geiser_involution();
    let bertini = bertini_involution();

    let mut text = String::from("quadric involutions (standard marking):\n");
    for q in &quadric_out {
        text.push_str(&format!(
            "  {}: {} ({} fixed lines)\n",
            q.index, q.element, q.fixed_lines
        ));
    }
    text.push_str("geiser involution on dp2:\n");
    for row in aut_rows(&geiser) {
        text.push_str(&format!("  {row:?}\n"));
    }
    text.push_str("bertini involution on dp1:\n");
    for row in aut_rows(&bertini) {
        text.push_str(&format!("  {row:?}\n"));
    }
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: "involutions",
        inputs: (),
        outputs: Outputs {
            quadric: quadric_out,
            geiser_dp2: aut_rows(&geiser),
            bertini_dp1: aut_rows(&bertini),
        },
    };
    print_report(&report, json, text);
    Ok(true)
}

fn cmd_marking(args: &MarkingArgs, json: bool) -> Result<bool> {
    let marking = match &args.file {
        Some(path) => {
            let raw = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let dto: Dp4MarkingDto = serde_json::from_str(&raw).context("malformed marking file")?;
            Dp4Marking::try_from(&dto).map_err(|e| anyhow!("invalid marking: {e}"))?
        }
        None => Dp4Marking::standard(),
    };
    let bundle = construction_s_to_x(&marking)?;
    let parity = bundle.parity()?;
    let action = Dp4Action::new(&marking)?;
    let labels: BTreeSet<u8> = (0..16).map(|i| action.label_of(i)).collect();

    #[derive(Serialize)]
    struct Inputs {
        file: Option<String>,
    }
    #[derive(Serialize)]
    struct Outputs {
        q: Vec<i64>,
        lines: Vec<Vec<i64>>,
        bundle_pairs: Vec<[Vec<i64>; 2]>,
        bundle_parity: dp4::marking::Parity,
        label_count: usize,
    }

    let mut text = format!("Q = {}\n", marking.q());
    for (i, l) in marking.lines().iter().enumerate() {
        text.push_str(&format!("L{} = {l}\n", i + 1));
    }
    text.push_str(&format!("bundle parity: {parity:?}\n"));
    for (i, (e, f)) in bundle.pairs().iter().enumerate() {
        text.push_str(&format!("fiber {}: E = {e}, F = {f}\n", i + 1));
    }
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: "marking",
        inputs: Inputs {
            file: args.file.as_ref().map(|p| p.display().to_string()),
        },
        outputs: Outputs {
            q: marking.q().coords().to_vec(),
            lines: marking.lines().iter().map(|l| l.coords().to_vec()).collect(),
            bundle_pairs: bundle
                .pairs()
                .iter()
                .map(|(e, f)| [e.coords().to_vec(), f.coords().to_vec()])
                .collect(),
            bundle_parity: parity,
            label_count: labels.len(),
        },
    };
    print_report(&report, json, text);
    Ok(true)
}
