//! Command-line front end: every subcommand runs one pipeline and emits
//! a certificate. Exit codes: 0 certified, 1 refuted, 2 inconclusive or
//! unsupported, 3 invalid input.

mod cert;

use cert::{evidence, Certificate, InputTrace, Verdict};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use orderforge::braids::{
    degeneracy_to_fdtc, fdtc_shift, hypothesis_check, is_quasipositive_form, BraidWord,
    FdtcRecord, Hypothesis, HypothesisFailure, QuasipositiveDecomposition,
};
use orderforge::circord::{validate_circular_order, CircularOrder, CircordError, RawOrderTable};
use orderforge::dynamics::{PLCircleMap, TranslationNumber};
use orderforge::exact::mat::IntMat;
use orderforge::exact::{format_q, parse_q, Q, Z};
use orderforge::homology::snf::{cokernel, smith_normal_form};
use orderforge::homology::{
    lifting_certificate, order_detection_certificate, second_cohomology, Detection, LiftOutcome,
    LiftRefutation, NonDetection, OrbifoldPresentation,
};
use orderforge::ordtree::{BranchLocus, CyclicOrderTree, SpineStep, TreeFile};
use orderforge::recal::{recalibrate_tree, StarCalibration};
use orderforge::twobridge::arc::{definite_on_arc, ArcVerdict, BlockId};
use orderforge::twobridge::rho::{rho_theta, rho_theta_at_pi_over, RhoAssessment};
use orderforge::twobridge::{
    branched_cover_report, seifert_matrix, CoverFinding, EvenCf, Orientation, TwoBridgeError,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "orderforge", version, about = "Certificate pipelines for circular orders, \
order trees, rotation numbers, homology lifts, two-bridge links and braids")]
struct Cli {
    /// Emit the certificate as tab-separated key/value rows.
    #[arg(long, global = true)]
    tsv: bool,
    /// Emit the certificate as JSON (the default).
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Circular orders on finite sets.
    #[command(subcommand)]
    Order(OrderCmd),
    /// Cyclically ordered trees: end orders, spines, branch loci.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Star recalibration: coprime adjustment and both rotation numbers.
    Recalibrate(RecalibrateArgs),
    /// Translation number of a PL circle map lift.
    Rotnum(RotnumArgs),
    /// Integer homology: Smith forms, second cohomology, lifting and
    /// detection certificates.
    #[command(subcommand)]
    Homology(HomologyCmd),
    /// Two-bridge links from even continued fractions.
    #[command(subcommand)]
    Twobridge(TwoBridgeCmd),
    /// Braid words, twist ledgers and quasipositivity certificates.
    #[command(subcommand)]
    Braid(BraidCmd),
}

#[derive(Subcommand)]
enum OrderCmd {
    /// Check a raw triple table for the circular-order axioms.
    Validate {
        /// JSON file: {"elements": [...], "triples": [[i, j, k, sign], ...]}.
        #[arg(long)]
        file: String,
    },
    /// Enumerate order automorphisms, optionally ordering them around a
    /// basepoint.
    Aut {
        #[arg(long)]
        file: String,
        #[arg(long)]
        basepoint: Option<String>,
        /// Brute-force size bound.
        #[arg(long, default_value_t = 9)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum TreeCmd {
    /// Circular order on the leaves.
    Ends {
        #[arg(long)]
        file: String,
    },
    /// Geodesic spine between two nodes.
    Spine {
        #[arg(long)]
        file: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Branch locus of three nodes: a node or a cusp.
    Y {
        #[arg(long)]
        file: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
    },
}

#[derive(Args)]
struct RecalibrateArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    delta: u64,
    #[arg(long)]
    a: u64,
    /// Optional tree whose listed nodes get the recalibrated order.
    #[arg(long)]
    tree: Option<String>,
    /// Comma-separated node ids to recalibrate (requires --tree).
    #[arg(long, requires = "tree")]
    nodes: Option<String>,
}

#[derive(Args)]
struct RotnumArgs {
    /// JSON file: [["x", "f(x)"], ...] with exact fraction strings.
    #[arg(long)]
    map: String,
    /// Compute the translation number of this power of the map.
    #[arg(long, default_value_t = 1)]
    power: i64,
}

#[derive(Subcommand)]
enum HomologyCmd {
    /// Smith normal form of an integer matrix.
    Snf {
        /// JSON file: [[int, ...], ...].
        #[arg(long)]
        matrix: String,
    },
    /// Torsion and free rank of the second cohomology of a presentation
    /// complex with orbifold cells.
    H2 {
        #[arg(long)]
        pres: String,
    },
    /// Lifting certificate for a homomorphism onto Z/n.
    Lift {
        #[arg(long)]
        pres: String,
        #[arg(long)]
        n: u64,
        /// Meridian values, e.g. "x=1,y=1".
        #[arg(long)]
        values: String,
    },
    /// Order-detection certificate for a (meridian, slope) pair of maps.
    Detect {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        alpha: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OrientationArg {
    Canonical,
    Reversed,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Canonical => Orientation::Canonical,
            OrientationArg::Reversed => Orientation::Reversed,
        }
    }
}

#[derive(Subcommand)]
enum TwoBridgeCmd {
    /// Continued-fraction value and component count.
    Rational {
        /// Comma-separated even coefficients, e.g. "2,2,2".
        #[arg(long)]
        cf: String,
        #[arg(long, value_enum, default_value_t = OrientationArg::Canonical)]
        orientation: OrientationArg,
    },
    /// Alexander polynomial from the Seifert matrix.
    Alex {
        #[arg(long)]
        cf: String,
        #[arg(long, value_enum, default_value_t = OrientationArg::Canonical)]
        orientation: OrientationArg,
    },
    /// Definiteness of the Hermitian pairing on the arc up to angle
    /// 2*pi/n.
    LtDefinite {
        #[arg(long)]
        cf: String,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = OrientationArg::Canonical)]
        orientation: OrientationArg,
    },
    /// Trace test for the parabolic representation family at theta =
    /// pi/n.
    RhoTheta {
        #[arg(long, conflicts_with = "theta")]
        n: Option<u64>,
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Full branched-cover report: obstruction bound and orderable
    /// cover degrees.
    Report {
        #[arg(long)]
        cf: String,
        #[arg(long, value_enum, default_value_t = OrientationArg::Reversed)]
        orientation: OrientationArg,
    },
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Exponent sum, permutation and closure components of a word.
    Stats {
        #[arg(long)]
        strands: usize,
        /// Word like "s1 S2 s1" (capitals are inverses).
        #[arg(long)]
        word: String,
    },
    /// Shift a twist-coefficient record by k full twists.
    FdtcShift {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        word: String,
        /// Asserted coefficient of the base word, e.g. "3/2".
        #[arg(long)]
        value: String,
        #[arg(long)]
        twists: i64,
    },
    /// Check a twist coefficient against the surgery hypotheses.
    HypCheck {
        /// Coefficient, e.g. "1" or "3/2"; alternatively derive it from
        /// a degeneracy slope with --slope c,d.
        #[arg(long, conflicts_with = "slope")]
        c: Option<String>,
        #[arg(long)]
        slope: Option<String>,
        /// Also check that appending this many full twists stays
        /// nondegenerate.
        #[arg(long)]
        twists: Option<i64>,
    },
    /// Verify a quasipositive factorization against a target word.
    QpVerify {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        target: String,
        /// Bands "conj:k" separated by ';', e.g. "s1:2;:1" (empty
        /// conjugator allowed).
        #[arg(long)]
        bands: String,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(c) => {
            print!("{}", c.render(cli.tsv));
            std::process::exit(c.verdict.exit_code());
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
    }
}

fn iter_budget() -> Result<usize, String> {
    match std::env::var("ORDERFORGE_ITER_BUDGET") {
        Err(_) => Ok(100_000),
        Ok(s) => s
            .parse::<usize>()
            .map_err(|_| format!("ORDERFORGE_ITER_BUDGET: {s:?} is not a whole number")),
    }
}

fn read_file(path: &str, trace: &mut InputTrace) -> Result<Vec<u8>, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{path}: {e}"))?;
    trace.file(&bytes);
    Ok(bytes)
}

fn read_json<T: serde::de::DeserializeOwned>(
    path: &str,
    trace: &mut InputTrace,
) -> Result<T, String> {
    let bytes = read_file(path, trace)?;
    serde_json::from_slice(&bytes)
        .map_err(|e| format!("{path}:{}:{}: {}", e.line(), e.column(), e))
}

fn parse_fraction(s: &str) -> Result<Q, String> {
    parse_q(s).ok_or_else(|| format!("{s:?} is not a fraction like \"p\" or \"p/q\""))
}

fn parse_map_file(path: &str, trace: &mut InputTrace) -> Result<PLCircleMap, String> {
    let pairs: Vec<(String, String)> = read_json(path, trace)?;
    let mut exact = Vec::with_capacity(pairs.len());
    for (x, y) in &pairs {
        exact.push((parse_fraction(x)?, parse_fraction(y)?));
    }
    PLCircleMap::from_pairs(&exact).map_err(|e| format!("{path}: {e}"))
}

fn parse_cf(list: &str) -> Result<Vec<i64>, String> {
    list.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad coefficient {t:?}")))
        .collect()
}

fn q_json(x: &Q) -> Value {
    Value::String(format_q(x))
}

fn z_json(z: &Z) -> Value {
    Value::String(z.to_string())
}

fn translation_json(t: &TranslationNumber) -> Value {
    match t {
        TranslationNumber::Exact(v) => json!({"kind": "exact", "value": format_q(v)}),
        TranslationNumber::Interval { lo, hi, iterations } => json!({
            "kind": "interval",
            "lo": format_q(lo),
            "hi": format_q(hi),
            "iterations": iterations,
        }),
    }
}

fn run(cmd: &Command) -> Result<Certificate, String> {
    match cmd {
        Command::Order(c) => run_order(c),
        Command::Tree(c) => run_tree(c),
        Command::Recalibrate(a) => run_recalibrate(a),
        Command::Rotnum(a) => run_rotnum(a),
        Command::Homology(c) => run_homology(c),
        Command::Twobridge(c) => run_twobridge(c),
        Command::Braid(c) => run_braid(c),
    }
}

fn order_to_json(order: &CircularOrder) -> Value {
    let raw = order.to_raw_canonical();
    json!({
        "elements": raw.elements,
        "triples": raw.triples,
        "listing": order.to_cyclic_listing(),
    })
}

fn run_order(cmd: &OrderCmd) -> Result<Certificate, String> {
    match cmd {
        OrderCmd::Validate { file } => {
            let mut trace = InputTrace::new("order validate");
            trace.arg("file", file);
            let raw: RawOrderTable = read_json(file, &mut trace)?;
            match validate_circular_order(&raw) {
                Ok(true) => {
                    let order = CircularOrder::from_raw(&raw).expect("validated");
                    Ok(Certificate {
                        pipeline: "order validate".into(),
                        input_digest: trace.digest(),
                        verdict: Verdict::Certified,
                        evidence: evidence(vec![
                            ("size", json!(order.len())),
                            ("order", order_to_json(&order)),
                        ]),
                        provenance: vec!["axioms checked on every triple and quadruple"],
                    })
                }
                Ok(false) => Ok(Certificate {
                    pipeline: "order validate".into(),
                    input_digest: trace.digest(),
                    verdict: Verdict::Refuted,
                    evidence: evidence(vec![("valid", json!(false))]),
                    provenance: vec!["axioms checked on every triple and quadruple"],
                }),
                Err(e) => Err(format!("{file}: {e}")),
            }
        }
        OrderCmd::Aut { file, basepoint, bound } => {
            let mut trace = InputTrace::new("order aut");
            trace.arg("file", file);
            trace.arg("basepoint", basepoint.as_deref().unwrap_or(""));
            trace.arg("bound", &bound.to_string());
            let raw: RawOrderTable = read_json(file, &mut trace)?;
            let order = CircularOrder::from_raw(&raw).map_err(|e| format!("{file}: {e}"))?;
            let group = match order.automorphism_group_bounded(*bound) {
                Ok(g) => g,
                Err(CircordError::SizeLimit { size, bound }) => {
                    return Ok(Certificate {
                        pipeline: "order aut".into(),
                        input_digest: trace.digest(),
                        verdict: Verdict::Unsupported,
                        evidence: evidence(vec![
                            ("size", json!(size)),
                            ("bound", json!(bound)),
                        ]),
                        provenance: vec!["brute-force enumeration declined over the size bound"],
                    })
                }
                Err(e) => return Err(format!("{file}: {e}")),
            };
            let images: Vec<Vec<&str>> = group
                .iter()
                .map(|a| a.image.iter().map(|&i| order.elements()[i].as_str()).collect())
                .collect();
            let mut fields = vec![
                ("group_size", json!(group.len())),
                ("automorphisms", json!(images)),
            ];
            if let Some(base) = basepoint {
                let aut_order = order
                    .circular_order_on_aut(base)
                    .map_err(|e| format!("{file}: {e}"))?;
                fields.push(("aut_order", order_to_json(&aut_order.order)));
            }
            Ok(Certificate {
                pipeline: "order aut".into(),
                input_digest: trace.digest(),
                verdict: Verdict::Certified,
                evidence: evidence(fields),
                provenance: vec!["exhaustive backtracking over order-preserving bijections"],
            })
        }
    }
}

fn run_tree(cmd: &TreeCmd) -> Result<Certificate, String> {
    match cmd {
        TreeCmd::Ends { file } => {
            let mut trace = InputTrace::new("tree ends");
            trace.arg("file", file);
            let tf: TreeFile = read_json(file, &mut trace)?;
            let tree = CyclicOrderTree::from_file(&tf).map_err(|e| format!("{file}: {e}"))?;
            let order = tree.end_circular_order().map_err(|e| format!("{file}: {e}"))?;
            Ok(Certificate {
                pipeline: "tree ends".into(),
                input_digest: trace.digest(),
                verdict: Verdict::Certified,
                evidence: evidence(vec![
                    ("leaves", json!(order.len())),
                    ("order", order_to_json(&order)),
                ]),
                provenance: vec!["triple signs from local orders at medians"],
            })
        }
        TreeCmd::Spine { file, from, to } => {
            let mut trace = InputTrace::new("tree spine");
            trace.arg("file", file);
            trace.arg("from", from);
            trace.arg("to", to);
            let tf: TreeFile = read_json(file, &mut trace)?;
            let tree = CyclicOrderTree::from_file(&tf).map_err(|e| format!("{file}: {e}"))?;
            let path = tree.spine(from, to).map_err(|e| format!("{file}: {e}"))?;
            let steps: Vec<Value> = path
                .steps
                .iter()
                .map(|s| match *s {
                    SpineStep::Edge { from, to } => json!({
                        "kind": "edge",
                        "from": tree.node_id(from),
                        "to": tree.node_id(to),
                    }),
                    SpineStep::Stem { cluster, from, to } => json!({
                        "kind": "stem",
                        "cluster": tree.clusters()[cluster].id,
                        "from": tree.node_id(from),
                        "to": tree.node_id(to),
                    }),
                    SpineStep::CuspJump { cluster, from, to } => json!({
                        "kind": "cusp-jump",
                        "cluster": tree.clusters()[cluster].id,
                        "from": tree.node_id(from),
                        "to": tree.node_id(to),
                    }),
                })
                .collect();
            Ok(Certificate {
                pipeline: "tree spine".into(),
                input_digest: trace.digest(),
                verdict: Verdict::Certified,
                evidence: evidence(vec![
                    ("from", json!(from)),
                    ("to", json!(to)),
                    ("steps", Value::Array(steps)),
                ]),
                provenance: vec!["unique tree path with cusp jumps through clusters"],
            })
        }
        TreeCmd::Y { file, x, y, z } => {
            let mut trace = InputTrace::new("tree y");
            trace.arg("file", file);
            trace.arg("x", x);
            trace.arg("y", y);
            trace.arg("z", z);
            let tf: TreeFile = read_json(file, &mut trace)?;
            let tree = CyclicOrderTree::from_file(&tf).map_err(|e| format!("{file}: {e}"))?;
            let locus = tree.branch_locus(x, y, z).map_err(|e| format!("{file}: {e}"))?;
            let locus_json = match locus {
                BranchLocus::Node(v) => json!({"kind": "node", "node": tree.node_id(v)}),
                BranchLocus::Cusp { cluster, pair } => json!({
                    "kind": "cusp",
                    "cluster": tree.clusters()[cluster].id,
                    "pair": [tree.node_id(pair.0), tree.node_id(pair.1)],
                }),
            };
            Ok(Certificate {
                pipeline: "tree y".into(),
                input_digest: trace.digest(),
                verdict: Verdict::Certified,
                evidence: evidence(vec![("locus", locus_json)]),
                provenance: vec!["divergence point of the three pairwise spines"],
            })
        }
    }
}

fn run_recalibrate(a: &RecalibrateArgs) -> Result<Certificate, String> {
    let mut trace = InputTrace::new("recalibrate");
    trace.arg("n", &a.n.to_string());
    trace.arg("delta", &a.delta.to_string());
    trace.arg("a", &a.a.to_string());
    let calib = StarCalibration::new(a.n, a.delta, a.a).map_err(|e| e.to_string())?;
    let mut fields = vec![
        ("n", json!(calib.n)),
        ("delta", json!(calib.delta)),
        ("a", json!(calib.a)),
        ("a_prime", json!(calib.a_prime)),
        ("b", json!(calib.b)),
        ("degree", json!(calib.d)),
        ("listing", json!(calib.listing())),
        ("natural_rotation", q_json(&calib.natural_rotation())),
        ("recalibrated_rotation", q_json(&calib.recalibrated_rotation())),
    ];
    if let Some(tree_path) = &a.tree {
        trace.arg("tree", tree_path);
        let nodes: Vec<String> = a
            .nodes
            .as_deref()
            .unwrap_or("")
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.trim().to_string())
            .collect();
        trace.arg("nodes", &nodes.join(","));
        let tf: TreeFile = read_json(tree_path, &mut trace)?;
        let mut tree =
            CyclicOrderTree::from_file(&tf).map_err(|e| format!("{tree_path}: {e}"))?;
        recalibrate_tree(&mut tree, &nodes, &calib).map_err(|e| format!("{tree_path}: {e}"))?;
        let out = serde_json::to_value(tree.to_file()).expect("serializable");
        fields.push(("tree", out));
    }
    Ok(Certificate {
        pipeline: "recalibrate".into(),
        input_digest: trace.digest(),
        verdict: Verdict::Certified,
        evidence: evidence(fields),
        provenance: vec![
            "coprime adjustment by stepping a through residues mod the cofactor",
            "rotation numbers as exact orbit displacement sums",
        ],
    })
}

fn run_rotnum(a: &RotnumArgs) -> Result<Certificate, String> {
    let mut trace = InputTrace::new("rotnum");
    trace.arg("map", &a.map);
    trace.arg("power", &a.power.to_string());
    let map = parse_map_file(&a.map, &mut trace)?;
    let powered = map.pow(a.power);
    let tau = powered.translation_number(iter_budget()?);
    let verdict = match &tau {
        TranslationNumber::Exact(_) => Verdict::Certified,
        TranslationNumber::Interval { .. } => Verdict::Inconclusive,
    };
    let mut fields = vec![
        ("power", json!(a.power)),
        ("translation_number", translation_json(&tau)),
        ("fixed_point", json!(powered.has_fixed_point())),
    ];
    if let Some(v) = tau.mod_one() {
        fields.insert(2, ("rotation_mod_one", q_json(&v)));
    }
    Ok(Certificate {
        pipeline: "rotnum".into(),
        input_digest: trace.digest(),
        verdict,
        evidence: evidence(fields),
        provenance: vec!["orbit of zero iterated until the fractional part repeats"],
    })
}

fn lift_refutation_json(r: &LiftRefutation) -> Value {
    match r {
        LiftRefutation::RelatorNotKilled { relator, residue } => json!({
            "kind": "relator-not-killed",
            "relator": relator,
            "residue": residue.to_string(),
        }),
        LiftRefutation::NotSurjective { gcd } => {
            json!({"kind": "not-surjective", "gcd": gcd.to_string()})
        }
        LiftRefutation::ConeOrderMismatch { cell, given, value } => json!({
            "kind": "cone-order-mismatch",
            "cell": cell,
            "given": given,
            "value": value,
        }),
        LiftRefutation::NoIntegralLift { obstruction_row } => {
            json!({"kind": "no-integral-lift", "obstruction_row": obstruction_row})
        }
    }
}

fn run_homology(cmd: &HomologyCmd) -> Result<Certificate, String> {
    match cmd {
        HomologyCmd::Snf { matrix } => {
            let mut trace = InputTrace::new("homology snf");
            trace.arg("matrix", matrix);
            let rows: Vec<Vec<i64>> = read_json(matrix, &mut trace)?;
            if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
                return Err(format!("{matrix}: need a nonempty rectangular matrix"));
            }
            let m = IntMat::from_rows(
                rows.iter().map(|r| r.iter().map(|&e| Z::from(e)).collect()).collect(),
            );
            let snf = smith_normal_form(&m);
            let (torsion, free) = cokernel(&m);
            Ok(Certificate {
                pipeline: "homology snf".into(),
                input_digest: trace.digest(),
                verdict: Verdict::Certified,
                evidence: evidence(vec![
                    ("diagonal", json!(snf.diagonal().iter().map(|z| z.to_string()).collect::<Vec<_>>())),
                    ("rank", json!(snf.rank())),
                    ("cokernel_torsion", json!(torsion.iter().map(|z| z.to_string()).collect::<Vec<_>>())),
                    ("cokernel_free_rank", json!(free)),
                ]),
                provenance: vec!["transforms re-verified by integer multiplication"],
            })
        }
        HomologyCmd::H2 { pres } => {
            let mut trace = InputTrace::new("homology h2");
            trace.arg("pres", pres);
            let p: OrbifoldPresentation = read_json(pres, &mut trace)?;
            let h2 = second_cohomology(&p).map_err(|e| format!("{pres}: {e}"))?;
            Ok(Certificate {
                pipeline: "homology h2".into(),
                input_digest: trace.digest(),
                verdict: Verdict::Certified,
                evidence: evidence(vec![
                    ("torsion", json!(h2.torsion.iter().map(|z| z.to_string()).collect::<Vec<_>>())),
                    ("free_rank", json!(h2.free_rank)),
                ]),
                provenance: vec!["cokernel of the coboundary in Smith form"],
            })
        }
        HomologyCmd::Lift { pres, n, values } => {
            let mut trace = InputTrace::new("homology lift");
            trace.arg("pres", pres);
            trace.arg("n", &n.to_string());
            trace.arg("values", values);
            let p: OrbifoldPresentation = read_json(pres, &mut trace)?;
            let mut assign = std::collections::BTreeMap::new();
            for part in values.split(',').filter(|s| !s.is_empty()) {
                let (g, v) = part
                    .split_once('=')
                    .ok_or_else(|| format!("value {part:?} is not generator=int"))?;
                let v: i64 =
                    v.trim().parse().map_err(|_| format!("value {part:?} is not generator=int"))?;
                assign.insert(g.trim().to_string(), v);
            }
            match lifting_certificate(&p, *n, &assign).map_err(|e| format!("{pres}: {e}"))? {
                LiftOutcome::Certified(c) => Ok(Certificate {
                    pipeline: "homology lift".into(),
                    input_digest: trace.digest(),
                    verdict: Verdict::Certified,
                    evidence: evidence(vec![
                        ("modulus", json!(c.modulus)),
                        ("omega", json!(c.omega.iter().map(|z| z.to_string()).collect::<Vec<_>>())),
                        ("eta", Value::Object(
                            c.eta.iter().map(|(k, v)| (k.clone(), z_json(v))).collect(),
                        )),
                    ]),
                    provenance: vec![
                        "epimorphism and cone orders checked first",
                        "coboundary equation re-verified by multiplication",
                    ],
                }),
                LiftOutcome::Refuted(r) => Ok(Certificate {
                    pipeline: "homology lift".into(),
                    input_digest: trace.digest(),
                    verdict: Verdict::Refuted,
                    evidence: evidence(vec![("refutation", lift_refutation_json(&r))]),
                    provenance: vec!["epimorphism and cone orders checked first"],
                }),
            }
        }
        HomologyCmd::Detect { mu, alpha } => {
            let mut trace = InputTrace::new("homology detect");
            trace.arg("mu", mu);
            trace.arg("alpha", alpha);
            let mu_map = parse_map_file(mu, &mut trace)?;
            let alpha_map = parse_map_file(alpha, &mut trace)?;
            let (verdict, fields) =
                match order_detection_certificate(&mu_map, &alpha_map, iter_budget()?) {
                    Detection::Detected { rot_mu, rot_alpha, lift_shift, fractional } => (
                        Verdict::Certified,
                        vec![
                            ("rot_mu", q_json(&rot_mu)),
                            ("rot_alpha", q_json(&rot_alpha)),
                            ("lift_shift", z_json(&lift_shift)),
                            ("fractional", q_json(&fractional)),
                        ],
                    ),
                    Detection::NotDetected { reason } => (
                        Verdict::Refuted,
                        vec![(
                            "reason",
                            json!(match reason {
                                NonDetection::MeridianRotates => "meridian-rotates",
                                NonDetection::SlopeIntegral => "slope-integral",
                            }),
                        )],
                    ),
                    Detection::Inconclusive { mu, alpha } => (
                        Verdict::Inconclusive,
                        vec![
                            ("mu", translation_json(&mu)),
                            ("alpha", translation_json(&alpha)),
                        ],
                    ),
                };
            Ok(Certificate {
                pipeline: "homology detect".into(),
                input_digest: trace.digest(),
                verdict,
                evidence: evidence(fields),
                provenance: vec!["translation numbers with lift normalization"],
            })
        }
    }
}

fn arc_verdict_json(v: &ArcVerdict) -> Value {
    match v {
        ArcVerdict::Definite { positive } => json!({"kind": "definite", "positive": positive}),
        ArcVerdict::RootAtMinusOne { multiplicity } => {
            json!({"kind": "root-at-minus-one", "multiplicity": multiplicity})
        }
        ArcVerdict::RootAtEndpoint => json!({"kind": "root-at-endpoint"}),
        ArcVerdict::InteriorRoot { count, bracket } => json!({
            "kind": "interior-root",
            "count": count,
            "bracket": [format_q(&bracket.0), format_q(&bracket.1)],
        }),
        ArcVerdict::MixedSample { minors } => json!({
            "kind": "mixed-sample",
            "minors": minors.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
        }),
    }
}

fn rho_json(a: &RhoAssessment) -> Vec<(&'static str, Value)> {
    let mut fields = vec![
        ("theta", json!(a.theta)),
        ("s", json!(a.s)),
        ("relation_residual", json!(a.relation_residual)),
        ("closed_form_residual", json!(a.closed_form_residual)),
        ("symmetry_residual", json!(a.symmetry_residual)),
        ("conjugate_to_real", json!(a.conjugate_to_real)),
    ];
    if let Some(r) = &a.rotation_claim {
        fields.push(("rotation_claim", q_json(r)));
    }
    fields
}

fn two_bridge_input(
    pipeline: &str,
    cf: &str,
    orientation: OrientationArg,
) -> Result<(InputTrace, EvenCf), String> {
    let mut trace = InputTrace::new(pipeline);
    trace.arg("cf", cf);
    trace.arg(
        "orientation",
        match orientation {
            OrientationArg::Canonical => "canonical",
            OrientationArg::Reversed => "reversed",
        },
    );
    let coeffs = parse_cf(cf)?;
    let cf = EvenCf::new(coeffs, orientation.into()).map_err(|e| e.to_string())?;
    Ok((trace, cf))
}

/// Errors meaning "valid input, outside this pipeline's scope".
fn unsupported_certificate(
    pipeline: &str,
    trace: InputTrace,
    e: &TwoBridgeError,
) -> Certificate {
    Certificate {
        pipeline: pipeline.into(),
        input_digest: trace.digest(),
        verdict: Verdict::Unsupported,
        evidence: evidence(vec![("reason", json!(e.to_string()))]),
        provenance: vec!["declined rather than guessed"],
    }
}

fn run_twobridge(cmd: &TwoBridgeCmd) -> Result<Certificate, String> {
    match cmd {
        TwoBridgeCmd::Rational { cf, orientation } => {
            let (trace, cf) = two_bridge_input("twobridge rational", cf, *orientation)?;
            Ok(Certificate {
                pipeline: "twobridge rational".into(),
                input_digest: trace.digest(),
                verdict: Verdict::Certified,
                evidence: evidence(vec![
                    ("fraction", q_json(&cf.to_rational())),
                    ("components", json!(cf.component_count())),
                ]),
                provenance: vec!["continued fraction evaluated exactly"],
            })
        }
        TwoBridgeCmd::Alex { cf, orientation } => {
            let (trace, cf) = two_bridge_input("twobridge alex", cf, *orientation)?;
            let data = match seifert_matrix(&cf) {
                Ok(d) => d,
                Err(e @ TwoBridgeError::Unsupported(_)) => {
                    return Ok(unsupported_certificate("twobridge alex", trace, &e))
                }
                Err(e) => return Err(e.to_string()),
            };
            let alex = data.alexander();
            Ok(Certificate {
                pipeline: "twobridge alex".into(),
                input_digest: trace.digest(),
                verdict: Verdict::Certified,
                evidence: evidence(vec![
                    ("coefficients", json!(alex.coeffs().iter().map(|z| z.to_string()).collect::<Vec<_>>())),
                    ("degree", json!(alex.degree())),
                    ("determinant", z_json(&alex.eval_z(&Z::from(-1)))),
                ]),
                provenance: vec!["determinant of S - t S^T, leading coefficient positive"],
            })
        }
        TwoBridgeCmd::LtDefinite { cf, n, orientation } => {
            let (mut trace, cf) = two_bridge_input("twobridge lt-definite", cf, *orientation)?;
            trace.arg("n", &n.to_string());
            let data = match seifert_matrix(&cf) {
                Ok(d) => d,
                Err(e @ TwoBridgeError::Unsupported(_)) => {
                    return Ok(unsupported_certificate("twobridge lt-definite", trace, &e))
                }
                Err(e) => return Err(e.to_string()),
            };
            match definite_on_arc(&data.matrix, *n) {
                Ok(a) => Ok(Certificate {
                    pipeline: "twobridge lt-definite".into(),
                    input_digest: trace.digest(),
                    verdict: if a.definite { Verdict::Certified } else { Verdict::Refuted },
                    evidence: evidence(vec![
                        ("n", json!(a.n)),
                        ("definite", json!(a.definite)),
                        ("verdict", arc_verdict_json(&a.verdict)),
                    ]),
                    provenance: vec![
                        "root isolation by Sturm counts in the cosine variable",
                        "sign sample by leading principal minors at t = -1",
                    ],
                }),
                Err(
                    e @ (TwoBridgeError::ArcTooSmall | TwoBridgeError::DegenerateOnArc),
                ) => Ok(unsupported_certificate("twobridge lt-definite", trace, &e)),
                Err(e) => Err(e.to_string()),
            }
        }
        TwoBridgeCmd::RhoTheta { n, theta } => {
            let mut trace = InputTrace::new("twobridge rho-theta");
            let assessment = match (n, theta) {
                (Some(n), None) => {
                    trace.arg("n", &n.to_string());
                    rho_theta_at_pi_over(*n).map_err(|e| e.to_string())?
                }
                (None, Some(t)) => {
                    trace.arg("theta", &format!("{t:?}"));
                    rho_theta(*t).map_err(|e| e.to_string())?
                }
                _ => return Err("pass exactly one of --n or --theta".into()),
            };
            Ok(Certificate {
                pipeline: "twobridge rho-theta".into(),
                input_digest: trace.digest(),
                verdict: if assessment.conjugate_to_real {
                    Verdict::Certified
                } else {
                    Verdict::Refuted
                },
                evidence: evidence(rho_json(&assessment)),
                provenance: vec!["trace window test with residual re-verification"],
            })
        }
        TwoBridgeCmd::Report { cf, orientation } => {
            let (trace, cf) = two_bridge_input("twobridge report", cf, *orientation)?;
            let report = match branched_cover_report(&cf) {
                Ok(r) => r,
                Err(e @ TwoBridgeError::Unsupported(_)) => {
                    return Ok(unsupported_certificate("twobridge report", trace, &e))
                }
                Err(e) => return Err(e.to_string()),
            };
            let mut fields = vec![
                ("fraction", q_json(&report.fraction)),
                ("components", json!(report.components)),
                (
                    "orientation",
                    json!(match report.orientation {
                        Orientation::Canonical => "canonical",
                        Orientation::Reversed => "reversed",
                    }),
                ),
            ];
            let verdict = match &report.finding {
                CoverFinding::AlternatingCitation => {
                    fields.push(("finding", json!("alternating")));
                    Verdict::Certified
                }
                CoverFinding::ReversedBound { bound, orderable_covers } => {
                    let bound_json = match bound {
                        None => Value::Null,
                        Some(b) => json!({
                            "n": b.n,
                            "block": match b.block {
                                BlockId::Torus { index, k } =>
                                    json!({"kind": "torus", "index": index, "k": k}),
                                BlockId::Plumbing { index, l } =>
                                    json!({"kind": "plumbing", "index": index, "l": l}),
                            },
                            "verdict": arc_verdict_json(&b.verdict),
                        }),
                    };
                    fields.push(("obstruction_bound", bound_json));
                    fields.push(("orderable_covers", json!(orderable_covers)));
                    if orderable_covers.is_empty() {
                        Verdict::Inconclusive
                    } else {
                        Verdict::Certified
                    }
                }
            };
            Ok(Certificate {
                pipeline: "twobridge report".into(),
                input_digest: trace.digest(),
                verdict,
                evidence: evidence(fields),
                provenance: vec![
                    "definiteness bound over subsurface blocks",
                    "cover degrees from the trace test at theta = pi/n",
                ],
            })
        }
    }
}

fn run_braid(cmd: &BraidCmd) -> Result<Certificate, String> {
    match cmd {
        BraidCmd::Stats { strands, word } => {
            let mut trace = InputTrace::new("braid stats");
            trace.arg("strands", &strands.to_string());
            trace.arg("word", word);
            let w = BraidWord::parse(*strands, word).map_err(|e| e.to_string())?;
            Ok(Certificate {
                pipeline: "braid stats".into(),
                input_digest: trace.digest(),
                verdict: Verdict::Certified,
                evidence: evidence(vec![
                    ("strands", json!(w.strands())),
                    ("length", json!(w.letters().len())),
                    ("exponent_sum", json!(w.exponent_sum())),
                    ("permutation", json!(w.permutation())),
                    ("closure_components", json!(w.closure_components())),
                    ("free_reduced", json!(w.free_reduced().to_text())),
                ]),
                provenance: vec!["letter-by-letter strand tracking"],
            })
        }
        BraidCmd::FdtcShift { strands, word, value, twists } => {
            let mut trace = InputTrace::new("braid fdtc-shift");
            trace.arg("strands", &strands.to_string());
            trace.arg("word", word);
            trace.arg("value", value);
            trace.arg("twists", &twists.to_string());
            let w = BraidWord::parse(*strands, word).map_err(|e| e.to_string())?;
            let base = FdtcRecord::asserted(w, parse_fraction(value)?);
            let shifted = fdtc_shift(&base, *twists);
            Ok(Certificate {
                pipeline: "braid fdtc-shift".into(),
                input_digest: trace.digest(),
                verdict: Verdict::Certified,
                evidence: evidence(vec![
                    ("base_value", q_json(&base.value)),
                    ("twists", json!(twists)),
                    ("value", q_json(&shifted.value)),
                    ("word", json!(shifted.word.to_text())),
                ]),
                provenance: vec!["full-twist composition shifts the coefficient by k"],
            })
        }
        BraidCmd::HypCheck { c, slope, twists } => {
            let mut trace = InputTrace::new("braid hyp-check");
            let coeff = match (c, slope) {
                (Some(c), None) => {
                    trace.arg("c", c);
                    parse_fraction(c)?
                }
                (None, Some(s)) => {
                    trace.arg("slope", s);
                    let parts = parse_cf(s)?;
                    let [cc, d] = parts[..] else {
                        return Err(format!("slope {s:?} is not c,d"));
                    };
                    degeneracy_to_fdtc(cc, d).map_err(|e| e.to_string())?
                }
                _ => return Err("pass exactly one of --c or --slope".into()),
            };
            if let Some(k) = twists {
                trace.arg("twists", &k.to_string());
            }
            let mut checks = vec![
                ("avoids-zero-and-reciprocals", Hypothesis::AvoidsZeroAndReciprocals),
                ("exceeds-unit-magnitude", Hypothesis::ExceedsUnitMagnitude),
            ];
            if let Some(k) = twists {
                checks.push(("twist-stays-nondegenerate", Hypothesis::TwistStaysNondegenerate { k: *k }));
            }
            let mut all_pass = true;
            let mut results = Vec::new();
            for (name, h) in checks {
                let out = hypothesis_check(&coeff, &h);
                all_pass &= out.passes;
                let failure = match out.failure {
                    None => Value::Null,
                    Some(HypothesisFailure::ZeroCoefficient) => json!("zero coefficient"),
                    Some(HypothesisFailure::ReciprocalOfInteger { m }) => {
                        json!(format!("reciprocal of {m}"))
                    }
                    Some(HypothesisFailure::MagnitudeAtMostOne) => json!("magnitude at most one"),
                    Some(HypothesisFailure::ForbiddenTwist { forbidden }) => {
                        json!(format!("forbidden twists {forbidden:?}"))
                    }
                };
                results.push(json!({"check": name, "passes": out.passes, "failure": failure}));
            }
            Ok(Certificate {
                pipeline: "braid hyp-check".into(),
                input_digest: trace.digest(),
                verdict: if all_pass { Verdict::Certified } else { Verdict::Refuted },
                evidence: evidence(vec![
                    ("coefficient", q_json(&coeff)),
                    ("meridional", json!(coeff.is_zero())),
                    ("checks", Value::Array(results)),
                ]),
                provenance: vec!["exact rational comparisons"],
            })
        }
        BraidCmd::QpVerify { strands, target, bands } => {
            let mut trace = InputTrace::new("braid qp-verify");
            trace.arg("strands", &strands.to_string());
            trace.arg("target", target);
            trace.arg("bands", bands);
            let target_word = BraidWord::parse(*strands, target).map_err(|e| e.to_string())?;
            let mut parsed = Vec::new();
            for part in bands.split(';').filter(|s| !s.is_empty()) {
                let (conj, k) = part
                    .rsplit_once(':')
                    .ok_or_else(|| format!("band {part:?} is not conj:index"))?;
                let k: usize =
                    k.trim().parse().map_err(|_| format!("band index {k:?} is not a number"))?;
                if k == 0 || k >= *strands {
                    return Err(format!("band index {k} out of range for {strands} strands"));
                }
                let conj_word = BraidWord::parse(*strands, conj).map_err(|e| e.to_string())?;
                parsed.push((conj_word, k));
            }
            let decomposition = QuasipositiveDecomposition { bands: parsed };
            let ok = is_quasipositive_form(&decomposition, &target_word)
                .map_err(|e| e.to_string())?;
            Ok(Certificate {
                pipeline: "braid qp-verify".into(),
                input_digest: trace.digest(),
                verdict: if ok { Verdict::Certified } else { Verdict::Refuted },
                evidence: evidence(vec![
                    ("bands", json!(decomposition.bands.len())),
                    ("matches", json!(ok)),
                    ("target_exponent_sum", json!(target_word.exponent_sum())),
                ]),
                provenance: vec!["band product compared after free reduction only"],
            })
        }
    }
}
