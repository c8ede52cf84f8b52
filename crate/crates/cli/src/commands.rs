use std::fs;
use std::path::Path;

use serde_json::{json, Value as Json};
use tanglefair::fairness::{
    envy_report, exists_efk_outer, Allocation, EnvyReport, FairnessError, OracleCaps, OracleOutcome,
};
use tanglefair::graph::{hamiltonian_path, lips_labeling, smooth, GraphError};
use tanglefair::io::{self, IoError};
use tanglefair::knife::{self, KnifeError, KnifeOptions, KnifeState};
use tanglefair::tangle::{
    classify_stringable, gap_threshold, generalized_gap_threshold, negative_instance, CutsetPart, CutsetWitness,
    GeneralizedOptions, Stringability, TangleError, Threshold, Verification,
};
use tanglefair::{Multigraph, ValuationProfile};

use crate::manifest::Manifest;
use crate::{Caps, Status};

pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            status: Status::Input,
            message: message.into(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        let status = match e {
            GraphError::SizeLimit { .. } => Status::Cap,
            _ => Status::Input,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

impl From<FairnessError> for Failure {
    fn from(e: FairnessError) -> Self {
        let status = match e {
            FairnessError::CapExceeded { .. } => Status::Cap,
            _ => Status::Input,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

impl From<TangleError> for Failure {
    fn from(e: TangleError) -> Self {
        match e {
            TangleError::CapExceeded { .. } => Self {
                status: Status::Cap,
                message: e.to_string(),
            },
            TangleError::Graph(g) => g.into(),
            TangleError::Fairness(f) => f.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

impl From<KnifeError> for Failure {
    fn from(e: KnifeError) -> Self {
        match e {
            KnifeError::Graph(g) => g.into(),
            KnifeError::Fairness(f) => f.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

type Outcome = Result<Status, Failure>;

pub struct Context {
    json: bool,
    pub manifest: Manifest,
}

impl Context {
    pub fn new(json: bool) -> Self {
        Self {
            json,
            manifest: Manifest::default(),
        }
    }

    fn start(&mut self, command: &str) {
        self.manifest = Manifest::new(command);
        self.manifest.set("seed", "none");
    }

    fn read(&mut self, role: &str, path: &Path) -> Result<String, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
        self.manifest.input(role, path, &text);
        Ok(text)
    }

    fn graph(&mut self, path: &Path) -> Result<Multigraph, Failure> {
        let text = self.read("graph", path)?;
        let mut g = io::parse_graph(&text)?;
        if g.vertex_count() == 0 {
            return Err(Failure::input(format!("{} has no vertices", path.display())));
        }
        if g.name().is_empty() {
            g.set_name(path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
        }
        Ok(g)
    }

    fn profile(&mut self, path: &Path, g: &Multigraph, agents: Option<usize>) -> Result<ValuationProfile, Failure> {
        let text = self.read("valuations", path)?;
        Ok(io::parse_valuations(&text, g, agents)?)
    }

    fn emit(&self, text: &str, data: Json) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&data).expect("serializable"));
        } else {
            print!("{text}");
        }
    }

    fn set_caps(&mut self, caps: &Caps) -> OracleCaps {
        self.manifest.set("cap.max_vertices", caps.max_vertices);
        self.manifest.set("cap.max_agents", caps.max_agents);
        OracleCaps {
            max_vertices: caps.max_vertices,
            max_agents: caps.max_agents,
        }
    }
}

fn names(g: &Multigraph, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(|v| g.vertex_name(v).to_string()).collect()
}

fn part_text(g: &Multigraph, part: &CutsetPart) -> String {
    match part {
        CutsetPart::Vertex(v) => g.vertex_name(*v).to_string(),
        CutsetPart::Subgraph { vertices, edges } => {
            let edges: Vec<String> = edges
                .iter()
                .map(|&id| {
                    let e = g.edge(id).expect("edge of the graph");
                    format!("{}-{}", g.vertex_name(e.u), g.vertex_name(e.v))
                })
                .collect();
            format!("[{}; {}]", names(g, vertices.iter().copied()).join(","), edges.join(","))
        }
    }
}

fn witness_text(g: &Multigraph, w: &CutsetWitness) -> String {
    let parts: Vec<String> = w.parts.iter().map(|p| part_text(g, p)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn threshold_json(g: &Multigraph, t: &Threshold) -> Json {
    match t {
        Threshold::Finite { t, witness } => json!({
            "value": t,
            "witness": witness.parts.iter().map(|p| part_text(g, p)).collect::<Vec<_>>(),
            "components": witness.components.len(),
            "gap": witness.gap,
        }),
        Threshold::Infinite => json!({ "value": "infinite" }),
    }
}

fn threshold_line(key: &str, g: &Multigraph, t: &Threshold) -> String {
    match t.witness() {
        Some(w) => format!("{key}={t} witness={} gap={}\n", witness_text(g, w), w.gap),
        None => format!("{key}={t}\n"),
    }
}

pub fn classify(ctx: &mut Context, path: &Path) -> Outcome {
    ctx.start("classify");
    let g = ctx.graph(path)?;
    let class = classify_stringable(&g)?;
    let threshold = gap_threshold(&smooth(&g))?;
    let (summary, data) = match &class {
        Stringability::Stringable(kind) => (
            format!("Stringable({kind}), gap_threshold={threshold}"),
            json!({ "stringable": true, "kind": kind.to_string() }),
        ),
        Stringability::NonStringable { excess, .. } => (
            format!("NonStringable, epsilon−sigma3={excess}, gap_threshold={threshold}"),
            json!({ "stringable": false, "epsilon_minus_sigma3": excess }),
        ),
    };
    let sequence = match &class {
        Stringability::NonStringable { sequence, case, .. } => format!("{sequence} (case {})", case.number()),
        Stringability::Stringable(_) => tanglefair::tangle::DegreeSequence::of(&g)?.to_string(),
    };
    let sk = smooth(&g);
    let mut data = data;
    data["degree_sequence"] = json!(sequence);
    data["gap_threshold"] = threshold_json(&sk, &threshold);
    ctx.manifest.set("outcome", &summary);
    let text = format!("{summary}\ndegree_sequence={sequence}\n{}", threshold_line("gap_threshold", &sk, &threshold));
    ctx.emit(&text, data);
    Ok(Status::Ok)
}

pub fn threshold(ctx: &mut Context, path: &Path, generalized: bool, relax: bool) -> Outcome {
    ctx.start("threshold");
    let g = smooth(&ctx.graph(path)?);
    let plain = gap_threshold(&g)?;
    let mut text = threshold_line("gap_threshold", &g, &plain);
    let mut data = json!({ "gap_threshold": threshold_json(&g, &plain) });
    ctx.manifest.set("gap_threshold", &plain);
    if generalized || relax {
        let strict = generalized_gap_threshold(&g, GeneralizedOptions::default())?;
        text += &threshold_line("generalized_gap_threshold", &g, &strict);
        data["generalized_gap_threshold"] = threshold_json(&g, &strict);
        ctx.manifest.set("generalized_gap_threshold", &strict);
    }
    if relax {
        let opts = GeneralizedOptions {
            relax_connectivity: true,
            ..GeneralizedOptions::default()
        };
        let relaxed = generalized_gap_threshold(&g, opts)?;
        text += &threshold_line("generalized_gap_threshold_relaxed", &g, &relaxed);
        data["generalized_gap_threshold_relaxed"] = threshold_json(&g, &relaxed);
        ctx.manifest.set("generalized_gap_threshold_relaxed", &relaxed);
    }
    ctx.manifest.set("outcome", "ok");
    ctx.emit(&text, data);
    Ok(Status::Ok)
}

fn allocation_json(g: &Multigraph, a: &Allocation) -> Json {
    json!(a.bundles().iter().map(|b| names(g, b.iter().copied())).collect::<Vec<_>>())
}

fn envy_json(g: &Multigraph, report: &EnvyReport) -> Json {
    json!(report
        .pairs
        .iter()
        .filter(|p| p.envier != p.envied && p.amount > tanglefair::Value::from_integer(0))
        .map(|p| json!({
            "envier": p.envier + 1,
            "envied": p.envied + 1,
            "amount": p.amount.to_string(),
            "witness": p.witness.as_ref().map(|w| names(g, w.iter().copied())),
        }))
        .collect::<Vec<_>>())
}

fn print_trace(stages: &[KnifeState]) {
    for (i, s) in stages.iter().enumerate() {
        if stages.len() > 1 {
            eprintln!("# stage {}", i + 1);
        }
        for line in &s.trace {
            eprintln!("{line}");
        }
    }
}

pub fn solve(
    ctx: &mut Context,
    graph: &Path,
    valuations: &Path,
    agents: usize,
    trace: bool,
    verify: bool,
    out: Option<&Path>,
) -> Outcome {
    ctx.start("solve");
    let g = ctx.graph(graph)?;
    let p = ctx.profile(valuations, &g, Some(agents))?;
    ctx.manifest.set("agents", agents);
    ctx.manifest.set("verify", verify);
    let opts = KnifeOptions {
        trace,
        ..if verify { KnifeOptions::default() } else { KnifeOptions::fast() }
    };
    let (procedure, allocation, stages) = if agents == 2 {
        match knife::two_agent_ef1(&g, &p)? {
            Some(a) => ("bipolar", a, Vec::new()),
            None => {
                let msg = "graph has no bipolar numbering; two-agent EF1 outer is not guaranteed";
                ctx.manifest.set("outcome", msg);
                ctx.emit(&format!("{msg}\n"), json!({ "allocation": null, "reason": msg }));
                return Ok(Status::Negative);
            }
        }
    } else if lips_labeling(&g)?.is_some() {
        let run = knife::lips_ef1_three(&g, &p, opts)?;
        ("lips", run.allocation, run.stages)
    } else if hamiltonian_path(&g)?.is_some() {
        let (a, s) = knife::traceable_ef1_three(&g, &p, opts)?.expect("path exists");
        ("traceable", a, vec![s])
    } else {
        let msg = "no constructive procedure applies: graph is neither lips-class nor traceable";
        ctx.manifest.set("outcome", msg);
        ctx.emit(&format!("{msg}\n"), json!({ "allocation": null, "reason": msg }));
        return Ok(Status::Negative);
    };
    if trace {
        print_trace(&stages);
    }
    let report = envy_report(&g, &allocation, &p, 1)?;
    if !report.is_efk_outer() {
        return Err(Failure::input("internal: solver output failed EF1 outer"));
    }
    let text = format!("# procedure {procedure}\n{}", io::write_allocation(&g, &allocation, Some(&report)));
    ctx.manifest.set("procedure", procedure);
    ctx.manifest.set("outcome", "ef1_outer allocation");
    ctx.manifest.set("output.sha256", crate::manifest::digest(&text));
    let data = json!({
        "procedure": procedure,
        "allocation": allocation_json(&g, &allocation),
        "ef1_outer": true,
        "empty_bundle": allocation.has_empty_bundle(),
        "envy": envy_json(&g, &report),
        "trace": stages.iter().map(|s| s.trace.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
            ctx.emit(&format!("wrote {}\n", path.display()), data);
        }
        None => ctx.emit(&text, data),
    }
    Ok(Status::Ok)
}

pub fn verify(ctx: &mut Context, graph: &Path, valuations: &Path, allocation: &Path, k: usize) -> Outcome {
    ctx.start("verify");
    let g = ctx.graph(graph)?;
    let text = ctx.read("allocation", allocation)?;
    let a = io::parse_allocation(&text, &g)?;
    let p = ctx.profile(valuations, &g, Some(a.agents()))?;
    ctx.manifest.set("k", k);
    match envy_report(&g, &a, &p, k) {
        Ok(report) => {
            let pass = report.is_efk_outer();
            let verdict = if pass { "yes" } else { "no" };
            let mut text = format!("contiguous=yes ef{k}_outer={verdict}\n");
            for line in io::write_allocation(&g, &a, Some(&report)).lines().filter(|l| l.starts_with("# ")) {
                text += line;
                text.push('\n');
            }
            ctx.manifest.set("outcome", format!("ef{k}_outer={verdict}"));
            ctx.emit(&text, json!({ "contiguous": true, "efk_outer": pass, "k": k, "envy": envy_json(&g, &report) }));
            Ok(if pass { Status::Ok } else { Status::Negative })
        }
        Err(FairnessError::NotContiguous(i)) => {
            let msg = format!("contiguous=no (bundle of agent {})", i + 1);
            ctx.manifest.set("outcome", &msg);
            ctx.emit(&format!("{msg}\n"), json!({ "contiguous": false, "agent": i + 1 }));
            Ok(Status::Negative)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn counterexample(
    ctx: &mut Context,
    graph: &Path,
    n: usize,
    k: usize,
    certify: bool,
    out_dir: Option<&Path>,
    caps: &Caps,
) -> Outcome {
    ctx.start("counterexample");
    let input = ctx.graph(graph)?;
    let mut sk = smooth(&input);
    sk.set_name(input.name());
    ctx.manifest.set("n", n);
    ctx.manifest.set("k", k);
    let caps = ctx.set_caps(caps);
    let threshold = match gap_threshold(&sk)? {
        Threshold::Infinite => generalized_gap_threshold(&sk, GeneralizedOptions::default())?,
        t => t,
    };
    let Some(witness) = threshold.witness() else {
        let msg = "no gap ≥ 2 cutset: the tangle is stringable";
        ctx.manifest.set("outcome", msg);
        ctx.emit(&format!("{msg}\n"), json!({ "instance": null, "reason": msg }));
        return Ok(Status::Negative);
    };
    let mut inst = negative_instance(&sk, witness, n, k)?;
    if certify {
        inst.certify(caps)?;
    }
    let edge_name = |id: usize| {
        let e = sk.edge(id).expect("skeleton edge");
        format!("e{id}({}-{})", sk.vertex_name(e.u), sk.vertex_name(e.v))
    };
    let table = |f: &dyn Fn(usize) -> String| -> String {
        inst.j.keys().map(|&id| format!("{}:{}", edge_name(id), f(id))).collect::<Vec<_>>().join(",")
    };
    let mut m = Manifest::new("counterexample");
    m.set("base", sk.name());
    m.set("cutset", witness_text(&sk, witness));
    m.set("n", n);
    m.set("k", k);
    m.set("b", inst.b);
    m.set("mu", table(&|id| inst.mu[&id].to_string()));
    m.set("J", table(&|id| inst.j[&id].to_string()));
    m.set("vertices", inst.graph.vertex_count());
    m.set("scale", inst.scale());
    m.set("per_vertex_bound", if inst.vertex_bound_holds() { "holds" } else { "fails" });
    m.set("verification", inst.verification.label());
    match &inst.verification {
        Verification::CertifiedAbsent {
            allocations_checked,
            partitions_checked,
        } => {
            m.set("allocations_checked", allocations_checked);
            m.set("partitions_checked", partitions_checked);
        }
        Verification::Unverified { reason } => m.set("reason", reason),
        _ => {}
    }
    let mut h = inst.graph.clone();
    h.set_name(format!("{}-n{n}-k{k}", sk.name()));
    let graph_text = io::write_graph(&h);
    let scaled = tanglefair::valuation::AdditiveValuation::from_integers(&inst.integer_values()).expect("non-negative");
    let val_text = io::write_valuations(&h, &vec![&scaled; n]);
    m.set("graph.sha256", crate::manifest::digest(&graph_text));
    m.set("valuations.sha256", crate::manifest::digest(&val_text));
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
        for (ext, body) in [("graph", &graph_text), ("val", &val_text), ("manifest", &m.render())] {
            let path = dir.join(format!("{}.{ext}", h.name()));
            fs::write(&path, body).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    ctx.manifest.set("outcome", inst.verification.label());
    let data = json!({
        "base": sk.name(),
        "cutset": witness.parts.iter().map(|p| part_text(&sk, p)).collect::<Vec<_>>(),
        "n": n,
        "k": k,
        "b": inst.b.to_string(),
        "vertices": inst.graph.vertex_count(),
        "J": inst.j.iter().map(|(&id, j)| (edge_name(id), json!(j))).collect::<serde_json::Map<_, _>>(),
        "per_vertex_bound": inst.vertex_bound_holds(),
        "verification": inst.verification.label(),
    });
    ctx.emit(&m.render(), data);
    Ok(match inst.verification {
        Verification::Refuted(_) => Status::Negative,
        Verification::Unverified { .. } => Status::Cap,
        _ => Status::Ok,
    })
}

pub fn oracle(ctx: &mut Context, graph: &Path, valuations: &Path, n: usize, k: usize, caps: &Caps) -> Outcome {
    ctx.start("oracle");
    let g = ctx.graph(graph)?;
    let p = ctx.profile(valuations, &g, Some(n))?;
    ctx.manifest.set("n", n);
    ctx.manifest.set("k", k);
    let caps = ctx.set_caps(caps);
    match exists_efk_outer(&g, &p, k, caps)? {
        OracleOutcome::Found(a) => {
            let report = envy_report(&g, &a, &p, k)?;
            ctx.manifest.set("outcome", "found");
            ctx.emit(
                &io::write_allocation(&g, &a, Some(&report)),
                json!({
                    "found": true,
                    "allocation": allocation_json(&g, &a),
                    "empty_bundle": a.has_empty_bundle(),
                    "envy": envy_json(&g, &report),
                }),
            );
            Ok(Status::Ok)
        }
        OracleOutcome::Absent {
            allocations_checked,
            partitions_checked,
            ..
        } => {
            let msg = format!(
                "no contiguous EF{k}_outer allocation exists (all {allocations_checked} allocations checked)"
            );
            ctx.manifest.set("outcome", "absent");
            ctx.manifest.set("allocations_checked", allocations_checked);
            ctx.emit(
                &format!("{msg}\n"),
                json!({
                    "found": false,
                    "allocations_checked": allocations_checked.to_string(),
                    "partitions_checked": partitions_checked.to_string(),
                }),
            );
            Ok(Status::Negative)
        }
    }
}
