//! CSV and DIMACS file formats.
//!
//! | file | header |
//! |------|--------|
//! | network | `edge_id,tail,head,d_ms` |
//! | demand | `origin,destination,count` |
//! | step-table model | `edge_id,load,cost` (one row per breakpoint) |
//! | paths | `agent_id,path` (edge ids separated by spaces) |
//!
//! Every file has a header row; outputs use `\n` line endings.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path as FsPath;

use serde::Deserialize;

use crate::busline::{bus_time_h, LinePlan, Tvot};
use crate::engine::RoundReport;
use crate::error::{Error, Result};
use crate::game::{Agent, CostModel, DemandSet, Edge, LoadVector, RoadNetwork, StepTable, StrategyProfile};
use crate::metrics::FlowMetrics;
use crate::optima::SatInstance;
use crate::{AgentId, EdgeId, VertexId};

fn parse_error(path: &FsPath, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Reads every data row of a CSV file as `T`, paired with its line number.
fn read_rows<T: for<'de> Deserialize<'de>>(path: &FsPath, header: &[&str]) -> Result<Vec<(usize, T)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(File::open(path)?);
    let found = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if found.iter().collect::<Vec<_>>() != header {
        return Err(parse_error(path, 1, format!("expected header {:?}", header.join(","))));
    }
    reader
        .records()
        .map(|record| {
            let record = record.map_err(|e| csv_error(path, e))?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let row = record
                .deserialize(Some(&found))
                .map_err(|e| parse_error(path, line, e.to_string()))?;
            Ok((line, row))
        })
        .collect()
}

fn csv_error(path: &FsPath, e: csv::Error) -> Error {
    if e.is_io_error() {
        return Error::Csv(e);
    }
    let line = e.position().map_or(0, |p| p.line() as usize);
    let message = match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
        _ => e.to_string(),
    };
    parse_error(path, line, message)
}

fn writer(path: &FsPath) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(File::create(path)?)))
}

fn finish(mut w: csv::Writer<BufWriter<File>>) -> Result<()> {
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct EdgeRow {
    edge_id: EdgeId,
    tail: VertexId,
    head: VertexId,
    d_ms: u32,
}

/// The vertex count is one more than the largest endpoint id.
pub fn load_network(path: &FsPath) -> Result<RoadNetwork> {
    let rows: Vec<(usize, EdgeRow)> = read_rows(path, &["edge_id", "tail", "head", "d_ms"])?;
    let m = rows.len();
    let mut edges: Vec<Option<Edge>> = vec![None; m];
    let mut n = 0;
    for (line, row) in rows {
        let slot = edges
            .get_mut(row.edge_id as usize)
            .ok_or_else(|| parse_error(path, line, format!("edge id {} is not below the edge count {m}", row.edge_id)))?;
        if slot.is_some() {
            return Err(parse_error(path, line, format!("duplicate edge id {}", row.edge_id)));
        }
        *slot = Some(Edge {
            tail: row.tail,
            head: row.head,
            d_ms: row.d_ms,
        });
        n = n.max(row.tail as usize + 1).max(row.head as usize + 1);
    }
    RoadNetwork::new(n, edges.into_iter().map(|e| e.expect("ids are dense")).collect())
}

pub fn save_network(path: &FsPath, network: &RoadNetwork) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["edge_id", "tail", "head", "d_ms"])?;
    for (i, e) in network.edges().iter().enumerate() {
        w.write_record([i.to_string(), e.tail.to_string(), e.head.to_string(), e.d_ms.to_string()])?;
    }
    finish(w)
}

#[derive(Deserialize)]
struct DemandRow {
    origin: VertexId,
    destination: VertexId,
    count: u32,
}

/// Each row becomes `count` agents with consecutive ids.
pub fn load_demand(path: &FsPath, network: &RoadNetwork) -> Result<DemandSet> {
    let rows: Vec<(usize, DemandRow)> = read_rows(path, &["origin", "destination", "count"])?;
    let mut agents = Vec::new();
    for (line, row) in rows {
        if row.origin == row.destination {
            return Err(parse_error(path, line, format!("origin equals destination ({})", row.origin)));
        }
        agents.extend(std::iter::repeat_n(
            Agent {
                origin: row.origin,
                destination: row.destination,
            },
            row.count as usize,
        ));
    }
    DemandSet::new(network, agents)
}

/// Consecutive agents with the same O-D pair share a row.
pub fn save_demand(path: &FsPath, demand: &DemandSet) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["origin", "destination", "count"])?;
    let agents = demand.agents();
    let mut i = 0;
    while i < agents.len() {
        let j = i + agents[i..].iter().take_while(|a| **a == agents[i]).count();
        w.write_record([
            agents[i].origin.to_string(),
            agents[i].destination.to_string(),
            (j - i).to_string(),
        ])?;
        i = j;
    }
    finish(w)
}

#[derive(Deserialize)]
struct BreakpointRow {
    edge_id: EdgeId,
    load: u32,
    cost: f64,
}

/// Step tables for every edge of `network`; rows of one edge may appear in
/// any order.
pub fn load_step_model(path: &FsPath, network: &RoadNetwork) -> Result<CostModel> {
    let rows: Vec<(usize, BreakpointRow)> = read_rows(path, &["edge_id", "load", "cost"])?;
    let mut points: Vec<Vec<(u32, f64)>> = vec![Vec::new(); network.num_edges()];
    for (line, row) in rows {
        points
            .get_mut(row.edge_id as usize)
            .ok_or_else(|| parse_error(path, line, format!("edge {} is not in the network", row.edge_id)))?
            .push((row.load, row.cost));
    }
    let tables = points
        .into_iter()
        .enumerate()
        .map(|(e, mut p)| {
            p.sort_by_key(|&(l, _)| l);
            StepTable::new(p).map_err(|reason| Error::InvalidCostTable {
                edge: e as EdgeId,
                reason,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CostModel::step_tables(tables)
}

pub fn save_step_model(path: &FsPath, model: &CostModel) -> Result<()> {
    let tables = model
        .tables()
        .ok_or_else(|| Error::InvalidParameter("only step-table models can be saved".into()))?;
    let mut w = writer(path)?;
    w.write_record(["edge_id", "load", "cost"])?;
    for (e, t) in tables.iter().enumerate() {
        for &(load, cost) in t.breakpoints() {
            w.write_record([e.to_string(), load.to_string(), cost.to_string()])?;
        }
    }
    finish(w)
}

#[derive(Deserialize)]
struct PathRow {
    agent_id: AgentId,
    path: String,
}

pub fn load_paths(path: &FsPath) -> Result<StrategyProfile> {
    let rows: Vec<(usize, PathRow)> = read_rows(path, &["agent_id", "path"])?;
    let k = rows.len();
    let mut paths: Vec<Option<Vec<EdgeId>>> = vec![None; k];
    for (line, row) in rows {
        let edges = row
            .path
            .split_whitespace()
            .map(|t| t.parse::<EdgeId>().map_err(|e| parse_error(path, line, format!("edge id {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let slot = paths
            .get_mut(row.agent_id as usize)
            .ok_or_else(|| parse_error(path, line, format!("agent id {} is not below the agent count {k}", row.agent_id)))?;
        if slot.replace(edges).is_some() {
            return Err(parse_error(path, line, format!("duplicate agent id {}", row.agent_id)));
        }
    }
    Ok(StrategyProfile::from_vecs(paths.into_iter().map(|p| p.expect("ids are dense")).collect()))
}

fn join(edges: &[EdgeId]) -> String {
    edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn save_paths(path: &FsPath, profile: &StrategyProfile) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["agent_id", "path"])?;
    for (i, p) in profile.paths().iter().enumerate() {
        w.write_record([i.to_string(), join(p)])?;
    }
    finish(w)
}

pub fn save_loads(path: &FsPath, loads: &LoadVector) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["edge_id", "load"])?;
    for (e, l) in loads.iter().enumerate() {
        w.write_record([e.to_string(), l.to_string()])?;
    }
    finish(w)
}

pub fn save_trace(path: &FsPath, trace: &[RoundReport]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["round", "phi", "delta", "switches", "query_ms", "customize_ms"])?;
    for r in trace {
        w.write_record([
            r.round.to_string(),
            r.phi.to_string(),
            r.delta.to_string(),
            r.switches.to_string(),
            format!("{:.3}", r.query_ms),
            format!("{:.3}", r.customize_ms),
        ])?;
    }
    finish(w)
}

pub fn save_metrics(path: &FsPath, metrics: &FlowMetrics) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["metric", "value"])?;
    w.write_record(["average_stretch".to_string(), metrics.average_stretch.to_string()])?;
    w.write_record(["average_sharing".to_string(), metrics.average_sharing.to_string()])?;
    if let Some(n) = metrics.normalized_average_sharing {
        w.write_record(["normalized_average_sharing".to_string(), n.to_string()])?;
    }
    finish(w)
}

pub fn save_curve(path: &FsPath, curve: &[(f64, f64)]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["x", "fraction"])?;
    for (x, f) in curve {
        w.write_record([x.to_string(), f.to_string()])?;
    }
    finish(w)
}

pub fn save_lines(path: &FsPath, plan: &LinePlan) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["line_id", "riders", "tau_s", "coverage_h", "edges"])?;
    for (i, l) in plan.lines.iter().enumerate() {
        w.write_record([
            i.to_string(),
            l.assignments.len().to_string(),
            (l.tau_ms as f64 / 1e3).to_string(),
            (l.coverage_ms as f64 / 3.6e6).to_string(),
            join(&l.edges),
        ])?;
    }
    finish(w)
}

pub fn save_plan(path: &FsPath, plan: &LinePlan) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["line_id", "selected", "tau_s", "bus_time_h", "coverage_h"])?;
    for (i, (l, &s)) in plan.lines.iter().zip(&plan.selected).enumerate() {
        w.write_record([
            i.to_string(),
            u8::from(s).to_string(),
            (l.tau_ms as f64 / 1e3).to_string(),
            bus_time_h(l, plan.freq_per_min, plan.window_min).to_string(),
            (l.coverage_ms as f64 / 3.6e6).to_string(),
        ])?;
    }
    finish(w)
}

pub fn save_tvot(path: &FsPath, t: &Tvot) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["bus_time_h", "baseline_h", "coverage_h", "tvot_h"])?;
    w.write_record([
        t.bus_time_h.to_string(),
        t.baseline_h.to_string(),
        t.coverage_h.to_string(),
        t.tvot_h.to_string(),
    ])?;
    finish(w)
}

/// Parses DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header,
/// then clauses as signed integers each terminated by `0`.
pub fn parse_cnf(text: &str, origin: &FsPath) -> Result<SatInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| parse_error(origin, line_no, "expected `p cnf <vars> <clauses>`"))?);
            continue;
        }
        if header.is_none() {
            return Err(parse_error(origin, line_no, "clause before the `p cnf` header"));
        }
        for token in line.split_whitespace() {
            let lit: i32 = token
                .parse()
                .map_err(|_| parse_error(origin, line_no, format!("bad literal {token:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let (vars, count) = header.ok_or_else(|| parse_error(origin, 0, "missing `p cnf` header"))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(Error::InvalidSat(format!("header announces {count} clauses, found {}", clauses.len())));
    }
    SatInstance::new(vars, clauses)
}

pub fn load_cnf(path: &FsPath) -> Result<SatInstance> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    parse_cnf(&text, path)
}

pub fn save_cnf(path: &FsPath, sat: &SatInstance) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "p cnf {} {}", sat.num_vars(), sat.clauses().len())?;
    for c in sat.clauses() {
        let lits: Vec<String> = c.iter().map(|l| l.to_string()).collect();
        writeln!(w, "{} 0", lits.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `network.csv`, `demand.csv` and, for step-table models,
/// `model.csv` into `dir`.
pub fn save_instance(dir: &FsPath, network: &RoadNetwork, demand: &DemandSet, model: &CostModel) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    save_network(&dir.join("network.csv"), network)?;
    save_demand(&dir.join("demand.csv"), demand)?;
    if model.tables().is_some() {
        save_step_model(&dir.join("model.csv"), model)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnf_parsing() {
        let p = FsPath::new("x.cnf");
        let sat = parse_cnf("c tiny\np cnf 1 4\n1 0\n1 0 -1\n0\n-1 0\n", p).unwrap();
        assert_eq!(sat.clauses(), &[vec![1], vec![1], vec![-1], vec![-1]]);
        assert!(matches!(parse_cnf("1 0\n", p), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_cnf("p cnf 1 3\n1 0\n1 0\n-1 0\n-1 0\n", p), Err(Error::InvalidSat(_))));
        assert!(matches!(parse_cnf("p cnf 1 1\n1 x 0\n", p), Err(Error::Parse { line: 2, .. })));
    }
}
