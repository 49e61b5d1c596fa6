//! Single-threaded event loop delivering protocol messages between agents.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::tree::{Kinship, RootedTree};

use super::agent::{Agent, AgentEvent, BreakType, Ctx};
use super::message::{Message, MessageKind};
use super::palette;

/// Order in which pending messages are delivered. Both keep each
/// sender-receiver channel first-in first-out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interleaving {
    /// Head of a uniformly chosen non-empty channel.
    #[default]
    Random,
    /// Global send order.
    Fifo,
}

impl std::str::FromStr for Interleaving {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Interleaving::Random),
            "fifo" => Ok(Interleaving::Fifo),
            other => Err(Error::InvalidParameter(format!("unknown interleaving {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub seed: u64,
    pub interleaving: Interleaving,
    /// Maximum number of deliveries; `None` uses [`default_budget`].
    pub budget: Option<u64>,
    /// Palette cap; `None` uses [`palette::default_cap`].
    pub palette_cap: Option<usize>,
    pub trace: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            interleaving: Interleaving::Random,
            budget: None,
            palette_cap: None,
            trace: false,
        }
    }
}

impl SimConfig {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = true;
        self
    }
}

/// `64 * n * (Δ + 1)` deliveries.
pub fn default_budget(g: &Graph) -> u64 {
    64 * g.n() as u64 * (g.max_degree() as u64 + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    CycleBreak,
    Colored,
}

/// One line of a run trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TraceRecord {
    Delivery {
        step: u64,
        kind: MessageKind,
        src: Vertex,
        dst: Vertex,
        payload: serde_json::Value,
    },
    Event {
        step: u64,
        event: EventKind,
        vertex: Vertex,
        #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
        break_type: Option<BreakType>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        color: Option<Color>,
    },
}

impl TraceRecord {
    fn delivery(step: u64, msg: &Message) -> Self {
        let mut payload = serde_json::to_value(&msg.payload).expect("payloads serialize");
        if let Some(obj) = payload.as_object_mut() {
            obj.remove("kind");
            if msg.echo {
                obj.insert("echo".into(), true.into());
            }
        }
        TraceRecord::Delivery {
            step,
            kind: msg.kind(),
            src: msg.src,
            dst: msg.dst,
            payload,
        }
    }
}

pub fn write_trace<W: Write>(records: &[TraceRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_trace(text: &str) -> Result<Vec<TraceRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub delivered: u64,
    pub by_kind: BTreeMap<MessageKind, u64>,
    pub dropped: u64,
    pub breaks_request: u64,
    pub breaks_put: u64,
}

impl RunStats {
    pub fn cycle_breaks(&self) -> u64 {
        self.breaks_request + self.breaks_put
    }
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub d: usize,
    pub config: SimConfig,
    pub coloring: Coloring,
    pub stats: RunStats,
    pub trace: Vec<TraceRecord>,
    /// Every vertex acquired a color.
    pub terminated: bool,
    /// Deliveries hit the budget with messages still pending.
    pub budget_exhausted: bool,
}

impl SimulationRun {
    /// Vertices that were colored, in the order they were colored. Empty
    /// unless tracing was on.
    pub fn coloring_order(&self) -> Vec<Vertex> {
        self.trace
            .iter()
            .filter_map(|r| match r {
                TraceRecord::Event {
                    event: EventKind::Colored,
                    vertex,
                    ..
                } => Some(*vertex),
                _ => None,
            })
            .collect()
    }

    pub fn breaks(&self) -> Vec<(Vertex, BreakType)> {
        self.trace
            .iter()
            .filter_map(|r| match r {
                TraceRecord::Event {
                    event: EventKind::CycleBreak,
                    vertex,
                    break_type: Some(t),
                    ..
                } => Some((*vertex, *t)),
                _ => None,
            })
            .collect()
    }
}

/// Message channels with per-channel FIFO order.
struct Network {
    interleaving: Interleaving,
    rng: ChaCha8Rng,
    channels: Vec<VecDeque<Message>>,
    index: HashMap<(Vertex, Vertex), usize>,
    active: Vec<usize>,
    slot: Vec<usize>,
    fifo: VecDeque<Message>,
}

impl Network {
    fn new(interleaving: Interleaving, seed: u64) -> Self {
        Self {
            interleaving,
            rng: ChaCha8Rng::seed_from_u64(seed),
            channels: Vec::new(),
            index: HashMap::new(),
            active: Vec::new(),
            slot: Vec::new(),
            fifo: VecDeque::new(),
        }
    }

    fn push(&mut self, msg: Message) {
        if self.interleaving == Interleaving::Fifo {
            self.fifo.push_back(msg);
            return;
        }
        let next = self.channels.len();
        let id = *self.index.entry((msg.src, msg.dst)).or_insert(next);
        if id == next {
            self.channels.push(VecDeque::new());
            self.slot.push(usize::MAX);
        }
        if self.channels[id].is_empty() {
            self.slot[id] = self.active.len();
            self.active.push(id);
        }
        self.channels[id].push_back(msg);
    }

    fn pop(&mut self) -> Option<Message> {
        if self.interleaving == Interleaving::Fifo {
            return self.fifo.pop_front();
        }
        if self.active.is_empty() {
            return None;
        }
        let pick = self.rng.gen_range(0..self.active.len());
        let id = self.active[pick];
        let msg = self.channels[id].pop_front();
        if self.channels[id].is_empty() {
            let last = *self.active.last().expect("non-empty");
            self.active.swap_remove(pick);
            if last != id {
                self.slot[last] = pick;
            }
            self.slot[id] = usize::MAX;
        }
        msg
    }

    fn is_empty(&self) -> bool {
        self.fifo.is_empty() && self.active.is_empty()
    }
}

/// Runs the d-band protocol to quiescence or budget exhaustion and reports
/// what happened; never fails on non-termination.
pub fn simulate(g: &Graph, t: &RootedTree, d: usize, config: &SimConfig) -> Result<SimulationRun> {
    if d == 0 {
        return Err(Error::InvalidParameter("band count d must be positive".into()));
    }
    g.ensure_connected()?;
    let kin = Kinship::new(g, t)?;
    let n = g.n();
    let cap = config.palette_cap.unwrap_or_else(|| palette::default_cap(g.max_degree()));
    let budget = config.budget.unwrap_or_else(|| default_budget(g));
    let levels = t.levels();

    let mut agents: Vec<Agent> = (0..n).map(|v| Agent::new(v, &kin, levels)).collect();
    let mut net = Network::new(config.interleaving, config.seed);
    let mut stats = RunStats::default();
    let mut trace = Vec::new();
    let mut out = Vec::new();
    let mut events = Vec::new();
    let mut step = 0u64;

    let absorb = |step: u64,
                      out: &mut Vec<Message>,
                      events: &mut Vec<AgentEvent>,
                      net: &mut Network,
                      stats: &mut RunStats,
                      trace: &mut Vec<TraceRecord>| {
        for m in out.drain(..) {
            net.push(m);
        }
        for e in events.drain(..) {
            let record = match e {
                AgentEvent::Dropped => {
                    stats.dropped += 1;
                    None
                }
                AgentEvent::Colored { vertex, color } => Some(TraceRecord::Event {
                    step,
                    event: EventKind::Colored,
                    vertex,
                    break_type: None,
                    color: Some(color),
                }),
                AgentEvent::CycleBreak { vertex, break_type } => {
                    match break_type {
                        BreakType::Request => stats.breaks_request += 1,
                        BreakType::Put => stats.breaks_put += 1,
                    }
                    Some(TraceRecord::Event {
                        step,
                        event: EventKind::CycleBreak,
                        vertex,
                        break_type: Some(break_type),
                        color: None,
                    })
                }
            };
            if config.trace {
                trace.extend(record);
            }
        }
    };

    for agent in agents.iter_mut() {
        let mut ctx = Ctx {
            kin: &kin,
            levels,
            d,
            cap,
            out: &mut out,
            events: &mut events,
        };
        agent.start(&mut ctx)?;
        absorb(step, &mut out, &mut events, &mut net, &mut stats, &mut trace);
    }

    let mut budget_exhausted = false;
    while let Some(msg) = net.pop() {
        if stats.delivered >= budget {
            budget_exhausted = true;
            break;
        }
        step += 1;
        stats.delivered += 1;
        *stats.by_kind.entry(msg.kind()).or_default() += 1;
        if config.trace {
            trace.push(TraceRecord::delivery(step, &msg));
        }
        let dst = msg.dst;
        let mut ctx = Ctx {
            kin: &kin,
            levels,
            d,
            cap,
            out: &mut out,
            events: &mut events,
        };
        agents[dst].handle(msg, &mut ctx)?;
        absorb(step, &mut out, &mut events, &mut net, &mut stats, &mut trace);
    }
    debug_assert!(budget_exhausted || net.is_empty());

    let coloring = Coloring::from_partial(agents.iter().map(Agent::color).collect());
    let terminated = coloring.is_total();
    Ok(SimulationRun {
        d,
        config: config.clone(),
        coloring,
        stats,
        trace,
        terminated,
        budget_exhausted,
    })
}

/// Runs the d-band protocol; a run that does not color every vertex is an
/// error.
pub fn run_dband(g: &Graph, t: &RootedTree, d: usize, config: &SimConfig) -> Result<SimulationRun> {
    let run = simulate(g, t, d, config)?;
    if run.terminated {
        return Ok(run);
    }
    let uncolored = run.coloring.as_slice().iter().filter(|c| c.is_none()).count();
    Err(Error::NonTermination {
        delivered: run.stats.delivered,
        uncolored,
        budget_exhausted: run.budget_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn path_from_an_end() {
        let g = generate::path(3).unwrap();
        let t = RootedTree::bfs(&g, 0).unwrap();
        for seed in 0..20 {
            let run = run_dband(&g, &t, 3, &SimConfig::seeded(seed).with_trace()).unwrap();
            assert_eq!(run.coloring, Coloring::from_total(vec![0, 1, 2]));
            assert!(!run.trace.iter().any(|r| matches!(
                r,
                TraceRecord::Delivery {
                    kind: MessageKind::DepReq | MessageKind::DepPut,
                    ..
                }
            )));
        }
    }

    #[test]
    fn star_in_request_order() {
        let g = generate::star(5).unwrap();
        let t = RootedTree::bfs(&g, 0).unwrap();
        let run = run_dband(&g, &t, 2, &SimConfig::seeded(4).with_trace()).unwrap();
        let order: Vec<_> = run
            .trace
            .iter()
            .filter_map(|r| match r {
                TraceRecord::Delivery {
                    kind: MessageKind::ReqCol,
                    src,
                    ..
                } => Some(*src),
                _ => None,
            })
            .collect();
        // The root assigns as requests arrive: 1, 3, 5, ...
        for (i, leaf) in order.iter().enumerate() {
            assert_eq!(run.coloring.get(*leaf), Some(1 + 2 * i as Color));
        }
        assert_eq!(run.coloring.colors_used_max(), 10);
    }

    #[test]
    fn fifo_is_deterministic() {
        let g = generate::grid(3, 4).unwrap();
        let t = RootedTree::bfs(&g, 0).unwrap();
        let cfg = SimConfig {
            interleaving: Interleaving::Fifo,
            trace: true,
            ..SimConfig::default()
        };
        let a = run_dband(&g, &t, 3, &cfg).unwrap();
        let b = run_dband(&g, &t, 3, &cfg).unwrap();
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let g = generate::grid(3, 3).unwrap();
        let t = RootedTree::bfs(&g, 0).unwrap();
        let cfg = SimConfig {
            budget: Some(5),
            ..SimConfig::default()
        };
        assert!(matches!(
            run_dband(&g, &t, 3, &cfg),
            Err(Error::NonTermination {
                budget_exhausted: true,
                ..
            })
        ));
        assert!(run_dband(&g, &t, 0, &SimConfig::default()).is_err());
    }

    #[test]
    fn trace_lines_round_trip() {
        let g = generate::grid(2, 3).unwrap();
        let t = RootedTree::bfs(&g, 0).unwrap();
        let run = run_dband(&g, &t, 3, &SimConfig::seeded(1).with_trace()).unwrap();
        let mut buf = Vec::new();
        write_trace(&run.trace, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().next().unwrap().starts_with("{\"step\":"));
        assert_eq!(read_trace(&text).unwrap(), run.trace);
    }
}
