//! Per-vertex protocol state and handlers.
//!
//! Every vertex runs up to three procedures: acquiring its own color from its
//! parent, assigning colors to its children, and relaying reports between its
//! parent, children and step-relations. Each is a set of transitions over the
//! agent's state; [`Agent::handle`] routes an incoming message to the right
//! one by the sender's kinship and payload.
//!
//! Two same-level vertices that must not share a color are ordered: one
//! waits for the other's color. By default a child waits on the stepchildren
//! of its parent (put dependence) and a vertex waits on the parents of its
//! stepchildren (request dependence).
//!
//! Waiting is tracked with *tokens*: a token `w` at `v` says that `v` waits,
//! possibly through others, on `w`. Each waiting vertex announces its own ID
//! and forwards every smaller token it learns of exactly once, to every
//! neighbor that may relay it to a vertex waiting on it. The least vertex of a
//! dependency cycle therefore receives its own token back. It then drops the
//! dependence that closed the cycle, after the other side has registered the
//! reverse dependence. A break always turns a dependence on a larger vertex
//! into one on a smaller vertex, so there are finitely many.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coloring::Color;
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::tree::{Kin, Kinship};

use super::message::{Message, Payload};
use super::palette;

/// Which procedure broke a dependency cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BreakType {
    /// Request cycle, broken while acquiring.
    #[serde(rename = "I")]
    Request,
    /// Put cycle, broken while assigning.
    #[serde(rename = "II")]
    Put,
}

impl std::fmt::Display for BreakType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BreakType::Request => "I",
            BreakType::Put => "II",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AgentEvent {
    Colored { vertex: Vertex, color: Color },
    CycleBreak { vertex: Vertex, break_type: BreakType },
    Dropped,
}

/// Shared, read-only context plus the outboxes for one activation.
pub struct Ctx<'a> {
    pub kin: &'a Kinship,
    pub levels: &'a [usize],
    pub d: usize,
    pub cap: usize,
    pub out: &'a mut Vec<Message>,
    pub events: &'a mut Vec<AgentEvent>,
}

impl Ctx<'_> {
    fn send(&mut self, src: Vertex, dst: Vertex, payload: Payload) {
        debug_assert_ne!(src, dst);
        self.out.push(Message {
            src,
            dst,
            echo: false,
            payload,
        });
    }

    fn echo(&mut self, src: Vertex, dst: Vertex, payload: Payload) {
        debug_assert_ne!(src, dst);
        self.out.push(Message {
            src,
            dst,
            echo: true,
            payload,
        });
    }

    fn send_all(&mut self, src: Vertex, dsts: &[Vertex], payload: &Payload) {
        for &dst in dsts {
            self.send(src, dst, payload.clone());
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Waiting,
    Requested,
    Done,
}

#[derive(Debug, Clone)]
struct Acquire {
    phase: Phase,
    excluded: BTreeSet<Color>,
    /// Stepchild (or reverse-dependence key) to the last token reported for it.
    awaiting: BTreeMap<Vertex, Vertex>,
    /// Reverse dependences handed to the parent after REQ-COL went out.
    late: BTreeSet<Vertex>,
    /// Late registrations the parent has not confirmed, with the children
    /// waiting for the confirmation.
    unconfirmed: BTreeMap<Vertex, Vec<Vertex>>,
}

#[derive(Debug, Clone)]
struct Assign {
    forbidden: BTreeSet<Color>,
    child_excluded: BTreeMap<Vertex, BTreeSet<Color>>,
    requested: BTreeSet<Vertex>,
    /// Child to the vertices whose colors it waits for in reverse.
    reverse: BTreeMap<Vertex, BTreeSet<Vertex>>,
    uncolored_stepchildren: BTreeSet<Vertex>,
    /// Uncolored stepchild to the last token it reported.
    awaiting: BTreeMap<Vertex, Vertex>,
    unassigned: BTreeSet<Vertex>,
    /// (child, stepchild) pairs where the stepchild's parent waits for the
    /// child instead.
    reversed: BTreeSet<(Vertex, Vertex)>,
    /// Reversals sent but not yet confirmed.
    pending: BTreeSet<(Vertex, Vertex)>,
    /// Tokens passed to each child.
    announced: BTreeMap<Vertex, BTreeSet<Vertex>>,
    /// Tokens reported by each child.
    child_tokens: BTreeMap<Vertex, BTreeSet<Vertex>>,
    finished: bool,
}

#[derive(Debug, Clone, Default)]
struct Report {
    /// Stepparents the parent waits on in reverse.
    type1: BTreeSet<Vertex>,
    /// Members of `type1` whose registration the parent has not confirmed.
    held: BTreeSet<Vertex>,
    /// Children of stepparents this vertex waits on in reverse, mapped to
    /// that stepparent.
    type2: BTreeMap<Vertex, Vertex>,
    /// Members of `type2` whose registration the parent has not confirmed.
    type2_unconfirmed: BTreeMap<Vertex, Vertex>,
    stepparent_colors: BTreeMap<Vertex, Color>,
    stepparent_tokens: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

#[derive(Debug, Clone)]
pub struct Agent {
    id: Vertex,
    level: usize,
    color: Option<Color>,
    acquire: Option<Acquire>,
    assign: Option<Assign>,
    report: Report,
    /// Tokens already announced.
    forwarded: BTreeSet<Vertex>,
}

impl Agent {
    pub fn new(id: Vertex, kin: &Kinship, levels: &[usize]) -> Self {
        let is_root = kin.parent(id).is_none();
        let acquire = (!is_root).then(|| Acquire {
            phase: Phase::Waiting,
            excluded: BTreeSet::new(),
            awaiting: kin.stepchildren(id).iter().map(|&x| (x, id)).collect(),
            late: BTreeSet::new(),
            unconfirmed: BTreeMap::new(),
        });
        let children = kin.children(id);
        let assign = (!children.is_empty()).then(|| Assign {
            forbidden: BTreeSet::new(),
            child_excluded: BTreeMap::new(),
            requested: BTreeSet::new(),
            reverse: BTreeMap::new(),
            uncolored_stepchildren: kin.stepchildren(id).iter().copied().collect(),
            awaiting: BTreeMap::new(),
            unassigned: children.iter().copied().collect(),
            reversed: BTreeSet::new(),
            pending: BTreeSet::new(),
            announced: BTreeMap::new(),
            child_tokens: BTreeMap::new(),
            finished: false,
        });
        Self {
            id,
            level: levels[id],
            color: None,
            acquire,
            assign,
            report: Report::default(),
            forwarded: BTreeSet::new(),
        }
    }

    pub fn id(&self) -> Vertex {
        self.id
    }

    pub fn color(&self) -> Option<Color> {
        self.color
    }

    /// True once this vertex holds a color.
    pub fn is_colored(&self) -> bool {
        self.color.is_some()
    }

    pub fn start(&mut self, ctx: &mut Ctx<'_>) -> Result<()> {
        let v = self.id;
        if self.acquire.is_none() {
            self.color = Some(0);
            ctx.events.push(AgentEvent::Colored { vertex: v, color: 0 });
            ctx.send_all(v, ctx.kin.children(v), &Payload::RptCol { color: Some(0), waits_on: v });
        } else {
            self.forwarded.insert(v);
            let unknown = Payload::RptCol { color: None, waits_on: v };
            ctx.send_all(v, ctx.kin.children(v), &unknown);
            self.announce(v, ctx, &unknown);
            self.acquire_progress(ctx);
        }
        self.assign_step(ctx)
    }

    pub fn handle(&mut self, msg: Message, ctx: &mut Ctx<'_>) -> Result<()> {
        let v = self.id;
        let Some(rel) = ctx.kin.relation(v, msg.src) else {
            ctx.events.push(AgentEvent::Dropped);
            return Ok(());
        };
        match (rel, &msg.payload, msg.echo) {
            (Kin::Child, Payload::ReqCol { .. } | Payload::RptCol { .. } | Payload::DepPut { .. }, false)
            | (Kin::Stepchild, Payload::RptCol { .. }, false)
            | (Kin::Stepchild, Payload::DepPut { .. }, true) => return self.assign_message(msg, rel, ctx),
            (Kin::Child | Kin::Stepchild, Payload::RptPar { color, waits_on }, false) => {
                self.acquire_report(msg.src, rel, *color, *waits_on, ctx)
            }
            (Kin::Child, Payload::DepReq { waits_on }, false) => self.acquire_register(msg.src, *waits_on, ctx),
            (Kin::Parent, Payload::PutCol { vertex, color: Some(k) }, false) if *vertex == v => {
                self.acquire_colored(*k, ctx)
            }
            (Kin::Parent | Kin::Stepparent, _, _) => self.report_message(msg, rel, ctx),
            _ => ctx.events.push(AgentEvent::Dropped),
        }
        Ok(())
    }

    // Tokens.

    /// Sends a token of this vertex to every neighbor that may pass it on to
    /// a vertex waiting on this one. Children get it as DEP-REQ from the
    /// caller.
    fn announce(&self, v: Vertex, ctx: &mut Ctx<'_>, token: &Payload) {
        ctx.send_all(v, ctx.kin.stepparents(v), token);
        if let Some(parent) = ctx.kin.parent(v) {
            ctx.send(v, parent, token.clone());
        }
        ctx.send_all(v, ctx.kin.stepchildren(v), token);
    }

    /// This vertex learned that it waits on `w`; passes it on once if `w` is
    /// smaller.
    fn relay(&mut self, w: Vertex, ctx: &mut Ctx<'_>) {
        let v = self.id;
        if self.color.is_some() || self.acquire.is_none() || w >= v || !self.forwarded.insert(w) {
            return;
        }
        ctx.send_all(v, ctx.kin.children(v), &Payload::DepReq { waits_on: w });
        self.announce(v, ctx, &Payload::RptCol { color: None, waits_on: w });
    }

    // Acquiring this vertex's own color.

    fn acquire_progress(&mut self, ctx: &mut Ctx<'_>) {
        let v = self.id;
        let Some(acq) = self.acquire.as_mut() else { return };
        if acq.phase == Phase::Waiting && acq.awaiting.is_empty() {
            acq.phase = Phase::Requested;
            let excluded = acq.excluded.iter().copied().collect();
            let parent = ctx.kin.parent(v).expect("non-root has a parent");
            ctx.send(v, parent, Payload::ReqCol { excluded });
        }
    }

    /// RPT-PAR from a stepchild reports the color of (or a token of) that
    /// stepchild's parent; from a child it reports on a stepparent of the
    /// child this vertex waits on in reverse.
    fn acquire_report(&mut self, x: Vertex, rel: Kin, color: Option<Color>, w: Vertex, ctx: &mut Ctx<'_>) {
        let v = self.id;
        let Some(acq) = self.acquire.as_mut() else {
            ctx.events.push(AgentEvent::Dropped);
            return;
        };
        let mut learned = None;
        match (acq.phase, rel, color) {
            (Phase::Waiting, Kin::Stepchild, Some(k)) => {
                acq.excluded.insert(k);
                acq.awaiting.remove(&x);
            }
            (Phase::Waiting, Kin::Stepchild, None) => {
                if let Some(slot) = acq.awaiting.get_mut(&x) {
                    if w == v {
                        acq.awaiting.remove(&x);
                        ctx.events.push(AgentEvent::CycleBreak {
                            vertex: v,
                            break_type: BreakType::Request,
                        });
                    } else {
                        *slot = w;
                        learned = Some(w);
                    }
                }
            }
            (Phase::Waiting, Kin::Child, Some(k)) => {
                acq.excluded.insert(k);
                acq.awaiting.remove(&w);
            }
            (Phase::Requested, Kin::Child, Some(k)) => {
                if acq.late.remove(&w) {
                    let parent = ctx.kin.parent(v).expect("non-root has a parent");
                    ctx.send(v, parent, Payload::RptCol { color: Some(k), waits_on: w });
                }
            }
            (Phase::Waiting | Phase::Requested, Kin::Child, None) => learned = Some(w),
            _ => ctx.events.push(AgentEvent::Dropped),
        }
        if let Some(w) = learned {
            self.relay(w, ctx);
        }
        self.acquire_progress(ctx);
    }

    /// A child asks this vertex to wait on its stepparent `w` in reverse.
    fn acquire_register(&mut self, y: Vertex, w: Vertex, ctx: &mut Ctx<'_>) {
        let v = self.id;
        let Some(acq) = self.acquire.as_mut() else {
            ctx.echo(v, y, Payload::DepReq { waits_on: w });
            return;
        };
        match acq.phase {
            Phase::Waiting => {
                acq.awaiting.insert(w, w);
                ctx.echo(v, y, Payload::DepReq { waits_on: w });
                self.relay(w, ctx);
            }
            Phase::Requested => {
                if let Some(waiting) = acq.unconfirmed.get_mut(&w) {
                    waiting.push(y);
                } else if acq.late.contains(&w) {
                    ctx.echo(v, y, Payload::DepReq { waits_on: w });
                } else {
                    // Too late to exclude `w` ourselves: the parent must hold
                    // our assignment until `w` is colored.
                    acq.late.insert(w);
                    acq.unconfirmed.insert(w, vec![y]);
                    let parent = ctx.kin.parent(v).expect("non-root has a parent");
                    ctx.send(v, parent, Payload::DepPut { waits_on: w });
                    self.relay(w, ctx);
                }
            }
            Phase::Done => ctx.echo(v, y, Payload::DepReq { waits_on: w }),
        }
    }

    fn acquire_confirmed(&mut self, w: Vertex, ctx: &mut Ctx<'_>) {
        let v = self.id;
        let waiting = self
            .acquire
            .as_mut()
            .and_then(|acq| acq.unconfirmed.remove(&w))
            .unwrap_or_default();
        if waiting.is_empty() {
            ctx.events.push(AgentEvent::Dropped);
        }
        for y in waiting {
            ctx.echo(v, y, Payload::DepReq { waits_on: w });
        }
    }

    fn acquire_colored(&mut self, k: Color, ctx: &mut Ctx<'_>) {
        let v = self.id;
        let Some(acq) = self.acquire.as_mut() else { return };
        if acq.phase != Phase::Requested {
            ctx.events.push(AgentEvent::Dropped);
            return;
        }
        acq.phase = Phase::Done;
        acq.late.clear();
        self.color = Some(k);
        ctx.events.push(AgentEvent::Colored { vertex: v, color: k });
        let report = Payload::RptCol { color: Some(k), waits_on: v };
        ctx.send_all(v, ctx.kin.children(v), &report);
        ctx.send_all(v, ctx.kin.stepchildren(v), &report);
        ctx.send_all(v, ctx.kin.stepparents(v), &report);
    }

    // Assigning colors to children.

    fn assign_message(&mut self, msg: Message, rel: Kin, ctx: &mut Ctx<'_>) -> Result<()> {
        let v = self.id;
        let Some(asg) = self.assign.as_mut() else {
            ctx.events.push(AgentEvent::Dropped);
            return Ok(());
        };
        let x = msg.src;
        match (rel, msg.payload) {
            (Kin::Child, Payload::ReqCol { excluded }) => {
                asg.child_excluded.entry(x).or_default().extend(excluded);
                asg.requested.insert(x);
            }
            // Reverse report: `w`, which child `x` waits for, has color `k`.
            (Kin::Child, Payload::RptCol { color: Some(k), waits_on: w }) => {
                if asg.unassigned.contains(&x) {
                    asg.child_excluded.entry(x).or_default().insert(k);
                    if let Some(set) = asg.reverse.get_mut(&x) {
                        set.remove(&w);
                    }
                }
            }
            (Kin::Child, Payload::RptCol { color: None, waits_on: t }) => {
                if asg.child_tokens.entry(x).or_default().insert(t) {
                    for &s in &asg.uncolored_stepchildren {
                        if asg.reversed.contains(&(x, s)) || asg.pending.contains(&(x, s)) {
                            ctx.send(v, s, Payload::DepReq { waits_on: t });
                        }
                    }
                }
            }
            (Kin::Child, Payload::DepPut { waits_on: w }) => {
                if asg.unassigned.contains(&x) {
                    asg.reverse.entry(x).or_default().insert(w);
                }
                ctx.echo(v, x, Payload::DepPut { waits_on: w });
            }
            (Kin::Stepchild, Payload::RptCol { color: Some(k), .. }) => {
                if asg.uncolored_stepchildren.remove(&x) {
                    asg.awaiting.remove(&x);
                    asg.forbidden.insert(k);
                }
            }
            (Kin::Stepchild, Payload::RptCol { color: None, waits_on: t }) => {
                if asg.uncolored_stepchildren.contains(&x) {
                    Self::stepchild_token(v, asg, x, t, ctx);
                }
            }
            (Kin::Stepchild, Payload::DepPut { waits_on: z }) => {
                if asg.pending.remove(&(z, x)) {
                    asg.reversed.insert((z, x));
                } else {
                    ctx.events.push(AgentEvent::Dropped);
                }
            }
            _ => ctx.events.push(AgentEvent::Dropped),
        }
        self.assign_step(ctx)
    }

    /// Uncolored stepchild `s` waits on `t`. If `t` is one of our unassigned
    /// children, that child and `s` wait on each other: `s`'s parent takes
    /// over the dependence in reverse. Otherwise the token goes on to every
    /// child still waiting on `s`.
    fn stepchild_token(v: Vertex, asg: &mut Assign, s: Vertex, t: Vertex, ctx: &mut Ctx<'_>) {
        asg.awaiting.insert(s, t);
        if asg.unassigned.contains(&t) && !asg.reversed.contains(&(t, s)) && asg.pending.insert((t, s)) {
            ctx.send(v, s, Payload::DepPut { waits_on: t });
            ctx.events.push(AgentEvent::CycleBreak {
                vertex: v,
                break_type: BreakType::Put,
            });
            for &tok in asg.child_tokens.get(&t).into_iter().flatten() {
                ctx.send(v, s, Payload::DepReq { waits_on: tok });
            }
        }
        for &z in &asg.unassigned {
            if z != t
                && !asg.reversed.contains(&(z, s))
                && !asg.pending.contains(&(z, s))
                && asg.announced.entry(z).or_default().insert(t)
            {
                ctx.send(v, z, Payload::DepPut { waits_on: t });
            }
        }
    }

    fn assign_step(&mut self, ctx: &mut Ctx<'_>) -> Result<()> {
        let v = self.id;
        let child_level = self.level + 1;
        let Some(asg) = self.assign.as_mut() else { return Ok(()) };
        if asg.finished {
            return Ok(());
        }
        let ready: Vec<_> = asg
            .unassigned
            .iter()
            .copied()
            .filter(|&z| {
                asg.requested.contains(&z)
                    && asg.reverse.get(&z).is_none_or(BTreeSet::is_empty)
                    && asg.uncolored_stepchildren.iter().all(|&s| asg.reversed.contains(&(z, s)))
            })
            .collect();
        for z in ready {
            let excluded = asg.child_excluded.get(&z);
            let k = palette::first_free(child_level, ctx.d, ctx.cap, |k| {
                asg.forbidden.contains(&k) || excluded.is_some_and(|e| e.contains(&k))
            })
            .ok_or(Error::PaletteExhausted {
                vertex: z,
                cap: ctx.cap,
            })?;
            let put = Payload::PutCol {
                vertex: z,
                color: Some(k),
            };
            ctx.send(v, z, put.clone());
            ctx.send_all(v, ctx.kin.stepchildren(v), &put);
            asg.unassigned.remove(&z);
            asg.forbidden.insert(k);
        }
        if asg.unassigned.is_empty() {
            asg.finished = true;
            ctx.send_all(
                v,
                ctx.kin.stepchildren(v),
                &Payload::PutCol {
                    vertex: v,
                    color: None,
                },
            );
        }
        Ok(())
    }

    // Relaying reports from the parent and stepparents.

    fn report_message(&mut self, msg: Message, rel: Kin, ctx: &mut Ctx<'_>) {
        let v = self.id;
        let Some(parent) = ctx.kin.parent(v) else {
            ctx.events.push(AgentEvent::Dropped);
            return;
        };
        let x = msg.src;
        match (rel, msg.payload, msg.echo) {
            (Kin::Parent, Payload::DepReq { waits_on: t }, false)
            | (Kin::Parent, Payload::RptCol { color: None, waits_on: t }, false) => {
                self.parent_token(t, parent, ctx);
            }
            (Kin::Parent, Payload::DepReq { waits_on: w }, true) => {
                if self.report.held.remove(&w) && !self.report.stepparent_colors.contains_key(&w) {
                    ctx.send(v, w, Payload::RptPar { color: None, waits_on: w });
                }
            }
            (Kin::Parent, Payload::RptCol { color: Some(k), waits_on }, false) => {
                let relay = Payload::RptPar {
                    color: Some(k),
                    waits_on,
                };
                ctx.send_all(v, ctx.kin.stepparents(v), &relay);
            }
            (Kin::Parent, Payload::DepPut { waits_on: t }, false) => self.relay(t, ctx),
            (Kin::Parent, Payload::DepPut { waits_on: w }, true) => {
                if let Some(q) = self.report.type2_unconfirmed.remove(&w) {
                    ctx.echo(v, q, Payload::DepPut { waits_on: w });
                } else {
                    self.acquire_confirmed(w, ctx);
                }
            }
            (Kin::Stepparent, Payload::RptCol { color: Some(k), .. }, false) => {
                self.report.stepparent_colors.insert(x, k);
                if self.report.type1.remove(&x) {
                    ctx.send(v, parent, Payload::RptPar { color: Some(k), waits_on: x });
                }
            }
            (Kin::Stepparent, Payload::RptCol { color: None, waits_on: t }, false) => {
                let fresh = self.report.stepparent_tokens.entry(x).or_default().insert(t);
                if fresh && self.report.type1.contains(&x) {
                    ctx.send(v, parent, Payload::RptPar { color: None, waits_on: t });
                }
            }
            // Stepparent `x` hands us its dependence on its child `z`.
            (Kin::Stepparent, Payload::DepPut { waits_on: z }, false) => {
                if self.color.is_some() {
                    ctx.echo(v, x, Payload::DepPut { waits_on: z });
                } else {
                    self.report.type2.insert(z, x);
                    self.report.type2_unconfirmed.insert(z, x);
                    ctx.send(v, parent, Payload::DepPut { waits_on: z });
                }
            }
            (Kin::Stepparent, Payload::DepReq { waits_on: t }, false) => self.relay(t, ctx),
            (Kin::Stepparent, Payload::PutCol { vertex: z, color: Some(k) }, false)
                if self.report.type2.get(&z) == Some(&x) =>
            {
                self.report.type2.remove(&z);
                if self.color.is_none() {
                    ctx.send(v, parent, Payload::RptCol { color: Some(k), waits_on: z });
                }
            }
            _ => ctx.events.push(AgentEvent::Dropped),
        }
    }

    /// The parent waits on `t`; pass the token on to the stepparents, which
    /// wait on the parent. A stepparent receiving its own token breaks its
    /// dependence on the parent, so the parent first takes it over in
    /// reverse.
    fn parent_token(&mut self, t: Vertex, parent: Vertex, ctx: &mut Ctx<'_>) {
        let v = self.id;
        let mut skip = None;
        if ctx.kin.relation(v, t) == Some(Kin::Stepparent) && !self.report.stepparent_colors.contains_key(&t) {
            if self.report.type1.insert(t) {
                self.report.held.insert(t);
                ctx.send(v, parent, Payload::DepReq { waits_on: t });
                for &tok in self.report.stepparent_tokens.get(&t).into_iter().flatten() {
                    ctx.send(v, parent, Payload::RptPar { color: None, waits_on: tok });
                }
            }
            if self.report.held.contains(&t) {
                skip = Some(t);
            }
        }
        let relay = Payload::RptPar {
            color: None,
            waits_on: t,
        };
        for &s in ctx.kin.stepparents(v) {
            if Some(s) != skip {
                ctx.send(v, s, relay.clone());
            }
        }
    }
}
