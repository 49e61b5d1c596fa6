use serde::{Deserialize, Serialize};

use crate::coloring::Color;
use crate::graph::Vertex;

/// Protocol message payloads. A color of `None` is the unknown color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Payload {
    /// Excluded colors for the sender, addressed to its parent.
    ReqCol { excluded: Vec<Color> },
    /// `vertex` is assigned `color`. With `color: None` and `vertex` equal to
    /// the sender this is the end-of-assignment signal.
    PutCol { vertex: Vertex, color: Option<Color> },
    RptCol { color: Option<Color>, waits_on: Vertex },
    RptPar { color: Option<Color>, waits_on: Vertex },
    DepReq { waits_on: Vertex },
    DepPut { waits_on: Vertex },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MessageKind {
    #[serde(rename = "REQ-COL")]
    ReqCol,
    #[serde(rename = "PUT-COL")]
    PutCol,
    #[serde(rename = "RPT-COL")]
    RptCol,
    #[serde(rename = "RPT-PAR")]
    RptPar,
    #[serde(rename = "DEP-REQ")]
    DepReq,
    #[serde(rename = "DEP-PUT")]
    DepPut,
}

impl MessageKind {
    pub const ALL: [MessageKind; 6] = [
        MessageKind::ReqCol,
        MessageKind::PutCol,
        MessageKind::RptCol,
        MessageKind::RptPar,
        MessageKind::DepReq,
        MessageKind::DepPut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MessageKind::ReqCol => "REQ-COL",
            MessageKind::PutCol => "PUT-COL",
            MessageKind::RptCol => "RPT-COL",
            MessageKind::RptPar => "RPT-PAR",
            MessageKind::DepReq => "DEP-REQ",
            MessageKind::DepPut => "DEP-PUT",
        }
    }
}

impl std::fmt::Display for MessageKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl Payload {
    pub fn kind(&self) -> MessageKind {
        match self {
            Payload::ReqCol { .. } => MessageKind::ReqCol,
            Payload::PutCol { .. } => MessageKind::PutCol,
            Payload::RptCol { .. } => MessageKind::RptCol,
            Payload::RptPar { .. } => MessageKind::RptPar,
            Payload::DepReq { .. } => MessageKind::DepReq,
            Payload::DepPut { .. } => MessageKind::DepPut,
        }
    }
}

/// A message in flight. `echo` marks the confirmation leg of an
/// acknowledged send: the receiver returns the same payload once it has
/// acted on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub src: Vertex,
    pub dst: Vertex,
    pub echo: bool,
    pub payload: Payload,
}

impl Message {
    pub fn kind(&self) -> MessageKind {
        self.payload.kind()
    }
}
