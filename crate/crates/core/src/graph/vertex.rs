//! Vertex labels and their canonical text forms.
//!
//! | variant        | text form         |
//! |----------------|-------------------|
//! | lattice point  | `z:(c1,...,cd)`   |
//! | planar point   | `p:(x,y)`         |
//! | ladder point   | `lad:(i,s)`       |
//! | tail-graph     | `v:i`, `w:i`, `u:i` |
//! | tree path      | `t:[i1,...,ik]`   |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Role of a vertex in a finite graph with a tail, or in the infinite comb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TailRole {
    /// Vertex of the finite part (cycle, clique, or comb spine).
    V,
    /// Tooth of a comb.
    W,
    /// Vertex of the infinite tail; indices start at 1.
    U,
}

impl TailRole {
    fn prefix(self) -> &'static str {
        match self {
            TailRole::V => "v",
            TailRole::W => "w",
            TailRole::U => "u",
        }
    }
}

/// Structured, family-specific vertex label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    LatticePoint(Vec<i64>),
    PlanarPoint(i64, i64),
    LadderPoint { i: u64, side: u8 },
    TailVertex { role: TailRole, index: u64 },
    /// Root-to-vertex child indices; the empty path is the root.
    TreePath(Vec<u32>),
}

impl VertexId {
    pub fn root() -> Self {
        VertexId::TreePath(Vec::new())
    }

    pub fn v(index: u64) -> Self {
        VertexId::TailVertex { role: TailRole::V, index }
    }

    pub fn w(index: u64) -> Self {
        VertexId::TailVertex { role: TailRole::W, index }
    }

    pub fn u(index: u64) -> Self {
        VertexId::TailVertex { role: TailRole::U, index }
    }

    pub fn origin(dim: usize) -> Self {
        VertexId::LatticePoint(vec![0; dim])
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::LatticePoint(c) => write!(f, "z:({})", join(c)),
            VertexId::PlanarPoint(x, y) => write!(f, "p:({x},{y})"),
            VertexId::LadderPoint { i, side } => write!(f, "lad:({i},{side})"),
            VertexId::TailVertex { role, index } => write!(f, "{}:{index}", role.prefix()),
            VertexId::TreePath(p) => write!(f, "t:[{}]", join(p)),
        }
    }
}

fn bracketed<'a>(body: &'a str, open: char, close: char, text: &str) -> Result<&'a str> {
    body.strip_prefix(open)
        .and_then(|b| b.strip_suffix(close))
        .ok_or_else(|| Error::Encoding(format!("expected {open}...{close} in {text:?}")))
}

fn parse_list<T: FromStr>(inner: &str, text: &str) -> Result<Vec<T>> {
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| Error::Encoding(format!("bad component {s:?} in {text:?}")))
        })
        .collect()
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (tag, body) = text
            .split_once(':')
            .ok_or_else(|| Error::Encoding(format!("missing ':' in {text:?}")))?;
        match tag {
            "z" => {
                let coords: Vec<i64> = parse_list(bracketed(body, '(', ')', text)?, text)?;
                if coords.is_empty() {
                    return Err(Error::Encoding(format!("lattice point needs coordinates: {text:?}")));
                }
                Ok(VertexId::LatticePoint(coords))
            }
            "p" => match parse_list::<i64>(bracketed(body, '(', ')', text)?, text)?.as_slice() {
                [x, y] => Ok(VertexId::PlanarPoint(*x, *y)),
                _ => Err(Error::Encoding(format!("planar point needs two coordinates: {text:?}"))),
            },
            "lad" => match parse_list::<u64>(bracketed(body, '(', ')', text)?, text)?.as_slice() {
                [i, s] if *s <= 1 => Ok(VertexId::LadderPoint { i: *i, side: *s as u8 }),
                _ => Err(Error::Encoding(format!("ladder point is (i,side) with side 0|1: {text:?}"))),
            },
            "v" | "w" | "u" => {
                let index: u64 = body
                    .parse()
                    .map_err(|_| Error::Encoding(format!("bad index in {text:?}")))?;
                let role = match tag {
                    "v" => TailRole::V,
                    "w" => TailRole::W,
                    _ => TailRole::U,
                };
                if role == TailRole::U && index == 0 {
                    return Err(Error::Encoding("tail vertices start at u:1".into()));
                }
                Ok(VertexId::TailVertex { role, index })
            }
            "t" => Ok(VertexId::TreePath(parse_list(bracketed(body, '[', ']', text)?, text)?)),
            _ => Err(Error::Encoding(format!("unknown vertex tag {tag:?}"))),
        }
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(VertexId::LatticePoint(vec![1, -2, 0]).to_string(), "z:(1,-2,0)");
        assert_eq!(VertexId::PlanarPoint(3, -1).to_string(), "p:(3,-1)");
        assert_eq!(VertexId::LadderPoint { i: 4, side: 1 }.to_string(), "lad:(4,1)");
        assert_eq!(VertexId::u(7).to_string(), "u:7");
        assert_eq!(VertexId::root().to_string(), "t:[]");
        assert_eq!(VertexId::TreePath(vec![0, 2]).to_string(), "t:[0,2]");
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "z:()", "z:1,2", "p:(1)", "lad:(1,2)", "u:0", "x:3", "t:(1)", "v:-1", "t:[a]"] {
            assert!(bad.parse::<VertexId>().is_err(), "{bad}");
        }
    }

    fn any_vertex() -> impl Strategy<Value = VertexId> {
        prop_oneof![
            prop::collection::vec(-1000i64..1000, 1..5).prop_map(VertexId::LatticePoint),
            (any::<i32>(), any::<i32>()).prop_map(|(x, y)| VertexId::PlanarPoint(x as i64, y as i64)),
            (0u64..10_000, 0u8..2).prop_map(|(i, side)| VertexId::LadderPoint { i, side }),
            (0u64..10_000).prop_map(VertexId::v),
            (0u64..10_000).prop_map(VertexId::w),
            (1u64..10_000).prop_map(VertexId::u),
            prop::collection::vec(0u32..50, 0..8).prop_map(VertexId::TreePath),
        ]
    }

    proptest! {
        #[test]
        fn text_form_round_trips(v in any_vertex()) {
            let text = v.to_string();
            prop_assert_eq!(text.parse::<VertexId>().unwrap(), v.clone());
            let json = serde_json::to_string(&v).unwrap();
            prop_assert_eq!(serde_json::from_str::<VertexId>(&json).unwrap(), v);
        }
    }
}
