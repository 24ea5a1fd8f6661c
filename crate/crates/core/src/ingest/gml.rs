//! Minimal GML reader: nested `key value` lists with integer, float and
//! quoted-string values. Nodes are identified by `label` when present,
//! otherwise by `id`; edges need `source`, `target` and an integer `sign`.
//! Graphs not declared `directed 1` are symmetrized.

use std::collections::HashMap;
use std::io::Read;

use super::{symmetrize, IngestError};
use crate::graph::{GraphBuilder, NodeId, Sign, SignedDigraph};

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Int(i64),
    Float(f64),
    Str(String),
    List(Vec<(String, Value)>),
}

impl Value {
    fn as_key(&self) -> Option<String> {
        match self {
            Value::Int(i) => Some(i.to_string()),
            Value::Str(s) => Some(s.clone()),
            Value::Float(f) => Some(f.to_string()),
            Value::List(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Key(String),
    Int(i64),
    Float(f64),
    Str(String),
    Open,
    Close,
}

fn malformed(msg: impl Into<String>) -> IngestError {
    IngestError::MalformedGml(msg.into())
}

fn tokenize(text: &str) -> Result<Vec<Token>, IngestError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
        } else if c == '[' {
            chars.next();
            out.push(Token::Open);
        } else if c == ']' {
            chars.next();
            out.push(Token::Close);
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            let mut closed = false;
            for (_, c) in chars.by_ref() {
                if c == '"' {
                    closed = true;
                    break;
                }
                s.push(c);
            }
            if !closed {
                return Err(malformed(format!("unterminated string at byte {i}")));
            }
            out.push(Token::Str(s));
        } else {
            let mut word = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_whitespace() || c == '[' || c == ']' || c == '"' {
                    break;
                }
                word.push(c);
                chars.next();
            }
            if word.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
                out.push(Token::Key(word));
            } else if let Ok(v) = word.parse::<i64>() {
                out.push(Token::Int(v));
            } else if let Ok(v) = word.parse::<f64>() {
                out.push(Token::Float(v));
            } else {
                return Err(malformed(format!("unexpected token {word:?}")));
            }
        }
    }
    Ok(out)
}

fn parse_list(
    tokens: &[Token],
    pos: &mut usize,
    nested: bool,
) -> Result<Vec<(String, Value)>, IngestError> {
    let mut items = Vec::new();
    loop {
        match tokens.get(*pos) {
            None if nested => return Err(malformed("missing ']'")),
            None => return Ok(items),
            Some(Token::Close) if nested => {
                *pos += 1;
                return Ok(items);
            }
            Some(Token::Key(k)) => {
                *pos += 1;
                let value = match tokens.get(*pos) {
                    Some(Token::Int(v)) => Value::Int(*v),
                    Some(Token::Float(v)) => Value::Float(*v),
                    Some(Token::Str(s)) => Value::Str(s.clone()),
                    Some(Token::Open) => {
                        *pos += 1;
                        let inner = parse_list(tokens, pos, true)?;
                        items.push((k.clone(), Value::List(inner)));
                        continue;
                    }
                    other => return Err(malformed(format!("key {k} has no value ({other:?})"))),
                };
                *pos += 1;
                items.push((k.clone(), value));
            }
            Some(other) => return Err(malformed(format!("expected a key, found {other:?}"))),
        }
    }
}

fn get<'a>(items: &'a [(String, Value)], key: &str) -> Option<&'a Value> {
    items.iter().find(|(k, _)| k == key).map(|(_, v)| v)
}

pub fn parse_gml<R: Read>(mut reader: R) -> Result<SignedDigraph, IngestError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let tokens = tokenize(&text)?;
    let mut pos = 0;
    let top = parse_list(&tokens, &mut pos, false)?;
    let graph = match get(&top, "graph") {
        Some(Value::List(items)) => items,
        _ => return Err(malformed("no graph [ ... ] block")),
    };
    let directed = matches!(get(graph, "directed"), Some(Value::Int(1)));

    let mut builder = GraphBuilder::new();
    let mut names: HashMap<String, NodeId> = HashMap::new();
    for (key, value) in graph {
        if key != "node" {
            continue;
        }
        let Value::List(attrs) = value else {
            return Err(malformed("node is not a list"));
        };
        let id = get(attrs, "id")
            .and_then(Value::as_key)
            .ok_or_else(|| malformed("node without id"))?;
        let name = get(attrs, "label")
            .and_then(Value::as_key)
            .unwrap_or_else(|| id.clone());
        let name = NodeId::new(name);
        if names.insert(id.clone(), name.clone()).is_some() {
            return Err(malformed(format!("duplicate node id {id}")));
        }
        builder.node(name);
    }
    for (key, value) in graph {
        if key != "edge" {
            continue;
        }
        let Value::List(attrs) = value else {
            return Err(malformed("edge is not a list"));
        };
        let endpoint = |k: &str| -> Result<NodeId, IngestError> {
            let id = get(attrs, k)
                .and_then(Value::as_key)
                .ok_or_else(|| malformed(format!("edge without {k}")))?;
            names
                .get(&id)
                .cloned()
                .ok_or_else(|| malformed(format!("edge {k} {id} is not a declared node")))
        };
        let source = endpoint("source")?;
        let target = endpoint("target")?;
        let sign = match get(attrs, "sign") {
            Some(Value::Int(v)) => {
                Sign::from_int(*v).map_err(|_| IngestError::InvalidSign(v.to_string()))?
            }
            Some(Value::Float(f)) if *f == 1.0 || *f == -1.0 => Sign::of(*f).expect("nonzero"),
            Some(other) => return Err(IngestError::InvalidSign(format!("{other:?}"))),
            None => return Err(malformed("edge without sign")),
        };
        builder.edge(source, target, sign)?;
    }
    let g = builder.build();
    if directed {
        Ok(g)
    } else {
        Ok(symmetrize(&g)?)
    }
}
