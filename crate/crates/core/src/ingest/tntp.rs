//! The TNTP text format.
//!
//! Grammar accepted here:
//!
//! * a metadata block of `<TAG> value` lines closed by `<END OF METADATA>`;
//!   unknown tags are ignored;
//! * `~` starts a comment that runs to the end of the line;
//! * network rows: `init term capacity length fft b power [speed toll type] ;`
//!   separated by any whitespace. Speed, toll and type are parsed and kept
//!   but play no role in pricing. `<FIRST THRU NODE>` is kept but ignored;
//! * trip rows: `Origin o` headers followed by `dest : volume ;` entries, any
//!   number per line.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance between the header total and the parsed trip volumes.
pub const TOTAL_FLOW_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub from: usize,
    pub to: usize,
    pub capacity: f64,
    pub length: f64,
    pub free_flow_time: f64,
    pub b: f64,
    pub power: f64,
    pub speed: f64,
    pub toll: f64,
    pub link_type: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TntpNetwork {
    pub zones: usize,
    pub nodes: usize,
    pub first_thru_node: usize,
    pub links: Vec<Link>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripTable {
    pub zones: usize,
    pub total: f64,
    /// origin -> destination -> volume, zero entries included.
    pub trips: BTreeMap<usize, BTreeMap<usize, f64>>,
}

impl TripTable {
    /// `(origin, destination, volume)` for every entry with positive volume.
    pub fn positive_pairs(&self) -> Vec<(usize, usize, f64)> {
        self.trips
            .iter()
            .flat_map(|(&o, row)| row.iter().filter(|(_, &v)| v > 0.0).map(move |(&d, &v)| (o, d, v)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParseErrorKind {
    MalformedHeader(String),
    MissingMetadata(&'static str),
    MissingEndOfMetadata,
    CountMismatch {
        what: &'static str,
        header: usize,
        found: usize,
    },
    TotalMismatch {
        header: f64,
        found: f64,
    },
    NonPositiveCapacity(f64),
    NegativeValue {
        field: &'static str,
        value: f64,
    },
    BadNumber(String),
    MissingFields {
        expected: usize,
        found: usize,
    },
    NodeOutOfRange(usize),
    EntryBeforeOrigin,
    MalformedEntry(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MalformedHeader(s) => write!(f, "malformed metadata line `{s}`"),
            ParseErrorKind::MissingMetadata(tag) => write!(f, "missing metadata <{tag}>"),
            ParseErrorKind::MissingEndOfMetadata => f.write_str("missing <END OF METADATA>"),
            ParseErrorKind::CountMismatch { what, header, found } => {
                write!(f, "count mismatch: header declares {header} {what}, found {found}")
            }
            ParseErrorKind::TotalMismatch { header, found } => {
                write!(f, "total flow mismatch: header declares {header}, found {found}")
            }
            ParseErrorKind::NonPositiveCapacity(c) => write!(f, "capacity must be positive, got {c}"),
            ParseErrorKind::NegativeValue { field, value } => write!(f, "negative {field} {value}"),
            ParseErrorKind::BadNumber(s) => write!(f, "bad number `{s}`"),
            ParseErrorKind::MissingFields { expected, found } => {
                write!(f, "expected at least {expected} fields, found {found}")
            }
            ParseErrorKind::NodeOutOfRange(n) => write!(f, "node {n} out of range"),
            ParseErrorKind::EntryBeforeOrigin => f.write_str("trip entry before any `Origin` line"),
            ParseErrorKind::MalformedEntry(s) => write!(f, "malformed trip entry `{s}`"),
        }
    }
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn strip_comment(line: &str) -> &str {
    line.split('~').next().unwrap_or("")
}

struct Metadata {
    tags: BTreeMap<String, (usize, String)>,
    /// Number of lines consumed, including `<END OF METADATA>`.
    end: usize,
}

impl Metadata {
    fn read(text: &str) -> Result<Self, ParseError> {
        let mut tags = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('~') {
                continue;
            }
            if !line.starts_with('<') {
                return Err(err(i + 1, ParseErrorKind::MissingEndOfMetadata));
            }
            let close = line
                .find('>')
                .ok_or_else(|| err(i + 1, ParseErrorKind::MalformedHeader(line.to_string())))?;
            let tag = line[1..close].trim().to_ascii_uppercase();
            if tag == "END OF METADATA" {
                return Ok(Metadata { tags, end: i + 1 });
            }
            tags.insert(tag, (i + 1, line[close + 1..].trim().to_string()));
        }
        Err(err(text.lines().count(), ParseErrorKind::MissingEndOfMetadata))
    }

    fn get<T: std::str::FromStr>(&self, tag: &'static str) -> Result<Option<T>, ParseError> {
        match self.tags.get(tag) {
            None => Ok(None),
            Some((line, v)) => {
                let v = strip_comment(v).trim();
                v.parse()
                    .map(Some)
                    .map_err(|_| err(*line, ParseErrorKind::MalformedHeader(format!("<{tag}> {v}"))))
            }
        }
    }

    fn require<T: std::str::FromStr>(&self, tag: &'static str) -> Result<T, ParseError> {
        self.get(tag)?
            .ok_or_else(|| err(self.end, ParseErrorKind::MissingMetadata(tag)))
    }
}

fn number(line: usize, s: &str) -> Result<f64, ParseError> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| err(line, ParseErrorKind::BadNumber(s.to_string())))
}

fn node(line: usize, s: &str, nodes: usize) -> Result<usize, ParseError> {
    let n: usize = s
        .parse()
        .map_err(|_| err(line, ParseErrorKind::BadNumber(s.to_string())))?;
    if n == 0 || n > nodes {
        return Err(err(line, ParseErrorKind::NodeOutOfRange(n)));
    }
    Ok(n)
}

pub fn parse_network(text: &str) -> Result<TntpNetwork, ParseError> {
    let meta = Metadata::read(text)?;
    let nodes: usize = meta.require("NUMBER OF NODES")?;
    let declared: usize = meta.require("NUMBER OF LINKS")?;
    let zones: usize = meta.get("NUMBER OF ZONES")?.unwrap_or(nodes);
    let first_thru_node: usize = meta.get("FIRST THRU NODE")?.unwrap_or(1);

    let mut links = Vec::new();
    let mut last_line = meta.end;
    for (i, raw) in text.lines().enumerate().skip(meta.end) {
        let lineno = i + 1;
        let body = strip_comment(raw).trim();
        let body = body.strip_suffix(';').unwrap_or(body).trim();
        if body.is_empty() {
            continue;
        }
        last_line = lineno;
        let fields: Vec<&str> = body.split_whitespace().filter(|f| *f != ";").collect();
        if fields.len() < 7 {
            return Err(err(
                lineno,
                ParseErrorKind::MissingFields {
                    expected: 7,
                    found: fields.len(),
                },
            ));
        }
        let from = node(lineno, fields[0], nodes)?;
        let to = node(lineno, fields[1], nodes)?;
        let capacity = number(lineno, fields[2])?;
        if capacity <= 0.0 {
            return Err(err(lineno, ParseErrorKind::NonPositiveCapacity(capacity)));
        }
        let mut values = [0.0; 4];
        for (j, field) in ["length", "free flow time", "b", "power"].into_iter().enumerate() {
            let v = number(lineno, fields[3 + j])?;
            if v < 0.0 {
                return Err(err(lineno, ParseErrorKind::NegativeValue { field, value: v }));
            }
            values[j] = v;
        }
        let opt = |j: usize| fields.get(j).map(|s| number(lineno, s)).transpose();
        let speed = opt(7)?.unwrap_or(0.0);
        let toll = opt(8)?.unwrap_or(0.0);
        let link_type = match fields.get(9) {
            Some(s) => s
                .parse()
                .map_err(|_| err(lineno, ParseErrorKind::BadNumber(s.to_string())))?,
            None => 0,
        };
        links.push(Link {
            from,
            to,
            capacity,
            length: values[0],
            free_flow_time: values[1],
            b: values[2],
            power: values[3],
            speed,
            toll,
            link_type,
        });
    }
    if links.len() != declared {
        return Err(err(
            last_line,
            ParseErrorKind::CountMismatch {
                what: "links",
                header: declared,
                found: links.len(),
            },
        ));
    }
    Ok(TntpNetwork {
        zones,
        nodes,
        first_thru_node,
        links,
    })
}

pub fn parse_trips(text: &str) -> Result<TripTable, ParseError> {
    let meta = Metadata::read(text)?;
    let zones: usize = meta.require("NUMBER OF ZONES")?;
    let total: f64 = meta.require("TOTAL OD FLOW")?;

    let mut trips: BTreeMap<usize, BTreeMap<usize, f64>> = BTreeMap::new();
    let mut origin: Option<usize> = None;
    let mut last_line = meta.end;
    for (i, raw) in text.lines().enumerate().skip(meta.end) {
        let lineno = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        last_line = lineno;
        if let Some(rest) = body.strip_prefix("Origin") {
            let o = node(lineno, rest.trim(), zones)?;
            trips.entry(o).or_default();
            origin = Some(o);
            continue;
        }
        let o = origin.ok_or_else(|| err(lineno, ParseErrorKind::EntryBeforeOrigin))?;
        for entry in body.split(';').map(str::trim).filter(|e| !e.is_empty()) {
            let (d, v) = entry
                .split_once(':')
                .ok_or_else(|| err(lineno, ParseErrorKind::MalformedEntry(entry.to_string())))?;
            let d = node(lineno, d.trim(), zones)?;
            let v = number(lineno, v.trim())?;
            if v < 0.0 {
                return Err(err(
                    lineno,
                    ParseErrorKind::NegativeValue {
                        field: "volume",
                        value: v,
                    },
                ));
            }
            trips.entry(o).or_default().insert(d, v);
        }
    }
    let found: f64 = trips.values().flat_map(|r| r.values()).sum();
    if (found - total).abs() > TOTAL_FLOW_TOL * total.abs().max(1.0) {
        return Err(err(last_line, ParseErrorKind::TotalMismatch { header: total, found }));
    }
    Ok(TripTable { zones, total, trips })
}

/// Parses a network file and a trip file.
pub fn parse_tntp(net_text: &str, trips_text: &str) -> Result<(TntpNetwork, TripTable), ParseError> {
    Ok((parse_network(net_text)?, parse_trips(trips_text)?))
}

pub fn write_network(net: &TntpNetwork) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "<NUMBER OF ZONES> {}", net.zones);
    let _ = writeln!(out, "<NUMBER OF NODES> {}", net.nodes);
    let _ = writeln!(out, "<FIRST THRU NODE> {}", net.first_thru_node);
    let _ = writeln!(out, "<NUMBER OF LINKS> {}", net.links.len());
    out.push_str("<END OF METADATA>\n\n");
    out.push_str("~\tinit_node\tterm_node\tcapacity\tlength\tfree_flow_time\tb\tpower\tspeed\ttoll\tlink_type\t;\n");
    for l in &net.links {
        let _ = writeln!(
            out,
            "\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t;",
            l.from, l.to, l.capacity, l.length, l.free_flow_time, l.b, l.power, l.speed, l.toll, l.link_type
        );
    }
    out
}

pub fn write_trips(table: &TripTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "<NUMBER OF ZONES> {}", table.zones);
    let _ = writeln!(out, "<TOTAL OD FLOW> {}", table.total);
    out.push_str("<END OF METADATA>\n");
    for (o, row) in &table.trips {
        let _ = write!(out, "\nOrigin {o}\n");
        for (i, (d, v)) in row.iter().enumerate() {
            let _ = write!(out, "{d:>5} : {v};");
            out.push(if i % 5 == 4 { '\n' } else { ' ' });
        }
        out.push('\n');
    }
    out
}
