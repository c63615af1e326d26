//! Network topology ingestion.
//!
//! Two input formats are supported: a MATPOWER `.m` subset (only the
//! `mpc.bus` and `mpc.branch` matrix blocks are read, everything electrical
//! is ignored) and a plain whitespace-separated edge list. Parsing keeps
//! out-of-service branches in the topology so inputs round-trip; the pattern
//! builder is what drops them.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    MalformedInput { line: usize, message: String },
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
}

fn malformed(line: usize, message: impl Into<String>) -> IngestError {
    IngestError::MalformedInput {
        line,
        message: message.into(),
    }
}

/// A transmission branch between two buses. Orientation is irrelevant for
/// sparsity purposes and is not preserved beyond the field names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Branch {
    pub from: i64,
    pub to: i64,
    pub in_service: bool,
}

/// Buses and branches of a power network, as parsed from an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkTopology {
    buses: Vec<i64>,
    branches: Vec<Branch>,
}

impl NetworkTopology {
    /// Validates the referential invariants: unique bus ids, every branch
    /// endpoint known, no self-loop branches.
    pub fn new(buses: Vec<i64>, branches: Vec<Branch>) -> Result<Self, IngestError> {
        let mut seen = BTreeSet::new();
        for &b in &buses {
            if !seen.insert(b) {
                return Err(IngestError::InvalidTopology(format!("duplicate bus id {b}")));
            }
        }
        for br in &branches {
            if br.from == br.to {
                return Err(IngestError::InvalidTopology(format!(
                    "self-loop branch at bus {}",
                    br.from
                )));
            }
            for end in [br.from, br.to] {
                if !seen.contains(&end) {
                    return Err(IngestError::InvalidTopology(format!(
                        "branch {}-{} references unknown bus {end}",
                        br.from, br.to
                    )));
                }
            }
        }
        Ok(NetworkTopology { buses, branches })
    }

    pub fn buses(&self) -> &[i64] {
        &self.buses
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn in_service_branches(&self) -> impl Iterator<Item = &Branch> {
        self.branches.iter().filter(|b| b.in_service)
    }
}

/// Parses the topology out of a MATPOWER M-file.
///
/// Reads bus ids from column 1 of `mpc.bus` and branch endpoints from
/// columns 1-2 of `mpc.branch`, with column 11 (BR_STATUS) deciding whether
/// the branch is in service. All other columns are skipped, so files from
/// different MATPOWER versions parse the same as long as those columns are
/// present.
pub fn parse_matpower(text: &str) -> Result<NetworkTopology, IngestError> {
    let bus_rows = extract_matrix(text, "mpc.bus")?;
    let branch_rows = extract_matrix(text, "mpc.branch")?;

    let mut buses = Vec::new();
    let mut bus_set = BTreeSet::new();
    for (line, row) in &bus_rows {
        if row.is_empty() {
            continue;
        }
        let id = integer_entry(row[0], *line, "bus id")?;
        if !bus_set.insert(id) {
            return Err(malformed(*line, format!("duplicate bus id {id}")));
        }
        buses.push(id);
    }

    let mut branches = Vec::new();
    for (line, row) in &branch_rows {
        if row.is_empty() {
            continue;
        }
        if row.len() < 11 {
            return Err(malformed(
                *line,
                format!("branch row has {} columns, need at least 11", row.len()),
            ));
        }
        let from = integer_entry(row[0], *line, "branch from-bus")?;
        let to = integer_entry(row[1], *line, "branch to-bus")?;
        if from == to {
            return Err(malformed(*line, format!("self-loop branch at bus {from}")));
        }
        for end in [from, to] {
            if !bus_set.contains(&end) {
                return Err(malformed(
                    *line,
                    format!("branch {from}-{to} references unknown bus {end}"),
                ));
            }
        }
        branches.push(Branch {
            from,
            to,
            in_service: row[10] != 0.0,
        });
    }

    NetworkTopology::new(buses, branches)
}

/// Extracts a numeric matrix block `key = [ ... ];`, returning one
/// `(line_number, row)` per matrix row. Lines are 1-based; `%` comments are
/// stripped; rows may be separated by `;` or newlines.
fn extract_matrix(text: &str, key: &str) -> Result<Vec<(usize, Vec<f64>)>, IngestError> {
    let mut rows = Vec::new();
    let mut in_block = false;
    let mut found = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('%') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut rest = line;

        if !in_block {
            let Some(at) = find_key(line, key) else {
                continue;
            };
            let after = line[at + key.len()..].trim_start();
            let Some(after_eq) = after.strip_prefix('=') else {
                continue;
            };
            let after_eq = after_eq.trim_start();
            let Some(after_bracket) = after_eq.strip_prefix('[') else {
                return Err(malformed(line_no, format!("expected `[` after `{key} =`")));
            };
            in_block = true;
            found = true;
            rest = after_bracket;
        }

        let (content, closes) = match rest.find(']') {
            Some(p) => (&rest[..p], true),
            None => (rest, false),
        };
        for piece in content.split(';') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for token in piece.replace(',', " ").split_whitespace() {
                let value: f64 = token.parse().map_err(|_| {
                    malformed(line_no, format!("non-numeric entry `{token}` in {key}"))
                })?;
                row.push(value);
            }
            rows.push((line_no, row));
        }
        if closes {
            return Ok(rows);
        }
    }

    if found {
        Err(malformed(
            text.lines().count(),
            format!("unterminated `{key}` block"),
        ))
    } else {
        Err(malformed(1, format!("missing `{key}` block")))
    }
}

/// `key` must be followed by a non-identifier character so `mpc.bus` does
/// not match `mpc.bus_name`.
fn find_key(line: &str, key: &str) -> Option<usize> {
    let at = line.find(key)?;
    let next = line[at + key.len()..].chars().next();
    match next {
        Some(c) if c.is_alphanumeric() || c == '_' => None,
        _ => Some(at),
    }
}

fn integer_entry(value: f64, line: usize, what: &str) -> Result<i64, IngestError> {
    if value.fract() != 0.0 || !value.is_finite() {
        return Err(malformed(line, format!("{what} `{value}` is not an integer")));
    }
    Ok(value as i64)
}

/// Parses a plain edge list: one `u v` pair per line, `#` comments allowed.
/// Buses are the distinct endpoints in ascending order; every branch is in
/// service.
pub fn parse_edge_list(text: &str) -> Result<NetworkTopology, IngestError> {
    let mut branches = Vec::new();
    let mut bus_set = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 2 {
            return Err(malformed(
                line_no,
                format!("expected `u v`, found {} tokens", tokens.len()),
            ));
        }
        let mut pair = [0i64; 2];
        for (slot, token) in pair.iter_mut().zip(&tokens) {
            *slot = token
                .parse()
                .map_err(|_| malformed(line_no, format!("non-integer token `{token}`")))?;
        }
        let [from, to] = pair;
        if from == to {
            return Err(malformed(line_no, format!("self-loop branch at bus {from}")));
        }
        bus_set.insert(from);
        bus_set.insert(to);
        branches.push(Branch {
            from,
            to,
            in_service: true,
        });
    }
    NetworkTopology::new(bus_set.into_iter().collect(), branches)
}

/// Serializes the in-service branches as an edge list. Out-of-service
/// branches and isolated buses have no representation in this format.
pub fn to_edge_list(t: &NetworkTopology) -> String {
    let mut out = String::new();
    for branch in t.in_service_branches() {
        out.push_str(&format!("{} {}\n", branch.from, branch.to));
    }
    out
}

/// Serializes the full topology as a minimal MATPOWER case. Only the
/// topology columns carry information; the rest are placeholders.
pub fn to_matpower(t: &NetworkTopology) -> String {
    let mut out = String::new();
    out.push_str("function mpc = case_export\nmpc.version = '2';\nmpc.baseMVA = 100;\n");
    out.push_str("mpc.bus = [\n");
    for &bus in t.buses() {
        out.push_str(&format!(
            "\t{bus}\t1\t0\t0\t0\t0\t1\t1\t0\t135\t1\t1.1\t0.9;\n"
        ));
    }
    out.push_str("];\nmpc.branch = [\n");
    for branch in t.branches() {
        let status = i64::from(branch.in_service);
        out.push_str(&format!(
            "\t{}\t{}\t0.01\t0.1\t0\t0\t0\t0\t0\t0\t{status}\t-360\t360;\n",
            branch.from, branch.to
        ));
    }
    out.push_str("];\n");
    out
}
