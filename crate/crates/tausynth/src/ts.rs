//! Deterministic initialized transition systems.
//!
//! A transition system is a finite edge-labeled directed graph with a partial
//! transition function (at most one successor per state/event pair) and an
//! initial state from which every state is reachable. Values are immutable
//! after construction; state and event lists are kept in lexicographic order
//! so that all iteration is deterministic.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    name: String,
    states: Vec<String>,
    events: Vec<String>,
    initial: usize,
    /// Dense successor table, `states.len() * events.len()` entries.
    delta: Vec<Option<usize>>,
    /// Edge list sorted by (source, event).
    edges: Vec<(usize, usize, usize)>,
}

fn check_token(tok: &str) -> Result<()> {
    if tok.is_empty() || tok.chars().any(|c| c.is_whitespace() || c == '#') {
        return Err(Error::UnknownIdentifier(tok.to_string()));
    }
    Ok(())
}

impl TransitionSystem {
    /// Validates and builds a transition system. States and events are
    /// normalized to lexicographic order; duplicates in the declarations are
    /// tolerated and collapsed.
    pub fn build(
        name: &str,
        states: &[String],
        events: &[String],
        transitions: &[(String, String, String)],
        initial: &str,
    ) -> Result<Self> {
        check_token(name)?;
        let mut state_names: Vec<String> = states.to_vec();
        state_names.sort();
        state_names.dedup();
        let mut event_names: Vec<String> = events.to_vec();
        event_names.sort();
        event_names.dedup();
        for s in &state_names {
            check_token(s)?;
        }
        for e in &event_names {
            check_token(e)?;
        }

        let state_index: HashMap<&str, usize> = state_names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let event_index: HashMap<&str, usize> = event_names
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();

        for s in &state_names {
            if event_index.contains_key(s.as_str()) {
                return Err(Error::NamespaceClash(s.clone()));
            }
        }

        let initial = *state_index
            .get(initial)
            .ok_or_else(|| Error::UnknownIdentifier(initial.to_string()))?;

        let n = state_names.len();
        let m = event_names.len();
        let mut delta: Vec<Option<usize>> = vec![None; n * m];
        for (src, ev, dst) in transitions {
            let s = *state_index
                .get(src.as_str())
                .ok_or_else(|| Error::UnknownIdentifier(src.clone()))?;
            let e = *event_index
                .get(ev.as_str())
                .ok_or_else(|| Error::UnknownIdentifier(ev.clone()))?;
            let d = *state_index
                .get(dst.as_str())
                .ok_or_else(|| Error::UnknownIdentifier(dst.clone()))?;
            if let Some(prev) = delta[s * m + e] {
                return Err(Error::DuplicateTransition {
                    state: src.clone(),
                    event: ev.clone(),
                    first: state_names[prev].clone(),
                    second: dst.clone(),
                });
            }
            delta[s * m + e] = Some(d);
        }

        let mut edges = Vec::with_capacity(transitions.len());
        for s in 0..n {
            for e in 0..m {
                if let Some(d) = delta[s * m + e] {
                    edges.push((s, e, d));
                }
            }
        }

        let ts = TransitionSystem {
            name: name.to_string(),
            states: state_names,
            events: event_names,
            initial,
            delta,
            edges,
        };

        let mut seen = vec![false; n];
        for s in ts.reachable_from(initial) {
            seen[s] = true;
        }
        let unreachable: Vec<String> = (0..n)
            .filter(|&s| !seen[s])
            .map(|s| ts.states[s].clone())
            .collect();
        if !unreachable.is_empty() {
            return Err(Error::Unreachable(unreachable));
        }
        Ok(ts)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: &str) -> Result<Self> {
        check_token(name)?;
        self.name = name.to_string();
        Ok(self)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn events(&self) -> &[String] {
        &self.events
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn event_name(&self, e: usize) -> &str {
        &self.events[e]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.binary_search_by(|x| x.as_str().cmp(name)).ok()
    }

    pub fn event_index(&self, name: &str) -> Option<usize> {
        self.events.binary_search_by(|x| x.as_str().cmp(name)).ok()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn initial_name(&self) -> &str {
        &self.states[self.initial]
    }

    pub fn successor(&self, s: usize, e: usize) -> Option<usize> {
        self.delta[s * self.events.len() + e]
    }

    /// Edge list sorted by (source, event); the canonical transition order.
    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    fn reachable_from(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.states.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for e in 0..self.events.len() {
                if let Some(d) = self.successor(s, e) {
                    if !seen[d] {
                        seen[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        order
    }

    /// BFS order from the initial state, exploring events in index order.
    /// Covers every state by the reachability invariant.
    pub fn bfs_order(&self) -> Vec<usize> {
        self.reachable_from(self.initial)
    }

    /// States at which `event` occurs, i.e. has an outgoing transition.
    pub fn occurs_at(&self, event: &str) -> Result<Vec<&str>> {
        let e = self
            .event_index(event)
            .ok_or_else(|| Error::UnknownIdentifier(event.to_string()))?;
        Ok(self
            .occurs_at_idx(e)
            .map(|s| self.states[s].as_str())
            .collect())
    }

    pub fn occurs_at_idx(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(move |&s| self.successor(s, e).is_some())
    }

    /// Parses the line-based text format. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name: Option<String> = None;
        let mut states = Vec::new();
        let mut events = Vec::new();
        let mut transitions = Vec::new();
        let mut initial: Option<String> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut toks = line.split_whitespace();
            let Some(head) = toks.next() else { continue };
            let lineno = idx + 1;
            let syntax = |msg: &str| Error::Syntax {
                line: lineno,
                msg: msg.to_string(),
            };
            match head {
                "ts" => {
                    if name.is_some() {
                        return Err(syntax("duplicate `ts` declaration"));
                    }
                    name = Some(toks.next().ok_or_else(|| syntax("missing name"))?.to_string());
                }
                "states" => states.extend(toks.map(str::to_string)),
                "events" => events.extend(toks.map(str::to_string)),
                "initial" => {
                    if initial.is_some() {
                        return Err(syntax("duplicate `initial` declaration"));
                    }
                    initial = Some(
                        toks.next()
                            .ok_or_else(|| syntax("missing initial state"))?
                            .to_string(),
                    );
                }
                "trans" => {
                    let src = toks.next().ok_or_else(|| syntax("missing source"))?;
                    let ev = toks.next().ok_or_else(|| syntax("missing event"))?;
                    let dst = toks.next().ok_or_else(|| syntax("missing target"))?;
                    if toks.next().is_some() {
                        return Err(syntax("trailing tokens after transition"));
                    }
                    transitions.push((src.to_string(), ev.to_string(), dst.to_string()));
                }
                other => {
                    return Err(Error::Syntax {
                        line: lineno,
                        msg: format!("unknown directive `{other}`"),
                    })
                }
            }
        }

        let name = name.ok_or(Error::Syntax {
            line: 1,
            msg: "missing `ts` declaration".to_string(),
        })?;
        let initial = initial.ok_or(Error::Syntax {
            line: 1,
            msg: "missing `initial` declaration".to_string(),
        })?;
        TransitionSystem::build(&name, &states, &events, &transitions, &initial)
    }

    /// Serializes into the text format; `parse(serialize(ts))` is the
    /// identity on built systems.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "ts {}", self.name).unwrap();
        for chunk in self.states.chunks(12) {
            writeln!(out, "states {}", chunk.join(" ")).unwrap();
        }
        for chunk in self.events.chunks(12) {
            writeln!(out, "events {}", chunk.join(" ")).unwrap();
        }
        writeln!(out, "initial {}", self.initial_name()).unwrap();
        for &(s, e, d) in &self.edges {
            writeln!(
                out,
                "trans {} {} {}",
                self.states[s], self.events[e], self.states[d]
            )
            .unwrap();
        }
        out
    }

    /// DOT rendering: one node per state (initial double-circled), one
    /// labeled edge per transition.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{}\" {{", self.name).unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  node [shape=circle];").unwrap();
        writeln!(out, "  \"{}\" [shape=doublecircle];", self.initial_name()).unwrap();
        for &(s, e, d) in &self.edges {
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.states[s], self.states[d], self.events[e]
            )
            .unwrap();
        }
        writeln!(out, "}}").unwrap();
        out
    }
}

/// Convenience constructor used throughout tests and gadget builders.
pub fn build_ts(
    name: &str,
    states: &[&str],
    events: &[&str],
    transitions: &[(&str, &str, &str)],
    initial: &str,
) -> Result<TransitionSystem> {
    TransitionSystem::build(
        name,
        &states.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        &events.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        &transitions
            .iter()
            .map(|(s, e, d)| (s.to_string(), e.to_string(), d.to_string()))
            .collect::<Vec<_>>(),
        initial,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn sample_ts_is_valid() {
        let a = samples::grid_ts();
        assert_eq!(a.state_count(), 12);
        assert_eq!(a.event_count(), 3);
        assert_eq!(a.edges().len(), 13);
        assert_eq!(a.initial_name(), "0");
    }

    #[test]
    fn single_state_no_events() {
        let ts = build_ts("t", &["s"], &[], &[], "s").unwrap();
        assert_eq!(ts.state_count(), 1);
        assert!(ts.edges().is_empty());
    }

    #[test]
    fn determinism_violation_rejected() {
        let err = build_ts(
            "t",
            &["0", "1", "2"],
            &["a"],
            &[("0", "a", "1"), ("0", "a", "2"), ("1", "a", "2")],
            "0",
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateTransition { .. }));
    }

    #[test]
    fn unreachable_states_rejected() {
        let err = build_ts("t", &["0", "1", "2"], &["a"], &[("0", "a", "1")], "0").unwrap_err();
        assert_eq!(err, Error::Unreachable(vec!["2".to_string()]));
    }

    #[test]
    fn undeclared_identifiers_rejected() {
        let err = build_ts("t", &["0"], &["a"], &[("0", "a", "1")], "0").unwrap_err();
        assert!(matches!(err, Error::UnknownIdentifier(_)));
        let err = build_ts("t", &["0"], &[], &[], "x").unwrap_err();
        assert!(matches!(err, Error::UnknownIdentifier(_)));
    }

    #[test]
    fn state_event_namespaces_disjoint() {
        let err = build_ts("t", &["a", "b"], &["a"], &[("a", "a", "b")], "a").unwrap_err();
        assert!(matches!(err, Error::NamespaceClash(_)));
    }

    #[test]
    fn occurrence_sets() {
        let a = samples::grid_ts();
        assert_eq!(a.occurs_at("b").unwrap(), vec!["10", "2", "6"]);
        assert_eq!(a.occurs_at("a").unwrap(), vec!["0", "1", "4", "5", "8", "9"]);
        assert!(a.occurs_at("z").is_err());

        let single = build_ts("t", &["s"], &["e"], &[], "s").unwrap();
        assert!(single.occurs_at("e").unwrap().is_empty());
    }

    #[test]
    fn parse_serialize_round_trip() {
        let a = samples::grid_ts();
        let text = a.serialize();
        let b = TransitionSystem::parse(&text).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_accepts_comments_and_empty_sections() {
        let ts = TransitionSystem::parse("# header\nts t\nstates s\ninitial s # trailing\n").unwrap();
        assert_eq!(ts.state_count(), 1);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = TransitionSystem::parse("ts t\nstates s\nbogus x\ninitial s\n").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 3,
                msg: "unknown directive `bogus`".to_string()
            }
        );
    }

    #[test]
    fn parse_undeclared_initial() {
        let err = TransitionSystem::parse("ts t\nstates s\ninitial q\n").unwrap_err();
        assert!(matches!(err, Error::UnknownIdentifier(_)));
    }

    #[test]
    fn self_loops_and_cycles_allowed() {
        let ts = build_ts(
            "t",
            &["0", "1"],
            &["a", "b"],
            &[("0", "a", "0"), ("0", "b", "1"), ("1", "a", "0")],
            "0",
        )
        .unwrap();
        assert_eq!(ts.successor(0, 0), Some(0));
    }

    #[test]
    fn dot_contains_initial_marking() {
        let a = samples::grid_ts();
        let dot = a.to_dot();
        assert!(dot.contains("\"0\" [shape=doublecircle];"));
        assert!(dot.contains("\"2\" -> \"3\" [label=\"b\"];"));
    }
}
