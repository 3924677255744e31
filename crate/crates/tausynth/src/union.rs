//! Unions of transition systems and the joining construction.
//!
//! A union is an ordered list of component systems with pairwise disjoint
//! state sets; events may be shared between components and that sharing is
//! the mechanism the separation gadgets rely on. The joining merges a union
//! into a single system by chaining fresh connector states in front of the
//! component initials.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::nettype::{NetType, TypeEvent};
use crate::region::Region;
use crate::ts::TransitionSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Union {
    name: String,
    components: Vec<TransitionSystem>,
    /// Global index of a component's first state.
    state_offset: Vec<usize>,
    total_states: usize,
    /// Union of the component event sets, lexicographically sorted.
    events: Vec<String>,
    /// Per component: local event index -> global event index.
    event_map: Vec<Vec<usize>>,
}

impl Union {
    pub fn new(name: &str, components: Vec<TransitionSystem>) -> Result<Self> {
        let mut seen_states: HashMap<String, usize> = HashMap::new();
        for (i, c) in components.iter().enumerate() {
            for s in c.states() {
                if seen_states.insert(s.clone(), i).is_some() {
                    return Err(Error::StateClash(s.clone()));
                }
            }
        }
        let mut events: Vec<String> = components
            .iter()
            .flat_map(|c| c.events().iter().cloned())
            .collect();
        events.sort();
        events.dedup();
        let index: HashMap<&str, usize> = events
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        let event_map = components
            .iter()
            .map(|c| c.events().iter().map(|e| index[e.as_str()]).collect())
            .collect();
        let mut state_offset = Vec::with_capacity(components.len());
        let mut total = 0;
        for c in &components {
            state_offset.push(total);
            total += c.state_count();
        }
        Ok(Union {
            name: name.to_string(),
            components,
            state_offset,
            total_states: total,
            events,
            event_map,
        })
    }

    /// Every transition system is identified with the union containing it.
    pub fn single(ts: TransitionSystem) -> Self {
        let name = ts.name().to_string();
        Union::new(&name, vec![ts]).expect("a single component cannot clash")
    }

    /// Concatenates the component lists of the given unions.
    pub fn flatten(name: &str, unions: Vec<Union>) -> Result<Self> {
        let components = unions
            .into_iter()
            .flat_map(|u| u.components.into_iter())
            .collect();
        Union::new(name, components)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[TransitionSystem] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &TransitionSystem {
        &self.components[i]
    }

    pub fn total_states(&self) -> usize {
        self.total_states
    }

    pub fn events(&self) -> &[String] {
        &self.events
    }

    pub fn event_index(&self, name: &str) -> Option<usize> {
        self.events.binary_search_by(|e| e.as_str().cmp(name)).ok()
    }

    /// Maps a component-local event index to the global index.
    pub fn global_event(&self, comp: usize, local: usize) -> usize {
        self.event_map[comp][local]
    }

    pub fn global_state(&self, comp: usize, local: usize) -> usize {
        self.state_offset[comp] + local
    }

    pub fn component_of_state(&self, global: usize) -> usize {
        match self.state_offset.binary_search(&global) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    pub fn local_state(&self, global: usize) -> (usize, usize) {
        let comp = self.component_of_state(global);
        (comp, global - self.state_offset[comp])
    }

    pub fn state_name(&self, global: usize) -> &str {
        let (comp, local) = self.local_state(global);
        self.components[comp].state_name(local)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        for (i, c) in self.components.iter().enumerate() {
            if let Some(local) = c.state_index(name) {
                return Some(self.state_offset[i] + local);
            }
        }
        None
    }

    /// All transitions in canonical order: by component, then (source, event).
    pub fn edges_global(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        self.components.iter().enumerate().flat_map(move |(i, c)| {
            c.edges().iter().map(move |&(s, e, d)| {
                (
                    i,
                    self.state_offset[i] + s,
                    self.event_map[i][e],
                    self.state_offset[i] + d,
                )
            })
        })
    }

    /// True iff the global event occurs at the global state.
    pub fn occurs(&self, state: usize, event: usize) -> bool {
        let (comp, local) = self.local_state(state);
        let c = &self.components[comp];
        (0..c.event_count())
            .any(|e| self.event_map[comp][e] == event && c.successor(local, e).is_some())
    }

    /// True iff every event of the union fails to occur at some state.
    ///
    /// Separation verdicts transfer between a union and its joining exactly
    /// under this condition, so the gadget generators check it for every
    /// output.
    pub fn every_event_misses_a_state(&self) -> bool {
        'events: for ge in 0..self.events.len() {
            for gs in 0..self.total_states {
                if !self.occurs(gs, ge) {
                    continue 'events;
                }
            }
            return false;
        }
        true
    }

    /// Builds the joining: fresh connector states `q.0 .. q.n` chained by
    /// events `w.1 .. w.n`, with `y.i` entering component i's initial state.
    /// The joined system starts at `q.0`. Identifiers matching the reserved
    /// `q.<i>` / `w.<i>` / `y.<i>` shapes are refused.
    pub fn join(&self) -> Result<TransitionSystem> {
        let reserved = |tok: &str| -> bool {
            let mut it = tok.splitn(2, '.');
            match (it.next(), it.next()) {
                (Some(p), Some(num)) => {
                    matches!(p, "q" | "w" | "y")
                        && !num.is_empty()
                        && num.chars().all(|c| c.is_ascii_digit())
                }
                _ => false,
            }
        };
        for c in &self.components {
            for s in c.states() {
                if reserved(s) {
                    return Err(Error::NameClash(s.clone()));
                }
            }
            for e in c.events() {
                if reserved(e) {
                    return Err(Error::NameClash(e.clone()));
                }
            }
        }

        let n = self.components.len();
        let mut states: Vec<String> = Vec::new();
        let mut events: Vec<String> = self.events.clone();
        let mut transitions: Vec<(String, String, String)> = Vec::new();
        for c in &self.components {
            states.extend(c.states().iter().cloned());
            for &(s, e, d) in c.edges() {
                transitions.push((
                    c.state_name(s).to_string(),
                    c.event_name(e).to_string(),
                    c.state_name(d).to_string(),
                ));
            }
        }
        for i in 0..n {
            let q = format!("q.{i}");
            let y = format!("y.{i}");
            states.push(q.clone());
            events.push(y.clone());
            transitions.push((q.clone(), y, self.components[i].initial_name().to_string()));
            if i + 1 < n {
                let w = format!("w.{}", i + 1);
                events.push(w.clone());
                transitions.push((q, w, format!("q.{}", i + 1)));
            }
        }
        TransitionSystem::build(&format!("{}.joined", self.name), &states, &events, &transitions, "q.0")
    }

    /// Parses a union file (`union <name>` followed by `include <path>`
    /// lines), resolving each include through `load`.
    pub fn parse_with<F>(text: &str, mut load: F) -> Result<Self>
    where
        F: FnMut(&str) -> Result<TransitionSystem>,
    {
        let mut name: Option<String> = None;
        let mut components = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut toks = line.split_whitespace();
            let Some(head) = toks.next() else { continue };
            let lineno = idx + 1;
            match head {
                "union" => {
                    if name.is_some() {
                        return Err(Error::Syntax {
                            line: lineno,
                            msg: "duplicate `union` declaration".to_string(),
                        });
                    }
                    name = Some(
                        toks.next()
                            .ok_or(Error::Syntax {
                                line: lineno,
                                msg: "missing name".to_string(),
                            })?
                            .to_string(),
                    );
                }
                "include" => {
                    let path = toks.next().ok_or(Error::Syntax {
                        line: lineno,
                        msg: "missing include path".to_string(),
                    })?;
                    components.push(load(path)?);
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
            msg: "missing `union` declaration".to_string(),
        })?;
        Union::new(&name, components)
    }
}

/// Extends a region of `union` to a region of its joining.
///
/// Connector states take the support of the separated state (`pivot`), chain
/// events stay neutral, and each entry event `y.i` bridges the gap between
/// the pivot and the support of component i's initial state. The result
/// solves every atom the original region solved.
pub fn lift_region(
    union: &Union,
    joined: &TransitionSystem,
    region: &Region,
    pivot: u8,
    net_type: NetType,
) -> Result<Region> {
    if pivot > net_type.bound() {
        return Err(Error::ArityMismatch(format!(
            "pivot support {pivot} exceeds bound {}",
            net_type.bound()
        )));
    }
    let mut support = vec![0u8; joined.state_count()];
    for (js, name) in joined.states().iter().enumerate() {
        support[js] = match union.state_index(name) {
            Some(g) => region.support(g),
            None => pivot, // connector state
        };
    }
    let mut signature = vec![net_type.neutral(); joined.event_count()];
    for (je, name) in joined.events().iter().enumerate() {
        if let Some(ge) = union.event_index(name) {
            signature[je] = region.signature(ge);
            continue;
        }
        if let Some(i) = name.strip_prefix("y.") {
            let comp: usize = i.parse().map_err(|_| Error::UnknownIdentifier(name.clone()))?;
            let init = region.support(union.global_state(comp, union.component(comp).initial()));
            signature[je] = if init < pivot {
                TypeEvent::flow(pivot - init, 0)
            } else {
                TypeEvent::flow(0, init - pivot)
            };
        }
        // w.* events keep the neutral signature.
    }
    Ok(Region::from_parts(
        &format!("{}.lifted", region.name()),
        support,
        signature,
    ))
}

/// The region of the joining with support 0 at connector `q.i` and bound
/// everywhere else. It witnesses the separation of `q.i` from every other
/// state and inhibits `y.i` and the outgoing chain event everywhere.
pub fn connector_region(
    union: &Union,
    joined: &TransitionSystem,
    index: usize,
    net_type: NetType,
) -> Result<Region> {
    let n = union.components().len();
    if index >= n {
        return Err(Error::IndexOutOfRange { index, len: n });
    }
    let b = net_type.bound();
    let q = format!("q.{index}");
    let mut support = vec![b; joined.state_count()];
    let qs = joined
        .state_index(&q)
        .ok_or_else(|| Error::UnknownIdentifier(q.clone()))?;
    support[qs] = 0;
    let mut signature = vec![net_type.neutral(); joined.event_count()];
    let mut set = |name: String, val: TypeEvent| {
        if let Some(e) = joined.event_index(&name) {
            signature[e] = val;
        }
    };
    set(format!("y.{index}"), TypeEvent::flow(0, b));
    if index + 1 < n {
        set(format!("w.{}", index + 1), TypeEvent::flow(0, b));
    }
    if index >= 1 {
        // The chain transition entering q.i runs from support b down to 0.
        set(format!("w.{index}"), TypeEvent::flow(b, 0));
    }
    Ok(Region::from_parts(&format!("connector.{index}"), support, signature))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::ts::build_ts;

    fn two_components() -> (TransitionSystem, TransitionSystem) {
        let a = build_ts("A", &["a0", "a1"], &["e"], &[("a0", "e", "a1")], "a0").unwrap();
        let b = build_ts("B", &["b0", "b1"], &["e"], &[("b0", "e", "b1")], "b0").unwrap();
        (a, b)
    }

    #[test]
    fn flatten_concatenates() {
        let (a, b) = two_components();
        let u1 = Union::single(a.clone());
        let u2 = Union::single(b.clone());
        let u = Union::flatten("u", vec![u1.clone(), u2]).unwrap();
        assert_eq!(u.components().len(), 2);
        assert_eq!(u.components()[0], a);
        assert_eq!(u.components()[1], b);

        let again = Union::flatten("v", vec![u1.clone()]).unwrap();
        assert_eq!(again.components(), u1.components());
    }

    #[test]
    fn state_clash_rejected() {
        let a = build_ts("A", &["s"], &[], &[], "s").unwrap();
        let b = build_ts("B", &["s"], &[], &[], "s").unwrap();
        assert!(matches!(
            Union::new("u", vec![a, b]),
            Err(Error::StateClash(_))
        ));
    }

    #[test]
    fn join_shape() {
        let (a, b) = two_components();
        let u = Union::new("u", vec![a, b]).unwrap();
        let j = u.join().unwrap();
        assert_eq!(j.state_count(), 4 + 2);
        // two entry events, one chain event
        assert!(j.event_index("y.0").is_some());
        assert!(j.event_index("y.1").is_some());
        assert!(j.event_index("w.1").is_some());
        assert!(j.event_index("w.2").is_none());
        assert_eq!(j.initial_name(), "q.0");
        let q0 = j.state_index("q.0").unwrap();
        let y0 = j.event_index("y.0").unwrap();
        assert_eq!(j.successor(q0, y0), Some(j.state_index("a0").unwrap()));
    }

    #[test]
    fn join_single_component() {
        let u = Union::single(samples::grid_ts());
        let j = u.join().unwrap();
        assert_eq!(j.state_count(), 13);
        assert_eq!(j.event_count(), 4);
        assert_eq!(j.initial_name(), "q.0");
    }

    #[test]
    fn join_refuses_reserved_names() {
        let a = build_ts("A", &["q.0", "s"], &["e"], &[("q.0", "e", "s")], "q.0").unwrap();
        let u = Union::single(a);
        assert!(matches!(u.join(), Err(Error::NameClash(_))));
    }

    #[test]
    fn event_miss_precondition() {
        let u = Union::single(samples::grid_ts());
        assert!(u.every_event_misses_a_state());

        let looped = build_ts("L", &["s"], &["e"], &[("s", "e", "s")], "s").unwrap();
        assert!(!Union::single(looped).every_event_misses_a_state());
    }

    #[test]
    fn occurrence_across_components() {
        let (a, b) = two_components();
        let u = Union::new("u", vec![a, b]).unwrap();
        let e = u.event_index("e").unwrap();
        assert!(u.occurs(u.state_index("a0").unwrap(), e));
        assert!(!u.occurs(u.state_index("a1").unwrap(), e));
        assert!(u.occurs(u.state_index("b0").unwrap(), e));
    }
}
