//! Regions of transition systems and unions, and separation atoms.
//!
//! A region is a pair of total mappings: a support taking every state to a
//! type state {0..b} and a signature taking every event to a type event, such
//! that each carrier transition maps to a transition of the net type. Regions
//! are the witness objects for separation: an SSP atom (two distinct states)
//! is solved by a region giving them different supports; an ESSP atom (an
//! event and a state where it does not occur) is solved by a region whose
//! signature is disabled at that state's support.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::nettype::{delta_raw, NetType, TypeEvent};
use crate::union::Union;

/// Support and signature indexed against a specific carrier union: supports
/// by global state index, signatures by global event index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    name: String,
    support: Vec<u8>,
    signature: Vec<TypeEvent>,
}

impl Region {
    pub fn from_parts(name: &str, support: Vec<u8>, signature: Vec<TypeEvent>) -> Self {
        Region {
            name: name.to_string(),
            support,
            signature,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self, state: usize) -> u8 {
        self.support[state]
    }

    pub fn signature(&self, event: usize) -> TypeEvent {
        self.signature[event]
    }

    pub fn supports(&self) -> &[u8] {
        &self.support
    }

    pub fn signatures(&self) -> &[TypeEvent] {
        &self.signature
    }
}

/// Outcome of validating a region against its carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// First offending transition in canonical order.
    Reject {
        src: String,
        event: String,
        dst: String,
    },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Checks that every carrier transition maps into the type. The dimensions
/// and ranges of the mappings are validated first; an event outside the type
/// or a support above the bound is an `ArityMismatch`.
pub fn verify_region(carrier: &Union, region: &Region, net_type: NetType) -> Result<Verdict> {
    if region.support.len() != carrier.total_states()
        || region.signature.len() != carrier.events().len()
    {
        return Err(Error::ArityMismatch(format!(
            "region shape ({} states, {} events) does not match carrier ({}, {})",
            region.support.len(),
            region.signature.len(),
            carrier.total_states(),
            carrier.events().len()
        )));
    }
    for (ge, &sig) in region.signature.iter().enumerate() {
        if !net_type.contains(sig) {
            return Err(Error::ArityMismatch(format!(
                "signature of {} is {sig}, not an event of {net_type}",
                carrier.events()[ge]
            )));
        }
    }
    let b = net_type.bound();
    for &sup in &region.support {
        if sup > b {
            return Err(Error::ArityMismatch(format!(
                "support value {sup} exceeds bound {b}"
            )));
        }
    }
    for (_, src, ev, dst) in carrier.edges_global() {
        let expect = delta_raw(b, region.support[src], region.signature[ev]);
        if expect != Some(region.support[dst]) {
            return Ok(Verdict::Reject {
                src: carrier.state_name(src).to_string(),
                event: carrier.events()[ev].clone(),
                dst: carrier.state_name(dst).to_string(),
            });
        }
    }
    Ok(Verdict::Accept)
}

/// Result of propagating a signature from per-component initial supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completion {
    Completed(Region),
    /// The transition at which propagation became undefined or inconsistent.
    Inconsistent {
        src: String,
        event: String,
        dst: String,
    },
}

impl Completion {
    pub fn into_region(self) -> Option<Region> {
        match self {
            Completion::Completed(r) => Some(r),
            Completion::Inconsistent { .. } => None,
        }
    }
}

/// Propagates supports along a BFS of every component: the support of each
/// state is forced by the initial support and the signature, so a region is
/// completely defined by those. Definedness is checked on every step and
/// consistency on every non-tree transition.
pub fn complete_region(
    carrier: &Union,
    name: &str,
    initial_supports: &[u8],
    signature: &[TypeEvent],
    net_type: NetType,
) -> Result<Completion> {
    if initial_supports.len() != carrier.components().len() {
        return Err(Error::ArityMismatch(format!(
            "{} initial supports for {} components",
            initial_supports.len(),
            carrier.components().len()
        )));
    }
    if signature.len() != carrier.events().len() {
        return Err(Error::ArityMismatch(format!(
            "{} signatures for {} events",
            signature.len(),
            carrier.events().len()
        )));
    }
    let b = net_type.bound();
    for (ge, &sig) in signature.iter().enumerate() {
        if !net_type.contains(sig) {
            return Err(Error::ArityMismatch(format!(
                "signature of {} is {sig}, not an event of {net_type}",
                carrier.events()[ge]
            )));
        }
    }
    for &v in initial_supports {
        if v > b {
            return Err(Error::ArityMismatch(format!(
                "initial support {v} exceeds bound {b}"
            )));
        }
    }

    let mut support = vec![0u8; carrier.total_states()];
    let mut known = vec![false; carrier.total_states()];
    for (ci, comp) in carrier.components().iter().enumerate() {
        let init = carrier.global_state(ci, comp.initial());
        support[init] = initial_supports[ci];
        known[init] = true;
        for local in comp.bfs_order() {
            let src = carrier.global_state(ci, local);
            for le in 0..comp.event_count() {
                let Some(dst_local) = comp.successor(local, le) else {
                    continue;
                };
                let dst = carrier.global_state(ci, dst_local);
                let sig = signature[carrier.global_event(ci, le)];
                let inconsistent = || Completion::Inconsistent {
                    src: comp.state_name(local).to_string(),
                    event: comp.event_name(le).to_string(),
                    dst: comp.state_name(dst_local).to_string(),
                };
                match delta_raw(b, support[src], sig) {
                    None => return Ok(inconsistent()),
                    Some(v) => {
                        if known[dst] {
                            if support[dst] != v {
                                return Ok(inconsistent());
                            }
                        } else {
                            support[dst] = v;
                            known[dst] = true;
                        }
                    }
                }
            }
        }
    }
    debug_assert!(known.iter().all(|&k| k), "reachability covers every state");
    Ok(Completion::Completed(Region::from_parts(
        name,
        support,
        signature.to_vec(),
    )))
}

/// A separation atom of a carrier: either two distinct states of the same
/// component, or an event together with a state at which it does not occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeparationAtom {
    Ssp { left: usize, right: usize },
    Essp { event: usize, state: usize },
}

impl SeparationAtom {
    /// Builds an SSP atom from state names, enforcing distinctness and the
    /// same-component restriction.
    pub fn ssp(carrier: &Union, left: &str, right: &str) -> Result<Self> {
        let l = carrier
            .state_index(left)
            .ok_or_else(|| Error::UnknownIdentifier(left.to_string()))?;
        let r = carrier
            .state_index(right)
            .ok_or_else(|| Error::UnknownIdentifier(right.to_string()))?;
        if l == r {
            return Err(Error::InvalidAtom(format!(
                "state separation needs two distinct states, got {left} twice"
            )));
        }
        if carrier.component_of_state(l) != carrier.component_of_state(r) {
            return Err(Error::InvalidAtom(format!(
                "{left} and {right} belong to different components"
            )));
        }
        Ok(SeparationAtom::Ssp { left: l, right: r })
    }

    /// Builds an ESSP atom from names, enforcing non-occurrence.
    pub fn essp(carrier: &Union, event: &str, state: &str) -> Result<Self> {
        let e = carrier
            .event_index(event)
            .ok_or_else(|| Error::UnknownIdentifier(event.to_string()))?;
        let s = carrier
            .state_index(state)
            .ok_or_else(|| Error::UnknownIdentifier(state.to_string()))?;
        if carrier.occurs(s, e) {
            return Err(Error::InvalidAtom(format!(
                "{event} occurs at {state}; (event, state) is not a separation atom"
            )));
        }
        Ok(SeparationAtom::Essp { event: e, state: s })
    }

    pub fn is_ssp(&self) -> bool {
        matches!(self, SeparationAtom::Ssp { .. })
    }

    pub fn display(&self, carrier: &Union) -> String {
        match *self {
            SeparationAtom::Ssp { left, right } => format!(
                "ssp {} {}",
                carrier.state_name(left),
                carrier.state_name(right)
            ),
            SeparationAtom::Essp { event, state } => format!(
                "essp {} {}",
                carrier.events()[event],
                carrier.state_name(state)
            ),
        }
    }
}

/// All separation atoms of the carrier in canonical order: SSP atoms first
/// (per component, ordered pairs of state indices), then ESSP atoms ordered
/// by (event, state).
pub fn enumerate_atoms(carrier: &Union) -> Vec<SeparationAtom> {
    let mut atoms = Vec::new();
    for (ci, comp) in carrier.components().iter().enumerate() {
        for i in 0..comp.state_count() {
            for j in (i + 1)..comp.state_count() {
                atoms.push(SeparationAtom::Ssp {
                    left: carrier.global_state(ci, i),
                    right: carrier.global_state(ci, j),
                });
            }
        }
    }
    for e in 0..carrier.events().len() {
        for s in 0..carrier.total_states() {
            if !carrier.occurs(s, e) {
                atoms.push(SeparationAtom::Essp { event: e, state: s });
            }
        }
    }
    atoms
}

/// Whether a (valid) region witnesses the atom.
pub fn solves(
    carrier: &Union,
    region: &Region,
    atom: &SeparationAtom,
    net_type: NetType,
) -> bool {
    let _ = carrier;
    match *atom {
        SeparationAtom::Ssp { left, right } => region.support(left) != region.support(right),
        SeparationAtom::Essp { event, state } => {
            delta_raw(net_type.bound(), region.support(state), region.signature(event)).is_none()
        }
    }
}

/// Sparse on-disk form of a region. Signature entries default to the
/// neutral event of the type; support entries for component initial states
/// seed propagation and unlisted components default to the bound; any other
/// support entry is checked against the completed region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionFile {
    pub name: String,
    pub carrier: String,
    pub net_type: NetType,
    pub sup: Vec<(String, u8)>,
    pub sig: Vec<(String, TypeEvent)>,
}

impl RegionFile {
    pub fn parse(text: &str) -> Result<Self> {
        use crate::nettype::Family;
        let mut name = None;
        let mut carrier = None;
        let mut net_type = None;
        let mut sup = Vec::new();
        let mut sig = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut toks = line.split_whitespace();
            let Some(head) = toks.next() else { continue };
            let lineno = idx + 1;
            let syntax = |msg: String| Error::Syntax { line: lineno, msg };
            match head {
                "region" => {
                    let n = toks.next().ok_or_else(|| syntax("missing name".into()))?;
                    let over = toks.next().ok_or_else(|| syntax("missing `over`".into()))?;
                    if over != "over" {
                        return Err(syntax(format!("expected `over`, found `{over}`")));
                    }
                    let c = toks
                        .next()
                        .ok_or_else(|| syntax("missing carrier name".into()))?;
                    name = Some(n.to_string());
                    carrier = Some(c.to_string());
                }
                "type" => {
                    let fam = toks.next().ok_or_else(|| syntax("missing family".into()))?;
                    let bound = toks
                        .next()
                        .and_then(|t| t.parse::<u8>().ok())
                        .ok_or_else(|| syntax("missing bound".into()))?;
                    let family = Family::from_str(fam)
                        .map_err(|_| syntax(format!("unknown family `{fam}`")))?;
                    net_type = Some(NetType::new_permissive(family, bound).map_err(|e| {
                        syntax(e.to_string())
                    })?);
                }
                "sup" => {
                    let s = toks.next().ok_or_else(|| syntax("missing state".into()))?;
                    let v = toks
                        .next()
                        .and_then(|t| t.parse::<u8>().ok())
                        .ok_or_else(|| syntax("missing support value".into()))?;
                    sup.push((s.to_string(), v));
                }
                "sig" => {
                    let e = toks.next().ok_or_else(|| syntax("missing event".into()))?;
                    let v = toks
                        .next()
                        .ok_or_else(|| syntax("missing signature value".into()))?;
                    let te = TypeEvent::parse(v).map_err(|_| {
                        syntax(format!("cannot parse type event `{v}`"))
                    })?;
                    sig.push((e.to_string(), te));
                }
                other => return Err(syntax(format!("unknown directive `{other}`"))),
            }
        }
        Ok(RegionFile {
            name: name.ok_or(Error::Syntax {
                line: 1,
                msg: "missing `region` declaration".to_string(),
            })?,
            carrier: carrier.unwrap_or_default(),
            net_type: net_type.ok_or(Error::Syntax {
                line: 1,
                msg: "missing `type` declaration".to_string(),
            })?,
            sup: sup,
            sig: sig,
        })
    }

    /// Instantiates the sparse form against a carrier and validates it.
    pub fn instantiate(&self, carrier: &Union) -> Result<Region> {
        let nt = self.net_type;
        let mut signature = vec![nt.neutral(); carrier.events().len()];
        for (name, te) in &self.sig {
            let ge = carrier
                .event_index(name)
                .ok_or_else(|| Error::UnknownIdentifier(name.clone()))?;
            signature[ge] = *te;
        }
        let mut inits = vec![nt.bound(); carrier.components().len()];
        let mut extra: Vec<(usize, u8)> = Vec::new();
        for (name, v) in &self.sup {
            let gs = carrier
                .state_index(name)
                .ok_or_else(|| Error::UnknownIdentifier(name.clone()))?;
            let (ci, local) = carrier.local_state(gs);
            if local == carrier.component(ci).initial() {
                inits[ci] = *v;
            } else {
                extra.push((gs, *v));
            }
        }
        match complete_region(carrier, &self.name, &inits, &signature, nt)? {
            Completion::Completed(region) => {
                for (gs, v) in extra {
                    if region.support(gs) != v {
                        return Err(Error::InvalidRegion(format!(
                            "declared sup {} = {v} but propagation yields {}",
                            carrier.state_name(gs),
                            region.support(gs)
                        )));
                    }
                }
                Ok(region)
            }
            Completion::Inconsistent { src, event, dst } => Err(Error::InvalidRegion(format!(
                "propagation fails at {src} --{event}--> {dst}"
            ))),
        }
    }
}

/// Writes a region in the sparse file format: supports of the component
/// initial states plus all non-neutral signature entries.
pub fn serialize_region(
    carrier: &Union,
    region: &Region,
    net_type: NetType,
) -> String {
    let mut out = String::new();
    writeln!(out, "region {} over {}", region.name(), carrier.name()).unwrap();
    writeln!(out, "type {}", net_type).unwrap();
    for (ci, comp) in carrier.components().iter().enumerate() {
        let g = carrier.global_state(ci, comp.initial());
        writeln!(out, "sup {} {}", comp.initial_name(), region.support(g)).unwrap();
    }
    let neutral = net_type.neutral();
    for (ge, name) in carrier.events().iter().enumerate() {
        if region.signature(ge) != neutral {
            writeln!(out, "sig {} {}", name, region.signature(ge)).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nettype::Family;
    use crate::samples;
    use crate::ts::build_ts;

    fn grid() -> Union {
        Union::single(samples::grid_ts())
    }

    fn tau0() -> NetType {
        NetType::new(Family::Tau0, 2).unwrap()
    }

    #[test]
    fn sample_regions_verify() {
        let u = grid();
        for r in samples::grid_regions_tau0() {
            assert!(verify_region(&u, &r, tau0()).unwrap().is_accept(), "{}", r.name());
        }
        let t3 = NetType::new(Family::Tau3, 2).unwrap();
        for r in samples::grid_regions_tau3() {
            assert!(verify_region(&u, &r, t3).unwrap().is_accept(), "{}", r.name());
        }
    }

    #[test]
    fn all_zero_region_verifies() {
        let u = grid();
        let r = Region::from_parts(
            "zero",
            vec![0; u.total_states()],
            vec![TypeEvent::flow(0, 0); u.events().len()],
        );
        assert!(verify_region(&u, &r, tau0()).unwrap().is_accept());
    }

    #[test]
    fn broken_signature_rejected_at_first_transition() {
        let u = grid();
        let r1 = &samples::grid_regions_tau0()[0];
        let mut sig = r1.signatures().to_vec();
        let c = u.event_index("c").unwrap();
        sig[c] = TypeEvent::flow(0, 1);
        let r = Region::from_parts("broken", r1.supports().to_vec(), sig);
        // sup(0) = 2 and 2 + 1 > b, so the first c-transition in canonical
        // order (0 --c--> 4) is the offending one.
        assert_eq!(
            verify_region(&u, &r, tau0()).unwrap(),
            Verdict::Reject {
                src: "0".to_string(),
                event: "c".to_string(),
                dst: "4".to_string()
            }
        );
    }

    #[test]
    fn group_signature_outside_type_is_arity_mismatch() {
        let u = grid();
        let r = Region::from_parts(
            "bad",
            vec![0; u.total_states()],
            vec![TypeEvent::Group(0); u.events().len()],
        );
        assert!(matches!(
            verify_region(&u, &r, tau0()),
            Err(Error::ArityMismatch(_))
        ));
    }

    #[test]
    fn completion_matches_tables() {
        let u = grid();
        // Propagating sig1 from sup(0) = 2 reproduces r1's support column.
        let r1 = &samples::grid_regions_tau0()[0];
        let done = complete_region(&u, "r1", &[2], r1.signatures(), tau0())
            .unwrap()
            .into_region()
            .unwrap();
        assert_eq!(done.supports(), r1.supports());

        // The rotating tau3 region: supports cycle 0,1,2 along the a-rows.
        let t3 = NetType::new(Family::Tau3, 2).unwrap();
        let r5 = &samples::grid_regions_tau3()[3];
        let done = complete_region(&u, "r5", &[0], r5.signatures(), t3)
            .unwrap()
            .into_region()
            .unwrap();
        let by_name: Vec<u8> = ["0", "1", "2", "3", "4", "5"]
            .iter()
            .map(|n| done.support(u.state_index(n).unwrap()))
            .collect();
        assert_eq!(by_name, vec![0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn completion_detects_undefined_step() {
        let u = grid();
        let mut sig = vec![TypeEvent::flow(0, 0); u.events().len()];
        sig[u.event_index("a").unwrap()] = TypeEvent::flow(0, 1);
        match complete_region(&u, "r", &[2], &sig, tau0()).unwrap() {
            Completion::Inconsistent { src, event, .. } => {
                assert_eq!((src.as_str(), event.as_str()), ("0", "a"));
            }
            Completion::Completed(_) => panic!("expected inconsistency"),
        }
    }

    #[test]
    fn completion_is_verified() {
        // Whatever complete_region returns passes verify_region.
        let u = grid();
        let nt = tau0();
        let events = nt.events();
        for (i, &ea) in events.iter().enumerate() {
            for &eb in &events {
                for &ec in &events {
                    let sig = vec![ea, eb, ec];
                    for init in 0..=2u8 {
                        if let Completion::Completed(r) =
                            complete_region(&u, &format!("r{i}"), &[init], &sig, nt).unwrap()
                        {
                            assert!(verify_region(&u, &r, nt).unwrap().is_accept());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn atom_counts_for_sample() {
        let u = grid();
        let atoms = enumerate_atoms(&u);
        let ssp = atoms.iter().filter(|a| a.is_ssp()).count();
        let essp = atoms.len() - ssp;
        assert_eq!(ssp, 66);
        assert_eq!(essp, 23);
    }

    #[test]
    fn no_atoms_for_trivial_ts() {
        let ts = build_ts("t", &["s"], &[], &[], "s").unwrap();
        assert!(enumerate_atoms(&Union::single(ts)).is_empty());
    }

    #[test]
    fn union_atoms_are_component_local() {
        let a = build_ts("A", &["a0", "a1"], &["e"], &[("a0", "e", "a1")], "a0").unwrap();
        let b = build_ts("B", &["b0"], &["e"], &[], "b0").unwrap();
        let u = Union::new("u", vec![a, b]).unwrap();
        let atoms = enumerate_atoms(&u);
        let ssp: Vec<_> = atoms.iter().filter(|a| a.is_ssp()).collect();
        assert_eq!(ssp.len(), 1, "no cross-component state pairs");
        // ESSP atoms include cross-component states: e at a1 and at b0.
        let essp = atoms.len() - 1;
        assert_eq!(essp, 2);
    }

    #[test]
    fn solves_examples() {
        let u = grid();
        let nt = tau0();
        let rs = samples::grid_regions_tau0();
        let atom = SeparationAtom::essp(&u, "c", "1").unwrap();
        assert!(solves(&u, &rs[0], &atom, nt));
        assert!(!solves(&u, &rs[1], &atom, nt));

        // Group-signed events are total, so they never solve ESSP atoms.
        let t3 = NetType::new(Family::Tau3, 2).unwrap();
        let r5 = &samples::grid_regions_tau3()[3];
        let a_atom = SeparationAtom::essp(&u, "a", "2").unwrap();
        assert!(!solves(&u, r5, &a_atom, t3));
    }

    #[test]
    fn degenerate_atoms_rejected() {
        let u = grid();
        assert!(matches!(
            SeparationAtom::ssp(&u, "3", "3"),
            Err(Error::InvalidAtom(_))
        ));
        assert!(matches!(
            SeparationAtom::essp(&u, "a", "0"),
            Err(Error::InvalidAtom(_))
        ));
    }

    #[test]
    fn region_file_round_trip() {
        let u = grid();
        let nt = tau0();
        let r1 = &samples::grid_regions_tau0()[0];
        let text = serialize_region(&u, r1, nt);
        let rf = RegionFile::parse(&text).unwrap();
        assert_eq!(rf.net_type, nt);
        let back = rf.instantiate(&u).unwrap();
        assert_eq!(back.supports(), r1.supports());
        assert_eq!(back.signatures(), r1.signatures());
    }

    #[test]
    fn region_file_defaults() {
        // Omitted signatures are neutral, so a file with only a support line
        // describes a constant-support region.
        let u = grid();
        let rf = RegionFile::parse("region r over grid\ntype tau0 2\nsup 0 1\n").unwrap();
        let r = rf.instantiate(&u).unwrap();
        assert!(r.supports().iter().all(|&v| v == 1));
    }

    #[test]
    fn region_file_checks_extra_supports() {
        let u = grid();
        let rf = RegionFile::parse(
            "region r over grid\ntype tau0 2\nsup 0 1\nsup 5 0\n",
        )
        .unwrap();
        assert!(matches!(rf.instantiate(&u), Err(Error::InvalidRegion(_))));
    }
}
