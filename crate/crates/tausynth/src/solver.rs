//! Exhaustive backtracking solver for separation atoms.
//!
//! The search assigns type events to carrier events one at a time. After
//! every assignment each touched component is re-checked by support
//! propagation: a component stays feasible as long as some initial support
//! value propagates without contradiction (and, for the atom's component,
//! without violating the atom constraint). Component constraints are
//! independent given the shared signature, so initial supports are never
//! enumerated jointly.
//!
//! Failed signature prefixes are memoized in a bounded table; correctness
//! never depends on the table since only fully exhausted subtrees are
//! recorded.

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::nettype::{delta_raw, NetType, TypeEvent};
use crate::region::{enumerate_atoms, solves, verify_region, Region, SeparationAtom};
use crate::union::Union;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub time: Option<Duration>,
    pub nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            time: Some(Duration::from_secs(60)),
            nodes: 100_000_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            time: None,
            nodes: u64::MAX,
        }
    }

    pub fn with_time(seconds: u64) -> Self {
        Budget {
            time: Some(Duration::from_secs(seconds)),
            ..Budget::default()
        }
    }
}

pub const DEFAULT_MEMO_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_hits: u64,
}

#[derive(Debug, Clone)]
pub enum AtomOutcome {
    Solved(Region),
    Unsolvable,
    BudgetExceeded,
}

impl AtomOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, AtomOutcome::Solved(_))
    }
}

#[derive(Debug, Clone)]
pub struct AtomResult {
    pub outcome: AtomOutcome,
    pub stats: SearchStats,
}

const UNKNOWN: u8 = u8::MAX;

struct Search<'a> {
    carrier: &'a Union,
    net_type: NetType,
    bound: u8,
    atom: SeparationAtom,
    atom_comp: usize,
    /// Branch order over global event indices.
    order: Vec<usize>,
    /// Candidate values per branch position.
    domains: Vec<Vec<TypeEvent>>,
    /// Current partial assignment per global event.
    assigned: Vec<Option<TypeEvent>>,
    /// Components containing each global event.
    comps_of_event: Vec<Vec<usize>>,
    /// Outgoing edges per component and local state, as (global event, dst).
    adjacency: Vec<Vec<Vec<(usize, usize)>>>,
    /// Per-position value choice, for memo keys.
    choices: Vec<u8>,
    memo: HashSet<Vec<u8>>,
    memo_cap: usize,
    stats: SearchStats,
    deadline: Option<Instant>,
    node_limit: u64,
    /// Scratch buffers for propagation, one per component.
    scratch: Vec<Vec<u8>>,
    worklist: Vec<usize>,
}

enum Step {
    Found(Region),
    Exhausted,
    Budget,
}

impl<'a> Search<'a> {
    fn new(
        carrier: &'a Union,
        atom: SeparationAtom,
        net_type: NetType,
        budget: Budget,
        memo_cap: usize,
    ) -> Self {
        let atom_state = match atom {
            SeparationAtom::Ssp { left, .. } => left,
            SeparationAtom::Essp { state, .. } => state,
        };
        let atom_comp = carrier.component_of_state(atom_state);
        let n_events = carrier.events().len();

        let mut comps_of_event = vec![Vec::new(); n_events];
        for (ci, comp) in carrier.components().iter().enumerate() {
            for le in 0..comp.event_count() {
                comps_of_event[carrier.global_event(ci, le)].push(ci);
            }
        }

        // Branch order: the atom event first (for ESSP), then the events of
        // the atom's component in BFS-first-occurrence order, then the
        // remaining components by ascending size. Events occurring nowhere
        // never constrain anything and keep the neutral signature.
        let mut order: Vec<usize> = Vec::new();
        let mut placed = vec![false; n_events];
        let atom_event = match atom {
            SeparationAtom::Essp { event, .. } => Some(event),
            SeparationAtom::Ssp { .. } => None,
        };
        if let Some(e) = atom_event {
            order.push(e);
            placed[e] = true;
        }
        let mut comp_order: Vec<usize> = (0..carrier.components().len()).collect();
        comp_order.sort_by_key(|&c| {
            (
                c != atom_comp,
                carrier.component(c).state_count(),
                c,
            )
        });
        for &ci in &comp_order {
            let comp = carrier.component(ci);
            for local in comp.bfs_order() {
                for le in 0..comp.event_count() {
                    if comp.successor(local, le).is_some() {
                        let ge = carrier.global_event(ci, le);
                        if !placed[ge] {
                            placed[ge] = true;
                            order.push(ge);
                        }
                    }
                }
            }
        }

        let all_events = net_type.events();
        // An ESSP witness needs the atom event disabled somewhere, which
        // rules out every total event.
        let essp_candidates: Vec<TypeEvent> =
            all_events.iter().copied().filter(|e| !e.total()).collect();
        let domains = order
            .iter()
            .map(|&ge| {
                if atom_event == Some(ge) {
                    essp_candidates.clone()
                } else {
                    all_events.clone()
                }
            })
            .collect();

        let mut assigned = vec![None; n_events];
        // Events used by no transition are fixed to the neutral event.
        for ge in 0..n_events {
            if !placed[ge] && atom_event != Some(ge) {
                assigned[ge] = Some(net_type.neutral());
            }
        }

        let scratch = carrier
            .components()
            .iter()
            .map(|c| vec![UNKNOWN; c.state_count()])
            .collect();
        let adjacency = carrier
            .components()
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                (0..c.state_count())
                    .map(|s| {
                        (0..c.event_count())
                            .filter_map(|le| {
                                c.successor(s, le)
                                    .map(|d| (carrier.global_event(ci, le), d))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        Search {
            carrier,
            net_type,
            bound: net_type.bound(),
            atom,
            atom_comp,
            order,
            domains,
            assigned,
            comps_of_event,
            adjacency,
            choices: Vec::new(),
            memo: HashSet::new(),
            memo_cap,
            stats: SearchStats::default(),
            deadline: budget.time.map(|t| Instant::now() + t),
            node_limit: budget.nodes,
            scratch,
            worklist: Vec::new(),
        }
    }

    fn out_of_budget(&self) -> bool {
        if self.stats.nodes > self.node_limit {
            return true;
        }
        if self.stats.nodes % 1024 == 0 {
            if let Some(d) = self.deadline {
                return Instant::now() >= d;
            }
        }
        false
    }

    /// Propagates the partial signature through component `ci` from initial
    /// support `init`. Returns the support table when no contradiction (and
    /// no atom violation) arises; `None` otherwise. Only forward steps are
    /// taken: once every event is assigned, reachability determines every
    /// state.
    fn propagate(&mut self, ci: usize, init: u8) -> bool {
        let comp = self.carrier.component(ci);
        let sup = &mut self.scratch[ci];
        sup.fill(UNKNOWN);
        sup[comp.initial()] = init;
        for local in comp.bfs_order() {
            if sup[local] == UNKNOWN {
                continue;
            }
            for le in 0..comp.event_count() {
                let Some(dst) = comp.successor(local, le) else {
                    continue;
                };
                let ge = self.carrier.global_event(ci, le);
                let Some(sig) = self.assigned[ge] else { continue };
                match delta_raw(self.bound, sup[local], sig) {
                    None => return false,
                    Some(v) => {
                        if sup[dst] == UNKNOWN {
                            sup[dst] = v;
                        } else if sup[dst] != v {
                            return false;
                        }
                    }
                }
            }
        }
        if ci == self.atom_comp {
            match self.atom {
                SeparationAtom::Ssp { left, right } => {
                    let (_, l) = self.carrier.local_state(left);
                    let (_, r) = self.carrier.local_state(right);
                    let sup = &self.scratch[ci];
                    if sup[l] != UNKNOWN && sup[l] == sup[r] {
                        return false;
                    }
                }
                SeparationAtom::Essp { event, state } => {
                    let (_, s) = self.carrier.local_state(state);
                    if let (v, Some(sig)) = (self.scratch[ci][s], self.assigned[event]) {
                        if v != UNKNOWN && delta_raw(self.bound, v, sig).is_some() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// A component is feasible while some initial support propagates cleanly.
    fn component_feasible(&mut self, ci: usize) -> bool {
        (0..=self.bound).any(|v| self.propagate(ci, v))
    }

    fn dive(&mut self, depth: usize) -> Step {
        if depth == self.order.len() {
            return match self.build_witness() {
                Some(region) => Step::Found(region),
                None => Step::Exhausted,
            };
        }
        if self.memo.contains(&self.choices) {
            self.stats.memo_hits += 1;
            return Step::Exhausted;
        }
        let ge = self.order[depth];
        let mut complete = true;
        for vi in 0..self.domains[depth].len() {
            self.stats.nodes += 1;
            if self.out_of_budget() {
                return Step::Budget;
            }
            let value = self.domains[depth][vi];
            self.assigned[ge] = Some(value);
            let viable = {
                let comps = std::mem::take(&mut self.comps_of_event[ge]);
                let ok = comps.iter().all(|&ci| self.component_feasible(ci))
                    && (self.comps_of_event_has(ge) || self.atom_component_feasible_for(ge));
                self.comps_of_event[ge] = comps;
                ok
            };
            if viable {
                self.choices.push(vi as u8);
                let step = self.dive(depth + 1);
                self.choices.pop();
                match step {
                    Step::Found(r) => {
                        self.assigned[ge] = None;
                        return Step::Found(r);
                    }
                    Step::Budget => {
                        self.assigned[ge] = None;
                        return Step::Budget;
                    }
                    Step::Exhausted => {}
                }
            }
            // A lone infeasible value is still a completed subtree.
            let _ = complete;
        }
        self.assigned[ge] = None;
        if complete && self.memo.len() < self.memo_cap {
            self.memo.insert(self.choices.clone());
        }
        Step::Exhausted
    }

    // The atom event may live outside the atom state's component (an event
    // never occurring there); re-check the atom component in that case.
    fn comps_of_event_has(&self, ge: usize) -> bool {
        self.comps_of_event[ge].contains(&self.atom_comp)
    }

    fn atom_component_feasible_for(&mut self, ge: usize) -> bool {
        match self.atom {
            SeparationAtom::Essp { event, .. } if event == ge => {
                self.component_feasible(self.atom_comp)
            }
            _ => true,
        }
    }

    /// At a leaf every event is assigned; pick the smallest viable initial
    /// support per component and assemble the region.
    fn build_witness(&mut self) -> Option<Region> {
        let n = self.carrier.components().len();
        let mut support = vec![0u8; self.carrier.total_states()];
        for ci in 0..n {
            let mut found = false;
            for v in 0..=self.bound {
                if self.propagate(ci, v) {
                    let comp_size = self.carrier.component(ci).state_count();
                    for local in 0..comp_size {
                        debug_assert_ne!(self.scratch[ci][local], UNKNOWN);
                        support[self.carrier.global_state(ci, local)] = self.scratch[ci][local];
                    }
                    found = true;
                    break;
                }
            }
            if !found {
                return None;
            }
        }
        let signature: Vec<TypeEvent> = self
            .assigned
            .iter()
            .map(|s| s.expect("leaf has a total assignment"))
            .collect();
        Some(Region::from_parts("witness", support, signature))
    }
}

/// Decides the solvability of a single atom. `Solved` carries a verified
/// witness, `Unsolvable` means the full space was exhausted, and a blown
/// budget is reported as such rather than folded into either verdict.
pub fn solve_atom(
    carrier: &Union,
    atom: SeparationAtom,
    net_type: NetType,
    budget: Budget,
) -> Result<AtomResult> {
    solve_atom_with(carrier, atom, net_type, budget, DEFAULT_MEMO_CAP)
}

pub fn solve_atom_with(
    carrier: &Union,
    atom: SeparationAtom,
    net_type: NetType,
    budget: Budget,
    memo_cap: usize,
) -> Result<AtomResult> {
    let mut search = Search::new(carrier, atom, net_type, budget, memo_cap);
    let step = search.dive(0);
    let stats = search.stats;
    let outcome = match step {
        Step::Found(region) => {
            // Witnesses are checked before they are returned.
            let verdict = verify_region(carrier, &region, net_type)?;
            assert!(
                verdict.is_accept() && solves(carrier, &region, &atom, net_type),
                "solver produced a non-witness for {}",
                atom.display(carrier)
            );
            AtomOutcome::Solved(region)
        }
        Step::Exhausted => AtomOutcome::Unsolvable,
        Step::Budget => AtomOutcome::BudgetExceeded,
    };
    Ok(AtomResult { outcome, stats })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Essp,
    Ssp,
    Feasibility,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::Essp => "essp",
            Property::Ssp => "ssp",
            Property::Feasibility => "feasibility",
        }
    }

    pub fn from_str(s: &str) -> Result<Self> {
        match s {
            "essp" => Ok(Property::Essp),
            "ssp" => Ok(Property::Ssp),
            "feasibility" => Ok(Property::Feasibility),
            other => Err(Error::UnknownIdentifier(other.to_string())),
        }
    }

    fn wants(self, atom: &SeparationAtom) -> bool {
        match self {
            Property::Essp => !atom.is_ssp(),
            Property::Ssp => atom.is_ssp(),
            Property::Feasibility => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomVerdict {
    /// Index into the report's witness list.
    Solved { witness: usize },
    Unsolvable,
    BudgetExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Holds,
    Refuted,
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub property: Property,
    /// Atom verdicts in canonical order; a prefix of all atoms when the
    /// search short-circuited on the first unsolvable atom.
    pub atoms: Vec<(SeparationAtom, AtomVerdict)>,
    pub witnesses: Vec<Region>,
    pub aggregate: Aggregate,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy)]
pub struct DecideOptions {
    pub budget: Budget,
    /// Keep solving after the first unsolvable atom.
    pub all: bool,
    /// Reuse earlier witnesses across atoms to shrink the witness set.
    pub greedy_cover: bool,
    pub jobs: usize,
    pub memo_cap: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            budget: Budget::default(),
            all: false,
            greedy_cover: false,
            jobs: 1,
            memo_cap: DEFAULT_MEMO_CAP,
        }
    }
}

/// Decides a separation property by solving every atom of the requested
/// class. The report is assembled in canonical atom order and is identical
/// for identical requests, independent of the worker count.
pub fn decide(
    carrier: &Union,
    property: Property,
    net_type: NetType,
    opts: DecideOptions,
) -> Result<SolveReport> {
    let atoms: Vec<SeparationAtom> = enumerate_atoms(carrier)
        .into_iter()
        .filter(|a| property.wants(a))
        .collect();

    let results: Vec<AtomResult> = if opts.jobs <= 1 {
        decide_serial(carrier, &atoms, net_type, &opts)?
    } else {
        decide_parallel(carrier, &atoms, net_type, &opts)?
    };

    let mut report = SolveReport {
        property,
        atoms: Vec::new(),
        witnesses: Vec::new(),
        aggregate: Aggregate::Holds,
        stats: SearchStats::default(),
    };
    let mut budget_hit = false;
    for (atom, result) in atoms.iter().zip(results.into_iter()) {
        report.stats.nodes += result.stats.nodes;
        report.stats.memo_hits += result.stats.memo_hits;
        let verdict = match result.outcome {
            AtomOutcome::Solved(region) => {
                let idx = if opts.greedy_cover {
                    // Reuse is resolved during the serial pass; regions equal
                    // to an existing witness collapse onto it.
                    match report.witnesses.iter().position(|w| w == &region) {
                        Some(i) => i,
                        None => {
                            report.witnesses.push(region);
                            report.witnesses.len() - 1
                        }
                    }
                } else {
                    report.witnesses.push(region);
                    report.witnesses.len() - 1
                };
                AtomVerdict::Solved { witness: idx }
            }
            AtomOutcome::Unsolvable => AtomVerdict::Unsolvable,
            AtomOutcome::BudgetExceeded => {
                budget_hit = true;
                AtomVerdict::BudgetExceeded
            }
        };
        report.atoms.push((*atom, verdict));
        if verdict == AtomVerdict::Unsolvable {
            report.aggregate = Aggregate::Refuted;
            if !opts.all {
                break;
            }
        }
    }
    if report.aggregate != Aggregate::Refuted && budget_hit {
        report.aggregate = Aggregate::BudgetExceeded;
    }
    Ok(report)
}

fn decide_serial(
    carrier: &Union,
    atoms: &[SeparationAtom],
    net_type: NetType,
    opts: &DecideOptions,
) -> Result<Vec<AtomResult>> {
    let mut results = Vec::with_capacity(atoms.len());
    let mut witnesses: Vec<Region> = Vec::new();
    for atom in atoms {
        if opts.greedy_cover {
            if let Some(w) = witnesses
                .iter()
                .find(|w| solves(carrier, w, atom, net_type))
            {
                results.push(AtomResult {
                    outcome: AtomOutcome::Solved(w.clone()),
                    stats: SearchStats::default(),
                });
                continue;
            }
        }
        let result = solve_atom_with(carrier, *atom, net_type, opts.budget, opts.memo_cap)?;
        if let AtomOutcome::Solved(w) = &result.outcome {
            if opts.greedy_cover {
                witnesses.push(w.clone());
            }
        }
        let stop = matches!(result.outcome, AtomOutcome::Unsolvable) && !opts.all;
        results.push(result);
        if stop {
            break;
        }
    }
    Ok(results)
}

fn decide_parallel(
    carrier: &Union,
    atoms: &[SeparationAtom],
    net_type: NetType,
    opts: &DecideOptions,
) -> Result<Vec<AtomResult>> {
    let next = AtomicUsize::new(0);
    let stop_at = AtomicUsize::new(usize::MAX);
    let slots: Mutex<Vec<Option<AtomResult>>> = Mutex::new(vec![None; atoms.len()]);
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..opts.jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= atoms.len() || i > stop_at.load(Ordering::SeqCst) {
                    return;
                }
                match solve_atom_with(carrier, atoms[i], net_type, opts.budget, opts.memo_cap) {
                    Ok(result) => {
                        if matches!(result.outcome, AtomOutcome::Unsolvable) && !opts.all {
                            stop_at.fetch_min(i, Ordering::SeqCst);
                        }
                        slots.lock().unwrap()[i] = Some(result);
                    }
                    Err(e) => {
                        *failure.lock().unwrap() = Some(e);
                        stop_at.store(0, Ordering::SeqCst);
                        return;
                    }
                }
            });
        }
    });

    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    // Keep the deterministic prefix: everything up to and including the
    // first unsolvable atom (all earlier slots were claimed before it).
    let slots = slots.into_inner().unwrap();
    let cut = stop_at.load(Ordering::SeqCst);
    let mut results = Vec::new();
    for (i, slot) in slots.into_iter().enumerate() {
        if i > cut {
            break;
        }
        match slot {
            Some(r) => results.push(r),
            None => break,
        }
    }
    Ok(results)
}

/// Exact reference decision procedure: enumerates every signature assignment
/// over the used events and every per-component initial support. Guarded by
/// the total space size; meant for cross-checking the backtracking solver on
/// small carriers.
pub fn naive_atom_verdicts(
    carrier: &Union,
    atoms: &[SeparationAtom],
    net_type: NetType,
    space_cap: u128,
) -> Result<Vec<bool>> {
    let b = net_type.bound();
    let events = net_type.events();
    let used: Vec<usize> = (0..carrier.events().len())
        .filter(|&ge| {
            carrier
                .components()
                .iter()
                .enumerate()
                .any(|(ci, c)| {
                    (0..c.event_count()).any(|le| {
                        carrier.global_event(ci, le) == ge
                            && c.occurs_at_idx(le).next().is_some()
                    })
                })
                || atoms.iter().any(|a| matches!(a, SeparationAtom::Essp { event, .. } if *event == ge))
        })
        .collect();
    let comps = carrier.components().len();
    let space = (events.len() as u128)
        .checked_pow(used.len() as u32)
        .and_then(|s| s.checked_mul((b as u128 + 1).pow(comps as u32)))
        .unwrap_or(u128::MAX);
    if space > space_cap {
        return Err(Error::SizeGuard(format!(
            "{space} candidate regions exceed the cap of {space_cap}"
        )));
    }

    let mut solvable = vec![false; atoms.len()];
    let mut signature = vec![net_type.neutral(); carrier.events().len()];
    let mut odometer = vec![0usize; used.len()];
    loop {
        for (pos, &ge) in used.iter().enumerate() {
            signature[ge] = events[odometer[pos]];
        }
        // For the fixed signature, collect the valid support tables per
        // component and initial value.
        let mut tables: Vec<Vec<Option<Vec<u8>>>> = Vec::with_capacity(comps);
        let mut all_feasible = true;
        for (ci, comp) in carrier.components().iter().enumerate() {
            let mut per_init = Vec::with_capacity(b as usize + 1);
            let mut any = false;
            for init in 0..=b {
                let table = propagate_full(carrier, ci, init, &signature, b);
                any |= table.is_some();
                per_init.push(table);
            }
            if !any {
                all_feasible = false;
                let _ = comp;
                break;
            }
            tables.push(per_init);
        }
        if all_feasible {
            for (ai, atom) in atoms.iter().enumerate() {
                if solvable[ai] {
                    continue;
                }
                let comp = match *atom {
                    SeparationAtom::Ssp { left, .. } => carrier.component_of_state(left),
                    SeparationAtom::Essp { state, .. } => carrier.component_of_state(state),
                };
                let hit = tables[comp].iter().flatten().any(|sup| match *atom {
                    SeparationAtom::Ssp { left, right } => {
                        let (_, l) = carrier.local_state(left);
                        let (_, r) = carrier.local_state(right);
                        sup[l] != sup[r]
                    }
                    SeparationAtom::Essp { event, state } => {
                        let (_, s) = carrier.local_state(state);
                        delta_raw(b, sup[s], signature[event]).is_none()
                    }
                });
                if hit {
                    solvable[ai] = true;
                }
            }
            if solvable.iter().all(|&s| s) {
                return Ok(solvable);
            }
        }
        // Advance the odometer.
        let mut pos = 0;
        loop {
            if pos == used.len() {
                return Ok(solvable);
            }
            odometer[pos] += 1;
            if odometer[pos] < events.len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}

fn propagate_full(
    carrier: &Union,
    ci: usize,
    init: u8,
    signature: &[TypeEvent],
    b: u8,
) -> Option<Vec<u8>> {
    let comp = carrier.component(ci);
    let mut sup = vec![UNKNOWN; comp.state_count()];
    sup[comp.initial()] = init;
    for local in comp.bfs_order() {
        debug_assert_ne!(sup[local], UNKNOWN);
        for le in 0..comp.event_count() {
            let Some(dst) = comp.successor(local, le) else {
                continue;
            };
            let sig = signature[carrier.global_event(ci, le)];
            match delta_raw(b, sup[local], sig) {
                None => return None,
                Some(v) => {
                    if sup[dst] == UNKNOWN {
                        sup[dst] = v;
                    } else if sup[dst] != v {
                        return None;
                    }
                }
            }
        }
    }
    Some(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nettype::Family;
    use crate::samples;

    fn grid() -> Union {
        Union::single(samples::grid_ts())
    }

    #[test]
    fn sample_atom_solved_under_tau0() {
        let u = grid();
        let nt = NetType::new(Family::Tau0, 2).unwrap();
        let atom = SeparationAtom::essp(&u, "c", "1").unwrap();
        let result = solve_atom(&u, atom, nt, Budget::default()).unwrap();
        assert!(result.outcome.is_solved());
    }

    #[test]
    fn sample_atom_unsolvable_under_tau1() {
        let u = grid();
        let nt = NetType::new(Family::Tau1, 2).unwrap();
        for state in ["1", "2", "5", "6"] {
            let atom = SeparationAtom::essp(&u, "c", state).unwrap();
            let result = solve_atom(&u, atom, nt, Budget::default()).unwrap();
            assert!(
                matches!(result.outcome, AtomOutcome::Unsolvable),
                "(c,{state}) must be unsolvable"
            );
        }
    }

    #[test]
    fn decide_feasibility_tau0() {
        let u = grid();
        let nt = NetType::new(Family::Tau0, 2).unwrap();
        let report = decide(&u, Property::Feasibility, nt, DecideOptions::default()).unwrap();
        assert_eq!(report.aggregate, Aggregate::Holds);
        assert!(!report.witnesses.is_empty());
        assert_eq!(report.atoms.len(), 66 + 23);
    }

    #[test]
    fn decide_essp_tau1_refuted() {
        let u = grid();
        let nt = NetType::new(Family::Tau1, 2).unwrap();
        let report = decide(&u, Property::Essp, nt, DecideOptions::default()).unwrap();
        assert_eq!(report.aggregate, Aggregate::Refuted);
        let (atom, verdict) = report.atoms.last().unwrap();
        assert_eq!(*verdict, AtomVerdict::Unsolvable);
        assert_eq!(atom.display(&u), "essp c 1");
    }

    #[test]
    fn decide_feasibility_tau3() {
        let u = grid();
        let nt = NetType::new(Family::Tau3, 2).unwrap();
        let report = decide(&u, Property::Feasibility, nt, DecideOptions::default()).unwrap();
        assert_eq!(report.aggregate, Aggregate::Holds);
    }

    #[test]
    fn parallel_decide_matches_serial() {
        let u = grid();
        let nt = NetType::new(Family::Tau1, 2).unwrap();
        let serial = decide(&u, Property::Ssp, nt, DecideOptions::default()).unwrap();
        let parallel = decide(
            &u,
            Property::Ssp,
            nt,
            DecideOptions {
                jobs: 4,
                ..DecideOptions::default()
            },
        )
        .unwrap();
        assert_eq!(serial.aggregate, parallel.aggregate);
        let verdicts = |r: &SolveReport| -> Vec<bool> {
            r.atoms
                .iter()
                .map(|(_, v)| matches!(v, AtomVerdict::Solved { .. }))
                .collect()
        };
        assert_eq!(verdicts(&serial), verdicts(&parallel));
    }

    #[test]
    fn greedy_cover_shrinks_witness_set() {
        let u = grid();
        let nt = NetType::new(Family::Tau0, 2).unwrap();
        let plain = decide(&u, Property::Ssp, nt, DecideOptions::default()).unwrap();
        let greedy = decide(
            &u,
            Property::Ssp,
            nt,
            DecideOptions {
                greedy_cover: true,
                ..DecideOptions::default()
            },
        )
        .unwrap();
        assert!(greedy.witnesses.len() <= plain.witnesses.len());
        assert_eq!(greedy.aggregate, Aggregate::Holds);
    }

    #[test]
    fn tiny_budget_reports_exceeded() {
        let u = grid();
        let nt = NetType::new(Family::Tau1, 2).unwrap();
        let atom = SeparationAtom::essp(&u, "c", "1").unwrap();
        let result = solve_atom(
            &u,
            atom,
            nt,
            Budget {
                time: None,
                nodes: 2,
            },
        )
        .unwrap();
        assert!(matches!(result.outcome, AtomOutcome::BudgetExceeded));
    }

    #[test]
    fn naive_matches_solver_on_sample() {
        let u = grid();
        for family in [Family::Tau0, Family::Tau1] {
            let nt = NetType::new(family, 2).unwrap();
            let atoms = enumerate_atoms(&u);
            let naive = naive_atom_verdicts(&u, &atoms, nt, 1 << 24).unwrap();
            for (atom, expect) in atoms.iter().zip(naive) {
                let got = solve_atom(&u, *atom, nt, Budget::default()).unwrap();
                assert_eq!(
                    got.outcome.is_solved(),
                    expect,
                    "{} under {}",
                    atom.display(&u),
                    nt
                );
            }
        }
    }
}
