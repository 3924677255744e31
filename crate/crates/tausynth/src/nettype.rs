//! The four parametric net-type families over the state set {0..b}.
//!
//! A net type is itself a transition system: states are token counts of a
//! single place, events describe how a transition interacts with that place.
//! `tau0` is the full b-bounded P/T interaction set, `tau1` its pure
//! restriction (no side conditions), `tau2`/`tau3` extend them with the
//! additive group of integers modulo b+1.

use std::fmt;

use crate::error::{Error, Result};
use crate::ts::TransitionSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Tau0,
    Tau1,
    Tau2,
    Tau3,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Tau0 => "tau0",
            Family::Tau1 => "tau1",
            Family::Tau2 => "tau2",
            Family::Tau3 => "tau3",
        }
    }

    pub fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau0" => Ok(Family::Tau0),
            "tau1" => Ok(Family::Tau1),
            "tau2" => Ok(Family::Tau2),
            "tau3" => Ok(Family::Tau3),
            other => Err(Error::UnknownIdentifier(other.to_string())),
        }
    }

    /// tau2/tau3 carry the group events 0..b in addition to flow events.
    pub fn has_group_events(self) -> bool {
        matches!(self, Family::Tau2 | Family::Tau3)
    }

    /// tau1/tau3 discard flow events (m,n) with both m and n positive.
    pub fn is_pure(self) -> bool {
        matches!(self, Family::Tau1 | Family::Tau3)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One event of a net type: either a flow interaction consuming `m` and
/// producing `n` tokens, or a group rotation adding `g` modulo b+1.
///
/// Text syntax is `m:n` for flows and `g+` for group events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeEvent {
    Flow { consume: u8, produce: u8 },
    Group(u8),
}

impl TypeEvent {
    pub fn flow(consume: u8, produce: u8) -> Self {
        TypeEvent::Flow { consume, produce }
    }

    /// Token consumption of the event (0 for group events).
    pub fn minus(self) -> u8 {
        match self {
            TypeEvent::Flow { consume, .. } => consume,
            TypeEvent::Group(_) => 0,
        }
    }

    /// Token production of the event (0 for group events).
    pub fn plus(self) -> u8 {
        match self {
            TypeEvent::Flow { produce, .. } => produce,
            TypeEvent::Group(_) => 0,
        }
    }

    /// Group offset of the event (0 for flow events).
    pub fn offset(self) -> u8 {
        match self {
            TypeEvent::Flow { .. } => 0,
            TypeEvent::Group(g) => g,
        }
    }

    /// True when the event is defined at every state of {0..b}: group events
    /// and the neutral flow (0,0).
    pub fn total(self) -> bool {
        match self {
            TypeEvent::Flow { consume, produce } => consume == 0 && produce == 0,
            TypeEvent::Group(_) => true,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if let Some(g) = s.strip_suffix('+') {
            let g = g
                .parse::<u8>()
                .map_err(|_| Error::UnknownIdentifier(s.to_string()))?;
            return Ok(TypeEvent::Group(g));
        }
        if let Some((m, n)) = s.split_once(':') {
            let consume = m
                .parse::<u8>()
                .map_err(|_| Error::UnknownIdentifier(s.to_string()))?;
            let produce = n
                .parse::<u8>()
                .map_err(|_| Error::UnknownIdentifier(s.to_string()))?;
            return Ok(TypeEvent::Flow { consume, produce });
        }
        Err(Error::UnknownIdentifier(s.to_string()))
    }
}

impl fmt::Display for TypeEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeEvent::Flow { consume, produce } => write!(f, "{consume}:{produce}"),
            TypeEvent::Group(g) => write!(f, "{g}+"),
        }
    }
}

/// Step function of a type over bound `b`, without membership checks.
///
/// Flow (m,n) is defined at s iff s >= m and s - m + n <= b; group events are
/// total and rotate modulo b+1.
pub fn delta_raw(bound: u8, s: u8, e: TypeEvent) -> Option<u8> {
    match e {
        TypeEvent::Flow { consume, produce } => {
            let t = s as i16 - consume as i16 + produce as i16;
            if s >= consume && t <= bound as i16 {
                Some(t as u8)
            } else {
                None
            }
        }
        TypeEvent::Group(g) => Some(((s as u16 + g as u16) % (bound as u16 + 1)) as u8),
    }
}

/// A concrete net type: a family instantiated at a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NetType {
    family: Family,
    bound: u8,
}

impl NetType {
    /// Builds a net type, enforcing the standing bound assumptions:
    /// b >= 1 for tau0/tau1 and b >= 2 for the group-extended families.
    pub fn new(family: Family, bound: u8) -> Result<Self> {
        let min = if family.has_group_events() { 2 } else { 1 };
        if bound < min {
            return Err(Error::InvalidBound {
                family: family.as_str().to_string(),
                bound,
            });
        }
        Ok(NetType { family, bound })
    }

    /// Like [`NetType::new`] but allows b = 1 for tau2/tau3. Such types fall
    /// outside the standing assumptions and are only meant for
    /// experimentation.
    pub fn new_permissive(family: Family, bound: u8) -> Result<Self> {
        if bound < 1 {
            return Err(Error::InvalidBound {
                family: family.as_str().to_string(),
                bound,
            });
        }
        Ok(NetType { family, bound })
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn bound(self) -> u8 {
        self.bound
    }

    pub fn contains(self, e: TypeEvent) -> bool {
        match e {
            TypeEvent::Flow { consume, produce } => {
                if consume > self.bound || produce > self.bound {
                    return false;
                }
                if self.family.is_pure() && consume >= 1 && produce >= 1 {
                    return false;
                }
                if self.family.has_group_events() && consume == 0 && produce == 0 {
                    return false;
                }
                true
            }
            TypeEvent::Group(g) => self.family.has_group_events() && g <= self.bound,
        }
    }

    /// All events of the type in canonical order: flows sorted by
    /// (consume, produce), then group events ascending.
    pub fn events(self) -> Vec<TypeEvent> {
        let mut out = Vec::new();
        for m in 0..=self.bound {
            for n in 0..=self.bound {
                let e = TypeEvent::flow(m, n);
                if self.contains(e) {
                    out.push(e);
                }
            }
        }
        if self.family.has_group_events() {
            for g in 0..=self.bound {
                out.push(TypeEvent::Group(g));
            }
        }
        out
    }

    /// The event that fixes every support: Flow(0,0) where available,
    /// Group(0) for the group-extended families.
    pub fn neutral(self) -> TypeEvent {
        if self.family.has_group_events() {
            TypeEvent::Group(0)
        } else {
            TypeEvent::flow(0, 0)
        }
    }

    /// Partial step function, rejecting events outside the type.
    pub fn delta(self, s: u8, e: TypeEvent) -> Result<Option<u8>> {
        if !self.contains(e) {
            return Err(Error::EventNotInType(e.to_string()));
        }
        if s > self.bound {
            return Err(Error::ArityMismatch(format!(
                "state {s} exceeds bound {}",
                self.bound
            )));
        }
        Ok(delta_raw(self.bound, s, e))
    }

    /// Renders the type as an explicit transition system over {0..b} with one
    /// transition per defined step. Types are not initialized objects; state
    /// 0 is used as the initial state purely as a rendering convenience.
    pub fn as_transition_system(self) -> TransitionSystem {
        let states: Vec<String> = (0..=self.bound).map(|s| s.to_string()).collect();
        let events: Vec<String> = self.events().iter().map(|e| e.to_string()).collect();
        let mut transitions = Vec::new();
        for s in 0..=self.bound {
            for e in self.events() {
                if let Some(t) = delta_raw(self.bound, s, e) {
                    transitions.push((s.to_string(), e.to_string(), t.to_string()));
                }
            }
        }
        TransitionSystem::build(
            &format!("{}.b{}", self.family, self.bound),
            &states,
            &events,
            &transitions,
            "0",
        )
        .expect("type renders as a valid transition system")
    }
}

impl fmt::Display for NetType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.family, self.bound)
    }
}
