//! Small shared objects used by tests, the self-test driver and the docs:
//! a 12-state grid-shaped transition system with a catalog of regions over
//! it, and a handful of cubic monotone one-in-three SAT instances.

use crate::nettype::{Family, NetType, TypeEvent};
use crate::region::{complete_region, Completion, Region};
use crate::sat::SatInstance;
use crate::ts::{build_ts, TransitionSystem};
use crate::union::Union;

/// Three rows of `a a b` chained by `c` edges on both ends; 12 states,
/// 13 transitions, initial state `0`.
pub fn grid_ts() -> TransitionSystem {
    build_ts(
        "grid",
        &[
            "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11",
        ],
        &["a", "b", "c"],
        &[
            ("0", "a", "1"),
            ("1", "a", "2"),
            ("2", "b", "3"),
            ("4", "a", "5"),
            ("5", "a", "6"),
            ("6", "b", "7"),
            ("8", "a", "9"),
            ("9", "a", "10"),
            ("10", "b", "11"),
            ("0", "c", "4"),
            ("4", "c", "8"),
            ("3", "c", "7"),
            ("7", "c", "11"),
        ],
        "0",
    )
    .expect("sample grid is valid")
}

fn complete(u: &Union, name: &str, init: u8, sig: &[(&str, TypeEvent)], nt: NetType) -> Region {
    let mut signature = vec![nt.neutral(); u.events().len()];
    for (ev, te) in sig {
        signature[u.event_index(ev).unwrap()] = *te;
    }
    match complete_region(u, name, &[init], &signature, nt).unwrap() {
        Completion::Completed(r) => r,
        Completion::Inconsistent { src, event, dst } => {
            panic!("sample region {name} fails at {src} --{event}--> {dst}")
        }
    }
}

/// The four regions `r1`..`r4` over [`grid_ts`] for tau0 at bound 2.
/// Together they witness feasibility: r1 = (init 2; a=1:0 b=0:2 c=2:2),
/// r2 = (init 0; c=0:1), r3 = (init 0; a=0:1), r4 = (init 2; a=1:0 b=0:2).
pub fn grid_regions_tau0() -> Vec<Region> {
    let u = Union::single(grid_ts());
    let nt = NetType::new(Family::Tau0, 2).unwrap();
    let f = TypeEvent::flow;
    vec![
        complete(&u, "r1", 2, &[("a", f(1, 0)), ("b", f(0, 2)), ("c", f(2, 2))], nt),
        complete(&u, "r2", 0, &[("c", f(0, 1))], nt),
        complete(&u, "r3", 0, &[("a", f(0, 1))], nt),
        complete(&u, "r4", 2, &[("a", f(1, 0)), ("b", f(0, 2))], nt),
    ]
}

/// The pure-family subset `r2`..`r4`: the same signatures read under tau1.
pub fn grid_regions_tau1() -> Vec<Region> {
    let u = Union::single(grid_ts());
    let nt = NetType::new(Family::Tau1, 2).unwrap();
    let f = TypeEvent::flow;
    vec![
        complete(&u, "r2", 0, &[("c", f(0, 1))], nt),
        complete(&u, "r3", 0, &[("a", f(0, 1))], nt),
        complete(&u, "r4", 2, &[("a", f(1, 0)), ("b", f(0, 2))], nt),
    ]
}

/// The five regions `r2`..`r6` over [`grid_ts`] for tau3 at bound 2, with
/// every neutral flow read as the group identity. `r5` rotates by 1 on both
/// `a` and `b`; `r6` rotates by 2.
pub fn grid_regions_tau3() -> Vec<Region> {
    let u = Union::single(grid_ts());
    let nt = NetType::new(Family::Tau3, 2).unwrap();
    let f = TypeEvent::flow;
    let g = TypeEvent::Group;
    vec![
        complete(&u, "r2", 0, &[("c", f(0, 1))], nt),
        complete(&u, "r3", 0, &[("a", f(0, 1))], nt),
        complete(&u, "r4", 2, &[("a", f(1, 0)), ("b", f(0, 2))], nt),
        complete(&u, "r5", 0, &[("a", g(1)), ("b", g(1)), ("c", f(0, 1))], nt),
        complete(&u, "r6", 0, &[("a", g(2)), ("b", g(2)), ("c", f(0, 1))], nt),
    ]
}

/// Six clauses over six variables, each variable in exactly three clauses;
/// the lexicographically smallest one-in-three model is {X0, X4}.
pub fn cubic6() -> SatInstance {
    SatInstance::new(
        6,
        vec![
            [0, 1, 2],
            [2, 0, 3],
            [1, 3, 0],
            [2, 4, 5],
            [1, 5, 4],
            [4, 3, 5],
        ],
    )
}

/// The unique cubic monotone instance on three variables: every clause is
/// {X0, X1, X2}. Satisfiable with model {X0}.
pub fn cubic3() -> SatInstance {
    SatInstance::new(3, vec![[0, 1, 2], [0, 1, 2], [0, 1, 2]])
}

/// A clause-order variant of [`cubic3`]; the same instance as a set system.
pub fn cubic3_rotated() -> SatInstance {
    SatInstance::new(3, vec![[0, 1, 2], [1, 2, 0], [2, 0, 1]])
}

/// The four 3-subsets of four variables. Unsatisfiable: a model would need
/// 3|M| = m and 4 is not divisible by 3.
pub fn cubic4_unsat() -> SatInstance {
    SatInstance::new(4, vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_validate() {
        for inst in [cubic6(), cubic3(), cubic3_rotated(), cubic4_unsat()] {
            inst.validate(true).unwrap();
        }
    }

    #[test]
    fn tau3_supports_match_expected_rows() {
        let u = Union::single(grid_ts());
        let rs = grid_regions_tau3();
        let by_name = |r: &Region, names: &[&str]| -> Vec<u8> {
            names
                .iter()
                .map(|n| r.support(u.state_index(n).unwrap()))
                .collect()
        };
        let all = [
            "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11",
        ];
        assert_eq!(by_name(&rs[0], &all), vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]);
        assert_eq!(by_name(&rs[1], &all), vec![0, 1, 2, 2, 0, 1, 2, 2, 0, 1, 2, 2]);
        assert_eq!(by_name(&rs[2], &all), vec![2, 1, 0, 2, 2, 1, 0, 2, 2, 1, 0, 2]);
        assert_eq!(by_name(&rs[3], &all), vec![0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2]);
        assert_eq!(by_name(&rs[4], &all), vec![0, 2, 1, 0, 1, 0, 2, 1, 2, 1, 0, 2]);
    }
}
