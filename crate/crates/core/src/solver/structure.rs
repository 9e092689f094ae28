use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::SolveError;
use crate::model::{RateMatrix, SystemState};

/// A closed communicating class found while checking reducibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedClass {
    pub states: Vec<SystemState>,
}

impl fmt::Display for ClosedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 6;
        f.write_str("{")?;
        for (k, s) in self.states.iter().take(SHOWN).enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        if self.states.len() > SHOWN {
            write!(f, " … +{}", self.states.len() - SHOWN)?;
        }
        f.write_str("}")
    }
}

/// Indices (ascending) of the states reachable from the idle states,
/// provided they form a single communicating class.
///
/// Without LAA traffic the phase gates never open, so the cell settles in
/// OFF and the other idle states are merely transient. That case is
/// accepted when exactly one closed class exists, and the class alone is
/// returned. With LAA traffic any transient reachable state means some
/// gate is dead, and the chain is rejected.
pub fn recurrent_class(matrix: &RateMatrix) -> Result<Vec<usize>, SolveError> {
    let n = matrix.len();
    let mut reachable = vec![false; n];
    let mut stack = matrix.idle_states();
    for &s in &stack {
        reachable[s] = true;
    }
    while let Some(i) = stack.pop() {
        for &(j, _) in matrix.outgoing(i) {
            if !reachable[j] {
                reachable[j] = true;
                stack.push(j);
            }
        }
    }

    let comp = strongly_connected(matrix, &reachable);
    let members: Vec<usize> = (0..n).filter(|&i| reachable[i]).collect();
    let first = members.first().map(|&i| comp[i]);
    if members.iter().all(|&i| Some(comp[i]) == first) {
        return Ok(members);
    }

    // closed = no edge leaves the component
    let n_comp = comp.iter().filter_map(|&c| c).max().map_or(0, |c| c + 1);
    let mut leaks = vec![false; n_comp];
    for &i in &members {
        let ci = comp[i].expect("reachable state has a component");
        if matrix.outgoing(i).iter().any(|&(j, _)| comp[j] != Some(ci)) {
            leaks[ci] = true;
        }
    }
    let mut closed = Vec::new();
    let mut transient = 0;
    for (c, &leaky) in leaks.iter().enumerate() {
        let states: Vec<SystemState> = members
            .iter()
            .filter(|&&i| comp[i] == Some(c))
            .map(|&i| matrix.states()[i])
            .collect();
        if leaky {
            transient += states.len();
        } else {
            closed.push(ClosedClass { states });
        }
    }
    if closed.len() == 1 && matrix.params().lambda_laa == 0.0 {
        let c = (0..n_comp).find(|&c| !leaks[c]).expect("one closed class");
        return Ok(members
            .into_iter()
            .filter(|&i| comp[i] == Some(c))
            .collect());
    }
    closed.sort_by(|a, b| a.states.cmp(&b.states));
    Err(SolveError::Reducible { closed, transient })
}

/// Iterative Tarjan over the sub-graph of `active` states. Returns the
/// component id of each active state.
fn strongly_connected(matrix: &RateMatrix, active: &[bool]) -> Vec<Option<usize>> {
    let n = matrix.len();
    const UNSEEN: usize = usize::MAX;
    let mut order = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![None; n];
    let mut tarjan_stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut n_comp = 0;

    for root in 0..n {
        if !active[root] || order[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        order[root] = counter;
        low[root] = counter;
        counter += 1;
        tarjan_stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, edge)) = call.last() {
            let out = matrix.outgoing(v);
            if edge < out.len() {
                let w = out[edge].0;
                if let Some(top) = call.last_mut() {
                    top.1 += 1;
                }
                if !active[w] {
                    continue;
                }
                if order[w] == UNSEEN {
                    order[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    tarjan_stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(order[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == order[v] {
                    while let Some(w) = tarjan_stack.pop() {
                        on_stack[w] = false;
                        comp[w] = Some(n_comp);
                        if w == v {
                            break;
                        }
                    }
                    n_comp += 1;
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_rate_matrix, ModelParams, Phase, SenseRelease, ThresholdMode};

    #[test]
    fn reference_chains_are_irreducible() {
        let m = build_rate_matrix(&ModelParams::table1(25.0)).unwrap();
        let class = recurrent_class(&m).unwrap();
        // (2,0,0,1) has no way in: the only entries into ON happen at z ≥ Q_θ
        // and completions at z > 0 hand over instead of releasing
        assert_eq!(class.len(), 26);
        let hole = m.index_of(&SystemState::new(Phase::On, 0, 0, 1)).unwrap();
        assert!(!class.contains(&hole));

        let m = build_rate_matrix(&ModelParams::table2(25.0)).unwrap();
        let class = recurrent_class(&m).unwrap();
        // (2,0,0,1) and (2,0,0,2) cannot be reached without LBT
        assert_eq!(class.len(), 7);
        assert!(class.iter().all(|&i| {
            let s = m.states()[i];
            !(s.laa == 0 && s.wifi == 0 && s.queued > 0)
        }));
    }

    #[test]
    fn strict_threshold_at_capacity_is_reducible() {
        let p = ModelParams {
            threshold_mode: ThresholdMode::Strict,
            ..ModelParams::table1(50.0)
        };
        let m = build_rate_matrix(&p).unwrap();
        match recurrent_class(&m) {
            Err(SolveError::Reducible { closed, transient }) => {
                assert_eq!(closed.len(), 1);
                assert!(closed[0].states.iter().all(|s| s.phase == Phase::Off));
                assert!(transient > 0);
            }
            other => panic!("expected reducible, got {other:?}"),
        }
    }

    #[test]
    fn threshold_only_release_with_zero_threshold_is_reducible() {
        let p = ModelParams {
            sense_release: SenseRelease::ThresholdOnly,
            queue_threshold: 0,
            ..ModelParams::table1(50.0)
        };
        let m = build_rate_matrix(&p).unwrap();
        let err = recurrent_class(&m).unwrap_err();
        assert!(matches!(err, SolveError::Reducible { .. }));
        let msg = alloc::format!("{err}");
        assert!(msg.starts_with("reducible chain"), "{msg}");
    }

    #[test]
    fn silent_laa_stream_keeps_only_the_off_class() {
        let m = build_rate_matrix(&ModelParams::table1(0.0)).unwrap();
        let class = recurrent_class(&m).unwrap();
        assert_eq!(class.len(), 2);
        assert!(class.iter().all(|&i| m.states()[i].phase == Phase::Off));
        let r = crate::solver::solve_direct(&m).unwrap();
        assert_eq!(r.p_block_wifi, 0.0);
        assert!((r.pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
