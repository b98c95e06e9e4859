use super::Circuit;

/// Gates packed into parallel time steps. Each step lists indices into
/// `Circuit::gates` and touches every wire at most once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    pub steps: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    /// Gate indices in execution order.
    pub fn order(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().flatten().copied()
    }

    pub fn gate_count(&self) -> usize {
        self.steps.iter().map(Vec::len).sum()
    }

    /// True when this schedule contains every gate of `c` exactly once, no
    /// step reuses a wire, and per-wire gate order is preserved.
    pub fn is_valid_for(&self, c: &Circuit) -> bool {
        let mut seen = vec![false; c.gates.len()];
        let mut last_on_wire: Vec<Option<usize>> = vec![None; c.n_wires];
        for step in &self.steps {
            let mut used = vec![false; c.n_wires];
            for &g in step {
                if g >= c.gates.len() || std::mem::replace(&mut seen[g], true) {
                    return false;
                }
                for &w in &c.gates[g].wires {
                    if std::mem::replace(&mut used[w], true) {
                        return false;
                    }
                    if last_on_wire[w].is_some_and(|prev| prev > g) {
                        return false;
                    }
                    last_on_wire[w] = Some(g);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Greedy as-soon-as-possible packing: each gate lands in the first step
/// after the last step that used any of its wires.
pub fn schedule(c: &Circuit) -> Schedule {
    let mut next_free = vec![0usize; c.n_wires];
    let mut steps: Vec<Vec<usize>> = Vec::new();
    for (i, g) in c.gates.iter().enumerate() {
        let step = g.wires.iter().map(|&w| next_free[w]).max().unwrap_or(0);
        if step == steps.len() {
            steps.push(Vec::new());
        }
        steps[step].push(i);
        for &w in &g.wires {
            next_free[w] = step + 1;
        }
    }
    Schedule { steps }
}
