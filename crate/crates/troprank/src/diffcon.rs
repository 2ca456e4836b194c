//! Difference-constraint systems solved exactly by Bellman-Ford.
//!
//! A system is a conjunction of constraints x_u - x_v <= c over rational c.
//! Feasibility is equivalent to the absence of a negative cycle in the graph
//! with an edge v -> u of weight c per constraint; the shortest-path
//! potentials from a virtual source give a concrete solution.

use num_rational::BigRational;

#[derive(Debug, Clone, Default)]
pub struct DiffConstraints {
    n: usize,
    edges: Vec<(usize, usize, BigRational)>,
}

impl DiffConstraints {
    pub fn new(n: usize) -> Self {
        DiffConstraints {
            n,
            edges: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// x_u - x_v <= c
    pub fn add_le(&mut self, u: usize, v: usize, c: BigRational) {
        debug_assert!(u < self.n && v < self.n);
        self.edges.push((u, v, c));
    }

    /// x_u - x_v = c
    pub fn add_eq(&mut self, u: usize, v: usize, c: BigRational) {
        self.add_le(u, v, c.clone());
        self.add_le(v, u, -c);
    }

    pub fn checkpoint(&self) -> usize {
        self.edges.len()
    }

    pub fn rollback(&mut self, checkpoint: usize) {
        self.edges.truncate(checkpoint);
    }

    /// A solution vector, or None if the system is infeasible. Initializing
    /// every distance to 0 plays the role of a virtual source with zero-weight
    /// edges to all variables, so the output is deterministic.
    pub fn solve(&self) -> Option<Vec<BigRational>> {
        let mut dist = vec![BigRational::default(); self.n];
        for round in 0..self.n {
            let mut changed = false;
            for (u, v, c) in &self.edges {
                let cand = &dist[*v] + c;
                if cand < dist[*u] {
                    dist[*u] = cand;
                    changed = true;
                }
            }
            if !changed {
                return Some(dist);
            }
            if round + 1 == self.n {
                // Still relaxing after n rounds: negative cycle.
                return None;
            }
        }
        Some(dist)
    }

    pub fn is_feasible(&self) -> bool {
        self.solve().is_some()
    }

    /// True if `sol` satisfies every constraint (used by tests and witness
    /// re-verification).
    pub fn check(&self, sol: &[BigRational]) -> bool {
        self.edges
            .iter()
            .all(|(u, v, c)| &sol[*u] - &sol[*v] <= *c)
    }
}
