//! Barvinok rank: the least r such that the matrix is the entrywise minimum
//! of r outer sums a^k ⊙ (b^k)^T.
//!
//! Search model: every cell is assigned to one "tight group"; group k is
//! feasible when some pair (a, b) satisfies a_i + b_j = M_ij on its cells and
//! a_i + b_j >= M_ij everywhere, which is a difference-constraint system
//! decided exactly by shortest-path feasibility. Branch-and-bound assigns
//! cells to groups; two sound prunings keep it fast: a group must be a clique
//! in the precomputed pairwise-compatibility graph, and a greedy clique of
//! pairwise-incompatible cells both lower-bounds r and is pre-assigned to
//! pairwise-distinct groups.

use crate::diffcon::DiffConstraints;
use crate::semiring::{outer_sum, TropMatrix, TropScalar};
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarvinokError {
    #[error("barvinok engine is guarded at dimensions <= {max}, got {rows}x{cols}")]
    DimensionGuard {
        rows: usize,
        cols: usize,
        max: usize,
    },
}

const DIMENSION_MAX: usize = 6;

/// A minimal decomposition: the matrix equals the entrywise minimum of the
/// outer sums of `pairs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarvinokWitness {
    pub rank: usize,
    pub pairs: Vec<(Vec<TropScalar>, Vec<TropScalar>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BarvinokOutcome {
    Exact(BarvinokWitness),
    /// No decomposition with at most `max_r` terms exists.
    ExceedsMax { max_r: usize },
}

struct Search<'a> {
    a: &'a TropMatrix,
    cells: Vec<(usize, usize)>,
    /// compat[x][y]: cells x and y can share a tight group.
    compat: Vec<Vec<bool>>,
    /// One constraint system per group; global dominance constraints are the
    /// permanent prefix, per-cell equalities are pushed and rolled back.
    systems: Vec<DiffConstraints>,
    group_cells: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    /// Variables: rows are 0..m, column j is m + j holding -b_j, so
    /// a_i + b_j = x_i - x_{m+j}.
    fn base_system(a: &TropMatrix) -> DiffConstraints {
        let (m, n) = (a.rows(), a.cols());
        let mut sys = DiffConstraints::new(m + n);
        for i in 0..m {
            for j in 0..n {
                // a_i + b_j >= M_ij
                sys.add_le(m + j, i, -a.get(i, j).value().clone());
            }
        }
        sys
    }

    fn push_equalities(sys: &mut DiffConstraints, a: &TropMatrix, cells: &[(usize, usize)]) {
        let m = a.rows();
        for &(i, j) in cells {
            // a_i + b_j <= M_ij (the >= half is global)
            sys.add_le(i, m + j, a.get(i, j).value().clone());
        }
    }

    fn pair_compatible(a: &TropMatrix, x: (usize, usize), y: (usize, usize)) -> bool {
        let mut sys = Self::base_system(a);
        Self::push_equalities(&mut sys, a, &[x, y]);
        sys.is_feasible()
    }

    fn new(a: &'a TropMatrix) -> Self {
        let cells: Vec<(usize, usize)> = (0..a.rows())
            .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
            .collect();
        let k = cells.len();
        let mut compat = vec![vec![true; k]; k];
        for x in 0..k {
            for y in (x + 1)..k {
                let ok = Self::pair_compatible(a, cells[x], cells[y]);
                compat[x][y] = ok;
                compat[y][x] = ok;
            }
        }
        Search {
            a,
            cells,
            compat,
            systems: Vec::new(),
            group_cells: Vec::new(),
        }
    }

    /// Greedy clique of pairwise-incompatible cells: a sound lower bound on
    /// the rank, since no two of them can share a group.
    fn incompatibility_clique(&self) -> Vec<usize> {
        let k = self.cells.len();
        let mut order: Vec<usize> = (0..k).collect();
        let incompat_degree =
            |x: usize| -> usize { (0..k).filter(|&y| y != x && !self.compat[x][y]).count() };
        order.sort_by_key(|&x| std::cmp::Reverse(incompat_degree(x)));
        let mut clique: Vec<usize> = Vec::new();
        for x in order {
            if clique.iter().all(|&y| !self.compat[x][y]) {
                clique.push(x);
            }
        }
        clique.sort_unstable();
        clique
    }

    /// Try to place `cell` into group `g`; on success the group keeps the new
    /// equality and the pre-assignment checkpoint is returned for rollback.
    fn try_assign(&mut self, g: usize, cell: usize) -> Option<usize> {
        if !self.group_cells[g]
            .iter()
            .all(|&other| self.compat[cell][other])
        {
            return None;
        }
        let cp = self.systems[g].checkpoint();
        Self::push_equalities(&mut self.systems[g], self.a, &[self.cells[cell]]);
        if self.systems[g].is_feasible() {
            Some(cp)
        } else {
            self.systems[g].rollback(cp);
            None
        }
    }

    fn dfs(&mut self, order: &[usize], idx: usize) -> bool {
        if idx == order.len() {
            return true;
        }
        let cell = order[idx];
        let r = self.systems.len();
        let mut seen_empty = false;
        for g in 0..r {
            if self.group_cells[g].is_empty() {
                // Groups are interchangeable: try only the first empty one.
                if seen_empty {
                    break;
                }
                seen_empty = true;
            }
            if let Some(cp) = self.try_assign(g, cell) {
                self.group_cells[g].push(cell);
                if self.dfs(order, idx + 1) {
                    return true;
                }
                self.group_cells[g].pop();
                self.systems[g].rollback(cp);
            }
        }
        false
    }

    fn run(&mut self, r: usize, clique: &[usize]) -> Option<Vec<(Vec<TropScalar>, Vec<TropScalar>)>> {
        if clique.len() > r {
            return None;
        }
        self.systems = (0..r).map(|_| Self::base_system(self.a)).collect();
        self.group_cells = vec![Vec::new(); r];
        // Pre-assign the incompatibility clique to distinct groups (sound up
        // to group relabeling).
        for (g, &cell) in clique.iter().enumerate() {
            self.try_assign(g, cell)?;
            self.group_cells[g].push(cell);
        }
        let mut rest: Vec<usize> = (0..self.cells.len())
            .filter(|x| !clique.contains(x))
            .collect();
        // Most-constrained first: fewest compatible partners.
        let k = self.cells.len();
        rest.sort_by_key(|&x| (0..k).filter(|&y| y != x && self.compat[x][y]).count());
        if !self.dfs(&rest, 0) {
            return None;
        }

        let (m, n) = (self.a.rows(), self.a.cols());
        let mut pairs = Vec::with_capacity(r);
        for g in 0..r {
            if self.group_cells[g].is_empty() {
                // Dominating filler term; cannot disturb the entrywise min.
                let a_vec = vec![TropScalar::trop_one(); m];
                let b_vec: Vec<TropScalar> = (0..n)
                    .map(|j| (0..m).map(|i| self.a.get(i, j).clone()).max().unwrap())
                    .collect();
                pairs.push((a_vec, b_vec));
                continue;
            }
            let sol = self.systems[g].solve().expect("feasible by construction");
            let a_vec: Vec<TropScalar> =
                (0..m).map(|i| TropScalar::new(sol[i].clone())).collect();
            let b_vec: Vec<TropScalar> = (0..n)
                .map(|j| TropScalar::new(-sol[m + j].clone()))
                .collect();
            pairs.push((a_vec, b_vec));
        }
        Some(pairs)
    }
}

/// Exact minimal Barvinok rank up to `max_r`, with a re-verified witness.
/// Guarded at dimensions <= 6.
pub fn barvinok_rank(a: &TropMatrix, max_r: usize) -> Result<BarvinokOutcome, BarvinokError> {
    if a.rows() > DIMENSION_MAX || a.cols() > DIMENSION_MAX {
        return Err(BarvinokError::DimensionGuard {
            rows: a.rows(),
            cols: a.cols(),
            max: DIMENSION_MAX,
        });
    }
    let mut search = Search::new(a);
    let clique = search.incompatibility_clique();
    let lb = clique.len().max(1);
    for r in lb..=max_r {
        if let Some(pairs) = search.run(r, &clique) {
            let witness = BarvinokWitness { rank: r, pairs };
            debug_assert!(witness_matches(a, &witness));
            if !witness_matches(a, &witness) {
                unreachable!("witness failed entrywise re-verification");
            }
            return Ok(BarvinokOutcome::Exact(witness));
        }
    }
    Ok(BarvinokOutcome::ExceedsMax { max_r })
}

/// Entrywise re-verification: min over the witness pairs' outer sums equals
/// the matrix exactly.
pub fn witness_matches(a: &TropMatrix, w: &BarvinokWitness) -> bool {
    if w.pairs.is_empty() {
        return false;
    }
    let mut acc: Option<TropMatrix> = None;
    for (av, bv) in &w.pairs {
        if av.len() != a.rows() || bv.len() != a.cols() {
            return false;
        }
        let term = outer_sum(av, bv);
        acc = Some(match acc {
            None => term,
            Some(prev) => prev.entrywise_min(&term).expect("same shape"),
        });
    }
    acc.unwrap() == *a
}

/// Spread max - min of the entries; the canonical-vector oracle in the test
/// suite enumerates integer vectors bounded by this.
pub fn entry_spread(a: &TropMatrix) -> BigRational {
    a.max_entry().value() - a.min_entry().value()
}
