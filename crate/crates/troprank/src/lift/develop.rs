//! Developing one line of a matrix as a Puiseux combination of lifted lines.
//!
//! A develop plan names a target line, a base set of supporting lines, and a
//! prescribed order for each coefficient. Solving a plan finds lambda with
//! ord(lambda_i) equal to the prescribed orders such that the combination
//! sum_i lambda_i F_i has exactly the target orders. Columns whose target
//! order exceeds the generic minimum ("high" columns) are hit exactly by
//! solving a small linear system for a pivot subset of the coefficients; the
//! remaining coefficients are generic monomials, redrawn on the rare leading
//! cancellation. Exact order checks accept or reject every candidate, so
//! plans can be searched freely.

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::fmt;

use super::{GenCtx, LiftError, DEFAULT_RETRIES, DEFAULT_SEED};
use crate::liftmat::{solve_linear, LiftMatrix};
use crate::puiseux::{PuiseuxError, PuiseuxScalar, Ramification};
use crate::semiring::{TropMatrix, TropScalar};

/// A row or column index; columns are developed through the transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Line {
    Row(usize),
    Col(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(i) => write!(f, "row {}", i),
            Line::Col(j) => write!(f, "column {}", j),
        }
    }
}

/// Polynomial side conditions on the leading coefficients of the solved
/// lambda; violated conditions trigger a redraw.
#[derive(Debug, Clone, PartialEq)]
pub enum OrcConstraint {
    /// sum of c_i * orc(lambda_{idx_i}) must not vanish.
    NonVanishing { terms: Vec<(usize, BigRational)> },
    /// orc(lambda_num) / orc(lambda_den) must avoid one forbidden value.
    RatioDiffers {
        num: usize,
        den: usize,
        forbidden: BigRational,
    },
}

impl OrcConstraint {
    fn holds(&self, lambda: &[PuiseuxScalar]) -> bool {
        let orc = |i: usize| lambda[i].orc();
        match self {
            OrcConstraint::NonVanishing { terms } => {
                let mut acc = BigRational::zero();
                for (i, c) in terms {
                    match orc(*i) {
                        Some(o) => acc += c * o,
                        None => return false,
                    }
                }
                !acc.is_zero()
            }
            OrcConstraint::RatioDiffers {
                num,
                den,
                forbidden,
            } => match (orc(*num), orc(*den)) {
                (Some(a), Some(b)) => !b.is_zero() && a / b != *forbidden,
                _ => false,
            },
        }
    }
}

/// Which phase of the generator produced a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanOrigin {
    /// An all-zero line developed with order-0 coefficients.
    ZeroLine,
    /// A line with a single nonzero entry, order-0 coefficients, one pivot.
    NearZeroLine,
    /// Order tuples read off the target/base entry differences.
    PatternSeed,
    /// Column targets (the transpose route).
    ColumnCase,
    /// Sum-ordered search over the entry-difference order pool.
    AutoSearch,
}

impl fmt::Display for PlanOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PlanOrigin::ZeroLine => "zero-line",
            PlanOrigin::NearZeroLine => "near-zero-line",
            PlanOrigin::PatternSeed => "pattern-seeded",
            PlanOrigin::ColumnCase => "column-case",
            PlanOrigin::AutoSearch => "auto-search",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DevelopPlan {
    pub target: Line,
    /// Supporting line indices, in the orientation of `target`.
    pub base: Vec<usize>,
    /// Prescribed ord for each coefficient, parallel to `base`.
    pub orders: Vec<BigRational>,
    pub constraints: Vec<OrcConstraint>,
    pub origin: PlanOrigin,
}

impl fmt::Display for DevelopPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "develop {} over {:?} at orders [{}] ({})",
            self.target,
            self.base,
            self.orders.iter().map(|o| o.to_string()).join(", "),
            self.origin
        )
    }
}

const DRAWS_PER_PIVOT_SET: usize = 2;

/// Solve a develop plan against concrete base lift rows (`f_base` has one
/// row per entry of `plan.base`, in order). `Ok(None)` means the plan is
/// infeasible or the draws ran out for it; the budget error is reserved for
/// global exhaustion.
pub fn solve_coefficients(
    f_base: &LiftMatrix,
    target: &[TropScalar],
    plan: &DevelopPlan,
) -> Result<Option<Vec<PuiseuxScalar>>, LiftError> {
    let mut ctx = GenCtx::new(DEFAULT_SEED, DEFAULT_RETRIES);
    solve_coefficients_ctx(f_base, target, plan, &mut ctx)
}

pub(crate) fn solve_coefficients_ctx(
    f_base: &LiftMatrix,
    target: &[TropScalar],
    plan: &DevelopPlan,
    ctx: &mut GenCtx,
) -> Result<Option<Vec<PuiseuxScalar>>, LiftError> {
    let p = f_base.rows();
    let n = f_base.cols();
    if plan.orders.len() != p || plan.base.len() != p || target.len() != n {
        return Err(LiftError::Puiseux(PuiseuxError::Dimension(format!(
            "plan with {} orders against {} base rows and {} targets",
            plan.orders.len(),
            p,
            target.len()
        ))));
    }

    let base_ord = f_base.ord_matrix();
    // Generic floor per column and the columns that must be raised above it.
    let floor: Vec<BigRational> = (0..n)
        .map(|j| {
            (0..p)
                .map(|i| &plan.orders[i] + base_ord.get(i, j).value())
                .min()
                .expect("nonempty base")
        })
        .collect();
    for j in 0..n {
        if *target[j].value() < floor[j] {
            return Ok(None);
        }
    }
    let high: Vec<usize> = (0..n)
        .filter(|&j| *target[j].value() > floor[j])
        .collect();
    if high.len() > p {
        return Ok(None);
    }

    let ram = Ramification::clearing(
        plan.orders
            .iter()
            .chain(target.iter().map(|t| t.value())),
    )?
    .join(&f_base.ram()?)?;

    for pivot_set in (0..p).combinations(high.len()) {
        // The system matrix is draw-independent; a singular pivot set stays
        // singular, so move on to the next one immediately.
        let mut singular = false;
        for _ in 0..DRAWS_PER_PIVOT_SET {
            ctx.charge("develop coefficient draws")?;
            let mut lambda: Vec<Option<PuiseuxScalar>> = vec![None; p];
            for i in 0..p {
                if !pivot_set.contains(&i) {
                    lambda[i] = Some(PuiseuxScalar::monomial(
                        ram,
                        &plan.orders[i],
                        ctx.draw(),
                    )?);
                }
            }
            if !high.is_empty() {
                let a: Vec<Vec<PuiseuxScalar>> = high
                    .iter()
                    .map(|&j| {
                        pivot_set
                            .iter()
                            .map(|&i| f_base.get(i, j).clone())
                            .collect()
                    })
                    .collect();
                let b: Vec<PuiseuxScalar> = high
                    .iter()
                    .map(|&j| {
                        let mut rhs =
                            PuiseuxScalar::monomial(ram, target[j].value(), ctx.draw())?;
                        for i in 0..p {
                            if let Some(l) = &lambda[i] {
                                rhs = rhs.sub(&l.mul(f_base.get(i, j)));
                            }
                        }
                        Ok(rhs)
                    })
                    .collect::<Result<_, LiftError>>()?;
                match solve_linear(a, b) {
                    Some(sol) => {
                        for (k, &i) in pivot_set.iter().enumerate() {
                            lambda[i] = Some(sol[k].clone());
                        }
                    }
                    None => {
                        singular = true;
                        break;
                    }
                }
            }
            let lambda: Vec<PuiseuxScalar> =
                lambda.into_iter().map(|l| l.expect("all filled")).collect();
            if accept(&lambda, f_base, target, plan) {
                return Ok(Some(lambda));
            }
        }
        if singular {
            continue;
        }
    }
    Ok(None)
}

/// Exact acceptance: prescribed coefficient orders, side constraints, and
/// the combination's entrywise orders.
fn accept(
    lambda: &[PuiseuxScalar],
    f_base: &LiftMatrix,
    target: &[TropScalar],
    plan: &DevelopPlan,
) -> bool {
    for (l, o) in lambda.iter().zip(&plan.orders) {
        if l.ord().as_ref() != Some(o) {
            return false;
        }
    }
    if !plan.constraints.iter().all(|c| c.holds(lambda)) {
        return false;
    }
    combination(lambda, f_base)
        .iter()
        .zip(target)
        .all(|(e, t)| e.ord().as_ref() == Some(t.value()))
}

/// Entry list of sum_i lambda_i * F_i.
pub(crate) fn combination(lambda: &[PuiseuxScalar], f_base: &LiftMatrix) -> Vec<PuiseuxScalar> {
    let ram = f_base.ram().expect("ramifications join");
    (0..f_base.cols())
        .map(|j| {
            let mut acc = PuiseuxScalar::zero(ram);
            for (i, l) in lambda.iter().enumerate() {
                acc = acc.add(&l.mul(f_base.get(i, j)));
            }
            acc
        })
        .collect()
}

/// Cap on the order-candidate pool for the auto-search phase.
const ORDER_POOL_CAP: usize = 24;
/// Cap on tuples emitted per (target, base) pair in the seeded phases.
const TUPLES_PER_BASE: usize = 8;
/// Cap on tuples emitted per (target, base) pair in the auto-search phase.
const AUTO_TUPLES_PER_BASE: usize = 40;

/// Candidate coefficient orders drawn from the entry differences of the
/// matrix: zero, all nonnegative pairwise differences, and one extra layer
/// of difference-plus-entry sums. Ascending, capped.
fn order_pool(a: &TropMatrix) -> Vec<BigRational> {
    let values: BTreeSet<BigRational> =
        a.entries().iter().map(|e| e.value().clone()).collect();
    let mut pool: BTreeSet<BigRational> = BTreeSet::new();
    pool.insert(BigRational::zero());
    let mut diffs: Vec<BigRational> = Vec::new();
    for x in &values {
        for y in &values {
            let d = x - y;
            if d >= BigRational::zero() {
                diffs.push(d);
            }
        }
    }
    for d in &diffs {
        pool.insert(d.clone());
    }
    for d in &diffs {
        for v in &values {
            pool.insert(d + v);
        }
    }
    pool.into_iter().take(ORDER_POOL_CAP).collect()
}

/// Feasibility skeleton of a candidate order tuple against the matrix: the
/// per-column floor may never exceed the target, and the raised columns must
/// not outnumber the base.
fn tuple_shape(
    a: &TropMatrix,
    t: usize,
    base: &[usize],
    orders: &[BigRational],
) -> Option<(usize, BigRational)> {
    let mut high = 0usize;
    let mut total = BigRational::zero();
    for o in orders {
        total += o;
    }
    for j in 0..a.cols() {
        let floor = base
            .iter()
            .zip(orders)
            .map(|(&i, o)| o + a.get(i, j).value())
            .min()
            .expect("nonempty base");
        let tj = a.get(t, j).value();
        if *tj < floor {
            return None;
        }
        if *tj > floor {
            high += 1;
        }
    }
    if high > base.len() {
        return None;
    }
    Some((high, total))
}

/// Per-base-row candidate orders that can make some column tight.
fn tight_candidates(a: &TropMatrix, t: usize, i: usize) -> Vec<BigRational> {
    let mut set: BTreeSet<BigRational> = BTreeSet::new();
    set.insert(BigRational::zero());
    for j in 0..a.cols() {
        let d = a.get(t, j).value() - a.get(i, j).value();
        if d >= BigRational::zero() {
            set.insert(d);
        }
    }
    set.into_iter().collect()
}

fn row_plans_from_pools(
    a: &TropMatrix,
    t: usize,
    base: Vec<usize>,
    pools: &[Vec<BigRational>],
    cap: usize,
    origin: PlanOrigin,
) -> Vec<DevelopPlan> {
    // Enumerate index tuples by ascending order sum so cheap plans surface
    // first; a visited set keeps the frontier finite.
    let mut heap: BinaryHeap<Reverse<(BigRational, Vec<usize>)>> = BinaryHeap::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let start = vec![0usize; pools.len()];
    let start_sum: BigRational = pools.iter().map(|p| p[0].clone()).sum();
    heap.push(Reverse((start_sum, start.clone())));
    seen.insert(start);

    let mut shaped: Vec<(usize, BigRational, DevelopPlan)> = Vec::new();
    let mut popped = 0usize;
    while let Some(Reverse((_, idx))) = heap.pop() {
        popped += 1;
        if popped > cap * 8 || shaped.len() >= cap * 2 {
            break;
        }
        let orders: Vec<BigRational> = idx
            .iter()
            .zip(pools)
            .map(|(&k, pool)| pool[k].clone())
            .collect();
        if let Some((high, total)) = tuple_shape(a, t, &base, &orders) {
            shaped.push((
                high,
                total,
                DevelopPlan {
                    target: Line::Row(t),
                    base: base.clone(),
                    orders,
                    constraints: Vec::new(),
                    origin,
                },
            ));
        }
        for d in 0..pools.len() {
            if idx[d] + 1 < pools[d].len() {
                let mut next = idx.clone();
                next[d] += 1;
                if seen.insert(next.clone()) {
                    let sum: BigRational = next
                        .iter()
                        .zip(pools)
                        .map(|(&k, pool)| pool[k].clone())
                        .sum();
                    heap.push(Reverse((sum, next)));
                }
            }
        }
    }
    shaped.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    shaped.into_iter().map(|(_, _, p)| p).take(cap).collect()
}

fn is_zero_line(vals: &[&TropScalar]) -> bool {
    vals.iter().all(|v| v.value().is_zero())
}

fn nonzero_count(vals: &[&TropScalar]) -> usize {
    vals.iter().filter(|v| !v.value().is_zero()).count()
}

/// Prioritized develop plans for a (normalized) matrix. Phases: all-zero
/// lines, single-nonzero lines, entry-difference seeded order tuples, column
/// targets, then the sum-ordered auto-search pool. The stream is finite and
/// deterministic; emptiness is possible and simply means no plan applies.
pub fn plan_generator(a: &TropMatrix) -> Vec<DevelopPlan> {
    let m = a.rows();
    let n = a.cols();
    let mut plans: Vec<DevelopPlan> = Vec::new();

    let row_vals = |t: usize| -> Vec<&TropScalar> { (0..n).map(|j| a.get(t, j)).collect() };
    let col_vals = |c: usize| -> Vec<&TropScalar> { (0..m).map(|i| a.get(i, c)).collect() };
    let others = |t: usize, count: usize| -> Vec<usize> { (0..count).filter(|&i| i != t).collect() };

    // Phase 1: zero lines with order-0 coefficients.
    for t in 0..m {
        if is_zero_line(&row_vals(t)) {
            plans.push(DevelopPlan {
                target: Line::Row(t),
                base: others(t, m),
                orders: vec![BigRational::zero(); m - 1],
                constraints: Vec::new(),
                origin: PlanOrigin::ZeroLine,
            });
        }
    }
    for c in 0..n {
        if is_zero_line(&col_vals(c)) {
            plans.push(DevelopPlan {
                target: Line::Col(c),
                base: others(c, n),
                orders: vec![BigRational::zero(); n - 1],
                constraints: Vec::new(),
                origin: PlanOrigin::ZeroLine,
            });
        }
    }

    // Phase 2: lines with a single nonzero entry; the one raised column is
    // hit by a pivot correction.
    for t in 0..m {
        if nonzero_count(&row_vals(t)) == 1 {
            plans.push(DevelopPlan {
                target: Line::Row(t),
                base: others(t, m),
                orders: vec![BigRational::zero(); m - 1],
                constraints: Vec::new(),
                origin: PlanOrigin::NearZeroLine,
            });
        }
    }
    for c in 0..n {
        if nonzero_count(&col_vals(c)) == 1 {
            plans.push(DevelopPlan {
                target: Line::Col(c),
                base: others(c, n),
                orders: vec![BigRational::zero(); n - 1],
                constraints: Vec::new(),
                origin: PlanOrigin::ColumnCase,
            });
        }
    }

    // Bases per row target: every other row, then 3-subsets, then 2-subsets
    // (small bases realize developments of a submatrix by one of its rows).
    let row_bases = |t: usize| -> Vec<Vec<usize>> {
        let os = others(t, m);
        let mut bases: Vec<Vec<usize>> = Vec::new();
        if os.len() <= 4 {
            bases.push(os.clone());
        } else {
            bases.extend(os.iter().cloned().combinations(4));
        }
        if os.len() > 3 {
            bases.extend(os.iter().cloned().combinations(3));
        }
        if os.len() > 2 {
            bases.extend(os.iter().cloned().combinations(2));
        }
        bases
    };

    // Phase 3: order tuples from target/base entry differences.
    let mut seeded: Vec<DevelopPlan> = Vec::new();
    for t in 0..m {
        for base in row_bases(t) {
            let pools: Vec<Vec<BigRational>> = base
                .iter()
                .map(|&i| tight_candidates(a, t, i))
                .collect();
            seeded.extend(row_plans_from_pools(
                a,
                t,
                base,
                &pools,
                TUPLES_PER_BASE,
                PlanOrigin::PatternSeed,
            ));
        }
    }
    plans.extend(seeded);

    // Phase 4: column targets through the transpose.
    let at = a.transpose();
    for c in 0..n {
        let base = others(c, n);
        if base.len() > 4 {
            continue;
        }
        let pools: Vec<Vec<BigRational>> = base
            .iter()
            .map(|&i| tight_candidates(&at, c, i))
            .collect();
        for plan in row_plans_from_pools(
            &at,
            c,
            base,
            &pools,
            TUPLES_PER_BASE,
            PlanOrigin::ColumnCase,
        ) {
            plans.push(DevelopPlan {
                target: Line::Col(c),
                ..plan
            });
        }
    }

    // Phase 5: sum-ordered auto-search over the shared order pool.
    let pool = order_pool(a);
    let mut auto: Vec<DevelopPlan> = Vec::new();
    for t in 0..m {
        for base in row_bases(t) {
            let pools: Vec<Vec<BigRational>> = vec![pool.clone(); base.len()];
            auto.extend(row_plans_from_pools(
                a,
                t,
                base,
                &pools,
                AUTO_TUPLES_PER_BASE,
                PlanOrigin::AutoSearch,
            ));
        }
    }
    plans.extend(auto);

    // Drop exact duplicates (a seeded tuple can reappear in auto-search).
    let mut seen: Vec<(Line, Vec<usize>, Vec<BigRational>)> = Vec::new();
    plans.retain(|p| {
        let key = (p.target, p.base.clone(), p.orders.clone());
        if seen.contains(&key) {
            false
        } else {
            seen.push(key);
            true
        }
    });
    plans
}
