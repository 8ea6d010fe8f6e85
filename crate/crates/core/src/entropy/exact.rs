//! Exact covering and packing numbers by branch and bound.
//!
//! Covering N(delta) is a minimum set cover over candidate center balls;
//! packing M(delta) is a maximum independent set of the conflict graph
//! (pairs at distance <= delta). Both searches carry an explicit node budget
//! and fail loudly instead of running away on instances that are too hard.

use super::space::FiniteMetricSpace;
use crate::error::{size, Error, Result};

/// Default cap on |points| for the exhaustive searches.
pub const DEFAULT_EXACT_LIMIT: usize = 24;

/// Default node budget for the branch-and-bound searches.
pub const DEFAULT_NODE_BUDGET: u64 = 400_000_000;

/// Fixed-width bitset over point indices.
#[derive(Clone, PartialEq, Eq)]
struct Bits {
    w: Vec<u64>,
}

impl Bits {
    fn zeros(n: usize) -> Self {
        Bits {
            w: vec![0; n.div_ceil(64)],
        }
    }

    fn full(n: usize) -> Self {
        let mut b = Bits::zeros(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.w[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    fn clear(&mut self, i: usize) {
        self.w[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    fn test(&self, i: usize) -> bool {
        (self.w[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    fn count(&self) -> u32 {
        self.w.iter().map(|x| x.count_ones()).sum()
    }

    #[inline]
    fn is_empty(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }

    #[inline]
    fn and_count(&self, o: &Bits) -> u32 {
        self.w
            .iter()
            .zip(&o.w)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    #[inline]
    fn intersects(&self, o: &Bits) -> bool {
        self.w.iter().zip(&o.w).any(|(a, b)| a & b != 0)
    }

    #[inline]
    fn and_assign(&mut self, o: &Bits) {
        for (a, b) in self.w.iter_mut().zip(&o.w) {
            *a &= b;
        }
    }

    #[inline]
    fn minus_assign(&mut self, o: &Bits) {
        for (a, b) in self.w.iter_mut().zip(&o.w) {
            *a &= !b;
        }
    }

    fn and(&self, o: &Bits) -> Bits {
        let mut r = self.clone();
        r.and_assign(o);
        r
    }

    fn ones(&self) -> OnesIter<'_> {
        OnesIter {
            bits: self,
            word: 0,
            cur: self.w.first().copied().unwrap_or(0),
        }
    }
}

struct OnesIter<'a> {
    bits: &'a Bits,
    word: usize,
    cur: u64,
}

impl Iterator for OnesIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some((self.word << 6) | t);
            }
            self.word += 1;
            if self.word >= self.bits.w.len() {
                return None;
            }
            self.cur = self.bits.w[self.word];
        }
    }
}

/// Coordinate-permutation symmetry of the binary cube, tracked as a partition
/// of the bit positions into blocks.
///
/// A partial solution whose chosen vertices are all constant on the blocks is
/// stabilized by every permutation that preserves the blocks; that group acts
/// transitively on vertices sharing a per-block popcount signature. Branching
/// once per signature class (excluding whole earlier classes) is therefore
/// exhaustive up to isomorphism. Choosing a vertex refines the partition, so
/// the reduction is strongest near the root and hands over to plain search
/// when the classes stop compressing the candidate set.
#[derive(Clone)]
struct CubeSym {
    blocks: Vec<u64>,
}

impl CubeSym {
    fn new(bits: u32) -> Self {
        CubeSym {
            blocks: vec![(1u64 << bits) - 1],
        }
    }

    fn refine(&self, v: u64) -> CubeSym {
        let mut blocks = Vec::with_capacity(self.blocks.len() * 2);
        for &b in &self.blocks {
            let inside = b & v;
            let outside = b & !v;
            if inside != 0 {
                blocks.push(inside);
            }
            if outside != 0 {
                blocks.push(outside);
            }
        }
        CubeSym { blocks }
    }

    fn exhausted(&self, bits: u32) -> bool {
        self.blocks.len() >= bits as usize
    }

    fn signature(&self, v: u64) -> Vec<u8> {
        self.blocks
            .iter()
            .map(|&b| (v & b).count_ones() as u8)
            .collect()
    }

    /// Partition `set` into signature classes; each maps to its members in
    /// ascending index order.
    fn classes(&self, set: &Bits) -> std::collections::BTreeMap<Vec<u8>, Vec<usize>> {
        let mut classes: std::collections::BTreeMap<Vec<u8>, Vec<usize>> = Default::default();
        for v in set.ones() {
            classes.entry(self.signature(v as u64)).or_default().push(v);
        }
        classes
    }
}

/// Closed delta-balls as bitsets. `balls[i]` doubles as the set of centers
/// covering point i, by symmetry of the metric.
fn build_balls(space: &FiniteMetricSpace, delta: f64) -> Vec<Bits> {
    let n = space.len();
    let mut balls = vec![Bits::zeros(n); n];
    for i in 0..n {
        balls[i].set(i);
        for j in (i + 1)..n {
            if space.distance(i, j) <= delta {
                balls[i].set(j);
                balls[j].set(i);
            }
        }
    }
    balls
}

fn check_limit(space: &FiniteMetricSpace, limit: usize, what: &str) -> Result<()> {
    if space.len() > limit {
        return Err(size(format!(
            "{} needs |points| = {} <= limit = {}; use greedy_net for bound-only results",
            what,
            space.len(),
            limit
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Minimum set cover (covering number)
// ---------------------------------------------------------------------------

struct CoverSolver<'a> {
    balls: &'a [Bits],
    n: usize,
    best: usize,
    nodes: u64,
    budget: u64,
}

impl CoverSolver<'_> {
    /// Greedy max-coverage upper bound.
    fn greedy(&self) -> usize {
        let mut uncovered = Bits::full(self.n);
        let mut count = 0;
        while !uncovered.is_empty() {
            let mut best_c = 0;
            let mut best_gain = 0;
            for c in 0..self.n {
                let gain = self.balls[c].and_count(&uncovered);
                if gain > best_gain {
                    best_gain = gain;
                    best_c = c;
                }
            }
            uncovered.minus_assign(&self.balls[best_c]);
            count += 1;
        }
        count
    }

    /// Double-counting lower bound from local covering demands: every point x
    /// not chosen as a center needs ceil(|B(x)| / t(x)) balls meeting B(x),
    /// where t(x) is the largest such overlap any other ball can offer.
    fn local_demand_lb(&self) -> usize {
        let mut demand_sum: u64 = 0;
        let mut demand_max: u64 = 1;
        let mut touch_max: u64 = 1;
        for x in 0..self.n {
            let bx = &self.balls[x];
            let mut t = 0u32;
            let mut touch = 0u64;
            for c in 0..self.n {
                if c != x {
                    let overlap = bx.and_count(&self.balls[c]);
                    t = t.max(overlap);
                }
                if self.balls[c].intersects(bx) {
                    touch += 1;
                }
            }
            // touch here counts balls meeting B(x) including the one at x;
            // reused below as the per-center touch bound by symmetry.
            touch_max = touch_max.max(touch);
            let lam = if t == 0 {
                1
            } else {
                (bx.count() as u64).div_ceil(t as u64)
            };
            demand_sum += lam;
            demand_max = demand_max.max(lam);
        }
        demand_sum.div_ceil(touch_max + demand_max - 1) as usize
    }

    fn sphere_lb(&self, uncovered: &Bits, alive: &Bits) -> Option<usize> {
        let mut max_gain = 0;
        for c in alive.ones() {
            max_gain = max_gain.max(self.balls[c].and_count(uncovered));
        }
        if max_gain == 0 {
            return None; // some point is uncoverable in this branch
        }
        Some((uncovered.count() as usize).div_ceil(max_gain as usize))
    }

    /// Common node prelude; returns the branch point or None when the node
    /// is closed (solved, pruned, or infeasible).
    fn node_prelude(
        &mut self,
        uncovered: &Bits,
        alive: &Bits,
        depth: usize,
    ) -> Result<Option<usize>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!(
                "set-cover search exceeded {} nodes",
                self.budget
            )));
        }
        if uncovered.is_empty() {
            self.best = self.best.min(depth);
            return Ok(None);
        }
        let lb = match self.sphere_lb(uncovered, alive) {
            Some(lb) => lb,
            None => return Ok(None),
        };
        if depth + lb >= self.best {
            return Ok(None);
        }
        // Most constrained uncovered point.
        let mut branch_point = usize::MAX;
        let mut branch_count = u32::MAX;
        for p in uncovered.ones() {
            let c = self.balls[p].and_count(alive);
            if c < branch_count {
                branch_count = c;
                branch_point = p;
                if c <= 1 {
                    break;
                }
            }
        }
        if branch_count == 0 {
            return Ok(None);
        }
        Ok(Some(branch_point))
    }

    fn search(&mut self, uncovered: Bits, mut alive: Bits, depth: usize) -> Result<()> {
        let branch_point = match self.node_prelude(&uncovered, &alive, depth)? {
            Some(p) => p,
            None => return Ok(()),
        };
        // Candidates covering it, largest residual coverage first.
        let mut candidates: Vec<(u32, usize)> = self.balls[branch_point]
            .and(&alive)
            .ones()
            .map(|c| (self.balls[c].and_count(&uncovered), c))
            .collect();
        candidates.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, c) in candidates {
            let mut next_uncovered = uncovered.clone();
            next_uncovered.minus_assign(&self.balls[c]);
            self.search(next_uncovered, alive.clone(), depth + 1)?;
            // Exclusion: later branches must cover the point differently.
            alive.clear(c);
        }
        Ok(())
    }

    /// Orbit-branching variant for binary cubes: candidates covering the
    /// branch point are grouped into signature classes of the residual
    /// coordinate symmetry, one branch per class with whole earlier classes
    /// excluded.
    fn search_sym(
        &mut self,
        uncovered: Bits,
        mut alive: Bits,
        depth: usize,
        sym: &CubeSym,
        bits: u32,
    ) -> Result<()> {
        let branch_point = match self.node_prelude(&uncovered, &alive, depth)? {
            Some(p) => p,
            None => return Ok(()),
        };
        let sym_p = sym.refine(branch_point as u64);
        let candidates = self.balls[branch_point].and(&alive);
        let classes = sym_p.classes(&candidates);
        // Hand over to the plain search once symmetry stops compressing.
        if sym_p.exhausted(bits) || 2 * classes.len() as u32 + 2 >= candidates.count() {
            return self.search_plain_from(uncovered, alive, depth, candidates);
        }
        for members in classes.values() {
            let rep = members[0];
            let mut next_uncovered = uncovered.clone();
            next_uncovered.minus_assign(&self.balls[rep]);
            self.search_sym(next_uncovered, alive.clone(), depth + 1, &sym_p.refine(rep as u64), bits)?;
            for &m in members {
                alive.clear(m);
            }
        }
        Ok(())
    }

    fn search_plain_from(
        &mut self,
        uncovered: Bits,
        mut alive: Bits,
        depth: usize,
        candidates: Bits,
    ) -> Result<()> {
        let mut ordered: Vec<(u32, usize)> = candidates
            .ones()
            .map(|c| (self.balls[c].and_count(&uncovered), c))
            .collect();
        ordered.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, c) in ordered {
            let mut next_uncovered = uncovered.clone();
            next_uncovered.minus_assign(&self.balls[c]);
            self.search(next_uncovered, alive.clone(), depth + 1)?;
            alive.clear(c);
        }
        Ok(())
    }
}

/// Result of a budgeted covering-number computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverOutcome {
    Exact(usize),
    /// The node budget ran out; the true value is certified to lie in
    /// `[lower, upper]` (lower from refuted targets, upper from a greedy
    /// cover witness).
    Bracketed { lower: usize, upper: usize },
}

/// Exact covering number N(delta) with the default limit semantics and node
/// budget.
pub fn exact_covering_number(
    space: &FiniteMetricSpace,
    delta: f64,
    limit: usize,
) -> Result<usize> {
    exact_covering_number_budgeted(space, delta, limit, DEFAULT_NODE_BUDGET)
}

pub fn exact_covering_number_budgeted(
    space: &FiniteMetricSpace,
    delta: f64,
    limit: usize,
    budget: u64,
) -> Result<usize> {
    match covering_number_with_budget(space, delta, limit, budget)? {
        CoverOutcome::Exact(v) => Ok(v),
        CoverOutcome::Bracketed { lower, upper } => Err(Error::Budget(format!(
            "covering number search exhausted its node budget; certified range [{lower}, {upper}]"
        ))),
    }
}

/// Covering number with graceful budget exhaustion: returns a certified
/// bracket when the search cannot finish.
pub fn covering_number_with_budget(
    space: &FiniteMetricSpace,
    delta: f64,
    limit: usize,
    budget: u64,
) -> Result<CoverOutcome> {
    check_limit(space, limit, "exact covering")?;
    let n = space.len();
    let balls = build_balls(space, delta);
    let mut solver = CoverSolver {
        balls: &balls,
        n,
        best: usize::MAX,
        nodes: 0,
        budget,
    };
    let greedy = solver.greedy();
    let lb = solver.local_demand_lb();
    if lb >= greedy {
        return Ok(CoverOutcome::Exact(greedy));
    }
    // Tighten from the certified lower bound upward: each search either finds
    // a cover of size <= target (then that size is exact, since target - 1
    // was already refuted) or proves N > target.
    let translation = space.is_translation_invariant();
    for target in lb..greedy {
        solver.best = target + 1;
        let run = if translation {
            // Translating by a chosen center shows some optimal cover
            // contains the ball at 0.
            let bits = n.trailing_zeros();
            let mut uncovered = Bits::full(n);
            uncovered.minus_assign(&solver.balls[0].clone());
            solver.search_sym(uncovered, Bits::full(n), 1, &CubeSym::new(bits), bits)
        } else {
            solver.search(Bits::full(n), Bits::full(n), 0)
        };
        if std::env::var_os("BOUNDS_EXACT_TRACE").is_some() {
            eprintln!(
                "cover target {target}: best {} nodes {}",
                solver.best, solver.nodes
            );
        }
        match run {
            Ok(()) => {
                if solver.best <= target {
                    return Ok(CoverOutcome::Exact(solver.best));
                }
            }
            Err(Error::Budget(_)) => {
                return Ok(if solver.best <= target {
                    // A cover of size `target` was found before the budget
                    // died, and target - 1 is already refuted.
                    CoverOutcome::Exact(solver.best)
                } else {
                    CoverOutcome::Bracketed {
                        lower: target,
                        upper: greedy,
                    }
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(CoverOutcome::Exact(greedy))
}

// ---------------------------------------------------------------------------
// Maximum independent set (packing number)
// ---------------------------------------------------------------------------

struct CliqueSolver<'a> {
    /// Compatibility adjacency: edge when a pair may coexist in a packing.
    adj: &'a [Bits],
    /// Vertex processing priority (descending root degree).
    rank: &'a [u32],
    best: usize,
    nodes: u64,
    budget: u64,
}

impl CliqueSolver<'_> {
    /// Greedy sequential coloring of `p` in rank order; returns vertices
    /// grouped by color class with their 1-based color numbers.
    fn color(&self, p: &Bits, order: &mut Vec<(usize, usize)>) {
        order.clear();
        let mut rest = p.clone();
        let mut color = 0;
        let mut by_rank: Vec<usize> = rest.ones().collect();
        by_rank.sort_unstable_by_key(|&v| self.rank[v]);
        let mut class = Bits::zeros(self.adj.len());
        while !rest.is_empty() {
            color += 1;
            class.clone_from(&rest);
            for &v in &by_rank {
                if class.test(v) {
                    order.push((v, color));
                    rest.clear(v);
                    class.clear(v);
                    class.minus_assign(&self.adj[v]);
                }
            }
        }
    }

    /// Greedy clique in rank order, used to seed the incumbent.
    fn greedy_from(&self, start: usize) -> usize {
        let mut p = self.adj[start].clone();
        let mut size = 1;
        loop {
            let mut pick = usize::MAX;
            let mut pick_rank = u32::MAX;
            for v in p.ones() {
                if self.rank[v] < pick_rank {
                    pick_rank = self.rank[v];
                    pick = v;
                }
            }
            if pick == usize::MAX {
                return size;
            }
            size += 1;
            p.and_assign(&self.adj[pick]);
        }
    }

    fn expand(&mut self, r_size: usize, p: &Bits) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!(
                "clique search exceeded {} nodes",
                self.budget
            )));
        }
        if p.is_empty() {
            self.best = self.best.max(r_size);
            return Ok(());
        }
        let mut order = Vec::new();
        self.color(p, &mut order);
        let mut candidates = p.clone();
        for &(v, color) in order.iter().rev() {
            if r_size + color <= self.best {
                return Ok(());
            }
            let next = candidates.and(&self.adj[v]);
            self.expand(r_size + 1, &next)?;
            candidates.clear(v);
        }
        Ok(())
    }

    /// Orbit-branching variant for binary cubes; see `CubeSym`.
    fn expand_sym(&mut self, r_size: usize, p: &Bits, sym: &CubeSym, bits: u32) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!(
                "clique search exceeded {} nodes",
                self.budget
            )));
        }
        if p.is_empty() {
            self.best = self.best.max(r_size);
            return Ok(());
        }
        let mut order = Vec::new();
        self.color(p, &mut order);
        let max_color = order.last().map(|&(_, c)| c).unwrap_or(0);
        if r_size + max_color <= self.best {
            return Ok(());
        }
        let classes = sym.classes(p);
        if sym.exhausted(bits) || 2 * classes.len() as u32 + 2 >= p.count() {
            return self.expand(r_size, p);
        }
        let mut candidates = p.clone();
        for members in classes.values() {
            let rep = members[0];
            let next = candidates.and(&self.adj[rep]);
            self.expand_sym(r_size + 1, &next, &sym.refine(rep as u64), bits)?;
            for &m in members {
                candidates.clear(m);
            }
        }
        // The branch where no candidate joins the clique at all.
        self.best = self.best.max(r_size);
        Ok(())
    }
}

/// Exact packing number M(delta): the largest set with pairwise distances
/// strictly greater than delta.
pub fn exact_packing_number(space: &FiniteMetricSpace, delta: f64, limit: usize) -> Result<usize> {
    exact_packing_number_budgeted(space, delta, limit, DEFAULT_NODE_BUDGET)
}

pub fn exact_packing_number_budgeted(
    space: &FiniteMetricSpace,
    delta: f64,
    limit: usize,
    budget: u64,
) -> Result<usize> {
    check_limit(space, limit, "exact packing")?;
    let n = space.len();
    if n == 0 {
        return Ok(0);
    }
    let mut adj = vec![Bits::zeros(n); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if space.distance(i, j) > delta {
                adj[i].set(j);
                adj[j].set(i);
            }
        }
    }
    // Rank vertices by descending degree; the coloring and the greedy seed
    // both follow this order.
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_unstable_by_key(|&v| std::cmp::Reverse(adj[v].count()));
    let mut rank = vec![0u32; n];
    for (r, &v) in by_degree.iter().enumerate() {
        rank[v] = r as u32;
    }
    let mut solver = CliqueSolver {
        adj: &adj,
        rank: &rank,
        best: 0,
        nodes: 0,
        budget,
    };
    for &s in by_degree.iter().take(32) {
        solver.best = solver.best.max(solver.greedy_from(s));
    }
    if space.is_translation_invariant() {
        // Translating by any member maps packings to packings, so some
        // maximum packing contains point 0; searching cliques through 0
        // against the global incumbent is exhaustive. Residual coordinate
        // permutations are handled by orbit branching.
        let bits = n.trailing_zeros();
        solver.expand_sym(1, &adj[0], &CubeSym::new(bits), bits)?;
    } else {
        solver.expand(0, &Bits::full(n))?;
    }
    Ok(solver.best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(n: u32) -> FiniteMetricSpace {
        FiniteMetricSpace::hamming_cube(n).unwrap()
    }

    #[test]
    fn tiny_cube_values() {
        // {0,1}^2 at delta 1: one radius-1 ball covers only 3 of 4 points.
        assert_eq!(exact_covering_number(&cube(2), 1.0, 24).unwrap(), 2);
        assert_eq!(exact_packing_number(&cube(2), 1.0, 24).unwrap(), 2);
        // No pair has distance > 2 in n = 2.
        assert_eq!(exact_packing_number(&cube(2), 2.0, 24).unwrap(), 1);
        // {000,111} covers {0,1}^3 at radius 1 (perfect code).
        assert_eq!(exact_covering_number(&cube(3), 1.0, 24).unwrap(), 2);
        // delta past the diameter needs a single center.
        assert_eq!(exact_covering_number(&cube(3), 3.0, 24).unwrap(), 1);
        // delta below the minimum distance packs every point.
        assert_eq!(exact_packing_number(&cube(3), 0.5, 24).unwrap(), 8);
    }

    #[test]
    fn known_cube_values_n4() {
        let c4 = cube(4);
        assert_eq!(exact_covering_number(&c4, 1.0, 16).unwrap(), 4);
        assert_eq!(exact_packing_number(&c4, 1.0, 16).unwrap(), 8); // even-weight code
        assert_eq!(exact_packing_number(&c4, 2.0, 16).unwrap(), 2); // min distance 3
        assert_eq!(exact_packing_number(&c4, 3.0, 16).unwrap(), 2); // antipodal pair
    }

    #[test]
    fn limit_is_enforced() {
        let c6 = cube(6);
        assert!(matches!(
            exact_covering_number(&c6, 1.0, 24),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn covering_packing_sandwich_small_cubes() {
        // M(2 delta) <= N(delta) <= M(delta), exactly, on enumerable cubes.
        for n in 2..=5u32 {
            let c = cube(n);
            let pts = c.len();
            for delta in [1.0f64, 2.0, 3.0] {
                let nd = exact_covering_number(&c, delta, pts).unwrap();
                let md = exact_packing_number(&c, delta, pts).unwrap();
                let m2d = exact_packing_number(&c, 2.0 * delta, pts).unwrap();
                assert!(m2d <= nd && nd <= md, "n = {n}, delta = {delta}");
            }
        }
    }

    #[test]
    fn greedy_net_size_sits_between_exact_numbers() {
        for n in 2..=5u32 {
            let c = cube(n);
            let pts = c.len();
            for delta in [1.0f64, 2.0] {
                let net = super::super::nets::greedy_net(&c, delta).unwrap();
                let nd = exact_covering_number(&c, delta, pts).unwrap();
                let md = exact_packing_number(&c, delta, pts).unwrap();
                assert!(nd <= net.centers.len() && net.centers.len() <= md);
            }
        }
    }
}
