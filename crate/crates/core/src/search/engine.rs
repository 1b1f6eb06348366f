//! Depth-first enumeration of equitable 2-partitions with a prescribed
//! quotient matrix.
//!
//! Vertices are decided in colex order. For every vertex and every distance
//! `s` up to the configured shell depth the engine tracks how many vertices
//! at distance `s` are already in `C1` and in `C2`. If `χ_{C1}` minus its mean
//! lies in the `j`-th eigenspace (`a - c = λ_j`), the number of `C1`-vertices
//! at distance `s` from a vertex depends only on that vertex's cell:
//!
//! ```text
//! x in C1:  (c·k_s + b·E_s(j)) / (b + c)
//! x in C2:   c·(k_s - E_s(j)) / (b + c)
//! ```
//!
//! where `k_s` is the shell size and `E_s(j)` the eigenvalue of the
//! distance-`s` matrix. Shell depth 1 is the plain row-count condition of the
//! quotient matrix. A vertex whose counts rule out one cell is forced into
//! the other; a decided vertex whose count for one cell reaches its target
//! forces all undecided vertices of that shell into the other cell.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_form, DEFAULT_MAX_N};
use crate::error::{Error, Result};
use crate::johnson::{GraphParams, JohnsonGraph};
use crate::partition::{Equitability, QuotientMatrix, TwoPartition};

/// Default node budget per search.
pub const DEFAULT_NODE_LIMIT: u64 = 1_000_000_000;
/// Default wall-clock budget per search.
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(3600);

/// Parameters of one exhaustive search.
#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub params: GraphParams,
    pub matrix: QuotientMatrix,
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
    /// Fix vertex 0 in `C1`. Every equivalence class has such a member
    /// because coordinate permutations act transitively on vertices.
    pub symmetry: bool,
    /// Force each vertex's complement into its cell (`n = 2w` with an
    /// even eigenvalue index). `None` selects this automatically.
    pub antipodal: Option<bool>,
    /// Number of distance shells to track; `None` means all of them.
    pub shell_depth: Option<u32>,
    /// Number of worker threads; 1 runs the search inline.
    pub threads: usize,
    /// Decision depth at which the tree is split into parallel tasks.
    pub split_depth: usize,
    /// Keep every labelled solution, not only one per class.
    pub keep_labeled: bool,
}

impl SearchSpec {
    pub fn new(params: GraphParams, matrix: QuotientMatrix) -> Self {
        SearchSpec {
            params,
            matrix,
            node_limit: DEFAULT_NODE_LIMIT,
            time_limit: Some(DEFAULT_TIME_LIMIT),
            symmetry: true,
            antipodal: None,
            shell_depth: None,
            threads: 1,
            split_depth: 8,
            keep_labeled: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchStatus {
    Complete,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Labelled solutions found (after symmetry reduction).
    pub solutions: u64,
    /// Branches closed by a contradiction.
    pub conflicts: u64,
    /// Parallel tasks the tree was split into.
    pub tasks: u64,
}

/// Result of [`enumerate`].
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// One canonical representative per equivalence class, sorted by
    /// membership string.
    pub partitions: Vec<TwoPartition>,
    /// All labelled solutions in membership order, when requested.
    pub labeled: Option<Vec<TwoPartition>>,
    pub nodes: u64,
    pub stats: SearchStats,
    pub wall: Duration,
    /// Why the instance was rejected without search, if it was.
    pub infeasible: Option<String>,
}

impl SearchOutcome {
    fn empty(reason: String, started: Instant, keep: bool) -> Self {
        SearchOutcome {
            status: SearchStatus::Complete,
            partitions: Vec::new(),
            labeled: keep.then(Vec::new),
            nodes: 0,
            stats: SearchStats::default(),
            wall: started.elapsed(),
            infeasible: Some(reason),
        }
    }
}

/// Immutable per-search tables.
struct Context {
    n_vertices: usize,
    shells: Vec<Vec<u32>>,
    shell_len: Vec<usize>,
    /// `targets[cell][s]`: `C1`-count at distance `s + 1` for a vertex in
    /// `cell` (0 for `C1`, 1 for `C2`).
    targets: [Vec<u32>; 2],
    cell_size: [usize; 2],
    antipode: Option<Vec<u32>>,
    symmetry: bool,
    node_limit: u64,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    exhausted: AtomicBool,
}

/// Shell targets for the eigenspace of `a - c`, or the reason there are none.
fn shell_targets(
    params: GraphParams,
    m: &QuotientMatrix,
    depth: u32,
) -> std::result::Result<[Vec<u32>; 2], String> {
    let theta = m.a as i64 - m.c as i64;
    let j = params
        .eigenvalue_index(theta)
        .ok_or_else(|| format!("quotient eigenvalue {theta} is not an eigenvalue of {params}"))?;
    let (b, c) = (m.b as i64, m.c as i64);
    let mut t = [Vec::new(), Vec::new()];
    for s in 1..=depth {
        let k = params.shell_size(s) as i64;
        let e = params.distance_eigenvalue(s, j);
        for (cell, num) in [(0, c * k + b * e), (1, c * (k - e))] {
            if num % (b + c) != 0 {
                return Err(format!(
                    "distance-{s} count {num}/{} is not an integer",
                    b + c
                ));
            }
            let v = num / (b + c);
            if !(0..=k).contains(&v) {
                return Err(format!("distance-{s} count {v} outside [0, {k}]"));
            }
            t[cell].push(v as u32);
        }
    }
    Ok(t)
}

#[derive(Clone, Copy)]
enum Job {
    Force(u32, u8),
    /// Force all undecided vertices of a shell into a cell.
    Fill(u32, u8, u8),
}

struct Abort;

struct Engine<'a> {
    ctx: &'a Context,
    cell: Vec<u8>,
    /// Row `v * shells + s`: vertices at distance `s + 1` already in C1 / C2.
    counts: Vec<[u32; 2]>,
    sizes: [usize; 2],
    trail: Vec<u32>,
    jobs: Vec<Job>,
    local_nodes: u64,
    conflicts: u64,
    solutions: Vec<Vec<u8>>,
}

impl<'a> Engine<'a> {
    fn new(ctx: &'a Context) -> Self {
        Engine {
            ctx,
            cell: vec![0; ctx.n_vertices],
            counts: vec![[0, 0]; ctx.n_vertices * ctx.shells.len()],
            sizes: [0, 0],
            trail: Vec::with_capacity(ctx.n_vertices),
            jobs: Vec::new(),
            local_nodes: 0,
            conflicts: 0,
            solutions: Vec::new(),
        }
    }

    #[inline]
    fn shell(&self, v: usize, s: usize) -> &'a [u32] {
        let len = self.ctx.shell_len[s];
        &self.ctx.shells[s][v * len..(v + 1) * len]
    }

    #[inline]
    fn bounds_ok(&self, cnt: [u32; 2], cell: usize, s: usize) -> bool {
        let t = self.ctx.targets[cell][s];
        cnt[0] <= t && cnt[1] <= self.ctx.shell_len[s] as u32 - t
    }

    /// Records `v` in `cell` (1 or 2) and updates all counts. Returns false on
    /// a contradiction; the bookkeeping is complete either way.
    fn assign(&mut self, v: usize, cell: u8) -> bool {
        if self.cell[v] != 0 {
            return self.cell[v] == cell;
        }
        let ci = cell as usize - 1;
        self.cell[v] = cell;
        self.trail.push(v as u32);
        self.sizes[ci] += 1;
        let mut ok = self.sizes[ci] <= self.ctx.cell_size[ci];
        let depth = self.ctx.shells.len();
        for s in 0..depth {
            let t = self.ctx.targets[ci][s];
            let len = self.ctx.shell_len[s] as u32;
            let own = self.counts[v * depth + s];
            if !self.bounds_ok(own, ci, s) {
                ok = false;
            } else {
                if own[0] == t {
                    self.jobs.push(Job::Fill(v as u32, s as u8, 2));
                }
                if own[1] == len - t {
                    self.jobs.push(Job::Fill(v as u32, s as u8, 1));
                }
            }
            for &u in self.shell(v, s) {
                let u = u as usize;
                let slot = &mut self.counts[u * depth + s];
                slot[ci] += 1;
                let cnt = *slot;
                match self.cell[u] {
                    0 => {
                        let fits1 = self.bounds_ok(cnt, 0, s);
                        let fits2 = self.bounds_ok(cnt, 1, s);
                        match (fits1, fits2) {
                            (true, true) => {}
                            (true, false) => self.jobs.push(Job::Force(u as u32, 1)),
                            (false, true) => self.jobs.push(Job::Force(u as u32, 2)),
                            (false, false) => ok = false,
                        }
                    }
                    c => {
                        let oi = c as usize - 1;
                        if !self.bounds_ok(cnt, oi, s) {
                            ok = false;
                        } else {
                            let t = self.ctx.targets[oi][s];
                            if ci == 0 && cnt[0] == t {
                                self.jobs.push(Job::Fill(u as u32, s as u8, 2));
                            } else if ci == 1 && cnt[1] == len - t {
                                self.jobs.push(Job::Fill(u as u32, s as u8, 1));
                            }
                        }
                    }
                }
            }
        }
        if let Some(anti) = &self.ctx.antipode {
            self.jobs.push(Job::Force(anti[v], cell));
        }
        ok
    }

    fn propagate(&mut self) -> bool {
        while let Some(job) = self.jobs.pop() {
            let ok = match job {
                Job::Force(u, c) => self.assign(u as usize, c),
                Job::Fill(u, s, c) => {
                    for &y in self.shell(u as usize, s as usize) {
                        if self.cell[y as usize] == 0 {
                            self.jobs.push(Job::Force(y, c));
                        }
                    }
                    true
                }
            };
            if !ok {
                self.jobs.clear();
                self.conflicts += 1;
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        let depth = self.ctx.shells.len();
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap() as usize;
            let ci = self.cell[v] as usize - 1;
            self.cell[v] = 0;
            self.sizes[ci] -= 1;
            for s in 0..depth {
                for &u in self.shell(v, s) {
                    self.counts[u as usize * depth + s][ci] -= 1;
                }
            }
        }
    }

    fn try_assign(&mut self, v: usize, cell: u8) -> bool {
        self.jobs.push(Job::Force(v as u32, cell));
        self.propagate()
    }

    fn root(&mut self) -> bool {
        !self.ctx.symmetry || self.try_assign(0, 1)
    }

    fn tick(&mut self) -> std::result::Result<(), Abort> {
        self.local_nodes += 1;
        if self.local_nodes.is_multiple_of(256) {
            self.flush_nodes()?;
        }
        Ok(())
    }

    fn flush_nodes(&mut self) -> std::result::Result<(), Abort> {
        let pending = self.local_nodes % 256;
        let add = if pending == 0 { 256 } else { pending };
        let total = self.ctx.nodes.fetch_add(add, Ordering::Relaxed) + add;
        self.local_nodes = 0;
        if self.ctx.exhausted.load(Ordering::Relaxed) {
            return Err(Abort);
        }
        let over_time = self.ctx.deadline.is_some_and(|d| Instant::now() > d);
        if total > self.ctx.node_limit || over_time {
            self.ctx.exhausted.store(true, Ordering::Relaxed);
            return Err(Abort);
        }
        Ok(())
    }

    fn next_undecided(&self, from: usize) -> Option<usize> {
        (from..self.ctx.n_vertices).find(|&v| self.cell[v] == 0)
    }

    fn dfs(&mut self, from: usize) -> std::result::Result<(), Abort> {
        let Some(v) = self.next_undecided(from) else {
            self.solutions.push(self.cell.clone());
            return Ok(());
        };
        self.tick()?;
        for cell in [1u8, 2] {
            if self.sizes[cell as usize - 1] >= self.ctx.cell_size[cell as usize - 1] {
                continue;
            }
            let mark = self.trail.len();
            if self.try_assign(v, cell) {
                let r = self.dfs(v + 1);
                if r.is_err() {
                    self.undo_to(mark);
                    return r;
                }
            }
            self.undo_to(mark);
        }
        Ok(())
    }

    /// Explores the first `depth` decision levels and returns the decision
    /// sequences reaching that depth. Solutions found earlier are kept.
    fn prefixes(
        &mut self,
        from: usize,
        depth: usize,
        path: &mut Vec<(u32, u8)>,
        out: &mut Vec<Vec<(u32, u8)>>,
    ) -> std::result::Result<(), Abort> {
        let Some(v) = self.next_undecided(from) else {
            self.solutions.push(self.cell.clone());
            return Ok(());
        };
        if path.len() == depth {
            out.push(path.clone());
            return Ok(());
        }
        self.tick()?;
        for cell in [1u8, 2] {
            if self.sizes[cell as usize - 1] >= self.ctx.cell_size[cell as usize - 1] {
                continue;
            }
            let mark = self.trail.len();
            if self.try_assign(v, cell) {
                path.push((v as u32, cell));
                let r = self.prefixes(v + 1, depth, path, out);
                path.pop();
                if r.is_err() {
                    self.undo_to(mark);
                    return r;
                }
            }
            self.undo_to(mark);
        }
        Ok(())
    }

    /// Replays a decision prefix and searches below it.
    fn run_task(&mut self, prefix: &[(u32, u8)]) -> std::result::Result<(), Abort> {
        let replayed = self.root() && prefix.iter().all(|&(v, c)| self.try_assign(v as usize, c));
        assert!(replayed, "recorded prefix must replay without conflict");
        let from = prefix.last().map_or(0, |&(v, _)| v as usize + 1);
        let r = self.dfs(from);
        let _ = self.flush_nodes();
        r
    }
}

/// Exhaustively enumerates the equitable partitions of `spec.params` with
/// quotient matrix exactly `spec.matrix`, up to equivalence.
pub fn enumerate(spec: &SearchSpec) -> Result<SearchOutcome> {
    let started = Instant::now();
    let params = spec.params;
    let m = spec.matrix;
    QuotientMatrix::new(params, m.a, m.b, m.c, m.d)?;
    if params.n() > DEFAULT_MAX_N {
        return Err(Error::TooLarge(format!(
            "search deduplicates by canonical form, which is limited to n <= {DEFAULT_MAX_N}"
        )));
    }
    let Some(cell_size) = m.cell_sizes(params) else {
        return Ok(SearchOutcome::empty(
            format!(
                "|C1| = c·C(n,w)/(b+c) = {}·{}/{} is not an integer",
                m.c,
                params.order(),
                m.b + m.c
            ),
            started,
            spec.keep_labeled,
        ));
    };
    let depth = spec
        .shell_depth
        .unwrap_or(u32::MAX)
        .clamp(1, params.diameter());
    let targets = match shell_targets(params, &m, depth) {
        Ok(t) => t,
        Err(reason) => return Ok(SearchOutcome::empty(reason, started, spec.keep_labeled)),
    };
    let theta = m.a as i64 - m.c as i64;
    let even_index = params.eigenvalue_index(theta).is_some_and(|j| j % 2 == 0);
    let antipodal = spec.antipodal.unwrap_or(params.is_balanced() && even_index);
    if antipodal && !(params.is_balanced() && even_index) {
        return Err(Error::Parameter(
            "antipodal forcing needs n = 2w and an even eigenvalue index".into(),
        ));
    }

    let graph = JohnsonGraph::new(params);
    let shells = graph.distance_shells(depth);
    let ctx = Context {
        n_vertices: graph.order(),
        shell_len: (1..=depth).map(|s| params.shell_size(s) as usize).collect(),
        shells,
        targets,
        cell_size: [cell_size.0, cell_size.1],
        antipode: antipodal.then(|| {
            (0..graph.order())
                .map(|i| graph.antipode_index(i) as u32)
                .collect()
        }),
        symmetry: spec.symmetry,
        node_limit: spec.node_limit,
        deadline: spec.time_limit.map(|t| started + t),
        nodes: AtomicU64::new(0),
        exhausted: AtomicBool::new(false),
    };

    let mut conflicts = 0;
    let mut tasks = 0;
    let mut raw: Vec<Vec<u8>> = Vec::new();
    if spec.threads <= 1 {
        let mut engine = Engine::new(&ctx);
        if engine.root() {
            let _ = engine.dfs(0);
        }
        let _ = engine.flush_nodes();
        conflicts += engine.conflicts;
        raw.append(&mut engine.solutions);
    } else {
        let mut engine = Engine::new(&ctx);
        let mut prefixes = Vec::new();
        if engine.root() {
            let _ = engine.prefixes(0, spec.split_depth, &mut Vec::new(), &mut prefixes);
        }
        let _ = engine.flush_nodes();
        conflicts += engine.conflicts;
        raw.append(&mut engine.solutions);
        tasks = prefixes.len() as u64;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.threads)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        let results: Vec<(Vec<Vec<u8>>, u64)> = pool.install(|| {
            prefixes
                .par_iter()
                .map(|prefix| {
                    let mut engine = Engine::new(&ctx);
                    if !ctx.exhausted.load(Ordering::Relaxed) {
                        let _ = engine.run_task(prefix);
                    }
                    (std::mem::take(&mut engine.solutions), engine.conflicts)
                })
                .collect()
        });
        for (mut sols, c) in results {
            raw.append(&mut sols);
            conflicts += c;
        }
    }

    let status = if ctx.exhausted.load(Ordering::Relaxed) {
        SearchStatus::BudgetExhausted
    } else {
        SearchStatus::Complete
    };
    raw.sort_unstable();
    raw.dedup();
    let solutions = raw.len() as u64;
    let labeled: Vec<TwoPartition> = raw
        .into_iter()
        .map(|cells| TwoPartition::from_membership(params, cells))
        .collect::<Result<_>>()?;
    for p in &labeled {
        match p.verify_equitable_in(&graph) {
            Equitability::Equitable(found) if found == m => {}
            other => {
                return Err(Error::Internal(format!(
                    "search emitted {p} which verifies as {other:?}"
                )))
            }
        }
    }
    let mut classes: Vec<TwoPartition> = labeled
        .par_iter()
        .map(|p| canonical_form(p).map(|cf| cf.partition()))
        .collect::<Result<_>>()?;
    classes.sort_by(|x, y| x.membership().cmp(y.membership()));
    classes.dedup();

    Ok(SearchOutcome {
        status,
        partitions: classes,
        labeled: spec.keep_labeled.then_some(labeled),
        nodes: ctx.nodes.load(Ordering::Relaxed),
        stats: SearchStats {
            solutions,
            conflicts,
            tasks,
        },
        wall: started.elapsed(),
        infeasible: None,
    })
}
