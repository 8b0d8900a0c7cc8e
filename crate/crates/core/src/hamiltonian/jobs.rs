//! The recursive jobs. Each returns its vertex order together with the length
//! of its longest chain of dependent passes; siblings run concurrently, so a
//! parent's depth is its own passes plus the deepest child.

use std::cell::RefCell;
use std::cmp::Reverse;

use super::consumers::{CrossingScan, GroupDegrees, MergeWindows, Neighbours, ScopeEdges, A_TO_B, B_TO_A};
use super::Anchor;
use crate::error::{Error, Result};
use crate::oracles::oracle_ham_cycle;
use crate::scc::peel_chain;
use crate::stream::cosched::{join_all, CoScheduler, LocalFuture};
use crate::stream::VertexId;

pub(super) struct Ctx<'a> {
    pub(super) sched: &'a CoScheduler<'a, 'a>,
    pub(super) n_root: usize,
    pub(super) budget: usize,
    pub(super) base_case: usize,
    /// `(parent size, child size)` for every nested cycle call.
    pub(super) nesting: RefCell<Vec<(usize, usize)>>,
}

pub(super) struct Piece {
    pub(super) order: Vec<VertexId>,
    pub(super) depth: usize,
}

type Job<'a> = LocalFuture<'a, Result<Piece>>;

/// A strongly connected component with in-degrees counted inside it.
#[derive(Clone, Debug)]
pub(super) struct Comp {
    pub(super) vertices: Vec<VertexId>,
    pub(super) d_in: Vec<i64>,
}

/// Splits a vertex set into its SCC chain. An in-degree inside a component is
/// the in-degree inside the whole set minus the sizes of earlier components.
pub(super) fn chain_of(vertices: &[VertexId], d_in: &[i64]) -> Result<Vec<Comp>> {
    let comps = peel_chain(vertices, d_in, None, false)?;
    let pos: std::collections::HashMap<VertexId, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut before = 0i64;
    let mut out = Vec::with_capacity(comps.len());
    for c in comps {
        let d = c.iter().map(|v| d_in[pos[v]] - before).collect();
        before += c.len() as i64;
        out.push(Comp { vertices: c, d_in: d });
    }
    Ok(out)
}

fn done(order: Vec<VertexId>, depth: usize) -> Result<Piece> {
    Ok(Piece { order, depth })
}

/// Hamiltonian cycle of a strongly connected scope, listed without repeating its first vertex.
pub(super) fn cycle<'a>(ctx: &'a Ctx<'a>, comp: Comp, parent: Option<usize>) -> Job<'a> {
    Box::pin(async move {
        let Comp { vertices: scope, d_in } = comp;
        let m = scope.len();
        if let Some(p) = parent {
            ctx.nesting.borrow_mut().push((p, m));
            if m > (3 * p).div_ceil(4) {
                return Err(Error::Invariant(format!("nested scope of {m} exceeds 3/4 of {p}")));
            }
        }
        if m == 1 {
            return done(scope, 0);
        }
        let _held = ctx.sched.charge(2 * m);
        if m <= ctx.base_case {
            let buf = ctx.sched.pass(ScopeEdges::new(&scope)).await;
            let local = oracle_ham_cycle(&buf.graph()?)?
                .ok_or_else(|| Error::Invariant(format!("scope of {m} vertices has no Hamiltonian cycle")))?;
            return done(buf.global(&local), 1);
        }

        let m64 = m as i64;
        let (vi, spread) = (0..m)
            .map(|i| (i, d_in[i].min(m64 - 1 - d_in[i])))
            .max_by_key(|&(i, s)| (s, Reverse(scope[i])))
            .expect("scope is not empty");
        if spread < m64 / 4 - 1 {
            return Err(Error::Invariant(format!("best split vertex has spread {spread} in a scope of {m}")));
        }
        let v = scope[vi];

        let (l, w) = ctx.sched.pass(Neighbours::new(v, &scope)).await.split()?;
        if l.is_empty() || w.is_empty() {
            return Err(Error::Invariant(format!("vertex {v} has no in- or out-neighbour in a strong scope")));
        }
        let degs = ctx.sched.pass(GroupDegrees::new(&[&l, &w])).await.into_degrees();
        let l_chain = chain_of(&l, &degs[0])?;
        let w_chain = chain_of(&w, &degs[1])?;
        let ids = |chain: &[Comp]| chain.iter().map(|c| c.vertices.clone()).collect::<Vec<_>>();
        let cross = ctx.sched.pass(CrossingScan::new(&ids(&w_chain), &ids(&l_chain))).await.finish()?;
        let (w2, l2) = cross.into_l_source;
        let (w1, l1) = cross.from_w_sink;

        let w_last = w_chain.len() - 1;
        let w_of = |x: VertexId| w_chain.iter().position(|c| c.vertices.contains(&x)).expect("w is in W");
        let l_of = |x: VertexId| l_chain.iter().position(|c| c.vertices.contains(&x)).expect("l is in L");
        let kw = w_of(w2);
        let jobs: Vec<Job<'a>> = if kw == w_last {
            vec![
                restricted(ctx, w_chain, Anchor::End, w2, Some(m)),
                restricted(ctx, l_chain, Anchor::Start, l2, Some(m)),
            ]
        } else {
            let ml = l_of(l1);
            let middle: Vec<VertexId> = w_chain[kw + 1..w_last]
                .iter()
                .chain(&l_chain[1..ml])
                .flat_map(|c| c.vertices.iter().copied())
                .collect();
            vec![
                restricted(ctx, w_chain[..=kw].to_vec(), Anchor::End, w2, Some(m)),
                restricted(ctx, l_chain[..1].to_vec(), Anchor::Start, l2, Some(m)),
                path(ctx, middle),
                restricted(ctx, w_chain[w_last..].to_vec(), Anchor::End, w1, Some(m)),
                restricted(ctx, l_chain[ml..].to_vec(), Anchor::Start, l1, Some(m)),
            ]
        };
        let mut order = vec![v];
        let mut depth = 0;
        for piece in join_all(jobs).await {
            let piece = piece?;
            order.extend(piece.order);
            depth = depth.max(piece.depth);
        }
        done(order, 3 + depth)
    })
}

/// Hamiltonian path through a known SCC chain, starting at `u` in the first
/// component or ending at `u` in the last.
pub(super) fn restricted<'a>(
    ctx: &'a Ctx<'a>,
    chain: Vec<Comp>,
    anchor: Anchor,
    u: VertexId,
    parent: Option<usize>,
) -> Job<'a> {
    Box::pin(async move {
        let ext = match anchor {
            Anchor::Start => 0,
            Anchor::End => chain.len().saturating_sub(1),
        };
        if !chain.get(ext).is_some_and(|c| c.vertices.contains(&u)) {
            let which = if anchor == Anchor::Start { "source" } else { "sink" };
            return Err(Error::Precondition(format!("vertex {u} is not in the {which} component")));
        }
        let jobs: Vec<Job<'a>> = chain
            .into_iter()
            .enumerate()
            .map(|(i, c)| if i == ext { cycle(ctx, c, parent) } else { path(ctx, c.vertices) })
            .collect();
        let mut order = Vec::new();
        let mut depth = 0;
        for (i, piece) in join_all(jobs).await.into_iter().enumerate() {
            let mut piece = piece?;
            if i == ext {
                let at = piece.order.iter().position(|&x| x == u).expect("cycle covers its component");
                let shift = if anchor == Anchor::Start { at } else { at + 1 };
                piece.order.rotate_left(shift);
            }
            order.extend(piece.order);
            depth = depth.max(piece.depth);
        }
        done(order, depth)
    })
}

struct Merge {
    a: Vec<VertexId>,
    b: Vec<VertexId>,
    ia: usize,
    ib: usize,
    out: Vec<VertexId>,
}

impl Merge {
    fn finished(&self) -> bool {
        self.ia == self.a.len() || self.ib == self.b.len()
    }

    fn window(&self, t: usize) -> (&[VertexId], &[VertexId]) {
        (&self.a[self.ia..(self.ia + t).min(self.a.len())], &self.b[self.ib..(self.ib + t).min(self.b.len())])
    }

    /// Emits heads while both fall inside the buffered windows.
    fn advance(&mut self, windows: &MergeWindows, p: usize, t: usize) -> Result<()> {
        let (a0, b0) = (self.ia, self.ib);
        while !self.finished() && self.ia < a0 + t && self.ib < b0 + t {
            match windows.get(p, self.ia - a0, self.ib - b0) {
                A_TO_B => {
                    self.out.push(self.a[self.ia]);
                    self.ia += 1;
                }
                B_TO_A => {
                    self.out.push(self.b[self.ib]);
                    self.ib += 1;
                }
                _ => {
                    return Err(Error::Malformed(format!(
                        "no edge between {} and {}",
                        self.a[self.ia], self.b[self.ib]
                    )))
                }
            }
        }
        Ok(())
    }

    fn into_path(mut self) -> Vec<VertexId> {
        self.out.extend_from_slice(&self.a[self.ia..]);
        self.out.extend_from_slice(&self.b[self.ib..]);
        self.out
    }
}

/// Hamiltonian path of a scope by repeated pairwise merging.
pub(super) fn path<'a>(ctx: &'a Ctx<'a>, mut scope: Vec<VertexId>) -> Job<'a> {
    Box::pin(async move {
        let m = scope.len();
        if m <= 1 {
            return done(scope, 0);
        }
        let _held = ctx.sched.charge(2 * m);
        let budget = (ctx.budget.saturating_mul(m) / ctx.n_root.max(1)).max(4);
        scope.sort_unstable();
        let mut paths: Vec<Vec<VertexId>> = scope.into_iter().map(|v| vec![v]).collect();
        let mut depth = 0;
        while paths.len() > 1 {
            let carry = (paths.len() % 2 == 1).then(|| paths.pop()).flatten();
            let mut merges = Vec::with_capacity(paths.len() / 2);
            let mut it = paths.into_iter();
            while let (Some(a), Some(b)) = (it.next(), it.next()) {
                merges.push(Merge { out: Vec::with_capacity(a.len() + b.len()), a, b, ia: 0, ib: 0 });
            }
            loop {
                let active: Vec<usize> = (0..merges.len()).filter(|&p| !merges[p].finished()).collect();
                if active.is_empty() {
                    break;
                }
                let t = (budget / active.len()).isqrt().max(1);
                let windows: Vec<_> = active.iter().map(|&p| merges[p].window(t)).collect();
                let buf = ctx.sched.pass(MergeWindows::new(&windows)).await;
                depth += 1;
                for (slot, &p) in active.iter().enumerate() {
                    merges[p].advance(&buf, slot, t)?;
                }
            }
            paths = merges.into_iter().map(Merge::into_path).collect();
            paths.extend(carry);
        }
        done(paths.pop().expect("one path remains"), depth)
    })
}
