//! Maximum-weight matching on a dense general graph (Edmonds' blossom
//! algorithm with a primal-dual update, O(V³)).
//!
//! Vertices are `1..=n` internally; index 0 is the "none" sentinel. Blossoms
//! get ids `n+1..=2n`. Edge weights must be positive; a zero weight means "no
//! edge". All arithmetic is in integers: vertex duals are kept doubled so
//! every update stays integral.

use std::collections::VecDeque;

#[derive(Clone, Copy, Default)]
struct Edge {
    u: usize,
    v: usize,
    w: i64,
}

const INF: i64 = i64::MAX / 4;

// Labels.
const FREE: i8 = -1;
const OUTER: i8 = 0;
const INNER: i8 = 1;

struct Blossom {
    n: usize,
    n_x: usize,
    g: Vec<Vec<Edge>>,
    lab: Vec<i64>,
    mate: Vec<usize>,
    slack: Vec<usize>,
    st: Vec<usize>,
    pa: Vec<usize>,
    flo_from: Vec<Vec<usize>>,
    s: Vec<i8>,
    vis: Vec<usize>,
    flo: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    stamp: usize,
}

impl Blossom {
    fn new(n: usize, weight: impl Fn(usize, usize) -> i64) -> Self {
        let m = 2 * n + 1;
        let mut g = vec![vec![Edge::default(); m]; m];
        for u in 1..=n {
            for v in 1..=n {
                g[u][v] = Edge {
                    u,
                    v,
                    w: if u == v { 0 } else { weight(u - 1, v - 1) },
                };
            }
        }
        Blossom {
            n,
            n_x: n,
            g,
            lab: vec![0; m],
            mate: vec![0; m],
            slack: vec![0; m],
            st: (0..m).collect(),
            pa: vec![0; m],
            flo_from: vec![vec![0; n + 1]; m],
            s: vec![FREE; m],
            vis: vec![0; m],
            flo: vec![Vec::new(); m],
            queue: VecDeque::new(),
            stamp: 0,
        }
    }

    fn e_delta(&self, e: Edge) -> i64 {
        self.lab[e.u] + self.lab[e.v] - self.g[e.u][e.v].w * 2
    }

    fn update_slack(&mut self, u: usize, x: usize) {
        if self.slack[x] == 0 || self.e_delta(self.g[u][x]) < self.e_delta(self.g[self.slack[x]][x]) {
            self.slack[x] = u;
        }
    }

    fn set_slack(&mut self, x: usize) {
        self.slack[x] = 0;
        for u in 1..=self.n {
            if self.g[u][x].w > 0 && self.st[u] != x && self.s[self.st[u]] == OUTER {
                self.update_slack(u, x);
            }
        }
    }

    fn q_push(&mut self, x: usize) {
        if x <= self.n {
            self.queue.push_back(x);
        } else {
            for i in 0..self.flo[x].len() {
                let y = self.flo[x][i];
                self.q_push(y);
            }
        }
    }

    fn set_st(&mut self, x: usize, b: usize) {
        self.st[x] = b;
        if x > self.n {
            for i in 0..self.flo[x].len() {
                let y = self.flo[x][i];
                self.set_st(y, b);
            }
        }
    }

    /// Position of `xr` in blossom `b`, reorienting the cycle so the position is even.
    fn get_pr(&mut self, b: usize, xr: usize) -> usize {
        let pr = self.flo[b].iter().position(|&x| x == xr).expect("sub-blossom present");
        if pr % 2 == 1 {
            self.flo[b][1..].reverse();
            self.flo[b].len() - pr
        } else {
            pr
        }
    }

    fn set_match(&mut self, u: usize, v: usize) {
        self.mate[u] = self.g[u][v].v;
        if u <= self.n {
            return;
        }
        let e = self.g[u][v];
        let xr = self.flo_from[u][e.u];
        let pr = self.get_pr(u, xr);
        for i in 0..pr {
            let (a, b) = (self.flo[u][i], self.flo[u][i ^ 1]);
            self.set_match(a, b);
        }
        self.set_match(xr, v);
        self.flo[u].rotate_left(pr);
    }

    fn augment(&mut self, mut u: usize, mut v: usize) {
        loop {
            let xnv = self.st[self.mate[u]];
            self.set_match(u, v);
            if xnv == 0 {
                return;
            }
            let next = self.st[self.pa[xnv]];
            self.set_match(xnv, next);
            u = next;
            v = xnv;
        }
    }

    fn get_lca(&mut self, mut u: usize, mut v: usize) -> usize {
        self.stamp += 1;
        while u != 0 || v != 0 {
            if u != 0 {
                if self.vis[u] == self.stamp {
                    return u;
                }
                self.vis[u] = self.stamp;
                u = self.st[self.mate[u]];
                if u != 0 {
                    u = self.st[self.pa[u]];
                }
            }
            std::mem::swap(&mut u, &mut v);
        }
        0
    }

    fn add_blossom(&mut self, u: usize, lca: usize, v: usize) {
        let mut b = self.n + 1;
        while b <= self.n_x && self.st[b] != 0 {
            b += 1;
        }
        if b > self.n_x {
            self.n_x += 1;
        }
        self.lab[b] = 0;
        self.s[b] = OUTER;
        self.mate[b] = self.mate[lca];
        self.flo[b].clear();
        self.flo[b].push(lca);
        let mut x = u;
        while x != lca {
            self.flo[b].push(x);
            let y = self.st[self.mate[x]];
            self.flo[b].push(y);
            self.q_push(y);
            x = self.st[self.pa[y]];
        }
        self.flo[b][1..].reverse();
        let mut x = v;
        while x != lca {
            self.flo[b].push(x);
            let y = self.st[self.mate[x]];
            self.flo[b].push(y);
            self.q_push(y);
            x = self.st[self.pa[y]];
        }
        self.set_st(b, b);
        for x in 1..=self.n_x {
            self.g[b][x].w = 0;
            self.g[x][b].w = 0;
        }
        for x in 1..=self.n {
            self.flo_from[b][x] = 0;
        }
        for i in 0..self.flo[b].len() {
            let xs = self.flo[b][i];
            for x in 1..=self.n_x {
                if self.g[b][x].w == 0 || self.e_delta(self.g[xs][x]) < self.e_delta(self.g[b][x]) {
                    self.g[b][x] = self.g[xs][x];
                    self.g[x][b] = self.g[x][xs];
                }
            }
            for x in 1..=self.n {
                if self.flo_from[xs][x] != 0 {
                    self.flo_from[b][x] = xs;
                }
            }
        }
        self.set_slack(b);
    }

    fn expand_blossom(&mut self, b: usize) {
        for i in 0..self.flo[b].len() {
            let x = self.flo[b][i];
            self.set_st(x, x);
        }
        let xr = self.flo_from[b][self.g[b][self.pa[b]].u];
        let pr = self.get_pr(b, xr);
        let mut i = 0;
        while i < pr {
            let xs = self.flo[b][i];
            let xns = self.flo[b][i + 1];
            self.pa[xs] = self.g[xns][xs].u;
            self.s[xs] = INNER;
            self.s[xns] = OUTER;
            self.slack[xs] = 0;
            self.set_slack(xns);
            self.q_push(xns);
            i += 2;
        }
        self.s[xr] = INNER;
        self.pa[xr] = self.pa[b];
        for i in pr + 1..self.flo[b].len() {
            let xs = self.flo[b][i];
            self.s[xs] = FREE;
            self.set_slack(xs);
        }
        self.st[b] = 0;
    }

    fn on_found_edge(&mut self, e: Edge) -> bool {
        let u = self.st[e.u];
        let v = self.st[e.v];
        if self.s[v] == FREE {
            self.pa[v] = e.u;
            self.s[v] = INNER;
            let nu = self.st[self.mate[v]];
            self.slack[v] = 0;
            self.slack[nu] = 0;
            self.s[nu] = OUTER;
            self.q_push(nu);
        } else if self.s[v] == OUTER {
            let lca = self.get_lca(u, v);
            if lca == 0 {
                self.augment(u, v);
                self.augment(v, u);
                return true;
            }
            self.add_blossom(u, lca, v);
        }
        false
    }

    /// One augmentation stage. Returns false when no augmenting path improves the weight.
    fn stage(&mut self) -> bool {
        for x in 1..=self.n_x {
            self.s[x] = FREE;
            self.slack[x] = 0;
        }
        self.queue.clear();
        for x in 1..=self.n_x {
            if self.st[x] == x && self.mate[x] == 0 {
                self.pa[x] = 0;
                self.s[x] = OUTER;
                self.q_push(x);
            }
        }
        if self.queue.is_empty() {
            return false;
        }
        loop {
            while let Some(u) = self.queue.pop_front() {
                if self.s[self.st[u]] == INNER {
                    continue;
                }
                for v in 1..=self.n {
                    if self.g[u][v].w > 0 && self.st[u] != self.st[v] {
                        if self.e_delta(self.g[u][v]) == 0 {
                            if self.on_found_edge(self.g[u][v]) {
                                return true;
                            }
                        } else {
                            let sv = self.st[v];
                            self.update_slack(u, sv);
                        }
                    }
                }
            }
            let mut d = INF;
            for b in self.n + 1..=self.n_x {
                if self.st[b] == b && self.s[b] == INNER {
                    d = d.min(self.lab[b] / 2);
                }
            }
            for x in 1..=self.n_x {
                if self.st[x] == x && self.slack[x] != 0 {
                    let delta = self.e_delta(self.g[self.slack[x]][x]);
                    if self.s[x] == FREE {
                        d = d.min(delta);
                    } else if self.s[x] == OUTER {
                        d = d.min(delta / 2);
                    }
                }
            }
            for u in 1..=self.n {
                match self.s[self.st[u]] {
                    OUTER => {
                        if self.lab[u] <= d {
                            return false;
                        }
                        self.lab[u] -= d;
                    }
                    INNER => self.lab[u] += d,
                    _ => {}
                }
            }
            for b in self.n + 1..=self.n_x {
                if self.st[b] == b {
                    match self.s[self.st[b]] {
                        OUTER => self.lab[b] += d * 2,
                        INNER => self.lab[b] -= d * 2,
                        _ => {}
                    }
                }
            }
            self.queue.clear();
            for x in 1..=self.n_x {
                if self.st[x] == x
                    && self.slack[x] != 0
                    && self.st[self.slack[x]] != x
                    && self.e_delta(self.g[self.slack[x]][x]) == 0
                    && self.on_found_edge(self.g[self.slack[x]][x])
                {
                    return true;
                }
            }
            for b in self.n + 1..=self.n_x {
                if self.st[b] == b && self.s[b] == INNER && self.lab[b] == 0 {
                    self.expand_blossom(b);
                }
            }
        }
    }

    fn solve(mut self) -> Vec<Option<usize>> {
        let mut w_max = 0;
        for u in 1..=self.n {
            for v in 1..=self.n {
                self.flo_from[u][v] = if u == v { u } else { 0 };
                w_max = w_max.max(self.g[u][v].w);
            }
        }
        for u in 1..=self.n {
            self.lab[u] = w_max;
        }
        while self.stage() {}
        (1..=self.n)
            .map(|u| (self.mate[u] != 0).then(|| self.mate[u] - 1))
            .collect()
    }
}

/// Maximum-weight matching of the complete graph on `n` vertices with weights
/// `weight(i, j)` (symmetric, non-negative; 0 means no edge). Returns the mate
/// of each vertex.
pub(crate) fn max_weight_matching(n: usize, weight: impl Fn(usize, usize) -> i64) -> Vec<Option<usize>> {
    if n == 0 {
        return Vec::new();
    }
    Blossom::new(n, weight).solve()
}

/// Minimum-weight perfect matching on an even number of vertices with
/// non-negative integer costs.
///
/// Costs are flipped to `big − cost` with `big > (n/2)·max_cost`, so every
/// perfect matching outweighs every non-perfect one.
pub(crate) fn min_weight_perfect_matching(n: usize, cost: impl Fn(usize, usize) -> i64) -> Vec<usize> {
    assert!(n.is_multiple_of(2), "perfect matching needs an even vertex count");
    let mut max_cost = 0;
    for i in 0..n {
        for j in 0..i {
            let c = cost(i, j);
            assert!(c >= 0, "costs must be non-negative");
            max_cost = max_cost.max(c);
        }
    }
    let big = (n as i64 / 2 + 1) * (max_cost + 1);
    let mate = max_weight_matching(n, |i, j| big - cost(i, j));
    mate.into_iter()
        .map(|m| m.expect("complete graph with dominant weights yields a perfect matching"))
        .collect()
}
