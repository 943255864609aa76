//! Maximum bipartite matching (Hopcroft–Karp) plus a König-style minimum
//! vertex cover of the bipartite graph.

const NIL: usize = usize::MAX;

/// Bipartite graph with `left` and `right` vertex classes and adjacency
/// lists from left to right.
pub struct Bipartite {
    pub left: usize,
    pub right: usize,
    pub adj: Vec<Vec<usize>>,
}

impl Bipartite {
    pub fn new(left: usize, right: usize) -> Bipartite {
        Bipartite {
            left,
            right,
            adj: vec![Vec::new(); left],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
    }
}

/// A maximum matching: `pair_left[u]` is the right partner of left `u`
/// (or `usize::MAX`), and symmetrically `pair_right`.
pub struct Matching {
    pub pair_left: Vec<usize>,
    pub pair_right: Vec<usize>,
    pub size: usize,
}

impl Matching {
    pub const UNMATCHED: usize = NIL;
}

/// Hopcroft–Karp. Deterministic: augmenting paths explore neighbors in
/// adjacency-list order.
pub fn max_matching(g: &Bipartite) -> Matching {
    let mut pair_left = vec![NIL; g.left];
    let mut pair_right = vec![NIL; g.right];
    let mut dist = vec![usize::MAX; g.left];
    let mut size = 0;
    loop {
        // BFS from free left vertices, layering by alternating paths.
        let mut queue = std::collections::VecDeque::new();
        for u in 0..g.left {
            if pair_left[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &g.adj[u] {
                let w = pair_right[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        fn dfs(
            u: usize,
            g: &Bipartite,
            dist: &mut [usize],
            pair_left: &mut [usize],
            pair_right: &mut [usize],
        ) -> bool {
            for &v in &g.adj[u] {
                let w = pair_right[v];
                if w == NIL
                    || (dist[w] == dist[u] + 1 && dfs(w, g, dist, pair_left, pair_right))
                {
                    pair_left[u] = v;
                    pair_right[v] = u;
                    return true;
                }
            }
            dist[u] = usize::MAX;
            false
        }
        for u in 0..g.left {
            if pair_left[u] == NIL && dfs(u, g, &mut dist, &mut pair_left, &mut pair_right) {
                size += 1;
            }
        }
    }
    Matching {
        pair_left,
        pair_right,
        size,
    }
}

/// König's theorem: a minimum vertex cover from a maximum matching.
/// Returns (left-side cover flags, right-side cover flags); the cover size
/// equals the matching size.
pub fn min_vertex_cover(g: &Bipartite, m: &Matching) -> (Vec<bool>, Vec<bool>) {
    // Alternating reachability from free left vertices: Z_L, Z_R.
    let mut vis_l = vec![false; g.left];
    let mut vis_r = vec![false; g.right];
    let mut stack: Vec<usize> = (0..g.left).filter(|&u| m.pair_left[u] == NIL).collect();
    for &u in &stack {
        vis_l[u] = true;
    }
    while let Some(u) = stack.pop() {
        for &v in &g.adj[u] {
            if !vis_r[v] {
                vis_r[v] = true;
                let w = m.pair_right[v];
                if w != NIL && !vis_l[w] {
                    vis_l[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    // Cover = (L ∖ Z_L) ∪ (R ∩ Z_R).
    let cover_l: Vec<bool> = vis_l.iter().map(|&z| !z).collect();
    (cover_l, vis_r)
}
