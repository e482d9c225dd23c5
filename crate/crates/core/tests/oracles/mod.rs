//! Slow, independent reference implementations used by the test suites.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

fn sorted3(mut f: [usize; 3]) -> [usize; 3] {
    f.sort_unstable();
    f
}

fn gain(w: &[f64], n: usize, v: usize, f: [usize; 3]) -> f64 {
    f.iter().map(|&x| w[v * n + x]).sum()
}

/// Max-weight 4-clique by exhaustive search, lexicographically first on ties.
pub fn seed_clique(w: &[f64], n: usize) -> [usize; 4] {
    let mut best: Option<(f64, [usize; 4])> = None;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let q = [a, b, c, d];
                    let mut s = 0.0;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            s += w[q[i] * n + q[j]];
                        }
                    }
                    if best.map_or(true, |(bs, _)| s > bs) {
                        best = Some((s, q));
                    }
                }
            }
        }
    }
    best.unwrap().1
}

/// Greedy construction that rescans every (vertex, face) pair at each
/// insertion: largest gain, then lowest vertex, then smallest face.
pub fn naive_tmfg(w: &[f64], n: usize) -> (Vec<(usize, usize)>, Vec<usize>) {
    let q = seed_clique(w, n);
    let mut faces = vec![
        sorted3([q[0], q[1], q[2]]),
        sorted3([q[0], q[1], q[3]]),
        sorted3([q[0], q[2], q[3]]),
        sorted3([q[1], q[2], q[3]]),
    ];
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            edges.push((q[i].min(q[j]), q[i].max(q[j])));
        }
    }
    let mut order = q.to_vec();
    let mut left: Vec<usize> = (0..n).filter(|v| !q.contains(v)).collect();
    while !left.is_empty() {
        let mut best: Option<(f64, usize, [usize; 3], usize)> = None;
        for &v in &left {
            for (fi, &f) in faces.iter().enumerate() {
                let g = gain(w, n, v, f);
                let wins = match best {
                    None => true,
                    Some((bg, bv, bf, _)) => g > bg || (g == bg && (v < bv || (v == bv && f < bf))),
                };
                if wins {
                    best = Some((g, v, f, fi));
                }
            }
        }
        let (_, v, f, fi) = best.unwrap();
        faces.remove(fi);
        faces.push(sorted3([f[0], f[1], v]));
        faces.push(sorted3([f[0], f[2], v]));
        faces.push(sorted3([f[1], f[2], v]));
        for x in f {
            edges.push((x.min(v), x.max(v)));
        }
        order.push(v);
        left.retain(|&u| u != v);
    }
    edges.sort_unstable();
    (edges, order)
}

/// Best total weight over every insertion sequence (any remaining vertex into
/// any face at every step) that starts from the max-weight seed clique.
pub fn brute_force_tmfg_weight(w: &[f64], n: usize) -> f64 {
    let q = seed_clique(w, n);
    let mut base = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            base += w[q[i] * n + q[j]];
        }
    }
    let faces = vec![[q[0], q[1], q[2]], [q[0], q[1], q[3]], [q[0], q[2], q[3]], [q[1], q[2], q[3]]];
    let left: Vec<usize> = (0..n).filter(|v| !q.contains(v)).collect();
    fn go(w: &[f64], n: usize, faces: &[[usize; 3]], left: &[usize]) -> f64 {
        if left.is_empty() {
            return 0.0;
        }
        let mut best = f64::NEG_INFINITY;
        for (li, &v) in left.iter().enumerate() {
            let rest: Vec<usize> = left.iter().enumerate().filter(|&(i, _)| i != li).map(|(_, &u)| u).collect();
            for (fi, &f) in faces.iter().enumerate() {
                let mut nf: Vec<[usize; 3]> = faces.iter().enumerate().filter(|&(i, _)| i != fi).map(|(_, &g)| g).collect();
                nf.extend([[f[0], f[1], v], [f[0], f[2], v], [f[1], f[2], v]]);
                best = best.max(gain(w, n, v, f) + go(w, n, &nf, &rest));
            }
        }
        best
    }
    base + go(w, n, &faces, &left)
}

/// Best total weight over every order of inserting the remaining vertices,
/// each going into its best face at the time, from the max-weight seed clique.
pub fn best_insertion_order_weight(w: &[f64], n: usize) -> f64 {
    let q = seed_clique(w, n);
    let mut base = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            base += w[q[i] * n + q[j]];
        }
    }
    let faces = vec![[q[0], q[1], q[2]], [q[0], q[1], q[3]], [q[0], q[2], q[3]], [q[1], q[2], q[3]]];
    let left: Vec<usize> = (0..n).filter(|v| !q.contains(v)).collect();
    fn go(w: &[f64], n: usize, faces: &[[usize; 3]], left: &[usize]) -> f64 {
        if left.is_empty() {
            return 0.0;
        }
        let mut best = f64::NEG_INFINITY;
        for (li, &v) in left.iter().enumerate() {
            let rest: Vec<usize> = left.iter().enumerate().filter(|&(i, _)| i != li).map(|(_, &u)| u).collect();
            let mut fi = 0;
            for (i, &f) in faces.iter().enumerate() {
                if gain(w, n, v, f) > gain(w, n, v, faces[fi]) || (gain(w, n, v, f) == gain(w, n, v, faces[fi]) && sorted3(f) < sorted3(faces[fi])) {
                    fi = i;
                }
            }
            let f = faces[fi];
            let mut nf: Vec<[usize; 3]> = faces.iter().enumerate().filter(|&(i, _)| i != fi).map(|(_, &g)| g).collect();
            nf.extend([[f[0], f[1], v], [f[0], f[2], v], [f[1], f[2], v]]);
            best = best.max(gain(w, n, v, f) + go(w, n, &nf, &rest));
        }
        best
    }
    base + go(w, n, &faces, &left)
}

/// Checks that `faces` triangulate a sphere over `edges`: every edge lies on
/// exactly two faces, every face edge is an edge, the faces around every
/// vertex form one cycle, and V − E + F = 2. Such a graph is planar.
pub fn is_sphere_triangulation(n: usize, edges: &[(usize, usize)], faces: &[[usize; 3]]) -> bool {
    let edge_set: HashSet<(usize, usize)> = edges.iter().copied().collect();
    if edge_set.len() != edges.len() {
        return false;
    }
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for f in faces {
        for (a, b) in [(f[0], f[1]), (f[0], f[2]), (f[1], f[2])] {
            let e = (a.min(b), a.max(b));
            if !edge_set.contains(&e) {
                return false;
            }
            *count.entry(e).or_default() += 1;
        }
    }
    if count.len() != edges.len() || count.values().any(|&c| c != 2) {
        return false;
    }
    for v in 0..n {
        // link of v: the opposite edges of its faces must form a single cycle
        let link: Vec<(usize, usize)> = faces
            .iter()
            .filter(|f| f.contains(&v))
            .map(|f| {
                let o: Vec<usize> = f.iter().copied().filter(|&x| x != v).collect();
                (o[0], o[1])
            })
            .collect();
        if link.len() < 3 {
            return false;
        }
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(a, b) in &link {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        if adj.values().any(|l| l.len() != 2) {
            return false;
        }
        let start = link[0].0;
        let (mut prev, mut cur, mut steps) = (start, adj[&start][0], 1);
        while cur != start {
            let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
            prev = cur;
            cur = next;
            steps += 1;
            if steps > link.len() {
                return false;
            }
        }
        if steps != link.len() {
            return false;
        }
    }
    n as i64 - edges.len() as i64 + faces.len() as i64 == 2
}

/// Weight of the maximum spanning tree (Prim).
pub fn max_spanning_tree_weight(w: &[f64], n: usize) -> f64 {
    let mut inside = vec![false; n];
    let mut best = vec![f64::NEG_INFINITY; n];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..n {
        let v = (0..n).filter(|&v| !inside[v]).max_by(|&a, &b| best[a].total_cmp(&best[b])).unwrap();
        inside[v] = true;
        total += best[v];
        for u in 0..n {
            if !inside[u] {
                best[u] = best[u].max(w[v * n + u]);
            }
        }
    }
    total
}

/// Greedy Ward merging that recomputes `|A||B| / (|A| + |B|) ‖c_A − c_B‖²`
/// from the centroids at every step; returns the final partition as sorted
/// member lists.
pub fn naive_ward(points: &[Vec<f64>], k: usize) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = (0..points.len()).map(|i| vec![i]).collect();
    let centroid = |c: &[usize]| -> Vec<f64> {
        let d = points[0].len();
        (0..d).map(|j| c.iter().map(|&i| points[i][j]).sum::<f64>() / c.len() as f64).collect()
    };
    while clusters.len() > k {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let (ca, cb) = (centroid(&clusters[a]), centroid(&clusters[b]));
                let (na, nb) = (clusters[a].len() as f64, clusters[b].len() as f64);
                let d2: f64 = ca.iter().zip(&cb).map(|(x, y)| (x - y).powi(2)).sum();
                let cost = na * nb / (na + nb) * d2;
                if cost < best.0 {
                    best = (cost, a, b);
                }
            }
        }
        let merged = clusters.remove(best.2);
        clusters[best.1].extend(merged);
        clusters[best.1].sort_unstable();
    }
    let mut out = clusters;
    out.sort();
    out
}

/// Smallest within-cluster sum of squares over all partitions into exactly `k` groups.
pub fn brute_force_min_within_ss(points: &[Vec<f64>], k: usize) -> f64 {
    fn ss(points: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
        let d = points[0].len();
        let mut total = 0.0;
        for g in 0..k {
            let m: Vec<&Vec<f64>> = points.iter().zip(labels).filter(|(_, &l)| l == g).map(|(p, _)| p).collect();
            let c: Vec<f64> = (0..d).map(|j| m.iter().map(|p| p[j]).sum::<f64>() / m.len() as f64).collect();
            total += m.iter().map(|p| p.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>()).sum::<f64>();
        }
        total
    }
    // restricted growth strings enumerate each set partition once
    fn go(points: &[Vec<f64>], k: usize, labels: &mut Vec<usize>, used: usize, best: &mut f64) {
        let n = points.len();
        if labels.len() == n {
            if used == k {
                *best = best.min(ss(points, labels, k));
            }
            return;
        }
        if used + (n - labels.len()) < k {
            return;
        }
        for g in 0..=used.min(k - 1) {
            labels.push(g);
            go(points, k, labels, used.max(g + 1), best);
            labels.pop();
        }
    }
    let mut best = f64::INFINITY;
    go(points, k, &mut Vec::new(), 0, &mut best);
    best
}
