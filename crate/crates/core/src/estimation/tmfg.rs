//! Triangulated maximally filtered graph.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Planar triangulation kept by the filter.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredGraph {
    pub n: usize,
    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Triangular faces of the final embedding, each sorted ascending.
    pub faces: Vec<[usize; 3]>,
    /// The seed 4-clique followed by inserted vertices, in insertion order.
    pub order: Vec<usize>,
    pub total_weight: f64,
}

impl FilteredGraph {
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }
}

fn sorted3(f: [usize; 3]) -> [usize; 3] {
    let mut f = f;
    f.sort_unstable();
    f
}

#[inline]
fn gain(w: &[f64], n: usize, v: usize, f: &[usize; 3]) -> f64 {
    w[v * n + f[0]] + w[v * n + f[1]] + w[v * n + f[2]]
}

/// Candidate `a` beats `b`: larger gain, then smaller sorted face.
fn better(a: (f64, [usize; 3]), b: (f64, [usize; 3])) -> bool {
    match a.0.partial_cmp(&b.0) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => a.1 < b.1,
    }
}

/// The 4-clique of maximal total weight; ties go to the lexicographically
/// smallest vertex set.
pub fn seed_clique(w: &[f64], n: usize) -> [usize; 4] {
    let mut best = (f64::NEG_INFINITY, [0, 1, 2, 3]);
    for a in 0..n {
        for b in a + 1..n {
            let ab = w[a * n + b];
            for c in b + 1..n {
                let abc = ab + w[a * n + c] + w[b * n + c];
                for d in c + 1..n {
                    let s = abc + w[a * n + d] + w[b * n + d] + w[c * n + d];
                    if s > best.0 {
                        best = (s, [a, b, c, d]);
                    }
                }
            }
        }
    }
    best.1
}

fn validate(weights: &[f64], n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::TooFewVertices { needed: 4, got: n });
    }
    if weights.len() != n * n {
        return Err(Error::Shape(format!("expected {} weights, got {}", n * n, weights.len())));
    }
    for i in 0..n {
        if weights[i * n + i] != 0.0 {
            return Err(Error::Contract(format!("diagonal entry {i} must be zero")));
        }
        for j in i + 1..n {
            let (a, b) = (weights[i * n + j], weights[j * n + i]);
            if a != b || !a.is_finite() || a < 0.0 {
                return Err(Error::Contract(format!(
                    "weights must be symmetric, finite and nonnegative; ({i}, {j}) = {a}, ({j}, {i}) = {b}"
                )));
            }
        }
    }
    Ok(())
}

/// Greedy TMFG over a symmetric nonnegative row-major `n × n` matrix.
///
/// Starting from the heaviest 4-clique, the (vertex, face) pair with the
/// largest gain `w(v,a) + w(v,b) + w(v,c)` is inserted until every vertex is
/// placed, splitting the face into three. Ties prefer the lower vertex, then
/// the lexicographically smaller face. The result has `3n − 6` edges.
pub fn tmfg(weights: &[f64], n: usize) -> Result<FilteredGraph> {
    validate(weights, n)?;
    let w = weights;
    let seed = seed_clique(w, n);
    let mut faces: Vec<[usize; 3]> = vec![
        [seed[0], seed[1], seed[2]],
        [seed[0], seed[1], seed[3]],
        [seed[0], seed[2], seed[3]],
        [seed[1], seed[2], seed[3]],
    ];
    let mut alive = vec![true; 4];
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(3 * n - 6);
    for i in 0..4 {
        for j in i + 1..4 {
            edges.push((seed[i], seed[j]));
        }
    }
    let mut order: Vec<usize> = seed.to_vec();
    let mut placed = vec![false; n];
    seed.iter().for_each(|&v| placed[v] = true);

    // best face per unplaced vertex, maintained incrementally
    let scan = |v: usize, faces: &[[usize; 3]], alive: &[bool]| -> (f64, usize) {
        let mut best: Option<(f64, usize)> = None;
        for (fi, f) in faces.iter().enumerate() {
            if !alive[fi] {
                continue;
            }
            let g = gain(w, n, v, f);
            if best.map_or(true, |(bg, bf)| better((g, *f), (bg, faces[bf]))) {
                best = Some((g, fi));
            }
        }
        best.expect("a triangulation always has faces")
    };
    let mut best: Vec<Option<(f64, usize)>> = (0..n)
        .map(|v| (!placed[v]).then(|| scan(v, &faces, &alive)))
        .collect();

    for _ in 4..n {
        // vertices are scanned in ascending order, so equal gains keep the lower one
        let mut pick: Option<(usize, f64, usize)> = None;
        for v in 0..n {
            if let Some((g, fi)) = best[v] {
                if pick.map_or(true, |(_, pg, _)| g > pg) {
                    pick = Some((v, g, fi));
                }
            }
        }
        let (v, _, fi) = pick.expect("an unplaced vertex remains");
        let [a, b, c] = faces[fi];
        alive[fi] = false;
        let new_faces = [sorted3([a, b, v]), sorted3([a, c, v]), sorted3([b, c, v])];
        let first_new = faces.len();
        faces.extend_from_slice(&new_faces);
        alive.extend_from_slice(&[true; 3]);
        for x in [a, b, c] {
            edges.push((x.min(v), x.max(v)));
        }
        placed[v] = true;
        order.push(v);
        best[v] = None;

        for u in 0..n {
            let Some((bg, bf)) = best[u] else { continue };
            if bf == fi {
                best[u] = Some(scan(u, &faces, &alive));
                continue;
            }
            let mut cur = (bg, bf);
            for nf in first_new..first_new + 3 {
                let g = gain(w, n, u, &faces[nf]);
                if better((g, faces[nf]), (cur.0, faces[cur.1])) {
                    cur = (g, nf);
                }
            }
            best[u] = Some(cur);
        }
    }

    edges.sort_unstable();
    let total_weight = edges.iter().map(|&(a, b)| w[a * n + b]).sum();
    let mut out_faces: Vec<[usize; 3]> = faces
        .iter()
        .zip(&alive)
        .filter(|(_, &al)| al)
        .map(|(f, _)| sorted3(*f))
        .collect();
    out_faces.sort_unstable();
    Ok(FilteredGraph {
        n,
        edges,
        faces: out_faces,
        order,
        total_weight,
    })
}
