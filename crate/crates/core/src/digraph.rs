//! Digraphs, the loop-lemma predicates, and the relation/digraph pair used to
//! push local qWNU terms from `n` to `n + 1`.

use std::collections::{BTreeSet, VecDeque};

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// A finite digraph with labelled vertices.
///
/// Vertices are numbered `0..vertex_count()` in ascending label order. Plain
/// graphs use the one-element labels `[0], [1], ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    labels: Vec<Vec<Elem>>,
    edges: BTreeSet<(usize, usize)>,
}

impl Digraph {
    /// Vertices `0..vertex_count`.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let labels = (0..vertex_count).map(|v| vec![v as Elem]).collect();
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if let Some(&(u, v)) = edges
            .iter()
            .find(|&&(u, v)| u >= vertex_count || v >= vertex_count)
        {
            return Err(Error::Argument(format!(
                "edge ({u}, {v}) leaves the vertex set 0..{vertex_count}"
            )));
        }
        Ok(Digraph { labels, edges })
    }

    /// Vertices named by tuples.
    pub fn from_labeled(
        labels: impl IntoIterator<Item = Vec<Elem>>,
        edges: impl IntoIterator<Item = (Vec<Elem>, Vec<Elem>)>,
    ) -> Result<Self> {
        let labels: Vec<Vec<Elem>> = labels
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let find = |l: &Vec<Elem>| {
            labels
                .binary_search(l)
                .map_err(|_| Error::Argument(format!("edge endpoint {l:?} is not a vertex")))
        };
        let edges = edges
            .into_iter()
            .map(|(u, v)| Ok((find(&u)?, find(&v)?)))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Digraph { labels, edges })
    }

    /// The digraph whose vertex set is `elements` and whose edges are `rel`,
    /// a set of pairs of elements.
    pub fn from_relation(size: usize, rel: &[Vec<Elem>]) -> Result<Self> {
        let edges = rel
            .iter()
            .map(|p| match p.as_slice() {
                &[u, v] => Ok((u as usize, v as usize)),
                _ => Err(Error::Argument("edges must be pairs".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Digraph::new(size, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn label(&self, v: usize) -> &[Elem] {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &[Elem]) -> Option<usize> {
        self.labels
            .binary_search_by(|l| l.as_slice().cmp(label))
            .ok()
    }
}

/// Every vertex has an outgoing and an incoming edge.
pub fn is_smooth(g: &Digraph) -> bool {
    let n = g.vertex_count();
    let mut out = vec![false; n];
    let mut inc = vec![false; n];
    for (u, v) in g.edges() {
        out[u] = true;
        inc[v] = true;
    }
    out.iter().zip(&inc).all(|(&o, &i)| o && i)
}

/// Least vertex carrying a loop.
pub fn has_loop(g: &Digraph) -> Option<usize> {
    g.edges().find(|&(u, v)| u == v).map(|(u, _)| u)
}

/// One step of a walk: `forward` means the edge `(from, to)` is used as is,
/// otherwise the edge `(to, from)` is traversed backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub from: usize,
    pub to: usize,
    pub forward: bool,
}

impl Step {
    fn reversed(self) -> Step {
        Step {
            from: self.to,
            to: self.from,
            forward: !self.forward,
        }
    }
}

/// A closed walk, used as the certificate of algebraic length 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedWalk {
    pub start: usize,
    pub steps: Vec<Step>,
}

impl ClosedWalk {
    /// Forward steps minus backward steps.
    pub fn net_length(&self) -> i64 {
        self.steps
            .iter()
            .map(|s| if s.forward { 1 } else { -1 })
            .sum()
    }

    /// Checks that the walk is closed, connected and uses only edges of `g`.
    pub fn is_valid_in(&self, g: &Digraph) -> bool {
        let mut at = self.start;
        for s in &self.steps {
            if s.from != at {
                return false;
            }
            let present = if s.forward {
                g.has_edge(s.from, s.to)
            } else {
                g.has_edge(s.to, s.from)
            };
            if !present {
                return false;
            }
            at = s.to;
        }
        at == self.start && !self.steps.is_empty()
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Decides whether some closed walk has algebraic length 1 and returns one.
///
/// Each weak component gets integer potentials from a spanning tree (forward
/// edge +1, backward edge -1). The net lengths of closed walks in a component
/// are exactly the multiples of the gcd of the potential discrepancies
/// `p(u) + 1 - p(v)` over its edges; a component with gcd 1 yields a walk by
/// combining the fundamental cycles with Bézout coefficients. A loop is a
/// closed walk of length 1 by itself.
pub fn has_algebraic_length_one(g: &Digraph) -> Option<ClosedWalk> {
    if let Some(v) = has_loop(g) {
        return Some(ClosedWalk {
            start: v,
            steps: vec![Step {
                from: v,
                to: v,
                forward: true,
            }],
        });
    }

    let n = g.vertex_count();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        adj[u].push((v, true));
        adj[v].push((u, false));
    }

    let mut potential: Vec<Option<i64>> = vec![None; n];
    // Tree step from the parent into the vertex.
    let mut parent_step: Vec<Option<Step>> = vec![None; n];
    for root in 0..n {
        if potential[root].is_some() {
            continue;
        }
        potential[root] = Some(0);
        let mut component = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let pu = potential[u].expect("visited");
            for &(w, forward) in &adj[u] {
                if potential[w].is_none() {
                    potential[w] = Some(if forward { pu + 1 } else { pu - 1 });
                    parent_step[w] = Some(Step {
                        from: u,
                        to: w,
                        forward,
                    });
                    component.push(w);
                    queue.push_back(w);
                }
            }
        }

        // Fundamental cycles with non-zero net length, in edge order.
        let members: BTreeSet<usize> = component.iter().copied().collect();
        let cycles: Vec<((usize, usize), i64)> = g
            .edges()
            .filter(|(u, _)| members.contains(u))
            .map(|(u, v)| ((u, v), potential[u].unwrap() + 1 - potential[v].unwrap()))
            .filter(|&(_, d)| d != 0)
            .collect();

        let mut gcd = 0i64;
        let mut coefs: Vec<i64> = Vec::new();
        for &(_, d) in &cycles {
            if gcd == 0 {
                gcd = d;
                coefs.push(1);
            } else {
                let (h, x, y) = ext_gcd(gcd, d);
                for c in coefs.iter_mut() {
                    *c *= x;
                }
                coefs.push(y);
                gcd = h;
            }
            if gcd.abs() == 1 {
                break;
            }
        }
        if gcd.abs() != 1 {
            continue;
        }
        if gcd == -1 {
            for c in coefs.iter_mut() {
                *c = -*c;
            }
        }

        let path_from_root = |v: usize| {
            let mut path = Vec::new();
            let mut at = v;
            while let Some(step) = parent_step[at] {
                path.push(step);
                at = step.from;
            }
            path.reverse();
            path
        };
        let mut steps = Vec::new();
        for (&((u, v), _), &c) in cycles.iter().zip(&coefs) {
            if c == 0 {
                continue;
            }
            let mut cycle = path_from_root(u);
            cycle.push(Step {
                from: u,
                to: v,
                forward: true,
            });
            cycle.extend(path_from_root(v).into_iter().rev().map(Step::reversed));
            if c < 0 {
                cycle = cycle.into_iter().rev().map(Step::reversed).collect();
            }
            for _ in 0..c.unsigned_abs() {
                steps.extend_from_slice(&cycle);
            }
        }
        let walk = ClosedWalk { start: root, steps };
        debug_assert_eq!(walk.net_length(), 1);
        debug_assert!(walk.is_valid_in(g));
        return Some(walk);
    }
    None
}

/// True iff `rel` is closed under every basic operation of `alg` applied
/// coordinate-wise.
pub fn is_admissible(alg: &FiniteAlgebra, rel: &[Vec<Elem>]) -> bool {
    let set: BTreeSet<&[Elem]> = rel.iter().map(Vec::as_slice).collect();
    let tuples: Vec<&[Elem]> = set.iter().copied().collect();
    let Some(width) = tuples.first().map(|t| t.len()) else {
        // The empty relation is closed unless a constant can be produced.
        return alg.ops().iter().all(|op| op.arity() > 0);
    };
    let mut out = vec![0; width];
    for op in alg.ops() {
        let m = op.arity();
        let mut idx = vec![0usize; m];
        let mut args = vec![0; m];
        loop {
            for (c, slot) in out.iter_mut().enumerate() {
                for (a, &i) in args.iter_mut().zip(&idx) {
                    *a = tuples[i][c];
                }
                *slot = op.apply(alg.size(), &args);
            }
            if !set.contains(out.as_slice()) {
                return false;
            }
            let mut p = m;
            let advanced = loop {
                if p == 0 {
                    break false;
                }
                p -= 1;
                idx[p] += 1;
                if idx[p] < tuples.len() {
                    break true;
                }
                idx[p] = 0;
            };
            if !advanced {
                break;
            }
        }
    }
    true
}

/// `S = { (x_1, ..., x_k) : ∃ c̄ ∈ A^n, (c̄, x_1, c̄, x_2, ..., c̄, x_k) ∈ R }`.
///
/// Each tuple of `R` is read as `k` blocks of width `n + 1`: an `n`-wide part
/// followed by one scalar slot.
pub fn build_s<'a>(
    rel: impl IntoIterator<Item = &'a [Elem]>,
    n: usize,
) -> Result<BTreeSet<Vec<Elem>>> {
    let block = n + 1;
    let mut s = BTreeSet::new();
    for t in rel {
        if t.is_empty() || t.len() % block != 0 {
            return Err(Error::Argument(format!(
                "width {} is not a positive multiple of {block}",
                t.len()
            )));
        }
        let blocks: Vec<&[Elem]> = t.chunks_exact(block).collect();
        if blocks.iter().all(|b| b[..n] == blocks[0][..n]) {
            s.insert(blocks.iter().map(|b| b[n]).collect());
        }
    }
    Ok(s)
}

/// The window digraph of a relation `S` of arity `L >= 3`.
///
/// Vertices are the `(L-2)`-prefixes of tuples in `S` together with every
/// edge target; there is an edge `(v_1..v_{L-2}) → (v_2..v_{L-1})` whenever
/// some `(v_1, ..., v_{L-1}, z)` lies in `S`.
pub fn build_g(s: &BTreeSet<Vec<Elem>>) -> Result<Digraph> {
    let Some(len) = s.iter().next().map(Vec::len) else {
        return Digraph::new(0, []);
    };
    if len < 3 {
        return Err(Error::Argument(format!(
            "window digraph needs tuples of length at least 3, got {len}"
        )));
    }
    if s.iter().any(|t| t.len() != len) {
        return Err(Error::Argument("tuples of S differ in length".into()));
    }
    let w = len - 2;
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for t in s {
        let from = t[..w].to_vec();
        let to = t[1..w + 1].to_vec();
        vertices.insert(from.clone());
        vertices.insert(to.clone());
        edges.insert((from, to));
    }
    Digraph::from_labeled(vertices, edges)
}

/// Edge-list exchange format: a `digraph <n>` header, then one `u v` per line.
pub fn format_digraph(g: &Digraph) -> String {
    let mut out = format!("digraph {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut count = None;
    let mut edges = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |column: usize, message: String| Error::Parse {
            line: ln + 1,
            column,
            message,
        };
        let col = raw.find(line).unwrap_or(0) + 1;
        let words: Vec<&str> = line.split_whitespace().collect();
        match (count, words.as_slice()) {
            (None, ["digraph", n]) => {
                count = Some(
                    n.parse::<usize>()
                        .map_err(|_| perr(col, format!("bad vertex count `{n}`")))?,
                );
            }
            (None, _) => return Err(perr(col, "expected `digraph <n_vertices>` header".into())),
            (Some(n), [u, v]) => {
                let parse = |w: &str| {
                    w.parse::<usize>()
                        .ok()
                        .filter(|&x| x < n)
                        .ok_or_else(|| perr(col, format!("bad vertex `{w}` (expected 0..{n})")))
                };
                edges.push((parse(u)?, parse(v)?));
            }
            (Some(_), _) => return Err(perr(col, "expected an edge `u v`".into())),
        }
    }
    let n = count.ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing `digraph <n_vertices>` header".into(),
    })?;
    Digraph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::min2;

    fn cycle(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    #[test]
    fn smoothness() {
        assert!(is_smooth(&Digraph::new(1, [(0, 0)]).unwrap()));
        assert!(is_smooth(&Digraph::new(3, cycle(3)).unwrap()));
        assert!(!is_smooth(&Digraph::new(2, [(0, 1)]).unwrap()));
    }

    #[test]
    fn loops() {
        assert_eq!(has_loop(&Digraph::new(1, [(0, 0)]).unwrap()), Some(0));
        assert_eq!(has_loop(&Digraph::new(2, cycle(2)).unwrap()), None);
        assert_eq!(
            has_loop(&Digraph::new(3, [(2, 2), (1, 1)]).unwrap()),
            Some(1)
        );
    }

    #[test]
    fn algebraic_length() {
        // 3-cycle 0→1→2→0 and 2-cycle 0→3→0 share vertex 0.
        let mut e = cycle(3);
        e.extend([(0, 3), (3, 0)]);
        let g = Digraph::new(4, e).unwrap();
        let w = has_algebraic_length_one(&g).unwrap();
        assert!(w.is_valid_in(&g));
        assert_eq!(w.net_length(), 1);

        assert!(has_algebraic_length_one(&Digraph::new(2, cycle(2)).unwrap()).is_none());

        let g = Digraph::new(1, [(0, 0)]).unwrap();
        let w = has_algebraic_length_one(&g).unwrap();
        assert_eq!(w.net_length(), 1);
        assert!(w.is_valid_in(&g));

        // Cycles of net lengths 5 and 3 force non-trivial Bézout coefficients.
        let mut e = cycle(5);
        e.push((2, 0));
        let g = Digraph::new(5, e).unwrap();
        let w = has_algebraic_length_one(&g).unwrap();
        assert!(w.is_valid_in(&g));
        assert_eq!(w.net_length(), 1);

        // A transitive triangle has one: 0→1→2 then back along 0→2.
        assert!(
            has_algebraic_length_one(&Digraph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap()).is_some()
        );
        // A square with two parallel paths is balanced.
        let square = Digraph::new(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(has_algebraic_length_one(&square).is_none());
    }

    #[test]
    fn admissibility() {
        let alg = min2();
        let full: Vec<Vec<Elem>> = (0..4).map(|i| vec![i / 2, i % 2]).collect();
        assert!(is_admissible(&alg, &full));
        assert!(is_admissible(&alg, &[vec![0, 1]]));
        assert!(!is_admissible(&alg, &[vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn relation_s() {
        let r = [vec![0, 1, 0, 0]];
        let s = build_s(r.iter().map(Vec::as_slice), 1).unwrap();
        assert_eq!(s, [vec![1, 0]].into());

        let r = [vec![0, 1, 1, 0]];
        assert!(build_s(r.iter().map(Vec::as_slice), 1).unwrap().is_empty());

        let r = [vec![0, 1, 0, 1], vec![1, 0, 1, 0]];
        let s = build_s(r.iter().map(Vec::as_slice), 1).unwrap();
        assert_eq!(s, [vec![1, 1], vec![0, 0]].into());

        let r = [vec![0, 1, 0]];
        assert!(build_s(r.iter().map(Vec::as_slice), 1).is_err());
    }

    #[test]
    fn window_digraph() {
        let g = build_g(&[vec![1, 1, 1]].into()).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(has_loop(&g), Some(0));

        let g = build_g(&[vec![0, 1, 2]].into()).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.label(0), &[0]);
        assert_eq!(g.label(1), &[1]);
        assert!(g.has_edge(0, 1));
        assert_eq!(g.edge_count(), 1);

        // All permutations of (0,1,2): every ordered pair of distinct
        // elements is a window step, so G is the complete loopless digraph.
        let perms: BTreeSet<Vec<Elem>> = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
        .iter()
        .map(|p| p.to_vec())
        .collect();
        let g = build_g(&perms).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 6);
        assert!(is_smooth(&g));
        assert_eq!(has_loop(&g), None);

        assert!(build_g(&[vec![0, 1]].into()).is_err());
    }

    #[test]
    fn digraph_format_roundtrip() {
        let g = Digraph::new(4, [(0, 1), (1, 2), (3, 3)]).unwrap();
        let text = format_digraph(&g);
        assert_eq!(text, "digraph 4\n0 1\n1 2\n3 3\n");
        assert_eq!(parse_digraph(&text).unwrap(), g);
        assert!(parse_digraph("digraph 2\n0 2\n").is_err());
        assert!(parse_digraph("0 1\n").is_err());
        let e = parse_digraph("# c\ndigraph 2\n0 1 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
    }
}
