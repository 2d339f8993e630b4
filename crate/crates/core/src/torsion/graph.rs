use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::rigidity::expected_count;
use crate::complex::{IsoType, OrbitComplex};
use crate::homology::resolution::Resolution;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionVertex {
    /// Index of the vertex orbit in the orbit complex.
    pub orbit: usize,
    pub iso_type: IsoType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionEdge {
    /// Start and end, as indices into the graph's vertex list.
    pub ends: [usize; 2],
    pub iso_type: IsoType,
    /// Edge orbits of the complex making up this edge, in order from the start.
    pub orbits: Vec<usize>,
}

/// The cells of the orbit space whose stabilisers contain elements of order ℓ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionGraph {
    pub l: u64,
    pub vertices: Vec<TorsionVertex>,
    pub edges: Vec<TorsionEdge>,
    /// Vertex orbits of degree two that the reduction left in place.
    pub unmerged: Vec<usize>,
}

pub fn extract(complex: &OrbitComplex, l: u64) -> TorsionGraph {
    let l_divides = |n: usize| n as u64 % l == 0;
    let mut index = BTreeMap::new();
    let mut vertices = Vec::new();
    for (i, c) in complex.cells[0].iter().enumerate() {
        if l_divides(c.stabiliser.order()) {
            index.insert(i, vertices.len());
            vertices.push(TorsionVertex { orbit: i, iso_type: c.iso_type });
        }
    }
    let mut edges = Vec::new();
    for (i, c) in complex.cells[1].iter().enumerate() {
        if !l_divides(c.stabiliser.order()) {
            continue;
        }
        let end = |s: i32| c.boundary.iter().find(|b| b.sign == s).map(|b| index[&b.face]).expect("edge with two ends");
        edges.push(TorsionEdge { ends: [end(-1), end(1)], iso_type: c.iso_type, orbits: vec![i] });
    }
    TorsionGraph { l, vertices, edges, unmerged: Vec::new() }
}

impl TorsionGraph {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    /// Number of edge ends at a vertex; a loop counts twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| e.ends.iter().filter(|&&x| x == v).count()).sum()
    }

    fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].ends.contains(&v)).collect()
    }

    fn remove_vertex(&mut self, v: usize) {
        self.vertices.remove(v);
        for e in &mut self.edges {
            for x in &mut e.ends {
                debug_assert_ne!(*x, v);
                if *x > v {
                    *x -= 1;
                }
            }
        }
    }

    /// Replace the two distinct edges at a degree-two vertex by one edge.
    fn merge_at(&mut self, v: usize) {
        let inc = self.incident(v);
        debug_assert_eq!(inc.len(), 2);
        let (i, j) = (inc[0], inc[1]);
        let mut first = self.edges[i].clone();
        let mut second = self.edges[j].clone();
        // orient first → v → second
        if first.ends[1] != v {
            first.ends.swap(0, 1);
            first.orbits.reverse();
        }
        if second.ends[0] != v {
            second.ends.swap(0, 1);
            second.orbits.reverse();
        }
        let mut orbits = first.orbits;
        orbits.extend(second.orbits);
        let mut merged = TorsionEdge { ends: [first.ends[0], second.ends[1]], iso_type: first.iso_type, orbits };
        if merged.orbits.first() > merged.orbits.last() {
            merged.orbits.reverse();
            merged.ends.swap(0, 1);
        }
        self.edges.remove(j.max(i));
        self.edges.remove(j.min(i));
        self.edges.push(merged);
        self.remove_vertex(v);
    }

    /// Connected components as sets of vertex indices, with their edges.
    fn components(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut vs = vec![];
            while let Some(x) = stack.pop() {
                vs.push(x);
                for e in &self.edges {
                    if e.ends.contains(&x) {
                        for &y in &e.ends {
                            if comp[y] == usize::MAX {
                                comp[y] = id;
                                stack.push(y);
                            }
                        }
                    }
                }
            }
            vs.sort();
            let es = (0..self.edges.len()).filter(|&e| comp[self.edges[e].ends[0]] == id).collect();
            out.push((vs, es));
        }
        out
    }

    /// Graphviz rendering.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for (i, v) in self.vertices.iter().enumerate() {
            s += &format!("  {i} [label=\"v{} {}\"];\n", v.orbit, v.iso_type);
        }
        for e in &self.edges {
            let orbits: Vec<String> = e.orbits.iter().map(|o| format!("e{o}")).collect();
            s += &format!("  {} -- {} [label=\"{}\"];\n", e.ends[0], e.ends[1], orbits.join(" "));
        }
        s += "}\n";
        s
    }
}

/// Whether ℓ-primary homology of a stabiliser type agrees with that of ℤ/ℓ in
/// degrees 1 to 12 (past two periods of every type).
fn homology_like_cyclic(t: IsoType, l: u64) -> bool {
    static TABLE: OnceLock<BTreeMap<(IsoType, u64), bool>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut out = BTreeMap::new();
        for l in [2u64, 3] {
            let cyc = if l == 2 { IsoType::C2 } else { IsoType::C3 };
            let base = Resolution::for_type(cyc, 14);
            for t in IsoType::ALL {
                let r = Resolution::for_type(t, 14);
                let same = (1..=12).all(|q| r.homology(q).primary_part(l) == base.homology(q).primary_part(l));
                out.insert((t, l), same);
            }
        }
        out
    });
    table.get(&(t, l)).copied().unwrap_or(false)
}

/// Vertex types across which two ℓ-edges may be joined.
pub fn admits_merging(t: IsoType, l: u64) -> bool {
    expected_count(t, l) == 2 && homology_like_cyclic(t, l)
}

/// Merge at admissible degree-two vertices, lowest orbit first, until none remain.
pub fn reduce(g: &TorsionGraph) -> TorsionGraph {
    let mut g = g.clone();
    loop {
        let candidate = (0..g.vertices.len()).find(|&v| {
            let inc = g.incident(v);
            g.degree(v) == 2
                && inc.len() == 2
                && admits_merging(g.vertices[v].iso_type, g.l)
                && inc.iter().all(|&e| g.edges[e].iso_type.order() as u64 == g.l)
        });
        match candidate {
            Some(v) => g.merge_at(v),
            None => break,
        }
    }
    g.unmerged = (0..g.vertices.len()).filter(|&v| g.degree(v) == 2 && g.incident(v).len() == 2).map(|v| g.vertices[v].orbit).collect();
    g
}

/// Topological type of a graph: counts of circles, intervals and isolated
/// points, and a certificate for every other component.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HomeoType {
    pub circles: usize,
    pub intervals: usize,
    pub points: usize,
    /// Sorted certificates of the remaining components.
    pub other_components: Vec<String>,
}

impl HomeoType {
    pub fn is_empty(&self) -> bool {
        self.circles + self.intervals + self.points == 0 && self.other_components.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.circles + self.intervals + self.points + self.other_components.len()
    }
}

impl fmt::Display for HomeoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |n: usize, one: &str, many: &str| match n {
            0 => {}
            1 => parts.push(format!("1 {one}")),
            _ => parts.push(format!("{n} {many}")),
        };
        push(self.circles, "circle", "circles");
        push(self.intervals, "interval", "intervals");
        push(self.points, "point", "points");
        for c in &self.other_components {
            parts.push(format!("graph {c}"));
        }
        if parts.is_empty() {
            f.write_str("empty")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Multigraph with vertices 0..n, used for topological normal forms.
#[derive(Clone, Debug)]
struct Shape {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Shape {
    fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    /// Smooth away degree-two vertices that do not carry a single loop.
    fn smooth(mut self) -> Shape {
        loop {
            let v = (0..self.n).find(|&v| self.degree(v) == 2 && !self.edges.contains(&(v, v)));
            let Some(v) = v else { return self };
            let inc: Vec<usize> = (0..self.edges.len()).filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v).collect();
            let other = |e: (usize, usize)| if e.0 == v { e.1 } else { e.0 };
            let (a, b) = (other(self.edges[inc[0]]), other(self.edges[inc[1]]));
            self.edges.remove(inc[1]);
            self.edges.remove(inc[0]);
            self.edges.push((a.min(b), a.max(b)));
            self.edges = self
                .edges
                .iter()
                .map(|&(x, y)| {
                    let f = |z: usize| if z > v { z - 1 } else { z };
                    (f(x), f(y))
                })
                .collect();
            self.n -= 1;
        }
    }

    /// Lexicographically least edge list over relabellings that sort
    /// vertices by degree.
    fn certificate(&self) -> String {
        let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            by_degree.entry(self.degree(v)).or_default().push(v);
        }
        let blocks: Vec<Vec<usize>> = by_degree.into_values().collect();
        let mut best: Option<Vec<(usize, usize)>> = None;
        let mut label = vec![0usize; self.n];
        permute_blocks(&blocks, 0, 0, &mut label, &mut |lab| {
            let mut es: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (lab[a].min(lab[b]), lab[a].max(lab[b]))).collect();
            es.sort();
            if best.as_ref().is_none_or(|b| es < *b) {
                best = Some(es);
            }
        });
        let degrees: Vec<String> = {
            let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
            d.sort();
            d.iter().map(|x| x.to_string()).collect()
        };
        let es: Vec<String> = best.unwrap_or_default().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        format!("[{}|{}]", degrees.join(","), es.join(","))
    }
}

fn permute_blocks(blocks: &[Vec<usize>], bi: usize, next: usize, label: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if bi == blocks.len() {
        f(label);
        return;
    }
    let block = &blocks[bi];
    let mut used = vec![false; block.len()];
    fn rec(block: &[usize], used: &mut [bool], k: usize, start: usize, label: &mut Vec<usize>, blocks: &[Vec<usize>], bi: usize, f: &mut dyn FnMut(&[usize])) {
        if k == block.len() {
            permute_blocks(blocks, bi + 1, start + block.len(), label, f);
            return;
        }
        for i in 0..block.len() {
            if !used[i] {
                used[i] = true;
                label[block[i]] = start + k;
                rec(block, used, k + 1, start, label, blocks, bi, f);
                used[i] = false;
            }
        }
    }
    rec(block, &mut used, 0, next, label, blocks, bi, f);
}

pub fn classify_type(g: &TorsionGraph) -> HomeoType {
    let mut out = HomeoType::default();
    for (vs, es) in g.components() {
        let pos: BTreeMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let shape = Shape {
            n: vs.len(),
            edges: es
                .iter()
                .map(|&e| {
                    let [a, b] = g.edges[e].ends;
                    (pos[&a].min(pos[&b]), pos[&a].max(pos[&b]))
                })
                .collect(),
        }
        .smooth();
        match (shape.n, shape.edges.as_slice()) {
            (1, []) => out.points += 1,
            (1, [(0, 0)]) => out.circles += 1,
            (2, [(0, 1)]) => out.intervals += 1,
            _ => out.other_components.push(shape.certificate()),
        }
    }
    out.other_components.sort();
    out
}

/// Stabiliser types present among the vertices, for reports.
pub fn vertex_types(g: &TorsionGraph) -> BTreeSet<IsoType> {
    g.vertices.iter().map(|v| v.iso_type).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(l: u64, types: &[IsoType], edges: &[(usize, usize)]) -> TorsionGraph {
        let cyc = if l == 2 { IsoType::C2 } else { IsoType::C3 };
        TorsionGraph {
            l,
            vertices: types.iter().enumerate().map(|(i, &t)| TorsionVertex { orbit: i, iso_type: t }).collect(),
            edges: edges.iter().enumerate().map(|(i, &(a, b))| TorsionEdge { ends: [a, b], iso_type: cyc, orbits: vec![i] }).collect(),
            unmerged: vec![],
        }
    }

    #[test]
    fn path_through_reducible_vertices_becomes_one_edge() {
        use IsoType::*;
        let g = graph(3, &[S3, C3, A4, S3], &[(0, 1), (1, 2), (2, 3)]);
        let r = reduce(&g);
        assert_eq!(r.vertices.len(), 2);
        assert_eq!(r.edges.len(), 1);
        assert_eq!(r.edges[0].orbits, vec![0, 1, 2]);
        assert_eq!(classify_type(&r), HomeoType { intervals: 1, ..Default::default() });
        assert!(r.unmerged.is_empty());
    }

    #[test]
    fn cycles_stay_cycles() {
        use IsoType::*;
        let g = graph(3, &[C3, A4, C3], &[(0, 1), (1, 2), (2, 0)]);
        let r = reduce(&g);
        assert_eq!(r.vertices.len(), 1);
        assert_eq!(r.edges[0].ends, [0, 0]);
        assert_eq!(classify_type(&r), HomeoType { circles: 1, ..Default::default() });
        assert_eq!(classify_type(&g), classify_type(&r));
    }

    #[test]
    fn branch_vertices_are_untouched() {
        use IsoType::*;
        let g = graph(2, &[D2, A4, A4, A4], &[(0, 1), (0, 2), (0, 3)]);
        let r = reduce(&g);
        assert_eq!(r, g);
        let t = classify_type(&r);
        assert_eq!(t.other_components, vec!["[1,1,1,3|0-3,1-3,2-3]".to_string()]);
    }

    #[test]
    fn two_primary_homology_decides_merging() {
        use IsoType::*;
        assert!(admits_merging(C2, 2) && admits_merging(S3, 2));
        assert!(admits_merging(C3, 3) && admits_merging(A4, 3));
        assert!(!admits_merging(D2, 2) && !admits_merging(A4, 2) && !admits_merging(S3, 3));
        // a D2 vertex of degree two is flagged, not merged
        let g = graph(2, &[A4, D2, A4], &[(0, 1), (1, 2)]);
        let r = reduce(&g);
        assert_eq!(r.unmerged, vec![1]);
        assert_eq!(classify_type(&r).intervals, 1);
    }

    #[test]
    fn empty_graph_has_empty_type() {
        let g = graph(3, &[], &[]);
        assert!(classify_type(&g).is_empty());
        assert_eq!(classify_type(&g).to_string(), "empty");
    }

    #[test]
    fn certificates_ignore_labelling() {
        let a = Shape { n: 4, edges: vec![(0, 1), (0, 1), (1, 2), (2, 3), (2, 3)] };
        let b = Shape { n: 4, edges: vec![(2, 3), (3, 0), (0, 1), (3, 2), (0, 1)] };
        assert_eq!(a.certificate(), b.certificate());
        let c = Shape { n: 4, edges: vec![(0, 1), (0, 1), (1, 2), (2, 3), (3, 0)] };
        assert_ne!(a.certificate(), c.certificate());
    }
}
