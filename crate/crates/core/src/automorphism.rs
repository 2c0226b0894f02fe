//! Automorphisms of a finite-rank free group, on words written in a local
//! alphabet: letter `±(idx + 1)` is the idx-th basis element or its inverse.

pub(crate) type LocalWord = Vec<i32>;

pub(crate) fn push_local(stack: &mut LocalWord, x: i32) {
    if stack.last() == Some(&-x) {
        stack.pop();
    } else {
        stack.push(x);
    }
}

pub(crate) fn reduce_local(w: impl IntoIterator<Item = i32>) -> LocalWord {
    let mut out = Vec::new();
    for x in w {
        push_local(&mut out, x);
    }
    out
}

pub(crate) fn invert_local(w: &[i32]) -> LocalWord {
    w.iter().rev().map(|x| -x).collect()
}

/// Images of the basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FreeAutomorphism {
    pub images: Vec<LocalWord>,
}

impl FreeAutomorphism {
    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, w)| w.len() == 1 && w[0] == k as i32 + 1)
    }

    /// Appends the image of `w` to `out`, reducing as it goes.
    pub fn apply_into(&self, w: &[i32], out: &mut LocalWord) {
        for &x in w {
            let img = &self.images[x.unsigned_abs() as usize - 1];
            if x > 0 {
                for &y in img {
                    push_local(out, y);
                }
            } else {
                for &y in img.iter().rev() {
                    push_local(out, -y);
                }
            }
        }
    }

    pub fn apply(&self, w: &[i32]) -> LocalWord {
        let mut out = Vec::with_capacity(w.len());
        self.apply_into(w, &mut out);
        out
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &FreeAutomorphism) -> FreeAutomorphism {
        FreeAutomorphism { images: inner.images.iter().map(|w| self.apply(w)).collect() }
    }

    /// Inverse automorphism, or `None` when the images are not a free basis.
    ///
    /// Folds the bouquet of image loops into the rose. Every edge carries an
    /// annotation: a word in the image basis whose product along any closed
    /// path at the base vertex spells that path in terms of the images.
    pub fn invert(&self) -> Option<FreeAutomorphism> {
        let rank = self.rank();
        let mut g = FoldGraph { vertices: 1, ..FoldGraph::default() };
        for (t, img) in self.images.iter().enumerate() {
            if img.is_empty() {
                return None;
            }
            let mut at = 0usize;
            for (pos, &x) in img.iter().enumerate() {
                let next = if pos + 1 == img.len() { 0 } else { g.new_vertex() };
                let ann = if pos == 0 { vec![t as i32 + 1] } else { Vec::new() };
                g.add_traversal(at, next, x, ann);
                at = next;
            }
        }
        g.fold()?;

        let mut inverse = vec![None; rank];
        for e in g.edges.iter().filter(|e| e.alive) {
            if e.src != 0 || e.dst != 0 || inverse[e.label].is_some() {
                return None;
            }
            inverse[e.label] = Some(e.ann.clone());
        }
        let images: Option<Vec<LocalWord>> = inverse.into_iter().collect();
        let inv = FreeAutomorphism { images: images? };
        self.compose(&inv).is_identity().then_some(inv)
    }
}

#[derive(Clone, Debug)]
struct Edge {
    src: usize,
    dst: usize,
    label: usize,
    ann: LocalWord,
    alive: bool,
}

#[derive(Default)]
struct FoldGraph {
    vertices: usize,
    edges: Vec<Edge>,
}

impl FoldGraph {
    fn new_vertex(&mut self) -> usize {
        self.vertices += 1;
        self.vertices - 1
    }

    /// Adds an edge traversed from `from` to `to` reading letter `x`.
    fn add_traversal(&mut self, from: usize, to: usize, x: i32, ann: LocalWord) {
        let label = x.unsigned_abs() as usize - 1;
        let edge = if x > 0 {
            Edge { src: from, dst: to, label, ann, alive: true }
        } else {
            Edge { src: to, dst: from, label, ann: invert_local(&ann), alive: true }
        };
        self.edges.push(edge);
    }

    /// (far end, annotation read when leaving `v` along edge `e`).
    fn leave(&self, v: usize, e: usize, outgoing: bool) -> (usize, LocalWord) {
        let edge = &self.edges[e];
        if outgoing {
            debug_assert_eq!(edge.src, v);
            (edge.dst, edge.ann.clone())
        } else {
            debug_assert_eq!(edge.dst, v);
            (edge.src, invert_local(&edge.ann))
        }
    }

    /// Inserts `g g⁻¹` at vertex `w` on every path through it.
    fn gauge(&mut self, w: usize, g: &[i32]) {
        let g_inv = invert_local(g);
        for e in self.edges.iter_mut().filter(|e| e.alive) {
            if e.dst == w {
                e.ann = reduce_local(e.ann.iter().copied().chain(g.iter().copied()));
            }
            if e.src == w {
                e.ann = reduce_local(g_inv.iter().copied().chain(e.ann.iter().copied()));
            }
        }
    }

    fn merge(&mut self, from: usize, into: usize) {
        for e in self.edges.iter_mut().filter(|e| e.alive) {
            if e.src == from {
                e.src = into;
            }
            if e.dst == from {
                e.dst = into;
            }
        }
    }

    fn find_fold(&self) -> Option<(usize, usize, usize, bool)> {
        use std::collections::HashMap;
        let mut seen: HashMap<(usize, usize, bool), usize> = HashMap::new();
        for (idx, e) in self.edges.iter().enumerate().filter(|(_, e)| e.alive) {
            for (v, outgoing) in [(e.src, true), (e.dst, false)] {
                if let Some(&other) = seen.get(&(v, e.label, outgoing)) {
                    if other != idx {
                        return Some((v, other, idx, outgoing));
                    }
                } else {
                    seen.insert((v, e.label, outgoing), idx);
                }
            }
        }
        None
    }

    fn fold(&mut self) -> Option<()> {
        while let Some((v, e1, e2, outgoing)) = self.find_fold() {
            let (w1, a1) = self.leave(v, e1, outgoing);
            let (w2, a2) = self.leave(v, e2, outgoing);
            if w1 == w2 {
                if a1 != a2 {
                    return None;
                }
                self.edges[e2].alive = false;
                continue;
            }
            let (keep, drop, gauge_at, g) = if w2 != 0 && w2 != v {
                (e1, e2, w2, reduce_local(invert_local(&a2).into_iter().chain(a1.iter().copied())))
            } else if w1 != 0 && w1 != v {
                (e2, e1, w1, reduce_local(invert_local(&a1).into_iter().chain(a2.iter().copied())))
            } else {
                // one edge is a loop at v (v not the base), the other runs to the base
                let (loop_e, base_e, a_loop, a_base) = if w1 == v { (e1, e2, a1, a2) } else { (e2, e1, a2, a1) };
                let g = reduce_local(invert_local(&a_loop).into_iter().chain(a_base));
                self.gauge(v, &g);
                self.merge(v, 0);
                let (_, l) = self.leave(0, loop_e, outgoing);
                let (_, b) = self.leave(0, base_e, outgoing);
                if l != b {
                    return None;
                }
                self.edges[loop_e].alive = false;
                continue;
            };
            self.gauge(gauge_at, &g);
            let other_end = if gauge_at == w2 { w1 } else { w2 };
            self.merge(gauge_at, other_end);
            let (_, k) = self.leave(v, keep, outgoing);
            let (_, d) = self.leave(v, drop, outgoing);
            if k != d {
                return None;
            }
            self.edges[drop].alive = false;
        }
        Some(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aut(images: &[&[i32]]) -> FreeAutomorphism {
        FreeAutomorphism { images: images.iter().map(|w| w.to_vec()).collect() }
    }

    #[test]
    fn inverts_conjugation() {
        // x1 -> x2 x1 x2^-1, x2 -> x2
        let a = aut(&[&[2, 1, -2], &[2]]);
        let inv = a.invert().unwrap();
        assert_eq!(inv, aut(&[&[-2, 1, 2], &[2]]));
    }

    #[test]
    fn inverts_transvection_and_permutation() {
        let a = aut(&[&[1, 2], &[2]]);
        assert_eq!(a.invert().unwrap(), aut(&[&[1, -2], &[2]]));
        let p = aut(&[&[-3], &[1], &[2]]);
        let inv = p.invert().unwrap();
        assert!(p.compose(&inv).is_identity());
        assert!(inv.compose(&p).is_identity());
    }

    #[test]
    fn inverts_composites() {
        let a = aut(&[&[2, 1, -2], &[2], &[3]]);
        let b = aut(&[&[1], &[3, 2], &[3]]);
        let c = aut(&[&[3, 1, -3], &[2], &[3, 1]]);
        let m = a.compose(&b).compose(&c).compose(&a).compose(&b);
        let inv = m.invert().unwrap();
        assert!(m.compose(&inv).is_identity());
        assert!(inv.compose(&m).is_identity());
    }

    #[test]
    fn rejects_non_bases() {
        assert!(aut(&[&[1, 1], &[2]]).invert().is_none());
        assert!(aut(&[&[1], &[1]]).invert().is_none());
        assert!(aut(&[&[1, 2, -1, -2], &[2]]).invert().is_none());
    }
}
