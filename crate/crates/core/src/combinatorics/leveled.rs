//! Leveled graphs: directed simple graphs with vertices placed on levels and
//! every edge going strictly down.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::graph::{canonical_labelling, DiGraph};

/// What to enumerate. Levels are numbered from the bottom: 1 holds the
/// `bottom` vertices, the top level holds the `top` vertices and, with
/// `middle`, a single vertex sits on level 2 of three.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LeveledShape {
    pub bottom: usize,
    pub top: usize,
    pub middle: bool,
    /// Mark one bottom vertex as distinguished.
    pub marked_bottom: bool,
}

impl LeveledShape {
    pub fn two(bottom: usize, top: usize) -> Self {
        LeveledShape {
            bottom,
            top,
            middle: false,
            marked_bottom: false,
        }
    }

    pub fn three(bottom: usize, top: usize) -> Self {
        LeveledShape {
            bottom,
            top,
            middle: true,
            marked_bottom: false,
        }
    }

    pub fn marked(bottom: usize, top: usize) -> Self {
        LeveledShape {
            bottom,
            top,
            middle: false,
            marked_bottom: true,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.bottom + self.top + self.middle as usize
    }

    /// Level of each vertex in the standard labelling: bottoms first, then
    /// the middle vertex, then tops.
    pub fn levels(&self) -> Vec<u8> {
        let top_level = if self.middle { 3 } else { 2 };
        let mut v = vec![1; self.bottom];
        if self.middle {
            v.push(2);
        }
        v.extend(std::iter::repeat(top_level).take(self.top));
        v
    }

    /// Colour of each vertex: (level, marked).
    pub fn colors(&self) -> Vec<(u8, bool)> {
        self.levels()
            .into_iter()
            .enumerate()
            .map(|(i, l)| (l, self.marked_bottom && i == 0))
            .collect()
    }

    fn check(&self) -> Result<()> {
        if self.vertex_count() == 0 {
            return Err(Error::Constraint("leveled graph needs a vertex".into()));
        }
        if self.marked_bottom && self.bottom == 0 {
            return Err(Error::Constraint("marked bottom vertex needs a bottom level".into()));
        }
        if self.marked_bottom && self.middle {
            return Err(Error::Constraint("only one distinguished vertex is allowed".into()));
        }
        Ok(())
    }

    /// Every pair (upper, lower) of vertices on distinct levels.
    pub fn allowed_edges(&self) -> Vec<(usize, usize)> {
        let lv = self.levels();
        let n = lv.len();
        let mut out = vec![];
        for a in 0..n {
            for b in 0..n {
                if lv[a] > lv[b] {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LeveledGraph {
    /// Canonically labelled graph.
    pub graph: DiGraph,
    /// Level of each vertex, 1 = bottom.
    pub levels: Vec<u8>,
    pub marked: Option<usize>,
    /// Order of the level- and marker-preserving automorphism group.
    pub automorphisms: usize,
}

impl LeveledGraph {
    pub fn encode(&self) -> String {
        let lv: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        let mut s = format!("{}; levels {}", self.graph.encode(), lv.join(","));
        if let Some(m) = self.marked {
            s.push_str(&format!("; marked {}", m + 1));
        }
        s
    }
}

/// All connected labelled graphs of the given shape in its standard
/// labelling (one per edge subset).
pub fn labelled_leveled(shape: LeveledShape) -> Result<Vec<DiGraph>> {
    shape.check()?;
    let n = shape.vertex_count();
    let allowed = shape.allowed_edges();
    if allowed.len() > 20 {
        return Err(Error::BoundExceeded {
            what: "candidate edge count".into(),
            value: allowed.len(),
            bound: 20,
        });
    }
    let mut out = vec![];
    for mask in 0u32..(1 << allowed.len()) {
        let g = DiGraph::new(
            n,
            allowed
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &e)| e),
        );
        if g.is_connected() {
            out.push(g);
        }
    }
    Ok(out)
}

/// Level-preserving isomorphism classes of connected leveled graphs of the
/// given shape, with their automorphism orders, in canonical order.
pub fn enumerate_leveled(shape: LeveledShape) -> Result<Vec<LeveledGraph>> {
    let colors = shape.colors();
    let mut classes: BTreeMap<(DiGraph, Vec<(u8, bool)>), usize> = BTreeMap::new();
    for g in labelled_leveled(shape)? {
        let c = canonical_labelling(&g, &colors, None);
        classes.insert((c.graph, c.colors), c.automorphisms);
    }
    Ok(classes
        .into_iter()
        .map(|((graph, colors), automorphisms)| LeveledGraph {
            graph,
            levels: colors.iter().map(|c| c.0).collect(),
            marked: colors.iter().position(|c| c.1),
            automorphisms,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn lone_vertices() {
        let v = enumerate_leveled(LeveledShape::two(1, 0)).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].graph, DiGraph::single());
        let v = enumerate_leveled(LeveledShape::three(0, 0)).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].levels, vec![2]);
        // two lone bottoms cannot be connected
        assert!(enumerate_leveled(LeveledShape::two(2, 0)).unwrap().is_empty());
    }

    #[test]
    fn complete_bipartite_has_four_automorphisms() {
        let v = enumerate_leveled(LeveledShape::two(2, 2)).unwrap();
        let k22 = v.iter().find(|g| g.graph.edges.len() == 4).unwrap();
        assert_eq!(k22.automorphisms, 4);
        let v = enumerate_leveled(LeveledShape::two(2, 1)).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].automorphisms, 2);
    }

    #[test]
    fn orbit_stabiliser_against_labelled_count() {
        let shapes = [
            LeveledShape::two(2, 2),
            LeveledShape::two(3, 1),
            LeveledShape::three(1, 2),
            LeveledShape::three(2, 2),
            LeveledShape::marked(3, 1),
            LeveledShape::marked(2, 2),
        ];
        for s in shapes {
            let sym = if s.marked_bottom {
                fact(s.bottom - 1) * fact(s.top)
            } else {
                fact(s.bottom) * fact(s.top)
            };
            let total: usize = enumerate_leveled(s)
                .unwrap()
                .iter()
                .map(|g| sym / g.automorphisms)
                .sum();
            assert_eq!(total, labelled_leveled(s).unwrap().len(), "{s:?}");
        }
    }

    #[test]
    fn constraint_violations() {
        assert!(enumerate_leveled(LeveledShape::two(0, 0)).is_err());
        assert!(enumerate_leveled(LeveledShape::marked(0, 1)).is_err());
    }
}
