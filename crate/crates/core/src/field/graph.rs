use crate::error::{Error, Result};
use crate::field::bitmap::Bitmap;
use crate::field::set::FpSet;

/// A bipartite graph `G ⊆ A × B`. Row `i` holds the neighbours of the
/// `i`-th smallest element of `A`, indexed by position in `B`.
#[derive(Clone, PartialEq, Eq)]
pub struct PairGraph {
    left: FpSet,
    right: FpSet,
    left_elems: Vec<u64>,
    right_elems: Vec<u64>,
    rows: Vec<Bitmap>,
    edge_count: usize,
}

impl PairGraph {
    pub fn empty(left: &FpSet, right: &FpSet) -> Result<Self> {
        left.ensure_same(right)?;
        let left_elems = left.to_vec();
        let right_elems = right.to_vec();
        let rows = vec![Bitmap::new(right_elems.len()); left_elems.len()];
        Ok(PairGraph {
            left: left.clone(),
            right: right.clone(),
            left_elems,
            right_elems,
            rows,
            edge_count: 0,
        })
    }

    /// The complete graph `A × B`.
    pub fn full(left: &FpSet, right: &FpSet) -> Result<Self> {
        let mut g = Self::empty(left, right)?;
        let width = g.right_elems.len();
        for row in &mut g.rows {
            *row = Bitmap::full(width);
        }
        g.edge_count = g.left_elems.len() * width;
        Ok(g)
    }

    pub fn from_edges<I: IntoIterator<Item = (u64, u64)>>(
        left: &FpSet,
        right: &FpSet,
        edges: I,
    ) -> Result<Self> {
        let mut g = Self::empty(left, right)?;
        for (a, b) in edges {
            g.insert(a, b)?;
        }
        Ok(g)
    }

    fn locate(&self, a: u64, b: u64) -> Result<(usize, usize)> {
        let i = self
            .left_elems
            .binary_search(&a)
            .map_err(|_| Error::Precondition(format!("edge endpoint {a} is not in the left ground set")))?;
        let j = self
            .right_elems
            .binary_search(&b)
            .map_err(|_| Error::Precondition(format!("edge endpoint {b} is not in the right ground set")))?;
        Ok((i, j))
    }

    pub fn insert(&mut self, a: u64, b: u64) -> Result<()> {
        let (i, j) = self.locate(a, b)?;
        if !self.rows[i].get(j) {
            self.rows[i].set(j);
            self.edge_count += 1;
        }
        Ok(())
    }

    pub fn contains(&self, a: u64, b: u64) -> bool {
        self.locate(a, b)
            .map(|(i, j)| self.rows[i].get(j))
            .unwrap_or(false)
    }

    pub fn left(&self) -> &FpSet {
        &self.left
    }

    pub fn right(&self) -> &FpSet {
        &self.right
    }

    /// `|G|`.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count == 0
    }

    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.rows
            .iter()
            .zip(&self.left_elems)
            .flat_map(move |(row, &a)| row.iter_ones().map(move |j| (a, self.right_elems[j])))
    }
}

impl std::fmt::Debug for PairGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PairGraph")
            .field("p", &self.left.p())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// The partial sumset `A +_G B = {a + b : (a, b) ∈ G}`. Empty for an empty graph.
pub fn partial_sumset(g: &PairGraph) -> FpSet {
    let p = g.left.modulus();
    let mut out = Bitmap::new(p.size());
    for (a, b) in g.edges() {
        out.set(p.add(a, b) as usize);
    }
    FpSet::from_bitmap(p, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ops::sumset;
    use crate::field::prime::Prime;
    use proptest::prelude::*;

    fn set(p: &Prime, xs: &[u64]) -> FpSet {
        FpSet::from_elements(p, xs.iter().copied()).unwrap()
    }

    #[test]
    fn examples() {
        let p = Prime::new(11).unwrap();
        let (a, b) = (set(&p, &[1, 2]), set(&p, &[3, 4]));
        let g = PairGraph::from_edges(&a, &b, [(1, 3), (2, 4)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(partial_sumset(&g).to_vec(), vec![4, 6]);

        let full = PairGraph::full(&a, &b).unwrap();
        assert_eq!(full.edge_count(), 4);
        assert_eq!(partial_sumset(&full), sumset(&a, &b).unwrap());

        let empty = PairGraph::empty(&a, &b).unwrap();
        assert!(partial_sumset(&empty).is_empty());
    }

    #[test]
    fn rejects_foreign_endpoints() {
        let p = Prime::new(11).unwrap();
        let (a, b) = (set(&p, &[1, 2]), set(&p, &[3, 4]));
        assert!(PairGraph::from_edges(&a, &b, [(3, 3)]).is_err());
        assert!(PairGraph::from_edges(&a, &b, [(1, 1)]).is_err());
    }

    proptest! {
        #[test]
        fn partial_sumset_inside_sumset(
            xs in prop::collection::vec(0u64..31, 1..8),
            ys in prop::collection::vec(0u64..31, 1..8),
            mask in any::<u64>(),
        ) {
            let p = Prime::new(31).unwrap();
            let (a, b) = (set(&p, &xs), set(&p, &ys));
            let pairs: Vec<(u64, u64)> = a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).collect();
            let chosen = pairs.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, e)| *e);
            let g = PairGraph::from_edges(&a, &b, chosen).unwrap();
            prop_assert_eq!(g.edges().count(), g.edge_count());
            prop_assert!(partial_sumset(&g).is_subset(&sumset(&a, &b).unwrap()));
        }
    }
}
