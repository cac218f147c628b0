/// Complete binary tree of partial sums over nonnegative leaf weights.
///
/// Internal nodes are always recomputed from their two children, never
/// adjusted by differences, so the root equals the sum of the current leaves
/// up to the rounding of a single pairwise summation.
#[derive(Clone, Debug)]
pub struct SumTree {
    leaves: usize,
    nodes: Vec<f64>,
}

impl SumTree {
    pub fn new(weights: &[f64]) -> Self {
        let leaves = weights.len().max(1).next_power_of_two();
        let mut tree = SumTree { leaves, nodes: vec![0.0; 2 * leaves] };
        tree.rebuild(weights);
        tree
    }

    /// Replaces all leaves, growing the tree if needed.
    pub fn rebuild(&mut self, weights: &[f64]) {
        if weights.len() > self.leaves {
            self.leaves = weights.len().next_power_of_two();
            self.nodes = vec![0.0; 2 * self.leaves];
        }
        self.nodes[self.leaves..self.leaves + weights.len()].copy_from_slice(weights);
        self.nodes[self.leaves + weights.len()..].fill(0.0);
        for i in (1..self.leaves).rev() {
            self.nodes[i] = self.nodes[2 * i] + self.nodes[2 * i + 1];
        }
    }

    pub fn total(&self) -> f64 {
        self.nodes[1]
    }

    pub fn get(&self, i: usize) -> f64 {
        self.nodes[self.leaves + i]
    }

    pub fn set(&mut self, i: usize, w: f64) {
        let mut node = self.leaves + i;
        self.nodes[node] = w;
        while node > 1 {
            node /= 2;
            self.nodes[node] = self.nodes[2 * node] + self.nodes[2 * node + 1];
        }
    }

    /// Leaf `i` with `prefix(i) <= x < prefix(i) + w_i`; positive-weight
    /// leaves only.
    pub fn find(&self, mut x: f64) -> usize {
        let mut node = 1;
        while node < self.leaves {
            let left = self.nodes[2 * node];
            // the right branch is taken only if it carries weight, which keeps
            // rounding at the boundary from selecting an empty leaf
            if x < left || self.nodes[2 * node + 1] <= 0.0 {
                node *= 2;
            } else {
                x -= left;
                node = 2 * node + 1;
            }
        }
        node - self.leaves
    }
}
