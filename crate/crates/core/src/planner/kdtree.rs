//! Minimal 3-d tree over node positions.
//!
//! Co-located points share one tree node (common when several parents reach
//! the same feasible state), and all queries tie-break on the lowest node id
//! so results do not depend on traversal order.

pub struct KdTree {
    nodes: Vec<KdNode>,
    root: Option<u32>,
}

struct KdNode {
    point: [f64; 3],
    ids: Vec<usize>,
    left: Option<u32>,
    right: Option<u32>,
}

fn dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

impl KdTree {
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            root: None,
        }
    }

    pub fn insert(&mut self, point: [f64; 3], id: usize) {
        let Some(mut cur) = self.root else {
            self.nodes.push(KdNode {
                point,
                ids: vec![id],
                left: None,
                right: None,
            });
            self.root = Some(0);
            return;
        };
        let mut axis = 0usize;
        loop {
            let node = &self.nodes[cur as usize];
            if node.point == point {
                self.nodes[cur as usize].ids.push(id);
                return;
            }
            let go_left = point[axis] < node.point[axis];
            let next = if go_left { node.left } else { node.right };
            match next {
                Some(n) => cur = n,
                None => {
                    let new = self.nodes.len() as u32;
                    self.nodes.push(KdNode {
                        point,
                        ids: vec![id],
                        left: None,
                        right: None,
                    });
                    let node = &mut self.nodes[cur as usize];
                    if go_left {
                        node.left = Some(new);
                    } else {
                        node.right = Some(new);
                    }
                    return;
                }
            }
            axis = (axis + 1) % 3;
        }
    }

    /// Closest accepted id to `q`; equidistant candidates resolve to the
    /// lowest id.
    pub fn nearest(&self, q: [f64; 3], accept: &dyn Fn(usize) -> bool) -> Option<usize> {
        let root = self.root?;
        let mut best: Option<(f64, usize)> = None;
        self.nearest_rec(root, 0, q, accept, &mut best);
        best.map(|(_, id)| id)
    }

    fn nearest_rec(
        &self,
        cur: u32,
        axis: usize,
        q: [f64; 3],
        accept: &dyn Fn(usize) -> bool,
        best: &mut Option<(f64, usize)>,
    ) {
        let node = &self.nodes[cur as usize];
        if let Some(id) = node.ids.iter().copied().filter(|&id| accept(id)).min() {
            let d2 = dist2(node.point, q);
            let replace = match best {
                None => true,
                Some((bd, bid)) => d2 < *bd || (d2 == *bd && id < *bid),
            };
            if replace {
                *best = Some((d2, id));
            }
        }
        let diff = q[axis] - node.point[axis];
        let (first, second) = if diff < 0.0 {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        if let Some(n) = first {
            self.nearest_rec(n, (axis + 1) % 3, q, accept, best);
        }
        if let Some(n) = second {
            let crossing = diff * diff;
            if best.map_or(true, |(bd, _)| crossing <= bd) {
                self.nearest_rec(n, (axis + 1) % 3, q, accept, best);
            }
        }
    }

    /// All accepted ids within `radius` of `q`, in ascending id order.
    pub fn within_radius(
        &self,
        q: [f64; 3],
        radius: f64,
        accept: &dyn Fn(usize) -> bool,
    ) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(root) = self.root {
            self.radius_rec(root, 0, q, radius * radius, accept, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn radius_rec(
        &self,
        cur: u32,
        axis: usize,
        q: [f64; 3],
        r2: f64,
        accept: &dyn Fn(usize) -> bool,
        out: &mut Vec<usize>,
    ) {
        let node = &self.nodes[cur as usize];
        if dist2(node.point, q) <= r2 {
            out.extend(node.ids.iter().copied().filter(|&id| accept(id)));
        }
        let diff = q[axis] - node.point[axis];
        if let Some(n) = if diff < 0.0 { node.left } else { node.right } {
            self.radius_rec(n, (axis + 1) % 3, q, r2, accept, out);
        }
        if diff * diff <= r2 {
            if let Some(n) = if diff < 0.0 { node.right } else { node.left } {
                self.radius_rec(n, (axis + 1) % 3, q, r2, accept, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn matches_linear_scan() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let points: Vec<[f64; 3]> = (0..500)
            .map(|_| {
                [
                    rng.random_range(-100.0..100.0),
                    rng.random_range(-100.0..100.0),
                    rng.random_range(-10.0..10.0),
                ]
            })
            .collect();
        let mut tree = KdTree::new();
        for (i, &p) in points.iter().enumerate() {
            tree.insert(p, i);
        }
        let all = |_: usize| true;
        let odd = |id: usize| id % 2 == 1;
        for _ in 0..200 {
            let q = [
                rng.random_range(-120.0..120.0),
                rng.random_range(-120.0..120.0),
                rng.random_range(-12.0..12.0),
            ];
            let want = points
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| dist2(**a, q).partial_cmp(&dist2(**b, q)).unwrap())
                .map(|(i, _)| i);
            assert_eq!(tree.nearest(q, &all), want);

            let want_odd = points
                .iter()
                .enumerate()
                .filter(|(i, _)| i % 2 == 1)
                .min_by(|(_, a), (_, b)| dist2(**a, q).partial_cmp(&dist2(**b, q)).unwrap())
                .map(|(i, _)| i);
            assert_eq!(tree.nearest(q, &odd), want_odd);

            let r = rng.random_range(5.0..80.0);
            let mut want_in: Vec<usize> = points
                .iter()
                .enumerate()
                .filter(|(_, p)| dist2(**p, q) <= r * r)
                .map(|(i, _)| i)
                .collect();
            want_in.sort_unstable();
            assert_eq!(tree.within_radius(q, r, &all), want_in);
        }
    }

    #[test]
    fn duplicate_points_prefer_lowest_id() {
        let mut tree = KdTree::new();
        tree.insert([1.0, 2.0, 3.0], 5);
        tree.insert([1.0, 2.0, 3.0], 9);
        tree.insert([1.0, 2.0, 3.0], 2);
        assert_eq!(tree.nearest([1.0, 2.0, 3.0], &|_| true), Some(2));
        assert_eq!(tree.nearest([1.0, 2.0, 3.0], &|id| id != 2), Some(5));
        assert_eq!(
            tree.within_radius([0.0, 0.0, 0.0], 10.0, &|_| true),
            vec![2, 5, 9]
        );
    }
}
