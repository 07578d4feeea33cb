use std::collections::VecDeque;

use crate::error::{invalid_input, Result};
use crate::formation::{Assignment, FollowerGraph, Formation, Reference};
use crate::scalar::Scalar;

/// Neighbours per slot in the leader-mode reference graph.
pub const DEFAULT_NEIGHBOURS: usize = 3;

/// Reference structure for a control mode.
///
/// Without a leader every robot references the formation center with offset
/// `f[d[i]]`. With a leader, slots are linked to their `k` nearest neighbours
/// (raised until the graph is connected), a breadth-first tree is grown from
/// the leader's slot, and each robot follows whoever holds its tree parent.
pub fn build_follower_graph<T: Scalar>(f: &Formation<T>, a: &Assignment) -> Result<FollowerGraph<T>> {
    let n = f.len();
    if a.len() != n {
        return Err(invalid_input(format!("arrangement of {} robots for {n} slots", a.len())));
    }
    let Some(leader) = a.leader() else {
        return Ok(FollowerGraph {
            follows: vec![Reference::Center; n],
            offsets: (0..n).map(|i| f.slot(a.slot_of(i))).collect(),
        });
    };

    let root = a.slot_of(leader);
    let parents = (DEFAULT_NEIGHBOURS.min(n.saturating_sub(1)).max(1)..n.max(2))
        .find_map(|k| bfs_parents(f, root, k))
        .expect("the complete graph is connected");

    let mut follows = vec![Reference::Leader; n];
    let mut offsets = vec![crate::geometry::Vec2::zero(); n];
    for robot in 0..n {
        if robot == leader {
            continue;
        }
        let slot = a.slot_of(robot);
        let parent_slot = parents[slot].expect("non-root slots have a parent");
        let parent_robot = a.robot_at(parent_slot);
        follows[robot] = Reference::Robot(parent_robot);
        offsets[robot] = f.slot(parent_slot) - f.slot(slot);
    }
    Ok(FollowerGraph { follows, offsets })
}

/// Breadth-first parents over the symmetric k-nearest-neighbour graph, or
/// `None` when it is disconnected.
fn bfs_parents<T: Scalar>(f: &Formation<T>, root: usize, k: usize) -> Option<Vec<Option<usize>>> {
    let n = f.len();
    let adjacency = knn_adjacency(f, k);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(s) = queue.pop_front() {
        for &t in &adjacency[s] {
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some(s);
                queue.push_back(t);
            }
        }
    }
    seen.iter().all(|&v| v).then_some(parent)
}

/// Symmetrised k-NN lists, each sorted by distance then index.
fn knn_adjacency<T: Scalar>(f: &Formation<T>, k: usize) -> Vec<Vec<usize>> {
    let n = f.len();
    let by_distance = |s: usize| {
        let mut others: Vec<usize> = (0..n).filter(|&t| t != s).collect();
        others.sort_by(|&a, &b| {
            let da = f.slot(s).distance_squared(f.slot(a));
            let db = f.slot(s).distance_squared(f.slot(b));
            da.partial_cmp(&db).expect("finite slots").then(a.cmp(&b))
        });
        others
    };
    let mut linked = vec![vec![false; n]; n];
    for s in 0..n {
        for &t in by_distance(s).iter().take(k) {
            linked[s][t] = true;
            linked[t][s] = true;
        }
    }
    (0..n).map(|s| by_distance(s).into_iter().filter(|&t| linked[s][t]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formations::{leading_slot, square_formation};
    use crate::geometry::Vec2;

    #[test]
    fn two_robots_follow_the_leader() {
        let f = Formation::centered(vec![Vec2::new(0.0, 1.0), Vec2::new(0.0, -1.0)]).unwrap();
        let a = Assignment::with_leader(vec![1, 0], 1).unwrap();
        let g = build_follower_graph(&f, &a).unwrap();
        assert_eq!(g.follows, vec![Reference::Robot(1), Reference::Leader]);
        // robot 0 holds slot 1, the leader holds slot 0
        assert_eq!(g.offsets[0], f.slot(0) - f.slot(1));
    }

    #[test]
    fn center_mode_references_center() {
        let f = square_formation(6, 9.0).unwrap();
        let a = Assignment::new(vec![3, 1, 0, 5, 4, 2]).unwrap();
        let g = build_follower_graph(&f, &a).unwrap();
        for i in 0..6 {
            assert_eq!(g.follows[i], Reference::Center);
            assert_eq!(g.offsets[i], f.slot(a.slot_of(i)));
        }
    }

    #[test]
    fn square_eight_bfs_by_hand() {
        // slots: 0 (0,1) 1 (1,1) 2 (1,0) 3 (1,-1) 4 (0,-1) 5 (-1,-1) 6 (-1,0) 7 (-1,1)
        // 3-NN by (distance, index): 0:{1,7,2} 1:{0,2,3} 2:{1,3,0} 3:{2,4,1}
        //                            4:{3,5,2} 5:{4,6,3} 6:{5,7,0} 7:{0,6,1}
        // BFS from the leading slot 7: 0,6,1 | 2 (via 0), 5 (via 6), 3 (via 1) | 4 (via 2)
        let f = square_formation(8, 4.0).unwrap();
        assert_eq!(leading_slot(&f), 7);
        let a = Assignment::with_leader((0..8).collect(), 7).unwrap();
        let g = build_follower_graph(&f, &a).unwrap();
        let want = [
            Reference::Robot(7),
            Reference::Robot(7),
            Reference::Robot(0),
            Reference::Robot(1),
            Reference::Robot(2),
            Reference::Robot(6),
            Reference::Robot(7),
            Reference::Leader,
        ];
        assert_eq!(g.follows, want);
        let depths: Vec<_> = (0..8).map(|r| g.depth(r).unwrap()).collect();
        assert_eq!(depths, vec![1, 1, 2, 2, 3, 2, 1, 0]);
        for r in 0..7 {
            if let Reference::Robot(p) = g.follows[r] {
                assert_eq!(g.offsets[r], f.slot(p) - f.slot(r));
            }
        }
    }

    #[test]
    fn chains_end_at_leader() {
        let f = square_formation(15, 28800.0).unwrap();
        let mapping = vec![4, 9, 0, 13, 2, 7, 11, 1, 14, 3, 6, 10, 5, 12, 8];
        let a = Assignment::with_leader(mapping, 6).unwrap();
        let g = build_follower_graph(&f, &a).unwrap();
        assert!(g.is_acyclic());
        assert_eq!(g.follows[6], Reference::Leader);
    }
}
