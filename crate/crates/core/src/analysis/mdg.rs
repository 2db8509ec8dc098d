//! Splitting a game into independent sub-games on disjoint resource sets.

use crate::game::{Demand, Game, Profile};

/// A connected component of the group-resource incidence graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub game: Game,
    /// Original indices, in the order used by `game`.
    pub groups: Vec<usize>,
    pub strategies: Vec<usize>,
    pub resources: Vec<usize>,
}

impl Component {
    /// Restricts a demand vector of the whole game to this component.
    pub fn demand(&self, demand: &Demand) -> Demand {
        Demand::new(self.groups.iter().map(|&k| demand[k]).collect()).expect("sub-vector of a valid demand")
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut x = x;
        while self.0[x] != root {
            let next = self.0[x];
            self.0[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Components ordered by their lowest group index. Resources used by no
/// strategy belong to no component.
pub fn mdg_decompose(game: &Game) -> Vec<Component> {
    let k = game.num_groups();
    // Nodes 0..k are groups, k.. are resources.
    let mut uf = UnionFind((0..k + game.num_resources()).collect());
    for st in game.strategies() {
        for u in &st.uses {
            if u.amount > 0.0 {
                uf.union(st.group, k + u.resource);
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for g in 0..k {
        let r = uf.find(g);
        match roots.iter().position(|&x| x == r) {
            Some(i) => members[i].push(g),
            None => {
                roots.push(r);
                members.push(vec![g]);
            }
        }
    }

    roots
        .iter()
        .zip(members)
        .map(|(&root, groups)| {
            let resources: Vec<usize> = (0..game.num_resources()).filter(|&a| uf.find(k + a) == root).collect();
            let mut b = Game::builder();
            let local: Vec<Option<usize>> = {
                let mut map = vec![None; game.num_resources()];
                for &a in &resources {
                    let r = &game.resources()[a];
                    map[a] = Some(b.resource(r.id.clone(), r.price.clone()));
                }
                map
            };
            let mut strategies = Vec::new();
            for &g in &groups {
                let group = &game.groups()[g];
                let gi = b.group(group.id.clone());
                for &s in &group.strategies {
                    let st = &game.strategies()[s];
                    let uses: Vec<(usize, f64)> = st
                        .uses
                        .iter()
                        .filter_map(|u| local[u.resource].map(|a| (a, u.amount)))
                        .collect();
                    b.strategy(gi, st.id.clone(), &uses);
                    strategies.push(s);
                }
            }
            Component {
                game: b.build(),
                groups,
                strategies,
                resources,
            }
        })
        .collect()
}

/// Concatenates per-component profiles into a profile of the whole game.
pub fn merge_profiles(game: &Game, components: &[Component], profiles: &[Profile]) -> Profile {
    let mut flows = vec![0.0; game.num_strategies()];
    for (c, p) in components.iter().zip(profiles) {
        for (i, &s) in c.strategies.iter().enumerate() {
            flows[s] = p[i];
        }
    }
    Profile::new(flows)
}
