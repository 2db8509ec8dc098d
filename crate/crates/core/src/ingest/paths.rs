//! Bounded path enumeration: each OD pair becomes a group whose strategies
//! are its `k` shortest simple paths by free-flow time.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use rayon::prelude::*;
use thiserror::Error;

use super::tntp::{Link, TntpNetwork, TripTable};
use crate::exponent;
use crate::game::{Demand, Game};
use crate::price::PriceFunction;

pub const DEFAULT_K: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum EnumerateError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("destination {destination} is unreachable from origin {origin}")]
    Unreachable { origin: usize, destination: usize },
    #[error("node {0} is not in the network")]
    UnknownNode(usize),
}

/// A simple path as a link sequence, with its node sequence and free-flow cost.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub nodes: Vec<usize>,
    pub links: Vec<usize>,
    pub cost: f64,
}

impl Path {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then_with(|| self.nodes.cmp(&other.nodes))
            .then_with(|| self.links.cmp(&other.links))
    }
}

/// Game, demand and the path behind every strategy.
#[derive(Clone, Debug)]
pub struct PathGame {
    pub game: Game,
    pub demand: Demand,
    pub paths: Vec<Path>,
}

/// BPR price `fft * (1 + b (x / cap)^power)` as summands, each one resource.
///
/// Integer powers give a single polynomial. Other powers give a constant and
/// a power term, since their sum is outside the power-log family.
pub fn bpr_prices(link: &Link) -> Vec<PriceFunction> {
    let fft = link.free_flow_time;
    let scale = fft * link.b / link.capacity.powf(link.power);
    if scale == 0.0 {
        return vec![PriceFunction::constant(fft)];
    }
    if link.power.fract() == 0.0 && link.power < 64.0 {
        let p = link.power as usize;
        let mut coeffs = vec![0.0; p + 1];
        coeffs[0] += fft;
        coeffs[p] += scale;
        return vec![PriceFunction::poly(coeffs)];
    }
    let rho = exponent::from_f64(link.power).expect("finite power");
    vec![PriceFunction::constant(fft), PriceFunction::power_log(scale, rho, 0.0)]
}

struct Graph {
    /// Outgoing link indices per node, sorted by (head node, link index).
    out: Vec<Vec<usize>>,
    links: Vec<(usize, usize, f64)>,
}

impl Graph {
    fn new(net: &TntpNetwork) -> Self {
        let mut out = vec![Vec::new(); net.nodes + 1];
        let links: Vec<(usize, usize, f64)> = net.links.iter().map(|l| (l.from, l.to, l.free_flow_time)).collect();
        for (i, l) in links.iter().enumerate() {
            out[l.0].push(i);
        }
        for o in &mut out {
            o.sort_by_key(|&i| (links[i].1, i));
        }
        Graph { out, links }
    }

    fn path_cost(&self, links: &[usize]) -> f64 {
        links.iter().map(|&l| self.links[l].2).sum()
    }

    /// Shortest path avoiding the given nodes and links; ties go to the
    /// lexicographically smallest node sequence, then link sequence.
    fn shortest(&self, from: usize, to: usize, banned_nodes: &[bool], banned_links: &BTreeSet<usize>) -> Option<Path> {
        #[derive(PartialEq)]
        struct Label(Path);
        impl Eq for Label {}
        impl Ord for Label {
            fn cmp(&self, other: &Self) -> Ordering {
                other.0.key_cmp(&self.0)
            }
        }
        impl PartialOrd for Label {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        let mut settled = vec![false; self.out.len()];
        let mut heap = BinaryHeap::new();
        heap.push(Label(Path {
            nodes: vec![from],
            links: vec![],
            cost: 0.0,
        }));
        while let Some(Label(p)) = heap.pop() {
            let v = *p.nodes.last().expect("non-empty");
            if settled[v] {
                continue;
            }
            settled[v] = true;
            if v == to {
                return Some(p);
            }
            for &l in &self.out[v] {
                let (_, w, _) = self.links[l];
                if settled[w] || banned_nodes[w] || banned_links.contains(&l) || p.nodes.contains(&w) {
                    continue;
                }
                let mut next = p.clone();
                next.nodes.push(w);
                next.links.push(l);
                next.cost = self.path_cost(&next.links);
                heap.push(Label(next));
            }
        }
        None
    }

    /// Yen's algorithm over link sequences.
    fn k_shortest(&self, from: usize, to: usize, k: usize) -> Vec<Path> {
        let mut banned_nodes = vec![false; self.out.len()];
        let Some(first) = self.shortest(from, to, &banned_nodes, &BTreeSet::new()) else {
            return vec![];
        };
        let mut found = vec![first];
        let mut candidates: Vec<Path> = Vec::new();
        while found.len() < k {
            let last = found.last().expect("non-empty").clone();
            for i in 0..last.links.len() {
                let spur = last.nodes[i];
                let root = &last.links[..i];
                let banned_links: BTreeSet<usize> = found
                    .iter()
                    .filter(|p| p.links.len() > i && &p.links[..i] == root)
                    .map(|p| p.links[i])
                    .collect();
                banned_nodes.iter_mut().for_each(|b| *b = false);
                for &n in &last.nodes[..i] {
                    banned_nodes[n] = true;
                }
                if let Some(tail) = self.shortest(spur, to, &banned_nodes, &banned_links) {
                    let mut nodes = last.nodes[..i].to_vec();
                    nodes.extend(&tail.nodes);
                    let mut links = root.to_vec();
                    links.extend(&tail.links);
                    let cost = self.path_cost(&links);
                    let cand = Path { nodes, links, cost };
                    if !candidates.iter().any(|c| c.links == cand.links) && !found.iter().any(|c| c.links == cand.links)
                    {
                        candidates.push(cand);
                    }
                }
            }
            let Some(best) = (0..candidates.len()).min_by(|&a, &b| candidates[a].key_cmp(&candidates[b])) else {
                break;
            };
            found.push(candidates.swap_remove(best));
        }
        found
    }
}

/// Up to `k` shortest simple paths from `origin` to `destination`.
pub fn k_shortest_paths(
    net: &TntpNetwork,
    origin: usize,
    destination: usize,
    k: usize,
) -> Result<Vec<Path>, EnumerateError> {
    if k == 0 {
        return Err(EnumerateError::ZeroK);
    }
    for n in [origin, destination] {
        if n == 0 || n > net.nodes {
            return Err(EnumerateError::UnknownNode(n));
        }
    }
    let paths = Graph::new(net).k_shortest(origin, destination, k);
    if paths.is_empty() {
        return Err(EnumerateError::Unreachable { origin, destination });
    }
    Ok(paths)
}

/// Builds the path game: one group per OD pair with positive demand (pairs
/// with equal origin and destination are skipped), BPR prices per link.
pub fn enumerate_paths(net: &TntpNetwork, trips: &TripTable, k: usize) -> Result<PathGame, EnumerateError> {
    if k == 0 {
        return Err(EnumerateError::ZeroK);
    }
    let graph = Graph::new(net);
    let pairs: Vec<(usize, usize, f64)> = trips.positive_pairs().into_iter().filter(|(o, d, _)| o != d).collect();
    let per_pair: Vec<Vec<Path>> = pairs
        .par_iter()
        .map(|&(o, d, _)| {
            for n in [o, d] {
                if n == 0 || n > net.nodes {
                    return Err(EnumerateError::UnknownNode(n));
                }
            }
            let paths = graph.k_shortest(o, d, k);
            if paths.is_empty() {
                Err(EnumerateError::Unreachable {
                    origin: o,
                    destination: d,
                })
            } else {
                Ok(paths)
            }
        })
        .collect::<Result<_, _>>()?;

    let mut b = Game::builder();
    let mut seen = BTreeSet::new();
    let resources: Vec<Vec<usize>> = net
        .links
        .iter()
        .map(|l| {
            let mut id = format!("{}-{}", l.from, l.to);
            let mut dup = 1;
            while !seen.insert(id.clone()) {
                dup += 1;
                id = format!("{}-{}#{}", l.from, l.to, dup);
            }
            let prices = bpr_prices(l);
            let single = prices.len() == 1;
            prices
                .into_iter()
                .enumerate()
                .map(|(j, p)| b.resource(if single { id.clone() } else { format!("{id}/{j}") }, p))
                .collect()
        })
        .collect();

    let mut volumes = Vec::with_capacity(pairs.len());
    let mut all_paths = Vec::new();
    for (&(o, d, v), paths) in pairs.iter().zip(per_pair) {
        let g = b.group(format!("{o}-{d}"));
        for (j, p) in paths.into_iter().enumerate() {
            let uses: Vec<(usize, f64)> = p
                .links
                .iter()
                .flat_map(|&l| resources[l].iter().map(|&a| (a, 1.0)))
                .collect();
            b.strategy(g, format!("{o}-{d}:{}", j + 1), &uses);
            all_paths.push(p);
        }
        volumes.push(v);
    }
    Ok(PathGame {
        game: b.build(),
        demand: Demand::new(volumes).expect("trip volumes are non-negative"),
        paths: all_paths,
    })
}
