//! List-DPVC by dynamic programming over a nice tree decomposition.
//!
//! Each node keeps a dense table over the assignments of its bag, indexed
//! in mixed radix by positions in the per-vertex lists (first bag vertex is
//! the least significant digit). `INF` marks assignments that leave an
//! edge inside the bag uncovered.

use crate::instance::{DpvcInstance, PowerAssignment, VertexId};

use super::decomposition::{NiceTreeDecomposition, NodeKind};
use super::TwError;

const INF: u64 = u64::MAX;

/// Default cap on the entries of one DP table.
pub const DEFAULT_TABLE_LIMIT: usize = 1 << 24;

/// A DPVC instance in which vertex `v` may only take a power in `lists[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListInstance {
    pub inst: DpvcInstance,
    pub lists: Vec<Vec<u64>>,
}

impl ListInstance {
    /// Lists are sorted and deduplicated; every list must be nonempty.
    pub fn new(inst: DpvcInstance, mut lists: Vec<Vec<u64>>) -> Result<Self, TwError> {
        if lists.len() != inst.num_vertices() {
            return Err(TwError::BadLists("one list per vertex".into()));
        }
        for (v, l) in lists.iter_mut().enumerate() {
            l.sort_unstable();
            l.dedup();
            if l.is_empty() {
                return Err(TwError::BadLists(format!("empty list for vertex {v}")));
            }
        }
        Ok(ListInstance { inst, lists })
    }

    pub fn l_max(&self) -> usize {
        self.lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Every vertex may take `0..=M`.
    pub fn max_weight(inst: &DpvcInstance) -> Self {
        let m = inst.max_demand();
        let lists = vec![(0..=m).collect(); inst.num_vertices()];
        ListInstance {
            inst: inst.clone(),
            lists,
        }
    }

    /// Every vertex may take 0 or one of its own demands.
    pub fn by_degree(inst: &DpvcInstance) -> Self {
        let lists = (0..inst.num_vertices()).map(|v| inst.candidate_levels(v)).collect();
        ListInstance {
            inst: inst.clone(),
            lists,
        }
    }

    /// Sum over nodes of table sizes, saturating.
    pub fn table_cost(&self, td: &NiceTreeDecomposition) -> usize {
        td.nodes
            .iter()
            .map(|x| table_size(&self.lists, &x.bag))
            .fold(0usize, |a, b| a.saturating_add(b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DpOutcome {
    Optimal { value: u64, witness: PowerAssignment },
    Infeasible,
}

fn table_size(lists: &[Vec<u64>], bag: &[VertexId]) -> usize {
    bag.iter()
        .map(|&v| lists[v].len())
        .fold(1usize, |a, b| a.saturating_mul(b))
}

struct Table {
    bag: Vec<VertexId>,
    radix: Vec<usize>,
    values: Vec<u64>,
}

impl Table {
    fn digits(&self, mut idx: usize) -> Vec<usize> {
        self.radix
            .iter()
            .map(|&r| {
                let d = idx % r;
                idx /= r;
                d
            })
            .collect()
    }

    fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.radix)
            .rev()
            .fold(0, |acc, (&d, &r)| acc * r + d)
    }
}

/// Minimum total power with `p_v ∈ lists[v]` for all `v`, or `Infeasible`.
pub fn ldpvc_dp(li: &ListInstance, td: &NiceTreeDecomposition) -> Result<DpOutcome, TwError> {
    ldpvc_dp_limited(li, td, DEFAULT_TABLE_LIMIT)
}

pub fn ldpvc_dp_limited(li: &ListInstance, td: &NiceTreeDecomposition, limit: usize) -> Result<DpOutcome, TwError> {
    let inst = &li.inst;
    let n = inst.num_vertices();
    let Some(root) = td.root else {
        return Ok(DpOutcome::Optimal {
            value: 0,
            witness: PowerAssignment::zeros(n),
        });
    };
    let lists = &li.lists;
    let mut tables: Vec<Table> = Vec::with_capacity(td.nodes.len());
    for node in &td.nodes {
        let size = table_size(lists, &node.bag);
        if size > limit {
            return Err(TwError::TableTooLarge { entries: size, limit });
        }
        let radix: Vec<usize> = node.bag.iter().map(|&v| lists[v].len()).collect();
        let mut t = Table {
            bag: node.bag.clone(),
            radix,
            values: vec![INF; size],
        };
        match node.kind {
            NodeKind::Leaf(v) => {
                for (i, &p) in lists[v].iter().enumerate() {
                    t.values[i] = p;
                }
            }
            NodeKind::Introduce(v) => {
                let child = &tables[node.children[0]];
                let at = t.bag.binary_search(&v).expect("introduced vertex in bag");
                for idx in 0..size {
                    let mut d = t.digits(idx);
                    let dv = d.remove(at);
                    let base = child.values[child.index(&d)];
                    if base == INF {
                        continue;
                    }
                    let pv = lists[v][dv];
                    let covered = inst.incident(v).iter().all(|&e| {
                        let edge = inst.edge(e);
                        let u = edge.other(v);
                        match t.bag.binary_search(&u) {
                            Ok(j) => {
                                let du = if j < at { d[j] } else { d[j - 1] };
                                let pu = lists[u][du];
                                pv >= edge.demand_from(v) || pu >= edge.demand_from(u)
                            }
                            Err(_) => true,
                        }
                    });
                    if covered {
                        t.values[idx] = base + pv;
                    }
                }
            }
            NodeKind::Forget(v) => {
                let child = &tables[node.children[0]];
                let at = child.bag.binary_search(&v).expect("forgotten vertex in child");
                for idx in 0..size {
                    let mut d = t.digits(idx);
                    d.insert(at, 0);
                    let mut best = INF;
                    for l in 0..lists[v].len() {
                        d[at] = l;
                        best = best.min(child.values[child.index(&d)]);
                    }
                    t.values[idx] = best;
                }
            }
            NodeKind::Join => {
                let (a, b) = (&tables[node.children[0]], &tables[node.children[1]]);
                for idx in 0..size {
                    let (x, y) = (a.values[idx], b.values[idx]);
                    if x == INF || y == INF {
                        continue;
                    }
                    let d = t.digits(idx);
                    let shared: u64 = t.bag.iter().zip(&d).map(|(&v, &l)| lists[v][l]).sum();
                    t.values[idx] = x + y - shared;
                }
            }
        }
        tables.push(t);
    }
    let value = tables[root].values[0];
    if value == INF {
        return Ok(DpOutcome::Infeasible);
    }
    let mut witness = PowerAssignment::zeros(n);
    // top-down: each entry is (node, digits of its bag)
    let mut stack = vec![(root, Vec::new())];
    while let Some((i, d)) = stack.pop() {
        let node = &td.nodes[i];
        for (&v, &l) in node.bag.iter().zip(&d) {
            witness.set(v, lists[v][l]);
        }
        match node.kind {
            NodeKind::Leaf(_) => {}
            NodeKind::Introduce(v) => {
                let at = node.bag.binary_search(&v).unwrap();
                let mut cd = d.clone();
                cd.remove(at);
                stack.push((node.children[0], cd));
            }
            NodeKind::Forget(v) => {
                let c = node.children[0];
                let child = &tables[c];
                let at = child.bag.binary_search(&v).unwrap();
                let target = tables[i].values[tables[i].index(&d)];
                let mut cd = d.clone();
                cd.insert(at, 0);
                let l = (0..lists[v].len())
                    .find(|&l| {
                        cd[at] = l;
                        child.values[child.index(&cd)] == target
                    })
                    .expect("forget minimum is attained");
                cd[at] = l;
                stack.push((c, cd));
            }
            NodeKind::Join => {
                stack.push((node.children[0], d.clone()));
                stack.push((node.children[1], d));
            }
        }
    }
    debug_assert_eq!(witness.value(), value);
    Ok(DpOutcome::Optimal { value, witness })
}

fn exact(li: &ListInstance, td: &NiceTreeDecomposition) -> Result<(u64, PowerAssignment), TwError> {
    match ldpvc_dp(li, td)? {
        DpOutcome::Optimal { value, witness } => Ok((value, witness)),
        DpOutcome::Infeasible => unreachable!("lists contain every vertex's largest demand"),
    }
}

/// Exact optimum with `L(v) = {0, …, M}`.
pub fn solve_tw_maxweight(inst: &DpvcInstance, td: &NiceTreeDecomposition) -> Result<(u64, PowerAssignment), TwError> {
    exact(&ListInstance::max_weight(inst), td)
}

/// Exact optimum with `L(v)` = 0 plus the demands of `v`.
pub fn solve_tw_degree(inst: &DpvcInstance, td: &NiceTreeDecomposition) -> Result<(u64, PowerAssignment), TwError> {
    exact(&ListInstance::by_degree(inst), td)
}

/// Exact optimum using whichever list construction gives smaller tables.
pub fn solve_tw_exact(inst: &DpvcInstance, td: &NiceTreeDecomposition) -> Result<(u64, PowerAssignment), TwError> {
    let a = ListInstance::max_weight(inst);
    let b = ListInstance::by_degree(inst);
    if a.table_cost(td) < b.table_cost(td) {
        exact(&a, td)
    } else {
        exact(&b, td)
    }
}
