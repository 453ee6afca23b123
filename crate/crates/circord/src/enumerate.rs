//! Exhaustive enumeration at desk scale: every circular ordering of a small
//! cyclic group, and every cone candidate of a rank-k filtration group on a
//! coordinate ball.
//!
//! Cyclic enumeration iterates cyclic arrangements of the residues with the
//! identity pinned first (arrangements biject with total circular orders of
//! the underlying set, collapsing the space from 3^(n^3) functions to
//! (n-1)! candidates) and keeps those invariant under the generator shift,
//! which generates all left translations.
//!
//! Cone candidates are sign assignments on ball(r) minus the identity that
//! are antisymmetric and closed under in-ball products; the search is a
//! depth-first walk with unit propagation over the Horn clauses
//! pos(a) and pos(b) imply pos(ab).

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::groups::{Element, Group, GroupRepr};
use crate::orders::{CircularOrder, LeftOrder};

/// Orientation of three distinct positions on the n-cycle.
fn orient(n: u64, x: u64, y: u64, z: u64) -> i8 {
    let fy = (y + n - x) % n;
    let fz = (z + n - x) % n;
    if fy < fz {
        1
    } else {
        -1
    }
}

fn factorial(n: u64) -> u64 {
    (2..=n).product::<u64>().max(1)
}

/// All left-invariant circular orderings of Z/n, by filtering every
/// identity-pinned arrangement for shift invariance. Output order follows
/// the lexicographic order of arrangements, so it is deterministic.
pub fn enumerate_co_cyclic(n: u64, cap: u64) -> Result<Vec<CircularOrder>> {
    if !(2..=9).contains(&n) {
        return Err(Error::invalid(
            "cyclic enumeration supports orders 2 through 9",
        ));
    }
    let cells = factorial(n - 1)
        .checked_mul(n * n * n)
        .expect("cell count fits u64");
    if cells > cap {
        return Err(Error::ResourceCap {
            what: "cyclic ordering enumeration".to_string(),
            cells,
            cap,
        });
    }
    let mut out = Vec::new();
    for tail in (1..n).permutations((n - 1) as usize) {
        let mut arrangement = Vec::with_capacity(n as usize);
        arrangement.push(0);
        arrangement.extend(tail);
        let mut pos = vec![0u64; n as usize];
        for (p, &r) in arrangement.iter().enumerate() {
            pos[r as usize] = p as u64;
        }
        // Position table after composing with the generator shift g -> g+1.
        let spos: Vec<u64> = (0..n).map(|r| pos[((r + 1) % n) as usize]).collect();
        let invariant = || {
            for a in 0..n {
                for b in 0..n {
                    if b == a {
                        continue;
                    }
                    for c in 0..n {
                        if c == a || c == b {
                            continue;
                        }
                        let (a, b, c) = (a as usize, b as usize, c as usize);
                        if orient(n, pos[a], pos[b], pos[c])
                            != orient(n, spos[a], spos[b], spos[c])
                        {
                            return false;
                        }
                    }
                }
            }
            true
        };
        if invariant() {
            out.push(CircularOrder::cyclic_arrangement(n, &arrangement)?);
        }
    }
    Ok(out)
}

/// A sign assignment on ball(radius) minus the identity: antisymmetric and
/// closed under products that stay in the ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCandidate {
    radius: u32,
    assignment: BTreeMap<Element, i8>,
}

impl ConeCandidate {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn assignment(&self) -> &BTreeMap<Element, i8> {
        &self.assignment
    }

    pub fn sign(&self, e: &Element) -> Option<i8> {
        self.assignment.get(e).copied()
    }

    /// Whether the candidate is the restriction of the given order.
    pub fn restricts(&self, order: &LeftOrder) -> bool {
        self.assignment
            .iter()
            .all(|(e, s)| order.sign(e) == *s)
    }
}

struct ConeSearch {
    inv_of: Vec<usize>,
    clauses: Vec<[usize; 3]>,
    by_elem: Vec<Vec<usize>>,
    signs: Vec<i8>,
    trail: Vec<usize>,
    id_idx: usize,
    nodes: u64,
    cap: u64,
    results: Vec<Vec<i8>>,
}

impl ConeSearch {
    fn assign(&mut self, i: usize, s: i8) -> bool {
        if self.signs[i] != 0 {
            return self.signs[i] == s;
        }
        self.signs[i] = s;
        self.trail.push(i);
        let j = self.inv_of[i];
        if self.signs[j] != 0 {
            return self.signs[j] == -s;
        }
        self.signs[j] = -s;
        self.trail.push(j);
        true
    }

    /// Unit propagation from trail position `from` to fixpoint.
    fn propagate(&mut self, from: usize) -> bool {
        let mut qi = from;
        while qi < self.trail.len() {
            let e = self.trail[qi];
            qi += 1;
            for t in 0..self.by_elem[e].len() {
                let [a, b, p] = self.clauses[self.by_elem[e][t]];
                let (sa, sb, sp) = (self.signs[a], self.signs[b], self.signs[p]);
                let ok = if sa == 1 && sb == 1 {
                    self.assign(p, 1)
                } else if sa == 1 && sp == -1 {
                    self.assign(b, -1)
                } else if sb == 1 && sp == -1 {
                    self.assign(a, -1)
                } else {
                    true
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::ResourceCap {
                what: "cone candidate search".to_string(),
                cells: self.nodes,
                cap: self.cap,
            });
        }
        let next = (0..self.signs.len()).find(|&i| i != self.id_idx && self.signs[i] == 0);
        let Some(v) = next else {
            self.results.push(self.signs.clone());
            return Ok(());
        };
        for s in [1i8, -1] {
            let mark = self.trail.len();
            if self.assign(v, s) && self.propagate(mark) {
                self.dfs()?;
            }
            while self.trail.len() > mark {
                let i = self.trail.pop().expect("trail entry");
                self.signs[i] = 0;
            }
        }
        Ok(())
    }
}

/// Every cone candidate of the rank-k filtration group on ball(radius),
/// found by constraint search with unit propagation. `cap` bounds the
/// number of visited search nodes.
pub fn enumerate_lo_ball(group: &Group, radius: u32, cap: u64) -> Result<Vec<ConeCandidate>> {
    match group.repr() {
        GroupRepr::Tararin { k } if *k <= 3 => {}
        GroupRepr::Tararin { .. } => {
            return Err(Error::invalid("cone search supports rank at most 3"))
        }
        _ => {
            return Err(Error::invalid(
                "cone search supports the rank-k filtration backends",
            ))
        }
    }
    if radius > 3 {
        return Err(Error::invalid("cone search supports radius at most 3"));
    }
    let ball = group.ball(radius)?;
    let index: HashMap<Element, usize> = ball
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let id_idx = index[&group.id()];
    let inv_of: Vec<usize> = ball
        .iter()
        .map(|e| index[&group.inv(e)])
        .collect();
    let mut clauses = Vec::new();
    for (i, a) in ball.iter().enumerate() {
        if i == id_idx {
            continue;
        }
        for (j, b) in ball.iter().enumerate() {
            if j == id_idx {
                continue;
            }
            let prod = group.mul(a, b);
            if let Some(&p) = index.get(&prod) {
                if p != id_idx {
                    clauses.push([i, j, p]);
                }
            }
        }
    }
    let mut by_elem = vec![Vec::new(); ball.len()];
    for (ci, &[a, b, p]) in clauses.iter().enumerate() {
        by_elem[a].push(ci);
        by_elem[b].push(ci);
        by_elem[p].push(ci);
    }
    let mut search = ConeSearch {
        inv_of,
        clauses,
        by_elem,
        signs: vec![0; ball.len()],
        trail: Vec::new(),
        id_idx,
        nodes: 0,
        cap,
        results: Vec::new(),
    };
    search.dfs()?;
    search.results.sort();
    Ok(search
        .results
        .into_iter()
        .map(|signs| {
            let assignment = ball
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != id_idx)
                .map(|(i, e)| (e.clone(), signs[i]))
                .collect();
            ConeCandidate { radius, assignment }
        })
        .collect())
}

/// The 2^k coordinate-lex cones of the rank-k filtration group, one per
/// sign vector; bit i of the mask chooses the direction of coordinate i.
pub fn canonical_tararin_cones(k: usize) -> Result<Vec<LeftOrder>> {
    if k == 0 {
        return Err(Error::invalid("filtration rank must be positive"));
    }
    let group = Group::tararin(k)?;
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let signs: Vec<i8> = (0..k)
            .map(|i| if mask & (1 << i) == 0 { 1 } else { -1 })
            .collect();
        out.push(LeftOrder::lex(group.clone(), signs)?);
    }
    Ok(out)
}
