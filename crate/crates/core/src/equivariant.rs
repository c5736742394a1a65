//! Quotients of cell complexes by finite group actions.
//!
//! A cellular action on a regular complex need not fix the cells it
//! stabilizes pointwise, in which case the orbit chain complex is wrong. We
//! barycentrically subdivide until every element that fixes a cell setwise
//! fixes its whole closure, then pass to orbits.
//!
//! For the symmetric group acting on unbased cacti this module also has a
//! direct route that enumerates orbits of flags without building the full
//! subdivision.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::cells::{enumerate_cells, orbit_normal_form, orbits_and_stabilizers, CactusCell, Permutation, Shape};
use crate::chain::{enumeration_complex, homology, ChainComplex, Coefficients, HomologyResult, SparseMatrix};
use crate::error::{Error, Result};

/// Largest lobe count accepted by [`full_quotient_complex`].
pub const MAX_QUOTIENT_LOBES: usize = 7;

/// One group element acting on a chain complex: `map[d][i] = (j, s)` sends
/// basis cell `i` of degree `d` to `s` times cell `j`.
pub type SignedCellMap = Vec<Vec<(usize, i8)>>;

/// A finite group acting cellularly on a complex, listed element by element.
#[derive(Clone, Debug)]
pub struct GroupAction {
    elements: Vec<SignedCellMap>,
}

impl GroupAction {
    /// Validates that each element permutes the cells of every degree and
    /// commutes with the boundary.
    pub fn new(complex: &ChainComplex, elements: Vec<SignedCellMap>) -> Result<Self> {
        for (g, map) in elements.iter().enumerate() {
            if map.len() != complex.len() {
                return Err(Error::NotCellular(format!("element {g} covers {} degrees", map.len())));
            }
            for (d, images) in map.iter().enumerate() {
                let mut hit = vec![false; complex.dim(d)];
                if images.len() != hit.len() {
                    return Err(Error::NotCellular(format!(
                        "element {g} has the wrong size in degree {d}"
                    )));
                }
                for &(j, s) in images {
                    if j >= hit.len() || hit[j] || (s != 1 && s != -1) {
                        return Err(Error::NotCellular(format!(
                            "element {g} is not a signed permutation in degree {d}"
                        )));
                    }
                    hit[j] = true;
                }
            }
            for d in 1..complex.len() {
                let b = complex.boundary(d).expect("degree in range");
                for i in 0..complex.dim(d) {
                    // g(∂ c) against ∂(g c)
                    let mut lhs: HashMap<usize, i64> = HashMap::new();
                    for &(f, a) in b.column(i) {
                        let (gf, s) = map[d - 1][f];
                        *lhs.entry(gf).or_insert(0) += a * s as i64;
                    }
                    let (gc, s) = map[d][i];
                    for &(f, a) in b.column(gc) {
                        *lhs.entry(f).or_insert(0) -= a * s as i64;
                    }
                    if lhs.values().any(|&v| v != 0) {
                        return Err(Error::NotCellular(format!(
                            "element {g} does not commute with the boundary of {}",
                            complex.label(d, i)
                        )));
                    }
                }
            }
        }
        Ok(GroupAction { elements })
    }

    /// The trivial group.
    pub fn trivial(complex: &ChainComplex) -> Self {
        let id = complex
            .dims()
            .iter()
            .map(|&n| (0..n).map(|i| (i, 1)).collect())
            .collect();
        GroupAction { elements: vec![id] }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SignedCellMap] {
        &self.elements
    }
}

/// Cells strictly below each cell, by degree.
fn closures(complex: &ChainComplex) -> Vec<Vec<BTreeSet<(usize, usize)>>> {
    let mut out: Vec<Vec<BTreeSet<(usize, usize)>>> = Vec::with_capacity(complex.len());
    for d in 0..complex.len() {
        let mut layer = Vec::with_capacity(complex.dim(d));
        for i in 0..complex.dim(d) {
            let mut set = BTreeSet::new();
            if d > 0 {
                for &(f, _) in complex.boundary(d).expect("degree in range").column(i) {
                    set.insert((d - 1, f));
                    set.extend(out[d - 1][f].iter().copied());
                }
            }
            layer.push(set);
        }
        out.push(layer);
    }
    out
}

fn check_regular_complex(complex: &ChainComplex) -> Result<()> {
    for d in 1..complex.len() {
        let b = complex.boundary(d).expect("degree in range");
        for i in 0..complex.dim(d) {
            if let Some(&(f, v)) = b.column(i).iter().find(|e| e.1.abs() != 1) {
                return Err(Error::NotRegular(format!(
                    "{} meets {} with incidence {v}",
                    complex.label(d, i),
                    complex.label(d - 1, f)
                )));
            }
            if d == 1 && b.column(i).len() != 2 {
                return Err(Error::NotRegular(format!("edge {} is a loop", complex.label(d, i))));
            }
        }
    }
    Ok(())
}

/// First violation of the regularity condition, if any: an element fixing a
/// cell setwise must fix it with sign `+1` and fix every face of it.
fn regularity_violation(complex: &ChainComplex, action: &GroupAction) -> Option<String> {
    let closure = closures(complex);
    for (g, map) in action.elements.iter().enumerate() {
        for d in 0..complex.len() {
            for i in 0..complex.dim(d) {
                let (j, s) = map[d][i];
                if j != i {
                    continue;
                }
                if s != 1 {
                    return Some(format!("element {g} reverses {}", complex.label(d, i)));
                }
                if let Some(&(fd, f)) = closure[d][i].iter().find(|&&(fd, f)| map[fd][f].0 != f) {
                    return Some(format!(
                        "element {g} fixes {} but moves its face {}",
                        complex.label(d, i),
                        complex.label(fd, f)
                    ));
                }
            }
        }
    }
    None
}

/// Whether every element fixing a cell setwise fixes it pointwise.
pub fn regularity_check(complex: &ChainComplex, action: &GroupAction) -> bool {
    regularity_violation(complex, action).is_none()
}

/// A simplicial complex whose vertices are the cells of a regular complex
/// and whose simplices are the chains in its face poset.
#[derive(Clone, Debug)]
pub struct SimplicialComplexWithAction {
    /// `(degree, index)` of the cell each vertex stands for.
    pub vertices: Vec<(usize, usize)>,
    /// `simplices[k]`: the k-simplices, as vertex lists ordered by degree.
    pub simplices: Vec<Vec<Vec<u32>>>,
    /// Each group element as a permutation of the vertices.
    pub vertex_action: Vec<Vec<u32>>,
    vertex_labels: Vec<String>,
}

impl SimplicialComplexWithAction {
    pub fn num_simplices(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    /// Ordered simplicial chains: `∂[v_0..v_k] = Σ (-1)^j [.. v_j-hat ..]`.
    pub fn chain_complex(&self) -> Result<ChainComplex> {
        let index: Vec<HashMap<&[u32], usize>> = self
            .simplices
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
            .collect();
        let dims: Vec<usize> = self.simplices.iter().map(Vec::len).collect();
        let mut boundaries = Vec::new();
        for k in 1..self.simplices.len() {
            let cols = self.simplices[k]
                .par_iter()
                .map(|s| {
                    (0..s.len())
                        .map(|j| {
                            let mut face = s.clone();
                            face.remove(j);
                            let sign = if j % 2 == 0 { 1 } else { -1 };
                            (index[k - 1][face.as_slice()], sign)
                        })
                        .collect()
                })
                .collect();
            boundaries.push(SparseMatrix::from_columns(dims[k - 1], cols));
        }
        let labels = self
            .simplices
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|s| {
                        let names: Vec<&str> = s.iter().map(|&v| self.vertex_labels[v as usize].as_str()).collect();
                        format!("[{}]", names.join("<"))
                    })
                    .collect()
            })
            .collect();
        ChainComplex::new(dims, boundaries)?.with_labels(labels)
    }

    /// The action on simplices induced by the vertex action. The vertex order
    /// of a simplex is preserved because the action preserves cell degrees.
    pub fn induced_action(&self, complex: &ChainComplex) -> Result<GroupAction> {
        let index: Vec<HashMap<&[u32], usize>> = self
            .simplices
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
            .collect();
        let elements = self
            .vertex_action
            .iter()
            .map(|perm| {
                self.simplices
                    .iter()
                    .enumerate()
                    .map(|(k, layer)| {
                        layer
                            .iter()
                            .map(|s| {
                                let image: Vec<u32> = s.iter().map(|&v| perm[v as usize]).collect();
                                (index[k][image.as_slice()], 1i8)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GroupAction::new(complex, elements)
    }
}

/// Barycentric subdivision of a regular complex, carrying `action` along.
pub fn barycentric_subdivision(complex: &ChainComplex, action: &GroupAction) -> Result<SimplicialComplexWithAction> {
    check_regular_complex(complex)?;
    let mut vertices = Vec::new();
    let mut vertex_of: Vec<Vec<u32>> = Vec::new();
    for d in 0..complex.len() {
        vertex_of.push((vertices.len() as u32..(vertices.len() + complex.dim(d)) as u32).collect());
        vertices.extend((0..complex.dim(d)).map(|i| (d, i)));
    }
    let closure = closures(complex);
    let mut simplices: Vec<Vec<Vec<u32>>> = vec![Vec::new(); complex.len()];
    for d in 0..complex.len() {
        for i in 0..complex.dim(d) {
            // chains whose top is (d, i), built downwards
            let mut stack: Vec<Vec<(usize, usize)>> = vec![vec![(d, i)]];
            while let Some(chain) = stack.pop() {
                let &(bd, bi) = chain.last().expect("nonempty chain");
                let simplex: Vec<u32> = chain.iter().rev().map(|&(cd, ci)| vertex_of[cd][ci]).collect();
                simplices[chain.len() - 1].push(simplex);
                for &face in &closure[bd][bi] {
                    let mut next = chain.clone();
                    next.push(face);
                    stack.push(next);
                }
            }
        }
    }
    while simplices.len() > 1 && simplices.last().is_some_and(Vec::is_empty) {
        simplices.pop();
    }
    for layer in &mut simplices {
        layer.sort_unstable();
    }
    let vertex_action = action
        .elements
        .iter()
        .map(|map| vertices.iter().map(|&(d, i)| vertex_of[d][map[d][i].0]).collect())
        .collect();
    let vertex_labels = vertices.iter().map(|&(d, i)| complex.label(d, i)).collect();
    Ok(SimplicialComplexWithAction {
        vertices,
        simplices,
        vertex_action,
        vertex_labels,
    })
}

/// Subdivides until the regularity condition holds, at most `max_rounds`
/// times. Returns the complex, the action and the number of rounds used.
pub fn subdivide_until_regular(
    complex: &ChainComplex,
    action: &GroupAction,
    max_rounds: usize,
) -> Result<(ChainComplex, GroupAction, usize)> {
    let mut current = (complex.clone(), action.clone());
    for round in 0..=max_rounds {
        let Some(detail) = regularity_violation(&current.0, &current.1) else {
            return Ok((current.0, current.1, round));
        };
        if round == max_rounds {
            return Err(Error::RegularityFailed { rounds: round, detail });
        }
        let sd = barycentric_subdivision(&current.0, &current.1)?;
        let next = sd.chain_complex()?;
        let next_action = sd.induced_action(&next)?;
        current = (next, next_action);
    }
    unreachable!("loop returns on its last round")
}

/// Orbit chain complex. The action must pass [`regularity_check`]. Each
/// orbit is represented by its lowest-index cell.
pub fn quotient_complex(complex: &ChainComplex, action: &GroupAction) -> Result<ChainComplex> {
    if let Some(detail) = regularity_violation(complex, action) {
        return Err(Error::NotRegular(detail));
    }
    // for every cell: (orbit index, sign of the identification with the representative)
    let mut orbit_of: Vec<Vec<(usize, i64)>> = Vec::with_capacity(complex.len());
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(complex.len());
    for d in 0..complex.len() {
        let n = complex.dim(d);
        let mut assigned = vec![None; n];
        let mut layer_reps = Vec::new();
        for i in 0..n {
            if assigned[i].is_some() {
                continue;
            }
            let orbit = layer_reps.len();
            layer_reps.push(i);
            for map in &action.elements {
                let (j, s) = map[d][i];
                // g i = s j, so j = s (g i) is identified with s times the representative
                match assigned[j] {
                    None => assigned[j] = Some((orbit, s as i64)),
                    Some((o, t)) => debug_assert!(o == orbit && t == s as i64, "inconsistent orbit signs"),
                }
            }
        }
        orbit_of.push(
            assigned
                .into_iter()
                .map(|a| a.expect("every cell lies in an orbit"))
                .collect(),
        );
        reps.push(layer_reps);
    }
    let dims: Vec<usize> = reps.iter().map(Vec::len).collect();
    let mut boundaries = Vec::new();
    for d in 1..complex.len() {
        let b = complex.boundary(d).expect("degree in range");
        let cols = reps[d]
            .iter()
            .map(|&r| {
                b.column(r)
                    .iter()
                    .map(|&(f, a)| {
                        let (o, s) = orbit_of[d - 1][f];
                        (o, a * s)
                    })
                    .collect()
            })
            .collect();
        boundaries.push(SparseMatrix::from_columns(dims[d - 1], cols));
    }
    let labels = reps
        .iter()
        .enumerate()
        .map(|(d, layer)| layer.iter().map(|&r| complex.label(d, r)).collect())
        .collect();
    ChainComplex::new(dims, boundaries)?.with_labels(labels)
}

/// The unbased complex `C_n / S^1` with the relabelling action of `S_n`.
pub fn unbased_with_action(n: usize) -> Result<(ChainComplex, GroupAction)> {
    let cells = enumerate_cells(n, Shape::Cyclic)?;
    let complex = enumeration_complex(&cells)?;
    let elements = Permutation::all(n)
        .par_iter()
        .map(|perm| {
            cells
                .by_dim
                .iter()
                .map(|layer| {
                    layer
                        .iter()
                        .map(|c| {
                            let image = c.relabel(perm);
                            (
                                cells.index_of(&image).expect("relabelled cell is enumerated"),
                                c.relabel_sign(perm),
                            )
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let action = GroupAction::new(&complex, elements)?;
    Ok((complex, action))
}

/// Full quotient through the generic machinery: subdivide the unbased
/// complex until the action is regular, then take orbits. Practical for
/// `n <= 5`.
pub fn full_quotient_generic(n: usize) -> Result<(ChainComplex, usize)> {
    let (complex, action) = unbased_with_action(n)?;
    let (sd, sd_action, rounds) = subdivide_until_regular(&complex, &action, 2)?;
    Ok((quotient_complex(&sd, &sd_action)?, rounds))
}

/// An orbit of flags `c_0 < c_1 < ... < c_k` in the unbased complex: the top
/// cell is the representative of its orbit, and the lower cells are faces of
/// it given as position masks, least among the masks related by the
/// stabilizer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct FlagKey {
    top: u32,
    masks: Vec<u32>,
}

struct TopCell {
    word: Vec<u8>,
    /// Rotations `r` of the stabilizer; faces move by `M -> M + r`.
    shifts: Vec<usize>,
    n: u8,
}

impl TopCell {
    fn len(&self) -> usize {
        self.word.len()
    }

    fn full(&self) -> u32 {
        (1u32 << self.len()) - 1
    }

    fn valid(&self, mask: u32) -> bool {
        let mut seen = 0u32;
        for (t, &x) in self.word.iter().enumerate() {
            if mask >> t & 1 == 1 {
                seen |= 1 << x;
            }
        }
        seen.count_ones() == self.n as u32
    }

    fn canonical(&self, masks: &[u32]) -> Vec<u32> {
        let l = self.len();
        self.shifts
            .iter()
            .map(|&r| masks.iter().map(|&m| rotate_mask(m, r, l)).collect::<Vec<u32>>())
            .min()
            .expect("stabilizer contains the identity")
    }
}

/// `{t + r mod l : t in mask}`.
fn rotate_mask(mask: u32, r: usize, l: usize) -> u32 {
    if r == 0 {
        return mask;
    }
    let full = (1u64 << l) - 1;
    let m = mask as u64;
    (((m << r) | (m >> (l - r))) & full) as u32
}

/// The orbit complex of the barycentric subdivision of `C_n / S^1` under
/// `S_n`, which computes the homology of `C_n / (S^1 x S_n)`.
pub fn full_quotient_complex(n: usize) -> Result<ChainComplex> {
    if n == 0 || n > MAX_QUOTIENT_LOBES {
        return Err(Error::LobeCount {
            n,
            max: MAX_QUOTIENT_LOBES,
        });
    }
    let cells = enumerate_cells(n, Shape::Cyclic)?;
    let orbits = orbits_and_stabilizers(&cells.by_dim.concat(), n);
    let tops: Vec<TopCell> = orbits
        .iter()
        .map(|o| TopCell {
            word: o.representative.word().to_vec(),
            shifts: o.stabilizer.elements.iter().map(|(r, _)| *r).collect(),
            n: n as u8,
        })
        .collect();
    let top_index: HashMap<Vec<u8>, u32> = tops
        .iter()
        .enumerate()
        .map(|(i, t)| (t.word.clone(), i as u32))
        .collect();

    let per_top: Vec<Vec<FlagKey>> = tops
        .par_iter()
        .enumerate()
        .map(|(id, top)| {
            let mut found = BTreeSet::new();
            let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
            while let Some(chain) = stack.pop() {
                found.insert(FlagKey {
                    top: id as u32,
                    masks: top.canonical(&chain),
                });
                let above = chain.first().copied().unwrap_or(top.full());
                let mut sub = (above - 1) & above;
                loop {
                    if top.valid(sub) {
                        let mut next = Vec::with_capacity(chain.len() + 1);
                        next.push(sub);
                        next.extend_from_slice(&chain);
                        stack.push(next);
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & above;
                }
            }
            found.into_iter().collect()
        })
        .collect();

    let mut layers: Vec<Vec<FlagKey>> = Vec::new();
    for keys in per_top {
        for key in keys {
            let k = key.masks.len();
            if layers.len() <= k {
                layers.resize(k + 1, Vec::new());
            }
            layers[k].push(key);
        }
    }
    for layer in &mut layers {
        layer.sort_unstable();
    }
    let index: Vec<HashMap<&FlagKey, usize>> = layers
        .iter()
        .map(|layer| layer.iter().enumerate().map(|(i, k)| (k, i)).collect())
        .collect();

    let face_key = |key: &FlagKey, j: usize| -> FlagKey {
        let top = &tops[key.top as usize];
        let k = key.masks.len();
        if j < k {
            let mut masks = key.masks.clone();
            masks.remove(j);
            return FlagKey {
                top: key.top,
                masks: top.canonical(&masks),
            };
        }
        // drop the top cell: the new top is the face with the largest mask
        let new_top_mask = key.masks[k - 1];
        let positions: Vec<usize> = (0..top.len()).filter(|&t| new_top_mask >> t & 1 == 1).collect();
        let sub_word: Vec<u8> = positions.iter().map(|&t| top.word[t]).collect();
        let reindex = |m: u32| -> u32 {
            positions
                .iter()
                .enumerate()
                .filter(|(_, &t)| m >> t & 1 == 1)
                .fold(0u32, |acc, (s, _)| acc | 1 << s)
        };
        let (rep, r, _) = orbit_normal_form(&sub_word);
        let new_id = top_index[&rep];
        let new_top = &tops[new_id as usize];
        let l = new_top.len();
        // rep[t] = σ(sub_word[t + r]): position s of the face becomes s - r
        let masks: Vec<u32> = key.masks[..k - 1]
            .iter()
            .map(|&m| rotate_mask(reindex(m), (l - r) % l, l))
            .collect();
        FlagKey {
            top: new_id,
            masks: new_top.canonical(&masks),
        }
    };

    let dims: Vec<usize> = layers.iter().map(Vec::len).collect();
    let mut boundaries = Vec::new();
    for k in 1..layers.len() {
        let cols = layers[k]
            .par_iter()
            .map(|key| {
                (0..=k)
                    .map(|j| {
                        let face = face_key(key, j);
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        (index[k - 1][&face], sign)
                    })
                    .collect()
            })
            .collect();
        boundaries.push(SparseMatrix::from_columns(dims[k - 1], cols));
    }
    ChainComplex::new(dims, boundaries)
}

/// Homology of `C_n / (S^1 x S_n)`, i.e. of `M(0,n+1)/S_n`.
pub fn full_quotient_homology(n: usize, coefficients: Coefficients) -> Result<HomologyResult> {
    homology(&full_quotient_complex(n)?, coefficients)
}

/// Number of cells in each degree whose representative has a nontrivial
/// labelled stabilizer.
pub fn symmetric_cell_counts(n: usize) -> Result<Vec<usize>> {
    let cells = enumerate_cells(n, Shape::Cyclic)?;
    let orbits = orbits_and_stabilizers(&cells.by_dim.concat(), n);
    let mut counts = vec![0; cells.by_dim.len()];
    for o in orbits.iter().filter(|o| !o.stabilizer.is_trivial()) {
        counts[CactusCell::dim(&o.representative)] += 1;
    }
    Ok(counts)
}
