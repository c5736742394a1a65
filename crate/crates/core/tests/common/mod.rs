#![allow(dead_code)]

use std::collections::HashMap;

use mquot::chain::{homology, ChainComplex, Coefficients, HomologyResult, SparseMatrix};
use mquot::equivariant::{quotient_complex, GroupAction, SignedCellMap};
use mquot::modp::rank_mod_p;

/// Coefficients of `∏_{k=lo}^{hi} (1 + k t)`.
pub fn product_poly(lo: usize, hi: usize) -> Vec<usize> {
    let mut poly = vec![1usize];
    for k in lo..=hi {
        let mut next = vec![0; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] += k * c;
        }
        poly = next;
    }
    poly
}

/// `F_p` Betti numbers from ranks alone, trailing zeros trimmed.
pub fn fp_dims(complex: &ChainComplex, p: u64) -> Vec<usize> {
    let ranks: Vec<usize> = (0..complex.len())
        .map(|d| {
            if d == 0 {
                0
            } else {
                rank_mod_p(complex.boundary(d).unwrap(), p).unwrap()
            }
        })
        .collect();
    let mut dims: Vec<usize> = (0..complex.len())
        .map(|d| complex.dim(d) - ranks[d] - ranks.get(d + 1).copied().unwrap_or(0))
        .collect();
    while dims.len() > 1 && dims.last() == Some(&0) {
        dims.pop();
    }
    dims
}

/// Orbit complex of the simplicial join of `k` circles, each a `2m`-gon,
/// with `Z/m` rotating circle `j` by `2 b_j` vertices. Simplices are sorted
/// vertex lists with the ordered simplicial boundary.
pub fn simplicial_lens(m: u64, weights: &[u64]) -> ChainComplex {
    let arcs = 2 * m as u32;
    let k = weights.len();
    // per circle: none, a vertex, or an edge
    let mut pieces: Vec<Vec<u32>> = vec![vec![]];
    pieces.extend((0..arcs).map(|t| vec![t]));
    pieces.extend((0..arcs).map(|t| vec![t, (t + 1) % arcs]));
    let mut layers: Vec<Vec<Vec<u32>>> = vec![Vec::new(); 2 * k];
    let total = pieces.len().pow(k as u32);
    for code in 1..total {
        let mut rest = code;
        let mut simplex = Vec::new();
        for j in 0..k {
            let piece = &pieces[rest % pieces.len()];
            rest /= pieces.len();
            simplex.extend(piece.iter().map(|&t| j as u32 * arcs + t));
        }
        simplex.sort_unstable();
        layers[simplex.len() - 1].push(simplex);
    }
    for layer in &mut layers {
        layer.sort();
    }
    let index: Vec<HashMap<Vec<u32>, usize>> = layers
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let dims: Vec<usize> = layers.iter().map(Vec::len).collect();
    let boundaries: Vec<SparseMatrix> = (1..layers.len())
        .map(|d| {
            let cols = layers[d]
                .iter()
                .map(|s| {
                    (0..s.len())
                        .map(|j| {
                            let mut face = s.clone();
                            face.remove(j);
                            (index[d - 1][&face], if j % 2 == 0 { 1 } else { -1 })
                        })
                        .collect()
                })
                .collect();
            SparseMatrix::from_columns(dims[d - 1], cols)
        })
        .collect();
    let complex = ChainComplex::new(dims, boundaries).unwrap();
    let elements: Vec<SignedCellMap> = (0..m)
        .map(|g| {
            layers
                .iter()
                .enumerate()
                .map(|(d, layer)| {
                    layer
                        .iter()
                        .map(|s| {
                            let image: Vec<u32> = s
                                .iter()
                                .map(|&v| {
                                    let (j, t) = (v / arcs, v % arcs);
                                    let shift = (2 * ((g * weights[j as usize]) % m)) as u32;
                                    j * arcs + (t + shift) % arcs
                                })
                                .collect();
                            let mut sorted = image.clone();
                            sorted.sort_unstable();
                            let inversions = (0..image.len())
                                .flat_map(|a| (a + 1..image.len()).map(move |b| (a, b)))
                                .filter(|&(a, b)| image[a] > image[b])
                                .count();
                            (index[d][&sorted], if inversions % 2 == 0 { 1 } else { -1 })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let action = GroupAction::new(&complex, elements).unwrap();
    quotient_complex(&complex, &action).unwrap()
}

pub fn simplicial_lens_homology(m: u64, weights: &[u64]) -> HomologyResult {
    homology(&simplicial_lens(m, weights), Coefficients::Integers).unwrap()
}
