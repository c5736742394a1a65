//! Lens complexes `L(m; b_0, ..., b_(k-1))`: the quotient of `S^(2k-1)` by
//! `ζ·(z_j) = (ζ^(b_j) z_j)`, modelled as the join of `k` subdivided circles.

use std::collections::HashMap;

use serde::Serialize;

use crate::chain::{homology, ChainComplex, Coefficients, HomologyResult, SparseMatrix};
use crate::equivariant::{quotient_complex, regularity_check, GroupAction, SignedCellMap};
use crate::error::{Error, Result};

/// Largest circle count accepted, to keep the join below a few million cells.
pub const MAX_CIRCLES: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LensSpec {
    pub m: u64,
    pub weights: Vec<u64>,
}

impl LensSpec {
    pub fn new(m: u64, weights: Vec<u64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::Lens(format!("group order {m} must be at least 2")));
        }
        if weights.is_empty() || weights.len() > MAX_CIRCLES {
            return Err(Error::Lens(format!("between 1 and {MAX_CIRCLES} weights are needed")));
        }
        if weights.contains(&0) {
            return Err(Error::Lens("weights must be positive".into()));
        }
        Ok(LensSpec { m, weights })
    }

    /// `L(n; n-1, ..., 2)`, the link of the singular point of `P(n, ..., 2)`.
    pub fn moduli(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Lens(format!("n = {n} must be at least 3")));
        }
        LensSpec::new(n as u64, (2..n as u64).rev().collect())
    }

    pub fn circles(&self) -> usize {
        self.weights.len()
    }

    pub fn sphere_dim(&self) -> usize {
        2 * self.circles() - 1
    }

    pub fn is_free(&self) -> bool {
        self.weights.iter().all(|&b| num_integer::gcd(b, self.m) == 1)
    }
}

impl std::fmt::Display for LensSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let w: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        write!(f, "L({};{})", self.m, w.join(","))
    }
}

/// A cell of one subdivided circle: vertex `t` or the arc from `t` to `t + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum CircleCell {
    Empty,
    Vertex(u32),
    Arc(u32),
}

impl CircleCell {
    fn dim_plus_one(self) -> usize {
        match self {
            CircleCell::Empty => 0,
            CircleCell::Vertex(_) => 1,
            CircleCell::Arc(_) => 2,
        }
    }

    fn rotate(self, r: u32, arcs: u32) -> Self {
        match self {
            CircleCell::Empty => CircleCell::Empty,
            CircleCell::Vertex(t) => CircleCell::Vertex((t + r) % arcs),
            CircleCell::Arc(t) => CircleCell::Arc((t + r) % arcs),
        }
    }
}

/// The join of the circles with the rotation action, before quotienting.
pub struct JoinModel {
    pub complex: ChainComplex,
    pub action: GroupAction,
}

/// Builds the join of `k` circles with `m * refine` arcs each, and the
/// action of `Z/m` rotating circle `j` by `b_j * refine` arcs.
pub fn join_model(spec: &LensSpec, refine: u32) -> Result<JoinModel> {
    if refine == 0 {
        return Err(Error::Lens("refinement factor must be positive".into()));
    }
    let arcs = spec.m as u32 * refine;
    let k = spec.circles();
    let per_circle: Vec<CircleCell> = std::iter::once(CircleCell::Empty)
        .chain((0..arcs).map(CircleCell::Vertex))
        .chain((0..arcs).map(CircleCell::Arc))
        .collect();
    // every tuple except all-empty, grouped by dimension
    let mut layers: Vec<Vec<Vec<CircleCell>>> = vec![Vec::new(); 2 * k];
    let base = per_circle.len();
    for code in 1..base.pow(k as u32) {
        let mut rest = code;
        let tuple: Vec<CircleCell> = (0..k)
            .map(|_| {
                let c = per_circle[rest % base];
                rest /= base;
                c
            })
            .collect();
        let shifted: usize = tuple.iter().map(|c| c.dim_plus_one()).sum();
        layers[shifted - 1].push(tuple);
    }
    for layer in &mut layers {
        layer.sort_unstable();
    }
    let index: Vec<HashMap<&[CircleCell], usize>> = layers
        .iter()
        .map(|layer| layer.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect())
        .collect();
    let dims: Vec<usize> = layers.iter().map(Vec::len).collect();
    let mut boundaries = Vec::new();
    for d in 1..layers.len() {
        let cols = layers[d]
            .iter()
            .map(|cell| {
                let mut col = Vec::new();
                let mut prefix = 0usize;
                for j in 0..k {
                    let sign: i64 = if prefix.is_multiple_of(2) { 1 } else { -1 };
                    let mut face = cell.clone();
                    match cell[j] {
                        CircleCell::Empty => {}
                        CircleCell::Vertex(_) => {
                            face[j] = CircleCell::Empty;
                            if face.iter().any(|&c| c != CircleCell::Empty) {
                                col.push((index[d - 1][face.as_slice()], sign));
                            }
                        }
                        CircleCell::Arc(t) => {
                            face[j] = CircleCell::Vertex((t + 1) % arcs);
                            col.push((index[d - 1][face.as_slice()], sign));
                            face[j] = CircleCell::Vertex(t);
                            col.push((index[d - 1][face.as_slice()], -sign));
                        }
                    }
                    prefix += cell[j].dim_plus_one();
                }
                col
            })
            .collect();
        boundaries.push(SparseMatrix::from_columns(dims[d - 1], cols));
    }
    let labels = layers
        .iter()
        .map(|layer| layer.iter().map(|c| describe(c)).collect())
        .collect();
    let complex = ChainComplex::new(dims, boundaries)?.with_labels(labels)?;
    let elements: Vec<SignedCellMap> = (0..spec.m)
        .map(|g| {
            let shifts: Vec<u32> = spec
                .weights
                .iter()
                .map(|&b| ((g * b) % spec.m) as u32 * refine)
                .collect();
            layers
                .iter()
                .enumerate()
                .map(|(d, layer)| {
                    layer
                        .iter()
                        .map(|cell| {
                            let image: Vec<CircleCell> =
                                cell.iter().zip(&shifts).map(|(c, &r)| c.rotate(r, arcs)).collect();
                            (index[d][image.as_slice()], 1i8)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let action = GroupAction::new(&complex, elements)?;
    Ok(JoinModel { complex, action })
}

fn describe(cell: &[CircleCell]) -> String {
    let parts: Vec<String> = cell
        .iter()
        .enumerate()
        .filter_map(|(j, c)| match c {
            CircleCell::Empty => None,
            CircleCell::Vertex(t) => Some(format!("v{j}.{t}")),
            CircleCell::Arc(t) => Some(format!("e{j}.{t}")),
        })
        .collect();
    parts.join("*")
}

/// The orbit chain complex of the lens complex.
pub fn lens_chain_complex(spec: &LensSpec) -> Result<ChainComplex> {
    lens_chain_complex_refined(spec, 1)
}

pub fn lens_chain_complex_refined(spec: &LensSpec, refine: u32) -> Result<ChainComplex> {
    let model = join_model(spec, refine)?;
    if !regularity_check(&model.complex, &model.action) {
        return Err(Error::NotRegular(format!(
            "rotation action on the join model of {spec}"
        )));
    }
    quotient_complex(&model.complex, &model.action)
}

pub fn lens_homology(spec: &LensSpec) -> Result<HomologyResult> {
    homology(&lens_chain_complex(spec)?, Coefficients::Integers)
}

/// Reduced homology is `Z` in degree `dim` and zero elsewhere.
pub fn is_homology_sphere(result: &HomologyResult, dim: usize) -> bool {
    result.degrees.len() > dim
        && result.degrees.iter().all(|h| {
            let reduced = if h.degree == 0 {
                h.betti.checked_sub(1)
            } else {
                Some(h.betti)
            };
            reduced == Some(usize::from(h.degree == dim)) && h.torsion.is_empty()
        })
}

/// Classical homology of a lens space with free action: `Z`, then `Z/m` in
/// odd degrees below the top, then `Z` on top.
pub fn classical_lens_homology(m: u64, circles: usize) -> Vec<String> {
    let top = 2 * circles - 1;
    (0..=top)
        .map(|d| {
            if d == 0 || d == top {
                "Z".to_string()
            } else if d % 2 == 1 {
                format!("Z/{m}")
            } else {
                "0".to_string()
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub n: usize,
    pub lens: LensSpec,
    pub sphere_dim: usize,
    /// `H_*(L)`.
    pub lens_homology: Vec<String>,
    /// `H_k(U, U - {p}) = H~_(k-1)(L)`, for `k = 1..=dim L + 1`.
    pub local_homology: Vec<String>,
    pub is_homology_sphere: bool,
    /// True when the cone point has the local homology of no manifold point.
    pub obstruction: bool,
}

/// Local homology at the singular point of `P(n, n-1, ..., 2)`, whose
/// neighbourhood is a cone on `L(n; n-1, ..., 2)`.
pub fn manifold_obstruction(n: usize) -> Result<ObstructionReport> {
    let lens = LensSpec::moduli(n)?;
    let h = lens_homology(&lens)?;
    let sphere_dim = lens.sphere_dim();
    let described = h.describe();
    let mut local = Vec::new();
    for (k, group) in described.iter().enumerate() {
        // reduced: drop one Z in degree 0
        let reduced = if k == 0 { reduce_degree_zero(&h) } else { group.clone() };
        local.push(reduced);
    }
    let sphere = is_homology_sphere(&h, sphere_dim);
    Ok(ObstructionReport {
        n,
        lens,
        sphere_dim,
        lens_homology: described,
        local_homology: local,
        is_homology_sphere: sphere,
        obstruction: !sphere,
    })
}

fn reduce_degree_zero(h: &HomologyResult) -> String {
    let d0 = &h.degrees[0];
    let betti = d0.betti.saturating_sub(1);
    let mut parts = Vec::new();
    if betti == 1 {
        parts.push("Z".to_string());
    } else if betti > 1 {
        parts.push(format!("Z^{betti}"));
    }
    parts.extend(d0.torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_projective_line() {
        let h = lens_homology(&LensSpec::new(2, vec![1]).unwrap()).unwrap();
        assert_eq!(h.describe(), ["Z", "Z"]);
        assert!(is_homology_sphere(&h, 1));
    }

    #[test]
    fn join_is_a_sphere() {
        for (m, k) in [(2, 2), (3, 2), (2, 3)] {
            let spec = LensSpec::new(m, vec![1; k]).unwrap();
            let model = join_model(&spec, 1).unwrap();
            let h = homology(&model.complex, Coefficients::Integers).unwrap();
            assert!(is_homology_sphere(&h, 2 * k - 1), "{:?}", h.describe());
        }
    }

    #[test]
    fn free_lens_spaces() {
        let h = lens_homology(&LensSpec::new(5, vec![4, 3, 2]).unwrap()).unwrap();
        assert_eq!(h.describe(), ["Z", "Z/5", "0", "Z/5", "0", "Z"]);
        assert!(!is_homology_sphere(&h, 5));
        let rp3 = lens_homology(&LensSpec::new(2, vec![1, 1]).unwrap()).unwrap();
        assert_eq!(rp3.describe(), ["Z", "Z/2", "0", "Z"]);
        assert!(!is_homology_sphere(&rp3, 3));
    }

    #[test]
    fn classical_pattern() {
        assert_eq!(classical_lens_homology(3, 2), ["Z", "Z/3", "0", "Z"]);
    }

    #[test]
    fn refinement_does_not_change_homology() {
        let spec = LensSpec::new(4, vec![3, 2]).unwrap();
        let coarse = homology(&lens_chain_complex(&spec).unwrap(), Coefficients::Integers).unwrap();
        let fine = homology(&lens_chain_complex_refined(&spec, 2).unwrap(), Coefficients::Integers).unwrap();
        assert_eq!(coarse.describe(), fine.describe());
    }

    #[test]
    fn three_lobes_has_no_obstruction() {
        let r = manifold_obstruction(3).unwrap();
        assert_eq!(r.lens_homology, ["Z", "Z"]);
        assert!(r.is_homology_sphere && !r.obstruction);
    }

    #[test]
    fn four_lobes_is_obstructed() {
        let r = manifold_obstruction(4).unwrap();
        assert_eq!(r.lens_homology[1], "Z/2");
        assert!(r.obstruction);
    }

    #[test]
    fn invalid_specs() {
        assert!(LensSpec::new(1, vec![1]).is_err());
        assert!(LensSpec::new(3, vec![]).is_err());
        assert!(LensSpec::new(3, vec![0]).is_err());
        assert!(LensSpec::moduli(2).is_err());
    }
}
