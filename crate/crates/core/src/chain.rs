//! Chain complexes of free abelian groups and their homology.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cells::{enumerate_cells, CellEnumeration, Shape};
use crate::error::{Error, Result};
use crate::{modp, snf};

/// Column-major sparse integer matrix. Column `j` lists `(row, value)` pairs
/// sorted by row, with no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, i64)]) -> Self {
        let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); ncols];
        for &(i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i}, {j}) outside {nrows}x{ncols}");
            cols[j].push((i, v));
        }
        for col in &mut cols {
            *col = normalize(std::mem::take(col));
        }
        SparseMatrix { nrows, cols }
    }

    /// Builds from columns of `(row, value)` pairs in any order.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(usize, i64)>>) -> Self {
        let cols = cols
            .into_iter()
            .map(|c| {
                assert!(c.iter().all(|&(i, _)| i < nrows), "row index out of range");
                normalize(c)
            })
            .collect();
        SparseMatrix { nrows, cols }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    triplets.push((i, j, v));
                }
            }
        }
        SparseMatrix::from_triplets(nrows, ncols, &triplets)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.cols[j]
            .binary_search_by_key(&i, |e| e.0)
            .map_or(0, |k| self.cols[j][k].1)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Row-major copy with `u32` column indices.
    pub(crate) fn rows(&self) -> Vec<Vec<(u32, i64)>> {
        let mut rows = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                rows[i].push((j as u32, v));
            }
        }
        rows
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.ncols()]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                out[i][j] = v;
            }
        }
        out
    }

    pub(crate) fn to_dense_big(&self) -> Vec<Vec<BigInt>> {
        self.to_dense()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect()
    }

    /// `self * other`, or an overflow error.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols() != other.nrows {
            return Err(Error::Shape {
                degree: 0,
                detail: format!(
                    "cannot multiply {}x{} by {}x{}",
                    self.nrows,
                    self.ncols(),
                    other.nrows,
                    other.ncols()
                ),
            });
        }
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(k, b) in col {
                    for &(i, a) in &self.cols[k] {
                        let e = acc.entry(i).or_insert(0);
                        *e = a
                            .checked_mul(b)
                            .and_then(|x| e.checked_add(x))
                            .ok_or_else(|| Error::Overflow("matrix product".into()))?;
                    }
                }
                Ok(acc.into_iter().collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_columns(self.nrows, cols))
    }
}

fn normalize(mut col: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    col.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(col.len());
    for (i, v) in col {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// A bounded chain complex `C_top -> ... -> C_1 -> C_0`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    /// `boundaries[d]` is `∂_d : C_d -> C_{d-1}`; `boundaries[0]` has no rows.
    boundaries: Vec<SparseMatrix>,
    labels: Option<Vec<Vec<String>>>,
}

/// One basis cell and its boundary, indexed into the previous degree.
#[derive(Clone, Debug, Default)]
pub struct CellRecord {
    pub label: String,
    pub facets: Vec<(usize, i64)>,
}

impl ChainComplex {
    /// Validates shapes and `∂∂ = 0`. `boundaries[d - 1]` is `∂_d` for
    /// `d = 1..dims.len()`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != dims.len().max(1) {
            return Err(Error::Shape {
                degree: boundaries.len(),
                detail: format!("{} boundary maps for {} degrees", boundaries.len(), dims.len()),
            });
        }
        for (k, b) in boundaries.iter().enumerate() {
            let d = k + 1;
            if b.nrows() != dims[d - 1] || b.ncols() != dims[d] {
                return Err(Error::Shape {
                    degree: d,
                    detail: format!(
                        "boundary is {}x{}, expected {}x{}",
                        b.nrows(),
                        b.ncols(),
                        dims[d - 1],
                        dims[d]
                    ),
                });
            }
        }
        let mut all = Vec::with_capacity(dims.len());
        if let Some(&d0) = dims.first() {
            all.push(SparseMatrix::zero(0, d0));
        }
        all.extend(boundaries);
        let complex = ChainComplex {
            dims,
            boundaries: all,
            labels: None,
        };
        complex.check_square_zero()?;
        Ok(complex)
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.dims.len() || labels.iter().zip(&self.dims).any(|(l, &d)| l.len() != d) {
            return Err(Error::Shape {
                degree: 0,
                detail: "label counts do not match basis sizes".into(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The complex with no cells.
    pub fn empty() -> Self {
        ChainComplex {
            dims: Vec::new(),
            boundaries: Vec::new(),
            labels: None,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }

    /// Number of degrees stored (top degree + 1).
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// `∂_d`, or `None` past the top degree.
    pub fn boundary(&self, d: usize) -> Option<&SparseMatrix> {
        self.boundaries.get(d)
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    pub fn label(&self, degree: usize, index: usize) -> String {
        match &self.labels {
            Some(l) => l[degree][index].clone(),
            None => format!("#{index}"),
        }
    }

    pub fn total_cells(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler_characteristic(self)
    }

    fn check_square_zero(&self) -> Result<()> {
        for d in 2..self.dims.len() {
            let lower = &self.boundaries[d - 1];
            let upper = &self.boundaries[d];
            for j in 0..upper.ncols() {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(k, b) in upper.column(j) {
                    for &(i, a) in lower.column(k) {
                        *acc.entry(i).or_insert(0) += a * b;
                    }
                }
                if let Some((&i, &c)) = acc.iter().filter(|e| *e.1 != 0).min_by_key(|e| *e.0) {
                    return Err(Error::BoundarySquare {
                        degree: d,
                        cell: self.label(d, j),
                        face: self.label(d - 2, i),
                        coefficient: c,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Builds a complex from per-degree cell records, checking `∂∂ = 0` and
/// naming the offending cells if it fails.
pub fn assemble(records: Vec<Vec<CellRecord>>) -> Result<ChainComplex> {
    let dims: Vec<usize> = records.iter().map(Vec::len).collect();
    let mut boundaries = Vec::new();
    for d in 1..records.len() {
        let mut cols = Vec::with_capacity(records[d].len());
        for cell in &records[d] {
            for &(f, _) in &cell.facets {
                if f >= dims[d - 1] {
                    return Err(Error::Shape {
                        degree: d,
                        detail: format!("cell {} names facet {f} of {}", cell.label, dims[d - 1]),
                    });
                }
            }
            cols.push(cell.facets.clone());
        }
        boundaries.push(SparseMatrix::from_columns(dims[d - 1], cols));
    }
    let labels = records
        .into_iter()
        .map(|cells| cells.into_iter().map(|c| c.label).collect())
        .collect();
    // label before checking so a failure can name the cells
    let mut complex = ChainComplex {
        dims: dims.clone(),
        boundaries: Vec::new(),
        labels: Some(labels),
    };
    if let Some(&d0) = dims.first() {
        complex.boundaries.push(SparseMatrix::zero(0, d0));
    }
    complex.boundaries.extend(boundaries);
    complex.check_square_zero()?;
    Ok(complex)
}

/// The cellular chain complex of an enumeration.
pub fn enumeration_complex(cells: &CellEnumeration) -> Result<ChainComplex> {
    let records = cells
        .by_dim
        .iter()
        .enumerate()
        .map(|(d, layer)| {
            layer
                .par_iter()
                .map(|cell| CellRecord {
                    label: cell.to_string(),
                    facets: if d == 0 {
                        Vec::new()
                    } else {
                        cell.facets()
                            .into_iter()
                            .map(|f| {
                                let idx = cells
                                    .index_of(&f.cell)
                                    .expect("facet of an enumerated cell is enumerated");
                                (idx, f.sign as i64)
                            })
                            .collect()
                    },
                })
                .collect()
        })
        .collect();
    assemble(records)
}

/// Cellular chains of `C_n` (`Linear`) or `C_n / S^1` (`Cyclic`).
pub fn cacti_complex(n: usize, shape: Shape) -> Result<ChainComplex> {
    enumeration_complex(&enumerate_cells(n, shape)?)
}

pub fn euler_characteristic(complex: &ChainComplex) -> i64 {
    complex
        .dims
        .iter()
        .enumerate()
        .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    Prime(u64),
}

impl Coefficients {
    pub fn is_field(self) -> bool {
        matches!(self, Coefficients::Prime(_))
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = Error;

    /// Accepts `z`, `Z`, `f3`, `F3`, `3`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "z" {
            return Ok(Coefficients::Integers);
        }
        let digits = t.strip_prefix('f').unwrap_or(&t);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Configuration(format!("unknown coefficients {s:?}")))?;
        modp::check_prime(p)?;
        Ok(Coefficients::Prime(p))
    }
}

impl Serialize for Coefficients {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coefficients {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub degree: usize,
    /// Free rank over `Z`, or the dimension over `F_p`.
    pub betti: usize,
    /// Invariant factors greater than one (empty over a field).
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub coefficients: Coefficients,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyResult {
    /// Betti numbers (or field dimensions) by degree.
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    /// Betti numbers with trailing zero degrees removed.
    pub fn betti_trimmed(&self) -> Vec<usize> {
        let mut b = self.betti();
        while b.len() > 1 && b.last() == Some(&0) {
            b.pop();
        }
        b
    }

    pub fn torsion(&self, degree: usize) -> &[u64] {
        self.degrees.get(degree).map_or(&[], |d| &d.torsion)
    }

    pub fn all_torsion(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.degrees
            .iter()
            .flat_map(|d| d.torsion.iter().map(move |&t| (d.degree, t)))
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.iter().all(|d| d.torsion.is_empty())
    }

    /// Same homology as a point.
    pub fn is_point(&self) -> bool {
        self.degrees
            .iter()
            .all(|d| d.torsion.is_empty() && d.betti == usize::from(d.degree == 0))
            && !self.degrees.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|d| {
                if d.degree % 2 == 0 {
                    d.betti as i64
                } else {
                    -(d.betti as i64)
                }
            })
            .sum()
    }

    /// Describes each group, e.g. `["Z", "Z/5", "0"]`.
    pub fn describe(&self) -> Vec<String> {
        self.degrees
            .iter()
            .map(|d| {
                let free = match self.coefficients {
                    Coefficients::Integers => "Z".to_string(),
                    Coefficients::Prime(p) => format!("F{p}"),
                };
                let mut parts = Vec::new();
                match d.betti {
                    0 => {}
                    1 => parts.push(free),
                    b => parts.push(format!("{free}^{b}")),
                }
                parts.extend(d.torsion.iter().map(|t| format!("Z/{t}")));
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join("+")
                }
            })
            .collect()
    }

    /// CSV with header `degree,betti,torsion`; torsion factors joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,betti,torsion\n");
        for d in &self.degrees {
            let t: Vec<String> = d.torsion.iter().map(u64::to_string).collect();
            out.push_str(&format!("{},{},{}\n", d.degree, d.betti, t.join(";")));
        }
        out
    }
}

/// Ranks and invariant factors of each boundary map over `Z`.
fn integral_data(complex: &ChainComplex) -> Result<Vec<(usize, Vec<u64>)>> {
    (0..complex.len())
        .into_par_iter()
        .map(|d| {
            let factors = snf::invariant_factors(&complex.boundaries[d]);
            let rank = factors.len();
            let torsion = factors
                .into_iter()
                .filter(|f| !f.is_one())
                .map(|f| {
                    f.to_u64()
                        .ok_or_else(|| Error::Overflow(format!("torsion coefficient {f} in degree {d}")))
                })
                .collect::<Result<Vec<u64>>>()?;
            Ok((rank, torsion))
        })
        .collect()
}

/// Cellular homology with the given coefficients.
pub fn homology(complex: &ChainComplex, coefficients: Coefficients) -> Result<HomologyResult> {
    let top = complex.len();
    let (ranks, torsion): (Vec<usize>, Vec<Vec<u64>>) = match coefficients {
        Coefficients::Integers => integral_data(complex)?.into_iter().unzip(),
        Coefficients::Prime(p) => {
            modp::check_prime(p)?;
            let ranks = (0..top)
                .into_par_iter()
                .map(|d| modp::rank_mod_p(&complex.boundaries[d], p))
                .collect::<Result<Vec<usize>>>()?;
            let n = ranks.len();
            (ranks, vec![Vec::new(); n])
        }
    };
    let degrees = (0..top)
        .map(|d| {
            let next = ranks.get(d + 1).copied().unwrap_or(0);
            DegreeHomology {
                degree: d,
                betti: complex.dims[d] - ranks[d] - next,
                // invariant factors of ∂_{d+1} are the torsion of H_d
                torsion: torsion.get(d + 1).cloned().unwrap_or_default(),
            }
        })
        .collect();
    Ok(HomologyResult { coefficients, degrees })
}

/// Checks `dim H_d(F_p) = b_d + #{p | t in H_d} + #{p | t in H_{d-1}}`.
pub fn universal_coefficients_hold(integral: &HomologyResult, modp: &HomologyResult) -> bool {
    let Coefficients::Prime(p) = modp.coefficients else {
        return false;
    };
    if integral.coefficients != Coefficients::Integers || integral.degrees.len() != modp.degrees.len() {
        return false;
    }
    let divisible = |d: usize| integral.torsion(d).iter().filter(|&&t| t % p == 0).count();
    modp.degrees.iter().all(|m| {
        let d = m.degree;
        let below = if d == 0 { 0 } else { divisible(d - 1) };
        m.betti == integral.degrees[d].betti + divisible(d) + below
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> ChainComplex {
        // two vertices, two edges
        let d1 = SparseMatrix::from_dense(&[vec![-1, 1], vec![1, -1]]);
        ChainComplex::new(vec![2, 2], vec![d1]).unwrap()
    }

    #[test]
    fn circle_homology() {
        let h = homology(&circle(), Coefficients::Integers).unwrap();
        assert_eq!(h.betti(), vec![1, 1]);
        assert!(h.is_torsion_free());
        assert_eq!(circle().euler_characteristic(), 0);
    }

    #[test]
    fn point_and_empty() {
        let point = ChainComplex::new(vec![1], vec![]).unwrap();
        let h = homology(&point, Coefficients::Integers).unwrap();
        assert!(h.is_point());
        let empty = ChainComplex::empty();
        assert!(homology(&empty, Coefficients::Prime(2)).unwrap().degrees.is_empty());
        // a degree with no cells
        let gap = ChainComplex::new(vec![1, 0, 0], vec![SparseMatrix::zero(1, 0), SparseMatrix::zero(0, 0)]).unwrap();
        assert_eq!(homology(&gap, Coefficients::Integers).unwrap().betti(), vec![1, 0, 0]);
    }

    #[test]
    fn projective_plane_torsion() {
        // RP^2: one cell in each degree, ∂_2 = 2
        let c = ChainComplex::new(
            vec![1, 1, 1],
            vec![SparseMatrix::zero(1, 1), SparseMatrix::from_dense(&[vec![2]])],
        )
        .unwrap();
        let z = homology(&c, Coefficients::Integers).unwrap();
        assert_eq!(z.betti(), vec![1, 0, 0]);
        assert_eq!(z.torsion(1), &[2]);
        assert_eq!(z.describe(), vec!["Z", "Z/2", "0"]);
        let f2 = homology(&c, Coefficients::Prime(2)).unwrap();
        assert_eq!(f2.betti(), vec![1, 1, 1]);
        let f3 = homology(&c, Coefficients::Prime(3)).unwrap();
        assert_eq!(f3.betti(), vec![1, 0, 0]);
        assert!(universal_coefficients_hold(&z, &f2));
        assert!(universal_coefficients_hold(&z, &f3));
    }

    #[test]
    fn square_zero_violation_is_named() {
        let records = vec![
            vec![CellRecord {
                label: "v".into(),
                facets: vec![],
            }],
            vec![CellRecord {
                label: "e".into(),
                facets: vec![(0, 1)],
            }],
            vec![CellRecord {
                label: "f".into(),
                facets: vec![(0, 1)],
            }],
        ];
        match assemble(records) {
            Err(Error::BoundarySquare { cell, face, .. }) => {
                assert_eq!(cell, "f");
                assert_eq!(face, "v");
            }
            other => panic!("expected a boundary error, got {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let bad = ChainComplex::new(vec![2, 2], vec![SparseMatrix::zero(3, 2)]);
        assert!(matches!(bad, Err(Error::Shape { .. })));
    }

    #[test]
    fn cacti_low_n() {
        let based = cacti_complex(2, Shape::Linear).unwrap();
        assert_eq!(based.dims(), &[2, 2]);
        assert_eq!(homology(&based, Coefficients::Integers).unwrap().betti(), vec![1, 1]);
        let unbased = cacti_complex(3, Shape::Cyclic).unwrap();
        assert_eq!(unbased.dims(), &[2, 3]);
        let h = homology(&unbased, Coefficients::Integers).unwrap();
        assert_eq!(h.betti(), vec![1, 2]);
        assert!(h.is_torsion_free());
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!("z".parse::<Coefficients>().unwrap(), Coefficients::Integers);
        assert_eq!("F3".parse::<Coefficients>().unwrap(), Coefficients::Prime(3));
        assert_eq!("f5".parse::<Coefficients>().unwrap(), Coefficients::Prime(5));
        assert!("f4".parse::<Coefficients>().is_err());
        assert!("q".parse::<Coefficients>().is_err());
    }

    #[test]
    fn json_shape() {
        let c = ChainComplex::new(
            vec![1, 1, 1, 1],
            vec![
                SparseMatrix::zero(1, 1),
                SparseMatrix::from_dense(&[vec![3]]),
                SparseMatrix::zero(1, 1),
            ],
        )
        .unwrap();
        let h = homology(&c, Coefficients::Integers).unwrap();
        let json = serde_json::to_string(&h.degrees[1]).unwrap();
        assert_eq!(json, r#"{"degree":1,"betti":0,"torsion":[3]}"#);
        let all = serde_json::to_string(&h).unwrap();
        assert!(all.starts_with(r#"{"coefficients":"Z","degrees":["#));
        assert_eq!(h.to_csv().lines().nth(2), Some("1,0,3"));
    }
}
