//! Cells of the cacti complexes.
//!
//! A cell of the based complex `C_n` is a word `(X_1, ..., X_l)` over the lobe
//! labels `1..=n` that uses every label, never repeats a label in adjacent
//! positions and contains no subsequence `(i, j, i, j)` with `i != j`. The cell
//! is a product of simplices `prod_i Delta^(m_i - 1)`, where `m_i` counts the
//! occurrences of label `i`, so its dimension is `l - n`.
//!
//! Unbased cells (the complex `C_n / S^1`) are the same words read cyclically.
//! They are stored as their lexicographically least rotation.

use std::collections::HashMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest lobe count accepted by the enumerators.
pub const MAX_LOBES: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Based cacti: the word is read from the basepoint.
    Linear,
    /// Unbased cacti: the word is read up to rotation.
    Cyclic,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Linear => "linear",
            Shape::Cyclic => "cyclic",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One open cell of a cacti complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CactusCell {
    word: Vec<u8>,
    shape: Shape,
    n: u8,
}

/// A codimension-one face together with the position deleted from the stored
/// word and the incidence number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub cell: CactusCell,
    pub position: usize,
    pub sign: i8,
}

impl CactusCell {
    /// Validates `word` and stores it (canonically rotated when cyclic).
    pub fn new(word: Vec<u8>, shape: Shape, n: u8) -> Result<Self> {
        if !is_admissible(&word, shape, n)? {
            return Err(Error::Inadmissible {
                word,
                shape: shape.name(),
                n,
            });
        }
        Ok(Self::from_admissible(word, shape, n))
    }

    pub(crate) fn from_admissible(word: Vec<u8>, shape: Shape, n: u8) -> Self {
        let word = match shape {
            Shape::Linear => word,
            Shape::Cyclic => canonical_rotation(&word).0,
        };
        CactusCell { word, shape, n }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.word.len() - self.n as usize
    }

    /// `m_i` for `i = 1..=n`, indexed from zero.
    pub fn multiplicities(&self) -> Vec<usize> {
        multiplicities(&self.word, self.n)
    }

    /// Codimension-one faces, one per occurrence of a label that occurs at
    /// least twice.
    ///
    /// Orientation: simplex factors are ordered by ascending label and the
    /// coordinates of a factor by occurrence position in the stored word.
    /// Deleting occurrence `k` of label `i` carries the sign
    /// `(-1)^(sum_{j<i} (m_j - 1) + k)`. Cyclic faces are re-rotated to canonical
    /// form, which cyclically shifts the coordinates of each factor; the parity
    /// of that shift is folded into the sign.
    pub fn facets(&self) -> Vec<Facet> {
        let mults = self.multiplicities();
        let offsets = factor_offsets(&mults);
        let mut seen = vec![0usize; self.n as usize];
        let mut out = Vec::new();
        for (position, &label) in self.word.iter().enumerate() {
            let i = label as usize - 1;
            let k = seen[i];
            seen[i] += 1;
            if mults[i] < 2 {
                continue;
            }
            let mut sign: i8 = if (offsets[i] + k).is_multiple_of(2) { 1 } else { -1 };
            let mut face = self.word.clone();
            face.remove(position);
            let word = match self.shape {
                Shape::Linear => face,
                Shape::Cyclic => {
                    let (canonical, shift) = canonical_rotation(&face);
                    if rotation_parity(&face, shift, self.n) {
                        sign = -sign;
                    }
                    canonical
                }
            };
            out.push(Facet {
                cell: CactusCell {
                    word,
                    shape: self.shape,
                    n: self.n,
                },
                position,
                sign,
            });
        }
        out
    }

    /// Applies `perm` to every label.
    pub fn relabel(&self, perm: &Permutation) -> CactusCell {
        assert_eq!(perm.len(), self.n as usize, "permutation size must match lobe count");
        let word: Vec<u8> = self.word.iter().map(|&x| perm.apply(x)).collect();
        Self::from_admissible(word, self.shape, self.n)
    }

    /// Orientation sign of the cellular map `relabel(perm)`, relative to the
    /// stored orientations of the source and target cells.
    ///
    /// Factor `i` (a simplex on the `m_i` occurrences of `i`) is carried to
    /// factor `perm(i)`; the sign is the product of the vertex permutations
    /// inside each factor and the reordering of factors of dimensions `m_i - 1`.
    pub fn relabel_sign(&self, perm: &Permutation) -> i8 {
        let n = self.n as usize;
        let mapped: Vec<u8> = self.word.iter().map(|&x| perm.apply(x)).collect();
        let shift = match self.shape {
            Shape::Linear => 0,
            Shape::Cyclic => canonical_rotation(&mapped).1,
        };
        let l = mapped.len();
        // occurrence index of every position within its factor, source and target
        let mut source_occ = vec![0usize; l];
        let mut seen = vec![0usize; n];
        for (t, &x) in self.word.iter().enumerate() {
            source_occ[t] = seen[x as usize - 1];
            seen[x as usize - 1] += 1;
        }
        let mut target_occ = vec![0usize; l];
        let mut seen = vec![0usize; n];
        for s in 0..l {
            let t = (s + shift) % l;
            let x = mapped[t] as usize - 1;
            target_occ[t] = seen[x];
            seen[x] += 1;
        }
        let mults = self.multiplicities();
        let mut odd = false;
        for i in 0..n {
            let mut sigma = vec![0usize; mults[i]];
            for t in (0..l).filter(|&t| self.word[t] as usize == i + 1) {
                sigma[source_occ[t]] = target_occ[t];
            }
            odd ^= permutation_is_odd(&sigma);
        }
        for i in 0..n {
            for j in i + 1..n {
                let inverted = perm.apply(i as u8 + 1) > perm.apply(j as u8 + 1);
                if inverted && (mults[i] - 1) % 2 == 1 && (mults[j] - 1) % 2 == 1 {
                    odd = !odd;
                }
            }
        }
        if odd {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for CactusCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.shape == Shape::Linear { '(' } else { '<' };
        let close = if self.shape == Shape::Linear { ')' } else { '>' };
        write!(f, "{open}")?;
        for (i, x) in self.word.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "{close}")
    }
}

#[derive(Serialize, Deserialize)]
struct CellRepr {
    word: Vec<u8>,
    shape: Shape,
    n: u8,
    dim: usize,
}

impl Serialize for CactusCell {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CellRepr {
            word: self.word.clone(),
            shape: self.shape,
            n: self.n,
            dim: self.dim(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CactusCell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = CellRepr::deserialize(deserializer)?;
        let cell = CactusCell::new(repr.word, repr.shape, repr.n).map_err(D::Error::custom)?;
        if cell.dim() != repr.dim {
            return Err(D::Error::custom(format!(
                "dim {} does not match word length (expected {})",
                repr.dim,
                cell.dim()
            )));
        }
        Ok(cell)
    }
}

/// A permutation of the lobe labels `1..=n`, stored as the image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u8).collect())
    }

    /// `images[i - 1]` is the image of label `i`.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &x in &images {
            if x == 0 || x as usize > n || hit[x as usize - 1] {
                return Err(Error::Permutation(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
            hit[x as usize - 1] = true;
        }
        Ok(Permutation(images))
    }

    /// Product of cycles, e.g. `from_cycles(4, &[&[1, 2, 3, 4]])` is `(1234)`.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Result<Self> {
        let mut images: Vec<u8> = (1..=n as u8).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x as usize > n || used[x as usize - 1] {
                    return Err(Error::Permutation(format!("bad cycle {cycle:?} for n = {n}")));
                }
                used[x as usize - 1] = true;
                images[x as usize - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn apply(&self, label: u8) -> u8 {
        self.0[label as usize - 1]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.apply(x)).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize - 1] = i as u8 + 1;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// All `n!` permutations in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<u8> = (1..=n as u8).collect();
        loop {
            out.push(Permutation(current.clone()));
            // next lexicographic permutation
            let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 1..=n as u8 {
            if seen[start as usize - 1] || self.apply(start) == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            loop {
                seen[x as usize - 1] = true;
                write!(f, "{x}")?;
                x = self.apply(x);
                if x == start {
                    break;
                }
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "id")?;
        }
        Ok(())
    }
}

/// Rotation/relabelling pairs `(r, π)` with `rotate(word, r) = relabel(word, π)`,
/// where `rotate(w, r)[t] = w[t + r]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledPermutationStabilizer {
    pub elements: Vec<(usize, Permutation)>,
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl LabeledPermutationStabilizer {
    pub fn of(cell: &CactusCell) -> Self {
        let elements = match cell.shape {
            Shape::Cyclic => rotation_stabilizer(&cell.word, cell.n),
            // a based word has no rotations besides the identity
            Shape::Linear => vec![(0, Permutation::identity(cell.n as usize))],
        };
        LabeledPermutationStabilizer { elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// An orbit of the relabelling action on a set of cells.
#[derive(Clone, Debug, Serialize)]
pub struct CellOrbit {
    pub representative: CactusCell,
    pub size: usize,
    pub stabilizer: LabeledPermutationStabilizer,
}

/// Checks the admissibility conditions for `word` as a cactus word on `n` lobes.
pub fn is_admissible(word: &[u8], shape: Shape, n: u8) -> Result<bool> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    for &x in word {
        if x == 0 || x > n {
            return Err(Error::LabelOutOfRange {
                label: x as u32,
                n: n as u32,
            });
        }
    }
    if multiplicities(word, n).contains(&0) {
        return Ok(false);
    }
    if word.windows(2).any(|w| w[0] == w[1]) {
        return Ok(false);
    }
    if shape == Shape::Cyclic && word.len() > 1 && word[0] == word[word.len() - 1] {
        return Ok(false);
    }
    // (i, j, i, j): restrict to {i, j}, collapse runs, count alternations. A
    // cyclic word is admissible exactly when the linear word is and its ends
    // differ, since an alternation of length <= 3 stays below 4 cyclically.
    for i in 1..=n {
        for j in (i + 1)..=n {
            let mut len = 0;
            let mut last = 0;
            for &x in word {
                if (x == i || x == j) && x != last {
                    len += 1;
                    last = x;
                }
            }
            if len >= 4 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All cells of a cacti complex, grouped by dimension, sorted within each
/// dimension.
#[derive(Clone, Debug)]
pub struct CellEnumeration {
    pub n: u8,
    pub shape: Shape,
    pub by_dim: Vec<Vec<CactusCell>>,
    index: Vec<HashMap<Vec<u8>, usize>>,
}

impl CellEnumeration {
    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn top_dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CactusCell> {
        self.by_dim.iter().flatten()
    }

    /// Position of the cell with this (stored) word inside its dimension.
    pub fn index_of(&self, cell: &CactusCell) -> Option<usize> {
        self.index.get(cell.dim())?.get(&cell.word).copied()
    }

    pub fn max_word_len(&self) -> usize {
        self.iter().map(CactusCell::len).max().unwrap_or(0)
    }
}

/// Enumerates every cell of `C_n` (`Linear`) or `C_n / S^1` (`Cyclic`).
///
/// Depth-first extension of words, pruning as soon as a pair of labels
/// alternates four times.
pub fn enumerate_cells(n: usize, shape: Shape) -> Result<CellEnumeration> {
    if n == 0 || n > MAX_LOBES {
        return Err(Error::LobeCount { n, max: MAX_LOBES });
    }
    let mut words = Vec::new();
    let mut search = WordSearch::new(n);
    match shape {
        Shape::Linear => {
            for first in 1..=n as u8 {
                search.extend(first, shape, &mut words);
            }
        }
        // the least rotation starts with the least label
        Shape::Cyclic => search.extend(1, shape, &mut words),
    }
    let max_len = words.iter().map(Vec::len).max().unwrap_or(0);
    let bound = match (shape, n) {
        (Shape::Linear, _) => 2 * n - 1,
        (Shape::Cyclic, 1) => 1,
        (Shape::Cyclic, _) => 2 * n - 2,
    };
    assert!(
        max_len <= bound,
        "found an admissible word of length {max_len} > {bound}"
    );

    let top = max_len - n;
    let mut by_dim: Vec<Vec<CactusCell>> = vec![Vec::new(); top + 1];
    for w in words {
        let d = w.len() - n;
        by_dim[d].push(CactusCell {
            word: w,
            shape,
            n: n as u8,
        });
    }
    for cells in &mut by_dim {
        cells.sort();
    }
    let index = by_dim
        .iter()
        .map(|cells| cells.iter().enumerate().map(|(i, c)| (c.word.clone(), i)).collect())
        .collect();
    Ok(CellEnumeration {
        n: n as u8,
        shape,
        by_dim,
        index,
    })
}

struct WordSearch {
    n: usize,
    word: Vec<u8>,
    counts: Vec<usize>,
    distinct: usize,
    // alternation length and last letter of the restriction to each pair
    alt: Vec<(u8, u8)>,
}

impl WordSearch {
    fn new(n: usize) -> Self {
        WordSearch {
            n,
            word: Vec::with_capacity(2 * n),
            counts: vec![0; n + 1],
            distinct: 0,
            alt: vec![(0, 0); (n + 1) * (n + 1)],
        }
    }

    fn extend(&mut self, letter: u8, shape: Shape, out: &mut Vec<Vec<u8>>) {
        if self.word.last() == Some(&letter) {
            return;
        }
        let n = self.n;
        let saved: Vec<(u8, u8)> = (1..=n as u8)
            .filter(|&y| y != letter)
            .map(|y| self.alt[pair_index(letter, y, n)])
            .collect();
        let mut ok = true;
        for y in 1..=n as u8 {
            if y == letter {
                continue;
            }
            let slot = &mut self.alt[pair_index(letter, y, n)];
            if slot.0 == 0 || slot.1 == y {
                slot.0 += 1;
                slot.1 = letter;
                if slot.0 >= 4 {
                    ok = false;
                }
            }
        }
        if ok {
            self.word.push(letter);
            self.counts[letter as usize] += 1;
            if self.counts[letter as usize] == 1 {
                self.distinct += 1;
            }
            if self.distinct == n {
                let emit = match shape {
                    Shape::Linear => true,
                    Shape::Cyclic => (self.word.len() == 1 || self.word[0] != letter) && is_least_rotation(&self.word),
                };
                if emit {
                    out.push(self.word.clone());
                }
            }
            for next in 1..=n as u8 {
                self.extend(next, shape, out);
            }
            if self.counts[letter as usize] == 1 {
                self.distinct -= 1;
            }
            self.counts[letter as usize] -= 1;
            self.word.pop();
        }
        let mut k = 0;
        for y in 1..=n as u8 {
            if y != letter {
                self.alt[pair_index(letter, y, n)] = saved[k];
                k += 1;
            }
        }
    }
}

fn pair_index(a: u8, b: u8, n: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    lo as usize * (n + 1) + hi as usize
}

/// Orbits of the relabelling action on `cells`, with the labelled stabilizer
/// of each representative.
///
/// The representative of an orbit is its least word. `cells` should be closed
/// under relabelling (e.g. a full enumeration); orbit sizes count members of
/// `cells` only.
pub fn orbits_and_stabilizers(cells: &[CactusCell], n: usize) -> Vec<CellOrbit> {
    let mut groups: HashMap<CactusCell, usize> = HashMap::new();
    for cell in cells {
        assert_eq!(cell.n as usize, n, "cell on a different lobe count");
        let rep = orbit_representative(cell);
        *groups.entry(rep).or_insert(0) += 1;
    }
    let mut orbits: Vec<CellOrbit> = groups
        .into_iter()
        .map(|(representative, size)| {
            let stabilizer = LabeledPermutationStabilizer::of(&representative);
            CellOrbit {
                representative,
                size,
                stabilizer,
            }
        })
        .collect();
    orbits.sort_by(|a, b| {
        (a.representative.dim(), &a.representative.word).cmp(&(b.representative.dim(), &b.representative.word))
    });
    orbits
}

/// The least word in the relabelling orbit of `cell`.
pub fn orbit_representative(cell: &CactusCell) -> CactusCell {
    let word = match cell.shape {
        Shape::Cyclic => orbit_normal_form(&cell.word).0,
        Shape::Linear => first_occurrence_relabel(&cell.word).0,
    };
    CactusCell {
        word,
        shape: cell.shape,
        n: cell.n,
    }
}

pub(crate) fn multiplicities(word: &[u8], n: u8) -> Vec<usize> {
    let mut m = vec![0usize; n as usize];
    for &x in word {
        m[x as usize - 1] += 1;
    }
    m
}

/// `offsets[i] = sum_{j < i} (m_j - 1)`: first coordinate slot of factor `i`
/// in the product orientation.
fn factor_offsets(mults: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(mults.len());
    let mut acc = 0;
    for &m in mults {
        offsets.push(acc);
        acc += m.saturating_sub(1);
    }
    offsets
}

/// Least rotation of a cyclic word and the shift `s` with
/// `least[t] = word[(t + s) % l]`.
pub fn canonical_rotation(word: &[u8]) -> (Vec<u8>, usize) {
    let l = word.len();
    let mut best = 0;
    for s in 1..l {
        if rotation_less(word, s, best) {
            best = s;
        }
    }
    ((0..l).map(|t| word[(t + best) % l]).collect(), best)
}

fn rotation_less(word: &[u8], a: usize, b: usize) -> bool {
    let l = word.len();
    for t in 0..l {
        let x = word[(t + a) % l];
        let y = word[(t + b) % l];
        if x != y {
            return x < y;
        }
    }
    false
}

fn is_least_rotation(word: &[u8]) -> bool {
    (1..word.len()).all(|s| !rotation_less(word, s, 0))
}

/// Parity of the coordinate permutation caused by rotating `word` by `shift`:
/// factor `i` is cyclically shifted by the number of its occurrences among the
/// first `shift` letters, which has sign `(-1)^(s_i (m_i - 1))`.
pub(crate) fn rotation_parity(word: &[u8], shift: usize, n: u8) -> bool {
    let mults = multiplicities(word, n);
    let moved = multiplicities_prefix(&word[..shift], n);
    let total: usize = moved.iter().zip(&mults).map(|(s, m)| s * (m - 1)).sum();
    total % 2 == 1
}

fn multiplicities_prefix(prefix: &[u8], n: u8) -> Vec<usize> {
    let mut m = vec![0usize; n as usize];
    for &x in prefix {
        m[x as usize - 1] += 1;
    }
    m
}

/// Relabels so that labels appear in order of first occurrence. Returns the
/// relabelled word and the relabelling (old label -> new label).
fn first_occurrence_relabel(word: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let n = *word.iter().max().unwrap_or(&0) as usize;
    let mut map = vec![0u8; n + 1];
    let mut next = 1u8;
    let out = word
        .iter()
        .map(|&x| {
            if map[x as usize] == 0 {
                map[x as usize] = next;
                next += 1;
            }
            map[x as usize]
        })
        .collect();
    (out, map)
}

/// Least word over all rotations and relabellings of a cyclic word.
///
/// Returns `(rep, r, σ)` with `rep[t] = σ(word[(t + r) % l])`.
pub fn orbit_normal_form(word: &[u8]) -> (Vec<u8>, usize, Permutation) {
    let l = word.len();
    let mut best: Option<(Vec<u8>, usize, Vec<u8>)> = None;
    let mut rotated = vec![0u8; l];
    for r in 0..l {
        for t in 0..l {
            rotated[t] = word[(t + r) % l];
        }
        let (candidate, map) = first_occurrence_relabel(&rotated);
        if best.as_ref().is_none_or(|(b, _, _)| candidate < *b) {
            best = Some((candidate, r, map));
        }
    }
    let (rep, r, map) = best.expect("nonempty word");
    let sigma = Permutation(map[1..].to_vec());
    (rep, r, sigma)
}

fn rotation_stabilizer(word: &[u8], n: u8) -> Vec<(usize, Permutation)> {
    let l = word.len();
    let n = n as usize;
    let mut out = Vec::new();
    'rot: for r in 0..l {
        let mut images = vec![0u8; n];
        for t in 0..l {
            let from = word[t] as usize - 1;
            let to = word[(t + r) % l];
            if images[from] == 0 {
                images[from] = to;
            } else if images[from] != to {
                continue 'rot;
            }
        }
        if let Ok(p) = Permutation::from_images(images) {
            out.push((r, p));
        }
    }
    out
}

pub(crate) fn permutation_is_odd(sigma: &[usize]) -> bool {
    let mut seen = vec![false; sigma.len()];
    let mut transpositions = 0;
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = sigma[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}
