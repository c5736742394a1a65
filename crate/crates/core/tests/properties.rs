use mquot::cells::{enumerate_cells, Permutation, Shape};
use mquot::chain::enumeration_complex;
use mquot::cohen::basis;
use mquot::equivariant::GroupAction;
use mquot::modp::rank_mod_p;
use mquot::snf::{invariant_factors, invariant_factors_dense};
use mquot::SparseMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Determinant by cofactor expansion.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from gcds of minors: `s_k = d_k / d_(k-1)`.
fn factors_from_minors(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=nr.min(nc) {
        let mut g = BigInt::zero();
        for rs in subsets(nr, k) {
            for cs in subsets(nc, k) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(rows[r][c])).collect())
                    .collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn unimodular_shuffle(rows: &mut [Vec<i64>], ops: &[(u8, usize, usize, i64)]) {
    let nr = rows.len();
    let nc = rows[0].len();
    for &(kind, a, b, k) in ops {
        match kind % 4 {
            0 => {
                let (i, j) = (a % nr, b % nr);
                if i != j {
                    for c in 0..nc {
                        rows[j][c] += k * rows[i][c];
                    }
                }
            }
            1 => {
                let (i, j) = (a % nc, b % nc);
                if i != j {
                    for row in rows.iter_mut() {
                        row[j] += k * row[i];
                    }
                }
            }
            2 => rows.swap(a % nr, b % nr),
            _ => {
                let c = a % nc;
                for row in rows.iter_mut() {
                    row[c] = -row[c];
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn snf_matches_determinantal_divisors(rows in small_matrix()) {
        prop_assert_eq!(invariant_factors_dense(&rows), factors_from_minors(&rows));
    }

    #[test]
    fn snf_invariant_under_unimodular_operations(
        rows in small_matrix(),
        ops in prop::collection::vec((any::<u8>(), 0usize..8, 0usize..8, -3i64..=3), 0..12),
    ) {
        let mut shuffled = rows.clone();
        unimodular_shuffle(&mut shuffled, &ops);
        prop_assert_eq!(invariant_factors_dense(&rows), invariant_factors_dense(&shuffled));
    }

    #[test]
    fn factors_divide_in_sequence(rows in small_matrix()) {
        let f = invariant_factors_dense(&rows);
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(f.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn rank_mod_p_counts_factors_prime_to_p(rows in small_matrix(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let f = invariant_factors_dense(&rows);
        let expected = f.iter().filter(|x| !(*x % BigInt::from(p)).is_zero()).count();
        prop_assert_eq!(rank_mod_p(&SparseMatrix::from_dense(&rows), p).unwrap(), expected);
    }

    #[test]
    fn sparse_path_agrees_on_block_diagonals(blocks in prop::collection::vec(small_matrix(), 60..90)) {
        // big enough to take the unit-elimination route
        let nrows: usize = blocks.iter().map(Vec::len).sum();
        let mut triplets = Vec::new();
        let (mut r0, mut c0) = (0, 0);
        let mut expected = Vec::new();
        for b in &blocks {
            for (i, row) in b.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if v != 0 {
                        triplets.push((r0 + i, c0 + j, v));
                    }
                }
            }
            expected.extend(invariant_factors_dense(b));
            r0 += b.len();
            c0 += b[0].len();
        }
        let m = SparseMatrix::from_triplets(nrows, c0, &triplets);
        prop_assume!(m.nrows() >= 200 || m.ncols() >= 200);
        let got = invariant_factors(&m);
        // same rank, same product of factors, and a divisor chain
        prop_assert_eq!(got.len(), expected.len());
        let prod_got: BigInt = got.iter().product();
        let prod_expected: BigInt = expected.iter().product();
        prop_assert_eq!(prod_got, prod_expected);
        for w in got.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }
}

/// Coefficients `[weight][degree]` of
/// `∏_even 1/(1 - s^w t^d) · ∏_odd (1 + s^w t^d)` up to weight `max_w`.
fn generating_function(p: u64, max_w: usize) -> Vec<Vec<usize>> {
    let max_d = 4 * max_w + 2;
    let mut series = vec![vec![0usize; max_d + 1]; max_w + 1];
    series[0][0] = 1;
    // (weight, degree) of every generator
    let mut gens = vec![(1usize, 0usize)];
    if p == 2 {
        gens.extend((1..8).map(|i| (1usize << i, (1usize << i) - 1)));
    } else {
        gens.push((2, 1));
        for i in 1..4u32 {
            let w = 2 * (p as usize).pow(i);
            gens.extend([(w, w - 1), (w, w - 2)]);
        }
    }
    for (w, d) in gens.into_iter().filter(|&(w, _)| w <= max_w) {
        let exterior = p != 2 && d % 2 == 1;
        let mut next = series.clone();
        if exterior {
            for a in 0..=max_w {
                for b in 0..=max_d {
                    if a + w <= max_w && b + d <= max_d {
                        next[a + w][b + d] += series[a][b];
                    }
                }
            }
        } else {
            // multiply by 1/(1 - x): running sum along the generator's direction
            for a in 0..=max_w {
                for b in 0..=max_d {
                    if a >= w && b >= d {
                        next[a][b] = series[a][b] + next[a - w][b - d];
                    }
                }
            }
        }
        series = next;
    }
    series
}

#[test]
fn cohen_basis_matches_generating_function() {
    for p in [2u64, 3, 5] {
        let gf = generating_function(p, 12);
        for (n, row) in gf.iter().enumerate() {
            let b = basis(n, p, None).unwrap();
            let mut counts = vec![0usize; row.len()];
            for m in &b {
                counts[m.degree()] += 1;
                assert_eq!(m.weight(), n);
            }
            assert_eq!(&counts, row, "n={n} p={p}");
            let mut sorted = b.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), b.len(), "duplicates for n={n} p={p}");
        }
    }
}

#[test]
fn relabelling_is_cellular_on_based_and_unbased_cells() {
    for n in 2..=4 {
        for shape in [Shape::Linear, Shape::Cyclic] {
            let cells = enumerate_cells(n, shape).unwrap();
            let complex = enumeration_complex(&cells).unwrap();
            let elements = Permutation::all(n)
                .iter()
                .map(|perm| {
                    cells
                        .by_dim
                        .iter()
                        .map(|layer| {
                            layer
                                .iter()
                                .map(|c| (cells.index_of(&c.relabel(perm)).unwrap(), c.relabel_sign(perm)))
                                .collect()
                        })
                        .collect()
                })
                .collect();
            GroupAction::new(&complex, elements).unwrap_or_else(|e| panic!("n={n} {shape:?}: {e}"));
        }
    }
}
