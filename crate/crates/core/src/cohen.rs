//! The mod-p homology of unordered configurations in the plane, as a free
//! graded-commutative algebra graded by weight (number of points).
//!
//! Only the additive structure is modelled: monomial bases, the operator
//! `Δ` on the explicit formulas, its cokernel, and the equivariant series.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::chain::SparseMatrix;
use crate::error::{Error, Result};
use crate::modp::{check_prime, rank_mod_p};

/// A generator of `H_*(C(C); F_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// The point class `a`.
    Point,
    /// `[a,a]`, odd primes only.
    Bracket,
    /// `Q^i(a)` for `p = 2`, `Q^i[a,a]` for odd `p`.
    Dyer(u32),
    /// `βQ^i[a,a]`, odd primes only.
    Bockstein(u32),
}

impl Generator {
    pub fn degree(self, p: u64) -> usize {
        match self {
            Generator::Point => 0,
            Generator::Bracket => 1,
            Generator::Dyer(i) if p == 2 => (1usize << i) - 1,
            Generator::Dyer(i) => 2 * (p as usize).pow(i) - 1,
            Generator::Bockstein(i) => 2 * (p as usize).pow(i) - 2,
        }
    }

    pub fn weight(self, p: u64) -> usize {
        match self {
            Generator::Point => 1,
            Generator::Bracket => 2,
            Generator::Dyer(i) if p == 2 => 1usize << i,
            Generator::Dyer(i) | Generator::Bockstein(i) => 2 * (p as usize).pow(i),
        }
    }

    /// Exterior generators: odd degree and odd `p`.
    pub fn is_exterior(self, p: u64) -> bool {
        p != 2 && self.degree(p) % 2 == 1
    }

    pub fn name(self, p: u64) -> String {
        match self {
            Generator::Point => "a".into(),
            Generator::Bracket => "[a,a]".into(),
            Generator::Dyer(i) if p == 2 => format!("Q{i}(a)"),
            Generator::Dyer(i) => format!("Q{i}[a,a]"),
            Generator::Bockstein(i) => format!("bQ{i}[a,a]"),
        }
    }
}

/// All generators of weight at most `max_weight`, in a fixed order.
pub fn generators(p: u64, max_weight: usize) -> Result<Vec<Generator>> {
    check_prime(p)?;
    let mut out = vec![Generator::Point];
    if p == 2 {
        let mut i = 1;
        while Generator::Dyer(i).weight(p) <= max_weight {
            out.push(Generator::Dyer(i));
            i += 1;
        }
    } else {
        if max_weight >= 2 {
            out.push(Generator::Bracket);
        }
        let mut i = 1;
        while Generator::Dyer(i).weight(p) <= max_weight {
            out.push(Generator::Bockstein(i));
            out.push(Generator::Dyer(i));
            i += 1;
        }
    }
    Ok(out)
}

/// A monomial in the generators, with positive exponents, sorted by generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    p: u64,
    factors: Vec<(Generator, u32)>,
}

impl Monomial {
    pub fn one(p: u64) -> Self {
        Monomial { p, factors: Vec::new() }
    }

    pub fn new(p: u64, mut factors: Vec<(Generator, u32)>) -> Result<Self> {
        check_prime(p)?;
        factors.retain(|&(_, e)| e > 0);
        factors.sort();
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Unsupported(format!("generator {} repeated", w[0].0.name(p))));
            }
        }
        for &(g, e) in &factors {
            if g.is_exterior(p) && e > 1 {
                return Err(Error::Unsupported(format!("{} squares to zero", g.name(p))));
            }
            if p == 2 && matches!(g, Generator::Bracket | Generator::Bockstein(_)) {
                return Err(Error::Unsupported(format!(
                    "{} is not a generator for p = 2",
                    g.name(p)
                )));
            }
        }
        Ok(Monomial { p, factors })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.factors
    }

    pub fn exponent(&self, g: Generator) -> u32 {
        self.factors.iter().find(|f| f.0 == g).map_or(0, |f| f.1)
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|&(g, e)| g.degree(self.p) * e as usize).sum()
    }

    pub fn weight(&self) -> usize {
        self.factors.iter().map(|&(g, e)| g.weight(self.p) * e as usize).sum()
    }

    pub fn contains_bracket(&self) -> bool {
        self.exponent(Generator::Bracket) > 0
    }

    fn with_exponent(&self, g: Generator, e: u32) -> Monomial {
        let mut factors: Vec<(Generator, u32)> = self.factors.iter().copied().filter(|f| f.0 != g).collect();
        if e > 0 {
            factors.push((g, e));
        }
        factors.sort();
        Monomial { p: self.p, factors }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for &(g, e) in &self.factors {
            write!(f, "{}", g.name(self.p))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            name: String,
            degree: usize,
            weight: usize,
        }
        Repr {
            name: self.to_string(),
            degree: self.degree(),
            weight: self.weight(),
        }
        .serialize(serializer)
    }
}

/// Monomials of weight `n`, optionally restricted to one degree, sorted by
/// degree and then by exponents.
pub fn basis(n: usize, p: u64, degree: Option<usize>) -> Result<Vec<Monomial>> {
    let gens = generators(p, n)?;
    let mut out = Vec::new();
    let mut exps = vec![0u32; gens.len()];
    fill(&gens, p, 0, n, &mut exps, &mut out);
    if let Some(d) = degree {
        out.retain(|m| m.degree() == d);
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.factors.cmp(&a.factors)));
    Ok(out)
}

fn fill(gens: &[Generator], p: u64, at: usize, remaining: usize, exps: &mut [u32], out: &mut Vec<Monomial>) {
    if at == gens.len() {
        if remaining == 0 {
            let mut factors: Vec<(Generator, u32)> = gens
                .iter()
                .zip(exps.iter())
                .filter(|(_, &e)| e > 0)
                .map(|(&g, &e)| (g, e))
                .collect();
            factors.sort();
            out.push(Monomial { p, factors });
        }
        return;
    }
    let g = gens[at];
    let w = g.weight(p);
    let cap = if g.is_exterior(p) { 1 } else { u32::MAX };
    let mut e = 0u32;
    while e <= cap && e as usize * w <= remaining {
        exps[at] = e;
        fill(gens, p, at + 1, remaining - e as usize * w, exps, out);
        e += 1;
    }
    exps[at] = 0;
}

/// Dimensions of `H_d(C_n(C); F_p)` for `d = 0..` (trailing zeros trimmed).
pub fn fiber_dims(n: usize, p: u64) -> Result<Vec<usize>> {
    Ok(degree_counts(&basis(n, p, None)?))
}

fn degree_counts(monomials: &[Monomial]) -> Vec<usize> {
    let mut dims = Vec::new();
    for m in monomials {
        let d = m.degree();
        if dims.len() <= d {
            dims.resize(d + 1, 0);
        }
        dims[d] += 1;
    }
    dims
}

fn check_odd(p: u64) -> Result<()> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::Unsupported("Δ is only modelled for odd primes".into()));
    }
    Ok(())
}

/// `Δ(a^k x) = k(k-1) a^(k-2)[a,a] x` and `Δ(a^k [a,a] x) = 0`, where `x`
/// involves only the Dyer-Lashof generators. Returns `None` for zero.
pub fn delta(m: &Monomial, p: u64) -> Result<Option<(u64, Monomial)>> {
    check_odd(p)?;
    if m.p != p {
        return Err(Error::Unsupported(format!("monomial over F{} used with p = {p}", m.p)));
    }
    if m.contains_bracket() {
        return Ok(None);
    }
    let k = m.exponent(Generator::Point) as u64;
    let coefficient = (k * k.saturating_sub(1)) % p;
    if coefficient == 0 {
        return Ok(None);
    }
    let image = m
        .with_exponent(Generator::Point, (k - 2) as u32)
        .with_exponent(Generator::Bracket, 1);
    Ok(Some((coefficient, image)))
}

fn congruent_zero_or_one(n: usize, p: u64) -> bool {
    let r = n as u64 % p;
    r == 0 || r == 1
}

/// Dimensions of `coker Δ` by degree, as the span of monomials without the
/// bracket `[a,a]`. Refuses when `n ≡ 0, 1 mod p`, where that description
/// does not apply.
pub fn coker_delta_dims(n: usize, p: u64) -> Result<Vec<usize>> {
    check_odd(p)?;
    if congruent_zero_or_one(n, p) {
        return Err(Error::Hypothesis(format!(
            "n = {n} is 0 or 1 mod {p}; use the equivariant series instead"
        )));
    }
    let b = basis(n, p, None)?;
    let free: Vec<Monomial> = b.into_iter().filter(|m| !m.contains_bracket()).collect();
    Ok(degree_counts(&free))
}

/// Dimensions of `H_* / im Δ` computed from the rank of `Δ` on the whole
/// weight-`n` basis. Defined for every `n`.
pub fn coker_delta_brute_force(n: usize, p: u64) -> Result<Vec<usize>> {
    check_odd(p)?;
    let b = basis(n, p, None)?;
    let mut dims = degree_counts(&b);
    let top = dims.len();
    for d in 1..top {
        let source: Vec<&Monomial> = b.iter().filter(|m| m.degree() == d - 1).collect();
        let target: Vec<&Monomial> = b.iter().filter(|m| m.degree() == d).collect();
        let mut triplets = Vec::new();
        for (j, m) in source.iter().enumerate() {
            if let Some((c, image)) = delta(m, p)? {
                let i = target
                    .iter()
                    .position(|t| **t == image)
                    .ok_or_else(|| Error::Audit(format!("Δ({m}) = {image} is not a basis monomial")))?;
                triplets.push((i, j, c as i64));
            }
        }
        let rank = rank_mod_p(&SparseMatrix::from_triplets(target.len(), source.len(), &triplets), p)?;
        dims[d] -= rank;
    }
    while dims.len() > 1 && dims.last() == Some(&0) {
        dims.pop();
    }
    Ok(dims)
}

/// `Σ_j v(d - 2j)` for `d = 0..=max_degree`: tensoring with `F_p[c]`, `|c| = 2`.
pub fn tensor_with_polynomial(v: &[usize], max_degree: usize) -> Vec<usize> {
    (0..=max_degree)
        .map(|d| (0..=d / 2).map(|j| v.get(d - 2 * j).copied().unwrap_or(0)).sum())
        .collect()
}

fn padded(v: Vec<usize>, len: usize) -> Vec<usize> {
    let mut v = v;
    v.resize(len.max(v.len()), 0);
    v.truncate(len);
    v
}

/// Dimensions of `H_d^{S^1}(C_n(C); F_p)` for `d = 0..=max_degree`.
pub fn equivariant_series(n: usize, p: u64, max_degree: usize) -> Result<Vec<usize>> {
    check_prime(p)?;
    if p == 2 || congruent_zero_or_one(n, p) {
        Ok(tensor_with_polynomial(&fiber_dims(n, p)?, max_degree))
    } else {
        Ok(padded(coker_delta_dims(n, p)?, max_degree + 1))
    }
}

/// A class `b_k · x` in `H_*(C_q(C^*); F_p)`: the label generator of degree
/// `k` times a class of `C_{q-k}(C)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CstarClass {
    pub label_degree: usize,
    pub factor: Monomial,
}

impl CstarClass {
    pub fn degree(&self) -> usize {
        self.label_degree + self.factor.degree()
    }
}

impl fmt::Display for CstarClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut label = "b".to_string();
        for _ in 0..self.label_degree {
            label = format!("[{label},a]");
        }
        if self.factor.factors.is_empty() {
            write!(f, "{label}")
        } else {
            write!(f, "{label}·{}", self.factor)
        }
    }
}

pub fn cstar_basis(q: usize, p: u64) -> Result<Vec<CstarClass>> {
    let mut out = Vec::new();
    for k in 0..=q {
        for m in basis(q - k, p, None)? {
            out.push(CstarClass {
                label_degree: k,
                factor: m,
            });
        }
    }
    out.sort_by_key(CstarClass::degree);
    Ok(out)
}

/// Dimensions of `H_d(C_q(C^*); F_p)`.
pub fn cstar_homology(q: usize, p: u64) -> Result<Vec<usize>> {
    let mut dims = Vec::new();
    for c in cstar_basis(q, p)? {
        let d = c.degree();
        if dims.len() <= d {
            dims.resize(d + 1, 0);
        }
        dims[d] += 1;
    }
    Ok(dims)
}

/// The fixed points of `Z/p` acting on `C_n(C)` by rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedPoints {
    Empty,
    /// Homeomorphic to `C_q(C^*)`.
    Cstar {
        q: usize,
    },
}

pub fn fixed_points(n: usize, p: u64) -> Result<FixedPoints> {
    check_prime(p)?;
    let p = p as usize;
    Ok(if n.is_multiple_of(p) {
        FixedPoints::Cstar { q: n / p }
    } else if n % p == 1 {
        FixedPoints::Cstar { q: (n - 1) / p }
    } else {
        FixedPoints::Empty
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[Monomial]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn five_points_mod_three() {
        let b = basis(5, 3, None).unwrap();
        assert_eq!(names(&b), ["a^5", "a^3[a,a]"]);
        assert_eq!(b.iter().map(Monomial::degree).collect::<Vec<_>>(), [0, 1]);
    }

    #[test]
    fn two_points_mod_two() {
        let b = basis(2, 2, None).unwrap();
        assert_eq!(names(&b), ["a^2", "Q1(a)"]);
        assert_eq!(fiber_dims(2, 2).unwrap(), [1, 1]);
    }

    #[test]
    fn empty_configuration() {
        for p in [2, 3, 5] {
            assert_eq!(basis(0, p, None).unwrap(), vec![Monomial::one(p)]);
        }
        assert_eq!(basis(3, 4, None), Err(Error::NotPrime(4)));
    }

    #[test]
    fn degree_filter() {
        let b = basis(6, 3, Some(4)).unwrap();
        assert_eq!(names(&b), ["bQ1[a,a]"]);
    }

    #[test]
    fn delta_formulas() {
        let a5 = Monomial::new(3, vec![(Generator::Point, 5)]).unwrap();
        let (c, m) = delta(&a5, 3).unwrap().unwrap();
        assert_eq!((c, m.to_string()), (2, "a^3[a,a]".into()));
        let a3b = Monomial::new(7, vec![(Generator::Point, 3), (Generator::Bracket, 1)]).unwrap();
        assert_eq!(delta(&a3b, 7).unwrap(), None);
        let a2 = Monomial::new(3, vec![(Generator::Point, 2)]).unwrap();
        let (c, m) = delta(&a2, 3).unwrap().unwrap();
        assert_eq!((c, m.to_string()), (2, "[a,a]".into()));
        let a4 = Monomial::new(3, vec![(Generator::Point, 4)]).unwrap();
        assert_eq!(delta(&a4, 3).unwrap(), None);
        assert!(matches!(
            delta(&a4, 2),
            Err(Error::Unsupported(_)) | Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn delta_squares_to_zero() {
        for p in [3, 5, 7] {
            for n in 0..=12 {
                for m in basis(n, p, None).unwrap() {
                    if let Some((_, image)) = delta(&m, p).unwrap() {
                        assert_eq!(image.weight(), n);
                        assert_eq!(image.degree(), m.degree() + 1);
                        assert_eq!(delta(&image, p).unwrap(), None);
                    }
                }
            }
        }
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(coker_delta_dims(5, 3).unwrap(), [1]);
        assert_eq!(coker_delta_dims(2, 5).unwrap(), [1]);
        assert_eq!(coker_delta_dims(3, 5).unwrap(), [1]);
        assert!(matches!(coker_delta_dims(4, 3), Err(Error::Hypothesis(_))));
        assert_eq!(coker_delta_brute_force(4, 3).unwrap(), [1, 1]);
        assert_eq!(coker_delta_brute_force(3, 5).unwrap(), [1]);
    }

    #[test]
    fn bracket_free_span_is_the_cokernel() {
        for p in [3u64, 5, 7] {
            for n in 0..=14usize {
                if congruent_zero_or_one(n, p) {
                    continue;
                }
                assert_eq!(
                    coker_delta_dims(n, p).unwrap(),
                    coker_delta_brute_force(n, p).unwrap(),
                    "n={n} p={p}"
                );
            }
        }
    }

    #[test]
    fn equivariant_series_examples() {
        assert_eq!(equivariant_series(5, 2, 6).unwrap(), [1, 1, 2, 2, 2, 2, 2]);
        assert_eq!(fiber_dims(6, 3).unwrap(), [1, 1, 0, 0, 1, 1]);
        assert_eq!(equivariant_series(6, 3, 6).unwrap(), [1, 1, 1, 1, 2, 2, 2]);
        assert_eq!(equivariant_series(5, 3, 3).unwrap(), [1, 0, 0, 0]);
    }

    #[test]
    fn cstar_tables() {
        let two: Vec<(String, usize)> = cstar_basis(2, 2)
            .unwrap()
            .iter()
            .map(|c| (c.to_string(), c.degree()))
            .collect();
        assert_eq!(
            two,
            [
                ("b·a^2".to_string(), 0),
                ("b·Q1(a)".to_string(), 1),
                ("[b,a]·a".to_string(), 1),
                ("[[b,a],a]".to_string(), 2)
            ]
        );
        assert_eq!(cstar_homology(2, 2).unwrap(), [1, 2, 1]);
        let three: Vec<String> = cstar_basis(2, 3).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(three, ["b·a^2", "b·[a,a]", "[b,a]·a", "[[b,a],a]"]);
        assert_eq!(cstar_homology(2, 3).unwrap(), [1, 2, 1]);
        assert_eq!(cstar_homology(0, 5).unwrap(), [1]);
    }

    #[test]
    fn fixed_point_sets() {
        assert_eq!(fixed_points(6, 3).unwrap(), FixedPoints::Cstar { q: 2 });
        assert_eq!(fixed_points(5, 2).unwrap(), FixedPoints::Cstar { q: 2 });
        assert_eq!(fixed_points(7, 3).unwrap(), FixedPoints::Cstar { q: 2 });
        assert_eq!(fixed_points(5, 3).unwrap(), FixedPoints::Empty);
    }

    #[test]
    fn invalid_monomials_rejected() {
        assert!(Monomial::new(3, vec![(Generator::Bracket, 2)]).is_err());
        assert!(Monomial::new(2, vec![(Generator::Bracket, 1)]).is_err());
        assert!(Monomial::new(2, vec![(Generator::Dyer(1), 3)]).is_ok());
    }
}
