//! The end-to-end verification suite behind `mquot verify`.

use serde::Serialize;

use crate::cells::Shape;
use crate::chain::{cacti_complex, homology, Coefficients};
use crate::cohen::{basis, coker_delta_brute_force, cstar_basis, delta, equivariant_series, fixed_points, FixedPoints};
use crate::embedding::property_trials;
use crate::equivariant::{full_quotient_complex, full_quotient_generic};
use crate::error::Result;
use crate::lens::{
    classical_lens_homology, is_homology_sphere, lens_chain_complex_refined, lens_homology, manifold_obstruction,
    LensSpec,
};
use crate::pipeline::{
    acyclicity_check, e2_grid, mayer_vietoris_audit, strict_equals_homotopy_audit, strict_equals_unchecked,
    torsion_bound_check, GridSpace,
};

/// Seed for the embedding trials.
pub const EMBEDDING_SEED: u64 = 0x5eed_0001;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
    /// Observations that are reported but not pass/fail.
    pub findings: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Outcome {
    passed: bool,
    detail: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            detail: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.detail.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }
}

fn run(id: &str, title: &str, body: impl FnOnce(&mut Outcome) -> Result<()>) -> Check {
    let mut out = Outcome::new();
    if let Err(e) = body(&mut out) {
        out.expect(false, format!("error: {e}"));
    }
    Check {
        id: id.into(),
        title: title.into(),
        passed: out.passed,
        detail: out.detail,
    }
}

/// Identifiers of the numbered checks, in order.
pub const CHECK_IDS: [&str; 10] = [
    "contractibility",
    "n6-mod3",
    "acyclicity",
    "strict-equals-homotopy",
    "torsion-bound",
    "simply-connected",
    "poincare-polynomials",
    "cohen-tables",
    "lens",
    "embedding",
];

pub fn check(id: &str) -> Option<Check> {
    Some(match id {
        "contractibility" => contractibility(),
        "n6-mod3" => n6_mod3(),
        "acyclicity" => acyclicity(),
        "strict-equals-homotopy" => strict_equals(),
        "torsion-bound" => torsion_bound(),
        "simply-connected" => simply_connected(),
        "poincare-polynomials" => poincare_polynomials(),
        "cohen-tables" => cohen_tables(),
        "lens" => lens_suite(),
        "embedding" => embedding_suite(),
        "mayer-vietoris" => mayer_vietoris(),
        _ => return None,
    })
}

/// Every check, plus the Mayer-Vietoris audits and findings.
pub fn full_suite() -> SuiteReport {
    let mut checks: Vec<Check> = CHECK_IDS.iter().map(|id| check(id).expect("known id")).collect();
    checks.push(mayer_vietoris());
    SuiteReport {
        checks,
        findings: findings(),
    }
}

fn contractibility() -> Check {
    run("contractibility", "full quotient is acyclic over Z for n = 1..5", |o| {
        for n in 1..=5 {
            let h = homology(&full_quotient_complex(n)?, Coefficients::Integers)?;
            o.expect(h.is_point(), format!("n={n}: {:?}", h.describe()));
        }
        Ok(())
    })
}

fn n6_mod3() -> Check {
    run("n6-mod3", "full quotient n = 6 over F3 has dims (1,0,0,1,1)", |o| {
        let h = homology(&full_quotient_complex(6)?, Coefficients::Prime(3))?;
        o.expect(h.betti() == [1, 0, 0, 1, 1], format!("dims {:?}", h.betti()));
        Ok(())
    })
}

fn acyclicity() -> Check {
    run(
        "acyclicity",
        "n = p and n = p + 1 quotients are F_p-acyclic, p = 2, 3, 5",
        |o| {
            for p in [2, 3, 5] {
                let r = acyclicity_check(p)?;
                for c in &r.cases {
                    o.expect(
                        c.is_point && c.equivariant_dims_match,
                        format!(
                            "p={p} n={}: dims {:?}, equivariant dims match {}",
                            c.n, c.cellular, c.equivariant_dims_match
                        ),
                    );
                }
            }
            Ok(())
        },
    )
}

fn strict_equals() -> Check {
    run(
        "strict-equals-homotopy",
        "cellular F_p dims equal coker Δ for n ≢ 0,1 mod p",
        |o| {
            for p in [3u64, 5, 7] {
                for n in 2..=7usize {
                    if matches!(fixed_points(n, p)?, FixedPoints::Cstar { .. }) {
                        continue;
                    }
                    let r = strict_equals_homotopy_audit(n, p)?;
                    o.expect(
                        r.equal,
                        format!("n={n} p={p}: cellular {:?}, coker Δ {:?}", r.cellular, r.coker_delta),
                    );
                }
            }
            Ok(())
        },
    )
}

fn torsion_bound() -> Check {
    run(
        "torsion-bound",
        "integral torsion of the full quotient divides n!",
        |o| {
            for n in 1..=6 {
                let h = homology(&full_quotient_complex(n)?, Coefficients::Integers)?;
                let torsion: Vec<u64> = h.all_torsion().map(|(_, t)| t).collect();
                o.expect(torsion_bound_check(n, &h), format!("n={n}: torsion {torsion:?}"));
            }
            Ok(())
        },
    )
}

fn simply_connected() -> Check {
    run("simply-connected", "H1 vanishes for the full quotient, n <= 6", |o| {
        for n in 1..=6 {
            let complex = full_quotient_complex(n)?;
            for coeffs in [Coefficients::Integers, Coefficients::Prime(2), Coefficients::Prime(3)] {
                let h = homology(&complex, coeffs)?;
                let h1 = h.degrees.get(1).is_none_or(|d| d.betti == 0 && d.torsion.is_empty());
                o.expect(
                    h1,
                    format!("n={n} {coeffs}: H1 {}", h.describe().get(1).map_or("0", |s| s)),
                );
            }
        }
        for n in 2..=5 {
            let (generic, rounds) = full_quotient_generic(n)?;
            let h = homology(&generic, Coefficients::Integers)?;
            o.expect(
                h.is_point(),
                format!("n={n} via {rounds} subdivision round(s): {:?}", h.describe()),
            );
        }
        Ok(())
    })
}

/// Coefficients of `∏_{k=lo}^{hi} (1 + k t)`.
pub fn product_polynomial(lo: usize, hi: usize) -> Vec<usize> {
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

fn poincare_polynomials() -> Check {
    run(
        "poincare-polynomials",
        "cacti Betti numbers match the configuration and moduli polynomials",
        |o| {
            for n in 1..=6 {
                let h = homology(&cacti_complex(n, Shape::Linear)?, Coefficients::Integers)?;
                let expected = product_polynomial(1, n - 1);
                o.expect(
                    h.betti() == expected && h.is_torsion_free(),
                    format!("based n={n}: {:?}", h.betti()),
                );
            }
            for n in 2..=6 {
                let h = homology(&cacti_complex(n, Shape::Cyclic)?, Coefficients::Integers)?;
                let expected = product_polynomial(2, n - 1);
                o.expect(
                    h.betti() == expected && h.is_torsion_free(),
                    format!("unbased n={n}: {:?}", h.betti()),
                );
            }
            Ok(())
        },
    )
}

fn names<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn cohen_tables() -> Check {
    run("cohen-tables", "Cohen algebra bases, Δ, cokernels and E2 grids", |o| {
        o.expect(
            names(&basis(5, 3, None)?) == ["a^5", "a^3[a,a]"],
            "basis n=5 p=3".into(),
        );
        o.expect(names(&basis(2, 2, None)?) == ["a^2", "Q1(a)"], "basis n=2 p=2".into());
        let a5 = &basis(5, 3, Some(0))?[0];
        let d = delta(a5, 3)?.map(|(c, m)| format!("{c}·{m}"));
        o.expect(d.as_deref() == Some("2·a^3[a,a]"), format!("Δ(a^5) = {d:?} mod 3"));
        o.expect(
            equivariant_series(5, 3, 4)? == [1, 0, 0, 0, 0],
            "coker Δ n=5 p=3".into(),
        );
        o.expect(coker_delta_brute_force(2, 5)? == [1], "coker Δ n=2 p=5".into());
        o.expect(coker_delta_brute_force(3, 5)? == [1], "coker Δ n=3 p=5".into());
        let f2 = names(&cstar_basis(2, 2)?);
        o.expect(
            f2 == ["b·a^2", "b·Q1(a)", "[b,a]·a", "[[b,a],a]"],
            format!("C2(C*) over F2: {f2:?}"),
        );
        let f3 = names(&cstar_basis(2, 3)?);
        o.expect(
            f3 == ["b·a^2", "b·[a,a]", "[b,a]·a", "[[b,a],a]"],
            format!("C2(C*) over F3: {f3:?}"),
        );
        let grids = [
            (5, 2, GridSpace::Configuration, vec![1, 1, 1, 1]),
            (5, 2, GridSpace::FixedPoints, vec![1, 2, 1]),
            (6, 3, GridSpace::Configuration, vec![1, 1, 0, 0, 1, 1]),
            (6, 3, GridSpace::FixedPoints, vec![1, 2, 1]),
        ];
        for (n, p, space, rows) in grids {
            let g = e2_grid(n, p, space)?;
            o.expect(g.rows == rows, format!("E2 grid ({n},{p},{space:?}) rows {:?}", g.rows));
            if space == GridSpace::Configuration {
                o.expect(
                    g.diagonal_sums(10) == equivariant_series(n, p, 10)?,
                    format!("E2 grid ({n},{p}) diagonals give the equivariant series"),
                );
            }
        }
        Ok(())
    })
}

fn lens_suite() -> Check {
    run("lens", "lens complexes and the manifold obstruction", |o| {
        for (m, w) in [
            (2u64, vec![1u64]),
            (3, vec![1, 1]),
            (5, vec![4, 3, 2]),
            (2, vec![1, 1]),
            (7, vec![1, 2, 3]),
        ] {
            let spec = LensSpec::new(m, w)?;
            let h = lens_homology(&spec)?;
            let classical = classical_lens_homology(m, spec.circles());
            o.expect(h.describe() == classical, format!("{spec}: {:?}", h.describe()));
            o.expect(h.euler_characteristic() == 0, format!("{spec}: euler characteristic 0"));
        }
        for n in 3..=6 {
            let r = manifold_obstruction(n)?;
            o.expect(
                r.obstruction == (n >= 4),
                format!("n={n}: {} {:?}", r.lens, r.lens_homology),
            );
            let refined = homology(&lens_chain_complex_refined(&r.lens, 2)?, Coefficients::Integers)?;
            o.expect(
                refined.describe() == r.lens_homology && is_homology_sphere(&refined, r.sphere_dim) == !r.obstruction,
                format!("n={n}: refined model agrees"),
            );
        }
        Ok(())
    })
}

fn embedding_suite() -> Check {
    run(
        "embedding",
        "embedding invariance and separation, 1000 samples for n = 3..8",
        |o| {
            for n in 3..=8 {
                let r = property_trials(n, 1000, EMBEDDING_SEED)?;
                o.expect(
                    r.passed(),
                    format!(
                        "n={n}: {} invariance failures, max |a_(n-1)| {:.1e}, {:.1}% distinguished",
                        r.invariance_failures,
                        r.max_sub_leading,
                        100.0 * r.distinguished_fraction()
                    ),
                );
            }
            Ok(())
        },
    )
}

fn mayer_vietoris() -> Check {
    run(
        "mayer-vietoris",
        "Mayer-Vietoris audits against cellular F_p homology",
        |o| {
            for (n, p) in [(5usize, 2u64), (6, 3), (5, 5), (3, 3), (4, 3), (4, 2), (3, 2)] {
                let cellular = homology(&full_quotient_complex(n)?, Coefficients::Prime(p))?;
                let r = mayer_vietoris_audit(n, p, &cellular)?;
                let pinned: Vec<String> = r
                    .degrees
                    .iter()
                    .map(|d| d.pinned().map_or("?".to_string(), |v| v.to_string()))
                    .collect();
                o.expect(
                    r.passed(),
                    format!(
                        "n={n} p={p}: cellular {:?}, forced {}",
                        cellular.betti(),
                        pinned.join(",")
                    ),
                );
            }
            Ok(())
        },
    )
}

fn findings() -> Vec<String> {
    let mut out = Vec::new();
    if let Ok(r) = strict_equals_unchecked(4, 3) {
        out.push(format!(
            "n=4 p=3 (outside the hypothesis n ≢ 0,1 mod p): cellular {:?}, H/im Δ {:?}",
            r.cellular, r.coker_delta_brute_force
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_checks_pass() {
        for id in [
            "contractibility",
            "n6-mod3",
            "acyclicity",
            "strict-equals-homotopy",
            "cohen-tables",
            "mayer-vietoris",
        ] {
            let c = check(id).unwrap();
            assert!(c.passed, "{c:?}");
        }
        assert!(check("nope").is_none());
    }

    #[test]
    fn polynomial() {
        assert_eq!(product_polynomial(1, 3), [1, 6, 11, 6]);
    }
}
