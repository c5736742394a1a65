//! Acceptance criteria, one line each. Runs without the test harness so the
//! report is always printed; exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{fp_dims, product_poly, simplicial_lens_homology};
use mquot::cells::Shape;
use mquot::chain::{cacti_complex, homology, ChainComplex, Coefficients};
use mquot::cohen::{basis, coker_delta_brute_force, coker_delta_dims, cstar_basis, delta, equivariant_series};
use mquot::embedding::{embed, sub_leading_residual, weighted_equal, Configuration};
use mquot::equivariant::{full_quotient_complex, full_quotient_generic};
use mquot::lens::{is_homology_sphere, lens_homology, manifold_obstruction, LensSpec};
use mquot::pipeline::{e2_grid, GridSpace};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

struct Quotients {
    direct: Vec<ChainComplex>,
}

impl Quotients {
    fn get(&self, n: usize) -> &ChainComplex {
        &self.direct[n - 1]
    }
}

fn contractibility(q: &Quotients) -> Verdict {
    let start = Instant::now();
    for n in 1..=5 {
        let h = homology(q.get(n), Coefficients::Integers).map_err(|e| e.to_string())?;
        ensure(h.is_point(), format!("n={n}: {:?}", h.describe()))?;
    }
    for n in 2..=5 {
        let (generic, _) = full_quotient_generic(n).map_err(|e| e.to_string())?;
        let h = homology(&generic, Coefficients::Integers).map_err(|e| e.to_string())?;
        ensure(h.is_point(), format!("generic route n={n}: {:?}", h.describe()))?;
    }
    ensure(start.elapsed() < Duration::from_secs(300), "over the 5 minute budget")?;
    Ok("n=1..5 acyclic over Z by both routes".into())
}

fn n6_mod3(q: &Quotients) -> Verdict {
    let h = homology(q.get(6), Coefficients::Prime(3)).map_err(|e| e.to_string())?;
    let oracle = fp_dims(q.get(6), 3);
    ensure(h.betti() == [1, 0, 0, 1, 1], format!("dims {:?}", h.betti()))?;
    ensure(oracle == [1, 0, 0, 1, 1], format!("rank oracle {oracle:?}"))?;
    Ok("dims (1,0,0,1,1)".into())
}

fn acyclicity(q: &Quotients) -> Verdict {
    for p in [2u64, 3, 5] {
        for n in [p as usize, p as usize + 1] {
            let dims = fp_dims(q.get(n), p);
            ensure(dims == [1], format!("p={p} n={n}: {dims:?}"))?;
            if n <= 5 {
                let (generic, _) = full_quotient_generic(n).map_err(|e| e.to_string())?;
                ensure(fp_dims(&generic, p) == [1], format!("generic route p={p} n={n}"))?;
            }
        }
    }
    Ok("n=p, p+1 acyclic over F_p for p=2,3,5".into())
}

fn strict_equals(q: &Quotients) -> Verdict {
    let mut pairs = Vec::new();
    for p in [3u64, 5, 7] {
        for n in 2..=7usize {
            let r = n as u64 % p;
            if r == 0 || r == 1 {
                continue;
            }
            let cellular = fp_dims(q.get(n), p);
            let bracket_free = coker_delta_dims(n, p).map_err(|e| e.to_string())?;
            let brute = coker_delta_brute_force(n, p).map_err(|e| e.to_string())?;
            ensure(
                cellular == bracket_free && bracket_free == brute,
                format!("n={n} p={p}: cellular {cellular:?}, coker Δ {bracket_free:?}, rank count {brute:?}"),
            )?;
            pairs.push(format!("({n},{p})"));
        }
    }
    Ok(format!("equal for {}", pairs.join(" ")))
}

fn torsion_bound(q: &Quotients) -> Verdict {
    let mut seen = Vec::new();
    for n in 1..=6 {
        let factorial: u64 = (1..=n as u64).product();
        let h = homology(q.get(n), Coefficients::Integers).map_err(|e| e.to_string())?;
        for (d, t) in h.all_torsion() {
            ensure(factorial.is_multiple_of(t), format!("n={n}: Z/{t} in degree {d}"))?;
            seen.push(format!("n={n}:Z/{t}"));
        }
    }
    Ok(format!(
        "torsion {}",
        if seen.is_empty() { "none".into() } else { seen.join(",") }
    ))
}

fn simply_connected(q: &Quotients) -> Verdict {
    for n in 1..=6 {
        let h = homology(q.get(n), Coefficients::Integers).map_err(|e| e.to_string())?;
        let h1 = h.degrees.get(1).is_none_or(|d| d.betti == 0 && d.torsion.is_empty());
        ensure(h1, format!("n={n}: H = {:?}", h.describe()))?;
        for p in [2, 3, 5] {
            ensure(
                fp_dims(q.get(n), p).get(1).is_none_or(|&b| b == 0),
                format!("n={n}: H1 over F{p}"),
            )?;
        }
    }
    for n in 2..=5 {
        let (generic, _) = full_quotient_generic(n).map_err(|e| e.to_string())?;
        ensure(
            fp_dims(&generic, 2).get(1).is_none_or(|&b| b == 0),
            format!("generic n={n}"),
        )?;
    }
    Ok("H1 = 0 for n <= 6".into())
}

fn poincare() -> Verdict {
    for n in 1..=6 {
        let based = homology(
            &cacti_complex(n, Shape::Linear).map_err(|e| e.to_string())?,
            Coefficients::Integers,
        )
        .map_err(|e| e.to_string())?;
        ensure(
            based.betti() == product_poly(1, n - 1),
            format!("based n={n}: {:?}", based.betti()),
        )?;
        ensure(based.is_torsion_free(), format!("based n={n} has torsion"))?;
    }
    for n in 2..=6 {
        let unbased = homology(
            &cacti_complex(n, Shape::Cyclic).map_err(|e| e.to_string())?,
            Coefficients::Integers,
        )
        .map_err(|e| e.to_string())?;
        ensure(
            unbased.betti() == product_poly(2, n - 1),
            format!("unbased n={n}: {:?}", unbased.betti()),
        )?;
        ensure(unbased.is_torsion_free(), format!("unbased n={n} has torsion"))?;
    }
    Ok("based and unbased Betti numbers match for n <= 6".into())
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn cohen() -> Verdict {
    let start = Instant::now();
    let err = |e: mquot::Error| e.to_string();
    ensure(
        strings(&basis(5, 3, None).map_err(err)?) == ["a^5", "a^3[a,a]"],
        "basis(5,3)",
    )?;
    ensure(
        strings(&basis(2, 2, None).map_err(err)?) == ["a^2", "Q1(a)"],
        "basis(2,2)",
    )?;
    let a5 = basis(5, 3, Some(0)).map_err(err)?;
    let d = delta(&a5[0], 3).map_err(err)?.map(|(c, m)| (c, m.to_string()));
    ensure(d == Some((2, "a^3[a,a]".into())), format!("Δ(a^5) = {d:?}"))?;
    ensure(coker_delta_dims(5, 3).map_err(err)? == [1], "coker Δ (5,3)")?;
    ensure(coker_delta_dims(2, 5).map_err(err)? == [1], "coker Δ (2,5)")?;
    ensure(coker_delta_dims(3, 5).map_err(err)? == [1], "coker Δ (3,5)")?;
    ensure(
        strings(&cstar_basis(2, 2).map_err(err)?) == ["b·a^2", "b·Q1(a)", "[b,a]·a", "[[b,a],a]"],
        "C2(C*) table over F2",
    )?;
    ensure(
        strings(&cstar_basis(2, 3).map_err(err)?) == ["b·a^2", "b·[a,a]", "[b,a]·a", "[[b,a],a]"],
        "C2(C*) table over F3",
    )?;
    let grids: [(usize, u64, GridSpace, &[usize]); 4] = [
        (5, 2, GridSpace::Configuration, &[1, 1, 1, 1]),
        (5, 2, GridSpace::FixedPoints, &[1, 2, 1]),
        (6, 3, GridSpace::Configuration, &[1, 1, 0, 0, 1, 1]),
        (6, 3, GridSpace::FixedPoints, &[1, 2, 1]),
    ];
    for (n, p, space, rows) in grids {
        let g = e2_grid(n, p, space).map_err(err)?;
        ensure(g.rows == rows, format!("grid ({n},{p},{space:?}): {:?}", g.rows))?;
        for col in 0..6 {
            for (row, &r) in rows.iter().enumerate() {
                ensure(g.entry(col, row) == if col % 2 == 0 { r } else { 0 }, "grid entry")?;
            }
        }
    }
    ensure(
        equivariant_series(5, 2, 5).map_err(err)? == [1, 1, 2, 2, 2, 2],
        "series (5,2)",
    )?;
    ensure(
        equivariant_series(6, 3, 6).map_err(err)? == [1, 1, 1, 1, 2, 2, 2],
        "series (6,3)",
    )?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!(
        "all tables and grids reproduced in {:.1} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn classical(m: u64, circles: usize) -> Vec<String> {
    let top = 2 * circles - 1;
    (0..=top)
        .map(|d| match d {
            0 => "Z".into(),
            d if d == top => "Z".into(),
            d if d % 2 == 1 => format!("Z/{m}"),
            _ => "0".into(),
        })
        .collect()
}

fn lens() -> Verdict {
    let err = |e: mquot::Error| e.to_string();
    for (m, w) in [
        (2u64, vec![1u64]),
        (2, vec![1, 1]),
        (3, vec![1, 2]),
        (5, vec![4, 3, 2]),
        (4, vec![1, 3]),
        (7, vec![1, 2, 3]),
    ] {
        let spec = LensSpec::new(m, w.clone()).map_err(err)?;
        let h = lens_homology(&spec).map_err(err)?;
        ensure(
            h.describe() == classical(m, w.len()),
            format!("{spec}: {:?}", h.describe()),
        )?;
        ensure(
            h.euler_characteristic() == 0,
            format!("{spec}: χ = {}", h.euler_characteristic()),
        )?;
    }
    let mut values = Vec::new();
    for n in 3..=6 {
        let r = manifold_obstruction(n).map_err(err)?;
        ensure(
            r.obstruction == (n >= 4),
            format!("n={n}: obstruction {}", r.obstruction),
        )?;
        let weights: Vec<u64> = (2..n as u64).rev().collect();
        let oracle = simplicial_lens_homology(n as u64, &weights);
        ensure(
            oracle.describe() == r.lens_homology,
            format!(
                "n={n}: join model {:?}, simplicial oracle {:?}",
                r.lens_homology,
                oracle.describe()
            ),
        )?;
        ensure(
            is_homology_sphere(&oracle, 2 * n - 5) == (n == 3),
            format!("n={n}: oracle sphere test"),
        )?;
        if n >= 4 {
            values.push(format!("L({n}): {}", r.lens_homology.join(" ")));
        }
    }
    Ok(values.join("; "))
}

fn random_config(n: usize, rng: &mut ChaCha8Rng) -> Configuration {
    loop {
        let pts: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        if let Ok(c) = Configuration::new(pts) {
            return c;
        }
    }
}

fn embedding() -> Verdict {
    const SEED: u64 = 20_241_015;
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    let mut distinguished = Vec::new();
    for n in 3..=8 {
        let mut separated = 0;
        for _ in 0..1000 {
            let c = random_config(n, &mut rng);
            let e = embed(&c).map_err(|e| e.to_string())?;
            worst = worst.max(sub_leading_residual(&c));
            let shift = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let turn = Complex64::from_polar(rng.random_range(0.3..4.0), rng.random_range(0.0..std::f64::consts::TAU));
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let pts = c.points();
            let variants = [
                pts.iter().map(|&z| z + shift).collect::<Vec<_>>(),
                pts.iter().map(|&z| turn * z).collect(),
                order.iter().map(|&i| pts[i]).collect(),
                order.iter().map(|&i| turn * pts[i] + shift).collect(),
            ];
            for v in variants {
                let moved = Configuration::new(v).map_err(|e| e.to_string())?;
                worst = worst.max(sub_leading_residual(&moved));
                let same =
                    weighted_equal(&e, &embed(&moved).map_err(|e| e.to_string())?, TOL).map_err(|e| e.to_string())?;
                ensure(same, format!("n={n}: invariance failed"))?;
            }
            let other = random_config(n, &mut rng);
            if !weighted_equal(&e, &embed(&other).map_err(|e| e.to_string())?, TOL).map_err(|e| e.to_string())? {
                separated += 1;
            }
        }
        ensure(
            separated >= 990,
            format!("n={n}: only {separated}/1000 pairs distinguished"),
        )?;
        distinguished.push(separated);
    }
    ensure(worst <= TOL, format!("|a_(n-1)| reached {worst:e}"))?;
    Ok(format!(
        "seed {SEED}, max |a_(n-1)| {worst:.1e}, distinguished {distinguished:?} of 1000"
    ))
}

fn main() {
    let quotients = Quotients {
        direct: (1..=7)
            .map(|n| full_quotient_complex(n).expect("full quotient"))
            .collect(),
    };
    let criteria: Vec<Criterion> = vec![
        (
            "contractibility ladder n=1..5",
            Box::new(|| contractibility(&quotients)),
        ),
        ("n=6 full quotient over F3", Box::new(|| n6_mod3(&quotients))),
        ("acyclicity at n=p, p+1", Box::new(|| acyclicity(&quotients))),
        (
            "strict quotient equals homotopy quotient",
            Box::new(|| strict_equals(&quotients)),
        ),
        ("torsion divides n!", Box::new(|| torsion_bound(&quotients))),
        ("H1 vanishes", Box::new(|| simply_connected(&quotients))),
        ("Poincare polynomial oracles", Box::new(poincare)),
        ("Cohen algebra tables", Box::new(cohen)),
        ("lens complexes", Box::new(lens)),
        ("embedding properties", Box::new(embedding)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS [{:>2}] {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
