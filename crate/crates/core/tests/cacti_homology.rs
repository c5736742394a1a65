use mquot::cells::{enumerate_cells, Shape};
use mquot::chain::{cacti_complex, homology, universal_coefficients_hold, Coefficients};

/// Coefficients of `prod_{k=lo}^{hi} (1 + k t)`.
fn product_poly(lo: usize, hi: usize) -> Vec<usize> {
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

#[test]
fn oracle_polynomials() {
    assert_eq!(product_poly(1, 3), vec![1, 6, 11, 6]);
    assert_eq!(product_poly(2, 4), vec![1, 9, 26, 24]);
    assert_eq!(product_poly(2, 1), vec![1]);
}

#[test]
fn based_betti_numbers_match_configuration_space() {
    for n in 1..=5 {
        let h = homology(&cacti_complex(n, Shape::Linear).unwrap(), Coefficients::Integers).unwrap();
        assert_eq!(h.betti(), product_poly(1, n - 1), "n = {n}");
        assert!(h.is_torsion_free());
    }
}

#[test]
fn unbased_betti_numbers_match_moduli_space() {
    for n in 2..=5 {
        let h = homology(&cacti_complex(n, Shape::Cyclic).unwrap(), Coefficients::Integers).unwrap();
        assert_eq!(h.betti(), product_poly(2, n - 1), "n = {n}");
        assert!(h.is_torsion_free());
    }
}

#[test]
fn based_four_lobes() {
    let h = homology(&cacti_complex(4, Shape::Linear).unwrap(), Coefficients::Integers).unwrap();
    assert_eq!(h.betti(), vec![1, 6, 11, 6]);
}

#[test]
fn unbased_five_lobes() {
    let h = homology(&cacti_complex(5, Shape::Cyclic).unwrap(), Coefficients::Integers).unwrap();
    assert_eq!(h.betti(), vec![1, 9, 26, 24]);
}

#[test]
fn facets_are_admissible_and_counted() {
    for n in 1..=6 {
        for shape in [Shape::Linear, Shape::Cyclic] {
            let cells = enumerate_cells(n, shape).unwrap();
            for cell in cells.iter() {
                let facets = cell.facets();
                let expected: usize = cell.multiplicities().iter().filter(|&&m| m >= 2).sum();
                assert_eq!(facets.len(), expected, "{cell}");
                for f in facets {
                    assert!(mquot::is_admissible(f.cell.word(), shape, n as u8).unwrap());
                    assert_eq!(f.cell.dim() + 1, cell.dim());
                    assert!(cells.index_of(&f.cell).is_some());
                }
            }
        }
    }
}

#[test]
fn euler_characteristic_and_field_dims() {
    for n in 2..=5 {
        for shape in [Shape::Linear, Shape::Cyclic] {
            let complex = cacti_complex(n, shape).unwrap();
            let z = homology(&complex, Coefficients::Integers).unwrap();
            assert_eq!(z.euler_characteristic(), complex.euler_characteristic());
            for p in [2, 3, 5] {
                let f = homology(&complex, Coefficients::Prime(p)).unwrap();
                assert_eq!(f.euler_characteristic(), complex.euler_characteristic());
                assert!(universal_coefficients_hold(&z, &f));
            }
        }
    }
}
