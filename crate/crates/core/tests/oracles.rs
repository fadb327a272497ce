//! Independent oracles for Schur polynomials, Littlewood-Richardson
//! coefficients and the hook length formula.

use std::collections::BTreeMap;

use cochar_core::partitions::{enumerate_partitions, partitions_up_to, Partition};
use cochar_core::schur::{elementary, even_row_series, lr_coefficients, schur_poly, sum_snn};
use cochar_core::series::{series_mul, ExponentVector, Rational, SparsePoly, Space, TruncatedSeries};
use cochar_core::multiplicity::{extract, vandermonde};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

fn part(p: &[u32]) -> Partition {
    Partition::new(p).unwrap()
}

/// Row length with 0-based index.
fn row(p: &Partition, i: usize) -> u32 {
    p.parts().get(i).copied().unwrap_or(0)
}

/// Brute force: enumerate semistandard tableaux of shape `lambda` with
/// entries in `1..=d` cell by cell, row-major.
fn schur_by_tableaux(lambda: &Partition, d: usize) -> SparsePoly {
    let shape = lambda.parts().to_vec();
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<u32>> = shape.iter().map(|&len| vec![0; len as usize]).collect();
    let mut out = SparsePoly::zero(d, Space::T);
    fn rec(k: usize, cells: &[(usize, usize)], grid: &mut Vec<Vec<u32>>, d: usize, out: &mut SparsePoly) {
        if k == cells.len() {
            let mut e = vec![0u32; d];
            for row in grid.iter() {
                for &x in row {
                    e[x as usize - 1] += 1;
                }
            }
            out.add_term(ExponentVector::from(e), Rational::one());
            return;
        }
        let (r, c) = cells[k];
        let lo_row = if c > 0 { grid[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        for x in lo_row.max(lo_col)..=d as u32 {
            grid[r][c] = x;
            rec(k + 1, cells, grid, d, out);
        }
        grid[r][c] = 0;
    }
    rec(0, &cells, &mut grid, d, &mut out);
    out
}

/// Lattice word count: fillings of `nu / lambda` with content `mu` whose
/// reverse reading word is a lattice word.
fn lr_by_lattice_words(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    let rows = nu.len();
    if lambda.len() > rows || (0..rows).any(|i| row(lambda, i) > row(nu, i)) {
        return 0;
    }
    if lambda.size() + mu.size() != nu.size() {
        return 0;
    }
    // cells of the skew shape in reading order: right to left, top to bottom
    let mut cells = Vec::new();
    for r in 0..rows {
        for c in (row(lambda, r)..row(nu, r)).rev() {
            cells.push((r, c as usize));
        }
    }
    let mut grid: Vec<Vec<u32>> = (0..rows).map(|r| vec![0; row(nu, r) as usize]).collect();
    let mut used = vec![0u32; mu.len() + 1];
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<u32>>,
        used: &mut Vec<u32>,
        lambda: &Partition,
        mu: &Partition,
    ) -> u64 {
        if k == cells.len() {
            return 1;
        }
        let (r, c) = cells[k];
        let mut count = 0;
        for x in 1..=mu.len() as u32 {
            let xi = x as usize;
            if used[xi] >= row(mu, xi - 1) {
                continue;
            }
            if xi > 1 && used[xi] >= used[xi - 1] {
                continue;
            }
            // weakly increasing rows: the cell to the right is filled already
            if c + 1 < grid[r].len() && grid[r][c + 1] != 0 && grid[r][c + 1] < x {
                continue;
            }
            // strictly increasing columns
            if r > 0 && c >= row(lambda, r - 1) as usize && grid[r - 1][c] >= x {
                continue;
            }
            grid[r][c] = x;
            used[xi] += 1;
            count += rec(k + 1, cells, grid, used, lambda, mu);
            used[xi] -= 1;
            grid[r][c] = 0;
        }
        count
    }
    rec(0, &cells, &mut grid, &mut used, lambda, mu)
}

fn lr_oracle(lambda: &Partition, mu: &Partition, d: usize) -> BTreeMap<Partition, BigInt> {
    enumerate_partitions(lambda.size() + mu.size(), d)
        .into_iter()
        .filter_map(|nu| {
            let c = lr_by_lattice_words(lambda, mu, &nu);
            (c > 0).then(|| (nu, BigInt::from(c)))
        })
        .collect()
}

/// Number of standard tableaux by direct recursion on removable corners.
fn syt_count(lambda: &Partition) -> BigUint {
    if lambda.size() == 0 {
        return BigUint::one();
    }
    let parts = lambda.parts();
    let mut total = BigUint::zero();
    for i in 0..parts.len() {
        let next = parts.get(i + 1).copied().unwrap_or(0);
        if parts[i] > next {
            let mut smaller = parts.to_vec();
            smaller[i] -= 1;
            while smaller.last() == Some(&0) {
                smaller.pop();
            }
            total += syt_count(&part(&smaller));
        }
    }
    total
}

#[test]
fn schur_matches_tableaux_enumeration() {
    for d in 1..=4 {
        for lambda in partitions_up_to(6, d) {
            assert_eq!(schur_poly(&lambda, d), schur_by_tableaux(&lambda, d), "lambda {lambda}, d {d}");
        }
    }
}

#[test]
fn schur_with_too_many_parts_vanishes() {
    assert!(schur_poly(&part(&[1, 1, 1]), 2).is_zero());
    assert!(elementary(4, 3).is_zero());
}

#[test]
fn bialternant_identity() {
    for d in 1..=4 {
        let v = vandermonde(d);
        for lambda in partitions_up_to(5, d) {
            let lhs = schur_poly(&lambda, d).mul(&v).unwrap();
            // a_{lambda + delta}: the alternant of the shifted exponents
            let shifted: Vec<u32> = (0..d).map(|i| row(&lambda, i) + (d - 1 - i) as u32).collect();
            let mut rhs = SparsePoly::zero(d, Space::T);
            for (e, c) in v.terms() {
                // each term of the Vandermonde is a signed permutation of delta
                let perm: Vec<u32> = e.as_slice().iter().map(|&x| shifted[d - 1 - x as usize]).collect();
                rhs.add_term(ExponentVector::from(perm), c.clone());
            }
            assert_eq!(lhs, rhs, "lambda {lambda}, d {d}");
        }
    }
}

#[test]
fn schur_is_symmetric_under_adjacent_swaps() {
    let d = 4;
    for lambda in partitions_up_to(6, d) {
        let s = schur_poly(&lambda, d);
        for i in 0..d - 1 {
            let swapped = s.map_exponents(d, Space::T, |e| {
                let mut v = e.as_slice().to_vec();
                v.swap(i, i + 1);
                Some(ExponentVector::from(v))
            });
            assert_eq!(s, swapped, "lambda {lambda}, swap {i}");
        }
    }
}

#[test]
fn lr_small_product() {
    let got = lr_coefficients(&part(&[2, 1]), &part(&[1]), 4).unwrap();
    let want: BTreeMap<Partition, BigInt> = [part(&[3, 1]), part(&[2, 2]), part(&[2, 1, 1])]
        .into_iter()
        .map(|p| (p, BigInt::one()))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn lr_matches_lattice_word_oracle() {
    let shapes: Vec<Partition> = partitions_up_to(3, 3).into_iter().filter(|p| p.size() > 0).collect();
    for lambda in &shapes {
        for mu in &shapes {
            let d = lambda.len() + mu.len();
            assert_eq!(lr_coefficients(lambda, mu, d).unwrap(), lr_oracle(lambda, mu, d), "{lambda} * {mu}");
        }
    }
}

#[test]
fn two_row_products_are_multiplicity_free() {
    // S_(m,m) S_(n,n) in four variables has every coefficient 0 or 1
    for m in 1..=3 {
        for n in 1..=3 {
            let c = lr_coefficients(&part(&[m, m]), &part(&[n, n]), 4).unwrap();
            assert!(c.values().all(BigInt::is_one), "({m},{m}) * ({n},{n})");
            assert_eq!(c, lr_oracle(&part(&[m, m]), &part(&[n, n]), 4));
        }
    }
}

#[test]
fn lr_rejects_small_dimension() {
    assert!(lr_coefficients(&part(&[2, 1]), &part(&[1, 1]), 3).is_err());
}

#[test]
fn hook_dimension_matches_tableau_count() {
    for lambda in partitions_up_to(8, 8) {
        assert_eq!(lambda.hook_dimension(), syt_count(&lambda), "lambda {lambda}");
    }
}

#[test]
fn squared_dimensions_sum_to_factorial() {
    for n in 0..=9u32 {
        let sum: BigUint = enumerate_partitions(n, n as usize).iter().map(|l| l.hook_dimension().pow(2)).sum();
        let fact: BigUint = (1..=n).map(BigUint::from).product();
        assert_eq!(sum, fact, "n = {n}");
    }
}

fn even_rows(p: &Partition) -> bool {
    let parts = p.parts();
    let mut i = 0;
    while i < parts.len() {
        let j = parts[i..].iter().take_while(|&&x| x == parts[i]).count();
        if j % 2 == 1 {
            return false;
        }
        i += j;
    }
    true
}

#[test]
fn even_row_series_support() {
    for (d, cap) in [(3, 10), (4, 10)] {
        let m = extract(&even_row_series(d, cap), d).unwrap();
        for lambda in partitions_up_to(cap, d) {
            let want = if even_rows(&lambda) { Rational::one() } else { Rational::zero() };
            assert_eq!(m.get(&lambda), want, "lambda {lambda}, d {d}");
        }
    }
}

#[test]
fn sum_snn_extracts_to_two_row_squares() {
    let m = extract(&sum_snn(3, 12), 3).unwrap();
    for lambda in partitions_up_to(12, 3) {
        let square = lambda.len() <= 2 && row(&lambda, 0) == row(&lambda, 1);
        assert_eq!(m.get(&lambda), if square { Rational::one() } else { Rational::zero() });
    }
}

#[test]
fn square_of_single_row_sum() {
    // (sum_n S_(n))^2 in two variables is sum_{a >= b} (a - b + 1) S_(a,b)
    let (d, cap) = (2, 12);
    let mut acc = SparsePoly::zero(d, Space::T);
    for n in 0..=cap {
        acc = acc.add(&schur_poly(&part(&[n]), d)).unwrap();
    }
    let h = TruncatedSeries::new(acc, cap);
    let m = extract(&series_mul(&h, &h).unwrap(), d).unwrap();
    for lambda in partitions_up_to(cap, d) {
        let (a, b) = (row(&lambda, 0), row(&lambda, 1));
        assert_eq!(m.get(&lambda), Rational::from_integer(BigInt::from(a - b + 1)), "lambda {lambda}");
    }
}
