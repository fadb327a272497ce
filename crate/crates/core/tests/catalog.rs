//! Catalog integrity, closed form sampling and cross-route agreement of the
//! Hilbert series.

use cochar_core::catalog::{coeff_at, compare_entry, Catalog, BUNDLED_CATALOG};
use cochar_core::hilbert::{hilbert_rpq, hilbert_rpq_direct};
use cochar_core::multiplicity::{extract, young_derive};
use cochar_core::partitions::partitions_up_to;
use cochar_core::series::{Execution, Space};
use cochar_core::Error;

const PINNED_CHECKSUM: &str = "1a3f6c53a448271f17b652fe82177e7dcfd0551c3e3e0dbd05ff317dbfbc5eeb";

#[test]
fn bundled_checksum_is_pinned() {
    assert_eq!(Catalog::bundled().checksum(), PINNED_CHECKSUM);
}

#[test]
fn bundled_catalog_is_complete() {
    let c = Catalog::bundled();
    c.check_complete().unwrap();
    assert_eq!(c.get("R02_3var").unwrap().label_count(), 23);
    assert_eq!(c.get("R03_2var").unwrap().label_count(), 38);
    assert!(matches!(c.get("nope"), Err(Error::UnknownEntry(_))));
}

#[test]
fn corrupted_coefficient_is_detected() {
    let good = compare_entry(Catalog::bundled(), "R02_2var", 2, 16).unwrap();
    assert!(good.equal);

    let needle = "[\"19\", [1, 1]]";
    assert_eq!(BUNDLED_CATALOG.matches(needle).count(), 1);
    let bad = Catalog::from_json(&BUNDLED_CATALOG.replacen(needle, "[\"18\", [1, 1]]", 1)).unwrap();
    assert_ne!(bad.checksum(), PINNED_CHECKSUM);
    let report = compare_entry(&bad, "R02_2var", 2, 16).unwrap();
    assert!(!report.equal);
    let m = report.first_mismatch.unwrap();
    assert_eq!(m.partition.to_string(), "(2,1)");
}

#[test]
fn dropped_entry_fails_completeness() {
    let text = BUNDLED_CATALOG.replacen("\"id\": \"f3_V4\"", "\"id\": \"f3_other\"", 1);
    assert!(matches!(Catalog::from_json(&text), Err(Error::CatalogIncomplete(_))));
}

#[test]
fn malformed_json_reports_location() {
    let err = Catalog::from_json("{\"format\": \"cochar-catalog\",\n \"version\": }").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
}

#[test]
fn coeff_at_matches_expansion() {
    let c = Catalog::bundled();
    for id in ["f", "f2", "f3_V4", "R02_2var", "R03_2var", "R02_3var"] {
        let entry = c.get(id).unwrap();
        let d = entry.nvars.max(2);
        let series = entry.expand(d, 12).unwrap();
        for lambda in partitions_up_to(12, d) {
            let v = lambda.to_v_exponent(d).unwrap();
            let n: Vec<u32> = v.as_slice()[..entry.nvars].to_vec();
            if v.as_slice()[entry.nvars..].iter().any(|&x| x > 0) {
                continue;
            }
            assert_eq!(coeff_at(entry, &n).unwrap(), series.coeff(&v), "{id} at {lambda}");
        }
    }
}

#[test]
fn coeff_at_rejects_leading_only_entries() {
    let entry = Catalog::bundled().get("R04_2var").unwrap();
    assert!(matches!(coeff_at(entry, &[1, 1]), Err(Error::UnsupportedEntry(..))));
    assert!(matches!(entry.expand(2, 4), Err(Error::UnsupportedEntry(..))));
}

#[test]
fn expansion_beyond_declared_range_is_refused() {
    let entry = Catalog::bundled().get("R02_2var").unwrap();
    assert!(matches!(entry.expand(3, 6), Err(Error::OutOfScope { .. })));
}

#[test]
fn hilbert_routes_agree() {
    for p in 0..=2 {
        for q in 0..=2 {
            if p + q == 0 {
                continue;
            }
            for d in 1..=3 {
                let a = hilbert_rpq(p, q, d, 8).unwrap();
                let b = hilbert_rpq_direct(p, q, d, 8).unwrap();
                assert_eq!(a, b, "p={p} q={q} d={d}");
                assert_eq!(a.space(), Space::T);
            }
        }
    }
    assert!(hilbert_rpq(0, 0, 2, 4).is_err());
}

#[test]
fn multiplicities_are_nonnegative_integers() {
    for (p, q) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)] {
        let m = extract(&hilbert_rpq(p, q, 3, 9).unwrap(), 3).unwrap();
        assert!(m.is_nonnegative_integral(), "p={p} q={q}");
        assert!(young_derive(&m).unwrap().is_nonnegative_integral());
    }
}

#[test]
fn products_are_deterministic_across_strategies() {
    let h = hilbert_rpq(1, 1, 3, 10).unwrap();
    let seq = h.mul_with(&h, Execution::Sequential).unwrap();
    let par = h.mul_with(&h, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    assert_eq!(extract(&seq, 3).unwrap(), extract(&par, 3).unwrap());
    for _ in 0..3 {
        assert_eq!(h.mul_with(&h, Execution::Parallel).unwrap(), par);
    }
}
