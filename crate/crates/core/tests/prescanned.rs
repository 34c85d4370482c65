//! The frozen defect table against fresh exhaustive scans.

use simhyp::group::{GroupElement, GroupSpec};
use simhyp::qm::{counting_defect_scan, PRESCANNED_DEFECTS, PRESCAN_RADIUS};

fn scan(rank: u32, pattern: &str, radius: usize) -> i64 {
    let g = GroupSpec::free(rank).unwrap();
    let GroupElement::Free(w) = g.parse_element(pattern).unwrap() else {
        unreachable!()
    };
    counting_defect_scan(rank, &w, radius)
}

#[test]
fn table_matches_scan_at_full_radius() {
    let &(rank, pattern, value) = PRESCANNED_DEFECTS.iter().find(|e| e.1 == "ab").unwrap();
    assert_eq!(scan(rank, pattern, PRESCAN_RADIUS), value);
}

#[test]
fn table_matches_smaller_scans() {
    for &(rank, pattern, value) in PRESCANNED_DEFECTS {
        assert_eq!(scan(rank, pattern, 6), value, "{pattern}");
    }
}
