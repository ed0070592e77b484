//! Enumeration of inscribed polygons.
//!
//! An inscribed polygon is determined by a cyclically ordered subset of the
//! domain's vertices; convexity of the domain puts every such polygon inside
//! it, so the subset is the whole datum. The boundary length oracle
//! quantifies over all proper subsets of size at least three.

/// All vertex subsets of `{0, .., n-1}` of size at least three, excluding
/// the full set, each in increasing index order. Panics above twelve
/// vertices to keep the enumeration from blowing up.
pub fn enumerate_inscribed(n: usize) -> Vec<Vec<usize>> {
    assert!(n >= 3, "need at least three vertices");
    assert!(n <= 12, "enumeration is exponential, refusing {n} vertices");
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones();
        if size < 3 || size == n as u32 {
            continue;
        }
        out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
    }
    out
}
