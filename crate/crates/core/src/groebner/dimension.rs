//! Krull dimension of `k[x_1..x_n]/I` from the leading-term ideal: `n`
//! minus the size of a smallest variable set meeting the support of every
//! leading monomial.

/// Inclusion-minimal supports, smallest first.
fn minimal_supports(supports: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = supports.to_vec();
    for s in &mut sets {
        s.sort_unstable();
        s.dedup();
    }
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in sets {
        if !out
            .iter()
            .any(|t| t.iter().all(|x| s.binary_search(x).is_ok()))
        {
            out.push(s);
        }
    }
    out
}

/// Size of a minimum hitting set, or `None` when some support is empty (the
/// unit ideal).
pub fn min_hitting_set(nvars: usize, supports: &[Vec<usize>]) -> Option<usize> {
    let sets = minimal_supports(supports);
    if sets.iter().any(|s| s.is_empty()) {
        return None;
    }
    let mut chosen = vec![false; nvars];
    let mut best = nvars.min(sets.len());
    search(&sets, &mut chosen, 0, &mut best);
    Some(best)
}

fn search(sets: &[Vec<usize>], chosen: &mut [bool], size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    // the unhit set with the fewest elements drives the branching
    let unhit: Vec<&Vec<usize>> = sets
        .iter()
        .filter(|s| !s.iter().any(|&v| chosen[v]))
        .collect();
    let Some(pick) = unhit.iter().min_by_key(|s| s.len()) else {
        *best = size;
        return;
    };
    // disjoint unhit sets each need their own element
    let mut used = vec![false; chosen.len()];
    let mut lower = 0;
    for s in &unhit {
        if s.iter().all(|&v| !used[v]) {
            lower += 1;
            for &v in s.iter() {
                used[v] = true;
            }
        }
    }
    if size + lower >= *best {
        return;
    }
    for &v in pick.iter() {
        chosen[v] = true;
        search(sets, chosen, size + 1, best);
        chosen[v] = false;
    }
}

/// Dimension of the monomial quotient with these generator supports;
/// `-1` for the unit ideal.
pub fn monomial_dimension(nvars: usize, supports: &[Vec<usize>]) -> i64 {
    match min_hitting_set(nvars, supports) {
        None => -1,
        Some(h) => (nvars - h) as i64,
    }
}

/// Exhaustive check over all variable subsets; exponential, for testing the
/// search on small inputs.
pub fn monomial_dimension_exhaustive(nvars: usize, supports: &[Vec<usize>]) -> i64 {
    assert!(nvars <= 24, "exhaustive dimension is for small inputs");
    if supports.iter().any(|s| s.is_empty()) {
        return -1;
    }
    let masks: Vec<u32> = supports
        .iter()
        .map(|s| s.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let mut best = 0;
    for subset in 0u32..(1u32 << nvars) {
        let size = subset.count_ones() as i64;
        if size > best && masks.iter().all(|&m| m & !subset != 0) {
            best = size;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(monomial_dimension(3, &[]), 3);
        assert_eq!(monomial_dimension(2, &[vec![0, 1]]), 1);
        assert_eq!(monomial_dimension(2, &[vec![0], vec![1]]), 0);
        assert_eq!(monomial_dimension(2, &[vec![]]), -1);
        // a 5-cycle needs 3 vertices to cover its edges
        let cycle: Vec<Vec<usize>> = (0..5).map(|i| vec![i, (i + 1) % 5]).collect();
        assert_eq!(monomial_dimension(5, &cycle), 2);
    }

    #[test]
    fn agrees_with_exhaustive_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(1..=14);
            let k = rng.gen_range(0..=10);
            let supports: Vec<Vec<usize>> = (0..k)
                .map(|_| {
                    let size = rng.gen_range(1..=3.min(n));
                    (0..size).map(|_| rng.gen_range(0..n)).collect()
                })
                .collect();
            assert_eq!(
                monomial_dimension(n, &supports),
                monomial_dimension_exhaustive(n, &supports),
                "{n} {supports:?}"
            );
        }
    }
}
