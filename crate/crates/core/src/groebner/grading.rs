//! Positive gradings making every generator of an ideal homogeneous.
//!
//! Jet equations of a quasi-homogeneous variety are homogeneous for a
//! positive grading that is rarely the standard one, and Buchberger's
//! algorithm under the matching weighted order behaves far better than
//! under plain degrevlex.

use num_integer::Integer;

use crate::polyring::IdealPresentation;

const SEARCH_LIMIT: u64 = 100_000;

/// Small positive weights for which every generator is homogeneous, or
/// `None` when the search finds none. The all-ones grading is preferred.
pub fn positive_grading(ideal: &IdealPresentation) -> Option<Vec<u32>> {
    let n = ideal.nvars();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for g in ideal.generators() {
        let mut terms = g.terms().map(|(m, _)| m.exponents());
        let Some(first) = terms.next() else { continue };
        for e in terms {
            rows.push(
                e.iter()
                    .zip(first)
                    .map(|(&a, &b)| a as i128 - b as i128)
                    .collect(),
            );
        }
    }
    if rows.iter().all(|r| r.iter().sum::<i128>() == 0) {
        return Some(vec![1; n]);
    }
    let echelon = reduced_echelon(n, rows)?;
    let pivot_cols: Vec<usize> = echelon.iter().map(|(c, _)| *c).collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    if free.is_empty() {
        return None;
    }
    let k = free.len() as u32;
    let mut top = 1u64;
    while top < 16 && (top + 1).checked_pow(k).is_some_and(|c| c <= SEARCH_LIMIT) {
        top += 1;
    }

    let mut best: Option<Vec<u32>> = None;
    let mut assign = vec![1u64; free.len()];
    loop {
        if let Some(w) = solve(n, &echelon, &free, &assign) {
            let better = best
                .as_ref()
                .is_none_or(|b| (w.iter().max(), &w) < (b.iter().max(), b));
            if better {
                best = Some(w);
            }
        }
        let mut i = 0;
        while i < assign.len() && assign[i] == top {
            assign[i] = 1;
            i += 1;
        }
        if i == assign.len() {
            return best;
        }
        assign[i] += 1;
    }
}

/// Fully reduced row echelon form as `(pivot column, row)`, over the
/// integers with primitive rows. `None` on overflow.
fn reduced_echelon(n: usize, rows: Vec<Vec<i128>>) -> Option<Vec<(usize, Vec<i128>)>> {
    let mut echelon: Vec<(usize, Vec<i128>)> = Vec::new();
    for mut r in rows {
        for (c, p) in &echelon {
            if r[*c] != 0 {
                r = eliminate(&r, p, *c)?;
            }
        }
        let Some(c) = (0..n).find(|&c| r[c] != 0) else {
            continue;
        };
        for (_, p) in echelon.iter_mut() {
            if p[c] != 0 {
                *p = eliminate(p, &r, c)?;
            }
        }
        echelon.push((c, r));
    }
    Some(echelon)
}

/// `r·p[c] - p·r[c]`, made primitive.
fn eliminate(r: &[i128], p: &[i128], c: usize) -> Option<Vec<i128>> {
    let (a, b) = (p[c], r[c]);
    let g = a.gcd(&b);
    let (a, b) = (a / g, b / g);
    let mut out = Vec::with_capacity(r.len());
    for (x, y) in r.iter().zip(p) {
        out.push(x.checked_mul(a)?.checked_sub(y.checked_mul(b)?)?);
    }
    let g = out.iter().fold(0i128, |g, x| g.gcd(x));
    if g > 1 {
        for x in &mut out {
            *x /= g;
        }
    }
    Some(out)
}

fn solve(
    n: usize,
    echelon: &[(usize, Vec<i128>)],
    free: &[usize],
    assign: &[u64],
) -> Option<Vec<u32>> {
    // pivot value = num / den, with den > 0
    let mut values: Vec<(i128, i128)> = vec![(0, 1); n];
    for (&f, &a) in free.iter().zip(assign) {
        values[f] = (a as i128, 1);
    }
    for (c, row) in echelon {
        let mut num = 0i128;
        for &f in free {
            num = num.checked_sub(row[f].checked_mul(values[f].0)?)?;
        }
        let mut den = row[*c];
        if den < 0 {
            num = -num;
            den = -den;
        }
        if num <= 0 {
            return None;
        }
        let g = num.gcd(&den);
        values[*c] = (num / g, den / g);
    }
    let l = values.iter().fold(1i128, |l, (_, d)| l.lcm(d));
    let scaled: Vec<i128> = values
        .iter()
        .map(|(num, den)| num.checked_mul(l / den))
        .collect::<Option<_>>()?;
    let g = scaled.iter().fold(0i128, |g, x| g.gcd(x));
    scaled.iter().map(|x| u32::try_from(x / g).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::FieldSpec;

    fn grading(vars: &[&str], gens: &[&str]) -> Option<Vec<u32>> {
        positive_grading(
            &IdealPresentation::from_strings(vars, FieldSpec::RATIONALS, gens).unwrap(),
        )
    }

    #[test]
    fn examples() {
        assert_eq!(grading(&["x", "y"], &["x*y"]), Some(vec![1, 1]));
        assert_eq!(grading(&["x", "y"], &["x^2 + y^3"]), Some(vec![3, 2]));
        assert_eq!(
            grading(&["x", "y", "z"], &["y - x^2", "z - x^3"]),
            Some(vec![1, 2, 3])
        );
        assert_eq!(grading(&["x", "y"], &["x - 1"]), None);
        assert_eq!(grading(&["x", "y"], &["x - y^2", "y - x^2"]), None);
        assert_eq!(grading(&["x"], &[]), Some(vec![1]));
    }

    #[test]
    fn result_makes_every_generator_homogeneous() {
        let i = IdealPresentation::from_strings(
            &["a", "b", "c", "d"],
            FieldSpec::RATIONALS,
            &["a^2*b - c^3", "b*d - c^2", "a*d^2 - b^3"],
        )
        .unwrap();
        let w = positive_grading(&i).unwrap();
        for g in i.generators() {
            let degs: Vec<u64> = g
                .terms()
                .map(|(m, _)| {
                    m.exponents()
                        .iter()
                        .zip(&w)
                        .map(|(&e, &w)| e as u64 * w as u64)
                        .sum()
                })
                .collect();
            assert!(degs.windows(2).all(|p| p[0] == p[1]), "{w:?}");
        }
    }
}
