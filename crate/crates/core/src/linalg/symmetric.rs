use crate::error::{Error, Result};

/// Elementary symmetric polynomial `e_m(x_1, …, x_n)` via the product
/// expansion of `∏(1 + x_i z)`; `e_0 = 1`. For eigenvalues of `A` this is
/// `Tr ∧^m A`.
pub fn elementary_symmetric(values: &[f64], m: usize) -> Result<f64> {
    let n = values.len();
    if m > n {
        return Err(Error::OutOfRange {
            what: "elementary symmetric degree",
            value: m as f64,
            range: format!("[0, {n}]"),
        });
    }
    Ok(elementary_symmetric_all(values)[m])
}

/// All of `e_0, …, e_n`.
pub fn elementary_symmetric_all(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (i, &x) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += x * e[k - 1];
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn brute_force(values: &[f64], m: usize) -> f64 {
        let n = values.len();
        (0u32..(1 << n))
            .filter(|mask| mask.count_ones() as usize == m)
            .map(|mask| {
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| values[i])
                    .product::<f64>()
            })
            .sum()
    }

    #[test]
    fn small_examples() {
        assert_eq!(elementary_symmetric(&[1.0, 2.0, 3.0], 0).unwrap(), 1.0);
        assert_eq!(elementary_symmetric(&[1.0, 2.0, 3.0], 2).unwrap(), 11.0);
        assert_eq!(elementary_symmetric(&[1.0, 2.0, 3.0], 3).unwrap(), 6.0);
    }

    #[test]
    fn out_of_range() {
        let err = elementary_symmetric(&[1.0, 2.0], 3).unwrap_err();
        assert_eq!(err.code(), "E_OUT_OF_RANGE");
    }

    #[test]
    fn matches_subset_enumeration() {
        let mut rng = crate::linalg::random::rng_from_seed(17);
        for n in 0..=10 {
            let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 3.0).collect();
            for m in 0..=n {
                let fast = elementary_symmetric(&v, m).unwrap();
                let slow = brute_force(&v, m);
                assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1.0), "n={n} m={m}");
            }
        }
    }
}
