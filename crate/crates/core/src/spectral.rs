//! Isotypic weights and projections of functions on `k`-subsets.

use crate::error::{Error, Result};
use crate::factorization::TransformPlan;
use crate::transform::{forward, inverse, FunctionVector, OpCounter};

/// Squared norms of the isotypic parts `f_a`, `a = 0..=s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub weights: Vec<f64>,
    pub total: f64,
    pub shares: Vec<f64>,
}

/// Forward transform followed by per-shape sums of squares.
///
/// `total` and `shares` are derived from the weights and not counted.
pub fn weights(plan: &TransformPlan, f: &FunctionVector, counter: &mut OpCounter) -> Result<SpectralReport> {
    let c = forward(plan, f, counter)?;
    let mut weights = vec![0.0; plan.max_component() + 1];
    for (v, &a) in c.values().iter().zip(plan.coefficient_shapes()) {
        weights[a] += v * v;
    }
    counter.add(c.values().len() as u64);
    let total: f64 = weights.iter().sum();
    let shares = weights
        .iter()
        .map(|w| if total > 0.0 { w / total } else { 0.0 })
        .collect();
    Ok(SpectralReport {
        weights,
        total,
        shares,
    })
}

/// `f_H`: the part of `f` in the components listed in `components`.
pub fn project(
    plan: &TransformPlan,
    f: &FunctionVector,
    components: &[usize],
    counter: &mut OpCounter,
) -> Result<FunctionVector> {
    let s = plan.max_component();
    let mut keep = vec![false; s + 1];
    for &a in components {
        *keep.get_mut(a).ok_or_else(|| {
            Error::argument(format!("component {a} outside 0..={s}"))
        })? = true;
    }
    let mut c = forward(plan, f, counter)?;
    for (v, &a) in c.values_mut().iter_mut().zip(plan.coefficient_shapes()) {
        if !keep[a] {
            *v = 0.0;
        }
    }
    inverse(plan, &c, counter)
}

/// Parses a component set: `"1"`, `"0,2"`, or `""` for the empty set.
pub fn parse_components(text: &str, max_component: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let a: usize = part
            .parse()
            .map_err(|_| Error::argument(format!("component {part:?} is not an integer")))?;
        if a > max_component {
            return Err(Error::argument(format!("component {a} outside 0..={max_component}")));
        }
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Upper bound `(2n - 1) C(n, k)` on counted operations of [`weights`].
pub fn weights_op_bound(n: usize, k: usize) -> u128 {
    (2 * n as u128 - 1) * crate::combinatorics::binomial(n, k)
}

/// Upper bound `4 (n - 1) C(n, k)` on counted operations of [`project`].
pub fn project_op_bound(n: usize, k: usize) -> u128 {
    4 * (n as u128 - 1) * crate::combinatorics::binomial(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::build_plan;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn constant_weights() {
        let plan = build_plan(6, 2).unwrap();
        let f = FunctionVector::constant(6, 2, 1.0).unwrap();
        let r = weights(&plan, &f, &mut OpCounter::new()).unwrap();
        assert!((r.weights[0] - 15.0).abs() < 1e-10);
        assert!(r.weights[1..].iter().all(|w| w.abs() < 1e-10));
        assert!((r.shares[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_weights_four_two() {
        let plan = build_plan(4, 2).unwrap();
        let idx = plan.word_index(&[1, 1, 2, 2]).unwrap();
        let f = FunctionVector::delta(4, 2, idx).unwrap();
        let r = weights(&plan, &f, &mut OpCounter::new()).unwrap();
        assert!(close(&r.weights, &[1.0 / 6.0, 0.5, 1.0 / 3.0], 1e-12));
        assert!((r.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_and_empty_bands() {
        let plan = build_plan(7, 3).unwrap();
        let values: Vec<f64> = (0..plan.dim()).map(|j| ((j * 37) % 11) as f64 - 4.0).collect();
        let f = FunctionVector::new(7, 3, values).unwrap();
        let all: Vec<usize> = (0..=3).collect();
        let g = project(&plan, &f, &all, &mut OpCounter::new()).unwrap();
        assert!(close(g.values(), f.values(), 1e-9));
        let z = project(&plan, &f, &[], &mut OpCounter::new()).unwrap();
        assert!(z.values().iter().all(|v| v.abs() < 1e-12));
        assert!(project(&plan, &f, &[4], &mut OpCounter::new()).is_err());
    }

    #[test]
    fn band_pass_zeroes_excluded_weight() {
        let plan = build_plan(4, 2).unwrap();
        let f = FunctionVector::delta(4, 2, 0).unwrap();
        let g = project(&plan, &f, &[0, 1], &mut OpCounter::new()).unwrap();
        let r = weights(&plan, &g, &mut OpCounter::new()).unwrap();
        assert!(r.weights[2].abs() < 1e-10);
    }

    #[test]
    fn component_parsing() {
        assert_eq!(parse_components("1", 2).unwrap(), vec![1]);
        assert_eq!(parse_components("2, 0,2", 2).unwrap(), vec![0, 2]);
        assert_eq!(parse_components("", 2).unwrap(), Vec::<usize>::new());
        assert!(parse_components("3", 2).is_err());
        assert!(parse_components("x", 2).is_err());
    }
}
