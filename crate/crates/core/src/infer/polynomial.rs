//! Degree-`N` polynomial rates through arbitrary states, and their
//! decomposition into mass-action reactions.
//!
//! With `n = |S_N|` data states `a^1..a^n`, the matrix `M_ij = a^i^(x^j)`
//! (columns in lexicographic order of `S_N`) maps falling-factorial
//! coefficients to rate values. `M c = b` is solved exactly when all rates
//! are exact rationals, otherwise in `f64` with partial pivoting.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::rate_table::RateTable;
use crate::error::{InferError, Result};
use crate::network::{
    enumerate_simplex, falling_factorial, simplex_size, Rate, Reaction, ReactionSystem, StateVector,
    TransitionVector,
};

/// Default float-mode pivot tolerance, relative to `max |M_ij|`.
pub const DEFAULT_PIVOT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialFit {
    pub order: u64,
    /// `S_N` in lexicographic order; `coefficients[j]` multiplies `x^(basis[j])`.
    pub basis: Vec<StateVector>,
    pub coefficients: Vec<Rate>,
    /// `max |M c - b|`.
    pub residual_max: f64,
    /// Absolute pivot values in elimination order.
    pub pivots: Vec<f64>,
    pub exact: bool,
}

impl PolynomialFit {
    /// `sum_j c_j x^(basis[j])`.
    pub fn evaluate(&self, x: &StateVector) -> Result<Rate> {
        let mut acc = Rate::zero();
        for (b, c) in self.basis.iter().zip(&self.coefficients) {
            acc = acc + c.scale(&falling_factorial(x, &b.as_complex())?);
        }
        Ok(acc)
    }
}

/// Fits the unique polynomial of degree `order` through `rates_for_z`.
///
/// Exactly `|S_order|` states are required.
pub fn fit_polynomial(rates_for_z: &BTreeMap<StateVector, Rate>, order: u64) -> Result<PolynomialFit> {
    fit_polynomial_with(rates_for_z, order, DEFAULT_PIVOT_TOLERANCE)
}

pub fn fit_polynomial_with(
    rates_for_z: &BTreeMap<StateVector, Rate>,
    order: u64,
    pivot_tolerance: f64,
) -> Result<PolynomialFit> {
    let dim = match rates_for_z.keys().next() {
        Some(x) => x.dim(),
        None => return Err(wrong_count(simplex_size(1, order).to_string(), 0)),
    };
    let basis = enumerate_simplex(dim, order)?;
    let n = basis.len();
    if rates_for_z.len() != n {
        return Err(wrong_count(n.to_string(), rates_for_z.len()));
    }
    let rows: Vec<Vec<num_bigint::BigUint>> = rates_for_z
        .keys()
        .map(|a| basis.iter().map(|x| falling_factorial(a, &x.as_complex())).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let rhs: Vec<&Rate> = rates_for_z.values().collect();

    let fit = if rhs.iter().all(|r| r.is_exact()) {
        solve_exact(&rows, &rhs)?
    } else {
        solve_float(&rows, &rhs, pivot_tolerance)?
    };
    let (coefficients, pivots, exact) = fit;

    // Residual against the original system.
    let mut residual_max = 0.0f64;
    for (row, b) in rows.iter().zip(&rhs) {
        let mut acc = Rate::zero();
        for (m, c) in row.iter().zip(&coefficients) {
            acc = acc + c.scale(m);
        }
        residual_max = residual_max.max((&acc - *b).abs().to_f64());
    }
    Ok(PolynomialFit { order, basis, coefficients, residual_max, pivots, exact })
}

fn wrong_count(expected: String, found: usize) -> crate::Error {
    InferError::WrongCount { z: String::new(), expected, found }.into()
}

fn singular(detail: String) -> crate::Error {
    InferError::SingularMatrix { z: String::new(), detail }.into()
}

type Solution = (Vec<Rate>, Vec<f64>, bool);

fn solve_exact(rows: &[Vec<num_bigint::BigUint>], rhs: &[&Rate]) -> Result<Solution> {
    let n = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r: Vec<BigRational> =
                row.iter().map(|v| BigRational::from_integer(BigInt::from(v.clone()))).collect();
            match b {
                Rate::Exact(q) => r.push(q.clone()),
                Rate::Float(_) => unreachable!("exact solve needs exact right-hand side"),
            }
            r
        })
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let p = (col..n)
            .max_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()).then(b.cmp(&a)))
            .unwrap();
        if m[p][col].is_zero() {
            return Err(singular(format!("no pivot in column {}", col + 1)));
        }
        m.swap(col, p);
        pivots.push(m[col][col].abs().to_f64().unwrap_or(f64::INFINITY));
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[col][col];
            for k in col..=n {
                let delta = &factor * &m[col][k];
                m[r][k] -= delta;
            }
        }
    }
    let mut c = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc -= &m[i][j] * &c[j];
        }
        c[i] = acc / &m[i][i];
    }
    Ok((c.into_iter().map(Rate::Exact).collect(), pivots, true))
}

fn solve_float(rows: &[Vec<num_bigint::BigUint>], rhs: &[&Rate], tolerance: f64) -> Result<Solution> {
    let n = rows.len();
    let mut m: Vec<Vec<f64>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r: Vec<f64> = row.iter().map(|v| v.to_f64().unwrap_or(f64::INFINITY)).collect();
            r.push(b.to_f64());
            r
        })
        .collect();
    let scale = m.iter().flat_map(|r| r[..n].iter()).fold(0.0f64, |a, &v| a.max(v.abs()));
    let cutoff = tolerance * scale;
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let p = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()).then(b.cmp(&a))).unwrap();
        let pivot = m[p][col].abs();
        if pivot <= cutoff {
            return Err(singular(format!("pivot {pivot:e} in column {} below {cutoff:e}", col + 1)));
        }
        m.swap(col, p);
        pivots.push(pivot);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..=n {
                m[r][k] -= factor * m[col][k];
            }
        }
    }
    let mut c = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = m[i][n];
        for j in i + 1..n {
            acc -= m[i][j] * c[j];
        }
        c[i] = acc / m[i][i];
    }
    Ok((c.into_iter().map(Rate::Float).collect(), pivots, false))
}

/// Order `N` with `|S_N| = count` in dimension `dim`, if any.
pub fn order_for_count(dim: usize, count: usize) -> Option<u64> {
    let target = num_bigint::BigUint::from(count);
    (0u64..)
        .map(|n| (n, simplex_size(dim, n)))
        .take_while(|(_, size)| *size <= target)
        .find(|(_, size)| *size == target)
        .map(|(n, _)| n)
}

/// Fits every transition vector of `table`. Each `z` gets the degree whose
/// simplex size matches its number of states, which must not exceed `max_order`.
pub fn fit_rate_table(table: &RateTable, max_order: u64) -> Result<BTreeMap<TransitionVector, PolynomialFit>> {
    let mut fits = BTreeMap::new();
    for z in table.transition_vectors() {
        let per_z = table.rates_for(z).unwrap();
        let label = z.to_string();
        let order = order_for_count(table.dim(), per_z.len()).filter(|&n| n <= max_order).ok_or_else(|| {
            let sizes: Vec<String> =
                (0..=max_order).map(|n| simplex_size(table.dim(), n).to_string()).collect();
            InferError::WrongCount { z: label.clone(), expected: sizes.join(" or "), found: per_z.len() }
        })?;
        let fit = fit_polynomial(per_z, order).map_err(|e| match e {
            crate::Error::Infer(InferError::SingularMatrix { detail, .. }) => {
                InferError::SingularMatrix { z: label.clone(), detail }.into()
            }
            crate::Error::Infer(InferError::WrongCount { expected, found, .. }) => {
                InferError::WrongCount { z: label.clone(), expected, found }.into()
            }
            other => other,
        })?;
        fits.insert(z.clone(), fit);
    }
    Ok(fits)
}

/// Turns falling-factorial coefficients into reactions `x^j -> x^j + z`.
///
/// Each vector's length must be `|S_N|` for some `N`; entry `j` belongs to the
/// `j`-th state of `S_N` in lexicographic order.
pub fn polynomial_to_network(coefficients: &BTreeMap<TransitionVector, Vec<Rate>>, dim: usize) -> Result<ReactionSystem> {
    let mut reactions = Vec::new();
    for (z, coeffs) in coefficients {
        let order = order_for_count(dim, coeffs.len())
            .ok_or_else(|| InferError::WrongCount { z: z.to_string(), expected: "a simplex-size number of".into(), found: coeffs.len() })?;
        let basis = enumerate_simplex(dim, order)?;
        for (x, c) in basis.iter().zip(coeffs) {
            if c.is_negative() {
                return Err(InferError::NegativeCoefficient { z: z.clone(), state: x.clone(), coefficient: c.to_f64() }.into());
            }
        }
        for (x, c) in basis.iter().zip(coeffs) {
            if !c.is_positive() {
                continue;
            }
            let product = x
                .shifted(z)
                .ok_or_else(|| InferError::InvalidProduct { z: z.clone(), state: x.clone() })?;
            reactions.push(Reaction::new(x.as_complex(), product.as_complex(), c.clone())?);
        }
    }
    ReactionSystem::with_dimension(dim, reactions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{parse_network, systems_equal};

    fn s(v: &[u64]) -> StateVector {
        StateVector::new(v.to_vec())
    }

    fn data(points: &[(&[u64], i64)]) -> BTreeMap<StateVector, Rate> {
        points.iter().map(|(x, v)| (s(x), Rate::from_integer(*v))).collect()
    }

    #[test]
    fn linear_rates_from_scattered_states() {
        let z2 = data(&[(&[10, 10], 20), (&[9, 11], 18), (&[9, 10], 18)]);
        let fit = fit_polynomial(&z2, 1).unwrap();
        assert_eq!(fit.coefficients, vec![Rate::zero(), Rate::zero(), Rate::from_integer(2)]);
        assert_eq!(fit.residual_max, 0.0);

        let z3 = data(&[(&[8, 11], 33), (&[8, 10], 30), (&[7, 11], 33)]);
        let fit = fit_polynomial(&z3, 1).unwrap();
        assert_eq!(fit.coefficients, vec![Rate::zero(), Rate::from_integer(3), Rate::zero()]);
    }

    #[test]
    fn float_mode_agrees() {
        let z2: BTreeMap<StateVector, Rate> =
            [(s(&[10, 10]), 20.0), (s(&[9, 11]), 18.0), (s(&[9, 10]), 18.0)].into_iter().map(|(x, v)| (x, Rate::Float(v))).collect();
        let fit = fit_polynomial(&z2, 1).unwrap();
        assert!(!fit.exact);
        let c: Vec<f64> = fit.coefficients.iter().map(Rate::to_f64).collect();
        assert!((c[0]).abs() < 1e-9 && c[1].abs() < 1e-9 && (c[2] - 2.0).abs() < 1e-9);
        assert!(fit.residual_max < 1e-9);
    }

    #[test]
    fn hyperplane_states_are_singular() {
        let d = data(&[(&[2, 0], 0), (&[1, 1], 1), (&[0, 2], 2)]);
        let err = fit_polynomial(&d, 1).unwrap_err();
        assert!(matches!(err, crate::Error::Infer(InferError::SingularMatrix { .. })));
        let float: BTreeMap<_, _> = d.iter().map(|(x, r)| (x.clone(), r.to_float())).collect();
        assert!(fit_polynomial(&float, 1).is_err());
    }

    #[test]
    fn wrong_count() {
        let d = data(&[(&[2, 0], 0), (&[1, 1], 1)]);
        assert!(matches!(fit_polynomial(&d, 1).unwrap_err(), crate::Error::Infer(InferError::WrongCount { .. })));
    }

    #[test]
    fn network_from_coefficients() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(TransitionVector::new(vec![1, 0]).unwrap(), vec![Rate::one()]);
        coeffs.insert(
            TransitionVector::new(vec![-1, 1]).unwrap(),
            vec![Rate::zero(), Rate::zero(), Rate::from_integer(2)],
        );
        coeffs.insert(
            TransitionVector::new(vec![0, -1]).unwrap(),
            vec![Rate::zero(), Rate::from_integer(3), Rate::zero()],
        );
        let sys = polynomial_to_network(&coeffs, 2).unwrap();
        let expected = parse_network("species: X1 X2\n0 -> X1 @ 1\nX1 -> X2 @ 2\nX2 -> 0 @ 3").unwrap();
        assert!(systems_equal(&sys, &expected).unwrap());
    }

    #[test]
    fn constant_rate_cannot_remove_molecules() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(TransitionVector::new(vec![-1, 0]).unwrap(), vec![Rate::one()]);
        assert!(matches!(
            polynomial_to_network(&coeffs, 2).unwrap_err(),
            crate::Error::Infer(InferError::InvalidProduct { .. })
        ));
        coeffs.clear();
        coeffs.insert(TransitionVector::new(vec![1, 0]).unwrap(), vec![Rate::zero(), Rate::from_integer(-1), Rate::zero()]);
        assert!(matches!(
            polynomial_to_network(&coeffs, 2).unwrap_err(),
            crate::Error::Infer(InferError::NegativeCoefficient { .. })
        ));
    }

    #[test]
    fn zero_coefficients_give_empty_network() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(TransitionVector::new(vec![1]).unwrap(), vec![Rate::zero(), Rate::zero()]);
        assert!(polynomial_to_network(&coeffs, 1).unwrap().is_empty());
    }

    #[test]
    fn per_transition_orders() {
        let mut table = RateTable::new(2);
        let z1 = TransitionVector::new(vec![1, 0]).unwrap();
        table.insert(z1.clone(), s(&[10, 10]), Rate::one()).unwrap();
        let fits = fit_rate_table(&table, 1).unwrap();
        assert_eq!(fits[&z1].order, 0);
        assert_eq!(order_for_count(2, 6), Some(2));
        assert_eq!(order_for_count(2, 4), None);
    }
}
