//! Circuit evaluation, exactly over rationals or modulo the fixed Mersenne
//! prime 2^61 − 1.

use super::{Circuit, GateKind, VariableId};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// The modulus used for all probabilistic identity checks.
pub const MOD61: u64 = (1u64 << 61) - 1;

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> Result<u64> {
    if a % p == 0 {
        return Err(Error::Evaluation("division by zero modulo p".into()));
    }
    Ok(pow_mod(a, p - 2, p))
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let m = x % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    m.to_u64().expect("reduced residue fits u64")
}

/// Reduces a rational constant into the prime field.
pub fn rational_mod(r: &BigRational, p: u64) -> Result<u64> {
    let numer = bigint_mod(r.numer(), p);
    let denom = bigint_mod(r.denom(), p);
    Ok(mul_mod(numer, inv_mod(denom, p)?, p))
}

/// Evaluates the circuit at `point` modulo the prime `p`.
pub fn evaluate_mod(c: &Circuit, point: &BTreeMap<VariableId, u64>, p: u64) -> Result<u64> {
    let mut value = vec![0u64; c.len()];
    for (id, gate) in c.gates().iter().enumerate() {
        value[id] = match &gate.kind {
            GateKind::Input(v) => *point.get(v).ok_or_else(|| {
                Error::Evaluation(format!("unassigned variable {}", v.spelling()))
            })? % p,
            GateKind::Const(r) => rational_mod(r, p)?,
            GateKind::Add => gate
                .children
                .iter()
                .fold(0u64, |acc, &ch| add_mod(acc, value[ch], p)),
            GateKind::Mul => gate
                .children
                .iter()
                .fold(1u64, |acc, &ch| mul_mod(acc, value[ch], p)),
        };
    }
    Ok(value[c.output()])
}

/// Exact evaluation over arbitrary-precision rationals.
pub fn evaluate_exact(
    c: &Circuit,
    point: &BTreeMap<VariableId, BigRational>,
) -> Result<BigRational> {
    let mut value = vec![BigRational::zero(); c.len()];
    for (id, gate) in c.gates().iter().enumerate() {
        value[id] = match &gate.kind {
            GateKind::Input(v) => point
                .get(v)
                .ok_or_else(|| Error::Evaluation(format!("unassigned variable {}", v.spelling())))?
                .clone(),
            GateKind::Const(r) => r.clone(),
            GateKind::Add => gate
                .children
                .iter()
                .fold(BigRational::zero(), |acc, &ch| acc + &value[ch]),
            GateKind::Mul => gate
                .children
                .iter()
                .fold(BigRational::from_integer(1.into()), |acc, &ch| {
                    acc * &value[ch]
                }),
        };
    }
    Ok(value.swap_remove(c.output()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Circuit for Hom_{K2,2} = x11 + 2·x12 + x22 (the repeated child
    /// realizes the coefficient 2).
    fn hom_k2_circuit() -> Circuit {
        let mut b = CircuitBuilder::new();
        let x11 = b.input(VariableId::hom(1, 1));
        let x12 = b.input(VariableId::hom(1, 2));
        let x22 = b.input(VariableId::hom(2, 2));
        let s = b.add(vec![x11, x12, x12, x22]);
        b.finish(s)
    }

    #[test]
    fn hom_k2_point_value() {
        let c = hom_k2_circuit();
        let point: BTreeMap<VariableId, u64> = [
            (VariableId::hom(1, 1), 1),
            (VariableId::hom(1, 2), 2),
            (VariableId::hom(2, 2), 3),
        ]
        .into();
        assert_eq!(evaluate_mod(&c, &point, MOD61).unwrap(), 8);
        let exact: BTreeMap<VariableId, BigRational> = [
            (VariableId::hom(1, 1), ratio(1, 1)),
            (VariableId::hom(1, 2), ratio(2, 1)),
            (VariableId::hom(2, 2), ratio(3, 1)),
        ]
        .into();
        assert_eq!(evaluate_exact(&c, &exact).unwrap(), ratio(8, 1));
    }

    #[test]
    fn all_ones_counts_maps() {
        let c = hom_k2_circuit();
        let point: BTreeMap<VariableId, u64> = c.variables().iter().map(|&v| (v, 1)).collect();
        // Every map f : V(K2) → [2] contributes 1, so the value is 2^2.
        assert_eq!(evaluate_mod(&c, &point, MOD61).unwrap(), 4);
    }

    #[test]
    fn modular_reduction_is_homomorphic() {
        let c = hom_k2_circuit();
        let big = MOD61 - 1;
        let point: BTreeMap<VariableId, u64> = [
            (VariableId::hom(1, 1), big),
            (VariableId::hom(1, 2), big),
            (VariableId::hom(2, 2), 5),
        ]
        .into();
        let expected = ((big as u128 * 3 + 5) % MOD61 as u128) as u64;
        assert_eq!(evaluate_mod(&c, &point, MOD61).unwrap(), expected);
    }

    #[test]
    fn unassigned_variable_is_an_error() {
        let c = hom_k2_circuit();
        let point: BTreeMap<VariableId, u64> = [(VariableId::hom(1, 1), 1)].into();
        assert!(evaluate_mod(&c, &point, MOD61).is_err());
    }

    #[test]
    fn rational_constants_reduce_via_inverse() {
        let mut b = CircuitBuilder::new();
        let x = b.input(VariableId::hom(1, 1));
        let half = b.constant(ratio(1, 2));
        let m = b.mul(vec![x, half]);
        let c = b.finish(m);
        let point: BTreeMap<VariableId, u64> = [(VariableId::hom(1, 1), 10)].into();
        assert_eq!(evaluate_mod(&c, &point, MOD61).unwrap(), 5);
    }
}
