//! Exact sparse multivariate polynomials (multiset monomial → rational
//! coefficient) and circuit expansion.

use super::eval::{add_mod, mul_mod, pow_mod, rational_mod};
use super::parse_tree::count_parse_trees;
use super::{Circuit, GateKind, VariableId};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Sorted multiset of variables; repeats encode powers.
pub type Monomial = Vec<VariableId>;

/// Polynomial as a canonical monomial → coefficient association.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePolynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::default();
        p.add_term(vec![], c);
        p
    }

    pub fn variable(v: VariableId) -> Self {
        let mut p = Self::default();
        p.add_term(vec![v], BigRational::one());
        p
    }

    pub fn add_term(&mut self, mut monomial: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        monomial.sort_unstable();
        let entry = self.terms.entry(monomial);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, monomial: &Monomial) -> BigRational {
        let mut key = monomial.clone();
        key.sort_unstable();
        self.terms.get(&key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                m.extend(mb.iter().copied());
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * factor);
        }
        out
    }

    pub fn all_coefficients_integer(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| c >= &BigRational::zero())
    }

    pub fn evaluate_mod(&self, point: &BTreeMap<VariableId, u64>, p: u64) -> Result<u64> {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut term = rational_mod(c, p)?;
            let mut i = 0;
            while i < m.len() {
                let var = m[i];
                let mut exp = 0u64;
                while i < m.len() && m[i] == var {
                    exp += 1;
                    i += 1;
                }
                let val = *point.get(&var).ok_or_else(|| {
                    Error::Evaluation(format!("unassigned variable {}", var.spelling()))
                })?;
                term = mul_mod(term, pow_mod(val, exp, p), p);
            }
            acc = add_mod(acc, term, p);
        }
        Ok(acc)
    }

    /// Text dump: one `coeff monomial` line per term in canonical order,
    /// suitable for diffing.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (m, c) in &self.terms {
            let _ = write!(out, "{c}");
            for v in m {
                let _ = write!(out, " {}", v.spelling());
            }
            out.push('\n');
        }
        out
    }
}

/// Exact expansion of the polynomial computed by `c`, refused when the
/// parse-tree count estimate exceeds 10^6 monomial contributions.
pub fn expand(c: &Circuit) -> Result<SparsePolynomial> {
    const CAP: u128 = 1_000_000;
    let count = count_parse_trees(c);
    if count > CAP {
        return Err(Error::Capacity(format!(
            "expansion refused: ~{count} parse trees exceeds cap {CAP}"
        )));
    }
    let mut polys: Vec<SparsePolynomial> = Vec::with_capacity(c.len());
    for gate in c.gates() {
        let poly = match &gate.kind {
            GateKind::Input(v) => SparsePolynomial::variable(*v),
            GateKind::Const(r) => SparsePolynomial::constant(r.clone()),
            GateKind::Add => {
                let mut acc = SparsePolynomial::zero();
                for &ch in &gate.children {
                    acc = acc.plus(&polys[ch]);
                }
                acc
            }
            GateKind::Mul => {
                let mut acc = SparsePolynomial::constant(BigRational::one());
                for &ch in &gate.children {
                    acc = acc.times(&polys[ch]);
                }
                acc
            }
        };
        polys.push(poly);
    }
    Ok(polys.swap_remove(c.output()))
}

#[cfg(test)]
mod tests {
    use super::super::eval::{evaluate_mod, MOD61};
    use super::super::CircuitBuilder;
    use super::*;

    #[test]
    fn constant_circuit_expands_to_constant() {
        let mut b = CircuitBuilder::new();
        let five = b.constant_int(5);
        let c = b.finish(five);
        let p = expand(&c).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&vec![]), BigRational::from_integer(5.into()));
    }

    #[test]
    fn expansion_collects_repeated_children() {
        let mut b = CircuitBuilder::new();
        let x11 = b.input(VariableId::hom(1, 1));
        let x12 = b.input(VariableId::hom(1, 2));
        let x22 = b.input(VariableId::hom(2, 2));
        let s = b.add(vec![x11, x12, x12, x22]);
        let c = b.finish(s);
        let p = expand(&c).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(
            p.coefficient(&vec![VariableId::hom(1, 2)]),
            BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn powers_via_repeated_variables() {
        let mut b = CircuitBuilder::new();
        let y = b.input(VariableId::aux(1, 2));
        let sq = b.mul(vec![y, y]);
        let c = b.finish(sq);
        let p = expand(&c).unwrap();
        let square = vec![VariableId::aux(1, 2), VariableId::aux(1, 2)];
        assert_eq!(p.coefficient(&square), BigRational::one());
        let point: BTreeMap<VariableId, u64> = [(VariableId::aux(1, 2), 7)].into();
        assert_eq!(p.evaluate_mod(&point, MOD61).unwrap(), 49);
    }

    #[test]
    fn expand_agrees_with_evaluate_at_random_points() {
        let mut b = CircuitBuilder::new();
        let x = b.input(VariableId::hom(1, 1));
        let y = b.input(VariableId::hom(1, 2));
        let z = b.input(VariableId::hom(2, 2));
        let m1 = b.mul(vec![x, y]);
        let m2 = b.mul(vec![y, z]);
        let s = b.add(vec![m1, m2, x]);
        let top = b.mul(vec![s, s]);
        let c = b.finish(top);
        let p = expand(&c).unwrap();
        let mut state = 0x1234_5678_u64;
        for _ in 0..20 {
            let mut point = BTreeMap::new();
            for v in c.variables() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                point.insert(v, state % MOD61);
            }
            assert_eq!(
                p.evaluate_mod(&point, MOD61).unwrap(),
                evaluate_mod(&c, &point, MOD61).unwrap()
            );
        }
    }

    #[test]
    fn dump_is_sorted_and_parsable() {
        let mut p = SparsePolynomial::zero();
        p.add_term(vec![VariableId::hom(2, 2)], BigRational::one());
        p.add_term(vec![VariableId::hom(1, 2)], BigRational::from_integer(2.into()));
        let dump = p.dump();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines, vec!["2 x[1,2]", "1 x[2,2]"]);
    }
}
