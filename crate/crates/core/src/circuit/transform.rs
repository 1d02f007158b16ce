//! Structure-preserving circuit transforms: variable substitution,
//! product-depth-preserving differentiation, output scaling, and the
//! constant-normalization pass used before parse-tree analyses.

use super::{Circuit, CircuitBuilder, GateId, GateKind, VariableId};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Replacement for one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstImage {
    Var(VariableId),
    Constant(BigRational),
    /// Product of two variables; the extra multiplication is absorbed into
    /// an enclosing mul gate where one exists.
    Product(VariableId, VariableId),
}

/// Rewrites every input gate through `rule`; variables without an entry map
/// to themselves. Monotone circuits stay monotone when all rule images are
/// monotone, and single-variable images never change the product-depth.
pub fn substitute(c: &Circuit, rule: &BTreeMap<VariableId, SubstImage>) -> Circuit {
    let mut b = CircuitBuilder::new();
    let mut map: Vec<GateId> = Vec::with_capacity(c.len());
    for gate in c.gates() {
        let new = match &gate.kind {
            GateKind::Input(v) => match rule.get(v) {
                None => b.input(*v),
                Some(SubstImage::Var(w)) => b.input(*w),
                Some(SubstImage::Constant(r)) => b.constant(r.clone()),
                Some(SubstImage::Product(x, y)) => {
                    let gx = b.input(*x);
                    let gy = b.input(*y);
                    b.mul(vec![gx, gy])
                }
            },
            GateKind::Const(r) => b.constant(r.clone()),
            GateKind::Add => {
                let children = gate.children.iter().map(|&ch| map[ch]).collect();
                b.add(children)
            }
            GateKind::Mul => {
                let children = gate.children.iter().map(|&ch| map[ch]).collect();
                b.mul(children)
            }
        };
        map.push(new);
    }
    b.finish(map[c.output()])
}

/// Partial derivative with respect to `v`, with the same product-depth.
///
/// Both the gate and its derivative are maintained bottom-up; at a mul gate
/// the product rule's sum of products lands in the enclosing add layer
/// (the builder flattens it there), so no multiplication layer is added.
pub fn differentiate(c: &Circuit, v: VariableId) -> Circuit {
    let mut b = CircuitBuilder::new();
    let mut val: Vec<GateId> = Vec::with_capacity(c.len());
    let mut deriv: Vec<GateId> = Vec::with_capacity(c.len());
    for gate in c.gates() {
        let (g, dg) = match &gate.kind {
            GateKind::Input(x) => {
                let g = b.input(*x);
                let dg = b.constant_int(i64::from(*x == v));
                (g, dg)
            }
            GateKind::Const(r) => {
                let g = b.constant(r.clone());
                let dg = b.constant_int(0);
                (g, dg)
            }
            GateKind::Add => {
                let kids: Vec<GateId> = gate.children.iter().map(|&ch| val[ch]).collect();
                let dkids: Vec<GateId> = gate.children.iter().map(|&ch| deriv[ch]).collect();
                (b.add(kids), b.add(dkids))
            }
            GateKind::Mul => {
                let kids: Vec<GateId> = gate.children.iter().map(|&ch| val[ch]).collect();
                let g = b.mul(kids);
                let mut terms = Vec::new();
                for (i, &ch) in gate.children.iter().enumerate() {
                    if matches!(b.kind(deriv[ch]), GateKind::Const(r) if r.is_zero()) {
                        continue;
                    }
                    let mut factors = vec![deriv[ch]];
                    for (j, &other) in gate.children.iter().enumerate() {
                        if i != j {
                            factors.push(val[other]);
                        }
                    }
                    terms.push(b.mul(factors));
                }
                (g, b.add(terms))
            }
        };
        val.push(g);
        deriv.push(dg);
    }
    b.finish(deriv[c.output()])
}

/// Multiplies the computed polynomial by `factor` without adding a
/// multiplication layer where one already exists: mul gates absorb the
/// constant as an extra child, and an add output distributes it into each
/// child. A sum of bare inputs whose repeat-multiplicities the factor divides
/// evenly is rescaled by adjusting multiplicities; otherwise such children
/// fall back to an explicit product with the constant.
pub fn scale(c: &Circuit, factor: &BigRational) -> Circuit {
    if factor.is_one() {
        return c.clone();
    }
    let mut b = CircuitBuilder::new();
    let mut map: Vec<GateId> = Vec::with_capacity(c.len());
    for gate in c.gates() {
        let new = match &gate.kind {
            GateKind::Input(v) => b.input(*v),
            GateKind::Const(r) => b.constant(r.clone()),
            GateKind::Add => b.add(gate.children.iter().map(|&ch| map[ch]).collect()),
            GateKind::Mul => b.mul(gate.children.iter().map(|&ch| map[ch]).collect()),
        };
        map.push(new);
    }
    let out = map[c.output()];
    let scaled = scale_gate(&mut b, out, factor);
    b.finish(scaled)
}

fn scale_gate(b: &mut CircuitBuilder, out: GateId, factor: &BigRational) -> GateId {
    match b.kind(out).clone() {
        GateKind::Const(r) => b.constant(r * factor),
        GateKind::Input(_) => {
            let f = b.constant(factor.clone());
            b.mul(vec![out, f])
        }
        GateKind::Mul => {
            let f = b.constant(factor.clone());
            let mut children = b.children(out).to_vec();
            children.push(f);
            b.mul(children)
        }
        GateKind::Add => {
            let children = b.children(out).to_vec();
            // Group repeated children so multiplicities can absorb an
            // integral reciprocal factor.
            let mut groups: BTreeMap<GateId, u64> = BTreeMap::new();
            let mut order = Vec::new();
            for ch in children {
                if !groups.contains_key(&ch) {
                    order.push(ch);
                }
                *groups.entry(ch).or_insert(0) += 1;
            }
            let mut new_children = Vec::new();
            let mut scaled_mul: BTreeMap<GateId, GateId> = BTreeMap::new();
            for ch in order {
                let mult = groups[&ch];
                let is_mul = matches!(b.kind(ch), GateKind::Mul);
                if is_mul {
                    let fresh = *scaled_mul.entry(ch).or_insert_with(|| {
                        let f = b.constant(factor.clone());
                        let mut kids = b.children(ch).to_vec();
                        kids.push(f);
                        b.mul(kids)
                    });
                    new_children.extend(std::iter::repeat_n(fresh, mult as usize));
                    continue;
                }
                if let GateKind::Const(r) = b.kind(ch).clone() {
                    let scaled = b.constant(r * factor);
                    new_children.extend(std::iter::repeat_n(scaled, mult as usize));
                    continue;
                }
                let total = BigRational::from_integer(mult.into()) * factor;
                if total.is_integer() && total >= BigRational::zero() {
                    let copies: u64 = (total.to_integer().clone())
                        .try_into()
                        .unwrap_or(u64::MAX);
                    new_children.extend(std::iter::repeat_n(ch, copies as usize));
                } else {
                    let f = b.constant(factor.clone());
                    let scaled = b.mul(vec![ch, f]);
                    new_children.extend(std::iter::repeat_n(scaled, mult as usize));
                }
            }
            b.add(new_children)
        }
    }
}

/// Removes constant children from mul gates ahead of parse-tree analyses
/// (folding their product into a single coefficient only when it is 1).
/// Returns the rewritten circuit and whether the parse-tree count changed.
pub fn normalize_constants(c: &Circuit) -> (Circuit, bool) {
    let before = super::parse_tree::count_parse_trees(c);
    let mut b = CircuitBuilder::new();
    let mut map: Vec<GateId> = Vec::with_capacity(c.len());
    for gate in c.gates() {
        let new = match &gate.kind {
            GateKind::Input(v) => b.input(*v),
            GateKind::Const(r) => b.constant(r.clone()),
            GateKind::Add => b.add(gate.children.iter().map(|&ch| map[ch]).collect()),
            // The builder already folds constant children of products.
            GateKind::Mul => b.mul(gate.children.iter().map(|&ch| map[ch]).collect()),
        };
        map.push(new);
    }
    let out = b.finish(map[c.output()]);
    let after = super::parse_tree::count_parse_trees(&out);
    (out, before != after)
}
