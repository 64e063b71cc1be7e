//! Canonical representatives modulo the sphere relation `x0^2 + ... + x_{n-1}^2 = 1`.

use std::collections::HashMap;

use crate::algebra::poly::{int, Monomial, Poly};

/// Divides by `r^2 - 1` under graded lex order with `x0` largest.
///
/// The leading term of `r^2 - 1` is `x0^2`, so the remainder is obtained by
/// rewriting `x0^(2k+e) -> x0^e (1 - x1^2 - ... )^k`; it has degree at most one in `x0`.
pub fn reduce_mod_sphere(f: &Poly) -> Poly {
    let vars = f.vars();
    let n = vars.len();
    if n == 0 {
        return f.clone();
    }
    let mut tail = Poly::one(vars);
    for i in 1..n {
        let mut e = vec![0u16; n];
        e[i] = 2;
        tail.add_term(Monomial::from_exponents(&e), int(-1));
    }
    let mut powers: HashMap<u16, Poly> = HashMap::new();
    let mut out = Poly::zero(vars);
    for (m, c) in f.terms() {
        let e0 = m.exponents()[0];
        if e0 < 2 {
            out.add_term(m.clone(), c.clone());
            continue;
        }
        let k = e0 / 2;
        let pk = powers.entry(k).or_insert_with(|| tail.pow(u32::from(k)));
        let mut rest = m.exponents().to_vec();
        rest[0] = e0 % 2;
        out.add_scaled_product(c, &Monomial::from_exponents(&rest), pk);
    }
    out
}

/// True when `f` vanishes on the sphere.
pub fn vanishes_on_sphere(f: &Poly) -> bool {
    reduce_mod_sphere(f).is_zero()
}

/// Canonical-form test used by quotient bases.
pub fn is_reduced(m: &Monomial) -> bool {
    m.exponents().first().is_none_or(|&e| e <= 1)
}
