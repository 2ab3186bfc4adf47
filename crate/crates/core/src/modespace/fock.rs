//! Mode operators on normal-ordered monomials.
//!
//! The state space is the polynomial algebra in the creation modes
//! `a_(-s)` (s ≥ 1), `b_(-t)` (t ≥ 2), `λ*_(-s)` (s ≥ 1) over the ground ring
//! in `x = b_(-1)`. Generator modes act as multiplication or as derivations:
//!
//! - `a_(p)`, p ≥ 1, is `∂/∂b_(-p-1)`; `a_(0)` is `d/dx` on the ground.
//! - `b_(p)`, p ≥ 0, is `-∂/∂a_(-p-1)`.
//! - `λ*_(p)`, p ≥ 0, is zero on symbolic states and `n·δ_{p,0}` on states
//!   specialised at the character `χ(z) = n/z`.
//!
//! Modes of ground elements `x^k` come from `Y(x^k, z) = (x + B(z))^k` with
//! `B(z) = b(z) - x`; general states reduce to these through the iterated
//! normal-ordered product formula on their head mode.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Generator, LStar, Monomial};
use crate::linalg::{add_entry, add_scaled, SparseVec};
use crate::scalar::{binom, binom_q, sign, Q};

pub(crate) type Terms = SparseVec<Monomial>;

fn count(modes: &[u32], s: u32) -> usize {
    modes.iter().filter(|&&m| m == s).count()
}

fn remove_one(modes: &mut Vec<u32>, s: u32) {
    let pos = modes.iter().position(|&m| m == s).expect("mode present");
    modes.remove(pos);
}

fn insert_sorted(modes: &mut Vec<u32>, s: u32) {
    let pos = modes.iter().position(|&m| m < s).unwrap_or(modes.len());
    modes.insert(pos, s);
}

/// `g_(p)` applied to a single monomial. Every generator mode maps a monomial to a
/// multiple of one monomial (or to zero).
pub(crate) fn gen_mode(g: Generator, p: i64, u: &Monomial, lstar: LStar) -> Option<(Monomial, Q)> {
    match g {
        Generator::A => {
            if p <= -1 {
                let mut out = u.clone();
                insert_sorted(&mut out.a, (-p) as u32);
                Some((out, Q::one()))
            } else if p == 0 {
                if u.ground == 0 {
                    return None;
                }
                let mut out = u.clone();
                out.ground -= 1;
                Some((out, Q::from_integer(BigInt::from(u.ground))))
            } else {
                let t = (p + 1) as u32;
                let c = count(&u.b, t);
                if c == 0 {
                    return None;
                }
                let mut out = u.clone();
                remove_one(&mut out.b, t);
                Some((out, Q::from_integer(BigInt::from(c))))
            }
        }
        Generator::B => {
            if p <= -2 {
                let mut out = u.clone();
                insert_sorted(&mut out.b, (-p) as u32);
                Some((out, Q::one()))
            } else if p == -1 {
                let mut out = u.clone();
                out.ground += 1;
                Some((out, Q::one()))
            } else {
                let s = (p + 1) as u32;
                let c = count(&u.a, s);
                if c == 0 {
                    return None;
                }
                let mut out = u.clone();
                remove_one(&mut out.a, s);
                Some((out, -Q::from_integer(BigInt::from(c))))
            }
        }
        Generator::LStar => match lstar {
            LStar::Symbolic => {
                if p <= -1 {
                    let mut out = u.clone();
                    insert_sorted(&mut out.l, (-p) as u32);
                    Some((out, Q::one()))
                } else {
                    None
                }
            }
            LStar::Specialized(n) => {
                if p == 0 && n != 0 {
                    Some((u.clone(), Q::from_integer(BigInt::from(n))))
                } else {
                    None
                }
            }
        },
    }
}

pub(crate) fn gen_on_terms(g: Generator, p: i64, u: &Terms, lstar: LStar) -> Terms {
    let mut out = Terms::new();
    for (mono, c) in u {
        if let Some((m, f)) = gen_mode(g, p, mono, lstar) {
            add_entry(&mut out, m, f * c);
        }
    }
    out
}

/// Partitions of `total` into exactly `parts` positive parts, with the number of
/// ordered compositions that give each one.
fn partitions_exact(total: u32, parts: u32) -> Vec<(Vec<u32>, BigInt)> {
    fn go(rem: u32, left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rem < left {
            return;
        }
        for part in (1..=max.min(rem - (left - 1))).rev() {
            cur.push(part);
            go(rem - part, left - 1, part, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    go(total, parts, total, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|p| {
            let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
            for &x in &p {
                *mult.entry(x).or_default() += 1;
            }
            let mut c = factorial(parts);
            for m in mult.values() {
                c /= factorial(*m);
            }
            (p, c)
        })
        .collect()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `(x^k)_(p)` applied to a monomial.
pub(crate) fn ground_mode(k: i64, p: i64, u: &Monomial) -> Terms {
    let target = -p - 1;
    // levels[r]: (z-exponent depth e, monomial) -> coeff of N(z)^r u at z^{-e}
    let mut levels: Vec<BTreeMap<(i64, Monomial), Q>> = vec![BTreeMap::from([((0, u.clone()), Q::one())])];
    for _ in 0..u.a.len() {
        let prev = levels.last().unwrap();
        let mut next: BTreeMap<(i64, Monomial), Q> = BTreeMap::new();
        for ((e, mono), c) in prev {
            let mut distinct = mono.a.clone();
            distinct.dedup();
            for s in distinct {
                let mult = count(&mono.a, s) as i64;
                let mut m = mono.clone();
                remove_one(&mut m.a, s);
                let key = (e + i64::from(s), m);
                let v = next.entry(key).or_insert_with(Q::zero);
                *v -= c * Q::from_integer(BigInt::from(mult));
            }
        }
        next.retain(|_, v| !v.is_zero());
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }

    let mut out = Terms::new();
    for (r, level) in levels.iter().enumerate() {
        let r = r as i64;
        for ((e, mono), c) in level {
            let d = target + e;
            if d < 0 {
                continue;
            }
            let qs: Vec<u32> = if d == 0 { vec![0] } else { (1..=d as u32).collect() };
            for q in qs {
                let j = i64::from(q) + r;
                let ck = binom(k, j as u32);
                if ck.is_zero() {
                    continue;
                }
                let pref = c * Q::from_integer(ck * binom(j, r as u32));
                let parts = if q == 0 { vec![(Vec::new(), BigInt::one())] } else { partitions_exact(d as u32, q) };
                for (part, mult) in parts {
                    let mut m = mono.clone();
                    for x in part {
                        insert_sorted(&mut m.b, x + 1);
                    }
                    m.ground += k - j;
                    add_entry(&mut out, m, &pref * Q::from_integer(mult));
                }
            }
        }
    }
    out
}

/// `w_(p) u` for monomials `w` and `u`.
pub(crate) fn mono_mode(w: &Monomial, p: i64, u: &Monomial, lstar: LStar) -> Terms {
    let Some((g, s, rest)) = w.split_head() else {
        return ground_mode(w.ground, p, u);
    };
    let s = i64::from(s);
    let mut out = Terms::new();
    let wt_rest = i64::from(rest.weight());
    let wt_u = i64::from(u.weight());

    // Σ_j C(s+j-1, j) g_(-s-j) (rest_(p+j) u)
    let mut j = 0;
    while p + j < wt_rest + wt_u {
        let inner = mono_mode(&rest, p + j, u, lstar);
        if !inner.is_empty() {
            let outer = gen_on_terms(g, -s - j, &inner, lstar);
            add_scaled(&mut out, &outer, &binom_q(s + j - 1, j as u32));
        }
        j += 1;
    }

    // - (-1)^s Σ_j C(s+j-1, j) rest_(p-s-j) (g_(j) u)
    let wt_g = i64::from(g.weight());
    let pre = -sign(s);
    for j in 0..(wt_g + wt_u).max(0) {
        if let Some((gu, c)) = gen_mode(g, j, u, lstar) {
            let inner = mono_mode(&rest, p - s - j, &gu, lstar);
            add_scaled(&mut out, &inner, &(&pre * binom_q(s + j - 1, j as u32) * c));
        }
    }
    out
}

pub(crate) fn apply_terms(w: &Terms, p: i64, u: &Terms, lstar: LStar) -> Terms {
    let mut out = Terms::new();
    for (wm, wc) in w {
        for (um, uc) in u {
            let t = mono_mode(wm, p, um, lstar);
            add_scaled(&mut out, &t, &(wc * uc));
        }
    }
    out
}

/// Translation `∂` on a monomial, as a derivation raising mode depths.
pub(crate) fn translate(u: &Monomial) -> Terms {
    let mut out = Terms::new();
    for g in [Generator::A, Generator::B, Generator::LStar] {
        let mut distinct = u.modes(g).to_vec();
        distinct.dedup();
        for s in distinct {
            let mut m = u.clone();
            let c = count(m.modes(g), s) as i64 * i64::from(s);
            remove_one(m.modes_mut(g), s);
            insert_sorted(m.modes_mut(g), s + 1);
            add_entry(&mut out, m, Q::from_integer(BigInt::from(c)));
        }
    }
    if u.ground != 0 {
        let mut m = u.clone();
        m.ground -= 1;
        insert_sorted(&mut m.b, 2);
        add_entry(&mut out, m, Q::from_integer(BigInt::from(u.ground)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_with_multiplicities() {
        let p = partitions_exact(4, 2);
        // 3+1 (2 orders), 2+2 (1 order)
        assert_eq!(p, vec![(vec![3, 1], BigInt::from(2)), (vec![2, 2], BigInt::from(1))]);
        assert!(partitions_exact(2, 3).is_empty());
    }

    #[test]
    fn ground_modes_on_vacuum() {
        let vac = Monomial::default();
        // (x^k)_(-1)|0> = x^k
        let t = ground_mode(-2, -1, &vac);
        assert_eq!(t.len(), 1);
        assert_eq!(t.keys().next().unwrap().ground, -2);
        // (x^k)_(-2)|0> = ∂(x^k) = k x^{k-1} b_(-2)
        let t = ground_mode(3, -2, &vac);
        let expected = Monomial { b: vec![2], ground: 2, ..Monomial::default() };
        assert_eq!(t.get(&expected).cloned(), Some(Q::from_integer(BigInt::from(3))));
        assert!(ground_mode(2, 0, &vac).is_empty());
    }

    #[test]
    fn ground_mode_moves_past_a_mode() {
        // x^2_(-1) a_(-1)|0> = a_(-1)x^2 - 2 b_(-2)
        let u = Monomial { a: vec![1], ..Monomial::default() };
        let t = ground_mode(2, -1, &u);
        let m1 = Monomial { a: vec![1], ground: 2, ..Monomial::default() };
        let m2 = Monomial { b: vec![2], ..Monomial::default() };
        assert_eq!(t.len(), 2);
        assert_eq!(t[&m1], Q::one());
        assert_eq!(t[&m2], Q::from_integer(BigInt::from(-2)));
    }
}
