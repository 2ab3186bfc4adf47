//! The free-field vertex engine: the beta-gamma system on one pair `(a, b)`
//! tensored with the commutative twist sector generated by `λ*`.
//!
//! Indexing follows the universal convention `Y(v, z) = Σ v_(m) z^{-m-1}`. A
//! state is a finite rational combination of normal-ordered monomials
//!
//! ```text
//! a_(-s1) … a_(-sp) b_(-t1) … b_(-tq) λ*_(-u1) … λ*_(-ur) x^k |0>
//! ```
//!
//! with `s_i ≥ 1`, `t_j ≥ 2`, `u_l ≥ 1`, where `x = b_(-1)|0>` is absorbed into
//! the ground exponent `k`. On polynomial charts `k ≥ 0`; on the overlap chart
//! `k` ranges over all integers.
//!
//! States carry a [`LStar`] tag. Symbolic states live in the vertex algebra
//! itself. States specialised at `n` are vectors of the module on which the
//! twist field acts through the character `χ(z) = n/z`: no `λ*` creation modes
//! survive there and `λ*_(0)` acts by the scalar `n`.

mod fock;
pub mod properties;
pub mod sampling;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{add_entry, add_scaled};
use crate::scalar::Q;
use fock::Terms;

/// Free-field generators. `B` is the coordinate (weight 0), `A` its conjugate
/// vector field (weight 1) and `LStar` the central twist field (weight 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    A,
    B,
    LStar,
}

impl Generator {
    pub fn weight(self) -> u32 {
        match self {
            Generator::B => 0,
            Generator::A | Generator::LStar => 1,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Generator::A => "a",
            Generator::B => "b",
            Generator::LStar => "L",
        }
    }
}

/// Ground ring of a chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Ring {
    /// Polynomials: ground exponent `k ≥ 0`.
    Poly,
    /// Laurent polynomials: any integer `k`.
    Laurent,
}

/// How the twist field is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LStar {
    Symbolic,
    /// Module at the character `χ(z) = n/z`.
    Specialized(i64),
}

/// A normal-ordered monomial without its coefficient.
///
/// Mode lists hold the creation depth `s` of each mode `g_(-s)`, sorted weakly
/// decreasing. The head mode (the outermost operator) is the first `a`-mode, or
/// failing that the first `b`-mode, or failing that the first `λ*`-mode.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub(crate) a: Vec<u32>,
    pub(crate) b: Vec<u32>,
    pub(crate) l: Vec<u32>,
    pub(crate) ground: i64,
}

impl Monomial {
    /// Builds a monomial; panics on depths outside the normal form (`a, λ* ≥ 1`, `b ≥ 2`).
    pub fn new(a: &[u32], b: &[u32], l: &[u32], ground: i64) -> Self {
        assert!(a.iter().all(|&s| s >= 1), "a-modes need depth >= 1");
        assert!(b.iter().all(|&t| t >= 2), "b-modes need depth >= 2; b_(-1) is the ground");
        assert!(l.iter().all(|&s| s >= 1), "λ*-modes need depth >= 1");
        let sorted = |v: &[u32]| {
            let mut v = v.to_vec();
            v.sort_unstable_by(|x, y| y.cmp(x));
            v
        };
        Monomial { a: sorted(a), b: sorted(b), l: sorted(l), ground }
    }

    pub fn ground(&self) -> i64 {
        self.ground
    }

    pub fn modes(&self, g: Generator) -> &[u32] {
        match g {
            Generator::A => &self.a,
            Generator::B => &self.b,
            Generator::LStar => &self.l,
        }
    }

    pub(crate) fn modes_mut(&mut self, g: Generator) -> &mut Vec<u32> {
        match g {
            Generator::A => &mut self.a,
            Generator::B => &mut self.b,
            Generator::LStar => &mut self.l,
        }
    }

    pub fn mode_count(&self) -> usize {
        self.a.len() + self.b.len() + self.l.len()
    }

    /// Conformal weight `Σ s_i + Σ (t_j - 1) + Σ u_l`.
    pub fn weight(&self) -> u32 {
        self.a.iter().sum::<u32>() + self.b.iter().map(|t| t - 1).sum::<u32>() + self.l.iter().sum::<u32>()
    }

    /// `h`-weight on the `x`-chart: `twist + 2·#a - 2·#b - 2k`.
    pub fn h_weight(&self, twist: i64) -> i64 {
        twist + 2 * self.a.len() as i64 - 2 * self.b.len() as i64 - 2 * self.ground
    }

    pub(crate) fn split_head(&self) -> Option<(Generator, u32, Monomial)> {
        for g in [Generator::A, Generator::B, Generator::LStar] {
            if let Some(&s) = self.modes(g).first() {
                let mut rest = self.clone();
                rest.modes_mut(g).remove(0);
                return Some((g, s, rest));
            }
        }
        None
    }

    fn fmt_body(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in [Generator::A, Generator::B, Generator::LStar] {
            for s in self.modes(g) {
                write!(f, "{}(-{}) ", g.symbol(), s)?;
            }
        }
        match self.ground {
            0 => {}
            1 => write!(f, "x ")?,
            k => write!(f, "x^{k} ")?,
        }
        write!(f, "|0>")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_body(f)
    }
}

/// An exact rational combination of normal-ordered monomials.
///
/// Equality compares terms and the `λ*` treatment; the ring tag only records
/// which chart the state may live on.
#[derive(Clone, Debug)]
pub struct FreeState {
    terms: Terms,
    ring: Ring,
    lstar: LStar,
}

impl PartialEq for FreeState {
    fn eq(&self, other: &Self) -> bool {
        self.lstar == other.lstar && self.terms == other.terms
    }
}

impl Eq for FreeState {}

impl FreeState {
    pub fn zero(ring: Ring, lstar: LStar) -> Self {
        FreeState { terms: Terms::new(), ring, lstar }
    }

    pub fn vacuum() -> Self {
        Self::from_monomial(Monomial::default(), Q::one())
    }

    /// A single monomial; the ring is Laurent exactly when the ground exponent is negative.
    pub fn from_monomial(m: Monomial, coeff: Q) -> Self {
        let ring = if m.ground < 0 { Ring::Laurent } else { Ring::Poly };
        let mut terms = Terms::new();
        add_entry(&mut terms, m, coeff);
        FreeState { terms, ring, lstar: LStar::Symbolic }
    }

    /// `x^k |0>`.
    pub fn ground(k: i64) -> Self {
        Self::from_monomial(Monomial::new(&[], &[], &[], k), Q::one())
    }

    /// The generator state `g_(-1)|0>`; for `B` this is `x|0>`.
    pub fn generator(g: Generator) -> Self {
        match g {
            Generator::A => Self::from_monomial(Monomial::new(&[1], &[], &[], 0), Q::one()),
            Generator::B => Self::ground(1),
            Generator::LStar => Self::from_monomial(Monomial::new(&[], &[], &[1], 0), Q::one()),
        }
    }

    /// Builds a state from `(coefficient, monomial)` pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = (Q, Monomial)>, ring: Ring, lstar: LStar) -> Self {
        let mut t = Terms::new();
        for (c, m) in terms {
            add_entry(&mut t, m, c);
        }
        let s = FreeState { terms: t, ring, lstar };
        s.check_invariants();
        s
    }

    fn check_invariants(&self) {
        if self.ring == Ring::Poly {
            debug_assert!(self.terms.keys().all(|m| m.ground >= 0), "negative ground on a polynomial state");
        }
        if let LStar::Specialized(_) = self.lstar {
            debug_assert!(self.terms.keys().all(|m| m.l.is_empty()), "λ* modes on a specialised state");
        }
    }

    pub fn with_ring(mut self, ring: Ring) -> Self {
        self.ring = ring;
        self.check_invariants();
        self
    }

    /// Reinterprets a state without `λ*` modes as a vector of the module at `χ(z) = n/z`.
    pub fn into_module(self, n: i64) -> Result<Self> {
        if self.terms.keys().any(|m| !m.l.is_empty()) {
            return Err(Error::Specialization("state contains λ* creation modes".into()));
        }
        Ok(FreeState { lstar: LStar::Specialized(n), ..self })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn lstar(&self) -> LStar {
        self.lstar
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).min()
    }

    /// The common conformal weight, if the state is nonzero and homogeneous.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        match (self.min_weight(), self.max_weight()) {
            (Some(lo), Some(hi)) if lo == hi => Some(lo),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = FreeState::zero(self.ring, self.lstar);
        add_scaled(&mut out.terms, &self.terms, c);
        out
    }

    fn join_tags(&self, other: &Self) -> (Ring, LStar) {
        assert_eq!(self.lstar, other.lstar, "adding states with different λ* treatment");
        (self.ring.max(other.ring), self.lstar)
    }

    /// `self_(m) u`.
    ///
    /// A Laurent state cannot act on a polynomial state. Symbolic states act on
    /// symbolic states and on module vectors; a module vector only acts on vectors
    /// of the same module.
    pub fn apply_mode(&self, m: i64, u: &FreeState) -> Result<FreeState> {
        if self.ring == Ring::Laurent && u.ring == Ring::Poly {
            return Err(Error::Ring);
        }
        let lstar = match (self.lstar, u.lstar) {
            (LStar::Symbolic, target) => target,
            (LStar::Specialized(a), LStar::Specialized(b)) if a == b => u.lstar,
            (acting, target) => {
                return Err(Error::Specialization(format!("{acting:?} state cannot act on {target:?} state")));
            }
        };
        let terms = fock::apply_terms(&self.terms, m, &u.terms, lstar);
        Ok(FreeState { terms, ring: self.ring.max(u.ring), lstar })
    }

    /// `g_(m) u` for a single generator mode.
    pub fn apply_generator(g: Generator, m: i64, u: &FreeState) -> FreeState {
        let terms = fock::gen_on_terms(g, m, &u.terms, u.lstar);
        FreeState { terms, ring: u.ring, lstar: u.lstar }
    }

    /// The translation operator `∂`.
    pub fn translation(&self) -> FreeState {
        let mut out = FreeState::zero(self.ring, self.lstar);
        for (m, c) in &self.terms {
            add_scaled(&mut out.terms, &fock::translate(m), c);
        }
        out
    }

    /// Specialises the twist sector at `χ(z) = n/z`: all `λ*` creation modes are
    /// replaced by `χ_{-u} = 0`, so terms containing them vanish.
    pub fn specialize_lstar(&self, n: i64) -> Result<FreeState> {
        if let LStar::Specialized(k) = self.lstar {
            return Err(Error::Specialization(format!("state already specialised at {k}")));
        }
        let terms = self.terms.iter().filter(|(m, _)| m.l.is_empty()).map(|(m, c)| (m.clone(), c.clone())).collect();
        Ok(FreeState { terms, ring: self.ring, lstar: LStar::Specialized(n) })
    }

    /// Splits into homogeneous components of fixed conformal weight, sorted by weight.
    pub fn weight_components(&self) -> Vec<(u32, FreeState)> {
        let mut parts: std::collections::BTreeMap<u32, FreeState> = std::collections::BTreeMap::new();
        for (m, c) in &self.terms {
            let entry = parts.entry(m.weight()).or_insert_with(|| FreeState::zero(self.ring, self.lstar));
            add_entry(&mut entry.terms, m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// Splits into components of fixed (conformal weight, `h`-weight), sorted by bidegree.
    pub fn bigrade(&self, twist: i64) -> Vec<((u32, i64), FreeState)> {
        let mut parts: std::collections::BTreeMap<(u32, i64), FreeState> = std::collections::BTreeMap::new();
        for (m, c) in &self.terms {
            let key = (m.weight(), m.h_weight(twist));
            let entry = parts.entry(key).or_insert_with(|| FreeState::zero(self.ring, self.lstar));
            add_entry(&mut entry.terms, m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }
}

impl Add for &FreeState {
    type Output = FreeState;
    fn add(self, rhs: &FreeState) -> FreeState {
        let (ring, lstar) = self.join_tags(rhs);
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &rhs.terms, &Q::one());
        FreeState { terms, ring, lstar }
    }
}

impl Sub for &FreeState {
    type Output = FreeState;
    fn sub(self, rhs: &FreeState) -> FreeState {
        let (ring, lstar) = self.join_tags(rhs);
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &rhs.terms, &-Q::one());
        FreeState { terms, ring, lstar }
    }
}

impl Neg for &FreeState {
    type Output = FreeState;
    fn neg(self) -> FreeState {
        self.scale(&-Q::one())
    }
}

impl Mul<&FreeState> for &Q {
    type Output = FreeState;
    fn mul(self, rhs: &FreeState) -> FreeState {
        rhs.scale(self)
    }
}

impl Mul<&FreeState> for i64 {
    type Output = FreeState;
    fn mul(self, rhs: &FreeState) -> FreeState {
        rhs.scale(&Q::from_integer(BigInt::from(self)))
    }
}

/// Debug rendering, e.g. `2 a(-2) b(-3) x^4 |0> - 1/2 L(-1) |0>`. Diagnostic only.
impl fmt::Display for FreeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            if !abs.is_one() {
                write!(f, "{abs} ")?;
            }
            m.fmt_body(f)?;
        }
        Ok(())
    }
}

/// Shorthand used in tests and checks: `a(-s)` modes, `b(-t)` modes, `λ*` modes, ground.
pub fn mono(a: &[u32], b: &[u32], l: &[u32], ground: i64) -> FreeState {
    FreeState::from_monomial(Monomial::new(a, b, l, ground), Q::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_int;

    fn a() -> FreeState {
        FreeState::generator(Generator::A)
    }

    fn x(k: i64) -> FreeState {
        FreeState::ground(k)
    }

    #[test]
    fn vacuum_axioms() {
        let vac = FreeState::vacuum();
        assert_eq!(vac.homogeneous_weight(), Some(0));
        let u = mono(&[2], &[3], &[], 4);
        assert_eq!(vac.apply_mode(-1, &u).unwrap(), u);
        for m in [-3, -2, 0, 1, 2] {
            assert!(vac.apply_mode(m, &u).unwrap().is_zero());
        }
        assert!(vac.translation().is_zero());
        // u_(-1)|0> = u
        assert_eq!(u.apply_mode(-1, &vac).unwrap(), u);
    }

    #[test]
    fn a_zero_mode_differentiates() {
        assert_eq!(a().apply_mode(0, &x(1)).unwrap(), FreeState::vacuum());
        assert_eq!(a().apply_mode(0, &x(3)).unwrap(), 3 * &x(2));
        assert_eq!(a().apply_mode(0, &x(-1).with_ring(Ring::Laurent)).unwrap(), -1 * &x(-2));
    }

    #[test]
    fn a_is_a_cdo_vector_field() {
        assert!(a().apply_mode(1, &a()).unwrap().is_zero());
        assert!(a().apply_mode(0, &a()).unwrap().is_zero());
    }

    #[test]
    fn vector_field_x_squared_d_dx() {
        let w = mono(&[1], &[], &[], 2);
        assert_eq!(w.apply_mode(0, &x(1)).unwrap(), x(2));
        assert_eq!(w.apply_mode(0, &x(3)).unwrap(), 3 * &x(4));
    }

    #[test]
    fn translation_examples() {
        assert_eq!(x(1).translation(), mono(&[], &[2], &[], 0));
        assert_eq!(x(3).translation(), 3 * &mono(&[], &[2], &[], 2));
        assert_eq!(mono(&[1, 1], &[], &[], 0).translation(), 2 * &mono(&[2, 1], &[], &[], 0));
        // ∂v = v_(-2)|0>
        let v = mono(&[2], &[2], &[1], 3);
        assert_eq!(v.translation(), v.apply_mode(-2, &FreeState::vacuum()).unwrap());
    }

    #[test]
    fn specialisation_examples() {
        let l = FreeState::generator(Generator::LStar);
        assert!(l.specialize_lstar(5).unwrap().is_zero());
        let s = x(1).specialize_lstar(5).unwrap();
        assert_eq!(s.lstar(), LStar::Specialized(5));
        assert_eq!(s.len(), 1);
        assert!(s.specialize_lstar(5).is_err());
        // λ*_(0) acts by n on the module
        let v = mono(&[2], &[], &[], 1).into_module(7).unwrap();
        assert_eq!(l.apply_mode(0, &v).unwrap(), 7 * &v);
        assert!(l.apply_mode(-1, &v).unwrap().is_zero());
        assert!(l.apply_mode(1, &v).unwrap().is_zero());
    }

    #[test]
    fn tag_errors() {
        let lau = x(-1);
        assert_eq!(lau.apply_mode(-1, &x(1)), Err(Error::Ring));
        assert!(x(1).apply_mode(-1, &lau).is_ok());
        let module = x(1).into_module(2).unwrap();
        assert!(matches!(module.apply_mode(-1, &x(1)), Err(Error::Specialization(_))));
        let other = x(0).into_module(3).unwrap();
        assert!(matches!(module.apply_mode(-1, &other), Err(Error::Specialization(_))));
    }

    #[test]
    fn bigrade_examples() {
        assert_eq!(FreeState::vacuum().bigrade(4), vec![((0, 4), FreeState::vacuum())]);
        assert_eq!(x(1).bigrade(4)[0].0, (0, 2));
        assert_eq!(a().bigrade(4)[0].0, (1, 6));
        let mixed = &x(1) + &a();
        assert_eq!(mixed.bigrade(0).len(), 2);
    }

    #[test]
    fn display_format() {
        let s = &mono(&[2], &[3], &[], 4) - &mono(&[], &[], &[1], 0).scale(&q_int(2));
        assert_eq!(s.to_string(), "-2 L(-1) |0> + a(-2) b(-3) x^4 |0>");
        assert_eq!(FreeState::zero(Ring::Poly, LStar::Symbolic).to_string(), "0");
    }
}
