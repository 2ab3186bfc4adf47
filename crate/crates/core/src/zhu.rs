//! Zhu products and the reduction of chart states to twisted differential
//! operators `x^d ∂^k λ̄^e`.
//!
//! The reduction rewrites the head mode of a normal-form monomial:
//!
//! - `b`-heads `b_(-t) w`, `t ≥ 2`, are modes `x_(-t)` of a weight-zero state and vanish;
//! - `g_(-s) w` for `g ∈ {a, λ*}` and `s ≥ 2` is `(-1)^{s-1} g_(-1) w` modulo `O(V)`;
//! - `g_(-1) w = g * w - g_(0) w`, so its class is `[g]·[w] - [g_(0) w]`;
//! - the ground `x^k|0>` maps to `x^k`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rank, SparseVec};
use crate::modespace::sampling::StateSampler;
use crate::modespace::{FreeState, Generator, LStar, Monomial, Ring};
use crate::report::CheckReport;
use crate::scalar::{binom, binom_q, q_int, sign, Q};

/// The symbol `x^d ∂^k λ̄^e` (functions to the left of derivations).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiffMono {
    pub d: i64,
    pub k: u32,
    pub e: u32,
}

/// An element of the twisted differential operators on the chart.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffOpNormalForm {
    terms: BTreeMap<DiffMono, Q>,
}

fn falling(p: i64, i: u32) -> BigInt {
    (0..i64::from(i)).fold(BigInt::one(), |acc, j| acc * BigInt::from(p - j))
}

impl DiffOpNormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 0)
    }

    pub fn monomial(d: i64, k: u32, e: u32) -> Self {
        Self::term(DiffMono { d, k, e }, Q::one())
    }

    fn term(m: DiffMono, c: Q) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    /// The class of the vector field `x^d ∂`.
    pub fn vector_field(d: i64) -> Self {
        Self::monomial(d, 1, 0)
    }

    pub fn lambda() -> Self {
        Self::monomial(0, 0, 1)
    }

    fn add_term(&mut self, m: DiffMono, c: Q) {
        crate::linalg::add_entry(&mut self.terms, m, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffMono, &Q)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(*m, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    /// Product in the Weyl algebra with central `λ̄`: `∂^k x^d = Σ_i C(k,i) (d)_i x^{d-i} ∂^{k-i}`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (l, lc) in &self.terms {
            for (r, rc) in &other.terms {
                for i in 0..=l.k {
                    let c = falling(r.d, i) * binom(i64::from(l.k), i);
                    if c.is_zero() {
                        continue;
                    }
                    let m = DiffMono { d: l.d + r.d - i64::from(i), k: l.k + r.k - i, e: l.e + r.e };
                    out.add_term(m, lc * rc * Q::from_integer(c));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Action on `x^p` with `λ̄` acting by `n`, as `(coefficient, exponent)` pairs.
    pub fn act_on_power(&self, p: i64, n: i64) -> BTreeMap<i64, Q> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = falling(p, m.k) * BigInt::from(n).pow(m.e);
            if v.is_zero() {
                continue;
            }
            crate::linalg::add_entry(&mut out, p - i64::from(m.k) + m.d, c * Q::from_integer(v));
        }
        out
    }
}

impl fmt::Display for DiffOpNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            match m.d {
                0 => {}
                1 => factors.push("x".to_string()),
                d => factors.push(format!("x^{d}")),
            }
            match m.k {
                0 => {}
                1 => factors.push("∂".to_string()),
                k => factors.push(format!("∂^{k}")),
            }
            match m.e {
                0 => {}
                1 => factors.push("λ".to_string()),
                e => factors.push(format!("λ^{e}")),
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", factors.join(" "))?;
            } else {
                write!(f, "({c}) {}", factors.join(" "))?;
            }
        }
        Ok(())
    }
}

fn weight_of(a: &FreeState) -> Result<u32> {
    if a.is_zero() {
        return Ok(0);
    }
    a.homogeneous_weight().ok_or_else(|| Error::Grading(format!("state is not homogeneous: {a}")))
}

/// `a *_n b = Σ_{i=0}^{Δ_a} C(Δ_a, i) a_(n+i) b`.
pub fn zhu_star_n(a: &FreeState, n: i64, b: &FreeState) -> Result<FreeState> {
    let delta = weight_of(a)?;
    let mut out = FreeState::zero(a.ring().max(b.ring()), b.lstar());
    for i in 0..=delta {
        let t = a.apply_mode(n + i64::from(i), b)?;
        out = &out + &t.scale(&binom_q(i64::from(delta), i));
    }
    Ok(out)
}

/// `a * b` extended bilinearly to inhomogeneous `a`.
pub fn zhu_star_graded(a: &FreeState, b: &FreeState) -> Result<FreeState> {
    let mut out = FreeState::zero(a.ring().max(b.ring()), b.lstar());
    for (_, part) in a.weight_components() {
        out = &out + &zhu_star(&part, b)?;
    }
    Ok(out)
}

/// The Zhu product `a * b = a *_{-1} b`.
pub fn zhu_star(a: &FreeState, b: &FreeState) -> Result<FreeState> {
    zhu_star_n(a, -1, b)
}

fn reduce_monomial(m: &Monomial, memo: &mut BTreeMap<Monomial, DiffOpNormalForm>) -> Result<DiffOpNormalForm> {
    if let Some(r) = memo.get(m) {
        return Ok(r.clone());
    }
    let out = match m.split_head() {
        None => DiffOpNormalForm::monomial(m.ground(), 0, 0),
        Some((Generator::B, _, _)) => DiffOpNormalForm::zero(),
        Some((g, s, rest)) => {
            let class = if g == Generator::A { DiffOpNormalForm::vector_field(0) } else { DiffOpNormalForm::lambda() };
            let rest_state = FreeState::from_terms([(Q::one(), rest.clone())], Ring::Laurent, LStar::Symbolic);
            let zero_mode = FreeState::apply_generator(g, 0, &rest_state);
            let head = class.mul(&reduce_monomial(&rest, memo)?).sub(&reduce_state(&zero_mode, memo)?);
            head.scale(&sign(i64::from(s) - 1))
        }
    };
    memo.insert(m.clone(), out.clone());
    Ok(out)
}

fn reduce_state(u: &FreeState, memo: &mut BTreeMap<Monomial, DiffOpNormalForm>) -> Result<DiffOpNormalForm> {
    let mut out = DiffOpNormalForm::zero();
    for (m, c) in u.terms() {
        out = out.add(&reduce_monomial(m, memo)?.scale(c));
    }
    Ok(out)
}

/// The class of a symbolic chart state in the Zhu algebra, written as a twisted differential operator.
pub fn zhu_reduce(u: &FreeState) -> Result<DiffOpNormalForm> {
    if u.lstar() != LStar::Symbolic {
        return Err(Error::Specialization("Zhu reduction works on symbolic states".into()));
    }
    reduce_state(u, &mut BTreeMap::new())
}

/// `f_(-1) a` for `f = x^d`: the lift of the vector field `x^d ∂`.
pub fn lift_vector_field(d: i64) -> FreeState {
    let a = FreeState::generator(Generator::A).with_ring(Ring::Laurent);
    let ring = if d < 0 { Ring::Laurent } else { Ring::Poly };
    FreeState::ground(d).apply_mode(-1, &a).expect("ground acting on a Laurent state").with_ring(ring)
}

fn lift_function(d: i64) -> FreeState {
    FreeState::ground(d)
}

/// The defining relations `R1`–`R4` of the map from `U_A T` onto the Zhu algebra.
pub fn check_alpha_relations() -> Result<CheckReport> {
    let mut report = CheckReport::new("alpha relations");
    let funcs = [0i64, 1, 2];
    let fields = [0i64, 1, 2];
    let name_f = |d: i64| match d {
        0 => "1".to_string(),
        1 => "x".to_string(),
        d => format!("x^{d}"),
    };
    let name_v = |d: i64| match d {
        0 => "∂".to_string(),
        1 => "x∂".to_string(),
        d => format!("x^{d}∂"),
    };
    for &i in &funcs {
        for &j in &funcs {
            let got = zhu_reduce(&zhu_star(&lift_function(i), &lift_function(j))?)?;
            let want = DiffOpNormalForm::monomial(i + j, 0, 0);
            report.record(format!("R1 f={}, g={}", name_f(i), name_f(j)), got == want, got.to_string());
        }
    }
    for &t in &fields {
        for &j in &funcs {
            let tau = lift_vector_field(t);
            let f = lift_function(j);
            let got = zhu_reduce(&(&zhu_star(&tau, &f)? - &zhu_star(&f, &tau)?))?;
            // x^t ∂ (x^j) = j x^{t+j-1}
            let want = DiffOpNormalForm::monomial(t + j - 1, 0, 0).scale(&q_int(j));
            report.record(format!("R2 τ={}, f={}", name_v(t), name_f(j)), got == want, got.to_string());
        }
    }
    for &t in &fields {
        for &s in &fields {
            let tau = lift_vector_field(t);
            let xi = lift_vector_field(s);
            let got = zhu_reduce(&(&zhu_star(&tau, &xi)? - &zhu_star(&xi, &tau)?))?;
            // [x^t ∂, x^s ∂] = (s - t) x^{t+s-1} ∂
            let bracket = lift_vector_field(t + s - 1).scale(&q_int(s - t));
            let want = zhu_reduce(&bracket)?;
            report.record(format!("R3 τ={}, ξ={}", name_v(t), name_v(s)), got == want, got.to_string());
        }
    }
    for &j in &funcs {
        for &t in &fields {
            let f = lift_function(j);
            let tau = lift_vector_field(t);
            let got = zhu_reduce(&zhu_star(&f, &tau)?)?;
            let want = zhu_reduce(&f.apply_mode(-1, &tau)?)?;
            report.record(format!("R4 f={}, τ={}", name_f(j), name_v(t)), got == want, got.to_string());
        }
    }
    Ok(report)
}

/// `x^{*d} * ∂^{*k} * λ^{*e} * 1`, built with iterated Zhu products.
fn ordered_product(d: u32, k: u32, e: u32) -> Result<FreeState> {
    let mut s = FreeState::vacuum();
    for _ in 0..e {
        s = zhu_star(&FreeState::generator(Generator::LStar), &s)?;
    }
    for _ in 0..k {
        s = zhu_star(&FreeState::generator(Generator::A), &s)?;
    }
    for _ in 0..d {
        s = zhu_star(&FreeState::generator(Generator::B), &s)?;
    }
    Ok(s)
}

/// The Zhu algebra of the chart is the twisted differential operators: the Weyl
/// relation, centrality of `λ̄`, and no further relations up to filtration `cutoff`.
pub fn check_zhu_of_tcdo_chart(cutoff: u32) -> Result<CheckReport> {
    let mut report = CheckReport::new("Zhu algebra of the chart");
    let a = FreeState::generator(Generator::A);
    let x = FreeState::generator(Generator::B);
    let l = FreeState::generator(Generator::LStar);
    let weyl = zhu_reduce(&(&zhu_star(&a, &x)? - &zhu_star(&x, &a)?))?;
    report.record("[∂,x] = 1", weyl == DiffOpNormalForm::one(), weyl.to_string());
    let lx = zhu_reduce(&(&zhu_star(&l, &x)? - &zhu_star(&x, &l)?))?;
    report.record("[λ,x] = 0", lx.is_zero(), lx.to_string());
    let la = zhu_reduce(&(&zhu_star(&l, &a)? - &zhu_star(&a, &l)?))?;
    report.record("[λ,∂] = 0", la.is_zero(), la.to_string());

    for degree in 0..=cutoff {
        let mut forms: Vec<SparseVec<DiffMono>> = Vec::new();
        let mut exact = true;
        for d in 0..=degree {
            for k in 0..=degree - d {
                let e = degree - d - k;
                let r = zhu_reduce(&ordered_product(d, k, e)?)?;
                exact &= r == DiffOpNormalForm::monomial(i64::from(d), k, e);
                forms.push(r.terms().map(|(m, c)| (*m, c.clone())).collect());
            }
        }
        let r = rank(&forms);
        report.record(
            format!("filtration degree {degree}"),
            exact && r == forms.len(),
            format!("rank {r} of {} monomials x^d ∂^k λ^e", forms.len()),
        );
    }
    Ok(report)
}

/// A sampled spanning element of `O'(V)`: `f_(n) w` with `f` of weight 0, or
/// `(y_(n) + y_(n+1)) w` with `y` of weight 1, for `n ≤ -2`.
fn sample_o_prime(sampler: &mut StateSampler) -> Result<FreeState> {
    let w = sampler.state(Ring::Poly, true);
    let n = sampler.int_in(-3, -2);
    if sampler.int_in(0, 1) == 0 {
        let f = FreeState::ground(sampler.int_in(0, 3));
        f.apply_mode(n, &w)
    } else {
        let y = match sampler.int_in(0, 2) {
            0 => lift_vector_field(sampler.int_in(0, 2)),
            1 => FreeState::generator(Generator::LStar),
            _ => FreeState::generator(Generator::A),
        };
        Ok(&y.apply_mode(n, &w)? + &y.apply_mode(n + 1, &w)?)
    }
}

/// Sampled properties: `O'(V)` closure, multiplicativity of the reduction,
/// associativity modulo `O(V)` and vanishing of `*_n` for `n ≤ -2`.
pub fn check_zhu_properties(samples: usize, seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("Zhu properties");
    let mut sampler = StateSampler::new(seed, 2);

    let mut failure = None;
    for _ in 0..samples {
        let v = sample_o_prime(&mut sampler)?;
        let mut ok = zhu_reduce(&v)?.is_zero();
        let f = FreeState::ground(sampler.int_in(0, 2));
        let m = sampler.int_in(-2, -1);
        ok &= zhu_reduce(&f.apply_mode(m, &v)?)?.is_zero();
        let y = if sampler.int_in(0, 1) == 0 { lift_vector_field(sampler.int_in(0, 2)) } else { FreeState::generator(Generator::LStar) };
        let k = sampler.int_in(-1, 0);
        ok &= zhu_reduce(&y.apply_mode(k, &v)?)?.is_zero();
        if !ok && failure.is_none() {
            failure = Some(format!("v = {v}"));
        }
    }
    record(&mut report, "O' closure", samples, failure);

    let mut failure = None;
    for _ in 0..samples {
        let u = sampler.state(Ring::Poly, true);
        let v = sampler.state(Ring::Poly, true);
        let lhs = zhu_reduce(&zhu_star(&u, &v)?)?;
        let rhs = zhu_reduce(&u)?.mul(&zhu_reduce(&v)?);
        if lhs != rhs && failure.is_none() {
            failure = Some(format!("u = {u}, v = {v}"));
        }
    }
    record(&mut report, "reduction is multiplicative", samples, failure);

    let mut failure = None;
    for _ in 0..samples {
        let u = sampler.state(Ring::Poly, true);
        let v = sampler.state(Ring::Poly, true);
        let o = sample_o_prime(&mut sampler)?;
        // representatives differing by an O'(V) element give the same product class
        let v2 = &v + &o;
        let left = zhu_reduce(&zhu_star(&u, &v)?)?;
        let right = zhu_reduce(&zhu_star(&u, &v2)?)?;
        if left != right && failure.is_none() {
            failure = Some(format!("u = {u}, v = {v}, o = {o}"));
        }
    }
    record(&mut report, "well-defined on classes", samples, failure);

    let mut failure = None;
    for _ in 0..samples {
        let a = sampler.state(Ring::Poly, true);
        let b = sampler.state(Ring::Poly, true);
        let c = sampler.state(Ring::Poly, true);
        let left = zhu_reduce(&zhu_star(&a, &zhu_star(&b, &c)?)?)?;
        let right = zhu_reduce(&zhu_star_graded(&zhu_star(&a, &b)?, &c)?)?;
        if left != right && failure.is_none() {
            failure = Some(format!("a = {a}, b = {b}, c = {c}"));
        }
    }
    record(&mut report, "associativity", samples, failure);

    let mut failure = None;
    for _ in 0..samples {
        let a = sampler.state(Ring::Poly, true);
        let b = sampler.state(Ring::Poly, true);
        let n = sampler.int_in(-4, -2);
        if !zhu_reduce(&zhu_star_n(&a, n, &b)?)?.is_zero() && failure.is_none() {
            failure = Some(format!("a = {a}, n = {n}, b = {b}"));
        }
    }
    record(&mut report, "V *_n V in O(V) for n <= -2", samples, failure);
    Ok(report)
}

fn record(report: &mut CheckReport, label: &str, samples: usize, failure: Option<String>) {
    let detail = match &failure {
        None => format!("{samples} samples"),
        Some(f) => format!("counterexample: {f}"),
    };
    report.record(label, failure.is_none(), detail);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modespace::mono;

    #[test]
    fn star_examples() {
        let x = FreeState::generator(Generator::B);
        let a = FreeState::generator(Generator::A);
        let v = mono(&[2], &[], &[], 1);
        assert_eq!(zhu_star(&x, &v).unwrap(), x.apply_mode(-1, &v).unwrap());
        assert_eq!(zhu_star(&a, &v).unwrap(), &a.apply_mode(-1, &v).unwrap() + &a.apply_mode(0, &v).unwrap());
        assert_eq!(zhu_star_n(&a, -1, &v).unwrap(), zhu_star(&a, &v).unwrap());
        assert_eq!(&zhu_star(&a, &x).unwrap() - &zhu_star(&x, &a).unwrap(), FreeState::vacuum());
        let inhom = &a + &x;
        assert!(matches!(zhu_star(&inhom, &v), Err(Error::Grading(_))));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(zhu_reduce(&FreeState::vacuum()).unwrap(), DiffOpNormalForm::one());
        assert_eq!(zhu_reduce(&mono(&[2], &[], &[], 0)).unwrap(), DiffOpNormalForm::vector_field(0).scale(&q_int(-1)));
        assert!(zhu_reduce(&mono(&[], &[2], &[], 3)).unwrap().is_zero());
    }

    #[test]
    fn weyl_product() {
        let d = DiffOpNormalForm::vector_field(0);
        let x = DiffOpNormalForm::monomial(1, 0, 0);
        assert_eq!(d.commutator(&x), DiffOpNormalForm::one());
        assert_eq!(d.mul(&DiffOpNormalForm::monomial(-1, 0, 0)).to_string(), "(-1) x^-2 + x^-1 ∂");
    }

    #[test]
    fn chart_checks_pass() {
        let r = check_alpha_relations().unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let r = check_zhu_of_tcdo_chart(3).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn sampled_properties_pass() {
        let r = check_zhu_properties(30, 3).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
