//! Engine self-consistency checks: the Borcherds identity, translation
//! covariance, the commutator formula, weight bookkeeping and diagonality of the
//! `h` zero mode.

use super::sampling::StateSampler;
use super::{mono, FreeState, Generator, LStar, Monomial, Ring};
use crate::error::Result;
use crate::report::CheckReport;
use crate::scalar::{binom_q, q_int, sign, Q};

/// Upper bound for mode indices `p` with `v_(p) u` possibly nonzero.
fn mode_bound(v: &FreeState, u: &FreeState) -> i64 {
    i64::from(v.max_weight().unwrap_or(0)) + i64::from(u.max_weight().unwrap_or(0))
}

/// Both sides of the Borcherds identity
///
/// ```text
/// Σ_j C(m,j) (a_(n+j) b)_(m+k-j) c = Σ_j (-1)^j C(n,j) [a_(m+n-j) b_(k+j) c - (-1)^n b_(n+k-j) a_(m+j) c]
/// ```
pub fn borcherds_sides(
    a: &FreeState,
    b: &FreeState,
    c: &FreeState,
    m: i64,
    n: i64,
    k: i64,
) -> Result<(FreeState, FreeState)> {
    let zero = || FreeState::zero(a.ring().max(b.ring()).max(c.ring()), c.lstar());
    let mut lhs = zero();
    let mut j = 0;
    while n + j < mode_bound(a, b) {
        let ab = a.apply_mode(n + j, b)?;
        if !ab.is_zero() {
            let t = ab.apply_mode(m + k - j, c)?;
            lhs = &lhs + &t.scale(&binom_q(m, j as u32));
        }
        j += 1;
    }
    let mut rhs = zero();
    let mut j = 0;
    while k + j < mode_bound(b, c) {
        let bc = b.apply_mode(k + j, c)?;
        if !bc.is_zero() {
            let t = a.apply_mode(m + n - j, &bc)?;
            rhs = &rhs + &t.scale(&(sign(j) * binom_q(n, j as u32)));
        }
        j += 1;
    }
    let mut j = 0;
    while m + j < mode_bound(a, c) {
        let ac = a.apply_mode(m + j, c)?;
        if !ac.is_zero() {
            let t = b.apply_mode(n + k - j, &ac)?;
            rhs = &rhs - &t.scale(&(sign(j) * sign(n) * binom_q(n, j as u32)));
        }
        j += 1;
    }
    Ok((lhs, rhs))
}

pub fn check_borcherds(a: &FreeState, b: &FreeState, c: &FreeState, m: i64, n: i64, k: i64) -> Result<bool> {
    let (lhs, rhs) = borcherds_sides(a, b, c, m, n, k)?;
    Ok(lhs == rhs)
}

/// `(∂u)_(m) w = -m u_(m-1) w`.
pub fn check_translation_covariance(u: &FreeState, m: i64, w: &FreeState) -> Result<bool> {
    let lhs = u.translation().apply_mode(m, w)?;
    let rhs = u.apply_mode(m - 1, w)?.scale(&q_int(-m));
    Ok(lhs == rhs)
}

/// `[w_(r), v_(m)] u = Σ_j C(r,j) (w_(j) v)_(r+m-j) u`.
pub fn check_commutator(w: &FreeState, v: &FreeState, u: &FreeState, r: i64, m: i64) -> Result<bool> {
    let lhs = &w.apply_mode(r, &v.apply_mode(m, u)?)? - &v.apply_mode(m, &w.apply_mode(r, u)?)?;
    let mut rhs = FreeState::zero(lhs.ring(), lhs.lstar());
    let mut j = 0;
    while j < mode_bound(w, v) {
        let wv = w.apply_mode(j, v)?;
        if !wv.is_zero() {
            rhs = &rhs + &wv.apply_mode(r + m - j, u)?.scale(&binom_q(r, j as u32));
        }
        j += 1;
    }
    Ok(lhs == rhs)
}

/// For homogeneous `w`, `u`: every term of `w_(m) u` has weight `wt w + wt u - m - 1`.
pub fn check_weight_bookkeeping(w: &FreeState, m: i64, u: &FreeState) -> Result<bool> {
    let (Some(ww), Some(wu)) = (w.homogeneous_weight(), u.homogeneous_weight()) else {
        return Ok(true);
    };
    let expected = i64::from(ww) + i64::from(wu) - m - 1;
    let r = w.apply_mode(m, u)?;
    let ok = r.terms().all(|(t, _)| i64::from(t.weight()) == expected);
    Ok(ok)
}

/// The state `-2 a_(-1) x|0> + λ*|0>`.
pub fn h_state() -> FreeState {
    &mono(&[1], &[], &[], 1).scale(&q_int(-2)) + &FreeState::generator(Generator::LStar)
}

/// `h_(0)` acts on the basis monomial `u` by its combinatorial `h`-weight.
pub fn check_h_diagonal(u: &Monomial, ring: Ring, lstar: LStar) -> Result<bool> {
    let state = FreeState::from_terms([(Q::from_integer(1.into()), u.clone())], ring, lstar);
    let twist = match lstar {
        LStar::Symbolic => 0,
        LStar::Specialized(n) => n,
    };
    let out = h_state().apply_mode(0, &state)?;
    Ok(out == state.scale(&q_int(u.h_weight(twist))))
}

/// Configuration of the engine property suite.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub max_weight: u32,
    /// Deliberately breaks one side of the Borcherds identity (negative-path testing).
    pub inject_sign_flip: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 42, samples: 100, max_weight: 3, inject_sign_flip: false }
    }
}

struct Tally {
    run: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { run: 0, failure: None }
    }

    fn note(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.run += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn record(self, report: &mut CheckReport, label: &str) {
        let passed = self.failure.is_none();
        let detail = match self.failure {
            None => format!("{} cases", self.run),
            Some(f) => format!("{} cases; counterexample: {f}", self.run),
        };
        report.record(label, passed, detail);
    }
}

/// Runs every engine property on seeded samples. Borcherds uses twice `samples` triples.
pub fn run_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("engine");
    let mut sampler = StateSampler::new(cfg.seed, cfg.max_weight);

    // exhaustive generator check
    let mut t = Tally::new();
    let a = FreeState::generator(Generator::A);
    let x = FreeState::generator(Generator::B);
    let vac = FreeState::vacuum();
    for m in -3..=3 {
        for n in -3..=3 {
            for k in -3..=3 {
                let ok = borcherds_with_fault(&a, &x, &vac, m, n, k, cfg.inject_sign_flip)?;
                t.note(ok, || format!("a, x, |0>, (m,n,k)=({m},{n},{k})"));
            }
        }
    }
    t.record(&mut report, "borcherds on generators");

    let mut t = Tally::new();
    for _ in 0..2 * cfg.samples {
        let ring = sampler.ring();
        let a = sampler.state(ring, true);
        let b = sampler.state(ring, true);
        let c = sampler.target(ring);
        let (m, n, k) = (sampler.int_in(-2, 2), sampler.int_in(-2, 2), sampler.int_in(-2, 2));
        let ok = borcherds_with_fault(&a, &b, &c, m, n, k, cfg.inject_sign_flip)?;
        t.note(ok, || format!("a = {a}, b = {b}, c = {c}, (m,n,k)=({m},{n},{k})"));
    }
    t.record(&mut report, "borcherds identity");

    let mut t = Tally::new();
    for _ in 0..cfg.samples {
        let ring = sampler.ring();
        let u = sampler.state(ring, true);
        let w = sampler.target(ring);
        let m = sampler.int_in(-3, 3);
        let ok = check_translation_covariance(&u, m, &w)?;
        t.note(ok, || format!("u = {u}, w = {w}, m = {m}"));
    }
    t.record(&mut report, "translation covariance");

    let mut t = Tally::new();
    for _ in 0..cfg.samples {
        let ring = sampler.ring();
        let w = sampler.state(ring, true);
        let v = sampler.state(ring, true);
        let u = sampler.target(ring);
        let (r, m) = (sampler.int_in(-2, 2), sampler.int_in(-2, 2));
        let ok = check_commutator(&w, &v, &u, r, m)?;
        t.note(ok, || format!("w = {w}, v = {v}, u = {u}, (r,m)=({r},{m})"));
    }
    t.record(&mut report, "commutator formula");

    let mut t = Tally::new();
    for _ in 0..cfg.samples {
        let ring = sampler.ring();
        let w = sampler.state(ring, true);
        let u = sampler.target(ring);
        let m = sampler.int_in(-3, 3);
        let ok = check_weight_bookkeeping(&w, m, &u)?;
        t.note(ok, || format!("w = {w}, u = {u}, m = {m}"));
    }
    t.record(&mut report, "weight bookkeeping");

    let mut t = Tally::new();
    for _ in 0..cfg.samples {
        let ring = sampler.ring();
        let weight = sampler.int_in(0, i64::from(cfg.max_weight)) as u32;
        let specialise = sampler.int_in(0, 1) == 1;
        let u = sampler.monomial(weight, ring, !specialise);
        let lstar = if specialise { LStar::Specialized(sampler.int_in(-3, 3)) } else { LStar::Symbolic };
        let ok = check_h_diagonal(&u, ring, lstar)?;
        t.note(ok, || format!("u = {u}, {lstar:?}"));
    }
    t.record(&mut report, "h zero-mode diagonality");

    Ok(report)
}

fn borcherds_with_fault(a: &FreeState, b: &FreeState, c: &FreeState, m: i64, n: i64, k: i64, flip: bool) -> Result<bool> {
    let (lhs, rhs) = borcherds_sides(a, b, c, m, n, k)?;
    if flip {
        return Ok(-&lhs == rhs);
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_satisfies_borcherds() {
        let vac = FreeState::vacuum();
        let b = mono(&[2], &[], &[1], 2);
        let c = mono(&[1], &[3], &[], 0);
        for (m, n, k) in [(-1, -1, -1), (0, 1, -2), (2, -2, 0)] {
            assert!(check_borcherds(&vac, &b, &c, m, n, k).unwrap());
        }
    }

    #[test]
    fn h_state_weights() {
        assert!(check_h_diagonal(&Monomial::new(&[1], &[2], &[], 3), Ring::Poly, LStar::Specialized(4)).unwrap());
        assert!(check_h_diagonal(&Monomial::new(&[], &[], &[1], -2), Ring::Laurent, LStar::Symbolic).unwrap());
    }

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig { samples: 100, ..SuiteConfig::default() };
        let report = run_suite(&cfg).unwrap();
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }
}
