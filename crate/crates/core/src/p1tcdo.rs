//! The projective line: its two affine charts, the gluing homomorphism from the
//! chart at infinity to the overlap, the critical-level `sl2` embedding and the
//! section spaces of `O(n)^ch`.
//!
//! On every chart the free field `b` is the local coordinate (`x` on the chart at
//! zero, `y = 1/x` at infinity) and `a` is the matching vector field `∂_x` or `∂_y`.
//! States of the chart at infinity are written in the same engine, read in `y`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modespace::sampling::StateSampler;
use crate::modespace::{mono, FreeState, Generator, LStar, Monomial, Ring};
use crate::report::CheckReport;
use crate::scalar::{q_frac, q_int};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ChartId {
    Zero,
    Infty,
    Overlap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub id: ChartId,
    pub ring: Ring,
}

impl Chart {
    pub fn new(id: ChartId) -> Self {
        let ring = if id == ChartId::Overlap { Ring::Laurent } else { Ring::Poly };
        Chart { id, ring }
    }
}

/// The homomorphism from states on the chart at infinity to states on the overlap.
///
/// Generator images: `y ↦ x^{-1}`, `∂_y ↦ -a_(-1)x^2 - 2∂x + x_(-1)λ*` (the last
/// term only when twisted), `λ* ↦ λ*`. When specialised at `n` the map acts on
/// module vectors and sends `y^k` to `x^{n-k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GluingMap {
    pub twisted: bool,
    pub lstar: LStar,
}

impl GluingMap {
    pub fn untwisted() -> Self {
        GluingMap { twisted: false, lstar: LStar::Symbolic }
    }

    pub fn symbolic() -> Self {
        GluingMap { twisted: true, lstar: LStar::Symbolic }
    }

    pub fn specialized(n: i64) -> Self {
        GluingMap { twisted: true, lstar: LStar::Specialized(n) }
    }

    /// Image of a generator state `g_(-1)|0>`.
    pub fn image(&self, g: Generator) -> FreeState {
        let state = match g {
            Generator::A => {
                let mut s = &mono(&[1], &[], &[], 2).scale(&q_int(-1)) - &mono(&[], &[2], &[], 0).scale(&q_int(2));
                if self.twisted {
                    s = &s + &mono(&[], &[], &[1], 1);
                }
                s
            }
            Generator::B => FreeState::ground(-1),
            Generator::LStar => FreeState::generator(Generator::LStar),
        };
        state.with_ring(Ring::Laurent)
    }

    /// Images of all generators, for display.
    pub fn images(&self) -> Vec<(Generator, FreeState)> {
        [Generator::A, Generator::B, Generator::LStar].into_iter().map(|g| (g, self.image(g))).collect()
    }

    fn ground_image(&self, k: i64) -> FreeState {
        let exp = match self.lstar {
            LStar::Symbolic => -k,
            LStar::Specialized(n) => n - k,
        };
        FreeState::ground(exp).with_ring(Ring::Laurent)
    }

    fn glue_monomial(&self, m: &Monomial, cache: &mut HashMap<Monomial, FreeState>) -> Result<FreeState> {
        if let Some(s) = cache.get(m) {
            return Ok(s.clone());
        }
        let out = match m.split_head() {
            None => {
                let g = self.ground_image(m.ground());
                match self.lstar {
                    LStar::Symbolic => g,
                    LStar::Specialized(n) => g.into_module(n)?,
                }
            }
            Some((g, s, rest)) => {
                if g == Generator::LStar && !self.twisted && self.lstar != LStar::Symbolic {
                    return Err(Error::Specialization("λ* mode on an untwisted module".into()));
                }
                let tail = self.glue_monomial(&rest, cache)?;
                self.image(g).apply_mode(-i64::from(s), &tail)?
            }
        };
        cache.insert(m.clone(), out.clone());
        Ok(out)
    }

    /// `Φ(u)`. The state's `λ*` treatment must match the map's.
    pub fn glue(&self, u: &FreeState) -> Result<FreeState> {
        let mut cache = HashMap::new();
        self.glue_cached(u, &mut cache)
    }

    /// `Φ(u)` reusing a memo table of monomial images across calls.
    pub fn glue_cached(&self, u: &FreeState, cache: &mut HashMap<Monomial, FreeState>) -> Result<FreeState> {
        if u.lstar() != self.lstar {
            return Err(Error::Specialization(format!("map is {:?}, state is {:?}", self.lstar, u.lstar())));
        }
        let mut out = FreeState::zero(Ring::Laurent, self.lstar);
        for (m, c) in u.terms() {
            out = &out + &self.glue_monomial(m, cache)?.scale(c);
        }
        Ok(out)
    }
}

/// Images of `e`, `h`, `f` as states on one chart (symbolic twist).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Embedding {
    pub chart: ChartId,
    pub e: FreeState,
    pub h: FreeState,
    pub f: FreeState,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sl2 {
    E,
    H,
    F,
}

impl Sl2 {
    pub const ALL: [Sl2; 3] = [Sl2::E, Sl2::H, Sl2::F];

    /// `[self, other]` as `(coefficient, element)`, or `None` when zero.
    pub fn bracket(self, other: Sl2) -> Option<(i64, Sl2)> {
        match (self, other) {
            (Sl2::E, Sl2::F) => Some((1, Sl2::H)),
            (Sl2::F, Sl2::E) => Some((-1, Sl2::H)),
            (Sl2::H, Sl2::E) => Some((2, Sl2::E)),
            (Sl2::E, Sl2::H) => Some((-2, Sl2::E)),
            (Sl2::H, Sl2::F) => Some((-2, Sl2::F)),
            (Sl2::F, Sl2::H) => Some((2, Sl2::F)),
            _ => None,
        }
    }

    /// Invariant form with `(e|f) = 1`, `(h|h) = 2`.
    pub fn form(self, other: Sl2) -> i64 {
        match (self, other) {
            (Sl2::E, Sl2::F) | (Sl2::F, Sl2::E) => 1,
            (Sl2::H, Sl2::H) => 2,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sl2::E => "e",
            Sl2::H => "h",
            Sl2::F => "f",
        }
    }
}

impl Sl2Embedding {
    /// `e ↦ a`, `h ↦ -2a_(-1)x + λ*`, `f ↦ -a_(-1)x^2 - 2∂x + x_(-1)λ*`.
    pub fn zero_chart() -> Self {
        let e = mono(&[1], &[], &[], 0);
        let h = &mono(&[1], &[], &[], 1).scale(&q_int(-2)) + &mono(&[], &[], &[1], 0);
        let f = &(&mono(&[1], &[], &[], 2).scale(&q_int(-1)) - &mono(&[], &[2], &[], 0).scale(&q_int(2)))
            + &mono(&[], &[], &[1], 1);
        Sl2Embedding { chart: ChartId::Zero, e, h, f }
    }

    /// The same embedding written in the coordinate `y` of the chart at infinity:
    /// `e ↦ -a_(-1)y^2 - 2∂y + y_(-1)λ*`, `h ↦ 2a_(-1)y - λ*`, `f ↦ a`.
    pub fn infty_chart() -> Self {
        let e = &(&mono(&[1], &[], &[], 2).scale(&q_int(-1)) - &mono(&[], &[2], &[], 0).scale(&q_int(2)))
            + &mono(&[], &[], &[1], 1);
        let h = &mono(&[1], &[], &[], 1).scale(&q_int(2)) - &mono(&[], &[], &[1], 0);
        let f = mono(&[1], &[], &[], 0);
        Sl2Embedding { chart: ChartId::Infty, e, h, f }
    }

    pub fn get(&self, x: Sl2) -> &FreeState {
        match x {
            Sl2::E => &self.e,
            Sl2::H => &self.h,
            Sl2::F => &self.f,
        }
    }
}

/// Verifies `ρ(x)_(0)ρ(y) = ρ([x,y])` and `ρ(x)_(1)ρ(y) = -2(x|y)|0>`.
pub fn check_sl2_embedding(rho: &Sl2Embedding) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("sl2 embedding on {:?}", rho.chart));
    let vac = FreeState::vacuum();
    for x in Sl2::ALL {
        for y in Sl2::ALL {
            let got = rho.get(x).apply_mode(0, rho.get(y))?;
            let want = match x.bracket(y) {
                Some((c, z)) => rho.get(z).scale(&q_int(c)),
                None => FreeState::zero(Ring::Poly, LStar::Symbolic),
            };
            report.record(format!("[{}, {}]", x.name(), y.name()), got == want, format!("{got}"));
        }
    }
    for (i, x) in Sl2::ALL.into_iter().enumerate() {
        for y in Sl2::ALL.into_iter().skip(i) {
            let got = rho.get(x).apply_mode(1, rho.get(y))?;
            let want = vac.scale(&q_int(-2 * x.form(y)));
            report.record(format!("{}_(1) {}", x.name(), y.name()), got == want, format!("{got}"));
        }
    }
    Ok(report)
}

/// The images on the chart at infinity, glued to the overlap, equal the images on the chart at zero.
pub fn check_sl2_gluing() -> Result<CheckReport> {
    let mut report = CheckReport::new("sl2 images agree through gluing");
    let zero = Sl2Embedding::zero_chart();
    let infty = Sl2Embedding::infty_chart();
    let phi = GluingMap::symbolic();
    for x in Sl2::ALL {
        let glued = phi.glue(infty.get(x))?;
        let direct = zero.get(x).clone().with_ring(Ring::Laurent);
        report.record(x.name(), glued == direct, format!("{glued}"));
    }
    Ok(report)
}

/// `ρ(e)_(-1)ρ(f) + ρ(f)_(-1)ρ(e) + ½ρ(h)_(-1)ρ(h)`.
pub fn sugawara_image(rho: &Sl2Embedding) -> Result<FreeState> {
    let ef = rho.e.apply_mode(-1, &rho.f)?;
    let fe = rho.f.apply_mode(-1, &rho.e)?;
    let hh = rho.h.apply_mode(-1, &rho.h)?;
    Ok(&(&ef + &fe) + &hh.scale(&q_frac(1, 2)))
}

/// `½λ*_(-1)λ*|0> - λ*_(-2)|0>`.
pub fn expected_sugawara() -> FreeState {
    &mono(&[], &[], &[1, 1], 0).scale(&q_frac(1, 2)) - &mono(&[], &[], &[2], 0)
}

/// Eigenvalue of the Sugawara zero mode `T_(1)` on the ground state `1` of the module at `n`.
pub fn sugawara_specialized_eigenvalue(rho: &Sl2Embedding, n: i64) -> Result<crate::Q> {
    let t = sugawara_image(rho)?;
    let one = FreeState::vacuum().into_module(n)?;
    let out = t.apply_mode(1, &one)?;
    let c = out.coeff(&Monomial::default());
    if out != one.scale(&c) {
        return Err(Error::Grading("T_(1) is not diagonal on the ground state".into()));
    }
    Ok(c)
}

/// Mode contents `(a-depths, b-depths)` of total conformal weight `weight`.
pub fn mode_contents(weight: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = Vec::new();
    for wa in 0..=weight {
        for pa in partitions(wa) {
            for pb in partitions(weight - wa) {
                let b = pb.iter().map(|t| t + 1).collect();
                out.push((pa.clone(), b));
            }
        }
    }
    out
}

/// All partitions of `n`, parts weakly decreasing.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rem)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Normal-form basis monomials of `Γ(chart, O(n)^ch)` at bidegree `(weight, μ)`.
///
/// On the chart at zero and the overlap `μ = n + 2#a - 2#b - 2k`; on the chart at
/// infinity, in the coordinate `y`, `μ = -n - 2#a + 2#b + 2k`.
pub fn section_monomials(chart: ChartId, n: i64, weight: u32, mu: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    for (a, b) in mode_contents(weight) {
        let modes = 2 * a.len() as i64 - 2 * b.len() as i64;
        let twice_k = match chart {
            ChartId::Zero | ChartId::Overlap => n + modes - mu,
            ChartId::Infty => mu + n + modes,
        };
        if twice_k.rem_euclid(2) != 0 {
            continue;
        }
        let k = twice_k / 2;
        if k < 0 && chart != ChartId::Overlap {
            continue;
        }
        out.push(Monomial::new(&a, &b, &[], k));
    }
    out.sort();
    out
}

/// Basis of `Γ(chart, O(n)^ch)` in the window `weight ≤ weight_max`, `μ ∈ h_window`.
pub fn sections(chart: ChartId, n: i64, weight_max: u32, h_window: (i64, i64)) -> Vec<FreeState> {
    let ring = Chart::new(chart).ring;
    let mut out = Vec::new();
    for w in 0..=weight_max {
        for mu in h_window.0..=h_window.1 {
            for m in section_monomials(chart, n, w, mu) {
                let s = FreeState::from_terms([(q_int(1), m)], ring, LStar::Specialized(n));
                out.push(s);
            }
        }
    }
    out
}

/// Morphism property `Φ(u_(m)v) = Φ(u)_(m)Φ(v)` on generator pairs and sampled pairs.
pub fn check_gluing_morphism(g: &GluingMap, samples: usize, seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("gluing morphism ({})", describe(g)));
    let symbolic = GluingMap { lstar: LStar::Symbolic, ..*g };
    let mut gens = vec![Generator::A, Generator::B];
    if g.twisted {
        gens.push(Generator::LStar);
    }
    let module = |s: FreeState| -> Result<FreeState> {
        match g.lstar {
            LStar::Symbolic => Ok(s),
            LStar::Specialized(n) => s.into_module(n),
        }
    };
    for &xi in &gens {
        for &eta in &gens {
            if eta == Generator::LStar && g.lstar != LStar::Symbolic {
                continue;
            }
            for m in [0, 1] {
                let u = FreeState::generator(xi);
                let v = module(FreeState::generator(eta))?;
                let lhs = g.glue(&u.apply_mode(m, &v)?)?;
                let rhs = symbolic.glue(&u)?.apply_mode(m, &g.glue(&v)?)?;
                report.record(format!("{xi:?}_({m}) {eta:?}"), lhs == rhs, format!("{lhs}"));
            }
        }
    }
    let mut sampler = StateSampler::new(seed, 3);
    let mut failure = None;
    for _ in 0..samples {
        let u = sampler.state(Ring::Poly, g.twisted);
        let v = match g.lstar {
            LStar::Symbolic => sampler.state(Ring::Poly, g.twisted),
            LStar::Specialized(n) => sampler.state(Ring::Poly, false).into_module(n)?,
        };
        let m = sampler.int_in(-3, 2);
        let lhs = g.glue(&u.apply_mode(m, &v)?)?;
        let rhs = symbolic.glue(&u)?.apply_mode(m, &g.glue(&v)?)?;
        if lhs != rhs && failure.is_none() {
            failure = Some(format!("u = {u}, m = {m}, v = {v}"));
        }
    }
    let detail = match &failure {
        None => format!("{samples} sampled pairs"),
        Some(f) => format!("counterexample: {f}"),
    };
    report.record("sampled pairs", failure.is_none(), detail);
    Ok(report)
}

fn describe(g: &GluingMap) -> String {
    match (g.twisted, g.lstar) {
        (false, _) => "untwisted".into(),
        (true, LStar::Symbolic) => "symbolic twist".into(),
        (true, LStar::Specialized(n)) => format!("twist {n}"),
    }
}

/// Basis monomials of the overlap at weight `≤ weight_max` and `|μ| ≤ 2·weight_max + 4`.
pub fn overlap_basis(g: &GluingMap, weight_max: u32) -> Vec<FreeState> {
    let bound = 2 * i64::from(weight_max) + 4;
    let mut out = Vec::new();
    match g.lstar {
        LStar::Specialized(n) => {
            for s in sections(ChartId::Overlap, n, weight_max, (-bound, bound)) {
                out.push(s);
            }
        }
        LStar::Symbolic => {
            // λ* modes carry weight but no h-weight
            for w in 0..=weight_max {
                for wl in 0..=w {
                    let lparts = if g.twisted || wl == 0 { partitions(wl) } else { Vec::new() };
                    for l in lparts {
                        for (a, b) in mode_contents(w - wl) {
                            let modes = 2 * a.len() as i64 - 2 * b.len() as i64;
                            for mu in (-bound..=bound).filter(|mu| (modes - mu).rem_euclid(2) == 0) {
                                let k = (modes - mu) / 2;
                                let m = Monomial::new(&a, &b, &l, k);
                                out.push(FreeState::from_terms([(q_int(1), m)], Ring::Laurent, LStar::Symbolic));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// The map composed with its mirror is the identity on the overlap basis.
pub fn check_involution(g: &GluingMap, weight_max: u32) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("gluing involution ({})", describe(g)));
    let basis = overlap_basis(g, weight_max);
    let mut cache = HashMap::new();
    let mut failure = None;
    for u in &basis {
        let once = g.glue_cached(u, &mut cache)?;
        let twice = g.glue_cached(&once, &mut cache)?;
        if &twice != u && failure.is_none() {
            failure = Some(format!("{u} -> {once} -> {twice}"));
        }
    }
    let detail = match &failure {
        None => format!("{} basis states", basis.len()),
        Some(f) => format!("counterexample: {f}"),
    };
    report.record(format!("weight <= {weight_max}"), failure.is_none(), detail);
    Ok(report)
}

/// `ρ(h)_(0)` acts on every section basis vector by its combinatorial `h`-weight.
pub fn check_h_eigenvalues(n: i64, weight_max: u32) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("h eigenvalues on sections, n = {n}"));
    let bound = n.abs() + 2 * i64::from(weight_max) + 2;
    for (chart, rho) in [(ChartId::Zero, Sl2Embedding::zero_chart()), (ChartId::Infty, Sl2Embedding::infty_chart())] {
        let mut failure = None;
        let mut count = 0;
        for w in 0..=weight_max {
            for mu in -bound..=bound {
                for m in section_monomials(chart, n, w, mu) {
                    let s = FreeState::from_terms([(q_int(1), m)], Ring::Poly, LStar::Specialized(n));
                    count += 1;
                    if rho.h.apply_mode(0, &s)? != s.scale(&q_int(mu)) && failure.is_none() {
                        failure = Some(format!("{s} at μ = {mu}"));
                    }
                }
            }
        }
        let detail = failure.clone().unwrap_or_else(|| format!("{count} basis vectors"));
        report.record(format!("{chart:?}"), failure.is_none(), detail);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glue_examples() {
        let phi = GluingMap::symbolic();
        assert_eq!(phi.glue(&FreeState::ground(1)).unwrap(), FreeState::ground(-1));
        assert_eq!(phi.glue(&FreeState::vacuum()).unwrap(), FreeState::vacuum().with_ring(Ring::Laurent));
        assert_eq!(phi.glue(&FreeState::generator(Generator::A)).unwrap(), phi.image(Generator::A));
        let spec = GluingMap::specialized(3);
        let one = FreeState::vacuum().into_module(3).unwrap();
        let img = spec.glue(&one).unwrap();
        assert_eq!(img, FreeState::ground(3).with_ring(Ring::Laurent).into_module(3).unwrap());
        assert!(phi.glue(&one).is_err());
    }

    #[test]
    fn partitions_count() {
        let counts: Vec<usize> = (0..7).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn overlap_sections_single_monomial_at_weight_zero() {
        assert_eq!(section_monomials(ChartId::Overlap, 3, 0, 1), vec![Monomial::new(&[], &[], &[], 1)]);
        assert!(section_monomials(ChartId::Overlap, 3, 0, 2).is_empty());
        let zero = sections(ChartId::Zero, 0, 0, (-6, 6));
        assert_eq!(zero.len(), 4);
    }

    #[test]
    fn sl2_brackets_on_zero_chart() {
        let r = check_sl2_embedding(&Sl2Embedding::zero_chart()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.count(), 15);
    }

    #[test]
    fn sugawara_matches() {
        let t = sugawara_image(&Sl2Embedding::zero_chart()).unwrap();
        assert_eq!(t, expected_sugawara());
    }

    fn assert_passed(r: CheckReport) {
        assert!(r.passed(), "{}: {:?}", r.name, r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn infinity_chart_and_gluing_agree() {
        assert_passed(check_sl2_embedding(&Sl2Embedding::infty_chart()).unwrap());
        assert_passed(check_sl2_gluing().unwrap());
    }

    #[test]
    fn involution_small() {
        for g in [GluingMap::untwisted(), GluingMap::symbolic(), GluingMap::specialized(2), GluingMap::specialized(-3)] {
            assert_passed(check_involution(&g, 2).unwrap());
        }
    }

    #[test]
    fn morphism_small() {
        for g in [GluingMap::untwisted(), GluingMap::symbolic(), GluingMap::specialized(1), GluingMap::specialized(-2)] {
            assert_passed(check_gluing_morphism(&g, 20, 5).unwrap());
        }
    }

    #[test]
    fn h_eigenvalues_small() {
        for n in [-2, 0, 3] {
            assert_passed(check_h_eigenvalues(n, 2).unwrap());
        }
    }

    #[test]
    fn sugawara_zero_mode_on_ground_state() {
        let rho = Sl2Embedding::zero_chart();
        for n in -3..=3 {
            assert_eq!(sugawara_specialized_eigenvalue(&rho, n).unwrap(), q_frac(n * n + 2 * n, 2));
        }
    }
}
