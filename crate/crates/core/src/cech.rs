//! Čech cohomology of `O(n)^ch` on the cover of the projective line by the
//! charts at zero and infinity.
//!
//! Everything is graded by the bidegree `(N, μ)` (conformal weight, `h`-weight)
//! and each graded piece of each cochain space is finite-dimensional, so the
//! two-term complex `C0 ⊕ C∞ → C*`, `(s0, s∞) ↦ s0 - Φ_n(s∞)` is handled one
//! bidegree at a time with exact ranks.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{add_scaled, kernel, rank, SparseVec};
use crate::modespace::{FreeState, LStar, Monomial, Ring};
use crate::p1tcdo::{section_monomials, ChartId, GluingMap, Sl2, Sl2Embedding};
use crate::qseries::{char_h1, char_l, eta_inverse_squared, QSeries};
use crate::report::CheckReport;
use crate::scalar::{q_int, Q};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BidegreeDims {
    pub weight: u32,
    pub h_weight: i64,
    pub dim_c0: usize,
    pub dim_cinf: usize,
    pub dim_overlap: usize,
    pub dim_h0: usize,
    pub dim_h1: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BigradedReport {
    pub n: i64,
    pub weight_max: u32,
    /// Scanned `h`-weights: `mu_window.0 ..= mu_window.1`.
    pub mu_window: (i64, i64),
    /// Nonempty bidegrees, sorted by `(weight, h_weight)`.
    pub entries: Vec<BidegreeDims>,
    pub h0_character: QSeries,
    pub h1_character: QSeries,
    pub stable: bool,
}

impl BigradedReport {
    pub fn entry(&self, weight: u32, h_weight: i64) -> Option<&BidegreeDims> {
        self.entries.iter().find(|e| e.weight == weight && e.h_weight == h_weight)
    }

    /// `Σ_μ (h0 - h1) = Σ_μ (c0 + c∞ - c*)` at every weight.
    pub fn rank_nullity_ok(&self) -> bool {
        (0..=self.weight_max).all(|w| {
            let (mut lhs, mut rhs) = (0i64, 0i64);
            for e in self.entries.iter().filter(|e| e.weight == w) {
                lhs += e.dim_h0 as i64 - e.dim_h1 as i64;
                rhs += (e.dim_c0 + e.dim_cinf) as i64 - e.dim_overlap as i64;
            }
            lhs == rhs
        })
    }
}

fn mu_bound(n: i64, weight_max: u32) -> i64 {
    n.abs() + 2 * i64::from(weight_max) + 2
}

fn module_state(m: Monomial, n: i64) -> FreeState {
    FreeState::from_terms([(Q::from_integer(1.into()), m)], Ring::Poly, LStar::Specialized(n))
}

fn to_sparse(s: &FreeState) -> SparseVec<Monomial> {
    s.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// The differential at one bidegree: columns are images of the `C0` basis
/// followed by the `C∞` basis.
struct Block {
    c0: Vec<Monomial>,
    cinf: Vec<Monomial>,
    overlap: usize,
    columns: Vec<SparseVec<Monomial>>,
}

fn build_block(n: i64, weight: u32, mu: i64, cache: &mut HashMap<Monomial, FreeState>) -> Result<Block> {
    let phi = GluingMap::specialized(n);
    let c0 = section_monomials(ChartId::Zero, n, weight, mu);
    let cinf = section_monomials(ChartId::Infty, n, weight, mu);
    let overlap = section_monomials(ChartId::Overlap, n, weight, mu).len();
    let mut columns = Vec::with_capacity(c0.len() + cinf.len());
    for m in &c0 {
        columns.push(SparseVec::from([(m.clone(), q_int(1))]));
    }
    for m in &cinf {
        let img = phi.glue_cached(&module_state(m.clone(), n), cache)?;
        let mut col = SparseVec::new();
        add_scaled(&mut col, &to_sparse(&img), &q_int(-1));
        columns.push(col);
    }
    Ok(Block { c0, cinf, overlap, columns })
}

fn block_dims(n: i64, weight: u32, mu: i64, cache: &mut HashMap<Monomial, FreeState>) -> Result<BidegreeDims> {
    let b = build_block(n, weight, mu, cache)?;
    let r = rank(&b.columns);
    Ok(BidegreeDims {
        weight,
        h_weight: mu,
        dim_c0: b.c0.len(),
        dim_cinf: b.cinf.len(),
        dim_overlap: b.overlap,
        dim_h0: b.c0.len() + b.cinf.len() - r,
        dim_h1: b.overlap - r,
    })
}

fn scan(n: i64, weight_max: u32, bound: i64) -> Result<Vec<BidegreeDims>> {
    let blocks: Vec<(u32, i64)> = (0..=weight_max)
        .flat_map(|w| (-bound..=bound).filter(move |mu| (mu - n).rem_euclid(2) == 0).map(move |mu| (w, mu)))
        .collect();
    let dims: Vec<Result<BidegreeDims>> =
        blocks.par_iter().map_init(HashMap::new, |cache, &(w, mu)| block_dims(n, w, mu, cache)).collect();
    let mut out = Vec::new();
    for d in dims {
        let d = d?;
        if d.dim_c0 + d.dim_cinf + d.dim_overlap > 0 {
            out.push(d);
        }
    }
    out.sort_by_key(|d| (d.weight, d.h_weight));
    Ok(out)
}

fn character(entries: &[BidegreeDims], weight_max: u32, pick: impl Fn(&BidegreeDims) -> usize) -> QSeries {
    let mut counts: BTreeMap<usize, BigInt> = BTreeMap::new();
    for e in entries {
        *counts.entry(e.weight as usize).or_default() += BigInt::from(pick(e));
    }
    crate::qseries::from_degree_counts(weight_max as usize, counts.iter().map(|(k, v)| (*k, v)))
}

/// Bigraded dimensions of the Čech complex and its cohomology for weights `≤ weight_max`.
///
/// The `h`-weight scan covers `|μ| ≤ |n| + 2·weight_max + 2`; the scan is repeated
/// on the doubled window and the report is flagged stable iff nothing new appears.
pub fn cech_dims(n: i64, weight_max: u32) -> Result<BigradedReport> {
    let bound = mu_bound(n, weight_max);
    let entries = scan(n, weight_max, bound)?;
    let wide = scan(n, weight_max, 2 * bound)?;
    let stable = wide.iter().all(|d| {
        if d.h_weight.abs() <= bound {
            entries.iter().any(|e| e == d)
        } else {
            d.dim_h0 == 0 && d.dim_h1 == 0
        }
    });
    Ok(BigradedReport {
        n,
        weight_max,
        mu_window: (-bound, bound),
        h0_character: character(&entries, weight_max, |e| e.dim_h0),
        h1_character: character(&entries, weight_max, |e| e.dim_h1),
        entries,
        stable,
    })
}

/// `ch H0 - ch H1 = (n+1)·∏(1-q^j)^{-2}` coefficient-wise.
pub fn euler_check(report: &BigradedReport) -> Result<bool> {
    if !report.stable {
        return Err(Error::Stability { n: report.n });
    }
    let order = report.weight_max as usize;
    let diff = report.h0_character.try_sub(&report.h1_character)?;
    Ok(diff == eta_inverse_squared(order).scale(&BigInt::from(report.n + 1)))
}

/// The characters predicted for `H0` and `H1` of `O(n)^ch`.
pub fn expected_characters(n: i64, order: usize) -> Result<(QSeries, QSeries)> {
    if n >= 0 {
        Ok((char_l(n, order)?, char_h1(n, order)?))
    } else if n == -1 {
        Ok((QSeries::zero(order), QSeries::zero(order)))
    } else {
        let m = -n - 2;
        let l = char_l(m, order)?;
        Ok((l.shift((-n - 1) as usize), l))
    }
}

pub fn character_check(report: &BigradedReport) -> Result<bool> {
    if !report.stable {
        return Err(Error::Stability { n: report.n });
    }
    let (h0, h1) = expected_characters(report.n, report.weight_max as usize)?;
    Ok(report.h0_character == h0 && report.h1_character == h1)
}

/// Kernel of the differential at one bidegree, as pairs `(s0, s∞)`.
fn cocycles(n: i64, weight: u32, mu: i64, cache: &mut HashMap<Monomial, FreeState>) -> Result<Vec<(FreeState, FreeState)>> {
    let b = build_block(n, weight, mu, cache)?;
    let rels = kernel(&b.columns);
    let mut out = Vec::new();
    for rel in rels {
        let (head, tail) = rel.split_at(b.c0.len());
        let s0 = FreeState::from_terms(head.iter().cloned().zip(b.c0.iter().cloned()), Ring::Poly, LStar::Specialized(n));
        let sinf =
            FreeState::from_terms(tail.iter().cloned().zip(b.cinf.iter().cloned()), Ring::Poly, LStar::Specialized(n));
        out.push((s0, sinf));
    }
    Ok(out)
}

/// Representatives of `H0` classes killed by `ρ(e)_(0)` and all `ρ(x)_(m)`, `m ≥ 1`,
/// together with their bidegrees.
pub fn singular_vectors_h0(n: i64, weight_max: u32) -> Result<Vec<((u32, i64), FreeState)>> {
    if n < 0 {
        return Err(Error::Domain(format!("singular vector scan needs n >= 0, got {n}")));
    }
    let rho = Sl2Embedding::zero_chart();
    let bound = mu_bound(n, weight_max);
    let mut cache = HashMap::new();
    let mut found = Vec::new();
    for w in 0..=weight_max {
        for mu in (-bound..=bound).filter(|mu| (mu - n).rem_euclid(2) == 0) {
            let basis: Vec<FreeState> = cocycles(n, w, mu, &mut cache)?.into_iter().map(|(s0, _)| s0).collect();
            if basis.is_empty() {
                continue;
            }
            let mut ops: Vec<(Sl2, i64)> = vec![(Sl2::E, 0)];
            for m in 1..=i64::from(w) {
                ops.extend(Sl2::ALL.iter().map(|&x| (x, m)));
            }
            let mut columns = Vec::new();
            for v in &basis {
                let mut col: SparseVec<(usize, Monomial)> = SparseVec::new();
                for (i, &(x, m)) in ops.iter().enumerate() {
                    let img = rho.get(x).apply_mode(m, v)?;
                    for (mono, c) in img.terms() {
                        col.insert((i, mono.clone()), c.clone());
                    }
                }
                columns.push(col);
            }
            for rel in kernel(&columns) {
                let mut s = FreeState::zero(Ring::Poly, LStar::Specialized(n));
                for (c, v) in rel.iter().zip(&basis) {
                    s = &s + &v.scale(c);
                }
                found.push(((w, mu), s));
            }
        }
    }
    Ok(found)
}

/// The `sl2`-hat action preserves cocycles: for a basis `(s0, s∞)` of the kernel,
/// `ρ0(x)_(m) s0 = Φ_n(ρ∞(x)_(m) s∞)` for `x ∈ {e, h, f}`, `m ∈ {-1, 0, 1, 2}`.
pub fn check_sl2_stability(n: i64, weight_max: u32) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("sl2 stability of cocycles, n = {n}"));
    let rho0 = Sl2Embedding::zero_chart();
    let rhoinf = Sl2Embedding::infty_chart();
    let phi = GluingMap::specialized(n);
    let bound = mu_bound(n, weight_max);
    let mut cache = HashMap::new();
    let mut checked = 0;
    let mut failure = None;
    for w in 0..=weight_max {
        for mu in (-bound..=bound).filter(|mu| (mu - n).rem_euclid(2) == 0) {
            for (s0, sinf) in cocycles(n, w, mu, &mut cache)? {
                for x in Sl2::ALL {
                    for m in -1..=2 {
                        let left = rho0.get(x).apply_mode(m, &s0)?;
                        let right = phi.glue_cached(&rhoinf.get(x).apply_mode(m, &sinf)?, &mut cache)?;
                        checked += 1;
                        if left != right && failure.is_none() {
                            failure = Some(format!("{}_({m}) on cocycle at ({w}, {mu})", x.name()));
                        }
                    }
                }
            }
        }
    }
    let detail = failure.clone().unwrap_or_else(|| format!("{checked} images"));
    report.record("kernel preserved", failure.is_none(), detail);
    Ok(report)
}
