//! Critical-level `sl2`-hat highest-weight modules in a PBW basis, with no
//! free-field input: Verma modules `M_ν`, their Sugawara quotients `M_{ν/z}`,
//! the irreducible quotients `L_n` and the comparison map into chart sections.
//!
//! Loop modes `x_m = x ⊗ t^m` satisfy
//! `[x_m, y_k] = [x,y]_{m+k} + m δ_{m+k,0} (x|y) K` with `K = -2`.
//! A PBW monomial is a weakly increasing word of lowering modes (`f_0` and
//! `x_{-m}`, `m ≥ 1`) applied to the highest-weight vector, leftmost outermost.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{add_entry, add_scaled, kernel, rank, Echelon, SparseVec};
use crate::modespace::{FreeState, Monomial};
use crate::p1tcdo::{section_monomials, ChartId, Sl2, Sl2Embedding};
use crate::qseries::{from_degree_counts, QSeries};
use crate::report::CheckReport;
use crate::scalar::{q_frac, q_int, Q};

/// Critical level.
pub const LEVEL: i64 = -2;

/// The loop mode `x_m`. Ordered by `m`, then `e < h < f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mode {
    pub m: i64,
    pub x: Sl2,
}

impl Mode {
    pub fn new(x: Sl2, m: i64) -> Self {
        Mode { m, x }
    }

    pub fn is_lowering(self) -> bool {
        self.m < 0 || (self.m == 0 && self.x == Sl2::F)
    }

    /// Contribution to `h`-weight.
    fn h_shift(self) -> i64 {
        match self.x {
            Sl2::E => 2,
            Sl2::H => 0,
            Sl2::F => -2,
        }
    }
}

pub type PbwMonomial = Vec<Mode>;
type Terms = SparseVec<PbwMonomial>;

/// An exact combination of PBW monomials applied to the highest-weight vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PBWVector {
    pub nu: Q,
    terms: Terms,
}

impl PBWVector {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[Mode]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut terms = Terms::new();
        add_scaled(&mut terms, &self.terms, c);
        PBWVector { nu: self.nu.clone(), terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &other.terms, &Q::one());
        PBWVector { nu: self.nu.clone(), terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    fn max_depth(&self) -> i64 {
        self.terms.keys().map(|m| depth(m)).max().unwrap_or(0)
    }

    pub(crate) fn sparse(&self) -> &Terms {
        &self.terms
    }
}

pub fn depth(m: &[Mode]) -> i64 {
    m.iter().map(|y| -y.m).sum()
}

/// `(#e - #f)` of a monomial; its `h`-weight is `ν + 2·shift`.
pub fn h_shift(m: &[Mode]) -> i64 {
    m.iter().map(|y| y.h_shift()).sum::<i64>() / 2
}

/// `M_ν` at level `-2`, with a memo table for straightening.
pub struct VermaModule {
    nu: Q,
    memo: RefCell<HashMap<(Mode, PbwMonomial), Terms>>,
}

impl VermaModule {
    pub fn new(nu: Q) -> Self {
        VermaModule { nu, memo: RefCell::new(HashMap::new()) }
    }

    pub fn nu(&self) -> &Q {
        &self.nu
    }

    pub fn hw(&self) -> PBWVector {
        self.vector([(vec![], Q::one())])
    }

    pub fn vector(&self, terms: impl IntoIterator<Item = (PbwMonomial, Q)>) -> PBWVector {
        let mut t = Terms::new();
        for (mut m, c) in terms {
            m.sort();
            add_entry(&mut t, m, c);
        }
        PBWVector { nu: self.nu.clone(), terms: t }
    }

    /// The PBW monomial `word` applied to the highest-weight vector, computed by
    /// acting with its letters (so the word need not be sorted).
    pub fn word(&self, word: &[Mode]) -> PBWVector {
        let mut v = self.hw();
        for &y in word.iter().rev() {
            v = self.act(y.x, y.m, &v);
        }
        v
    }

    fn act_mono(&self, z: Mode, mono: &[Mode]) -> Terms {
        if z.x == Sl2::H && z.m == 0 {
            let mut out = Terms::new();
            add_entry(&mut out, mono.to_vec(), &self.nu + q_int(2 * h_shift(mono)));
            return out;
        }
        if mono.is_empty() {
            let mut out = Terms::new();
            if z.is_lowering() {
                out.insert(vec![z], Q::one());
            }
            return out;
        }
        if z.is_lowering() && z <= mono[0] {
            let mut m = Vec::with_capacity(mono.len() + 1);
            m.push(z);
            m.extend_from_slice(mono);
            return Terms::from([(m, Q::one())]);
        }
        let key = (z, mono.to_vec());
        if let Some(t) = self.memo.borrow().get(&key) {
            return t.clone();
        }
        let y = mono[0];
        let rest = &mono[1..];
        // z y rest = y (z rest) + [z, y] rest
        let inner = self.act_mono(z, rest);
        let mut out = self.act_terms(y, &inner);
        if let Some((c, w)) = z.x.bracket(y.x) {
            add_scaled(&mut out, &self.act_mono(Mode::new(w, z.m + y.m), rest), &q_int(c));
        }
        let central = z.m * z.x.form(y.x) * LEVEL;
        if z.m + y.m == 0 && central != 0 {
            add_entry(&mut out, rest.to_vec(), q_int(central));
        }
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn act_terms(&self, z: Mode, v: &Terms) -> Terms {
        let mut out = Terms::new();
        for (m, c) in v {
            add_scaled(&mut out, &self.act_mono(z, m), c);
        }
        out
    }

    /// `x_m v`.
    pub fn act(&self, x: Sl2, m: i64, v: &PBWVector) -> PBWVector {
        PBWVector { nu: self.nu.clone(), terms: self.act_terms(Mode::new(x, m), &v.terms) }
    }

    /// The Sugawara operator `T_k = (e_{-1}f + f_{-1}e + ½h_{-1}h)_k`, normal ordered:
    /// for each pair `Σ_{j<0} x_j y_{k-j} + Σ_{j≥0} y_{k-j} x_j`.
    pub fn sugawara_apply(&self, k: i64, v: &PBWVector) -> PBWVector {
        let d = v.max_depth();
        let mut out = Terms::new();
        let pairs = [(Sl2::E, Sl2::F, Q::one()), (Sl2::F, Sl2::E, Q::one()), (Sl2::H, Sl2::H, q_frac(1, 2))];
        for (x, y, c) in &pairs {
            for j in (k - d).min(0)..=d {
                let t = if j < 0 {
                    self.act_terms(Mode::new(*x, j), &self.act_terms(Mode::new(*y, k - j), &v.terms))
                } else {
                    self.act_terms(Mode::new(*y, k - j), &self.act_terms(Mode::new(*x, j), &v.terms))
                };
                add_scaled(&mut out, &t, c);
            }
        }
        PBWVector { nu: self.nu.clone(), terms: out }
    }

    /// PBW basis of the bidegree `(d, ν + 2·shift)`.
    pub fn basis(&self, d: u32, shift: i64) -> Vec<PbwMonomial> {
        pbw_basis(d, shift)
    }

    /// Span of all `T_{-k} M` (`k ≥ 1`) in bidegree `(d, shift)`.
    pub fn sugawara_image(&self, d: u32, shift: i64) -> Echelon<PbwMonomial> {
        let mut span = Echelon::new();
        for k in 1..=d {
            for m in pbw_basis(d - k, shift) {
                let v = self.sugawara_apply(-i64::from(k), &self.vector([(m, Q::one())]));
                span.insert(&v.terms);
            }
        }
        span
    }
}

/// Multisets of negative modes of total depth `d`, as sorted words.
fn negative_words(d: u32) -> Vec<PbwMonomial> {
    fn go(rem: i64, min: Mode, cur: &mut Vec<Mode>, out: &mut Vec<PbwMonomial>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for m in (-rem)..0 {
            for x in Sl2::ALL {
                let y = Mode::new(x, m);
                if y < min {
                    continue;
                }
                cur.push(y);
                go(rem + m, y, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(i64::from(d), Mode::new(Sl2::E, i64::MIN), &mut Vec::new(), &mut out);
    out
}

/// PBW monomials of depth `d` and `h`-weight `ν + 2·shift`.
pub fn pbw_basis(d: u32, shift: i64) -> Vec<PbwMonomial> {
    let mut out = Vec::new();
    for mut w in negative_words(d) {
        let j = h_shift(&w) - shift;
        if j < 0 {
            continue;
        }
        w.extend(std::iter::repeat_n(Mode::new(Sl2::F, 0), j as usize));
        out.push(w);
    }
    out.sort();
    out
}

fn shift_of(nu: &Q, mu: &Q) -> Option<i64> {
    let diff = mu - nu;
    if !diff.is_integer() {
        return None;
    }
    let two = BigInt::from(2);
    let t = diff.to_integer();
    if &t % &two != BigInt::zero() {
        return None;
    }
    i64::try_from(t / two).ok()
}

/// Dimension of `M_ν` at depth `d` and `h`-weight `μ`: the PBW monomial count.
pub fn verma_dim(nu: &Q, d: u32, mu: &Q) -> usize {
    match shift_of(nu, mu) {
        Some(s) => pbw_basis(d, s).len(),
        None => 0,
    }
}

/// Dimension of the Sugawara quotient `M_{ν/z} = M_ν / Σ_{k>0} T_{-k} M_ν` at one bidegree.
pub fn quotient_dim(module: &VermaModule, d: u32, mu: &Q) -> usize {
    let Some(s) = shift_of(&module.nu, mu) else { return 0 };
    pbw_basis(d, s).len() - module.sugawara_image(d, s).dim()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct QuotientEntry {
    pub depth: u32,
    pub h_weight: i64,
    pub verma: usize,
    pub quotient: usize,
}

/// Per-bidegree dimensions of `M_n` and `M_{n/z}` up to depth `d_max`,
/// with `μ` over `[n - 2(2·d_max + 2), n + 2·d_max]`, and the per-depth
/// character of the quotient summed over that window.
pub fn quotient_char(n: i64, d_max: u32) -> (Vec<QuotientEntry>, QSeries) {
    let module = VermaModule::new(q_int(n));
    let mut entries = Vec::new();
    let dm = i64::from(d_max);
    for d in 0..=d_max {
        for s in -(2 * dm + 2)..=dm {
            let verma = pbw_basis(d, s).len();
            if verma == 0 {
                continue;
            }
            let quotient = verma - module.sugawara_image(d, s).dim();
            entries.push(QuotientEntry { depth: d, h_weight: n + 2 * s, verma, quotient });
        }
    }
    let mut counts: BTreeMap<usize, BigInt> = BTreeMap::new();
    for e in &entries {
        *counts.entry(e.depth as usize).or_default() += BigInt::from(e.quotient);
    }
    let series = from_degree_counts(d_max as usize, counts.iter().map(|(k, v)| (*k, v)));
    (entries, series)
}

/// `x_m` for the positive part and `e_0`: the operators whose joint kernel defines singular vectors.
fn raising_checks(d_max: u32) -> Vec<Mode> {
    let mut ops = vec![Mode::new(Sl2::E, 0)];
    for m in 1..=i64::from(d_max.max(1)) {
        ops.extend(Sl2::ALL.iter().map(|&x| Mode::new(x, m)));
    }
    ops
}

/// The vector generating the proper submodule of `M_{n/z}`: `f_0^{n+1}v` for
/// `n ≥ 0`, `e_{-1}^{-n-1}v` for `n ≤ -2`; `None` for `n = -1`.
pub fn submodule_generator(module: &VermaModule, n: i64) -> Option<PBWVector> {
    let word: Vec<Mode> = if n >= 0 {
        vec![Mode::new(Sl2::F, 0); (n + 1) as usize]
    } else if n <= -2 {
        vec![Mode::new(Sl2::E, -1); (-n - 1) as usize]
    } else {
        return None;
    };
    Some(module.word(&word))
}

/// Whether `v` is killed by `e_0` and the positive modes up to `d_max`.
pub fn is_singular(module: &VermaModule, v: &PBWVector, d_max: u32) -> bool {
    raising_checks(d_max).into_iter().all(|y| module.act(y.x, y.m, v).is_zero())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IrreducibleEntry {
    pub depth: u32,
    pub h_weight: i64,
    pub quotient: usize,
    pub submodule: usize,
    pub irreducible: usize,
}

/// Brute-force `L_n` for `n ≥ 0`: `M_{n/z}` modulo the submodule generated by
/// `f_0^{n+1}v`, per bidegree, generated with lowering operators depth by depth.
pub fn irreducible_table(n: i64, d_max: u32, mu_lo: i64, mu_hi: i64) -> Result<Vec<IrreducibleEntry>> {
    if n < 0 {
        return Err(Error::Domain(format!("irreducible oracle needs n >= 0, got {n}")));
    }
    let module = VermaModule::new(q_int(n));
    let gen = submodule_generator(&module, n).expect("n >= 0");
    if !is_singular(&module, &gen, d_max) {
        return Err(Error::Domain("generating vector is not singular".into()));
    }
    let s_lo = (mu_lo - n).div_euclid(2);
    let s_hi = (mu_hi - n).div_euclid(2);
    // submodule span per bidegree (d, shift), including the Sugawara image
    let mut sub: BTreeMap<(u32, i64), Echelon<PbwMonomial>> = BTreeMap::new();
    let gen_key = (0u32, -(n + 1));
    let lowering: Vec<Mode> = {
        let mut v = vec![Mode::new(Sl2::F, 0)];
        for m in 1..=i64::from(d_max) {
            v.extend(Sl2::ALL.iter().map(|&x| Mode::new(x, -m)));
        }
        v
    };
    let mut entries = Vec::new();
    for d in 0..=d_max {
        // μ descending so f_0 images at the same depth are ready
        for s in (s_lo..=s_hi).rev() {
            let mut span = module.sugawara_image(d, s);
            if (d, s) == gen_key {
                span.insert(gen.sparse());
            }
            for y in &lowering {
                let yd = (-y.m) as u32;
                if yd > d {
                    continue;
                }
                let src = (d - yd, s - h_shift(&[*y]));
                if src == (d, s) {
                    continue;
                }
                if let Some(src_span) = sub.get(&src) {
                    for b in src_span.basis() {
                        span.insert(&module.act_terms(*y, b));
                    }
                }
            }
            let verma = pbw_basis(d, s).len();
            let quotient = verma - module.sugawara_image(d, s).dim();
            let irreducible = verma - span.dim();
            if verma > 0 {
                entries.push(IrreducibleEntry {
                    depth: d,
                    h_weight: n + 2 * s,
                    quotient,
                    submodule: quotient - irreducible,
                    irreducible,
                });
            }
            sub.insert((d, s), span);
        }
    }
    Ok(entries)
}

/// `ch L_n` per depth, summing bidegree dimensions over `μ ∈ [n - 2(d_max + n + 2), n + 2·d_max]`.
pub fn irreducible_char_oracle(n: i64, d_max: u32) -> Result<QSeries> {
    let lo = n - 2 * (i64::from(d_max) + n + 2);
    let hi = n + 2 * i64::from(d_max);
    let table = irreducible_table(n, d_max, lo, hi)?;
    let mut counts: BTreeMap<usize, BigInt> = BTreeMap::new();
    for e in &table {
        *counts.entry(e.depth as usize).or_default() += BigInt::from(e.irreducible);
    }
    Ok(from_degree_counts(d_max as usize, counts.iter().map(|(k, v)| (*k, v))))
}

/// Whether `irreducible_char_oracle`'s window captures everything: the table on
/// a wider window has no nonzero irreducible entries outside it.
pub fn irreducible_window_stable(n: i64, d_max: u32) -> Result<bool> {
    let lo = n - 2 * (i64::from(d_max) + n + 2);
    let hi = n + 2 * i64::from(d_max);
    let wide = irreducible_table(n, d_max, lo - 8, hi + 8)?;
    Ok(wide.iter().all(|e| (lo..=hi).contains(&e.h_weight) || e.irreducible == 0))
}

/// Number of singular vectors of `M_{ν/z}` (classes killed by `e_0` and `f_1`
/// modulo the Sugawara image) in each bidegree up to `d_max`, for `μ = ν - 2j`,
/// `0 ≤ j ≤ 2·d_max + 2`, and `μ` above `ν` up to `ν + 2·d_max`.
pub fn singular_count(nu: &Q, d_max: u32) -> Vec<((u32, i64), usize)> {
    let module = VermaModule::new(nu.clone());
    let dm = i64::from(d_max);
    let probes = [Mode::new(Sl2::E, 0), Mode::new(Sl2::F, 1)];
    let mut out = Vec::new();
    for d in 0..=d_max {
        for s in -(2 * dm + 2)..=dm {
            let basis = pbw_basis(d, s);
            if basis.is_empty() {
                continue;
            }
            let own = module.sugawara_image(d, s);
            let targets: Vec<Echelon<PbwMonomial>> = probes
                .iter()
                .map(|p| {
                    let td = d as i64 - p.m;
                    if td < 0 {
                        Echelon::new()
                    } else {
                        module.sugawara_image(td as u32, s + h_shift(&[*p]))
                    }
                })
                .collect();
            let columns: Vec<SparseVec<(usize, PbwMonomial)>> = basis
                .iter()
                .map(|m| {
                    let v = module.vector([(m.clone(), Q::one())]);
                    let mut col = SparseVec::new();
                    for (i, p) in probes.iter().enumerate() {
                        let img = targets[i].reduce(&module.act(p.x, p.m, &v).terms);
                        for (k, c) in img {
                            col.insert((i, k), c);
                        }
                    }
                    col
                })
                .collect();
            let ker = kernel(&columns).len();
            let count = ker - own.dim();
            if count > 0 {
                out.push(((d, s), count));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SectionRank {
    pub depth: u32,
    pub h_weight: i64,
    pub verma: usize,
    pub quotient: usize,
    pub sections: usize,
    pub rank: usize,
}

/// The map `M_n → Γ(C_0, O(n)^ch)` sending the highest-weight vector to `1`,
/// obtained by replaying each PBW word through the free-field `sl2` modes.
pub fn verma_to_sections(n: i64, d_max: u32) -> Result<Vec<SectionRank>> {
    let rho = Sl2Embedding::zero_chart();
    let module = VermaModule::new(q_int(n));
    let one = FreeState::vacuum().into_module(n)?;
    let dm = i64::from(d_max);
    let mut cache: HashMap<PbwMonomial, FreeState> = HashMap::new();
    let mut out = Vec::new();
    for d in 0..=d_max {
        for s in -(2 * dm + 2 + n.abs())..=dm {
            let basis = pbw_basis(d, s);
            let mu = n + 2 * s;
            let sections = section_monomials(ChartId::Zero, n, d, mu).len();
            if basis.is_empty() && sections == 0 {
                continue;
            }
            let mut images: Vec<SparseVec<Monomial>> = Vec::new();
            for w in &basis {
                let img = replay(&rho, w, &one, &mut cache)?;
                images.push(img.terms().map(|(m, c)| (m.clone(), c.clone())).collect());
            }
            out.push(SectionRank {
                depth: d,
                h_weight: mu,
                verma: basis.len(),
                quotient: basis.len() - module.sugawara_image(d, s).dim(),
                sections,
                rank: rank(&images),
            });
        }
    }
    Ok(out)
}

fn replay(
    rho: &Sl2Embedding,
    word: &[Mode],
    one: &FreeState,
    cache: &mut HashMap<PbwMonomial, FreeState>,
) -> Result<FreeState> {
    if word.is_empty() {
        return Ok(one.clone());
    }
    if let Some(s) = cache.get(word) {
        return Ok(s.clone());
    }
    let tail = replay(rho, &word[1..], one, cache)?;
    let y = word[0];
    let out = rho.get(y.x).apply_mode(y.m, &tail)?;
    cache.insert(word.to_vec(), out.clone());
    Ok(out)
}

/// Commutator self-consistency and Sugawara centrality on seeded random vectors.
pub fn check_affine_properties(samples: usize, seed: u64) -> CheckReport {
    let mut report = CheckReport::new("affine module");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nus = [q_int(0), q_int(1), q_int(-3), q_frac(1, 2)];
    let mut jacobi_fail = None;
    let mut central_fail = None;
    for i in 0..samples {
        let module = VermaModule::new(nus[i % nus.len()].clone());
        let d = rng.gen_range(0..=2u32);
        let s = rng.gen_range(-2..=1i64);
        let basis = pbw_basis(d, s);
        if basis.is_empty() {
            continue;
        }
        let v = module.vector(basis.iter().map(|m| (m.clone(), q_int(rng.gen_range(-2..=2)))));
        let x = Sl2::ALL[rng.gen_range(0..3)];
        let y = Sl2::ALL[rng.gen_range(0..3)];
        let (m, k) = (rng.gen_range(-2..=2i64), rng.gen_range(-2..=2i64));
        let lhs = module.act(x, m, &module.act(y, k, &v)).sub(&module.act(y, k, &module.act(x, m, &v)));
        let mut rhs = match x.bracket(y) {
            Some((c, z)) => module.act(z, m + k, &v).scale(&q_int(c)),
            None => v.scale(&Q::zero()),
        };
        if m + k == 0 {
            rhs = rhs.add(&v.scale(&q_int(m * x.form(y) * LEVEL)));
        }
        if lhs != rhs && jacobi_fail.is_none() {
            jacobi_fail = Some(format!("[{}_{m}, {}_{k}] at ν = {}", x.name(), y.name(), module.nu));
        }
        let t = rng.gen_range(-2..=1i64);
        let comm = module.sugawara_apply(t, &module.act(x, m, &v)).sub(&module.act(x, m, &module.sugawara_apply(t, &v)));
        if !comm.is_zero() && central_fail.is_none() {
            central_fail = Some(format!("[T_{t}, {}_{m}] at ν = {}", x.name(), module.nu));
        }
    }
    for (label, fail) in [("mode commutators", jacobi_fail), ("Sugawara centrality", central_fail)] {
        let detail = fail.clone().unwrap_or_else(|| format!("{samples} samples"));
        report.record(label, fail.is_none(), detail);
    }
    report
}
