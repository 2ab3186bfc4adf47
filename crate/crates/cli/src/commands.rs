use serde_json::{json, Value};
use tcdo_core::affine::{irreducible_char_oracle, irreducible_window_stable, singular_count, verma_to_sections};
use tcdo_core::cech::{cech_dims, character_check, euler_check, expected_characters};
use tcdo_core::error::Error;
use tcdo_core::modespace::properties::{run_suite, SuiteConfig};
use tcdo_core::p1tcdo::{
    check_gluing_morphism, check_h_eigenvalues, check_involution, check_sl2_embedding, check_sl2_gluing,
    expected_sugawara, sugawara_image, sugawara_specialized_eigenvalue, GluingMap, Sl2Embedding,
};
use tcdo_core::qseries::char_l;
use tcdo_core::report::CheckReport;
use tcdo_core::scalar::{q_frac, Q};
use tcdo_core::zhu::{check_alpha_relations, check_zhu_of_tcdo_chart, check_zhu_properties};

use crate::output::{Outcome, INDEXING};
use crate::Common;

/// Largest |n| accepted by `cech`.
const N_LIMIT: i64 = 6;
const WEIGHT_LIMIT: u32 = 8;
const DEPTH_LIMIT: u32 = 6;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Run = Result<Outcome, Failure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    Symbolic,
    Specialized(i64),
}

pub fn parse_twist(s: &str) -> Result<Twist, String> {
    if s == "symbolic" {
        return Ok(Twist::Symbolic);
    }
    s.parse::<i64>()
        .map(Twist::Specialized)
        .map_err(|_| format!("expected `symbolic` or an integer, got `{s}`"))
}

/// `A..B` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad integer `{t}` in `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

fn convention(mu_window: Value) -> Value {
    json!({ "indexing": INDEXING, "mu_window": mu_window })
}

fn check_weight(c: &Common) -> Result<(), Failure> {
    if c.weight_max > WEIGHT_LIMIT {
        return Err(Failure::Usage(format!("--weight-max must be at most {WEIGHT_LIMIT}")));
    }
    Ok(())
}

fn warn_if_unsampled(o: &mut Outcome, c: &Common) {
    if c.samples == 0 {
        o.warnings.push("--samples 0: sampled properties pass vacuously".into());
    }
}

pub fn verify_engine(c: &Common, inject_sign_flip: bool) -> Run {
    check_weight(c)?;
    let mu_n = (-2i64, 2i64);
    let mut o = Outcome::new(
        "verify-engine",
        json!({
            "seed": c.seed,
            "samples": c.samples,
            "weight_max": c.weight_max,
            "convention": convention(json!({
                "n": [mu_n.0, mu_n.1],
                "rule": "|mu| <= |n| + 2*weight_max + 2, rechecked on the doubled window",
            })),
        }),
    );
    warn_if_unsampled(&mut o, c);
    let cfg = SuiteConfig { seed: c.seed, samples: c.samples, max_weight: 3, inject_sign_flip };
    o.add_report(&run_suite(&cfg)?);

    let mut stability = CheckReport::new("μ-window stability");
    for n in mu_n.0..=mu_n.1 {
        let r = cech_dims(n, c.weight_max)?;
        stability.record(
            format!("n = {n}"),
            r.stable,
            format!("window {}..{}, weight <= {}", r.mu_window.0, r.mu_window.1, c.weight_max),
        );
    }
    o.add_report(&stability);
    Ok(o)
}

pub fn zhu(c: &Common, cutoff: u32) -> Run {
    if cutoff > DEPTH_LIMIT {
        return Err(Failure::Usage(format!("--cutoff must be at most {DEPTH_LIMIT}")));
    }
    let mut o = Outcome::new(
        "zhu",
        json!({
            "cutoff": cutoff,
            "seed": c.seed,
            "samples": c.samples,
            "convention": convention(Value::Null),
        }),
    );
    warn_if_unsampled(&mut o, c);
    o.add_report(&check_alpha_relations()?);
    o.add_report(&check_zhu_of_tcdo_chart(cutoff)?);
    o.add_report(&check_zhu_properties(c.samples, c.seed)?);
    Ok(o)
}

pub fn gluing(c: &Common, twist: Twist) -> Run {
    check_weight(c)?;
    let (g, twist_json) = match twist {
        Twist::Symbolic => (GluingMap::symbolic(), json!("symbolic")),
        Twist::Specialized(n) => (GluingMap::specialized(n), json!(n)),
    };
    let mut o = Outcome::new(
        "gluing",
        json!({
            "twist": twist_json,
            "seed": c.seed,
            "samples": c.samples,
            "weight_max": c.weight_max,
            "convention": convention(Value::Null),
        }),
    );
    warn_if_unsampled(&mut o, c);
    o.add_report(&check_gluing_morphism(&g, c.samples, c.seed)?);
    o.add_report(&check_involution(&g, c.weight_max)?);
    let zero = Sl2Embedding::zero_chart();
    let infty = Sl2Embedding::infty_chart();
    o.add_report(&check_sl2_embedding(&zero)?);
    o.add_report(&check_sl2_embedding(&infty)?);
    o.add_report(&check_sl2_gluing()?);

    let mut sug = CheckReport::new("Sugawara image");
    let expected = expected_sugawara();
    for (chart, rho) in [("chart 0", &zero), ("chart ∞", &infty)] {
        let img = sugawara_image(rho)?;
        sug.record(format!("{chart}: ½λ*₍₋₁₎λ* − ∂λ*"), img == expected, img.to_string());
    }
    if let Twist::Specialized(n) = twist {
        let got = sugawara_specialized_eigenvalue(&zero, n)?;
        let want = q_frac(n * n + 2 * n, 2);
        sug.record(format!("T_0 on O({n}) ground state = (n² + 2n)/2"), got == want, got.to_string());
    }
    o.add_report(&sug);
    if let Twist::Specialized(n) = twist {
        o.add_report(&check_h_eigenvalues(n, c.weight_max)?);
    }
    Ok(o)
}

pub fn cech(c: &Common, (lo, hi): (i64, i64)) -> Run {
    check_weight(c)?;
    if lo < -N_LIMIT || hi > N_LIMIT {
        return Err(Failure::Usage(format!("--n must lie in [{}, {N_LIMIT}]", -N_LIMIT)));
    }
    let mut windows = Vec::new();
    let mut results = Vec::new();
    let mut o = Outcome::new("cech", Value::Null);
    o.csv = vec![["n", "weight", "h_weight", "dim_h0", "dim_h1"].map(String::from).to_vec()];
    for n in lo..=hi {
        let report = cech_dims(n, c.weight_max)?;
        let (euler, character, note) = if report.stable {
            (euler_check(&report)?, character_check(&report)?, String::new())
        } else {
            (false, false, Error::Stability { n }.to_string())
        };
        let (h0, h1) = expected_characters(n, c.weight_max as usize)?;
        o.pass &= euler && character;

        o.lines.push(crate::output::Line::Heading(format!("n = {n}")));
        o.lines.push(crate::output::Line::Check {
            passed: euler,
            label: "Euler identity".into(),
            detail: "Σ_μ (dim H⁰ − dim H¹) = (n+1)·p₂(j)".into(),
        });
        o.lines.push(crate::output::Line::Check { passed: character, label: "characters".into(), detail: note });
        o.plain(format!("H⁰: {}    expected {}", report.h0_character, h0));
        o.plain(format!("H¹: {}    expected {}", report.h1_character, h1));
        let nonzero: Vec<_> = report.entries.iter().filter(|e| e.dim_h0 + e.dim_h1 > 0).collect();
        if nonzero.is_empty() {
            o.plain("all bidegrees vanish");
        } else {
            o.plain(format!("{:>6} {:>8} {:>6} {:>6}", "weight", "h_weight", "dim_h0", "dim_h1"));
            for e in &nonzero {
                o.plain(format!("{:>6} {:>8} {:>6} {:>6}", e.weight, e.h_weight, e.dim_h0, e.dim_h1));
            }
        }
        for e in &report.entries {
            o.csv.push(vec![
                n.to_string(),
                e.weight.to_string(),
                e.h_weight.to_string(),
                e.dim_h0.to_string(),
                e.dim_h1.to_string(),
            ]);
        }
        windows.push(json!({ "n": n, "window": [report.mu_window.0, report.mu_window.1] }));
        results.push(json!({
            "n": n,
            "euler": euler,
            "character": character,
            "expected_h0": h0,
            "expected_h1": h1,
            "report": report,
        }));
    }
    o.params = json!({
        "n": [lo, hi],
        "weight_max": c.weight_max,
        "convention": convention(Value::Array(windows)),
    });
    o.results = results;
    Ok(o)
}

pub fn affine_char(c: &Common, n: i64, depth: u32) -> Run {
    if n < 0 {
        return Err(Failure::Usage(format!("--n must be non-negative, got {n}")));
    }
    if depth > DEPTH_LIMIT {
        return Err(Failure::Usage(format!("--depth must be at most {DEPTH_LIMIT}")));
    }
    let _ = c;
    let oracle = irreducible_char_oracle(n, depth)?;
    let closed = char_l(n, depth as usize)?;
    let stable = irreducible_window_stable(n, depth)?;
    let mut o = Outcome::new(
        "affine char",
        json!({ "n": n, "depth": depth, "convention": convention(json!("n - 2(2*depth + 2) ..= n + 2*depth")) }),
    );
    o.plain(format!("oracle:      {oracle}"));
    o.plain(format!("closed form: {closed}"));
    let mut r = CheckReport::new(format!("character of L_{n}"));
    r.record("oracle = closed form", oracle == closed, String::new());
    r.record("μ-window stable", stable, String::new());
    o.add_report(&r);
    o.csv = vec![["depth", "oracle", "closed_form"].map(String::from).to_vec()];
    for d in 0..=depth as usize {
        o.csv.push(vec![d.to_string(), oracle.coeff(d).to_string(), closed.coeff(d).to_string()]);
    }
    o.results.push(json!({ "oracle": oracle, "closed_form": closed }));
    Ok(o)
}

pub fn verma_vs_sections(c: &Common, n: i64, depth: u32) -> Run {
    if depth > DEPTH_LIMIT {
        return Err(Failure::Usage(format!("--depth must be at most {DEPTH_LIMIT}")));
    }
    if n.abs() > N_LIMIT {
        return Err(Failure::Usage(format!("--n must lie in [{}, {N_LIMIT}]", -N_LIMIT)));
    }
    let _ = c;
    let rows = verma_to_sections(n, depth)?;
    let mut o = Outcome::new("affine verma-vs-sections", json!({ "n": n, "depth": depth, "convention": convention(Value::Null) }));

    let mut r = CheckReport::new(format!("M_{n} → Γ(C_0, O({n})^ch)"));
    let dims = rows.iter().find(|x| x.quotient != x.sections);
    r.record(
        "dim M_{n/z} = dim Γ per bidegree",
        dims.is_none(),
        dims.map(|x| format!("depth {}, μ {}: {} vs {}", x.depth, x.h_weight, x.quotient, x.sections)).unwrap_or_default(),
    );
    let short: Vec<_> = rows.iter().filter(|x| x.rank != x.sections).collect();
    if n < -1 {
        r.record(
            "full rank in every bidegree",
            short.is_empty(),
            short.first().map(|x| format!("depth {}, μ {}: rank {} of {}", x.depth, x.h_weight, x.rank, x.sections)).unwrap_or_default(),
        );
    }
    o.add_report(&r);
    if short.is_empty() {
        o.plain(format!("full rank: the map is onto Γ in every bidegree up to depth {depth}"));
    } else {
        o.plain(format!("rank below dim Γ in {} of {} bidegrees", short.len(), rows.len()));
    }
    o.plain(format!("{:>5} {:>8} {:>6} {:>8} {:>8} {:>5}", "depth", "h_weight", "verma", "quotient", "sections", "rank"));
    o.csv = vec![["n", "depth", "h_weight", "verma", "quotient", "sections", "rank"].map(String::from).to_vec()];
    for x in &rows {
        o.plain(format!(
            "{:>5} {:>8} {:>6} {:>8} {:>8} {:>5}",
            x.depth, x.h_weight, x.verma, x.quotient, x.sections, x.rank
        ));
        o.csv.push(
            [n, x.depth.into(), x.h_weight, x.verma as i64, x.quotient as i64, x.sections as i64, x.rank as i64]
                .map(|v| v.to_string())
                .to_vec(),
        );
    }
    o.results.push(json!({ "rows": rows }));
    Ok(o)
}

/// Bidegrees `(depth, shift)` where `M_{ν/z}` must carry a singular vector besides `v`.
fn expected_singular(nu: &Q, depth: u32) -> Vec<(u32, i64)> {
    if !nu.is_integer() {
        return Vec::new();
    }
    let Ok(n) = i64::try_from(nu.to_integer()) else { return Vec::new() };
    let dm = i64::from(depth);
    if n >= 0 && n < 2 * dm + 2 {
        vec![(0, -(n + 1))]
    } else if n <= -2 && -n - 1 <= dm {
        vec![((-n - 1) as u32, -n - 1)]
    } else {
        Vec::new()
    }
}

pub fn generic(c: &Common, nu: &str, depth: u32) -> Run {
    let _ = c;
    let nu: Q = nu.parse().map_err(|_| Failure::Usage(format!("--nu expects a rational such as 1/2, got `{nu}`")))?;
    if depth > 4 {
        return Err(Failure::Usage("--depth must be at most 4".into()));
    }
    let counts = singular_count(&nu, depth);
    let found: Vec<(u32, i64)> =
        counts.iter().filter(|((d, s), _)| (*d, *s) != (0, 0)).map(|(k, _)| *k).collect();
    let hw_ok = counts.iter().any(|(k, c)| *k == (0, 0) && *c == 1);
    let expected = expected_singular(&nu, depth);

    let mut o = Outcome::new(
        "affine generic",
        json!({ "nu": nu.to_string(), "depth": depth, "convention": convention(json!(format!("shift -{}..={depth}", 2 * depth + 2))) }),
    );
    let mut r = CheckReport::new(format!("singular vectors of M_{{{nu}/z}}"));
    r.record("highest-weight vector is singular", hw_ok, String::new());
    r.record(
        "singular vectors as predicted",
        found == expected,
        format!("found {found:?}, expected {expected:?} as (depth, shift)"),
    );
    o.add_report(&r);
    if found.is_empty() {
        o.plain("no singular vectors found");
    } else {
        for (d, s) in &found {
            o.plain(format!("singular vector at depth {d}, μ = {}", &nu + Q::from_integer((2 * s).into())));
        }
    }
    o.results.push(json!({
        "counts": counts.iter().map(|((d, s), k)| json!({"depth": d, "shift": s, "count": k})).collect::<Vec<_>>(),
    }));
    Ok(o)
}
