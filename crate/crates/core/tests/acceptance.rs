//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use gcc_codec::code::{ErasureSet, LinearCode};
use gcc_codec::concat::{row_decode, ConcatCode, DecodeOptions, ErasurePattern};
use gcc_codec::config::{CodeConfig, Codec};
use gcc_codec::galois::{make_field, prime_field, Field, Symbol};
use gcc_codec::gcc::GccSpec;
use gcc_codec::gmd::GmdMode;
use gcc_codec::matrix::{self, Matrix};
use gcc_codec::mpc::{is_nsc, is_triangular, random_nsc_matrix, uuv_matrix, uvw_matrix, MpcSpec};
use gcc_codec::oracle::{oracle_nearest, oracle_sigma};
use gcc_codec::report::DecodeReport;
use gcc_codec::sim::{self, ChannelModel, ExperimentConfig, TrialOutcome};
use gcc_codec::CodecError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

// ---------- independent oracles ----------

/// Every message of a `k`-dimensional code over `field`, in base-q counting order.
fn all_messages(q: u64, k: usize) -> impl Iterator<Item = Vec<Symbol>> {
    let total = q.pow(k as u32);
    (0..total).map(move |mut idx| {
        (0..k)
            .map(|_| {
                let digit = (idx % q) as Symbol;
                idx /= q;
                digit
            })
            .collect()
    })
}

/// Minimum distance of the code generated by the rows of `g`, by enumeration.
fn brute_min_distance(field: &Field, g: &Matrix) -> usize {
    all_messages(field.order(), g.rows())
        .filter(|m| m.iter().any(|&x| x != 0))
        .map(|m| matrix::weight(&g.left_mul(field, &m).unwrap()))
        .min()
        .unwrap()
}

/// Number of coordinates that are non-zero in the sum over levels.
fn sum_of_row_costs(e: &Matrix, x: &ErasurePattern, cap: usize) -> usize {
    (0..e.rows())
        .map(|j| {
            let erased = x.row(j);
            let wt = (0..e.cols()).filter(|&i| !erased.contains(i) && e.get(j, i) != 0).count();
            (2 * wt + erased.size()).min(2 * cap)
        })
        .sum()
}

fn random_symbols(rng: &mut ChaCha8Rng, q: u64, len: usize) -> Vec<Symbol> {
    (0..len).map(|_| rng.random_range(0..q) as Symbol).collect()
}

fn random_nonzero(rng: &mut ChaCha8Rng, q: u64) -> Symbol {
    rng.random_range(1..q) as Symbol
}

/// `count` distinct positions out of `0..len`.
fn random_positions(rng: &mut ChaCha8Rng, len: usize, count: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..len).collect();
    for i in 0..count {
        let j = rng.random_range(i..len);
        all.swap(i, j);
    }
    all.truncate(count);
    all
}

fn random_full_rank(rng: &mut ChaCha8Rng, field: &Field, k: usize, n: usize) -> Matrix {
    loop {
        let g = Matrix::from_flat(k, n, random_symbols(rng, field.order(), k * n)).unwrap();
        if g.rank(field) == k {
            return g;
        }
    }
}

// ---------- trial and counter audit ----------

#[derive(Default)]
struct TrialAudit {
    columns: usize,
    violations: usize,
    carry_runs: usize,
    carry_violations: usize,
}

impl TrialAudit {
    /// Checks every column of `report` against the per-level trial bound.
    fn check(&mut self, report: &DecodeReport, outer_distance: impl Fn(usize) -> usize, erasure_mode: bool) {
        for round in &report.rounds {
            let (d_a, d_b) = (outer_distance(round.level), round.inner_distance);
            let bound = if erasure_mode { d_b.min(d_a.div_ceil(2)) } else { d_a.min(d_b).div_ceil(2) };
            for col in &round.columns {
                self.columns += 1;
                if col.trials > bound {
                    self.violations += 1;
                }
            }
        }
    }
}

fn report_of(result: &Result<DecodeReport, CodecError>) -> Option<&DecodeReport> {
    match result {
        Ok(r) => Some(r),
        Err(CodecError::DecodeFailure { report, .. }) => Some(report),
        Err(_) => None,
    }
}

// ---------- shared codes ----------

fn criterion1_code() -> MpcSpec {
    let gf8 = make_field(2, 3, None).unwrap();
    let a1 = LinearCode::reed_solomon(&gf8, 7, 5).unwrap();
    let a2 = LinearCode::reed_solomon(&gf8, 7, 1).unwrap();
    MpcSpec::new(&gf8, vec![a1, a2], uuv_matrix()).unwrap()
}

fn criterion2_code() -> ConcatCode {
    let gf2 = prime_field(2).unwrap();
    let gf4 = make_field(2, 2, None).unwrap();
    let inner = Matrix::from_rows(&[vec![1, 0, 1, 1, 0], vec![0, 1, 0, 1, 1]]).unwrap();
    ConcatCode::new(
        LinearCode::reed_solomon(&gf4, 3, 1).unwrap(),
        LinearCode::generic(&gf2, inner, None).unwrap(),
        2,
    )
    .unwrap()
}

fn ternary_uvw_code() -> MpcSpec {
    let gf3 = prime_field(3).unwrap();
    let g = |rows: &[Vec<Symbol>]| LinearCode::generic(&gf3, Matrix::from_rows(rows).unwrap(), None).unwrap();
    let a1 = g(&[
        vec![1, 0, 0, 0, 1, 2, 1],
        vec![0, 1, 0, 0, 2, 0, 1],
        vec![0, 0, 1, 0, 0, 2, 1],
        vec![0, 0, 0, 1, 1, 2, 0],
    ]);
    let a2 = g(&[vec![1, 0, 1, 2, 2, 2, 1], vec![0, 1, 2, 0, 2, 2, 2]]);
    let a3 = LinearCode::repetition(&gf3, 7).unwrap();
    MpcSpec::new(&gf3, vec![a1, a2, a3], uvw_matrix(&gf3).unwrap()).unwrap()
}

/// Binary inner code RM(1,3) with a repetition code as first level:
/// `s = (1, 3)`, `A_1` the [7,4,3] Hamming code, `A_2 = RS[7,3,5]` over GF(8).
fn binary_gcc_code() -> GccSpec {
    let gf2 = prime_field(2).unwrap();
    let gf8 = make_field(2, 3, None).unwrap();
    let hamming = Matrix::from_rows(&[
        vec![1, 0, 0, 0, 1, 1, 0],
        vec![0, 1, 0, 0, 1, 0, 1],
        vec![0, 0, 1, 0, 0, 1, 1],
        vec![0, 0, 0, 1, 1, 1, 1],
    ])
    .unwrap();
    let b = Matrix::from_rows(&[
        vec![1, 1, 1, 1, 1, 1, 1, 1],
        vec![0, 0, 0, 0, 1, 1, 1, 1],
        vec![0, 0, 1, 1, 0, 0, 1, 1],
        vec![0, 1, 0, 1, 0, 1, 0, 1],
    ])
    .unwrap();
    GccSpec::new(
        &gf2,
        vec![LinearCode::generic(&gf2, hamming, None).unwrap(), LinearCode::reed_solomon(&gf8, 7, 3).unwrap()],
        &[1, 3],
        b,
    )
    .unwrap()
}

fn mpc_outer_distance(spec: &MpcSpec) -> impl Fn(usize) -> usize + '_ {
    move |level| spec.gcc().outer(level).distance().unwrap()
}

// ---------- criteria ----------

fn criterion1(audit: &mut TrialAudit) -> Outcome {
    let spec = criterion1_code();
    let field = spec.field().clone();
    let (d_star, exact) = spec.designed_distance().unwrap();
    // designed distance from the formula, exact distance by enumeration
    let da = [3usize, 7];
    let formula = da.iter().enumerate().map(|(i, d)| d * (2 - i)).min().unwrap();
    let flat = spec.gcc().as_linear_code().unwrap();
    let enumerated = flat.distance().unwrap();
    let t = (d_star - 1) / 2;
    let (m, n) = spec.gcc().shape();
    let len = m * n;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut failures, mut patterns_per_word, mut decodes) = (0usize, 0usize, 0usize);
    for _ in 0..20 {
        let msgs = vec![random_symbols(&mut rng, 8, 5), random_symbols(&mut rng, 8, 1)];
        let w = spec.encode(&msgs).unwrap();
        let mut count = 0;
        let mut run = |positions: &[usize], values: &[Symbol]| {
            let mut r = w.clone();
            for (&p, &v) in positions.iter().zip(values) {
                r.set(p / n, p % n, field.add(r.get(p / n, p % n), v));
            }
            let out = spec.decode(&r, &DecodeOptions::default());
            if let Some(rep) = report_of(&out) {
                audit.check(rep, mpc_outer_distance(&spec), false);
            }
            if !matches!(&out, Ok(rep) if rep.messages == msgs) {
                failures += 1;
            }
            count += 1;
        };
        for p in 0..len {
            for v in 1..8 {
                run(&[p], &[v]);
            }
        }
        for p in 0..len {
            for p2 in p + 1..len {
                for v in 1..8 {
                    for v2 in 1..8 {
                        run(&[p, p2], &[v, v2]);
                    }
                }
            }
        }
        patterns_per_word = count;
        decodes += count;
    }
    let pass = d_star == 6 && formula == 6 && exact && enumerated == 6 && t == 2 && patterns_per_word == 4557 && failures == 0;
    Outcome {
        pass,
        detail: format!(
            "d* = {d_star} (formula {formula}, enumerated {enumerated}), {patterns_per_word} patterns x 20 words, {decodes} decodes, {failures} failures"
        ),
    }
}

fn criterion2(audit: &mut TrialAudit) -> Outcome {
    let cc = criterion2_code();
    let gf2 = prime_field(2).unwrap();
    let (m, n) = cc.shape();
    let (d_a, d_b) = (cc.outer().distance().unwrap(), cc.inner().distance().unwrap());
    let inner_brute = brute_min_distance(&gf2, cc.inner().generator());
    let len = m * n;
    let none = ErasurePattern::empty(m, n);
    let opts = DecodeOptions::default();
    let outer_d = |_| d_a;

    let mut exhaustive = 0usize;
    let mut failures = 0usize;
    let mut patterns = 0usize;
    for msg in 0..4 {
        let w = cc.encode(&[vec![msg]]).unwrap();
        patterns = 0;
        for mask in 0u32..(1 << len) {
            if mask.count_ones() > 4 {
                continue;
            }
            patterns += 1;
            let e = Matrix::from_flat(m, n, (0..len).map(|i| (mask >> i) & 1).collect()).unwrap();
            let out = cc.decode(&w.add(&gf2, &e).unwrap(), &none, &opts);
            if let Some(rep) = report_of(&out) {
                audit.check(rep, outer_d, false);
            }
            if !matches!(&out, Ok(rep) if rep.messages == vec![vec![msg]]) {
                failures += 1;
            }
            exhaustive += 1;
        }
    }

    // bursty patterns: heavy rows capped at 2 d_b, sum below d_a d_b
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut bursty = 0usize;
    let mut bursty_failures = 0usize;
    while bursty < 10_000 {
        let msg = rng.random_range(0..4);
        let mut e = Matrix::zeros(m, n);
        let heavy = rng.random_range(0..m);
        let count = rng.random_range(1..=n);
        for &p in &random_positions(&mut rng, n, count) {
            e.set(heavy, p, 1);
        }
        for j in 0..m {
            if j != heavy && rng.random_bool(0.5) {
                let count = rng.random_range(0..=n);
                for &p in &random_positions(&mut rng, n, count) {
                    e.set(j, p, 1);
                }
            }
        }
        if matrix::weight(e.data()) <= 4 || sum_of_row_costs(&e, &none, d_b) >= d_a * d_b {
            continue;
        }
        bursty += 1;
        let w = cc.encode(&[vec![msg]]).unwrap();
        let out = cc.decode(&w.add(&gf2, &e).unwrap(), &none, &opts);
        if let Some(rep) = report_of(&out) {
            audit.check(rep, outer_d, false);
        }
        if !matches!(&out, Ok(rep) if rep.messages == vec![vec![msg]]) {
            bursty_failures += 1;
        }
    }
    let pass = d_a * d_b == 9 && inner_brute == 3 && patterns == 1941 && failures == 0 && bursty_failures == 0;
    Outcome {
        pass,
        detail: format!(
            "d_a d_b = {}, {patterns} patterns x 4 codewords ({exhaustive} decodes, {failures} failures), {bursty} bursty patterns of weight > 4 ({bursty_failures} failures)",
            d_a * d_b
        ),
    }
}

fn random_binary_mpc(rng: &mut ChaCha8Rng) -> Option<(MpcSpec, LinearCode, usize)> {
    let gf2 = prime_field(2).unwrap();
    let k = rng.random_range(2..=3);
    let n = rng.random_range(k..=4);
    let m = rng.random_range(4..=6);
    let b = random_full_rank(rng, &gf2, k, n);
    let mut outers = Vec::new();
    let mut total = 0;
    for _ in 0..k {
        let ki = rng.random_range(1..m);
        total += ki;
        outers.push(LinearCode::generic(&gf2, random_full_rank(rng, &gf2, ki, m), None).unwrap());
    }
    if total > 10 {
        return None;
    }
    let spec = MpcSpec::new(&gf2, outers, b).ok()?;
    let flat = spec.gcc().as_linear_code().ok()?;
    let d = brute_min_distance(&gf2, flat.generator());
    // keep specs whose designed distance is the true distance
    (spec.gcc().designed_distance().ok()? == d && d >= 3).then_some((spec, flat, d))
}

fn criterion3() -> Outcome {
    let gf2 = prime_field(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut specs = Vec::new();
    while specs.len() < 5 {
        if let Some(s) = random_binary_mpc(&mut rng) {
            specs.push(s);
        }
    }
    let mut mismatches = 0usize;
    let mut sampled = 0usize;
    let mut shapes = Vec::new();
    for (spec, flat, d) in &specs {
        let (m, n) = spec.gcc().shape();
        shapes.push(format!("{}x{} d={d}", m, n));
        let codec = Codec::Mpc(spec.clone());
        for _ in 0..2_000 {
            let msgs: Vec<Vec<Symbol>> =
                spec.gcc().outers().iter().map(|a| random_symbols(&mut rng, 2, a.k())).collect();
            let w = spec.encode(&msgs).unwrap();
            let t = rng.random_range(0..=(d - 1) / 2);
            let mut e = Matrix::zeros(m, n);
            for p in random_positions(&mut rng, m * n, t) {
                e.set(p / n, p % n, 1);
            }
            let r = w.add(&gf2, &e).unwrap();
            sampled += 1;
            let (near, _) = oracle_nearest(flat, r.data()).unwrap();
            let none = ErasurePattern::empty(m, n);
            let improved = codec.decode(&r, &none, &DecodeOptions::default(), None);
            let basic = spec.gcc().decode_basic(&r, &none, &DecodeOptions::default());
            let matches = |out: &Result<DecodeReport, CodecError>| {
                near.len() == 1 && matches!(out, Ok(rep) if rep.codeword.as_ref().map(|c| c.data()) == Some(&near[0][..]))
            };
            if !matches(&improved) || !matches(&basic) {
                mismatches += 1;
            }
        }
    }
    Outcome {
        pass: mismatches == 0 && sampled == 10_000,
        detail: format!("specs [{}], {sampled} patterns, {mismatches} mismatches", shapes.join(", ")),
    }
}

fn criterion4(audit: &mut TrialAudit) -> Outcome {
    let cc = criterion2_code();
    let gf2 = prime_field(2).unwrap();
    let (m, n) = cc.shape();
    let (d_a, d_b) = (cc.outer().distance().unwrap(), cc.inner().distance().unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut failures = 0usize;
    for _ in 0..10_000 {
        let msg = rng.random_range(0..4);
        let w = cc.encode(&[vec![msg]]).unwrap();
        let s = rng.random_range(0..d_a * d_b);
        let t = rng.random_range(0..=(d_a * d_b - 1 - s) / 2);
        let positions = random_positions(&mut rng, m * n, s + t);
        let mut r = w.clone();
        let mut erased = vec![Vec::new(); m];
        for (idx, &p) in positions.iter().enumerate() {
            let (j, i) = (p / n, p % n);
            if idx < s {
                erased[j].push(i);
                r.set(j, i, 0);
            } else {
                r.set(j, i, gf2.add(r.get(j, i), 1));
            }
        }
        let x = ErasurePattern::new(&erased, n).unwrap();
        let out = cc.decode(&r, &x, &DecodeOptions::default());
        if let Some(rep) = report_of(&out) {
            audit.check(rep, |_| d_a, true);
        }
        if !matches!(&out, Ok(rep) if rep.messages == vec![vec![msg]]) {
            failures += 1;
        }
    }

    // with no erasures the weights reduce to the errors-only weights
    let mut weight_mismatches = 0usize;
    let none = ErasurePattern::empty(m, n);
    for _ in 0..2_000 {
        let r = Matrix::from_flat(m, n, random_symbols(&mut rng, 2, m * n)).unwrap();
        let rows = row_decode(cc.inner(), &r, &none, None).unwrap();
        for j in 0..m {
            let w = match oracle_sigma(cc.inner(), r.row(j), &ErasureSet::empty(n)).unwrap().codeword() {
                Some(c) if 2 * matrix::distance(c, r.row(j)) < d_b => 2 * matrix::distance(c, r.row(j)),
                _ => d_b,
            };
            if rows.weights[j] != (d_b - w) as u64 {
                weight_mismatches += 1;
            }
        }
    }
    Outcome {
        pass: failures == 0 && weight_mismatches == 0,
        detail: format!(
            "10000 patterns with 2t + s < {}: {failures} failures; errors-only weights on 6000 rows: {weight_mismatches} mismatches",
            d_a * d_b
        ),
    }
}

/// Multi-column code for the carry-over bound: RS[7,3,5] outer and RS[7,4,4]
/// inner over GF(8), four columns.
fn carry_over_runs(audit: &mut TrialAudit) {
    let gf8 = make_field(2, 3, None).unwrap();
    let cc = ConcatCode::new(
        LinearCode::reed_solomon(&gf8, 7, 3).unwrap(),
        LinearCode::reed_solomon(&gf8, 7, 4).unwrap(),
        1,
    )
    .unwrap();
    let (m, n) = cc.shape();
    let (d_a, d_b) = (5usize, 4usize);
    let k = cc.columns();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for erasure_mode in [false, true] {
        let opts = DecodeOptions { mode: GmdMode::UpToGmd, carry_over: true, radius: None };
        let m_bound = if erasure_mode { d_b.min(d_a.div_ceil(2)) } else { d_a.min(d_b).div_ceil(2) };
        let mut done = 0;
        while done < 5_000 {
            let msgs: Vec<Vec<Symbol>> = (0..k).map(|_| random_symbols(&mut rng, 8, 3)).collect();
            let w = cc.encode(&msgs).unwrap();
            let mut r = w.clone();
            let mut erased = vec![Vec::new(); m];
            for j in 0..m {
                for i in 0..n {
                    let u: f64 = rng.random();
                    if erasure_mode && u < 0.15 {
                        erased[j].push(i);
                        r.set(j, i, 0);
                    } else if u < 0.3 {
                        r.set(j, i, gf8.add(r.get(j, i), random_nonzero(&mut rng, 8)));
                    }
                }
            }
            let x = ErasurePattern::new(&erased, n).unwrap();
            let e = r.sub(&gf8, &w).unwrap();
            let mut e_clean = e.clone();
            for j in 0..m {
                for &i in x.row(j).indices() {
                    e_clean.set(j, i, 0);
                }
            }
            if sum_of_row_costs(&e_clean, &x, d_b) >= d_a * d_b {
                continue;
            }
            done += 1;
            let out = cc.decode(&r, &x, &opts);
            let rep = report_of(&out).expect("decoder error");
            audit.check(rep, |_| d_a, erasure_mode);
            audit.carry_runs += 1;
            let ok = matches!(&out, Ok(rep) if rep.messages == msgs);
            if !ok || rep.outer_invocations() > k + m_bound - 1 {
                audit.carry_violations += 1;
            }
        }
    }
}

fn criterion5(audit: &mut TrialAudit) -> Outcome {
    carry_over_runs(audit);
    Outcome {
        pass: audit.violations == 0 && audit.carry_violations == 0 && audit.columns > 0,
        detail: format!(
            "{} column decodes audited ({} over the bound); {} carry-over decodes ({} over k + m - 1 or wrong)",
            audit.columns, audit.violations, audit.carry_runs, audit.carry_violations
        ),
    }
}

fn criterion6() -> Outcome {
    let spec = ternary_uvw_code();
    let gf3 = spec.field().clone();
    let da: Vec<usize> = spec.gcc().outer_distances().unwrap();
    let (m, n) = spec.gcc().shape();
    // bounds from the formulas, levels 1-based
    let gcc_bound = m + da.iter().map(|d| d - 1).sum::<usize>();
    let nsc_bound = m + (da[1] - 1); // d_{b,3} = 1 odd, t = 1: d_{a,2}
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut violations, mut runs, mut max_seen, mut max_rounds) = (0usize, 0usize, 0usize, 0usize);
    for p in [0.03, 0.08, 0.15, 0.3] {
        for _ in 0..2_500 {
            let msgs: Vec<Vec<Symbol>> =
                spec.gcc().outers().iter().map(|a| random_symbols(&mut rng, 3, a.k())).collect();
            let mut r = spec.encode(&msgs).unwrap();
            for j in 0..m {
                for i in 0..n {
                    if rng.random_bool(p) {
                        r.set(j, i, gf3.add(r.get(j, i), random_nonzero(&mut rng, 3)));
                    }
                }
            }
            let out = spec.decode(&r, &DecodeOptions::default());
            let rep = report_of(&out).expect("decoder error");
            runs += 1;
            max_seen = max_seen.max(rep.inner_invocations());
            max_rounds = max_rounds.max(rep.rounds_with_row_decoding());
            if rep.inner_invocations() > nsc_bound || rep.inner_invocations() > gcc_bound || rep.rounds_with_row_decoding() > 2 {
                violations += 1;
            }
        }
    }
    let lib_bounds_agree = spec.inner_invocation_bound().unwrap() == nsc_bound
        && spec.gcc().inner_invocation_bound().unwrap() == gcc_bound
        && nsc_bound == 11
        && gcc_bound == 19;

    // a GCC that is not a matrix-product code
    let gcc = binary_gcc_code();
    let gf2 = prime_field(2).unwrap();
    let (gm, gn) = gcc.shape();
    let gda = gcc.outer_distances().unwrap();
    let g_bound = gm + gda.iter().map(|d| d - 1).sum::<usize>();
    let mut g_runs = 0usize;
    let mut g_max = 0usize;
    for p in [0.02, 0.06, 0.12, 0.25] {
        for _ in 0..2_500 {
            let msgs = vec![random_symbols(&mut rng, 2, 4), random_symbols(&mut rng, 8, 3)];
            let mut r = gcc.encode(&msgs).unwrap();
            for j in 0..gm {
                for i in 0..gn {
                    if rng.random_bool(p) {
                        r.set(j, i, gf2.add(r.get(j, i), 1));
                    }
                }
            }
            let out = gcc.decode_improved(&r, &DecodeOptions::default());
            let rep = report_of(&out).expect("decoder error");
            g_runs += 1;
            g_max = g_max.max(rep.inner_invocations());
            if rep.inner_invocations() > g_bound {
                violations += 1;
            }
        }
    }
    Outcome {
        pass: violations == 0 && lib_bounds_agree && g_bound == 13,
        detail: format!(
            "ternary MPC: {runs} decodes, max {max_seen} inner calls (NSC bound {nsc_bound}, GCC bound {gcc_bound}), max {max_rounds} rounds with row decoding; binary GCC: {g_runs} decodes, max {g_max} inner calls (bound {g_bound}); {violations} violations"
        ),
    }
}

fn criterion7() -> Outcome {
    let gf2 = prime_field(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut violations = 0usize;
    let mut pairs = 0usize;
    let mut shapes = Vec::new();
    for _ in 0..3 {
        let k = rng.random_range(2..=4);
        let n = rng.random_range(k + 3..=10);
        let g = random_full_rank(&mut rng, &gf2, k, n);
        let d = brute_min_distance(&gf2, &g);
        let code = LinearCode::generic(&gf2, g, None).unwrap();
        shapes.push(format!("[{n},{k},{d}]"));
        let masks = 1usize << n;
        let sets: Vec<ErasureSet> =
            (0..masks).map(|mask| ErasureSet::from_mask((0..n).map(|i| mask >> i & 1 == 1).collect())).collect();
        for word in 0..masks {
            let r: Vec<Symbol> = (0..n).map(|i| (word >> i & 1) as Symbol).collect();
            let sigma: Vec<_> = sets.iter().map(|e| oracle_sigma(&code, &r, e).unwrap()).collect();
            for f1 in 0..masks {
                let size = (f1 as u32).count_ones() as usize;
                if size > d || !(d - size).is_multiple_of(2) || sigma[f1].is_failure() {
                    continue;
                }
                for i in 0..n {
                    if f1 >> i & 1 == 1 {
                        continue;
                    }
                    pairs += 1;
                    if sigma[f1].codeword() != sigma[f1 | 1 << i].codeword() {
                        violations += 1;
                    }
                }
            }
        }
    }
    Outcome {
        pass: violations == 0 && pairs > 0,
        detail: format!("codes {}, {pairs} nested pairs with a decodable F_1, {violations} violations", shapes.join(", ")),
    }
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let fields = [prime_field(2).unwrap(), prime_field(3).unwrap(), prime_field(5).unwrap()];
    let (mut found, mut triangular, mut mds_violations, mut distance_violations) = (0usize, 0usize, 0usize, 0usize);
    let mut lower_bound_checks = 0usize;
    let mut per_field = [0usize; 3];
    let mut attempt = 0usize;
    while found < 50 {
        let fi = attempt % 3;
        attempt += 1;
        let field = &fields[fi];
        let k = rng.random_range(1..=4);
        let n = rng.random_range(k..=6);
        let Some(b) = random_nsc_matrix(field, k, n, &mut rng, 2_000).unwrap() else {
            continue;
        };
        if !is_nsc(field, &b).unwrap() {
            mds_violations += 1;
            continue;
        }
        found += 1;
        per_field[fi] += 1;
        for t in 1..=k {
            if brute_min_distance(field, &b.top_rows(t)) != n - t + 1 {
                mds_violations += 1;
            }
        }
        // pair with small outer codes of length 3
        let q = field.order();
        let m = 3;
        let mut outers = Vec::new();
        let mut dims = 0;
        for _ in 0..k {
            let ki = rng.random_range(1..=m);
            dims += ki;
            outers.push(random_full_rank(&mut rng, field, ki, m));
        }
        if q.pow(dims as u32) > 1 << 17 {
            continue;
        }
        let da: Vec<usize> = outers.iter().map(|g| brute_min_distance(field, g)).collect();
        let d_star = da.iter().enumerate().map(|(i, d)| d * (n - i)).min().unwrap();
        let codes = outers.into_iter().map(|g| LinearCode::generic(field, g, None).unwrap()).collect();
        let spec = MpcSpec::new(field, codes, b.clone()).unwrap();
        let flat = spec.gcc().as_linear_code().unwrap();
        let d = brute_min_distance(field, flat.generator());
        if spec.designed_distance().unwrap().0 != d_star {
            distance_violations += 1;
        }
        if is_triangular(&b).unwrap() {
            triangular += 1;
            if d != d_star {
                distance_violations += 1;
            }
        } else {
            lower_bound_checks += 1;
            if d < d_star {
                distance_violations += 1;
            }
        }
    }
    Outcome {
        pass: mds_violations == 0 && distance_violations == 0 && triangular > 0,
        detail: format!(
            "{found} NSC matrices (GF(2): {}, GF(3): {}, GF(5): {}), {mds_violations} non-MDS prefixes; {triangular} triangular with exact d = d*, {lower_bound_checks} others with d >= d*; {distance_violations} violations",
            per_field[0], per_field[1], per_field[2]
        ),
    }
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut lines = Vec::new();
    let mut ok = true;

    let spec = criterion1_code();
    let gf8 = spec.field().clone();
    let (m, n) = spec.gcc().shape();
    let (d_star, _) = spec.designed_distance().unwrap();
    for naive in [false, true] {
        let (mut both, mut mismatches, mut counter_violations) = (0usize, 0usize, 0usize);
        let mut instances = 0;
        while instances < 1_000 {
            let msgs = vec![random_symbols(&mut rng, 8, 5), random_symbols(&mut rng, 8, 1)];
            let w = spec.encode(&msgs).unwrap();
            let mut r = w.clone();
            for j in 0..m {
                for i in 0..n {
                    if rng.random_bool(0.12) {
                        r.set(j, i, gf8.add(r.get(j, i), random_nonzero(&mut rng, 8)));
                    }
                }
            }
            // the naive procedure is only claimed below d*/2
            if naive && 2 * matrix::distance(w.data(), r.data()) >= d_star {
                continue;
            }
            instances += 1;
            let generic = spec.decode(&r, &DecodeOptions::default());
            let worked = if naive { spec.decode_uuv_naive(&r) } else { spec.decode_uuv(&r) };
            if let Ok(wd) = &worked {
                let limit = if naive { [2, 1] } else { [1, 1] };
                if wd.outer_calls[0] > limit[0] || wd.outer_calls[1] > limit[1] {
                    counter_violations += 1;
                }
            }
            if let (Ok(g), Ok(wd)) = (&generic, &worked) {
                both += 1;
                if g.messages != wd.messages {
                    mismatches += 1;
                }
            }
        }
        ok &= mismatches == 0 && counter_violations == 0 && both > 0;
        lines.push(format!(
            "{}: {both}/1000 both decoded, {mismatches} mismatches, {counter_violations} counter violations",
            if naive { "uuv naive (below d*/2)" } else { "uuv" }
        ));
    }

    let spec = ternary_uvw_code();
    let gf3 = spec.field().clone();
    let (m, n) = spec.gcc().shape();
    let d_a2 = spec.gcc().outer(2).distance().unwrap();
    let (mut both, mut mismatches, mut counter_violations) = (0usize, 0usize, 0usize);
    for _ in 0..1_000 {
        let msgs: Vec<Vec<Symbol>> = spec.gcc().outers().iter().map(|a| random_symbols(&mut rng, 3, a.k())).collect();
        let mut r = spec.encode(&msgs).unwrap();
        for j in 0..m {
            for i in 0..n {
                if rng.random_bool(0.1) {
                    r.set(j, i, gf3.add(r.get(j, i), random_nonzero(&mut rng, 3)));
                }
            }
        }
        let generic = spec.decode(&r, &DecodeOptions::default());
        let worked = spec.decode_uvw(&r);
        if let Ok(wd) = &worked {
            let c = &wd.outer_calls;
            if c[2] > 1 || c[1] > 1 || c[0] > 2 || wd.inner_calls > d_a2 - 1 {
                counter_violations += 1;
            }
        }
        if let (Ok(g), Ok(wd)) = (&generic, &worked) {
            both += 1;
            if g.messages != wd.messages {
                mismatches += 1;
            }
        }
    }
    ok &= mismatches == 0 && counter_violations == 0 && both > 0;
    lines.push(format!(
        "uvw: {both}/1000 both decoded, {mismatches} mismatches, {counter_violations} counter violations"
    ));
    Outcome { pass: ok, detail: lines.join("; ") }
}

fn criterion10() -> Outcome {
    let code = CodeConfig::Mpc(criterion1_code().config());
    let run = |mode| {
        let config = ExperimentConfig {
            code: code.clone(),
            channel: ChannelModel::new(0.08, 0.0, 1010).unwrap(),
            trials: 10_000,
            options: DecodeOptions { mode, carry_over: false, radius: None },
            algorithm: None,
            output: None,
        };
        sim::run_experiment(&config).unwrap()
    };
    let upto = run(GmdMode::UpToGmd);
    let beyond = run(GmdMode::BeyondGmd);
    let subset_violations = upto
        .records
        .iter()
        .zip(&beyond.records)
        .filter(|(u, b)| u.outcome == TrialOutcome::Success && b.outcome != TrialOutcome::Success)
        .count();
    let pass = subset_violations == 0
        && beyond.stats.word_errors <= upto.stats.word_errors
        && !upto.stats.violation
        && upto.records.len() == 10_000;
    Outcome {
        pass,
        detail: format!(
            "word errors: up to GMD {}, beyond GMD {}; {subset_violations} subset violations; {} trials inside the guarantee region, all decoded: {}",
            upto.stats.word_errors,
            beyond.stats.word_errors,
            upto.stats.inside_region,
            upto.stats.inside_success_rate == 1.0
        ),
    }
}

fn main() -> ExitCode {
    let mut audit = TrialAudit::default();
    let mut all = true;
    let mut report = |idx: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {idx:>2} [{verdict}] {name}: {} ({:.1}s)", out.detail, start.elapsed().as_secs_f64());
        all &= out.pass;
    };
    report(1, "half-distance exhaustive sweep", &mut || criterion1(&mut audit));
    report(2, "concatenated guarantee region", &mut || criterion2(&mut audit));
    report(3, "oracle equivalence on binary MPC codes", &mut criterion3);
    report(4, "error-and-erasure decoding", &mut || criterion4(&mut audit));
    report(5, "GMD trial bounds", &mut || criterion5(&mut audit));
    report(6, "inner invocation bounds", &mut criterion6);
    report(7, "even-erasure trial equivalence", &mut criterion7);
    report(8, "NSC prefixes are MDS, triangular d* is exact", &mut criterion8);
    report(9, "worked decoders match the generic decoder", &mut criterion9);
    report(10, "beyond-GMD dominance", &mut criterion10);
    if all {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("some acceptance criteria failed");
        ExitCode::FAILURE
    }
}
