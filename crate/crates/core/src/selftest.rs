//! A quick oracle-backed check of the decoders, run by `gcc-codec selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::{ErasureSet, LinearCode};
use crate::concat::{ConcatCode, DecodeOptions, ErasurePattern};
use crate::error::Result;
use crate::galois::{make_field, prime_field, Symbol};
use crate::matrix::{self, Matrix};
use crate::mpc::{is_nsc, is_triangular, uuv_matrix, uvw_matrix, MpcSpec};
use crate::oracle::{oracle_nearest, oracle_sigma};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs every check with the given seed.
pub fn run(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        rs_matches_oracle(&mut rng)?,
        concat_region(&mut rng)?,
        mpc_matches_nearest(&mut rng)?,
        nsc_examples()?,
    ])
}

fn random_vec(rng: &mut ChaCha8Rng, q: u64, len: usize) -> Vec<Symbol> {
    (0..len).map(|_| rng.random_range(0..q) as Symbol).collect()
}

fn rs_matches_oracle(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let gf8 = make_field(2, 3, None)?;
    let rs = LinearCode::reed_solomon(&gf8, 7, 3)?;
    let mut failures = 0;
    let cases = 500;
    for _ in 0..cases {
        let r = random_vec(rng, 8, 7);
        let e = ErasureSet::from_mask((0..7).map(|_| rng.random_bool(0.2)).collect());
        if rs.decode(&r, &e)? != oracle_sigma(&rs, &r, &e)? {
            failures += 1;
        }
    }
    Ok(CheckResult { name: "reed-solomon decoder equals the bounded-distance oracle", cases, failures })
}

fn concat_region(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let gf2 = prime_field(2)?;
    let gf4 = make_field(2, 2, None)?;
    let inner_g = Matrix::from_rows(&[vec![1, 0, 1, 1, 0], vec![0, 1, 0, 1, 1]])?;
    let cc = ConcatCode::new(LinearCode::reed_solomon(&gf4, 3, 1)?, LinearCode::generic(&gf2, inner_g, None)?, 2)?;
    let (m, n) = cc.shape();
    let mut failures = 0;
    let mut cases = 0;
    while cases < 300 {
        let msg = random_vec(rng, 4, 1);
        let w = cc.encode(std::slice::from_ref(&msg))?;
        let e = Matrix::from_flat(m, n, (0..m * n).map(|_| u32::from(rng.random_bool(0.2))).collect())?;
        let x = ErasurePattern::empty(m, n);
        if !cc.correctable(&e, &x)? {
            continue;
        }
        cases += 1;
        let r = w.add(&gf2, &e)?;
        match cc.decode(&r, &x, &DecodeOptions::default()) {
            Ok(rep) if rep.messages == vec![msg] => {}
            _ => failures += 1,
        }
    }
    Ok(CheckResult { name: "concatenated decoder corrects its guarantee region", cases, failures })
}

fn mpc_matches_nearest(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let gf2 = prime_field(2)?;
    let a1 = LinearCode::generic(&gf2, Matrix::from_rows(&[vec![1, 1, 0, 0], vec![0, 0, 1, 1]])?, None)?;
    let a2 = LinearCode::repetition(&gf2, 4)?;
    let spec = MpcSpec::new(&gf2, vec![a1, a2], uuv_matrix())?;
    let flat = spec.gcc().as_linear_code()?;
    let (d_star, _) = spec.designed_distance()?;
    let (m, n) = spec.gcc().shape();
    let mut failures = 0;
    let cases = 300;
    for _ in 0..cases {
        let msgs = vec![random_vec(rng, 2, 2), random_vec(rng, 2, 1)];
        let w = spec.encode(&msgs)?;
        let e = Matrix::from_flat(m, n, (0..m * n).map(|_| u32::from(rng.random_bool(0.1))).collect())?;
        let r = w.add(&gf2, &e)?;
        let inside = 2 * matrix::weight(e.data()) < d_star;
        let out = spec.decode(&r, &DecodeOptions::default());
        if inside {
            let (near, _) = oracle_nearest(&flat, r.data())?;
            let ok = near.len() == 1
                && matches!(&out, Ok(rep) if rep.codeword.as_ref().map(|c| c.data()) == Some(&near[0][..]));
            if !ok {
                failures += 1;
            }
        } else if let Ok(rep) = &out {
            // outside the region a result must still be a codeword
            let c = rep.codeword.as_ref().expect("decoded word");
            if !flat.contains(c.data()) {
                failures += 1;
            }
        }
    }
    Ok(CheckResult { name: "matrix-product decoder finds the nearest codeword below d*/2", cases, failures })
}

fn nsc_examples() -> Result<CheckResult> {
    let gf2 = prime_field(2)?;
    let gf3 = prime_field(3)?;
    let uvw = uvw_matrix(&gf3)?;
    let checks = [
        is_nsc(&gf2, &uuv_matrix())?,
        is_nsc(&gf3, &uvw)?,
        !is_nsc(&gf2, &Matrix::identity(2))?,
        is_triangular(&uvw)?,
        !is_triangular(&Matrix::from_rows(&[vec![1, 1], vec![1, 1]])?)?,
    ];
    Ok(CheckResult {
        name: "NSC and triangularity examples",
        cases: checks.len(),
        failures: checks.iter().filter(|&&ok| !ok).count(),
    })
}
