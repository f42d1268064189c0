#![allow(dead_code)]

use fractalseq::ExactNumber;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5167_0a7e;

/// Rationals `p/q` with `p, q <= 50`.
pub fn random_rationals(rng: &mut impl Rng, count: usize) -> Vec<ExactNumber> {
    (0..count)
        .map(|_| ExactNumber::rational(rng.gen_range(1..=50i64), rng.gen_range(1..=50i64)).unwrap())
        .collect()
}

/// Positive surds `(a + b*sqrt(d))/c` with small coefficients.
pub fn random_surds(rng: &mut impl Rng, count: usize) -> Vec<ExactNumber> {
    const RADICANDS: [i64; 5] = [2, 3, 5, 7, 13];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.gen_range(-4..=4i64);
        let b = [-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
        let d = RADICANDS[rng.gen_range(0..RADICANDS.len())];
        let c = rng.gen_range(1..=5i64);
        if let Ok(theta) = ExactNumber::surd(a, b, d, c) {
            if theta.is_rational() {
                continue;
            }
            out.push(theta);
        }
    }
    out
}

/// The fixed set of 50 parameters: 25 rational, 25 quadratic irrational.
pub fn fifty_thetas() -> Vec<ExactNumber> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut v = random_rationals(&mut rng, 25);
    v.extend(random_surds(&mut rng, 25));
    v
}

pub fn run_cli(args: &[&str], input: &str) -> (i32, String, String) {
    let mut stdin = std::io::Cursor::new(input.as_bytes().to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("fractalseq").chain(args.iter().copied());
    let code = fractalseq::cli::run(argv, &mut stdin, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

pub fn parse_lines(out: &str) -> Vec<u64> {
    out.split_whitespace().map(|t| t.parse().unwrap()).collect()
}
