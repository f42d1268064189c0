//! Print the first terms of a signature sequence with their ranks.
//!
//! cargo run --example generate_signature -- "sqrt(13)" 30

use fractalseq::{generate_signature, ExactNumber};

fn main() {
    let mut args = std::env::args().skip(1);
    let theta: ExactNumber = args
        .next()
        .unwrap_or_else(|| "sqrt(13)".into())
        .parse()
        .expect("theta");
    let count: usize = args.next().map_or(30, |c| c.parse().expect("count"));

    println!("theta = {theta} (~{:.6})", theta.to_f64());
    for (h, t) in generate_signature(&theta, count)
        .expect("count >= 1")
        .iter()
        .enumerate()
    {
        println!("{:>4}  value {:>3}  rank {:>3}", h + 1, t.value, t.rank);
    }
}
