//! Recover the parameter interval of a prefix, and watch it shrink.

use fractalseq::{signature_values, theta_interval_from_prefix, ExactNumber, Sequence};

fn main() {
    let theta = ExactNumber::surd(1, 1, 5, 2).unwrap();
    let s = signature_values(&theta, 2000).unwrap();
    for len in [5, 10, 50, 200, 2000] {
        let iv = theta_interval_from_prefix(&s.prefix(len));
        println!("{len:>5} terms: {iv}");
    }

    for text in ["1 2 3 4 1 5", "1 1 1 1 2", "1 3"] {
        let p: Sequence = text.parse().unwrap();
        println!("{text:>12} -> {}", theta_interval_from_prefix(&p));
    }
}
