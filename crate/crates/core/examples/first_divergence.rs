//! Find where two signature sequences first differ.

use fractalseq::{first_divergence, ExactNumber};

fn main() {
    let pairs = [
        ("sqrt(2)", "7/5"),
        ("sqrt(2)", "41/29"),
        ("1/3", "1/2"),
        ("sqrt(13)", "18/5"),
    ];
    for (a, b) in pairs {
        let ta: ExactNumber = a.parse().unwrap();
        let tb: ExactNumber = b.parse().unwrap();
        match first_divergence(&ta, &tb, 10_000).unwrap() {
            Some(i) => println!("{a} vs {b}: first differ at index {i}"),
            None => println!("{a} vs {b}: equal for 10000 terms"),
        }
    }
}
