//! Every doubly fractal prefix built by the construction is a signature prefix:
//! build, invert, regenerate, compare.

use fractalseq::{
    construct_type1, signature_values, theta_interval_from_prefix, BranchPolicy, ExactNumber,
};

fn main() {
    for n in 2..=6 {
        let states = construct_type1(n, 5, &BranchPolicy::All).unwrap();
        let mut ok = 0;
        for state in &states {
            let s = state.sequence();
            let iv = theta_interval_from_prefix(&s);
            let Some(mid) = iv.witness() else {
                println!("n = {n} {:?}: empty interval", state.branch_log());
                continue;
            };
            let theta = ExactNumber::from_rational(mid).unwrap();
            if signature_values(&theta, s.len()).unwrap() == s {
                ok += 1;
            }
        }
        println!(
            "n = {n}: {ok}/{} paths regenerate from their interval",
            states.len()
        );
    }
}
