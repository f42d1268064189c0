//! Grow a sequence block by block and list every branch choice.

use fractalseq::{construct_type1, BranchPolicy};

fn main() {
    let n = 4;
    let states = construct_type1(n, 5, &BranchPolicy::All).unwrap();
    println!("{} branch paths for n = {n}, 5 blocks", states.len());
    for state in &states {
        println!("\nbranches {:?}", state.branch_log());
        for k in 1..=state.blocks() {
            println!("  block {k}: {:?}", state.block(k).unwrap());
        }
        for plan in state.plans() {
            println!(
                "  merge: t = {}  t' = {}  -> {}",
                plan.t, plan.t_prime, plan.merged
            );
        }
    }
}
