//! Turn a type-1 construction into a type-2 sequence and find its parameter.

use fractalseq::{
    construct_type1, signature_values, theta_interval_from_prefix, translate_type2, Branch,
    BranchPolicy, ExactNumber,
};

fn main() {
    let policy = BranchPolicy::Explicit(vec![Branch::OneFirst, Branch::FreshFirst]);
    let source = construct_type1(4, 5, &policy).unwrap().remove(0).sequence();
    let ranks = translate_type2(4, source.len(), &policy).unwrap();

    let iv_source = theta_interval_from_prefix(&source);
    let iv_ranks = theta_interval_from_prefix(&ranks);
    println!("type 1: {source}\n  interval {iv_source}");
    println!("type 2: {ranks}\n  interval {iv_ranks}");

    let witness = ExactNumber::from_rational(iv_ranks.witness().unwrap()).unwrap();
    let regenerated = signature_values(&witness, ranks.len()).unwrap();
    println!("signature of {witness} matches: {}", regenerated == ranks);
}
