//! Show how the upper and lower trims reproduce a signature prefix.

use fractalseq::{
    check_doubly_fractal_prefix, lower_trim, signature_values, upper_trim, ExactNumber,
};

fn main() {
    let theta = ExactNumber::sqrt(2).unwrap();
    let s = signature_values(&theta, 40).unwrap();
    let up = upper_trim(&s);
    let low = lower_trim(&s);

    println!("sequence    {s}");
    println!("upper trim  {up}");
    println!("lower trim  {low}");
    println!("upper trim is a prefix: {}", up.is_prefix_of(&s));
    println!("lower trim is a prefix: {}", low.is_prefix_of(&s));

    let broken = "1 2 1 1 2".parse().unwrap();
    println!("check sequence: {:?}", check_doubly_fractal_prefix(&s));
    println!(
        "check 1 2 1 1 2: {:?}",
        check_doubly_fractal_prefix(&broken)
    );
}
