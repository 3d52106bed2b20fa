//! The seventeen standard payoff matrices with their `(a, b)` coordinates
//! and relation flags, plus a matrix built from `(a, b)` directly.

use ipd_arena::payoff::{classify, from_ab, ABParams, PriceParams, Ratio};
use ipd_arena::standard_suite;

fn main() -> ipd_arena::Result<()> {
    println!(
        "{:>7}  {:>5} {:>5}  {:>7} {:>7} {:>7}  T=R+P  2R>T",
        "T-R-P", "a", "b", "a:1", "a:b", "b:1"
    );
    for m in standard_suite() {
        let (a, b) = m.ab();
        let f = classify(&m);
        println!(
            "{:>7}  {:>5} {:>5}  {:>7} {:>7} {:>7}  {:5}  {}",
            m.key(),
            a.to_string(),
            b.to_string(),
            format!("{:?}", f.a_vs_1),
            format!("{:?}", f.a_vs_b),
            format!("{:?}", f.b_vs_1),
            f.t_eq_r_plus_p,
            f.two_r_gt_t
        );
    }

    let m = from_ab(ABParams {
        a: Ratio::new(1, 2),
        b: Ratio::new(3, 2),
        p: 2,
    })?;
    println!("\na = 1/2, b = 3/2, P = 2 gives {m}");
    if let Some(price) = PriceParams::from_matrix(&standard_suite()[0]) {
        println!(
            "3-2-1 as alpha/beta/gamma: {} {} {}",
            price.alpha, price.beta, price.gamma
        );
    }
    Ok(())
}
