//! Runs randomized equivalence trials for every named conjugate pair and
//! prints one line per trial.
//!
//!     cargo run --release --example equivalence -- [trials] [seed] [max_dim]

use std::time::Instant;

use finmorita::conjugation::ConjugateCategory;
use finmorita::morita::Context;
use finmorita::pairs::{gen_gamma, gen_idem, gen_poset, gen_sigma};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let trials = args.first().copied().unwrap_or(10) as usize;
    let seed = args.get(1).copied().unwrap_or(7);
    let max_dim = args.get(2).copied().unwrap_or(4) as usize;

    let big = std::env::var("WITH_GAMMA3").is_ok();
    let mut pairs = vec![
        gen_idem(),
        gen_poset("a<b, a<c").unwrap(),
        gen_sigma(2).unwrap(),
        gen_gamma(2).unwrap(),
    ];
    if big {
        pairs.push(gen_gamma(3).unwrap());
    }
    for f in pairs {
        let name = f.u.name().to_string();
        let start = Instant::now();
        let ctx = Context::new(ConjugateCategory::build(&f).unwrap());
        let report = ctx.check_equivalence(trials, seed, max_dim);
        print!("{report}");
        let verdict = if report.holds() { "PASS" } else { "FAIL" };
        println!("{verdict} {name} trials={trials} elapsed={:.1?}", start.elapsed());
    }
}
