//! The regular bimodule `U(a, b)` of a conjugate pair and its two
//! decompositions, checked element by element.
//!
//!     cargo run --example bimodule -- [n]

use finmorita::conjugation::{check_decompositions, check_laws, ConjugateCategory};
use finmorita::pairs::gen_gamma;

fn main() {
    let n = std::env::args().nth(1).map_or(2, |s| s.parse().expect("numeric n"));
    let cc = ConjugateCategory::build(&gen_gamma(n).unwrap()).unwrap();
    let m = finmorita::conjugation::RegularBimodule::new(&cc);
    let b = cc.b();

    println!("cardinalities of U(a, b), a down, b across:");
    for x in b.objects() {
        let row: Vec<String> = b.objects().map(|y| format!("{:>3}", m.cardinality(x, y))).collect();
        println!("  {x}: {}", row.join(""));
    }

    // Every regular morphism splits through the free and the generated
    // wedge; print both for the first few.
    for beta in b.morphisms().filter(|&beta| cc.is_regular(beta)).take(6) {
        let g = cc.decompose_gen(beta);
        match cc.decompose_free(beta) {
            Some(p) => println!("{beta}: free {p:?}, generated {g:?}"),
            None => println!("{beta}: generated {g:?}"),
        }
    }

    let laws = check_laws(&cc);
    let decompositions = check_decompositions(&cc);
    print!("{laws}{decompositions}");
    if !(laws.holds() && decompositions.holds()) {
        std::process::exit(1);
    }
}
