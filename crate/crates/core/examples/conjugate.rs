//! Builds the conjugate category `B` of a factorization and prints every
//! morphism of `B` as a threefold factorization `img ∘ mid ∘ cok*`.
//!
//!     cargo run --example conjugate -- [gamma|sigma|idem|poset] [n]

use finmorita::conjugation::{check_conjugation, ConjugateCategory};
use finmorita::format::write_factorization;
use finmorita::pairs::{gen_gamma, gen_idem, gen_poset, gen_sigma};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.get(1).map_or(2, |s| s.parse().expect("numeric n"));
    let f = match args.first().map_or("gamma", String::as_str) {
        "gamma" => gen_gamma(n).unwrap(),
        "sigma" => gen_sigma(n).unwrap(),
        "idem" => gen_idem(),
        "poset" => gen_poset("a<b, a<c").unwrap(),
        other => panic!("unknown example {other}"),
    };
    if std::env::var("SHOW_INPUT").is_ok() {
        print!("{}", write_factorization(&f));
    }

    // The structural checks come first; building B assumes they hold.
    let report = check_conjugation(&f);
    print!("{report}");
    if !report.holds() {
        std::process::exit(1);
    }

    let cc = ConjugateCategory::build(&f).unwrap();
    let (u, b) = (cc.u(), cc.b());
    println!(
        "U has {} objects and {} morphisms; B has {} morphisms",
        u.object_count(),
        u.morphism_count(),
        b.morphism_count()
    );
    for sk in cc.indexing().skeleta() {
        println!("sk(I/{}) has {} elements", sk.target, sk.len());
    }
    for beta in b.morphisms() {
        let t = cc.threefold_factorize(beta);
        let kind = if cc.is_regular(beta) { "regular" } else { "singular" };
        println!("{beta}: {} -> {} = {t} {kind}", b.dom(beta), b.cod(beta));
    }
}
