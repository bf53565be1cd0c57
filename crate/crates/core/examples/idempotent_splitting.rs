//! `L` and `R` on the walking split idempotent: a diagram on `B` is
//! determined by its restriction to `A`, and `R L F ≅ F`.
//!
//!     cargo run --example idempotent_splitting

use std::sync::Arc;

use finmorita::conjugation::ConjugateCategory;
use finmorita::format::{parse_diagram, write_diagram};
use finmorita::morita::Context;
use finmorita::pairs::gen_idem;
use finmorita::qlinalg::is_isomorphism;

// Morphism 1 is `i`, 2 is `i*` and 4 is `i ∘ i*`; F(i*) is injective, so
// F(1) is the retract of a 3-dimensional space onto its 2-dimensional image.
const F: &str = "\
diagram F over idem.B
space 0 2
space 1 3
matrix 1 2 3
1 0 0
-2 1 0
matrix 2 3 2
1 0
2 1
0 -1
matrix 4 3 3
1 0 0
0 1 0
2 -1 0
end
";

fn main() {
    let ctx = Context::new(ConjugateCategory::build(&gen_idem()).unwrap());
    let labels: Vec<_> = ctx.b().morphisms().collect();
    let f = parse_diagram(F).unwrap().into_diagram(ctx.b(), &labels).unwrap();
    assert!(f.is_functor());

    let lf = ctx.apply_l(&f).unwrap();
    let a_labels = ctx.conjugate().a_to_u().to_vec();
    print!("{}", write_diagram(&lf, "LF", &a_labels));

    let rlf = ctx.apply_r(&lf).unwrap();
    println!("dims F = {:?}, L F = {:?}, R L F = {:?}", f.dims(), lf.dims(), rlf.dims());

    let unit = ctx.unit(&f).unwrap();
    for (x, c) in unit.components().iter().enumerate() {
        println!("unit at {x}: {}x{} isomorphism={}", c.rows(), c.cols(), is_isomorphism(c));
    }

    let g = Arc::new(lf);
    let counit = ctx.counit(&g).unwrap();
    let iso = counit.components().iter().all(is_isomorphism);
    println!("counit at L F is an isomorphism: {iso}");
}
