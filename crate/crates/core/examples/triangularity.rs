//! The unit `F → R L F` on free functors, written in the bases indexed by
//! `sk(I↓a)`: identity blocks on the diagonal and nothing above it.
//!
//!     cargo run --example triangularity -- [n] [dim]

use finmorita::conjugation::ConjugateCategory;
use finmorita::morita::Context;
use finmorita::pairs::gen_gamma;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let n = args.first().copied().unwrap_or(2);
    let dim = args.get(1).copied().unwrap_or(1);
    let ctx = Context::new(ConjugateCategory::build(&gen_gamma(n).unwrap()).unwrap());

    for b in ctx.b().objects() {
        let t = ctx.unit_triangularity(b, dim);
        for block in &t.objects {
            println!(
                "b={b} a={} skeleton={:?} order={:?} holds={}",
                block.object,
                block.skeleton,
                block.order,
                block.holds()
            );
            if block.skeleton.len() > 1 {
                for r in 0..block.matrix.rows() {
                    let row: Vec<String> = block.matrix.row(r).iter().map(|v| format!("{v:>3}")).collect();
                    println!("  {}", row.join(" "));
                }
            }
        }
    }
}
