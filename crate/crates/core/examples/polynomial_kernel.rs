//! Kernel of the multiplication operator and its image under
//! differentiation for small N and k.

use thinfilm::polyker::{image_rank_check, kernel_basis};

fn main() {
    let basis = kernel_basis(2, 2).unwrap();
    for q in &basis {
        println!("Q(m={:?}, i={}, j={}) has {} terms", q.m, q.i, q.j, q.tensor.terms().len());
    }
    println!("{:>2} {:>2} {:>7} {:>10} {:>6} {:>7}", "N", "k", "kernel", "image rank", "dim P", "dim P0");
    for n in 2..=4 {
        for k in 1..=5 {
            let r = image_rank_check(n, k).unwrap();
            println!("{n:>2} {k:>2} {:>7} {:>10} {:>6} {:>7}", r.kernel_size, r.image_rank, r.dim_p, r.dim_p0);
        }
    }
}
