//! The Pascal walk: the cotransition is `(1 − k/n, k/n)` whatever `t` is, so
//! every path to `(n, k)` has `q = 1/C(n,k)` and the Radon–Nikodym cocycle
//! is identically 1.

use bratteli::diagram::enumerate_paths;
use bratteli::rational::{binomial, format_rational, ratio};
use bratteli::skew::{pascal_diagram, pascal_path};

fn main() {
    let depth = 6;
    for t in [ratio(1, 5), ratio(1, 2), ratio(7, 10)] {
        let (d, walk) = pascal_diagram(depth, t.clone()).unwrap();
        let q: Vec<String> = (0..d.level(depth).edge_count())
            .map(|e| format_rational(walk.cotransition().get(depth, e)))
            .collect();
        println!("t = {}: q_{depth} = [{}]", format_rational(&t), q.join(", "));
    }

    let (d, walk) = pascal_diagram(depth, ratio(1, 3)).unwrap();
    for a in enumerate_paths(&d, 0, depth).unwrap().iter().take(8) {
        let k = a.range();
        let q = walk.path_cotransition(a).unwrap();
        assert_eq!(q, binomial(depth as u64, k as u64).recip());
        println!("{}  k={k}  q={}", d.path_label(a), format_rational(&q));
    }

    let a = pascal_path(&d, &[1, 1, 0, 0, 1, 0]).unwrap();
    let b = pascal_path(&d, &[0, 0, 1, 1, 1, 0]).unwrap();
    println!("D(a, b) = {}", format_rational(&walk.radon_nikodym(&a, &b).unwrap()));
}
