//! Seeded sampling: the empirical mean of `hₙ` at the walker's position is
//! the same at every level, as a martingale should be.

use bratteli::harmonic::{harmonic_from_terminal, martingale_trace};
use bratteli::rational::{int, ratio};
use bratteli::skew::pascal_diagram;

fn main() {
    let (d, walk) = pascal_diagram(10, ratio(1, 2)).unwrap();
    println!("sample path: {}", d.path_label(&walk.sample_path(7, 10)));
    let terminal: Vec<_> = (0..=10).map(|k| int((k as i64 - 5).pow(2))).collect();
    let h = harmonic_from_terminal(&walk, &terminal).unwrap();
    let trace = martingale_trace(&walk, &h, 42, 10_000);
    for (n, (m, s)) in trace.means.iter().zip(&trace.std_errors).enumerate() {
        println!("n={n:2}  mean {m:.4} ± {s:.4}");
    }
    println!(
        "exact {:.4}, worst deviation {:.2} sigma",
        trace.expected,
        trace.max_deviation_sigmas()
    );
}
